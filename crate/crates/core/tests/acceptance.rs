//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use toric_period::characters::cache::serialize;
use toric_period::characters::{alpha_of_char, MultChar};
use toric_period::cyclo::{CycloNumber, RationalAngle};
use toric_period::induction::data::default_precision;
use toric_period::induction::SupercuspidalData;
use toric_period::period::{
    phase_factor, IntegralOptions, NewformBranch, NewformReport, TwistInfo,
};
use toric_period::quadext::QuadExtDescriptor;
use toric_period::sylvester::{
    beta3_newform, build_theta3, chi3_from_table, local_field, verify_twist_lemma,
};
use toric_period::verify::{
    cross_suite, diagonal_suite, expansion_suite, newform_records, support_suite, sweep_configs,
    Config, ConfigLabel, SuiteReport,
};
use toric_period::Result;

const PRIMES: [u64; 2] = [3, 5];
const CONDUCTORS: [u32; 2] = [2, 4];

struct Sweep {
    configs: Vec<Config>,
    diagonal: SuiteReport,
    records: Vec<(ConfigLabel, NewformReport)>,
}

fn sweep(p: u64, precision: Option<u32>, opts: &IntegralOptions) -> Result<Sweep> {
    let configs = sweep_configs(p, &CONDUCTORS, precision)?;
    let diagonal = diagonal_suite(&configs, opts)?;
    let records = newform_records(&configs, opts)?;
    Ok(Sweep {
        configs,
        diagonal,
        records,
    })
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn criterion_1(opts: &IntegralOptions) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, beta, ratio) in [
        (7, rational(1, 1), 2),
        (43, rational(1, 1), 2),
        (13, rational(1, 2), 4),
        (31, rational(1, 2), 4),
    ] {
        let t = Instant::now();
        let r = beta3_newform(p, default_precision(4), opts)?;
        let good = r.beta == beta
            && r.beta_standard == r.beta_conjugated
            && r.conjugation_ok
            && r.admissible_ratio == rational(ratio, 1)
            && t.elapsed().as_secs() < 60;
        ok &= good;
        parts.push(format!("p={p}: β={} ratio={}", r.beta, r.admissible_ratio));
    }
    Ok(outcome(ok, parts.join(", ")))
}

fn criterion_2(sweeps: &[Sweep]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in sweeps {
        let kinds: BTreeSet<&str> = s.diagonal.entries.iter().map(|e| e.kind.as_str()).collect();
        ok &= s.diagonal.ok() && kinds.contains("trivial-twist") && kinds.contains("level-even");
        parts.push(format!(
            "p={}: {}/{}",
            s.configs[0].label.p,
            s.diagonal.passed,
            s.diagonal.entries.len()
        ));
    }
    outcome(ok, parts.join(", "))
}

/// `(q−1)^{-1} q^{1−⌈n/2⌉} q^{−⌊l/2⌋} (1 + γ)²`, computed here from scratch.
fn closed_form(p: u64, n: u32, l: u32, gamma: &CycloNumber) -> CycloNumber {
    let q = BigInt::from(p);
    let den = (&q - 1) * q.pow(n.div_ceil(2) - 1) * q.pow(l / 2);
    let one_plus = CycloNumber::one() + gamma.clone();
    (one_plus.clone() * one_plus).scale(&BigRational::new(1.into(), den))
}

fn criterion_3(sweeps: &[Sweep]) -> Result<Outcome> {
    let (mut phase, mut phase_ok, mut zero, mut zero_ok) = (0, 0, 0, 0);
    let mut gammas = BTreeSet::new();
    for s in sweeps {
        for (cfg, (_, r)) in s.configs.iter().zip(&s.records) {
            let chi = if r.conjugated {
                cfg.chi.bar_conjugate()
            } else {
                cfg.chi.clone()
            };
            let tw = TwistInfo::new(&cfg.data, &chi)?;
            let Some(l) = tw
                .l()
                .filter(|l| *l > 0 && *l <= cfg.data.n && (cfg.data.n - l) % 2 == 0)
            else {
                continue;
            };
            match r.branch {
                NewformBranch::Phase => {
                    phase += 1;
                    let e = chi.field();
                    let angle = cfg.data.theta.product(&chi)?.eval(&e.sqrt_d())?;
                    let gamma = CycloNumber::from_angle(angle);
                    let expect = closed_form(cfg.label.p, cfg.data.n, l, &gamma);
                    let ph = phase_factor(&cfg.data, &chi)?;
                    let sign = angle == RationalAngle::ZERO || angle == RationalAngle::half();
                    gammas.insert(format!("{gamma}"));
                    if r.direct.value == expect
                        && r.double_sum == expect
                        && ph.direct == gamma
                        && sign
                    {
                        phase_ok += 1;
                    }
                }
                NewformBranch::NoTestVector => {
                    zero += 1;
                    if r.direct.value.is_zero() && r.double_sum.is_zero() {
                        zero_ok += 1;
                    }
                }
                _ => {}
            }
        }
    }
    let ok = phase > 0 && phase == phase_ok && zero == zero_ok;
    let gammas: Vec<_> = gammas.into_iter().collect();
    Ok(outcome(
        ok,
        format!(
            "phase branch {phase_ok}/{phase} (γ ∈ {{{}}}), no test vector {zero_ok}/{zero} equal 0",
            gammas.join(", ")
        ),
    ))
}

fn criterion_4(all: &[Config], opts: &IntegralOptions) -> Result<(Outcome, SuiteReport)> {
    let r = expansion_suite(all, 20, 0, opts)?;
    Ok((
        outcome(
            r.ok() && r.entries.len() == 20,
            format!("{}/{}", r.passed, r.entries.len()),
        ),
        r,
    ))
}

fn criterion_5(sweeps: &[Sweep]) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut total = 0;
    for s in sweeps {
        let r = support_suite(&s.configs)?;
        total += r.entries.len();
        ok &= r.failed == 0;
        parts.push(format!(
            "p={}: {}/{}",
            s.configs[0].label.p,
            r.passed,
            r.entries.len()
        ));
    }
    Ok(outcome(ok && total > 0, parts.join(", ")))
}

fn criterion_6(sweeps: &[Sweep]) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in sweeps {
        let r = cross_suite(&s.records)?;
        ok &= r.ok();
        parts.push(format!(
            "p={}: {}/{}",
            s.configs[0].label.p,
            r.passed,
            r.entries.len()
        ));
    }
    Ok(outcome(ok, parts.join(", ")))
}

fn criterion_7(sweeps: &[Sweep]) -> Result<Outcome> {
    let e = local_field(default_precision(4))?;
    let t = build_theta3(e)?;
    let mut chars: Vec<MultChar<QuadExtDescriptor>> = vec![t.big_theta.clone(), t.theta.clone()];
    for m in [4, 7] {
        let chi = chi3_from_table(e, m)?;
        chars.push(t.theta.product(&chi.bar_conjugate())?);
        chars.push(chi);
    }
    for s in sweeps {
        for cfg in &s.configs {
            chars.push(cfg.chi.clone());
            chars.push(cfg.data.theta.clone());
        }
    }
    let mut seen = BTreeSet::new();
    let (mut checked, mut held) = (0, 0);
    for ch in &chars {
        if ch.conductor() < 2 || !seen.insert(serialize(ch)) {
            continue;
        }
        checked += 1;
        if alpha_of_char(ch)?.check_identity(ch)? {
            held += 1;
        }
    }
    // e(3/4) = −i and √−3 = 1 + 2ζ₃
    let minus_i = CycloNumber::from_angle(RationalAngle::new(3, 4));
    let sqrt_minus_3 = CycloNumber::one()
        + CycloNumber::from_angle(RationalAngle::new(1, 3)).scale(&rational(2, 1));
    let tau = -sqrt_minus_3;
    let lambda_ok = t.lambda == minus_i;
    let tau_ok = t.gauss_sum == tau;
    let l4 = verify_twist_lemma(e, 4)?;
    let l7 = verify_twist_lemma(e, 7)?;
    let ok = checked > 0
        && held == checked
        && lambda_ok
        && tau_ok
        && l4.holds
        && l7.holds
        && t.alpha_matches;
    Ok(outcome(
        ok,
        format!(
            "α identity {held}/{checked}, λ = −i: {lambda_ok}, τ = −i√3: {tau_ok}, p≡4: c = {}, p≡7: trivial = {}",
            l4.twist_conductor, l7.twist_trivial
        ),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let e = local_field(default_precision(4))?;
    let f = e.base();
    let t = build_theta3(e)?;
    let data = SupercuspidalData::classify_with_alpha(&t.theta, Some(t.alpha))?;
    let w = |u: i64, v: i64| {
        data.whittaker(&(f.int(u) * f.uniformizer_pow(v)))
            .map(|x| x.value)
    };
    let base = w(1, -2)?;
    let mut ok = !base.is_zero() && data.c_theta == 4 && data.e() == 2;
    let inv = base.abs_squared()?;
    // W(a)·conj(W(1·ϖ^{-2})) / |W(ϖ^{-2})|² = 1 on the coset
    for u in [4, 7, 10, 13, 22, 25, -2, -5] {
        let ratio = (w(u, -2)? * base.conj()).scale(&(BigRational::from_integer(1.into()) / &inv));
        ok &= ratio == CycloNumber::one();
    }
    let outside = [
        (2, -2),
        (5, -2),
        (8, -2),
        (1, -1),
        (2, -1),
        (1, 0),
        (1, -3),
        (2, -3),
        (1, 1),
        (1, -4),
    ];
    let mut zeros = 0;
    for (u, v) in outside {
        if w(u, v)?.is_zero() {
            zeros += 1;
        }
    }
    ok &= zeros == outside.len();
    Ok(outcome(
        ok,
        format!(
            "W(ϖ⁻²) = {base}, 8 coset points equal, {zeros}/{} outside zero",
            outside.len()
        ),
    ))
}

fn criterion_9(
    sweeps: &[Sweep],
    expansion: &SuiteReport,
    base_p3: &Sweep,
    opts: &IntegralOptions,
) -> Result<Outcome> {
    let mut values = 0;
    let mut certified = 0;
    let mut tally = |cert: Option<&toric_period::period::Certificate>| {
        values += 1;
        if cert.is_some_and(|c| c.m_plus_one_equal) {
            certified += 1;
        }
    };
    for s in sweeps {
        for e in s
            .diagonal
            .entries
            .iter()
            .filter(|e| e.kind != "out-of-range")
        {
            tally(e.certificate.as_ref());
        }
        for (_, r) in &s.records {
            tally(Some(&r.direct.certificate));
        }
    }
    for e in &expansion.entries {
        tally(e.certificate.as_ref());
    }
    let mut stable = true;
    let mut syl_certified = true;
    for p in [7, 13] {
        let lo = beta3_newform(p, default_precision(4), opts)?;
        let hi = beta3_newform(p, default_precision(4) + 4, opts)?;
        syl_certified &=
            lo.certificate.m_plus_one_equal && lo.conjugated_certificate.m_plus_one_equal;
        stable &= lo.beta_standard == hi.beta_standard && lo.beta_conjugated == hi.beta_conjugated;
    }
    // p = 3 sweep, each conductor at its default precision plus 4
    let mut raised_entries = Vec::new();
    let mut raised_records = Vec::new();
    for c in CONDUCTORS {
        let s = sweep_configs(3, &[c], Some(default_precision(c) + 4))?;
        raised_entries.extend(diagonal_suite(&s, opts)?.entries);
        raised_records.extend(newform_records(&s, opts)?);
    }
    let raised = SuiteReport::new("raised", raised_entries);
    let same_diag = raised.entries.len() == base_p3.diagonal.entries.len()
        && raised
            .entries
            .iter()
            .zip(&base_p3.diagonal.entries)
            .all(|(a, b)| a.label == b.label && a.computed == b.computed);
    raised_records.sort_by(|a, b| a.0.cmp(&b.0));
    let mut base_records: Vec<_> = base_p3.records.iter().collect();
    base_records.sort_by(|a, b| a.0.cmp(&b.0));
    let same_newform = raised_records.len() == base_records.len()
        && raised_records
            .iter()
            .zip(&base_records)
            .all(|(a, b)| a.0 == b.0 && a.1.direct.value == b.1.direct.value);
    stable &= same_diag && same_newform;
    let ok = values > 0 && certified == values && syl_certified && stable;
    Ok(outcome(
        ok,
        format!(
            "{certified}/{values} certified, K+4: p=3 diagonal {same_diag}, p=3 newform {same_newform}, Sylvester p=7,13 {}",
            syl_certified
        ),
    ))
}

fn main() {
    let opts = IntegralOptions::default();
    let started = Instant::now();
    let mut results: Vec<(usize, &str, Result<Outcome>)> = Vec::new();

    results.push((
        1,
        "Sylvester values and admissible ratios",
        criterion_1(&opts),
    ));
    let sweeps: Result<Vec<Sweep>> = PRIMES.iter().map(|&p| sweep(p, None, &opts)).collect();
    match sweeps {
        Ok(sweeps) => {
            results.push((
                2,
                "minimal-vector diagonal values",
                Ok(criterion_2(&sweeps)),
            ));
            results.push((
                3,
                "newform closed form and phase factor",
                criterion_3(&sweeps),
            ));
            let all: Vec<Config> = sweeps
                .iter()
                .flat_map(|s| s.configs.iter().cloned())
                .collect();
            let expansion = criterion_4(&all, &opts);
            let expansion_report = expansion.as_ref().ok().map(|(_, r)| r.clone());
            results.push((
                4,
                "expansion identity on 20 samples",
                expansion.map(|(o, _)| o),
            ));
            results.push((5, "support of the integral", criterion_5(&sweeps)));
            results.push((6, "cross-term dichotomy", criterion_6(&sweeps)));
            results.push((7, "character infrastructure", criterion_7(&sweeps)));
            results.push((8, "Kirillov support", criterion_8()));
            let c9 = match &expansion_report {
                Some(r) => criterion_9(&sweeps, r, &sweeps[0], &opts),
                None => Ok(outcome(false, "expansion suite failed")),
            };
            results.push((9, "certificates and precision stability", c9));
        }
        Err(e) => {
            for (i, name) in (2..=7).zip([
                "diagonal",
                "newform",
                "expansion",
                "support",
                "cross terms",
                "characters",
            ]) {
                results.push((i, name, Ok(outcome(false, format!("sweep failed: {e}")))));
            }
            results.push((8, "Kirillov support", criterion_8()));
            results.push((
                9,
                "certificates and precision stability",
                Ok(outcome(false, format!("sweep failed: {e}"))),
            ));
        }
    }

    let mut failed = 0;
    for (i, name, r) in &results {
        let (ok, detail) = match r {
            Ok(o) => (o.ok, o.detail.clone()),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {i}: {} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} criteria passed in {:.0?}",
        results.len() - failed,
        results.len(),
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
