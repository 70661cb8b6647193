//! Sweeps over `(θ, χ)` that compare every closed form with the direct
//! finite sums, producing serializable reports.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{enumerate_characters, CharConstraints, MultChar};
use crate::cyclo::CycloNumber;
use crate::error::Result;
use crate::induction::data::default_precision;
use crate::induction::SupercuspidalData;
use crate::padic::{legendre, FieldDescriptor};
use crate::period::newform::{newform_period, NewformBranch, NewformReport};
use crate::period::{
    cross_term_structure, period_integral, phase_factor, solve_with, support_of_integral,
    unit_residues, Certificate, EmbeddingSpec, IntegralOptions, TestVectorSpec, TwistInfo,
};
use crate::quadext::QuadExtDescriptor;
use crate::sylvester::{beta3_newform, local_field, verify_twist_lemma};

/// The two ramified extensions of `Q_p`: `D = p` and `D = pε` with `ε` a
/// non-residue (`−1` when possible).
pub fn ramified_discriminants(p: u64) -> Vec<i64> {
    let p = p as i64;
    let eps = if legendre(-1, p as u64) == -1 {
        -1
    } else {
        (2..p)
            .find(|k| legendre(*k, p as u64) == -1)
            .expect("p is an odd prime")
    };
    vec![p, p * eps]
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigLabel {
    pub p: u64,
    pub d: i64,
    pub c_theta: u32,
    pub theta: usize,
    pub chi: usize,
    pub c_chi: u32,
    pub c_twist: u32,
}

/// One `(θ, χ)` with `θ|_F = χ|_F = 1`, `E = L` ramified.
#[derive(Clone, Debug)]
pub struct Config {
    pub label: ConfigLabel,
    pub data: SupercuspidalData,
    pub chi: MultChar<QuadExtDescriptor>,
}

impl Config {
    pub fn twist(&self) -> Result<TwistInfo> {
        TwistInfo::new(&self.data, &self.chi)
    }
}

/// Enumerates the sweep for one prime.
pub fn sweep_configs(p: u64, conductors: &[u32], precision: Option<u32>) -> Result<Vec<Config>> {
    let mut out = Vec::new();
    for d in ramified_discriminants(p) {
        for &c in conductors {
            let k = precision.unwrap_or_else(|| default_precision(c));
            let e = QuadExtDescriptor::new(FieldDescriptor::new(p, k)?, d)?;
            let cons = CharConstraints {
                trivial_on_base: true,
                ..Default::default()
            };
            let chars = enumerate_characters(e, c, &cons)?;
            let thetas: Vec<_> = chars
                .iter()
                .enumerate()
                .filter(|(_, t)| t.conductor() == c)
                .collect();
            for (ti, theta) in thetas {
                let data = SupercuspidalData::classify(theta)?;
                for (ci, chi) in chars.iter().enumerate() {
                    let c_twist = TwistInfo::new(&data, chi)?.conductor;
                    let label = ConfigLabel {
                        p,
                        d,
                        c_theta: c,
                        theta: ti,
                        chi: ci,
                        c_chi: chi.conductor(),
                        c_twist,
                    };
                    out.push(Config {
                        label,
                        data: data.clone(),
                        chi: chi.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// One tested configuration.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub label: ConfigLabel,
    pub kind: String,
    pub computed: CycloNumber,
    pub predicted: Option<CycloNumber>,
    pub certificate: Option<Certificate>,
    pub ok: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub target: String,
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<Entry>,
}

impl SuiteReport {
    pub fn new(target: &str, mut entries: Vec<Entry>) -> SuiteReport {
        entries.sort_by(|a, b| a.label.cmp(&b.label).then(a.kind.cmp(&b.kind)));
        let passed = entries.iter().filter(|e| e.ok).count();
        SuiteReport {
            target: target.into(),
            passed,
            failed: entries.len() - passed,
            entries,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && !self.entries.is_empty()
    }

    pub fn of_kind(&self, kind: &str) -> impl Iterator<Item = &Entry> {
        let kind = kind.to_string();
        self.entries.iter().filter(move |e| e.kind == kind)
    }
}

fn diag_value(
    cfg: &Config,
    u: &crate::padic::PAdicScalar,
    v: u64,
    opts: &IntegralOptions,
) -> Result<(CycloNumber, Certificate)> {
    let f = cfg.data.l.base();
    let phi = TestVectorSpec::test_vector(*u, f.int(v as i64));
    let emb = EmbeddingSpec::standard(cfg.chi.field());
    let r = period_integral(&cfg.data, &cfg.chi, &phi, &phi, &emb, opts)?;
    Ok((r.value, r.certificate))
}

fn diagonal_entry(cfg: &Config, opts: &IntegralOptions) -> Result<Entry> {
    // {φ_v, φ_v}_χ = {φ_{−v}, φ_{−v}}_χ̄, so work with whichever of χ, χ̄
    // gives the smaller c(θχ̄); the sweep over v covers both signs
    let tw = cfg.twist()?;
    let tw_bar = TwistInfo::new(&cfg.data, &cfg.chi.bar_conjugate())?;
    let (owned, tw, via_bar) = if tw_bar.conductor < tw.conductor {
        (
            Config {
                chi: cfg.chi.bar_conjugate(),
                ..cfg.clone()
            },
            tw_bar,
            true,
        )
    } else {
        (cfg.clone(), tw, false)
    };
    let cfg = &owned;
    let data = &cfg.data;
    let f = data.l.base();
    let p = f.p();
    let k = data.n.div_ceil(2);
    let vs = unit_residues(p, k);
    let entry = |kind: &str, computed, predicted, cert, ok, note: String| Entry {
        label: cfg.label.clone(),
        kind: kind.into(),
        computed,
        predicted,
        certificate: cert,
        ok,
        note: if via_bar {
            format!("{note} (via χ̄)")
        } else {
            note
        },
    };
    if tw.conductor == 0 {
        let mut values = Vec::new();
        let mut cert = None;
        for v in &vs {
            let (val, c) = diag_value(cfg, &f.zero(), *v, opts)?;
            cert.get_or_insert(c);
            values.push(val);
        }
        let total = values
            .iter()
            .fold(CycloNumber::zero(), |a, b| a + b.clone());
        let twos = values
            .iter()
            .filter(|x| **x == CycloNumber::from_int(2))
            .count();
        let zeros = values.iter().filter(|x| x.is_zero()).count();
        return Ok(if tw.is_trivial() {
            let ok = twos == 1 && zeros == values.len() - 1;
            entry(
                "trivial-twist",
                total,
                Some(CycloNumber::from_int(2)),
                cert,
                ok,
                format!("{twos} value(s) 2, {zeros} zero"),
            )
        } else {
            let ok = zeros == values.len();
            entry(
                "unramified-twist",
                total,
                Some(CycloNumber::zero()),
                cert,
                ok,
                format!("{zeros} of {} zero", values.len()),
            )
        });
    }
    let Some(l) = tw.l().filter(|l| *l <= data.n) else {
        return Ok(entry(
            "out-of-range",
            CycloNumber::zero(),
            None,
            None,
            true,
            format!("c(θχ̄) = {}", tw.conductor),
        ));
    };
    let odd = (data.n - l) % 2 == 1;
    let us: Vec<u64> = if odd {
        (0..p.pow(k + 1)).collect()
    } else {
        vec![0]
    };
    let target = CycloNumber::from_rational(num_rational::BigRational::new(
        1.into(),
        num_bigint::BigInt::from(p).pow(l / 2),
    ));
    let mut ok = true;
    let mut total = CycloNumber::zero();
    let mut predicted = CycloNumber::zero();
    let mut n_sol = 0;
    let mut cert = None;
    for u in us {
        let us = f.int(u as i64);
        let sol = solve_with(data, &tw, &us)?.solutions;
        for v in &vs {
            let (val, c) = diag_value(cfg, &us, *v, opts)?;
            cert.get_or_insert(c);
            let expect = if sol.contains(v) {
                target.clone()
            } else {
                CycloNumber::zero()
            };
            if sol.contains(v) {
                n_sol += 1;
            }
            ok &= val == expect;
            predicted = predicted + expect;
            total = total + val;
        }
    }
    let kind = if odd { "level-odd" } else { "level-even" };
    Ok(entry(
        kind,
        total,
        Some(predicted),
        cert,
        ok,
        format!("l = {l}, {n_sol} solution(s)"),
    ))
}

/// Diagonal values `{φ_v, φ_v}` against the solver.
pub fn diagonal_suite(configs: &[Config], opts: &IntegralOptions) -> Result<SuiteReport> {
    let entries = configs
        .par_iter()
        .map(|c| diagonal_entry(c, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("sec24-diagonal", entries))
}

/// Newform periods with their pair matrices.
pub fn newform_records(
    configs: &[Config],
    opts: &IntegralOptions,
) -> Result<Vec<(ConfigLabel, NewformReport)>> {
    configs
        .par_iter()
        .map(|c| {
            let emb = EmbeddingSpec::standard(c.chi.field());
            Ok((
                c.label.clone(),
                newform_period(&c.data, &c.chi, &emb, opts)?,
            ))
        })
        .collect()
}

fn branch_kind(b: &NewformBranch) -> &'static str {
    match b {
        NewformBranch::SingleTerm => "single-term",
        NewformBranch::UnramifiedVanishing => "unramified-vanishing",
        NewformBranch::Phase => "phase",
        NewformBranch::NoTestVector => "no-test-vector",
        NewformBranch::Unpredicted(_) => "no-closed-form",
    }
}

/// Closed form, phase factor and expansion identity for each record.
pub fn newform_suite(
    configs: &[Config],
    records: &[(ConfigLabel, NewformReport)],
) -> Result<SuiteReport> {
    let entries = configs
        .par_iter()
        .zip(records.par_iter())
        .map(|(cfg, (label, r))| {
            let expansion = r.direct.value == r.double_sum;
            let mut note = match &r.branch {
                NewformBranch::Unpredicted(why) => why.clone(),
                _ => String::new(),
            };
            let mut ok = expansion && r.closed_form_holds().unwrap_or(true);
            if r.branch == NewformBranch::Phase {
                let chi = if r.conjugated {
                    cfg.chi.bar_conjugate()
                } else {
                    cfg.chi.clone()
                };
                let ph = phase_factor(&cfg.data, &chi)?;
                ok &= ph.holds();
                note = format!("γ = {}", ph.direct);
            }
            Ok(Entry {
                label: label.clone(),
                kind: branch_kind(&r.branch).into(),
                computed: r.direct.value.clone(),
                predicted: r.prediction.clone(),
                certificate: Some(r.direct.certificate),
                ok,
                note,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("prop-newform", entries))
}

/// Exactly one nonvanishing diagonal term: no cross terms, and the newform
/// period is `N^{-1}` times that term.
pub fn single_suite(records: &[(ConfigLabel, NewformReport)]) -> Result<SuiteReport> {
    let mut entries = Vec::new();
    for (label, r) in records {
        let n = r.pairs.xs.len();
        let nonzero: Vec<usize> = (0..n).filter(|&i| !r.pairs.get(i, i).is_zero()).collect();
        if nonzero.len() != 1 {
            continue;
        }
        let i = nonzero[0];
        let off_zero = (0..n).all(|a| (0..n).all(|b| a == b || r.pairs.get(a, b).is_zero()));
        let pre = num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(n));
        let predicted = r.pairs.get(i, i).scale(&pre);
        entries.push(Entry {
            label: label.clone(),
            kind: "single-diagonal".into(),
            computed: r.direct.value.clone(),
            ok: off_zero && predicted == r.direct.value,
            predicted: Some(predicted),
            certificate: Some(r.direct.certificate),
            note: format!("x = {}", r.pairs.xs[i]),
        });
    }
    Ok(SuiteReport::new("prop-single", entries))
}

/// Cross-term dichotomy on every pair matrix.
pub fn cross_suite(records: &[(ConfigLabel, NewformReport)]) -> Result<SuiteReport> {
    let entries = records
        .iter()
        .map(|(label, r)| {
            let s = cross_term_structure(&r.pairs)?;
            Ok(Entry {
                label: label.clone(),
                kind: "cross-terms".into(),
                computed: r.double_sum.clone(),
                predicted: None,
                certificate: Some(r.direct.certificate),
                ok: s.holds(),
                note: format!("{} nonvanishing diagonal", s.nonvanishing_diagonal),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("cross-terms", entries))
}

/// Direct integral of the expanded newform against the prefactored double
/// sum on `count` configurations drawn with a fixed seed.
pub fn expansion_suite(
    configs: &[Config],
    count: usize,
    seed: u64,
    opts: &IntegralOptions,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked: Vec<&Config> = configs.choose_multiple(&mut rng, count).collect();
    let records: Vec<Config> = picked.into_iter().cloned().collect();
    let recs = newform_records(&records, opts)?;
    let entries = recs
        .into_iter()
        .map(|(label, r)| Entry {
            label,
            kind: "expansion".into(),
            ok: r.direct.value == r.double_sum,
            computed: r.direct.value,
            predicted: Some(r.double_sum),
            certificate: Some(r.direct.certificate),
            note: String::new(),
        })
        .collect();
    Ok(SuiteReport::new("cor-expansion", entries))
}

/// Support of `{φ_v, φ_{v′}}` on the torus, for every configuration with
/// two exact roots.
pub fn support_suite(configs: &[Config]) -> Result<SuiteReport> {
    let entries = configs
        .par_iter()
        .filter_map(|cfg| {
            let run = || -> Result<Option<Entry>> {
                let (branch, _, conj) =
                    crate::period::newform::predict_newform(&cfg.data, &cfg.chi)?;
                if branch != NewformBranch::Phase {
                    return Ok(None);
                }
                let chi = if conj {
                    cfg.chi.bar_conjugate()
                } else {
                    cfg.chi.clone()
                };
                let s = support_of_integral(&cfg.data, &chi)?;
                Ok(Some(Entry {
                    label: cfg.label.clone(),
                    kind: "support".into(),
                    computed: CycloNumber::from_rational(s.volume.clone()),
                    predicted: Some(CycloNumber::from_rational(s.expected_volume.clone())),
                    certificate: None,
                    ok: s.holds(),
                    note: format!(
                        "level {}, {} coset(s), vv′D = D′: {}",
                        s.level,
                        s.scanned.len(),
                        s.product_relation
                    ),
                }))
            };
            run().transpose()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("lemma-support", entries))
}

/// `β⁰₃` and the admissible ratio for each prime, plus both residue classes
/// of the character lemma.
pub fn sylvester_suite(
    primes: &[u64],
    precision: Option<u32>,
    opts: &IntegralOptions,
) -> Result<SuiteReport> {
    let k = precision.unwrap_or_else(|| default_precision(crate::sylvester::CONDUCTOR));
    let mut entries = primes
        .par_iter()
        .map(|&p| {
            let r = beta3_newform(p, k, opts)?;
            let label = ConfigLabel {
                p,
                d: -3,
                c_theta: 4,
                theta: 0,
                chi: (p % 9) as usize,
                c_chi: 4,
                c_twist: 0,
            };
            Ok(Entry {
                label,
                kind: "beta".into(),
                computed: r.beta_standard.clone(),
                predicted: Some(CycloNumber::from_rational(r.expected_beta())),
                certificate: Some(r.certificate),
                ok: r.holds(),
                note: format!(
                    "branch {:?}, conjugated {}, ratio {}",
                    r.branch, r.beta_conjugated, r.admissible_ratio
                ),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let e = local_field(k)?;
    for m in [4u64, 7] {
        let r = verify_twist_lemma(e, m)?;
        let label = ConfigLabel {
            p: 3,
            d: -3,
            c_theta: 4,
            theta: 0,
            chi: m as usize,
            c_chi: 4,
            c_twist: r.twist_conductor,
        };
        entries.push(Entry {
            label,
            kind: "lemma".into(),
            computed: CycloNumber::from_int(r.twist_conductor as i64),
            predicted: Some(CycloNumber::from_int(if m == 7 { 0 } else { 2 })),
            certificate: None,
            ok: r.holds,
            note: format!("p ≡ {m} mod 9"),
        });
    }
    Ok(SuiteReport::new("sylvester", entries))
}
