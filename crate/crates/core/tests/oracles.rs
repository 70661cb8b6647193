//! Brute-force oracles that avoid the shortcuts used by the library.

use std::f64::consts::TAU;

use toric_period::characters::cache::{deserialize, serialize};
use toric_period::characters::{enumerate_characters, CharConstraints};
use toric_period::padic::FieldDescriptor;
use toric_period::period::torus::torus_points;
use toric_period::period::{
    period_integral, unit_residues, EmbeddingSpec, IntegralOptions, TestVectorSpec,
};
use toric_period::quadext::{Mat2, QuadExtDescriptor};
use toric_period::verify::sweep_configs;

/// `g ∈ J` iff `ι(l)^{-1} g ∈ K_A(n)` for some `l` among `ε` or `ε√D′`,
/// `ε` running over units of `O_L` modulo `p^n`.
#[test]
fn j_membership_matches_exhaustive_search() {
    let configs = sweep_configs(3, &[4], None).unwrap();
    let data = &configs.iter().find(|c| c.label.d == -3).unwrap().data;
    let f = data.l.base();
    let n = data.n;
    let modulus = 3i64.pow(n);
    let mut lifts = Vec::new();
    for x in 0..modulus {
        for y in 0..modulus {
            if x % 3 != 0 {
                lifts.push(data.l.elem(f.int(x), f.int(y)));
            }
        }
    }
    let root = data.sqrt_d_prime();
    let pi = data.embed_l(&root).unwrap();
    let in_j = |g: &Mat2, odd: bool| {
        lifts.iter().any(|eps| {
            let l = if odd { *eps * root } else { *eps };
            let k = data.embed_l(&l.inv().unwrap()).unwrap() * *g;
            data.lattice.in_congruence_subgroup(&k, n as i64).unwrap()
        })
    };
    let (mut members, mut total) = (0, 0);
    for a in 0..modulus {
        for b in 0..modulus {
            for c in 0..modulus {
                for d in 0..modulus {
                    let h = Mat2::new(f.int(a), f.int(b), f.int(c), f.int(d));
                    if h.det().valuation() != Some(0) {
                        continue;
                    }
                    for (g, odd) in [(h, false), (pi * h, true)] {
                        let expect = in_j(&g, odd);
                        let got = data.decompose_j(&g).unwrap();
                        assert_eq!(got.is_some(), expect, "g = {g:?}");
                        if let Some(dec) = got {
                            members += 1;
                            assert_eq!(data.embed_l(&dec.l).unwrap() * dec.k, g);
                            assert!(data
                                .lattice
                                .in_congruence_subgroup(&dec.k, n as i64)
                                .unwrap());
                        }
                        total += 1;
                    }
                }
            }
        }
    }
    assert!(members > 0 && members < total);
}

/// Floating-point torus sum two levels past the certified one.
#[test]
fn period_integrals_agree_with_a_float_sum_at_a_finer_level() {
    let configs = sweep_configs(3, &[2, 4], None).unwrap();
    let opts = IntegralOptions::default();
    let mut nonzero = 0;
    for cfg in &configs {
        let e = cfg.chi.field();
        let f = e.base();
        let emb = EmbeddingSpec::standard(e);
        for v in unit_residues(3, cfg.data.n.div_ceil(2)) {
            let phi = TestVectorSpec::test_vector(f.zero(), f.int(v as i64));
            let exact = period_integral(&cfg.data, &cfg.chi, &phi, &phi, &emb, &opts).unwrap();
            let m = exact.certificate.m + 2;
            let g = phi.terms[0].1;
            let (mut re, mut im) = (0.0, 0.0);
            for pt in torus_points(e, m).unwrap() {
                let t = emb.embed(&pt.t);
                if let Some(a) = cfg.data.phi_angle(&(g.inv().unwrap() * t * g)).unwrap() {
                    let turn = (a + cfg.chi.eval(&pt.t).unwrap()).to_f64() * TAU;
                    re += turn.cos();
                    im += turn.sin();
                }
            }
            let w = 3f64.powi(m as i32);
            let (er, ei) = exact.value.approx();
            assert!(
                (re / w - er).abs() < 1e-9 && (im / w - ei).abs() < 1e-9,
                "{:?}",
                cfg.label
            );
            if !exact.value.is_zero() {
                nonzero += 1;
            }
        }
    }
    assert!(nonzero > 0);
}

#[test]
fn character_tables_survive_a_serialization_round_trip() {
    for d in [3, -3] {
        let base = FieldDescriptor::new(3, 14).unwrap();
        let e = QuadExtDescriptor::new(base, d).unwrap();
        let chars = enumerate_characters(e, 4, &CharConstraints::default()).unwrap();
        assert!(!chars.is_empty());
        for chi in &chars {
            let text = serialize(chi);
            let back = deserialize(&text, base).unwrap();
            assert_eq!(serialize(&back), text);
            for (a, b) in [(1, 1), (2, 5), (-1, 3), (4, 0)] {
                let x = e.from_ints(a, b);
                assert_eq!(chi.eval(&x).unwrap(), back.eval(&x).unwrap());
            }
            assert_eq!(
                chi.eval(&e.sqrt_d()).unwrap(),
                back.eval(&e.sqrt_d()).unwrap()
            );
        }
    }
}

#[test]
fn malformed_tables_are_rejected() {
    let base = FieldDescriptor::new(3, 14).unwrap();
    for text in [
        "",
        "NOT-A-TABLE v1\n",
        "TORIC-CHARTABLE v9\np 3\n",
        "TORIC-CHARTABLE v1\np 5\nD 5\nlevel 1\nunif 0\n",
    ] {
        assert!(deserialize(text, base).is_err(), "{text:?}");
    }
}
