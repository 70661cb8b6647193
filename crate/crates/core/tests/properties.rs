use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use toric_period::characters::{enumerate_characters, CharConstraints, MultChar};
use toric_period::cyclo::{CycloNumber, RationalAngle};
use toric_period::induction::JDecomposition;
use toric_period::padic::FieldDescriptor;
use toric_period::period::{bar_symmetry_check, IntegralOptions};
use toric_period::quadext::{Mat2, QuadExtDescriptor};
use toric_period::verify::{sweep_configs, Config};

fn angle() -> impl Strategy<Value = RationalAngle> {
    (
        prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 9, 12, 27]),
        any::<i32>(),
    )
        .prop_map(|(d, n)| RationalAngle::new(n as i128, d))
}

fn cyclo() -> impl Strategy<Value = CycloNumber> {
    prop::collection::vec((angle(), -5i64..5, 1i64..4), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(CycloNumber::zero(), |acc, (a, n, d)| {
                acc + CycloNumber::from_angle(a)
                    .scale(&BigRational::new(BigInt::from(n), BigInt::from(d)))
            })
    })
}

static E3: LazyLock<QuadExtDescriptor> =
    LazyLock::new(|| QuadExtDescriptor::new(FieldDescriptor::new(3, 14).unwrap(), -3).unwrap());

static CHARS: LazyLock<Vec<MultChar<QuadExtDescriptor>>> =
    LazyLock::new(|| enumerate_characters(*E3, 4, &CharConstraints::default()).unwrap());

static CONFIGS: LazyLock<Vec<Config>> = LazyLock::new(|| sweep_configs(3, &[2, 4], None).unwrap());

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_laws(a in cyclo(), b in cyclo(), c in cyclo()) {
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(a.clone() + (-a.clone()), CycloNumber::zero());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
        let ab = a.clone() * b.clone();
        prop_assert_eq!(ab.clone() * ab.conj(), (a.clone() * a.conj()) * (b.clone() * b.conj()));
    }

    #[test]
    fn roots_of_unity_multiply_by_adding_angles(x in angle(), y in angle()) {
        prop_assert_eq!(CycloNumber::from_angle(x) * CycloNumber::from_angle(y), CycloNumber::from_angle(x + y));
        prop_assert_eq!(CycloNumber::from_angle(x).conj(), CycloNumber::from_angle(-x));
        prop_assert_eq!(CycloNumber::from_angle(x).as_root_of_unity().unwrap(), x);
        prop_assert_eq!(CycloNumber::from_angle(x).abs_squared().unwrap(), BigRational::from_integer(1.into()));
        let (re, im) = CycloNumber::from_angle(x).approx();
        prop_assert!((re * re + im * im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn valuations_add_and_units_invert(a in 1i64..100_000, b in 1i64..100_000, p in prop::sample::select(vec![3u64, 5, 7])) {
        let f = FieldDescriptor::new(p, 20).unwrap();
        let (x, y) = (f.int(a), f.int(b));
        prop_assert_eq!((x * y).valuation().unwrap(), x.valuation().unwrap() + y.valuation().unwrap());
        prop_assert_eq!(x * x.inv().unwrap(), f.one());
        prop_assert_eq!(f.rational(a, b).unwrap() * f.int(b), f.int(a));
    }

    #[test]
    fn characters_are_multiplicative(i in 0usize..1000, a in -40i64..40, b in -40i64..40, c in -40i64..40, d in -40i64..40) {
        prop_assume!(a % 3 != 0 && c % 3 != 0);
        let chi = &CHARS[i % CHARS.len()];
        let e = *E3;
        let (x, y) = (e.from_ints(a, b), e.from_ints(c, d));
        prop_assert_eq!(chi.eval(&(x * y)).unwrap(), chi.eval(&x).unwrap() + chi.eval(&y).unwrap());
        prop_assert_eq!(chi.bar_conjugate().eval(&x).unwrap(), chi.eval(&x.conj()).unwrap());
        let r = e.sqrt_d();
        prop_assert_eq!(chi.eval(&(x * r)).unwrap(), chi.eval(&x).unwrap() + chi.eval(&r).unwrap());
    }

    /// `g = ι(l)k` is recognised, and `θ̃` does not depend on the factorisation.
    #[test]
    fn theta_tilde_is_well_defined(
        i in 0usize..1000,
        x in 1i64..200, y in -200i64..200, twist in any::<bool>(), shift in -3i64..3,
        k in prop::array::uniform4(-50i64..50),
    ) {
        prop_assume!(x % 3 != 0);
        let cfg = &CONFIGS[i % CONFIGS.len()];
        let data = &cfg.data;
        let f = data.l.base();
        let mut l = data.l.elem(f.int(x), f.int(y)).scale(f.uniformizer_pow(shift));
        if twist {
            l = l * data.sqrt_d_prime();
        }
        let t = data.lattice.thresholds(data.n as i64);
        let entry = |v: i64, r: usize, c: usize| f.int(v) * f.uniformizer_pow(t[r][c]);
        let kmat = Mat2::identity(f)
            + Mat2::new(entry(k[0], 0, 0), entry(k[1], 0, 1), entry(k[2], 1, 0), entry(k[3], 1, 1));
        prop_assume!(kmat.det().valuation() == Some(0));
        let g = data.embed_l(&l).unwrap() * kmat;
        let dec = data.decompose_j(&g).unwrap();
        prop_assert!(dec.is_some());
        let dec = dec.unwrap();
        let built = data.theta_tilde_of(&JDecomposition { l, k: kmat }).unwrap();
        prop_assert_eq!(data.theta_tilde_of(&dec).unwrap(), built);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugating_the_character_flips_the_test_vector(i in 0usize..1000) {
        let cfg = &CONFIGS[i % CONFIGS.len()];
        let r = bar_symmetry_check(&cfg.data, &cfg.chi, &IntegralOptions::default()).unwrap();
        prop_assert!(r.holds(), "{:?} {:?}", cfg.label, r);
    }
}
