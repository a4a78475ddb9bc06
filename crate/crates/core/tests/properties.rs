//! Randomized property suite for the exact algebra and the extension
//! theorems. Everything here is checked with zero tolerance; a single
//! counterexample fails the build.

use framekit_core::{
    b2_three_term_criterion, b2_wavelet_mask, bspline_mask, compute_m_alpha_beta,
    condition_ii_holds, criterion_matches_condition_ii, extend_one_pair, extend_two_pairs,
    factor_cos, factor_sin, mask_from_time_coeffs, time_coeffs_from_mask, ExtensionError,
    GaussianRational, LaurentPoly, Mask, Rational, TimeCoeffs, Verdict,
};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-16i64..=16, 1i64..=16).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (rational(), rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((-6i64..=6, gaussian()), 0..6)
        .prop_map(LaurentPoly::from_coeffs)
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn add_commutes(a in poly(), b in poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn add_associates(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn additive_inverse(a in poly()) {
        prop_assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn mul_commutes(a in poly(), b in poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn mul_associates(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn mul_distributes(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn one_is_identity(a in poly()) {
        prop_assert_eq!(a.mul(&LaurentPoly::one()), a);
    }

    #[test]
    fn conj_is_involution(a in poly()) {
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn conj_is_ring_map(a in poly(), b in poly()) {
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        prop_assert_eq!(a.add(&b).conj(), a.conj().add(&b.conj()));
    }

    #[test]
    fn half_shift_is_involution(a in poly()) {
        prop_assert_eq!(a.half_shift().half_shift(), a);
    }

    #[test]
    fn half_shift_is_ring_map(a in poly(), b in poly()) {
        prop_assert_eq!(a.mul(&b).half_shift(), a.half_shift().mul(&b.half_shift()));
    }

    #[test]
    fn involutions_commute(a in poly()) {
        prop_assert_eq!(a.conj().half_shift(), a.half_shift().conj());
    }

    #[test]
    fn divide_inverts_multiply(a in poly(), d in nonzero_poly()) {
        let p = a.mul(&d);
        prop_assert_eq!(p.divide_exact(&d).unwrap(), a);
    }

    #[test]
    fn divide_detects_remainders(a in poly(), d in nonzero_poly()) {
        // either division succeeds and multiplies back, or it reports
        // non-divisibility; no silent truncation
        match a.divide_exact(&d) {
            Ok(q) => prop_assert_eq!(q.mul(&d), a),
            Err(e) => prop_assert_eq!(e, framekit_core::AlgebraError::NotDivisible),
        }
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(), b in nonzero_poly()) {
        let g = a.gcd(&b).unwrap();
        prop_assert!(a.divide_exact(&g).is_ok());
        prop_assert!(b.divide_exact(&g).is_ok());
    }

    #[test]
    fn gcd_of_common_multiple(a in nonzero_poly(), m in nonzero_poly()) {
        // m divides gcd(a m, m) up to a unit
        let g = a.mul(&m).gcd(&m).unwrap();
        prop_assert!(g.divide_exact(&m.normalized()).is_ok());
    }

    #[test]
    fn eval_float_is_multiplicative(a in poly(), b in poly(), g in 0u32..1024) {
        let gamma = g as f64 / 1024.0;
        let lhs = a.mul(&b).eval_float(gamma);
        let rhs = a.eval_float(gamma) * b.eval_float(gamma);
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn factor_sin_multiplies_back(a in poly()) {
        let f = Mask::new("f", LaurentPoly::esin().mul(&a));
        let q = factor_sin(&f).unwrap();
        prop_assert_eq!(LaurentPoly::esin().mul(&q), f.poly);
    }

    #[test]
    fn factor_cos_multiplies_back(a in poly()) {
        let g = Mask::new("g", LaurentPoly::ecos().mul(&a));
        let q = factor_cos(&g).unwrap();
        prop_assert_eq!(LaurentPoly::ecos().mul(&q), g.poly);
    }

    #[test]
    fn time_coeff_round_trip(pairs in proptest::collection::vec((-8i64..=8, gaussian()), 0..6)) {
        let c = TimeCoeffs::from_pairs(pairs);
        prop_assert_eq!(time_coeffs_from_mask(&mask_from_time_coeffs(&c)), c);
    }

    #[test]
    fn serde_round_trips(a in poly()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// The closed-form three-term criterion and the condition-(II) test
    /// must agree on every induced hat-function system.
    #[test]
    fn criterion_equivalence(
        d0 in gaussian(), d1 in gaussian(), dt0 in gaussian(), dt1 in gaussian()
    ) {
        prop_assert!(criterion_matches_condition_ii(&d0, &d1, &dt0, &dt1));
    }

    /// Two-pair extension succeeds on the whole hat-function family, and
    /// single-pair extension succeeds exactly when the criterion says so.
    #[test]
    fn extension_theorems_on_hat_family(
        d0 in gaussian(), d1 in gaussian(), dt0 in gaussian(), dt1 in gaussian()
    ) {
        let b2 = bspline_mask(2, false).unwrap();
        let m1 = b2_wavelet_mask(&d0, &d1);
        let mt1 = b2_wavelet_mask(&dt0, &dt1);

        let two = extend_two_pairs(&b2, &b2, &m1, &mt1).unwrap();
        prop_assert_eq!(two.report.verdict, Verdict::DualFrames);

        let (ma, mb) = compute_m_alpha_beta(&b2, &b2, &m1, &mt1);
        let (crit, _) = b2_three_term_criterion(&d0, &d1, &dt0, &dt1);
        prop_assert_eq!(condition_ii_holds(&ma, &mb), crit);
        match extend_one_pair(&b2, &b2, &m1, &mt1) {
            Ok(out) => {
                prop_assert!(crit || out.artifacts.degenerate_zero);
                prop_assert_eq!(out.report.verdict, Verdict::DualFrames);
            }
            Err(ExtensionError::ConditionIIFails) => prop_assert!(!crit),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}
