//! Property-based invariants for the basis algebra, norms, generators, and
//! checkers.

use lorentz_poly::classes::{check_membership, sample, ClassTag};
use lorentz_poly::lorentz::{
    elevate, from_power, lorentz_degree, mul_lorentz, restrict_interval, LorentzDegreeResult,
    LorentzForm,
};
use lorentz_poly::norms::{integral_exact, lp_norm, sup_norm, Exponent};
use lorentz_poly::scalar::Scalar;
use lorentz_poly::verify::{run_checker, TheoremId, ALL_THEOREMS};
use lorentz_poly::{rat, rint, RatPoly, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(rational_strategy(), 1..=max_deg + 1).prop_filter_map(
        "nonzero polynomial",
        |coeffs| {
            let f = RatPoly::new(coeffs);
            (!f.is_zero()).then_some(f)
        },
    )
}

fn nonneg_form_strategy() -> impl Strategy<Value = LorentzForm> {
    prop::collection::vec((0i64..=5, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 1..=6)
        .prop_filter_map("nonzero form", |coeffs| {
            coeffs
                .iter()
                .any(|c| !c.is_zero())
                .then(|| LorentzForm::new(rint(-1), rint(1), coeffs))
        })
}

proptest! {
    #[test]
    fn round_trip_preserves_polynomial(f in poly_strategy(6), extra in 0usize..3) {
        let d = f.degree() + extra;
        let form = from_power(&f, d, &rint(-1), &rint(1)).unwrap();
        prop_assert_eq!(form.to_power(), f);
    }

    #[test]
    fn elevation_is_consistent_and_preserves_sign(form in nonneg_form_strategy(), up in 1usize..4) {
        let f = form.to_power();
        let elevated = elevate(&form, form.degree() + up).unwrap();
        prop_assert_eq!(elevated.to_power(), f);
        prop_assert!(elevated.all_nonnegative());
    }

    #[test]
    fn restriction_preserves_polynomial_and_sign(form in nonneg_form_strategy(),
                                                 lo in -4i64..=0, width in 1i64..=3) {
        let c = rat(lo, 4);
        let e = c.clone() + rat(width, 4);
        let restricted = restrict_interval(&form, &c, &e).unwrap();
        prop_assert_eq!(restricted.to_power(), form.to_power());
        prop_assert!(restricted.all_nonnegative());
    }

    #[test]
    fn product_multiplies_polynomials(f1 in nonneg_form_strategy(), f2 in nonneg_form_strategy()) {
        let prod = mul_lorentz(&f1, &f2).unwrap();
        prop_assert_eq!(prod.to_power(), f1.to_power().mul(&f2.to_power()));
        prop_assert!(prod.all_nonnegative());
        prop_assert_eq!(prod.degree(), f1.degree() + f2.degree());
    }

    #[test]
    fn factor_built_polys_admit_forms(seed in 0u64..500, n in 2usize..=6) {
        // every polynomial with no zero inside the unit disk has, up to
        // sign, a nonnegative form at its own degree
        let s = sample(ClassTag::ZerosOutsideDisk(n), seed).unwrap();
        let d = s.poly.degree();
        let pos = from_power(&s.poly, d, &rint(-1), &rint(1))
            .map(|f| f.all_nonnegative()).unwrap_or(false);
        let neg = from_power(&s.poly.neg(), d, &rint(-1), &rint(1))
            .map(|f| f.all_nonnegative()).unwrap_or(false);
        prop_assert!(pos || neg);
    }

    #[test]
    fn lorentz_degree_is_minimal(seed in 0u64..200, n in 2usize..=5) {
        let s = sample(ClassTag::ZerosOutsideDisk(n), seed).unwrap();
        let f = if from_power(&s.poly, s.poly.degree(), &rint(-1), &rint(1))
            .map(|form| form.all_nonnegative()).unwrap_or(false)
        { s.poly.clone() } else { s.poly.neg() };
        if let LorentzDegreeResult::Finite(d) =
            lorentz_degree(&f, &rint(-1), &rint(1), 64).unwrap()
        {
            if d > f.degree() {
                let below = from_power(&f, d - 1, &rint(-1), &rint(1)).unwrap();
                prop_assert!(!below.all_nonnegative());
            }
        }
    }

    #[test]
    fn sup_norm_dominates_samples(f in poly_strategy(6), xs in prop::collection::vec(-16i64..=16, 1..8)) {
        let sup = sup_norm(&f, &rint(-1), &rint(1));
        for xi in xs {
            let x = rat(xi, 16);
            let v = f.eval(&x).abs().to_f64_lossy();
            prop_assert!(v <= sup.value + sup.error_bound + 1e-9 * sup.value.max(1.0));
        }
    }

    #[test]
    fn norms_scale_and_compare(f in poly_strategy(5)) {
        let m1 = rint(-1);
        let p1 = rint(1);
        let sup = sup_norm(&f, &m1, &p1);
        let l1 = lp_norm(&f, Exponent::Finite(1.0), &m1, &p1, false).unwrap();
        // ‖f‖_1 ≤ 2‖f‖_∞ on an interval of length 2
        prop_assert!(l1.value <= 2.0 * sup.value * (1.0 + 1e-9) + l1.error_bound + 1e-12);
        // scaling by −3/2 scales every norm by 3/2
        let g = f.scale(&rat(-3, 2));
        let sup_g = sup_norm(&g, &m1, &p1);
        prop_assert!((sup_g.value - 1.5 * sup.value).abs() <= 1e-9 * sup.value.max(1.0));
    }

    #[test]
    fn generated_samples_pass_membership(seed in 0u64..200, class_idx in 0usize..6, n in 1usize..=6) {
        let class = match class_idx {
            0 => ClassTag::LorentzNonneg(n),
            1 => ClassTag::ZerosOutsideDisk(n),
            2 => ClassTag::DerivLorentz(n),
            3 => ClassTag::DerivZerosOutsideDisk(n),
            4 => ClassTag::MonotoneRealZerosOutside(n),
            _ => ClassTag::MonotoneOnly(n),
        };
        let s = sample(class, seed).unwrap();
        let m = check_membership(class, &s.poly, Some(&s.params)).unwrap();
        prop_assert!(m.is_yes());
        prop_assert!(s.poly.degree() <= class.degree_bound());
    }

    #[test]
    fn derivative_bound_proof_chain(seed in 0u64..150, d in 2usize..=8) {
        // the inner step of the endpoint-difference argument:
        // ‖f′‖_∞ ≤ (d/2)(f(1) − f(−1)) when f′ has a nonneg form
        let s = sample(ClassTag::DerivLorentz(d), seed).unwrap();
        let f = &s.poly;
        let sup_d = sup_norm(&f.derivative(), &rint(-1), &rint(1));
        let chain = rint(d as i64) / rint(2) * (f.eval(&rint(1)) - f.eval(&rint(-1)));
        prop_assert!(sup_d.value <= chain.to_f64_lossy() + sup_d.error_bound + 1e-9);
        // and the difference is the exact integral of f′
        prop_assert_eq!(
            f.eval(&rint(1)) - f.eval(&rint(-1)),
            integral_exact(&f.derivative(), &rint(-1), &rint(1))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn checkers_hold_on_matching_samples(seed in 0u64..10_000, t_idx in 0usize..9, n in 1usize..=6) {
        let theorem = ALL_THEOREMS[t_idx];
        let class = theorem.class_for(n);
        let s = sample(class, seed).unwrap();
        let q = rint(1);
        let v = run_checker(theorem, &s.poly, n, &q, None, Some(&s.params)).unwrap();
        prop_assert!(v.holds, "{} violated on a class sample", theorem.name());
    }

    #[test]
    fn integer_lp_matches_quadrature(f in poly_strategy(4)) {
        // the exact sign-split integral and the adaptive quadrature agree
        let m1 = rint(-1);
        let p1 = rint(1);
        let exact = lp_norm(&f, Exponent::Finite(2.0), &m1, &p1, false).unwrap();
        // squeeze the same integrand through the non-integer code path
        let near = lp_norm(&f, Exponent::Finite(2.0000000001), &m1, &p1, false).unwrap();
        prop_assert!((exact.value - near.value).abs()
            <= 1e-6 * exact.value.max(1.0) + exact.error_bound + near.error_bound);
    }
}

#[test]
fn theorem_name_round_trip() {
    for t in ALL_THEOREMS {
        assert_eq!(TheoremId::parse(t.name()), Some(t));
    }
    assert_eq!(TheoremId::parse("thm9.9"), None);
}
