//! Property-based tests of the polynomial algebra: ring laws, the
//! reversal identities, line restriction against direct evaluation,
//! top-form scaling, and the Hermite-Biehler round trip.

use num_complex::Complex64;
use proptest::prelude::*;

use stabpoly::uni::hb_split;
use stabpoly::{AffineLine, MultiPoly, UniPoly};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// small random polynomial in `nvars` variables, degree <= 3 per
/// variable, coefficients in a moderate box
fn arb_poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    let term = (
        proptest::collection::vec(0u32..=3, nvars),
        -5.0f64..5.0,
        -5.0f64..5.0,
    );
    proptest::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut p = MultiPoly::zero(nvars);
        for (exp, re, im) in terms {
            p = p.add(&MultiPoly::monomial(nvars, exp, c(re, im))).unwrap();
        }
        p
    })
}

fn arb_line(nvars: usize) -> impl Strategy<Value = AffineLine> {
    (
        proptest::collection::vec(-4.0f64..4.0, nvars),
        proptest::collection::vec(0.2f64..3.0, nvars),
    )
        .prop_map(|(a, b)| AffineLine::new(a, b).unwrap())
}

fn close(x: Complex64, y: Complex64, scale: f64) -> bool {
    (x - y).norm() <= 1e-12 * (1.0 + scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(f in arb_poly(2), g in arb_poly(2), h in arb_poly(2)) {
        // commutativity and associativity of add and mul
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        // mul accumulates in a different order for f*g vs g*f; compare
        // within an ulp-level tolerance
        let fg = f.mul(&g).unwrap();
        let gf = g.mul(&f).unwrap();
        prop_assert!(
            fg.sub(&gf).unwrap().l1_norm() <= 1e-13 * (1.0 + f.l1_norm() * g.l1_norm())
        );
        // float addition is not associative to the last ulp
        let assoc_l = f.add(&g).unwrap().add(&h).unwrap();
        let assoc_r = f.add(&g.add(&h).unwrap()).unwrap();
        prop_assert!(
            assoc_l.sub(&assoc_r).unwrap().l1_norm()
                <= 1e-13 * (1.0 + f.l1_norm() + g.l1_norm() + h.l1_norm())
        );
        // distributivity, checked by evaluation to absorb rounding
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        let pt = [c(0.7, 0.3), c(-1.1, 0.9)];
        let scale = f.l1_norm() * (g.l1_norm() + h.l1_norm()) * 16.0;
        prop_assert!(close(lhs.eval(&pt), rhs.eval(&pt), scale));
        // additive inverse and neutral elements
        prop_assert!(f.add(&f.neg()).unwrap().is_zero());
        prop_assert_eq!(f.mul(&MultiPoly::one(2)).unwrap(), f.clone());
        prop_assert_eq!(f.add(&MultiPoly::zero(2)).unwrap(), f);
    }

    #[test]
    fn reverse_twice_restores_against_slice_oracle(f in arb_poly(2)) {
        // reverse in variable 0 twice: slice k of the result equals
        // slice k of f for every k (brute-force slice comparison)
        let r2 = f.reverse_var(0).unwrap().reverse_var(0).unwrap();
        let n = f.degree_in(0);
        prop_assume!(!f.is_zero());
        // reversal uses deg(f) in that variable; a second reversal can
        // only be compared when the reversed polynomial attains the
        // same degree (no vanishing leading slice)
        prop_assume!(r2.degree_in(0) == n);
        // reversal contributes (-1)^(n-k) then (-1)^k: the double
        // reversal is f scaled by the global sign (-1)^n
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for k in 0..=n {
            let a = f.coefficient_slice(0, k).unwrap();
            let b = r2.coefficient_slice(0, k).unwrap();
            prop_assert_eq!(a.scale(c(sign, 0.0)), b);
        }
    }

    #[test]
    fn full_reverse_is_an_involution(f in arb_poly(2)) {
        // restrict to real polynomials attaining exponent 0 and the
        // per-variable maximum in some term
        let re_terms: Vec<(Vec<u32>, Complex64)> = f
            .terms()
            .map(|(e, co)| (e.0.clone(), c(co.re, 0.0)))
            .collect();
        let g = MultiPoly::from_terms(2, re_terms).unwrap();
        prop_assume!(!g.is_zero());
        let r = g.full_reverse().unwrap();
        let back = r.full_reverse().unwrap();
        // involution holds whenever the reversal kept the exponent box
        prop_assume!(r.degree_in(0) == g.degree_in(0) && r.degree_in(1) == g.degree_in(1));
        prop_assert_eq!(back, g);
    }

    #[test]
    fn restriction_matches_direct_evaluation(
        f in arb_poly(3),
        line in arb_line(3),
        xs in proptest::collection::vec(-3.0f64..3.0, 20),
    ) {
        let restricted = match f.restrict_line(&line) {
            Ok(r) => r,
            Err(_) => return Ok(()),
        };
        for &x in &xs {
            let z = c(x, 0.0);
            let point: Vec<Complex64> = line
                .a
                .iter()
                .zip(&line.b)
                .map(|(&ai, &bi)| c(ai + bi * x, 0.0))
                .collect();
            let direct = f.eval(&point);
            let via = restricted.eval(z);
            let scale = f.l1_norm()
                * line
                    .a
                    .iter()
                    .zip(&line.b)
                    .map(|(&ai, &bi)| (ai.abs() + bi * x.abs()).max(1.0).powi(3))
                    .product::<f64>();
            prop_assert!(
                (direct - via).norm() <= 1e-12 * (1.0 + scale),
                "direct={direct} via={via} x={x}"
            );
        }
    }

    #[test]
    fn top_form_is_the_scaling_limit(f in arb_poly(2)) {
        prop_assume!(!f.is_zero());
        let n = f.total_degree();
        let top = f.top_form().unwrap();
        // eps^n f(x/eps) keeps exactly the total-degree-n terms as
        // eps -> 0; symbolically: eps^n f(x/eps) = sum_e c_e eps^(n-|e|) x^e,
        // so for every term of the top form the coefficient matches and
        // every other term carries a positive power of eps
        for (e, co) in f.terms() {
            let total: u32 = e.0.iter().sum();
            if total == n {
                prop_assert_eq!(top.coefficient(&e.0), *co);
            } else {
                prop_assert_eq!(top.coefficient(&e.0), Complex64::new(0.0, 0.0));
            }
        }
        // numerically at eps = 2^-20 the scaled polynomial approaches
        // the top form at a fixed point
        let eps = (2.0f64).powi(-20);
        let pt = [c(0.8, 0.4), c(-0.6, 1.1)];
        let scaled_pt: Vec<Complex64> = pt.iter().map(|z| z / eps).collect();
        let lhs = f.eval(&scaled_pt) * c(eps, 0.0).powu(n);
        let rhs = top.eval(&pt);
        let scale = f.l1_norm() * 8.0;
        prop_assert!((lhs - rhs).norm() <= 1e-4 * (1.0 + scale));
    }

    #[test]
    fn hb_split_round_trips(coeffs in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..8)) {
        let p = UniPoly::new(coeffs.iter().map(|&(re, im)| c(re, im)).collect());
        prop_assume!(!p.is_zero());
        let (g, h, _) = hb_split(&p);
        // p = g + i*h with g, h real
        prop_assert!(g.is_real() && h.is_real());
        let z = c(0.3, 0.0);
        let back = g.eval(z) + c(0.0, 1.0) * h.eval(z);
        prop_assert!(close(back, p.eval(z), p.l1_norm()));
    }
}
