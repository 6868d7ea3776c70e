mod common;

use common::{schur, unit_point};
use opuc_core::measure::{moment, quad_inner};
use opuc_core::opuc::kernel::kernel_polynomial;
use opuc_core::opuc::oracle::{monic_gram_schmidt, verblunsky_from_measure};
use opuc_core::opuc::recursion::{schur_from_orthonormal, szego_recursion};
use opuc_core::opuc::recursion::OrthonormalPair;
use opuc_core::opuc::szego::{bernstein_szego_grid, bernstein_szego_measure};
use opuc_core::CircleMeasure;
use opuc_core::Complex64;
use proptest::prelude::*;

/// The weight on a grid fine enough to resolve its peaks.
fn bs(pair: &OrthonormalPair) -> CircleMeasure {
    bernstein_szego_measure(pair, bernstein_szego_grid(pair, 1 << 16)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_is_consistent_and_modulus_matches_on_circle(g in schur(1..=64, 0.9), z in unit_point()) {
        let pairs = szego_recursion(&g, g.len()).unwrap();
        for p in &pairs {
            let s = p.phi.star();
            let scale = p.phi_star.max_coeff_norm().max(1.0);
            prop_assert!(s.max_coeff_diff(&p.phi_star) <= 1e-12 * scale);
            // Evaluation loses up to `Σ|coeff|` to cancellation.
            let l1: f64 = p.phi.coeffs().iter().map(|c| c.norm()).sum();
            let (a, b) = (p.phi.eval(z).norm(), p.phi_star.eval(z).norm());
            prop_assert!((a - b).abs() <= 1e-13 * l1);
        }
    }

    #[test]
    fn kappa_is_product_of_inverse_rhos(g in schur(1..=64, 0.9)) {
        let pairs = szego_recursion(&g, g.len()).unwrap();
        let mut k = 1.0;
        for (j, p) in pairs.iter().enumerate() {
            prop_assert!((p.kappa - k).abs() <= 1e-12 * k);
            prop_assert!((p.phi.coeff(j).re - p.kappa).abs() <= 1e-12 * k);
            if j < g.len() {
                k /= g.rho()[j];
            }
        }
    }

    #[test]
    fn schur_round_trip(g in schur(1..=24, 0.6)) {
        let pairs = szego_recursion(&g, g.len()).unwrap();
        let back = schur_from_orthonormal(&pairs[g.len()].phi).unwrap();
        prop_assert_eq!(back.len(), g.len());
        prop_assert!(back.max_diff(&g) <= 1e-10);
    }

    #[test]
    fn moments_are_hermitian_and_normalised(g in schur(1..=8, 0.5)) {
        let pairs = szego_recursion(&g, g.len()).unwrap();
        let mu = bs(&pairs[g.len()]);
        prop_assert!((moment(&mu, 0).unwrap() - 1.0).norm() <= 1e-12);
        for k in 1..6i64 {
            let (a, b) = (moment(&mu, k).unwrap(), moment(&mu, -k).unwrap());
            prop_assert!((a - b.conj()).norm() <= 1e-15);
        }
    }

    #[test]
    fn cd_kernel_reproduces_polynomials(
        g in schur(1..=8, 0.5),
        xi in unit_point(),
        c in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=8),
    ) {
        let n = g.len();
        let pairs = szego_recursion(&g, n).unwrap();
        let mu = bs(&pairs[n]);
        let coeffs: Vec<Complex64> = c.iter().take(n + 1).map(|&(a, b)| Complex64::new(a, b)).collect();
        let p = opuc_core::ComplexPolynomial::new(coeffs);
        let k = kernel_polynomial(&pairs, xi, n);
        let got = quad_inner(&p, &k, &mu).unwrap();
        prop_assert!((got - p.eval(xi)).norm() <= 1e-10);
    }

    #[test]
    fn scaling_leaves_parameters_fixed(g in schur(1..=8, 0.5), alpha in 0.1..10.0f64) {
        let n = g.len();
        let pairs = szego_recursion(&g, n).unwrap();
        let mu = bs(&pairs[n]);
        let a = verblunsky_from_measure(&mu, n).unwrap();
        let b = verblunsky_from_measure(&mu.scaled(alpha).unwrap(), n).unwrap();
        prop_assert!(a.max_diff(&b) <= 1e-12);
        prop_assert!(a.max_diff(&g) <= 1e-10);
        let fa = monic_gram_schmidt(&mu, n).unwrap();
        let fb = monic_gram_schmidt(&mu.scaled(alpha).unwrap(), n).unwrap();
        prop_assert!((fb.norms_sq[n] / fa.norms_sq[n] - alpha).abs() <= 1e-10 * alpha);
    }
}
