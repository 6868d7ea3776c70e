use num_complex::Complex64;

use crate::opuc::recursion::{values_at, OrthonormalPair, SchurSequence};
use crate::poly::ComplexPolynomial;
use crate::Result;

/// `K_n(ξ, z) = Σ_{j≤n} conj(φ_j(ξ)) φ_j(z)`.
pub fn cd_kernel(pairs: &[OrthonormalPair], xi: Complex64, z: Complex64, n: usize) -> Complex64 {
    pairs[..=n]
        .iter()
        .map(|p| p.phi.eval(xi).conj() * p.phi.eval(z))
        .sum()
}

/// `z ↦ K_n(ξ, z)` as a polynomial of degree `n`.
pub fn kernel_polynomial(pairs: &[OrthonormalPair], xi: Complex64, n: usize) -> ComplexPolynomial {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for p in &pairs[..=n] {
        let w = p.phi.eval(xi).conj();
        for (c, pc) in coeffs.iter_mut().zip(p.phi.coeffs()) {
            *c += w * pc;
        }
    }
    ComplexPolynomial::new(coeffs)
}

/// Kernel evaluated through the pointwise recursion, O(n) per call.
pub fn kernel_from_schur(gamma: &SchurSequence, xi: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
    let a = values_at(gamma, n, xi)?;
    let b = values_at(gamma, n, z)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x.0.conj() * y.0).sum())
}

/// `K_{n-1}(ξ, z)` for `dθ/2π`: `((z ξ̄)^n − 1)/(z ξ̄ − 1)`, `n` on the diagonal.
pub fn lebesgue_kernel(xi: Complex64, z: Complex64, n: usize) -> Complex64 {
    let w = z * xi.conj();
    if (w - 1.0).norm() < 1e-12 {
        return (0..n).map(|j| w.powu(j as u32)).sum();
    }
    (w.powu(n as u32) - 1.0) / (w - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UnitGrid;
    use crate::measure::quad_inner;
    use crate::opuc::recursion::szego_recursion;
    use crate::opuc::szego::bernstein_szego_measure;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn lebesgue_closed_form() {
        let pairs = szego_recursion(&SchurSequence::zeros(8), 8).unwrap();
        let xi = Complex64::from_polar(1.0, 0.7);
        let z = Complex64::new(0.3, -0.4);
        for n in 1..=8 {
            let direct = cd_kernel(&pairs, xi, z, n - 1);
            assert!((direct - lebesgue_kernel(xi, z, n)).norm() < 1e-14);
        }
        let one = Complex64::new(1.0, 0.0);
        assert_relative_eq!(cd_kernel(&pairs, one, one, 4).re, 5.0);
    }

    #[test]
    fn lebesgue_n4_at_i_vanishes() {
        let pairs = szego_recursion(&SchurSequence::zeros(4), 4).unwrap();
        let k = cd_kernel(&pairs, Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), 3);
        assert!(k.norm() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reproducing_property(
            gamma in prop::collection::vec((0.0..0.4f64, 0.0..6.28f64), 1..10),
            poly in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6),
            t in 0.0..6.28f64,
        ) {
            let gamma = SchurSequence::new(gamma.into_iter().map(|(r, a)| Complex64::from_polar(r, a)).collect()).unwrap();
            let n = gamma.len();
            let pairs = szego_recursion(&gamma, n).unwrap();
            let mu = bernstein_szego_measure(&pairs[n], UnitGrid::new(2048).unwrap()).unwrap();
            let deg = (poly.len() - 1).min(n);
            let p = ComplexPolynomial::new(poly.into_iter().take(deg + 1).map(|(a, b)| Complex64::new(a, b)).collect());
            let xi = Complex64::from_polar(1.0, t);
            let k = kernel_polynomial(&pairs, xi, n);
            let reproduced = quad_inner(&p, &k, &mu).unwrap();
            prop_assert!((reproduced - p.eval(xi)).norm() < 1e-8);
            let via_schur = kernel_from_schur(&gamma, xi, Complex64::new(0.2, 0.1), n).unwrap();
            prop_assert!((via_schur - k.eval(Complex64::new(0.2, 0.1))).norm() < 1e-10 * (1.0 + via_schur.norm()));
        }
    }
}
