use std::f64::consts::TAU;

use crate::grid::{compensated_sum, UnitGrid};
use crate::poly::ComplexPolynomial;

/// Per-condition outcome of [`validate_orthonormal_candidate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateReport {
    pub degree: usize,
    /// Roots with `|z| ≥ 1` (or found by winding when the degree is large).
    pub roots_outside_open_disk: usize,
    /// Largest root modulus, when eigenvalues were used.
    pub max_root_modulus: Option<f64>,
    pub roots_inside: bool,
    /// `∫ dθ / (2π |P|²)`.
    pub integral: f64,
    pub integral_ok: bool,
    /// Multiplying `P` by this makes the integral exactly 1.
    pub rescale: f64,
    pub leading: num_complex::Complex64,
    pub leading_positive: bool,
}

impl CandidateReport {
    pub fn passes(&self) -> bool {
        self.roots_inside && self.integral_ok && self.leading_positive
    }
}

/// Checks that `P` could be the orthonormal `φ_n` of a Bernstein–Szegő
/// measure: all zeros in `|z| < 1`, `∫ dθ/(2π|P|²) = 1`, positive leading
/// coefficient.
pub fn validate_orthonormal_candidate(p: &ComplexPolynomial, tol: f64) -> CandidateReport {
    let n = p.degree();
    let grid = UnitGrid::for_degree(n.max(1));
    let (outside, max_mod) = if n <= 64 {
        let roots = p.roots();
        let outside = roots.iter().filter(|r| r.norm() >= 1.0 - 1e-12).count();
        let max_mod = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        (outside, Some(max_mod))
    } else {
        // Zeros strictly inside ⇔ the winding number equals the degree.
        match p.winding_number(&grid) {
            Some(w) => ((n as i64 - w).unsigned_abs() as usize, None),
            None => (1, None),
        }
    };
    let values = p.values_on(&grid);
    let integral = if values.iter().any(|v| v.norm() == 0.0) {
        f64::INFINITY
    } else {
        compensated_sum(values.iter().map(|v| 1.0 / (TAU * v.norm_sqr()))) * grid.step()
    };
    let leading = p.coeff(n);
    CandidateReport {
        degree: n,
        roots_outside_open_disk: outside,
        max_root_modulus: max_mod,
        roots_inside: outside == 0,
        integral,
        integral_ok: (integral - 1.0).abs() <= tol,
        rescale: integral.sqrt(),
        leading,
        leading_positive: leading.re > 0.0 && leading.im.abs() <= 1e-14 * leading.re,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn monomial_passes() {
        let r = validate_orthonormal_candidate(&ComplexPolynomial::monomial(5), 1e-10);
        assert!(r.passes());
        assert!((r.integral - 1.0).abs() < 1e-14);
    }

    #[test]
    fn root_outside_fails_first_condition() {
        let r = validate_orthonormal_candidate(&ComplexPolynomial::from_real(&[-2.0, 1.0]), 1e-10);
        assert!(!r.roots_inside);
        assert_eq!(r.roots_outside_open_disk, 1);
    }

    #[test]
    fn wrong_scale_fixed_by_rescale() {
        // 2(z − 1/2): ∫ = (1/4)·1/(1 − 1/4) = 1/3.
        let p = ComplexPolynomial::from_real(&[-1.0, 2.0]);
        let r = validate_orthonormal_candidate(&p, 1e-10);
        assert!(r.roots_inside && r.leading_positive && !r.integral_ok);
        assert!((r.integral - 1.0 / 3.0).abs() < 1e-13);
        let fixed = validate_orthonormal_candidate(&p.scale_real(r.rescale), 1e-10);
        assert!(fixed.passes());
    }

    #[test]
    fn complex_leading_coefficient_rejected() {
        let p = ComplexPolynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)]);
        assert!(!validate_orthonormal_candidate(&p, 1e-10).leading_positive);
    }

    #[test]
    fn high_degree_uses_winding() {
        let mut c = vec![Complex64::new(0.0, 0.0); 101];
        c[0] = Complex64::new(0.5, 0.0);
        c[100] = Complex64::new(1.0, 0.0);
        // z^100 + 1/2 has all roots at radius 2^{-1/100} < 1.
        let r = validate_orthonormal_candidate(&ComplexPolynomial::new(c.clone()), 1e-6);
        assert!(r.roots_inside && r.max_root_modulus.is_none());
        c[0] = Complex64::new(2.0, 0.0);
        let r = validate_orthonormal_candidate(&ComplexPolynomial::new(c), 1e-6);
        assert!(!r.roots_inside);
    }
}
