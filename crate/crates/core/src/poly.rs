//! Complex polynomials carrying a nominal degree, so that the `(∗)`
//! conjugate-reversal is well defined.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::grid::UnitGrid;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial `c_0 + c_1 z + ... + c_d z^d` with nominal degree `n ≥ d`.
///
/// The coefficient vector always has length `n + 1`; trailing zeros are
/// kept so that [`star`](Self::star) reverses at the nominal length.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Nominal degree equals `coeffs.len() - 1`. An empty vector is the zero
    /// polynomial of nominal degree 0.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Pads or checks `coeffs` against nominal degree `n`.
    pub fn with_nominal(mut coeffs: Vec<Complex64>, n: usize) -> Result<Self> {
        let p = Self::new(coeffs.clone());
        let degree = p.degree();
        if degree > n {
            return Err(Error::DegreeExceedsNominal { degree, nominal: n });
        }
        coeffs.resize(n + 1, ZERO);
        Ok(Self { coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: vec![ZERO; n + 1],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        Self { coeffs }
    }

    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Actual degree (index of the last nonzero coefficient; 0 for the zero
    /// polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or(ZERO)
    }

    /// Returns the same polynomial viewed at a larger nominal degree.
    pub fn raised_to(&self, n: usize) -> Result<Self> {
        Self::with_nominal(self.coeffs.clone(), n)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// `Q*(z) = z^n conj(Q(1/conj z))` at the nominal degree.
    pub fn star(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
        }
    }

    /// `(∗)` at an explicit degree `n`.
    pub fn star_at(&self, n: usize) -> Result<Self> {
        Ok(self.raised_to(n)?.star())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `z·Q`, nominal degree increased by one.
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn conj_coeffs(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Values on every node of `grid`.
    pub fn values_on(&self, grid: &UnitGrid) -> Vec<Complex64> {
        grid.synthesize(&self.coeffs)
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max coefficient distance to `other` (padding the shorter one).
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|j| (self.coeff(j) - other.coeff(j)).norm())
            .fold(0.0, f64::max)
    }

    /// Coefficient distance relative to the larger of the two coefficient
    /// maxima (absolute when both are below one).
    pub fn rel_coeff_diff(&self, other: &Self) -> f64 {
        let scale = self.max_coeff_norm().max(other.max_coeff_norm()).max(1.0);
        self.max_coeff_diff(other) / scale
    }

    /// Winding number of `t ↦ Q(e^{it})` around 0, i.e. the number of zeros
    /// in the open disk when `Q` has none on the circle.
    ///
    /// Returns `None` if `Q` vanishes at a node. Steps whose phase increment
    /// exceeds π/4 are refined eightfold with direct evaluation.
    pub fn winding_number(&self, grid: &UnitGrid) -> Option<i64> {
        let values = self.values_on(grid);
        let step = grid.step();
        let mut total = 0.0;
        for k in 0..values.len() {
            let a = values[k];
            let b = values[(k + 1) % values.len()];
            if a == ZERO || b == ZERO {
                return None;
            }
            let inc = (b / a).arg();
            if inc.abs() > std::f64::consts::FRAC_PI_4 {
                let t0 = grid.angle(k);
                let mut prev = a;
                for s in 1..=8 {
                    let t = t0 + step * s as f64 / 8.0;
                    let cur = if s == 8 { b } else { self.eval(Complex64::from_polar(1.0, t)) };
                    if cur == ZERO {
                        return None;
                    }
                    total += (cur / prev).arg();
                    prev = cur;
                }
            } else {
                total += inc;
            }
        }
        Some((total / std::f64::consts::TAU).round() as i64)
    }

    /// Roots from the eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<Complex64> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[d];
        let mut companion = DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = ONE;
        }
        for i in 0..d {
            companion[(i, d - 1)] = -self.coeffs[i] / lead;
        }
        companion
            .schur()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    }

    /// Minimum modulus over the grid nodes.
    pub fn min_modulus_on(&self, grid: &UnitGrid) -> f64 {
        self.values_on(grid)
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `Q` has no zeros in the closed unit disk.
    ///
    /// Companion eigenvalues decide for degree ≤ 64; larger degrees use the
    /// winding number on `grid` together with the nodal minimum.
    pub fn zero_free_in_closed_disk(&self, grid: &UnitGrid) -> bool {
        if self.degree() <= 64 {
            if self.degree() == 0 {
                return self.coeff(0) != ZERO;
            }
            return self.roots().iter().all(|r| r.norm() > 1.0 + 1e-12)
                && self.min_modulus_on(grid) > 0.0;
        }
        self.min_modulus_on(grid) > 0.0 && self.winding_number(grid) == Some(0)
    }
}

/// Location and value of `sup |p|` on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleMax {
    pub value: f64,
    /// In `(−π, π]`.
    pub theta: f64,
}

impl ComplexPolynomial {
    /// `sup_θ |p(e^{iθ})|` from a grid of at least `min_grid` nodes (and
    /// `32·deg`), refined by golden-section around the best node and inside
    /// windows of half-width `window` around each angle in `focus`.
    pub fn sup_on_circle(&self, min_grid: usize, focus: &[f64], window: f64) -> CircleMax {
        let size = min_grid.max(32 * self.degree()).max(8).next_power_of_two();
        let grid = UnitGrid::new(size).expect("size at least 8");
        let values = self.values_on(&grid);
        let (k, _) = values
            .iter()
            .enumerate()
            .map(|(k, v)| (k, v.norm()))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        let neg = |t: f64| -self.eval(Complex64::from_polar(1.0, t)).norm();
        let refine = |c: f64, h: f64| {
            let t = crate::grid::golden_section_min(c - h, c + h, 200, neg);
            (-neg(t), t)
        };
        let mut best = refine(grid.angle(k), grid.step());
        let samples = 512;
        for &c in focus {
            let h = window / samples as f64;
            let (_, t0) = (0..=2 * samples)
                .map(|i| {
                    let t = c - window + h * i as f64;
                    (neg(t), t)
                })
                .fold((f64::INFINITY, c), |acc, x| if x.0 < acc.0 { x } else { acc });
            let cand = refine(t0, h);
            if cand.0 > best.0 {
                best = cand;
            }
        }
        let mut theta = crate::grid::wrap_angle(best.1);
        if theta > std::f64::consts::PI {
            theta -= std::f64::consts::TAU;
        }
        CircleMax {
            value: best.0,
            theta,
        }
    }
}

/// `(∗)`-operation of `q` at degree `n`.
pub fn star(q: &ComplexPolynomial, n: usize) -> Result<ComplexPolynomial> {
    q.star_at(n)
}

fn zip_with(
    a: &ComplexPolynomial,
    b: &ComplexPolynomial,
    f: impl Fn(Complex64, Complex64) -> Complex64,
) -> ComplexPolynomial {
    let len = a.coeffs.len().max(b.coeffs.len());
    ComplexPolynomial {
        coeffs: (0..len).map(|j| f(a.coeff(j), b.coeff(j))).collect(),
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn add(self, rhs: Self) -> ComplexPolynomial {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn sub(self, rhs: Self) -> ComplexPolynomial {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn neg(self) -> ComplexPolynomial {
        self.scale_real(-1.0)
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn mul(self, rhs: Self) -> ComplexPolynomial {
        let mut coeffs = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ComplexPolynomial { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn star_of_quadratic() {
        // 2z² + iz + 3  ->  3z² − iz + 2
        let q = ComplexPolynomial::new(vec![c(3.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)]);
        let s = star(&q, 2).unwrap();
        assert_eq!(s.coeffs(), &[c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.0)]);
    }

    #[test]
    fn star_of_constant_at_degree_three() {
        let s = star(&ComplexPolynomial::one(), 3).unwrap();
        assert_eq!(s, ComplexPolynomial::monomial(3));
    }

    #[test]
    fn star_rejects_low_nominal_degree() {
        let q = ComplexPolynomial::monomial(3);
        assert!(matches!(
            star(&q, 2),
            Err(Error::DegreeExceedsNominal { degree: 3, nominal: 2 })
        ));
    }

    #[test]
    fn winding_counts_zeros_inside() {
        let grid = UnitGrid::new(256).unwrap();
        // (z - 0.5)(z + 0.3i)(z - 2)
        let p = &(&ComplexPolynomial::new(vec![c(-0.5, 0.0), c(1.0, 0.0)])
            * &ComplexPolynomial::new(vec![c(0.0, 0.3), c(1.0, 0.0)]))
            * &ComplexPolynomial::new(vec![c(-2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.winding_number(&grid), Some(2));
        assert!(!p.zero_free_in_closed_disk(&grid));
        let q = ComplexPolynomial::new(vec![c(1.0, 0.0), c(-0.5, 0.0)]);
        assert!(q.zero_free_in_closed_disk(&grid));
    }

    #[test]
    fn companion_roots() {
        let p = &ComplexPolynomial::new(vec![c(-0.5, 0.0), c(1.0, 0.0)])
            * &ComplexPolynomial::new(vec![c(0.0, -2.0), c(1.0, 0.0)]);
        let mut roots = p.roots();
        roots.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        assert!((roots[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(0.0, 2.0)).norm() < 1e-12);
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = ComplexPolynomial> {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..=max_deg + 1)
            .prop_map(|v| ComplexPolynomial::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn star_is_an_involution(q in arb_poly(12), extra in 0usize..4) {
            let n = q.nominal_degree() + extra;
            let back = star(&star(&q, n).unwrap(), n).unwrap();
            prop_assert!(back.max_coeff_diff(&q) == 0.0);
        }

        #[test]
        fn star_preserves_modulus_on_circle(q in arb_poly(12), t in 0.0..std::f64::consts::TAU) {
            let z = Complex64::from_polar(1.0, t);
            let s = q.star();
            prop_assert!((s.eval(z).norm() - q.eval(z).norm()).abs() < 1e-12 * (1.0 + q.eval(z).norm()));
        }
    }
}
