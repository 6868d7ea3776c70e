//! Reduction between measures on `[−1, 1]` and circle measures symmetric
//! with respect to the real axis.
//!
//! A segment measure `dψ = ρ dx` maps to `σ′(θ) = ρ(cos θ)|sin θ|`, and an
//! atom of mass `m` at `x = cos t` to atoms of mass `m` at `e^{±it}` (one
//! atom of mass `2m` when `x = ±1`). The circle measure has mass `2‖ψ‖`.
//!
//! Convention: the polynomials
//! `P_k = (φ_2k + φ_2k*) z^{−k} / √(2π[1 + λ_2k^{−1} φ_2k(0)])`, with `φ`
//! orthonormal for `σ` as given (not renormalised), are orthonormal with
//! respect to `2π dψ`. Lebesgue `dθ/2π` gives `P_0 = 1/√π` and
//! `P_k = √(2/π) T_k`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;

use crate::grid::{compensated_sum, UnitGrid};
use crate::measure::{Atom, CircleMeasure};
use crate::opuc::oracle::verblunsky_from_measure;
use crate::opuc::recursion::szego_recursion;
use crate::{Error, Result};

/// Default symmetry tolerance, relative to the largest weight sample.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Point mass on the segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentAtom {
    pub x: f64,
    pub mass: f64,
}

/// `dψ = ρ(x) dx + Σ m_j δ_{x_j}` on `[−1, 1]`.
///
/// `ρ` is sampled at the Chebyshev-type nodes `x_k = cos θ_k` of a circle
/// grid; quadrature is done on the circle side, which sidesteps endpoint
/// singularities such as `1/√(1 − x²)`.
#[derive(Clone)]
pub struct SegmentMeasure {
    grid: UnitGrid,
    rho: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    samples: Vec<f64>,
    atoms: Vec<SegmentAtom>,
}

impl std::fmt::Debug for SegmentMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SegmentMeasure")
            .field("grid", &self.grid.size())
            .field("atoms", &self.atoms)
            .finish()
    }
}

impl SegmentMeasure {
    /// `ρ` may blow up at `x = ±1`; the circle weight `ρ(cos θ)|sin θ|` at
    /// `θ ∈ {0, π}` is then taken from the neighbouring node.
    pub fn new(
        grid: UnitGrid,
        rho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        atoms: Vec<SegmentAtom>,
    ) -> Result<Self> {
        let n = grid.size();
        let mut samples: Vec<f64> = grid.angles().map(|t| rho(t.cos()) * t.sin().abs()).collect();
        for k in [0, n / 2] {
            if !samples[k].is_finite() {
                samples[k] = samples[k + 1];
            }
        }
        if let Some((k, w)) = samples.iter().enumerate().find(|(_, w)| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidMeasure(format!("ρ(cos θ)|sin θ| = {w} at node {k}")));
        }
        if let Some(a) = atoms
            .iter()
            .find(|a| !(a.x.abs() <= 1.0) || !(a.mass >= 0.0) || !a.mass.is_finite())
        {
            return Err(Error::InvalidMeasure(format!("atom {a:?} is not on [−1, 1] with mass ≥ 0")));
        }
        Ok(Self {
            grid,
            rho: Arc::new(rho),
            samples,
            atoms,
        })
    }

    /// Probability arcsine weight `1/(π√(1 − x²))`.
    pub fn arcsine(grid: UnitGrid) -> Self {
        Self::new(grid, |x: f64| 1.0 / (PI * (1.0 - x * x).sqrt()), Vec::new()).expect("valid weight")
    }

    /// Probability Chebyshev-U weight `(2/π)√(1 − x²)`.
    pub fn chebyshev_u(grid: UnitGrid) -> Self {
        Self::new(grid, |x: f64| 2.0 / PI * (1.0 - x * x).max(0.0).sqrt(), Vec::new()).expect("valid weight")
    }

    /// Normalised Lebesgue measure `dx/2`.
    pub fn uniform(grid: UnitGrid) -> Self {
        Self::new(grid, |_| 0.5, Vec::new()).expect("valid weight")
    }

    pub fn grid(&self) -> &UnitGrid {
        &self.grid
    }

    pub fn rho(&self, x: f64) -> f64 {
        (self.rho)(x)
    }

    pub fn atoms(&self) -> &[SegmentAtom] {
        &self.atoms
    }

    /// `ψ(1) − ψ(−1)`.
    pub fn total_mass(&self) -> f64 {
        let ac = self.grid.step() / 2.0 * compensated_sum(self.samples.iter().copied());
        ac + self.atoms.iter().map(|a| a.mass).sum::<f64>()
    }

    /// Quadrature nodes and weights for `∫ f dψ`.
    pub fn quadrature(&self) -> (Vec<f64>, Vec<f64>) {
        let h = self.grid.step() / 2.0;
        let mut xs = Vec::with_capacity(self.samples.len() + self.atoms.len());
        let mut ws = Vec::with_capacity(xs.capacity());
        for (t, r) in self.grid.angles().zip(&self.samples) {
            let w = r * h;
            if w > 0.0 {
                xs.push(t.cos());
                ws.push(w);
            }
        }
        for a in &self.atoms {
            xs.push(a.x);
            ws.push(a.mass);
        }
        (xs, ws)
    }
}

/// A circle measure invariant under `θ ↦ 2π − θ`.
#[derive(Debug, Clone)]
pub struct SymmetricCircleMeasure {
    measure: CircleMeasure,
    defect: f64,
}

impl SymmetricCircleMeasure {
    /// Checks the weight samples and the atoms for symmetry within `tol`.
    pub fn new(measure: CircleMeasure, tol: f64) -> Result<Self> {
        let defect = symmetry_defect(&measure);
        if !(defect <= tol) {
            return Err(Error::NotSymmetric { defect });
        }
        Ok(Self { measure, defect })
    }

    pub fn measure(&self) -> &CircleMeasure {
        &self.measure
    }

    pub fn into_measure(self) -> CircleMeasure {
        self.measure
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// The segment measure with `ρ(cos θ) = σ′(θ)/|sin θ|`.
    ///
    /// Uses the closed form of `σ′` when there is one and the samples
    /// otherwise (nearest node).
    pub fn to_segment(&self) -> Result<SegmentMeasure> {
        let mu = self.measure.clone();
        let rho = move |x: f64| {
            let t = x.clamp(-1.0, 1.0).acos();
            let s = t.sin();
            if s <= 0.0 {
                0.0
            } else {
                mu.weight_at(t) / s
            }
        };
        let mut atoms = Vec::new();
        for a in self.measure.atoms() {
            if a.theta <= PI {
                let at_end = a.theta == 0.0 || a.theta == PI;
                atoms.push(SegmentAtom {
                    x: a.theta.cos(),
                    mass: if at_end { a.mass / 2.0 } else { a.mass },
                });
            }
        }
        let mut seg = SegmentMeasure::new(*self.measure.grid(), rho, atoms)?;
        // Keep the circle's own samples; `ρ(±1)` is a 0/0 limit above.
        seg.samples = self.measure.weight_samples().to_vec();
        Ok(seg)
    }
}

/// `max |σ′_k − σ′_{N−k}| / max σ′`, plus the mass of unmatched atoms.
pub fn symmetry_defect(mu: &CircleMeasure) -> f64 {
    let w = mu.weight_samples();
    let n = w.len();
    let scale = w.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut d: f64 = (1..n).map(|k| (w[k] - w[n - k]).abs()).fold(0.0, f64::max) / scale;
    for a in mu.atoms() {
        let mirror = Complex64::from_polar(1.0, -a.theta);
        let partner = mu
            .atoms()
            .iter()
            .filter(|b| (b.point() - mirror).norm() < 1e-12)
            .map(|b| (b.mass - a.mass).abs())
            .fold(f64::INFINITY, f64::min);
        d = d.max(if partner.is_finite() { partner } else { a.mass });
    }
    d
}

/// `σ′(θ) = ρ(cos θ)|sin θ|` on the segment's grid, atoms mirrored.
pub fn segment_to_circle(psi: &SegmentMeasure) -> Result<SymmetricCircleMeasure> {
    let weight = psi.samples.clone();
    let mut atoms = Vec::new();
    for a in &psi.atoms {
        let t = a.x.acos();
        if a.x == 1.0 || a.x == -1.0 {
            atoms.push(Atom::new(t, 2.0 * a.mass));
        } else {
            atoms.push(Atom::new(t, a.mass));
            atoms.push(Atom::new(TAU - t, a.mass));
        }
    }
    let rho = psi.rho.clone();
    let mu = CircleMeasure::from_samples(psi.grid, weight, atoms)?
        .with_density(move |t: f64| {
            let s = t.sin().abs();
            if s < 1e-12 {
                0.0
            } else {
                rho(t.cos()) * s
            }
        });
    SymmetricCircleMeasure::new(mu, SYMMETRY_TOL)
}

/// Real polynomial in `x` in the power basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPolynomial {
    pub k: usize,
    pub coeffs_in_x: Vec<f64>,
}

impl SegmentPolynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs_in_x.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs_in_x.last().unwrap_or(&0.0)
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs_in_x.len().max(other.coeffs_in_x.len());
        (0..len)
            .map(|j| {
                let a = self.coeffs_in_x.get(j).copied().unwrap_or(0.0);
                let b = other.coeffs_in_x.get(j).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max |P_k(x)|` over `x_j = cos θ_j` with `|x_j| ≤ 1 − margin`.
    pub fn sup_on(&self, grid: &UnitGrid, margin: f64) -> f64 {
        grid.angles()
            .map(f64::cos)
            .filter(|x| x.abs() <= 1.0 - margin)
            .map(|x| self.eval(x).abs())
            .fold(0.0, f64::max)
    }
}

/// Power-basis coefficients of `T_0..T_k`.
pub fn chebyshev_t_coeffs(k: usize) -> Vec<Vec<f64>> {
    let mut t: Vec<Vec<f64>> = vec![vec![1.0]];
    if k >= 1 {
        t.push(vec![0.0, 1.0]);
    }
    for j in 2..=k {
        let mut next = vec![0.0; j + 1];
        for (i, c) in t[j - 1].iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in t[j - 2].iter().enumerate() {
            next[i] -= c;
        }
        t.push(next);
    }
    t
}

/// `P_0..P_K` from the orthonormal polynomials of `σ`.
pub fn circle_to_segment_polys(sigma: &SymmetricCircleMeasure, k_max: usize) -> Result<Vec<SegmentPolynomial>> {
    let mu = sigma.measure();
    let mass = mu.total_mass();
    if !(mass > 0.0) {
        return Err(Error::ZeroMass);
    }
    let gamma = verblunsky_from_measure(mu, 2 * k_max)?;
    let pairs = szego_recursion(&gamma, 2 * k_max)?;
    let scale = 1.0 / mass.sqrt();
    let cheb = chebyshev_t_coeffs(k_max);
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let p = &pairs[2 * k];
        // (φ_2k + φ_2k*)z^{−k} = c_k + Σ_{j≥1} (c_{k+j} z^j + c_{k−j} z^{−j}),
        // and c_{k−j} = conj(c_{k+j}) is real for a symmetric measure.
        let c = |j: usize| (p.phi.coeff(j) + p.phi_star.coeff(j)) * scale;
        let lambda = p.kappa * scale;
        let at_zero = p.phi.coeff(0).re * scale;
        let denom = (TAU * (1.0 + at_zero / lambda)).sqrt();
        let mut coeffs = vec![0.0; k + 1];
        coeffs[0] += c(k).re / denom;
        for j in 1..=k {
            let a = (c(k + j).re + c(k - j).re) / denom;
            for (i, t) in cheb[j].iter().enumerate() {
                coeffs[i] += a * t;
            }
        }
        out.push(SegmentPolynomial { k, coeffs_in_x: coeffs });
    }
    Ok(out)
}

/// Orthonormal `P_0..P_K` for `2π dψ` by the discretised Stieltjes
/// procedure, tracked both as node values and as power-basis coefficients.
#[derive(Debug, Clone)]
pub struct SegmentFamily {
    pub polys: Vec<SegmentPolynomial>,
    /// Three-term coefficients: `x P_k = b_{k+1} P_{k+1} + a_k P_k + b_k P_{k−1}`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `max |⟨P_i, P_j⟩ − δ_ij|` on the quadrature.
    pub gram_residual: f64,
}

pub fn segment_gram_schmidt_oracle(rho: &SegmentMeasure, k_max: usize) -> Result<SegmentFamily> {
    let (xs, mut ws) = rho.quadrature();
    ws.iter_mut().for_each(|w| *w *= TAU);
    let dot = |f: &[f64], g: &[f64]| compensated_sum(f.iter().zip(g).zip(&ws).map(|((a, b), w)| a * b * w));
    let m0 = compensated_sum(ws.iter().copied());
    if !(m0 > 0.0) {
        return Err(Error::ZeroMass);
    }
    let p0 = 1.0 / m0.sqrt();
    let mut vals: Vec<Vec<f64>> = vec![vec![p0; xs.len()]];
    let mut coeffs: Vec<Vec<f64>> = vec![vec![p0]];
    let mut a = Vec::new();
    let mut b = vec![0.0];
    for k in 0..k_max {
        let mut v: Vec<f64> = vals[k].iter().zip(&xs).map(|(p, x)| p * x).collect();
        let mut c = vec![0.0; k + 2];
        for (i, ck) in coeffs[k].iter().enumerate() {
            c[i + 1] += ck;
        }
        let ak = dot(&v, &vals[k]);
        a.push(ak);
        // Two passes of Gram–Schmidt against every earlier P_j.
        for _ in 0..2 {
            for j in 0..=k {
                let h = dot(&v, &vals[j]);
                for (vi, pj) in v.iter_mut().zip(&vals[j]) {
                    *vi -= h * pj;
                }
                for (ci, cj) in c.iter_mut().zip(&coeffs[j]) {
                    *ci -= h * cj;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if !(norm > 1e-14) {
            return Err(Error::NotPositiveDefinite { degree: k + 1 });
        }
        v.iter_mut().for_each(|x| *x /= norm);
        c.iter_mut().for_each(|x| *x /= norm);
        b.push(norm);
        vals.push(v);
        coeffs.push(c);
    }
    let mut gram_residual: f64 = 0.0;
    for i in 0..=k_max {
        for j in 0..=i {
            let target = if i == j { 1.0 } else { 0.0 };
            gram_residual = gram_residual.max((dot(&vals[i], &vals[j]) - target).abs());
        }
    }
    Ok(SegmentFamily {
        polys: coeffs
            .into_iter()
            .enumerate()
            .map(|(k, coeffs_in_x)| SegmentPolynomial { k, coeffs_in_x })
            .collect(),
        a,
        b,
        gram_residual,
    })
}

/// Circle-side and segment-side families for one measure.
#[derive(Debug, Clone)]
pub struct RealLineComparison {
    pub from_circle: Vec<SegmentPolynomial>,
    pub oracle: SegmentFamily,
    /// `max_k max_j |coeff|` difference.
    pub max_coeff_diff: f64,
    /// The same, relative to the largest coefficient of each `P_k`.
    pub max_rel_diff: f64,
}

pub fn compare_reduction(psi: &SegmentMeasure, k_max: usize) -> Result<RealLineComparison> {
    let sigma = segment_to_circle(psi)?;
    let from_circle = circle_to_segment_polys(&sigma, k_max)?;
    let oracle = segment_gram_schmidt_oracle(psi, k_max)?;
    let mut max_coeff_diff: f64 = 0.0;
    let mut max_rel_diff: f64 = 0.0;
    for (p, q) in from_circle.iter().zip(&oracle.polys) {
        let d = p.max_coeff_diff(q);
        let s = q.coeffs_in_x.iter().map(|c| c.abs()).fold(0.0, f64::max);
        max_coeff_diff = max_coeff_diff.max(d);
        max_rel_diff = max_rel_diff.max(d / s);
    }
    Ok(RealLineComparison {
        from_circle,
        oracle,
        max_coeff_diff,
        max_rel_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> UnitGrid {
        UnitGrid::new(1 << 12).unwrap()
    }

    #[test]
    fn arcsine_maps_to_lebesgue() {
        let sigma = segment_to_circle(&SegmentMeasure::arcsine(grid())).unwrap();
        for v in sigma.measure().weight_samples() {
            // 1 − cos²θ cancels near the endpoints.
            assert!((v - 1.0 / PI).abs() < 1e-9);
        }
        let m = sigma.measure().moments(4).unwrap();
        assert!(m[1].norm() < 1e-3 && m[2].norm() < 1e-3);
    }

    #[test]
    fn chebyshev_u_maps_to_sin_squared() {
        let psi = SegmentMeasure::chebyshev_u(grid());
        let sigma = segment_to_circle(&psi).unwrap();
        for (t, v) in grid().angles().zip(sigma.measure().weight_samples()) {
            assert!((v - (1.0 - (2.0 * t).cos()) / PI).abs() < 1e-12);
        }
        assert!((sigma.measure().total_mass() - 2.0 * psi.total_mass()).abs() < 1e-12);
        assert!((psi.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lebesgue_gives_chebyshev_t() {
        let sigma = SymmetricCircleMeasure::new(CircleMeasure::lebesgue(grid()), 0.0).unwrap();
        let p = circle_to_segment_polys(&sigma, 16).unwrap();
        let t = chebyshev_t_coeffs(16);
        assert!((p[0].coeffs_in_x[0] - 1.0 / PI.sqrt()).abs() < 1e-14);
        let s = (2.0 / PI).sqrt();
        for k in 1..=16 {
            let want = SegmentPolynomial {
                k,
                coeffs_in_x: t[k].iter().map(|c| s * c).collect(),
            };
            assert!(p[k].max_coeff_diff(&want) < 1e-9, "k = {k}");
            assert!(p[k].leading() > 0.0);
        }
    }

    #[test]
    fn oracle_classical_families() {
        let g = UnitGrid::new(1 << 14).unwrap();
        let arc = segment_gram_schmidt_oracle(&SegmentMeasure::arcsine(g), 8).unwrap();
        // 2π times the arcsine weight has mass 2π.
        assert!((arc.polys[0].coeffs_in_x[0] - 1.0 / TAU.sqrt()).abs() < 1e-12);
        for v in &arc.a {
            assert!(v.abs() < 1e-12);
        }
        assert!((arc.b[1] - 0.5f64.sqrt()).abs() < 1e-12);
        for k in 2..=8 {
            assert!((arc.b[k] - 0.5).abs() < 1e-12);
        }
        // Legendre: recurrence b_k = k/√(4k² − 1), P_0 = 1/√(2π). The kink
        // of |sin θ| limits the rectangle rule to O(h²).
        let leg = segment_gram_schmidt_oracle(&SegmentMeasure::uniform(g), 8).unwrap();
        assert!((leg.polys[0].coeffs_in_x[0] - 1.0 / TAU.sqrt()).abs() < 1e-7);
        for k in 1..=8 {
            let kf = k as f64;
            assert!((leg.b[k] - kf / (4.0 * kf * kf - 1.0).sqrt()).abs() < 1e-6, "k = {k}");
        }
        assert!(leg.gram_residual < 1e-12);
    }

    #[test]
    fn reduction_matches_oracle() {
        for psi in [
            SegmentMeasure::arcsine(grid()),
            SegmentMeasure::chebyshev_u(grid()),
            SegmentMeasure::new(grid(), |x: f64| (1.0 + 0.5 * x) / (1.0 - x * x).sqrt(), vec![SegmentAtom { x: 0.3, mass: 0.2 }])
                .unwrap(),
        ] {
            let c = compare_reduction(&psi, 12).unwrap();
            assert!(c.max_rel_diff < 1e-9, "{}", c.max_rel_diff);
        }
    }

    #[test]
    fn endpoint_atom_is_doubled() {
        let psi = SegmentMeasure::new(grid(), |_| 0.0, vec![SegmentAtom { x: 1.0, mass: 0.25 }, SegmentAtom { x: 0.0, mass: 0.1 }]).unwrap();
        let sigma = segment_to_circle(&psi).unwrap();
        let masses: Vec<f64> = sigma.measure().atoms().iter().map(|a| a.mass).collect();
        assert_eq!(masses, vec![0.5, 0.1, 0.1]);
        let back = sigma.to_segment().unwrap();
        for (a, b) in back.atoms().iter().zip(psi.atoms()) {
            assert!((a.x - b.x).abs() < 1e-15 && a.mass == b.mass);
        }
    }

    #[test]
    fn asymmetric_measure_rejected() {
        let mu = CircleMeasure::from_density(grid(), |t: f64| (1.0 + 0.5 * t.sin()) / TAU, Vec::new()).unwrap();
        assert!(matches!(
            SymmetricCircleMeasure::new(mu, SYMMETRY_TOL),
            Err(Error::NotSymmetric { .. })
        ));
    }
}
