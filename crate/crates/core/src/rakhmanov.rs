//! Point-mass perturbations of a background measure.
//!
//! For `η = µ + Σ m_k δ_{ξ_k}` with `K_{n−1}(ξ_j, ξ_l, µ) = 0` for `j ≠ l`,
//!
//! ```text
//! Φ_n(z, η) = Φ_n(z, µ) − Σ_k m_k Φ_n(ξ_k, µ) K_{n−1}(ξ_k, z, µ) / (1 + m_k K_{n−1}(ξ_k, ξ_k, µ)).
//! ```

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::grid::{compensated_complex_sum, golden_section_min, UnitGrid};
use crate::measure::{normalize, steklov_check, Atom, CircleMeasure};
use crate::opuc::oracle::verblunsky_from_measure;
use crate::opuc::recursion::{szego_recursion, values_at, OrthonormalPair, SchurSequence};
use crate::poly::{star, ComplexPolynomial};
use crate::report::{Comparator, GrowthReport, GrowthRow};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Orthonormal polynomials of a (not necessarily probability) background
/// measure, carried as its Verblunsky parameters and total mass.
#[derive(Debug, Clone)]
pub struct BackgroundBasis {
    pub gamma: SchurSequence,
    pub mass: f64,
    pairs: Vec<OrthonormalPair>,
}

impl BackgroundBasis {
    pub fn from_schur(gamma: SchurSequence, mass: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::ZeroMass);
        }
        let pairs = szego_recursion(&gamma, gamma.len())?;
        Ok(Self { gamma, mass, pairs })
    }

    /// Parameters up to `n` from the Gram–Schmidt oracle; a constant density
    /// without atoms is recognised as (scaled) Lebesgue measure directly.
    pub fn of_measure(mu: &CircleMeasure, n: usize) -> Result<Self> {
        let w = mu.weight_samples();
        let uniform = mu.atoms().is_empty() && w.iter().all(|x| *x == w[0]);
        let gamma = if uniform {
            SchurSequence::zeros(n)
        } else {
            verblunsky_from_measure(&normalize(mu)?.0, n)?
        };
        Self::from_schur(gamma, mu.total_mass())
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Monic `Φ_k(z, µ)`.
    pub fn monic(&self, k: usize) -> ComplexPolynomial {
        self.pairs[k].monic()
    }

    /// `φ_j(z, µ)` for `j = 0..=n`, orthonormal in `L²(µ)`.
    pub fn values(&self, n: usize, z: Complex64) -> Result<Vec<Complex64>> {
        let s = 1.0 / self.mass.sqrt();
        Ok(values_at(&self.gamma, n, z)?.into_iter().map(|(p, _)| p * s).collect())
    }

    /// `K_n(ξ, z, µ)`.
    pub fn kernel(&self, xi: Complex64, z: Complex64, n: usize) -> Result<Complex64> {
        let a = self.values(n, xi)?;
        let b = self.values(n, z)?;
        Ok(compensated_complex_sum(a.iter().zip(&b).map(|(x, y)| x.conj() * y)))
    }

    /// `z ↦ K_n(ξ, z, µ)`.
    pub fn kernel_polynomial(&self, xi: Complex64, n: usize) -> ComplexPolynomial {
        let s = 1.0 / self.mass;
        let mut coeffs = vec![ZERO; n + 1];
        for p in &self.pairs[..=n] {
            let w = p.phi.eval(xi).conj() * s;
            for (c, pc) in coeffs.iter_mut().zip(p.phi.coeffs()) {
                *c += w * pc;
            }
        }
        ComplexPolynomial::new(coeffs)
    }
}

/// Points `ξ_k` on the circle carrying masses `m_k` on top of a background.
#[derive(Debug, Clone)]
pub struct MassPlacement {
    points: Vec<Complex64>,
    masses: Vec<f64>,
    background: CircleMeasure,
    schur: Option<SchurSequence>,
}

impl MassPlacement {
    pub fn new(points: Vec<Complex64>, masses: Vec<f64>, background: CircleMeasure) -> Result<Self> {
        if points.len() != masses.len() {
            return Err(Error::InvalidParameter(format!(
                "{} points but {} masses",
                points.len(),
                masses.len()
            )));
        }
        for p in &points {
            if (p.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!("point {p} is not on the circle")));
            }
        }
        for m in &masses {
            if !(*m >= 0.0) || !m.is_finite() {
                return Err(Error::InvalidParameter(format!("mass {m} must be nonnegative")));
            }
        }
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                if (a - b).norm() < 1e-12 {
                    return Err(Error::InvalidParameter(format!("repeated point {a}")));
                }
            }
        }
        Ok(Self {
            points,
            masses,
            background,
            schur: None,
        })
    }

    pub fn from_angles(thetas: &[f64], masses: Vec<f64>, background: CircleMeasure) -> Result<Self> {
        Self::new(thetas.iter().map(|t| Complex64::from_polar(1.0, *t)).collect(), masses, background)
    }

    /// Supplies the background's Verblunsky parameters instead of computing
    /// them with the oracle.
    pub fn with_background_schur(mut self, gamma: SchurSequence) -> Self {
        self.schur = Some(gamma);
        self
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn background(&self) -> &CircleMeasure {
        &self.background
    }

    pub fn basis(&self, n: usize) -> Result<BackgroundBasis> {
        match &self.schur {
            Some(g) if g.len() >= n => {
                BackgroundBasis::from_schur(g.prefix(n), self.background.total_mass())
            }
            _ => BackgroundBasis::of_measure(&self.background, n),
        }
    }

    /// `η = µ + Σ m_k δ_{ξ_k}`.
    pub fn perturbed(&self) -> Result<CircleMeasure> {
        self.background.with_atoms(
            self.points
                .iter()
                .zip(&self.masses)
                .map(|(p, m)| Atom::new(p.arg(), *m)),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCondition {
    pub max_off_diagonal: f64,
    pub max_diagonal: f64,
}

impl KernelCondition {
    pub fn admissible(&self, tol: f64) -> bool {
        self.max_off_diagonal <= tol * self.max_diagonal.max(1.0)
    }
}

/// Gram matrix `K_{n−1}(ξ_j, ξ_l, µ)` of the placement.
pub fn kernel_matrix(placement: &MassPlacement, basis: &BackgroundBasis, n: usize) -> Result<DMatrix<Complex64>> {
    let p = placement.points.len();
    let mut v = DMatrix::<Complex64>::zeros(p, n);
    for (row, xi) in placement.points.iter().enumerate() {
        for (j, val) in basis.values(n - 1, *xi)?.into_iter().enumerate() {
            v[(row, j)] = val;
        }
    }
    Ok(v.conjugate() * v.transpose())
}

/// `max_{j≠l} |K_{n−1}(ξ_j, ξ_l, µ)|`.
pub fn verify_kernel_condition(placement: &MassPlacement, n: usize) -> Result<KernelCondition> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let basis = placement.basis(n - 1)?;
    let k = kernel_matrix(placement, &basis, n)?;
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for i in 0..k.nrows() {
        for j in 0..k.ncols() {
            if i == j {
                diag = diag.max(k[(i, j)].norm());
            } else {
                off = off.max(k[(i, j)].norm());
            }
        }
    }
    Ok(KernelCondition {
        max_off_diagonal: off,
        max_diagonal: diag,
    })
}

/// The `n − 1` zeros of `ξ ↦ K_{n−1}(ξ, ẑ, µ)` on the circle, sorted by angle.
pub fn kernel_roots(z_hat: Complex64, n: usize, mu: &CircleMeasure) -> Result<Vec<Complex64>> {
    if n < 2 {
        return Ok(Vec::new());
    }
    let basis = BackgroundBasis::of_measure(mu, n - 1)?;
    kernel_roots_with(z_hat, n, &basis)
}

pub fn kernel_roots_with(z_hat: Complex64, n: usize, basis: &BackgroundBasis) -> Result<Vec<Complex64>> {
    // Same zeros as the conjugate ξ ↦ K_{n−1}(ẑ, ξ), a polynomial in ξ.
    let q = basis.kernel_polynomial(z_hat, n - 1);
    let scale = q.eval(z_hat).norm();
    let grid = UnitGrid::new((64 * n).next_power_of_two())?;
    let abs: Vec<f64> = q.values_on(&grid).iter().map(|v| v.norm()).collect();
    let size = abs.len();
    let f = |t: f64| q.eval(Complex64::from_polar(1.0, t)).norm();
    let mut roots = Vec::new();
    for i in 0..size {
        let prev = abs[(i + size - 1) % size];
        let next = abs[(i + 1) % size];
        if abs[i] < prev && abs[i] <= next {
            let t = grid.angle(i);
            let h = grid.step();
            let r = golden_section_min(t - h, t + h, 200, f);
            if f(r) <= 1e-9 * scale {
                roots.push(crate::grid::wrap_angle(r));
            }
        }
    }
    if roots.len() != n - 1 {
        return Err(Error::RootCount {
            found: roots.len(),
            expected: n - 1,
        });
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect())
}

/// Monic `Φ_n` and `Φ_n*` of a perturbed measure.
#[derive(Debug, Clone, PartialEq)]
pub struct RakhmanovPolynomial {
    pub phi: ComplexPolynomial,
    pub phi_star: ComplexPolynomial,
    /// `d_1..d_n` when the closed form was used.
    pub d: Option<Vec<Complex64>>,
}

/// Applies the point-mass formula. Fails when the kernel condition does not
/// hold to `tol` (relative to the largest diagonal entry) or when there are
/// at least `n` points.
pub fn rakhmanov_update(placement: &MassPlacement, n: usize, tol: f64) -> Result<RakhmanovPolynomial> {
    if placement.points.len() >= n {
        return Err(Error::InvalidParameter(format!(
            "{} points need degree above {}",
            placement.points.len(),
            placement.points.len()
        )));
    }
    let basis = placement.basis(n)?;
    let k = kernel_matrix(placement, &basis, n)?;
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for i in 0..k.nrows() {
        for j in 0..k.ncols() {
            if i == j {
                diag = diag.max(k[(i, j)].norm());
            } else {
                off = off.max(k[(i, j)].norm());
            }
        }
    }
    let cond = KernelCondition {
        max_off_diagonal: off,
        max_diagonal: diag,
    };
    if !cond.admissible(tol) {
        return Err(Error::KernelCondition {
            value: off,
            tolerance: tol * diag.max(1.0),
        });
    }
    let base = basis.monic(n);
    let mut coeffs = base.coeffs().to_vec();
    for (idx, (xi, m)) in placement.points.iter().zip(&placement.masses).enumerate() {
        if *m == 0.0 {
            continue;
        }
        let w = *m * base.eval(*xi) / (1.0 + *m * k[(idx, idx)].re);
        let kp = basis.kernel_polynomial(*xi, n - 1);
        for (c, kc) in coeffs.iter_mut().zip(kp.coeffs()) {
            *c -= w * kc;
        }
    }
    let phi = ComplexPolynomial::new(coeffs);
    let phi_star = star(&phi, n)?;
    Ok(RakhmanovPolynomial {
        phi,
        phi_star,
        d: None,
    })
}

fn require_even(n: usize) -> Result<()> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n = {n} must be even and positive")));
    }
    Ok(())
}

/// `d_1..d_n` for `m = n/2`: `d_n = m`, `d_l = ((−1)^l − 1)/(e^{−i2πl/n} − 1)`.
pub fn d_coefficients(n: usize) -> Result<Vec<Complex64>> {
    require_even(n)?;
    let mut d = Vec::with_capacity(n);
    for l in 1..n {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let denom = Complex64::from_polar(1.0, -TAU * l as f64 / n as f64) - 1.0;
        d.push(Complex64::new(sign - 1.0, 0.0) / denom);
    }
    d.push(Complex64::new((n / 2) as f64, 0.0));
    Ok(d)
}

/// `d_l = Σ_{j<m} ξ_j^{−l}` with `ξ_j = e^{i2πj/n}`, `l = 1..n`.
pub fn d_coefficients_direct(n: usize, m: usize) -> Result<Vec<Complex64>> {
    if n == 0 || m > n {
        return Err(Error::InvalidParameter(format!("need 0 < m ≤ n, got m = {m}, n = {n}")));
    }
    let table: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / n as f64))
        .collect();
    Ok((1..=n)
        .map(|l| compensated_complex_sum((0..m).map(|j| table[(j * l) % n])))
        .collect())
}

/// Equal masses `ε/m` at the first `m = n/2` of the `n`-th roots of unity on
/// top of `dθ/2π`.
#[derive(Debug, Clone)]
pub struct LebesgueConstruction {
    pub n: usize,
    pub epsilon: f64,
    pub poly: RakhmanovPolynomial,
    pub eta: CircleMeasure,
    /// `max_j |coeff_j(Φ_n* − Φ_n − ((1+3ε)/(1+2ε))(1 − z^n))|`.
    pub difference_residual: f64,
}

impl LebesgueConstruction {
    pub fn m(&self) -> usize {
        self.n / 2
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.m())
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / self.n as f64))
            .collect()
    }

    pub fn placement(&self) -> Result<MassPlacement> {
        let m = self.m();
        Ok(MassPlacement::new(
            self.points(),
            vec![self.epsilon / m as f64; m],
            CircleMeasure::lebesgue(*self.eta.grid()),
        )?
        .with_background_schur(SchurSequence::zeros(self.n)))
    }

    /// `‖Φ_n‖²` in `L²(η/‖η‖)`: Parseval for the Lebesgue part plus atoms.
    pub fn monic_norm_sq(&self) -> f64 {
        let ac: f64 = self.poly.phi.coeffs().iter().map(|c| c.norm_sqr()).sum();
        let atoms: f64 = self
            .eta
            .atoms()
            .iter()
            .map(|a| a.mass * self.poly.phi.eval(a.point()).norm_sqr())
            .sum();
        (ac + atoms) / (1.0 + self.epsilon)
    }

    /// `κ_n` of `η/‖η‖`.
    pub fn kappa(&self) -> f64 {
        1.0 / self.monic_norm_sq().sqrt()
    }
}

/// Closed form `Φ_n* = 1 − (εm^{−1}/(1+εnm^{−1}))(d_1 z + … + d_n z^n)`.
pub fn lebesgue_construction(n: usize, epsilon: f64) -> Result<LebesgueConstruction> {
    require_even(n)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("ε = {epsilon} must lie in (0, 1)")));
    }
    let m = n / 2;
    let mass = epsilon / m as f64;
    let c = mass / (1.0 + n as f64 * mass);
    let d = d_coefficients(n)?;
    let mut star_coeffs = Vec::with_capacity(n + 1);
    star_coeffs.push(Complex64::new(1.0, 0.0));
    star_coeffs.extend(d.iter().map(|dl| -c * dl));
    let phi_star = ComplexPolynomial::new(star_coeffs);
    let phi = star(&phi_star, n)?;

    let k = (1.0 + 3.0 * epsilon) / (1.0 + 2.0 * epsilon);
    let mut residual: f64 = 0.0;
    for j in 0..=n {
        let target = if j == 0 {
            k
        } else if j == n {
            -k
        } else {
            0.0
        };
        residual = residual.max((phi_star.coeff(j) - phi.coeff(j) - target).norm());
    }

    let grid = UnitGrid::for_degree(n);
    let atoms = (0..m).map(|j| Atom::new(TAU * j as f64 / n as f64, mass));
    let eta = CircleMeasure::lebesgue(grid).with_atoms(atoms)?;
    Ok(LebesgueConstruction {
        n,
        epsilon,
        poly: RakhmanovPolynomial {
            phi,
            phi_star,
            d: Some(d),
        },
        eta,
        difference_residual: residual,
    })
}

/// One row of the `1 + ε log n` growth measurement.
pub fn growth_row(n: usize, epsilon: f64) -> Result<GrowthRow> {
    let c = lebesgue_construction(n, epsilon)?;
    let window = 20.0 / n as f64;
    let max = c
        .poly
        .phi
        .sup_on_circle(8192.max(32 * n), &[0.0, PI], window);
    let (normed, _) = normalize(&c.eta)?;
    let delta = steklov_check(&normed, 1.0 / (1.0 + epsilon)).attained_delta();
    let kappa = c.kappa();
    let mut residuals = BTreeMap::new();
    residuals.insert("difference_identity".to_string(), c.difference_residual);
    residuals.insert("abs_phi_at_one".to_string(), c.poly.phi.eval(Complex64::new(1.0, 0.0)).norm());
    residuals.insert("orthonormal_sup".to_string(), kappa * max.value);
    residuals.insert("szego_ratio".to_string(), 1.0 / kappa);
    Ok(GrowthRow {
        n,
        epsilon,
        sup_norm: max.value,
        argmax_theta: max.theta,
        comparator: Comparator::OnePlusEpsLog.eval(epsilon, n),
        comparator_kind: Comparator::OnePlusEpsLog,
        steklov_delta: delta,
        residuals,
    })
}

/// `sup |Φ_n|` against `1 + ε log n` for each even `n`.
pub fn growth_table(epsilon: f64, ns: &[usize]) -> Result<GrowthReport> {
    let rows = ns.iter().map(|&n| growth_row(n, epsilon)).collect::<Result<Vec<_>>>()?;
    Ok(GrowthReport::new(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opuc::oracle::monic_gram_schmidt;
    use crate::opuc::szego::bernstein_szego_measure;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn leb(size: usize) -> CircleMeasure {
        CircleMeasure::lebesgue(UnitGrid::new(size).unwrap())
    }

    #[test]
    fn roots_of_unity_satisfy_kernel_condition() {
        for n in [4, 8, 33, 64] {
            let pts: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
            let p = MassPlacement::from_angles(&pts[..n / 2 + 1], vec![0.1; n / 2 + 1], leb(256)).unwrap();
            let cond = verify_kernel_condition(&p, n).unwrap();
            assert!(cond.max_off_diagonal < 1e-12 * n as f64, "n = {n}: {cond:?}");
            assert!((cond.max_diagonal - n as f64).abs() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn non_admissible_pair() {
        let p = MassPlacement::from_angles(&[0.0, PI / 4.0], vec![0.1, 0.1], leb(64)).unwrap();
        let cond = verify_kernel_condition(&p, 4).unwrap();
        let expected = 2.0 / (Complex64::from_polar(1.0, PI / 4.0) - 1.0).norm();
        assert!((cond.max_off_diagonal - expected).abs() < 1e-13);
        assert!((cond.max_off_diagonal - 2.613).abs() < 1e-3);
        assert!(matches!(rakhmanov_update(&p, 4, 1e-10), Err(Error::KernelCondition { .. })));
    }

    #[test]
    fn repeated_points_rejected() {
        assert!(MassPlacement::from_angles(&[1.0, 1.0], vec![0.1, 0.2], leb(64)).is_err());
        assert!(MassPlacement::from_angles(&[1.0], vec![-0.1], leb(64)).is_err());
    }

    #[test]
    fn lebesgue_kernel_roots_are_roots_of_unity() {
        for (n, alpha) in [(5usize, 0.0), (8, 0.0), (8, 0.37)] {
            let roots = kernel_roots(Complex64::from_polar(1.0, alpha), n, &leb(256)).unwrap();
            let mut expected: Vec<f64> = (1..n)
                .map(|k| crate::grid::wrap_angle(alpha + TAU * k as f64 / n as f64))
                .collect();
            expected.sort_by(f64::total_cmp);
            for (r, t) in roots.iter().zip(&expected) {
                assert!((r - Complex64::from_polar(1.0, *t)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn kernel_roots_count_for_bernstein_szego() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..6 {
            let n = rng.gen_range(2..=16);
            let gamma = SchurSequence::new(
                (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.0..0.5), rng.gen_range(0.0..TAU))).collect(),
            )
            .unwrap();
            let pairs = szego_recursion(&gamma, n).unwrap();
            let grid = crate::opuc::szego::bernstein_szego_grid(&pairs[n], 1 << 16);
            let mu = bernstein_szego_measure(&pairs[n], grid).unwrap();
            let z_hat = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let basis = BackgroundBasis::from_schur(gamma.prefix(n - 1), 1.0).unwrap();
            let roots = kernel_roots_with(z_hat, n, &basis).unwrap();
            assert_eq!(roots.len(), n - 1);
            // Pairwise orthogonality, making them an admissible placement.
            let p = MassPlacement::new(roots, vec![0.2; n - 1], mu)
                .unwrap()
                .with_background_schur(gamma.clone());
            let cond = verify_kernel_condition(&p, n).unwrap();
            assert!(cond.admissible(1e-8), "{cond:?}");
        }
    }

    #[test]
    fn zero_masses_leave_background() {
        let p = MassPlacement::from_angles(&[0.0, PI], vec![0.0, 0.0], leb(64)).unwrap();
        let r = rakhmanov_update(&p, 4, 1e-10).unwrap();
        assert!(r.phi.max_coeff_diff(&ComplexPolynomial::monomial(4)) < 1e-15);
    }

    #[test]
    fn single_atom_closed_form() {
        let (n, t) = (6usize, 0.7);
        let p = MassPlacement::from_angles(&[0.0], vec![t], leb(128)).unwrap();
        let r = rakhmanov_update(&p, n, 1e-10).unwrap();
        let mut expected = vec![c(-t / (1.0 + t * n as f64), 0.0); n + 1];
        expected[n] = c(1.0, 0.0);
        assert!(r.phi.max_coeff_diff(&ComplexPolynomial::new(expected)) < 1e-14);
        let oracle = monic_gram_schmidt(&p.perturbed().unwrap(), n).unwrap();
        assert!(r.phi.max_coeff_diff(&oracle.polys[n]) < 1e-10);
    }

    #[test]
    fn update_matches_oracle_on_random_placements() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..12 {
            let n = rng.gen_range(2..=32);
            let size = rng.gen_range(1..n);
            let mut idx: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.gen_range(i..n);
                idx.swap(i, j);
            }
            let thetas: Vec<f64> = idx[..size].iter().map(|k| TAU * *k as f64 / n as f64).collect();
            let masses: Vec<f64> = (0..size).map(|_| rng.gen_range(0.0..1.0)).collect();
            let p = MassPlacement::from_angles(&thetas, masses, leb(256)).unwrap();
            let r = rakhmanov_update(&p, n, 1e-10).unwrap();
            let oracle = monic_gram_schmidt(&p.perturbed().unwrap(), n).unwrap();
            assert!(r.phi.max_coeff_diff(&oracle.polys[n]) < 1e-8);
            assert_eq!(r.phi.coeff(n), c(1.0, 0.0));
            // Christoffel-type damping at the charged points.
            for (xi, m) in p.points().iter().zip(p.masses()) {
                if *m > 0.0 {
                    assert!(r.phi.eval(*xi).norm() <= ComplexPolynomial::monomial(n).eval(*xi).norm() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn d_for_n_four() {
        let d = d_coefficients(4).unwrap();
        let expected = [c(1.0, -1.0), c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)];
        for (a, b) in d.iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!((d[2].conj() - d[0]).norm() < 1e-15);
        assert!(d_coefficients(5).is_err());
    }

    #[test]
    fn d_representations_agree() {
        for n in [2, 4, 6, 16, 100, 1024, 4096] {
            let a = d_coefficients(n).unwrap();
            let b = d_coefficients_direct(n, n / 2).unwrap();
            let scale = a.iter().map(|x| x.norm()).fold(1.0, f64::max);
            for l in 1..=n {
                assert!((a[l - 1] - b[l - 1]).norm() < 1e-12 * scale, "n = {n}, l = {l}");
                if l % 2 == 0 && l < n {
                    assert_eq!(a[l - 1], c(0.0, 0.0));
                }
                if l < n {
                    assert!((a[n - l - 1].conj() - a[l - 1]).norm() < 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn construction_n4() {
        let con = lebesgue_construction(4, 0.3).unwrap();
        assert!(con.difference_residual < 1e-15);
        assert!(((1.0 + 0.9) / (1.0 + 0.6) - 1.1875f64).abs() < 1e-15);
        let oracle = monic_gram_schmidt(&con.eta, 4).unwrap();
        assert!(con.poly.phi.max_coeff_diff(&oracle.polys[4]) < 1e-8);
        let via_update = rakhmanov_update(&con.placement().unwrap(), 4, 1e-10).unwrap();
        assert!(con.poly.phi.max_coeff_diff(&via_update.phi) < 1e-13);
        assert!((con.eta.total_mass() - 1.3).abs() < 1e-13);
    }

    #[test]
    fn construction_small_epsilon_tends_to_monomial() {
        let con = lebesgue_construction(8, 1e-9).unwrap();
        assert!(con.poly.phi.max_coeff_diff(&ComplexPolynomial::monomial(8)) < 1e-8);
    }

    #[test]
    fn difference_identity_up_to_4096() {
        for n in [2, 10, 64, 512, 4096] {
            let con = lebesgue_construction(n, 0.5).unwrap();
            assert!(con.difference_residual < 1e-13, "n = {n}: {}", con.difference_residual);
            assert_eq!(con.poly.phi.coeff(n), c(1.0, 0.0));
        }
    }

    #[test]
    fn growth_rows_basic() {
        let t = growth_table(0.5, &[16, 64]).unwrap();
        for r in t.rows() {
            assert!(r.sup_norm >= r.residuals["abs_phi_at_one"]);
            assert!((r.steklov_delta - 1.0 / 1.5).abs() < 1e-12);
            let ratio = r.residuals["szego_ratio"];
            assert!(ratio <= 1.0 && ratio >= (1.0f64 / 1.5).sqrt());
        }
        assert!(t.rows()[1].sup_norm > t.rows()[0].sup_norm);
    }
}
