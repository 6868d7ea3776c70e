//! Gluing a finite Schur prefix onto the parameters of a smooth measure.
//!
//! Given `φ_n` (Bernstein–Szegő head) and a Carathéodory function `F̃` with
//! `dσ̃ = Re F̃ dθ/2π`, the measure with parameters
//! `γ_0, …, γ_{n−1}, γ̃_0, γ̃_1, …` is absolutely continuous with weight
//!
//! ```text
//! σ′ = 2 Re F̃ / (π |φ_n + φ_n* + F̃ (φ_n* − φ_n)|²).
//! ```

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::grid::{compensated_sum, golden_section_min, UnitGrid};
use crate::measure::CircleMeasure;
use crate::opuc::oracle::verblunsky_from_measure;
use crate::opuc::recursion::{
    schur_from_orthonormal, second_kind, szego_recursion, OrthonormalPair, SchurSequence,
};
use crate::opuc::szego::CaratheodoryFn;
use crate::poly::ComplexPolynomial;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct GlueInput {
    pub phi_n: OrthonormalPair,
    pub f_tilde: CaratheodoryFn,
    pub grid: UnitGrid,
    /// Number of tail parameters `γ̃_j` extracted from `dσ̃`.
    pub tail_len: usize,
}

impl GlueInput {
    /// Tail length defaults to `min(256, largest degree the grid supports)`.
    pub fn new(phi_n: OrthonormalPair, f_tilde: CaratheodoryFn, grid: UnitGrid) -> Self {
        let tail_len = 256.min((grid.size() - 1) / 2);
        Self {
            phi_n,
            f_tilde,
            grid,
            tail_len,
        }
    }

    pub fn with_tail_len(mut self, tail_len: usize) -> Self {
        self.tail_len = tail_len;
        self
    }

    pub fn n(&self) -> usize {
        self.phi_n.degree()
    }

    /// Values of `φ_n + φ_n* + F̃(φ_n* − φ_n)` on the grid.
    pub fn denominator(&self) -> Vec<Complex64> {
        let p = self.phi_n.phi.values_on(&self.grid);
        let s = self.phi_n.phi_star.values_on(&self.grid);
        let f = self.f_tilde.values_on(&self.grid);
        p.iter()
            .zip(&s)
            .zip(&f)
            .map(|((p, s), f)| p + s + f * (s - p))
            .collect()
    }
}

/// Measured values behind the three gluing hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct GlueValidation {
    pub winding: Option<i64>,
    /// `min |φ_n*|` on the grid.
    pub phi_star_min: f64,
    pub zero_free: bool,
    /// `(1/2π) ∫ |φ_n*|^{-2} dθ`, should be 1.
    pub phi_star_normalization: f64,
    pub phi_star_at_zero: Complex64,
    /// `min Re F̃` on the grid.
    pub f_min_re: f64,
    /// `(1/2π) ∫ Re F̃ dθ`, should be 1.
    pub f_mean_re: f64,
    pub f_at_zero: Complex64,
}

impl GlueValidation {
    pub fn condition_zero_free(&self) -> bool {
        self.zero_free
    }

    pub fn condition_normalized(&self, tol: f64) -> bool {
        (self.phi_star_normalization - 1.0).abs() <= tol
            && self.phi_star_at_zero.re > 0.0
            && self.phi_star_at_zero.im.abs() <= tol
    }

    pub fn condition_caratheodory(&self, tol: f64) -> bool {
        self.f_min_re > 0.0 && (self.f_mean_re - 1.0).abs() <= tol && self.f_at_zero.im.abs() <= tol
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.condition_zero_free() && self.condition_normalized(tol) && self.condition_caratheodory(tol)
    }
}

pub fn validate_glue_input(input: &GlueInput) -> GlueValidation {
    let ps = &input.phi_n.phi_star;
    let values = ps.values_on(&input.grid);
    let phi_star_min = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let winding = ps.winding_number(&input.grid);
    let zero_free = ps.zero_free_in_closed_disk(&input.grid) && winding == Some(0);
    let norm = compensated_sum(values.iter().map(|v| 1.0 / v.norm_sqr())) / input.grid.size() as f64;
    let zero = Complex64::new(0.0, 0.0);
    GlueValidation {
        winding,
        phi_star_min,
        zero_free,
        phi_star_normalization: norm,
        phi_star_at_zero: ps.eval(zero),
        f_min_re: input.f_tilde.min_real(&input.grid),
        f_mean_re: input.f_tilde.mean_real(&input.grid),
        f_at_zero: input.f_tilde.eval(zero),
    }
}

#[derive(Debug, Clone)]
pub struct GluedMeasure {
    pub sigma: CircleMeasure,
    /// `γ_0..γ_{n−1}` recovered from `φ_n`.
    pub head: SchurSequence,
    /// `γ̃_0..γ̃_{K−1}` of `dσ̃ = Re F̃ dθ/2π`.
    pub tail: SchurSequence,
    /// `head ++ tail`.
    pub glued_gamma: SchurSequence,
    /// `max |2Re F̃/(π|·|²) − 4σ̃′/|·|²|`, the two forms of the weight.
    pub form_mismatch: f64,
}

/// Samples of `σ′` on the input grid, plus the largest gap between the
/// `2 Re F̃/π` and `4σ̃′` forms of the numerator.
pub fn glued_density(input: &GlueInput) -> Result<(Vec<f64>, f64)> {
    let re_f: Vec<f64> = input.f_tilde.values_on(&input.grid).iter().map(|v| v.re).collect();
    let denom = input.denominator();
    let mut weight = Vec::with_capacity(denom.len());
    let mut mismatch: f64 = 0.0;
    for (k, (d, r)) in denom.iter().zip(&re_f).enumerate() {
        let m = d.norm_sqr();
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "glue denominator vanishes at node {k}"
            )));
        }
        let w = 2.0 * r / (PI * m);
        let tilde = r / TAU;
        mismatch = mismatch.max((w - 4.0 * tilde / m).abs());
        weight.push(w);
    }
    Ok((weight, mismatch))
}

/// Glued measure on the input grid together with its parameters.
pub fn glued_weight(input: &GlueInput) -> Result<GluedMeasure> {
    let (weight, mismatch) = glued_density(input)?;
    let sigma = CircleMeasure::from_samples(input.grid, weight, Vec::new())?;
    let head = schur_from_orthonormal(&input.phi_n.phi)?;
    let tail = tail_parameters(&input.f_tilde, input.grid, input.tail_len)?;
    let glued_gamma = glue_schur(&head, head.len(), &tail)?;
    Ok(GluedMeasure {
        sigma,
        head,
        tail,
        glued_gamma,
        form_mismatch: mismatch,
    })
}

/// `γ̃_0..γ̃_{k−1}` of `Re F̃ dθ / 2π` via the Gram–Schmidt oracle.
pub fn tail_parameters(f: &CaratheodoryFn, grid: UnitGrid, k: usize) -> Result<SchurSequence> {
    if k == 0 {
        return Ok(SchurSequence::zeros(0));
    }
    verblunsky_from_measure(&f.measure(grid)?, k)
}

/// `head ++ tail`, with `head` required to have length `n`.
pub fn glue_schur(head: &SchurSequence, n: usize, tail: &SchurSequence) -> Result<SchurSequence> {
    if head.len() != n {
        return Err(Error::InvalidParameter(format!(
            "head has {} parameters, expected {n}",
            head.len()
        )));
    }
    Ok(head.concat(tail))
}

/// One step `ρ̃^{-1} (z, −conj(γ̃); −z γ̃, 1)`.
pub fn transfer_step(gamma: Complex64, rho: f64, z: Complex64) -> Matrix2<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    Matrix2::new(z, -gamma.conj(), -z * gamma, one) / Complex64::new(rho, 0.0)
}

/// `(A_m, B_m; C_m, D_m) = T_{m−1} ⋯ T_0` with `T_j` from [`transfer_step`].
///
/// `A = (φ̃_m + ψ̃_m)/2`, `B = (φ̃_m − ψ̃_m)/2`, `C = (φ̃_m* − ψ̃_m*)/2`,
/// `D = (φ̃_m* + ψ̃_m*)/2` and `det = z^m`.
pub fn transfer_matrices(tail: &SchurSequence, m: usize, z: Complex64) -> Result<Matrix2<Complex64>> {
    if m > tail.len() {
        return Err(Error::SequenceTooShort {
            requested: m,
            available: tail.len(),
        });
    }
    let mut acc = Matrix2::identity();
    for j in 0..m {
        acc = transfer_step(tail.gamma()[j], tail.rho()[j], z) * acc;
    }
    Ok(acc)
}

/// `φ*_{n+m}` of the glued sequence computed twice.
#[derive(Debug, Clone)]
pub struct GluedPhiStar {
    /// Szegő recursion on `head ++ tail`.
    pub direct: ComplexPolynomial,
    /// `½ [φ_n (φ̃_m* − ψ̃_m*) + φ_n* (φ̃_m* + ψ̃_m*)]`.
    pub product: ComplexPolynomial,
    pub phi_tilde_star: ComplexPolynomial,
    pub psi_tilde_star: ComplexPolynomial,
    /// Max coefficient difference relative to the largest coefficient.
    pub agreement: f64,
}

pub fn glued_phi_star(input: &GlueInput, tail: &SchurSequence, m: usize, tol: f64) -> Result<GluedPhiStar> {
    if m > tail.len() {
        return Err(Error::SequenceTooShort {
            requested: m,
            available: tail.len(),
        });
    }
    let n = input.n();
    let head = schur_from_orthonormal(&input.phi_n.phi)?;
    let glued = glue_schur(&head, n, &tail.prefix(m))?;
    let direct = szego_recursion(&glued, n + m)?.pop().expect("nonempty").phi_star;
    let phi_t = szego_recursion(tail, m)?.pop().expect("nonempty").phi_star;
    let psi_t = second_kind(tail, m)?.pop().expect("nonempty").phi_star;
    let diff = &phi_t - &psi_t;
    let sum = &phi_t + &psi_t;
    let product =
        (&(&input.phi_n.phi * &diff) + &(&input.phi_n.phi_star * &sum)).scale_real(0.5);
    let agreement = direct.rel_coeff_diff(&product);
    if !(agreement <= tol) {
        return Err(Error::Identity {
            what: "glued phi* product formula",
            residual: agreement,
            tolerance: tol,
        });
    }
    Ok(GluedPhiStar {
        direct,
        product,
        phi_tilde_star: phi_t,
        psi_tilde_star: psi_t,
        agreement,
    })
}

/// `sup |2φ*_{n+m}/φ̃_m* − (φ_n + φ_n* + F̃(φ_n* − φ_n))|` on the grid.
pub fn limit_residual(input: &GlueInput, g: &GluedPhiStar) -> f64 {
    let d = g.direct.values_on(&input.grid);
    let t = g.phi_tilde_star.values_on(&input.grid);
    input
        .denominator()
        .iter()
        .zip(d.iter().zip(&t))
        .map(|(b, (d, t))| (2.0 * d / t - b).norm())
        .fold(0.0, f64::max)
}

/// Growth and cancellation diagnostics of a glue input.
#[derive(Debug, Clone, PartialEq)]
pub struct DecouplingReport {
    pub n: usize,
    /// `|φ_n(1)| / √n`.
    pub phi_at_one_over_sqrt_n: f64,
    pub phi_at_one: f64,
    /// `sup (|φ_n*| + |F̃(φ_n* − φ_n)|)/√(Re F̃)`.
    pub ratio_sup: f64,
    pub ratio_argmax_theta: f64,
    /// The ratio at `θ = π/n`.
    pub ratio_near_one: f64,
}

/// `(|φ_n*(z)| + |F̃(z)(φ_n*(z) − φ_n(z))|) / √(Re F̃(z))` at `z = e^{iθ}`.
pub fn cancellation_ratio(input: &GlueInput, theta: f64) -> f64 {
    let z = Complex64::from_polar(1.0, theta);
    let p = input.phi_n.phi.eval(z);
    let s = input.phi_n.phi_star.eval(z);
    let f = input.f_tilde.eval(z);
    (s.norm() + (f * (s - p)).norm()) / f.re.sqrt()
}

pub fn decoupling_diagnostics(input: &GlueInput) -> Result<DecouplingReport> {
    let n = input.n();
    let size = input.grid.size().max(32 * n).next_power_of_two();
    let grid = UnitGrid::new(size)?;
    let p = input.phi_n.phi.values_on(&grid);
    let s = input.phi_n.phi_star.values_on(&grid);
    let f = input.f_tilde.values_on(&grid);
    let mut best = (f64::NEG_INFINITY, 0usize);
    for k in 0..size {
        if !(f[k].re > 0.0) {
            return Err(Error::InvalidParameter(format!("Re F̃ ≤ 0 at node {k}")));
        }
        let r = (s[k].norm() + (f[k] * (s[k] - p[k])).norm()) / f[k].re.sqrt();
        if r > best.0 {
            best = (r, k);
        }
    }
    let h = grid.step();
    let t0 = grid.angle(best.1);
    let t = golden_section_min(t0 - h, t0 + h, 200, |t| -cancellation_ratio(input, t));
    let refined = cancellation_ratio(input, t).max(best.0);
    let phi1 = input.phi_n.phi.eval(Complex64::new(1.0, 0.0)).norm();
    let mut theta = crate::grid::wrap_angle(t);
    if theta > PI {
        theta -= TAU;
    }
    Ok(DecouplingReport {
        n,
        phi_at_one_over_sqrt_n: phi1 / (n.max(1) as f64).sqrt(),
        phi_at_one: phi1,
        ratio_sup: refined,
        ratio_argmax_theta: theta,
        ratio_near_one: cancellation_ratio(input, PI / n.max(1) as f64),
    })
}
