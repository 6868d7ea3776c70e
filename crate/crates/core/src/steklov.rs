//! Measures in the Steklov class whose orthonormal polynomials grow like
//! `ε log n`.
//!
//! `M_n` is the Fejér mean of the Cauchy transform `L` of the square wave
//! `l = χ_{(0,π)} − χ_{(π,2π)}`. With `D_n = M_n + b` and `F̃ = 1 − 2εM_n`,
//! the polynomial `φ_n* = a(1 + ε(D_n + D_n*))` glued to `F̃` gives a weight
//! within `O(ε)` of `1/2π`, while `φ_n` picks up `2iε Im M_n ∼ ε log n` next
//! to `z = ±1`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::gluing::{decoupling_diagnostics, glued_density, DecouplingReport, GlueInput};
use crate::grid::{compensated_sum, wrap_angle, UnitGrid};
use crate::measure::{steklov_check, CircleMeasure, SteklovCertificate};
use crate::opuc::recursion::OrthonormalPair;
use crate::opuc::szego::CaratheodoryFn;
use crate::poly::{star, ComplexPolynomial};
use crate::rakhmanov::d_coefficients;
use crate::report::{Comparator, GrowthRow};
use crate::{Error, Result};

/// Largest `ε` accepted by [`build_construction`].
pub const EPSILON_MAX: f64 = 0.4;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `+1` on `(0, π)`, `−1` on `(π, 2π)` and `0` at the jumps.
pub fn step_symbol(theta: f64) -> f64 {
    let t = wrap_angle(theta);
    if t == 0.0 || t == PI {
        0.0
    } else if t < PI {
        1.0
    } else {
        -1.0
    }
}

/// Taylor coefficients `0..len` of `L`: `4/(iπk)` for odd `k`, else 0.
pub fn step_cauchy_coefficients(len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|k| {
            if k % 2 == 1 {
                Complex64::new(0.0, -4.0 / (PI * k as f64))
            } else {
                ZERO
            }
        })
        .collect()
}

/// `L(z) = (1/2π) ∫ C(z, e^{iθ}) l(θ) dθ = (2/(iπ)) log((1+z)/(1−z))`.
pub fn cauchy_transform_step(z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisk { modulus: z.norm() });
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(((one + z) / (one - z)).ln() * Complex64::new(0.0, -2.0 / PI))
}

/// Analytic polynomial of degree `n − 1` with bounded real part and
/// logarithmically large imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct LogBlowupPolynomial {
    pub m: ComplexPolynomial,
    pub n: usize,
}

/// Measured invariants of a [`LogBlowupPolynomial`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupDiagnostics {
    pub at_zero: f64,
    /// `(1/2π) ∫ Re M_n dθ`.
    pub mean_re: f64,
    pub max_abs_re: f64,
    pub max_abs_im: f64,
    /// `|Im M_n(e^{i/n})|`.
    pub im_at_one_over_n: f64,
}

impl LogBlowupPolynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.m.eval(z)
    }

    pub fn diagnostics(&self, grid: &UnitGrid) -> BlowupDiagnostics {
        let v = self.m.values_on(grid);
        BlowupDiagnostics {
            at_zero: self.m.coeff(0).norm(),
            mean_re: compensated_sum(v.iter().map(|z| z.re)) / v.len() as f64,
            max_abs_re: v.iter().map(|z| z.re.abs()).fold(0.0, f64::max),
            max_abs_im: v.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
            im_at_one_over_n: self
                .m
                .eval(Complex64::from_polar(1.0, 1.0 / self.n as f64))
                .im
                .abs(),
        }
    }
}

/// `M_n = F_n ∗ L`: coefficients `(1 − k/n) L_k` for `1 ≤ k ≤ n − 1`.
pub fn fejer_smooth(l: &[Complex64], n: usize) -> Result<LogBlowupPolynomial> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 2")));
    }
    let mut c = vec![ZERO; n];
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        let lk = l.get(k).copied().unwrap_or(ZERO);
        *ck = lk * (1.0 - k as f64 / n as f64);
    }
    Ok(LogBlowupPolynomial {
        m: ComplexPolynomial::new(c),
        n,
    })
}

/// Cross-check of [`fejer_smooth`]: samples `l` on `grid`, convolves with the
/// sampled Fejér kernel and takes the Cauchy transform of the result.
pub fn fejer_smooth_numerical(n: usize, grid: &UnitGrid) -> Result<LogBlowupPolynomial> {
    grid.require_degree(n)?;
    let samples: Vec<Complex64> = grid.angles().map(|t| Complex64::new(step_symbol(t), 0.0)).collect();
    let lhat = grid.analyze(&samples)?;
    // Fejér kernel (1/n)|Σ_{k<n} e^{ikθ}|², whose coefficients are 1 − |k|/n.
    let kernel: Vec<Complex64> = grid
        .angles()
        .map(|t| {
            let half = t / 2.0;
            let v = if half.sin().abs() < 1e-300 {
                n as f64
            } else {
                ((n as f64 * half).sin() / half.sin()).powi(2) / n as f64
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    let fhat = grid.analyze(&kernel)?;
    let mut c = vec![ZERO; n];
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        // The Cauchy transform doubles positive frequencies.
        *ck = lhat[k] * fhat[k] * 2.0;
    }
    Ok(LogBlowupPolynomial {
        m: ComplexPolynomial::new(c),
        n,
    })
}

/// The assembled Steklov construction for one `(n, ε, b)`.
#[derive(Debug, Clone)]
pub struct SteklovConstruction {
    pub n: usize,
    pub epsilon: f64,
    pub b: f64,
    pub m_n: LogBlowupPolynomial,
    pub d_n: ComplexPolynomial,
    pub f_tilde: CaratheodoryFn,
    pub phi_star: ComplexPolynomial,
    pub phi: ComplexPolynomial,
    pub a: f64,
    pub grid: UnitGrid,
    pub sigma: CircleMeasure,
    pub checks: ConstructionChecks,
}

/// Side measurements taken while building a construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructionChecks {
    /// `[min, max]` of `Re D_n` on the grid.
    pub re_d_range: (f64, f64),
    /// `[min, max]` of `Re F̃` on the grid.
    pub re_f_range: (f64, f64),
    /// `(1/2π) ∫ Re F̃ dθ`.
    pub re_f_mean: f64,
    /// `(1/2π) ∫ |1 + ε(D_n + D_n*)|^{-2} dθ = a²`.
    pub inverse_l2: f64,
    /// `(1/2π) ∫ |D_n|² dθ`.
    pub d_l2: f64,
    /// `max |coeff(φ_n − a(z^n + ε(D_n + D_n*)))|`.
    pub phi_formula_residual: f64,
    /// `max |coeff(φ_n* − φ_n − a(1 − z^n))|`.
    pub difference_residual: f64,
    /// `(1/2π) ∫ |φ_n*|^{-2} dθ`, 1 after normalisation.
    pub normalization: f64,
}

impl SteklovConstruction {
    pub fn pair(&self) -> OrthonormalPair {
        OrthonormalPair {
            phi: self.phi.clone(),
            phi_star: self.phi_star.clone(),
            kappa: self.kappa(),
        }
    }

    pub fn glue_input(&self) -> GlueInput {
        GlueInput::new(self.pair(), self.f_tilde.clone(), self.grid)
    }

    /// `κ_n = a(1 + εb)`.
    pub fn kappa(&self) -> f64 {
        self.phi.coeff(self.n).re
    }

    pub fn steklov(&self, delta: f64) -> SteklovCertificate {
        steklov_check(&self.sigma, delta)
    }
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Builds `D_n`, `F̃`, `φ_n*`, `φ_n`, fixes `a` and glues `σ`.
pub fn build_construction(n: usize, epsilon: f64, b: f64) -> Result<SteklovConstruction> {
    if !(epsilon > 0.0 && epsilon <= EPSILON_MAX) {
        return Err(Error::InvalidParameter(format!(
            "ε = {epsilon} outside (0, {EPSILON_MAX}]"
        )));
    }
    if !(b > 1.0) {
        return Err(Error::InvalidParameter(format!("b = {b} must exceed 1")));
    }
    let m_n = fejer_smooth(&step_cauchy_coefficients(n), n)?;
    let grid = UnitGrid::for_degree(n);

    let mut dc = m_n.m.coeffs().to_vec();
    dc[0] += b;
    let d_n = ComplexPolynomial::new(dc);
    let d_star = star(&d_n, n)?;
    let sum = &d_n.raised_to(n)? + &d_star;
    let inner = &ComplexPolynomial::one().raised_to(n)? + &sum.scale_real(epsilon);

    let inner_vals = inner.values_on(&grid);
    let inverse_l2 = compensated_sum(inner_vals.iter().map(|v| 1.0 / v.norm_sqr())) / grid.size() as f64;
    let a = inverse_l2.sqrt();
    let phi_star = inner.scale_real(a);
    if !phi_star.zero_free_in_closed_disk(&grid) {
        return Err(Error::ZeroInClosedDisk);
    }
    let phi = star(&phi_star, n)?;
    let formula = (&ComplexPolynomial::monomial(n) + &sum.scale_real(epsilon)).scale_real(a);
    let phi_formula_residual = phi.max_coeff_diff(&formula);
    let mut diff_target = vec![ZERO; n + 1];
    diff_target[0] = Complex64::new(a, 0.0);
    diff_target[n] = Complex64::new(-a, 0.0);
    let difference_residual = (&phi_star - &phi).max_coeff_diff(&ComplexPolynomial::new(diff_target));

    let f_poly = m_n.m.scale_real(-2.0 * epsilon);
    let mut fc = f_poly.into_coeffs();
    fc[0] += 1.0;
    let f_tilde = CaratheodoryFn::Polynomial(ComplexPolynomial::new(fc));
    let f_vals = f_tilde.values_on(&grid);
    let re_f_range = range(f_vals.iter().map(|v| v.re));
    if !(re_f_range.0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Re F̃ reaches {} on the grid",
            re_f_range.0
        )));
    }
    let re_f_mean = compensated_sum(f_vals.iter().map(|v| v.re)) / grid.size() as f64;
    let d_vals = d_n.values_on(&grid);
    let re_d_range = range(d_vals.iter().map(|v| v.re));
    let d_l2 = compensated_sum(d_vals.iter().map(|v| v.norm_sqr())) / grid.size() as f64;
    let normalization = compensated_sum(phi_star.values_on(&grid).iter().map(|v| 1.0 / v.norm_sqr()))
        / grid.size() as f64;

    let mut c = SteklovConstruction {
        n,
        epsilon,
        b,
        m_n,
        d_n,
        f_tilde,
        phi_star,
        phi,
        a,
        grid,
        sigma: CircleMeasure::lebesgue(grid),
        checks: ConstructionChecks {
            re_d_range,
            re_f_range,
            re_f_mean,
            inverse_l2,
            d_l2,
            phi_formula_residual,
            difference_residual,
            normalization,
        },
    };
    c.sigma = closed_form_weight(&c)?.sigma;
    Ok(c)
}

/// `σ′` from the closed-form denominator, compared with the glued weight.
#[derive(Debug, Clone)]
pub struct ClosedFormWeight {
    pub sigma: CircleMeasure,
    /// `max |direct − closed form|` of the denominator.
    pub denominator_residual: f64,
    /// `max |σ′_closed − σ′_glued|`.
    pub path_mismatch: f64,
    /// `sup |2πσ′ − 1|`.
    pub deviation: f64,
    /// `sup |2πσ′ − a^{-2}|`.
    pub deviation_from_a: f64,
}

/// `σ′ = 2 Re F̃ / (π |2a(1 + εb(1 + z^n) + 2ε z^n Re M_n)|²)`.
///
/// Fails when either the denominator identity or the weight disagrees with
/// the glued weight beyond `1e−10`.
pub fn closed_form_weight(c: &SteklovConstruction) -> Result<ClosedFormWeight> {
    let grid = c.grid;
    let m_vals = c.m_n.m.values_on(&grid);
    let f_vals = c.f_tilde.values_on(&grid);
    let input = c.glue_input();
    let direct = input.denominator();
    let (glued, _) = glued_density(&input)?;
    let mut weight = Vec::with_capacity(grid.size());
    let mut den_res: f64 = 0.0;
    let mut path: f64 = 0.0;
    let (eps, b, a) = (c.epsilon, c.b, c.a);
    let mut scale: f64 = 0.0;
    for k in 0..grid.size() {
        let zn = Complex64::from_polar(1.0, wrap_angle(grid.angle(k) * c.n as f64));
        let closed = 2.0 * a * (1.0 + eps * b * (1.0 + zn) + 2.0 * eps * zn * m_vals[k].re);
        den_res = den_res.max((closed - direct[k]).norm());
        scale = scale.max(closed.norm());
        let w = 2.0 * f_vals[k].re / (PI * closed.norm_sqr());
        path = path.max((w - glued[k]).abs() / w.abs().max(1.0 / TAU));
        weight.push(w);
    }
    // z^n from the angle; exact on the grid up to argument reduction.
    if den_res > 1e-10 * scale.max(1.0) {
        return Err(Error::Identity {
            what: "closed-form glue denominator",
            residual: den_res,
            tolerance: 1e-10,
        });
    }
    if path > 1e-10 {
        return Err(Error::Identity {
            what: "closed-form weight against glued weight",
            residual: path,
            tolerance: 1e-10,
        });
    }
    let deviation = weight.iter().map(|w| (TAU * w - 1.0).abs()).fold(0.0, f64::max);
    let deviation_from_a = weight
        .iter()
        .map(|w| (TAU * w - 1.0 / (a * a)).abs())
        .fold(0.0, f64::max);
    Ok(ClosedFormWeight {
        sigma: CircleMeasure::from_samples(grid, weight, Vec::new())?,
        denominator_residual: den_res,
        path_mismatch: path,
        deviation,
        deviation_from_a,
    })
}

/// `|φ_n(z̃_n)|` at `z̃_n = e^{iπ/n}`, the grid sup of `|φ_n|`, and
/// `|M_n(z̃_n) + z̃_n^n conj(M_n(z̃_n))| = 2|Im M_n(z̃_n)|`.
pub fn verify_growth(c: &SteklovConstruction) -> GrowthRow {
    let n = c.n;
    let zt = Complex64::from_polar(1.0, PI / n as f64);
    let phi_t = c.phi.eval(zt).norm();
    let mt = c.m_n.eval(zt);
    let combo = (mt + zt.powu(n as u32) * mt.conj()).norm();
    let max = c.phi.sup_on_circle(8192, &[0.0, PI], 20.0 / n as f64);
    let cert = c.steklov(0.0);
    let mut residuals = BTreeMap::new();
    residuals.insert("abs_phi_at_tilde_z".to_string(), phi_t);
    residuals.insert("m_combination_at_tilde_z".to_string(), combo);
    residuals.insert("two_abs_im_m_at_tilde_z".to_string(), 2.0 * mt.im.abs());
    residuals.insert("a".to_string(), c.a);
    residuals.insert("szego_ratio".to_string(), 1.0 / c.kappa());
    residuals.insert("weight_deviation".to_string(), cert.max_deviation * TAU);
    residuals.insert("difference_identity".to_string(), c.checks.difference_residual);
    GrowthRow {
        n,
        epsilon: c.epsilon,
        sup_norm: max.value,
        argmax_theta: max.theta,
        comparator: Comparator::EpsLog.eval(c.epsilon, n),
        comparator_kind: Comparator::EpsLog,
        steklov_delta: cert.attained_delta(),
        residuals,
    }
}

/// `sup_θ |Σ_{j≤N} sin(jθ)/j|` over `grid`.
pub fn sine_sum_sup(terms: usize, grid: &UnitGrid) -> f64 {
    let mut c = vec![ZERO; terms + 1];
    for (j, cj) in c.iter_mut().enumerate().skip(1) {
        *cj = Complex64::new(1.0 / j as f64, 0.0);
    }
    // Σ e^{ijθ}/j has imaginary part Σ sin(jθ)/j.
    ComplexPolynomial::new(c)
        .values_on(grid)
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0, f64::max)
}

/// One choice of `C` in `F̃ = 1 + CεM_n` for the Rakhmanov variant.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantTrial {
    pub c: f64,
    pub f_min_re: f64,
    pub f_mean_re: f64,
    /// `min/max 2πσ′` of the glued weight; `None` if gluing failed.
    pub weight_range: Option<(f64, f64)>,
    pub mass: Option<f64>,
    pub caratheodory: bool,
}

impl VariantTrial {
    /// Valid Carathéodory function and a weight bounded below by `δ/2π`.
    pub fn is_steklov(&self, delta: f64) -> bool {
        self.caratheodory && self.weight_range.is_some_and(|(lo, _)| lo >= delta)
    }
}

/// Rakhmanov's polynomial rewritten as `Φ_n* = 1 − εb z^n − 2εM_n`.
#[derive(Debug, Clone)]
pub struct RakhmanovVariant {
    pub n: usize,
    pub epsilon: f64,
    pub b: f64,
    pub m_n: LogBlowupPolynomial,
    pub monic_star: ComplexPolynomial,
    /// Against the closed form from the point-mass construction.
    pub closed_form_residual: f64,
    pub blowup: BlowupDiagnostics,
    /// `[min, max]` of `Re Φ_n*`.
    pub re_phi_star_range: (f64, f64),
    /// `∫ |Φ_n*|^{-2} dθ`.
    pub integral: f64,
    pub a: f64,
    pub pair: OrthonormalPair,
    pub trials: Vec<VariantTrial>,
    pub grid: UnitGrid,
}

impl RakhmanovVariant {
    /// `2(1 + 2ε)/(1 + 3ε)`, for which `F̃ = 1 + CεM_n` cancels the
    /// unbounded part of the glue denominator exactly.
    pub fn cancelling_c(&self) -> f64 {
        2.0 * (1.0 + 2.0 * self.epsilon) / (1.0 + 3.0 * self.epsilon)
    }

    pub fn best_trial(&self) -> Option<&VariantTrial> {
        self.trials
            .iter()
            .filter(|t| t.caratheodory && t.weight_range.is_some())
            .max_by(|a, b| {
                let la = a.weight_range.unwrap().0;
                let lb = b.weight_range.unwrap().0;
                la.total_cmp(&lb)
            })
    }
}

/// Builds the variant and glues it with `F̃ = 1 + CεM_n` for each `C` in
/// `cs` (the cancelling value is always appended).
pub fn rakhmanov_variant(n: usize, epsilon: f64, cs: &[f64]) -> Result<RakhmanovVariant> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("ε = {epsilon} must lie in (0, 1)")));
    }
    let d = d_coefficients(n)?;
    let m = (n / 2) as f64;
    let b = 1.0 / (1.0 + 2.0 * epsilon);
    let scale = 1.0 / (2.0 * m * (1.0 + 2.0 * epsilon));
    let mut mc = vec![ZERO; n];
    for l in 1..n {
        mc[l] = d[l - 1] * scale;
    }
    let m_n = LogBlowupPolynomial {
        m: ComplexPolynomial::new(mc),
        n,
    };
    let mut sc = m_n.m.scale_real(-2.0 * epsilon).raised_to(n)?.into_coeffs();
    sc[0] += 1.0;
    sc[n] -= epsilon * b;
    let monic_star = ComplexPolynomial::new(sc);
    let closed = crate::rakhmanov::lebesgue_construction(n, epsilon)?;
    let closed_form_residual = monic_star.max_coeff_diff(&closed.poly.phi_star);

    let grid = UnitGrid::for_degree(n);
    let blowup = m_n.diagnostics(&grid);
    let vals = monic_star.values_on(&grid);
    let re_phi_star_range = range(vals.iter().map(|v| v.re));
    let mean_inv = compensated_sum(vals.iter().map(|v| 1.0 / v.norm_sqr())) / grid.size() as f64;
    let integral = TAU * mean_inv;
    let a = mean_inv.sqrt();
    if !monic_star.zero_free_in_closed_disk(&grid) {
        return Err(Error::ZeroInClosedDisk);
    }
    let phi_star = monic_star.scale_real(a);
    let phi = star(&phi_star, n)?;
    let pair = OrthonormalPair {
        kappa: phi.coeff(n).re,
        phi,
        phi_star,
    };

    let mut all: Vec<f64> = cs.to_vec();
    let cancel = 2.0 * (1.0 + 2.0 * epsilon) / (1.0 + 3.0 * epsilon);
    if !all.iter().any(|c| (c - cancel).abs() < 1e-15) {
        all.push(cancel);
    }
    let trials = all
        .into_iter()
        .map(|cc| {
            let mut fc = m_n.m.scale_real(cc * epsilon).into_coeffs();
            fc[0] += 1.0;
            let f = CaratheodoryFn::Polynomial(ComplexPolynomial::new(fc));
            let f_min_re = f.min_real(&grid);
            let f_mean_re = f.mean_real(&grid);
            let caratheodory = f_min_re > 0.0 && (f_mean_re - 1.0).abs() < 1e-10;
            let input = GlueInput::new(pair.clone(), f, grid);
            let (weight_range, mass) = if caratheodory {
                match glued_density(&input) {
                    Ok((w, _)) => {
                        let mass = grid.step() * compensated_sum(w.iter().copied());
                        (Some(range(w.iter().map(|x| TAU * x))), Some(mass))
                    }
                    Err(_) => (None, None),
                }
            } else {
                (None, None)
            };
            VariantTrial {
                c: cc,
                f_min_re,
                f_mean_re,
                weight_range,
                mass,
                caratheodory,
            }
        })
        .collect();

    Ok(RakhmanovVariant {
        n,
        epsilon,
        b,
        m_n,
        monic_star,
        closed_form_residual,
        blowup,
        re_phi_star_range,
        integral,
        a,
        pair,
        trials,
        grid,
    })
}

/// The cancellation ratio of the gluing hypotheses, which this construction
/// does not satisfy uniformly in `n`.
pub fn sec1_violation_demo(c: &SteklovConstruction) -> Result<DecouplingReport> {
    decoupling_diagnostics(&c.glue_input())
}
