//! Measures on the unit circle: a density against `dθ` sampled on a
//! [`UnitGrid`] (optionally backed by a closed form) plus a finite list of
//! atoms that are always summed exactly.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::grid::{compensated_sum, wrap_angle, ComplexSum, UnitGrid};
use crate::poly::ComplexPolynomial;
use crate::{Error, Result};

/// Tolerance for the "probability" flag on total mass.
pub const PROBABILITY_TOL: f64 = 1e-10;

/// Point mass `mass·δ_θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub theta: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(theta: f64, mass: f64) -> Self {
        Self {
            theta: wrap_angle(theta),
            mass,
        }
    }

    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

pub type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `dµ = σ′(θ) dθ + Σ m_j δ_{θ_j}`.
#[derive(Clone)]
pub struct CircleMeasure {
    grid: UnitGrid,
    weight: Vec<f64>,
    density: Option<Density>,
    atoms: Vec<Atom>,
    total_mass: f64,
}

impl fmt::Debug for CircleMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircleMeasure")
            .field("grid", &self.grid.size())
            .field("closed_form", &self.density.is_some())
            .field("atoms", &self.atoms)
            .field("total_mass", &self.total_mass)
            .finish()
    }
}

impl CircleMeasure {
    /// Builds a measure from density samples on `grid` and a list of atoms.
    pub fn from_samples(grid: UnitGrid, weight: Vec<f64>, atoms: Vec<Atom>) -> Result<Self> {
        grid.check_len(weight.len())?;
        if let Some((k, w)) = weight.iter().enumerate().find(|(_, w)| !(**w >= 0.0)) {
            return Err(Error::InvalidMeasure(format!(
                "weight {w} at node {k} is negative or not finite"
            )));
        }
        let atoms: Vec<Atom> = atoms.into_iter().map(|a| Atom::new(a.theta, a.mass)).collect();
        if let Some(a) = atoms.iter().find(|a| !(a.mass >= 0.0) || !a.mass.is_finite()) {
            return Err(Error::InvalidMeasure(format!("atom mass {} is negative", a.mass)));
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                if (a.point() - b.point()).norm() < 1e-14 {
                    return Err(Error::InvalidMeasure(format!(
                        "duplicate atom at angle {}",
                        a.theta
                    )));
                }
            }
        }
        let ac = grid.step() * compensated_sum(weight.iter().copied());
        let total_mass = ac + compensated_sum(atoms.iter().map(|a| a.mass));
        Ok(Self {
            grid,
            weight,
            density: None,
            atoms,
            total_mass,
        })
    }

    /// Samples a closed-form density on `grid` and keeps the closed form for
    /// point queries.
    pub fn from_density(
        grid: UnitGrid,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
        atoms: Vec<Atom>,
    ) -> Result<Self> {
        let weight: Vec<f64> = grid.angles().map(&density).collect();
        let mut m = Self::from_samples(grid, weight, atoms)?;
        m.density = Some(Arc::new(density));
        Ok(m)
    }

    /// Attaches a closed form for point queries to an already sampled measure.
    pub fn with_density(mut self, density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.density = Some(Arc::new(density));
        self
    }

    /// Probability Lebesgue measure `dθ/2π`.
    pub fn lebesgue(grid: UnitGrid) -> Self {
        Self::from_density(grid, |_| 1.0 / TAU, Vec::new()).expect("constant density is valid")
    }

    /// Measure with no absolutely continuous part.
    pub fn atoms_only(grid: UnitGrid, atoms: Vec<Atom>) -> Result<Self> {
        Self::from_density(grid, |_| 0.0, atoms)
    }

    /// Adds further atoms, keeping the density.
    pub fn with_atoms(&self, extra: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut atoms = self.atoms.clone();
        atoms.extend(extra);
        let mut m = Self::from_samples(self.grid, self.weight.clone(), atoms)?;
        m.density = self.density.clone();
        Ok(m)
    }

    /// `α·µ` for `α > 0`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("scale {alpha} must be positive")));
        }
        let weight = self.weight.iter().map(|w| w * alpha).collect();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(a.theta, a.mass * alpha))
            .collect();
        let mut m = Self::from_samples(self.grid, weight, atoms)?;
        m.density = self.density.clone().map(|d| {
            let d: Density = Arc::new(move |t| alpha * d(t));
            d
        });
        Ok(m)
    }

    pub fn grid(&self) -> &UnitGrid {
        &self.grid
    }

    pub fn weight_samples(&self) -> &[f64] {
        &self.weight
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn has_closed_form(&self) -> bool {
        self.density.is_some()
    }

    pub fn is_probability(&self) -> bool {
        (self.total_mass - 1.0).abs() <= PROBABILITY_TOL
    }

    /// `σ′(θ)`: closed form when available, otherwise periodic linear
    /// interpolation of the samples.
    pub fn weight_at(&self, theta: f64) -> f64 {
        if let Some(d) = &self.density {
            return d(theta);
        }
        let n = self.grid.size();
        let x = wrap_angle(theta) / self.grid.step();
        let k = (x.floor() as usize) % n;
        let frac = x - x.floor();
        self.weight[k] * (1.0 - frac) + self.weight[(k + 1) % n] * frac
    }

    /// Absolutely continuous mass `∫σ′ dθ`.
    pub fn ac_mass(&self) -> f64 {
        self.grid.step() * compensated_sum(self.weight.iter().copied())
    }

    /// Inner product of sampled functions: `f`, `g` are grid samples and
    /// `f_atoms`, `g_atoms` their exact values at the atoms (same order as
    /// [`atoms`](Self::atoms)).
    pub fn inner_samples(
        &self,
        f: &[Complex64],
        g: &[Complex64],
        f_atoms: &[Complex64],
        g_atoms: &[Complex64],
    ) -> Result<Complex64> {
        self.grid.check_len(f.len())?;
        self.grid.check_len(g.len())?;
        if f_atoms.len() != self.atoms.len() || g_atoms.len() != self.atoms.len() {
            return Err(Error::InvalidParameter(
                "atom values do not match the atom list".into(),
            ));
        }
        let mut ac = ComplexSum::default();
        for k in 0..f.len() {
            ac.add(f[k] * g[k].conj() * self.weight[k]);
        }
        let mut total = ComplexSum::default();
        total.add(ac.value() * self.grid.step());
        for (j, a) in self.atoms.iter().enumerate() {
            total.add(f_atoms[j] * g_atoms[j].conj() * a.mass);
        }
        Ok(total.value())
    }

    /// Moments `c_k = ∫ e^{-ikθ} dµ` for `k = 0..=k_max` (FFT of the samples
    /// plus exact atom contributions).
    pub fn moments(&self, k_max: usize) -> Result<Vec<Complex64>> {
        let n = self.grid.size();
        if 2 * k_max >= n {
            return Err(Error::GridTooSmall { size: n, degree: k_max });
        }
        let samples: Vec<Complex64> = self.weight.iter().map(|&w| Complex64::new(w, 0.0)).collect();
        let spec = self.grid.analyze(&samples)?;
        Ok((0..=k_max)
            .map(|k| {
                let atoms: Complex64 = self
                    .atoms
                    .iter()
                    .map(|a| Complex64::from_polar(a.mass, -(k as f64) * a.theta))
                    .sum();
                spec[k] * TAU + atoms
            })
            .collect())
    }
}

/// Points on which a function can be integrated against a [`CircleMeasure`].
pub trait CircleFunction {
    /// Degree bound of the function as a polynomial in `z`.
    fn degree(&self) -> usize;
    fn at(&self, z: Complex64) -> Complex64;
    fn samples(&self, grid: &UnitGrid) -> Vec<Complex64>;
}

impl CircleFunction for ComplexPolynomial {
    fn degree(&self) -> usize {
        ComplexPolynomial::degree(self)
    }

    fn at(&self, z: Complex64) -> Complex64 {
        self.eval(z)
    }

    fn samples(&self, grid: &UnitGrid) -> Vec<Complex64> {
        self.values_on(grid)
    }
}

/// `∫ f ḡ dµ`, rectangle rule on the grid plus exact atom sums.
pub fn quad_inner<F, G>(f: &F, g: &G, mu: &CircleMeasure) -> Result<Complex64>
where
    F: CircleFunction + ?Sized,
    G: CircleFunction + ?Sized,
{
    mu.grid.require_degree(f.degree().max(g.degree()))?;
    let fa: Vec<Complex64> = mu.atoms.iter().map(|a| f.at(a.point())).collect();
    let ga: Vec<Complex64> = mu.atoms.iter().map(|a| g.at(a.point())).collect();
    mu.inner_samples(&f.samples(&mu.grid), &g.samples(&mu.grid), &fa, &ga)
}

/// `c_k = ∫ e^{-ikθ} dµ`, with `c_{-k} = conj(c_k)`.
pub fn moment(mu: &CircleMeasure, k: i64) -> Result<Complex64> {
    let n = mu.grid.size();
    let ka = k.unsigned_abs() as usize;
    if 2 * ka >= n {
        return Err(Error::GridTooSmall { size: n, degree: ka });
    }
    let mut ac = ComplexSum::default();
    for (j, w) in mu.weight.iter().enumerate() {
        // Reduce the phase index mod N so every node uses an exact table angle.
        let idx = (ka * j) % n;
        ac.add(Complex64::from_polar(*w, -mu.grid.angle(idx)));
    }
    let mut total = ComplexSum::default();
    total.add(ac.value() * mu.grid.step());
    for a in &mu.atoms {
        total.add(Complex64::from_polar(a.mass, -(ka as f64) * a.theta));
    }
    let c = total.value();
    Ok(if k < 0 { c.conj() } else { c })
}

/// Returns `(µ/α, α)` with `α = ‖µ‖`.
pub fn normalize(mu: &CircleMeasure) -> Result<(CircleMeasure, f64)> {
    let alpha = mu.total_mass;
    if !(alpha > 0.0) {
        return Err(Error::ZeroMass);
    }
    Ok((mu.scaled(1.0 / alpha)?, alpha))
}

/// Result of testing `σ′ ≥ δ/2π` on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteklovCertificate {
    pub delta: f64,
    pub min_weight: f64,
    /// `sup |σ′ − 1/2π|` over the grid.
    pub max_deviation: f64,
}

impl SteklovCertificate {
    pub fn is_valid(&self) -> bool {
        self.min_weight >= self.delta / TAU
    }

    /// Largest `δ` the measure certifies, `2π·min σ′`.
    pub fn attained_delta(&self) -> f64 {
        TAU * self.min_weight
    }
}

pub fn steklov_check(mu: &CircleMeasure, delta: f64) -> SteklovCertificate {
    let min_weight = mu.weight.iter().copied().fold(f64::INFINITY, f64::min);
    let max_deviation = mu
        .weight
        .iter()
        .map(|w| (w - 1.0 / TAU).abs())
        .fold(0.0, f64::max);
    SteklovCertificate {
        delta,
        min_weight,
        max_deviation,
    }
}
