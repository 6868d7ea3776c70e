//! Bernstein–Szegő measures, Carathéodory functions and Szegő functions.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::grid::{ComplexSum, UnitGrid};
use crate::measure::{normalize, CircleMeasure};
use crate::opuc::oracle::monic_gram_schmidt;
use crate::opuc::recursion::OrthonormalPair;
use crate::poly::ComplexPolynomial;
use crate::{Error, Result};

/// `dµ_N = dθ / (2π |φ_N*(e^{iθ})|²)`.
pub fn bernstein_szego_measure(pair: &OrthonormalPair, grid: UnitGrid) -> Result<CircleMeasure> {
    if !pair.phi_star.zero_free_in_closed_disk(&grid) {
        return Err(Error::ZeroInClosedDisk);
    }
    let values = pair.phi_star.values_on(&grid);
    let weight: Vec<f64> = values.iter().map(|v| 1.0 / (TAU * v.norm_sqr())).collect();
    let mu = CircleMeasure::from_samples(grid, weight, Vec::new())?;
    let poly = pair.phi_star.clone();
    let density = move |t: f64| 1.0 / (TAU * poly.eval(Complex64::from_polar(1.0, t)).norm_sqr());
    // Closed form for point queries, samples from the FFT path.
    Ok(mu.with_density(density))
}

/// Smallest power-of-two grid on which the rectangle rule integrates
/// `1/|φ_N*|²` to roughly machine precision, capped at `max_size`.
///
/// The aliasing error decays like `r^{-size}` with `r` the smallest root
/// modulus of `φ_N*`, and the zeros of `φ_N` can sit close to the circle.
pub fn bernstein_szego_grid(pair: &OrthonormalPair, max_size: usize) -> UnitGrid {
    let base = UnitGrid::for_degree(pair.degree());
    let r = pair
        .phi_star
        .roots()
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min);
    let need = if r.is_finite() && r > 1.0 {
        (40.0 / r.ln()).min(max_size as f64) as usize
    } else {
        base.size()
    };
    let size = need.max(base.size()).next_power_of_two().min(max_size.next_power_of_two());
    UnitGrid::new(size.max(4)).expect("size at least 4")
}

/// Analytic function on the disk with nonnegative real part.
#[derive(Debug, Clone, PartialEq)]
pub enum CaratheodoryFn {
    Polynomial(ComplexPolynomial),
    /// `numerator / denominator`, e.g. `ψ_N*/φ_N*`.
    Ratio {
        numerator: ComplexPolynomial,
        denominator: ComplexPolynomial,
    },
}

impl CaratheodoryFn {
    pub fn constant_one() -> Self {
        Self::Polynomial(ComplexPolynomial::one())
    }

    /// `F_N = ψ_N*/φ_N*` from first- and second-kind pairs of degree `N`.
    pub fn bernstein_szego(phi: &OrthonormalPair, psi: &OrthonormalPair) -> Self {
        Self::Ratio {
            numerator: psi.phi_star.clone(),
            denominator: phi.phi_star.clone(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Polynomial(p) => p.eval(z),
            Self::Ratio {
                numerator,
                denominator,
            } => numerator.eval(z) / denominator.eval(z),
        }
    }

    pub fn values_on(&self, grid: &UnitGrid) -> Vec<Complex64> {
        match self {
            Self::Polynomial(p) => p.values_on(grid),
            Self::Ratio {
                numerator,
                denominator,
            } => numerator
                .values_on(grid)
                .into_iter()
                .zip(denominator.values_on(grid))
                .map(|(a, b)| a / b)
                .collect(),
        }
    }

    pub fn as_polynomial(&self) -> Option<&ComplexPolynomial> {
        match self {
            Self::Polynomial(p) => Some(p),
            Self::Ratio { .. } => None,
        }
    }

    /// `(1/2π) ∫ Re F dθ` on the grid.
    pub fn mean_real(&self, grid: &UnitGrid) -> f64 {
        let v = self.values_on(grid);
        crate::grid::compensated_sum(v.iter().map(|z| z.re)) / grid.size() as f64
    }

    pub fn min_real(&self, grid: &UnitGrid) -> f64 {
        self.values_on(grid)
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min)
    }

    /// `dσ̃ = Re F dθ / 2π`.
    pub fn measure(&self, grid: UnitGrid) -> Result<CircleMeasure> {
        let w: Vec<f64> = self.values_on(&grid).iter().map(|z| z.re / TAU).collect();
        CircleMeasure::from_samples(grid, w, Vec::new())
    }
}

/// `F(z) = ∫ (e^{iθ} + z)/(e^{iθ} − z) dµ(θ)` for `|z| < 1`.
pub fn caratheodory_from_measure(mu: &CircleMeasure, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisk { modulus: z.norm() });
    }
    let grid = mu.grid();
    let mut ac = ComplexSum::default();
    for (k, w) in mu.weight_samples().iter().enumerate() {
        let xi = grid.point(k);
        ac.add((xi + z) / (xi - z) * *w);
    }
    let mut total = ComplexSum::default();
    total.add(ac.value() * grid.step());
    for a in mu.atoms() {
        let xi = a.point();
        total.add((xi + z) / (xi - z) * a.mass);
    }
    Ok(total.value())
}

fn log_weight_spectrum(mu: &CircleMeasure) -> Result<Vec<Complex64>> {
    let w = mu.weight_samples();
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::VanishingWeight { min });
    }
    let logs: Vec<Complex64> = w.iter().map(|x| Complex64::new((TAU * x).ln(), 0.0)).collect();
    mu.grid().analyze(&logs)
}

/// Analytic coefficients `h_0 = ℓ_0`, `h_k = 2ℓ_k` of the Cauchy transform of
/// `log(2πσ′)` (`ℓ_k` its Fourier coefficients), truncated at `N/2`.
fn cauchy_log_coeffs(mu: &CircleMeasure) -> Result<Vec<Complex64>> {
    let spec = log_weight_spectrum(mu)?;
    let half = mu.grid().size() / 2;
    let mut h = vec![Complex64::new(0.0, 0.0); half + 1];
    h[0] = spec[0];
    for k in 1..half {
        h[k] = spec[k] * 2.0;
    }
    h[half] = spec[half];
    Ok(h)
}

/// Szegő function `Π(z) = exp(−½ · (1/2π)∫ C(z, e^{iθ}) log(2πσ′(θ)) dθ)`.
///
/// Outer, with `|Π|^{-2} = 2πσ′` on the circle and `Π(0) > 0`.
pub fn szego_function(mu: &CircleMeasure, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisk { modulus: z.norm() });
    }
    let w = mu.weight_samples();
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::VanishingWeight { min });
    }
    let grid = mu.grid();
    let mut acc = ComplexSum::default();
    for (k, x) in w.iter().enumerate() {
        let xi = grid.point(k);
        acc.add((xi + z) / (xi - z) * (TAU * x).ln());
    }
    let integral = acc.value() / grid.size() as f64;
    Ok((-0.5 * integral).exp())
}

/// Boundary values of [`szego_function`] on the measure's grid.
pub fn szego_boundary(mu: &CircleMeasure) -> Result<Vec<Complex64>> {
    let h = cauchy_log_coeffs(mu)?;
    Ok(mu
        .grid()
        .synthesize(&h)
        .into_iter()
        .map(|v| (-0.5 * v).exp())
        .collect())
}

/// Outcome of `√δ ≤ |Φ_n/φ_n| = 1/κ_n ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzegoRatio {
    pub n: usize,
    pub ratio: f64,
    pub delta: f64,
}

impl SzegoRatio {
    pub fn from_kappa(n: usize, kappa: f64, delta: f64) -> Self {
        Self {
            n,
            ratio: 1.0 / kappa,
            delta,
        }
    }

    pub fn lower_bound(&self) -> f64 {
        self.delta.max(0.0).sqrt()
    }

    pub fn holds(&self) -> bool {
        self.ratio >= self.lower_bound() && self.ratio <= 1.0 + 1e-12
    }
}

/// `1/κ_n` of the normalised measure (via the oracle), compared against `√δ`.
pub fn szego_ratio_check(mu: &CircleMeasure, n: usize, delta: f64) -> Result<SzegoRatio> {
    let (p, _) = normalize(mu)?;
    let fam = monic_gram_schmidt(&p, n)?;
    Ok(SzegoRatio::from_kappa(n, fam.kappa(n), delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{moment, Atom};
    use crate::opuc::oracle::verblunsky_from_measure;
    use crate::opuc::recursion::{second_kind, szego_recursion, SchurSequence};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> UnitGrid {
        UnitGrid::new(1024).unwrap()
    }

    fn half() -> SchurSequence {
        SchurSequence::from_real(&[0.5]).unwrap()
    }

    #[test]
    fn free_pair_gives_lebesgue() {
        let pairs = szego_recursion(&SchurSequence::zeros(3), 3).unwrap();
        let mu = bernstein_szego_measure(&pairs[3], grid()).unwrap();
        for w in mu.weight_samples() {
            assert_relative_eq!(*w, 1.0 / TAU, epsilon = 1e-15);
        }
    }

    #[test]
    fn single_parameter_round_trip() {
        let pairs = szego_recursion(&half(), 1).unwrap();
        let mu = bernstein_szego_measure(&pairs[1], grid()).unwrap();
        // (3/4)/(2π|1 − z/2|²)
        for t in [0.0, 1.0, 2.0, 3.0] {
            let z = Complex64::from_polar(1.0, t);
            let expected = 0.75 / (TAU * (1.0 - z / 2.0).norm_sqr());
            assert_relative_eq!(mu.weight_at(t), expected, epsilon = 1e-14);
        }
        assert_relative_eq!(mu.total_mass(), 1.0, epsilon = 1e-13);
        let back = verblunsky_from_measure(&mu, 6).unwrap();
        assert!(back.max_diff(&SchurSequence::from_real(&[0.5, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap()) < 1e-12);
    }

    #[test]
    fn rejects_zero_in_disk() {
        let bad = OrthonormalPair::from_phi_star(ComplexPolynomial::from_real(&[1.0, -2.0]));
        assert_eq!(bernstein_szego_measure(&bad, grid()).unwrap_err(), Error::ZeroInClosedDisk);
    }

    #[test]
    fn random_bernstein_szego_is_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let len = rng.gen_range(1..16);
            let gamma = SchurSequence::new(
                (0..len).map(|_| Complex64::from_polar(rng.gen_range(0.0..0.5), rng.gen_range(0.0..TAU))).collect(),
            )
            .unwrap();
            let pairs = szego_recursion(&gamma, len).unwrap();
            let grid = bernstein_szego_grid(&pairs[len], 1 << 20);
            let mu = bernstein_szego_measure(&pairs[len], grid).unwrap();
            assert!((mu.total_mass() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn caratheodory_basics() {
        let leb = CircleMeasure::lebesgue(grid());
        let v = caratheodory_from_measure(&leb, Complex64::new(0.3, 0.2)).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        let atom = CircleMeasure::atoms_only(grid(), vec![Atom::new(0.0, 1.0)]).unwrap();
        let v = caratheodory_from_measure(&atom, Complex64::new(0.5, 0.0)).unwrap();
        assert!((v - 3.0).norm() < 1e-14);
        assert!(caratheodory_from_measure(&leb, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn bernstein_szego_caratheodory_matches_measure() {
        let gamma = SchurSequence::new(vec![
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.4, 0.1),
            Complex64::new(0.0, 0.5),
        ])
        .unwrap();
        let phi = szego_recursion(&gamma, 3).unwrap();
        let psi = second_kind(&gamma, 3).unwrap();
        let f = CaratheodoryFn::bernstein_szego(&phi[3], &psi[3]);
        let mu = bernstein_szego_measure(&phi[3], grid()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let z = Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..TAU));
            let direct = caratheodory_from_measure(&mu, z).unwrap();
            assert!((direct - f.eval(z)).norm() < 1e-10);
            assert!(direct.re > 0.0);
        }
        assert_relative_eq!(f.eval(Complex64::new(0.0, 0.0)).re, mu.total_mass(), epsilon = 1e-12);
        // Re F_N = 1/|φ_N*|² on the circle, so the mean of Re F_N is 1.
        assert_relative_eq!(f.mean_real(&grid()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bernstein_szego_matches_moments_zero_through_n() {
        // µ = Lebesgue + atom has infinitely many nonzero parameters; its
        // degree-N Bernstein–Szegő approximation shares c_0..c_N (N + 1
        // moments) and not c_{N+1}.
        let mu = normalize(
            &CircleMeasure::lebesgue(UnitGrid::new(2048).unwrap())
                .with_atoms([Atom::new(0.4, 0.5)])
                .unwrap(),
        )
        .unwrap()
        .0;
        let n = 6;
        let gamma = verblunsky_from_measure(&mu, n).unwrap();
        let pairs = szego_recursion(&gamma, n).unwrap();
        let mu_n = bernstein_szego_measure(&pairs[n], UnitGrid::new(2048).unwrap()).unwrap();
        for k in 0..=n as i64 {
            let d = (moment(&mu, k).unwrap() - moment(&mu_n, k).unwrap()).norm();
            assert!(d < 1e-12, "moment {k} differs by {d}");
        }
        let d = (moment(&mu, n as i64 + 1).unwrap() - moment(&mu_n, n as i64 + 1).unwrap()).norm();
        assert!(d > 1e-4);
    }

    #[test]
    fn szego_function_of_lebesgue_is_one() {
        let leb = CircleMeasure::lebesgue(grid());
        assert!((szego_function(&leb, Complex64::new(0.4, -0.3)).unwrap() - 1.0).norm() < 1e-14);
        for v in szego_boundary(&leb).unwrap() {
            assert!((v - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn szego_function_of_bernstein_szego() {
        let gamma = SchurSequence::new(vec![Complex64::new(0.4, 0.3), Complex64::new(-0.2, 0.5)]).unwrap();
        let pairs = szego_recursion(&gamma, 2).unwrap();
        let mu = bernstein_szego_measure(&pairs[2], grid()).unwrap();
        for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.2), Complex64::new(-0.1, -0.7)] {
            // |φ*|^{-2} = 2πσ′ on the circle, so the outer Π is φ* itself.
            let pi = szego_function(&mu, z).unwrap();
            assert!((pi - pairs[2].phi_star.eval(z)).norm() < 1e-12);
        }
        let boundary = szego_boundary(&mu).unwrap();
        for (k, b) in boundary.iter().enumerate() {
            assert_relative_eq!(b.norm_sqr().recip(), TAU * mu.weight_samples()[k], max_relative = 1e-12);
        }
        assert!(szego_function(&mu, Complex64::new(0.0, 0.0)).unwrap().im.abs() < 1e-14);
    }

    #[test]
    fn szego_function_rejects_vanishing_weight() {
        let cardioid = CircleMeasure::from_density(grid(), |t| (1.0 + t.cos()) / TAU, vec![]).unwrap();
        assert!(matches!(szego_function(&cardioid, Complex64::new(0.0, 0.0)), Err(Error::VanishingWeight { .. })));
    }

    #[test]
    fn ratio_cases() {
        let leb = szego_ratio_check(&CircleMeasure::lebesgue(grid()), 5, 1.0).unwrap();
        assert_relative_eq!(leb.ratio, 1.0, epsilon = 1e-14);
        assert!(leb.holds());
        let pairs = szego_recursion(&half(), 1).unwrap();
        let r = SzegoRatio::from_kappa(1, pairs[1].kappa, 0.5);
        assert_relative_eq!(r.ratio, 3f64.sqrt() / 2.0, epsilon = 1e-15);
        let mu = bernstein_szego_measure(&pairs[1], grid()).unwrap();
        let measured = szego_ratio_check(&mu, 1, 0.0).unwrap();
        assert_relative_eq!(measured.ratio, 3f64.sqrt() / 2.0, epsilon = 1e-12);
    }
}
