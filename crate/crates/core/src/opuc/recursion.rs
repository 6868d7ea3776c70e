use num_complex::Complex64;

use crate::poly::ComplexPolynomial;
use crate::{Error, Result};

/// Schur (Verblunsky) parameters `γ_0, γ_1, ...` with `|γ_j| < 1`, and
/// `ρ_j = sqrt(1 − |γ_j|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurSequence {
    gamma: Vec<Complex64>,
    rho: Vec<f64>,
}

impl SchurSequence {
    pub fn new(gamma: Vec<Complex64>) -> Result<Self> {
        if let Some((index, g)) = gamma
            .iter()
            .enumerate()
            .find(|(_, g)| !(g.norm() < 1.0))
        {
            return Err(Error::SchurOutOfDisk {
                index,
                modulus: g.norm(),
            });
        }
        let rho = gamma.iter().map(|g| (1.0 - g.norm_sqr()).sqrt()).collect();
        Ok(Self { gamma, rho })
    }

    pub fn from_real(gamma: &[f64]) -> Result<Self> {
        Self::new(gamma.iter().map(|&g| Complex64::new(g, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            gamma: vec![Complex64::new(0.0, 0.0); len],
            rho: vec![1.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn gamma(&self) -> &[Complex64] {
        &self.gamma
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// `{−γ_j}`: the parameters of the second-kind polynomials.
    pub fn negated(&self) -> Self {
        Self {
            gamma: self.gamma.iter().map(|g| -g).collect(),
            rho: self.rho.clone(),
        }
    }

    pub fn prefix(&self, len: usize) -> Self {
        let len = len.min(self.len());
        Self {
            gamma: self.gamma[..len].to_vec(),
            rho: self.rho[..len].to_vec(),
        }
    }

    /// Concatenation `self ++ tail`.
    pub fn concat(&self, tail: &Self) -> Self {
        let mut gamma = self.gamma.clone();
        gamma.extend_from_slice(&tail.gamma);
        let mut rho = self.rho.clone();
        rho.extend_from_slice(&tail.rho);
        Self { gamma, rho }
    }

    /// Pads with zeros up to `len`.
    pub fn padded(&self, len: usize) -> Self {
        if len <= self.len() {
            return self.clone();
        }
        self.concat(&Self::zeros(len - self.len()))
    }

    /// `Π_{j<n} ρ_j^{-1}`, the leading coefficient of `φ_n`.
    pub fn kappa(&self, n: usize) -> f64 {
        self.rho[..n.min(self.len())].iter().map(|r| 1.0 / r).product()
    }

    /// `Σ |γ_j|`.
    pub fn l1_norm(&self) -> f64 {
        self.gamma.iter().map(|g| g.norm()).sum()
    }

    /// Max elementwise distance to `other` over the common prefix, plus the
    /// modulus of any excess entries.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let len = self.len().max(other.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..len)
            .map(|j| {
                let a = self.gamma.get(j).copied().unwrap_or(zero);
                let b = other.gamma.get(j).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `φ_n`, `φ_n*` and the leading coefficient `κ_n = coeff(φ_n, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalPair {
    pub phi: ComplexPolynomial,
    pub phi_star: ComplexPolynomial,
    pub kappa: f64,
}

impl OrthonormalPair {
    pub fn degree(&self) -> usize {
        self.phi.nominal_degree()
    }

    /// Pair from `φ_n` alone; `φ_n*` is taken at the nominal degree.
    pub fn from_phi(phi: ComplexPolynomial) -> Self {
        let kappa = phi.coeff(phi.nominal_degree()).re;
        let phi_star = phi.star();
        Self {
            phi,
            phi_star,
            kappa,
        }
    }

    /// Pair from `φ_n*` alone.
    pub fn from_phi_star(phi_star: ComplexPolynomial) -> Self {
        Self::from_phi(phi_star.star())
    }

    /// The monic polynomial `Φ_n = φ_n / κ_n`.
    pub fn monic(&self) -> ComplexPolynomial {
        self.phi.scale_real(1.0 / self.kappa)
    }
}

/// Runs
///
/// ```text
/// φ_{k+1}  = ρ_k^{-1} (z φ_k − conj(γ_k) φ_k*)
/// φ*_{k+1} = ρ_k^{-1} (φ_k* − γ_k z φ_k)
/// ```
///
/// from `φ_0 = φ_0* = 1` and returns the pairs for degrees `0..=n`.
pub fn szego_recursion(gamma: &SchurSequence, n: usize) -> Result<Vec<OrthonormalPair>> {
    if n > gamma.len() {
        return Err(Error::SequenceTooShort {
            requested: n,
            available: gamma.len(),
        });
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    let mut phi_star = vec![Complex64::new(1.0, 0.0)];
    let mut kappa = 1.0;
    out.push(OrthonormalPair {
        phi: ComplexPolynomial::new(phi.clone()),
        phi_star: ComplexPolynomial::new(phi_star.clone()),
        kappa,
    });
    for k in 0..n {
        let g = gamma.gamma[k];
        let inv = 1.0 / gamma.rho[k];
        let len = k + 2;
        let mut next = vec![Complex64::new(0.0, 0.0); len];
        let mut next_star = vec![Complex64::new(0.0, 0.0); len];
        for j in 0..len {
            let z_phi = if j >= 1 { phi[j - 1] } else { Complex64::new(0.0, 0.0) };
            let ps = if j <= k { phi_star[j] } else { Complex64::new(0.0, 0.0) };
            next[j] = (z_phi - g.conj() * ps) * inv;
            next_star[j] = (ps - g * z_phi) * inv;
        }
        phi = next;
        phi_star = next_star;
        kappa *= inv;
        out.push(OrthonormalPair {
            phi: ComplexPolynomial::new(phi.clone()),
            phi_star: ComplexPolynomial::new(phi_star.clone()),
            kappa,
        });
    }
    Ok(out)
}

/// Second-kind pairs `(ψ_k, ψ_k*)`: the recursion with `{−γ_j}`.
pub fn second_kind(gamma: &SchurSequence, n: usize) -> Result<Vec<OrthonormalPair>> {
    szego_recursion(&gamma.negated(), n)
}

/// Values `(φ_j(z), φ_j*(z))` for `j = 0..=n`, by the pointwise recursion.
pub fn values_at(gamma: &SchurSequence, n: usize, z: Complex64) -> Result<Vec<(Complex64, Complex64)>> {
    if n > gamma.len() {
        return Err(Error::SequenceTooShort {
            requested: n,
            available: gamma.len(),
        });
    }
    let mut out = Vec::with_capacity(n + 1);
    let (mut p, mut ps) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    out.push((p, ps));
    for k in 0..n {
        let g = gamma.gamma[k];
        let inv = 1.0 / gamma.rho[k];
        let zp = z * p;
        p = (zp - g.conj() * ps) * inv;
        ps = (ps - g * zp) * inv;
        out.push((p, ps));
    }
    Ok(out)
}

/// Inverse Szegő recursion: recovers `γ_0..γ_{n-1}` of the
/// Bernstein–Szegő measure of `φ_n` (given with positive leading
/// coefficient and `φ_n*` zero free in the closed disk).
pub fn schur_from_orthonormal(phi: &ComplexPolynomial) -> Result<SchurSequence> {
    let n = phi.nominal_degree();
    let mut cur = phi.coeffs().to_vec();
    let mut cur_star: Vec<Complex64> = cur.iter().rev().map(|c| c.conj()).collect();
    let mut gamma = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        // Degree k + 1 here; γ_k = −conj(φ_{k+1}(0)) / κ_{k+1}.
        let kappa = cur[k + 1].re;
        if !(kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "leading coefficient {} at degree {} is not positive",
                cur[k + 1],
                k + 1
            )));
        }
        let g = -cur[0].conj() / kappa;
        if !(g.norm() < 1.0) {
            return Err(Error::SchurOutOfDisk {
                index: k,
                modulus: g.norm(),
            });
        }
        gamma[k] = g;
        let rho = (1.0 - g.norm_sqr()).sqrt();
        // φ_k = (φ_{k+1} + conj(γ) φ*_{k+1}) / (ρ z),  φ_k* = (φ*_{k+1} + γ φ_{k+1}) / ρ
        let mut prev = vec![Complex64::new(0.0, 0.0); k + 1];
        let mut prev_star = vec![Complex64::new(0.0, 0.0); k + 1];
        for j in 0..=k {
            prev[j] = (cur[j + 1] + g.conj() * cur_star[j + 1]) / rho;
            prev_star[j] = (cur_star[j] + g * cur[j]) / rho;
        }
        cur = prev;
        cur_star = prev_star;
    }
    SchurSequence::new(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::star;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_case_gives_monomials() {
        let pairs = szego_recursion(&SchurSequence::zeros(6), 6).unwrap();
        for (k, p) in pairs.iter().enumerate() {
            assert_eq!(p.phi, ComplexPolynomial::monomial(k));
            assert_eq!(p.phi_star.degree(), 0);
            assert_eq!(p.phi_star.coeff(0), c(1.0, 0.0));
        }
    }

    #[test]
    fn one_step_with_half() {
        // φ_1 = (2/√3)(z − 1/2), φ_1* = (2/√3)(1 − z/2)
        let pairs = szego_recursion(&SchurSequence::from_real(&[0.5]).unwrap(), 1).unwrap();
        let s = 2.0 / 3f64.sqrt();
        let p = &pairs[1];
        assert!((p.phi.coeff(0) - c(-0.5 * s, 0.0)).norm() < 1e-15);
        assert!((p.phi.coeff(1) - c(s, 0.0)).norm() < 1e-15);
        assert!((p.phi_star.coeff(0) - c(s, 0.0)).norm() < 1e-15);
        assert!((p.phi_star.coeff(1) - c(-0.5 * s, 0.0)).norm() < 1e-15);
        assert!((p.kappa - s).abs() < 1e-15);
    }

    #[test]
    fn second_kind_with_half() {
        // ψ_1 = (2/√3)(z + 1/2)
        let gamma = SchurSequence::from_real(&[0.5]).unwrap();
        let psi = second_kind(&gamma, 1).unwrap();
        let s = 2.0 / 3f64.sqrt();
        assert!((psi[1].phi.coeff(0) - c(0.5 * s, 0.0)).norm() < 1e-15);
        assert!((psi[1].phi.coeff(1) - c(s, 0.0)).norm() < 1e-15);
        assert_eq!(psi, szego_recursion(&gamma.negated(), 1).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            SchurSequence::new(vec![c(0.1, 0.0), c(0.6, 0.8)]),
            Err(Error::SchurOutOfDisk { index: 1, .. })
        ));
        assert!(szego_recursion(&SchurSequence::zeros(2), 3).is_err());
    }

    fn arb_schur(max_len: usize, radius: f64) -> impl Strategy<Value = SchurSequence> {
        prop::collection::vec((0.0..radius, 0.0..std::f64::consts::TAU), 1..=max_len)
            .prop_map(|v| SchurSequence::new(v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recursion_matches_star(gamma in arb_schur(64, 0.9)) {
            let pairs = szego_recursion(&gamma, gamma.len()).unwrap();
            for (k, p) in pairs.iter().enumerate() {
                let s = star(&p.phi, k).unwrap();
                prop_assert!(s.rel_coeff_diff(&p.phi_star) < 1e-12);
                prop_assert!(((p.phi.coeff(k).re - gamma.kappa(k)) / gamma.kappa(k)).abs() < 1e-12);
                prop_assert!(p.phi.coeff(k).im.abs() < 1e-12 * gamma.kappa(k));
            }
        }

        #[test]
        fn modulus_of_phi_equals_phi_star_on_circle(gamma in arb_schur(32, 0.9), t in 0.0..std::f64::consts::TAU) {
            let z = Complex64::from_polar(1.0, t);
            for p in szego_recursion(&gamma, gamma.len()).unwrap() {
                let a = p.phi.eval(z).norm();
                let b = p.phi_star.eval(z).norm();
                prop_assert!((a - b).abs() <= 1e-12 * a.max(b).max(1.0));
            }
        }

        #[test]
        fn pointwise_values_match_polynomials(gamma in arb_schur(24, 0.9), r in 0.0..1.2f64, t in 0.0..std::f64::consts::TAU) {
            let z = Complex64::from_polar(r, t);
            let pairs = szego_recursion(&gamma, gamma.len()).unwrap();
            let vals = values_at(&gamma, gamma.len(), z).unwrap();
            for (p, (v, vs)) in pairs.iter().zip(vals) {
                let scale = p.kappa.max(1.0) * 1.2f64.powi(p.degree() as i32);
                prop_assert!((p.phi.eval(z) - v).norm() < 1e-11 * scale);
                prop_assert!((p.phi_star.eval(z) - vs).norm() < 1e-11 * scale);
            }
        }

        #[test]
        fn inverse_recursion_round_trip(gamma in arb_schur(32, 0.7)) {
            // the inverse recursion amplifies rounding by roughly Π ρ_j^{-2}
            let pairs = szego_recursion(&gamma, gamma.len()).unwrap();
            let back = schur_from_orthonormal(&pairs.last().unwrap().phi).unwrap();
            prop_assert!(back.max_diff(&gamma) < 1e-9);
        }
    }
}
