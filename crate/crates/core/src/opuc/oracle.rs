//! Gram–Schmidt oracle for monic orthogonal polynomials.
//!
//! Works purely from quadrature: every candidate is carried as coefficients,
//! grid samples and exact values at the atoms. The next monic polynomial is
//! obtained by orthogonalising `z·Φ_k` against `Φ_0..Φ_k` with modified
//! Gram–Schmidt and one reorthogonalisation pass. No Schur parameters or
//! `(∗)`-operations are involved, so it checks the recursion independently.

use num_complex::Complex64;

use crate::measure::CircleMeasure;
use crate::opuc::recursion::SchurSequence;
use crate::poly::ComplexPolynomial;
use crate::{Error, Result};

/// Monic orthogonal polynomials `Φ_0..Φ_n` of a measure.
#[derive(Debug, Clone)]
pub struct MonicFamily {
    pub polys: Vec<ComplexPolynomial>,
    /// `‖Φ_k‖²` in `L²(µ)`.
    pub norms_sq: Vec<f64>,
    /// `max_{i≠j} |⟨Φ_i, Φ_j⟩| / (‖Φ_i‖ ‖Φ_j‖)` after construction.
    pub orthogonality_defect: f64,
}

impl MonicFamily {
    /// Leading coefficient `κ_k = 1/‖Φ_k‖` of the orthonormal polynomial.
    pub fn kappa(&self, k: usize) -> f64 {
        1.0 / self.norms_sq[k].sqrt()
    }

    /// Orthonormal `φ_k = κ_k Φ_k`.
    pub fn orthonormal(&self, k: usize) -> ComplexPolynomial {
        self.polys[k].scale_real(self.kappa(k))
    }
}

struct Vector {
    coeffs: Vec<Complex64>,
    grid: Vec<Complex64>,
    atoms: Vec<Complex64>,
}

impl Vector {
    /// `self -= a·x`; `x` may have fewer coefficients.
    fn sub_scaled(&mut self, a: Complex64, x: &Vector) {
        for (c, xc) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *c -= a * xc;
        }
        for (c, xc) in self.grid.iter_mut().zip(&x.grid) {
            *c -= a * xc;
        }
        for (c, xc) in self.atoms.iter_mut().zip(&x.atoms) {
            *c -= a * xc;
        }
    }
}

fn inner(mu: &CircleMeasure, f: &Vector, g: &Vector) -> Complex64 {
    mu.inner_samples(&f.grid, &g.grid, &f.atoms, &g.atoms)
        .expect("oracle vectors live on the measure grid")
}

/// Monic `Φ_0..Φ_n` for `µ` via Gram–Schmidt. Fails when the Gram matrix
/// stops being numerically positive definite (too few growth points).
pub fn monic_gram_schmidt(mu: &CircleMeasure, n: usize) -> Result<MonicFamily> {
    let grid = *mu.grid();
    grid.require_degree(n)?;
    let nodes = grid.points();
    let atom_points: Vec<Complex64> = mu.atoms().iter().map(|a| a.point()).collect();

    let mut basis: Vec<Vector> = Vec::with_capacity(n + 1);
    let mut norms_sq: Vec<f64> = Vec::with_capacity(n + 1);
    let first = Vector {
        coeffs: vec![Complex64::new(1.0, 0.0); 1],
        grid: vec![Complex64::new(1.0, 0.0); grid.size()],
        atoms: vec![Complex64::new(1.0, 0.0); atom_points.len()],
    };
    let n0 = inner(mu, &first, &first).re;
    if !(n0 > 0.0) {
        return Err(Error::NotPositiveDefinite { degree: 0 });
    }
    basis.push(first);
    norms_sq.push(n0);

    for k in 0..n {
        let prev = &basis[k];
        let mut coeffs = Vec::with_capacity(k + 2);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&prev.coeffs);
        let mut v = Vector {
            coeffs,
            grid: prev.grid.iter().zip(&nodes).map(|(a, z)| a * z).collect(),
            atoms: prev.atoms.iter().zip(&atom_points).map(|(a, z)| a * z).collect(),
        };
        let raw = inner(mu, &v, &v).re;
        for _pass in 0..2 {
            for (i, b) in basis.iter().enumerate() {
                let h = inner(mu, &v, b) / norms_sq[i];
                v.sub_scaled(h, b);
            }
        }
        // Keep the polynomial exactly monic.
        v.coeffs[k + 1] = Complex64::new(1.0, 0.0);
        let nk = inner(mu, &v, &v).re;
        if !(nk > 1e-14 * raw.max(f64::MIN_POSITIVE)) {
            return Err(Error::NotPositiveDefinite { degree: k + 1 });
        }
        basis.push(v);
        norms_sq.push(nk);
    }

    let mut defect: f64 = 0.0;
    for i in 0..basis.len() {
        for j in 0..i {
            let ip = inner(mu, &basis[i], &basis[j]).norm();
            defect = defect.max(ip / (norms_sq[i] * norms_sq[j]).sqrt());
        }
    }
    Ok(MonicFamily {
        polys: basis
            .into_iter()
            .map(|b| ComplexPolynomial::new(b.coeffs))
            .collect(),
        norms_sq,
        orthogonality_defect: defect,
    })
}

/// `γ_0..γ_{n-1}` of `µ` from `conj(γ_k) = −Φ_{k+1}(0)`.
pub fn verblunsky_from_measure(mu: &CircleMeasure, n: usize) -> Result<SchurSequence> {
    let family = monic_gram_schmidt(mu, n)?;
    SchurSequence::new(
        (0..n)
            .map(|k| -family.polys[k + 1].coeff(0).conj())
            .collect(),
    )
}
