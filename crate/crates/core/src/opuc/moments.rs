//! Gram–Schmidt on a Bernstein–Szegő measure through its exact moments.
//!
//! When `φ_N` has zeros very close to the circle the weight `1/|φ_N*|²` has
//! peaks no grid resolves. So the moments `t_m = ∫ z^m dµ`, `m ≤ N`, are
//! solved from `⟨Φ_N, z^j⟩ = 0` for `j < N`, and Gram–Schmidt runs on
//! `⟨z^i, z^j⟩ = t_{i−j}`.
//!
//! Recovering moments from `Φ_N` is badly conditioned (errors grow by up to
//! `∏ (1+|γ_k|)/(1−|γ_k|)`, about `1e41` for 32 coefficients of modulus
//! `0.9`), so everything runs in [`PRECISION`]-bit binary floats, and
//! [`bernstein_szego_monic_of_schur`] also builds `Φ_N` from `γ` at that
//! precision rather than from a rounded `f64` polynomial.

use dashu_float::FBig;
use num_complex::{Complex, Complex64};
use num_traits::{Signed, Zero};

use crate::opuc::oracle::MonicFamily;
use crate::opuc::recursion::{OrthonormalPair, SchurSequence};
use crate::poly::ComplexPolynomial;
use crate::{Error, Result};

/// Working precision in bits.
pub const PRECISION: usize = 256;

type Big = FBig;
type C = Complex<Big>;

fn big(x: f64) -> Big {
    Big::try_from(x)
        .expect("finite coefficient")
        .with_precision(PRECISION)
        .value()
}

fn lift(z: Complex64) -> C {
    C::new(big(z.re), big(z.im))
}

fn lower(z: &C) -> Complex64 {
    Complex64::new(z.re.to_f64().value(), z.im.to_f64().value())
}

fn zero() -> C {
    lift(Complex64::new(0.0, 0.0))
}

/// Solves `a x = b` (row-major `n × n`) by partial pivoting.
fn solve(mut a: Vec<Vec<Big>>, mut b: Vec<Big>) -> Option<Vec<Big>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("ordered"))?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (r, row) in rest.iter_mut().enumerate() {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot_row[col];
            for k in col..n {
                row[k] -= &f * &pivot_row[k];
            }
            let v = &f * &b[col];
            b[col + 1 + r] -= v;
        }
    }
    let mut x = vec![big(0.0); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for k in row + 1..n {
            s -= &a[row][k] * &x[k];
        }
        x[row] = s / &a[row][row];
    }
    Some(x)
}

fn lift_poly(phi: &ComplexPolynomial) -> Vec<C> {
    (0..=phi.nominal_degree()).map(|i| lift(phi.coeff(i))).collect()
}

/// Coefficients of the monic `Φ_N` for `γ_0..γ_{N−1}`.
fn monic_phi(gamma: &SchurSequence) -> Vec<C> {
    let mut phi = vec![lift(Complex64::new(1.0, 0.0))];
    for g in gamma.gamma() {
        let gc = lift(g.conj());
        let k = phi.len();
        // Φ_{k+1} = z Φ_k − conj(γ) Φ_k*, with Φ_k*(z) = z^k conj(Φ_k(1/conj z)).
        let mut next = vec![zero(); k + 1];
        for (i, c) in phi.iter().enumerate() {
            next[i + 1] += c.clone();
            next[k - 1 - i] -= &gc * c.conj();
        }
        phi = next;
    }
    phi
}

/// `t_0..t_N` of the probability measure making `p` orthogonal to
/// `1, …, z^{N−1}`.
fn moments_of(p: &[C]) -> Result<Vec<C>> {
    let n = p.len() - 1;
    // Real unknowns: Re t_1..t_N, then Im t_1..t_N.
    let mut a = vec![vec![big(0.0); 2 * n]; 2 * n];
    let mut b = vec![big(0.0); 2 * n];
    for j in 0..n {
        for (i, pi) in p.iter().enumerate() {
            let m = i as i64 - j as i64;
            if m == 0 {
                b[2 * j] -= &pi.re;
                b[2 * j + 1] -= &pi.im;
                continue;
            }
            let k = m.unsigned_abs() as usize - 1;
            // t_{-m} = conj(t_m).
            a[2 * j][k] += &pi.re;
            a[2 * j + 1][k] += &pi.im;
            if m > 0 {
                a[2 * j][n + k] -= &pi.im;
                a[2 * j + 1][n + k] += &pi.re;
            } else {
                a[2 * j][n + k] += &pi.im;
                a[2 * j + 1][n + k] -= &pi.re;
            }
        }
    }
    let x = solve(a, b).ok_or(Error::NotPositiveDefinite { degree: n })?;
    let mut t = vec![lift(Complex64::new(1.0, 0.0))];
    t.extend((0..n).map(|k| C::new(x[k].clone(), x[n + k].clone())));
    Ok(t)
}

/// Moments `t_m = ∫ z^m dµ`, `m = 0..=N`, of the Bernstein–Szegő measure of
/// `pair`, rounded to `f64`.
pub fn bernstein_szego_moments(pair: &OrthonormalPair) -> Result<Vec<Complex64>> {
    Ok(moments_of(&lift_poly(&pair.phi))?.iter().map(lower).collect())
}

/// Monic `Φ_0..Φ_n` of the Bernstein–Szegő measure of `pair` (`n ≤ N`).
pub fn bernstein_szego_monic(pair: &OrthonormalPair, n: usize) -> Result<MonicFamily> {
    monic_from(&lift_poly(&pair.phi), n)
}

/// Monic `Φ_0..Φ_n` of the Bernstein–Szegő measure whose Verblunsky
/// coefficients are `gamma` (`n ≤ gamma.len()`).
pub fn bernstein_szego_monic_of_schur(gamma: &SchurSequence, n: usize) -> Result<MonicFamily> {
    monic_from(&monic_phi(gamma), n)
}

fn monic_from(phi: &[C], n: usize) -> Result<MonicFamily> {
    let big_n = phi.len() - 1;
    if n > big_n {
        return Err(Error::InvalidParameter(format!("degree {n} exceeds the measure's {big_n}")));
    }
    let t = moments_of(phi)?;
    let tm = |m: i64| {
        if m >= 0 {
            t[m as usize].clone()
        } else {
            t[(-m) as usize].conj()
        }
    };
    // ⟨v, b⟩ = Σ_i v_i w_i with w_i = Σ_j conj(b_j) t_{i−j}.
    let dual = |b: &[C]| -> Vec<C> {
        (0..=n)
            .map(|i| {
                let mut s = zero();
                for (j, bj) in b.iter().enumerate() {
                    s += bj.conj() * tm(i as i64 - j as i64);
                }
                s
            })
            .collect()
    };
    let pair_with = |v: &[C], w: &[C]| {
        let mut s = zero();
        for (vi, wi) in v.iter().zip(w) {
            s += vi * wi;
        }
        s
    };

    let one = lift(Complex64::new(1.0, 0.0));
    let mut basis: Vec<Vec<C>> = vec![vec![one.clone()]];
    let mut duals: Vec<Vec<C>> = vec![dual(&basis[0])];
    let mut norms: Vec<Big> = vec![pair_with(&basis[0], &duals[0]).re];
    for k in 1..=n {
        let mut v = vec![zero(); k + 1];
        v[k] = one.clone();
        for _pass in 0..2 {
            for ((b, w), nb) in basis.iter().zip(&duals).zip(&norms) {
                let h = pair_with(&v, w) / C::new(nb.clone(), big(0.0));
                for (c, bc) in v.iter_mut().zip(b) {
                    *c -= &h * bc;
                }
            }
        }
        v[k] = one.clone();
        let w = dual(&v);
        let nk = pair_with(&v, &w).re;
        if !(nk.to_f64().value() > 0.0) {
            return Err(Error::NotPositiveDefinite { degree: k });
        }
        basis.push(v);
        duals.push(w);
        norms.push(nk);
    }

    let mut defect: f64 = 0.0;
    for i in 0..basis.len() {
        for j in 0..i {
            let ip = lower(&pair_with(&basis[i], &duals[j])).norm();
            defect = defect.max(ip / (norms[i].to_f64().value() * norms[j].to_f64().value()).sqrt());
        }
    }
    Ok(MonicFamily {
        polys: basis
            .iter()
            .map(|b| ComplexPolynomial::new(b.iter().map(lower).collect()))
            .collect(),
        norms_sq: norms.iter().map(|x| x.to_f64().value()).collect(),
        orthogonality_defect: defect,
    })
}
