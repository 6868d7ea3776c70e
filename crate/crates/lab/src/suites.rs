//! The verification suite: one function per acceptance criterion.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use anyhow::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opuc_core::gluing::{glued_density, glued_phi_star, transfer_matrices, validate_glue_input, GlueInput};
use opuc_core::measure::CircleMeasure;
use opuc_core::opuc::{
    bernstein_szego_grid, bernstein_szego_measure, bernstein_szego_monic_of_schur, monic_gram_schmidt, schur_from_orthonormal, second_kind,
    szego_recursion, values_at, verblunsky_from_measure, CaratheodoryFn, OrthonormalPair, SchurSequence,
    SzegoRatio,
};
use opuc_core::rakhmanov::{growth_table, lebesgue_construction, verify_kernel_condition, MassPlacement};
use opuc_core::realline::{
    chebyshev_t_coeffs, circle_to_segment_polys, segment_gram_schmidt_oracle, SymmetricCircleMeasure,
};
use opuc_core::report::GrowthReport;
use opuc_core::steklov::{
    build_construction, closed_form_weight, rakhmanov_variant, sec1_violation_demo, verify_growth,
    SteklovConstruction,
};
use opuc_core::UnitGrid;

use crate::fixtures::Fixtures;

/// Largest grid the random suites may use.
const MAX_GRID: usize = 1 << 17;

/// Bound on `|γ|` for random gluing heads.
pub const HEAD_RADIUS: f64 = 0.5;

/// Bound on `Σ|γ̃|` for random gluing tails, so `Re F̃` stays away from 0.
pub const TAIL_L1: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
    /// Set when the fixtures record this criterion as unattainable.
    pub known_failure: Option<String>,
}

impl Outcome {
    /// Pass, skip, or a failure the fixtures already record.
    pub fn acceptable(&self) -> bool {
        match self.status {
            Status::Pass | Status::Skip => true,
            Status::Fail => self.known_failure.is_some(),
        }
    }

    pub fn line(&self) -> String {
        let tag = match (self.status, &self.known_failure) {
            (Status::Pass, _) => "PASS".to_string(),
            (Status::Skip, _) => "SKIP".to_string(),
            (Status::Fail, None) => "FAIL".to_string(),
            (Status::Fail, Some(_)) => "FAIL (known)".to_string(),
        };
        format!("[{tag}] {:>2}. {} ({:.1} s): {}", self.id, self.title, self.seconds, self.detail)
    }
}

pub const TITLES: [&str; 11] = [
    "recursion matches Gram-Schmidt on Bernstein-Szego measures",
    "Rakhmanov closed form and difference identity",
    "kernel condition at roots of unity",
    "Rakhmanov log growth band",
    "gluing round trip",
    "transfer-matrix identities",
    "Steklov construction end to end",
    "glue denominator identity",
    "decoupling ratio growth",
    "real-line reduction gives Chebyshev-T",
    "Szego ratio bounds",
];

fn check(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Runs criterion `id` (1..=11). `quick` keeps every size at or below 32 and
/// skips the sweeps that need larger `n`.
pub fn run_criterion(id: u8, fx: &Fixtures, quick: bool) -> Outcome {
    let t = Instant::now();
    let res: Result<(Status, String)> = match id {
        1 => c1_recursion_oracle(quick),
        2 => c2_rakhmanov_formula(),
        3 => c3_kernel_condition(quick),
        4 => c4_rakhmanov_growth(fx, quick),
        5 => c5_gluing_round_trip(quick),
        6 => c6_transfer_identities(),
        7 => c7_steklov_end_to_end(fx, quick),
        8 => c8_denominator_identity(fx, quick),
        9 => c9_decoupling_growth(fx, quick),
        10 => c10_real_line(),
        11 => c11_szego_ratio(fx, quick),
        _ => Err(anyhow::anyhow!("no criterion {id}")),
    };
    let (status, detail) = res.unwrap_or_else(|e| (Status::Fail, format!("error: {e:#}")));
    Outcome {
        id,
        title: TITLES.get(id as usize - 1).copied().unwrap_or("unknown"),
        status,
        detail,
        seconds: t.elapsed().as_secs_f64(),
        known_failure: if status == Status::Fail {
            fx.known_failure(id).map(|k| k.reason.clone())
        } else {
            None
        },
    }
}

pub fn run_all(fx: &Fixtures, quick: bool) -> Vec<Outcome> {
    (1..=11).map(|id| run_criterion(id, fx, quick)).collect()
}

/// `γ` uniform in the disk of radius `r`.
pub fn random_schur(rng: &mut impl Rng, len: usize, r: f64) -> SchurSequence {
    SchurSequence::new(
        (0..len)
            .map(|_| Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)))
            .collect(),
    )
    .expect("radius below one")
}

fn pair_of(gamma: &SchurSequence) -> Result<OrthonormalPair> {
    Ok(szego_recursion(gamma, gamma.len())?.pop().expect("nonempty"))
}

fn c1_recursion_oracle(quick: bool) -> Result<(Status, String)> {
    let (count, max_len) = if quick { (20, 16) } else { (100, 32) };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut grid_checked = 0;
    for _ in 0..count {
        let len = rng.gen_range(1..=max_len);
        let gamma = random_schur(&mut rng, len, 0.9);
        let pairs = szego_recursion(&gamma, len)?;
        // Grid quadrature cannot resolve weights whose peaks are narrower
        // than the node spacing, so the oracle works from exact moments.
        let fam = bernstein_szego_monic_of_schur(&gamma, len)?;
        for (k, p) in pairs.iter().enumerate() {
            worst = worst.max(fam.polys[k].max_coeff_diff(&p.monic()));
        }
        // Where a grid does resolve the weight, the quadrature oracle too.
        let grid = bernstein_szego_grid(&pairs[len], MAX_GRID);
        if grid.size() < MAX_GRID {
            let mu = bernstein_szego_measure(&pairs[len], grid)?;
            let fam = monic_gram_schmidt(&mu, len)?;
            for (k, p) in pairs.iter().enumerate() {
                worst = worst.max(fam.polys[k].max_coeff_diff(&p.monic()));
            }
            grid_checked += 1;
        }
    }
    Ok((
        check(worst <= 1e-8),
        format!(
            "{count} sequences ({grid_checked} also on a grid), max coefficient gap {worst:.2e} (tol 1e-8)"
        ),
    ))
}

fn c2_rakhmanov_formula() -> Result<(Status, String)> {
    let mut oracle: f64 = 0.0;
    let mut diff: f64 = 0.0;
    for n in [4, 8, 16, 32] {
        for eps in [0.1, 0.3, 0.7] {
            let c = lebesgue_construction(n, eps)?;
            let fam = monic_gram_schmidt(&c.eta, n)?;
            oracle = oracle.max(fam.polys[n].max_coeff_diff(&c.poly.phi));
            diff = diff.max(c.difference_residual);
        }
    }
    Ok((
        check(oracle <= 1e-8 && diff <= 1e-13),
        format!("oracle gap {oracle:.2e} (tol 1e-8), difference identity {diff:.2e}"),
    ))
}

fn c3_kernel_condition(quick: bool) -> Result<(Status, String)> {
    let top = if quick { 5 } else { 10 };
    let mut worst: f64 = 0.0;
    for k in 2..=top {
        let n = 1usize << k;
        let thetas: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
        let grid = UnitGrid::for_degree(n);
        let placement = MassPlacement::from_angles(&thetas, vec![0.1 / n as f64; n], CircleMeasure::lebesgue(grid))?
            .with_background_schur(SchurSequence::zeros(n));
        let kc = verify_kernel_condition(&placement, n)?;
        worst = worst.max(kc.max_off_diagonal / (1e-10 * n as f64));
    }
    Ok((
        check(worst < 1.0),
        format!("n up to {}, max off-diagonal / (1e-10 n) = {worst:.2e}", 1usize << top),
    ))
}

fn c4_rakhmanov_growth(fx: &Fixtures, quick: bool) -> Result<(Status, String)> {
    if quick {
        return Ok((Status::Skip, "needs n ≥ 64".into()));
    }
    let f = &fx.rakhmanov;
    let r = growth_table(f.epsilon, &f.ns)?;
    let (lo, hi) = r.ratio_band().expect("rows");
    let [c1, c2] = f.ratio_band;
    let located = r.rows().iter().all(|row| row.distance_to_real_axis() <= 10.0 / row.n as f64);
    let ok = lo >= c1 && hi <= c2 && c2 / c1 <= 3.0 && located;
    Ok((
        check(ok),
        format!(
            "ratio in [{lo:.4}, {hi:.4}] against frozen [{c1:.4}, {c2:.4}], maximizer within 10/n: {located}"
        ),
    ))
}

fn c5_gluing_round_trip(quick: bool) -> Result<(Status, String)> {
    let count = if quick { 10 } else { 50 };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut round: f64 = 0.0;
    let mut mass: f64 = 0.0;
    for _ in 0..count {
        let n = rng.gen_range(1..=16);
        let m = rng.gen_range(1..=16);
        let (input, head, tail) = random_glue_input(&mut rng, n, m, HEAD_RADIUS, TAIL_L1)?;
        let v = validate_glue_input(&input);
        if !v.passes(1e-9) {
            return Ok((Status::Fail, format!("random input failed validation: {v:?}")));
        }
        let (w, _) = glued_density(&input)?;
        let sigma = CircleMeasure::from_samples(input.grid, w, Vec::new())?;
        let expected = head.concat(&tail);
        let got = verblunsky_from_measure(&sigma, n + m)?;
        round = round.max(got.max_diff(&expected));
        mass = mass.max((sigma.total_mass() - 1.0).abs());
    }
    Ok((
        check(round <= 1e-6 && mass <= 1e-8),
        format!("{count} inputs, Schur gap {round:.2e} (tol 1e-6), mass error {mass:.2e} (tol 1e-8)"),
    ))
}

/// A glue input whose `F̃` is the Carathéodory function of a random
/// Bernstein–Szegő tail, so the glued parameters are `head ++ tail ++ 0`.
pub fn random_glue_input(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    head_radius: f64,
    tail_l1: f64,
) -> Result<(GlueInput, SchurSequence, SchurSequence)> {
    let head = random_schur(rng, n, head_radius);
    let tail = random_schur(rng, m, tail_l1 / m.max(1) as f64);
    glue_input_from(&head, &tail)
}

pub fn glue_input_from(head: &SchurSequence, tail: &SchurSequence) -> Result<(GlueInput, SchurSequence, SchurSequence)> {
    let pair = pair_of(head)?;
    let f = if tail.is_empty() {
        CaratheodoryFn::constant_one()
    } else {
        let phi_t = pair_of(tail)?;
        let psi_t = second_kind(tail, tail.len())?.pop().expect("nonempty");
        CaratheodoryFn::bernstein_szego(&phi_t, &psi_t)
    };
    // The glued weight is the Bernstein–Szegő weight of head ++ tail.
    let glued = pair_of(&head.concat(tail))?;
    let grid = bernstein_szego_grid(&glued, MAX_GRID);
    let input = GlueInput::new(pair, f, grid).with_tail_len(tail.len());
    Ok((input, head.clone(), tail.clone()))
}

/// `|a − b|` relative to the size of the summands that formed either side.
fn rel(a: Complex64, b: Complex64, scale: f64) -> f64 {
    (a - b).norm() / b.norm().max(scale).max(1.0)
}

fn c6_transfer_identities() -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut extracted: f64 = 0.0;
    for draw in 0..100 {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=8);
        let head = random_schur(&mut rng, n, 0.9);
        let tail = random_schur(&mut rng, m, 0.9);
        let r = if draw % 2 == 0 { 1.0 } else { rng.gen::<f64>().sqrt() };
        let z = Complex64::from_polar(r, rng.gen_range(0.0..TAU));
        let t = transfer_matrices(&tail, m, z)?;
        let (pt, ps_t) = values_at(&tail, m, z)?[m];
        let (qt, qs_t) = values_at(&tail.negated(), m, z)?[m];
        let s_top = pt.norm() + qt.norm();
        let s_bot = ps_t.norm() + qs_t.norm();
        worst = worst
            .max(rel(t[(0, 0)], (pt + qt) / 2.0, s_top))
            .max(rel(t[(0, 1)], (pt - qt) / 2.0, s_top))
            .max(rel(t[(1, 0)], (ps_t - qs_t) / 2.0, s_bot))
            .max(rel(t[(1, 1)], (ps_t + qs_t) / 2.0, s_bot))
            .max(rel(
                t.determinant(),
                z.powu(m as u32),
                (t[(0, 0)] * t[(1, 1)]).norm() + (t[(0, 1)] * t[(1, 0)]).norm(),
            ));
        // Full matrix form on head ++ tail.
        let glued = head.concat(&tail);
        let (p, ps) = values_at(&head, n, z)?[n];
        let (q, qs) = values_at(&head.negated(), n, z)?[n];
        let (pg, psg) = values_at(&glued, n + m, z)?[n + m];
        let (qg, qsg) = values_at(&glued.negated(), n + m, z)?[n + m];
        let row = |a: Complex64, b: Complex64, x: Complex64, y: Complex64| (a * x).norm() + (b * y).norm();
        worst = worst
            .max(rel(t[(0, 0)] * p + t[(0, 1)] * ps, pg, row(t[(0, 0)], t[(0, 1)], p, ps)))
            .max(rel(t[(0, 0)] * q - t[(0, 1)] * qs, qg, row(t[(0, 0)], t[(0, 1)], q, qs)))
            .max(rel(t[(1, 0)] * p + t[(1, 1)] * ps, psg, row(t[(1, 0)], t[(1, 1)], p, ps)))
            .max(rel(t[(1, 0)] * q - t[(1, 1)] * qs, -qsg, row(t[(1, 0)], t[(1, 1)], q, qs)));
        // Product formula for φ*_{n+m}.
        worst = worst.max(rel(
            p * (ps_t - qs_t) + ps * (ps_t + qs_t),
            2.0 * psg,
            p.norm() * s_bot + ps.norm() * s_bot,
        ));
        let id = transfer_matrices(&tail, 0, z)?;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        worst = worst
            .max((id[(0, 0)] - one).norm() + (id[(1, 1)] - one).norm())
            .max((id[(0, 1)] - zero).norm() + (id[(1, 0)] - zero).norm());
        // m = 0: the empty tail has φ̃_0* = ψ̃_0* = 1, so the product is φ_n*.
        let (p0, ps0) = values_at(&tail, 0, z)?[0];
        let (q0, qs0) = values_at(&tail.negated(), 0, z)?[0];
        worst = worst.max(rel(p * (ps0 - qs0) + ps * (ps0 + qs0), 2.0 * ps, 2.0 * (p.norm() + ps.norm())));
        worst = worst.max(rel(p0, one, 1.0)).max(rel(q0, one, 1.0));
        // The library path re-extracts the head's Schur parameters from φ_n,
        // which loses digits as |γ| → 1; its own check is looser.
        let input = GlueInput::new(pair_of(&head)?, CaratheodoryFn::constant_one(), UnitGrid::new(64)?);
        let g0 = glued_phi_star(&input, &tail, 0, 1e-9)?;
        extracted = extracted.max(g0.direct.rel_coeff_diff(&input.phi_n.phi_star));
    }
    Ok((
        check(worst <= 1e-12 && extracted <= 1e-9),
        format!("100 draws, max relative defect {worst:.2e} (tol 1e-12); m = 0 through Schur extraction {extracted:.2e} (tol 1e-9)"),
    ))
}

fn sweep(fx: &Fixtures, quick: bool) -> Vec<usize> {
    if quick {
        vec![16, 32]
    } else {
        fx.steklov.ns.clone()
    }
}

fn c7_steklov_end_to_end(fx: &Fixtures, quick: bool) -> Result<(Status, String)> {
    let f = &fx.steklov;
    let c_dev = f.deviation_c;
    let mut dev: f64 = 0.0;
    let mut steklov = true;
    let mut prefix: f64 = 0.0;
    let mut mass: f64 = 0.0;
    let mut rows = Vec::new();
    for n in sweep(fx, quick) {
        let c = build_construction(n, f.epsilon, f.b)?;
        let w = closed_form_weight(&c)?;
        dev = dev.max(w.deviation);
        steklov &= c.steklov(1.0 - c_dev * f.epsilon).is_valid();
        mass = mass.max((c.sigma.total_mass() - 1.0).abs());
        if n <= 64 {
            let got = verblunsky_from_measure(&c.sigma, n)?;
            prefix = prefix.max(got.max_diff(&schur_from_orthonormal(&c.phi)?));
        }
        rows.push(verify_growth(&c));
    }
    let report = GrowthReport::new(rows);
    let (lo, hi) = report.ratio_band().expect("rows");
    let [c1, c2] = f.ratio_band;
    let band_ok = quick || (lo >= c1 && hi <= c2);
    let ok = dev <= c_dev * f.epsilon && steklov && prefix <= 1e-6 && mass <= 1e-8 && band_ok;
    Ok((
        check(ok),
        format!(
            "sup|2πσ′−1| = {:.3}ε (C = {c_dev:.3}), Steklov δ = 1−Cε: {steklov}, prefix gap {prefix:.2e}, ratio in [{lo:.3}, {hi:.3}]{}",
            dev / f.epsilon,
            if quick { String::new() } else { format!(" against [{c1:.3}, {c2:.3}]") }
        ),
    ))
}

fn constructions(fx: &Fixtures, quick: bool) -> Result<Vec<SteklovConstruction>> {
    let mut out = Vec::new();
    let eps: Vec<f64> = if quick { vec![fx.steklov.epsilon] } else { fx.steklov.epsilon_grid.clone() };
    for e in eps {
        for n in sweep(fx, quick) {
            out.push(build_construction(n, e, fx.steklov.b)?);
        }
    }
    Ok(out)
}

fn c8_denominator_identity(fx: &Fixtures, quick: bool) -> Result<(Status, String)> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for c in constructions(fx, quick)? {
        // closed_form_weight already rejects residuals above 1e−10.
        let w = closed_form_weight(&c)?;
        worst = worst.max(w.denominator_residual);
        count += 1;
    }
    Ok((check(worst <= 1e-10), format!("{count} constructions, max residual {worst:.2e} (tol 1e-10)")))
}

fn c9_decoupling_growth(fx: &Fixtures, quick: bool) -> Result<(Status, String)> {
    if quick {
        return Ok((Status::Skip, "needs n = 4096".into()));
    }
    let f = &fx.decoupling;
    let small = sec1_violation_demo(&build_construction(f.n_small, f.epsilon, fx.steklov.b)?)?;
    let large = sec1_violation_demo(&build_construction(f.n_large, f.epsilon, fx.steklov.b)?)?;
    let factor = large.ratio_sup / small.ratio_sup;
    let frozen = (small.ratio_sup - f.ratio_sup_small).abs() <= 1e-6 * f.ratio_sup_small
        && (large.ratio_sup - f.ratio_sup_large).abs() <= 1e-6 * f.ratio_sup_large;
    Ok((
        check(factor >= f.required_factor),
        format!(
            "ratio sup {:.4} at n = {}, {:.4} at n = {}, factor {factor:.3} (need {}), matches frozen values: {frozen}",
            small.ratio_sup, f.n_small, large.ratio_sup, f.n_large, f.required_factor
        ),
    ))
}

fn c10_real_line() -> Result<(Status, String)> {
    let k_max = 16;
    let grid = UnitGrid::new(1 << 12)?;
    let sigma = SymmetricCircleMeasure::new(CircleMeasure::lebesgue(grid), 0.0)?;
    let from_circle = circle_to_segment_polys(&sigma, k_max)?;
    let oracle = segment_gram_schmidt_oracle(&sigma.to_segment()?, k_max)?;
    let cheb = chebyshev_t_coeffs(k_max);
    let mut gap: f64 = 0.0;
    let mut closed: f64 = 0.0;
    for k in 0..=k_max {
        gap = gap.max(from_circle[k].max_coeff_diff(&oracle.polys[k]));
        let s = if k == 0 { 1.0 / PI.sqrt() } else { (2.0 / PI).sqrt() };
        for (j, c) in cheb[k].iter().enumerate() {
            closed = closed.max((from_circle[k].coeffs_in_x[j] - s * c).abs());
        }
    }
    Ok((
        check(gap <= 1e-7 && closed <= 1e-7),
        format!("k ≤ {k_max}: oracle gap {gap:.2e}, gap to √(2/π)T_k {closed:.2e} (tol 1e-7)"),
    ))
}

fn c11_szego_ratio(fx: &Fixtures, quick: bool) -> Result<(Status, String)> {
    let mut checked = 0;
    let mut tightest = f64::INFINITY;
    let mut record = |r: SzegoRatio| -> bool {
        checked += 1;
        tightest = tightest.min(r.ratio - r.lower_bound());
        r.holds()
    };
    let mut ok = true;
    for c in constructions(fx, quick)? {
        let delta = c.steklov(0.0).attained_delta();
        ok &= record(SzegoRatio::from_kappa(c.n, c.kappa(), delta));
        if c.n <= 64 {
            let fam = monic_gram_schmidt(&c.sigma, c.n)?;
            ok &= (fam.kappa(c.n) - c.kappa()).abs() <= 1e-6 * c.kappa();
        }
    }
    let vns: Vec<usize> = if quick { vec![16, 32] } else { fx.variant.ns.clone() };
    for n in vns {
        let v = rakhmanov_variant(n, fx.variant.epsilon, &[])?;
        let t = &v.trials[0];
        if let Some((lo, _)) = t.weight_range {
            ok &= record(SzegoRatio::from_kappa(n, v.pair.kappa, lo));
        }
    }
    let rns: Vec<usize> = if quick { vec![16, 32] } else { fx.rakhmanov.ns.clone() };
    for row in growth_table(fx.rakhmanov.epsilon, &rns)?.rows() {
        let ratio = row.residuals["szego_ratio"];
        ok &= record(SzegoRatio {
            n: row.n,
            ratio,
            delta: row.steklov_delta,
        });
    }
    Ok((
        check(ok),
        format!("{checked} measures, smallest margin 1/κ_n − √δ = {tightest:.4}"),
    ))
}
