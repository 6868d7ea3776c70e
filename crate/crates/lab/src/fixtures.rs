//! Regression constants measured once and frozen.
//!
//! The growth and Steklov statements are asymptotic, so concrete thresholds
//! come from a measurement run ([`Fixtures::measure`]) with fixed margins.
//! The checked-in file is embedded; `OPUC_FIXTURES` points at a replacement.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use opuc_core::rakhmanov::growth_table;
use opuc_core::report::GrowthReport;
use opuc_core::steklov::{
    build_construction, closed_form_weight, fejer_smooth, rakhmanov_variant, sec1_violation_demo,
    step_cauchy_coefficients, verify_growth,
};
use opuc_core::UnitGrid;

pub const ENV_VAR: &str = "OPUC_FIXTURES";

const EMBEDDED: &str = include_str!("../fixtures/constants.json");

/// Relative widening applied to measured bands and constants.
pub const MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RakhmanovFixtures {
    pub epsilon: f64,
    pub ns: Vec<usize>,
    /// `sup|Φ_n| / (1 + ε log n)`.
    pub ratio_band: [f64; 2],
    pub log_slope: f64,
    /// Maximiser within `argmax_window / n` of `θ ∈ {0, π}`.
    pub argmax_window: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteklovFixtures {
    pub epsilon: f64,
    pub b: f64,
    pub ns: Vec<usize>,
    /// `sup|φ_n| / (ε log n)` at `epsilon`.
    pub ratio_band: [f64; 2],
    /// `sup|2πσ′ − 1| ≤ C ε` over `epsilon_grid` and `ns`.
    pub deviation_c: f64,
    pub epsilon_grid: Vec<f64>,
    /// `|a − 1| ≤ C ε` at `n = 256` over `epsilon_grid`.
    pub a_c: f64,
    /// Least-squares slope of `sup|φ_n|` against `log n`, divided by `ε`.
    pub normalized_slope: f64,
    /// Maximiser within `argmax_c / n` of `θ ∈ {0, π}`.
    pub argmax_c: f64,
    /// `|Im M_n(e^{i/n})| / log n`.
    pub im_m_over_log_band: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantFixtures {
    pub epsilon: f64,
    pub ns: Vec<usize>,
    pub c_trials: Vec<f64>,
    /// Steklov with `δ = 1 − C′ ε` for the cancelling `C`.
    pub steklov_c: f64,
    /// `sup_θ |Σ_{j≤N} sin(jθ)/j|`, uniform over the sampled `N`.
    pub sine_sum_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecouplingFixtures {
    pub epsilon: f64,
    pub n_small: usize,
    pub n_large: usize,
    pub ratio_sup_small: f64,
    pub ratio_sup_large: f64,
    /// Growth factor demanded between the two sizes.
    pub required_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownFailure {
    pub criterion: u8,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixtures {
    pub rakhmanov: RakhmanovFixtures,
    pub steklov: SteklovFixtures,
    pub variant: VariantFixtures,
    pub decoupling: DecouplingFixtures,
    /// Criteria measured as unattainable; still run and reported as FAIL.
    pub known_failures: Vec<KnownFailure>,
}

fn widen(lo: f64, hi: f64) -> [f64; 2] {
    [lo * (1.0 - MARGIN), hi * (1.0 + MARGIN)]
}

fn band(r: &GrowthReport) -> (f64, f64) {
    r.ratio_band().expect("nonempty sweep")
}

impl Fixtures {
    pub fn embedded() -> Self {
        serde_json::from_str(EMBEDDED).expect("embedded fixtures parse")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// `OPUC_FIXTURES` if set, otherwise the embedded file.
    pub fn load() -> Result<Self> {
        match std::env::var_os(ENV_VAR) {
            Some(p) => Self::from_path(Path::new(&p)),
            None => Ok(Self::embedded()),
        }
    }

    /// Where `--refreeze` writes by default.
    pub fn default_path() -> PathBuf {
        std::env::var_os(ENV_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/constants.json"))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        crate::formats::write_json(self, &mut buf)?;
        std::fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
    }

    pub fn known_failure(&self, criterion: u8) -> Option<&KnownFailure> {
        self.known_failures.iter().find(|k| k.criterion == criterion)
    }

    /// Runs every measurement behind the constants and widens the results by
    /// [`MARGIN`]. Takes on the order of a minute in release builds.
    pub fn measure() -> Result<Self> {
        let pow2 = |ks: &[u32]| ks.iter().map(|k| 1usize << k).collect::<Vec<_>>();

        let ns = pow2(&[6, 8, 10, 12, 14]);
        let rt = growth_table(0.5, &ns)?;
        let (lo, hi) = band(&rt);
        let window = rt
            .rows()
            .iter()
            .map(|r| r.distance_to_real_axis() * r.n as f64)
            .fold(0.0, f64::max);
        let rakhmanov = RakhmanovFixtures {
            epsilon: 0.5,
            ns: ns.clone(),
            ratio_band: widen(lo, hi),
            log_slope: rt.log_slope().expect("several rows"),
            argmax_window: 10.0f64.max(window * (1.0 + MARGIN)),
        };

        let eps = 0.05;
        let b = 2.0;
        let epsilon_grid = vec![0.01, 0.02, 0.04, 0.05];
        let mut rows = Vec::new();
        let mut dev_c: f64 = 0.0;
        let mut a_c: f64 = 0.0;
        let mut argmax: f64 = 0.0;
        for &e in &epsilon_grid {
            for &n in &ns {
                let c = build_construction(n, e, b)?;
                dev_c = dev_c.max(closed_form_weight(&c)?.deviation / e);
                if n == 256 {
                    a_c = a_c.max((c.a - 1.0).abs() / e);
                }
                if e == eps {
                    let r = verify_growth(&c);
                    argmax = argmax.max(r.distance_to_real_axis() * n as f64);
                    rows.push(r);
                }
            }
        }
        let st = GrowthReport::new(rows);
        let (lo, hi) = band(&st);
        let mut im = (f64::INFINITY, 0.0f64);
        for &n in &ns {
            let m = fejer_smooth(&step_cauchy_coefficients(n), n)?;
            let v = m.diagnostics(&UnitGrid::for_degree(n)).im_at_one_over_n / (n as f64).ln();
            im = (im.0.min(v), im.1.max(v));
        }
        let steklov = SteklovFixtures {
            epsilon: eps,
            b,
            ns: ns.clone(),
            ratio_band: widen(lo, hi),
            deviation_c: dev_c * (1.0 + MARGIN),
            epsilon_grid,
            a_c: a_c * (1.0 + MARGIN),
            normalized_slope: st.log_slope().expect("several rows") / eps,
            argmax_c: argmax * (1.0 + MARGIN),
            im_m_over_log_band: widen(im.0, im.1),
        };

        let vns = pow2(&[6, 8, 10, 12]);
        let c_trials = vec![1.0, 2.0, 4.0];
        let mut worst: f64 = 0.0;
        for &n in &vns {
            let v = rakhmanov_variant(n, eps, &c_trials)?;
            let cancel = v.cancelling_c();
            let t = v
                .trials
                .iter()
                .find(|t| t.c == cancel)
                .context("cancelling trial present")?;
            let lo = t.weight_range.context("cancelling trial glued")?.0;
            worst = worst.max((1.0 - lo) / eps);
        }
        let sine_grid = UnitGrid::new(1 << 16)?;
        let sine = [16, 256, 4096]
            .iter()
            .map(|&n| opuc_core::steklov::sine_sum_sup(n, &sine_grid))
            .fold(0.0, f64::max);
        let variant = VariantFixtures {
            epsilon: eps,
            ns: vns,
            c_trials,
            steklov_c: worst * (1.0 + MARGIN),
            sine_sum_bound: sine * (1.0 + MARGIN),
        };

        let (n_small, n_large) = (64, 4096);
        let small = sec1_violation_demo(&build_construction(n_small, eps, b)?)?.ratio_sup;
        let large = sec1_violation_demo(&build_construction(n_large, eps, b)?)?.ratio_sup;
        let decoupling = DecouplingFixtures {
            epsilon: eps,
            n_small,
            n_large,
            ratio_sup_small: small,
            ratio_sup_large: large,
            required_factor: 4.0,
        };
        let mut known_failures = Vec::new();
        if large < 4.0 * small {
            known_failures.push(KnownFailure {
                criterion: 9,
                reason: format!(
                    "decoupling ratio sup grows only additively: {small:.4} at n = {n_small}, {large:.4} at n = {n_large} (factor {:.3})",
                    large / small
                ),
            });
        }

        Ok(Self {
            rakhmanov,
            steklov,
            variant,
            decoupling,
            known_failures,
        })
    }
}
