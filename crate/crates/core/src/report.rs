//! Rows of growth measurements shared by the Rakhmanov and Steklov sweeps.

use std::collections::BTreeMap;

/// Which comparator a row is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    /// `1 + ε log n`.
    OnePlusEpsLog,
    /// `ε log n`.
    EpsLog,
}

impl Comparator {
    pub fn eval(self, epsilon: f64, n: usize) -> f64 {
        let l = epsilon * (n as f64).ln();
        match self {
            Self::OnePlusEpsLog => 1.0 + l,
            Self::EpsLog => l,
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Self::OnePlusEpsLog => "1 + eps*ln(n)",
            Self::EpsLog => "eps*ln(n)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub epsilon: f64,
    pub sup_norm: f64,
    /// In `(−π, π]`.
    pub argmax_theta: f64,
    pub comparator: f64,
    pub comparator_kind: Comparator,
    pub steklov_delta: f64,
    /// Named side measurements (identity residuals, ratios, ...).
    pub residuals: BTreeMap<String, f64>,
}

impl GrowthRow {
    pub fn ratio(&self) -> f64 {
        self.sup_norm / self.comparator
    }

    /// Distance of the maximiser to the nearer of `θ = 0` and `θ = π`.
    pub fn distance_to_real_axis(&self) -> f64 {
        crate::grid::distance_to_real_axis_points(self.argmax_theta)
    }
}

/// Rows sorted by `n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GrowthReport {
    rows: Vec<GrowthRow>,
}

impl GrowthReport {
    pub fn new(mut rows: Vec<GrowthRow>) -> Self {
        rows.sort_by_key(|r| r.n);
        Self { rows }
    }

    pub fn push(&mut self, row: GrowthRow) {
        let at = self.rows.partition_point(|r| r.n <= row.n);
        self.rows.insert(at, row);
    }

    pub fn rows(&self) -> &[GrowthRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(min, max)` of `sup_norm / comparator` over the rows.
    pub fn ratio_band(&self) -> Option<(f64, f64)> {
        let mut it = self.rows.iter().map(GrowthRow::ratio);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), r| (lo.min(r), hi.max(r))))
    }

    /// Least-squares slope of `sup_norm` against `ln n`.
    pub fn log_slope(&self) -> Option<f64> {
        if self.rows.len() < 2 {
            return None;
        }
        let xs: Vec<f64> = self.rows.iter().map(|r| (r.n as f64).ln()).collect();
        let ys: Vec<f64> = self.rows.iter().map(|r| r.sup_norm).collect();
        let k = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, sup: f64) -> GrowthRow {
        GrowthRow {
            n,
            epsilon: 0.5,
            sup_norm: sup,
            argmax_theta: 0.0,
            comparator: Comparator::OnePlusEpsLog.eval(0.5, n),
            comparator_kind: Comparator::OnePlusEpsLog,
            steklov_delta: 1.0 / 1.5,
            residuals: BTreeMap::new(),
        }
    }

    #[test]
    fn rows_stay_sorted() {
        let mut r = GrowthReport::new(vec![row(64, 1.0), row(16, 1.0)]);
        r.push(row(32, 1.0));
        let ns: Vec<usize> = r.rows().iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![16, 32, 64]);
    }

    #[test]
    fn slope_of_exact_log_law() {
        let r = GrowthReport::new((4..10).map(|k| row(1 << k, 2.0 + 0.3 * ((1 << k) as f64).ln())).collect());
        assert!((r.log_slope().unwrap() - 0.3).abs() < 1e-12);
        assert!(GrowthReport::default().ratio_band().is_none());
    }
}
