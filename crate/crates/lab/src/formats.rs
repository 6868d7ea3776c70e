//! On-disk formats. Field order is fixed by the struct declarations, so the
//! JSON emitted for a given value is byte-stable.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use opuc_core::measure::{Atom, CircleMeasure};
use opuc_core::opuc::SchurSequence;
use opuc_core::poly::ComplexPolynomial;
use opuc_core::realline::SegmentPolynomial;
use opuc_core::report::{Comparator, GrowthReport, GrowthRow};
use opuc_core::UnitGrid;

/// CSV header of a growth report.
pub const GROWTH_HEADER: [&str; 6] = ["n", "epsilon", "sup_norm", "argmax_theta", "comparator", "steklov_delta"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: &[f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomDto {
    pub theta: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDto {
    pub grid_size: usize,
    pub weight_samples: Vec<f64>,
    pub atoms: Vec<AtomDto>,
    pub probability: bool,
}

impl MeasureDto {
    pub fn from_measure(mu: &CircleMeasure) -> Self {
        Self {
            grid_size: mu.grid().size(),
            weight_samples: mu.weight_samples().to_vec(),
            atoms: mu
                .atoms()
                .iter()
                .map(|a| AtomDto {
                    theta: a.theta,
                    mass: a.mass,
                })
                .collect(),
            probability: mu.is_probability(),
        }
    }

    pub fn to_measure(&self) -> opuc_core::Result<CircleMeasure> {
        CircleMeasure::from_samples(
            UnitGrid::new(self.grid_size)?,
            self.weight_samples.clone(),
            self.atoms.iter().map(|a| Atom::new(a.theta, a.mass)).collect(),
        )
    }
}

/// `theta,weight` rows of the density samples.
pub fn write_weight_csv<W: Write>(mu: &CircleMeasure, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "weight"])?;
    for (t, v) in mu.grid().angles().zip(mu.weight_samples()) {
        w.write_record([t.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDto {
    pub nominal_degree: usize,
    pub coeffs: Vec<[f64; 2]>,
}

impl PolynomialDto {
    pub fn from_poly(p: &ComplexPolynomial) -> Self {
        Self {
            nominal_degree: p.nominal_degree(),
            coeffs: p.coeffs().iter().copied().map(pair).collect(),
        }
    }

    pub fn to_poly(&self) -> opuc_core::Result<ComplexPolynomial> {
        ComplexPolynomial::with_nominal(self.coeffs.iter().map(unpair).collect(), self.nominal_degree)
    }
}

/// A Schur sequence as a JSON list of `[re, im]`.
pub fn schur_to_json(s: &SchurSequence) -> Vec<[f64; 2]> {
    s.gamma().iter().copied().map(pair).collect()
}

pub fn schur_from_json(v: &[[f64; 2]]) -> opuc_core::Result<SchurSequence> {
    SchurSequence::new(v.iter().map(unpair).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRowDto {
    pub n: usize,
    pub epsilon: f64,
    pub sup_norm: f64,
    pub argmax_theta: f64,
    pub comparator: f64,
    pub steklov_delta: f64,
    pub comparator_formula: String,
    pub residuals: BTreeMap<String, f64>,
}

impl GrowthRowDto {
    pub fn from_row(r: &GrowthRow) -> Self {
        Self {
            n: r.n,
            epsilon: r.epsilon,
            sup_norm: r.sup_norm,
            argmax_theta: r.argmax_theta,
            comparator: r.comparator,
            steklov_delta: r.steklov_delta,
            comparator_formula: r.comparator_kind.formula().to_string(),
            residuals: r.residuals.clone(),
        }
    }

    pub fn to_row(&self) -> Result<GrowthRow> {
        let kind = [Comparator::OnePlusEpsLog, Comparator::EpsLog]
            .into_iter()
            .find(|c| c.formula() == self.comparator_formula)
            .with_context(|| format!("unknown comparator {:?}", self.comparator_formula))?;
        Ok(GrowthRow {
            n: self.n,
            epsilon: self.epsilon,
            sup_norm: self.sup_norm,
            argmax_theta: self.argmax_theta,
            comparator: self.comparator,
            comparator_kind: kind,
            steklov_delta: self.steklov_delta,
            residuals: self.residuals.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReportDto {
    pub rows: Vec<GrowthRowDto>,
}

impl GrowthReportDto {
    pub fn from_report(r: &GrowthReport) -> Self {
        Self {
            rows: r.rows().iter().map(GrowthRowDto::from_row).collect(),
        }
    }

    pub fn to_report(&self) -> Result<GrowthReport> {
        Ok(GrowthReport::new(
            self.rows.iter().map(GrowthRowDto::to_row).collect::<Result<_>>()?,
        ))
    }
}

pub fn write_growth_csv<W: Write>(r: &GrowthReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GROWTH_HEADER)?;
    for row in r.rows() {
        w.write_record([
            row.n.to_string(),
            row.epsilon.to_string(),
            row.sup_norm.to_string(),
            row.argmax_theta.to_string(),
            row.comparator.to_string(),
            row.steklov_delta.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_report<W: Write>(r: &GrowthReport, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Json => {
            write_json(&GrowthReportDto::from_report(r), &mut out)?;
        }
        Format::Csv => write_growth_csv(r, out)?,
    }
    Ok(())
}

pub fn parse_report<R: Read>(input: R) -> Result<GrowthReport> {
    let dto: GrowthReportDto = serde_json::from_reader(input)?;
    dto.to_report()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlueReportDto {
    pub n: usize,
    pub gamma_head: Vec<[f64; 2]>,
    pub gamma_tail_prefix: Vec<[f64; 2]>,
    pub normalization_residuals: BTreeMap<String, f64>,
    pub roundtrip_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentPolynomialDto {
    pub k: usize,
    pub coeffs_in_x: Vec<f64>,
}

impl From<&SegmentPolynomial> for SegmentPolynomialDto {
    fn from(p: &SegmentPolynomial) -> Self {
        Self {
            k: p.k,
            coeffs_in_x: p.coeffs_in_x.clone(),
        }
    }
}

/// `x,P_0,…,P_K` on `points` equispaced nodes of `[−1, 1]`.
pub fn write_segment_csv<W: Write>(polys: &[SegmentPolynomial], points: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x".to_string()];
    header.extend(polys.iter().map(|p| format!("P_{}", p.k)));
    w.write_record(&header)?;
    let points = points.max(2);
    for j in 0..points {
        let x = -1.0 + 2.0 * j as f64 / (points - 1) as f64;
        let mut rec = vec![x.to_string()];
        rec.extend(polys.iter().map(|p| p.eval(x).to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize) -> GrowthRow {
        let mut residuals = BTreeMap::new();
        residuals.insert("x".into(), 1e-17);
        GrowthRow {
            n,
            epsilon: 0.5,
            sup_norm: 2.25,
            argmax_theta: -0.001,
            comparator: Comparator::OnePlusEpsLog.eval(0.5, n),
            comparator_kind: Comparator::OnePlusEpsLog,
            steklov_delta: 2.0 / 3.0,
            residuals,
        }
    }

    fn csv_lines(r: &GrowthReport) -> Vec<String> {
        let mut buf = Vec::new();
        emit_report(r, Format::Csv, &mut buf).unwrap();
        String::from_utf8(buf).unwrap().lines().map(str::to_string).collect()
    }

    #[test]
    fn empty_report_is_header_only() {
        let lines = csv_lines(&GrowthReport::default());
        assert_eq!(lines, vec!["n,epsilon,sup_norm,argmax_theta,comparator,steklov_delta"]);
    }

    #[test]
    fn one_row_two_lines() {
        assert_eq!(csv_lines(&GrowthReport::new(vec![row(64)])).len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let r = GrowthReport::new(vec![row(256), row(64)]);
        let mut buf = Vec::new();
        emit_report(&r, Format::Json, &mut buf).unwrap();
        assert_eq!(parse_report(buf.as_slice()).unwrap(), r);
        let mut again = Vec::new();
        emit_report(&r, Format::Json, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn measure_and_polynomial_round_trip() {
        let grid = UnitGrid::new(16).unwrap();
        let mu = CircleMeasure::lebesgue(grid).with_atoms([Atom::new(1.0, 0.25)]).unwrap();
        let dto = MeasureDto::from_measure(&mu);
        assert!(!dto.probability);
        let text = serde_json::to_string(&dto).unwrap();
        let back: MeasureDto = serde_json::from_str(&text).unwrap();
        let mu2 = back.to_measure().unwrap();
        assert_eq!(mu2.weight_samples(), mu.weight_samples());
        assert_eq!(mu2.atoms(), mu.atoms());

        let p = ComplexPolynomial::with_nominal(vec![Complex64::new(1.0, -2.0), Complex64::new(0.0, 0.5)], 3).unwrap();
        let q = PolynomialDto::from_poly(&p).to_poly().unwrap();
        assert_eq!(q, p);
        let s = SchurSequence::new(vec![Complex64::new(0.1, 0.2)]).unwrap();
        assert_eq!(schur_from_json(&schur_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn weight_csv_has_grid_rows() {
        let mut buf = Vec::new();
        write_weight_csv(&CircleMeasure::lebesgue(UnitGrid::new(8).unwrap()), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with("theta,weight\n"));
    }
}
