//! `opuc` command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use opuc_core::gluing::{glued_weight, validate_glue_input};
use opuc_core::measure::CircleMeasure;
use opuc_core::opuc::verblunsky_from_measure;
use opuc_core::rakhmanov::growth_table;
use opuc_core::realline::{compare_reduction, SegmentMeasure, SymmetricCircleMeasure};
use opuc_core::report::GrowthReport;
use opuc_core::steklov::{
    build_construction, closed_form_weight, rakhmanov_variant, sec1_violation_demo, verify_growth,
};
use opuc_core::{Error, UnitGrid};

use crate::fixtures::Fixtures;
use crate::formats::{
    emit_report, schur_from_json, schur_to_json, write_json, write_segment_csv, write_weight_csv, Format,
    GlueReportDto, GrowthRowDto, MeasureDto, PolynomialDto, SegmentPolynomialDto,
};
use crate::suites::{glue_input_from, random_schur, run_all, run_criterion};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "opuc", version, about = "Orthogonal polynomials on the unit circle: constructions and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point masses at roots of unity on Lebesgue measure: growth rows.
    Rakhmanov {
        #[arg(long, conflicts_with = "n_list")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Steklov-class measures with ε log n growth.
    Steklov {
        #[command(subcommand)]
        action: SteklovAction,
    },
    /// Glue a Schur prefix to the tail of a Bernstein–Szegő Carathéodory function.
    Glue {
        /// JSON list of [re, im] for the head; random when absent.
        #[arg(long)]
        head: Option<PathBuf>,
        /// JSON list of [re, im] whose Carathéodory function is F̃.
        #[arg(long)]
        tail: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        tail_len: usize,
        /// Bound on |γ| for a random head.
        #[arg(long, default_value_t = crate::suites::HEAD_RADIUS)]
        radius: f64,
        /// Bound on Σ|γ̃| for a random tail.
        #[arg(long, default_value_t = crate::suites::TAIL_L1)]
        tail_l1: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Circle-to-segment reduction against the segment oracle.
    Realline {
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SegmentWeight::Lebesgue)]
        weight: SegmentWeight,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Table rows for CSV output.
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Acceptance suite.
    Verify {
        /// Sizes up to 32 only.
        #[arg(long)]
        quick: bool,
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u8>,
        /// Re-measure the frozen constants and write them to --output, to
        /// the OPUC_FIXTURES path, or to the crate's fixtures file.
        #[arg(long)]
        refreeze: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SteklovAction {
    /// One construction: checks, weight statistics, growth row.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        /// Also write φ_n as polynomial JSON.
        #[arg(long)]
        poly_out: Option<PathBuf>,
        /// Also write σ as measure JSON.
        #[arg(long)]
        measure_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Growth rows over an n-list.
    Sweep {
        #[arg(long)]
        eps: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Rakhmanov's polynomial in the M_n form, glued with F̃ = 1 + CεM_n.
    Variant {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        c_list: Vec<f64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SegmentWeight {
    /// The segment image of dθ/2π.
    Lebesgue,
    Arcsine,
    ChebyshevU,
    Uniform,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Check(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Check(_) => EXIT_CHECK,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Input(e) => write!(f, "invalid input: {e:#}"),
            Self::Check(e) => write!(f, "check failed: {e:#}"),
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParameter(_)
            | Error::InvalidMeasure(_)
            | Error::SchurOutOfDisk { .. }
            | Error::GridTooSmall { .. }
            | Error::GridMismatch { .. }
            | Error::DegreeExceedsNominal { .. }
            | Error::SequenceTooShort { .. }
            | Error::OutsideDisk { .. }
            | Error::NotSymmetric { .. }
    )
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if is_input_error(&e) {
            Self::Input(e.into())
        } else {
            Self::Check(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(inner) if is_input_error(inner) => Self::Input(e),
            Some(_) => Self::Check(e),
            // Files and parse errors are input problems.
            None => Self::Input(e),
        }
    }
}

type Run = std::result::Result<(), Failure>;

fn sink(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(value: &T, out: &Output) -> Run {
    write_json(value, sink(&out.output)?).map_err(Failure::Check)
}

fn emit_growth(report: &GrowthReport, out: &Output) -> Run {
    emit_report(report, out.format, sink(&out.output)?).map_err(Failure::Check)
}

fn input_err(msg: String) -> Failure {
    Failure::Input(anyhow::anyhow!(msg))
}

fn check_err(msg: String) -> Failure {
    Failure::Check(anyhow::anyhow!(msg))
}

pub fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Rakhmanov { n, n_list, eps, out } => {
            let ns = match (n, n_list) {
                (Some(n), _) => vec![n],
                (None, Some(l)) if !l.is_empty() => l,
                _ => return Err(input_err("give --n or --n-list".into())),
            };
            emit_growth(&growth_table(eps, &ns)?, &out)
        }
        Command::Steklov { action } => run_steklov(action),
        Command::Glue {
            head,
            tail,
            n,
            tail_len,
            radius,
            tail_l1,
            seed,
            out,
        } => run_glue(head, tail, n, tail_len, radius, tail_l1, seed, &out),
        Command::Realline {
            k,
            weight,
            grid,
            points,
            out,
        } => run_realline(k, weight, grid, points, &out),
        Command::Verify {
            quick,
            only,
            refreeze,
            output,
        } => run_verify(quick, only, refreeze, output),
    }
}

#[derive(Serialize)]
struct BuildReport {
    n: usize,
    epsilon: f64,
    b: f64,
    a: f64,
    kappa: f64,
    re_d_range: [f64; 2],
    re_f_range: [f64; 2],
    phi_formula_residual: f64,
    difference_residual: f64,
    normalization: f64,
    mass: f64,
    deviation: f64,
    min_two_pi_weight: f64,
    denominator_residual: f64,
    path_mismatch: f64,
    growth: GrowthRowDto,
    decoupling_ratio_sup: f64,
    decoupling_ratio_near_one: f64,
}

fn run_steklov(action: SteklovAction) -> Run {
    match action {
        SteklovAction::Build {
            n,
            eps,
            b,
            poly_out,
            measure_out,
            out,
        } => {
            let c = build_construction(n, eps, b)?;
            let w = closed_form_weight(&c)?;
            if let Some(p) = poly_out {
                write_json(&PolynomialDto::from_poly(&c.phi), sink(&Some(p))?).map_err(Failure::Check)?;
            }
            if let Some(p) = measure_out {
                write_json(&MeasureDto::from_measure(&c.sigma), sink(&Some(p))?).map_err(Failure::Check)?;
            }
            if out.format == Format::Csv {
                return write_weight_csv(&c.sigma, sink(&out.output)?).map_err(Failure::Check);
            }
            let demo = sec1_violation_demo(&c)?;
            let ch = c.checks;
            emit_json(
                &BuildReport {
                    n,
                    epsilon: eps,
                    b,
                    a: c.a,
                    kappa: c.kappa(),
                    re_d_range: [ch.re_d_range.0, ch.re_d_range.1],
                    re_f_range: [ch.re_f_range.0, ch.re_f_range.1],
                    phi_formula_residual: ch.phi_formula_residual,
                    difference_residual: ch.difference_residual,
                    normalization: ch.normalization,
                    mass: c.sigma.total_mass(),
                    deviation: w.deviation,
                    min_two_pi_weight: c.steklov(0.0).attained_delta(),
                    denominator_residual: w.denominator_residual,
                    path_mismatch: w.path_mismatch,
                    growth: GrowthRowDto::from_row(&verify_growth(&c)),
                    decoupling_ratio_sup: demo.ratio_sup,
                    decoupling_ratio_near_one: demo.ratio_near_one,
                },
                &out,
            )
        }
        SteklovAction::Sweep { eps, n_list, b, out } => {
            let rows = n_list
                .iter()
                .map(|&n| build_construction(n, eps, b).map(|c| verify_growth(&c)))
                .collect::<opuc_core::Result<Vec<_>>>()?;
            emit_growth(&GrowthReport::new(rows), &out)
        }
        SteklovAction::Variant { n, eps, c_list, out } => {
            let v = rakhmanov_variant(n, eps, &c_list)?;
            #[derive(Serialize)]
            struct Trial {
                c: f64,
                f_min_re: f64,
                f_mean_re: f64,
                caratheodory: bool,
                min_two_pi_weight: Option<f64>,
                max_two_pi_weight: Option<f64>,
                mass: Option<f64>,
            }
            #[derive(Serialize)]
            struct VariantReport {
                n: usize,
                epsilon: f64,
                b: f64,
                cancelling_c: f64,
                closed_form_residual: f64,
                max_abs_re_m: f64,
                max_abs_im_m: f64,
                re_phi_star_range: [f64; 2],
                integral: f64,
                a: f64,
                kappa: f64,
                trials: Vec<Trial>,
            }
            let report = VariantReport {
                n,
                epsilon: eps,
                b: v.b,
                cancelling_c: v.cancelling_c(),
                closed_form_residual: v.closed_form_residual,
                max_abs_re_m: v.blowup.max_abs_re,
                max_abs_im_m: v.blowup.max_abs_im,
                re_phi_star_range: [v.re_phi_star_range.0, v.re_phi_star_range.1],
                integral: v.integral,
                a: v.a,
                kappa: v.pair.kappa,
                trials: v
                    .trials
                    .iter()
                    .map(|t| Trial {
                        c: t.c,
                        f_min_re: t.f_min_re,
                        f_mean_re: t.f_mean_re,
                        caratheodory: t.caratheodory,
                        min_two_pi_weight: t.weight_range.map(|r| r.0),
                        max_two_pi_weight: t.weight_range.map(|r| r.1),
                        mass: t.mass,
                    })
                    .collect(),
            };
            emit_json(&report, &out)
        }
    }
}

fn read_schur(path: &PathBuf) -> std::result::Result<opuc_core::opuc::SchurSequence, Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Vec<[f64; 2]> = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(schur_from_json(&v)?)
}

#[allow(clippy::too_many_arguments)]
fn run_glue(
    head: Option<PathBuf>,
    tail: Option<PathBuf>,
    n: usize,
    tail_len: usize,
    radius: f64,
    tail_l1: f64,
    seed: u64,
    out: &Output,
) -> Run {
    if !(0.0..1.0).contains(&radius) {
        return Err(input_err(format!("radius {radius} must lie in [0, 1)")));
    }
    let tail_radius = tail_l1 / tail_len.max(1) as f64;
    if !(0.0..1.0).contains(&tail_radius) {
        return Err(input_err(format!("tail l1 bound {tail_l1} gives |γ̃| bound {tail_radius} outside [0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let head = match head {
        Some(p) => read_schur(&p)?,
        None => random_schur(&mut rng, n, radius),
    };
    let tail = match tail {
        Some(p) => read_schur(&p)?,
        None => random_schur(&mut rng, tail_len, tail_radius),
    };
    if head.is_empty() {
        return Err(input_err("the head needs at least one parameter".into()));
    }
    let (input, head, tail) = glue_input_from(&head, &tail)?;
    let v = validate_glue_input(&input);
    let g = glued_weight(&input.clone().with_tail_len(tail.len().max(1)))?;
    let total = head.len() + tail.len();
    let back = verblunsky_from_measure(&g.sigma, total)?;
    let roundtrip_error = back.max_diff(&head.concat(&tail));
    let mut residuals = std::collections::BTreeMap::new();
    residuals.insert("mass".to_string(), (g.sigma.total_mass() - 1.0).abs());
    residuals.insert("phi_star_normalization".to_string(), (v.phi_star_normalization - 1.0).abs());
    residuals.insert("f_mean_re".to_string(), (v.f_mean_re - 1.0).abs());
    residuals.insert("f_min_re".to_string(), v.f_min_re);
    residuals.insert("form_mismatch".to_string(), g.form_mismatch);
    residuals.insert("tail_extraction".to_string(), g.tail.max_diff(&tail.padded(g.tail.len())));
    let report = GlueReportDto {
        n: head.len(),
        gamma_head: schur_to_json(&head),
        gamma_tail_prefix: schur_to_json(&g.tail.prefix(g.tail.len().min(8))),
        normalization_residuals: residuals,
        roundtrip_error,
    };
    emit_json(&report, out)?;
    if !v.passes(1e-9) {
        return Err(check_err(format!("glue hypotheses fail: {v:?}")));
    }
    if roundtrip_error > 1e-6 {
        return Err(check_err(format!("round trip error {roundtrip_error:e} exceeds 1e-6")));
    }
    Ok(())
}

fn run_realline(k: usize, weight: SegmentWeight, grid: usize, points: usize, out: &Output) -> Run {
    let g = UnitGrid::new(grid)?;
    let psi = match weight {
        SegmentWeight::Lebesgue => SymmetricCircleMeasure::new(CircleMeasure::lebesgue(g), 0.0)?.to_segment()?,
        SegmentWeight::Arcsine => SegmentMeasure::arcsine(g),
        SegmentWeight::ChebyshevU => SegmentMeasure::chebyshev_u(g),
        SegmentWeight::Uniform => SegmentMeasure::uniform(g),
    };
    let c = compare_reduction(&psi, k)?;
    if out.format == Format::Csv {
        write_segment_csv(&c.from_circle, points, sink(&out.output)?).map_err(Failure::Check)?;
    } else {
        #[derive(Serialize)]
        struct RealLineReport {
            k_max: usize,
            max_coeff_diff: f64,
            max_rel_diff: f64,
            oracle_gram_residual: f64,
            polynomials: Vec<SegmentPolynomialDto>,
        }
        emit_json(
            &RealLineReport {
                k_max: k,
                max_coeff_diff: c.max_coeff_diff,
                max_rel_diff: c.max_rel_diff,
                oracle_gram_residual: c.oracle.gram_residual,
                polynomials: c.from_circle.iter().map(SegmentPolynomialDto::from).collect(),
            },
            out,
        )?;
    }
    if c.max_rel_diff > 1e-7 {
        return Err(check_err(format!("reduction differs from the oracle by {:e}", c.max_rel_diff)));
    }
    Ok(())
}

fn run_verify(quick: bool, only: Option<u8>, refreeze: bool, output: Option<PathBuf>) -> Run {
    if refreeze {
        let f = Fixtures::measure().map_err(Failure::Check)?;
        let path = output.unwrap_or_else(Fixtures::default_path);
        f.write(&path).map_err(Failure::Check)?;
        eprintln!("wrote {}", path.display());
        return Ok(());
    }
    let fx = Fixtures::load()?;
    let outcomes = match only {
        Some(id) if (1..=11).contains(&id) => vec![run_criterion(id, &fx, quick)],
        Some(id) => return Err(input_err(format!("no criterion {id}"))),
        None => run_all(&fx, quick),
    };
    let mut stdout = io::stdout().lock();
    for o in &outcomes {
        writeln!(stdout, "{}", o.line()).map_err(|e| Failure::Check(e.into()))?;
        if let Some(k) = &o.known_failure {
            writeln!(stdout, "       recorded: {k}").map_err(|e| Failure::Check(e.into()))?;
        }
    }
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| o.status == crate::suites::Status::Fail)
        .map(|o| o.id)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(check_err(format!("criteria {failed:?} failed")))
    }
}
