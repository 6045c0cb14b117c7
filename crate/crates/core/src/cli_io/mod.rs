//! Run configuration, output files and the commands behind the `lampspec`
//! binary.
//!
//! Every command writes into the configured output directory and stamps
//! each JSON file with the configuration and its digest. Outputs contain no
//! timestamps, so reruns of the same configuration are byte-identical. The
//! file formats are described in `docs/formats.md`.

mod algebra;
mod config;

use std::fs;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::Serialize;

pub use algebra::{algebra_checks, AlgebraCheck, AlgebraReport, EIGEN_TOLERANCE, FOURIER_TOLERANCE, ISOMETRY_TOLERANCE};
pub use config::{Arithmetic, ConfigStamp, RunConfig, DEFAULT_LAMP};

use crate::animal_enum::{size_histogram, Mode};
use crate::annealed_spectra::{
    annealed_spectral_measure, verify_identity, AnnealedMeasure, MomentTable, VerifyReport, VerifySettings, MC_BLOCK,
};
use crate::cluster_spectrum::{point_spectrum, MASS_FLOOR, MERGE_TOLERANCE};
use crate::error::{Error, Result};
use crate::group_core::{make_group, Group, GroupOracle, LampGroup};
use crate::scalar::{render_f64, render_rational, Rational};
use crate::with_oracle;
use crate::wreath_algebra::WreathAlgebra;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "LAMPSPEC_THREADS";

/// Configures the global thread pool from [`THREADS_ENV`]; unset or empty
/// leaves the default (one thread per core).
pub fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    if value.trim().is_empty() {
        return Ok(());
    }
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Result of a command that checks identities.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
    /// Human-readable lines for the terminal.
    pub summary: Vec<String>,
}

impl Outcome {
    /// `0` when every check passed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn prepare(out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// `moments.csv`: `n,oracle,value,error`.
pub fn write_moments_csv(path: &Path, table: &MomentTable) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "oracle", "value", "error"])?;
    for row in &table.rows {
        w.write_record([row.n.to_string().as_str(), row.oracle.name(), &row.value, &row.error])?;
    }
    w.flush()?;
    Ok(())
}

/// `lambda.csv`: `index,lambda`, ascending.
pub fn write_lambda_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "lambda"])?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([i.to_string(), render_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyFile<'a> {
    config: ConfigStamp,
    mc_block: u64,
    #[serde(flatten)]
    report: &'a VerifyReport,
}

/// Runs the identity report at `p = 1/|H|` and writes `moments.csv` and
/// `report.json`.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let q = cfg.lamp_order()?;
    let lamp = LampGroup::cyclic(q)?;
    let settings = VerifySettings {
        n_max: cfg.n_max,
        max_animal: cfg.max_animal,
        mc_samples: cfg.mc_samples,
        seed: cfg.seed,
        ..VerifySettings::default()
    };
    if cfg.mc_samples == 1 {
        return Err(Error::Config("Monte Carlo needs at least 2 samples (or 0 to skip)".into()));
    }
    let report = with_oracle!(make_group(&cfg.group)?, g => {
        let alg = WreathAlgebra::new(g, lamp, cfg.mode);
        match cfg.arith {
            Arithmetic::Rational => verify_identity::<Rational, _>(&alg, &settings)?,
            Arithmetic::Double => verify_identity::<f64, _>(&alg, &settings)?,
        }
    });
    prepare(&cfg.out)?;
    let csv_path = cfg.out.join("moments.csv");
    let json_path = cfg.out.join("report.json");
    write_moments_csv(&csv_path, &report.table)?;
    let mut stamp = cfg.stamp();
    stamp.lamp = Some(q);
    write_json(&json_path, &VerifyFile { config: stamp, mc_block: MC_BLOCK, report: &report })?;

    let mut summary = vec![format!(
        "{} lamps Z{} mode {} p = {} N = {}: {} checks, {} failed",
        report.group,
        q,
        report.mode,
        report.p,
        report.n_max,
        report.checks.len(),
        report.failures().count()
    )];
    for s in &report.skipped {
        summary.push(format!("skipped {}: {}", s.oracle, s.reason));
    }
    for c in report.failures() {
        summary.push(format!(
            "FAIL n={} {}: difference {:e} > tolerance {:e}",
            c.n, c.name, c.difference, c.tolerance
        ));
    }
    Ok(Outcome { passed: report.pass, files: vec![csv_path, json_path], summary })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IdsFile<'a> {
    config: ConfigStamp,
    merge_tolerance: f64,
    mass_floor: f64,
    atom_mass: f64,
    unaccounted_mass_f64: f64,
    #[serde(flatten)]
    measure: &'a AnnealedMeasure,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct HistogramEntry {
    open: usize,
    closed: usize,
    count: u64,
    weight: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnimalsFile {
    config: ConfigStamp,
    mode: Mode,
    max_size: usize,
    animal_count: u64,
    finite_mass: String,
    histogram: Vec<HistogramEntry>,
    /// Present when `animal_count` is at most [`ANIMAL_LISTING_LIMIT`].
    animals: Option<serde_json::Value>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ListedAnimal<E: Serialize> {
    vertices: Vec<E>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<crate::group_core::Edge<E>>>,
    open: usize,
    closed: usize,
    weight: String,
}

/// Largest animal count listed one by one in `animals.json`.
pub const ANIMAL_LISTING_LIMIT: u64 = 10_000;

/// Writes `lambda.csv`, `ids.json` and `animals.json` for animals up to
/// `max_animal` at the configured `p`.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let p = cfg.probability();
    let (lambda, measure, animals) = with_oracle!(make_group(&cfg.group)?, g => {
        (
            point_spectrum(&g, cfg.max_animal, cfg.mode)?,
            annealed_spectral_measure(&g, &p, cfg.max_animal, cfg.mode)?,
            animals_file(&g, cfg, &p)?,
        )
    });
    prepare(&cfg.out)?;
    let paths = [cfg.out.join("lambda.csv"), cfg.out.join("ids.json"), cfg.out.join("animals.json")];
    write_lambda_csv(&paths[0], &lambda)?;
    write_json(
        &paths[1],
        &IdsFile {
            config: cfg.stamp(),
            merge_tolerance: MERGE_TOLERANCE,
            mass_floor: MASS_FLOOR,
            atom_mass: measure.atom_mass(),
            unaccounted_mass_f64: measure.unaccounted_f64(),
            measure: &measure,
        },
    )?;
    write_json(&paths[2], &animals)?;
    Ok(paths.to_vec())
}

fn animals_file<G: Group>(g: &GroupOracle<G>, cfg: &RunConfig, p: &Rational) -> Result<AnimalsFile> {
    let hist = size_histogram(g, cfg.max_animal, cfg.mode)?;
    let q = Rational::from_integer(1.into()) - p;
    let mut histogram = Vec::new();
    let mut total = Rational::from_integer(0.into());
    let mut count = 0u64;
    for (open, row) in hist.iter().enumerate() {
        for (closed, &c) in row.iter().enumerate().filter(|(_, &c)| c > 0) {
            let w = num_traits::pow(p.clone(), open) * num_traits::pow(q.clone(), closed);
            total += &w * Rational::from_integer(c.into());
            count += c;
            histogram.push(HistogramEntry { open, closed, count: c, weight: render_rational(&w) });
        }
    }
    let animals = if count <= ANIMAL_LISTING_LIMIT {
        Some(match cfg.mode {
            Mode::Site => serde_json::to_value(
                crate::animal_enum::enumerate_site_animals(g, cfg.max_animal)?
                    .into_iter()
                    .map(|a| ListedAnimal {
                        open: a.size(),
                        closed: a.boundary_size(),
                        weight: render_rational(&crate::animal_enum::Cluster::weight(&a, p)),
                        vertices: a.vertices,
                        edges: None,
                    })
                    .collect::<Vec<_>>(),
            )?,
            Mode::Bond => serde_json::to_value(
                crate::animal_enum::enumerate_bond_animals(g, cfg.max_animal)?
                    .into_iter()
                    .map(|a| ListedAnimal {
                        open: a.edge_count(),
                        closed: a.boundary_size(),
                        weight: render_rational(&crate::animal_enum::Cluster::weight(&a, p)),
                        vertices: a.vertices,
                        edges: Some(a.edges),
                    })
                    .collect::<Vec<_>>(),
            )?,
        })
    } else {
        None
    };
    Ok(AnimalsFile {
        config: cfg.stamp(),
        mode: cfg.mode,
        max_size: cfg.max_animal,
        animal_count: count,
        finite_mass: render_rational(&total),
        histogram,
        animals,
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AlgebraFile<'a> {
    config: ConfigStamp,
    #[serde(flatten)]
    report: &'a AlgebraReport,
}

/// Runs the algebra suite on animals up to `max_animal` and writes
/// `algebra.json`.
pub fn cmd_algebra_checks(cfg: &RunConfig) -> Result<Outcome> {
    let q = cfg.lamp_order()?;
    let lamp = LampGroup::cyclic(q)?;
    let report = with_oracle!(make_group(&cfg.group)?, g => {
        let alg = WreathAlgebra::new(g, lamp, cfg.mode);
        algebra_checks(&alg, cfg.max_animal, cfg.arith == Arithmetic::Rational)?
    });
    prepare(&cfg.out)?;
    let path = cfg.out.join("algebra.json");
    let mut stamp = cfg.stamp();
    stamp.lamp = Some(q);
    write_json(&path, &AlgebraFile { config: stamp, report: &report })?;
    let mut summary: Vec<String> = report
        .checks
        .iter()
        .map(|c| {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            if c.exact {
                format!("{verdict} {} over {} cases: {} failures (exact)", c.name, c.cases, c.failures)
            } else {
                format!("{verdict} {} over {} cases: max residual {:e} (tolerance {:e})", c.name, c.cases, c.max_residual, c.tolerance)
            }
        })
        .collect();
    summary.extend(report.torsion_obstructions.iter().map(|t| format!("torsion obstruction: {t}")));
    summary.extend(report.notes.iter().cloned());
    Ok(Outcome { passed: report.pass, files: vec![path], summary })
}

/// `x` as `f64` for summaries.
pub fn approx(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
