//! Lamplighter return probabilities and annealed cluster return
//! probabilities, each computed by independent routes, and the report that
//! compares them.
//!
//! At `p = 1/|H|` the `n`-step return probability of the switch-walk-switch
//! walk on `H ≀ G` equals the annealed return probability of the walk on the
//! percolation cluster of `e_G`. The routes are:
//!
//! - [`Oracle::WreathConvolution`]: powers of `μ̃` in the wreath algebra.
//! - [`Oracle::RangePathSum`]: `E[p^{range} 1{Z_n = e}]` over explicit paths.
//! - [`Oracle::AnimalSum`]: animals up to a size, with a tail bound.
//! - [`Oracle::ClippedAnimalSum`]: all open components inside the ball the
//!   walk can reach, exact.
//! - [`Oracle::MonteCarlo`]: sampled percolation configurations.

mod animals;
mod mc;
mod walks;

use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

pub use animals::{
    annealed_moments_by_animals, annealed_moments_clipped, annealed_spectral_measure, clipped_cell_count,
    AnnealedMeasure, BoundedMoment,
};
pub use mc::{annealed_moments_mc, sample_seed, McMoment, MC_BLOCK};
pub use walks::{path_length_limit, range_path_sum, KilledWalk, StepWeights, PATH_ENUMERATION_CAP, PATH_LENGTH_CAP};

use crate::error::Result;
use crate::group_core::Group;
use crate::scalar::Scalar;
use crate::wreath_algebra::{WreathAlgebra, WreathMeasure};

/// `μ̃^{(n)}(𝟙, e)` for `n = 0..=n_max`.
///
/// Only `μ̃^{(k)}` for `k <= ⌈n_max/2⌉` is formed; since `μ̃` is symmetric,
/// `μ̃^{(a+b)}(𝟙, e) = Σ_w μ̃^{(a)}(w) μ̃^{(b)}(w)`. Fails when a power has
/// more than `atom_cap` atoms.
pub fn lamplighter_moments<S: Scalar, G: Group>(
    alg: &WreathAlgebra<G>,
    n_max: usize,
    atom_cap: usize,
) -> Result<Vec<S>> {
    let step = alg.mu_tilde::<S>()?;
    let half = n_max.div_ceil(2);
    let mut powers: Vec<WreathMeasure<S, G::Elem>> = vec![alg.delta(alg.identity_point())];
    for _ in 0..half {
        let next = alg.convolve_capped(powers.last().expect("nonempty"), &step, atom_cap)?;
        powers.push(next);
    }
    Ok((0..=n_max)
        .map(|n| {
            let (a, b) = (&powers[n.div_ceil(2)], &powers[n / 2]);
            let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
            let mut acc = S::zero();
            for (w, x) in small.iter() {
                acc.mul_add_assign(x, &large.get(w));
            }
            acc
        })
        .collect())
}

/// Default cap on the support of `μ̃^{(k)}`.
pub const DEFAULT_ATOM_CAP: usize = 1_000_000;

/// Default limit on clipped cells; `2^cells` bounds the enumeration.
pub const DEFAULT_CLIPPED_CELL_LIMIT: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Oracle {
    WreathConvolution,
    RangePathSum,
    AnimalSum,
    ClippedAnimalSum,
    MonteCarlo,
}

impl Oracle {
    pub const ALL: [Oracle; 5] = [
        Oracle::WreathConvolution,
        Oracle::RangePathSum,
        Oracle::AnimalSum,
        Oracle::ClippedAnimalSum,
        Oracle::MonteCarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Oracle::WreathConvolution => "wreathConvolution",
            Oracle::RangePathSum => "rangePathSum",
            Oracle::AnimalSum => "animalSum",
            Oracle::ClippedAnimalSum => "clippedAnimalSum",
            Oracle::MonteCarlo => "monteCarlo",
        }
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One `(n, oracle)` entry. `value` and `error` are in canonical text form
/// (`num/den` or 17 significant digits); `error` is `0` for exact oracles,
/// the tail bound for animal sums and the standard error for Monte Carlo.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: usize,
    pub oracle: Oracle,
    pub value: String,
    pub error: String,
    #[serde(skip)]
    pub value_f64: f64,
    #[serde(skip)]
    pub error_f64: f64,
}

/// All oracle values, ordered by `n` and then by oracle.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MomentTable {
    pub rows: Vec<MomentRow>,
}

impl MomentTable {
    pub fn get(&self, n: usize, oracle: Oracle) -> Option<&MomentRow> {
        self.rows.iter().find(|r| r.n == n && r.oracle == oracle)
    }

    fn push<S: Scalar>(&mut self, n: usize, oracle: Oracle, value: &S, error: &S) {
        self.rows.push(MomentRow {
            n,
            oracle,
            value: value.render(),
            error: error.render(),
            value_f64: value.re_f64(),
            error_f64: error.re_f64(),
        });
    }

    fn sort(&mut self) {
        self.rows.sort_by(|a, b| a.n.cmp(&b.n).then(a.oracle.cmp(&b.oracle)));
    }
}

/// One comparison in the identity report.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub n: usize,
    /// For example `wreathConvolution=rangePathSum` or `evenMonotone`.
    pub name: String,
    pub difference: f64,
    pub tolerance: f64,
    /// Whether the comparison is an exact equality.
    pub exact: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skipped {
    pub oracle: Oracle,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct VerifySettings {
    pub n_max: usize,
    /// Size cutoff of [`Oracle::AnimalSum`]; `0` skips it.
    pub max_animal: usize,
    /// `0` skips [`Oracle::MonteCarlo`].
    pub mc_samples: u64,
    pub seed: u64,
    pub atom_cap: usize,
    pub clipped_cell_limit: usize,
    /// Tolerance for equalities when arithmetic is inexact.
    pub float_tolerance: f64,
    /// Monte Carlo acceptance in standard errors.
    pub sigmas: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            n_max: 10,
            max_animal: 8,
            mc_samples: 10_000,
            seed: 1,
            atom_cap: DEFAULT_ATOM_CAP,
            clipped_cell_limit: DEFAULT_CLIPPED_CELL_LIMIT,
            float_tolerance: 1e-12,
            sigmas: 4.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub group: String,
    pub lamp: String,
    pub mode: crate::animal_enum::Mode,
    /// `1/|H|` as `num/den`.
    pub p: String,
    pub n_max: usize,
    pub exact: bool,
    #[serde(skip)]
    pub table: MomentTable,
    pub checks: Vec<Check>,
    pub skipped: Vec<Skipped>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Runs every applicable oracle at `p = 1/|H|` and compares each with the
/// wreath convolution: exact equality (or `float_tolerance`) for the path
/// and clipped sums, `tail_bound` for the animal sum, `sigmas` standard
/// errors for Monte Carlo. Even moments must also be nonincreasing.
///
/// Path sums beyond [`path_length_limit`] and clipped sums over more than
/// `clipped_cell_limit` cells are skipped and listed in the report; other
/// resource limits are errors.
pub fn verify_identity<S: Scalar, G: Group>(alg: &WreathAlgebra<G>, settings: &VerifySettings) -> Result<VerifyReport> {
    let oracle = &alg.oracle;
    let mode = alg.mode;
    let n_max = settings.n_max;
    let p = alg.lamp.p();
    let mut skipped = Vec::new();

    let run_paths = n_max <= path_length_limit(oracle);
    if !run_paths {
        skipped.push(Skipped {
            oracle: Oracle::RangePathSum,
            reason: format!("N = {n_max} exceeds the path enumeration limit {}", path_length_limit(oracle)),
        });
    }
    let cells = clipped_cell_count(oracle, n_max, mode)?;
    let run_clipped = cells <= settings.clipped_cell_limit;
    if !run_clipped {
        skipped.push(Skipped {
            oracle: Oracle::ClippedAnimalSum,
            reason: format!("{cells} cells exceed the clipped enumeration limit {}", settings.clipped_cell_limit),
        });
    }
    if settings.max_animal == 0 {
        skipped.push(Skipped { oracle: Oracle::AnimalSum, reason: "max animal size is 0".into() });
    }
    if settings.mc_samples == 0 {
        skipped.push(Skipped { oracle: Oracle::MonteCarlo, reason: "no samples requested".into() });
    }

    let p_f64 = p.to_f64().unwrap_or(f64::NAN);
    let ((wreath, paths), (animals, (clipped, mc))) = rayon::join(
        || {
            rayon::join(
                || lamplighter_moments::<S, G>(alg, n_max, settings.atom_cap),
                || run_paths.then(|| range_path_sum(oracle, n_max, &p, mode)).transpose(),
            )
        },
        || {
            rayon::join(
                || {
                    (settings.max_animal > 0)
                        .then(|| annealed_moments_by_animals(oracle, n_max, &p, settings.max_animal, mode))
                        .transpose()
                },
                || {
                    rayon::join(
                        || run_clipped.then(|| annealed_moments_clipped(oracle, n_max, &p, mode)).transpose(),
                        || {
                            (settings.mc_samples > 0)
                                .then(|| annealed_moments_mc(oracle, n_max, p_f64, settings.mc_samples, settings.seed, mode))
                                .transpose()
                        },
                    )
                },
            )
        },
    );
    let (wreath, paths, animals, clipped, mc) = (wreath?, paths?, animals?, clipped?, mc?);

    let mut table = MomentTable::default();
    let mut checks = Vec::new();
    let float_tol = if S::EXACT { 0.0 } else { settings.float_tolerance };
    let exact_check = |n: usize, name: String, a: &S, b: &S| {
        let difference = (a.clone() - b.clone()).abs_f64();
        let pass = if S::EXACT { a == b } else { difference <= float_tol };
        Check { n, name, difference, tolerance: float_tol, exact: S::EXACT, pass }
    };
    for n in 0..=n_max {
        let w = &wreath[n];
        table.push(n, Oracle::WreathConvolution, w, &S::zero());
        if let Some(paths) = &paths {
            let v = S::from_rational(&paths[n]);
            table.push(n, Oracle::RangePathSum, &v, &S::zero());
            checks.push(exact_check(n, pair(Oracle::RangePathSum), w, &v));
        }
        if let Some(clipped) = &clipped {
            let v = S::from_rational(&clipped[n].value);
            table.push(n, Oracle::ClippedAnimalSum, &v, &S::from_rational(&clipped[n].tail_bound));
            checks.push(exact_check(n, pair(Oracle::ClippedAnimalSum), w, &v));
        }
        if let Some(animals) = &animals {
            let m = &animals[n];
            let (v, tail) = (S::from_rational(&m.value), S::from_rational(&m.tail_bound));
            table.push(n, Oracle::AnimalSum, &v, &tail);
            let difference = (w.clone() - v.clone()).abs_f64();
            let pass = match (S::EXACT, w.to_rational()) {
                (true, Some(wr)) => (wr - &m.value).abs() <= m.tail_bound,
                _ => difference <= tail.re_f64() + float_tol,
            };
            checks.push(Check {
                n,
                name: pair(Oracle::AnimalSum),
                difference,
                tolerance: tail.re_f64(),
                exact: false,
                pass,
            });
        }
        if let Some(mc) = &mc {
            let m = &mc[n];
            table.push(n, Oracle::MonteCarlo, &m.mean, &m.stderr);
            let difference = (w.re_f64() - m.mean).abs();
            let tolerance = if m.stderr > 0.0 { settings.sigmas * m.stderr } else { settings.float_tolerance };
            checks.push(Check {
                n,
                name: pair(Oracle::MonteCarlo),
                difference,
                tolerance,
                exact: false,
                pass: difference <= tolerance,
            });
        }
        if n >= 2 && n % 2 == 0 {
            let (prev, cur) = (&wreath[n - 2], w);
            let difference = (cur.re_f64() - prev.re_f64()).max(0.0);
            checks.push(Check {
                n,
                name: "evenMonotone".into(),
                difference,
                tolerance: float_tol,
                exact: S::EXACT,
                pass: cur.re_f64() <= prev.re_f64() + float_tol && cur.re_f64() >= -float_tol,
            });
        }
    }
    table.sort();
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        group: oracle.name().to_string(),
        lamp: alg.lamp.name().to_string(),
        mode,
        p: crate::scalar::render_rational(&p),
        n_max,
        exact: S::EXACT,
        table,
        checks,
        skipped,
        pass,
    })
}

fn pair(other: Oracle) -> String {
    format!("{}={}", Oracle::WreathConvolution, other)
}
