//! Monte Carlo estimate of the annealed return probabilities.

use rayon::prelude::*;
use serde::Serialize;

use super::walks::{KilledWalk, StepWeights};
use crate::animal_enum::{CellSpace, Mode, Percolation};
use crate::error::{Error, Result};
use crate::group_core::{mix64, Edge, Group, GroupOracle};

/// Samples per independent seed block.
pub const MC_BLOCK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McMoment {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub stderr: f64,
    pub samples: u64,
}

/// Seed of the `i`-th percolation configuration of a run.
pub fn sample_seed(seed: u64, i: u64) -> u64 {
    mix64(seed ^ mix64(i))
}

/// Mean of `p_ω^{(n)}(e, e)` over `samples` independent configurations.
///
/// Only the component of `e` in the open part of the ball of radius
/// `⌊n_max / 2⌋` is explored: it determines every return probability up to
/// time `n_max`, so there is no truncation bias. Blocks of [`MC_BLOCK`]
/// samples run in parallel and are merged in block order, so the result
/// does not depend on the thread count.
pub fn annealed_moments_mc<G: Group>(
    oracle: &GroupOracle<G>,
    n_max: usize,
    p: f64,
    samples: u64,
    seed: u64,
    mode: Mode,
) -> Result<Vec<McMoment>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p.to_string()));
    }
    if samples < 2 {
        return Err(Error::Config(format!("need at least 2 Monte Carlo samples, got {samples}")));
    }
    let weights = StepWeights::new(oracle)?;
    let space = CellSpace::clipped(oracle, n_max / 2, mode)?;
    let scale: Vec<f64> = (0..=n_max).map(|n| (weights.denominator as f64).powi(n as i32)).collect();
    let blocks = samples.div_ceil(MC_BLOCK);
    let partial: Vec<(Vec<f64>, Vec<f64>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut walk = KilledWalk::new(&space, &weights);
            let mut explorer = Explorer::new(&space);
            let mut sum = vec![0.0; n_max + 1];
            let mut sq = vec![0.0; n_max + 1];
            for i in b * MC_BLOCK..((b + 1) * MC_BLOCK).min(samples) {
                let omega = Percolation::new(p, sample_seed(seed, i));
                let counts = match explorer.explore(&omega) {
                    Some(cells) => walk.return_counts(cells, n_max)?,
                    None => (0..=n_max).map(|n| u128::from(n == 0)).collect(),
                };
                for n in 0..=n_max {
                    let x = counts[n] as f64 / scale[n];
                    sum[n] += x;
                    sq[n] += x * x;
                }
            }
            Ok((sum, sq))
        })
        .collect::<Result<_>>()?;
    let mut sum = vec![0.0; n_max + 1];
    let mut sq = vec![0.0; n_max + 1];
    for (s, q) in &partial {
        for n in 0..=n_max {
            sum[n] += s[n];
            sq[n] += q[n];
        }
    }
    let k = samples as f64;
    Ok((0..=n_max)
        .map(|n| {
            let mean = sum[n] / k;
            let var = ((sq[n] - sum[n] * mean) / (k - 1.0)).max(0.0);
            McMoment { mean, stderr: (var / k).sqrt(), samples }
        })
        .collect())
}

/// Breadth-first search of the open component of `e` inside a ball.
struct Explorer<'a, E> {
    space: &'a CellSpace<E>,
    seen: Vec<bool>,
    cells: Vec<u32>,
    queue: Vec<usize>,
}

impl<'a, E: Clone + Ord + std::hash::Hash + crate::group_core::StableKey> Explorer<'a, E> {
    fn new(space: &'a CellSpace<E>) -> Self {
        let n = match space.mode() {
            Mode::Site => space.ball().len(),
            Mode::Bond => space.ball().len() + space.cell_count(),
        };
        Explorer { space, seen: vec![false; n], cells: Vec::new(), queue: Vec::new() }
    }

    /// Cells of the component, `None` when `e` is closed.
    fn explore(&mut self, omega: &Percolation) -> Option<&[u32]> {
        let ball = self.space.ball();
        self.seen.iter_mut().for_each(|s| *s = false);
        self.cells.clear();
        self.queue.clear();
        let site = self.space.mode() == Mode::Site;
        if site && !omega.site_open(ball.vertex(0)) {
            return None;
        }
        self.seen[0] = true;
        if site {
            self.cells.push(0);
        }
        self.queue.push(0);
        let vertex_slots = ball.len();
        while let Some(v) = self.queue.pop() {
            for (k, step) in ball.steps(v).iter().enumerate() {
                if site {
                    if !self.seen[step.to] {
                        self.seen[step.to] = true;
                        if omega.site_open(ball.vertex(step.to)) {
                            self.cells.push(step.to as u32);
                            self.queue.push(step.to);
                        }
                    }
                    continue;
                }
                let Some(c) = self.space.step_edge(v, k) else { continue };
                let slot = vertex_slots + c as usize;
                if self.seen[slot] {
                    continue;
                }
                self.seen[slot] = true;
                let edge = Edge::new(ball.vertex(v).clone(), ball.vertex(step.to).clone());
                if omega.edge_open(&edge) {
                    self.cells.push(c);
                    if !self.seen[step.to] {
                        self.seen[step.to] = true;
                        self.queue.push(step.to);
                    }
                }
            }
        }
        Some(&self.cells)
    }
}
