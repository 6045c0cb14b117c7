//! Exact path counting with integer step weights.
//!
//! Every step weight is written as `a_s / D` over a common denominator, so a
//! walk of `n` steps carries the integer weight `∏ a_s` and the probability
//! is recovered by dividing by `D^n` once at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::animal_enum::{CellSpace, Mode};
use crate::error::{Error, Result};
use crate::group_core::{Group, GroupOracle};
use crate::scalar::{power_table, Rational};

const NONE: u32 = u32::MAX;

/// Step weights `μ(s) = numerators[k] / denominator`, indexed like
/// [`GroupOracle::generators`].
#[derive(Clone, Debug)]
pub struct StepWeights {
    pub numerators: Vec<u128>,
    pub denominator: u128,
}

impl StepWeights {
    pub fn new<G: Group>(oracle: &GroupOracle<G>) -> Result<Self> {
        let den = oracle
            .generators()
            .iter()
            .fold(BigInt::one(), |acc, g| acc.lcm(g.weight.denom()));
        let numerators = oracle
            .generators()
            .iter()
            .map(|g| (g.weight.numer() * (&den / g.weight.denom())).to_u128())
            .collect::<Option<Vec<u128>>>()
            .ok_or_else(overflow)?;
        let denominator = den.to_u128().ok_or_else(overflow)?;
        Ok(StepWeights { numerators, denominator })
    }

    /// `[1, D, D^2, ..., D^n_max]` as exact rationals.
    pub fn scales(&self, n_max: usize) -> Vec<Rational> {
        power_table(&Rational::from_integer(BigInt::from(self.denominator)), n_max)
    }
}

pub(crate) fn overflow() -> Error {
    Error::cap("integer path weight", u128::MAX as usize)
}

pub(crate) fn add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b).ok_or_else(overflow)
}

pub(crate) fn big(x: u128) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Return counts of the walk killed outside a set of cells of a
/// [`CellSpace`], reusing scratch buffers across calls.
pub struct KilledWalk<'a, E> {
    space: &'a CellSpace<E>,
    weights: &'a StepWeights,
    local: Vec<u32>,
    edge_open: Vec<bool>,
    vertices: Vec<u32>,
}

impl<'a, E: Clone + Ord + std::hash::Hash> KilledWalk<'a, E> {
    pub fn new(space: &'a CellSpace<E>, weights: &'a StepWeights) -> Self {
        let edges = if space.mode() == Mode::Bond { space.cell_count() } else { 0 };
        KilledWalk {
            space,
            weights,
            local: vec![NONE; space.ball().len()],
            edge_open: vec![false; edges],
            vertices: Vec::new(),
        }
    }

    /// `c(n) = D^n · p_A^{(n)}(e, e)` for `n = 0..=n_max`, where `A` is
    /// given by ball vertex indices (site) or edge cells (bond). A site cell
    /// list must contain the root `0`.
    pub fn return_counts(&mut self, cells: &[u32], n_max: usize) -> Result<Vec<u128>> {
        let ball = self.space.ball();
        self.vertices.clear();
        match self.space.mode() {
            Mode::Site => self.vertices.extend_from_slice(cells),
            Mode::Bond => {
                self.vertices.push(0);
                for &c in cells {
                    self.edge_open[c as usize] = true;
                    let (a, b) = self.space.edge_endpoints(c);
                    self.vertices.extend([a, b]);
                }
            }
        }
        let mut count = 0u32;
        for i in 0..self.vertices.len() {
            let v = self.vertices[i] as usize;
            if self.local[v] == NONE {
                self.local[v] = count;
                self.vertices[count as usize] = v as u32;
                count += 1;
            }
        }
        self.vertices.truncate(count as usize);
        let bond = self.space.mode() == Mode::Bond;
        let mut arcs: Vec<Vec<(u32, u128)>> = vec![Vec::new(); self.vertices.len()];
        for (i, &v) in self.vertices.iter().enumerate() {
            for (k, step) in ball.steps(v as usize).iter().enumerate() {
                let j = self.local[step.to];
                if j == NONE {
                    continue;
                }
                if bond && !self.space.step_edge(v as usize, k).is_some_and(|c| self.edge_open[c as usize]) {
                    continue;
                }
                arcs[i].push((j, self.weights.numerators[step.generator]));
            }
        }
        let root = self.local[0];
        let out = if root == NONE {
            (0..=n_max).map(|n| u128::from(n == 0)).collect()
        } else {
            iterate(&arcs, root as usize, n_max)?
        };
        for &v in &self.vertices {
            self.local[v as usize] = NONE;
        }
        if bond {
            for &c in cells {
                self.edge_open[c as usize] = false;
            }
        }
        Ok(out)
    }
}

fn iterate(arcs: &[Vec<(u32, u128)>], root: usize, n_max: usize) -> Result<Vec<u128>> {
    let mut cur = vec![0u128; arcs.len()];
    let mut next = vec![0u128; arcs.len()];
    cur[root] = 1;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        out.push(cur[root]);
        if n == n_max {
            break;
        }
        next.iter_mut().for_each(|x| *x = 0);
        for (i, row) in arcs.iter().enumerate() {
            if cur[i] == 0 {
                continue;
            }
            for &(j, w) in row {
                let step = cur[i].checked_mul(w).ok_or_else(overflow)?;
                next[j as usize] = add(next[j as usize], step)?;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(out)
}

/// Largest `|S|^N` for which paths are enumerated one by one.
pub const PATH_ENUMERATION_CAP: u128 = 300_000;

/// Largest `N` for path enumeration regardless of `|S|`.
pub const PATH_LENGTH_CAP: usize = 14;

/// The largest `N` for which [`range_path_sum`] runs on this generator set.
pub fn path_length_limit<G: Group>(oracle: &GroupOracle<G>) -> usize {
    let s = oracle.generators().len() as u128;
    let mut n = 0;
    while n < PATH_LENGTH_CAP && s.pow(n as u32 + 1) <= PATH_ENUMERATION_CAP {
        n += 1;
    }
    n
}

/// `E[p^{R_n} 1{Z_n = e}]` for `n = 0..=n_max`, where `R_n` is the number
/// of distinct vertices visited by `Z_0, ..., Z_n` (site) or of distinct
/// edges crossed (bond). The value at `n = 0` is `1`.
pub fn range_path_sum<G: Group>(oracle: &GroupOracle<G>, n_max: usize, p: &Rational, mode: Mode) -> Result<Vec<Rational>> {
    let limit = path_length_limit(oracle);
    if n_max > limit {
        return Err(Error::cap("path enumeration length", limit));
    }
    let weights = StepWeights::new(oracle)?;
    // a returning path never leaves the ball of radius n_max / 2
    let space = CellSpace::clipped(oracle, n_max / 2, mode)?;
    let ball = space.ball();
    let cells = match mode {
        Mode::Site => ball.len(),
        Mode::Bond => space.cell_count(),
    };
    let mut dfs = PathDfs {
        space: &space,
        weights: &weights,
        n_max,
        visits: vec![0; cells],
        range: 0,
        counts: vec![vec![0u128; n_max + 2]; n_max + 1],
    };
    if mode == Mode::Site {
        dfs.visits[0] = 1;
        dfs.range = 1;
    }
    dfs.walk(0, 0, 1)?;

    let powers = power_table(p, n_max + 1);
    let scales = weights.scales(n_max);
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, row) in dfs.counts.iter().enumerate() {
        if n == 0 {
            out.push(Rational::one());
            continue;
        }
        let mut total = Rational::zero();
        for (r, &c) in row.iter().enumerate() {
            if c != 0 {
                total += big(c) * &powers[r];
            }
        }
        out.push(total / &scales[n]);
    }
    Ok(out)
}

struct PathDfs<'a, E> {
    space: &'a CellSpace<E>,
    weights: &'a StepWeights,
    n_max: usize,
    visits: Vec<u32>,
    range: usize,
    /// `counts[n][r]`: total integer weight of returning `n`-step paths of
    /// range `r`.
    counts: Vec<Vec<u128>>,
}

impl<E: Clone + Ord + std::hash::Hash> PathDfs<'_, E> {
    fn walk(&mut self, at: usize, depth: usize, weight: u128) -> Result<()> {
        if at == 0 {
            let slot = &mut self.counts[depth][self.range];
            *slot = add(*slot, weight)?;
        }
        if depth == self.n_max {
            return Ok(());
        }
        let ball = self.space.ball();
        for (k, step) in ball.steps(at).iter().enumerate() {
            if ball.distance(step.to) > self.n_max - depth - 1 {
                continue;
            }
            let cell = match self.space.mode() {
                Mode::Site => step.to,
                Mode::Bond => self.space.step_edge(at, k).expect("in-ball step has an edge cell") as usize,
            };
            let w = weight.checked_mul(self.weights.numerators[step.generator]).ok_or_else(overflow)?;
            self.visits[cell] += 1;
            if self.visits[cell] == 1 {
                self.range += 1;
            }
            self.walk(step.to, depth + 1, w)?;
            if self.visits[cell] == 1 {
                self.range -= 1;
            }
            self.visits[cell] -= 1;
        }
        Ok(())
    }
}
