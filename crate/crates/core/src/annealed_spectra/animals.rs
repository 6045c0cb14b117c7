//! Annealed return probabilities and the annealed spectral measure from
//! enumerated animals.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::walks::{add, big, KilledWalk, StepWeights};
use crate::animal_enum::{check_probability, enumerate_bond_animals, enumerate_site_animals, CellSpace, Cluster, Mode};
use crate::cluster_spectrum::{build_pa, eigensolve, rooted_spectral_measure, Atom, SpectralMeasure};
use crate::error::Result;
use crate::group_core::{Group, GroupOracle};
use crate::scalar::{power_table, serialize_rational, Rational};

/// An annealed moment known up to the mass of the animals left out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundedMoment {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    /// `|E_p[p_ω^{(n)}(e,e)] - value| <= tail_bound`.
    #[serde(serialize_with = "serialize_rational")]
    pub tail_bound: Rational,
}

/// Per `(open, closed)` class: number of animals and summed return counts.
#[derive(Default)]
struct ClassSums(BTreeMap<(usize, usize), (u128, Vec<u128>)>);

impl ClassSums {
    fn push(&mut self, open: usize, closed: usize, counts: &[u128]) -> Result<()> {
        let entry = self.0.entry((open, closed)).or_insert_with(|| (0, vec![0; counts.len()]));
        entry.0 = add(entry.0, 1)?;
        for (acc, &c) in entry.1.iter_mut().zip(counts) {
            *acc = add(*acc, c)?;
        }
        Ok(())
    }

    /// Moments `0..=n_max`. Every cluster returns at time `0`, so that
    /// entry is `1` with no tail.
    fn evaluate(&self, p: &Rational, weights: &StepWeights, n_max: usize) -> Vec<BoundedMoment> {
        let q = Rational::one() - p;
        let widest_open = self.0.keys().map(|k| k.0).max().unwrap_or(0);
        let widest_closed = self.0.keys().map(|k| k.1).max().unwrap_or(0);
        let (ps, qs) = (power_table(p, widest_open), power_table(&q, widest_closed));
        let scales = weights.scales(n_max);
        let mut mass = Rational::zero();
        let mut values = vec![Rational::zero(); n_max + 1];
        for (&(o, c), (count, sums)) in &self.0 {
            let w = &ps[o] * &qs[c];
            mass += big(*count) * &w;
            for (v, &s) in values.iter_mut().zip(sums).skip(1) {
                if s != 0 {
                    *v += big(s) * &w;
                }
            }
        }
        let tail = Rational::one() - mass;
        values
            .into_iter()
            .enumerate()
            .map(|(n, v)| {
                if n == 0 {
                    BoundedMoment { value: Rational::one(), tail_bound: Rational::zero() }
                } else {
                    BoundedMoment { value: v / &scales[n], tail_bound: tail.clone() }
                }
            })
            .collect()
    }
}

fn sum_over_space<E: Clone + Ord + std::hash::Hash>(
    space: &CellSpace<E>,
    weights: &StepWeights,
    n_max: usize,
) -> Result<ClassSums> {
    let mut sums = ClassSums::default();
    if space.mode() == Mode::Site {
        // the closed root: a (0, 1) class that never returns after time 0
        let counts: Vec<u128> = (0..=n_max).map(|n| u128::from(n == 0)).collect();
        sums.push(0, 1, &counts)?;
    }
    let mut walk = KilledWalk::new(space, weights);
    let mut failure = None;
    space.for_each(|cells| {
        if failure.is_some() {
            return;
        }
        let pushed = walk
            .return_counts(cells.cells, n_max)
            .and_then(|counts| sums.push(cells.open, cells.closed, &counts));
        if let Err(e) = pushed {
            failure = Some(e);
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(sums),
    }
}

/// `Σ_A Prob_p[C(e) = A] · p_A^{(n)}(e, e)` over animals with at most
/// `max_size` open cells (vertices for site, edges for bond), with
/// `tail_bound = 1 - Σ_A Prob_p[C(e) = A]`.
pub fn annealed_moments_by_animals<G: Group>(
    oracle: &GroupOracle<G>,
    n_max: usize,
    p: &Rational,
    max_size: usize,
    mode: Mode,
) -> Result<Vec<BoundedMoment>> {
    check_probability(p)?;
    let weights = StepWeights::new(oracle)?;
    let space = match mode {
        Mode::Site => CellSpace::site(oracle, max_size)?,
        Mode::Bond => CellSpace::bond(oracle, max_size)?,
    };
    Ok(sum_over_space(&space, &weights, n_max)?.evaluate(p, &weights, n_max))
}

/// Number of cells [`annealed_moments_clipped`] enumerates subsets of.
pub fn clipped_cell_count<G: Group>(oracle: &GroupOracle<G>, n_max: usize, mode: Mode) -> Result<usize> {
    Ok(CellSpace::clipped(oracle, n_max / 2, mode)?.cell_count())
}

/// Exact annealed moments. A walk returning within `n_max` steps stays in
/// the ball of radius `⌊n_max / 2⌋`, so `p_C^{(n)}(e, e)` depends only on
/// the component of `e` in the open part of that ball; summing over those
/// components with their exact probabilities leaves no tail.
pub fn annealed_moments_clipped<G: Group>(
    oracle: &GroupOracle<G>,
    n_max: usize,
    p: &Rational,
    mode: Mode,
) -> Result<Vec<BoundedMoment>> {
    check_probability(p)?;
    let weights = StepWeights::new(oracle)?;
    let space = CellSpace::clipped(oracle, n_max / 2, mode)?;
    Ok(sum_over_space(&space, &weights, n_max)?.evaluate(p, &weights, n_max))
}

/// `E_p[ν_ω]` restricted to enumerated animals.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnealedMeasure {
    #[serde(serialize_with = "serialize_rational")]
    pub p: Rational,
    pub mode: Mode,
    pub max_size: usize,
    pub animals: usize,
    pub measure: SpectralMeasure,
    /// `Σ Prob_p[C(e) = A]` over the enumerated animals.
    #[serde(serialize_with = "serialize_rational")]
    pub enumerated_mass: Rational,
    /// `1 - enumerated_mass`: finite clusters beyond `max_size` and the
    /// infinite cluster.
    #[serde(serialize_with = "serialize_rational")]
    pub unaccounted_mass: Rational,
}

impl AnnealedMeasure {
    pub fn atom_mass(&self) -> f64 {
        self.measure.total_mass()
    }

    pub fn unaccounted_f64(&self) -> f64 {
        self.unaccounted_mass.to_f64().unwrap_or(f64::NAN)
    }
}

/// `Σ_A Prob_p[C(e) = A] · ν_A` over animals up to `max_size`; the empty
/// site animal contributes `δ_0`. At `p = 1/|H|` this is the lamplighter
/// Plancherel measure up to `unaccounted_mass`.
pub fn annealed_spectral_measure<G: Group>(
    oracle: &GroupOracle<G>,
    p: &Rational,
    max_size: usize,
    mode: Mode,
) -> Result<AnnealedMeasure> {
    check_probability(p)?;
    let weighted: Vec<(Rational, Vec<Atom>)> = match mode {
        Mode::Site => weigh(oracle, &enumerate_site_animals(oracle, max_size)?, p)?,
        Mode::Bond => weigh(oracle, &enumerate_bond_animals(oracle, max_size)?, p)?,
    };
    let animals = weighted.len();
    let enumerated_mass: Rational = weighted.iter().map(|(w, _)| w).sum();
    let measure = SpectralMeasure::from_atoms(weighted.into_iter().flat_map(|(_, atoms)| atoms).collect());
    Ok(AnnealedMeasure {
        p: p.clone(),
        mode,
        max_size,
        animals,
        measure,
        unaccounted_mass: Rational::one() - &enumerated_mass,
        enumerated_mass,
    })
}

fn weigh<G: Group, C: Cluster<G::Elem> + Sync>(
    oracle: &GroupOracle<G>,
    animals: &[C],
    p: &Rational,
) -> Result<Vec<(Rational, Vec<Atom>)>> {
    animals
        .par_iter()
        .map(|a| {
            let w = a.weight(p);
            let wf = w.to_f64().unwrap_or(f64::NAN);
            let pa = build_pa(a, oracle);
            let nu = match pa.root {
                Some(_) => rooted_spectral_measure(&eigensolve(&pa)?, pa.root),
                None => SpectralMeasure { atoms: vec![Atom { value: 0.0, mass: 1.0 }] },
            };
            let atoms = nu.atoms.into_iter().map(|at| Atom { value: at.value, mass: at.mass * wf }).collect();
            Ok((w, atoms))
        })
        .collect()
}
