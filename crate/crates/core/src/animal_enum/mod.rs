//! Site and bond animals, their percolation weights, exhaustive enumeration
//! and a reproducible cluster sampler.
//!
//! A site animal is a finite connected vertex set `A ∋ e_G` (or the empty
//! set) with outer vertex boundary `dA`; a bond animal is a finite connected
//! edge set whose vertex set contains `e_G`, with edge boundary `∂A`. For
//! Bernoulli(`p`) percolation the cluster of `e_G` equals `A` with
//! probability `p^{|A|} (1-p)^{|dA|}` (resp. `p^{|E(A)|} (1-p)^{|∂A|}`).

mod cells;
mod sampler;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use cells::{AnimalCells, CellSpace};
pub use sampler::{sample_cluster, ClusterSample, Percolation};

use crate::error::{Error, Result};
use crate::group_core::{Edge, Group, GroupOracle};
use crate::scalar::{powi, Rational};

/// Site or bond percolation (vertex lamps or edge lamps).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Site,
    Bond,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "site" => Ok(Mode::Site),
            "bond" => Ok(Mode::Bond),
            other => Err(Error::Config(format!("mode must be `site` or `bond`, got `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Site => "site",
            Mode::Bond => "bond",
        })
    }
}

pub fn check_probability(p: &Rational) -> Result<()> {
    if p.is_positive() && *p < Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p.to_string()))
    }
}

/// Common view of site and bond animals.
pub trait Cluster<E> {
    /// Sorted vertex set; empty only for the empty site animal.
    fn vertices(&self) -> &[E];

    /// Whether the killed walk may step from `x` to `y` (where `y = x s`).
    fn allows_step(&self, x: &E, y: &E) -> bool;

    /// `|A|` for site animals, `|E(A)|` for bond animals.
    fn open_count(&self) -> usize;

    /// `|dA|` for site animals, `|∂A|` for bond animals.
    fn closed_count(&self) -> usize;

    fn weight(&self, p: &Rational) -> Rational {
        powi(p, self.open_count()) * powi(&(Rational::one() - p), self.closed_count())
    }

    fn weight_f64(&self, p: f64) -> f64 {
        p.powi(self.open_count() as i32) * (1.0 - p).powi(self.closed_count() as i32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Animal<E> {
    pub vertices: Vec<E>,
    pub boundary: Vec<E>,
}

impl<E: Clone + Ord> Animal<E> {
    /// The empty animal, whose boundary is `{e_G}` by convention.
    pub fn empty(identity: E) -> Self {
        Animal { vertices: Vec::new(), boundary: vec![identity] }
    }

    /// Builds the animal on `vertices` and computes its outer boundary.
    /// Connectivity is not checked.
    pub fn from_vertices<G: Group<Elem = E>>(oracle: &GroupOracle<G>, vertices: impl IntoIterator<Item = E>) -> Self {
        let set: BTreeSet<E> = vertices.into_iter().collect();
        if set.is_empty() {
            return Self::empty(oracle.identity());
        }
        let boundary: BTreeSet<E> = set
            .iter()
            .flat_map(|x| oracle.neighbours(x))
            .filter(|y| !set.contains(y))
            .collect();
        Animal { vertices: set.into_iter().collect(), boundary: boundary.into_iter().collect() }
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn boundary_size(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, x: &E) -> bool {
        self.vertices.binary_search(x).is_ok()
    }

    /// `y^{-1} A`.
    pub fn translate<G: Group<Elem = E>>(&self, oracle: &GroupOracle<G>, y: &E) -> Self {
        let yi = oracle.inverse(y);
        let mut vertices: Vec<E> = self.vertices.iter().map(|x| oracle.multiply(&yi, x)).collect();
        let mut boundary: Vec<E> = self.boundary.iter().map(|x| oracle.multiply(&yi, x)).collect();
        vertices.sort();
        boundary.sort();
        Animal { vertices, boundary }
    }

    pub fn is_connected<G: Group<Elem = E>>(&self, oracle: &GroupOracle<G>) -> bool {
        let Some(start) = self.vertices.first() else { return true };
        let mut seen = BTreeSet::from([start.clone()]);
        let mut stack = vec![start.clone()];
        while let Some(x) = stack.pop() {
            for y in oracle.neighbours(&x) {
                if self.contains(&y) && seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

impl<E: Ord> Cluster<E> for Animal<E> {
    fn vertices(&self) -> &[E] {
        &self.vertices
    }

    fn allows_step(&self, x: &E, y: &E) -> bool {
        self.vertices.binary_search(x).is_ok() && self.vertices.binary_search(y).is_ok()
    }

    fn open_count(&self) -> usize {
        self.vertices.len()
    }

    fn closed_count(&self) -> usize {
        self.boundary.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BondAnimal<E> {
    pub vertices: Vec<E>,
    pub edges: Vec<Edge<E>>,
    pub boundary_edges: Vec<Edge<E>>,
}

impl<E: Clone + Ord> BondAnimal<E> {
    /// Builds the bond animal spanned by `edges` together with `e_G` and
    /// computes its edge boundary. Connectivity is not checked.
    pub fn from_edges<G: Group<Elem = E>>(oracle: &GroupOracle<G>, edges: impl IntoIterator<Item = Edge<E>>) -> Self {
        let edges: BTreeSet<Edge<E>> = edges.into_iter().collect();
        let mut vertices = BTreeSet::from([oracle.identity()]);
        for Edge(a, b) in &edges {
            vertices.insert(a.clone());
            vertices.insert(b.clone());
        }
        let boundary: BTreeSet<Edge<E>> = vertices
            .iter()
            .flat_map(|x| oracle.incident_edges(x))
            .filter(|f| !edges.contains(f))
            .collect();
        BondAnimal {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().collect(),
            boundary_edges: boundary.into_iter().collect(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn boundary_size(&self) -> usize {
        self.boundary_edges.len()
    }

    pub fn has_edge(&self, edge: &Edge<E>) -> bool {
        self.edges.binary_search(edge).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.first() else { return true };
        let mut seen = BTreeSet::from([start.clone()]);
        let mut stack = vec![start.clone()];
        while let Some(x) = stack.pop() {
            for Edge(a, b) in self.edges.iter().filter(|f| f.touches(&x)) {
                for y in [a, b] {
                    if seen.insert(y.clone()) {
                        stack.push(y.clone());
                    }
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

impl<E: Clone + Ord> Cluster<E> for BondAnimal<E> {
    fn vertices(&self) -> &[E] {
        &self.vertices
    }

    fn allows_step(&self, x: &E, y: &E) -> bool {
        self.has_edge(&Edge::new(x.clone(), y.clone()))
    }

    fn open_count(&self) -> usize {
        self.edges.len()
    }

    fn closed_count(&self) -> usize {
        self.boundary_edges.len()
    }
}

pub fn animal_weight<E: Ord>(a: &Animal<E>, p: &Rational) -> Rational {
    a.weight(p)
}

pub fn bond_animal_weight<E: Clone + Ord>(a: &BondAnimal<E>, p: &Rational) -> Rational {
    a.weight(p)
}

/// Limit on materialised animal lists.
pub const MAX_LISTED_ANIMALS: usize = 2_000_000;

/// All site animals with `|A| <= max_size`, the empty animal first, then by
/// size and lexicographic vertex list.
pub fn enumerate_site_animals<G: Group>(oracle: &GroupOracle<G>, max_size: usize) -> Result<Vec<Animal<G::Elem>>> {
    let space = CellSpace::site(oracle, max_size)?;
    let mut out = vec![Animal::empty(oracle.identity())];
    let complete = space.try_for_each(|cells| {
        if out.len() >= MAX_LISTED_ANIMALS {
            return ControlFlow::Break(());
        }
        out.push(space.site_animal(oracle, cells));
        ControlFlow::Continue(())
    });
    if !complete {
        return Err(Error::cap("site animal list", MAX_LISTED_ANIMALS));
    }
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.vertices.cmp(&b.vertices)));
    Ok(out)
}

/// All bond animals with `|E(A)| <= max_edges`, by edge count then
/// lexicographic edge list.
pub fn enumerate_bond_animals<G: Group>(oracle: &GroupOracle<G>, max_edges: usize) -> Result<Vec<BondAnimal<G::Elem>>> {
    let space = CellSpace::bond(oracle, max_edges)?;
    let mut out = Vec::new();
    let complete = space.try_for_each(|cells| {
        if out.len() >= MAX_LISTED_ANIMALS {
            return ControlFlow::Break(());
        }
        out.push(space.bond_animal(oracle, cells));
        ControlFlow::Continue(())
    });
    if !complete {
        return Err(Error::cap("bond animal list", MAX_LISTED_ANIMALS));
    }
    out.sort_by(|a, b| a.edge_count().cmp(&b.edge_count()).then_with(|| a.edges.cmp(&b.edges)));
    Ok(out)
}

/// Number of animals by `(open, closed)` counts, for `open <= max_size`.
/// The empty site animal is counted as `(0, 1)`.
pub fn size_histogram<G: Group>(oracle: &GroupOracle<G>, max_size: usize, mode: Mode) -> Result<Vec<Vec<u64>>> {
    let space = match mode {
        Mode::Site => CellSpace::site(oracle, max_size)?,
        Mode::Bond => CellSpace::bond(oracle, max_size)?,
    };
    let mut hist: Vec<Vec<u64>> = vec![Vec::new(); max_size + 1];
    let mut bump = |open: usize, closed: usize| {
        let row = &mut hist[open];
        if row.len() <= closed {
            row.resize(closed + 1, 0);
        }
        row[closed] += 1;
    };
    if mode == Mode::Site {
        bump(0, 1);
    }
    space.for_each(|cells| bump(cells.open, cells.closed));
    Ok(hist)
}

/// `Σ Prob_p[C(e) = A]` over animals with at most `max_size` open cells.
pub fn finite_mass<G: Group>(oracle: &GroupOracle<G>, p: &Rational, max_size: usize, mode: Mode) -> Result<Rational> {
    check_probability(p)?;
    let hist = size_histogram(oracle, max_size, mode)?;
    let q = Rational::one() - p;
    let widest = hist.iter().map(Vec::len).max().unwrap_or(0);
    let qs = crate::scalar::power_table(&q, widest);
    let mut total = Rational::zero();
    let mut pk = Rational::one();
    for row in &hist {
        let mut inner = Rational::zero();
        for (closed, &count) in row.iter().enumerate() {
            if count > 0 {
                inner += &qs[closed] * Rational::from_integer(count.into());
            }
        }
        total += &pk * inner;
        pk *= p;
    }
    Ok(total)
}
