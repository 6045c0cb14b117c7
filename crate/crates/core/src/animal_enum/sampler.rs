//! Reproducible Bernoulli percolation and cluster exploration.

use std::collections::{BTreeSet, VecDeque};

use super::{Animal, BondAnimal, Mode};
use crate::group_core::{mix64, Edge, Group, GroupOracle, StableKey};

const SITE_TAG: u64 = 0x7369_7465;
const EDGE_TAG: u64 = 0x6564_6765;

/// A percolation configuration `ω` drawn lazily: the state of every vertex
/// or edge is a fixed function of `(seed, canonical key)`, so exploration
/// order never changes the configuration.
#[derive(Clone, Copy, Debug)]
pub struct Percolation {
    pub p: f64,
    pub seed: u64,
}

impl Percolation {
    pub fn new(p: f64, seed: u64) -> Self {
        Percolation { p, seed }
    }

    fn uniform(&self, tag: u64, key: u64) -> f64 {
        let h = mix64(mix64(self.seed ^ tag) ^ key);
        (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn site_open<E: StableKey>(&self, x: &E) -> bool {
        self.uniform(SITE_TAG, x.stable_hash()) < self.p
    }

    pub fn edge_open<E: StableKey>(&self, edge: &Edge<E>) -> bool {
        self.uniform(EDGE_TAG, edge.stable_hash()) < self.p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClusterSample<E> {
    Site(Animal<E>),
    Bond(BondAnimal<E>),
    /// The open cluster of `e_G` has more than `cap` vertices.
    Truncated { explored: usize },
}

/// Breadth-first exploration of the open cluster of `e_G`.
pub fn sample_cluster<G: Group>(
    oracle: &GroupOracle<G>,
    p: f64,
    seed: u64,
    cap: usize,
    mode: Mode,
) -> ClusterSample<G::Elem> {
    let omega = Percolation::new(p, seed);
    let e = oracle.identity();
    match mode {
        Mode::Site => {
            if !omega.site_open(&e) {
                return ClusterSample::Site(Animal::empty(e));
            }
            let mut inside = BTreeSet::from([e.clone()]);
            let mut boundary = BTreeSet::new();
            let mut queue = VecDeque::from([e]);
            while let Some(x) = queue.pop_front() {
                for y in oracle.neighbours(&x) {
                    if inside.contains(&y) || boundary.contains(&y) {
                        continue;
                    }
                    if omega.site_open(&y) {
                        if inside.len() >= cap {
                            return ClusterSample::Truncated { explored: inside.len() };
                        }
                        inside.insert(y.clone());
                        queue.push_back(y);
                    } else {
                        boundary.insert(y);
                    }
                }
            }
            ClusterSample::Site(Animal {
                vertices: inside.into_iter().collect(),
                boundary: boundary.into_iter().collect(),
            })
        }
        Mode::Bond => {
            let mut vertices = BTreeSet::from([e.clone()]);
            let mut edges = BTreeSet::new();
            let mut boundary = BTreeSet::new();
            let mut queue = VecDeque::from([e]);
            while let Some(x) = queue.pop_front() {
                for edge in oracle.incident_edges(&x) {
                    if edges.contains(&edge) || boundary.contains(&edge) {
                        continue;
                    }
                    if omega.edge_open(&edge) {
                        let y = if edge.0 == x { edge.1.clone() } else { edge.0.clone() };
                        edges.insert(edge);
                        if !vertices.contains(&y) {
                            if vertices.len() >= cap {
                                return ClusterSample::Truncated { explored: vertices.len() };
                            }
                            vertices.insert(y.clone());
                            queue.push_back(y);
                        }
                    } else {
                        boundary.insert(edge);
                    }
                }
            }
            ClusterSample::Bond(BondAnimal {
                vertices: vertices.into_iter().collect(),
                edges: edges.into_iter().collect(),
                boundary_edges: boundary.into_iter().collect(),
            })
        }
    }
}
