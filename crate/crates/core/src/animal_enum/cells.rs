//! Exhaustive enumeration of connected cell sets containing a root, in the
//! style of Redelmeier's algorithm: every connected set is produced exactly
//! once, with its boundary maintained incrementally.
//!
//! For site animals the cells are the vertices of a Cayley ball. For bond
//! animals the cells are Cayley edges plus a virtual root cell adjacent to
//! every edge at `e_G`, so that the singleton `{e_G}` is the root-only set.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::{Animal, BondAnimal, Mode};
use crate::error::Result;
use crate::group_core::{CayleyBall, Edge, Group, GroupOracle};

const NO_EDGE: u32 = u32::MAX;

/// One enumerated animal, in cell indices of its [`CellSpace`].
#[derive(Clone, Copy, Debug)]
pub struct AnimalCells<'a> {
    /// Ball vertex indices (site) or edge indices (bond).
    pub cells: &'a [u32],
    pub open: usize,
    pub closed: usize,
}

/// The cells in which animals are grown, over a fixed Cayley ball.
#[derive(Clone, Debug)]
pub struct CellSpace<E> {
    mode: Mode,
    ball: CayleyBall<E>,
    edges: Vec<(u32, u32)>,
    step_edge: Vec<Vec<u32>>,
    incident: Vec<Vec<u32>>,
    neighbours: Vec<Vec<u32>>,
    max_open: usize,
}

impl<E: Clone + Ord + std::hash::Hash> CellSpace<E> {
    /// Site animals with at most `max_size` vertices. Every such animal lies
    /// within distance `max_size - 1` of `e_G`, so its boundary lies in the
    /// ball of radius `max_size`.
    pub fn site<G: Group<Elem = E>>(oracle: &GroupOracle<G>, max_size: usize) -> Result<Self> {
        let ball = oracle.ball(max_size)?;
        Ok(Self::site_over(ball, max_size))
    }

    /// Bond animals with at most `max_edges` edges.
    pub fn bond<G: Group<Elem = E>>(oracle: &GroupOracle<G>, max_edges: usize) -> Result<Self> {
        let ball = oracle.ball(max_edges + 1)?;
        Ok(Self::bond_over(ball, max_edges, max_edges))
    }

    /// Every animal of percolation restricted to the ball of radius `r`:
    /// connected sets containing `e_G` inside the ball, with boundary
    /// clipped to the ball.
    pub fn clipped<G: Group<Elem = E>>(oracle: &GroupOracle<G>, radius: usize, mode: Mode) -> Result<Self> {
        let ball = oracle.ball(radius)?;
        Ok(match mode {
            Mode::Site => {
                let n = ball.len();
                Self::site_over(ball, n)
            }
            Mode::Bond => Self::bond_over(ball, radius, usize::MAX),
        })
    }

    fn site_over(ball: CayleyBall<E>, max_open: usize) -> Self {
        let neighbours = (0..ball.len())
            .map(|i| ball.neighbour_indices(i).into_iter().map(|j| j as u32).collect())
            .collect();
        CellSpace {
            mode: Mode::Site,
            ball,
            edges: Vec::new(),
            step_edge: Vec::new(),
            incident: Vec::new(),
            neighbours,
            max_open,
        }
    }

    /// Cells are the edges with an endpoint within distance `cutoff`.
    fn bond_over(ball: CayleyBall<E>, cutoff: usize, max_open: usize) -> Self {
        let n = ball.len();
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut edges = Vec::new();
        for v in 0..n {
            if ball.distance(v) > cutoff {
                continue;
            }
            for step in ball.steps(v) {
                let key = (v.min(step.to) as u32, v.max(step.to) as u32);
                index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    (edges.len() - 1) as u32
                });
            }
        }
        let step_edge: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                ball.steps(v)
                    .iter()
                    .map(|s| {
                        let key = (v.min(s.to) as u32, v.max(s.to) as u32);
                        index.get(&key).copied().unwrap_or(NO_EDGE)
                    })
                    .collect()
            })
            .collect();
        let incident: Vec<Vec<u32>> = step_edge
            .iter()
            .map(|row| {
                let mut r: Vec<u32> = row.iter().copied().filter(|&c| c != NO_EDGE).collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        let root = edges.len() as u32;
        let mut neighbours: Vec<Vec<u32>> = edges
            .iter()
            .enumerate()
            .map(|(c, &(a, b))| {
                let mut r: Vec<u32> = incident[a as usize]
                    .iter()
                    .chain(&incident[b as usize])
                    .copied()
                    .filter(|&f| f != c as u32)
                    .collect();
                if a == 0 || b == 0 {
                    r.push(root);
                }
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        neighbours.push(incident[0].clone());
        CellSpace { mode: Mode::Bond, ball, edges, step_edge, incident, neighbours, max_open }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ball(&self) -> &CayleyBall<E> {
        &self.ball
    }

    /// Number of cells, excluding the virtual bond root.
    pub fn cell_count(&self) -> usize {
        match self.mode {
            Mode::Site => self.ball.len(),
            Mode::Bond => self.edges.len(),
        }
    }

    /// Ball indices of the endpoints of a bond cell.
    pub fn edge_endpoints(&self, cell: u32) -> (u32, u32) {
        self.edges[cell as usize]
    }

    /// Bond cell crossed by the `k`-th in-ball step at vertex `v`.
    pub fn step_edge(&self, v: usize, k: usize) -> Option<u32> {
        self.step_edge
            .get(v)
            .and_then(|r| r.get(k))
            .copied()
            .filter(|&c| c != NO_EDGE)
    }

    /// Visits every nonempty animal once (the empty site animal is not
    /// visited). Order is deterministic.
    pub fn for_each(&self, mut visit: impl FnMut(AnimalCells<'_>)) {
        self.try_for_each(|cells| {
            visit(cells);
            ControlFlow::Continue(())
        });
    }

    /// [`CellSpace::for_each`] that stops at the first `Break`; returns
    /// `true` when the enumeration ran to completion.
    pub fn try_for_each(&self, visit: impl FnMut(AnimalCells<'_>) -> ControlFlow<()>) -> bool {
        match self.mode {
            Mode::Site => {
                let tracker = SiteTracker {
                    neighbours: &self.neighbours,
                    in_animal: vec![false; self.neighbours.len()],
                    touching: vec![0; self.neighbours.len()],
                    open: 0,
                    boundary: 0,
                };
                grow_from(&self.neighbours, 0, self.max_open, 0, tracker, visit)
            }
            Mode::Bond => {
                let root = self.edges.len() as u32;
                let mut touch = vec![0u8; self.edges.len()];
                for &f in &self.incident[0] {
                    touch[f as usize] = 1;
                }
                let mut in_vertices = vec![0u32; self.ball.len()];
                in_vertices[0] = 1;
                let tracker = BondTracker {
                    edges: &self.edges,
                    incident: &self.incident,
                    root,
                    in_vertices,
                    touch,
                    touched: self.incident[0].len(),
                    open: 0,
                };
                grow_from(&self.neighbours, root, self.max_open.saturating_add(1), 1, tracker, visit)
            }
        }
    }

    pub fn site_animal<G: Group<Elem = E>>(&self, oracle: &GroupOracle<G>, cells: AnimalCells<'_>) -> Animal<E> {
        Animal::from_vertices(oracle, cells.cells.iter().map(|&c| self.ball.vertex(c as usize).clone()))
    }

    pub fn bond_animal<G: Group<Elem = E>>(&self, oracle: &GroupOracle<G>, cells: AnimalCells<'_>) -> BondAnimal<E> {
        BondAnimal::from_edges(
            oracle,
            cells.cells.iter().map(|&c| {
                let (a, b) = self.edges[c as usize];
                Edge::new(self.ball.vertex(a as usize).clone(), self.ball.vertex(b as usize).clone())
            }),
        )
    }
}

trait Tracker {
    fn push(&mut self, cell: u32);
    fn pop(&mut self, cell: u32);
    fn counts(&self) -> (usize, usize);
}

struct SiteTracker<'a> {
    neighbours: &'a [Vec<u32>],
    in_animal: Vec<bool>,
    /// Number of animal vertices adjacent to each cell.
    touching: Vec<u32>,
    open: usize,
    boundary: usize,
}

impl Tracker for SiteTracker<'_> {
    fn push(&mut self, cell: u32) {
        let c = cell as usize;
        self.in_animal[c] = true;
        self.open += 1;
        if self.touching[c] > 0 {
            self.boundary -= 1;
        }
        for &u in &self.neighbours[c] {
            let u = u as usize;
            self.touching[u] += 1;
            if self.touching[u] == 1 && !self.in_animal[u] {
                self.boundary += 1;
            }
        }
    }

    fn pop(&mut self, cell: u32) {
        let c = cell as usize;
        for &u in &self.neighbours[c] {
            let u = u as usize;
            self.touching[u] -= 1;
            if self.touching[u] == 0 && !self.in_animal[u] {
                self.boundary -= 1;
            }
        }
        self.in_animal[c] = false;
        self.open -= 1;
        if self.touching[c] > 0 {
            self.boundary += 1;
        }
    }

    fn counts(&self) -> (usize, usize) {
        (self.open, self.boundary)
    }
}

struct BondTracker<'a> {
    edges: &'a [(u32, u32)],
    incident: &'a [Vec<u32>],
    root: u32,
    /// Number of animal edges at each vertex (plus one at `e_G`).
    in_vertices: Vec<u32>,
    /// Number of endpoints of each edge lying in the vertex set.
    touch: Vec<u8>,
    touched: usize,
    open: usize,
}

impl BondTracker<'_> {
    fn endpoints(&self, cell: u32) -> impl Iterator<Item = usize> {
        let (a, b) = self.edges[cell as usize];
        std::iter::once(a as usize).chain((a != b).then_some(b as usize))
    }
}

impl Tracker for BondTracker<'_> {
    fn push(&mut self, cell: u32) {
        if cell == self.root {
            return;
        }
        self.open += 1;
        let ends: Vec<usize> = self.endpoints(cell).collect();
        for v in ends {
            self.in_vertices[v] += 1;
            if self.in_vertices[v] == 1 {
                for &f in &self.incident[v] {
                    self.touch[f as usize] += 1;
                    if self.touch[f as usize] == 1 {
                        self.touched += 1;
                    }
                }
            }
        }
    }

    fn pop(&mut self, cell: u32) {
        if cell == self.root {
            return;
        }
        self.open -= 1;
        let ends: Vec<usize> = self.endpoints(cell).collect();
        for v in ends {
            self.in_vertices[v] -= 1;
            if self.in_vertices[v] == 0 {
                for &f in &self.incident[v] {
                    self.touch[f as usize] -= 1;
                    if self.touch[f as usize] == 0 {
                        self.touched -= 1;
                    }
                }
            }
        }
    }

    fn counts(&self) -> (usize, usize) {
        (self.open, self.touched - self.open)
    }
}

struct Grower<'a, T, F> {
    neighbours: &'a [Vec<u32>],
    max_cells: usize,
    skip: usize,
    marked: Vec<bool>,
    current: Vec<u32>,
    tracker: T,
    visit: F,
}

fn grow_from<T: Tracker, F: FnMut(AnimalCells<'_>) -> ControlFlow<()>>(
    neighbours: &[Vec<u32>],
    root: u32,
    max_cells: usize,
    skip: usize,
    tracker: T,
    visit: F,
) -> bool {
    if max_cells == 0 {
        return true;
    }
    let mut marked = vec![false; neighbours.len()];
    marked[root as usize] = true;
    let mut grower = Grower { neighbours, max_cells, skip, marked, current: Vec::new(), tracker, visit };
    grower.grow(&mut vec![root]).is_continue()
}

impl<T: Tracker, F: FnMut(AnimalCells<'_>) -> ControlFlow<()>> Grower<'_, T, F> {
    /// On `Break` the trackers are left mid-animal; the grower is discarded.
    fn grow(&mut self, untried: &mut Vec<u32>) -> ControlFlow<()> {
        let neighbours = self.neighbours;
        while let Some(c) = untried.pop() {
            self.current.push(c);
            self.tracker.push(c);
            let (open, closed) = self.tracker.counts();
            (self.visit)(AnimalCells { cells: &self.current[self.skip..], open, closed })?;
            if self.current.len() < self.max_cells {
                let mut next = untried.clone();
                let added_from = next.len();
                for &u in &neighbours[c as usize] {
                    if !self.marked[u as usize] {
                        self.marked[u as usize] = true;
                        next.push(u);
                    }
                }
                let added: Vec<u32> = next[added_from..].to_vec();
                self.grow(&mut next)?;
                for u in added {
                    self.marked[u as usize] = false;
                }
            }
            self.tracker.pop(c);
            self.current.pop();
        }
        ControlFlow::Continue(())
    }
}
