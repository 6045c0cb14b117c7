//! Group oracles, lamp groups and Cayley-graph neighbourhoods.
//!
//! A [`Group`] supplies canonical, totally ordered element keys together with
//! multiplication and inversion. A [`GroupOracle`] attaches a finitely
//! supported symmetric step distribution `μ` to a group. [`LampGroup`] is the
//! finite group `H` of lamp states, stored as a multiplication table.

mod groups;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

pub use groups::{
    mix64, Cyclic, FreeGroup, FreeWord, IntegerLine, InvolutionProduct, InvolutionWord, Lattice2,
};

use crate::error::{Error, Result};
use crate::scalar::{ratio, Rational};

/// Hash that is stable across runs, platforms and toolchains. Used to key
/// the pseudo-random percolation stream by canonical element.
pub trait StableKey {
    fn stable_hash(&self) -> u64;
}

pub trait Group: Clone + Send + Sync + 'static {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync + Serialize + StableKey;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn name(&self) -> String;
    fn is_torsion_free(&self) -> bool;
}

/// Unoriented Cayley edge `[x, y]`, endpoints stored in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge<E>(pub E, pub E);

impl<E: Ord> Edge<E> {
    pub fn new(a: E, b: E) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn is_loop(&self) -> bool {
        self.0 == self.1
    }

    pub fn touches(&self, v: &E) -> bool {
        &self.0 == v || &self.1 == v
    }
}

impl<E: StableKey> StableKey for Edge<E> {
    fn stable_hash(&self) -> u64 {
        mix64(self.0.stable_hash() ^ mix64(self.1.stable_hash() ^ 0x6564_6765))
    }
}

#[derive(Clone, Debug)]
pub struct Generator<E> {
    pub elem: E,
    pub weight: Rational,
    pub weight_f64: f64,
}

/// A group together with its symmetric step distribution `μ`.
#[derive(Clone, Debug)]
pub struct GroupOracle<G: Group> {
    group: G,
    name: String,
    generators: Vec<Generator<G::Elem>>,
}

impl<G: Group> GroupOracle<G> {
    /// Validates that `weights` is a symmetric probability measure whose
    /// support is closed under inversion. Repeated elements are merged.
    pub fn new(group: G, name: impl Into<String>, weights: Vec<(G::Elem, Rational)>) -> Result<Self> {
        let mut merged: Vec<(G::Elem, Rational)> = Vec::new();
        for (elem, w) in weights {
            if w <= Rational::zero() || w > Rational::one() {
                return Err(Error::NonSymmetricWeights(format!(
                    "weight {w} of {elem:?} outside (0, 1]"
                )));
            }
            match merged.iter_mut().find(|(e, _)| *e == elem) {
                Some((_, acc)) => *acc += w,
                None => merged.push((elem, w)),
            }
        }
        let total: Rational = merged.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(Error::NonSymmetricWeights(format!("weights sum to {total}")));
        }
        for (elem, w) in &merged {
            let inv = group.inverse(elem);
            match merged.iter().find(|(e, _)| *e == inv) {
                Some((_, wi)) if wi == w => {}
                Some((_, wi)) => {
                    return Err(Error::NonSymmetricWeights(format!(
                        "μ({elem:?}) = {w} but μ({inv:?}) = {wi}"
                    )))
                }
                None => {
                    return Err(Error::NonSymmetricWeights(format!(
                        "inverse of {elem:?} is not a generator"
                    )))
                }
            }
        }
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        let generators = merged
            .into_iter()
            .map(|(elem, weight)| Generator { weight_f64: weight.to_f64().unwrap_or(f64::NAN), elem, weight })
            .collect();
        Ok(Self { group, name: name.into(), generators })
    }

    /// Equidistribution on `support`.
    pub fn uniform(group: G, name: impl Into<String>, support: Vec<G::Elem>) -> Result<Self> {
        let mut distinct = support;
        distinct.sort();
        distinct.dedup();
        let w = ratio(1, distinct.len() as i64);
        Self::new(group, name, distinct.into_iter().map(|s| (s, w.clone())).collect())
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator<G::Elem>] {
        &self.generators
    }

    pub fn identity(&self) -> G::Elem {
        self.group.identity()
    }

    pub fn multiply(&self, a: &G::Elem, b: &G::Elem) -> G::Elem {
        self.group.multiply(a, b)
    }

    pub fn inverse(&self, a: &G::Elem) -> G::Elem {
        self.group.inverse(a)
    }

    /// `μ(s)`, zero off the support.
    pub fn weight(&self, s: &G::Elem) -> Rational {
        self.generators
            .iter()
            .find(|g| &g.elem == s)
            .map(|g| g.weight.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Whether `e_G` carries positive step weight (lazy walk).
    pub fn identity_in_support(&self) -> bool {
        let e = self.identity();
        self.generators.iter().any(|g| g.elem == e)
    }

    /// Distinct non-loop neighbours `x s` of `x`.
    pub fn neighbours(&self, x: &G::Elem) -> Vec<G::Elem> {
        let mut out: Vec<G::Elem> = self
            .generators
            .iter()
            .map(|g| self.multiply(x, &g.elem))
            .filter(|y| y != x)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Distinct edges `[x, x s]` at `x`, loops included when `e_G ∈ S`.
    pub fn incident_edges(&self, x: &G::Elem) -> Vec<Edge<G::Elem>> {
        let mut out: Vec<Edge<G::Elem>> = self
            .generators
            .iter()
            .map(|g| Edge::new(x.clone(), self.multiply(x, &g.elem)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Checks the group axioms on every pair drawn from `sample`.
    pub fn spot_check(&self, sample: &[G::Elem]) -> bool {
        let e = self.identity();
        sample.iter().all(|a| {
            self.multiply(a, &self.inverse(a)) == e
                && self.multiply(&self.inverse(a), a) == e
                && self.multiply(&e, a) == *a
                && sample.iter().all(|b| {
                    self.multiply(&self.multiply(a, b), &self.inverse(b)) == *a
                        && sample.iter().all(|c| {
                            self.multiply(&self.multiply(a, b), c) == self.multiply(a, &self.multiply(b, c))
                        })
                })
        })
    }

    pub fn ball(&self, radius: usize) -> Result<CayleyBall<G::Elem>> {
        CayleyBall::build(self, &self.identity(), radius, DEFAULT_BALL_CAP)
    }

    pub fn ball_around(&self, center: &G::Elem, radius: usize, cap: usize) -> Result<CayleyBall<G::Elem>> {
        CayleyBall::build(self, center, radius, cap)
    }
}

/// Default limit on the number of ball vertices.
pub const DEFAULT_BALL_CAP: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallStep {
    pub to: usize,
    pub generator: usize,
}

/// The ball of a given radius around `center` in the Cayley graph. Vertex 0
/// is the center; vertices are listed in breadth-first order.
#[derive(Clone, Debug)]
pub struct CayleyBall<E> {
    pub center: E,
    pub radius: usize,
    vertices: Vec<E>,
    distance: Vec<usize>,
    index: HashMap<E, usize>,
    adjacency: Vec<Vec<BallStep>>,
}

impl<E: Clone + Eq + Hash + Ord> CayleyBall<E> {
    fn build<G: Group<Elem = E>>(oracle: &GroupOracle<G>, center: &E, radius: usize, cap: usize) -> Result<Self> {
        let mut vertices = vec![center.clone()];
        let mut distance = vec![0];
        let mut index = HashMap::from([(center.clone(), 0usize)]);
        let mut frontier = 0..1;
        for d in 1..=radius {
            let start = vertices.len();
            for i in frontier.clone() {
                for g in oracle.generators() {
                    let y = oracle.multiply(&vertices[i], &g.elem);
                    if !index.contains_key(&y) {
                        if vertices.len() >= cap {
                            return Err(Error::cap(format!("Cayley ball of radius {radius}"), cap));
                        }
                        index.insert(y.clone(), vertices.len());
                        vertices.push(y);
                        distance.push(d);
                    }
                }
            }
            if vertices.len() == start {
                break;
            }
            frontier = start..vertices.len();
        }
        let adjacency = vertices
            .iter()
            .map(|x| {
                oracle
                    .generators()
                    .iter()
                    .enumerate()
                    .filter_map(|(k, g)| {
                        index
                            .get(&oracle.multiply(x, &g.elem))
                            .map(|&to| BallStep { to, generator: k })
                    })
                    .collect()
            })
            .collect();
        Ok(Self { center: center.clone(), radius, vertices, distance, index, adjacency })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[E] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &E {
        &self.vertices[i]
    }

    pub fn index_of(&self, x: &E) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn distance(&self, i: usize) -> usize {
        self.distance[i]
    }

    /// Steps `x -> x s` that stay in the ball.
    pub fn steps(&self, i: usize) -> &[BallStep] {
        &self.adjacency[i]
    }

    /// Adjacency as `(neighbour key, generator, weight)` triples.
    pub fn adjacency_of<G: Group<Elem = E>>(
        &self,
        oracle: &GroupOracle<G>,
        x: &E,
    ) -> Vec<(E, E, Rational)> {
        self.index_of(x)
            .map(|i| {
                self.adjacency[i]
                    .iter()
                    .map(|st| {
                        let g = &oracle.generators()[st.generator];
                        (self.vertices[st.to].clone(), g.elem.clone(), g.weight.clone())
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Distinct non-loop neighbour indices of vertex `i` within the ball.
    pub fn neighbour_indices(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.adjacency[i].iter().map(|s| s.to).filter(|&t| t != i).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn sorted_vertices(&self) -> Vec<E> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }
}

/// The finite lamp group `H`, elements `0..order` with `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LampGroup {
    order: u32,
    table: Vec<u32>,
    inverse: Vec<u32>,
    name: String,
}

impl LampGroup {
    pub fn cyclic(order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidLampGroup(format!("order {order} < 2")));
        }
        let table = (0..order).flat_map(|a| (0..order).map(move |b| (a + b) % order)).collect();
        Self::from_table(order, table, format!("Z{order}"))
    }

    /// The symmetric group on three letters, a nonabelian lamp group of
    /// order 6. Elements are permutations of `{0,1,2}` in lexicographic order.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let pos = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        let mut table = Vec::with_capacity(36);
        for a in &perms {
            for b in &perms {
                // (a b)(i) = a(b(i))
                table.push(pos([a[b[0]], a[b[1]], a[b[2]]]));
            }
        }
        Self::from_table(6, table, "S3".into()).expect("S3 table is a group")
    }

    /// Validates a Cayley table (row `a`, column `b` holds `a b`).
    pub fn from_table(order: u32, table: Vec<u32>, name: String) -> Result<Self> {
        let n = order as usize;
        if n < 2 || table.len() != n * n {
            return Err(Error::InvalidLampGroup("table must be order x order with order >= 2".into()));
        }
        if table.iter().any(|&v| v >= order) {
            return Err(Error::InvalidLampGroup("entry out of range".into()));
        }
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[table[a * n + b] as usize] = true;
                col[table[b * n + a] as usize] = true;
            }
            if row.contains(&false) || col.contains(&false) {
                return Err(Error::InvalidLampGroup("not a Latin square".into()));
            }
            if table[a] != a as u32 || table[a * n] != a as u32 {
                return Err(Error::InvalidLampGroup("0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = table[a * n + b] as usize;
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(Error::InvalidLampGroup("not associative".into()));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == 0).unwrap() as u32)
            .collect();
        Ok(Self { order, table, inverse, name })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn multiply(&self, a: u32, b: u32) -> u32 {
        self.table[(a * self.order + b) as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// Percolation parameter `1/|H|`.
    pub fn p(&self) -> Rational {
        ratio(1, self.order as i64)
    }
}

/// Parsed `--group` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Line,
    SquareLattice,
    TriangularLattice,
    /// Homogeneous tree of degree `d + 1`.
    Tree { d: u8 },
    Cyclic { m: u64 },
    Free { k: u8 },
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownDescriptor(s.to_string());
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let desc = match s.trim() {
            "Z" => GroupDescriptor::Line,
            "Z2-square" | "Z2" => GroupDescriptor::SquareLattice,
            "Z2-tri" => GroupDescriptor::TriangularLattice,
            other => match other.split_once(':') {
                Some(("tree", d)) => {
                    let d = num(d)?;
                    if !(1..=60).contains(&d) {
                        return Err(bad());
                    }
                    GroupDescriptor::Tree { d: d as u8 }
                }
                Some(("Zn", m)) => {
                    let m = num(m)?;
                    if m < 2 {
                        return Err(bad());
                    }
                    GroupDescriptor::Cyclic { m }
                }
                Some(("free", k)) => {
                    let k = num(k)?;
                    if !(1..=60).contains(&k) {
                        return Err(bad());
                    }
                    GroupDescriptor::Free { k: k as u8 }
                }
                _ => return Err(bad()),
            },
        };
        Ok(desc)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Line => write!(f, "Z"),
            GroupDescriptor::SquareLattice => write!(f, "Z2-square"),
            GroupDescriptor::TriangularLattice => write!(f, "Z2-tri"),
            GroupDescriptor::Tree { d } => write!(f, "tree:{d}"),
            GroupDescriptor::Cyclic { m } => write!(f, "Zn:{m}"),
            GroupDescriptor::Free { k } => write!(f, "free:{k}"),
        }
    }
}

/// A group oracle of any supported kind. Use [`with_oracle!`](crate::with_oracle)
/// to run generic code on the contained oracle.
#[derive(Clone, Debug)]
pub enum AnyOracle {
    Line(GroupOracle<IntegerLine>),
    Lattice(GroupOracle<Lattice2>),
    Cyclic(GroupOracle<Cyclic>),
    Free(GroupOracle<FreeGroup>),
    Tree(GroupOracle<InvolutionProduct>),
}

/// Runs `$body` with `$g` bound to the concrete `GroupOracle` inside an
/// [`AnyOracle`].
#[macro_export]
macro_rules! with_oracle {
    ($any:expr, $g:ident => $body:expr) => {
        match $any {
            $crate::group_core::AnyOracle::Line($g) => $body,
            $crate::group_core::AnyOracle::Lattice($g) => $body,
            $crate::group_core::AnyOracle::Cyclic($g) => $body,
            $crate::group_core::AnyOracle::Free($g) => $body,
            $crate::group_core::AnyOracle::Tree($g) => $body,
        }
    };
}

/// Instantiates the standard equidistributed oracle for a descriptor.
pub fn make_group(desc: &GroupDescriptor) -> Result<AnyOracle> {
    let name = desc.to_string();
    Ok(match *desc {
        GroupDescriptor::Line => AnyOracle::Line(GroupOracle::uniform(IntegerLine, name, vec![1, -1])?),
        GroupDescriptor::SquareLattice => AnyOracle::Lattice(GroupOracle::uniform(
            Lattice2,
            name,
            vec![(1, 0), (-1, 0), (0, 1), (0, -1)],
        )?),
        GroupDescriptor::TriangularLattice => AnyOracle::Lattice(GroupOracle::uniform(
            Lattice2,
            name,
            vec![(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)],
        )?),
        GroupDescriptor::Tree { d } => {
            let factors = d + 1;
            let gens = (0..factors).map(|l| InvolutionWord(vec![l])).collect();
            AnyOracle::Tree(GroupOracle::uniform(InvolutionProduct { factors }, name, gens)?)
        }
        GroupDescriptor::Cyclic { m } => {
            let group = Cyclic { modulus: m };
            let gens = vec![1 % m, group.inverse(&(1 % m))];
            AnyOracle::Cyclic(GroupOracle::uniform(group, name, gens)?)
        }
        GroupDescriptor::Free { k } => {
            let gens = (1..=k as i8).flat_map(|l| [FreeWord(vec![l]), FreeWord(vec![-l])]).collect();
            AnyOracle::Free(GroupOracle::uniform(FreeGroup { rank: k }, name, gens)?)
        }
    })
}

impl AnyOracle {
    pub fn name(&self) -> String {
        crate::with_oracle!(self, g => g.name().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn oracle(desc: &str) -> AnyOracle {
        make_group(&desc.parse().unwrap()).unwrap()
    }

    #[test]
    fn line_identity_is_zero() {
        let AnyOracle::Line(g) = oracle("Z") else { panic!() };
        assert_eq!(g.identity(), 0);
        assert_eq!(g.generators().len(), 2);
        assert!(g.generators().iter().all(|s| s.weight == ratio(1, 2)));
    }

    #[test]
    fn ball_sizes_match_closed_forms() {
        let AnyOracle::Line(z) = oracle("Z") else { panic!() };
        let AnyOracle::Lattice(sq) = oracle("Z2-square") else { panic!() };
        let AnyOracle::Tree(t3) = oracle("tree:2") else { panic!() };
        let AnyOracle::Free(f2) = oracle("free:2") else { panic!() };
        for r in 0..=6usize {
            assert_eq!(z.ball(r).unwrap().len(), 2 * r + 1);
            assert_eq!(sq.ball(r).unwrap().len(), 2 * r * r + 2 * r + 1);
            // degree q tree: 1 + q ((q-1)^r - 1)/(q-2)
            assert_eq!(t3.ball(r).unwrap().len(), 1 + 3 * ((1usize << r) - 1));
            assert_eq!(f2.ball(r).unwrap().len(), 1 + 4 * (3usize.pow(r as u32) - 1) / 2);
        }
        assert_eq!(sq.ball(2).unwrap().len(), 13);
        assert_eq!(f2.ball(2).unwrap().len(), 17);
        assert_eq!(z.ball(3).unwrap().sorted_vertices(), vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn cycle_ball_saturates() {
        let AnyOracle::Cyclic(c6) = oracle("Zn:6") else { panic!() };
        assert_eq!(c6.ball(3).unwrap().len(), 6);
        assert_eq!(c6.ball(10).unwrap().len(), 6);
        let AnyOracle::Cyclic(c2) = oracle("Zn:2") else { panic!() };
        assert_eq!(c2.generators().len(), 1);
        assert_eq!(c2.generators()[0].weight, ratio(1, 1));
    }

    #[test]
    fn triangular_lattice_has_six_neighbours() {
        let AnyOracle::Lattice(tri) = oracle("Z2-tri") else { panic!() };
        assert_eq!(tri.neighbours(&(0, 0)).len(), 6);
        assert_eq!(tri.ball(1).unwrap().len(), 7);
    }

    #[test]
    fn ball_cap_is_enforced() {
        let AnyOracle::Free(f3) = oracle("free:3") else { panic!() };
        let err = f3.ball_around(&f3.identity(), 10, 1000).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn ball_adjacency_is_symmetric() {
        let AnyOracle::Lattice(tri) = oracle("Z2-tri") else { panic!() };
        let ball = tri.ball(3).unwrap();
        for i in 0..ball.len() {
            for j in ball.neighbour_indices(i) {
                assert!(ball.neighbour_indices(j).contains(&i));
            }
        }
        let adj = ball.adjacency_of(&tri, &(0, 0));
        assert_eq!(adj.len(), 6);
        assert!(adj.iter().all(|(_, _, w)| *w == ratio(1, 6)));
    }

    #[test]
    fn descriptor_errors() {
        for bad in ["Q", "tree:0", "Zn:1", "free:x", "Zn"] {
            assert!(matches!(bad.parse::<GroupDescriptor>(), Err(Error::UnknownDescriptor(_))), "{bad}");
        }
        for good in ["Z", "Z2-square", "Z2-tri", "tree:2", "Zn:4", "free:2"] {
            assert_eq!(good.parse::<GroupDescriptor>().unwrap().to_string(), good);
        }
    }

    #[test]
    fn asymmetric_weights_are_rejected() {
        let err = GroupOracle::new(IntegerLine, "Z", vec![(1, ratio(2, 3)), (-1, ratio(1, 3))]).unwrap_err();
        assert!(matches!(err, Error::NonSymmetricWeights(_)));
        let err = GroupOracle::new(IntegerLine, "Z", vec![(1, ratio(1, 1))]).unwrap_err();
        assert!(matches!(err, Error::NonSymmetricWeights(_)));
        let err = GroupOracle::new(IntegerLine, "Z", vec![(1, ratio(1, 3)), (-1, ratio(1, 3))]).unwrap_err();
        assert!(matches!(err, Error::NonSymmetricWeights(_)));
        // lazy walk is fine
        let lazy = GroupOracle::new(IntegerLine, "Z", vec![(0, ratio(1, 2)), (1, ratio(1, 4)), (-1, ratio(1, 4))]).unwrap();
        assert!(lazy.identity_in_support());
    }

    #[test]
    fn lamp_groups() {
        let z3 = LampGroup::cyclic(3).unwrap();
        assert_eq!(z3.multiply(2, 2), 1);
        assert_eq!(z3.inverse(1), 2);
        assert_eq!(z3.p(), ratio(1, 3));
        let s3 = LampGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert!((0..6).any(|a| (0..6).any(|b| s3.multiply(a, b) != s3.multiply(b, a))));
        assert!(LampGroup::cyclic(1).is_err());
        assert!(LampGroup::from_table(2, vec![0, 1, 1, 1], "bad".into()).is_err());
    }

    proptest! {
        #[test]
        fn group_axioms_on_ball_samples(seed in 0u64..1000) {
            for desc in ["Z", "Z2-tri", "tree:2", "Zn:5", "free:2"] {
                let any = oracle(desc);
                let ok = crate::with_oracle!(&any, g => {
                    let ball = g.ball(3).unwrap();
                    let n = ball.len() as u64;
                    let sample: Vec<_> = (0..4)
                        .map(|i| ball.vertex((mix64(seed * 31 + i) % n) as usize).clone())
                        .collect();
                    g.spot_check(&sample)
                });
                prop_assert!(ok, "{}", desc);
            }
        }
    }
}
