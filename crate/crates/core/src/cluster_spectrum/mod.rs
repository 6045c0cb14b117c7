//! The killed walk on a finite animal and its spectral data.
//!
//! For an animal `A`, `P_A` is the transition matrix of the `μ`-walk that is
//! absorbed as soon as it leaves `A` (site mode) or tries to cross an edge
//! outside `E(A)` (bond mode). The rooted spectral measure `ν_A` puts mass
//! `f(e)^2` at each eigenvalue, where `f` runs over an orthonormal
//! eigenbasis, so that `∫ λ^n dν_A = p_A^{(n)}(e, e)`.

mod jacobi;

use std::collections::HashSet;

use nalgebra::DMatrix;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

pub use jacobi::{asymmetry, jacobi};

use crate::animal_enum::{enumerate_bond_animals, enumerate_site_animals, Cluster, Mode};
use crate::error::Result;
use crate::group_core::{Edge, Group, GroupOracle};
use crate::scalar::{Rational, Scalar};

/// Eigenvalues closer than this are reported as one atom.
pub const MERGE_TOLERANCE: f64 = 1e-9;

/// Atoms lighter than this are dropped from rooted spectral measures.
pub const MASS_FLOOR: f64 = 1e-14;

/// Above this dimension eigenvalue-only solves use Householder/QR.
const JACOBI_LIMIT: usize = 48;

#[derive(Clone, Debug)]
pub struct SubMarkovMatrix<E> {
    /// Sorted vertex list of the animal.
    pub index: Vec<E>,
    /// Position of `e_G` in `index`; `None` for the empty animal.
    pub root: Option<usize>,
    rows: Vec<Vec<(usize, Rational)>>,
    dense: Vec<f64>,
}

pub fn build_pa<G: Group, C: Cluster<G::Elem>>(a: &C, oracle: &GroupOracle<G>) -> SubMarkovMatrix<G::Elem> {
    let index = a.vertices().to_vec();
    let n = index.len();
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for (i, x) in index.iter().enumerate() {
        for s in oracle.generators() {
            let y = oracle.multiply(x, &s.elem);
            if let Ok(j) = index.binary_search(&y) {
                if a.allows_step(x, &y) {
                    match rows[i].iter_mut().find(|(k, _)| *k == j) {
                        Some((_, w)) => *w += &s.weight,
                        None => rows[i].push((j, s.weight.clone())),
                    }
                }
            }
        }
        rows[i].sort_by_key(|(j, _)| *j);
    }
    let mut dense = vec![0.0; n * n];
    for (i, row) in rows.iter().enumerate() {
        for (j, w) in row {
            dense[i * n + j] = f64::from_rational(w);
        }
    }
    let root = index.binary_search(&oracle.identity()).ok();
    SubMarkovMatrix { index, root, rows, dense }
}

impl<E> SubMarkovMatrix<E> {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dense[i * self.dim() + j]
    }

    /// Row-major dense entries.
    pub fn dense(&self) -> &[f64] {
        &self.dense
    }

    /// Nonzero entries of row `i`, exact.
    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        self.rows[i].iter().map(|(_, w)| w.clone()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter()
                .all(|(j, w)| self.rows[*j].iter().any(|(k, v)| *k == i && v == w))
        })
    }

    /// `(P_A f)(x) = Σ_y p_A(x, y) f(y)`.
    pub fn apply<S: Scalar>(&self, f: &[S]) -> Vec<S> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = S::zero();
                for (j, w) in row {
                    acc.mul_add_assign(&S::from_rational(w), &f[*j]);
                }
                acc
            })
            .collect()
    }

    /// `p_A^{(n)}(e, e)` for `n = 0..=n_max` by repeated multiplication of
    /// the root indicator. The empty animal gives `1, 0, 0, ...`.
    pub fn return_probabilities<S: Scalar>(&self, n_max: usize) -> Vec<S> {
        let Some(root) = self.root else {
            return (0..=n_max).map(|n| if n == 0 { S::one() } else { S::zero() }).collect();
        };
        let mut v = vec![S::zero(); self.dim()];
        v[root] = S::one();
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            out.push(v[root].clone());
            if n < n_max {
                v = self.apply(&v);
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` belonging to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    /// `‖P_A f - λ f‖_2` per pair.
    pub residuals: Vec<f64>,
}

impl EigenSystem {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, u) in self.vectors.iter().enumerate() {
            for (b, v) in self.vectors.iter().enumerate() {
                let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                worst = worst.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition of `P_A`, in ascending order. Each eigenvector
/// has its first component of magnitude above `1e-12` positive.
pub fn eigensolve<E>(m: &SubMarkovMatrix<E>) -> Result<EigenSystem> {
    let n = m.dim();
    let (values, vectors) = jacobi(m.dense(), n)?;
    let mut pairs: Vec<(f64, Vec<f64>)> = values
        .into_iter()
        .zip(vectors)
        .map(|(l, mut v)| {
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            (l, v)
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.0.total_cmp(&b.0).then_with(|| {
            a.1.iter()
                .zip(&b.1)
                .map(|(x, y)| y.total_cmp(x))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let residuals = pairs
        .iter()
        .map(|(l, v)| {
            let pv = m.apply(v);
            pv.iter().zip(v).map(|(a, b)| (a - l * b).powi(2)).sum::<f64>().sqrt()
        })
        .collect();
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(EigenSystem { values, vectors, residuals })
}

/// Ascending eigenvalues only.
pub fn eigenvalues<E>(m: &SubMarkovMatrix<E>) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut values = if n <= JACOBI_LIMIT {
        jacobi(m.dense(), n)?.0
    } else {
        let skew = asymmetry(m.dense(), n);
        if skew > 1e-14 {
            return Err(crate::Error::NotSymmetric(skew));
        }
        DMatrix::from_row_slice(n, n, m.dense()).symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub value: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SpectralMeasure {
    pub atoms: Vec<Atom>,
}

impl SpectralMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn moment(&self, n: usize) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.value.powi(n as i32)).sum()
    }

    /// Sorts atoms and merges values within [`MERGE_TOLERANCE`] of the
    /// previous atom, keeping the mass-weighted mean.
    pub fn from_atoms(mut atoms: Vec<Atom>) -> Self {
        atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut out: Vec<Atom> = Vec::new();
        let mut anchor = f64::NEG_INFINITY;
        for a in atoms {
            match out.last_mut() {
                Some(last) if a.value - anchor <= MERGE_TOLERANCE => {
                    let total = last.mass + a.mass;
                    if total > 0.0 {
                        last.value = (last.value * last.mass + a.value * a.mass) / total;
                    }
                    last.mass = total;
                }
                _ => {
                    anchor = a.value;
                    out.push(a);
                }
            }
        }
        SpectralMeasure { atoms: out }
    }
}

/// `ν_A`: atoms `(λ, f(e)^2)`, merged within [`MERGE_TOLERANCE`], atoms of
/// mass below [`MASS_FLOOR`] dropped. `root = None` gives `δ_0`.
pub fn rooted_spectral_measure(es: &EigenSystem, root: Option<usize>) -> SpectralMeasure {
    let Some(root) = root else {
        return SpectralMeasure { atoms: vec![Atom { value: 0.0, mass: 1.0 }] };
    };
    let atoms = es
        .values
        .iter()
        .zip(&es.vectors)
        .map(|(&value, v)| Atom { value, mass: v[root] * v[root] })
        .collect();
    let mut m = SpectralMeasure::from_atoms(atoms);
    m.atoms.retain(|a| a.mass >= MASS_FLOOR);
    m
}

/// `Λ`: distinct eigenvalues of `P_A` over all animals up to `max_size`,
/// together with `0`. Translates `y^{-1}A` share a spectrum, so one
/// representative per translation class is solved.
pub fn point_spectrum<G: Group>(oracle: &GroupOracle<G>, max_size: usize, mode: Mode) -> Result<Vec<f64>> {
    let matrices: Vec<SubMarkovMatrix<G::Elem>> = match mode {
        Mode::Site => {
            let mut seen: HashSet<Vec<G::Elem>> = HashSet::new();
            let mut reps = Vec::new();
            for a in enumerate_site_animals(oracle, max_size)? {
                if a.is_empty() || seen.contains(&a.vertices) {
                    continue;
                }
                for y in &a.vertices {
                    seen.insert(a.translate(oracle, y).vertices);
                }
                reps.push(build_pa(&a, oracle));
            }
            reps
        }
        Mode::Bond => {
            let mut seen: HashSet<Vec<Edge<G::Elem>>> = HashSet::new();
            let mut reps = Vec::new();
            for a in enumerate_bond_animals(oracle, max_size)? {
                if seen.contains(&a.edges) {
                    continue;
                }
                for y in &a.vertices {
                    let yi = oracle.inverse(y);
                    let mut moved: Vec<Edge<G::Elem>> = a
                        .edges
                        .iter()
                        .map(|Edge(u, v)| Edge::new(oracle.multiply(&yi, u), oracle.multiply(&yi, v)))
                        .collect();
                    moved.sort();
                    seen.insert(moved);
                }
                reps.push(build_pa(&a, oracle));
            }
            reps
        }
    };
    let spectra: Vec<Vec<f64>> = matrices.par_iter().map(eigenvalues).collect::<Result<_>>()?;
    let mut all: Vec<f64> = spectra.into_iter().flatten().collect();
    all.push(0.0);
    Ok(dedup_sorted(all))
}

/// Sorts and keeps one representative per run of values whose consecutive
/// gaps are at most [`MERGE_TOLERANCE`].
pub fn dedup_sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for v in values {
        match out.last() {
            Some(&last) if v - last <= MERGE_TOLERANCE => {}
            _ => out.push(if v.is_zero() { 0.0 } else { v }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::animal_enum::{Animal, BondAnimal};
    use crate::group_core::{make_group, AnyOracle, IntegerLine};
    use crate::scalar::ratio;

    fn line() -> GroupOracle<IntegerLine> {
        match make_group(&"Z".parse().unwrap()).unwrap() {
            AnyOracle::Line(g) => g,
            _ => unreachable!(),
        }
    }

    #[test]
    fn pair_matrix() {
        let z = line();
        let pa = build_pa(&Animal::from_vertices(&z, [0, 1]), &z);
        assert_eq!(pa.dense(), &[0.0, 0.5, 0.5, 0.0]);
        assert!(pa.is_symmetric());
        assert_eq!(pa.row_sum(0), ratio(1, 2));
        let bond = build_pa(&BondAnimal::from_edges(&z, [Edge::new(0, 1)]), &z);
        assert_eq!(bond.dense(), pa.dense());
        let single = build_pa(&Animal::from_vertices(&z, [0]), &z);
        assert_eq!(single.dense(), &[0.0]);
        let es = eigensolve(&single).unwrap();
        assert_eq!(es.values, vec![0.0]);
    }

    #[test]
    fn pair_eigensystem() {
        let z = line();
        let es = eigensolve(&build_pa(&Animal::from_vertices(&z, [0, 1]), &z)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((es.values[0] + 0.5).abs() < 1e-15 && (es.values[1] - 0.5).abs() < 1e-15);
        assert!((es.vectors[0][0] - r).abs() < 1e-15 && (es.vectors[0][1] + r).abs() < 1e-15);
        assert!((es.vectors[1][0] - r).abs() < 1e-15 && (es.vectors[1][1] - r).abs() < 1e-15);
        let nu = rooted_spectral_measure(&es, Some(0));
        assert_eq!(nu.atoms.len(), 2);
        assert!((nu.moment(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn three_interval_measure() {
        let z = line();
        let a = Animal::from_vertices(&z, [-1, 0, 1]);
        let pa = build_pa(&a, &z);
        let nu = rooted_spectral_measure(&eigensolve(&pa).unwrap(), pa.root);
        // the antisymmetric eigenvector at 0 vanishes at the centre
        assert_eq!(nu.atoms.len(), 2);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((nu.atoms[0].value + r).abs() < 1e-12 && (nu.atoms[0].mass - 0.5).abs() < 1e-12);
        assert!((nu.atoms[1].value - r).abs() < 1e-12 && (nu.atoms[1].mass - 0.5).abs() < 1e-12);
        assert!((nu.moment(2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_animal_measure() {
        let es = EigenSystem { values: vec![], vectors: vec![], residuals: vec![] };
        let nu = rooted_spectral_measure(&es, None);
        assert_eq!(nu.atoms, vec![Atom { value: 0.0, mass: 1.0 }]);
        let pa = build_pa(&Animal::empty(0i64), &line());
        assert_eq!(pa.return_probabilities::<Rational>(2), vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)]);
    }

    #[test]
    fn small_point_spectra() {
        let z = line();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let lambda = point_spectrum(&z, 3, Mode::Site).unwrap();
        let expected = [-r, -0.5, 0.0, 0.5, r];
        assert_eq!(lambda.len(), expected.len());
        for (a, b) in lambda.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(point_spectrum(&z, 0, Mode::Site).unwrap(), vec![0.0]);
    }

    #[test]
    fn qr_and_jacobi_agree() {
        let z = line();
        let a = Animal::from_vertices(&z, 0..60);
        let pa = build_pa(&a, &z);
        let fast = eigenvalues(&pa).unwrap();
        let slow = eigensolve(&pa).unwrap().values;
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn merge_rule() {
        let m = SpectralMeasure::from_atoms(vec![
            Atom { value: 0.5, mass: 0.25 },
            Atom { value: 0.5 + 1e-12, mass: 0.25 },
            Atom { value: -0.5, mass: 0.5 },
        ]);
        assert_eq!(m.atoms.len(), 2);
        assert!((m.atoms[1].mass - 0.5).abs() < 1e-15);
        assert_eq!(dedup_sorted(vec![0.1, -0.0, 0.1 + 1e-10, 0.0]), vec![0.0, 0.1]);
    }
}
