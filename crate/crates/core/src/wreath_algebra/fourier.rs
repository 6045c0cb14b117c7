//! Diagonalization over a nontrivial abelian stabilizer `G_A`.
//!
//! `G_A = {x : xA = A}` acts freely on `A`. For every character `π` of `G_A`
//! the functions `e_{k,π}(z a_k) = π(z) / √|G_A|`, one per orbit `G_A a_k`,
//! span a `P_A`-invariant subspace. Diagonalizing the Hermitian block
//! `M^{(π)}` of `P_A` in that basis gives `π`-covariant eigenvectors `v`, and
//! `σ = ν_{A,dA} * v / √|G_A|` is the measure of a partial isometry whose
//! range is an eigenspace of right convolution by `μ̃`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use super::{WreathAlgebra, WreathMeasure};
use crate::animal_enum::Animal;
use crate::cluster_spectrum::{build_pa, eigensolve};
use crate::error::{Error, Result};
use crate::group_core::{Group, GroupOracle};
use crate::scalar::{Complex64, Rational, Scalar};

/// `{x ∈ A : xA = A}`, sorted. Since `e_G ∈ A`, any such `x` lies in `A`.
pub fn stabilizer<G: Group>(oracle: &GroupOracle<G>, a: &Animal<G::Elem>) -> Vec<G::Elem> {
    a.vertices
        .iter()
        .filter(|x| {
            let mut moved: Vec<G::Elem> = a.vertices.iter().map(|y| oracle.multiply(x, y)).collect();
            moved.sort();
            moved == a.vertices
        })
        .cloned()
        .collect()
}

/// Characters of a finite abelian group given by its element list (which
/// must contain the identity). Row `c` holds `k` with
/// `π_c(elems[i]) = exp(2πi k / n)`, `n = elems.len()`; row 0 is trivial.
pub fn characters<G: Group>(oracle: &GroupOracle<G>, elems: &[G::Elem]) -> Result<Vec<Vec<u64>>> {
    let n = elems.len() as u64;
    for x in elems {
        for y in elems {
            if oracle.multiply(x, y) != oracle.multiply(y, x) {
                return Err(Error::NonAbelianStabilizer(elems.len()));
            }
        }
    }
    let pos = |x: &G::Elem| elems.iter().position(|y| y == x).expect("closed under multiplication");
    let e = oracle.identity();
    // greedy generating set
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![pos(&e)];
    for (i, x) in elems.iter().enumerate() {
        if span.contains(&i) {
            continue;
        }
        gens.push(i);
        let mut frontier = span.clone();
        while let Some(j) = frontier.pop() {
            let y = pos(&oracle.multiply(&elems[j], x));
            if !span.contains(&y) {
                span.push(y);
                frontier.push(y);
            }
        }
    }
    let mut table = Vec::new();
    let total = n.pow(gens.len() as u32);
    for code in 0..total {
        let images: Vec<u64> = (0..gens.len()).map(|g| (code / n.pow(g as u32)) % n).collect();
        let mut value: Vec<Option<u64>> = vec![None; elems.len()];
        value[pos(&e)] = Some(0);
        let mut queue = vec![pos(&e)];
        let mut ok = true;
        while let Some(i) = queue.pop() {
            let vi = value[i].unwrap();
            for (g, &gi) in gens.iter().enumerate() {
                let j = pos(&oracle.multiply(&elems[i], &elems[gi]));
                let vj = (vi + images[g]) % n;
                match value[j] {
                    Some(v) if v != vj => ok = false,
                    Some(_) => {}
                    None => {
                        value[j] = Some(vj);
                        queue.push(j);
                    }
                }
            }
        }
        if ok {
            table.push(value.into_iter().map(Option::unwrap).collect());
        }
    }
    table.sort();
    Ok(table)
}

fn root_of_unity(k: u64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
}

#[derive(Clone, Debug)]
pub struct Isometry<E> {
    /// Row of [`FourierDiagonalization::characters`].
    pub character: usize,
    pub eigenvalue: f64,
    /// Unit eigenvector of `P_A` on the sorted vertex list.
    pub vector: Vec<Complex64>,
    pub sigma: WreathMeasure<Complex64, E>,
}

#[derive(Clone, Debug)]
pub struct FourierDiagonalization<E> {
    pub stabilizer: Vec<E>,
    pub representatives: Vec<E>,
    pub characters: Vec<Vec<u64>>,
    pub isometries: Vec<Isometry<E>>,
}

#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct FourierResiduals {
    /// `max ‖σ * σ* * σ - σ‖₁`.
    pub partial_isometry: f64,
    /// `max ‖σ_b * σ_a*‖₁` over distinct pairs.
    pub orthogonality: f64,
    /// `‖Σ σ* * σ - Σ_k ν_{a_k⁻¹A}‖₁`.
    pub range_sum: f64,
    /// `max ‖σ * μ̃ - λ σ‖₁`.
    pub eigen: f64,
    /// Largest gap between the Fourier eigenvalues and a direct eigensolve.
    pub spectrum: f64,
}

impl FourierResiduals {
    pub fn max(&self) -> f64 {
        [self.partial_isometry, self.orthogonality, self.range_sum, self.eigen, self.spectrum]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Fourier diagonalization of `P_A` over an abelian stabilizer. A trivial
/// stabilizer reduces to the plain eigenbasis.
pub fn abelian_stabilizer_diagonalize<G: Group>(
    alg: &WreathAlgebra<G>,
    a: &Animal<G::Elem>,
) -> Result<FourierDiagonalization<G::Elem>> {
    let oracle = &alg.oracle;
    let stab = stabilizer(oracle, a);
    let chars = characters(oracle, &stab)?;
    let order = stab.len();
    let n = a.size();
    let idx = |x: &G::Elem| a.vertices.binary_search(x).expect("vertex of A");
    let mut covered = vec![false; n];
    let mut reps = Vec::new();
    for (i, x) in a.vertices.iter().enumerate() {
        if !covered[i] {
            reps.push(x.clone());
            for z in &stab {
                covered[idx(&oracle.multiply(z, x))] = true;
            }
        }
    }
    let m = reps.len();
    let pa = build_pa(a, oracle);
    let p = DMatrix::from_fn(n, n, |i, j| Complex64::new(pa.get(i, j), 0.0));
    let scale = 1.0 / (order as f64).sqrt();
    let nu = alg.projection_measure::<Complex64, _>(a);
    let mut isometries = Vec::new();
    for (c, row) in chars.iter().enumerate() {
        let mut basis = DMatrix::<Complex64>::zeros(n, m);
        for (k, ak) in reps.iter().enumerate() {
            for (zi, z) in stab.iter().enumerate() {
                basis[(idx(&oracle.multiply(z, ak)), k)] = root_of_unity(row[zi], order as u64) * scale;
            }
        }
        let block = basis.adjoint() * &p * &basis;
        let block = (&block + block.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = block.symmetric_eigen();
        let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..m)
            .map(|j| {
                let v = &basis * eig.eigenvectors.column(j);
                let mut v: Vec<Complex64> = v.iter().copied().collect();
                if let Some(first) = v.iter().find(|x| x.norm() > 1e-12).copied() {
                    let phase = first.conj() / first.norm();
                    v.iter_mut().for_each(|x| *x *= phase);
                }
                (eig.eigenvalues[j], v)
            })
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (eigenvalue, vector) in pairs {
            let pairs: Vec<(G::Elem, Complex64)> = a.vertices.iter().cloned().zip(vector.iter().copied()).collect();
            let sigma = alg.convolve(&nu, &alg.embed(&pairs))?.scale(&Complex64::new(scale, 0.0));
            isometries.push(Isometry { character: c, eigenvalue, vector, sigma });
        }
    }
    Ok(FourierDiagonalization { stabilizer: stab, representatives: reps, characters: chars, isometries })
}

impl<E: Clone + Ord + std::hash::Hash> FourierDiagonalization<E> {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.isometries.iter().map(|s| s.eigenvalue).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Eigenvalue of `P_A` on the `π`-isotypic block, per character.
    pub fn eigenvalues_by_character(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); self.characters.len()];
        for s in &self.isometries {
            out[s.character].push(s.eigenvalue);
        }
        out
    }

    pub fn verify<G: Group<Elem = E>>(&self, alg: &WreathAlgebra<G>, a: &Animal<E>) -> Result<FourierResiduals> {
        let mu_tilde = alg.mu_tilde::<Rational>()?.map(|x| Complex64::from_rational(x));
        let adjoints: Vec<_> = self.isometries.iter().map(|s| alg.adjoint(&s.sigma)).collect();
        let mut r = FourierResiduals::default();
        for (i, s) in self.isometries.iter().enumerate() {
            let ssa = alg.convolve(&s.sigma, &adjoints[i])?;
            r.partial_isometry = r.partial_isometry.max(alg.convolve(&ssa, &s.sigma)?.l1_distance(&s.sigma)?);
            let lam = Complex64::new(s.eigenvalue, 0.0);
            r.eigen = r.eigen.max(alg.convolve(&s.sigma, &mu_tilde)?.l1_distance(&s.sigma.scale(&lam))?);
            for (j, t) in self.isometries.iter().enumerate() {
                if i != j {
                    r.orthogonality = r.orthogonality.max(alg.convolve(&t.sigma, &adjoints[i])?.l1_norm());
                }
            }
        }
        let mut ranges = alg.zero::<Complex64>();
        for (s, adj) in self.isometries.iter().zip(&adjoints) {
            ranges = ranges.add(&alg.convolve(adj, &s.sigma)?)?;
        }
        let mut target = alg.zero::<Complex64>();
        for ak in &self.representatives {
            target = target.add(&alg.projection_measure(&a.translate(&alg.oracle, ak)))?;
        }
        r.range_sum = ranges.l1_distance(&target)?;
        let direct = eigensolve(&build_pa(a, &alg.oracle))?.values;
        r.spectrum = direct
            .iter()
            .zip(self.eigenvalues())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if direct.len() != self.isometries.len() {
            r.spectrum = f64::INFINITY;
        }
        Ok(r)
    }
}
