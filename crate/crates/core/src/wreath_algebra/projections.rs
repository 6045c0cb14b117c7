//! The projections `ν_{A,dA}` (site) and `ν_{E(A),∂A}` (bond), and the
//! identities tying them to the killed walk `P_A`.

use super::{LampSite, ProductMeasure, WreathAlgebra, WreathMeasure};
use crate::animal_enum::{Animal, BondAnimal, Cluster};
use crate::cluster_spectrum::build_pa;
use crate::error::Result;
use crate::group_core::{Edge, Group};
use crate::scalar::{Rational, Scalar};

/// Lamp sites fixed to "randomised" (open) and "reset" (closed) by the
/// projection of a cluster.
pub trait LampSupport<E> {
    fn open_sites(&self) -> Vec<LampSite<E>>;
    fn closed_sites(&self) -> Vec<LampSite<E>>;
}

impl<E: Clone> LampSupport<E> for Animal<E> {
    fn open_sites(&self) -> Vec<LampSite<E>> {
        self.vertices.iter().cloned().map(LampSite::Vertex).collect()
    }

    fn closed_sites(&self) -> Vec<LampSite<E>> {
        self.boundary.iter().cloned().map(LampSite::Vertex).collect()
    }
}

impl<E: Clone> LampSupport<E> for BondAnimal<E> {
    fn open_sites(&self) -> Vec<LampSite<E>> {
        self.edges.iter().cloned().map(LampSite::Edge).collect()
    }

    fn closed_sites(&self) -> Vec<LampSite<E>> {
        self.boundary_edges.iter().cloned().map(LampSite::Edge).collect()
    }
}

/// Recovers `x` as `n/d` with `d <= max_den` when `|x - n/d| < 1e-10`.
pub fn rationalize(x: f64, max_den: i64) -> Option<Rational> {
    (1..=max_den).find_map(|d| {
        let n = (x * d as f64).round();
        ((x - n / d as f64).abs() < 1e-10).then(|| Rational::new((n as i64).into(), d.into()))
    })
}

impl<G: Group> WreathAlgebra<G> {
    pub fn projection_product<C: LampSupport<G::Elem>>(&self, a: &C) -> ProductMeasure<G::Elem> {
        ProductMeasure::from_sites(self.q(), &a.open_sites(), &a.closed_sites())
    }

    /// `ν_{A,dA}` or `ν_{E(A),∂A}`, expanded.
    pub fn projection_measure<S: Scalar, C: LampSupport<G::Elem>>(&self, a: &C) -> WreathMeasure<S, G::Elem> {
        self.projection_product(a).to_sparse(self)
    }

    /// Whether `ν_A * ν_B` vanishes, by full sparse convolution.
    pub fn check_orthogonality<C: LampSupport<G::Elem>>(&self, a: &C, b: &C) -> Result<bool> {
        let pa = self.projection_measure::<Rational, _>(a);
        let pb = self.projection_measure::<Rational, _>(b);
        Ok(self.convolve(&pa, &pb)?.is_zero())
    }

    /// `ν * f * μ̃ - ν * (P_A f)` for `f` given on the sorted vertex list of
    /// `a`. The empty site animal gives `ν̄_e * μ̃`.
    pub fn intertwine_defect<S, C>(
        &self,
        a: &C,
        f: &[S],
        mu_tilde: &WreathMeasure<S, G::Elem>,
    ) -> Result<WreathMeasure<S, G::Elem>>
    where
        S: Scalar,
        C: LampSupport<G::Elem> + Cluster<G::Elem>,
    {
        let nu = self.projection_measure::<S, _>(a);
        if a.vertices().is_empty() {
            return self.convolve(&nu, mu_tilde);
        }
        let pa = build_pa(a, &self.oracle);
        let pf = pa.apply(f);
        let lift = |v: &[S]| {
            let pairs: Vec<(G::Elem, S)> = a.vertices().iter().cloned().zip(v.iter().cloned()).collect();
            self.embed(&pairs)
        };
        let left = self.convolve_all(&[&nu, &lift(f), mu_tilde])?;
        let right = self.convolve(&nu, &lift(&pf))?;
        left.sub(&right)
    }

    /// `‖ν * f * μ̃ - ν * (P_A f)‖₁`.
    pub fn intertwine_check<S, C>(&self, a: &C, f: &[S], mu_tilde: &WreathMeasure<S, G::Elem>) -> Result<f64>
    where
        S: Scalar,
        C: LampSupport<G::Elem> + Cluster<G::Elem>,
    {
        Ok(self.intertwine_defect(a, f, mu_tilde)?.l1_norm())
    }

    /// `σ = ν * f` for `f` on the sorted vertex list of `a`.
    pub fn sigma<S, C>(&self, a: &C, f: &[S]) -> Result<WreathMeasure<S, G::Elem>>
    where
        S: Scalar,
        C: LampSupport<G::Elem> + Cluster<G::Elem>,
    {
        let nu = self.projection_measure::<S, _>(a);
        let pairs: Vec<(G::Elem, S)> = a.vertices().iter().cloned().zip(f.iter().cloned()).collect();
        self.convolve(&nu, &self.embed(&pairs))
    }

    /// `‖σ * μ̃ - λ σ‖₁` with `σ = ν * f`.
    pub fn eigen_residual<S, C>(&self, a: &C, f: &[S], lambda: &S, mu_tilde: &WreathMeasure<S, G::Elem>) -> Result<f64>
    where
        S: Scalar,
        C: LampSupport<G::Elem> + Cluster<G::Elem>,
    {
        let sigma = self.sigma(a, f)?;
        let left = self.convolve(&sigma, mu_tilde)?;
        Ok(left.sub(&sigma.scale(lambda))?.l1_norm())
    }

    /// Whether `ν_{A,dA} * δ_y = δ_y * ν_{B,dB}` with `B = y⁻¹A`.
    pub fn translate_identity(&self, a: &Animal<G::Elem>, y: &G::Elem) -> Result<bool> {
        let b = a.translate(&self.oracle, y);
        let left = self.convolve(&self.projection_measure::<Rational, _>(a), &self.delta_at(y))?;
        let right = self.convolve(&self.delta_at(y), &self.projection_measure::<Rational, _>(&b))?;
        Ok(left == right)
    }

    /// Bond analogue of [`translate_identity`](Self::translate_identity).
    pub fn bond_translate_identity(&self, a: &BondAnimal<G::Elem>, y: &G::Elem) -> Result<bool> {
        let yi = self.oracle.inverse(y);
        let moved = BondAnimal::from_edges(
            &self.oracle,
            a.edges
                .iter()
                .map(|Edge(u, v)| Edge::new(self.oracle.multiply(&yi, u), self.oracle.multiply(&yi, v))),
        );
        let left = self.convolve(&self.projection_measure::<Rational, _>(a), &self.delta_at(y))?;
        let right = self.convolve(&self.delta_at(y), &self.projection_measure::<Rational, _>(&moved))?;
        Ok(left == right)
    }
}
