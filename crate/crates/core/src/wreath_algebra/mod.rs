//! Finitely supported measures on the wreath product `H ≀ G` and their
//! convolution algebra.
//!
//! Elements of `H ≀ G` are pairs `(η, g)` of a finitely supported lamp
//! configuration and a position, multiplied by
//! `(η, g)(η', g') = (η · L_g η', g g')` where `(L_g η')(x) = η'(g⁻¹ x)`.
//! In bond mode the lamps sit on the unoriented Cayley edges and `L_g`
//! moves `[x, y]` to `[g x, g y]`.
//!
//! Measures act on `ℓ²(H ≀ G)` by right convolution, `F ↦ F * m`, so the
//! operator of `a` followed by that of `b` is the operator of `b * a`, and
//! the adjoint of `m` is `m*(w) = conj(m(w⁻¹))`.

mod fourier;
mod isometry;
mod product;
mod projections;
mod sinc;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::BuildHasherDefault;

use serde::Serialize;

pub use fourier::{abelian_stabilizer_diagonalize, characters, stabilizer, FourierDiagonalization, FourierResiduals, Isometry};
pub use isometry::{partial_isometry_products, IsometryProducts, PartialIsometryOutcome};
pub use product::ProductMeasure;
pub use projections::{rationalize, LampSupport};
pub use sinc::{sinc_measure, sinc_residual, SincResidual};

use crate::animal_enum::Mode;
use crate::error::{Error, Result};
use crate::group_core::{Edge, Group, GroupOracle, LampGroup};
use crate::scalar::{ratio, Scalar};

/// A lamp position: a vertex (site mode) or an edge (bond mode).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LampSite<E> {
    Vertex(E),
    Edge(Edge<E>),
}

/// Finitely supported `η`, sorted by site, never storing `e_H = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct LampConfig<E>(Vec<(LampSite<E>, u32)>);

impl<E: Ord> LampConfig<E> {
    pub fn identity() -> Self {
        LampConfig(Vec::new())
    }

    /// Later entries for the same site overwrite earlier ones.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (LampSite<E>, u32)>) -> Self {
        let mut v: Vec<(LampSite<E>, u32)> = pairs.into_iter().collect();
        v.reverse();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.dedup_by(|a, b| a.0 == b.0);
        v.retain(|(_, h)| *h != 0);
        LampConfig(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, site: &LampSite<E>) -> u32 {
        self.0
            .binary_search_by(|(s, _)| s.cmp(site))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn entries(&self) -> &[(LampSite<E>, u32)] {
        &self.0
    }

    pub fn support(&self) -> impl Iterator<Item = &LampSite<E>> {
        self.0.iter().map(|(s, _)| s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WreathPoint<E> {
    pub config: LampConfig<E>,
    pub position: E,
}

type AtomMap<S, E> = HashMap<WreathPoint<E>, S, BuildHasherDefault<DefaultHasher>>;

/// A finitely supported signed (or complex) measure on `H ≀ G`. Exact zeros
/// are never stored.
#[derive(Clone, Debug)]
pub struct WreathMeasure<S, E> {
    mode: Mode,
    lamp_order: u32,
    atoms: AtomMap<S, E>,
}

impl<S: PartialEq, E: Eq + std::hash::Hash> PartialEq for WreathMeasure<S, E> {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode && self.lamp_order == other.lamp_order && self.atoms == other.atoms
    }
}

impl<S: Scalar, E: Clone + Ord + std::hash::Hash> WreathMeasure<S, E> {
    pub fn zero(mode: Mode, lamp_order: u32) -> Self {
        WreathMeasure { mode, lamp_order, atoms: AtomMap::default() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn lamp_order(&self) -> u32 {
        self.lamp_order
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Exactly zero (no stored atoms).
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn get(&self, w: &WreathPoint<E>) -> S {
        self.atoms.get(w).cloned().unwrap_or_else(S::zero)
    }

    /// Value at `(𝟙, position)`.
    pub fn at_position(&self, position: &E) -> S {
        self.get(&WreathPoint { config: LampConfig::identity(), position: position.clone() })
    }

    pub fn add_atom(&mut self, w: WreathPoint<E>, value: S) {
        use std::collections::hash_map::Entry;
        match self.atoms.entry(w) {
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + value;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                if !value.is_zero() {
                    v.insert(value);
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WreathPoint<E>, &S)> {
        self.atoms.iter()
    }

    /// Atoms in canonical order.
    pub fn sorted(&self) -> Vec<(&WreathPoint<E>, &S)> {
        let mut v: Vec<_> = self.atoms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.mode != other.mode || self.lamp_order != other.lamp_order {
            return Err(Error::AlgebraMismatch(format!(
                "{} / |H|={} vs {} / |H|={}",
                self.mode, self.lamp_order, other.mode, other.lamp_order
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.mode, self.lamp_order);
        for (w, v) in &self.atoms {
            out.add_atom(w.clone(), c.clone() * v.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, v) in &other.atoms {
            out.add_atom(w.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, v) in &other.atoms {
            out.add_atom(w.clone(), -v.clone());
        }
        Ok(out)
    }

    pub fn total_mass(&self) -> S {
        let mut acc = S::zero();
        for v in self.atoms.values() {
            acc = acc + v.clone();
        }
        acc
    }

    pub fn l1_norm(&self) -> f64 {
        self.atoms.values().map(Scalar::abs_f64).sum()
    }

    /// `‖self - other‖₁`.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.l1_norm())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> WreathMeasure<T, E> {
        let mut out = WreathMeasure::zero(self.mode, self.lamp_order);
        for (w, v) in &self.atoms {
            out.add_atom(w.clone(), f(v));
        }
        out
    }
}

/// The wreath product `H ≀ G` in a given mode, with the operations that need
/// the group law.
#[derive(Clone, Debug)]
pub struct WreathAlgebra<G: Group> {
    pub oracle: GroupOracle<G>,
    pub lamp: LampGroup,
    pub mode: Mode,
}

impl<G: Group> WreathAlgebra<G> {
    pub fn new(oracle: GroupOracle<G>, lamp: LampGroup, mode: Mode) -> Self {
        WreathAlgebra { oracle, lamp, mode }
    }

    pub fn q(&self) -> u32 {
        self.lamp.order()
    }

    pub fn identity_point(&self) -> WreathPoint<G::Elem> {
        WreathPoint { config: LampConfig::identity(), position: self.oracle.identity() }
    }

    pub fn translate_site(&self, g: &G::Elem, site: &LampSite<G::Elem>) -> LampSite<G::Elem> {
        match site {
            LampSite::Vertex(x) => LampSite::Vertex(self.oracle.multiply(g, x)),
            LampSite::Edge(Edge(a, b)) => {
                LampSite::Edge(Edge::new(self.oracle.multiply(g, a), self.oracle.multiply(g, b)))
            }
        }
    }

    /// `L_g η`.
    pub fn translate_config(&self, g: &G::Elem, eta: &LampConfig<G::Elem>) -> LampConfig<G::Elem> {
        let mut v: Vec<_> = eta.0.iter().map(|(s, h)| (self.translate_site(g, s), *h)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        LampConfig(v)
    }

    pub fn multiply(&self, u: &WreathPoint<G::Elem>, v: &WreathPoint<G::Elem>) -> WreathPoint<G::Elem> {
        let moved = self.translate_config(&u.position, &v.config);
        let (a, b) = (&u.config.0, &moved.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let h = self.lamp.multiply(a[i].1, b[j].1);
                    if h != 0 {
                        out.push((a[i].0.clone(), h));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        WreathPoint { config: LampConfig(out), position: self.oracle.multiply(&u.position, &v.position) }
    }

    /// `(η, g)⁻¹ = (L_{g⁻¹} η⁻¹, g⁻¹)`.
    pub fn inverse(&self, u: &WreathPoint<G::Elem>) -> WreathPoint<G::Elem> {
        let gi = self.oracle.inverse(&u.position);
        let inv = LampConfig(u.config.0.iter().map(|(s, h)| (s.clone(), self.lamp.inverse(*h))).collect());
        WreathPoint { config: self.translate_config(&gi, &inv), position: gi }
    }

    pub fn zero<S: Scalar>(&self) -> WreathMeasure<S, G::Elem> {
        WreathMeasure::zero(self.mode, self.q())
    }

    pub fn delta<S: Scalar>(&self, w: WreathPoint<G::Elem>) -> WreathMeasure<S, G::Elem> {
        let mut m = self.zero();
        m.add_atom(w, S::one());
        m
    }

    /// `δ_{(𝟙, g)}`.
    pub fn delta_at<S: Scalar>(&self, g: &G::Elem) -> WreathMeasure<S, G::Elem> {
        self.delta(WreathPoint { config: LampConfig::identity(), position: g.clone() })
    }

    /// `Σ_x f(x) δ_{(𝟙, x)}`.
    pub fn embed<S: Scalar>(&self, f: &[(G::Elem, S)]) -> WreathMeasure<S, G::Elem> {
        let mut m = self.zero();
        for (x, v) in f {
            m.add_atom(WreathPoint { config: LampConfig::identity(), position: x.clone() }, v.clone());
        }
        m
    }

    /// `(a * b)(w) = Σ_{u v = w} a(u) b(v)`.
    pub fn convolve<S: Scalar>(
        &self,
        a: &WreathMeasure<S, G::Elem>,
        b: &WreathMeasure<S, G::Elem>,
    ) -> Result<WreathMeasure<S, G::Elem>> {
        self.convolve_capped(a, b, usize::MAX)
    }

    /// [`WreathAlgebra::convolve`] that gives up as soon as the product has
    /// more than `cap` atoms (cancellations are not waited for).
    pub fn convolve_capped<S: Scalar>(
        &self,
        a: &WreathMeasure<S, G::Elem>,
        b: &WreathMeasure<S, G::Elem>,
        cap: usize,
    ) -> Result<WreathMeasure<S, G::Elem>> {
        a.check_compatible(b)?;
        self.check_measure(a)?;
        let mut acc: AtomMap<S, G::Elem> = AtomMap::default();
        for (u, x) in &a.atoms {
            for (v, y) in &b.atoms {
                let w = self.multiply(u, v);
                acc.entry(w).or_insert_with(S::zero).mul_add_assign(x, y);
            }
            if acc.len() > cap {
                return Err(Error::cap("support of μ̃^(n) or another convolution", cap));
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(WreathMeasure { mode: a.mode, lamp_order: a.lamp_order, atoms: acc })
    }

    /// Left-to-right product of several measures.
    pub fn convolve_all<S: Scalar>(&self, factors: &[&WreathMeasure<S, G::Elem>]) -> Result<WreathMeasure<S, G::Elem>> {
        let mut acc = self.delta(self.identity_point());
        for f in factors {
            acc = self.convolve(&acc, f)?;
        }
        Ok(acc)
    }

    /// `(a * b)(w) = Σ_u a(u) b(u⁻¹ w)`, without forming `a * b`.
    pub fn convolve_at<S: Scalar>(
        &self,
        a: &WreathMeasure<S, G::Elem>,
        b: &WreathMeasure<S, G::Elem>,
        w: &WreathPoint<G::Elem>,
    ) -> Result<S> {
        a.check_compatible(b)?;
        let mut acc = S::zero();
        for (u, x) in &a.atoms {
            let v = self.multiply(&self.inverse(u), w);
            if let Some(y) = b.atoms.get(&v) {
                acc.mul_add_assign(x, y);
            }
        }
        Ok(acc)
    }

    /// `m*(w) = conj(m(w⁻¹))`.
    pub fn adjoint<S: Scalar>(&self, m: &WreathMeasure<S, G::Elem>) -> WreathMeasure<S, G::Elem> {
        let mut out = self.zero();
        for (w, v) in &m.atoms {
            out.add_atom(self.inverse(w), v.conj());
        }
        out
    }

    pub fn is_symmetric<S: Scalar>(&self, m: &WreathMeasure<S, G::Elem>) -> bool {
        m.atoms.iter().all(|(w, v)| m.get(&self.inverse(w)) == *v)
    }

    fn check_measure<S: Scalar>(&self, m: &WreathMeasure<S, G::Elem>) -> Result<()> {
        if m.mode != self.mode || m.lamp_order != self.q() {
            return Err(Error::AlgebraMismatch(format!(
                "measure is {} / |H|={}, algebra is {} / |H|={}",
                m.mode,
                m.lamp_order,
                self.mode,
                self.q()
            )));
        }
        Ok(())
    }

    /// `ν_x`: equidistribution of the lamp at `site`, position `e_G`.
    pub fn nu<S: Scalar>(&self, site: &LampSite<G::Elem>) -> WreathMeasure<S, G::Elem> {
        ProductMeasure::single(site.clone(), self.lamp.order(), false).to_sparse(self)
    }

    /// `ν̄_x = δ_{(𝟙, e)} - ν_x`.
    pub fn nu_bar<S: Scalar>(&self, site: &LampSite<G::Elem>) -> WreathMeasure<S, G::Elem> {
        ProductMeasure::single(site.clone(), self.lamp.order(), true).to_sparse(self)
    }

    /// `ν` at the identity: the vertex `e_G` in site mode.
    pub fn nu_identity<S: Scalar>(&self) -> WreathMeasure<S, G::Elem> {
        self.nu(&LampSite::Vertex(self.oracle.identity()))
    }

    /// `μ` as a measure on `H ≀ G` with all lamps off.
    pub fn mu<S: Scalar>(&self) -> WreathMeasure<S, G::Elem> {
        let mut m = self.zero();
        for s in self.oracle.generators() {
            m.add_atom(
                WreathPoint { config: LampConfig::identity(), position: s.elem.clone() },
                S::from_rational(&s.weight),
            );
        }
        m
    }

    /// The switch-walk-switch law: `ν * μ * ν` (site mode) or
    /// `Σ_s μ(s) ν_{[e,s]} * δ_s` (bond mode).
    pub fn mu_tilde<S: Scalar>(&self) -> Result<WreathMeasure<S, G::Elem>> {
        match self.mode {
            Mode::Site => {
                let nu = self.nu_identity();
                self.convolve_all(&[&nu, &self.mu(), &nu])
            }
            Mode::Bond => {
                let e = self.oracle.identity();
                let q = self.q() as i64;
                let mut m = self.zero();
                for s in self.oracle.generators() {
                    let w = S::from_rational(&(&s.weight * ratio(1, q)));
                    let site = LampSite::Edge(Edge::new(e.clone(), s.elem.clone()));
                    for h in 0..self.q() {
                        m.add_atom(
                            WreathPoint { config: LampConfig::from_pairs([(site.clone(), h)]), position: s.elem.clone() },
                            w.clone(),
                        );
                    }
                }
                Ok(m)
            }
        }
    }

    /// `μ̃^{(n)}(𝟙, e)` for `n = 0..=n_max` by repeated convolution.
    pub fn return_probabilities<S: Scalar>(&self, n_max: usize, atom_cap: usize) -> Result<Vec<S>> {
        let step = self.mu_tilde::<S>()?;
        let mut power = self.delta(self.identity_point());
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            out.push(power.get(&self.identity_point()));
            if n < n_max {
                power = self.convolve_capped(&power, &step, atom_cap)?;
            }
        }
        Ok(out)
    }
}
