//! Measures at position `e_G` that factor over lamp sites.
//!
//! `ν_{A,dA}` and its bond analogue are products of commuting one-site
//! measures. Two such products convolve site by site, which makes
//! idempotency and orthogonality checks cheap even when the expanded
//! measures have thousands of atoms.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{LampConfig, LampSite, WreathAlgebra, WreathMeasure, WreathPoint};
use crate::group_core::{Group, LampGroup};
use crate::scalar::{ratio, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductMeasure<E> {
    q: u32,
    /// Per-site measure on `H`, indexed by lamp state. Absent sites carry
    /// `δ_{e_H}`.
    factors: BTreeMap<LampSite<E>, Vec<Rational>>,
}

impl<E: Clone + Ord + std::hash::Hash> ProductMeasure<E> {
    pub fn unit(q: u32) -> Self {
        ProductMeasure { q, factors: BTreeMap::new() }
    }

    /// `ν_x`, or `ν̄_x` when `bar` is set.
    pub fn single(site: LampSite<E>, q: u32, bar: bool) -> Self {
        let mut m = Self::unit(q);
        m.factors.insert(site, Self::factor(q, bar));
        m
    }

    fn factor(q: u32, bar: bool) -> Vec<Rational> {
        let u = ratio(1, q as i64);
        (0..q)
            .map(|h| match (bar, h) {
                (false, _) => u.clone(),
                (true, 0) => Rational::one() - &u,
                (true, _) => -u.clone(),
            })
            .collect()
    }

    /// `Π_{x ∈ open} ν_x Π_{y ∈ closed} ν̄_y`.
    pub fn from_sites(q: u32, open: &[LampSite<E>], closed: &[LampSite<E>]) -> Self {
        let mut m = Self::unit(q);
        for s in open {
            m = m.convolve(&Self::single(s.clone(), q, false), None);
        }
        for s in closed {
            m = m.convolve(&Self::single(s.clone(), q, true), None);
        }
        m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn sites(&self) -> impl Iterator<Item = &LampSite<E>> {
        self.factors.keys()
    }

    /// Site-wise convolution. `lamp` supplies the multiplication of `H`;
    /// `None` uses `Z_q`, which is enough for products of `ν` and `ν̄`
    /// (both are class functions supported on all of `H` or on `e_H`).
    pub fn convolve(&self, other: &Self, lamp: Option<&LampGroup>) -> Self {
        let q = self.q;
        let mul = |a: u32, b: u32| lamp.map(|l| l.multiply(a, b)).unwrap_or((a + b) % q);
        let mut factors = self.factors.clone();
        for (site, y) in &other.factors {
            match factors.get_mut(site) {
                Some(x) => {
                    let mut out = vec![Rational::zero(); q as usize];
                    for a in 0..q {
                        if x[a as usize].is_zero() {
                            continue;
                        }
                        for b in 0..q {
                            out[mul(a, b) as usize] += &x[a as usize] * &y[b as usize];
                        }
                    }
                    *x = out;
                }
                None => {
                    factors.insert(site.clone(), y.clone());
                }
            }
        }
        ProductMeasure { q, factors }
    }

    /// `L_g` applied to every site, i.e. `δ_g * m * δ_{g⁻¹}`.
    pub fn translate<G: Group<Elem = E>>(&self, alg: &WreathAlgebra<G>, g: &E) -> Self {
        let factors = self.factors.iter().map(|(s, f)| (alg.translate_site(g, s), f.clone())).collect();
        ProductMeasure { q: self.q, factors }
    }

    pub fn is_zero(&self) -> bool {
        self.factors.values().any(|f| f.iter().all(Zero::is_zero))
    }

    /// Value at `(𝟙, e_G)`.
    pub fn value_at_identity(&self) -> Rational {
        self.factors.values().map(|f| f[0].clone()).product()
    }

    pub fn to_sparse<S: Scalar, G: Group<Elem = E>>(&self, alg: &WreathAlgebra<G>) -> WreathMeasure<S, E> {
        let mut partial: Vec<(Vec<(LampSite<E>, u32)>, Rational)> = vec![(Vec::new(), Rational::one())];
        if self.is_zero() {
            return alg.zero();
        }
        for (site, f) in &self.factors {
            let mut next = Vec::with_capacity(partial.len() * self.q as usize);
            for (cfg, w) in &partial {
                for (h, c) in f.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut cfg = cfg.clone();
                    if h != 0 {
                        cfg.push((site.clone(), h as u32));
                    }
                    next.push((cfg, w * c));
                }
            }
            partial = next;
        }
        let mut m = alg.zero();
        let e = alg.oracle.identity();
        for (cfg, w) in partial {
            m.add_atom(
                WreathPoint { config: LampConfig(cfg), position: e.clone() },
                S::from_rational(&w),
            );
        }
        m
    }
}
