//! Partial isometries built from an orthonormal eigenbasis of `P_A` when
//! the translates `g⁻¹A`, `g ∈ A`, are pairwise distinct.

use std::collections::{BTreeMap, HashMap};

use super::{fourier::stabilizer, WreathAlgebra, WreathMeasure};
use crate::animal_enum::Animal;
use crate::error::Result;
use crate::group_core::Group;

#[derive(Clone, Debug)]
pub struct IsometryProducts<E> {
    /// `products[x][y] = ν_{A,dA} * f_y * f̌_x * ν_{A,dA}`.
    pub products: Vec<Vec<WreathMeasure<f64, E>>>,
    /// Largest `‖products[x][y] - δ_{xy} ν_{A,dA}‖₁`.
    pub max_deviation: f64,
}

#[derive(Clone, Debug)]
pub enum PartialIsometryOutcome<E> {
    Verified(IsometryProducts<E>),
    /// Some `g ≠ e` in `A` fixes `A`; the products are not computed.
    TorsionObstruction { stabilizer: Vec<E> },
}

/// Computes the measures of `S*_{A,x} S_{A,y}` for an orthonormal system
/// `eigenvectors` on the sorted vertex list of a nonempty animal.
pub fn partial_isometry_products<G: Group>(
    alg: &WreathAlgebra<G>,
    a: &Animal<G::Elem>,
    eigenvectors: &[Vec<f64>],
) -> Result<PartialIsometryOutcome<G::Elem>> {
    let stab = stabilizer(&alg.oracle, a);
    if stab.len() > 1 {
        return Ok(PartialIsometryOutcome::TorsionObstruction { stabilizer: stab });
    }
    // ν * f_y * f̌_x * ν = Σ_{g,h} f_y(g) f_x(h) ν * δ_{gh⁻¹} * ν, and
    // ν * δ_d * ν = δ_d * (L_{d⁻¹}ν * ν) with both factors in product form.
    let oracle = &alg.oracle;
    let lamp = alg.lamp.clone();
    let nu_product = alg.projection_product(a);
    let nu = nu_product.to_sparse::<f64, G>(alg);
    let mut shifts: HashMap<G::Elem, WreathMeasure<f64, G::Elem>> = HashMap::new();
    let mut pairs = Vec::with_capacity(a.size() * a.size());
    for (i, g) in a.vertices.iter().enumerate() {
        for (j, h) in a.vertices.iter().enumerate() {
            let d = oracle.multiply(g, &oracle.inverse(h));
            if !shifts.contains_key(&d) {
                let inner = nu_product.translate(alg, &oracle.inverse(&d)).convolve(&nu_product, Some(&lamp));
                let k = if inner.is_zero() { alg.zero() } else { alg.convolve(&alg.delta_at(&d), &inner.to_sparse(alg))? };
                shifts.insert(d.clone(), k);
            }
            pairs.push((i, j, d));
        }
    }
    let mut products = Vec::with_capacity(eigenvectors.len());
    let mut max_deviation = 0.0f64;
    for (x, fx) in eigenvectors.iter().enumerate() {
        let mut row = Vec::with_capacity(eigenvectors.len());
        for (y, fy) in eigenvectors.iter().enumerate() {
            let mut coeff: BTreeMap<&G::Elem, f64> = BTreeMap::new();
            for (i, j, d) in &pairs {
                *coeff.entry(d).or_insert(0.0) += fy[*i] * fx[*j];
            }
            let mut p = alg.zero();
            for (d, c) in coeff {
                let k = &shifts[d];
                if c != 0.0 && !k.is_empty() {
                    p = p.add(&k.scale(&c))?;
                }
            }
            let target = if x == y { nu.clone() } else { alg.zero() };
            max_deviation = max_deviation.max(p.l1_distance(&target)?);
            row.push(p);
        }
        products.push(row);
    }
    Ok(PartialIsometryOutcome::Verified(IsometryProducts { products, max_deviation }))
}
