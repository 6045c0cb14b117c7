//! The projection, intertwining and diagonalization suite behind
//! `lampspec algebra`.

use num_traits::Zero;
use serde::Serialize;

use crate::animal_enum::{enumerate_bond_animals, enumerate_site_animals, finite_mass, Cluster, Mode};
use crate::cluster_spectrum::{build_pa, eigensolve};
use crate::error::{Error, Result};
use crate::group_core::Group;
use crate::scalar::{Rational, Scalar};
use crate::wreath_algebra::{
    abelian_stabilizer_diagonalize, partial_isometry_products, rationalize, LampSupport, PartialIsometryOutcome,
    WreathAlgebra,
};

/// Tolerance for eigen relations computed in double precision.
pub const EIGEN_TOLERANCE: f64 = 1e-12;

/// Tolerance for `S*_x S_y = δ_{xy} ν_{A,dA}`.
pub const ISOMETRY_TOLERANCE: f64 = 1e-13;

/// Tolerance for the character-basis construction over a stabilizer.
pub const FOURIER_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AlgebraCheck {
    pub name: String,
    /// Number of animals (or animal pairs) the check ran over.
    pub cases: usize,
    /// Failing cases of an exact check.
    pub failures: usize,
    /// Largest residual of a floating-point check (or exact gap).
    pub max_residual: f64,
    pub tolerance: f64,
    pub exact: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AlgebraReport {
    pub checks: Vec<AlgebraCheck>,
    /// Animals with a nontrivial stabilizer, as debug strings.
    pub torsion_obstructions: Vec<String>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl AlgebraReport {
    fn exact(&mut self, name: &str, cases: usize, failures: usize, gap: f64) {
        self.checks.push(AlgebraCheck {
            name: name.into(),
            cases,
            failures,
            max_residual: gap,
            tolerance: 0.0,
            exact: true,
            pass: failures == 0,
        });
    }

    fn float(&mut self, name: &str, cases: usize, worst: f64, tolerance: f64) {
        self.checks.push(AlgebraCheck {
            name: name.into(),
            cases,
            failures: 0,
            max_residual: worst,
            tolerance,
            exact: false,
            pass: worst <= tolerance,
        });
    }
}

/// Runs every identity on the animals of size at most `max_size`.
///
/// Projection and intertwining identities are always checked in exact
/// arithmetic. Eigen relations use the double-precision eigenbasis; with
/// `exact`, eigenpairs that are rational (denominators up to 12) are also
/// checked exactly.
pub fn algebra_checks<G: Group>(alg: &WreathAlgebra<G>, max_size: usize, exact: bool) -> Result<AlgebraReport> {
    let mut report = AlgebraReport::default();
    match alg.mode {
        Mode::Site => {
            let animals = enumerate_site_animals(&alg.oracle, max_size)?;
            projection_checks(alg, &animals, max_size, &mut report)?;
            intertwining_checks(alg, &animals, exact, &mut report)?;
            let (mut cases, mut failures) = (0, 0);
            for a in animals.iter().filter(|a| !a.is_empty()) {
                for y in &a.vertices {
                    cases += 1;
                    failures += usize::from(!alg.translate_identity(a, y)?);
                }
            }
            report.exact("translation", cases, failures, 0.0);
            isometry_checks(alg, &animals, &mut report)?;
        }
        Mode::Bond => {
            let animals = enumerate_bond_animals(&alg.oracle, max_size)?;
            projection_checks(alg, &animals, max_size, &mut report)?;
            intertwining_checks(alg, &animals, exact, &mut report)?;
            let (mut cases, mut failures) = (0, 0);
            for a in &animals {
                for y in &a.vertices {
                    cases += 1;
                    failures += usize::from(!alg.bond_translate_identity(a, y)?);
                }
            }
            report.exact("translation", cases, failures, 0.0);
            report.notes.push("partial isometries and stabilizer diagonalization are site-mode only".into());
        }
    }
    report.pass = report.checks.iter().all(|c| c.pass);
    Ok(report)
}

fn projection_checks<G: Group, C: LampSupport<G::Elem> + Cluster<G::Elem>>(
    alg: &WreathAlgebra<G>,
    animals: &[C],
    max_size: usize,
    report: &mut AlgebraReport,
) -> Result<()> {
    let products: Vec<_> = animals.iter().map(|a| alg.projection_product(a)).collect();
    let (mut idem_fail, mut orth_fail) = (0usize, 0usize);
    for (i, pi) in products.iter().enumerate() {
        if pi.convolve(pi, Some(&alg.lamp)) != *pi {
            idem_fail += 1;
        }
        for pj in &products[i + 1..] {
            if !pi.convolve(pj, Some(&alg.lamp)).is_zero() || !pj.convolve(pi, Some(&alg.lamp)).is_zero() {
                orth_fail += 1;
            }
        }
    }
    let n = products.len();
    report.exact("idempotent", n, idem_fail, 0.0);
    report.exact("orthogonal", n * n.saturating_sub(1) / 2, orth_fail, 0.0);
    let trace: Rational = products.iter().map(|m| m.value_at_identity()).sum();
    let mass = finite_mass(&alg.oracle, &alg.lamp.p(), max_size, alg.mode)?;
    report.exact("traceEqualsFiniteMass", 1, usize::from(trace != mass), (trace - mass).abs_f64());
    Ok(())
}

fn intertwining_checks<G: Group, C: LampSupport<G::Elem> + Cluster<G::Elem>>(
    alg: &WreathAlgebra<G>,
    animals: &[C],
    exact: bool,
    report: &mut AlgebraReport,
) -> Result<()> {
    let mt_exact = alg.mu_tilde::<Rational>()?;
    let mt = alg.mu_tilde::<f64>()?;
    let (mut basis_cases, mut basis_fail) = (0usize, 0usize);
    let (mut eigen_cases, mut eigen_worst) = (0usize, 0.0f64);
    let (mut rational_cases, mut rational_fail) = (0usize, 0usize);
    for a in animals {
        let k = a.vertices().len();
        if k == 0 {
            basis_cases += 1;
            basis_fail += usize::from(!alg.intertwine_defect::<Rational, _>(a, &[], &mt_exact)?.is_zero());
            continue;
        }
        for x in 0..k {
            let f: Vec<Rational> = (0..k).map(|i| if i == x { Rational::from_integer(1.into()) } else { Rational::zero() }).collect();
            basis_cases += 1;
            basis_fail += usize::from(!alg.intertwine_defect(a, &f, &mt_exact)?.is_zero());
        }
        let es = eigensolve(&build_pa(a, &alg.oracle))?;
        for (lam, f) in es.values.iter().zip(&es.vectors) {
            eigen_cases += 1;
            eigen_worst = eigen_worst.max(alg.eigen_residual(a, f, lam, &mt)?);
            if !exact {
                continue;
            }
            let top = f.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            let g: Option<Vec<Rational>> = f.iter().map(|x| rationalize(x / top, 12)).collect();
            if let (Some(g), Some(l)) = (g, rationalize(*lam, 12)) {
                rational_cases += 1;
                rational_fail += usize::from(alg.eigen_residual(a, &g, &l, &mt_exact)? != 0.0);
            }
        }
    }
    report.exact("intertwiningOnBasis", basis_cases, basis_fail, 0.0);
    report.float("eigenRelation", eigen_cases, eigen_worst, EIGEN_TOLERANCE);
    if exact {
        report.exact("eigenRelationRational", rational_cases, rational_fail, 0.0);
    }
    Ok(())
}

fn isometry_checks<G: Group>(
    alg: &WreathAlgebra<G>,
    animals: &[crate::animal_enum::Animal<G::Elem>],
    report: &mut AlgebraReport,
) -> Result<()> {
    let (mut iso_cases, mut iso_worst) = (0usize, 0.0f64);
    let (mut fourier_cases, mut fourier_worst) = (0usize, 0.0f64);
    for a in animals.iter().filter(|a| !a.is_empty()) {
        let es = eigensolve(&build_pa(a, &alg.oracle))?;
        match partial_isometry_products(alg, a, &es.vectors)? {
            PartialIsometryOutcome::Verified(p) => {
                iso_cases += 1;
                iso_worst = iso_worst.max(p.max_deviation);
            }
            PartialIsometryOutcome::TorsionObstruction { stabilizer } => {
                report.torsion_obstructions.push(format!("{:?} fixed by {:?}", a.vertices, stabilizer));
                match abelian_stabilizer_diagonalize(alg, a) {
                    Ok(fd) => {
                        fourier_cases += 1;
                        fourier_worst = fourier_worst.max(fd.verify(alg, a)?.max());
                    }
                    Err(Error::NonAbelianStabilizer(order)) => report
                        .notes
                        .push(format!("{:?}: stabilizer of order {order} is not abelian", a.vertices)),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    report.float("partialIsometry", iso_cases, iso_worst, ISOMETRY_TOLERANCE);
    if fourier_cases > 0 {
        report.float("abelianStabilizer", fourier_cases, fourier_worst, FOURIER_TOLERANCE);
    }
    Ok(())
}
