use lampspec_core::animal_enum::{enumerate_bond_animals, enumerate_site_animals, finite_mass, Animal, Mode};
use lampspec_core::cluster_spectrum::{build_pa, eigensolve};
use lampspec_core::group_core::{
    make_group, AnyOracle, Cyclic, Group, GroupOracle, IntegerLine, Lattice2, LampGroup, StableKey,
};
use lampspec_core::scalar::{ratio, Complex64, Rational};
use lampspec_core::wreath_algebra::{
    abelian_stabilizer_diagonalize, partial_isometry_products, rationalize, sinc_measure, sinc_residual,
    stabilizer, LampConfig, LampSite, PartialIsometryOutcome, ProductMeasure, WreathAlgebra, WreathMeasure,
    WreathPoint,
};
use lampspec_core::Error;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn line() -> GroupOracle<IntegerLine> {
    match make_group(&"Z".parse().unwrap()).unwrap() {
        AnyOracle::Line(g) => g,
        _ => unreachable!(),
    }
}

fn square() -> GroupOracle<Lattice2> {
    match make_group(&"Z2-square".parse().unwrap()).unwrap() {
        AnyOracle::Lattice(g) => g,
        _ => unreachable!(),
    }
}

fn cycle(m: u64) -> GroupOracle<Cyclic> {
    match make_group(&format!("Zn:{m}").parse().unwrap()).unwrap() {
        AnyOracle::Cyclic(g) => g,
        _ => unreachable!(),
    }
}

fn z_alg(q: u32, mode: Mode) -> WreathAlgebra<IntegerLine> {
    WreathAlgebra::new(line(), LampGroup::cyclic(q).unwrap(), mode)
}

/// Switch-walk-switch law written out directly: lamp at `e` set to `h`,
/// step `s`, lamp at `s` set to `h'`, each with probability `1/q`.
fn brute_mu_tilde(alg: &WreathAlgebra<IntegerLine>) -> WreathMeasure<Rational, i64> {
    let q = alg.q();
    let mut m = alg.zero();
    for s in alg.oracle.generators() {
        for h in 0..q {
            for h2 in 0..q {
                let mut pairs = vec![(LampSite::Vertex(0), h)];
                let at_s = alg.lamp.multiply(if s.elem == 0 { h } else { 0 }, h2);
                if s.elem == 0 {
                    pairs = vec![(LampSite::Vertex(0), at_s)];
                } else {
                    pairs.push((LampSite::Vertex(s.elem), h2));
                }
                m.add_atom(
                    WreathPoint { config: LampConfig::from_pairs(pairs), position: s.elem },
                    &s.weight * ratio(1, (q * q) as i64),
                );
            }
        }
    }
    m
}

#[test]
fn mu_tilde_matches_direct_expansion() {
    for q in 2..=5 {
        let alg = z_alg(q, Mode::Site);
        assert_eq!(alg.mu_tilde::<Rational>().unwrap(), brute_mu_tilde(&alg));
    }
    let alg = z_alg(2, Mode::Site);
    let mt = alg.mu_tilde::<Rational>().unwrap();
    let positions: std::collections::BTreeSet<i64> = mt.iter().map(|(w, _)| w.position).collect();
    assert_eq!(positions.into_iter().collect::<Vec<_>>(), vec![-1, 1]);
}

#[test]
fn mu_tilde_on_nonabelian_lamps() {
    let alg = WreathAlgebra::new(line(), LampGroup::symmetric3(), Mode::Site);
    let mt = alg.mu_tilde::<Rational>().unwrap();
    assert_eq!(mt.len(), 2 * 36);
    assert!(alg.is_symmetric(&mt));
    assert_eq!(mt.total_mass(), Rational::one());
    let r = alg.return_probabilities::<Rational>(4, 1 << 20).unwrap();
    // annealed side at p = 1/6: two 2-step returns, range 2
    assert_eq!(r[2], ratio(1, 2) * ratio(1, 36));
}

#[test]
fn projection_values_at_identity() {
    let z = line();
    let alg = z_alg(2, Mode::Site);
    let empty = Animal::empty(0);
    let p_empty = alg.projection_measure::<Rational, _>(&empty);
    assert_eq!(p_empty, alg.nu_bar(&LampSite::Vertex(0)));
    assert_eq!(p_empty.at_position(&0), ratio(1, 2));
    let single = Animal::from_vertices(&z, [0]);
    assert_eq!(alg.projection_measure::<Rational, _>(&single).at_position(&0), ratio(1, 8));
    for q in [3u32, 4] {
        let a = z_alg(q, Mode::Site);
        assert_eq!(a.projection_measure::<Rational, _>(&empty).at_position(&0), ratio(q as i64 - 1, q as i64));
    }
}

#[test]
fn projections_are_orthogonal_idempotents_on_line() {
    let z = line();
    let alg = z_alg(2, Mode::Site);
    let animals = enumerate_site_animals(&z, 3).unwrap();
    let sparse: Vec<_> = animals.iter().map(|a| alg.projection_measure::<Rational, _>(a)).collect();
    for (i, pa) in sparse.iter().enumerate() {
        for (j, pb) in sparse.iter().enumerate() {
            let prod = alg.convolve(pa, pb).unwrap();
            if i == j {
                assert_eq!(prod, *pa);
            } else {
                assert!(prod.is_zero(), "{:?} {:?}", animals[i].vertices, animals[j].vertices);
            }
        }
    }
    let trace: Rational = sparse.iter().map(|m| m.at_position(&0)).sum();
    assert_eq!(trace, finite_mass(&z, &ratio(1, 2), 3, Mode::Site).unwrap());
}

#[test]
fn factorised_and_sparse_products_agree() {
    let sq = square();
    let alg = WreathAlgebra::new(sq.clone(), LampGroup::cyclic(2).unwrap(), Mode::Site);
    let animals = enumerate_site_animals(&sq, 2).unwrap();
    for a in &animals {
        for b in &animals {
            let fa = alg.projection_product(a);
            let fb = alg.projection_product(b);
            let fast = fa.convolve(&fb, Some(&alg.lamp)).to_sparse::<Rational, _>(&alg);
            let slow = alg.convolve(&fa.to_sparse(&alg), &fb.to_sparse(&alg)).unwrap();
            assert_eq!(fast, slow);
        }
    }
    let s3 = WreathAlgebra::new(sq.clone(), LampGroup::symmetric3(), Mode::Site);
    let a = &animals[1];
    let f = s3.projection_product(a);
    assert_eq!(f.convolve(&f, Some(&s3.lamp)), f);
    assert_eq!(f.convolve(&f, None), f);
}

#[test]
fn translate_identity_holds() {
    let z = line();
    let alg = z_alg(2, Mode::Site);
    for a in enumerate_site_animals(&z, 4).unwrap().iter().filter(|a| !a.is_empty()) {
        for y in &a.vertices {
            assert!(alg.translate_identity(a, y).unwrap());
        }
    }
    let balg = z_alg(2, Mode::Bond);
    for a in enumerate_bond_animals(&z, 3).unwrap() {
        for y in &a.vertices {
            assert!(balg.bond_translate_identity(&a, y).unwrap());
        }
    }
}

#[test]
fn intertwining_is_exact_on_basis_vectors() {
    let z = line();
    for (mode, q) in [(Mode::Site, 2u32), (Mode::Site, 3), (Mode::Bond, 2)] {
        let alg = z_alg(q, mode);
        let mt = alg.mu_tilde::<Rational>().unwrap();
        match mode {
            Mode::Site => {
                for a in enumerate_site_animals(&z, 4).unwrap() {
                    let n = a.size().max(1);
                    for x in 0..n {
                        let f: Vec<Rational> = (0..a.size()).map(|i| if i == x { Rational::one() } else { Rational::zero() }).collect();
                        assert!(alg.intertwine_defect(&a, &f, &mt).unwrap().is_zero(), "{:?}", a.vertices);
                    }
                }
            }
            Mode::Bond => {
                for a in enumerate_bond_animals(&z, 3).unwrap() {
                    for x in 0..a.vertices.len() {
                        let f: Vec<Rational> =
                            (0..a.vertices.len()).map(|i| if i == x { Rational::one() } else { Rational::zero() }).collect();
                        assert!(alg.intertwine_defect(&a, &f, &mt).unwrap().is_zero(), "{:?}", a.edges);
                    }
                }
            }
        }
    }
}

#[test]
fn eigen_relations_on_line() {
    let z = line();
    let alg = z_alg(2, Mode::Site);
    let mt = alg.mu_tilde::<f64>().unwrap();
    let mt_exact = alg.mu_tilde::<Rational>().unwrap();
    let mut rational_pairs = 0;
    for a in enumerate_site_animals(&z, 4).unwrap().iter().filter(|a| !a.is_empty()) {
        let es = eigensolve(&build_pa(a, &z)).unwrap();
        for (lam, f) in es.values.iter().zip(&es.vectors) {
            assert!(alg.eigen_residual(a, f, lam, &mt).unwrap() <= 1e-12);
            // rescale so the largest entry is 1 and try exact arithmetic
            let top = f.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            let exact: Option<Vec<Rational>> = f.iter().map(|x| rationalize(x / top, 12)).collect();
            if let (Some(g), Some(l)) = (exact, rationalize(*lam, 12)) {
                assert_eq!(alg.eigen_residual(a, &g, &l, &mt_exact).unwrap(), 0.0);
                rational_pairs += 1;
            }
        }
    }
    // {0}, {0,1}, {-1,0}, the 0-eigenvector of each 3-interval, ...
    assert!(rational_pairs >= 7);
    // empty animal: ν̄_e * μ̃ = 0
    let empty = Animal::empty(0);
    assert!(alg.intertwine_defect::<Rational, _>(&empty, &[], &mt_exact).unwrap().is_zero());
}

#[test]
fn partial_isometries_on_line() {
    let z = line();
    let alg = z_alg(2, Mode::Site);
    for a in enumerate_site_animals(&z, 3).unwrap().iter().filter(|a| !a.is_empty()) {
        let es = eigensolve(&build_pa(a, &z)).unwrap();
        match partial_isometry_products(&alg, a, &es.vectors).unwrap() {
            PartialIsometryOutcome::Verified(p) => {
                assert!(p.max_deviation <= 1e-13, "{:?}: {}", a.vertices, p.max_deviation);
                assert_eq!(p.products.len(), a.size());
            }
            PartialIsometryOutcome::TorsionObstruction { .. } => panic!("Z is torsion-free"),
        }
    }
}

#[test]
fn isometry_products_match_direct_convolution() {
    let AnyOracle::Lattice(sq) = make_group(&"Z2-square".parse().unwrap()).unwrap() else { unreachable!() };
    let alg = WreathAlgebra::new(sq.clone(), LampGroup::cyclic(2).unwrap(), Mode::Site);
    let a = Animal::from_vertices(&sq, [(0, 0), (1, 0)]);
    let es = eigensolve(&build_pa(&a, &sq)).unwrap();
    let PartialIsometryOutcome::Verified(p) = partial_isometry_products(&alg, &a, &es.vectors).unwrap() else {
        panic!("trivial stabilizer")
    };
    let nu = alg.projection_measure::<f64, _>(&a);
    let lift = |f: &Vec<f64>| alg.embed(&a.vertices.iter().cloned().zip(f.iter().copied()).collect::<Vec<_>>());
    for (x, fx) in es.vectors.iter().enumerate() {
        for (y, fy) in es.vectors.iter().enumerate() {
            let direct = alg.convolve_all(&[&nu, &lift(fy), &alg.adjoint(&lift(fx)), &nu]).unwrap();
            assert!(direct.l1_distance(&p.products[x][y]).unwrap() <= 1e-13);
        }
    }
    assert!(p.max_deviation <= 1e-13);
}

#[test]
fn full_cycle_is_a_torsion_obstruction() {
    let c6 = cycle(6);
    let alg = WreathAlgebra::new(c6.clone(), LampGroup::cyclic(2).unwrap(), Mode::Site);
    let a = Animal::from_vertices(&c6, 0..6);
    assert!(a.boundary.is_empty());
    let es = eigensolve(&build_pa(&a, &c6)).unwrap();
    match partial_isometry_products(&alg, &a, &es.vectors).unwrap() {
        PartialIsometryOutcome::TorsionObstruction { stabilizer } => assert_eq!(stabilizer.len(), 6),
        PartialIsometryOutcome::Verified(_) => panic!("stabilizer is Z_6"),
    }
    let fd = abelian_stabilizer_diagonalize(&alg, &a).unwrap();
    assert_eq!(fd.representatives.len(), 1);
    let r = fd.verify(&alg, &a).unwrap();
    assert!(r.max() <= 1e-12, "{r:?}");
}

#[test]
fn four_cycle_fourier_spectrum() {
    let c4 = cycle(4);
    let alg = WreathAlgebra::new(c4.clone(), LampGroup::cyclic(2).unwrap(), Mode::Site);
    let a = Animal::from_vertices(&c4, 0..4);
    let fd = abelian_stabilizer_diagonalize(&alg, &a).unwrap();
    assert_eq!(fd.characters, vec![vec![0, 0, 0, 0], vec![0, 1, 2, 3], vec![0, 2, 0, 2], vec![0, 3, 2, 1]]);
    let by_char: Vec<f64> = fd.eigenvalues_by_character().into_iter().flatten().collect();
    for (got, want) in by_char.iter().zip([1.0, 0.0, -1.0, 0.0]) {
        assert!((got - want).abs() < 1e-12, "{by_char:?}");
    }
    let r = fd.verify(&alg, &a).unwrap();
    assert!(r.partial_isometry <= 1e-12 && r.max() <= 1e-12, "{r:?}");
}

#[test]
fn partial_stabilizer_with_several_orbits() {
    // A = {0, 1, 3, 4} in Z_6 is fixed by +3: two orbits of size 2
    let c6 = cycle(6);
    let alg = WreathAlgebra::new(c6.clone(), LampGroup::cyclic(2).unwrap(), Mode::Site);
    let a = Animal::from_vertices(&c6, [0, 1, 3, 4]);
    assert_eq!(stabilizer(&c6, &a), vec![0, 3]);
    let fd = abelian_stabilizer_diagonalize(&alg, &a).unwrap();
    assert_eq!(fd.representatives.len(), 2);
    let r = fd.verify(&alg, &a).unwrap();
    assert!(r.max() <= 1e-12, "{r:?}");
}

#[test]
fn trivial_stabilizer_reduces_to_eigenbasis() {
    let z = line();
    let alg = z_alg(2, Mode::Site);
    let a = Animal::from_vertices(&z, [-1, 0, 1]);
    let fd = abelian_stabilizer_diagonalize(&alg, &a).unwrap();
    assert_eq!(fd.stabilizer, vec![0]);
    let direct = eigensolve(&build_pa(&a, &z)).unwrap();
    for (x, y) in fd.eigenvalues().iter().zip(&direct.values) {
        assert!((x - y).abs() < 1e-12);
    }
    assert!(fd.verify(&alg, &a).unwrap().max() <= 1e-12);
}

/// The symmetric group on three letters as a base group, to reach a
/// nonabelian stabilizer.
#[derive(Clone, Debug)]
struct Sym3;

const PERMS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn perm_index(p: [u8; 3]) -> u8 {
    PERMS.iter().position(|q| *q == p).unwrap() as u8
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
struct Perm(u8);

impl StableKey for Perm {
    fn stable_hash(&self) -> u64 {
        self.0 as u64
    }
}

impl Group for Sym3 {
    type Elem = Perm;
    fn identity(&self) -> Perm {
        Perm(0)
    }
    fn multiply(&self, a: &Perm, b: &Perm) -> Perm {
        let (x, y) = (PERMS[a.0 as usize], PERMS[b.0 as usize]);
        Perm(perm_index([x[y[0] as usize], x[y[1] as usize], x[y[2] as usize]]))
    }
    fn inverse(&self, a: &Perm) -> Perm {
        (0..6).map(Perm).find(|b| self.multiply(a, b) == Perm(0)).unwrap()
    }
    fn name(&self) -> String {
        "S3".into()
    }
    fn is_torsion_free(&self) -> bool {
        false
    }
}

#[test]
fn nonabelian_stabilizer_is_rejected() {
    let g = GroupOracle::uniform(Sym3, "S3", vec![Perm(1), Perm(2)]).unwrap();
    let all = Animal::from_vertices(&g, (0..6).map(Perm));
    let alg = WreathAlgebra::new(g, LampGroup::cyclic(2).unwrap(), Mode::Site);
    assert!(matches!(abelian_stabilizer_diagonalize(&alg, &all), Err(Error::NonAbelianStabilizer(6))));
}

#[test]
fn sinc_values_and_residuals() {
    let third = ratio(1, 3);
    let half = ratio(1, 2);
    assert_eq!(sinc_measure(&third, 0), third.to_f64().unwrap());
    assert_eq!(sinc_measure(&ratio(3, 10), 0), 0.3);
    assert!((sinc_measure(&half, 1) - 1.0 / std::f64::consts::PI).abs() < 1e-16);
    assert_eq!(sinc_measure(&half, 2), 0.0);
    assert_eq!(sinc_measure(&half, -3), sinc_measure(&half, 3));
    for p in [&third, &half] {
        for k in 0..=2 {
            let r: Vec<f64> = [100, 1000, 10_000].iter().map(|&c| sinc_residual(p, k, c).residual).collect();
            assert!(r[1] <= r[0] && r[2] <= r[1], "{r:?}");
            assert!(r[2] < 1e-3);
        }
    }
}

#[test]
fn bond_projections() {
    let z = line();
    let alg = z_alg(2, Mode::Bond);
    let animals = enumerate_bond_animals(&z, 3).unwrap();
    let ms: Vec<_> = animals.iter().map(|a| alg.projection_measure::<Rational, _>(a)).collect();
    assert_eq!(ms[0].at_position(&0), ratio(1, 4));
    for (i, a) in ms.iter().enumerate() {
        for (j, b) in ms.iter().enumerate() {
            let p = alg.convolve(a, b).unwrap();
            assert_eq!(i == j, !p.is_zero());
            if i == j {
                assert_eq!(p, *a);
            }
        }
    }
}

fn small_measure(alg: &WreathAlgebra<IntegerLine>, spec: &[(i64, u32, i64, i64)]) -> WreathMeasure<Rational, i64> {
    let mut m = alg.zero();
    for &(site, h, pos, num) in spec {
        m.add_atom(
            WreathPoint { config: LampConfig::from_pairs([(LampSite::Vertex(site), h)]), position: pos },
            ratio(num, 7),
        );
    }
    m
}

fn atoms() -> impl Strategy<Value = Vec<(i64, u32, i64, i64)>> {
    prop::collection::vec((-2i64..=2, 0u32..3, -2i64..=2, -5i64..=5), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convolution_is_associative_and_bilinear(a in atoms(), b in atoms(), c in atoms()) {
        let alg = z_alg(3, Mode::Site);
        let (a, b, c) = (small_measure(&alg, &a), small_measure(&alg, &b), small_measure(&alg, &c));
        let ab_c = alg.convolve(&alg.convolve(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.convolve(&a, &alg.convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        let left = alg.convolve(&a.add(&b).unwrap(), &c).unwrap();
        let right = alg.convolve(&a, &c).unwrap().add(&alg.convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let unit = alg.delta(alg.identity_point());
        prop_assert_eq!(alg.convolve(&unit, &a).unwrap(), a.clone());
        prop_assert_eq!(alg.convolve(&a, &unit).unwrap(), a.clone());
        // (a * b)* = b* * a*
        prop_assert_eq!(alg.adjoint(&alg.convolve(&a, &b).unwrap()), alg.convolve(&alg.adjoint(&b), &alg.adjoint(&a)).unwrap());
    }

    #[test]
    fn nu_commute(x in -3i64..3, y in -3i64..3) {
        let alg = z_alg(2, Mode::Site);
        let (nx, ny) = (alg.nu::<Rational>(&LampSite::Vertex(x)), alg.nu::<Rational>(&LampSite::Vertex(y)));
        prop_assert_eq!(alg.convolve(&nx, &ny).unwrap(), alg.convolve(&ny, &nx).unwrap());
    }
}

#[test]
fn product_measure_zero_detection() {
    let alg = z_alg(2, Mode::Site);
    let nu0 = ProductMeasure::single(LampSite::Vertex(0i64), 2, false);
    let bar0 = ProductMeasure::single(LampSite::Vertex(0i64), 2, true);
    assert!(nu0.convolve(&bar0, None).is_zero());
    assert!(nu0.convolve(&bar0, None).to_sparse::<Rational, _>(&alg).is_zero());
    let complex: WreathMeasure<Complex64, i64> = nu0.to_sparse(&alg);
    assert_eq!(complex.len(), 2);
}
