use std::f64::consts::PI;

use lampspec_core::animal_enum::{enumerate_bond_animals, enumerate_site_animals, Animal, Mode};
use lampspec_core::cluster_spectrum::{build_pa, eigensolve, eigenvalues, point_spectrum, rooted_spectral_measure};
use lampspec_core::group_core::{make_group, AnyOracle, GroupOracle, IntegerLine};
use lampspec_core::scalar::{ratio, Rational, Scalar};
use lampspec_core::with_oracle;

fn line() -> GroupOracle<IntegerLine> {
    let AnyOracle::Line(z) = make_group(&"Z".parse().unwrap()).unwrap() else { unreachable!() };
    z
}

/// `p_A^{(n)}(e, e)` from dense matrix powers of the adjacency of the
/// induced subgraph, built here from the group operation alone.
fn dense_returns<E: Clone + PartialEq>(verts: &[E], root: usize, adjacent: impl Fn(&E, &E) -> bool, degree: f64, n_max: usize) -> Vec<f64> {
    let d = verts.len();
    let m: Vec<f64> = (0..d * d)
        .map(|k| if adjacent(&verts[k / d], &verts[k % d]) { 1.0 / degree } else { 0.0 })
        .collect();
    let mut power: Vec<f64> = (0..d * d).map(|k| if k / d == k % d { 1.0 } else { 0.0 }).collect();
    let mut out = Vec::new();
    for _ in 0..=n_max {
        out.push(power[root * d + root]);
        let mut next = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = power[i * d + k];
                if a != 0.0 {
                    for j in 0..d {
                        next[i * d + j] += a * m[k * d + j];
                    }
                }
            }
        }
        power = next;
    }
    out
}

#[test]
fn interval_spectra_are_cosines() {
    let z = line();
    for len in 1..=12i64 {
        let a = Animal::from_vertices(&z, 0..len);
        let mut got = eigenvalues(&build_pa(&a, &z)).unwrap();
        got.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = (1..=len).map(|k| (k as f64 * PI / (len + 1) as f64).cos()).collect();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-10, "len {len}: {g} vs {w}");
        }
    }
}

#[test]
fn rooted_moments_match_matrix_powers_on_line() {
    let z = line();
    for a in enumerate_site_animals(&z, 9).unwrap().iter().filter(|a| !a.is_empty()) {
        let root = a.vertices.iter().position(|&x| x == 0).unwrap();
        let want = dense_returns(&a.vertices, root, |x, y| (x - y).abs() == 1, 2.0, 12);
        let pa = build_pa(a, &z);
        let measure = rooted_spectral_measure(&eigensolve(&pa).unwrap(), Some(root));
        let exact = pa.return_probabilities::<Rational>(12);
        for n in 0..=12 {
            assert!((measure.moment(n) - want[n]).abs() <= 1e-10, "{:?} n={n}", a.vertices);
            assert!((exact[n].re_f64() - want[n]).abs() <= 1e-15);
        }
    }
}

#[test]
fn rooted_moments_match_matrix_powers_on_square_lattice() {
    let AnyOracle::Lattice(sq) = make_group(&"Z2-square".parse().unwrap()).unwrap() else { unreachable!() };
    for a in enumerate_site_animals(&sq, 5).unwrap().iter().filter(|a| !a.is_empty()) {
        let root = a.vertices.iter().position(|&x| x == (0, 0)).unwrap();
        let adjacent = |x: &(i64, i64), y: &(i64, i64)| (x.0 - y.0).abs() + (x.1 - y.1).abs() == 1;
        let want = dense_returns(&a.vertices, root, adjacent, 4.0, 12);
        let measure = rooted_spectral_measure(&eigensolve(&build_pa(a, &sq)).unwrap(), Some(root));
        for n in 0..=12 {
            assert!((measure.moment(n) - want[n]).abs() <= 1e-10);
        }
    }
}

#[test]
fn bond_clusters_use_open_edges_only() {
    let z = line();
    // The bond animal {0-1} on Z: P has off-diagonal 1/2, eigenvalues ±1/2.
    let a = enumerate_bond_animals(&z, 1).unwrap().into_iter().find(|a| a.edge_count() == 1).unwrap();
    let mut ev = eigenvalues(&build_pa(&a, &z)).unwrap();
    ev.sort_by(f64::total_cmp);
    assert!((ev[0] + 0.5).abs() < 1e-15 && (ev[1] - 0.5).abs() < 1e-15);
}

#[test]
fn row_sums_are_substochastic() {
    for desc in ["Z", "Z2-square", "Z2-tri", "tree:2", "Zn:5"] {
        with_oracle!(make_group(&desc.parse().unwrap()).unwrap(), g => {
            for a in enumerate_site_animals(&g, 4).unwrap().iter().filter(|a| !a.is_empty()) {
                let pa = build_pa(a, &g);
                assert!(pa.is_symmetric());
                for i in 0..pa.dim() {
                    assert!(pa.row_sum(i) <= ratio(1, 1));
                }
            }
        });
    }
}

#[test]
fn line_point_spectrum_is_dense() {
    let lambda = point_spectrum(&line(), 200, Mode::Site).unwrap();
    let gap = largest_gap(&lambda);
    assert!(gap <= 0.01, "gap {gap}");
    assert!(lambda.iter().all(|x| x.abs() <= 1.0));
}

/// Largest distance from a point of `[-1, 1]` to the sorted set.
fn largest_gap(sorted: &[f64]) -> f64 {
    let mut gap = (sorted[0] + 1.0).max(1.0 - sorted[sorted.len() - 1]);
    for w in sorted.windows(2) {
        gap = gap.max((w[1] - w[0]) / 2.0);
    }
    gap
}
