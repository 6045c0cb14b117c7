use std::collections::BTreeSet;

use lampspec_core::animal_enum::{
    enumerate_bond_animals, enumerate_site_animals, finite_mass, sample_cluster, size_histogram, Animal,
    BondAnimal, Cluster, ClusterSample, Mode,
};
use lampspec_core::group_core::{make_group, AnyOracle, Edge, Group, GroupOracle};
use lampspec_core::scalar::{ratio, Rational};
use lampspec_core::with_oracle;
use num_traits::{One, ToPrimitive};

fn oracle(desc: &str) -> AnyOracle {
    make_group(&desc.parse().unwrap()).unwrap()
}

/// Grow animals one boundary vertex at a time and dedupe by sorted vertex
/// list.
fn bfs_site_sets<G: Group>(g: &GroupOracle<G>, max: usize) -> BTreeSet<Vec<G::Elem>> {
    let mut all = BTreeSet::new();
    let mut layer: BTreeSet<Vec<G::Elem>> = BTreeSet::from([vec![g.identity()]]);
    for _ in 1..=max {
        all.extend(layer.iter().cloned());
        let mut next = BTreeSet::new();
        for set in &layer {
            for x in set {
                for y in g.neighbours(x) {
                    if !set.contains(&y) {
                        let mut grown = set.clone();
                        grown.push(y);
                        grown.sort();
                        next.insert(grown);
                    }
                }
            }
        }
        layer = next;
    }
    all
}

fn bfs_bond_sets<G: Group>(g: &GroupOracle<G>, max: usize) -> BTreeSet<Vec<Edge<G::Elem>>> {
    let mut all = BTreeSet::new();
    let mut layer: BTreeSet<Vec<Edge<G::Elem>>> = BTreeSet::from([vec![]]);
    for _ in 0..=max {
        all.extend(layer.iter().cloned());
        let mut next = BTreeSet::new();
        for set in &layer {
            let mut verts = BTreeSet::from([g.identity()]);
            for Edge(a, b) in set {
                verts.insert(a.clone());
                verts.insert(b.clone());
            }
            for x in &verts {
                for f in g.incident_edges(x) {
                    if !set.contains(&f) {
                        let mut grown = set.clone();
                        grown.push(f);
                        grown.sort();
                        next.insert(grown);
                    }
                }
            }
        }
        layer = next;
    }
    all
}

#[test]
fn site_enumeration_matches_bfs_oracle() {
    for (desc, max) in [("Z", 8), ("Z2-square", 6), ("Z2-tri", 5), ("tree:2", 7), ("Zn:5", 5), ("free:2", 5)] {
        with_oracle!(&oracle(desc), g => {
            let animals = enumerate_site_animals(g, max).unwrap();
            let got: BTreeSet<_> = animals.iter().filter(|a| !a.is_empty()).map(|a| a.vertices.clone()).collect();
            assert_eq!(got.len() + 1, animals.len(), "{desc}: duplicates");
            assert_eq!(got, bfs_site_sets(g, max), "{desc}");
            for a in &animals {
                assert!(a.is_connected(g));
                let fresh = Animal::from_vertices(g, a.vertices.clone());
                if !a.is_empty() {
                    assert_eq!(fresh.boundary, a.boundary, "{desc}");
                }
            }
        });
    }
}

#[test]
fn bond_enumeration_matches_bfs_oracle() {
    for (desc, max) in [("Z", 7), ("Z2-square", 4), ("Z2-tri", 3), ("tree:2", 5), ("Zn:4", 5), ("free:2", 4)] {
        with_oracle!(&oracle(desc), g => {
            let animals = enumerate_bond_animals(g, max).unwrap();
            let got: BTreeSet<_> = animals.iter().map(|a| a.edges.clone()).collect();
            assert_eq!(got.len(), animals.len(), "{desc}: duplicates");
            assert_eq!(got, bfs_bond_sets(g, max), "{desc}");
            for a in &animals {
                assert!(a.is_connected());
                let fresh = BondAnimal::from_edges(g, a.edges.clone());
                assert_eq!(fresh, *a);
            }
        });
    }
}

#[test]
fn polyomino_counts() {
    let AnyOracle::Lattice(sq) = oracle("Z2-square") else { panic!() };
    let animals = enumerate_site_animals(&sq, 3).unwrap();
    let by_size: Vec<usize> = (1..=3).map(|k| animals.iter().filter(|a| a.size() == k).count()).collect();
    assert_eq!(by_size, vec![1, 4, 18]);
    // fixed polyominoes times size: 1, 2, 6, 19, 63, 216, 760, 2725
    let hist = size_histogram(&sq, 8, Mode::Site).unwrap();
    let fixed = [1u64, 2, 6, 19, 63, 216, 760, 2725];
    for (k, f) in fixed.iter().enumerate() {
        let n: u64 = hist[k + 1].iter().sum();
        assert_eq!(n, f * (k as u64 + 1), "size {}", k + 1);
    }
}

#[test]
fn histogram_matches_materialised_list() {
    let AnyOracle::Lattice(tri) = oracle("Z2-tri") else { panic!() };
    for mode in [Mode::Site, Mode::Bond] {
        let hist = size_histogram(&tri, 4, mode).unwrap();
        let mut counted = vec![vec![0u64; 40]; 5];
        match mode {
            Mode::Site => {
                for a in enumerate_site_animals(&tri, 4).unwrap() {
                    counted[a.open_count()][a.closed_count()] += 1;
                }
            }
            Mode::Bond => {
                for a in enumerate_bond_animals(&tri, 4).unwrap() {
                    counted[a.open_count()][a.closed_count()] += 1;
                }
            }
        }
        for (k, row) in hist.iter().enumerate() {
            for (b, &n) in row.iter().enumerate() {
                assert_eq!(n, counted[k][b], "{mode} {k} {b}");
            }
        }
    }
}

#[test]
fn finite_mass_is_monotone_and_bounded() {
    let AnyOracle::Lattice(sq) = oracle("Z2-square") else { panic!() };
    let half = ratio(1, 2);
    let mut last = Rational::from_integer(0.into());
    for k in 0..=6 {
        let m = finite_mass(&sq, &half, k, Mode::Site).unwrap();
        assert!(m >= last && m < Rational::one());
        last = m;
    }
    let AnyOracle::Line(z) = oracle("Z") else { panic!() };
    // bond on Z: singleton q^2 plus k+1 intervals with k edges, each p^k q^2
    let p = ratio(1, 3);
    let q = ratio(2, 3);
    let mut expected = Rational::from_integer(0.into());
    for k in 0..=6i64 {
        expected += ratio(k + 1, 1) * lampspec_core::scalar::powi(&p, k as usize) * &q * &q;
    }
    assert_eq!(finite_mass(&z, &p, 6, Mode::Bond).unwrap(), expected);
}

#[test]
fn tree_finite_mass_at_calibrated_size() {
    let AnyOracle::Tree(t) = oracle("tree:2") else { panic!() };
    let third = ratio(1, 3);
    let m14 = finite_mass(&t, &third, 14, Mode::Site).unwrap().to_f64().unwrap();
    let m15 = finite_mass(&t, &third, 15, Mode::Site).unwrap().to_f64().unwrap();
    assert!(m14 < 0.99 && m15 > 0.99, "{m14} {m15}");
    assert!((m15 - 0.99115).abs() < 1e-4);
}

#[test]
fn sampler_is_deterministic_and_consistent() {
    let AnyOracle::Lattice(sq) = oracle("Z2-square") else { panic!() };
    for seed in 0..200u64 {
        for mode in [Mode::Site, Mode::Bond] {
            let a = sample_cluster(&sq, 0.45, seed, 100_000, mode);
            assert_eq!(a, sample_cluster(&sq, 0.45, seed, 100_000, mode));
            match a {
                ClusterSample::Site(anim) => {
                    assert!(anim.is_connected(&sq));
                    if !anim.is_empty() {
                        assert_eq!(Animal::from_vertices(&sq, anim.vertices.clone()), anim);
                    }
                }
                ClusterSample::Bond(anim) => {
                    assert_eq!(BondAnimal::from_edges(&sq, anim.edges.clone()), anim);
                }
                ClusterSample::Truncated { .. } => {}
            }
        }
    }
}

#[test]
fn supercritical_clusters_truncate() {
    let AnyOracle::Lattice(sq) = oracle("Z2-square") else { panic!() };
    let truncated = (0..200u64)
        .filter(|&s| matches!(sample_cluster(&sq, 0.9, s, 500, Mode::Site), ClusterSample::Truncated { .. }))
        .count();
    assert!(truncated > 100);
}

#[test]
fn subcritical_tree_truncation_vanishes() {
    let AnyOracle::Tree(t) = oracle("tree:2") else { panic!() };
    let rate = |cap: usize| {
        (0..4000u64)
            .filter(|&s| matches!(sample_cluster(&t, 0.4, s, cap, Mode::Site), ClusterSample::Truncated { .. }))
            .count()
    };
    let (a, b) = (rate(5), rate(200));
    assert!(b < a && b < 10, "{a} {b}");
}

#[test]
fn sampler_frequencies_match_weights() {
    let AnyOracle::Line(z) = oracle("Z") else { panic!() };
    let n = 100_000u64;
    let animals = enumerate_site_animals(&z, 3).unwrap();
    let mut counts = vec![0u64; animals.len()];
    for seed in 0..n {
        if let ClusterSample::Site(a) = sample_cluster(&z, 0.5, seed, 100_000, Mode::Site) {
            if let Some(i) = animals.iter().position(|b| *b == a) {
                counts[i] += 1;
            }
        }
    }
    for (a, &c) in animals.iter().zip(&counts) {
        let w = a.weight_f64(0.5);
        let sigma = (w * (1.0 - w) / n as f64).sqrt();
        let freq = c as f64 / n as f64;
        assert!((freq - w).abs() <= 4.0 * sigma, "{:?}: {freq} vs {w}", a.vertices);
    }
}
