mod common;

use std::collections::BTreeSet;

use latmat::enumeration::{enumerate_layers, extensions, filter_min_cover, SemilatticeCatalog};
use latmat::poset::canonicalize;
use latmat::Execution;

#[test]
fn counts_and_meet_existence() {
    let layers = enumerate_layers(7, 8, Execution::Parallel).unwrap();
    let counts: Vec<usize> = layers.iter().map(Vec::len).collect();
    assert_eq!(counts, [1, 1, 2, 5, 15, 53, 222]);
    for layer in &layers {
        let keys: BTreeSet<_> = layer.iter().map(|p| canonicalize(p).unwrap()).collect();
        assert_eq!(keys.len(), layer.len());
        for p in layer {
            assert!(common::is_meet_semilattice_brute(p));
        }
    }
    let min3: Vec<usize> = layers[4..]
        .iter()
        .map(|l| filter_min_cover(l, 3).len())
        .collect();
    assert_eq!(min3, [1, 7, 47]);
}

#[test]
fn matches_filtering_all_posets() {
    let layers = enumerate_layers(6, 8, Execution::Sequential).unwrap();
    for n in 1..=6 {
        let brute: BTreeSet<_> = common::naturally_labelled_posets(n)
            .iter()
            .filter(|p| common::is_meet_semilattice_brute(p))
            .map(|p| canonicalize(p).unwrap())
            .collect();
        let generated: BTreeSet<_> = layers[n - 1]
            .iter()
            .map(|p| canonicalize(p).unwrap())
            .collect();
        assert_eq!(generated, brute, "n = {n}");
    }
}

#[test]
fn extensions_stay_inside_next_layer() {
    let layers = enumerate_layers(6, 8, Execution::Parallel).unwrap();
    for n in 1..6 {
        let next: BTreeSet<_> = layers[n].iter().map(|p| canonicalize(p).unwrap()).collect();
        for p in &layers[n - 1] {
            for q in extensions(p) {
                assert!(next.contains(&canonicalize(&q).unwrap()));
            }
        }
    }
}

#[test]
fn five_element_classes_are_the_figure_fixtures() {
    let cat = SemilatticeCatalog::builtin();
    let fixtures: BTreeSet<_> = "ABCDEFGHIJKLMNO"
        .chars()
        .map(|c| canonicalize(&cat.get(&format!("5_{c}")).unwrap().poset).unwrap())
        .collect();
    let layer: BTreeSet<_> = enumerate_layers(5, 8, Execution::Parallel).unwrap()[4]
        .iter()
        .map(|p| canonicalize(p).unwrap())
        .collect();
    assert_eq!(fixtures, layer);
}

#[test]
fn parallel_and_sequential_agree() {
    let a = enumerate_layers(7, 8, Execution::Sequential).unwrap();
    let b = enumerate_layers(7, 8, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn every_catalog_figure_verifies() {
    let cat = SemilatticeCatalog::builtin();
    for e in cat.entries() {
        assert!(cat.verify_figure_mobius(&e.label).unwrap(), "{}", e.label);
    }
}
