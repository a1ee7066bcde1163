//! Meet semilattices up to isomorphism, grown one maximal element at a time.

mod catalog;

pub use catalog::{bounded_x1_poset, CatalogEntry, SemilatticeCatalog};

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::poset::{canonicalize, CanonicalKey, Poset};

/// Largest size accepted by [`enumerate_meet_semilattices`].
pub const MAX_ENUMERATION_SIZE: usize = 8;

/// One representative per isomorphism class of `n`-element meet
/// semilattices, in canonical form and sorted by canonical key.
pub fn enumerate_meet_semilattices(n: usize, exec: Execution) -> Result<Vec<Poset>> {
    enumerate_with_ceiling(n, MAX_ENUMERATION_SIZE, exec)
}

pub fn enumerate_with_ceiling(n: usize, ceiling: usize, exec: Execution) -> Result<Vec<Poset>> {
    Ok(enumerate_layers(n, ceiling, exec)?
        .pop()
        .unwrap_or_default())
}

/// Classes for every size `1..=n`; entry `k` holds the `(k+1)`-element classes.
pub fn enumerate_layers(n: usize, ceiling: usize, exec: Execution) -> Result<Vec<Vec<Poset>>> {
    if n == 0 || n > ceiling {
        return Err(Error::Size { n, bound: ceiling });
    }
    let mut layers = vec![vec![Poset::chain(1)]];
    while layers.len() < n {
        let next = extend_layer(layers.last().expect("nonempty"), exec)?;
        layers.push(next);
    }
    Ok(layers)
}

/// All classes obtained by adding a new maximal element to members of
/// `parents`, deduplicated and sorted.
pub fn extend_layer(parents: &[Poset], exec: Execution) -> Result<Vec<Poset>> {
    let found: Vec<Result<Vec<(CanonicalKey, ())>>> = exec::map(exec, parents, |p| {
        extensions(p)
            .into_iter()
            .map(|q| canonicalize(&q).map(|k| (k, ())))
            .collect()
    });
    let mut keys = BTreeMap::new();
    for batch in found {
        keys.extend(batch?);
    }
    Ok(keys.into_keys().map(|k| k.to_poset()).collect())
}

/// Every meet semilattice formed by placing a new top-most element above an
/// antichain of `p`. The new element gets the last index.
pub fn extensions(p: &Poset) -> Vec<Poset> {
    let n = p.len();
    let mut out = Vec::new();
    for antichain in antichains(p) {
        let mut ideal = FixedBitSet::with_capacity(n + 1);
        for &a in &antichain {
            ideal.union_with(p.down_set(a));
        }
        if !new_meets_exist(p, &ideal) {
            continue;
        }
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut row = p.up_set(i).clone();
                row.grow(n + 1);
                if ideal.contains(i) {
                    row.insert(n);
                }
                row
            })
            .collect();
        let mut top = FixedBitSet::with_capacity(n + 1);
        top.insert(n);
        up.push(top);
        out.push(Poset::from_indexed_up_sets(up));
    }
    out
}

/// The new element `z` has strict down-set `ideal`; old pairs keep their
/// meets, so only `z ^ y` needs a greatest lower bound.
fn new_meets_exist(p: &Poset, ideal: &FixedBitSet) -> bool {
    (0..p.len()).all(|y| {
        let mut lower = ideal.clone();
        lower.intersect_with(p.down_set(y));
        lower.ones().any(|m| lower.is_subset(p.down_set(m)))
    })
}

/// All antichains of `p`, including the empty one.
pub fn antichains(p: &Poset) -> Vec<Vec<usize>> {
    fn go(p: &Poset, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for x in start..p.len() {
            if cur.iter().all(|&c| !p.comparable(c, x)) {
                cur.push(x);
                go(p, x + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(p, 0, &mut Vec::new(), &mut out);
    out
}

/// Those with some element covering at least `k` others.
pub fn filter_min_cover(semis: &[Poset], k: usize) -> Vec<Poset> {
    semis
        .iter()
        .filter(|p| p.max_cover_degree() >= k)
        .cloned()
        .collect()
}
