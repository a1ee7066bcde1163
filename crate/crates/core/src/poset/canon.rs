//! Canonical forms of small posets.
//!
//! The key is the lexicographically smallest column encoding of the order
//! relation over all labelings that sort elements by a refined invariant
//! colouring. Sorting first by down-set size keeps every candidate labeling a
//! linear extension, so only the strict upper triangle needs encoding.

use fixedbitset::FixedBitSet;

use super::Poset;
use crate::error::{Error, Result};

pub const DEFAULT_CANON_BOUND: usize = 10;

/// Hard ceiling imposed by the 32-bit column encoding.
const MAX_CANON_BOUND: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    bytes: Vec<u8>,
}

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.first().copied().unwrap_or(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.bytes[1..]
            .chunks_exact(4)
            .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
    }

    /// The canonical representative encoded by this key.
    pub fn to_poset(&self) -> Poset {
        let n = self.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        for (j, col) in self.columns().enumerate() {
            for (i, row) in up.iter_mut().enumerate().take(j) {
                if col >> (31 - i) & 1 == 1 {
                    row.insert(j);
                }
            }
        }
        Poset::from_indexed_up_sets(up)
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn canonicalize(p: &Poset) -> Result<CanonicalKey> {
    canonicalize_with_bound(p, DEFAULT_CANON_BOUND)
}

pub fn canonicalize_with_bound(p: &Poset, bound: usize) -> Result<CanonicalKey> {
    Ok(search(p, bound)?.0)
}

/// Canonical key plus the poset relabeled into canonical order (labels kept).
pub fn canonical_form(p: &Poset) -> Result<(CanonicalKey, Poset)> {
    let (key, perm) = search(p, DEFAULT_CANON_BOUND)?;
    let mut q = key.to_poset();
    if let Some(labels) = p.labels() {
        q.set_labels_indexed(perm.iter().map(|&v| labels[v].clone()).collect());
    }
    Ok((key, q))
}

/// Stable colour refinement seeded with (down-set size, up-set size).
fn colours(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in p.covers() {
        lower[b].push(a);
        upper[a].push(b);
    }
    let seed: Vec<(usize, usize)> = (0..n)
        .map(|i| (p.down_set(i).count_ones(..), p.up_set(i).count_ones(..)))
        .collect();
    let mut colour = rank(&seed);
    loop {
        let sig: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut lo: Vec<usize> = lower[v].iter().map(|&u| colour[u]).collect();
                let mut hi: Vec<usize> = upper[v].iter().map(|&u| colour[u]).collect();
                lo.sort_unstable();
                hi.sort_unstable();
                (colour[v], lo, hi)
            })
            .collect();
        let next = rank(&sig);
        let classes = |c: &[usize]| c.iter().copied().max().map_or(0, |m| m + 1);
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

fn rank<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = sig.to_vec();
    distinct.sort();
    distinct.dedup();
    sig.iter()
        .map(|s| distinct.binary_search(s).unwrap())
        .collect()
}

struct Search<'a> {
    p: &'a Poset,
    n: usize,
    /// Colour required at each canonical position.
    slot_colour: Vec<usize>,
    colour: Vec<usize>,
    /// Elements with identical strict up- and down-sets share a twin class.
    twin: Vec<usize>,
    perm: Vec<usize>,
    cols: Vec<u32>,
    used: u64,
    best: Option<(Vec<u32>, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, pos: usize) {
        if pos == self.n {
            let better = match &self.best {
                None => true,
                Some((b, _)) => self.cols < *b,
            };
            if better {
                self.best = Some((self.cols.clone(), self.perm.clone()));
            }
            return;
        }
        for v in 0..self.n {
            if self.used >> v & 1 == 1 || self.colour[v] != self.slot_colour[pos] {
                continue;
            }
            // Interchangeable twins: only the lowest unused one is tried.
            if (0..v).any(|u| self.used >> u & 1 == 0 && self.twin[u] == self.twin[v]) {
                continue;
            }
            let mut col = 0u32;
            for (i, &u) in self.perm.iter().enumerate() {
                if self.p.leq(u, v) {
                    col |= 1 << (31 - i);
                }
            }
            self.cols.push(col);
            let prune = match &self.best {
                Some((b, _)) => self.cols[..] > b[..=pos],
                None => false,
            };
            if !prune {
                self.perm.push(v);
                self.used |= 1 << v;
                self.run(pos + 1);
                self.used &= !(1 << v);
                self.perm.pop();
            }
            self.cols.pop();
        }
    }
}

fn search(p: &Poset, bound: usize) -> Result<(CanonicalKey, Vec<usize>)> {
    let n = p.len();
    let bound = bound.min(MAX_CANON_BOUND);
    if n > bound {
        return Err(Error::Size { n, bound });
    }
    let colour = colours(p);
    let mut slot_colour = colour.clone();
    slot_colour.sort_unstable();

    let strict = |s: &FixedBitSet, v: usize| {
        let mut s = s.clone();
        s.set(v, false);
        s
    };
    let mut twin = vec![0; n];
    let mut reps: Vec<usize> = Vec::new();
    for (v, slot) in twin.iter_mut().enumerate() {
        let found = reps.iter().position(|&r| {
            strict(p.down_set(r), r) == strict(p.down_set(v), v)
                && strict(p.up_set(r), r) == strict(p.up_set(v), v)
        });
        *slot = match found {
            Some(k) => k,
            None => {
                reps.push(v);
                reps.len() - 1
            }
        };
    }

    let mut s = Search {
        p,
        n,
        slot_colour,
        colour,
        twin,
        perm: Vec::with_capacity(n),
        cols: Vec::with_capacity(n),
        used: 0,
        best: None,
    };
    s.run(0);
    let (cols, perm) = s.best.unwrap_or_default();
    let mut bytes = Vec::with_capacity(1 + 4 * n);
    bytes.push(n as u8);
    for c in cols {
        bytes.extend_from_slice(&c.to_be_bytes());
    }
    Ok((CanonicalKey { bytes }, perm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diamond() -> Poset {
        Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let posets = [
            diamond(),
            Poset::from_covers(5, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)]).unwrap(),
            Poset::from_covers(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (3, 5), (4, 5)])
                .unwrap(),
            Poset::antichain(7),
        ];
        for p in &posets {
            let key = canonicalize(p).unwrap();
            for _ in 0..100 {
                let mut perm: Vec<usize> = (0..p.len()).collect();
                perm.shuffle(&mut rng);
                assert_eq!(canonicalize(&p.permuted(&perm).unwrap()).unwrap(), key);
            }
        }
    }

    #[test]
    fn distinguishes_small_classes() {
        let chain = Poset::chain(3);
        let vee = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        assert_ne!(canonicalize(&chain).unwrap(), canonicalize(&vee).unwrap());
        let n5 = Poset::from_covers(5, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        let o5 = Poset::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert_ne!(canonicalize(&n5).unwrap(), canonicalize(&o5).unwrap());
    }

    #[test]
    fn key_decodes_to_isomorphic_poset() {
        let p = Poset::from_covers(5, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        let key = canonicalize(&p).unwrap();
        let q = key.to_poset();
        assert_eq!(q.len(), 5);
        assert_eq!(canonicalize(&q).unwrap(), key);
        let (k2, r) = canonical_form(&p).unwrap();
        assert_eq!(k2, key);
        assert_eq!(r, q);
    }

    #[test]
    fn size_bound() {
        assert_eq!(
            canonicalize(&Poset::chain(11)),
            Err(Error::Size { n: 11, bound: 10 })
        );
        assert!(canonicalize_with_bound(&Poset::chain(11), 12).is_ok());
    }

    #[test]
    fn canonical_form_keeps_labels() {
        let p = Poset::from_covers(3, &[(0, 1), (0, 2)])
            .unwrap()
            .with_labels(vec!["1".into(), "2".into(), "3".into()])
            .unwrap();
        let (_, q) = canonical_form(&p).unwrap();
        assert_eq!(q.label(0), "1");
    }
}
