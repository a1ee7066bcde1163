//! Finite posets indexed by a linear extension.
//!
//! Every [`Poset`] keeps its elements in an order where `x_i < x_j` implies
//! `i < j`, so every prefix `{x_0, .., x_i}` is a down-set. Construction
//! re-indexes the input when necessary; [`Poset::origin`] maps back to the
//! caller's indices.

mod canon;
mod incidence;

pub use canon::{
    canonical_form, canonicalize, canonicalize_with_bound, CanonicalKey, DEFAULT_CANON_BOUND,
};
pub use incidence::{convolve, IncidenceFunction};

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Poset {
    n: usize,
    /// `down[j]` holds every `i` with `i <= j`.
    down: Vec<FixedBitSet>,
    /// `up[i]` holds every `j` with `i <= j`.
    up: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
    origin: Vec<usize>,
}

/// Wire format: `{"n": 4, "covers": [[0,1],[0,2],[1,3],[2,3]], "labels": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.down == other.down
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds the poset generated by `covers` (pairs `(lower, upper)`).
    ///
    /// The order is the reflexive-transitive closure of the pairs; elements
    /// are re-indexed to a linear extension (ties broken by input index) and
    /// the stored covers are recomputed as the transitive reduction.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        for &(a, b) in covers {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::Index { index: idx, n });
                }
            }
            if a == b {
                return Err(Error::Cycle(a));
            }
            up[a].insert(b);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_up_sets(up)
    }

    /// Builds a poset from an explicit order relation, checking the partial
    /// order axioms.
    pub fn from_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            if !leq(i, i) {
                return Err(Error::Shape(format!("relation is not reflexive at {i}")));
            }
            for j in 0..n {
                if leq(i, j) {
                    row.insert(j);
                }
            }
        }
        for i in 0..n {
            for j in up[i].ones() {
                if !up[j].is_subset(&up[i]) {
                    return Err(Error::Shape(format!(
                        "relation is not transitive through {j}"
                    )));
                }
            }
        }
        Self::from_up_sets(up)
    }

    /// `up` must be reflexive and transitive; antisymmetry is checked here.
    fn from_up_sets(up: Vec<FixedBitSet>) -> Result<Self> {
        let n = up.len();
        for i in 0..n {
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(Error::Cycle(i));
                }
            }
        }
        // Kahn's algorithm, smallest available input index first.
        let mut indegree: Vec<usize> = (0..n)
            .map(|j| (0..n).filter(|&i| i != j && up[i].contains(j)).count())
            .collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&j| indegree[j] == 0).map(Reverse).collect();
        let mut origin = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            origin.push(i);
            for j in up[i].ones() {
                if j != i {
                    indegree[j] -= 1;
                    if indegree[j] == 0 {
                        ready.push(Reverse(j));
                    }
                }
            }
        }
        debug_assert_eq!(origin.len(), n);
        let mut position = vec![0; n];
        for (new, &old) in origin.iter().enumerate() {
            position[old] = new;
        }
        let mut new_up = vec![FixedBitSet::with_capacity(n); n];
        for old in 0..n {
            for j in up[old].ones() {
                new_up[position[old]].insert(position[j]);
            }
        }
        let mut poset = Self::from_indexed_up_sets(new_up);
        poset.origin = origin;
        Ok(poset)
    }

    /// Trusted constructor: `up` is a partial order whose indexing is already
    /// a linear extension.
    pub(crate) fn from_indexed_up_sets(up: Vec<FixedBitSet>) -> Self {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.ones() {
                debug_assert!(i <= j, "indexing is not a linear extension");
                down[j].insert(i);
            }
        }
        let mut poset = Poset {
            n,
            down,
            up,
            covers: Vec::new(),
            labels: None,
            origin: (0..n).collect(),
        };
        poset.covers = poset.transitive_reduction();
        poset
    }

    fn transitive_reduction(&self) -> Vec<(usize, usize)> {
        let mut covers = Vec::new();
        for j in 0..self.n {
            for i in self.down[j].ones() {
                if i == j {
                    continue;
                }
                let mut between = self.up[i].clone();
                between.intersect_with(&self.down[j]);
                if between.count_ones(..) == 2 {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        covers
    }

    /// Attaches display labels given in the caller's original index order.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Shape(format!(
                "{} labels for {} elements",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(self.origin.iter().map(|&o| labels[o].clone()).collect());
        Ok(self)
    }

    pub(crate) fn set_labels_indexed(&mut self, labels: Vec<String>) {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
    }

    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|j| (j - 1, j)).collect();
        Self::from_covers(n, &covers).expect("chain is a valid poset")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_covers(n, &[]).expect("antichain is a valid poset")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn down_set(&self, j: usize) -> &FixedBitSet {
        &self.down[j]
    }

    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    /// Maps each index to the caller's index at construction time.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.n {
            Err(Error::Index {
                index: j,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Elements covered by `j`.
    pub fn lower_covers(&self, j: usize) -> Result<Vec<usize>> {
        self.check_index(j)?;
        Ok(self
            .covers
            .iter()
            .filter(|c| c.1 == j)
            .map(|c| c.0)
            .collect())
    }

    /// Elements covering `i`.
    pub fn upper_covers(&self, i: usize) -> Result<Vec<usize>> {
        self.check_index(i)?;
        Ok(self
            .covers
            .iter()
            .filter(|c| c.0 == i)
            .map(|c| c.1)
            .collect())
    }

    /// Downward closure of `idxs`, sorted.
    pub fn order_ideal(&self, idxs: &[usize]) -> Result<Vec<usize>> {
        let mut acc = FixedBitSet::with_capacity(self.n);
        for &j in idxs {
            self.check_index(j)?;
            acc.union_with(&self.down[j]);
        }
        Ok(acc.ones().collect())
    }

    pub fn least(&self) -> Option<usize> {
        (self.n > 0 && self.up[0].count_ones(..) == self.n).then_some(0)
    }

    pub fn greatest(&self) -> Option<usize> {
        let last = self.n.checked_sub(1)?;
        (self.down[last].count_ones(..) == self.n).then_some(last)
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.up[i].count_ones(..) == 1)
            .collect()
    }

    /// Greatest lower bound of `i` and `j` inside the poset, if it exists.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        let mut lower = self.down[i].clone();
        lower.intersect_with(&self.down[j]);
        // A glb, if any, carries the largest index among the lower bounds.
        let g = lower.maximum()?;
        lower.is_subset(&self.down[g]).then_some(g)
    }

    /// Least upper bound of `i` and `j` inside the poset, if it exists.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let mut upper = self.up[i].clone();
        upper.intersect_with(&self.up[j]);
        let g = upper.minimum()?;
        upper.is_subset(&self.up[g]).then_some(g)
    }

    pub fn is_meet_semilattice(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.meet(i, j).is_some()))
    }

    pub fn is_lattice(&self) -> bool {
        (0..self.n).all(|i| {
            (i + 1..self.n).all(|j| self.meet(i, j).is_some() && self.join(i, j).is_some())
        })
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.comparable(i, j)))
    }

    /// Length of the longest chain ending at each element (minimal elements
    /// have height 0).
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.n];
        for j in 0..self.n {
            h[j] = self
                .covers
                .iter()
                .filter(|c| c.1 == j)
                .map(|c| h[c.0] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// Largest number of lower covers of any element.
    pub fn max_cover_degree(&self) -> usize {
        let mut deg = vec![0; self.n];
        for &(_, b) in &self.covers {
            deg[b] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Relabels: element `i` is fed back in as input index `perm[i]` and the
    /// result is rebuilt (and so re-indexed to a linear extension).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Shape("permutation length".into()));
        }
        let covers: Vec<_> = self
            .covers
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        let mut p = Self::from_covers(self.n, &covers)?;
        if let Some(labels) = &self.labels {
            let mut by_input = vec![String::new(); self.n];
            for (i, l) in labels.iter().enumerate() {
                by_input[perm[i]] = l.clone();
            }
            p = p.with_labels(by_input)?;
        }
        Ok(p)
    }

    /// The sub-poset induced on the sorted index list `idxs`.
    pub fn induced(&self, idxs: &[usize]) -> Result<Self> {
        for &i in idxs {
            self.check_index(i)?;
        }
        let k = idxs.len();
        let mut up = vec![FixedBitSet::with_capacity(k); k];
        for (a, &i) in idxs.iter().enumerate() {
            for (b, &j) in idxs.iter().enumerate() {
                if self.leq(i, j) {
                    up[a].insert(b);
                }
            }
        }
        let mut p = Self::from_up_sets(up)?;
        if let Some(labels) = &self.labels {
            let l = p.origin.iter().map(|&o| labels[idxs[o]].clone()).collect();
            p.labels = Some(l);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            n: self.n,
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let covers: Vec<_> = json.covers.iter().map(|c| (c[0], c[1])).collect();
        let p = Self::from_covers(json.n, &covers)?;
        match &json.labels {
            Some(l) => p.with_labels(l.clone()),
            None => Ok(p),
        }
    }

    /// Graphviz rendering of the Hasse diagram, one rank per height.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
        for i in 0..self.n {
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}\"];",
                self.label(i).replace('"', "\\\"")
            );
        }
        let heights = self.heights();
        let top = heights.iter().copied().max().unwrap_or(0);
        for h in 0..=top {
            let members: Vec<String> = (0..self.n)
                .filter(|&i| heights[i] == h)
                .map(|i| format!("n{i};"))
                .collect();
            if !members.is_empty() {
                let _ = writeln!(out, "  {{ rank=same; {} }}", members.join(" "));
            }
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}
