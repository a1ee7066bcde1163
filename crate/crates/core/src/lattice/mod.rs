//! Ambient lattices, valuations and valued element sets.
//!
//! Two ambients are supported: a finite lattice given by meet and join
//! tables over a [`Poset`], and the divisor lattice on positive integers
//! where meet is gcd and join is lcm.

mod json;
mod valuation;
mod valued_set;

pub use json::{FSpec, ValuedSetJson};
pub use valuation::{factorize, PrimePowerRule, Valuation};
pub use valued_set::ValuedSet;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poset::Poset;

/// An element of an ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// A positive integer in the divisor lattice.
    Int(BigUint),
    /// An index into a finite table lattice.
    Node(usize),
}

impl Element {
    pub fn int(v: u64) -> Self {
        Element::Int(BigUint::from(v))
    }

    pub fn as_int(&self) -> Option<&BigUint> {
        match self {
            Element::Int(v) => Some(v),
            Element::Node(_) => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(v) => write!(f, "{v}"),
            Element::Node(i) => write!(f, "#{i}"),
        }
    }
}

/// Finite lattice with explicit meet and join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableLattice {
    poset: Poset,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

/// Tables are cross-checked against the order exhaustively up to this size.
const TABLE_CHECK_LIMIT: usize = 12;

impl TableLattice {
    pub fn new(poset: Poset, meet: Vec<Vec<usize>>, join: Vec<Vec<usize>>) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::Shape("empty lattice".into()));
        }
        for table in [&meet, &join] {
            if table.len() != n || table.iter().any(|r| r.len() != n) {
                return Err(Error::Shape(format!("tables must be {n}x{n}")));
            }
            if let Some(&bad) = table.iter().flatten().find(|&&v| v >= n) {
                return Err(Error::Index { index: bad, n });
            }
        }
        if n <= TABLE_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    if poset.meet(a, b) != Some(meet[a][b]) {
                        return Err(Error::Shape(format!("meet table wrong at ({a}, {b})")));
                    }
                    if poset.join(a, b) != Some(join[a][b]) {
                        return Err(Error::Shape(format!("join table wrong at ({a}, {b})")));
                    }
                }
            }
        }
        Ok(TableLattice { poset, meet, join })
    }

    /// Derives the tables from the order; fails unless `poset` is a lattice.
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::Shape("empty lattice".into()));
        }
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                meet[a][b] = poset
                    .meet(a, b)
                    .ok_or_else(|| Error::Shape(format!("{a} and {b} have no meet")))?;
                join[a][b] = poset
                    .join(a, b)
                    .ok_or_else(|| Error::Shape(format!("{a} and {b} have no join")))?;
            }
        }
        Ok(TableLattice { poset, meet, join })
    }

    /// A finite meet semilattice becomes a lattice once a greatest element
    /// exists; one is appended (as the last index) when missing.
    pub fn from_meet_semilattice(poset: &Poset) -> Result<Self> {
        if poset.is_empty() || !poset.is_meet_semilattice() {
            return Err(Error::Shape("not a nonempty meet semilattice".into()));
        }
        if poset.greatest().is_some() {
            return Self::from_poset(poset.clone());
        }
        let n = poset.len();
        let p = Poset::from_relation(n + 1, |i, j| j == n || (i < n && j < n && poset.leq(i, j)))?;
        Self::from_poset(p)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn meet_table(&self) -> &[Vec<usize>] {
        &self.meet
    }

    pub fn join_table(&self) -> &[Vec<usize>] {
        &self.join
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmbientLattice {
    Abstract(TableLattice),
    /// `(Z+, |)` with meet = gcd and join = lcm.
    Divisor,
}

impl AmbientLattice {
    pub fn contains(&self, e: &Element) -> Result<()> {
        match (self, e) {
            (AmbientLattice::Divisor, Element::Int(v)) if !v.is_zero() => Ok(()),
            (AmbientLattice::Divisor, Element::Int(v)) => Err(Error::NonPositive(v.to_string())),
            (AmbientLattice::Abstract(t), Element::Node(i)) if *i < t.len() => Ok(()),
            (AmbientLattice::Abstract(t), Element::Node(i)) => Err(Error::Index {
                index: *i,
                n: t.len(),
            }),
            (_, e) => Err(Error::Shape(format!(
                "{e} is not an element of this ambient"
            ))),
        }
    }

    pub fn meet(&self, a: &Element, b: &Element) -> Result<Element> {
        self.contains(a)?;
        self.contains(b)?;
        Ok(match (self, a, b) {
            (AmbientLattice::Divisor, Element::Int(x), Element::Int(y)) => Element::Int(x.gcd(y)),
            (AmbientLattice::Abstract(t), Element::Node(i), Element::Node(j)) => {
                Element::Node(t.meet[*i][*j])
            }
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn join(&self, a: &Element, b: &Element) -> Result<Element> {
        self.contains(a)?;
        self.contains(b)?;
        Ok(match (self, a, b) {
            (AmbientLattice::Divisor, Element::Int(x), Element::Int(y)) => Element::Int(x.lcm(y)),
            (AmbientLattice::Abstract(t), Element::Node(i), Element::Node(j)) => {
                Element::Node(t.join[*i][*j])
            }
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn leq(&self, a: &Element, b: &Element) -> Result<bool> {
        self.contains(a)?;
        self.contains(b)?;
        Ok(match (self, a, b) {
            (AmbientLattice::Divisor, Element::Int(x), Element::Int(y)) => y.is_multiple_of(x),
            (AmbientLattice::Abstract(t), Element::Node(i), Element::Node(j)) => {
                t.poset.leq(*i, *j)
            }
            _ => unreachable!("membership checked above"),
        })
    }

    /// Least element of the ambient (`1` for the divisor lattice).
    pub fn bottom(&self) -> Element {
        match self {
            AmbientLattice::Divisor => Element::int(1),
            AmbientLattice::Abstract(_) => Element::Node(0),
        }
    }
}

/// The poset of distinct positive integers under divisibility, indexed in
/// ascending numeric order and labelled by value.
pub fn divisor_subposet(ints: &[BigUint]) -> Result<Poset> {
    let mut sorted = ints.to_vec();
    if let Some(z) = sorted.iter().find(|v| v.is_zero()) {
        return Err(Error::NonPositive(z.to_string()));
    }
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Duplicate(w[0].to_string()));
    }
    let p = Poset::from_relation(sorted.len(), |i, j| sorted[j].is_multiple_of(&sorted[i]))?;
    let labels = sorted.iter().map(|v| v.to_string()).collect();
    p.with_labels(labels)
}

/// Smallest meet-closed superset of `elems`, sorted.
pub fn meet_closure(amb: &AmbientLattice, elems: &[Element]) -> Result<Vec<Element>> {
    let mut set: BTreeSet<Element> = BTreeSet::new();
    for e in elems {
        amb.contains(e)?;
        set.insert(e.clone());
    }
    let mut frontier: Vec<Element> = set.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        let current: Vec<Element> = set.iter().cloned().collect();
        for a in &frontier {
            for b in &current {
                let m = amb.meet(a, b)?;
                if !set.contains(&m) && !fresh.contains(&m) {
                    fresh.push(m);
                }
            }
        }
        set.extend(fresh.iter().cloned());
        frontier = fresh;
    }
    Ok(set.into_iter().collect())
}

pub fn is_meet_closed(amb: &AmbientLattice, elems: &[Element]) -> Result<bool> {
    let given: BTreeSet<&Element> = elems.iter().collect();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i + 1..] {
            if !given.contains(&amb.meet(a, b)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which pairs a semimultiplicativity check covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairScope {
    /// Every pair of the ambient; only available for table lattices.
    All,
    /// Every pair drawn from the given elements.
    AllPairsOf(Vec<Element>),
    Pairs(Vec<(Element, Element)>),
    /// `count` seeded random pairs; divisor samples are drawn from `1..=bound`.
    Sample {
        count: usize,
        seed: u64,
        bound: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemimultiplicativeReport {
    pub holds: bool,
    pub witness: Option<(Element, Element)>,
    pub tested_pairs: usize,
    /// True only when every pair of a finite ambient was checked.
    pub exhaustive: bool,
}

/// Checks `f(x) f(y) = f(x ^ y) f(x v y)` over `scope`.
pub fn is_semimultiplicative(
    amb: &AmbientLattice,
    f: &Valuation,
    scope: &PairScope,
) -> Result<SemimultiplicativeReport> {
    let pairs: Vec<(Element, Element)> = match (scope, amb) {
        (PairScope::All, AmbientLattice::Abstract(t)) => {
            let n = t.len();
            (0..n)
                .flat_map(|i| (i..n).map(move |j| (Element::Node(i), Element::Node(j))))
                .collect()
        }
        (PairScope::All, AmbientLattice::Divisor) => {
            return Err(Error::Shape(
                "the divisor lattice is infinite; check explicit pairs or a sample".into(),
            ))
        }
        (PairScope::AllPairsOf(es), _) => es
            .iter()
            .enumerate()
            .flat_map(|(i, a)| es[i..].iter().map(move |b| (a.clone(), b.clone())))
            .collect(),
        (PairScope::Pairs(ps), _) => ps.clone(),
        (PairScope::Sample { count, seed, bound }, _) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut draw = || match amb {
                AmbientLattice::Divisor => Element::int(rng.gen_range(1..=(*bound).max(1))),
                AmbientLattice::Abstract(t) => Element::Node(rng.gen_range(0..t.len())),
            };
            (0..*count).map(|_| (draw(), draw())).collect()
        }
    };
    let exhaustive = matches!((scope, amb), (PairScope::All, AmbientLattice::Abstract(_)));
    for (k, (a, b)) in pairs.iter().enumerate() {
        let lhs = f.eval(a)? * f.eval(b)?;
        let rhs = f.eval(&amb.meet(a, b)?)? * f.eval(&amb.join(a, b)?)?;
        if lhs != rhs {
            return Ok(SemimultiplicativeReport {
                holds: false,
                witness: Some((a.clone(), b.clone())),
                tested_pairs: k + 1,
                exhaustive: false,
            });
        }
    }
    Ok(SemimultiplicativeReport {
        holds: true,
        witness: None,
        tested_pairs: pairs.len(),
        exhaustive,
    })
}
