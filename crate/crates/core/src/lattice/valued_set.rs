//! A finite subset `S` of an ambient lattice together with `f`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;

use super::{AmbientLattice, Element, Valuation};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::rational::Rational;

/// Elements are stored in a linear extension of the induced order, so
/// `x_i <= x_j` implies `i <= j`.
#[derive(Clone, Debug)]
pub struct ValuedSet {
    ambient: Arc<AmbientLattice>,
    elements: Vec<Element>,
    f: Valuation,
    induced: Arc<Poset>,
}

impl ValuedSet {
    /// Orders `elements` ascending by value (divisor ambient) or by a stable
    /// topological sort of the given order (table ambient).
    pub fn new(
        ambient: Arc<AmbientLattice>,
        mut elements: Vec<Element>,
        f: Valuation,
    ) -> Result<Self> {
        check_members(&ambient, &elements)?;
        if matches!(*ambient, AmbientLattice::Divisor) {
            elements.sort();
        }
        let probe = induced_order(&ambient, &elements)?;
        let ordered = probe
            .origin()
            .iter()
            .map(|&o| elements[o].clone())
            .collect();
        Self::with_order(ambient, ordered, f)
    }

    /// Keeps the caller's order, which must be a linear extension.
    pub fn with_order(
        ambient: Arc<AmbientLattice>,
        elements: Vec<Element>,
        f: Valuation,
    ) -> Result<Self> {
        check_members(&ambient, &elements)?;
        let n = elements.len();
        for i in 0..n {
            for j in 0..i {
                if ambient.leq(&elements[i], &elements[j])? {
                    return Err(Error::Shape(format!(
                        "{} precedes {} but lies above it",
                        elements[j], elements[i]
                    )));
                }
            }
        }
        let induced = induced_order(&ambient, &elements)?;
        debug_assert!(induced.origin().iter().enumerate().all(|(k, &o)| k == o));
        let induced = induced.with_labels(elements.iter().map(|e| e.to_string()).collect())?;
        let set = ValuedSet {
            ambient,
            elements,
            f,
            induced: Arc::new(induced),
        };
        set.validate_f()?;
        Ok(set)
    }

    /// Divisor-lattice set from integers.
    pub fn divisor(ints: &[BigUint], f: Valuation) -> Result<Self> {
        let elems = ints.iter().cloned().map(Element::Int).collect();
        Self::new(Arc::new(AmbientLattice::Divisor), elems, f)
    }

    pub fn divisor_u64(ints: &[u64], f: Valuation) -> Result<Self> {
        let elems: Vec<BigUint> = ints.iter().map(|&v| BigUint::from(v)).collect();
        Self::divisor(&elems, f)
    }

    /// `f` must be defined and nonzero on `S`, on all pairwise meets and on
    /// all pairwise joins.
    fn validate_f(&self) -> Result<()> {
        for (i, a) in self.elements.iter().enumerate() {
            self.f.eval(a)?;
            for b in &self.elements[i + 1..] {
                self.f.eval(&self.ambient.meet(a, b)?)?;
                self.f.eval(&self.ambient.join(a, b)?)?;
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> &Arc<AmbientLattice> {
        &self.ambient
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn f(&self) -> &Valuation {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The order on `S` inherited from the ambient.
    pub fn induced(&self) -> &Arc<Poset> {
        &self.induced
    }

    pub fn value(&self, e: &Element) -> Result<Rational> {
        self.f.eval(e)
    }

    /// `f(x_1), ..., f(x_n)`.
    pub fn values(&self) -> Vec<Rational> {
        self.elements
            .iter()
            .map(|e| self.f.eval(e).expect("validated on construction"))
            .collect()
    }

    pub fn meet_of(&self, i: usize, j: usize) -> Element {
        self.ambient
            .meet(&self.elements[i], &self.elements[j])
            .expect("members of the ambient")
    }

    pub fn join_of(&self, i: usize, j: usize) -> Element {
        self.ambient
            .join(&self.elements[i], &self.elements[j])
            .expect("members of the ambient")
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }

    pub fn is_meet_closed(&self) -> bool {
        super::is_meet_closed(&self.ambient, &self.elements).expect("members of the ambient")
    }

    pub fn require_meet_closed(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                let m = self.meet_of(i, j);
                if self.index_of(&m).is_none() {
                    return Err(Error::NotMeetClosed(
                        self.elements[i].to_string(),
                        self.elements[j].to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Same elements, different function.
    pub fn with_valuation(&self, f: Valuation) -> Result<Self> {
        let set = ValuedSet { f, ..self.clone() };
        set.validate_f()?;
        Ok(set)
    }

    /// `{x_1, ..., x_k}`.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::Index {
                index: k,
                n: self.len(),
            });
        }
        Self::with_order(
            self.ambient.clone(),
            self.elements[..k].to_vec(),
            self.f.clone(),
        )
    }
}

fn check_members(ambient: &AmbientLattice, elements: &[Element]) -> Result<()> {
    if elements.is_empty() {
        return Err(Error::Shape("empty element set".into()));
    }
    let mut seen = BTreeSet::new();
    for e in elements {
        ambient.contains(e)?;
        if !seen.insert(e) {
            return Err(Error::Duplicate(e.to_string()));
        }
    }
    Ok(())
}

fn induced_order(ambient: &AmbientLattice, elements: &[Element]) -> Result<Poset> {
    let n = elements.len();
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = ambient.leq(&elements[i], &elements[j])?;
        }
    }
    Poset::from_relation(n, |i, j| rel[i][j])
}
