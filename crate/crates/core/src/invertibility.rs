//! Element-by-element invertibility of join matrices.
//!
//! Adding `x_i` to `S_{i-1}` multiplies `det (S)_{1/f}` by
//! `c_i = sum_{x_k <= x_i} (1/f)(x_k) mu_S(x_k, x_i)`, so `[S]_f` is
//! invertible exactly when every `c_i` is nonzero. Steps are reported with
//! 1-based indices to match `x_1, ..., x_n`; function arguments are 0-based.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::lattice::{is_semimultiplicative, Element, PairScope, ValuedSet};
use crate::matrix::det_meet_via_convolution;
use crate::poset::Poset;
use crate::rational::{serde_rational, Rational};

/// The method `M_{m,i}`: `x_i` covers `m` elements of `S_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Method {
    pub i: usize,
    pub m: usize,
    pub covered: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStep {
    pub i: usize,
    pub m: usize,
    pub covered: Vec<usize>,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Invertible,
    Singular,
}

/// Whether the verdict transfers to the join matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// `f` is semimultiplicative on `S`; the verdict holds for `[S]_f`.
    Full,
    /// Only `(S)_{1/f}` is covered; `f` fails semimultiplicativity on `S`.
    MeetSideOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertibilityReport {
    pub verdict: Verdict,
    pub first_failure: Option<usize>,
    pub steps: Vec<ConstructionStep>,
    #[serde(with = "serde_rational")]
    pub det_core: Rational,
    pub scope: Scope,
}

/// Construction methods of an abstract order; indices must form a linear
/// extension, which every [`Poset`] guarantees.
pub fn construction_sequence_of(p: &Poset) -> Vec<Method> {
    (0..p.len())
        .map(|i| {
            let covered: Vec<usize> = p
                .lower_covers(i)
                .expect("index in range")
                .iter()
                .map(|c| c + 1)
                .collect();
            Method {
                i: i + 1,
                m: covered.len(),
                covered,
            }
        })
        .collect()
}

pub fn construction_sequence(vs: &ValuedSet) -> Result<Vec<Method>> {
    vs.require_meet_closed()?;
    Ok(construction_sequence_of(vs.induced()))
}

/// `c_1, ..., c_n` computed with the Mobius function of `S` itself.
pub fn condition_values(vs: &ValuedSet) -> Result<Vec<Rational>> {
    Ok(det_meet_via_convolution(vs, &vs.f().reciprocal())?.values)
}

fn build_report(vs: &ValuedSet, scope: Scope) -> Result<InvertibilityReport> {
    let methods = construction_sequence(vs)?;
    let prefix = det_meet_via_convolution(vs, &vs.f().reciprocal())?;
    let steps: Vec<ConstructionStep> = methods
        .into_iter()
        .zip(prefix.values)
        .map(|(m, c)| ConstructionStep {
            i: m.i,
            m: m.m,
            covered: m.covered,
            passed: !c.is_zero(),
            c,
        })
        .collect();
    let first_failure = steps.iter().find(|s| !s.passed).map(|s| s.i);
    Ok(InvertibilityReport {
        verdict: if first_failure.is_none() {
            Verdict::Invertible
        } else {
            Verdict::Singular
        },
        first_failure,
        steps,
        det_core: prefix.det,
        scope,
    })
}

fn semimultiplicative_witness(vs: &ValuedSet) -> Result<Option<(String, String)>> {
    let r = is_semimultiplicative(
        vs.ambient(),
        vs.f(),
        &PairScope::AllPairsOf(vs.elements().to_vec()),
    )?;
    Ok(r.witness.map(|(a, b)| (a.to_string(), b.to_string())))
}

/// Verdict for `[S]_f`; fails unless `S` is meet-closed and `f` is
/// semimultiplicative on pairs of `S`.
pub fn invertibility_report(vs: &ValuedSet) -> Result<InvertibilityReport> {
    vs.require_meet_closed()?;
    if let Some((a, b)) = semimultiplicative_witness(vs)? {
        return Err(Error::NotSemimultiplicative(a, b));
    }
    build_report(vs, Scope::Full)
}

/// Like [`invertibility_report`] but accepts any nonzero `f`, marking the
/// result [`Scope::MeetSideOnly`] when the join side is not implied.
pub fn meet_side_report(vs: &ValuedSet) -> Result<InvertibilityReport> {
    vs.require_meet_closed()?;
    let scope = if semimultiplicative_witness(vs)?.is_some() {
        Scope::MeetSideOnly
    } else {
        Scope::Full
    };
    build_report(vs, scope)
}

pub fn invertibility_reports(
    exec: Execution,
    sets: &[ValuedSet],
) -> Vec<Result<InvertibilityReport>> {
    exec::map(exec, sets, invertibility_report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    Chain,
    /// Pairwise meets of distinct `x_2, ..., x_n` all equal `x_1`.
    X1Set,
    /// An x1-set `x_1, ..., x_{n-1}` with an upper bound `x_n` on top.
    BoundedX1Set,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialCheck {
    pub holds: bool,
    /// 1-based index of the first violated clause.
    pub failing: Option<usize>,
}

fn is_x1_prefix(vs: &ValuedSet, len: usize) -> bool {
    let x1 = vs.element(0);
    (1..len).all(|i| (1..i).all(|j| vs.meet_of(i, j) == *x1))
        && (1..len).all(|i| vs.meet_of(0, i) == *x1)
}

/// Closed-form criteria for chains, x1-sets and bounded x1-sets.
pub fn special_condition_check(vs: &ValuedSet, kind: SpecialKind) -> Result<SpecialCheck> {
    let n = vs.len();
    let f = vs.values();
    let shape_ok = match kind {
        SpecialKind::Chain => vs.induced().is_chain(),
        SpecialKind::X1Set => is_x1_prefix(vs, n),
        SpecialKind::BoundedX1Set => {
            n >= 3 && is_x1_prefix(vs, n - 1) && (0..n).all(|k| vs.induced().leq(k, n - 1))
        }
    };
    if !shape_ok {
        return Err(Error::Shape(format!(
            "set does not have the {kind:?} shape"
        )));
    }
    let first = match kind {
        SpecialKind::Chain => (1..n).find(|&k| f[k] == f[k - 1]),
        SpecialKind::X1Set => (1..n).find(|&k| f[k] == f[0]),
        SpecialKind::BoundedX1Set => (1..n - 1).find(|&k| f[k] == f[0]).or_else(|| {
            let sum: Rational = f[1..n - 1].iter().map(|v| v.recip()).sum();
            let rhs = sum - Rational::from_integer((n as i64 - 3).into()) / &f[0];
            (f[n - 1].recip() == rhs).then_some(n - 1)
        }),
    };
    Ok(SpecialCheck {
        holds: first.is_none(),
        failing: first.map(|k| k + 1),
    })
}

fn check_c2_shape(vs: &ValuedSet, i: usize, i1: usize, i2: usize) -> Result<()> {
    let n = vs.len();
    for idx in [i, i1, i2] {
        if idx >= n {
            return Err(Error::Index { index: idx, n });
        }
    }
    let covers = vs.induced().lower_covers(i)?;
    if i1 == i2 || !covers.contains(&i1) || !covers.contains(&i2) {
        return Err(Error::Shape(format!(
            "x_{} and x_{} must be distinct lower covers of x_{}",
            i1 + 1,
            i2 + 1,
            i + 1
        )));
    }
    Ok(())
}

/// `1/f(x_i) != 1/f(x_{i1}) + 1/f(x_{i2}) - 1/f(x_{i1} ^ x_{i2})`.
pub fn condition_c2_meet_form(vs: &ValuedSet, i: usize, i1: usize, i2: usize) -> Result<bool> {
    check_c2_shape(vs, i, i1, i2)?;
    let g = |e: &Element| vs.value(e).map(|v| v.recip());
    let rhs = g(vs.element(i1))? + g(vs.element(i2))? - g(&vs.meet_of(i1, i2))?;
    Ok(g(vs.element(i))? != rhs)
}

/// `f(x_i) != f(x_{i1}) f(x_{i2}) / [f(x_{i1}) + f(x_{i2}) - f(x_{i1} v x_{i2})]`.
pub fn condition_c2_join_form(vs: &ValuedSet, i: usize, i1: usize, i2: usize) -> Result<bool> {
    check_c2_shape(vs, i, i1, i2)?;
    let (a, b) = (vs.value(vs.element(i1))?, vs.value(vs.element(i2))?);
    let denom = &a + &b - vs.value(&vs.join_of(i1, i2))?;
    if denom.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(vs.value(vs.element(i))? != a * b / denom)
}

/// Largest number of lower covers of any element.
pub fn max_cover_degree(p: &Poset) -> usize {
    p.max_cover_degree()
}
