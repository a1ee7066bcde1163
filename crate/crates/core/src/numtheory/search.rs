//! Structured search for singular LCM matrices of the `S_{3,8}` shape.
//!
//! Atoms `p, q, r` are pairwise coprime; the middle layer is
//! `pq u, pr v, qr w`; the top `T` is forced by `c_8 = 0`, i.e.
//! `1/T = 1/m_1 + 1/m_2 + 1/m_3 - 1/p - 1/q - 1/r + 1`, and kept only when
//! it is a multiple of the middle layer's lcm.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::enumeration::SemilatticeCatalog;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::invertibility::condition_values;
use crate::lattice::{divisor_subposet, Valuation, ValuedSet};

pub const S38_LABEL: &str = "S_{3,8}";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTemplate {
    /// Catalog label every hit must classify to before padding.
    pub target: String,
    /// Candidate atom triples, each pairwise coprime.
    pub atoms: Vec<[u64; 3]>,
    /// Middle-layer multipliers `u, v, w` range over `1..=multiplier_bound`.
    pub multiplier_bound: u64,
    /// Size of returned sets; sizes above 8 are reached by chain padding.
    pub n: usize,
}

impl SearchTemplate {
    /// Atoms drawn from pairwise coprime triples in `2..=atom_bound`.
    pub fn s38(atom_bound: u64, multiplier_bound: u64) -> Self {
        let mut atoms = Vec::new();
        for p in 2..=atom_bound {
            for q in p + 1..=atom_bound {
                for r in q + 1..=atom_bound {
                    if p.gcd(&q) == 1 && p.gcd(&r) == 1 && q.gcd(&r) == 1 {
                        atoms.push([p, q, r]);
                    }
                }
            }
        }
        SearchTemplate {
            target: S38_LABEL.into(),
            atoms,
            multiplier_bound,
            n: 8,
        }
    }

    pub fn with_size(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.target != S38_LABEL {
            return Err(Error::Param(format!(
                "unsupported template target {:?}",
                self.target
            )));
        }
        if self.n < 8 {
            return Err(Error::Param(format!("size {} is below 8", self.n)));
        }
        for &[p, q, r] in &self.atoms {
            if p < 2 || q < 2 || r < 2 || p.gcd(&q) != 1 || p.gcd(&r) != 1 || q.gcd(&r) != 1 {
                return Err(Error::Param(format!(
                    "atoms ({p}, {q}, {r}) must be pairwise coprime and >= 2"
                )));
            }
        }
        Ok(())
    }
}

fn as_strings<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    #[serde(serialize_with = "as_strings")]
    pub elements: Vec<BigUint>,
    pub atoms: [u64; 3],
    pub multipliers: [u64; 3],
}

/// Forced top for one parameter tuple, by exact integer arithmetic.
fn forced_top(atoms: [u64; 3], mults: [u64; 3]) -> Option<(i128, [i128; 3])> {
    let [p, q, r] = atoms.map(i128::from);
    let [u, v, w] = mults.map(i128::from);
    let mids = [p * q * u, p * r * v, q * r * w];
    let den = mids
        .iter()
        .chain([p, q, r].iter())
        .try_fold(1i128, |acc, &x| acc.checked_mul(x))?;
    let num = den / mids[0] + den / mids[1] + den / mids[2] - den / p - den / q - den / r + den;
    if num <= 0 || den % num != 0 {
        return None;
    }
    let top = den / num;
    let l = mids[0].lcm(&mids[1]).lcm(&mids[2]);
    (top % l == 0).then_some((top, mids))
}

/// Appends `2T, 4T, ...` above the top `T` until `n` elements. Each new
/// element covers only its predecessor, so `c_8 = 0` survives.
pub fn pad_with_chain(mut set: Vec<BigUint>, n: usize) -> Vec<BigUint> {
    set.sort();
    while set.len() < n {
        let next = set.last().map_or_else(|| BigUint::from(1u32), |t| t * 2u32);
        set.push(next);
    }
    set
}

fn verify_hit(
    template: &SearchTemplate,
    atoms: [u64; 3],
    mults: [u64; 3],
    top: i128,
    mids: [i128; 3],
) -> Option<SearchHit> {
    let mut base: Vec<BigUint> = vec![BigUint::from(1u32)];
    base.extend(atoms.iter().map(|&a| BigUint::from(a)));
    base.extend(mids.iter().map(|&m| BigUint::from(m as u128)));
    base.push(BigUint::from(top as u128));
    let vs = ValuedSet::divisor(&base, Valuation::Identity).ok()?;
    if !vs.is_meet_closed() {
        return None;
    }
    let shape = SemilatticeCatalog::builtin().classify(&divisor_subposet(&base).ok()?)?;
    if shape != template.target || !condition_values(&vs).ok()?.last()?.is_zero() {
        return None;
    }
    Some(SearchHit {
        elements: pad_with_chain(base, template.n),
        atoms,
        multipliers: mults,
    })
}

/// Singular gcd-closed sets in colex order of `(p, q, r, u, v, w)` (the
/// last coordinate most significant), at most `limit` of them.
pub fn search_singular(
    template: &SearchTemplate,
    limit: usize,
    exec: Execution,
) -> Result<Vec<SearchHit>> {
    template.validate()?;
    let b = template.multiplier_bound;
    let per_w: Vec<Vec<SearchHit>> = exec::map_range(exec, b as usize, |wi| {
        let w = wi as u64 + 1;
        let mut hits = Vec::new();
        for v in 1..=b {
            for u in 1..=b {
                for &atoms in &template.atoms {
                    if let Some((top, mids)) = forced_top(atoms, [u, v, w]) {
                        hits.extend(verify_hit(template, atoms, [u, v, w], top, mids));
                    }
                }
            }
        }
        hits
    });
    Ok(per_w.into_iter().flatten().take(limit).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{to_biguints, verify_counterexample, HONG_SET};

    #[test]
    fn finds_hong_set() {
        let t = SearchTemplate::s38(5, 55);
        let hits = search_singular(&t, usize::MAX, Execution::default()).unwrap();
        let hong = to_biguints(&HONG_SET);
        assert!(hits.iter().any(|h| h.elements == hong));
        for h in &hits {
            assert!(verify_counterexample(&h.elements).unwrap().singular);
        }
    }

    #[test]
    fn tiny_bounds_are_empty() {
        assert!(
            search_singular(&SearchTemplate::s38(5, 3), 10, Execution::Sequential)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn padding_keeps_singularity() {
        let padded = pad_with_chain(to_biguints(&HONG_SET), 10);
        assert_eq!(padded.len(), 10);
        assert_eq!(padded[9], BigUint::from(4 * 227700u64));
        let r = verify_counterexample(&padded).unwrap();
        assert!(r.singular && r.gcd_closed);
    }

    #[test]
    fn template_validation() {
        let mut t = SearchTemplate::s38(5, 3);
        t.atoms.push([2, 4, 5]);
        assert!(search_singular(&t, 1, Execution::Sequential).is_err());
        assert!(search_singular(
            &SearchTemplate::s38(5, 3).with_size(7),
            1,
            Execution::Sequential
        )
        .is_err());
    }
}
