//! GCD/LCM specifics on the divisor lattice: counterexample diagnosis,
//! singular-set search, class inequalities for `f = N`, and random
//! gcd-closed sets.

mod inequality;
mod search;

pub use inequality::{
    class_expression, class_inequality_instance, closed_form, parse_params, sample_params,
    unchecked_expression, InequalityClass, InequalityInstance,
};
pub use search::{pad_with_chain, search_singular, SearchHit, SearchTemplate};

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enumeration::SemilatticeCatalog;
use crate::error::{Error, Result};
use crate::invertibility::{invertibility_report, InvertibilityReport};
use crate::lattice::{divisor_subposet, factorize, PrimePowerRule, Valuation, ValuedSet};
use crate::matrix::{determinant, join_matrix};
use crate::poset::Poset;
use crate::rational::{from_biguint, ratio, serde_rational, Rational};

/// Eight-element singular gcd-closed set.
pub const HONG_SET: [u64; 8] = [1, 2, 3, 5, 36, 230, 825, 227700];

/// Earlier nine-element singular gcd-closed set.
pub const NINE_SET: [u64; 9] = [1, 2, 3, 4, 5, 6, 10, 45, 180];

pub fn to_biguints(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

pub fn is_gcd_closed(ints: &[BigUint]) -> bool {
    let set: BTreeSet<&BigUint> = ints.iter().collect();
    ints.iter()
        .enumerate()
        .all(|(i, a)| ints[i + 1..].iter().all(|b| set.contains(&a.gcd(b))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub elements: Vec<String>,
    pub gcd_closed: bool,
    pub class: Option<String>,
    /// `det [S]` by exact elimination.
    #[serde(with = "serde_rational")]
    pub det: Rational,
    pub singular: bool,
    /// Present when `S` is gcd-closed: step-by-step conditions for `f = N`.
    pub report: Option<InvertibilityReport>,
}

/// Full diagnosis of the LCM matrix of `ints`. For gcd-closed input the
/// determinant is computed twice, by elimination and as
/// `(prod x_i)^2 prod c_i`, and the two must agree.
pub fn verify_counterexample(ints: &[BigUint]) -> Result<CounterexampleReport> {
    let vs = ValuedSet::divisor(ints, Valuation::Identity)?;
    let sorted: Vec<BigUint> = vs
        .elements()
        .iter()
        .map(|e| e.as_int().expect("divisor").clone())
        .collect();
    let det = determinant(&join_matrix(&vs)?)?;
    let gcd_closed = vs.is_meet_closed();
    let report = if gcd_closed {
        let r = invertibility_report(&vs)?;
        let prod: BigUint = sorted.iter().product();
        let square = from_biguint(&(&prod * &prod));
        if square * &r.det_core != det {
            return Err(Error::Mismatch);
        }
        Some(r)
    } else {
        None
    };
    let class = SemilatticeCatalog::builtin().classify(&divisor_subposet(&sorted)?);
    Ok(CounterexampleReport {
        elements: sorted.iter().map(|v| v.to_string()).collect(),
        gcd_closed,
        class,
        singular: det.is_zero(),
        det,
        report,
    })
}

const RANDOM_ATTEMPTS: usize = 1000;

/// A gcd-closed set of `n` distinct integers in `1..=bound`, reproducible
/// per seed. Fresh values, multiples of members and lcms of members are
/// inserted until the gcd closure reaches `n`; surplus maximal elements are
/// then dropped at random.
pub fn random_gcd_closed(n: usize, bound: u64, seed: u64) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::Size { n, bound: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let mut set: BTreeSet<u64> = BTreeSet::new();
        let mut stalls = 0;
        while set.len() < n && stalls < 4 * n + 8 {
            let before = set.len();
            if let Some(v) = random_move(&set, bound, &mut rng) {
                close_with(&mut set, v);
            }
            stalls = if set.len() == before { stalls + 1 } else { 0 };
        }
        if set.len() < n {
            continue;
        }
        while set.len() > n {
            // Dropping a maximal element never breaks gcd-closure.
            let maximal: Vec<u64> = set
                .iter()
                .copied()
                .filter(|&x| !set.iter().any(|&y| y != x && y % x == 0))
                .collect();
            set.remove(&maximal[rng.gen_range(0..maximal.len())]);
        }
        return Ok(set.into_iter().map(BigUint::from).collect());
    }
    Err(Error::Exhaustion {
        n,
        bound: bound.to_string(),
    })
}

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// A gcd-closed set whose divisibility order is isomorphic to the meet
/// semilattice `p`: element `x` maps to `c * prod_{y <= x, y != bottom} q_y^{e_y}`
/// with distinct random primes `q_y`, so gcds realize meets.
pub fn realize_semilattice(p: &Poset, bound: u64, seed: u64) -> Result<Vec<BigUint>> {
    let n = p.len();
    if n == 0 || !p.is_meet_semilattice() {
        return Err(Error::Shape("expected a nonempty meet semilattice".into()));
    }
    if n > SMALL_PRIMES.len() + 1 {
        return Err(Error::Size {
            n,
            bound: SMALL_PRIMES.len() + 1,
        });
    }
    let bottom = p
        .least()
        .expect("finite meet semilattices have a least element");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let mut primes = SMALL_PRIMES.to_vec();
        primes.shuffle(&mut rng);
        let factor: Vec<u64> = (0..n)
            .map(|y| {
                if y == bottom {
                    1
                } else {
                    primes[y - usize::from(y > bottom)].pow(rng.gen_range(1..=2))
                }
            })
            .collect();
        let c = rng.gen_range(1..=6u64);
        let values: Option<Vec<u64>> = (0..n)
            .map(|x| {
                p.down_set(x)
                    .ones()
                    .try_fold(c, |acc, y| acc.checked_mul(factor[y]))
            })
            .collect();
        if let Some(v) = values.filter(|v| v.iter().all(|&x| x <= bound)) {
            let mut out: Vec<BigUint> = v.into_iter().map(BigUint::from).collect();
            out.sort();
            return Ok(out);
        }
    }
    Err(Error::Exhaustion {
        n,
        bound: bound.to_string(),
    })
}

fn random_move(set: &BTreeSet<u64>, bound: u64, rng: &mut ChaCha8Rng) -> Option<u64> {
    let members: Vec<u64> = set.iter().copied().collect();
    let pick = |rng: &mut ChaCha8Rng| members[rng.gen_range(0..members.len())];
    match rng.gen_range(0..10) {
        _ if members.is_empty() => Some(log_uniform(bound, rng)),
        0..=1 => Some(log_uniform(bound, rng)),
        2..=3 => pick(rng).checked_mul(rng.gen_range(2..=12)),
        _ => {
            let mut l = 1u64;
            for _ in 0..if rng.gen_bool(0.6) { 3 } else { 2 } {
                let x = pick(rng);
                l = (l / l.gcd(&x)).checked_mul(x)?;
            }
            l.checked_mul(rng.gen_range(1..=3))
        }
    }
    .filter(|&v| v >= 1 && v <= bound)
}

/// Roughly uniform in `ln v` over `1..=bound`.
fn log_uniform(bound: u64, rng: &mut ChaCha8Rng) -> u64 {
    let bits = 64 - bound.leading_zeros();
    let hi = 1u64
        .checked_shl(rng.gen_range(1..=bits))
        .unwrap_or(u64::MAX)
        .min(bound);
    rng.gen_range(1..=hi.max(1))
}

fn close_with(set: &mut BTreeSet<u64>, v: u64) {
    let mut frontier = vec![v];
    while let Some(x) = frontier.pop() {
        if !set.insert(x) {
            continue;
        }
        for &y in set.iter() {
            let g = x.gcd(&y);
            if !set.contains(&g) {
                frontier.push(g);
            }
        }
    }
}

/// Multiplicative function with random nonzero values `p/q` (`|p|, q <= 9`)
/// at every prime power dividing some element of `ints`; enough to evaluate
/// at all gcds and lcms of `ints`.
pub fn random_multiplicative(ints: &[BigUint], seed: u64) -> Valuation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut top_exp: BTreeMap<BigUint, u32> = BTreeMap::new();
    for m in ints {
        for (p, a) in factorize(m) {
            let e = top_exp.entry(p).or_insert(0);
            *e = (*e).max(a);
        }
    }
    let mut table = BTreeMap::new();
    for (p, max) in top_exp {
        for a in 1..=max {
            let num = rng.gen_range(1..=9i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            table.insert((p.clone(), a), ratio(num, rng.gen_range(1..=9)));
        }
    }
    Valuation::Multiplicative(PrimePowerRule::Table(table))
}

/// `lcm` of a list; `1` when empty.
pub fn lcm_all(v: &[BigUint]) -> BigUint {
    v.iter().fold(BigUint::one(), |acc, x| acc.lcm(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::canonicalize;
    use crate::rational::int;

    #[test]
    fn published_singular_sets() {
        let r = verify_counterexample(&to_biguints(&HONG_SET)).unwrap();
        assert!(r.singular && r.gcd_closed);
        assert_eq!(r.class.as_deref(), Some("S_{3,8}"));
        assert_eq!(r.report.unwrap().first_failure, Some(8));
        let nine = verify_counterexample(&to_biguints(&NINE_SET)).unwrap();
        assert!(nine.singular && nine.gcd_closed);
        let small = verify_counterexample(&to_biguints(&[3, 1, 2])).unwrap();
        assert!(!small.singular);
        assert_eq!(small.det, int(12));
        assert_eq!(small.elements, vec!["1", "2", "3"]);
    }

    #[test]
    fn non_closed_inputs_are_reported() {
        let r = verify_counterexample(&to_biguints(&[2, 3])).unwrap();
        assert!(!r.gcd_closed);
        assert!(r.report.is_none());
        assert_eq!(r.det, int(-30));
        assert!(verify_counterexample(&to_biguints(&[2, 2])).is_err());
    }

    #[test]
    fn realized_shapes() {
        let cat = SemilatticeCatalog::builtin();
        for (label, bound) in [
            ("5_O", 1_000_000),
            ("6_F", 1_000_000),
            ("7_G", 1_000_000),
            ("7_I", 1_000_000),
            ("S_{3,8}", u64::MAX),
        ] {
            let p = &cat.get(label).unwrap().poset;
            let s = realize_semilattice(p, bound, 9).unwrap();
            assert!(is_gcd_closed(&s));
            let q = divisor_subposet(&s).unwrap();
            assert_eq!(
                canonicalize(&q).unwrap(),
                canonicalize(p).unwrap(),
                "{label}"
            );
        }
        assert!(realize_semilattice(&Poset::antichain(2), 100, 0).is_err());
        assert!(matches!(
            realize_semilattice(&Poset::chain(8), 10, 0),
            Err(Error::Exhaustion { .. })
        ));
    }

    #[test]
    fn random_sets() {
        for seed in 0..50 {
            for n in 1..=7 {
                let s = random_gcd_closed(n, 1_000_000, seed).unwrap();
                assert_eq!(s.len(), n);
                assert!(is_gcd_closed(&s), "{s:?}");
                assert!(s.iter().all(|v| *v <= BigUint::from(1_000_000u32)));
            }
        }
        assert_eq!(
            random_gcd_closed(5, 100, 7).unwrap(),
            random_gcd_closed(5, 100, 7).unwrap()
        );
        assert!(matches!(
            random_gcd_closed(5, 3, 1),
            Err(Error::Exhaustion { .. })
        ));
        assert!(random_gcd_closed(0, 10, 1).is_err());
    }
}
