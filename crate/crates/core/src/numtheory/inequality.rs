//! Instances of the inequalities showing `N` lies in the classes `G_{k,n}`.
//!
//! Each class fixes a shape through a parametrization `x_i = (...) x_1`
//! with coprimality side conditions; the inequality states that `c_n > 0`
//! for `f = N` at the last added element.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::lcm_all;
use crate::enumeration::{bounded_x1_poset, SemilatticeCatalog};
use crate::error::{Error, Result};
use crate::invertibility::condition_values;
use crate::lattice::{divisor_subposet, AmbientLattice, Element, Valuation, ValuedSet};
use crate::rational::{from_biguint, int, serde_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityClass {
    /// Bounded x1-set: bottom, `n - 2` atoms `a_i x_1`, a top.
    Gn2n,
    G36,
    G37,
    G47a,
    G47b,
}

impl FromStr for InequalityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gn2n" | "g_{n-2,n}" => Ok(InequalityClass::Gn2n),
            "g36" | "g_{3,6}" => Ok(InequalityClass::G36),
            "g37" | "g_{3,7}" => Ok(InequalityClass::G37),
            "g47a" | "g47_1" | "g_{4,7}^{(1)}" => Ok(InequalityClass::G47a),
            "g47b" | "g47_2" | "g_{4,7}^{(2)}" => Ok(InequalityClass::G47b),
            _ => Err(Error::Param(format!("unknown class {s:?}"))),
        }
    }
}

impl InequalityClass {
    /// Catalog label of the shape the parametrization must produce.
    fn shape_label(self, n: usize) -> Option<String> {
        match self {
            InequalityClass::G36 => Some("6_F".into()),
            InequalityClass::G37 => Some("7_F".into()),
            InequalityClass::G47a => Some("7_G".into()),
            InequalityClass::G47b => Some("7_H".into()),
            InequalityClass::Gn2n => {
                SemilatticeCatalog::builtin().classify(&bounded_x1_poset(n).ok()?)
            }
        }
    }

    fn letters(self) -> &'static [&'static str] {
        match self {
            InequalityClass::Gn2n => &[],
            InequalityClass::G36 => &["a", "b", "c", "d"],
            _ => &["a", "b", "c", "d", "e"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityInstance {
    pub class: InequalityClass,
    pub elements: Vec<String>,
    /// The inequality's left side minus right side.
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub positive: bool,
}

fn get(params: &BTreeMap<String, u64>, key: &str) -> Result<u64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::Param(format!("missing parameter {key}")))
}

fn atoms_of(params: &BTreeMap<String, u64>) -> Result<Vec<u64>> {
    let mut atoms = Vec::new();
    while let Some(&v) = params.get(&format!("a{}", atoms.len() + 1)) {
        atoms.push(v);
    }
    if atoms.is_empty() {
        return Err(Error::Param("expected atoms a1, a2, ...".into()));
    }
    if let Some(k) = params.keys().find(|k| *k != "x1" && !k.starts_with('a')) {
        return Err(Error::Param(format!("unexpected parameter {k}")));
    }
    Ok(atoms)
}

/// Elements `x_1, ..., x_{n-1}` (the top is added separately) and the
/// elements whose lcm the top must be a multiple of.
fn lower_elements(class: InequalityClass, params: &BTreeMap<String, u64>) -> Result<Vec<BigUint>> {
    let x1 = BigUint::from(params.get("x1").copied().unwrap_or(1));
    let scaled = |v: &[BigUint]| -> Vec<BigUint> {
        std::iter::once(BigUint::one())
            .chain(v.iter().cloned())
            .map(|k| k * &x1)
            .collect()
    };
    if class == InequalityClass::Gn2n {
        let atoms: Vec<BigUint> = atoms_of(params)?.into_iter().map(BigUint::from).collect();
        return Ok(scaled(&atoms));
    }
    for k in params.keys() {
        if k != "x1" && !class.letters().contains(&k.as_str()) {
            return Err(Error::Param(format!("unexpected parameter {k}")));
        }
    }
    let v = |k| get(params, k).map(BigUint::from);
    let (a, b, c, d) = (v("a")?, v("b")?, v("c")?, v("d")?);
    Ok(match class {
        InequalityClass::G36 => scaled(&[a.clone(), b, &a * c, &a * d]),
        InequalityClass::G37 => scaled(&[a.clone(), b.clone(), &a * c, &a * &b * d, &b * v("e")?]),
        InequalityClass::G47a => scaled(&[a.clone(), b, &a * c, &a * d, &a * v("e")?]),
        InequalityClass::G47b => scaled(&[a.clone(), b, c, &a * d, &a * v("e")?]),
        InequalityClass::Gn2n => unreachable!(),
    })
}

fn side_conditions(class: InequalityClass, params: &BTreeMap<String, u64>) -> Result<()> {
    let fail = |msg: String| Err(Error::Param(msg));
    if params.get("x1") == Some(&0) {
        return fail("x1 must be positive".into());
    }
    let coprime = |pairs: &[(&str, u128, &str, u128)]| -> Result<()> {
        for &(n1, v1, n2, v2) in pairs {
            if v1.gcd(&v2) != 1 {
                return Err(Error::Param(format!(
                    "gcd({n1}, {n2}) = {} must be 1",
                    v1.gcd(&v2)
                )));
            }
        }
        Ok(())
    };
    if class == InequalityClass::Gn2n {
        let atoms = atoms_of(params)?;
        if let Some(v) = atoms.iter().find(|&&v| v < 2) {
            return fail(format!("atom multiplier {v} must be at least 2"));
        }
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if atoms[i].gcd(&atoms[j]) != 1 {
                    return fail(format!("gcd(a{}, a{}) must be 1", i + 1, j + 1));
                }
            }
        }
        return Ok(());
    }
    let v = |k| get(params, k).map(u128::from);
    let (a, b, c, d) = (v("a")?, v("b")?, v("c")?, v("d")?);
    let min_d = if class == InequalityClass::G37 { 1 } else { 2 };
    for (k, val) in [("a", a), ("b", b), ("c", c)] {
        if val < 2 {
            return fail(format!("{k} must be at least 2"));
        }
    }
    if d < min_d {
        return fail(format!("d must be at least {min_d}"));
    }
    match class {
        InequalityClass::G36 => coprime(&[
            ("a", a, "b", b),
            ("b", b, "c", c),
            ("b", b, "d", d),
            ("c", c, "d", d),
        ]),
        InequalityClass::G37 => {
            let e = v("e")?;
            if e < 2 {
                return fail("e must be at least 2".into());
            }
            coprime(&[
                ("a", a, "b", b),
                ("b", b, "c", c),
                ("a", a, "e", e),
                ("c", c, "e", e),
                ("c", c, "bd", b * d),
                ("ad", a * d, "e", e),
            ])
        }
        InequalityClass::G47a => {
            let e = v("e")?;
            if e < 2 {
                return fail("e must be at least 2".into());
            }
            coprime(&[
                ("a", a, "b", b),
                ("b", b, "c", c),
                ("b", b, "d", d),
                ("b", b, "e", e),
                ("c", c, "d", d),
                ("c", c, "e", e),
                ("d", d, "e", e),
            ])
        }
        InequalityClass::G47b => {
            let e = v("e")?;
            if e < 2 {
                return fail("e must be at least 2".into());
            }
            coprime(&[
                ("b", b, "c", c),
                ("b", b, "ad", a * d),
                ("c", c, "ad", a * d),
                ("b", b, "ae", a * e),
                ("c", c, "ae", a * e),
                ("d", d, "e", e),
            ])
        }
        InequalityClass::Gn2n => unreachable!(),
    }
}

/// The inequality's expression evaluated at `x_1, ..., x_n`.
pub fn class_expression(class: InequalityClass, xs: &[Rational]) -> Result<Rational> {
    let expected = match class {
        InequalityClass::Gn2n => None,
        InequalityClass::G36 => Some(6),
        _ => Some(7),
    };
    let n = xs.len();
    if expected.is_some_and(|e| e != n) || n < 3 {
        return Err(Error::Param(format!("{n} elements do not fit {class:?}")));
    }
    if xs.iter().any(Zero::is_zero) {
        return Err(Error::ZeroValue("0".into()));
    }
    // Coefficients of 1/x_1, ..., 1/x_n.
    let coeffs: Vec<i64> = match class {
        InequalityClass::G36 => vec![1, 1, -1, -1, -1, 1],
        InequalityClass::G37 => vec![0, 1, 1, -1, -1, -1, 1],
        InequalityClass::G47a => vec![1, 2, -1, -1, -1, -1, 1],
        InequalityClass::G47b => vec![2, 1, -1, -1, -1, -1, 1],
        InequalityClass::Gn2n => {
            let mut c = vec![-1; n];
            c[0] = n as i64 - 3;
            c[n - 1] = 1;
            c
        }
    };
    Ok(coeffs.iter().zip(xs).map(|(&k, x)| int(k) / x).sum())
}

/// The factored form `1/x_n + numerator / (product of multipliers * x_1)`.
pub fn closed_form(
    class: InequalityClass,
    params: &BTreeMap<String, u64>,
    top: &BigUint,
) -> Result<Rational> {
    let x1 = int(params.get("x1").copied().unwrap_or(1) as i64);
    let top = from_biguint(top).recip();
    if class == InequalityClass::Gn2n {
        let atoms = atoms_of(params)?;
        let sum: Rational = atoms.iter().map(|&a| int(a as i64).recip()).sum();
        return Ok(top + (int(atoms.len() as i64 - 1) - sum) / x1);
    }
    let v = |k| get(params, k).map(BigInt::from);
    let (a, b, c, d) = (v("a")?, v("b")?, v("c")?, v("d")?);
    let (num, den) = match class {
        InequalityClass::G36 => (
            &a * &c * &d * (&b - 1) + &b * (&c * &d - &d - &c),
            &a * &b * &c * &d,
        ),
        _ => {
            let e = v("e")?;
            let num = match class {
                InequalityClass::G37 => {
                    &a * &c * &d * (&e - 1) + &e * ((&b * &d - 1) * (&c - 1) - 1)
                }
                InequalityClass::G47a => {
                    &b * &c * (&d * &e - &d - &e)
                        + &b * &d * &e * (&c - 1)
                        + &a * &c * &d * &e * (&b - 1)
                }
                _ => {
                    &b * &c * (&d * &e - &d - &e)
                        + &a * &b * &d * &e * (&c - 1)
                        + &a * &c * &d * &e * (&b - 1)
                }
            };
            (num, &a * &b * &c * &d * &e)
        }
    };
    Ok(top + Rational::new(num, den) / x1)
}

fn build(
    class: InequalityClass,
    params: &BTreeMap<String, u64>,
    top: Option<&BigUint>,
) -> Result<Vec<BigUint>> {
    let lower = lower_elements(class, params)?;
    let maximal_lcm = lcm_all(&lower);
    let top = top.cloned().unwrap_or_else(|| maximal_lcm.clone());
    if top.is_zero() || !top.is_multiple_of(&maximal_lcm) || lower.contains(&top) {
        return Err(Error::Param(format!(
            "top {top} must be a new multiple of {maximal_lcm}"
        )));
    }
    let mut xs = lower;
    xs.push(top);
    Ok(xs)
}

/// Evaluates the expression on the parametrized set without checking the
/// side conditions.
pub fn unchecked_expression(
    class: InequalityClass,
    params: &BTreeMap<String, u64>,
    top: Option<&BigUint>,
) -> Result<Rational> {
    let xs = build(class, params, top)?;
    class_expression(class, &xs.iter().map(from_biguint).collect::<Vec<_>>())
}

/// Builds the set for valid parameters, checks that it is gcd-closed with
/// the intended shape, and returns the expression value. The value is
/// cross-checked against the factored form and against `c_n`.
pub fn class_inequality_instance(
    class: InequalityClass,
    params: &BTreeMap<String, u64>,
    top: Option<&BigUint>,
) -> Result<InequalityInstance> {
    side_conditions(class, params)?;
    let xs = build(class, params, top)?;
    let n = xs.len();
    let elems: Vec<Element> = xs.iter().cloned().map(Element::Int).collect();
    let vs = ValuedSet::with_order(AmbientLattice::Divisor.into(), elems, Valuation::Identity)
        .map_err(|e| Error::Param(format!("parametrized elements are not ordered: {e}")))?;
    if !vs.is_meet_closed() {
        return Err(Error::Param("parametrized set is not gcd-closed".into()));
    }
    let shape = SemilatticeCatalog::builtin().classify(&divisor_subposet(&xs)?);
    if shape != class.shape_label(n) {
        return Err(Error::Param(format!(
            "parametrized set has shape {shape:?}"
        )));
    }
    let value = class_expression(class, &xs.iter().map(from_biguint).collect::<Vec<_>>())?;
    let c = condition_values(&vs)?;
    if value != c[n - 1] || value != closed_form(class, params, &xs[n - 1])? {
        return Err(Error::Mismatch);
    }
    Ok(InequalityInstance {
        class,
        elements: xs.iter().map(|v| v.to_string()).collect(),
        positive: value > Rational::zero(),
        value,
    })
}

/// Draws parameters satisfying the side conditions of `class` by rejection,
/// with multipliers in `2..=max` and a top `k * lcm` for `k` in `1..=4`.
/// `atoms` sets the number of atoms for [`InequalityClass::Gn2n`].
pub fn sample_params(
    class: InequalityClass,
    atoms: usize,
    max: u64,
    rng: &mut impl Rng,
) -> (BTreeMap<String, u64>, BigUint) {
    loop {
        let mut params = BTreeMap::new();
        let keys: Vec<String> = if class == InequalityClass::Gn2n {
            (1..=atoms).map(|i| format!("a{i}")).collect()
        } else {
            class.letters().iter().map(|s| s.to_string()).collect()
        };
        for k in keys {
            let low = if class == InequalityClass::G37 && k == "d" {
                1
            } else {
                2
            };
            params.insert(k, rng.gen_range(low..=max.max(low)));
        }
        if rng.gen_bool(0.3) {
            params.insert("x1".into(), rng.gen_range(2..=6));
        }
        if side_conditions(class, &params).is_err() {
            continue;
        }
        let Ok(lower) = lower_elements(class, &params) else {
            continue;
        };
        let top = lcm_all(&lower) * BigUint::from(rng.gen_range(1..=4u32));
        if build(class, &params, Some(&top)).is_ok() {
            return (params, top);
        }
    }
}

/// Parses `a=2,b=3,...` into a parameter map.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, u64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::Param(format!("expected key=value, got {t:?}")))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Param(format!("bad value in {t:?}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(s: &str) -> BTreeMap<String, u64> {
        parse_params(s).unwrap()
    }

    #[test]
    fn worked_instances() {
        let top = BigUint::from(60u32);
        let g36 =
            class_inequality_instance(InequalityClass::G36, &p("a=2,b=3,c=2,d=5"), Some(&top))
                .unwrap();
        assert_eq!(g36.value, ratio(50, 60));
        assert_eq!(g36.elements, vec!["1", "2", "3", "4", "10", "60"]);
        let g47b =
            class_inequality_instance(InequalityClass::G47b, &p("a=2,b=3,c=7,d=5,e=2"), None)
                .unwrap();
        assert_eq!(g47b.value, ratio(704, 420));
        assert!(g47b.positive);
        let gn = class_inequality_instance(
            InequalityClass::Gn2n,
            &p("a1=2,a2=3,a3=5"),
            Some(&BigUint::from(30u32)),
        )
        .unwrap();
        assert_eq!(gn.value, ratio(1 + 60 - 31, 30));
    }

    #[test]
    fn invalid_side_conditions() {
        // gcd(b, c) = 3 here, so x_3 = 3 divides x_4 = 6.
        let bad = p("a=2,b=3,c=3,d=2,e=5");
        assert!(matches!(
            class_inequality_instance(InequalityClass::G47a, &bad, None),
            Err(Error::Param(_))
        ));
        let raw =
            unchecked_expression(InequalityClass::G47a, &bad, Some(&BigUint::from(60u32))).unwrap();
        assert_eq!(raw, ratio(70, 60));
        assert!(class_inequality_instance(InequalityClass::G36, &p("a=2,b=3,c=2"), None).is_err());
        assert!(
            class_inequality_instance(InequalityClass::G36, &p("a=2,b=3,c=2,d=5,z=1"), None)
                .is_err()
        );
        assert!(class_inequality_instance(
            InequalityClass::G36,
            &p("a=2,b=3,c=2,d=5"),
            Some(&BigUint::from(7u32))
        )
        .is_err());
        assert!(class_inequality_instance(InequalityClass::Gn2n, &p("a1=2,a2=4"), None).is_err());
    }

    #[test]
    fn sampled_params_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for class in [
            InequalityClass::G36,
            InequalityClass::G37,
            InequalityClass::G47a,
            InequalityClass::G47b,
        ] {
            for _ in 0..20 {
                let (params, top) = sample_params(class, 0, 30, &mut rng);
                assert!(
                    class_inequality_instance(class, &params, Some(&top))
                        .unwrap()
                        .positive
                );
            }
        }
        for atoms in 2..=6 {
            let (params, top) = sample_params(InequalityClass::Gn2n, atoms, 40, &mut rng);
            let inst =
                class_inequality_instance(InequalityClass::Gn2n, &params, Some(&top)).unwrap();
            assert_eq!(inst.elements.len(), atoms + 2);
        }
    }

    #[test]
    fn valid_g37_and_g47a() {
        let g37 = class_inequality_instance(InequalityClass::G37, &p("a=2,b=3,c=5,d=1,e=7"), None)
            .unwrap();
        assert!(g37.positive);
        let g47a =
            class_inequality_instance(InequalityClass::G47a, &p("a=2,b=3,c=5,d=7,e=11"), None)
                .unwrap();
        assert!(g47a.positive);
        assert!("g_{4,7}^{(1)}".parse::<InequalityClass>().is_ok());
        assert!("g99".parse::<InequalityClass>().is_err());
    }
}
