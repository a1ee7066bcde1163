//! Functions `f: P -> Q` evaluated exactly.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::Element;
use crate::error::{Error, Result};
use crate::rational::{format_rational, from_biguint, Rational};

/// Value of a multiplicative function at a prime power `p^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimePowerRule {
    /// Euler's totient.
    EulerPhi,
    /// Divisor power sum `sigma_k`.
    Sigma(u32),
    /// Explicit values keyed by `(p, a)`, `a >= 1`.
    Table(BTreeMap<(BigUint, u32), Rational>),
}

impl PrimePowerRule {
    fn at(&self, p: &BigUint, a: u32) -> Result<Rational> {
        Ok(match self {
            PrimePowerRule::EulerPhi => from_biguint(&(p.pow(a - 1) * (p - 1u32))),
            PrimePowerRule::Sigma(k) => {
                let pk = p.pow(*k);
                let mut term = BigUint::one();
                let mut sum = BigUint::one();
                for _ in 0..a {
                    term *= &pk;
                    sum += &term;
                }
                from_biguint(&sum)
            }
            PrimePowerRule::Table(t) => t
                .get(&(p.clone(), a))
                .cloned()
                .ok_or_else(|| Error::Undefined(format!("{p}^{a}")))?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// `f(m) = m` on the divisor lattice.
    Identity,
    Reciprocal(Box<Valuation>),
    /// `f(m) = m^k`.
    Power(i32),
    /// Multiplicative arithmetic function fixed by its prime power values.
    Multiplicative(PrimePowerRule),
    Table(BTreeMap<Element, Rational>),
}

impl Valuation {
    /// Evaluates `f(e)`; zero values are rejected so `1/f` is always defined.
    pub fn eval(&self, e: &Element) -> Result<Rational> {
        let v = self.eval_raw(e)?;
        if v.is_zero() {
            return Err(Error::ZeroValue(e.to_string()));
        }
        Ok(v)
    }

    fn eval_raw(&self, e: &Element) -> Result<Rational> {
        match (self, e) {
            (Valuation::Reciprocal(inner), _) => Ok(inner.eval(e)?.recip()),
            (Valuation::Table(t), _) => t
                .get(e)
                .cloned()
                .ok_or_else(|| Error::Undefined(e.to_string())),
            (Valuation::Identity, Element::Int(m)) => Ok(from_biguint(m)),
            (Valuation::Power(k), Element::Int(m)) => {
                let base = from_biguint(m);
                Ok(if *k >= 0 {
                    base.pow(*k)
                } else {
                    base.recip().pow(-*k)
                })
            }
            (Valuation::Multiplicative(rule), Element::Int(m)) => {
                let mut acc = Rational::one();
                for (p, a) in factorize(m) {
                    acc *= rule.at(&p, a)?;
                }
                Ok(acc)
            }
            (_, Element::Node(i)) => Err(Error::Undefined(format!(
                "{} has no value at node {i}; use a table",
                self.describe()
            ))),
        }
    }

    /// `1/f`, collapsing double reciprocals.
    pub fn reciprocal(&self) -> Valuation {
        match self {
            Valuation::Reciprocal(inner) => (**inner).clone(),
            Valuation::Power(k) => Valuation::Power(-k),
            Valuation::Table(t) => Valuation::Table(
                t.iter()
                    .map(|(k, v)| (k.clone(), if v.is_zero() { v.clone() } else { v.recip() }))
                    .collect(),
            ),
            other => Valuation::Reciprocal(Box::new(other.clone())),
        }
    }

    /// Short name: `N`, `1/N`, `N^k`, `phi`, `sigma_k`, or `table`.
    pub fn describe(&self) -> String {
        match self {
            Valuation::Identity => "N".into(),
            Valuation::Reciprocal(inner) => format!("1/{}", inner.describe()),
            Valuation::Power(1) => "N".into(),
            Valuation::Power(k) => format!("N^{k}"),
            Valuation::Multiplicative(PrimePowerRule::EulerPhi) => "phi".into(),
            Valuation::Multiplicative(PrimePowerRule::Sigma(1)) => "sigma".into(),
            Valuation::Multiplicative(PrimePowerRule::Sigma(k)) => format!("sigma_{k}"),
            Valuation::Multiplicative(PrimePowerRule::Table(_)) => "multiplicative".into(),
            Valuation::Table(_) => "table".into(),
        }
    }

    /// Parses the names produced by [`Valuation::describe`].
    pub fn parse(name: &str) -> Result<Valuation> {
        let s = name.trim();
        if let Some(rest) = s.strip_prefix("1/") {
            return Ok(Valuation::parse(rest)?.reciprocal());
        }
        let bad = || Error::Parse(format!("unknown function {s:?}"));
        match s {
            "N" | "n" | "id" => Ok(Valuation::Identity),
            "phi" => Ok(Valuation::Multiplicative(PrimePowerRule::EulerPhi)),
            "sigma" => Ok(Valuation::Multiplicative(PrimePowerRule::Sigma(1))),
            _ => {
                if let Some(k) = s.strip_prefix("N^").or_else(|| s.strip_prefix("n^")) {
                    let k: i32 = k
                        .trim_matches(|c| c == '(' || c == ')')
                        .parse()
                        .map_err(|_| bad())?;
                    Ok(Valuation::Power(k))
                } else if let Some(k) = s.strip_prefix("sigma_") {
                    Ok(Valuation::Multiplicative(PrimePowerRule::Sigma(
                        k.parse().map_err(|_| bad())?,
                    )))
                } else {
                    Err(bad())
                }
            }
        }
    }

    /// Table of values on `elems`, formatted for display.
    pub fn tabulate(&self, elems: &[Element]) -> Result<Vec<String>> {
        elems
            .iter()
            .map(|e| self.eval(e).map(|v| format_rational(&v)))
            .collect()
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(m: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let mut rest = m.clone();
    // Fast path while the cofactor fits in a machine word.
    let mut p = BigUint::from(2u32);
    loop {
        if let Some(r) = rest.to_u64() {
            factor_u64(r, p.to_u64().unwrap_or(u64::MAX), &mut out);
            return out;
        }
        if &p * &p > rest {
            out.push((rest, 1));
            return out;
        }
        let mut a = 0;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            a += 1;
        }
        if a > 0 {
            out.push((p.clone(), a));
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
}

fn factor_u64(mut r: u64, start: u64, out: &mut Vec<(BigUint, u32)>) {
    let mut p = start;
    while r > 1 {
        if p.checked_mul(p).is_none_or(|sq| sq > r) {
            out.push((BigUint::from(r), 1));
            return;
        }
        let mut a = 0;
        while r.is_multiple_of(p) {
            r /= p;
            a += 1;
        }
        if a > 0 {
            out.push((BigUint::from(p), a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
}
