//! Incidence functions of a finite poset with exact rational values.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::Poset;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A function on ordered pairs `(i, j)` with `i <= j`; zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceFunction {
    poset: Arc<Poset>,
    /// Row-major `n x n`; entries off the order relation are always zero.
    values: Vec<Rational>,
}

impl IncidenceFunction {
    /// Builds `g` from `f`, which is only consulted on comparable pairs.
    pub fn from_fn(poset: Arc<Poset>, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let n = poset.len();
        let mut values = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in poset.up_set(i).ones() {
                values[i * n + j] = f(i, j);
            }
        }
        IncidenceFunction { poset, values }
    }

    pub fn zeta(poset: Arc<Poset>) -> Self {
        Self::from_fn(poset, |_, _| Rational::one())
    }

    pub fn delta(poset: Arc<Poset>) -> Self {
        Self::from_fn(poset, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Möbius function by the forward recursion
    /// `mu(i, j) = -sum_{i <= k < j} mu(i, k)`.
    pub fn mobius(poset: Arc<Poset>) -> Self {
        let n = poset.len();
        let mut values = vec![Rational::zero(); n * n];
        for i in 0..n {
            values[i * n + i] = Rational::one();
            for j in poset.up_set(i).ones().filter(|&j| j > i) {
                let mut acc = Rational::zero();
                for k in poset.down_set(j).ones().take_while(|&k| k < j) {
                    if poset.leq(i, k) {
                        acc += &values[i * n + k];
                    }
                }
                values[i * n + j] = -acc;
            }
        }
        IncidenceFunction { poset, values }
    }

    /// One-sided function from the least element: `g(0, z) = point[z]`, zero
    /// on every other row. Requires a least element.
    pub fn from_bottom(poset: Arc<Poset>, point: &[Rational]) -> Result<Self> {
        if point.len() != poset.len() {
            return Err(Error::Shape(format!(
                "{} values for {} elements",
                point.len(),
                poset.len()
            )));
        }
        let bottom = poset
            .least()
            .ok_or_else(|| Error::Shape("poset has no least element".into()))?;
        Ok(Self::from_fn(poset, |i, j| {
            if i == bottom {
                point[j].clone()
            } else {
                Rational::zero()
            }
        }))
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.values[i * self.poset.len() + j]
    }

    /// Overwrites `g(i, j)`; fails off the order relation.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) -> Result<()> {
        let n = self.poset.len();
        if i >= n || j >= n {
            return Err(Error::Index { index: i.max(j), n });
        }
        if !self.poset.leq(i, j) && !v.is_zero() {
            return Err(Error::Shape(format!(
                "({i}, {j}) is not in the order relation"
            )));
        }
        self.values[i * n + j] = v;
        Ok(())
    }

    pub fn convolve(&self, other: &IncidenceFunction) -> Result<IncidenceFunction> {
        convolve(self, other)
    }
}

/// `(g * h)(x, y) = sum_{x <= z <= y} g(x, z) h(z, y)`.
pub fn convolve(g: &IncidenceFunction, h: &IncidenceFunction) -> Result<IncidenceFunction> {
    if !Arc::ptr_eq(&g.poset, &h.poset) && *g.poset != *h.poset {
        return Err(Error::Mismatch);
    }
    let p = &g.poset;
    let n = p.len();
    Ok(IncidenceFunction::from_fn(p.clone(), |i, j| {
        let mut acc = Rational::zero();
        for z in p.up_set(i).ones() {
            if p.leq(z, j) {
                acc += &g.values[i * n + z] * &h.values[z * n + j];
            }
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn arc(p: Poset) -> Arc<Poset> {
        Arc::new(p)
    }

    #[test]
    fn chain_mobius() {
        let p = arc(Poset::chain(3));
        let mu = IncidenceFunction::mobius(p.clone());
        assert_eq!(mu.get(0, 1), &int(-1));
        assert_eq!(mu.get(0, 2), &int(0));
        for i in 0..3 {
            assert_eq!(mu.get(i, i), &int(1));
        }
        let zeta = IncidenceFunction::zeta(p.clone());
        assert_eq!(convolve(&zeta, &mu).unwrap(), IncidenceFunction::delta(p));
    }

    #[test]
    fn bottom_under_antichain_under_top() {
        let p =
            arc(Poset::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap());
        let mu = IncidenceFunction::mobius(p);
        let col: Vec<_> = (0..5).map(|i| mu.get(i, 4).clone()).collect();
        assert_eq!(col, vec![int(2), int(-1), int(-1), int(-1), int(1)]);
    }

    #[test]
    fn singleton_mobius_is_delta() {
        let p = arc(Poset::chain(1));
        assert_eq!(
            IncidenceFunction::mobius(p.clone()),
            IncidenceFunction::delta(p)
        );
    }

    #[test]
    fn delta_is_unity() {
        let p = arc(Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
        let g = IncidenceFunction::from_fn(p.clone(), |i, j| {
            ratio(i as i64 + 2 * j as i64 + 1, j as i64 + 3)
        });
        let d = IncidenceFunction::delta(p);
        assert_eq!(convolve(&d, &g).unwrap(), g);
        assert_eq!(convolve(&g, &d).unwrap(), g);
    }

    #[test]
    fn one_sided_reciprocal_against_mobius() {
        // Divisor subposet {1, 2, 3}.
        let p = arc(Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap());
        let g =
            IncidenceFunction::from_bottom(p.clone(), &[int(1), ratio(1, 2), ratio(1, 3)]).unwrap();
        let mu = IncidenceFunction::mobius(p);
        let c = convolve(&g, &mu).unwrap();
        assert_eq!(c.get(0, 2), &ratio(-2, 3));
        assert_eq!(c.get(0, 1), &ratio(-1, 2));
    }

    #[test]
    fn mismatch_and_support() {
        let a = IncidenceFunction::zeta(arc(Poset::chain(3)));
        let b = IncidenceFunction::zeta(arc(Poset::antichain(3)));
        assert_eq!(convolve(&a, &b), Err(Error::Mismatch));
        let mut z = IncidenceFunction::zeta(arc(Poset::antichain(2)));
        assert!(z.set(0, 1, int(3)).is_err());
        assert!(z.set(0, 1, int(0)).is_ok());
    }
}
