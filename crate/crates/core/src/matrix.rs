//! Exact dense matrices, meet and join matrices, and the factorization
//! `[S]_f = D (S)_{1/f} D` with `D = diag(f(x_1), ..., f(x_n))`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::lattice::{is_semimultiplicative, PairScope, Valuation, ValuedSet};
use crate::poset::IncidenceFunction;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        RationalMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                d[i].clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        }))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &MatrixJson) -> Result<Self> {
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(Error::Shape(format!(
                "entries do not match {}x{}",
                j.rows, j.cols
            )));
        }
        let entries = j
            .entries
            .iter()
            .flatten()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.rows, j.cols, entries)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )))
        }
    }

    /// Scales every column to integers; returns the integer rows and the
    /// per-column multipliers.
    fn clear_columns(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let scales: Vec<BigInt> = (0..self.cols)
            .map(|j| (0..self.rows).fold(BigInt::one(), |l, i| l.lcm(self.get(i, j).denom())))
            .collect();
        let ints = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let v = self.get(i, j);
                        v.numer() * (&scales[j] / v.denom())
                    })
                    .collect()
            })
            .collect();
        (ints, scales)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(format_rational).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// Fraction-free Bareiss elimination on an integer matrix.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Exact determinant: column denominators are cleared, then Bareiss.
pub fn determinant(m: &RationalMatrix) -> Result<Rational> {
    m.require_square()?;
    if m.rows == 0 {
        return Ok(Rational::one());
    }
    let (ints, scales) = m.clear_columns();
    let scale: BigInt = scales.iter().product();
    Ok(Rational::new(bareiss_det(ints), scale))
}

/// Exact inverse by fraction-free Gauss-Jordan; the result is checked
/// against the identity before returning.
pub fn inverse(m: &RationalMatrix) -> Result<RationalMatrix> {
    m.require_square()?;
    let n = m.rows;
    let (ints, scales) = m.clear_columns();
    // [B | I] with B = A diag(scales); A^{-1} = diag(scales) B^{-1}.
    let mut a: Vec<Vec<BigInt>> = ints
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Err(Error::Singular);
        };
        a.swap(p, k);
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let lead = row[k].clone();
            for (j, cell) in row.iter_mut().enumerate() {
                let v = &pivot_row[k] * &*cell - &lead * &pivot_row[j];
                debug_assert!(v.is_multiple_of(&prev));
                *cell = v / &prev;
            }
        }
        prev = pivot_row[k].clone();
    }
    // Left block is now prev * I.
    let inv = RationalMatrix::from_fn(n, n, |i, j| {
        Rational::new(&a[i][n + j] * &scales[i], prev.clone())
    });
    if m.mul(&inv)? != RationalMatrix::identity(n) {
        return Err(Error::Mismatch);
    }
    Ok(inv)
}

/// Determinants of many matrices, in parallel when enabled.
pub fn determinants(exec: Execution, ms: &[RationalMatrix]) -> Result<Vec<Rational>> {
    exec::map(exec, ms, determinant).into_iter().collect()
}

/// `((S)_g)_{ij} = g(x_i ^ x_j)`.
pub fn meet_matrix_with(vs: &ValuedSet, g: &Valuation) -> Result<RationalMatrix> {
    let n = vs.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(g.eval(&vs.meet_of(i, j))?);
        }
    }
    RationalMatrix::new(n, n, entries)
}

/// `((S)_f)_{ij} = f(x_i ^ x_j)`.
pub fn meet_matrix(vs: &ValuedSet) -> Result<RationalMatrix> {
    meet_matrix_with(vs, vs.f())
}

/// `([S]_g)_{ij} = g(x_i v x_j)`.
pub fn join_matrix_with(vs: &ValuedSet, g: &Valuation) -> Result<RationalMatrix> {
    let n = vs.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(g.eval(&vs.join_of(i, j))?);
        }
    }
    RationalMatrix::new(n, n, entries)
}

/// `([S]_f)_{ij} = f(x_i v x_j)`.
pub fn join_matrix(vs: &ValuedSet) -> Result<RationalMatrix> {
    join_matrix_with(vs, vs.f())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinFactorization {
    /// `f(x_1), ..., f(x_n)`.
    pub delta: Vec<Rational>,
    /// `(S)_{1/f}`.
    pub core: RationalMatrix,
}

impl JoinFactorization {
    pub fn reconstruct(&self) -> RationalMatrix {
        let n = self.delta.len();
        RationalMatrix::from_fn(n, n, |i, j| {
            &self.delta[i] * self.core.get(i, j) * &self.delta[j]
        })
    }
}

/// Splits the join matrix of a semimultiplicative `f` as `D (S)_{1/f} D`.
pub fn factorize_join(vs: &ValuedSet) -> Result<JoinFactorization> {
    let report = is_semimultiplicative(
        vs.ambient(),
        vs.f(),
        &PairScope::AllPairsOf(vs.elements().to_vec()),
    )?;
    if let Some((a, b)) = report.witness {
        return Err(Error::NotSemimultiplicative(a.to_string(), b.to_string()));
    }
    let fact = JoinFactorization {
        delta: vs.values(),
        core: meet_matrix_with(vs, &vs.f().reciprocal())?,
    };
    if fact.reconstruct() != join_matrix(vs)? {
        return Err(Error::Mismatch);
    }
    Ok(fact)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixDeterminant {
    /// `c_k = (g * mu_S)(x_k)`.
    pub values: Vec<Rational>,
    /// `prod c_k = det (S)_g`.
    pub det: Rational,
}

impl PrefixDeterminant {
    /// `det (S_i)_g` for every prefix length `i = 1..=n`.
    pub fn prefix_dets(&self) -> Vec<Rational> {
        self.values
            .iter()
            .scan(Rational::one(), |acc, c| {
                *acc *= c;
                Some(acc.clone())
            })
            .collect()
    }
}

/// Meet-matrix determinant as a product of Mobius convolutions over the
/// induced order on `S`.
pub fn det_meet_via_convolution(vs: &ValuedSet, g: &Valuation) -> Result<PrefixDeterminant> {
    vs.require_meet_closed()?;
    let mu = IncidenceFunction::mobius(Arc::clone(vs.induced()));
    let gv = vs
        .elements()
        .iter()
        .map(|e| g.eval(e))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<Rational> = (0..vs.len())
        .map(|k| {
            vs.induced()
                .down_set(k)
                .ones()
                .map(|j| &gv[j] * mu.get(j, k))
                .sum()
        })
        .collect();
    let det = values.iter().product();
    Ok(PrefixDeterminant { values, det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn set(v: &[u64]) -> ValuedSet {
        ValuedSet::divisor_u64(v, Valuation::Identity).unwrap()
    }

    #[test]
    fn gcd_and_lcm_tables() {
        let s = set(&[1, 2, 3]);
        assert_eq!(
            meet_matrix(&s).unwrap(),
            m(&[&[1, 1, 1], &[1, 2, 1], &[1, 1, 3]])
        );
        assert_eq!(
            join_matrix(&s).unwrap(),
            m(&[&[1, 2, 3], &[2, 2, 6], &[3, 6, 3]])
        );
        assert_eq!(determinant(&join_matrix(&s).unwrap()).unwrap(), int(12));
        let one = set(&[7]);
        assert_eq!(meet_matrix(&one).unwrap(), m(&[&[7]]));
        assert_eq!(join_matrix(&one).unwrap(), m(&[&[7]]));
    }

    #[test]
    fn smith_determinant() {
        // det (gcd(i, j)) over 1..=n is prod phi(k).
        let s = set(&[1, 2, 3, 4]);
        assert_eq!(determinant(&meet_matrix(&s).unwrap()).unwrap(), int(4));
        let s = set(&(1..=10).collect::<Vec<_>>());
        let phi = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4];
        assert_eq!(
            determinant(&meet_matrix(&s).unwrap()).unwrap(),
            int(phi.iter().product())
        );
    }

    #[test]
    fn hong_set_is_singular() {
        let s = set(&[1, 2, 3, 5, 36, 230, 825, 227700]);
        let j = join_matrix(&s).unwrap();
        assert!(determinant(&j).unwrap().is_zero());
        assert_eq!(inverse(&j), Err(Error::Singular));
    }

    #[test]
    fn determinant_edge_cases() {
        assert_eq!(determinant(&m(&[&[1]])).unwrap(), int(1));
        assert_eq!(determinant(&RationalMatrix::identity(0)).unwrap(), int(1));
        assert!(matches!(determinant(&m(&[&[1, 2]])), Err(Error::Shape(_))));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        let half = RationalMatrix::diagonal(&[ratio(1, 2), ratio(2, 3)]);
        assert_eq!(determinant(&half).unwrap(), ratio(1, 3));
    }

    #[test]
    fn inverses() {
        assert_eq!(
            inverse(&RationalMatrix::identity(3)).unwrap(),
            RationalMatrix::identity(3)
        );
        assert_eq!(
            inverse(&m(&[&[1, 1], &[1, 2]])).unwrap(),
            m(&[&[2, -1], &[-1, 1]])
        );
        let perm = m(&[&[0, 0, 2], &[0, 3, 0], &[5, 0, 0]]);
        let inv = inverse(&perm).unwrap();
        assert_eq!(*inv.get(0, 2), ratio(1, 5));
        assert_eq!(inverse(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn join_factorization() {
        let s = set(&[1, 2, 3]);
        let fact = factorize_join(&s).unwrap();
        assert_eq!(fact.delta, vec![int(1), int(2), int(3)]);
        // Core entries are 1/gcd(x_i, x_j).
        let expect = RationalMatrix::from_rows(vec![
            vec![int(1), int(1), int(1)],
            vec![int(1), ratio(1, 2), int(1)],
            vec![int(1), int(1), ratio(1, 3)],
        ])
        .unwrap();
        assert_eq!(fact.core, expect);
        let not_sm = Valuation::Table(
            [(1, 1), (2, 2), (3, 3), (6, 5)]
                .iter()
                .map(|&(k, v)| (crate::lattice::Element::int(k), int(v)))
                .collect(),
        );
        let bad = ValuedSet::divisor_u64(&[1, 2, 3], not_sm).unwrap();
        assert!(matches!(
            factorize_join(&bad),
            Err(Error::NotSemimultiplicative(_, _))
        ));
    }

    #[test]
    fn prefix_products() {
        let recip = Valuation::Identity.reciprocal();
        let p = det_meet_via_convolution(&set(&[1, 2, 3]), &recip).unwrap();
        assert_eq!(p.values, vec![int(1), ratio(-1, 2), ratio(-2, 3)]);
        assert_eq!(p.det, ratio(1, 3));
        assert_eq!(p.prefix_dets(), vec![int(1), ratio(-1, 2), ratio(1, 3)]);
        let chain = det_meet_via_convolution(&set(&[1, 2, 4]), &recip).unwrap();
        assert_eq!(chain.values, vec![int(1), ratio(-1, 2), ratio(-1, 4)]);
        assert_eq!(chain.det, ratio(1, 8));
        let single = det_meet_via_convolution(&set(&[5]), &recip).unwrap();
        assert_eq!(single.det, ratio(1, 5));
        assert!(matches!(
            det_meet_via_convolution(&set(&[2, 3]), &recip),
            Err(Error::NotMeetClosed(_, _))
        ));
    }

    #[test]
    fn json_round_trip() {
        let a =
            RationalMatrix::from_rows(vec![vec![int(1), ratio(1, 2)], vec![ratio(-3, 4), int(0)]])
                .unwrap();
        let j = a.to_json();
        assert_eq!(j.entries[0], vec!["1", "1/2"]);
        assert_eq!(RationalMatrix::from_json(&j).unwrap(), a);
    }
}
