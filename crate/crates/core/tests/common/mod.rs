//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own elimination or Mobius code.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use latmat::matrix::RationalMatrix;
use latmat::poset::Poset;
use latmat::Rational;

pub fn to_rows(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Textbook Gaussian elimination over the rationals.
pub fn gauss_det(m: &[Vec<Rational>]) -> Rational {
    let mut a = m.to_vec();
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            let factor = &a[r][col] / &a[col][col];
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// `[lcm(x_i, x_j)]` built directly from integers.
pub fn lcm_rows(xs: &[BigUint]) -> Vec<Vec<Rational>> {
    xs.iter()
        .map(|a| {
            xs.iter()
                .map(|b| Rational::from_integer(a.lcm(b).into()))
                .collect()
        })
        .collect()
}

/// `[1 / gcd(x_i, x_j)]` built directly from integers.
pub fn recip_gcd_rows(xs: &[BigUint]) -> Vec<Vec<Rational>> {
    xs.iter()
        .map(|a| {
            xs.iter()
                .map(|b| Rational::from_integer(a.gcd(b).into()).recip())
                .collect()
        })
        .collect()
}

/// Greatest lower bound by scanning every element.
pub fn brute_meet(p: &Poset, i: usize, j: usize) -> Option<usize> {
    let lower: Vec<usize> = (0..p.len())
        .filter(|&k| p.leq(k, i) && p.leq(k, j))
        .collect();
    lower
        .iter()
        .copied()
        .find(|&k| lower.iter().all(|&l| p.leq(l, k)))
}

/// Mobius function by the backward recursion `mu(i, j) = -sum_{i < k <= j} mu(k, j)`.
pub fn mobius_backward(p: &Poset) -> Vec<Vec<Rational>> {
    let n = p.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    for j in 0..n {
        mu[j][j] = Rational::one();
        for i in (0..j).rev() {
            if !p.leq(i, j) {
                continue;
            }
            let s: Rational = (i + 1..=j)
                .filter(|&k| p.leq(i, k) && p.leq(k, j))
                .map(|k| mu[k][j].clone())
                .sum();
            mu[i][j] = -s;
        }
    }
    mu
}

/// Every poset on `n` labelled points whose order is compatible with
/// `0 < 1 < ... < n-1`; each isomorphism class appears at least once.
pub fn naturally_labelled_posets(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let rel = |i: usize, j: usize| {
            i == j || (i < j && mask >> pairs.iter().position(|&q| q == (i, j)).unwrap() & 1 == 1)
        };
        let transitive =
            (0..n).all(|i| (i..n).all(|k| !rel(i, k) || (k..n).all(|j| !rel(k, j) || rel(i, j))));
        if transitive {
            out.push(Poset::from_relation(n, rel).unwrap());
        }
    }
    out
}

pub fn is_meet_semilattice_brute(p: &Poset) -> bool {
    (0..p.len()).all(|i| (0..p.len()).all(|j| brute_meet(p, i, j).is_some()))
}
