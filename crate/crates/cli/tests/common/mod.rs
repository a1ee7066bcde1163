//! Test-side oracles, independent of the library's elimination and Mobius code.
#![allow(dead_code, clippy::needless_range_loop)]

use std::process::{Command, Output};

use latmat::Rational;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn latmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latmat"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

pub fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

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

pub fn lcm_det(xs: &[BigUint]) -> Rational {
    let rows: Vec<Vec<Rational>> = xs
        .iter()
        .map(|a| {
            xs.iter()
                .map(|b| Rational::from_integer(a.lcm(b).into()))
                .collect()
        })
        .collect();
    gauss_det(&rows)
}

pub fn recip_gcd_det(xs: &[BigUint]) -> Rational {
    let rows: Vec<Vec<Rational>> = xs
        .iter()
        .map(|a| {
            xs.iter()
                .map(|b| Rational::from_integer(a.gcd(b).into()).recip())
                .collect()
        })
        .collect();
    gauss_det(&rows)
}

/// `mu(i, j)` by the backward recursion over an explicit order relation.
pub fn mobius_backward(n: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<Vec<Rational>> {
    let mut mu = vec![vec![Rational::zero(); n]; n];
    for j in 0..n {
        mu[j][j] = Rational::one();
        for i in (0..j).rev() {
            if leq(i, j) {
                let s: Rational = (i + 1..=j)
                    .filter(|&k| leq(i, k) && leq(k, j))
                    .map(|k| mu[k][j].clone())
                    .sum();
                mu[i][j] = -s;
            }
        }
    }
    mu
}
