//! Exact rational arithmetic helpers and small dense linear algebra.
//!
//! Every geometric decision in the crate (preimage signs, crossing signs,
//! genericity) is a sign test on values produced here, so nothing in this
//! module ever touches floating point.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational {text:?}: expected \"p\" or \"p/q\" with q != 0")]
pub struct ParseRationalError {
    pub text: String,
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError {
        text: text.to_string(),
    };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Lowest-terms text form; integers are written without a denominator.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn int(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Determinant by fraction-carrying Gaussian elimination.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        let pivot = a[col][col].clone();
        d *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    d
}

/// Row-reduces in place and returns the rank.
fn row_reduce(a: &mut [Vec<Rational>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let pivot = a[rank][col].clone();
        for r in 0..rows {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..cols {
                let v = &f * &a[rank][c];
                a[r][c] -= v;
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    row_reduce(&mut a)
}

/// Whether `rhs` lies in the column space of `m`.
pub fn is_consistent(m: &[Vec<Rational>], rhs: &[Rational]) -> bool {
    let augmented: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    rank(m) == rank(&augmented)
}

/// Unique solution of a square system, or `None` when singular.
pub fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        let pivot = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..=n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Rational lower approximation of `sqrt(q)` with denominator `scale`.
pub fn sqrt_floor(q: &Rational, scale: u64) -> Rational {
    let s = BigInt::from(scale);
    let scaled = (q.numer() * &s * &s) / q.denom();
    Rational::new(scaled.sqrt(), s)
}

/// Sign of the permutation that sorts `items` ascending. Items must be distinct.
pub fn sort_sign<T: Ord>(items: &[T]) -> i8 {
    let mut s = 1i8;
    let n = items.len();
    for i in 0..n {
        for j in i + 1..n {
            if items[i] > items[j] {
                s = -s;
            }
        }
    }
    s
}
