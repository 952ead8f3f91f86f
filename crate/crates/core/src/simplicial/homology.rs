//! Integral simplicial homology through Smith normal form of the boundary
//! matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::complex::{SimplicialComplex, Simplex};
use super::TopologyError;

/// Default bound on either dimension of a boundary matrix.
pub const DEFAULT_MATRIX_LIMIT: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    /// Free rank of `H_k` for `k = 0..=max_dim`.
    pub betti: Vec<usize>,
    /// Invariant factors greater than one of `H_k`, each dividing the next.
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyReport {
    /// Homology of the `m`-sphere (`m >= 1`) in degrees `0..=m`.
    pub fn is_sphere(&self, m: usize) -> bool {
        self.betti.len() == m + 1
            && self.torsion.iter().all(Vec::is_empty)
            && self
                .betti
                .iter()
                .enumerate()
                .all(|(k, &b)| b == usize::from(k == 0 || k == m))
    }
}

pub fn homology(k: &SimplicialComplex, max_dim: usize) -> Result<HomologyReport, TopologyError> {
    homology_with_limit(k, max_dim, DEFAULT_MATRIX_LIMIT)
}

pub fn homology_with_limit(
    k: &SimplicialComplex,
    max_dim: usize,
    limit: usize,
) -> Result<HomologyReport, TopologyError> {
    if max_dim > k.dim() {
        return Err(TopologyError::DimensionTooHigh {
            requested: max_dim,
            dim: k.dim(),
        });
    }
    let faces = k.all_faces();
    let top = (max_dim + 1).min(k.dim());
    // rank and invariant factors of the boundary map C_q -> C_{q-1}
    let mut ranks = vec![0usize; k.dim() + 2];
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); k.dim() + 2];
    for q in 1..=top {
        let rows = faces[q - 1].len();
        let cols = faces[q].len();
        if rows > limit || cols > limit {
            return Err(TopologyError::SizeLimit { rows, cols, limit });
        }
        let m = boundary_matrix(&faces[q - 1], &faces[q]);
        let diag = smith_diagonal(m);
        ranks[q] = diag.len();
        factors[q] = diag.into_iter().filter(|d| !d.is_one()).collect();
    }
    let betti = (0..=max_dim)
        .map(|q| faces[q].len() - ranks[q] - ranks[q + 1])
        .collect();
    let torsion = (0..=max_dim).map(|q| factors[q + 1].clone()).collect();
    Ok(HomologyReport { betti, torsion })
}

fn boundary_matrix(rows: &[Simplex], cols: &[Simplex]) -> Vec<Vec<BigInt>> {
    let index: BTreeMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
    for (j, s) in cols.iter().enumerate() {
        for pos in 0..s.len() {
            let mut face = s.clone();
            face.remove(pos);
            let entry = if pos % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            m[index[&face]][j] = entry;
        }
    }
    m
}

/// Nonzero diagonal of the Smith normal form, normalised into a divisibility
/// chain of positive integers.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut t = 0;
    let mut diag = Vec::new();
    while t < rows && t < cols {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let v = &q * &a[i][t];
                    a[i][j] -= v;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t + 1..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // gcd/lcm normalisation into a divisibility chain
    let n = diag.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}
