//! Milnor number of a homogeneous isolated singularity as
//! `dim_Q Q[x] / (∂h/∂x_1, ..., ∂h/∂x_n)`, degree by degree.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::poly::SparseIntPoly;
use crate::error::{Error, Result};

/// Caps the size of any single graded piece handed to elimination.
const MAX_MONOMIALS: usize = 20_000;

fn monomials(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in monomials(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(a: u64, b: u64) -> u64 {
    (1..=b).fold(1u64, |acc, i| acc.saturating_mul(a - b + i) / i)
}

/// Rank of the rows over `Q`.
fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let lead = rows[r][c].clone();
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let factor = &rows[i][c] / &lead;
            for j in c..cols {
                let delta = &factor * &rows[r][j];
                rows[i][j] -= delta;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// `dim (R/J)_k` for `k = 0 ..= top`, where `top = max(n(d-2)+1, 0)` is one
/// past the socle degree of a homogeneous isolated singularity.
pub fn milnor_algebra_dims(h: &SparseIntPoly) -> Result<Vec<usize>> {
    if h.is_zero() || !h.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = h.n;
    let d = h.order().expect("nonzero") as i64;
    let top = (n as i64 * (d - 2) + 1).max(0) as u32;
    if binomial(top as u64 + n as u64 - 1, n as u64 - 1) > MAX_MONOMIALS as u64 {
        return Err(Error::BudgetExceeded {
            needed: format!("{} monomials", binomial(top as u64 + n as u64 - 1, n as u64 - 1)),
            budget: MAX_MONOMIALS as u64,
        });
    }
    let partials: Vec<_> = (0..n).map(|i| h.partial(i)).filter(|g| !g.is_zero()).collect();
    let mut dims = Vec::new();
    for k in 0..=top {
        let basis = monomials(n, k);
        let index: HashMap<&[u32], usize> =
            basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let mut rows = Vec::new();
        if k as i64 >= d - 1 {
            for mult in monomials(n, k + 1 - d as u32) {
                for g in &partials {
                    let mut row = vec![BigRational::zero(); basis.len()];
                    for t in &g.terms {
                        let e: Vec<u32> = t.exps.iter().zip(&mult).map(|(a, b)| a + b).collect();
                        row[index[e.as_slice()]] += BigRational::from_integer(BigInt::from(t.coeff));
                    }
                    rows.push(row);
                }
            }
        }
        dims.push(basis.len() - rank(rows));
    }
    Ok(dims)
}

/// `μ(h)`; errors with `NonIsolated` when the quotient has not died out by
/// degree `n(d-2)+1`.
pub fn milnor_number_oracle(h: &SparseIntPoly) -> Result<u64> {
    let dims = milnor_algebra_dims(h)?;
    let top = dims.len() - 1;
    if dims[top] != 0 {
        return Err(Error::NonIsolated { degree: top as u32 });
    }
    Ok(dims.iter().map(|&x| x as u64).sum())
}
