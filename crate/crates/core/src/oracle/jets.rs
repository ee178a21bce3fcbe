//! Brute-force point counts of restricted contact loci over `F_p`.
//!
//! A jet `γ = γ_1 t + ... + γ_m t^m` lies in `X_m` iff the coefficients of
//! `t^d, ..., t^{m-1}` in `f(γ(t))` vanish and that of `t^m` is 1. The
//! coefficient of `t^j` only involves `γ_1, ..., γ_{j-d+1}`, so the search
//! runs over the first `m-d+1` blocks, checking one coefficient per block,
//! and the last `d-1` blocks contribute a free factor `p^{n(d-1)}`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::{coeff_mod, SparseIntPoly};
use crate::contact::{BaseKind, GradedPiece};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCounts {
    /// `|{h = 0} ∖ {0}|`
    pub cone: u64,
    /// `|{h = 1}|`
    pub milnor: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetCountReport {
    pub p: u64,
    pub m: u32,
    pub total_count: u64,
    pub by_order: BTreeMap<u32, u64>,
    pub base_counts: BaseCounts,
    pub predicted_by_order: BTreeMap<u32, u64>,
}

impl JetCountReport {
    pub fn matches(&self) -> bool {
        self.by_order == self.predicted_by_order
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

fn check_prime(p: u64) -> Result<()> {
    // keeps every product of two residues inside u64
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

fn checked_pow(p: u64, e: u64) -> Option<u64> {
    p.checked_pow(u32::try_from(e).ok()?)
}

/// Calls `visit` on every point of `F_p^n`.
fn for_each_point(n: usize, p: u64, mut visit: impl FnMut(&[u64])) {
    let mut x = vec![0u64; n];
    loop {
        visit(&x);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            x[k] += 1;
            if x[k] < p {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

fn check_point_budget(n: usize, p: u64, budget: u64) -> Result<()> {
    let total = BigUint::from(p).pow(n as u32);
    if total > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: total.to_string(),
            budget,
        });
    }
    Ok(())
}

/// `(|{h = 0} ∖ {0}|, |{h = 1}|)` over `F_p^n`, by enumeration.
pub fn count_base(h: &SparseIntPoly, p: u64) -> Result<BaseCounts> {
    check_prime(p)?;
    if !h.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    check_point_budget(h.n, p, DEFAULT_BUDGET)?;
    let (mut zeros, mut ones) = (0u64, 0u64);
    for_each_point(h.n, p, |x| match h.eval_mod(x, p) {
        0 => zeros += 1,
        1 => ones += 1,
        _ => {}
    });
    Ok(BaseCounts {
        cone: zeros - 1,
        milnor: ones,
    })
}

/// Errors with the first `x ≠ 0` at which every partial of `h` vanishes mod
/// `p`.
pub fn check_smooth_reduction(h: &SparseIntPoly, p: u64) -> Result<()> {
    check_prime(p)?;
    check_point_budget(h.n, p, DEFAULT_BUDGET)?;
    let partials: Vec<_> = (0..h.n).map(|i| h.partial(i)).collect();
    let mut bad = None;
    for_each_point(h.n, p, |x| {
        if bad.is_none() && x.iter().any(|&v| v != 0) && partials.iter().all(|g| g.eval_mod(x, p) == 0) {
            bad = Some(x.to_vec());
        }
    });
    match bad {
        Some(point) => Err(Error::SingularReduction { p, point }),
        None => Ok(()),
    }
}

/// Truncated power series mod `p`, coefficients of `t^0 ..= t^len-1`.
fn series_mul(a: &[u64], b: &[u64], upto: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; upto + 1];
    for (i, &x) in a.iter().enumerate().take(upto + 1) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(upto + 1 - i) {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

struct Evaluator<'a> {
    f: &'a SparseIntPoly,
    p: u64,
    coeffs: Vec<u64>,
}

impl<'a> Evaluator<'a> {
    fn new(f: &'a SparseIntPoly, p: u64) -> Self {
        let coeffs = f.terms.iter().map(|t| coeff_mod(t.coeff, p)).collect();
        Evaluator { f, p, coeffs }
    }

    /// Coefficient of `t^j` in `f(γ(t))`, `series[v]` being the series of
    /// coordinate `v`.
    fn coefficient(&self, series: &[Vec<u64>], j: usize) -> u64 {
        let p = self.p;
        let mut total = 0u64;
        for (t, &c) in self.f.terms.iter().zip(&self.coeffs) {
            // every coordinate has order ≥ 1, so degree > j terms vanish
            if t.degree() as usize > j {
                continue;
            }
            let mut prod = vec![0u64; j + 1];
            prod[0] = 1;
            for (v, &e) in t.exps.iter().enumerate() {
                for _ in 0..e {
                    prod = series_mul(&prod, &series[v], j, p);
                }
            }
            total = (total + c * prod[j]) % p;
        }
        total
    }
}

/// Counts jets in `X_m(F_p)` by order `ρ`, searching the `depth = m-d+1`
/// determining blocks depth-first. Returned counts exclude the free tail.
fn count_prefixes(f: &SparseIntPoly, d: usize, m: usize, p: u64, first: &[u64]) -> BTreeMap<u32, u64> {
    let n = f.n;
    let depth = m - d + 1;
    let eval = Evaluator::new(f, p);
    // series[v][k] = γ_k of coordinate v
    let mut series = vec![vec![0u64; m + 1]; n];
    for v in 0..n {
        series[v][1] = first[v];
    }
    let mut counts = BTreeMap::new();
    let leading_zero = first.iter().all(|&x| x == 0);

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        k: usize,
        depth: usize,
        d: usize,
        m: usize,
        order: Option<u32>,
        eval: &Evaluator<'_>,
        series: &mut [Vec<u64>],
        counts: &mut BTreeMap<u32, u64>,
    ) {
        let p = eval.p;
        let j = k + d - 1;
        let target = u64::from(j == m);
        if eval.coefficient(series, j) != target {
            return;
        }
        if k == depth {
            if let Some(rho) = order {
                *counts.entry(rho).or_insert(0) += 1;
            }
            return;
        }
        let n = series.len();
        let next = k + 1;
        let mut block = vec![0u64; n];
        loop {
            for v in 0..n {
                series[v][next] = block[v];
            }
            let nonzero = block.iter().any(|&x| x != 0);
            let order = order.or(nonzero.then_some(next as u32));
            recurse(next, depth, d, m, order, eval, series, counts);
            // odometer step
            let mut i = 0;
            loop {
                if i == n {
                    for s in series.iter_mut() {
                        s[next] = 0;
                    }
                    return;
                }
                block[i] += 1;
                if block[i] < p {
                    break;
                }
                block[i] = 0;
                i += 1;
            }
        }
    }

    let order = if leading_zero { None } else { Some(1) };
    recurse(1, depth, d, m, order, &eval, &mut series, &mut counts);
    counts
}

/// Enumerates `X_m(F_p)` for `f` and compares with the affine-bundle
/// prediction `base_count · p^{D_ρ}` stratum by stratum.
pub fn count_contact_jets(f: &SparseIntPoly, m: u32, p: u64, budget: u64) -> Result<JetCountReport> {
    check_prime(p)?;
    if m < 1 {
        return Err(Error::InvalidParameter("m must be ≥ 1".into()));
    }
    let n = f.n;
    let d = match f.order() {
        Some(d) if d >= 1 && n >= 1 => d,
        _ => {
            return Err(Error::InvalidParameter(
                "f must be nonzero with no constant term".into(),
            ))
        }
    };
    let candidates = BigUint::from(p).pow(n as u32 * m);
    if candidates > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: candidates.to_string(),
            budget,
        });
    }
    let h = f.initial_form();
    check_smooth_reduction(&h, p)?;
    let base_counts = count_base(&h, p)?;

    let mut predicted_by_order = BTreeMap::new();
    for rho in 1..=m / d {
        let piece = GradedPiece::new(n as u32, d, m, rho);
        let base = match piece.base_kind {
            BaseKind::Cone => base_counts.cone,
            BaseKind::MilnorFiber => base_counts.milnor,
        };
        let scale = checked_pow(p, piece.fiber_dim)
            .ok_or_else(|| Error::Internal("prediction overflows u64".into()))?;
        if base > 0 {
            predicted_by_order.insert(rho, base * scale);
        }
    }

    let mut by_order = BTreeMap::new();
    if m >= d {
        let (du, mu) = (d as usize, m as usize);
        let tail = checked_pow(p, n as u64 * (d as u64 - 1))
            .ok_or_else(|| Error::Internal("count overflows u64".into()))?;
        let mut firsts = Vec::new();
        for_each_point(n, p, |x| firsts.push(x.to_vec()));
        let partial: Vec<BTreeMap<u32, u64>> = firsts
            .par_iter()
            .map(|first| count_prefixes(f, du, mu, p, first))
            .collect();
        for part in partial {
            for (rho, c) in part {
                *by_order.entry(rho).or_insert(0) += c * tail;
            }
        }
    }
    let total_count = by_order.values().sum();
    Ok(JetCountReport {
        p,
        m,
        total_count,
        by_order,
        base_counts,
        predicted_by_order,
    })
}

/// Per-order counts agree with the predictions, and no jet has order
/// outside `[1, floor(m/d)]`.
pub fn verify_stratification(f: &SparseIntPoly, m: u32, p: u64, budget: u64) -> Result<bool> {
    let report = count_contact_jets(f, m, p, budget)?;
    let d = f.order().expect("checked nonzero");
    let in_range = report.by_order.keys().all(|&rho| rho >= 1 && rho <= m / d);
    Ok(in_range && report.matches())
}

/// Exhaustive count with no pruning and no free-tail shortcut, for
/// cross-checking on tiny cases.
pub fn count_contact_jets_naive(f: &SparseIntPoly, m: u32, p: u64) -> Result<BTreeMap<u32, u64>> {
    check_prime(p)?;
    let n = f.n;
    let m = m as usize;
    let total = BigUint::from(p).pow((n * m) as u32);
    if total > BigUint::from(10_000_000u64) {
        return Err(Error::BudgetExceeded {
            needed: total.to_string(),
            budget: 10_000_000,
        });
    }
    let eval = Evaluator::new(f, p);
    let mut counts = BTreeMap::new();
    let total = total.to_u64().expect("bounded above");
    let mut series = vec![vec![0u64; m + 1]; n];
    for code in 0..total {
        let mut c = code;
        for k in 1..=m {
            for s in series.iter_mut() {
                s[k] = c % p;
                c /= p;
            }
        }
        let ok = (1..m).all(|j| eval.coefficient(&series, j) == 0) && eval.coefficient(&series, m) == 1 % p;
        if ok {
            let rho = (1..=m)
                .find(|&k| series.iter().any(|s| s[k] != 0))
                .expect("zero jet has f(γ) = 0") as u32;
            *counts.entry(rho).or_insert(0) += 1;
        }
    }
    Ok(counts)
}
