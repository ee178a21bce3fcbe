//! Finitely generated abelian groups and degree-graded families of them.
//!
//! Every cohomology computation in the crate produces a [`GradedGroup`]. The
//! groups arrive already decomposed, so only the invariant-factor normal form
//! is needed, never a Smith normal form of a presentation matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bigint_serde;

/// `Z^rank ⊕ Z/(t_1) ⊕ ... ⊕ Z/(t_k)` with `t_1 | t_2 | ... | t_k` and every
/// `t_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FgAbGroup {
    #[serde(with = "bigint_serde::biguint")]
    rank: BigUint,
    #[serde(with = "bigint_serde::biguint_vec")]
    torsion: Vec<BigUint>,
}

#[derive(Deserialize)]
struct RawGroup {
    #[serde(with = "bigint_serde::biguint")]
    rank: BigUint,
    #[serde(with = "bigint_serde::biguint_vec", default)]
    torsion: Vec<BigUint>,
}

impl TryFrom<RawGroup> for FgAbGroup {
    type Error = String;

    fn try_from(raw: RawGroup) -> Result<Self, String> {
        if raw.torsion.iter().any(|t| t.is_zero()) {
            return Err("torsion order 0 is not allowed".into());
        }
        Ok(FgAbGroup::new(raw.rank, raw.torsion))
    }
}

/// Puts a multiset of cyclic orders into invariant-factor form. Replacing
/// `(a, b)` by `(gcd, lcm)` over all index pairs `i < j` leaves a divisor
/// chain; the trivial factors are then dropped.
fn normalize_torsion(mut orders: Vec<BigUint>) -> Vec<BigUint> {
    assert!(orders.iter().all(|t| !t.is_zero()), "torsion order 0");
    orders.retain(|t| !t.is_one());
    orders.sort();
    for i in 0..orders.len() {
        for j in i + 1..orders.len() {
            let g = orders[i].gcd(&orders[j]);
            let l = orders[i].lcm(&orders[j]);
            orders[i] = g;
            orders[j] = l;
        }
    }
    orders.retain(|t| !t.is_one());
    orders
}

impl FgAbGroup {
    /// Panics on a zero torsion order; `Z/(0)` is `Z` and belongs in the rank.
    pub fn new(rank: impl Into<BigUint>, torsion: Vec<BigUint>) -> Self {
        FgAbGroup {
            rank: rank.into(),
            torsion: normalize_torsion(torsion),
        }
    }

    pub fn zero() -> Self {
        FgAbGroup {
            rank: BigUint::zero(),
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: impl Into<BigUint>) -> Self {
        FgAbGroup::new(rank, Vec::new())
    }

    pub fn cyclic(order: impl Into<BigUint>) -> Self {
        FgAbGroup::new(0u32, vec![order.into()])
    }

    pub fn rank(&self) -> &BigUint {
        &self.rank
    }

    pub fn torsion(&self) -> &[BigUint] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero() && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        FgAbGroup::new(&self.rank + &other.rank, torsion)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.rank.is_one() {
            parts.push("Z".to_string());
        } else if !self.rank.is_zero() {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/({t})")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finitely supported map `degree -> FgAbGroup`; absent degrees are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<i64, FgAbGroup>", into = "BTreeMap<i64, FgAbGroup>")]
pub struct GradedGroup {
    entries: BTreeMap<i64, FgAbGroup>,
}

impl From<BTreeMap<i64, FgAbGroup>> for GradedGroup {
    fn from(map: BTreeMap<i64, FgAbGroup>) -> Self {
        GradedGroup {
            entries: map.into_iter().filter(|(_, g)| !g.is_zero()).collect(),
        }
    }
}

impl From<GradedGroup> for BTreeMap<i64, FgAbGroup> {
    fn from(g: GradedGroup) -> Self {
        g.entries
    }
}

impl FromIterator<(i64, FgAbGroup)> for GradedGroup {
    /// Repeated degrees are summed.
    fn from_iter<I: IntoIterator<Item = (i64, FgAbGroup)>>(iter: I) -> Self {
        let mut g = GradedGroup::new();
        for (deg, grp) in iter {
            g.add_at(deg, &grp);
        }
        g
    }
}

impl GradedGroup {
    pub fn new() -> Self {
        GradedGroup::default()
    }

    pub fn single(degree: i64, group: FgAbGroup) -> Self {
        std::iter::once((degree, group)).collect()
    }

    /// The group in `degree`, zero if absent.
    pub fn get(&self, degree: i64) -> FgAbGroup {
        self.entries.get(&degree).cloned().unwrap_or_else(FgAbGroup::zero)
    }

    /// Adds `group` as a direct summand in `degree`.
    pub fn add_at(&mut self, degree: i64, group: &FgAbGroup) {
        if group.is_zero() {
            return;
        }
        let sum = self.get(degree).direct_sum(group);
        self.entries.insert(degree, sum);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &FgAbGroup)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> GradedGroup {
        let mut out = self.clone();
        for (deg, grp) in other.iter() {
            out.add_at(deg, grp);
        }
        out
    }

    /// Moves the entry in degree `k` to degree `k + s`.
    pub fn shift(&self, s: i64) -> GradedGroup {
        GradedGroup {
            entries: self.entries.iter().map(|(k, g)| (k + s, g.clone())).collect(),
        }
    }

    /// `k -> 2 * top - k`, i.e. the reindexing used by Poincaré duality on a
    /// manifold of real dimension `top`.
    pub fn reflect(&self, top: i64) -> GradedGroup {
        GradedGroup {
            entries: self.entries.iter().map(|(k, g)| (top - k, g.clone())).collect(),
        }
    }

    /// Alternating sum of ranks; torsion is ignored.
    pub fn euler_char(&self) -> BigInt {
        self.entries.iter().fold(BigInt::zero(), |acc, (k, g)| {
            let r = BigInt::from(g.rank.clone());
            if k.rem_euclid(2) == 0 {
                acc + r
            } else {
                acc - r
            }
        })
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<_> = self.iter().map(|(k, g)| format!("[{k}] {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}
