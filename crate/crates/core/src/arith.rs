//! Integer utilities: gcd, coprime pairs and continued fractions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::ZeroGcd);
    }
    Ok(num_integer::gcd(a, b))
}

/// A coprime pair `(kappa, r)` of non-negative integers. These label the
/// divisors that can appear in the blow-up chain: `(1, 0)` is the strict
/// transform and `(0, 1)` the exceptional divisor of the first blow-up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(u64, u64)", into = "(u64, u64)")]
pub struct CoprimePair {
    kappa: u64,
    r: u64,
}

impl CoprimePair {
    pub const STRICT: CoprimePair = CoprimePair { kappa: 1, r: 0 };
    pub const FIRST_EXCEPTIONAL: CoprimePair = CoprimePair { kappa: 0, r: 1 };

    pub fn new(kappa: u64, r: u64) -> Result<Self> {
        if gcd(kappa, r)? != 1 {
            return Err(Error::NotCoprime(kappa, r));
        }
        Ok(CoprimePair { kappa, r })
    }

    /// Divides out the gcd. Fails only on `(0, 0)`.
    pub fn reduced(a: u64, b: u64) -> Result<Self> {
        let g = gcd(a, b)?;
        Ok(CoprimePair { kappa: a / g, r: b / g })
    }

    pub fn kappa(self) -> u64 {
        self.kappa
    }

    pub fn r(self) -> u64 {
        self.r
    }

    /// Componentwise sum. The mediant of two Farey neighbours is coprime,
    /// which is the only way the chain ever calls this.
    pub fn mediant(self, other: CoprimePair) -> CoprimePair {
        CoprimePair {
            kappa: self.kappa + other.kappa,
            r: self.r + other.r,
        }
    }

    /// `kappa * r' - kappa' * r`.
    pub fn det(self, other: CoprimePair) -> i128 {
        self.kappa as i128 * other.r as i128 - other.kappa as i128 * self.r as i128
    }

    /// Whether `self` sits strictly closer to `(0, 1)` than `other`, i.e. has
    /// the larger slope `r / kappa`.
    pub fn left_of(self, other: CoprimePair) -> bool {
        (self.r as u128) * (other.kappa as u128) > (other.r as u128) * (self.kappa as u128)
    }

    pub fn is_endpoint(self) -> bool {
        self == Self::STRICT || self == Self::FIRST_EXCEPTIONAL
    }
}

impl TryFrom<(u64, u64)> for CoprimePair {
    type Error = Error;

    fn try_from((kappa, r): (u64, u64)) -> Result<Self> {
        CoprimePair::new(kappa, r)
    }
}

impl From<CoprimePair> for (u64, u64) {
    fn from(p: CoprimePair) -> Self {
        (p.kappa, p.r)
    }
}

impl fmt::Display for CoprimePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.kappa, self.r)
    }
}

/// Partial quotients `[q0; q1, ..., qk]` of `kappa / r`, in the canonical
/// form whose last quotient is at least 2 whenever there is more than one.
pub fn continued_fraction(kappa: u64, r: u64) -> Result<Vec<u64>> {
    if kappa == 0 || r == 0 {
        return Err(Error::InvalidParameter(format!(
            "continued fraction needs kappa, r >= 1, got ({kappa}, {r})"
        )));
    }
    if gcd(kappa, r)? != 1 {
        return Err(Error::NotCoprime(kappa, r));
    }
    let (mut a, mut b) = (kappa, r);
    let mut quotients = Vec::new();
    while b != 0 {
        quotients.push(a / b);
        (a, b) = (b, a % b);
    }
    Ok(quotients)
}

/// Evaluates a finite continued fraction as a reduced pair `(numerator,
/// denominator)`. The empty expansion evaluates to `1/0`.
pub fn convergent(quotients: &[u64]) -> (u64, u64) {
    let (mut h, mut h_prev) = (1u64, 0u64);
    let (mut k, mut k_prev) = (0u64, 1u64);
    for &q in quotients {
        (h, h_prev) = (q * h + h_prev, h);
        (k, k_prev) = (q * k + k_prev, k);
    }
    (h, k)
}

/// The two pairs whose mediant is `(kappa, r)`, read off from the two
/// truncations of the continued fraction of `kappa / r`. Returned as
/// `(left, right)` where `left` is the one closer to `(0, 1)`.
pub fn parents_from_cf(pair: CoprimePair) -> Result<(CoprimePair, CoprimePair)> {
    if pair.is_endpoint() {
        return Err(Error::Endpoint(pair.kappa, pair.r));
    }
    if pair.kappa == 0 || pair.r == 0 {
        return Err(Error::NotCoprime(pair.kappa, pair.r));
    }
    let mut q = continued_fraction(pair.kappa, pair.r)?;
    let last = q.len() - 1;
    let (a0, a1) = convergent(&q[..last]);
    q[last] -= 1;
    let (b0, b1) = convergent(&q);
    let a = CoprimePair::new(a0, a1)?;
    let b = CoprimePair::new(b0, b1)?;
    if a.mediant(b) != pair {
        return Err(Error::Internal(format!("parents of {pair} do not sum to it")));
    }
    Ok(if a.left_of(b) { (a, b) } else { (b, a) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(k: u64, r: u64) -> CoprimePair {
        CoprimePair::new(k, r).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(4, 2), Ok(2));
        assert_eq!(gcd(1, 0), Ok(1));
        assert_eq!(gcd(6, 9), Ok(3));
        assert_eq!(gcd(0, 0), Err(Error::ZeroGcd));
    }

    /// Evaluates `[q0; q1, ...]` with exact rationals, independent of
    /// [`convergent`].
    fn eval_rational(q: &[u64]) -> num_rational::Ratio<u64> {
        let mut acc = num_rational::Ratio::from_integer(*q.last().unwrap());
        for &qi in q.iter().rev().skip(1) {
            acc = num_rational::Ratio::from_integer(qi) + acc.recip();
        }
        acc
    }

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(continued_fraction(5, 3).unwrap(), vec![1, 1, 2]);
        assert_eq!(eval_rational(&[1, 1, 2]), num_rational::Ratio::new(5, 3));
        assert_eq!(continued_fraction(1, 1).unwrap(), vec![1]);
        assert_eq!(continued_fraction(7, 2).unwrap(), vec![3, 2]);
        assert_eq!(eval_rational(&[3, 2]), num_rational::Ratio::new(7, 2));
        assert_eq!(continued_fraction(1, 3).unwrap(), vec![0, 3]);
        assert_eq!(continued_fraction(4, 6), Err(Error::NotCoprime(4, 6)));
    }

    #[test]
    fn parents_examples() {
        assert_eq!(parents_from_cf(p(1, 1)).unwrap(), (p(0, 1), p(1, 0)));
        assert_eq!(parents_from_cf(p(2, 1)).unwrap(), (p(1, 1), p(1, 0)));
        assert_eq!(parents_from_cf(p(5, 3)).unwrap(), (p(3, 2), p(2, 1)));
        assert_eq!(parents_from_cf(p(1, 2)).unwrap(), (p(0, 1), p(1, 1)));
        assert!(matches!(parents_from_cf(p(1, 0)), Err(Error::Endpoint(1, 0))));
        assert!(matches!(parents_from_cf(p(0, 1)), Err(Error::Endpoint(0, 1))));
    }

    /// Walks the Stern-Brocot tree down to `target`, returning the interval
    /// endpoints that produced it.
    fn stern_brocot_parents(target: CoprimePair) -> (CoprimePair, CoprimePair) {
        let (mut left, mut right) = (CoprimePair::FIRST_EXCEPTIONAL, CoprimePair::STRICT);
        loop {
            let mid = left.mediant(right);
            if mid == target {
                return (left, right);
            }
            if target.left_of(mid) {
                right = mid;
            } else {
                left = mid;
            }
        }
    }

    proptest! {
        #[test]
        fn parents_sum_and_match_tree(k in 1u64..400, r in 1u64..400) {
            prop_assume!(num_integer::gcd(k, r) == 1);
            let pair = p(k, r);
            let (a, b) = parents_from_cf(pair).unwrap();
            prop_assert_eq!(a.mediant(b), pair);
            prop_assert_eq!(a.det(b).abs(), 1);
            prop_assert!(a.left_of(b));
            prop_assert_eq!((a, b), stern_brocot_parents(pair));
        }

        #[test]
        fn cf_round_trips(k in 1u64..10_000, r in 1u64..10_000) {
            prop_assume!(num_integer::gcd(k, r) == 1);
            let q = continued_fraction(k, r).unwrap();
            prop_assert!(q.len() == 1 || *q.last().unwrap() >= 2);
            prop_assert_eq!(convergent(&q), (k, r));
        }
    }
}
