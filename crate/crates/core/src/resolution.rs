//! The minimal m-separating log resolution of a semihomogeneous germ.
//!
//! Its dual graph is a chain running from `E(0,1)` (exceptional divisor of
//! the blow-up of the origin) to `E(1,0)` (strict transform). Every further
//! divisor is the blow-up of the intersection of two neighbours and carries
//! the mediant of their pairs.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::arith::{parents_from_cf, CoprimePair};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorKind {
    StrictTransform,
    FirstExceptional,
    Intermediate,
}

impl DivisorKind {
    pub fn of(pair: CoprimePair) -> Self {
        if pair == CoprimePair::STRICT {
            DivisorKind::StrictTransform
        } else if pair == CoprimePair::FIRST_EXCEPTIONAL {
            DivisorKind::FirstExceptional
        } else {
            DivisorKind::Intermediate
        }
    }
}

/// A divisor `E(kappa, r)` with multiplicity `N = kappa + r d` and log
/// discrepancy `nu = kappa + r n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Divisor {
    pub kappa: u64,
    pub r: u64,
    #[serde(rename = "N")]
    pub multiplicity: u64,
    #[serde(rename = "nu")]
    pub log_discrepancy: u64,
    pub kind: DivisorKind,
}

impl Divisor {
    pub fn new(pair: CoprimePair, n: u32, d: u32) -> Self {
        let (kappa, r) = (pair.kappa(), pair.r());
        Divisor {
            kappa,
            r,
            multiplicity: kappa + r * d as u64,
            log_discrepancy: kappa + r * n as u64,
            kind: DivisorKind::of(pair),
        }
    }

    pub fn pair(&self) -> CoprimePair {
        CoprimePair::new(self.kappa, self.r).expect("divisor pairs are coprime")
    }
}

pub(crate) fn check_resolution_params(n: u32, d: u32, m: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be ≥ 2".into()));
    }
    if d < 1 {
        return Err(Error::InvalidParameter("d must be ≥ 1".into()));
    }
    if m < 1 {
        return Err(Error::InvalidParameter("m must be ≥ 1".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ChainRecord")]
pub struct ResolutionChain {
    pub n: u32,
    pub d: u32,
    pub m: u32,
    /// Ordered from `(0, 1)` to `(1, 0)`.
    pub divisors: Vec<Divisor>,
}

#[derive(Deserialize)]
struct ChainRecord {
    n: u32,
    d: u32,
    m: u32,
    divisors: Vec<Divisor>,
}

impl TryFrom<ChainRecord> for ResolutionChain {
    type Error = Error;

    fn try_from(rec: ChainRecord) -> Result<Self> {
        let pairs = rec
            .divisors
            .iter()
            .map(|dv| CoprimePair::new(dv.kappa, dv.r))
            .collect::<Result<Vec<_>>>()?;
        let chain = ResolutionChain::from_pairs(rec.n, rec.d, rec.m, pairs)?;
        if chain.divisors != rec.divisors {
            return Err(Error::Parse("divisor N/nu/kind do not match (n, d)".into()));
        }
        Ok(chain)
    }
}

/// Runs the blow-up loop: starting from `[(0,1), (1,0)]`, the mediant is
/// inserted between any two neighbours whose multiplicities sum to at most
/// `m`, until every adjacent pair is separated.
pub fn build_minimal_resolution(n: u32, d: u32, m: u32) -> Result<ResolutionChain> {
    check_resolution_params(n, d, m)?;
    let mult = |p: CoprimePair| p.kappa() + p.r() * d as u64;
    let mut out = vec![CoprimePair::FIRST_EXCEPTIONAL];
    // Gaps still to be examined, innermost-left on top so `out` fills in
    // chain order.
    let mut work = vec![(CoprimePair::FIRST_EXCEPTIONAL, CoprimePair::STRICT)];
    while let Some((a, b)) = work.pop() {
        if mult(a) + mult(b) <= m as u64 {
            let mid = a.mediant(b);
            work.push((mid, b));
            work.push((a, mid));
        } else {
            out.push(b);
        }
    }
    ResolutionChain::from_pairs(n, d, m, out)
}

impl ResolutionChain {
    /// Builds a chain from an explicit list of pairs. Checks the endpoints
    /// and Farey adjacency but not minimality, so non-minimal chains can be
    /// fed to [`verify_minimality`].
    pub fn from_pairs(n: u32, d: u32, m: u32, pairs: Vec<CoprimePair>) -> Result<Self> {
        check_resolution_params(n, d, m)?;
        if pairs.first() != Some(&CoprimePair::FIRST_EXCEPTIONAL)
            || pairs.last() != Some(&CoprimePair::STRICT)
            || pairs.len() < 2
        {
            return Err(Error::InvalidParameter(
                "a chain runs from (0, 1) to (1, 0)".into(),
            ));
        }
        for w in pairs.windows(2) {
            if w[0].det(w[1]).abs() != 1 || !w[0].left_of(w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "{} and {} are not ordered Farey neighbours",
                    w[0], w[1]
                )));
            }
        }
        Ok(ResolutionChain {
            n,
            d,
            m,
            divisors: pairs.into_iter().map(|p| Divisor::new(p, n, d)).collect(),
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = CoprimePair> + '_ {
        self.divisors.iter().map(Divisor::pair)
    }

    pub fn divisor(&self, pair: CoprimePair) -> Option<&Divisor> {
        self.position(pair).map(|i| &self.divisors[i])
    }

    /// Binary search: the chain is sorted by increasing `kappa / r`.
    fn position(&self, pair: CoprimePair) -> Option<usize> {
        let key = |p: CoprimePair| (p.kappa() as u128, p.r() as u128);
        let (k, r) = key(pair);
        self.divisors
            .binary_search_by(|dv| {
                let (k2, r2) = key(dv.pair());
                (k2 * r).cmp(&(k * r2))
            })
            .ok()
    }

    pub fn intermediate(&self) -> impl Iterator<Item = &Divisor> {
        self.divisors[1..self.divisors.len() - 1].iter()
    }
}

/// The intermediate pairs of the minimal chain in closed form: coprime
/// `(kappa, r)` with `kappa, r >= 1` and `kappa + r d <= m`.
pub fn closed_form_intermediates(d: u32, m: u32) -> HashSet<CoprimePair> {
    let (d, m) = (d as u64, m as u64);
    let mut out = HashSet::new();
    let mut r = 1;
    while 1 + r * d <= m {
        for kappa in 1..=m - r * d {
            if let Ok(p) = CoprimePair::new(kappa, r) {
                out.insert(p);
            }
        }
        r += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MDivisor {
    pub index: i64,
    pub divisor: Divisor,
    pub exceptional: bool,
}

/// The m-divisors `E_i`, `i = -floor(m/d), ..., 0`, in increasing `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MDivisorList {
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub entries: Vec<MDivisor>,
}

impl MDivisorList {
    pub fn exceptional(&self) -> impl Iterator<Item = &MDivisor> {
        self.entries.iter().filter(|e| e.exceptional)
    }

    pub fn get(&self, index: i64) -> Option<&MDivisor> {
        self.entries.iter().find(|e| e.index == index)
    }
}

/// Pair of the m-divisor `E_i`: `(m + i d, -i)` divided by its gcd.
pub fn m_divisor_pair(d: u32, m: u32, index: i64) -> Result<CoprimePair> {
    let lo = -((m / d) as i64);
    if index < lo || index > 0 {
        return Err(Error::IndexOutOfRange { index, lo, hi: 0 });
    }
    let a = m as i64 + index * d as i64;
    CoprimePair::reduced(a as u64, (-index) as u64)
}

pub fn m_divisors(chain: &ResolutionChain) -> Result<MDivisorList> {
    let (d, m) = (chain.d, chain.m);
    let present: HashSet<_> = chain.pairs().collect();
    let lo = -((m / d) as i64);
    let mut entries = Vec::new();
    for index in lo..=0 {
        let pair = m_divisor_pair(d, m, index)?;
        if !present.contains(&pair) {
            return Err(Error::Internal(format!("m-divisor {pair} missing from chain")));
        }
        let divisor = Divisor::new(pair, chain.n, d);
        if m as u64 % divisor.multiplicity != 0 {
            return Err(Error::Internal(format!("N of {pair} does not divide m")));
        }
        entries.push(MDivisor {
            index,
            divisor,
            exceptional: pair != CoprimePair::STRICT,
        });
    }
    Ok(MDivisorList {
        n: chain.n,
        d,
        m,
        entries,
    })
}

/// Chain neighbours `(left, right)` of an intermediate divisor; `left` is the
/// one closer to `(0, 1)`.
pub fn adjacency(chain: &ResolutionChain, pair: CoprimePair) -> Result<(CoprimePair, CoprimePair)> {
    if pair.is_endpoint() {
        return Err(Error::Endpoint(pair.kappa(), pair.r()));
    }
    let i = chain
        .position(pair)
        .ok_or(Error::NotInChain(pair.kappa(), pair.r()))?;
    Ok((chain.divisors[i - 1].pair(), chain.divisors[i + 1].pair()))
}

/// How many times the intersection of `pair` with its left and right
/// neighbours was blown up after `pair` itself was created:
/// `n' = (kappa* - kappa') / kappa` and `n'' = (kappa** - kappa'') / kappa`.
pub fn blowup_counts(chain: &ResolutionChain, pair: CoprimePair) -> Result<(u64, u64)> {
    let (left, right) = adjacency(chain, pair)?;
    let (p_left, p_right) = parents_from_cf(pair)?;
    let count = |neighbour: CoprimePair, parent: CoprimePair| -> Result<u64> {
        let dk = neighbour.kappa() as i128 - parent.kappa() as i128;
        let dr = neighbour.r() as i128 - parent.r() as i128;
        let (k, r) = (pair.kappa() as i128, pair.r() as i128);
        if dk < 0 || dk % k != 0 || dr % r != 0 || dk / k != dr / r {
            return Err(Error::Internal(format!(
                "neighbour {neighbour} of {pair} is not parent {parent} plus a multiple"
            )));
        }
        Ok((dk / k) as u64)
    };
    Ok((count(left, p_left)?, count(right, p_right)?))
}

/// The fibre identities behind the nefness of `K_X + Delta`:
/// `nu* + nu** = nu (1 + n' + n'')`, and the same for `N`.
pub fn nef_fiber_identity(chain: &ResolutionChain, pair: CoprimePair) -> Result<bool> {
    let (left, right) = adjacency(chain, pair)?;
    let (n1, n2) = blowup_counts(chain, pair)?;
    let (n, d) = (chain.n, chain.d);
    let (e, l, r) = (
        Divisor::new(pair, n, d),
        Divisor::new(left, n, d),
        Divisor::new(right, n, d),
    );
    let factor = 1 + n1 + n2;
    Ok(l.log_discrepancy + r.log_discrepancy == e.log_discrepancy * factor
        && l.multiplicity + r.multiplicity == e.multiplicity * factor)
}

/// Checks that the intermediate divisors are exactly the closed-form set and
/// that the chain is m-separating.
pub fn verify_minimality(chain: &ResolutionChain) -> bool {
    let have: HashSet<_> = chain.intermediate().map(Divisor::pair).collect();
    let separated = chain
        .divisors
        .windows(2)
        .all(|w| w[0].multiplicity + w[1].multiplicity > chain.m as u64);
    separated && have == closed_form_intermediates(chain.d, chain.m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: u64, r: u64) -> CoprimePair {
        CoprimePair::new(k, r).unwrap()
    }

    fn pairs(chain: &ResolutionChain) -> Vec<(u64, u64)> {
        chain.pairs().map(Into::into).collect()
    }

    #[test]
    fn chain_3_2_4() {
        let c = build_minimal_resolution(3, 2, 4).unwrap();
        assert_eq!(pairs(&c), vec![(0, 1), (1, 1), (2, 1), (1, 0)]);
        let ns: Vec<_> = c.divisors.iter().map(|d| d.multiplicity).collect();
        let nus: Vec<_> = c.divisors.iter().map(|d| d.log_discrepancy).collect();
        assert_eq!(ns, vec![2, 3, 4, 1]);
        assert_eq!(nus, vec![3, 4, 5, 1]);
        assert_eq!(c.divisors[0].kind, DivisorKind::FirstExceptional);
        assert_eq!(c.divisors[3].kind, DivisorKind::StrictTransform);
    }

    #[test]
    fn chain_without_insertions() {
        let c = build_minimal_resolution(3, 5, 4).unwrap();
        assert_eq!(pairs(&c), vec![(0, 1), (1, 0)]);
        let c = build_minimal_resolution(3, 1, 1).unwrap();
        assert_eq!(pairs(&c), vec![(0, 1), (1, 0)]);
        assert!(verify_minimality(&c));
    }

    #[test]
    fn chain_3_2_6_matches_closed_form() {
        let c = build_minimal_resolution(3, 2, 6).unwrap();
        assert!(verify_minimality(&c));
        for dv in c.intermediate() {
            assert!(dv.multiplicity <= 6);
        }
        for w in c.divisors.windows(2) {
            assert_eq!(w[0].pair().det(w[1].pair()).abs(), 1);
        }
        // (1,1), (2,1), (3,1), (4,1), (1,2) have N <= 6
        assert_eq!(c.divisors.len(), 7);
    }

    #[test]
    fn parameter_validation() {
        assert_eq!(
            build_minimal_resolution(1, 2, 4),
            Err(Error::InvalidParameter("n must be ≥ 2".into()))
        );
        assert!(build_minimal_resolution(3, 0, 4).is_err());
        assert!(build_minimal_resolution(3, 2, 0).is_err());
    }

    #[test]
    fn m_divisor_examples() {
        let list = |n, d, m| {
            let c = build_minimal_resolution(n, d, m).unwrap();
            m_divisors(&c)
                .unwrap()
                .entries
                .iter()
                .map(|e| (e.index, e.divisor.kappa, e.divisor.r))
                .collect::<Vec<_>>()
        };
        assert_eq!(list(3, 2, 4), vec![(-2, 0, 1), (-1, 2, 1), (0, 1, 0)]);
        assert_eq!(list(3, 5, 4), vec![(0, 1, 0)]);
        assert_eq!(list(3, 4, 8), vec![(-2, 0, 1), (-1, 4, 1), (0, 1, 0)]);
    }

    #[test]
    fn adjacency_examples() {
        let c = build_minimal_resolution(3, 2, 4).unwrap();
        assert_eq!(adjacency(&c, p(1, 1)).unwrap(), (p(0, 1), p(2, 1)));
        assert_eq!(adjacency(&c, p(2, 1)).unwrap(), (p(1, 1), p(1, 0)));
        assert!(matches!(adjacency(&c, p(0, 1)), Err(Error::Endpoint(0, 1))));
        let c = build_minimal_resolution(3, 2, 2).unwrap();
        assert!(matches!(adjacency(&c, p(1, 1)), Err(Error::NotInChain(1, 1))));
    }

    #[test]
    fn blowup_count_examples() {
        let c = build_minimal_resolution(3, 2, 4).unwrap();
        assert_eq!(blowup_counts(&c, p(1, 1)).unwrap(), (0, 1));
        assert_eq!(blowup_counts(&c, p(2, 1)).unwrap(), (0, 0));
        // (1,2) is created last in (3,2,5) between (0,1) and (1,1)
        let c = build_minimal_resolution(3, 2, 5).unwrap();
        assert_eq!(blowup_counts(&c, p(1, 2)).unwrap(), (0, 0));
    }

    #[test]
    fn nef_identity_examples() {
        let c = build_minimal_resolution(3, 2, 4).unwrap();
        assert!(nef_fiber_identity(&c, p(2, 1)).unwrap());
        assert!(nef_fiber_identity(&c, p(1, 1)).unwrap());
    }

    #[test]
    fn nef_identity_exhaustive() {
        for n in 2..=8 {
            for d in 1..=8 {
                for m in 1..=40 {
                    let c = build_minimal_resolution(n, d, m).unwrap();
                    for dv in c.intermediate() {
                        assert!(nef_fiber_identity(&c, dv.pair()).unwrap(), "{n} {d} {m} {dv:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn non_minimal_chain_is_rejected() {
        let c = ResolutionChain::from_pairs(
            3,
            2,
            4,
            vec![p(0, 1), p(1, 2), p(1, 1), p(2, 1), p(1, 0)],
        )
        .unwrap();
        assert!(!verify_minimality(&c));
        assert!(verify_minimality(&build_minimal_resolution(3, 2, 4).unwrap()));
    }

    #[test]
    fn from_pairs_rejects_non_neighbours() {
        assert!(ResolutionChain::from_pairs(3, 2, 4, vec![p(0, 1), p(2, 1), p(1, 0)]).is_err());
        assert!(ResolutionChain::from_pairs(3, 2, 4, vec![p(1, 0), p(0, 1)]).is_err());
    }
}
