//! dlt, contact and essential m-valuations of a semihomogeneous germ and the
//! codimensions of the strata `X^∞_{m,i}` of the unrestricted contact locus.
//!
//! All three families are drawn from the exceptional m-divisors
//! `E_{-floor(m/d)}, ..., E_{-1}` of the minimal m-separating resolution; the
//! strict transform `E_0` is never a valuation over the origin.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resolution::{build_minimal_resolution, m_divisor_pair, m_divisors, Divisor, MDivisor};

pub const N2_NOTE: &str = "counts only; topology modules require n ≥ 3";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationReport {
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub essential: Vec<MDivisor>,
    pub contact: Vec<MDivisor>,
    pub dlt: Vec<MDivisor>,
    /// `i -> codim X^∞_{m,i}`.
    pub codims: BTreeMap<i64, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ValuationReport {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.dlt.len(), self.contact.len(), self.essential.len())
    }
}

fn check_params(n: u32, d: u32, m: u32) -> Result<()> {
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

pub fn essential_valuations(n: u32, d: u32, m: u32) -> Result<Vec<MDivisor>> {
    check_params(n, d, m)?;
    let chain = build_minimal_resolution(n, d, m)?;
    Ok(m_divisors(&chain)?
        .entries
        .into_iter()
        .filter(|e| e.exceptional)
        .collect())
}

/// For `d < n` only `E_{-1}` (present once `m ≥ d`); for `d ≥ n` every
/// exceptional m-divisor.
pub fn contact_valuations(n: u32, d: u32, m: u32) -> Result<Vec<MDivisor>> {
    let essential = essential_valuations(n, d, m)?;
    Ok(if d < n {
        essential.into_iter().filter(|e| e.index == -1).collect()
    } else {
        essential
    })
}

/// Empty for `d < n`; every exceptional m-divisor for `d ≥ n`.
pub fn dlt_valuations(n: u32, d: u32, m: u32) -> Result<Vec<MDivisor>> {
    let essential = essential_valuations(n, d, m)?;
    Ok(if d < n { Vec::new() } else { essential })
}

/// `codim X^∞_{m,i} = m ν_i / N_i = m + i(d - n)`; both forms are computed
/// and must agree.
pub fn stratum_codimension(n: u32, d: u32, m: u32, index: i64) -> Result<u64> {
    check_params(n, d, m)?;
    let lo = -((m / d) as i64);
    if index < lo || index > -1 {
        return Err(Error::IndexOutOfRange { index, lo, hi: -1 });
    }
    let linear = m as i64 + index * (d as i64 - n as i64);
    let pair = m_divisor_pair(d, m, index)?;
    let div = Divisor::new(pair, n, d);
    let num = m as u64 * div.log_discrepancy;
    if num % div.multiplicity != 0 || (num / div.multiplicity) as i64 != linear {
        return Err(Error::Internal(format!(
            "codimension mismatch at i = {index}: m·ν/N = {num}/{} vs {linear}",
            div.multiplicity
        )));
    }
    Ok(linear as u64)
}

pub fn valuation_report(n: u32, d: u32, m: u32) -> Result<ValuationReport> {
    let essential = essential_valuations(n, d, m)?;
    let contact = contact_valuations(n, d, m)?;
    let dlt = dlt_valuations(n, d, m)?;
    let codims = essential
        .iter()
        .map(|e| Ok((e.index, stratum_codimension(n, d, m, e.index)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let subset = |a: &[MDivisor], b: &[MDivisor]| a.iter().all(|x| b.contains(x));
    if !subset(&dlt, &contact) || !subset(&contact, &essential) {
        return Err(Error::Internal("valuation families are not nested".into()));
    }
    if essential.len() as u32 != m / d {
        return Err(Error::Internal("wrong number of essential valuations".into()));
    }
    Ok(ValuationReport {
        n,
        d,
        m,
        essential,
        contact,
        dlt,
        codims,
        note: (n == 2).then(|| N2_NOTE.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::build_minimal_resolution;

    fn pairs(v: &[MDivisor]) -> Vec<(u64, u64)> {
        v.iter().map(|e| (e.divisor.kappa, e.divisor.r)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(pairs(&essential_valuations(3, 2, 4).unwrap()), [(0, 1), (2, 1)]);
        assert!(essential_valuations(3, 2, 1).unwrap().is_empty());
        assert_eq!(pairs(&essential_valuations(3, 4, 8).unwrap()), [(0, 1), (4, 1)]);
        assert_eq!(pairs(&contact_valuations(3, 2, 4).unwrap()), [(2, 1)]);
        assert_eq!(pairs(&contact_valuations(3, 4, 8).unwrap()), [(0, 1), (4, 1)]);
        assert!(contact_valuations(3, 2, 1).unwrap().is_empty());
        assert!(dlt_valuations(3, 2, 4).unwrap().is_empty());
        assert_eq!(pairs(&dlt_valuations(3, 3, 7).unwrap()), [(1, 2), (4, 1)]);
    }

    #[test]
    fn codimension_examples() {
        assert_eq!(stratum_codimension(3, 2, 4, -1).unwrap(), 5);
        assert_eq!(stratum_codimension(3, 4, 8, -2).unwrap(), 6);
        assert_eq!(stratum_codimension(5, 5, 17, -1).unwrap(), 17);
        assert!(matches!(
            stratum_codimension(3, 2, 4, -3),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(stratum_codimension(3, 2, 4, 0).is_err());
    }

    #[test]
    fn report_counts() {
        assert_eq!(valuation_report(3, 2, 4).unwrap().counts(), (0, 1, 2));
        assert_eq!(valuation_report(3, 4, 8).unwrap().counts(), (2, 2, 2));
        assert_eq!(valuation_report(3, 2, 1).unwrap().counts(), (0, 0, 0));
        assert!(valuation_report(2, 3, 6).unwrap().note.is_some());
        assert!(valuation_report(3, 3, 6).unwrap().note.is_none());
        assert!(valuation_report(1, 3, 6).is_err());
    }

    #[test]
    fn codimension_monotonicity() {
        for n in 2..=6 {
            for d in 1..=8 {
                for m in 1..=40 {
                    let r = valuation_report(n, d, m).unwrap();
                    let c: Vec<u64> = r.codims.values().copied().collect();
                    if d >= n {
                        assert!(c.windows(2).all(|w| w[0] <= w[1]));
                    } else {
                        assert!(c.windows(2).all(|w| w[0] > w[1]));
                        if let Some(&last) = r.codims.get(&-1) {
                            assert!(last <= (m - d + n) as u64);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn divisors_lie_on_chain() {
        for (n, d, m) in [(3, 2, 4), (4, 3, 13), (2, 5, 30), (6, 6, 24)] {
            let chain = build_minimal_resolution(n, d, m).unwrap();
            for e in valuation_report(n, d, m).unwrap().essential {
                assert!(chain.divisor(e.divisor.pair()).is_some());
                assert_eq!(m as u64 % e.divisor.multiplicity, 0);
            }
        }
    }

    #[test]
    fn report_serde_round_trip() {
        let r = valuation_report(3, 4, 8).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"codims\":{\"-2\":6,\"-1\":7}"));
        assert_eq!(serde_json::from_str::<ValuationReport>(&s).unwrap(), r);
    }
}
