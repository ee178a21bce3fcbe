//! Cohomology of the smooth projective hypersurface `S ⊂ P^{n-1}` of degree
//! `d`, the cup-with-hyperplane maps on it, and the groups built from them:
//! the Denef-Loeser covers of the exceptional divisors, the affine cone
//! `CS°` and the affine Milnor fibre `M_h`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bigint_serde;
use crate::error::{Error, Result};
use crate::group::{FgAbGroup, GradedGroup};

fn check_nd(n: u32, d: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter("n must be ≥ 3".into()));
    }
    if d < 1 {
        return Err(Error::InvalidParameter("d must be ≥ 1".into()));
    }
    Ok(())
}

/// `chi(S) = n + ((1 - d)^n - 1) / d`.
pub fn hypersurface_euler(n: u32, d: u32) -> BigInt {
    let one_minus_d = BigInt::from(1i64 - d as i64);
    BigInt::from(n) + (one_minus_d.pow(n) - BigInt::one()) / BigInt::from(d)
}

/// Rank `b` of `H^{n-2}(S)`, derived from the Euler characteristic: the
/// other even degrees in `[0, 2n-4]` each contribute one.
pub fn middle_rank(n: u32, d: u32) -> Result<BigUint> {
    check_nd(n, d)?;
    let chi = hypersurface_euler(n, d);
    let b = if n % 2 == 1 {
        BigInt::from(n - 1) - chi
    } else {
        chi - BigInt::from(n - 2)
    };
    b.to_biguint()
        .ok_or_else(|| Error::Internal(format!("negative middle rank for ({n}, {d})")))
}

/// The alternating binomial sum `(-1)^{n-1} 2 ceil((n-1)/2) +
/// sum_{k=0}^{n-2} (-1)^k C(n,k) d^{n-1-k}`. It agrees with [`middle_rank`]
/// for odd `n` and is 2 short for even `n`; kept as a cross-check only.
pub fn middle_rank_binomial(n: u32, d: u32) -> BigInt {
    let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
    let ceil = (n as i64 - 1 + 1) / 2;
    let mut sum = BigInt::from(sign * 2 * ceil);
    let mut binom = BigInt::one();
    for k in 0..=n - 2 {
        let term = &binom * BigInt::from(d).pow(n - 1 - k);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    sum
}

/// Milnor number of a homogeneous isolated singularity of degree `d` in `n`
/// variables.
pub fn milnor_number(n: u32, d: u32) -> BigUint {
    BigUint::from(d - 1).pow(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceData {
    pub n: u32,
    pub d: u32,
    #[serde(with = "bigint_serde::biguint")]
    pub b: BigUint,
    #[serde(with = "bigint_serde::biguint")]
    pub mu: BigUint,
    #[serde(with = "bigint_serde::bigint")]
    pub chi: BigInt,
    /// `H^•(S)`.
    pub ring: GradedGroup,
    /// `d = 1`: `S` is a hyperplane and the downstream theorems do not apply.
    pub degenerate: bool,
}

pub fn hypersurface_data(n: u32, d: u32) -> Result<HypersurfaceData> {
    let b = middle_rank(n, d)?;
    let mid = n as i64 - 2;
    let ring: GradedGroup = (0..=2 * mid)
        .filter_map(|k| {
            if k == mid {
                Some((k, FgAbGroup::free(b.clone())))
            } else if k % 2 == 0 {
                Some((k, FgAbGroup::free(1u32)))
            } else {
                None
            }
        })
        .collect();
    let chi = ring.euler_char();
    debug_assert_eq!(chi, hypersurface_euler(n, d));
    Ok(HypersurfaceData {
        n,
        d,
        b,
        mu: milnor_number(n, d),
        chi,
        ring,
        degenerate: d == 1,
    })
}

/// Kernel and cokernel of `∪h: H^k(S) -> H^{k+2}(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzMap {
    pub kernel: FgAbGroup,
    pub cokernel: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzData {
    pub n: u32,
    /// Keyed by the source degree `k ∈ [-2, 2n-2]`.
    pub maps: BTreeMap<i64, LefschetzMap>,
}

impl LefschetzData {
    pub fn at(&self, k: i64) -> LefschetzMap {
        self.maps.get(&k).cloned().unwrap_or(LefschetzMap {
            kernel: FgAbGroup::zero(),
            cokernel: FgAbGroup::zero(),
        })
    }
}

/// Away from the middle, `∪h` sends a generator to a generator. Just below
/// the middle for odd `n` it is `h^j ↦ h^{j+1} = d · (h^{j+1}/d)`. For even
/// `n` the map into `Z^b` is injective with primitive image and the map out
/// of it is onto.
pub fn lefschetz_data(data: &HypersurfaceData) -> LefschetzData {
    let n = data.n as i64;
    let mut maps = BTreeMap::new();
    for k in -2..=2 * n - 2 {
        let src = data.ring.get(k);
        let tgt = data.ring.get(k + 2);
        let map = if src.is_zero() || tgt.is_zero() {
            LefschetzMap {
                kernel: src,
                cokernel: tgt,
            }
        } else if n % 2 == 1 && k == n - 3 {
            LefschetzMap {
                kernel: FgAbGroup::zero(),
                cokernel: FgAbGroup::cyclic(data.d),
            }
        } else if n % 2 == 0 && k == n - 4 {
            LefschetzMap {
                kernel: FgAbGroup::zero(),
                cokernel: FgAbGroup::free(&data.b - 1u32),
            }
        } else if n % 2 == 0 && k == n - 2 {
            LefschetzMap {
                kernel: FgAbGroup::free(&data.b - 1u32),
                cokernel: FgAbGroup::zero(),
            }
        } else {
            LefschetzMap {
                kernel: FgAbGroup::zero(),
                cokernel: FgAbGroup::zero(),
            }
        };
        maps.insert(k, map);
    }
    LefschetzData { n: data.n, maps }
}

/// Compactly supported cohomology of a `C^×`-bundle over `S` with Euler
/// class `±h`, from the Thom-Gysin sequence
/// `H^{k-3}(S) → H^{k-1}(S) → H^k_c(P) → H^{k-2}(S) → H^k(S)`.
/// The kernel on the right is free, so each `H^k_c(P)` splits as
/// `coker(∪h on H^{k-3}) ⊕ ker(∪h on H^{k-2})`.
pub fn gysin_cx_bundle(data: &HypersurfaceData, lef: &LefschetzData) -> GradedGroup {
    let top = 2 * data.n as i64 - 2;
    (0..=top + 1)
        .flat_map(|k| {
            [
                (k, lef.at(k - 3).cokernel),
                (k, lef.at(k - 2).kernel),
            ]
        })
        .collect()
}

/// Homology of the Denef-Loeser cover over the m-divisor `E_i`.
pub fn cover_homology(n: u32, d: u32, index: i64, m: u32) -> Result<GradedGroup> {
    check_nd(n, d)?;
    let lo = -((m / d) as i64);
    if index < lo || index > -1 {
        return Err(Error::IndexOutOfRange { index, lo, hi: -1 });
    }
    let n = n as i64;
    if m % d == 0 && index == lo {
        return Ok([
            (0, FgAbGroup::free(1u32)),
            (n - 1, FgAbGroup::free(milnor_number(n as u32, d))),
        ]
        .into_iter()
        .collect());
    }
    let b = middle_rank(n as u32, d)?;
    let (low, high) = if n % 2 == 1 {
        (FgAbGroup::new(b.clone(), vec![BigUint::from(d)]), FgAbGroup::free(b))
    } else {
        let b1 = b - 1u32;
        (FgAbGroup::free(b1.clone()), FgAbGroup::free(b1))
    };
    Ok([
        (0, FgAbGroup::free(1u32)),
        (n - 2, low),
        (n - 1, high),
        (2 * n - 3, FgAbGroup::free(1u32)),
    ]
    .into_iter()
    .collect())
}

/// `H^•_c(M_h)`: `Z^mu` in degree `n-1` and `Z` in degree `2n-2`.
pub fn milnor_fiber_compact_cohomology(n: u32, d: u32) -> Result<GradedGroup> {
    check_nd(n, d)?;
    let n = n as i64;
    Ok([
        (n - 1, FgAbGroup::free(milnor_number(n as u32, d))),
        (2 * n - 2, FgAbGroup::free(1u32)),
    ]
    .into_iter()
    .collect())
}

/// `H^•_c(CS°)`, where `CS° → S` is `O_S(-1)` minus its zero section.
pub fn cone_compact_cohomology(n: u32, d: u32) -> Result<GradedGroup> {
    let data = hypersurface_data(n, d)?;
    let lef = lefschetz_data(&data);
    Ok(gysin_cx_bundle(&data, &lef))
}

/// Closed form of `chi_c(M_h) = 1 + (-1)^{n-1} (d-1)^n`.
pub fn milnor_fiber_euler(n: u32, d: u32) -> BigInt {
    let mu = BigInt::from(milnor_number(n, d));
    let signed = if (n - 1) % 2 == 0 { mu } else { -mu };
    BigInt::one() + signed
}
