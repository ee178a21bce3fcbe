//! The restricted contact locus `X_m = { γ : γ(0) = 0, f(γ(t)) ≡ t^m mod t^{m+1} }`
//! stratified by the order `ρ` of the jet.
//!
//! A stratum of order `ρ` is non-empty iff `1 <= ρ <= m/d`. Its lowest
//! coefficient `γ_ρ` ranges over the punctured cone `CS° = {h = 0} \ {0}`
//! (or over the Milnor fibre `M_h = {h = 1}` when `dρ = m`), the next
//! `m - dρ` coefficients each lie on an affine hyperplane, and the last
//! `(d-1)ρ` coefficients are free. The stratum is therefore an iterated
//! affine bundle of rank `D_ρ = (m - dρ)(n - 1) + (d - 1)ρn` over its base.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::bigint_serde;
use crate::error::{Error, Result};
use crate::group::GradedGroup;
use crate::topology::{
    cone_compact_cohomology, hypersurface_euler, milnor_fiber_compact_cohomology,
    milnor_fiber_euler,
};

pub(crate) fn check_contact_params(n: u32, d: u32, m: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter("n must be ≥ 3".into()));
    }
    if d < 2 {
        return Err(Error::HypothesisViolated("requires d ≥ 2".into()));
    }
    if m < 1 {
        return Err(Error::InvalidParameter("m must be ≥ 1".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// `{h = 0} \ {0}`
    Cone,
    /// `{h = 1}`
    MilnorFiber,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub rho: u32,
    pub base_kind: BaseKind,
    /// Coefficient vectors constrained to a moving hyperplane: `m - dρ`.
    pub hyperplane_vars: u64,
    /// Unconstrained coefficient vectors: `(d-1)ρ`.
    pub free_vars: u64,
    /// Complex rank of the affine bundle over the base.
    pub fiber_dim: u64,
    pub total_dim: u64,
}

impl GradedPiece {
    pub fn new(n: u32, d: u32, m: u32, rho: u32) -> Self {
        let (n, d, m, r) = (n as u64, d as u64, m as u64, rho as u64);
        debug_assert!(r >= 1 && d * r <= m);
        let hyperplane_vars = m - d * r;
        let free_vars = (d - 1) * r;
        let fiber_dim = hyperplane_vars * (n - 1) + free_vars * n;
        GradedPiece {
            rho,
            base_kind: if d * r == m {
                BaseKind::MilnorFiber
            } else {
                BaseKind::Cone
            },
            hyperplane_vars,
            free_vars,
            fiber_dim,
            total_dim: (n - 1) + fiber_dim,
        }
    }

    /// Filtration index `p = -ρ`.
    pub fn column(&self) -> i64 {
        -(self.rho as i64)
    }
}

pub fn graded_pieces(n: u32, d: u32, m: u32) -> Result<Vec<GradedPiece>> {
    check_contact_params(n, d, m)?;
    Ok((1..=m / d).map(|rho| GradedPiece::new(n, d, m, rho)).collect())
}

pub fn base_compact_cohomology(kind: BaseKind, n: u32, d: u32) -> Result<GradedGroup> {
    match kind {
        BaseKind::Cone => cone_compact_cohomology(n, d),
        BaseKind::MilnorFiber => milnor_fiber_compact_cohomology(n, d),
    }
}

/// Thom isomorphism for the affine bundle: the base profile shifted up by
/// twice the fibre dimension.
pub fn piece_compact_cohomology(piece: &GradedPiece, n: u32, d: u32) -> Result<GradedGroup> {
    let base = base_compact_cohomology(piece.base_kind, n, d)?;
    Ok(base.shift(2 * piece.fiber_dim as i64))
}

/// `H^•_c(X_m)`. The order spectral sequence degenerates at `E_1` and the
/// only torsion in any total degree is a single `Z/(d)`, so the abutment is
/// the direct sum of the pieces.
pub fn contact_cohomology(n: u32, d: u32, m: u32) -> Result<GradedGroup> {
    let mut total = GradedGroup::new();
    for piece in graded_pieces(n, d, m)? {
        total = total.direct_sum(&piece_compact_cohomology(&piece, n, d)?);
    }
    Ok(total)
}

/// `chi_c(X_m)`. For `n ≥ 3` this is read off the cohomology; for `n = 2`,
/// where the groups are not computed, it comes from
/// [`contact_euler_additive`].
pub fn contact_euler(n: u32, d: u32, m: u32) -> Result<BigInt> {
    if n == 2 {
        return contact_euler_additive(n, d, m);
    }
    Ok(contact_cohomology(n, d, m)?.euler_char())
}

/// `chi_c(X_m)` by additivity over the order strata alone: affine fibres
/// contribute 1, `chi_c({h=0} ∖ {0}) = 0` (free `C^*`-action) and `{h=1}` is
/// a `d`-sheeted cover of `P^{n-1} ∖ S`, so `chi(M_h) = d (n - chi(S))`.
/// Valid for `n ≥ 2`; uses neither the Milnor number nor any group.
pub fn contact_euler_additive(n: u32, d: u32, m: u32) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be ≥ 2".into()));
    }
    if d < 2 {
        return Err(Error::HypothesisViolated("requires d ≥ 2".into()));
    }
    if m < 1 {
        return Err(Error::InvalidParameter("m must be ≥ 1".into()));
    }
    let milnor = BigInt::from(d) * (BigInt::from(n) - hypersurface_euler(n, d));
    Ok((1..=m / d)
        .map(|rho| match GradedPiece::new(n, d, m, rho).base_kind {
            BaseKind::Cone => BigInt::zero(),
            BaseKind::MilnorFiber => milnor.clone(),
        })
        .sum())
}

/// `0` if `d ∤ m`, otherwise `chi_c(M_h) = 1 + (-1)^{n-1}(d-1)^n`.
pub fn contact_euler_closed_form(n: u32, d: u32, m: u32) -> BigInt {
    if m % d == 0 {
        milnor_fiber_euler(n, d)
    } else {
        BigInt::zero()
    }
}

pub fn contact_dimension(n: u32, d: u32, m: u32) -> Result<Option<u64>> {
    Ok(graded_pieces(n, d, m)?.iter().map(|p| p.total_dim).max())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MotivicBasis {
    #[serde(rename = "pt")]
    Point,
    #[serde(rename = "S")]
    Hypersurface,
    #[serde(rename = "Mh")]
    MilnorFiber,
}

/// An element of `Z[L] · {pt, [S], [M_h]}` inside the Grothendieck ring of
/// varieties.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MotivicRecord", into = "MotivicRecord")]
pub struct MotivicClass {
    terms: BTreeMap<(u64, MotivicBasis), BigInt>,
}

#[derive(Serialize, Deserialize)]
struct MotivicTerm {
    #[serde(rename = "L_exp")]
    l_exp: u64,
    basis: MotivicBasis,
    #[serde(with = "bigint_serde::bigint")]
    coeff: BigInt,
}

#[derive(Serialize, Deserialize)]
struct MotivicRecord {
    terms: Vec<MotivicTerm>,
}

impl TryFrom<MotivicRecord> for MotivicClass {
    type Error = String;

    fn try_from(rec: MotivicRecord) -> std::result::Result<Self, String> {
        let mut c = MotivicClass::default();
        for t in rec.terms {
            c.add_term(t.l_exp, t.basis, t.coeff);
        }
        Ok(c)
    }
}

impl From<MotivicClass> for MotivicRecord {
    fn from(c: MotivicClass) -> Self {
        MotivicRecord {
            terms: c
                .terms
                .into_iter()
                .map(|((l_exp, basis), coeff)| MotivicTerm { l_exp, basis, coeff })
                .collect(),
        }
    }
}

impl MotivicClass {
    pub fn add_term(&mut self, l_exp: u64, basis: MotivicBasis, coeff: impl Into<BigInt>) {
        let key = (l_exp, basis);
        let sum = self.terms.remove(&key).unwrap_or_default() + coeff.into();
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    /// `L^e [CS°] = L^{e+1}[S] - L^e[S]`.
    pub fn add_cone(&mut self, l_exp: u64) {
        self.add_term(l_exp + 1, MotivicBasis::Hypersurface, 1);
        self.add_term(l_exp, MotivicBasis::Hypersurface, -1);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, l_exp: u64, basis: MotivicBasis) -> BigInt {
        self.terms.get(&(l_exp, basis)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, MotivicBasis, &BigInt)> {
        self.terms.iter().map(|((e, b), c)| (*e, *b, c))
    }

    /// Substitutes integer values for `L`, `pt`, `[S]` and `[M_h]`.
    pub fn evaluate(&self, l: &BigInt, s: &BigInt, mh: &BigInt) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |acc, ((e, b), c)| {
            let base = match b {
                MotivicBasis::Point => BigInt::one(),
                MotivicBasis::Hypersurface => s.clone(),
                MotivicBasis::MilnorFiber => mh.clone(),
            };
            acc + c * Pow::pow(l, *e) * base
        })
    }
}

impl fmt::Display for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((e, b), c) in self.terms.iter().rev() {
            let sym = match b {
                MotivicBasis::Point => "",
                MotivicBasis::Hypersurface => "[S]",
                MotivicBasis::MilnorFiber => "[M_h]",
            };
            let mag = if c.magnitude().is_one() && !sym.is_empty() {
                String::new()
            } else {
                c.magnitude().to_string()
            };
            let sign = if c.sign() == num_bigint::Sign::Minus { "-" } else { "+" };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{mag}{sym}")?,
                1 => write!(f, "{mag}L{sym}")?,
                _ => write!(f, "{mag}L^{e}{sym}")?,
            }
        }
        Ok(())
    }
}

/// `[X_m] = sum_ρ L^{D_ρ} [base_ρ]` with `[CS°] = (L - 1)[S]`.
pub fn contact_class(n: u32, d: u32, m: u32) -> Result<MotivicClass> {
    let mut class = MotivicClass::default();
    for piece in graded_pieces(n, d, m)? {
        match piece.base_kind {
            BaseKind::Cone => class.add_cone(piece.fiber_dim),
            BaseKind::MilnorFiber => {
                class.add_term(piece.fiber_dim, MotivicBasis::MilnorFiber, 1)
            }
        }
    }
    Ok(class)
}
