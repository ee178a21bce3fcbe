//! `E_1` pages of the McLean spectral sequence (converging to Floer
//! cohomology of the monodromy iterate `φ^m`) and of the order-filtration
//! spectral sequence (converging to `H^•_c(X_m)`), the two degeneration
//! conditions, and the `(n, d)` classification they induce.
//!
//! Columns of both pages are indexed by `i ∈ [-floor(m/d), -1]`; the McLean
//! column of `E_i` is really `m b_i / N_i` for a suitable ample divisor, but
//! only the ordering of those numbers is canonical and both sequences
//! degenerate at `E_1`, so the index itself is used.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contact::{
    check_contact_params, contact_cohomology, contact_euler, contact_euler_closed_form,
    graded_pieces, piece_compact_cohomology,
};
use crate::error::{Error, Result};
use crate::group::{FgAbGroup, GradedGroup};
use crate::topology::cover_homology;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageKind {
    Mclean,
    Order,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub column: i64,
    pub degree: i64,
    pub group: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PageRecord", into = "PageRecord")]
pub struct SpectralPage {
    pub kind: PageKind,
    pub n: u32,
    pub d: u32,
    pub m: u32,
    /// `(column, total degree) -> E_1` entry; zero entries are not stored.
    entries: BTreeMap<(i64, i64), FgAbGroup>,
}

#[derive(Serialize, Deserialize)]
struct PageRecord {
    kind: PageKind,
    n: u32,
    d: u32,
    m: u32,
    entries: Vec<PageEntry>,
}

impl TryFrom<PageRecord> for SpectralPage {
    type Error = String;

    fn try_from(rec: PageRecord) -> std::result::Result<Self, String> {
        let mut page = SpectralPage::empty(rec.kind, rec.n, rec.d, rec.m);
        for e in rec.entries {
            if page.entries.contains_key(&(e.column, e.degree)) {
                return Err(format!("duplicate entry ({}, {})", e.column, e.degree));
            }
            page.insert(e.column, e.degree, e.group);
        }
        Ok(page)
    }
}

impl From<SpectralPage> for PageRecord {
    fn from(p: SpectralPage) -> Self {
        PageRecord {
            kind: p.kind,
            n: p.n,
            d: p.d,
            m: p.m,
            entries: p
                .entries
                .into_iter()
                .map(|((column, degree), group)| PageEntry { column, degree, group })
                .collect(),
        }
    }
}

impl SpectralPage {
    fn empty(kind: PageKind, n: u32, d: u32, m: u32) -> Self {
        SpectralPage {
            kind,
            n,
            d,
            m,
            entries: BTreeMap::new(),
        }
    }

    fn insert(&mut self, column: i64, degree: i64, group: FgAbGroup) {
        if !group.is_zero() {
            let sum = self.get(column, degree).direct_sum(&group);
            self.entries.insert((column, degree), sum);
        }
    }

    pub fn get(&self, column: i64, degree: i64) -> FgAbGroup {
        self.entries
            .get(&(column, degree))
            .cloned()
            .unwrap_or_else(FgAbGroup::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, &FgAbGroup)> {
        self.entries.iter().map(|((c, s), g)| (*c, *s, g))
    }

    pub fn columns(&self) -> Vec<i64> {
        let mut cols: Vec<_> = self.entries.keys().map(|(c, _)| *c).collect();
        cols.dedup();
        cols
    }

    /// One column as a graded group in total degree.
    pub fn column(&self, column: i64) -> GradedGroup {
        self.entries()
            .filter(|(c, _, _)| *c == column)
            .map(|(_, s, g)| (s, g.clone()))
            .collect()
    }
}

/// `2m(nu_i / N_i - 1) = 2i(d - n)`: the homological offset of column `i`.
fn mclean_offset(n: u32, d: u32, index: i64) -> i64 {
    2 * index * (d as i64 - n as i64)
}

/// Entry `(i, s)` is `H_{n-1-s-2i(d-n)}` of the Denef-Loeser cover over the
/// exceptional m-divisor `E_i` (grading with the `2m` correction).
pub fn mclean_e1(n: u32, d: u32, m: u32) -> Result<SpectralPage> {
    check_contact_params(n, d, m)?;
    let mut page = SpectralPage::empty(PageKind::Mclean, n, d, m);
    for index in -((m / d) as i64)..=-1 {
        let offset = mclean_offset(n, d, index);
        for (k, g) in cover_homology(n, d, index, m)?.iter() {
            page.insert(index, n as i64 - 1 - k - offset, g.clone());
        }
    }
    Ok(page)
}

/// Column `-ρ` holds `H^•_c` of the order-`ρ` stratum of `X_m`.
pub fn order_e1(n: u32, d: u32, m: u32) -> Result<SpectralPage> {
    check_contact_params(n, d, m)?;
    let mut page = SpectralPage::empty(PageKind::Order, n, d, m);
    for piece in graded_pieces(n, d, m)? {
        for (t, g) in piece_compact_cohomology(&piece, n, d)?.iter() {
            page.insert(piece.column(), t, g.clone());
        }
    }
    Ok(page)
}

/// Total-degree shift `(n-1)(2m+1)` between the McLean page and the order
/// page (and between Floer cohomology and `H^•_c(X_m)`).
pub fn arc_floer_shift(n: u32, m: u32) -> i64 {
    (n as i64 - 1) * (2 * m as i64 + 1)
}

/// Whether the two pages agree entry by entry once McLean's total degree is
/// shifted up by `(n-1)(2m+1)`.
pub fn compare_pages(n: u32, d: u32, m: u32) -> Result<bool> {
    let mclean = mclean_e1(n, d, m)?;
    let order = order_e1(n, d, m)?;
    let shift = arc_floer_shift(n, m);
    let forward = mclean
        .entries()
        .all(|(i, s, g)| &order.get(i, s + shift) == g);
    let backward = order
        .entries()
        .all(|(i, t, g)| &mclean.get(i, t - shift) == g);
    Ok(forward && backward)
}

/// `2 D_ρ = 2m(n-1) - 2i(d-n)` for every column `i = -ρ`.
pub fn duality_shift_identity(n: u32, d: u32, m: u32) -> Result<bool> {
    Ok(graded_pieces(n, d, m)?.iter().all(|p| {
        let i = p.column();
        2 * p.fiber_dim as i64 == 2 * m as i64 * (n as i64 - 1) - mclean_offset(n, d, i)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub holds: bool,
    pub violating_k: Vec<u64>,
}

impl ConditionReport {
    fn from_witnesses(violating_k: Vec<u64>) -> Self {
        ConditionReport {
            holds: violating_k.is_empty(),
            violating_k,
        }
    }
}

/// Whether `2k(d-n) + 1 ∈ {±1, ±(n-1), ±(n-2), ±(2n-3)}`.
pub fn degeneration_violated_at(n: u32, d: u32, k: u64) -> bool {
    let n = n as i64;
    let v = (2 * k as i64 * (d as i64 - n) + 1).abs();
    [1, n - 1, n - 2, 2 * n - 3].contains(&v)
}

/// Whether `2k(d-n) ∈ {0, ±(n-2), ±(n-1)}`.
pub fn filtration_violated_at(n: u32, d: u32, k: u64) -> bool {
    let n = n as i64;
    let v = (2 * k as i64 * (d as i64 - n)).abs();
    [0, n - 2, n - 1].contains(&v)
}

/// Integers `k` with `1 <= k < m/d`.
fn k_range(d: u32, m: u32) -> impl Iterator<Item = u64> {
    (1..).take_while(move |k: &u64| k * (d as u64) < m as u64)
}

fn check_condition_params(n: u32, d: u32) -> Result<()> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidParameter("conditions need n ≥ 2 and d ≥ 1".into()));
    }
    Ok(())
}

pub fn condition_degeneration(n: u32, d: u32, m: u32) -> Result<ConditionReport> {
    check_condition_params(n, d)?;
    Ok(ConditionReport::from_witnesses(
        k_range(d, m).filter(|&k| degeneration_violated_at(n, d, k)).collect(),
    ))
}

pub fn condition_filtration(n: u32, d: u32, m: u32) -> Result<ConditionReport> {
    check_condition_params(n, d)?;
    Ok(ConditionReport::from_witnesses(
        k_range(d, m).filter(|&k| filtration_violated_at(n, d, k)).collect(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloerReport {
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub degeneration: ConditionReport,
    pub filtration: ConditionReport,
    pub shift: i64,
    /// `HF^•(φ^m, +)`, present only when both conditions hold.
    pub cohomology: Option<GradedGroup>,
}

pub fn floer_report(n: u32, d: u32, m: u32) -> Result<FloerReport> {
    check_contact_params(n, d, m)?;
    let degeneration = condition_degeneration(n, d, m)?;
    let filtration = condition_filtration(n, d, m)?;
    let shift = arc_floer_shift(n, m);
    let cohomology = if degeneration.holds && filtration.holds {
        Some(contact_cohomology(n, d, m)?.shift(-shift))
    } else {
        None
    };
    Ok(FloerReport {
        n,
        d,
        m,
        degeneration,
        filtration,
        shift,
        cohomology,
    })
}

/// `HF^•(φ^m, +) = H^{• + (n-1)(2m+1)}_c(X_m)` when both conditions hold;
/// `None` means the value is not determined here.
pub fn floer_cohomology(n: u32, d: u32, m: u32) -> Result<Option<GradedGroup>> {
    Ok(floer_report(n, d, m)?.cohomology)
}

/// `Λ(φ^m) = χ_c(X_m)`, cross-checked against its closed form.
pub fn lefschetz_number(n: u32, d: u32, m: u32) -> Result<BigInt> {
    let chi = contact_euler(n, d, m)?;
    let closed = contact_euler_closed_form(n, d, m);
    if chi != closed {
        return Err(Error::Internal(format!(
            "Euler characteristic {chi} disagrees with closed form {closed}"
        )));
    }
    Ok(chi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairColor {
    /// Both conditions hold for every `m`.
    Blue,
    /// Only the filtration condition fails for some `m`.
    Orange,
    /// Only the degeneration condition fails for some `m`.
    Yellow,
    /// Both fail, possibly for different `m`.
    Pink,
}

impl PairColor {
    pub fn name(self) -> &'static str {
        match self {
            PairColor::Blue => "blue",
            PairColor::Orange => "orange",
            PairColor::Yellow => "yellow",
            PairColor::Pink => "pink",
        }
    }

    pub fn hex(self) -> &'static str {
        match self {
            PairColor::Blue => "#1f77b4",
            PairColor::Orange => "#ff7f0e",
            PairColor::Yellow => "#f2d600",
            PairColor::Pink => "#e377c2",
        }
    }
}

/// Smallest violating `k` and the first `m` at which it enters the scan
/// range (`k < m/d` first holds at `m = kd + 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub k: u64,
    pub m: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    pub color: PairColor,
    pub degeneration_witness: Option<Witness>,
    pub filtration_witness: Option<Witness>,
}

/// Beyond this `k` neither condition can fail: a violation needs
/// `2k|d-n| <= 2n-2`. For `d = n` both fail at `k = 1`.
pub fn k_scan_bound(n: u32, d: u32) -> u64 {
    let gap = (d as i64 - n as i64).unsigned_abs();
    if gap == 0 {
        1
    } else {
        ((n as u64 - 1) / gap).max(1)
    }
}

pub fn classify_pair_with_bound(n: u32, d: u32, bound: u64) -> PairClass {
    let first = |violated: fn(u32, u32, u64) -> bool| {
        (1..=bound)
            .find(|&k| violated(n, d, k))
            .map(|k| Witness { k, m: k * d as u64 + 1 })
    };
    let degeneration_witness = first(degeneration_violated_at);
    let filtration_witness = first(filtration_violated_at);
    let color = match (degeneration_witness.is_some(), filtration_witness.is_some()) {
        (false, false) => PairColor::Blue,
        (false, true) => PairColor::Orange,
        (true, false) => PairColor::Yellow,
        (true, true) => PairColor::Pink,
    };
    PairClass {
        color,
        degeneration_witness,
        filtration_witness,
    }
}

pub fn classify_pair(n: u32, d: u32) -> Result<PairClass> {
    if n < 3 || d < 2 {
        return Err(Error::InvalidParameter("classification needs n ≥ 3 and d ≥ 2".into()));
    }
    Ok(classify_pair_with_bound(n, d, k_scan_bound(n, d)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub n: u32,
    pub d: u32,
    pub class: PairClass,
}

/// Classifies every `(n, d)` in the two inclusive ranges, `n` outer.
pub fn scatter_grid(
    n_range: std::ops::RangeInclusive<u32>,
    d_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<ScatterPoint>> {
    if *n_range.start() < 3 || *d_range.start() < 2 {
        return Err(Error::InvalidParameter("scatter needs n ≥ 3 and d ≥ 2".into()));
    }
    let pairs: Vec<(u32, u32)> = n_range
        .flat_map(|n| d_range.clone().map(move |d| (n, d)))
        .collect();
    Ok(pairs
        .into_par_iter()
        .map(|(n, d)| ScatterPoint {
            n,
            d,
            class: classify_pair_with_bound(n, d, k_scan_bound(n, d)),
        })
        .collect())
}

pub fn scatter_csv(points: &[ScatterPoint]) -> String {
    let mut out = String::from("n,d,class\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.n, p.d, p.class.color.name());
    }
    out
}

/// One filled square per pair, `n` along the horizontal axis and `d`
/// vertically (growing upwards), plus a legend.
pub fn scatter_svg(points: &[ScatterPoint]) -> String {
    const CELL: u32 = 12;
    const MARGIN: u32 = 40;
    const LEGEND: u32 = 130;
    let n_max = points.iter().map(|p| p.n).max().unwrap_or(3);
    let d_max = points.iter().map(|p| p.d).max().unwrap_or(2);
    let n_min = points.iter().map(|p| p.n).min().unwrap_or(3);
    let d_min = points.iter().map(|p| p.d).min().unwrap_or(2);
    let cols = n_max - n_min + 1;
    let rows = d_max - d_min + 1;
    let width = 2 * MARGIN + cols * CELL + LEGEND;
    let height = 2 * MARGIN + rows * CELL;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for p in points {
        let x = MARGIN + (p.n - n_min) * CELL;
        let y = MARGIN + (d_max - p.d) * CELL;
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="{y}" width="{w}" height="{w}" fill="{c}"><title>n={n} d={d} {name}</title></rect>"#,
            w = CELL - 1,
            c = p.class.color.hex(),
            n = p.n,
            d = p.d,
            name = p.class.color.name()
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12" text-anchor="middle">n</text>"#,
        x = MARGIN + cols * CELL / 2,
        y = height - 10
    );
    let _ = writeln!(
        svg,
        r#"<text x="12" y="{y}" font-family="sans-serif" font-size="12">d</text>"#,
        y = MARGIN + rows * CELL / 2
    );
    let lx = 2 * MARGIN + cols * CELL - 20;
    let labels = [
        (PairColor::Blue, "arc-Floer holds"),
        (PairColor::Orange, "filtration fails"),
        (PairColor::Yellow, "degeneration fails"),
        (PairColor::Pink, "both fail"),
    ];
    for (row, (color, label)) in labels.iter().enumerate() {
        let y = MARGIN + row as u32 * 20;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx}" y="{y}" width="{w}" height="{w}" fill="{c}"/><text x="{tx}" y="{ty}" font-family="sans-serif" font-size="11">{label}</text>"#,
            w = CELL - 1,
            c = color.hex(),
            tx = lx + CELL + 4,
            ty = y + CELL - 2
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(r: u64) -> FgAbGroup {
        FgAbGroup::free(r)
    }

    #[test]
    fn mclean_page_3_2_4() {
        let page = mclean_e1(3, 2, 4).unwrap();
        // column -2 is the (0,1) cover: H_0 = Z, H_2 = Z; offset 2i(d-n) = 4
        assert_eq!(page.column(-2), [(-2, z(1)), (-4, z(1))].into_iter().collect());
        // column -1: intermediate cover of (3,2): H_0 = Z, H_1 = Z/2, H_3 = Z; offset 2
        assert_eq!(
            page.column(-1),
            [(0, z(1)), (-1, FgAbGroup::cyclic(2u32)), (-3, z(1))].into_iter().collect()
        );
    }

    #[test]
    fn mclean_page_3_5_5() {
        let page = mclean_e1(3, 5, 5).unwrap();
        assert_eq!(page.columns(), vec![-1]);
        assert_eq!(page.column(-1), [(6, z(1)), (4, z(64))].into_iter().collect());
        assert!(mclean_e1(3, 5, 4).unwrap().is_empty());
    }

    #[test]
    fn order_page_examples() {
        let page = order_e1(3, 2, 4).unwrap();
        assert_eq!(page.column(-2), [(14, z(1)), (16, z(1))].into_iter().collect());
        assert!(order_e1(3, 5, 4).unwrap().is_empty());
        let page = order_e1(3, 4, 8).unwrap();
        assert_eq!(page.columns(), vec![-2, -1]);
        assert!(page.column(-1).iter().any(|(_, g)| !g.torsion().is_empty()));
        assert!(page.column(-2).iter().all(|(_, g)| g.is_free()));
    }

    #[test]
    fn pages_agree() {
        assert!(compare_pages(3, 2, 4).unwrap());
        assert!(compare_pages(3, 5, 5).unwrap());
    }

    #[test]
    fn mclean_columns_have_at_most_four_degrees() {
        for n in 3..=6 {
            for d in 2..=6 {
                for m in 1..=20 {
                    let page = mclean_e1(n, d, m).unwrap();
                    for c in page.columns() {
                        assert!(page.column(c).support().count() <= 4);
                    }
                }
            }
        }
    }

    #[test]
    fn condition_examples() {
        for m in 7..=20 {
            assert!(!condition_degeneration(3, 3, m).unwrap().holds);
            assert!(!condition_filtration(3, 3, m).unwrap().holds);
            assert!(!condition_filtration(4, 3, m).unwrap().holds);
        }
        for m in 1..=60 {
            assert!(condition_degeneration(3, 5, m).unwrap().holds);
        }
        for d in 1..=8 {
            for m in 1..=d {
                assert!(condition_degeneration(3, d, m).unwrap().holds);
                assert!(condition_filtration(3, d, m).unwrap().holds);
            }
        }
        assert_eq!(condition_filtration(4, 3, 7).unwrap().violating_k, vec![1]);
    }

    #[test]
    fn conditions_are_monotone_in_m() {
        for n in 3..=8 {
            for d in 1..=10 {
                for m in 1..40 {
                    let a = condition_degeneration(n, d, m).unwrap();
                    let b = condition_degeneration(n, d, m + 1).unwrap();
                    assert!(a.violating_k.iter().all(|k| b.violating_k.contains(k)));
                    let a = condition_filtration(n, d, m).unwrap();
                    let b = condition_filtration(n, d, m + 1).unwrap();
                    assert!(a.violating_k.iter().all(|k| b.violating_k.contains(k)));
                }
            }
        }
    }

    #[test]
    fn floer_examples() {
        assert_eq!(
            floer_cohomology(3, 5, 5).unwrap(),
            Some([(4, z(64)), (6, z(1))].into_iter().collect())
        );
        assert_eq!(floer_cohomology(3, 3, 9).unwrap(), None);
        assert_eq!(floer_cohomology(3, 5, 4).unwrap(), Some(GradedGroup::new()));
    }

    #[test]
    fn lefschetz_examples() {
        assert_eq!(lefschetz_number(3, 2, 4).unwrap(), 2.into());
        assert_eq!(lefschetz_number(3, 2, 3).unwrap(), 0.into());
        assert_eq!(lefschetz_number(4, 3, 6).unwrap(), (-15).into());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_pair(3, 5).unwrap().color, PairColor::Blue);
        assert_eq!(classify_pair(10, 4).unwrap().color, PairColor::Blue);
        let c = classify_pair(3, 3).unwrap();
        assert_eq!(c.color, PairColor::Pink);
        assert_eq!(c.degeneration_witness, Some(Witness { k: 1, m: 4 }));
        assert!(classify_pair(2, 3).is_err());
    }

    #[test]
    fn degeneration_can_fail_at_k_equal_n_minus_1() {
        // d = n - 1, k = n - 1: 2k(d-n)+1 = -(2n-3)
        for n in 4..=20u32 {
            assert!(degeneration_violated_at(n, n - 1, (n - 1) as u64));
            assert!(k_scan_bound(n, n - 1) >= (n - 1) as u64);
        }
    }

    #[test]
    fn scatter_outputs() {
        let pts = scatter_grid(3..=5, 2..=4).unwrap();
        assert_eq!(pts.len(), 9);
        let csv = scatter_csv(&pts);
        assert!(csv.starts_with("n,d,class\n3,2,"));
        assert_eq!(csv.lines().count(), 10);
        let svg = scatter_svg(&pts);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<title>").count(), 9);
        assert!(scatter_grid(2..=5, 2..=4).is_err());
    }

    #[test]
    fn page_serde_round_trip() {
        let page = mclean_e1(3, 4, 8).unwrap();
        let s = serde_json::to_string(&page).unwrap();
        assert_eq!(serde_json::from_str::<SpectralPage>(&s).unwrap(), page);
    }
}
