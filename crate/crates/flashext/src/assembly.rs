//! Splitting-level bookkeeping: Adams covers, the cooperations and operations
//! decompositions, smash products of Brown–Gitler modules and the `E1`-page of the
//! `ku_R`-based Adams spectral sequence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::emod::{
    bg_homology_module, lightning_flash, module_invariants, split_free_summands, tensor, BgKind, EModule,
    PoincareSeries, Variant,
};
use crate::error::{Error, Result};
use crate::ext_equivariant::{
    closed_form_equivariant, closed_form_k0, flash_extension, flash_generator_degree, Kind, TriChart,
};
use crate::grading::{Degree, ExtDegree, Window};
use crate::margolis::{convolve, margolis_homology};

/// `ν₂(k!) = k − popcount(k)`.
pub fn nu2_factorial(k: u64) -> u64 {
    k - u64::from(k.count_ones())
}

/// Degree shift of the free `E(1)`-module from its top generator to its bottom class.
pub const FREE_SPAN: Degree = Degree::new(4, 1);

/// The integral Brown–Gitler module on monomials of equivariant weight at most `cutoff`
/// (underlying weight at most `2·cutoff`).
pub fn integral_bg(cutoff: u64) -> EModule {
    bg_homology_module(BgKind::Integral, cutoff, Variant::Equivariant)
}

/// A module split as `L(index) ⊕ free`, with the bottom classes of the free summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlashSplit {
    pub index: usize,
    pub free_bottoms: Vec<Degree>,
}

/// Splits off the free summands and identifies the reduced part with a lightning flash:
/// equal series, equal `Q0`, `Q1`, `Q0Q1` ranks, and one-dimensional Margolis homologies.
pub fn flash_split(m: &EModule) -> Result<FlashSplit> {
    let s = split_free_summands(m)?;
    let r = s.reduced.rank();
    if r % 2 == 0 {
        return Err(Error::InvalidModule(format!("reduced part has even rank {r}")));
    }
    let index = (r - 1) / 2;
    let flash = lightning_flash(index, m.variant);
    if module_invariants(&s.reduced) != module_invariants(&flash) {
        return Err(Error::InvalidModule(format!("reduced part is not L({index})")));
    }
    for i in 0..2 {
        if margolis_homology(&s.reduced, i).total() != 1 {
            return Err(Error::InvalidModule(format!("Q{i} Margolis homology is not one-dimensional")));
        }
    }
    let mut free_bottoms = Vec::new();
    for (d, &n) in &s.free_part {
        free_bottoms.extend(std::iter::repeat(*d - FREE_SPAN).take(n));
    }
    Ok(FlashSplit { index, free_bottoms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummandKind {
    HzTower,
    KuTower,
    FreeM2Class,
    AdamsCover,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub kind: SummandKind,
    pub label: String,
    pub shift: Degree,
    /// Tower position `i` of `x_i`, or the cover index.
    pub index: usize,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionEdge {
    pub op: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandDecomposition {
    pub summands: Vec<Summand>,
    pub extensions: Vec<ExtensionEdge>,
}

fn ext_at(d: Degree) -> ExtDegree {
    d.at_filtration(0)
}

impl SummandDecomposition {
    pub fn count(&self, kind: SummandKind) -> usize {
        self.summands.iter().filter(|s| s.kind == kind).count()
    }

    pub fn cover_index(&self) -> Option<usize> {
        self.summands.iter().find(|s| s.kind == SummandKind::AdamsCover).map(|s| s.index)
    }

    pub fn free_classes(&self) -> Vec<Degree> {
        self.summands
            .iter()
            .filter(|s| s.kind == SummandKind::FreeM2Class)
            .map(|s| s.shift)
            .collect()
    }

    /// The `E2`-chart of the decomposition, suspended by `shift`: towers as
    /// `Ext_{E(0)}` and `Ext_{E(1)}` blocks joined by `v1 x_i = v0 x_{i+1}`, covers as
    /// `Ext(M2, L(n))`, free classes as copies of `M2`.
    pub fn chart(&self, shift: Degree, window: &Window) -> TriChart {
        let mut c = TriChart::new(*window);
        let mut towers = Vec::new();
        for s in &self.summands {
            let at = ext_at(shift + s.shift);
            match s.kind {
                SummandKind::HzTower => {
                    c.add_block(&s.label, Kind::E0, at);
                    towers.push(s.label.clone());
                }
                SummandKind::KuTower => {
                    c.add_block(&s.label, Kind::Full, at);
                    towers.push(s.label.clone());
                }
                SummandKind::FreeM2Class => {
                    c.add_block(&s.label, Kind::M2, at);
                }
                SummandKind::AdamsCover => {
                    let inner = window.translate(ExtDegree::new(-at.stem, 0, -at.weight));
                    let mut cover = closed_form_k0(s.index, &inner).shifted(at, window);
                    cover = cover.filter_map(*window, |cl| {
                        Some((format!("{} {}", s.label, cl.name), format!("{} {}", s.label, cl.gen), cl.coef, cl.degree))
                    });
                    c.merge(&cover);
                }
            }
        }
        for w in towers.windows(2) {
            flash_extension(&mut c, &w[0], &w[1]);
        }
        c
    }
}

fn free_summands(out: &mut SummandDecomposition, bottoms: &[Degree], provenance: &str) {
    for (j, d) in bottoms.iter().enumerate() {
        out.summands.push(Summand {
            kind: SummandKind::FreeM2Class,
            label: format!("f{j}"),
            shift: *d,
            index: j,
            provenance: provenance.to_string(),
        });
    }
}

/// `ku_R★ B₀` for the cooperations indexing: the Brown–Gitler module of equivariant
/// weight `≤ 2k` splits as `L(ν₂((2k)!)) ⊕ free`, giving `HZ`-towers on `x_0..x_{n−1}`,
/// a `ku`-tower on `x_n` with `v1 x_{i−1} = ρ x_i`, and free classes.
pub fn cooperations(k: u64) -> Result<SummandDecomposition> {
    let split = flash_split(&integral_bg(2 * k))?;
    let n = split.index;
    if n as u64 != nu2_factorial(2 * k) {
        return Err(Error::InvalidModule(format!("tower count {n} differs from nu2((2k)!)")));
    }
    Ok(cooperations_from_split(&split, "cooperations splitting"))
}

fn cooperations_from_split(split: &FlashSplit, provenance: &str) -> SummandDecomposition {
    let n = split.index;
    let mut out = SummandDecomposition::default();
    for i in 0..=n {
        out.summands.push(Summand {
            kind: if i < n { SummandKind::HzTower } else { SummandKind::KuTower },
            label: format!("x{i}"),
            shift: Degree::rho_times(i as i32),
            index: i,
            provenance: provenance.to_string(),
        });
        if i > 0 {
            out.extensions.push(ExtensionEdge {
                op: "v1 = rho".into(),
                from: i - 1,
                to: i,
            });
        }
    }
    free_summands(&mut out, &split.free_bottoms, provenance);
    out
}

/// `ku_R ∧ B₀(k) ≃ ku_R^{⟨ν₂(k!)⟩} ∨ V_k` with `B₀(k)` of equivariant weight `≤ k`.
pub fn adams_cover_summary(k: u64) -> Result<SummandDecomposition> {
    let split = flash_split(&integral_bg(k))?;
    if split.index as u64 != nu2_factorial(k) {
        return Err(Error::InvalidModule(format!("cover index {} differs from nu2(k!)", split.index)));
    }
    Ok(cover_from_split(&split, "adams cover splitting"))
}

fn cover_from_split(split: &FlashSplit, provenance: &str) -> SummandDecomposition {
    let mut out = SummandDecomposition::default();
    out.summands.push(Summand {
        kind: SummandKind::AdamsCover,
        label: format!("cover{}", split.index),
        shift: Degree::ZERO,
        index: split.index,
        provenance: provenance.to_string(),
    });
    free_summands(&mut out, &split.free_bottoms, provenance);
    out
}

/// Poincaré series of the free rank-one `E(1)`-module, indexed from its bottom class.
pub fn free_series() -> PoincareSeries {
    [Degree::ZERO, Degree::new(1, 0), Degree::new(3, 1), FREE_SPAN]
        .into_iter()
        .map(|d| (d, 1))
        .collect()
}

/// Exact division of `num` by `den`, whose lowest term must be 1 at degree zero.
pub fn divide_series(num: &PoincareSeries, den: &PoincareSeries) -> Result<PoincareSeries> {
    if den.iter().next() != Some((&Degree::ZERO, &1)) {
        return Err(Error::InvalidModule("divisor must start with 1".into()));
    }
    let mut rem: BTreeMap<Degree, i64> = num.iter().map(|(d, &c)| (*d, c as i64)).collect();
    let mut q = PoincareSeries::new();
    while let Some((&d, &c)) = rem.iter().find(|(_, &c)| c != 0) {
        if c < 0 {
            return Err(Error::InvalidModule(format!("negative remainder at {d}")));
        }
        q.insert(d, c as usize);
        for (e, &m) in den {
            *rem.entry(d + *e).or_default() -= c * m as i64;
        }
        rem.retain(|_, c| *c != 0);
    }
    Ok(q)
}

/// Lightning index `|I|` and free part of `H_★(B₀(i_1) ∧ ⋯ ∧ B₀(i_n))`, by series
/// subtraction and division. Free classes are reported at their bottom degrees, kept
/// when their stem lies in the window.
pub fn smash_summand(index: &[u64], window: &Window) -> Result<(usize, PoincareSeries)> {
    let (weight, mut free) = smash_parts(index)?;
    free.retain(|d, _| d.stem >= window.stem_min && d.stem <= window.stem_max);
    Ok((weight, free))
}

fn smash_parts(index: &[u64]) -> Result<(usize, PoincareSeries)> {
    if index.is_empty() || index.contains(&0) {
        return Err(Error::OutOfDomain("multi-index entries must be positive".into()));
    }
    let weight: u64 = index.iter().map(|&i| nu2_factorial(i)).sum();
    let mut series = PoincareSeries::from([(Degree::ZERO, 1)]);
    for &i in index {
        series = convolve(&series, &integral_bg(i).poincare_series());
    }
    let mut diff = series;
    for (d, c) in lightning_flash(weight as usize, Variant::Equivariant).poincare_series() {
        let e = diff.entry(d).or_default();
        *e = e
            .checked_sub(c)
            .ok_or_else(|| Error::InvalidModule(format!("series subtraction negative at {d}")))?;
    }
    diff.retain(|_, c| *c > 0);
    Ok((weight as usize, divide_series(&diff, &free_series())?))
}

/// The smash product module `H_★(B₀(i_1)) ⊗ ⋯ ⊗ H_★(B₀(i_n))`.
pub fn smash_module(index: &[u64]) -> Result<EModule> {
    let mut m = lightning_flash(0, Variant::Equivariant);
    for &i in index {
        m = tensor(&m, &integral_bg(i))?;
    }
    Ok(m)
}

/// One row of the `E1`-page: the summand `ku_R ∧ Σ^{ρ(i_1+⋯+i_n)} B₀(i_1) ∧ ⋯ ∧ B₀(i_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Row {
    pub n: usize,
    #[serde(rename = "I")]
    pub index: Vec<u64>,
    #[serde(rename = "|I|")]
    pub weight: usize,
    pub shift: Degree,
    pub chart_id: String,
    pub free_classes: Vec<Degree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E1Page {
    pub window: Window,
    pub rows: Vec<E1Row>,
}

/// Compositions of `total` into `n` positive parts, in lexicographic order.
pub fn compositions(total: u64, n: usize) -> Vec<Vec<u64>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every multi-index with `n ≤ n_max` whose `ρ`-shift has stem at most `window.stem_max`.
pub fn e1_page(n_max: usize, window: &Window) -> Result<E1Page> {
    let mut rows = Vec::new();
    let total_max = (window.stem_max.max(0) / 2) as u64;
    for n in 1..=n_max {
        for total in n as u64..=total_max {
            for index in compositions(total, n) {
                let (weight, free) = smash_parts(&index)?;
                let shift = Degree::rho_times(total as i32);
                let mut free_classes = Vec::new();
                for (d, c) in free {
                    free_classes.extend(std::iter::repeat(shift + d).take(c));
                }
                rows.push(E1Row {
                    n,
                    chart_id: format!("ext(M2,L({weight}))"),
                    index,
                    weight,
                    shift,
                    free_classes,
                });
            }
        }
    }
    Ok(E1Page { window: *window, rows })
}

impl E1Page {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("page serializes")
    }

    /// Per-degree totals with each row read as `Σ^{shift} ku_R^{⟨|I|⟩} ∨ V_I`.
    pub fn totals_by_covers(&self) -> BTreeMap<ExtDegree, usize> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            let split = FlashSplit {
                index: r.weight,
                free_bottoms: r.free_classes.iter().map(|d| *d - r.shift).collect(),
            };
            add_dims(&mut out, &cover_from_split(&split, "adams cover splitting").chart(r.shift, &self.window));
        }
        out
    }

    /// Per-degree totals with each row regrouped as `HZ`-towers, a `ku`-tower and free
    /// classes, where the free classes come from splitting the smash product module
    /// itself rather than from series arithmetic.
    pub fn totals_by_cooperations(&self) -> Result<BTreeMap<ExtDegree, usize>> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            let split = flash_split(&smash_module(&r.index)?)?;
            if split.index != r.weight {
                return Err(Error::InvalidModule(format!("lightning index of {:?} is {}", r.index, split.index)));
            }
            add_dims(&mut out, &cooperations_from_split(&split, "cooperations splitting").chart(r.shift, &self.window));
        }
        Ok(out)
    }

    /// Total dimension per stem, as TSV.
    pub fn stem_summary_tsv(&self) -> String {
        let mut by_stem: BTreeMap<i32, usize> = BTreeMap::new();
        for (d, n) in self.totals_by_covers() {
            *by_stem.entry(d.stem).or_default() += n;
        }
        let mut s = String::from("stem\tdim\n");
        for (stem, n) in by_stem {
            s.push_str(&format!("{stem}\t{n}\n"));
        }
        s
    }
}

fn add_dims(out: &mut BTreeMap<ExtDegree, usize>, c: &TriChart) {
    for (d, n) in c.dims() {
        *out.entry(d).or_default() += n;
    }
}

/// The summand `[Σ^{ρk} B₀(k), ku_R]`: `Ext(L(ν₂(k!)), M2)` plus the classes dual to the
/// free summands of `H_★B₀(k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperationsSummand {
    pub k: u64,
    pub index: usize,
    pub shift: Degree,
    pub chart: TriChart,
    pub free_classes: Vec<Degree>,
}

pub fn operations_algebra(k: u64, window: &Window) -> Result<OperationsSummand> {
    let split = flash_split(&integral_bg(k))?;
    let mut chart = closed_form_equivariant(split.index, 0, window);
    let free_classes: Vec<Degree> = split.free_bottoms.iter().map(|d| -*d).collect();
    for (j, d) in free_classes.iter().enumerate() {
        chart.add_block(&format!("f{j}"), Kind::M2, ext_at(*d));
    }
    Ok(OperationsSummand {
        k,
        index: split.index,
        shift: Degree::rho_times(k as i32),
        chart,
        free_classes,
    })
}

/// Position of the tower generator `x_i` in a cooperations chart.
pub fn tower_degree(i: usize) -> ExtDegree {
    flash_generator_degree(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu2_values() {
        assert_eq!(nu2_factorial(0), 0);
        assert_eq!(nu2_factorial(4), 3);
        assert_eq!(nu2_factorial(6), 4);
    }

    #[test]
    fn nu2_matches_legendre() {
        for k in 0..200u64 {
            let mut s = 0;
            let mut p = 2;
            while p <= k {
                s += k / p;
                p *= 2;
            }
            assert_eq!(nu2_factorial(k), s);
        }
    }

    #[test]
    fn cooperations_small() {
        let c0 = cooperations(0).unwrap();
        assert_eq!(c0.count(SummandKind::HzTower), 0);
        assert_eq!(c0.count(SummandKind::KuTower), 1);
        let c1 = cooperations(1).unwrap();
        assert_eq!(c1.count(SummandKind::HzTower), 1);
        assert_eq!(c1.extensions, vec![ExtensionEdge { op: "v1 = rho".into(), from: 0, to: 1 }]);
        assert_eq!(cooperations(2).unwrap().count(SummandKind::HzTower), 3);
    }

    #[test]
    fn cover_indices() {
        assert_eq!(adams_cover_summary(1).unwrap().cover_index(), Some(0));
        assert_eq!(adams_cover_summary(4).unwrap().cover_index(), Some(3));
        assert_eq!(adams_cover_summary(8).unwrap().cover_index(), Some(7));
    }

    #[test]
    fn division_round_trip() {
        let q: PoincareSeries = [(Degree::new(2, 1), 2), (Degree::new(7, 3), 1)].into_iter().collect();
        let num = convolve(&q, &free_series());
        assert_eq!(divide_series(&num, &free_series()).unwrap(), q);
        let mut bad = num.clone();
        *bad.get_mut(&Degree::new(2, 1)).unwrap() -= 1;
        assert!(divide_series(&bad, &free_series()).is_err());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(5, 3).len(), 6);
        assert!(compositions(2, 3).is_empty());
    }
}
