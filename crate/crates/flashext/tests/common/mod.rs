#![allow(dead_code)]

use std::collections::BTreeMap;

use flashext::charts::{self, RenderSpec};
use flashext::emod::{self, tensor, BgKind, EModule, Variant};
use flashext::ext_classical::closed_form_classical;
use flashext::ext_equivariant::{
    closed_form_equivariant, closed_form_k_gt_m_read, ext_m2_m2, TriChart, TriangleReading,
};
use flashext::margolis::{convolve, margolis_homology};
use flashext::steenrod::{self, q_action, unit_weight_defect, QuotientBasisSpec, SteenrodMonomial};
use flashext::{Degree, Window};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 256;

pub fn monomial() -> impl Strategy<Value = (QuotientBasisSpec, SteenrodMonomial)> {
    (
        -1i32..=1,
        prop::collection::vec(0u32..4, 0..4),
        prop::collection::vec(any::<bool>(), 0..5),
    )
        .prop_map(|(h, xi, mut tau)| {
            let spec = QuotientBasisSpec::new(h);
            for t in tau.iter_mut().take(spec.tau_floor()) {
                *t = false;
            }
            (spec, SteenrodMonomial::new(xi, tau))
        })
}

fn key(m: &SteenrodMonomial) -> (Vec<u32>, Vec<bool>) {
    (m.xi_exps.clone(), m.tau_flags.clone())
}

/// `x Q_{ops[0]} Q_{ops[1]} ⋯` as a sum of monomials.
pub fn apply(spec: QuotientBasisSpec, m: &SteenrodMonomial, ops: &[u8]) -> BTreeMap<(Vec<u32>, Vec<bool>), SteenrodMonomial> {
    let mut cur: BTreeMap<_, _> = [(key(m), m.clone())].into_iter().collect();
    for &i in ops {
        let mut next = BTreeMap::new();
        for x in cur.values() {
            for y in q_action(spec, x, i) {
                if next.remove(&key(&y)).is_none() {
                    next.insert(key(&y), y);
                }
            }
        }
        cur = next;
    }
    cur
}

pub fn q_squares_vanish(spec: QuotientBasisSpec, m: &SteenrodMonomial) -> Result<(), TestCaseError> {
    for i in 0..2 {
        prop_assert!(apply(spec, m, &[i, i]).is_empty(), "Q{}^2 nonzero on {}", i, m);
    }
    Ok(())
}

pub fn q_commute(spec: QuotientBasisSpec, m: &SteenrodMonomial) -> Result<(), TestCaseError> {
    let a: Vec<_> = apply(spec, m, &[0, 1]).into_keys().collect();
    let b: Vec<_> = apply(spec, m, &[1, 0]).into_keys().collect();
    prop_assert_eq!(a, b, "Q0Q1 != Q1Q0 on {}", m);
    Ok(())
}

/// Every term of `m Q_i` comes from one `τ̄_k` factor and has weight
/// `wt(m) − unit_weight_defect(k, i)`.
pub fn q_weight(spec: QuotientBasisSpec, m: &SteenrodMonomial) -> Result<(), TestCaseError> {
    for i in 0..2u8 {
        let expected: Vec<u64> = (0..m.tau_flags.len())
            .filter(|&k| m.has_tau(k))
            .map(|k| steenrod::weight(m) - unit_weight_defect(k, i))
            .collect();
        for t in q_action(spec, m, i) {
            let w = steenrod::weight(&t);
            prop_assert!(expected.contains(&w), "weight {} of {} in {} Q{}", w, t, m, i);
            prop_assert!(spec.admits(&t));
        }
    }
    Ok(())
}

pub fn small_module() -> impl Strategy<Value = EModule> {
    let variant = prop_oneof![Just(Variant::Classical), Just(Variant::Equivariant)];
    (variant, 0u8..4, 0usize..4, -4i32..4, -2i32..3).prop_map(|(v, kind, k, s, w)| {
        let m = match kind {
            0 => emod::lightning_flash(k, v),
            1 => emod::free_module(1, v, Degree::new(4, 1)),
            2 => emod::bg_homology_module(BgKind::Integral, k as u64 + 1, v),
            _ => emod::direct_sum(&emod::lightning_flash(k, v), &emod::free_module(1, v, Degree::new(6, 2))).unwrap(),
        };
        emod::suspend(&m, Degree::new(s, w))
    })
}

pub fn kunneth(a: &EModule, b: &EModule) -> Result<(), TestCaseError> {
    let b = if b.variant == a.variant {
        b.clone()
    } else {
        emod::lightning_flash(1, a.variant)
    };
    let t = tensor(a, &b).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for i in 0..2 {
        let expect = convolve(&margolis_homology(a, i).dims, &margolis_homology(&b, i).dims);
        prop_assert_eq!(margolis_homology(&t, i).dims, expect, "Q{}", i);
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum ChartCase {
    Closed(usize, usize),
    Forced(usize, usize),
    M2(usize),
    Classical(usize, usize),
}

pub fn chart_case() -> impl Strategy<Value = (ChartCase, Window)> {
    let case = prop_oneof![
        (0usize..4, 0usize..4).prop_map(|(k, m)| ChartCase::Closed(k, m)),
        (1usize..4, 0usize..3).prop_map(|(k, m)| ChartCase::Forced(k.max(m + 1), m)),
        (0usize..2).prop_map(ChartCase::M2),
        (0usize..4, 0usize..4).prop_map(|(k, m)| ChartCase::Classical(k, m)),
    ];
    (case, -10i32..0, 0i32..8, 0i32..6, -10i32..0, 0i32..10)
        .prop_map(|(c, smin, sspan, f, wmin, wspan)| (c, Window::new(smin, smin + sspan, f, wmin, wmin + wspan)))
}

fn tri(case: &ChartCase, w: &Window) -> Option<TriChart> {
    match *case {
        ChartCase::Closed(k, m) => Some(closed_form_equivariant(k, m, w)),
        ChartCase::Forced(k, m) => Some(closed_form_k_gt_m_read(k, m, w, TriangleReading::DegreeForced)),
        ChartCase::M2(h) => Some(ext_m2_m2(h, w).unwrap()),
        ChartCase::Classical(..) => None,
    }
}

/// Every emitted edge joins classes whose degrees differ by the operator degree, and the
/// emitted TSV and SVG read back to the same chart.
pub fn action_degrees(case: &ChartCase, w: &Window) -> Result<(), TestCaseError> {
    if let Some(c) = tri(case, w) {
        c.check_action_degrees().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = charts::parse_tsv(&charts::emit_tsv(&c)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        back.check_action_degrees().map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&back, &charts::canonical(&c));
        let svg = charts::check_svg(&charts::emit_svg(&c, &RenderSpec::new(*w)))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(svg.dots.values().sum::<usize>(), c.len());
    }
    if let ChartCase::Classical(k, m) = *case {
        let c = closed_form_classical(k, m, w.stem_min, w.stem_max, w.filtration_max);
        for (i, table) in [&c.v0, &c.v1].into_iter().enumerate() {
            for (&(s, f), mat) in table {
                let t = if i == 0 { (s, f + 1) } else { (s + 2, f + 1) };
                prop_assert_eq!(mat.cols(), c.dim(s, f));
                prop_assert_eq!(mat.rows(), c.dim(t.0, t.1));
            }
        }
        let back = charts::parse_bigraded_tsv(&charts::emit_bigraded_tsv(&c)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(charts::emit_bigraded_tsv(&back), charts::emit_bigraded_tsv(&c));
    }
    Ok(())
}
