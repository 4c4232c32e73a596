//! Inductive computation of `Ext_{E(1)}(L(k), L(m))` from the short exact sequence
//! `0 → Σ^ρ L(k−1) → L(k) → E(1)//E(0)_★ → 0`.
//!
//! Each step builds a two-term complex whose source is `Σ^{−ρ}Ext(L(k−1), L(m))` and
//! whose target is `Σ^{−ρ−1}Ext_{E(0)}(M2, L(m))`, installs the differential on a
//! handful of generating classes, extends it along the operator actions, checks it
//! commutes with every operator, and takes homology.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext_classical::{closed_form_classical, compare_charts};
use crate::ext_equivariant::{
    closed_form_equivariant, closed_form_k_gt_m_read, compare_trichart, underlying_comparison, TriangleReading,
    closed_form_k0, flash_generator_degree, Class, Coef, Kind, Op, TriChart, SIGMA_MINUS_RHO,
    SIGMA_MINUS_RHO_MINUS_1,
};
use crate::f2core::{F2Matrix, F2Vec, Subspace};
use crate::grading::{Cone, ExtDegree, Window};

/// Degree of every differential: `(s, f, w) ↦ (s − 1, f + 1, w)`.
pub const D_DEGREE: ExtDegree = ExtDegree::new(-1, 1, 0);

/// A differential on a chart, recorded on basis classes.
pub type Differential = BTreeMap<usize, Vec<usize>>;

fn apply(d: &Differential, xs: &[usize]) -> Vec<usize> {
    let mut out = BTreeSet::new();
    for x in xs {
        for &y in d.get(x).map(Vec::as_slice).unwrap_or(&[]) {
            if !out.remove(&y) {
                out.insert(y);
            }
        }
    }
    out.into_iter().collect()
}

/// Checks that `d` has the right degree, squares to zero, and commutes with every
/// operator wherever all classes involved lie in the chart's window.
pub fn validate(c: &TriChart, d: &Differential) -> Result<()> {
    validate_within(c, d, &c.window)
}

/// As `validate`, with the linearity check restricted to classes in `inner`.
pub fn validate_within(c: &TriChart, d: &Differential, inner: &Window) -> Result<()> {
    for (&s, ts) in d {
        for &t in ts {
            if c.classes[t].degree - c.classes[s].degree != D_DEGREE {
                return Err(Error::InvalidDifferential(format!(
                    "d({}) = {} has the wrong degree",
                    c.classes[s].name, c.classes[t].name
                )));
            }
        }
        if !apply(d, ts).is_empty() {
            return Err(Error::InvalidDifferential(format!("d² ≠ 0 on {}", c.classes[s].name)));
        }
    }
    for i in 0..c.len() {
        let deg = c.classes[i].degree;
        if !inner.contains(deg) {
            continue;
        }
        for op in Op::ALL {
            let corner = deg + op.degree() + D_DEGREE;
            if !c.window.contains(corner) || !c.window.contains(deg + op.degree()) || !c.window.contains(deg + D_DEGREE)
            {
                continue;
            }
            let a = apply(d, c.act(op, i));
            let b = c.act_sum(op, &apply(d, &[i]));
            if a != b {
                return Err(Error::InvalidDifferential(format!(
                    "d does not commute with {op} on {}",
                    c.classes[i].name
                )));
            }
        }
    }
    Ok(())
}

struct DegreeData {
    classes: Vec<usize>,
    reps: Vec<F2Vec>,
    boundaries: Subspace,
}

fn to_vec(classes: &[usize], pos: &HashMap<usize, usize>, xs: &[usize]) -> Option<F2Vec> {
    let mut v = F2Vec::zero(classes.len());
    for x in xs {
        v.flip(*pos.get(x)?);
    }
    Some(v)
}

/// Homology of a chart with respect to a validated differential. Representatives are
/// chosen among single classes whenever possible so that labels carry over; a
/// representative that must be a sum gets the joined name. Operator actions are
/// inherited from the input chart.
pub fn homology(c: &TriChart, d: &Differential) -> Result<TriChart> {
    validate(c, d)?;
    homology_unchecked(c, d)
}

fn homology_unchecked(c: &TriChart, d: &Differential) -> Result<TriChart> {
    let degrees: Vec<ExtDegree> = c.degrees().copied().collect();
    let mut data: BTreeMap<ExtDegree, DegreeData> = BTreeMap::new();
    let mut out = TriChart::new(c.window);
    let mut out_index: BTreeMap<ExtDegree, Vec<usize>> = BTreeMap::new();
    for &deg in &degrees {
        let classes = c.at_degree(deg).to_vec();
        let n = classes.len();
        let pos: HashMap<usize, usize> = classes.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let tgt = c.at_degree(deg + D_DEGREE);
        let tpos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut dm = F2Matrix::zero(tgt.len(), n);
        for (j, &i) in classes.iter().enumerate() {
            for t in d.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
                dm.set(tpos[t], j, true);
            }
        }
        let mut boundaries = Subspace::new(n);
        for &s in c.at_degree(deg - D_DEGREE) {
            if let Some(v) = d.get(&s) {
                boundaries.add(&to_vec(&classes, &pos, v).expect("degree checked"));
            }
        }
        let kernel = dm.kernel_basis();
        let mut span = boundaries.clone();
        let mut reps = Vec::new();
        let units = (0..n).map(|j| F2Vec::unit(n, j)).filter(|v| dm.mul_vec(v).unwrap().is_zero());
        for v in units.chain(kernel.into_iter()) {
            if span.add(&v) {
                reps.push(v);
            }
        }
        let mut idx = Vec::new();
        for v in &reps {
            let support = v.support();
            let members: Vec<&Class> = support.iter().map(|&j| &c.classes[classes[j]]).collect();
            let i = if members.len() == 1 {
                let m = members[0];
                out.add_named(m.name.clone(), &m.gen, m.coef, deg)
            } else {
                let names: Vec<&str> = members.iter().map(|m| m.name.as_str()).collect();
                let name = names.join(" + ");
                out.add_named(name.clone(), &name, members[0].coef, deg)
            };
            idx.push(i.expect("degree lies in the window"));
        }
        out_index.insert(deg, idx);
        data.insert(
            deg,
            DegreeData {
                classes,
                reps,
                boundaries,
            },
        );
    }
    for (&deg, dd) in &data {
        for op in Op::ALL {
            let tdeg = deg + op.degree();
            let Some(td) = data.get(&tdeg) else {
                continue;
            };
            if td.reps.is_empty() {
                continue;
            }
            let tpos: HashMap<usize, usize> = td.classes.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let n = td.classes.len();
            let mut cols: Vec<F2Vec> = td.reps.clone();
            cols.extend(td.boundaries.basis().iter().cloned());
            let m = F2Matrix::from_columns(n, &cols);
            for (r, rep) in dd.reps.iter().enumerate() {
                let support: Vec<usize> = rep.support().into_iter().map(|j| dd.classes[j]).collect();
                let image = c.act_sum(op, &support);
                if image.is_empty() {
                    continue;
                }
                let Some(v) = to_vec(&td.classes, &tpos, &image) else {
                    continue;
                };
                let x = m.solve(&v)?.ok_or_else(|| {
                    Error::InvalidDifferential(format!("{op} image of a cycle is not a cycle at {tdeg}"))
                })?;
                let targets: Vec<usize> = (0..td.reps.len())
                    .filter(|&k| x.get(k))
                    .map(|k| out_index[&tdeg][k])
                    .collect();
                out.set_action(op, out_index[&deg][r], targets);
            }
        }
    }
    Ok(out)
}

/// A two-term complex `d: source → target` of degree `(−1, +1, 0)`.
#[derive(Clone, Debug)]
pub struct TwoTermComplex {
    pub source: TriChart,
    pub target: TriChart,
    /// Source class index ↦ target class indices.
    pub d: Differential,
}

impl TwoTermComplex {
    /// The complex as a single chart with an internal differential.
    pub fn total(&self) -> (TriChart, Differential) {
        let mut c = self.source.clone();
        let off = c.len();
        c.merge(&self.target);
        assert_eq!(c.len(), off + self.target.len(), "source and target share labels");
        let d = self
            .d
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(&s, v)| (s, v.iter().map(|t| t + off).collect()))
            .collect();
        (c, d)
    }
}

/// Homology of a two-term complex; extensions are applied by the caller.
pub fn les_page(c: &TwoTermComplex) -> Result<TriChart> {
    let (total, d) = c.total();
    homology(&total, &d)
}

/// Extends `d`, given on `seeds`, along the operator actions: `d(op·a) = op·d(a)`.
/// Classes never reached get `d = 0`.
pub fn propagate(c: &TriChart, seeds: &Differential) -> Differential {
    let mut d: Differential = seeds.clone();
    let mut queue: VecDeque<usize> = seeds.keys().copied().collect();
    while let Some(a) = queue.pop_front() {
        for op in Op::ALL {
            let t = c.act(op, a);
            if t.len() != 1 || d.contains_key(&t[0]) {
                continue;
            }
            let image = c.act_sum(op, &d[&a]);
            d.insert(t[0], image);
            queue.push_back(t[0]);
        }
    }
    d.retain(|_, v| !v.is_empty());
    d
}

/// The target of one step: `Σ^{−ρ−1}(Ext_{E(0)}{y} ⊕ ⊕_{i=1}^m M2{W_i})`, where `W_i`
/// sits in degree `(2i, 0, i)`.
pub fn change_of_rings_summand(m: usize, window: &Window, y: &str, w: &dyn Fn(usize) -> String) -> TriChart {
    let mut c = TriChart::new(*window);
    c.add_block(y, Kind::E0, SIGMA_MINUS_RHO_MINUS_1);
    for i in 1..=m {
        c.add_block(&w(i), Kind::M2, SIGMA_MINUS_RHO_MINUS_1 + flash_generator_degree(i));
    }
    c
}

/// Padding added to the working window at each induction step.
const PAD: (i32, i32, i32) = (3, 2, 5);

/// `Ext_{E(1)}(L(k), L(m))` by induction on `k`.
pub fn induct_ext(k: usize, m: usize, window: &Window) -> Result<TriChart> {
    let work = window.grow(PAD.0 * (k as i32 + 1), PAD.1 * (k as i32 + 1), PAD.2 * (k as i32 + 1));
    let c = induct_raw(k, m, &work)?;
    Ok(c.restrict(window))
}

/// Output of one induction step before cropping, exposed for inspection.
pub fn induct_raw(k: usize, m: usize, window: &Window) -> Result<TriChart> {
    if k == 0 {
        return Ok(closed_form_k0(m, window));
    }
    let inner = window.grow(PAD.0, PAD.1, PAD.2);
    let prev_window = inner.translate(ExtDegree::ZERO - SIGMA_MINUS_RHO);
    let prev = induct_raw(k - 1, m, &prev_window)?;
    let source = prev.shifted(SIGMA_MINUS_RHO, &inner);
    let target = change_of_rings_summand(m, &inner, "y", &|i| format!("w{k}_{i}"));
    let (total, _) = TwoTermComplex {
        source: source.clone(),
        target: target.clone(),
        d: BTreeMap::new(),
    }
    .total();
    let seeds = seeds(&total, k, m)?;
    let d = propagate(&total, &seeds);
    validate_within(&total, &d, &window.grow(1, 1, 1))?;
    let h = homology_unchecked(&total, &d)?;
    let mut h = relabel(&h, k, m);
    if k > m + 1 {
        triangle_extension(&mut h, k - m);
    }
    Ok(h.restrict(window))
}

/// The unique class named `gen` in degree `deg`.
fn unique(c: &TriChart, gen: &str, deg: ExtDegree) -> Result<usize> {
    let found: Vec<usize> = c.at_degree(deg).iter().copied().filter(|&i| c.classes[i].gen == gen).collect();
    match found.as_slice() {
        [i] => Ok(*i),
        _ => Err(Error::InvalidDifferential(format!(
            "expected one {gen}-class at {deg}, found {}",
            found.len()
        ))),
    }
}

/// The forced differentials on generating classes.
fn seeds(c: &TriChart, k: usize, m: usize) -> Result<Differential> {
    let mut d = Differential::new();
    let seed = |i: usize, d: &mut Differential| -> Result<()> {
        let deg = c.classes[i].degree + D_DEGREE;
        if c.window.contains(deg) {
            d.insert(i, vec![unique(c, "y", deg)?]);
        }
        Ok(())
    };
    for (i, cl) in c.classes.iter().enumerate() {
        let g = cl.coef;
        let hit = match cl.gen.as_str() {
            // τ^{2i} x0 and γ/τ^{2i+1} x0
            "x0" if k <= m + 1 => {
                (g.cone == Cone::Positive && g.rho == 0 && g.v0 == 0 && g.v1 == 0)
                    || (g.cone == Cone::Negative && g.tau % 2 == 1 && g.v0 == 0 && g.v1 == 0)
            }
            "x" => g == Coef::ONE,
            // γ/(ρ² τ^{4i+2}) x0 in the labels of the original x0
            "xp" => g.cone == Cone::Negative && g.rho == 2 && g.tau % 4 == 2 && g.v0 == 0 && g.v1 == 0,
            _ => false,
        };
        if hit {
            seed(i, &mut d)?;
        }
    }
    Ok(d)
}

/// Renames generators after a step. Labels keep their coefficient monomials relative to
/// the original generator, except that `v1`-multiples of the new `x` and `x′` are
/// re-expressed relative to them.
fn relabel(h: &TriChart, k: usize, m: usize) -> TriChart {
    h.filter_map(h.window, |cl| {
        let g = cl.coef;
        let (gen, coef) = if k <= m {
            match cl.gen.as_str() {
                "y" => (format!("v{k}"), g),
                "x0" => (format!("u{k}"), g),
                s if s.starts_with('x') && !s.contains(' ') => {
                    let i: usize = s[1..].parse().expect("flash generator index");
                    (format!("x{}", i - 1), g)
                }
                s => (s.to_string(), g),
            }
        } else {
            let top = k - m - 1;
            let low_e = |g: Coef| Coef { v1: g.v1 - 1, ..g };
            match cl.gen.as_str() {
                "y" => (format!("y{top}"), g),
                "x0" | "x" if g.cone == Cone::Positive && g.v1 >= 1 => ("x".to_string(), low_e(g)),
                "x0" | "x" if g.cone == Cone::Positive => (format!("b{k}"), g),
                "x0" if full_neg_a(&g) => (format!("a{k}"), g),
                "x0" => ("xp".to_string(), g),
                "xp" if g.v1 >= 1 => ("xp".to_string(), low_e(g)),
                "xp" => (format!("c{k}"), g),
                s => (s.to_string(), g),
            }
        };
        let name = crate::ext_equivariant::class_name(&gen, &coef);
        let name = if cl.name.contains(" + ") { cl.name.clone() } else { name };
        let gen = if cl.name.contains(" + ") { cl.gen.clone() } else { gen };
        Some((name, gen, coef, cl.degree))
    })
}

fn full_neg_a(g: &Coef) -> bool {
    g.cone == Cone::Negative && g.tau % 4 == 0 && g.v0 == 0 && g.v1 == 0
}

/// The triangle extension `v1 y_{i} = v0 y_{i+1}` between the previous top class of the
/// triangle and the new one: `v1 (g y_{top−1}) = (g v0) y_top` when that class survives.
fn triangle_extension(c: &mut TriChart, size: usize) {
    let (lower, upper) = (format!("y{}", size - 2), format!("y{}", size - 1));
    let lows: Vec<usize> = (0..c.len()).filter(|&i| c.classes[i].gen == lower).collect();
    for i in lows {
        let g = c.classes[i].coef;
        if let Some(j) = c.find(&upper, &Coef { v0: g.v0 + 1, ..g }) {
            let mut v = c.act(Op::V1, i).to_vec();
            v.push(j);
            c.set_action(Op::V1, i, v);
        }
    }
}

/// One entry of the collapse-bookkeeping ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub assertion: String,
    pub chart: (usize, usize),
    pub location: Option<(i32, i32, i32)>,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

/// Pass/fail ledger of the collapse assertions.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CollapseReport {
    pub entries: Vec<LedgerEntry>,
}

impl CollapseReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Scans one chart of `Ext(L(k), L(m))` for the collapse assertions; (a)–(c) concern the
/// triangle formations and are checked for `k > m` only:
/// (a) `v1`-torsion classes of positive filtration lie in odd stems `≤ −3`;
/// (b) at stem `−3 − 2i` their filtration is at most `(k − m) − i` in the positive cone
///     and one less in the negative cone;
/// (c) positive-cone torsion of positive filtration in stem `−2n − 1` has weight `≤ −n`,
///     and negative-cone `v1`-torsion-free generators in stem `−2n` have weight `≥ −n + 4`;
/// (d) the parity law for `v1`-torsion-free classes.
/// The weight bounds are invariant under `ρ`-suspension, so they transfer to the
/// suspended summands of the Adams `E2`-page.
pub fn check_chart(c: &TriChart, k: usize, m: usize, report: &mut CollapseReport) {
    let key = (k, m);
    let mut push = |assertion: &str, loc: Option<ExtDegree>, expected: String, found: String| {
        report.entries.push(LedgerEntry {
            assertion: assertion.to_string(),
            chart: key,
            location: loc.map(|d| (d.stem, d.filtration, d.weight)),
            pass: loc.is_none(),
            expected,
            found,
        })
    };
    let parity = crate::ext_equivariant::parity_violations(c, k.saturating_sub(m) + 1);
    let first = parity.first().map(|&i| c.classes[i].degree);
    push(
        "parity of v1-torsion-free classes",
        first,
        "weight ≡ n (stem 2n), n−1 (stem 2n−1) mod 2".into(),
        first.map(|d| format!("weight {}", d.weight)).unwrap_or_else(|| "ok".into()),
    );
    if k <= m {
        return;
    }
    let torsion: Vec<usize> = (0..c.len())
        .filter(|&i| c.classes[i].degree.filtration > 0 && c.v1_torsion(i))
        .collect();
    let bad = torsion
        .iter()
        .map(|&i| c.classes[i].degree)
        .find(|d| d.stem % 2 == 0 || d.stem > -3);
    push(
        "v1-torsion in positive filtration lies in odd stems <= -3",
        bad,
        "odd stem <= -3".into(),
        bad.map(|d| format!("stem {}", d.stem)).unwrap_or_else(|| "ok".into()),
    );
    let p = k as i32 - m as i32;
    let bound = |i: usize| {
        let d = c.classes[i].degree;
        let b = p - (-3 - d.stem) / 2;
        if c.classes[i].cone() == Cone::Positive {
            b
        } else {
            b - 1
        }
    };
    let bad = torsion
        .iter()
        .copied()
        .filter(|&i| c.classes[i].degree.stem % 2 != 0 && c.classes[i].degree.stem <= -3)
        .find(|&i| c.classes[i].degree.filtration > bound(i));
    push(
        "filtration bound on odd-stem v1-torsion",
        bad.map(|i| c.classes[i].degree),
        bad.map(|i| format!("f <= {}", bound(i))).unwrap_or_else(|| "bound".into()),
        bad.map(|i| format!("f = {}", c.classes[i].degree.filtration)).unwrap_or_else(|| "ok".into()),
    );
    let bad = torsion
        .iter()
        .map(|&i| &c.classes[i])
        .find(|cl| cl.cone() == Cone::Positive && 2 * cl.degree.weight > cl.degree.stem + 1);
    push(
        "positive-cone torsion in stem -2n-1 has weight <= -n",
        bad.map(|cl| cl.degree),
        "weight <= (stem + 1) / 2".into(),
        bad.map(|cl| format!("weight {}", cl.degree.weight)).unwrap_or_else(|| "ok".into()),
    );
    let targets: BTreeSet<usize> = c.edges().map(|e| e.2).collect();
    let bad = (0..c.len()).map(|i| (i, &c.classes[i])).find(|(i, cl)| {
        cl.cone() == Cone::Negative
            && cl.degree.stem % 2 == 0
            && !targets.contains(i)
            && c.window.contains(cl.degree + Op::V1.degree())
            && !c.v1_torsion(*i)
            && cl.degree.weight < cl.degree.stem / 2 + 4
    });
    push(
        "negative-cone generators in stem -2n have weight >= -n+4",
        bad.map(|x| x.1.degree),
        "weight >= stem / 2 + 4".into(),
        bad.map(|x| format!("weight {}", x.1.degree.weight)).unwrap_or_else(|| "ok".into()),
    );
}

/// Runs the collapse assertions on every `induct_ext(k, m)` chart in range.
pub fn verify_collapse_bookkeeping(k_max: usize, m_max: usize, window: &Window) -> Result<CollapseReport> {
    let mut report = CollapseReport::default();
    for k in 0..=k_max {
        for m in 0..=m_max {
            let c = induct_ext(k, m, window)?;
            check_chart(&c, k, m, &mut report);
        }
    }
    Ok(report)
}

/// Outcome of comparing one engine chart against the closed forms.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub k: usize,
    pub m: usize,
    pub classes: usize,
    /// `None` when the engine agrees with `closed_form_equivariant`.
    pub closed_form: Option<String>,
    /// Comparison with the degree-forced reading of the triangle bound (`k > m` only).
    pub forced_reading: Option<Option<String>>,
    /// Comparison of the underlying chart with `closed_form_classical`.
    pub underlying: Option<String>,
    #[serde(skip)]
    pub chart: TriChart,
}

impl CrossCheck {
    pub fn pass(&self) -> bool {
        self.closed_form.is_none() && self.underlying.is_none()
    }
}

/// Runs `induct_ext(k, m)` for all `k ≤ k_max`, `m ≤ m_max` and compares each chart with
/// the equivariant closed form and, through `underlying_comparison`, the classical one.
pub fn cross_derivation(k_max: usize, m_max: usize, window: &Window) -> Result<Vec<CrossCheck>> {
    let mut out = Vec::new();
    for k in 0..=k_max {
        for m in 0..=m_max {
            let chart = induct_ext(k, m, window)?;
            let w = window;
            let closed = closed_form_equivariant(k, m, w);
            let forced = (k > m).then(|| {
                compare_trichart(&chart, &closed_form_k_gt_m_read(k, m, w, TriangleReading::DegreeForced)).err()
            });
            let classical = closed_form_classical(k, m, w.stem_min, w.stem_max, w.filtration_max);
            let under = underlying_comparison(&chart).restrict(w.stem_min, w.stem_max, w.filtration_max);
            out.push(CrossCheck {
                k,
                m,
                classes: chart.len(),
                closed_form: compare_trichart(&chart, &closed).err(),
                forced_reading: forced,
                underlying: compare_charts(&under, &classical).err(),
                chart,
            });
        }
    }
    Ok(out)
}
