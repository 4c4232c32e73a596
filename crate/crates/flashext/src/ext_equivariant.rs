//! Trigraded equivariant Ext charts over `E(1)_★`.
//!
//! Classes are labeled by a generator name and a coefficient monomial
//! `ρ^c τ^n v0^b v1^e` (positive cone) or `γ/(ρ^j τ^n) v0^b v1^e` (negative cone).
//! Closed-form charts are assembled from three block kinds, each carrying its own
//! action rules: the full `Ext_{E(1)}(M2, M2)`, `Ext_{E(0)}(M2, M2)` viewed as a
//! module over the positive part of the former, and a bare copy of `M2`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext_classical::BigradedChart;
use crate::f2core::F2Matrix;
use crate::grading::{Cone, ExtDegree, Window};

/// The operators recorded on a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Rho,
    V0,
    V1,
    Tau4,
    Tau2V0,
}

impl Op {
    pub const ALL: [Op; 5] = [Op::Rho, Op::V0, Op::V1, Op::Tau4, Op::Tau2V0];

    pub const fn degree(self) -> ExtDegree {
        match self {
            Op::Rho => ExtDegree::new(-1, 0, -1),
            Op::V0 => ExtDegree::new(0, 1, 0),
            Op::V1 => ExtDegree::new(2, 1, 1),
            Op::Tau4 => ExtDegree::new(0, 0, -4),
            Op::Tau2V0 => ExtDegree::new(0, 1, -2),
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Op::Rho => "rho",
            Op::V0 => "v0",
            Op::V1 => "v1",
            Op::Tau4 => "tau4",
            Op::Tau2V0 => "tau2v0",
        }
    }

    pub fn parse(s: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|o| o.name() == s)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Chart half used for display.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    A,
    B,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::A => f.write_str("A"),
            Part::B => f.write_str("B"),
        }
    }
}

/// Part assignment: a class in stem `2n` or `2n-1` lies in Part A when its weight is
/// `n` or `n+3` mod 4 and in Part B when it is `n+1` or `n+2`.
///
/// On a `v1`-tower generator the weight is `n` or `n+2` mod 4, and moving along `ρ`
/// or `v1` preserves the part, so towers inherit the part of their base.
pub fn part_of(d: ExtDegree) -> Part {
    let n = (d.stem + 1).div_euclid(2);
    match (d.weight - n).rem_euclid(4) {
        0 | 3 => Part::A,
        _ => Part::B,
    }
}

/// A coefficient monomial. For the positive cone `rho`/`tau` are exponents; for the
/// negative cone they are the exponents in the denominator of `γ/(ρ^j τ^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coef {
    pub cone: Cone,
    pub rho: u32,
    pub tau: u32,
    pub v0: u32,
    pub v1: u32,
}

impl Coef {
    pub const ONE: Coef = Coef::pos(0, 0, 0, 0);

    pub const fn pos(rho: u32, tau: u32, v0: u32, v1: u32) -> Coef {
        Coef {
            cone: Cone::Positive,
            rho,
            tau,
            v0,
            v1,
        }
    }

    pub const fn neg(rho: u32, tau: u32, v0: u32, v1: u32) -> Coef {
        Coef {
            cone: Cone::Negative,
            rho,
            tau,
            v0,
            v1,
        }
    }

    pub fn degree(&self) -> ExtDegree {
        let (c, n, b, e) = (self.rho as i32, self.tau as i32, self.v0 as i32, self.v1 as i32);
        match self.cone {
            Cone::Positive => ExtDegree::new(2 * e - c, b + e, e - c - n),
            Cone::Negative => ExtDegree::new(c + 2 * e, b + e, 1 + c + n + e),
        }
    }

    fn with_v0(self, b: u32) -> Coef {
        Coef { v0: b, ..self }
    }

    fn with_v1(self, e: u32) -> Coef {
        Coef { v1: e, ..self }
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |s: &str, e: u32| match e {
            0 => String::new(),
            1 => s.to_string(),
            _ => format!("{s}^{e}"),
        };
        let mut parts = Vec::new();
        match self.cone {
            Cone::Positive => {
                parts.push(pow("rho", self.rho));
                parts.push(pow("tau", self.tau));
            }
            Cone::Negative => {
                let den: Vec<String> = [pow("rho", self.rho), pow("tau", self.tau)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect();
                parts.push(format!("gamma/({})", den.join(" ")));
            }
        }
        parts.push(pow("v0", self.v0));
        parts.push(pow("v1", self.v1));
        let parts: Vec<String> = parts.into_iter().filter(|s| !s.is_empty()).collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Block kinds with built-in action rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `Ext_{E(1)}(M2, M2)`: positive part `F2[ρ,τ⁴,v0,τ²v0,v1]/(ρv0, ρ³v1, (τ²v0)²+τ⁴v0²)`
    /// and its negative cone.
    Full,
    /// `Ext_{E(0)}(M2, M2)` as a module over the positive part of `Full`; `v1` acts by zero.
    E0,
    /// A copy of `M2`; only `ρ` and `τ⁴` act.
    M2,
    /// The `v0`-free part of `E0`: classes with no `v0`; only `ρ` and `τ⁴` act.
    E0Top,
    /// The `ρ`-multiples of `E0` without `v0`: `ρ^{c≥1}τ^{2n}` and `γ/(ρ^j τ^{2n})`.
    E0Rho,
}

/// Negative-cone class types of `Full`.
fn full_neg_type(c: &Coef) -> Option<u8> {
    if c.tau % 4 == 0 && c.tau >= 4 && c.v0 == 0 && c.v1 == 0 {
        Some(0)
    } else if c.tau % 4 == 2 && c.rho <= 2 && c.v0 == 0 {
        Some(1)
    } else if c.tau % 2 == 1 && c.rho == 0 {
        Some(2)
    } else {
        None
    }
}

impl Kind {
    pub fn valid(self, c: &Coef) -> bool {
        let pos = c.cone == Cone::Positive;
        match self {
            Kind::Full => {
                if pos {
                    c.tau % 2 == 0
                        && (c.tau % 4 == 0 || c.v0 >= 1)
                        && (c.v0 == 0 || c.rho == 0)
                        && (c.rho < 3 || c.v1 == 0)
                } else {
                    full_neg_type(c).is_some()
                }
            }
            Kind::E0 => {
                c.v1 == 0
                    && if pos {
                        c.tau % 2 == 0 && (c.v0 == 0 || c.rho == 0)
                    } else if c.tau % 2 == 0 {
                        c.tau >= 2 && c.v0 == 0
                    } else {
                        c.rho == 0
                    }
            }
            Kind::M2 => c.v0 == 0 && c.v1 == 0 && (pos || c.tau >= 1),
            Kind::E0Top => Kind::E0.valid(c) && c.v0 == 0,
            Kind::E0Rho => {
                Kind::E0.valid(c) && c.v0 == 0 && if pos { c.rho >= 1 } else { c.tau % 2 == 0 }
            }
        }
    }

    /// The image of a valid coefficient under `op`, or `None` for zero.
    pub fn act(self, op: Op, c: &Coef) -> Option<Coef> {
        let pos = c.cone == Cone::Positive;
        let out = match (self, op) {
            (_, Op::Tau4) => {
                if pos {
                    Some(Coef { tau: c.tau + 4, ..*c })
                } else {
                    c.tau.checked_sub(4).map(|t| Coef { tau: t, ..*c })
                }
            }
            (_, Op::Rho) if !pos => c.rho.checked_sub(1).map(|j| Coef { rho: j, ..*c }),
            (Kind::Full, Op::Rho) => {
                (c.v0 == 0 && (c.rho < 2 || c.v1 == 0)).then_some(Coef { rho: c.rho + 1, ..*c })
            }
            (Kind::Full, Op::V0) => {
                if pos {
                    (c.rho == 0).then(|| c.with_v0(c.v0 + 1))
                } else {
                    match full_neg_type(c) {
                        Some(1) if c.rho == 2 => Some(Coef::neg(0, c.tau + 1, 0, c.v1 + 1)),
                        Some(2) => Some(c.with_v0(c.v0 + 1)),
                        _ => None,
                    }
                }
            }
            (Kind::Full, Op::V1) => {
                if pos {
                    (c.rho <= 2).then(|| c.with_v1(c.v1 + 1))
                } else {
                    full_neg_type(c).filter(|&t| t > 0).map(|_| c.with_v1(c.v1 + 1))
                }
            }
            (Kind::Full, Op::Tau2V0) => {
                if pos {
                    (c.rho == 0).then_some(Coef { tau: c.tau + 2, v0: c.v0 + 1, ..*c })
                } else {
                    match full_neg_type(c) {
                        Some(1) if c.rho == 2 => Some(Coef::neg(0, c.tau - 1, 0, c.v1 + 1)),
                        Some(2) if c.tau >= 3 => Some(Coef { tau: c.tau - 2, v0: c.v0 + 1, ..*c }),
                        _ => None,
                    }
                }
            }
            (Kind::E0, Op::Rho) => (c.v0 == 0).then_some(Coef { rho: c.rho + 1, ..*c }),
            (Kind::E0, Op::V0) => {
                if pos {
                    (c.rho == 0).then(|| c.with_v0(c.v0 + 1))
                } else {
                    (c.tau % 2 == 1).then(|| c.with_v0(c.v0 + 1))
                }
            }
            (Kind::E0, Op::Tau2V0) => {
                if pos {
                    (c.rho == 0).then_some(Coef { tau: c.tau + 2, v0: c.v0 + 1, ..*c })
                } else {
                    (c.tau % 2 == 1 && c.tau >= 3).then(|| Coef { tau: c.tau - 2, v0: c.v0 + 1, ..*c })
                }
            }
            (Kind::M2 | Kind::E0Top | Kind::E0Rho, Op::Rho) => Some(Coef { rho: c.rho + 1, ..*c }),
            _ => None,
        };
        out.filter(|o| self.valid(o))
    }

    /// Coefficients valid for this kind whose class, placed at `shift`, lies in `window`.
    pub fn enumerate(self, shift: ExtDegree, window: &Window) -> Vec<Coef> {
        let mut out = Vec::new();
        let fmax = window.filtration_max - shift.filtration;
        if fmax < 0 {
            return out;
        }
        for cone in [Cone::Positive, Cone::Negative] {
            for e in 0..=fmax {
                for b in 0..=(fmax - e) {
                    let range = |lo: i32, hi: i32| lo.max(0)..=hi;
                    let (s0, w0) = (shift.stem, shift.weight);
                    let rho_range = match cone {
                        Cone::Positive => range(s0 + 2 * e - window.stem_max, s0 + 2 * e - window.stem_min),
                        Cone::Negative => range(window.stem_min - s0 - 2 * e, window.stem_max - s0 - 2 * e),
                    };
                    for c in rho_range {
                        let tau_range = match cone {
                            Cone::Positive => range(w0 + e - c - window.weight_max, w0 + e - c - window.weight_min),
                            Cone::Negative => {
                                range(window.weight_min - w0 - 1 - c - e, window.weight_max - w0 - 1 - c - e)
                            }
                        };
                        for n in tau_range {
                            let coef = Coef {
                                cone,
                                rho: c as u32,
                                tau: n as u32,
                                v0: b as u32,
                                v1: e as u32,
                            };
                            if self.valid(&coef) && window.contains(shift + coef.degree()) {
                                out.push(coef);
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// One class of a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Class {
    pub name: String,
    pub gen: String,
    pub coef: Coef,
    pub degree: ExtDegree,
}

impl Class {
    pub fn cone(&self) -> Cone {
        self.coef.cone
    }

    pub fn part(&self) -> Part {
        part_of(self.degree)
    }
}

/// Name of the class `coef · gen`.
pub fn class_name(gen: &str, coef: &Coef) -> String {
    if *coef == Coef::ONE {
        gen.to_string()
    } else {
        format!("{coef} {gen}")
    }
}

/// A trigraded chart: classes plus operator actions, each action an F2-linear map
/// recorded on basis classes as a sorted list of target classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriChart {
    pub window: Window,
    pub classes: Vec<Class>,
    pub actions: BTreeMap<Op, BTreeMap<usize, Vec<usize>>>,
    #[serde(skip)]
    lookup: HashMap<(String, Coef), usize>,
    #[serde(skip)]
    at: BTreeMap<ExtDegree, Vec<usize>>,
}

impl PartialEq for TriChart {
    fn eq(&self, o: &TriChart) -> bool {
        self.window == o.window && self.classes == o.classes && self.actions == o.actions
    }
}

impl TriChart {
    pub fn new(window: Window) -> TriChart {
        TriChart {
            window,
            classes: Vec::new(),
            actions: BTreeMap::new(),
            lookup: HashMap::new(),
            at: BTreeMap::new(),
        }
    }

    /// Rebuilds the lookup tables, e.g. after deserialization.
    pub fn reindex(&mut self) {
        self.lookup.clear();
        self.at.clear();
        for (i, c) in self.classes.iter().enumerate() {
            self.lookup.insert((c.gen.clone(), c.coef), i);
            self.at.entry(c.degree).or_default().push(i);
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Adds a class unless it falls outside the window; labels must be unique.
    pub fn add(&mut self, gen: &str, coef: Coef, degree: ExtDegree) -> Option<usize> {
        self.add_named(class_name(gen, &coef), gen, coef, degree)
    }

    pub fn add_named(&mut self, name: String, gen: &str, coef: Coef, degree: ExtDegree) -> Option<usize> {
        if !self.window.contains(degree) {
            return None;
        }
        let key = (gen.to_string(), coef);
        assert!(!self.lookup.contains_key(&key), "duplicate class {name}");
        let i = self.classes.len();
        self.classes.push(Class {
            name,
            gen: gen.to_string(),
            coef,
            degree,
        });
        self.lookup.insert(key, i);
        self.at.entry(degree).or_default().push(i);
        Some(i)
    }

    pub fn find(&self, gen: &str, coef: &Coef) -> Option<usize> {
        self.lookup.get(&(gen.to_string(), *coef)).copied()
    }

    pub fn at_degree(&self, d: ExtDegree) -> &[usize] {
        self.at.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degrees(&self) -> impl Iterator<Item = &ExtDegree> {
        self.at.keys()
    }

    pub fn dims(&self) -> BTreeMap<ExtDegree, usize> {
        self.at.iter().map(|(d, v)| (*d, v.len())).collect()
    }

    pub fn generators(&self) -> BTreeSet<String> {
        self.classes.iter().map(|c| c.gen.clone()).collect()
    }

    pub fn set_action(&mut self, op: Op, from: usize, mut to: Vec<usize>) {
        to.sort_unstable();
        let table = self.actions.entry(op).or_default();
        if to.is_empty() {
            table.remove(&from);
        } else {
            table.insert(from, to);
        }
    }

    pub fn act(&self, op: Op, i: usize) -> &[usize] {
        self.actions
            .get(&op)
            .and_then(|t| t.get(&i))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// The image of a formal sum of classes.
    pub fn act_sum(&self, op: Op, xs: &[usize]) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &x in xs {
            for &y in self.act(op, x) {
                if !out.remove(&y) {
                    out.insert(y);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Op, usize, usize)> + '_ {
        self.actions
            .iter()
            .flat_map(|(op, t)| t.iter().flat_map(move |(s, ts)| ts.iter().map(move |t| (*op, *s, *t))))
    }

    pub fn edge_count(&self) -> usize {
        self.actions.values().map(|t| t.values().map(Vec::len).sum::<usize>()).sum()
    }

    /// Adds the classes of one block and its internal actions.
    pub fn add_block(&mut self, gen: &str, kind: Kind, shift: ExtDegree) -> Vec<usize> {
        let coefs = kind.enumerate(shift, &self.window);
        let added: Vec<usize> = coefs
            .iter()
            .filter_map(|c| self.add(gen, *c, shift + c.degree()))
            .collect();
        for &i in &added {
            let coef = self.classes[i].coef;
            for op in Op::ALL {
                if let Some(t) = kind.act(op, &coef).and_then(|c| self.find(gen, &c)) {
                    self.set_action(op, i, vec![t]);
                }
            }
        }
        added
    }

    /// The matrix of `op` from degree `d`, in the class order of `at_degree`.
    pub fn action_matrix(&self, op: Op, d: ExtDegree) -> F2Matrix {
        let src = self.at_degree(d);
        let tgt = self.at_degree(d + op.degree());
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut m = F2Matrix::zero(tgt.len(), src.len());
        for (j, &i) in src.iter().enumerate() {
            for t in self.act(op, i) {
                if let Some(&r) = pos.get(t) {
                    m.set(r, j, true);
                }
            }
        }
        m
    }

    /// Keeps the classes inside `w` and the actions between them.
    pub fn restrict(&self, w: &Window) -> TriChart {
        self.filter_map(*w, |c| w.contains(c.degree).then(|| (c.name.clone(), c.gen.clone(), c.coef, c.degree)))
    }

    /// Suspends every class by `d`; classes leaving `w` are dropped.
    pub fn shifted(&self, d: ExtDegree, w: &Window) -> TriChart {
        self.filter_map(*w, |c| Some((c.name.clone(), c.gen.clone(), c.coef, c.degree + d)))
    }

    /// Rebuilds the chart through a per-class map; `None` drops the class.
    pub fn filter_map(
        &self,
        window: Window,
        f: impl Fn(&Class) -> Option<(String, String, Coef, ExtDegree)>,
    ) -> TriChart {
        let mut out = TriChart::new(window);
        let mut map = vec![None; self.classes.len()];
        for (i, c) in self.classes.iter().enumerate() {
            if let Some((name, gen, coef, deg)) = f(c) {
                map[i] = out.add_named(name, &gen, coef, deg);
            }
        }
        for (op, s, t) in self.edges() {
            if let (Some(a), Some(b)) = (map[s], map[t]) {
                out.actions.entry(op).or_default().entry(a).or_default().push(b);
            }
        }
        for t in out.actions.values_mut() {
            for v in t.values_mut() {
                v.sort_unstable();
            }
        }
        out
    }

    /// Disjoint union; labels of the two charts must not collide.
    pub fn merge(&mut self, other: &TriChart) {
        let mut map = vec![None; other.classes.len()];
        for (i, c) in other.classes.iter().enumerate() {
            map[i] = self.add_named(c.name.clone(), &c.gen, c.coef, c.degree);
        }
        for (op, s, t) in other.edges() {
            if let (Some(a), Some(b)) = (map[s], map[t]) {
                let mut v = self.act(op, a).to_vec();
                v.push(b);
                self.set_action(op, a, v);
            }
        }
    }

    /// Every action edge connects classes whose degrees differ by the operator degree.
    pub fn check_action_degrees(&self) -> Result<()> {
        for (op, s, t) in self.edges() {
            let (a, b) = (&self.classes[s], &self.classes[t]);
            if b.degree - a.degree != op.degree() {
                return Err(Error::InvalidDifferential(format!(
                    "{op} edge {} {} -> {} {}",
                    a.name, a.degree, b.name, b.degree
                )));
            }
        }
        Ok(())
    }

    /// Checks `ρ·v0 = 0`, `v0·ρ = 0` and `(τ²v0)² = τ⁴v0²` wherever all classes involved
    /// stay inside the window.
    pub fn check_relations(&self) -> Result<()> {
        for i in 0..self.classes.len() {
            for (a, b) in [(Op::Rho, Op::V0), (Op::V0, Op::Rho)] {
                let x = self.act_sum(b, &self.act_sum(a, &[i]));
                if !x.is_empty() && self.inside(i, &[a, b]) {
                    return Err(Error::InvalidModule(format!("{b}·{a} nonzero on {}", self.classes[i].name)));
                }
            }
            if self.inside(i, &[Op::Tau2V0, Op::Tau2V0]) && self.inside(i, &[Op::V0, Op::V0, Op::Tau4]) {
                let x = self.act_sum(Op::Tau2V0, &self.act_sum(Op::Tau2V0, &[i]));
                let y = self.act_sum(Op::Tau4, &self.act_sum(Op::V0, &self.act_sum(Op::V0, &[i])));
                if x != y {
                    return Err(Error::InvalidModule(format!(
                        "(tau2v0)^2 != tau4 v0^2 on {}",
                        self.classes[i].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether every intermediate degree of the composite `ops` (applied left to right)
    /// lies in the window.
    pub fn inside(&self, i: usize, ops: &[Op]) -> bool {
        let mut d = self.classes[i].degree;
        ops.iter().all(|op| {
            d = d + op.degree();
            self.window.contains(d)
        })
    }

    /// Ranks of operator composites, used to compare charts up to relabeling.
    pub fn signature(&self) -> TriSignature {
        let mut ranks = BTreeMap::new();
        let mut words: Vec<Vec<Op>> = Op::ALL.iter().map(|o| vec![*o]).collect();
        for a in Op::ALL {
            for b in Op::ALL {
                words.push(vec![a, b]);
            }
        }
        for &d in self.at.keys() {
            for w in &words {
                let mut m = F2Matrix::identity(self.at_degree(d).len());
                let mut cur = d;
                for &op in w {
                    m = self.action_matrix(op, cur).mul(&m).expect("shapes agree");
                    cur = cur + op.degree();
                }
                let r = m.rank();
                if r > 0 {
                    let name: Vec<&str> = w.iter().map(|o| o.name()).collect();
                    ranks.insert((d, name.join(".")), r);
                }
            }
        }
        let mut joint = BTreeMap::new();
        for &d in self.at.keys() {
            let mut m: Option<F2Matrix> = None;
            for op in Op::ALL {
                let a = self.action_matrix(op, d - op.degree());
                m = Some(match m {
                    None => a,
                    Some(p) => p.hstack(&a),
                });
            }
            let r = m.map(|m| m.rank()).unwrap_or(0);
            if r > 0 {
                joint.insert(d, r);
            }
        }
        TriSignature {
            dims: self.dims(),
            ranks,
            joint_ranks: joint,
        }
    }

    /// Structural summary: maximal `ρ`-chains classified by shape, and `v1`-torsion
    /// classes of positive filtration (the triangle formations).
    pub fn structure(&self) -> Structure {
        let mut has_pre = vec![false; self.classes.len()];
        let mut monomial = true;
        for (_, t) in self.actions.get(&Op::Rho).into_iter().flat_map(|t| t.iter()) {
            if t.len() > 1 {
                monomial = false;
            }
            for &j in t {
                has_pre[j] = true;
            }
        }
        let mut rho_chains = BTreeMap::new();
        for i in 0..self.classes.len() {
            if has_pre[i] {
                continue;
            }
            let start = self.classes[i].degree;
            let open_left = !self.window.contains(start - Op::Rho.degree());
            let mut len = 1;
            let mut cur = i;
            let mut open_right = false;
            loop {
                let next = self.act(Op::Rho, cur);
                if next.len() != 1 {
                    if next.is_empty() && !self.window.contains(self.classes[cur].degree + Op::Rho.degree()) {
                        open_right = true;
                    }
                    break;
                }
                cur = next[0];
                len += 1;
            }
            let shape = match (open_left, open_right) {
                (_, true) => ChainShape::Tower,
                (true, false) => ChainShape::Divisible,
                (false, false) if len >= 2 => ChainShape::Finite(len),
                (false, false) => ChainShape::Isolated,
            };
            let key = (shape, self.classes[cur].degree);
            *rho_chains.entry(key).or_insert(0) += 1;
        }
        let mut triangle = BTreeMap::new();
        for (i, c) in self.classes.iter().enumerate() {
            if c.degree.filtration > 0 && self.v1_torsion(i) {
                *triangle.entry(c.degree).or_insert(0) += 1;
            }
        }
        Structure {
            rho_monomial: monomial,
            rho_chains,
            triangle,
        }
    }

    /// Whether some power of `v1` kills the class before it leaves the window.
    pub fn v1_torsion(&self, i: usize) -> bool {
        let mut cur = vec![i];
        let mut d = self.classes[i].degree;
        loop {
            d = d + Op::V1.degree();
            if !self.window.contains(d) {
                return false;
            }
            cur = self.act_sum(Op::V1, &cur);
            if cur.is_empty() {
                return true;
            }
        }
    }
}

/// Basis-independent invariants of a `TriChart`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriSignature {
    pub dims: BTreeMap<ExtDegree, usize>,
    pub ranks: BTreeMap<(ExtDegree, String), usize>,
    pub joint_ranks: BTreeMap<ExtDegree, usize>,
}

/// Shape of a maximal `ρ`-chain within the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainShape {
    /// Leaves the window under `ρ`: a `ρ`-tower, keyed by its last class in the window.
    Tower,
    /// Enters from the window edge and ends at a `ρ`-annihilated class: a `ρ`-divisible
    /// family, keyed by its base.
    Divisible,
    /// A finite chain of the given length (2 is a `ρ`-pair), keyed by its last class.
    Finite(usize),
    /// A class with no `ρ` connections.
    Isolated,
}

/// Structural summary of a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub rho_monomial: bool,
    pub rho_chains: BTreeMap<(ChainShape, ExtDegree), usize>,
    pub triangle: BTreeMap<ExtDegree, usize>,
}

/// Compares two charts up to relabeling: signatures and structural summaries.
pub fn compare_trichart(a: &TriChart, b: &TriChart) -> std::result::Result<(), String> {
    let (sa, sb) = (a.signature(), b.signature());
    for key in sa.dims.keys().chain(sb.dims.keys()) {
        let (x, y) = (sa.dims.get(key), sb.dims.get(key));
        if x != y {
            return Err(format!("dimension at {key}: {x:?} vs {y:?}"));
        }
    }
    for key in sa.ranks.keys().chain(sb.ranks.keys()) {
        let (x, y) = (sa.ranks.get(key), sb.ranks.get(key));
        if x != y {
            return Err(format!("rank of {} at {}: {x:?} vs {y:?}", key.1, key.0));
        }
    }
    for key in sa.joint_ranks.keys().chain(sb.joint_ranks.keys()) {
        let (x, y) = (sa.joint_ranks.get(key), sb.joint_ranks.get(key));
        if x != y {
            return Err(format!("joint rank into {key}: {x:?} vs {y:?}"));
        }
    }
    let (ta, tb) = (a.structure(), b.structure());
    for key in ta.rho_chains.keys().chain(tb.rho_chains.keys()) {
        let (x, y) = (ta.rho_chains.get(key), tb.rho_chains.get(key));
        if x != y {
            return Err(format!("rho-chain {:?} at {}: {x:?} vs {y:?}", key.0, key.1));
        }
    }
    if ta.triangle != tb.triangle {
        return Err(format!("triangle classes differ: {:?} vs {:?}", ta.triangle, tb.triangle));
    }
    Ok(())
}

/// `Ext_{E(h)}(M2, M2)` for `h ∈ {0, 1}`.
pub fn ext_m2_m2(height: usize, window: &Window) -> Result<TriChart> {
    let kind = match height {
        0 => Kind::E0,
        1 => Kind::Full,
        _ => return Err(Error::OutOfDomain(format!("height {height}"))),
    };
    let mut c = TriChart::new(*window);
    c.add_block("1", kind, ExtDegree::ZERO);
    Ok(c)
}

/// `Ext_{E(0)}(M2, M2)` as a module over the positive part of `Ext_{E(1)}(M2, M2)`:
/// `R⁺/(v1){1, τ²}` plus the negative-cone families
/// `γ/(τ^{4i}ρ^j), γ/(τ^{4i−2}ρ^j), γ/τ^{4i−1}, γ/τ^{4i−3}` with their `v0`-towers.
pub fn ext_e0_as_e1_module(window: &Window) -> TriChart {
    let mut c = TriChart::new(*window);
    c.add_block("y", Kind::E0, ExtDegree::ZERO);
    c
}

/// `E1`-page of the `ρ`-Bockstein spectral sequence for `Ext_{E(0)}(M2, M2)`.
///
/// Positive part `F2[τ, v0][ρ]` with `d1(τ) = ρ v0`; negative part the families
/// `F2[v0]{γ/(ρ^j τ^n)}` with `d1(γ/(ρ^{j+1}τ^{2k+1})) = v0 γ/(ρ^j τ^{2k+2})`.
pub fn rho_bockstein_e1(window: &Window) -> (TriChart, BTreeMap<usize, Vec<usize>>) {
    let mut c = TriChart::new(*window);
    for b in 0..=window.filtration_max.max(0) {
        for r in 0..=(window.stem_max.abs().max(window.stem_min.abs())) {
            for w in window.weight_min..=window.weight_max {
                let r = r as u32;
                let pos_tau = -(r as i32) - w;
                let neg_tau = w - 1 - r as i32;
                if pos_tau >= 0 {
                    let k = Coef::pos(r, pos_tau as u32, b as u32, 0);
                    c.add("1", k, k.degree());
                }
                if neg_tau >= 1 {
                    let k = Coef::neg(r, neg_tau as u32, b as u32, 0);
                    c.add("1", k, k.degree());
                }
            }
        }
    }
    let acts = |op: Op, k: &Coef| -> Option<Coef> {
        let pos = k.cone == Cone::Positive;
        match op {
            Op::Rho if pos => Some(Coef { rho: k.rho + 1, ..*k }),
            Op::Rho => k.rho.checked_sub(1).map(|j| Coef { rho: j, ..*k }),
            Op::V0 => Some(k.with_v0(k.v0 + 1)),
            Op::Tau4 if pos => Some(Coef { tau: k.tau + 4, ..*k }),
            Op::Tau4 => (k.tau > 4).then(|| Coef { tau: k.tau - 4, ..*k }),
            Op::Tau2V0 if pos => Some(Coef { tau: k.tau + 2, v0: k.v0 + 1, ..*k }),
            Op::Tau2V0 => (k.tau > 2).then(|| Coef { tau: k.tau - 2, v0: k.v0 + 1, ..*k }),
            Op::V1 => None,
        }
    };
    let mut d1 = BTreeMap::new();
    for i in 0..c.len() {
        let k = c.classes[i].coef;
        for op in Op::ALL {
            if let Some(t) = acts(op, &k).and_then(|t| c.find("1", &t)) {
                c.set_action(op, i, vec![t]);
            }
        }
        let target = match k.cone {
            Cone::Positive if k.tau % 2 == 1 => Some(Coef::pos(k.rho + 1, k.tau - 1, k.v0 + 1, 0)),
            Cone::Negative if k.tau % 2 == 1 && k.rho >= 1 => Some(Coef::neg(k.rho - 1, k.tau + 1, k.v0 + 1, 0)),
            _ => None,
        };
        if let Some(t) = target.and_then(|t| c.find("1", &t)) {
            d1.insert(i, vec![t]);
        }
    }
    (c, d1)
}

/// Runs the one-page `ρ`-Bockstein computation of `Ext_{E(0)}(M2, M2)`.
pub fn rho_bockstein_e0(window: &Window) -> Result<TriChart> {
    let big = window.grow(2, 1, 2);
    let (e1, d1) = rho_bockstein_e1(&big);
    let h = crate::les_engine::homology(&e1, &d1)?;
    Ok(h.restrict(window))
}

/// The extension `v1 x_i = v0 x_{i+1}` between consecutive blocks of `Ext(M2, L(p))`,
/// extended over the positive cone: `v1 (g x_i)` is `v0 (g x_{i+1})` when that class
/// exists, else the class `g v0 x_{i+1}` when it exists.
pub fn flash_extension(c: &mut TriChart, lower: &str, upper: &str) {
    let lows: Vec<usize> = (0..c.len())
        .filter(|&i| c.classes[i].gen == lower && c.classes[i].cone() == Cone::Positive)
        .collect();
    for i in lows {
        let g = c.classes[i].coef;
        let target = match c.find(upper, &g) {
            Some(j) => c.act(Op::V0, j).to_vec(),
            None => c.find(upper, &g.with_v0(g.v0 + 1)).into_iter().collect(),
        };
        if !target.is_empty() {
            c.set_action(Op::V1, i, target);
        }
    }
}

/// Degree of `x_i` in `Ext(M2, L(p))`.
pub fn flash_generator_degree(i: usize) -> ExtDegree {
    ExtDegree::new(2 * i as i32, 0, i as i32)
}

/// Closed form of `Ext_{E(1)}(M2, L(p))`: `Ext_{E(0)}{x_0, …, x_{p−1}} ⊕ Ext_{E(1)}{x_p}`
/// with `v1 x_i = v0 x_{i+1}`.
pub fn closed_form_k0(p: usize, window: &Window) -> TriChart {
    let mut c = TriChart::new(*window);
    for i in 0..=p {
        let kind = if i == p { Kind::Full } else { Kind::E0 };
        c.add_block(&format!("x{i}"), kind, flash_generator_degree(i));
    }
    for i in 0..p {
        flash_extension(&mut c, &format!("x{i}"), &format!("x{}", i + 1));
    }
    c
}

/// Suspensions used by the long exact sequence: `Σ^{−ρ}` and `Σ^{−ρ−1}`.
pub const SIGMA_MINUS_RHO: ExtDegree = ExtDegree::new(-2, 0, -1);
pub const SIGMA_MINUS_RHO_MINUS_1: ExtDegree = ExtDegree::new(-3, 0, -1);

/// The `f = 0` summand produced by step `q` (counted from 1) of the induction on `k`
/// when `k ≤ m`: the `v0`-free part of `Σ^{−ρ−1}Ext_{E(0)}{y}`, the free `M2` copies
/// `Σ^{−ρ−1}W_i`, and the `ρ`-multiples left over from `Σ^{−ρ}Ext_{E(0)}{x_0}`, each
/// suspended by the `k − q` later steps.
pub fn add_v_summand(c: &mut TriChart, q: usize, k: usize, m: usize) {
    let later = (k - q) as i32;
    let s = ExtDegree::new(-2 * later, 0, -later);
    c.add_block(&format!("v{q}"), Kind::E0Top, s + SIGMA_MINUS_RHO_MINUS_1);
    c.add_block(&format!("u{q}"), Kind::E0Rho, s + SIGMA_MINUS_RHO);
    for i in 1..=m {
        c.add_block(
            &format!("w{q}_{i}"),
            Kind::M2,
            s + SIGMA_MINUS_RHO_MINUS_1 + flash_generator_degree(i),
        );
    }
}

/// The closed form for `Ext_{E(1)}(L(k), L(m))` (see `closed_form_k_gt_m` for `k > m`).
pub fn closed_form_equivariant(k: usize, m: usize, window: &Window) -> TriChart {
    if k > m {
        return closed_form_k_gt_m(k, m, window);
    }
    let mut c = closed_form_k0(m - k, window);
    for q in 1..=k {
        add_v_summand(&mut c, q, k, m);
    }
    c
}

/// Adds the classes of `kind` at `shift` whose coefficients satisfy `keep`, with the
/// actions of `kind` restricted to them (a subquotient block).
pub fn add_family(
    c: &mut TriChart,
    gen: &str,
    kind: Kind,
    shift: ExtDegree,
    keep: impl Fn(&Coef) -> bool,
) -> Vec<usize> {
    let coefs: Vec<Coef> = kind.enumerate(shift, &c.window).into_iter().filter(|g| keep(g)).collect();
    let added: Vec<usize> = coefs.iter().filter_map(|g| c.add(gen, *g, shift + g.degree())).collect();
    for &i in &added {
        let coef = c.classes[i].coef;
        for op in Op::ALL {
            if let Some(t) = kind.act(op, &coef).filter(|g| keep(g)).and_then(|g| c.find(gen, &g)) {
                c.set_action(op, i, vec![t]);
            }
        }
    }
    added
}

/// Adds `op (g lower) = f(g) upper` for every class of `lower` where `f` gives a class of `upper`.
fn link(c: &mut TriChart, op: Op, lower: &str, upper: &str, f: impl Fn(&Coef) -> Option<Coef>) {
    let lows: Vec<usize> = (0..c.len()).filter(|&i| c.classes[i].gen == lower).collect();
    for i in lows {
        if let Some(j) = f(&c.classes[i].coef).and_then(|g| c.find(upper, &g)) {
            let mut v = c.act(op, i).to_vec();
            v.push(j);
            c.set_action(op, i, v);
        }
    }
}

/// Degree of the triangle generator `y_i` of `Ext(L(k), L(m))`, `p = k − m`.
pub fn triangle_generator_degree(p: usize, i: usize) -> ExtDegree {
    let r = (p - i) as i32;
    ExtDegree::new(-2 * r - 1, 0, -r)
}

/// How the `γ/τ^{4j+3}` triangle is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleReading {
    /// As stated: the same shape as the `γ/τ^{4j+1}` triangle, `v0^b y_i` for `b ≤ i`.
    Stated,
    /// As forced by `d(Σ^{−ρ}x′)` landing in filtration `|x′| + 1`: `v0^b y_i` for
    /// `b ≤ i − 1` when `i ≥ 1`, and `y_0` alone.
    DegreeForced,
}

/// Largest `v0`-power on `g y_i` in the triangle formation.
fn triangle_bound(g: &Coef, i: u32, reading: TriangleReading) -> u32 {
    match g.cone {
        Cone::Positive if g.tau % 4 == 2 => i + 1,
        Cone::Negative if g.tau % 4 == 3 && reading == TriangleReading::DegreeForced => i.saturating_sub(1),
        _ => i,
    }
}

/// Closed form of `Ext_{E(1)}(L(k), L(m))` for `k > m`, `p = k − m`:
/// the triangle formations on `y_0, …, y_{p−1}` (with their `ρ`-towers and `ρ`-divisible
/// families), the `ρ`-tower on `b` with the `ρ`-pairs `v1^j b` and `v1^p b = ρx`, the
/// module `v1 Ext{x}`, the module generated by `x′`, the `ρ`-pairs `v1^j c` with
/// `v1^{p−1} c = ρx′`, the `ρ`-divisible towers `a`, and the `f = 0` pieces carried
/// from the steps `q ≤ m` together with the free classes of the steps `q > m`.
pub fn closed_form_k_gt_m(k: usize, m: usize, window: &Window) -> TriChart {
    closed_form_k_gt_m_read(k, m, window, TriangleReading::Stated)
}

/// `closed_form_k_gt_m` with an explicit reading of the `γ/τ^{4j+3}` triangle.
pub fn closed_form_k_gt_m_read(k: usize, m: usize, window: &Window, reading: TriangleReading) -> TriChart {
    let p = k - m;
    let mut c = TriChart::new(*window);
    let base = ExtDegree::new(-2 * p as i32, 0, -(p as i32));
    for i in 0..p {
        let b = i as u32;
        add_family(&mut c, &format!("y{i}"), Kind::E0, triangle_generator_degree(p, i), |g| {
            g.v0 <= triangle_bound(g, b, reading)
        });
    }
    for i in 0..p.saturating_sub(1) {
        link(&mut c, Op::V1, &format!("y{i}"), &format!("y{}", i + 1), |g| {
            Kind::E0.valid(&g.with_v0(g.v0 + 1)).then(|| g.with_v0(g.v0 + 1))
        });
    }
    let top = p as u32 - 1;
    add_family(&mut c, "b", Kind::Full, base, |g| {
        g.cone == Cone::Positive && g.tau % 4 == 0 && g.v0 == 0 && g.rho >= 1 && g.v1 <= top
    });
    add_family(&mut c, "x", Kind::Full, ExtDegree::new(0, p as i32, 0), |g| {
        g.cone == Cone::Positive && g.rho <= 2
    });
    link(&mut c, Op::V1, "b", "x", |g| (g.v1 == top).then(|| g.with_v1(0)));
    add_family(&mut c, "xp", Kind::Full, ExtDegree::new(-2, p as i32 - 1, -1), |g| {
        g.cone == Cone::Negative && (g.tau % 4 == 2 || g.v1 >= 1)
    });
    if p > 1 {
        add_family(&mut c, "c", Kind::Full, base, |g| {
            g.cone == Cone::Negative && g.tau % 4 == 2 && g.rho <= 1 && g.v1 + 1 <= top
        });
        link(&mut c, Op::V1, "c", "xp", |g| (g.v1 + 1 == top).then(|| g.with_v1(0)));
    }
    add_family(&mut c, "a", Kind::Full, base, |g| g.cone == Cone::Negative && full_neg_type(g) == Some(0));
    for q in 1..=m {
        add_v_summand(&mut c, q, k, m);
    }
    for q in m + 1..=k {
        let s = ExtDegree::new(-2 * (k - q) as i32, 0, -((k - q) as i32));
        for i in 1..=m {
            c.add_block(
                &format!("w{q}_{i}"),
                Kind::M2,
                s + SIGMA_MINUS_RHO_MINUS_1 + flash_generator_degree(i),
            );
        }
    }
    c
}

/// The underlying nonequivariant chart: drops the negative cone and `ρ`-multiples and
/// identifies `τ`-translates. A family `(gen, v0^b v1^e)` survives when it has a member
/// whose `τ`-exponent is divisible by 4, i.e. a member that is not a `τ²v0`-translate
/// of a `v0`-annihilated class.
pub fn underlying_comparison(c: &TriChart) -> BigradedChart {
    let mut reps: BTreeMap<(String, u32, u32), usize> = BTreeMap::new();
    for (i, cl) in c.classes.iter().enumerate() {
        let k = cl.coef;
        if k.cone != Cone::Positive || k.rho != 0 || k.tau % 4 != 0 {
            continue;
        }
        let key = (cl.gen.clone(), k.v0, k.v1);
        match reps.get(&key) {
            Some(&j) if c.classes[j].degree.weight <= cl.degree.weight => {}
            _ => {
                reps.insert(key, i);
            }
        }
    }
    let mut out = BigradedChart::default();
    let mut pos: BTreeMap<(String, u32, u32), ((i32, i32), usize)> = BTreeMap::new();
    for (key, &i) in &reps {
        let d = c.classes[i].degree;
        let bd = (d.stem, d.filtration);
        let idx = out.dims.get(&bd).copied().unwrap_or(0);
        out.dims.insert(bd, idx + 1);
        out.names.entry(bd).or_default().push(class_name(&key.0, &Coef::pos(0, 0, key.1, key.2)));
        pos.insert(key.clone(), (bd, idx));
    }
    let key_of = |j: usize| -> Option<(String, u32, u32)> {
        let cl = &c.classes[j];
        let k = cl.coef;
        (k.cone == Cone::Positive && k.rho == 0).then(|| (cl.gen.clone(), k.v0, k.v1))
    };
    for (key, &i) in &reps {
        let (bd, col) = pos[key];
        for (vi, op) in [(0usize, Op::V0), (1, Op::V1)] {
            let tb = if vi == 0 { (bd.0, bd.1 + 1) } else { (bd.0 + 2, bd.1 + 1) };
            let rows = out.dims.get(&tb).copied().unwrap_or(0);
            if rows == 0 {
                continue;
            }
            let table = if vi == 0 { &mut out.v0 } else { &mut out.v1 };
            let cols = out.dims[&bd];
            let m = table.entry(bd).or_insert_with(|| F2Matrix::zero(rows, cols));
            for t in c.act(op, i) {
                if let Some((_, row)) = key_of(*t).and_then(|k| pos.get(&k)) {
                    m.flip(*row, col);
                }
            }
        }
    }
    out.v0.retain(|_, m| !m.is_zero());
    out.v1.retain(|_, m| !m.is_zero());
    out
}

/// Parity law: every `v1`-torsion-free class that is not a `ρ`-multiple has weight
/// `≡ n` in stem `2n` and `≡ n−1` in stem `2n−1` (mod 2). `ρ²` breaks the law, but
/// differentials are `ρ`-linear, so only classes off the image of `ρ` matter. Classes
/// whose `ρ`-preimage or `v1^depth`-image would leave the window are skipped, since
/// their torsion cannot be decided inside it. Returns the offending classes.
pub fn parity_violations(c: &TriChart, depth: usize) -> Vec<usize> {
    let rho_images: BTreeSet<usize> = c.edges().filter(|e| e.0 == Op::Rho).map(|e| e.2).collect();
    (0..c.len())
        .filter(|&i| {
            let d = c.classes[i].degree;
            if rho_images.contains(&i)
                || !c.window.contains(d - Op::Rho.degree())
                || c.v1_torsion(i)
                || (1..=depth as i32).any(|j| {
                    let v = Op::V1.degree();
                    !c.window.contains(d + ExtDegree::new(v.stem * j, v.filtration * j, v.weight * j))
                })
            {
                return false;
            }
            let n = (d.stem + 1).div_euclid(2);
            let expect = if d.stem % 2 == 0 { n } else { n - 1 };
            (d.weight - expect).rem_euclid(2) != 0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win() -> Window {
        Window::new(-10, 10, 6, -12, 12)
    }

    #[test]
    fn coefficient_degrees() {
        assert_eq!(Coef::pos(1, 0, 0, 0).degree(), ExtDegree::new(-1, 0, -1));
        assert_eq!(Coef::pos(0, 0, 0, 1).degree(), ExtDegree::new(2, 1, 1));
        assert_eq!(Coef::neg(0, 1, 0, 0).degree(), ExtDegree::new(0, 0, 2));
        assert_eq!(Coef::pos(0, 2, 1, 0).degree(), Op::Tau2V0.degree());
    }

    #[test]
    fn height_one_relations() {
        let c = ext_m2_m2(1, &win()).unwrap();
        c.check_action_degrees().unwrap();
        c.check_relations().unwrap();
        let v1 = c.find("1", &Coef::pos(0, 0, 0, 1)).unwrap();
        assert_eq!(c.classes[v1].degree, ExtDegree::new(2, 1, 1));
        let r3v1 = c.find("1", &Coef::pos(2, 0, 0, 1)).unwrap();
        assert!(c.act(Op::Rho, r3v1).is_empty());
        let g = c.find("1", &Coef::neg(0, 1, 0, 0)).unwrap();
        assert_eq!(c.classes[g].degree, ExtDegree::new(0, 0, 2));
        let g3 = c.find("1", &Coef::neg(0, 3, 0, 0)).unwrap();
        let g2 = c.find("1", &Coef::neg(2, 2, 0, 0)).unwrap();
        assert_eq!(c.act(Op::V1, g3), c.act(Op::V0, g2));
    }

    #[test]
    fn height_zero_basics() {
        let c = ext_m2_m2(0, &win()).unwrap();
        c.check_relations().unwrap();
        let rho = c.find("1", &Coef::pos(1, 0, 0, 0)).unwrap();
        assert_eq!(c.classes[rho].degree, ExtDegree::new(-1, 0, -1));
        assert!(c.act(Op::V0, rho).is_empty());
        for cl in &c.classes {
            if cl.cone() == Cone::Positive {
                assert_eq!(cl.degree.stem.rem_euclid(2), cl.degree.weight.rem_euclid(2), "{}", cl.name);
            }
        }
    }

    #[test]
    fn part_rule() {
        assert_eq!(part_of(ExtDegree::ZERO), Part::A);
        assert_eq!(part_of(ExtDegree::new(0, 0, -2)), Part::B);
        assert_eq!(part_of(ExtDegree::new(2, 1, 1)), Part::A);
        assert_eq!(part_of(ExtDegree::new(-1, 0, -1)), Part::A);
        assert_eq!(part_of(ExtDegree::new(0, 1, -2)), Part::B);
    }

    #[test]
    fn e0_module_shift() {
        let c = ext_e0_as_e1_module(&win());
        let s = c.shifted(SIGMA_MINUS_RHO_MINUS_1, &win());
        let u = s.find("y", &Coef::ONE).unwrap();
        assert_eq!(s.classes[u].degree, ExtDegree::new(-3, 0, -1));
        for g in [Coef::ONE, Coef::pos(0, 2, 0, 0)] {
            let i = c.find("y", &g).unwrap();
            assert!(c.act(Op::V1, i).is_empty());
        }
    }

    #[test]
    fn underlying_of_m2_m2() {
        let c = ext_m2_m2(1, &Window::new(-6, 8, 4, -30, 12)).unwrap();
        let u = underlying_comparison(&c);
        for s in -6..=8 {
            for f in 0..=4 {
                let expect = usize::from(s >= 0 && s % 2 == 0 && s / 2 <= f);
                assert_eq!(u.dim(s, f), expect, "({s},{f})");
            }
        }
    }
}
