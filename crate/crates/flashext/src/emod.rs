//! Finitely generated right modules over `E(0)` and `E(1)`.
//!
//! A module is a finite graded basis with the operators `Q_0`, `Q_1` given as
//! sparse matrices. Classical modules have F2 coefficients and ignore weights in
//! degree checks. Equivariant modules are free over `M2` on the basis, with
//! positive-cone coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::{F2Matrix, F2Vec, Subspace};
use crate::grading::{Cone, Degree, M2Element, M2Monomial};
use crate::steenrod::{self, QuotientBasisSpec, SteenrodMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Classical,
    Equivariant,
}

/// Degree by which `Q_i` lowers: `Q_0` by `(1,0)`, `Q_1` by `(3,1)`.
pub fn q_degree(i: usize) -> Degree {
    match i {
        0 => Degree::new(1, 0),
        1 => Degree::new(3, 1),
        _ => panic!("only Q0 and Q1 exist here"),
    }
}

/// Graded ranks.
pub type PoincareSeries = BTreeMap<Degree, usize>;

/// One nonzero entry of an operator: `source · Q_i ∋ coeff · target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub source: usize,
    pub target: usize,
    pub coeff: M2Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: Degree,
}

/// A finite module over `E(height)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EModule {
    pub variant: Variant,
    pub height: u8,
    pub basis: Vec<BasisElement>,
    /// `q[i][j]` lists the image `b_j · Q_i` as `(target, coefficient)` pairs.
    q: [Vec<Vec<(usize, M2Element)>>; 2],
}

impl EModule {
    /// Builds and validates a module from its basis and operator entries.
    pub fn new(
        variant: Variant,
        height: u8,
        basis: Vec<BasisElement>,
        q0: Vec<Entry>,
        q1: Vec<Entry>,
    ) -> Result<Self> {
        if height > 1 {
            return Err(Error::InvalidModule(format!("height {height} is not 0 or 1")));
        }
        let n = basis.len();
        let mut q: [Vec<Vec<(usize, M2Element)>>; 2] = [vec![Vec::new(); n], vec![Vec::new(); n]];
        for (i, entries) in [q0, q1].into_iter().enumerate() {
            for e in entries {
                if e.source >= n || e.target >= n {
                    return Err(Error::InvalidModule(format!("entry {e:?} out of range")));
                }
                add_entry(&mut q[i][e.source], e.target, &e.coeff);
            }
        }
        let m = EModule {
            variant,
            height,
            basis,
            q,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.height == 0 && self.q[1].iter().any(|r| !r.is_empty()) {
            return Err(Error::InvalidModule("E(0)-module with nonzero Q1".into()));
        }
        for i in 0..2 {
            for (j, row) in self.q[i].iter().enumerate() {
                for (t, c) in row {
                    for mono in c.terms() {
                        if mono.cone != Cone::Positive {
                            return Err(Error::InvalidModule(
                                "negative-cone operator coefficients are not supported".into(),
                            ));
                        }
                        if self.variant == Variant::Classical && *mono != M2Monomial::ONE {
                            return Err(Error::InvalidModule(
                                "classical modules have F2 coefficients".into(),
                            ));
                        }
                        let lhs = self.basis[j].degree - q_degree(i);
                        let rhs = self.basis[*t].degree + mono.degree();
                        let ok = match self.variant {
                            Variant::Classical => lhs.stem == rhs.stem,
                            Variant::Equivariant => lhs == rhs,
                        };
                        if !ok {
                            return Err(Error::InvalidModule(format!(
                                "Q{i} from {} to {} has the wrong degree",
                                self.basis[j].name, self.basis[*t].name
                            )));
                        }
                    }
                }
            }
        }
        for (a, b) in [(0, 0), (1, 1)] {
            for j in 0..self.rank() {
                if !self.apply_seq(j, &[a, b]).is_empty() {
                    return Err(Error::InvalidModule(format!("Q{a}Q{b} is nonzero")));
                }
            }
        }
        for j in 0..self.rank() {
            if self.apply_seq(j, &[0, 1]) != self.apply_seq(j, &[1, 0]) {
                return Err(Error::InvalidModule("Q0 and Q1 do not commute".into()));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn degrees(&self) -> Vec<Degree> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    /// `b_j · Q_i` as a sparse combination.
    pub fn image(&self, j: usize, i: usize) -> &[(usize, M2Element)] {
        &self.q[i][j]
    }

    pub fn entries(&self, i: usize) -> Vec<Entry> {
        let mut out = Vec::new();
        for (j, row) in self.q[i].iter().enumerate() {
            for (t, c) in row {
                out.push(Entry {
                    source: j,
                    target: *t,
                    coeff: c.clone(),
                });
            }
        }
        out
    }

    /// Applies `Q_{ops[0]}`, then `Q_{ops[1]}`, … to basis element `j`,
    /// treating coefficients as central.
    pub fn apply_seq(&self, j: usize, ops: &[usize]) -> BTreeMap<usize, M2Element> {
        let mut cur: BTreeMap<usize, M2Element> = BTreeMap::new();
        cur.insert(j, M2Element::one());
        for &i in ops {
            let mut next: BTreeMap<usize, M2Element> = BTreeMap::new();
            for (s, c) in &cur {
                for (t, d) in &self.q[i][*s] {
                    let prod = c.multiply(d);
                    let e = next.entry(*t).or_default();
                    *e = e.add(&prod);
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        cur
    }

    pub fn poincare_series(&self) -> PoincareSeries {
        let mut s = PoincareSeries::new();
        for b in &self.basis {
            let key = match self.variant {
                Variant::Classical => Degree::new(b.degree.stem, 0),
                Variant::Equivariant => b.degree,
            };
            *s.entry(key).or_default() += 1;
        }
        s
    }

    /// Reduction modulo `(ρ, τ)`: same basis, only unit coefficients kept.
    pub fn reduce_rho_tau(&self) -> EModule {
        let mut q = self.q.clone();
        for rows in q.iter_mut() {
            for row in rows.iter_mut() {
                row.retain(|(_, c)| c.reduce_rho_tau());
                for (_, c) in row.iter_mut() {
                    *c = M2Element::one();
                }
            }
        }
        EModule {
            variant: self.variant,
            height: self.height,
            basis: self.basis.clone(),
            q,
        }
    }

    /// The `(ρ,τ)`-reduction as an F2 matrix of `Q_i` (column `j` = image of `b_j`).
    pub fn q_matrix(&self, i: usize) -> F2Matrix {
        let n = self.rank();
        let mut m = F2Matrix::zero(n, n);
        for (j, row) in self.q[i].iter().enumerate() {
            for (t, c) in row {
                if c.reduce_rho_tau() {
                    m.flip(*t, j);
                }
            }
        }
        m
    }

    pub fn has_unit_coefficients(&self) -> bool {
        self.q.iter().flatten().flatten().all(|(_, c)| c.is_one())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModuleJson::from(self)).expect("module serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: ModuleJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.into_module()
    }
}

fn add_entry(row: &mut Vec<(usize, M2Element)>, target: usize, coeff: &M2Element) {
    if let Some(pos) = row.iter().position(|(t, _)| *t == target) {
        let sum = row[pos].1.add(coeff);
        if sum.is_zero() {
            row.remove(pos);
        } else {
            row[pos].1 = sum;
        }
    } else if !coeff.is_zero() {
        row.push((target, coeff.clone()));
        row.sort_by_key(|(t, _)| *t);
    }
}

#[derive(Serialize, Deserialize)]
struct JsonBasis {
    name: String,
    stem: i32,
    weight: i32,
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    variant: Variant,
    height: u8,
    basis: Vec<JsonBasis>,
    q0: Vec<(usize, usize, Vec<(u32, u32)>)>,
    q1: Vec<(usize, usize, Vec<(u32, u32)>)>,
}

impl From<&EModule> for ModuleJson {
    fn from(m: &EModule) -> Self {
        let trip = |i: usize| {
            m.entries(i)
                .into_iter()
                .map(|e| {
                    let c = e.coeff.terms().map(|t| (t.rho_exp, t.tau_exp)).collect();
                    (e.source, e.target, c)
                })
                .collect()
        };
        ModuleJson {
            variant: m.variant,
            height: m.height,
            basis: m
                .basis
                .iter()
                .map(|b| JsonBasis {
                    name: b.name.clone(),
                    stem: b.degree.stem,
                    weight: b.degree.weight,
                })
                .collect(),
            q0: trip(0),
            q1: trip(1),
        }
    }
}

impl ModuleJson {
    fn into_module(self) -> Result<EModule> {
        let conv = |v: Vec<(usize, usize, Vec<(u32, u32)>)>| {
            v.into_iter()
                .map(|(s, t, c)| {
                    let mut coeff = M2Element::zero();
                    for (a, b) in c {
                        coeff.add_term(M2Monomial::positive(a, b));
                    }
                    Entry {
                        source: s,
                        target: t,
                        coeff,
                    }
                })
                .collect()
        };
        EModule::new(
            self.variant,
            self.height,
            self.basis
                .into_iter()
                .map(|b| BasisElement {
                    name: b.name,
                    degree: Degree::new(b.stem, b.weight),
                })
                .collect(),
            conv(self.q0),
            conv(self.q1),
        )
    }
}

/// Builder for modules with unit coefficients.
pub struct ModuleBuilder {
    variant: Variant,
    height: u8,
    basis: Vec<BasisElement>,
    q: [Vec<Entry>; 2],
}

impl ModuleBuilder {
    pub fn new(variant: Variant, height: u8) -> Self {
        ModuleBuilder {
            variant,
            height,
            basis: Vec::new(),
            q: [Vec::new(), Vec::new()],
        }
    }

    pub fn add(&mut self, name: impl Into<String>, degree: Degree) -> usize {
        self.basis.push(BasisElement {
            name: name.into(),
            degree,
        });
        self.basis.len() - 1
    }

    pub fn q(&mut self, i: usize, source: usize, target: usize) -> &mut Self {
        self.q[i].push(Entry {
            source,
            target,
            coeff: M2Element::one(),
        });
        self
    }

    pub fn build(self) -> Result<EModule> {
        let [q0, q1] = self.q;
        EModule::new(self.variant, self.height, self.basis, q0, q1)
    }
}

/// Degree of the generator `x_i` of `L(k)`: `iρ + 1` equivariantly, `2i + 1` classically.
pub fn flash_generator_degree(i: i32, variant: Variant) -> Degree {
    match variant {
        Variant::Equivariant => Degree::rho_times(i) + Degree::new(1, 0),
        Variant::Classical => Degree::new(2 * i + 1, 0),
    }
}

/// The lightning flash module `L(k)`.
///
/// `L(0)` is the unit module. For `k ≥ 1` the basis is `x_1..x_k`, `x_i Q_0`
/// (`i = 1..k`) and `x_1 Q_1`, with `x_{i+1} Q_1 = x_i Q_0` and `Q_0 Q_1 = 0`.
pub fn lightning_flash(k: usize, variant: Variant) -> EModule {
    let mut b = ModuleBuilder::new(variant, 1);
    if k == 0 {
        b.add("1", Degree::ZERO);
        return b.build().expect("L(0) is valid");
    }
    let deg = |d: Degree| match variant {
        Variant::Classical => Degree::new(d.stem, 0),
        Variant::Equivariant => d,
    };
    let x: Vec<usize> = (1..=k)
        .map(|i| b.add(format!("x{i}"), flash_generator_degree(i as i32, variant)))
        .collect();
    let xq0: Vec<usize> = (1..=k)
        .map(|i| {
            b.add(
                format!("x{i}Q0"),
                deg(flash_generator_degree(i as i32, variant) - q_degree(0)),
            )
        })
        .collect();
    let bottom = b.add("x1Q1", deg(flash_generator_degree(1, variant) - q_degree(1)));
    for i in 0..k {
        b.q(0, x[i], xq0[i]);
        if i == 0 {
            b.q(1, x[0], bottom);
        } else {
            b.q(1, x[i], xq0[i - 1]);
        }
    }
    b.build().expect("lightning flash is valid")
}

/// The free module on one generator in degree `d`.
pub fn free_module(height: u8, variant: Variant, d: Degree) -> EModule {
    let deg = |x: Degree| match variant {
        Variant::Classical => Degree::new(x.stem, 0),
        Variant::Equivariant => x,
    };
    let mut b = ModuleBuilder::new(variant, height);
    let g = b.add("g", deg(d));
    let g0 = b.add("gQ0", deg(d - q_degree(0)));
    b.q(0, g, g0);
    if height == 1 {
        let g1 = b.add("gQ1", deg(d - q_degree(1)));
        let g01 = b.add("gQ0Q1", deg(d - q_degree(0) - q_degree(1)));
        b.q(1, g, g1).q(1, g0, g01).q(0, g1, g01);
    }
    b.build().expect("free module is valid")
}

/// `Σ^d M`.
pub fn suspend(m: &EModule, d: Degree) -> EModule {
    let mut out = m.clone();
    for b in out.basis.iter_mut() {
        b.degree = match m.variant {
            Variant::Classical => Degree::new(b.degree.stem + d.stem, 0),
            Variant::Equivariant => b.degree + d,
        };
    }
    out
}

pub fn direct_sum(a: &EModule, b: &EModule) -> Result<EModule> {
    if a.variant != b.variant || a.height != b.height {
        return Err(Error::VariantMismatch("direct sum of unlike modules".into()));
    }
    let n = a.rank();
    let mut basis = a.basis.clone();
    basis.extend(b.basis.iter().cloned());
    let mut qs = [Vec::new(), Vec::new()];
    for (i, q) in qs.iter_mut().enumerate() {
        q.extend(a.entries(i));
        q.extend(b.entries(i).into_iter().map(|e| Entry {
            source: e.source + n,
            target: e.target + n,
            coeff: e.coeff,
        }));
    }
    let [q0, q1] = qs;
    EModule::new(a.variant, a.height, basis, q0, q1)
}

/// `M ⊗ N` with the `Q_i` acting as derivations.
pub fn tensor(m: &EModule, n: &EModule) -> Result<EModule> {
    if m.variant != n.variant {
        return Err(Error::VariantMismatch("tensor of classical with equivariant".into()));
    }
    let height = m.height.max(n.height);
    let idx = |a: usize, b: usize| a * n.rank() + b;
    let mut basis = Vec::with_capacity(m.rank() * n.rank());
    for x in &m.basis {
        for y in &n.basis {
            let name = if x.name == "1" {
                y.name.clone()
            } else if y.name == "1" {
                x.name.clone()
            } else {
                format!("{}*{}", x.name, y.name)
            };
            basis.push(BasisElement {
                name,
                degree: x.degree + y.degree,
            });
        }
    }
    let mut qs = [Vec::new(), Vec::new()];
    for (i, q) in qs.iter_mut().enumerate() {
        for a in 0..m.rank() {
            for b in 0..n.rank() {
                for (t, c) in m.image(a, i) {
                    q.push(Entry {
                        source: idx(a, b),
                        target: idx(*t, b),
                        coeff: c.clone(),
                    });
                }
                for (t, c) in n.image(b, i) {
                    q.push(Entry {
                        source: idx(a, b),
                        target: idx(a, *t),
                        coeff: c.clone(),
                    });
                }
            }
        }
    }
    let [q0, q1] = qs;
    EModule::new(m.variant, height, basis, q0, q1)
}

/// Which Brown–Gitler homology module to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BgKind {
    /// `H_★B_{−1}` : all of `A_★`, as an `E(0)`-module.
    Mod2,
    /// `H_★B_0` : `A//E(0)_★`, as an `E(1)`-module.
    Integral,
}

/// The Brown–Gitler homology module on monomials of weight at most `cutoff`.
///
/// Weights are normalized by `wt(ξ̄_i) = wt(τ̄_i) = 2^i`. The integral module with
/// cutoff `c` reduces to `L(ν₂(c!))`.
pub fn bg_homology_module(kind: BgKind, cutoff: u64, variant: Variant) -> EModule {
    let (spec, height, ops): (QuotientBasisSpec, u8, &[u8]) = match kind {
        BgKind::Mod2 => (QuotientBasisSpec::new(-1), 0, &[0]),
        BgKind::Integral => (QuotientBasisSpec::new(0), 1, &[0, 1]),
    };
    let monos = steenrod::enumerate_basis(spec, cutoff);
    module_on_monomials(&monos, spec, height, ops, variant)
}

/// The module spanned by a set of monomials closed under the `Q_i` in `ops`.
pub fn module_on_monomials(
    monos: &[SteenrodMonomial],
    spec: QuotientBasisSpec,
    height: u8,
    ops: &[u8],
    variant: Variant,
) -> EModule {
    let index: BTreeMap<String, usize> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.to_string(), i))
        .collect();
    let mut b = ModuleBuilder::new(variant, height);
    for m in monos {
        let d = steenrod::degree(m);
        let d = match variant {
            Variant::Classical => Degree::new(d.stem, 0),
            Variant::Equivariant => d,
        };
        b.add(m.to_string(), d);
    }
    for (j, m) in monos.iter().enumerate() {
        for &i in ops {
            for t in steenrod::q_action(spec, m, i) {
                let target = *index
                    .get(&t.to_string())
                    .expect("weight-bounded spans are closed under Q_i");
                b.q(i as usize, j, target);
            }
        }
    }
    b.build().expect("monomial modules are valid")
}

/// Ranks of `Q_0`, `Q_1` and `Q_0 Q_1` out of each degree, plus the series.
/// Together with Margolis homology these pin down the small modules we compare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleInvariants {
    pub series: PoincareSeries,
    pub rank_q0: BTreeMap<Degree, usize>,
    pub rank_q1: BTreeMap<Degree, usize>,
    pub rank_q01: BTreeMap<Degree, usize>,
}

pub fn module_invariants(m: &EModule) -> ModuleInvariants {
    let r = m.reduce_rho_tau();
    let key = |d: Degree| match m.variant {
        Variant::Classical => Degree::new(d.stem, 0),
        Variant::Equivariant => d,
    };
    let mut by_deg: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
    for (j, b) in r.basis.iter().enumerate() {
        by_deg.entry(key(b.degree)).or_default().push(j);
    }
    let rank_of = |ops: &[usize]| {
        let mut out = BTreeMap::new();
        for (d, js) in &by_deg {
            let cols: Vec<F2Vec> = js
                .iter()
                .map(|&j| {
                    let img = r.apply_seq(j, ops);
                    F2Vec::from_support(r.rank(), &img.keys().copied().collect::<Vec<_>>())
                })
                .collect();
            let rk = F2Matrix::from_columns(r.rank(), &cols).rank();
            if rk > 0 {
                out.insert(*d, rk);
            }
        }
        out
    };
    ModuleInvariants {
        series: m.poincare_series(),
        rank_q0: rank_of(&[0]),
        rank_q1: rank_of(&[1]),
        rank_q01: rank_of(&[0, 1]),
    }
}

/// Result of splitting off free summands.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub reduced: EModule,
    /// Degrees of the top generators of the free summands.
    pub free_part: PoincareSeries,
}

/// Splits `M ≅ reduced ⊕ free` where `free` is a sum of free rank-one modules.
///
/// Works on the `(ρ,τ)`-reduction. A vector `v` with `v·Q_top ≠ 0` generates a
/// free summand; the retraction `m ↦ Σ_S λ(m·Q_S)·v·Q_{S^c}` for a functional
/// `λ` with `λ(v·Q_top) = 1` is a module map, and its kernel is a complement.
pub fn split_free_summands(m: &EModule) -> Result<Splitting> {
    if m.variant == Variant::Equivariant && !m.has_unit_coefficients() {
        return Err(Error::InvalidModule(
            "splitting needs unit coefficients on an M2-free basis".into(),
        ));
    }
    let ops_top: Vec<usize> = (0..=m.height as usize).collect();
    let subsets: Vec<Vec<usize>> = match m.height {
        0 => vec![vec![], vec![0]],
        _ => vec![vec![], vec![0], vec![1], vec![0, 1]],
    };
    let complement = |s: &[usize]| -> Vec<usize> {
        ops_top.iter().copied().filter(|i| !s.contains(i)).collect()
    };

    // Current module as an explicit vector-space presentation: basis vectors in the
    // ambient coordinates of `m`.
    let r = m.reduce_rho_tau();
    let n = r.rank();
    let apply = |v: &F2Vec, ops: &[usize]| -> F2Vec {
        let mut out = F2Vec::zero(n);
        for j in v.support() {
            for (t, _) in r.apply_seq(j, ops) {
                out.flip(t);
            }
        }
        out
    };
    let key = |d: Degree| match m.variant {
        Variant::Classical => Degree::new(d.stem, 0),
        Variant::Equivariant => d,
    };
    let degrees: Vec<Degree> = r.basis.iter().map(|b| key(b.degree)).collect();
    let vec_degree = |v: &F2Vec| v.first_one().map(|j| degrees[j]);

    let mut current: Vec<F2Vec> = (0..n).map(|j| F2Vec::unit(n, j)).collect();
    let mut free_part = PoincareSeries::new();
    loop {
        // Homogeneous vectors only: each current vector is homogeneous by construction.
        let Some(v) = current
            .iter()
            .find(|v| !apply(v, &ops_top).is_zero())
            .cloned()
        else {
            break;
        };
        let top = apply(&v, &ops_top);
        let top_deg = vec_degree(&top).expect("nonzero");
        *free_part.entry(vec_degree(&v).expect("nonzero")).or_default() += 1;
        // λ: a coordinate functional on the current span, homogeneous of degree top_deg,
        // with λ(top) = 1. Express vectors in the current basis first.
        let basis_mat = F2Matrix::from_columns(n, &current);
        let coords = |x: &F2Vec| -> F2Vec {
            basis_mat
                .solve(x)
                .expect("lengths agree")
                .expect("submodule is closed")
        };
        let top_coords = coords(&top);
        let pivot = top_coords
            .support()
            .into_iter()
            .find(|&c| vec_degree(&current[c]) == Some(top_deg))
            .expect("top vector has a coordinate in its own degree");
        let lambda = |x: &F2Vec| -> bool {
            if x.is_zero() {
                return false;
            }
            coords(x).get(pivot)
        };
        let images: Vec<(Vec<usize>, F2Vec)> = subsets
            .iter()
            .map(|s| (s.clone(), apply(&v, &complement(s))))
            .collect();
        let retract = |x: &F2Vec| -> F2Vec {
            let mut out = F2Vec::zero(n);
            for (s, img) in &images {
                if lambda(&apply(x, s)) {
                    out.add_assign(img);
                }
            }
            out
        };
        // Kernel of the retraction on the current span, kept homogeneous.
        let mut by_deg: BTreeMap<Degree, Vec<F2Vec>> = BTreeMap::new();
        for c in &current {
            by_deg.entry(vec_degree(c).expect("basis vectors are nonzero")).or_default().push(c.clone());
        }
        let mut next = Vec::new();
        for vs in by_deg.values() {
            let images: Vec<F2Vec> = vs.iter().map(|x| retract(x)).collect();
            let rmat = F2Matrix::from_columns(n, &images);
            for kv in rmat.kernel_basis() {
                let mut x = F2Vec::zero(n);
                for c in kv.support() {
                    x.add_assign(&vs[c]);
                }
                next.push(x);
            }
        }
        if next.len() + subsets.len() != current.len() {
            return Err(Error::InvalidModule("free summand did not split".into()));
        }
        current = next;
    }
    // Build the reduced module on `current`.
    let mut b = ModuleBuilder::new(m.variant, m.height);
    let name_of = |v: &F2Vec| -> String {
        v.support()
            .iter()
            .map(|&j| r.basis[j].name.clone())
            .collect::<Vec<_>>()
            .join("+")
    };
    let mut sorted = current.clone();
    sorted.sort_by_key(|v| (vec_degree(v), v.support()));
    for v in &sorted {
        let j = v.first_one().expect("nonzero");
        b.add(name_of(v), r.basis[j].degree);
    }
    let span = F2Matrix::from_columns(n, &sorted);
    for i in 0..=m.height as usize {
        for (j, v) in sorted.iter().enumerate() {
            let img = apply(v, &[i]);
            if img.is_zero() {
                continue;
            }
            let c = span
                .solve(&img)
                .expect("lengths agree")
                .ok_or_else(|| Error::InvalidModule("complement is not a submodule".into()))?;
            for t in c.support() {
                b.q(i, j, t);
            }
        }
    }
    Ok(Splitting {
        reduced: b.build()?,
        free_part,
    })
}

/// Rank check used by tests and splitting: the subspace spanned by a module's basis.
pub fn span_dimension(vectors: &[F2Vec], dim: usize) -> usize {
    let mut s = Subspace::new(dim);
    for v in vectors {
        s.add(v);
    }
    s.dimension()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flash_ranks() {
        assert_eq!(lightning_flash(0, Variant::Equivariant).rank(), 1);
        assert_eq!(lightning_flash(1, Variant::Equivariant).rank(), 3);
        assert_eq!(lightning_flash(4, Variant::Equivariant).rank(), 9);
    }

    #[test]
    fn flash_four_positions() {
        let mut degs: Vec<(i32, i32)> = lightning_flash(4, Variant::Equivariant)
            .degrees()
            .iter()
            .map(|d| (d.stem, d.weight))
            .collect();
        degs.sort();
        assert_eq!(
            degs,
            vec![(0, 0), (2, 1), (3, 1), (4, 2), (5, 2), (6, 3), (7, 3), (8, 4), (9, 4)]
        );
    }

    #[test]
    fn suspension_moves_bottom() {
        let l = suspend(&lightning_flash(1, Variant::Equivariant), Degree::rho_rep());
        let bottom = l.basis.iter().find(|b| b.name == "x1Q1").unwrap();
        assert_eq!(bottom.degree, Degree::new(2, 1));
    }

    #[test]
    fn free_splits_completely() {
        let f = free_module(1, Variant::Equivariant, Degree::new(4, 1));
        let s = split_free_summands(&f).unwrap();
        assert_eq!(s.reduced.rank(), 0);
        assert_eq!(s.free_part.values().sum::<usize>(), 1);
    }

    #[test]
    fn flash_has_no_free_summand() {
        let l = lightning_flash(3, Variant::Classical);
        let s = split_free_summands(&l).unwrap();
        assert_eq!(s.reduced.rank(), 7);
        assert!(s.free_part.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let l = lightning_flash(2, Variant::Equivariant);
        assert_eq!(EModule::from_json(&l.to_json()).unwrap(), l);
    }

    #[test]
    fn rejects_bad_square() {
        let mut b = ModuleBuilder::new(Variant::Classical, 1);
        let x = b.add("x", Degree::new(2, 0));
        let y = b.add("y", Degree::new(1, 0));
        let z = b.add("z", Degree::new(0, 0));
        b.q(0, x, y).q(0, y, z);
        assert!(b.build().is_err());
    }
}
