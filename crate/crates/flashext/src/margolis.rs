//! Margolis homology, freeness, and stable equivalence of `E(1)`-modules.
//!
//! Everything is computed on the `(ρ,τ)`-reduction, where each `Q_i` is an
//! F2-linear square-zero operator.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::emod::{q_degree, EModule, Variant};
use crate::error::{Error, Result};
use crate::f2core::{F2Matrix, F2Vec, Subspace};
use crate::grading::{Degree, M2Element};

/// Margolis homology `H(M/(ρ,τ); Q_i)`.
#[derive(Clone, Debug, Serialize)]
pub struct MargolisResult {
    pub operator: usize,
    pub dims: BTreeMap<Degree, usize>,
    /// Cycle representatives in module coordinates, per degree.
    #[serde(skip)]
    pub representatives: BTreeMap<Degree, Vec<F2Vec>>,
    /// Representatives rendered as sums of basis names.
    pub representative_names: BTreeMap<String, Vec<String>>,
}

impl MargolisResult {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }
}

fn grade_key(m: &EModule, d: Degree) -> Degree {
    match m.variant {
        Variant::Classical => Degree::new(d.stem, 0),
        Variant::Equivariant => d,
    }
}

fn indices_by_degree(m: &EModule) -> BTreeMap<Degree, Vec<usize>> {
    let mut out: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
    for (j, b) in m.basis.iter().enumerate() {
        out.entry(grade_key(m, b.degree)).or_default().push(j);
    }
    out
}

fn render(m: &EModule, v: &F2Vec) -> String {
    v.support()
        .iter()
        .map(|&j| m.basis[j].name.clone())
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Per-degree homology of `Q_i` on the `(ρ,τ)`-reduction of `M`.
pub fn margolis_homology(m: &EModule, i: usize) -> MargolisResult {
    let q = m.q_matrix(i);
    let n = m.rank();
    let by_deg = indices_by_degree(m);
    let mut dims = BTreeMap::new();
    let mut reps = BTreeMap::new();
    let mut names = BTreeMap::new();
    let shift = grade_key(m, q_degree(i));
    for (d, js) in &by_deg {
        // Cycles in degree d.
        let cols: Vec<F2Vec> = js.iter().map(|&j| q.column(j)).collect();
        let qmat = F2Matrix::from_columns(n, &cols);
        let cycles: Vec<F2Vec> = qmat
            .kernel_basis()
            .into_iter()
            .map(|k| {
                let mut v = F2Vec::zero(n);
                for c in k.support() {
                    v.flip(js[c]);
                }
                v
            })
            .collect();
        // Boundaries from degree d + |Q_i|.
        let mut bounds = Subspace::new(n);
        if let Some(src) = by_deg.get(&(*d + shift)) {
            for &j in src {
                bounds.add(&q.column(j));
            }
        }
        let mut chosen = Vec::new();
        for c in cycles {
            if bounds.add(&c) {
                chosen.push(c);
            }
        }
        if !chosen.is_empty() {
            dims.insert(*d, chosen.len());
            names.insert(
                d.to_string(),
                chosen.iter().map(|v| render(m, v)).collect(),
            );
            reps.insert(*d, chosen);
        }
    }
    MargolisResult {
        operator: i,
        dims,
        representatives: reps,
        representative_names: names,
    }
}

/// Free iff every Margolis homology vanishes (for equivariant modules the basis
/// is `M2`-free by construction).
pub fn is_free(m: &EModule) -> bool {
    (0..=m.height as usize).all(|i| margolis_homology(m, i).is_zero())
}

/// Reduces a coefficient matrix (rows indexed by `N`, columns by `M`) mod `(ρ,τ)`.
fn reduce_map(f: &[Vec<M2Element>], rows: usize, cols: usize) -> Result<F2Matrix> {
    if f.len() != rows || f.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            found: f.iter().map(Vec::len).sum(),
        });
    }
    Ok(F2Matrix::from_fn(rows, cols, |i, j| f[i][j].reduce_rho_tau()))
}

/// Checks that `f` commutes with `Q_0` and `Q_1` after reduction, and has degree zero.
pub fn check_module_map(f: &[Vec<M2Element>], m: &EModule, n: &EModule) -> Result<F2Matrix> {
    let fm = reduce_map(f, n.rank(), m.rank())?;
    for (i, row) in f.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            for t in c.terms() {
                let d = grade_key(m, m.basis[j].degree);
                let e = grade_key(n, n.basis[i].degree + t.degree());
                if d != e {
                    return Err(Error::NotEquivariant(format!(
                        "entry ({i},{j}) does not have degree zero"
                    )));
                }
            }
        }
    }
    for i in 0..=m.height.max(n.height) as usize {
        let lhs = fm.mul(&m.q_matrix(i))?;
        let rhs = n.q_matrix(i).mul(&fm)?;
        if lhs != rhs {
            return Err(Error::NotEquivariant(format!("map does not commute with Q{i}")));
        }
    }
    Ok(fm)
}

/// `f` is a stable equivalence iff it induces isomorphisms on all Margolis homologies.
pub fn stable_equivalent(f: &[Vec<M2Element>], m: &EModule, n: &EModule) -> Result<bool> {
    let fm = check_module_map(f, m, n)?;
    for i in 0..=m.height.max(n.height) as usize {
        let hm = margolis_homology(m, i);
        let hn = margolis_homology(n, i);
        if hm.dims != hn.dims {
            return Ok(false);
        }
        let qn = n.q_matrix(i);
        let by_deg = indices_by_degree(n);
        let shift = grade_key(n, q_degree(i));
        for (d, reps) in &hm.representatives {
            let mut bounds = Subspace::new(n.rank());
            if let Some(src) = by_deg.get(&(*d + shift)) {
                for &j in src {
                    bounds.add(&qn.column(j));
                }
            }
            let base = bounds.dimension();
            for r in reps {
                bounds.add(&fm.mul_vec(r)?);
            }
            if bounds.dimension() - base != reps.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Convolution of two graded dimension tables (the Künneth formula for Margolis homology).
pub fn convolve(a: &BTreeMap<Degree, usize>, b: &BTreeMap<Degree, usize>) -> BTreeMap<Degree, usize> {
    let mut out = BTreeMap::new();
    for (da, ca) in a {
        for (db, cb) in b {
            *out.entry(*da + *db).or_default() += ca * cb;
        }
    }
    out.retain(|_, v| *v > 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emod::{free_module, lightning_flash};

    #[test]
    fn free_is_acyclic() {
        let f = free_module(1, Variant::Equivariant, Degree::new(4, 1));
        assert!(margolis_homology(&f, 0).is_zero());
        assert!(margolis_homology(&f, 1).is_zero());
        assert!(is_free(&f));
    }

    #[test]
    fn flash_homology() {
        let l = lightning_flash(2, Variant::Equivariant);
        let h0 = margolis_homology(&l, 0);
        let h1 = margolis_homology(&l, 1);
        assert_eq!(h0.total(), 1);
        assert_eq!(h1.total(), 1);
        assert_eq!(h0.representative_names.values().next().unwrap(), &vec!["x1Q1".to_string()]);
        assert_eq!(h1.representative_names.values().next().unwrap(), &vec!["x2Q0".to_string()]);
        assert!(!is_free(&l));
    }

    #[test]
    fn identity_and_zero_maps() {
        let l = lightning_flash(1, Variant::Equivariant);
        let n = l.rank();
        let id: Vec<Vec<M2Element>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { M2Element::one() } else { M2Element::zero() }).collect())
            .collect();
        assert!(stable_equivalent(&id, &l, &l).unwrap());
        let zero = vec![vec![M2Element::zero(); n]; n];
        assert!(!stable_equivalent(&zero, &l, &l).unwrap());
    }
}
