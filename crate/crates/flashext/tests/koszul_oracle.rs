//! Classical `Ext_{E(1)}(L(k), L(m))` from the Koszul complex `Hom(L(k), L(m)) ⊗ F2[v0, v1]`
//! with `d(φ) = v0 [Q0, φ] + v1 [Q1, φ]`, compared with the resolution engine and the
//! closed form. The oracle builds its own flash modules and shares nothing with the
//! library beyond the F2 linear algebra.

use std::collections::{BTreeMap, HashMap};

use flashext::emod::span_dimension;
use flashext::ext_classical::{closed_form_classical, compare_charts, ext_flashes, ChartSignature};
use flashext::{F2Matrix, F2Vec};

const S_MIN: i32 = -14;
const S_MAX: i32 = 14;
const F_MAX: i32 = 12;

/// A classical flash: degrees and the two operators as lists of targets.
struct Flash {
    deg: Vec<i32>,
    q: [Vec<Vec<usize>>; 2],
}

fn flash(k: usize) -> Flash {
    if k == 0 {
        return Flash {
            deg: vec![0],
            q: [vec![vec![]], vec![vec![]]],
        };
    }
    // x_1..x_k at 0..k, x_iQ0 at k..2k, x_1Q1 at 2k.
    let mut deg = Vec::new();
    deg.extend((1..=k).map(|i| 2 * i as i32 + 1));
    deg.extend((1..=k).map(|i| 2 * i as i32));
    deg.push(0);
    let n = deg.len();
    let mut q0 = vec![vec![]; n];
    let mut q1 = vec![vec![]; n];
    for i in 0..k {
        q0[i] = vec![k + i];
        q1[i] = if i == 0 { vec![2 * k] } else { vec![k + i - 1] };
    }
    Flash { deg, q: [q0, q1] }
}

/// `(v0 exponent, v1 exponent, source index, target index)`.
type Cell = (u32, u32, usize, usize);

struct Koszul {
    cells: BTreeMap<(i32, i32), Vec<Cell>>,
    index: HashMap<Cell, usize>,
}

impl Koszul {
    fn new(m: &Flash, n: &Flash) -> Koszul {
        let mut cells: BTreeMap<(i32, i32), Vec<Cell>> = BTreeMap::new();
        for f in 0..=F_MAX + 4 {
            for j in 0..=f {
                let i = f - j;
                for (a, da) in m.deg.iter().enumerate() {
                    for (b, db) in n.deg.iter().enumerate() {
                        let s = db - da + 2 * j;
                        if (S_MIN - 4..=S_MAX + 8).contains(&s) {
                            cells.entry((s, f)).or_default().push((i as u32, j as u32, a, b));
                        }
                    }
                }
            }
        }
        let mut index = HashMap::new();
        for v in cells.values() {
            for (p, c) in v.iter().enumerate() {
                index.insert(*c, p);
            }
        }
        Koszul { cells, index }
    }

    fn dim(&self, s: i32, f: i32) -> usize {
        self.cells.get(&(s, f)).map_or(0, Vec::len)
    }

    fn vec_of(&self, s: i32, f: i32, terms: &[Cell]) -> F2Vec {
        let mut v = F2Vec::zero(self.dim(s, f));
        for t in terms {
            v.flip(self.index[t]);
        }
        v
    }

    /// `d` out of `(s, f)` as columns in `(s − 1, f + 1)`.
    fn d(&self, m: &Flash, n: &Flash, s: i32, f: i32) -> Vec<F2Vec> {
        let src = self.cells.get(&(s, f)).cloned().unwrap_or_default();
        src.iter()
            .map(|&(i, j, a, b)| {
                let mut terms = Vec::new();
                for op in 0..2 {
                    let (ni, nj) = if op == 0 { (i + 1, j) } else { (i, j + 1) };
                    for &t in &n.q[op][b] {
                        terms.push((ni, nj, a, t));
                    }
                    for c in 0..m.deg.len() {
                        if m.q[op][c].contains(&a) {
                            terms.push((ni, nj, c, b));
                        }
                    }
                }
                self.vec_of(s - 1, f + 1, &terms)
            })
            .collect()
    }
}

struct Homology {
    cycles: BTreeMap<(i32, i32), Vec<F2Vec>>,
    boundaries: BTreeMap<(i32, i32), Vec<F2Vec>>,
}

fn homology(m: &Flash, n: &Flash, k: &Koszul) -> Homology {
    let mut cycles = BTreeMap::new();
    let mut boundaries = BTreeMap::new();
    for s in S_MIN - 2..=S_MAX + 6 {
        for f in 0..=F_MAX + 3 {
            let cols = k.d(m, n, s, f);
            let mat = F2Matrix::from_columns(k.dim(s - 1, f + 1), &cols);
            cycles.insert((s, f), mat.kernel_basis());
            if f > 0 {
                boundaries.insert((s, f), k.d(m, n, s + 1, f - 1));
            }
        }
    }
    Homology { cycles, boundaries }
}

/// Multiplies by `v0^a v1^b` in the complex.
fn mult(k: &Koszul, s: i32, f: i32, x: &F2Vec, a: u32, b: u32) -> F2Vec {
    let src = &k.cells[&(s, f)];
    let terms: Vec<Cell> = x.support().into_iter().map(|p| {
        let (i, j, u, w) = src[p];
        (i + a, j + b, u, w)
    }).collect();
    k.vec_of(s + 2 * b as i32, f + (a + b) as i32, &terms)
}

fn rank_into(h: &Homology, k: &Koszul, s: i32, f: i32, images: Vec<F2Vec>) -> usize {
    let bd = h.boundaries.get(&(s, f)).cloned().unwrap_or_default();
    let dim = k.dim(s, f);
    let base = span_dimension(&bd, dim);
    let mut all = bd;
    all.extend(images);
    span_dimension(&all, dim) - base
}

fn oracle_signature(km: usize, mm: usize) -> ChartSignature {
    let (m, n) = (flash(km), flash(mm));
    let k = Koszul::new(&m, &n);
    let h = homology(&m, &n, &k);
    let inside = |s: i32, f: i32| (S_MIN..=S_MAX).contains(&s) && (0..=F_MAX).contains(&f);
    let mut sig = ChartSignature {
        dims: BTreeMap::new(),
        monomial_ranks: BTreeMap::new(),
        joint_ranks: BTreeMap::new(),
    };
    for s in S_MIN..=S_MAX {
        for f in 0..=F_MAX {
            let z = &h.cycles[&(s, f)];
            let d = rank_into(&h, &k, s, f, z.clone());
            if d == 0 {
                continue;
            }
            sig.dims.insert((s, f), d);
            for a in 0..=3u32 {
                for b in 0..=(3 - a) {
                    let (ts, tf) = (s + 2 * b as i32, f + (a + b) as i32);
                    if a + b == 0 || !inside(ts, tf) {
                        continue;
                    }
                    let imgs = z.iter().map(|x| mult(&k, s, f, x, a, b)).collect();
                    let r = rank_into(&h, &k, ts, tf, imgs);
                    if r > 0 {
                        sig.monomial_ranks.insert((s, f, a, b), r);
                    }
                }
            }
        }
    }
    for s in S_MIN..=S_MAX {
        for f in 1..=F_MAX {
            let mut imgs: Vec<F2Vec> = h.cycles[&(s, f - 1)].iter().map(|x| mult(&k, s, f - 1, x, 1, 0)).collect();
            imgs.extend(h.cycles[&(s - 2, f - 1)].iter().map(|x| mult(&k, s - 2, f - 1, x, 0, 1)));
            let r = rank_into(&h, &k, s, f, imgs);
            if r > 0 && sig.dims.contains_key(&(s, f)) {
                sig.joint_ranks.insert((s, f), r);
            }
        }
    }
    sig
}

fn first_difference(a: &ChartSignature, b: &ChartSignature) -> Option<String> {
    if a.dims != b.dims {
        let key = a.dims.keys().chain(b.dims.keys()).find(|k| a.dims.get(k) != b.dims.get(k));
        return Some(format!("dims differ at {key:?}"));
    }
    if a.monomial_ranks != b.monomial_ranks {
        let key = a
            .monomial_ranks
            .keys()
            .chain(b.monomial_ranks.keys())
            .find(|k| a.monomial_ranks.get(k) != b.monomial_ranks.get(k));
        return Some(format!("monomial ranks differ at {key:?}"));
    }
    (a.joint_ranks != b.joint_ranks).then(|| "joint ranks differ".to_string())
}

#[test]
fn koszul_unit_is_polynomial() {
    let sig = oracle_signature(0, 0);
    for s in S_MIN..=S_MAX {
        for f in 0..=F_MAX {
            let expect = usize::from(s >= 0 && s % 2 == 0 && s / 2 <= f);
            assert_eq!(sig.dims.get(&(s, f)).copied().unwrap_or(0), expect, "({s},{f})");
        }
    }
}

#[test]
fn koszul_oracle_matches_engine_and_closed_form() {
    for k in 0..=6 {
        for m in 0..=6 {
            let oracle = oracle_signature(k, m);
            let engine = ext_flashes(k, m, S_MIN, S_MAX, F_MAX as usize).unwrap();
            let closed = closed_form_classical(k, m, S_MIN, S_MAX, F_MAX);
            assert_eq!(first_difference(&oracle, &engine.signature()), None, "engine ({k},{m})");
            assert_eq!(first_difference(&oracle, &closed.signature()), None, "closed form ({k},{m})");
            compare_charts(&engine, &closed).unwrap();
        }
    }
}
