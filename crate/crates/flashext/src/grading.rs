//! Degrees, windows, and the coefficient ring `M2 = H_★(pt; F2)` of the C2-equivariant point.
//!
//! Degrees use the motivic `(stem, weight)` convention. The representation
//! `a + bσ` has stem `a + b` and weight `b`, so `ρ = 1 + σ` suspends by `(2, 1)`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A bigraded position `(stem, weight)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree {
    pub stem: i32,
    pub weight: i32,
}

impl Degree {
    pub const ZERO: Degree = Degree { stem: 0, weight: 0 };

    pub const fn new(stem: i32, weight: i32) -> Self {
        Degree { stem, weight }
    }

    /// The degree of the representation `a·1 + b·σ`.
    pub const fn ro(a: i32, b: i32) -> Self {
        Degree {
            stem: a + b,
            weight: b,
        }
    }

    /// Suspension by the regular representation `ρ = 1 + σ`.
    pub const fn rho_rep() -> Self {
        Degree::ro(1, 1)
    }

    pub const fn sigma_rep() -> Self {
        Degree::ro(0, 1)
    }

    /// `n·ρ`.
    pub const fn rho_times(n: i32) -> Self {
        Degree {
            stem: 2 * n,
            weight: n,
        }
    }

    /// Milnor–Witt degree, stem minus weight.
    pub const fn milnor_witt(&self) -> i32 {
        self.stem - self.weight
    }

    /// Places this degree in Ext filtration `f`.
    pub const fn at_filtration(&self, f: i32) -> ExtDegree {
        ExtDegree {
            stem: self.stem,
            filtration: f,
            weight: self.weight,
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.stem + o.stem, self.weight + o.weight)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree::new(self.stem - o.stem, self.weight - o.weight)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.stem, -self.weight)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.stem, self.weight)
    }
}

/// A trigraded Ext position `(stem, filtration, weight)`.
///
/// Filtration is signed so that offsets between positions are themselves
/// `ExtDegree`s; positions of actual classes always have `filtration >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtDegree {
    pub stem: i32,
    pub filtration: i32,
    pub weight: i32,
}

impl ExtDegree {
    pub const ZERO: ExtDegree = ExtDegree::new(0, 0, 0);

    pub const fn new(stem: i32, filtration: i32, weight: i32) -> Self {
        ExtDegree {
            stem,
            filtration,
            weight,
        }
    }

    pub const fn bigraded(&self) -> Degree {
        Degree::new(self.stem, self.weight)
    }

    /// Shift by an internal suspension `Σ^d` (filtration unchanged).
    pub const fn shift(&self, d: Degree) -> Self {
        ExtDegree::new(self.stem + d.stem, self.filtration, self.weight + d.weight)
    }
}

impl Add for ExtDegree {
    type Output = ExtDegree;
    fn add(self, o: ExtDegree) -> ExtDegree {
        ExtDegree::new(
            self.stem + o.stem,
            self.filtration + o.filtration,
            self.weight + o.weight,
        )
    }
}

impl Sub for ExtDegree {
    type Output = ExtDegree;
    fn sub(self, o: ExtDegree) -> ExtDegree {
        ExtDegree::new(
            self.stem - o.stem,
            self.filtration - o.filtration,
            self.weight - o.weight,
        )
    }
}

impl fmt::Display for ExtDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.stem, self.filtration, self.weight)
    }
}

/// Which cone of `M2` a monomial (or chart class) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    Positive,
    Negative,
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cone::Positive => write!(f, "pos"),
            Cone::Negative => write!(f, "neg"),
        }
    }
}

/// A basis monomial of `M2`: either `ρ^a τ^b` or `γ/(ρ^a τ^b)` with `b >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct M2Monomial {
    pub cone: Cone,
    pub rho_exp: u32,
    pub tau_exp: u32,
}

impl M2Monomial {
    pub const ONE: M2Monomial = M2Monomial::positive(0, 0);
    pub const RHO: M2Monomial = M2Monomial::positive(1, 0);
    pub const TAU: M2Monomial = M2Monomial::positive(0, 1);

    pub const fn positive(rho_exp: u32, tau_exp: u32) -> Self {
        M2Monomial {
            cone: Cone::Positive,
            rho_exp,
            tau_exp,
        }
    }

    /// `γ/(ρ^a τ^b)`; returns `None` when `b = 0`, which is not a class.
    pub fn negative(rho_exp: u32, tau_exp: u32) -> Option<Self> {
        (tau_exp >= 1).then_some(M2Monomial {
            cone: Cone::Negative,
            rho_exp,
            tau_exp,
        })
    }

    pub fn degree(&self) -> Degree {
        let a = self.rho_exp as i32;
        let b = self.tau_exp as i32;
        match self.cone {
            Cone::Positive => Degree::new(-a, -a - b),
            Cone::Negative => Degree::new(a, 1 + a + b),
        }
    }

    /// Product of two monomials; `None` means zero.
    pub fn multiply(&self, other: &M2Monomial) -> Option<M2Monomial> {
        match (self.cone, other.cone) {
            (Cone::Positive, Cone::Positive) => Some(M2Monomial::positive(
                self.rho_exp + other.rho_exp,
                self.tau_exp + other.tau_exp,
            )),
            (Cone::Negative, Cone::Negative) => None,
            (Cone::Positive, Cone::Negative) => divide(other, self),
            (Cone::Negative, Cone::Positive) => divide(self, other),
        }
    }
}

fn divide(neg: &M2Monomial, pos: &M2Monomial) -> Option<M2Monomial> {
    let a = neg.rho_exp.checked_sub(pos.rho_exp)?;
    let b = neg.tau_exp.checked_sub(pos.tau_exp)?;
    M2Monomial::negative(a, b)
}

impl fmt::Display for M2Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |f: &mut fmt::Formatter<'_>, s: &str, e: u32| -> fmt::Result {
            match e {
                0 => Ok(()),
                1 => write!(f, "{s}"),
                _ => write!(f, "{s}^{e}"),
            }
        };
        match self.cone {
            Cone::Positive => {
                if self.rho_exp == 0 && self.tau_exp == 0 {
                    return write!(f, "1");
                }
                pow(f, "rho", self.rho_exp)?;
                if self.rho_exp > 0 && self.tau_exp > 0 {
                    write!(f, " ")?;
                }
                pow(f, "tau", self.tau_exp)
            }
            Cone::Negative => {
                write!(f, "gamma/(")?;
                pow(f, "rho", self.rho_exp)?;
                if self.rho_exp > 0 {
                    write!(f, " ")?;
                }
                pow(f, "tau", self.tau_exp)?;
                write!(f, ")")
            }
        }
    }
}

/// The unique `M2` basis monomial in degree `d`, if any.
pub fn m2_basis_in_degree(d: Degree) -> Option<M2Monomial> {
    if d.stem <= 0 && d.weight <= d.stem {
        let a = -d.stem;
        let b = d.stem - d.weight;
        return Some(M2Monomial::positive(a as u32, b as u32));
    }
    if d.stem >= 0 && d.weight >= d.stem + 2 {
        let a = d.stem;
        let b = d.weight - 1 - a;
        return M2Monomial::negative(a as u32, b as u32);
    }
    None
}

/// A formal F2-sum of `M2` monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct M2Element {
    terms: BTreeSet<M2Monomial>,
}

impl M2Element {
    pub fn zero() -> Self {
        M2Element::default()
    }

    pub fn one() -> Self {
        M2Element::from(M2Monomial::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains(&M2Monomial::ONE)
    }

    pub fn terms(&self) -> impl Iterator<Item = &M2Monomial> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: M2Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &M2Element) -> M2Element {
        let mut out = self.clone();
        for t in &other.terms {
            out.add_term(*t);
        }
        out
    }

    pub fn multiply(&self, other: &M2Element) -> M2Element {
        let mut out = M2Element::zero();
        for a in &self.terms {
            for b in &other.terms {
                if let Some(c) = a.multiply(b) {
                    out.add_term(c);
                }
            }
        }
        out
    }

    /// Reduction modulo `(ρ, τ)`: keeps only the unit coefficient.
    pub fn reduce_rho_tau(&self) -> bool {
        self.terms.contains(&M2Monomial::ONE)
    }
}

impl From<M2Monomial> for M2Element {
    fn from(m: M2Monomial) -> Self {
        let mut e = M2Element::zero();
        e.add_term(m);
        e
    }
}

impl fmt::Display for M2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite box of Ext positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub stem_min: i32,
    pub stem_max: i32,
    pub filtration_max: i32,
    pub weight_min: i32,
    pub weight_max: i32,
}

impl Window {
    pub fn new(stem_min: i32, stem_max: i32, filtration_max: i32, weight_min: i32, weight_max: i32) -> Self {
        let w = Window {
            stem_min,
            stem_max,
            filtration_max,
            weight_min,
            weight_max,
        };
        assert!(w.is_nonempty(), "empty window {w:?}");
        w
    }

    pub fn is_nonempty(&self) -> bool {
        self.stem_min <= self.stem_max && self.filtration_max >= 0 && self.weight_min <= self.weight_max
    }

    pub fn contains(&self, d: ExtDegree) -> bool {
        (self.stem_min..=self.stem_max).contains(&d.stem)
            && (0..=self.filtration_max).contains(&d.filtration)
            && (self.weight_min..=self.weight_max).contains(&d.weight)
    }

    pub fn contains_bigraded(&self, stem: i32, filtration: i32) -> bool {
        (self.stem_min..=self.stem_max).contains(&stem) && (0..=self.filtration_max).contains(&filtration)
    }

    /// The window seen from a chart suspended by `-d`: `c ∈ self` iff `c - d ∈ self.translate(-d)`.
    pub fn translate(&self, d: ExtDegree) -> Window {
        Window {
            stem_min: self.stem_min + d.stem,
            stem_max: self.stem_max + d.stem,
            filtration_max: self.filtration_max + d.filtration,
            weight_min: self.weight_min + d.weight,
            weight_max: self.weight_max + d.weight,
        }
    }

    /// Enlarge in every direction.
    pub fn grow(&self, stem: i32, filtration: i32, weight: i32) -> Window {
        Window {
            stem_min: self.stem_min - stem,
            stem_max: self.stem_max + stem,
            filtration_max: self.filtration_max + filtration,
            weight_min: self.weight_min - weight,
            weight_max: self.weight_max + weight,
        }
    }

    pub fn union(&self, o: &Window) -> Window {
        Window {
            stem_min: self.stem_min.min(o.stem_min),
            stem_max: self.stem_max.max(o.stem_max),
            filtration_max: self.filtration_max.max(o.filtration_max),
            weight_min: self.weight_min.min(o.weight_min),
            weight_max: self.weight_max.max(o.weight_max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_degrees() {
        assert_eq!(m2_basis_in_degree(Degree::new(0, -1)), Some(M2Monomial::TAU));
        assert_eq!(m2_basis_in_degree(Degree::new(-1, -1)), Some(M2Monomial::RHO));
        assert_eq!(
            m2_basis_in_degree(Degree::new(1, 3)),
            M2Monomial::negative(1, 1)
        );
        assert_eq!(m2_basis_in_degree(Degree::new(0, 1)), None);
    }

    #[test]
    fn division_rules() {
        let g2 = M2Monomial::negative(0, 2).unwrap();
        let g1 = M2Monomial::negative(0, 1).unwrap();
        assert_eq!(M2Monomial::TAU.multiply(&g2), Some(g1));
        assert_eq!(M2Monomial::TAU.multiply(&g1), None);
        assert_eq!(g1.multiply(&g1), None);
    }

    #[test]
    fn ro_notation() {
        assert_eq!(Degree::rho_rep(), Degree::new(2, 1));
        assert_eq!(Degree::sigma_rep(), Degree::new(1, 1));
        assert_eq!(Degree::ro(1, 0), Degree::new(1, 0));
    }
}
