//! Monomials of the C2-equivariant dual Steenrod algebra and its quotients `A//E(n)_★`.
//!
//! A monomial is `ξ̄_1^{e_1} ξ̄_2^{e_2} ⋯ τ̄_0^{ε_0} τ̄_1^{ε_1} ⋯` with every `ε_i ≤ 1`.
//! Such admissible monomials form an `M2`-basis, so the relation on `τ̄_i²` is never
//! expanded. The Milnor primitives act on the right as derivations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::Degree;

/// An admissible monomial `ξ̄^I τ̄^ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SteenrodMonomial {
    /// `xi_exps[i - 1]` is the exponent of `ξ̄_i`.
    pub xi_exps: Vec<u32>,
    /// `tau_flags[i]` is the exponent of `τ̄_i`.
    pub tau_flags: Vec<bool>,
}

impl SteenrodMonomial {
    pub fn one() -> Self {
        SteenrodMonomial {
            xi_exps: Vec::new(),
            tau_flags: Vec::new(),
        }
    }

    pub fn new(mut xi_exps: Vec<u32>, mut tau_flags: Vec<bool>) -> Self {
        while xi_exps.last() == Some(&0) {
            xi_exps.pop();
        }
        while tau_flags.last() == Some(&false) {
            tau_flags.pop();
        }
        SteenrodMonomial { xi_exps, tau_flags }
    }

    /// `ξ̄_i^e` for `i ≥ 1`.
    pub fn xi(i: usize, e: u32) -> Self {
        assert!(i >= 1, "xi index starts at 1");
        let mut xi = vec![0; i];
        xi[i - 1] = e;
        SteenrodMonomial::new(xi, Vec::new())
    }

    pub fn tau(i: usize) -> Self {
        let mut t = vec![false; i + 1];
        t[i] = true;
        SteenrodMonomial::new(Vec::new(), t)
    }

    pub fn xi_exp(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.xi_exps.get(i - 1).copied().unwrap_or(0)
    }

    pub fn has_tau(&self, i: usize) -> bool {
        self.tau_flags.get(i).copied().unwrap_or(false)
    }

    /// Product of two monomials, or `None` if it would contain some `τ̄_i²`.
    pub fn multiply(&self, other: &SteenrodMonomial) -> Option<SteenrodMonomial> {
        let n = self.xi_exps.len().max(other.xi_exps.len());
        let xi = (1..=n).map(|i| self.xi_exp(i) + other.xi_exp(i)).collect();
        let m = self.tau_flags.len().max(other.tau_flags.len());
        let mut tau = Vec::with_capacity(m);
        for i in 0..m {
            let (a, b) = (self.has_tau(i), other.has_tau(i));
            if a && b {
                return None;
            }
            tau.push(a || b);
        }
        Some(SteenrodMonomial::new(xi, tau))
    }

    pub fn is_one(&self) -> bool {
        self.xi_exps.is_empty() && self.tau_flags.is_empty()
    }

    /// Lowest `τ̄` index present.
    pub fn lowest_tau(&self) -> Option<usize> {
        self.tau_flags.iter().position(|&t| t)
    }
}

/// Weight of a monomial: `wt(ξ̄_i) = wt(τ̄_i) = 2^i`, additive.
pub fn weight(m: &SteenrodMonomial) -> u64 {
    let xi: u64 = m
        .xi_exps
        .iter()
        .enumerate()
        .map(|(i, &e)| u64::from(e) << (i + 1))
        .sum();
    let tau: u64 = m
        .tau_flags
        .iter()
        .enumerate()
        .filter(|(_, &t)| t)
        .map(|(i, _)| 1u64 << i)
        .sum();
    xi + tau
}

/// Degree of `ξ̄_i`: `(2^{i+1} − 2, 2^i − 1)`.
pub fn xi_degree(i: usize) -> Degree {
    Degree::new((1 << (i + 1)) - 2, (1 << i) - 1)
}

/// Degree of `τ̄_i`: `(2^{i+1} − 1, 2^i − 1)`.
pub fn tau_degree(i: usize) -> Degree {
    Degree::new((1 << (i + 1)) - 1, (1 << i) - 1)
}

pub fn degree(m: &SteenrodMonomial) -> Degree {
    let mut d = Degree::ZERO;
    for (i, &e) in m.xi_exps.iter().enumerate() {
        let g = xi_degree(i + 1);
        d = d + Degree::new(g.stem * e as i32, g.weight * e as i32);
    }
    for (i, &t) in m.tau_flags.iter().enumerate() {
        if t {
            d = d + tau_degree(i);
        }
    }
    d
}

impl fmt::Display for SteenrodMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (i, &e) in self.xi_exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("xi{}", i + 1)),
                _ => parts.push(format!("xi{}^{}", i + 1, e)),
            }
        }
        for (i, &t) in self.tau_flags.iter().enumerate() {
            if t {
                parts.push(format!("tau{i}"));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

impl std::str::FromStr for SteenrodMonomial {
    type Err = Error;

    /// Parses the rendering produced by `Display`, e.g. `"xi1^2 tau2"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut m = SteenrodMonomial::one();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let bad = || Error::Parse(format!("bad monomial token {tok:?}"));
            let factor = if let Some(rest) = tok.strip_prefix("xi") {
                let (i, e) = match rest.split_once('^') {
                    Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad())?),
                    None => (rest, 1),
                };
                let i: usize = i.parse().map_err(|_| bad())?;
                if i == 0 {
                    return Err(bad());
                }
                SteenrodMonomial::xi(i, e)
            } else if let Some(rest) = tok.strip_prefix("tau") {
                SteenrodMonomial::tau(rest.parse().map_err(|_| bad())?)
            } else {
                return Err(bad());
            };
            m = m
                .multiply(&factor)
                .ok_or_else(|| Error::Parse(format!("{s:?} is not admissible")))?;
        }
        Ok(m)
    }
}

/// Which quotient `A//E(n)_★` a basis is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientBasisSpec {
    /// `n ≥ −1`; `n = −1` is the whole dual Steenrod algebra.
    pub height: i32,
}

impl QuotientBasisSpec {
    pub fn new(height: i32) -> Self {
        assert!(height >= -1, "height must be at least -1");
        QuotientBasisSpec { height }
    }

    /// Lowest allowed `τ̄` index, `n + 1`.
    pub fn tau_floor(&self) -> usize {
        (self.height + 1) as usize
    }

    pub fn admits(&self, m: &SteenrodMonomial) -> bool {
        m.lowest_tau().is_none_or(|i| i >= self.tau_floor())
    }
}

fn sort_key(m: &SteenrodMonomial) -> (u64, i32, i32, Vec<u32>, Vec<bool>) {
    let d = degree(m);
    (weight(m), d.stem, d.weight, m.xi_exps.clone(), m.tau_flags.clone())
}

pub fn compare_monomials(a: &SteenrodMonomial, b: &SteenrodMonomial) -> Ordering {
    sort_key(a).cmp(&sort_key(b))
}

/// All admissible monomials of `A//E(n)_★` with weight at most `max_weight`.
pub fn enumerate_basis(spec: QuotientBasisSpec, max_weight: u64) -> Vec<SteenrodMonomial> {
    // Generators in increasing weight: ξ̄_i (i ≥ 1) and τ̄_i (i ≥ floor).
    #[derive(Clone, Copy)]
    enum Gen {
        Xi(usize),
        Tau(usize),
    }
    let mut gens = Vec::new();
    let mut i = 0usize;
    while (1u64 << i) <= max_weight {
        if i >= 1 {
            gens.push((Gen::Xi(i), 1u64 << i));
        }
        if i >= spec.tau_floor() {
            gens.push((Gen::Tau(i), 1u64 << i));
        }
        i += 1;
    }
    let mut out = Vec::new();
    fn rec(
        gens: &[(Gen, u64)],
        idx: usize,
        budget: u64,
        cur: &mut SteenrodMonomial,
        out: &mut Vec<SteenrodMonomial>,
    ) {
        if idx == gens.len() {
            out.push(SteenrodMonomial::new(cur.xi_exps.clone(), cur.tau_flags.clone()));
            return;
        }
        let (g, w) = gens[idx];
        match g {
            Gen::Xi(i) => {
                let max_e = budget / w;
                for e in 0..=max_e {
                    if cur.xi_exps.len() < i {
                        cur.xi_exps.resize(i, 0);
                    }
                    cur.xi_exps[i - 1] = e as u32;
                    rec(gens, idx + 1, budget - e * w, cur, out);
                }
                cur.xi_exps[i - 1] = 0;
            }
            Gen::Tau(i) => {
                if cur.tau_flags.len() <= i {
                    cur.tau_flags.resize(i + 1, false);
                }
                cur.tau_flags[i] = false;
                rec(gens, idx + 1, budget, cur, out);
                if w <= budget {
                    cur.tau_flags[i] = true;
                    rec(gens, idx + 1, budget - w, cur, out);
                    cur.tau_flags[i] = false;
                }
            }
        }
    }
    let mut cur = SteenrodMonomial::one();
    rec(&gens, 0, max_weight, &mut cur, &mut out);
    out.sort_by(compare_monomials);
    out
}

/// Monomials of `A//E(n)_★` of weight exactly `2k`.
pub fn weight_component(n: i32, k: u64) -> Vec<SteenrodMonomial> {
    enumerate_basis(QuotientBasisSpec::new(n), 2 * k)
        .into_iter()
        .filter(|m| weight(m) == 2 * k)
        .collect()
}

/// The index-raising map `ξ̄_1^{k_1} ξ̄_2^{k_2} ⋯ τ̄^ε ↦ ξ̄_1^{a} ξ̄_2^{k_1} ⋯ τ̄_{+1}^ε`
/// with `a = k − wt(x)`, from `N_{n−1}(k)` onto the weight-`2k` part of `A//E(n)_★`.
pub fn bg_shift(n: i32, k: u64, x: &SteenrodMonomial) -> Result<SteenrodMonomial> {
    if n < 1 {
        return Err(Error::OutOfDomain(format!("height {n} must be at least 1")));
    }
    let spec = QuotientBasisSpec::new(n - 1);
    let w = weight(x);
    if !spec.admits(x) || w > k {
        return Err(Error::OutOfDomain(format!(
            "{x} is not in the weight <= {k} basis of A//E({})",
            n - 1
        )));
    }
    let mut xi = vec![(k - w) as u32];
    xi.extend(x.xi_exps.iter().copied());
    let mut tau = vec![false];
    tau.extend(x.tau_flags.iter().copied());
    Ok(SteenrodMonomial::new(xi, tau))
}

/// The full bijection `N_{n−1}(k) → M_n(k)` as a map of monomials.
pub fn bg_shift_iso(n: i32, k: u64) -> Result<BTreeMap<String, SteenrodMonomial>> {
    if n < 1 {
        return Err(Error::OutOfDomain(format!("height {n} must be at least 1")));
    }
    let mut map = BTreeMap::new();
    for x in enumerate_basis(QuotientBasisSpec::new(n - 1), k) {
        let y = bg_shift(n, k, &x)?;
        map.insert(x.to_string(), y);
    }
    Ok(map)
}

/// Right action of `Q_i` (`i ∈ {0, 1}`) on a basis monomial, as a list of monomials
/// (an F2-sum; repeated terms cancel).
///
/// Rules: `ξ̄_j Q_i = 0`, `τ̄_k Q_0 = ξ̄_k`, `τ̄_k Q_1 = ξ̄_{k−1}²`, with `ξ̄_0 = 1`
/// and `τ̄_0 Q_1 = 0`, extended as a derivation.
pub fn q_action(spec: QuotientBasisSpec, m: &SteenrodMonomial, i: u8) -> Vec<SteenrodMonomial> {
    assert!(i <= 1, "only Q0 and Q1 are supported");
    let mut acc: BTreeMap<(Vec<u32>, Vec<bool>), SteenrodMonomial> = BTreeMap::new();
    for (k, &t) in m.tau_flags.iter().enumerate() {
        if !t {
            continue;
        }
        let mut rest = m.clone();
        rest.tau_flags[k] = false;
        let rest = SteenrodMonomial::new(rest.xi_exps, rest.tau_flags);
        let image = match (i, k) {
            (0, 0) => SteenrodMonomial::one(),
            (0, k) => SteenrodMonomial::xi(k, 1),
            (1, 0) => continue,
            (1, 1) => SteenrodMonomial::one(),
            (1, k) => SteenrodMonomial::xi(k - 1, 2),
            _ => unreachable!(),
        };
        let Some(term) = rest.multiply(&image) else {
            continue;
        };
        if !spec.admits(&term) {
            continue;
        }
        let key = (term.xi_exps.clone(), term.tau_flags.clone());
        if acc.remove(&key).is_none() {
            acc.insert(key, term);
        }
    }
    let mut out: Vec<SteenrodMonomial> = acc.into_values().collect();
    out.sort_by(compare_monomials);
    out
}

/// Number of unit substitutions `ξ̄_0 = 1` made when `Q_i` hits the factor `τ̄_k`;
/// with `wt(ξ̄_0) = 1` counted formally, `Q_i` preserves weight exactly.
pub fn unit_weight_defect(k: usize, i: u8) -> u64 {
    match (i, k) {
        (0, 0) => 1,
        (1, 1) => 2,
        _ => 0,
    }
}

/// The 2-adic digits of `k` (positions of the ones in its binary expansion).
pub fn two_adic_digits(k: u64) -> Vec<usize> {
    (0..64).filter(|&i| (k >> i) & 1 == 1).collect()
}

/// `ξ̄_{i_1} ⋯ ξ̄_{i_n}` over the 2-adic digits of `k`, with `ξ̄_0 = 1`.
pub fn digit_monomial(k: u64) -> SteenrodMonomial {
    let mut m = SteenrodMonomial::one();
    for i in two_adic_digits(k) {
        if i >= 1 {
            m = m.multiply(&SteenrodMonomial::xi(i, 1)).expect("xi products are admissible");
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &str) -> SteenrodMonomial {
        s.parse().unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&mono("xi1 tau2")), 6);
        assert_eq!(weight(&SteenrodMonomial::one()), 0);
        assert_eq!(weight(&mono("tau0")), 1);
    }

    #[test]
    fn small_bases() {
        let names = |v: Vec<SteenrodMonomial>| v.iter().map(|m| m.to_string()).collect::<Vec<_>>();
        assert_eq!(
            names(enumerate_basis(QuotientBasisSpec::new(-1), 2)),
            vec!["1", "tau0", "xi1", "tau1"]
        );
        assert_eq!(
            names(enumerate_basis(QuotientBasisSpec::new(0), 2)),
            vec!["1", "xi1", "tau1"]
        );
        for h in -1..=2 {
            assert_eq!(names(enumerate_basis(QuotientBasisSpec::new(h), 0)), vec!["1"]);
        }
    }

    #[test]
    fn q_rules() {
        let s = QuotientBasisSpec::new(-1);
        assert_eq!(q_action(s, &mono("tau1"), 0), vec![mono("xi1")]);
        assert!(q_action(s, &mono("xi2"), 1).is_empty());
        let mut expect = vec![mono("xi1 tau2"), mono("tau1 xi2")];
        expect.sort_by(compare_monomials);
        assert_eq!(q_action(s, &mono("tau1 tau2"), 0), expect);
        assert_eq!(q_action(s, &mono("tau1"), 1), vec![SteenrodMonomial::one()]);
        assert_eq!(q_action(s, &mono("tau2"), 1), vec![mono("xi1^2")]);
        assert!(q_action(s, &mono("tau0"), 1).is_empty());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(bg_shift(1, 2, &mono("tau1")).unwrap(), mono("tau2"));
        assert_eq!(bg_shift(1, 5, &SteenrodMonomial::one()).unwrap(), mono("xi1^5"));
        let d = degree(&bg_shift(1, 2, &mono("tau1")).unwrap()) - degree(&mono("tau1"));
        assert_eq!(d, Degree::rho_times(2));
        assert!(bg_shift(1, 1, &mono("tau1 xi1")).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for m in enumerate_basis(QuotientBasisSpec::new(-1), 12) {
            assert_eq!(m.to_string().parse::<SteenrodMonomial>().unwrap(), m);
        }
    }

    #[test]
    fn digits() {
        assert_eq!(two_adic_digits(6), vec![1, 2]);
        assert_eq!(digit_monomial(6), mono("xi1 xi2"));
        assert_eq!(digit_monomial(1), SteenrodMonomial::one());
    }
}
