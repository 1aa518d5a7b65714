//! Weight-graded PBW algebra for U(𝔤): canonical ordered monomials and a
//! normal-ordering rewriting engine driven by the bracket table. All
//! coefficients are exact rationals; rewriting never truncates.

use crate::chevalley::{ChevalleyTable, Gen, LieElement};
use crate::error::Error;
use crate::linalg::{factorial, Rat};
use crate::rootsys::{RootSystem, TypeLabel};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Ordered monomial y^ν·h^κ·x^π over the Chevalley basis. Factor order is
/// fixed once for the whole crate: y-block in root order, h-block, x-block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PBWMonomial {
    /// Exponents of y_{β₁}…y_{β_t} in the canonical root order.
    pub neg_exps: Vec<u32>,
    /// Exponents of h_{α₁}…h_{α_ℓ}.
    pub cartan_exps: Vec<u32>,
    /// Exponents of x_{β₁}…x_{β_t}.
    pub pos_exps: Vec<u32>,
}

impl PBWMonomial {
    pub fn empty(t: usize, l: usize) -> Self {
        PBWMonomial {
            neg_exps: vec![0; t],
            cartan_exps: vec![0; l],
            pos_exps: vec![0; t],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total_degree() == 0
    }

    pub fn is_pure_y(&self) -> bool {
        self.cartan_exps.iter().all(|&e| e == 0) && self.pos_exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.neg_exps.iter().sum::<u32>()
            + self.cartan_exps.iter().sum::<u32>()
            + self.pos_exps.iter().sum::<u32>()
    }

    /// Height of the y-block weight Σνᵢ·ht(βᵢ); the truncation measure for
    /// module actions.
    pub fn y_height(&self, rs: &RootSystem) -> u32 {
        self.neg_exps
            .iter()
            .zip(&rs.positive_roots)
            .map(|(&e, b)| e * b.height() as u32)
            .sum()
    }

    /// Expansion into a flat generator word in canonical order.
    pub fn word(&self) -> Vec<Gen> {
        let mut w = Vec::new();
        for (i, &e) in self.neg_exps.iter().enumerate() {
            w.extend(std::iter::repeat(Gen::Y(i)).take(e as usize));
        }
        for (j, &e) in self.cartan_exps.iter().enumerate() {
            w.extend(std::iter::repeat(Gen::H(j)).take(e as usize));
        }
        for (i, &e) in self.pos_exps.iter().enumerate() {
            w.extend(std::iter::repeat(Gen::X(i)).take(e as usize));
        }
        w
    }

    pub fn display(&self, rs: &RootSystem) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.neg_exps.iter().enumerate() {
            if e > 0 {
                parts.push(format!("y{}^{}", rs.positive_roots[i], e));
            }
        }
        for (j, &e) in self.cartan_exps.iter().enumerate() {
            if e > 0 {
                parts.push(format!("h[{}]^{}", j + 1, e));
            }
        }
        for (i, &e) in self.pos_exps.iter().enumerate() {
            if e > 0 {
                parts.push(format!("x{}^{}", rs.positive_roots[i], e));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

/// 𝔱-weight of the monomial, Σ(pos·β) − Σ(neg·β), in simple-root coordinates.
pub fn monomial_weight(rs: &RootSystem, m: &PBWMonomial) -> Vec<i64> {
    let mut w = vec![0i64; rs.rank];
    for (i, &e) in m.pos_exps.iter().enumerate() {
        for (k, c) in rs.positive_roots[i].coords.iter().enumerate() {
            w[k] += i64::from(e) * c;
        }
    }
    for (i, &e) in m.neg_exps.iter().enumerate() {
        for (k, c) in rs.positive_roots[i].coords.iter().enumerate() {
            w[k] -= i64::from(e) * c;
        }
    }
    w
}

/// Finitely supported rational combination of ordered monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PBWElement {
    label: TypeLabel,
    terms: BTreeMap<PBWMonomial, Rat>,
}

impl PBWElement {
    pub fn zero(label: TypeLabel) -> Self {
        PBWElement { label, terms: BTreeMap::new() }
    }

    pub fn one(ct: &ChevalleyTable) -> Self {
        let mut e = Self::zero(ct.label());
        e.add_term(PBWMonomial::empty(ct.positive_count(), ct.rank()), Rat::one());
        e
    }

    pub fn from_monomial(label: TypeLabel, m: PBWMonomial) -> Self {
        let mut e = Self::zero(label);
        e.add_term(m, Rat::one());
        e
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn terms(&self) -> &BTreeMap<PBWMonomial, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.label != other.label {
            return Err(Error::TableMismatch(self.label.to_string(), other.label.to_string()));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.label);
        }
        PBWElement {
            label: self.label,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn display(&self, rs: &RootSystem) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("{}·{}", c, m.display(rs)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Rewrites an arbitrary generator word into canonical form, replacing each
/// adjacent inversion g·g′ (g > g′) by g′·g + [g,g′] until sorted. Terminates
/// because every step either shortens the word or removes an inversion.
pub fn normal_order(ct: &ChevalleyTable, word: &[Gen]) -> PBWElement {
    let mut out = PBWElement::zero(ct.label());
    let mut work: Vec<(Vec<Gen>, Rat)> = vec![(word.to_vec(), Rat::one())];
    while let Some((w, c)) = work.pop() {
        if c.is_zero() {
            continue;
        }
        match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            None => {
                let mut m = PBWMonomial::empty(ct.positive_count(), ct.rank());
                for g in &w {
                    match *g {
                        Gen::Y(i) => m.neg_exps[i] += 1,
                        Gen::H(j) => m.cartan_exps[j] += 1,
                        Gen::X(i) => m.pos_exps[i] += 1,
                    }
                }
                out.add_term(m, c);
            }
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                for &(g, k) in ct.bracket_basis(w[i], w[i + 1]) {
                    let mut contracted = Vec::with_capacity(w.len() - 1);
                    contracted.extend_from_slice(&w[..i]);
                    contracted.push(g);
                    contracted.extend_from_slice(&w[i + 2..]);
                    work.push((contracted, &c * Rat::from_integer(k.into())));
                }
                work.push((swapped, c));
            }
        }
    }
    out
}

/// Product in U(𝔤), normal-ordered.
pub fn multiply(ct: &ChevalleyTable, a: &PBWElement, b: &PBWElement) -> Result<PBWElement, Error> {
    for e in [a, b] {
        if e.label() != ct.label() {
            return Err(Error::TableMismatch(e.label().to_string(), ct.label().to_string()));
        }
    }
    let mut out = PBWElement::zero(ct.label());
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let mut word = ma.word();
            word.extend(mb.word());
            let prod = normal_order(ct, &word);
            let c = ca * cb;
            for (m, v) in prod.terms() {
                out.add_term(m.clone(), v * &c);
            }
        }
    }
    Ok(out)
}

/// Degree-1 embedding of a Lie element.
pub fn lie_to_pbw(ct: &ChevalleyTable, e: &LieElement) -> Result<PBWElement, Error> {
    if e.label() != ct.label() {
        return Err(Error::TableMismatch(e.label().to_string(), ct.label().to_string()));
    }
    let mut out = PBWElement::zero(ct.label());
    for (g, c) in e.terms() {
        let mut m = PBWMonomial::empty(ct.positive_count(), ct.rank());
        match *g {
            Gen::Y(i) => m.neg_exps[i] += 1,
            Gen::H(j) => m.cartan_exps[j] += 1,
            Gen::X(i) => m.pos_exps[i] += 1,
        }
        out.add_term(m, c.clone());
    }
    Ok(out)
}

fn compositions_of(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions_of(k - first, parts - 1) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn multinomial(k: u32, parts: &[u32]) -> Rat {
    let mut denom = num::BigInt::one();
    for &p in parts {
        denom *= factorial(u64::from(p));
    }
    Rat::from_integer(factorial(u64::from(k))) / Rat::from_integer(denom)
}

/// Verifies the two multinomial expansion identities
///   x^k·z₁⋯z_n = Σ_{i₁+…+i_{n+1}=k} C(k; i…)·[x^[i₁],z₁]⋯[x^[i_n],z_n]·x^{i_{n+1}}
///   ad(x)^k(z₁⋯z_n) = Σ_{i₁+…+i_n=k} C(k; i…)·[x^[i₁],z₁]⋯[x^[i_n],z_n]
/// by expanding both sides to canonical form.
pub fn ad_power_identity_check(
    ct: &ChevalleyTable,
    x: Gen,
    z_word: &[Gen],
    k: u32,
) -> Result<bool, Error> {
    let n = z_word.len();
    let x_elem = ct.gen_elem(x);
    // iterated Lie-level ad powers of x on each letter
    let mut ad_pows: Vec<Vec<LieElement>> = Vec::with_capacity(n);
    for &z in z_word {
        let mut row = vec![ct.gen_elem(z)];
        for i in 1..=k as usize {
            let next = ct.bracket(&x_elem, &row[i - 1])?;
            row.push(next);
        }
        ad_pows.push(row);
    }

    // first identity
    let mut lhs_word = vec![x; k as usize];
    lhs_word.extend_from_slice(z_word);
    let lhs1 = normal_order(ct, &lhs_word);
    let mut rhs1 = PBWElement::zero(ct.label());
    for comp in compositions_of(k, n + 1) {
        let coeff = multinomial(k, &comp);
        let mut acc = PBWElement::one(ct);
        for (j, &ij) in comp[..n].iter().enumerate() {
            acc = multiply(ct, &acc, &lie_to_pbw(ct, &ad_pows[j][ij as usize])?)?;
        }
        let tail = normal_order(ct, &vec![x; comp[n] as usize]);
        acc = multiply(ct, &acc, &tail)?;
        rhs1 = rhs1.add(&acc.scale(&coeff))?;
    }
    if lhs1 != rhs1 {
        return Ok(false);
    }

    // second identity: ad(x)^k of the whole product, taken in U(𝔤)
    let x_pbw = lie_to_pbw(ct, &x_elem)?;
    let mut lhs2 = normal_order(ct, z_word);
    for _ in 0..k {
        lhs2 = multiply(ct, &x_pbw, &lhs2)?.sub(&multiply(ct, &lhs2, &x_pbw)?)?;
    }
    let mut rhs2 = PBWElement::zero(ct.label());
    for comp in compositions_of(k, n) {
        let coeff = multinomial(k, &comp);
        let mut acc = PBWElement::one(ct);
        for (j, &ij) in comp.iter().enumerate() {
            acc = multiply(ct, &acc, &lie_to_pbw(ct, &ad_pows[j][ij as usize])?)?;
        }
        rhs2 = rhs2.add(&acc.scale(&coeff))?;
    }
    Ok(lhs2 == rhs2)
}
