//! Chevalley basis {x_β, y_β, h_i} of the derived algebra, with integer
//! structure constants computed from the root system alone. Signs come from a
//! fixed deterministic rule: for each non-simple γ ∈ Φ⁺ the minimal
//! decomposition γ = ξ + η (ξ least in the canonical root order) gets
//! N_{ξ,η} = r + 1 > 0, and every other constant follows from antisymmetry,
//! N_{-a,-b} = -N_{a,b}, and the standard triple and four-term identities.
//! The magnitude law |N_{a,b}| = r + 1 and the Jacobi identity over all basis
//! triples are machine-checkable via [`ChevalleyTable::verify_magnitudes`] and
//! [`ChevalleyTable::verify_jacobi`].

use crate::error::Error;
use crate::linalg::{factorial, rat, vp_int, Rat};
use crate::rootsys::{Root, RootSystem, TypeLabel};
use num::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Basis symbol. The derived ordering Y < H < X (indices ascending inside each
/// block) is exactly the canonical PBW order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Y(usize),
    H(usize),
    X(usize),
}

/// Element of the Lie algebra as a finite sum of basis symbols with exact
/// rational coefficients. Tagged with its type so tables cannot be mixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    label: TypeLabel,
    terms: BTreeMap<Gen, Rat>,
}

impl LieElement {
    pub fn zero(label: TypeLabel) -> Self {
        LieElement { label, terms: BTreeMap::new() }
    }

    pub fn from_terms(label: TypeLabel, iter: impl IntoIterator<Item = (Gen, Rat)>) -> Self {
        let mut e = Self::zero(label);
        for (g, c) in iter {
            e.add_term(g, c);
        }
        e
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn terms(&self) -> &BTreeMap<Gen, Rat> {
        &self.terms
    }

    pub fn coeff(&self, g: Gen) -> Rat {
        self.terms.get(&g).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: Gen, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.label != other.label {
            return Err(Error::TableMismatch(self.label.to_string(), other.label.to_string()));
        }
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(*g, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.label);
        }
        LieElement {
            label: self.label,
            terms: self.terms.iter().map(|(g, v)| (*g, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

/// Bracket table over the Chevalley basis of one root system.
#[derive(Debug)]
pub struct ChevalleyTable {
    rs: Arc<RootSystem>,
    /// N_{βᵢ,βⱼ} for ordered pairs of positive roots with βᵢ+βⱼ ∈ Φ.
    npos: HashMap<(usize, usize), i64>,
    /// Dense bracket table over generator ids; entries are integer
    /// combinations of basis symbols.
    table: Vec<Vec<Vec<(Gen, i64)>>>,
}

impl ChevalleyTable {
    pub fn new(rs: RootSystem) -> Self {
        let rs = Arc::new(rs);
        let npos = positive_constants(&rs);
        let table = basis_table(&rs, &npos);
        ChevalleyTable { rs, npos, table }
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn label(&self) -> TypeLabel {
        self.rs.label
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn positive_count(&self) -> usize {
        self.rs.positive_count()
    }

    pub fn dim(&self) -> usize {
        2 * self.positive_count() + self.rank()
    }

    pub fn gen_id(&self, g: Gen) -> usize {
        let t = self.positive_count();
        match g {
            Gen::Y(i) => i,
            Gen::H(j) => t + j,
            Gen::X(i) => t + self.rank() + i,
        }
    }

    pub fn gen_from_id(&self, id: usize) -> Gen {
        let t = self.positive_count();
        if id < t {
            Gen::Y(id)
        } else if id < t + self.rank() {
            Gen::H(id - t)
        } else {
            Gen::X(id - t - self.rank())
        }
    }

    pub fn all_gens(&self) -> Vec<Gen> {
        (0..self.dim()).map(|i| self.gen_from_id(i)).collect()
    }

    pub fn gen_name(&self, g: Gen) -> String {
        match g {
            Gen::Y(i) => format!("y{}", self.rs.positive_roots[i]),
            Gen::X(i) => format!("x{}", self.rs.positive_roots[i]),
            Gen::H(j) => format!("h[{}]", j + 1),
        }
    }

    pub fn gen_elem(&self, g: Gen) -> LieElement {
        LieElement::from_terms(self.label(), [(g, Rat::one())])
    }

    /// Bracket of two basis symbols as an integer combination.
    pub fn bracket_basis(&self, a: Gen, b: Gen) -> &[(Gen, i64)] {
        &self.table[self.gen_id(a)][self.gen_id(b)]
    }

    /// Bilinear extension of the basis bracket.
    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement, Error> {
        for e in [a, b] {
            if e.label() != self.label() {
                return Err(Error::TableMismatch(e.label().to_string(), self.label().to_string()));
            }
        }
        let mut out = LieElement::zero(self.label());
        for (ga, ca) in a.terms() {
            for (gb, cb) in b.terms() {
                let c = ca * cb;
                for (g, k) in self.bracket_basis(*ga, *gb) {
                    out.add_term(*g, &c * rat(*k));
                }
            }
        }
        Ok(out)
    }

    /// N_{a,b} for arbitrary roots a, b (0 when a + b ∉ Φ).
    pub fn n_constant(&self, a: &Root, b: &Root) -> Result<i64, Error> {
        for r in [a, b] {
            if !self.rs.is_root(&r.coords) {
                return Err(Error::NotARoot(r.to_string()));
            }
        }
        if a.coords == b.coords || a.coords == b.negated().coords {
            return Err(Error::ProportionalRoots);
        }
        Ok(n_general(&self.rs, &self.npos, &a.coords, &b.coords))
    }

    /// (1/i!)·ad(g)^i applied to z, for g = x_β or y_β.
    pub fn divided_ad_power(&self, g: Gen, i: u32, z: &LieElement) -> Result<LieElement, Error> {
        if matches!(g, Gen::H(_)) {
            return Err(Error::BadInput("divided ad-powers are taken for x_β or y_β only".into()));
        }
        if z.label() != self.label() {
            return Err(Error::TableMismatch(z.label().to_string(), self.label().to_string()));
        }
        let ge = self.gen_elem(g);
        let mut acc = z.clone();
        for _ in 0..i {
            acc = self.bracket(&ge, &acc)?;
        }
        let inv = Rat::from_integer(factorial(u64::from(i))).recip();
        Ok(acc.scale(&inv))
    }

    /// k₀ = max{k : γ - kα ∈ Φ⁺} and the constant c in
    /// ad(x_α)^{k₀}(y_γ) = k₀!·c·y_{γ-k₀α}; c is a p-unit under the residue
    /// assumption (p > 2 with a B/C/F4 factor, p > 3 for G2).
    pub fn k0_and_unit(&self, alpha: usize, gamma: &Root, p: u64) -> Result<(u32, i64), Error> {
        if p <= self.label().hyp_threshold() {
            return Err(Error::HypViolated(format!(
                "type {} requires p > {}, got {p}",
                self.label(),
                self.label().hyp_threshold()
            )));
        }
        let gi = self.rs.check_positive_root(gamma)?;
        let alpha_root = self.rs.simple_root(alpha);
        let down: Vec<i64> = gamma
            .coords
            .iter()
            .zip(&alpha_root.coords)
            .map(|(g, a)| g - a)
            .collect();
        if self.rs.index_of(&Root::new(down)).is_none() {
            return Err(Error::BadInput(format!(
                "γ - α must be a positive root (γ = {gamma}, α = α_{})",
                alpha + 1
            )));
        }
        let mut k0 = 0u32;
        loop {
            let v: Vec<i64> = gamma
                .coords
                .iter()
                .zip(&alpha_root.coords)
                .map(|(g, a)| g - (k0 as i64 + 1) * a)
                .collect();
            if self.rs.index_of(&Root::new(v)).is_some() {
                k0 += 1;
            } else {
                break;
            }
        }
        let x = self.gen_elem(Gen::X(self.rs.check_positive_root(&alpha_root)?));
        let mut acc = self.gen_elem(Gen::Y(gi));
        for _ in 0..k0 {
            acc = self.bracket(&x, &acc)?;
        }
        let target: Vec<i64> = gamma
            .coords
            .iter()
            .zip(&alpha_root.coords)
            .map(|(g, a)| g - k0 as i64 * a)
            .collect();
        let ti = self.rs.check_positive_root(&Root::new(target))?;
        assert_eq!(acc.terms().len(), 1, "iterated bracket must be a single y-term");
        let coeff = acc.coeff(Gen::Y(ti));
        let k0_fact = Rat::from_integer(factorial(u64::from(k0)));
        let c = &coeff / &k0_fact;
        assert!(c.is_integer(), "k₀! must divide the bracket coefficient");
        let c_int = c.to_integer();
        let c_i64 = i64::try_from(&c_int).expect("small structure constants");
        assert_eq!(
            vp_int(&c_int, p),
            Some(0),
            "c must be a unit at p under the residue assumption"
        );
        Ok((k0, c_i64))
    }

    /// Checks |N_{α,β}| = r + 1 over every special pair of positive roots.
    pub fn verify_magnitudes(&self) -> bool {
        let rs = &self.rs;
        for (i, a) in rs.positive_roots.iter().enumerate() {
            for (j, b) in rs.positive_roots.iter().enumerate() {
                if i == j {
                    continue;
                }
                let sum: Vec<i64> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
                if let Some(_) = rs.index_of(&Root::new(sum)) {
                    let n = self.npos[&(i, j)];
                    let r = r_value(rs, &b.coords, &a.coords);
                    if n.unsigned_abs() != (r as u64 + 1) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks the Jacobi identity over every ordered triple of basis symbols.
    pub fn verify_jacobi(&self) -> bool {
        let gens = self.all_gens();
        for &a in &gens {
            for &b in &gens {
                for &c in &gens {
                    let mut acc: BTreeMap<Gen, i64> = BTreeMap::new();
                    for (u, v, w) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for &(g1, k1) in self.bracket_basis(u, v) {
                            for &(g2, k2) in self.bracket_basis(g1, w) {
                                *acc.entry(g2).or_insert(0) += k1 * k2;
                            }
                        }
                    }
                    if acc.values().any(|&v| v != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Antisymmetry of the stored table.
    pub fn verify_antisymmetry(&self) -> bool {
        let gens = self.all_gens();
        for &a in &gens {
            for &b in &gens {
                let mut acc: BTreeMap<Gen, i64> = BTreeMap::new();
                for &(g, k) in self.bracket_basis(a, b) {
                    *acc.entry(g).or_insert(0) += k;
                }
                for &(g, k) in self.bracket_basis(b, a) {
                    *acc.entry(g).or_insert(0) += k;
                }
                if acc.values().any(|&v| v != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Full table as JSON for golden-file comparisons: one entry per ordered
    /// basis pair with a nonzero bracket, in generator-id order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for a in self.all_gens() {
            for b in self.all_gens() {
                let terms = self.bracket_basis(a, b);
                if terms.is_empty() {
                    continue;
                }
                let out: BTreeMap<String, String> = terms
                    .iter()
                    .map(|(g, k)| (self.gen_name(*g), k.to_string()))
                    .collect();
                entries.push(serde_json::json!({
                    "bra": self.gen_name(a),
                    "ket": self.gen_name(b),
                    "out": out,
                }));
            }
        }
        serde_json::Value::Array(entries)
    }

    /// Coefficient map keyed by printable generator names.
    pub fn lie_to_map(&self, e: &LieElement) -> BTreeMap<String, String> {
        e.terms()
            .iter()
            .map(|(g, c)| (self.gen_name(*g), c.to_string()))
            .collect()
    }
}

impl TypeLabel {
    /// Residue characteristics at or below this bound violate the standing
    /// assumption: 2 for types with a double bond (B/C/F4), 3 for G2, 1
    /// otherwise.
    pub fn hyp_threshold(&self) -> u64 {
        match self {
            TypeLabel::B(_) | TypeLabel::C(_) | TypeLabel::F4 => 2,
            TypeLabel::G2 => 3,
            _ => 1,
        }
    }
}

/// Max k ≥ 0 with b - k·a ∈ Φ.
fn r_value(rs: &RootSystem, b: &[i64], a: &[i64]) -> u32 {
    let mut r = 0u32;
    loop {
        let v: Vec<i64> = b
            .iter()
            .zip(a)
            .map(|(x, y)| x - (r as i64 + 1) * y)
            .collect();
        if rs.is_root(&v) {
            r += 1;
        } else {
            return r;
        }
    }
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg_vec(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

fn is_positive_vec(a: &[i64]) -> bool {
    a.iter().sum::<i64>() > 0
}

/// N_{a,b} for arbitrary roots, reduced to positive-pair lookups through
/// antisymmetry, negation, and the triple identity
/// N_{u,v}/(w,w) = N_{v,w}/(u,u) for u + v + w = 0.
fn n_general(rs: &RootSystem, npos: &HashMap<(usize, usize), i64>, a: &[i64], b: &[i64]) -> i64 {
    let c = add_vec(a, b);
    if !rs.is_root(&c) {
        return 0;
    }
    let a_pos = is_positive_vec(a);
    let b_pos = is_positive_vec(b);
    match (a_pos, b_pos) {
        (true, true) => {
            let i = rs.index_of(&Root::new(a.to_vec())).expect("positive root");
            let j = rs.index_of(&Root::new(b.to_vec())).expect("positive root");
            npos[&(i, j)]
        }
        (false, false) => -n_general(rs, npos, &neg_vec(a), &neg_vec(b)),
        (false, true) => -n_general(rs, npos, b, a),
        (true, false) => {
            if is_positive_vec(&c) {
                // N_{a,b} = -(c,c)/(a,a) · N_{-b,c} via the triple (a, b, -c)
                let num = rat(rs.inner(&c, &c)) * rat(n_general(rs, npos, &neg_vec(b), &c));
                let val = -num / rat(rs.inner(a, a));
                assert!(val.is_integer(), "triple identity must give an integer");
                i64::try_from(&val.to_integer()).expect("small constant")
            } else {
                -n_general(rs, npos, &neg_vec(a), &neg_vec(b))
            }
        }
    }
}

/// Fills N for all ordered pairs of positive roots with root sum, inductively
/// by height of the sum.
fn positive_constants(rs: &RootSystem) -> HashMap<(usize, usize), i64> {
    let mut npos: HashMap<(usize, usize), i64> = HashMap::new();
    for (gi, gamma) in rs.positive_roots.iter().enumerate() {
        if gamma.height() < 2 {
            continue;
        }
        let _ = gi;
        // ordered decompositions γ = β_a + β_b with a < b in canonical order
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (ai, a) in rs.positive_roots.iter().enumerate() {
            let rest: Vec<i64> = gamma.coords.iter().zip(&a.coords).map(|(g, x)| g - x).collect();
            if let Some(bi) = rs.index_of(&Root::new(rest)) {
                if ai < bi {
                    pairs.push((ai, bi));
                }
            }
        }
        assert!(!pairs.is_empty(), "non-simple positive roots decompose");
        pairs.sort();
        let (xi, eta) = pairs[0];
        let r = r_value(rs, &rs.positive_roots[eta].coords, &rs.positive_roots[xi].coords);
        npos.insert((xi, eta), r as i64 + 1);
        npos.insert((eta, xi), -(r as i64 + 1));

        let xi_c = rs.positive_roots[xi].coords.clone();
        let eta_c = rs.positive_roots[eta].coords.clone();
        for &(ai, bi) in &pairs[1..] {
            let al = rs.positive_roots[ai].coords.clone();
            let be = rs.positive_roots[bi].coords.clone();
            // four-term identity on (ξ, η, -α, -β):
            // N_{ξ,η}N_{-α,-β}/(γ,γ) + N_{η,-α}N_{ξ,-β}/(η-α,η-α)
            //   + N_{-α,ξ}N_{η,-β}/(ξ-α,ξ-α) = 0
            let mut sum = Rat::zero();
            let eta_minus_al = add_vec(&eta_c, &neg_vec(&al));
            if rs.is_root(&eta_minus_al) {
                let t = rat(n_general(rs, &npos, &eta_c, &neg_vec(&al)))
                    * rat(n_general(rs, &npos, &xi_c, &neg_vec(&be)))
                    / rat(rs.inner(&eta_minus_al, &eta_minus_al));
                sum += t;
            }
            let xi_minus_al = add_vec(&xi_c, &neg_vec(&al));
            if rs.is_root(&xi_minus_al) {
                let t = rat(n_general(rs, &npos, &neg_vec(&al), &xi_c))
                    * rat(n_general(rs, &npos, &eta_c, &neg_vec(&be)))
                    / rat(rs.inner(&xi_minus_al, &xi_minus_al));
                sum += t;
            }
            let n_xieta = rat(npos[&(xi, eta)]);
            let val = rat(rs.inner(&gamma.coords, &gamma.coords)) * sum / n_xieta;
            assert!(val.is_integer(), "four-term identity must give an integer");
            let v = i64::try_from(&val.to_integer()).expect("small constant");
            npos.insert((ai, bi), v);
            npos.insert((bi, ai), -v);
        }
    }
    npos
}

/// Dense bracket table over all ordered pairs of basis symbols.
fn basis_table(rs: &RootSystem, npos: &HashMap<(usize, usize), i64>) -> Vec<Vec<Vec<(Gen, i64)>>> {
    let t = rs.positive_count();
    let l = rs.rank;
    let dim = 2 * t + l;
    let gen_from_id = |id: usize| -> Gen {
        if id < t {
            Gen::Y(id)
        } else if id < t + l {
            Gen::H(id - t)
        } else {
            Gen::X(id - t - l)
        }
    };
    let pairing = |i: usize, k: usize| -> i64 {
        rs.pairing_root(&rs.positive_roots[i], k).expect("valid index")
    };
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for ia in 0..dim {
        for ib in 0..dim {
            let (a, b) = (gen_from_id(ia), gen_from_id(ib));
            let terms: Vec<(Gen, i64)> = match (a, b) {
                (Gen::H(_), Gen::H(_)) => Vec::new(),
                (Gen::H(k), Gen::X(i)) => vec![(Gen::X(i), pairing(i, k))],
                (Gen::X(i), Gen::H(k)) => vec![(Gen::X(i), -pairing(i, k))],
                (Gen::H(k), Gen::Y(i)) => vec![(Gen::Y(i), -pairing(i, k))],
                (Gen::Y(i), Gen::H(k)) => vec![(Gen::Y(i), pairing(i, k))],
                (Gen::X(i), Gen::X(j)) => {
                    if i == j {
                        Vec::new()
                    } else {
                        let s = add_vec(&rs.positive_roots[i].coords, &rs.positive_roots[j].coords);
                        match rs.index_of(&Root::new(s)) {
                            Some(si) => vec![(Gen::X(si), npos[&(i, j)])],
                            None => Vec::new(),
                        }
                    }
                }
                (Gen::Y(i), Gen::Y(j)) => {
                    if i == j {
                        Vec::new()
                    } else {
                        let s = add_vec(&rs.positive_roots[i].coords, &rs.positive_roots[j].coords);
                        match rs.index_of(&Root::new(s)) {
                            Some(si) => vec![(Gen::Y(si), -npos[&(i, j)])],
                            None => Vec::new(),
                        }
                    }
                }
                (Gen::X(i), Gen::Y(j)) | (Gen::Y(j), Gen::X(i)) => {
                    let sign = if matches!(a, Gen::X(_)) { 1 } else { -1 };
                    let terms: Vec<(Gen, i64)> = if i == j {
                        rs.coroot_coords(&rs.positive_roots[i])
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| *c != 0)
                            .map(|(k, c)| (Gen::H(k), c))
                            .collect()
                    } else {
                        let d = add_vec(
                            &rs.positive_roots[i].coords,
                            &neg_vec(&rs.positive_roots[j].coords),
                        );
                        if !rs.is_root(&d) {
                            Vec::new()
                        } else {
                            let n = n_general(
                                rs,
                                npos,
                                &rs.positive_roots[i].coords,
                                &neg_vec(&rs.positive_roots[j].coords),
                            );
                            if is_positive_vec(&d) {
                                let di = rs.index_of(&Root::new(d)).expect("positive root");
                                vec![(Gen::X(di), n)]
                            } else {
                                let di = rs.index_of(&Root::new(neg_vec(&d))).expect("positive root");
                                vec![(Gen::Y(di), n)]
                            }
                        }
                    };
                    terms
                        .into_iter()
                        .map(|(g, c)| (g, sign * c))
                        .filter(|(_, c)| *c != 0)
                        .collect()
                }
            };
            table[ia][ib] = terms.into_iter().filter(|(_, c)| *c != 0).collect();
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;
    use num::Signed;

    fn table(label: &str) -> ChevalleyTable {
        ChevalleyTable::new(RootSystem::build(label).unwrap())
    }

    fn root(v: &[i64]) -> Root {
        Root::new(v.to_vec())
    }

    #[test]
    fn magnitude_examples() {
        let a2 = table("A2");
        assert_eq!(a2.n_constant(&root(&[1, 0]), &root(&[0, 1])).unwrap().abs(), 1);
        let g2 = table("G2");
        assert_eq!(g2.n_constant(&root(&[1, 0]), &root(&[1, 1])).unwrap().abs(), 2);
        let b2 = table("B2");
        assert_eq!(b2.n_constant(&root(&[0, 1]), &root(&[1, 1])).unwrap().abs(), 2);
        // non-root sum vanishes
        let a2t = table("A2");
        assert_eq!(a2t.n_constant(&root(&[1, 1]), &root(&[1, 0])).unwrap(), 0);
    }

    #[test]
    fn cartan_brackets() {
        let a2 = table("A2");
        let h1 = a2.gen_elem(Gen::H(0));
        let x2 = a2.gen_elem(Gen::X(1));
        let out = a2.bracket(&h1, &x2).unwrap();
        assert_eq!(out, x2.scale(&rat(-1)));
        let y2 = a2.gen_elem(Gen::Y(1));
        assert_eq!(a2.bracket(&h1, &y2).unwrap(), y2.scale(&rat(1)));
        let h2 = a2.gen_elem(Gen::H(1));
        assert!(a2.bracket(&h1, &h2).unwrap().is_zero());
    }

    #[test]
    fn x_y_same_root_gives_the_coroot() {
        for label in ["A2", "B2", "C3", "G2", "F4"] {
            let t = table(label);
            for i in 0..t.positive_count() {
                let out = t
                    .bracket(&t.gen_elem(Gen::X(i)), &t.gen_elem(Gen::Y(i)))
                    .unwrap();
                let cc = t.rs().coroot_coords(&t.rs().positive_roots[i]);
                let expected = LieElement::from_terms(
                    t.label(),
                    cc.into_iter().enumerate().map(|(k, c)| (Gen::H(k), rat(c))),
                );
                assert_eq!(out, expected, "{label}: [x,y] at root {i}");
            }
        }
    }

    #[test]
    fn mixed_bracket_examples() {
        let a2 = table("A2");
        // [x_{α₁+α₂}, y_{α₁}] = ±x_{α₂}
        let out = a2
            .bracket(&a2.gen_elem(Gen::X(2)), &a2.gen_elem(Gen::Y(0)))
            .unwrap();
        assert_eq!(out.terms().len(), 1);
        assert_eq!(out.coeff(Gen::X(1)).abs(), rat(1));
        // [y_{α₁+α₂}, y_{α₁}] = 0 since 2α₁+α₂ ∉ Φ
        let out = a2
            .bracket(&a2.gen_elem(Gen::Y(2)), &a2.gen_elem(Gen::Y(0)))
            .unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn table_mismatch_is_rejected() {
        let a2 = table("A2");
        let b2 = table("B2");
        let e = b2.gen_elem(Gen::X(0));
        assert!(matches!(
            a2.bracket(&a2.gen_elem(Gen::X(0)), &e),
            Err(Error::TableMismatch(_, _))
        ));
    }

    #[test]
    fn divided_ad_power_examples() {
        let a1 = table("A1");
        let y = a1.gen_elem(Gen::Y(0));
        assert_eq!(a1.divided_ad_power(Gen::X(0), 0, &y).unwrap(), y);
        // ad(x)²(y) = [x, h] = -2x, so the divided square is -x
        let out = a1.divided_ad_power(Gen::X(0), 2, &y).unwrap();
        assert_eq!(out, a1.gen_elem(Gen::X(0)).scale(&rat(-1)));

        let g2 = table("G2");
        let theta = g2.positive_count() - 1;
        let out = g2
            .divided_ad_power(Gen::X(0), 2, &g2.gen_elem(Gen::Y(theta)))
            .unwrap();
        assert!(out.is_integral());
        assert!(matches!(
            g2.divided_ad_power(Gen::H(0), 1, &g2.gen_elem(Gen::Y(0))),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn divided_powers_preserve_the_integer_form() {
        for label in ["A2", "B2", "G2"] {
            let t = table(label);
            for i in 0..t.positive_count() {
                for g in [Gen::X(i), Gen::Y(i)] {
                    for z in t.all_gens() {
                        for k in 0..=6 {
                            let out = t.divided_ad_power(g, k, &t.gen_elem(z)).unwrap();
                            assert!(out.is_integral(), "{label}: ({g:?})^[{k}] on {z:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn k0_and_unit_examples() {
        let a2 = table("A2");
        let (k0, c) = a2.k0_and_unit(0, &root(&[1, 1]), 5).unwrap();
        assert_eq!(k0, 1);
        assert_eq!(c.abs(), 1);

        let g2 = table("G2");
        let (k0, c) = g2.k0_and_unit(0, &root(&[3, 1]), 5).unwrap();
        assert_eq!(k0, 3);
        assert_eq!(c.abs(), 1);

        let b2 = table("B2");
        let (k0, c) = b2.k0_and_unit(1, &root(&[1, 2]), 3).unwrap();
        assert_eq!(k0, 2);
        assert_eq!(c.abs(), 1);

        assert!(matches!(b2.k0_and_unit(1, &root(&[1, 2]), 2), Err(Error::HypViolated(_))));
        assert!(matches!(g2.k0_and_unit(0, &root(&[3, 1]), 3), Err(Error::HypViolated(_))));
        // γ - α ∉ Φ⁺ violates the precondition
        assert!(matches!(a2.k0_and_unit(0, &root(&[0, 1]), 5), Err(Error::BadInput(_))));
    }

    #[test]
    fn structure_constants_verify_per_type() {
        for label in ["A2", "B2", "G2", "A3", "B3", "C3", "D4", "F4"] {
            let t = table(label);
            assert!(t.verify_antisymmetry(), "{label}: antisymmetry");
            assert!(t.verify_magnitudes(), "{label}: magnitudes");
            assert!(t.verify_jacobi(), "{label}: Jacobi");
        }
    }

    #[test]
    fn table_json_is_deterministic_and_well_shaped() {
        let a1 = table("A1");
        let j1 = a1.to_json();
        let j2 = table("A1").to_json();
        assert_eq!(j1, j2);
        let entries = j1.as_array().unwrap();
        assert!(!entries.is_empty());
        for e in entries {
            assert!(e.get("bra").is_some() && e.get("ket").is_some() && e.get("out").is_some());
        }
        // [y, x] = -h in A1
        let yx = entries
            .iter()
            .find(|e| e["bra"] == "y[1]" && e["ket"] == "x[1]")
            .unwrap();
        assert_eq!(yx["out"]["h[1]"], "-1");
    }

    #[test]
    fn hyp_thresholds() {
        assert_eq!("A3".parse::<TypeLabel>().unwrap().hyp_threshold(), 1);
        assert_eq!("B4".parse::<TypeLabel>().unwrap().hyp_threshold(), 2);
        assert_eq!("C3".parse::<TypeLabel>().unwrap().hyp_threshold(), 2);
        assert_eq!("F4".parse::<TypeLabel>().unwrap().hyp_threshold(), 2);
        assert_eq!("G2".parse::<TypeLabel>().unwrap().hyp_threshold(), 3);
    }

    #[test]
    fn scaling_and_addition_on_elements() {
        let a2 = table("A2");
        let e = a2.gen_elem(Gen::Y(0)).scale(&ratio(1, 2));
        let f = e.add(&e).unwrap();
        assert_eq!(f, a2.gen_elem(Gen::Y(0)));
        let z = f.add(&f.neg()).unwrap();
        assert!(z.is_zero());
    }
}
