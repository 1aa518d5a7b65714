//! Root systems of rank ≤ 4 in Bourbaki numbering: A1–A4, B2–B4, C3, C4, D4,
//! F4, G2. Positive roots are enumerated by height induction from the Cartan
//! matrix and held in a fixed total order (height, then descending lex) that
//! every other module treats as canonical. Roots live in simple-root
//! coordinates, weights in coroot coordinates; all arithmetic is exact.

use crate::error::Error;
use crate::linalg::{rat, QMat, Rat};
use itertools::Itertools;
use num::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Dynkin type tag, e.g. `A2`, `F4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeLabel {
    A(u8),
    B(u8),
    C(u8),
    D(u8),
    F4,
    G2,
}

impl TypeLabel {
    pub const ALL: [TypeLabel; 12] = [
        TypeLabel::A(1),
        TypeLabel::A(2),
        TypeLabel::A(3),
        TypeLabel::A(4),
        TypeLabel::B(2),
        TypeLabel::B(3),
        TypeLabel::B(4),
        TypeLabel::C(3),
        TypeLabel::C(4),
        TypeLabel::D(4),
        TypeLabel::F4,
        TypeLabel::G2,
    ];

    pub fn rank(&self) -> usize {
        match self {
            TypeLabel::A(n) | TypeLabel::B(n) | TypeLabel::C(n) | TypeLabel::D(n) => *n as usize,
            TypeLabel::F4 => 4,
            TypeLabel::G2 => 2,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::A(n) => write!(f, "A{n}"),
            TypeLabel::B(n) => write!(f, "B{n}"),
            TypeLabel::C(n) => write!(f, "C{n}"),
            TypeLabel::D(n) => write!(f, "D{n}"),
            TypeLabel::F4 => write!(f, "F4"),
            TypeLabel::G2 => write!(f, "G2"),
        }
    }
}

impl std::str::FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = match s.trim() {
            "A1" => TypeLabel::A(1),
            "A2" => TypeLabel::A(2),
            "A3" => TypeLabel::A(3),
            "A4" => TypeLabel::A(4),
            "B2" => TypeLabel::B(2),
            "B3" => TypeLabel::B(3),
            "B4" => TypeLabel::B(4),
            "C3" => TypeLabel::C(3),
            "C4" => TypeLabel::C(4),
            "D4" => TypeLabel::D(4),
            "F4" => TypeLabel::F4,
            "G2" => TypeLabel::G2,
            other => return Err(Error::UnknownType(other.to_string())),
        };
        Ok(t)
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A root in simple-root coordinates; negative roots have all-nonpositive
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Root {
    pub coords: Vec<i64>,
}

impl Root {
    pub fn new(coords: Vec<i64>) -> Self {
        Root { coords }
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.height() > 0
    }

    pub fn negated(&self) -> Root {
        Root::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coords.iter().join(","))
    }
}

/// A weight in coroot coordinates: entry i is ⟨λ, αᵢ∨⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    pub coroot: Vec<Rat>,
}

impl Weight {
    pub fn new(coroot: Vec<Rat>) -> Self {
        Weight { coroot }
    }

    pub fn rank(&self) -> usize {
        self.coroot.len()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight::new(
            self.coroot
                .iter()
                .zip(&other.coroot)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight::new(
            self.coroot
                .iter()
                .zip(&other.coroot)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coroot.iter().join(","))
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coroot.iter().map(|c| c.to_string()))
    }
}

/// Subset I of the simple roots together with the split of Φ⁺ it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicSubset {
    /// 0-based indices of the simple roots in I.
    pub indices: BTreeSet<usize>,
    /// Per positive root (in canonical order): is it supported only on I?
    in_levi: Vec<bool>,
}

impl ParabolicSubset {
    pub fn contains_root(&self, positive_index: usize) -> bool {
        self.in_levi[positive_index]
    }

    /// Canonical indices of Φ⁺ ∖ Φ_I⁺.
    pub fn outside_indices(&self) -> Vec<usize> {
        (0..self.in_levi.len()).filter(|&i| !self.in_levi[i]).collect()
    }
}

/// Lexicographic comparison of equal-length coordinate vectors: the first
/// differing entry decides.
pub fn lex_compare(a: &[i64], b: &[i64]) -> Result<Ordering, Error> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return Ok(other),
        }
    }
    Ok(Ordering::Equal)
}

/// Weyl group element as an integer matrix acting on simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    pub mat: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            mat: (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.mat
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.mat.len();
        WeylElement {
            mat: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| self.mat[i][k] * other.mat[k][j]).sum())
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub label: TypeLabel,
    pub rank: usize,
    /// cartan[i][j] = ⟨α_j, α_i∨⟩.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots sorted by (height, then descending lex); simple roots
    /// occupy the first `rank` slots in index order.
    pub positive_roots: Vec<Root>,
    /// Half-squared-lengths d_i = (αᵢ,αᵢ)/2, scaled to coprime integers.
    pub length_factors: Vec<i64>,
    index: BTreeMap<Vec<i64>, usize>,
}

impl RootSystem {
    /// Builds the full root system for a supported type tag.
    pub fn build(label: &str) -> Result<RootSystem, Error> {
        let label: TypeLabel = label.parse()?;
        Ok(Self::build_label(label))
    }

    pub fn build_label(label: TypeLabel) -> RootSystem {
        let rank = label.rank();
        let cartan = cartan_matrix(label);

        // height induction: β + αᵢ is a root iff q = r + ⟨β, αᵢ∨⟩·(-1) ... > 0
        // with r the depth of the downward αᵢ-string through β.
        let mut positive: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut level: Vec<Vec<i64>> = Vec::new();
        for i in 0..rank {
            let mut e = vec![0i64; rank];
            e[i] = 1;
            positive.insert(e.clone());
            level.push(e);
        }
        while !level.is_empty() {
            let mut next = Vec::new();
            for beta in &level {
                for i in 0..rank {
                    let mut r = 0i64;
                    loop {
                        let down: Vec<i64> = beta
                            .iter()
                            .enumerate()
                            .map(|(k, &c)| if k == i { c - (r + 1) } else { c })
                            .collect();
                        if positive.contains(&down) {
                            r += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
                    let q = r - pairing;
                    if q > 0 {
                        let up: Vec<i64> = beta
                            .iter()
                            .enumerate()
                            .map(|(k, &c)| if k == i { c + 1 } else { c })
                            .collect();
                        if positive.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            level = next;
        }

        let mut positive_roots: Vec<Root> = positive.into_iter().map(Root::new).collect();
        positive_roots.sort_by(|a, b| {
            a.height()
                .cmp(&b.height())
                .then_with(|| lex_compare(&b.coords, &a.coords).expect("equal lengths"))
        });
        let index = positive_roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.coords.clone(), i))
            .collect();

        let length_factors = length_factors(&cartan, rank);

        RootSystem { label, rank, cartan, positive_roots, length_factors, index }
    }

    pub fn positive_count(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut c = vec![0i64; self.rank];
        c[i] = 1;
        Root::new(c)
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots.last().expect("nonempty root system")
    }

    /// Index of a positive root in the canonical order.
    pub fn index_of(&self, root: &Root) -> Option<usize> {
        self.index.get(&root.coords).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v) || self.index.contains_key(&v.iter().map(|c| -c).collect::<Vec<_>>())
    }

    fn check_root(&self, v: &Root) -> Result<(), Error> {
        if self.is_root(&v.coords) {
            Ok(())
        } else {
            Err(Error::NotARoot(v.to_string()))
        }
    }

    pub fn check_positive_root(&self, v: &Root) -> Result<usize, Error> {
        self.index_of(v).ok_or_else(|| Error::NotAPositiveRoot(v.to_string()))
    }

    pub fn check_simple_index(&self, i: usize) -> Result<(), Error> {
        if i < self.rank {
            Ok(())
        } else {
            Err(Error::BadSimpleIndex { got: i, rank: self.rank })
        }
    }

    /// Symmetric W-invariant form (a, b) on the root lattice, integer-scaled.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                acc += a[i] * b[j] * self.length_factors[i] * self.cartan[i][j];
            }
        }
        acc
    }

    /// ⟨v, αᵢ∨⟩ for a vector in simple-root coordinates.
    pub fn pairing_root(&self, v: &Root, i: usize) -> Result<i64, Error> {
        self.check_simple_index(i)?;
        Ok((0..self.rank).map(|j| self.cartan[i][j] * v.coords[j]).sum())
    }

    /// ⟨λ, αᵢ∨⟩ for a weight: the i-th coroot coordinate.
    pub fn pairing_weight(&self, w: &Weight, i: usize) -> Result<Rat, Error> {
        self.check_simple_index(i)?;
        if w.rank() != self.rank {
            return Err(Error::LengthMismatch(w.rank(), self.rank));
        }
        Ok(w.coroot[i].clone())
    }

    /// ⟨b, a∨⟩ = 2(b,a)/(a,a) for arbitrary roots.
    pub fn pairing_roots(&self, b: &Root, a: &Root) -> i64 {
        let num = 2 * self.inner(&b.coords, &a.coords);
        let den = self.inner(&a.coords, &a.coords);
        debug_assert!(den != 0 && num % den == 0, "pairing must be integral");
        num / den
    }

    /// ⟨Σ νⱼαⱼ, αᵢ∨⟩ for a root-lattice offset.
    pub fn offset_pairing(&self, offset: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| self.cartan[i][j] * offset[j]).sum()
    }

    /// Coordinates of β∨ in the basis of simple coroots; always integral.
    pub fn coroot_coords(&self, beta: &Root) -> Vec<i64> {
        let d_beta = self.inner(&beta.coords, &beta.coords) / 2;
        (0..self.rank)
            .map(|k| {
                let num = self.length_factors[k] * beta.coords[k];
                debug_assert_eq!(num % d_beta, 0, "coroot coordinates must be integral");
                num / d_beta
            })
            .collect()
    }

    /// The Weyl vector ρ in coroot coordinates: all entries 1.
    pub fn rho(&self) -> Weight {
        Weight::new(vec![Rat::one(); self.rank])
    }

    /// (r, q) for the β-string through γ: γ − rβ, …, γ + qβ all roots.
    pub fn root_string(&self, beta: &Root, gamma: &Root) -> Result<(u32, u32), Error> {
        self.check_root(beta)?;
        self.check_root(gamma)?;
        if gamma.coords == beta.coords || gamma.coords == beta.negated().coords {
            return Err(Error::ProportionalRoots);
        }
        let walk = |dir: i64| {
            let mut k = 0u32;
            loop {
                let v: Vec<i64> = gamma
                    .coords
                    .iter()
                    .zip(&beta.coords)
                    .map(|(g, b)| g + dir * (k as i64 + 1) * b)
                    .collect();
                if self.is_root(&v) {
                    k += 1;
                } else {
                    return k;
                }
            }
        };
        Ok((walk(-1), walk(1)))
    }

    /// Builds a parabolic subset from explicit simple indices.
    pub fn parabolic(&self, indices: impl IntoIterator<Item = usize>) -> Result<ParabolicSubset, Error> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        for &i in &indices {
            self.check_simple_index(i)?;
        }
        let in_levi = self
            .positive_roots
            .iter()
            .map(|r| {
                r.coords
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| c == 0 || indices.contains(&j))
            })
            .collect();
        Ok(ParabolicSubset { indices, in_levi })
    }

    /// I = {i : ⟨λ, αᵢ∨⟩ ∈ ℤ≥0}, the largest I making λ dominant-integral
    /// on the Levi part.
    pub fn max_parabolic_subset(&self, lambda: &Weight) -> Result<ParabolicSubset, Error> {
        if lambda.rank() != self.rank {
            return Err(Error::LengthMismatch(lambda.rank(), self.rank));
        }
        let idx: Vec<usize> = (0..self.rank)
            .filter(|&i| {
                let c = &lambda.coroot[i];
                c.is_integer() && !c.is_negative()
            })
            .collect();
        self.parabolic(idx)
    }

    /// Elements β⁺ of S whose positive ray misses the cone spanned by the
    /// remaining elements. Decided exactly via Carathéodory: membership in the
    /// cone is witnessed on some linearly independent subset of size ≤ rank.
    pub fn extremal_elements(&self, s: &[Root]) -> Vec<Root> {
        assert!(!s.is_empty(), "extremal_elements needs a non-empty set");
        for r in s {
            assert!(self.index_of(r).is_some(), "extremal_elements expects positive roots");
        }
        let mut out = Vec::new();
        for (ci, cand) in s.iter().enumerate() {
            let others: Vec<&Root> = s
                .iter()
                .enumerate()
                .filter(|(i, r)| *i != ci && r.coords != cand.coords)
                .map(|(_, r)| r)
                .collect();
            let mut in_cone = false;
            'subsets: for size in 1..=self.rank.min(others.len()) {
                for subset in (0..others.len()).combinations(size) {
                    if let Some(sol) = self.solve_unique_conic(&subset, &others, cand) {
                        if sol.iter().all(|x| !x.is_negative()) {
                            in_cone = true;
                            break 'subsets;
                        }
                    }
                }
            }
            if !in_cone && !out.contains(cand) {
                out.push(cand.clone());
            }
        }
        out
    }

    /// Unique solution of Σ xₜ·t = c over an independent subset, if any.
    fn solve_unique_conic(&self, subset: &[usize], others: &[&Root], c: &Root) -> Option<Vec<Rat>> {
        let cols: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&k| others[k].coords.iter().map(|&x| rat(x)).collect())
            .collect();
        let a = QMat::from_cols(&cols);
        if a.rank() < subset.len() {
            return None; // dependent subsets are covered by smaller ones
        }
        let b: Vec<Rat> = c.coords.iter().map(|&x| rat(x)).collect();
        a.solve(&b)
    }

    /// All ν ∈ ℤ≥0^t with Σ νᵢβᵢ = n·γ, in deterministic DFS order
    /// (multiplicities tried from high to low at each root).
    pub fn enumerate_compositions(&self, gamma: &Root, n: u32) -> Result<Vec<Vec<u32>>, Error> {
        self.check_positive_root(gamma)?;
        let target: Vec<i64> = gamma.coords.iter().map(|&c| c * n as i64).collect();
        Ok(self.lattice_compositions(&target))
    }

    /// All ν ∈ ℤ≥0^t with Σ νᵢβᵢ = target, for any non-negative lattice
    /// vector; the Kostant partition enumeration.
    pub fn lattice_compositions(&self, target: &[i64]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if target.len() != self.rank || target.iter().any(|&c| c < 0) {
            return out;
        }
        let mut current = vec![0u32; self.positive_count()];
        self.compositions_rec(0, target, &mut current, &mut out);
        out
    }

    fn compositions_rec(
        &self,
        root_idx: usize,
        remaining: &[i64],
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if remaining.iter().all(|&c| c == 0) {
            let mut done = current.clone();
            for m in done.iter_mut().skip(root_idx) {
                *m = 0;
            }
            out.push(done);
            return;
        }
        if root_idx == self.positive_count() {
            return;
        }
        let beta = &self.positive_roots[root_idx].coords;
        let max_mult = (0..self.rank)
            .filter(|&j| beta[j] > 0)
            .map(|j| remaining[j] / beta[j])
            .min()
            .unwrap_or(0);
        for m in (0..=max_mult).rev() {
            let rest: Vec<i64> = remaining
                .iter()
                .zip(beta)
                .map(|(r, b)| r - m * b)
                .collect();
            if rest.iter().any(|&c| c < 0) {
                continue;
            }
            current[root_idx] = m as u32;
            self.compositions_rec(root_idx + 1, &rest, current, out);
        }
        current[root_idx] = 0;
    }

    pub fn simple_reflection(&self, i: usize) -> Result<WeylElement, Error> {
        self.check_simple_index(i)?;
        let mut w = WeylElement::identity(self.rank);
        for j in 0..self.rank {
            w.mat[i][j] -= self.cartan[i][j];
        }
        Ok(w)
    }

    /// Composes a reduced or unreduced word of simple reflections
    /// (leftmost letter acts last).
    pub fn weyl_word(&self, word: &[usize]) -> Result<WeylElement, Error> {
        let mut w = WeylElement::identity(self.rank);
        for &i in word {
            w = w.compose(&self.simple_reflection(i)?);
        }
        Ok(w)
    }

    /// Materializes W by closure under the simple reflections.
    pub fn weyl_group(&self) -> Result<Vec<WeylElement>, Error> {
        if self.rank > crate::MAX_RANK {
            return Err(Error::RankCap { got: self.rank, cap: crate::MAX_RANK });
        }
        let gens: Vec<WeylElement> = (0..self.rank)
            .map(|i| self.simple_reflection(i))
            .collect::<Result<_, _>>()?;
        Ok(close_under(&gens, self.rank))
    }

    fn levi_weyl_subgroup(&self, par: &ParabolicSubset) -> Result<BTreeSet<WeylElement>, Error> {
        let gens: Vec<WeylElement> = par
            .indices
            .iter()
            .map(|&i| self.simple_reflection(i))
            .collect::<Result<_, _>>()?;
        Ok(close_under(&gens, self.rank).into_iter().collect())
    }

    /// For w ∉ W_I: the first β ∈ Φ⁺ ∖ Φ_I⁺ (canonical order) with w⁻¹β < 0.
    /// Returns `None` exactly when w ∈ W_I.
    pub fn weyl_coset_witness(
        &self,
        word: &[usize],
        par: &ParabolicSubset,
    ) -> Result<Option<Root>, Error> {
        if self.rank > crate::MAX_RANK {
            return Err(Error::RankCap { got: self.rank, cap: crate::MAX_RANK });
        }
        let w = self.weyl_word(word)?;
        if self.levi_weyl_subgroup(par)?.contains(&w) {
            return Ok(None);
        }
        let rev: Vec<usize> = word.iter().rev().copied().collect();
        let w_inv = self.weyl_word(&rev)?;
        for idx in par.outside_indices() {
            let img = w_inv.apply(&self.positive_roots[idx].coords);
            if img.iter().sum::<i64>() < 0 {
                return Ok(Some(self.positive_roots[idx].clone()));
            }
        }
        unreachable!("w outside W_I must send some outside positive root negative under w⁻¹");
    }
}

fn close_under(gens: &[WeylElement], rank: usize) -> Vec<WeylElement> {
    let mut seen: BTreeSet<WeylElement> = BTreeSet::new();
    let mut queue = vec![WeylElement::identity(rank)];
    seen.insert(queue[0].clone());
    while let Some(w) = queue.pop() {
        for g in gens {
            let next = w.compose(g);
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

fn cartan_matrix(label: TypeLabel) -> Vec<Vec<i64>> {
    let rank = label.rank();
    let mut chain = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        chain[i][i] = 2;
        if i + 1 < rank {
            chain[i][i + 1] = -1;
            chain[i + 1][i] = -1;
        }
    }
    match label {
        TypeLabel::A(_) => chain,
        TypeLabel::B(_) => {
            // α_rank is short: ⟨α_{ℓ-1}, α_ℓ∨⟩ = -2
            chain[rank - 1][rank - 2] = -2;
            chain
        }
        TypeLabel::C(_) => {
            // α_rank is long: ⟨α_ℓ, α_{ℓ-1}∨⟩ = -2
            chain[rank - 2][rank - 1] = -2;
            chain
        }
        TypeLabel::D(_) => {
            // branch node is α₂ (Bourbaki): edges 1-2, 2-3, 2-4
            let mut m = vec![vec![0i64; 4]; 4];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 2;
            }
            for (a, b) in [(0, 1), (1, 2), (1, 3)] {
                m[a][b] = -1;
                m[b][a] = -1;
            }
            m
        }
        TypeLabel::F4 => vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, 0],
            vec![0, -2, 2, -1],
            vec![0, 0, -1, 2],
        ],
        TypeLabel::G2 => vec![vec![2, -3], vec![-1, 2]],
    }
}

/// Solves d_i·cartan[i][j] = d_j·cartan[j][i] over the Dynkin graph and scales
/// to coprime positive integers.
fn length_factors(cartan: &[Vec<i64>], rank: usize) -> Vec<i64> {
    let mut d = vec![None::<Rat>; rank];
    d[0] = Some(Rat::one());
    let mut queue = vec![0usize];
    while let Some(i) = queue.pop() {
        for j in 0..rank {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                let di = d[i].clone().expect("visited");
                d[j] = Some(di * rat(cartan[i][j]) / rat(cartan[j][i]));
                queue.push(j);
            }
        }
    }
    let vals: Vec<Rat> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let lcm_den = vals
        .iter()
        .map(|v| v.denom().clone())
        .fold(num::BigInt::one(), |a, b| num::Integer::lcm(&a, &b));
    let ints: Vec<num::BigInt> = vals.iter().map(|v| (v * Rat::from_integer(lcm_den.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(num::BigInt::zero(), |a, b| num::Integer::gcd(&a, b));
    ints.iter()
        .map(|v| {
            let q: num::BigInt = v / &gcd;
            i64::try_from(&q).expect("small length factors")
        })
        .collect()
}
