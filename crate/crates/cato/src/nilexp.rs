//! Exponentials in the nilpotent radical opposite a parabolic.
//!
//! A unipotent element is stored as its logarithm, a combination of lowering
//! generators outside the Levi part, so exp and log are exact by
//! construction.  Products are computed through the Baker-Campbell-Hausdorff
//! element, the group acts on truncated formal completions of a module
//! through the exponential series, and the support-reduction step peels the
//! p-integral part of the logarithm off while raising its minimal height.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde_json::json;

use crate::chevalley::{ChevalleyTable, Gen, LieElement};
use crate::error::Error;
use crate::integrality::vp_factorial;
use crate::linalg::{ratio, vp_rat, Rat};
use crate::modules_o::TruncatedModule;
use crate::pbw::{lie_to_pbw, multiply, PBWElement};
use crate::rootsys::{lex_compare, ParabolicSubset, Root, RootSystem};

/// Element u of the unipotent radical U⁻, stored as log u supported on the
/// lowering generators y_β with β outside the Levi subsystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotentElement {
    pub log_coords: LieElement,
    pub levi: ParabolicSubset,
}

impl UnipotentElement {
    pub fn new(
        ct: &ChevalleyTable,
        log_coords: LieElement,
        levi: ParabolicSubset,
    ) -> Result<Self, Error> {
        if log_coords.label() != ct.label() {
            return Err(Error::TableMismatch(
                log_coords.label().to_string(),
                ct.label().to_string(),
            ));
        }
        for (&g, _) in log_coords.terms() {
            let ok = matches!(g, Gen::Y(i) if !levi.contains_root(i));
            if !ok {
                return Err(Error::BadInput(format!(
                    "log u may only involve lowering generators outside the Levi part, got {}",
                    ct.gen_name(g)
                )));
            }
        }
        Ok(Self { log_coords, levi })
    }

    pub fn identity(ct: &ChevalleyTable, levi: ParabolicSubset) -> Self {
        Self { log_coords: LieElement::zero(ct.label()), levi }
    }

    /// log u⁻¹ = −log u.
    pub fn inverse(&self) -> Self {
        Self { log_coords: self.log_coords.neg(), levi: self.levi.clone() }
    }

    /// Indices of the positive roots carrying a non-zero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.log_coords
            .terms()
            .keys()
            .map(|g| match g {
                Gen::Y(i) => *i,
                _ => unreachable!("validated on construction"),
            })
            .collect()
    }

    pub fn coefficient(&self, root_idx: usize) -> Rat {
        self.log_coords.coeff(Gen::Y(root_idx))
    }
}

fn require_lowering_support(ct: &ChevalleyTable, e: &LieElement) -> Result<(), Error> {
    if e.label() != ct.label() {
        return Err(Error::TableMismatch(e.label().to_string(), ct.label().to_string()));
    }
    for (&g, _) in e.terms() {
        if !matches!(g, Gen::Y(_)) {
            return Err(Error::BadInput(format!(
                "nilpotent support required, got {}",
                ct.gen_name(g)
            )));
        }
    }
    Ok(())
}

fn truncate_by_height(e: PBWElement, rs: &RootSystem, cap: u32) -> PBWElement {
    let label = e.label();
    let mut out = PBWElement::zero(label);
    for (m, c) in e.terms() {
        if m.y_height(rs) <= cap {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

/// exp(e) in the enveloping algebra, truncated beyond height `cap`; exact
/// for lowering-only support because each power raises the height.
fn exp_pbw(ct: &ChevalleyTable, e: &LieElement, cap: u32) -> Result<PBWElement, Error> {
    let base = lie_to_pbw(ct, e)?;
    let mut sum = PBWElement::one(ct);
    let mut power = PBWElement::one(ct);
    for k in 1..=cap as i64 {
        power = truncate_by_height(multiply(ct, &power, &base)?, ct.rs(), cap);
        power = power.scale(&ratio(1, k));
        if power.is_zero() {
            break;
        }
        sum = sum.add(&power)?;
    }
    Ok(sum)
}

/// log(exp x · exp y), computed associatively in the enveloping algebra with
/// all terms beyond the height of the highest root discarded; nested
/// brackets of greater height vanish in the Lie algebra, so the truncation
/// is exact.  The result of the series is necessarily primitive, and the
/// conversion back to a Lie element asserts exactly that.
pub fn bch(ct: &ChevalleyTable, x: &LieElement, y: &LieElement) -> Result<LieElement, Error> {
    require_lowering_support(ct, x)?;
    require_lowering_support(ct, y)?;
    let rs = ct.rs();
    let cap = rs.highest_root().height() as u32;
    let prod = truncate_by_height(
        multiply(ct, &exp_pbw(ct, x, cap)?, &exp_pbw(ct, y, cap)?)?,
        rs,
        cap,
    );
    let shifted = prod.sub(&PBWElement::one(ct))?;
    let mut log = PBWElement::zero(ct.label());
    let mut power = PBWElement::one(ct);
    for k in 1..=cap as i64 {
        power = truncate_by_height(multiply(ct, &power, &shifted)?, rs, cap);
        if power.is_zero() {
            break;
        }
        let c = ratio(if k % 2 == 1 { 1 } else { -1 }, k);
        log = log.add(&power.scale(&c))?;
    }

    let mut out = LieElement::zero(ct.label());
    for (m, c) in log.terms() {
        let single = m.pos_exps.iter().all(|&e| e == 0)
            && m.cartan_exps.iter().all(|&e| e == 0)
            && m.neg_exps.iter().map(|&e| e as u64).sum::<u64>() == 1;
        assert!(single, "the logarithm of a product of exponentials must be primitive");
        let idx = m.neg_exps.iter().position(|&e| e == 1).unwrap();
        out.add_term(Gen::Y(idx), c.clone());
    }
    Ok(out)
}

/// Truncated element of the formal completion ∏_μ M_μ: one coordinate
/// vector per retained root-lattice offset, keyed by the module's offset
/// index.  All-zero components are dropped on insertion.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalVector {
    components: BTreeMap<usize, Vec<Rat>>,
}

impl FormalVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// v⁺ as a formal vector: the single component at offset 0.
    pub fn highest_weight(m: &TruncatedModule) -> Self {
        let off = m.offset_index(&vec![0; m.rs().rank]).expect("zero offset present");
        let mut components = BTreeMap::new();
        components.insert(off, vec![Rat::one()]);
        Self { components }
    }

    pub fn from_components(
        m: &TruncatedModule,
        entries: impl IntoIterator<Item = (usize, Vec<Rat>)>,
    ) -> Result<Self, Error> {
        let mut out = Self::zero();
        for (off, vec) in entries {
            if vec.len() != m.dim_at(off) {
                return Err(Error::LengthMismatch(vec.len(), m.dim_at(off)));
            }
            out.accumulate(off, vec);
        }
        Ok(out)
    }

    pub fn components(&self) -> &BTreeMap<usize, Vec<Rat>> {
        &self.components
    }

    pub fn component(&self, off: usize) -> Option<&Vec<Rat>> {
        self.components.get(&off)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&off, vec) in &other.components {
            out.accumulate(off, vec.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let components = self
            .components
            .iter()
            .map(|(&off, vec)| (off, vec.iter().map(|x| x * c).collect()))
            .collect();
        Self { components }
    }

    fn accumulate(&mut self, off: usize, vec: Vec<Rat>) {
        use std::collections::btree_map::Entry;
        match self.components.entry(off) {
            Entry::Vacant(slot) => {
                if vec.iter().any(|x| !x.is_zero()) {
                    slot.insert(vec);
                }
            }
            Entry::Occupied(mut slot) => {
                for (a, b) in slot.get_mut().iter_mut().zip(vec) {
                    *a += b;
                }
                if slot.get().iter().all(|x| x.is_zero()) {
                    slot.remove();
                }
            }
        }
    }
}

/// Applies a Lie algebra element componentwise.  Lowering images past the
/// depth are dropped, the documented truncation of the formal completion;
/// raising out of the retained cone is the zero map.
pub fn apply_lie(
    m: &TruncatedModule,
    e: &LieElement,
    v: &FormalVector,
) -> Result<FormalVector, Error> {
    if e.label() != m.rs().label {
        return Err(Error::TableMismatch(e.label().to_string(), m.rs().label.to_string()));
    }
    let mut out = FormalVector::zero();
    for (&off, vec) in v.components() {
        if vec.len() != m.dim_at(off) {
            return Err(Error::LengthMismatch(vec.len(), m.dim_at(off)));
        }
        for (&g, c) in e.terms() {
            match m.action_matrix(g, off) {
                Err(Error::BeyondDepth { .. }) => continue,
                Err(err) => return Err(err),
                Ok(None) => continue,
                Ok(Some((dst, mat))) => {
                    let img: Vec<Rat> = mat.mul_vec(vec).into_iter().map(|x| x * c).collect();
                    out.accumulate(dst, img);
                }
            }
        }
    }
    Ok(out)
}

/// δ_u·v = Σ_{n≥0} (1/n!)·(log u)ⁿ·v componentwise; finite per retained
/// offset because the logarithm raises the height.  Satisfies the group law
/// δ_{u₁}·δ_{u₂} = δ_{u₁u₂} with the product taken through `bch`.
pub fn delta_action(
    m: &TruncatedModule,
    u: &UnipotentElement,
    v: &FormalVector,
) -> Result<FormalVector, Error> {
    let mut total = v.clone();
    let mut cur = v.clone();
    let mut k = 1i64;
    loop {
        cur = apply_lie(m, &u.log_coords, &cur)?.scale(&ratio(1, k));
        if cur.is_zero() {
            break;
        }
        total = total.add(&cur);
        k += 1;
    }
    Ok(total)
}

/// Σ = Σ_{n≥0} (1/n!)·(−log u)ⁿ·v⁺, the expansion of δ_{u⁻¹}·v⁺.
pub fn sigma_series(u: &UnipotentElement, m: &TruncatedModule) -> Result<FormalVector, Error> {
    delta_action(m, &u.inverse(), &FormalVector::highest_weight(m))
}

/// Ad(u⁻¹)(x) = Σ_{k≥0} (1/k!)·ad(−log u)ᵏ(x); finite because ad of a
/// nilpotent element is nilpotent.
pub fn adjoint_of_inverse(
    ct: &ChevalleyTable,
    u: &UnipotentElement,
    x: &LieElement,
) -> Result<LieElement, Error> {
    let neg = u.log_coords.neg();
    let mut total = x.clone();
    let mut cur = x.clone();
    let mut k = 1i64;
    loop {
        cur = ct.bracket(&neg, &cur)?.scale(&ratio(1, k));
        if cur.is_zero() {
            break;
        }
        total = total.add(&cur)?;
        k += 1;
    }
    Ok(total)
}

/// Support of log u split at a scale: a coefficient with v_p below
/// `scale_exp` is not a p-integral multiple of the scaled generator
/// p^{scale_exp}·y_β.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSplit {
    /// All root indices in the support of log u.
    pub support: Vec<usize>,
    /// Indices whose coefficient has v_p < scale_exp.
    pub nonintegral: Vec<usize>,
    /// The complement: coefficients already integral at this scale.
    pub integral: Vec<usize>,
}

pub fn b_sets(u: &UnipotentElement, scale_exp: i64, p: u64) -> SupportSplit {
    let mut support = Vec::new();
    let mut nonintegral = Vec::new();
    let mut integral = Vec::new();
    for i in u.support() {
        support.push(i);
        let v = vp_rat(&u.coefficient(i), p).expect("support coefficients are non-zero");
        if v < scale_exp {
            nonintegral.push(i);
        } else {
            integral.push(i);
        }
    }
    SupportSplit { support, nonintegral, integral }
}

/// Minimal height over the integral part of the support, the quantity the
/// reduction drives up.
pub fn integral_min_height(
    rs: &RootSystem,
    u: &UnipotentElement,
    scale_exp: i64,
    p: u64,
) -> Option<i64> {
    b_sets(u, scale_exp, p)
        .integral
        .iter()
        .map(|&i| rs.positive_roots[i].height())
        .min()
}

/// Which guarantee a reduction step delivered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionBranch {
    /// The integral part of the support is now empty.
    Cleared,
    /// Integral coefficients remain, but only at strictly greater height.
    HeightRaised,
}

/// One step u ↦ u·exp(−z′) with z′ the integral part of log u.  Bracket
/// corrections land strictly above the minimal integral height, so iterating
/// clears the integral part within the height of the highest root.
pub fn reduction_step(
    ct: &ChevalleyTable,
    u: &UnipotentElement,
    scale_exp: i64,
    p: u64,
) -> Result<(UnipotentElement, ReductionBranch), Error> {
    let rs = ct.rs();
    let split = b_sets(u, scale_exp, p);
    if split.nonintegral.is_empty() {
        return Err(Error::BadInput(
            "log u is already integral at this scale; nothing to reduce".into(),
        ));
    }
    if split.integral.is_empty() {
        return Ok((u.clone(), ReductionBranch::Cleared));
    }
    let ht_before = integral_min_height(rs, u, scale_exp, p).unwrap();
    let mut zp = LieElement::zero(ct.label());
    for &i in &split.integral {
        zp.add_term(Gen::Y(i), u.coefficient(i));
    }
    let log1 = bch(ct, &u.log_coords, &zp.neg())?;
    let u1 = UnipotentElement::new(ct, log1, u.levi.clone())?;
    let branch = match integral_min_height(rs, &u1, scale_exp, p) {
        None => ReductionBranch::Cleared,
        Some(ht_after) => {
            assert!(ht_after > ht_before, "reduction must raise the minimal integral height");
            ReductionBranch::HeightRaised
        }
    };
    Ok((u1, branch))
}

/// The extremal support root chosen when several qualify: smallest in the
/// coordinate lexicographic order.
pub fn choose_extremal(rs: &RootSystem, support: &[usize]) -> Option<usize> {
    let roots: Vec<Root> = support.iter().map(|&i| rs.positive_roots[i].clone()).collect();
    let extremal = rs.extremal_elements(&roots);
    extremal
        .into_iter()
        .min_by(|a, b| lex_compare(&a.coords, &b.coords).expect("equal rank"))
        .and_then(|r| rs.index_of(&r))
}

/// For each n ≤ depth/ht(β⁺), the valuation of the scalar multiplying
/// y_{β⁺}ⁿ·v⁺ in the offset-nβ⁺ component of Σ, namely
/// n·v_p(t) − v_p(n!) for t the coefficient of y_{β⁺} in log u.
pub fn coefficient_valuations(
    u: &UnipotentElement,
    beta_plus: &Root,
    m: &TruncatedModule,
    p: u64,
) -> Result<Vec<(u32, i64)>, Error> {
    let rs = m.rs();
    let bi = rs.check_positive_root(beta_plus)?;
    let support = u.support();
    if !support.contains(&bi) {
        return Err(Error::BadInput(format!(
            "beta+ = {beta_plus} does not occur in log u"
        )));
    }
    let roots: Vec<Root> = support.iter().map(|&i| rs.positive_roots[i].clone()).collect();
    let extremal = rs.extremal_elements(&roots);
    if !extremal.iter().any(|r| r.coords == beta_plus.coords) {
        return Err(Error::BadInput(format!(
            "beta+ = {beta_plus} is not extremal in the support of log u"
        )));
    }
    let v = vp_rat(&u.coefficient(bi), p).expect("support coefficient is non-zero");
    let nmax = m.depth / beta_plus.height() as u32;
    Ok((0..=nmax).map(|n| (n, n as i64 * v - vp_factorial(n as u64, p) as i64)).collect())
}

pub fn ledger_json(ledger: &[(u32, i64)]) -> serde_json::Value {
    json!(ledger.iter().map(|&(n, vp)| json!({"n": n, "vp": vp})).collect::<Vec<_>>())
}
