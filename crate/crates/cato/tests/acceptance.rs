//! Full verification suite.  Each numbered criterion runs independently and
//! reports one pass/fail line; the test fails if any criterion fails or
//! overruns its time budget.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cato::chevalley::{ChevalleyTable, Gen, LieElement};
use cato::integrality::{abcd_check, hyp_gate, relation_space, vp_factorial, RelationInstance, Verdict};
use cato::linalg::{rat, ratio, vp_rat, QMat, Rat};
use cato::modules_o::{hom_dim_verma, singular_vectors, up_ordering, TruncatedModule};
use cato::nilexp::{
    b_sets, bch, choose_extremal, coefficient_valuations, integral_min_height, reduction_step,
    sigma_series, ReductionBranch, UnipotentElement,
};
use cato::rootsys::{Root, RootSystem, TypeLabel, Weight, WeylElement};

fn table(label: TypeLabel) -> Arc<ChevalleyTable> {
    Arc::new(ChevalleyTable::new(RootSystem::build_label(label)))
}

fn weight(coords: &[Rat]) -> Weight {
    Weight::new(coords.to_vec())
}

/// 1. For every non-proportional pair (β, β′) of roots, the β-string through
/// β′ satisfies r − q = ⟨β′, β∨⟩.  Exhaustive over all supported types.
fn c1_root_string_law() -> Result<(), String> {
    for label in TypeLabel::ALL {
        let rs = RootSystem::build_label(label);
        let mut full: Vec<Root> = rs.positive_roots.clone();
        full.extend(rs.positive_roots.iter().map(|r| r.negated()));
        for beta in &full {
            for gamma in &full {
                if gamma.coords == beta.coords || gamma.coords == beta.negated().coords {
                    continue;
                }
                let (r, q) = rs
                    .root_string(beta, gamma)
                    .map_err(|e| format!("{label}: {e}"))?;
                let pairing = rs.pairing_roots(gamma, beta);
                if r as i64 - q as i64 != pairing {
                    return Err(format!(
                        "{label}: string ({r},{q}) through {gamma} along {beta} vs pairing {pairing}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// 2. |N_{β,β′}| = r+1 for all bracketed root pairs, antisymmetry, and the
/// Jacobi identity over all basis triples, per type.
fn c2_structure_constants() -> Result<(), String> {
    for label in TypeLabel::ALL {
        let ct = table(label);
        if !ct.verify_magnitudes() {
            return Err(format!("{label}: magnitude law violated"));
        }
        if !ct.verify_antisymmetry() {
            return Err(format!("{label}: antisymmetry violated"));
        }
        if !ct.verify_jacobi() {
            return Err(format!("{label}: Jacobi identity violated"));
        }
    }
    Ok(())
}

/// 3. Divided powers ad(x_β)ᵏ/k! preserve the integer span of the basis,
/// for every root vector, every basis element, up to vanishing.
fn c3_divided_powers_integral() -> Result<(), String> {
    for label in TypeLabel::ALL {
        let ct = table(label);
        for g in ct.all_gens() {
            if matches!(g, Gen::H(_)) {
                continue;
            }
            for z in ct.all_gens() {
                let z_elem = ct.gen_elem(z);
                let mut k = 1u32;
                loop {
                    let d = ct
                        .divided_ad_power(g, k, &z_elem)
                        .map_err(|e| format!("{label}: {e}"))?;
                    if d.is_zero() {
                        break;
                    }
                    if !d.is_integral() {
                        return Err(format!(
                            "{label}: ad({})^[{k}]({}) leaves the integer form",
                            ct.gen_name(g),
                            ct.gen_name(z)
                        ));
                    }
                    k += 1;
                    if k > 10 {
                        return Err(format!(
                            "{label}: ad({}) fails to nilpotate on {}",
                            ct.gen_name(g),
                            ct.gen_name(z)
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// 4. The weight-sum bound min Σν ≥ n holds for all γ ∈ Φ⁺, n ≤ 6 outside
/// G2, and the G2 counterexample 3(2α₁+α₂) = (3α₁+α₂) + (3α₁+2α₂) is found
/// at n = 3.
fn c4_weight_sum_bound() -> Result<(), String> {
    let clean = [
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
    ];
    for label in clean {
        let rs = RootSystem::build_label(label);
        for gamma in &rs.positive_roots {
            let out = abcd_check(&rs, gamma, 6).map_err(|e| format!("{label}: {e}"))?;
            if !out.holds {
                return Err(format!("{label}: bound fails at {gamma}"));
            }
        }
    }
    let g2 = RootSystem::build_label(TypeLabel::G2);
    let out = abcd_check(&g2, &Root::new(vec![2, 1]), 3).map_err(|e| e.to_string())?;
    let cex = out.counterexample.ok_or("G2 counterexample not found")?;
    if cex.n != 3 || cex.weight_sum != 2 {
        return Err(format!("G2 counterexample at n={} sum={}", cex.n, cex.weight_sum));
    }
    let i31 = g2.index_of(&Root::new(vec![3, 1])).unwrap();
    let i32 = g2.index_of(&Root::new(vec![3, 2])).unwrap();
    let mut expect = vec![0u32; g2.positive_count()];
    expect[i31] = 1;
    expect[i32] = 1;
    if cex.nu != expect {
        return Err(format!("G2 witness {:?} is not the two-root decomposition", cex.nu));
    }
    Ok(())
}

/// 5. For integral regular λ at depth 8, a Verma map M(μ) → M(λ) exists
/// (singular-vector nullspace) iff μ ↑ λ in the dot-orbit ordering.
fn c5_bgg_consistency() -> Result<(), String> {
    let a1: Vec<Vec<Rat>> = [0, 1, 2, 4, -3].iter().map(|&a| vec![rat(a)]).collect();
    let a2: Vec<Vec<Rat>> = [(0, 0), (1, 0), (0, 2), (1, 1), (-3, 2)]
        .iter()
        .map(|&(a, b)| vec![rat(a), rat(b)])
        .collect();
    for (label, grid) in [(TypeLabel::A(1), a1), (TypeLabel::A(2), a2)] {
        let ct = table(label);
        let mut nontrivial = 0usize;
        for coords in grid {
            let lambda = weight(&coords);
            let m = TruncatedModule::build_verma(&lambda, 8, ct.clone())
                .map_err(|e| format!("{label}: {e}"))?;
            for idx in 0..m.offsets().len() {
                let mu = m.weight_at(idx);
                let hom = if idx == 0 {
                    // shared-module shortcut is exact; exercise the public
                    // entry point on the trivial offset as well
                    hom_dim_verma(&ct, &mu, &lambda, 8).map_err(|e| format!("{label}: {e}"))?
                } else {
                    let (_, sv) = singular_vectors(&m, &mu).map_err(|e| format!("{label}: {e}"))?;
                    u8::from(!sv.is_empty())
                };
                let up = up_ordering(ct.rs(), &mu, &lambda).map_err(|e| format!("{label}: {e}"))?;
                if (hom == 1) != up {
                    return Err(format!(
                        "{label}: λ = {lambda:?}, μ = {mu:?}: hom = {hom}, up = {up}"
                    ));
                }
                if hom == 1 && idx > 0 {
                    nontrivial += 1;
                }
            }
        }
        if nontrivial == 0 {
            return Err(format!("{label}: grid produced no non-trivial Verma maps"));
        }
    }
    Ok(())
}

/// 6. Every relation instance on the partially-integral grid gets verdict
/// `holds`: some coefficient with Σν ≥ n stays of valuation ≤ 0 across the
/// whole solution space.
fn c6_unit_coefficient_grid() -> Result<(), String> {
    let mut checked = 0usize;
    let cases: [(TypeLabel, Vec<Rat>, u32, Vec<Vec<i64>>); 2] = [
        (TypeLabel::A(2), vec![rat(0), ratio(1, 2)], 6, vec![vec![0, 1], vec![1, 1]]),
        (
            TypeLabel::B(2),
            vec![ratio(1, 3), rat(2)],
            9,
            vec![vec![1, 0], vec![1, 1], vec![1, 2]],
        ),
    ];
    for (label, lam, depth, gammas) in cases {
        let ct = table(label);
        let lambda = weight(&lam);
        let l = TruncatedModule::simple_quotient(&lambda, depth, ct.clone())
            .map_err(|e| format!("{label}: {e}"))?;
        for gamma_coords in gammas {
            let gamma = Root::new(gamma_coords);
            for p in [5u64, 7] {
                let ctx = hyp_gate(ct.rs(), p);
                for n in 1..=3u32 {
                    if n * gamma.height() as u32 > depth {
                        continue;
                    }
                    for m0 in [0u32, 1] {
                        let inst = RelationInstance::new(ct.rs(), &lambda, &gamma, n, m0, ctx)
                            .map_err(|e| format!("{label} γ={gamma}: {e}"))?;
                        let report = relation_space(&l, &inst)
                            .map_err(|e| format!("{label} γ={gamma} n={n}: {e}"))?;
                        if report.verdict != Verdict::Holds {
                            return Err(format!(
                                "{label} γ={gamma} n={n} p={p} m0={m0}: verdict {}",
                                report.verdict
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    if checked < 5 {
        return Err(format!("only {checked} instances checked"));
    }
    Ok(())
}

fn ad_matrix(ct: &ChevalleyTable, e: &LieElement) -> QMat {
    let dim = ct.dim();
    let mut m = QMat::zeros(dim, dim);
    for j in 0..dim {
        let img = ct.bracket(e, &ct.gen_elem(ct.gen_from_id(j))).unwrap();
        for (&g, c) in img.terms() {
            m.set(ct.gen_id(g), j, c.clone());
        }
    }
    m
}

fn mat_exp(n: &QMat) -> QMat {
    let mut sum = QMat::identity(n.rows);
    let mut power = QMat::identity(n.rows);
    let mut k = 1i64;
    loop {
        power = power.mul(n);
        for i in 0..power.rows {
            for j in 0..power.cols {
                let v = power.get(i, j) * &ratio(1, k);
                power.set(i, j, v);
            }
        }
        if power.is_zero() {
            return sum;
        }
        let mut next = QMat::zeros(sum.rows, sum.cols);
        for i in 0..sum.rows {
            for j in 0..sum.cols {
                next.set(i, j, sum.get(i, j) + power.get(i, j));
            }
        }
        sum = next;
        k += 1;
    }
}

fn random_lowering(ct: &ChevalleyTable, rng: &mut ChaCha8Rng) -> LieElement {
    let t = ct.positive_count();
    let mut e = LieElement::zero(ct.label());
    for i in 0..t {
        let num: i64 = rng.gen_range(-3..=3);
        if num != 0 {
            e.add_term(Gen::Y(i), ratio(num, rng.gen_range(1..=3)));
        }
    }
    e
}

/// 7. exp(bch(X, Y)) = exp(X)·exp(Y) as exact adjoint-representation
/// matrices, 20 random lowering pairs each in A2 and B2.
fn c7_bch_faithful() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for label in [TypeLabel::A(2), TypeLabel::B(2)] {
        let ct = table(label);
        for trial in 0..20 {
            let x = random_lowering(&ct, &mut rng);
            let y = random_lowering(&ct, &mut rng);
            let h = bch(&ct, &x, &y).map_err(|e| format!("{label}: {e}"))?;
            let lhs = mat_exp(&ad_matrix(&ct, &h));
            let rhs = mat_exp(&ad_matrix(&ct, &x)).mul(&mat_exp(&ad_matrix(&ct, &y)));
            if lhs != rhs {
                return Err(format!("{label} trial {trial}: exp(bch) differs from the product"));
            }
        }
    }
    Ok(())
}

/// 8. The offset-nβ⁺ component of Σ is exactly (−1)ⁿ/n!·z_{β⁺}ⁿ·v⁺ for
/// n ≤ 5 on 10 random u's, and the valuation ledger equals
/// n·v_p(t) − v_p(n!) throughout.
fn c8_extremal_component() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases: [(TypeLabel, Vec<Rat>, u64, Vec<Vec<i64>>); 2] = [
        (TypeLabel::A(2), vec![ratio(1, 2), ratio(1, 3)], 5, vec![vec![1, 1]]),
        (
            TypeLabel::B(2),
            vec![ratio(1, 3), ratio(1, 5)],
            3,
            vec![vec![1, 1], vec![1, 2]],
        ),
    ];
    for (label, lam, p, extras) in cases {
        let ct = table(label);
        let rs = ct.rs();
        let m = TruncatedModule::simple_quotient(&weight(&lam), 5, ct.clone())
            .map_err(|e| format!("{label}: {e}"))?;
        let beta = Root::new(vec![0, 1]);
        let bi = rs.index_of(&beta).unwrap();
        for trial in 0..5 {
            let num: i64 = if rng.gen_bool(0.5) { rng.gen_range(1..=6) } else { -rng.gen_range(1..=6) };
            let den = [1i64, p as i64, (p * p) as i64][rng.gen_range(0..3)];
            let t = ratio(num, den);
            let mut log = LieElement::zero(ct.label());
            log.add_term(Gen::Y(bi), t.clone());
            for coords in &extras {
                let c: i64 = rng.gen_range(-4..=4);
                if c != 0 {
                    let idx = rs.index_of(&Root::new(coords.clone())).unwrap();
                    log.add_term(Gen::Y(idx), rat(c));
                }
            }
            let levi = rs.parabolic([]).unwrap();
            let u = UnipotentElement::new(&ct, log, levi).unwrap();
            if choose_extremal(rs, &u.support()) != Some(bi) {
                return Err(format!("{label} trial {trial}: β⁺ selection drifted"));
            }
            let sigma = sigma_series(&u, &m).map_err(|e| format!("{label}: {e}"))?;

            let mut scalar = rat(1);
            let mut off = m.offset_index(&[0, 0]).unwrap();
            let mut vecst = vec![rat(1)];
            let ledger = coefficient_valuations(&u, &beta, &m, p)
                .map_err(|e| format!("{label}: {e}"))?;
            for n in 0..=5u32 {
                if n > 0 {
                    scalar = &scalar * &(-t.clone()) / rat(n as i64);
                    let (dst, mat) = m.action_matrix(Gen::Y(bi), off).unwrap().unwrap();
                    vecst = mat.mul_vec(&vecst);
                    off = dst;
                }
                let expected: Vec<Rat> = vecst.iter().map(|x| x * &scalar).collect();
                let got = sigma.component(off).cloned().unwrap_or_default();
                if got != expected {
                    return Err(format!("{label} trial {trial}: component n={n} differs"));
                }
                let (ln, lv) = ledger[n as usize];
                let formula =
                    n as i64 * vp_rat(&t, p).unwrap() - vp_factorial(n as u64, p) as i64;
                if ln != n || lv != formula {
                    return Err(format!("{label} trial {trial}: ledger({n}) = {lv} ≠ {formula}"));
                }
                if n >= 1 {
                    let observed = vp_rat(&got[0], p).unwrap();
                    if observed != lv {
                        return Err(format!(
                            "{label} trial {trial}: observed valuation {observed} ≠ ledger {lv}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn close_under(gens: &[WeylElement], rank: usize) -> BTreeSet<WeylElement> {
    let mut seen = BTreeSet::new();
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
    seen
}

/// 9. Exhaustive over rank ≤ 3 and every subset I: a positive root outside
/// Φ_I⁺ sent negative by w⁻¹ exists iff w lies outside the Levi subgroup.
fn c9_weyl_witness() -> Result<(), String> {
    let labels = [
        TypeLabel::A(1),
        TypeLabel::A(2),
        TypeLabel::A(3),
        TypeLabel::B(2),
        TypeLabel::B(3),
        TypeLabel::C(3),
        TypeLabel::G2,
    ];
    for label in labels {
        let rs = RootSystem::build_label(label);
        let rank = rs.rank;
        // enumerate each group element once, with a defining word
        let mut elements: Vec<(WeylElement, Vec<usize>)> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut queue = vec![(WeylElement::identity(rank), Vec::new())];
        seen.insert(queue[0].0.clone());
        while let Some((w, word)) = queue.pop() {
            elements.push((w.clone(), word.clone()));
            for i in 0..rank {
                let next = w.compose(&rs.simple_reflection(i).unwrap());
                if seen.insert(next.clone()) {
                    let mut nw = word.clone();
                    nw.push(i);
                    queue.push((next, nw));
                }
            }
        }
        for mask in 0..(1usize << rank) {
            let indices: Vec<usize> = (0..rank).filter(|i| mask & (1 << i) != 0).collect();
            let par = rs.parabolic(indices.clone()).map_err(|e| format!("{label}: {e}"))?;
            let gens: Vec<WeylElement> =
                indices.iter().map(|&i| rs.simple_reflection(i).unwrap()).collect();
            let levi_group = close_under(&gens, rank);
            for (w, word) in &elements {
                let witness = rs
                    .weyl_coset_witness(word, &par)
                    .map_err(|e| format!("{label}: {e}"))?;
                let in_levi = levi_group.contains(w);
                match witness {
                    None => {
                        if !in_levi {
                            return Err(format!(
                                "{label} I={indices:?}: no witness for w outside W_I"
                            ));
                        }
                    }
                    Some(beta) => {
                        if in_levi {
                            return Err(format!(
                                "{label} I={indices:?}: witness produced for w ∈ W_I"
                            ));
                        }
                        let idx = rs.index_of(&beta).ok_or("witness is not a positive root")?;
                        if par.contains_root(idx) {
                            return Err(format!("{label}: witness {beta} lies in the Levi part"));
                        }
                        let rev: Vec<usize> = word.iter().rev().copied().collect();
                        let w_inv = rs.weyl_word(&rev).unwrap();
                        if w_inv.apply(&beta.coords).iter().sum::<i64>() >= 0 {
                            return Err(format!("{label}: w⁻¹({beta}) is not negative"));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// 10. On each tested simple quotient, every lowering operator y_γ with γ
/// outside the Levi part has zero kernel on all weight spaces up to
/// depth − ht(γ), at depth 6.
fn c10_injectivity() -> Result<(), String> {
    let cases: [(TypeLabel, Vec<Rat>); 5] = [
        (TypeLabel::A(1), vec![ratio(1, 2)]),
        (TypeLabel::A(2), vec![rat(0), ratio(1, 2)]),
        (TypeLabel::A(2), vec![ratio(1, 2), ratio(1, 3)]),
        (TypeLabel::B(2), vec![ratio(1, 3), rat(2)]),
        (TypeLabel::G2, vec![ratio(1, 2), ratio(1, 2)]),
    ];
    for (label, lam) in cases {
        let ct = table(label);
        let lambda = weight(&lam);
        let m = TruncatedModule::simple_quotient(&lambda, 6, ct.clone())
            .map_err(|e| format!("{label}: {e}"))?;
        let subset = ct.rs().max_parabolic_subset(&lambda).unwrap();
        let outside = subset.outside_indices();
        if outside.is_empty() {
            return Err(format!("{label}: no lowering directions to test"));
        }
        for gi in outside {
            let gamma = ct.rs().positive_roots[gi].clone();
            let ok = cato::modules_o::injectivity_check(&m, &gamma, 6)
                .map_err(|e| format!("{label}: {e}"))?;
            if !ok {
                return Err(format!("{label}: y_{gamma} has a kernel on L({lambda:?})"));
            }
        }
    }
    Ok(())
}

/// 11. From 30 random non-integral u's, iterated reduction clears the
/// integral support within ht(θ) steps, with the minimal integral height
/// strictly increasing on every surviving step.
fn c11_reduction_terminates() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = 5u64;
    let scale = 1i64;
    for label in [TypeLabel::A(2), TypeLabel::B(2), TypeLabel::G2] {
        let ct = table(label);
        let rs = ct.rs();
        let cap = rs.highest_root().height();
        for trial in 0..10 {
            let mut log = LieElement::zero(ct.label());
            for i in 0..rs.positive_count() {
                if rng.gen_bool(0.7) {
                    let num: i64 = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    let den = [1i64, p as i64][rng.gen_range(0..2)];
                    log.add_term(Gen::Y(i), ratio(num * [1i64, p as i64][rng.gen_range(0..2)], den));
                }
            }
            // guarantee a non-integral coordinate so reduction applies
            log.add_term(Gen::Y(rng.gen_range(0..rs.positive_count())), ratio(1, p as i64 * 7));
            let levi = rs.parabolic([]).unwrap();
            let mut u = UnipotentElement::new(&ct, log, levi).unwrap();
            let mut steps = 0i64;
            let mut prev_ht = integral_min_height(rs, &u, scale, p);
            while !b_sets(&u, scale, p).integral.is_empty() {
                let (next, branch) =
                    reduction_step(&ct, &u, scale, p).map_err(|e| format!("{label}: {e}"))?;
                u = next;
                steps += 1;
                if steps > cap {
                    return Err(format!("{label} trial {trial}: {steps} steps exceed ht(θ) = {cap}"));
                }
                let new_ht = integral_min_height(rs, &u, scale, p);
                match branch {
                    ReductionBranch::Cleared => {
                        if new_ht.is_some() {
                            return Err(format!("{label} trial {trial}: cleared but support remains"));
                        }
                    }
                    ReductionBranch::HeightRaised => {
                        if new_ht.is_none() || new_ht <= prev_ht {
                            return Err(format!(
                                "{label} trial {trial}: height did not rise ({prev_ht:?} → {new_ht:?})"
                            ));
                        }
                    }
                }
                prev_ht = new_ht;
            }
            if !b_sets(&u, scale, p).integral.is_empty() {
                return Err(format!("{label} trial {trial}: integral support survived"));
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Result<(), String>, Option<Duration>);
    let criteria: [Criterion; 11] = [
        ("1 root-string law", c1_root_string_law, Some(Duration::from_secs(10))),
        ("2 structure constants", c2_structure_constants, Some(Duration::from_secs(30))),
        ("3 divided powers integral", c3_divided_powers_integral, None),
        ("4 weight-sum bound", c4_weight_sum_bound, Some(Duration::from_secs(60))),
        ("5 BGG consistency", c5_bgg_consistency, Some(Duration::from_secs(120))),
        ("6 unit-coefficient grid", c6_unit_coefficient_grid, Some(Duration::from_secs(300))),
        ("7 BCH faithfulness", c7_bch_faithful, None),
        ("8 extremal component", c8_extremal_component, None),
        ("9 Weyl coset witness", c9_weyl_witness, None),
        ("10 lowering injectivity", c10_injectivity, None),
        ("11 reduction termination", c11_reduction_terminates, None),
    ];
    let mut failures = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let timed_out = budget.is_some_and(|b| elapsed > b);
        match (&result, timed_out) {
            (Ok(()), false) => println!("criterion {name}: PASS ({:.1}s)", elapsed.as_secs_f64()),
            (Ok(()), true) => {
                println!(
                    "criterion {name}: FAIL ({:.1}s over budget {:.0}s)",
                    elapsed.as_secs_f64(),
                    budget.unwrap().as_secs_f64()
                );
                failures.push(name);
            }
            (Err(e), _) => {
                println!("criterion {name}: FAIL ({:.1}s) {e}", elapsed.as_secs_f64());
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
