//! One handler per subcommand. Handlers return a JSON report (plus a CSV
//! rendering for tabular reports) and a flag for mathematical failure; parse
//! and precondition problems surface as `Err` and map to the usage exit code.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use cato::chevalley::{ChevalleyTable, Gen, LieElement};
use cato::error::Error;
use cato::integrality::{abcd_check, hyp_gate, m0_min, relation_space, RelationInstance, Verdict};
use cato::linalg::{ratio, QMat};
use cato::modules_o::{hom_dim_verma, singular_vectors, up_ordering, TruncatedModule};
use cato::nilexp::{
    b_sets, bch, coefficient_valuations, integral_min_height, ledger_json, reduction_step,
    sigma_series, ReductionBranch, UnipotentElement,
};
use cato::rootsys::{RootSystem, TypeLabel, WeylElement};

use crate::parse;

pub struct Outcome {
    pub json: Value,
    pub csv: Option<String>,
    pub failed: bool,
}

impl Outcome {
    fn report(json: Value) -> Self {
        Outcome { json, csv: None, failed: false }
    }
}

fn status(failed: bool) -> &'static str {
    if failed {
        "fail"
    } else {
        "pass"
    }
}

fn ok_str(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "fail"
    }
}

fn table(rs: RootSystem) -> Arc<ChevalleyTable> {
    Arc::new(ChevalleyTable::new(rs))
}

fn offset_str(off: &[i64]) -> String {
    let inner: Vec<String> = off.iter().map(|c| c.to_string()).collect();
    format!("[{}]", inner.join(","))
}

fn term_list(rs: &RootSystem, e: &LieElement) -> Vec<Value> {
    e.terms()
        .iter()
        .map(|(&g, c)| {
            let name = match g {
                Gen::Y(i) => format!("y{}", rs.positive_roots[i]),
                Gen::H(i) => format!("h{i}"),
                Gen::X(i) => format!("x{}", rs.positive_roots[i]),
            };
            json!({"gen": name, "coeff": c.to_string()})
        })
        .collect()
}

pub fn roots(tag: &str) -> Result<Outcome, String> {
    let ct = table(parse::build_system(tag)?);
    let rs = ct.rs();
    let mut full = rs.positive_roots.clone();
    full.extend(rs.positive_roots.iter().map(|r| r.negated()));
    let mut string_ok = true;
    for beta in &full {
        for gamma in &full {
            if gamma.coords == beta.coords || gamma.coords == beta.negated().coords {
                continue;
            }
            let (r, q) = rs.root_string(beta, gamma).map_err(|e| e.to_string())?;
            if r as i64 - q as i64 != rs.pairing_roots(gamma, beta) {
                string_ok = false;
            }
        }
    }
    let magnitudes = ct.verify_magnitudes();
    let antisymmetry = ct.verify_antisymmetry();
    let jacobi = ct.verify_jacobi();
    let failed = !(string_ok && magnitudes && antisymmetry && jacobi);
    let json = json!({
        "schema": 1,
        "type": rs.label.to_string(),
        "rank": rs.rank,
        "t": rs.positive_count(),
        "dim": ct.dim(),
        "highest_root": rs.highest_root().to_string(),
        "positive_roots": rs.positive_roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "string_law": ok_str(string_ok),
        "magnitudes": ok_str(magnitudes),
        "antisymmetry": ok_str(antisymmetry),
        "jacobi": ok_str(jacobi),
        "status": status(failed),
    });
    let mut csv = String::from("index,root,height\n");
    for (i, r) in rs.positive_roots.iter().enumerate() {
        csv.push_str(&format!("{i},\"{r}\",{}\n", r.height()));
    }
    Ok(Outcome { json, csv: Some(csv), failed })
}

pub fn check_abcd(tag: &str, nmax: u32, gamma: Option<&str>) -> Result<Outcome, String> {
    let rs = parse::build_system(tag)?;
    let grid = match gamma {
        Some(g) => vec![parse::parse_root(g, &rs)?],
        None => rs.positive_roots.clone(),
    };
    let results = grid
        .par_iter()
        .map(|g| abcd_check(&rs, g, nmax).map(|o| (g.to_string(), o)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    // for G2 the bound is known to break; that suite passes exactly when a
    // counterexample is exhibited
    let expect_cex = rs.label == TypeLabel::G2;
    let found = results.iter().any(|(_, o)| !o.holds);
    let failed = found != expect_cex;
    let entries: Vec<Value> = results
        .iter()
        .map(|(g, o)| {
            json!({
                "gamma": g,
                "holds": o.holds,
                "counterexample": o.counterexample.as_ref().map(|c| {
                    json!({"n": c.n, "nu": c.nu, "weight_sum": c.weight_sum})
                }),
            })
        })
        .collect();
    let json = json!({
        "schema": 1,
        "type": rs.label.to_string(),
        "nmax": nmax,
        "expected_counterexample": expect_cex,
        "entries": entries,
        "status": status(failed),
    });
    Ok(Outcome { json, csv: None, failed })
}

pub fn check_chevalley(tag: &str) -> Result<Outcome, String> {
    let ct = table(parse::build_system(tag)?);
    let magnitudes = ct.verify_magnitudes();
    let antisymmetry = ct.verify_antisymmetry();
    let jacobi = ct.verify_jacobi();
    let failed = !(magnitudes && antisymmetry && jacobi);
    let json = json!({
        "schema": 1,
        "type": ct.label().to_string(),
        "dim": ct.dim(),
        "magnitudes": magnitudes,
        "antisymmetry": antisymmetry,
        "jacobi": jacobi,
        "status": status(failed),
    });
    Ok(Outcome { json, csv: None, failed })
}

pub fn check_weyl(tag: &str) -> Result<Outcome, String> {
    let rs = parse::build_system(tag)?;
    // one BFS enumerates every element together with a defining word
    let mut elements: Vec<(WeylElement, Vec<usize>)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut queue = vec![(WeylElement::identity(rs.rank), Vec::new())];
    seen.insert(queue[0].0.clone());
    while let Some((w, word)) = queue.pop() {
        elements.push((w.clone(), word.clone()));
        for i in 0..rs.rank {
            let next = w.compose(&rs.simple_reflection(i).unwrap());
            if seen.insert(next.clone()) {
                let mut nw = word.clone();
                nw.push(i);
                queue.push((next, nw));
            }
        }
    }
    let masks: Vec<usize> = (0..(1usize << rs.rank)).collect();
    let per_mask: Vec<Result<usize, String>> = masks
        .par_iter()
        .map(|&mask| {
            let indices: Vec<usize> = (0..rs.rank).filter(|i| mask & (1 << i) != 0).collect();
            let par = rs.parabolic(indices.clone()).map_err(|e| e.to_string())?;
            let gens: Vec<WeylElement> =
                indices.iter().map(|&i| rs.simple_reflection(i).unwrap()).collect();
            let mut levi_group = BTreeSet::new();
            let mut q = vec![WeylElement::identity(rs.rank)];
            levi_group.insert(q[0].clone());
            while let Some(w) = q.pop() {
                for g in &gens {
                    let n = w.compose(g);
                    if levi_group.insert(n.clone()) {
                        q.push(n);
                    }
                }
            }
            let mut witnesses = 0usize;
            for (w, word) in &elements {
                let witness = rs.weyl_coset_witness(word, &par).map_err(|e| e.to_string())?;
                let in_levi = levi_group.contains(w);
                match witness {
                    None if in_levi => {}
                    None => return Err(format!("I={indices:?}: no witness for w outside W_I")),
                    Some(_) if in_levi => {
                        return Err(format!("I={indices:?}: witness produced inside W_I"))
                    }
                    Some(beta) => {
                        let idx = rs
                            .index_of(&beta)
                            .ok_or_else(|| format!("witness {beta} is not a positive root"))?;
                        if par.contains_root(idx) {
                            return Err(format!("witness {beta} lies in the Levi part"));
                        }
                        let rev: Vec<usize> = word.iter().rev().copied().collect();
                        let w_inv = rs.weyl_word(&rev).unwrap();
                        if w_inv.apply(&beta.coords).iter().sum::<i64>() >= 0 {
                            return Err(format!("w⁻¹({beta}) is not negative"));
                        }
                        witnesses += 1;
                    }
                }
            }
            Ok(witnesses)
        })
        .collect();
    let mut witness_total = 0usize;
    let mut violations: Vec<String> = Vec::new();
    for r in per_mask {
        match r {
            Ok(n) => witness_total += n,
            Err(e) => violations.push(e),
        }
    }
    let failed = !violations.is_empty();
    let json = json!({
        "schema": 1,
        "type": rs.label.to_string(),
        "elements": elements.len(),
        "subsets": masks.len(),
        "checked": elements.len() * masks.len(),
        "witnesses": witness_total,
        "violations": violations,
        "status": status(failed),
    });
    Ok(Outcome { json, csv: None, failed })
}

#[allow(clippy::too_many_arguments)]
pub fn check_integrality(
    tag: &str,
    lambda_s: &str,
    gamma_s: &str,
    n: u32,
    p: u64,
    m0: Option<u32>,
    depth: Option<u32>,
    verma: bool,
) -> Result<Outcome, String> {
    parse::check_prime(p)?;
    let rs = parse::build_system(tag)?;
    let lambda = parse::parse_weight(lambda_s, rs.rank)?;
    let gamma = parse::parse_root(gamma_s, &rs)?;
    let depth = parse::effective_depth(depth)?;
    let ct = table(rs);
    let ctx = hyp_gate(ct.rs(), p);
    let m0 = m0.unwrap_or_else(|| m0_min(&lambda, p));
    let inst = RelationInstance::new(ct.rs(), &lambda, &gamma, n, m0, ctx)
        .map_err(|e| e.to_string())?;
    let module = if verma {
        TruncatedModule::build_verma(&lambda, depth, ct.clone())
    } else {
        TruncatedModule::simple_quotient(&lambda, depth, ct.clone())
    }
    .map_err(|e| e.to_string())?;
    let report = relation_space(&module, &inst).map_err(|e| e.to_string())?;
    let failed = report.verdict == Verdict::Fails;
    let json = json!({
        "schema": 1,
        "type": ct.label().to_string(),
        "p": p,
        "m0": m0,
        "depth": depth,
        "module": if verma { "verma" } else { "simple" },
        "report": report.to_json(),
        "status": status(failed),
    });
    Ok(Outcome { json, csv: None, failed })
}

fn random_lowering(ct: &ChevalleyTable, rng: &mut ChaCha8Rng) -> LieElement {
    let mut e = LieElement::zero(ct.label());
    for i in 0..ct.rs().positive_count() {
        let num: i64 = rng.gen_range(-3..=3);
        if num != 0 {
            e.add_term(Gen::Y(i), ratio(num, rng.gen_range(1..=3)));
        }
    }
    e
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

pub fn check_bch(tag: &str, trials: u32, seed: u64) -> Result<Outcome, String> {
    let ct = table(parse::build_system(tag)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(LieElement, LieElement)> = (0..trials)
        .map(|_| (random_lowering(&ct, &mut rng), random_lowering(&ct, &mut rng)))
        .collect();
    let failing: Vec<u32> = pairs
        .par_iter()
        .enumerate()
        .filter_map(|(i, (x, y))| {
            let h = match bch(&ct, x, y) {
                Ok(h) => h,
                Err(_) => return Some(i as u32),
            };
            let lhs = mat_exp(&ad_matrix(&ct, &h));
            let rhs = mat_exp(&ad_matrix(&ct, x)).mul(&mat_exp(&ad_matrix(&ct, y)));
            (lhs != rhs).then_some(i as u32)
        })
        .collect();
    let failed = !failing.is_empty();
    let json = json!({
        "schema": 1,
        "type": ct.label().to_string(),
        "trials": trials,
        "seed": seed,
        "failing_trials": failing,
        "status": status(failed),
    });
    Ok(Outcome { json, csv: None, failed })
}

fn build_module(
    lambda_s: &str,
    depth: Option<u32>,
    simple: bool,
    ct: &Arc<ChevalleyTable>,
) -> Result<(TruncatedModule, u32), String> {
    let lambda = parse::parse_weight(lambda_s, ct.rs().rank)?;
    let depth = parse::effective_depth(depth)?;
    let m = if simple {
        TruncatedModule::simple_quotient(&lambda, depth, ct.clone())
    } else {
        TruncatedModule::build_verma(&lambda, depth, ct.clone())
    }
    .map_err(|e| e.to_string())?;
    Ok((m, depth))
}

pub fn verma_dims(tag: &str, lambda_s: &str, depth: Option<u32>, simple: bool) -> Result<Outcome, String> {
    let ct = table(parse::build_system(tag)?);
    let (m, depth) = build_module(lambda_s, depth, simple, &ct)?;
    let dims: Vec<(String, usize)> = m
        .offsets()
        .iter()
        .enumerate()
        .map(|(i, off)| (offset_str(off), m.dim_at(i)))
        .collect();
    let total: usize = dims.iter().map(|(_, d)| d).sum();
    let json = json!({
        "schema": 1,
        "type": ct.label().to_string(),
        "lambda": lambda_s,
        "depth": depth,
        "module": if simple { "simple" } else { "verma" },
        "dims": dims.iter().map(|(o, d)| json!({"offset": o, "dim": d})).collect::<Vec<_>>(),
        "total": total,
    });
    let mut csv = String::from("offset,dim\n");
    for (o, d) in &dims {
        csv.push_str(&format!("\"{o}\",{d}\n"));
    }
    Ok(Outcome { json, csv: Some(csv), failed: false })
}

pub fn verma_singvec(tag: &str, mu_s: &str, lambda_s: &str, depth: Option<u32>) -> Result<Outcome, String> {
    let ct = table(parse::build_system(tag)?);
    let mu = parse::parse_weight(mu_s, ct.rs().rank)?;
    let (m, depth) = build_module(lambda_s, depth, false, &ct)?;
    let base = json!({
        "schema": 1,
        "type": ct.label().to_string(),
        "mu": mu_s,
        "lambda": lambda_s,
        "depth": depth,
    });
    let mut obj = base.as_object().unwrap().clone();
    match singular_vectors(&m, &mu) {
        Ok((idx, basis)) => {
            obj.insert("offset".into(), json!(offset_str(&m.offsets()[idx])));
            obj.insert("count".into(), json!(basis.len()));
            obj.insert(
                "vectors".into(),
                json!(basis
                    .iter()
                    .map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()),
            );
        }
        Err(e @ (Error::BeyondDepth { .. } | Error::NotInRootLattice)) => {
            obj.insert("error".into(), json!(e.to_string()));
        }
        Err(e) => return Err(e.to_string()),
    }
    Ok(Outcome::report(Value::Object(obj)))
}

pub fn verma_hom(tag: &str, mu_s: &str, lambda_s: &str, depth: Option<u32>) -> Result<Outcome, String> {
    let ct = table(parse::build_system(tag)?);
    let mu = parse::parse_weight(mu_s, ct.rs().rank)?;
    let lambda = parse::parse_weight(lambda_s, ct.rs().rank)?;
    let depth = parse::effective_depth(depth)?;
    let mut obj = serde_json::Map::new();
    obj.insert("schema".into(), json!(1));
    obj.insert("type".into(), json!(ct.label().to_string()));
    obj.insert("mu".into(), json!(mu_s));
    obj.insert("lambda".into(), json!(lambda_s));
    obj.insert("depth".into(), json!(depth));
    match hom_dim_verma(&ct, &mu, &lambda, depth) {
        Ok(d) => {
            obj.insert("hom_dim".into(), json!(d));
        }
        Err(e @ Error::BeyondDepth { .. }) => {
            obj.insert("error".into(), json!(e.to_string()));
        }
        Err(e) => return Err(e.to_string()),
    }
    Ok(Outcome::report(Value::Object(obj)))
}

pub fn verma_up(tag: &str, mu_s: &str, lambda_s: &str) -> Result<Outcome, String> {
    let rs = parse::build_system(tag)?;
    let mu = parse::parse_weight(mu_s, rs.rank)?;
    let lambda = parse::parse_weight(lambda_s, rs.rank)?;
    let up = up_ordering(&rs, &mu, &lambda).map_err(|e| e.to_string())?;
    Ok(Outcome::report(json!({
        "schema": 1,
        "type": rs.label.to_string(),
        "mu": mu_s,
        "lambda": lambda_s,
        "up": up,
    })))
}

pub fn nil_bch(tag: &str, x_s: &str, y_s: &str) -> Result<Outcome, String> {
    let ct = table(parse::build_system(tag)?);
    let x = parse::parse_log(x_s, ct.rs())?;
    let y = parse::parse_log(y_s, ct.rs())?;
    let h = bch(&ct, &x, &y).map_err(|e| e.to_string())?;
    Ok(Outcome::report(json!({
        "schema": 1,
        "type": ct.label().to_string(),
        "log": term_list(ct.rs(), &h),
    })))
}

pub fn nil_sigma(
    tag: &str,
    lambda_s: &str,
    depth: Option<u32>,
    log_s: &str,
    simple: bool,
) -> Result<Outcome, String> {
    let ct = table(parse::build_system(tag)?);
    let (m, depth) = build_module(lambda_s, depth, simple, &ct)?;
    let log = parse::parse_log(log_s, ct.rs())?;
    let levi = ct.rs().parabolic([]).unwrap();
    let u = UnipotentElement::new(&ct, log, levi).map_err(|e| e.to_string())?;
    let sigma = sigma_series(&u, &m).map_err(|e| e.to_string())?;
    let components: Vec<Value> = sigma
        .components()
        .iter()
        .map(|(&off, coords)| {
            json!({
                "offset": offset_str(&m.offsets()[off]),
                "coords": coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome::report(json!({
        "schema": 1,
        "type": ct.label().to_string(),
        "lambda": lambda_s,
        "depth": depth,
        "module": if simple { "simple" } else { "verma" },
        "components": components,
    })))
}

pub fn nil_reduce(tag: &str, log_s: &str, p: u64, scale: i64) -> Result<Outcome, String> {
    parse::check_prime(p)?;
    let ct = table(parse::build_system(tag)?);
    let rs = ct.rs();
    let log = parse::parse_log(log_s, rs)?;
    let levi = rs.parabolic([]).unwrap();
    let mut u = UnipotentElement::new(&ct, log, levi).map_err(|e| e.to_string())?;
    let cap = rs.highest_root().height();
    let mut steps: Vec<Value> = Vec::new();
    let terminal;
    loop {
        let split = b_sets(&u, scale, p);
        if split.integral.is_empty() {
            // B′ = ∅: nothing integral is left to extract
            terminal = "cleared";
            break;
        }
        if split.nonintegral.is_empty() {
            // the whole logarithm is integral; u is one integral exponential
            terminal = "integral";
            break;
        }
        if steps.len() as i64 >= cap {
            return Err(format!("reduction exceeded ht(θ) = {cap} steps"));
        }
        let (next, branch) = reduction_step(&ct, &u, scale, p).map_err(|e| e.to_string())?;
        u = next;
        steps.push(json!({
            "step": steps.len() + 1,
            "branch": match branch {
                ReductionBranch::Cleared => "cleared",
                ReductionBranch::HeightRaised => "height_raised",
            },
            "min_integral_height": integral_min_height(rs, &u, scale, p),
        }));
    }
    Ok(Outcome::report(json!({
        "schema": 1,
        "type": rs.label.to_string(),
        "p": p,
        "scale": scale,
        "steps": steps,
        "terminal": terminal,
        "final_log": term_list(rs, &u.log_coords),
    })))
}

#[allow(clippy::too_many_arguments)]
pub fn nil_ledger(
    tag: &str,
    lambda_s: &str,
    depth: Option<u32>,
    log_s: &str,
    beta_s: &str,
    p: u64,
    simple: bool,
) -> Result<Outcome, String> {
    parse::check_prime(p)?;
    let ct = table(parse::build_system(tag)?);
    let (m, depth) = build_module(lambda_s, depth, simple, &ct)?;
    let log = parse::parse_log(log_s, ct.rs())?;
    let beta = parse::parse_root(beta_s, ct.rs())?;
    let levi = ct.rs().parabolic([]).unwrap();
    let u = UnipotentElement::new(&ct, log, levi).map_err(|e| e.to_string())?;
    let ledger = coefficient_valuations(&u, &beta, &m, p).map_err(|e| e.to_string())?;
    let json = json!({
        "schema": 1,
        "type": ct.label().to_string(),
        "lambda": lambda_s,
        "beta": beta_s,
        "p": p,
        "depth": depth,
        "module": if simple { "simple" } else { "verma" },
        "ledger": ledger_json(&ledger),
    });
    let mut csv = String::from("n,vp\n");
    for (n, vp) in &ledger {
        csv.push_str(&format!("{n},{vp}\n"));
    }
    Ok(Outcome { json, csv: Some(csv), failed: false })
}
