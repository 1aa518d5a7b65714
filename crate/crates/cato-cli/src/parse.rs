//! Command-line value parsing: weights as comma-separated rationals in
//! coroot coordinates, roots as comma-separated simple-root coordinates,
//! logarithms as semicolon-separated `root=coeff` terms.

use cato::chevalley::{Gen, LieElement};
use cato::linalg::Rat;
use cato::rootsys::{Root, RootSystem, Weight};

pub fn build_system(tag: &str) -> Result<RootSystem, String> {
    RootSystem::build(tag).map_err(|e| format!("bad type tag {tag:?}: {e}"))
}

pub fn parse_weight(s: &str, rank: usize) -> Result<Weight, String> {
    let coords = s
        .split(',')
        .map(|t| t.trim().parse::<Rat>())
        .collect::<Result<Vec<Rat>, _>>()
        .map_err(|e| format!("bad weight {s:?}: {e}"))?;
    if coords.len() != rank {
        return Err(format!(
            "weight {s:?} has {} coordinates, the rank is {rank}",
            coords.len()
        ));
    }
    Ok(Weight::new(coords))
}

/// Parses and validates a positive root of the given system.
pub fn parse_root(s: &str, rs: &RootSystem) -> Result<Root, String> {
    let coords = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<i64>, _>>()
        .map_err(|e| format!("bad root {s:?}: {e}"))?;
    if coords.len() != rs.rank {
        return Err(format!("root {s:?} has {} coordinates, the rank is {}", coords.len(), rs.rank));
    }
    let root = Root::new(coords);
    if rs.index_of(&root).is_none() {
        return Err(format!("{root} is not a positive root of {}", rs.label));
    }
    Ok(root)
}

/// Parses `"1,0=1/5;0,1=2"` into Σ coeff·y_root.
pub fn parse_log(s: &str, rs: &RootSystem) -> Result<LieElement, String> {
    let mut e = LieElement::zero(rs.label);
    for chunk in s.split(';').filter(|c| !c.trim().is_empty()) {
        let (lhs, rhs) = chunk
            .split_once('=')
            .ok_or_else(|| format!("bad term {chunk:?}, expected root=coeff"))?;
        let root = parse_root(lhs, rs)?;
        let coeff = rhs
            .trim()
            .parse::<Rat>()
            .map_err(|e| format!("bad coefficient {rhs:?}: {e}"))?;
        e.add_term(Gen::Y(rs.index_of(&root).unwrap()), coeff);
    }
    Ok(e)
}

pub fn check_prime(p: u64) -> Result<(), String> {
    if p < 2 {
        return Err(format!("{p} is not prime"));
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return Err(format!("{p} is not prime"));
        }
        d += 1;
    }
    Ok(())
}

/// Resolves the requested depth against the environment-controlled cap.
pub fn effective_depth(requested: Option<u32>) -> Result<u32, String> {
    let d = requested.unwrap_or(cato::DEFAULT_DEPTH);
    let cap = cato::depth_cap();
    if d > cap {
        return Err(format!("depth {d} exceeds the cap {cap}"));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cato::linalg::{rat, ratio};

    #[test]
    fn weights_parse_as_exact_rationals() {
        let w = parse_weight("0,1/2", 2).unwrap();
        assert_eq!(w.coroot, vec![rat(0), ratio(1, 2)]);
        assert_eq!(parse_weight("-3", 1).unwrap().coroot, vec![rat(-3)]);
        assert!(parse_weight("1,2", 1).is_err());
        assert!(parse_weight("x", 1).is_err());
    }

    #[test]
    fn roots_must_be_positive_roots() {
        let b2 = build_system("B2").unwrap();
        assert_eq!(parse_root("1,2", &b2).unwrap(), Root::new(vec![1, 2]));
        assert!(parse_root("2,1", &b2).is_err());
        assert!(parse_root("-1,0", &b2).is_err());
        assert!(parse_root("1", &b2).is_err());
    }

    #[test]
    fn log_terms_accumulate() {
        let a2 = build_system("A2").unwrap();
        let e = parse_log("1,0=1/5;0,1=2", &a2).unwrap();
        assert_eq!(e.terms().len(), 2);
        assert_eq!(e.terms()[&Gen::Y(0)], ratio(1, 5));
        assert!(parse_log("1,0", &a2).is_err());
        assert!(parse_log("3,3=1", &a2).is_err());
    }

    #[test]
    fn primality_and_depth_bounds() {
        assert!(check_prime(2).is_ok());
        assert!(check_prime(7).is_ok());
        assert!(check_prime(1).is_err());
        assert!(check_prime(9).is_err());
        assert!(effective_depth(Some(cato::depth_cap() + 1)).is_err());
        assert_eq!(effective_depth(None).unwrap(), cato::DEFAULT_DEPTH);
    }
}
