//! Seeded corpora from the two parametrised families.

use std::collections::HashSet;

use isolocal::isogeny::{three_isogeny, two_isogeny};
use isolocal::{arith::rat, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::report::{poly_json, rational_json};

/// A generated corpus line; same shape as [`crate::corpus::CorpusEntry`].
#[derive(Serialize)]
pub struct FamilyEntry {
    pub label: String,
    pub p: u64,
    pub curve_a: Vec<Value>,
    pub curve_b: Vec<Value>,
    pub kernel_poly: Value,
}

/// Distinct non-degenerate parameters `(a, b)` with `|a|, |b| <= bound`, in draw order.
pub fn parameters(p: u64, count: usize, seed: u64, bound: i64) -> Result<Vec<(i64, i64)>, String> {
    if p != 2 && p != 3 {
        return Err(format!("families exist for p = 2 and p = 3 only, not {p}"));
    }
    let side = (2 * bound + 1) as usize;
    // the degenerate loci remove at most 3 * side points
    if bound < 1 || count > side * side - 3 * side {
        return Err(format!("cannot draw {count} distinct parameters with bound {bound}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(-bound..=bound);
        let b = rng.gen_range(-bound..=bound);
        let degenerate = match p {
            2 => b == 0 || a * a == 4 * b,
            _ => a == 0 || b == 0 || 4 * a + 27 * b == 0,
        };
        if !degenerate && seen.insert((a, b)) {
            out.push((a, b));
        }
    }
    Ok(out)
}

pub fn entry(p: u64, a: i64, b: i64) -> Result<FamilyEntry, Error> {
    let phi = match p {
        2 => two_isogeny(&rat(a), &rat(b))?,
        _ => three_isogeny(&rat(a), &rat(b))?,
    };
    let coeffs = |e: &isolocal::Curve| e.a().iter().map(rational_json).collect();
    Ok(FamilyEntry {
        label: format!("fam{p}({a},{b})"),
        p,
        curve_a: coeffs(phi.source()),
        curve_b: coeffs(phi.target()),
        kernel_poly: poly_json(phi.kernel_poly()),
    })
}

pub fn generate(p: u64, count: usize, seed: u64, bound: i64) -> Result<Vec<FamilyEntry>, String> {
    parameters(p, count, seed, bound)?
        .into_iter()
        .map(|(a, b)| entry(p, a, b).map_err(|e| format!("({a},{b}): {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_distinct() {
        let x = parameters(3, 300, 7, 100).unwrap();
        assert_eq!(x, parameters(3, 300, 7, 100).unwrap());
        assert_ne!(x, parameters(3, 300, 8, 100).unwrap());
        assert_eq!(x.iter().collect::<HashSet<_>>().len(), 300);
        assert!(x.iter().all(|&(a, b)| a.abs() <= 100 && b.abs() <= 100 && 4 * a + 27 * b != 0));
        assert!(parameters(5, 1, 0, 10).is_err());
        assert!(parameters(2, 10_000, 0, 10).is_err());
    }

    #[test]
    fn entries_are_integral() {
        let e = entry(2, 3, 1).unwrap();
        assert_eq!(serde_json::to_string(&e.curve_b).unwrap(), "[0,-6,0,5,0]");
        assert_eq!(e.kernel_poly, serde_json::json!([0, 1]));
        let e = entry(3, 1, 1).unwrap();
        assert_eq!(serde_json::to_string(&e.curve_a).unwrap(), "[0,1,0,-2,1]");
        assert_eq!(serde_json::to_string(&e.curve_b).unwrap(), "[0,1,0,18,-11]");
    }
}
