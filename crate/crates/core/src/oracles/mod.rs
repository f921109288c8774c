//! Independent brute-force verifiers for the fast paths, shipped in the
//! library so the CLI can run them on user fans.

pub mod axioms;
pub mod chart;
pub mod contraction;
pub mod lattice;
pub mod structure;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use axioms::{oracle_axioms, AlgebraTables};
pub use chart::{compare_chart_bracket, oracle_chart_bracket, Chart, ChartField};
pub use contraction::oracle_contraction_lemma;
pub use lattice::{compare_lattice_points, oracle_lattice_points};
pub use structure::{oracle_closure, oracle_gamma, oracle_torus, torus_monomials};

/// Seed used for sampled checks unless the caller picks another.
pub const DEFAULT_SEED: u64 = 1729;
/// Triple checks are exhaustive up to this many basis elements.
pub const EXHAUSTIVE_LIMIT: usize = 40;
/// Number of sampled triples above the exhaustive limit.
pub const SAMPLED_TRIPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub check: String,
    pub instance: String,
    pub passed: bool,
    pub cases: usize,
    pub violations: usize,
    pub counterexample: Option<String>,
}

impl OracleReport {
    pub fn new(check: impl Into<String>, instance: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            instance: instance.into(),
            passed: true,
            cases: 0,
            violations: 0,
            counterexample: None,
        }
    }

    /// Records one case; the description is only built for the first failure.
    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            self.violations += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(describe());
            }
        }
    }

    pub fn fail(&mut self, describe: impl Into<String>) {
        self.record(false, || describe.into());
    }
}

/// Index triples over a basis of size `dim`: all of them when
/// `dim ≤ EXHAUSTIVE_LIMIT`, otherwise `SAMPLED_TRIPLES` seeded draws.
pub fn triples(dim: usize, seed: u64) -> Vec<(usize, usize, usize)> {
    if dim == 0 {
        return Vec::new();
    }
    if dim <= EXHAUSTIVE_LIMIT {
        let mut out = Vec::with_capacity(dim * dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    out.push((a, b, c));
                }
            }
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SAMPLED_TRIPLES)
        .map(|_| (rng.random_range(0..dim), rng.random_range(0..dim), rng.random_range(0..dim)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_budget() {
        assert_eq!(triples(3, 0).len(), 27);
        assert_eq!(triples(40, 0).len(), 64000);
        let s = triples(41, 7);
        assert_eq!(s.len(), SAMPLED_TRIPLES);
        assert_eq!(s, triples(41, 7));
        assert_ne!(s, triples(41, 8));
    }

    #[test]
    fn report_keeps_first_counterexample() {
        let mut r = OracleReport::new("x", "y");
        r.record(true, || unreachable!());
        r.record(false, || "first".into());
        r.record(false, || "second".into());
        assert!(!r.passed);
        assert_eq!((r.cases, r.violations), (3, 2));
        assert_eq!(r.counterexample.as_deref(), Some("first"));
    }
}
