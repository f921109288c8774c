//! ι_α A = 0 exactly when α annihilates F, for A the wedge of a basis of F.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exterior::{CharacterVector, Multivector};
use crate::linalg::{dot, kernel_basis, rank, rat, RatMatrix, Rational};
use crate::oracles::OracleReport;

fn random_subspace(rng: &mut ChaCha8Rng, n: usize, i: usize) -> Vec<Vec<Rational>> {
    loop {
        let rows: Vec<Vec<Rational>> =
            (0..i).map(|_| (0..n).map(|_| rat(rng.random_range(-3..=3))).collect()).collect();
        let m = RatMatrix::from_rows(n, &rows).expect("rows have length n");
        if rank(&m) == i {
            return rows;
        }
    }
}

/// Half the trials draw α from the annihilator, half uniformly; both
/// directions of the equivalence are checked on each.
pub fn oracle_contraction_lemma(trials: usize, seed: u64, n: usize) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport::new("contraction lemma", format!("n = {n}, {trials} trials, seed {seed}"));
    for trial in 0..trials {
        let i = rng.random_range(0..=n);
        let basis = random_subspace(&mut rng, n, i);
        let a = basis.iter().try_fold(Multivector::one(n), |acc, v| acc.wedge(&Multivector::vector(v)))?;
        let m = RatMatrix::from_rows(n, &basis)?;
        let perp = kernel_basis(&m);
        let alpha: Vec<Rational> = if trial % 2 == 0 && !perp.is_empty() {
            let mut v = vec![rat(0); n];
            for k in &perp {
                let c = rat(rng.random_range(-2..=2));
                for (x, y) in v.iter_mut().zip(k) {
                    *x += &c * y;
                }
            }
            v
        } else {
            (0..n).map(|_| rat(rng.random_range(-3..=3))).collect()
        };
        let vanishes = a.contract(&CharacterVector(alpha.clone()))?.is_zero();
        let annihilates = basis.iter().all(|f| dot(f, &alpha) == rat(0));
        report.record(vanishes == annihilates, || {
            format!("trial {trial}: F rank {i}, A = {a}, alpha = {}, contraction zero = {vanishes}", CharacterVector(alpha.clone()))
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_hundred_trials_in_dimension_three() {
        let r = oracle_contraction_lemma(200, 11, 3).unwrap();
        assert!(r.passed, "{:?}", r.counterexample);
        assert_eq!(r.cases, 200);
    }

    #[test]
    fn deterministic() {
        assert_eq!(oracle_contraction_lemma(30, 5, 4).unwrap(), oracle_contraction_lemma(30, 5, 4).unwrap());
    }
}
