//! Fourier–Motzkin elimination for small systems of rational inequalities.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{is_negative, Rational};

/// The closed halfspace `normal · x ≥ bound`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub bound: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, bound: Rational) -> Self {
        Self { normal, bound }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        super::dot(&self.normal, x) >= self.bound
    }

    /// Scales so the first nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.normal.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.normal {
                *c /= &lead;
            }
            self.bound /= &lead;
        }
        self
    }
}

/// Drops duplicate normals, keeping the tightest bound.
fn simplify(system: Vec<Halfspace>) -> Vec<Halfspace> {
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for h in system.into_iter().map(Halfspace::normalized) {
        best.entry(h.normal)
            .and_modify(|b| {
                if h.bound > *b {
                    *b = h.bound.clone();
                }
            })
            .or_insert(h.bound);
    }
    best.into_iter().map(|(normal, bound)| Halfspace { normal, bound }).collect()
}

/// Projects out coordinate `var`; the resulting constraints have a zero
/// coefficient there.
pub fn eliminate(system: &[Halfspace], var: usize) -> Vec<Halfspace> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut rest = Vec::new();
    for h in system {
        let c = &h.normal[var];
        if c.is_zero() {
            rest.push(h.clone());
        } else if is_negative(c) {
            upper.push(h);
        } else {
            lower.push(h);
        }
    }
    for lo in &lower {
        for up in &upper {
            // lo: a x_v + ... ≥ b with a > 0; up: c x_v + ... ≥ d with c < 0
            let a = &lo.normal[var];
            let c = -up.normal[var].clone();
            let normal: Vec<Rational> =
                lo.normal.iter().zip(&up.normal).map(|(p, q)| p * &c + q * a).collect();
            let bound = &lo.bound * &c + &up.bound * a;
            rest.push(Halfspace { normal, bound });
        }
    }
    simplify(rest)
}

/// Range of values coordinate `var` may take on a 1-variable system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Range {
    Empty,
    Interval { lower: Option<Rational>, upper: Option<Rational> },
}

fn range_of(system: &[Halfspace], var: usize) -> Range {
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for h in system {
        let c = &h.normal[var];
        if h.normal.iter().enumerate().any(|(j, x)| j != var && !x.is_zero()) {
            continue;
        }
        if c.is_zero() {
            if h.bound.is_positive() {
                return Range::Empty;
            }
            continue;
        }
        let v = &h.bound / c;
        if c.is_positive() {
            if lower.as_ref().is_none_or(|l| v > *l) {
                lower = Some(v);
            }
        } else if upper.as_ref().is_none_or(|u| v < *u) {
            upper = Some(v);
        }
    }
    match (&lower, &upper) {
        (Some(l), Some(u)) if l > u => Range::Empty,
        _ => Range::Interval { lower, upper },
    }
}

/// Exact projection of the feasible region onto coordinate `var`.
pub fn coordinate_range(system: &[Halfspace], dim: usize, var: usize) -> Range {
    let mut current = simplify(system.to_vec());
    for j in (0..dim).filter(|&j| j != var) {
        current = eliminate(&current, j);
    }
    range_of(&current, var)
}

/// Some point of the region, or `None` when it is empty.
pub fn feasible_point(system: &[Halfspace], dim: usize) -> Option<Vec<Rational>> {
    // stages[j] still involves coordinates j.., eliminated in increasing order
    let mut stages = vec![simplify(system.to_vec())];
    for j in 0..dim.saturating_sub(1) {
        let next = eliminate(stages.last().unwrap(), j);
        stages.push(next);
    }
    let mut point = vec![Rational::zero(); dim];
    for j in (0..dim).rev() {
        // substitute the already chosen coordinates > j
        let reduced: Vec<Halfspace> = stages[j]
            .iter()
            .map(|h| {
                let mut normal = h.normal.clone();
                let mut bound = h.bound.clone();
                for l in (j + 1)..dim {
                    bound -= &normal[l] * &point[l];
                    normal[l] = Rational::zero();
                }
                Halfspace { normal, bound }
            })
            .collect();
        point[j] = match range_of(&reduced, j) {
            Range::Empty => return None,
            Range::Interval { lower: Some(l), upper: Some(u) } => (l + u) / Rational::from_integer(2.into()),
            Range::Interval { lower: Some(l), upper: None } => l,
            Range::Interval { lower: None, upper: Some(u) } => u,
            Range::Interval { lower: None, upper: None } => Rational::zero(),
        };
    }
    if dim == 0 {
        let infeasible = system.iter().any(|h| h.bound.is_positive());
        return (!infeasible).then_some(point);
    }
    system.iter().all(|h| h.contains(&point)).then_some(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn hs(normal: &[i64], bound: i64) -> Halfspace {
        Halfspace::new(normal.iter().map(|&x| rat(x)).collect(), rat(bound))
    }

    #[test]
    fn triangle_ranges() {
        // x ≥ -1, y ≥ -1, -x-y ≥ -1
        let sys = vec![hs(&[1, 0], -1), hs(&[0, 1], -1), hs(&[-1, -1], -1)];
        assert_eq!(
            coordinate_range(&sys, 2, 0),
            Range::Interval { lower: Some(rat(-1)), upper: Some(rat(2)) }
        );
        assert_eq!(
            coordinate_range(&sys, 2, 1),
            Range::Interval { lower: Some(rat(-1)), upper: Some(rat(2)) }
        );
        let p = feasible_point(&sys, 2).unwrap();
        assert!(sys.iter().all(|h| h.contains(&p)));
    }

    #[test]
    fn unbounded_and_empty() {
        let sys = vec![hs(&[1, 0], -1), hs(&[0, 1], -1)];
        assert_eq!(
            coordinate_range(&sys, 2, 0),
            Range::Interval { lower: Some(rat(-1)), upper: None }
        );
        let empty = vec![hs(&[1], 1), hs(&[-1], 0)];
        assert_eq!(coordinate_range(&empty, 1, 0), Range::Empty);
        assert_eq!(feasible_point(&empty, 1), None);
    }

    #[test]
    fn fractional_vertex() {
        // 2x ≥ 1, -2x ≥ -1 pins x = 1/2
        let sys = vec![hs(&[2], 1), hs(&[-2], -1)];
        assert_eq!(feasible_point(&sys, 1), Some(vec![ratio(1, 2)]));
    }
}
