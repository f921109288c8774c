//! Lattice points of the weight polytope by a route that shares nothing
//! with the elimination-based enumerator: vertices come from Cramer's rule
//! on every n-subset of constraints, the integer box is read off the
//! vertices, and the box is scanned constraint by constraint.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exterior::Weight;
use crate::fan::Fan;
use crate::linalg::{kernel_basis, rat, RatMatrix, Rational};
use crate::oracles::OracleReport;
use crate::polytope::WeightPolytope;

/// Determinant by cofactor expansion; the matrices here are at most 3×3
/// in practice, so the factorial cost is irrelevant.
fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// A nonzero d with ⟨d, e⟩ ≥ 0 for every ray, if one exists. Such a d is a
/// recession direction of {⟨I, e⟩ ≥ −1}.
fn recession_witness(dim: usize, rays: &[Vec<i128>]) -> Option<Vec<i128>> {
    let ok = |d: &[i128]| d.iter().any(|&x| x != 0) && rays.iter().all(|r| r.iter().zip(d).map(|(a, b)| a * b).sum::<i128>() >= 0);
    // unit directions catch the degenerate cases (few rays, lineality)
    for j in 0..dim {
        for s in [1, -1] {
            let mut d = vec![0; dim];
            d[j] = s;
            if ok(&d) {
                return Some(d);
            }
        }
    }
    // otherwise an extreme ray of the recession cone is cut out by n−1
    // tight constraints: its generator is the generalized cross product
    for subset in (0..rays.len()).combinations(dim.saturating_sub(1)) {
        let d: Vec<i128> = (0..dim)
            .map(|j| {
                let minor: Vec<Vec<i128>> = subset
                    .iter()
                    .map(|&t| rays[t].iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                    .collect();
                if j % 2 == 0 { det(&minor) } else { -det(&minor) }
            })
            .collect();
        for s in [1, -1] {
            let d: Vec<i128> = d.iter().map(|x| s * x).collect();
            if ok(&d) {
                return Some(d);
            }
        }
    }
    // rays not spanning: any kernel vector works
    let m = RatMatrix::from_rows(dim, &rays.iter().map(|r| r.iter().map(|&x| rat(x as i64)).collect()).collect::<Vec<_>>()).ok()?;
    kernel_basis(&m).first().map(|k| {
        let den = k.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        k.iter().map(|q| (q * Rational::from_integer(den.clone())).to_integer().to_i128().expect("small kernel entry")).collect()
    })
}

/// Integer box from the polytope's vertices.
fn vertex_box(dim: usize, rays: &[Vec<i128>]) -> Vec<(i128, i128)> {
    let mut lo = vec![i128::MAX; dim];
    let mut hi = vec![i128::MIN; dim];
    for subset in (0..rays.len()).combinations(dim) {
        let a: Vec<Vec<i128>> = subset.iter().map(|&t| rays[t].clone()).collect();
        let d = det(&a);
        if d == 0 {
            continue;
        }
        // x_j = det(A with column j replaced by −1) / det(A)
        let x: Vec<(i128, i128)> = (0..dim)
            .map(|j| {
                let aj: Vec<Vec<i128>> =
                    a.iter().map(|row| row.iter().enumerate().map(|(c, v)| if c == j { -1 } else { *v }).collect()).collect();
                (det(&aj), d)
            })
            .collect();
        let feasible = rays.iter().all(|r| {
            // Σ r_j x_j ≥ −1, scaled by d² > 0 to stay in integers
            let num: i128 = r.iter().zip(&x).map(|(rj, (n, dd))| rj * n * dd).sum();
            num >= -d * d
        });
        if !feasible {
            continue;
        }
        for (j, (n, dd)) in x.iter().enumerate() {
            let (n, dd) = if *dd < 0 { (-n, -dd) } else { (*n, *dd) };
            lo[j] = lo[j].min(Integer::div_floor(&n, &dd));
            hi[j] = hi[j].max(Integer::div_ceil(&n, &dd));
        }
    }
    lo.into_iter().zip(hi).collect()
}

/// All lattice points of {I : ⟨I, e_t⟩ ≥ −1 ∀t} in lexicographic order.
pub fn oracle_lattice_points(fan: &Fan) -> Result<Vec<Weight>> {
    let dim = fan.dim();
    let rays: Vec<Vec<i128>> = fan.rays().iter().map(|r| r.coords().iter().map(|&x| x as i128).collect()).collect();
    if let Some(w) = recession_witness(dim, &rays) {
        return Err(Error::Unbounded { witness: w.iter().map(|x| x.to_string()).collect() });
    }
    let bounds = vertex_box(dim, &rays);
    if bounds.iter().any(|(l, h)| l > h) {
        return Ok(Vec::new());
    }
    let points = bounds
        .iter()
        .map(|&(l, h)| l..=h)
        .multi_cartesian_product()
        .filter(|p| rays.iter().all(|r| r.iter().zip(p).map(|(a, b)| a * b).sum::<i128>() >= -1))
        .map(|p| Weight(p.into_iter().map(|x| x as i64).collect()))
        .collect();
    Ok(points)
}

/// Compares the scan with the polytope enumerator, including active sets.
pub fn compare_lattice_points(fan: &Fan) -> OracleReport {
    let mut r = OracleReport::new("lattice points", fan.name().unwrap_or("fan"));
    let fast = WeightPolytope::from_fan(fan).and_then(|p| p.lattice_points());
    match (oracle_lattice_points(fan), fast) {
        (Ok(slow), Ok(fast)) => {
            let fast_weights: Vec<Weight> = fast.iter().map(|p| p.weight.clone()).collect();
            r.record(slow == fast_weights, || {
                format!("oracle found {} points, enumerator {}", slow.len(), fast_weights.len())
            });
            for p in &fast {
                let active: Vec<usize> =
                    fan.rays().iter().enumerate().filter(|(_, e)| p.weight.pair(e) == -1).map(|(t, _)| t).collect();
                r.record(active == p.active, || format!("active set of {} differs", p.weight));
            }
        }
        (Err(Error::Unbounded { .. }), Err(Error::Unbounded { .. })) => r.record(true, String::new),
        (a, b) => r.fail(format!("oracle {:?} vs enumerator {:?}", a.map(|v| v.len()), b.map(|v| v.len()))),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(det(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(det(&[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]), 1);
    }

    #[test]
    fn projective_line_and_plane() {
        let p1 = Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        let pts = oracle_lattice_points(&p1).unwrap();
        assert_eq!(pts, vec![Weight(vec![-1]), Weight(vec![0]), Weight(vec![1])]);
        let p2 = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap();
        assert_eq!(oracle_lattice_points(&p2).unwrap().len(), 10);
        assert!(compare_lattice_points(&p2).passed);
    }

    #[test]
    fn hexagon() {
        let rays: &[&[i64]] = &[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]];
        let cones: &[&[usize]] = &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 0]];
        let fan = Fan::from_i64(2, rays, cones).unwrap();
        assert_eq!(oracle_lattice_points(&fan).unwrap().len(), 7);
    }

    #[test]
    fn half_plane_is_unbounded() {
        // rays not positively spanning: the polytope contains a ray
        let fan = Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        match oracle_lattice_points(&fan) {
            Err(Error::Unbounded { witness }) => assert_eq!(witness.len(), 2),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }
}
