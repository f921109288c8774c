//! The weight polytope P = {I : ⟨I, e_t⟩ ≥ −1 for every ray e_t}, its lattice
//! points, and the active-ray data attached to each point.

use itertools::Itertools;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exterior::{LatticeVector, Weight};
use crate::fan::Fan;
use crate::linalg::fourier_motzkin::{coordinate_range, feasible_point, Halfspace, Range};
use crate::linalg::{fmt_rat, rat, rref, LinearSystem, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPolytope {
    dim: usize,
    rays: Vec<LatticeVector>,
}

/// A lattice point I of the weight polytope with its active rays
/// E_I = {t : ⟨I, e_t⟩ = −1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePointRecord {
    pub weight: Weight,
    /// Indices of the active rays, increasing.
    pub active: Vec<usize>,
    /// Rank of the active rays; the point lies in the relative interior of
    /// a face of codimension `stratum`.
    pub stratum: usize,
    /// Reduced echelon basis of the span of the active rays.
    pub normal_basis: Vec<Vec<Rational>>,
}

impl WeightPolytope {
    /// The polytope of a smooth complete fan; other fans are rejected.
    pub fn from_fan(fan: &Fan) -> Result<Self> {
        fan.require_smooth_complete()?;
        Ok(Self::from_rays(fan.dim(), fan.rays().to_vec()))
    }

    /// No validation; boundedness is checked when enumerating points.
    pub fn from_rays(dim: usize, rays: Vec<LatticeVector>) -> Self {
        Self { dim, rays }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.rays.iter().map(|r| Halfspace::new(r.to_rational(), rat(-1))).collect()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.rays.iter().all(|r| w.pair(r) >= -1)
    }

    /// Integer bounding box from exact per-coordinate projections.
    pub fn bounding_box(&self) -> Result<Vec<(i64, i64)>> {
        let system = self.halfspaces();
        (0..self.dim)
            .map(|j| match coordinate_range(&system, self.dim, j) {
                Range::Empty => Err(Error::Input("weight polytope is empty".into())),
                Range::Interval { lower: Some(lo), upper: Some(hi) } => Ok((
                    lo.ceil().to_integer().to_i64().expect("small bound"),
                    hi.floor().to_integer().to_i64().expect("small bound"),
                )),
                Range::Interval { lower, .. } => Err(Error::Unbounded {
                    witness: self.recession_witness(j, lower.is_some()),
                }),
            })
            .collect()
    }

    /// A direction d ≠ 0 with ⟨d, e_t⟩ ≥ 0 for all rays, moving coordinate
    /// `j` up (or down).
    fn recession_witness(&self, j: usize, upward: bool) -> Vec<String> {
        let mut cone: Vec<Halfspace> =
            self.rays.iter().map(|r| Halfspace::new(r.to_rational(), rat(0))).collect();
        let mut e = vec![rat(0); self.dim];
        e[j] = if upward { Rational::one() } else { -Rational::one() };
        cone.push(Halfspace::new(e, Rational::one()));
        feasible_point(&cone, self.dim)
            .map(|d| d.iter().map(fmt_rat).collect())
            .unwrap_or_default()
    }

    /// All lattice points in lexicographic order, with active-ray data.
    pub fn lattice_points(&self) -> Result<Vec<LatticePointRecord>> {
        let bbox = self.bounding_box()?;
        let points = bbox
            .iter()
            .map(|&(lo, hi)| lo..=hi)
            .multi_cartesian_product()
            .map(Weight)
            .filter(|w| self.contains(w))
            .map(|w| self.record(w))
            .collect();
        Ok(points)
    }

    /// Active-ray data for a point of the polytope.
    pub fn record(&self, weight: Weight) -> LatticePointRecord {
        let active: Vec<usize> =
            (0..self.rays.len()).filter(|&t| weight.pair(&self.rays[t]) == -1).collect();
        let rows: Vec<Vec<Rational>> = active.iter().map(|&t| self.rays[t].to_rational()).collect();
        let normal_basis = if rows.is_empty() {
            Vec::new()
        } else {
            let (r, pivots) = rref(&RatMatrix::from_rows(self.dim, &rows).expect("ray length"));
            (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
        };
        LatticePointRecord { stratum: normal_basis.len(), weight, active, normal_basis }
    }

    /// The equations cutting out the affine hull of the face through `rec`,
    /// as conditions on δ: ⟨δ, e⟩ = −1 for every active ray e.
    pub fn affine_hull_constraints(&self, rec: &LatticePointRecord) -> LinearSystem {
        let rows: Vec<Vec<Rational>> = rec.active.iter().map(|&t| self.rays[t].to_rational()).collect();
        LinearSystem {
            matrix: RatMatrix::from_rows(self.dim, &rows).expect("ray length"),
            rhs: vec![rat(-1); rows.len()],
        }
    }
}

/// |S(Δ,i)| for i = 0..=n.
pub fn stratum_counts(points: &[LatticePointRecord], dim: usize) -> Vec<usize> {
    let mut counts = vec![0; dim + 1];
    for p in points {
        counts[p.stratum] += 1;
    }
    counts
}

/// The points that are vertices of the polytope.
pub fn lattice_vertices(points: &[LatticePointRecord], dim: usize) -> Vec<&LatticePointRecord> {
    points.iter().filter(|p| p.stratum == dim).collect()
}

/// Points of S_k = ⋃_{i≤k} S(Δ,i).
pub fn points_up_to_stratum(points: &[LatticePointRecord], k: usize) -> impl Iterator<Item = &LatticePointRecord> {
    points.iter().filter(move |p| p.stratum <= k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(dim: usize, rays: &[&[i64]]) -> WeightPolytope {
        WeightPolytope::from_rays(dim, rays.iter().map(|r| LatticeVector(r.to_vec())).collect())
    }

    fn weights(points: &[LatticePointRecord]) -> Vec<Vec<i64>> {
        points.iter().map(|p| p.weight.0.clone()).collect()
    }

    #[test]
    fn p1_interval() {
        let p = poly(1, &[&[1], &[-1]]);
        assert_eq!(p.bounding_box().unwrap(), vec![(-1, 1)]);
        let pts = p.lattice_points().unwrap();
        assert_eq!(weights(&pts), vec![vec![-1], vec![0], vec![1]]);
        assert_eq!(stratum_counts(&pts, 1), vec![1, 2]);
        assert_eq!(lattice_vertices(&pts, 1).len(), 2);
    }

    #[test]
    fn p2_triangle() {
        let p = poly(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(p.bounding_box().unwrap(), vec![(-1, 2), (-1, 2)]);
        let pts = p.lattice_points().unwrap();
        assert_eq!(pts.len(), 10);
        assert_eq!(stratum_counts(&pts, 2), vec![1, 6, 3]);
        let verts: Vec<Vec<i64>> = lattice_vertices(&pts, 2).iter().map(|r| r.weight.0.clone()).collect();
        assert_eq!(verts, vec![vec![-1, -1], vec![-1, 2], vec![2, -1]]);
    }

    #[test]
    fn p1xp1_square() {
        let p = poly(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(p.bounding_box().unwrap(), vec![(-1, 1), (-1, 1)]);
        assert_eq!(p.lattice_points().unwrap().len(), 9);
    }

    #[test]
    fn affine_hulls() {
        let p = poly(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
        let origin = p.record(Weight(vec![0, 0]));
        assert!(origin.active.is_empty());
        assert!(p.affine_hull_constraints(&origin).is_empty());

        let vertex = p.record(Weight(vec![-1, -1]));
        let sys = p.affine_hull_constraints(&vertex);
        let sol = sys.solve().unwrap().unwrap();
        assert_eq!(sol.particular, vec![rat(-1), rat(-1)]);
        assert!(sol.kernel.is_empty());

        let edge = p.record(Weight(vec![-1, 0]));
        assert_eq!(edge.active, vec![0]);
        assert_eq!(edge.normal_basis, vec![vec![rat(1), rat(0)]]);
        let sys = p.affine_hull_constraints(&edge);
        assert_eq!(sys.matrix.row_vectors(), vec![vec![rat(1), rat(0)]]);
        assert_eq!(sys.rhs, vec![rat(-1)]);
    }

    #[test]
    fn unbounded_reports_witness() {
        let p = poly(2, &[&[1, 0], &[0, 1]]);
        match p.lattice_points() {
            Err(Error::Unbounded { witness }) => {
                assert_eq!(witness.len(), 2);
                let d: Vec<i64> = witness.iter().map(|s| s.parse().unwrap()).collect();
                assert!(d[0] >= 0 && d[1] >= 0 && d != vec![0, 0]);
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn unvalidated_fan_rejected() {
        let f = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[2, 0]]).unwrap();
        assert!(matches!(WeightPolytope::from_fan(&f), Err(Error::UnvalidatedFan(_))));
    }
}
