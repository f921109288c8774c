//! Fans of smooth complete toric varieties and their validation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{LatticeVector, MAX_DIM};
use crate::linalg::fourier_motzkin::{feasible_point, Halfspace};
use crate::linalg::{abs_gcd, rat, RatMatrix, Rational};

/// Primitive ray generators plus maximal cones given as sets of ray indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
    name: Option<String>,
}

impl Fan {
    /// Checks shape only: every ray has `dim` coordinates and every maximal
    /// cone lists `dim` distinct indices. Index ranges, primitivity and the
    /// geometric conditions are left to [`Fan::validate`].
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidFan(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::InvalidFan(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    r.dim()
                )));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.into_iter().enumerate() {
            let set: BTreeSet<usize> = cone.iter().copied().collect();
            if set.len() != cone.len() {
                return Err(Error::InvalidFan(format!("cone {c} repeats a ray index")));
            }
            if cone.len() != dim {
                return Err(Error::InvalidFan(format!(
                    "cone {c} has {} generators; only simplicial maximal cones with {dim} generators are supported",
                    cone.len()
                )));
            }
            cones.push(set.into_iter().collect());
        }
        Ok(Self { dim, rays, max_cones: cones, name: None })
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Self> {
        Self::new(
            dim,
            rays.iter().map(|r| LatticeVector(r.to_vec())).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Maximal cones, each as a sorted index list.
    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    fn check_indices(&self) -> Result<()> {
        for (c, cone) in self.max_cones.iter().enumerate() {
            if let Some(&index) = cone.iter().find(|&&i| i >= self.rays.len()) {
                return Err(Error::RayIndexOutOfRange { cone: c, index, rays: self.rays.len() });
            }
        }
        Ok(())
    }

    /// The matrix whose columns are the generators of cone `c`.
    fn generator_matrix(&self, c: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for (col, &r) in self.max_cones[c].iter().enumerate() {
            for (row, &x) in self.rays[r].coords().iter().enumerate() {
                m[(row, col)] = rat(x);
            }
        }
        m
    }

    pub fn validate(&self) -> Result<FanReport> {
        self.check_indices()?;
        let mut messages = Vec::new();

        let mut primitive = true;
        for (i, r) in self.rays.iter().enumerate() {
            let g = abs_gcd(r.coords());
            if g != 1 {
                primitive = false;
                messages.push(format!("ray {i} {:?} is not primitive (gcd {g})", r.coords()));
            }
        }
        for i in 0..self.rays.len() {
            for j in (i + 1)..self.rays.len() {
                if self.rays[i] == self.rays[j] {
                    messages.push(format!("rays {i} and {j} coincide"));
                    primitive = false;
                }
            }
        }

        let mut simplicial_smooth = true;
        let mut inverses = Vec::with_capacity(self.max_cones.len());
        for c in 0..self.max_cones.len() {
            let m = self.generator_matrix(c);
            let inv = m.inverse();
            let det_ok = inv.is_some() && integer_det(&self.max_cones[c], &self.rays).abs() == 1;
            if !det_ok {
                simplicial_smooth = false;
                messages.push(format!(
                    "cone {c} {:?} is not smooth (determinant {})",
                    self.max_cones[c],
                    integer_det(&self.max_cones[c], &self.rays)
                ));
            }
            inverses.push(inv);
        }

        let complete = self.check_complete(&inverses, &mut messages);
        Ok(FanReport { primitive, simplicial_smooth, complete, messages })
    }

    fn check_complete(&self, inverses: &[Option<RatMatrix>], messages: &mut Vec<String>) -> bool {
        if self.max_cones.is_empty() {
            messages.push("fan has no maximal cones".into());
            return false;
        }
        if inverses.iter().any(Option::is_none) {
            messages.push("completeness not checked: some maximal cone is degenerate".into());
            return false;
        }
        let mut complete = true;

        // walls: (n-1)-faces of maximal cones, each must bound exactly two cones
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (c, cone) in self.max_cones.iter().enumerate() {
            for skip in 0..cone.len() {
                let wall: Vec<usize> =
                    cone.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &r)| r).collect();
                walls.entry(wall).or_default().push(c);
            }
        }
        for (wall, cones) in &walls {
            if cones.len() != 2 {
                complete = false;
                messages.push(format!("wall {wall:?} bounds {} maximal cone(s), expected 2", cones.len()));
            }
        }

        // connectivity through walls
        let mut adjacent = vec![Vec::new(); self.max_cones.len()];
        for cones in walls.values() {
            for &a in cones {
                for &b in cones {
                    if a != b {
                        adjacent[a].push(b);
                    }
                }
            }
        }
        let mut seen = vec![false; self.max_cones.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for &d in &adjacent[c] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            complete = false;
            messages.push("maximal cones are not connected through walls".into());
        }

        // pairwise disjoint interiors
        for a in 0..self.max_cones.len() {
            for b in (a + 1)..self.max_cones.len() {
                let inv = inverses[a].as_ref().unwrap();
                if interiors_meet(inv, &self.generator_matrix(b)) {
                    complete = false;
                    messages.push(format!("interiors of cones {a} and {b} overlap"));
                }
            }
        }
        complete
    }

    /// Number of k-dimensional cones.
    pub fn cone_count(&self, k: usize) -> Result<usize> {
        if k > self.dim {
            return Err(Error::DegreeOutOfRange { degree: k, max: self.dim });
        }
        self.check_indices()?;
        use itertools::Itertools;
        let faces: BTreeSet<Vec<usize>> = self
            .max_cones
            .iter()
            .flat_map(|cone| cone.iter().copied().combinations(k))
            .collect();
        Ok(faces.len())
    }

    /// Validates and turns any failed flag into an error.
    pub fn require_smooth_complete(&self) -> Result<()> {
        let report = self.validate()?;
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::UnvalidatedFan(report.messages.join("; ")))
        }
    }
}

/// Interiors of cones `A` (given by the inverse of its generator matrix)
/// and `B` (generator matrix) meet iff some μ > 0 has A⁻¹Bμ > 0. By scaling
/// this is the feasibility of A⁻¹Bμ ≥ 1, μ ≥ 1.
fn interiors_meet(inv_a: &RatMatrix, gens_b: &RatMatrix) -> bool {
    let g = inv_a.mul(gens_b).expect("square matrices of equal size");
    let n = g.cols();
    let mut system: Vec<Halfspace> =
        (0..g.rows()).map(|i| Halfspace::new(g.row(i).to_vec(), Rational::one())).collect();
    for j in 0..n {
        let mut e = vec![rat(0); n];
        e[j] = Rational::one();
        system.push(Halfspace::new(e, Rational::one()));
    }
    feasible_point(&system, n).is_some()
}

/// Determinant of the generators of a cone, by fraction-free elimination.
fn integer_det(cone: &[usize], rays: &[LatticeVector]) -> i128 {
    let n = cone.len();
    let mut a: Vec<Vec<i128>> =
        (0..n).map(|row| cone.iter().map(|&r| rays[r].coords()[row] as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = ((k + 1)..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanReport {
    pub primitive: bool,
    pub simplicial_smooth: bool,
    pub complete: bool,
    pub messages: Vec<String>,
}

impl FanReport {
    pub fn is_valid(&self) -> bool {
        self.primitive && self.simplicial_smooth && self.complete
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap()
    }

    #[test]
    fn p2_is_valid() {
        let r = p2().validate().unwrap();
        assert!(r.primitive && r.simplicial_smooth && r.complete, "{r:?}");
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let f = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[2, 0]]).unwrap();
        let r = f.validate().unwrap();
        assert!(r.primitive && r.simplicial_smooth);
        assert!(!r.complete);
    }

    #[test]
    fn non_primitive_ray() {
        let f = Fan::from_i64(2, &[&[2, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap();
        let r = f.validate().unwrap();
        assert!(!r.primitive);
        assert!(!r.simplicial_smooth);
    }

    #[test]
    fn eight_ray_fan_and_double_cover() {
        let f = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[1, 1], &[-1, 1], &[-1, -1], &[1, -1]],
            &[&[0, 4], &[4, 1], &[1, 5], &[5, 2], &[2, 6], &[6, 3], &[3, 7], &[7, 0]],
        )
        .unwrap();
        assert!(f.validate().unwrap().complete);
        // two sheets: every wall pairs up but the cones overlap
        let twice = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[1, 1], &[-1, 1], &[-1, -1], &[1, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0], &[4, 5], &[5, 6], &[6, 7], &[7, 4]],
        )
        .unwrap();
        let r = twice.validate().unwrap();
        assert!(!r.complete);
    }

    #[test]
    fn index_out_of_range() {
        let f = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 7]]).unwrap();
        assert!(matches!(f.validate(), Err(Error::RayIndexOutOfRange { index: 7, .. })));
    }

    #[test]
    fn non_simplicial_rejected() {
        assert!(Fan::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1, 2]]).is_err());
    }

    #[test]
    fn cone_counts() {
        let f = p2();
        assert_eq!(f.cone_count(0).unwrap(), 1);
        assert_eq!(f.cone_count(1).unwrap(), 3);
        assert_eq!(f.cone_count(2).unwrap(), 3);
        assert!(f.cone_count(3).is_err());
    }

    #[test]
    fn det_matches_rational() {
        let rays = vec![LatticeVector(vec![2, 1, 0]), LatticeVector(vec![0, 3, 1]), LatticeVector(vec![1, 0, 5])];
        // 2*(15-0) - 1*(0-1) + 0 = 31
        assert_eq!(integer_det(&[0, 1, 2], &rays), 31);
    }
}
