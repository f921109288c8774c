//! Explicit bases of the weight blocks N_I^k ⊆ ∧ᵏN_ℚ and of each graded
//! piece of the algebra of holomorphic polyvector fields.
//!
//! A field χ^I·ρ(A) is stored as the pair (I, A); the graded piece of
//! degree k is the direct sum over I ∈ S_k of the blocks N_I^k.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{Blade, Multivector, Weight};
use crate::fan::{Fan, FanReport};
use crate::gerstenhaber::{Variant, WeightedPolyvector};
use crate::linalg::{rref, RatMatrix, Rational};
use crate::polytope::{LatticePointRecord, WeightPolytope};

/// Basis of N_I^k in reduced echelon form against the canonical ∧ᵏ basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightBlock {
    pub weight: Weight,
    pub degree: usize,
    pub basis: Vec<Multivector>,
    /// Pivot blade of each basis element.
    pub pivots: Vec<Blade>,
}

impl WeightBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `a` in this block, or `None` if `a` is not in it.
    pub fn coordinates(&self, a: &Multivector) -> Option<Vec<Rational>> {
        if a.is_zero() {
            return Some(vec![Rational::zero(); self.basis.len()]);
        }
        if a.degree() != self.degree {
            return None;
        }
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| a.coefficient(p)).collect();
        let mut residual = a.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            residual = residual.sub(&b.scale(c)).ok()?;
        }
        residual.is_zero().then_some(coords)
    }

    pub fn contains(&self, a: &Multivector) -> bool {
        self.coordinates(a).is_some()
    }
}

/// The block N_I^k for the lattice point `rec` in an `n`-dimensional lattice.
pub fn nik_basis(rec: &LatticePointRecord, k: usize, n: usize) -> Result<WeightBlock> {
    if k > n {
        return Err(Error::DegreeOutOfRange { degree: k, max: n });
    }
    let i = rec.stratum;
    let mut block = WeightBlock { weight: rec.weight.clone(), degree: k, basis: Vec::new(), pivots: Vec::new() };
    if i > k {
        return Ok(block);
    }
    let mut volume = Multivector::one(n);
    for v in &rec.normal_basis {
        volume = volume.wedge(&Multivector::vector(v))?;
    }
    let columns = Blade::all_of_grade(n, k);
    let spanning: Vec<Vec<Rational>> = Blade::all_of_grade(n, k - i)
        .into_iter()
        .map(|b| {
            let w = volume.wedge(&Multivector::from_blade(n, b, Rational::from_integer(1.into())))?;
            Ok(columns.iter().map(|&c| w.coefficient(c)).collect())
        })
        .collect::<Result<_>>()?;
    let (reduced, pivots) = rref(&RatMatrix::from_rows(columns.len(), &spanning)?);
    for (row, &p) in pivots.iter().enumerate() {
        let terms = columns.iter().zip(reduced.row(row)).map(|(&b, c)| (b, c.clone()));
        block.basis.push(Multivector::from_terms(n, k, terms)?);
        block.pivots.push(columns[p]);
    }
    Ok(block)
}

/// Per degree k, the basis of the degree-k piece as (weight, multivector)
/// pairs, ordered by weight and then by echelon order within the block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    pub degrees: Vec<Vec<(Weight, Multivector)>>,
}

impl GradedBasis {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.iter().map(Vec::len).sum()
    }
}

/// The algebra of holomorphic polyvector fields of a smooth complete fan,
/// with its weight decomposition and graded basis.
#[derive(Debug, Clone)]
pub struct PolyvectorSpace {
    fan: Fan,
    report: FanReport,
    polytope: WeightPolytope,
    points: Vec<LatticePointRecord>,
    point_index: BTreeMap<Weight, usize>,
    /// blocks[k][p] is N_{I_p}^k for the p-th lattice point.
    blocks: Vec<Vec<WeightBlock>>,
    basis: GradedBasis,
    /// offsets[k][I] = first basis index of the block of weight I in degree k.
    offsets: Vec<BTreeMap<Weight, usize>>,
}

impl PolyvectorSpace {
    pub fn new(fan: &Fan) -> Result<Self> {
        let report = fan.validate()?;
        if !report.is_valid() {
            return Err(Error::UnvalidatedFan(report.messages.join("; ")));
        }
        let polytope = WeightPolytope::from_rays(fan.dim(), fan.rays().to_vec());
        let points = polytope.lattice_points()?;
        let n = fan.dim();
        let point_index = points.iter().enumerate().map(|(p, r)| (r.weight.clone(), p)).collect();
        let mut blocks = Vec::with_capacity(n + 1);
        let mut degrees = Vec::with_capacity(n + 1);
        let mut offsets = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let row: Vec<WeightBlock> = points.iter().map(|r| nik_basis(r, k, n)).collect::<Result<_>>()?;
            let mut elems = Vec::new();
            let mut offs = BTreeMap::new();
            for b in row.iter().filter(|b| b.dim() > 0) {
                offs.insert(b.weight.clone(), elems.len());
                elems.extend(b.basis.iter().map(|m| (b.weight.clone(), m.clone())));
            }
            blocks.push(row);
            degrees.push(elems);
            offsets.push(offs);
        }
        Ok(Self {
            fan: fan.clone(),
            report,
            polytope,
            points,
            point_index,
            blocks,
            basis: GradedBasis { degrees },
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn fan_report(&self) -> &FanReport {
        &self.report
    }

    pub fn polytope(&self) -> &WeightPolytope {
        &self.polytope
    }

    pub fn points(&self) -> &[LatticePointRecord] {
        &self.points
    }

    pub fn point(&self, w: &Weight) -> Option<&LatticePointRecord> {
        self.point_index.get(w).map(|&p| &self.points[p])
    }

    pub fn graded_basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.dims()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.total_dim()
    }

    /// The block N_I^k; `None` when I is not a lattice point of the polytope.
    pub fn block(&self, w: &Weight, k: usize) -> Option<&WeightBlock> {
        let &p = self.point_index.get(w)?;
        self.blocks.get(k).map(|row| &row[p])
    }

    /// Whether χ^I·ρ(a) is a holomorphic k-vector field.
    pub fn membership(&self, w: &Weight, a: &Multivector, k: usize) -> bool {
        if a.is_zero() {
            return true;
        }
        if a.degree() != k {
            return false;
        }
        self.block(w, k).is_some_and(|b| b.contains(a))
    }

    pub fn basis_element(&self, k: usize, idx: usize) -> WeightedPolyvector {
        let (w, a) = &self.basis.degrees[k][idx];
        WeightedPolyvector::monomial(Variant::Toric, w.clone(), a.clone())
    }

    /// Every basis element, degree by degree.
    pub fn all_basis_elements(&self) -> Vec<WeightedPolyvector> {
        (0..=self.dim())
            .flat_map(|k| (0..self.basis.degrees[k].len()).map(move |i| (k, i)))
            .map(|(k, i)| self.basis_element(k, i))
            .collect()
    }

    /// Coordinates of a homogeneous element in the degree-k basis.
    pub fn coordinates(&self, a: &WeightedPolyvector) -> Result<Vec<Rational>> {
        let k = a.degree();
        if k > self.dim() {
            if a.is_zero() {
                return Ok(Vec::new());
            }
            return Err(Error::DegreeOutOfRange { degree: k, max: self.dim() });
        }
        let mut coords = vec![Rational::zero(); self.basis.degrees[k].len()];
        for (w, m) in a.terms() {
            let block = self
                .block(w, k)
                .filter(|b| b.dim() > 0)
                .ok_or_else(|| Error::NotHolomorphic(format!("weight {w} has no degree-{k} block")))?;
            let c = block
                .coordinates(m)
                .ok_or_else(|| Error::NotHolomorphic(format!("{m} is not in the block of weight {w}, degree {k}")))?;
            let start = self.offsets[k][w];
            for (i, x) in c.into_iter().enumerate() {
                coords[start + i] = x;
            }
        }
        Ok(coords)
    }

    pub fn from_coordinates(&self, k: usize, coords: &[Rational]) -> Result<WeightedPolyvector> {
        let elems = &self.basis.degrees[k];
        if coords.len() != elems.len() {
            return Err(Error::DimensionMismatch { expected: elems.len(), actual: coords.len() });
        }
        let mut out = WeightedPolyvector::zero(self.dim(), k, Variant::Toric);
        for ((w, m), c) in elems.iter().zip(coords) {
            if !c.is_zero() {
                out = out.add(&WeightedPolyvector::monomial(Variant::Toric, w.clone(), m.scale(c)))?;
            }
        }
        Ok(out)
    }

    /// Whether every term of `a` is holomorphic.
    pub fn contains(&self, a: &WeightedPolyvector) -> bool {
        a.terms().all(|(w, m)| self.membership(w, m, a.degree()))
    }

    /// Global basis index of the degree-k element at position `pos` of the
    /// block of weight `w`.
    pub fn basis_index(&self, k: usize, w: &Weight, pos: usize) -> Option<usize> {
        self.offsets.get(k)?.get(w).map(|s| s + pos)
    }
}
