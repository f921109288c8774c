//! Existence and construction of BV (generating) operators.
//!
//! An operator exists iff the affine hulls F̂_I of the faces through all
//! lattice points share a point δ. Equivalently, δ solves ⟨δ, e⟩ = −1 for
//! every ray e that is active at some lattice point. Each such δ gives the
//! operator D(χ^I·ρ(A)) = χ^I·ρ(ι_{δ−I} A), and every BV operator arises
//! this way.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{pairing, CharacterVector, Weight};
use crate::gerstenhaber::{schouten, sign, wedge_fields, Variant, WeightedPolyvector};
use crate::linalg::{fmt_rat, inconsistency_certificate, rat, ratio, LinearSystem, RatMatrix, Rational};
use crate::oracles::{triples, OracleReport};
use crate::polytope::{lattice_vertices, LatticePointRecord, WeightPolytope};
use crate::polyvector::PolyvectorSpace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BVSolution {
    /// Rays active at some lattice point, increasing.
    pub active_rays: Vec<usize>,
    /// One row ⟨δ, e⟩ = −1 per active ray.
    pub system: LinearSystem,
    pub exists: bool,
    pub particular: Option<CharacterVector>,
    /// Direction space of the solution set.
    pub kernel: Vec<CharacterVector>,
    /// When no δ exists: coefficients y with yᵀ·system = 0 and yᵀ·rhs = 1.
    pub certificate: Option<Vec<Rational>>,
}

impl BVSolution {
    pub fn solution_dim(&self) -> Option<usize> {
        self.exists.then_some(self.kernel.len())
    }

    /// Indices (into `active_rays`) of the rows combined by the certificate.
    pub fn inconsistent_rows(&self) -> Vec<usize> {
        self.certificate
            .as_ref()
            .map(|y| y.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect())
            .unwrap_or_default()
    }

    /// The particular solution and the particular solution shifted by each
    /// kernel generator.
    pub fn sample_deltas(&self) -> Vec<CharacterVector> {
        let Some(p) = &self.particular else {
            return Vec::new();
        };
        std::iter::once(p.clone()).chain(self.kernel.iter().map(|k| p.add(k))).collect()
    }

    /// `sample_deltas` plus five fixed rational combinations of the kernel.
    pub fn solution_family(&self) -> Vec<CharacterVector> {
        let mut out = self.sample_deltas();
        let Some(p) = &self.particular else {
            return out;
        };
        if self.kernel.is_empty() {
            return out;
        }
        const COEFFS: [(i64, i64); 5] = [(1, 2), (-3, 1), (2, 3), (-5, 7), (7, 4)];
        for (m, &(num, den)) in COEFFS.iter().enumerate() {
            let mut d = p.clone();
            for (i, k) in self.kernel.iter().enumerate() {
                let c = ratio(num * if (m + i) % 2 == 0 { 1 } else { -1 } + i as i64, den);
                d = d.add(&k.scale(&c));
            }
            out.push(d);
        }
        out
    }
}

/// Assembles and solves the existence system over all lattice points.
pub fn existence(polytope: &WeightPolytope, points: &[LatticePointRecord]) -> Result<BVSolution> {
    let active: BTreeSet<usize> = points.iter().flat_map(|p| p.active.iter().copied()).collect();
    let active_rays: Vec<usize> = active.into_iter().collect();
    let rows: Vec<Vec<Rational>> = active_rays.iter().map(|&t| polytope.rays()[t].to_rational()).collect();
    let system = LinearSystem {
        matrix: RatMatrix::from_rows(polytope.dim(), &rows)?,
        rhs: vec![rat(-1); rows.len()],
    };
    let (exists, particular, kernel, certificate) = match system.solve()? {
        Some(sol) => (
            true,
            Some(CharacterVector(sol.particular)),
            sol.kernel.into_iter().map(CharacterVector).collect(),
            None,
        ),
        None => (false, None, Vec::new(), inconsistency_certificate(&system.matrix, &system.rhs)?),
    };
    Ok(BVSolution { active_rays, system, exists, particular, kernel, certificate })
}

/// The matrices of a candidate operator D: A^k → A^{k−1}, k = 1..=n, in
/// the graded basis. D vanishes on degree 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BVOperator {
    pub delta: CharacterVector,
    /// `matrices[k - 1]` is the matrix of D on degree k.
    pub matrices: Vec<RatMatrix>,
}

impl BVOperator {
    pub fn matrix(&self, k: usize) -> Option<&RatMatrix> {
        k.checked_sub(1).and_then(|i| self.matrices.get(i))
    }

    pub fn apply(&self, space: &PolyvectorSpace, a: &WeightedPolyvector) -> Result<WeightedPolyvector> {
        apply_matrices(&self.matrices, space, a)
    }
}

fn apply_matrices(
    matrices: &[RatMatrix],
    space: &PolyvectorSpace,
    a: &WeightedPolyvector,
) -> Result<WeightedPolyvector> {
    let k = a.degree();
    if a.is_zero() || k == 0 {
        return Ok(WeightedPolyvector::zero(space.dim(), k.saturating_sub(1), Variant::Toric));
    }
    let m = matrices.get(k - 1).ok_or(Error::DegreeOutOfRange { degree: k, max: space.dim() })?;
    let coords = space.coordinates(a)?;
    space.from_coordinates(k - 1, &m.mul_vec(&coords)?)
}

/// Checks ⟨δ, e_t⟩ = −1 for every ray active at some lattice point.
pub fn check_admissible(delta: &CharacterVector, space: &PolyvectorSpace) -> Result<()> {
    if delta.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), actual: delta.dim() });
    }
    let active: BTreeSet<usize> = space.points().iter().flat_map(|p| p.active.iter().copied()).collect();
    for t in active {
        let v = pairing(delta, &space.fan().rays()[t])?;
        if v != rat(-1) {
            return Err(Error::Inadmissible { ray: t, value: fmt_rat(&v) });
        }
    }
    Ok(())
}

/// Builds D(χ^I·ρ(A)) = χ^I·ρ(ι_{δ−I} A) for an admissible δ.
pub fn build_operator(delta: &CharacterVector, space: &PolyvectorSpace) -> Result<BVOperator> {
    check_admissible(delta, space)?;
    let basis = space.graded_basis();
    let mut matrices = Vec::with_capacity(space.dim());
    for k in 1..=space.dim() {
        let mut m = RatMatrix::zeros(basis.degrees[k - 1].len(), basis.degrees[k].len());
        for (col, (w, a)) in basis.degrees[k].iter().enumerate() {
            let image = a.contract(&delta.sub_weight(w))?;
            let block = space
                .block(w, k - 1)
                .ok_or_else(|| Error::NotHolomorphic(format!("no block for weight {w}")))?;
            let coords = block.coordinates(&image).ok_or_else(|| {
                Error::NotHolomorphic(format!("image {image} of weight {w} leaves the block in degree {}", k - 1))
            })?;
            for (pos, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    let row = space.basis_index(k - 1, w, pos).expect("nonempty block has an offset");
                    m[(row, col)] = c;
                }
            }
        }
        matrices.push(m);
    }
    Ok(BVOperator { delta: delta.clone(), matrices })
}

/// Reads δ off the weight-0 vector fields, ⟨δ, x⟩ = D(ρ(x)), and returns it
/// iff the candidate coincides with the operator built from that δ.
pub fn classify_form(candidate: &[RatMatrix], space: &PolyvectorSpace) -> Option<CharacterVector> {
    let n = space.dim();
    let dims = space.dims();
    if candidate.len() != n {
        return None;
    }
    for k in 1..=n {
        let m = &candidate[k - 1];
        if m.rows() != dims[k - 1] || m.cols() != dims[k] {
            return None;
        }
    }
    let zero = Weight::zero(n);
    let delta = CharacterVector(
        (0..n)
            .map(|j| space.basis_index(1, &zero, j).map(|col| candidate[0][(0, col)].clone()))
            .collect::<Option<Vec<_>>>()?,
    );
    let built = build_operator(&delta, space).ok()?;
    (built.matrices == candidate).then_some(delta)
}

/// D(χ^I ⊗ A) = −χ^I ⊗ ι_I A on the torus algebra.
pub fn torus_bv(a: &WeightedPolyvector) -> Result<WeightedPolyvector> {
    if a.variant() != Variant::Torus {
        return Err(Error::VariantMismatch("torus operator expects a torus element".into()));
    }
    let mut out = WeightedPolyvector::zero(a.dim(), a.degree().saturating_sub(1), Variant::Torus);
    for (w, m) in a.terms() {
        let t = WeightedPolyvector::monomial(Variant::Torus, w.clone(), m.contract_weight(w)?.neg());
        out = out.add(&t)?;
    }
    Ok(out)
}

/// (−1)^{|a|}(D(ab) − D(a)b − (−1)^{|a|} a D(b)).
pub fn derived_bracket<F>(d: F, a: &WeightedPolyvector, b: &WeightedPolyvector) -> Result<WeightedPolyvector>
where
    F: Fn(&WeightedPolyvector) -> Result<WeightedPolyvector>,
{
    let s = sign(a.degree());
    let dab = d(&wedge_fields(a, b)?)?;
    let da_b = wedge_fields(&d(a)?, b)?;
    let a_db = wedge_fields(a, &d(b)?)?.scale(&s);
    Ok(dab.sub(&da_b)?.sub(&a_db)?.scale(&s))
}

/// Right side minus left side of the order-2 identity
/// D(abc) = D(ab)c + (−1)^{|a|} a D(bc) + (−1)^{|b|(|a|+1)} b D(ac)
///          − D(a)bc − (−1)^{|a|} a D(b) c − (−1)^{|a|+|b|} ab D(c).
pub fn order_two_defect<F>(
    d: F,
    a: &WeightedPolyvector,
    b: &WeightedPolyvector,
    c: &WeightedPolyvector,
) -> Result<WeightedPolyvector>
where
    F: Fn(&WeightedPolyvector) -> Result<WeightedPolyvector>,
{
    let (p, q) = (a.degree(), b.degree());
    let ab = wedge_fields(a, b)?;
    let bc = wedge_fields(b, c)?;
    let ac = wedge_fields(a, c)?;
    let lhs = d(&wedge_fields(&ab, c)?)?;
    let terms = [
        wedge_fields(&d(&ab)?, c)?,
        wedge_fields(a, &d(&bc)?)?.scale(&sign(p)),
        wedge_fields(b, &d(&ac)?)?.scale(&sign(q * (p + 1))),
        wedge_fields(&wedge_fields(&d(a)?, b)?, c)?.neg(),
        wedge_fields(&wedge_fields(a, &d(b)?)?, c)?.scale(&-sign(p)),
        wedge_fields(&ab, &d(c)?)?.scale(&-sign(p + q)),
    ];
    let mut rhs = WeightedPolyvector::zero(a.dim(), lhs.degree(), a.variant());
    for t in &terms {
        rhs = rhs.add(t)?;
    }
    rhs.sub(&lhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub delta: String,
    pub checks: Vec<OracleReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&OracleReport> {
        self.checks.iter().find(|c| c.check == name)
    }
}

pub const CHECK_SQUARE_ZERO: &str = "D^2 = 0";
pub const CHECK_GENERATING: &str = "generating identity";
pub const CHECK_ORDER_TWO: &str = "order-2 identity";
pub const CHECK_DEFINITIONS: &str = "BV definitions agree";

/// Checks D∘D = 0, the generating identity on all basis pairs and the
/// order-2 identity on basis triples (exhaustive up to the triple budget).
/// The operator is applied through its matrices, so corrupted matrices are
/// caught.
pub fn verify_operator(op: &BVOperator, space: &PolyvectorSpace, seed: u64) -> VerificationReport {
    let instance = space.fan().name().unwrap_or("fan").to_string();
    let d = |x: &WeightedPolyvector| op.apply(space, x);

    let mut square = OracleReport::new(CHECK_SQUARE_ZERO, &instance);
    for k in 2..=space.dim() {
        let ok = match (op.matrix(k - 1), op.matrix(k)) {
            (Some(lo), Some(hi)) => lo.mul(hi).map(|p| p.is_zero()).unwrap_or(false),
            _ => false,
        };
        square.record(ok, || format!("D∘D ≠ 0 on degree {k}"));
    }

    let basis = space.all_basis_elements();
    let mut generating = OracleReport::new(CHECK_GENERATING, &instance);
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let ok = match (schouten(a, b), derived_bracket(d, a, b)) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            };
            generating.record(ok, || format!("pair ({i}, {j}): a = {a}, b = {b}"));
        }
    }

    let mut order_two = OracleReport::new(CHECK_ORDER_TWO, &instance);
    for (i, j, l) in triples(basis.len(), seed) {
        let ok = order_two_defect(d, &basis[i], &basis[j], &basis[l]).map(|x| x.is_zero()).unwrap_or(false);
        order_two.record(ok, || {
            format!("triple ({i}, {j}, {l}): a = {}, b = {}, c = {}", basis[i], basis[j], basis[l])
        });
    }

    // generating + square-zero must force the order-2 identity
    let mut agree = OracleReport::new(CHECK_DEFINITIONS, &instance);
    let def_generating = square.passed && generating.passed;
    let def_order_two = square.passed && order_two.passed && generating.passed;
    agree.record(def_generating == def_order_two, || {
        "square-zero generating operator fails the order-2 identity".into()
    });

    VerificationReport { delta: format!("{}", op.delta), checks: vec![square, generating, order_two, agree] }
}

/// If a BV operator exists, the polytope has at most one lattice vertex,
/// and a lattice vertex pins δ to itself.
pub fn vertex_consequence(space: &PolyvectorSpace, sol: &BVSolution) -> OracleReport {
    let mut r = OracleReport::new("lattice-vertex consequence", space.fan().name().unwrap_or("fan"));
    let vertices = lattice_vertices(space.points(), space.dim());
    if !sol.exists {
        r.record(true, String::new);
        return r;
    }
    r.record(vertices.len() <= 1, || format!("{} lattice vertices but a BV operator exists", vertices.len()));
    if let [v] = vertices.as_slice() {
        let pinned = sol.kernel.is_empty() && sol.particular.as_ref() == Some(&v.weight.to_character());
        r.record(pinned, || format!("vertex {} does not pin the solution space", v.weight));
    }
    r
}

/// For every δ in the solution family, the operator builds and every image
/// lies in the expected block.
pub fn admissible_family_builds(space: &PolyvectorSpace, sol: &BVSolution) -> OracleReport {
    let mut r = OracleReport::new("admissible deltas build", space.fan().name().unwrap_or("fan"));
    for delta in sol.solution_family() {
        let res = build_operator(&delta, space);
        r.record(res.is_ok(), || format!("delta {delta}: {}", res.unwrap_err()));
    }
    r
}

/// Candidates that are not of BV form: a perturbed top-degree entry, a
/// perturbed weight-0 vector-field entry, and a truncated matrix list.
pub fn negative_controls(op: &BVOperator) -> Vec<(String, Vec<RatMatrix>)> {
    let mut out = Vec::new();
    let n = op.matrices.len();
    if let Some(top) = op.matrices.last().filter(|m| m.rows() > 0 && m.cols() > 0) {
        let mut m = op.matrices.clone();
        let mut t = top.clone();
        t[(0, 0)] += rat(1);
        m[n - 1] = t;
        out.push(("top-degree entry perturbed".to_string(), m));
    }
    if let Some(first) = op.matrices.first().filter(|m| m.rows() > 0 && m.cols() > 0) {
        let mut m = op.matrices.clone();
        let mut t = first.clone();
        let last = t.cols() - 1;
        t[(0, last)] += rat(1);
        m[0] = t;
        out.push(("vector-field entry perturbed".to_string(), m));
    }
    out.push(("degree list truncated".to_string(), op.matrices[..n.saturating_sub(1)].to_vec()));
    out
}

/// classify_form recovers δ from every built operator and rejects every
/// negative control. Without an admissible δ, the zero operator must be
/// rejected.
pub fn classify_round_trip(space: &PolyvectorSpace, sol: &BVSolution) -> OracleReport {
    let mut r = OracleReport::new("classify round trip", space.fan().name().unwrap_or("fan"));
    if !sol.exists {
        let basis = space.graded_basis();
        let zero: Vec<RatMatrix> =
            (1..=space.dim()).map(|k| RatMatrix::zeros(basis.degrees[k - 1].len(), basis.degrees[k].len())).collect();
        r.record(classify_form(&zero, space).is_none(), || "zero operator accepted without an admissible delta".into());
        return r;
    }
    for delta in sol.sample_deltas() {
        match build_operator(&delta, space) {
            Ok(op) => {
                r.record(classify_form(&op.matrices, space).as_ref() == Some(&delta), || {
                    format!("delta {delta} not recovered")
                });
                for (label, bad) in negative_controls(&op) {
                    r.record(classify_form(&bad, space).is_none(), || format!("control '{label}' at delta {delta} accepted"));
                }
            }
            Err(e) => r.fail(format!("delta {delta}: {e}")),
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Multivector;
    use crate::fan::Fan;

    fn p1() -> Fan {
        Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap()
    }

    #[test]
    fn p1_has_no_operator() {
        let s = PolyvectorSpace::new(&p1()).unwrap();
        let sol = existence(s.polytope(), s.points()).unwrap();
        assert!(!sol.exists);
        assert_eq!(sol.active_rays, vec![0, 1]);
        assert_eq!(sol.inconsistent_rows(), vec![0, 1]);
        assert!(matches!(build_operator(&CharacterVector::from_i64(&[-1]), &s), Err(Error::Inadmissible { ray: 1, .. })));
    }

    #[test]
    fn torus_operator_examples() {
        let t = Variant::Torus;
        let a = WeightedPolyvector::monomial(t, Weight(vec![1, 0]), Multivector::basis(2, &[0, 1]));
        let expected = WeightedPolyvector::monomial(t, Weight(vec![1, 0]), Multivector::basis(2, &[1]).neg());
        assert_eq!(torus_bv(&a).unwrap(), expected);
        let w0 = WeightedPolyvector::monomial(t, Weight::zero(2), Multivector::basis(2, &[0]));
        assert!(torus_bv(&w0).unwrap().is_zero());
        let f = WeightedPolyvector::monomial(t, Weight(vec![3, 1]), Multivector::one(2));
        assert!(torus_bv(&f).unwrap().is_zero());
        assert!(torus_bv(&a.clone().with_variant(Variant::Toric)).is_err());
    }

    #[test]
    fn solution_family_shape() {
        let sol = BVSolution {
            active_rays: vec![],
            system: LinearSystem::empty(2),
            exists: true,
            particular: Some(CharacterVector::zero(2)),
            kernel: vec![CharacterVector::from_i64(&[1, 0]), CharacterVector::from_i64(&[0, 1])],
            certificate: None,
        };
        let fam = sol.solution_family();
        assert_eq!(fam.len(), 3 + 5);
        assert_eq!(fam[1], CharacterVector::from_i64(&[1, 0]));
        let distinct: BTreeSet<_> = fam.iter().collect();
        assert_eq!(distinct.len(), fam.len());
    }
}
