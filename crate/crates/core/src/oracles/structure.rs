//! Closure of the weight blocks, the torus embedding, and the torus
//! algebra's own BV operator.

use itertools::Itertools;

use crate::bv::{derived_bracket, torus_bv, BVOperator};
use crate::error::Result;
use crate::exterior::{Blade, Multivector, Weight};
use crate::gerstenhaber::{gamma_embed, schouten, wedge_fields, Variant, WeightedPolyvector};
use crate::linalg::rat;
use crate::oracles::OracleReport;
use crate::polyvector::PolyvectorSpace;

/// Every product and bracket of two basis elements χ^I·A, χ^J·B lands in
/// the block of weight I + J of the expected degree.
pub fn oracle_closure(space: &PolyvectorSpace) -> Result<OracleReport> {
    let mut r = OracleReport::new("block closure", space.fan().name().unwrap_or("fan"));
    let basis = space.all_basis_elements();
    let weight = |x: &WeightedPolyvector| x.terms().next().map(|(w, _)| w.clone()).expect("basis elements are monomials");
    for a in &basis {
        for b in &basis {
            let target = weight(a).add(&weight(b));
            let (k, l) = (a.degree(), b.degree());
            for (label, value, degree) in [
                ("product", wedge_fields(a, b)?, k + l),
                ("bracket", schouten(a, b)?, (k + l).saturating_sub(1)),
            ] {
                let ok = value.is_zero()
                    || (value.degree() == degree
                        && value.terms().all(|(w, m)| *w == target && space.membership(w, m, degree)));
                r.record(ok, || format!("{label} of {a} and {b} = {value} leaves block {target} in degree {degree}"));
            }
        }
    }
    Ok(r)
}

/// γ is an injective morphism of Gerstenhaber algebras into the torus
/// algebra; when the toric operator has δ = 0 it intertwines the two BV
/// operators.
pub fn oracle_gamma(space: &PolyvectorSpace, op: Option<&BVOperator>) -> Result<OracleReport> {
    let mut r = OracleReport::new("torus embedding", space.fan().name().unwrap_or("fan"));
    let basis = space.all_basis_elements();
    for a in &basis {
        let ga = gamma_embed(a)?;
        r.record(!ga.is_zero(), || format!("gamma({a}) = 0"));
        for b in &basis {
            let gb = gamma_embed(b)?;
            let prod = gamma_embed(&wedge_fields(a, b)?)? == wedge_fields(&ga, &gb)?;
            let br = gamma_embed(&schouten(a, b)?)? == schouten(&ga, &gb)?;
            r.record(prod && br, || format!("gamma fails to preserve structure on {a}, {b}"));
        }
        if let Some(op) = op.filter(|op| op.delta.is_zero()) {
            let ok = gamma_embed(&op.apply(space, a)?)? == torus_bv(&ga)?;
            r.record(ok, || format!("gamma does not intertwine D on {a}"));
        }
    }
    Ok(r)
}

/// All monomials χ^I ⊗ e_S with I in [−radius, radius]^n.
pub fn torus_monomials(n: usize, radius: i64) -> Vec<WeightedPolyvector> {
    let weights = (0..n).map(|_| -radius..=radius).multi_cartesian_product();
    let blades: Vec<Blade> = (0..=n).flat_map(|k| Blade::all_of_grade(n, k)).collect();
    weights
        .flat_map(|w| {
            blades.iter().map(move |b| {
                WeightedPolyvector::monomial(Variant::Torus, Weight(w.clone()), Multivector::from_blade(n, *b, rat(1)))
            })
        })
        .collect()
}

/// D² = 0 and the generating identity for the torus operator on all pairs
/// of monomials with weights in [−radius, radius]^n.
pub fn oracle_torus(n: usize, radius: i64) -> Result<Vec<OracleReport>> {
    let instance = format!("torus algebra, n = {n}, weights in [-{radius},{radius}]^{n}");
    let mut square = OracleReport::new("torus D^2 = 0", &instance);
    let mut generating = OracleReport::new("torus generating identity", &instance);
    let monomials = torus_monomials(n, radius);
    for a in &monomials {
        let dd = torus_bv(&torus_bv(a)?)?;
        square.record(dd.is_zero(), || format!("D(D({a})) = {dd}"));
        for b in &monomials {
            let br = schouten(a, b)?;
            let derived = derived_bracket(torus_bv, a, b)?;
            generating.record(br == derived, || format!("[{a}, {b}] = {br}, derived {derived}"));
        }
    }
    Ok(vec![square, generating])
}
