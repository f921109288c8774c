//! Schouten bracket computed in the affine chart of the first maximal cone,
//! with textbook superalgebra rules on Laurent polynomials.
//!
//! With u_1..u_n the rays of that cone and m_1..m_n the dual basis, the
//! chart coordinates are z_j = χ^{m_j}. A polyvector field is a sum of
//! c·z^e·θ_S with θ_j = ∂/∂z_j odd. The translation sends χ^I to z^c with
//! c_j = ⟨I, u_j⟩ and ρ(x) to Σ_j ⟨m_j, x⟩ z_j θ_j.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::{Blade, LatticeVector, Multivector, Weight};
use crate::fan::Fan;
use crate::gerstenhaber::{schouten, Variant, WeightedPolyvector};
use crate::linalg::{rat, RatMatrix, Rational};
use crate::oracles::OracleReport;
use crate::polyvector::PolyvectorSpace;

/// A Laurent polyvector field in chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartField {
    pub dim: usize,
    pub terms: BTreeMap<(Vec<i64>, Blade), Rational>,
}

impl ChartField {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, e: Vec<i64>, s: Blade, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((e.clone(), s)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(e, s));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((e, s), c) in &other.terms {
            out.push(e.clone(), *s, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        for ((e, s), c) in &self.terms {
            out.push(e.clone(), *s, c * k);
        }
        out
    }

    /// Supercommutative product: z's commute, θ's anticommute.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((e1, s1), c1) in &self.terms {
            for ((e2, s2), c2) in &other.terms {
                if let Some((s, odd)) = s1.wedge(*s2) {
                    let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                    let c = c1 * c2;
                    out.push(e, s, if odd { -c } else { c });
                }
            }
        }
        out
    }

    /// ∂/∂z_i.
    pub fn dz(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for ((e, s), c) in &self.terms {
            if e[i] != 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.push(e2, *s, c * rat(e[i]));
            }
        }
        out
    }

    /// Derivative in θ_i from the left (`left`) or the right.
    pub fn dtheta(&self, i: usize, left: bool) -> Self {
        let mut out = Self::zero(self.dim);
        for ((e, s), c) in &self.terms {
            if !s.contains(i) {
                continue;
            }
            let idx = s.indices();
            let p = idx.iter().position(|&j| j == i).expect("contained");
            let odd = if left { p % 2 == 1 } else { (idx.len() - 1 - p) % 2 == 1 };
            let rest = Blade::from_indices(&idx.iter().copied().filter(|&j| j != i).collect::<Vec<_>>()).expect("valid");
            out.push(e.clone(), rest, if odd { -c.clone() } else { c.clone() });
        }
        out
    }

    /// [P, Q] = Σ_i (P ∂⃖θ_i)(∂_{z_i} Q) − (∂_{z_i} P)(∂⃗θ_i Q).
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim {
            out = out.add(&self.dtheta(i, false).mul(&other.dz(i)));
            out = out.add(&self.dz(i).mul(&other.dtheta(i, true)).scale(&rat(-1)));
        }
        out
    }
}

/// The chart of the first maximal cone and its translation maps.
#[derive(Debug, Clone)]
pub struct Chart {
    dim: usize,
    rays: Vec<LatticeVector>,
    /// Rows are the dual basis m_j.
    dual: RatMatrix,
}

impl Chart {
    pub fn new(fan: &Fan) -> Result<Self> {
        let cone = fan.max_cones().first().ok_or_else(|| Error::InvalidFan("fan has no maximal cone".into()))?;
        let rays: Vec<LatticeVector> = cone.iter().map(|&t| fan.rays()[t].clone()).collect();
        let n = fan.dim();
        // U has the rays as columns; the dual basis is the rows of U⁻¹
        let u = RatMatrix::from_rows(n, &rays.iter().map(|r| r.to_rational()).collect::<Vec<_>>())?.transpose();
        let dual = u.inverse().ok_or_else(|| Error::InvalidFan("first cone is not full-dimensional".into()))?;
        Ok(Self { dim: n, rays, dual })
    }

    fn vector_field(&self, x: &[Rational]) -> ChartField {
        let mut out = ChartField::zero(self.dim);
        for j in 0..self.dim {
            let c: Rational = (0..self.dim).map(|s| &self.dual[(j, s)] * &x[s]).sum();
            let mut e = vec![0; self.dim];
            e[j] = 1;
            out.push(e, Blade::from_indices(&[j]).expect("valid"), c);
        }
        out
    }

    pub fn to_chart(&self, a: &WeightedPolyvector) -> ChartField {
        let n = self.dim;
        let mut out = ChartField::zero(n);
        for (w, m) in a.terms() {
            let e: Vec<i64> = self.rays.iter().map(|u| w.pair(u)).collect();
            let mut monomial = ChartField::zero(n);
            monomial.push(e, Blade::SCALAR, rat(1));
            for (blade, c) in m.terms() {
                let mut f = monomial.scale(c);
                for s in blade.indices() {
                    let mut x = vec![rat(0); n];
                    x[s] = rat(1);
                    f = f.mul(&self.vector_field(&x));
                }
                out = out.add(&f);
            }
        }
        out
    }

    /// Inverse translation: z^e θ_S = χ^I ρ(u_{s_1} ∧ … ∧ u_{s_k}) with
    /// ⟨I, u_j⟩ = e_j − [j ∈ S].
    pub fn from_chart(&self, f: &ChartField, degree: usize) -> Result<WeightedPolyvector> {
        let n = self.dim;
        let mut out = WeightedPolyvector::zero(n, degree, Variant::Toric);
        for ((e, s), c) in &f.terms {
            let shifted: Vec<Rational> = (0..n).map(|j| rat(e[j] - i64::from(s.contains(j)))).collect();
            // I_t = Σ_j c_j (U⁻¹)_{jt}
            let weight: Vec<i64> = (0..n)
                .map(|t| {
                    let q: Rational = (0..n).map(|j| &shifted[j] * &self.dual[(j, t)]).sum();
                    q.is_integer().then(|| i64::try_from(q.to_integer()).ok()).flatten()
                })
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidFan("chart weight is not integral".into()))?;
            let a = s
                .indices()
                .into_iter()
                .try_fold(Multivector::one(n), |acc, j| acc.wedge(&self.rays[j].to_multivector()))?
                .scale(c);
            out = out.add(&WeightedPolyvector::monomial(Variant::Toric, Weight(weight), a))?;
        }
        Ok(out)
    }
}

/// Bracket computed in the chart and translated back.
pub fn oracle_chart_bracket(fan: &Fan, a: &WeightedPolyvector, b: &WeightedPolyvector) -> Result<WeightedPolyvector> {
    if fan.dim() > 2 || a.degree() > 2 || b.degree() > 2 {
        return Err(Error::Input("chart oracle handles surfaces and degrees up to 2".into()));
    }
    let chart = Chart::new(fan)?;
    let p = chart.to_chart(a).bracket(&chart.to_chart(b));
    chart.from_chart(&p, (a.degree() + b.degree()).saturating_sub(1))
}

/// Compares the chart bracket with the fast bracket on all basis pairs
/// plus `extra` seeded pairs of random basis combinations.
pub fn compare_chart_bracket(space: &PolyvectorSpace, extra: usize, seed: u64) -> Result<OracleReport> {
    let fan = space.fan();
    let mut r = OracleReport::new("chart bracket", fan.name().unwrap_or("fan"));
    let basis = space.all_basis_elements();
    let mut pairs: Vec<(WeightedPolyvector, WeightedPolyvector)> = Vec::new();
    for a in &basis {
        for b in &basis {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let graded = space.graded_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_element = |rng: &mut ChaCha8Rng| -> Result<WeightedPolyvector> {
        let k = rng.random_range(0..graded.degrees.len());
        let mut x = WeightedPolyvector::zero(space.dim(), k, Variant::Toric);
        for i in 0..graded.degrees[k].len() {
            let c = rat(rng.random_range(-2..=2));
            x = x.add(&space.basis_element(k, i).scale(&c))?;
        }
        Ok(x)
    };
    for _ in 0..extra {
        let a = random_element(&mut rng)?;
        let b = random_element(&mut rng)?;
        pairs.push((a, b));
    }
    for (a, b) in &pairs {
        let fast = schouten(a, b)?;
        let slow = oracle_chart_bracket(fan, a, b)?;
        r.record(fast == slow, || format!("[{a}, {b}]: fast {fast}, chart {slow}"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp(text: &str, n: usize) -> WeightedPolyvector {
        WeightedPolyvector::parse(text, n, Variant::Toric).unwrap()
    }

    #[test]
    fn projective_line_examples() {
        let fan = Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        let chart = Chart::new(&fan).unwrap();
        // χ^{(1)}e is z²∂_z in the chart of the cone spanned by (1)
        let a = wp("chi(1)*e1", 1);
        let mut z2 = ChartField::zero(1);
        z2.push(vec![2], Blade::from_indices(&[0]).unwrap(), rat(1));
        assert_eq!(chart.to_chart(&a), z2);
        let got = oracle_chart_bracket(&fan, &a, &wp("chi(-1)*e1", 1)).unwrap();
        assert_eq!(got, wp("-2*chi(0)*e1", 1));
        assert!(oracle_chart_bracket(&fan, &wp("chi(0)*e1", 1), &wp("chi(0)*e1", 1)).unwrap().is_zero());
    }

    #[test]
    fn projective_plane_example() {
        let fan = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap();
        let got = oracle_chart_bracket(&fan, &wp("chi(0,0)*e1", 2), &wp("chi(-1,0)*e1", 2)).unwrap();
        assert_eq!(got, wp("-chi(-1,0)*e1", 2));
    }

    #[test]
    fn translation_round_trips() {
        let fan = Fan::from_i64(2, &[&[0, 1], &[-1, -1], &[1, 0]], &[&[1, 2], &[0, 1], &[2, 0]]).unwrap();
        let chart = Chart::new(&fan).unwrap();
        for text in ["chi(1,-1)*e1^e2", "3*chi(-1,0)*e2 - chi(-1,0)*e1", "chi(2,-1)"] {
            let a = wp(text, 2);
            assert_eq!(chart.from_chart(&chart.to_chart(&a), a.degree()).unwrap(), a);
        }
    }

    #[test]
    fn agrees_with_fast_bracket() {
        let p1 = Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        let p2 = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap();
        let f2 = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]).unwrap();
        for fan in [p1, p2, f2] {
            let r = compare_chart_bracket(&PolyvectorSpace::new(&fan).unwrap(), 20, 3).unwrap();
            assert!(r.passed, "{:?}", r.counterexample);
            assert!(r.cases >= 20);
        }
    }
}
