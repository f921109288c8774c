//! The lattices N ≅ ℤⁿ and M = Hom(N, ℤ), and the exterior algebra ∧•N_ℚ.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{fmt_rat, rat, Rational};

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// A point of N.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&x| rat(x)).collect()
    }

    /// The degree-1 multivector with these coordinates.
    pub fn to_multivector(&self) -> Multivector {
        Multivector::vector(&self.to_rational())
    }
}

/// An integral character I ∈ M, used as a weight label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn pair(&self, x: &LatticeVector) -> i64 {
        self.0.iter().zip(&x.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn to_character(&self) -> CharacterVector {
        CharacterVector(self.0.iter().map(|&x| rat(x)).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A point of M_ℚ. Integral points represent M.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterVector(pub Vec<Rational>);

impl CharacterVector {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&x| rat(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sub_weight(&self, w: &Weight) -> CharacterVector {
        CharacterVector(self.0.iter().zip(&w.0).map(|(a, &b)| a - rat(b)).collect())
    }

    pub fn add(&self, other: &CharacterVector) -> CharacterVector {
        CharacterVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &Rational) -> CharacterVector {
        CharacterVector(self.0.iter().map(|a| a * c).collect())
    }
}

impl fmt::Display for CharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rat).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// ⟨m, x⟩ = Σ mᵢxᵢ.
pub fn pairing(m: &CharacterVector, x: &LatticeVector) -> Result<Rational> {
    check_dim(m.dim(), x.dim())?;
    Ok(m.0.iter().zip(&x.0).fold(Rational::zero(), |acc, (a, &b)| acc + a * rat(b)))
}

/// A basis monomial e_{s₁}∧…∧e_{s_k} with s₁ < … < s_k, stored as a bit set
/// of 0-based indices. Ordered by degree, then lexicographically on the
/// index tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u32);

pub const MAX_DIM: usize = 32;

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_indices(indices: &[usize]) -> Option<Blade> {
        let mut bits = 0u32;
        for &i in indices {
            if i >= MAX_DIM || bits & (1 << i) != 0 {
                return None;
            }
            bits |= 1 << i;
        }
        Some(Blade(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..MAX_DIM).filter(|&i| self.contains(i)).collect()
    }

    pub fn highest(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// Product of two blades: `None` when they share an index, otherwise the
    /// union together with the sign of the sorting permutation.
    pub fn wedge(self, other: Blade) -> Option<(Blade, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        for j in other.indices() {
            swaps += (self.0 >> j).count_ones();
        }
        Some((Blade(self.0 | other.0), swaps % 2 == 1))
    }

    /// Removes index `i`; the flag is set when moving `e_i` to the front
    /// needs an odd number of transpositions.
    pub fn remove(self, i: usize) -> Option<(Blade, bool)> {
        if !self.contains(i) {
            return None;
        }
        let before = (self.0 & ((1u32 << i) - 1)).count_ones();
        Some((Blade(self.0 & !(1 << i)), before % 2 == 1))
    }

    /// All blades of grade `k` in ∧ᵏ of an `n`-dimensional space, in
    /// canonical order.
    pub fn all_of_grade(n: usize, k: usize) -> Vec<Blade> {
        use itertools::Itertools;
        (0..n)
            .combinations(k)
            .map(|c| Blade::from_indices(&c).expect("index below MAX_DIM"))
            .collect()
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade().cmp(&other.grade()).then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("e{}", i + 1)).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// A homogeneous element of ∧ᵏN_ℚ.
///
/// Terms are kept canonical: strictly increasing index tuples, no zero
/// coefficients. The zero multivector still remembers its nominal degree;
/// contracting a scalar yields the zero multivector of degree 0. Equality
/// ignores the degree of zero.
#[derive(Clone)]
pub struct Multivector {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, Rational>,
}

impl PartialEq for Multivector {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.terms == other.terms && (self.terms.is_empty() || self.degree == other.degree)
    }
}

impl Eq for Multivector {}

impl std::hash::Hash for Multivector {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.terms.hash(state);
    }
}

impl Multivector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Self { dim, degree, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: Rational) -> Self {
        let mut m = Self::zero(dim, 0);
        m.add_term(Blade::SCALAR, c);
        m
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, Rational::one())
    }

    /// The basis element e_{i₁}∧…∧e_{i_k} (0-based, any order; the sign of
    /// the sorting permutation is applied, repeated indices give zero).
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut acc = Self::one(dim);
        for &i in indices {
            assert!(i < dim, "index {i} out of range for dimension {dim}");
            let e = Self::from_blade(dim, Blade::from_indices(&[i]).unwrap(), Rational::one());
            acc = acc.wedge_unchecked(&e);
        }
        acc.degree = indices.len();
        acc
    }

    pub fn from_blade(dim: usize, blade: Blade, c: Rational) -> Self {
        let mut m = Self::zero(dim, blade.grade());
        m.add_term(blade, c);
        m
    }

    pub fn vector(coords: &[Rational]) -> Self {
        let dim = coords.len();
        let mut m = Self::zero(dim, 1);
        for (i, c) in coords.iter().enumerate() {
            m.add_term(Blade::from_indices(&[i]).unwrap(), c.clone());
        }
        m
    }

    /// Builds from `(blade, coefficient)` pairs, which must all have the
    /// stated degree.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Blade, Rational)>,
    ) -> Result<Self> {
        let mut m = Self::zero(dim, degree);
        for (b, c) in terms {
            check_dim(degree, b.grade())?;
            if b.highest().is_some_and(|h| h >= dim) {
                return Err(Error::DimensionMismatch { expected: dim, actual: b.highest().unwrap() + 1 });
            }
            m.add_term(b, c);
        }
        Ok(m)
    }

    fn add_term(&mut self, blade: Blade, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(blade).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&blade);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: Blade) -> Rational {
        self.terms.get(&blade).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Multivector {
        if c.is_zero() {
            return Self::zero(self.dim, self.degree);
        }
        Self { dim: self.dim, degree: self.degree, terms: self.terms.iter().map(|(b, x)| (*b, x * c)).collect() }
    }

    pub fn neg(&self) -> Multivector {
        Self { dim: self.dim, degree: self.degree, terms: self.terms.iter().map(|(b, x)| (*b, -x.clone())).collect() }
    }

    pub fn add(&self, other: &Multivector) -> Result<Multivector> {
        check_dim(self.dim, other.dim)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        check_dim(self.degree, other.degree)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Multivector) -> Result<Multivector> {
        self.add(&other.neg())
    }

    fn wedge_unchecked(&self, other: &Multivector) -> Multivector {
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((blade, odd)) = a.wedge(*b) {
                    let c = x * y;
                    out.add_term(blade, if odd { -c } else { c });
                }
            }
        }
        out
    }

    /// a ∧ b. Degrees above the ambient dimension give zero.
    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        check_dim(self.dim, other.dim)?;
        Ok(self.wedge_unchecked(other))
    }

    /// Interior product ι_α: an anti-derivation of degree −1 with
    /// ι_α(x) = ⟨α, x⟩ on vectors.
    pub fn contract(&self, alpha: &CharacterVector) -> Result<Multivector> {
        check_dim(self.dim, alpha.dim())?;
        let mut out = Self::zero(self.dim, self.degree.saturating_sub(1));
        if alpha.is_zero() {
            return Ok(out);
        }
        for (blade, c) in &self.terms {
            for i in blade.indices() {
                let a = &alpha.0[i];
                if a.is_zero() {
                    continue;
                }
                let (rest, odd) = blade.remove(i).unwrap();
                let v = c * a;
                out.add_term(rest, if odd { -v } else { v });
            }
        }
        Ok(out)
    }

    pub fn contract_weight(&self, w: &Weight) -> Result<Multivector> {
        self.contract(&w.to_character())
    }

    /// Coordinates against the canonical basis of ∧ᵏ, in canonical order.
    pub fn dense_coords(&self) -> Vec<Rational> {
        Blade::all_of_grade(self.dim, self.degree).into_iter().map(|b| self.coefficient(b)).collect()
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            let (neg, mag) = if crate::linalg::is_negative(c) { (true, -c.clone()) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if *b == Blade::SCALAR {
                write!(f, "{}", fmt_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{}*{b}", fmt_rat(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[deg {}]({self})", self.degree)
    }
}
