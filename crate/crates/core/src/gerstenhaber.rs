//! Wedge product and Schouten bracket on weighted polyvectors, for both the
//! algebra of holomorphic polyvector fields of a toric variety and the
//! algebra of algebraic polyvector fields on the torus.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{Blade, Multivector, Weight};
use crate::linalg::{fmt_rat, is_negative, parse_rat, rat, Rational};

/// Which algebra an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Holomorphic polyvector fields χ^I·ρ(A) on the compact toric variety.
    Toric,
    /// Algebraic polyvector fields χ^I ⊗ A on the torus.
    Torus,
}

/// A homogeneous sum Σ χ^I·ρ(A_I), stored as a map I ↦ A_I.
#[derive(Clone)]
pub struct WeightedPolyvector {
    dim: usize,
    degree: usize,
    variant: Variant,
    terms: BTreeMap<Weight, Multivector>,
}

impl PartialEq for WeightedPolyvector {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.variant == other.variant
            && self.terms == other.terms
            && (self.terms.is_empty() || self.degree == other.degree)
    }
}

impl Eq for WeightedPolyvector {}

impl WeightedPolyvector {
    pub fn zero(dim: usize, degree: usize, variant: Variant) -> Self {
        Self { dim, degree, variant, terms: BTreeMap::new() }
    }

    /// χ^I·ρ(A).
    pub fn monomial(variant: Variant, weight: Weight, a: Multivector) -> Self {
        assert_eq!(weight.dim(), a.dim(), "weight and multivector dimensions differ");
        let mut out = Self::zero(a.dim(), a.degree(), variant);
        if !a.is_zero() {
            out.terms.insert(weight, a);
        }
        out
    }

    /// The constant function 1.
    pub fn one(dim: usize, variant: Variant) -> Self {
        Self::monomial(variant, Weight::zero(dim), Multivector::one(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &Multivector)> {
        self.terms.iter()
    }

    pub fn term(&self, w: &Weight) -> Option<&Multivector> {
        self.terms.get(w)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        if self.variant != other.variant {
            return Err(Error::VariantMismatch(format!("{:?} vs {:?}", self.variant, other.variant)));
        }
        Ok(())
    }

    fn add_term(&mut self, w: Weight, a: Multivector) -> Result<()> {
        if a.is_zero() {
            return Ok(());
        }
        let sum = match self.terms.remove(&w) {
            Some(prev) => prev.add(&a)?,
            None => a,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, actual: other.degree });
        }
        let mut out = self.clone();
        for (w, a) in &other.terms {
            out.add_term(w.clone(), a.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.degree, self.variant);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(w, a)| (w.clone(), a.scale(c))).collect();
        }
        out
    }

    pub(crate) fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    /// Parses the text form produced by `Display`, e.g.
    /// `2*chi(-1,0)*e1^e2 - 1/2*chi(0,0)*e1`. `chi(I)` alone is the
    /// function χ^I; `0` is the zero function.
    pub fn parse(text: &str, dim: usize, variant: Variant) -> Result<Self> {
        Parser { s: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, dim }
            .expression(variant)
    }
}

impl fmt::Display for WeightedPolyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, a) in &self.terms {
            for (b, c) in a.terms() {
                let (neg, mag) = if is_negative(c) { (true, -c.clone()) } else { (false, c.clone()) };
                match (first, neg) {
                    (true, true) => write!(f, "-")?,
                    (true, false) => {}
                    (false, true) => write!(f, " - ")?,
                    (false, false) => write!(f, " + ")?,
                }
                first = false;
                if !mag.is_one() {
                    write!(f, "{}*", fmt_rat(&mag))?;
                }
                let coords: Vec<String> = w.0.iter().map(i64::to_string).collect();
                write!(f, "chi({})", coords.join(","))?;
                if *b != Blade::SCALAR {
                    write!(f, "*{b}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeightedPolyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[deg {}]({self})", self.variant, self.degree)
    }
}

struct Parser {
    s: Vec<char>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::Input(format!("cannot parse field at offset {}: {msg}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_str(&mut self, lit: &str) -> Result<()> {
        for c in lit.chars() {
            if !self.eat(c) {
                return Err(self.err(&format!("expected `{lit}`")));
            }
        }
        Ok(())
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.s[start..self.pos].iter().collect()
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let d = self.digits();
        let v: i64 = d.parse().map_err(|_| self.err("expected an integer"))?;
        Ok(if neg { -v } else { v })
    }

    fn expression(&mut self, variant: Variant) -> Result<WeightedPolyvector> {
        if self.s.iter().collect::<String>() == "0" {
            return Ok(WeightedPolyvector::zero(self.dim, 0, variant));
        }
        let mut acc: Option<WeightedPolyvector> = None;
        loop {
            let negative = if self.eat('-') {
                true
            } else {
                if !self.eat('+') && acc.is_some() {
                    return Err(self.err("expected `+` or `-`"));
                }
                false
            };
            let mut term = self.term(variant)?;
            if negative {
                term = term.neg();
            }
            acc = Some(match acc {
                None => term,
                Some(prev) => {
                    if !prev.is_zero() && !term.is_zero() && prev.degree() != term.degree() {
                        return Err(self.err("terms of different degrees"));
                    }
                    prev.add(&term)?
                }
            });
            if self.peek().is_none() {
                break;
            }
        }
        acc.ok_or_else(|| self.err("empty expression"))
    }

    fn term(&mut self, variant: Variant) -> Result<WeightedPolyvector> {
        let mut coeff = Rational::one();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let mut text = self.digits();
            if self.eat('/') {
                text.push('/');
                text.push_str(&self.digits());
            }
            coeff = parse_rat(&text).ok_or_else(|| self.err("bad coefficient"))?;
            self.expect_str("*")?;
        }
        self.expect_str("chi(")?;
        let mut coords = vec![self.integer()?];
        while self.eat(',') {
            coords.push(self.integer()?);
        }
        self.expect_str(")")?;
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: coords.len() });
        }
        let mut indices = Vec::new();
        if self.eat('*') {
            if self.eat('1') {
                // explicit scalar
            } else {
                loop {
                    self.expect_str("e")?;
                    let i: usize = self.digits().parse().map_err(|_| self.err("expected a basis index"))?;
                    if i == 0 || i > self.dim {
                        return Err(self.err(&format!("basis index e{i} out of range")));
                    }
                    indices.push(i - 1);
                    if !self.eat('^') {
                        break;
                    }
                }
            }
        }
        let a = Multivector::basis(self.dim, &indices).scale(&coeff);
        let degree = indices.len();
        let mut t = WeightedPolyvector::monomial(variant, Weight(coords), a);
        t.degree = degree;
        Ok(t)
    }
}

/// (χ^I·ρ(A)) ∧ (χ^J·ρ(B)) = χ^{I+J}·ρ(A∧B), extended bilinearly.
pub fn wedge_fields(a: &WeightedPolyvector, b: &WeightedPolyvector) -> Result<WeightedPolyvector> {
    a.check_compatible(b)?;
    let mut out = WeightedPolyvector::zero(a.dim, a.degree + b.degree, a.variant);
    for (i, x) in &a.terms {
        for (j, y) in &b.terms {
            out.add_term(i.add(j), x.wedge(y)?)?;
        }
    }
    Ok(out)
}

/// The Schouten bracket
/// [χ^I·ρ(A), χ^J·ρ(B)] = (−1)^{k+1} χ^{I+J}·ρ((ι_J A)∧B + (−1)^k A∧(ι_I B)),
/// k = deg A, extended bilinearly. Degree-0 arguments use the same formula.
pub fn schouten(a: &WeightedPolyvector, b: &WeightedPolyvector) -> Result<WeightedPolyvector> {
    a.check_compatible(b)?;
    let k = a.degree;
    let mut out = WeightedPolyvector::zero(a.dim, (k + b.degree).saturating_sub(1), a.variant);
    let outer = if k.is_multiple_of(2) { -Rational::one() } else { Rational::one() };
    let inner = if k.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    for (i, x) in &a.terms {
        for (j, y) in &b.terms {
            let first = x.contract_weight(j)?.wedge(y)?;
            let second = x.wedge(&y.contract_weight(i)?)?.scale(&inner);
            out.add_term(i.add(j), first.add(&second)?.scale(&outer))?;
        }
    }
    Ok(out)
}

/// The embedding into the torus algebra, χ^I·ρ(A) ↦ χ^I ⊗ A.
pub fn gamma_embed(a: &WeightedPolyvector) -> Result<WeightedPolyvector> {
    if a.variant != Variant::Toric {
        return Err(Error::VariantMismatch("embedding expects a toric element".into()));
    }
    Ok(a.clone().with_variant(Variant::Torus))
}

/// Sign (−1)^e.
pub(crate) fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        rat(1)
    } else {
        rat(-1)
    }
}
