//! Exact polyvector-field algebras of smooth complete toric varieties and
//! their BV operators.

pub mod bv;
pub mod error;
pub mod exterior;
pub mod fan;
pub mod fanfile;
pub mod gerstenhaber;
pub mod linalg;
pub mod oracles;
pub mod polytope;
pub mod polyvector;
pub mod report;

pub use bv::{build_operator, existence, torus_bv, verify_operator, BVOperator, BVSolution, VerificationReport};
pub use error::{Error, Result};
pub use exterior::{Blade, CharacterVector, LatticeVector, Multivector, Weight};
pub use fan::{Fan, FanReport};
pub use fanfile::{corpus, corpus_fan, parse_fan, to_document};
pub use gerstenhaber::{gamma_embed, schouten, wedge_fields, Variant, WeightedPolyvector};
pub use linalg::{RatMatrix, Rational};
pub use polytope::{LatticePointRecord, WeightPolytope};
pub use polyvector::PolyvectorSpace;
