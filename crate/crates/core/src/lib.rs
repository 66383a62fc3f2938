//! Exact computations with Koszul complexes over standard-graded complete
//! intersections: the ζ chain maps, the iterated mapping-cone tower, the
//! minimal free resolution of the residue field and its DG product.

#![allow(clippy::result_large_err)]

pub mod combinat;
pub mod complex;
pub mod dg;
pub mod divided;
pub mod error;
pub mod export;
pub mod field;
pub mod koszul;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod render;
pub mod report;
pub mod resolution;
pub mod ring;
pub mod suite;
pub mod tower;
pub mod zeta;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use poly::{Monomial, Polynomial};
pub use ring::{Config, GradedRing};
