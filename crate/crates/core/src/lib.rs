//! Desk-scale machinery for blackbox polynomial identity testing: exact
//! finite-field algebra, algebraic formulas/ABPs/circuits with their size
//! measures, Reed-Solomon combinatorial designs, grid hitting sets and
//! annihilator construction, the NW variable-reduction map with a
//! factorization-free extraction oracle, and a recursive hitting-set
//! generator with exact symbolic cost accounting.

pub mod bootstrap;
pub mod budget;
pub mod circuit;
pub mod design;
pub mod error;
pub mod field;
pub mod hitting;
pub mod linalg;
pub mod multipoly;
pub mod par;
pub mod ratio;
pub mod reduction;
pub mod rng;
pub mod sample;
pub mod unipoly;

pub use circuit::{Abp, Circuit, CircuitKind, Model, SizeReport};
pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use multipoly::MultiPoly;
pub use par::Parallelism;
pub use unipoly::UniPoly;
