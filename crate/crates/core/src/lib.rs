pub mod cyclotomic;
pub mod der;
pub mod error;
pub mod fmodule;
pub mod glmod;
pub mod lattice;
pub mod linalg;
pub mod qtorus;
pub mod semidirect;
pub mod suites;
pub mod torus;

pub use cyclotomic::{Conductor, CycNumber, Rational};
pub use error::{Error, Result};
pub use qtorus::TorusElement;
pub use torus::{LatticePoint, RadicalBasis, TorusSpec};
pub use der::DerElement;
pub use semidirect::{CartanVector, GElement};
