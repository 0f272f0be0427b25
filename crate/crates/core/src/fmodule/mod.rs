//! Graded modules `F^α(V)`, `F^α_g(V)`, `G^α_g(V)` on box truncations of
//! `V ⊗ C_q`, and exact checks of their operator identities.

mod character;
pub mod checks;
mod module;
mod report;

pub use character::TwistCharacter;
pub use module::{ad, box_points, c2, in_box, t, tprime, witt, BoxVector, Flavor, ModuleSpec, Operator};
pub use report::{fnv1a, CheckContext, Report, Tally};
