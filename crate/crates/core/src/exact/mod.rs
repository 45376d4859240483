//! Exact arithmetic substrate: rationals, matrices, finite rings, tables,
//! and the ambient-group interface.

pub mod group;
pub mod matrix;
pub mod rational;
pub mod ring;
pub mod table;

pub use group::{verify_group_axioms, AmbientGroup, GroupElement, GroupKind, SemidirectTables};
pub use matrix::Matrix;
pub use rational::Rational;
pub use ring::{FiniteRing, RingElem};
pub use table::{CayleyTable, TableSpec};
