//! Integrability quantities, Poincaré–Dulac normal forms and reversibility
//! conditions for three-dimensional polynomial systems whose linear part is
//! `diag(1, z, z^2)` with `z` a primitive cube root of unity.

pub mod bench;
pub mod conditions;
pub mod cyclotomic;
pub mod error;
pub mod normalform;
pub mod polyring;
pub mod quantities;
pub mod sysspec;

pub use cyclotomic::{CycQ, Rational};
pub use error::{Error, Result};
pub use polyring::{ExpVec, Mono, ParamPoly, PhasePoly};
pub use sysspec::{STriple, SystemSpec};
