//! Sparse polynomials in the system parameters, and truncated polynomials in
//! the phase variables `x1, x2, x3`.

mod expvec;
mod param;
mod phase;

pub use expvec::ExpVec;
pub use param::{ParamPoly, TermJson};
pub use phase::{Coefficient, Mono, PhasePoly};
