//! Exact symbolic computation with Weil algebras.
//!
//! Everything is over the rationals. Elements of the exterior, Clifford,
//! symmetric, enveloping and Weil algebras share one sparse representation
//! ([`multivec::Elem`]), and operator identities are checked by applying
//! both sides to every basis monomial up to a degree bound.

pub mod cartan;
pub mod clifford;
pub mod duflo;
pub mod error;
pub mod expr;
pub mod liedata;
pub mod multivec;
pub mod par;
pub mod pbw;
pub mod report;
pub mod ring;
pub mod suite;
pub mod weil;

pub use error::{Error, Result};
pub use liedata::LieAlgebra;
pub use multivec::{Elem, LinOp, Mono, Tag, Verdict};
pub use ring::{Poly, QMatrix, Rational, TruncSeries};
