//! Exact arithmetic for numerical maps and the homotopy-theoretic machinery
//! built on them: binomial-basis polynomials, numerical rings, integer
//! homological algebra, the Dold–Kan functors, numerical simplicial objects
//! and their cochain cohomology, nilpotent groups in Malcev coordinates, and
//! p-local / p-adic coefficient rings.

pub mod binom;
pub mod cli;
pub mod coeff;
pub mod dold_kan;
pub mod error;
pub mod expr;
pub mod golden;
pub mod homalg;
pub mod nilgroup;
pub mod numring;
pub mod simplicial;

pub use binom::{BinomialPoly, MultiIndex, RationalPoly};
pub use error::{NumaError, Result};
