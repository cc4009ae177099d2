//! Exact computations around Kazhdan-Lusztig theory for finite Weyl groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`laurent`]: integer Laurent polynomials in `v` with the bar involution.
//! * [`coxeter`]: Weyl groups from Cartan types, Bruhat order and intervals.
//! * [`hecke`]: the Hecke algebra in the standard basis, r-polynomials and
//!   the Kazhdan-Lusztig basis.
//! * [`kltables`]: validated tables of (ell-)Kazhdan-Lusztig polynomials,
//!   computed for ell = 0 and loaded from JSON otherwise.
//! * [`multiplicity`]: graded tilting multiplicities, Richardson Poincaré
//!   polynomials and the exhaustive identity suites.
//! * [`flag_oracle`]: brute-force point counts of open Richardson varieties
//!   over small finite fields (type A).

pub mod coxeter;
pub mod error;
pub mod flag_oracle;
pub mod hecke;
pub mod kltables;
pub mod laurent;
pub mod multiplicity;

pub use coxeter::{CartanType, CoxeterSystem, Element, Family, Side};
pub use error::{CoxeterError, LaurentError, MultiplicityError, OracleError, TableError};
pub use hecke::{HeckeAlgebra, HeckeElement};
pub use kltables::{KLTable, TableSet};
pub use laurent::{LaurentPoly, QPoly};
pub use multiplicity::{GradedMultiplicity, MultiplicityEngine, Suite};
