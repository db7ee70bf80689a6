//! Exact evaluation, reduction and linear algebra for the diagrammatic
//! category of type C webs and their quadrivalent (1-labeled strand) form.

pub mod bmw_link;
pub mod combinatorics;
pub mod diagram;
pub mod homspace;
pub mod scalar;
pub mod skein;
pub mod webcompile;

pub use scalar::{qbinom, qfact, qint, qint_base, rat_eval, LaurentPoly, RatFunc, ScalarError, ZLaurent};
