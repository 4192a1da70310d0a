//! Exact computer algebra for quadratic and hermitian forms.
//!
//! The crate computes the chain of cohomological invariants e_1 (discriminant
//! / Arf), e_2 (Clifford), e_3 (Arason) and higher for quadratic forms over Q
//! and finite fields, for hermitian forms over quaternion algebras and
//! quadratic etale extensions, and for hermitian pairs, and uses them to
//! decide hyperbolicity, isotropy and Witt equivalence. All arithmetic is
//! exact; every invariant-based decision can be cross-checked against
//! exhaustive oracles over small finite fields.
//!
//! ```
//! use wittforms::quadforms::QuadForm;
//! use wittforms::scalars::BaseField;
//!
//! let q = BaseField::rationals();
//! let form = QuadForm::diagonal_ints(&q, &[1, 1, 1, 1]).unwrap();
//! // <1,1,1,1> is the norm form of the Hamilton quaternions: its Clifford
//! // invariant ramifies exactly at 2 and the real place
//! let e2 = form.e_n(2).unwrap();
//! assert!(!e2.is_zero());
//! assert!(!form.is_hyperbolic().unwrap());
//! ```

pub mod algebras;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod hermitian;
pub mod morita;
pub mod oracle;
pub mod pairs;
pub mod quadforms;
pub mod scalars;

pub use error::{Error, Result};
