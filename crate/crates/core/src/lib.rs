//! Exact arithmetic for the cusp geometry of Hilbert modular surfaces.
//!
//! The crate classifies orientable (2,1)-torus bundles by geometry
//! (Euclidean, Nil, Sol), attaches to every Sol monodromy its real
//! quadratic field, eigenvalue unit and rank-2 module, and computes the
//! cusp invariants of the associated peripheral data exactly: module
//! volumes, trace-dual lattices, Dedekind sums, the Rademacher function,
//! minus-continued-fraction cycles, the signature defect delta, and
//! partial Shimizu L-sums. No floating point enters any decision; floats
//! appear only in display-approximation fields.
//!
//! Module map:
//!
//! - [`exactnum`]: elements (p + q sqrt(d))/r of a real quadratic field
//!   with exact sign determination at both embeddings.
//! - [`quadfield`]: integral basis, fundamental unit (Pell route), totally
//!   positive unit generator, narrow/wide class numbers.
//! - [`intlinalg`]: Hermite/Smith normal forms and integral linear solving
//!   over unbounded integers.
//! - [`dedekind`]: Dedekind sums and the Rademacher Phi/psi functions on
//!   SL(2,Z).
//! - [`solbundle`]: geometry classification, eigenvalue lattices,
//!   arithmeticity reports, presentation parsing and representation
//!   building into O_k x| O_{k,+}^x.
//! - [`cuspinv`]: volumes, dual modules, minus continued fractions, the
//!   signature defect by two independent exact routes, Shimizu partial
//!   sums, and the geometric-bounding obstruction verdict.

pub mod cuspinv;
pub mod dedekind;
pub mod error;
pub mod exactnum;
pub mod intlinalg;
pub mod quadfield;
pub mod solbundle;

pub use error::CuspError;
pub use exactnum::{QuadIrr, Rational, SurdValue};
pub use quadfield::FieldData;
pub use solbundle::GeometryClass;
