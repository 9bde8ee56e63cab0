//! Error type shared by all modules.

use num_bigint::BigInt;
use thiserror::Error;

use crate::solbundle::GeometryClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CuspError {
    /// Arithmetic between elements of Q(sqrt(d1)) and Q(sqrt(d2)), d1 != d2.
    #[error("incompatible fields: sqrt({0}) vs sqrt({1})")]
    IncompatibleFields(BigInt, BigInt),

    #[error("division by zero")]
    DivisionByZero,

    /// A field label must be a squarefree integer > 1.
    #[error("{0} is not a valid field label (need a squarefree integer > 1)")]
    InvalidFieldLabel(BigInt),

    #[error("argument must be a positive integer")]
    NonPositiveArgument,

    #[error("dedekind sum requires gcd({a}, {c}) = 1 and {c} > 0")]
    NotCoprime { a: BigInt, c: BigInt },

    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(BigInt),

    #[error("matrix with trace {0} is not hyperbolic")]
    NotHyperbolic(BigInt),

    #[error("not a Sol monodromy ({0})")]
    NotSol(GeometryClass),

    /// Module basis entries are linearly dependent over Q.
    #[error("module basis is degenerate")]
    DegenerateModule,

    #[error("minus continued fraction of a rational number does not terminate in a cycle")]
    RationalInput,

    #[error("unit does not stabilize the module")]
    NotAStabilizer,

    #[error("element is not a unit of norm +1")]
    NotAUnit,

    #[error("unit is not totally positive")]
    NotTotallyPositive,

    #[error("unsupported ranks: fiber rank {n}, base rank {m} (only (2,1) bundles are supported)")]
    UnsupportedRank { n: usize, m: usize },

    /// Finite extensions of torus-bundle groups are out of scope.
    #[error("unsupported: finite holonomy extension")]
    FiniteHolonomyExtension,

    #[error("relator for x{fiber} under y{base} is inconsistent with the holonomy action")]
    InconsistentRelators { fiber: usize, base: usize },

    #[error("syntax error at line {line}: {msg}")]
    PresentationSyntax { line: usize, msg: String },

    #[error("cannot parse value: {0}")]
    ParseValue(String),

    #[error("Shimizu partial sums require s >= 2 (got {0})")]
    UnsupportedSeriesExponent(i64),
}

pub type Result<T> = std::result::Result<T, CuspError>;
