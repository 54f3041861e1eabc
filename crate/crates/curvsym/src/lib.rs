//! Exact verification of the algebraic symmetry class of the covariant
//! derivative of the Riemann curvature tensor, together with a numerical
//! curvature lab connecting the algebra to explicit Riemannian and
//! pseudo-Riemannian metrics.
//!
//! The exact side works over arbitrary-precision rationals with zero
//! tolerance: it constructs the symmetry class S_n, verifies that the
//! four-term operator is a left inverse of the six-term map on S_n,
//! re-derives the inverse's coefficients by an independent linear solve, and
//! checks that the quintic-form map has trivial kernel on the class. The
//! numerical side computes Christoffel symbols, lowered curvature, and its
//! covariant derivative for built-in metrics of any signature and tests
//! local symmetry against finite-difference error budgets.
//!
//! All values are immutable and all operations are pure functions, so
//! everything here can be shared and invoked freely across threads.

pub mod curvature;
pub mod error;
pub mod goldens;
pub mod io;
pub mod lemma;
pub mod linalg;
pub mod perm_op;
pub mod polarization;
pub mod scalar;
pub mod symclass;
pub mod tensor;
pub mod verdict;

pub use error::{ChartError, ParseError, TensorError};
pub use perm_op::PermOperator;
pub use scalar::{Rational, Scalar, ScalarKind};
pub use symclass::{symmetry_basis, SymmetryClassBasis};
pub use tensor::{DenseTensor, IndexPermutation};
pub use verdict::{VerdictReport, VerdictStatus};

/// Default configuration constants shared by the CLI and the test suites.
pub mod defaults {
    /// Dimensions verified by default.
    pub const DIMS: [usize; 4] = [2, 3, 4, 5];
    /// The flagged extra dimension.
    pub const EXTRA_DIM: usize = 6;
    /// Random trials per dimension for the proportionality check.
    pub const TRIALS: usize = 50;
    /// Seed for all randomized sampling.
    pub const SEED: u64 = 0x5EED;
    /// Finite-difference step.
    pub const STEP: f64 = 1e-3;
    /// Numerical tolerance for local-symmetry verdicts.
    pub const TOL: f64 = 1e-6;
    /// Points sampled per metric.
    pub const POINTS: usize = 5;
}
