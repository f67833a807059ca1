//! Approximate quantum deletion machines on small tensor-product spaces.
//!
//! Exact deletion of an unknown qubit against a copy is forbidden, so every
//! machine here is approximate: it maps two identical copies of a qubit
//! towards one copy plus a fixed blank state, and the quality of the result
//! is measured by the fidelity between the deleted mode and the blank.
//!
//! The crate covers three machine configurations:
//!
//! * the limiting one-transformer machine, whose fidelity of deletion is a
//!   closed form in the blank-state amplitudes ([`limits::f1_limiting`]),
//! * the limiting two-transformer machine, whose deleted mode settles into a
//!   fixed density operator ([`limits::rho2_two_transformer_limit`]),
//! * the Pati-Braunstein conditional deleter, alone and followed by the
//!   transformer gate ([`machines::pb_alone_fidelity`],
//!   [`machines::pb_with_transformer_fidelity`]).
//!
//! Every closed-form result has a second, independent route through a dense
//! tensor-product simulation built on [`linalg`], and the [`verify`] module
//! checks the two routes against each other along with the reference fidelity
//! tables. The `qdel` binary exposes the same functionality as subcommands
//! (`table1`, `table2`, `pb`, `average`, `verify`), and the `examples/`
//! directory has one runnable program per capability.
//!
//! ```
//! use qdel::machines::{BlankState, InputQubit, pb_with_transformer_fidelity};
//!
//! let blank = BlankState::real(std::f64::consts::FRAC_1_SQRT_2,
//!                              -std::f64::consts::FRAC_1_SQRT_2).unwrap();
//! let input = InputQubit::from_alpha(0.6).unwrap();
//! let report = pb_with_transformer_fidelity(&input, &blank);
//! // This blank deletes every input with the same fidelity.
//! assert!((report.fidelity - (0.5 + 0.5 / std::f64::consts::SQRT_2)).abs() < 1e-12);
//! ```

pub mod limits;
pub mod linalg;
pub mod machines;
pub mod sweep;
pub mod verify;

/// Errors shared by the whole crate.
///
/// States and operators are validated at construction and never silently
/// renormalized, so a violated invariant surfaces here instead of being
/// masked by downstream arithmetic.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite amplitude at index {index}")]
    NonFiniteEntry { index: usize },
    #[error("subsystem dimensions must be non-empty with every entry >= 2, got {0:?}")]
    BadDims(Vec<usize>),
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("state norm deviates from 1 by {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotNormalized { deviation: f64, tolerance: f64 },
    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("trace deviates from 1 by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("operator is not unitary: max |U^dagger U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },
    #[error("subsystem dimensions {lhs:?} and {rhs:?} do not match")]
    DimensionMismatch { lhs: Vec<usize>, rhs: Vec<usize> },
    #[error("set of subsystems to keep is empty")]
    EmptyKeepSet,
    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },
    #[error("quadratic form has imaginary residue {residue:.3e} above tolerance {tolerance:.1e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },
    #[error("blank state violates m1^2 + |m2|^2 = 1: deviation {deviation:.3e}")]
    BlankNotNormalized { deviation: f64 },
    #[error("input qubit violates alpha^2 + |beta|^2 = 1: deviation {deviation:.3e}")]
    InputNotNormalized { deviation: f64 },
    #[error("alpha must be non-negative, got {0}")]
    NegativeAlpha(f64),
    #[error("{context} requires real blank amplitudes, got m2 with imaginary part {imag:.3e}")]
    ComplexBlank { context: &'static str, imag: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
