//! Closed-form limiting results for the one- and two-transformer deletion
//! machines.
//!
//! The underlying deleter is parametrized by a machine parameter; only its
//! limiting behaviour is represented here, which is all that is needed for
//! the reference tables: the one-transformer fidelity of deletion is a closed
//! form in the blank amplitudes, and the two-transformer machine drives the
//! deleted mode into one fixed density operator regardless of the input.
//!
//! For fixed squared magnitudes `(m1^2, m2^2)` the sign of the product
//! `m1 * m2` selects one of two fidelity values, so the tables carry a
//! positive-product and a negative-product branch. The one-transformer
//! machine favours the positive branch; the two-transformer machine reverses
//! the ordering.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;

use crate::linalg::{CMatrix, DensityOperator};
use crate::machines::{BlankState, Branch};
use crate::{Error, Result};

/// A fidelity evaluated on both signs of `m1 * m2` at fixed magnitudes.
///
/// `degenerate` is set when the product vanishes (`m1^2` is 0 or 1); the two
/// branches then coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedFidelity {
    pub positive_branch: f64,
    pub negative_branch: f64,
    pub degenerate: bool,
}

impl BranchedFidelity {
    pub fn branch(&self, branch: Branch) -> f64 {
        match branch {
            Branch::PositiveProduct => self.positive_branch,
            Branch::NegativeProduct => self.negative_branch,
        }
    }
}

/// One row of a reference table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub m1_sq: f64,
    pub m2_sq: f64,
    pub diff: f64,
    pub fidelity: BranchedFidelity,
}

fn check_magnitude_pair(m1_sq: f64, m2_sq: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&m1_sq) || !(0.0..=1.0).contains(&m2_sq) {
        return Err(Error::InvalidParameter(format!(
            "squared magnitudes must lie in [0, 1], got ({m1_sq}, {m2_sq})"
        )));
    }
    let deviation = (m1_sq + m2_sq - 1.0).abs();
    if deviation > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "m1^2 + m2^2 must equal 1, deviation {deviation:.3e}"
        )));
    }
    Ok(())
}

/// Limiting fidelity of the one-transformer machine at fixed magnitudes,
/// both product signs: `F1 = (1 + |m1 m2| * s - (m1^2 - m2^2)/sqrt(2)) / 2`
/// with `s = +1` on the positive branch and `-1` on the negative one.
pub fn f1_branched(m1_sq: f64, m2_sq: f64) -> Result<BranchedFidelity> {
    check_magnitude_pair(m1_sq, m2_sq)?;
    let product = (m1_sq * m2_sq).sqrt();
    let diff = m1_sq - m2_sq;
    let base = 1.0 - diff / SQRT_2;
    Ok(BranchedFidelity {
        positive_branch: 0.5 * (base + product),
        negative_branch: 0.5 * (base - product),
        degenerate: product == 0.0,
    })
}

/// Branched one-transformer fidelity for a concrete blank state. Scoped to
/// real `m2`, like the closed form itself.
pub fn f1_limiting(blank: &BlankState) -> Result<BranchedFidelity> {
    if !blank.has_real_m2() {
        return Err(Error::ComplexBlank {
            context: "limiting fidelity F1",
            imag: blank.m2().im,
        });
    }
    let m1_sq = blank.m1() * blank.m1();
    f1_branched(m1_sq, 1.0 - m1_sq)
}

/// One-transformer fidelity evaluated directly at the blank's own sign:
/// `F1 = (1 + m1 m2 - (m1^2 - m2^2)/sqrt(2)) / 2`.
pub fn f1_value(blank: &BlankState) -> Result<f64> {
    if !blank.has_real_m2() {
        return Err(Error::ComplexBlank {
            context: "limiting fidelity F1",
            imag: blank.m2().im,
        });
    }
    let m1 = blank.m1();
    let m2 = blank.m2().re;
    Ok(0.5 * (1.0 + m1 * m2 - (m1 * m1 - m2 * m2) / SQRT_2))
}

/// The fixed mode-2 density operator that the two-transformer machine
/// produces in the limit, for every input state:
/// diagonal `(5/8, 3/8)`, off-diagonals `(1/sqrt(2) - 1)/4`.
pub fn rho2_two_transformer_limit() -> DensityOperator {
    let c = Complex64::new(0.25 * (FRAC_1_SQRT_2 - 1.0), 0.0);
    let mat = CMatrix::from_rows(&[
        vec![Complex64::new(0.625, 0.0), c],
        vec![c, Complex64::new(0.375, 0.0)],
    ])
    .expect("rectangular row data");
    DensityOperator::new(vec![2], mat).expect("limit operator is a density operator")
}

/// Two-transformer limiting fidelity `F = <Sigma'|rho2'|Sigma'>` as a closed
/// form in the blank amplitudes; complex `m2` is allowed.
///
/// Must agree with evaluating the matrix element through
/// [`rho2_two_transformer_limit`] and [`BlankState::sigma_prime`]; the
/// verification suite holds both routes to 1e-12.
pub fn f_two_transformer(blank: &BlankState) -> f64 {
    let m1 = Complex64::new(blank.m1(), 0.0);
    let m2 = blank.m2();
    let cross = m1 * m2.conj() + m1 * m2;
    let one = Complex64::ONE;
    let value = 0.5
        * (0.625 * (one - cross)
            + 0.25 * (FRAC_1_SQRT_2 - 1.0) * (2.0 * m1 * m1 - m2.conj() * m2.conj() - m2 * m2)
            + 0.375 * (one + cross));
    debug_assert!(value.im.abs() < 1e-12);
    value.re
}

/// Labeled variant: the same limit operator measured against plain `|Sigma>`
/// instead of `|Sigma'>`. Exposed so the two reference states can be compared
/// explicitly; nothing in this crate substitutes one for the other.
pub fn f_two_transformer_vs_sigma(blank: &BlankState) -> f64 {
    rho2_two_transformer_limit()
        .fidelity_against(&blank.sigma())
        .expect("matching dims, Hermitian operator")
}

/// Two-transformer limiting fidelity at fixed real magnitudes, both product
/// signs: `F = 1/2 - m1 m2 / 4 + (1/sqrt(2) - 1)(m1^2 - m2^2)/4`.
pub fn f_two_transformer_branched(m1_sq: f64, m2_sq: f64) -> Result<BranchedFidelity> {
    check_magnitude_pair(m1_sq, m2_sq)?;
    let product = (m1_sq * m2_sq).sqrt();
    let diff = m1_sq - m2_sq;
    let base = 0.5 + 0.25 * (FRAC_1_SQRT_2 - 1.0) * diff;
    Ok(BranchedFidelity {
        positive_branch: base - 0.25 * product,
        negative_branch: base + 0.25 * product,
        degenerate: product == 0.0,
    })
}

/// Grid of squared magnitudes `m1^2 = 0.0, 0.1, ..., 1.0`.
fn magnitude_grid() -> impl Iterator<Item = (f64, f64)> {
    (0..=10).map(|i| {
        let m1_sq = i as f64 / 10.0;
        (m1_sq, 1.0 - m1_sq)
    })
}

fn build_table(f: impl Fn(f64, f64) -> Result<BranchedFidelity>) -> Vec<TableRow> {
    magnitude_grid()
        .map(|(m1_sq, m2_sq)| TableRow {
            m1_sq,
            m2_sq,
            diff: m1_sq - m2_sq,
            fidelity: f(m1_sq, m2_sq).expect("grid magnitudes are valid"),
        })
        .collect()
}

/// The 11-row one-transformer fidelity table.
pub fn table1() -> Vec<TableRow> {
    build_table(f1_branched)
}

/// The 11-row two-transformer fidelity table.
pub fn table2() -> Vec<TableRow> {
    build_table(f_two_transformer_branched)
}
