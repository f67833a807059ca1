//! The deletion machines: blank states, the transformer gate, the
//! Pati-Braunstein conditional deleter, and the deleter + transformer
//! pipeline.
//!
//! The P-B deleter acts on two qubit modes plus a three-level machine
//! register with orthonormal states `|A>`, `|A0>`, `|A1>` (basis order 0, 1,
//! 2). On the symmetric two-copy input it deletes exactly on `|00>` and
//! `|11>` and passes `|01>` and `|10>` through untouched:
//!
//! ```text
//! |0>|0>|A>  ->  |0>|Sigma>|A0>
//! |1>|1>|A>  ->  |1>|Sigma>|A1>
//! |0>|1>|A>  ->  |0>|1>|A>
//! |1>|0>|A>  ->  |1>|0>|A>
//! ```
//!
//! The map is kept as an isometry on the rays above, extended linearly; no
//! unitary completion is constructed because no other input ever reaches it.
//! Appending the transformer gate to the deleted pair raises the fidelity of
//! deletion and, for the blank `(1/sqrt(2), -1/sqrt(2))`, makes it the same
//! for every input state.
//!
//! Two independent routes exist for the reduced mode-2 operator: the dense
//! tensor simulation ([`pb_with_transformer_rho2`]) and the closed form
//! ([`pb_rho2_closed_form`]); they must agree entrywise, and the test suite
//! and [`crate::verify`] hold them to that.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::linalg::{flat_index, CMatrix, DensityOperator, PureState, UnitaryOperator};
use crate::{limits, Error, Result};

/// Normalization tolerance for machine parameters.
pub const PARAM_TOL: f64 = 1e-12;

/// Machine register basis indices.
const MACHINE_A: usize = 0;
const MACHINE_A0: usize = 1;
const MACHINE_A1: usize = 2;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The four machine configurations this crate models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Machine {
    OneTransformerLimit,
    TwoTransformerLimit,
    PbWithTransformer,
    PbAlone,
}

impl Machine {
    pub const ALL: [Machine; 4] = [
        Machine::OneTransformerLimit,
        Machine::TwoTransformerLimit,
        Machine::PbWithTransformer,
        Machine::PbAlone,
    ];

    /// Stable identifier used on the command line and in reports.
    pub fn id(&self) -> &'static str {
        match self {
            Machine::OneTransformerLimit => "one-transformer-limit",
            Machine::TwoTransformerLimit => "two-transformer-limit",
            Machine::PbWithTransformer => "pb-with-transformer",
            Machine::PbAlone => "pb-alone",
        }
    }
}

impl std::fmt::Display for Machine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Machine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Machine::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown machine id {s:?}; expected one of: {}",
                    Machine::ALL.map(|m| m.id()).join(", ")
                ))
            })
    }
}

/// Blank-state parameters `(m1, m2)` with `m1` real, `m2` complex and
/// `m1^2 + |m2|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlankState {
    m1: f64,
    m2: Complex64,
}

impl BlankState {
    pub fn new(m1: f64, m2: Complex64) -> Result<Self> {
        if !m1.is_finite() || !m2.re.is_finite() || !m2.im.is_finite() {
            return Err(Error::NonFiniteEntry { index: 0 });
        }
        let deviation = (m1 * m1 + m2.norm_sqr() - 1.0).abs();
        if deviation > PARAM_TOL {
            return Err(Error::BlankNotNormalized { deviation });
        }
        Ok(Self { m1, m2 })
    }

    /// Blank state with both amplitudes real.
    pub fn real(m1: f64, m2: f64) -> Result<Self> {
        Self::new(m1, re(m2))
    }

    /// Blank state from squared magnitude `m1^2 in [0, 1]`, with the sign of
    /// the product `m1 * m2` chosen explicitly. Degenerate for
    /// `m1_sq in {0, 1}` where the product vanishes either way.
    pub fn from_m1_sq(m1_sq: f64, negative_product: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&m1_sq) {
            return Err(Error::InvalidParameter(format!(
                "m1_sq must lie in [0, 1], got {m1_sq}"
            )));
        }
        let m1 = m1_sq.sqrt();
        let m2 = (1.0 - m1_sq).sqrt();
        Self::real(m1, if negative_product { -m2 } else { m2 })
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> Complex64 {
        self.m2
    }

    /// The product `m1 * m2` whose sign selects the table branch.
    pub fn product(&self) -> Complex64 {
        self.m2 * self.m1
    }

    pub fn has_real_m2(&self) -> bool {
        self.m2.im == 0.0
    }

    /// Branch label from the sign of `m1 * m2`; `None` when the product
    /// vanishes or is not real.
    pub fn branch(&self) -> Option<Branch> {
        if !self.has_real_m2() {
            return None;
        }
        let p = self.m1 * self.m2.re;
        if p > 0.0 {
            Some(Branch::PositiveProduct)
        } else if p < 0.0 {
            Some(Branch::NegativeProduct)
        } else {
            None
        }
    }

    /// `|Sigma> = m1|0> + m2|1>`.
    pub fn sigma(&self) -> PureState {
        PureState::qubit(re(self.m1), self.m2).expect("blank state is normalized")
    }

    /// `|Sigma_perp> = -m2*|0> + m1|1>`, orthogonal to `|Sigma>`.
    pub fn sigma_perp(&self) -> PureState {
        PureState::qubit(-self.m2.conj(), re(self.m1)).expect("blank state is normalized")
    }

    /// `|Sigma'> = (|Sigma> + |Sigma_perp>) / sqrt(2)`, the reference state
    /// of the two-transformer machine.
    pub fn sigma_prime(&self) -> PureState {
        let c0 = (re(self.m1) - self.m2.conj()) * FRAC_1_SQRT_2;
        let c1 = (self.m2 + self.m1) * FRAC_1_SQRT_2;
        PureState::qubit(c0, c1).expect("equal superposition of orthonormal states")
    }
}

/// The blank state `(1/sqrt(2), -1/sqrt(2))` at which the deleter +
/// transformer machine becomes input independent.
pub fn special_blank() -> BlankState {
    BlankState::real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2).expect("normalized by construction")
}

/// Fidelity of deletion at [`special_blank`]: `1/2 + 1/(2 sqrt(2))`.
pub const SPECIAL_BLANK_FIDELITY: f64 = 0.5 + 0.5 * FRAC_1_SQRT_2;

/// Input qubit `alpha|0> + beta|1>` with `alpha` real and non-negative
/// (global phase convention) and `alpha^2 + |beta|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputQubit {
    alpha: f64,
    beta: Complex64,
}

impl InputQubit {
    pub fn new(alpha: f64, beta: Complex64) -> Result<Self> {
        if !alpha.is_finite() || !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(Error::NonFiniteEntry { index: 0 });
        }
        if alpha < 0.0 {
            return Err(Error::NegativeAlpha(alpha));
        }
        let deviation = (alpha * alpha + beta.norm_sqr() - 1.0).abs();
        if deviation > PARAM_TOL {
            return Err(Error::InputNotNormalized { deviation });
        }
        Ok(Self { alpha, beta })
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, re(beta))
    }

    /// Input with `beta = sqrt(1 - alpha^2)` real.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        Self::real(alpha, (1.0 - alpha * alpha).sqrt())
    }

    /// Input from `alpha^2 in [0, 1]`, the sweep parameter of the averages.
    pub fn from_alpha_sq(alpha_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_sq) {
            return Err(Error::InvalidParameter(format!(
                "alpha^2 must lie in [0, 1], got {alpha_sq}"
            )));
        }
        Self::real(alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt())
    }

    /// Input with `|beta| = sqrt(1 - alpha^2)` carrying phase `phi`.
    pub fn with_phase(alpha: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        let beta = Complex64::from_polar((1.0 - alpha * alpha).sqrt(), phi);
        Self::new(alpha, beta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn state(&self) -> PureState {
        PureState::qubit(re(self.alpha), self.beta).expect("input qubit is normalized")
    }
}

/// Which sign of `m1 * m2` a reported fidelity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    PositiveProduct,
    NegativeProduct,
}

/// One fidelity-of-deletion result with the parameters that produced it.
///
/// `input` is `None` exactly for the two limiting machines, whose fidelity
/// does not depend on the input state.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub machine: Machine,
    pub blank: BlankState,
    pub input: Option<InputQubit>,
    pub fidelity: f64,
    pub branch: Option<Branch>,
}

impl FidelityReport {
    fn for_input(machine: Machine, blank: BlankState, input: InputQubit, fidelity: f64) -> Self {
        debug_assert!(matches!(
            machine,
            Machine::PbWithTransformer | Machine::PbAlone
        ));
        Self {
            machine,
            branch: blank.branch(),
            blank,
            input: Some(input),
            fidelity,
        }
    }

    /// Report for an input-independent machine.
    pub fn input_independent(machine: Machine, blank: BlankState, fidelity: f64) -> Self {
        debug_assert!(matches!(
            machine,
            Machine::OneTransformerLimit | Machine::TwoTransformerLimit
        ));
        Self {
            machine,
            branch: blank.branch(),
            blank,
            input: None,
            fidelity,
        }
    }
}

/// The two-qubit transformer gate.
///
/// Columns, in basis order `|00>, |01>, |10>, |11>`:
/// `T|00> = (|01> + |10>)/sqrt(2)`, `T|01> = |11>`,
/// `T|10> = (|01> - |10>)/sqrt(2)`, `T|11> = |00>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformer {
    gate: UnitaryOperator,
}

impl Transformer {
    pub fn new() -> Self {
        let h = FRAC_1_SQRT_2;
        let mat = CMatrix::from_rows(&[
            vec![re(0.0), re(0.0), re(0.0), re(1.0)],
            vec![re(h), re(0.0), re(h), re(0.0)],
            vec![re(h), re(0.0), re(-h), re(0.0)],
            vec![re(0.0), re(1.0), re(0.0), re(0.0)],
        ])
        .expect("rectangular row data");
        Self {
            gate: UnitaryOperator::new(vec![2, 2], mat).expect("gate is unitary"),
        }
    }

    /// Fault-injection fixture: the gate with `eps` added to one entry, which
    /// breaks unitarity. Only the verification suite should ever want this.
    pub fn perturbed(eps: f64) -> Self {
        let clean = Self::new();
        let mut mat = clean.gate.matrix().clone();
        mat.set(0, 0, mat.get(0, 0) + re(eps));
        Self {
            gate: UnitaryOperator::new_unchecked(vec![2, 2], mat),
        }
    }

    pub fn gate(&self) -> &UnitaryOperator {
        &self.gate
    }

    /// The gate applied twice, by literal matrix squaring.
    pub fn squared(&self) -> UnitaryOperator {
        self.gate.mul(&self.gate).expect("matching dims")
    }
}

impl Default for Transformer {
    fn default() -> Self {
        Self::new()
    }
}

/// Output of the P-B deleter on the symmetric input `|psi>|psi>|A>`, expanded
/// in the 12-dimensional product basis `(2, 2, 3)`:
///
/// `alpha^2 |0>|Sigma>|A0> + alpha beta (|01> + |10>)|A> + beta^2 |1>|Sigma>|A1>`.
///
/// The four transformation rules are isometric on this input, which the
/// returned state's normalization check confirms at run time.
pub fn pb_delete(input: &InputQubit, blank: &BlankState) -> PureState {
    let dims = [2usize, 2, 3];
    let a = input.alpha;
    let b = input.beta;
    let a2 = re(a * a);
    let ab = b * a;
    let b2 = b * b;
    let mut amps = vec![Complex64::ZERO; 12];
    amps[flat_index(&dims, &[0, 0, MACHINE_A0])] += a2 * blank.m1;
    amps[flat_index(&dims, &[0, 1, MACHINE_A0])] += a2 * blank.m2;
    amps[flat_index(&dims, &[0, 1, MACHINE_A])] += ab;
    amps[flat_index(&dims, &[1, 0, MACHINE_A])] += ab;
    amps[flat_index(&dims, &[1, 0, MACHINE_A1])] += b2 * blank.m1;
    amps[flat_index(&dims, &[1, 1, MACHINE_A1])] += b2 * blank.m2;
    PureState::new(dims.to_vec(), amps).expect("deleter is isometric on the symmetric input")
}

/// Reduced mode-2 operator of the P-B deleter followed by the transformer,
/// computed through the dense pipeline: delete, apply `T (x) I3`, project,
/// trace out mode 1 and the machine register.
pub fn pb_with_transformer_rho2(input: &InputQubit, blank: &BlankState) -> DensityOperator {
    let deleted = pb_delete(input, blank);
    let gate = Transformer::new()
        .gate()
        .tensor(&UnitaryOperator::identity(vec![3]));
    let transformed = gate.apply(&deleted).expect("unitary preserves the norm");
    transformed
        .outer()
        .partial_trace(&[1])
        .expect("subsystem 1 exists")
}

/// Closed form of the same reduced operator, valid for complex `m2` and
/// complex `beta`; only `alpha^2`, `|beta|^2`, `m1` and `m2` enter.
pub fn pb_rho2_closed_form(input: &InputQubit, blank: &BlankState) -> DensityOperator {
    let x = input.alpha * input.alpha;
    let y = input.beta.norm_sqr();
    let m1 = blank.m1;
    let m2 = blank.m2;
    let m2_sq = m2.norm_sqr();
    let r00 = x * x * m1 * m1 / 2.0 + x * y / 2.0 + y * y * m1 * m1 / 2.0 + y * y * m2_sq;
    let r01 = (m2.conj() * (x * x * m1) + m2 * (y * y * m1) - re(x * y)) * FRAC_1_SQRT_2;
    let r11 = x * x * m1 * m1 / 2.0 + 3.0 * x * y / 2.0 + y * y * m1 * m1 / 2.0 + x * x * m2_sq;
    let mat = CMatrix::from_rows(&[vec![re(r00), r01], vec![r01.conj(), re(r11)]])
        .expect("rectangular row data");
    DensityOperator::new(vec![2], mat).expect("closed form is a density operator")
}

/// Fidelity of deletion `F2 = <Sigma|rho2|Sigma>` for the deleter +
/// transformer machine, evaluated on the simulated reduced operator.
pub fn pb_with_transformer_fidelity(input: &InputQubit, blank: &BlankState) -> FidelityReport {
    let rho2 = pb_with_transformer_rho2(input, blank);
    let fidelity = rho2
        .fidelity_against(&blank.sigma())
        .expect("matching dims, Hermitian operator");
    FidelityReport::for_input(Machine::PbWithTransformer, *blank, *input, fidelity)
}

/// Closed-form polynomial for `F2`, scoped to real blank amplitudes.
pub fn pb_f2_closed_form_real(input: &InputQubit, blank: &BlankState) -> Result<f64> {
    if !blank.has_real_m2() {
        return Err(Error::ComplexBlank {
            context: "closed-form F2",
            imag: blank.m2.im,
        });
    }
    let m1 = blank.m1;
    let m2 = blank.m2.re;
    let x = input.alpha * input.alpha;
    let y = input.beta.norm_sqr();
    let xy = x * y;
    let cross = m1 * m2 / SQRT_2 - xy * (2.0 * m1 * m2 + 1.0) / SQRT_2;
    Ok(
        m1 * m1 * (m1 * m1 / 2.0 + xy * (1.0 - 2.0 * m1 * m1) / 2.0 + y * y * m2 * m2)
            + 2.0 * m1 * m2 * cross
            + m2 * m2 * (m1 * m1 / 2.0 + xy * (3.0 - 2.0 * m1 * m1) / 2.0 + x * x * m2 * m2),
    )
}

/// Reduced mode-2 operator of the bare P-B deleter (no transformer).
pub fn pb_alone_rho2(input: &InputQubit, blank: &BlankState) -> DensityOperator {
    pb_delete(input, blank)
        .outer()
        .partial_trace(&[1])
        .expect("subsystem 1 exists")
}

/// Fidelity of deletion for the bare P-B deleter. Evaluates to
/// `1 - alpha^2 |beta|^2` independently of the blank, but is computed through
/// the simulation rather than assumed.
pub fn pb_alone_fidelity(input: &InputQubit, blank: &BlankState) -> FidelityReport {
    let rho2 = pb_alone_rho2(input, blank);
    let fidelity = rho2
        .fidelity_against(&blank.sigma())
        .expect("matching dims, Hermitian operator");
    FidelityReport::for_input(Machine::PbAlone, *blank, *input, fidelity)
}

fn machine_fidelity(machine: Machine, blank: &BlankState, input: &InputQubit) -> Result<f64> {
    match machine {
        Machine::OneTransformerLimit => limits::f1_value(blank),
        Machine::TwoTransformerLimit => Ok(limits::f_two_transformer(blank)),
        Machine::PbWithTransformer => Ok(pb_with_transformer_fidelity(input, blank).fidelity),
        Machine::PbAlone => Ok(pb_alone_fidelity(input, blank).fidelity),
    }
}

/// Kahan-compensated running sum; the averages add ten thousand near-equal
/// terms and the headline comparisons sit at 1e-12.
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn new() -> Self {
        Self { sum: 0.0, carry: 0.0 }
    }

    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Mean fidelity of deletion over inputs with `alpha^2` uniform on `[0, 1]`,
/// by trapezoid quadrature on a uniform `alpha^2` grid of `samples` points.
///
/// For integrands that depend on the input only through `alpha^2` this equals
/// the Bloch-sphere average. The two limiting machines are input independent,
/// so their average is the constant itself.
pub fn average_fidelity(machine: Machine, blank: &BlankState, samples: usize) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "samples must be at least 1".into(),
        ));
    }
    match machine {
        Machine::OneTransformerLimit => return limits::f1_value(blank),
        Machine::TwoTransformerLimit => return Ok(limits::f_two_transformer(blank)),
        Machine::PbWithTransformer | Machine::PbAlone => {}
    }
    if samples == 1 {
        let input = InputQubit::from_alpha_sq(0.0)?;
        return machine_fidelity(machine, blank, &input);
    }
    let n = samples - 1;
    let h = 1.0 / n as f64;
    let mut acc = CompensatedSum::new();
    for i in 0..=n {
        let x = i as f64 * h;
        let input = InputQubit::from_alpha_sq(x.min(1.0))?;
        let f = machine_fidelity(machine, blank, &input)?;
        let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc.add(weight * f);
    }
    Ok(acc.sum * h)
}

/// Monte Carlo companion to [`average_fidelity`]: `samples` draws of
/// `alpha^2` uniform on `[0, 1]` from a seeded generator, so results are
/// reproducible. Quadrature is the authoritative route; this one is for
/// cross-checks.
pub fn average_fidelity_mc(
    machine: Machine,
    blank: &BlankState,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "samples must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = CompensatedSum::new();
    for _ in 0..samples {
        let x: f64 = rng.random();
        let input = InputQubit::from_alpha_sq(x)?;
        acc.add(machine_fidelity(machine, blank, &input)?);
    }
    Ok(acc.sum / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn sigma_basis_cases() {
        let b = BlankState::real(1.0, 0.0).unwrap();
        assert_eq!(b.sigma().amplitudes(), &[re(1.0), re(0.0)]);

        let b = BlankState::real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2).unwrap();
        let s = b.sigma();
        assert_abs_diff_eq!(s.amplitudes()[0].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, -FRAC_1_SQRT_2, epsilon = 1e-15);

        let b = BlankState::from_m1_sq(0.1, false).unwrap();
        assert_abs_diff_eq!(b.sigma().norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.m1(), 0.1f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn sigma_perp_basis_cases() {
        let b = BlankState::real(1.0, 0.0).unwrap();
        assert_eq!(b.sigma_perp().amplitudes(), &[re(0.0), re(1.0)]);

        let b = BlankState::real(0.0, 1.0).unwrap();
        assert_eq!(b.sigma_perp().amplitudes(), &[re(-1.0), re(0.0)]);

        let b = BlankState::real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2).unwrap();
        let s = b.sigma_perp();
        assert_abs_diff_eq!(s.amplitudes()[0].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn sigma_prime_basis_cases() {
        let b = BlankState::real(1.0, 0.0).unwrap();
        let s = b.sigma_prime();
        assert_abs_diff_eq!(s.amplitudes()[0].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, FRAC_1_SQRT_2, epsilon = 1e-15);

        let b = BlankState::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        let s = b.sigma_prime();
        assert!(s.amplitudes()[0].norm() < 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn blank_constructor_rejects_bad_parameters() {
        assert!(matches!(
            BlankState::real(1.0, 0.5),
            Err(Error::BlankNotNormalized { .. })
        ));
        assert!(matches!(
            BlankState::from_m1_sq(1.5, false),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn input_constructor_enforces_conventions() {
        assert!(matches!(
            InputQubit::real(-0.6, 0.8),
            Err(Error::NegativeAlpha(_))
        ));
        assert!(matches!(
            InputQubit::real(0.9, 0.9),
            Err(Error::InputNotNormalized { .. })
        ));
        let q = InputQubit::with_phase(0.6, 1.0).unwrap();
        assert_abs_diff_eq!(q.beta().norm(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn transformer_columns_match_definition() {
        let t = Transformer::new();
        let m = t.gate().matrix();
        let h = FRAC_1_SQRT_2;
        // T|00> = psi_plus
        assert_abs_diff_eq!(m.get(1, 0).re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get(2, 0).re, h, epsilon = 1e-15);
        // T|01> = |11>
        assert_eq!(m.get(3, 1), re(1.0));
        // T|10> = psi_minus
        assert_abs_diff_eq!(m.get(1, 2).re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(m.get(2, 2).re, -h, epsilon = 1e-15);
        // T|11> = |00>
        assert_eq!(m.get(0, 3), re(1.0));
    }

    #[test]
    fn transformer_is_unitary() {
        assert!(Transformer::new().gate().matrix().unitarity_deviation() <= 1e-15);
    }

    #[test]
    fn transformer_squared_on_00() {
        // T^2 |00> = T psi_plus = (|11> + psi_minus)/sqrt(2),
        // amplitudes (0, 1/2, -1/2, 1/sqrt(2)).
        let t = Transformer::new();
        let zz = PureState::basis(vec![2, 2], &[0, 0]).unwrap();
        let out = t.squared().apply(&zz).unwrap();
        let expect = [0.0, 0.5, -0.5, FRAC_1_SQRT_2];
        for (a, e) in out.amplitudes().iter().zip(expect) {
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-15);
            assert_eq!(a.im, 0.0);
        }
        // Same thing through two sequential applications.
        let twice = t.gate().apply(&t.gate().apply(&zz).unwrap()).unwrap();
        for (a, b) in out.amplitudes().iter().zip(twice.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn perturbed_transformer_breaks_unitarity() {
        let t = Transformer::perturbed(1e-3);
        assert!(t.gate().matrix().unitarity_deviation() > 1e-4);
    }

    #[test]
    fn pb_delete_pure_zero_input() {
        let blank = BlankState::real(0.6, 0.8).unwrap();
        let input = InputQubit::real(1.0, 0.0).unwrap();
        let out = pb_delete(&input, &blank);
        // |0>|Sigma>|A0>
        assert_abs_diff_eq!(out.amp_at(&[0, 0, MACHINE_A0]).re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp_at(&[0, 1, MACHINE_A0]).re, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pb_delete_pure_one_input() {
        let blank = BlankState::real(0.6, 0.8).unwrap();
        let input = InputQubit::real(0.0, 1.0).unwrap();
        let out = pb_delete(&input, &blank);
        // |1>|Sigma>|A1>
        assert_abs_diff_eq!(out.amp_at(&[1, 0, MACHINE_A1]).re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp_at(&[1, 1, MACHINE_A1]).re, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn pb_delete_balanced_input_trivial_blank() {
        let blank = BlankState::real(1.0, 0.0).unwrap();
        let input = InputQubit::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        let out = pb_delete(&input, &blank);
        assert_abs_diff_eq!(out.amp_at(&[0, 0, MACHINE_A0]).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp_at(&[0, 1, MACHINE_A]).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp_at(&[1, 0, MACHINE_A]).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amp_at(&[1, 0, MACHINE_A1]).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rho2_closed_form_at_alpha_one() {
        // diag(m1^2/2, m1^2/2 + |m2|^2), upper off-diagonal m1 m2* / sqrt(2).
        let blank = BlankState::new(0.6, Complex64::from_polar(0.8, 0.9)).unwrap();
        let input = InputQubit::real(1.0, 0.0).unwrap();
        let rho = pb_rho2_closed_form(&input, &blank);
        assert_abs_diff_eq!(rho.entry(0, 0).re, 0.18, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(1, 1).re, 0.18 + 0.64, epsilon = 1e-15);
        let expect = blank.m2().conj() * 0.6 * FRAC_1_SQRT_2;
        assert!((rho.entry(0, 1) - expect).norm() < 1e-15);
    }

    #[test]
    fn rho2_closed_form_at_alpha_zero() {
        let blank = BlankState::new(0.6, Complex64::from_polar(0.8, -0.4)).unwrap();
        let input = InputQubit::new(0.0, re(1.0)).unwrap();
        let rho = pb_rho2_closed_form(&input, &blank);
        assert_abs_diff_eq!(rho.entry(0, 0).re, 0.18 + 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(1, 1).re, 0.18, epsilon = 1e-15);
        let expect = blank.m2() * 0.6 * FRAC_1_SQRT_2;
        assert!((rho.entry(0, 1) - expect).norm() < 1e-15);
    }

    #[test]
    fn rho2_simulation_agrees_with_closed_form_at_reference_point() {
        // Hand-evaluated closed form at alpha = 0.6, beta = 0.8,
        // m1 = 0.6, m2 = 0.8: diagonal (0.4744, 0.5256), off-diagonal
        // 0.028416 / sqrt(2).
        let blank = BlankState::real(0.6, 0.8).unwrap();
        let input = InputQubit::real(0.6, 0.8).unwrap();
        let sim = pb_with_transformer_rho2(&input, &blank);
        let closed = pb_rho2_closed_form(&input, &blank);
        assert!(sim.matrix().max_abs_diff(closed.matrix()) <= 1e-12);
        assert_abs_diff_eq!(sim.entry(0, 0).re, 0.4744, epsilon = 1e-12);
        assert_abs_diff_eq!(sim.entry(1, 1).re, 0.5256, epsilon = 1e-12);
        assert_abs_diff_eq!(
            sim.entry(0, 1).re,
            0.028416 * FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
        assert!(sim.entry(0, 1).im.abs() < 1e-15);
    }

    #[test]
    fn pipeline_reduction_at_special_blank_alpha_one() {
        // At alpha = 1 the reduced operator is
        // [[m1^2/2, m1 m2/sqrt(2)], [m1 m2/sqrt(2), m1^2/2 + m2^2]].
        let blank = special_blank();
        let input = InputQubit::real(1.0, 0.0).unwrap();
        let rho = pb_with_transformer_rho2(&input, &blank);
        assert_abs_diff_eq!(rho.entry(0, 0).re, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entry(1, 1).re, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entry(0, 1).re, -0.5 * FRAC_1_SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn f2_at_special_blank_is_input_independent() {
        let blank = special_blank();
        for alpha in [0.0, 0.123, 0.5, FRAC_1_SQRT_2, 0.987, 1.0] {
            let input = InputQubit::from_alpha(alpha).unwrap();
            let report = pb_with_transformer_fidelity(&input, &blank);
            assert_abs_diff_eq!(report.fidelity, SPECIAL_BLANK_FIDELITY, epsilon = 1e-12);
            assert_eq!(report.machine, Machine::PbWithTransformer);
            assert_eq!(report.branch, Some(Branch::NegativeProduct));
            assert!(report.input.is_some());
        }
    }

    #[test]
    fn f2_trivial_blank_cases() {
        let input = InputQubit::real(1.0, 0.0).unwrap();
        let b10 = BlankState::real(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            pb_with_transformer_fidelity(&input, &b10).fidelity,
            0.5,
            epsilon = 1e-12
        );
        let b01 = BlankState::real(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            pb_with_transformer_fidelity(&input, &b01).fidelity,
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn f2_closed_form_matches_simulation_for_real_blanks() {
        for (m1_sq, neg, alpha) in [
            (0.3, false, 0.2),
            (0.3, true, 0.8),
            (0.7, false, 0.55),
            (0.5, true, 0.9),
        ] {
            let blank = BlankState::from_m1_sq(m1_sq, neg).unwrap();
            let input = InputQubit::from_alpha(alpha).unwrap();
            let sim = pb_with_transformer_fidelity(&input, &blank).fidelity;
            let closed = pb_f2_closed_form_real(&input, &blank).unwrap();
            assert_abs_diff_eq!(sim, closed, epsilon = 1e-12);
        }
    }

    #[test]
    fn f2_closed_form_rejects_complex_blank() {
        let blank = BlankState::new(0.6, Complex64::from_polar(0.8, 0.3)).unwrap();
        let input = InputQubit::from_alpha(0.5).unwrap();
        assert!(matches!(
            pb_f2_closed_form_real(&input, &blank),
            Err(Error::ComplexBlank { .. })
        ));
    }

    #[test]
    fn pb_alone_fidelity_identity() {
        let blank = BlankState::real(0.28, 0.96).unwrap();
        for alpha_sq in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let input = InputQubit::from_alpha_sq(alpha_sq).unwrap();
            let report = pb_alone_fidelity(&input, &blank);
            let expect = 1.0 - alpha_sq * (1.0 - alpha_sq);
            assert_abs_diff_eq!(report.fidelity, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn pb_alone_half_point() {
        let blank = special_blank();
        let input = InputQubit::from_alpha_sq(0.5).unwrap();
        assert_abs_diff_eq!(
            pb_alone_fidelity(&input, &blank).fidelity,
            0.75,
            epsilon = 1e-12
        );
    }

    #[test]
    fn average_pb_alone_reaches_five_sixths() {
        let blank = BlankState::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        let avg = average_fidelity(Machine::PbAlone, &blank, 10_001).unwrap();
        assert_abs_diff_eq!(avg, 5.0 / 6.0, epsilon = 1e-6);
    }

    #[test]
    fn average_pb_with_transformer_at_special_blank() {
        let avg = average_fidelity(Machine::PbWithTransformer, &special_blank(), 1001).unwrap();
        assert_abs_diff_eq!(avg, SPECIAL_BLANK_FIDELITY, epsilon = 1e-12);
    }

    #[test]
    fn average_endpoints_only() {
        let blank = special_blank();
        let avg = average_fidelity(Machine::PbAlone, &blank, 2).unwrap();
        assert_abs_diff_eq!(avg, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn average_rejects_zero_samples() {
        assert!(matches!(
            average_fidelity(Machine::PbAlone, &special_blank(), 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn monte_carlo_average_is_close_to_quadrature() {
        let blank = BlankState::real(0.6, -0.8).unwrap();
        let quad = average_fidelity(Machine::PbAlone, &blank, 10_001).unwrap();
        let mc = average_fidelity_mc(Machine::PbAlone, &blank, 20_000, 7).unwrap();
        assert!((quad - mc).abs() < 5e-3, "quad {quad} vs mc {mc}");
    }

    #[test]
    fn machine_ids_round_trip() {
        for m in Machine::ALL {
            assert_eq!(m.id().parse::<Machine>().unwrap(), m);
        }
        assert!("p-b".parse::<Machine>().is_err());
    }

    proptest! {
        #[test]
        fn pb_delete_output_is_normalized(
            alpha in 0.0f64..=1.0,
            phase in 0.0f64..std::f64::consts::TAU,
            m1 in 0.0f64..=1.0,
            blank_phase in 0.0f64..std::f64::consts::TAU,
        ) {
            let input = InputQubit::with_phase(alpha, phase).unwrap();
            let m2 = Complex64::from_polar((1.0 - m1 * m1).sqrt(), blank_phase);
            let blank = BlankState::new(m1, m2).unwrap();
            let out = pb_delete(&input, &blank);
            prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn closed_form_matches_simulation(
            alpha in 0.0f64..=1.0,
            phase in 0.0f64..std::f64::consts::TAU,
            m1 in 0.0f64..=1.0,
            blank_phase in 0.0f64..std::f64::consts::TAU,
        ) {
            let input = InputQubit::with_phase(alpha, phase).unwrap();
            let m2 = Complex64::from_polar((1.0 - m1 * m1).sqrt(), blank_phase);
            let blank = BlankState::new(m1, m2).unwrap();
            let sim = pb_with_transformer_rho2(&input, &blank);
            let closed = pb_rho2_closed_form(&input, &blank);
            prop_assert!(sim.matrix().max_abs_diff(closed.matrix()) <= 1e-12);
        }

        #[test]
        fn f2_ignores_beta_phase_at_special_blank(
            alpha in 0.0f64..=1.0,
            phase in 0.0f64..std::f64::consts::TAU,
        ) {
            let blank = special_blank();
            let input = InputQubit::with_phase(alpha, phase).unwrap();
            let f = pb_with_transformer_fidelity(&input, &blank).fidelity;
            prop_assert!((f - SPECIAL_BLANK_FIDELITY).abs() <= 1e-12);
        }

        #[test]
        fn pb_alone_identity_holds_for_complex_blanks(
            alpha in 0.0f64..=1.0,
            m1 in 0.0f64..=1.0,
            blank_phase in 0.0f64..std::f64::consts::TAU,
        ) {
            let input = InputQubit::from_alpha(alpha).unwrap();
            let m2 = Complex64::from_polar((1.0 - m1 * m1).sqrt(), blank_phase);
            let blank = BlankState::new(m1, m2).unwrap();
            let f = pb_alone_fidelity(&input, &blank).fidelity;
            let a2 = alpha * alpha;
            prop_assert!((f - (1.0 - a2 * (1.0 - a2))).abs() <= 1e-12);
        }
    }
}
