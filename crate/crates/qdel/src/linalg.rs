//! Exact complex linear algebra on small labeled tensor-product spaces.
//!
//! Everything is dense: the largest space any machine in this crate needs is
//! qubit x qubit x three-level register, dimension 12. Subsystem 0 is the
//! leftmost ket label and a label tuple maps to a flat index row-major, so
//! `|a b c>` on dims `(2, 2, 3)` sits at `a*6 + b*3 + c`.
//!
//! All values are immutable and [`Send`]/[`Sync`]; operations return new
//! values. Invariants (normalization, Hermiticity, unit trace, positivity,
//! unitarity) are checked when a value enters the system and are never
//! repaired silently.

use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance for algebraic identities: norms, traces, Hermiticity, unitarity.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for eigensolver outputs.
pub const EIGEN_TOL: f64 = 1e-10;

/// Flat row-major index of a basis label tuple.
///
/// Panics if `labels` and `dims` disagree in length or a label is out of
/// range; callers own the bounds.
pub fn flat_index(dims: &[usize], labels: &[usize]) -> usize {
    assert_eq!(dims.len(), labels.len(), "label tuple length mismatch");
    let mut idx = 0;
    for (d, l) in dims.iter().zip(labels) {
        assert!(l < d, "label {l} out of range for dimension {d}");
        idx = idx * d + l;
    }
    idx
}

/// Inverse of [`flat_index`].
fn unflatten(dims: &[usize], mut idx: usize) -> Vec<usize> {
    let mut labels = vec![0; dims.len()];
    for (slot, d) in labels.iter_mut().zip(dims).rev() {
        *slot = idx % d;
        idx /= d;
    }
    labels
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::BadDims(dims.to_vec()));
    }
    Ok(())
}

fn check_finite(data: &[Complex64]) -> Result<()> {
    for (index, z) in data.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFiniteEntry { index });
        }
    }
    Ok(())
}

/// Kronecker product of two complex vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::LengthMismatch {
                    got: row.len(),
                    expected: n_cols,
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .map(|(j, &vj)| self.get(i, j) * vj)
                    .sum()
            })
            .collect()
    }

    /// Kronecker product `self (x) rhs`.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// Max entrywise deviation of `U^dagger U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        self.dagger()
            .mul(self)
            .max_abs_diff(&CMatrix::identity(self.cols))
    }

    fn check_square(&self, dim: usize) -> Result<()> {
        if self.rows != dim || self.cols != dim {
            return Err(Error::LengthMismatch {
                got: self.rows * self.cols,
                expected: dim * dim,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

/// Normalized pure state over a labeled tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Validates dims, length, finiteness and unit norm (within
    /// [`ALGEBRAIC_TOL`]); a non-normalized input is an error, not a request
    /// for renormalization.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        check_dims(&dims)?;
        let expected: usize = dims.iter().product();
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                got: amps.len(),
                expected,
            });
        }
        check_finite(&amps)?;
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let deviation = (norm - 1.0).abs();
        if deviation > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized {
                deviation,
                tolerance: ALGEBRAIC_TOL,
            });
        }
        Ok(Self { dims, amps })
    }

    /// Computational basis state `|labels>`.
    pub fn basis(dims: Vec<usize>, labels: &[usize]) -> Result<Self> {
        check_dims(&dims)?;
        if labels.len() != dims.len() {
            return Err(Error::LengthMismatch {
                got: labels.len(),
                expected: dims.len(),
            });
        }
        for (i, (&l, &d)) in labels.iter().zip(&dims).enumerate() {
            if l >= d {
                return Err(Error::SubsystemOutOfRange {
                    index: i,
                    count: d,
                });
            }
        }
        let mut amps = vec![Complex64::ZERO; dims.iter().product()];
        amps[flat_index(&dims, labels)] = Complex64::ONE;
        Ok(Self { dims, amps })
    }

    /// Single-qubit state with amplitudes `(c0, c1)`.
    pub fn qubit(c0: Complex64, c1: Complex64) -> Result<Self> {
        Self::new(vec![2], vec![c0, c1])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude addressed by basis labels, e.g. `amp_at(&[1, 0, 2])`.
    pub fn amp_at(&self, labels: &[usize]) -> Complex64 {
        self.amps[flat_index(&self.dims, labels)]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tensor product; dims concatenate and norms multiply.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState {
            dims,
            amps: kron_vec(&self.amps, &other.amps),
        }
    }

    /// `<self|other>`; errors on mismatched subsystem dims.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                lhs: self.dims.clone(),
                rhs: other.dims.clone(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Rank-1 projector `|self><self|`.
    pub fn outer(&self) -> DensityOperator {
        let n = self.dim();
        let mut mat = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                mat.set(i, j, self.amps[i] * self.amps[j].conj());
            }
        }
        DensityOperator::trusted(self.dims.clone(), mat)
    }
}

/// Hermitian, unit-trace, positive-semidefinite operator on a labeled space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl DensityOperator {
    /// Full validation: finiteness, Hermiticity and trace within
    /// [`ALGEBRAIC_TOL`], smallest eigenvalue no lower than -[`EIGEN_TOL`].
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<Self> {
        check_dims(&dims)?;
        let dim: usize = dims.iter().product();
        mat.check_square(dim)?;
        check_finite(&mat.data)?;
        let herm = mat.hermiticity_deviation();
        if herm > ALGEBRAIC_TOL {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let tr = mat.trace();
        let tr_dev = (tr - Complex64::ONE).norm();
        if tr_dev > ALGEBRAIC_TOL {
            return Err(Error::TraceNotOne { deviation: tr_dev });
        }
        let min_eig = hermitian_eigen_min(&mat)?;
        if min_eig < -EIGEN_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { dims, mat })
    }

    /// Internal constructor for results of positivity-preserving operations
    /// (projectors of normalized states, partial traces, tensor products).
    /// Cheap invariants are still asserted in debug builds.
    pub(crate) fn trusted(dims: Vec<usize>, mat: CMatrix) -> Self {
        debug_assert!(mat.hermiticity_deviation() <= 1e-9);
        debug_assert!((mat.trace() - Complex64::ONE).norm() <= 1e-9);
        Self { dims, mat }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat.get(i, j)
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Tensor product; trace and positivity carry over.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityOperator::trusted(dims, self.mat.kron(&other.mat))
    }

    /// Reduced operator on the subsystems in `keep` (original order), the
    /// complement summed out.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let n_subsystems = self.dims.len();
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&k| k >= n_subsystems) {
            return Err(Error::SubsystemOutOfRange {
                index: bad,
                count: n_subsystems,
            });
        }
        let traced: Vec<usize> = (0..n_subsystems).filter(|i| !keep.contains(i)).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&i| self.dims[i]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| self.dims[i]).collect();
        let keep_dim: usize = keep_dims.iter().product();
        let traced_dim: usize = traced_dims.iter().product();

        // Reassembles a full label tuple from kept and traced label tuples.
        let assemble = |kept: &[usize], summed: &[usize]| -> usize {
            let mut labels = vec![0; n_subsystems];
            for (pos, &sub) in keep.iter().enumerate() {
                labels[sub] = kept[pos];
            }
            for (pos, &sub) in traced.iter().enumerate() {
                labels[sub] = summed[pos];
            }
            flat_index(&self.dims, &labels)
        };

        let mut out = CMatrix::zeros(keep_dim, keep_dim);
        for i in 0..keep_dim {
            let row_labels = unflatten(&keep_dims, i);
            for j in 0..keep_dim {
                let col_labels = unflatten(&keep_dims, j);
                let mut acc = Complex64::ZERO;
                for m in 0..traced_dim {
                    let sum_labels = unflatten(&traced_dims, m);
                    acc += self.mat.get(
                        assemble(&row_labels, &sum_labels),
                        assemble(&col_labels, &sum_labels),
                    );
                }
                out.set(i, j, acc);
            }
        }
        Ok(DensityOperator::trusted(keep_dims, out))
    }

    /// Overlap `<phi|rho|phi>`, a real number in `[0, 1]`.
    ///
    /// The imaginary residue of the quadratic form is checked against
    /// [`ALGEBRAIC_TOL`] and then discarded; a residue above tolerance means
    /// something upstream produced a non-Hermitian operator.
    pub fn fidelity_against(&self, phi: &PureState) -> Result<f64> {
        if self.dims != phi.dims {
            return Err(Error::DimensionMismatch {
                lhs: self.dims.clone(),
                rhs: phi.dims.clone(),
            });
        }
        let n = self.dim();
        let mut form = Complex64::ZERO;
        for i in 0..n {
            for j in 0..n {
                form += phi.amps[i].conj() * self.mat.get(i, j) * phi.amps[j];
            }
        }
        let residue = form.im.abs();
        if residue > ALGEBRAIC_TOL {
            return Err(Error::ImaginaryResidue {
                residue,
                tolerance: ALGEBRAIC_TOL,
            });
        }
        Ok(form.re)
    }

    /// Smallest eigenvalue; the operator is Hermitian by construction.
    pub fn eigen_min(&self) -> f64 {
        hermitian_eigen_min(&self.mat).expect("density operator is Hermitian by invariant")
    }
}

/// Unitary operator on a labeled tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl UnitaryOperator {
    /// Validates `U^dagger U = I` entrywise within [`ALGEBRAIC_TOL`].
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<Self> {
        check_dims(&dims)?;
        let dim: usize = dims.iter().product();
        mat.check_square(dim)?;
        check_finite(&mat.data)?;
        let dev = mat.unitarity_deviation();
        if dev > ALGEBRAIC_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self { dims, mat })
    }

    /// Skips the unitarity check. Intended for fault-injection fixtures that
    /// feed deliberately broken gates to the verification suite.
    pub fn new_unchecked(dims: Vec<usize>, mat: CMatrix) -> Self {
        Self { dims, mat }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let dim = dims.iter().product();
        Self {
            dims,
            mat: CMatrix::identity(dim),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn tensor(&self, other: &UnitaryOperator) -> UnitaryOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        UnitaryOperator {
            dims,
            mat: self.mat.kron(&other.mat),
        }
    }

    /// Matrix product `self * other` on matching dims.
    pub fn mul(&self, other: &UnitaryOperator) -> Result<UnitaryOperator> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                lhs: self.dims.clone(),
                rhs: other.dims.clone(),
            });
        }
        Ok(UnitaryOperator {
            dims: self.dims.clone(),
            mat: self.mat.mul(&other.mat),
        })
    }

    /// Applies the operator to a state. The result goes through full
    /// [`PureState`] validation, so applying a non-unitary matrix built via
    /// [`UnitaryOperator::new_unchecked`] fails loudly.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if self.dims != psi.dims {
            return Err(Error::DimensionMismatch {
                lhs: self.dims.clone(),
                rhs: psi.dims.clone(),
            });
        }
        PureState::new(self.dims.clone(), self.mat.mul_vec(&psi.amps))
    }
}

/// All eigenvalues of a Hermitian matrix, ascending.
///
/// The matrix is embedded as the real symmetric block form
/// `[[Re, -Im], [Im, Re]]`, which carries each eigenvalue twice, and
/// diagonalized by cyclic Jacobi rotations. For the dimensions used here
/// (at most 12) this is exact to near machine precision.
pub fn hermitian_eigenvalues(mat: &CMatrix) -> Result<Vec<f64>> {
    if mat.n_rows() != mat.n_cols() {
        return Err(Error::LengthMismatch {
            got: mat.n_cols(),
            expected: mat.n_rows(),
        });
    }
    let herm = mat.hermiticity_deviation();
    if herm > ALGEBRAIC_TOL {
        return Err(Error::NotHermitian { deviation: herm });
    }
    let n = mat.n_rows();
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = mat.get(i, j);
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    jacobi_diagonalize(&mut a, m);
    let mut eigs: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    // Every eigenvalue appears twice in the embedding; take one of each pair.
    Ok(eigs.into_iter().step_by(2).collect())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_eigen_min(mat: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(mat)?[0])
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix stored row-major.
fn jacobi_diagonalize(a: &mut [f64], n: usize) {
    let scale = (0..n)
        .map(|i| a[i * n + i].abs())
        .fold(1.0_f64, f64::max);
    let stop = 1e-15 * scale;
    for _sweep in 0..64 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= stop * 1e-2 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Two-sided Givens update: rows p,q then columns p,q.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
            }
        }
    }
}
