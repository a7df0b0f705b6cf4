//! Dense complex linear algebra: Haar sampling, partial traces, norms,
//! fidelity, and the Hermitian decompositions behind them.
//!
//! Subsystem convention, used everywhere in this crate: index 0 is the
//! leftmost (most significant) tensor factor, and multi-indices flatten
//! row-major, so a bipartite label (i, j) maps to flat index `i * d_b + j`.
//! All operations here are pure functions of their inputs and are safe to
//! call from many threads at once.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::RandomStream;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Structural tolerance: unitarity, Hermiticity, trace preservation,
/// and exact algebraic identities are held to this.
pub const TOL_STRUCT: f64 = 1e-10;

/// Normalization tolerance for state vectors and Frobenius constraints.
pub const TOL_NORM: f64 = 1e-8;

/// Eigenvalues of nominally-PSD operators may dip this far below zero
/// before being treated as an error rather than rounding noise.
pub const PSD_CLAMP: f64 = 1e-10;

/// Largest entry modulus, `max_ij |m_ij|`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Deviation of `m` from being an isometry, `max |m†m - I|`.
pub fn isometry_defect(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    max_abs(&(gram - CMatrix::identity(m.ncols(), m.ncols())))
}

/// Haar-distributed `dim x dim` unitary.
///
/// Samples a matrix of i.i.d. standard complex Gaussians, takes its QR
/// decomposition, and multiplies each column of Q by the phase of the
/// matching diagonal entry of R. The phase correction makes the
/// distribution exactly Haar rather than merely QR-of-Gaussian.
pub fn haar_unitary(dim: usize, rng: &mut RandomStream) -> Result<CMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "haar_unitary: dim must be at least 1".into(),
        ));
    }
    let mut z = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            z[(i, j)] = rng.complex_gaussian();
        }
    }
    let qr = z.qr();
    let r = qr.r();
    let mut u = qr.q();
    for k in 0..dim {
        let rkk = r[(k, k)];
        let mag = rkk.norm();
        let phase = if mag == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            rkk / mag
        };
        for i in 0..dim {
            u[(i, k)] *= phase;
        }
    }
    Ok(u)
}

/// Haar-distributed isometry from `in_dim` into `out_dim`: the first
/// `in_dim` columns of a Haar unitary on the larger space.
pub fn haar_isometry(in_dim: usize, out_dim: usize, rng: &mut RandomStream) -> Result<CMatrix> {
    if in_dim == 0 || out_dim == 0 {
        return Err(Error::InvalidDimension(
            "haar_isometry: dimensions must be at least 1".into(),
        ));
    }
    if out_dim < in_dim {
        return Err(Error::InvalidDimension(format!(
            "haar_isometry: out_dim {out_dim} < in_dim {in_dim}"
        )));
    }
    let u = haar_unitary(out_dim, rng)?;
    Ok(u.columns(0, in_dim).into_owned())
}

fn check_subsystems(total: usize, dims: &[usize], keep: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(Error::InvalidDimension(
            "subsystem dims must be nonempty and positive".into(),
        ));
    }
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims multiply to {prod}, operator dimension is {total}"
        )));
    }
    if keep.is_empty() || keep.len() >= dims.len() {
        return Err(Error::InvalidArgument(
            "keep must be a nonempty proper subset of subsystem indices".into(),
        ));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || *keep.last().unwrap() >= dims.len() {
        return Err(Error::InvalidArgument(
            "keep indices must be strictly increasing and in range".into(),
        ));
    }
    Ok(())
}

/// Flat offsets of every multi-index over the given subsystems, with
/// `strides` the global row-major strides.
fn subset_offsets(dims: &[usize], subset: &[usize], strides: &[usize]) -> Vec<usize> {
    let size: usize = subset.iter().map(|&s| dims[s]).product();
    let mut offsets = vec![0usize; size];
    for (flat, off) in offsets.iter_mut().enumerate() {
        let mut rem = flat;
        let mut acc = 0;
        for &s in subset.iter().rev() {
            acc += (rem % dims[s]) * strides[s];
            rem /= dims[s];
        }
        *off = acc;
    }
    offsets
}

/// Partial trace of a square matrix over the subsystems *not* in `keep`,
/// by direct index summation. No density-matrix validation is applied;
/// see [`partial_trace`] for the checked variant.
pub fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(
            "partial trace requires a square matrix".into(),
        ));
    }
    check_subsystems(m.nrows(), dims, keep)?;
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();

    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let kept_offsets = subset_offsets(dims, keep, &strides);
    let traced_offsets = subset_offsets(dims, &traced, &strides);

    let dk = kept_offsets.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &to in &traced_offsets {
                acc += m[(ro + to, co + to)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Partial trace of a density matrix; the result is validated as a
/// density matrix again (trace preserved, positivity preserved).
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(rho.matrix(), dims, keep)?;
    DensityMatrix::new(reduced)
}

/// Eigenvalues of a Hermitian matrix, descending. The input is assumed
/// Hermitian; callers own that invariant.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals
}

/// Eigenvalues (descending) and matching eigenvector columns of a
/// Hermitian matrix.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = h.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(eig.eigenvectors.nrows(), n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Largest singular value, computed as the square root of the top
/// eigenvalue of the Gram matrix (the smaller of m†m and mm†).
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    ensure_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::InvalidDimension("operator_norm of empty matrix".into()));
    }
    let gram = if m.nrows() <= m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    let top = hermitian_eigenvalues(&gram)[0].max(0.0);
    Ok(top.sqrt())
}

/// Principal square root of a PSD Hermitian matrix. Eigenvalues in
/// `[-PSD_CLAMP, 0)` clamp to zero; anything lower is an error.
pub fn sqrt_psd(h: &CMatrix) -> Result<CMatrix> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch("sqrt_psd requires a square matrix".into()));
    }
    let (vals, vecs) = hermitian_eigen(h);
    if let Some(&worst) = vals.last() {
        if worst < -PSD_CLAMP {
            return Err(Error::NotDensityMatrix(format!(
                "operator is not PSD: eigenvalue {worst:.3e}"
            )));
        }
    }
    let sqrt_diag = CMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    Ok(&vecs * sqrt_diag * vecs.adjoint())
}

/// Overlap fidelity |<psi|phi>|^2 between unit vectors.
pub fn fidelity(psi: &CVector, phi: &CVector) -> Result<f64> {
    if psi.len() != phi.len() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between vectors of length {} and {}",
            psi.len(),
            phi.len()
        )));
    }
    for v in [psi, phi] {
        let dev = (v.norm_squared() - 1.0).abs();
        if dev > TOL_NORM {
            return Err(Error::NotNormalized(dev));
        }
    }
    Ok(psi.dotc(phi).norm_sqr())
}

/// Apply `a` to the first factor of a bipartite vector: (a ⊗ I)|v>.
/// `a` may be rectangular; the output has first-factor dimension
/// `a.nrows()`.
pub fn apply_to_first(a: &CMatrix, v: &CVector, d_first: usize, d_second: usize) -> Result<CVector> {
    if d_first * d_second != v.len() || a.ncols() != d_first {
        return Err(Error::DimensionMismatch(format!(
            "apply_to_first: {}x{} operator on ({d_first}, {d_second}) vector of length {}",
            a.nrows(),
            a.ncols(),
            v.len()
        )));
    }
    let m = CMatrix::from_fn(d_first, d_second, |i, j| v[i * d_second + j]);
    let out = a * m;
    Ok(CVector::from_fn(a.nrows() * d_second, |f, _| {
        out[(f / d_second, f % d_second)]
    }))
}

/// Apply `b` to the second factor of a bipartite vector: (I ⊗ b)|v>.
pub fn apply_to_second(b: &CMatrix, v: &CVector, d_first: usize, d_second: usize) -> Result<CVector> {
    if d_first * d_second != v.len() || b.ncols() != d_second {
        return Err(Error::DimensionMismatch(format!(
            "apply_to_second: {}x{} operator on ({d_first}, {d_second}) vector of length {}",
            b.nrows(),
            b.ncols(),
            v.len()
        )));
    }
    let m = CMatrix::from_fn(d_first, d_second, |i, j| v[i * d_second + j]);
    let out = m * b.transpose();
    let d_out = b.nrows();
    Ok(CVector::from_fn(d_first * d_out, |f, _| {
        out[(f / d_out, f % d_out)]
    }))
}

/// A validated density matrix: Hermitian, unit trace, PSD, all within
/// the structural tolerances.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::NotDensityMatrix(format!(
                "shape {}x{} is not square and nonempty",
                mat.nrows(),
                mat.ncols()
            )));
        }
        ensure_finite(&mat)?;
        let herm_dev = max_abs(&(&mat - mat.adjoint()));
        if herm_dev > TOL_STRUCT {
            return Err(Error::NotDensityMatrix(format!(
                "Hermiticity deviation {herm_dev:.3e}"
            )));
        }
        let trace = mat.trace();
        let trace_dev = (trace - Complex64::new(1.0, 0.0)).norm();
        if trace_dev > TOL_STRUCT {
            return Err(Error::NotDensityMatrix(format!("trace deviation {trace_dev:.3e}")));
        }
        let min_eig = hermitian_eigenvalues(&mat).last().copied().unwrap();
        if min_eig < -PSD_CLAMP {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    /// Largest eigenvalue; for a density matrix this is the operator norm.
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Trace distance (1/2)||rho - sigma||_1.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "trace distance between dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let diff = &self.mat - &other.mat;
        Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|v| v.abs()).sum::<f64>())
    }
}
