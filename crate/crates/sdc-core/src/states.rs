//! Pure states with explicit subsystem partitions, the state <->
//! encoding-matrix correspondence, and entanglement flatness.
//!
//! A bipartite state with amplitudes x_{i,j}/sqrt(d) corresponds to the
//! matrix X = sum_{i,j} x_{i,j} |i><j| acting on the first half of the
//! maximally entangled state: |psi> = (X tensor I)|Phi_d>. The reduced
//! state on the second factor obeys rho_B = (1/d) X^T X^*, and measuring
//! its largest eigenvalue gives the flatness parameter that controls
//! preparation success probabilities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace_matrix, CMatrix, CVector, DensityMatrix, TOL_NORM,
};
use crate::rng::RandomStream;

/// A normalized pure state together with its subsystem partition.
///
/// Construction validates the squared norm to within 1e-8 and then
/// rescales to exact unit norm, so downstream reduced densities satisfy
/// the strict trace tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PureStateWire", into = "PureStateWire")]
pub struct PureState {
    amplitudes: CVector,
    partition: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone)]
struct PureStateWire {
    partition: Vec<usize>,
    amplitudes: Vec<(f64, f64)>,
}

impl From<PureState> for PureStateWire {
    fn from(s: PureState) -> Self {
        Self {
            partition: s.partition.clone(),
            amplitudes: s.amplitudes.iter().map(|z| (z.re, z.im)).collect(),
        }
    }
}

impl TryFrom<PureStateWire> for PureState {
    type Error = Error;

    fn try_from(w: PureStateWire) -> Result<Self> {
        let amps = CVector::from_iterator(
            w.amplitudes.len(),
            w.amplitudes.iter().map(|&(re, im)| Complex64::new(re, im)),
        );
        PureState::new(amps, w.partition)
    }
}

impl PureState {
    pub fn new(amplitudes: CVector, partition: impl Into<Vec<usize>>) -> Result<Self> {
        let partition = partition.into();
        if partition.is_empty() || partition.iter().any(|&d| d == 0) {
            return Err(Error::InvalidDimension(
                "partition must be nonempty with positive dims".into(),
            ));
        }
        let prod: usize = partition.iter().product();
        if prod != amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "partition product {prod} != amplitude length {}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq = amplitudes.norm_squared();
        let dev = (norm_sq - 1.0).abs();
        if dev > TOL_NORM {
            return Err(Error::NotNormalized(dev));
        }
        let amplitudes = amplitudes / Complex64::new(norm_sq.sqrt(), 0.0);
        Ok(Self { amplitudes, partition })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Same amplitudes under a different partition of the same total
    /// dimension.
    pub fn repartition(&self, partition: impl Into<Vec<usize>>) -> Result<Self> {
        Self::new(self.amplitudes.clone(), partition)
    }

    /// The (d_first, d_second) dims of a bipartite state.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.partition.as_slice() {
            &[a, b] => Ok((a, b)),
            other => Err(Error::InvalidArgument(format!(
                "expected a bipartite state, partition has {} factors",
                other.len()
            ))),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::new(&self.amplitudes * self.amplitudes.adjoint())
            .expect("outer product of a unit vector is a density matrix")
    }

    /// Reduced density matrix on the kept subsystems, via the Gram matrix
    /// of the reshaped amplitudes (no intermediate full density matrix).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.partition.len();
        if keep.is_empty() || keep.len() >= n {
            return Err(Error::InvalidArgument(
                "keep must be a nonempty proper subset of subsystem indices".into(),
            ));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || *keep.last().unwrap() >= n {
            return Err(Error::InvalidArgument(
                "keep indices must be strictly increasing and in range".into(),
            ));
        }
        let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
        let dk: usize = keep.iter().map(|&s| self.partition[s]).product();
        let dt: usize = traced.iter().map(|&s| self.partition[s]).product();

        let mut m = CMatrix::zeros(dk, dt);
        for (flat, &amp) in self.amplitudes.iter().enumerate() {
            let mut rem = flat;
            let mut idx = vec![0usize; n];
            for s in (0..n).rev() {
                idx[s] = rem % self.partition[s];
                rem /= self.partition[s];
            }
            let mut k = 0;
            for &s in keep {
                k = k * self.partition[s] + idx[s];
            }
            let mut t = 0;
            for &s in &traced {
                t = t * self.partition[s] + idx[s];
            }
            m[(k, t)] = amp;
        }
        DensityMatrix::new(&m * m.adjoint())
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let amps = CVector::from_iterator(
            self.dim() * other.dim(),
            self.amplitudes
                .iter()
                .flat_map(|a| other.amplitudes.iter().map(move |b| a * b)),
        );
        let mut partition = self.partition.clone();
        partition.extend_from_slice(&other.partition);
        PureState::new(amps, partition).expect("tensor of unit states is unit")
    }

    /// Overlap fidelity with another state of the same total dimension.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        crate::linalg::fidelity(&self.amplitudes, &other.amplitudes)
    }
}

/// The matrix X with |psi> = (X tensor I)|Phi_d>; rows index the first
/// (output) factor, columns the second. Rectangular shapes are allowed
/// so the same type serves randomized preparation, where the output
/// factor is larger. Normalization of psi forces ||X||_F^2 = d_in.
#[derive(Debug, Clone)]
pub struct EncodingMatrix {
    matrix: CMatrix,
}

impl EncodingMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::InvalidDimension("encoding matrix must be nonempty".into()));
        }
        crate::linalg::ensure_finite(&matrix)?;
        let fro_sq: f64 = matrix.iter().map(|z| z.norm_sqr()).sum();
        let dev = (fro_sq - matrix.ncols() as f64).abs();
        if dev > TOL_NORM {
            return Err(Error::InvalidArgument(format!(
                "encoding matrix squared Frobenius norm {fro_sq} deviates from d_in {} by {dev:.3e}",
                matrix.ncols()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: CMatrix::identity(d, d) }
    }

    pub fn d_out(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn d_in(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// The maximally entangled state |Phi_d> = (1/sqrt d) sum_i |i>|i> with
/// partition (d, d).
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d == 0 {
        return Err(Error::InvalidDimension("max_entangled: d must be at least 1".into()));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = CVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = Complex64::new(amp, 0.0);
    }
    PureState::new(v, vec![d, d])
}

/// Encoding matrix of a bipartite state: x_{i,j} = sqrt(d) psi_{i,j}.
pub fn encoding_matrix(psi: &PureState) -> Result<EncodingMatrix> {
    let (d_out, d) = psi.bipartite_dims()?;
    let scale = (d as f64).sqrt();
    let m = CMatrix::from_fn(d_out, d, |i, j| {
        psi.amplitudes()[i * d + j] * Complex64::new(scale, 0.0)
    });
    EncodingMatrix::new(m)
}

/// The state (X tensor I)|Phi_d>, i.e. amplitudes x_{i,j}/sqrt(d) with
/// partition (d_out, d).
pub fn state_from_encoding(x: &EncodingMatrix, d: usize) -> Result<PureState> {
    if x.d_in() != d {
        return Err(Error::DimensionMismatch(format!(
            "encoding matrix has d_in {}, requested d {d}",
            x.d_in()
        )));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let d_out = x.d_out();
    let v = CVector::from_fn(d_out * d, |f, _| {
        x.matrix()[(f / d, f % d)] * Complex64::new(scale, 0.0)
    });
    PureState::new(v, vec![d_out, d])
}

/// Reduced state on the second factor via the identity
/// rho_B = (1/d) X^T X^*. Agrees with the direct partial trace to
/// within the structural tolerance; the two routes are cross-checked
/// in tests.
pub fn reduced_b(psi: &PureState) -> Result<DensityMatrix> {
    let x = encoding_matrix(psi)?;
    let d = x.d_in();
    let m = (x.matrix().transpose() * x.matrix().conjugate()) / Complex64::new(d as f64, 0.0);
    DensityMatrix::new(m)
}

/// Flatness of a bipartite state: eps = d * ||rho_B||_inf - 1.
///
/// Zero for a maximally entangled state, d - 1 for a product state.
/// Tiny negative rounding (above -1e-9) clamps to zero.
pub fn flatness_epsilon(psi: &PureState) -> Result<f64> {
    let (_, d) = psi.bipartite_dims()?;
    let rho_b = reduced_b(psi)?;
    let eps = d as f64 * rho_b.max_eigenvalue() - 1.0;
    if eps < 0.0 && eps >= -1e-9 {
        Ok(0.0)
    } else {
        Ok(eps)
    }
}

/// Globally Haar-random unit vector over the partition's total dimension
/// (normalized i.i.d. complex Gaussians, which is the same distribution
/// as a Haar isometry column).
pub fn random_state(partition: &[usize], rng: &mut RandomStream) -> Result<PureState> {
    if partition.is_empty() {
        return Err(Error::InvalidDimension("partition must be nonempty".into()));
    }
    let dim: usize = partition.iter().product();
    if dim == 0 {
        return Err(Error::InvalidDimension("partition dims must be positive".into()));
    }
    loop {
        let v = CVector::from_fn(dim, |_, _| rng.complex_gaussian());
        let n = v.norm();
        if n > 1e-6 {
            return PureState::new(v / Complex64::new(n, 0.0), partition.to_vec());
        }
    }
}

/// Tensor product of independent Haar-random unit vectors, one per factor.
pub fn random_product_state(partition: &[usize], rng: &mut RandomStream) -> Result<PureState> {
    if partition.is_empty() {
        return Err(Error::InvalidDimension("partition must be nonempty".into()));
    }
    let mut state: Option<PureState> = None;
    for &d in partition {
        let factor = random_state(&[d], rng)?;
        state = Some(match state {
            None => factor,
            Some(s) => s.tensor(&factor),
        });
    }
    Ok(state.unwrap())
}

/// Partial trace of the state's projector, for cross-checking the Gram
/// route in [`PureState::reduced`] against direct index summation.
pub fn reduced_via_projector(psi: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let proj = &psi.amplitudes * psi.amplitudes.adjoint();
    DensityMatrix::new(partial_trace_matrix(&proj, psi.partition(), keep)?)
}
