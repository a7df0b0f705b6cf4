//! Concentration bounds and the Monte Carlo experiments that probe them
//! at desk scale.
//!
//! The closed-form side: the single-state Gaussian tail bound, the
//! operator-norm tail bound mu obtained from it by a union bound over a
//! delta-net, the binary divergence controlling ensemble selection, the
//! net-size bound, and the ensemble-size thresholds for both the pure
//! and the entangled randomization lemmas. Several of these overflow
//! f64 at moderate parameters, so every bound carries a log2 twin.
//!
//! The net itself is never constructed (its size is astronomical even
//! for one qubit); it enters only through the size formula and through
//! the overlap inequality checked by [`fact1_check`].
//!
//! The experimental side measures, by seeded Monte Carlo, how often a
//! randomized state fails to be flat, and verifies the convexity step
//! of the entangled-sharing argument pointwise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::linalg::{haar_isometry, hermitian_eigen, max_abs, CMatrix};
use crate::protocols::IsometryEnsemble;
use crate::rng::RandomStream;
use crate::states::PureState;

/// Total output dimension above which experiments refuse to run; this
/// library targets desk-scale dense simulation.
pub const MAX_EXPERIMENT_DIM: usize = 4096;

/// Parameters of the concentration bounds: output dimensions and the
/// flatness budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub d_a: u64,
    pub d_b: u64,
    pub epsilon: f64,
}

impl BoundParams {
    pub fn new(d_a: u64, d_b: u64, epsilon: f64) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidDimension("bound dims must be at least 1".into()));
        }
        check_epsilon(epsilon)?;
        Ok(Self { d_a, d_b, epsilon })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    Ok(())
}

/// Single-state tail bound exp(-d_a eps^2 / (14 ln 2)), evaluated at
/// arbitrary (possibly fractional) d_a.
pub fn gaussian_tail_bound_at(d_a: f64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(d_a >= 0.0) {
        return Err(Error::InvalidArgument(format!("d_a must be >= 0, got {d_a}")));
    }
    Ok((-d_a * epsilon * epsilon / (14.0 * LN_2)).exp())
}

/// Single-state tail bound at integer dimensions.
pub fn gaussian_tail_bound(p: &BoundParams) -> Result<f64> {
    gaussian_tail_bound_at(p.d_a as f64, p.epsilon)
}

/// Operator-norm tail bound
/// mu = (10 d_b / eps)^(2 d_b) * exp(-d_a eps^2 / (14 ln 2)),
/// at arbitrary real dimensions. Overflows to infinity for large d_b;
/// use [`mu_bound_log2_at`] there. A value >= 1 is vacuous.
pub fn mu_bound_at(d_a: f64, d_b: f64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(d_a >= 0.0 && d_b >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need d_a >= 0 and d_b >= 1, got ({d_a}, {d_b})"
        )));
    }
    let prefactor = (10.0 * d_b / epsilon).powf(2.0 * d_b);
    Ok(prefactor * gaussian_tail_bound_at(d_a, epsilon)?)
}

pub fn mu_bound(p: &BoundParams) -> Result<f64> {
    mu_bound_at(p.d_a as f64, p.d_b as f64, p.epsilon)
}

/// log2 of the mu bound, safe from overflow.
pub fn mu_bound_log2_at(d_a: f64, d_b: f64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(d_a >= 0.0 && d_b >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need d_a >= 0 and d_b >= 1, got ({d_a}, {d_b})"
        )));
    }
    Ok(2.0 * d_b * (10.0 * d_b / epsilon).log2() - d_a * epsilon * epsilon / (14.0 * LN_2 * LN_2))
}

pub fn mu_bound_log2(p: &BoundParams) -> Result<f64> {
    mu_bound_log2_at(p.d_a as f64, p.d_b as f64, p.epsilon)
}

/// Binary divergence D(eps || mu) in bits. Satisfies
/// D >= -1 - eps log2(mu) for all arguments in (0, 1).
pub fn divergence(eps: f64, mu: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0 && mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "divergence needs open-interval arguments, got ({eps}, {mu})"
        )));
    }
    Ok(eps * (eps / mu).log2() + (1.0 - eps) * ((1.0 - eps) / (1.0 - mu)).log2())
}

/// Size bound (5/delta)^(2 dim) for a delta-net over pure states of a
/// `dim`-dimensional space. Overflows readily; see
/// [`net_size_bound_log2`].
pub fn net_size_bound(dim: u64, delta: f64) -> Result<f64> {
    if dim == 0 {
        return Err(Error::InvalidDimension("net dimension must be at least 1".into()));
    }
    if delta <= 0.0 {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    Ok((5.0 / delta).powf(2.0 * dim as f64))
}

pub fn net_size_bound_log2(dim: u64, delta: f64) -> Result<f64> {
    if dim == 0 {
        return Err(Error::InvalidDimension("net dimension must be at least 1".into()));
    }
    if delta <= 0.0 {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    Ok(2.0 * dim as f64 * (5.0 / delta).log2())
}

/// The ensemble-size threshold
/// n > 2 d_a d_b log2(10 d_b/eps) / (eps^3 d_a/(14 ln 2) - 2 eps d_b log2(10 d_b/eps) - 1).
/// A non-positive denominator means no ensemble size is certified at
/// these dimensions; that is reported as data, not as an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NpureThreshold {
    pub numerator: f64,
    pub denominator: f64,
}

impl NpureThreshold {
    pub fn is_feasible(&self) -> bool {
        self.denominator > 0.0
    }

    pub fn value(&self) -> Option<f64> {
        self.is_feasible().then(|| self.numerator / self.denominator)
    }
}

pub fn lemma1_n_threshold(p: &BoundParams) -> Result<NpureThreshold> {
    let d_a = p.d_a as f64;
    let d_b = p.d_b as f64;
    let eps = p.epsilon;
    check_epsilon(eps)?;
    let log_term = (10.0 * d_b / eps).log2();
    Ok(NpureThreshold {
        numerator: 2.0 * d_a * d_b * log_term,
        denominator: eps.powi(3) * d_a / (14.0 * LN_2) - 2.0 * eps * d_b * log_term - 1.0,
    })
}

/// The randomizing-output dimension (112 ln 2 / eps^2) d log2 d used by
/// the pure-state randomization lemma, as a real number.
pub fn lemma1_dim_a(d: u64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if d < 2 {
        return Err(Error::InvalidDimension("need d >= 2 for a nonzero log factor".into()));
    }
    Ok(112.0 * LN_2 / (epsilon * epsilon) * d as f64 * (d as f64).log2())
}

/// The certified-sufficient ensemble size (120 ln 2 / eps^3) d log2 d.
/// Requires the lemma hypothesis d >= 10/eps.
pub fn lemma1_simplified_n(d: u64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if (d as f64) < 10.0 / epsilon {
        return Err(Error::Infeasible(format!(
            "hypothesis d >= 10/epsilon violated: d = {d}, 10/epsilon = {}",
            10.0 / epsilon
        )));
    }
    Ok(120.0 * LN_2 / epsilon.powi(3) * d as f64 * (d as f64).log2())
}

/// Everything the pure-state randomization lemma pins down at (d, eps):
/// the randomizing dimension, the certified ensemble size, and the
/// threshold it must dominate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lemma1Summary {
    pub d: u64,
    pub epsilon: f64,
    /// Real-valued randomizing dimension.
    pub dim_a: f64,
    /// Integer dimension actually used for the threshold evaluation.
    pub d_a: u64,
    pub simplified_n: f64,
    pub threshold: NpureThreshold,
}

pub fn lemma1_summary(d: u64, epsilon: f64) -> Result<Lemma1Summary> {
    let dim_a = lemma1_dim_a(d, epsilon)?;
    let simplified_n = lemma1_simplified_n(d, epsilon)?;
    let d_a = dim_a.ceil() as u64;
    let threshold = lemma1_n_threshold(&BoundParams::new(d_a, d, epsilon)?)?;
    Ok(Lemma1Summary { d, epsilon, dim_a, d_a, simplified_n, threshold })
}

/// Ensemble size for randomizing entangled targets:
/// n = (13440 (ln 2)^2 / eps^5) d^3 (log2 d)^2, with its log2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Count {
    pub n: f64,
    pub log2_n: f64,
}

pub fn lemma2_n_value(d: u64, epsilon: f64) -> Result<Lemma2Count> {
    check_epsilon(epsilon)?;
    if (d as f64) < 10.0 / epsilon {
        return Err(Error::Infeasible(format!(
            "hypothesis d >= 10/epsilon violated: d = {d}, 10/epsilon = {}",
            10.0 / epsilon
        )));
    }
    let log_d = (d as f64).log2();
    let coeff = 13440.0 * LN_2 * LN_2;
    let n = coeff / epsilon.powi(5) * (d as f64).powi(3) * log_d * log_d;
    let log2_n = coeff.log2() + 5.0 * (1.0 / epsilon).log2() + 3.0 * (d as f64).log2()
        + 2.0 * log_d.log2();
    Ok(Lemma2Count { n, log2_n })
}

/// Flatness cutoff for the indicator variables: the lemma statements use
/// (1 + eps)/d, the proofs work at (1 + 3 eps/4)/d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlatnessThreshold {
    LemmaStatement,
    ProofStep,
}

impl FlatnessThreshold {
    pub fn value(self, d_b: usize, epsilon: f64) -> f64 {
        match self {
            FlatnessThreshold::LemmaStatement => (1.0 + epsilon) / d_b as f64,
            FlatnessThreshold::ProofStep => (1.0 + 0.75 * epsilon) / d_b as f64,
        }
    }
}

mod serde_maybe_inf {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_unit()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Result of a tail experiment: the empirical exceedance frequency next
/// to the analytic bound at the same parameters. When the bound is >= 1
/// it certifies nothing; the `vacuous` flag records that, and only the
/// trend across a dimension sweep is meaningful.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub params: BoundParams,
    pub trials: u64,
    /// Operator-norm cutoff the tail was measured against.
    pub threshold: f64,
    pub empirical_tail: f64,
    /// 3-sigma binomial half-width at the empirical frequency.
    pub half_width: f64,
    /// Linear-space bound; infinity serializes as null (the log2 twin is
    /// always finite).
    #[serde(with = "serde_maybe_inf")]
    pub analytic_bound: f64,
    pub analytic_bound_log2: f64,
    pub vacuous: bool,
    pub per_state_flat_fraction: Vec<f64>,
}

/// Estimate Pr(||Tr_A U psi U†||_inf >= (1 + 3 eps/4)/d_b) over Haar
/// isometries U applied to the fixed input `psi`.
///
/// Trial t draws from `base.substream(t)`.
pub fn flatness_tail_experiment(
    p: &BoundParams,
    psi: &PureState,
    trials: u64,
    base: &RandomStream,
) -> Result<ConcentrationReport> {
    if trials < 100 {
        return Err(Error::InvalidArgument(format!(
            "at least 100 trials required, got {trials}"
        )));
    }
    let out_dim = (p.d_a as usize)
        .checked_mul(p.d_b as usize)
        .filter(|&dim| dim <= MAX_EXPERIMENT_DIM)
        .ok_or_else(|| {
            Error::InvalidDimension(format!(
                "output dimension {} x {} exceeds the desk-scale cap {MAX_EXPERIMENT_DIM}",
                p.d_a, p.d_b
            ))
        })?;
    if out_dim < psi.dim() {
        return Err(Error::InvalidDimension(format!(
            "output dimension {out_dim} cannot hold the {}-dimensional input",
            psi.dim()
        )));
    }
    let d_a = p.d_a as usize;
    let d_b = p.d_b as usize;
    let threshold = FlatnessThreshold::ProofStep.value(d_b, p.epsilon);

    let exceed: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = base.substream(t);
            let v = haar_isometry(psi.dim(), out_dim, &mut rng)
                .expect("dims validated above");
            let mapped = PureState::new(v * psi.amplitudes(), vec![d_a, d_b])
                .expect("isometry preserves norm");
            let norm_inf = mapped.reduced(&[1]).expect("bipartite").max_eigenvalue();
            u64::from(norm_inf >= threshold)
        })
        .sum();

    let empirical_tail = exceed as f64 / trials as f64;
    let half_width = 3.0 * (empirical_tail * (1.0 - empirical_tail) / trials as f64).sqrt();
    let analytic_bound = mu_bound(p)?;
    Ok(ConcentrationReport {
        params: *p,
        trials,
        threshold,
        empirical_tail,
        half_width,
        analytic_bound,
        analytic_bound_log2: mu_bound_log2(p)?,
        vacuous: !(analytic_bound < 1.0),
        per_state_flat_fraction: vec![1.0 - empirical_tail],
    })
}

/// Fraction of ensemble members under which `psi` randomizes to an
/// eps-flat state, at an explicit threshold choice.
pub fn ensemble_flat_fraction_at(
    ensemble: &IsometryEnsemble,
    psi: &PureState,
    epsilon: f64,
    threshold: FlatnessThreshold,
) -> Result<f64> {
    check_epsilon(epsilon)?;
    if ensemble.in_dim() != psi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "ensemble input dimension {} != state dimension {}",
            ensemble.in_dim(),
            psi.dim()
        )));
    }
    let (d_a, d_b) = ensemble.out_partition();
    let cutoff = threshold.value(d_b, epsilon);
    let flat = ensemble
        .members()
        .iter()
        .filter(|v| {
            let mapped = PureState::new(*v * psi.amplitudes(), vec![d_a, d_b])
                .expect("isometry preserves norm");
            let norm_inf = mapped.reduced(&[1]).expect("bipartite").max_eigenvalue();
            norm_inf < cutoff
        })
        .count();
    Ok(flat as f64 / ensemble.len() as f64)
}

/// Fraction of members yielding an eps-flat state, at the
/// lemma-statement threshold (1 + eps)/d.
pub fn ensemble_flat_fraction(
    ensemble: &IsometryEnsemble,
    psi: &PureState,
    epsilon: f64,
) -> Result<f64> {
    ensemble_flat_fraction_at(ensemble, psi, epsilon, FlatnessThreshold::LemmaStatement)
}

/// Per-member data for the entangled-sharing flatness check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MemberFlatness {
    /// ||Tr_{A1 A2} (I tensor U_k) psi (I tensor U_k†)||_inf.
    pub true_norm: f64,
    /// Convexity surrogate: max over support eigenvectors eta_j of
    /// Tr_{A1} psi of ||Tr_{A2} U_k eta_j U_k†||_inf. Always an upper
    /// bound on `true_norm`.
    pub surrogate_norm: f64,
    pub flat: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lemma2Flatness {
    pub fraction: f64,
    pub members: Vec<MemberFlatness>,
}

/// Flat fraction for a tripartite target whose A2 B factor alone is
/// randomized, together with the convexity surrogate that the
/// entangled-sharing argument bounds it by.
pub fn lemma2_flat_fraction(
    ensemble: &IsometryEnsemble,
    psi: &PureState,
    epsilon: f64,
) -> Result<Lemma2Flatness> {
    check_epsilon(epsilon)?;
    let parts = psi.partition();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "lemma2_flat_fraction needs a tripartite state, partition has {} factors",
            parts.len()
        )));
    }
    let (d_a1, d_a2, d_b) = (parts[0], parts[1], parts[2]);
    if ensemble.in_dim() != d_a2 * d_b {
        return Err(Error::DimensionMismatch(format!(
            "ensemble input dimension {} != A2 B factor dimension {}",
            ensemble.in_dim(),
            d_a2 * d_b
        )));
    }
    let (d_a2_out, d) = ensemble.out_partition();
    let cutoff = FlatnessThreshold::LemmaStatement.value(d, epsilon);

    // Support eigenvectors of the A2 B marginal; the randomized B marginal
    // is the same mixture of their images, which is where convexity bites.
    let rho_a2b = psi.reduced(&[1, 2])?;
    let (evals, evecs) = hermitian_eigen(rho_a2b.matrix());
    let support: Vec<usize> = (0..evals.len()).filter(|&j| evals[j] > 1e-12).collect();

    let members: Result<Vec<MemberFlatness>> = ensemble
        .members()
        .iter()
        .map(|v| {
            let randomized = PureState::new(
                crate::linalg::apply_to_second(v, psi.amplitudes(), d_a1, d_a2 * d_b)?,
                vec![d_a1, d_a2_out, d],
            )?;
            let true_norm = randomized.reduced(&[2])?.max_eigenvalue();
            let mut surrogate_norm: f64 = 0.0;
            for &j in &support {
                let eta = PureState::new(v * evecs.column(j).clone_owned(), vec![d_a2_out, d])?;
                let norm = eta.reduced(&[1])?.max_eigenvalue();
                surrogate_norm = surrogate_norm.max(norm);
            }
            Ok(MemberFlatness {
                true_norm,
                surrogate_norm,
                flat: true_norm < cutoff,
            })
        })
        .collect();
    let members = members?;
    let fraction = members.iter().filter(|m| m.flat).count() as f64 / members.len() as f64;
    Ok(Lemma2Flatness { fraction, members })
}

/// Numeric content of the net overlap inequality: for pure states eta,
/// eta~ and any operator 0 <= O <= I,
/// Tr((eta - eta~) O) <= ||eta - eta~||_1 / 2.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Fact1Check {
    /// Tr((eta - eta~) O), real part (imaginary part is rounding noise).
    pub overlap_gap: f64,
    /// ||eta - eta~||_1.
    pub trace_norm_distance: f64,
    /// The certified ceiling, trace_norm_distance / 2.
    pub bound: f64,
}

pub fn fact1_check(eta: &PureState, eta_tilde: &PureState, o: &CMatrix) -> Result<Fact1Check> {
    if eta.dim() != eta_tilde.dim() || o.nrows() != eta.dim() || o.ncols() != eta.dim() {
        return Err(Error::DimensionMismatch(
            "fact1_check needs equal-dimension states and operator".into(),
        ));
    }
    let herm_dev = max_abs(&(o - o.adjoint()));
    if herm_dev > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "operator must be Hermitian (deviation {herm_dev:.3e})"
        )));
    }
    let o_eigs = crate::linalg::hermitian_eigenvalues(o);
    if o_eigs[0] > 1.0 + 1e-9 || *o_eigs.last().unwrap() < -1e-9 {
        return Err(Error::InvalidArgument(format!(
            "operator spectrum [{:.3e}, {:.3e}] not within [0, 1]",
            o_eigs.last().unwrap(),
            o_eigs[0]
        )));
    }

    let diff = &eta.density().matrix().clone() - eta_tilde.density().matrix();
    let overlap_gap = (&diff * o).trace().re;
    let trace_norm_distance: f64 = crate::linalg::hermitian_eigenvalues(&diff)
        .iter()
        .map(|v| v.abs())
        .sum();
    Ok(Fact1Check {
        overlap_gap,
        trace_norm_distance,
        bound: trace_norm_distance / 2.0,
    })
}
