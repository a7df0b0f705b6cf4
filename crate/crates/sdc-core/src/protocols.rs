//! Party-level simulations of the three preparation protocols.
//!
//! * Exact probabilistic preparation: Alice applies the encoding matrix X
//!   to her half of |Phi_d> through a two-outcome generalized measurement
//!   (E0 = X/||X||_inf realizes X, E1 collects the failure branch) and
//!   sends her register, plus one qubit carrying the outcome flag.
//! * Randomized preparation: both parties use shared random bits to pick
//!   an isometry U_k from a pre-agreed ensemble; Alice prepares U_k|psi>,
//!   which is with high probability nearly flat, and Bob undoes U_k.
//! * Entangled sharing: the target is tripartite with a factor A1 kept by
//!   Alice; randomization acts on the A2 B factor only, the encoding
//!   matrix acts jointly on A1 A2, and Bob undoes U_k on his side.
//!
//! A failed measurement yields a `succeeded = false` outcome carrying the
//! post-measurement state; there is no retry loop, matching single-shot
//! resource accounting (the outcome flag is the +1 in `qubits_sent`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    apply_to_first, apply_to_second, isometry_defect, operator_norm, sqrt_psd, CMatrix, TOL_STRUCT,
};
use crate::rng::RandomStream;
use crate::states::{encoding_matrix, max_entangled, reduced_b, EncodingMatrix, PureState};

/// Completeness of a constructed Kraus pair is held to this.
pub const KRAUS_TOL: f64 = 1e-9;

/// The measurement pair (E0, E1) with E0†E0 + E1†E1 = I.
#[derive(Debug, Clone)]
pub struct KrausPair {
    e0: CMatrix,
    e1: CMatrix,
}

impl KrausPair {
    /// Build the pair realizing an arbitrary nonzero matrix:
    /// E0 = x/||x||_inf and E1 the principal square root of I - E0†E0.
    pub fn from_matrix(x: &CMatrix) -> Result<Self> {
        let norm = operator_norm(x)?;
        if norm == 0.0 {
            return Err(Error::InvalidArgument(
                "cannot build a measurement from the zero matrix".into(),
            ));
        }
        let e0 = x / num_complex::Complex64::new(norm, 0.0);
        let gram = CMatrix::identity(x.ncols(), x.ncols()) - e0.adjoint() * &e0;
        let e1 = sqrt_psd(&gram)?;
        Ok(Self { e0, e1 })
    }

    pub fn e0(&self) -> &CMatrix {
        &self.e0
    }

    pub fn e1(&self) -> &CMatrix {
        &self.e1
    }

    /// max |E0†E0 + E1†E1 - I|.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self.e0.adjoint() * &self.e0 + self.e1.adjoint() * &self.e1;
        crate::linalg::max_abs(&(sum - CMatrix::identity(self.e1.nrows(), self.e1.ncols())))
    }
}

/// Kraus pair for an encoding matrix.
pub fn build_kraus(x: &EncodingMatrix) -> Result<KrausPair> {
    KrausPair::from_matrix(x.matrix())
}

/// Success probability of the exact protocol on a bipartite target:
/// 1/(d ||rho_B||_inf), which ranges from 1 (maximally entangled)
/// down to 1/d (product state) and equals 1/(1 + flatness).
pub fn success_probability(psi: &PureState) -> Result<f64> {
    let (_, d) = psi.bipartite_dims()?;
    let rho_b = reduced_b(psi)?;
    Ok(1.0 / (d as f64 * rho_b.max_eigenvalue()))
}

/// Resource consumption of a single protocol run, in qubits/ebits/bits
/// (log2 of the relevant dimensions or ensemble size).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceTally {
    pub qubits_sent: f64,
    pub ebits_consumed: f64,
    pub shared_random_bits: f64,
}

/// What happened in one protocol run.
///
/// On success the final state and its fidelity to the target are present.
/// On failure the post-measurement state of the failed branch is retained
/// for inspection (fidelity is left absent since its dimensions need not
/// match the target).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolOutcome {
    pub succeeded: bool,
    pub chosen_k: Option<usize>,
    pub measurement_outcome: u8,
    pub final_state: Option<PureState>,
    pub fidelity_to_target: Option<f64>,
    pub resources: ResourceTally,
}

/// A set of isometries shared (by construction from a common seed)
/// between the simulated parties. All members map `in_dim` into the
/// product of `out_partition`.
#[derive(Debug, Clone)]
pub struct IsometryEnsemble {
    members: Vec<CMatrix>,
    in_dim: usize,
    out_partition: (usize, usize),
}

impl IsometryEnsemble {
    pub fn from_members(members: Vec<CMatrix>, out_partition: (usize, usize)) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("ensemble must have at least one member".into()));
        }
        let out_dim = out_partition.0 * out_partition.1;
        if out_dim == 0 {
            return Err(Error::InvalidDimension("output partition dims must be positive".into()));
        }
        let in_dim = members[0].ncols();
        for (k, v) in members.iter().enumerate() {
            if v.nrows() != out_dim || v.ncols() != in_dim {
                return Err(Error::DimensionMismatch(format!(
                    "ensemble member {k} has shape {}x{}, expected {out_dim}x{in_dim}",
                    v.nrows(),
                    v.ncols()
                )));
            }
            let defect = isometry_defect(v);
            if defect > TOL_STRUCT {
                return Err(Error::InvalidArgument(format!(
                    "ensemble member {k} is not an isometry (defect {defect:.3e})"
                )));
            }
        }
        Ok(Self { members, in_dim, out_partition })
    }

    /// The single-member identity ensemble on (d_a, d_b).
    pub fn identity(out_partition: (usize, usize)) -> Result<Self> {
        let dim = out_partition.0 * out_partition.1;
        Self::from_members(vec![CMatrix::identity(dim, dim)], out_partition)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_partition(&self) -> (usize, usize) {
        self.out_partition
    }

    pub fn member(&self, k: usize) -> &CMatrix {
        &self.members[k]
    }

    pub fn members(&self) -> &[CMatrix] {
        &self.members
    }
}

/// Draw n i.i.d. Haar isometries from `in_dim` into the product of
/// `out_partition`, sequentially from `rng`; two parties seeding the
/// same stream derive element-wise identical ensembles.
pub fn sample_ensemble(
    n: usize,
    in_dim: usize,
    out_partition: (usize, usize),
    rng: &mut RandomStream,
) -> Result<IsometryEnsemble> {
    if n == 0 {
        return Err(Error::InvalidArgument("ensemble size must be at least 1".into()));
    }
    let out_dim = out_partition.0 * out_partition.1;
    if out_dim < in_dim {
        return Err(Error::InvalidDimension(format!(
            "ensemble output dimension {out_dim} cannot hold input dimension {in_dim}"
        )));
    }
    let members: Result<Vec<CMatrix>> = (0..n)
        .map(|_| crate::linalg::haar_isometry(in_dim, out_dim, rng))
        .collect();
    IsometryEnsemble::from_members(members?, out_partition)
}

/// Exact probabilistic preparation of a bipartite target, with the
/// measurement statistics precomputed so repeated runs are cheap.
#[derive(Debug, Clone)]
pub struct ExactPreparation {
    target: PureState,
    kraus: KrausPair,
    p_success: f64,
    success_state: PureState,
    success_fidelity: f64,
    failure_state: Option<PureState>,
    d_out: usize,
    d: usize,
}

impl ExactPreparation {
    pub fn new(target: &PureState) -> Result<Self> {
        let (d_out, d) = target.bipartite_dims()?;
        let x = encoding_matrix(target)?;
        let kraus = build_kraus(&x)?;
        let p_success = success_probability(target)?;
        let phi = max_entangled(d)?;

        let raw_success = apply_to_first(kraus.e0(), phi.amplitudes(), d, d)?;
        let norm = raw_success.norm();
        let success_state = PureState::new(
            raw_success / num_complex::Complex64::new(norm, 0.0),
            vec![d_out, d],
        )?;
        let success_fidelity = success_state.fidelity(target)?;

        let raw_failure = apply_to_first(kraus.e1(), phi.amplitudes(), d, d)?;
        let fail_norm = raw_failure.norm();
        let failure_state = if fail_norm > 1e-7 {
            Some(PureState::new(
                raw_failure / num_complex::Complex64::new(fail_norm, 0.0),
                vec![d, d],
            )?)
        } else {
            None
        };

        Ok(Self {
            target: target.clone(),
            kraus,
            p_success,
            success_state,
            success_fidelity,
            failure_state,
            d_out,
            d,
        })
    }

    pub fn target(&self) -> &PureState {
        &self.target
    }

    pub fn kraus(&self) -> &KrausPair {
        &self.kraus
    }

    pub fn success_probability(&self) -> f64 {
        self.p_success
    }

    /// Fidelity of the post-success joint state to the target; exactness
    /// of the protocol means this is 1 up to rounding.
    pub fn success_fidelity(&self) -> f64 {
        self.success_fidelity
    }

    pub fn resources(&self) -> ResourceTally {
        ResourceTally {
            qubits_sent: (self.d_out as f64).log2() + 1.0,
            ebits_consumed: (self.d as f64).log2(),
            shared_random_bits: 0.0,
        }
    }

    /// Sample just the measurement outcome (true = success), consuming
    /// one uniform draw.
    pub fn sample(&self, rng: &mut RandomStream) -> bool {
        rng.uniform() < self.p_success
    }

    pub fn run(&self, rng: &mut RandomStream) -> ProtocolOutcome {
        let succeeded = self.sample(rng);
        if succeeded {
            ProtocolOutcome {
                succeeded: true,
                chosen_k: None,
                measurement_outcome: 0,
                final_state: Some(self.success_state.clone()),
                fidelity_to_target: Some(self.success_fidelity),
                resources: self.resources(),
            }
        } else {
            ProtocolOutcome {
                succeeded: false,
                chosen_k: None,
                measurement_outcome: 1,
                final_state: self.failure_state.clone(),
                fidelity_to_target: None,
                resources: self.resources(),
            }
        }
    }
}

/// One-shot exact preparation; see [`ExactPreparation`] for batches.
pub fn run_exact_preparation(target: &PureState, rng: &mut RandomStream) -> Result<ProtocolOutcome> {
    Ok(ExactPreparation::new(target)?.run(rng))
}

#[derive(Debug, Clone)]
struct Branch {
    prep: ExactPreparation,
    /// Bob's state after undoing U_k on the success branch.
    final_state: PureState,
    fidelity: f64,
}

/// High-probability preparation: randomize with a shared-randomness
/// ensemble, run the exact protocol on the randomized state, undo on
/// Bob's side. All per-member data is precomputed at construction.
#[derive(Debug, Clone)]
pub struct RandomizedPreparation {
    target: PureState,
    ensemble: IsometryEnsemble,
    branches: Vec<Branch>,
    d_a: usize,
    d: usize,
}

impl RandomizedPreparation {
    pub fn new(target: &PureState, ensemble: &IsometryEnsemble) -> Result<Self> {
        let (d_a, d) = ensemble.out_partition();
        if ensemble.in_dim() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "ensemble input dimension {} != target dimension {}",
                ensemble.in_dim(),
                target.dim()
            )));
        }
        if ensemble.in_dim() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "ensemble input dimension {} is not d^2 for output B dimension d = {d}",
                ensemble.in_dim()
            )));
        }
        if d_a < d {
            return Err(Error::InvalidDimension(format!(
                "output partition ({d_a}, {d}) needs d_a >= d"
            )));
        }
        let branches: Result<Vec<Branch>> = ensemble
            .members()
            .iter()
            .map(|v| {
                let randomized =
                    PureState::new(v * target.amplitudes(), vec![d_a, d])?;
                let prep = ExactPreparation::new(&randomized)?;
                // Bob applies U_k† to the (exactly prepared) randomized state.
                let undone = v.adjoint() * prep.success_state.amplitudes();
                let final_state = PureState::new(undone, target.partition().to_vec())?;
                let fidelity = final_state.fidelity(target)?;
                Ok(Branch { prep, final_state, fidelity })
            })
            .collect();
        Ok(Self {
            target: target.clone(),
            ensemble: ensemble.clone(),
            branches: branches?,
            d_a,
            d,
        })
    }

    pub fn target(&self) -> &PureState {
        &self.target
    }

    pub fn ensemble(&self) -> &IsometryEnsemble {
        &self.ensemble
    }

    /// Success probability of the exact step conditioned on member k.
    pub fn branch_probability(&self, k: usize) -> f64 {
        self.branches[k].prep.success_probability()
    }

    /// Overall success probability, averaged over the shared draw of k.
    pub fn expected_success(&self) -> f64 {
        let sum: f64 = self.branches.iter().map(|b| b.prep.success_probability()).sum();
        sum / self.branches.len() as f64
    }

    pub fn resources(&self) -> ResourceTally {
        ResourceTally {
            qubits_sent: (self.d_a as f64).log2() + 1.0,
            ebits_consumed: (self.d as f64).log2(),
            shared_random_bits: (self.ensemble.len() as f64).log2(),
        }
    }

    /// Draw the shared index and the measurement outcome.
    pub fn sample(&self, shared: &mut RandomStream, private: &mut RandomStream) -> (usize, bool) {
        let k = shared.index(self.branches.len());
        (k, self.branches[k].prep.sample(private))
    }

    pub fn run(&self, shared: &mut RandomStream, private: &mut RandomStream) -> ProtocolOutcome {
        let (k, succeeded) = self.sample(shared, private);
        self.outcome_for(k, succeeded)
    }

    /// Run with the shared draw forced to a specific member.
    pub fn run_with_k(&self, k: usize, private: &mut RandomStream) -> Result<ProtocolOutcome> {
        if k >= self.branches.len() {
            return Err(Error::InvalidArgument(format!(
                "member index {k} out of range for ensemble of {}",
                self.branches.len()
            )));
        }
        let succeeded = self.branches[k].prep.sample(private);
        Ok(self.outcome_for(k, succeeded))
    }

    fn outcome_for(&self, k: usize, succeeded: bool) -> ProtocolOutcome {
        let branch = &self.branches[k];
        if succeeded {
            ProtocolOutcome {
                succeeded: true,
                chosen_k: Some(k),
                measurement_outcome: 0,
                final_state: Some(branch.final_state.clone()),
                fidelity_to_target: Some(branch.fidelity),
                resources: self.resources(),
            }
        } else {
            ProtocolOutcome {
                succeeded: false,
                chosen_k: Some(k),
                measurement_outcome: 1,
                final_state: branch.prep.failure_state.clone(),
                fidelity_to_target: None,
                resources: self.resources(),
            }
        }
    }
}

/// One-shot randomized preparation.
pub fn run_randomized_preparation(
    target: &PureState,
    ensemble: &IsometryEnsemble,
    shared: &mut RandomStream,
    private: &mut RandomStream,
) -> Result<ProtocolOutcome> {
    Ok(RandomizedPreparation::new(target, ensemble)?.run(shared, private))
}

#[derive(Debug, Clone)]
struct ShareBranch {
    prep: ExactPreparation,
    final_state: PureState,
    fidelity: f64,
    /// Trace distance between the A1 marginal of the shared state and of
    /// the target; sharing must leave Alice's retained factor untouched.
    marginal_trace_distance: f64,
}

/// Sharing an entangled target: partition (d_a1, d_a2, d_b), with the
/// ensemble acting on the A2 B factor only and the encoding matrix acting
/// jointly on A1 A2.
#[derive(Debug, Clone)]
pub struct EntangledSharing {
    target: PureState,
    ensemble: IsometryEnsemble,
    branches: Vec<ShareBranch>,
    d_a2_out: usize,
    d: usize,
}

impl EntangledSharing {
    pub fn new(target: &PureState, ensemble: &IsometryEnsemble) -> Result<Self> {
        let parts = target.partition();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "entangled sharing needs a tripartite target, partition has {} factors",
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
        if d_a1 > d_a2_out * d {
            return Err(Error::InvalidDimension(format!(
                "retained factor dimension {d_a1} exceeds the randomized A2 B dimension {}",
                d_a2_out * d
            )));
        }
        let target_marginal = target.reduced(&[0])?;
        let branches: Result<Vec<ShareBranch>> = ensemble
            .members()
            .iter()
            .map(|v| {
                // (I_{A1} tensor U_k) |psi>, then the bipartite (A1 A2', B) view.
                let randomized_amps =
                    apply_to_second(v, target.amplitudes(), d_a1, d_a2 * d_b)?;
                let bipartite =
                    PureState::new(randomized_amps, vec![d_a1 * d_a2_out, d])?;
                let prep = ExactPreparation::new(&bipartite)?;
                // Bob undoes U_k on his (A2' B) side.
                let undone = apply_to_second(
                    &v.adjoint(),
                    prep.success_state.amplitudes(),
                    d_a1,
                    d_a2_out * d,
                )?;
                let final_state = PureState::new(undone, vec![d_a1, d_a2, d_b])?;
                let fidelity = final_state.fidelity(target)?;
                let marginal_trace_distance = final_state
                    .reduced(&[0])?
                    .trace_distance(&target_marginal)?;
                Ok(ShareBranch { prep, final_state, fidelity, marginal_trace_distance })
            })
            .collect();
        Ok(Self {
            target: target.clone(),
            ensemble: ensemble.clone(),
            branches: branches?,
            d_a2_out,
            d,
        })
    }

    pub fn target(&self) -> &PureState {
        &self.target
    }

    pub fn branch_probability(&self, k: usize) -> f64 {
        self.branches[k].prep.success_probability()
    }

    pub fn expected_success(&self) -> f64 {
        let sum: f64 = self.branches.iter().map(|b| b.prep.success_probability()).sum();
        sum / self.branches.len() as f64
    }

    pub fn resources(&self) -> ResourceTally {
        ResourceTally {
            qubits_sent: (self.d_a2_out as f64).log2() + 1.0,
            ebits_consumed: (self.d as f64).log2(),
            shared_random_bits: (self.ensemble.len() as f64).log2(),
        }
    }

    pub fn sample(&self, shared: &mut RandomStream, private: &mut RandomStream) -> (usize, bool) {
        let k = shared.index(self.branches.len());
        (k, self.branches[k].prep.sample(private))
    }

    pub fn run(&self, shared: &mut RandomStream, private: &mut RandomStream) -> ProtocolOutcome {
        let (k, succeeded) = self.sample(shared, private);
        self.outcome_for(k, succeeded)
    }

    pub fn run_with_k(&self, k: usize, private: &mut RandomStream) -> Result<ProtocolOutcome> {
        if k >= self.branches.len() {
            return Err(Error::InvalidArgument(format!(
                "member index {k} out of range for ensemble of {}",
                self.branches.len()
            )));
        }
        let succeeded = self.branches[k].prep.sample(private);
        Ok(self.outcome_for(k, succeeded))
    }

    /// Trace distance between final and target A1 marginals for member k.
    pub fn branch_marginal_trace_distance(&self, k: usize) -> f64 {
        self.branches[k].marginal_trace_distance
    }

    fn outcome_for(&self, k: usize, succeeded: bool) -> ProtocolOutcome {
        let branch = &self.branches[k];
        if succeeded {
            ProtocolOutcome {
                succeeded: true,
                chosen_k: Some(k),
                measurement_outcome: 0,
                final_state: Some(branch.final_state.clone()),
                fidelity_to_target: Some(branch.fidelity),
                resources: self.resources(),
            }
        } else {
            ProtocolOutcome {
                succeeded: false,
                chosen_k: Some(k),
                measurement_outcome: 1,
                final_state: branch.prep.failure_state.clone(),
                fidelity_to_target: None,
                resources: self.resources(),
            }
        }
    }
}

/// One-shot entangled sharing.
pub fn run_entangled_sharing(
    target: &PureState,
    ensemble: &IsometryEnsemble,
    shared: &mut RandomStream,
    private: &mut RandomStream,
) -> Result<ProtocolOutcome> {
    Ok(EntangledSharing::new(target, ensemble)?.run(shared, private))
}

/// Aggregate of a Monte Carlo batch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub successes: u64,
    /// Smallest success fidelity observed (absent if nothing succeeded).
    pub min_success_fidelity: Option<f64>,
}

impl TrialStats {
    pub fn frequency(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// 3 sqrt(p(1-p)/n) at the empirical frequency.
    pub fn half_width_3sigma(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.frequency();
        3.0 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

fn merge_min(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Run `trials` independent exact preparations; trial t draws from
/// `base.substream(t)`, so results are reproducible and scheduling-proof.
pub fn exact_trials(prep: &ExactPreparation, trials: u64, base: &RandomStream) -> TrialStats {
    let successes = (0..trials)
        .into_par_iter()
        .map(|t| u64::from(prep.sample(&mut base.substream(t))))
        .sum();
    TrialStats {
        trials,
        successes,
        min_success_fidelity: (successes > 0).then(|| prep.success_fidelity()),
    }
}

/// Run `trials` randomized preparations; trial t uses substreams
/// (2t, 2t + 1) of `base` for the shared and private draws.
pub fn randomized_trials(
    prep: &RandomizedPreparation,
    trials: u64,
    base: &RandomStream,
) -> TrialStats {
    let (successes, min_fid) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut shared = base.substream(2 * t);
            let mut private = base.substream(2 * t + 1);
            let (k, ok) = prep.sample(&mut shared, &mut private);
            (u64::from(ok), ok.then(|| prep.branches[k].fidelity))
        })
        .reduce(|| (0, None), |a, b| (a.0 + b.0, merge_min(a.1, b.1)));
    TrialStats { trials, successes, min_success_fidelity: min_fid }
}

/// Aggregate of an entangled-sharing batch; also tracks how far any
/// successful run's A1 marginal drifted from the target's.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharingStats {
    pub trials: u64,
    pub successes: u64,
    pub min_success_fidelity: Option<f64>,
    pub max_marginal_trace_distance: Option<f64>,
}

impl SharingStats {
    pub fn frequency(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn half_width_3sigma(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.frequency();
        3.0 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Run `trials` sharing rounds; substream layout as in
/// [`randomized_trials`].
pub fn sharing_trials(prep: &EntangledSharing, trials: u64, base: &RandomStream) -> SharingStats {
    let (successes, min_fid, max_td) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut shared = base.substream(2 * t);
            let mut private = base.substream(2 * t + 1);
            let (k, ok) = prep.sample(&mut shared, &mut private);
            let branch = &prep.branches[k];
            (
                u64::from(ok),
                ok.then_some(branch.fidelity),
                ok.then_some(branch.marginal_trace_distance),
            )
        })
        .reduce(
            || (0, None, None),
            |a, b| {
                (
                    a.0 + b.0,
                    merge_min(a.1, b.1),
                    match (a.2, b.2) {
                        (Some(x), Some(y)) => Some(x.max(y)),
                        (x, None) => x,
                        (None, y) => y,
                    },
                )
            },
        );
    SharingStats {
        trials,
        successes,
        min_success_fidelity: min_fid,
        max_marginal_trace_distance: max_td,
    }
}
