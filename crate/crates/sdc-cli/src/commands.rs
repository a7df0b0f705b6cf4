//! Experiment execution and report assembly.
//!
//! Stream-id layout under the run's seed: stream 0 builds the target
//! state, stream 1 the isometry ensemble, and Monte Carlo trials start
//! at stream 2 (trial t of a protocol batch uses substreams 2t/2t+1 of
//! that base; tail-sweep row i offsets its base by i * trials). Every
//! report echoes the full effective configuration, so a run can be
//! reproduced from its own output.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use sdc_core::concentration::{
    divergence, gaussian_tail_bound, lemma1_summary, lemma2_flat_fraction, lemma2_n_value,
    mu_bound, mu_bound_log2, net_size_bound_log2, ensemble_flat_fraction,
    flatness_tail_experiment, BoundParams, ConcentrationReport, FlatnessThreshold,
};
use sdc_core::linalg::CVector;
use sdc_core::protocols::{
    exact_trials, randomized_trials, sample_ensemble, sharing_trials, success_probability,
    EntangledSharing, ExactPreparation, RandomizedPreparation,
};
use sdc_core::resources::{
    entangled_sharing_profile, holevo_optimality_check, optimality_window,
    pure_exact_log2_n, pure_exact_qubits, pure_preparation_profile, sharing_exact_log2_n,
};
use sdc_core::states::{flatness_epsilon, max_entangled, random_product_state, random_state};
use sdc_core::{PureState, RandomStream};

use crate::config::{
    BoundsArgs, Cli, Command, ExactArgs, FlatFractionArgs, OutputFormat, RandomizedArgs,
    ResourcesArgs, ShareArgs, StateSpec, TailArgs,
};
use crate::report::{canonical_json, csv_field, fmt_csv_f64};

/// Stream id for target-state construction.
pub const STREAM_STATE: u64 = 0;
/// Stream id for ensemble sampling.
pub const STREAM_ENSEMBLE: u64 = 1;
/// Base stream id for Monte Carlo trials.
pub const STREAM_TRIALS: u64 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Infeasible dimensions or violated preconditions.
    Domain(sdc_core::Error),
    /// Unreadable or mismatched input (state files).
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Input(msg) => write!(f, "input: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sdc_core::Error> for CliError {
    fn from(e: sdc_core::Error) -> Self {
        CliError::Domain(e)
    }
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Exact(args) => run_exact(args),
        Command::Randomized(args) => run_randomized(args),
        Command::Share(args) => run_share(args),
        Command::Tail(args) => run_tail(args),
        Command::FlatFraction(args) => run_flat_fraction(args),
        Command::Bounds(args) => run_bounds(args),
        Command::Resources(args) => run_resources(args),
    }
}

/// Target construction from a state spec, deterministic under the seed.
fn build_state(spec: &StateSpec, partition: &[usize], seed: u64) -> Result<PureState, CliError> {
    let mut rng = RandomStream::new(seed, STREAM_STATE);
    match spec {
        StateSpec::Haar => Ok(random_state(partition, &mut rng)?),
        StateSpec::Product => Ok(random_product_state(partition, &mut rng)?),
        StateSpec::Mes => match partition {
            &[a, b] if a == b => Ok(max_entangled(a)?),
            &[d_a1, d_a2, d_b] if d_a1 == d_b => {
                // maximal entanglement between the retained factor and B,
                // ancilla A2 in |0>
                let d = d_b;
                let mut amps = CVector::zeros(d_a1 * d_a2 * d_b);
                for i in 0..d {
                    amps[i * d_a2 * d_b + i] = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
                }
                Ok(PureState::new(amps, partition.to_vec())?)
            }
            other => Err(CliError::Input(format!(
                "mes is not defined for partition {other:?}"
            ))),
        },
        StateSpec::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read state file {path}: {e}")))?;
            let state: PureState = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("cannot parse state file {path}: {e}")))?;
            if state.partition() != partition {
                return Err(CliError::Input(format!(
                    "state file {path} has partition {:?}, this experiment needs {partition:?}",
                    state.partition()
                )));
            }
            Ok(state)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ExactReport {
    pub command: String,
    pub d: usize,
    pub state: String,
    pub trials: u64,
    pub seed: u64,
    pub flatness_epsilon: f64,
    pub predicted_success: f64,
    pub successes: u64,
    pub empirical_success: f64,
    pub half_width_3sigma: f64,
    pub min_success_fidelity: Option<f64>,
    pub qubits_sent: f64,
    pub ebits_consumed: f64,
    pub shared_random_bits: f64,
}

pub const EXACT_CSV_HEADER: &str = "command,d,state,trials,seed,flatness_epsilon,predicted_success,successes,empirical_success,half_width_3sigma,min_success_fidelity,qubits_sent,ebits_consumed,shared_random_bits";

fn run_exact(args: ExactArgs) -> Result<String, CliError> {
    let seed = args.common.seed;
    let target = build_state(&args.state, &[args.d, args.d], seed)?;
    let prep = ExactPreparation::new(&target)?;
    let stats = exact_trials(&prep, args.trials, &RandomStream::new(seed, STREAM_TRIALS));
    let res = prep.resources();
    let report = ExactReport {
        command: "exact".into(),
        d: args.d,
        state: args.state.to_string(),
        trials: args.trials,
        seed,
        flatness_epsilon: flatness_epsilon(&target)?,
        predicted_success: prep.success_probability(),
        successes: stats.successes,
        empirical_success: stats.frequency(),
        half_width_3sigma: stats.half_width_3sigma(),
        min_success_fidelity: stats.min_success_fidelity,
        qubits_sent: res.qubits_sent,
        ebits_consumed: res.ebits_consumed,
        shared_random_bits: res.shared_random_bits,
    };
    Ok(match args.common.output {
        OutputFormat::Json => canonical_json(&report),
        OutputFormat::Csv => format!(
            "{EXACT_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            report.command,
            report.d,
            csv_field(&report.state),
            report.trials,
            report.seed,
            fmt_csv_f64(report.flatness_epsilon),
            fmt_csv_f64(report.predicted_success),
            report.successes,
            fmt_csv_f64(report.empirical_success),
            fmt_csv_f64(report.half_width_3sigma),
            opt_csv(report.min_success_fidelity),
            fmt_csv_f64(report.qubits_sent),
            fmt_csv_f64(report.ebits_consumed),
            fmt_csv_f64(report.shared_random_bits),
        ),
        OutputFormat::Pretty => format!(
            "exact preparation (d = {}, state = {})\n\
             seed: {}\n\
             trials: {}\n\
             flatness epsilon: {:.6}\n\
             predicted success: {:.6}\n\
             empirical success: {:.6} (half-width {:.6} at 3 sigma, {} successes)\n\
             min success fidelity: {}\n\
             resources per run: {:.4} qubits sent, {:.4} ebits, {:.4} shared bits",
            report.d,
            report.state,
            report.seed,
            report.trials,
            report.flatness_epsilon,
            report.predicted_success,
            report.empirical_success,
            report.half_width_3sigma,
            report.successes,
            opt_pretty(report.min_success_fidelity),
            report.qubits_sent,
            report.ebits_consumed,
            report.shared_random_bits,
        ),
    })
}

#[derive(Debug, Serialize)]
pub struct RandomizedReport {
    pub command: String,
    pub d: usize,
    pub d_a: usize,
    pub ensemble_size: usize,
    pub state: String,
    pub trials: u64,
    pub seed: u64,
    pub unrandomized_success: f64,
    pub predicted_success: f64,
    pub successes: u64,
    pub empirical_success: f64,
    pub half_width_3sigma: f64,
    pub min_success_fidelity: Option<f64>,
    pub max_marginal_trace_distance: Option<f64>,
    pub qubits_sent: f64,
    pub ebits_consumed: f64,
    pub shared_random_bits: f64,
}

pub const PROTOCOL_CSV_HEADER: &str = "command,d,d_a,ensemble_size,state,trials,seed,unrandomized_success,predicted_success,successes,empirical_success,half_width_3sigma,min_success_fidelity,max_marginal_trace_distance,qubits_sent,ebits_consumed,shared_random_bits";

fn render_randomized(report: &RandomizedReport, output: OutputFormat) -> String {
    match output {
        OutputFormat::Json => canonical_json(report),
        OutputFormat::Csv => format!(
            "{PROTOCOL_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            report.command,
            report.d,
            report.d_a,
            report.ensemble_size,
            csv_field(&report.state),
            report.trials,
            report.seed,
            fmt_csv_f64(report.unrandomized_success),
            fmt_csv_f64(report.predicted_success),
            report.successes,
            fmt_csv_f64(report.empirical_success),
            fmt_csv_f64(report.half_width_3sigma),
            opt_csv(report.min_success_fidelity),
            opt_csv(report.max_marginal_trace_distance),
            fmt_csv_f64(report.qubits_sent),
            fmt_csv_f64(report.ebits_consumed),
            fmt_csv_f64(report.shared_random_bits),
        ),
        OutputFormat::Pretty => {
            let marginal = match report.max_marginal_trace_distance {
                Some(td) => format!("\nmax retained-marginal trace distance: {td:.3e}"),
                None => String::new(),
            };
            format!(
                "{} (d = {}, d_a = {}, n = {}, state = {})\n\
                 seed: {}\n\
                 trials: {}\n\
                 unrandomized success: {:.6}\n\
                 predicted success (ensemble average): {:.6}\n\
                 empirical success: {:.6} (half-width {:.6} at 3 sigma, {} successes)\n\
                 min success fidelity: {}{}\n\
                 resources per run: {:.4} qubits sent, {:.4} ebits, {:.4} shared bits",
                report.command,
                report.d,
                report.d_a,
                report.ensemble_size,
                report.state,
                report.seed,
                report.trials,
                report.unrandomized_success,
                report.predicted_success,
                report.empirical_success,
                report.half_width_3sigma,
                report.successes,
                opt_pretty(report.min_success_fidelity),
                marginal,
                report.qubits_sent,
                report.ebits_consumed,
                report.shared_random_bits,
            )
        }
    }
}

fn run_randomized(args: RandomizedArgs) -> Result<String, CliError> {
    let seed = args.common.seed;
    let d = args.d;
    let target = build_state(&args.state, &[d, d], seed)?;
    let mut ens_rng = RandomStream::new(seed, STREAM_ENSEMBLE);
    let ensemble = sample_ensemble(args.ensemble_size, d * d, (args.d_a, d), &mut ens_rng)?;
    let prep = RandomizedPreparation::new(&target, &ensemble)?;
    let stats = randomized_trials(&prep, args.trials, &RandomStream::new(seed, STREAM_TRIALS));
    let res = prep.resources();
    let report = RandomizedReport {
        command: "randomized".into(),
        d,
        d_a: args.d_a,
        ensemble_size: args.ensemble_size,
        state: args.state.to_string(),
        trials: args.trials,
        seed,
        unrandomized_success: success_probability(&target)?,
        predicted_success: prep.expected_success(),
        successes: stats.successes,
        empirical_success: stats.frequency(),
        half_width_3sigma: stats.half_width_3sigma(),
        min_success_fidelity: stats.min_success_fidelity,
        max_marginal_trace_distance: None,
        qubits_sent: res.qubits_sent,
        ebits_consumed: res.ebits_consumed,
        shared_random_bits: res.shared_random_bits,
    };
    Ok(render_randomized(&report, args.common.output))
}

fn run_share(args: ShareArgs) -> Result<String, CliError> {
    let seed = args.common.seed;
    let d = args.d;
    let target = build_state(&args.state, &[d, d, d], seed)?;
    let mut ens_rng = RandomStream::new(seed, STREAM_ENSEMBLE);
    let ensemble = sample_ensemble(args.ensemble_size, d * d, (args.d_a, d), &mut ens_rng)?;
    let prep = EntangledSharing::new(&target, &ensemble)?;
    let stats = sharing_trials(&prep, args.trials, &RandomStream::new(seed, STREAM_TRIALS));
    let res = prep.resources();
    // unrandomized baseline: the exact step on the target's (A1 A2, B) view
    let bipartite = target.repartition(vec![d * d, d])?;
    let report = RandomizedReport {
        command: "share".into(),
        d,
        d_a: args.d_a,
        ensemble_size: args.ensemble_size,
        state: args.state.to_string(),
        trials: args.trials,
        seed,
        unrandomized_success: success_probability(&bipartite)?,
        predicted_success: prep.expected_success(),
        successes: stats.successes,
        empirical_success: stats.frequency(),
        half_width_3sigma: stats.half_width_3sigma(),
        min_success_fidelity: stats.min_success_fidelity,
        max_marginal_trace_distance: stats.max_marginal_trace_distance,
        qubits_sent: res.qubits_sent,
        ebits_consumed: res.ebits_consumed,
        shared_random_bits: res.shared_random_bits,
    };
    Ok(render_randomized(&report, args.common.output))
}

#[derive(Debug, Serialize)]
pub struct TailReport {
    pub command: String,
    pub d_b: usize,
    pub epsilon: f64,
    pub trials: u64,
    pub state: String,
    pub seed: u64,
    pub rows: Vec<ConcentrationReport>,
}

pub const TAIL_CSV_HEADER: &str =
    "d_a,d_b,epsilon,trials,empirical_tail,half_width,analytic_bound,vacuous";

fn run_tail(args: TailArgs) -> Result<String, CliError> {
    let seed = args.common.seed;
    let d = args.d;
    let psi = build_state(&args.state, &[d, d], seed)?;
    let mut rows = Vec::with_capacity(args.d_a.len());
    for (i, &d_a) in args.d_a.iter().enumerate() {
        let params = BoundParams::new(d_a, d as u64, args.epsilon)?;
        let base = RandomStream::new(seed, STREAM_TRIALS + i as u64 * args.trials);
        rows.push(flatness_tail_experiment(&params, &psi, args.trials, &base)?);
    }
    let report = TailReport {
        command: "tail".into(),
        d_b: d,
        epsilon: args.epsilon,
        trials: args.trials,
        state: args.state.to_string(),
        seed,
        rows,
    };
    Ok(match args.common.output {
        OutputFormat::Json => canonical_json(&report),
        OutputFormat::Csv => {
            let mut out = String::from(TAIL_CSV_HEADER);
            for row in &report.rows {
                out.push_str(&format!(
                    "\n{},{},{},{},{},{},{},{}",
                    row.params.d_a,
                    row.params.d_b,
                    fmt_csv_f64(row.params.epsilon),
                    row.trials,
                    fmt_csv_f64(row.empirical_tail),
                    fmt_csv_f64(row.half_width),
                    fmt_csv_f64(row.analytic_bound),
                    row.vacuous,
                ));
            }
            out
        }
        OutputFormat::Pretty => {
            let mut out = format!(
                "flatness tail experiment (d_b = {}, epsilon = {}, state = {})\n\
                 seed: {}\ntrials per point: {}",
                report.d_b, report.epsilon, report.state, report.seed, report.trials
            );
            for row in &report.rows {
                out.push_str(&format!(
                    "\nd_a = {:>6}: tail {:.4} +/- {:.4}, bound {}{}",
                    row.params.d_a,
                    row.empirical_tail,
                    row.half_width,
                    if row.analytic_bound.is_finite() {
                        format!("{:.3e}", row.analytic_bound)
                    } else {
                        format!("2^{:.1}", row.analytic_bound_log2)
                    },
                    if row.vacuous { " (vacuous)" } else { "" },
                ));
            }
            out
        }
    })
}

#[derive(Debug, Serialize)]
pub struct FlatFractionReport {
    pub command: String,
    pub d: usize,
    pub d_a: usize,
    pub ensemble_size: usize,
    pub epsilon: f64,
    /// Flatness cutoff (1 + epsilon)/d actually applied.
    pub threshold: f64,
    pub tripartite: bool,
    pub state: String,
    pub seed: u64,
    pub fraction: f64,
    /// Tripartite only: max over members of (true norm - convexity
    /// surrogate); nonpositive up to rounding.
    pub max_convexity_gap: Option<f64>,
}

pub const FLAT_FRACTION_CSV_HEADER: &str =
    "command,d,d_a,ensemble_size,epsilon,threshold,tripartite,state,seed,fraction,max_convexity_gap";

fn run_flat_fraction(args: FlatFractionArgs) -> Result<String, CliError> {
    let seed = args.common.seed;
    let d = args.d;
    let mut ens_rng = RandomStream::new(seed, STREAM_ENSEMBLE);
    let ensemble = sample_ensemble(args.ensemble_size, d * d, (args.d_a, d), &mut ens_rng)?;
    let (fraction, max_gap) = if args.tripartite {
        let target = build_state(&args.state, &[d, d, d], seed)?;
        let rep = lemma2_flat_fraction(&ensemble, &target, args.epsilon)?;
        let gap = rep
            .members
            .iter()
            .map(|m| m.true_norm - m.surrogate_norm)
            .fold(f64::NEG_INFINITY, f64::max);
        (rep.fraction, Some(gap))
    } else {
        let psi = build_state(&args.state, &[d, d], seed)?;
        (ensemble_flat_fraction(&ensemble, &psi, args.epsilon)?, None)
    };
    let report = FlatFractionReport {
        command: "flat-fraction".into(),
        d,
        d_a: args.d_a,
        ensemble_size: args.ensemble_size,
        epsilon: args.epsilon,
        threshold: FlatnessThreshold::LemmaStatement.value(d, args.epsilon),
        tripartite: args.tripartite,
        state: args.state.to_string(),
        seed,
        fraction,
        max_convexity_gap: max_gap,
    };
    Ok(match args.common.output {
        OutputFormat::Json => canonical_json(&report),
        OutputFormat::Csv => format!(
            "{FLAT_FRACTION_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{}",
            report.command,
            report.d,
            report.d_a,
            report.ensemble_size,
            fmt_csv_f64(report.epsilon),
            fmt_csv_f64(report.threshold),
            report.tripartite,
            csv_field(&report.state),
            report.seed,
            fmt_csv_f64(report.fraction),
            opt_csv(report.max_convexity_gap),
        ),
        OutputFormat::Pretty => {
            let gap = match report.max_convexity_gap {
                Some(g) => format!("\nmax convexity gap (true - surrogate): {g:.3e}"),
                None => String::new(),
            };
            format!(
                "flat fraction (d = {}, d_a = {}, n = {}, epsilon = {}, state = {}{})\n\
                 seed: {}\n\
                 flatness threshold: {:.6}\n\
                 fraction of members yielding a flat state: {:.4}{}",
                report.d,
                report.d_a,
                report.ensemble_size,
                report.epsilon,
                report.state,
                if report.tripartite { ", tripartite" } else { "" },
                report.seed,
                report.threshold,
                report.fraction,
                gap,
            )
        }
    })
}

#[derive(Debug, Serialize)]
pub struct BoundsReport {
    pub command: String,
    pub d: u64,
    pub epsilon: f64,
    pub seed: u64,
    /// Randomizing dimension (112 ln 2 / eps^2) d log2 d.
    pub lemma1_dim_a: f64,
    pub lemma1_simplified_n: f64,
    pub lemma1_simplified_log2: f64,
    pub npure_numerator: f64,
    pub npure_denominator: f64,
    pub npure_feasible: bool,
    pub npure_threshold: Option<f64>,
    pub npure_threshold_log2: Option<f64>,
    pub lemma2_n: f64,
    pub lemma2_log2_n: f64,
    /// Tail bound at the lemma-1 dimensions; null when it overflows
    /// (log2 twin is always present).
    pub mu: Option<f64>,
    pub mu_log2: f64,
    pub gaussian_tail: f64,
    /// log2 of the net-size bound for states of dimension d_a * d at
    /// delta = eps/(2d).
    pub net_size_log2: f64,
    /// D(eps || mu) when mu < 1, else null.
    pub divergence: Option<f64>,
    pub divergence_floor: Option<f64>,
}

pub const BOUNDS_CSV_HEADER: &str = "command,d,epsilon,seed,lemma1_dim_a,lemma1_simplified_n,lemma1_simplified_log2,npure_numerator,npure_denominator,npure_feasible,npure_threshold,npure_threshold_log2,lemma2_n,lemma2_log2_n,mu,mu_log2,gaussian_tail,net_size_log2,divergence,divergence_floor";

fn run_bounds(args: BoundsArgs) -> Result<String, CliError> {
    let seed = args.common.seed;
    let summary = lemma1_summary(args.d, args.epsilon)?;
    let lemma2 = lemma2_n_value(args.d, args.epsilon)?;
    let params = BoundParams::new(summary.d_a, args.d, args.epsilon)?;
    let mu = mu_bound(&params)?;
    let mu_log2 = mu_bound_log2(&params)?;
    let net_dim = summary.d_a * args.d;
    let delta = args.epsilon / (2.0 * args.d as f64);
    let threshold = summary.threshold.value();
    let (div, floor) = if mu > 0.0 && mu < 1.0 {
        (
            Some(divergence(args.epsilon.min(1.0 - f64::EPSILON), mu)?),
            Some(-1.0 - args.epsilon * mu.log2()),
        )
    } else {
        (None, None)
    };
    let report = BoundsReport {
        command: "bounds".into(),
        d: args.d,
        epsilon: args.epsilon,
        seed,
        lemma1_dim_a: summary.dim_a,
        lemma1_simplified_n: summary.simplified_n,
        lemma1_simplified_log2: summary.simplified_n.log2(),
        npure_numerator: summary.threshold.numerator,
        npure_denominator: summary.threshold.denominator,
        npure_feasible: summary.threshold.is_feasible(),
        npure_threshold: threshold,
        npure_threshold_log2: threshold.map(f64::log2),
        lemma2_n: lemma2.n,
        lemma2_log2_n: lemma2.log2_n,
        mu: mu.is_finite().then_some(mu),
        mu_log2,
        gaussian_tail: gaussian_tail_bound(&params)?,
        net_size_log2: net_size_bound_log2(net_dim, delta)?,
        divergence: div,
        divergence_floor: floor,
    };
    Ok(match args.common.output {
        OutputFormat::Json => canonical_json(&report),
        OutputFormat::Csv => format!(
            "{BOUNDS_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            report.command,
            report.d,
            fmt_csv_f64(report.epsilon),
            report.seed,
            fmt_csv_f64(report.lemma1_dim_a),
            fmt_csv_f64(report.lemma1_simplified_n),
            fmt_csv_f64(report.lemma1_simplified_log2),
            fmt_csv_f64(report.npure_numerator),
            fmt_csv_f64(report.npure_denominator),
            report.npure_feasible,
            opt_csv(report.npure_threshold),
            opt_csv(report.npure_threshold_log2),
            fmt_csv_f64(report.lemma2_n),
            fmt_csv_f64(report.lemma2_log2_n),
            opt_csv(report.mu),
            fmt_csv_f64(report.mu_log2),
            fmt_csv_f64(report.gaussian_tail),
            fmt_csv_f64(report.net_size_log2),
            opt_csv(report.divergence),
            opt_csv(report.divergence_floor),
        ),
        OutputFormat::Pretty => format!(
            "bounds at d = {}, epsilon = {}\n\
             seed: {}\n\
             randomizing dimension d_a: {:.4e} (ceil {})\n\
             certified ensemble size: {:.6e} (log2 = {:.4})\n\
             threshold: {} (feasible: {})\n\
             entangled-sharing ensemble size: {:.6e} (log2 = {:.4})\n\
             tail bound mu: {} (log2 = {:.4}); single-state tail: {:.6e}\n\
             net size log2 at delta = eps/2d: {:.4}\n\
             divergence D(eps||mu): {} (floor {})",
            report.d,
            report.epsilon,
            report.seed,
            report.lemma1_dim_a,
            summary.d_a,
            report.lemma1_simplified_n,
            report.lemma1_simplified_log2,
            report
                .npure_threshold
                .map_or("infeasible".to_string(), |t| format!("{t:.6e}")),
            report.npure_feasible,
            report.lemma2_n,
            report.lemma2_log2_n,
            report.mu.map_or_else(
                || format!("2^{:.2}", report.mu_log2),
                |m| format!("{m:.6e}")
            ),
            report.mu_log2,
            report.gaussian_tail,
            report.net_size_log2,
            opt_pretty(report.divergence),
            opt_pretty(report.divergence_floor),
        ),
    })
}

#[derive(Debug, Serialize)]
pub struct ResourceReport {
    pub command: String,
    pub l: u64,
    pub epsilon: f64,
    pub seed: u64,
    pub qubits: f64,
    pub ebits: f64,
    pub pure_shared_random_bits: f64,
    pub entangled_shared_random_bits: f64,
    pub rate: f64,
    pub pure_exact_qubits: f64,
    pub pure_exact_log2_n: f64,
    pub entangled_exact_log2_n: f64,
    pub optimality_window: f64,
    pub pure_within_window: bool,
    pub entangled_within_window: bool,
    /// The headline formulas round their additive constants; the
    /// *_exact_* fields carry the unrounded counts.
    pub approximate_constants: bool,
}

pub const RESOURCES_CSV_HEADER: &str = "command,l,epsilon,seed,qubits,ebits,pure_shared_random_bits,entangled_shared_random_bits,rate,pure_exact_qubits,pure_exact_log2_n,entangled_exact_log2_n,optimality_window,pure_within_window,entangled_within_window";

fn run_resources(args: ResourcesArgs) -> Result<String, CliError> {
    let seed = args.common.seed;
    let pure = pure_preparation_profile(args.l, args.epsilon)?;
    let entangled = entangled_sharing_profile(args.l, args.epsilon)?;
    let report = ResourceReport {
        command: "resources".into(),
        l: args.l,
        epsilon: args.epsilon,
        seed,
        qubits: pure.qubits,
        ebits: pure.ebits,
        pure_shared_random_bits: pure.shared_random_bits,
        entangled_shared_random_bits: entangled.shared_random_bits,
        rate: pure.rate,
        pure_exact_qubits: pure_exact_qubits(args.l, args.epsilon)?,
        pure_exact_log2_n: pure_exact_log2_n(args.l, args.epsilon)?,
        entangled_exact_log2_n: sharing_exact_log2_n(args.l, args.epsilon)?,
        optimality_window: optimality_window(args.l, args.epsilon),
        pure_within_window: holevo_optimality_check(&pure),
        entangled_within_window: holevo_optimality_check(&entangled),
        approximate_constants: true,
    };
    Ok(match args.common.output {
        OutputFormat::Json => canonical_json(&report),
        OutputFormat::Csv => format!(
            "{RESOURCES_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            report.command,
            report.l,
            fmt_csv_f64(report.epsilon),
            report.seed,
            fmt_csv_f64(report.qubits),
            fmt_csv_f64(report.ebits),
            fmt_csv_f64(report.pure_shared_random_bits),
            fmt_csv_f64(report.entangled_shared_random_bits),
            fmt_csv_f64(report.rate),
            fmt_csv_f64(report.pure_exact_qubits),
            fmt_csv_f64(report.pure_exact_log2_n),
            fmt_csv_f64(report.entangled_exact_log2_n),
            fmt_csv_f64(report.optimality_window),
            report.pure_within_window,
            report.entangled_within_window,
        ),
        OutputFormat::Pretty => format!(
            "resource profiles at l = {}, epsilon = {} (2l-qubit state)\n\
             seed: {}\n\
             {:<26}{:>14}{:>14}\n\
             {:<26}{:>14.4}{:>14.4}\n\
             {:<26}{:>14.4}{:>14.4}\n\
             {:<26}{:>14.4}{:>14.4}\n\
             {:<26}{:>14.6}{:>14.6}\n\
             unrounded: qubits {:.4}, pure log2 n {:.4}, entangled log2 n {:.4}\n\
             within optimality window ({:.2}): pure {}, entangled {}\n\
             note: headline constants are rounded; unrounded counts above",
            report.l,
            report.epsilon,
            report.seed,
            "",
            "pure",
            "entangled",
            "qubits sent",
            report.qubits,
            report.qubits,
            "ebits consumed",
            report.ebits,
            report.ebits,
            "shared random bits",
            report.pure_shared_random_bits,
            report.entangled_shared_random_bits,
            "rate (remote per sent)",
            report.rate,
            report.rate,
            report.pure_exact_qubits,
            report.pure_exact_log2_n,
            report.entangled_exact_log2_n,
            report.optimality_window,
            report.pure_within_window,
            report.entangled_within_window,
        ),
    })
}

fn opt_csv(v: Option<f64>) -> String {
    v.map(fmt_csv_f64).unwrap_or_default()
}

fn opt_pretty(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.6}"))
}
