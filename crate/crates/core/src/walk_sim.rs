//! Monte Carlo estimation of the argmin chain from simulated walks.

use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ssrw_kernel, theta_kernel, ArgminChainKernel};
use crate::error::{Error, Result};
use crate::io::{write_matrix_csv, write_vector_csv};
use crate::levy_sim::StableSampler;
use crate::rng::replica_rng;
use crate::stable::StableLaw;
use crate::window::AnchoredWalk;

/// Rows seen fewer times than this are left out of `max_row_dev`.
pub const MIN_ROW_VISITS: u64 = 1000;
pub const DEFAULT_BAND: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkModel {
    /// `±1` steps.
    Ssrw,
    /// `N(0, 1)` steps.
    Gaussian,
    /// Strictly stable steps; partial sums stay stable, so `P(S_n > 0) = ρ`.
    Stable(StableLaw<f64>),
}

impl WalkModel {
    /// `P(S_n > 0)` when it does not depend on `n`.
    pub fn theta(&self) -> Option<f64> {
        match self {
            WalkModel::Ssrw => None,
            WalkModel::Gaussian => Some(0.5),
            WalkModel::Stable(law) => Some(law.rho()),
        }
    }

    pub fn exact_kernel(&self, n: usize) -> Result<ArgminChainKernel<f64>> {
        match self.theta() {
            Some(theta) => theta_kernel(theta, n),
            None => ssrw_kernel(n),
        }
    }

    pub fn label(&self) -> String {
        match self {
            WalkModel::Ssrw => "ssrw".into(),
            WalkModel::Gaussian => "gaussian".into(),
            WalkModel::Stable(law) => format!("stable:{},{}", law.alpha(), law.beta()),
        }
    }

    fn increments<R: Rng + 'static>(&self, mut rng: R) -> Result<Box<dyn Iterator<Item = f64>>> {
        Ok(match *self {
            WalkModel::Ssrw => Box::new(std::iter::repeat_with(move || {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            })),
            WalkModel::Gaussian => Box::new(std::iter::repeat_with(move || {
                StandardNormal.sample(&mut rng)
            })),
            WalkModel::Stable(law) => {
                let sampler = StableSampler::new(law)?;
                if law.alpha() <= 1.0 {
                    log::warn!(
                        "alpha = {} <= 1: partial sums are heavy-tailed, the walk is re-anchored to keep precision",
                        law.alpha()
                    );
                }
                Box::new(std::iter::repeat_with(move || sampler.sample(&mut rng)))
            }
        })
    }
}

/// Raw transition counts of the chain; merging is plain addition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionCounts {
    pub n: usize,
    pub steps: u64,
    /// Visits of each state as the source of a transition.
    pub state: Vec<u64>,
    /// Row-major `(N+1)²` counts.
    pub transition: Vec<u64>,
    /// Transitions from `i > 0` to anything other than `i-1` or `N`.
    pub support_violations: u64,
}

impl TransitionCounts {
    pub fn new(n: usize) -> Self {
        let size = n + 1;
        Self {
            n,
            steps: 0,
            state: vec![0; size],
            transition: vec![0; size * size],
            support_violations: 0,
        }
    }

    pub fn record(&mut self, from: usize, to: usize) {
        let size = self.n + 1;
        self.steps += 1;
        self.state[from] += 1;
        self.transition[from * size + to] += 1;
        if from > 0 && to + 1 != from && to != self.n {
            self.support_violations += 1;
        }
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot merge counts for N={} and N={}",
                self.n, other.n
            )));
        }
        self.steps += other.steps;
        self.support_violations += other.support_violations;
        for (a, b) in self.state.iter_mut().zip(&other.state) {
            *a += b;
        }
        for (a, b) in self.transition.iter_mut().zip(&other.transition) {
            *a += b;
        }
        Ok(())
    }

    pub fn pi_hat(&self) -> Vec<f64> {
        let total = self.steps.max(1) as f64;
        self.state.iter().map(|&c| c as f64 / total).collect()
    }

    /// Row-conditional frequencies; unvisited rows are all zero.
    pub fn p_hat(&self) -> Vec<f64> {
        let size = self.n + 1;
        let mut out = vec![0.0; size * size];
        for i in 0..size {
            let visits = self.state[i];
            if visits == 0 {
                continue;
            }
            for j in 0..size {
                out[i * size + j] = self.transition[i * size + j] as f64 / visits as f64;
            }
        }
        out
    }
}

/// Feeds increments `X_1, X_2, ...` through the window `S_n, ..., S_{n+N}`
/// and counts `steps` transitions after discarding the first `N`.
pub fn count_transitions<I: IntoIterator<Item = f64>>(
    increments: I,
    n: usize,
    steps: u64,
) -> Result<TransitionCounts> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "window length N must be >= 1".into(),
        ));
    }
    let mut walk = AnchoredWalk::new(n + 1);
    let mut counts = TransitionCounts::new(n);
    let mut previous: Option<usize> = None;
    let mut warmup = n as u64;
    for x in increments {
        let Some(current) = walk.step(x) else {
            continue;
        };
        if let Some(from) = previous {
            if warmup > 0 {
                warmup -= 1;
            } else {
                counts.record(from, current);
                if counts.steps == steps {
                    break;
                }
            }
        }
        previous = Some(current);
    }
    if counts.steps < steps {
        return Err(Error::InsufficientSamples(format!(
            "increment stream ended after {} of {steps} transitions",
            counts.steps
        )));
    }
    Ok(counts)
}

/// Sequence `A_N(0), A_N(1), ...` of the chain for a given increment list.
pub fn argmin_sequence(increments: &[f64], n: usize) -> Vec<usize> {
    let mut walk = AnchoredWalk::new(n + 1);
    increments.iter().filter_map(|&x| walk.step(x)).collect()
}

/// One replica of `model`, drawing from stream `replica` of `seed`.
pub fn run_replica(
    model: &WalkModel,
    n: usize,
    steps: u64,
    seed: u64,
    replica: u64,
) -> Result<TransitionCounts> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let increments = model.increments(replica_rng(seed, replica))?;
    count_transitions(increments, n, steps)
}

/// Independent replicas run in parallel and merged by count addition.
pub fn run_replicas(
    model: &WalkModel,
    n: usize,
    steps_per_replica: u64,
    replicas: u64,
    seed: u64,
) -> Result<TransitionCounts> {
    let parts: Vec<TransitionCounts> = (0..replicas)
        .into_par_iter()
        .map(|r| run_replica(model, n, steps_per_replica, seed, r))
        .collect::<Result<_>>()?;
    let mut total = TransitionCounts::new(n);
    for part in &parts {
        total.merge(part)?;
    }
    Ok(total)
}

/// Simulates `model` for `steps` transitions and compares with its exact kernel.
pub fn run_chain(model: &WalkModel, n: usize, steps: u64, seed: u64) -> Result<SimulationReport> {
    let counts = run_replica(model, n, steps, seed, 0)?;
    let kernel = model.exact_kernel(n)?;
    SimulationReport::new(&counts, &kernel, seed, DEFAULT_BAND)
}

/// Samples the Markov chain directly from `kernel`, starting in its
/// stationary law. A self-consistency oracle for the comparison logic.
pub fn simulate_kernel_chain(
    kernel: &ArgminChainKernel<f64>,
    steps: u64,
    seed: u64,
) -> TransitionCounts {
    let mut rng = replica_rng(seed, 0);
    let draw = |weights: &[f64], rng: &mut rand_chacha::ChaCha8Rng| {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (j, w) in weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return j;
            }
        }
        // round-off leftover goes to the last state with mass
        weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
    };
    let mut counts = TransitionCounts::new(kernel.n());
    let mut state = draw(kernel.pi(), &mut rng);
    for _ in 0..steps {
        let next = draw(kernel.row(state), &mut rng);
        counts.record(state, next);
        state = next;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub row: usize,
    pub col: usize,
    pub observed: f64,
    pub exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub band: f64,
    pub tv_pass: bool,
    pub rows_pass: bool,
    pub failed_cells: Vec<CellFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub steps: u64,
    pub pi_hat: Vec<f64>,
    /// Row-major.
    #[serde(rename = "P_hat")]
    pub p_hat: Vec<f64>,
    pub row_counts: Vec<u64>,
    pub tv_pi: f64,
    pub max_row_dev: f64,
    pub support_violations: u64,
    pub seed: u64,
    pub verdict: Verdict,
}

impl SimulationReport {
    pub fn new(
        counts: &TransitionCounts,
        kernel: &ArgminChainKernel<f64>,
        seed: u64,
        band: f64,
    ) -> Result<Self> {
        let mut report = Self {
            n: counts.n,
            steps: counts.steps,
            pi_hat: counts.pi_hat(),
            p_hat: counts.p_hat(),
            row_counts: counts.state.clone(),
            tv_pi: 0.0,
            max_row_dev: 0.0,
            support_violations: counts.support_violations,
            seed,
            verdict: Verdict {
                pass: false,
                band,
                tv_pass: false,
                rows_pass: false,
                failed_cells: Vec::new(),
            },
        };
        let (tv, dev) = distances(&report, kernel)?;
        report.tv_pi = tv;
        report.max_row_dev = dev;
        report.verdict = empirical_vs_exact(&report, kernel, band)?;
        Ok(report)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }

    /// Same `row,col,value` layout as the exact kernel table.
    pub fn write_transition_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_matrix_csv(self.n + 1, &self.p_hat, writer)
    }

    pub fn write_pi_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_vector_csv(&self.pi_hat, writer)
    }
}

fn distances(report: &SimulationReport, kernel: &ArgminChainKernel<f64>) -> Result<(f64, f64)> {
    if report.n != kernel.n() {
        return Err(Error::DimensionMismatch(format!(
            "report has N={}, kernel has N={}",
            report.n,
            kernel.n()
        )));
    }
    let size = report.n + 1;
    let tv = 0.5
        * report
            .pi_hat
            .iter()
            .zip(kernel.pi())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
    let mut dev: f64 = 0.0;
    for i in (0..size).filter(|&i| report.row_counts[i] >= MIN_ROW_VISITS) {
        for j in 0..size {
            dev = dev.max((report.p_hat[i * size + j] - kernel.p(i, j)).abs());
        }
    }
    Ok((tv, dev))
}

/// Pass iff the stationary TV distance and every entry of rows with at
/// least [`MIN_ROW_VISITS`] visits are within `band`.
pub fn empirical_vs_exact(
    report: &SimulationReport,
    kernel: &ArgminChainKernel<f64>,
    band: f64,
) -> Result<Verdict> {
    let (tv, _) = distances(report, kernel)?;
    let size = report.n + 1;
    let mut failed_cells = Vec::new();
    for i in (0..size).filter(|&i| report.row_counts[i] >= MIN_ROW_VISITS) {
        for j in 0..size {
            let observed = report.p_hat[i * size + j];
            let exact = *kernel.p(i, j);
            if (observed - exact).abs() > band {
                failed_cells.push(CellFailure {
                    row: i,
                    col: j,
                    observed,
                    exact,
                });
            }
        }
    }
    let tv_pass = tv <= band;
    let rows_pass = failed_cells.is_empty();
    Ok(Verdict {
        pass: tv_pass && rows_pass,
        band,
        tv_pass,
        rows_pass,
        failed_cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_sequence() {
        // S = 0, -1, 1, -2, 0 with N = 1
        let seq = argmin_sequence(&[-1.0, 2.0, -3.0, 2.0], 1);
        assert_eq!(seq, vec![1, 0, 1, 0]);
        // N = 2: windows (0,-1,1) (-1,1,-2) (1,-2,0)
        let seq = argmin_sequence(&[-1.0, 2.0, -3.0, 2.0], 2);
        assert_eq!(seq, vec![1, 2, 1]);
        // ties go to the latest index
        assert_eq!(argmin_sequence(&[1.0, -1.0], 2), vec![2]);
    }

    #[test]
    fn warmup_is_discarded() {
        let inc = [-1.0, 2.0, -3.0, 2.0, 1.0];
        // N = 1 sequence: 1,0,1,0,0 ; transitions (1,0),(0,1),(1,0),(0,0)
        let c = count_transitions(inc, 1, 3).unwrap();
        assert_eq!(c.steps, 3);
        assert_eq!(c.transition, vec![1, 1, 1, 0]);
        assert!(count_transitions(inc, 1, 10).is_err());
    }

    #[test]
    fn kernel_chain_self_consistency() {
        let k = theta_kernel(0.3, 4).unwrap();
        let counts = simulate_kernel_chain(&k, 200_000, 9);
        let report = SimulationReport::new(&counts, &k, 9, 0.01).unwrap();
        assert!(report.verdict.pass, "{:?}", report.verdict);
        assert_eq!(report.support_violations, 0);
    }

    #[test]
    fn band_one_always_passes() {
        let k = theta_kernel(0.3, 3).unwrap();
        let wrong = theta_kernel(0.7, 3).unwrap();
        let counts = simulate_kernel_chain(&k, 20_000, 1);
        let report = SimulationReport::new(&counts, &wrong, 1, 1.0).unwrap();
        assert!(report.verdict.pass);
        let strict = empirical_vs_exact(&report, &wrong, 0.01).unwrap();
        assert!(!strict.pass);
        assert!(!strict.failed_cells.is_empty());
    }

    #[test]
    fn mismatched_n_rejected() {
        let k = theta_kernel(0.5, 3).unwrap();
        let counts = simulate_kernel_chain(&k, 1000, 1);
        let report = SimulationReport::new(&counts, &k, 1, 0.01).unwrap();
        let other = theta_kernel(0.5, 4).unwrap();
        assert!(matches!(
            empirical_vs_exact(&report, &other, 0.01),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn replicas_are_deterministic() {
        let a = run_replicas(&WalkModel::Ssrw, 3, 5_000, 4, 77).unwrap();
        let b = run_replicas(&WalkModel::Ssrw, 3, 5_000, 4, 77).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.steps, 20_000);
        assert_eq!(a.support_violations, 0);
    }
}
