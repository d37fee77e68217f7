//! Discretized stable Lévy paths and their argmin process.
//!
//! A path on mesh `h` is a random walk with stable steps scaled by
//! `h^{1/α}`. Its argmin process at grid time `t` is the last argmin of the
//! `1/h + 1` grid points covering `[t, t+1]`, times `h`.

mod sampler;
mod stats;

pub use sampler::{sample_stable_increment, StableSampler};
pub use stats::{
    empirical_invariant, empirical_transition, ks_statistic, ks_statistic_on_mesh, BinComparison,
    CdfProbe, HistogramBin, InvariantReport, TransitionReport,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::replica_rng;
use crate::stable::StableLaw;
use crate::window::AnchoredWalk;

/// Grid values of one simulated path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid {
    pub mesh: f64,
    pub horizon: f64,
    /// `S` at `0, h, 2h, ..., T`.
    pub values: Vec<f64>,
}

fn grid_steps(span: f64, mesh: f64) -> usize {
    (span / mesh).round() as usize
}

fn check_mesh(mesh: f64, horizon: f64) -> Result<()> {
    if !(mesh > 0.0 && mesh < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "mesh must lie in (0, 1), got {mesh}"
        )));
    }
    if !(horizon >= 1.0 + mesh) {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} too short: need at least 1 + mesh"
        )));
    }
    Ok(())
}

/// Simulates `S` on `[0, T]` with stream `replica` of `seed`.
pub fn simulate_path(
    law: &StableLaw<f64>,
    mesh: f64,
    horizon: f64,
    seed: u64,
    replica: u64,
) -> Result<PathGrid> {
    if !(mesh > 0.0 && horizon > 0.0) {
        return Err(Error::InvalidParameter(
            "mesh and horizon must be positive".into(),
        ));
    }
    let sampler = StableSampler::new(*law)?;
    let scale = mesh.powf(1.0 / law.alpha());
    let mut rng = replica_rng(seed, replica);
    let steps = grid_steps(horizon, mesh);
    let mut values = Vec::with_capacity(steps + 1);
    let mut s = 0.0;
    values.push(s);
    for _ in 0..steps {
        s += scale * sampler.sample(&mut rng);
        values.push(s);
    }
    Ok(PathGrid {
        mesh,
        horizon,
        values,
    })
}

/// `(t, α̂_t)` for every grid time `t` with a full window inside the path.
/// Both window ends are included and ties keep the latest grid point.
pub fn extract_argmin_path(path: &PathGrid) -> Result<Vec<(f64, f64)>> {
    check_mesh(path.mesh, path.horizon)?;
    let width = grid_steps(1.0, path.mesh) + 1;
    if path.values.len() < width {
        return Err(Error::InvalidParameter(
            "path shorter than one window".into(),
        ));
    }
    let mut window = crate::window::WindowArgmin::new(width);
    let mut out = Vec::with_capacity(path.values.len() + 1 - width);
    for &v in &path.values {
        if let Some(offset) = window.push(v) {
            let start = out.len();
            out.push((start as f64 * path.mesh, offset as f64 * path.mesh));
        }
    }
    Ok(out)
}

/// Settings of a replicated path experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevyConfig {
    pub alpha: f64,
    pub beta: f64,
    pub mesh: f64,
    pub horizon: f64,
    pub replicas: u64,
    pub seed: u64,
    /// Gap between invariant samples; `≥ 2` keeps them nearly independent.
    pub spacing: f64,
    /// Lag `t` of the transition pairs `(α̂_s, α̂_{s+t})`.
    pub lag: f64,
}

impl LevyConfig {
    pub fn law(&self) -> Result<StableLaw<f64>> {
        StableLaw::new(self.alpha, self.beta)
    }
}

/// What one replica contributes; merging is concatenation and addition.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReplicaSummary {
    pub invariant: Vec<f64>,
    pub pairs: Vec<(f64, f64)>,
    pub increments: u64,
    pub positive_increments: u64,
    /// Steps taken from a state `> 0` (renewals from 0 are excluded).
    pub drift_steps: u64,
    /// Those among them that slid down one mesh or jumped to the top.
    pub drift_steps_ok: u64,
}

impl ReplicaSummary {
    pub fn merge(&mut self, other: &Self) {
        self.invariant.extend_from_slice(&other.invariant);
        self.pairs.extend_from_slice(&other.pairs);
        self.increments += other.increments;
        self.positive_increments += other.positive_increments;
        self.drift_steps += other.drift_steps;
        self.drift_steps_ok += other.drift_steps_ok;
    }

    /// Fraction of positive increments.
    pub fn rho_hat(&self) -> f64 {
        self.positive_increments as f64 / self.increments.max(1) as f64
    }

    pub fn structure_fraction(&self) -> f64 {
        if self.drift_steps == 0 {
            1.0
        } else {
            self.drift_steps_ok as f64 / self.drift_steps as f64
        }
    }
}

/// Streams one path through the window without storing it.
pub fn run_replica(cfg: &LevyConfig, replica: u64) -> Result<ReplicaSummary> {
    let law = cfg.law()?;
    check_mesh(cfg.mesh, cfg.horizon)?;
    if !(cfg.lag > 0.0) || !(cfg.spacing > 0.0) {
        return Err(Error::InvalidParameter(
            "lag and spacing must be positive".into(),
        ));
    }
    let sampler = StableSampler::new(law)?;
    let scale = cfg.mesh.powf(1.0 / law.alpha());
    let mut rng = replica_rng(cfg.seed, replica);

    let top = grid_steps(1.0, cfg.mesh);
    let total = grid_steps(cfg.horizon, cfg.mesh);
    let spacing = grid_steps(cfg.spacing, cfg.mesh).max(1);
    let lag = grid_steps(cfg.lag, cfg.mesh).max(1);
    let pair_spacing = grid_steps(cfg.spacing + cfg.lag, cfg.mesh).max(1);

    let mut walk = AnchoredWalk::new(top + 1);
    let mut out = ReplicaSummary::default();
    let mut time = 0usize;
    let mut previous: Option<usize> = None;
    let mut pending: Option<(usize, f64)> = None;
    for _ in 0..total {
        let x = scale * sampler.sample(&mut rng);
        out.increments += 1;
        if x > 0.0 {
            out.positive_increments += 1;
        }
        let Some(offset) = walk.step(x) else {
            continue;
        };
        let value = offset as f64 * cfg.mesh;
        if time.is_multiple_of(spacing) {
            out.invariant.push(value);
        }
        if time.is_multiple_of(pair_spacing) {
            pending = Some((time + lag, value));
        }
        if let Some((due, start)) = pending {
            if due == time {
                out.pairs.push((start, value));
                pending = None;
            }
        }
        if let Some(prev) = previous {
            if prev > 0 {
                out.drift_steps += 1;
                if offset + 1 == prev || offset == top {
                    out.drift_steps_ok += 1;
                }
            }
        }
        previous = Some(offset);
        time += 1;
    }
    Ok(out)
}

/// Runs `cfg.replicas` paths in parallel; merged in replica order, so the
/// result does not depend on scheduling.
pub fn run_experiment(cfg: &LevyConfig) -> Result<ReplicaSummary> {
    let parts: Vec<ReplicaSummary> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| run_replica(cfg, r))
        .collect::<Result<_>>()?;
    let mut total = ReplicaSummary::default();
    for part in &parts {
        total.merge(part);
    }
    Ok(total)
}
