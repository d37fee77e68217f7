//! `argmin` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod model;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use argmin_core::chain::{build_kernel, ssrw_kernel, symmetric_continuous_kernel, theta_kernel};
use argmin_core::ladder::{closed_form_ssrw, closed_form_theta, persistence_from_signs};
use argmin_core::levy_sim::{
    empirical_invariant, empirical_transition, run_experiment, LevyConfig,
};
use argmin_core::rng::DEFAULT_SEED;
use argmin_core::stable::semigroup;
use argmin_core::walk_sim::{run_replicas, SimulationReport, DEFAULT_BAND};
use argmin_core::{Kernel, Ladder, Signs};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use model::Model;
use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(
    name = "argmin",
    version,
    about = "Argmin chains of random walks and argmin processes of stable Lévy processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output file; defaults to $ARGMIN_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Persistence sequences and first-passage law up to horizon M.
    Ladder {
        #[arg(long, help = model::SYNTAX)]
        model: Model,
        #[arg(long = "M", default_value_t = 20)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Stationary law and transition matrix of the window-N argmin chain.
    Exact {
        #[arg(long, help = model::SYNTAX)]
        model: Model,
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Density table and atom of the argmin semigroup Q_t(x, ·).
    Kernel {
        /// Any model with a positivity parameter, e.g. stable:1.5,1.
        #[arg(long, conflicts_with = "rho", required_unless_present = "rho")]
        model: Option<Model>,
        /// Positivity parameter, instead of --model.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        x: f64,
        /// Midpoint grid of this many y values in (0, 1).
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo argmin chain of a random walk against its exact kernel.
    SimWalk {
        /// ssrw, gaussian or stable:ALPHA,BETA.
        #[arg(long)]
        model: Model,
        #[arg(long = "N")]
        n: usize,
        /// Transitions per replica.
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        replicas: u64,
        #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
        seed: u64,
        /// Allowed |P_hat - P| per cell.
        #[arg(long, default_value_t = DEFAULT_BAND)]
        band: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Discretized stable paths: invariant law and transition atom of α̂.
    SimLevy {
        /// gaussian (α = 2) or stable:ALPHA,BETA.
        #[arg(long)]
        model: Model,
        #[arg(long, default_value_t = 1e-4)]
        mesh: f64,
        #[arg(long, default_value_t = 200.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1)]
        replicas: u64,
        #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
        seed: u64,
        /// Time between invariant samples.
        #[arg(long, default_value_t = 2.0)]
        spacing: f64,
        /// Lag t of the transition pairs.
        #[arg(long, default_value_t = 0.3)]
        lag: f64,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Runs a property suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long = "n-max", default_value_t = 50)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// Accepts decimal or `0x` hexadecimal.
fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("bad seed `{s}`: {e}"))
}

/// Ends the run with exit status 1 without counting as a config error.
#[derive(Debug)]
struct ChecksFailed(usize);

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} check(s) failed", self.0)
    }
}

impl std::error::Error for ChecksFailed {}

/// Config problem: exit status 2.
#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

fn is_config_error(e: &anyhow::Error) -> bool {
    use argmin_core::Error as E;
    e.chain().any(|c| {
        c.is::<ConfigError>()
            || matches!(
                c.downcast_ref::<E>(),
                Some(
                    E::InvalidParameter(_)
                        | E::InvalidSignProbabilities { .. }
                        | E::HorizonTooShort { .. }
                        | E::UnsupportedModel(_)
                        | E::SubordinatorExcluded(_)
                        | E::SkewedCauchyUnsupported
                        | E::EnumerationTooLarge(_)
                        | E::SeriesTooShort { .. }
                        | E::DimensionMismatch(_)
                )
            )
    })
}

fn read_signs(path: &PathBuf) -> Result<Signs> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Signs::from_json(file).with_context(|| format!("reading {}", path.display()))
}

fn ladder_of(model: &Model, m: usize) -> Result<Ladder> {
    Ok(match model {
        Model::Theta(t) => closed_form_theta(*t, m)?,
        Model::Ssrw => closed_form_ssrw(m),
        Model::Symmetric | Model::Gaussian => closed_form_theta(0.5, m)?,
        Model::Stable { .. } => closed_form_theta(model.rho().expect("stable law has ρ"), m)?,
        Model::Signs(path) => {
            let signs = read_signs(path)?;
            if signs.horizon() < m {
                return Err(config(format!(
                    "{} covers n <= {}, fewer than M = {m}",
                    path.display(),
                    signs.horizon()
                )));
            }
            persistence_from_signs(&signs)?
        }
    })
}

fn kernel_of(model: &Model, n: usize) -> Result<Kernel> {
    Ok(match model {
        Model::Theta(t) => theta_kernel(*t, n)?,
        Model::Ssrw => ssrw_kernel(n)?,
        Model::Symmetric => symmetric_continuous_kernel(n)?,
        Model::Gaussian | Model::Stable { .. } => theta_kernel(model.rho().expect("has ρ"), n)?,
        Model::Signs(path) => build_kernel(&persistence_from_signs(&read_signs(path)?)?, n)?,
    })
}

fn cmd_ladder(model: &Model, m: usize, common: &Common) -> Result<()> {
    let format = common.format.unwrap_or(Format::Csv);
    let ls = ladder_of(model, m)?;
    let out = Output::resolve(common.out.clone(), "ladder", format)?;
    match format {
        Format::Csv => out.write(|w| ls.write_csv(w)),
        Format::Json => out.write(|w| {
            let doc = json!({
                "model": model.to_string(),
                "p": ls.p(),
                "p_tilde": ls.p_tilde(),
                "p_dual": ls.p_dual(),
                "tau": ls.tau(),
            });
            output::json(&doc, w)
        }),
    }
}

fn cmd_exact(model: &Model, n: usize, common: &Common) -> Result<()> {
    let format = common.format.unwrap_or(Format::Csv);
    let kernel = kernel_of(model, n)?;
    let out = Output::resolve(common.out.clone(), &format!("exact_N{n}"), format)?;
    match format {
        Format::Csv => {
            out.write(|w| kernel.write_transition_csv(w))?;
            out.write_sibling("pi", |w| kernel.write_pi_csv(w))
        }
        Format::Json => out.write(|w| kernel.write_json(w)),
    }
}

fn unit_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| (k as f64 + 0.5) / points as f64)
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_kernel(
    model: Option<&Model>,
    rho: Option<f64>,
    t: f64,
    x: f64,
    points: usize,
    common: &Common,
) -> Result<()> {
    let rho = match (model, rho) {
        (_, Some(r)) => r,
        (Some(m), None) => m
            .rho()
            .ok_or_else(|| config(format!("model {m} has no positivity parameter")))?,
        (None, None) => return Err(config("need --model or --rho")),
    };
    if points == 0 {
        return Err(config("--points must be positive"));
    }
    let q = semigroup(rho, t, x)?;
    let ys = unit_grid(points);
    let format = common.format.unwrap_or(Format::Csv);
    let out = Output::resolve(common.out.clone(), "kernel", format)?;
    let atom = q.atom();
    match format {
        Format::Csv => {
            out.write(|w| q.write_density_csv(&ys, w))?;
            out.write_sibling("atom", |w| {
                writeln!(w, "location,weight")?;
                if let Some(a) = atom {
                    writeln!(
                        w,
                        "{},{}",
                        argmin_core::io::fmt_f64(a.location),
                        argmin_core::io::fmt_f64(a.weight)
                    )?;
                }
                Ok(())
            })
        }
        Format::Json => out.write(|w| {
            let q_values: Vec<f64> = ys.iter().map(|&y| q.density(y)).collect();
            let doc = json!({
                "rho": rho, "t": t, "x": x,
                "branch": q.branch(),
                "atom": atom,
                "y": ys,
                "q": q_values,
            });
            output::json(&doc, w)
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sim_walk(
    model: &Model,
    n: usize,
    steps: u64,
    replicas: u64,
    seed: u64,
    band: f64,
    common: &Common,
) -> Result<()> {
    let walk = model.walk().ok_or_else(|| {
        config(format!(
            "no increment sampler for {model}; use ssrw, gaussian or stable:A,B"
        ))
    })?;
    if replicas == 0 {
        return Err(config("--replicas must be positive"));
    }
    if !(band > 0.0) {
        return Err(config("--band must be positive"));
    }
    let counts = run_replicas(&walk, n, steps, replicas, seed)?;
    let kernel = walk.exact_kernel(n)?;
    let report = SimulationReport::new(&counts, &kernel, seed, band)?;
    if !report.verdict.pass {
        log::warn!(
            "{} N={n}: empirical kernel outside tolerance (TV {:.4}, max row deviation {:.4})",
            walk.label(),
            report.tv_pi,
            report.max_row_dev
        );
    }
    let format = common.format.unwrap_or(Format::Json);
    let out = Output::resolve(common.out.clone(), &format!("sim_walk_N{n}"), format)?;
    match format {
        Format::Json => out.write(|w| report.write_json(&mut *w).and_then(|_| Ok(writeln!(w)?))),
        Format::Csv => {
            out.write(|w| report.write_transition_csv(w))?;
            out.write_sibling("pi", |w| report.write_pi_csv(w))
        }
    }
}

#[derive(Serialize)]
struct LevyReport {
    config: LevyConfig,
    rho: f64,
    rho_hat: f64,
    increments: u64,
    structure_fraction: f64,
    invariant: argmin_core::levy_sim::InvariantReport,
    transition: argmin_core::levy_sim::TransitionReport,
}

fn cmd_sim_levy(model: &Model, cfg: LevyConfig, bins: usize, common: &Common) -> Result<()> {
    let law = cfg.law()?;
    if model.law().is_none() {
        return Err(config(format!(
            "sim-levy needs gaussian or stable:A,B, got {model}"
        )));
    }
    if cfg.replicas == 0 {
        return Err(config("--replicas must be positive"));
    }
    let summary = run_experiment(&cfg)?;
    let rho = law.rho();
    let invariant =
        empirical_invariant(&summary.invariant, rho, bins, cfg.spacing, Some(cfg.mesh))?;
    let x_bins: Vec<(f64, f64)> = (0..10)
        .map(|k| (k as f64 / 10.0, (k + 1) as f64 / 10.0))
        .collect();
    let probes: Vec<f64> = (1..10).map(|k| k as f64 / 10.0).collect();
    let transition =
        empirical_transition(&summary.pairs, rho, cfg.lag, cfg.mesh, &x_bins, &probes)?;
    let report = LevyReport {
        config: cfg,
        rho,
        rho_hat: summary.rho_hat(),
        increments: summary.increments,
        structure_fraction: summary.structure_fraction(),
        invariant,
        transition,
    };
    let format = common.format.unwrap_or(Format::Json);
    let out = Output::resolve(common.out.clone(), "sim_levy", format)?;
    match format {
        Format::Json => out.write(|w| output::json(&report, w)),
        Format::Csv => {
            out.write(|w| report.invariant.write_csv(w))?;
            out.write_sibling("transition", |w| report.transition.write_csv(w))
        }
    }
}

fn cmd_verify(suite: verify::Suite, n_max: usize, common: &Common) -> Result<()> {
    if n_max == 0 {
        return Err(config("--n-max must be positive"));
    }
    let checks = verify::run(suite, n_max);
    let failed = checks.iter().filter(|c| !c.pass).count();
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        match &c.error {
            Some(e) => eprintln!("{status} {:<12} {}: {e}", c.suite, c.name),
            None => eprintln!(
                "{status} {:<12} {}: {:.3e} (<= {:.0e})",
                c.suite, c.name, c.value, c.tolerance
            ),
        }
    }
    if common.out.is_some() || common.format == Some(Format::Json) {
        let out = Output::resolve(common.out.clone(), "verify", Format::Json)?;
        out.write(|w| output::json(&checks, w))?;
    }
    if failed > 0 {
        return Err(ChecksFailed(failed).into());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ladder { model, m, common } => cmd_ladder(&model, m, &common),
        Command::Exact { model, n, common } => cmd_exact(&model, n, &common),
        Command::Kernel {
            model,
            rho,
            t,
            x,
            points,
            common,
        } => cmd_kernel(model.as_ref(), rho, t, x, points, &common),
        Command::SimWalk {
            model,
            n,
            steps,
            replicas,
            seed,
            band,
            common,
        } => cmd_sim_walk(&model, n, steps, replicas, seed, band, &common),
        Command::SimLevy {
            model,
            mesh,
            horizon,
            replicas,
            seed,
            spacing,
            lag,
            bins,
            common,
        } => {
            let law = match model.law() {
                Some(l) => l,
                None => bail!(config(format!(
                    "sim-levy needs gaussian or stable:A,B, got {model}"
                ))),
            };
            let cfg = LevyConfig {
                alpha: law.alpha(),
                beta: law.beta(),
                mesh,
                horizon,
                replicas,
                seed,
                spacing,
                lag,
            };
            cmd_sim_levy(&model, cfg, bins, &common)
        }
        Command::Verify {
            suite,
            n_max,
            common,
        } => cmd_verify(suite, n_max, &common),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.chain().any(|c| c.is::<ChecksFailed>()) => {
            eprintln!("argmin: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("argmin: {e:#}");
            ExitCode::from(if is_config_error(&e) { 2 } else { 1 })
        }
    }
}
