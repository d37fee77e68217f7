//! Named property suites for `argmin verify`.

use argmin_core::chain::{
    brute_force_ssrw, build_kernel, ssrw_kernel, symmetric_continuous_kernel, theta_kernel,
    verify_lemma_identities, LemmaModel,
};
use argmin_core::ladder::closed_form_theta;
use argmin_core::stable::{
    chapman_kolmogorov_residual, default_y_grid, kernel_mass, stationarity_residual,
};
use argmin_core::{ExactKernel, Rational};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Lemmas,
    Kernels,
    Mass,
    Stationarity,
    Ck,
    All,
}

/// Largest enumerated window; 2^(N+1) paths each.
const BRUTE_FORCE_MAX: usize = 12;
const RHOS: [f64; 3] = [1.0 / 3.0, 0.5, 2.0 / 3.0];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// Worst residual; `NaN` when the check errored.
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn new(
        suite: &'static str,
        name: impl Into<String>,
        tolerance: f64,
        result: argmin_core::Result<f64>,
    ) -> Self {
        let (value, error) = match result {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        Self {
            suite,
            name: name.into(),
            value,
            tolerance,
            pass: error.is_none() && value <= tolerance,
            error,
        }
    }
}

fn thetas() -> impl Iterator<Item = f64> {
    (1..=9).map(|k| k as f64 / 10.0)
}

fn max_of<I: IntoIterator<Item = argmin_core::Result<f64>>>(items: I) -> argmin_core::Result<f64> {
    items.into_iter().try_fold(0.0f64, |m, r| Ok(m.max(r?)))
}

fn lemmas(n_max: usize) -> Vec<Check> {
    let mut models: Vec<(String, LemmaModel<f64>)> = thetas()
        .map(|t| (format!("theta:{t}"), LemmaModel::Theta(t)))
        .collect();
    models.push(("ssrw".into(), LemmaModel::Ssrw));
    models
        .into_iter()
        .map(|(name, m)| {
            Check::new(
                "lemmas",
                format!("{name}, N <= {n_max}"),
                1e-10,
                verify_lemma_identities(&m, n_max),
            )
        })
        .collect()
}

fn kernels(n_max: usize) -> Vec<Check> {
    let brute_max = n_max.min(BRUTE_FORCE_MAX);
    let exact = max_of((1..=brute_max).map(|n| {
        let closed: ExactKernel = ssrw_kernel(n)?;
        let brute = brute_force_ssrw(n)?.to_kernel::<Rational>()?;
        Ok(if closed == brute { 0.0 } else { 1.0 })
    }));
    let agree = max_of((1..=n_max).flat_map(|n| {
        thetas().map(move |theta| {
            let a = theta_kernel(theta, n)?;
            let b = build_kernel(&closed_form_theta(theta, n + 1)?, n)?;
            let mut gap = a.max_abs_diff(&b)?;
            if theta == 0.5 {
                gap = gap.max(a.max_abs_diff(&symmetric_continuous_kernel(n)?)?);
            }
            Ok(gap)
        })
    }));
    let stationary = max_of((1..=n_max).flat_map(|n| {
        thetas()
            .map(move |theta| theta_kernel(theta, n).map(|k| k.stationarity_residual()))
            .chain(std::iter::once(
                ssrw_kernel::<f64>(n).map(|k| k.stationarity_residual()),
            ))
    }));
    vec![
        Check::new(
            "kernels",
            format!("ssrw closed form == enumeration, N <= {brute_max}"),
            0.0,
            exact,
        ),
        Check::new(
            "kernels",
            format!("theta constructors agree, N <= {n_max}"),
            1e-12,
            agree,
        ),
        Check::new(
            "kernels",
            format!("|pi P - pi| max, N <= {n_max}"),
            1e-10,
            stationary,
        ),
    ]
}

fn mass() -> Vec<Check> {
    RHOS.iter()
        .map(|&rho| {
            let worst = max_of([0.1, 0.3, 0.7, 1.5].iter().flat_map(|&t| {
                [0.0, 0.25, 0.5, 0.75, 1.0]
                    .iter()
                    .map(move |&x| kernel_mass(rho, t, x).map(|m| (m - 1.0).abs()))
            }));
            Check::new("mass", format!("rho={rho:.4}, 20 (t,x)"), 1e-8, worst)
        })
        .collect()
}

fn stationarity() -> Vec<Check> {
    let ys = default_y_grid::<f64>();
    RHOS.iter()
        .flat_map(|&rho| {
            let ys = ys.clone();
            [0.1, 0.25, 0.3, 0.4, 0.7].into_iter().map(move |t| {
                Check::new(
                    "stationarity",
                    format!("rho={rho:.4}, t={t}"),
                    1e-6,
                    stationarity_residual(rho, t, &ys).map(|r| r.max),
                )
            })
        })
        .collect()
}

fn ck() -> Vec<Check> {
    let ys = default_y_grid::<f64>();
    let mut out = Vec::new();
    for rho in RHOS {
        for (s, t) in [(0.2, 0.2), (0.1, 0.5), (0.6, 0.6)] {
            let worst = max_of(
                [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0]
                    .iter()
                    .map(|&x| chapman_kolmogorov_residual(rho, s, t, x, &ys).map(|r| r.max)),
            );
            out.push(Check::new(
                "ck",
                format!("rho={rho:.4}, s={s}, t={t}"),
                1e-5,
                worst,
            ));
        }
    }
    out
}

pub fn run(suite: Suite, n_max: usize) -> Vec<Check> {
    match suite {
        Suite::Lemmas => lemmas(n_max),
        Suite::Kernels => kernels(n_max),
        Suite::Mass => mass(),
        Suite::Stationarity => stationarity(),
        Suite::Ck => ck(),
        Suite::All => [
            Suite::Lemmas,
            Suite::Kernels,
            Suite::Mass,
            Suite::Stationarity,
            Suite::Ck,
        ]
        .into_iter()
        .flat_map(|s| run(s, n_max))
        .collect(),
    }
}
