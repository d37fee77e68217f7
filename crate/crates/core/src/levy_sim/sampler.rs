//! Chambers–Mallows–Stuck sampling of strictly stable variates.
//!
//! Scale convention: `E exp(iuX) = exp(-|u|^α (1 - iβ sign(u) tan(πα/2)))`,
//! so `α = 2` is `N(0, 2)` and `α = 1, β = 0` is standard Cauchy. The scale
//! never matters for argmin laws.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::stable::StableLaw;

#[derive(Debug, Clone, Copy)]
enum Method {
    Gaussian,
    Cauchy,
    Cms {
        alpha: f64,
        /// `arctan(β tan(πα/2)) / α`
        shift: f64,
        /// `(1 + β² tan²(πα/2))^{1/(2α)}`
        scale: f64,
    },
}

/// Precomputed constants for repeated draws from one law.
#[derive(Debug, Clone, Copy)]
pub struct StableSampler {
    law: StableLaw<f64>,
    method: Method,
}

impl StableSampler {
    pub fn new(law: StableLaw<f64>) -> Result<Self> {
        let (alpha, beta) = (law.alpha(), law.beta());
        let method = if alpha == 2.0 {
            Method::Gaussian
        } else if alpha == 1.0 {
            if beta != 0.0 {
                return Err(Error::SkewedCauchyUnsupported);
            }
            Method::Cauchy
        } else {
            let zeta = beta * (PI * alpha / 2.0).tan();
            Method::Cms {
                alpha,
                shift: zeta.atan() / alpha,
                scale: (1.0 + zeta * zeta).powf(1.0 / (2.0 * alpha)),
            }
        };
        Ok(Self { law, method })
    }

    pub fn law(&self) -> &StableLaw<f64> {
        &self.law
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.method {
            Method::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                SQRT_2 * z
            }
            Method::Cauchy => uniform_angle(rng).tan(),
            Method::Cms {
                alpha,
                shift,
                scale,
            } => {
                let v = uniform_angle(rng);
                let w: f64 = Exp1.sample(rng);
                let arg = alpha * (v + shift);
                scale * arg.sin() / v.cos().powf(1.0 / alpha)
                    * ((v - arg).cos() / w).powf((1.0 - alpha) / alpha)
            }
        }
    }
}

/// Uniform on the open interval `(-π/2, π/2)`.
fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let v = (rng.random::<f64>() - 0.5) * PI;
        if v.abs() < FRAC_PI_2 {
            return v;
        }
    }
}

/// One stable variate from `law`.
pub fn sample_stable_increment<R: Rng + ?Sized>(law: &StableLaw<f64>, rng: &mut R) -> Result<f64> {
    Ok(StableSampler::new(*law)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replica_rng;

    fn positive_fraction(alpha: f64, beta: f64, draws: usize) -> f64 {
        let sampler = StableSampler::new(StableLaw::new(alpha, beta).unwrap()).unwrap();
        let mut rng = replica_rng(42, 0);
        let pos = (0..draws)
            .filter(|_| sampler.sample(&mut rng) > 0.0)
            .count();
        pos as f64 / draws as f64
    }

    #[test]
    fn positivity_matches_rho() {
        assert!((positive_fraction(1.5, 1.0, 200_000) - 1.0 / 3.0).abs() < 0.005);
        assert!((positive_fraction(1.0, 0.0, 200_000) - 0.5).abs() < 0.005);
        assert!(
            (positive_fraction(0.8, 0.5, 200_000) - crate::stable::positivity(0.8, 0.5).unwrap())
                .abs()
                < 0.005
        );
    }

    #[test]
    fn gaussian_variance_is_two() {
        let sampler = StableSampler::new(StableLaw::new(2.0, 0.0).unwrap()).unwrap();
        let mut rng = replica_rng(3, 0);
        let n = 200_000;
        let var = (0..n)
            .map(|_| sampler.sample(&mut rng).powi(2))
            .sum::<f64>()
            / n as f64;
        assert!((var - 2.0).abs() < 0.03, "{var}");
    }

    #[test]
    fn symmetric_cms_has_unit_scale() {
        // CMS near α = 2 must approach the N(0, 2) fast path
        let sampler = StableSampler::new(StableLaw::new(1.999, 0.0).unwrap()).unwrap();
        let mut rng = replica_rng(5, 0);
        let n = 100_000;
        let inside = (0..n)
            .filter(|_| sampler.sample(&mut rng).abs() < SQRT_2)
            .count();
        // P(|N(0,2)| < √2) = P(|Z| < 1) ≈ 0.6827
        assert!((inside as f64 / n as f64 - 0.6827).abs() < 0.01);
    }
}
