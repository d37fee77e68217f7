//! Strictly stable laws and the transition semigroup of their argmin process.
//!
//! Everything about the argmin process depends on the law only through the
//! positivity parameter `ρ = P(X_1 > 0)`; `α` and `β` matter for simulation.

mod semigroup;
mod validate;

pub use semigroup::{semigroup, semigroup_in_branch, Atom, Branch, SemigroupEvaluation};
pub use validate::{
    chapman_kolmogorov_residual, default_y_grid, kernel_mass, stationarity_residual, Residuals,
};

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_piece_nodes, Piece, Tolerance};
use crate::scalar::Real;

/// Stable law in the `(α, β)` parametrization with its positivity parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableLaw<T> {
    alpha: T,
    beta: T,
    rho: T,
}

impl<T: Real> StableLaw<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let rho = positivity(alpha, beta)?;
        Ok(Self { alpha, beta, rho })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn rho(&self) -> T {
        self.rho
    }
}

/// `ρ = 1/2 + (πα)^{-1} arctan(β tan(πα/2))`.
///
/// Laws with `ρ ∈ {0, 1}` (subordinators and their negatives) are rejected,
/// and so is `α = 1` with skew, where the formula has no meaning.
pub fn positivity<T: Real>(alpha: T, beta: T) -> Result<T> {
    if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 2], got {alpha:?}"
        )));
    }
    if !(beta >= -T::one() && beta <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in [-1, 1], got {beta:?}"
        )));
    }
    let half = T::lit(0.5);
    if alpha == T::one() {
        if beta != T::zero() {
            return Err(Error::SkewedCauchyUnsupported);
        }
        return Ok(half);
    }
    if alpha == T::lit(2.0) {
        return Ok(half);
    }
    if alpha < T::one() && Float::abs(beta) == T::one() {
        let rho = if beta > T::zero() {
            T::one()
        } else {
            T::zero()
        };
        return Err(Error::SubordinatorExcluded(rho.to_f64_lossy()));
    }
    let pi = T::PI();
    let rho = half + Float::atan(beta * Float::tan(pi * alpha / T::lit(2.0))) / (pi * alpha);
    let eps = T::lit(1e-12);
    if rho <= eps || rho >= T::one() - eps {
        return Err(Error::SubordinatorExcluded(rho.to_f64_lossy()));
    }
    Ok(rho)
}

pub(crate) fn check_rho<T: Real>(rho: T) -> Result<()> {
    if rho > T::zero() && rho < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "rho must lie in (0, 1), got {rho:?}"
        )))
    }
}

fn check_unit_open<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in (0, 1), got {v:?}"
        )))
    }
}

/// `sin(πρ)/π`, the normalizing constant of the generalized arcsine law.
pub(crate) fn arcsine_constant<T: Real>(rho: T) -> T {
    Float::sin(T::PI() * rho) / T::PI()
}

/// Unchecked `f(y) = sin(πρ)/π · y^{-ρ} (1-y)^{ρ-1}`; zero off `(0, 1)`.
pub(crate) fn arcsine_density_raw<T: Real>(rho: T, y: T) -> T {
    arcsine_density_split(rho, y, T::one() - y)
}

/// `f` with `1 - y` supplied by the caller, who may know it more precisely.
pub(crate) fn arcsine_density_split<T: Real>(rho: T, y: T, one_minus_y: T) -> T {
    if !(y > T::zero() && one_minus_y > T::zero()) {
        return T::zero();
    }
    arcsine_constant(rho) * Float::powf(y, -rho) * Float::powf(one_minus_y, rho - T::one())
}

/// Generalized arcsine density, the invariant law of the argmin process.
pub fn arcsine_density<T: Real>(rho: T, y: T) -> Result<T> {
    check_rho(rho)?;
    check_unit_open("y", y)?;
    Ok(arcsine_density_raw(rho, y))
}

/// CDF of the generalized arcsine law, by quadrature from the nearer end.
pub fn arcsine_cdf<T: Real>(rho: T, y: T) -> Result<T> {
    check_rho(rho)?;
    if y <= T::zero() {
        return Ok(T::zero());
    }
    if y >= T::one() {
        return Ok(T::one());
    }
    let tol = Tolerance::default();
    let f = |n: crate::quadrature::Node<T>| arcsine_density_split(rho, n.y, n.one_minus());
    if y <= T::lit(0.5) {
        let q = integrate_piece_nodes(f, &Piece::new(T::zero(), y, -rho, T::zero()), &tol)?;
        Ok(q.value)
    } else {
        let q =
            integrate_piece_nodes(f, &Piece::new(y, T::one(), T::zero(), rho - T::one()), &tol)?;
        Ok(T::one() - q.value)
    }
}

/// Rate `(1-ρ)/(1-x)` at which the argmin jumps to the top of the window.
pub fn jump_rate<T: Real>(rho: T, x: T) -> Result<T> {
    check_rho(rho)?;
    check_unit_open("x", x)?;
    Ok((T::one() - rho) / (T::one() - x))
}
