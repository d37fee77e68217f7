//! Quadrature checks of the semigroup.

use num_traits::Float;
use serde::Serialize;

use super::semigroup::{drift_weight, semigroup, Branch};
use super::{arcsine_constant, arcsine_density_raw, arcsine_density_split, check_rho};
use crate::error::Result;
use crate::quadrature::{integrate_pieces_nodes, Piece, Tolerance};
use crate::scalar::Real;

/// Pointwise residuals on a grid, serialized as `{grid, residuals, max}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals<T> {
    pub grid: Vec<T>,
    pub residuals: Vec<T>,
    pub max: T,
}

impl<T: Real> Residuals<T> {
    fn from_pairs(grid: Vec<T>, residuals: Vec<T>, extra: T) -> Self {
        let max = residuals.iter().fold(extra, |m, &r| Float::max(m, r));
        Self {
            grid,
            residuals,
            max,
        }
    }
}

/// `y = (2k-1)/40`, `k = 1..20`. Stays off the kinks `y = 1 - t` for the
/// usual values of `t`, where the atom term and the integral trade mass.
pub fn default_y_grid<T: Real>() -> Vec<T> {
    (1..=20)
        .map(|k| T::from_count(2 * k - 1) / T::lit(40.0))
        .collect()
}

/// Atom weight plus the integrated density of `Q_t(x, ·)`.
pub fn kernel_mass<T: Real>(rho: T, t: T, x: T) -> Result<T> {
    let q = semigroup(rho, t, x)?;
    Ok(q.atom_weight() + q.continuous_mass(&Tolerance::default())?.value)
}

/// Splits every piece at `at`, marking it as a cusp of exponent `e`.
fn split_all<T: Real>(pieces: Vec<Piece<T>>, at: T, e: T) -> Vec<Piece<T>> {
    pieces.iter().flat_map(|p| p.split(at, e)).collect()
}

/// Relative deviation of `(f Q_t)(y)` from `f(y)` on `ys`.
///
/// The atom of `Q_t(x, ·)` at `x - t` carries density `f(y+t)` times its
/// weight onto `y`, which is added to `∫ f(x) q_t(x, y) dx`.
pub fn stationarity_residual<T: Real>(rho: T, t: T, ys: &[T]) -> Result<Residuals<T>> {
    check_rho(rho)?;
    let (zero, one) = (T::zero(), T::one());
    let tol = Tolerance::default();
    let x_pieces = if t < one {
        vec![
            Piece::new(zero, t, -rho, rho),
            Piece::new(t, one, zero, rho - one),
        ]
    } else {
        vec![Piece::new(zero, one, -rho, rho - one)]
    };
    let mut residuals = Vec::with_capacity(ys.len());
    for &y in ys {
        let integral = integrate_pieces_nodes(
            |n| {
                let density = semigroup(rho, t, n.y).map_or(zero, |q| q.density(y));
                arcsine_density_split(rho, n.y, n.one_minus()) * density
            },
            &x_pieces,
            &tol,
        )?
        .value;
        let from_atom = if y + t <= one {
            // f(x) times the atom weight at x, simplified: finite up to x = 1
            let x = y + t;
            arcsine_constant(rho) * Float::powf(x, -rho) * Float::powf(one - x + t, rho - one)
        } else {
            zero
        };
        let target = arcsine_density_raw(rho, y);
        residuals.push(Float::abs(integral + from_atom - target) / target);
    }
    Ok(Residuals::from_pairs(ys.to_vec(), residuals, zero))
}

/// Compares `Q_s Q_t(x, ·)` with `Q_{s+t}(x, ·)`.
///
/// Both atoms are composed explicitly: the `s`-atom is moved by `Q_t`, and
/// the `t`-atom carries density down from `y + t`. Residuals are `|composed - direct| / max(direct, 1)`; the gap
/// between the composed atom and the direct one enters `max` as well.
pub fn chapman_kolmogorov_residual<T: Real>(
    rho: T,
    s: T,
    t: T,
    x: T,
    ys: &[T],
) -> Result<Residuals<T>> {
    let first = semigroup(rho, s, x)?;
    let direct = semigroup(rho, s + t, x)?;
    let (zero, one) = (T::zero(), T::one());
    let tol = Tolerance::default();

    let atom_gap = match first.atom() {
        Some(a) => {
            let moved = semigroup(rho, t, a.location)?;
            let composed = a.weight * moved.atom_weight();
            Float::abs(composed - direct.atom_weight())
        }
        None => direct.atom_weight(),
    };

    let z_pieces = split_all(first.pieces(), t, rho);
    let mut residuals = Vec::with_capacity(ys.len());
    for &y in ys {
        let mut composed = zero;
        if let Some(a) = first.atom() {
            composed = composed + a.weight * semigroup(rho, t, a.location)?.density(y);
        }
        composed = composed
            + integrate_pieces_nodes(
                |n| {
                    let z = n.y;
                    let inner = if t > one {
                        arcsine_density_raw(rho, y)
                    } else {
                        semigroup(rho, t, z).map_or(zero, |q| q.density(y))
                    };
                    first.density_node(&n) * inner
                },
                &z_pieces,
                &tol,
            )?
            .value;
        if y + t < one && Branch::select(t, y + t) == Branch::Drift {
            composed = composed + first.density(y + t) * drift_weight(rho, t, y + t);
        }
        let target = direct.density(y);
        residuals.push(Float::abs(composed - target) / Float::max(target, one));
    }
    Ok(Residuals::from_pairs(ys.to_vec(), residuals, atom_gap))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_examples() {
        for (rho, t, x) in [
            (0.5, 0.3, 0.6),
            (1.0 / 3.0, 0.1, 0.5),
            (2.0 / 3.0, 0.7, 0.25),
        ] {
            let m = kernel_mass(rho, t, x).unwrap();
            assert!((m - 1.0).abs() < 1e-9, "{rho} {t} {x}: {m}");
        }
        assert!((kernel_mass(0.3, 1.5, 0.2).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stationarity_brownian() {
        let r = stationarity_residual(0.5, 0.4, &default_y_grid()).unwrap();
        assert!(r.max < 1e-6, "{}", r.max);
    }

    #[test]
    fn ck_brownian() {
        let r = chapman_kolmogorov_residual(0.5, 0.2, 0.2, 0.9, &default_y_grid()).unwrap();
        assert!(r.max < 1e-5, "{}", r.max);
    }
}
