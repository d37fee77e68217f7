//! `Q_t(x, ·)`: law of the argmin at time `t` given it started at `x`.
//!
//! Three regimes. After `t > 1` the window has been renewed entirely and the
//! law is `f`. For `t ≤ x` the old minimum may survive, drifting down to
//! `x - t` (the atom), or be beaten by a new low in `(1-t, 1]`. For
//! `x < t ≤ 1` the old minimum has left the window and the new argmin may
//! sit anywhere.

use std::io::Write;

use num_traits::Float;
use serde::Serialize;

use super::{arcsine_constant, arcsine_density_split, check_rho};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::quadrature::{integrate_pieces_nodes, Node, Piece, Quad, Tolerance};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `t > 1`
    Stationary,
    /// `t ≤ x`
    Drift,
    /// `x < t ≤ 1`
    Renewal,
}

impl Branch {
    pub fn select<T: Real>(t: T, x: T) -> Self {
        if t > T::one() {
            Branch::Stationary
        } else if t <= x {
            Branch::Drift
        } else {
            Branch::Renewal
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom<T> {
    pub location: T,
    pub weight: T,
}

/// `Q_t(x, ·)` for fixed `(ρ, t, x)`: an optional atom plus a density.
#[derive(Debug, Clone, Copy)]
pub struct SemigroupEvaluation<T> {
    rho: T,
    t: T,
    x: T,
    branch: Branch,
    c: T,
}

/// Evaluates `Q_t(x, ·)` in the branch selected by `(t, x)`; ties `t = x`
/// go to the drift branch.
pub fn semigroup<T: Real>(rho: T, t: T, x: T) -> Result<SemigroupEvaluation<T>> {
    semigroup_in_branch(rho, t, x, Branch::select(t, x))
}

/// Evaluates the formulas of a given branch, which need only be valid as a
/// limit. Used to compare both sides of the boundary `t = x`.
pub fn semigroup_in_branch<T: Real>(
    rho: T,
    t: T,
    x: T,
    branch: Branch,
) -> Result<SemigroupEvaluation<T>> {
    check_rho(rho)?;
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t must be positive, got {t:?}"
        )));
    }
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "x must lie in [0, 1], got {x:?}"
        )));
    }
    if branch == Branch::Drift && t > x {
        return Err(Error::InvalidParameter("drift branch needs t <= x".into()));
    }
    if branch == Branch::Renewal && t > T::one() {
        return Err(Error::InvalidParameter(
            "renewal branch needs t <= 1".into(),
        ));
    }
    Ok(SemigroupEvaluation {
        rho,
        t,
        x,
        branch,
        c: arcsine_constant(rho),
    })
}

impl<T: Real> SemigroupEvaluation<T> {
    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// `((1-x)/(1-x+t))^{1-ρ}` at `x - t`, present only in the drift branch.
    pub fn atom(&self) -> Option<Atom<T>> {
        (self.branch == Branch::Drift).then(|| Atom {
            location: self.x - self.t,
            weight: drift_weight(self.rho, self.t, self.x),
        })
    }

    pub fn atom_weight(&self) -> T {
        self.atom().map_or(T::zero(), |a| a.weight)
    }

    /// Density of the continuous part at `y`; zero off its support.
    pub fn density(&self, y: T) -> T {
        let one = T::one();
        self.density_split(y, one - y, y + self.t - one)
    }

    /// Density at a quadrature node, using its exact endpoint distances.
    pub fn density_node(&self, node: &Node<T>) -> T {
        let one = T::one();
        self.density_split(node.y, node.one_minus(), node.above(one - self.t))
    }

    /// Density from `y`, `1 - y` and `y + t - 1`, the differences that lose
    /// precision near the singular ends.
    fn density_split(&self, y: T, one_minus_y: T, excess: T) -> T {
        let one = T::one();
        if !(y > T::zero() && one_minus_y > T::zero()) {
            return T::zero();
        }
        let (rho, t, x) = (self.rho, self.t, self.x);
        let excess = Float::max(excess, T::zero());
        match self.branch {
            Branch::Stationary => arcsine_density_split(rho, y, one_minus_y),
            Branch::Drift => {
                if excess <= T::zero() {
                    return T::zero();
                }
                // x = 1 makes the denominator equal to the excess itself
                let denom = if x == one { excess } else { y + (t - x) };
                self.c * Float::powf(one_minus_y, rho - one) * Float::powf(excess, one - rho)
                    / denom
            }
            Branch::Renewal => {
                let survivor = Float::powf(t - x, rho) * Float::powf(one - x, one - rho);
                let fresh = if excess > T::zero() {
                    Float::powf(y, rho) * Float::powf(excess, one - rho)
                } else {
                    T::zero()
                };
                self.c / (y + (t - x))
                    * Float::powf(y, -rho)
                    * Float::powf(one_minus_y, rho - one)
                    * (survivor + fresh)
            }
        }
    }

    /// Support of the density split at its kinks, with the local power-law
    /// exponents at each end (for singularity-aware quadrature).
    pub fn pieces(&self) -> Vec<Piece<T>> {
        let (zero, one) = (T::zero(), T::one());
        let (rho, t, x) = (self.rho, self.t, self.x);
        match self.branch {
            Branch::Stationary => vec![Piece::new(zero, one, -rho, rho - one)],
            Branch::Drift => {
                // at x = 1 the denominator y + t - x vanishes at the left end
                let ea = if x == one { -rho } else { one - rho };
                vec![Piece::new(one - t, one, ea, rho - one)]
            }
            Branch::Renewal => {
                if t == one {
                    return vec![Piece::new(zero, one, -rho, rho - one)];
                }
                // the survivor term lives on the scale t - x near 0, which can
                // be tiny just above the boundary t = x, and vanishes on it
                let mut cuts = vec![zero];
                let mut edge = t - x;
                while edge > zero && edge < one - t {
                    cuts.push(edge);
                    edge = edge * T::lit(8.0);
                }
                cuts.push(one - t);
                let mut pieces: Vec<_> = cuts
                    .windows(2)
                    .map(|w| {
                        let ea = if w[0] == zero { -rho } else { zero };
                        Piece::new(w[0], w[1], ea, zero)
                    })
                    .collect();
                pieces.push(Piece::new(one - t, one, one - rho, rho - one));
                pieces
            }
        }
    }

    /// Mass of the continuous part.
    pub fn continuous_mass(&self, tol: &Tolerance<T>) -> Result<Quad<T>> {
        integrate_pieces_nodes(|n| self.density_node(&n), &self.pieces(), tol)
    }

    /// `∫_0^y` of the density, without the atom.
    pub fn continuous_cdf(&self, y: T, tol: &Tolerance<T>) -> Result<T> {
        let pieces: Vec<_> = self
            .pieces()
            .iter()
            .filter_map(|p| p.clip_above(y))
            .collect();
        Ok(integrate_pieces_nodes(|n| self.density_node(&n), &pieces, tol)?.value)
    }

    /// Full CDF `Q_t(x, [0, y])`, atom included.
    pub fn cdf(&self, y: T, tol: &Tolerance<T>) -> Result<T> {
        let atom = match self.atom() {
            Some(a) if a.location <= y => a.weight,
            _ => T::zero(),
        };
        Ok(atom + self.continuous_cdf(y, tol)?)
    }
}

pub(crate) fn drift_weight<T: Real>(rho: T, t: T, x: T) -> T {
    let gap = T::one() - x;
    Float::powf(gap / (gap + t), T::one() - rho)
}

impl SemigroupEvaluation<f64> {
    /// CSV `y,q` of the density on `ys`. The atom is not part of the table.
    pub fn write_density_csv<W: Write>(&self, ys: &[f64], out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(["y", "q"])?;
        for &y in ys {
            w.write_record([fmt_f64(y), fmt_f64(self.density(y))])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable::arcsine_density_raw;

    #[test]
    fn branch_selection() {
        assert_eq!(Branch::select(2.0, 0.3), Branch::Stationary);
        assert_eq!(Branch::select(0.3, 0.3), Branch::Drift);
        assert_eq!(Branch::select(0.3, 0.6), Branch::Drift);
        assert_eq!(Branch::select(0.6, 0.3), Branch::Renewal);
        assert_eq!(Branch::select(1.0, 0.3), Branch::Renewal);
    }

    #[test]
    fn stationary_branch_is_f() {
        let q = semigroup(0.4, 2.0, 0.7).unwrap();
        assert!(q.atom().is_none());
        for y in [0.1, 0.5, 0.9] {
            assert_eq!(q.density(y), arcsine_density_raw(0.4, y));
        }
    }

    #[test]
    fn atom_examples() {
        let q = semigroup(0.5, 0.5, 1.0).unwrap();
        assert_eq!(q.atom_weight(), 0.0);
        let q = semigroup(0.5, 0.3, 0.6).unwrap();
        let atom = q.atom().unwrap();
        assert!((atom.location - 0.3).abs() < 1e-15);
        assert!((atom.weight - 0.755_928_946_018_454_5).abs() < 1e-12);
    }

    #[test]
    fn telescoping_atoms() {
        let (rho, s, t, x) = (1.0 / 3.0, 0.2, 0.3, 0.9);
        let composed = drift_weight(rho, s, x) * drift_weight(rho, t, x - s);
        assert!((composed - drift_weight(rho, s + t, x)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(semigroup(0.5, 0.0, 0.5).is_err());
        assert!(semigroup(0.5, 0.5, 1.5).is_err());
        assert!(semigroup(1.0, 0.5, 0.5).is_err());
        assert!(semigroup_in_branch(0.5, 0.6, 0.5, Branch::Drift).is_err());
    }

    #[test]
    fn cdf_reaches_one() {
        let tol = Tolerance::default();
        let q = semigroup(1.0 / 3.0, 0.3, 0.6).unwrap();
        assert!((q.cdf(1.5, &tol).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(q.cdf(0.0, &tol).unwrap(), 0.0);
    }

    #[test]
    fn density_csv_has_header() {
        let q = semigroup(0.5, 0.3, 0.6).unwrap();
        let mut buf = Vec::new();
        q.write_density_csv(&[0.5, 0.8], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("y,q\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
