//! The argmin chain `A_N(n)`: position of the last minimum of the window
//! `(S_n, S_{n+1}, ..., S_{n+N})`, relative to `n`.
//!
//! The chain lives on `{0, ..., N}`. From `i > 0` it either slides to
//! `i - 1` (old minimum survives) or jumps to `N` (the new point is a new
//! weak minimum). From `0` the minimum of the remaining window is forgotten
//! and the chain can land anywhere.

mod brute_force;
mod closed_form;
mod io;

pub(crate) use brute_force::last_argmin;
pub use brute_force::{brute_force_ssrw, EnumerationCounts};
pub use closed_form::{
    ssrw_kernel, ssrw_p0n, symmetric_continuous_kernel, theta_kernel, theta_p0n,
    verify_lemma_identities, LemmaModel,
};

use crate::error::{Error, Result};
use crate::ladder::LadderSequences;
use crate::scalar::Scalar;

/// Stationary law and transition matrix of the argmin chain for window `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArgminChainKernel<T> {
    n: usize,
    pi: Vec<T>,
    /// Row-major `(N+1) × (N+1)`.
    transition: Vec<T>,
}

impl<T: Scalar> ArgminChainKernel<T> {
    /// Validates and assembles a kernel. Negative entries down to
    /// `-T::round_off()` are clamped to zero; anything lower is rejected, as
    /// are rows or `pi` not summing to one.
    pub fn from_parts(n: usize, mut pi: Vec<T>, mut transition: Vec<T>) -> Result<Self> {
        let size = n + 1;
        if n == 0 {
            return Err(Error::InvalidParameter(
                "window length N must be >= 1".into(),
            ));
        }
        if pi.len() != size || transition.len() != size * size {
            return Err(Error::DimensionMismatch(format!(
                "N={n} needs {size} stationary entries and {} transition entries, got {} and {}",
                size * size,
                pi.len(),
                transition.len()
            )));
        }
        clamp_round_off(&mut pi, "pi")?;
        clamp_round_off(&mut transition, "P")?;
        let tol = T::sum_tolerance();
        let total = pi.iter().cloned().fold(T::zero(), |a, b| a + b);
        if (total.clone() - T::one()).abs() > tol {
            return Err(Error::KernelInvariant(format!(
                "stationary vector sums to {:?}, not 1",
                total
            )));
        }
        for i in 0..size {
            let row_sum = transition[i * size..(i + 1) * size]
                .iter()
                .cloned()
                .fold(T::zero(), |a, b| a + b);
            if (row_sum.clone() - T::one()).abs() > tol {
                return Err(Error::KernelInvariant(format!(
                    "row {i} sums to {row_sum:?}, not 1"
                )));
            }
        }
        Ok(Self { n, pi, transition })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn pi(&self) -> &[T] {
        &self.pi
    }

    pub fn p(&self, i: usize, j: usize) -> &T {
        &self.transition[i * self.size() + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        let size = self.size();
        &self.transition[i * size..(i + 1) * size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.transition.chunks(self.size())
    }

    /// `max_j |(πP)_j − π_j|`.
    pub fn stationarity_residual(&self) -> T {
        let size = self.size();
        let mut worst = T::zero();
        for j in 0..size {
            let mut acc = T::zero();
            for i in 0..size {
                acc = acc + self.pi[i].clone() * self.p(i, j).clone();
            }
            let dev = (acc - self.pi[j].clone()).abs();
            if dev > worst {
                worst = dev;
            }
        }
        worst
    }

    /// Largest mass a row `i > 0` puts outside `{i-1, N}`.
    pub fn support_violation(&self) -> T {
        let mut worst = T::zero();
        for i in 1..self.size() {
            for (j, v) in self.row(i).iter().enumerate() {
                if j + 1 != i && j != self.n && v.abs() > worst {
                    worst = v.abs();
                }
            }
        }
        worst
    }

    /// Largest entrywise difference in either `pi` or `P`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "N={} vs N={}",
                self.n, other.n
            )));
        }
        let worst = self
            .pi
            .iter()
            .zip(&other.pi)
            .chain(self.transition.iter().zip(&other.transition))
            .map(|(a, b)| (a.clone() - b.clone()).abs())
            .fold(T::zero(), |acc, d| if d > acc { d } else { acc });
        Ok(worst)
    }

    pub fn to_f64(&self) -> ArgminChainKernel<f64> {
        ArgminChainKernel {
            n: self.n,
            pi: self.pi.iter().map(Scalar::to_f64_lossy).collect(),
            transition: self.transition.iter().map(Scalar::to_f64_lossy).collect(),
        }
    }
}

fn clamp_round_off<T: Scalar>(values: &mut [T], what: &str) -> Result<()> {
    let floor = -T::round_off();
    for (idx, v) in values.iter_mut().enumerate() {
        if *v < T::zero() {
            if *v < floor {
                return Err(Error::KernelInvariant(format!(
                    "{what}[{idx}] = {v:?} is negative beyond round-off"
                )));
            }
            *v = T::zero();
        }
    }
    Ok(())
}

/// Kernel of the argmin chain from the walk's persistence sequences:
///
/// * `Π_N(k) = p⁻_k · p~_{N-k}`
/// * `P_N(i, N) = 1 − p~_{N+1-i} / p~_{N-i}`, `P_N(i, i-1) = p~_{N+1-i} / p~_{N-i}` for `i > 0`
/// * `P_N(0, j) = (p⁻_j − p⁻_{j+1}) p~_{N-j} / p~_N` for `j < N`, and
///   `P_N(0, N)` the remainder of row 0.
pub fn build_kernel<T: Scalar>(ls: &LadderSequences<T>, n: usize) -> Result<ArgminChainKernel<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "window length N must be >= 1".into(),
        ));
    }
    if ls.horizon() <= n {
        return Err(Error::HorizonTooShort {
            horizon: ls.horizon(),
            n,
        });
    }
    let pd = ls.p_dual();
    let pt = ls.p_tilde();
    if let Some(index) = (0..=n).find(|&k| pt[k].is_zero()) {
        return Err(Error::DegenerateWalk { index });
    }
    let size = n + 1;
    let pi: Vec<T> = (0..=n).map(|k| pd[k].clone() * pt[n - k].clone()).collect();

    let mut transition = vec![T::zero(); size * size];
    let mut row0 = T::zero();
    for j in 0..n {
        let v = (pd[j].clone() - pd[j + 1].clone()) * pt[n - j].clone() / pt[n].clone();
        row0 = row0 + v.clone();
        transition[j] = v;
    }
    transition[n] = T::one() - row0;
    for i in 1..=n {
        let stay = pt[n + 1 - i].clone() / pt[n - i].clone();
        transition[i * size + n] = T::one() - stay.clone();
        transition[i * size + i - 1] = stay;
    }
    ArgminChainKernel::from_parts(n, pi, transition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::{closed_form_theta, persistence_from_signs, SignProbabilities};
    use num_rational::BigRational;

    #[test]
    fn theta_half_n1() {
        let ls = closed_form_theta(0.5f64, 3).unwrap();
        let k = build_kernel(&ls, 1).unwrap();
        assert_eq!(k.pi(), &[0.5, 0.5]);
        assert_eq!(k.row(0), &[0.5, 0.5]);
        assert_eq!(k.row(1), &[0.5, 0.5]);
    }

    #[test]
    fn theta_third_n1() {
        let theta = BigRational::new(1.into(), 3.into());
        let ls = closed_form_theta(theta.clone(), 3).unwrap();
        let k = build_kernel(&ls, 1).unwrap();
        let one = BigRational::from_integer(1.into());
        // last argmin at 0 iff S_1 > 0
        assert_eq!(k.pi()[0], theta);
        assert_eq!(k.pi()[1], one.clone() - theta.clone());
        assert_eq!(*k.p(1, 1), one.clone() - theta.clone());
        assert_eq!(*k.p(0, 1), one - theta);
    }

    #[test]
    fn never_negative_walk_sits_at_zero() {
        let sp = SignProbabilities::new(vec![1.0; 6], vec![1.0; 6], vec![0.0; 6]).unwrap();
        let ls = persistence_from_signs(&sp).unwrap();
        let k = build_kernel(&ls, 3).unwrap();
        assert_eq!(k.pi(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(*k.p(0, 0), 1.0);
    }

    #[test]
    fn always_negative_walk_is_degenerate() {
        let sp = SignProbabilities::new(vec![0.0; 6], vec![0.0; 6], vec![1.0; 6]).unwrap();
        let ls = persistence_from_signs(&sp).unwrap();
        assert!(matches!(
            build_kernel(&ls, 3),
            Err(Error::DegenerateWalk { index: 1 })
        ));
    }

    #[test]
    fn short_horizon_rejected() {
        let ls = closed_form_theta(0.5f64, 3).unwrap();
        assert!(matches!(
            build_kernel(&ls, 3),
            Err(Error::HorizonTooShort { horizon: 3, n: 3 })
        ));
        assert!(build_kernel(&ls, 2).is_ok());
    }

    #[test]
    fn ssrw_n2_p0n() {
        let sp = SignProbabilities::<BigRational>::ssrw(5).unwrap();
        let ls = persistence_from_signs(&sp).unwrap();
        let k = build_kernel(&ls, 2).unwrap();
        assert_eq!(*k.p(0, 2), BigRational::new(1.into(), 2.into()));
        assert_eq!(*k.p(2, 2), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn from_parts_rejects_bad_rows() {
        assert!(
            ArgminChainKernel::from_parts(1, vec![0.5, 0.5], vec![0.5, 0.6, 0.5, 0.5]).is_err()
        );
        assert!(
            ArgminChainKernel::from_parts(1, vec![0.5, 0.6], vec![0.5, 0.5, 0.5, 0.5]).is_err()
        );
        assert!(
            ArgminChainKernel::from_parts(1, vec![0.5, 0.5], vec![1.1, -0.1, 0.5, 0.5]).is_err()
        );
        let k =
            ArgminChainKernel::from_parts(1, vec![0.5, 0.5], vec![1.0, -1e-16, 0.5, 0.5]).unwrap();
        assert_eq!(*k.p(0, 1), 0.0);
    }
}
