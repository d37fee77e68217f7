//! Closed-form kernels for the continuous constant-θ walk, the symmetric
//! continuous walk and the simple symmetric walk.
//!
//! Row 0's last entry `P_N(0, N)` is always taken as the remainder of the
//! row; the closed forms [`theta_p0n`] and [`ssrw_p0n`] are checked against
//! it in [`verify_lemma_identities`].

use super::ArgminChainKernel;
use crate::error::{Error, Result};
use crate::ladder::{closed_form_ssrw, closed_form_theta};
use crate::scalar::{binomial, pochhammer_ratios, Scalar};

fn check_theta<T: Scalar>(theta: &T) -> Result<()> {
    if *theta > T::zero() && *theta < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "theta must lie in (0,1), got {theta:?}"
        )))
    }
}

fn check_window(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter(
            "window length N must be >= 1".into(),
        ))
    } else {
        Ok(())
    }
}

/// Fills `P(0, N)` as the remainder of row 0 and validates.
fn finish<T: Scalar>(n: usize, pi: Vec<T>, mut transition: Vec<T>) -> Result<ArgminChainKernel<T>> {
    let partial = transition[..n]
        .iter()
        .cloned()
        .fold(T::zero(), |a, b| a + b);
    transition[n] = T::one() - partial;
    ArgminChainKernel::from_parts(n, pi, transition)
}

/// Continuous walk with `P(S_n > 0) = θ` for all `n`:
///
/// * `Π_N(k) = (1-θ)_{k↑} (θ)_{N-k↑} / (k! (N-k)!)`
/// * `P_N(i, N) = (1-θ)/(N+1-i)`, `P_N(i, i-1) = (N+θ-i)/(N+1-i)`
/// * `P_N(0, j) = θ/(j+1) · C(N,j) (1-θ)_{j↑} (θ)_{N-j↑} / (θ)_{N↑}`
pub fn theta_kernel<T: Scalar>(theta: T, n: usize) -> Result<ArgminChainKernel<T>> {
    check_theta(&theta)?;
    check_window(n)?;
    let up = pochhammer_ratios(&theta, n);
    let down = pochhammer_ratios(&(T::one() - theta.clone()), n);
    let size = n + 1;
    let pi = (0..=n)
        .map(|k| down[k].clone() * up[n - k].clone())
        .collect();

    let mut transition = vec![T::zero(); size * size];
    for j in 0..n {
        transition[j] = theta.clone() * down[j].clone() * up[n - j].clone()
            / (T::from_count(j + 1) * up[n].clone());
    }
    for i in 1..=n {
        let denom = T::from_count(n + 1 - i);
        transition[i * size + n] = (T::one() - theta.clone()) / denom.clone();
        transition[i * size + i - 1] = (T::from_count(n - i) + theta.clone()) / denom;
    }
    finish(n, pi, transition)
}

/// Closed form of `P_N(0, N)` for the constant-θ walk:
/// `(1-θ)/(N+1) + θ (1-θ)_{N↑} / ((N+1) (θ)_{N↑})`.
///
/// Equals `1/(N+1)` at `θ = 1/2`.
pub fn theta_p0n<T: Scalar>(theta: T, n: usize) -> Result<T> {
    check_theta(&theta)?;
    let up = pochhammer_ratios(&theta, n);
    let down = pochhammer_ratios(&(T::one() - theta.clone()), n);
    let np1 = T::from_count(n + 1);
    Ok((T::one() - theta.clone()) / np1.clone() + theta * down[n].clone() / (np1 * up[n].clone()))
}

/// Symmetric continuous increments, written with central binomials.
pub fn symmetric_continuous_kernel<T: Scalar>(n: usize) -> Result<ArgminChainKernel<T>> {
    check_window(n)?;
    let size = n + 1;
    let quarter_pow = (0..n).fold(T::one(), |acc, _| acc * T::ratio(1, 4));
    let pi = (0..=n)
        .map(|k| binomial::<T>(2 * k, k) * binomial::<T>(2 * (n - k), n - k) * quarter_pow.clone())
        .collect();
    let mut transition = vec![T::zero(); size * size];
    for j in 0..n {
        let c = binomial::<T>(n, j);
        transition[j] = c.clone() * c / (T::from_count(2 * (j + 1)) * binomial::<T>(2 * n, 2 * j));
    }
    for i in 1..=n {
        let denom = T::from_count(2 * (n + 1 - i));
        transition[i * size + n] = T::one() / denom.clone();
        transition[i * size + i - 1] = T::from_count(2 * n + 1 - 2 * i) / denom;
    }
    finish(n, pi, transition)
}

/// Simple symmetric ±1 walk, from the parity closed forms.
///
/// With `m = N - i`, row `i > 0` jumps to `N` with probability `1/2` when
/// `m = 0`, `1/(m+1)` when `m` is odd, and never when `m >= 2` is even: then
/// `S_N` sits an even, nonzero distance above the minimum and one step cannot
/// reach it.
pub fn ssrw_kernel<T: Scalar>(n: usize) -> Result<ArgminChainKernel<T>> {
    check_window(n)?;
    let size = n + 1;
    let half = T::ratio(1, 2);
    let half_poch = pochhammer_ratios(&half, n / 2 + 1);
    let p = |k: usize| half_poch[k.div_ceil(2)].clone();
    let p_tilde = |k: usize| {
        if k == 0 {
            T::one()
        } else {
            half_poch[k / 2].clone() * half.clone()
        }
    };
    let pi = (0..=n).map(|k| p(k) * p_tilde(n - k)).collect();

    let mut transition = vec![T::zero(); size * size];
    let b = n / 2;
    let central = binomial::<T>(2 * b, b);
    for j in (0..n).step_by(2) {
        transition[j] = binomial::<T>(j, j / 2) * binomial::<T>(2 * b - j, b - j / 2)
            / (T::from_count(j + 2) * central.clone());
    }
    for i in 1..=n {
        let m = n - i;
        let jump = if m == 0 {
            half.clone()
        } else if m % 2 == 1 {
            T::one() / T::from_count(m + 1)
        } else {
            T::zero()
        };
        transition[i * size + i - 1] = T::one() - jump.clone();
        transition[i * size + n] = jump;
    }
    finish(n, pi, transition)
}

/// `P_N(0, N)` for the simple symmetric walk: `1/(N+1)` for odd `N`,
/// `2/(N+2)` for even `N`.
pub fn ssrw_p0n<T: Scalar>(n: usize) -> T {
    if n % 2 == 1 {
        T::one() / T::from_count(n + 1)
    } else {
        T::from_count(2) / T::from_count(n + 2)
    }
}

/// Walk family for [`verify_lemma_identities`].
#[derive(Debug, Clone, PartialEq)]
pub enum LemmaModel<T> {
    Theta(T),
    Ssrw,
}

/// Checks, for every `1 <= N <= n_max`,
///
/// * `Σ_{j<N} (p⁻_j − p⁻_{j+1}) p~_{N-j} = p~_N (1 − P_N(0,N))` with the
///   closed-form `P_N(0,N)`; for the simple walk the right side is
///   `N/(N+1) p~_N` (odd `N`) or `N/(N+2) p~_N` (even `N`);
/// * for the θ-walk, additionally the convolution identity
///   `Σ_{j<N} p_j p_{N-j} − Σ_{j<N} p_{j+1} p_{N-j}
///    = [(N+2θ−1)(θ)_{N↑} + (1−2θ)(2θ)_{N↑}] / (N+1)!`.
///
/// Returns the largest absolute residual.
pub fn verify_lemma_identities<T: Scalar>(model: &LemmaModel<T>, n_max: usize) -> Result<T> {
    let ls = match model {
        LemmaModel::Theta(theta) => closed_form_theta(theta.clone(), n_max + 1)?,
        LemmaModel::Ssrw => closed_form_ssrw(n_max + 1),
    };
    let pd = ls.p_dual();
    let pt = ls.p_tilde();
    let p = ls.p();
    let mut worst = T::zero();
    let mut track = |v: T| {
        let v = v.abs();
        if v > worst {
            worst = v;
        }
    };
    let two_theta_poch = match model {
        LemmaModel::Theta(theta) => {
            Some(pochhammer_ratios(&(theta.clone() + theta.clone()), n_max))
        }
        LemmaModel::Ssrw => None,
    };
    for n in 1..=n_max {
        let lhs = (0..n).fold(T::zero(), |acc, j| {
            acc + (pd[j].clone() - pd[j + 1].clone()) * pt[n - j].clone()
        });
        let p0n = match model {
            LemmaModel::Theta(theta) => theta_p0n(theta.clone(), n)?,
            LemmaModel::Ssrw => ssrw_p0n(n),
        };
        track(lhs - pt[n].clone() * (T::one() - p0n));

        if let (LemmaModel::Theta(theta), Some(two)) = (model, &two_theta_poch) {
            let lhs = (0..n).fold(T::zero(), |acc, j| {
                acc + (p[j].clone() - p[j + 1].clone()) * p[n - j].clone()
            });
            let nn = T::from_count(n);
            let tt = theta.clone() + theta.clone();
            let rhs = ((nn + tt.clone() - T::one()) * p[n].clone()
                + (T::one() - tt) * two[n].clone())
                / T::from_count(n + 1);
            track(lhs - rhs);
        }
    }
    Ok(worst)
}
