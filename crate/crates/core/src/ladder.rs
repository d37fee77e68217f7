//! Persistence probabilities and ladder-epoch laws from marginal sign
//! probabilities.
//!
//! For a walk `S_n = X_1 + ... + X_n` the generating functions of
//!
//! * `p_n  = P(S_1 >= 0, ..., S_n >= 0)`,
//! * `p~_n = P(S_1 > 0, ..., S_n > 0)`,
//! * `p⁻_n = P(S_1 <= 0, ..., S_n <= 0)` (the reversed walk's weak persistence),
//!
//! are exponentials of `Σ sⁿ/n · q_n` where `q_n` is the matching one-time
//! sign probability. Coefficients are extracted with [`series_exp`].

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{pochhammer_ratios, Scalar};

/// One-time sign probabilities `P(S_n >= 0)`, `P(S_n > 0)`, `P(S_n < 0)`
/// for `n = 1..=M`. Index `0` of each vector is `n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignProbabilities<T> {
    q_ge: Vec<T>,
    q_gt: Vec<T>,
    q_lt: Vec<T>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SignProbabilitiesFile {
    q_ge: Vec<f64>,
    q_gt: Vec<f64>,
    q_lt: Vec<f64>,
}

impl<T: Scalar> SignProbabilities<T> {
    pub fn new(q_ge: Vec<T>, q_gt: Vec<T>, q_lt: Vec<T>) -> Result<Self> {
        if q_ge.is_empty() {
            return Err(Error::InvalidParameter("horizon M must be positive".into()));
        }
        if q_gt.len() != q_ge.len() || q_lt.len() != q_ge.len() {
            return Err(Error::DimensionMismatch(format!(
                "q_ge has {} entries, q_gt {}, q_lt {}",
                q_ge.len(),
                q_gt.len(),
                q_lt.len()
            )));
        }
        let tol = T::sum_tolerance();
        let in_unit = |v: &T| *v >= T::zero() && *v <= T::one();
        for i in 0..q_ge.len() {
            let n = i + 1;
            let bad = |reason: &str| Error::InvalidSignProbabilities {
                n,
                reason: reason.to_string(),
            };
            if !(in_unit(&q_ge[i]) && in_unit(&q_gt[i]) && in_unit(&q_lt[i])) {
                return Err(bad("entries must lie in [0,1]"));
            }
            if q_gt[i] > q_ge[i] {
                return Err(bad("P(S_n > 0) exceeds P(S_n >= 0)"));
            }
            if q_ge[i].clone() + q_lt[i].clone() > T::one() + tol.clone() {
                return Err(bad("P(S_n >= 0) + P(S_n < 0) exceeds 1"));
            }
        }
        Ok(Self { q_ge, q_gt, q_lt })
    }

    /// Continuous walk with `P(S_n > 0) = θ` for every `n`.
    pub fn constant(theta: T, horizon: usize) -> Result<Self> {
        if !(theta > T::zero() && theta < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in (0,1), got {theta:?}"
            )));
        }
        let lt = T::one() - theta.clone();
        Self::new(
            vec![theta.clone(); horizon],
            vec![theta; horizon],
            vec![lt; horizon],
        )
    }

    /// Simple symmetric ±1 walk, from the exact binomial law of `S_n`.
    pub fn ssrw(horizon: usize) -> Result<Self> {
        let half = T::ratio(1, 2);
        let mut q_ge = Vec::with_capacity(horizon);
        let mut q_gt = Vec::with_capacity(horizon);
        let mut q_lt = Vec::with_capacity(horizon);
        // P(S_{2k} = 0) = C(2k,k) / 4^k, updated by the factor (2k-1)/(2k).
        let mut atom_even = T::one();
        for n in 1..=horizon {
            let atom = if n % 2 == 0 {
                let k = n / 2;
                atom_even = atom_even * T::from_count(2 * k - 1) / T::from_count(2 * k);
                atom_even.clone()
            } else {
                T::zero()
            };
            let gt = (T::one() - atom.clone()) * half.clone();
            q_lt.push(gt.clone());
            q_ge.push(gt.clone() + atom);
            q_gt.push(gt);
        }
        Self::new(q_ge, q_gt, q_lt)
    }

    pub fn horizon(&self) -> usize {
        self.q_ge.len()
    }

    pub fn q_ge(&self) -> &[T] {
        &self.q_ge
    }

    pub fn q_gt(&self) -> &[T] {
        &self.q_gt
    }

    pub fn q_lt(&self) -> &[T] {
        &self.q_lt
    }

    /// True when some `S_n` has an atom at zero.
    pub fn has_atoms(&self) -> bool {
        self.q_gt
            .iter()
            .zip(&self.q_lt)
            .any(|(gt, lt)| gt.clone() + lt.clone() < T::one() - T::sum_tolerance())
    }
}

impl SignProbabilities<f64> {
    /// Reads `{"q_ge":[..],"q_gt":[..],"q_lt":[..]}`.
    pub fn from_json<R: Read>(reader: R) -> Result<Self> {
        let file: SignProbabilitiesFile = serde_json::from_reader(reader)?;
        Self::new(file.q_ge, file.q_gt, file.q_lt)
    }

    pub fn to_json<W: Write>(&self, writer: W) -> Result<()> {
        let file = SignProbabilitiesFile {
            q_ge: self.q_ge.clone(),
            q_gt: self.q_gt.clone(),
            q_lt: self.q_lt.clone(),
        };
        serde_json::to_writer(writer, &file)?;
        Ok(())
    }
}

/// Persistence and first-passage sequences up to horizon `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSequences<T> {
    p: Vec<T>,
    p_tilde: Vec<T>,
    p_dual: Vec<T>,
    tau: Vec<T>,
}

impl<T: Scalar> LadderSequences<T> {
    fn from_persistence(p: Vec<T>, p_tilde: Vec<T>, p_dual: Vec<T>) -> Self {
        debug_assert!(p.len() == p_tilde.len() && p.len() == p_dual.len());
        let mut tau = Vec::with_capacity(p.len());
        tau.push(T::zero());
        for n in 1..p.len() {
            tau.push(p[n - 1].clone() - p[n].clone());
        }
        Self {
            p,
            p_tilde,
            p_dual,
            tau,
        }
    }

    pub fn horizon(&self) -> usize {
        self.p.len() - 1
    }

    /// `p_0..=p_M`, weak persistence of the walk.
    pub fn p(&self) -> &[T] {
        &self.p
    }

    /// `p~_0..=p~_M`, strict persistence of the walk.
    pub fn p_tilde(&self) -> &[T] {
        &self.p_tilde
    }

    /// `p⁻_0..=p⁻_M` with `p⁻_n = P(S_1 <= 0, ..., S_n <= 0)`: the weak
    /// persistence of the time-reversed walk. Equal to `p` for symmetric
    /// increments.
    pub fn p_dual(&self) -> &[T] {
        &self.p_dual
    }

    /// `τ_0..=τ_M` with `τ_0 = 0` and `τ_n = P(T₋ = n) = p_{n-1} - p_n`.
    pub fn tau(&self) -> &[T] {
        &self.tau
    }

    /// Checks that every sequence is a nonincreasing probability; returns the first violation.
    pub fn check(&self) -> Result<()> {
        let tol = T::sum_tolerance();
        let fail = |msg: String| Err(Error::KernelInvariant(msg));
        for (name, seq) in [
            ("p", &self.p),
            ("p_tilde", &self.p_tilde),
            ("p_dual", &self.p_dual),
        ] {
            if seq[0] != T::one() {
                return fail(format!("{name}_0 != 1"));
            }
            for n in 1..seq.len() {
                if seq[n] < -tol.clone() || seq[n] > seq[n - 1].clone() + tol.clone() {
                    return fail(format!("{name} not nonincreasing in [0,1] at n={n}"));
                }
            }
        }
        for n in 0..self.p.len() {
            if self.p_tilde[n] > self.p[n].clone() + tol.clone() {
                return fail(format!("p_tilde exceeds p at n={n}"));
            }
        }
        let mut total = T::zero();
        for t in &self.tau {
            if *t < -tol.clone() {
                return fail("negative first-passage probability".into());
            }
            total = total + t.clone();
        }
        if total > T::one() + tol {
            return fail("first-passage probabilities sum above 1".into());
        }
        Ok(())
    }

    /// `Σ_{j=0}^{N} p⁻_j p~_{N-j}`, which equals 1 for every walk.
    pub fn duality_sum(&self, n: usize) -> T {
        convolve_at(&self.p_dual, &self.p_tilde, n)
    }

    /// `Σ_{j=0}^{N} p_j p~_{N-j}`. Equals 1 when `P(S_n >= 0) + P(S_n > 0) = 1`
    /// for all `n` (e.g. symmetric walks); otherwise only a diagnostic.
    pub fn forward_convolution(&self, n: usize) -> T {
        convolve_at(&self.p, &self.p_tilde, n)
    }

    /// Writes `n,p,p_tilde,tau` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "p", "p_tilde", "tau"])?;
        for n in 0..self.p.len() {
            w.write_record([
                n.to_string(),
                crate::io::fmt_f64(self.p[n].to_f64_lossy()),
                crate::io::fmt_f64(self.p_tilde[n].to_f64_lossy()),
                crate::io::fmt_f64(self.tau[n].to_f64_lossy()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn convolve_at<T: Scalar>(a: &[T], b: &[T], n: usize) -> T {
    (0..=n).fold(T::zero(), |acc, j| acc + a[j].clone() * b[n - j].clone())
}

/// Coefficients `c_0..=c_M` of `exp(Σ_{n>=1} a_n sⁿ)`.
///
/// `log_coeffs[k]` holds `a_{k+1}`. Uses `c_0 = 1`,
/// `n c_n = Σ_{k=1}^{n} k a_k c_{n-k}`.
pub fn series_exp<T: Scalar>(log_coeffs: &[T], m: usize) -> Result<Vec<T>> {
    if log_coeffs.len() < m {
        return Err(Error::SeriesTooShort {
            needed: m,
            got: log_coeffs.len(),
        });
    }
    let mut c = Vec::with_capacity(m + 1);
    c.push(T::one());
    for n in 1..=m {
        let mut acc = T::zero();
        for k in 1..=n {
            acc = acc + T::from_count(k) * log_coeffs[k - 1].clone() * c[n - k].clone();
        }
        c.push(acc / T::from_count(n));
    }
    Ok(c)
}

fn log_coeffs<T: Scalar>(q: impl Iterator<Item = T>) -> Vec<T> {
    q.enumerate()
        .map(|(i, v)| v / T::from_count(i + 1))
        .collect()
}

/// Persistence sequences of a walk from its sign probabilities.
pub fn persistence_from_signs<T: Scalar>(sp: &SignProbabilities<T>) -> Result<LadderSequences<T>> {
    let m = sp.horizon();
    let p = series_exp(&log_coeffs(sp.q_ge.iter().cloned()), m)?;
    let p_tilde = series_exp(&log_coeffs(sp.q_gt.iter().cloned()), m)?;
    // P(S_n <= 0) = 1 - P(S_n > 0).
    let p_dual = series_exp(&log_coeffs(sp.q_gt.iter().map(|v| T::one() - v.clone())), m)?;
    Ok(LadderSequences::from_persistence(p, p_tilde, p_dual))
}

/// Recomputes `τ` from `P(S_n < 0)` through `τ(s) = 1 - exp(-Σ sⁿ/n P(S_n < 0))`
/// and returns the largest deviation from `ls.tau()`.
///
/// Requires `P(S_n >= 0) + P(S_n < 0) = 1` for every `n`; inputs that break
/// it are reported as not applicable.
pub fn first_passage_gf_check<T: Scalar>(
    sp: &SignProbabilities<T>,
    ls: &LadderSequences<T>,
) -> Result<T> {
    let tol = T::sum_tolerance();
    if let Some(i) = (0..sp.horizon())
        .find(|&i| sp.q_ge[i].clone() + sp.q_lt[i].clone() < T::one() - tol.clone())
    {
        return Err(Error::NotApplicable(format!(
            "P(S_n >= 0) + P(S_n < 0) < 1 at n={}",
            i + 1
        )));
    }
    let m = sp.horizon().min(ls.horizon());
    let neg: Vec<T> = log_coeffs(sp.q_lt.iter().map(|v| -v.clone()));
    let c = series_exp(&neg, m)?;
    let mut worst = T::zero();
    for n in 1..=m {
        let tau_n = -c[n].clone();
        let dev = (tau_n - ls.tau[n].clone()).abs();
        if dev > worst {
            worst = dev;
        }
    }
    Ok(worst)
}

/// Closed form for a continuous walk with `P(S_n > 0) = θ`:
/// `p_n = p~_n = (θ)_{n↑}/n!` and `p⁻_n = (1-θ)_{n↑}/n!`.
pub fn closed_form_theta<T: Scalar>(theta: T, m: usize) -> Result<LadderSequences<T>> {
    if !(theta > T::zero() && theta < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in (0,1), got {theta:?}"
        )));
    }
    let p = pochhammer_ratios(&theta, m);
    let p_dual = pochhammer_ratios(&(T::one() - theta), m);
    Ok(LadderSequences::from_persistence(p.clone(), p, p_dual))
}

/// Closed form for the simple symmetric walk:
/// `p_{2n-1} = p_{2n} = (1/2)_{n↑}/n!` and, for `n >= 1` together with
/// `p~_1 = 1/2`, `p~_{2n} = p~_{2n+1} = (1/2)_{n↑}/(2·n!)`.
pub fn closed_form_ssrw<T: Scalar>(m: usize) -> LadderSequences<T> {
    let half_poch = pochhammer_ratios(&T::ratio(1, 2), m / 2 + 1);
    let two = T::from_count(2);
    let p: Vec<T> = (0..=m).map(|n| half_poch[n.div_ceil(2)].clone()).collect();
    let p_tilde: Vec<T> = (0..=m)
        .map(|n| {
            if n == 0 {
                T::one()
            } else {
                half_poch[n / 2].clone() / two.clone()
            }
        })
        .collect();
    LadderSequences::from_persistence(p.clone(), p_tilde, p)
}
