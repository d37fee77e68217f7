//! Exhaustive enumeration oracle for the simple symmetric walk.

use super::ArgminChainKernel;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_WINDOW: usize = 14;

/// Exact path counts: every ±1 path of `N+1` steps has weight `2^{-(N+1)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationCounts {
    pub n: usize,
    /// Number of paths, `2^{N+1}`.
    pub total: u64,
    /// Paths with `A_N(0) = k`.
    pub state: Vec<u64>,
    /// Paths with `A_N(0) = i` and `A_N(1) = j`, row-major.
    pub transition: Vec<u64>,
}

impl EnumerationCounts {
    /// Converts counts to a kernel: `Π(k) = state[k]/total`,
    /// `P(i,j) = transition[i][j]/state[i]`.
    pub fn to_kernel<T: Scalar>(&self) -> Result<ArgminChainKernel<T>> {
        let size = self.n + 1;
        let total = T::from_u64(self.total).expect("count representable");
        let pi = self
            .state
            .iter()
            .map(|&c| T::from_u64(c).expect("count representable") / total.clone())
            .collect();
        let mut transition = Vec::with_capacity(size * size);
        for i in 0..size {
            let visits = T::from_u64(self.state[i]).expect("count representable");
            for j in 0..size {
                let c = T::from_u64(self.transition[i * size + j]).expect("count representable");
                transition.push(if self.state[i] == 0 {
                    T::zero()
                } else {
                    c / visits.clone()
                });
            }
        }
        ArgminChainKernel::from_parts(self.n, pi, transition)
    }
}

/// Last index attaining the minimum (ties go to the latest index).
pub(crate) fn last_argmin<T: PartialOrd>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v <= values[best] {
            best = i;
        }
    }
    best
}

/// Enumerates all `2^{N+1}` simple-walk paths `S_0..S_{N+1}` and reads off
/// `A_N(0)` (window `S_0..S_N`) and `A_N(1)` (window `S_1..S_{N+1}`).
pub fn brute_force_ssrw(n: usize) -> Result<EnumerationCounts> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "window length N must be >= 1".into(),
        ));
    }
    if n > MAX_WINDOW {
        return Err(Error::EnumerationTooLarge(n));
    }
    let size = n + 1;
    let steps = n + 1;
    let mut state = vec![0u64; size];
    let mut transition = vec![0u64; size * size];
    let mut path = vec![0i32; steps + 1];
    for bits in 0u64..(1 << steps) {
        for k in 0..steps {
            let up = (bits >> k) & 1 == 1;
            path[k + 1] = path[k] + if up { 1 } else { -1 };
        }
        let a0 = last_argmin(&path[..size]);
        let a1 = last_argmin(&path[1..]);
        state[a0] += 1;
        transition[a0 * size + a1] += 1;
    }
    Ok(EnumerationCounts {
        n,
        total: 1 << steps,
        state,
        transition,
    })
}
