//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Code that only needs field arithmetic is written against [`Scalar`], so
//! it runs in floating point or in exact [`BigRational`]. Anything needing
//! transcendental functions uses [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Field-like number type used by the exact kernel constructors.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Largest magnitude of a negative probability that is still treated as
    /// round-off and clamped to zero.
    fn round_off() -> Self;

    /// Tolerance for "sums to one" style checks.
    fn sum_tolerance() -> Self;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("numerator representable")
            / Self::from_i64(den).expect("denominator representable")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn round_off() -> Self {
        1e-15
    }
    fn sum_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn round_off() -> Self {
        1e-6
    }
    fn sum_tolerance() -> Self {
        1e-4
    }
}

impl Scalar for BigRational {
    fn round_off() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn sum_tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
}

/// Floating-point scalar: f32 or f64.
pub trait Real: Scalar + Float + FloatConst {
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable")
    }
}

impl<T: Scalar + Float + FloatConst> Real for T {}

/// `n!`-free binomial coefficient, built as a running product so it stays in
/// range for the window sizes used here.
pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_count(n - i) / T::from_count(i + 1);
    }
    acc
}

/// Rising-factorial ratios `(a)_{n↑} / n!` for `n = 0..=m`.
pub fn pochhammer_ratios<T: Scalar>(a: &T, m: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(T::one());
    for n in 1..=m {
        let prev = out[n - 1].clone();
        out.push(prev * (a.clone() + T::from_count(n - 1)) / T::from_count(n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial::<f64>(4, 2), 6.0);
        assert_eq!(binomial::<f64>(10, 0), 1.0);
        assert_eq!(binomial::<f64>(3, 5), 0.0);
        let exact: BigRational = binomial(80, 40);
        assert_eq!(
            exact,
            BigRational::from_integer("107507208733336176461620".parse().unwrap())
        );
    }

    #[test]
    fn pochhammer_half() {
        let r = pochhammer_ratios(&0.5f64, 3);
        assert_eq!(r, vec![1.0, 0.5, 0.375, 0.3125]);
    }
}
