//! Adaptive Gauss–Kronrod (7/15) quadrature with power-law endpoint
//! substitution for integrable singularities.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Real;

// Kronrod nodes and weights, as tabulated
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad<T> {
    pub value: T,
    pub error: T,
}

impl<T: Real> Quad<T> {
    pub fn zero() -> Self {
        Self {
            value: T::zero(),
            error: T::zero(),
        }
    }
}

impl<T: Real> std::ops::Add for Quad<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            abs: T::lit(1e-12),
            rel: T::lit(1e-12),
            max_intervals: 2000,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn absolute(abs: f64) -> Self {
        Self {
            abs: T::lit(abs),
            rel: T::zero(),
            ..Self::default()
        }
    }

    fn target(&self, value: T) -> T {
        Float::max(self.abs, self.rel * Float::abs(value))
    }

    fn scaled(&self, parts: usize) -> Self {
        Self {
            abs: self.abs / T::from_count(parts.max(1)),
            ..*self
        }
    }
}

fn finite_or_zero<T: Real>(v: T) -> T {
    if v.is_finite() {
        v
    } else {
        T::zero()
    }
}

/// One 15-point Kronrod panel with the QUADPACK error estimate.
fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let two = T::lit(2.0);
    let centre = (a + b) / two;
    let half = (b - a) / two;
    let abs_half = Float::abs(half);
    let fc = finite_or_zero(f(centre));
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    let mut resabs = Float::abs(kronrod);
    let mut values = [(T::zero(), T::zero()); 7];
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = finite_or_zero(f(centre - dx));
        let f2 = finite_or_zero(f(centre + dx));
        values[j] = (f1, f2);
        let pair = f1 + f2;
        kronrod = kronrod + T::lit(WGK[j]) * pair;
        resabs = resabs + T::lit(WGK[j]) * (Float::abs(f1) + Float::abs(f2));
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    let mean = kronrod / two;
    let mut resasc = T::lit(WGK[7]) * Float::abs(fc - mean);
    for (j, &(f1, f2)) in values.iter().enumerate() {
        resasc = resasc + T::lit(WGK[j]) * (Float::abs(f1 - mean) + Float::abs(f2 - mean));
    }
    let value = kronrod * half;
    let resabs = resabs * abs_half;
    let resasc = resasc * abs_half;
    let mut error = Float::abs((kronrod - gauss) * half);
    if resasc != T::zero() && error != T::zero() {
        let scale = Float::powf(T::lit(200.0) * error / resasc, T::lit(1.5));
        error = resasc * Float::min(T::one(), scale);
    }
    let roundoff = T::lit(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        error = Float::max(roundoff, error);
    }
    (value, error)
}

/// Adaptive quadrature of `f` over `[a, b]`, bisecting the interval with the
/// largest error estimate until the total meets `tol`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    tol: &Tolerance<T>,
) -> Result<Quad<T>> {
    if a == b {
        return Ok(Quad::zero());
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut value = v;
    let mut error = e;
    let floor = T::lit(50.0) * T::epsilon();
    while error > tol.target(value) && error > floor * Float::abs(value) {
        if intervals.len() >= tol.max_intervals {
            return Err(Error::QuadratureNonConvergence {
                value: value.to_f64_lossy(),
                error: error.to_f64_lossy(),
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| {
                x.1 .3
                    .partial_cmp(&y.1 .3)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, v0, e0) = intervals.swap_remove(worst);
        let mid = (lo + hi) / T::lit(2.0);
        if !(mid > lo && mid < hi) {
            // no room left to bisect; accept what we have
            intervals.push((lo, hi, v0, T::zero()));
            error = error - e0;
            continue;
        }
        let (vl, el) = gk15(&mut f, lo, mid);
        let (vr, er) = gk15(&mut f, mid, hi);
        value = value - v0 + vl + vr;
        error = error - e0 + el + er;
        intervals.push((lo, mid, vl, el));
        intervals.push((mid, hi, vr, er));
    }
    // re-sum to shed the drift of the running updates
    let value = intervals.iter().fold(T::zero(), |acc, iv| acc + iv.2);
    let error = intervals.iter().fold(T::zero(), |acc, iv| acc + iv.3);
    Ok(Quad { value, error })
}

/// An interval on which the integrand behaves like `(y - a)^ea` near `a`
/// and `(b - y)^eb` near `b` (times something smooth).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece<T> {
    pub a: T,
    pub b: T,
    pub ea: T,
    pub eb: T,
}

impl<T: Real> Piece<T> {
    pub fn new(a: T, b: T, ea: T, eb: T) -> Self {
        Self { a, b, ea, eb }
    }

    pub fn smooth(a: T, b: T) -> Self {
        Self::new(a, b, T::zero(), T::zero())
    }

    /// Restricts the piece to `[a, min(b, upper)]`; the new right end is a
    /// regular point unless it is the old one.
    pub fn clip_above(&self, upper: T) -> Option<Self> {
        if upper <= self.a {
            None
        } else if upper >= self.b {
            Some(*self)
        } else {
            Some(Self::new(self.a, upper, self.ea, T::zero()))
        }
    }

    /// Splits at an interior point `at` with exponent `e` on both sides.
    pub fn split(&self, at: T, e: T) -> Vec<Self> {
        if at > self.a && at < self.b {
            vec![
                Self::new(self.a, at, self.ea, e),
                Self::new(at, self.b, e, self.eb),
            ]
        } else {
            vec![*self]
        }
    }
}

/// Power in `y = a + c u^k` that flattens an endpoint of exponent `e`.
fn substitution_power<T: Real>(e: T) -> T {
    if e < T::zero() {
        T::one() / (T::one() + e)
    } else if Float::fract(e) == T::zero() {
        T::one()
    } else {
        T::lit(2.0)
    }
}

/// A quadrature node inside a piece, with its distances to both ends kept
/// exactly. Near a singular end these are far more accurate than `y - a`
/// or `b - y` recomputed from `y`.
#[derive(Debug, Clone, Copy)]
pub struct Node<T> {
    pub y: T,
    pub a: T,
    pub b: T,
    /// `y - a`
    pub from_a: T,
    /// `b - y`
    pub to_b: T,
}

impl<T: Real> Node<T> {
    /// `1 - y`, exact when the piece ends at 1.
    pub fn one_minus(&self) -> T {
        if self.b == T::one() {
            self.to_b
        } else {
            T::one() - self.y
        }
    }

    /// `y - p`, exact when the piece starts at `p`.
    pub fn above(&self, p: T) -> T {
        if self.a == p {
            self.from_a
        } else {
            self.y - p
        }
    }
}

/// Integrates over one piece. Each half is mapped from `[0, 1]` with
/// `y = a + (m - a) u^k`, which cancels an endpoint factor `(y - a)^e`
/// when `k = 1/(1+e)`.
pub fn integrate_piece_nodes<T: Real, F: FnMut(Node<T>) -> T>(
    mut f: F,
    piece: &Piece<T>,
    tol: &Tolerance<T>,
) -> Result<Quad<T>> {
    let Piece { a, b, ea, eb } = *piece;
    if !(b > a) {
        return Ok(Quad::zero());
    }
    let half_tol = tol.scaled(2);
    let width = b - a;
    let mid = (a + b) / T::lit(2.0);
    let ka = substitution_power(ea);
    let kb = substitution_power(eb);
    let wa = mid - a;
    let wb = b - mid;
    let left = integrate(
        |u: T| {
            let from_a = wa * Float::powf(u, ka);
            let node = Node {
                y: a + from_a,
                a,
                b,
                from_a,
                to_b: width - from_a,
            };
            f(node) * wa * ka * Float::powf(u, ka - T::one())
        },
        T::zero(),
        T::one(),
        &half_tol,
    )?;
    let right = integrate(
        |v: T| {
            let to_b = wb * Float::powf(v, kb);
            let node = Node {
                y: b - to_b,
                a,
                b,
                from_a: width - to_b,
                to_b,
            };
            f(node) * wb * kb * Float::powf(v, kb - T::one())
        },
        T::zero(),
        T::one(),
        &half_tol,
    )?;
    Ok(left + right)
}

pub fn integrate_piece<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    piece: &Piece<T>,
    tol: &Tolerance<T>,
) -> Result<Quad<T>> {
    integrate_piece_nodes(|n| f(n.y), piece, tol)
}

pub fn integrate_pieces_nodes<T: Real, F: FnMut(Node<T>) -> T>(
    mut f: F,
    pieces: &[Piece<T>],
    tol: &Tolerance<T>,
) -> Result<Quad<T>> {
    let per = tol.scaled(pieces.len());
    let mut total = Quad::zero();
    for piece in pieces {
        total = total + integrate_piece_nodes(&mut f, piece, &per)?;
    }
    Ok(total)
}

pub fn integrate_pieces<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    pieces: &[Piece<T>],
    tol: &Tolerance<T>,
) -> Result<Quad<T>> {
    integrate_pieces_nodes(|n| f(n.y), pieces, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x: f64| x * x * x, 0.0, 2.0, &Tolerance::default()).unwrap();
        assert!((q.value - 4.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory() {
        let q = integrate(|x: f64| (10.0 * x).sin(), 0.0, PI, &Tolerance::default()).unwrap();
        assert!(q.value.abs() < 1e-12);
    }

    #[test]
    fn beta_half_half() {
        // ∫ y^{-1/2}(1-y)^{-1/2} = π
        let piece = Piece::new(0.0, 1.0, -0.5, -0.5);
        let q = integrate_piece(
            |y: f64| y.powf(-0.5) * (1.0 - y).powf(-0.5),
            &piece,
            &Tolerance::default(),
        )
        .unwrap();
        assert!((q.value - PI).abs() < 1e-12, "{}", q.value);
    }

    #[test]
    fn strong_singularity() {
        // ∫ y^{-0.9} = 10
        let piece = Piece::new(0.0, 1.0, -0.9, 0.0);
        let q = integrate_piece(|y: f64| y.powf(-0.9), &piece, &Tolerance::default()).unwrap();
        assert!((q.value - 10.0).abs() < 1e-11, "{}", q.value);
    }

    #[test]
    fn strong_singularity_at_right_end() {
        // ∫ (1-y)^{-0.9} = 10, needs the exact distance to 1
        let piece = Piece::new(0.0, 1.0, 0.0, -0.9);
        let q = integrate_piece_nodes(|n| n.one_minus().powf(-0.9), &piece, &Tolerance::default())
            .unwrap();
        assert!((q.value - 10.0).abs() < 1e-11, "{}", q.value);
    }

    #[test]
    fn cusp() {
        // ∫ sqrt(y) = 2/3
        let piece = Piece::new(0.0, 1.0, 0.5, 0.0);
        let q = integrate_piece(|y: f64| y.sqrt(), &piece, &Tolerance::default()).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn non_convergence_reported() {
        let tol = Tolerance {
            abs: 1e-14,
            rel: 0.0,
            max_intervals: 3,
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &tol);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn f32_works() {
        let q = integrate(|x: f32| x.exp(), 0.0, 1.0, &Tolerance::absolute(1e-5)).unwrap();
        assert!((q.value - (1f32.exp() - 1.0)).abs() < 1e-5);
    }
}
