//! Streaming last-argmin over a sliding window.
//!
//! A monotone deque holds `(index, value)` with strictly increasing values.
//! Pushing pops every back entry `>=` the new value, so among equal values
//! only the latest index survives and the front is always the window's last
//! argmin.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub struct WindowArgmin<T> {
    width: usize,
    deque: VecDeque<(u64, T)>,
    next: u64,
}

impl<T: PartialOrd + Copy> WindowArgmin<T> {
    /// Window of `width` consecutive points (`N + 1` for the argmin chain).
    pub fn new(width: usize) -> Self {
        assert!(width > 0, "window width must be positive");
        Self {
            width,
            deque: VecDeque::with_capacity(width.min(1 << 16)),
            next: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of values pushed so far.
    pub fn len(&self) -> u64 {
        self.next
    }

    pub fn is_empty(&self) -> bool {
        self.next == 0
    }

    /// Pushes the next value. Once the window is full, returns the offset of
    /// the last argmin from the window's first index.
    pub fn push(&mut self, value: T) -> Option<usize> {
        let idx = self.next;
        self.next += 1;
        while matches!(self.deque.back(), Some(&(_, back)) if back >= value) {
            self.deque.pop_back();
        }
        self.deque.push_back((idx, value));
        let width = self.width as u64;
        while matches!(self.deque.front(), Some(&(front, _)) if front + width <= idx) {
            self.deque.pop_front();
        }
        if idx + 1 < width {
            return None;
        }
        let start = idx + 1 - width;
        self.deque.front().map(|&(i, _)| (i - start) as usize)
    }

    /// Current window minimum.
    pub fn min_value(&self) -> Option<T> {
        self.deque.front().map(|&(_, v)| v)
    }
}

impl WindowArgmin<f64> {
    /// Subtracts `delta` from every stored value. The argmin is invariant
    /// under a common shift; used to keep long heavy-tailed walks near zero.
    pub fn shift(&mut self, delta: f64) {
        for entry in self.deque.iter_mut() {
            entry.1 -= delta;
        }
    }
}

/// Partial sums fed through a [`WindowArgmin`], starting from `S_0 = 0`.
///
/// When `|S|` exceeds a bound the walk and the window are shifted down by
/// the window minimum, which leaves every argmin unchanged and keeps
/// heavy-tailed walks from drifting out of double precision.
#[derive(Debug, Clone)]
pub struct AnchoredWalk {
    window: WindowArgmin<f64>,
    position: f64,
    bound: f64,
    reanchors: u64,
}

impl AnchoredWalk {
    pub const DEFAULT_BOUND: f64 = 1e6;

    pub fn new(width: usize) -> Self {
        let mut window = WindowArgmin::new(width);
        window.push(0.0);
        Self {
            window,
            position: 0.0,
            bound: Self::DEFAULT_BOUND,
            reanchors: 0,
        }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    /// Adds one increment; returns the window's last argmin once full.
    pub fn step(&mut self, increment: f64) -> Option<usize> {
        self.position += increment;
        let out = self.window.push(self.position);
        if self.position.abs() > self.bound {
            let shift = self.window.min_value().unwrap_or(self.position);
            self.window.shift(shift);
            self.position -= shift;
            self.reanchors += 1;
        }
        out
    }

    pub fn position(&self) -> f64 {
        self.position
    }

    /// Number of shifts applied so far.
    pub fn reanchors(&self) -> u64 {
        self.reanchors
    }
}

/// Last argmin of a slice by direct rescan.
pub fn naive_last_argmin<T: PartialOrd>(values: &[T]) -> usize {
    crate::chain::last_argmin(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_window_by_hand() {
        let mut w = WindowArgmin::new(3);
        assert_eq!(w.push(0), None);
        assert_eq!(w.push(-1), None);
        assert_eq!(w.push(0), Some(1)); // [0,-1,0]
        assert_eq!(w.push(-1), Some(2)); // [-1,0,-1] tie -> latest
        assert_eq!(w.push(5), Some(1)); // [0,-1,5]
        assert_eq!(w.push(6), Some(0)); // [-1,5,6]
        assert_eq!(w.push(7), Some(0)); // [5,6,7]
    }

    #[test]
    fn matches_rescan_on_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for width in [1usize, 2, 5, 17] {
            let mut w = WindowArgmin::new(width);
            let mut hist: Vec<i32> = Vec::new();
            let mut s = 0i32;
            for _ in 0..10_000 {
                // integer steps make ties common
                s += rng.random_range(-2..=2);
                hist.push(s);
                let got = w.push(s);
                if hist.len() >= width {
                    let window = &hist[hist.len() - width..];
                    assert_eq!(got, Some(naive_last_argmin(window)));
                } else {
                    assert_eq!(got, None);
                }
            }
        }
    }

    #[test]
    fn anchored_walk_matches_plain_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut plain = WindowArgmin::new(6);
        let mut anchored = AnchoredWalk::new(6).with_bound(5.0);
        plain.push(0.0);
        let mut s = 0.0;
        for _ in 0..20_000 {
            // drifting integer walk, so shifts stay exact
            let x = f64::from(rng.random_range(-1..=2));
            s += x;
            assert_eq!(plain.push(s), anchored.step(x));
        }
        assert!(anchored.reanchors() > 100);
        assert!(anchored.position().abs() <= 8.0);
    }

    #[test]
    fn shift_keeps_argmin() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut a = WindowArgmin::new(8);
        let mut b = WindowArgmin::new(8);
        let mut offset = 0.0;
        let mut s = 0.0f64;
        for step in 0..5_000 {
            s += rng.random::<f64>() - 0.5;
            if step % 97 == 0 {
                let m = b.min_value().unwrap_or(0.0);
                b.shift(m);
                offset += m;
            }
            assert_eq!(a.push(s), b.push(s - offset));
        }
    }
}
