//! Goodness of fit of the simulated argmin process against its exact laws.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::quadrature::Tolerance;
use crate::stable::{arcsine_cdf, semigroup};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    /// Empirical density on the bin.
    pub density: f64,
    /// Exact mass of the bin divided by its width.
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub rho: f64,
    pub samples: usize,
    pub ks: f64,
    /// KS distance with the sup taken over mesh points only; `None` for
    /// samples that do not live on a grid.
    pub ks_mesh: Option<f64>,
    /// Samples outside `[0, 1]`; always zero for a correct extractor.
    pub outside_unit: u64,
    pub histogram: Vec<HistogramBin>,
}

/// `sup |F_n - F|` for a continuous `F`; sorts `samples` in place.
pub fn ks_statistic<F: FnMut(f64) -> Result<f64>>(samples: &mut [f64], mut cdf: F) -> Result<f64> {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// `max_k |F_n(kh) - F(kh)|` over the lattice `0, h, ..., 1`.
///
/// Lattice samples resolve the law only down to one mesh step. Measured
/// against a continuous `F`, the edge cell at 1 alone costs about
/// `h^ρ / Γ(1-ρ)`, which this statistic does not charge.
pub fn ks_statistic_on_mesh<F: FnMut(f64) -> Result<f64>>(
    samples: &[f64],
    mesh: f64,
    mut cdf: F,
) -> Result<f64> {
    if !(mesh > 0.0 && mesh <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "mesh must lie in (0, 1], got {mesh}"
        )));
    }
    let top = (1.0 / mesh).round() as usize;
    let mut counts = vec![0u64; top + 1];
    for &v in samples {
        let k = (v / mesh).round().clamp(0.0, top as f64) as usize;
        counts[k] += 1;
    }
    let n = samples.len() as f64;
    let mut below = 0u64;
    let mut d: f64 = 0.0;
    for (k, &c) in counts.iter().enumerate() {
        below += c;
        let x = (k as f64 * mesh).min(1.0);
        d = d.max((below as f64 / n - cdf(x)?).abs());
    }
    Ok(d)
}

/// Histogram of `samples` on `bins` equal bins of `[0, 1]` and the KS
/// distance to the generalized arcsine law with parameter `rho`.
///
/// `spacing` is the time between samples; fewer than 100 time units in
/// total is refused. With `mesh` set, the lattice KS is reported too.
pub fn empirical_invariant(
    samples: &[f64],
    rho: f64,
    bins: usize,
    spacing: f64,
    mesh: Option<f64>,
) -> Result<InvariantReport> {
    if bins == 0 {
        return Err(Error::InvalidParameter("need at least one bin".into()));
    }
    if samples.len() as f64 * spacing < 100.0 {
        return Err(Error::InsufficientSamples(format!(
            "{} samples at spacing {spacing} cover less than 100 time units",
            samples.len()
        )));
    }
    let outside_unit = samples.iter().filter(|v| !(0.0..=1.0).contains(*v)).count() as u64;
    let mut counts = vec![0u64; bins];
    for &v in samples.iter().filter(|v| (0.0..=1.0).contains(*v)) {
        let b = ((v * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let width = 1.0 / bins as f64;
    let n = samples.len() as f64;
    let mut histogram = Vec::with_capacity(bins);
    for (b, &count) in counts.iter().enumerate() {
        let lo = b as f64 * width;
        let hi = lo + width;
        let mass = arcsine_cdf(rho, hi)? - arcsine_cdf(rho, lo)?;
        histogram.push(HistogramBin {
            lo,
            hi,
            count,
            density: count as f64 / n / width,
            expected: mass / width,
        });
    }
    let mut sorted = samples.to_vec();
    let ks = ks_statistic(&mut sorted, |x| arcsine_cdf(rho, x))?;
    let ks_mesh = mesh
        .map(|h| ks_statistic_on_mesh(samples, h, |x| arcsine_cdf(rho, x)))
        .transpose()?;
    Ok(InvariantReport {
        rho,
        samples: samples.len(),
        ks,
        ks_mesh,
        outside_unit,
        histogram,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfProbe {
    pub y: f64,
    pub empirical: f64,
    pub exact: f64,
}

/// One `x`-bin of the transition comparison. Empty bins carry no estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinComparison {
    pub lo: f64,
    pub hi: f64,
    pub pairs: u64,
    pub atom_hits: u64,
    pub atom_frequency: Option<f64>,
    /// Exact atom weight at the bin centre.
    pub atom_weight: f64,
    /// CDF of the continuous part, renormalized to a probability law.
    pub probes: Vec<CdfProbe>,
}

impl BinComparison {
    pub fn centre(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn atom_deviation(&self) -> Option<f64> {
        self.atom_frequency.map(|f| (f - self.atom_weight).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionReport {
    pub rho: f64,
    pub lag: f64,
    pub band: f64,
    pub bins: Vec<BinComparison>,
}

impl TransitionReport {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "lo",
            "hi",
            "pairs",
            "atom_hits",
            "atom_frequency",
            "atom_weight",
        ])?;
        for b in &self.bins {
            w.write_record([
                fmt_f64(b.lo),
                fmt_f64(b.hi),
                b.pairs.to_string(),
                b.atom_hits.to_string(),
                b.atom_frequency.map(fmt_f64).unwrap_or_default(),
                fmt_f64(b.atom_weight),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Compares pairs `(α̂_s, α̂_{s+t})` with `Q_t`.
///
/// Within each `x`-bin, a pair is an atom event when `α̂_{s+t}` is within
/// `2h` of `α̂_s - t`; its frequency is set against the atom weight at the
/// bin centre. The remaining pairs give an empirical CDF of the continuous
/// part, compared at `y_probes` with the normalized integrated density.
pub fn empirical_transition(
    pairs: &[(f64, f64)],
    rho: f64,
    lag: f64,
    mesh: f64,
    x_bins: &[(f64, f64)],
    y_probes: &[f64],
) -> Result<TransitionReport> {
    if !(lag > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lag must be positive, got {lag}"
        )));
    }
    let band = 2.0 * mesh;
    let tol = Tolerance::default();
    let mut bins = Vec::with_capacity(x_bins.len());
    for &(lo, hi) in x_bins {
        let centre = 0.5 * (lo + hi);
        let q = semigroup(rho, lag, centre)?;
        let atom_weight = q.atom_weight();
        let inside: Vec<(f64, f64)> = pairs
            .iter()
            .copied()
            .filter(|&(x, _)| x >= lo && x < hi)
            .collect();
        let is_atom = |(x, y): (f64, f64)| atom_weight > 0.0 && (y - (x - lag)).abs() <= band;
        let atom_hits = inside.iter().filter(|&&p| is_atom(p)).count() as u64;
        let rest: Vec<f64> = inside
            .iter()
            .filter(|&&p| !is_atom(p))
            .map(|p| p.1)
            .collect();
        let continuous_mass = 1.0 - atom_weight;
        let mut probes = Vec::with_capacity(y_probes.len());
        if !rest.is_empty() && continuous_mass > 0.0 {
            for &y in y_probes {
                let empirical = rest.iter().filter(|&&v| v <= y).count() as f64 / rest.len() as f64;
                let exact = if y >= 1.0 {
                    1.0
                } else {
                    q.continuous_cdf(y, &tol)? / continuous_mass
                };
                probes.push(CdfProbe {
                    y,
                    empirical,
                    exact,
                });
            }
        }
        let count = inside.len() as u64;
        bins.push(BinComparison {
            lo,
            hi,
            pairs: count,
            atom_hits,
            atom_frequency: (count > 0).then(|| atom_hits as f64 / count as f64),
            atom_weight,
            probes,
        });
    }
    Ok(TransitionReport {
        rho,
        lag,
        band,
        bins,
    })
}

impl InvariantReport {
    /// `lo,hi,count,density,expected` table.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["lo", "hi", "count", "density", "expected"])?;
        for b in &self.histogram {
            w.write_record([
                fmt_f64(b.lo),
                fmt_f64(b.hi),
                b.count.to_string(),
                fmt_f64(b.density),
                fmt_f64(b.expected),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
