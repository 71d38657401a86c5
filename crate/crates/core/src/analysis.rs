//! Distribution statistics over computed records: prime counts, histograms
//! with a normal overlay, neighbour-prime classes and envelope monitoring.

use std::f64::consts::PI;

use crate::ek::EkRecord;
use crate::error::{Error, Result};
use crate::primes::{is_prime, Sieve};

/// π(Q) − π(Q/2).
pub fn pi_star(big_q: f64) -> Result<u64> {
    if !(big_q >= 2.0) || !big_q.is_finite() {
        return Err(Error::InvalidArgument(format!("pi_star needs Q >= 2, got {big_q}")));
    }
    let hi = big_q.floor() as u64;
    let lo = (big_q / 2.0).floor() as u64;
    Ok(Sieve::default().count(lo, hi))
}

/// Mergeable running mean and variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Combine two disjoint samples.
    pub fn merge(&mut self, o: &RunningStats) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let nf = n as f64;
        self.mean += d * o.n as f64 / nf;
        self.m2 += o.m2 + d * d * (self.n as f64) * (o.n as f64) / nf;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> Option<f64> {
        (self.n > 0).then_some(self.mean)
    }

    /// Sample standard deviation (n − 1 denominator).
    pub fn sigma(&self) -> Option<f64> {
        (self.n > 1).then(|| (self.m2 / (self.n - 1) as f64).sqrt())
    }
}

/// Streaming fixed-width histogram on [lo, hi) with underflow and overflow cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bin_width: f64,
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
    skipped: u64,
    stats: RunningStats,
}

impl Histogram {
    pub fn new(bin_width: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(bin_width > 0.0) || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "histogram needs width > 0 and lo < hi (width={bin_width}, lo={lo}, hi={hi})"
            )));
        }
        let bins = ((hi - lo) / bin_width - 1e-9).ceil().max(1.0) as usize;
        Ok(Histogram {
            bin_width,
            lo,
            hi,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
            skipped: 0,
            stats: RunningStats::default(),
        })
    }

    /// Non-finite values are skipped and counted separately.
    pub fn push(&mut self, v: f64) {
        if !v.is_finite() {
            self.skipped += 1;
            return;
        }
        self.stats.push(v);
        if v < self.lo {
            self.underflow += 1;
        } else if v >= self.hi {
            self.overflow += 1;
        } else {
            let last = self.counts.len() - 1;
            let i = ((v - self.lo) / self.bin_width) as usize;
            self.counts[i.min(last)] += 1;
        }
    }

    /// Merge a histogram built with identical binning.
    pub fn merge(&mut self, o: &Histogram) -> Result<()> {
        if self.counts.len() != o.counts.len() || self.lo != o.lo || self.bin_width != o.bin_width {
            return Err(Error::InvalidArgument("histogram binning differs".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            *a += b;
        }
        self.underflow += o.underflow;
        self.overflow += o.overflow;
        self.skipped += o.skipped;
        self.stats.merge(&o.stats);
        Ok(())
    }

    pub fn summary(&self) -> HistogramSummary {
        HistogramSummary {
            bin_width: self.bin_width,
            lo: self.lo,
            hi: self.hi,
            counts: self.counts.clone(),
            underflow: self.underflow,
            overflow: self.overflow,
            skipped: self.skipped,
            n: self.stats.count(),
            mean: self.stats.mean(),
            sigma: self.stats.sigma(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramSummary {
    pub bin_width: f64,
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    /// Non-finite inputs, not part of `n`.
    pub skipped: u64,
    pub n: u64,
    /// `None` for an empty sample.
    pub mean: Option<f64>,
    /// Sample standard deviation; `None` for fewer than two values.
    pub sigma: Option<f64>,
}

impl HistogramSummary {
    pub fn bin_center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.bin_width
    }

    /// Expected count in bin `i` under the fitted normal law.
    pub fn normal_overlay(&self, i: usize) -> Option<f64> {
        let (mu, s) = (self.mean?, self.sigma?);
        if s == 0.0 {
            return None;
        }
        Some(self.n as f64 * self.bin_width * normal_density(self.bin_center(i), mu, s))
    }
}

pub fn histogram(values: &[f64], bin_width: f64, lo: f64, hi: f64) -> Result<HistogramSummary> {
    let mut h = Histogram::new(bin_width, lo, hi)?;
    for &v in values {
        h.push(v);
    }
    Ok(h.summary())
}

/// N(x; μ, σ) = exp(−(x−μ)²/(2σ²))/(σ√(2π)).
pub fn normal_density(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

/// κ restricted to primes q with m·q + b prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpikeReport {
    pub m: u64,
    pub b: i8,
    pub exclusive: bool,
    pub count: u64,
    pub sample_mean: Option<f64>,
    pub target: f64,
}

fn neighbour_is_prime(rec: &EkRecord, m: u64, b: i8) -> bool {
    match rec.flags.get(m, b) {
        Some(f) => f,
        None => {
            let base = m * rec.q;
            let n = if b > 0 { base + 1 } else { base - 1 };
            is_prime(n)
        }
    }
}

/// Members of the (m, b) class. In exclusive mode every other neighbour
/// m′q ± 1 with even m′ ≤ m must be composite.
pub fn in_spike_class(rec: &EkRecord, m: u64, b: i8, exclusive: bool) -> bool {
    if !neighbour_is_prime(rec, m, b) {
        return false;
    }
    if !exclusive {
        return true;
    }
    (2..=m).step_by(2).all(|mp| {
        [1i8, -1]
            .into_iter()
            .all(|bp| (mp, bp) == (m, b) || !neighbour_is_prime(rec, mp, bp))
    })
}

pub fn spike_report(records: &[EkRecord], m: u64, b: i8, exclusive: bool) -> Result<SpikeReport> {
    if m == 0 || m % 2 == 1 || (b != 1 && b != -1) {
        return Err(Error::InvalidArgument(format!(
            "spike class needs even m >= 2 and b = ±1 (m={m}, b={b})"
        )));
    }
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records".into()));
    }
    let mut stats = RunningStats::default();
    for r in records.iter().filter(|r| in_spike_class(r, m, b, exclusive)) {
        stats.push(r.kappa);
    }
    Ok(SpikeReport {
        m,
        b,
        exclusive,
        count: stats.count(),
        sample_mean: stats.mean(),
        target: b as f64 / (2.0 * m as f64),
    })
}

/// Fraction of records with |Δ| ≤ cap and the mean |Δ|.
pub fn delta_stats(records: &[EkRecord], cap: f64) -> Result<(f64, f64)> {
    if !(cap > 0.0) {
        return Err(Error::InvalidArgument(format!("cap must be positive, got {cap}")));
    }
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records".into()));
    }
    let within = records.iter().filter(|r| r.delta.abs() <= cap).count();
    let mut stats = RunningStats::default();
    for r in records {
        stats.push(r.delta.abs());
    }
    Ok((within as f64 / records.len() as f64, stats.mean().unwrap_or(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnomalyKind {
    /// |κ(q)| ≥ log log q + 1.41, q ≥ 17
    Hard,
    /// 2|κ(q)| > log log log q + 2, q ≥ 20
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anomaly {
    pub q: u64,
    pub kappa: f64,
    pub kind: AnomalyKind,
    pub bound: f64,
}

pub fn envelope_check(records: &[EkRecord]) -> Vec<Anomaly> {
    let mut out = Vec::new();
    for r in records {
        let lq = (r.q as f64).ln();
        if r.q >= 17 {
            let bound = lq.ln() + 1.41;
            if r.kappa.abs() >= bound || !r.kappa.is_finite() {
                out.push(Anomaly {
                    q: r.q,
                    kappa: r.kappa,
                    kind: AnomalyKind::Hard,
                    bound,
                });
            }
        }
        if r.q >= 20 {
            let bound = lq.ln().ln() + 2.0;
            if 2.0 * r.kappa.abs() > bound {
                out.push(Anomaly {
                    q: r.q,
                    kappa: r.kappa,
                    kind: AnomalyKind::Soft,
                    bound,
                });
            }
        }
    }
    out
}
