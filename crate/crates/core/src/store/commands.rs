use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use statrs::distribution::{ContinuousCDF, Normal};

use super::table2::TABLE2;
use super::{load_records, Exit};
use crate::admissible::{harmonic_threshold, explicit_constants};
use crate::analysis::{delta_stats, envelope_check, histogram, spike_report, AnomalyKind, HistogramSummary};
use crate::dd::DoubleDouble;
use crate::ek::{compute_kappa, Precision};
use crate::error::{Error, Result};

/// Outcome of comparing computed κ(q) with a reference table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table2Report {
    pub tol: f64,
    pub max_dev: f64,
    pub worst_q: u64,
    /// `(q, deviation)` for every entry above `tol`, ascending q.
    pub offending: Vec<(u64, f64)>,
}

impl Table2Report {
    pub fn passed(&self) -> bool {
        self.offending.is_empty()
    }
}

fn deviation<T: crate::charsum::FftScalar>(q: u64, reference: &str) -> Result<f64> {
    let k = compute_kappa::<T>(q)?;
    Ok((k - T::parse_decimal(reference)).abs().to_f64())
}

/// Recompute κ for each `(q, decimal)` entry and compare.
pub fn verify_reference(reference: &[(u64, &str)], tol: f64, precision: Precision) -> Result<Table2Report> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be >= 0, got {tol}")));
    }
    let mut report = Table2Report {
        tol,
        max_dev: 0.0,
        worst_q: 0,
        offending: Vec::new(),
    };
    for &(q, text) in reference {
        let dev = match precision {
            Precision::Double => deviation::<f64>(q, text)?,
            Precision::DoubleDouble => deviation::<DoubleDouble>(q, text)?,
        };
        if dev > report.max_dev || report.worst_q == 0 {
            report.max_dev = dev;
            report.worst_q = q;
        }
        if !(dev <= tol) {
            report.offending.push((q, dev));
        }
    }
    Ok(report)
}

/// The `verify-table2` command against the embedded table.
pub fn cmd_verify_table2(tol: f64, precision: Precision, out: &mut dyn Write) -> Exit {
    let report = match verify_reference(&TABLE2, tol, precision) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return Exit::for_error(&e);
        }
    };
    let _ = writeln!(
        out,
        "{} primes, {} mode: max |dev| = {:.3e} at q={} (tol {:.1e})",
        TABLE2.len(),
        precision,
        report.max_dev,
        report.worst_q,
        tol
    );
    if report.passed() {
        let _ = writeln!(out, "PASS");
        Exit::Success
    } else {
        let _ = writeln!(out, "FAIL: {} values exceed tolerance", report.offending.len());
        for (q, d) in &report.offending {
            let _ = writeln!(out, "  q={q} dev={d:.3e}");
        }
        Exit::VerificationFailed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    pub bin_width: f64,
    pub lo: f64,
    pub hi: f64,
    /// One class, or all of (2, ±1) and (4, ±1) when `None`.
    pub spike: Option<(u64, i8)>,
    pub exclusive: bool,
    pub out_prefix: PathBuf,
    pub delta_cap: f64,
}

impl AnalyzeOptions {
    pub fn new(out_prefix: impl Into<PathBuf>) -> Self {
        AnalyzeOptions {
            bin_width: 0.005,
            lo: -0.6,
            hi: 0.6,
            spike: None,
            exclusive: false,
            out_prefix: out_prefix.into(),
            delta_cap: 0.08,
        }
    }

    pub fn output_path(&self, suffix: &str) -> PathBuf {
        let mut s = self.out_prefix.clone().into_os_string();
        s.push(suffix);
        PathBuf::from(s)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_histogram(path: &Path, h: &HistogramSummary) -> Result<()> {
    let mut w = create(path)?;
    let normal = match (h.mean, h.sigma) {
        (Some(m), Some(s)) if s > 0.0 => Normal::new(m, s).ok(),
        _ => None,
    };
    let n = h.n as f64;
    let fmt = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:.6}"));
    let mut lines = vec!["bin_center,count,normal_overlay".to_string()];
    lines.push(format!(
        "-inf,{},{}",
        h.underflow,
        fmt(normal.as_ref().map(|d| n * d.cdf(h.lo)))
    ));
    for (i, c) in h.counts.iter().enumerate() {
        lines.push(format!("{:.6},{},{}", h.bin_center(i), c, fmt(h.normal_overlay(i))));
    }
    lines.push(format!(
        "inf,{},{}",
        h.overflow,
        fmt(normal.as_ref().map(|d| n * d.sf(h.hi)))
    ));
    for l in lines {
        writeln!(w, "{l}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn analyze(in_path: &Path, opts: &AnalyzeOptions, out: &mut dyn Write) -> Result<()> {
    let records = load_records(in_path)?;
    if records.is_empty() {
        return Err(Error::MalformedCsv {
            line: 1,
            detail: "no data rows".into(),
        });
    }
    let kappas: Vec<f64> = records.iter().map(|r| r.kappa).collect();
    let h = histogram(&kappas, opts.bin_width, opts.lo, opts.hi)?;
    let hist_path = opts.output_path("_hist.csv");
    write_histogram(&hist_path, &h)?;
    let _ = writeln!(
        out,
        "{} records, mean kappa {:.6}, sigma {}",
        h.n,
        h.mean.unwrap_or(f64::NAN),
        h.sigma.map_or("n/a".into(), |s| format!("{s:.6}"))
    );

    let classes: Vec<(u64, i8)> = match opts.spike {
        Some(c) => vec![c],
        None => vec![(2, 1), (2, -1), (4, 1), (4, -1)],
    };
    let spike_path = opts.output_path("_spikes.csv");
    let mut w = create(&spike_path)?;
    let io = |e| Error::io(&spike_path, e);
    writeln!(w, "m,b,exclusive,count,sample_mean,target").map_err(io)?;
    for (m, b) in classes {
        let s = spike_report(&records, m, b, opts.exclusive)?;
        let mean = s.sample_mean.map_or_else(String::new, |x| format!("{x:.6}"));
        writeln!(w, "{m},{b:+},{},{},{mean},{:.6}", s.exclusive as u8, s.count, s.target).map_err(io)?;
        let _ = writeln!(
            out,
            "spike {m}q{b:+}{}: {} primes, mean {} (target {:+.4})",
            if s.exclusive { " exclusive" } else { "" },
            s.count,
            if mean.is_empty() { "n/a" } else { &mean },
            s.target
        );
    }
    w.flush().map_err(|e| Error::io(&spike_path, e))?;

    let (frac, mean_abs) = delta_stats(&records, opts.delta_cap)?;
    let delta_path = opts.output_path("_delta.csv");
    let mut w = create(&delta_path)?;
    writeln!(w, "cap,n,fraction_within,mean_abs\n{},{},{frac:.6},{mean_abs:.6}", opts.delta_cap, records.len())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(&delta_path, e))?;
    let _ = writeln!(out, "|delta| <= {}: {:.4}, mean |delta| {mean_abs:.6}", opts.delta_cap, frac);

    let anomalies = envelope_check(&records);
    let anom_path = opts.output_path("_anomalies.csv");
    let mut w = create(&anom_path)?;
    let io = |e| Error::io(&anom_path, e);
    writeln!(w, "q,kappa,kind,bound").map_err(io)?;
    for a in &anomalies {
        let kind = match a.kind {
            AnomalyKind::Hard => "hard",
            AnomalyKind::Soft => "soft",
        };
        writeln!(w, "{},{:.16e},{kind},{:.6}", a.q, a.kappa, a.bound).map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(&anom_path, e))?;
    let _ = writeln!(out, "{} envelope anomalies", anomalies.len());
    Ok(())
}

/// The `analyze` command: histogram, spike classes, Δ statistics, anomalies.
pub fn cmd_analyze(in_path: &Path, opts: &AnalyzeOptions, out: &mut dyn Write) -> Exit {
    match analyze(in_path, opts, out) {
        Ok(()) => Exit::Success,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            Exit::UsageOrIo
        }
    }
}

/// The `constants` command.
pub fn cmd_constants(out: &mut dyn Write) -> Exit {
    for c in explicit_constants() {
        let _ = writeln!(out, "{:<14} {:>22.16}   {}", c.name, c.value, c.expression);
    }
    for c in [4.0, 6.0] {
        match harmonic_threshold(c, true) {
            Ok((n, s)) => {
                let _ = writeln!(out, "N({c}) = {n}: sum_{{n<={n}}} 1/(2n) = {s:.7}");
            }
            Err(e) => {
                let _ = writeln!(out, "error: {e}");
                return Exit::UsageOrIo;
            }
        }
    }
    Exit::Success
}
