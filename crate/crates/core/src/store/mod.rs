//! Persistence and the command implementations behind the `ekq` binary.

pub mod commands;
pub mod csvio;
pub mod table2;

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::envelope_check;
use crate::ek::{compute_record, EkRecord, Precision};
use crate::error::{Error, Result};
use crate::primes::primes_in;

pub use commands::{
    cmd_analyze, cmd_constants, cmd_verify_table2, verify_reference, AnalyzeOptions, Table2Report,
};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    VerificationFailed = 1,
    UsageOrIo = 2,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Numeric failures count as verification failures, everything else as usage or I/O.
    pub fn for_error(e: &Error) -> Exit {
        match e {
            Error::Invariant { .. } | Error::NumericBreakdown { .. } | Error::KernelNotFinite { .. } => {
                Exit::VerificationFailed
            }
            _ => Exit::UsageOrIo,
        }
    }
}

/// A range run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q_min: u64,
    pub q_max: u64,
    pub threads: usize,
    pub precision: Precision,
    pub out_path: PathBuf,
    /// Records between checkpoints.
    pub checkpoint_every: usize,
}

impl RunConfig {
    pub fn new(q_min: u64, q_max: u64, out_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            q_min,
            q_max,
            threads: 1,
            precision: Precision::Double,
            out_path: out_path.into(),
            checkpoint_every: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q_min < 3 || self.q_min > self.q_max {
            return Err(Error::InvalidRange {
                lo: self.q_min,
                hi: self.q_max,
            });
        }
        if self.threads == 0 {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::InvalidArgument("checkpoint interval must be at least 1".into()));
        }
        Ok(())
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        let mut s = self.out_path.clone().into_os_string();
        s.push(".ckpt");
        PathBuf::from(s)
    }
}

/// Resume state stored next to the output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub q_min: u64,
    pub q_max: u64,
    pub precision: Precision,
    /// Last q whose row is in the file.
    pub last_q: u64,
    /// Length of the valid prefix of the output file.
    pub bytes: u64,
    /// SHA-256 of that prefix, hex.
    pub sha256: String,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
        match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).map(Some).map_err(|e| Error::Checkpoint {
                path: path.to_path_buf(),
                detail: e.to_string(),
            }),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("ckpt.tmp");
        let text = serde_json::to_string_pretty(self).expect("checkpoint serialises");
        fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }
}

/// Reported after every checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progress {
    pub last_q: u64,
    pub done: usize,
    pub total: usize,
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    Complete { rows: usize },
    /// Stopped by the observer; the checkpoint allows resuming.
    Interrupted { last_q: u64 },
}

fn hash_prefix(path: &Path, len: u64) -> Result<Sha256> {
    let mut f = File::open(path).map_err(|e| Error::io(path, e))?;
    let actual = f.metadata().map_err(|e| Error::io(path, e))?.len();
    if actual < len {
        return Err(Error::Checkpoint {
            path: path.to_path_buf(),
            detail: format!("output has {actual} bytes, checkpoint expects {len}"),
        });
    }
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut left = len;
    while left > 0 {
        let want = left.min(buf.len() as u64) as usize;
        f.read_exact(&mut buf[..want]).map_err(|e| Error::io(path, e))?;
        h.update(&buf[..want]);
        left -= want as u64;
    }
    Ok(h)
}

/// Compute every odd prime in `[q_min, q_max]` and write rows in q order.
///
/// `observer` is called after each checkpoint; returning `Break` stops the run
/// with the checkpoint in place.
pub fn run_compute(cfg: &RunConfig, mut observer: impl FnMut(&Progress) -> ControlFlow<()>) -> Result<RunOutcome> {
    cfg.validate()?;
    let primes = primes_in(cfg.q_min - 1, cfg.q_max);
    let ckpt_path = cfg.checkpoint_path();
    let out = &cfg.out_path;

    let (mut hasher, mut bytes, start) = match Checkpoint::load(&ckpt_path)? {
        Some(c) => {
            if (c.q_min, c.q_max, c.precision) != (cfg.q_min, cfg.q_max, cfg.precision) {
                return Err(Error::Checkpoint {
                    path: ckpt_path,
                    detail: format!(
                        "checkpoint is for [{}, {}] in {} mode",
                        c.q_min, c.q_max, c.precision
                    ),
                });
            }
            let h = hash_prefix(out, c.bytes)?;
            if hex::encode(h.clone().finalize()) != c.sha256 {
                return Err(Error::Checkpoint {
                    path: ckpt_path,
                    detail: "output prefix digest does not match".into(),
                });
            }
            let f = OpenOptions::new().write(true).open(out).map_err(|e| Error::io(out, e))?;
            f.set_len(c.bytes).map_err(|e| Error::io(out, e))?;
            let start = primes.partition_point(|&p| p <= c.last_q);
            log::info!("resuming {} after q={} ({} bytes)", out.display(), c.last_q, c.bytes);
            (h, c.bytes, start)
        }
        None => {
            let header = csvio::header_line();
            fs::write(out, &header).map_err(|e| Error::io(out, e))?;
            let mut h = Sha256::new();
            h.update(header.as_bytes());
            (h, header.len() as u64, 0)
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let file = OpenOptions::new().append(true).open(out).map_err(|e| Error::io(out, e))?;
    let mut writer = BufWriter::new(file);

    let mut done = start;
    for chunk in primes[start..].chunks(cfg.checkpoint_every) {
        let records: Vec<EkRecord> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&q| compute_record(q, cfg.precision))
                .collect::<Result<Vec<_>>>()
        })?;
        for a in envelope_check(&records) {
            log::warn!("envelope anomaly: q={} kappa={} bound={} ({:?})", a.q, a.kappa, a.bound, a.kind);
        }
        for r in &records {
            let line = csvio::format_record(r);
            writer.write_all(line.as_bytes()).map_err(|e| Error::io(out, e))?;
            hasher.update(line.as_bytes());
            bytes += line.len() as u64;
        }
        writer.flush().map_err(|e| Error::io(out, e))?;
        done += chunk.len();
        let last_q = *chunk.last().expect("chunks are nonempty");
        Checkpoint {
            q_min: cfg.q_min,
            q_max: cfg.q_max,
            precision: cfg.precision,
            last_q,
            bytes,
            sha256: hex::encode(hasher.clone().finalize()),
        }
        .store(&ckpt_path)?;
        let progress = Progress {
            last_q,
            done,
            total: primes.len(),
        };
        log::debug!("{done}/{} primes, last q={last_q}", primes.len());
        if done < primes.len() && observer(&progress).is_break() {
            return Ok(RunOutcome::Interrupted { last_q });
        }
    }
    match fs::remove_file(&ckpt_path) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(Error::io(&ckpt_path, e)),
    }
    Ok(RunOutcome::Complete { rows: primes.len() })
}

/// The `compute` command: run to completion and report.
pub fn cmd_compute(cfg: &RunConfig, out: &mut dyn Write) -> Exit {
    match run_compute(cfg, |_| ControlFlow::Continue(())) {
        Ok(RunOutcome::Complete { rows }) => {
            let _ = writeln!(out, "wrote {rows} rows to {}", cfg.out_path.display());
            Exit::Success
        }
        Ok(RunOutcome::Interrupted { last_q }) => {
            let _ = writeln!(out, "interrupted after q={last_q}");
            Exit::UsageOrIo
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            Exit::for_error(&e)
        }
    }
}

/// Read a record file from disk.
pub fn load_records(path: &Path) -> Result<Vec<EkRecord>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    csvio::read_records(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(cfg: &RunConfig) -> Vec<u8> {
        assert_eq!(run_compute(cfg, |_| ControlFlow::Continue(())).unwrap(), RunOutcome::Complete {
            rows: primes_in(cfg.q_min - 1, cfg.q_max).len()
        });
        assert!(!cfg.checkpoint_path().exists());
        fs::read(&cfg.out_path).unwrap()
    }

    #[test]
    fn small_range_rows() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig::new(3, 13, dir.path().join("a.csv"));
        let bytes = run(&cfg);
        let recs = csvio::read_records(&bytes[..]).unwrap();
        assert_eq!(recs.iter().map(|r| r.q).collect::<Vec<_>>(), vec![3, 5, 7, 11, 13]);
    }

    #[test]
    fn resume_matches_uninterrupted() {
        let dir = tempfile::tempdir().unwrap();
        let mut full = RunConfig::new(3, 400, dir.path().join("full.csv"));
        full.checkpoint_every = 7;
        let want = run(&full);

        let mut cfg = full.clone();
        cfg.out_path = dir.path().join("part.csv");
        cfg.threads = 3;
        let mut calls = 0;
        let outcome = run_compute(&cfg, |_| {
            calls += 1;
            if calls == 3 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap();
        assert!(matches!(outcome, RunOutcome::Interrupted { .. }));
        assert!(cfg.checkpoint_path().exists());
        // garbage past the checkpoint is discarded on resume
        let mut f = OpenOptions::new().append(true).open(&cfg.out_path).unwrap();
        f.write_all(b"401,partial").unwrap();
        drop(f);
        assert_eq!(run(&cfg), want);
    }

    #[test]
    fn corrupted_prefix_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(3, 200, dir.path().join("c.csv"));
        cfg.checkpoint_every = 5;
        run_compute(&cfg, |_| ControlFlow::Break(())).unwrap();
        let mut bytes = fs::read(&cfg.out_path).unwrap();
        let i = bytes.len() - 3;
        bytes[i] = if bytes[i] == b'1' { b'0' } else { b'1' };
        fs::write(&cfg.out_path, bytes).unwrap();
        assert!(matches!(
            run_compute(&cfg, |_| ControlFlow::Continue(())),
            Err(Error::Checkpoint { .. })
        ));
        let mut other = cfg.clone();
        other.q_max = 300;
        assert!(matches!(
            run_compute(&other, |_| ControlFlow::Continue(())),
            Err(Error::Checkpoint { .. })
        ));
    }

    #[test]
    fn invalid_configs() {
        let mut buf = Vec::new();
        assert_eq!(cmd_compute(&RunConfig::new(20, 10, "/nonexistent/x.csv"), &mut buf), Exit::UsageOrIo);
        assert_eq!(cmd_compute(&RunConfig::new(3, 10, "/nonexistent/x.csv"), &mut buf), Exit::UsageOrIo);
        let mut cfg = RunConfig::new(3, 10, "x.csv");
        cfg.threads = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn tampered_reference_names_q() {
        let mut reference: Vec<(u64, &str)> = table2::TABLE2[..10].to_vec();
        let r = verify_reference(&reference, 1e-8, Precision::Double).unwrap();
        assert!(r.passed(), "{r:?}");
        reference[0].1 = "-0.336224373301549299654816272011";
        let r = verify_reference(&reference, 1e-8, Precision::Double).unwrap();
        assert_eq!(r.offending.len(), 1);
        assert_eq!(r.offending[0].0, 3);
        assert_eq!(r.worst_q, 3);
    }

    #[test]
    fn constants_output() {
        let mut buf = Vec::new();
        assert_eq!(cmd_constants(&mut buf), Exit::Success);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("c2(55)") && text.contains("N(6)"), "{text}");
    }
}
