use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ekq::ek::Precision;
use ekq::store::{cmd_analyze, cmd_compute, cmd_constants, cmd_verify_table2, AnalyzeOptions, RunConfig};

#[derive(Parser)]
#[command(name = "ekq", version, about = "Euler-Kronecker constants of prime cyclotomic fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one CSV row per odd prime in [min, max].
    Compute {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value = "double")]
        precision: Precision,
        #[arg(long, default_value_t = 1000)]
        checkpoint_every: usize,
    },
    /// Compare kappa(q) for q < 1000 with the embedded reference table.
    VerifyTable2 {
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value = "double")]
        precision: Precision,
    },
    /// Histogram, spike classes, delta statistics and anomalies of a CSV file.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// Bin width.
        #[arg(long, default_value_t = 0.005)]
        bins: f64,
        #[arg(long, default_value = "-0.6:0.6", value_parser = parse_range, allow_hyphen_values = true)]
        range: (f64, f64),
        /// Neighbour class m:b, e.g. 2:+1.
        #[arg(long, value_parser = parse_spike, allow_hyphen_values = true)]
        spike: Option<(u64, i8)>,
        #[arg(long)]
        exclusive: bool,
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Print the explicit constants.
    Constants,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("hi: {e}"))?;
    if !(lo < hi) {
        return Err(format!("need lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_spike(s: &str) -> Result<(u64, i8), String> {
    let (a, b) = s.split_once(':').ok_or("expected m:b")?;
    let m: u64 = a.trim().parse().map_err(|e| format!("m: {e}"))?;
    let b: i8 = b.trim().trim_start_matches('+').parse().map_err(|e| format!("b: {e}"))?;
    if m < 2 || m % 2 == 1 || (b != 1 && b != -1) {
        return Err(format!("need even m >= 2 and b = +1 or -1, got {m}:{b}"));
    }
    Ok((m, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = match cli.cmd {
        Cmd::Compute {
            min,
            max,
            out: path,
            threads,
            precision,
            checkpoint_every,
        } => {
            let cfg = RunConfig {
                q_min: min,
                q_max: max,
                threads,
                precision,
                out_path: path,
                checkpoint_every,
            };
            cmd_compute(&cfg, &mut out)
        }
        Cmd::VerifyTable2 { tol, precision } => cmd_verify_table2(tol, precision, &mut out),
        Cmd::Analyze {
            input,
            bins,
            range,
            spike,
            exclusive,
            out_prefix,
        } => {
            let opts = AnalyzeOptions {
                bin_width: bins,
                lo: range.0,
                hi: range.1,
                spike,
                exclusive,
                ..AnalyzeOptions::new(out_prefix)
            };
            cmd_analyze(&input, &opts, &mut out)
        }
        Cmd::Constants => cmd_constants(&mut out),
    };
    let _ = out.flush();
    ExitCode::from(status.code() as u8)
}
