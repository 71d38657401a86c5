//! Distribution of κ(q) over a prime range: histogram, spike classes, Δ.
//!
//! cargo run --release --example distribution -- 20000

use ekq::analysis::{delta_stats, histogram, spike_report};
use ekq::ek::{compute_record, Precision};
use ekq::primes::primes_in;
use rayon::prelude::*;

fn main() -> ekq::Result<()> {
    let hi: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let records = primes_in(2, hi)
        .par_iter()
        .map(|&q| compute_record(q, Precision::Double))
        .collect::<ekq::Result<Vec<_>>>()?;
    let kappas: Vec<f64> = records.iter().map(|r| r.kappa).collect();
    let h = histogram(&kappas, 0.05, -0.6, 0.6)?;
    println!("{} primes, mean {:+.5}, sigma {:.5}", h.n, h.mean.unwrap_or(0.0), h.sigma.unwrap_or(0.0));
    let peak = h.counts.iter().copied().max().unwrap_or(1).max(1);
    for (i, &c) in h.counts.iter().enumerate() {
        println!("{:+.3} {:>6} {}", h.bin_center(i), c, "#".repeat((60 * c / peak) as usize));
    }
    for (m, b) in [(2u64, 1i8), (2, -1), (4, 1), (4, -1)] {
        for exclusive in [false, true] {
            let s = spike_report(&records, m, b, exclusive)?;
            println!(
                "{m}q{b:+} {}: {} primes, mean {:+.4} (target {:+.4})",
                if exclusive { "exclusive" } else { "inclusive" },
                s.count,
                s.sample_mean.unwrap_or(f64::NAN),
                s.target
            );
        }
    }
    let (frac, mean_abs) = delta_stats(&records, 0.08)?;
    println!("|kappa - r| <= 0.08 for {:.2}% of q, mean {mean_abs:.4}", 100.0 * frac);
    Ok(())
}
