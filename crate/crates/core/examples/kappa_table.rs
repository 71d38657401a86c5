//! κ(q), r(q), γ_q⁺ and γ_q for a range of primes, in either precision.
//!
//! cargo run --release --example kappa_table -- 3 200 dd

use ekq::ek::{compute_record, Precision};
use ekq::primes::primes_in;

fn main() -> ekq::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let lo: u64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let hi: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let mode: Precision = args.get(2).map_or(Ok(Precision::Double), |s| s.parse())?;
    println!("{:>7} {:>20} {:>20} {:>20} {:>20}", "q", "kappa", "r", "gamma+", "gamma");
    for q in primes_in(lo.saturating_sub(1).max(2), hi) {
        let r = compute_record(q, mode)?;
        println!("{q:>7} {:>20.15} {:>20.15} {:>20.15} {:>20.15}", r.kappa, r.r, r.gamma_plus, r.gamma);
    }
    Ok(())
}
