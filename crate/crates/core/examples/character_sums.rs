//! Character sums S_j = Σ_k f(g^k/q)·e^{2πijk/(q−1)} for the three kernels.
//!
//! cargo run --example character_sums -- 13

use ekq::charsum::{character_sums, KernelId};
use ekq::primes::PrimeContext;

fn main() -> ekq::Result<()> {
    let q: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(13);
    let ctx = PrimeContext::new(q)?;
    println!("q = {q}, primitive root g = {}, n = {}", ctx.g, ctx.n);
    for kernel in KernelId::ALL {
        let s = character_sums::<f64>(&ctx, kernel)?;
        s.check_invariants()?;
        println!("\n{kernel}");
        for j in 0..s.len() {
            let v = s.get(j);
            println!("  j={j:>3}  {:>+.15} {:>+.15}i", v.re, v.im);
        }
    }
    Ok(())
}
