//! Truncated prime sums over p^m ≡ ±1 mod q compared with the closed forms.
//!
//! cargo run --release --example prime_sum_estimators -- 1e7

use ekq::ek::{compute_record, Precision};
use ekq::prime_sums::{estimates, s12};

fn main() -> ekq::Result<()> {
    let x: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1e7);
    let qs = [3u64, 5, 7, 11, 13];
    println!("x = {x:e}");
    for e in estimates(&qs, x)? {
        let rec = compute_record(e.q, Precision::Double)?;
        println!(
            "q={:>3}  f={:+.6} g={:+.6} v={:+.6} w={:+.6}  kappa~{:+.4} (exact {:+.4})  r~{:+.4} (exact {:+.4})",
            e.q,
            e.f,
            e.g,
            e.v,
            e.w,
            e.kappa_estimate(),
            rec.kappa,
            e.r_estimate(),
            rec.r
        );
    }
    let s = s12(5, 1e6)?;
    println!("q=5: S1={:.6} S2={:.6} (tail radius {:.1e})", s.s1, s.s2, s.tail_radius);
    Ok(())
}
