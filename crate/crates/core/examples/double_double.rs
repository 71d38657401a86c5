//! Double-double arithmetic and the special functions in 32-digit precision.

use ekq::ek::compute_kappa;
use ekq::special::{hurwitz_at_zero, ln_gamma};
use ekq::{DoubleDouble as DD, Real};

fn main() -> ekq::Result<()> {
    let c = DD::constants();
    println!("pi        = {}", c.pi.to_decimal(32));
    println!("gamma     = {}", c.euler_gamma.to_decimal(32));
    let third = DD::one() / DD::from_f64(3.0);
    println!("lnG(1/3)  = {}", ln_gamma(third)?.to_decimal(32));
    let h = hurwitz_at_zero(third)?;
    println!("z''(0,1/3)= {}", h.z2.to_decimal(32));
    for q in [3u64, 23, 997] {
        let k: DD = compute_kappa(q)?;
        let kf: f64 = compute_kappa(q)?;
        println!("kappa({q:>3}) = {}  (double {kf:+.17})", k.to_decimal(30));
    }
    Ok(())
}
