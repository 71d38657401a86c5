//! h₁(q) = R(q)·G(q) for small primes, rounded to the nearest integer.

use ekq::ek::kummer_check_prime;
use ekq::primes::primes_in;

fn main() -> ekq::Result<()> {
    println!("{:>4} {:>22} {:>12} {:>10}", "q", "R*G", "h1", "gap");
    for q in primes_in(2, 100) {
        let c = kummer_check_prime(q)?;
        println!("{q:>4} {:>22.12} {:>12} {:>10.1e}", c.h1_approx, c.nearest_int, c.gap);
    }
    Ok(())
}
