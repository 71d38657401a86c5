//! Root counts ω(p), admissibility, and the explicit constants.

use ekq::admissible::{harmonic_threshold, is_admissible, omega, explicit_constants, AdmissibleSet};

fn main() -> ekq::Result<()> {
    for elems in [vec![2u64], vec![1, 2], vec![2, 6], vec![2, 4, 6, 8]] {
        let a = AdmissibleSet::new(elems)?;
        let counts: Vec<String> = [2u64, 3, 5, 7]
            .iter()
            .map(|&p| Ok(format!("w({p})={}", omega(p, &a)?)))
            .collect::<ekq::Result<_>>()?;
        println!(
            "{:?}: mu={:.4} admissible={} {}",
            a.elements(),
            a.mu(),
            is_admissible(&a),
            counts.join(" ")
        );
    }
    for c in [2.0, 3.0, 4.0] {
        let (n, s) = harmonic_threshold(c, true)?;
        println!("least N with sum 1/(2n) > {c}: {n} ({s:.7})");
    }
    for c in explicit_constants() {
        println!("{} = {:.12}", c.name, c.value);
    }
    Ok(())
}
