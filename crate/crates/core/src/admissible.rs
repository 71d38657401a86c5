//! Admissible sets, their root counts ω(p), and explicit constants used in the
//! accompanying estimates.

use crate::error::{Error, Result};
use crate::primes::{is_prime, small_primes_upto, Sieve};
use crate::real::Real;
use crate::special::CompensatedSum;

/// A finite set of distinct positive integers with measure μ(A) = Σ 1/a.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleSet {
    elements: Vec<u64>,
    mu: f64,
}

impl AdmissibleSet {
    /// Sorts the input; rejects zero and repeated elements.
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        if elements.first() == Some(&0) {
            return Err(Error::InvalidArgument("set elements must be positive".into()));
        }
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("set elements must be distinct".into()));
        }
        let mut mu = CompensatedSum::new();
        for &a in &elements {
            mu.add(1.0 / a as f64);
        }
        Ok(AdmissibleSet {
            elements,
            mu: mu.value(),
        })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

fn count_roots(p: u64, a: &AdmissibleSet, shift: u64) -> u64 {
    let coeffs: Vec<u64> = a.elements.iter().map(|&x| x % p).collect();
    let mut count = 0;
    for x in 0..p {
        if x == 0 {
            count += 1;
            continue;
        }
        let hit = coeffs
            .iter()
            .any(|&c| ((c as u128 * x as u128 + shift as u128) % p as u128) == 0);
        if hit {
            count += 1;
        }
    }
    count
}

/// Number of X mod p with X·Π(a_i·X + 1) ≡ 0, by scanning every residue.
pub fn omega(p: u64, a: &AdmissibleSet) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(count_roots(p, a, 1))
}

/// The same count for X·Π(a_i·X − 1).
pub fn omega_minus(p: u64, a: &AdmissibleSet) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(count_roots(p, a, p - 1))
}

/// ω(p) < p for every prime p ≤ s + 1.
pub fn is_admissible(a: &AdmissibleSet) -> bool {
    small_primes_upto(a.len() as u64 + 1)
        .into_iter()
        .all(|p| count_roots(p, a, 1) < p)
}

/// Least N with Σ_{n≤N} 1/(2n) > c (or Σ 1/n when `even_only` is false),
/// together with that sum.
pub fn harmonic_threshold(c: f64, even_only: bool) -> Result<(u64, f64)> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidArgument(format!("threshold {c} must be positive")));
    }
    let step = if even_only { 2.0 } else { 1.0 };
    let mut acc = CompensatedSum::new();
    let mut n = 0u64;
    while acc.value() <= c {
        n += 1;
        acc.add(1.0 / (step * n as f64));
    }
    Ok((n, acc.value()))
}

/// (43 − 18ζ(3))/13.
pub fn kummer_lead() -> f64 {
    let z3 = f64::constants().zeta3;
    (43.0 - 18.0 * z3) / 13.0
}

/// Π_{p ≤ limit} (1 + 2/(p(p−1))) and the factor exp(2/(limit·ln limit))
/// estimating the omitted primes.
pub fn c1_product(limit: u64) -> (f64, f64) {
    let mut log_sum = CompensatedSum::new();
    Sieve::default().for_each_prime(1, limit, |p| {
        let pf = p as f64;
        log_sum.add((2.0 / (pf * (pf - 1.0))).ln_1p());
    });
    let l = limit as f64;
    (log_sum.value().exp(), (2.0 / (l * l.ln())).exp())
}

/// C₁ over primes up to 10⁸ including the tail estimate.
pub fn c1_constant() -> f64 {
    let (prod, tail) = c1_product(100_000_000);
    prod * tail
}

/// c₂(k) = ¼·Σ_{j ≤ (k−1)/2} (1/j)(1 + log(2j)/1400) − log log k, odd k ≥ 3.
pub fn c2(k: u64) -> Result<f64> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("c2 needs odd k >= 3, got {k}")));
    }
    let mut acc = CompensatedSum::new();
    for j in 1..=(k - 1) / 2 {
        let jf = j as f64;
        acc.add((1.0 + (2.0 * jf).ln() / 1400.0) / jf);
    }
    Ok(0.25 * acc.value() - (k as f64).ln().ln())
}

/// Minimiser of c₂ over odd 3 ≤ k ≤ kmax.
pub fn c2_argmin(kmax: u64) -> Result<(u64, f64)> {
    let mut best: Option<(u64, f64)> = None;
    for k in (3..=kmax).step_by(2) {
        let v = c2(k)?;
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((k, v));
        }
    }
    best.ok_or_else(|| Error::InvalidArgument(format!("no odd k in [3, {kmax}]")))
}

/// c₁(q, k) = ¼·Σ_{j ≤ (k−1)/2} log(2jq − 1)/(j·log q).
pub fn c1_qk(q: u64, k: u64) -> Result<f64> {
    if q < 2 || k < 1 {
        return Err(Error::InvalidArgument(format!("c1 needs q >= 2, k >= 1 (q={q}, k={k})")));
    }
    let lq = (q as f64).ln();
    let mut acc = CompensatedSum::new();
    for j in 1..=(k - 1) / 2 {
        acc.add(((2 * j * q - 1) as f64).ln() / (j as f64 * lq));
    }
    Ok(0.25 * acc.value())
}

/// A named constant with its defining expression.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedConstant {
    pub name: String,
    pub expression: &'static str,
    pub value: f64,
}

/// The table of explicit constants.
pub fn explicit_constants() -> Vec<NamedConstant> {
    let (k, v) = c2_argmin(201).expect("odd range is nonempty");
    vec![
        NamedConstant {
            name: "kummer_lead".into(),
            expression: "(43 - 18*zeta(3))/13",
            value: kummer_lead(),
        },
        NamedConstant {
            name: "C1".into(),
            expression: "prod_{p <= 1e8} (1 + 2/(p(p-1))) * exp(2/(1e8*ln 1e8))",
            value: c1_constant(),
        },
        NamedConstant {
            name: "c2_argmin_k".into(),
            expression: "argmin over odd 3 <= k <= 201 of c2(k)",
            value: k as f64,
        },
        NamedConstant {
            name: format!("c2({k})"),
            expression: "1/4*sum_{j<=(k-1)/2} (1/j)(1 + log(2j)/1400) - log log k",
            value: v,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u64]) -> AdmissibleSet {
        AdmissibleSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(2, &set(&[2])).unwrap(), 1);
        assert_eq!(omega(3, &set(&[2])).unwrap(), 2);
        for p in [2u64, 3, 5, 101] {
            assert_eq!(omega(p, &set(&[])).unwrap(), 1);
        }
        assert!(omega(4, &set(&[1])).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&set(&[2])));
        assert!(!is_admissible(&set(&[1, 2])));
        assert!(is_admissible(&set(&[])));
        assert!(is_admissible(&set(&[2, 6])));
    }

    #[test]
    fn set_validation() {
        assert!(AdmissibleSet::new(vec![0, 1]).is_err());
        assert!(AdmissibleSet::new(vec![3, 3]).is_err());
        let a = set(&[6, 2, 4]);
        assert_eq!(a.elements(), &[2, 4, 6]);
        assert!((a.mu() - (0.5 + 0.25 + 1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn harmonic_small_and_monotone() {
        assert_eq!(harmonic_threshold(0.4, true).unwrap(), (1, 0.5));
        let mut last = 0;
        for i in 1..40 {
            let (n, s) = harmonic_threshold(i as f64 * 0.1, true).unwrap();
            assert!(n >= last && s > i as f64 * 0.1);
            last = n;
        }
        assert_eq!(harmonic_threshold(1.0, false).unwrap().0, 2);
    }

    #[test]
    fn c2_local_minimum_at_55() {
        let (k, v) = c2_argmin(201).unwrap();
        assert_eq!(k, 55);
        assert!(v < -0.413812);
        assert!(c2(53).unwrap() > v && c2(57).unwrap() > v);
    }

    #[test]
    fn c1_qk_single_term() {
        // k = 3: one term log(2q − 1)/log q
        let q = 11u64;
        let want = 0.25 * (21f64).ln() / (11f64).ln();
        assert!((c1_qk(q, 3).unwrap() - want).abs() < 1e-15);
        assert_eq!(c1_qk(q, 1).unwrap(), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn sign_flip_invariance(pi in 0usize..60, raw in proptest::collection::vec(1u64..500, 0..8)) {
            let p = crate::primes::primes_in(1, 300)[pi];
            let mut raw = raw;
            raw.sort_unstable();
            raw.dedup();
            let a = AdmissibleSet::new(raw).unwrap();
            let w = omega(p, &a).unwrap();
            prop_assert_eq!(w, omega_minus(p, &a).unwrap());
            prop_assert!(w <= a.len() as u64 + 1);
        }
    }
}
