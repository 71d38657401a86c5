//! Primality, segmented sieving, primitive roots and multiplicative orders.

use crate::error::{Error, Result};

/// Default sieve segment length in bytes (each byte covers one odd number).
pub const DEFAULT_SEGMENT: usize = 1 << 22;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin, valid for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    if n < 37 * 37 {
        return true;
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n` by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes up to `n` by a plain sieve; for small bounds.
pub fn small_primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Segmented odd-only sieve of Eratosthenes over `(lo, hi]`.
#[derive(Debug, Clone, Copy)]
pub struct Sieve {
    segment: usize,
}

impl Default for Sieve {
    fn default() -> Self {
        Sieve {
            segment: DEFAULT_SEGMENT,
        }
    }
}

impl Sieve {
    pub fn with_segment(segment: usize) -> Self {
        Sieve {
            segment: segment.max(64),
        }
    }

    /// Calls `f` on every prime in `(lo, hi]` in ascending order.
    pub fn for_each_prime(&self, lo: u64, hi: u64, mut f: impl FnMut(u64)) {
        if hi <= lo {
            return;
        }
        if lo < 2 && hi >= 2 {
            f(2);
        }
        let base = small_primes_upto(isqrt(hi));
        // odd candidates 2i+1 with start_i..end_i covering (lo, hi]
        let first_odd = if lo < 3 { 3 } else { (lo + 1) | 1 };
        if first_odd > hi {
            return;
        }
        let start_i = first_odd / 2;
        let end_i = (hi - 1) / 2 + 1;
        let mut buf = vec![0u8; self.segment];
        let mut seg_lo = start_i;
        while seg_lo < end_i {
            let seg_hi = (seg_lo + self.segment as u64).min(end_i);
            let len = (seg_hi - seg_lo) as usize;
            let seg = &mut buf[..len];
            seg.fill(1);
            let lo_val = 2 * seg_lo + 1;
            let hi_val = 2 * (seg_hi - 1) + 1;
            for &p in base.iter().skip(1) {
                if p * p > hi_val {
                    break;
                }
                // first odd multiple of p that is >= max(p*p, lo_val)
                let mut m = (p * p).max(lo_val.div_ceil(p) * p);
                if m % 2 == 0 {
                    m += p;
                }
                let mut idx = ((m - 1) / 2 - seg_lo) as usize;
                while idx < len {
                    seg[idx] = 0;
                    idx += p as usize;
                }
            }
            for (k, &flag) in seg.iter().enumerate() {
                if flag != 0 {
                    let v = 2 * (seg_lo + k as u64) + 1;
                    if v > 1 {
                        f(v);
                    }
                }
            }
            seg_lo = seg_hi;
        }
    }

    pub fn primes_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        let mut out = Vec::new();
        self.for_each_prime(lo, hi, |p| out.push(p));
        out
    }

    pub fn count(&self, lo: u64, hi: u64) -> u64 {
        let mut n = 0;
        self.for_each_prime(lo, hi, |_| n += 1);
        n
    }
}

/// Ascending list of primes in `(lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    Sieve::default().primes_in(lo, hi)
}

/// An odd prime modulus with its smallest primitive root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    pub q: u64,
    pub g: u64,
    pub n: usize,
    /// Distinct prime factors of q - 1.
    pub factors: Vec<u64>,
}

impl PrimeContext {
    pub fn new(q: u64) -> Result<Self> {
        primitive_root(q)
    }

    /// Multiplicative order of `a` modulo q.
    pub fn order_of(&self, a: u64) -> Result<u64> {
        let a = a % self.q;
        if a == 0 {
            return Err(Error::NotCoprime { a, q: self.q });
        }
        let mut ord = self.q - 1;
        for &p in &self.factors {
            while ord % p == 0 && pow_mod(a, ord / p, self.q) == 1 {
                ord /= p;
            }
        }
        Ok(ord)
    }

    /// `g^k mod q` for k = 0..q-2.
    pub fn power_table(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.n);
        let mut x = 1u64;
        for _ in 0..self.n {
            out.push(x);
            x = x * self.g % self.q;
        }
        out
    }

    /// Discrete logarithm table: `ind[a] = k` with g^k = a, `ind[0]` unused.
    pub fn index_table(&self) -> Vec<usize> {
        let mut ind = vec![0usize; self.q as usize];
        for (k, a) in self.power_table().into_iter().enumerate() {
            ind[a as usize] = k;
        }
        ind
    }
}

/// Smallest positive primitive root of the odd prime `q`.
pub fn primitive_root(q: u64) -> Result<PrimeContext> {
    if q < 3 || !is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    let factors = distinct_prime_factors(q - 1);
    let g = (2..q)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, (q - 1) / p, q) != 1))
        .expect("every prime has a primitive root");
    Ok(PrimeContext {
        q,
        g,
        n: (q - 1) as usize,
        factors,
    })
}

/// Least m >= 1 with a^m = 1 (mod q).
pub fn mult_order(a: u64, q: u64) -> Result<u64> {
    if q < 3 || !is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    if gcd(a, q) != 1 {
        return Err(Error::NotCoprime { a, q });
    }
    let factors = distinct_prime_factors(q - 1);
    let mut ord = q - 1;
    for p in factors {
        while ord % p == 0 && pow_mod(a, ord / p, q) == 1 {
            ord /= p;
        }
    }
    Ok(ord)
}

/// Primality of the neighbours 2q±1 and 4q±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NeighborFlags {
    pub sg2p: bool,
    pub sg2m: bool,
    pub sg4p: bool,
    pub sg4m: bool,
}

impl NeighborFlags {
    /// Flag for `m·q + b` with m ∈ {2, 4} and b = ±1.
    pub fn get(&self, m: u64, b: i8) -> Option<bool> {
        match (m, b) {
            (2, 1) => Some(self.sg2p),
            (2, -1) => Some(self.sg2m),
            (4, 1) => Some(self.sg4p),
            (4, -1) => Some(self.sg4m),
            _ => None,
        }
    }
}

pub fn neighbor_flags(q: u64) -> NeighborFlags {
    NeighborFlags {
        sg2p: is_prime(2 * q + 1),
        sg2m: is_prime(2 * q - 1),
        sg4p: is_prime(4 * q + 1),
        sg4m: is_prime(4 * q - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(23));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(!is_prime(341_550_071_728_321));
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_division(n), "n={n}");
        }
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(primes_in(0, 10), vec![2, 3, 5, 7]);
        assert_eq!(primes_in(500, 1000).len(), 73);
        assert!(primes_in(13, 14).is_empty());
        assert_eq!(primes_in(2, 3), vec![3]);
        assert_eq!(primes_in(1, 2), vec![2]);
        assert!(primes_in(5, 5).is_empty());
    }

    #[test]
    fn sieve_matches_trial_division_small_segments() {
        let naive: Vec<u64> = (0..=100_000).filter(|&n| trial_division(n)).collect();
        assert_eq!(Sieve::with_segment(64).primes_in(0, 100_000), naive);
        assert_eq!(primes_in(0, 100_000), naive);
        let mid: Vec<u64> = naive.iter().copied().filter(|&p| p > 31_337 && p <= 77_777).collect();
        assert_eq!(Sieve::with_segment(1000).primes_in(31_337, 77_777), mid);
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(3).unwrap().g, 2);
        assert_eq!(primitive_root(7).unwrap().g, 3);
        let ctx = primitive_root(997).unwrap();
        for p in distinct_prime_factors(996) {
            assert_ne!(pow_mod(ctx.g, 996 / p, 997), 1);
        }
        assert!(matches!(primitive_root(2), Err(Error::NotOddPrime(2))));
        assert!(matches!(primitive_root(9), Err(Error::NotOddPrime(9))));
    }

    #[test]
    fn powers_of_g_are_a_bijection() {
        for q in primes_in(2, 10_000) {
            let ctx = primitive_root(q).unwrap();
            let mut seen = vec![false; q as usize];
            for a in ctx.power_table() {
                assert!(!seen[a as usize], "q={q} repeats {a}");
                seen[a as usize] = true;
            }
            assert!(seen[1..].iter().all(|&s| s));
            assert_eq!(pow_mod(ctx.g, (q - 1) / 2, q), q - 1);
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(1, 101).unwrap(), 1);
        assert_eq!(mult_order(2, 3).unwrap(), 2);
        assert!(matches!(mult_order(14, 7), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn neighbor_flag_examples() {
        let f = |sg2p, sg2m, sg4p, sg4m| NeighborFlags {
            sg2p,
            sg2m,
            sg4p,
            sg4m,
        };
        assert_eq!(neighbor_flags(11), f(true, false, false, true));
        assert_eq!(neighbor_flags(3), f(true, true, true, true));
        assert_eq!(neighbor_flags(17), f(false, false, false, true));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn order_divides_group_order(qi in 0usize..1228, a in 1u64..1_000_000) {
            let primes = primes_in(2, 10_000);
            let q = primes[qi];
            prop_assume!(a % q != 0);
            let ord = mult_order(a, q).unwrap();
            prop_assert_eq!((q - 1) % ord, 0);
            prop_assert_eq!(pow_mod(a, ord, q), 1);
            let ctx = primitive_root(q).unwrap();
            prop_assert_eq!(ctx.order_of(a).unwrap(), ord);
        }
    }
}
