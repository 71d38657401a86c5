//! Truncated prime-sum estimators over the residue classes ±1 mod q.
//!
//! * `f_q(x) = Σ_{p^m ≤ x, p^m ≡ ±1} ±1/(m·p^m)`, all prime powers
//! * `g_q(x)`: the same over primes only
//! * `v_q(x) = (1/log q)·Σ_{m ≥ 2, p^m ≤ x, p^m ≡ ±1} ±log p/p^m`
//! * `w_q(x) = (1/log q)·Σ_{p ≤ x, p ≡ ±1} ±log p/p`
//!
//! Terms are accumulated in ascending order of `p^m` with compensation.

use crate::error::{Error, Result};
use crate::primes::{mult_order, small_primes_upto, isqrt, Sieve};
use crate::special::CompensatedSum;

/// Which estimator a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Fq,
    Gq,
    Vq,
    Wq,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedEstimate {
    pub q: u64,
    pub x: f64,
    pub value: f64,
    pub kind: EstimatorKind,
}

/// All four estimators for one modulus and cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimates {
    pub q: u64,
    pub x: f64,
    pub f: f64,
    pub g: f64,
    pub v: f64,
    pub w: f64,
}

impl Estimates {
    pub fn get(&self, kind: EstimatorKind) -> TruncatedEstimate {
        let value = match kind {
            EstimatorKind::Fq => self.f,
            EstimatorKind::Gq => self.g,
            EstimatorKind::Vq => self.v,
            EstimatorKind::Wq => self.w,
        };
        TruncatedEstimate {
            q: self.q,
            x: self.x,
            value,
            kind,
        }
    }

    /// `((q−1)/2)·(v + w)`, the truncated counterpart of κ(q).
    pub fn kappa_estimate(&self) -> f64 {
        (self.q - 1) as f64 / 2.0 * (self.v + self.w)
    }

    /// `((q−1)/2)·f`, the truncated counterpart of r(q).
    pub fn r_estimate(&self) -> f64 {
        (self.q - 1) as f64 / 2.0 * self.f
    }
}

/// Residues counted with weight +1 and −1.
#[derive(Debug, Clone, Copy)]
struct Classes {
    plus: u64,
    minus: u64,
}

struct Acc {
    q: u64,
    classes: Classes,
    f: CompensatedSum<f64>,
    g: CompensatedSum<f64>,
    v: CompensatedSum<f64>,
    w: CompensatedSum<f64>,
}

impl Acc {
    fn sign(&self, n: u64) -> f64 {
        let r = n % self.q;
        if r == self.classes.plus {
            1.0
        } else if r == self.classes.minus {
            -1.0
        } else {
            0.0
        }
    }

    fn prime(&mut self, p: u64, lp: f64) {
        let s = self.sign(p);
        if s != 0.0 {
            let pf = p as f64;
            self.f.add(s / pf);
            self.g.add(s / pf);
            self.w.add(s * lp / pf);
        }
    }

    fn power(&mut self, pm: u64, m: u32, lp: f64) {
        let s = self.sign(pm);
        if s != 0.0 {
            let x = pm as f64;
            self.f.add(s / (m as f64 * x));
            self.v.add(s * lp / x);
        }
    }

    fn finish(&self, x: f64) -> Estimates {
        let lq = (self.q as f64).ln();
        Estimates {
            q: self.q,
            x,
            f: self.f.value(),
            g: self.g.value(),
            v: self.v.value() / lq,
            w: self.w.value() / lq,
        }
    }
}

fn cutoff(x: f64, min: f64) -> Result<u64> {
    if !(x >= min) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("cutoff {x} must be at least {min}")));
    }
    Ok(x.floor() as u64)
}

/// Prime powers `p^m ≤ n` with m ≥ 2, ascending, as `(p^m, m, p)`.
fn higher_powers(n: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for p in small_primes_upto(isqrt(n)) {
        let mut pm = p * p;
        let mut m = 2;
        while pm <= n {
            out.push((pm, m, p));
            m += 1;
            match pm.checked_mul(p) {
                Some(v) => pm = v,
                None => break,
            }
        }
    }
    out.sort_unstable();
    out
}

fn estimates_with(qs: &[u64], x: f64, mirror: bool) -> Result<Vec<Estimates>> {
    let n = cutoff(x, 2.0)?;
    for &q in qs {
        if q < 3 || !crate::primes::is_prime(q) {
            return Err(Error::NotOddPrime(q));
        }
    }
    let mut accs: Vec<Acc> = qs
        .iter()
        .map(|&q| {
            let (plus, minus) = if mirror { (q - 1, 1) } else { (1, q - 1) };
            Acc {
                q,
                classes: Classes { plus, minus },
                f: CompensatedSum::new(),
                g: CompensatedSum::new(),
                v: CompensatedSum::new(),
                w: CompensatedSum::new(),
            }
        })
        .collect();
    let powers = higher_powers(n);
    let mut next = 0;
    let mut flush = |upto: u64, accs: &mut [Acc]| {
        while next < powers.len() && powers[next].0 < upto {
            let (pm, m, p) = powers[next];
            let lp = (p as f64).ln();
            for a in accs.iter_mut() {
                a.power(pm, m, lp);
            }
            next += 1;
        }
    };
    Sieve::default().for_each_prime(1, n, |p| {
        flush(p, &mut accs);
        let lp = (p as f64).ln();
        for a in accs.iter_mut() {
            a.prime(p, lp);
        }
    });
    flush(u64::MAX, &mut accs);
    Ok(accs.iter().map(|a| a.finish(x)).collect())
}

/// f, g, v and w for several moduli in one sieve pass.
pub fn estimates(qs: &[u64], x: f64) -> Result<Vec<Estimates>> {
    estimates_with(qs, x, false)
}

/// The same sums with the roles of the classes +1 and −1 exchanged.
pub fn mirrored_estimates(qs: &[u64], x: f64) -> Result<Vec<Estimates>> {
    estimates_with(qs, x, true)
}

fn single(q: u64, x: f64) -> Result<Estimates> {
    Ok(estimates(&[q], x)?[0])
}

pub fn f_q_trunc(q: u64, x: f64) -> Result<f64> {
    Ok(single(q, x)?.f)
}

pub fn g_q_trunc(q: u64, x: f64) -> Result<f64> {
    Ok(single(q, x)?.g)
}

pub fn w_q_trunc(q: u64, x: f64) -> Result<f64> {
    Ok(single(q, x)?.w)
}

pub fn v_q_trunc(q: u64, x: f64) -> Result<f64> {
    cutoff(x, 4.0)?;
    Ok(single(q, x)?.v)
}

/// Truncated S₁ and S₂ with a common tail radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S12 {
    pub s1: f64,
    pub s2: f64,
    /// Bound on Σ_{n > cutoff} log n/(n(n−1)), which dominates each omitted tail.
    pub tail_radius: f64,
}

/// `S₁ = Σ_{ord_q(p) ≥ 2} log p/(p^{ord_q(p)} − 1)` and
/// `S₂ = Σ_{ord_q(p²) ≥ 2} log p/(p^{ord_q(p²)} − 1)`, keeping terms with
/// `p^ord ≤ cutoff`.
pub fn s12(q: u64, cutoff_x: f64) -> Result<S12> {
    let n = cutoff(cutoff_x, 2.0)?;
    if q < 3 || !crate::primes::is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    // every surviving term has exponent ≥ 2, hence p ≤ √cutoff
    let mut terms: Vec<(u64, u64, f64)> = Vec::new();
    for p in small_primes_upto(isqrt(n)) {
        if p == q {
            continue;
        }
        let ord = mult_order(p, q)?;
        let ord2 = ord / crate::primes::gcd(2, ord);
        let lp = (p as f64).ln();
        for (which, e) in [(1u64, ord), (2, ord2)] {
            if e < 2 {
                continue;
            }
            if let Some(pe) = p.checked_pow(e as u32).filter(|&v| v <= n) {
                terms.push((pe, which, lp));
            }
        }
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for (pe, which, lp) in terms {
        let t = lp / (pe as f64 - 1.0);
        if which == 1 {
            s1.add(t);
        } else {
            s2.add(t);
        }
    }
    let nf = n as f64;
    Ok(S12 {
        s1: s1.value(),
        s2: s2.value(),
        tail_radius: (nf.ln() + 1.0) / (nf - 1.0),
    })
}

/// `E(t; q) = π(t; q, 1) − π(t; q, −1)`.
pub fn bias(t: f64, q: u64) -> Result<i64> {
    let n = cutoff(t, 2.0)?;
    if q < 3 || !crate::primes::is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    let mut e = 0i64;
    Sieve::default().for_each_prime(1, n, |p| {
        let r = p % q;
        if r == 1 {
            e += 1;
        } else if r == q - 1 {
            e -= 1;
        }
    });
    Ok(e)
}
