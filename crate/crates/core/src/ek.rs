//! Euler-Kronecker constants of Q(ζ_q) and Q(ζ_q)⁺ from s = 0 data.
//!
//! For a nonprincipal character χ mod q write B₁(χ) = Σ χ(a)·a/q,
//! G(χ) = Σ χ(a)·lnΓ(a/q) and Z(χ) = Σ χ(a)·ζ″(0, a/q). The functional
//! equation gives
//!
//! * odd χ:  L′/L(1, χ) = log 2π + γ + G(χ̄)/B₁(χ̄),  |L(1, χ)| = π|B₁(χ)|/√q
//! * even χ: L′/L(1, χ) = log 2π + γ − Z(χ̄)/(2·G(χ̄))
//!
//! so no Gauss sums are needed. With `γ_q = γ + Σ_{χ≠χ₀} L′/L(1, χ)` and
//! `γ_q⁺` the same sum over even characters, `κ(q) = (γ_q⁺ − γ_q)/log q`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::charsum::{CharacterSums, Complex, FftScalar, KernelId, SumEngine};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::primes::{neighbor_flags, NeighborFlags, PrimeContext};
use crate::real::Real;
use crate::special::CompensatedSum;

/// Working precision of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    #[serde(rename = "dd")]
    DoubleDouble,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Double => "double",
            Precision::DoubleDouble => "dd",
        })
    }
}

impl FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Precision::Double),
            "dd" | "double-double" => Ok(Precision::DoubleDouble),
            _ => Err(Error::InvalidArgument(format!("unknown precision {s:?}"))),
        }
    }
}

/// One output row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EkRecord {
    pub q: u64,
    pub kappa: f64,
    pub r: f64,
    pub gamma_plus: f64,
    pub gamma: f64,
    pub delta: f64,
    pub flags: NeighborFlags,
}

/// All assembled quantities for one prime in the working precision.
#[derive(Debug, Clone, Copy)]
pub struct EkValues<T> {
    pub q: u64,
    pub kappa: T,
    pub r: T,
    pub gamma_plus: T,
    pub gamma: T,
    /// Σ over odd characters of `G(χ)/B₁(χ)`, before taking the real part.
    pub odd_ratio_sum: Complex<T>,
    /// Σ over even nonprincipal characters of L′/L(1, χ).
    pub even_sum: Complex<T>,
}

impl<T: Real> EkValues<T> {
    pub fn delta(&self) -> T {
        self.kappa - self.r
    }

    /// Worst imaginary-to-real ratio of the two conjugate-paired sums.
    pub fn imaginary_ratio(&self) -> f64 {
        let ratio = |z: Complex<T>| {
            let re = z.re.abs().to_f64().max(1.0);
            z.im.abs().to_f64() / re
        };
        ratio(self.odd_ratio_sum).max(ratio(self.even_sum))
    }
}

fn odd_indices(n: usize) -> impl Iterator<Item = usize> {
    (1..n).step_by(2)
}

fn even_nonprincipal(n: usize) -> impl Iterator<Item = usize> {
    (2..n).step_by(2)
}

/// r(q) = log of the Kummer ratio, from the odd B₁ values.
pub fn kummer_r<T: Real>(ctx: &PrimeContext, b1: &CharacterSums<T>) -> Result<T> {
    let c = T::constants();
    let q = T::from_u64(ctx.q);
    let half = T::from_f64(0.5);
    let mut acc = CompensatedSum::new();
    acc.add(T::from_u64(ctx.n as u64 / 2) * (c.ln_pi - half * q.ln()));
    for j in odd_indices(ctx.n) {
        let m = b1.get(j).norm_sqr();
        if !(m > T::zero()) {
            return Err(Error::NumericBreakdown {
                q: ctx.q,
                j,
                what: "B1",
            });
        }
        acc.add(half * m.ln());
    }
    Ok(acc.value())
}

/// Σ_{odd j} G_j / B₁_j; the LINEAR kernel already carries the 1/q, so
/// B₁_j = b1.s[j].
pub fn odd_ratio_sum<T: Real>(
    ctx: &PrimeContext,
    b1: &CharacterSums<T>,
    lg: &CharacterSums<T>,
) -> Result<Complex<T>> {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for j in odd_indices(ctx.n) {
        let b = b1.get(j);
        if !(b.norm_sqr() > T::zero()) {
            return Err(Error::NumericBreakdown {
                q: ctx.q,
                j,
                what: "B1",
            });
        }
        let t = lg.get(j).div(b);
        re.add(t.re);
        im.add(t.im);
    }
    Ok(Complex::new(re.value(), im.value()))
}

/// Σ_{even j ≠ 0} [log 2π + γ − z2.s[j] / (2·lg.s[j])].
pub fn even_sum<T: Real>(
    ctx: &PrimeContext,
    lg: &CharacterSums<T>,
    z2: &CharacterSums<T>,
) -> Result<Complex<T>> {
    let c = T::constants();
    let base = c.log_2pi + c.euler_gamma;
    let two = T::from_f64(2.0);
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for j in even_nonprincipal(ctx.n) {
        let g = lg.get(j);
        if !(g.norm_sqr() > T::zero()) {
            return Err(Error::NumericBreakdown {
                q: ctx.q,
                j,
                what: "L'(0)",
            });
        }
        let t = z2.get(j).div(g.scale(two));
        re.add(base - t.re);
        im.add(-t.im);
    }
    Ok(Complex::new(re.value(), im.value()))
}

/// κ(q) = −(1/log q)·Σ_{χ odd} L′/L(1, χ).
pub fn kappa<T: Real>(ctx: &PrimeContext, b1: &CharacterSums<T>, lg: &CharacterSums<T>) -> Result<T> {
    let s = odd_ratio_sum(ctx, b1, lg)?;
    Ok(kappa_from_ratio_sum(ctx, s.re))
}

fn kappa_from_ratio_sum<T: Real>(ctx: &PrimeContext, ratio_re: T) -> T {
    let c = T::constants();
    let q = T::from_u64(ctx.q);
    let odd = T::from_u64(ctx.n as u64 / 2) * (c.log_2pi + c.euler_gamma) + ratio_re;
    -odd / q.ln()
}

/// `(γ_q⁺, γ_q)`.
pub fn gamma_pair<T: Real>(
    ctx: &PrimeContext,
    b1: &CharacterSums<T>,
    lg: &CharacterSums<T>,
    z2: &CharacterSums<T>,
) -> Result<(T, T)> {
    let k = kappa(ctx, b1, lg)?;
    let e = even_sum(ctx, lg, z2)?;
    let gp = T::constants().euler_gamma + e.re;
    Ok((gp, gp - k * T::from_u64(ctx.q).ln()))
}

/// L′/L(1, χ_j) for a single nonprincipal character, `χ_j(g^k) = e^{2πijk/(q−1)}`.
pub fn log_derivative_at_one<T: Real>(
    j: usize,
    b1: &CharacterSums<T>,
    lg: &CharacterSums<T>,
    z2: &CharacterSums<T>,
) -> Result<Complex<T>> {
    let n = b1.len();
    assert!(j > 0 && j < n, "character index {j} must be nonprincipal");
    let c = T::constants();
    let base = Complex::real(c.log_2pi + c.euler_gamma);
    // χ̄_j = χ_{n−j}
    let jc = n - j;
    if j % 2 == 1 {
        let b = b1.get(jc);
        if !(b.norm_sqr() > T::zero()) {
            return Err(Error::NumericBreakdown {
                q: b1.q,
                j,
                what: "B1",
            });
        }
        Ok(base + lg.get(jc).div(b))
    } else {
        let g = lg.get(jc);
        if !(g.norm_sqr() > T::zero()) {
            return Err(Error::NumericBreakdown {
                q: b1.q,
                j,
                what: "L'(0)",
            });
        }
        Ok(base - z2.get(jc).div(g.scale(T::from_f64(2.0))))
    }
}

/// The three kernel sums for one prime.
pub struct KernelSums<T> {
    pub b1: CharacterSums<T>,
    pub lg: CharacterSums<T>,
    pub z2: CharacterSums<T>,
}

/// Compute the LINEAR, LNGAMMA and ZETA2 sums with one shared plan, checking
/// the transform invariants of each.
pub fn kernel_sums<T: FftScalar>(ctx: &PrimeContext) -> Result<KernelSums<T>> {
    let engine = SumEngine::<T>::new(ctx);
    let get = |k| -> Result<CharacterSums<T>> {
        let s = engine.sums(k)?;
        s.check_invariants()?;
        Ok(s)
    };
    Ok(KernelSums {
        b1: get(KernelId::Linear)?,
        lg: get(KernelId::LnGamma)?,
        z2: get(KernelId::Zeta2)?,
    })
}

/// Full assembly in precision `T`.
pub fn compute_values<T: FftScalar>(ctx: &PrimeContext) -> Result<EkValues<T>> {
    let sums = kernel_sums::<T>(ctx)?;
    values_from_sums(ctx, &sums)
}

pub fn values_from_sums<T: Real>(ctx: &PrimeContext, sums: &KernelSums<T>) -> Result<EkValues<T>> {
    let odd = odd_ratio_sum(ctx, &sums.b1, &sums.lg)?;
    let even = even_sum(ctx, &sums.lg, &sums.z2)?;
    let r = kummer_r(ctx, &sums.b1)?;
    let kappa = kappa_from_ratio_sum(ctx, odd.re);
    let gamma_plus = T::constants().euler_gamma + even.re;
    let gamma = gamma_plus - kappa * T::from_u64(ctx.q).ln();
    let v = EkValues {
        q: ctx.q,
        kappa,
        r,
        gamma_plus,
        gamma,
        odd_ratio_sum: odd,
        even_sum: even,
    };
    let ratio = v.imaginary_ratio();
    if ratio > 1e-9 {
        return Err(Error::Invariant {
            q: ctx.q,
            detail: format!("conjugate-paired sums have imaginary ratio {ratio:.3e}"),
        });
    }
    Ok(v)
}

/// κ(q) alone in precision `T`.
pub fn compute_kappa<T: FftScalar>(q: u64) -> Result<T> {
    let ctx = PrimeContext::new(q)?;
    let engine = SumEngine::<T>::new(&ctx);
    let b1 = engine.sums(KernelId::Linear)?;
    let lg = engine.sums(KernelId::LnGamma)?;
    kappa(&ctx, &b1, &lg)
}

/// Run the whole pipeline for one prime.
pub fn compute_record(q: u64, mode: Precision) -> Result<EkRecord> {
    let ctx = PrimeContext::new(q)?;
    let (kappa, r, gamma_plus, gamma) = match mode {
        Precision::Double => {
            let v = compute_values::<f64>(&ctx)?;
            (v.kappa, v.r, v.gamma_plus, v.gamma)
        }
        Precision::DoubleDouble => {
            let v = compute_values::<DoubleDouble>(&ctx)?;
            (v.kappa.to_f64(), v.r.to_f64(), v.gamma_plus.to_f64(), v.gamma.to_f64())
        }
    };
    Ok(EkRecord {
        q,
        kappa,
        r,
        gamma_plus,
        gamma,
        delta: kappa - r,
        flags: neighbor_flags(q),
    })
}

/// Integrality test of h₁(q) = R(q)·G(q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerCheck {
    pub q: u64,
    pub h1_approx: f64,
    pub nearest_int: u64,
    pub gap: f64,
}

/// log G(q) = log 2q + ((q−1)/4)·log(q/4π²).
pub fn log_kummer_main_term<T: Real>(q: u64) -> T {
    let c = T::constants();
    let qt = T::from_u64(q);
    let four_pi2 = T::from_f64(4.0) * c.pi * c.pi;
    (T::from_f64(2.0) * qt).ln() + T::from_u64(q - 1) / T::from_f64(4.0) * (qt / four_pi2).ln()
}

/// Round R(q)·G(q) to the nearest integer; refused for q > 100.
pub fn kummer_check<T: Real>(q: u64, r: T) -> Result<KummerCheck> {
    if q > 100 {
        return Err(Error::MagnitudeGuard(q));
    }
    let h = (r + log_kummer_main_term::<T>(q)).exp();
    let nearest = (h + T::from_f64(0.5)).floor();
    Ok(KummerCheck {
        q,
        h1_approx: h.to_f64(),
        nearest_int: nearest.to_f64() as u64,
        gap: (h - nearest).abs().to_f64(),
    })
}

/// Kummer check with r(q) computed in double-double.
pub fn kummer_check_prime(q: u64) -> Result<KummerCheck> {
    if q > 100 {
        return Err(Error::MagnitudeGuard(q));
    }
    let ctx = PrimeContext::new(q)?;
    let b1 = SumEngine::<DoubleDouble>::new(&ctx).sums(KernelId::Linear)?;
    kummer_check(q, kummer_r(&ctx, &b1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q3_closed_forms() {
        let ctx = PrimeContext::new(3).unwrap();
        let s = kernel_sums::<f64>(&ctx).unwrap();
        let r = kummer_r(&ctx, &s.b1).unwrap();
        let want = (std::f64::consts::PI * 3f64.powf(-1.5)).ln();
        assert!((r - want).abs() < 1e-15, "{r}");
        let v = values_from_sums(&ctx, &s).unwrap();
        assert_eq!(v.gamma_plus, f64::constants().euler_gamma);
        assert!((v.kappa + 0.335_224_373_301_549_3).abs() < 1e-14);
    }

    #[test]
    fn assembly_identities_hold() {
        for q in [5u64, 11, 13, 101, 997] {
            let rec = compute_record(q, Precision::Double).unwrap();
            assert!((rec.gamma_plus - rec.gamma - rec.kappa * (q as f64).ln()).abs() < 1e-12);
            assert!((rec.delta - (rec.kappa - rec.r)).abs() < 1e-15);
        }
    }

    #[test]
    fn double_double_agrees_with_double() {
        for q in [7u64, 211, 997] {
            let a = compute_record(q, Precision::Double).unwrap();
            let b = compute_record(q, Precision::DoubleDouble).unwrap();
            assert!((a.kappa - b.kappa).abs() < 1e-12, "q={q}");
            assert!((a.gamma_plus - b.gamma_plus).abs() < 1e-11, "q={q}");
        }
    }

    #[test]
    fn small_class_numbers() {
        for (q, h) in [(3u64, 1u64), (5, 1), (7, 1), (19, 1), (23, 3), (29, 8), (31, 9)] {
            let k = kummer_check_prime(q).unwrap();
            assert_eq!(k.nearest_int, h, "q={q}");
            assert!(k.gap < 1e-6);
        }
        assert!(matches!(kummer_check_prime(101), Err(Error::MagnitudeGuard(101))));
    }

    #[test]
    fn precision_parsing() {
        assert_eq!("dd".parse::<Precision>().unwrap(), Precision::DoubleDouble);
        assert_eq!("double".parse::<Precision>().unwrap(), Precision::Double);
        assert!("quad".parse::<Precision>().is_err());
    }
}
