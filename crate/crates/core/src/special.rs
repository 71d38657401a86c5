//! Real special functions feeding the character-sum kernels.
//!
//! All routines are generic over [`Real`] so the same code runs in binary64
//! and in double-double; the truncation parameters come from the scalar type.

use crate::error::{Error, Result};
use crate::real::{Constants, Real};

pub use crate::real::Constants as ConstantTable;

/// The stored constants for scalar type `T`.
pub fn constants<T: Real>() -> &'static Constants<T> {
    T::constants()
}

/// Neumaier's improved Kahan-Babuska summation.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        CompensatedSum {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> Extend<T> for CompensatedSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of `values` in iteration order.
pub fn compensated_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut acc = CompensatedSum::new();
    acc.extend(values);
    acc.value()
}

/// ζ(k) − 1 for k = 2..=ZETA_TABLE_MAX, evaluated by Euler-Maclaurin.
const ZETA_TABLE_MAX: usize = 96;

pub(crate) fn zeta_minus_one_table<T: Real>() -> Vec<T> {
    let c = T::constants();
    let shift = 20u32;
    let big_n = T::from_u64(shift as u64);
    (0..=ZETA_TABLE_MAX)
        .map(|k| {
            if k < 2 {
                return T::zero();
            }
            let s = T::from_u64(k as u64);
            let mut acc = CompensatedSum::new();
            for n in 2..shift {
                acc.add(T::one() / T::from_u64(n as u64).powi(k as u32));
            }
            let nk = big_n.powi(k as u32);
            acc.add(big_n / (nk * (s - T::one())));
            acc.add(T::from_f64(0.5) / nk);
            // B_{2j}/(2j)! · s(s+1)...(s+2j-2) · N^{-s-2j+1}
            let mut rising = s;
            let mut fact = T::from_f64(2.0);
            let mut power = nk * big_n;
            for j in 1..=T::STIRLING_TERMS {
                acc.add(c.bernoulli[j - 1] * rising / (fact * power));
                let m = 2 * j as u64;
                rising = rising * (s + T::from_u64(m - 1)) * (s + T::from_u64(m));
                fact = fact * T::from_u64(m + 1) * T::from_u64(m + 2);
                power = power * big_n * big_n;
            }
            acc.value()
        })
        .collect()
}

/// ζ(k) for integer 2 <= k <= 96.
pub fn zeta_int<T: Real>(k: usize) -> T {
    assert!((2..=ZETA_TABLE_MAX).contains(&k), "zeta_int: k out of range");
    T::one() + T::zeta_minus_one()[k]
}

/// Stirling series for lnΓ(y), y large.
fn stirling<T: Real>(y: T) -> T {
    let c = T::constants();
    let half = T::from_f64(0.5);
    let ly = y.ln();
    let mut acc = CompensatedSum::new();
    acc.add((y - half) * ly);
    acc.add(-y);
    acc.add(half * c.log_2pi);
    let inv = T::one() / y;
    let inv2 = inv * inv;
    let mut p = inv;
    for k in 1..=T::STIRLING_TERMS {
        let kk = T::from_u64((2 * k * (2 * k - 1)) as u64);
        acc.add(c.bernoulli[k - 1] * p / kk);
        p *= inv2;
    }
    acc.value()
}

/// lnΓ(1 + z) for |z| <= 1/2 via ζ(k) − 1 coefficients.
fn ln_gamma_near_one<T: Real>(z: T) -> T {
    let c = T::constants();
    let zm1 = T::zeta_minus_one();
    let mut acc = CompensatedSum::new();
    acc.add(-(T::one() + z).ln());
    acc.add(z * (T::one() - c.euler_gamma));
    let mut p = -z;
    let tol = T::from_f64(T::EPSILON * 1e-3);
    for (k, &zk) in zm1.iter().enumerate().skip(2) {
        p = -(p * z);
        let term = zk * p / T::from_u64(k as u64);
        acc.add(term);
        if term.abs() < tol {
            break;
        }
    }
    acc.value()
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain {
            func: "ln_gamma",
            x: x.to_f64(),
        });
    }
    Ok(ln_gamma_unchecked(x))
}

#[inline]
pub(crate) fn ln_gamma_unchecked<T: Real>(x: T) -> T {
    let half = T::from_f64(0.5);
    if x < half {
        return ln_gamma_near_one(x) - x.ln();
    }
    let z = x - T::one();
    if z.abs() <= half {
        return ln_gamma_near_one(z);
    }
    let shift = T::from_f64(T::LNGAMMA_SHIFT);
    let mut y = x;
    let mut prod = T::one();
    while y < shift {
        prod *= y;
        y += T::one();
    }
    stirling(y) - prod.ln()
}

/// ζ(s, x) and its first two s-derivatives at s = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurwitzAtZero<T> {
    pub z0: T,
    pub z1: T,
    pub z2: T,
}

/// Euler-Maclaurin after an integer shift, differentiated in s analytically.
pub fn hurwitz_at_zero<T: Real>(x: T) -> Result<HurwitzAtZero<T>> {
    if !(x > T::zero() && x < T::one()) {
        return Err(Error::Domain {
            func: "hurwitz_at_zero",
            x: x.to_f64(),
        });
    }
    Ok(hurwitz_unchecked(x, true))
}

/// ∂²ζ(s, x)/∂s² at s = 0.
pub(crate) fn zeta2_at_zero<T: Real>(x: T) -> T {
    hurwitz_unchecked(x, false).z2
}

fn hurwitz_unchecked<T: Real>(x: T, all: bool) -> HurwitzAtZero<T> {
    let c = T::constants();
    let shift = T::HURWITZ_SHIFT;
    let half = T::from_f64(0.5);
    let two = T::from_f64(2.0);

    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for n in 0..shift {
        let l = (T::from_u64(n as u64) + x).ln();
        if all {
            s1.add(-l);
        }
        s2.add(l * l);
    }
    let y = T::from_u64(shift as u64) + x;
    let ly = y.ln();

    // (y^{1-s})/(s-1) and y^{-s}/2 expanded to second order in s
    s2.add(-two * y * (T::one() - ly + half * ly * ly));
    s2.add(half * ly * ly);
    if all {
        s1.add(-y * (T::one() - ly));
        s1.add(-half * ly);
    }

    let inv = T::one() / y;
    let inv2 = inv * inv;
    let mut p = inv;
    let mut harmonic = T::zero();
    for k in 1..=T::HURWITZ_TERMS {
        if k > 1 {
            let m = (2 * k - 2) as u64;
            harmonic += T::one() / T::from_u64(m - 1) + T::one() / T::from_u64(m);
        }
        let coef = c.bernoulli[k - 1] / T::from_u64((2 * k * (2 * k - 1)) as u64) * p;
        if all {
            s1.add(coef);
        }
        s2.add(two * coef * (harmonic - ly));
        p *= inv2;
    }
    HurwitzAtZero {
        z0: half - x,
        z1: s1.value(),
        z2: s2.value(),
    }
}

/// Chebyshev expansions of lnΓ(1 + t) and ζ″(0, 1 + t) on t ∈ [0, 1], used for
/// bulk kernel evaluation.
#[derive(Debug, Clone)]
pub struct KernelTables<T> {
    ln_gamma1: Vec<T>,
    zeta2_1: Vec<T>,
}

impl<T: Real> KernelTables<T> {
    pub(crate) fn build() -> Self {
        // both functions are analytic beyond t = -1; coefficients decay like 5.8^-k
        let nodes = if T::EPSILON < 1e-20 { 96 } else { 64 };
        KernelTables {
            ln_gamma1: chebyshev_fit(nodes, |t| ln_gamma_unchecked(T::one() + t)),
            zeta2_1: chebyshev_fit(nodes, |t| hurwitz_unchecked(T::one() + t, false).z2),
        }
    }

    /// The same expansions rounded to another scalar type and re-trimmed.
    pub fn convert<U: Real>(&self, f: impl Fn(T) -> U) -> KernelTables<U> {
        let tol = U::from_f64(U::EPSILON * 1e-3);
        let conv = |c: &[T]| {
            let mut out: Vec<U> = c.iter().map(|&x| f(x)).collect();
            while out.len() > 1 && out[out.len() - 1].abs() < tol {
                out.pop();
            }
            out
        };
        KernelTables {
            ln_gamma1: conv(&self.ln_gamma1),
            zeta2_1: conv(&self.zeta2_1),
        }
    }

    /// lnΓ(x) for x ∈ (0, 1].
    #[inline]
    pub fn ln_gamma(&self, x: T) -> T {
        clenshaw(&self.ln_gamma1, x) - x.ln()
    }

    /// ζ″(0, x) for x ∈ (0, 1].
    #[inline]
    pub fn zeta2(&self, x: T) -> T {
        let l = x.ln();
        clenshaw(&self.zeta2_1, x) + l * l
    }

    pub fn terms(&self) -> (usize, usize) {
        (self.ln_gamma1.len(), self.zeta2_1.len())
    }
}

/// Coefficients of Σ' c_k T_k(2t − 1) interpolating `f` at `m` Chebyshev nodes,
/// trimmed once they fall below the working precision.
fn chebyshev_fit<T: Real>(m: usize, f: impl Fn(T) -> T) -> Vec<T> {
    let half = T::from_f64(0.5);
    let den = 2 * m as u64;
    let values: Vec<T> = (0..m as u64)
        .map(|i| {
            let (_, c) = crate::real::sin_cos_pi_ratio::<T>(2 * i + 1, den);
            f(half * (T::one() + c))
        })
        .collect();
    let scale = T::from_f64(2.0) / T::from_u64(m as u64);
    let mut coef: Vec<T> = (0..m as u64)
        .map(|k| {
            let mut acc = CompensatedSum::new();
            for (i, &v) in values.iter().enumerate() {
                let (_, c) = crate::real::sin_cos_pi_ratio::<T>(k * (2 * i as u64 + 1), den);
                acc.add(v * c);
            }
            acc.value() * scale
        })
        .collect();
    coef[0] *= half;
    let tol = T::from_f64(T::EPSILON * 1e-3);
    while coef.len() > 1 && coef[coef.len() - 1].abs() < tol {
        coef.pop();
    }
    coef
}

#[inline]
fn clenshaw<T: Real>(c: &[T], t: T) -> T {
    let u = t + t - T::one();
    let u2 = u + u;
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    for &ck in c[1..].iter().rev() {
        let b = u2 * b1 - b2 + ck;
        b2 = b1;
        b1 = b;
    }
    u * b1 - b2 + c[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::DoubleDouble;
    use proptest::prelude::*;

    type DD = DoubleDouble;

    /// Independent ζ(s, x) at real s != 1, by direct Euler-Maclaurin; used only
    /// as a finite-difference oracle.
    fn hurwitz_direct(s: f64, x: f64) -> f64 {
        let n = 30usize;
        let b = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
        ];
        let mut sum = 0.0;
        for k in 0..n {
            sum += (k as f64 + x).powf(-s);
        }
        let y = n as f64 + x;
        sum += y.powf(1.0 - s) / (s - 1.0) + 0.5 * y.powf(-s);
        let mut rising = s;
        let mut fact = 2.0;
        for (j, bj) in b.iter().enumerate() {
            let m = 2 * (j + 1);
            sum += bj / fact * rising * y.powf(-s - m as f64 + 1.0);
            rising *= (s + m as f64 - 1.0) * (s + m as f64);
            fact *= ((m + 1) * (m + 2)) as f64;
        }
        sum
    }

    #[test]
    fn compensated_examples() {
        assert_eq!(compensated_sum([1.0, 1e-17, -1.0]), 1e-17);
        assert_eq!(compensated_sum(std::iter::empty::<f64>()), 0.0);
        let s = compensated_sum(std::iter::repeat(0.1).take(1_000_000));
        assert!((s - 1e5).abs() < 1e-9);
    }

    #[test]
    fn compensated_chunking_is_irrelevant() {
        let values: Vec<f64> = (1..5000).map(|k| ((k * 7919) % 1000) as f64 / 7.0 - 60.0).collect();
        let whole = compensated_sum(values.iter().copied());
        let mut acc = CompensatedSum::new();
        for chunk in values.chunks(37) {
            acc.extend(chunk.iter().copied());
        }
        assert_eq!(acc.value(), whole);
    }

    #[test]
    fn constants_digits() {
        let c = constants::<f64>();
        assert!((c.euler_gamma - 0.577_215_66).abs() < 1e-8);
        assert_eq!(c.pi, std::f64::consts::PI);
        assert!((c.log_2pi - (2.0 * std::f64::consts::PI).ln()).abs() < 1e-15);
    }

    #[test]
    fn ln_gamma_examples() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        let half = ln_gamma(0.5).unwrap();
        assert!((half - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        let d = ln_gamma(1.0 / 3.0).unwrap() - ln_gamma(2.0 / 3.0).unwrap();
        // lnΓ(1/3) − lnΓ(2/3), 30-digit reference
        assert!((d - 0.682_270_371_780_243_5).abs() < 1e-14, "{d}");
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
    }

    #[test]
    fn ln_gamma_relative_accuracy_on_unit_interval() {
        // references from a 40-digit evaluation
        let refs = [
            (0.1, 2.252_712_651_734_205_9),
            (0.7, 0.260_867_246_531_666_5),
            (0.8, 0.152_059_678_399_837_59),
            (0.95, 0.030_968_795_237_972_897),
            (0.999, 0.000_578_038_532_891_379_72),
            (1e-6, 13.815_509_980_749_432),
        ];
        for (x, want) in refs {
            let got = ln_gamma(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-14, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn ln_gamma_double_double() {
        let third = DD::ONE / DD::from_f64(3.0);
        let d = ln_gamma(third).unwrap() - ln_gamma(DD::ONE - third).unwrap();
        let want = DD::parse_decimal("0.682270371780243500511311219606");
        assert!((d - want).abs().to_f64() < 1e-28, "{d}");
        let h = ln_gamma(DD::from_f64(0.5)).unwrap();
        let want = DD::constants().ln_pi * DD::from_f64(0.5);
        assert!((h - want).abs().to_f64() < 1e-30);
    }

    #[test]
    fn zeta_integers() {
        assert!((zeta_int::<f64>(2) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
        let z3: DD = zeta_int(3);
        assert!((z3 - DD::constants().zeta3).abs().to_f64() < 1e-30);
    }

    #[test]
    fn hurwitz_examples() {
        let h = hurwitz_at_zero(0.5).unwrap();
        assert_eq!(h.z0, 0.0);
        let q = hurwitz_at_zero(0.25).unwrap();
        let lerch = ln_gamma(0.25).unwrap() - 0.5 * constants::<f64>().log_2pi;
        assert!((q.z1 - lerch).abs() < 1e-13);
        let t = hurwitz_at_zero(1.0 / 3.0).unwrap();
        let hh = 1e-4;
        let fd = (hurwitz_direct(hh, 1.0 / 3.0) - 2.0 * hurwitz_direct(0.0, 1.0 / 3.0)
            + hurwitz_direct(-hh, 1.0 / 3.0))
            / (hh * hh);
        assert!((t.z2 - fd).abs() < 1e-6, "{} vs {fd}", t.z2);
        assert!(hurwitz_at_zero(0.0).is_err());
        assert!(hurwitz_at_zero(1.0).is_err());
    }

    #[test]
    fn hurwitz_reference_values() {
        // ζ(s, 1/2) = (2^s − 1)·ζ(s) gives ζ''(0, 1/2) = −ln²2/2 − ln2·ln(2π)
        let l2 = std::f64::consts::LN_2;
        let want = -l2 * l2 / 2.0 - l2 * (2.0 * std::f64::consts::PI).ln();
        let got = hurwitz_at_zero(0.5).unwrap().z2;
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        let dd: DD = hurwitz_at_zero(DD::from_f64(0.5)).unwrap().z2;
        let c = DD::constants();
        let want_dd = -(c.ln2 * c.ln2) / DD::from_f64(2.0) - c.ln2 * c.log_2pi;
        assert!((dd - want_dd).abs().to_f64() < 1e-29, "{dd:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn lerch_identity(x in 0.01f64..0.99) {
            let h = hurwitz_at_zero(x).unwrap();
            let lerch = ln_gamma(x).unwrap() - 0.5 * constants::<f64>().log_2pi;
            prop_assert!((h.z1 - lerch).abs() <= 1e-11);
            prop_assert!((h.z0 - (0.5 - x)).abs() <= 1e-12);
        }

        #[test]
        fn reflection(x in 0.001f64..0.999) {
            let lhs = ln_gamma(x).unwrap() + ln_gamma(1.0 - x).unwrap();
            let rhs = std::f64::consts::PI.ln() - (std::f64::consts::PI * x).sin().ln();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn second_derivative_matches_finite_difference(x in 0.01f64..0.99) {
            let hh = 1e-2;
            let f = |s: f64| hurwitz_direct(s, x);
            let fd = (-f(2.0 * hh) + 16.0 * f(hh) - 30.0 * f(0.0) + 16.0 * f(-hh) - f(-2.0 * hh))
                / (12.0 * hh * hh);
            let z2 = hurwitz_at_zero(x).unwrap().z2;
            prop_assert!((z2 - fd).abs() <= 1e-6, "x={} z2={} fd={}", x, z2, fd);
        }
    }

    #[test]
    fn kernel_tables_match_double_double_evaluation() {
        let t = f64::kernel_tables();
        for i in 1..1000 {
            let x = i as f64 / 1000.0;
            let xd = DD::from_f64(x);
            let a = t.ln_gamma(x);
            let b = ln_gamma(xd).unwrap().to_f64();
            assert!((a - b).abs() <= 4e-16 * b.abs().max(1.0), "x={x}: {a} vs {b}");
            let a = t.zeta2(x);
            let b = hurwitz_at_zero(xd).unwrap().z2.to_f64();
            // the ln²x term alone carries about one ulp of its own size
            let size = b.abs().max(x.ln().powi(2)).max(1.0);
            assert!((a - b).abs() <= 8e-16 * size, "x={x}: {a} vs {b}");
        }
        let (n1, n2) = t.terms();
        assert!(n1 < 40 && n2 < 40, "{n1} {n2}");
    }

    #[test]
    fn kernel_tables_double_double() {
        let t = DD::kernel_tables();
        for i in [1u64, 7, 250, 500, 999] {
            let x = DD::from_u64(i) / DD::from_u64(1000);
            let a = t.ln_gamma(x);
            let b = ln_gamma(x).unwrap();
            assert!((a - b).abs().to_f64() < 1e-29 * b.abs().to_f64().max(1.0), "x={i}/1000: {a} vs {b}");
            let a = t.zeta2(x);
            let b = hurwitz_at_zero(x).unwrap().z2;
            assert!((a - b).abs().to_f64() < 1e-29 * b.abs().to_f64().max(1.0), "x={i}/1000: {a} vs {b}");
        }
    }
}
