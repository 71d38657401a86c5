//! Scalar abstraction shared by the double and double-double pipelines.
//!
//! Every kernel, transform and assembly step is written once against [`Real`]
//! and instantiated for `f64` and [`DoubleDouble`](crate::dd::DoubleDouble).

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

/// Decimal expansions of the constants, 36 significant digits each.
pub mod digits {
    pub const PI: &str = "3.14159265358979323846264338327950288";
    pub const EULER_GAMMA: &str = "0.577215664901532860606512090082402431";
    pub const LN_2PI: &str = "1.83787706640934548356065947281123527";
    pub const ZETA3: &str = "1.20205690315959428539973816151144999";
    pub const LN_2: &str = "0.693147180559945309417232121458176568";
    pub const LN_PI: &str = "1.14472988584940017414342735135305871";
}

/// Bernoulli numbers B_2, B_4, ..., B_40 as exact fractions.
pub const BERNOULLI: [(i128, i128); 20] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
    (-7709321041217, 510),
    (2577687858367, 6),
    (-26315271553053477373, 1919190),
    (2929993913841559, 6),
    (-261082718496449122051, 13530),
];

/// Constants materialised in a given scalar type.
#[derive(Debug, Clone)]
pub struct Constants<T> {
    pub pi: T,
    pub euler_gamma: T,
    pub log_2pi: T,
    pub zeta3: T,
    pub ln2: T,
    pub ln_pi: T,
    /// `bernoulli[k - 1]` holds B_{2k}.
    pub bernoulli: Vec<T>,
}

impl<T: Real> Constants<T> {
    pub(crate) fn build() -> Self {
        Constants {
            pi: T::parse_decimal(digits::PI),
            euler_gamma: T::parse_decimal(digits::EULER_GAMMA),
            log_2pi: T::parse_decimal(digits::LN_2PI),
            zeta3: T::parse_decimal(digits::ZETA3),
            ln2: T::parse_decimal(digits::LN_2),
            ln_pi: T::parse_decimal(digits::LN_PI),
            bernoulli: BERNOULLI
                .iter()
                .map(|&(n, d)| T::from_i128(n) / T::from_i128(d))
                .collect(),
        }
    }
}

/// Real scalar used by the numeric pipeline.
pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Unit roundoff.
    const EPSILON: f64;
    /// lnΓ is shifted upward until the argument reaches this value.
    const LNGAMMA_SHIFT: f64;
    /// Number of Bernoulli corrections in the Stirling series.
    const STIRLING_TERMS: usize;
    /// Integer shift before Euler-Maclaurin in the Hurwitz evaluation.
    const HURWITZ_SHIFT: u32;
    /// Number of Bernoulli corrections in the Hurwitz evaluation.
    const HURWITZ_TERMS: usize;

    fn from_f64(x: f64) -> Self;
    fn from_i128(n: i128) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn floor(self) -> Self;
    fn is_finite(self) -> bool;
    /// `(sin x, cos x)` for `|x| <= π/4`.
    fn sin_cos_small(self) -> (Self, Self);
    fn parse_decimal(s: &str) -> Self;
    fn constants() -> &'static Constants<Self>;
    /// ζ(k) − 1 indexed by k (entries 0 and 1 unused).
    fn zeta_minus_one() -> &'static [Self];
    /// Chebyshev tables for the bulk kernels.
    fn kernel_tables() -> &'static crate::special::KernelTables<Self>;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn from_u64(n: u64) -> Self {
        Self::from_i128(n as i128)
    }
    fn from_i64(n: i64) -> Self {
        Self::from_i128(n as i128)
    }
    fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON / 2.0;
    const LNGAMMA_SHIFT: f64 = 10.0;
    const STIRLING_TERMS: usize = 8;
    const HURWITZ_SHIFT: u32 = 12;
    const HURWITZ_TERMS: usize = 8;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_i128(n: i128) -> Self {
        n as f64
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn floor(self) -> Self {
        f64::floor(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn sin_cos_small(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn parse_decimal(s: &str) -> Self {
        s.parse().expect("malformed decimal constant")
    }
    fn constants() -> &'static Constants<Self> {
        static CONSTS: OnceLock<Constants<f64>> = OnceLock::new();
        CONSTS.get_or_init(Constants::build)
    }
    fn zeta_minus_one() -> &'static [Self] {
        static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
        TABLE.get_or_init(crate::special::zeta_minus_one_table::<f64>)
    }
    fn kernel_tables() -> &'static crate::special::KernelTables<Self> {
        static TABLE: OnceLock<crate::special::KernelTables<f64>> = OnceLock::new();
        TABLE.get_or_init(|| {
            crate::dd::DoubleDouble::kernel_tables().convert(|c| c.to_f64())
        })
    }
}

/// `(sin(π·num/den), cos(π·num/den))` with the reduction done in integers.
pub fn sin_cos_pi_ratio<T: Real>(num: u64, den: u64) -> (T, T) {
    assert!(den > 0, "zero denominator");
    let den = den as u128;
    let t = num as u128 % (2 * den);
    // θ = π t / den = k·π/2 + (π/2)·r/den
    let k = (2 * t) / den;
    let r = 2 * t - k * den;
    let half_pi = T::constants().pi / T::from_f64(2.0);
    let (s, c) = if 2 * r <= den {
        (half_pi * T::from_i128(r as i128) / T::from_i128(den as i128)).sin_cos_small()
    } else {
        let (s2, c2) =
            (half_pi * T::from_i128((den - r) as i128) / T::from_i128(den as i128))
                .sin_cos_small();
        (c2, s2)
    };
    match k {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}
