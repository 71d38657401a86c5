//! Double-double arithmetic: an unevaluated sum `hi + lo` of two binary64
//! values carrying roughly 106 bits (about 31 decimal digits) of precision.
//!
//! The error-free transformations follow Dekker and Knuth; products use a
//! fused multiply-add for the exact low part.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use crate::real::{Constants, Real};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        DoubleDouble { hi: h, lo: l }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renorm(p, e + self.lo * b)
    }

    #[inline]
    pub fn sqr(self) -> Self {
        let (p, e) = two_prod(self.hi, self.hi);
        Self::renorm(p, e + 2.0 * self.hi * self.lo + self.lo * self.lo)
    }

    /// Multiply by 2^k exactly.
    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        DoubleDouble {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(self, digits: usize) -> String {
        if self.hi == 0.0 {
            return "0".to_string();
        }
        if !self.hi.is_finite() {
            return format!("{}", self.hi);
        }
        let neg = self.hi < 0.0;
        let mut x = if neg { -self } else { self };
        let mut exp10 = x.hi.log10().floor() as i32;
        let ten = DoubleDouble::from_f64(10.0);
        x = x / ten.powi_signed(exp10);
        while x.hi >= 10.0 {
            x /= ten;
            exp10 += 1;
        }
        while x.hi < 1.0 {
            x *= ten;
            exp10 -= 1;
        }
        let mut out = Vec::with_capacity(digits);
        for _ in 0..digits {
            let d = x.hi.floor().clamp(0.0, 9.0);
            out.push(d as u8);
            x = (x - DoubleDouble::from_f64(d)) * ten;
        }
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push((b'0' + out[0]) as char);
        s.push('.');
        for d in &out[1..] {
            s.push((b'0' + d) as char);
        }
        s.push_str(&format!("e{exp10}"));
        s
    }

    fn powi_signed(self, n: i32) -> Self {
        if n >= 0 {
            self.powi(n as u32)
        } else {
            DoubleDouble::ONE / self.powi(n.unsigned_abs())
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(32))
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(f.precision().unwrap_or(32)))
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Self::renorm(s1, s2 + t2)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        Self::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let mut r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        r -= b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        DoubleDouble { hi: q1, lo: q2 } + DoubleDouble::from_f64(q3)
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            #[inline]
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl Real for DoubleDouble {
    const EPSILON: f64 = 4.93e-32;
    const LNGAMMA_SHIFT: f64 = 24.0;
    const STIRLING_TERMS: usize = 20;
    const HURWITZ_SHIFT: u32 = 24;
    const HURWITZ_TERMS: usize = 20;

    #[inline]
    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn from_i128(n: i128) -> Self {
        let hi = n as f64;
        // |n - hi| < 2^75 for |n| < 2^127; the remainder is exact after a second split
        let rem = n - hi as i128;
        let mid = rem as f64;
        let rem2 = (rem - mid as i128) as f64;
        DoubleDouble::renorm(hi, mid) + DoubleDouble::from_f64(rem2)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                DoubleDouble::ZERO
            } else {
                DoubleDouble::from_f64(f64::NAN)
            };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (p, e) = DoubleDouble::from_f64(ax).sqr().into();
        let diff = self - DoubleDouble::new(p, e);
        DoubleDouble::from_f64(ax) + DoubleDouble::from_f64(diff.hi * (x * 0.5))
    }

    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DoubleDouble::ZERO;
        }
        let ln2 = Self::constants().ln2;
        let m = (self.hi / ln2.hi).round();
        let r = (self - ln2.mul_f64(m)).ldexp(-9);
        // Taylor series for exp(r) - 1 on |r| < 7e-4
        let mut term = r;
        let mut sum = r;
        let mut k = 2.0;
        loop {
            term = term * r / DoubleDouble::from_f64(k);
            sum += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
            k += 1.0;
        }
        // (1 + s)^2 - 1 = 2s + s^2, applied nine times
        for _ in 0..9 {
            sum = sum.mul_f64(2.0) + sum.sqr();
        }
        (sum + DoubleDouble::ONE).ldexp(m as i32)
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::from_f64(if self.hi == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return DoubleDouble::ZERO;
        }
        // one Newton step on exp(y) = x doubles the f64 accuracy
        let y = DoubleDouble::from_f64(self.hi.ln());
        y + self * (-y).exp() - DoubleDouble::ONE
    }

    fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            DoubleDouble::renorm(hi, self.lo.floor())
        } else {
            DoubleDouble::from_f64(hi)
        }
    }

    #[inline]
    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn sin_cos_small(self) -> (Self, Self) {
        if self.hi == 0.0 {
            return (DoubleDouble::ZERO, DoubleDouble::ONE);
        }
        let x2 = self.sqr();
        let mut term = self;
        let mut sin = self;
        let mut k = 1.0;
        loop {
            term = -(term * x2) / DoubleDouble::from_f64((k + 1.0) * (k + 2.0));
            sin += term;
            k += 2.0;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        let mut term = DoubleDouble::ONE;
        let mut cos = DoubleDouble::ONE;
        let mut k = 0.0;
        loop {
            term = -(term * x2) / DoubleDouble::from_f64((k + 1.0) * (k + 2.0));
            cos += term;
            k += 2.0;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        (sin, cos)
    }

    fn parse_decimal(s: &str) -> Self {
        let s = s.trim();
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mantissa, exp10) = match body.find(['e', 'E']) {
            Some(i) => (
                &body[..i],
                body[i + 1..].parse::<i32>().expect("malformed exponent"),
            ),
            None => (body, 0),
        };
        let ten = DoubleDouble::from_f64(10.0);
        let mut acc = DoubleDouble::ZERO;
        let mut frac_digits = 0i32;
        let mut seen_point = false;
        for ch in mantissa.chars() {
            match ch {
                '.' => seen_point = true,
                '0'..='9' => {
                    acc = acc * ten + DoubleDouble::from_f64((ch as u8 - b'0') as f64);
                    if seen_point {
                        frac_digits += 1;
                    }
                }
                _ => panic!("malformed decimal {s:?}"),
            }
        }
        let e = exp10 - frac_digits;
        let v = if e >= 0 {
            acc * ten.powi(e as u32)
        } else {
            acc / ten.powi((-e) as u32)
        };
        if neg {
            -v
        } else {
            v
        }
    }

    fn constants() -> &'static Constants<Self> {
        static CONSTS: OnceLock<Constants<DoubleDouble>> = OnceLock::new();
        CONSTS.get_or_init(Constants::build)
    }

    fn zeta_minus_one() -> &'static [Self] {
        static TABLE: OnceLock<Vec<DoubleDouble>> = OnceLock::new();
        TABLE.get_or_init(crate::special::zeta_minus_one_table::<DoubleDouble>)
    }
    fn kernel_tables() -> &'static crate::special::KernelTables<Self> {
        static TABLE: OnceLock<crate::special::KernelTables<DoubleDouble>> = OnceLock::new();
        TABLE.get_or_init(crate::special::KernelTables::build)
    }
}

impl From<DoubleDouble> for (f64, f64) {
    fn from(x: DoubleDouble) -> (f64, f64) {
        (x.hi, x.lo)
    }
}
