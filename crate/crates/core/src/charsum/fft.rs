//! Arbitrary-length DFT with the `+i` sign convention and no normalisation:
//! `X[j] = Σ_k x[k]·exp(2πi·jk/n)`.
//!
//! Lengths that are not powers of two go through Bluestein's chirp-z
//! reduction to a power-of-two cyclic convolution. The power-of-two kernel is
//! a plain iterative radix-2 FFT generic over [`Real`]; for `f64` a
//! [`rustfft`] plan is used instead.

use std::cell::RefCell;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use crate::real::{sin_cos_pi_ratio, Real};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[repr(C)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Complex<T> {
    #[inline]
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }

    pub fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }

    pub fn real(re: T) -> Self {
        Complex::new(re, T::zero())
    }

    #[inline]
    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    #[inline]
    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> T {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        Complex::new(self.re * s, self.im * s)
    }

    pub fn div(self, other: Self) -> Self {
        let d = other.norm_sqr();
        let n = self * other.conj();
        Complex::new(n.re / d, n.im / d)
    }

    /// `exp(iπ·num/den)`.
    pub fn unit_pi_ratio(num: u64, den: u64) -> Self {
        let (s, c) = sin_cos_pi_ratio::<T>(num, den);
        Complex::new(c, s)
    }
}

impl<T: Real> Add for Complex<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl<T: Real> AddAssign for Complex<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl<T: Real> Sub for Complex<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl<T: Real> Neg for Complex<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<T: Real> Mul for Complex<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

/// Scalar types with a power-of-two transform backend.
pub trait FftScalar: Real {
    type Pow2: Pow2Fft<Self>;
    fn pow2_plan(len: usize) -> Self::Pow2;
}

/// An in-place forward (`exp(-2πi·jk/m)`) power-of-two transform.
pub trait Pow2Fft<T>: Send + Sync {
    fn len(&self) -> usize;
    /// `scratch` is a reusable buffer the backend may resize.
    fn forward(&self, data: &mut [Complex<T>], scratch: &mut Vec<Complex<T>>);
}

/// Iterative radix-2 Cooley-Tukey with a precomputed twiddle table.
pub struct Radix2<T> {
    len: usize,
    twiddles: Vec<Complex<T>>,
}

impl<T: Real> Radix2<T> {
    pub fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "radix-2 length must be a power of two");
        // exp(-2πi·k/len) for k < len/2, each evaluated directly
        let twiddles = (0..len / 2)
            .map(|k| Complex::unit_pi_ratio(2 * (len - k) as u64, len as u64))
            .collect();
        Radix2 { len, twiddles }
    }
}

impl<T: Real> Pow2Fft<T> for Radix2<T> {
    fn len(&self) -> usize {
        self.len
    }

    fn forward(&self, data: &mut [Complex<T>], _scratch: &mut Vec<Complex<T>>) {
        let n = self.len;
        assert_eq!(data.len(), n);
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                data.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}

impl FftScalar for crate::dd::DoubleDouble {
    type Pow2 = Radix2<crate::dd::DoubleDouble>;
    fn pow2_plan(len: usize) -> Self::Pow2 {
        Radix2::new(len)
    }
}

/// `rustfft` power-of-two plan for binary64.
pub struct RustFft {
    len: usize,
    plan: Arc<dyn rustfft::Fft<f64>>,
}

impl Pow2Fft<f64> for RustFft {
    fn len(&self) -> usize {
        self.len
    }

    fn forward(&self, data: &mut [Complex<f64>], scratch: &mut Vec<Complex<f64>>) {
        assert_eq!(data.len(), self.len);
        scratch.resize(self.plan.get_inplace_scratch_len(), Complex::zero());
        // SAFETY: both types are #[repr(C)] pairs of f64 with identical layout.
        let (buf, scr) = unsafe {
            (
                std::slice::from_raw_parts_mut(data.as_mut_ptr().cast(), data.len()),
                std::slice::from_raw_parts_mut(scratch.as_mut_ptr().cast(), scratch.len()),
            )
        };
        self.plan.process_with_scratch(buf, scr);
    }
}

impl FftScalar for f64 {
    type Pow2 = RustFft;
    fn pow2_plan(len: usize) -> Self::Pow2 {
        thread_local! {
            static PLANNER: RefCell<rustfft::FftPlanner<f64>> =
                RefCell::new(rustfft::FftPlanner::new());
        }
        RustFft {
            len,
            plan: PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len)),
        }
    }
}

/// A reusable plan for length-`n` transforms.
pub struct DftPlan<T: FftScalar> {
    n: usize,
    kind: PlanKind<T>,
    /// work buffer and backend scratch, reused across calls
    work: Mutex<(Vec<Complex<T>>, Vec<Complex<T>>)>,
}

enum PlanKind<T: FftScalar> {
    Trivial,
    /// n is a power of two: forward transform of the reversed input.
    Pow2(T::Pow2),
    Bluestein {
        fft: T::Pow2,
        /// w_k = exp(iπ k²/n)
        chirp: Vec<Complex<T>>,
        /// forward transform of conj(w) laid out cyclically, pre-divided by m
        kernel: Vec<Complex<T>>,
    },
}

impl<T: FftScalar> DftPlan<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "DFT length must be positive");
        if n == 1 {
            return DftPlan {
                n,
                kind: PlanKind::Trivial,
                work: Mutex::default(),
            };
        }
        if n.is_power_of_two() {
            return DftPlan {
                n,
                kind: PlanKind::Pow2(T::pow2_plan(n)),
                work: Mutex::default(),
            };
        }
        let m = (2 * n - 1).next_power_of_two();
        let fft = T::pow2_plan(m);
        let two_n = 2 * n as u64;
        let chirp: Vec<Complex<T>> = (0..n as u64)
            .map(|k| Complex::unit_pi_ratio((k * k) % two_n, n as u64))
            .collect();
        let mut kernel = vec![Complex::zero(); m];
        let inv_m = T::one() / T::from_u64(m as u64);
        kernel[0] = chirp[0].conj().scale(inv_m);
        for k in 1..n {
            let v = chirp[k].conj().scale(inv_m);
            kernel[k] = v;
            kernel[m - k] = v;
        }
        let mut scratch = Vec::new();
        fft.forward(&mut kernel, &mut scratch);
        DftPlan {
            n,
            kind: PlanKind::Bluestein { fft, chirp, kernel },
            work: Mutex::new((Vec::new(), scratch)),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `X[j] = Σ_k x[k]·exp(2πi·jk/n)`.
    pub fn execute(&self, input: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(input.len(), self.n, "input length does not match plan");
        let mut guard = self.work.lock().unwrap_or_else(|e| e.into_inner());
        let (buf, scratch) = &mut *guard;
        match &self.kind {
            PlanKind::Trivial => input.to_vec(),
            PlanKind::Pow2(fft) => {
                // Σ x[k] e^{+2πijk/n} = forward transform of x[-k mod n]
                let n = self.n;
                let mut out: Vec<Complex<T>> = (0..n).map(|k| input[(n - k) % n]).collect();
                fft.forward(&mut out, scratch);
                out
            }
            PlanKind::Bluestein { fft, chirp, kernel } => {
                let m = fft.len();
                buf.clear();
                buf.extend(input.iter().zip(chirp).map(|(&x, &w)| x * w));
                buf.resize(m, Complex::zero());
                fft.forward(buf, scratch);
                for (b, k) in buf.iter_mut().zip(kernel) {
                    *b = (*b * *k).conj();
                }
                // inverse via conjugated forward transform
                fft.forward(buf, scratch);
                (0..self.n).map(|j| buf[j].conj() * chirp[j]).collect()
            }
        }
    }
}

/// One-shot transform.
pub fn dft<T: FftScalar>(x: &[Complex<T>]) -> Vec<Complex<T>> {
    DftPlan::new(x.len()).execute(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::DoubleDouble;
    use proptest::prelude::*;

    /// O(n²) reference transform.
    fn direct(x: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let n = x.len();
        (0..n)
            .map(|j| {
                let mut acc = Complex::zero();
                for (k, v) in x.iter().enumerate() {
                    let theta = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                    acc += *v * Complex::new(theta.cos(), theta.sin());
                }
                acc
            })
            .collect()
    }

    fn max_err(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn small_examples() {
        let one = dft(&[Complex::real(5.0)]);
        assert_eq!(one, vec![Complex::real(5.0)]);
        let two = dft(&[Complex::real(1.0), Complex::real(1.0)]);
        assert!(max_err(&two, &[Complex::real(2.0), Complex::zero()]) < 1e-15);
    }

    #[test]
    fn sign_convention_is_plus_i() {
        // x = δ_1 gives X[j] = exp(2πij/n)
        let n = 6;
        let mut x = vec![Complex::zero(); n];
        x[1] = Complex::real(1.0);
        let out = dft(&x);
        let theta = 2.0 * std::f64::consts::PI / n as f64;
        assert!((out[1].re - theta.cos()).abs() < 1e-14);
        assert!((out[1].im - theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn matches_direct_for_all_lengths_up_to_64() {
        for n in 1..=64usize {
            let x: Vec<Complex<f64>> = (0..n)
                .map(|k| Complex::new(((k * 37 + 11) % 17) as f64 - 8.0, ((k * 13) % 7) as f64))
                .collect();
            let scale = x.iter().map(|v| v.abs()).sum::<f64>();
            assert!(max_err(&dft(&x), &direct(&x)) <= 1e-13 * scale, "n={n}");
        }
    }

    #[test]
    fn double_double_matches_f64() {
        for n in [6usize, 16, 45, 100] {
            let xf: Vec<Complex<f64>> = (0..n).map(|k| Complex::new((k as f64).sin(), 0.3)).collect();
            let xd: Vec<Complex<DoubleDouble>> = xf
                .iter()
                .map(|c| Complex::new(DoubleDouble::from_f64(c.re), DoubleDouble::from_f64(c.im)))
                .collect();
            let yf = direct(&xf);
            let yd = dft(&xd);
            for (a, b) in yf.iter().zip(&yd) {
                assert!((a.re - b.re.to_f64()).abs() < 1e-12);
                assert!((a.im - b.im.to_f64()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn double_double_is_accurate_beyond_f64() {
        // transform of ones: X[0] = n, X[j] = 0 otherwise
        let n = 999;
        let x = vec![Complex::real(DoubleDouble::ONE); n];
        let y = dft(&x);
        assert!((y[0].re - DoubleDouble::from_f64(n as f64)).abs().to_f64() < 1e-25);
        for v in &y[1..] {
            assert!(v.abs().to_f64() < 1e-25);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn random_inputs_match_direct(v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..64)) {
            let x: Vec<Complex<f64>> = v.iter().map(|&(a, b)| Complex::new(a, b)).collect();
            let n = x.len() as f64;
            prop_assert!(max_err(&dft(&x), &direct(&x)) <= 1e-12 * n.max(1.0));
        }
    }
}
