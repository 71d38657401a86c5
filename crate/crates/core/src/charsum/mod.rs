//! Character sums `S_f(χ_j) = Σ_a χ_j(a)·f(a/q)` for every character mod a
//! prime, obtained from one transform over the primitive-root ordering.
//!
//! With `χ_j(g^k) = exp(2πi·jk/(q−1))` the sum for index `j` is the `j`-th
//! output of the length `q−1` DFT of `f(g^k mod q / q)`. The character `χ_j`
//! is odd exactly when `j` is odd.

pub mod fft;

pub use fft::{dft, Complex, DftPlan, FftScalar};

use std::fmt;

use crate::error::{Error, Result};
use crate::primes::PrimeContext;
use crate::real::Real;
use crate::special::{ln_gamma_unchecked, zeta2_at_zero, CompensatedSum, KernelTables};

/// Kernel `f` on (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelId {
    /// f(x) = x
    Linear,
    /// f(x) = lnΓ(x)
    LnGamma,
    /// f(x) = ζ″(0, x)
    Zeta2,
}

impl KernelId {
    pub const ALL: [KernelId; 3] = [KernelId::Linear, KernelId::LnGamma, KernelId::Zeta2];

    pub fn name(self) -> &'static str {
        match self {
            KernelId::Linear => "LINEAR",
            KernelId::LnGamma => "LNGAMMA",
            KernelId::Zeta2 => "ZETA2",
        }
    }

    /// Evaluate the kernel at `x ∈ (0, 1)` from the Chebyshev tables.
    #[inline]
    pub fn eval<T: Real>(self, x: T) -> T {
        self.eval_with(T::kernel_tables(), x)
    }

    #[inline]
    fn eval_with<T: Real>(self, tables: &KernelTables<T>, x: T) -> T {
        match self {
            KernelId::Linear => x,
            KernelId::LnGamma => tables.ln_gamma(x),
            KernelId::Zeta2 => tables.zeta2(x),
        }
    }

    /// Evaluate the kernel by the direct special-function routines.
    pub fn eval_direct<T: Real>(self, x: T) -> T {
        match self {
            KernelId::Linear => x,
            KernelId::LnGamma => ln_gamma_unchecked(x),
            KernelId::Zeta2 => zeta2_at_zero(x),
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All character sums of one kernel for one prime.
#[derive(Debug, Clone)]
pub struct CharacterSums<T> {
    pub q: u64,
    pub kernel: KernelId,
    n: usize,
    s: Vec<Complex<T>>,
    /// Σ f(a/q) accumulated directly from the kernel values.
    direct_sum: T,
    /// Σ f(a/q)² accumulated directly from the kernel values.
    direct_energy: T,
}

impl<T: Real> CharacterSums<T> {
    /// Number of characters, q − 1.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Whether only indices `0..=(q−1)/2` are stored.
    pub fn is_half(&self) -> bool {
        self.s.len() < self.n
    }

    /// Stored values; the full spectrum unless built in half mode.
    pub fn stored(&self) -> &[Complex<T>] {
        &self.s
    }

    /// `s[j]`, recovered by conjugate symmetry when not stored.
    #[inline]
    pub fn get(&self, j: usize) -> Complex<T> {
        assert!(j < self.n, "character index {j} out of range for q={}", self.q);
        if j < self.s.len() {
            self.s[j]
        } else {
            self.s[self.n - j].conj()
        }
    }

    /// The full spectrum, expanding a half-mode result.
    pub fn to_full(&self) -> Vec<Complex<T>> {
        (0..self.n).map(|j| self.get(j)).collect()
    }

    /// Σ_a f(a/q) from the kernel values (the principal-character sum).
    pub fn direct_sum(&self) -> T {
        self.direct_sum
    }

    /// Σ_a f(a/q)² from the kernel values.
    pub fn direct_energy(&self) -> T {
        self.direct_energy
    }

    /// Check conjugate symmetry, the principal sum and Parseval.
    pub fn check_invariants(&self) -> Result<()> {
        let q = self.q;
        let scale = self.direct_energy.sqrt().max(T::from_f64(f64::MIN_POSITIVE));
        let sym_tol = 1e-12;
        if !self.is_half() {
            for j in 1..self.n {
                let a = self.s[j];
                let b = self.s[self.n - j].conj();
                let d = (a - b).abs();
                let m = a.abs().max(b.abs()).max(scale);
                if (d / m).to_f64() > sym_tol {
                    return Err(Error::Invariant {
                        q,
                        detail: format!(
                            "{} sums break conjugate symmetry at j={j} (relative {:.3e})",
                            self.kernel,
                            (d / m).to_f64()
                        ),
                    });
                }
            }
        }
        let s0 = self.s[0];
        let denom = self.direct_sum.abs().max(scale);
        let rel0 = ((s0 - Complex::real(self.direct_sum)).abs() / denom).to_f64();
        if rel0 > 1e-12 {
            return Err(Error::Invariant {
                q,
                detail: format!("{} principal sum off by {rel0:.3e} relative", self.kernel),
            });
        }
        let mut e = CompensatedSum::new();
        for j in 0..self.n {
            e.add(self.get(j).norm_sqr());
        }
        let want = T::from_u64(self.n as u64) * self.direct_energy;
        let rel = ((e.value() - want).abs() / want).to_f64();
        if rel > 1e-9 {
            return Err(Error::Invariant {
                q,
                detail: format!("{} Parseval identity off by {rel:.3e} relative", self.kernel),
            });
        }
        Ok(())
    }
}

/// Reusable transform state for one prime: the plan and the power table.
pub struct SumEngine<T: FftScalar> {
    ctx: PrimeContext,
    powers: Vec<u64>,
    plan: DftPlan<T>,
    half: bool,
}

impl<T: FftScalar> SumEngine<T> {
    pub fn new(ctx: &PrimeContext) -> Self {
        SumEngine {
            ctx: ctx.clone(),
            powers: ctx.power_table(),
            plan: DftPlan::new(ctx.n),
            half: false,
        }
    }

    /// Keep only `s[0..=(q−1)/2]`.
    pub fn half_spectrum(mut self, half: bool) -> Self {
        self.half = half;
        self
    }

    pub fn context(&self) -> &PrimeContext {
        &self.ctx
    }

    /// Kernel values `f(g^k mod q / q)` for k = 0..q−2.
    pub fn kernel_values(&self, kernel: KernelId) -> Result<Vec<T>> {
        let q = self.ctx.q;
        let qt = T::from_u64(q);
        let tables = T::kernel_tables();
        let mut out = Vec::with_capacity(self.ctx.n);
        for (k, &a) in self.powers.iter().enumerate() {
            let v = kernel.eval_with(tables, T::from_u64(a) / qt);
            if !v.is_finite() {
                return Err(Error::KernelNotFinite {
                    kernel: kernel.name(),
                    q,
                    k,
                    a,
                });
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn sums(&self, kernel: KernelId) -> Result<CharacterSums<T>> {
        let values = self.kernel_values(kernel)?;
        Ok(self.sums_from_values(kernel, &values))
    }

    /// Transform precomputed kernel values (indexed by k).
    pub fn sums_from_values(&self, kernel: KernelId, values: &[T]) -> CharacterSums<T> {
        assert_eq!(values.len(), self.ctx.n);
        let mut sum = CompensatedSum::new();
        let mut energy = CompensatedSum::new();
        let input: Vec<Complex<T>> = values
            .iter()
            .map(|&v| {
                sum.add(v);
                energy.add(v * v);
                Complex::real(v)
            })
            .collect();
        let mut s = self.plan.execute(&input);
        if self.half {
            s.truncate(self.ctx.n / 2 + 1);
        }
        CharacterSums {
            q: self.ctx.q,
            kernel,
            n: self.ctx.n,
            s,
            direct_sum: sum.value(),
            direct_energy: energy.value(),
        }
    }
}

/// All character sums of `kernel` modulo `ctx.q`.
pub fn character_sums<T: FftScalar>(ctx: &PrimeContext, kernel: KernelId) -> Result<CharacterSums<T>> {
    SumEngine::new(ctx).sums(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::DoubleDouble;
    use crate::primes::{primes_in, PrimeContext};
    use crate::special::ln_gamma;

    #[test]
    fn q3_linear_by_hand() {
        let ctx = PrimeContext::new(3).unwrap();
        let s = character_sums::<f64>(&ctx, KernelId::Linear).unwrap();
        assert!((s.get(0).re - 1.0).abs() < 1e-15);
        assert!((s.get(1).re + 1.0 / 3.0).abs() < 1e-15);
        assert!(s.get(1).im.abs() < 1e-15);
    }

    #[test]
    fn q5_principal_linear() {
        let ctx = PrimeContext::new(5).unwrap();
        let s = character_sums::<f64>(&ctx, KernelId::Linear).unwrap();
        assert!((s.get(0).re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn q3_ln_gamma() {
        let ctx = PrimeContext::new(3).unwrap();
        let s = character_sums::<f64>(&ctx, KernelId::LnGamma).unwrap();
        let want = ln_gamma(1.0 / 3.0).unwrap() - ln_gamma(2.0 / 3.0).unwrap();
        assert!((s.get(1).re - want).abs() < 1e-14);
        assert!((s.get(1).re - 0.682_270_371_780_243_5).abs() < 1e-13);
    }

    /// Σ_a χ_j(a) f(a/q) by explicit discrete logarithms.
    fn direct_sum(ctx: &PrimeContext, kernel: KernelId, j: usize) -> Complex<f64> {
        let ind = ctx.index_table();
        let mut acc = Complex::zero();
        for a in 1..ctx.q {
            let k = ind[a as usize] as u64;
            let chi = Complex::unit_pi_ratio(2 * ((j as u64 * k) % ctx.n as u64), ctx.n as u64);
            acc += chi.scale(kernel.eval_direct(a as f64 / ctx.q as f64));
        }
        acc
    }

    #[test]
    fn matches_direct_character_sums() {
        for q in [7u64, 11, 13, 31, 97] {
            let ctx = PrimeContext::new(q).unwrap();
            for kernel in KernelId::ALL {
                let s = character_sums::<f64>(&ctx, kernel).unwrap();
                for j in 0..ctx.n {
                    let d = direct_sum(&ctx, kernel, j);
                    assert!((s.get(j) - d).abs() < 1e-11, "q={q} {kernel} j={j}");
                }
            }
        }
    }

    #[test]
    fn parity_and_invariants_up_to_200() {
        for q in primes_in(2, 200) {
            let ctx = PrimeContext::new(q).unwrap();
            let engine = SumEngine::<f64>::new(&ctx);
            for kernel in KernelId::ALL {
                let s = engine.sums(kernel).unwrap();
                s.check_invariants().unwrap();
                if kernel == KernelId::Linear {
                    for j in (2..ctx.n).step_by(2) {
                        assert!(s.get(j).abs() < 1e-10, "q={q} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn half_spectrum_agrees_with_full() {
        let ctx = PrimeContext::new(101).unwrap();
        let full = SumEngine::<f64>::new(&ctx).sums(KernelId::Zeta2).unwrap();
        let half = SumEngine::<f64>::new(&ctx)
            .half_spectrum(true)
            .sums(KernelId::Zeta2)
            .unwrap();
        assert!(half.is_half());
        assert_eq!(half.stored().len(), 51);
        for j in 0..100 {
            assert!((full.get(j) - half.get(j)).abs() < 1e-12);
        }
        half.check_invariants().unwrap();
    }

    #[test]
    fn double_double_sums_agree() {
        let ctx = PrimeContext::new(103).unwrap();
        let a = character_sums::<f64>(&ctx, KernelId::LnGamma).unwrap();
        let b = character_sums::<DoubleDouble>(&ctx, KernelId::LnGamma).unwrap();
        b.check_invariants().unwrap();
        for j in 0..ctx.n {
            let d = b.get(j);
            assert!((a.get(j).re - d.re.to_f64()).abs() < 1e-12);
            assert!((a.get(j).im - d.im.to_f64()).abs() < 1e-12);
        }
    }
}
