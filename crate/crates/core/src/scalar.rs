//! Working-precision scalars and extended-exponent complex numbers.
//!
//! Repeated root squaring drives coefficient magnitudes apart as `r^(2^k)`,
//! which leaves the exponent range of `f64` after a dozen steps even for
//! modest degrees. [`Ext`] pairs a complex mantissa with a separate `i64`
//! binary exponent so only the significand is limited by the working type.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::Float;
use twofloat::TwoFloat;

/// Real working type for the squaring and shifting kernels.
///
/// Implemented for `f64` and for double-double [`TwoFloat`] (about 106 bits).
pub trait Real: Float + Debug + Send + Sync + 'static {
    /// Significand bits, used to decide when an addend is negligible.
    const SIGNIFICAND_BITS: u32;

    fn from_f64(x: f64) -> Self;

    /// Nearest `f64`.
    fn approx(self) -> f64;

    /// `self * 2^e`, exact unless the result leaves the normal range.
    fn mul_pow2(self, e: i64) -> Self {
        let mut x = self;
        let mut e = e;
        while e != 0 {
            let step = e.clamp(-1000, 1000);
            x = x * Self::from_f64(2f64.powi(step as i32));
            e -= step;
        }
        x
    }
}

impl Real for f64 {
    const SIGNIFICAND_BITS: u32 = 53;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn approx(self) -> f64 {
        self
    }
}

impl Real for TwoFloat {
    const SIGNIFICAND_BITS: u32 = 106;

    fn from_f64(x: f64) -> Self {
        TwoFloat::from_f64(x)
    }

    fn approx(self) -> f64 {
        self.hi() + self.lo()
    }
}

/// Binary exponent `e` with `x = m * 2^e`, `|m|` in `[0.5, 1)`. Zero maps to 0.
pub fn frexp_exponent(x: f64) -> i64 {
    if x == 0.0 || !x.is_finite() {
        return 0;
    }
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal
        return frexp_exponent(x * 2f64.powi(64)) - 64;
    }
    raw - 1022
}

/// Complex number `m * 2^e` with an unbounded exponent.
///
/// A nonzero value keeps `max(|re m|, |im m|)` in `[0.5, 1)`; zero is stored
/// with a zero mantissa and `e == 0`.
#[derive(Clone, Copy, Debug)]
pub struct Ext<F: Real> {
    pub m: Complex<F>,
    pub e: i64,
}

impl<F: Real> Ext<F> {
    pub fn zero() -> Self {
        Ext {
            m: Complex::new(F::zero(), F::zero()),
            e: 0,
        }
    }

    pub fn from_complex(m: Complex<F>) -> Self {
        Ext { m, e: 0 }.normalized()
    }

    pub fn from_c64(z: num_complex::Complex64) -> Self {
        Self::from_complex(Complex::new(F::from_f64(z.re), F::from_f64(z.im)))
    }

    pub fn is_zero(&self) -> bool {
        self.m.re == F::zero() && self.m.im == F::zero()
    }

    pub fn is_finite(&self) -> bool {
        self.m.re.is_finite() && self.m.im.is_finite()
    }

    fn normalized(self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let big = self.m.re.approx().abs().max(self.m.im.approx().abs());
        if !big.is_finite() {
            return self;
        }
        let shift = frexp_exponent(big);
        if shift == 0 {
            return self;
        }
        Ext {
            m: Complex::new(self.m.re.mul_pow2(-shift), self.m.im.mul_pow2(-shift)),
            e: self.e + shift,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Ext {
            m: self.m * other.m,
            e: self.e + other.e,
        }
        .normalized()
    }

    pub fn scale(&self, k: F) -> Self {
        Ext {
            m: Complex::new(self.m.re * k, self.m.im * k),
            e: self.e,
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        Ext {
            m: Complex::new(-self.m.re, -self.m.im),
            e: self.e,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        sum([*self, *other])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `|z| = 2^log2_abs`; `None` for zero.
    pub fn log2_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let re = self.m.re.approx();
        let im = self.m.im.approx();
        Some(re.hypot(im).log2() + self.e as f64)
    }

    /// Collapse into a plain `Complex<F>`, saturating to zero or infinity.
    pub fn to_complex(&self) -> Complex<F> {
        Complex::new(self.m.re.mul_pow2(self.e), self.m.im.mul_pow2(self.e))
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        let z = self.to_complex();
        num_complex::Complex64::new(z.re.approx(), z.im.approx())
    }

    /// Quotient `self / other` as an ordinary complex `f64`.
    pub fn ratio(&self, other: &Self) -> num_complex::Complex64 {
        let a = num_complex::Complex64::new(self.m.re.approx(), self.m.im.approx());
        let b = num_complex::Complex64::new(other.m.re.approx(), other.m.im.approx());
        let q = a / b;
        let e = self.e - other.e;
        let s = 2f64.powi(e.clamp(-2000, 2000) as i32);
        q * s
    }
}

/// Sum of extended values aligned on the largest exponent.
pub fn sum<F: Real, I: IntoIterator<Item = Ext<F>>>(terms: I) -> Ext<F> {
    let terms: Vec<Ext<F>> = terms.into_iter().filter(|t| !t.is_zero()).collect();
    let Some(top) = terms.iter().map(|t| t.e).max() else {
        return Ext::zero();
    };
    let cutoff = 2 * F::SIGNIFICAND_BITS as i64 + 16;
    let mut acc = Complex::new(F::zero(), F::zero());
    for t in &terms {
        let d = t.e - top;
        if d < -cutoff {
            continue;
        }
        acc = acc + Complex::new(t.m.re.mul_pow2(d), t.m.im.mul_pow2(d));
    }
    Ext { m: acc, e: top }.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn frexp_matches_definition() {
        for &x in &[1.0, 0.5, 0.75, 3.0, 1e-310, -1024.0, 1e300] {
            let e = frexp_exponent(x);
            let m = x.abs() * 2f64.powi(-(e as i32) / 2) * 2f64.powi(-(e as i32) + (e as i32) / 2);
            assert!((0.5..1.0).contains(&m), "{x}: m={m}");
        }
    }

    #[test]
    fn products_beyond_f64_range() {
        let a = Ext::<f64>::from_c64(Complex64::new(1e-200, 0.0));
        let mut p = a;
        for _ in 0..10 {
            p = p.mul(&a);
        }
        let l = p.log2_abs().unwrap();
        let want = 11.0 * (1e-200f64).log2();
        assert!((l - want).abs() < 1e-9 * want.abs());
    }

    #[test]
    fn sum_cancels_and_aligns() {
        let a = Ext::<f64>::from_c64(Complex64::new(3.0, 1.0));
        let b = Ext::<f64>::from_c64(Complex64::new(-3.0, 1.0));
        let s = a.add(&b).to_c64();
        assert_eq!(s, Complex64::new(0.0, 2.0));
        let tiny = Ext::<f64>::from_c64(Complex64::new(1e-300, 0.0)).mul(&Ext::from_c64(Complex64::new(1e-300, 0.0)));
        assert_eq!(a.add(&tiny).to_c64(), Complex64::new(3.0, 1.0));
    }

    #[test]
    fn twofloat_keeps_extra_bits() {
        let one = Ext::<TwoFloat>::from_c64(Complex64::new(1.0, 0.0));
        let eps = Ext::<TwoFloat>::from_c64(Complex64::new(2f64.powi(-80), 0.0));
        let s = one.add(&eps).sub(&one);
        assert_eq!(s.log2_abs(), Some(-80.0));
    }
}
