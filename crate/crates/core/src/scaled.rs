//! Polynomials whose coefficients carry individual binary exponents.
//!
//! This is the representation the root-squaring chain runs on: after `k`
//! squarings the coefficient magnitudes span roughly `2^k` times the log
//! range of the root radii, far beyond any fixed floating exponent.

use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{sum, Ext, Real};

#[derive(Clone, Debug)]
pub struct ScaledPoly<F: Real> {
    coeffs: Vec<Ext<F>>,
}

impl<F: Real> ScaledPoly<F> {
    pub fn from_polynomial(p: &Polynomial) -> Self {
        let s = p.scale_log2();
        let whole = s.floor();
        let frac = F::from_f64(2f64.powf(s - whole));
        let coeffs = p
            .coeffs()
            .iter()
            .map(|&c| {
                let mut x = Ext::<F>::from_c64(c).scale(frac);
                if !x.is_zero() {
                    x.e += whole as i64;
                }
                x
            })
            .collect();
        ScaledPoly { coeffs }
    }

    pub fn from_ext(coeffs: Vec<Ext<F>>) -> Self {
        assert!(!coeffs.is_empty());
        ScaledPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Ext<F>] {
        &self.coeffs
    }

    /// `log2 |c_i|` per coefficient minus the leading binary exponent, `None`
    /// for exact zeros.
    ///
    /// Subtracting an integer first keeps the result bit-identical when every
    /// coefficient is scaled by the same power of two.
    pub fn log2_magnitudes(&self) -> Vec<Option<f64>> {
        let base = self.coeffs.last().map_or(0, |c| c.e);
        self.coeffs
            .iter()
            .map(|c| {
                let mut c = *c;
                c.e -= base;
                c.log2_abs()
            })
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `q(x) = p(x + z)`, synthetic division in working precision.
    pub fn taylor_shift(&self, z: Complex64) -> Self {
        let zz = Ext::<F>::from_c64(z);
        let mut a = self.coeffs.clone();
        let n = self.degree();
        for i in 0..n {
            for j in (i..n).rev() {
                let t = zz.mul(&a[j + 1]);
                a[j] = a[j].add(&t);
            }
        }
        ScaledPoly { coeffs: a }
    }

    /// Root squaring: `(-1)^n p(sqrt x) p(-sqrt x)`, whose roots are `x_j^2`.
    ///
    /// Coefficient `i` is `(-1)^(n-i) (a_i^2 + 2 sum_l (-1)^l a_{i-l} a_{i+l})`.
    pub fn graeffe_step(&self) -> Result<Self> {
        let n = self.degree();
        let a = &self.coeffs;
        let two = F::from_f64(2.0);
        let coeffs: Vec<Ext<F>> = (0..=n)
            .map(|i| {
                let reach = i.min(n - i);
                let cross = sum((1..=reach).map(|l| {
                    let t = a[i - l].mul(&a[i + l]);
                    if l % 2 == 1 {
                        t.neg()
                    } else {
                        t
                    }
                }));
                let c = a[i].mul(&a[i]).add(&cross.scale(two));
                if (n - i) % 2 == 1 {
                    c.neg()
                } else {
                    c
                }
            })
            .collect();
        let q = ScaledPoly { coeffs };
        if q.is_finite() {
            Ok(q)
        } else {
            Err(Error::PrecisionLoss { step: 0 })
        }
    }

    /// Horner evaluation in working precision.
    pub fn evaluate(&self, z: Complex<F>) -> Ext<F> {
        let zz = Ext::from_complex(z);
        let mut acc = Ext::<F>::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&zz).add(c);
        }
        acc
    }

    /// Back to a normalized `f64` polynomial; tiny coefficients may flush to zero.
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        let top = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.e)
            .max()
            .ok_or(Error::ZeroPolynomial)?;
        let coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .map(|c| {
                let mut shifted = *c;
                if !shifted.is_zero() {
                    shifted.e -= top;
                }
                shifted.to_c64()
            })
            .collect();
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Range);
        }
        Ok(Polynomial::from_parts(coeffs, top as f64))
    }
}
