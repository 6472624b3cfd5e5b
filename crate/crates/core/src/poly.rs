//! Dense polynomials over complex `f64` with a power-of-two scale factor.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{frexp_exponent, Ext};
use crate::scaled::ScaledPoly;

/// Evaluation points and shift centers.
pub type ComplexPoint = Complex64;

/// `2^scale_log2 * sum(coeffs[i] * x^i)`, coefficients in ascending degree.
///
/// The leading coefficient is nonzero except for the zero polynomial, which
/// only arises as the derivative of a constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
    scale_log2: f64,
}

impl Polynomial {
    /// Builds a polynomial, dropping zero high-order coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Polynomial {
            coeffs,
            scale_log2: 0.0,
        })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots (repeated roots allowed).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        Polynomial {
            coeffs: c,
            scale_log2: 0.0,
        }
    }

    pub fn zero() -> Self {
        Polynomial {
            coeffs: vec![Complex64::new(0.0, 0.0)],
            scale_log2: 0.0,
        }
    }

    pub(crate) fn from_parts(coeffs: Vec<Complex64>, scale_log2: f64) -> Self {
        Polynomial { coeffs, scale_log2 }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scale_log2(&self) -> f64 {
        self.scale_log2
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// Coefficients with the scale factor applied.
    pub fn unscaled_coeffs(&self) -> Vec<Complex64> {
        let s = 2f64.powf(self.scale_log2);
        self.coeffs.iter().map(|c| c * s).collect()
    }

    /// Number of roots at the origin (zero low-order coefficients).
    pub fn zero_root_count(&self) -> usize {
        self.coeffs
            .iter()
            .take_while(|c| **c == Complex64::new(0.0, 0.0))
            .count()
    }

    /// `2^scale_log2 * p(z)` by Horner's rule.
    pub fn evaluate(&self, z: ComplexPoint) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        let v = acc * 2f64.powf(self.scale_log2);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Range)
        }
    }

    /// Horner's rule with an unbounded exponent; never overflows.
    pub fn evaluate_ext(&self, z: ComplexPoint) -> Ext<f64> {
        let zz = Ext::<f64>::from_c64(z);
        let mut acc = Ext::<f64>::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&zz).add(&Ext::from_c64(c));
        }
        let s = self.scale_log2.floor();
        let frac = 2f64.powf(self.scale_log2 - s);
        let mut v = acc.scale(frac);
        if !v.is_zero() {
            v.e += s as i64;
        }
        v
    }

    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        Polynomial {
            coeffs,
            scale_log2: self.scale_log2,
        }
    }

    /// `q(x) = p(x + z)` by repeated synthetic division.
    pub fn taylor_shift(&self, z: ComplexPoint) -> Result<Polynomial> {
        let mut a = self.coeffs.clone();
        let n = self.degree();
        for i in 0..n {
            for j in (i..n).rev() {
                let hi = a[j + 1];
                a[j] += z * hi;
            }
        }
        if a.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Ok(Polynomial {
                coeffs: a,
                scale_log2: self.scale_log2,
            });
        }
        // renormalized retry with unbounded exponents
        ScaledPoly::<f64>::from_polynomial(self)
            .taylor_shift(z)
            .to_polynomial()
    }

    /// `x^n p(1/x)`; roots map to their reciprocals.
    pub fn reverse(&self) -> Result<Polynomial> {
        if self.coeffs[0] == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroConstantTerm);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Ok(Polynomial {
            coeffs,
            scale_log2: self.scale_log2,
        })
    }

    /// `p(-x)`; roots map to their negatives.
    pub fn negate_arg(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
            .collect();
        Polynomial {
            coeffs,
            scale_log2: self.scale_log2,
        }
    }

    /// One root-squaring step: the result has roots `x_j^2`.
    ///
    /// Coefficients far below the largest one flush to zero in `f64`; use
    /// [`ScaledPoly`] for long squaring chains.
    pub fn graeffe_step(&self) -> Result<Polynomial> {
        let q = ScaledPoly::<f64>::from_polynomial(self).graeffe_step()?;
        q.to_polynomial()
    }

    /// Rescale so the largest coefficient magnitude lies in `[1/2, 2]`.
    pub fn normalize(&self) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let norm = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if (0.5..=2.0).contains(&norm) {
            return Ok(self.clone());
        }
        // largest magnitude lands in [1, 2)
        let shift = frexp_exponent(norm) - 1;
        let f = 2f64.powi(-shift as i32);
        Ok(Polynomial {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
            scale_log2: self.scale_log2 + shift as f64,
        })
    }

    /// Upper bound `2 max_i |p_{n-i}/p_n|^{1/i}` on the largest root modulus.
    ///
    /// The largest root modulus is at least `bound / (2n)`.
    pub fn root_radius_upper_bound(&self) -> f64 {
        let n = self.degree();
        let lead = self.leading().norm();
        (1..=n)
            .map(|i| (self.coeffs[n - i].norm() / lead).powf(1.0 / i as f64))
            .fold(0.0, f64::max)
            * 2.0
    }

    /// Product by direct convolution; scales add.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut c = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial {
            coeffs: c,
            scale_log2: self.scale_log2 + other.scale_log2,
        }
    }

    /// Parses the coefficient text format: one coefficient per line in
    /// ascending degree, either `re` or `re im`; `#` lines and blanks skipped.
    pub fn parse_text(text: &str) -> Result<Polynomial> {
        let mut coeffs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad number {s:?}: {e}"),
                })
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let c = match fields.as_slice() {
                [re] => Complex64::new(parse(re)?, 0.0),
                [re, im] => Complex64::new(parse(re)?, parse(im)?),
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: "expected one or two numbers".into(),
                    })
                }
            };
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "non-finite coefficient".into(),
                });
            }
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "no coefficients".into(),
            });
        }
        Polynomial::new(coeffs).map_err(|_| Error::Parse {
            line: 0,
            msg: "all coefficients are zero".into(),
        })
    }

    /// Inverse of [`Polynomial::parse_text`]; shortest round-trip formatting.
    pub fn to_text(&self) -> String {
        let mut out = format!("# degree {}\n", self.degree());
        for c in self.unscaled_coeffs() {
            if c.im == 0.0 {
                writeln!(out, "{:e}", c.re).unwrap();
            } else {
                writeln!(out, "{:e} {:e}", c.re, c.im).unwrap();
            }
        }
        out
    }
}
