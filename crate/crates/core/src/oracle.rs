//! Reference roots and test polynomials.
//!
//! The all-roots solver here is Durand–Kerner (Weierstrass) iteration. It
//! shares nothing with the radii or isolation code, which is what makes it
//! usable as ground truth for them.

use std::f64::consts::PI;

use num_complex::{Complex, Complex64};
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

const MAX_SWEEPS: usize = 500;
const STOP_REL: f64 = 1e-12;
const POLISH_SWEEPS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// Backward error `|p(z)| / sum |p_i| |z|^i` per root.
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub sweeps: usize,
}

impl RootSet {
    /// Moduli in non-increasing order.
    pub fn radii(&self) -> Vec<f64> {
        let mut r: Vec<f64> = self.roots.iter().map(|z| z.norm()).collect();
        r.sort_by(|a, b| b.total_cmp(a));
        r
    }

    /// Roots with `|im| <= tol * max(1, |z|)`, as sorted reals.
    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        let mut r: Vec<f64> = self
            .roots
            .iter()
            .filter(|z| z.im.abs() <= tol * z.norm().max(1.0))
            .map(|z| z.re)
            .collect();
        r.sort_by(f64::total_cmp);
        r
    }

    /// Distance from `z` to the closest root.
    pub fn nearest(&self, z: Complex64) -> f64 {
        self.roots.iter().map(|r| (r - z).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// `w = p(z) / prod_{k != j} (z - z_k)` for monic `p` given low to high.
///
/// Outside the unit disc the reversed polynomial is used so neither the
/// value nor the product leaves the floating range.
fn weierstrass<T: Float>(c: &[Complex<T>], zs: &[Complex<T>], j: usize) -> Complex<T> {
    let z = zs[j];
    let n = c.len() - 1;
    let one = Complex::new(T::one(), T::zero());
    if z.norm_sqr() <= T::one() {
        let mut v = Complex::new(T::zero(), T::zero());
        for &a in c.iter().rev() {
            v = v * z + a;
        }
        for (k, &zk) in zs.iter().enumerate() {
            if k != j {
                v = v / (z - zk);
            }
        }
        v
    } else {
        let u = one / z;
        let mut v = Complex::new(T::zero(), T::zero());
        for &a in c.iter() {
            v = v * u + a;
        }
        // p(z) = z^n rev(1/z), so w = z * rev(1/z) * prod z / (z - z_k)
        for (k, &zk) in zs.iter().enumerate() {
            if k != j {
                v = v * z / (z - zk);
            }
        }
        debug_assert!(n >= 1);
        v * z
    }
}

/// Gauss–Seidel Durand–Kerner sweeps; returns the sweep count and convergence.
fn sweeps<T: Float>(c: &[Complex<T>], zs: &mut [Complex<T>], max: usize, stop: f64) -> (usize, bool) {
    let stop = T::from(stop).unwrap();
    for s in 1..=max {
        let mut worst = T::zero();
        for j in 0..zs.len() {
            let w = weierstrass(c, zs, j);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            zs[j] = zs[j] - w;
            let scale = zs[j].norm().max(T::one());
            worst = worst.max(w.norm() / scale);
        }
        if worst < stop {
            return (s, true);
        }
    }
    (max, false)
}

fn backward_error(p: &[Complex64], z: Complex64) -> f64 {
    let mut v = Complex64::new(0.0, 0.0);
    let mut a = 0.0;
    for &c in p.iter().rev() {
        v = v * z + c;
        a = a * z.norm() + c.norm();
    }
    if a == 0.0 {
        0.0
    } else {
        v.norm() / a
    }
}

/// All roots of `p` by Durand–Kerner, in `f64` and then double-double.
pub fn all_roots_oracle(p: &Polynomial) -> RootSet {
    let zeros = p.zero_root_count();
    let coeffs = &p.coeffs()[zeros..];
    let m = coeffs.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if m == 0 {
        return RootSet {
            residuals: vec![0.0; roots.len()],
            roots,
            converged: true,
            sweeps: 0,
        };
    }
    let lead = coeffs[m];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();

    let radius = monic[0].norm().powf(1.0 / m as f64);
    let mut zs: Vec<Complex64> = (0..m)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / m as f64 + 0.4;
            Complex64::from_polar(radius * (1.0 + 0.05 * (j % 3) as f64), t)
        })
        .collect();
    let (count, ok) = sweeps(&monic, &mut zs, MAX_SWEEPS, STOP_REL);

    let tf = |x: f64| TwoFloat::from(x);
    let monic_tf: Vec<Complex<TwoFloat>> = coeffs
        .iter()
        .map(|c| {
            let (a, b) = (Complex::new(tf(c.re), tf(c.im)), Complex::new(tf(lead.re), tf(lead.im)));
            a / b
        })
        .collect();
    let mut zt: Vec<Complex<TwoFloat>> = zs.iter().map(|z| Complex::new(tf(z.re), tf(z.im))).collect();
    if ok {
        sweeps(&monic_tf, &mut zt, POLISH_SWEEPS, 1e-28);
    }
    roots.extend(zt.iter().map(|z| Complex64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())));
    let residuals = roots.iter().map(|&z| backward_error(p.coeffs(), z)).collect();
    RootSet {
        roots,
        residuals,
        converged: ok,
        sweeps: count,
    }
}

/// Chebyshev polynomial of the first kind `T_r`.
pub fn chebyshev1(r: usize) -> Result<Polynomial> {
    if r == 0 {
        return Err(Error::InvalidArgument("Chebyshev degree must be at least 1".into()));
    }
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 1.0];
    for _ in 1..r {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    Polynomial::from_real(&cur)
}

/// Roots `cos((2j - 1) pi / (2r))`, ascending.
pub fn chebyshev1_roots(r: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=r)
        .map(|j| ((2 * j - 1) as f64 * PI / (2 * r) as f64).cos())
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Standard normal pairs by Box–Muller.
struct Gaussian {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Gaussian {
    fn new(seed: u64) -> Self {
        Gaussian {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn sample(&mut self) -> f64 {
        if let Some(x) = self.spare.take() {
            return x;
        }
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// Test family `family_type` of degree `n`: `T_r` times a degree `n - r` factor.
///
/// * 1: real standard Gaussian coefficients
/// * 2: complex coefficients with independent standard Gaussian parts
/// * 3: coefficient `i + 1` on `x^i`
pub fn generate_family(family_type: u8, n: usize, r: usize, seed: u64) -> Result<Polynomial> {
    if r == 0 || r >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= r < n, got n={n} r={r}")));
    }
    let m = n - r;
    let factor: Vec<Complex64> = match family_type {
        1 => {
            let mut g = Gaussian::new(seed);
            (0..=m).map(|_| Complex64::new(g.sample(), 0.0)).collect()
        }
        2 => {
            let mut g = Gaussian::new(seed);
            (0..=m).map(|_| Complex64::new(g.sample(), g.sample())).collect()
        }
        3 => (0..=m).map(|i| Complex64::new((i + 1) as f64, 0.0)).collect(),
        t => return Err(Error::InvalidArgument(format!("unknown family type {t}"))),
    };
    Ok(chebyshev1(r)?.mul(&Polynomial::new(factor)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_pair() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let s = all_roots_oracle(&p);
        assert!(s.converged);
        assert_eq!(s.real_roots(1e-12).len(), 2);
        assert!(s.nearest(Complex64::new(1.0, 0.0)) < 1e-14);
        assert!(s.nearest(Complex64::new(-1.0, 0.0)) < 1e-14);
    }

    #[test]
    fn worked_septic_roots() {
        let p = Polynomial::from_real(&[4.0, 3.0, -30.0, -23.0, 16.0, 16.0, 16.0, 8.0]).unwrap();
        let s = all_roots_oracle(&p);
        assert!(s.converged);
        for z in [
            Complex64::new(-0.1747, 1.5469),
            Complex64::new(-0.1747, -1.5469),
            Complex64::new(-1.6506, 0.0),
            Complex64::new(0.3827, 0.0),
        ] {
            assert!(s.nearest(z) < 1e-4, "{z}");
        }
        assert!(s.residuals.iter().all(|&r| r < 1e-14));
    }

    #[test]
    fn recovers_constructed_roots() {
        let want: Vec<Complex64> = (0..10)
            .map(|j| Complex64::from_polar(0.5 + 0.2 * j as f64, 0.7 * j as f64))
            .collect();
        let s = all_roots_oracle(&Polynomial::from_roots(&want));
        assert!(s.converged);
        for z in &want {
            assert!(s.nearest(*z) < 1e-8, "{z}");
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let p = Polynomial::from_real(&[0.0, 0.0, -1.0, 1.0]).unwrap();
        let s = all_roots_oracle(&p);
        assert_eq!(s.roots.iter().filter(|z| z.norm() == 0.0).count(), 2);
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev1(1).unwrap().coeffs(), Polynomial::from_real(&[0.0, 1.0]).unwrap().coeffs());
        let t4 = chebyshev1(4).unwrap();
        let want = Polynomial::from_real(&[1.0, 0.0, -8.0, 0.0, 8.0]).unwrap();
        assert_eq!(t4.coeffs(), want.coeffs());
        let r = chebyshev1_roots(4);
        assert!((r[0] + 0.92387953).abs() < 1e-8 && (r[2] - 0.38268343).abs() < 1e-8);
    }

    #[test]
    fn chebyshev_twelve_roots() {
        let s = all_roots_oracle(&chebyshev1(12).unwrap());
        let got = s.real_roots(1e-9);
        assert_eq!(got.len(), 12);
        for (g, w) in got.iter().zip(chebyshev1_roots(12)) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn families() {
        let p = generate_family(3, 6, 4, 0).unwrap();
        let t4 = chebyshev1(4).unwrap();
        let f = Polynomial::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.coeffs(), t4.mul(&f).coeffs());
        for t in 1..=3 {
            let a = generate_family(t, 20, 4, 9).unwrap();
            let b = generate_family(t, 20, 4, 9).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.degree(), 20);
        }
        assert!(generate_family(2, 20, 4, 9).unwrap().coeffs().iter().any(|c| c.im != 0.0));
        assert!(generate_family(1, 4, 4, 0).is_err());
        assert!(generate_family(4, 8, 4, 0).is_err());
    }
}
