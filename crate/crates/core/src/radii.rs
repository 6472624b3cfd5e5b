//! Root-radii approximation: Newton polygon estimates sharpened by root squaring.
//!
//! The upper convex hull of the points `(i, log2 |p_i|)` yields radii within a
//! factor `2n` of the true root moduli. After `k` squaring steps the same
//! estimator applied to the transformed polynomial, followed by `2^k`-th
//! roots, is accurate within `(2n)^(1/2^k)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Real;
use crate::scaled::ScaledPoly;

/// Root-radii approximations, non-increasing, one per root.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiiEstimate {
    pub radii: Vec<f64>,
    /// Each estimate satisfies `1/rel_factor <= est/true <= rel_factor`.
    pub rel_factor: f64,
    pub squarings_used: u32,
}

impl RadiiEstimate {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// Guaranteed factor after `k` squarings of a degree-`n` polynomial.
pub fn rel_factor(n: usize, k: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    (((2 * n) as f64).ln() * 0.5f64.powi(k as i32)).exp()
}

/// Radii from the upper hull of `(i, log2 |c_i|)`, after `squarings` steps.
///
/// Exact-zero coefficients are skipped; zeros below the lowest nonzero
/// coefficient are roots at the origin and give radius 0.
pub fn hull_radii(log_mags: &[Option<f64>], squarings: u32) -> Vec<f64> {
    let n = log_mags.len().saturating_sub(1);
    let zero_roots = log_mags.iter().take_while(|l| l.is_none()).count().min(n);
    let pts: Vec<(f64, f64)> = log_mags
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.map(|v| (i as f64, v)))
        .collect();

    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let inv = 0.5f64.powi(squarings as i32);
    let mut radii = Vec::with_capacity(n);
    for w in hull.windows(2).rev() {
        let (a, b) = (w[0], w[1]);
        let slope = (b.1 - a.1) / (b.0 - a.0);
        let r = (-slope * inv).exp2();
        radii.extend(std::iter::repeat_n(r, (b.0 - a.0) as usize));
    }
    radii.extend(std::iter::repeat_n(0.0, zero_roots));
    radii
}

/// Newton polygon estimates with factor `2n`.
pub fn newton_polygon_radii(p: &Polynomial) -> RadiiEstimate {
    let n = p.degree();
    let logs: Vec<Option<f64>> = p
        .coeffs()
        .iter()
        .map(|c| (c.norm() > 0.0).then(|| c.norm().log2()))
        .collect();
    RadiiEstimate {
        radii: if n == 0 { vec![] } else { hull_radii(&logs, 0) },
        rel_factor: rel_factor(n, 0),
        squarings_used: 0,
    }
}

/// Smallest `k` with `(2n)^(1/2^k) <= 1 + target`.
pub fn choose_iteration_count(n: usize, target_rel_error: f64) -> u32 {
    let n = n.max(1);
    if target_rel_error >= (2 * n - 1) as f64 {
        return 0;
    }
    let have = ((2 * n) as f64).ln();
    let mut k = 0u32;
    // exp_m1 keeps (2n)^(1/2^k) - 1 accurate for tiny targets
    while k < 1100 && (have * 0.5f64.powi(k as i32)).exp_m1() > target_rel_error {
        k += 1;
    }
    k
}

/// Smallest relative error the working type can honestly deliver.
pub fn achievable_rel_error<F: Real>() -> f64 {
    2f64.powi(-(F::SIGNIFICAND_BITS as i32 - 8))
}

/// Radii after exactly `k` squarings of `p` (zero roots stripped first).
///
/// If the chain breaks down at step `i < k`, the estimate from step `i` is
/// returned with its own (larger) factor.
pub fn radii_after_squarings<F: Real>(p: &ScaledPoly<F>, k: u32) -> RadiiEstimate {
    let n = p.degree();
    if n == 0 {
        return RadiiEstimate {
            radii: vec![],
            rel_factor: 1.0,
            squarings_used: 0,
        };
    }
    let logs = p.log2_magnitudes();
    let zero_roots = logs.iter().take_while(|l| l.is_none()).count();
    let stripped: Vec<_> = p.coeffs()[zero_roots..].to_vec();
    let mut q = ScaledPoly::from_ext(stripped);
    let mut used = 0;
    if q.degree() > 0 {
        for _ in 0..k {
            match q.graeffe_step() {
                Ok(next) => {
                    q = next;
                    used += 1;
                }
                Err(_) => break,
            }
        }
    }
    let mut radii = hull_radii(&q.log2_magnitudes(), used);
    radii.extend(std::iter::repeat_n(0.0, zero_roots));
    RadiiEstimate {
        radii,
        rel_factor: rel_factor(n, used),
        squarings_used: used,
    }
}

/// Radii within relative error `target` in working type `F`.
pub fn refined_radii_in<F: Real>(p: &ScaledPoly<F>, target_rel_error: f64) -> Result<RadiiEstimate> {
    if !(target_rel_error > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target relative error must be positive, got {target_rel_error}"
        )));
    }
    let achievable = achievable_rel_error::<F>();
    if target_rel_error < achievable {
        return Err(Error::Tolerance {
            required: target_rel_error,
            achievable,
        });
    }
    let k = choose_iteration_count(p.degree(), target_rel_error);
    Ok(radii_after_squarings(p, k))
}

/// Radii of `p` within relative error `target` (double precision).
pub fn refined_radii(p: &Polynomial, target_rel_error: f64) -> Result<RadiiEstimate> {
    refined_radii_in(&ScaledPoly::<f64>::from_polynomial(p), target_rel_error)
}

/// Distances from `z` to every root in working type `F`.
pub fn distances_from_point_in<F: Real>(
    p: &Polynomial,
    z: Complex64,
    target_rel_error: f64,
) -> Result<RadiiEstimate> {
    let shifted = ScaledPoly::<F>::from_polynomial(p).taylor_shift(z);
    refined_radii_in(&shifted, target_rel_error)
}

/// Distances `|z - x_j|`, non-increasing, within relative error `target`.
pub fn distances_from_point(p: &Polynomial, z: Complex64, target_rel_error: f64) -> Result<RadiiEstimate> {
    distances_from_point_in::<f64>(p, z, target_rel_error)
}
