//! Complex-root isolation by intersecting annuli around three far centers.
//!
//! Seen from a center at distance `R = eta * r1+` from the origin, the
//! annulus holding a root is, inside the disc `D(0, r1+)`, a thin band
//! almost orthogonal to the direction of the center. Bands from a real and
//! an imaginary center cross in small cells (grid nodes); a third center at
//! a random angle tells the cells holding roots from the empty crossings.

use std::f64::consts::{FRAC_PI_8, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::radii::distances_from_point_in;

/// Constant of the separation bound: `16 sqrt 2`, rounded up.
pub const SEPARATION_CONSTANT: f64 = 22.63;

pub const DEFAULT_ETA: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Annulus {
    pub center: Complex64,
    pub inner: f64,
    pub outer: f64,
    pub multiplicity: usize,
}

impl Annulus {
    pub fn mid(&self) -> f64 {
        0.5 * (self.inner + self.outer)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.outer - self.inner)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let d = (z - self.center).norm();
        d >= self.inner && d <= self.outer
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnulusFamily {
    pub shift_center: Complex64,
    /// Sorted by radius; overlapping annuli merged, multiplicities add.
    pub annuli: Vec<Annulus>,
    /// Relative accuracy the distance estimates were computed to.
    pub rel_tolerance: f64,
}

impl AnnulusFamily {
    pub fn total_multiplicity(&self) -> usize {
        self.annuli.iter().map(|a| a.multiplicity).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridNode {
    pub center: Complex64,
    /// Half side of an axis-aligned square holding the cell.
    pub half_width: f64,
    pub multiplicity: usize,
    pub confirmed: bool,
    /// Indices of the generating annuli in the first and second family.
    pub bands: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexInclusion {
    pub disc_center: Complex64,
    pub disc_radius: f64,
    pub multiplicity: usize,
    pub failure_prob_bound: f64,
    /// Newton iterate from the center when polishing was requested and it
    /// stayed inside the disc; not a certified root.
    pub polished: Option<Complex64>,
}

/// Third-family annulus that did not single out one node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Unresolved {
    pub annulus: Annulus,
    /// Indices into the node list.
    pub nodes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexConfig {
    pub rho: f64,
    pub eps: f64,
    pub eta: f64,
    pub polish: bool,
}

impl ComplexConfig {
    pub fn new(rho: f64, eps: f64) -> Self {
        ComplexConfig {
            rho,
            eps,
            eta: DEFAULT_ETA,
            polish: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidArgument(format!("rho must lie in (0, 1), got {}", self.rho)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if !(self.eta >= 2.0 && self.eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("eta must be at least 2, got {}", self.eta)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexIsolation {
    pub inclusions: Vec<ComplexInclusion>,
    pub unresolved: Vec<Unresolved>,
    pub nodes: Vec<GridNode>,
    pub phi: f64,
    pub r1_plus: f64,
    /// Node separation that suffices for confirmation with probability `1 - eps`.
    pub separation: f64,
    /// The same bound with the node count replaced by `n^4`.
    pub output_separation: f64,
}

/// Merge chains of overlapping annuli; multiplicities add.
fn merge_annuli(mut v: Vec<Annulus>) -> Vec<Annulus> {
    v.sort_by(|a, b| a.inner.total_cmp(&b.inner));
    let mut out: Vec<Annulus> = Vec::with_capacity(v.len());
    for a in v {
        match out.last_mut() {
            Some(last) if a.inner <= last.outer => {
                last.outer = last.outer.max(a.outer);
                last.multiplicity += a.multiplicity;
            }
            _ => out.push(a),
        }
    }
    out
}

/// Annuli of estimated distances from `center` to all roots of `p`.
pub fn annulus_family(p: &Polynomial, center: Complex64, rel_tolerance: f64) -> Result<AnnulusFamily> {
    let est = distances_from_point_in::<TwoFloat>(p, center, rel_tolerance)?;
    let f = est.rel_factor;
    let annuli = est
        .radii
        .iter()
        .map(|&d| Annulus {
            center,
            inner: d / f,
            outer: d * f,
            multiplicity: 1,
        })
        .collect();
    Ok(AnnulusFamily {
        shift_center: center,
        annuli: merge_annuli(annuli),
        rel_tolerance,
    })
}

/// Relative tolerance for the distance estimates: `rho / ((r1+ + 1) eta)`.
pub fn family_tolerance(r1_plus: f64, rho: f64, eta: f64) -> f64 {
    rho / ((r1_plus + 1.0) * eta)
}

/// Families around `-R`, `-R i` and `-R e^{i phi}` with `R = eta r1+`.
pub fn shifted_families(p: &Polynomial, rho: f64, eta: f64, phi: f64) -> Result<[AnnulusFamily; 3]> {
    let r1 = p.root_radius_upper_bound();
    let big = eta * r1;
    let tol = family_tolerance(r1, rho, eta);
    let centers = [
        Complex64::new(-big, 0.0),
        Complex64::new(0.0, -big),
        -Complex64::from_polar(big, phi),
    ];
    let (a, (b, c)) = rayon::join(
        || annulus_family(p, centers[0], tol),
        || {
            rayon::join(
                || annulus_family(p, centers[1], tol),
                || annulus_family(p, centers[2], tol),
            )
        },
    );
    Ok([a?, b?, c?])
}

/// Intersection of the circles `|z - c1| = d1`, `|z - c2| = d2` closest to the origin.
fn circle_crossing(c1: Complex64, d1: f64, c2: Complex64, d2: f64) -> Option<Complex64> {
    let base = c2 - c1;
    let l = base.norm();
    if l == 0.0 || d1 + d2 < l || (d1 - d2).abs() > l {
        return None;
    }
    let a = (d1 * d1 - d2 * d2 + l * l) / (2.0 * l);
    let h = (d1 * d1 - a * a).max(0.0).sqrt();
    let u = base / l;
    let foot = c1 + u * a;
    let perp = Complex64::new(-u.im, u.re);
    let (z1, z2) = (foot + perp * h, foot - perp * h);
    Some(if z1.norm() <= z2.norm() { z1 } else { z2 })
}

/// Half side of the square around `z` that holds the crossing of two bands.
///
/// Band `k` is `|n_k . (y - z)| <= w_k`, `n_k` the unit normal at `z`; the
/// crossing is a parallelogram whose corners are checked directly. Circle
/// curvature adds at most `(extent)^2 / (2 d)` per band.
fn cell_half_width(z: Complex64, a1: &Annulus, a2: &Annulus) -> f64 {
    let n1 = (z - a1.center) / (z - a1.center).norm();
    let n2 = (z - a2.center) / (z - a2.center).norm();
    let det = n1.re * n2.im - n1.im * n2.re;
    if det.abs() < 1e-12 {
        return f64::INFINITY;
    }
    let (w1, w2) = (a1.half_width(), a2.half_width());
    let mut h: f64 = 0.0;
    for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let (b1, b2) = (s1 * w1, s2 * w2);
        let dx = (b1 * n2.im - b2 * n1.im) / det;
        let dy = (n1.re * b2 - n2.re * b1) / det;
        h = h.max(dx.abs()).max(dy.abs());
    }
    let bend = (2.0 * h * h) / a1.inner.min(a2.inner).max(f64::MIN_POSITIVE);
    h + bend
}

/// Grid cells where bands of the first two families cross inside `D(0, r1+)`.
pub fn grid_from_two_families(f1: &AnnulusFamily, f2: &AnnulusFamily, r1_plus: f64) -> Vec<GridNode> {
    let mut nodes = Vec::new();
    for (i1, a1) in f1.annuli.iter().enumerate() {
        for (i2, a2) in f2.annuli.iter().enumerate() {
            let Some(z) = circle_crossing(a1.center, a1.mid(), a2.center, a2.mid()) else {
                continue;
            };
            let hw = cell_half_width(z, a1, a2);
            if z.norm() > r1_plus + hw * SQRT_2 {
                continue;
            }
            nodes.push(GridNode {
                center: z,
                half_width: hw,
                multiplicity: a1.multiplicity.min(a2.multiplicity),
                confirmed: false,
                bands: (i1, i2),
            });
        }
    }
    nodes
}

/// Node indices whose cell can meet the annulus `a`.
pub fn nodes_hit(nodes: &[GridNode], a: &Annulus) -> Vec<usize> {
    nodes
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            let d = (g.center - a.center).norm();
            let slack = g.half_width * SQRT_2;
            d >= a.inner - slack && d <= a.outer + slack
        })
        .map(|(i, _)| i)
        .collect()
}

/// Confirm nodes singled out by one third-family annulus; report the rest.
///
/// A band of the first two families holds exactly as many roots as its
/// multiplicity. Once confirmed nodes account for all of them, the other
/// nodes on that band are empty and stop competing for third-family hits.
pub fn disambiguate_with_third(
    nodes: &mut [GridNode],
    f3: &AnnulusFamily,
    eps: f64,
    band_mult: (&[usize], &[usize]),
) -> (Vec<ComplexInclusion>, Vec<Unresolved>) {
    let mut empty = vec![false; nodes.len()];
    let mut owner: Vec<Option<usize>> = vec![None; f3.annuli.len()];
    loop {
        let mut changed = false;
        for (k, a) in f3.annuli.iter().enumerate() {
            if owner[k].is_some() {
                continue;
            }
            let hit: Vec<usize> = nodes_hit(nodes, a).into_iter().filter(|&i| !empty[i]).collect();
            if let [i] = hit[..] {
                owner[k] = Some(i);
                nodes[i].confirmed = true;
                changed = true;
            }
        }
        // roots known to sit in confirmed nodes, per band
        let mut held = vec![0usize; nodes.len()];
        for (k, o) in owner.iter().enumerate() {
            if let Some(i) = *o {
                held[i] += f3.annuli[k].multiplicity;
            }
        }
        let mut full1 = vec![0usize; band_mult.0.len()];
        let mut full2 = vec![0usize; band_mult.1.len()];
        for (g, h) in nodes.iter().zip(&held) {
            full1[g.bands.0] += h;
            full2[g.bands.1] += h;
        }
        for (i, g) in nodes.iter().enumerate() {
            let done = full1[g.bands.0] >= band_mult.0[g.bands.0] || full2[g.bands.1] >= band_mult.1[g.bands.1];
            if !g.confirmed && !empty[i] && done {
                empty[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let unresolved = f3
        .annuli
        .iter()
        .zip(&owner)
        .filter(|(_, o)| o.is_none())
        .map(|(a, _)| Unresolved {
            annulus: *a,
            nodes: nodes_hit(nodes, a).into_iter().filter(|&i| !empty[i]).collect(),
        })
        .collect();
    let inclusions = nodes
        .iter()
        .filter(|g| g.confirmed)
        .map(|g| ComplexInclusion {
            disc_center: g.center,
            disc_radius: g.half_width * SQRT_2,
            multiplicity: g.multiplicity,
            failure_prob_bound: eps,
            polished: None,
        })
        .collect();
    (inclusions, unresolved)
}

/// Separation `22.63 (N - 1) rho / eps` for a grid of `N` nodes.
pub fn theoretical_separation(n_nodes: usize, rho: f64, eps: f64) -> f64 {
    SEPARATION_CONSTANT * n_nodes.saturating_sub(1) as f64 * rho / eps
}

/// `(22.63 n^4 + 2 eps) rho / eps` for degree `n`.
pub fn output_separation(n: usize, rho: f64, eps: f64) -> f64 {
    (SEPARATION_CONSTANT * (n as f64).powi(4) + 2.0 * eps) * rho / eps
}

/// Bound `(2 / gamma) arctan(rho' / dist)` on the chance that a random line
/// through a disc of radius `rho'` meets another such disc `dist` away.
///
/// `gamma` is the width of the angle range as a fraction of a full turn.
pub fn line_disc_intersection_prob(gamma: f64, rho_prime: f64, dist: f64) -> f64 {
    (2.0 / gamma) * (rho_prime / dist).atan()
}

/// Angle range of the third center.
pub const PHI_RANGE: (f64, f64) = (FRAC_PI_8, 3.0 * FRAC_PI_8);

pub fn draw_phi(seed: u64) -> f64 {
    ChaCha8Rng::seed_from_u64(seed).gen_range(PHI_RANGE.0..=PHI_RANGE.1)
}

fn polish(p: &Polynomial, dp: &Polynomial, inc: &ComplexInclusion) -> Option<Complex64> {
    let mut z = inc.disc_center;
    for _ in 0..8 {
        let v = p.evaluate_ext(z);
        let d = dp.evaluate_ext(z);
        if d.is_zero() {
            return None;
        }
        let step = v.ratio(&d);
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    ((z - inc.disc_center).norm() <= inc.disc_radius).then_some(z)
}

/// All four stages with the angle drawn from `seed`.
pub fn isolate_complex_roots(p: &Polynomial, cfg: &ComplexConfig, seed: u64) -> Result<ComplexIsolation> {
    cfg.validate()?;
    let phi = draw_phi(seed);
    let n = p.degree();
    let r1 = p.root_radius_upper_bound();
    if n == 0 || r1 == 0.0 {
        // no roots, or every root at the origin
        let inclusions = if n == 0 {
            vec![]
        } else {
            vec![ComplexInclusion {
                disc_center: Complex64::new(0.0, 0.0),
                disc_radius: 0.0,
                multiplicity: n,
                failure_prob_bound: cfg.eps,
                polished: None,
            }]
        };
        return Ok(ComplexIsolation {
            inclusions,
            unresolved: vec![],
            nodes: vec![],
            phi,
            r1_plus: r1,
            separation: 0.0,
            output_separation: output_separation(n, cfg.rho, cfg.eps),
        });
    }

    let [f1, f2, f3] = shifted_families(p, cfg.rho, cfg.eta, phi)?;
    let mut nodes = grid_from_two_families(&f1, &f2, r1);
    let m1: Vec<usize> = f1.annuli.iter().map(|a| a.multiplicity).collect();
    let m2: Vec<usize> = f2.annuli.iter().map(|a| a.multiplicity).collect();
    let (mut inclusions, unresolved) = disambiguate_with_third(&mut nodes, &f3, cfg.eps, (&m1, &m2));
    if cfg.polish {
        let dp = p.derivative();
        for inc in inclusions.iter_mut().filter(|i| i.multiplicity == 1) {
            inc.polished = polish(p, &dp, inc);
        }
    }
    Ok(ComplexIsolation {
        inclusions,
        unresolved,
        separation: theoretical_separation(nodes.len(), cfg.rho, cfg.eps),
        output_separation: output_separation(n, cfg.rho, cfg.eps),
        nodes,
        phi,
        r1_plus: r1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn near(incs: &[ComplexInclusion], z: Complex64) -> Option<&ComplexInclusion> {
        incs.iter().find(|i| (i.disc_center - z).norm() <= i.disc_radius.max(1e-12))
    }

    #[test]
    fn unit_pair_families() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let [f1, f2, _] = shifted_families(&p, 1e-3, 100.0, 0.5).unwrap();
        let big = 100.0 * p.root_radius_upper_bound();
        assert_eq!(f1.annuli.len(), 2);
        for (a, want) in f1.annuli.iter().zip([big - 1.0, big + 1.0]) {
            assert!(a.inner <= want && want <= a.outer, "{a:?} vs {want}");
            assert!(a.outer / a.inner - 1.0 <= 2.0 * f1.rel_tolerance);
        }
        // both roots are equally far from -R i
        assert_eq!(f2.annuli.len(), 1);
        assert_eq!(f2.annuli[0].multiplicity, 2);
    }

    #[test]
    fn single_root() {
        let p = Polynomial::from_real(&[-0.25, 1.0]).unwrap();
        let out = isolate_complex_roots(&p, &ComplexConfig::new(1e-3, 0.05), 1).unwrap();
        assert_eq!(out.nodes.len(), 1);
        assert_eq!(out.inclusions.len(), 1);
        assert!((out.inclusions[0].disc_center - c(0.25, 0.0)).norm() <= 1e-3 * SQRT_2);
    }

    #[test]
    fn double_root_gives_one_node() {
        let p = Polynomial::from_roots(&[c(1.0, 0.0), c(1.0, 0.0)]);
        let out = isolate_complex_roots(&p, &ComplexConfig::new(1e-3, 0.05), 3).unwrap();
        assert_eq!(out.inclusions.len(), 1);
        assert_eq!(out.inclusions[0].multiplicity, 2);
        assert!((out.inclusions[0].disc_center - c(1.0, 0.0)).norm() <= 1e-3 * SQRT_2);
    }

    #[test]
    fn roots_of_unity() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let out = isolate_complex_roots(&p, &ComplexConfig::new(1e-3, 0.05), 7).unwrap();
        assert_eq!(out.nodes.len(), 9);
        assert_eq!(out.inclusions.len(), 4, "{:?}", out.inclusions);
        for z in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
            assert!(near(&out.inclusions, z).is_some(), "{z}");
        }
        for i in &out.inclusions {
            assert!(i.disc_radius <= 1e-3 * SQRT_2);
        }
    }

    #[test]
    fn polishing_stays_inside() {
        let p = Polynomial::from_roots(&[c(0.5, 0.5), c(-0.3, 0.0), c(0.1, -0.8)]);
        let mut cfg = ComplexConfig::new(1e-3, 0.05);
        cfg.polish = true;
        let out = isolate_complex_roots(&p, &cfg, 11).unwrap();
        assert_eq!(out.inclusions.len(), 3);
        for i in &out.inclusions {
            let z = i.polished.unwrap();
            assert!(p.evaluate(z).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn separation_formulas() {
        assert_eq!(theoretical_separation(1, 1e-3, 0.05), 0.0);
        assert!((theoretical_separation(2, 1e-3, 0.05) - 0.4526).abs() < 1e-12);
        let p = line_disc_intersection_prob(0.125, 1e-3 * SQRT_2, 1.0);
        assert!(p < 22.6275 * 1e-3 / 1.0 + 1e-12);
        assert!(line_disc_intersection_prob(0.125, 1e-9, 1.0) < 1e-7);
    }

    #[test]
    fn same_seed_same_output() {
        let p = Polynomial::from_real(&[4.0, 3.0, -30.0, -23.0, 16.0, 16.0, 16.0, 8.0]).unwrap();
        let cfg = ComplexConfig::new(1e-3, 0.05);
        let a = isolate_complex_roots(&p, &cfg, 42).unwrap();
        let b = isolate_complex_roots(&p, &cfg, 42).unwrap();
        assert_eq!(a, b);
        assert!(PHI_RANGE.0 <= a.phi && a.phi <= PHI_RANGE.1);
    }
}
