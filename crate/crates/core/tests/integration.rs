use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rootiso::complex::{annulus_family, isolate_complex_roots, ComplexConfig};
use rootiso::oracle::{all_roots_oracle, chebyshev1, chebyshev1_roots, generate_family};
use rootiso::real::{isolate_real_roots, IsolatorConfig};
use rootiso::{newton_polygon_radii, refined_radii, Polynomial};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_roots(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = 10f64.powf(rng.gen_range(-1.5..1.5));
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

#[test]
fn radii_guarantee_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(2..=12);
        let roots = random_roots(&mut rng, n);
        let p = Polynomial::from_roots(&roots);
        let mut truth: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
        truth.sort_by(|a, b| b.total_cmp(a));

        let hull = newton_polygon_radii(&p);
        for (e, t) in hull.radii.iter().zip(&truth) {
            let q = e / t;
            assert!(q <= 2.0 * n as f64 && q >= 0.5 / n as f64, "hull {e} vs {t}");
        }
        let est = refined_radii(&p, 1e-3).unwrap();
        for (e, t) in est.radii.iter().zip(&truth) {
            let q = e / t;
            // coefficient rounding moves clustered roots by about eps^(1/m)
            let slack = 1.0 + 1e-6;
            assert!(q <= est.rel_factor * slack && q * est.rel_factor * slack >= 1.0, "{e} vs {t}");
        }
    }
}

#[test]
fn worked_quintic_radii() {
    let p = Polynomial::from_real(&[4.0, 3.0, -30.0, -23.0, 16.0, 16.0, 16.0, 8.0]).unwrap();
    assert!(p.root_radius_upper_bound() <= 4.0 + 1e-12);
    let est = refined_radii(&p, 1e-3).unwrap();
    assert!(est.squarings_used <= 14);
    let oracle = all_roots_oracle(&p);
    for (e, t) in est.radii.iter().zip(oracle.radii()) {
        assert!((e / t - 1.0).abs() <= 1e-3 + 1e-9);
    }
}

#[test]
fn real_roots_match_oracle_on_families() {
    for t in 1..=3 {
        for seed in 0..4 {
            let p = generate_family(t, 48, 6, seed).unwrap();
            let iso = isolate_real_roots(&p, &IsolatorConfig::default()).unwrap();
            let oracle = all_roots_oracle(&p);
            assert!(oracle.converged);
            for r in &iso.roots {
                assert!(oracle.nearest(c(r.value, 0.0)) <= 1e-6, "type {t} seed {seed}: {}", r.value);
            }
            for x in chebyshev1_roots(6) {
                assert!(iso.roots.iter().any(|r| (r.value - x).abs() <= 1e-6), "type {t}: lost {x}");
            }
        }
    }
}

#[test]
fn multiple_roots_are_left_alone() {
    let cfg = IsolatorConfig::default();
    let triple_pair = Polynomial::from_real(&[1.0, 0.0, 3.0, 0.0, 3.0, 0.0, 1.0]).unwrap();
    let out = isolate_real_roots(&triple_pair, &cfg).unwrap();
    assert!(out.roots.is_empty() && out.suspects.is_empty());

    let double = Polynomial::from_real(&[1.0, -2.0, 1.0]).unwrap();
    let out = isolate_real_roots(&double, &cfg).unwrap();
    assert!(out.roots.is_empty());
}

#[test]
fn oracle_agrees_with_constructed_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(1..=20);
        let roots = random_roots(&mut rng, n);
        let p = Polynomial::from_roots(&roots);
        let s = all_roots_oracle(&p);
        assert!(s.converged);
        assert!(s.residuals.iter().all(|&r| r <= 1e-13), "{:?}", s.residuals);
        for z in &roots {
            assert!(s.nearest(*z) <= 1e-6 * z.norm().max(1.0));
        }
    }
}

#[test]
fn chebyshev_roots_are_roots() {
    for r in 1..=16 {
        let t = chebyshev1(r).unwrap();
        let xs = chebyshev1_roots(r);
        assert_eq!(xs.len(), r);
        for x in xs {
            assert!(t.evaluate(c(x, 0.0)).unwrap().norm() <= 1e-12 * 2f64.powi(r as i32));
        }
    }
}

#[test]
fn families_are_reproducible() {
    for t in 1..=3 {
        assert_eq!(generate_family(t, 40, 8, 9).unwrap(), generate_family(t, 40, 8, 9).unwrap());
    }
    assert_ne!(generate_family(1, 40, 8, 9).unwrap(), generate_family(1, 40, 8, 10).unwrap());
    assert!(generate_family(4, 40, 8, 0).is_err());
    assert!(generate_family(1, 8, 8, 0).is_err());
    assert!(generate_family(1, 8, 0, 0).is_err());
}

#[test]
fn text_round_trip() {
    let p = generate_family(2, 30, 4, 1).unwrap();
    let q = Polynomial::parse_text(&p.to_text()).unwrap();
    for (a, b) in p.unscaled_coeffs().iter().zip(q.unscaled_coeffs()) {
        assert_eq!(*a, b);
    }
}

#[test]
fn simple_annuli_hold_their_root() {
    let roots = [c(1.0, 0.5), c(-2.0, 1.0), c(0.3, -1.5), c(2.5, -0.5)];
    let p = Polynomial::from_roots(&roots);
    let center = c(7.0, 3.0);
    let fam = annulus_family(&p, center, 1e-6).unwrap();
    assert_eq!(fam.total_multiplicity(), 4);
    for a in fam.annuli.iter().filter(|a| a.multiplicity == 1) {
        assert!(roots.iter().any(|z| a.contains(*z)));
        assert!(a.outer - a.inner <= 2.1e-6 * a.outer);
    }
}

#[test]
fn complex_isolation_contains_roots_and_repeats() {
    let roots = [c(1.0, 1.0), c(1.0, -1.0), c(-1.5, 0.0), c(0.0, 2.0), c(0.5, -0.25)];
    let p = Polynomial::from_roots(&roots);
    let cfg = ComplexConfig::new(1e-3, 0.05);
    for seed in 0..20 {
        let a = isolate_complex_roots(&p, &cfg, seed).unwrap();
        let b = isolate_complex_roots(&p, &cfg, seed).unwrap();
        assert_eq!(a, b);
        for inc in &a.inclusions {
            assert!(inc.disc_radius > 0.0 && inc.disc_radius <= 1e-3 * 2f64.sqrt());
            let inside = roots.iter().filter(|z| (*z - inc.disc_center).norm() <= inc.disc_radius).count();
            assert_eq!(inside, inc.multiplicity, "seed {seed}");
        }
    }
}
