//! Benchmark grid: Chebyshev products against the all-roots oracle.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{all_roots_oracle, chebyshev1_roots, generate_family};
use crate::poly::Polynomial;
use crate::radii::radii_after_squarings;
use crate::real::{isolate_real_roots, isolate_with_radii, IsolatorConfig};
use crate::scaled::ScaledPoly;
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub r: usize,
    pub family_type: u8,
    /// Squarings used by the first isolation pass.
    pub squaring_iters: u32,
    /// Largest distance from a found root to the nearest oracle root.
    pub max_error: f64,
    /// Smallest squaring count that already yields the same roots, if requested.
    pub min_iters: Option<u32>,
    pub found: usize,
    /// Chebyshev roots matched by a found root within `1e-6`.
    pub chebyshev_found: usize,
    pub suspects: usize,
    pub oracle_converged: bool,
    pub seconds: f64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub sizes: Vec<usize>,
    pub rs: Vec<usize>,
    pub types: Vec<u8>,
    pub seed: u64,
    pub jobs: usize,
    pub min_iters: bool,
    pub config: IsolatorConfig,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            sizes: vec![64, 128, 256, 512, 1024],
            rs: vec![4, 8, 12],
            types: vec![1, 2, 3],
            seed: 0,
            jobs: 0,
            min_iters: false,
            config: IsolatorConfig::default(),
        }
    }
}

/// Reference iteration count and error for a given `r`, shown alongside results.
pub fn published_reference(r: usize) -> Option<(u32, f64)> {
    match r {
        4 => Some((4, 6.42e-11)),
        8 => Some((6, 3.16e-5)),
        12 => Some((7, 4.36e-3)),
        _ => None,
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one grid cell, independent of scheduling.
pub fn cell_seed(seed: u64, n: usize, r: usize, family_type: u8) -> u64 {
    mix(mix(mix(seed ^ n as u64) ^ r as u64) ^ family_type as u64)
}

fn same_roots(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-6 * x.abs().max(1.0))
}

/// Smallest `k <= k_max` whose single pass finds the roots in `reference`.
pub fn empirical_iterations(p: &Polynomial, cfg: &IsolatorConfig, reference: &[f64], k_max: u32) -> Option<u32> {
    let sp = ScaledPoly::<f64>::from_polynomial(p);
    (0..=k_max).find(|&k| {
        let radii = radii_after_squarings(&sp, k);
        isolate_with_radii(p, cfg, &radii).is_ok_and(|iso| {
            let got: Vec<f64> = iso.roots.iter().map(|r| r.value).collect();
            same_roots(&got, reference)
        })
    })
}

pub fn run_cell(n: usize, r: usize, family_type: u8, seed: u64, cfg: &IsolatorConfig, min_iters: bool) -> BenchRow {
    let start = std::time::Instant::now();
    let mut row = BenchRow {
        n,
        r,
        family_type,
        squaring_iters: 0,
        max_error: f64::NAN,
        min_iters: None,
        found: 0,
        chebyshev_found: 0,
        suspects: 0,
        oracle_converged: false,
        seconds: 0.0,
        failure: None,
    };
    let outcome = (|| -> Result<()> {
        let p = generate_family(family_type, n, r, cell_seed(seed, n, r, family_type))?;
        let iso = isolate_real_roots(&p, cfg)?;
        row.squaring_iters = iso.stats.squarings;
        row.found = iso.roots.len();
        row.suspects = iso.suspects.len();
        let values: Vec<f64> = iso.roots.iter().map(|r| r.value).collect();
        row.chebyshev_found = chebyshev1_roots(r)
            .iter()
            .filter(|&&c| values.iter().any(|v| (v - c).abs() <= 1e-6))
            .count();
        let oracle = all_roots_oracle(&p);
        row.oracle_converged = oracle.converged;
        row.max_error = values
            .iter()
            .map(|&v| oracle.nearest(Complex64::new(v, 0.0)))
            .fold(0.0, f64::max);
        if min_iters {
            row.min_iters = empirical_iterations(&p, cfg, &values, iso.stats.squarings);
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.failure = Some(e.to_string());
    }
    row.seconds = start.elapsed().as_secs_f64();
    row
}

/// Every `(type, n, r)` cell with `r < n`, ordered by type, then `n`, then `r`.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let mut cells = Vec::new();
    for &t in &spec.types {
        for &n in &spec.sizes {
            for &r in &spec.rs {
                if r >= 1 && r < n {
                    cells.push((t, n, r));
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|&(t, n, r)| run_cell(n, r, t, spec.seed, &spec.config, spec.min_iters))
            .collect()
    }))
}

pub const CSV_HEADER: &str = "n,r,type,iter,error";

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for row in rows {
        s.push_str(&format!(
            "{},{},{},{},{:.2E}\n",
            row.n, row.r, row.family_type, row.squaring_iters, row.max_error
        ));
    }
    s
}

/// One block per family type, rows by `n` and `r`, with the reference values alongside.
pub fn to_text(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    let mut types: Vec<u8> = rows.iter().map(|r| r.family_type).collect();
    types.dedup();
    for t in types {
        s.push_str(&format!("type {t}\n"));
        s.push_str(&format!(
            "{:>6} {:>4} {:>5} {:>8} {:>10} {:>6} {:>5} {:>8} {:>10}\n",
            "n", "r", "iter", "min_iter", "error", "found", "cheb", "ref_iter", "ref_error"
        ));
        for row in rows.iter().filter(|r| r.family_type == t) {
            let min = row.min_iters.map_or("-".to_string(), |k| k.to_string());
            let (pi, pe) = published_reference(row.r)
                .map_or(("-".to_string(), "-".to_string()), |(i, e)| (i.to_string(), format!("{e:.2E}")));
            s.push_str(&format!(
                "{:>6} {:>4} {:>5} {:>8} {:>10.2E} {:>6} {:>5} {:>8} {:>10}",
                row.n, row.r, row.squaring_iters, min, row.max_error, row.found, row.chebyshev_found, pi, pe
            ));
            if let Some(f) = &row.failure {
                s.push_str(&format!("  failed: {f}"));
            }
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_small_cell() {
        let row = run_cell(16, 4, 1, 5, &IsolatorConfig::default(), true);
        assert!(row.failure.is_none(), "{row:?}");
        assert_eq!(row.chebyshev_found, 4);
        assert!(row.max_error < 1e-6);
        assert!(row.min_iters.unwrap() <= row.squaring_iters);
    }

    #[test]
    fn csv_is_deterministic() {
        let spec = BenchSpec {
            sizes: vec![12, 16],
            rs: vec![4],
            types: vec![1, 3],
            seed: 3,
            jobs: 2,
            ..Default::default()
        };
        let a = to_csv(&run_bench(&spec).unwrap());
        let b = to_csv(&run_bench(&spec).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("n,r,type,iter,error\n"));
        assert_eq!(a.lines().count(), 5);
    }

    #[test]
    fn seeds_differ_per_cell() {
        assert_ne!(cell_seed(0, 64, 4, 1), cell_seed(0, 64, 4, 2));
        assert_ne!(cell_seed(0, 64, 4, 1), cell_seed(0, 128, 4, 1));
    }
}
