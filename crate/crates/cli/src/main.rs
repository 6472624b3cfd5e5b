use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rootiso::bench::{run_bench, to_csv, to_text, BenchSpec};
use rootiso::complex::{isolate_complex_roots, ComplexConfig, DEFAULT_ETA};
use rootiso::oracle::generate_family;
use rootiso::real::{isolate_real_roots, IsolatorConfig};
use rootiso::{refined_radii, Error, Polynomial};

#[derive(Parser)]
#[command(name = "rootiso", version, about = "Isolate real and complex polynomial roots from root radii")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a test polynomial: Chebyshev T_r times a degree n-r factor.
    Gen {
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=3))]
        family: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Approximate all root radii.
    Radii {
        /// Coefficient file, `-` for stdin.
        input: String,
        #[arg(long, default_value_t = 1e-3)]
        target_rel_error: f64,
    },
    /// Isolate and refine the simple real roots.
    IsolateReal {
        input: String,
        #[arg(long, default_value_t = 27)]
        bits: u32,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 2)]
        retries: u32,
        /// First-pass isolation ratio is 1 + c / n^d.
        #[arg(long, default_value_t = 1e-3)]
        c: f64,
        #[arg(long, default_value_t = 0.0)]
        d: f64,
        /// Stop after this many distinct roots.
        #[arg(long)]
        max_roots: Option<usize>,
    },
    /// Isolate complex roots in discs of radius rho * sqrt 2.
    IsolateComplex {
        input: String,
        #[arg(long, default_value_t = 1e-3)]
        rho: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ETA)]
        eta: f64,
        /// Run a few Newton steps from each simple disc center.
        #[arg(long)]
        polish: bool,
    },
    /// Run the benchmark grid against the all-roots oracle.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec![64, 128, 256, 512, 1024])]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![4, 8, 12])]
        rs: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        types: Vec<u8>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads, 0 for one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also search for the smallest sufficient squaring count.
        #[arg(long)]
        min_iters: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionLoss { .. } | Error::Tolerance { .. } | Error::Range => 3,
        _ => 2,
    }
}

fn read_poly(path: &str) -> Result<Polynomial, Error> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))?;
    Polynomial::parse_text(&text)
}

fn point(z: rootiso::ComplexPoint) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn run(cmd: Cmd) -> Result<String, Error> {
    match cmd {
        Cmd::Gen { family, n, r, seed } => Ok(generate_family(family, n, r, seed)?.to_text()),
        Cmd::Radii {
            input,
            target_rel_error,
        } => {
            let p = read_poly(&input)?;
            let est = refined_radii(&p, target_rel_error)?;
            Ok(json!({
                "radii": est.radii,
                "rel_factor": est.rel_factor,
                "squarings_used": est.squarings_used,
            })
            .to_string())
        }
        Cmd::IsolateReal {
            input,
            bits,
            budget,
            retries,
            c,
            d,
            max_roots,
        } => {
            let p = read_poly(&input)?;
            let cfg = IsolatorConfig {
                precision_bits: bits,
                isolation_c: c,
                isolation_d: d,
                max_real_roots: max_roots,
                work_budget: budget,
                max_retries: retries,
            };
            let out = isolate_real_roots(&p, &cfg)?;
            let roots: Vec<Value> = out
                .roots
                .iter()
                .map(|r| json!({ "value": r.value, "width": r.width, "residual": r.residual }))
                .collect();
            let suspects: Vec<Value> = out.suspects.iter().map(|s| json!({ "lo": s.lo, "hi": s.hi })).collect();
            let s = &out.stats;
            Ok(json!({
                "roots": roots,
                "suspects": suspects,
                "stats": {
                    "squarings": s.squarings,
                    "sign_evals": s.sign_evals,
                    "newton_steps": s.newton_steps,
                    "selected": s.selected,
                    "bisections": s.bisections,
                    "retries": s.retries,
                },
            })
            .to_string())
        }
        Cmd::IsolateComplex {
            input,
            rho,
            eps,
            seed,
            eta,
            polish,
        } => {
            let p = read_poly(&input)?;
            let cfg = ComplexConfig { rho, eps, eta, polish };
            let out = isolate_complex_roots(&p, &cfg, seed)?;
            let inclusions: Vec<Value> = out
                .inclusions
                .iter()
                .map(|i| {
                    let mut v = json!({
                        "re": i.disc_center.re,
                        "im": i.disc_center.im,
                        "radius": i.disc_radius,
                        "multiplicity": i.multiplicity,
                    });
                    if let Some(z) = i.polished {
                        v["polished"] = point(z);
                    }
                    v
                })
                .collect();
            let unresolved: Vec<Value> = out
                .unresolved
                .iter()
                .map(|u| {
                    json!({
                        "center": point(u.annulus.center),
                        "inner": u.annulus.inner,
                        "outer": u.annulus.outer,
                        "multiplicity": u.annulus.multiplicity,
                        "nodes": u.nodes.iter().map(|&k| point(out.nodes[k].center)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json!({
                "inclusions": inclusions,
                "unresolved": unresolved,
                "phi": out.phi,
                "nodes": out.nodes.len(),
                "separation": out.separation,
                "output_separation": out.output_separation,
            })
            .to_string())
        }
        Cmd::Bench {
            sizes,
            rs,
            types,
            seed,
            jobs,
            format,
            min_iters,
        } => {
            if let Some(t) = types.iter().find(|t| !(1..=3).contains(*t)) {
                return Err(Error::InvalidArgument(format!("unknown family type {t}")));
            }
            let spec = BenchSpec {
                sizes,
                rs,
                types,
                seed,
                jobs,
                min_iters,
                ..Default::default()
            };
            let rows = run_bench(&spec)?;
            Ok(match format {
                Format::Text => to_text(&rows),
                Format::Csv => to_csv(&rows),
                Format::Json => serde_json::to_string(&rows).map_err(|e| Error::InvalidArgument(e.to_string()))?,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rootiso: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
