use std::fmt;
use std::io::{self, Write};
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use kech_core::diffops::differential;
use kech_core::enumerate::{read_cache, search, write_cache, CacheError, ComplexSlice, SearchBounds};
use kech_core::homology::{betti_report_on, d_squared_on};
use kech_core::kpath::{parse_path, KLatticePath, DEFAULT_TOLERANCE};
use kech_core::obstruct::{ech_capacity_toric, gromov_upper, obstruction_checks, ToricDomain};
use kech_core::spectrum::{capacity, contact_volume, weyl_limit, weyl_series};

use kech_cli::report::*;

#[derive(Parser)]
#[command(name = "kech", version, about = "Combinatorial ECH of the flat Klein bottle's unit cotangent bundle")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Worker threads for data-parallel stages.
    #[arg(long, global = true, env = "KECH_THREADS")]
    threads: Option<usize>,
    /// Directory holding enumeration caches.
    #[arg(long, global = true, env = "KECH_CACHE")]
    cache: Option<PathBuf>,
    /// Action tolerance for enumeration bounds.
    #[arg(long, global = true, env = "KECH_TOLERANCE", default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a path spec.
    Validate { spec: String },
    /// Index, action, type and homology class of a generator.
    Grade { spec: String },
    /// The differential of a generator.
    Diff { spec: String },
    /// Generators of action at most L.
    Enumerate {
        #[arg(long, allow_negative_numbers = true)]
        max_action: f64,
        #[arg(long)]
        grading: Option<i64>,
    },
    /// Check that the differential squares to zero.
    D2check {
        #[arg(long, allow_negative_numbers = true)]
        max_action: f64,
    },
    /// Betti numbers of the filtered complex.
    Homology {
        #[arg(long, allow_negative_numbers = true)]
        max_action: f64,
        #[arg(long, allow_negative_numbers = true)]
        max_degree: i64,
    },
    /// ECH capacities c_k, or c_k..c_kmax.
    Capacity {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Ratios c_k^2/k for 1 <= k <= kmax.
    Weyl {
        #[arg(long)]
        kmax: u32,
    },
    /// ECH capacity of a convex toric domain.
    CapToric {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        k: u32,
    },
    /// Gromov width upper bounds from the sequence of K-lattice paths.
    Gromov {
        #[arg(long)]
        kmax: u32,
    },
    /// Test whether a K-lattice path obstructs embedding a toric domain.
    Obstruct {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        lambda_prime: String,
    },
}

/// A broken invariant: the computation, not the input, is at fault.
#[derive(Debug)]
struct Internal(String);

impl fmt::Display for Internal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "internal invariant violated: {}", self.0)
    }
}

impl std::error::Error for Internal {}

struct Config {
    format: Format,
    cache: Option<PathBuf>,
    tolerance: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(out)) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok(Err(Failure { output, error })) => {
            if let Some(out) = output {
                print!("{out}");
            }
            eprintln!("error: {error:#}");
            if error.downcast_ref::<Internal>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
        Err(_) => ExitCode::from(3),
    }
}

/// An error, possibly with a report that should still be printed.
struct Failure {
    output: Option<String>,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { output: None, error: e.into() }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        return Err(anyhow::anyhow!("tolerance must be positive, got {}", cli.tolerance).into());
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(anyhow::anyhow!("threads must be at least 1").into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let cfg = Config { format: cli.format, cache: cli.cache, tolerance: cli.tolerance };
    let out = match cli.command {
        Command::Validate { spec } => {
            let p = parse(&spec)?;
            render(
                &ValidateReport { schema: SCHEMA.into(), spec, canonical: p.to_string(), path_type: p.path_type().to_string() },
                cfg.format,
            )?
        }
        Command::Grade { spec } => {
            let p = parse(&spec)?;
            let c = p.total_class();
            let r = GradeReport {
                schema: SCHEMA.into(),
                spec: p.to_string(),
                grading: p.grading(),
                grading_lattice: p.grading_lattice(),
                action: p.action(),
                path_type: p.path_type().to_string(),
                class: Class { n: c.n, a: c.a, b: c.b },
            };
            if r.grading != r.grading_lattice {
                return Err(Internal(format!("grading {} differs from lattice count {}", r.grading, r.grading_lattice)).into());
            }
            render(&r, cfg.format)?
        }
        Command::Diff { spec } => {
            let p = parse(&spec)?;
            let terms = differential(&p).iter().map(term).collect();
            render(
                &DiffReport { schema: SCHEMA.into(), spec: p.to_string(), grading: p.grading(), action: p.action(), terms },
                cfg.format,
            )?
        }
        Command::Enumerate { max_action, grading } => {
            check_bound(max_action)?;
            let slice = load_slice(&cfg, max_action)?;
            let generators: Vec<Generator> = slice
                .iter()
                .filter(|p| grading.is_none_or(|k| p.grading() == k))
                .map(|p| Generator {
                    spec: p.to_string(),
                    grading: p.grading(),
                    action: p.action(),
                    path_type: p.path_type().to_string(),
                    h_count: p.h_count(),
                })
                .collect();
            let r = EnumerateReport { schema: SCHEMA.into(), max_action, grading, count: generators.len(), generators };
            render(&r, cfg.format)?
        }
        Command::D2check { max_action } => {
            check_bound(max_action)?;
            let slice = load_slice(&cfg, max_action)?;
            let violations: Vec<Violation> = d_squared_on(&slice)
                .into_iter()
                .map(|v| Violation { source: v.source.to_string(), target: v.target.to_string() })
                .collect();
            let r = D2Report { schema: SCHEMA.into(), max_action, generators: slice.len(), violations };
            let out = render(&r, cfg.format)?;
            if !r.violations.is_empty() {
                return Err(Failure {
                    output: Some(out),
                    error: Internal(format!("{} violations of d^2 = 0", r.violations.len())).into(),
                });
            }
            out
        }
        Command::Homology { max_action, max_degree } => {
            check_bound(max_action)?;
            if max_degree < 0 {
                return Err(anyhow::anyhow!("max-degree must be nonnegative").into());
            }
            let slice = load_slice(&cfg, max_action)?;
            let b = betti_report_on(&slice, max_degree);
            let degrees = (0..=max_degree)
                .map(|k| Degree {
                    degree: k,
                    generators: b.generators[&k],
                    betti: b.per_degree[&k],
                    stabilized: b.stabilized[&k],
                })
                .collect();
            render(&HomologyReport { schema: SCHEMA.into(), max_action, degrees }, cfg.format)?
        }
        Command::Capacity { k, kmax } => {
            let hi = kmax.unwrap_or(k);
            if hi < k {
                return Err(anyhow::anyhow!("kmax {hi} is below k {k}").into());
            }
            let capacities = rayon_map(k..=hi, |j| {
                let c = capacity(j);
                CapacityRow { k: j, value: c.value, witness: c.witness.to_string() }
            });
            render(&CapacityReport { schema: SCHEMA.into(), capacities }, cfg.format)?
        }
        Command::Weyl { kmax } => {
            let rows = weyl_series(kmax)
                .into_iter()
                .map(|r| WeylRow { k: r.k, c_k: r.c_k, ratio: r.ratio })
                .collect();
            render(
                &WeylReport { schema: SCHEMA.into(), contact_volume: contact_volume(), limit: weyl_limit(), rows },
                cfg.format,
            )?
        }
        Command::CapToric { domain, k } => {
            let omega = parse_domain(&domain)?;
            let value = ech_capacity_toric(&omega, k);
            render(&CapToricReport { schema: SCHEMA.into(), domain: omega.to_string(), k, value }, cfg.format)?
        }
        Command::Gromov { kmax } => {
            let g = gromov_upper(kmax);
            let records = g
                .records
                .into_iter()
                .map(|r| GromovRow {
                    k: r.k,
                    lambda_prime: r.lambda_prime.to_string(),
                    unique_factorization: r.unique_factorization,
                    rhs_action: r.rhs_action,
                    min_lhs_action: r.min_lhs_action,
                    witness: r.witness.to_string(),
                    bound: r.bound,
                    axis_bound: r.axis_bound,
                })
                .collect();
            render(&GromovReport { schema: SCHEMA.into(), running_inf: g.running_inf, records }, cfg.format)?
        }
        Command::Obstruct { domain, lambda_prime } => {
            let omega = parse_domain(&domain)?;
            let lp = parse(&lambda_prime)?;
            let checks = obstruction_checks(&omega, &lp).with_context(|| format!("cannot factor {lp}"))?;
            let obstructed = !checks.iter().any(|parts| parts.iter().all(|c| c.feasible));
            let factorizations = checks
                .into_iter()
                .map(|parts| {
                    parts
                        .into_iter()
                        .map(|c| PartRow {
                            grading: c.part.grading(),
                            part: c.part.to_string(),
                            action: c.action,
                            min_lhs_action: c.best.as_ref().map(|b| b.0),
                            witness: c.best.as_ref().map(|b| b.1.to_string()),
                            feasible: c.feasible,
                        })
                        .collect()
                })
                .collect();
            let r = ObstructReport {
                schema: SCHEMA.into(),
                domain: omega.to_string(),
                lambda_prime: lp.to_string(),
                obstructed,
                factorizations,
            };
            render(&r, cfg.format)?
        }
    };
    Ok(out)
}

fn rayon_map<T: Send>(ks: std::ops::RangeInclusive<u32>, f: impl Fn(u32) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    ks.into_par_iter().map(f).collect()
}

fn parse(spec: &str) -> Result<KLatticePath> {
    parse_path(spec).with_context(|| format!("invalid path spec {spec:?}"))
}

fn parse_domain(text: &str) -> Result<ToricDomain> {
    text.parse().with_context(|| format!("invalid domain {text:?}"))
}

fn check_bound(l: f64) -> Result<()> {
    if !(l >= 0.0 && l.is_finite()) {
        bail!("max-action must be a finite nonnegative number, got {l}");
    }
    Ok(())
}

fn term(p: &KLatticePath) -> Term {
    Term { spec: p.to_string(), grading: p.grading(), action: p.action() }
}

fn cache_file(dir: &Path, l: f64) -> PathBuf {
    dir.join(format!("slice-L{l}.txt"))
}

/// Every generator of action at most `l`, through the cache when one is set.
fn load_slice(cfg: &Config, l: f64) -> Result<ComplexSlice> {
    let compute = || {
        let mut bounds = SearchBounds::action(l);
        bounds.tol = cfg.tolerance;
        search(bounds)
    };
    let Some(dir) = &cfg.cache else {
        return Ok(ComplexSlice::from_paths(l, compute()));
    };
    let file = cache_file(dir, l);
    match read_cache(&file, l) {
        Ok(paths) => return Ok(ComplexSlice::from_paths(l, paths)),
        Err(CacheError::Io(e)) if e.kind() == io::ErrorKind::NotFound => {}
        Err(CacheError::Header) => eprintln!("warning: stale cache {}, rebuilding", file.display()),
        Err(e) => eprintln!("warning: ignoring cache {}: {e}", file.display()),
    }
    let paths = compute();
    if let Err(e) = std::fs::create_dir_all(dir).and_then(|()| write_cache(&file, l, &paths)) {
        eprintln!("warning: could not write cache {}: {e}", file.display());
    }
    Ok(ComplexSlice::from_paths(l, paths))
}
