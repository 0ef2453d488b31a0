//! Batch front end for the minimal Klein bottle surface library.
//!
//! Exit codes: 0 success, 1 computation or tolerance failure, 2 usage or
//! admissibility error, 3 eigenvalue classification ambiguous near the cutoff.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lagspec_core::family::{enumerate_admissible, KleinBottleParams};
use lagspec_core::geometry::{self, SU3Generator};
use lagspec_core::json::{fmt_float, Json};
use lagspec_core::nodal;
use lagspec_core::spectral::{self, SurfaceKind};
use lagspec_core::{Error, Result};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "lagspec",
    version,
    about = "Minimal Lagrangian Klein bottles: parameters, verification, spectra, indices, nodal counts"
)]
struct Cli {
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FieldFormat {
    Json,
    Csv,
    Pgm,
}

#[derive(Subcommand)]
enum Command {
    /// List admissible (n, m) pairs with n up to a bound.
    Enumerate {
        /// Inclusive upper bound for n.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Print the derived constants of one admissible pair.
    Params {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// Run the geometric verification suites and report PASS or FAIL per suite.
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        /// Grid resolution for the convergence suites.
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Laplace spectrum of the orientation double cover below a cutoff.
    Spectrum {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long, default_value_t = 6.0)]
        cutoff: f64,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Instability index counts and the multiplicity at the cutoff eigenvalue.
    Index {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Nodal domain counts of the cutoff eigenfunctions.
    Nodal {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 512)]
        nx: usize,
        #[arg(long, default_value_t = 512)]
        ny: usize,
        /// Export a single eigenfunction (1..=7) instead of the full report.
        #[arg(long)]
        which: Option<u8>,
        /// Half-width of the sign band treated as zero when counting domains.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = FieldFormat::Json)]
        format: FieldFormat,
    },
    /// Surface area from the closed formula and from quadrature.
    Area {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// Index reports for the comparison surfaces.
    Benchmarks,
}

fn main() -> ExitCode {
    if let Ok(raw) = std::env::var("LAGSPEC_THREADS") {
        if let Ok(threads) = raw.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(error_code(&err))
        }
    }
}

fn error_code(err: &Error) -> u8 {
    match err {
        Error::NotAdmissible { .. } | Error::InvalidArgument(_) | Error::InvalidGenerator(_) => 2,
        Error::AmbiguousAtCutoff(_) => 3,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Enumerate { max_n, format } => run_enumerate(*max_n, *format, &cli.output),
        Command::Params { n, m } => {
            let params = KleinBottleParams::derive(*n, *m)?;
            emit_text(&cli.output, &stamped(params_json(&params)).render())?;
            Ok(0)
        }
        Command::Verify { n, m, grid } => {
            let params = KleinBottleParams::derive(*n, *m)?;
            run_verify(&params, *grid, &cli.output)
        }
        Command::Spectrum {
            n,
            m,
            grid,
            cutoff,
            format,
        } => {
            let params = KleinBottleParams::derive(*n, *m)?;
            let spectrum = spectral::torus_spectrum(&params, *cutoff, *grid)?;
            match format {
                TableFormat::Json => emit_text(&cli.output, &stamped(spectrum.to_json()).render())?,
                TableFormat::Csv => emit_text(&cli.output, &spectrum.to_csv())?,
            }
            Ok(0)
        }
        Command::Index { n, m, grid } => {
            let params = KleinBottleParams::derive(*n, *m)?;
            let report = spectral::index_report(&params, *grid)?;
            emit_text(&cli.output, &stamped(report.to_json()).render())?;
            Ok(0)
        }
        Command::Nodal {
            n,
            m,
            nx,
            ny,
            which,
            epsilon,
            format,
        } => run_nodal(*n, *m, *nx, *ny, *which, *epsilon, *format, &cli.output),
        Command::Area { n, m } => {
            let params = KleinBottleParams::derive(*n, *m)?;
            let report = spectral::area_report(&params);
            let json = stamped(Json::obj(vec![
                ("n", Json::Int(params.n as i64)),
                ("m", Json::Int(params.m as i64)),
                ("formula", Json::Float(report.formula)),
                ("quadrature", Json::Float(report.quadrature)),
                (
                    "absoluteGap",
                    Json::Float((report.formula - report.quadrature).abs()),
                ),
            ]));
            emit_text(&cli.output, &json.render())?;
            Ok(0)
        }
        Command::Benchmarks => {
            let kinds = [
                SurfaceKind::Sphere,
                SurfaceKind::RealProjectivePlane,
                SurfaceKind::CliffordTorus,
            ];
            let mut rows = Vec::new();
            for kind in &kinds {
                rows.push(spectral::benchmark_index_report(kind)?.to_json());
            }
            let json = stamped(Json::obj(vec![("surfaces", Json::Arr(rows))]));
            emit_text(&cli.output, &json.render())?;
            Ok(0)
        }
    }
}

fn run_enumerate(max_n: u64, format: TableFormat, output: &Option<PathBuf>) -> Result<u8> {
    let pairs = enumerate_admissible(max_n);
    match format {
        TableFormat::Json => {
            let mut rows = Vec::new();
            for &(n, m) in &pairs {
                let params = KleinBottleParams::derive(n, m)?;
                rows.push(params_json(&params));
            }
            let json = stamped(Json::obj(vec![
                ("maxN", Json::Int(max_n as i64)),
                ("count", Json::Int(pairs.len() as i64)),
                ("pairs", Json::Arr(rows)),
            ]));
            emit_text(output, &json.render())?;
        }
        TableFormat::Csv => {
            let mut out = String::from("n,m,b,modulus,periodX,periodY\n");
            for &(n, m) in &pairs {
                let p = KleinBottleParams::derive(n, m)?;
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    n,
                    m,
                    fmt_float(p.b),
                    fmt_float(p.p),
                    fmt_float(p.lx),
                    fmt_float(p.ly)
                ));
            }
            emit_text(output, &out)?;
        }
    }
    Ok(0)
}

fn params_json(p: &KleinBottleParams) -> Json {
    Json::obj(vec![
        ("n", Json::Int(p.n as i64)),
        ("m", Json::Int(p.m as i64)),
        ("b", Json::Float(p.b)),
        ("bCubed", Json::Float(p.b3)),
        ("qSquared", Json::Float(p.q2)),
        ("rScale", Json::Float(p.r)),
        ("modulus", Json::Float(p.p)),
        ("lambdaSquared", Json::Float(p.lam2)),
        ("muSquared", Json::Float(p.mu2)),
        ("nuSquared", Json::Float(p.nu2)),
        ("ellipticK", Json::Float(p.kk)),
        ("ellipticE", Json::Float(p.ee)),
        ("periodX", Json::Float(p.lx)),
        ("periodY", Json::Float(p.ly)),
        ("conformalMin", Json::Float(p.conformal_factor_min())),
        ("areaFormula", Json::Float(spectral::area_report(p).formula)),
    ])
}

struct SuiteOutcome {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn suite<F: FnOnce() -> Result<(bool, String)>>(name: &'static str, f: F) -> SuiteOutcome {
    match f() {
        Ok((ok, detail)) => SuiteOutcome { name, ok, detail },
        Err(err) => SuiteOutcome {
            name,
            ok: false,
            detail: err.to_string(),
        },
    }
}

/// Deterministic low-discrepancy sample of the fundamental domain.
fn sample_points(params: &KleinBottleParams, count: usize) -> Vec<(f64, f64)> {
    const G1: f64 = 0.754_877_666_246_692_8;
    const G2: f64 = 0.569_840_290_998_053_3;
    (0..count)
        .map(|i| {
            let t = i as f64;
            (
                params.lx * (t * G1).fract(),
                2.0 * params.ly * (t * G2).fract(),
            )
        })
        .collect()
}

fn run_verify(params: &KleinBottleParams, grid: usize, output: &Option<PathBuf>) -> Result<u8> {
    let pts = sample_points(params, 1000);
    let max_over =
        |f: &dyn Fn(f64, f64) -> f64| pts.iter().fold(0.0f64, |acc, &(x, y)| acc.max(f(x, y)));

    let outcomes = vec![
        suite("unit lift", || {
            let max = max_over(&|x, y| geometry::unit_norm_residual(params, x, y));
            Ok((max <= 1e-12, format!("max {max:.2e}, tol 1.0e-12")))
        }),
        suite("horizontality", || {
            let max = max_over(&|x, y| {
                let (a, b) = geometry::horizontality_residual(params, x, y);
                a.max(b)
            });
            Ok((max <= 1e-10, format!("max {max:.2e}, tol 1.0e-10")))
        }),
        suite("lagrangian plane", || {
            let max = max_over(&|x, y| geometry::lagrangian_residual(params, x, y));
            Ok((max <= 1e-10, format!("max {max:.2e}, tol 1.0e-10")))
        }),
        suite("projective seams", || {
            let max = max_over(&|x, y| {
                let (a, b) = geometry::projective_wellposedness(params, x, y);
                a.max(b)
            });
            Ok((max <= 1e-10, format!("max {max:.2e}, tol 1.0e-10")))
        }),
        suite("conformal factor ode", || {
            let max = (0..1000).fold(0.0f64, |acc, i| {
                let x = params.lx * (i as f64 + 0.5) / 1000.0;
                acc.max(params.ode_residual(x).abs())
            });
            Ok((max <= 1e-9, format!("max {max:.2e}, tol 1.0e-9")))
        }),
        suite("minimality convergence", || {
            let (coarse, fine, ratio) = geometry::minimality_convergence(params, grid)?;
            Ok((
                (3.2..4.8).contains(&ratio),
                format!("coarse {coarse:.2e}, fine {fine:.2e}, ratio {ratio:.2} (expect near 4)"),
            ))
        }),
        suite("symmetry laplace", || {
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            let mut worst = 0.0f64;
            for gen in SU3Generator::basis() {
                let coarse = geometry::su3_laplace_residual(&gen, params, grid / 2)?;
                let fine = geometry::su3_laplace_residual(&gen, params, grid)?;
                let ratio = coarse / fine;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
                worst = worst.max(fine);
            }
            Ok((
                lo > 3.2 && hi < 4.8,
                format!("ratios [{lo:.2}, {hi:.2}] (expect near 4), max fine {worst:.2e}"),
            ))
        }),
        suite("symmetry gram rank", || {
            let eigs = geometry::su3_gram_eigenvalues(params, grid)?;
            let rank = eigs.iter().filter(|&&e| e > 1e-6 * eigs[7]).count();
            Ok((
                rank == 7,
                format!(
                    "rank {rank} (expect 7), kernel fraction {:.1e}",
                    eigs[0] / eigs[7]
                ),
            ))
        }),
    ];

    let mut report = format!(
        "verify (n, m) = ({}, {}), gridN = {}\n",
        params.n, params.m, grid
    );
    let passed = outcomes.iter().filter(|o| o.ok).count();
    for o in &outcomes {
        report.push_str(&format!(
            "  [{}] {:<24} {}\n",
            if o.ok { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        ));
    }
    let all = passed == outcomes.len();
    report.push_str(&format!(
        "verification: {} ({}/{} suites)\n",
        if all { "PASS" } else { "FAIL" },
        passed,
        outcomes.len()
    ));
    emit_text(output, &report)?;
    Ok(if all { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn run_nodal(
    n: u64,
    m: u64,
    nx: usize,
    ny: usize,
    which: Option<u8>,
    epsilon: f64,
    format: FieldFormat,
    output: &Option<PathBuf>,
) -> Result<u8> {
    let params = KleinBottleParams::derive(n, m)?;
    match which {
        None => {
            if format != FieldFormat::Json {
                return Err(Error::InvalidArgument(
                    "csv and pgm exports need --which".to_string(),
                ));
            }
            if epsilon != 0.0 {
                return Err(Error::InvalidArgument(
                    "--epsilon needs --which".to_string(),
                ));
            }
            let report = nodal::nodal_report(&params, nx, ny)?;
            emit_text(output, &stamped(report.to_json()).render())?;
        }
        Some(which) => {
            let grid = nodal::sample_g(&params, which, nx, ny)?;
            match format {
                FieldFormat::Json => {
                    let count = nodal::count_nodal_domains(&grid, epsilon)?;
                    let expected = nodal::expected_counts(&params)[(which - 1) as usize];
                    let json = stamped(Json::obj(vec![
                        ("n", Json::Int(n as i64)),
                        ("m", Json::Int(m as i64)),
                        ("which", Json::Int(which as i64)),
                        ("nx", Json::Int(nx as i64)),
                        ("ny", Json::Int(ny as i64)),
                        ("epsilon", Json::Float(epsilon)),
                        ("count", Json::Int(count as i64)),
                        ("expected", Json::Int(expected as i64)),
                        ("match", Json::Bool(count == expected)),
                    ]));
                    emit_text(output, &json.render())?;
                }
                FieldFormat::Csv => emit_text(output, &nodal::to_csv(&grid))?,
                FieldFormat::Pgm => emit_bytes(output, &nodal::to_pgm(&grid, epsilon)?)?,
            }
        }
    }
    Ok(0)
}

fn stamped(json: Json) -> Json {
    match json {
        Json::Obj(mut fields) => {
            fields.push(("version".to_string(), Json::Str(VERSION.to_string())));
            Json::Obj(fields)
        }
        other => other,
    }
}

fn emit_text(output: &Option<PathBuf>, text: &str) -> Result<()> {
    emit_bytes(output, text.as_bytes())
}

fn emit_bytes(output: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    use std::io::Write as _;
    match output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}
