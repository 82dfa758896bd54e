//! Command-line front end: one-shot measures, lattice and bound queries, and
//! the CSV convergence scans.

mod config;
mod scan;
mod template;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::main_error_bound;
use crate::lattice::{substitute, SubstMatrix};
use crate::laurent::LaurentPoly;
use crate::mahler::{
    measure_iterated, measure_mc, measure_univariate_exact, sublevel_measure, MeasureResult,
};
use crate::special::{mpd_asymptotic, mpd_exact, pd_polynomial};
use crate::{Error, Result};

pub use config::Config;
pub use scan::{
    completed_rows, run_scan, scan_to_file, ScanRow, ScanSpec, CSV_HEADER, REFERENCE_WORK,
};
pub use template::{Affine, MatrixTemplate};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    /// Exact in one variable, iterated quadrature otherwise.
    Auto,
    Exact,
    Iterated,
    Mc,
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodChoice::Auto => "auto",
            MethodChoice::Exact => "exact",
            MethodChoice::Iterated => "iterated",
            MethodChoice::Mc => "mc",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PdMode {
    /// Closed form through the Bloch–Wigner dilogarithm.
    Exact,
    /// Iterated quadrature of `P_d`.
    Numeric,
    /// Truncated expansion in `1/d`.
    Asymptotic,
}

pub(crate) fn measure_with(
    method: MethodChoice,
    p: &LaurentPoly,
    grid: usize,
    samples: usize,
    seed: u64,
) -> Result<MeasureResult> {
    match method {
        MethodChoice::Auto => crate::mahler::measure(p, grid),
        MethodChoice::Exact => measure_univariate_exact(p),
        MethodChoice::Iterated => measure_iterated(p, grid),
        MethodChoice::Mc => measure_mc(p, samples, seed),
    }
}

/// Twelve significant digits, `%g` style.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        return format!("{mant}e{exp}");
    }
    let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Number of variables implied by the largest `zK` in `text`, at least 1.
pub fn infer_nvars(text: &str) -> usize {
    let b = text.as_bytes();
    let mut n = 1;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'z' {
            let start = i + 1;
            let mut j = start;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = text[start..j].parse::<usize>() {
                n = n.max(k);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    n
}

#[derive(Debug, Parser)]
#[command(
    name = "torus-mahler",
    version,
    about = "Mahler measures under monomial substitution"
)]
pub struct Cli {
    /// Number of variables (default: largest zK in the polynomial).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for quadrature, Monte Carlo and scans.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` defaults for grid, samples, seed, threads, budget.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mahler measure of a polynomial.
    Measure {
        poly: String,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Apply a monomial substitution `P ↦ P_A`.
    Substitute {
        poly: String,
        #[arg(long)]
        matrix: String,
        /// Print the sparse JSON document instead of the expression.
        #[arg(long)]
        json: bool,
    },
    /// Kernel lattice and `ρ` of an integer matrix.
    Rho { matrix: String },
    /// Main error bound at a given `ρ`.
    Bound {
        poly: String,
        #[arg(long)]
        rho: f64,
    },
    /// CSV of `m(P_{A_d}) − m(P)` over a range of `d`.
    Scan {
        poly: String,
        /// Matrix affine in `d`, e.g. "1 d" or "d+2 0 1 0; 0 1 0 d+2".
        #[arg(long)]
        template: String,
        #[arg(long, alias = "d-from")]
        from: i64,
        #[arg(long, alias = "d-to")]
        to: i64,
        #[arg(long, alias = "d-step", default_value_t = 1)]
        step: i64,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        /// Keep rows already in `--out` and compute only the missing ones.
        #[arg(long)]
        resume: bool,
    },
    /// Measures of the triangular family `P_d`.
    Pd {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = PdMode::Exact)]
        mode: PdMode,
        /// Truncation order of the expansion.
        #[arg(long = "K", alias = "k", default_value_t = 3)]
        order: usize,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Monte Carlo volume of `{|P| ≤ r}` with a 99% interval.
    Sublevel {
        poly: String,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn poly_arg(text: &str, n: Option<usize>) -> Result<LaurentPoly> {
    LaurentPoly::parse(text, n.unwrap_or_else(|| infer_nvars(text)))
}

fn emit_measure(out: &mut dyn Write, m: &MeasureResult) -> Result<()> {
    writeln!(out, "value {}", fmt_num(m.value))?;
    writeln!(out, "method {}", m.method)?;
    writeln!(out, "error_estimate {}", fmt_num(m.error_estimate))?;
    writeln!(out, "work {}", m.work)?;
    Ok(())
}

fn fmt_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Executes a parsed command line, writing to `out`. `scan` with `--out`
/// writes its own file.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let seed = cli.seed.unwrap_or(cfg.seed);
    match &cli.command {
        Command::Measure {
            poly,
            method,
            grid,
            samples,
        } => {
            let p = poly_arg(poly, cli.n)?;
            if p.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            let m = measure_with(
                *method,
                &p,
                grid.unwrap_or(cfg.grid),
                samples.unwrap_or(cfg.samples),
                seed,
            )?;
            emit_measure(out, &m)
        }
        Command::Substitute { poly, matrix, json } => {
            let a = SubstMatrix::with_budget(crate::lattice::parse_int_rows(matrix)?, cfg.budget)?;
            let p = poly_arg(poly, cli.n.or(Some(a.ncols())))?;
            let pa = substitute(&p, &a)?;
            if *json {
                writeln!(out, "{}", pa.to_sparse_json()?)?;
            } else {
                writeln!(out, "{pa}")?;
            }
            Ok(())
        }
        Command::Rho { matrix } => {
            let a = SubstMatrix::with_budget(crate::lattice::parse_int_rows(matrix)?, cfg.budget)?;
            writeln!(out, "matrix {a}")?;
            writeln!(out, "kernel_dim {}", a.kernel_dim())?;
            for v in a.kernel_basis() {
                writeln!(out, "kernel {}", fmt_vec(v))?;
            }
            writeln!(out, "rho {}", a.rho())?;
            if let Some(v) = a.shortest_vector() {
                writeln!(out, "shortest {}", fmt_vec(v))?;
            }
            Ok(())
        }
        Command::Bound { poly, rho } => {
            let p = poly_arg(poly, cli.n)?;
            let rep = main_error_bound(&p.stats()?, *rho)?;
            writeln!(out, "rho0 {}", fmt_num(rep.rho0))?;
            writeln!(out, "rho {}", fmt_num(rep.rho))?;
            writeln!(out, "applicable {}", rep.applicable)?;
            writeln!(out, "bound {}", fmt_num(rep.bound_value))?;
            for (k, v) in &rep.components {
                writeln!(out, "{k} {}", fmt_num(*v))?;
            }
            Ok(())
        }
        Command::Scan {
            poly,
            template,
            from,
            to,
            step,
            method,
            grid,
            samples,
            resume,
        } => {
            let template = MatrixTemplate::parse(template)?;
            let p = poly_arg(poly, cli.n.or(Some(template.ncols())))?;
            let spec = ScanSpec {
                poly: p,
                template,
                from: *from,
                to: *to,
                step: *step,
                method: *method,
                grid: grid.unwrap_or(cfg.grid),
                samples: samples.unwrap_or(cfg.samples),
                seed,
            };
            match &cli.out {
                Some(path) => {
                    let rows = scan_to_file(&spec, path, *resume)?;
                    eprintln!("{rows} rows written to {}", path.display());
                    Ok(())
                }
                None if *resume => Err(Error::precondition("--resume needs --out")),
                None => run_scan(&spec, out, &Default::default(), true).map(|_| ()),
            }
        }
        Command::Pd {
            d,
            mode,
            order,
            grid,
        } => {
            writeln!(out, "d {d}")?;
            writeln!(out, "mode {}", format!("{mode:?}").to_lowercase())?;
            match mode {
                PdMode::Exact => writeln!(out, "value {}", fmt_num(mpd_exact(*d)?))?,
                PdMode::Numeric => {
                    if *d < 1 {
                        return Err(Error::precondition("P_0 is constant; use d ≥ 1"));
                    }
                    let m = measure_iterated(&pd_polynomial(*d), grid.unwrap_or(cfg.grid))?;
                    emit_measure(out, &m)?;
                }
                PdMode::Asymptotic => {
                    writeln!(out, "K {order}")?;
                    writeln!(out, "value {}", fmt_num(mpd_asymptotic(*d, *order)?))?;
                }
            }
            Ok(())
        }
        Command::Sublevel { poly, r, samples } => {
            let p = poly_arg(poly, cli.n)?;
            let s = sublevel_measure(&p, *r, samples.unwrap_or(cfg.samples), seed)?;
            writeln!(out, "estimate {}", fmt_num(s.estimate))?;
            writeln!(out, "lower {}", fmt_num(s.lower))?;
            writeln!(out, "upper {}", fmt_num(s.upper))?;
            writeln!(out, "samples {}", s.samples)?;
            Ok(())
        }
    }
}

/// Parses `args`, runs, and maps failures to exit codes: 2 for bad input,
/// 3 for numerical failures, 4 for violated preconditions, 5 for I/O.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let threads = cli.threads.or_else(|| {
        cli.config
            .as_ref()
            .and_then(|p| Config::load(p).ok())
            .and_then(|c| c.threads)
    });
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    let result = match (&cli.out, &cli.command) {
        (Some(path), c) if !matches!(c, Command::Scan { .. }) => {
            File::create(path).map_err(Error::from).and_then(|f| {
                let mut w = BufWriter::new(f);
                run(&cli, &mut w)?;
                w.flush()?;
                Ok(())
            })
        }
        _ => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            run(&cli, &mut lock)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
