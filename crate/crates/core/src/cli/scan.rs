//! Convergence scans `d ↦ m(P_{A_d}) − m(P)` written as CSV.

use std::collections::BTreeSet;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;

use super::template::MatrixTemplate;
use super::{fmt_num, measure_with, MethodChoice};
use crate::bounds::main_error_bound;
use crate::lattice::{substitute, Rho};
use crate::laurent::LaurentPoly;
use crate::mahler::measure;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "d,rho,m_PA,m_P,diff,bound,applicable";

/// Rows computed between two flushes of the output.
const BLOCK: usize = 32;

/// Cap on outer quadrature nodes for the reference `m(P)`; beyond it the
/// per-dimension grid is reduced.
pub const REFERENCE_WORK: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub d: i64,
    pub rho: Rho,
    /// `None` when the substitution vanishes identically.
    pub m_pa: Option<f64>,
    pub m_p: f64,
    pub diff: Option<f64>,
    /// `None` when the main bound does not apply to `P` (for instance
    /// `n = 1`) or `ρ = ∞`.
    pub bound: Option<f64>,
    pub applicable: bool,
}

impl ScanRow {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), fmt_num);
        format!(
            "{},{},{},{},{},{},{}",
            self.d,
            self.rho,
            opt(self.m_pa),
            fmt_num(self.m_p),
            opt(self.diff),
            opt(self.bound),
            self.applicable
        )
    }
}

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub poly: LaurentPoly,
    pub template: MatrixTemplate,
    pub from: i64,
    pub to: i64,
    pub step: i64,
    pub method: MethodChoice,
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
}

impl ScanSpec {
    pub fn values(&self) -> Result<Vec<i64>> {
        if self.step <= 0 {
            return Err(Error::precondition("scan step must be positive"));
        }
        let mut out = Vec::new();
        let mut d = self.from;
        while d <= self.to {
            out.push(d);
            d = match d.checked_add(self.step) {
                Some(next) => next,
                None => break,
            };
        }
        Ok(out)
    }

    /// Grid for the reference measure: the scan's grid unless
    /// `grid^(n−1)` outer nodes exceed [`REFERENCE_WORK`].
    pub fn reference_grid(&self) -> usize {
        let outer = self.poly.nvars().saturating_sub(1) as u32;
        let mut g = self.grid.max(2);
        while g > 2
            && (g as u64)
                .checked_pow(outer)
                .is_none_or(|w| w > REFERENCE_WORK)
        {
            g /= 2;
        }
        g
    }

    /// `m(P)` for the `m_P` column: exact in one variable, otherwise
    /// iterated quadrature at [`Self::reference_grid`].
    pub fn reference(&self) -> Result<f64> {
        Ok(measure(&self.poly, self.reference_grid())?.value)
    }

    pub fn row(&self, d: i64, m_p: f64) -> Result<ScanRow> {
        let a = self.template.at(d)?;
        if a.ncols() != self.poly.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.poly.nvars(),
                found: a.ncols(),
            });
        }
        let rho = a.rho();
        let (bound, applicable) = match (self.poly.stats(), rho) {
            (Ok(st), Rho::Finite(r)) if st.n >= 2 && st.k >= 2 && r > 1 => {
                let rep = main_error_bound(&st, r as f64)?;
                (Some(rep.bound_value), rep.applicable)
            }
            _ => (None, false),
        };
        let pa = substitute(&self.poly, &a)?;
        if pa.is_zero() {
            eprintln!("warning: substitution vanishes at d = {d}");
            return Ok(ScanRow {
                d,
                rho,
                m_pa: None,
                m_p,
                diff: None,
                bound,
                applicable,
            });
        }
        let m_pa = measure_with(self.method, &pa, self.grid, self.samples, self.seed)?.value;
        Ok(ScanRow {
            d,
            rho,
            m_pa: Some(m_pa),
            m_p,
            diff: Some(m_pa - m_p),
            bound,
            applicable,
        })
    }

    /// The `#` metadata line written above the CSV header.
    pub fn metadata(&self, m_p: f64) -> String {
        format!(
            "# poly={} n={} template={} m_P={} ref_grid={} method={} grid={} samples={} seed={}",
            self.poly,
            self.poly.nvars(),
            self.template,
            fmt_num(m_p),
            self.reference_grid(),
            self.method,
            self.grid,
            self.samples,
            self.seed
        )
    }
}

/// `d` values already present in a CSV written by [`run_scan`].
pub fn completed_rows(path: &Path) -> Result<BTreeSet<i64>> {
    let mut done = BTreeSet::new();
    if !path.exists() {
        return Ok(done);
    }
    let file = std::fs::File::open(path)?;
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.starts_with('#') || line == CSV_HEADER || line.trim().is_empty() {
            continue;
        }
        if let Some(Ok(d)) = line.split(',').next().map(str::parse::<i64>) {
            done.insert(d);
        }
    }
    Ok(done)
}

/// Runs the scan, writing rows in `d` order. Rows are computed in parallel
/// blocks and flushed after each block.
pub fn run_scan(
    spec: &ScanSpec,
    out: &mut dyn Write,
    skip: &BTreeSet<i64>,
    header: bool,
) -> Result<usize> {
    let todo: Vec<i64> = spec
        .values()?
        .into_iter()
        .filter(|d| !skip.contains(d))
        .collect();
    let m_p = spec.reference()?;
    if header {
        writeln!(out, "{}", spec.metadata(m_p))?;
        writeln!(out, "{CSV_HEADER}")?;
    }
    for block in todo.chunks(BLOCK) {
        let rows: Vec<ScanRow> = block
            .par_iter()
            .map(|&d| spec.row(d, m_p))
            .collect::<Result<_>>()?;
        for r in &rows {
            writeln!(out, "{}", r.to_csv())?;
        }
        out.flush()?;
    }
    Ok(todo.len())
}

/// Scan into a file, optionally resuming a previous partial run.
pub fn scan_to_file(spec: &ScanSpec, path: &Path, resume: bool) -> Result<usize> {
    let skip = if resume {
        completed_rows(path)?
    } else {
        BTreeSet::new()
    };
    let fresh = !resume || !path.exists() || std::fs::metadata(path)?.len() == 0;
    let mut file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(!fresh)
        .truncate(fresh)
        .open(path)?;
    run_scan(spec, &mut file, &skip, fresh)
}
