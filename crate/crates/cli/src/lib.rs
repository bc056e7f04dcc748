//! Rendering for the `rootloci` command line tool. Every command builds a
//! serializable output record; the three formats are views of that record.
//! JSON keeps full `f64` precision, tables and CSV print 6 significant digits.

use clap::ValueEnum;
use rootloci::critical::CriticalDecomposition;
use rootloci::general_solver::{solve_general, GeneralOptions};
use rootloci::hook_solver::solve_hook;
use rootloci::partitions::{degree_report, verify_table, DegreeReport, TableCheck};
use rootloci::realrank::{generic_real_rank_test_with, RealRankReport};
use rootloci::{Basis, BinaryForm, Error, Partition, ProjectivePoint, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    /// `"hook"` or `"general"`.
    pub solver: String,
    pub partition: Partition,
    /// The input form, in the monomial basis.
    pub h: BinaryForm,
    pub norm_sq: f64,
    /// Only for the general solver.
    pub options: Option<GeneralOptions>,
    /// Index of the smallest `dist_sq_primal`.
    pub best_primal: Option<usize>,
    /// Index of the smallest `dist_sq_dual`.
    pub best_dual: Option<usize>,
    pub critical_points: Vec<CriticalDecomposition>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealRankOutput {
    pub degree: usize,
    pub generic_rank: usize,
    /// `EQUALS_GENERIC`, `EXCEEDS_GENERIC`, `ON_BOUNDARY` or `SUBGENERIC_RANK`.
    pub verdict: String,
    /// Rank of the middle catalecticant, only for `SUBGENERIC_RANK`.
    pub catalecticant_rank: Option<usize>,
    pub report: Option<RealRankReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableOutput {
    pub degree: Option<usize>,
    pub failed: usize,
    pub checks: Vec<TableCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LopOutput {
    pub k: usize,
    pub basis: Basis,
    /// Coefficients of `L^(k)(h)` in `basis`, lowest power of `x` first.
    pub coeffs: Vec<f64>,
}

/// 6 significant digits, fixed notation for moderate magnitudes.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..=9).contains(&e) {
        let d = (5 - e).max(0) as usize;
        let s = format!("{x:.d$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" { "0".into() } else { s }
    } else {
        format!("{x:.5e}")
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output records serialize");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let l: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<width$}", width = w[i])).collect();
        let _ = writeln!(out, "{}", l.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| csv_field(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".into(), T::to_string)
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn degrees(lambda: &Partition, fmt: Format) -> String {
    let r: DegreeReport = degree_report(lambda);
    if fmt == Format::Json {
        return json(&r);
    }
    let hooks: Vec<String> = r.dual_hooks.iter().map(|p| format!("{{{p}}}")).collect();
    let rows = vec![
        vec!["partition".into(), r.partition.to_string()],
        vec!["n".into(), r.n.to_string()],
        vec!["degree".into(), r.hilbert_degree.to_string()],
        vec!["dual_degree".into(), opt(&r.dual_degree)],
        vec!["dual_hooks".into(), hooks.join(" ")],
        vec!["ed_special".into(), opt(&r.ed_special)],
        vec!["ed_generic".into(), opt(&r.ed_generic)],
        vec!["multidegree".into(), r.multidegree.as_deref().map_or_else(|| "-".into(), |m| join(m, " "))],
        vec!["polar_classes".into(), r.polar_classes.map_or_else(|| "-".into(), |(a, b)| format!("{a} {b}"))],
    ];
    match fmt {
        Format::Csv => csv(&["field", "value"], &rows),
        _ => table(&["field", "value"], &rows),
    }
}

pub fn run_solve(h: &BinaryForm, lambda: &Partition, opts: &GeneralOptions) -> Result<SolveOutput> {
    let (solver, points, options) = match lambda.hook_part() {
        Some(a) => ("hook", solve_hook(h, a)?, None),
        None => ("general", solve_general(h, lambda, opts)?, Some(*opts)),
    };
    let argmin = |key: fn(&CriticalDecomposition) -> f64| {
        (0..points.len()).min_by(|&i, &j| key(&points[i]).total_cmp(&key(&points[j])))
    };
    Ok(SolveOutput {
        solver: solver.into(),
        partition: lambda.clone(),
        h: h.clone(),
        norm_sq: h.norm_sq(),
        options,
        best_primal: argmin(|d| d.dist_sq_primal),
        best_dual: argmin(|d| d.dist_sq_dual),
        critical_points: points,
    })
}

fn point(p: &ProjectivePoint) -> String {
    format!("({}:{})", sig6(p.s), sig6(p.t))
}

pub fn solve(h: &BinaryForm, lambda: &Partition, opts: &GeneralOptions, fmt: Format) -> Result<String> {
    let out = run_solve(h, lambda, opts)?;
    if fmt == Format::Json {
        return Ok(json(&out));
    }
    let header = ["#", "roots", "alpha", "dist_sq_primal", "dist_sq_dual", "class_primal", "class_dual", "best"];
    let rows: Vec<Vec<String>> = out
        .critical_points
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let roots: Vec<String> =
                d.roots.iter().map(|r| format!("{}^{}", point(&r.point), r.multiplicity)).collect();
            let mut best = Vec::new();
            if out.best_primal == Some(i) {
                best.push("primal");
            }
            if out.best_dual == Some(i) {
                best.push("dual");
            }
            vec![
                i.to_string(),
                roots.join(" "),
                d.alpha.map_or_else(|| "-".into(), sig6),
                sig6(d.dist_sq_primal),
                sig6(d.dist_sq_dual),
                format!("{:?}", d.class_primal).to_uppercase(),
                format!("{:?}", d.class_dual).to_uppercase(),
                best.join("+"),
            ]
        })
        .collect();
    Ok(match fmt {
        Format::Csv => csv(&header, &rows),
        _ => {
            let mut s = format!(
                "{} solver, partition {}, |h|^2 = {}, {} real critical points\n",
                out.solver,
                out.partition,
                sig6(out.norm_sq),
                rows.len()
            );
            s.push_str(&table(&header, &rows));
            s
        }
    })
}

pub fn run_realrank(h: &BinaryForm, tol: f64) -> Result<RealRankOutput> {
    match generic_real_rank_test_with(h, tol) {
        Ok(r) => Ok(RealRankOutput {
            degree: r.degree,
            generic_rank: r.generic_rank,
            verdict: serde_json::to_value(r.verdict)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
            catalecticant_rank: None,
            report: Some(r),
        }),
        Err(Error::SubgenericRank { rank, generic }) => Ok(RealRankOutput {
            degree: h.degree(),
            generic_rank: generic,
            verdict: "SUBGENERIC_RANK".into(),
            catalecticant_rank: Some(rank),
            report: None,
        }),
        Err(e) => Err(e),
    }
}

pub fn realrank(h: &BinaryForm, tol: f64, fmt: Format) -> Result<String> {
    let out = run_realrank(h, tol)?;
    if fmt == Format::Json {
        return Ok(json(&out));
    }
    let rep = out.report.as_ref();
    let component = rep
        .and_then(|r| r.boundary_component)
        .map_or_else(|| "-".into(), |c| format!("{c:?}").to_uppercase());
    let rows = vec![
        vec!["degree".into(), out.degree.to_string()],
        vec!["generic_rank".into(), out.generic_rank.to_string()],
        vec!["verdict".into(), out.verdict.clone()],
        vec!["catalecticant_rank".into(), opt(&out.catalecticant_rank)],
        vec!["boundary_component".into(), component],
        vec!["on_real_rank_boundary".into(), rep.map_or(false, |r| r.on_real_rank_boundary).to_string()],
        vec!["approximate".into(), rep.map_or(false, |r| r.approximate).to_string()],
    ];
    Ok(match fmt {
        Format::Csv => csv(&["field", "value"], &rows),
        _ => table(&["field", "value"], &rows),
    })
}

/// The rendered audit and whether every check passed.
pub fn table_audit(n: Option<usize>, fmt: Format) -> Result<(String, bool)> {
    let checks = verify_table(n)?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    let out = TableOutput { degree: n, failed, checks };
    let text = match fmt {
        Format::Json => json(&out),
        _ => {
            let header = ["partition", "check", "expected", "actual", "status"];
            let rows: Vec<Vec<String>> = out
                .checks
                .iter()
                .map(|c| {
                    let status = if c.pass { "PASS" } else { "FAIL" };
                    vec![c.partition.to_string(), c.check.clone(), c.expected.clone(), c.actual.clone(), status.into()]
                })
                .collect();
            if fmt == Format::Csv {
                csv(&header, &rows)
            } else {
                let mut s = table(&header, &rows);
                let _ = writeln!(s, "{} checks, {} failed", rows.len(), failed);
                s
            }
        }
    };
    Ok((text, failed == 0))
}

pub fn run_lop(h: &BinaryForm, k: usize, basis: Basis) -> Result<LopOutput> {
    let l = h.to_exact().apply_l(k)?.to_f64();
    let coeffs = match basis {
        Basis::Monomial => l.coeffs().to_vec(),
        Basis::Scaled => l.scaled_coeffs(),
    };
    Ok(LopOutput { k, basis, coeffs })
}

pub fn lop(h: &BinaryForm, k: usize, basis: Basis, fmt: Format) -> Result<String> {
    let out = run_lop(h, k, basis)?;
    let n = out.coeffs.len() - 1;
    let rows: Vec<Vec<String>> =
        out.coeffs.iter().enumerate().map(|(i, c)| vec![format!("x^{i} y^{}", n - i), sig6(*c)]).collect();
    Ok(match fmt {
        Format::Json => json(&out),
        Format::Csv => csv(&["monomial", "coefficient"], &rows),
        Format::Table => table(&["monomial", "coefficient"], &rows),
    })
}
