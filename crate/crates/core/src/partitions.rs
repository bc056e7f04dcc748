//! Partitions, closed-form degree formulas, and the embedded reference table.

use crate::error::{Error, Result};
use crate::scalar::factorial;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest `n` accepted by the combinatorial searches.
pub const MAX_SEARCH_SIZE: usize = 20;

/// Nonincreasing list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("empty".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// Hook `{1^(n-a), a}`.
    pub fn hook(n: usize, a: usize) -> Result<Self> {
        if a < 2 || a > n {
            return Err(Error::IndexError(format!("hook needs 2 <= a <= n, got a = {a}, n = {n}")));
        }
        let mut parts = vec![a];
        parts.extend(std::iter::repeat_n(1, n - a));
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The degree `n = sum of parts`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `m_j`, the number of parts equal to `j`.
    pub fn multiplicity(&self, j: usize) -> usize {
        self.parts.iter().filter(|&&p| p == j).count()
    }

    fn distinct_multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.parts.len() {
            let j = self.parts[i..].iter().take_while(|&&p| p == self.parts[i]).count();
            out.push(j);
            i += j;
        }
        out
    }

    /// `Some(a)` when this is the hook `{1^(n-a), a}` with `a >= 2`.
    pub fn hook_part(&self) -> Option<usize> {
        (self.parts[0] >= 2 && self.parts[1..].iter().all(|&p| p == 1)).then_some(self.parts[0])
    }

    /// Digits without separators, e.g. `3211`; only unambiguous for parts < 10.
    pub fn compact(&self) -> String {
        self.parts.iter().map(|p| p.to_string()).collect()
    }

    fn from_compact(s: &str) -> Result<Self> {
        Self::new(
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::InvalidPartition(s.into())))
                .collect::<Result<_>>()?,
        )
    }

    /// Degree of the locus, `d!/prod m_j! * prod lambda_i` for `d` parts.
    pub fn hilbert_degree(&self) -> u64 {
        let d = self.len();
        let denom: u128 = self.distinct_multiplicities().iter().map(|&m| factorial(m)).product();
        let prod: u128 = self.parts.iter().map(|&p| p as u128).product();
        u64::try_from(factorial(d) / denom * prod).expect("degree fits in u64")
    }

    /// Degree of the dual hypersurface, defined when no part equals 1:
    /// `(d+1)!/(m_2! ... m_p!) * prod (lambda_i - 1)`.
    pub fn oeding_dual_degree(&self) -> Result<u64> {
        if self.multiplicity(1) > 0 {
            return Err(Error::NotHypersurface(self.to_string()));
        }
        let d = self.len();
        let denom: u128 = self.distinct_multiplicities().iter().map(|&m| factorial(m)).product();
        let prod: u128 = self.parts.iter().map(|&p| (p - 1) as u128).product();
        Ok(u64::try_from(factorial(d + 1) / denom * prod).expect("degree fits in u64"))
    }

    /// Hooks `{1^(lambda_i - 2), n - lambda_i + 2}` for each part >= 2; the
    /// dual variety is the join of their duals.
    pub fn dual_hooks(&self) -> Vec<Partition> {
        let n = self.size();
        self.parts
            .iter()
            .filter(|&&p| p >= 2)
            .map(|&p| {
                let mut parts = vec![n - p + 2];
                parts.extend(std::iter::repeat_n(1, p - 2));
                Partition::new(parts).expect("positive parts")
            })
            .collect()
    }

    /// The hook whose locus is dual to this hook's locus.
    pub fn hook_dual(&self) -> Result<Partition> {
        match self.hook_part() {
            Some(a) if a >= 2 => Ok(self.dual_hooks().remove(0)),
            _ => Err(Error::NotHook(self.to_string())),
        }
    }

    /// `lambda'`: every part reduced by one, zeros dropped.
    fn reduced(&self) -> Vec<usize> {
        self.parts.iter().filter(|&&p| p > 1).map(|&p| p - 1).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `3,2,1,1`, whitespace-separated parts, and exponent notation
    /// such as `1^3 4`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        let mut col = 0;
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()) {
            let start = col;
            col += tok.len() + 1;
            if tok.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: 1, column: start + 1, message };
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| err(format!("`{t}` is not a positive integer")))
            };
            match tok.split_once('^') {
                Some((b, e)) => {
                    let (b, e) = (num(b)?, num(e)?);
                    parts.extend(std::iter::repeat_n(b, e));
                }
                None => parts.push(num(tok)?),
            }
        }
        if parts.is_empty() {
            return Err(Error::Parse { line: 1, column: 1, message: "empty partition".into() });
        }
        if parts.contains(&0) {
            return Err(Error::Parse { line: 1, column: 1, message: "parts must be positive".into() });
        }
        Partition::new(parts)
    }
}

/// `(special, generic)` ED degrees of the hook `{1^(n-a), a}`.
pub fn hook_ed_degrees(n: usize, a: usize) -> Result<(u64, u64)> {
    if a < 2 || a > n {
        return Err(Error::IndexError(format!("hook needs 2 <= a <= n, got a = {a}, n = {n}")));
    }
    let (n, a) = (n as i64, a as i64);
    Ok((n as u64, ((2 * a - 1) * n - 2 * (a - 1) * (a - 1)) as u64))
}

/// The two nonzero polar classes of the hook `{1^(n-a), a}`.
pub fn hook_polar_classes(n: usize, a: usize) -> Result<(u64, u64)> {
    if a < 2 || a > n {
        return Err(Error::IndexError(format!("hook needs 2 <= a <= n, got a = {a}, n = {n}")));
    }
    Ok(((a * (n - a + 1)) as u64, ((n - a + 2) * (a - 1)) as u64))
}

/// Whether every part can be placed in some bin so that each bin's load
/// equals its size (`exact`) or is at least its size.
fn assign(parts: &[usize], bins: &[usize], exact: bool) -> bool {
    fn rec(parts: &[usize], loads: &mut [usize], bins: &[usize], exact: bool) -> bool {
        match parts.split_first() {
            None => loads
                .iter()
                .zip(bins)
                .all(|(l, b)| if exact { l == b } else { l >= b }),
            Some((&p, rest)) => {
                let mut tried = Vec::new();
                for i in 0..bins.len() {
                    if exact && loads[i] + p > bins[i] {
                        continue;
                    }
                    // Identical (bin, load) states are interchangeable.
                    if tried.contains(&(bins[i], loads[i])) {
                        continue;
                    }
                    tried.push((bins[i], loads[i]));
                    loads[i] += p;
                    let ok = rec(rest, loads, bins, exact);
                    loads[i] -= p;
                    if ok {
                        return true;
                    }
                }
                false
            }
        }
    }
    let mut loads = vec![0; bins.len()];
    rec(parts, &mut loads, bins, exact)
}

fn check_search_size(p: &Partition) -> Result<()> {
    if p.size() > MAX_SEARCH_SIZE {
        return Err(Error::OutOfRange(format!(
            "partition size {} exceeds {MAX_SEARCH_SIZE}",
            p.size()
        )));
    }
    Ok(())
}

/// `mu` refines `lambda`: the parts of `mu` split into groups whose sums are
/// the parts of `lambda`. Equivalently the locus of `lambda` lies in the
/// locus of `mu`.
pub fn refines(mu: &Partition, lambda: &Partition) -> Result<bool> {
    check_search_size(mu)?;
    check_search_size(lambda)?;
    if mu.size() != lambda.size() {
        return Err(Error::SizeMismatch(format!("{} vs {}", mu.size(), lambda.size())));
    }
    Ok(assign(mu.parts(), lambda.parts(), true))
}

/// Containment of dual varieties: the dual for `lambda` lies in the dual for
/// `mu` iff `|lambda'| <= |mu'|` and `lambda'` can be enlarged part-wise to a
/// partition refined by `mu'`. The dual of the whole space (all parts 1) is
/// empty and contained in everything.
pub fn dual_contains(lambda: &Partition, mu: &Partition) -> Result<bool> {
    check_search_size(lambda)?;
    check_search_size(mu)?;
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!("{} vs {}", lambda.size(), mu.size())));
    }
    let (lr, mr) = (lambda.reduced(), mu.reduced());
    if lr.is_empty() {
        return Ok(true);
    }
    if lr.iter().sum::<usize>() > mr.iter().sum::<usize>() {
        return Ok(false);
    }
    Ok(assign(&mr, &lr, false))
}

/// Degree `(k+1)(n-a+1)^k` of the k-th secant of the hook dual, when
/// `n = k(n-a+2)` makes it a hypersurface.
pub fn secant_hypersurface_degree(k: usize, n: usize, a: usize) -> Result<u64> {
    if a < 2 || a > n || k == 0 || n != k * (n - a + 2) {
        return Err(Error::NotHypersurfaceCase(format!("k = {k}, n = {n}, a = {a}")));
    }
    Ok((k as u64 + 1) * ((n - a + 1) as u64).pow(k as u32))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryComponentDegree {
    pub label: String,
    /// Partition whose dual is the component; `None` for the Hankel factor.
    pub partition: Option<Partition>,
    pub degree: u64,
}

/// Components of the algebraic boundary of the generic-rank region and the
/// degree of each, for `n >= 5`. For even `n` the Hankel hypersurface is
/// listed with `partition = None`; it is not part of that boundary.
pub fn real_rank_boundary_degrees(n: usize) -> Result<Vec<BoundaryComponentDegree>> {
    if n < 5 {
        return Err(Error::OutOfRange(format!("n = {n} < 5")));
    }
    let rep = |a: usize, times: usize, tail: &[usize]| {
        let mut v: Vec<usize> = std::iter::repeat_n(a, times).collect();
        v.extend_from_slice(tail);
        Partition::new(v).expect("positive parts")
    };
    if n % 2 == 1 {
        let k = n.div_ceil(2);
        Ok(vec![BoundaryComponentDegree {
            label: "cusp".into(),
            partition: Some(rep(2, k - 2, &[3])),
            degree: (2 * k * (k - 1)) as u64,
        }])
    } else {
        let k = n / 2;
        let mut out = Vec::new();
        if k >= 3 {
            out.push(BoundaryComponentDegree {
                label: "node".into(),
                partition: Some(rep(2, k - 3, &[3, 3])),
                degree: (2 * k * (k - 1) * (k - 2)) as u64,
            });
        }
        out.push(BoundaryComponentDegree {
            label: "cusp".into(),
            partition: Some(rep(2, k - 2, &[4])),
            degree: (3 * k * (k - 1)) as u64,
        });
        out.push(BoundaryComponentDegree {
            label: "hankel".into(),
            partition: None,
            degree: (k + 1) as u64,
        });
        Ok(out)
    }
}

/// A parsed row of the reference table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub partition: Partition,
    /// `delta_1 .. delta_n`.
    pub multidegree: Vec<u64>,
    pub hooks: Vec<Partition>,
    pub ed_special: u64,
    pub ed_generic: u64,
}

fn parse_row(line: &str) -> TableRow {
    let (lam, rest) = line.split_once(':').expect("row has a partition");
    let fields: Vec<&str> = rest.split(';').map(str::trim).collect();
    let nums = |s: &str| -> Vec<u64> { s.split(',').map(|v| v.trim().parse().expect("integer")).collect() };
    let ed = nums(fields[2]);
    TableRow {
        partition: Partition::from_compact(lam.trim()).expect("valid partition"),
        multidegree: nums(fields[0]),
        hooks: fields[1].split(',').map(|h| Partition::from_compact(h.trim()).expect("valid hook")).collect(),
        ed_special: ed[0],
        ed_generic: ed[1],
    }
}

/// All rows of the reference table, `n` from 2 to 7.
pub fn table_rows() -> Vec<TableRow> {
    crate::table1::ROWS.iter().map(|r| parse_row(r)).collect()
}

pub fn table_row(lambda: &Partition) -> Result<TableRow> {
    table_rows()
        .into_iter()
        .find(|r| &r.partition == lambda)
        .ok_or_else(|| Error::OutOfTable(lambda.to_string()))
}

/// Multidegree `delta_1..delta_n` of the conormal variety (table lookup).
pub fn multidegree(lambda: &Partition) -> Result<Vec<u64>> {
    Ok(table_row(lambda)?.multidegree)
}

/// `(special, generic)` ED degrees: closed form for hooks, table otherwise.
pub fn ed_degrees(lambda: &Partition) -> Result<(u64, u64)> {
    if let Some(a) = lambda.hook_part() {
        return hook_ed_degrees(lambda.size(), a);
    }
    let row = table_row(lambda)?;
    Ok((row.ed_special, row.ed_generic))
}

/// Summary of every degree the library knows for a partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub partition: Partition,
    pub n: usize,
    pub hilbert_degree: u64,
    pub dual_degree: Option<u64>,
    pub dual_hooks: Vec<Partition>,
    pub ed_special: Option<u64>,
    pub ed_generic: Option<u64>,
    pub multidegree: Option<Vec<u64>>,
    pub polar_classes: Option<(u64, u64)>,
}

pub fn degree_report(lambda: &Partition) -> DegreeReport {
    let ed = ed_degrees(lambda).ok();
    DegreeReport {
        partition: lambda.clone(),
        n: lambda.size(),
        hilbert_degree: lambda.hilbert_degree(),
        dual_degree: lambda.oeding_dual_degree().ok(),
        dual_hooks: lambda.dual_hooks(),
        ed_special: ed.map(|e| e.0),
        ed_generic: ed.map(|e| e.1),
        multidegree: multidegree(lambda).ok(),
        polar_classes: lambda.hook_part().and_then(|a| hook_polar_classes(lambda.size(), a).ok()),
    }
}

/// One consistency check of a table row against the closed forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCheck {
    pub partition: Partition,
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Cross-checks every row of degree `n` (all rows when `None`): leftmost
/// nonzero multidegree against the locus degree, rightmost against the dual
/// degree, the multidegree sum against the generic ED degree, the hooks
/// column, and for hooks the ED and polar-class formulas.
pub fn verify_table(n: Option<usize>) -> Result<Vec<TableCheck>> {
    if let Some(n) = n {
        if !(2..=7).contains(&n) {
            return Err(Error::OutOfTable(format!("n = {n}")));
        }
    }
    let mut out = Vec::new();
    for row in table_rows().into_iter().filter(|r| n.is_none_or(|n| r.partition.size() == n)) {
        let lam = row.partition.clone();
        let mut push = |check: &str, expected: String, actual: String| {
            out.push(TableCheck {
                partition: lam.clone(),
                check: check.into(),
                pass: expected == actual,
                expected,
                actual,
            });
        };
        push("multidegree length", lam.size().to_string(), row.multidegree.len().to_string());
        let first = row.multidegree.iter().find(|&&d| d != 0).copied().unwrap_or(0);
        let last = row.multidegree.iter().rev().find(|&&d| d != 0).copied().unwrap_or(0);
        push("locus degree", lam.hilbert_degree().to_string(), first.to_string());
        if let Ok(dd) = lam.oeding_dual_degree() {
            push("dual degree", dd.to_string(), last.to_string());
        }
        push(
            "multidegree sum",
            row.ed_generic.to_string(),
            row.multidegree.iter().sum::<u64>().to_string(),
        );
        let hooks: Vec<String> = lam.dual_hooks().iter().map(Partition::compact).collect();
        let table_hooks: Vec<String> = row.hooks.iter().map(Partition::compact).collect();
        push("dual hooks", hooks.join(","), table_hooks.join(","));
        if let Some(a) = lam.hook_part() {
            let (s, g) = hook_ed_degrees(lam.size(), a)?;
            push("hook ED degrees", format!("{s},{g}"), format!("{},{}", row.ed_special, row.ed_generic));
            let (p1, p2) = hook_polar_classes(lam.size(), a)?;
            let nz: Vec<String> = row.multidegree.iter().filter(|&&d| d != 0).map(u64::to_string).collect();
            push("hook polar classes", format!("{p1},{p2}"), nz.join(","));
        }
    }
    Ok(out)
}
