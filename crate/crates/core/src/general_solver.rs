//! Local search for real critical points of the distance to `Delta_lambda`
//! for arbitrary partitions, via seeded multi-start Levenberg–Marquardt on
//! the gradient of `D(alpha, theta) = |h - alpha * prod l_i^lambda_i|^2`,
//! where `l_i = sin(theta_i) x - cos(theta_i) y` vanishes at
//! `(cos theta_i : sin theta_i)`.
//!
//! No completeness claim: critical points whose basin no start reaches are
//! missed.

pub use crate::critical::gad_decompose;
use crate::critical::{
    conormal_residual, gad_fit, orthonormal_cofactor_basis, real_root_pairs, CriticalDecomposition, Jet,
    MultipleRoot, Residuals,
};
use crate::critical::distance_derivatives;
use crate::error::{Error, Result};
use crate::forms::{BinaryForm, ProjectivePoint};
use crate::partitions::Partition;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Parameters of `f = alpha * prod (t_i x - s_i y)^lambda_i` with each
/// `(s_i : t_i)` in canonical normalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalParams {
    pub alpha: f64,
    pub roots: Vec<MultipleRoot>,
}

impl PrimalParams {
    /// `(alpha', [s_i / t_i])` for `f = alpha' * prod (x - (s_i/t_i) y)^lambda_i`,
    /// when no root lies at `(1 : 0)`.
    pub fn affine_chart(&self) -> Option<(f64, Vec<f64>)> {
        let mut alpha = self.alpha;
        let mut coords = Vec::new();
        for r in &self.roots {
            let a = r.point.affine()?;
            alpha *= r.point.t.powi(r.multiplicity as i32);
            coords.push(a);
        }
        Some((alpha, coords))
    }

    /// Inverse of [`Self::affine_chart`]: `f = alpha * prod (x - c_i y)^lambda_i`.
    pub fn from_affine_chart(alpha: f64, coords: &[f64], lambda: &Partition) -> Result<Self> {
        if coords.len() != lambda.len() {
            return Err(Error::DegreeMismatch(format!("{} roots for {} parts", coords.len(), lambda.len())));
        }
        let mut a = alpha;
        let mut roots = Vec::new();
        for (&c, &m) in coords.iter().zip(lambda.parts()) {
            let point = ProjectivePoint::new(c, 1.0)?;
            a /= point.t.powi(m as i32);
            roots.push(MultipleRoot { point, multiplicity: m });
        }
        Ok(Self { alpha: a, roots })
    }

    /// True when every root is visible in the chart `t = 1`.
    pub fn in_affine_chart(&self) -> bool {
        self.roots.iter().all(|r| r.point.t != 0.0)
    }
}

/// `alpha * prod (t_i x - s_i y)^lambda_i`.
pub fn primal_form(params: &PrimalParams) -> BinaryForm {
    let mut f = BinaryForm::from_monomial(vec![params.alpha]).expect("nonempty");
    for r in &params.roots {
        f = f.mul(&r.point.vanishing_form().pow(r.multiplicity));
    }
    f
}

pub fn distance_sq(h: &BinaryForm, params: &PrimalParams) -> Result<f64> {
    Ok(h.sub(&primal_form(params))?.norm_sq())
}

/// `g = h - f`, the dual witness of a decomposition.
pub fn dual_point(h: &BinaryForm, f: &BinaryForm) -> Result<BinaryForm> {
    h.sub(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for GeneralOptions {
    fn default() -> Self {
        Self { starts: 200, seed: 0, max_iterations: 200 }
    }
}

/// Converged points need `|grad D| <= GRAD_TOL` on the unit-normalized input.
pub const GRAD_TOL: f64 = 1e-10;
/// Candidates whose forms differ by less than this (relative) are merged.
pub const DEDUP_TOL: f64 = 1e-6;
/// Smallest `|sin(theta_i - theta_j)|` for roots counted as distinct.
pub const ROOT_SEPARATION_TOL: f64 = 1e-4;

struct Problem<'a> {
    h: &'a BinaryForm,
    parts: &'a [usize],
}

fn lin(theta: f64) -> (BinaryForm, BinaryForm) {
    let (c, s) = (theta.cos(), theta.sin());
    // l vanishes at (c : s); m = dl/dtheta; dm/dtheta = -l.
    (BinaryForm::linear(s, -c), BinaryForm::linear(c, s))
}

impl Problem<'_> {
    fn n(&self) -> usize {
        self.h.degree()
    }

    /// Jet of `(alpha, theta) -> alpha * prod l_i^lambda_i`.
    fn jet(&self, p: &[f64]) -> Jet {
        let n = self.n();
        let d = self.parts.len();
        let alpha = p[0];
        let lm: Vec<(BinaryForm, BinaryForm)> = p[1..].iter().map(|&t| lin(t)).collect();
        let unit = || BinaryForm::from_monomial(vec![1.0]).unwrap();
        // Product over all factors with per-factor replacements.
        let product = |repl: &dyn Fn(usize) -> Option<BinaryForm>| {
            let mut acc = unit();
            for (i, (l, _)) in lm.iter().enumerate() {
                let fac = repl(i).unwrap_or_else(|| l.pow(self.parts[i]));
                acc = acc.mul(&fac);
            }
            acc
        };
        let lam = |i: usize| self.parts[i] as f64;
        let first = |i: usize| lm[i].0.pow(self.parts[i] - 1).mul(&lm[i].1).scale(&lam(i));
        let pform = product(&|_| None);
        let phi = pform.scale(&alpha);
        let k = d + 1;
        let zero = BinaryForm::zero(n);
        let mut d1 = vec![pform.clone()];
        let mut d2 = vec![vec![zero.clone(); k]; k];
        for i in 0..d {
            let di = product(&|j| (j == i).then(|| first(i)));
            d1.push(di.scale(&alpha));
            d2[0][i + 1] = di.clone();
            d2[i + 1][0] = di;
            let li = self.parts[i];
            let second = |i: usize| {
                let (l, m) = &lm[i];
                let mut s = l.pow(li).scale(&-lam(i));
                if li >= 2 {
                    s = s.add(&l.pow(li - 2).mul(&m.pow(2)).scale(&(lam(i) * (lam(i) - 1.0)))).unwrap();
                }
                s
            };
            d2[i + 1][i + 1] = product(&|j| (j == i).then(|| second(i))).scale(&alpha);
            for j in i + 1..d {
                let dij = product(&|q| {
                    if q == i {
                        Some(first(i))
                    } else if q == j {
                        Some(first(j))
                    } else {
                        None
                    }
                })
                .scale(&alpha);
                d2[i + 1][j + 1] = dij.clone();
                d2[j + 1][i + 1] = dij;
            }
        }
        Jet { phi, d1, d2 }
    }

    fn grad_hess(&self, p: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let j = self.jet(p);
        distance_derivatives(self.h, &j.phi, &j.d1, &j.d2)
    }

    /// Levenberg–Marquardt on `grad D = 0`, so saddles are found as well.
    fn descend(&self, mut p: Vec<f64>, max_it: usize) -> Option<Vec<f64>> {
        let k = p.len();
        let (mut g, mut h) = self.grad_hess(&p);
        let mut mu = 1e-3;
        for _ in 0..max_it {
            if g.norm() <= GRAD_TOL {
                return Some(p);
            }
            let jtj = h.transpose() * &h;
            let rhs = -(h.transpose() * &g);
            let mut accepted = false;
            for _ in 0..30 {
                let a = &jtj + DMatrix::identity(k, k) * (mu * (1.0 + jtj.diagonal().max()));
                let Some(step) = a.cholesky().map(|c| c.solve(&rhs)) else {
                    mu *= 4.0;
                    continue;
                };
                let cand: Vec<f64> = p.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
                let (gc, hc) = self.grad_hess(&cand);
                if gc.norm() < g.norm() {
                    p = cand;
                    g = gc;
                    h = hc;
                    mu = (mu / 3.0).max(1e-15);
                    accepted = true;
                    break;
                }
                mu *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        (g.norm() <= GRAD_TOL).then_some(p)
    }

    /// Angles reduced to `[0, pi)` (flipping alpha for odd parts) and sorted
    /// within runs of equal parts.
    fn canonical(&self, p: &[f64]) -> Vec<f64> {
        let mut alpha = p[0];
        let mut th: Vec<f64> = Vec::with_capacity(p.len() - 1);
        for (i, &t) in p[1..].iter().enumerate() {
            let r = t.rem_euclid(PI);
            let turns = ((t - r) / PI).round() as i64;
            if turns % 2 != 0 && self.parts[i] % 2 == 1 {
                alpha = -alpha;
            }
            th.push(r);
        }
        let mut i = 0;
        while i < th.len() {
            let j = i + self.parts[i..].iter().take_while(|&&q| q == self.parts[i]).count();
            th[i..j].sort_by(f64::total_cmp);
            i = j;
        }
        let mut out = vec![alpha];
        out.extend(th);
        out
    }

    fn roots_distinct(&self, p: &[f64]) -> bool {
        let th = &p[1..];
        (0..th.len()).all(|i| (i + 1..th.len()).all(|j| (th[i] - th[j]).sin().abs() > ROOT_SEPARATION_TOL))
    }

    fn seed_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let th: Vec<f64> = self.parts.iter().map(|_| rng.random::<f64>() * PI).collect();
        let mut p = vec![1.0];
        p.extend(th);
        let pform = self.jet(&p).d1[0].clone();
        let pp = pform.norm_sq();
        p[0] = if pp > 0.0 { self.h.pairing(&pform).unwrap() / pp } else { 1.0 };
        if p[0].abs() < 1e-3 {
            p[0] = 1e-3_f64.copysign(p[0] + 1e-300);
        }
        p
    }

    /// Jet of the dual parametrization `g = sum m_i^(n - lambda_i + 2) G_i`.
    fn dual_jet(&self, roots: &[MultipleRoot], cof: &[BinaryForm]) -> Jet {
        let n = self.n();
        let mut terms = Vec::new();
        for r in roots.iter().filter(|r| r.multiplicity >= 2) {
            let (s, t) = r.point.unit();
            terms.push((BinaryForm::linear(t, -s), BinaryForm::linear(s, t), n + 2 - r.multiplicity, r.multiplicity - 2));
        }
        let mut phi = BinaryForm::zero(n);
        let mut d1 = Vec::new();
        let mut blocks: Vec<(usize, Vec<BinaryForm>, BinaryForm)> = Vec::new();
        for ((l, m, e, dg), gi) in terms.iter().zip(cof) {
            let ef = *e as f64;
            phi = phi.add(&m.pow(*e).mul(gi)).unwrap();
            let mel = m.pow(e - 1).mul(l).scale(&-ef);
            let start = d1.len();
            d1.push(mel.mul(gi));
            let basis = orthonormal_cofactor_basis(&m.pow(*e), *dg);
            let mut cross = Vec::new();
            for b in &basis {
                d1.push(m.pow(*e).mul(b));
                cross.push(mel.mul(b));
            }
            let mut tt = m.pow(*e).mul(gi).scale(&-ef);
            if *e >= 2 {
                tt = tt.add(&m.pow(e - 2).mul(&l.pow(2)).mul(gi).scale(&(ef * (ef - 1.0)))).unwrap();
            }
            blocks.push((start, cross, tt));
        }
        let k = d1.len();
        let mut d2 = vec![vec![BinaryForm::zero(n); k]; k];
        for (start, cross, tt) in blocks {
            d2[start][start] = tt;
            for (j, c) in cross.into_iter().enumerate() {
                d2[start][start + 1 + j] = c.clone();
                d2[start + 1 + j][start] = c;
            }
        }
        Jet { phi, d1, d2 }
    }

    fn package(&self, p: &[f64], scale: f64) -> Result<CriticalDecomposition> {
        let partition = Partition::new(self.parts.to_vec())?;
        let h = self.h.scale(&scale);
        // Rescale alpha to normalized roots: l_i = c_i * (t_i x - s_i y).
        let mut alpha = p[0] * scale;
        let mut roots = Vec::new();
        for (i, &th) in p[1..].iter().enumerate() {
            // Snap so that roots at 0 or infinity are exact.
            let snap = |v: f64| if v.abs() < 1e-13 { 0.0 } else { v };
            let (c, s) = (snap(th.cos()), snap(th.sin()));
            let point = ProjectivePoint::new(c, s)?;
            let ratio = if point.s != 0.0 { c / point.s } else { s / point.t };
            alpha *= ratio.powi(self.parts[i] as i32);
            roots.push(MultipleRoot { point, multiplicity: self.parts[i] });
        }
        let params = PrimalParams { alpha, roots: roots.clone() };
        let f = primal_form(&params);
        let g = dual_point(&h, &f)?;
        let hmax = h.max_abs_coeff();
        // Relative to h: at distance zero g is pure roundoff.
        let (cof, resid) = gad_fit(&g, &roots)?;
        if resid > 1e-6 * hmax {
            return Err(Error::NotOnDual(format!("relative residual {:e}", resid / hmax)));
        }
        let mut fit = BinaryForm::zero(h.degree());
        for (r, gi) in roots.iter().filter(|r| r.multiplicity >= 2).zip(&cof) {
            fit = fit.add(&r.point.orthogonal_form().pow(h.degree() + 2 - r.multiplicity).mul(gi))?;
        }
        let conormal = conormal_residual(&g, &real_root_pairs(&roots), hmax)?;
        if conormal > 1e-6 {
            return Err(Error::NotConormal(format!("residual {conormal:e}")));
        }
        let residuals = Residuals {
            reconstruction: h.sub(&f)?.sub(&g)?.max_abs_coeff() / hmax,
            orthogonality: f.pairing(&g)?.abs() / h.norm_sq(),
            kernel: g.sub(&fit)?.max_abs_coeff() / hmax,
            conormal,
        };
        let primal = Problem { h: &h, parts: self.parts };
        let mut praw = p.to_vec();
        praw[0] *= scale;
        let class_primal = primal.jet(&praw).classify_against(&h);
        let class_dual = primal.dual_jet(&roots, &cof).classify_against(&h);
        Ok(CriticalDecomposition {
            partition,
            roots,
            alpha: Some(alpha),
            dist_sq_primal: g.norm_sq(),
            dist_sq_dual: f.norm_sq(),
            f,
            g,
            primal_cofactor: None,
            dual_cofactors: cof,
            class_primal,
            class_dual,
            residuals,
            merged: false,
        })
    }
}

fn angle_problem<'a>(h: &'a BinaryForm, lambda: &'a Partition, p: &[f64]) -> Result<Problem<'a>> {
    if lambda.size() != h.degree() {
        return Err(Error::SizeMismatch(format!("partition of {} for a form of degree {}", lambda.size(), h.degree())));
    }
    if p.len() != lambda.len() + 1 {
        return Err(Error::DegreeMismatch(format!("{} parameters for {} parts", p.len(), lambda.len())));
    }
    Ok(Problem { h, parts: lambda.parts() })
}

/// `D(alpha, theta)` in the solver's own parametrization `p = [alpha, theta_1, ...]`.
pub fn angle_distance_sq(h: &BinaryForm, lambda: &Partition, p: &[f64]) -> Result<f64> {
    let prob = angle_problem(h, lambda, p)?;
    Ok(h.sub(&prob.jet(p).phi)?.norm_sq())
}

/// Analytic gradient of [`angle_distance_sq`].
pub fn angle_distance_gradient(h: &BinaryForm, lambda: &Partition, p: &[f64]) -> Result<Vec<f64>> {
    let prob = angle_problem(h, lambda, p)?;
    Ok(prob.grad_hess(p).0.as_slice().to_vec())
}

/// Real critical points found from `opts.starts` seeded starts, deduplicated
/// and sorted by increasing distance to the locus. The result depends only
/// on `(h, lambda, opts)`, not on scheduling.
pub fn solve_general(h: &BinaryForm, lambda: &Partition, opts: &GeneralOptions) -> Result<Vec<CriticalDecomposition>> {
    let n = h.degree();
    if lambda.size() != n {
        return Err(Error::SizeMismatch(format!("partition of {} for a form of degree {n}", lambda.size())));
    }
    if lambda.parts()[0] < 2 {
        return Err(Error::DegenerateInput("every form lies on the locus of all simple roots".into()));
    }
    let norm = h.norm_sq().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateInput("zero or non-finite form".into()));
    }
    let hn = h.scale(&(1.0 / norm));
    let prob = Problem { h: &hn, parts: lambda.parts() };
    let run = |j: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(j as u64);
        let p0 = prob.seed_point(&mut rng);
        prob.descend(p0, opts.max_iterations).map(|p| prob.canonical(&p))
    };
    let found = run_starts(opts.starts, &run);
    let mut uniq: Vec<(Vec<f64>, BinaryForm)> = Vec::new();
    for p in found.into_iter().flatten() {
        if p[0].abs() <= 1e-8 || !prob.roots_distinct(&p) {
            continue;
        }
        let f = prob.jet(&p).phi;
        let dup = uniq.iter().any(|(_, g)| {
            f.coeffs().iter().zip(g.coeffs()).all(|(a, b)| (a - b).abs() <= DEDUP_TOL)
        });
        if !dup {
            uniq.push((p, f));
        }
    }
    let mut out = Vec::new();
    for (p, _) in &uniq {
        // Points failing the conormal certificate are not reported.
        if let Ok(d) = prob.package(p, norm) {
            out.push(d);
        }
    }
    if out.is_empty() {
        return Err(Error::NoCriticalPointFound(format!("{} starts", opts.starts)));
    }
    out.sort_by(|a, b| a.dist_sq_primal.total_cmp(&b.dist_sq_primal));
    Ok(out)
}

#[cfg(feature = "parallel")]
fn run_starts(starts: usize, run: &(dyn Fn(usize) -> Option<Vec<f64>> + Sync)) -> Vec<Option<Vec<f64>>> {
    use rayon::prelude::*;
    (0..starts).into_par_iter().map(run).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_starts(starts: usize, run: &(dyn Fn(usize) -> Option<Vec<f64>> + Sync)) -> Vec<Option<Vec<f64>>> {
    (0..starts).map(run).collect()
}
