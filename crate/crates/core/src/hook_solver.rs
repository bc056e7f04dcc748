//! Critical points of the distance to a hook locus `{1^(n-a), a}`: forms
//! with an `a`-fold root. Critical decompositions `h = f + g` have
//! `f = (t x - s y)^a g1` and `g = (s x + t y)^(n-a+2) g2`, and the candidate
//! roots `(s : t)` are the real roots of `L^(a-1)(h)`.

use crate::critical::{
    bombieri_weights, Jet, gad_fit, real_root_pairs, conormal_residual,
    orthonormal_cofactor_basis, CriticalDecomposition, MultipleRoot, Residuals,
};
use crate::error::{Error, Result};
use crate::forms::{BinaryForm, ProjectivePoint};
use crate::numerics::linalg::{determinant, lagrange_interpolate, weighted_lstsq};
use crate::numerics::poly::UnivariatePoly;
use crate::numerics::roots::certified_simple_roots;
use crate::partitions::{hook_ed_degrees, Partition};
use crate::scalar::{binomial, Scalar};
use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Relative left-kernel residual above which a root is rejected.
pub const KERNEL_TOL: f64 = 1e-8;

/// Roots closer than this (chordal) are reported once, flagged as merged.
pub const MERGE_TOL: f64 = 1e-8;

/// The linear system whose square matrix `M(s, t)` is singular exactly at
/// critical roots.
#[derive(Clone, Debug, PartialEq)]
pub struct HookSystem {
    pub h: BinaryForm,
    pub a: usize,
}

impl HookSystem {
    pub fn n(&self) -> usize {
        self.h.degree()
    }

    /// Degree of `det M(s, t)`, the generic ED degree of the hook.
    pub fn det_degree(&self) -> usize {
        hook_ed_degrees(self.n(), self.a).expect("validated hook").1 as usize
    }

    /// Rows: the monomial coefficients of `h`; then `(t x - s y)^a x^j
    /// y^(n-a-j)` for `j = 0..=n-a`; then `(s x + t y)^(n-a+2) x^j y^(a-2-j)`
    /// for `j = 0..=a-2`. Columns follow ascending x-degree.
    pub fn matrix_rows<T: Scalar>(h: &[T], a: usize, s: &T, t: &T) -> Vec<Vec<T>> {
        let n = h.len() - 1;
        let l = BinaryForm::linear(t.clone(), -s.clone()).pow(a);
        let m = BinaryForm::linear(s.clone(), t.clone()).pow(n - a + 2);
        let mut rows = vec![h.to_vec()];
        for (band, width) in [(&l, n - a), (&m, a - 2)] {
            for j in 0..=width {
                let mut row = vec![T::zero(); n + 1];
                for (i, c) in band.coeffs().iter().enumerate() {
                    row[i + j] = c.clone();
                }
                rows.push(row);
            }
        }
        rows
    }

    pub fn matrix(&self, root: &ProjectivePoint) -> DMatrix<f64> {
        let rows = Self::matrix_rows(self.h.coeffs(), self.a, &root.s, &root.t);
        let n = self.n();
        DMatrix::from_fn(n + 1, n + 1, |i, j| rows[i][j])
    }
}

pub fn build_hook_system(h: &BinaryForm, a: usize) -> Result<HookSystem> {
    let n = h.degree();
    if a < 2 || a > n {
        return Err(Error::IndexError(format!("hook needs 2 <= a <= n, got a = {a}, n = {n}")));
    }
    if h.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::NumericalFailure("non-finite coefficient".into()));
    }
    Ok(HookSystem { h: h.clone(), a })
}

/// `det M(s, t)` as an exact form in `(s, t)` (variables named `x, y` in the
/// returned form), interpolated from `deg + 1` exact evaluations and checked
/// at one more point.
pub fn hook_determinant_exact(h: &BinaryForm<BigRational>, a: usize) -> Result<BinaryForm<BigRational>> {
    let n = h.degree();
    let deg = hook_ed_degrees(n, a)?.1 as usize;
    let one = BigRational::from_i64(1);
    let eval = |s: &BigRational| determinant(HookSystem::matrix_rows(h.coeffs(), a, s, &one));
    let xs: Vec<BigRational> = (0..=deg as i64).map(BigRational::from_i64).collect();
    let ys: Vec<BigRational> = xs.iter().map(eval).collect();
    let coeffs = lagrange_interpolate(&xs, &ys);
    let check = BigRational::from_i64(deg as i64 + 1);
    let poly = UnivariatePoly::new(coeffs.clone());
    if poly.eval(&check) != eval(&check) {
        return Err(Error::NumericalFailure("determinant exceeds its nominal degree".into()));
    }
    BinaryForm::from_monomial(coeffs)
}

pub fn hook_determinant(sys: &HookSystem) -> Result<BinaryForm> {
    Ok(hook_determinant_exact(&sys.h.to_exact(), sys.a)?.to_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityCheck {
    /// `det M = constant * L^(a-1)(h)(s,t) * (s^2 + t^2)^((n-a+1)(a-1))`,
    /// with `constant = (-1)^(a-1) * C(n, a-1)`.
    pub constant: i128,
    /// Sign of `constant`.
    pub sign: i8,
    /// Max coefficient deviation relative to the largest determinant coefficient.
    pub residual: f64,
}

/// The scalar relating `det M` to `L^(a-1)(h) * (s^2 + t^2)^((n-a+1)(a-1))`:
/// `(-1)^((a-1)(n+1)) * C(n, a-1)`.
pub fn parity_constant(n: usize, a: usize) -> i128 {
    let c = binomial(n, a - 1) as i128;
    if (a - 1) * (n + 1) % 2 == 0 { c } else { -c }
}

/// Verifies the factorization of `det M` through `L^(a-1)(h)`, exactly on
/// the rational value of the coefficients.
pub fn verify_parity_factorization(sys: &HookSystem) -> Result<ParityCheck> {
    let (n, a) = (sys.n(), sys.a);
    let h = sys.h.to_exact();
    let det = hook_determinant_exact(&h, a)?;
    let circle = BinaryForm::from_monomial(vec![
        BigRational::from_i64(1),
        BigRational::from_i64(0),
        BigRational::from_i64(1),
    ])?;
    let constant = parity_constant(n, a);
    let rhs = h
        .apply_l(a - 1)?
        .mul(&circle.pow((n - a + 1) * (a - 1)))
        .scale(&BigRational::from_i64(constant as i64));
    let dmax = det.to_f64().max_abs_coeff();
    if dmax == 0.0 {
        return Err(Error::DegenerateInput("determinant vanishes identically".into()));
    }
    let residual = det.sub(&rhs)?.to_f64().max_abs_coeff() / dmax;
    if residual > 1e-8 {
        return Err(Error::FactorizationMismatch(format!("residual {residual:e}")));
    }
    Ok(ParityCheck { constant, sign: constant.signum() as i8, residual })
}

/// Real projective roots of an exact form with exact multiplicities.
pub fn real_projective_roots_exact(f: &BinaryForm<BigRational>) -> Result<Vec<(ProjectivePoint, usize)>> {
    if f.is_zero() {
        return Err(Error::DegenerateInput("zero form".into()));
    }
    let n = f.degree();
    let c = f.coeffs();
    // Chart with the larger end coefficient keeps the roots bounded.
    let top = c[n].to_f64().abs();
    let bottom = c[0].to_f64().abs();
    let use_t = top >= bottom;
    let poly = if use_t {
        UnivariatePoly::new(c.to_vec())
    } else {
        UnivariatePoly::new(c.iter().rev().cloned().collect())
    };
    let deg = poly.degree().unwrap_or(0);
    let mut out = Vec::new();
    for (idx, factor) in poly.square_free_decomposition().iter().enumerate() {
        if factor.degree().unwrap_or(0) == 0 {
            continue;
        }
        for r in certified_simple_roots(factor, 1e-6)? {
            let p = if use_t { ProjectivePoint::new(r, 1.0)? } else { ProjectivePoint::new(1.0, r)? };
            out.push((p, idx + 1));
        }
    }
    if deg < n {
        let inf = if use_t { ProjectivePoint::new(1.0, 0.0)? } else { ProjectivePoint::new(0.0, 1.0)? };
        out.push((inf, n - deg));
    }
    out.sort_by(|a, b| a.0.angle().total_cmp(&b.0.angle()));
    Ok(out)
}

/// Real roots of `L^(a-1)(h)`, the candidate `a`-fold roots of `f`.
pub fn critical_roots(h: &BinaryForm, a: usize) -> Result<Vec<ProjectivePoint>> {
    let sys = build_hook_system(h, a)?;
    let l = sys.h.to_exact().apply_l(a - 1)?;
    if l.is_zero() {
        return Err(Error::DegenerateInput(format!("L^({}) vanishes on h", a - 1)));
    }
    Ok(real_projective_roots_exact(&l)?.into_iter().map(|(p, _)| p).collect())
}

/// Decomposition at a critical root: `g1` is the apolar projection of `h`
/// onto `(t x - s y)^a * forms`, `f = (t x - s y)^a g1`, `g = h - f`, and
/// `g` is checked to lie on `(s x + t y)^(n-a+2) * forms`.
pub fn decomposition_at_root(sys: &HookSystem, root: &ProjectivePoint) -> Result<CriticalDecomposition> {
    let (n, a) = (sys.n(), sys.a);
    let (s, t) = root.unit();
    let ell = BinaryForm::linear(t, -s);
    let la = ell.pow(a);
    let cols: Vec<BinaryForm> = (0..=n - a).map(|j| la.mul(&BinaryForm::monomial(n - a, j))).collect();
    let amat = DMatrix::from_fn(n + 1, cols.len(), |i, j| cols[j].coeffs()[i]);
    let b = DVector::from_column_slice(sys.h.coeffs());
    let x = weighted_lstsq(&amat, &b, &bombieri_weights(n))?;
    let g1 = BinaryForm::from_monomial(x.as_slice().to_vec())?;
    let f = la.mul(&g1);
    let g = sys.h.sub(&f)?;
    let point = ProjectivePoint::new(s, t)?;
    let roots = vec![MultipleRoot { point, multiplicity: a }];
    let (dual, dual_resid) = gad_fit(&g, &roots)?;
    let hmax = sys.h.max_abs_coeff();
    let kernel = dual_resid / hmax;
    if kernel > KERNEL_TOL {
        return Err(Error::NotCritical(format!("{point}: relative kernel residual {kernel:e}")));
    }
    let g2 = dual[0].clone();
    let hn = sys.h.norm_sq();
    let residuals = Residuals {
        reconstruction: sys.h.sub(&f)?.sub(&g)?.max_abs_coeff() / hmax,
        orthogonality: f.pairing(&g)?.abs() / hn,
        kernel,
        conormal: conormal_residual(&g, &real_root_pairs(&roots), hmax)?,
    };
    let class_primal = primal_jet(&sys.h, a, s, t, &g1).classify_against(&sys.h);
    let class_dual = dual_jet(&sys.h, a, s, t, &g2).classify_against(&sys.h);
    Ok(CriticalDecomposition {
        partition: Partition::hook(n, a)?,
        roots,
        alpha: None,
        dist_sq_primal: g.norm_sq(),
        dist_sq_dual: f.norm_sq(),
        f,
        g,
        primal_cofactor: Some(g1),
        dual_cofactors: vec![g2],
        class_primal,
        class_dual,
        residuals,
        merged: false,
    })
}

/// Jet of `phi -> l^a G` for the distance `D(phi, c) = |h - l^a G|^2`, with `(s, t) = (cos phi, sin phi)`,
/// `l = t x - s y` and `G = sum c_j e_j` with `l^a e_j` orthonormal.
pub(crate) fn primal_jet(h: &BinaryForm, a: usize, s: f64, t: f64, g1: &BinaryForm) -> Jet {
    let n = h.degree();
    let l = BinaryForm::linear(t, -s);
    let m = BinaryForm::linear(s, t);
    let basis = orthonormal_cofactor_basis(&l.pow(a), n - a);
    let af = a as f64;
    let phi = l.pow(a).mul(g1);
    let la1m = l.pow(a - 1).mul(&m);
    let mut d1 = vec![la1m.mul(g1).scale(&af)];
    let dpp = l
        .pow(a - 2)
        .mul(&m.pow(2))
        .mul(g1)
        .scale(&(af * (af - 1.0)))
        .sub(&phi.scale(&af))
        .expect("same degree");
    let k = basis.len() + 1;
    let zero = BinaryForm::zero(n);
    let mut d2 = vec![vec![zero.clone(); k]; k];
    d2[0][0] = dpp;
    for (j, e) in basis.iter().enumerate() {
        d1.push(l.pow(a).mul(e));
        let cross = la1m.mul(e).scale(&af);
        d2[0][j + 1] = cross.clone();
        d2[j + 1][0] = cross;
    }
    Jet { phi, d1, d2 }
}

/// Jet of `phi -> m^b G` for the distance `D(phi, c) = |h - m^b G|^2`, with `m = s x + t y`,
/// `b = n - a + 2` and `G` of degree `a - 2`.
pub(crate) fn dual_jet(h: &BinaryForm, a: usize, s: f64, t: f64, g2: &BinaryForm) -> Jet {
    let n = h.degree();
    let b = n - a + 2;
    let bf = b as f64;
    let l = BinaryForm::linear(t, -s);
    let m = BinaryForm::linear(s, t);
    let basis = orthonormal_cofactor_basis(&m.pow(b), a - 2);
    let phi = m.pow(b).mul(g2);
    let mb1l = m.pow(b - 1).mul(&l).scale(&-bf);
    let mut d1 = vec![mb1l.mul(g2)];
    let dpp = m
        .pow(b - 2)
        .mul(&l.pow(2))
        .mul(g2)
        .scale(&(bf * (bf - 1.0)))
        .sub(&phi.scale(&bf))
        .expect("same degree");
    let k = basis.len() + 1;
    let zero = BinaryForm::zero(n);
    let mut d2 = vec![vec![zero.clone(); k]; k];
    d2[0][0] = dpp;
    for (j, e) in basis.iter().enumerate() {
        d1.push(m.pow(b).mul(e));
        let cross = mb1l.mul(e);
        d2[0][j + 1] = cross.clone();
        d2[j + 1][0] = cross;
    }
    Jet { phi, d1, d2 }
}

/// All real critical decompositions for the hook `{1^(n-a), a}`, sorted by
/// increasing distance to the locus. Numerically coincident roots are
/// reported once with `merged` set.
pub fn solve_hook(h: &BinaryForm, a: usize) -> Result<Vec<CriticalDecomposition>> {
    let sys = build_hook_system(h, a)?;
    if h.is_zero() {
        return Err(Error::DegenerateInput("zero form".into()));
    }
    let roots = critical_roots(h, a)?;
    let mut kept: Vec<(ProjectivePoint, bool)> = Vec::new();
    for r in roots {
        match kept.iter_mut().find(|(p, _)| p.chordal_distance(&r) <= MERGE_TOL) {
            Some(entry) => entry.1 = true,
            None => kept.push((r, false)),
        }
    }
    let mut out = map_roots(&sys, &kept)?;
    out.sort_by(|x, y| x.dist_sq_primal.total_cmp(&y.dist_sq_primal));
    Ok(out)
}

#[cfg(feature = "parallel")]
fn map_roots(sys: &HookSystem, kept: &[(ProjectivePoint, bool)]) -> Result<Vec<CriticalDecomposition>> {
    use rayon::prelude::*;
    kept.par_iter()
        .map(|(p, merged)| decomposition_at_root(sys, p).map(|mut d| { d.merged = *merged; d }))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn map_roots(sys: &HookSystem, kept: &[(ProjectivePoint, bool)]) -> Result<Vec<CriticalDecomposition>> {
    kept.iter()
        .map(|(p, merged)| decomposition_at_root(sys, p).map(|mut d| { d.merged = *merged; d }))
        .collect()
}
/// Eigenvalues of the metric-normalized primal and dual Hessians at a
/// decomposition, for diagnostics.
pub fn hessian_spectra(h: &BinaryForm, d: &CriticalDecomposition) -> Option<(Vec<f64>, Vec<f64>)> {
    let a = d.roots[0].multiplicity;
    let (s, t) = d.root().unit();
    let p = primal_jet(h, a, s, t, d.primal_cofactor.as_ref()?).normalized_spectrum(h)?;
    let q = dual_jet(h, a, s, t, d.dual_cofactors.first()?).normalized_spectrum(h)?;
    Some((p, q))
}
