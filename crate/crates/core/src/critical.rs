//! Critical points of the squared distance and their certificates.

use crate::error::{Error, Result};
use crate::forms::{cluster_roots, BinaryForm, ProjectivePoint};
use crate::numerics::linalg::{classify_stationary, weighted_lstsq};
use crate::numerics::StationaryClass;
use crate::partitions::Partition;
use crate::scalar::binomial;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative eigenvalue size below which a Hessian counts as singular.
pub const HESSIAN_SINGULAR_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipleRoot {
    pub point: ProjectivePoint,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `max|h - f - g| / max|h|`.
    pub reconstruction: f64,
    /// `|<f, g>| / <h, h>`.
    pub orthogonality: f64,
    /// Relative defect of the dual side: `max|g - sum m_i^e_i g_i| / max|h|`.
    pub kernel: f64,
    /// Size of `prod l_i^(lambda_i - 1)(d) g` relative to `max|h|`.
    pub conormal: f64,
}

/// A decomposition `h = f + g` with `f` on the locus and `g` on its dual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalDecomposition {
    pub partition: Partition,
    /// Prescribed multiple roots of `f`. For a hook this is the single
    /// `a`-fold root; `f` may have further simple roots.
    pub roots: Vec<MultipleRoot>,
    /// `f = alpha * prod (t_i x - s_i y)^lambda_i` for the normalized roots;
    /// absent for hooks, where `f = (t x - s y)^a * primal_cofactor`.
    pub alpha: Option<f64>,
    pub f: BinaryForm,
    pub g: BinaryForm,
    pub primal_cofactor: Option<BinaryForm>,
    /// `g = sum_i (s_i x + t_i y)^(n - lambda_i + 2) * dual_cofactors[i]`,
    /// one entry per root with multiplicity at least 2.
    pub dual_cofactors: Vec<BinaryForm>,
    /// `<g, g>`, the squared distance from `h` to `f`.
    pub dist_sq_primal: f64,
    /// `<f, f>`, the squared distance from `h` to `g`.
    pub dist_sq_dual: f64,
    pub class_primal: StationaryClass,
    pub class_dual: StationaryClass,
    pub residuals: Residuals,
    /// Set when two candidate roots coincided numerically.
    pub merged: bool,
}

impl CriticalDecomposition {
    /// The first prescribed root (the `a`-fold root for hooks).
    pub fn root(&self) -> ProjectivePoint {
        self.roots[0].point
    }
}

/// Bombieri weights `1 / C(n, i)` of the monomial coordinates.
pub(crate) fn bombieri_weights(n: usize) -> Vec<f64> {
    (0..=n).map(|i| 1.0 / binomial(n, i) as f64).collect()
}

/// Unit-norm monomial basis `sqrt(C(d, j)) x^j y^(d-j)` of degree `d`.
pub(crate) fn unit_basis(d: usize) -> Vec<BinaryForm> {
    (0..=d)
        .map(|j| BinaryForm::<f64>::monomial(d, j).scale(&(binomial(d, j) as f64).sqrt()))
        .collect()
}

/// Basis `e_j` of forms of degree `d` such that `prefix * e_j` are
/// apolar-orthonormal in degree `deg prefix + d`.
pub(crate) fn orthonormal_cofactor_basis(prefix: &BinaryForm, d: usize) -> Vec<BinaryForm> {
    let mono: Vec<BinaryForm> = (0..=d).map(|j| BinaryForm::<f64>::monomial(d, j)).collect();
    let imgs: Vec<BinaryForm> = mono.iter().map(|e| prefix.mul(e)).collect();
    let k = mono.len();
    let gram = DMatrix::from_fn(k, k, |i, j| imgs[i].pairing(&imgs[j]).unwrap());
    match gram.clone().cholesky() {
        Some(ch) => {
            // Columns of L^{-T} map monomials to an orthonormal family.
            let linv = ch.l().try_inverse().expect("triangular factor is invertible");
            let t = linv.transpose();
            (0..k)
                .map(|c| {
                    let mut acc = BinaryForm::zero(d);
                    for (r, e) in mono.iter().enumerate() {
                        acc = acc.add(&e.scale(&t[(r, c)])).unwrap();
                    }
                    acc
                })
                .collect()
        }
        None => unit_basis(d),
    }
}

/// Gradient and Hessian of `D(p) = <h - phi(p), h - phi(p)>` from the first
/// and second derivatives of `phi`.
pub(crate) fn distance_derivatives(
    h: &BinaryForm,
    phi: &BinaryForm,
    d1: &[BinaryForm],
    d2: &[Vec<BinaryForm>],
) -> (DVector<f64>, DMatrix<f64>) {
    let r = h.sub(phi).expect("same degree");
    let k = d1.len();
    let grad = DVector::from_iterator(k, d1.iter().map(|d| -2.0 * r.pairing(d).unwrap()));
    let mut hess = DMatrix::zeros(k, k);
    for p in 0..k {
        for q in p..k {
            let v = 2.0 * d1[p].pairing(&d1[q]).unwrap() - 2.0 * r.pairing(&d2[p][q]).unwrap();
            hess[(p, q)] = v;
            hess[(q, p)] = v;
        }
    }
    (grad, hess)
}

/// First derivatives, second derivatives, and value of a parametrized form.
pub(crate) struct Jet {
    pub phi: BinaryForm,
    pub d1: Vec<BinaryForm>,
    pub d2: Vec<Vec<BinaryForm>>,
}

impl Jet {
    pub fn classify_against(&self, h: &BinaryForm) -> StationaryClass {
        let (_, hess) = distance_derivatives(h, &self.phi, &self.d1, &self.d2);
        classify(&self.d1, &hess)
    }

    pub fn normalized_spectrum(&self, h: &BinaryForm) -> Option<Vec<f64>> {
        let (_, hess) = distance_derivatives(h, &self.phi, &self.d1, &self.d2);
        metric_normalized_hessian(&self.d1, &hess).map(|m| crate::numerics::linalg::hessian_spectrum(&m))
    }
}

/// Hessian expressed in coordinates orthonormal for the first fundamental
/// form `G_pq = 2 <d_p phi, d_q phi>`. Congruence keeps the signature, and
/// the eigenvalues become `1 - kappa` for the normal curvatures `kappa`
/// scaled by the residual, independent of how parameters are scaled.
/// `None` when the parametrization is not immersive.
pub(crate) fn metric_normalized_hessian(d1: &[BinaryForm], hess: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let k = d1.len();
    let g = DMatrix::from_fn(k, k, |p, q| 2.0 * d1[p].pairing(&d1[q]).unwrap());
    let gmax = g.diagonal().max();
    let ch = g.cholesky()?;
    let l = ch.l();
    if l.diagonal().iter().any(|v| v * v <= 1e-14 * gmax) {
        return None;
    }
    let linv = l.try_inverse()?;
    Some(&linv * hess * linv.transpose())
}

pub(crate) fn classify(d1: &[BinaryForm], hess: &DMatrix<f64>) -> StationaryClass {
    match metric_normalized_hessian(d1, hess) {
        Some(hn) => classify_stationary(&hn, HESSIAN_SINGULAR_TOL),
        None => StationaryClass::Undecided,
    }
}

/// `g = sum_i m_i^(n - lambda_i + 2) * g_i` with `deg g_i = lambda_i - 2`,
/// fitted in the apolar norm. Parts equal to 1 contribute nothing.
pub fn gad_decompose(g: &BinaryForm, roots: &[MultipleRoot], tol: f64) -> Result<Vec<BinaryForm>> {
    let (cof, resid) = gad_fit(g, roots)?;
    let scale = g.max_abs_coeff().max(f64::MIN_POSITIVE);
    if resid > tol * scale {
        return Err(Error::NotOnDual(format!("relative residual {:e}", resid / scale)));
    }
    Ok(cof)
}

/// Least-squares cofactors and the max-norm residual.
pub(crate) fn gad_fit(g: &BinaryForm, roots: &[MultipleRoot]) -> Result<(Vec<BinaryForm>, f64)> {
    let n = g.degree();
    let mut cols: Vec<BinaryForm> = Vec::new();
    let mut layout = Vec::new();
    for r in roots {
        let lam = r.multiplicity;
        if lam < 2 {
            continue;
        }
        if lam > n + 1 {
            return Err(Error::DegreeMismatch(format!("part {lam} exceeds degree {n}")));
        }
        let e = n + 2 - lam;
        let me = r.point.orthogonal_form().pow(e);
        layout.push(lam - 2);
        for j in 0..=lam - 2 {
            cols.push(me.mul(&BinaryForm::monomial(lam - 2, j)));
        }
    }
    if cols.is_empty() {
        return Ok((Vec::new(), g.max_abs_coeff()));
    }
    let a = DMatrix::from_fn(n + 1, cols.len(), |i, j| cols[j].coeffs()[i]);
    let b = DVector::from_column_slice(g.coeffs());
    let x = weighted_lstsq(&a, &b, &bombieri_weights(n))?;
    let fit = &a * &x;
    let resid = (b - fit).amax();
    let mut out = Vec::new();
    let mut k = 0;
    for d in layout {
        out.push(BinaryForm::from_monomial(x.as_slice()[k..k + d + 1].to_vec())?);
        k += d + 1;
    }
    Ok((out, resid))
}

fn cmul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Size of `prod l_i^(m_i - 1)(d/dx, d/dy) g`, where `l_i` vanishes at the
/// complex root `p_i = (s_i : t_i)` of multiplicity `m_i`, relative to what
/// the operator does to a form of max coefficient `reference`.
pub(crate) fn conormal_residual(g: &BinaryForm, roots: &[([Complex64; 2], usize)], reference: f64) -> Result<f64> {
    // Operator coefficients in ascending x-degree, complex then real part.
    let mut op = vec![Complex64::new(1.0, 0.0)];
    for (p, m) in roots {
        // Divide by the larger coordinate: real roots become real and
        // conjugate roots stay conjugate.
        let piv = if p[0].norm() >= p[1].norm() { p[0] } else { p[1] };
        let lin = [-p[0] / piv, p[1] / piv]; // t x - s y
        for _ in 1..*m {
            op = cmul(&op, &lin);
        }
    }
    let deg = op.len() - 1;
    let n = g.degree();
    if deg > n {
        return Err(Error::DegreeMismatch(format!("operator degree {deg} exceeds {n}")));
    }
    let imag = op.iter().fold(0.0_f64, |m, c| m.max(c.im.abs()));
    let real = op.iter().fold(0.0_f64, |m, c| m.max(c.re.abs()));
    if imag > 1e-8 * real.max(1.0) {
        return Err(Error::NumericalFailure("operator is not real".into()));
    }
    let opf = BinaryForm::from_monomial(op.iter().map(|c| c.re).collect())?;
    let res = crate::forms::apply_apolarity_operator(&opf, g)?;
    let falling: f64 = (n - deg + 1..=n).map(|i| i as f64).product();
    let scale = reference * falling * 2f64.powi(deg as i32);
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(res.max_abs_coeff() / scale)
}

/// Conormal membership test: `f` has root structure `lambda`, the operator
/// `prod l_i^(lambda_i - 1)` built from its roots annihilates `g`, and `f`
/// and `g` are apolar-orthogonal, all within `tol`.
pub fn verify_conormal(f: &BinaryForm, g: &BinaryForm, lambda: &Partition, tol: f64) -> Result<bool> {
    if f.degree() != g.degree() || lambda.size() != f.degree() {
        return Err(Error::DegreeMismatch(format!(
            "forms of degree {} and {}, partition of {}",
            f.degree(),
            g.degree(),
            lambda.size()
        )));
    }
    let clusters = cluster_roots(&f.complex_projective_roots()?, 1e-6)?;
    let mut mults: Vec<usize> = clusters.iter().map(|c| c.multiplicity).collect();
    mults.sort_unstable_by(|a, b| b.cmp(a));
    if mults != lambda.parts() {
        return Ok(false);
    }
    let roots: Vec<([Complex64; 2], usize)> =
        clusters.iter().map(|c| (polish_multiple_root(f, c.point, c.multiplicity), c.multiplicity)).collect();
    let res = conormal_residual(g, &roots, g.max_abs_coeff())?;
    let pair = f.pairing(g)?.abs();
    let orth = pair <= tol * (f.norm_sq() * g.norm_sq()).sqrt();
    Ok(res <= tol && orth)
}

/// Newton on the `(m-1)`-th derivative, where an `m`-fold root is simple.
/// Cluster centres of multiple roots are only accurate to about
/// `eps^(1/m)`; this restores full precision.
fn polish_multiple_root(f: &BinaryForm, p: [Complex64; 2], m: usize) -> [Complex64; 2] {
    if m < 2 {
        return p;
    }
    let c = f.coeffs();
    // Affine chart with the larger coordinate set to 1.
    let in_t = p[1].norm() >= p[0].norm();
    let coeffs: Vec<f64> = if in_t { c.to_vec() } else { c.iter().rev().copied().collect() };
    let mut d = coeffs;
    for _ in 1..m {
        d = d.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect();
    }
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &a in d.iter().rev() {
            dv = dv * z + v;
            v = v * z + a;
        }
        (v, dv)
    };
    let start = if in_t { p[0] / p[1] } else { p[1] / p[0] };
    let mut z = start;
    for _ in 0..8 {
        let (v, dv) = eval(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    // Keep the cluster centre if Newton wandered off.
    if (z - start).norm() > 1e-3 * (1.0 + start.norm()) {
        return p;
    }
    let one = Complex64::new(1.0, 0.0);
    let q = if in_t { [z, one] } else { [one, z] };
    let nrm = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
    [q[0] / nrm, q[1] / nrm]
}

pub(crate) fn real_root_pairs(roots: &[MultipleRoot]) -> Vec<([Complex64; 2], usize)> {
    roots
        .iter()
        .map(|r| {
            let (s, t) = r.point.unit();
            ([Complex64::new(s, 0.0), Complex64::new(t, 0.0)], r.multiplicity)
        })
        .collect()
}
