//! Polynomial root finding: balanced companion eigenvalues, Newton polish,
//! and Sturm certification of real root counts.

use super::poly::{isolate_real_roots, refine_root, UnivariatePoly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_rational::BigRational;

/// Diagonal similarity scaling toward equal row and column norms.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix = 2.0_f64;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / radix {
                f *= radix;
                cc *= radix;
                rr /= radix;
            }
            while cc >= rr * radix {
                f /= radix;
                cc /= radix;
                rr *= radix;
            }
            if (cc + rr) < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Aberth–Ehrlich simultaneous iteration from a perturbed circle.
fn aberth(c: &[f64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lc = c[d].abs();
    let radius = 1.0 + c[..d].iter().fold(0.0_f64, |a, v| a.max(v.abs() / lc));
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(0.5 * radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for i in 0..d {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..d).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// All complex roots (with multiplicity) of a nonconstant polynomial.
pub fn complex_roots(p: &UnivariatePoly<f64>) -> Vec<Complex64> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let c = p.coeffs();
    // Roots at zero are split off exactly.
    let zeros = c.iter().take_while(|v| **v == 0.0).count();
    let core = &c[zeros..];
    let d = core.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if d == 0 {
        return roots;
    }
    let lc = core[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -core[i] / lc;
    }
    balance(&mut m);
    // Unshifted Francis iterations can cycle (e.g. on `x^d + c`); fall back
    // to simultaneous iteration then.
    let eig: Vec<Complex64> = match Schur::try_new(m, f64::EPSILON, 100 * d.max(10)) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(core),
    };
    for z0 in eig.iter() {
        let mut z = *z0;
        let (mut pz, _) = horner(core, z);
        for _ in 0..8 {
            let (_, dpz) = horner(core, z);
            if dpz.norm() == 0.0 {
                break;
            }
            let cand = z - pz / dpz;
            let (pc, _) = horner(core, cand);
            if pc.norm() < pz.norm() {
                z = cand;
                pz = pc;
            } else {
                break;
            }
        }
        roots.push(z);
    }
    roots
}

/// Real Newton polish of a simple root, confined to `[lo, hi]`.
fn polish_real(p: &UnivariatePoly<f64>, x0: f64, lo: f64, hi: f64) -> f64 {
    let dp = p.derivative();
    let mut x = x0;
    let mut px = p.eval(&x).abs();
    for _ in 0..20 {
        let d = dp.eval(&x);
        if d == 0.0 {
            break;
        }
        let cand = x - p.eval(&x) / d;
        if !(lo..=hi).contains(&cand) {
            break;
        }
        let pc = p.eval(&cand).abs();
        if pc < px {
            x = cand;
            px = pc;
        } else {
            break;
        }
    }
    x
}

/// Distinct real roots of `p` with multiplicities, ascending.
///
/// Multiplicities come from an exact square-free decomposition of the
/// coefficients' rational values. Each square-free factor is solved through
/// its companion matrix; the number of real roots kept is certified against
/// the exact Sturm count of that factor. Roots satisfy
/// `|q(r)| <= tol * max|q_i|` for their square-free factor `q` whenever
/// float evaluation allows it.
pub fn real_roots(p: &UnivariatePoly<f64>, tol: f64) -> Result<Vec<(f64, usize)>> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("zero polynomial".into()));
    }
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::NumericalFailure("non-finite coefficient".into()));
    }
    let exact = p.to_exact();
    let mut out = Vec::new();
    for (idx, factor) in exact.square_free_decomposition().iter().enumerate() {
        let mult = idx + 1;
        if factor.degree().unwrap_or(0) == 0 {
            continue;
        }
        for r in certified_simple_roots(factor, tol)? {
            out.push((r, mult));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Real roots of a square-free exact polynomial.
pub fn certified_simple_roots(factor: &UnivariatePoly<BigRational>, tol: f64) -> Result<Vec<f64>> {
    let intervals = isolate_real_roots(factor);
    let qf = factor.to_f64();
    let scale = qf.max_abs_coeff();
    let cands: Vec<f64> = complex_roots(&qf)
        .into_iter()
        .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    let mut roots = Vec::with_capacity(intervals.len());
    for (lo, hi) in &intervals {
        let (lof, hif) = (lo.to_f64(), hi.to_f64());
        let inside: Vec<f64> = cands
            .iter()
            .copied()
            .filter(|x| *x >= lof - 1e-12 * (1.0 + lof.abs()) && *x <= hif + 1e-12 * (1.0 + hif.abs()))
            .collect();
        let r = if lo == hi {
            lof
        } else if inside.len() == 1 {
            polish_real(&qf, inside[0], lof, hif)
        } else {
            // Float eigenvalues disagree with the exact isolation; fall back
            // to exact bisection down to float resolution.
            let w = (hi.clone() - lo.clone()).to_f64();
            let target = (1e-17 * (1.0 + lof.abs().max(hif.abs()))).min(w);
            let width = crate::scalar::rational_from_f64(target);
            let (a, b) = refine_root(factor, lo.clone(), hi.clone(), &width);
            0.5 * (a.to_f64() + b.to_f64())
        };
        let resid = qf.eval(&r).abs();
        let dq = qf.derivative().eval(&r).abs();
        // Residual must be explainable by a root error within tolerance.
        if resid > tol * scale && resid > dq * tol * (1.0 + r.abs()) {
            return Err(Error::CertificationFailure(format!(
                "residual {resid:e} at root {r}"
            )));
        }
        roots.push(r);
    }
    Ok(roots)
}
