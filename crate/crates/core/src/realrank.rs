//! Real-rank certification against the generic complex rank `ceil((n+1)/2)`.
//!
//! Odd `n = 2k - 1`: the apolar ideal has a unique generator `q` of degree
//! `k`, and `h` has real rank `k` exactly when `q` is real-rooted. Even
//! `n = 2k`: the degree `k + 1` part of the apolar ideal is a pencil, and
//! `h` has real rank `k + 1` exactly when some member is real-rooted.
//!
//! Everything is decided exactly on the rational value of the float input.
//! Apolar forms use the variables `(u, v)`, with `coeffs[p]` the coefficient
//! of `u^p v^(deg - p)`; a summand `(alpha x + beta y)^n` of `h` puts a root
//! of `q` at `(alpha : beta)`.

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, ProjectivePoint};
use crate::hook_solver::real_projective_roots_exact;
use crate::numerics::linalg::{determinant, lagrange_interpolate, nullspace, rank};
use crate::numerics::poly::{resultant_formal, sturm_count_exact, Bound, UnivariatePoly};
use crate::partitions::Partition;
use crate::scalar::{rational_from_f64, Scalar};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    EqualsGeneric,
    ExceedsGeneric,
    OnBoundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundaryComponent {
    /// A pencil member with a triple root.
    Cusp,
    /// A pencil member with two double roots.
    Node,
    /// Pencil members share a factor; not part of the real-rank boundary.
    Hankel,
}

impl BoundaryComponent {
    /// Partition of the coincident root locus whose dual carries this
    /// component, for degree `n >= 5`.
    pub fn partition(self, n: usize) -> Option<Partition> {
        let k = n.div_ceil(2);
        let twos = |m: usize, tail: &[usize]| {
            let mut v = vec![2; m];
            v.extend_from_slice(tail);
            Partition::new(v).ok()
        };
        match (self, n % 2) {
            (Self::Cusp, 1) => twos(k.checked_sub(2)?, &[3]),
            (Self::Cusp, _) => twos((n / 2).checked_sub(2)?, &[4]),
            (Self::Node, 0) => twos((n / 2).checked_sub(3)?, &[3, 3]),
            _ => None,
        }
    }

    pub fn on_real_rank_boundary(self) -> bool {
        self != Self::Hankel
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    /// `q` for odd degree, the pencil basis for even degree.
    pub apolar_forms: Vec<BinaryForm>,
    /// Discriminants of `q` (odd) or of each tested pencil member (even).
    pub discriminants: Vec<f64>,
    /// Distinct real roots of each tested form, counting `(1 : 0)`.
    pub sturm_counts: Vec<usize>,
    /// `disc(s q1 + t q2)` as a form in `(s, t)`, for even degree.
    pub pencil_discriminant: Option<BinaryForm>,
    /// Real roots of the pencil discriminant.
    pub transition_points: Vec<ProjectivePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealRankReport {
    pub degree: usize,
    pub generic_rank: usize,
    pub verdict: Verdict,
    pub boundary_component: Option<BoundaryComponent>,
    /// False for `HANKEL`, which is reported but lies off the boundary.
    pub on_real_rank_boundary: bool,
    /// Set when a boundary decision rests on floating-point clustering.
    pub approximate: bool,
    pub witnesses: Witnesses,
}

/// Default relative tolerance on `|disc(q)|` for the advisory boundary test.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// The `rows x (n + 2 - rows)` Hankel matrix of scaled coefficients.
pub fn catalecticant<T: Scalar>(h: &BinaryForm<T>, rows: usize) -> Result<Vec<Vec<T>>> {
    let n = h.degree();
    if rows == 0 || rows > n + 1 {
        return Err(Error::OutOfRange(format!("{rows} rows for degree {n}")));
    }
    let cols = n + 2 - rows;
    let a = h.scaled_coeffs();
    Ok((0..rows).map(|i| (0..cols).map(|j| a[i + j].clone()).collect()).collect())
}

fn to_q(h: &BinaryForm) -> BinaryForm<Q> {
    h.to_exact()
}

fn odd_k(n: usize) -> Result<usize> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::DegreeMismatch(format!("odd degree >= 3 expected, got {n}")));
    }
    Ok(n.div_ceil(2))
}

fn even_k(n: usize) -> Result<usize> {
    if n % 2 == 1 || n < 2 {
        return Err(Error::DegreeMismatch(format!("even degree >= 2 expected, got {n}")));
    }
    Ok(n / 2)
}

/// Degree-`k` generator of the apolar ideal of `h` for `n = 2k - 1`, from the
/// signed maximal minors of the `k x (k + 1)` catalecticant.
pub fn apolar_generator_odd_exact(h: &BinaryForm<Q>) -> Result<BinaryForm<Q>> {
    let k = odd_k(h.degree())?;
    let cat = catalecticant(h, k)?;
    let r = rank(&cat);
    if r < k {
        return Err(Error::SubgenericRank { rank: r, generic: k });
    }
    let q: Vec<Q> = (0..=k)
        .map(|p| {
            let minor: Vec<Vec<Q>> = cat
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != p).map(|(_, v)| v.clone()).collect())
                .collect();
            let d = determinant(minor);
            if p % 2 == 0 { d } else { -d }
        })
        .collect();
    BinaryForm::from_monomial(q)
}

pub fn apolar_generator_odd(h: &BinaryForm) -> Result<BinaryForm> {
    Ok(apolar_generator_odd_exact(&to_q(h))?.to_f64())
}

/// Basis of the degree `k + 1` apolar pencil for `n = 2k`, in reduced
/// echelon form (deterministic, exact).
pub fn apolar_pencil_even_exact(h: &BinaryForm<Q>) -> Result<(BinaryForm<Q>, BinaryForm<Q>)> {
    let k = even_k(h.degree())?;
    let cat = catalecticant(h, k)?;
    let ker = nullspace(&cat);
    if ker.len() != 2 {
        return Err(Error::SubgenericRank { rank: k + 2 - ker.len(), generic: k });
    }
    let mut it = ker.into_iter();
    let q1 = BinaryForm::from_monomial(it.next().unwrap())?;
    let q2 = BinaryForm::from_monomial(it.next().unwrap())?;
    Ok((q1, q2))
}

/// The pencil basis orthonormalized (Gram–Schmidt on coefficient vectors,
/// in echelon order).
pub fn apolar_pencil_even(h: &BinaryForm) -> Result<(BinaryForm, BinaryForm)> {
    let (q1, q2) = apolar_pencil_even_exact(&to_q(h))?;
    let (a, b) = (q1.to_f64(), q2.to_f64());
    let dot = |x: &BinaryForm, y: &BinaryForm| x.coeffs().iter().zip(y.coeffs()).map(|(p, q)| p * q).sum::<f64>();
    let e1 = a.scale(&(1.0 / dot(&a, &a).sqrt()));
    let r = b.sub(&e1.scale(&dot(&e1, &b)))?;
    let e2 = r.scale(&(1.0 / dot(&r, &r).sqrt()));
    Ok((e1, e2))
}

/// `(-1)^(m(m-1)/2) Res(F_u, F_v) / m^(m-2)`, which agrees with the
/// discriminant of `F(u, 1)` whenever the `u^m` coefficient is nonzero and
/// accounts for roots at `(1 : 0)` otherwise.
pub fn form_discriminant<T: Scalar>(f: &BinaryForm<T>) -> T {
    let m = f.degree();
    if m < 2 {
        return T::one();
    }
    let (fu, fv) = (f.partial_x(), f.partial_y());
    let res = resultant_formal(fu.coeffs(), m - 1, fv.coeffs(), m - 1);
    let sign = if (m * (m - 1) / 2) % 2 == 0 { T::one() } else { -T::one() };
    let mut denom = T::one();
    for _ in 2..m {
        denom = denom * T::from_i64(m as i64);
    }
    sign * res / denom
}

/// Number of distinct real projective roots, counting `(1 : 0)`.
pub fn distinct_real_roots_exact(q: &BinaryForm<Q>) -> usize {
    let p = UnivariatePoly::new(q.coeffs().to_vec());
    let finite = sturm_count_exact(&p, &Bound::NegInf, &Bound::PosInf);
    let at_infinity = usize::from(p.degree().unwrap_or(0) < q.degree());
    finite + at_infinity
}

/// Square-free with all roots real, counting a simple root at `(1 : 0)`.
pub fn is_real_rooted_exact(q: &BinaryForm<Q>) -> bool {
    !q.is_zero() && !form_discriminant(q).is_zero() && distinct_real_roots_exact(q) == q.degree()
}

pub fn is_real_rooted(q: &BinaryForm) -> bool {
    is_real_rooted_exact(&to_q(q))
}

/// `D(s, t) = disc(s q1 + t q2)`, a form of degree `2 deg q - 2`, by exact
/// interpolation at `(j : 1)`.
pub fn pencil_discriminant_exact(q1: &BinaryForm<Q>, q2: &BinaryForm<Q>) -> Result<BinaryForm<Q>> {
    let m = q1.degree();
    if q2.degree() != m {
        return Err(Error::DegreeMismatch(format!("pencil of degrees {m} and {}", q2.degree())));
    }
    let dd = 2 * m.saturating_sub(1);
    let member = |s: &Q| q1.scale(s).add(q2).expect("equal degrees");
    let xs: Vec<Q> = (0..=dd).map(|j| Q::from_i64(j as i64)).collect();
    let ys: Vec<Q> = xs.iter().map(|s| form_discriminant(&member(s))).collect();
    let d = BinaryForm::from_monomial(lagrange_interpolate(&xs, &ys))?;
    if d.is_zero() {
        return Err(Error::DegeneratePencil("every pencil member is singular".into()));
    }
    let check = Q::from_i64(dd as i64 + 1);
    if d.eval(&check, &Q::from_i64(1)) != form_discriminant(&member(&check)) {
        return Err(Error::NumericalFailure("pencil discriminant interpolation check failed".into()));
    }
    Ok(d)
}

pub fn pencil_discriminant(q1: &BinaryForm, q2: &BinaryForm) -> Result<BinaryForm> {
    Ok(pencil_discriminant_exact(&to_q(q1), &to_q(q2))?.to_f64())
}

/// Exact rational `(p : q)` equal to the float point, if one with
/// denominator below `1e9` is a root of `f`.
fn snap_rational_root(f: &BinaryForm<Q>, pt: &ProjectivePoint) -> Option<(Q, Q)> {
    let one = Q::from_i64(1);
    let zero = Q::zero();
    if pt.t == 0.0 {
        return f.eval(&one, &zero).is_zero().then_some((one, zero));
    }
    if pt.s == 0.0 {
        return f.eval(&zero, &one).is_zero().then_some((zero, one));
    }
    // The chart with |coordinate| <= 1 keeps the continued fraction short.
    let (x, swap) = if pt.s.abs() <= pt.t.abs() { (pt.s / pt.t, false) } else { (pt.t / pt.s, true) };
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let cand = Q::new(h1.clone(), k1.clone());
        let (num, den) = if swap { (one.clone(), cand.clone()) } else { (cand.clone(), one.clone()) };
        if f.eval(&num, &den).is_zero() {
            return Some((num, den));
        }
        if k1 > BigInt::from(1_000_000_000i64) || (r - a).abs() < 1e-15 {
            break;
        }
        r = 1.0 / (r - a);
    }
    None
}

/// Multiplicities of the real roots of an exact form, and whether every
/// root is real.
fn real_structure_exact(q: &BinaryForm<Q>) -> Result<(Vec<usize>, bool)> {
    let roots = real_projective_roots_exact(q)?;
    let mults: Vec<usize> = roots.iter().map(|r| r.1).collect();
    let total: usize = mults.iter().sum();
    Ok((mults, total == q.degree()))
}

fn component_from_multiplicities(mults: &[usize]) -> Result<BoundaryComponent> {
    let max = mults.iter().copied().max().unwrap_or(0);
    let repeated = mults.iter().filter(|&&m| m >= 2).count();
    match (max, repeated) {
        (m, _) if m >= 3 => Ok(BoundaryComponent::Cusp),
        (2, r) if r >= 2 => Ok(BoundaryComponent::Node),
        (2, 1) => Ok(BoundaryComponent::Hankel),
        _ => Err(Error::AmbiguousBoundary(format!("multiplicities {mults:?}"))),
    }
}

/// Pencil member at a root of the pencil discriminant, exact when the root
/// is rational.
enum Member {
    Exact(BinaryForm<Q>),
    Approx(BinaryForm),
}

fn member_at(q1: &BinaryForm<Q>, q2: &BinaryForm<Q>, d: &BinaryForm<Q>, pt: &ProjectivePoint) -> Member {
    match snap_rational_root(d, pt) {
        Some((s, t)) => Member::Exact(q1.scale(&s).add(&q2.scale(&t)).expect("equal degrees")),
        None => {
            let (s, t) = pt.unit();
            Member::Approx(q1.to_f64().scale(&s).add(&q2.to_f64().scale(&t)).expect("equal degrees"))
        }
    }
}

/// Root clusters of a float member, as multiplicities of the real clusters
/// and whether all clusters are real.
fn real_structure_approx(q: &BinaryForm) -> Result<(Vec<usize>, bool)> {
    let clusters = q.root_clusters(1e-5)?;
    let real: Vec<usize> = clusters.iter().filter(|c| c.real_point(1e-6).is_some()).map(|c| c.multiplicity).collect();
    let all = real.len() == clusters.len();
    Ok((real, all))
}

/// Component met by the apolar pencil of `h` (even degree) at the pencil
/// member indexed by `transition_root`.
pub fn classify_boundary_even(h: &BinaryForm, transition_root: &ProjectivePoint) -> Result<BoundaryComponent> {
    let (q1, q2) = apolar_pencil_even_exact(&to_q(h))?;
    let d = pencil_discriminant_exact(&q1, &q2)?;
    let mults = match member_at(&q1, &q2, &d, transition_root) {
        Member::Exact(q) => real_structure_exact(&q)?.0,
        Member::Approx(q) => real_structure_approx(&q)?.0,
    };
    component_from_multiplicities(&mults)
}

/// Numerical rank with singular values below `rel_tol * sigma_max` dropped.
pub fn numerical_rank(m: &[Vec<f64>], rel_tol: f64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mat = DMatrix::from_fn(rows, cols, |i, j| m[i][j]);
    let sv = mat.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Rank of the square `(k+1) x (k+1)` Hankel matrix for `n = 2k`.
pub fn hankel_rank(h: &BinaryForm) -> Result<usize> {
    let k = even_k(h.degree())?;
    Ok(numerical_rank(&catalecticant(h, k + 1)?, 1e-10))
}

/// Sample `(s, t)` strictly inside each arc between consecutive real roots
/// of the pencil discriminant, at the angular midpoint.
fn arc_samples(roots: &[ProjectivePoint]) -> Vec<(Q, Q)> {
    let pi = std::f64::consts::PI;
    let mut angles: Vec<f64> = roots.iter().map(|r| r.angle()).collect();
    angles.sort_by(f64::total_cmp);
    let mids: Vec<f64> = if angles.is_empty() {
        vec![pi / 2.0]
    } else {
        let r = angles.len();
        (0..r)
            .map(|i| {
                let next = if i + 1 < r { angles[i + 1] } else { angles[0] + pi };
                0.5 * (angles[i] + next)
            })
            .collect()
    };
    mids.into_iter().map(|a| (rational_from_f64(a.cos()), rational_from_f64(a.sin()))).collect()
}

fn boundary_tolerance_hit(q: &BinaryForm<Q>, tol: f64) -> bool {
    let qf = q.to_f64();
    let scale = qf.max_abs_coeff();
    let m = q.degree();
    let disc = form_discriminant(&qf).abs();
    disc <= tol * scale.powi((2 * m).saturating_sub(2) as i32)
}

/// Decides whether `h` has real rank equal to the generic complex rank.
pub fn generic_real_rank_test(h: &BinaryForm) -> Result<RealRankReport> {
    generic_real_rank_test_with(h, BOUNDARY_TOL)
}

pub fn generic_real_rank_test_with(h: &BinaryForm, tol: f64) -> Result<RealRankReport> {
    let n = h.degree();
    if n < 2 {
        return Err(Error::OutOfRange(format!("degree {n} < 2")));
    }
    if h.is_zero() {
        return Err(Error::DegenerateInput("zero form".into()));
    }
    let hq = to_q(h);
    let generic_rank = (n + 2) / 2;
    if n % 2 == 1 {
        odd_report(&hq, generic_rank, tol)
    } else {
        even_report(&hq, generic_rank)
    }
}

fn odd_report(h: &BinaryForm<Q>, generic_rank: usize, tol: f64) -> Result<RealRankReport> {
    let n = h.degree();
    let q = apolar_generator_odd_exact(h)?;
    let disc = form_discriminant(&q);
    let distinct = distinct_real_roots_exact(&q);
    let mut approximate = false;
    let verdict = if disc.is_zero() {
        // On the closure of the real-rooted forms only if every root is real.
        if real_structure_exact(&q)?.1 { Verdict::OnBoundary } else { Verdict::ExceedsGeneric }
    } else if boundary_tolerance_hit(&q, tol) && real_structure_approx(&q.to_f64())?.1 {
        approximate = true;
        Verdict::OnBoundary
    } else if distinct == q.degree() {
        Verdict::EqualsGeneric
    } else {
        Verdict::ExceedsGeneric
    };
    let component = (verdict == Verdict::OnBoundary).then_some(BoundaryComponent::Cusp);
    Ok(RealRankReport {
        degree: n,
        generic_rank,
        verdict,
        boundary_component: component,
        on_real_rank_boundary: component.is_some(),
        approximate,
        witnesses: Witnesses {
            apolar_forms: vec![q.to_f64()],
            discriminants: vec![disc.to_f64()],
            sturm_counts: vec![distinct],
            ..Witnesses::default()
        },
    })
}

fn even_report(h: &BinaryForm<Q>, generic_rank: usize) -> Result<RealRankReport> {
    let n = h.degree();
    let k = n / 2;
    let (q1, q2) = apolar_pencil_even_exact(h)?;
    let mut w = Witnesses { apolar_forms: vec![q1.to_f64(), q2.to_f64()], ..Witnesses::default() };
    let report = |verdict, component: Option<BoundaryComponent>, approximate, w| RealRankReport {
        degree: n,
        generic_rank,
        verdict,
        boundary_component: component,
        on_real_rank_boundary: component.is_some_and(BoundaryComponent::on_real_rank_boundary),
        approximate,
        witnesses: w,
    };
    // A singular Hankel matrix means the pencil is `{(s u + t v) g}`.
    let hankel = catalecticant(h, k + 1)?;
    if determinant(hankel).is_zero() {
        return Ok(report(Verdict::OnBoundary, Some(BoundaryComponent::Hankel), false, w));
    }
    let d = pencil_discriminant_exact(&q1, &q2)?;
    w.pencil_discriminant = Some(d.to_f64());
    let roots: Vec<ProjectivePoint> = real_projective_roots_exact(&d)?.into_iter().map(|r| r.0).collect();
    w.transition_points = roots.clone();
    let mut equals = false;
    for (s, t) in arc_samples(&roots) {
        let q = q1.scale(&s).add(&q2.scale(&t))?;
        w.discriminants.push(form_discriminant(&q).to_f64());
        w.sturm_counts.push(distinct_real_roots_exact(&q));
        equals |= is_real_rooted_exact(&q);
    }
    if equals {
        return Ok(report(Verdict::EqualsGeneric, None, false, w));
    }
    // Not in the set itself; on its closure when some singular member still
    // has only real roots.
    let mut best: Option<(BoundaryComponent, bool)> = None;
    for pt in &roots {
        let (mults, all_real, approx) = match member_at(&q1, &q2, &d, pt) {
            Member::Exact(q) => {
                let (m, a) = real_structure_exact(&q)?;
                (m, a, false)
            }
            Member::Approx(q) => {
                let (m, a) = real_structure_approx(&q)?;
                (m, a, true)
            }
        };
        if !all_real {
            continue;
        }
        let c = component_from_multiplicities(&mults)?;
        let rank_of = |c: BoundaryComponent| match c {
            BoundaryComponent::Cusp => 0,
            BoundaryComponent::Node => 1,
            BoundaryComponent::Hankel => 2,
        };
        if best.is_none_or(|(b, _)| rank_of(c) < rank_of(b)) {
            best = Some((c, approx));
        }
    }
    Ok(match best {
        Some((c, approx)) => report(Verdict::OnBoundary, Some(c), approx, w),
        None => report(Verdict::ExceedsGeneric, None, false, w),
    })
}
