//! Binary forms, the apolar pairing, the operators `L^(k)`, and projective
//! root extraction.

use crate::error::{Error, Result};
use crate::numerics::poly::UnivariatePoly;
use crate::numerics::roots::complex_roots;
use crate::partitions::Partition;
use crate::scalar::{binomial_s, rational_from_f64, Scalar};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Homogeneous form of degree `n` in `x, y`, stored in the monomial basis:
/// `coeffs[i]` multiplies `x^i y^(n-i)`. Always at least one coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryForm<T = f64> {
    coeffs: Vec<T>,
}

/// Which coordinates a coefficient list is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `f = sum c_i x^i y^(n-i)`.
    Monomial,
    /// `f = sum C(n,i) a_i x^i y^(n-i)`.
    Scaled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialKind {
    /// `Re (x + iy)^n`.
    Cos,
    /// `Im (x + iy)^n`.
    Sin,
}

impl<T: Scalar> BinaryForm<T> {
    pub fn from_monomial(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DegreeMismatch("a form needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_scaled(a: Vec<T>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::DegreeMismatch("a form needs at least one coefficient".into()));
        }
        let n = a.len() - 1;
        Ok(Self {
            coeffs: a
                .into_iter()
                .enumerate()
                .map(|(i, v)| v * binomial_s::<T>(n, i))
                .collect(),
        })
    }

    pub fn from_basis(coeffs: Vec<T>, basis: Basis) -> Result<Self> {
        match basis {
            Basis::Monomial => Self::from_monomial(coeffs),
            Basis::Scaled => Self::from_scaled(coeffs),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![T::zero(); n + 1] }
    }

    /// `x^i y^(n-i)`.
    pub fn monomial(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[i] = T::one();
        f
    }

    /// `cx * x + cy * y`.
    pub fn linear(cx: T, cy: T) -> Self {
        Self { coeffs: vec![cy, cx] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Result<&T> {
        self.coeffs
            .get(i)
            .ok_or_else(|| Error::IndexError(format!("{i} > degree {}", self.degree())))
    }

    /// `a_i = c_i / C(n,i)`.
    pub fn scaled_coeffs(&self) -> Vec<T> {
        let n = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() / binomial_s::<T>(n, i))
            .collect()
    }

    pub fn in_basis(&self, basis: Basis) -> Vec<T> {
        match basis {
            Basis::Monomial => self.coeffs.clone(),
            Basis::Scaled => self.scaled_coeffs(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BinaryForm<U> {
        BinaryForm { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> BinaryForm<f64> {
        self.map(|c| c.to_f64())
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    fn check_same_degree(&self, other: &Self) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(format!(
                "degrees {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_degree(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self { coeffs: vec![T::one()] };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        // Horner in x with y powers accumulated from the top.
        let n = self.degree();
        let mut acc = T::zero();
        let mut ypow = T::one();
        let mut terms = vec![T::one(); n + 1];
        for slot in terms.iter_mut() {
            *slot = ypow.clone();
            ypow = ypow * y.clone();
        }
        for i in (0..=n).rev() {
            acc = acc * x.clone() + self.coeffs[i].clone() * terms[n - i].clone();
        }
        acc
    }

    /// Bombieri product `sum C(n,i) a_i b_i = sum c_i d_i / C(n,i)`.
    pub fn pairing(&self, other: &Self) -> Result<T> {
        self.check_same_degree(other)?;
        let n = self.degree();
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .fold(T::zero(), |acc, (i, (a, b))| {
                acc + a.clone() * b.clone() / binomial_s::<T>(n, i)
            }))
    }

    pub fn norm_sq(&self) -> T {
        self.pairing(self).expect("same degree")
    }

    pub fn partial_x(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..self.coeffs.len())
                .map(|i| self.coeffs[i].clone() * T::from_i64(i as i64))
                .collect(),
        }
    }

    pub fn partial_y(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (0..n)
                .map(|i| self.coeffs[i].clone() * T::from_i64((n - i) as i64))
                .collect(),
        }
    }

    /// `f(a x + b y, c x + d y)`.
    pub fn substitute(&self, a: &T, b: &T, c: &T, d: &T) -> Self {
        let n = self.degree();
        let lx = Self::linear(a.clone(), b.clone());
        let ly = Self::linear(c.clone(), d.clone());
        let xp: Vec<Self> = (0..=n).scan(Self { coeffs: vec![T::one()] }, |s, _| {
            let cur = s.clone();
            *s = s.mul(&lx);
            Some(cur)
        }).collect();
        let yp: Vec<Self> = (0..=n).scan(Self { coeffs: vec![T::one()] }, |s, _| {
            let cur = s.clone();
            *s = s.mul(&ly);
            Some(cur)
        }).collect();
        let mut out = Self::zero(n);
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let term = xp[i].mul(&yp[n - i]).scale(ci);
            out = out.add(&term).expect("same degree");
        }
        out
    }

    /// `f(-y, x)`.
    pub fn quarter_turn(&self) -> Self {
        let n = self.degree();
        // x^i y^(n-i) -> (-y)^i x^(n-i) = (-1)^i x^(n-i) y^i.
        let mut coeffs = vec![T::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = if i % 2 == 0 { c.clone() } else { -c.clone() };
        }
        Self { coeffs }
    }

    /// `L^(k)(f)` of degree `n`; `L^(0)` is the identity and `L^(n)` the
    /// quarter turn. Computed on scaled coordinates by
    /// `C(n,j) b_j = sum_i (-1)^i C(k,i) C(n-k, i+j-k) a_(2i+j-k)`.
    pub fn apply_l(&self, k: usize) -> Result<Self> {
        let n = self.degree();
        if k > n {
            return Err(Error::OutOfRange(format!("k = {k} exceeds degree {n}")));
        }
        let a = self.scaled_coeffs();
        let mut coeffs = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut acc = T::zero();
            for i in k.saturating_sub(j)..=(n - j).min(k) {
                let c = binomial_s::<T>(k, i) * binomial_s::<T>(n - k, i + j - k);
                let term = c * a[2 * i + j - k].clone();
                acc = if i % 2 == 0 { acc + term } else { acc - term };
            }
            // acc is C(n,j) b_j, which is the monomial coefficient.
            coeffs.push(acc);
        }
        Ok(Self { coeffs })
    }

    /// `Re (x+iy)^n` or `Im (x+iy)^n`, with integer coefficients.
    pub fn special(n: usize, kind: SpecialKind) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        for j in 0..=n {
            // Term C(n,j) x^(n-j) (iy)^j; i^j real for even j.
            let even = j % 2 == 0;
            if even != (kind == SpecialKind::Cos) {
                continue;
            }
            let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
            coeffs[n - j] = T::from_i64(sign) * binomial_s::<T>(n, j);
        }
        Self { coeffs }
    }
}

impl BinaryForm<f64> {
    pub fn to_exact(&self) -> BinaryForm<BigRational> {
        self.map(|c| rational_from_f64(*c))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Parses comma-separated decimal or rational literals (`3`, `-0.5`,
    /// `7/3`), given in `basis`.
    pub fn parse(text: &str, basis: Basis) -> Result<Self> {
        Self::from_basis(parse_coefficients(text)?, basis)
    }

    /// All `n` complex projective roots, each as a homogeneous pair scaled to
    /// unit Euclidean norm. A zero form has no well-defined roots.
    pub fn complex_projective_roots(&self) -> Result<Vec<[Complex64; 2]>> {
        let n = self.degree();
        if self.is_zero() {
            return Err(Error::DegenerateInput("zero form".into()));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        // Rotate so that no root is at or near the chart's infinity.
        let mut best: Option<(f64, f64, BinaryForm<f64>)> = None;
        for j in 0..16 {
            let th = 0.1234 + std::f64::consts::PI * j as f64 / 16.0;
            let (c, s) = (th.cos(), th.sin());
            let g = self.substitute(&c, &-s, &s, &c);
            let q = g.coeffs[n].abs() / g.max_abs_coeff();
            if best.as_ref().is_none_or(|b| q > b.0) {
                best = Some((q, th, g));
            }
        }
        let (_, th, g) = best.unwrap();
        let (c, s) = (th.cos(), th.sin());
        let roots = complex_roots(&UnivariatePoly::new(g.coeffs.clone()));
        // g(z, 1) = 0 means f vanishes at (c z - s, s z + c).
        Ok(roots
            .into_iter()
            .map(|z| {
                let p = [z * c - s, z * s + c];
                let nrm = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt();
                [p[0] / nrm, p[1] / nrm]
            })
            .collect())
    }

    /// Roots grouped into clusters. An `m`-fold cluster may spread by up to
    /// `cluster_tol^(2/m)` in chordal distance, which is the root spread of a
    /// coefficient perturbation of relative size `cluster_tol^2`.
    pub fn root_clusters(&self, cluster_tol: f64) -> Result<Vec<RootCluster>> {
        let roots = self.complex_projective_roots()?;
        cluster_roots(&roots, cluster_tol)
    }

    /// Partition of `n` given by root multiplicities.
    pub fn multiplicity_structure(&self, cluster_tol: f64) -> Result<Partition> {
        let clusters = self.root_clusters(cluster_tol)?;
        Partition::new(clusters.iter().map(|c| c.multiplicity).collect())
    }
}

/// `op(d/dx, d/dy) f` for an operator form `op` of degree `m <= deg f`.
pub fn apply_apolarity_operator<T: Scalar>(op: &BinaryForm<T>, f: &BinaryForm<T>) -> Result<BinaryForm<T>> {
    let m = op.degree();
    let n = f.degree();
    if m > n {
        return Err(Error::DegreeMismatch(format!("operator degree {m} exceeds {n}")));
    }
    let mut out = BinaryForm::zero(n - m);
    for (p, o) in op.coeffs.iter().enumerate() {
        if o.is_zero() {
            continue;
        }
        let mut g = f.clone();
        for _ in 0..p {
            g = g.partial_x();
        }
        for _ in 0..m - p {
            g = g.partial_y();
        }
        out = out.add(&g.scale(o))?;
    }
    Ok(out)
}

pub fn apolar_pairing<T: Scalar>(f: &BinaryForm<T>, g: &BinaryForm<T>) -> Result<T> {
    f.pairing(g)
}

/// Point `(s : t)` of the real projective line, normalized so that
/// `max(|s|, |t|) = 1` and the first nonzero coordinate is positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    pub s: f64,
    pub t: f64,
}

impl ProjectivePoint {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        let m = s.abs().max(t.abs());
        if m == 0.0 || !m.is_finite() {
            return Err(Error::DegenerateInput(format!("({s} : {t}) is not a projective point")));
        }
        let sign = if s != 0.0 { s.signum() } else { t.signum() };
        Ok(Self { s: s / m * sign, t: t / m * sign })
    }

    /// Point at angle `theta` on the unit circle, i.e. `(cos : sin)`.
    pub fn from_angle(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin()).expect("unit vector")
    }

    /// Representative angle in `[0, pi)`.
    pub fn angle(&self) -> f64 {
        let a = self.t.atan2(self.s);
        a.rem_euclid(std::f64::consts::PI)
    }

    /// Unit-norm representative.
    pub fn unit(&self) -> (f64, f64) {
        let r = self.s.hypot(self.t);
        (self.s / r, self.t / r)
    }

    /// `t x - s y`, which vanishes at this point.
    pub fn vanishing_form(&self) -> BinaryForm<f64> {
        BinaryForm::linear(self.t, -self.s)
    }

    /// `s x + t y`, the orthogonal linear form.
    pub fn orthogonal_form(&self) -> BinaryForm<f64> {
        BinaryForm::linear(self.s, self.t)
    }

    /// `|sin|` of the angle between representatives.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let (a, b) = self.unit();
        let (c, d) = other.unit();
        (a * d - b * c).abs()
    }

    /// Coordinate `s / t` in the chart `t = 1`.
    pub fn affine(&self) -> Option<f64> {
        (self.t != 0.0).then(|| self.s / self.t)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.s, self.t)
    }
}

/// A group of numerically coincident complex roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    /// Mean of the members, normalized to unit norm.
    pub point: [Complex64; 2],
    pub multiplicity: usize,
    /// Largest chordal distance of a member from the mean.
    pub radius: f64,
}

impl RootCluster {
    /// Real point if the center is real within `tol` (chordal).
    pub fn real_point(&self, tol: f64) -> Option<ProjectivePoint> {
        // Rotate the phase so the larger coordinate is real.
        let [a, b] = self.point;
        let lead = if a.norm() >= b.norm() { a } else { b };
        let ph = lead.conj() / lead.norm();
        let (a, b) = (a * ph, b * ph);
        if a.im.abs().max(b.im.abs()) <= tol {
            ProjectivePoint::new(a.re, b.re).ok()
        } else {
            None
        }
    }
}

fn chordal(p: &[Complex64; 2], q: &[Complex64; 2]) -> f64 {
    let num = (p[0] * q[1] - p[1] * q[0]).norm();
    let den = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt() * (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
    num / den
}

fn cluster_center(members: &[[Complex64; 2]]) -> [Complex64; 2] {
    // Align phases with the first member before averaging.
    let r0 = members[0];
    let mut acc = [Complex64::new(0.0, 0.0); 2];
    for m in members {
        let ip = r0[0].conj() * m[0] + r0[1].conj() * m[1];
        let ph = if ip.norm() > 0.0 { ip.conj() / ip.norm() } else { Complex64::new(1.0, 0.0) };
        acc[0] += m[0] * ph;
        acc[1] += m[1] * ph;
    }
    let nrm = (acc[0].norm_sqr() + acc[1].norm_sqr()).sqrt();
    [acc[0] / nrm, acc[1] / nrm]
}

fn spread_allowance(m: usize, cluster_tol: f64) -> f64 {
    if m <= 2 {
        cluster_tol
    } else {
        cluster_tol.powf(2.0 / m as f64)
    }
}

enum Dendro {
    Leaf(usize),
    Node(Box<Dendro>, Box<Dendro>),
}

impl Dendro {
    fn members(&self, out: &mut Vec<usize>) {
        match self {
            Dendro::Leaf(i) => out.push(*i),
            Dendro::Node(a, b) => {
                a.members(out);
                b.members(out);
            }
        }
    }
}

/// Single-linkage dendrogram read top-down: a subtree becomes one cluster
/// when its spread fits the allowance for its size, otherwise it splits.
/// A rejected subtree within a factor 2 of its allowance is ambiguous.
pub fn cluster_roots(roots: &[[Complex64; 2]], cluster_tol: f64) -> Result<Vec<RootCluster>> {
    let mut nodes: Vec<(Dendro, Vec<usize>)> =
        (0..roots.len()).map(|i| (Dendro::Leaf(i), vec![i])).collect();
    while nodes.len() > 1 {
        let mut best = (f64::INFINITY, 0, 1);
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                for &a in &nodes[i].1 {
                    for &b in &nodes[j].1 {
                        let d = chordal(&roots[a], &roots[b]);
                        if d < best.0 {
                            best = (d, i, j);
                        }
                    }
                }
            }
        }
        let (_, i, j) = best;
        let (dj, mj) = nodes.remove(j);
        let (di, mut mi) = nodes.remove(i);
        mi.extend(mj);
        nodes.push((Dendro::Node(Box::new(di), Box::new(dj)), mi));
    }
    let mut out = Vec::new();
    let mut stack: Vec<Dendro> = nodes.into_iter().map(|n| n.0).collect();
    while let Some(node) = stack.pop() {
        let mut idx = Vec::new();
        node.members(&mut idx);
        let members: Vec<[Complex64; 2]> = idx.iter().map(|&i| roots[i]).collect();
        let c = cluster_center(&members);
        let rad = members.iter().map(|m| chordal(m, &c)).fold(0.0, f64::max);
        let ratio = rad / spread_allowance(members.len(), cluster_tol);
        match node {
            Dendro::Leaf(_) => out.push(RootCluster { point: c, multiplicity: 1, radius: 0.0 }),
            Dendro::Node(..) if ratio <= 1.0 => {
                out.push(RootCluster { point: c, multiplicity: members.len(), radius: rad })
            }
            Dendro::Node(..) if ratio <= 2.0 => {
                return Err(Error::AmbiguousStructure(format!(
                    "{} roots spread within a factor {ratio:.3} of the tolerance",
                    members.len()
                )));
            }
            Dendro::Node(a, b) => {
                stack.push(*a);
                stack.push(*b);
            }
        }
    }
    out.sort_by(|a, b| b.multiplicity.cmp(&a.multiplicity));
    Ok(out)
}

/// Parses a comma- or whitespace-separated list of decimal or `p/q` literals.
pub fn parse_coefficients(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let mut col = 0;
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
            let start = col;
            col += tok.len() + 1;
            if tok.is_empty() {
                continue;
            }
            let v = parse_number(tok).map_err(|message| Error::Parse {
                line: lineno + 1,
                column: start + 1,
                message,
            })?;
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 1, column: 1, message: "no coefficients".into() });
    }
    Ok(out)
}

fn parse_number(tok: &str) -> std::result::Result<f64, String> {
    let v = match tok.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| format!("bad numerator in `{tok}`"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("bad denominator in `{tok}`"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in `{tok}`"));
            }
            p / q
        }
        None => tok.parse().map_err(|_| format!("`{tok}` is not a number"))?,
    };
    if !v.is_finite() {
        return Err(format!("`{tok}` is not finite"));
    }
    Ok(v)
}
