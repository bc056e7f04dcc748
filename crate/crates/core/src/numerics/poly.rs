//! Dense univariate polynomials with ascending coefficients.

use crate::scalar::{rational_from_f64, Scalar};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePoly<T = f64> {
    /// `coeffs[i]` multiplies `s^i`. Trailing zeros are trimmed, so the zero
    /// polynomial has no coefficients.
    coeffs: Vec<T>,
}

impl<T: Scalar> UnivariatePoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, s: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lc.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            rem[k + dd] = T::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor. Only meaningful over an exact field.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Square-free decomposition: `result[m-1]` is the product of the
    /// distinct roots of multiplicity exactly `m` (monic, possibly constant).
    pub fn square_free_decomposition(&self) -> Vec<Self> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        // Yun's algorithm.
        let fp = self.derivative();
        let a0 = self.gcd(&fp);
        let mut b = self.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.divrem(&a).0;
            if b.degree() == Some(0) {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.divrem(&self.gcd(&self.derivative())).0.monic()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> UnivariatePoly<U> {
        UnivariatePoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> UnivariatePoly<f64> {
        self.map(|c| c.to_f64())
    }
}

impl UnivariatePoly<f64> {
    /// Exact rational image of the float coefficients.
    pub fn to_exact(&self) -> UnivariatePoly<BigRational> {
        self.map(|c| rational_from_f64(*c))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Endpoint of a root-counting interval on the extended real line.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound<T = f64> {
    NegInf,
    At(T),
    PosInf,
}

fn sign<T: Scalar>(v: &T) -> i8 {
    if v.is_zero() {
        0
    } else if *v > T::zero() {
        1
    } else {
        -1
    }
}

/// Sturm sequence of `p` (no content removal; exact fields only).
pub fn sturm_sequence<T: Scalar>(p: &UnivariatePoly<T>) -> Vec<UnivariatePoly<T>> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let (_, r) = seq[n - 2].divrem(&seq[n - 1]);
        // Positive rescaling keeps sign information while taming growth.
        let r = match r.leading() {
            Some(lc) => {
                let k = if *lc > T::zero() { lc.clone() } else { -lc.clone() };
                r.scale(&(-T::one() / k))
            }
            None => r,
        };
        seq.push(r);
    }
    seq.pop();
    seq
}

fn sign_at<T: Scalar>(p: &UnivariatePoly<T>, at: &Bound<T>) -> i8 {
    match at {
        Bound::At(x) => sign(&p.eval(x)),
        Bound::PosInf => p.leading().map(sign).unwrap_or(0),
        Bound::NegInf => match (p.leading(), p.degree()) {
            (Some(lc), Some(d)) => {
                let s = sign(lc);
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
            _ => 0,
        },
    }
}

fn variations<T: Scalar>(seq: &[UnivariatePoly<T>], at: &Bound<T>) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| sign_at(p, at))
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn sturm_count_exact(
    p: &UnivariatePoly<BigRational>,
    a: &Bound<BigRational>,
    b: &Bound<BigRational>,
) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&p.square_free_part());
    variations(&seq, a).saturating_sub(variations(&seq, b))
}

/// Distinct real roots of `p` in `(a, b]`, certified with exact rational
/// arithmetic on the exact value of the float coefficients.
pub fn sturm_count(p: &UnivariatePoly<f64>, a: Bound<f64>, b: Bound<f64>) -> usize {
    let conv = |x: Bound<f64>| match x {
        Bound::NegInf => Bound::NegInf,
        Bound::PosInf => Bound::PosInf,
        Bound::At(v) => Bound::At(rational_from_f64(v)),
    };
    sturm_count_exact(&p.to_exact(), &conv(a), &conv(b))
}

/// Cauchy bound on the absolute value of every root.
pub fn root_bound_exact(p: &UnivariatePoly<BigRational>) -> BigRational {
    let lc = p.leading().expect("nonzero polynomial").abs();
    let m = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / lc.clone())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    m + BigRational::from_i64(1)
}

/// Disjoint isolating intervals `[lo, hi]` (exact rationals), one per distinct
/// real root, sorted ascending. Each interval contains exactly one root; an
/// interval with `lo == hi` is an exact rational root.
pub fn isolate_real_roots(
    p: &UnivariatePoly<BigRational>,
) -> Vec<(BigRational, BigRational)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = p.square_free_part();
    let seq = sturm_sequence(&sf);
    let count = |lo: &BigRational, hi: &BigRational| {
        variations(&seq, &Bound::At(lo.clone()))
            .saturating_sub(variations(&seq, &Bound::At(hi.clone())))
    };
    let bound = root_bound_exact(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    let two = BigRational::from_i64(2);
    while let Some((lo, hi)) = stack.pop() {
        // Roots counted in (lo, hi].
        let c = count(&lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (lo.clone() + hi.clone()) / two.clone();
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out.into_iter()
        .map(|(lo, hi)| {
            if sf.eval(&hi).is_zero() {
                (hi.clone(), hi)
            } else {
                (lo, hi)
            }
        })
        .collect()
}

/// Shrinks an isolating interval of a simple root of the square-free `sf`
/// by exact bisection until its width is below `width`.
pub fn refine_root(
    sf: &UnivariatePoly<BigRational>,
    mut lo: BigRational,
    mut hi: BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_i64(2);
    let shi = sign(&sf.eval(&hi));
    if shi == 0 {
        return (hi.clone(), hi);
    }
    while hi.clone() - lo.clone() > *width {
        let mid = (lo.clone() + hi.clone()) / two.clone();
        let sm = sign(&sf.eval(&mid));
        if sm == 0 {
            return (mid.clone(), mid);
        }
        if sm == shi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Resultant via the Sylvester determinant, with formal degrees `m`, `k`
/// (coefficients beyond the true degree are zero).
pub fn resultant_formal<T: Scalar>(p: &[T], m: usize, q: &[T], k: usize) -> T {
    let size = m + k;
    if size == 0 {
        return T::one();
    }
    let at = |c: &[T], i: usize| c.get(i).cloned().unwrap_or_else(T::zero);
    let mut mat = vec![vec![T::zero(); size]; size];
    for r in 0..k {
        for j in 0..=m {
            // Descending powers of s.
            mat[r][r + j] = at(p, m - j);
        }
    }
    for r in 0..m {
        for j in 0..=k {
            mat[k + r][r + j] = at(q, k - j);
        }
    }
    super::linalg::determinant(mat)
}

pub fn resultant<T: Scalar>(p: &UnivariatePoly<T>, q: &UnivariatePoly<T>) -> T {
    match (p.degree(), q.degree()) {
        (Some(m), Some(k)) => resultant_formal(p.coeffs(), m, q.coeffs(), k),
        _ => T::zero(),
    }
}

/// Classical discriminant `(-1)^{m(m-1)/2} Res(p, p') / lc(p)`.
pub fn discriminant<T: Scalar>(p: &UnivariatePoly<T>) -> T {
    let Some(m) = p.degree() else {
        return T::zero();
    };
    if m == 0 {
        return T::one();
    }
    let r = resultant(p, &p.derivative());
    let s = if (m * (m - 1) / 2) % 2 == 0 { T::one() } else { -T::one() };
    s * r / p.leading().unwrap().clone()
}
