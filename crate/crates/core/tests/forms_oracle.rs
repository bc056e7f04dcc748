//! Forms checked against independent oracles: `L^(k)` from its differential
//! definition, special forms from complex powers, exact rational arithmetic.

use num_rational::BigRational;
use proptest::prelude::*;
use rootloci::forms::{apply_apolarity_operator, BinaryForm, SpecialKind};
use rootloci::scalar::{binomial, Scalar};
use rootloci::{Basis, Partition};

type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_i64(v)
}

fn qform(c: &[i64]) -> BinaryForm<Q> {
    BinaryForm::from_monomial(c.iter().map(|&v| q(v)).collect()).unwrap()
}

/// `(n-k)!/n! * sum_i (-1)^i C(k,i) x^(k-i) y^i d^k f / dx^i dy^(k-i)`.
fn l_oracle(f: &BinaryForm<Q>, k: usize) -> BinaryForm<Q> {
    let n = f.degree();
    let mut out = BinaryForm::<Q>::zero(n);
    for i in 0..=k {
        let mut d = f.clone();
        for _ in 0..i {
            d = d.partial_x();
        }
        for _ in 0..k - i {
            d = d.partial_y();
        }
        let term = BinaryForm::<Q>::monomial(k, k - i).mul(&d).scale(&Q::from_u128(binomial(k, i)));
        out = if i % 2 == 0 { out.add(&term).unwrap() } else { out.sub(&term).unwrap() };
    }
    let num: u128 = (1..=n - k).map(|v| v as u128).product();
    let den: u128 = (1..=n).map(|v| v as u128).product();
    out.scale(&(Q::from_u128(num) / Q::from_u128(den)))
}

#[test]
fn l_matches_differential_definition_exactly() {
    let f = qform(&[3, -1, 4, 1, -5, 9, 2]);
    for k in 0..=6 {
        assert_eq!(f.apply_l(k).unwrap(), l_oracle(&f, k), "k = {k}");
    }
}

#[test]
fn l_one_of_pure_power() {
    // L^(1)(x^n) = -x^(n-1) y.
    for n in 1..8 {
        let f = BinaryForm::<Q>::monomial(n, n);
        let mut want = BinaryForm::<Q>::zero(n);
        want = want.sub(&BinaryForm::monomial(n, n - 1)).unwrap();
        assert_eq!(f.apply_l(1).unwrap(), want);
    }
}

#[test]
fn l_top_is_quarter_turn_and_l_zero_is_identity() {
    let f = qform(&[1, 2, -3, 0, 7]);
    assert_eq!(f.apply_l(4).unwrap(), f.quarter_turn());
    assert_eq!(f.apply_l(0).unwrap(), f);
    let ft = f.substitute(&q(0), &q(-1), &q(1), &q(0));
    assert_eq!(f.quarter_turn(), ft);
}

#[test]
fn l_rejects_k_above_degree() {
    assert!(qform(&[1, 2, 3]).apply_l(3).is_err());
}

#[test]
fn special_form_values() {
    let k4 = BinaryForm::<Q>::special(4, SpecialKind::Sin);
    assert_eq!(k4, qform(&[0, -4, 0, 4, 0]));
    let h5 = BinaryForm::<Q>::special(5, SpecialKind::Cos);
    assert_eq!(h5, qform(&[0, 5, 0, -10, 0, 1]));
}

#[test]
fn sextic_scaled_coordinates() {
    // y^6 + 15 x^4 y^2 has scaled coordinates (1,0,0,0,1,0,0).
    let f = BinaryForm::<Q>::from_scaled([1, 0, 0, 0, 1, 0, 0].iter().map(|&v| q(v)).collect()).unwrap();
    assert_eq!(f, qform(&[1, 0, 0, 0, 15, 0, 0]));
}

#[test]
fn quintic_norm_and_pairing() {
    let h = BinaryForm::<f64>::from_monomial(vec![1.0, 5.0, 0.0, -10.0, 0.0, 1.0]).unwrap();
    assert!((h.norm_sq() - 17.0).abs() < 1e-12);
    assert_eq!(h.scaled_coeffs(), vec![1.0, 1.0, 0.0, -1.0, 0.0, 1.0]);
}

#[test]
fn apolarity_annihilation() {
    // (d/du + d/dv)^2 kills (u - v)^2 (u + 8v).
    let op = qform(&[1, 1]).pow(2);
    let f = qform(&[-1, 1]).pow(2).mul(&qform(&[8, 1]));
    assert!(apply_apolarity_operator(&op, &f).unwrap().is_zero());
}

#[test]
fn multiplicity_structure_examples() {
    let f = BinaryForm::<f64>::from_monomial(vec![0.0, 0.0, 0.0, 1.0, -2.0, 1.0]).unwrap(); // x^3 (x - y)^2
    assert_eq!(f.multiplicity_structure(1e-6).unwrap(), "3,2".parse::<Partition>().unwrap());
    // y * (x - y)^3 * (x + 2y) has a simple root at (1 : 0).
    let g = BinaryForm::<f64>::linear(0.0, 1.0)
        .mul(&BinaryForm::linear(1.0, -1.0).pow(3))
        .mul(&BinaryForm::linear(1.0, 2.0));
    assert_eq!(g.multiplicity_structure(1e-6).unwrap(), "3,1,1".parse::<Partition>().unwrap());
}

#[test]
fn parse_reports_column() {
    let err = BinaryForm::parse("1, 2, x3", Basis::Monomial).unwrap_err();
    assert_eq!(err, rootloci::Error::Parse { line: 1, column: 7, message: "`x3` is not a number".into() });
    let f = BinaryForm::parse("1/2, 3", Basis::Scaled).unwrap();
    assert_eq!(f.coeffs(), &[0.5, 3.0]);
}

fn small_form(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_deg).prop_flat_map(|n| prop::collection::vec(-9i64..=9, n + 1))
}

proptest! {
    #[test]
    fn l_exchange_identity(c in small_form(7), k in 0usize..8) {
        let f = qform(&c);
        let n = f.degree();
        prop_assume!(k <= n);
        let lhs = f.apply_l(k).unwrap();
        let rhs = f.quarter_turn().apply_l(n - k).unwrap();
        let rhs = if (n - k) % 2 == 0 { rhs } else { rhs.neg() };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn l_matches_oracle(c in small_form(8), k in 0usize..9) {
        let f = qform(&c);
        prop_assume!(k <= f.degree());
        prop_assert_eq!(f.apply_l(k).unwrap(), l_oracle(&f, k));
    }

    #[test]
    fn pairing_is_rotation_invariant(c in prop::collection::vec(-5.0f64..5.0, 2..9), d in prop::collection::vec(-5.0f64..5.0, 2..9), th in 0.0f64..6.3) {
        let n = c.len().min(d.len());
        let f = BinaryForm::from_monomial(c[..n].to_vec()).unwrap();
        let g = BinaryForm::from_monomial(d[..n].to_vec()).unwrap();
        let (co, si) = (th.cos(), th.sin());
        let fr = f.substitute(&co, &-si, &si, &co);
        let gr = g.substitute(&co, &-si, &si, &co);
        let a = f.pairing(&g).unwrap();
        let b = fr.pairing(&gr).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + f.norm_sq().sqrt() * g.norm_sq().sqrt()));
    }

    #[test]
    fn special_forms_rotate_covariantly(n in 1usize..12, j in 0usize..12) {
        // Rotation by 2 pi j / n fixes h_n and k_n.
        let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let (co, si) = (th.cos(), th.sin());
        for kind in [SpecialKind::Cos, SpecialKind::Sin] {
            let h = BinaryForm::<f64>::special(n, kind);
            let hr = h.substitute(&co, &-si, &si, &co);
            for (a, b) in h.coeffs().iter().zip(hr.coeffs()) {
                prop_assert!((a - b).abs() <= 1e-9 * h.max_abs_coeff());
            }
        }
    }

    #[test]
    fn l_is_rotation_equivariant(c in prop::collection::vec(-5.0f64..5.0, 2..9), k in 0usize..8, th in 0.0f64..6.3) {
        let f = BinaryForm::from_monomial(c).unwrap();
        prop_assume!(k <= f.degree());
        let (co, si) = (th.cos(), th.sin());
        let a = f.substitute(&co, &-si, &si, &co).apply_l(k).unwrap();
        let b = f.apply_l(k).unwrap().substitute(&co, &-si, &si, &co);
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + f.max_abs_coeff()) * 64.0);
        }
    }
}
