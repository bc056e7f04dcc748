//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every line is printed. The exit
//! status is nonzero when a criterion fails, unless that criterion is listed
//! in `KNOWN_DEVIATIONS` (README, "Known deviations"); those still print FAIL.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootloci::general_solver::{solve_general, GeneralOptions, PrimalParams};
use rootloci::hook_solver::{build_hook_system, hook_determinant, solve_hook, verify_parity_factorization};
use rootloci::numerics::StationaryClass;
use rootloci::partitions::verify_table;
use rootloci::realrank::{
    apolar_pencil_even_exact, distinct_real_roots_exact, generic_real_rank_test, pencil_discriminant, BoundaryComponent,
    Verdict,
};
use rootloci::scalar::Scalar;
use rootloci::{BinaryForm, Partition, SpecialKind};
use std::time::Instant;

type Q = BigRational;

/// Criteria expected to print FAIL; each is explained in the README.
const KNOWN_DEVIATIONS: &[u32] = &[2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn quintic() -> BinaryForm {
    // x^5 - 10 x^3 y^2 + 5 x y^4 + y^5
    BinaryForm::from_monomial(vec![1.0, 5.0, 0.0, -10.0, 0.0, 1.0]).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let sols = solve_hook(&quintic(), 3).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let dist: Vec<f64> = sols.iter().map(|d| d.dist_sq_primal).collect();
    let listed = [3.02, 4.92, 5.09, 6.0, 8.12];
    let table_ok = dist.len() == 5 && dist.iter().zip(listed).all(|(a, b)| (a - b).abs() < 5e-3);
    let best = &sols[0];
    let min_ok = rel(best.dist_sq_primal, 3.021_566_680_599_712_163_3) < 1e-12;
    let root = best.root().affine().unwrap();
    let root_ok = (root + 0.785_194_516_394_082_532_33).abs() < 1e-10;
    let dual = sols.iter().map(|d| d.dist_sq_dual).fold(f64::INFINITY, f64::min);
    let dual_ok = rel(dual, 8.880_827_761_458_885_978_3) < 1e-12;
    outcome(
        table_ok && min_ok && root_ok && dual_ok && elapsed < 1.0,
        format!("|g|^2 = {dist:.4?}, min {:.16}, root {root:.14}, dual {dual:.16}, {elapsed:.3}s", best.dist_sq_primal),
    )
}

fn criterion_2() -> Outcome {
    let u = [20.0, -17.0, 3.0, 16.0, 12.0, 14.0, -16.0, -5.0, 7.0, 8.0, -13.0, 5.0, -13.0, -16.0, 7.0, -11.0];
    let listed: [(f64, f64); 15] = [
        (8.70886, 86791.0),
        (3.70567, 111796.0),
        (2.19850, 163470.0),
        (0.05736, 476068.0),
        (-0.38870, 550056.0),
        (-3.49092, 564363.0),
        (-5.71229, 565936.0),
        (-0.22118, 657621.0),
        (1.25359, 723240.0),
        (0.25811, 727831.0),
        (0.48187, 774941.0),
        (0.80694, 934884.0),
        (-0.68808, 1058800.0),
        (-1.67383, 1150260.0),
        (-1.06515, 1256200.0),
    ];
    let h = BinaryForm::from_scaled(u.to_vec()).unwrap();
    let t = Instant::now();
    let sols = solve_hook(&h, 6).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let mut roots_ok = sols.len() == 15;
    let mut dist_ok = roots_ok;
    for &(r, d) in &listed {
        let Some(sol) = sols.iter().min_by(|a, b| {
            let ra = (a.root().affine().unwrap_or(f64::INFINITY) - r).abs();
            let rb = (b.root().affine().unwrap_or(f64::INFINITY) - r).abs();
            ra.total_cmp(&rb)
        }) else {
            roots_ok = false;
            break;
        };
        roots_ok &= (sol.root().affine().unwrap() - r).abs() < 1e-4;
        // Six significant figures are printed: one unit in the last digit.
        let digits = format!("{}", d as u64).len() as i32;
        let unit = 10f64.powi((digits - 6).max(0));
        dist_ok &= (sol.dist_sq_primal - d).abs() <= unit;
    }
    let count = |f: &dyn Fn(&rootloci::critical::CriticalDecomposition) -> bool| sols.iter().filter(|d| f(d)).count();
    let min_primal = count(&|d| d.class_primal == StationaryClass::Min);
    let max_dual = count(&|d| d.class_dual == StationaryClass::Max);
    let undecided = count(&|d| d.class_primal == StationaryClass::Undecided || d.class_dual == StationaryClass::Undecided);
    let min_dual = count(&|d| d.class_dual == StationaryClass::Min);
    let saddle_dual = count(&|d| d.class_dual == StationaryClass::Saddle);
    let class_ok = (min_primal, max_dual, undecided) == (4, 6, 5);
    outcome(
        roots_ok && dist_ok && class_ok && elapsed < 5.0,
        format!(
            "{} roots (match {roots_ok}), distances (match {dist_ok}), classes: {min_primal} MIN-primal, {max_dual} MAX-dual, \
             {undecided} UNDECIDED (dual side: {min_dual} MIN, {saddle_dual} SADDLE), expected 4/6/5, {elapsed:.3}s",
            sols.len()
        ),
    )
}

fn criterion_3() -> Outcome {
    let lam = Partition::new(vec![3, 2]).unwrap();
    let t = Instant::now();
    let sols = solve_general(&quintic(), &lam, &GeneralOptions { starts: 200, seed: 0, ..Default::default() }).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let rows = [
        (1.817238, 0.673272, -1.316853, 7.724678),
        (-0.266252, -3.020572, 0.274673, 8.643701),
        (-0.265424, 3.131909, -0.387044, 12.017703),
        (1.815280, -0.785143, 1.428712, 13.105926),
    ];
    // The listed rows live in the chart t = v = 1 and their last column is |f|^2.
    let charted: Vec<_> = sols
        .iter()
        .filter_map(|d| {
            let p = PrimalParams { alpha: d.alpha?, roots: d.roots.clone() };
            p.affine_chart().map(|(a, c)| (a, c, d))
        })
        .collect();
    let mut rows_ok = charted.len() == 4;
    for &(alpha, s, u, dist) in &rows {
        let hit = charted.iter().any(|(a, c, d)| {
            (a - alpha).abs() < 1e-5
                && (c[0] - s).abs() < 1e-5
                && (c[1] - u).abs() < 1e-5
                && (d.dist_sq_dual - dist).abs() < 1e-5
        });
        rows_ok &= hit;
    }
    let worst = charted.iter().max_by(|x, y| x.2.dist_sq_dual.total_cmp(&y.2.dist_sq_dual)).unwrap().2;
    let f = [1.79341, 4.34203, 0.0137459, -5.15521, -0.911262, 1.81528];
    let g = [-0.793414, 0.657973, -0.0137459, -4.84479, 0.911262, -0.81528];
    let close = |a: &BinaryForm, b: &[f64]| a.coeffs().iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-4);
    let forms_ok = close(&worst.f, &f) && close(&worst.g, &g);
    outcome(
        rows_ok && forms_ok && elapsed < 30.0,
        format!(
            "{} points in chart t = v = 1 ({} total), rows match {rows_ok}, worst f/g match {forms_ok}, {elapsed:.3}s",
            charted.len(),
            sols.len()
        ),
    )
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.random_range(-20i64..=20).into(), rng.random_range(1i64..=7).into())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cases = [(4, 2), (4, 3), (5, 3), (6, 4), (7, 4)];
    let mut worst = 0.0_f64;
    let mut ok = true;
    for j in 0..20 {
        let (n, a) = cases[j % cases.len()];
        let h: Vec<Q> = (0..=n).map(|_| random_rational(&mut rng)).collect();
        let hf = BinaryForm::from_monomial(h).unwrap().to_f64();
        let sys = build_hook_system(&hf, a).unwrap();
        match verify_parity_factorization(&sys) {
            Ok(r) => worst = worst.max(r.residual),
            Err(_) => ok = false,
        }
        let want = (2 * a - 1) * n - 2 * (a - 1) * (a - 1);
        ok &= hook_determinant(&sys).unwrap().degree() == want;
    }
    outcome(ok && worst < 1e-8, format!("20 forms, max residual {worst:e}, degrees match {ok}"))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let checks = verify_table(None).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let failed = checks.iter().filter(|c| !c.pass).count();
    outcome(failed == 0 && elapsed < 1.0, format!("{} checks, {failed} failed, {elapsed:.3}s", checks.len()))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (zero, one) = (Q::from_i64(0), Q::from_i64(1));
    let mut checked = 0;
    let mut ok = true;
    for _ in 0..50 {
        for n in 1..=10usize {
            let f = BinaryForm::from_monomial((0..=n).map(|_| random_rational(&mut rng)).collect()).unwrap();
            // f(-y, x) by direct substitution.
            let rotated = f.substitute(&zero, &-one.clone(), &one, &zero);
            ok &= f.apply_l(n).unwrap() == rotated;
            for k in 0..=n {
                let lhs = f.apply_l(k).unwrap();
                let rhs = rotated.apply_l(n - k).unwrap();
                let rhs = if (n - k) % 2 == 0 { rhs } else { rhs.neg() };
                ok &= lhs == rhs;
                checked += 1;
            }
        }
    }
    outcome(ok, format!("{checked} exact exchange checks and 500 rotation checks"))
}

fn normalized(d: &BinaryForm) -> Vec<f64> {
    let m = d.coeffs().iter().copied().fold(0.0_f64, |m, v| if v.abs() > m.abs() { v } else { m });
    d.coeffs().iter().map(|v| v / m).collect()
}

fn same_up_to_scale(d: &BinaryForm, want: &BinaryForm) -> bool {
    normalized(d).iter().zip(normalized(want)).all(|(a, b)| (a - b).abs() <= 1e-8)
}

fn spans(h: &BinaryForm, r1: &[i64], r2: &[i64]) -> bool {
    let (q1, q2) = apolar_pencil_even_exact(&h.to_exact()).unwrap();
    let to_q = |c: &[i64]| c.iter().map(|&v| Q::from_i64(v)).collect::<Vec<_>>();
    let rows = [q1.coeffs().to_vec(), q2.coeffs().to_vec(), to_q(r1), to_q(r2)];
    // Both reference forms are combinations of the computed pair, via the
    // 2x2 minors of the stacked matrix.
    let minor = |a: &[Q], b: &[Q], i: usize, j: usize| a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
    let m = rows[0].len();
    let basis_rank2 = (0..m).any(|i| (i + 1..m).any(|j| !minor(&rows[0], &rows[1], i, j).is_zero()));
    let in_span = |r: &[Q]| {
        (0..m).all(|i| {
            (i + 1..m).all(|j| {
                (j + 1..m).all(|k| {
                    let det = rows[0][i].clone() * minor(&rows[1], r, j, k) - rows[0][j].clone() * minor(&rows[1], r, i, k)
                        + rows[0][k].clone() * minor(&rows[1], r, i, j);
                    det.is_zero()
                })
            })
        })
    };
    basis_rank2 && in_span(&rows[2]) && in_span(&rows[3])
}

fn criterion_7() -> Outcome {
    let form = |c: &[f64]| BinaryForm::from_monomial(c.to_vec()).unwrap();
    let quintic_ok = generic_real_rank_test(&quintic()).unwrap().verdict == Verdict::ExceedsGeneric;
    let cusp = form(&[1.0, 0.0, 0.0, 0.0, 15.0, 0.0, 0.0]);
    let node = form(&[1.0, 0.0, 5.0, 0.0, -5.0, 0.0, -1.0]);
    let rc = generic_real_rank_test(&cusp).unwrap();
    let rn = generic_real_rank_test(&node).unwrap();
    let verdicts_ok = (rc.verdict, rc.boundary_component) == (Verdict::OnBoundary, Some(BoundaryComponent::Cusp))
        && (rn.verdict, rn.boundary_component) == (Verdict::OnBoundary, Some(BoundaryComponent::Node));
    // Pencils in the listed order: {u v^3, u^4 - v^4} and {(u-v)^2 (u+v)^2, u v (u^2 + v^2)}.
    let (c1, c2) = ([0, 1, 0, 0, 0], [-1, 0, 0, 0, 1]);
    let (n1, n2) = ([1, 0, -2, 0, 1], [0, 1, 0, 1, 0]);
    let span_ok = spans(&cusp, &c1, &c2) && spans(&node, &n1, &n2);
    let as_f = |c: &[i64]| form(&c.iter().map(|&v| v as f64).collect::<Vec<_>>());
    let dc = pencil_discriminant(&as_f(&c1), &as_f(&c2)).unwrap();
    let dn = pencil_discriminant(&as_f(&n1), &as_f(&n2)).unwrap();
    // (27 s^4 + 256 t^4) t^2 and (16 s^2 + t^2)^2 t^2, ascending powers of s.
    let disc_ok = same_up_to_scale(&dc, &form(&[256.0, 0.0, 0.0, 0.0, 27.0, 0.0, 0.0]))
        && same_up_to_scale(&dn, &form(&[1.0, 0.0, 32.0, 0.0, 256.0, 0.0, 0.0]));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut equals = 0;
    for j in 0..20 {
        let k = 2 + j % 5;
        let n = 2 * k - 1;
        let mut pts: Vec<(i64, i64)> = Vec::new();
        while pts.len() < k {
            let p = (rng.random_range(-4i64..=4), rng.random_range(-4i64..=4));
            if p != (0, 0) && pts.iter().all(|q| q.0 * p.1 != q.1 * p.0) {
                pts.push(p);
            }
        }
        let h = pts.iter().fold(BinaryForm::zero(n), |acc, &(a, b)| {
            acc.add(&BinaryForm::linear(a as f64, b as f64).pow(n)).unwrap()
        });
        if generic_real_rank_test(&h).map(|r| r.verdict) == Ok(Verdict::EqualsGeneric) {
            equals += 1;
        }
    }
    outcome(
        quintic_ok && verdicts_ok && span_ok && disc_ok && equals == 20,
        format!(
            "quintic {quintic_ok}, sextic verdicts {verdicts_ok}, pencils {span_ok}, discriminants {disc_ok}, \
             {equals}/20 decomposable forms EQUALS_GENERIC"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut seen = 0;
    let mut worst = 0.0_f64;
    while seen < 100 {
        let n = rng.random_range(3usize..=12);
        let a = rng.random_range(2..=n);
        let h = BinaryForm::from_monomial((0..=n).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap();
        let Ok(sols) = solve_hook(&h, a) else { continue };
        let hn = h.norm_sq();
        for d in sols.iter().take(100 - seen) {
            let recon = h.sub(&d.f).unwrap().sub(&d.g).unwrap().norm_sq().sqrt();
            let orth = d.f.pairing(&d.g).unwrap().abs();
            let pyth = (d.g.norm_sq() + d.f.norm_sq() - hn).abs();
            worst = worst.max(recon.max(orth).max(pyth) / hn);
            seen += 1;
        }
    }
    outcome(worst < 1e-6, format!("{seen} outputs, worst relative residual {worst:e}"))
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [5usize, 7, 9] {
        let h = BinaryForm::special(n, SpecialKind::Cos);
        for a in 2..=n {
            let found = solve_hook(&h, a).map(|s| s.len()).unwrap_or(0);
            if found != n {
                ok = false;
                detail.push(format!("n={n} a={a}: {found}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut random_ok = 0;
    for _ in 0..30 {
        let n = rng.random_range(3usize..=10);
        let a = rng.random_range(2..=n);
        let h = BinaryForm::from_monomial((0..=n).map(|_| rng.random_range(-9i64..=9) as f64).collect()).unwrap();
        let l = h.to_exact().apply_l(a - 1).unwrap();
        let want = if l.is_zero() { 0 } else { distinct_real_roots_exact(&l) };
        let found = solve_hook(&h, a).map(|s| s.len()).unwrap_or(0);
        if found == want {
            random_ok += 1;
        } else {
            ok = false;
            detail.push(format!("random n={n} a={a}: {found} vs {want}"));
        }
    }
    outcome(ok, format!("special forms n in {{5,7,9}} all hooks, {random_ok}/30 random counts match {detail:?}"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "quintic hook reproduction", criterion_1),
        (2, "n = 15 hook reproduction", criterion_2),
        (3, "(3,2) general solver", criterion_3),
        (4, "determinant factorization", criterion_4),
        (5, "degree table audit", criterion_5),
        (6, "operator identities", criterion_6),
        (7, "real rank", criterion_7),
        (8, "conormal invariants", criterion_8),
        (9, "special ED degree", criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let t = Instant::now();
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        let note = if !out.pass && KNOWN_DEVIATIONS.contains(&id) { " [known deviation]" } else { "" };
        println!("{tag} criterion {id} ({name}){note}: {} [{:.2}s]", out.detail, t.elapsed().as_secs_f64());
        if !out.pass && note.is_empty() {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
