use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootloci::critical::{verify_conormal, MultipleRoot};
use rootloci::general_solver::*;
use rootloci::hook_solver::solve_hook;
use rootloci::partitions::table_row;
use rootloci::{BinaryForm, Partition, ProjectivePoint};

fn quintic() -> BinaryForm {
    BinaryForm::from_monomial(vec![1.0, 5.0, 0.0, -10.0, 0.0, 1.0]).unwrap()
}

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn root(s: f64, t: f64, m: usize) -> MultipleRoot {
    MultipleRoot { point: ProjectivePoint::new(s, t).unwrap(), multiplicity: m }
}

fn close(a: &BinaryForm, b: &BinaryForm, tol: f64) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn primal_form_examples() {
    let params = PrimalParams { alpha: 1.0, roots: vec![root(0.0, 1.0, 3), root(1.0, 1.0, 2)] };
    let want = BinaryForm::monomial(1, 1).pow(3).mul(&BinaryForm::linear(1.0, -1.0).pow(2));
    assert_eq!(primal_form(&params), want);
    let zero = PrimalParams { alpha: 0.0, ..params.clone() };
    assert!(primal_form(&zero).is_zero());
    let h = quintic();
    assert_eq!(distance_sq(&h, &zero).unwrap(), h.norm_sq());
    assert_eq!(distance_sq(&want, &params).unwrap(), 0.0);
}

#[test]
fn reference_row_distance() {
    // Chart t = v = 1: f = alpha (x - s y)^3 (x - u y)^2.
    let params = PrimalParams::from_affine_chart(1.817238, &[0.673272, -1.316853], &p(&[3, 2])).unwrap();
    let (alpha, coords) = params.affine_chart().unwrap();
    assert!((alpha - 1.817238).abs() < 1e-12 && (coords[1] + 1.316853).abs() < 1e-12);
    let d = distance_sq(&quintic(), &params).unwrap();
    // The reference column lists |f|^2 = |h|^2 - d for this row.
    assert!((d - 9.275322).abs() < 1e-5, "{d}");
    let f = primal_form(&params);
    assert!((f.norm_sq() - 7.724678).abs() < 1e-5);
}

#[test]
fn quintic_three_two_critical_points() {
    let sols = solve_general(&quintic(), &p(&[3, 2]), &GeneralOptions::default()).unwrap();
    assert_eq!(sols.len(), 5);
    assert!(sols.len() <= table_row(&p(&[3, 2])).unwrap().ed_generic as usize);
    let in_chart: Vec<_> = sols
        .iter()
        .filter(|d| PrimalParams { alpha: d.alpha.unwrap(), roots: d.roots.clone() }.in_affine_chart())
        .collect();
    assert_eq!(in_chart.len(), 4);
    let mut duals: Vec<f64> = in_chart.iter().map(|d| d.dist_sq_dual).collect();
    duals.sort_by(f64::total_cmp);
    for (got, want) in duals.iter().zip([7.724678, 8.643701, 12.017703, 13.105926]) {
        assert!((got - want).abs() < 1e-6, "{duals:?}");
    }
    // The fifth point has its double root at infinity.
    let out = sols.iter().find(|d| !d.roots.iter().all(|r| r.point.t != 0.0)).unwrap();
    assert!(close(&out.f, &BinaryForm::from_monomial(vec![0.0, 0.0, 0.0, -10.0, 0.0, 0.0]).unwrap(), 1e-8));
    assert!((out.dist_sq_primal - 7.0).abs() < 1e-8);
    for d in &sols {
        assert!(verify_conormal(&d.f, &d.g, &d.partition, 1e-6).unwrap());
        assert!(d.residuals.reconstruction <= 1e-6);
        assert!(d.residuals.orthogonality <= 1e-6);
        assert!(d.residuals.kernel <= 1e-6);
    }
}

#[test]
fn worst_point_reproduces_reference_forms() {
    let sols = solve_general(&quintic(), &p(&[3, 2]), &GeneralOptions::default()).unwrap();
    let worst = sols
        .iter()
        .filter(|d| d.roots.iter().all(|r| r.point.t != 0.0))
        .max_by(|a, b| a.dist_sq_dual.total_cmp(&b.dist_sq_dual))
        .unwrap();
    let f = BinaryForm::from_monomial(vec![1.79341, 4.34203, 0.0137459, -5.15521, -0.911262, 1.81528]).unwrap();
    let g = BinaryForm::from_monomial(vec![-0.793414, 0.657973, -0.0137459, -4.84479, 0.911262, -0.81528]).unwrap();
    assert!(close(&worst.f, &f, 1e-5), "{:?}", worst.f.coeffs());
    assert!(close(&worst.g, &g, 1e-5), "{:?}", worst.g.coeffs());
    let (alpha, coords) = PrimalParams { alpha: worst.alpha.unwrap(), roots: worst.roots.clone() }
        .affine_chart()
        .unwrap();
    assert!((alpha - 1.815280).abs() < 1e-5);
    assert!((coords[0] + 0.785143).abs() < 1e-5 && (coords[1] - 1.428712).abs() < 1e-5);
}

#[test]
fn gad_cofactors_of_worst_point() {
    let sols = solve_general(&quintic(), &p(&[3, 2]), &GeneralOptions::default()).unwrap();
    for d in &sols {
        let cof = gad_decompose(&d.g, &d.roots, 1e-8).unwrap();
        assert_eq!(cof.len(), 2);
        assert_eq!((cof[0].degree(), cof[1].degree()), (1, 0));
        let mut rebuilt = BinaryForm::zero(5);
        for (r, gi) in d.roots.iter().zip(&cof) {
            rebuilt = rebuilt.add(&r.point.orthogonal_form().pow(7 - r.multiplicity).mul(gi)).unwrap();
        }
        let err = d.g.sub(&rebuilt).unwrap().norm_sq().sqrt();
        assert!(err <= 1e-8 * d.g.norm_sq().sqrt(), "{err}");
    }
    assert!(gad_decompose(&BinaryForm::zero(5), &sols[0].roots, 1e-8).unwrap().iter().all(|c| c.is_zero()));
}

#[test]
fn dual_point_examples() {
    let h = quintic();
    assert!(dual_point(&h, &h).unwrap().is_zero());
    let f = BinaryForm::monomial(5, 5);
    assert_eq!(dual_point(&h, &f).unwrap(), h.sub(&f).unwrap());
}

#[test]
fn hook_partition_agrees_with_hook_solver() {
    let h = quintic();
    let hooks = solve_hook(&h, 3).unwrap();
    let general = solve_general(&h, &p(&[3, 1, 1]), &GeneralOptions::default()).unwrap();
    for d in &general {
        assert!(hooks.iter().any(|k| close(&k.g, &d.g, 1e-6)), "{:?}", d.g.coeffs());
    }
}

#[test]
fn determinism_across_runs_and_thread_counts() {
    let h = BinaryForm::from_monomial(vec![2.0, -1.0, 3.0, 0.5, -2.0, 1.0, 1.5]).unwrap();
    let lam = p(&[3, 2, 1]);
    let opts = GeneralOptions { starts: 120, seed: 7, ..Default::default() };
    let a = solve_general(&h, &lam, &opts).unwrap();
    let b = solve_general(&h, &lam, &opts).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = single.install(|| solve_general(&h, &lam, &opts).unwrap());
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let d = four.install(|| solve_general(&h, &lam, &opts).unwrap());
    let bits = |v: &[rootloci::critical::CriticalDecomposition]| serde_json::to_string(v).unwrap();
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(bits(&a), bits(&c));
    assert_eq!(bits(&a), bits(&d));
}

#[test]
fn rejects_bad_inputs() {
    let h = quintic();
    assert!(solve_general(&h, &p(&[2, 2]), &GeneralOptions::default()).is_err());
    assert!(solve_general(&h, &p(&[1, 1, 1, 1, 1]), &GeneralOptions::default()).is_err());
    assert!(solve_general(&BinaryForm::zero(5), &p(&[3, 2]), &GeneralOptions::default()).is_err());
}

fn random_params(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let mut v = vec![rng.random_range(-2.0..2.0)];
    v.extend((0..d).map(|_| rng.random_range(0.0..std::f64::consts::PI)));
    v
}

/// Independent evaluation: alpha * prod (sin x - cos y)^lambda_i.
fn oracle_distance(h: &BinaryForm, lam: &Partition, q: &[f64]) -> f64 {
    let mut f = BinaryForm::from_monomial(vec![q[0]]).unwrap();
    for (th, &m) in q[1..].iter().zip(lam.parts()) {
        f = f.mul(&BinaryForm::linear(th.sin(), -th.cos()).pow(m));
    }
    h.sub(&f).unwrap().norm_sq()
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for parts in [&[3, 2][..], &[2, 2][..], &[4, 2, 1][..], &[3, 3][..], &[2, 2, 2][..]] {
        let lam = p(parts);
        let n = lam.size();
        let h = BinaryForm::from_monomial((0..=n).map(|_| rng.random_range(-3.0..3.0)).collect()).unwrap();
        for _ in 0..100 {
            let q = random_params(&mut rng, lam.len());
            assert!((angle_distance_sq(&h, &lam, &q).unwrap() - oracle_distance(&h, &lam, &q)).abs() < 1e-9);
            let grad = angle_distance_gradient(&h, &lam, &q).unwrap();
            let step = 1e-6;
            let fd: Vec<f64> = (0..q.len())
                .map(|i| {
                    let (mut up, mut dn) = (q.clone(), q.clone());
                    up[i] += step;
                    dn[i] -= step;
                    (oracle_distance(&h, &lam, &up) - oracle_distance(&h, &lam, &dn)) / (2.0 * step)
                })
                .collect();
            let scale = fd.iter().chain(&grad).fold(1.0_f64, |m, v| m.max(v.abs()));
            for (a, b) in grad.iter().zip(&fd) {
                assert!((a - b).abs() <= 1e-5 * scale, "{parts:?}: {grad:?} vs {fd:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn forms_on_the_locus_are_found_at_distance_zero(seed in any::<u64>(), which in 0usize..3) {
        let lam = p([&[3, 2][..], &[2, 2, 1][..], &[4, 2][..]][which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = loop {
            let q = random_params(&mut rng, lam.len());
            let sep = (1..q.len()).all(|i| (i + 1..q.len()).all(|j| (q[i] - q[j]).sin().abs() > 0.2));
            if sep && q[0].abs() > 0.3 {
                break q;
            }
        };
        let mut h = BinaryForm::from_monomial(vec![q[0]]).unwrap();
        for (th, &m) in q[1..].iter().zip(lam.parts()) {
            h = h.mul(&BinaryForm::linear(th.sin(), -th.cos()).pow(m));
        }
        prop_assert_eq!(h.multiplicity_structure(1e-6).unwrap(), lam.clone());
        let sols = solve_general(&h, &lam, &GeneralOptions::default()).unwrap();
        prop_assert!(sols[0].dist_sq_primal <= 1e-16 * h.norm_sq());
        prop_assert!(sols.len() as u64 <= table_row(&lam).unwrap().ed_generic);
    }
}
