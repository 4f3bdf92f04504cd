//! The acceptance gate: one test (and one printed PASS/FAIL line) per
//! criterion. Exactness claims are checked as equalities of cyclotomic
//! numbers; real-path claims use the stated tolerances.

use hschur_core::experiments::{
    braiding_pairing, ctemp_condition_ii, oracle, padic, schur_cross_pi_rho, schur_cross_tt,
    schur_diag, schur_onedim, Caps, ExperimentReport, RadiusSchedule, Verdict,
};
use hschur_core::heisenberg::{
    sandwich_boxes, symdiff_ratio_bound, symdiff_ratio_montecarlo, ultrametric_symdiff_empty,
    FolnerBox, GroupElement,
};
use hschur_core::reps::{InfDimRep, OneDimRep};
use hschur_core::schwartz::padic::BallTerm;
use hschur_core::{
    padic_indicator, pow_rational, CycloNumber, FieldDesc, LocalScalar, PadicBallChar, RealGrid,
    RealValue, TestFunction,
};
use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ps(p: u64, n: i64, d: i64) -> LocalScalar {
    LocalScalar::padic(p, q(n, d))
}

fn report_line(name: &str, report: &ExperimentReport) {
    println!(
        "{name}: {}",
        if report.verdict == Verdict::Pass {
            "PASS"
        } else {
            "FAIL"
        }
    );
}

fn assert_pass(name: &str, report: &ExperimentReport) {
    report_line(name, report);
    assert_eq!(
        report.verdict,
        Verdict::Pass,
        "{name} failed: notes = {:?}, errors = {:?}",
        report.notes,
        report.records.iter().map(|r| r.abs_error).collect::<Vec<_>>()
    );
}

fn random_ball_char(rng: &mut ChaCha8Rng, p: u64, dim: usize) -> PadicBallChar {
    let n_terms = rng.random_range(1..=6usize);
    let terms: Vec<BallTerm> = (0..n_terms)
        .map(|_| {
            let rat = |rng: &mut ChaCha8Rng| q(rng.random_range(-8..9), (p * p) as i64);
            BallTerm {
                coeff: CycloNumber::from_rational(p, q(rng.random_range(-3..4), rng.random_range(1..4))),
                center: (0..dim).map(|_| rat(rng)).collect(),
                scale: (0..dim).map(|_| rng.random_range(-2..=2)).collect(),
                freq: (0..dim).map(|_| rat(rng)).collect(),
            }
        })
        .collect();
    PadicBallChar::new(p, dim, terms).unwrap()
}

#[test]
fn criterion_1_fourier_wigner_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..50 {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let f = TestFunction::Padic(random_ball_char(&mut rng, p, 2));
        let v = f.fourier_wigner().unwrap();
        assert_eq!(
            f.norm_sq().unwrap().as_exact().unwrap(),
            v.norm_sq().unwrap().as_exact().unwrap(),
            "p-adic unitarity failed on sample {i}"
        );
    }
    let h = 1.0 / 64.0;
    let base = RealGrid::indicator_box(&[-2.0, -2.0], &[2.0, 2.0], h).unwrap();
    let samples: Vec<Complex64> = (0..base.samples().len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let f = TestFunction::Real(RealGrid::new(base.axes().to_vec(), samples).unwrap());
    let v = f.fourier_wigner().unwrap();
    let n0 = f.norm_sq().unwrap().to_c64().re;
    let n1 = v.norm_sq().unwrap().to_c64().re;
    assert!((n0 - n1).abs() <= 0.01 * n0, "real unitarity: {n0} vs {n1}");
    println!("criterion 1 (Fourier-Wigner unitarity): PASS");
}

#[test]
fn criterion_2_square_integral_identity() {
    let f = padic_indicator(2, &[0], 0);
    let caps = Caps::default();
    for (num, den, want_num, want_den) in [(1, 1, 1, 1), (2, 1, 2, 1), (1, 2, 1, 2)] {
        let rep = InfDimRep::new(ps(2, num, den)).unwrap();
        let s = rep.coeff_surface(&f, &f).unwrap();
        let total = s.total_square_integral().unwrap();
        assert_eq!(
            total.as_exact().unwrap().try_rational().unwrap(),
            q(want_num, want_den),
            "t = {num}/{den}"
        );
    }
    // cross-check t = 1 against the brute-force oracle at r = 1
    let rep = InfDimRep::new(ps(2, 1, 1)).unwrap();
    let slow = oracle::schur_oracle_padic(&rep, &rep, &f, &f, &f, &f, 0, &caps).unwrap();
    assert!(slow.try_rational().unwrap().is_one());
    println!("criterion 2 (matrix-coefficient square integral): PASS");
}

#[test]
fn criterion_3_schur_diagonal() {
    let caps = Caps::default();
    // Q_2: mixed vectors, limit <f1,f3> conj(<f2,f4>) = 1/2 exactly
    let f1 = padic_indicator(2, &[0], 0);
    let f3 = padic_indicator(2, &[0], 1); // 1_{2 Z_2}
    let schedule = RadiusSchedule::padic(2, vec![0, 1, 2]).unwrap();
    let rep = schur_diag(
        "acc3_padic",
        &ps(2, 1, 1),
        &f1,
        &f1,
        &f3,
        &f1,
        &schedule,
        0.0,
        &caps,
    )
    .unwrap();
    for rec in &rep.records {
        if rec.r >= rep.threshold_r.unwrap() {
            assert_eq!(rec.abs_error, 0.0, "not exact at r = {}", rec.r);
            assert!((rec.value.to_c64().re - 0.5).abs() < 1e-15);
        }
    }
    assert_pass("criterion 3 (Schur diagonal, Q_2)", &rep);

    // real: f = 1_{[0,1]}, h = 1/64, r up to 32, within 5% of 1
    let f = TestFunction::Real(RealGrid::indicator_box(&[0.0], &[1.0], 1.0 / 64.0).unwrap());
    let schedule = RadiusSchedule::real(vec![4.0, 8.0, 16.0, 32.0]).unwrap();
    let rep = schur_diag(
        "acc3_real",
        &LocalScalar::Real(1.0),
        &f,
        &f,
        &f,
        &f,
        &schedule,
        0.05,
        &caps,
    )
    .unwrap();
    assert_pass("criterion 3 (Schur diagonal, R)", &rep);
}

#[test]
fn criterion_4_schur_cross_terms() {
    let caps = Caps::default();
    let f = padic_indicator(2, &[0], 0);

    let schedule = RadiusSchedule::padic(2, vec![0, 1, 2]).unwrap();
    let rep = schur_cross_tt(
        "acc4_tt",
        &ps(2, 1, 1),
        &ps(2, 3, 1),
        &f,
        &f,
        &f,
        &f,
        &schedule,
        0.0,
        &caps,
    )
    .unwrap();
    // exactly 0 once r^2 >= 4, i.e. from r = 2 on
    assert!(rep.threshold_r.unwrap() <= 2.0);
    for rec in rep.records.iter().filter(|rec| rec.r >= 2.0) {
        assert!(rec.value.to_c64().norm() == 0.0 && rec.abs_error == 0.0);
    }
    assert_pass("criterion 4 (cross t1 != t2, Q_2)", &rep);

    let rep = schur_cross_pi_rho(
        "acc4_pirho",
        &ps(2, 1, 1),
        &[ps(2, 1, 2)],
        &[ps(2, 0, 1)],
        &f,
        &f,
        &schedule,
        0.0,
        &caps,
    )
    .unwrap();
    // exactly 0 once r^2 >= 2, i.e. from r = 2 on
    for rec in rep.records.iter().filter(|rec| rec.r >= 2.0) {
        assert!(rec.value.to_c64().norm() == 0.0 && rec.abs_error == 0.0);
    }
    assert_pass("criterion 4 (cross pi vs rho, Q_2)", &rep);

    let rep = schur_onedim(
        "acc4_onedim",
        &[ps(2, 1, 2)],
        &[ps(2, 0, 1)],
        &[ps(2, 0, 1)],
        &[ps(2, 0, 1)],
        &schedule,
        0.0,
    )
    .unwrap();
    for rec in rep.records.iter().filter(|rec| rec.r >= 2.0) {
        assert!(rec.value.to_c64().norm() == 0.0 && rec.abs_error == 0.0);
    }
    assert_pass("criterion 4 (one-dimensional distinct, Q_2)", &rep);

    // real analogues, final |value| < 0.05 at r = 16
    let g = TestFunction::Real(RealGrid::indicator_box(&[0.0], &[1.0], 1.0 / 64.0).unwrap());
    let schedule_r = RadiusSchedule::real(vec![4.0, 8.0, 16.0]).unwrap();
    let rep = schur_cross_tt(
        "acc4_tt_real",
        &LocalScalar::Real(1.0),
        &LocalScalar::Real(2.0),
        &g,
        &g,
        &g,
        &g,
        &schedule_r,
        0.05,
        &caps,
    )
    .unwrap();
    assert!(rep.records.last().unwrap().value.to_c64().norm() < 0.05);
    assert_pass("criterion 4 (cross t1 != t2, R)", &rep);

    let rep = schur_cross_pi_rho(
        "acc4_pirho_real",
        &LocalScalar::Real(1.0),
        &[LocalScalar::Real(0.5)],
        &[LocalScalar::Real(0.25)],
        &g,
        &g,
        &schedule_r,
        0.05,
        &caps,
    )
    .unwrap();
    assert!(rep.records.last().unwrap().value.to_c64().norm() < 0.05);
    assert_pass("criterion 4 (cross pi vs rho, R)", &rep);

    let rep = schur_onedim(
        "acc4_onedim_real",
        &[LocalScalar::Real(0.5)],
        &[LocalScalar::Real(0.0)],
        &[LocalScalar::Real(0.0)],
        &[LocalScalar::Real(0.0)],
        &schedule_r,
        0.05,
    )
    .unwrap();
    assert!(rep.records.last().unwrap().value.to_c64().norm() < 0.05);
    assert_pass("criterion 4 (one-dimensional distinct, R)", &rep);
}

#[test]
fn criterion_5_onedim_equal_parameters() {
    let schedule = RadiusSchedule::padic(2, vec![0, 1, 2, 3]).unwrap();
    let z = [ps(2, 1, 2)];
    let x = [ps(2, 3, 1)];
    let rep = schur_onedim("acc5_padic", &z, &x, &z, &x, &schedule, 0.0).unwrap();
    for rec in &rep.records {
        assert!(
            rec.value.as_exact().unwrap().try_rational().unwrap().is_one(),
            "not exactly 1 at r = {}",
            rec.r
        );
    }
    assert_pass("criterion 5 (one-dimensional equal, Q_2)", &rep);

    let schedule = RadiusSchedule::real(vec![2.0, 4.0, 8.0]).unwrap();
    let z = [LocalScalar::Real(0.3)];
    let x = [LocalScalar::Real(0.7)];
    let rep = schur_onedim("acc5_real", &z, &x, &z, &x, &schedule, 1e-12).unwrap();
    for rec in &rep.records {
        assert_eq!(rec.value.to_c64(), Complex64::new(1.0, 0.0));
    }
    assert_pass("criterion 5 (one-dimensional equal, R)", &rep);
}

#[test]
fn criterion_6_braiding() {
    let caps = Caps::default();
    let f = padic_indicator(2, &[0], 0);
    let phi = f.tensor(&f).unwrap();
    let schedule = RadiusSchedule::padic(2, vec![0, 1, 2]).unwrap();
    let rep = braiding_pairing("acc6_padic", &ps(2, 1, 1), &phi, &phi, &schedule, 0.0, &caps)
        .unwrap();
    assert!(rep.threshold_r.unwrap() <= 1.0);
    for rec in &rep.records {
        assert!(rec.value.as_exact().unwrap().try_rational().unwrap().is_one());
    }
    assert_pass("criterion 6 (braiding diagonal, Q_2)", &rep);

    // antisymmetric probe: phi1 = f (x) g, phi2 = g (x) f with f, g
    // orthonormal; the flip limit is <g (x) f, g (x) f> = 1, while an
    // identity-operator limit would give <f,g><g,f> = 0.
    let g = f.modulate(&[ps(2, 1, 2)]).unwrap();
    assert!(f.inner(&g).unwrap().as_exact().unwrap().is_zero());
    let phi1 = f.tensor(&g).unwrap();
    let phi2 = g.tensor(&f).unwrap();
    let rep = braiding_pairing("acc6_flip", &ps(2, 1, 1), &phi1, &phi2, &schedule, 0.0, &caps)
        .unwrap();
    let last = rep.records.last().unwrap();
    assert!(
        last.value.as_exact().unwrap().try_rational().unwrap().is_one(),
        "flip probe did not converge to 1"
    );
    assert_pass("criterion 6 (braiding flip probe, Q_2)", &rep);

    // real: within 5% at r = 16
    let fr = TestFunction::Real(RealGrid::indicator_box(&[0.0], &[1.0], 1.0 / 32.0).unwrap());
    let phir = fr.tensor(&fr).unwrap();
    let schedule = RadiusSchedule::real(vec![4.0, 8.0, 16.0]).unwrap();
    let rep = braiding_pairing(
        "acc6_real",
        &LocalScalar::Real(1.0),
        &phir,
        &phir,
        &schedule,
        0.05,
        &caps,
    )
    .unwrap();
    assert_pass("criterion 6 (braiding, R)", &rep);
}

#[test]
fn criterion_7_folner_geometry() {
    for p in [2u64, 3] {
        for re in -2i64..=2 {
            for ke in -2i64..=2 {
                let r = pow_rational(p, re);
                let k = pow_rational(p, ke);
                let empty = ultrametric_symdiff_empty(p, &r, &k).unwrap();
                assert_eq!(empty, re >= ke, "p={p}, r=p^{re}, k=p^{ke}");
            }
        }
    }
    // witness for a false branch: p = 2, r = 1, k = 2
    let f_box = FolnerBox::new(
        FieldDesc::Padic { p: 2 },
        1,
        RealValue::Exact(BigRational::one()),
    )
    .unwrap();
    let g2 = GroupElement::new(vec![ps(2, 1, 2)], vec![ps(2, 0, 1)], ps(2, 0, 1)).unwrap();
    let point = GroupElement::new(vec![ps(2, 0, 1)], vec![ps(2, 1, 1)], ps(2, 0, 1)).unwrap();
    assert!(f_box.contains(&point).unwrap());
    let moved = g2.mul(&point).unwrap().mul(&g2.inv().unwrap()).unwrap();
    assert!(
        !f_box.contains(&moved).unwrap(),
        "witness did not leave the box"
    );

    let bound = symdiff_ratio_bound(100.0, 1.0, 1).unwrap();
    assert!((bound - 0.1206).abs() < 1e-4, "bound(100,1,1) = {bound}");
    assert!(symdiff_ratio_bound(1000.0, 1.0, 1).unwrap() < 0.013);

    let sw = sandwich_boxes(100.0, 1.0, 1).unwrap();
    let mk = |a: f64, b: f64, c: f64| {
        GroupElement::new(
            vec![LocalScalar::Real(a)],
            vec![LocalScalar::Real(b)],
            LocalScalar::Real(c),
        )
        .unwrap()
    };
    for (seed, (g1, g2)) in [
        (mk(1.0, 1.0, 1.0), mk(-1.0, 1.0, -1.0)),
        (mk(0.5, -1.0, 1.0), mk(1.0, 0.0, 0.0)),
    ]
    .into_iter()
    .enumerate()
    {
        let est =
            symdiff_ratio_montecarlo(100.0, 1.0, 1, &g1, &g2, 40_000, seed as u64 + 11).unwrap();
        assert!(
            est.value <= bound + 3.0 * est.stderr,
            "Monte Carlo {} exceeds bound {bound} + 3 se {}",
            est.value,
            est.stderr
        );
    }
    println!("criterion 7 (Folner geometry): PASS");
}

#[test]
fn criterion_8_ctemperedness_padic() {
    let caps = Caps::default();
    let f = padic_indicator(2, &[0], 0);
    // k = 2 = 2^1: exactly 0 for r >= k, in particular for r >= k p = 4
    let schedule = RadiusSchedule::padic(2, vec![1, 2, 3]).unwrap();
    let rep = ctemp_condition_ii(
        "acc8_padic",
        &ps(2, 1, 1),
        &f,
        &f,
        &RealValue::Exact(q(2, 1)),
        &schedule,
        0.0,
        &caps,
    )
    .unwrap();
    for rec in rep.records.iter().filter(|rec| rec.r >= 2.0) {
        assert!(rec.value.as_exact().unwrap().is_zero() && rec.abs_error == 0.0);
    }
    assert_pass("criterion 8 (c-temperedness, Q_2)", &rep);
}

#[test]
fn criterion_8_ctemperedness_real() {
    let caps = Caps::default();
    let f = TestFunction::Real(RealGrid::indicator_box(&[0.0], &[1.0], 1.0 / 64.0).unwrap());
    let norm4 = {
        let n = f.norm_sq().unwrap().to_c64().re;
        n * n
    };
    let schedule = RadiusSchedule::real(vec![4.0, 8.0, 16.0, 32.0]).unwrap();
    let rep = ctemp_condition_ii(
        "acc8_real",
        &LocalScalar::Real(1.0),
        &f,
        &f,
        &RealValue::Approx(1.0),
        &schedule,
        0.05 * norm4,
        &caps,
    )
    .unwrap();
    // the gap must be positive and decreasing regardless of the verdict
    let gaps: Vec<f64> = rep.records.iter().map(|rec| rec.value.to_c64().re).collect();
    for w in gaps.windows(2) {
        assert!(w[0] > 0.0 && w[1] > 0.0 && w[1] < w[0], "gaps {gaps:?}");
    }
    assert_pass("criterion 8 (c-temperedness, R)", &rep);
}

#[test]
fn criterion_9_oracle_agreement() {
    let caps = Caps::default();
    let p2 = |center: i64, scale: i64| padic_indicator(2, &[center], scale);
    let f = p2(0, 0);
    let f3 = p2(0, 1);
    let rep1 = InfDimRep::new(ps(2, 1, 1)).unwrap();
    let rep3 = InfDimRep::new(ps(2, 3, 1)).unwrap();

    // Schur diagonal (criteria 2-3 instances)
    let s = padic::schur_pair_surface(&rep1, &rep1, &f, &f, &f3, &f).unwrap();
    for m in 0..3 {
        let fast = padic::box_integral(&s, m).unwrap();
        let slow =
            oracle::schur_oracle_padic(&rep1, &rep1, &f, &f, &f3, &f, m, &caps).unwrap();
        assert_eq!(fast, slow, "schur diag m = {m}");
    }

    // cross t1 != t2 (criterion 4): full-box oracle vs driver value
    let schedule = RadiusSchedule::padic(2, vec![0, 1]).unwrap();
    let rep = schur_cross_tt(
        "acc9_tt",
        &ps(2, 1, 1),
        &ps(2, 3, 1),
        &f,
        &f,
        &f,
        &f,
        &schedule,
        0.0,
        &caps,
    )
    .unwrap();
    for (m, rec) in (0i64..).zip(&rep.records) {
        let slow =
            oracle::schur_oracle_padic(&rep1, &rep3, &f, &f, &f, &f, m, &caps).unwrap();
        assert_eq!(rec.value.as_exact().unwrap(), &slow, "cross tt m = {m}");
    }

    // cross pi vs rho (criterion 4)
    let rho = OneDimRep::new(vec![ps(2, 1, 2)], vec![ps(2, 0, 1)]).unwrap();
    let rep = schur_cross_pi_rho(
        "acc9_pirho",
        &ps(2, 1, 1),
        &[ps(2, 1, 2)],
        &[ps(2, 0, 1)],
        &f,
        &f,
        &schedule,
        0.0,
        &caps,
    )
    .unwrap();
    for (m, rec) in (0i64..).zip(&rep.records) {
        let slow = oracle::pi_rho_oracle_padic(&rep1, &rho, &f, &f, m, &caps).unwrap();
        assert_eq!(rec.value.as_exact().unwrap(), &slow, "pi-rho m = {m}");
    }

    // one-dimensional characters (criteria 4-5)
    let rho1 = OneDimRep::new(vec![ps(2, 1, 2)], vec![ps(2, 0, 1)]).unwrap();
    let rho2 = OneDimRep::new(vec![ps(2, 0, 1)], vec![ps(2, 0, 1)]).unwrap();
    let rep = schur_onedim(
        "acc9_onedim",
        &[ps(2, 1, 2)],
        &[ps(2, 0, 1)],
        &[ps(2, 0, 1)],
        &[ps(2, 0, 1)],
        &schedule,
        0.0,
    )
    .unwrap();
    for (m, rec) in (0i64..).zip(&rep.records) {
        let slow = oracle::onedim_oracle_padic(2, &rho1, &rho2, m, &caps).unwrap();
        assert_eq!(rec.value.as_exact().unwrap(), &slow, "onedim m = {m}");
    }

    // braiding (criterion 6)
    let phi = f.tensor(&f).unwrap();
    let h = padic::braiding_surface(&rep1, phi.as_padic().unwrap(), phi.as_padic().unwrap())
        .unwrap();
    for m in 0..2 {
        let fast = padic::box_integral(&h, m).unwrap();
        let slow = oracle::braiding_oracle_padic(&rep1, &phi, &phi, m, &caps).unwrap();
        assert_eq!(fast, slow, "braiding m = {m}");
    }

    // real fast paths vs the half-spacing oracle, within 1%
    let gr = TestFunction::Real(RealGrid::indicator_box(&[0.0], &[1.0], 1.0 / 8.0).unwrap());
    let rep_r = InfDimRep::new(LocalScalar::Real(1.0)).unwrap();
    let r = 2.0;
    let b_steps = (4.0 * r / (1.0 / 8.0)) as usize; // spacing h/2
    let fast = hschur_core::experiments::real::schur_pair(
        1.0,
        1.0,
        gr.as_real().unwrap(),
        gr.as_real().unwrap(),
        gr.as_real().unwrap(),
        gr.as_real().unwrap(),
        r,
    )
    .unwrap();
    let slow =
        oracle::schur_oracle_real(&rep_r, &rep_r, &gr, &gr, &gr, &gr, r, b_steps, &caps).unwrap();
    assert!(
        (fast - slow).norm() <= 0.01 * slow.norm().max(1.0),
        "real schur: fast {fast} vs oracle {slow}"
    );

    let phir = gr.tensor(&gr).unwrap();
    let fast = hschur_core::experiments::real::braiding_pair(
        1.0,
        phir.as_real().unwrap(),
        phir.as_real().unwrap(),
        r,
    )
    .unwrap();
    let slow = oracle::braiding_oracle_real(&rep_r, &phir, &phir, r, b_steps, &caps).unwrap();
    assert!(
        (fast - slow).norm() <= 0.01 * slow.norm().max(1.0),
        "real braiding: fast {fast} vs oracle {slow}"
    );
    println!("criterion 9 (oracle agreement): PASS");
}
