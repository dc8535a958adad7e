mod common;

use common::{dopri, random_state, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use strata_core::basis::{BasisKind, ModeIndex, SpectralField, Truncation};
use strata_core::dynamics::leray_project;
use strata_core::fields::{Alpha, FlowState};
use strata_core::linear::{
    classify_region, decay_envelope, eigen_table, eigensystem, propagate_linear, propagate_mode,
    write_eigen_csv, EnvelopeKind, PropagatorTable, Region,
};

const ALPHAS: [Alpha; 2] = [Alpha::Zero, Alpha::One];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn zero_n_mode_decouples() {
    let es = eigensystem(&ModeIndex::new_2d(0, 1), Alpha::One).unwrap();
    let q = std::f64::consts::FRAC_PI_2;
    assert!((es.lambda_plus - q * q).norm() < 1e-15);
    assert_eq!(es.lambda_minus, c(0.0));
    assert_eq!(es.region, Region::ZeroN);
    assert!(es.b_plus.is_none());
    assert!(eigensystem(&ModeIndex::new_2d(1, 0), Alpha::Zero).is_err());
}

// Independent oracle: quadratic formula evaluated in double-double arithmetic
// (TwoSum/TwoProd splitting) for (n=1, q=1, alpha=0).
#[test]
fn d1_mode_eigenvalues_match_extended_precision() {
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }
    fn dd_add(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        let s = a.0 + b.0;
        let bb = s - a.0;
        let e = (a.0 - (s - bb)) + (b.0 - bb) + a.1 + b.1;
        let h = s + e;
        (h, e - (h - s))
    }
    fn dd_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        let (p, e) = two_prod(a.0, b.0);
        let e = e + a.0 * b.1 + a.1 * b.0;
        let h = p + e;
        (h, e - (h - p))
    }
    fn dd_div(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        let q1 = a.0 / b.0;
        let r = dd_add(a, dd_mul((-q1, 0.0), b));
        let q2 = r.0 / b.0;
        dd_add((q1, 0.0), (q2, 0.0))
    }
    // pi in double-double.
    let pi = (std::f64::consts::PI, 1.2246467991473532e-16);
    let pi2 = dd_mul(pi, pi);
    let nt2 = dd_mul((4.0, 0.0), pi2);
    let eta2 = dd_add(nt2, dd_mul((0.25, 0.0), pi2));
    let disc = dd_add((1.0, 0.0), dd_mul((-4.0, 0.0), dd_div(nt2, eta2)));
    assert!(disc.0 < 0.0);
    // Exact value: 1 - 16/(4 + 1/4) = -47/17.
    assert!((disc.0 + 47.0 / 17.0).abs() < 1e-15);
    let w = 0.5 * (-(disc.0 + disc.1)).sqrt();

    let es = eigensystem(&ModeIndex::new_2d(1, 1), Alpha::Zero).unwrap();
    assert_eq!(es.region, Region::D1);
    assert!((es.discriminant - disc.0).abs() < 1e-14);
    assert!((es.lambda_plus - Complex64::new(0.5, w)).norm() < 1e-15);
    assert!((es.lambda_minus - Complex64::new(0.5, -w)).norm() < 1e-15);
    assert_eq!(classify_region(&ModeIndex::new_2d(1, 1), Alpha::Zero).unwrap(), Region::D1);
}

#[test]
fn eigen_table_identities() {
    for trunc in [Truncation::new(2, 16, 32).unwrap(), Truncation::new(3, 4, 8).unwrap()] {
        for alpha in ALPHAS {
            let table = eigen_table(&trunc, alpha).unwrap();
            for es in &table {
                let (a, cc) = (es.a(), es.c());
                let (lp, lm) = (es.lambda_plus, es.lambda_minus);
                assert!((lp + lm - a).norm() <= 1e-12 * a);
                if cc > 0.0 {
                    assert!((lp * lm - cc).norm() <= 1e-12 * cc);
                }
                if let (Some(bp), Some(bm)) = (es.b_plus, es.b_minus) {
                    let dot = |x: [Complex64; 2], y: [Complex64; 2]| x[0] * y[0] + x[1] * y[1];
                    let scale = 1.0 + es.a_minus[0].norm() / cc;
                    assert!((dot(bp, es.a_plus) - 1.0).norm() < 1e-12 * scale);
                    assert!(dot(bp, es.a_minus).norm() < 1e-12 * scale);
                    assert!((dot(bm, es.a_minus) - 1.0).norm() < 1e-12 * scale);
                    assert!(dot(bm, es.a_plus).norm() < 1e-12 * scale);
                    // Reconstruct M = A diag(lambda) B, transposed: M^T A = A diag.
                    let mt = [[a, 1.0], [-cc, 0.0]];
                    for (v, l) in [(es.a_plus, lp), (es.a_minus, lm)] {
                        for r in 0..2 {
                            let lhs = mt[r][0] * v[0] + mt[r][1] * v[1];
                            assert!((lhs - l * v[r]).norm() < 1e-12 * (a + 1.0) * (1.0 + v[r].norm()));
                        }
                    }
                }
                if alpha == Alpha::One {
                    assert_ne!(es.region, Region::D1, "{}", es.mode);
                }
                let disc = es.discriminant;
                match es.region {
                    Region::D1 => assert!(disc <= 0.0),
                    Region::D2 => assert!(disc >= 0.0 && disc <= 0.25 * a * a),
                    Region::D3 => assert!(disc >= 0.25 * a * a),
                    Region::ZeroN => assert!(es.mode.is_zero_n()),
                }
            }
        }
    }
}

#[test]
fn eigen_csv_has_documented_columns() {
    let trunc = Truncation::new(2, 1, 4).unwrap();
    let table = eigen_table(&trunc, Alpha::Zero).unwrap();
    let mut buf = Vec::new();
    write_eigen_csv(&mut buf, &table).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,q,|eta|,disc,region,Re lambda+,Im lambda+,Re lambda-,Im lambda-"
    );
    assert_eq!(lines.count(), table.len());
    assert!(text.contains(",D1,"));
}

fn oracle_mode(mode: &ModeIndex, alpha: Alpha, u0: [Complex64; 2], t: f64) -> Vec<Complex64> {
    let eta2 = mode.eta_sq();
    let a = alpha.dissipation(eta2);
    let cc = mode.n_tilde_sq() / eta2;
    dopri(
        |y| vec![-a * y[0] + cc * y[1], -y[0]],
        &u0,
        t,
        1e-13,
    )
}

#[test]
fn propagate_mode_matches_ode_oracle() {
    let modes = [
        ModeIndex::new_2d(1, 1),
        ModeIndex::new_2d(1, 2),
        ModeIndex::new_2d(2, 7),
        ModeIndex::new_2d(1, 12),
        ModeIndex::new_2d(0, 3),
        ModeIndex::new_2d(3, 1),
    ];
    let u0 = [Complex64::new(0.3, -0.2), Complex64::new(-0.7, 0.4)];
    for alpha in ALPHAS {
        for m in &modes {
            for t in [0.1, 1.0, 10.0, 100.0] {
                let got = propagate_mode(u0, m, alpha, t).unwrap();
                let want = oracle_mode(m, alpha, u0, t);
                let scale = want.iter().map(|c| c.norm()).fold(0.0, f64::max);
                let err = (0..2).map(|i| (got[i] - want[i]).norm()).fold(0.0, f64::max);
                assert!(err <= 1e-8 * scale, "{m} alpha={alpha} t={t}: {err:e} vs {scale:e}");
            }
        }
    }
    assert_eq!(propagate_mode(u0, &modes[0], Alpha::Zero, 0.0).unwrap(), u0);
    assert!(propagate_mode(u0, &modes[0], Alpha::Zero, -1.0).is_err());
}

#[test]
fn zero_n_theta_constant_without_vd() {
    let m = ModeIndex::new_2d(0, 5);
    for alpha in ALPHAS {
        for t in [0.5, 3.0, 40.0] {
            let u = propagate_mode([c(0.0), Complex64::new(0.2, 0.1)], &m, alpha, t).unwrap();
            assert_eq!(u[0], c(0.0));
            assert!((u[1] - Complex64::new(0.2, 0.1)).norm() < 1e-15);
        }
    }
}

// Full linear system written out directly: v_h forced by the projected
// buoyancy, (v_d, theta) by M.
fn oracle_state(s0: &FlowState, t: f64) -> FlowState {
    let trunc = *s0.trunc();
    let dh = trunc.horizontal_dims();
    let nb = trunc.mode_count(BasisKind::B);
    let nc = trunc.mode_count(BasisKind::C);
    let pack = |s: &FlowState| -> Vec<Complex64> { s.fields().flat_map(|f| f.coeffs().to_vec()).collect() };
    let unpack = |y: &[Complex64]| -> FlowState {
        let mut s = s0.clone();
        let mut off = 0;
        for f in s.fields_mut() {
            let len = f.coeffs().len();
            f.coeffs_mut().copy_from_slice(&y[off..off + len]);
            off += len;
        }
        s
    };
    let alpha = s0.alpha;
    let rhs = |y: &[Complex64]| -> Vec<Complex64> {
        let s = unpack(y);
        let zero = vec![SpectralField::zeros(BasisKind::C, trunc); dh];
        let (b_h, b_d) = leray_project(&zero, &s.theta).unwrap();
        let mut out = Vec::with_capacity(y.len());
        for k in 0..dh {
            for i in 0..nc {
                let m = trunc.mode(BasisKind::C, i);
                out.push(-alpha.dissipation(m.eta_sq()) * s.v_h[k].coeffs()[i] + b_h[k].coeffs()[i]);
            }
        }
        for i in 0..nb {
            let m = trunc.mode(BasisKind::B, i);
            out.push(-alpha.dissipation(m.eta_sq()) * s.v_d.coeffs()[i] + b_d.coeffs()[i]);
        }
        for i in 0..nb {
            out.push(-s.v_d.coeffs()[i]);
        }
        out
    };
    let y = dopri(rhs, &pack(s0), t, 1e-13);
    let mut s = unpack(&y);
    s.t = s0.t + t;
    s
}

#[test]
fn propagate_linear_matches_full_ode_oracle() {
    let trunc = Truncation::new(2, 4, 8).unwrap();
    let mut r = rng(17);
    for alpha in ALPHAS {
        let s0 = random_state(&mut r, trunc, alpha, 4, 8, 0.1);
        for t in [0.1, 1.0, 10.0, 100.0] {
            let got = propagate_linear(&s0, t).unwrap();
            let want = oracle_state(&s0, t);
            let scale = want.max_abs();
            let err = got.max_diff(&want);
            assert!(err <= 1e-8 * scale, "alpha={alpha} t={t}: {err:e} vs {scale:e}");
        }
    }
}

#[test]
fn linear_special_cases() {
    let trunc = Truncation::new(2, 3, 6).unwrap();
    // theta on n = 0 only, no velocity: steady.
    let mut s = FlowState::zeros(trunc, Alpha::Zero);
    s.theta.set(&ModeIndex::new_2d(0, 3), c(0.4)).unwrap();
    s.theta.set(&ModeIndex::new_2d(0, 2), c(-0.1)).unwrap();
    let out = propagate_linear(&s, 7.0).unwrap();
    assert!(out.max_diff(&s) < 1e-15);
    // Mean velocity: e^{-t} for alpha = 0, constant for alpha = 1.
    for (alpha, factor) in [(Alpha::Zero, (-2.5f64).exp()), (Alpha::One, 1.0)] {
        let mut s = FlowState::zeros(trunc, alpha);
        s.v_h[0].set(&ModeIndex::new_2d(0, 0), c(0.3)).unwrap();
        let out = propagate_linear(&s, 2.5).unwrap();
        let got = out.v_h[0].get(&ModeIndex::new_2d(0, 0));
        assert!((got - 0.3 * factor).norm() < 1e-15);
    }
}

#[test]
fn propagation_preserves_divergence_and_mean_of_vd() {
    let trunc = Truncation::new(2, 4, 8).unwrap();
    let mut r = rng(4);
    for alpha in ALPHAS {
        let s0 = random_state(&mut r, trunc, alpha, 4, 8, 1.0);
        let s1 = propagate_linear(&s0, 0.7).unwrap();
        let rep = strata_core::fields::validate_state(&s1);
        assert!(rep.passed(), "{rep:?}");
    }
}

#[test]
fn kernel_bounds_hold_everywhere() {
    let trunc = Truncation::new(2, 16, 32).unwrap();
    let ts: Vec<f64> = (0..40).map(|i| 0.01 * 1.4f64.powi(i)).collect();
    let mut violations = 0;
    for alpha in ALPHAS {
        for es in eigen_table(&trunc, alpha).unwrap() {
            let a = es.a();
            for &t in &ts {
                let lhs = (-es.lambda_plus * t).exp().norm();
                let rhs = (-a * t / 2.0).exp();
                if lhs > rhs * (1.0 + 1e-12) {
                    violations += 1;
                }
                if es.region == Region::D3 {
                    let lhs = (-es.lambda_minus * t).exp().norm();
                    let rate = es.mode.n_tilde_sq() / es.mode.eta_sq().powf(1.0 + alpha.value());
                    if lhs > (-rate * t).exp() * (1.0 + 1e-12) {
                        violations += 1;
                    }
                }
            }
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn singular_combination_constant_is_uniform() {
    // |q(t)| |a_-| |lambda_+| / c against e^{-|eta|^{2 alpha} t / 4} on D1 and D2.
    let trunc = Truncation::new(2, 16, 32).unwrap();
    let ratio = |es: &strata_core::linear::ModeEigenSystem, t: f64| {
        let (lp, lm) = (es.lambda_plus, es.lambda_minus);
        let q = ((-lm * t).exp() - (-lp * t).exp()) / (lp - lm);
        let am = (lm.norm_sqr() + es.c() * es.c()).sqrt();
        q.norm() * am * lp.norm() / es.c() / (-es.a() * t / 4.0).exp()
    };
    for alpha in ALPHAS {
        let table = eigen_table(&trunc, alpha).unwrap();
        let sup = |ts: &[f64]| {
            table
                .iter()
                .filter(|e| matches!(e.region, Region::D1 | Region::D2))
                .flat_map(|e| ts.iter().map(move |&t| ratio(e, t)))
                .fold(0.0, f64::max)
        };
        let singular = table.iter().filter(|e| matches!(e.region, Region::D1 | Region::D2)).count();
        if alpha == Alpha::One {
            // D2 would need |eta|^4 <= 16 c / 3 < 6, impossible for n != 0.
            assert_eq!(singular, 0);
            continue;
        }
        assert!(singular > 0);
        let early: Vec<f64> = (1..200).map(|i| i as f64 * 0.05).collect();
        let late: Vec<f64> = (1..200).map(|i| i as f64 * 5.0).collect();
        let (c_early, c_late) = (sup(&early), sup(&late));
        assert!(c_early.is_finite() && c_early > 0.0);
        assert!(c_late <= c_early, "alpha={alpha}: {c_late} > {c_early}");
    }
}

#[test]
fn decay_envelope_slopes() {
    let slope = |s: f64, m: f64, alpha, kind| {
        let t1 = 1e8;
        let t2 = 1e9;
        let y1 = decay_envelope(s, m, t1, alpha, kind).unwrap();
        let y2 = decay_envelope(s, m, t2, alpha, kind).unwrap();
        (y2.ln() - y1.ln()) / ((1.0 + t2).ln() - (1.0 + t1).ln())
    };
    assert!(slope(4.0, 4.0, Alpha::Zero, EnvelopeKind::ThetaBar).abs() < 1e-12);
    assert!((slope(0.0, 4.0, Alpha::Zero, EnvelopeKind::VD) + 3.0).abs() < 1e-9);
    assert!((slope(0.0, 5.0, Alpha::One, EnvelopeKind::ThetaBar) + 1.25).abs() < 1e-9);
    assert!(decay_envelope(5.0, 4.0, 1.0, Alpha::Zero, EnvelopeKind::VD).is_err());
}

#[test]
fn inverse_propagator_reverses() {
    let trunc = Truncation::new(2, 4, 8).unwrap();
    let mut r = rng(8);
    for alpha in ALPHAS {
        let s0 = random_state(&mut r, trunc, alpha, 4, 8, 1.0);
        let fwd = PropagatorTable::new(trunc, alpha, 0.01).unwrap();
        let back = PropagatorTable::new(trunc, alpha, -0.01).unwrap();
        let s2 = back.apply(&fwd.apply(&s0).unwrap()).unwrap();
        assert!(s2.max_diff(&s0) < 1e-10, "alpha={alpha}: {:e}", s2.max_diff(&s0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup(n in -6i64..=6, q in 1u32..30, t1 in 0.0f64..20.0, t2 in 0.0f64..20.0,
                 re in -1.0f64..1.0, im in -1.0f64..1.0, al in 0usize..2) {
        let m = ModeIndex::new_2d(n, q);
        let alpha = ALPHAS[al];
        let u0 = [Complex64::new(re, im), Complex64::new(im, -re)];
        let direct = propagate_mode(u0, &m, alpha, t1 + t2).unwrap();
        let split = propagate_mode(propagate_mode(u0, &m, alpha, t1).unwrap(), &m, alpha, t2).unwrap();
        let scale = u0[0].norm().max(u0[1].norm());
        for i in 0..2 {
            prop_assert!((direct[i] - split[i]).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn propagation_keeps_real_fields_real(seed in any::<u64>(), t in 0.0f64..50.0, al in 0usize..2) {
        let trunc = Truncation::new(2, 3, 6).unwrap();
        let mut r = rng(seed);
        let s0 = random_state(&mut r, trunc, ALPHAS[al], 3, 6, 1.0);
        let s1 = propagate_linear(&s0, t).unwrap();
        for f in s1.fields() {
            prop_assert!(f.conjugate_symmetry_defect() <= 1e-14);
        }
    }
}
