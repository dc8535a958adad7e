mod common;

use std::f64::consts::PI;

use common::{convolution_oracle, max_diff, random_field, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use strata_core::basis::{
    derivative, evaluate_basis, product, Axis, BasisKind, ModeIndex, PhysicalGrid, SpectralField,
    Transformer, Truncation,
};

fn trunc2() -> Truncation {
    Truncation::new(2, 6, 10).unwrap()
}

#[test]
fn one_hot_orthonormality() {
    for trunc in [trunc2(), Truncation::new(3, 2, 5).unwrap()] {
        let tr = Transformer::new(trunc);
        for kind in [BasisKind::B, BasisKind::C] {
            for mode in trunc.modes(kind) {
                let unit = SpectralField::unit(kind, trunc, &mode).unwrap();
                // Sample the basis function directly, not through the inverse.
                let vals: Vec<Complex64> = {
                    let re = PhysicalGrid::from_fn(trunc, |x| evaluate_basis(&mode, kind, x).unwrap().re);
                    let im = PhysicalGrid::from_fn(trunc, |x| evaluate_basis(&mode, kind, x).unwrap().im);
                    re.values().iter().zip(im.values()).map(|(&a, &b)| Complex64::new(a, b)).collect()
                };
                let f = tr.forward_complex(&vals, kind).unwrap();
                assert!(max_diff(&f, &unit) < 1e-12, "{kind} {mode}: {}", max_diff(&f, &unit));
            }
        }
    }
}

#[test]
fn forward_of_b_1_2_is_one_hot() {
    let trunc = trunc2();
    let tr = Transformer::new(trunc);
    let mode = ModeIndex::new_2d(1, 2);
    let grid_re = PhysicalGrid::from_fn(trunc, |x| evaluate_basis(&mode, BasisKind::B, x).unwrap().re);
    let grid_im = PhysicalGrid::from_fn(trunc, |x| evaluate_basis(&mode, BasisKind::B, x).unwrap().im);
    let vals: Vec<Complex64> = grid_re
        .values()
        .iter()
        .zip(grid_im.values())
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    let f = tr.forward_complex(&vals, BasisKind::B).unwrap();
    for (m, c) in f.iter() {
        let expect = if m == mode { 1.0 } else { 0.0 };
        assert!((c - expect).norm() < 1e-12);
    }
}

#[test]
fn inverse_matches_pointwise_series() {
    let trunc = Truncation::new(2, 3, 6).unwrap();
    let tr = Transformer::new(trunc);
    let mut r = rng(3);
    for kind in [BasisKind::B, BasisKind::C] {
        let f = random_field(&mut r, kind, trunc, 3, 6);
        let grid = tr.inverse(&f).unwrap();
        let direct = PhysicalGrid::from_fn(trunc, |x| {
            f.iter()
                .map(|(m, c)| (c * evaluate_basis(&m, kind, x).unwrap()).re)
                .sum()
        });
        let err = grid
            .values()
            .iter()
            .zip(direct.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-12, "{kind}: {err}");
    }
}

#[test]
fn roundtrip_random_band_limited() {
    let trunc = Truncation::new(2, 8, 16).unwrap();
    let tr = Transformer::new(trunc);
    let mut r = rng(7);
    for i in 0..100 {
        let kind = if i % 2 == 0 { BasisKind::B } else { BasisKind::C };
        let f = random_field(&mut r, kind, trunc, 8, 16);
        let grid = tr.inverse(&f).unwrap();
        let back = tr.forward(&grid, kind).unwrap();
        assert!(max_diff(&back, &f) < 1e-12);
        let regrid = tr.inverse(&back).unwrap();
        let err = grid
            .values()
            .iter()
            .zip(regrid.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-12);
    }
}

// Oracle: midpoint quadrature of f * conj(B_{n,2}) on a fine grid.
#[test]
fn forward_of_sin_cos_product() {
    let f = |x: &[f64]| (PI * x[1]).sin() * (2.0 * PI * x[0]).cos();
    let fine = 400;
    let quad = |n: i64| -> Complex64 {
        let mode = ModeIndex::new_2d(n, 2);
        let mut acc = Complex64::default();
        for i in 0..fine {
            for j in 0..fine {
                let x = [(i as f64 + 0.5) / fine as f64, -1.0 + (j as f64 + 0.5) * 2.0 / fine as f64];
                acc += f(&x) * evaluate_basis(&mode, BasisKind::B, &x).unwrap().conj();
            }
        }
        acc * (2.0 / (fine * fine) as f64)
    };
    let oracle_p = quad(1);
    let oracle_m = quad(-1);
    assert!((oracle_p - 0.5).norm() < 1e-6);
    assert!((oracle_m - 0.5).norm() < 1e-6);

    let trunc = trunc2();
    let tr = Transformer::new(trunc);
    let field = tr.forward(&PhysicalGrid::from_fn(trunc, f), BasisKind::B).unwrap();
    for (m, c) in field.iter() {
        let expect = if m.q() == 2 && m.n()[0].abs() == 1 { 0.5 } else { 0.0 };
        assert!((c - expect).norm() < 1e-12, "{m}: {c}");
    }
}

#[test]
fn vertical_derivative_factors() {
    let trunc = trunc2();
    let m = ModeIndex::new_2d(2, 3);
    let b = SpectralField::unit(BasisKind::B, trunc, &m).unwrap();
    let db = derivative(&b, Axis::Vertical).unwrap();
    assert_eq!(db.kind(), BasisKind::C);
    assert!((db.get(&m) - m.q_tilde()).norm() < 1e-15);
    assert!(db.coeffs().iter().filter(|c| c.norm() > 0.0).count() == 1);

    let c0 = SpectralField::unit(BasisKind::C, trunc, &ModeIndex::new_2d(1, 0)).unwrap();
    assert!(derivative(&c0, Axis::Vertical).unwrap().is_zero());

    let c = SpectralField::unit(BasisKind::C, trunc, &m).unwrap();
    let dc = derivative(&c, Axis::Vertical).unwrap();
    assert!((dc.get(&m) + m.q_tilde()).norm() < 1e-15);
}

// Oracle: centred finite differences of the sampled basis function.
#[test]
fn mixed_derivative_matches_finite_differences() {
    let trunc = trunc2();
    let m = ModeIndex::new_2d(1, 2);
    let b = SpectralField::unit(BasisKind::B, trunc, &m).unwrap();
    let d = derivative(&derivative(&b, Axis::Vertical).unwrap(), Axis::Horizontal(0)).unwrap();
    let h = 1e-4;
    let x = [0.17, 0.31];
    let ev = |x0: f64, x1: f64| evaluate_basis(&m, BasisKind::B, &[x0, x1]).unwrap();
    let fd = (ev(x[0] + h, x[1] + h) - ev(x[0] + h, x[1] - h) - ev(x[0] - h, x[1] + h)
        + ev(x[0] - h, x[1] - h))
        / (4.0 * h * h);
    let cmode = evaluate_basis(&m, BasisKind::C, &x).unwrap();
    let fd_coeff = fd / cmode;
    let expect = Complex64::new(0.0, 2.0 * PI * PI);
    assert!((fd_coeff - expect).norm() < 1e-5 * expect.norm(), "{fd_coeff}");
    assert!((d.get(&m) - expect).norm() < 1e-12);
}

#[test]
fn second_vertical_derivative_is_minus_q_tilde_squared() {
    let trunc = trunc2();
    let mut r = rng(11);
    let f = random_field(&mut r, BasisKind::B, trunc, 6, 10);
    let dd = derivative(&derivative(&f, Axis::Vertical).unwrap(), Axis::Vertical).unwrap();
    assert_eq!(dd.kind(), BasisKind::B);
    for ((m, a), b) in dd.iter().zip(f.coeffs()) {
        let qt = m.q_tilde();
        assert!((a + qt * qt * b).norm() < 1e-12 * (1.0 + qt * qt));
    }
}

#[test]
fn product_examples() {
    let trunc = trunc2();
    let tr = Transformer::new(trunc);
    let b02 = SpectralField::unit(BasisKind::B, trunc, &ModeIndex::new_2d(0, 2)).unwrap();
    let c00 = SpectralField::unit(BasisKind::C, trunc, &ModeIndex::new_2d(0, 0)).unwrap();
    let p = product(&tr, &b02, &c00).unwrap();
    assert_eq!(p.kind(), BasisKind::B);
    assert!(max_diff(&p, &b02) < 1e-14);

    let sq = product(&tr, &b02, &b02).unwrap();
    assert_eq!(sq.kind(), BasisKind::C);
    for (m, c) in sq.iter() {
        let expect = match (m.n()[0], m.q()) {
            (0, 0) => 0.5,
            (0, 4) => -0.5,
            _ => 0.0,
        };
        assert!((c - expect).norm() < 1e-14, "{m}: {c}");
    }
}

#[test]
fn product_matches_convolution_oracle() {
    let trunc = Truncation::new(2, 4, 8).unwrap();
    let tr = Transformer::new(trunc);
    let mut r = rng(2024);
    let kinds = [
        (BasisKind::B, BasisKind::C),
        (BasisKind::B, BasisKind::B),
        (BasisKind::C, BasisKind::C),
        (BasisKind::C, BasisKind::B),
    ];
    for i in 0..20 {
        let (k1, k2) = kinds[i % 4];
        let f = random_field(&mut r, k1, trunc, 4, 8);
        let g = random_field(&mut r, k2, trunc, 4, 8);
        let fast = product(&tr, &f, &g).unwrap();
        let slow = convolution_oracle(&f, &g);
        let scale = slow.max_abs();
        assert!(max_diff(&fast, &slow) <= 1e-11 * scale, "{k1}x{k2}");
    }
}

#[test]
fn product_3d_matches_convolution_oracle() {
    let trunc = Truncation::new(3, 2, 5).unwrap();
    let tr = Transformer::new(trunc);
    let mut r = rng(5);
    let f = random_field(&mut r, BasisKind::B, trunc, 2, 5);
    let g = random_field(&mut r, BasisKind::C, trunc, 2, 5);
    let fast = product(&tr, &f, &g).unwrap();
    let slow = convolution_oracle(&f, &g);
    assert!(max_diff(&fast, &slow) <= 1e-11 * slow.max_abs());
}

#[test]
fn incompatible_truncations_rejected() {
    let t1 = Truncation::new(2, 4, 8).unwrap();
    let t2 = Truncation::new(2, 4, 10).unwrap();
    let tr = Transformer::new(t1);
    let f = SpectralField::zeros(BasisKind::B, t1);
    let g = SpectralField::zeros(BasisKind::B, t2);
    assert!(product(&tr, &f, &g).is_err());
    let grid = PhysicalGrid::zeros(t2);
    assert!(tr.forward(&grid, BasisKind::B).is_err());
}

#[test]
fn b_fields_vanish_on_walls() {
    let trunc = Truncation::new(2, 6, 12).unwrap();
    let tr = Transformer::new(trunc);
    let mut r = rng(99);
    let f = random_field(&mut r, BasisKind::B, trunc, 6, 12);
    // Evaluate the series exactly at the walls, not only on grid samples.
    for k in 0..trunc.grid_h {
        for xd in [-1.0, 1.0] {
            let x = [trunc.x_horizontal(k), xd];
            let v: Complex64 = f.iter().map(|(m, c)| c * evaluate_basis(&m, BasisKind::B, &x).unwrap()).sum();
            assert!(v.norm() < 1e-10);
        }
    }
    let g = tr.inverse(&f).unwrap();
    for col in g.values().chunks(trunc.grid_v + 1) {
        assert_eq!(col[0], 0.0);
        assert_eq!(col[trunc.grid_v], 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn l1_submultiplicative(seed in any::<u64>(), k in 0usize..3) {
        let trunc = Truncation::new(2, 4, 8).unwrap();
        let tr = Transformer::new(trunc);
        let mut r = rng(seed);
        let (k1, k2) = [(BasisKind::B, BasisKind::C), (BasisKind::B, BasisKind::B), (BasisKind::C, BasisKind::C)][k];
        let f = random_field(&mut r, k1, trunc, 2, 4);
        let g = random_field(&mut r, k2, trunc, 2, 4);
        let p = product(&tr, &f, &g).unwrap();
        prop_assert!(p.l1() <= f.l1() * g.l1() * (1.0 + 1e-12));
    }

    #[test]
    fn parity_closure(seed in any::<u64>(), k in 0usize..3) {
        // Inputs band-limited to half the truncation so the product is representable.
        let trunc = Truncation::new(2, 4, 8).unwrap();
        let tr = Transformer::new(trunc);
        let mut r = rng(seed);
        let (k1, k2) = [(BasisKind::B, BasisKind::C), (BasisKind::B, BasisKind::B), (BasisKind::C, BasisKind::C)][k];
        let f = random_field(&mut r, k1, trunc, 2, 4);
        let g = random_field(&mut r, k2, trunc, 2, 4);
        let p = product(&tr, &f, &g).unwrap();
        prop_assert_eq!(p.kind(), k1.product(k2));
        let grid = tr.inverse(&f).unwrap().mul(&tr.inverse(&g).unwrap()).unwrap();
        let recon = tr.inverse(&p).unwrap();
        let err = recon.values().iter().zip(grid.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(err <= 1e-12 * grid.max_abs().max(1.0));
    }
}
