#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata_core::basis::{BasisKind, ModeIndex, SpectralField, Truncation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random real field with content on `|n_i| <= n_lim`, `q <= q_lim`.
pub fn random_field(
    rng: &mut ChaCha8Rng,
    kind: BasisKind,
    trunc: Truncation,
    n_lim: usize,
    q_lim: usize,
) -> SpectralField {
    let mut f = SpectralField::zeros(kind, trunc);
    for i in 0..trunc.mode_count(kind) {
        let m = trunc.mode(kind, i);
        if m.n().iter().all(|&n| n.unsigned_abs() as usize <= n_lim) && m.q() as usize <= q_lim {
            f.coeffs_mut()[i] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    f.symmetrize();
    f
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Trig {
    Sin,
    Cos,
}

fn as_trig(kind: BasisKind, q: i64) -> (f64, Trig) {
    match (kind, q % 2 == 0) {
        (BasisKind::B, true) => (1.0, Trig::Sin),
        (BasisKind::B, false) => (1.0, Trig::Cos),
        (BasisKind::C, true) => (1.0, Trig::Cos),
        (BasisKind::C, false) => (-1.0, Trig::Sin),
    }
}

/// Vertical product `p_q1 * r_q2` expanded back into the target family via
/// the product-to-sum identities. Returns `(coefficient, q)` pairs; panics
/// if a term lands outside the target family.
pub fn vertical_product(k1: BasisKind, q1: i64, k2: BasisKind, q2: i64) -> Vec<(f64, i64)> {
    let (s1, t1) = as_trig(k1, q1);
    let (s2, t2) = as_trig(k2, q2);
    let s = 0.5 * s1 * s2;
    let terms: Vec<(f64, Trig, i64)> = match (t1, t2) {
        (Trig::Sin, Trig::Sin) => vec![(s, Trig::Cos, q1 - q2), (-s, Trig::Cos, q1 + q2)],
        (Trig::Sin, Trig::Cos) => vec![(s, Trig::Sin, q1 + q2), (s, Trig::Sin, q1 - q2)],
        (Trig::Cos, Trig::Sin) => vec![(s, Trig::Sin, q1 + q2), (-s, Trig::Sin, q1 - q2)],
        (Trig::Cos, Trig::Cos) => vec![(s, Trig::Cos, q1 - q2), (s, Trig::Cos, q1 + q2)],
    };
    let target = k1.product(k2);
    let mut out = Vec::new();
    for (c, trig, k) in terms {
        let (c, k) = match trig {
            Trig::Sin if k < 0 => (-c, -k),
            _ => (c, k.abs()),
        };
        if trig == Trig::Sin && k == 0 {
            continue;
        }
        let (sign, expect) = as_trig(target, k);
        assert_eq!(expect, trig, "parity leak: {k1}{q1} x {k2}{q2} -> {trig:?}({k})");
        if target == BasisKind::B {
            assert!(k >= 1);
        }
        out.push((c * sign, k));
    }
    out
}

/// Direct O(modes^2) convolution of two fields using the vertical
/// product-to-sum identities and exact horizontal Fourier convolution.
pub fn convolution_oracle(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let trunc = *f.trunc();
    let target = f.kind().product(g.kind());
    let mut out = SpectralField::zeros(target, trunc);
    let fnz: Vec<(ModeIndex, Complex64)> = f.iter().filter(|(_, c)| c.norm() > 0.0).collect();
    let gnz: Vec<(ModeIndex, Complex64)> = g.iter().filter(|(_, c)| c.norm() > 0.0).collect();
    for (mf, cf) in &fnz {
        for (mg, cg) in &gnz {
            let n: Vec<i64> = mf.n().iter().zip(mg.n()).map(|(a, b)| a + b).collect();
            if n.iter().any(|v| v.unsigned_abs() as usize > trunc.n_max) {
                continue;
            }
            for (c, k) in vertical_product(f.kind(), mf.q() as i64, g.kind(), mg.q() as i64) {
                if k as usize > trunc.q_max {
                    continue;
                }
                let m = ModeIndex::new(&n, k as u32).unwrap();
                let idx = trunc.flat(target, &m).unwrap();
                out.coeffs_mut()[idx] += cf * cg * c;
            }
        }
    }
    out
}

pub fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Adaptive Dormand-Prince 5(4) for `y' = f(y)` (autonomous), error measured
/// relative to the sup-norm of the solution.
#[allow(dead_code)]
pub fn dopri<F>(f: F, y0: &[Complex64], t_end: f64, rtol: f64) -> Vec<Complex64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    const C: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut h = (t_end * 1e-3).min(1e-3);
    if t_end == 0.0 {
        return y;
    }
    let mut k1 = f(&y);
    while t < t_end {
        h = h.min(t_end - t);
        let mut ks = vec![k1.clone()];
        for (s, row) in C.iter().enumerate() {
            let stage: Vec<Complex64> = (0..n)
                .map(|i| y[i] + h * (0..=s).map(|j| row[j] * ks[j][i]).sum::<Complex64>())
                .collect();
            ks.push(f(&stage));
        }
        // The last stage input is the fifth-order solution (FSAL).
        let y_new: Vec<Complex64> = (0..n)
            .map(|i| y[i] + h * (0..6).map(|j| C[5][j] * ks[j][i]).sum::<Complex64>())
            .collect();
        let err = (0..n)
            .map(|i| (h * (0..7).map(|j| E[j] * ks[j][i]).sum::<Complex64>()).norm())
            .fold(0.0, f64::max);
        let scale = y.iter().chain(&y_new).map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        let ratio = err / (rtol * scale);
        if ratio <= 1.0 {
            t += h;
            y = y_new;
            k1 = ks.pop().unwrap();
        }
        let fac = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    y
}

/// Random real, divergence-free state scaled to sup-coefficient `amp`.
#[allow(dead_code)]
pub fn random_state(
    rng: &mut ChaCha8Rng,
    trunc: Truncation,
    alpha: strata_core::fields::Alpha,
    n_lim: usize,
    q_lim: usize,
    amp: f64,
) -> strata_core::fields::FlowState {
    let v_h: Vec<SpectralField> = (0..trunc.horizontal_dims())
        .map(|_| random_field(rng, BasisKind::C, trunc, n_lim, q_lim))
        .collect();
    let v_d = random_field(rng, BasisKind::B, trunc, n_lim, q_lim);
    let theta = random_field(rng, BasisKind::B, trunc, n_lim, q_lim);
    let (v_h, v_d) = strata_core::dynamics::leray_project(&v_h, &v_d).unwrap();
    let mut s = strata_core::fields::FlowState::new(v_h, v_d, theta, alpha).unwrap();
    s.symmetrize();
    let m = s.max_abs();
    s.scaled(amp / m)
}

/// Gauss-Legendre nodes and weights on [-1, 1].
#[allow(dead_code)]
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            loop {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    return (x, 2.0 / ((1.0 - x * x) * dp * dp));
                }
            }
        })
        .collect()
}
