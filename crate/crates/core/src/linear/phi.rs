use num_complex::Complex64;

/// `(e^z - 1) / z`, accurate near `z = 0`.
pub fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-2 {
        // Horner on sum z^k / (k+1)!, k = 0..7.
        let mut acc = Complex64::new(1.0 / 40320.0, 0.0);
        for k in (0..7).rev() {
            acc = acc * z + 1.0 / factorial(k + 1);
        }
        return acc;
    }
    let (x, y) = (z.re, z.im);
    let half = (0.5 * y).sin();
    let em1 = Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin());
    em1 / z
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `(e^{-y t} - e^{-x t}) / (x - y)`, the first divided difference of
/// `-e^{-s t}`; well defined for `x = y`.
pub(crate) fn exp_diff(x: Complex64, y: Complex64, t: f64) -> Complex64 {
    t * (-y * t).exp() * phi1(-(x - y) * t)
}

/// Second divided difference of `s -> e^{-s t}` at three points.
pub fn divided_difference2(x: [Complex64; 3], t: f64) -> Complex64 {
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let (i, k, j) = pairs
        .into_iter()
        .max_by(|a, b| {
            let da = (x[a.0] - x[a.1]).norm();
            let db = (x[b.0] - x[b.1]).norm();
            da.total_cmp(&db)
        })
        .unwrap();
    let spread = (x[i] - x[k]).norm() * t.abs();
    if spread < 0.5 {
        // Taylor: e^{-x0 t} t^2 sum_m h_m(z1, z2) / (m+2)!, z = -(x - x0) t,
        // with h_m the complete homogeneous symmetric polynomial.
        let z1 = -(x[1] - x[0]) * t;
        let z2 = -(x[2] - x[0]) * t;
        let mut h = Complex64::new(1.0, 0.0);
        let mut z2m = Complex64::new(1.0, 0.0);
        let mut fact = 2.0;
        let mut acc = h / fact;
        for m in 1..30 {
            z2m *= z2;
            h = z2m + z1 * h;
            fact *= (m + 2) as f64;
            let term = h / fact;
            acc += term;
            if term.norm() < 1e-18 * acc.norm() {
                break;
            }
        }
        return (-x[0] * t).exp() * t * t * acc;
    }
    // f[xi, xj] - f[xj, xk] over (xi - xk), with f[x, y] of e^{-s t}
    // equal to -exp_diff(x, y).
    let fij = -exp_diff(x[i], x[j], t);
    let fjk = -exp_diff(x[j], x[k], t);
    (fij - fjk) / (x[i] - x[k])
}
