use std::f64::consts::PI;

use num_complex::Complex64;

use super::mode::{BasisKind, ModeIndex};
use crate::error::{Error, Result};

/// `b_q(x_d)`.
pub fn b_profile(q: u32, xd: f64) -> f64 {
    let arg = 0.5 * PI * q as f64 * xd;
    if q % 2 == 0 {
        arg.sin()
    } else {
        arg.cos()
    }
}

/// `c_q(x_d)`; `c_0 = 1`.
pub fn c_profile(q: u32, xd: f64) -> f64 {
    let arg = 0.5 * PI * q as f64 * xd;
    if q % 2 == 1 {
        -arg.sin()
    } else {
        arg.cos()
    }
}

/// Sign relating the vertical profiles to the shifted coordinate
/// `y = x_d + 1`: `b_q(x_d) = s_q sin(pi q y / 2)` and
/// `c_q(x_d) = s_q cos(pi q y / 2)`, with the same `s_q` for both families.
pub fn vertical_sign(q: u32) -> f64 {
    const TABLE: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
    TABLE[(q % 4) as usize]
}

/// Evaluates `B_mode(x)` or `C_mode(x)` at `x = (x_h, x_d)`.
pub fn evaluate_basis(mode: &ModeIndex, kind: BasisKind, x: &[f64]) -> Result<Complex64> {
    mode.check(kind)?;
    let dh = mode.horizontal_dims();
    if x.len() != dh + 1 {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, mode needs {}",
            x.len(),
            dh + 1
        )));
    }
    let phase: f64 = mode
        .n()
        .iter()
        .zip(x)
        .map(|(&n, &xi)| 2.0 * PI * n as f64 * xi)
        .sum();
    let xd = x[dh];
    let profile = match kind {
        BasisKind::B => b_profile(mode.q(), xd),
        BasisKind::C => c_profile(mode.q(), xd),
    };
    Ok(Complex64::from_polar(profile, phase))
}

/// `∫_{-1}^{1} b_q(x_d) dx_d`.
pub fn b_integral(q: u32) -> f64 {
    if q % 2 == 0 {
        0.0
    } else {
        let s = if (q / 2) % 2 == 0 { 1.0 } else { -1.0 };
        4.0 * s / (PI * q as f64)
    }
}

/// `∫_{-1}^{1} c_q(x_d) dx_d`.
pub fn c_integral(q: u32) -> f64 {
    if q == 0 {
        2.0
    } else {
        0.0
    }
}

/// `∫_{-1}^{1} |c_q|^2`: 2 for `q = 0`, 1 otherwise.
pub fn c_norm_sq(q: u32) -> f64 {
    if q == 0 {
        2.0
    } else {
        1.0
    }
}
