use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{BasisKind, ModeIndex};
use crate::error::Result;
use crate::fields::Alpha;

/// Frequency region by the discriminant of `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    /// Complex pair, `disc <= 0`.
    D1,
    /// `0 <= disc <= |eta|^{4 alpha} / 4`.
    D2,
    /// `disc >= |eta|^{4 alpha} / 4`.
    D3,
    /// Horizontally constant mode; the system decouples.
    ZeroN,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::D1 => "D1",
            Region::D2 => "D2",
            Region::D3 => "D3",
            Region::ZeroN => "ZeroN",
        })
    }
}

/// Eigen-decomposition of `M = [[a, -c], [1, 0]]` with `a = |eta|^{2 alpha}`,
/// `c = |n~|^2 / |eta|^2`.
///
/// `a_plus`, `a_minus` are the columns of `A` (eigenvectors of `M^T`),
/// `b_plus`, `b_minus` the rows of `B = A^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeEigenSystem {
    #[serde(skip)]
    pub mode: ModeIndex,
    pub alpha: Alpha,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub a_plus: [Complex64; 2],
    pub a_minus: [Complex64; 2],
    pub b_plus: Option<[Complex64; 2]>,
    pub b_minus: Option<[Complex64; 2]>,
    pub region: Region,
    pub discriminant: f64,
}

impl ModeEigenSystem {
    /// Diagonal entry `|eta|^{2 alpha}`.
    pub fn a(&self) -> f64 {
        self.alpha.dissipation(self.mode.eta_sq())
    }

    /// Coupling `|n~|^2 / |eta|^2`.
    pub fn c(&self) -> f64 {
        self.mode.n_tilde_sq() / self.mode.eta_sq()
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a(), -self.c()], [1.0, 0.0]]
    }
}

fn coefficients(mode: &ModeIndex, alpha: Alpha) -> (f64, f64, f64) {
    let eta_sq = mode.eta_sq();
    let a = alpha.dissipation(eta_sq);
    let c = mode.n_tilde_sq() / eta_sq;
    (a, c, a * a - 4.0 * c)
}

fn region_of(mode: &ModeIndex, a: f64, disc: f64) -> Region {
    if mode.is_zero_n() {
        Region::ZeroN
    } else if disc <= 0.0 {
        Region::D1
    } else if disc <= 0.25 * a * a {
        Region::D2
    } else {
        Region::D3
    }
}

pub fn classify_region(mode: &ModeIndex, alpha: Alpha) -> Result<Region> {
    mode.check(BasisKind::B)?;
    let (a, _, disc) = coefficients(mode, alpha);
    Ok(region_of(mode, a, disc))
}

pub fn eigensystem(mode: &ModeIndex, alpha: Alpha) -> Result<ModeEigenSystem> {
    mode.check(BasisKind::B)?;
    let (a, c, disc) = coefficients(mode, alpha);
    let region = region_of(mode, a, disc);
    let (lp, lm) = if mode.is_zero_n() {
        (Complex64::new(a, 0.0), Complex64::new(0.0, 0.0))
    } else if disc >= 0.0 {
        // Product form for the small root avoids cancellation when c << a^2.
        let lp = 0.5 * (a + disc.sqrt());
        (Complex64::new(lp, 0.0), Complex64::new(c / lp, 0.0))
    } else {
        let w = 0.5 * (-disc).sqrt();
        (Complex64::new(0.5 * a, w), Complex64::new(0.5 * a, -w))
    };
    let a_plus = [lp, Complex64::new(-c, 0.0)];
    let a_minus = [lm, Complex64::new(-c, 0.0)];
    let (b_plus, b_minus) = if mode.is_zero_n() {
        (None, None)
    } else {
        let inv = 1.0 / (lp - lm);
        (
            Some([inv, inv * lm / c]),
            Some([-inv, -inv * lp / c]),
        )
    };
    Ok(ModeEigenSystem {
        mode: *mode,
        alpha,
        lambda_plus: lp,
        lambda_minus: lm,
        a_plus,
        a_minus,
        b_plus,
        b_minus,
        region,
        discriminant: disc,
    })
}
