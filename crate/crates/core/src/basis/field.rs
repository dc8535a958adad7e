use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mode::{BasisKind, ModeIndex, Truncation};
use crate::error::{Error, Result};

/// Coefficients of a scalar field over a truncated mode set.
///
/// Storage is lexicographic in `(n_1, ..., n_{d-1}, q)`; see
/// [`Truncation::flat`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    kind: BasisKind,
    trunc: Truncation,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl SpectralField {
    pub fn zeros(kind: BasisKind, trunc: Truncation) -> Self {
        Self {
            kind,
            trunc,
            coeffs: vec![Complex64::new(0.0, 0.0); trunc.mode_count(kind)],
            real: true,
        }
    }

    pub fn from_coeffs(kind: BasisKind, trunc: Truncation, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != trunc.mode_count(kind) {
            return Err(Error::Dimension(format!(
                "expected {} coefficients for a {kind}-field, got {}",
                trunc.mode_count(kind),
                coeffs.len()
            )));
        }
        let mut f = Self {
            kind,
            trunc,
            coeffs,
            real: false,
        };
        f.real = f.conjugate_symmetry_defect() <= 1e-14 * f.max_abs().max(1e-300);
        Ok(f)
    }

    /// Field holding a single basis function `B_mode` or `C_mode`
    /// (no conjugate partner, so generally complex-valued).
    pub fn unit(kind: BasisKind, trunc: Truncation, mode: &ModeIndex) -> Result<Self> {
        mode.check(kind)?;
        let idx = trunc
            .flat(kind, mode)
            .ok_or_else(|| Error::InvalidMode(format!("{mode} outside the truncation")))?;
        let mut f = Self::zeros(kind, trunc);
        f.coeffs[idx] = Complex64::new(1.0, 0.0);
        f.real = mode.is_zero_n();
        Ok(f)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Whether the field was constructed or verified as real-valued.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn set_real(&mut self, real: bool) {
        self.real = real;
    }

    pub fn get(&self, mode: &ModeIndex) -> Complex64 {
        self.trunc
            .flat(self.kind, mode)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    pub fn set(&mut self, mode: &ModeIndex, value: Complex64) -> Result<()> {
        mode.check(self.kind)?;
        let idx = self
            .trunc
            .flat(self.kind, mode)
            .ok_or_else(|| Error::InvalidMode(format!("{mode} outside the truncation")))?;
        self.coeffs[idx] = value;
        Ok(())
    }

    /// Sets `coeff(n, q) = value` and `coeff(-n, q) = conj(value)`.
    pub fn set_real_pair(&mut self, mode: &ModeIndex, value: Complex64) -> Result<()> {
        if mode.is_zero_n() {
            self.set(mode, Complex64::new(value.re, 0.0))
        } else {
            self.set(mode, value)?;
            self.set(&mode.negated(), value.conj())
        }
    }

    pub fn mode(&self, flat: usize) -> ModeIndex {
        self.trunc.mode(self.kind, flat)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.trunc.mode(self.kind, i), c))
    }

    pub fn ensure_compatible(&self, other: &SpectralField) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::Dimension("fields use different truncations".into()));
        }
        Ok(())
    }

    pub fn ensure_same_shape(&self, other: &SpectralField) -> Result<()> {
        self.ensure_compatible(other)?;
        if self.kind != other.kind {
            return Err(Error::Dimension(format!(
                "basis mismatch: {} vs {}",
                self.kind, other.kind
            )));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Sum of coefficient moduli, an upper bound for the sup norm.
    pub fn l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Largest `|coeff(-n,q) - conj(coeff(n,q))|`.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let nq = self.trunc.q_count(self.kind);
        let mut worst: f64 = 0.0;
        for h in 0..self.trunc.n_count() {
            let hn = self.trunc.h_neg(h);
            for k in 0..nq {
                let a = self.coeffs[h * nq + k];
                let b = self.coeffs[hn * nq + k];
                worst = worst.max((b - a.conj()).norm());
            }
        }
        worst
    }

    /// Replaces the coefficients by their conjugate-symmetric part.
    pub fn symmetrize(&mut self) {
        let nq = self.trunc.q_count(self.kind);
        for h in 0..self.trunc.n_count() {
            let hn = self.trunc.h_neg(h);
            if hn < h {
                continue;
            }
            for k in 0..nq {
                let a = self.coeffs[h * nq + k];
                let b = self.coeffs[hn * nq + k];
                let s = 0.5 * (a + b.conj());
                self.coeffs[h * nq + k] = s;
                self.coeffs[hn * nq + k] = s.conj();
            }
        }
        self.real = true;
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &SpectralField) -> Result<()> {
        self.ensure_same_shape(other)?;
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += a * y;
        }
        self.real &= other.real;
        Ok(())
    }

    pub fn added(&self, other: &SpectralField) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Maps every coefficient through `f(mode, coeff)`.
    pub fn map_modes(&self, mut f: impl FnMut(&ModeIndex, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let m = self.trunc.mode(self.kind, i);
            *c = f(&m, *c);
        }
        out
    }
}
