use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustdct::{Dct1, DctPlanner, Dst1};
use rustfft::{Fft, FftPlanner};

use super::eval::vertical_sign;
use super::field::SpectralField;
use super::mode::{BasisKind, Truncation};
use crate::error::{Error, Result};

/// Real samples on the tensor grid of a [`Truncation`].
///
/// Layout is lexicographic in `(x_1, ..., x_{d-1}, x_d)`: the vertical
/// column of each horizontal grid point is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalGrid {
    trunc: Truncation,
    values: Vec<f64>,
}

impl PhysicalGrid {
    pub fn new(trunc: Truncation, values: Vec<f64>) -> Result<Self> {
        if values.len() != trunc.grid_len() {
            return Err(Error::Dimension(format!(
                "grid has {} samples, truncation expects {}",
                values.len(),
                trunc.grid_len()
            )));
        }
        Ok(Self { trunc, values })
    }

    /// Samples `f(x_h, x_d)` on the grid.
    pub fn from_fn(trunc: Truncation, f: impl Fn(&[f64]) -> f64) -> Self {
        let v1 = trunc.grid_v + 1;
        let dh = trunc.horizontal_dims();
        let mut values = Vec::with_capacity(trunc.grid_len());
        let mut x = vec![0.0; dh + 1];
        for g in 0..trunc.layer_len() {
            let mut rem = g;
            for axis in (0..dh).rev() {
                x[axis] = trunc.x_horizontal(rem % trunc.grid_h);
                rem /= trunc.grid_h;
            }
            for j in 0..v1 {
                x[dh] = trunc.x_vertical(j);
                values.push(f(&x));
            }
        }
        Self { trunc, values }
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at horizontal grid point `g` (flat) and level `j`.
    pub fn at(&self, g: usize, j: usize) -> f64 {
        self.values[g * (self.trunc.grid_v + 1) + j]
    }

    /// Pointwise product.
    pub fn mul(&self, other: &PhysicalGrid) -> Result<PhysicalGrid> {
        if self.trunc != other.trunc {
            return Err(Error::Dimension("grids use different truncations".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(PhysicalGrid {
            trunc: self.trunc,
            values,
        })
    }

    /// `self += a * b` pointwise.
    pub fn add_product(&mut self, a: &PhysicalGrid, b: &PhysicalGrid) {
        for ((s, x), y) in self.values.iter_mut().zip(&a.values).zip(&b.values) {
            *s += x * y;
        }
    }

    pub fn zeros(trunc: Truncation) -> Self {
        Self {
            trunc,
            values: vec![0.0; trunc.grid_len()],
        }
    }

    /// Trapezoidal/rectangle quadrature of `∫_Ω f`.
    pub fn integrate(&self) -> f64 {
        let v = self.trunc.grid_v;
        let hw = 1.0 / self.trunc.layer_len() as f64;
        let dz = 2.0 / v as f64;
        self.values
            .chunks(v + 1)
            .map(|col| {
                let inner: f64 = col[1..v].iter().sum();
                (inner + 0.5 * (col[0] + col[v])) * dz
            })
            .sum::<f64>()
            * hw
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Planned transforms between grid samples and `B`/`C` coefficients.
///
/// Horizontal axes use complex FFTs; the vertical axis uses DST-I (`B`) and
/// DCT-I (`C`) on the shifted coordinate `y = x_d + 1`, with the per-`q` signs
/// of [`vertical_sign`]. Coefficients are expansion coefficients: for `C`
/// fields `f = sum coeff * C_{n,q}` with `c_0 = 1`.
#[derive(Clone)]
pub struct Transformer {
    trunc: Truncation,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
    dct: Arc<dyn Dct1<f64>>,
    dst: Arc<dyn Dst1<f64>>,
}

impl std::fmt::Debug for Transformer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transformer").field("trunc", &self.trunc).finish()
    }
}

impl Transformer {
    pub fn new(trunc: Truncation) -> Self {
        let mut fp = FftPlanner::new();
        let mut dp = DctPlanner::new();
        Self {
            trunc,
            fft_fwd: fp.plan_fft_forward(trunc.grid_h),
            fft_inv: fp.plan_fft_inverse(trunc.grid_h),
            dct: dp.plan_dct1(trunc.grid_v + 1),
            dst: dp.plan_dst1(trunc.grid_v - 1),
        }
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    fn bin(&self, n: i64) -> usize {
        n.rem_euclid(self.trunc.grid_h as i64) as usize
    }

    /// Flat layer position of the FFT bin holding horizontal index vector `h`.
    fn layer_pos(&self, h: usize) -> usize {
        let n = self.trunc.n_of(h);
        match self.trunc.horizontal_dims() {
            1 => self.bin(n[0]),
            _ => self.bin(n[0]) * self.trunc.grid_h + self.bin(n[1]),
        }
    }

    fn fft_layer(&self, layer: &mut [Complex64], forward: bool) {
        let m = self.trunc.grid_h;
        let plan = if forward { &self.fft_fwd } else { &self.fft_inv };
        match self.trunc.horizontal_dims() {
            1 => plan.process(layer),
            _ => {
                plan.process(layer);
                let mut col = vec![Complex64::default(); m];
                for c in 0..m {
                    for r in 0..m {
                        col[r] = layer[r * m + c];
                    }
                    plan.process(&mut col);
                    for r in 0..m {
                        layer[r * m + c] = col[r];
                    }
                }
            }
        }
    }

    /// Forward transform of real samples.
    pub fn forward(&self, grid: &PhysicalGrid, kind: BasisKind) -> Result<SpectralField> {
        if grid.trunc != self.trunc {
            return Err(Error::Dimension("grid does not match the transformer".into()));
        }
        let cvals: Vec<Complex64> = grid.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut f = self.forward_complex(&cvals, kind)?;
        f.symmetrize();
        Ok(f)
    }

    /// Forward transform of complex samples (same layout as [`PhysicalGrid`]).
    pub fn forward_complex(&self, values: &[Complex64], kind: BasisKind) -> Result<SpectralField> {
        let t = &self.trunc;
        if values.len() != t.grid_len() {
            return Err(Error::Dimension(format!(
                "grid has {} samples, truncation expects {}",
                values.len(),
                t.grid_len()
            )));
        }
        let v1 = t.grid_v + 1;
        let layer_len = t.layer_len();
        let norm = 1.0 / layer_len as f64;

        // Horizontal FFT per level; keep only the retained wavenumbers.
        let positions: Vec<usize> = (0..t.n_count()).map(|h| self.layer_pos(h)).collect();
        let levels: Vec<Vec<Complex64>> = (0..v1)
            .into_par_iter()
            .map(|j| {
                let mut layer: Vec<Complex64> = (0..layer_len).map(|g| values[g * v1 + j]).collect();
                self.fft_layer(&mut layer, true);
                positions.iter().map(|&p| layer[p] * norm).collect()
            })
            .collect();

        let nq = t.q_count(kind);
        let coeffs: Vec<Complex64> = (0..t.n_count())
            .into_par_iter()
            .flat_map_iter(|h| {
                let col: Vec<Complex64> = (0..v1).map(|j| levels[j][h]).collect();
                self.vertical_forward(&col, kind).into_iter().take(nq)
            })
            .collect();
        SpectralField::from_coeffs(kind, *t, coeffs)
    }

    fn vertical_forward(&self, col: &[Complex64], kind: BasisKind) -> Vec<Complex64> {
        let v = self.trunc.grid_v;
        let q_max = self.trunc.q_max;
        let scale = 2.0 / v as f64;
        match kind {
            BasisKind::B => {
                let mut re: Vec<f64> = col[1..v].iter().map(|c| c.re).collect();
                let mut im: Vec<f64> = col[1..v].iter().map(|c| c.im).collect();
                self.dst.process_dst1(&mut re);
                self.dst.process_dst1(&mut im);
                (1..=q_max)
                    .map(|q| {
                        let s = vertical_sign(q as u32) * scale;
                        Complex64::new(re[q - 1] * s, im[q - 1] * s)
                    })
                    .collect()
            }
            BasisKind::C => {
                let mut re: Vec<f64> = col.iter().map(|c| c.re).collect();
                let mut im: Vec<f64> = col.iter().map(|c| c.im).collect();
                self.dct.process_dct1(&mut re);
                self.dct.process_dct1(&mut im);
                (0..=q_max)
                    .map(|q| {
                        let w = if q == 0 { 0.5 * scale } else { scale };
                        let s = vertical_sign(q as u32) * w;
                        Complex64::new(re[q] * s, im[q] * s)
                    })
                    .collect()
            }
        }
    }

    fn vertical_inverse(&self, coeffs: &[Complex64], kind: BasisKind) -> Vec<Complex64> {
        let v = self.trunc.grid_v;
        match kind {
            BasisKind::B => {
                let mut re = vec![0.0; v - 1];
                let mut im = vec![0.0; v - 1];
                for (k, c) in coeffs.iter().enumerate() {
                    let s = vertical_sign(k as u32 + 1);
                    re[k] = s * c.re;
                    im[k] = s * c.im;
                }
                self.dst.process_dst1(&mut re);
                self.dst.process_dst1(&mut im);
                let mut out = vec![Complex64::default(); v + 1];
                for j in 1..v {
                    out[j] = Complex64::new(re[j - 1], im[j - 1]);
                }
                out
            }
            BasisKind::C => {
                let mut re = vec![0.0; v + 1];
                let mut im = vec![0.0; v + 1];
                for (q, c) in coeffs.iter().enumerate() {
                    let s = vertical_sign(q as u32) * if q == 0 { 2.0 } else { 1.0 };
                    re[q] = s * c.re;
                    im[q] = s * c.im;
                }
                self.dct.process_dct1(&mut re);
                self.dct.process_dct1(&mut im);
                re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect()
            }
        }
    }

    /// Evaluates the finite series on the grid (complex samples).
    pub fn inverse_complex(&self, field: &SpectralField) -> Result<Vec<Complex64>> {
        let t = &self.trunc;
        if field.trunc() != t {
            return Err(Error::Dimension("field does not match the transformer".into()));
        }
        let kind = field.kind();
        let nq = t.q_count(kind);
        let v1 = t.grid_v + 1;
        let layer_len = t.layer_len();

        let cols: Vec<Vec<Complex64>> = field
            .coeffs()
            .par_chunks(nq)
            .map(|c| self.vertical_inverse(c, kind))
            .collect();
        let positions: Vec<usize> = (0..t.n_count()).map(|h| self.layer_pos(h)).collect();
        let layers: Vec<Vec<Complex64>> = (0..v1)
            .into_par_iter()
            .map(|j| {
                let mut layer = vec![Complex64::default(); layer_len];
                for (h, &p) in positions.iter().enumerate() {
                    layer[p] = cols[h][j];
                }
                self.fft_layer(&mut layer, false);
                layer
            })
            .collect();
        let mut out = vec![Complex64::default(); t.grid_len()];
        for (j, layer) in layers.iter().enumerate() {
            for (g, val) in layer.iter().enumerate() {
                out[g * v1 + j] = *val;
            }
        }
        Ok(out)
    }

    /// Evaluates a real field on the grid.
    pub fn inverse(&self, field: &SpectralField) -> Result<PhysicalGrid> {
        let vals = self.inverse_complex(field)?;
        Ok(PhysicalGrid {
            trunc: self.trunc,
            values: vals.into_iter().map(|c| c.re).collect(),
        })
    }
}
