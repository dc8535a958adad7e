use num_complex::Complex64;

use super::field::SpectralField;
use super::mode::BasisKind;
use super::transform::Transformer;
use crate::error::{Error, Result};

/// Differentiation axis: a horizontal axis `0..d-1` or the vertical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal(usize),
    Vertical,
}

/// Spectral derivative.
///
/// Horizontal derivatives multiply by `i n~_i` and keep the basis. The
/// vertical derivative maps `B -> C` with factor `+q~` and `C -> B` with
/// factor `-q~`; the `q = 0` part of a `C` field is dropped.
pub fn derivative(f: &SpectralField, axis: Axis) -> Result<SpectralField> {
    let t = *f.trunc();
    match axis {
        Axis::Horizontal(i) => {
            if i >= t.horizontal_dims() {
                return Err(Error::Dimension(format!(
                    "horizontal axis {i} out of range for d = {}",
                    t.d
                )));
            }
            Ok(f.map_modes(|m, c| c * Complex64::new(0.0, m.n_tilde()[i])))
        }
        Axis::Vertical => {
            let target = f.kind().vertical_derivative();
            let mut out = SpectralField::zeros(target, t);
            let nq_src = t.q_count(f.kind());
            let nq_dst = t.q_count(target);
            let src = f.coeffs();
            let dst = out.coeffs_mut();
            for h in 0..t.n_count() {
                for q in 1..=t.q_max {
                    let qt = 0.5 * std::f64::consts::PI * q as f64;
                    let (si, di) = match f.kind() {
                        BasisKind::B => (h * nq_src + q - 1, h * nq_dst + q),
                        BasisKind::C => (h * nq_src + q, h * nq_dst + q - 1),
                    };
                    let factor = match f.kind() {
                        BasisKind::B => qt,
                        BasisKind::C => -qt,
                    };
                    dst[di] = src[si] * factor;
                }
            }
            out.set_real(f.is_real());
            Ok(out)
        }
    }
}

/// Dealiased pointwise product, returned in the parity-correct basis
/// (`B x C -> B`, `B x B -> C`, `C x C -> C`).
pub fn product(tr: &Transformer, f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.ensure_compatible(g)?;
    if f.trunc() != tr.trunc() {
        return Err(Error::Dimension("fields do not match the transformer".into()));
    }
    let target = f.kind().product(g.kind());
    let fg = tr.inverse(f)?;
    let gg = tr.inverse(g)?;
    tr.forward(&fg.mul(&gg)?, target)
}
