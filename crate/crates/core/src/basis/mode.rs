use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which vertical family a scalar field is expanded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    /// Dirichlet-type family `B_{n,q}`, `q >= 1`.
    B,
    /// Neumann-type family `C_{n,q}`, `q >= 0`.
    C,
}

impl BasisKind {
    pub fn min_q(self) -> u32 {
        match self {
            BasisKind::B => 1,
            BasisKind::C => 0,
        }
    }

    /// Basis of the pointwise product of two fields.
    pub fn product(self, other: BasisKind) -> BasisKind {
        match (self, other) {
            (BasisKind::B, BasisKind::C) | (BasisKind::C, BasisKind::B) => BasisKind::B,
            _ => BasisKind::C,
        }
    }

    /// Basis after one vertical derivative.
    pub fn vertical_derivative(self) -> BasisKind {
        match self {
            BasisKind::B => BasisKind::C,
            BasisKind::C => BasisKind::B,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::B => f.write_str("B"),
            BasisKind::C => f.write_str("C"),
        }
    }
}

/// Frequency `eta = (2 pi n, pi q / 2)` together with its integer origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    n: [i64; 2],
    dh: usize,
    q: u32,
}

impl ModeIndex {
    /// Builds a mode from the horizontal index vector (length 1 or 2) and `q`.
    pub fn new(n: &[i64], q: u32) -> Result<Self> {
        if n.is_empty() || n.len() > 2 {
            return Err(Error::Dimension(format!(
                "horizontal index must have 1 or 2 components, got {}",
                n.len()
            )));
        }
        let mut arr = [0; 2];
        arr[..n.len()].copy_from_slice(n);
        Ok(Self { n: arr, dh: n.len(), q })
    }

    /// Two-dimensional shorthand.
    pub fn new_2d(n: i64, q: u32) -> Self {
        Self { n: [n, 0], dh: 1, q }
    }

    pub fn n(&self) -> &[i64] {
        &self.n[..self.dh]
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn horizontal_dims(&self) -> usize {
        self.dh
    }

    pub fn is_zero_n(&self) -> bool {
        self.n().iter().all(|&v| v == 0)
    }

    /// `n~ = 2 pi n`.
    pub fn n_tilde(&self) -> [f64; 2] {
        [2.0 * PI * self.n[0] as f64, 2.0 * PI * self.n[1] as f64]
    }

    /// `q~ = pi q / 2`.
    pub fn q_tilde(&self) -> f64 {
        0.5 * PI * self.q as f64
    }

    /// `|n~|^2`.
    pub fn n_tilde_sq(&self) -> f64 {
        let nt = self.n_tilde();
        nt[0] * nt[0] + nt[1] * nt[1]
    }

    /// `|eta|^2 = |n~|^2 + q~^2`.
    pub fn eta_sq(&self) -> f64 {
        let qt = self.q_tilde();
        self.n_tilde_sq() + qt * qt
    }

    pub fn eta(&self) -> f64 {
        self.eta_sq().sqrt()
    }

    /// Checks membership in the index set of `kind` (`J` for B, `I` for C).
    pub fn check(&self, kind: BasisKind) -> Result<()> {
        if self.q < kind.min_q() {
            return Err(Error::InvalidMode(format!(
                "q = {} is not a {kind}-basis index",
                self.q
            )));
        }
        Ok(())
    }

    pub fn negated(&self) -> Self {
        Self {
            n: [-self.n[0], -self.n[1]],
            dh: self.dh,
            q: self.q,
        }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={:?}, q={})", self.n(), self.q)
    }
}

/// Mode truncation plus the collocation grid used for products.
///
/// Horizontal indices satisfy `|n_i| <= n_max`, vertical indices `q <= q_max`.
/// The grid has `grid_h` points per horizontal axis and `grid_v` vertical
/// intervals (`grid_v + 1` points including both walls).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub d: usize,
    pub n_max: usize,
    pub q_max: usize,
    pub grid_h: usize,
    pub grid_v: usize,
}

impl Truncation {
    /// Smallest dealiased grid for the given mode limits.
    pub fn new(d: usize, n_max: usize, q_max: usize) -> Result<Self> {
        let grid_h = 3 * n_max + 1;
        let grid_v = (3 * q_max + 3) / 2;
        Self::with_grid(d, n_max, q_max, grid_h, grid_v)
    }

    pub fn with_grid(
        d: usize,
        n_max: usize,
        q_max: usize,
        grid_h: usize,
        grid_v: usize,
    ) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(Error::Dimension(format!("d must be 2 or 3, got {d}")));
        }
        if q_max < 4 {
            return Err(Error::Dimension(format!("q_max must be at least 4, got {q_max}")));
        }
        if n_max < 1 {
            return Err(Error::Dimension("n_max must be at least 1".into()));
        }
        if grid_h < 3 * n_max + 1 {
            return Err(Error::Dimension(format!(
                "horizontal grid {grid_h} below dealiasing size {}",
                3 * n_max + 1
            )));
        }
        if 2 * grid_v < 3 * q_max + 2 {
            return Err(Error::Dimension(format!(
                "vertical grid {grid_v} below dealiasing size 3Q/2+1 = {}",
                1.5 * q_max as f64 + 1.0
            )));
        }
        Ok(Self {
            d,
            n_max,
            q_max,
            grid_h,
            grid_v,
        })
    }

    pub fn horizontal_dims(&self) -> usize {
        self.d - 1
    }

    /// Number of horizontal wavenumbers per axis, `2 n_max + 1`.
    pub fn n_per_axis(&self) -> usize {
        2 * self.n_max + 1
    }

    /// Number of horizontal wavenumber vectors.
    pub fn n_count(&self) -> usize {
        self.n_per_axis().pow(self.horizontal_dims() as u32)
    }

    pub fn q_count(&self, kind: BasisKind) -> usize {
        match kind {
            BasisKind::B => self.q_max,
            BasisKind::C => self.q_max + 1,
        }
    }

    pub fn mode_count(&self, kind: BasisKind) -> usize {
        self.n_count() * self.q_count(kind)
    }

    /// Horizontal index vector for flat horizontal position `h`
    /// (lexicographic in `(n_1, ..., n_{d-1})`, each running from `-n_max`).
    pub fn n_of(&self, h: usize) -> [i64; 2] {
        let per = self.n_per_axis();
        let off = self.n_max as i64;
        match self.horizontal_dims() {
            1 => [h as i64 - off, 0],
            _ => [(h / per) as i64 - off, (h % per) as i64 - off],
        }
    }

    /// Flat horizontal position of `n`, if inside the truncation.
    pub fn h_of(&self, n: &[i64]) -> Option<usize> {
        let per = self.n_per_axis();
        let off = self.n_max as i64;
        let mut h = 0usize;
        for &ni in n.iter().take(self.horizontal_dims()) {
            if ni.unsigned_abs() as usize > self.n_max {
                return None;
            }
            h = h * per + (ni + off) as usize;
        }
        Some(h)
    }

    /// Flat horizontal position of `-n` given the position of `n`.
    pub fn h_neg(&self, h: usize) -> usize {
        self.n_count() - 1 - h
    }

    pub fn mode(&self, kind: BasisKind, flat: usize) -> ModeIndex {
        let nq = self.q_count(kind);
        let n = self.n_of(flat / nq);
        let q = (flat % nq) as u32 + kind.min_q();
        ModeIndex {
            n,
            dh: self.horizontal_dims(),
            q,
        }
    }

    pub fn flat(&self, kind: BasisKind, mode: &ModeIndex) -> Option<usize> {
        if mode.q < kind.min_q() || mode.q as usize > self.q_max {
            return None;
        }
        let h = self.h_of(mode.n())?;
        Some(h * self.q_count(kind) + (mode.q - kind.min_q()) as usize)
    }

    pub fn modes(&self, kind: BasisKind) -> impl Iterator<Item = ModeIndex> + '_ {
        (0..self.mode_count(kind)).map(move |i| self.mode(kind, i))
    }

    /// Number of grid points in one horizontal layer.
    pub fn layer_len(&self) -> usize {
        self.grid_h.pow(self.horizontal_dims() as u32)
    }

    pub fn grid_len(&self) -> usize {
        self.layer_len() * (self.grid_v + 1)
    }

    /// Vertical grid coordinate `x_d` of level `j` (walls at `j = 0` and `j = grid_v`).
    pub fn x_vertical(&self, j: usize) -> f64 {
        2.0 * j as f64 / self.grid_v as f64 - 1.0
    }

    pub fn x_horizontal(&self, k: usize) -> f64 {
        k as f64 / self.grid_h as f64
    }

    /// Largest `|eta|` in the truncation.
    pub fn max_eta(&self) -> f64 {
        let nt = 2.0 * PI * self.n_max as f64;
        let qt = 0.5 * PI * self.q_max as f64;
        (self.horizontal_dims() as f64 * nt * nt + qt * qt).sqrt()
    }
}
