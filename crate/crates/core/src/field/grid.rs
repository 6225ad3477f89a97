use crate::error::{Error, Result};

/// Alignment slack when snapping a coordinate onto the lattice, in units of the lattice step.
const ALIGN_TOL: f64 = 1e-9;

/// Uniform transverse sampling grid.
///
/// Sample `j` sits at `x_center + (j - n/2) * dx`. `n` is even, so index `n/2`
/// is the parity pivot and sample `j` mirrors onto sample `n - j`. Index 0 has
/// no partner; constructors require it to carry negligible amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    dx: f64,
    x_center: f64,
}

impl Grid1D {
    pub fn new(n: usize, dx: f64, x_center: f64) -> Result<Self> {
        if n < 8 {
            return Err(Error::invalid("n", format!("need at least 8 samples, got {n}")));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::invalid("n", format!("sample count must be even, got {n}")));
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::invalid("dx", format!("spacing must be positive, got {dx}")));
        }
        if !x_center.is_finite() {
            return Err(Error::invalid("x_center", "must be finite"));
        }
        Ok(Self { n, dx, x_center })
    }

    /// Grid centred on zero.
    pub fn centered(n: usize, dx: f64) -> Result<Self> {
        Self::new(n, dx, 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x_center(&self) -> f64 {
        self.x_center
    }

    pub fn pivot(&self) -> usize {
        self.n / 2
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_center + (j as f64 - (self.n / 2) as f64) * self.dx
    }

    /// Offset of sample `j` from the pivot.
    pub fn offset(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.dx
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn x_min(&self) -> f64 {
        self.x(0)
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    /// Signed number of whole steps from the pivot to `x`, or `OffGrid`.
    pub fn steps_from_pivot(&self, x: f64) -> Result<i64> {
        let s = (x - self.x_center) / self.dx;
        let r = s.round();
        if !s.is_finite() || (s - r).abs() > ALIGN_TOL * s.abs().max(1.0) {
            return Err(Error::OffGrid { x });
        }
        Ok(r as i64)
    }

    /// Twice the fractional sample index of `x`; `x` may sit on a sample or
    /// halfway between two. Pairs `(i, j)` with `i + j` equal to this value are
    /// mirror images about `x`.
    pub fn doubled_index(&self, x: f64) -> Result<i64> {
        let s = 2.0 * (x - self.x_center) / self.dx;
        let r = s.round();
        if !s.is_finite() || (s - r).abs() > ALIGN_TOL * s.abs().max(1.0) {
            return Err(Error::OffGrid { x });
        }
        Ok(r as i64 + self.n as i64)
    }

    /// Conjugate-frequency step for the `exp(2ikξ)` kernel.
    pub fn natural_dk(&self) -> f64 {
        std::f64::consts::PI / (self.n as f64 * self.dx)
    }

    /// `n` frequencies covering `[-π/(2dx), π/(2dx))` at the natural step.
    pub fn natural_k_axis(&self) -> Vec<f64> {
        let dk = self.natural_dk();
        let h = (self.n / 2) as f64;
        (0..self.n).map(|m| (m as f64 - h) * dk).collect()
    }

    /// Angular spatial frequencies in FFT bin order.
    pub(crate) fn fft_frequencies(&self) -> Vec<f64> {
        let n = self.n;
        let dq = 2.0 * std::f64::consts::PI / (n as f64 * self.dx);
        (0..n)
            .map(|m| if m < n / 2 { m as f64 * dq } else { (m as f64 - n as f64) * dq })
            .collect()
    }

    pub(crate) fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n && self.dx == other.dx && self.x_center == other.x_center
    }
}
