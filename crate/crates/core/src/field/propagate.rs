use num_complex::Complex64;
use rustfft::FftPlanner;

use super::Field1D;
use crate::error::{Error, Result};

/// Unnormalised forward DFT of the samples, in FFT bin order.
pub(crate) fn spectrum(field: &Field1D) -> Vec<Complex64> {
    let mut buf = field.samples().to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Paraxial free-space propagation over distance `z` by the spectral method.
///
/// Each plane-wave component `e^{iqx}` is multiplied by `exp(+i z q² / (2 k0))`,
/// which is the sign that matches the `exp(2ikξ)` Wigner kernel: a beam
/// propagated by `z > 0` diverges, its Wigner function shears as
/// `W_z(x, k) = W_0(x - (z/k0) k, k)`, and its position–frequency covariance
/// is positive. The grid is treated as periodic.
pub fn propagate_fresnel(field: &Field1D, z: f64, k0: f64) -> Result<Field1D> {
    if !(k0 > 0.0 && k0.is_finite()) {
        return Err(Error::invalid("k0", format!("carrier wavenumber must be positive, got {k0}")));
    }
    if !z.is_finite() {
        return Err(Error::invalid("z", "must be finite"));
    }
    if z == 0.0 {
        return Ok(field.clone());
    }
    let grid = *field.grid();
    let n = grid.n();
    let mut planner = FftPlanner::new();
    let mut buf = field.samples().to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (v, q) in buf.iter_mut().zip(grid.fft_frequencies()) {
        *v *= Complex64::from_polar(1.0 / n as f64, z * q * q / (2.0 * k0));
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    Field1D::new(grid, buf)
}
