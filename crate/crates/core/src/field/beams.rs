use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{superpose, Ensemble, Field1D, Grid1D};
use crate::error::{Error, Result};

pub const MAX_HG_ORDER: usize = 20;

fn check_width(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::invalid("a", format!("width must be positive, got {a}")));
    }
    Ok(())
}

/// Unit-power Gaussian
/// `E(x) = (πa²)^(-1/4) exp(-(x-x_c)²/(2a²) + i k_c (x-x_c) + i c (x-x_c)²)`.
///
/// A positive chirp `c` shears the Wigner function as `W(x, k + 2cx)`.
pub fn make_gaussian(grid: Grid1D, x_c: f64, a: f64, k_c: f64, c: f64) -> Result<Field1D> {
    check_width(a)?;
    for (name, v) in [("x_c", x_c), ("k_c", k_c), ("c", c)] {
        if !v.is_finite() {
            return Err(Error::invalid(name, "must be finite"));
        }
    }
    let norm = (PI * a * a).powf(-0.25);
    let f = Field1D::from_fn(grid, |x| {
        let d = x - x_c;
        Complex64::new(-d * d / (2.0 * a * a), k_c * d + c * d * d).exp() * norm
    })?;
    f.check_edges()?;
    Ok(f)
}

/// Unit-power Hermite–Gauss mode of the given order, centred on `x = 0`.
///
/// Built with the normalised three-term recurrence, which stays finite for
/// all supported orders.
pub fn make_hermite_gauss(grid: Grid1D, order: usize, a: f64) -> Result<Field1D> {
    check_width(a)?;
    if order > MAX_HG_ORDER {
        return Err(Error::invalid("order", format!("order must be at most {MAX_HG_ORDER}, got {order}")));
    }
    let f = Field1D::from_fn(grid, |x| Complex64::new(hermite_function(order, x / a) / a.sqrt(), 0.0))?;
    f.check_edges()?;
    Ok(f)
}

/// Normalised Hermite function `ψ_n(u)` with `∫ψ_n² du = 1`.
pub(crate) fn hermite_function(order: usize, u: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * u * u).exp();
    if order == 0 {
        return prev;
    }
    let mut cur = 2f64.sqrt() * u * prev;
    for m in 1..order {
        let m = m as f64;
        let next = (2.0 / (m + 1.0)).sqrt() * u * cur - (m / (m + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Glass-wedge input: two equal Gaussians at carrier frequencies `k1`, `k2`
/// superposed with amplitudes `1/√2`, plus a weak third reflection of
/// amplitude `eps3` at `k3`. All beams share width `a` and chirp `c`.
pub fn wedge_beam(grid: Grid1D, k1: f64, k2: f64, a: f64, c: f64, eps3: f64, k3: f64) -> Result<Ensemble> {
    if !(eps3 >= 0.0 && eps3.is_finite()) {
        return Err(Error::invalid("eps3", format!("third-beam amplitude must be nonnegative, got {eps3}")));
    }
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut fields = vec![make_gaussian(grid, 0.0, a, k1, c)?, make_gaussian(grid, 0.0, a, k2, c)?];
    let mut coeffs = vec![s, s];
    if eps3 > 0.0 {
        fields.push(make_gaussian(grid, 0.0, a, k3, c)?);
        coeffs.push(Complex64::new(eps3, 0.0));
    }
    Ok(Ensemble::coherent(superpose(&fields, &coeffs)?))
}
