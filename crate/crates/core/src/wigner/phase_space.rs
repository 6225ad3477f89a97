use super::WignerMap;
use crate::error::{Error, Result};

/// Trapezoid weights for a (possibly non-uniform) axis.
fn trapezoid_weights(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = 0.5 * (axis[i + 1] - axis[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

fn max_step(axis: &[f64]) -> f64 {
    axis.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

fn check_sampling(axis: &[f64], bound: Option<f64>, name: &'static str) -> Result<()> {
    if let Some(bound) = bound {
        let step = max_step(axis);
        if step > bound {
            return Err(Error::UnderSampled { axis: name, step, bound });
        }
    }
    Ok(())
}

/// `∫ W dk` per x sample: the intensity profile `⟨|E(x)|²⟩`.
pub fn marginal_x(map: &WignerMap) -> Result<Vec<f64>> {
    check_sampling(map.k_axis(), map.meta.k_step_max, "x")?;
    let w = trapezoid_weights(map.k_axis());
    Ok((0..map.nx()).map(|ix| map.row(ix).iter().zip(&w).map(|(v, w)| v * w).sum()).collect())
}

/// `∫ W dx` per k sample: `|Ẽ(−k)|² / 2π` with `Ẽ(q) = ∫ E e^{−iqx} dx`.
pub fn marginal_k(map: &WignerMap) -> Result<Vec<f64>> {
    check_sampling(map.x_axis(), map.meta.x_step_max, "k")?;
    let w = trapezoid_weights(map.x_axis());
    Ok((0..map.nk()).map(|ik| (0..map.nx()).map(|ix| map.get(ix, ik) * w[ix]).sum()).collect())
}

/// First and second moments of a map treated as a phase-space density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_x: f64,
    pub mean_k: f64,
    pub var_x: f64,
    pub var_k: f64,
    pub cov_xk: f64,
    /// Orientation of the principal axis, `½ atan2(2 cov, var_x − var_k)`.
    pub tilt_angle: f64,
}

pub fn covariance_moments(map: &WignerMap) -> Result<Moments> {
    let wx = trapezoid_weights(map.x_axis());
    let wk = trapezoid_weights(map.k_axis());
    let (xs, ks) = (map.x_axis(), map.k_axis());
    let (mut total, mut scale) = (0.0, 0.0);
    let (mut sx, mut sk) = (0.0, 0.0);
    for ix in 0..map.nx() {
        for ik in 0..map.nk() {
            let w = map.get(ix, ik) * wx[ix] * wk[ik];
            total += w;
            scale += w.abs();
            sx += w * xs[ix];
            sk += w * ks[ik];
        }
    }
    if !(total > 1e-12 * scale) || total <= 0.0 {
        return Err(Error::DegenerateMap { total });
    }
    let (mx, mk) = (sx / total, sk / total);
    let (mut vx, mut vk, mut cxk) = (0.0, 0.0, 0.0);
    for ix in 0..map.nx() {
        for ik in 0..map.nk() {
            let w = map.get(ix, ik) * wx[ix] * wk[ik];
            let (dx, dk) = (xs[ix] - mx, ks[ik] - mk);
            vx += w * dx * dx;
            vk += w * dk * dk;
            cxk += w * dx * dk;
        }
    }
    let (var_x, var_k, cov_xk) = (vx / total, vk / total, cxk / total);
    Ok(Moments {
        mean_x: mx,
        mean_k: mk,
        var_x,
        var_k,
        cov_xk,
        tilt_angle: 0.5 * (2.0 * cov_xk).atan2(var_x - var_k),
    })
}

fn interp(axis: &[f64], values: &[f64], x: f64) -> f64 {
    let n = axis.len();
    if n == 0 || x < axis[0] || x > axis[n - 1] {
        return 0.0;
    }
    let i = axis.partition_point(|&a| a <= x);
    if i == 0 {
        return values[0];
    }
    if i >= n {
        return values[n - 1];
    }
    let (x0, x1) = (axis[i - 1], axis[i]);
    let t = (x - x0) / (x1 - x0);
    values[i - 1] * (1.0 - t) + values[i] * t
}

/// Undoes free propagation over `z` at carrier wavenumber `k0`:
/// `W'(x, k) = W(x + (z/k0)·k, k)`, linearly interpolated in x and zero
/// outside the x span. Compensating with `-z` re-applies the propagation.
pub fn shear_compensate(map: &WignerMap, z: f64, k0: f64) -> Result<WignerMap> {
    if !(k0 > 0.0 && k0.is_finite()) {
        return Err(Error::invalid("k0", format!("carrier wavenumber must be positive, got {k0}")));
    }
    let s = z / k0;
    let xs = map.x_axis();
    let half_span = 0.5 * (xs[xs.len() - 1] - xs[0]);
    let kmax = map.k_axis().iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let shift = s.abs() * kmax;
    if shift >= half_span {
        return Err(Error::RemapOutOfRange { shift, half_span });
    }
    let mut values = vec![0.0; map.values().len()];
    let nk = map.nk();
    for (ik, &k) in map.k_axis().iter().enumerate() {
        let col = map.column(ik);
        for (ix, &x) in xs.iter().enumerate() {
            values[ix * nk + ik] = interp(xs, &col, x + s * k);
        }
    }
    let mut meta = map.meta.clone();
    meta.shears.push((z, k0));
    meta.stderr = None;
    map.with_values(values, meta)
}
