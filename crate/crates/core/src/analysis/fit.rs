use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

use super::model::{TwoBeamModel, PARAM_NAMES};
use super::pairwise_sum;
use crate::error::{Error, Result};
use crate::io::KeyValues;
use crate::wigner::WignerMap;

const NP: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Stop once an accepted step lowers the cost by less than this fraction.
    pub rel_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { max_iterations: 500, rel_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: TwoBeamModel,
    /// One standard error per parameter, in [`PARAM_NAMES`] order. Parameters
    /// the data do not constrain get `inf`.
    pub stderr: [f64; NP],
    pub rms_residual: f64,
    pub cost: f64,
    pub iterations: usize,
    pub points: usize,
}

impl FitResult {
    pub fn mu_stderr(&self) -> f64 {
        self.stderr[8]
    }

    pub fn report(&self) -> KeyValues {
        let mut kv = KeyValues::default();
        let p = self.model.to_params();
        for (i, name) in PARAM_NAMES.iter().enumerate() {
            kv.push(*name, format!("{:.9}", p[i]));
            kv.push(format!("{name}_stderr"), format!("{:.3e}", self.stderr[i]));
        }
        if self.model.mu.abs() > 1.0 {
            kv.push("mu_note", "unphysical, within error");
        }
        kv.push("rms_residual", format!("{:.6e}", self.rms_residual));
        kv.push("cost", format!("{:.6e}", self.cost));
        kv.push("iterations", self.iterations);
        kv.push("points", self.points);
        kv
    }
}

struct Problem<'a> {
    xs: Vec<f64>,
    ks: Vec<f64>,
    data: &'a [f64],
}

impl<'a> Problem<'a> {
    fn new(map: &'a WignerMap) -> Self {
        let mut xs = Vec::with_capacity(map.values().len());
        let mut ks = Vec::with_capacity(map.values().len());
        for &x in map.x_axis() {
            for &k in map.k_axis() {
                xs.push(x);
                ks.push(k);
            }
        }
        Self { xs, ks, data: map.values() }
    }

    fn residuals(&self, m: &TwoBeamModel) -> Vec<f64> {
        (0..self.data.len()).map(|i| self.data[i] - m.value(self.xs[i], self.ks[i])).collect()
    }

    /// `Σ r²`, or `inf` outside the model's domain.
    fn cost(&self, p: &[f64; NP]) -> f64 {
        let m = TwoBeamModel::from_params(p);
        if !(m.a > 0.0 && m.amp1 >= 0.0 && m.amp2 >= 0.0) {
            return f64::INFINITY;
        }
        let c = pairwise_sum(&self.residuals(&m).iter().map(|r| r * r).collect::<Vec<_>>());
        if c.is_finite() { c } else { f64::INFINITY }
    }

    /// Central-difference Jacobian of the model, one column per parameter.
    fn jacobian(&self, p: &[f64; NP]) -> DMatrix<f64> {
        let n = self.data.len();
        let mut j = DMatrix::zeros(n, NP);
        for c in 0..NP {
            let h = 1e-6 * p[c].abs().max(0.1);
            let (mut lo, mut hi) = (*p, *p);
            lo[c] -= h;
            hi[c] += h;
            let (ml, mh) = (TwoBeamModel::from_params(&lo), TwoBeamModel::from_params(&hi));
            for i in 0..n {
                j[(i, c)] = (mh.value(self.xs[i], self.ks[i]) - ml.value(self.xs[i], self.ks[i])) / (2.0 * h);
            }
        }
        j
    }
}

/// Levenberg–Marquardt least squares of [`TwoBeamModel`] against every map
/// point. Accepted steps never raise the cost; rejected steps raise the
/// damping. The fit stops when an accepted step changes the cost by less
/// than `rel_tol` relative, or when no step can lower it any further.
pub fn fit_two_beam(map: &WignerMap, init: &TwoBeamModel) -> Result<FitResult> {
    fit_two_beam_with(map, init, &FitOptions::default())
}

pub fn fit_two_beam_with(map: &WignerMap, init: &TwoBeamModel, opts: &FitOptions) -> Result<FitResult> {
    let prob = Problem::new(map);
    let n = prob.data.len();
    if n <= NP {
        return Err(Error::BadInit { reason: format!("{n} map points cannot constrain {NP} parameters") });
    }
    let zero_cost = pairwise_sum(&prob.data.iter().map(|v| v * v).collect::<Vec<_>>());
    let mut p = init.to_params();
    let mut cost = prob.cost(&p);
    if !(cost <= 10.0 * zero_cost) {
        return Err(Error::BadInit {
            reason: format!("initial cost {cost:.3e} exceeds 10x the zero-model cost {zero_cost:.3e}"),
        });
    }

    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = cost == 0.0;
    while !converged && iterations < opts.max_iterations {
        iterations += 1;
        let j = prob.jacobian(&p);
        let r = DVector::from_vec(prob.residuals(&TwoBeamModel::from_params(&p)));
        let jtj = j.transpose() * &j;
        let g = j.transpose() * r;
        let dmax = jtj.diagonal().max();
        loop {
            let mut a = jtj.clone();
            for d in 0..NP {
                a[(d, d)] += lambda * jtj[(d, d)].max(1e-12 * dmax);
            }
            let trial = a.cholesky().map(|ch| ch.solve(&g)).map(|step| {
                let mut q = p;
                for d in 0..NP {
                    q[d] += step[d];
                }
                q
            });
            if let Some(q) = trial {
                let c = prob.cost(&q);
                if c < cost {
                    let rel = (cost - c) / cost;
                    p = q;
                    cost = c;
                    lambda = (lambda / 3.0).max(1e-12);
                    converged = rel < opts.rel_tol || cost == 0.0;
                    break;
                }
            }
            lambda *= 4.0;
            if lambda > 1e16 {
                // stationary: no step lowers the cost
                converged = true;
                break;
            }
        }
    }

    let mut model = TwoBeamModel::from_params(&p);
    let stderr = standard_errors(&prob.jacobian(&p), cost, n);
    model.psi = wrap_phase(model.psi);
    let result = FitResult { model, stderr, rms_residual: (cost / n as f64).sqrt(), cost, iterations, points: n };
    if converged {
        Ok(result)
    } else {
        Err(Error::NoConvergence { iterations, best: Box::new(result) })
    }
}

fn wrap_phase(psi: f64) -> f64 {
    let w = psi.rem_euclid(2.0 * PI);
    if w > PI { w - 2.0 * PI } else { w }
}

/// `sqrt(diag(s² (JᵀJ)⁻¹))` with `s² = cost / (n − p)`.
fn standard_errors(j: &DMatrix<f64>, cost: f64, n: usize) -> [f64; NP] {
    let s2 = cost / (n - NP) as f64;
    let jtj = j.transpose() * j;
    let dmax = jtj.diagonal().max();
    let live: Vec<usize> = (0..NP).filter(|&d| jtj[(d, d)] > 1e-14 * dmax).collect();
    let mut out = [f64::INFINITY; NP];
    // invert on the unit-diagonal scaling for conditioning
    let scale: Vec<f64> = live.iter().map(|&d| jtj[(d, d)].sqrt()).collect();
    let m = live.len();
    let reduced = DMatrix::from_fn(m, m, |a, b| jtj[(live[a], live[b])] / (scale[a] * scale[b]));
    let inv = match reduced.clone().cholesky() {
        Some(ch) => ch.inverse(),
        None => match reduced.pseudo_inverse(1e-14) {
            Ok(p) => p,
            Err(_) => return out,
        },
    };
    for (a, &d) in live.iter().enumerate() {
        out[d] = (s2 * inv[(a, a)]).max(0.0).sqrt() / scale[a];
    }
    out
}

/// Starting point for [`fit_two_beam`] read off the map.
///
/// The two largest local maxima of the k marginal `∫ W dx` fix the lobe
/// frequencies (the cross term oscillates along x and integrates away). Each
/// lobe's x profile at its peak k gives its center, width and amplitude.
/// `mu` and `psi` then follow from a linear least-squares fit of the cross
/// term with the lobes held fixed.
pub fn initial_guess(map: &WignerMap) -> Result<TwoBeamModel> {
    let (xs, ks) = (map.x_axis(), map.k_axis());
    if xs.len() < 3 || ks.len() < 3 {
        return Err(Error::BadInit { reason: "map needs at least 3 samples per axis".into() });
    }
    let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let marginal: Vec<f64> = (0..map.nk()).map(|ik| map.column(ik).iter().sum::<f64>() * dx).collect();
    let mut peaks: Vec<usize> = (1..marginal.len() - 1)
        .filter(|&i| marginal[i] > 0.0 && marginal[i] >= marginal[i - 1] && marginal[i] > marginal[i + 1])
        .collect();
    peaks.sort_by(|&a, &b| marginal[b].total_cmp(&marginal[a]));
    if peaks.len() < 2 {
        return Err(Error::BadInit { reason: format!("found {} lobe(s) in the k marginal, need two", peaks.len()) });
    }

    let lobe = |ik: usize| {
        let col = map.column(ik);
        let w: Vec<f64> = col.iter().map(|v| v.max(0.0)).collect();
        let total: f64 = w.iter().sum();
        let mean = xs.iter().zip(&w).map(|(x, w)| x * w).sum::<f64>() / total;
        let var = xs.iter().zip(&w).map(|(x, w)| (x - mean).powi(2) * w).sum::<f64>() / total;
        let peak = col.iter().fold(0.0f64, |m, &v| m.max(v));
        (mean, (2.0 * var).sqrt(), PI * peak, -ks[ik])
    };
    let (x1, a1, amp1, k1) = lobe(peaks[0]);
    let (x2, a2, amp2, k2) = lobe(peaks[1]);
    let mut m = TwoBeamModel { amp1, amp2, x1, x2, k1, k2, a: 0.5 * (a1 + a2), c: 0.0, mu: 0.0, psi: 0.0, offset: 0.0 };
    if !(m.a > 0.0) {
        return Err(Error::BadInit { reason: "could not estimate a lobe width".into() });
    }

    // cross term = A f_c + B f_s with A = mu cos psi, B = mu sin psi
    let unit = TwoBeamModel { mu: 1.0, ..m };
    let quarter = TwoBeamModel { mu: 1.0, psi: 0.5 * PI, ..m };
    let (mut scc, mut scs, mut sss, mut rc, mut rs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (ix, &x) in xs.iter().enumerate() {
        for (ik, &k) in ks.iter().enumerate() {
            let base = m.value(x, k);
            let fc = unit.value(x, k) - base;
            let fs = quarter.value(x, k) - base;
            let r = map.get(ix, ik) - base;
            scc += fc * fc;
            scs += fc * fs;
            sss += fs * fs;
            rc += fc * r;
            rs += fs * r;
        }
    }
    let det = scc * sss - scs * scs;
    if det > 0.0 {
        let a = (rc * sss - rs * scs) / det;
        let b = (rs * scc - rc * scs) / det;
        m.mu = a.hypot(b);
        m.psi = b.atan2(a);
    }
    Ok(m)
}
