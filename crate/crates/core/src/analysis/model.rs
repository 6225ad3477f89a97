use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Wigner function of two Gaussian beams with a common width and chirp and a
/// partial mutual coherence `mu`.
///
/// Beam `i` is the unit-power field
///
/// ```text
/// g_i(x) = (π a²)^(−1/4) exp(−(x − x_i)²/(2a²) + i k_i (x − x_i) + i c (x − x_i)²)
/// ```
///
/// (the same parametrization as [`crate::field::make_gaussian`]), and the
/// cross-spectral density is
///
/// ```text
/// amp1 g1*g1 + amp2 g2*g2 + mu √(amp1 amp2) (e^{iψ} g1*(u) g2(v) + c.c.)
/// ```
///
/// Inserting it in the Wigner integral and completing the square gives
///
/// ```text
/// W = amp1 G(x − x1, k + k1) + amp2 G(x − x2, k + k2)
///   + 2 mu √(amp1 amp2) G(x − x_m, k + k_m)
///       · cos((k2 − k1)(x − x_m) + (x2 − x1) k + ψ)
///   + offset
///
/// G(X, K) = (1/π) exp(−X²/a² − a² (K + 2cX)²)
/// ```
///
/// with `x_m = (x1 + x2)/2` and `k_m = (k1 + k2)/2`. The carrier `k_i` puts
/// its lobe at `k = −k_i − 2c(x − x_i)`, and the cross term sits halfway
/// between the lobes with fringe frequency `|k1 − k2|` along x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBeamModel {
    pub amp1: f64,
    pub amp2: f64,
    pub x1: f64,
    pub x2: f64,
    pub k1: f64,
    pub k2: f64,
    pub a: f64,
    pub c: f64,
    pub mu: f64,
    pub psi: f64,
    pub offset: f64,
}

pub const PARAM_NAMES: [&str; 11] = ["amp1", "amp2", "x1", "x2", "k1", "k2", "a", "c", "mu", "psi", "offset"];

fn lobe(x: f64, k: f64, a: f64, c: f64) -> f64 {
    let s = k + 2.0 * c * x;
    (-(x * x) / (a * a) - a * a * s * s).exp() / PI
}

impl TwoBeamModel {
    /// Two equal beams of `wedge_beam(k1, k2, a, c, eps3 = 0)`.
    pub fn wedge(k1: f64, k2: f64, a: f64, c: f64) -> Self {
        Self { amp1: 0.5, amp2: 0.5, x1: 0.0, x2: 0.0, k1, k2, a, c, mu: 1.0, psi: 0.0, offset: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.to_params();
        if let Some(i) = p.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(PARAM_NAMES[i], "must be finite"));
        }
        if self.amp1 < 0.0 || self.amp2 < 0.0 {
            return Err(Error::invalid("amp", "beam amplitudes must be nonnegative"));
        }
        if self.mu.abs() > 1.0 {
            return Err(Error::invalid("mu", format!("degree of coherence must lie in [-1, 1], got {}", self.mu)));
        }
        if !(self.a > 0.0) {
            return Err(Error::invalid("a", format!("width must be positive, got {}", self.a)));
        }
        Ok(())
    }

    /// Closed-form value without validation; fits pass through `|mu| > 1`.
    pub fn value(&self, x: f64, k: f64) -> f64 {
        let (a, c) = (self.a, self.c);
        let xm = 0.5 * (self.x1 + self.x2);
        let km = 0.5 * (self.k1 + self.k2);
        let cross = 2.0 * self.mu * (self.amp1 * self.amp2).sqrt()
            * lobe(x - xm, k + km, a, c)
            * ((self.k2 - self.k1) * (x - xm) + (self.x2 - self.x1) * k + self.psi).cos();
        self.amp1 * lobe(x - self.x1, k + self.k1, a, c) + self.amp2 * lobe(x - self.x2, k + self.k2, a, c) + cross + self.offset
    }

    pub fn to_params(&self) -> [f64; 11] {
        [self.amp1, self.amp2, self.x1, self.x2, self.k1, self.k2, self.a, self.c, self.mu, self.psi, self.offset]
    }

    pub fn from_params(p: &[f64; 11]) -> Self {
        Self {
            amp1: p[0],
            amp2: p[1],
            x1: p[2],
            x2: p[3],
            k1: p[4],
            k2: p[5],
            a: p[6],
            c: p[7],
            mu: p[8],
            psi: p[9],
            offset: p[10],
        }
    }
}

pub fn model_wigner(model: &TwoBeamModel, x: f64, k: f64) -> Result<f64> {
    model.validate()?;
    Ok(model.value(x, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incoherent_midpoint_vanishes() {
        let m = TwoBeamModel { mu: 0.0, ..TwoBeamModel::wedge(5.0, -5.0, 1.0, 0.0) };
        assert!(m.value(0.0, 0.0) < 1e-6);
        let lobes = m.value(0.3, -5.0);
        let expect = 0.5 * (-0.09f64).exp() / PI;
        assert!((lobes - expect).abs() < 1e-6);
    }

    #[test]
    fn cross_term_is_linear_in_mu() {
        let base = TwoBeamModel::wedge(2.0, -1.0, 0.8, 0.1);
        let at = |mu: f64| TwoBeamModel { mu, ..base }.value(0.1, -0.5) - TwoBeamModel { mu: 0.0, ..base }.value(0.1, -0.5);
        let one = at(1.0);
        for mu in [-0.5, 0.25, 0.75] {
            assert!((at(mu) - mu * one).abs() < 1e-9);
        }
    }

    #[test]
    fn validation() {
        let m = TwoBeamModel::wedge(3.0, -3.0, 1.0, 0.0);
        assert!(model_wigner(&m, 0.0, 0.0).is_ok());
        assert!(model_wigner(&TwoBeamModel { a: -1.0, ..m }, 0.0, 0.0).is_err());
        assert!(model_wigner(&TwoBeamModel { mu: 1.5, ..m }, 0.0, 0.0).is_err());
        assert!(model_wigner(&TwoBeamModel { amp2: -0.1, ..m }, 0.0, 0.0).is_err());
        assert_eq!(TwoBeamModel::from_params(&m.to_params()), m);
    }
}
