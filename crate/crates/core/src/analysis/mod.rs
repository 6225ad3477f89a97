//! Closed-form two-beam Wigner model, least-squares extraction of the degree
//! of coherence, and fringe-frequency diagnostics.

mod fit;
mod fringe;
mod model;

pub use fit::{fit_two_beam, fit_two_beam_with, initial_guess, FitOptions, FitResult};
pub use fringe::{fringe_frequency, FringeEstimate};
pub use model::{model_wigner, TwoBeamModel, PARAM_NAMES};

/// Pairwise (cascade) summation, so totals do not depend on chunking.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}
