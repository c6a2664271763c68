//! Deterministic random corpora for inequality sweeps.
//!
//! Every corpus is a pure function of its seed: the same parameters give
//! the same vectors on every platform, so sweep results are reproducible
//! byte for byte.

use std::sync::Arc;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::spectrum::{SpectralVector, SpectrumModel};

/// Parameters of a random corpus.
#[derive(Debug, Clone)]
pub struct CorpusParams {
    /// Number of vectors.
    pub count: usize,
    /// Modes per vector.
    pub modes: usize,
    /// Eigenvalues are drawn uniformly from `(0, eigenvalue_max]`.
    pub eigenvalue_max: f64,
    /// Seed of the ChaCha8 generator.
    pub seed: u64,
}

/// Draw `count` vectors, each over its own freshly drawn strictly
/// increasing spectrum in `(0, eigenvalue_max]`, with independent complex
/// standard-normal coefficients.
pub fn random_vectors(params: &CorpusParams) -> Result<Vec<SpectralVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out = Vec::with_capacity(params.count);
    for _ in 0..params.count {
        let mut lams: Vec<f64> = (0..params.modes)
            .map(|_| (1.0 - rng.random::<f64>()) * params.eigenvalue_max)
            .collect();
        lams.sort_by(f64::total_cmp);
        for i in 1..lams.len() {
            if lams[i] <= lams[i - 1] {
                lams[i] = lams[i - 1].next_up();
            }
        }
        let spectrum = Arc::new(SpectrumModel::new(lams)?);
        let coeffs: Vec<Complex64> = (0..params.modes)
            .map(|_| {
                Complex64::new(
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                )
            })
            .collect();
        out.push(SpectralVector::new(spectrum, coeffs)?);
    }
    Ok(out)
}
