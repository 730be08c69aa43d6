//! Stochastic readout: projective shot sampling of the mapped single-qubit
//! `σz` measurement, depolarizing preparation noise, additive readout noise,
//! Pauli-basis tomography and repeated-run statistics.
//!
//! Every random draw comes from a ChaCha stream keyed by `(seed, stream id)`,
//! so results do not depend on evaluation order or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix};
use crate::mapping::{prob_zero, recipe};
use crate::pauli::{apply_dm, expectation_dm, pauli_matrix, PauliString};
use crate::states::{DensityMatrix, StateVector};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Weight of the maximally mixed state mixed into the prepared state.
    pub depolarizing_p: f64,
    /// Standard deviation of Gaussian noise added to each estimate.
    pub readout_sigma: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel { depolarizing_p: 0.0, readout_sigma: 0.0 };

    pub fn depolarizing(p: f64) -> Self {
        NoiseModel { depolarizing_p: p, readout_sigma: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.depolarizing_p) {
            return Err(Error::validation("noise.depolarizing_p", "must lie in [0, 1]"));
        }
        if !(self.readout_sigma >= 0.0 && self.readout_sigma.is_finite()) {
            return Err(Error::validation("noise.readout_sigma", "must be finite and nonnegative"));
        }
        Ok(())
    }

    /// `(1 - p) rho + p I/8`.
    pub fn depolarize(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.validate()?;
        Ok(rho.mix(&DensityMatrix::maximally_mixed(), self.depolarizing_p))
    }
}

pub fn apply_noise(psi: &StateVector, nm: &NoiseModel) -> Result<DensityMatrix> {
    nm.depolarize(&psi.to_density())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub shots: u64,
}

/// Independent RNG for stream `stream` under master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed for sub-task `id` of a run seeded with `seed` (splitmix64 finalizer).
pub fn derive_seed(seed: u64, id: u64) -> u64 {
    let mut z = seed ^ id.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sample_with(rho: &DensityMatrix, index: usize, shots: u64, nm: &NoiseModel, rng: &mut ChaCha8Rng) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::validation("shots", "must be at least 1"));
    }
    let r = recipe(index)?;
    let prepared = nm.depolarize(rho)?;
    let mapped = apply_dm(&r.circuit, &prepared);
    let p0 = prob_zero(&mapped, r.measured).clamp(0.0, 1.0);
    let zeros = Binomial::new(shots, p0)
        .map_err(|e| Error::validation("probability", e.to_string()))?
        .sample(rng);
    let z_mean = 2.0 * zeros as f64 / shots as f64 - 1.0;
    let shot_var = (1.0 - z_mean * z_mean).max(0.0) / shots as f64;
    let mut mean = f64::from(r.sign) * z_mean;
    if nm.readout_sigma > 0.0 {
        let noise = Normal::new(0.0, nm.readout_sigma).map_err(|e| Error::validation("noise.readout_sigma", e.to_string()))?;
        mean += noise.sample(rng);
    }
    Ok(ShotEstimate {
        mean,
        std_error: (shot_var + nm.readout_sigma * nm.readout_sigma).sqrt(),
        shots,
    })
}

/// Estimates `<B_index>` from `shots` projective measurements of the mapped
/// qubit. The noise model's depolarizing weight is applied to `rho` before
/// mapping, so pass the ideal state.
pub fn sample_expectation(rho: &DensityMatrix, index: usize, shots: u64, seed: u64, nm: &NoiseModel) -> Result<ShotEstimate> {
    sample_with(rho, index, shots, nm, &mut stream_rng(seed, index as u64))
}

/// Supplies `<B_i>` for `i` in `1..=63`.
pub trait ExpectationSource: Sync {
    fn expectation(&self, index: usize) -> Result<f64>;
}

/// Noise-free `Tr(B_i rho)`.
pub struct ExactSource<'a>(pub &'a DensityMatrix);

impl ExpectationSource for ExactSource<'_> {
    fn expectation(&self, index: usize) -> Result<f64> {
        Ok(expectation_dm(self.0, &PauliString::from_index(index)?))
    }
}

/// Shot-sampled expectations, one independent RNG stream per Pauli setting.
pub struct SampledSource<'a> {
    pub rho: &'a DensityMatrix,
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseModel,
}

impl ExpectationSource for SampledSource<'_> {
    fn expectation(&self, index: usize) -> Result<f64> {
        Ok(sample_expectation(self.rho, index, self.shots, self.seed, &self.noise)?.mean)
    }
}

/// Clips negative eigenvalues and renormalizes the trace.
pub fn nearest_psd(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let mut eig = herm_eig(&m.hermitian_part())?;
    for v in &mut eig.values {
        *v = v.max(0.0);
    }
    let total: f64 = eig.values.iter().sum();
    if total <= 0.0 {
        return Ok(DensityMatrix::maximally_mixed());
    }
    Ok(DensityMatrix::from_unchecked(eig.reconstruct_with(|v| v / total)))
}

/// Linear-inversion tomography `ρ̂ = (I + Σ_i <B_i> B_i) / 8`, projected onto
/// the nearest valid state.
pub fn tomography(source: &dyn ExpectationSource) -> Result<DensityMatrix> {
    let expectations = (1..64)
        .into_par_iter()
        .map(|i| source.expectation(i))
        .collect::<Result<Vec<f64>>>()?;
    let mut acc = ComplexMatrix::identity(8);
    for (k, e) in expectations.iter().enumerate() {
        let b = pauli_matrix(&PauliString::from_index(k + 1)?);
        acc = &acc + &b.scale_real(*e);
    }
    nearest_psd(&acc.scale_real(1.0 / 8.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

/// Sample mean and (n-1)-normalized standard deviation.
pub fn mean_std(values: &[f64]) -> MeanStd {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    MeanStd { mean, std }
}

/// Runs `task` with `repetitions` derived seeds and summarizes each returned
/// quantity.
pub fn repeated_runs<F>(task: F, repetitions: usize, seed: u64) -> Result<Vec<MeanStd>>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    if repetitions < 2 {
        return Err(Error::validation("repetitions", "must be at least 2"));
    }
    let runs = (0..repetitions as u64)
        .into_par_iter()
        .map(|rep| task(derive_seed(seed, rep)))
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let width = runs[0].len();
    if runs.iter().any(|r| r.len() != width) {
        return Err(Error::Dimension("repeated runs returned differing lengths".into()));
    }
    Ok((0..width)
        .map(|k| mean_std(&runs.iter().map(|r| r[k]).collect::<Vec<_>>()))
        .collect())
}
