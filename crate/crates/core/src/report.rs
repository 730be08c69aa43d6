//! Per-state records combining protocol expectations, classification,
//! entanglement measures and tomography, in the shape of the results and
//! negativity tables.

use serde::{Deserialize, Serialize};

use crate::classifier::{classify, classify_state, MeasurementConfig, SloccClass, DEFAULT_EPSILON};
use crate::entanglement::{fidelity, negativity_min, negativity_min_dm, three_tangle};
use crate::error::{Error, Result};
use crate::mapping::{protocol_expectations, protocol_expectations_dm, PROTOCOL_INDICES};
use crate::measurement::{derive_seed, mean_std, sample_expectation, tomography, ExactSource, MeanStd, NoiseModel, SampledSource};
use crate::states::{StateDocument, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    /// `None` evaluates expectations exactly.
    pub shots: Option<u64>,
    pub noise: NoiseModel,
    pub epsilon: f64,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            shots: None,
            noise: NoiseModel::NONE,
            epsilon: DEFAULT_EPSILON,
            repetitions: 1,
            seed: 0,
        }
    }
}

impl RunSettings {
    pub fn validate(&self) -> Result<()> {
        self.noise.validate()?;
        if self.shots == Some(0) {
            return Err(Error::validation("shots", "must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::validation("reps", "must be at least 1"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::validation("epsilon", "must be positive"));
        }
        Ok(())
    }

    pub fn measurement(&self, seed: u64) -> MeasurementConfig {
        match self.shots {
            None => MeasurementConfig::Exact,
            Some(shots) => MeasurementConfig::Sampled { shots, seed, noise: self.noise },
        }
    }
}

/// A named input state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateInput {
    pub name: String,
    pub document: StateDocument,
    pub generated: bool,
}

impl StateInput {
    pub fn state(&self) -> Result<StateVector> {
        self.document.to_state()
    }
}

/// Runs `task` once per repetition with derived seeds and summarizes each
/// output slot; a single repetition reports zero spread.
fn summarize<F>(repetitions: usize, seed: u64, task: F) -> Result<Vec<MeanStd>>
where
    F: Fn(u64) -> Result<Vec<f64>>,
{
    let runs = (0..repetitions as u64)
        .map(|rep| task(derive_seed(seed, rep)))
        .collect::<Result<Vec<_>>>()?;
    let width = runs.first().map_or(0, Vec::len);
    Ok((0..width)
        .map(|k| mean_std(&runs.iter().map(|r| r[k]).collect::<Vec<_>>()))
        .collect())
}

/// Directly measured protocol values: exact on the noisy state, or shot
/// sampled.
fn direct_values(psi: &StateVector, settings: &RunSettings, seed: u64) -> Result<Vec<f64>> {
    let rho = psi.to_density();
    match settings.shots {
        None => Ok(protocol_expectations_dm(&settings.noise.depolarize(&rho)?).to_vec()),
        Some(shots) => PROTOCOL_INDICES
            .iter()
            .enumerate()
            .map(|(k, &i)| Ok(sample_expectation(&rho, i, shots, derive_seed(seed, k as u64), &settings.noise)?.mean))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyRecord {
    pub state: String,
    pub document: StateDocument,
    pub generated: bool,
    pub values: [f64; 4],
    /// Spread over repetitions, or the shot-noise standard error of a single run.
    pub std: [f64; 4],
    pub nonzero_mask: [bool; 4],
    pub label: SloccClass,
    pub epsilon: f64,
    pub tau: f64,
    pub negativity_min: f64,
    pub prep_fidelity: f64,
    pub provenance: MeasurementConfig,
    pub repetitions: usize,
}

pub fn classify_record(input: &StateInput, settings: &RunSettings, seed: u64) -> Result<ClassifyRecord> {
    settings.validate()?;
    let psi = input.state()?;
    let (values, std) = if settings.repetitions == 1 {
        let single = classify_state(&psi, settings.epsilon, &settings.measurement(seed))?;
        (single.values, single.std_errors)
    } else if settings.shots.is_none() {
        (protocol_expectations(&psi), [0.0; 4])
    } else {
        let stats = summarize(settings.repetitions, seed, |s| direct_values(&psi, settings, s))?;
        (
            [stats[0].mean, stats[1].mean, stats[2].mean, stats[3].mean],
            [stats[0].std, stats[1].std, stats[2].std, stats[3].std],
        )
    };
    let class = classify(values, settings.epsilon)?;
    let ideal = psi.to_density();
    let prepared = settings.noise.depolarize(&ideal)?;
    Ok(ClassifyRecord {
        state: input.name.clone(),
        document: input.document.clone(),
        generated: input.generated,
        values,
        std,
        nonzero_mask: class.nonzero_mask,
        label: class.label,
        epsilon: settings.epsilon,
        tau: three_tangle(&psi)?.tau,
        negativity_min: negativity_min(&psi)?,
        prep_fidelity: fidelity(&ideal, &prepared)?,
        provenance: settings.measurement(seed),
        repetitions: settings.repetitions,
    })
}

/// Theory, direct and tomography values of one observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableColumns {
    pub theory: f64,
    pub direct: MeanStd,
    pub qst: MeanStd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultsRow {
    pub state: String,
    pub generated: bool,
    pub fidelity: MeanStd,
    pub observables: [ObservableColumns; 4],
    pub negativity_theory: f64,
    pub negativity_measured: MeanStd,
    pub label_theory: SloccClass,
    pub label_direct: SloccClass,
}

/// Theory from exact expectations; "direct" from the mapped measurement under
/// the configured noise; "QST" from the four observables evaluated on the
/// tomographically reconstructed state.
pub fn results_row(input: &StateInput, settings: &RunSettings, seed: u64) -> Result<ResultsRow> {
    settings.validate()?;
    let psi = input.state()?;
    let ideal = psi.to_density();
    let theory = protocol_expectations(&psi);

    // Per repetition: 4 direct values, 4 QST values, fidelity, negativity.
    let stats = summarize(settings.repetitions, seed, |rep_seed| {
        let mut out = direct_values(&psi, settings, derive_seed(rep_seed, 0))?;
        let reconstructed = match settings.shots {
            None => tomography(&ExactSource(&settings.noise.depolarize(&ideal)?))?,
            Some(shots) => tomography(&SampledSource {
                rho: &ideal,
                shots,
                seed: derive_seed(rep_seed, 1),
                noise: settings.noise,
            })?,
        };
        out.extend(protocol_expectations_dm(&reconstructed));
        out.push(fidelity(&reconstructed, &ideal)?);
        out.push(negativity_min_dm(&reconstructed)?);
        Ok(out)
    })?;

    let observables = std::array::from_fn(|k| ObservableColumns {
        theory: theory[k],
        direct: stats[k],
        qst: stats[4 + k],
    });
    let direct_means = [stats[0].mean, stats[1].mean, stats[2].mean, stats[3].mean];
    Ok(ResultsRow {
        state: input.name.clone(),
        generated: input.generated,
        fidelity: stats[8],
        observables,
        negativity_theory: negativity_min(&psi)?,
        negativity_measured: stats[9],
        label_theory: classify(theory, settings.epsilon)?.label,
        label_direct: classify(direct_means, settings.epsilon)?.label,
    })
}
