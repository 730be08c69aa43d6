//! Decision rules mapping `(<O>, <O1>, <O2>, <O3>)` to an SLOCC class.
//!
//! A value counts as nonzero when its magnitude exceeds `epsilon`. Priority:
//! a nonzero `<O>` means GHZ whatever the others are; all three `<Oj>`
//! nonzero means W; exactly one nonzero `<O3>`, `<O2>`, `<O1>` means BS1, BS2,
//! BS3; none means separable. Two nonzero `<Oj>` match no class and give
//! `Inconclusive`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mapping::{protocol_expectations, PROTOCOL_INDICES};
use crate::measurement::{derive_seed, sample_expectation, NoiseModel};
use crate::states::StateVector;

pub const DEFAULT_EPSILON: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SloccClass {
    #[serde(rename = "GHZ")]
    Ghz,
    W,
    #[serde(rename = "BS1")]
    Bs1,
    #[serde(rename = "BS2")]
    Bs2,
    #[serde(rename = "BS3")]
    Bs3,
    Separable,
    Inconclusive,
}

impl SloccClass {
    pub fn label(self) -> &'static str {
        match self {
            SloccClass::Ghz => "GHZ",
            SloccClass::W => "W",
            SloccClass::Bs1 => "BS1",
            SloccClass::Bs2 => "BS2",
            SloccClass::Bs3 => "BS3",
            SloccClass::Separable => "Separable",
            SloccClass::Inconclusive => "Inconclusive",
        }
    }
}

impl fmt::Display for SloccClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Where the four values came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum MeasurementConfig {
    Exact,
    Sampled { shots: u64, seed: u64, noise: NoiseModel },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub values: [f64; 4],
    pub epsilon: f64,
    pub nonzero_mask: [bool; 4],
    pub label: SloccClass,
    /// Standard errors of the values; zero for exact evaluation.
    pub std_errors: [f64; 4],
    pub provenance: MeasurementConfig,
}

/// Applies the decision rules to a nonzero pattern `[O, O1, O2, O3]`.
pub fn label_for_mask(mask: [bool; 4]) -> SloccClass {
    match mask {
        [true, ..] => SloccClass::Ghz,
        [false, true, true, true] => SloccClass::W,
        [false, false, false, true] => SloccClass::Bs1,
        [false, false, true, false] => SloccClass::Bs2,
        [false, true, false, false] => SloccClass::Bs3,
        [false, false, false, false] => SloccClass::Separable,
        [false, ..] => SloccClass::Inconclusive,
    }
}

pub fn classify(values: [f64; 4], epsilon: f64) -> Result<ClassificationResult> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::validation("epsilon", "must be a positive finite number"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("expectation value {v}")));
    }
    let nonzero_mask = values.map(|v| v.abs() > epsilon);
    Ok(ClassificationResult {
        values,
        epsilon,
        nonzero_mask,
        label: label_for_mask(nonzero_mask),
        std_errors: [0.0; 4],
        provenance: MeasurementConfig::Exact,
    })
}

/// Measures the four observables on `psi` (exactly or by shot sampling) and
/// classifies the result.
pub fn classify_state(psi: &StateVector, epsilon: f64, config: &MeasurementConfig) -> Result<ClassificationResult> {
    let (values, std_errors) = match *config {
        MeasurementConfig::Exact => (protocol_expectations(psi), [0.0; 4]),
        MeasurementConfig::Sampled { shots, seed, noise } => {
            let rho = psi.to_density();
            let mut values = [0.0; 4];
            let mut errors = [0.0; 4];
            for (k, i) in PROTOCOL_INDICES.into_iter().enumerate() {
                let e = sample_expectation(&rho, i, shots, derive_seed(seed, k as u64), &noise)?;
                values[k] = e.mean;
                errors[k] = e.std_error;
            }
            (values, errors)
        }
    };
    let mut result = classify(values, epsilon)?;
    result.std_errors = std_errors;
    result.provenance = *config;
    Ok(result)
}
