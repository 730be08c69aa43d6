use std::fs;

use slocc_core::measurement::derive_seed;
use slocc_core::{random_canonical, CanonicalParams, NamedState, StateDocument, StateInput};

use crate::CliError;

/// Seed stream for generating random states; measurement streams use 1.
pub const GENERATION_STREAM: u64 = 0;
pub const MEASUREMENT_STREAM: u64 = 1;

/// Parses `--state`: inline JSON when it starts with `{` or `[`, otherwise a
/// file path. Accepts one document or an array of them.
pub fn load_documents(arg: &str) -> Result<Vec<StateDocument>, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_owned()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Runtime(format!("reading {arg}: {e}")))?
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("state document: {e}")))?;
    let items = match value {
        serde_json::Value::Array(items) => items,
        single => vec![single],
    };
    items
        .into_iter()
        .enumerate()
        .map(|(k, item)| {
            let doc: StateDocument = serde_json::from_value(item)
                .map_err(|e| CliError::Validation(format!("state document [{k}]: {e}")))?;
            doc.to_state().map_err(|e| CliError::Validation(format!("state document [{k}]: {e}")))?;
            Ok(doc)
        })
        .collect()
}

pub fn parse_named(arg: &str) -> Result<Vec<NamedState>, CliError> {
    if arg.eq_ignore_ascii_case("all") {
        return Ok(NamedState::ALL.to_vec());
    }
    arg.split(',')
        .map(|name| name.trim().parse::<NamedState>().map_err(|e| CliError::Validation(e.to_string())))
        .collect()
}

/// `a0,a1,a2,a3,a4,theta`.
pub fn parse_canonical(arg: &str) -> Result<CanonicalParams, CliError> {
    let parts = arg
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Validation(format!("canonical: {e}")))?;
    let [a0, a1, a2, a3, a4, theta] = parts[..] else {
        return Err(CliError::Validation(format!(
            "canonical: expected 6 comma-separated numbers a0,a1,a2,a3,a4,theta, got {}",
            parts.len()
        )));
    };
    let p = CanonicalParams { a0, a1, a2, a3, a4, theta };
    p.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(p)
}

pub fn generated_params(count: usize, seed: u64) -> Vec<CanonicalParams> {
    let base = derive_seed(seed, GENERATION_STREAM);
    (0..count as u64).map(|k| random_canonical(derive_seed(base, k))).collect()
}

pub fn generated_inputs(count: usize, seed: u64) -> Vec<StateInput> {
    generated_params(count, seed)
        .into_iter()
        .enumerate()
        .map(|(k, p)| StateInput { name: format!("R{}", k + 1), document: StateDocument::Canonical(p), generated: true })
        .collect()
}

pub fn named_inputs(states: &[NamedState]) -> Vec<StateInput> {
    states
        .iter()
        .map(|&s| StateInput { name: s.to_string(), document: StateDocument::Named(s), generated: false })
        .collect()
}

pub fn document_inputs(docs: Vec<StateDocument>) -> Vec<StateInput> {
    docs.into_iter()
        .enumerate()
        .map(|(k, document)| {
            let name = match &document {
                StateDocument::Named(n) => n.to_string(),
                _ => format!("S{}", k + 1),
            };
            StateInput { name, document, generated: false }
        })
        .collect()
}

/// Measurement seed of the state at `index`.
pub fn state_seed(seed: u64, index: usize) -> u64 {
    derive_seed(derive_seed(seed, MEASUREMENT_STREAM), index as u64)
}
