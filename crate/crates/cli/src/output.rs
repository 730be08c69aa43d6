use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use slocc_core::mapping::VerificationReport;
use slocc_core::measurement::MeanStd;
use slocc_core::{ClassifyRecord, MeasurementConfig, ResultsRow, StateDocument};

use crate::CliError;

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let runtime = |e: csv::Error| CliError::Runtime(e.to_string());
    w.write_record(header).map_err(runtime)?;
    for row in rows {
        w.write_record(&row).map_err(runtime)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
}

fn f(x: f64) -> String {
    format!("{x:.6}")
}

fn origin(generated: bool) -> String {
    if generated { "generated" } else { "named" }.to_owned()
}

const OBSERVABLES: [&str; 4] = ["O", "O1", "O2", "O3"];

fn provenance_fields(p: &MeasurementConfig) -> [String; 5] {
    match *p {
        MeasurementConfig::Exact => ["exact".into(), String::new(), String::new(), String::new(), String::new()],
        MeasurementConfig::Sampled { shots, seed, noise } => [
            "sampled".into(),
            shots.to_string(),
            seed.to_string(),
            noise.depolarizing_p.to_string(),
            noise.readout_sigma.to_string(),
        ],
    }
}

pub fn classify_csv(records: &[ClassifyRecord]) -> Result<String, CliError> {
    let mut header = vec!["state", "origin", "label"];
    header.extend(OBSERVABLES);
    header.extend(["O_std", "O1_std", "O2_std", "O3_std"]);
    header.extend(["tau", "negativity_min", "prep_fidelity", "epsilon", "repetitions"]);
    header.extend(["mode", "shots", "seed", "depolarizing_p", "readout_sigma"]);
    let rows = records.iter().map(|r| {
        let mut row = vec![r.state.clone(), origin(r.generated), r.label.to_string()];
        row.extend(r.values.iter().map(|&v| f(v)));
        row.extend(r.std.iter().map(|&v| f(v)));
        row.extend([f(r.tau), f(r.negativity_min), f(r.prep_fidelity), r.epsilon.to_string(), r.repetitions.to_string()]);
        row.extend(provenance_fields(&r.provenance));
        row
    });
    csv_text(&header, rows)
}

pub fn verification_csv(report: &VerificationReport) -> Result<String, CliError> {
    let header = [
        "index",
        "pauli",
        "circuit",
        "measured_qubit",
        "sign",
        "max_deviation",
        "provenance",
        "published_circuit",
        "published_check",
    ];
    let rows = report.rows.iter().map(|r| {
        vec![
            r.index.to_string(),
            r.pauli.to_string(),
            r.circuit.to_string(),
            r.measured.to_string(),
            r.sign.to_string(),
            format!("{:.1e}", r.max_deviation),
            serde_json::to_value(r.provenance).map(|v| v.as_str().unwrap_or_default().to_owned()).unwrap_or_default(),
            r.published_circuit.to_string(),
            r.published_check.describe(),
        ]
    });
    csv_text(&header, rows)
}

pub fn results_csv(rows: &[ResultsRow]) -> Result<String, CliError> {
    let mut header: Vec<String> = ["state", "origin", "fidelity", "fidelity_std"].map(String::from).to_vec();
    for obs in OBSERVABLES {
        for col in ["the", "dir", "dir_std", "qst", "qst_std"] {
            header.push(format!("{obs}_{col}"));
        }
    }
    header.extend(["label_the", "label_dir"].map(String::from));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let body = rows.iter().map(|r| {
        let mut row = vec![r.state.clone(), origin(r.generated), f(r.fidelity.mean), f(r.fidelity.std)];
        for c in &r.observables {
            row.extend([f(c.theory), f(c.direct.mean), f(c.direct.std), f(c.qst.mean), f(c.qst.std)]);
        }
        row.extend([r.label_theory.to_string(), r.label_direct.to_string()]);
        row
    });
    csv_text(&header_refs, body)
}

pub fn negativity_csv(rows: &[ResultsRow]) -> Result<String, CliError> {
    let header = ["state", "origin", "theoretical", "measured", "measured_std"];
    let body = rows.iter().map(|r| {
        vec![
            r.state.clone(),
            origin(r.generated),
            f(r.negativity_theory),
            f(r.negativity_measured.mean),
            f(r.negativity_measured.std),
        ]
    });
    csv_text(&header, body)
}

pub fn documents_csv(names: &[String], docs: &[StateDocument]) -> Result<String, CliError> {
    let header = ["state", "a0", "a1", "a2", "a3", "a4", "theta"];
    let body = names.iter().zip(docs).filter_map(|(name, d)| match d {
        StateDocument::Canonical(p) => Some(vec![
            name.clone(),
            p.a0.to_string(),
            p.a1.to_string(),
            p.a2.to_string(),
            p.a3.to_string(),
            p.a4.to_string(),
            p.theta.to_string(),
        ]),
        _ => None,
    });
    csv_text(&header, body)
}

pub struct TomographySummary {
    pub state: String,
    pub fidelity: MeanStd,
    pub negativity_theory: f64,
    pub negativity_reconstructed: MeanStd,
    pub protocol_values: [f64; 4],
}

pub fn tomography_csv(rows: &[TomographySummary]) -> Result<String, CliError> {
    let header = [
        "state",
        "fidelity",
        "fidelity_std",
        "negativity_theory",
        "negativity_reconstructed",
        "negativity_reconstructed_std",
        "O_qst",
        "O1_qst",
        "O2_qst",
        "O3_qst",
    ];
    let body = rows.iter().map(|r| {
        let mut row = vec![
            r.state.clone(),
            f(r.fidelity.mean),
            f(r.fidelity.std),
            f(r.negativity_theory),
            f(r.negativity_reconstructed.mean),
            f(r.negativity_reconstructed.std),
        ];
        row.extend(r.protocol_values.iter().map(|&v| f(v)));
        row
    });
    csv_text(&header, body)
}
