//! Simulation toolkit for classifying three-qubit pure states into the six
//! SLOCC entanglement classes from four Pauli-product expectation values, each
//! read out as a single-qubit `σz` measurement after a short mapping circuit.

pub mod classifier;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod mapping;
pub mod measurement;
pub mod pauli;
pub mod report;
pub mod states;

pub use classifier::{classify, classify_state, ClassificationResult, MeasurementConfig, SloccClass};
pub use entanglement::{concurrence_2q, concurrence_pure_bipartite, fidelity, negativity_min, three_tangle, TangleReport};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Qubit};
pub use mapping::{expectation_via_mapping, protocol_expectations, recipe_table, verify_recipe, MappingRecipe};
pub use measurement::{apply_noise, sample_expectation, tomography, NoiseModel, ShotEstimate};
pub use pauli::{apply, apply_dm, expectation, gate_matrix, pauli_matrix, Circuit, Gate, PauliString};
pub use report::{classify_record, results_row, ClassifyRecord, ResultsRow, RunSettings, StateInput};
pub use states::{from_canonical, named_state, random_canonical, CanonicalParams, DensityMatrix, NamedState, StateDocument, StateVector};
