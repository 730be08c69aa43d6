//! Mapping of every nonidentity Pauli string `B_i` onto a single-qubit `σz`
//! measurement.
//!
//! Each recipe holds a circuit `U_i` and a measured qubit `k` such that
//! `U_i† σ_kz U_i = sign · B_i`, so `<B_i>_ρ = sign · <σ_kz>` in `U_i ρ U_i†`.
//! The table is checked by explicit 8x8 conjugation when it is first built.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Qubit};
use crate::pauli::{apply, apply_dm, pauli_matrix, Circuit, PauliString};
use crate::states::{DensityMatrix, StateVector};

/// Indices of `σxσxσx`, `σxσxσz`, `σxσzσx`, `σzσxσx`: the four protocol
/// observables, in that order.
///
/// Expectations are of the bare Pauli products (eigenvalues ±1), not of the
/// factor-2 scaled operators.
pub const PROTOCOL_INDICES: [usize; 4] = [21, 23, 29, 53];

/// Deviation allowed between `U† σz U` and `±B_i`.
pub const VERIFY_TOL: f64 = 1e-10;

/// Published circuits and measured qubits for `B_1 ..= B_63`.
const PUBLISHED: [(&str, usize); 63] = [
    ("Yb3", 3),
    ("X3", 3),
    ("", 3),
    ("Yb2", 2),
    ("CNOT23 Yb3 Yb2", 3),
    ("CNOT23 X3 Yb2", 3),
    ("CNOT23 Yb2", 3),
    ("X2", 2),
    ("CNOT23 Yb3 X2", 3),
    ("CNOT23 X3 X2", 3),
    ("CNOT23 X2", 3),
    ("", 2),
    ("CNOT23 Yb3", 3),
    ("CNOT23 X3", 3),
    ("CNOT23", 3),
    ("X1", 1),
    ("CNOT13 Yb3 Yb1", 3),
    ("CNOT13 X3 Yb1", 3),
    ("CNOT13 Yb1", 3),
    ("CNOT12 Yb2 Yb1", 2),
    ("CNOT23 Yb3 CNOT12 Yb2 Yb1", 3),
    ("CNOT23 X3 CNOT12 Yb2 Yb1", 3),
    ("CNOT23 CNOT12 Yb2 Yb1", 3),
    ("CNOT12 X2 Yb1", 2),
    ("CNOT23 Yb3 CNOT12 X2 Yb1", 3),
    ("CNOT23 X3 CNOT12 X2 Yb1", 3),
    ("CNOT23 CNOT12 X2 Yb1", 3),
    ("CNOT12 Yb1", 2),
    ("CNOT23 Yb3 CNOT12 Yb1", 3),
    ("CNOT23 X3 CNOT12 Yb1", 3),
    ("CNOT12 CNOT23 Yb1", 3),
    ("X1", 1),
    ("CNOT13 Yb3 X1", 3),
    ("CNOT13 X3 X1", 3),
    ("CNOT13 X1", 3),
    ("CNOT12 Yb2 X1", 2),
    ("CNOT23 Yb3 CNOT12 Yb2 X1", 3),
    ("CNOT23 X3 CNOT12 Yb2 X1", 3),
    ("CNOT23 CNOT12 Yb2 X1", 3),
    ("CNOT12 X2 X1", 2),
    ("CNOT23 Yb3 CNOT12 X2 X1", 3),
    ("CNOT23 X3 CNOT12 X2 X1", 3),
    ("CNOT23 CNOT12 X2 X1", 3),
    ("CNOT12 X1", 2),
    ("CNOT23 Yb3 CNOT12 X1", 3),
    ("CNOT23 X3 CNOT12 X1", 3),
    ("CNOT23 CNOT12 X1", 3),
    ("", 1),
    ("CNOT13 Yb3", 3),
    ("CNOT13 X3", 3),
    ("CNOT13", 3),
    ("CNOT12 Yb2", 2),
    ("CNOT23 Yb3 CNOT12 Yb2", 3),
    ("CNOT23 X3 CNOT12 Yb2", 3),
    ("CNOT23 CNOT12 Yb2", 3),
    ("CNOT12 X2", 2),
    ("CNOT23 Yb3 CNOT12 X2", 3),
    ("CNOT23 X3 CNOT12 X2", 3),
    ("CNOT23 CNOT12 X2", 3),
    ("CNOT12", 2),
    ("CNOT23 Yb3 CNOT12", 3),
    ("CNOT23 X3 CNOT12", 3),
    ("CNOT23 CNOT12", 3),
];

/// Rows whose published circuit does not conjugate `σz` into `B_i`.
const CORRECTIONS: [(usize, &str); 2] = [(16, "Yb1"), (31, "CNOT23 CNOT12 Yb1")];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Published,
    Corrected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MappingRecipe {
    pub pauli: PauliString,
    pub circuit: Circuit,
    pub measured: Qubit,
    pub sign: i8,
    pub max_deviation: f64,
    pub provenance: Provenance,
    /// The transcribed circuit, kept when a correction replaced it.
    pub published_circuit: Circuit,
}

impl MappingRecipe {
    pub fn index(&self) -> usize {
        self.pauli.index()
    }
}

/// Outcome of conjugating `σ_kz` by a circuit and comparing with a target.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verification {
    Verified {
        sign: i8,
        max_deviation: f64,
    },
    Mismatch {
        /// `(sign, string)` when the conjugated operator is a signed Pauli string.
        produced: Option<(i8, PauliString)>,
        deviation_plus: f64,
        deviation_minus: f64,
    },
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            Verification::Verified { sign, max_deviation } => {
                format!("verified with sign {sign:+} (deviation {max_deviation:.1e})")
            }
            Verification::Mismatch { produced: Some((s, p)), .. } => {
                format!("produces {}{p}", if *s < 0 { "-" } else { "+" })
            }
            Verification::Mismatch { produced: None, .. } => {
                "produces an operator that is not a signed Pauli string".into()
            }
        }
    }
}

/// Expands an 8x8 operator in the Pauli basis and returns the single signed
/// string it equals, if any.
pub fn identify_pauli(m: &ComplexMatrix) -> Option<(i8, PauliString)> {
    for p in PauliString::all() {
        let coeff: Complex64 = (&pauli_matrix(&p) * m).trace() / 8.0;
        if (coeff.norm() - 1.0).abs() < VERIFY_TOL && coeff.im.abs() < VERIFY_TOL {
            let sign = if coeff.re > 0.0 { 1 } else { -1 };
            let candidate = pauli_matrix(&p).scale_real(f64::from(sign));
            if candidate.max_abs_diff(m) < VERIFY_TOL {
                return Some((sign, p));
            }
        }
    }
    None
}

/// `U† σ_kz U`.
pub fn conjugated_z(circuit: &Circuit, measured: Qubit) -> ComplexMatrix {
    let u = circuit.unitary();
    &(&u.dagger() * &pauli_matrix(&PauliString::z_on(measured))) * &u
}

pub fn verify_mapping(pauli: &PauliString, circuit: &Circuit, measured: Qubit) -> Verification {
    let produced = conjugated_z(circuit, measured);
    let target = pauli_matrix(pauli);
    let deviation_plus = produced.max_abs_diff(&target);
    let deviation_minus = produced.max_abs_diff(&target.scale_real(-1.0));
    if deviation_plus <= VERIFY_TOL {
        Verification::Verified { sign: 1, max_deviation: deviation_plus }
    } else if deviation_minus <= VERIFY_TOL {
        Verification::Verified { sign: -1, max_deviation: deviation_minus }
    } else {
        Verification::Mismatch {
            produced: identify_pauli(&produced),
            deviation_plus,
            deviation_minus,
        }
    }
}

pub fn verify_recipe(r: &MappingRecipe) -> Verification {
    verify_mapping(&r.pauli, &r.circuit, r.measured)
}

fn parse_circuit(index: usize, text: &str) -> Result<Circuit> {
    text.parse().map_err(|e| Error::RecipeVerification {
        index,
        detail: format!("{e}"),
    })
}

/// Builds and verifies all 63 recipes.
pub fn build_recipe_table() -> Result<Vec<MappingRecipe>> {
    PUBLISHED
        .iter()
        .enumerate()
        .map(|(k, &(text, measured))| {
            let index = k + 1;
            let pauli = PauliString::from_index(index)?;
            let measured = Qubit::new(measured)?;
            let published_circuit = parse_circuit(index, text)?;
            let (circuit, provenance) = match CORRECTIONS.iter().find(|(i, _)| *i == index) {
                Some((_, fixed)) => (parse_circuit(index, fixed)?, Provenance::Corrected),
                None => (published_circuit.clone(), Provenance::Published),
            };
            match verify_mapping(&pauli, &circuit, measured) {
                Verification::Verified { sign, max_deviation } => Ok(MappingRecipe {
                    pauli,
                    circuit,
                    measured,
                    sign,
                    max_deviation,
                    provenance,
                    published_circuit,
                }),
                mismatch => Err(Error::RecipeVerification {
                    index,
                    detail: mismatch.describe(),
                }),
            }
        })
        .collect()
}

/// The verified recipe table, built once.
pub fn recipe_table() -> &'static [MappingRecipe] {
    static TABLE: OnceLock<Vec<MappingRecipe>> = OnceLock::new();
    TABLE.get_or_init(|| match build_recipe_table() {
        Ok(t) => t,
        Err(e) => panic!("{e}"),
    })
}

pub fn recipe(index: usize) -> Result<&'static MappingRecipe> {
    if index == 0 || index > 63 {
        return Err(Error::InvalidPauliIndex(index));
    }
    Ok(&recipe_table()[index - 1])
}

/// Probability of reading `|0>` on `q`.
pub(crate) fn prob_zero(rho: &DensityMatrix, q: Qubit) -> f64 {
    let m = rho.matrix();
    (0..8)
        .filter(|b| b & q.mask() == 0)
        .map(|b| m[(b, b)].re)
        .sum()
}

fn z_expectation(psi: &StateVector, q: Qubit) -> f64 {
    psi.amplitudes()
        .iter()
        .enumerate()
        .map(|(b, a)| if b & q.mask() == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum()
}

/// `<B_i>` obtained by running the mapping circuit and reading `σz` on the
/// measured qubit.
pub fn expectation_via_mapping(psi: &StateVector, index: usize) -> Result<f64> {
    let r = recipe(index)?;
    let mapped = apply(&r.circuit, psi);
    Ok(f64::from(r.sign) * z_expectation(&mapped, r.measured))
}

pub fn expectation_via_mapping_dm(rho: &DensityMatrix, index: usize) -> Result<f64> {
    let r = recipe(index)?;
    let mapped = apply_dm(&r.circuit, rho);
    Ok(f64::from(r.sign) * (2.0 * prob_zero(&mapped, r.measured) - 1.0))
}

/// `(<O>, <O1>, <O2>, <O3>)` through the mapping circuits.
pub fn protocol_expectations(psi: &StateVector) -> [f64; 4] {
    PROTOCOL_INDICES.map(|i| expectation_via_mapping(psi, i).expect("protocol index"))
}

pub fn protocol_expectations_dm(rho: &DensityMatrix) -> [f64; 4] {
    PROTOCOL_INDICES.map(|i| expectation_via_mapping_dm(rho, i).expect("protocol index"))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationRow {
    pub index: usize,
    pub pauli: PauliString,
    pub circuit: Circuit,
    pub measured: Qubit,
    pub sign: i8,
    pub max_deviation: f64,
    pub provenance: Provenance,
    pub published_circuit: Circuit,
    pub published_check: Verification,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
    pub corrected: Vec<usize>,
}

pub fn verification_report() -> VerificationReport {
    let rows: Vec<VerificationRow> = recipe_table()
        .iter()
        .map(|r| VerificationRow {
            index: r.index(),
            pauli: r.pauli,
            circuit: r.circuit.clone(),
            measured: r.measured,
            sign: r.sign,
            max_deviation: r.max_deviation,
            provenance: r.provenance,
            published_circuit: r.published_circuit.clone(),
            published_check: verify_mapping(&r.pauli, &r.published_circuit, r.measured),
        })
        .collect();
    let corrected = rows
        .iter()
        .filter(|r| r.provenance == Provenance::Corrected)
        .map(|r| r.index)
        .collect();
    VerificationReport { rows, corrected }
}

/// True when the circuit only uses Ȳ and X rotations and the CNOTs
/// 1→2, 2→3, 1→3.
pub fn uses_mapping_vocabulary(c: &Circuit) -> bool {
    use crate::pauli::{Angle, Axis, Gate};
    c.gates().iter().all(|g| match *g {
        Gate::Rotation { axis, negative, angle, .. } => {
            angle == Angle::HalfPi && matches!((axis, negative), (Axis::Y, true) | (Axis::X, false))
        }
        Gate::Cnot { control, target } => control < target,
    })
}
