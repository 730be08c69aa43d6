//! Pauli strings, the π/2-rotation and CNOT gate set, and gate circuits.
//!
//! Rotation convention: `X = exp(-iπσx/4)`, `X̄ = exp(+iπσx/4)`, and likewise
//! for `Y`. Under this choice `Ȳ₃† σ₃z Ȳ₃ = σ₃x` and `X₃† σ₃z X₃ = σ₃y`.
//!
//! Circuit text lists gates the way a product `U = G_n ... G_1` is written:
//! the rightmost token acts on the state first, the leftmost conjugates an
//! observable first. Tokens are `X1`, `Xb1`, `Y2`, `Yb3` for π/2 rotations,
//! `Xpi1`, `Ybpi2` etc. for π rotations and `CNOT12` for a CNOT with control
//! qubit 1 and target qubit 2.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{tensor_all, ComplexMatrix, Qubit, I, ONE, ZERO};
use crate::states::{DensityMatrix, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn digit(self) -> usize {
        self as usize
    }

    pub fn matrix(self) -> ComplexMatrix {
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_rows(2, 2, entries.to_vec()).expect("2x2")
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }
}

/// Tensor product of three single-qubit Paulis, qubit 1 first.
///
/// The index is the base-4 number `16 d1 + 4 d2 + d3` with `I, x, y, z -> 0..3`,
/// so `B3 = σ3z`, `B12 = σ2z`, `B48 = σ1z` and `B21 = σ1x σ2x σ3x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString([Pauli; 3]);

impl PauliString {
    pub const fn new(letters: [Pauli; 3]) -> Self {
        PauliString(letters)
    }

    pub fn from_index(index: usize) -> Result<Self> {
        if index > 63 {
            return Err(Error::InvalidPauliIndex(index));
        }
        let digit = |d: usize| Pauli::ALL[d & 3];
        Ok(PauliString([digit(index >> 4), digit(index >> 2), digit(index)]))
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, p| acc * 4 + p.digit())
    }

    pub fn letters(&self) -> [Pauli; 3] {
        self.0
    }

    pub fn on(&self, q: Qubit) -> Pauli {
        self.0[q.label() - 1]
    }

    /// `σz` on a single qubit.
    pub fn z_on(q: Qubit) -> Self {
        let mut letters = [Pauli::I; 3];
        letters[q.label() - 1] = Pauli::Z;
        PauliString(letters)
    }

    pub fn is_identity(&self) -> bool {
        self.0 == [Pauli::I; 3]
    }

    /// Highest-labelled qubit the string acts on nontrivially.
    pub fn highest_support(&self) -> Option<Qubit> {
        Qubit::ALL.into_iter().rev().find(|&q| self.on(q) != Pauli::I)
    }

    pub fn all() -> impl Iterator<Item = PauliString> {
        (0..64).map(|i| PauliString::from_index(i).expect("index < 64"))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { what: "Pauli string", input: s.to_string() };
        let letters: Vec<Pauli> = s
            .chars()
            .map(|c| match c.to_ascii_lowercase() {
                'i' => Ok(Pauli::I),
                'x' => Ok(Pauli::X),
                'y' => Ok(Pauli::Y),
                'z' => Ok(Pauli::Z),
                _ => Err(err()),
            })
            .collect::<Result<_>>()?;
        let letters: [Pauli; 3] = letters.try_into().map_err(|_| err())?;
        Ok(PauliString(letters))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn pauli_matrix(p: &PauliString) -> ComplexMatrix {
    let [a, b, c] = p.0.map(Pauli::matrix);
    tensor_all(&[&a, &b, &c]).expect("8x8")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Angle {
    HalfPi,
    Pi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    /// `exp(-i s θ σ_axis / 2)` on one qubit with `s = -1` when `negative`.
    Rotation {
        qubit: Qubit,
        axis: Axis,
        negative: bool,
        angle: Angle,
    },
    Cnot { control: Qubit, target: Qubit },
}

impl Gate {
    pub fn x(qubit: Qubit) -> Self {
        Gate::Rotation { qubit, axis: Axis::X, negative: false, angle: Angle::HalfPi }
    }

    pub fn x_bar(qubit: Qubit) -> Self {
        Gate::Rotation { qubit, axis: Axis::X, negative: true, angle: Angle::HalfPi }
    }

    pub fn y(qubit: Qubit) -> Self {
        Gate::Rotation { qubit, axis: Axis::Y, negative: false, angle: Angle::HalfPi }
    }

    pub fn y_bar(qubit: Qubit) -> Self {
        Gate::Rotation { qubit, axis: Axis::Y, negative: true, angle: Angle::HalfPi }
    }

    pub fn cnot(control: Qubit, target: Qubit) -> Result<Self> {
        if control == target {
            return Err(Error::validation("cnot", "control and target must differ"));
        }
        Ok(Gate::Cnot { control, target })
    }

    fn single_qubit_matrix(axis: Axis, negative: bool, angle: Angle) -> ComplexMatrix {
        let sigma = match axis {
            Axis::X => Pauli::X.matrix(),
            Axis::Y => Pauli::Y.matrix(),
        };
        let s = if negative { -1.0 } else { 1.0 };
        match angle {
            // cos(π/4) I - i s sin(π/4) σ
            Angle::HalfPi => {
                &ComplexMatrix::identity(2).scale_real(FRAC_1_SQRT_2)
                    + &sigma.scale(Complex64::new(0.0, -s * FRAC_1_SQRT_2))
            }
            // -i s σ
            Angle::Pi => sigma.scale(Complex64::new(0.0, -s)),
        }
    }
}

pub fn gate_matrix(g: &Gate) -> ComplexMatrix {
    match *g {
        Gate::Rotation { qubit, axis, negative, angle } => {
            let id = ComplexMatrix::identity(2);
            let rot = Gate::single_qubit_matrix(axis, negative, angle);
            let factors: Vec<&ComplexMatrix> = Qubit::ALL
                .iter()
                .map(|&q| if q == qubit { &rot } else { &id })
                .collect();
            tensor_all(&factors).expect("8x8")
        }
        Gate::Cnot { control, target } => ComplexMatrix::from_fn(8, 8, |r, c| {
            let image = if c & control.mask() != 0 { c ^ target.mask() } else { c };
            if r == image { ONE } else { ZERO }
        }),
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Rotation { qubit, axis, negative, angle } => {
                let a = match axis {
                    Axis::X => "X",
                    Axis::Y => "Y",
                };
                let bar = if negative { "b" } else { "" };
                let pi = if angle == Angle::Pi { "pi" } else { "" };
                write!(f, "{a}{bar}{pi}{qubit}")
            }
            Gate::Cnot { control, target } => write!(f, "CNOT{control}{target}"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { what: "gate", input: s.to_string() };
        let digit = |c: char| c.to_digit(10).ok_or_else(err).and_then(|d| Qubit::new(d as usize).map_err(|_| err()));

        if let Some(rest) = s.strip_prefix("CNOT") {
            let mut chars = rest.chars();
            let (Some(c), Some(t), None) = (chars.next(), chars.next(), chars.next()) else {
                return Err(err());
            };
            return Gate::cnot(digit(c)?, digit(t)?).map_err(|_| err());
        }

        let mut rest = s;
        let axis = if let Some(r) = rest.strip_prefix('X') {
            rest = r;
            Axis::X
        } else if let Some(r) = rest.strip_prefix('Y') {
            rest = r;
            Axis::Y
        } else {
            return Err(err());
        };
        let negative = match rest.strip_prefix('b') {
            Some(r) => {
                rest = r;
                true
            }
            None => false,
        };
        let angle = match rest.strip_prefix("pi") {
            Some(r) => {
                rest = r;
                Angle::Pi
            }
            None => Angle::HalfPi,
        };
        let mut chars = rest.chars();
        let (Some(q), None) = (chars.next(), chars.next()) else {
            return Err(err());
        };
        Ok(Gate::Rotation { qubit: digit(q)?, axis, negative, angle })
    }
}

/// Gates in the order they act on a state.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Circuit {
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Self {
        Circuit { gates }
    }

    pub fn identity() -> Self {
        Circuit::default()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `G_n ... G_1`.
    pub fn unitary(&self) -> ComplexMatrix {
        self.gates
            .iter()
            .fold(ComplexMatrix::identity(8), |u, g| &gate_matrix(g) * &u)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.gates.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut gates = s
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<Gate>>>()?;
        gates.reverse();
        Ok(Circuit { gates })
    }
}

impl Serialize for Circuit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn apply(c: &Circuit, psi: &StateVector) -> StateVector {
    let out = c.unitary().mul_vec(psi.amplitudes());
    StateVector::from_raw(out.try_into().expect("8 amplitudes"))
}

pub fn apply_dm(c: &Circuit, rho: &DensityMatrix) -> DensityMatrix {
    let u = c.unitary();
    DensityMatrix::from_unchecked(&(&u * rho.matrix()) * &u.dagger())
}

/// `P|b>` for a computational basis index `b`, as `(phase, image)`.
fn pauli_on_basis(p: &PauliString, b: usize) -> (Complex64, usize) {
    let mut phase = ONE;
    let mut image = b;
    for q in Qubit::ALL {
        let bit = b & q.mask() != 0;
        match p.on(q) {
            Pauli::I => {}
            Pauli::X => image ^= q.mask(),
            Pauli::Y => {
                image ^= q.mask();
                phase *= if bit { -I } else { I };
            }
            Pauli::Z => {
                if bit {
                    phase = -phase;
                }
            }
        }
    }
    (phase, image)
}

/// `<psi|P|psi>`, evaluated by acting with `P` on each basis component.
pub fn expectation(psi: &StateVector, p: &PauliString) -> f64 {
    let amps = psi.amplitudes();
    let value: Complex64 = (0..8)
        .map(|b| {
            let (phase, image) = pauli_on_basis(p, b);
            amps[image].conj() * phase * amps[b]
        })
        .sum();
    debug_assert!(value.im.abs() <= 1e-10, "imaginary expectation {value}");
    value.re
}

/// `Tr(P rho)`.
pub fn expectation_dm(rho: &DensityMatrix, p: &PauliString) -> f64 {
    let m = rho.matrix();
    (0..8)
        .map(|b| {
            // P has a single nonzero entry per column: P[image, b] = phase.
            let (phase, image) = pauli_on_basis(p, b);
            phase * m[(b, image)]
        })
        .sum::<Complex64>()
        .re
}
