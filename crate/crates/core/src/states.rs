//! Three-qubit pure states: the canonical five-parameter family, the seven
//! representative states and seeded random canonical states.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, HERMITIAN_TOL, PSD_TOL, ZERO};

/// Tolerance on unit norm / unit trace.
pub const NORM_TOL: f64 = 1e-12;

/// Amplitudes of a normalized three-qubit state, ordered `|000>, |001>, ..., |111>`
/// with qubit 1 the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    amps: [Complex64; 8],
}

impl StateVector {
    pub fn new(amps: [Complex64; 8]) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes".into()));
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::validation(
                "amplitudes",
                format!("squared norm {norm} differs from 1 by more than {NORM_TOL:e}"),
            ));
        }
        Ok(StateVector { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: [Complex64; 8]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::validation("amplitudes", "cannot normalize a zero vector"));
        }
        Self::new(amps.map(|z| z / norm))
    }

    /// Computational basis state; `bits` is read as `q1 q2 q3`.
    pub fn basis(bits: usize) -> Self {
        let mut amps = [ZERO; 8];
        amps[bits & 7] = Complex64::new(1.0, 0.0);
        StateVector { amps }
    }

    pub(crate) fn from_raw(amps: [Complex64; 8]) -> Self {
        StateVector { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix(ComplexMatrix::outer(&self.amps, &self.amps))
    }
}

/// `|psi><psi|`; fails if `psi` is not normalized.
pub fn to_density(psi: &StateVector) -> Result<DensityMatrix> {
    let n = psi.norm_sqr();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::validation("state", format!("squared norm {n} is not 1")));
    }
    Ok(psi.to_density())
}

/// A validated 8x8 density operator: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() != 8 || m.cols() != 8 {
            return Err(Error::Dimension(format!(
                "density matrix must be 8x8, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let dev = m.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::validation("density", format!("trace {tr} is not 1")));
        }
        let lowest = herm_eig(&m)?.values[7];
        if lowest < -PSD_TOL {
            return Err(Error::NegativeEigenvalue { eigenvalue: lowest });
        }
        Ok(DensityMatrix(m))
    }

    pub(crate) fn from_unchecked(m: ComplexMatrix) -> Self {
        DensityMatrix(m)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(ComplexMatrix::identity(8).scale_real(1.0 / 8.0))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// `(1 - p) self + p other`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> DensityMatrix {
        DensityMatrix(&self.0.scale_real(1.0 - p) + &other.0.scale_real(p))
    }
}

/// Parameters of `a0|000> + a1 e^{i theta}|100> + a2|101> + a3|110> + a4|111>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub theta: f64,
}

impl CanonicalParams {
    pub fn amplitudes(&self) -> [f64; 5] {
        [self.a0, self.a1, self.a2, self.a3, self.a4]
    }

    pub fn validate(&self) -> Result<()> {
        for (k, a) in self.amplitudes().into_iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::validation(format!("canonical.a{k}"), "must be finite"));
            }
            if a < 0.0 {
                return Err(Error::validation(format!("canonical.a{k}"), "must be nonnegative"));
            }
        }
        let norm: f64 = self.amplitudes().iter().map(|a| a * a).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::validation(
                "canonical",
                format!("sum of squared amplitudes is {norm}, expected 1"),
            ));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::validation("canonical.theta", "must lie in [0, pi]"));
        }
        Ok(())
    }

    /// The three-tangle `4 a0^2 a4^2` of the canonical state.
    pub fn tangle(&self) -> f64 {
        4.0 * self.a0 * self.a0 * self.a4 * self.a4
    }
}

pub fn from_canonical(p: &CanonicalParams) -> Result<StateVector> {
    p.validate()?;
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut amps = [ZERO; 8];
    amps[0b000] = re(p.a0);
    amps[0b100] = Complex64::from_polar(p.a1, p.theta);
    amps[0b101] = re(p.a2);
    amps[0b110] = re(p.a3);
    amps[0b111] = re(p.a4);
    StateVector::new(amps)
}

/// Normalized absolute Gaussian amplitudes and a uniform phase in `[0, pi]`.
pub fn random_canonical(seed: u64) -> CanonicalParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = [0.0f64; 5];
    for x in &mut a {
        let g: f64 = rng.sample(StandardNormal);
        *x = g.abs();
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = a.map(|x| x / norm);
    let theta = rng.random_range(0.0..=PI);
    CanonicalParams {
        a0: a[0],
        a1: a[1],
        a2: a[2],
        a3: a[3],
        a4: a[4],
        theta,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedState {
    #[serde(rename = "GHZ")]
    Ghz,
    W,
    #[serde(rename = "WWbar")]
    WWbar,
    #[serde(rename = "BS1")]
    Bs1,
    #[serde(rename = "BS2")]
    Bs2,
    #[serde(rename = "BS3")]
    Bs3,
    Sep,
}

impl NamedState {
    /// Listing order used by reports.
    pub const ALL: [NamedState; 7] = [
        NamedState::Ghz,
        NamedState::WWbar,
        NamedState::W,
        NamedState::Bs1,
        NamedState::Bs2,
        NamedState::Bs3,
        NamedState::Sep,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NamedState::Ghz => "GHZ",
            NamedState::W => "W",
            NamedState::WWbar => "WWbar",
            NamedState::Bs1 => "BS1",
            NamedState::Bs2 => "BS2",
            NamedState::Bs3 => "BS3",
            NamedState::Sep => "Sep",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedState::ALL
            .into_iter()
            .find(|n| n.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse {
                what: "named state",
                input: s.to_string(),
            })
    }
}

fn superposition(kets: &[usize]) -> StateVector {
    let a = Complex64::new(1.0 / (kets.len() as f64).sqrt(), 0.0);
    let mut amps = [ZERO; 8];
    for &k in kets {
        amps[k] = a;
    }
    StateVector::from_raw(amps)
}

pub fn named_state(n: NamedState) -> StateVector {
    match n {
        NamedState::Ghz => {
            let mut amps = [ZERO; 8];
            amps[0b000] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            amps[0b111] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            StateVector::from_raw(amps)
        }
        NamedState::W => superposition(&[0b001, 0b010, 0b100]),
        NamedState::WWbar => superposition(&[0b001, 0b010, 0b100, 0b011, 0b101, 0b110]),
        NamedState::Bs1 => superposition(&[0b000, 0b011]),
        NamedState::Bs2 => superposition(&[0b000, 0b101]),
        NamedState::Bs3 => superposition(&[0b000, 0b110]),
        NamedState::Sep => StateVector::basis(0),
    }
}

/// Serialized description of a pure state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateDocument {
    Named(NamedState),
    Canonical(CanonicalParams),
    Amplitudes(Vec<[f64; 2]>),
}

impl StateDocument {
    pub fn from_state(psi: &StateVector) -> Self {
        StateDocument::Amplitudes(psi.amps.iter().map(|z| [z.re, z.im]).collect())
    }

    pub fn to_state(&self) -> Result<StateVector> {
        match self {
            StateDocument::Named(n) => Ok(named_state(*n)),
            StateDocument::Canonical(p) => from_canonical(p),
            StateDocument::Amplitudes(raw) => {
                if raw.len() != 8 {
                    return Err(Error::validation(
                        "amplitudes",
                        format!("expected 8 [re, im] pairs, got {}", raw.len()),
                    ));
                }
                let mut amps = [ZERO; 8];
                for (k, [re, im]) in raw.iter().enumerate() {
                    if !re.is_finite() || !im.is_finite() {
                        return Err(Error::validation(format!("amplitudes[{k}]"), "must be finite"));
                    }
                    amps[k] = Complex64::new(*re, *im);
                }
                StateVector::new(amps)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::validation("state document", e.to_string()))
    }
}
