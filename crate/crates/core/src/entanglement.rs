//! Entanglement quantifiers for three-qubit states: concurrence, three-tangle,
//! negativity and Uhlmann fidelity.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace, partial_transpose, psd_eig, singular_values, trace_norm, ComplexMatrix, Qubit, ZERO,
};
use crate::states::{DensityMatrix, StateVector};

/// Negative tangles above `-TANGLE_CLIP` are treated as numerical zero.
pub const TANGLE_CLIP: f64 = 1e-8;

/// Ensemble weights below this are dropped before building the concurrence
/// matrix.
const ENSEMBLE_CUTOFF: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangleReport {
    pub c2_a_bc: f64,
    pub c2_ab: f64,
    pub c2_ac: f64,
    pub tau: f64,
}

/// Wootters concurrence from any ensemble `{|w_k>}` (unnormalized 4-vectors)
/// of a two-qubit state.
///
/// The spin-flip overlaps `T_jk = <w_j*| σy⊗σy |w_k>` form a complex symmetric
/// matrix whose singular values are the `λ_i` of the usual `ρ ρ̃` spectrum;
/// working with `T` avoids taking square roots of near-zero eigenvalues.
fn concurrence_from_ensemble(ensemble: &[[Complex64; 4]]) -> f64 {
    if ensemble.is_empty() {
        return 0.0;
    }
    // σy⊗σy |ab> = -(-1)^{a+b} |~a ~b>, i.e. reverses the basis with signs (-1, 1, 1, -1).
    let flip = |v: &[Complex64; 4]| -> [Complex64; 4] { [-v[3], v[2], v[1], -v[0]] };
    let n = ensemble.len();
    let t = ComplexMatrix::from_fn(n, n, |j, k| {
        let fk = flip(&ensemble[k]);
        (0..4).map(|m| ensemble[j][m] * fk[m]).sum()
    });
    let s = singular_values(&t);
    (s[0] - s[1..].iter().sum::<f64>()).max(0.0)
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence_2q(rho: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::Dimension(format!(
            "concurrence needs a 4x4 density matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let eig = psd_eig(rho)?;
    let ensemble: Vec<[Complex64; 4]> = (0..4)
        .filter(|&k| eig.values[k] > ENSEMBLE_CUTOFF)
        .map(|k| {
            let w = eig.values[k].sqrt();
            let v = eig.vector(k);
            [v[0] * w, v[1] * w, v[2] * w, v[3] * w]
        })
        .collect();
    Ok(concurrence_from_ensemble(&ensemble))
}

/// `2 sqrt(det ρ_q)` for the single-qubit reduction on `part`.
pub fn concurrence_pure_bipartite(psi: &StateVector, part: Qubit) -> f64 {
    let rho = partial_trace(psi.to_density().matrix(), &[part]).expect("single-qubit keep set");
    let det = (rho[(0, 0)] * rho[(1, 1)] - rho[(0, 1)] * rho[(1, 0)]).re;
    2.0 * det.max(0.0).sqrt()
}

/// Components `<c|_traced |psi>` of the pure state, as two-qubit vectors on
/// the remaining pair.
fn pair_ensemble(psi: &StateVector, traced: Qubit) -> Vec<[Complex64; 4]> {
    let kept: Vec<Qubit> = Qubit::ALL.into_iter().filter(|&q| q != traced).collect();
    let amps = psi.amplitudes();
    [0usize, 1]
        .iter()
        .map(|&bit| {
            let mut v = [ZERO; 4];
            for (b, a) in amps.iter().enumerate() {
                if usize::from(b & traced.mask() != 0) == bit {
                    let hi = usize::from(b & kept[0].mask() != 0);
                    let lo = usize::from(b & kept[1].mask() != 0);
                    v[2 * hi + lo] = *a;
                }
            }
            v
        })
        .collect()
}

/// `τ = C²_A(BC) − C²_AB − C²_AC`.
pub fn three_tangle(psi: &StateVector) -> Result<TangleReport> {
    let c2_a_bc = concurrence_pure_bipartite(psi, Qubit::ONE).powi(2);
    let c2_ab = concurrence_from_ensemble(&pair_ensemble(psi, Qubit::THREE)).powi(2);
    let c2_ac = concurrence_from_ensemble(&pair_ensemble(psi, Qubit::TWO)).powi(2);
    let mut tau = c2_a_bc - c2_ab - c2_ac;
    if tau < 0.0 {
        if tau < -TANGLE_CLIP {
            return Err(Error::NegativeTangle(tau));
        }
        tau = 0.0;
    }
    Ok(TangleReport { c2_a_bc, c2_ab, c2_ac, tau })
}

/// `(‖ρ^{T_k}‖₁ − 1) / 2` across the cut `k | rest`.
pub fn negativity(rho: &DensityMatrix, part: Qubit) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), part)?;
    Ok(((trace_norm(&pt)? - 1.0) / 2.0).max(0.0))
}

/// Smallest negativity over the three single-qubit cuts.
pub fn negativity_min_dm(rho: &DensityMatrix) -> Result<f64> {
    Qubit::ALL
        .into_iter()
        .map(|q| negativity(rho, q))
        .try_fold(f64::INFINITY, |acc, n| n.map(|n| acc.min(n)))
}

pub fn negativity_min(psi: &StateVector) -> Result<f64> {
    negativity_min_dm(&psi.to_density())
}

/// Uhlmann fidelity `[Tr sqrt(sqrt(a) b sqrt(a))]²`.
///
/// The trace equals the nuclear norm of `sqrt(a) sqrt(b)`, which in the two
/// eigenbases is the matrix `G_jk = sqrt(α_j β_k) <u_j|v_k>`. Dropping
/// noise-level eigenvalues first keeps pure-state fidelities exact.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let support = |m: &ComplexMatrix| -> Result<Vec<(f64, Vec<Complex64>)>> {
        let eig = psd_eig(m)?;
        Ok((0..eig.values.len())
            .filter(|&k| eig.values[k] > ENSEMBLE_CUTOFF)
            .map(|k| (eig.values[k].sqrt(), eig.vector(k)))
            .collect())
    };
    let ua = support(a.matrix())?;
    let vb = support(b.matrix())?;
    if ua.is_empty() || vb.is_empty() {
        return Ok(0.0);
    }
    let g = ComplexMatrix::from_fn(ua.len(), vb.len(), |j, k| {
        let overlap: Complex64 = ua[j].1.iter().zip(&vb[k].1).map(|(u, v)| u.conj() * v).sum();
        overlap * (ua[j].0 * vb[k].0)
    });
    let tr: f64 = singular_values(&g).iter().sum();
    Ok(tr * tr)
}
