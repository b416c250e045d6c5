//! Concurrence, three-tangle and the GHZ-family n-tangle.
//!
//! The three-tangle uses qubit A as the focus: `τ = C²_{A(BC)} − C²_{AB} − C²_{AC}`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{clamp_noise, CMatrix};
use crate::qstate::{partial_trace, AsDensity, DensityMatrix, PureState};

const CLAMP_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangleReport {
    pub tau: f64,
    /// `C_{A(BC)}`
    pub c_a_bc: f64,
    pub c_ab: f64,
    pub c_ac: f64,
}

fn require_qubits(n: usize, expected: usize) -> Result<()> {
    if n == expected {
        Ok(())
    } else {
        Err(Error::QubitCount(n, if expected == 2 { "2" } else { "3" }))
    }
}

fn sigma_y_sigma_y() -> CMatrix {
    let one = Complex64::new(1.0, 0.0);
    // σy ⊗ σy is real: anti-diagonal (-1, 1, 1, -1)
    let mut m = CMatrix::zeros(4);
    m[(0, 3)] = -one;
    m[(1, 2)] = one;
    m[(2, 1)] = one;
    m[(3, 0)] = -one;
    m
}

/// `|⟨ψ|σy⊗σy|ψ*⟩|` for a two-qubit pure state.
pub fn concurrence_pure_pair(state: &PureState) -> Result<f64> {
    require_qubits(state.n_qubits(), 2)?;
    let a = state.amplitudes();
    // σy⊗σy|ψ*⟩ = (−a₃*, a₂*, a₁*, −a₀*)
    let flipped = [-a[3].conj(), a[2].conj(), a[1].conj(), -a[0].conj()];
    let overlap: Complex64 = a.iter().zip(flipped).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm().min(1.0))
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, with `λᵢ` the descending
/// square roots of the eigenvalues of `√ρ ρ̃ √ρ`, `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn concurrence_mixed_pair(state: &DensityMatrix) -> Result<f64> {
    require_qubits(state.n_qubits(), 2)?;
    let min = state.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::NotPositive(min));
    }
    let yy = sigma_y_sigma_y();
    let rho = state.matrix();
    let tilde = yy.mul(&rho.conj()).mul(&yy);
    let root = rho.psd_sqrt();
    let r = root.mul(&tilde).mul(&root);
    let mut lambdas: Vec<f64> = clamp_noise(&r.hermitian_eigen().0)
        .into_iter()
        .map(libm::sqrt)
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// `√(2(1 − Tr ρ_P²))` for qubit `p` of a three-qubit pure state.
pub fn one_vs_rest_concurrence(state: &PureState, p: usize) -> Result<f64> {
    require_qubits(state.n_qubits(), 3)?;
    let reduced = partial_trace(state, &[p])?;
    Ok(libm::sqrt((2.0 * (1.0 - reduced.purity())).max(0.0)).min(1.0))
}

pub fn three_tangle(state: &PureState) -> Result<TangleReport> {
    require_qubits(state.n_qubits(), 3)?;
    let c_a_bc = one_vs_rest_concurrence(state, 0)?;
    let c_ab = concurrence_mixed_pair(&partial_trace(state, &[0, 1])?)?;
    let c_ac = concurrence_mixed_pair(&partial_trace(state, &[0, 2])?)?;
    let mut tau = c_a_bc * c_a_bc - c_ab * c_ab - c_ac * c_ac;
    if (-CLAMP_TOL..0.0).contains(&tau) {
        tau = 0.0;
    }
    if (1.0..=1.0 + CLAMP_TOL).contains(&tau) {
        tau = 1.0;
    }
    Ok(TangleReport {
        tau,
        c_a_bc,
        c_ab,
        c_ac,
    })
}

/// Pairwise concurrences `C_AB + C_BC + C_CA`. For real nonnegative W-family
/// amplitudes this is `2(ab + bc + ca)`.
pub fn residual_concurrence_sum(state: &impl AsDensity) -> Result<f64> {
    let rho = state.as_density();
    require_qubits(rho.n_qubits(), 3)?;
    [[0, 1], [1, 2], [0, 2]]
        .iter()
        .map(|pair| concurrence_mixed_pair(&partial_trace(&*rho, pair)?))
        .sum()
}

/// n-tangle of the generalized GHZ family `sinθ|0…0⟩ ± cosθ|1…1⟩`: `sin²2θ`.
/// Only meaningful on that family.
pub fn n_tangle_ghz_family(theta: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidParameter("theta must lie in [0, pi/2]"));
    }
    let s = libm::sin(2.0 * theta);
    Ok(s * s)
}
