//! Dense n-qubit states.
//!
//! Qubit 0 is the leftmost (most significant) bit of a computational basis
//! index, so `|100⟩` is index 4 and belongs to player A. Outcome signs are
//! fixed globally: `|0⟩ ↦ +1` in Z, `|+x⟩ ↦ +1` in X and `|+y⟩ ↦ +1` in Y.

use alloc::borrow::Cow;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub type ComplexAmp = Complex64;

/// Largest register the crate will build (64 amplitudes).
pub const MAX_QUBITS: usize = 6;

const STATE_TOL: f64 = 1e-12;
const INPUT_NORM_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-10;
const ZERO_PROBABILITY: f64 = 1e-14;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n_qubits) {
        Ok(())
    } else {
        Err(Error::QubitCount(n_qubits, "1..=6"))
    }
}

/// Bit of `index` belonging to `qubit` in an `n_qubits` register.
#[inline]
#[cfg(test)]
pub(crate) fn qubit_bit(index: usize, qubit: usize, n_qubits: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<ComplexAmp>,
}

impl PureState {
    /// Validates length, finiteness and normalization (within 1e-9), then
    /// renormalizes exactly.
    pub fn new(n_qubits: usize, amplitudes: Vec<ComplexAmp>) -> Result<Self> {
        check_qubits(n_qubits)?;
        let expected = 1usize << n_qubits;
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeLength {
                expected,
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        let inv = 1.0 / libm::sqrt(norm_sqr);
        Ok(Self {
            n_qubits,
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amplitudes = vec![c(0.0, 0.0); dim];
        amplitudes[index] = c(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Tensor product `self ⊗ rhs`.
    pub fn tensor(&self, rhs: &PureState) -> Result<Self> {
        let n_qubits = self.n_qubits + rhs.n_qubits;
        check_qubits(n_qubits)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| rhs.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[ComplexAmp] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> ComplexAmp {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            n_qubits: self.n_qubits,
            matrix: CMatrix::outer(&self.amplitudes),
        }
    }

    /// Applies a single-qubit operator (row-major 2x2) to one qubit. The result
    /// is only normalized when `op` is unitary.
    pub fn apply_local(&self, qubit: usize, op: &[[Complex64; 2]; 2]) -> Result<Self> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        let shift = self.n_qubits - 1 - qubit;
        let mut out = self.amplitudes.clone();
        for i in 0..self.amplitudes.len() {
            if (i >> shift) & 1 == 0 {
                let j = i | (1 << shift);
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
                out[i] = op[0][0] * a0 + op[0][1] * a1;
                out[j] = op[1][0] * a0 + op[1][1] * a1;
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace within 1e-12 and eigenvalues
    /// `≥ -1e-10`.
    pub fn new(n_qubits: usize, matrix: CMatrix) -> Result<Self> {
        check_qubits(n_qubits)?;
        let expected = 1usize << n_qubits;
        if matrix.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: matrix.dim(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        if matrix.hermiticity_defect() > STATE_TOL {
            return Err(Error::NotHermitian);
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::NotUnitTrace(trace.re));
        }
        let state = Self { n_qubits, matrix };
        let min = state.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(state)
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << n_qubits);
        Self { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        Ok(Self {
            n_qubits,
            matrix: CMatrix::identity(dim).scale(1.0 / dim as f64),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.hermitian_eigen().0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.hermiticity_defect()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// `ρ ↦ U ρ U†` with `op` acting on one qubit; `op` need not be unitary.
    pub(crate) fn conjugate_local(&self, qubit: usize, op: &[[Complex64; 2]; 2]) -> DensityMatrix {
        let n = self.n_qubits;
        let dim = self.dim();
        let shift = n - 1 - qubit;
        let m = &self.matrix;
        // left multiply
        let mut left = CMatrix::zeros(dim);
        for i in 0..dim {
            let bit = (i >> shift) & 1;
            let i0 = i & !(1 << shift);
            let i1 = i0 | (1 << shift);
            for j in 0..dim {
                left[(i, j)] = op[bit][0] * m[(i0, j)] + op[bit][1] * m[(i1, j)];
            }
        }
        // right multiply by op†
        let mut out = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let bit = (j >> shift) & 1;
                let j0 = j & !(1 << shift);
                let j1 = j0 | (1 << shift);
                out[(i, j)] = left[(i, j0)] * op[bit][0].conj() + left[(i, j1)] * op[bit][1].conj();
            }
        }
        Self::from_matrix_unchecked(n, out)
    }

    /// Convex combination `Σ pᵢ ρᵢ`.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts.first().ok_or(Error::InvalidParameter("empty mixture"))?;
        let n = first.1.n_qubits;
        let mut acc = CMatrix::zeros(first.1.dim());
        for (p, rho) in parts {
            if rho.n_qubits != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: rho.n_qubits,
                });
            }
            acc = acc.add(&rho.matrix.scale(*p));
        }
        DensityMatrix::new(n, acc)
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(state: &PureState) -> Self {
        state.to_density()
    }
}

impl From<PureState> for DensityMatrix {
    fn from(state: PureState) -> Self {
        state.to_density()
    }
}

/// Anything that can be evaluated as a density matrix.
pub trait AsDensity {
    fn as_density(&self) -> Cow<'_, DensityMatrix>;

    fn qubit_count(&self) -> usize;

    /// The state vector, when there is one; lets measurements skip the
    /// density matrix.
    fn as_pure(&self) -> Option<&PureState> {
        None
    }
}

impl AsDensity for DensityMatrix {
    fn as_density(&self) -> Cow<'_, DensityMatrix> {
        Cow::Borrowed(self)
    }

    fn qubit_count(&self) -> usize {
        self.n_qubits
    }
}

impl AsDensity for PureState {
    fn as_density(&self) -> Cow<'_, DensityMatrix> {
        Cow::Owned(self.to_density())
    }

    fn qubit_count(&self) -> usize {
        self.n_qubits
    }

    fn as_pure(&self) -> Option<&PureState> {
        Some(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasurementBasis {
    X,
    Y,
    Z,
    /// `|b₀⟩ = sinλ|0⟩ − cosλ|1⟩`, `|b₁⟩ = cosλ|0⟩ + sinλ|1⟩`.
    Param(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutcomeLabel {
    Plus,
    Minus,
    B0,
    B1,
}

impl OutcomeLabel {
    /// Position of the eigenvector in [`basis_eigenvectors`].
    pub fn index(self) -> usize {
        match self {
            OutcomeLabel::Plus | OutcomeLabel::B0 => 0,
            OutcomeLabel::Minus | OutcomeLabel::B1 => 1,
        }
    }

    /// `±1` for Pauli outcomes, `None` for the parametrized basis.
    pub fn sign(self) -> Option<i8> {
        match self {
            OutcomeLabel::Plus => Some(1),
            OutcomeLabel::Minus => Some(-1),
            OutcomeLabel::B0 | OutcomeLabel::B1 => None,
        }
    }

    pub fn from_sign(sign: i8) -> Self {
        if sign >= 0 {
            OutcomeLabel::Plus
        } else {
            OutcomeLabel::Minus
        }
    }
}

impl MeasurementBasis {
    pub fn is_param(self) -> bool {
        matches!(self, MeasurementBasis::Param(_))
    }

    pub fn labels(self) -> [OutcomeLabel; 2] {
        if self.is_param() {
            [OutcomeLabel::B0, OutcomeLabel::B1]
        } else {
            [OutcomeLabel::Plus, OutcomeLabel::Minus]
        }
    }

    pub fn accepts(self, label: OutcomeLabel) -> bool {
        self.labels().contains(&label)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvector {
    pub label: OutcomeLabel,
    pub vector: [ComplexAmp; 2],
}

impl Eigenvector {
    pub fn to_state(&self) -> PureState {
        PureState {
            n_qubits: 1,
            amplitudes: self.vector.to_vec(),
        }
    }
}

/// The two eigenvectors of `basis`, in outcome-index order.
pub fn basis_eigenvectors(basis: MeasurementBasis) -> [Eigenvector; 2] {
    let h = FRAC_1_SQRT_2;
    let (v0, v1) = match basis {
        MeasurementBasis::X => ([c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]),
        MeasurementBasis::Y => ([c(h, 0.0), c(0.0, h)], [c(h, 0.0), c(0.0, -h)]),
        MeasurementBasis::Z => ([c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]),
        MeasurementBasis::Param(lambda) => {
            let (s, co) = (libm::sin(lambda), libm::cos(lambda));
            ([c(s, 0.0), c(-co, 0.0)], [c(co, 0.0), c(s, 0.0)])
        }
    };
    let [l0, l1] = basis.labels();
    [
        Eigenvector { label: l0, vector: v0 },
        Eigenvector { label: l1, vector: v1 },
    ]
}

/// Matrix whose rows are the conjugated eigenvectors: `U|ψ⟩` lists the
/// outcome amplitudes `⟨e_k|ψ⟩`.
fn basis_change(basis: MeasurementBasis) -> [[Complex64; 2]; 2] {
    let [e0, e1] = basis_eigenvectors(basis);
    [
        [e0.vector[0].conj(), e0.vector[1].conj()],
        [e1.vector[0].conj(), e1.vector[1].conj()],
    ]
}

fn projector(basis: MeasurementBasis, label: OutcomeLabel) -> Result<[[Complex64; 2]; 2]> {
    if !basis.accepts(label) {
        return Err(Error::OutcomeMismatch);
    }
    let v = basis_eigenvectors(basis)[label.index()].vector;
    Ok([
        [v[0] * v[0].conj(), v[0] * v[1].conj()],
        [v[1] * v[0].conj(), v[1] * v[1].conj()],
    ])
}

/// `sinθ|0…0⟩ + phase_sign·cosθ|1…1⟩` on `n_qubits ≥ 2` qubits.
pub fn make_ghz_general(theta: f64, n_qubits: usize, phase_sign: i8) -> Result<PureState> {
    if !(2..=MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitCount(n_qubits, "2..=6"));
    }
    if phase_sign != 1 && phase_sign != -1 {
        return Err(Error::InvalidParameter("phase sign must be +1 or -1"));
    }
    if !theta.is_finite() {
        return Err(Error::NonFinite);
    }
    let dim = 1usize << n_qubits;
    let mut amplitudes = vec![c(0.0, 0.0); dim];
    amplitudes[0] = c(libm::sin(theta), 0.0);
    amplitudes[dim - 1] = c(f64::from(phase_sign) * libm::cos(theta), 0.0);
    Ok(PureState {
        n_qubits,
        amplitudes,
    })
}

/// `(|000⟩ + |111⟩)/√2`
pub fn standard_ghz() -> PureState {
    make_ghz_general(core::f64::consts::FRAC_PI_4, 3, 1).expect("valid GHZ parameters")
}

/// `a|100⟩ + b|010⟩ + c|001⟩`
pub fn make_w_general(a: ComplexAmp, b: ComplexAmp, c_amp: ComplexAmp) -> Result<PureState> {
    let mut amplitudes = vec![c(0.0, 0.0); 8];
    amplitudes[0b100] = a;
    amplitudes[0b010] = b;
    amplitudes[0b001] = c_amp;
    PureState::new(3, amplitudes)
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`
pub fn standard_w() -> PureState {
    let a = c(1.0 / libm::sqrt(3.0), 0.0);
    make_w_general(a, a, a).expect("valid W parameters")
}

/// `(|100⟩ + √n e^{iγ}|010⟩ + √(n+1) e^{iδ}|001⟩) / √(2(1+n))`
pub fn make_wn(n: u32, gamma: f64, delta: f64) -> Result<PureState> {
    if n == 0 {
        return Err(Error::InvalidParameter("W_n needs n >= 1"));
    }
    let nf = f64::from(n);
    let norm = 1.0 / libm::sqrt(2.0 * (1.0 + nf));
    let a = c(norm, 0.0);
    let b = Complex64::from_polar(libm::sqrt(nf) * norm, gamma);
    let c_amp = Complex64::from_polar(libm::sqrt(nf + 1.0) * norm, delta);
    make_w_general(a, b, c_amp)
}

fn check_assignment(n_qubits: usize, len: usize) -> Result<()> {
    if len != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            found: len,
        });
    }
    Ok(())
}

/// Born probability `Tr(ρ Π)` of a full outcome tuple.
pub fn outcome_probability(
    state: &impl AsDensity,
    bases: &[MeasurementBasis],
    outcomes: &[OutcomeLabel],
) -> Result<f64> {
    let rho = state.as_density();
    let n = rho.n_qubits;
    check_assignment(n, bases.len())?;
    check_assignment(n, outcomes.len())?;
    let mut v = vec![c(1.0, 0.0)];
    for (&basis, &label) in bases.iter().zip(outcomes) {
        if !basis.accepts(label) {
            return Err(Error::OutcomeMismatch);
        }
        let e = basis_eigenvectors(basis)[label.index()].vector;
        v = v.iter().flat_map(|a| [a * e[0], a * e[1]]).collect();
    }
    let m = rho.matrix();
    let mut p = c(0.0, 0.0);
    for i in 0..v.len() {
        let mut row = c(0.0, 0.0);
        for j in 0..v.len() {
            row += m[(i, j)] * v[j];
        }
        p += v[i].conj() * row;
    }
    Ok(p.re.clamp(0.0, 1.0))
}

/// Probabilities of all `2^n` outcome tuples, indexed like basis states: bit
/// `k` of the index (qubit order as above) is the outcome index of qubit `k`.
pub fn outcome_distribution(state: &impl AsDensity, bases: &[MeasurementBasis]) -> Result<Vec<f64>> {
    if let Some(pure) = state.as_pure() {
        check_assignment(pure.n_qubits, bases.len())?;
        let mut rotated = Cow::Borrowed(pure);
        for (qubit, &basis) in bases.iter().enumerate() {
            if basis != MeasurementBasis::Z {
                rotated = Cow::Owned(rotated.apply_local(qubit, &basis_change(basis))?);
            }
        }
        return Ok(rotated.amplitudes.iter().map(|a| a.norm_sqr()).collect());
    }
    let rho = state.as_density();
    check_assignment(rho.n_qubits, bases.len())?;
    let mut rotated: Cow<'_, DensityMatrix> = rho;
    for (qubit, &basis) in bases.iter().enumerate() {
        if basis != MeasurementBasis::Z {
            rotated = Cow::Owned(rotated.conjugate_local(qubit, &basis_change(basis)));
        }
    }
    Ok((0..rotated.dim())
        .map(|i| rotated.matrix[(i, i)].re.max(0.0))
        .collect())
}

/// Measures one qubit and returns the Born probability together with the
/// renormalized post-measurement state (all qubits kept).
pub fn project_qubit(
    state: &impl AsDensity,
    qubit: usize,
    basis: MeasurementBasis,
    outcome: OutcomeLabel,
) -> Result<(f64, DensityMatrix)> {
    let rho = state.as_density();
    if qubit >= rho.n_qubits {
        return Err(Error::QubitOutOfRange {
            qubit,
            n_qubits: rho.n_qubits,
        });
    }
    let proj = projector(basis, outcome)?;
    let post = rho.conjugate_local(qubit, &proj);
    let p = post.trace();
    if p <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability);
    }
    let n = post.n_qubits;
    Ok((p, DensityMatrix::from_matrix_unchecked(n, post.matrix.scale(1.0 / p))))
}

/// Reduced state on `keep` (sorted, duplicates ignored).
pub fn partial_trace(state: &impl AsDensity, keep: &[usize]) -> Result<DensityMatrix> {
    let rho = state.as_density();
    let n = rho.n_qubits;
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    if let Some(&qubit) = keep.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit, n_qubits: n });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let k = kept.len();

    let compose = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut index = 0;
        for (pos, &q) in kept.iter().enumerate() {
            index |= ((kept_bits >> (k - 1 - pos)) & 1) << (n - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            index |= ((traced_bits >> (traced.len() - 1 - pos)) & 1) << (n - 1 - q);
        }
        index
    };

    let out_dim = 1usize << k;
    let mut out = CMatrix::zeros(out_dim);
    for r in 0..out_dim {
        for s in 0..out_dim {
            let mut acc = c(0.0, 0.0);
            for t in 0..(1usize << traced.len()) {
                acc += rho.matrix[(compose(r, t), compose(s, t))];
            }
            out[(r, s)] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(k, out))
}
