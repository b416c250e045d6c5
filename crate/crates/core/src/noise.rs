//! Single-qubit noise on the qubits sent to Alice and Bob in the rule-maker
//! game, and the closed-form win probabilities for the noisy game.
//!
//! Phase-flip strength is the flip probability. Depolarizing is the affine
//! map `ρ ↦ p·I/2 + (1 − p)ρ`; the Pauli-weighted variant
//! `(1 − p)ρ + (p/3)(XρX + YρY + ZρZ)` is available for comparison.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::games::{rulemaker_win_probability, StateKind};
use crate::qstate::DensityMatrix;

pub type Operator = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I: Operator = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
const X: Operator = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
const Y: Operator = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
const Z: Operator = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];

fn scaled(op: &Operator, k: f64) -> Operator {
    [[op[0][0] * k, op[0][1] * k], [op[1][0] * k, op[1][1] * k]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    PhaseFlip,
    Depolarizing,
    AmplitudeDamping,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] = [
        ChannelKind::PhaseFlip,
        ChannelKind::Depolarizing,
        ChannelKind::AmplitudeDamping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::PhaseFlip => "phase_flip",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::AmplitudeDamping => "amplitude_damping",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter("unknown channel"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelAction {
    Kraus(Vec<Operator>),
    /// `ρ ↦ p·(I/2 ⊗ Tr_q ρ) + (1 − p)ρ` on the target qubit.
    Replace { p: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseChannel {
    kind: ChannelKind,
    strength: f64,
    action: ChannelAction,
}

fn check_strength(strength: f64) -> Result<()> {
    if (0.0..=1.0).contains(&strength) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("noise strength must lie in [0, 1]"))
    }
}

impl NoiseChannel {
    pub fn new(kind: ChannelKind, strength: f64) -> Result<Self> {
        check_strength(strength)?;
        let action = match kind {
            ChannelKind::PhaseFlip => ChannelAction::Kraus(vec![
                scaled(&I, libm::sqrt(1.0 - strength)),
                scaled(&Z, libm::sqrt(strength)),
            ]),
            ChannelKind::AmplitudeDamping => ChannelAction::Kraus(vec![
                [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(libm::sqrt(1.0 - strength), 0.0)]],
                [[c(0.0, 0.0), c(libm::sqrt(strength), 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]],
            ]),
            ChannelKind::Depolarizing => ChannelAction::Replace { p: strength },
        };
        Ok(Self {
            kind,
            strength,
            action,
        })
    }

    /// `(1 − p)ρ + (p/3)(XρX + YρY + ZρZ)`.
    pub fn pauli_depolarizing(strength: f64) -> Result<Self> {
        check_strength(strength)?;
        let w = libm::sqrt(strength / 3.0);
        Ok(Self {
            kind: ChannelKind::Depolarizing,
            strength,
            action: ChannelAction::Kraus(vec![
                scaled(&I, libm::sqrt(1.0 - strength)),
                scaled(&X, w),
                scaled(&Y, w),
                scaled(&Z, w),
            ]),
        })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn action(&self) -> &ChannelAction {
        &self.action
    }

    /// Kraus operators of the channel. The affine depolarizing rule is
    /// rewritten as `{√(1 − 3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z}`.
    pub fn kraus_operators(&self) -> Vec<Operator> {
        match &self.action {
            ChannelAction::Kraus(ops) => ops.clone(),
            ChannelAction::Replace { p } => {
                let w = libm::sqrt(p / 4.0);
                vec![
                    scaled(&I, libm::sqrt(1.0 - 0.75 * p)),
                    scaled(&X, w),
                    scaled(&Y, w),
                    scaled(&Z, w),
                ]
            }
        }
    }
}

pub fn channel_kraus(kind: ChannelKind, strength: f64) -> Result<NoiseChannel> {
    NoiseChannel::new(kind, strength)
}

/// Applies `ch` to one qubit of `state`.
pub fn apply_channel(state: &DensityMatrix, qubit: usize, ch: &NoiseChannel) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    if qubit >= n {
        return Err(Error::QubitOutOfRange { qubit, n_qubits: n });
    }
    let out = match &ch.action {
        ChannelAction::Kraus(ops) => sum_conjugations(state, qubit, ops.iter().map(|op| (1.0, op))),
        // I/2 ⊗ Tr_q ρ = ¼(ρ + XρX + YρY + ZρZ)
        ChannelAction::Replace { p } => {
            let keep = 1.0 - p;
            let twirl = p / 4.0;
            sum_conjugations(
                state,
                qubit,
                [(keep + twirl, &I), (twirl, &X), (twirl, &Y), (twirl, &Z)].into_iter(),
            )
        }
    };
    Ok(out)
}

fn sum_conjugations<'a>(
    state: &DensityMatrix,
    qubit: usize,
    terms: impl Iterator<Item = (f64, &'a Operator)>,
) -> DensityMatrix {
    let mut acc = crate::CMatrix::zeros(state.dim());
    for (weight, op) in terms {
        if weight == 0.0 {
            continue;
        }
        acc = acc.add(&state.conjugate_local(qubit, op).matrix().scale(weight));
    }
    DensityMatrix::from_matrix_unchecked(state.n_qubits(), acc)
}

/// Rule-maker game for `state` at its preferred λ, with `kind` noise of
/// strength `d1` on Alice's qubit and `d2` on Bob's.
pub fn noisy_rulemaker_win(state: StateKind, kind: ChannelKind, d1: f64, d2: f64) -> Result<f64> {
    noisy_rulemaker_win_with(state, &NoiseChannel::new(kind, d1)?, &NoiseChannel::new(kind, d2)?)
}

pub fn noisy_rulemaker_win_with(state: StateKind, alice: &NoiseChannel, bob: &NoiseChannel) -> Result<f64> {
    let spec = state.rulemaker_game(state.preferred_lambda());
    let rho = apply_channel(&spec.shared_state, 0, alice)?;
    let rho = apply_channel(&rho, 1, bob)?;
    rulemaker_win_probability(&spec.with_state(rho)?)
}

/// Noisy win probabilities with exact coefficients.
pub fn closed_form_noisy(state: StateKind, kind: ChannelKind, d1: f64, d2: f64) -> Result<f64> {
    check_strength(d1)?;
    check_strength(d2)?;
    let root = libm::sqrt((1.0 - d1) * (1.0 - d2));
    Ok(match (state, kind) {
        (StateKind::W, ChannelKind::AmplitudeDamping) => 0.75 - d1 / 6.0 - d2 / 6.0 + root / 6.0,
        (StateKind::W, ChannelKind::Depolarizing) => {
            11.0 / 12.0 - 11.0 / 24.0 * (d1 + d2) + 11.0 / 48.0 * d1 * d2
        }
        (StateKind::W, ChannelKind::PhaseFlip) => 11.0 / 12.0 - (d1 + d2) / 3.0 + 2.0 / 3.0 * d1 * d2,
        (StateKind::Ghz, ChannelKind::AmplitudeDamping) => 0.5 + 0.5 * root,
        (StateKind::Ghz, ChannelKind::Depolarizing) => 1.0 - 0.75 * (d1 + d2) + 0.75 * d1 * d2,
        (StateKind::Ghz, ChannelKind::PhaseFlip) => 1.0 - d1 - d2 + 2.0 * d1 * d2,
    })
}

/// The same expressions with the rounded decimal coefficients as printed.
pub fn rounded_closed_form_noisy(state: StateKind, kind: ChannelKind, d1: f64, d2: f64) -> Result<f64> {
    check_strength(d1)?;
    check_strength(d2)?;
    let root = libm::sqrt((1.0 - d1) * (1.0 - d2));
    Ok(match (state, kind) {
        (StateKind::W, ChannelKind::AmplitudeDamping) => 0.75 - 0.1667 * (d1 + d2) + 0.1667 * root,
        (StateKind::W, ChannelKind::Depolarizing) => 0.91667 - 0.45833 * (d1 + d2) + 0.229167 * d1 * d2,
        (StateKind::W, ChannelKind::PhaseFlip) => 0.91667 - 0.333 * (d1 + d2) + 0.667 * d1 * d2,
        _ => closed_form_noisy(state, kind, d1, d2)?,
    })
}

/// Which simulation a closed form is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseVariant {
    PhaseFlip,
    AmplitudeDamping,
    DepolarizingAffine,
    DepolarizingPauli,
}

impl NoiseVariant {
    pub const ALL: [NoiseVariant; 4] = [
        NoiseVariant::PhaseFlip,
        NoiseVariant::AmplitudeDamping,
        NoiseVariant::DepolarizingAffine,
        NoiseVariant::DepolarizingPauli,
    ];

    pub fn kind(self) -> ChannelKind {
        match self {
            NoiseVariant::PhaseFlip => ChannelKind::PhaseFlip,
            NoiseVariant::AmplitudeDamping => ChannelKind::AmplitudeDamping,
            NoiseVariant::DepolarizingAffine | NoiseVariant::DepolarizingPauli => ChannelKind::Depolarizing,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseVariant::PhaseFlip => "phase_flip",
            NoiseVariant::AmplitudeDamping => "amplitude_damping",
            NoiseVariant::DepolarizingAffine => "depolarizing_affine",
            NoiseVariant::DepolarizingPauli => "depolarizing_pauli",
        }
    }

    pub fn channel(self, strength: f64) -> Result<NoiseChannel> {
        match self {
            NoiseVariant::DepolarizingPauli => NoiseChannel::pauli_depolarizing(strength),
            _ => NoiseChannel::new(self.kind(), strength),
        }
    }

    /// Depolarizing comparisons are reported but never fail verification.
    pub fn waived(self) -> bool {
        self.kind() == ChannelKind::Depolarizing
    }
}

impl fmt::Display for NoiseVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSample {
    pub d1: f64,
    pub d2: f64,
    pub simulated: f64,
    pub closed_form: f64,
}

impl NoiseSample {
    pub fn abs_dev(&self) -> f64 {
        (self.simulated - self.closed_form).abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseReport {
    pub state: StateKind,
    pub variant: NoiseVariant,
    pub max_dev: f64,
    pub argmax: (f64, f64),
    pub flagged: bool,
    pub waived: bool,
    pub samples: Vec<NoiseSample>,
}

/// Deviation above which a state/channel pair is flagged.
pub const NOISE_FLAG_TOL: f64 = 1e-6;

/// Compares simulation with [`closed_form_noisy`] on a `grid × grid` lattice
/// over `[0, 1]²`, for both states and every [`NoiseVariant`].
pub fn verify_noise_formulas(grid: usize) -> Result<Vec<NoiseReport>> {
    if grid < 2 {
        return Err(Error::InvalidParameter("grid needs at least two points"));
    }
    let step = 1.0 / (grid - 1) as f64;
    let mut reports = Vec::new();
    for state in [StateKind::W, StateKind::Ghz] {
        for variant in NoiseVariant::ALL {
            let mut samples = Vec::with_capacity(grid * grid);
            for i in 0..grid {
                for j in 0..grid {
                    let (d1, d2) = (i as f64 * step, j as f64 * step);
                    let simulated = noisy_rulemaker_win_with(state, &variant.channel(d1)?, &variant.channel(d2)?)?;
                    let closed_form = closed_form_noisy(state, variant.kind(), d1, d2)?;
                    samples.push(NoiseSample {
                        d1,
                        d2,
                        simulated,
                        closed_form,
                    });
                }
            }
            let worst = samples
                .iter()
                .fold(None::<&NoiseSample>, |best, s| match best {
                    Some(b) if b.abs_dev() >= s.abs_dev() => Some(b),
                    _ => Some(s),
                })
                .expect("grid is nonempty");
            let max_dev = worst.abs_dev();
            reports.push(NoiseReport {
                state,
                variant,
                max_dev,
                argmax: (worst.d1, worst.d2),
                flagged: max_dev > NOISE_FLAG_TOL,
                waived: variant.waived(),
                samples,
            });
        }
    }
    Ok(reports)
}
