//! Seeded Monte-Carlo sessions of two secret-sharing protocols.
//!
//! In the basic protocol three parties share a GHZ state and measure X or Y at
//! random. When the basis triple has an even number of Y's, Bob and Charlie
//! together can infer Alice's outcome.
//!
//! In the facilitated protocol Charlie measures his qubit of a W or GHZ state
//! in the parametrized basis. His outcome puts the round in control mode, where
//! Alice and Bob announce their outcomes for checking, or in message mode,
//! where they keep a shared key bit.
//!
//! Round `i` draws from `ChaCha8Rng` seeded with the session seed on stream
//! `i`, so each round is independent of how the others are scheduled.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::games::{ghz_rules, w_rules, GameSpec, Question, StateKind};
use crate::qstate::{outcome_distribution, standard_ghz, standard_w, MeasurementBasis, OutcomeLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn name(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum CheatModel {
    #[default]
    Honest,
    /// Announces a uniformly random outcome in control rounds.
    RandomAnnouncer(Party),
    /// Announces the negation of the measured outcome in control rounds.
    FlipAnnouncer(Party),
}

impl CheatModel {
    fn cheater(self) -> Option<Party> {
        match self {
            CheatModel::Honest => None,
            CheatModel::RandomAnnouncer(p) | CheatModel::FlipAnnouncer(p) => Some(p),
        }
    }
}

impl fmt::Display for CheatModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheatModel::Honest => f.write_str("honest"),
            CheatModel::RandomAnnouncer(p) => write!(f, "random:{}", p.name()),
            CheatModel::FlipAnnouncer(p) => write!(f, "flip:{}", p.name()),
        }
    }
}

/// Accepts `honest`, `random:<party>` and `flip:<party>`.
impl FromStr for CheatModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("honest") {
            return Ok(CheatModel::Honest);
        }
        let (model, party) = s.split_once(':').ok_or(Error::UnknownCheatModel)?;
        let party = if party.eq_ignore_ascii_case("alice") {
            Party::Alice
        } else if party.eq_ignore_ascii_case("bob") {
            Party::Bob
        } else {
            return Err(Error::UnknownCheatModel);
        };
        if model.eq_ignore_ascii_case("random") {
            Ok(CheatModel::RandomAnnouncer(party))
        } else if model.eq_ignore_ascii_case("flip") {
            Ok(CheatModel::FlipAnnouncer(party))
        } else {
            Err(Error::UnknownCheatModel)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SessionConfig {
    pub rounds: usize,
    pub state_kind: StateKind,
    pub cheat: CheatModel,
    pub seed: u64,
    /// Probability that a control round is checked.
    pub control_rate: f64,
}

impl SessionConfig {
    pub fn new(rounds: usize, state_kind: StateKind, seed: u64) -> Self {
        Self {
            rounds,
            state_kind,
            cheat: CheatModel::Honest,
            seed,
            control_rate: 1.0,
        }
    }

    pub fn with_cheat(mut self, cheat: CheatModel) -> Self {
        self.cheat = cheat;
        self
    }

    pub fn with_control_rate(mut self, control_rate: f64) -> Self {
        self.control_rate = control_rate;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidParameter("a session needs at least one round"));
        }
        if !(0.0..=1.0).contains(&self.control_rate) {
            return Err(Error::InvalidParameter("control rate must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RoundMode {
    Message,
    Control,
    Discarded,
}

impl RoundMode {
    pub fn name(self) -> &'static str {
        match self {
            RoundMode::Message => "message",
            RoundMode::Control => "control",
            RoundMode::Discarded => "discarded",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub index: usize,
    pub mode: RoundMode,
    pub alice_basis: Question,
    pub bob_basis: Question,
    /// Charlie's outcome; `None` for discarded rounds.
    pub charlie: Option<OutcomeLabel>,
    /// Outcomes as announced (control) or kept (message).
    pub alice_out: Option<i8>,
    pub bob_out: Option<i8>,
    /// Whether Charlie checked this control round.
    pub verified: bool,
    /// Whether a checked control round satisfied the control rule.
    pub compliant: Option<bool>,
    /// Shared key bit of a message round, from Alice's side.
    pub key_bit: Option<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    CheatingSuspected,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Accepted => "Accepted",
            Verdict::CheatingSuspected => "CheatingSuspected",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionResult {
    pub config: SessionConfig,
    pub records: Vec<RoundRecord>,
    pub key_bits: Vec<u8>,
    pub control_checked: usize,
    pub control_passed: usize,
    /// `control_passed / control_checked`; 1 when nothing was checked.
    pub compliance_rate: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    /// Fraction of rounds with matching bases.
    pub sifted_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedKey {
    pub alice: Vec<u8>,
    pub bob: Vec<u8>,
}

impl SharedKey {
    pub fn agree(&self) -> bool {
        self.alice == self.bob
    }
}

/// Key bit of a `±1` outcome: `+1 ↦ 0`, `−1 ↦ 1`.
pub fn key_bit(outcome: i8) -> u8 {
    u8::from(outcome < 0)
}

/// Required `M_A·M_B` for the control and message rule sets of `kind`.
fn mode_rules(kind: StateKind) -> (GameSpec, GameSpec) {
    match kind {
        // control on |1⟩ = b₁, message on |0⟩ = b₀
        StateKind::W => {
            let (b0, b1) = w_rules();
            (b1, b0)
        }
        // control on |−⟩ = b₀, message on |+⟩ = b₁
        StateKind::Ghz => ghz_rules(),
    }
}

fn control_outcome(kind: StateKind) -> OutcomeLabel {
    match kind {
        StateKind::W => OutcomeLabel::B1,
        StateKind::Ghz => OutcomeLabel::B0,
    }
}

fn basis_pair(kind: StateKind) -> [Question; 2] {
    match kind {
        StateKind::W => [Question::X, Question::Z],
        StateKind::Ghz => [Question::X, Question::Y],
    }
}

/// Bit Bob derives from his own outcome: he flips it when the message rule
/// for the shared basis requires `M_A·M_B = −1`.
pub fn bob_key_bit(kind: StateKind, basis: Question, bob_out: i8) -> Result<u8> {
    let (_, message) = mode_rules(kind);
    let product = message
        .required_product(&[basis, basis])
        .ok_or(Error::InvalidParameter("basis not used by this protocol"))?;
    Ok(key_bit(bob_out * product))
}

/// Compliance needed to accept a session with `checked` control rounds.
///
/// GHZ control rounds are deterministic, so every one must pass. W rounds
/// pass with probability 3/4; the threshold is lowered by three binomial
/// standard deviations.
pub fn compliance_threshold(kind: StateKind, checked: usize) -> f64 {
    match kind {
        StateKind::Ghz => 1.0,
        StateKind::W if checked == 0 => 0.75,
        StateKind::W => 0.75 - 3.0 * libm::sqrt(0.75 * 0.25 / checked as f64),
    }
}

fn round_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn sample_index(dist: &[f64], u: f64) -> usize {
    let total: f64 = dist.iter().sum();
    let mut acc = 0.0;
    let target = u * total;
    for (i, p) in dist.iter().enumerate() {
        acc += p;
        if target < acc {
            return i;
        }
    }
    dist.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

fn sign_of_bit(bit: usize) -> i8 {
    if bit == 1 {
        -1
    } else {
        1
    }
}

pub fn run_facilitated(config: &SessionConfig) -> Result<SessionResult> {
    config.validate()?;
    let kind = config.state_kind;
    let (state, lambda) = match kind {
        StateKind::W => (standard_w().to_density(), kind.preferred_lambda()),
        StateKind::Ghz => (standard_ghz().to_density(), kind.preferred_lambda()),
    };
    let pair = basis_pair(kind);
    let (control_rules, message_rules) = mode_rules(kind);
    let control_label = control_outcome(kind);
    let dists = pair
        .iter()
        .map(|q| outcome_distribution(&state, &[q.basis(), q.basis(), MeasurementBasis::Param(lambda)]))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::with_capacity(config.rounds);
    for index in 0..config.rounds {
        let mut rng = round_rng(config.seed, index);
        let a_choice = usize::from(rng.random::<bool>());
        let b_choice = usize::from(rng.random::<bool>());
        let (alice_basis, bob_basis) = (pair[a_choice], pair[b_choice]);
        let mut record = RoundRecord {
            index,
            mode: RoundMode::Discarded,
            alice_basis,
            bob_basis,
            charlie: None,
            alice_out: None,
            bob_out: None,
            verified: false,
            compliant: None,
            key_bit: None,
        };
        if a_choice != b_choice {
            records.push(record);
            continue;
        }
        let outcome = sample_index(&dists[a_choice], rng.random::<f64>());
        let alice = sign_of_bit((outcome >> 2) & 1);
        let bob = sign_of_bit((outcome >> 1) & 1);
        let charlie = if outcome & 1 == 0 { OutcomeLabel::B0 } else { OutcomeLabel::B1 };
        record.charlie = Some(charlie);
        if charlie == control_label {
            record.mode = RoundMode::Control;
            record.verified = rng.random::<f64>() < config.control_rate;
            let cheat_draw = rng.random::<bool>();
            let corrupt = |out: i8| match config.cheat {
                CheatModel::Honest => out,
                CheatModel::FlipAnnouncer(_) => -out,
                CheatModel::RandomAnnouncer(_) => {
                    if cheat_draw {
                        1
                    } else {
                        -1
                    }
                }
            };
            let (alice, bob) = match config.cheat.cheater() {
                Some(Party::Alice) => (corrupt(alice), bob),
                Some(Party::Bob) => (alice, corrupt(bob)),
                None => (alice, bob),
            };
            record.alice_out = Some(alice);
            record.bob_out = Some(bob);
            if record.verified {
                let required = control_rules
                    .required_product(&[alice_basis, bob_basis])
                    .expect("matched basis has a rule");
                record.compliant = Some(alice * bob == required);
            }
        } else {
            debug_assert!(message_rules.required_product(&[alice_basis, bob_basis]).is_some());
            record.mode = RoundMode::Message;
            record.alice_out = Some(alice);
            record.bob_out = Some(bob);
            record.key_bit = Some(key_bit(alice));
        }
        records.push(record);
    }
    Ok(summarize(*config, records))
}

fn summarize(config: SessionConfig, records: Vec<RoundRecord>) -> SessionResult {
    let control_checked = records.iter().filter(|r| r.compliant.is_some()).count();
    let control_passed = records.iter().filter(|r| r.compliant == Some(true)).count();
    let compliance_rate = if control_checked == 0 {
        1.0
    } else {
        control_passed as f64 / control_checked as f64
    };
    let threshold = compliance_threshold(config.state_kind, control_checked);
    let verdict = if compliance_rate < threshold {
        Verdict::CheatingSuspected
    } else {
        Verdict::Accepted
    };
    let sifted = records.iter().filter(|r| r.mode != RoundMode::Discarded).count();
    SessionResult {
        config,
        key_bits: records.iter().filter_map(|r| r.key_bit).collect(),
        sifted_fraction: sifted as f64 / records.len() as f64,
        records,
        control_checked,
        control_passed,
        compliance_rate,
        threshold,
        verdict,
    }
}

/// Alice's and Bob's key strings from the message rounds of an accepted
/// session.
pub fn extract_key(result: &SessionResult) -> Result<SharedKey> {
    if result.verdict == Verdict::CheatingSuspected {
        return Err(Error::CheatingSuspected);
    }
    let kind = result.config.state_kind;
    let mut key = SharedKey {
        alice: Vec::new(),
        bob: Vec::new(),
    };
    for r in result.records.iter().filter(|r| r.mode == RoundMode::Message) {
        let (Some(a), Some(b)) = (r.alice_out, r.bob_out) else {
            continue;
        };
        key.alice.push(key_bit(a));
        key.bob.push(bob_key_bit(kind, r.bob_basis, b)?);
    }
    Ok(key)
}

/// Alice's outcome implied by Bob's and Charlie's for an accepted basis
/// triple: `XXX` has product `+1`, the others `−1`.
pub fn infer_alice_outcome(bases: [Question; 3], bob: i8, charlie: i8) -> Result<i8> {
    let product = match bases {
        [Question::X, Question::X, Question::X] => 1,
        [Question::X, Question::Y, Question::Y]
        | [Question::Y, Question::X, Question::Y]
        | [Question::Y, Question::Y, Question::X] => -1,
        _ => return Err(Error::InvalidParameter("basis triple is not accepted")),
    };
    Ok(product * bob * charlie)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasicRound {
    pub index: usize,
    pub bases: [Question; 3],
    /// `(alice, bob, charlie)` outcomes; `None` for discarded rounds.
    pub outcomes: Option<[i8; 3]>,
    pub inferred_alice: Option<i8>,
}

impl BasicRound {
    pub fn accepted(&self) -> bool {
        self.outcomes.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasicResult {
    pub seed: u64,
    pub rounds: Vec<BasicRound>,
    pub sifted: usize,
    pub agreements: usize,
    pub sifted_fraction: f64,
    /// Fraction of sifted rounds where the inferred bit equals Alice's.
    pub agreement_rate: f64,
}

impl BasicResult {
    pub fn alice_key(&self) -> Vec<u8> {
        self.rounds
            .iter()
            .filter_map(|r| r.outcomes.map(|o| key_bit(o[0])))
            .collect()
    }

    pub fn inferred_key(&self) -> Vec<u8> {
        self.rounds.iter().filter_map(|r| r.inferred_alice.map(key_bit)).collect()
    }
}

pub fn run_basic_qss(rounds: usize, seed: u64) -> Result<BasicResult> {
    if rounds == 0 {
        return Err(Error::InvalidParameter("a session needs at least one round"));
    }
    let ghz = standard_ghz();
    let accepted: [[Question; 3]; 4] = [
        [Question::X, Question::X, Question::X],
        [Question::X, Question::Y, Question::Y],
        [Question::Y, Question::X, Question::Y],
        [Question::Y, Question::Y, Question::X],
    ];
    let dists = accepted
        .iter()
        .map(|b| outcome_distribution(&ghz, &[b[0].basis(), b[1].basis(), b[2].basis()]))
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(rounds);
    for index in 0..rounds {
        let mut rng = round_rng(seed, index);
        let bases: [Question; 3] =
            core::array::from_fn(|_| if rng.random::<bool>() { Question::Y } else { Question::X });
        let mut round = BasicRound {
            index,
            bases,
            outcomes: None,
            inferred_alice: None,
        };
        if let Some(k) = accepted.iter().position(|b| *b == bases) {
            let outcome = sample_index(&dists[k], rng.random::<f64>());
            let o = [
                sign_of_bit((outcome >> 2) & 1),
                sign_of_bit((outcome >> 1) & 1),
                sign_of_bit(outcome & 1),
            ];
            round.outcomes = Some(o);
            round.inferred_alice = Some(infer_alice_outcome(bases, o[1], o[2])?);
        }
        out.push(round);
    }
    let sifted = out.iter().filter(|r| r.accepted()).count();
    let agreements = out
        .iter()
        .filter(|r| matches!((r.outcomes, r.inferred_alice), (Some(o), Some(a)) if o[0] == a))
        .count();
    Ok(BasicResult {
        seed,
        sifted,
        agreements,
        sifted_fraction: sifted as f64 / rounds as f64,
        agreement_rate: if sifted == 0 {
            1.0
        } else {
            agreements as f64 / sifted as f64
        },
        rounds: out,
    })
}
