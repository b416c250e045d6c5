//! Vaidman-type parity games.
//!
//! A [`GameSpec`] lists question tuples (one basis letter per player), the
//! required product of the ±1 answers and the probability of each tuple. The
//! quantum strategy is fixed: every player measures her qubit in the asked
//! basis and answers with the outcome sign. [`quantum_win_probability`] sums
//! Born probabilities over every outcome tuple; [`classical_max_win`]
//! enumerates every deterministic local strategy. Mixed classical strategies
//! cannot do better because the objective is linear in the strategy weights.
//!
//! Rule-maker games add one more entangled party who measures in the
//! λ-parametrized basis; the outcome selects which rule set the others play.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::qstate::{
    make_ghz_general, outcome_distribution, partial_trace, project_qubit, standard_ghz, standard_w,
    AsDensity, DensityMatrix, MeasurementBasis, OutcomeLabel,
};

const WEIGHT_TOL: f64 = 1e-12;
/// Largest classical strategy space searched, as a power of two.
pub const MAX_STRATEGY_BITS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Question {
    X,
    Y,
    Z,
}

impl Question {
    pub fn basis(self) -> MeasurementBasis {
        match self {
            Question::X => MeasurementBasis::X,
            Question::Y => MeasurementBasis::Y,
            Question::Z => MeasurementBasis::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Question::X => 'X',
            Question::Y => 'Y',
            Question::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'X' => Some(Question::X),
            'Y' => Some(Question::Y),
            'Z' => Some(Question::Z),
            _ => None,
        }
    }
}

/// Parses a basis string such as `"XYY"`.
pub fn parse_questions(s: &str) -> Result<Vec<Question>> {
    s.chars()
        .map(|c| Question::from_letter(c).ok_or(Error::InvalidGame("basis letters must be X, Y or Z")))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Round {
    pub questions: Vec<Question>,
    pub required_product: i8,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameSpec {
    n_players: usize,
    rounds: Vec<Round>,
}

impl GameSpec {
    pub fn new(n_players: usize, rounds: Vec<Round>) -> Result<Self> {
        if n_players < 2 {
            return Err(Error::InvalidGame("a game needs at least two players"));
        }
        if rounds.is_empty() {
            return Err(Error::InvalidGame("a game needs at least one round"));
        }
        for (i, round) in rounds.iter().enumerate() {
            if round.questions.len() != n_players {
                return Err(Error::InvalidGame("question tuple length differs from player count"));
            }
            if round.required_product != 1 && round.required_product != -1 {
                return Err(Error::InvalidGame("required product must be +1 or -1"));
            }
            if !(round.weight.is_finite() && round.weight >= 0.0) {
                return Err(Error::InvalidGame("weights must be finite and nonnegative"));
            }
            if rounds[..i].iter().any(|r| r.questions == round.questions) {
                return Err(Error::InvalidGame("question tuples must be distinct"));
            }
        }
        let total: f64 = rounds.iter().map(|r| r.weight).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidGame("weights must sum to 1"));
        }
        Ok(Self { n_players, rounds })
    }

    /// Uniform distribution over `(basis string, required product)` rows.
    pub fn uniform(rows: &[(&str, i8)]) -> Result<Self> {
        let n_players = rows.first().map_or(0, |(q, _)| q.len());
        let weight = 1.0 / rows.len() as f64;
        let rounds = rows
            .iter()
            .map(|&(q, required_product)| {
                Ok(Round {
                    questions: parse_questions(q)?,
                    required_product,
                    weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_players, rounds)
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    /// Distinct question labels used anywhere in the game, sorted.
    pub fn labels(&self) -> Vec<Question> {
        let mut labels: Vec<Question> = self
            .rounds
            .iter()
            .flat_map(|r| r.questions.iter().copied())
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Same game with player `i` of the new game playing role `perm[i]` of the
    /// old one.
    pub fn permute_players(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n_players];
        if perm.len() != self.n_players || perm.iter().any(|&p| p >= self.n_players || core::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidParameter("not a permutation of the players"));
        }
        let rounds = self
            .rounds
            .iter()
            .map(|r| Round {
                questions: perm.iter().map(|&p| r.questions[p]).collect(),
                ..r.clone()
            })
            .collect();
        Self::new(self.n_players, rounds)
    }

    /// The rule set with every required product negated.
    pub fn negated(&self) -> Self {
        Self {
            n_players: self.n_players,
            rounds: self
                .rounds
                .iter()
                .map(|r| Round {
                    required_product: -r.required_product,
                    ..r.clone()
                })
                .collect(),
        }
    }

    pub fn required_product(&self, questions: &[Question]) -> Option<i8> {
        self.rounds
            .iter()
            .find(|r| r.questions == questions)
            .map(|r| r.required_product)
    }
}

/// Deterministic local strategy: an answer for every (player, label).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalStrategy {
    labels: Vec<Question>,
    answers: Vec<Vec<i8>>,
}

impl ClassicalStrategy {
    pub fn labels(&self) -> &[Question] {
        &self.labels
    }

    /// `answers()[player][label index]`
    pub fn answers(&self) -> &[Vec<i8>] {
        &self.answers
    }

    pub fn answer(&self, player: usize, question: Question) -> Option<i8> {
        let l = self.labels.iter().position(|&q| q == question)?;
        self.answers.get(player).map(|a| a[l])
    }

    pub fn win_probability(&self, game: &GameSpec) -> f64 {
        game.rounds
            .iter()
            .filter(|r| {
                let product: i8 = r
                    .questions
                    .iter()
                    .enumerate()
                    .map(|(p, &q)| self.answer(p, q).unwrap_or(1))
                    .product();
                product == r.required_product
            })
            .map(|r| r.weight)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub numer: u64,
    pub denom: u64,
}

impl Fraction {
    pub fn new(numer: u64, denom: u64) -> Self {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(numer, denom).max(1);
        Self {
            numer: numer / g,
            denom: denom / g,
        }
    }

    pub fn value(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalOptimum {
    pub probability: f64,
    /// Exact value when every round has the same weight.
    pub exact: Option<Fraction>,
    pub strategy: ClassicalStrategy,
}

/// Exhaustive maximum over deterministic local strategies.
///
/// Strategies are enumerated in lexicographic order over (player, label)
/// with `+1` before `−1`; the first maximizer wins ties.
pub fn classical_max_win(game: &GameSpec) -> Result<ClassicalOptimum> {
    let labels = game.labels();
    let n = game.n_players;
    let per_player = labels.len();
    let bits = n * per_player;
    if bits > MAX_STRATEGY_BITS {
        return Err(Error::StrategySpaceTooLarge(bits));
    }
    // Per round: bit positions (from the MSB end) of the asked (player, label).
    let rounds: Vec<(Vec<usize>, bool, f64)> = game
        .rounds
        .iter()
        .map(|r| {
            let positions = r
                .questions
                .iter()
                .enumerate()
                .map(|(p, q)| {
                    let l = labels.binary_search(q).expect("label collected from game");
                    bits - 1 - (p * per_player + l)
                })
                .collect();
            (positions, r.required_product == -1, r.weight)
        })
        .collect();

    let mut best_value = -1.0;
    let mut best_index = 0usize;
    let mut best_wins = 0u64;
    for index in 0..(1usize << bits) {
        let mut value = 0.0;
        let mut wins = 0u64;
        for (positions, want_odd, weight) in &rounds {
            let odd = positions.iter().fold(false, |acc, &b| acc ^ ((index >> b) & 1 == 1));
            if odd == *want_odd {
                value += weight;
                wins += 1;
            }
        }
        if value > best_value + WEIGHT_TOL {
            best_value = value;
            best_index = index;
            best_wins = wins;
        }
    }

    let answers = (0..n)
        .map(|p| {
            (0..per_player)
                .map(|l| {
                    if (best_index >> (bits - 1 - (p * per_player + l))) & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .collect()
        })
        .collect();
    let uniform = game
        .rounds
        .iter()
        .all(|r| (r.weight - game.rounds[0].weight).abs() <= WEIGHT_TOL);
    Ok(ClassicalOptimum {
        probability: best_value,
        exact: uniform.then(|| Fraction::new(best_wins, game.rounds.len() as u64)),
        strategy: ClassicalStrategy { labels, answers },
    })
}

/// Win probability of the measure-in-the-asked-basis strategy.
pub fn quantum_win_probability(state: &impl AsDensity, game: &GameSpec) -> Result<f64> {
    if state.qubit_count() != game.n_players {
        return Err(Error::DimensionMismatch {
            expected: game.n_players,
            found: state.qubit_count(),
        });
    }
    let mut total = 0.0;
    for round in &game.rounds {
        let bases: Vec<MeasurementBasis> = round.questions.iter().map(|q| q.basis()).collect();
        let dist = outcome_distribution(state, &bases)?;
        // outcome index bit 1 means answer −1, so the product is the parity
        let want_odd = round.required_product == -1;
        let won: f64 = dist
            .iter()
            .enumerate()
            .filter(|(idx, _)| (idx.count_ones() % 2 == 1) == want_odd)
            .map(|(_, p)| p)
            .sum();
        total += round.weight * won;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// The three-player GHZ game: XXX → +1; XYY, YXY, YYX → −1; uniform.
pub fn vaidman_ghz_game() -> GameSpec {
    GameSpec::uniform(&[("XXX", 1), ("XYY", -1), ("YXY", -1), ("YYX", -1)]).expect("valid game")
}

/// The three-player W game: ZZZ → −1; ZYY, YZY, YYZ → +1; uniform.
pub fn vaidman_w_game() -> GameSpec {
    GameSpec::uniform(&[("ZZZ", -1), ("ZYY", 1), ("YZY", 1), ("YYZ", 1)]).expect("valid game")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultiplayerGame {
    G4_1,
    G5_1,
    G5_2,
    G6_1,
    G6_2,
    G6_3,
}

impl MultiplayerGame {
    pub const ALL: [MultiplayerGame; 6] = [
        MultiplayerGame::G4_1,
        MultiplayerGame::G5_1,
        MultiplayerGame::G5_2,
        MultiplayerGame::G6_1,
        MultiplayerGame::G6_2,
        MultiplayerGame::G6_3,
    ];

    pub fn n_players(self) -> usize {
        match self {
            MultiplayerGame::G4_1 => 4,
            MultiplayerGame::G5_1 | MultiplayerGame::G5_2 => 5,
            _ => 6,
        }
    }

    /// `(number of Y questions, required product)` for each row class.
    fn row_classes(self) -> &'static [(u32, i8)] {
        match self {
            MultiplayerGame::G4_1 | MultiplayerGame::G5_1 | MultiplayerGame::G6_1 => &[(0, -1), (2, 1)],
            MultiplayerGame::G5_2 | MultiplayerGame::G6_2 => &[(2, 1), (4, -1)],
            MultiplayerGame::G6_3 => &[(4, -1), (6, 1)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MultiplayerGame::G4_1 => "G4_1",
            MultiplayerGame::G5_1 => "G5_1",
            MultiplayerGame::G5_2 => "G5_2",
            MultiplayerGame::G6_1 => "G6_1",
            MultiplayerGame::G6_2 => "G6_2",
            MultiplayerGame::G6_3 => "G6_3",
        }
    }
}

impl fmt::Display for MultiplayerGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MultiplayerGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MultiplayerGame::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or(Error::UnknownGame)
    }
}

/// Four- to six-player generalizations: every X/Y tuple whose Y count is in
/// one of the game's row classes, uniform weights.
pub fn multiplayer_game(id: MultiplayerGame) -> GameSpec {
    let n = id.n_players();
    let classes = id.row_classes();
    let weightless: Vec<(Vec<Question>, i8)> = (0..(1u32 << n))
        .filter_map(|mask| {
            let ys = mask.count_ones();
            let &(_, product) = classes.iter().find(|(k, _)| *k == ys)?;
            let questions = (0..n)
                .map(|p| {
                    if (mask >> (n - 1 - p)) & 1 == 1 {
                        Question::Y
                    } else {
                        Question::X
                    }
                })
                .collect();
            Some((questions, product))
        })
        .collect();
    let weight = 1.0 / weightless.len() as f64;
    let rounds = weightless
        .into_iter()
        .map(|(questions, required_product)| Round {
            questions,
            required_product,
            weight,
        })
        .collect();
    GameSpec::new(n, rounds).expect("valid generated game")
}

/// Phase sign of `sinθ|0…0⟩ ± cosθ|1…1⟩` under which the maximally entangled
/// state wins `game` with certainty; `None` if neither sign does.
pub fn ghz_phase_for(game: &GameSpec) -> Option<i8> {
    [1i8, -1].into_iter().find(|&sign| {
        make_ghz_general(FRAC_PI_4, game.n_players, sign)
            .ok()
            .and_then(|s| quantum_win_probability(&s, game).ok())
            .is_some_and(|p| (p - 1.0).abs() < 1e-9)
    })
}

pub fn closed_form_ghz_win(theta: f64) -> f64 {
    0.5 * (1.0 + libm::sin(2.0 * theta))
}

/// `¼(5/2 + ab + bc + ca)` for real nonnegative W-family amplitudes.
pub fn closed_form_w_win(a: f64, b: f64, c: f64) -> Result<f64> {
    if [a, b, c].iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidParameter("amplitudes must be real and nonnegative"));
    }
    if (a * a + b * b + c * c - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(a * a + b * b + c * c));
    }
    Ok(0.25 * (2.5 + a * b + b * c + c * a))
}

/// `(5 + 5n + √(n+1) + √n(√(n+1) + 1)) / (8(n+1))`; valid for zero phases.
pub fn closed_form_wn_win(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("W_n needs n >= 1"));
    }
    let n = f64::from(n);
    let r1 = libm::sqrt(n + 1.0);
    let rn = libm::sqrt(n);
    Ok((5.0 + 5.0 * n + r1 + rn * (r1 + 1.0)) / (8.0 * (n + 1.0)))
}

/// Shared resource of the three-party rule-maker game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateKind {
    W,
    Ghz,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::W => "W",
            StateKind::Ghz => "GHZ",
        }
    }

    /// Ruler angle at which the noiseless game is won most often.
    pub fn preferred_lambda(self) -> f64 {
        match self {
            StateKind::W => core::f64::consts::FRAC_PI_2,
            StateKind::Ghz => FRAC_PI_4,
        }
    }

    pub fn rulemaker_game(self, lambda: f64) -> RuleMakerSpec {
        match self {
            StateKind::W => RuleMakerSpec::w_game(lambda),
            StateKind::Ghz => RuleMakerSpec::ghz_game(lambda),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [StateKind::W, StateKind::Ghz]
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter("state must be W or GHZ"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RuleMakerSpec {
    pub shared_state: DensityMatrix,
    pub ruler_qubit: usize,
    pub lambda: f64,
    pub rules_b0: GameSpec,
    pub rules_b1: GameSpec,
}

impl RuleMakerSpec {
    pub fn new(
        shared_state: DensityMatrix,
        ruler_qubit: usize,
        lambda: f64,
        rules_b0: GameSpec,
        rules_b1: GameSpec,
    ) -> Result<Self> {
        let n = shared_state.n_qubits();
        if ruler_qubit >= n {
            return Err(Error::QubitOutOfRange {
                qubit: ruler_qubit,
                n_qubits: n,
            });
        }
        for rules in [&rules_b0, &rules_b1] {
            if rules.n_players() + 1 != n {
                return Err(Error::DimensionMismatch {
                    expected: n - 1,
                    found: rules.n_players(),
                });
            }
        }
        Ok(Self {
            shared_state,
            ruler_qubit,
            lambda,
            rules_b0,
            rules_b1,
        })
    }

    /// Standard W state, Charlie (qubit 2) rules with X/Z questions.
    pub fn w_game(lambda: f64) -> Self {
        let (b0, b1) = w_rules();
        Self::new(standard_w().to_density(), 2, lambda, b0, b1).expect("valid W rule-maker game")
    }

    /// Standard GHZ state, Charlie (qubit 2) rules with X/Y questions.
    pub fn ghz_game(lambda: f64) -> Self {
        let (b0, b1) = ghz_rules();
        Self::new(standard_ghz().to_density(), 2, lambda, b0, b1).expect("valid GHZ rule-maker game")
    }

    /// `(|0000⟩ − |1111⟩)/√2`, Dave (qubit 3) rules three players.
    pub fn four_qubit_game(lambda: f64) -> Self {
        let state = make_ghz_general(FRAC_PI_4, 4, -1).expect("valid 4-qubit GHZ");
        let (b0, b1) = four_qubit_rules();
        Self::new(state.to_density(), 3, lambda, b0, b1).expect("valid 4-qubit rule-maker game")
    }

    pub fn with_state(&self, shared_state: DensityMatrix) -> Result<Self> {
        Self::new(
            shared_state,
            self.ruler_qubit,
            self.lambda,
            self.rules_b0.clone(),
            self.rules_b1.clone(),
        )
    }
}

/// Rules for the W rule-maker game: `b₀`: XX = +1, ZZ = −1; `b₁`: XX = −1, ZZ = +1.
pub fn w_rules() -> (GameSpec, GameSpec) {
    let b0 = GameSpec::uniform(&[("XX", 1), ("ZZ", -1)]).expect("valid rules");
    let b1 = b0.negated();
    (b0, b1)
}

/// Rules for the GHZ rule-maker game: `b₀`: XX = −1, YY = +1; `b₁`: XX = +1, YY = −1.
pub fn ghz_rules() -> (GameSpec, GameSpec) {
    let b0 = GameSpec::uniform(&[("XX", -1), ("YY", 1)]).expect("valid rules");
    let b1 = b0.negated();
    (b0, b1)
}

/// Rules for the four-qubit game: `b₀` is the three-player GHZ game, `b₁` its negation.
pub fn four_qubit_rules() -> (GameSpec, GameSpec) {
    let b0 = vaidman_ghz_game();
    let b1 = b0.negated();
    (b0, b1)
}

/// `Σ_o P(o) · win(residual | o)` over the ruler's two outcomes. A
/// zero-probability outcome contributes nothing.
pub fn rulemaker_win_probability(spec: &RuleMakerSpec) -> Result<f64> {
    let n = spec.shared_state.n_qubits();
    let keep: Vec<usize> = (0..n).filter(|&q| q != spec.ruler_qubit).collect();
    let basis = MeasurementBasis::Param(spec.lambda);
    let mut total = 0.0;
    for (label, rules) in [(OutcomeLabel::B0, &spec.rules_b0), (OutcomeLabel::B1, &spec.rules_b1)] {
        match project_qubit(&spec.shared_state, spec.ruler_qubit, basis, label) {
            Ok((p, post)) => {
                let residual = partial_trace(&post, &keep)?;
                total += p * quantum_win_probability(&residual, rules)?;
            }
            Err(Error::ZeroProbability) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

pub fn closed_form_rulemaker_w(lambda: f64) -> f64 {
    let c = libm::cos(lambda);
    11.0 / 12.0 - 5.0 / 6.0 * c * c
}

pub fn closed_form_rulemaker_ghz(lambda: f64) -> f64 {
    0.5 * (1.0 + libm::sin(2.0 * lambda))
}

pub fn rulemaker_4qubit_game(lambda: f64) -> f64 {
    rulemaker_win_probability(&RuleMakerSpec::four_qubit_game(lambda)).expect("valid built-in game")
}
