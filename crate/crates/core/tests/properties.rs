use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use proptest::prelude::*;
use qgames_core::entanglement::three_tangle;
use qgames_core::games::{
    classical_max_win, multiplayer_game, vaidman_ghz_game, vaidman_w_game, MultiplayerGame, StateKind,
};
use qgames_core::noise::{apply_channel, noisy_rulemaker_win, ChannelKind, NoiseChannel};
use qgames_core::qss::{run_basic_qss, run_facilitated, CheatModel, Party, SessionConfig};
use qgames_core::qstate::{
    outcome_distribution, partial_trace, project_qubit, MeasurementBasis, PureState,
};

fn basis_strategy() -> impl Strategy<Value = MeasurementBasis> {
    prop_oneof![
        Just(MeasurementBasis::X),
        Just(MeasurementBasis::Y),
        Just(MeasurementBasis::Z),
        (0.0..std::f64::consts::PI).prop_map(MeasurementBasis::Param),
    ]
}

fn state_strategy(n: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            let amps = v.into_iter().map(|(a, b)| Complex64::new(a / norm, b / norm)).collect();
            PureState::new(n, amps).unwrap()
        })
}

fn sized_state() -> impl Strategy<Value = PureState> {
    (1usize..=4).prop_flat_map(state_strategy)
}

/// `e^{iα} Rz(β) Ry(γ) Rz(δ)`
fn unitary(alpha: f64, beta: f64, gamma: f64, delta: f64) -> [[Complex64; 2]; 2] {
    let e = |t: f64| Complex64::from_polar(1.0, t);
    let (c, s) = ((gamma / 2.0).cos(), (gamma / 2.0).sin());
    [
        [e(alpha - beta / 2.0 - delta / 2.0) * c, -e(alpha - beta / 2.0 + delta / 2.0) * s],
        [e(alpha + beta / 2.0 - delta / 2.0) * s, e(alpha + beta / 2.0 + delta / 2.0) * c],
    ]
}

fn angles() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.0..6.3f64, 0.0..6.3f64, 0.0..6.3f64, 0.0..6.3f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn born_distribution_is_complete(state in sized_state(), bases in prop::collection::vec(basis_strategy(), 4)) {
        let n = state.n_qubits();
        let dist = outcome_distribution(&state, &bases[..n]).unwrap();
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(dist.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn pure_and_density_distributions_agree(state in sized_state(), bases in prop::collection::vec(basis_strategy(), 4)) {
        let n = state.n_qubits();
        let from_pure = outcome_distribution(&state, &bases[..n]).unwrap();
        let from_density = outcome_distribution(&state.to_density(), &bases[..n]).unwrap();
        for (a, b) in from_pure.iter().zip(&from_density) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_probabilities_sum_to_one(state in sized_state(), basis in basis_strategy(), q in 0usize..4) {
        let q = q % state.n_qubits();
        let mut total = 0.0;
        for label in basis.labels() {
            if let Ok((p, post)) = project_qubit(&state, q, basis, label) {
                prop_assert!((post.trace() - 1.0).abs() < 1e-12);
                total += p;
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_keeps_trace_and_hermiticity(state in sized_state(), mask in 1usize..16) {
        let n = state.n_qubits();
        let keep: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let reduced = partial_trace(&state, &keep).unwrap();
        prop_assert_eq!(reduced.n_qubits(), keep.len());
        prop_assert!((reduced.trace() - 1.0).abs() < 1e-12);
        prop_assert!(reduced.hermiticity_defect() < 1e-12);
        prop_assert!(reduced.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn tangle_is_local_unitary_invariant(state in state_strategy(3), a in angles(), b in angles(), c in angles()) {
        let before = three_tangle(&state).unwrap().tau;
        prop_assert!((0.0..=1.0).contains(&before));
        let moved = state
            .apply_local(0, &unitary(a.0, a.1, a.2, a.3)).unwrap()
            .apply_local(1, &unitary(b.0, b.1, b.2, b.3)).unwrap()
            .apply_local(2, &unitary(c.0, c.1, c.2, c.3)).unwrap();
        let after = three_tangle(&moved).unwrap().tau;
        prop_assert!((before - after).abs() < 1e-8, "{} vs {}", before, after);
    }

    #[test]
    fn channels_are_cptp(state in (1usize..=3).prop_flat_map(state_strategy), strength in 0.0..=1.0f64, q in 0usize..3, k in 0usize..4) {
        let rho = state.to_density();
        let q = q % rho.n_qubits();
        let ch = match k {
            0 => NoiseChannel::new(ChannelKind::PhaseFlip, strength),
            1 => NoiseChannel::new(ChannelKind::AmplitudeDamping, strength),
            2 => NoiseChannel::new(ChannelKind::Depolarizing, strength),
            _ => NoiseChannel::pauli_depolarizing(strength),
        }.unwrap();
        let out = apply_channel(&rho, q, &ch).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        prop_assert!(out.hermiticity_defect() < 1e-12);
        prop_assert!(out.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn noisy_game_is_symmetric_in_alice_and_bob(d1 in 0.0..=1.0f64, d2 in 0.0..=1.0f64, k in 0usize..3, ghz in any::<bool>()) {
        let kind = ChannelKind::ALL[k];
        let state = if ghz { StateKind::Ghz } else { StateKind::W };
        let a = noisy_rulemaker_win(state, kind, d1, d2).unwrap();
        let b = noisy_rulemaker_win(state, kind, d2, d1).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn ghz_phase_flip_depends_on_odd_flips(d1 in 0.0..=1.0f64, d2 in 0.0..=1.0f64) {
        let p_odd = d1 + d2 - 2.0 * d1 * d2;
        let win = noisy_rulemaker_win(StateKind::Ghz, ChannelKind::PhaseFlip, d1, d2).unwrap();
        prop_assert!((win - (1.0 - p_odd)).abs() < 1e-10);
    }

    #[test]
    fn facilitated_sessions_are_deterministic(seed in any::<u64>(), rounds in 1usize..300, cheat in 0usize..3, ghz in any::<bool>()) {
        let cheat = [CheatModel::Honest, CheatModel::FlipAnnouncer(Party::Bob), CheatModel::RandomAnnouncer(Party::Alice)][cheat];
        let kind = if ghz { StateKind::Ghz } else { StateKind::W };
        let cfg = SessionConfig::new(rounds, kind, seed).with_cheat(cheat);
        prop_assert_eq!(run_facilitated(&cfg).unwrap(), run_facilitated(&cfg).unwrap());
    }

    #[test]
    fn basic_sessions_are_deterministic(seed in any::<u64>(), rounds in 1usize..300) {
        prop_assert_eq!(run_basic_qss(rounds, seed).unwrap(), run_basic_qss(rounds, seed).unwrap());
    }
}

#[test]
fn rounds_are_independent_of_session_length() {
    let short = run_facilitated(&SessionConfig::new(50, StateKind::W, 77)).unwrap();
    let long = run_facilitated(&SessionConfig::new(500, StateKind::W, 77)).unwrap();
    assert_eq!(short.records[..], long.records[..50]);
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn classical_value_is_player_permutation_invariant() {
    for game in [vaidman_ghz_game(), vaidman_w_game()] {
        let base = classical_max_win(&game).unwrap().probability;
        for perm in permutations(3) {
            let permuted = game.permute_players(&perm).unwrap();
            assert!((classical_max_win(&permuted).unwrap().probability - base).abs() < 1e-12);
        }
    }
    let g41 = multiplayer_game(MultiplayerGame::G4_1);
    let base = classical_max_win(&g41).unwrap().probability;
    for perm in permutations(4) {
        let permuted = g41.permute_players(&perm).unwrap();
        assert!((classical_max_win(&permuted).unwrap().probability - base).abs() < 1e-12);
    }
    assert!(g41.permute_players(&[0, 0, 1, 2]).is_err());
}

#[test]
fn reference_angles_are_consistent() {
    assert_eq!(StateKind::W.preferred_lambda(), FRAC_PI_2);
    assert_eq!(StateKind::Ghz.preferred_lambda(), FRAC_PI_4);
}
