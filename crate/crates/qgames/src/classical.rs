//! Classical bounds of the shipped games against the published values.

use std::fmt::Write as _;

use anyhow::{anyhow, Result};
use qgames_core::games::{
    classical_max_win, multiplayer_game, vaidman_ghz_game, vaidman_w_game, ClassicalOptimum, GameSpec,
    MultiplayerGame,
};

use crate::format::fmt_g;

/// Published values agree with exact fractions to this many decimals.
pub const PUBLISHED_MATCH_TOL: f64 = 5e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameId {
    VaidmanGhz,
    VaidmanW,
    Multi(MultiplayerGame),
}

impl GameId {
    pub fn all() -> Vec<GameId> {
        let mut ids = vec![GameId::VaidmanGhz, GameId::VaidmanW];
        ids.extend(MultiplayerGame::ALL.into_iter().map(GameId::Multi));
        ids
    }

    pub fn name(self) -> &'static str {
        match self {
            GameId::VaidmanGhz => "vaidman_ghz",
            GameId::VaidmanW => "vaidman_w",
            GameId::Multi(g) => g.name(),
        }
    }

    pub fn game(self) -> GameSpec {
        match self {
            GameId::VaidmanGhz => vaidman_ghz_game(),
            GameId::VaidmanW => vaidman_w_game(),
            GameId::Multi(g) => multiplayer_game(g),
        }
    }

    /// Published classical value, with its printed text.
    pub fn published_value(self) -> (f64, &'static str) {
        match self {
            GameId::VaidmanGhz | GameId::VaidmanW => (0.75, "3/4"),
            GameId::Multi(MultiplayerGame::G4_1) => (0.8517, "0.8517"),
            GameId::Multi(MultiplayerGame::G5_1) => (0.909, "0.909"),
            GameId::Multi(MultiplayerGame::G5_2) => (0.6667, "0.6667"),
            GameId::Multi(MultiplayerGame::G6_1) => (0.9375, "0.9375"),
            GameId::Multi(MultiplayerGame::G6_2) => (0.5, "0.5"),
            GameId::Multi(MultiplayerGame::G6_3) => (0.9375, "0.9375"),
        }
    }

    /// Published n-tangle threshold above which quantum play wins more often.
    pub fn published_threshold(self) -> Option<f64> {
        match self {
            GameId::VaidmanGhz => Some(0.25),
            GameId::VaidmanW => None,
            GameId::Multi(MultiplayerGame::G4_1) => Some(0.51),
            GameId::Multi(MultiplayerGame::G5_1) => Some(0.67),
            GameId::Multi(MultiplayerGame::G5_2) => Some(0.11),
            GameId::Multi(MultiplayerGame::G6_1) => Some(0.765),
            GameId::Multi(MultiplayerGame::G6_2) => Some(0.0),
            GameId::Multi(MultiplayerGame::G6_3) => Some(0.765),
        }
    }
}

impl std::str::FromStr for GameId {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        GameId::all()
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| anyhow!("unknown game `{s}`"))
    }
}

/// n-tangle above which `½(1 + √τ)` beats classical value `c`: `(2c − 1)²`.
pub fn tangle_threshold(classical: f64) -> f64 {
    let x = (2.0 * classical - 1.0).max(0.0);
    x * x
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalReport {
    pub name: String,
    pub optimum: ClassicalOptimum,
    pub n_players: usize,
    /// `(value, printed text, matches)` when a published value exists.
    pub published: Option<(f64, &'static str, bool)>,
}

pub fn classical_report(name: &str, game: &GameSpec, published: Option<(f64, &'static str)>) -> Result<ClassicalReport> {
    let optimum = classical_max_win(game)?;
    let published = published.map(|(v, text)| (v, text, (optimum.probability - v).abs() <= PUBLISHED_MATCH_TOL));
    Ok(ClassicalReport {
        name: name.to_string(),
        n_players: game.n_players(),
        optimum,
        published,
    })
}

pub fn report_for(id: GameId) -> Result<ClassicalReport> {
    classical_report(id.name(), &id.game(), Some(id.published_value()))
}

impl ClassicalReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let o = &self.optimum;
        writeln!(out, "game: {}", self.name).unwrap();
        writeln!(out, "players: {}", self.n_players).unwrap();
        match o.exact {
            Some(f) => writeln!(out, "classical: {f} = {}", fmt_g(o.probability)).unwrap(),
            None => writeln!(out, "classical: {}", fmt_g(o.probability)).unwrap(),
        }
        writeln!(out, "tau_threshold: {}", fmt_g(tangle_threshold(o.probability))).unwrap();
        if let Some((_, text, matches)) = self.published {
            writeln!(out, "published: {text}").unwrap();
            writeln!(out, "status: {}", if matches { "MATCH" } else { "DISCREPANCY" }).unwrap();
        }
        writeln!(out, "strategy:").unwrap();
        let labels: Vec<String> = o.strategy.labels().iter().map(|q| q.letter().to_string()).collect();
        writeln!(out, "player {}", labels.join(" ")).unwrap();
        for (p, answers) in o.strategy.answers().iter().enumerate() {
            let cells: Vec<&str> = answers.iter().map(|&a| if a > 0 { "+1" } else { "-1" }).collect();
            writeln!(out, "{p} {}", cells.join(" ")).unwrap();
        }
        out
    }
}
