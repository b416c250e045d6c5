//! Figure data as CSV tables.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use num_complex::Complex64;
use qgames_core::entanglement::{n_tangle_ghz_family, residual_concurrence_sum};
use qgames_core::games::{
    quantum_win_probability, rulemaker_4qubit_game, rulemaker_win_probability, vaidman_ghz_game,
    vaidman_w_game, RuleMakerSpec,
};
use qgames_core::noise::verify_noise_formulas;
use qgames_core::qstate::{make_ghz_general, make_w_general, make_wn};

use crate::format::{fmt_g, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepTarget {
    GhzGame,
    WGame,
    WnGame,
    RulemakerW,
    RulemakerGhz,
    Rulemaker4q,
    Noise,
}

impl SweepTarget {
    pub const ALL: [SweepTarget; 7] = [
        SweepTarget::GhzGame,
        SweepTarget::WGame,
        SweepTarget::WnGame,
        SweepTarget::RulemakerW,
        SweepTarget::RulemakerGhz,
        SweepTarget::Rulemaker4q,
        SweepTarget::Noise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepTarget::GhzGame => "ghz_game",
            SweepTarget::WGame => "w_game",
            SweepTarget::WnGame => "wn_game",
            SweepTarget::RulemakerW => "rulemaker_w",
            SweepTarget::RulemakerGhz => "rulemaker_ghz",
            SweepTarget::Rulemaker4q => "rulemaker_4q",
            SweepTarget::Noise => "noise",
        }
    }

    /// Figures reproduced by the target.
    pub fn figures(self) -> &'static [u8] {
        match self {
            SweepTarget::GhzGame => &[1],
            SweepTarget::WGame => &[2],
            SweepTarget::WnGame => &[3, 4],
            SweepTarget::RulemakerW => &[5],
            SweepTarget::RulemakerGhz => &[6],
            SweepTarget::Noise => &[7, 8, 9, 10],
            SweepTarget::Rulemaker4q => &[11],
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SweepTarget::GhzGame => "GHZ-family win vs three-tangle",
            SweepTarget::WGame => "W-family win vs pairwise concurrence sum",
            SweepTarget::WnGame => "W_n win and concurrence sum vs n",
            SweepTarget::RulemakerW => "rule-maker game with a W state vs lambda",
            SweepTarget::RulemakerGhz => "rule-maker game with a GHZ state vs lambda",
            SweepTarget::Rulemaker4q => "four-qubit rule-maker game vs lambda",
            SweepTarget::Noise => "noisy rule-maker game, simulation vs closed forms",
        }
    }
}

impl fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepTarget {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepTarget::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| anyhow::anyhow!("unknown sweep target `{s}`"))
    }
}

/// Figure-to-target mapping, one line per figure.
pub fn list_targets() -> String {
    let mut lines: Vec<(u8, SweepTarget)> = SweepTarget::ALL
        .iter()
        .flat_map(|&t| t.figures().iter().map(move |&f| (f, t)))
        .collect();
    lines.sort_by_key(|&(f, _)| f);
    lines
        .into_iter()
        .map(|(f, t)| format!("figure {f}: {} ({})\n", t.name(), t.description()))
        .collect()
}

/// `points` evenly spaced values on `[lo, hi]`, endpoints exact.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

pub fn run_sweep(target: SweepTarget, grid: usize, n_max: u32) -> Result<Table> {
    if grid < 2 {
        bail!("--grid must be at least 2");
    }
    match target {
        SweepTarget::GhzGame => ghz_game(grid),
        SweepTarget::WGame => w_game(grid),
        SweepTarget::WnGame => wn_game(n_max),
        SweepTarget::RulemakerW => lambda_sweep(grid, |l| Ok(rulemaker_win_probability(&RuleMakerSpec::w_game(l))?)),
        SweepTarget::RulemakerGhz => {
            lambda_sweep(grid, |l| Ok(rulemaker_win_probability(&RuleMakerSpec::ghz_game(l))?))
        }
        SweepTarget::Rulemaker4q => lambda_sweep(grid, |l| Ok(rulemaker_4qubit_game(l))),
        SweepTarget::Noise => noise(grid),
    }
}

fn ghz_game(grid: usize) -> Result<Table> {
    let game = vaidman_ghz_game();
    let mut table = Table::new(vec!["theta", "tau", "quantum_win", "classical_bound"]);
    for theta in linspace(0.0, FRAC_PI_4, grid) {
        let win = quantum_win_probability(&make_ghz_general(theta, 3, 1)?, &game)?;
        table.push(vec![
            fmt_g(theta),
            fmt_g(n_tangle_ghz_family(theta)?),
            fmt_g(win),
            fmt_g(0.75),
        ]);
    }
    Ok(table)
}

/// Lattice `(i, j, k)` with `i + j + k = grid − 1` mapped to amplitudes
/// `√(i/(grid−1))` etc.
fn w_game(grid: usize) -> Result<Table> {
    let game = vaidman_w_game();
    let steps = grid - 1;
    let mut table = Table::new(vec!["a", "b", "c", "concurrence_sum", "win"]);
    for i in 0..=steps {
        for j in 0..=(steps - i) {
            let k = steps - i - j;
            let amp = |m: usize| (m as f64 / steps as f64).sqrt();
            let (a, b, c) = (amp(i), amp(j), amp(k));
            let state = make_w_general(Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0))?;
            table.push(vec![
                fmt_g(a),
                fmt_g(b),
                fmt_g(c),
                fmt_g(residual_concurrence_sum(&state)?),
                fmt_g(quantum_win_probability(&state, &game)?),
            ]);
        }
    }
    Ok(table)
}

fn wn_game(n_max: u32) -> Result<Table> {
    if n_max < 1 {
        bail!("--n-max must be at least 1");
    }
    let game = vaidman_w_game();
    let mut table = Table::new(vec!["n", "concurrence_sum", "win"]);
    for n in 1..=n_max {
        let state = make_wn(n, 0.0, 0.0)?;
        table.push(vec![
            n.to_string(),
            fmt_g(residual_concurrence_sum(&state)?),
            fmt_g(quantum_win_probability(&state, &game)?),
        ]);
    }
    Ok(table)
}

fn lambda_sweep(grid: usize, win: impl Fn(f64) -> Result<f64>) -> Result<Table> {
    let mut table = Table::new(vec!["lambda", "win"]);
    for lambda in linspace(0.0, FRAC_PI_2, grid) {
        table.push(vec![fmt_g(lambda), fmt_g(win(lambda)?)]);
    }
    Ok(table)
}

fn noise(grid: usize) -> Result<Table> {
    let mut table = Table::new(vec!["state", "channel", "D1", "D2", "simulated", "closed_form", "abs_dev"]);
    for report in verify_noise_formulas(grid)? {
        for s in &report.samples {
            table.push(vec![
                report.state.name().to_string(),
                report.variant.name().to_string(),
                fmt_g(s.d1),
                fmt_g(s.d2),
                fmt_g(s.simulated),
                fmt_g(s.closed_form),
                fmt_g(s.abs_dev()),
            ]);
        }
    }
    Ok(table)
}
