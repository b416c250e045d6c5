//! Every closed form checked against brute-force evaluation, plus the
//! published constants checked against exact values.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use anyhow::Result;
use num_complex::Complex64;
use qgames_core::entanglement::{n_tangle_ghz_family, residual_concurrence_sum, three_tangle};
use qgames_core::games::{
    closed_form_ghz_win, closed_form_rulemaker_ghz, closed_form_rulemaker_w, closed_form_w_win,
    closed_form_wn_win, ghz_phase_for, multiplayer_game, quantum_win_probability, rulemaker_4qubit_game,
    rulemaker_win_probability, vaidman_ghz_game, vaidman_w_game, MultiplayerGame, RuleMakerSpec, StateKind,
};
use qgames_core::noise::{
    noisy_rulemaker_win, rounded_closed_form_noisy, verify_noise_formulas, ChannelKind,
};
use qgames_core::qstate::{make_ghz_general, make_w_general, make_wn, standard_ghz, standard_w, PureState};

use crate::classical::{report_for, tangle_threshold, GameId, PUBLISHED_MATCH_TOL};
use crate::sweep::linspace;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Two-dimensional lattices are capped at this many points per axis.
pub const MAX_LATTICE: usize = 21;
/// Distance allowed between a derived threshold and its printed value.
pub const THRESHOLD_TOL: f64 = 0.01;
/// Distance allowed between an exact coefficient and its printed decimal.
pub const PRINTED_COEFF_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Waived,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Waived => "WAIVED",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_dev: f64,
    pub tolerance: f64,
    pub waived: bool,
    pub note: String,
}

impl Check {
    fn new(name: impl Into<String>, max_dev: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_dev,
            tolerance,
            waived: false,
            note: String::new(),
        }
    }

    fn waive(mut self, note: impl Into<String>) -> Self {
        self.waived = true;
        self.note = note.into();
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn within(&self) -> bool {
        self.max_dev <= self.tolerance
    }

    pub fn status(&self) -> Status {
        if self.within() {
            Status::Pass
        } else if self.waived {
            Status::Waived
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub grid: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status() != Status::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tolerance: {:e}", self.tolerance).unwrap();
        writeln!(out, "grid: {}", self.grid).unwrap();
        for c in &self.checks {
            write!(
                out,
                "{:<6} {:<46} max_dev={:.3e} tol={:.0e}",
                c.status().label(),
                c.name,
                c.max_dev,
                c.tolerance
            )
            .unwrap();
            if !c.note.is_empty() {
                write!(out, "  # {}", c.note).unwrap();
            }
            out.push('\n');
        }
        let count = |s| self.checks.iter().filter(|c| c.status() == s).count();
        writeln!(
            out,
            "summary: {} checks, {} passed, {} failed, {} waived",
            self.checks.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Waived)
        )
        .unwrap();
        out
    }
}

fn max_dev(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

/// Root of an increasing function on `[lo, hi]`.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn real_w(a: f64, b: f64, c: f64) -> Result<PureState> {
    Ok(make_w_general(
        Complex64::new(a, 0.0),
        Complex64::new(b, 0.0),
        Complex64::new(c, 0.0),
    )?)
}

fn simplex(points: usize) -> Vec<(f64, f64, f64)> {
    let steps = points - 1;
    let amp = |m: usize| (m as f64 / steps as f64).sqrt();
    (0..=steps)
        .flat_map(|i| (0..=(steps - i)).map(move |j| (amp(i), amp(j), amp(steps - i - j))))
        .collect()
}

pub fn run_verify(tolerance: f64, grid: usize) -> Result<VerifyReport> {
    anyhow::ensure!(tolerance > 0.0, "--tolerance must be positive");
    anyhow::ensure!(grid >= 2, "--grid must be at least 2");
    let tol = tolerance;
    let lattice = grid.min(MAX_LATTICE);
    let thetas = linspace(0.0, FRAC_PI_4, grid);
    let lambdas = linspace(0.0, FRAC_PI_2, grid);
    let mut checks = Vec::new();

    let ghz = vaidman_ghz_game();
    checks.push(Check::new(
        "ghz_game closed form",
        max_dev(thetas.iter().map(|&t| {
            let win = quantum_win_probability(&make_ghz_general(t, 3, 1)?, &ghz)?;
            Ok((win - closed_form_ghz_win(t)).abs())
        }))?,
        tol,
    ));
    checks.push(Check::new(
        "ghz three-tangle = sin^2 2theta",
        max_dev(thetas.iter().map(|&t| {
            let tau = three_tangle(&make_ghz_general(t, 3, 1)?)?.tau;
            Ok((tau - n_tangle_ghz_family(t)?).abs())
        }))?,
        tol,
    ));
    let crossing = bisect(0.0, FRAC_PI_4, |t| {
        Ok(quantum_win_probability(&make_ghz_general(t, 3, 1)?, &ghz)? - 0.75)
    })?;
    checks.push(Check::new(
        "ghz_game crosses 3/4 at tau = 1/4",
        (n_tangle_ghz_family(crossing)? - 0.25).abs(),
        tol,
    ));

    let w = vaidman_w_game();
    let points = simplex(lattice);
    checks.push(Check::new(
        "w_game closed form",
        max_dev(points.iter().map(|&(a, b, c)| {
            let win = quantum_win_probability(&real_w(a, b, c)?, &w)?;
            Ok((win - closed_form_w_win(a, b, c)?).abs())
        }))?,
        tol,
    ));
    checks.push(Check::new(
        "w concurrence sum = 2(ab+bc+ca)",
        max_dev(points.iter().map(|&(a, b, c)| {
            let sum = residual_concurrence_sum(&real_w(a, b, c)?)?;
            Ok((sum - 2.0 * (a * b + b * c + c * a)).abs())
        }))?,
        tol,
    ));
    checks.push(Check::new(
        "standard W wins 7/8",
        (quantum_win_probability(&standard_w(), &w)? - 0.875).abs(),
        tol,
    ));
    checks.push(Check::new(
        "wn closed form, n = 1..20",
        max_dev((1..=20).map(|n| {
            let win = quantum_win_probability(&make_wn(n, 0.0, 0.0)?, &w)?;
            Ok((win - closed_form_wn_win(n)?).abs())
        }))?,
        tol,
    ));
    let phases = linspace(0.0, 2.0 * PI, 5);
    checks.push(
        Check::new(
            "wn closed form with phases (gamma, delta)",
            max_dev(phases.iter().flat_map(|&g| phases.iter().map(move |&d| (g, d))).flat_map(|(g, d)| {
                [1u32, 2, 5].map(|n| {
                    let win = quantum_win_probability(&make_wn(n, g, d)?, &w)?;
                    Ok((win - closed_form_wn_win(n)?).abs())
                })
            }))?,
            tol,
        )
        .waive("closed form assumes zero phases"),
    );

    checks.push(Check::new(
        "rulemaker_w closed form",
        max_dev(lambdas.iter().map(|&l| {
            let win = rulemaker_win_probability(&RuleMakerSpec::w_game(l))?;
            Ok((win - closed_form_rulemaker_w(l)).abs())
        }))?,
        tol,
    ));
    checks.push(Check::new(
        "rulemaker_ghz closed form",
        max_dev(lambdas.iter().map(|&l| {
            let win = rulemaker_win_probability(&RuleMakerSpec::ghz_game(l))?;
            Ok((win - closed_form_rulemaker_ghz(l)).abs())
        }))?,
        tol,
    ));
    checks.push(Check::new(
        "rulemaker_4q wins at lambda = pi/4",
        (rulemaker_4qubit_game(FRAC_PI_4) - 1.0).abs(),
        tol,
    ));
    checks.push(Check::new(
        "rulemaker_4q symmetric about pi/4",
        max_dev(lambdas.iter().map(|&l| Ok((rulemaker_4qubit_game(l) - rulemaker_4qubit_game(FRAC_PI_2 - l)).abs())))?,
        tol,
    ));

    for id in MultiplayerGame::ALL {
        let game = multiplayer_game(id);
        let sign = ghz_phase_for(&game).ok_or_else(|| anyhow::anyhow!("{id}: no GHZ phase wins"))?;
        checks.push(
            Check::new(
                format!("{id} GHZ_n closed form"),
                max_dev(thetas.iter().map(|&t| {
                    let win = quantum_win_probability(&make_ghz_general(t, game.n_players(), sign)?, &game)?;
                    Ok((win - closed_form_ghz_win(t)).abs())
                }))?,
                tol,
            )
            .note(format!("phase sign {sign:+}")),
        );
    }

    for id in GameId::all() {
        let report = report_for(id)?;
        let (published, text) = id.published_value();
        let exact = report.optimum.exact.map_or(String::new(), |f| f.to_string());
        let mut check = Check::new(
            format!("{} classical vs published", id.name()),
            (report.optimum.probability - published).abs(),
            PUBLISHED_MATCH_TOL,
        )
        .note(format!("search {exact}, published {text}"));
        if matches!(id, GameId::Multi(MultiplayerGame::G4_1 | MultiplayerGame::G6_2)) {
            check = check.waive(format!("search {exact}, published {text}; exhaustive search is authoritative"));
        }
        checks.push(check);
        if let Some(printed) = id.published_threshold() {
            let derived = tangle_threshold(report.optimum.probability);
            let mut check = Check::new(
                format!("{} tau threshold vs published", id.name()),
                (derived - printed).abs(),
                THRESHOLD_TOL,
            )
            .note(format!("derived {:.4}, published {printed}", derived));
            if id == GameId::Multi(MultiplayerGame::G6_2) {
                check = check.waive(format!("derived {derived:.4} from search, published {printed}"));
            }
            checks.push(check);
        }
    }

    for report in verify_noise_formulas(lattice)? {
        let (d1, d2) = report.argmax;
        let mut check = Check::new(format!("noise {} {}", report.state, report.variant), report.max_dev, tol)
            .note(format!("worst at D1={d1:.2}, D2={d2:.2}"));
        if report.waived {
            check = check.waive(format!("printed depolarizing row; worst at D1={d1:.2}, D2={d2:.2}"));
        }
        checks.push(check);
    }
    let grid_1d = linspace(0.0, 1.0, lattice);
    checks.push(Check::new(
        "noise W amplitude_damping vs printed decimals",
        max_dev(grid_1d.iter().flat_map(|&d1| grid_1d.iter().map(move |&d2| (d1, d2))).map(|(d1, d2)| {
            let sim = noisy_rulemaker_win(StateKind::W, ChannelKind::AmplitudeDamping, d1, d2)?;
            let printed = rounded_closed_form_noisy(StateKind::W, ChannelKind::AmplitudeDamping, d1, d2)?;
            Ok((sim - printed).abs())
        }))?,
        PRINTED_COEFF_TOL,
    ));

    checks.push(Check::new("three-tangle of GHZ is 1", (three_tangle(&standard_ghz())?.tau - 1.0).abs(), tol));
    checks.push(Check::new("three-tangle of W is 0", three_tangle(&standard_w())?.tau.abs(), tol));
    checks.push(Check::new(
        "three-tangle of a product state is 0",
        three_tangle(&PureState::basis(3, 0b010)?)?.tau.abs(),
        tol,
    ));

    Ok(VerifyReport {
        tolerance,
        grid,
        checks,
    })
}
