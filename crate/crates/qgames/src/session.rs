//! Secret-sharing session summaries and transcripts.

use std::fmt::Write as _;

use qgames_core::qss::{extract_key, BasicResult, RoundMode, SessionResult};
use qgames_core::qstate::OutcomeLabel;

use crate::format::{fmt_g, Table};

pub const TRANSCRIPT_HEADER: [&str; 8] = [
    "round",
    "mode",
    "aliceBasis",
    "bobBasis",
    "charlieOutcome",
    "aliceOut",
    "bobOut",
    "keyBit",
];

fn sign(x: Option<i8>) -> String {
    match x {
        Some(s) if s > 0 => "+1".into(),
        Some(_) => "-1".into(),
        None => String::new(),
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

pub fn facilitated_transcript(result: &SessionResult) -> Table {
    let mut table = Table::new(TRANSCRIPT_HEADER.to_vec());
    for r in &result.records {
        let charlie = r.charlie.map(|c| match c {
            OutcomeLabel::B0 => "b0",
            _ => "b1",
        });
        table.push(vec![
            r.index.to_string(),
            r.mode.name().into(),
            r.alice_basis.letter().to_string(),
            r.bob_basis.letter().to_string(),
            opt(charlie),
            sign(r.alice_out),
            sign(r.bob_out),
            opt(r.key_bit),
        ]);
    }
    table
}

/// Charlie's cell carries his basis too, e.g. `Y:-1`.
pub fn basic_transcript(result: &BasicResult) -> Table {
    let mut table = Table::new(TRANSCRIPT_HEADER.to_vec());
    for r in &result.rounds {
        let [a, b, c] = r.bases;
        let outcomes = r.outcomes;
        let mode = if r.accepted() { RoundMode::Message } else { RoundMode::Discarded };
        table.push(vec![
            r.index.to_string(),
            mode.name().into(),
            a.letter().to_string(),
            b.letter().to_string(),
            outcomes.map_or(String::new(), |o| format!("{}:{}", c.letter(), sign(Some(o[2])))),
            sign(outcomes.map(|o| o[0])),
            sign(outcomes.map(|o| o[1])),
            opt(outcomes.map(|o| qgames_core::qss::key_bit(o[0]))),
        ]);
    }
    table
}

pub fn facilitated_summary(result: &SessionResult) -> String {
    let cfg = &result.config;
    let mut out = String::new();
    let mut line = |k: &str, v: String| writeln!(out, "{k}: {v}").unwrap();
    line("protocol", "facilitated".into());
    line("state", cfg.state_kind.name().into());
    line("rounds", cfg.rounds.to_string());
    line("seed", cfg.seed.to_string());
    line("cheat", cfg.cheat.to_string());
    line("control_rate", fmt_g(cfg.control_rate));
    line("sifted_fraction", fmt_g(result.sifted_fraction));
    line("control_checked", result.control_checked.to_string());
    line("control_passed", result.control_passed.to_string());
    line("compliance_rate", fmt_g(result.compliance_rate));
    line("threshold", fmt_g(result.threshold));
    line("key_length", result.key_bits.len().to_string());
    match extract_key(result) {
        Ok(key) => line("keys_agree", key.agree().to_string()),
        Err(e) => line("key", format!("refused ({e})")),
    }
    line("verdict", result.verdict.name().into());
    out
}

pub fn basic_summary(result: &BasicResult) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| writeln!(out, "{k}: {v}").unwrap();
    line("protocol", "basic".into());
    line("rounds", result.rounds.len().to_string());
    line("seed", result.seed.to_string());
    line("sifted", result.sifted.to_string());
    line("sifted_fraction", fmt_g(result.sifted_fraction));
    line("agreements", result.agreements.to_string());
    line("agreement_rate", fmt_g(result.agreement_rate));
    line("key_length", result.sifted.to_string());
    out
}
