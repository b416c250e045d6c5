//! Number formatting, the game text format and CSV tables.

use std::io::Write;

use qgames_core::games::{parse_questions, GameSpec, Round};
use thiserror::Error;

/// C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = usize::try_from(11 - exp).expect("exponent below 12");
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: expected `<basis-letters> <product> <weight>`")]
    Shape { line: usize },
    #[error("line {line}: {message}")]
    Field { line: usize, message: String },
    #[error("invalid game: {0}")]
    Game(#[from] qgames_core::Error),
}

/// One row per question tuple: `<basis-letters> <required product> <weight>`.
pub fn write_game(game: &GameSpec) -> String {
    game.rounds()
        .iter()
        .map(|r| {
            let letters: String = r.questions.iter().map(|q| q.letter()).collect();
            let product = if r.required_product > 0 { "+1" } else { "-1" };
            format!("{letters} {product} {}\n", fmt_g(r.weight))
        })
        .collect()
}

/// Reads [`write_game`] output. Blank lines and `#` comments are skipped.
pub fn parse_game(text: &str) -> Result<GameSpec, FormatError> {
    let mut rounds = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [letters, product, weight] = fields[..] else {
            return Err(FormatError::Shape { line });
        };
        let questions = parse_questions(letters).map_err(|e| FormatError::Field {
            line,
            message: e.to_string(),
        })?;
        let required_product = match product {
            "+1" | "1" => 1,
            "-1" => -1,
            _ => {
                return Err(FormatError::Field {
                    line,
                    message: format!("product must be +1 or -1, got `{product}`"),
                })
            }
        };
        let weight: f64 = weight.parse().map_err(|_| FormatError::Field {
            line,
            message: format!("weight `{weight}` is not a number"),
        })?;
        rounds.push(Round {
            questions,
            required_product,
            weight,
        });
    }
    let n_players = rounds.first().map_or(0, |r| r.questions.len());
    Ok(GameSpec::new(n_players, rounds)?)
}

/// Header plus rows of already formatted cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("cells are UTF-8")
    }
}
