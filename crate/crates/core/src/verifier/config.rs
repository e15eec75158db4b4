//! Flat `key = value` campaign configuration.
//!
//! ```text
//! # comments and blank lines are ignored
//! seed = 7
//! max_set_size = 5
//! suites = group-laws, main-theorem
//! ```
//!
//! Unset keys keep their defaults; `suites = all` selects every suite.

use thiserror::Error;

use super::{Suite, TestCampaign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

pub(super) fn parse(text: &str) -> Result<TestCampaign, ConfigError> {
    let mut c = TestCampaign::default();
    let mut seen: Vec<String> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(err(line, format!("expected `key = value`, found {content:?}")));
        };
        let (key, value) = (key.trim(), value.trim());
        if seen.iter().any(|s| s == key) {
            return Err(err(line, format!("duplicate key {key:?}")));
        }
        seen.push(key.to_string());
        let number = || -> Result<usize, ConfigError> {
            value
                .parse::<usize>()
                .map_err(|_| err(line, format!("{key}: expected a non-negative integer, found {value:?}")))
        };
        match key {
            "seed" => {
                c.seed = value
                    .parse()
                    .map_err(|_| err(line, format!("seed: expected an integer, found {value:?}")))?
            }
            "max_set_size" => c.max_set_size = number()?,
            "max_word_length" => c.max_word_length = number()?,
            "enum_depth" => c.enum_depth = number()?,
            "enum_cap" => c.enum_cap = number()?,
            "cases" => c.cases = number()?,
            "suites" => {
                c.suites = if value == "all" {
                    Suite::ALL.to_vec()
                } else {
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<Suite>().map_err(|e| err(line, e.to_string())))
                        .collect::<Result<_, _>>()?
                }
            }
            _ => return Err(err(line, format!("unknown key {key:?}"))),
        }
    }
    Ok(c)
}
