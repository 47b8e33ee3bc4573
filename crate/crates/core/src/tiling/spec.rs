//! JSON tiling specifications.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::Value;

use super::number::AlgebraicNumber;
use super::sample::{cut_and_project_sample, Tiling1DSample};
use super::substitution::{substitution_sample, SubstitutionRule};
use crate::abelian::matrix::bigint_from_json;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TilingSpec {
    CutAndProject {
        alpha: AlgebraicNumber,
        n_points: usize,
    },
    Substitution {
        rule: SubstitutionRule,
        seed: char,
        iterations: usize,
        require_primitive: bool,
    },
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawSpec {
    CutAndProject {
        alpha: Value,
        n_points: usize,
    },
    Substitution {
        rules: BTreeMap<String, String>,
        seed: String,
        iterations: usize,
        #[serde(default)]
        lengths: Option<BTreeMap<String, Value>>,
        #[serde(default = "default_true")]
        require_primitive: bool,
    },
}

fn default_true() -> bool {
    true
}

fn single_char(s: &str, what: &str) -> Result<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::Parse(format!("{what} {s:?} must be a single character"))),
    }
}

impl TilingSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match raw {
            RawSpec::CutAndProject { alpha, n_points } => Ok(TilingSpec::CutAndProject {
                alpha: AlgebraicNumber::from_json(&alpha)?,
                n_points,
            }),
            RawSpec::Substitution { rules, seed, iterations, lengths, require_primitive } => {
                let mut images = BTreeMap::new();
                for (k, v) in &rules {
                    images.insert(single_char(k, "rule letter")?, v.chars().collect());
                }
                let lengths = match lengths {
                    None => None,
                    Some(m) => {
                        let mut out = BTreeMap::new();
                        for (k, v) in &m {
                            let l: BigInt = bigint_from_json(v)
                                .ok_or_else(|| Error::Parse(format!("bad length for {k:?}")))?;
                            out.insert(single_char(k, "length letter")?, l);
                        }
                        Some(out)
                    }
                };
                let rule = SubstitutionRule { images, lengths };
                rule.validate()?;
                Ok(TilingSpec::Substitution {
                    rule,
                    seed: single_char(&seed, "seed")?,
                    iterations,
                    require_primitive,
                })
            }
        }
    }

    pub fn generate(&self) -> Result<Tiling1DSample> {
        match self {
            TilingSpec::CutAndProject { alpha, n_points } => cut_and_project_sample(alpha, *n_points),
            TilingSpec::Substitution { rule, seed, iterations, require_primitive } => {
                substitution_sample(rule, *seed, *iterations, *require_primitive)
            }
        }
    }
}
