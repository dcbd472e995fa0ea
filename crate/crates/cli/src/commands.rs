use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use patterna_core::{
    blowup, brute_force_exhibitable, build_witness_structure, classify, condition_cnf, decide_exhibitable,
    export_dimacs, free_amalgam, gen_divline, import_dimacs, pattern_from_cnf, pattern_from_hypergraph,
    sentinel_cnf, triangle_free_double, validate_pattern, verify, Construction, DivlineKind, DivlineParams,
    Embedding, Failing, Hypergraph, Limits, Pattern, RawPattern, SetFamily, StructureSource, ValidationMode,
    VerifyParams, WitnessStructure,
};

use crate::{Command, HypergraphOp};

/// What a command prints, and whether its answer is positive.
pub struct Outcome {
    pub payload: String,
    pub positive: bool,
    pub note: Option<String>,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, positive: bool, note: impl Into<Option<String>>) -> Result<Self> {
        Ok(Outcome {
            payload: serde_json::to_string(value)?,
            positive,
            note: note.into(),
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).with_context(|| format!("cannot parse {}", path.display()))
}

fn read_pattern(path: &Path, mode: ValidationMode) -> Result<Pattern> {
    let raw: RawPattern = read_json(path)?;
    validate_pattern(&raw, mode).with_context(|| format!("invalid pattern in {}", path.display()))
}

#[derive(Serialize)]
struct OracleReport {
    exhibitable: bool,
    agrees: bool,
}

#[derive(Serialize)]
struct DecideOutput {
    exhibitable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<SetFamily>,
    failing: Option<Failing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

#[derive(Deserialize)]
struct AmalgamMaps {
    e0: Embedding,
    e1: Embedding,
}

pub fn run(command: Command) -> Result<Outcome> {
    let limits = Limits::from_env();
    match command {
        Command::Classify { file, lenient } => {
            let mode = if lenient { ValidationMode::Lenient } else { ValidationMode::Strict };
            let p = read_pattern(&file, mode)?;
            Outcome::json(&classify(&p), true, None)
        }
        Command::Generate { kind, n, b, d, k } => {
            let kind: DivlineKind = kind.parse()?;
            let p = gen_divline(kind, &DivlineParams { n, b, d, k })?;
            let note = format!(
                "{kind}: n = {}, |C| = {}, |I| = {}",
                p.n(),
                p.consistency().len(),
                p.inconsistency().len()
            );
            Outcome::json(&p, true, note)
        }
        Command::Decide { file, witness, oracle } => {
            let p = read_pattern(&file, ValidationMode::Strict)?;
            let decision = decide_exhibitable(&p)?;
            let oracle = if oracle {
                let brute = brute_force_exhibitable(&p, &limits)?;
                let agrees = brute.exhibitable == decision.exhibitable;
                if !agrees {
                    bail!(
                        "solver and brute-force oracle disagree (solver: {}, oracle: {})",
                        decision.exhibitable,
                        brute.exhibitable
                    );
                }
                Some(OracleReport {
                    exhibitable: brute.exhibitable,
                    agrees,
                })
            } else {
                None
            };
            let note = match &decision.failing {
                None => "exhibitable".to_string(),
                Some(Failing::Condition(c)) => format!("not exhibitable: no admissible type extends {c}"),
                Some(Failing::EmptyUniverse(_)) => "not exhibitable: no admissible type at all".to_string(),
            };
            let out = DecideOutput {
                exhibitable: decision.exhibitable,
                witness: if witness { decision.witness } else { None },
                failing: decision.failing,
                oracle,
            };
            Outcome::json(&out, out.exhibitable, note)
        }
        Command::Dimacs {
            file,
            condition,
            sentinel,
        } => {
            let p = read_pattern(&file, ValidationMode::Strict)?;
            let f = match condition {
                Some(i) if !sentinel => {
                    let Some(c) = p.consistency().iter().nth(i) else {
                        bail!("condition index {i} out of range ({} consistency conditions)", p.consistency().len());
                    };
                    condition_cnf(&p, c)
                }
                _ => sentinel_cnf(&p),
            };
            Ok(Outcome {
                payload: export_dimacs(&f).trim_end().to_string(),
                positive: true,
                note: None,
            })
        }
        Command::FromCnf { file } => {
            let f = import_dimacs(&read(&file)?).with_context(|| format!("cannot parse {}", file.display()))?;
            Outcome::json(&pattern_from_cnf(&f), true, None)
        }
        Command::Hypergraph { op, file } => match op {
            HypergraphOp::Pattern => {
                let h: Hypergraph = read_json(&file)?;
                Outcome::json(&pattern_from_hypergraph(&h, &limits)?, true, None)
            }
            HypergraphOp::Blowup => {
                let h: Hypergraph = read_json(&file)?;
                Outcome::json(&blowup(&h, &limits)?, true, None)
            }
            HypergraphOp::Double => {
                let h: Hypergraph = read_json(&file)?;
                Outcome::json(&triangle_free_double(&h, &limits)?, true, None)
            }
            HypergraphOp::WitnessStructure => {
                let value: serde_json::Value = read_json(&file)?;
                let s = if value.get("k").is_some() {
                    let h: Hypergraph = serde_json::from_value(value)?;
                    build_witness_structure(StructureSource::Hypergraph(&h), &limits)?
                } else {
                    let raw: RawPattern = serde_json::from_value(value)?;
                    let p = validate_pattern(&raw, ValidationMode::Strict)?;
                    build_witness_structure(StructureSource::Pattern(&p), &limits)?
                };
                Outcome::json(&s, true, None)
            }
        },
        Command::Verify {
            construction,
            n,
            exhaustive,
            count,
            seed,
        } => {
            let c: Construction = construction.parse()?;
            let defaults = VerifyParams::defaults(c);
            let params = VerifyParams {
                n: n.unwrap_or(defaults.n),
                exhaustive,
                count: count.unwrap_or(defaults.count),
                seed,
            };
            let report = verify(c, params, &limits)?;
            let note = format!("{}: {}", if report.passed { "ok" } else { "FAILED" }, report.summary);
            Outcome::json(&report, report.passed, note)
        }
        Command::Amalgam { a, b0, b1, maps } => {
            let a: WitnessStructure = read_json(&a)?;
            let b0: WitnessStructure = read_json(&b0)?;
            let b1: WitnessStructure = read_json(&b1)?;
            let maps: AmalgamMaps = read_json(&maps)?;
            Outcome::json(&free_amalgam(&a, &b0, &b1, &maps.e0, &maps.e1)?, true, None)
        }
    }
}
