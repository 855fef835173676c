//! Browser bindings: mistake curves, adversary walks and the expert index.
//!
//! Each export has a plain Rust twin returning `unilearn::Result` so the
//! logic is testable off the browser.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use unilearn::harness::{adversary_csv, build_space, run_stream, ClassSpec, LearnerSpec, ProcessSpec, Source, TrialSpec};
use unilearn::learners::experts::ExpertSet;
use unilearn::{Error, Result};
use wasm_bindgen::prelude::*;

fn parse_params(params: &str) -> Result<Vec<usize>> {
    params
        .split([',', ' '])
        .filter(|f| !f.is_empty())
        .map(|f| f.parse().map_err(|e| Error::Config(format!("bad parameter {f}: {e}"))))
        .collect()
}

fn learner_spec(name: &str) -> LearnerSpec {
    match name {
        "constant-0" | "constant-1" => LearnerSpec {
            label: u8::from(name.ends_with('1')),
            ..LearnerSpec::named("constant")
        },
        other => LearnerSpec {
            experts_max: 32,
            rollouts: 16,
            ..LearnerSpec::named(other)
        },
    }
}

/// Cumulative mistakes per round for each learner on one shared stream, as
/// a JSON object keyed by learner name.
pub fn mistake_curves_json(
    preset: &str,
    params: &str,
    process: &str,
    learners: &str,
    rounds: usize,
    seed: u64,
) -> Result<String> {
    let class = ClassSpec::preset(preset, &parse_params(params)?);
    let space = build_space(&class)?;
    let source = Source::new(space.clone(), &ProcessSpec::kind(process), &TrialSpec::default(), rounds)?;
    let stream = source.stream(seed)?;
    let mut curves = BTreeMap::new();
    for name in learners.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        let trace = run_stream(&learner_spec(name), &space, &stream, "truth", seed, &class.describe())?;
        let cum: Vec<u64> = trace.rows.iter().map(|r| r.cum_mistakes).collect();
        curves.insert(name.to_string(), cum);
    }
    Ok(serde_json::to_string(&curves).expect("serializable"))
}

/// CSV of a tree walk on all functions over `n` points.
pub fn adversary_walk_csv(kind: &str, n: usize, depth: usize, seed: u64) -> Result<String> {
    let space = build_space(&ClassSpec::preset("all-functions", &[n]))?;
    let process = ProcessSpec {
        depth: Some(depth),
        ..ProcessSpec::kind(kind)
    };
    let rounds = match kind {
        "vcl-walk" => (1usize << depth.min(16)) - 1,
        _ => depth,
    };
    let source = Source::new(space.clone(), &process, &TrialSpec::default(), rounds)?;
    let trace = source
        .stream(seed)?
        .adversary
        .ok_or_else(|| Error::Config(format!("{kind} is not a tree walk")))?;
    adversary_csv(&trace, space.domain())
}

pub fn set_of(index: &str) -> Result<String> {
    let index: BigUint = index
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("bad index {index}: {e}")))?;
    Ok(ExpertSet::from_index(index)?.to_string())
}

pub fn index_of(set: &str) -> Result<String> {
    let rounds = parse_params(set)?.into_iter().map(|r| r as u64).collect();
    Ok(ExpertSet::new(rounds)?.index().to_string())
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn mistake_curves(
    preset: &str,
    params: &str,
    process: &str,
    learners: &str,
    rounds: u32,
    seed: u32,
) -> std::result::Result<String, JsError> {
    js(mistake_curves_json(preset, params, process, learners, rounds as usize, seed as u64))
}

#[wasm_bindgen]
pub fn adversary_walk(kind: &str, n: u32, depth: u32, seed: u32) -> std::result::Result<String, JsError> {
    js(adversary_walk_csv(kind, n as usize, depth as usize, seed as u64))
}

#[wasm_bindgen]
pub fn expert_set(index: &str) -> std::result::Result<String, JsError> {
    js(set_of(index))
}

#[wasm_bindgen]
pub fn expert_index(set: &str) -> std::result::Result<String, JsError> {
    js(index_of(set))
}
