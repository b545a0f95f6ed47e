mod corona;
mod cyclicity;
mod dbar;
mod harnack;
mod weight;

use crate::config::{
    Command, CoronaAction, CyclicityAction, DbarAction, HarnackAction, RunConfig, WeightAction,
};
use crate::report::Outcome;
use crate::{read_text, CliError};
use cyclab::cyclicity::TestFunction;
use cyclab::spaces::{Space, SpaceError};
use std::path::Path;
use std::time::Instant;

pub(crate) fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match &config.command {
        Command::Weight { action } => match action {
            WeightAction::Check(a) => weight::check(config, a),
            WeightAction::Subseq(a) => weight::subseq(config, a),
        },
        Command::Dbar {
            action: DbarAction::Solve(a),
        } => dbar::solve(config, a),
        Command::Corona {
            action: CoronaAction::Solve(a),
        } => corona::solve(config, a),
        Command::Harnack {
            action: HarnackAction::Verify(a),
        } => harnack::verify(config, a),
        Command::Cyclicity {
            action: CyclicityAction::Run(a),
        } => cyclicity::run(config, a),
        Command::Selftest => crate::selftest::run(config),
    }
}

pub(crate) const SPLIT_ADVICE: &str =
    "the proof constants make the plan infeasible here; lower A with --aggressive --a";

pub(crate) fn space_error(path: &Path, e: SpaceError) -> CliError {
    match e {
        SpaceError::Parse { message, .. } => {
            CliError::Parse(format!("{}: {message}", path.display()))
        }
        other => CliError::Parse(format!("{}: {other}", path.display())),
    }
}

pub(crate) fn load_space(path: &Path) -> Result<Space, CliError> {
    Space::from_json(&read_text(path)?).map_err(|e| space_error(path, e))
}

pub(crate) fn load_function(path: &Path) -> Result<TestFunction, CliError> {
    let text = read_text(path)?;
    TestFunction::from_json(&text).map_err(|e| CliError::json(path, &e))
}

/// Seconds since `start`.
pub(crate) fn secs(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

pub(crate) fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report values serialise")
}
