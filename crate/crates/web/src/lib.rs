//! Browser bindings: list bundled scenarios, run a command on a scenario.

use toricmirror::app::{run, Command, Overrides};
use toricmirror::rational::parse_q;
use toricmirror::scenario::{Scenario, BUNDLED};
use wasm_bindgen::prelude::*;

/// Names of the bundled scenarios, one per line.
pub fn scenario_names() -> String {
    BUNDLED.iter().map(|(n, _)| *n).collect::<Vec<_>>().join("\n")
}

/// TOML source of a bundled scenario.
pub fn scenario_source(name: &str) -> Result<String, String> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| format!("no bundled scenario {name}"))
}

/// Runs `command` on a scenario given as TOML. An empty `q_bound` keeps the
/// scenario's truncation. Returns the rendered report, or the JSON report.
pub fn run_scenario(command: &str, toml: &str, q_bound: &str, json: bool) -> Result<String, String> {
    let cmd: Command = command.parse().map_err(|e: toricmirror::Error| e.to_string())?;
    let scenario = Scenario::from_toml(toml).map_err(|e| e.to_string())?;
    let q_bound = match q_bound.trim() {
        "" => None,
        s => Some(parse_q(s).map_err(|e| e.to_string())?),
    };
    let report = run(cmd, &scenario, &Overrides { q_bound, ..Default::default() }).map_err(|e| e.to_string())?;
    Ok(if json { report.to_json(true) } else { report.render() })
}

#[wasm_bindgen(js_name = scenarioNames)]
pub fn js_scenario_names() -> String {
    scenario_names()
}

#[wasm_bindgen(js_name = scenarioSource)]
pub fn js_scenario_source(name: &str) -> Result<String, JsError> {
    scenario_source(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runScenario)]
pub fn js_run_scenario(command: &str, toml: &str, q_bound: &str, json: bool) -> Result<String, JsError> {
    run_scenario(command, toml, q_bound, json).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_name_has_source() {
        for name in scenario_names().lines() {
            assert!(scenario_source(name).unwrap().contains("rays"));
        }
        assert!(scenario_source("nope").is_err());
    }

    #[test]
    fn bad_inputs_are_messages() {
        let src = scenario_source("p1").unwrap();
        assert!(run_scenario("frobnicate", &src, "", false).unwrap_err().contains("unknown command"));
        assert!(run_scenario("box", "rank = ", "", false).is_err());
        assert!(run_scenario("box", &src, "x/y", false).is_err());
    }
}
