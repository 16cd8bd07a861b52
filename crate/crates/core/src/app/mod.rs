//! Command dispatch over scenarios.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::report::Report;
use crate::scenario::{Model, Scenario};

mod bside;
mod classical;
mod gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Box,
    Ifun,
    MirrorMap,
    Birkhoff,
    CentralCharge,
    OptIdentity,
    GkzCheck,
    OscCheck,
    EulerPairing,
    GammaIdentity,
    MonodromyCheck,
    ReportAll,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::Box,
        Command::Ifun,
        Command::MirrorMap,
        Command::Birkhoff,
        Command::CentralCharge,
        Command::OptIdentity,
        Command::GkzCheck,
        Command::OscCheck,
        Command::EulerPairing,
        Command::GammaIdentity,
        Command::MonodromyCheck,
        Command::ReportAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Box => "box",
            Command::Ifun => "ifun",
            Command::MirrorMap => "mirror-map",
            Command::Birkhoff => "birkhoff",
            Command::CentralCharge => "central-charge",
            Command::OptIdentity => "opt-identity",
            Command::GkzCheck => "gkz-check",
            Command::OscCheck => "osc-check",
            Command::EulerPairing => "euler-pairing",
            Command::GammaIdentity => "gamma-identity",
            Command::MonodromyCheck => "monodromy-check",
            Command::ReportAll => "report-all",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown command {s}")))
    }
}

/// Command-line overrides of the scenario's truncation and tolerance.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub q_bound: Option<Q>,
    pub z_window: Option<(i32, i32)>,
    pub tol: Option<f64>,
}

impl Overrides {
    fn apply(&self, model: &mut Model) -> Result<()> {
        if let Some(b) = &self.q_bound {
            if *b < Q::from_integer(0.into()) {
                return Err(Error::Config("q-bound must be nonnegative".into()));
            }
            model.q_bound = b.clone();
            model.residue_order = b.clone();
        }
        if let Some((a, b)) = self.z_window {
            if a > b {
                return Err(Error::Config(format!("empty z-window {a},{b}")));
            }
            model.z_window = (a, b);
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::Config("tolerance must be positive".into()));
            }
            model.scenario.numeric.tol = t;
        }
        Ok(())
    }
}

/// Text section plus structured payload of one command.
pub(crate) struct Output {
    text: String,
    data: Map<String, Value>,
}

impl Output {
    fn new() -> Self {
        Output { text: String::new(), data: Map::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn put(&mut self, key: &str, v: Value) {
        self.data.insert(key.into(), v);
    }

    fn finish(mut self, report: &mut Report) {
        self.data.insert("text".into(), Value::String(self.text));
        report.data = Value::Object(self.data);
    }
}

fn dispatch(cmd: Command, model: &Model, report: &mut Report) -> Result<()> {
    let mut out = Output::new();
    match cmd {
        Command::Box => classical::boxes(model, report, &mut out)?,
        Command::Ifun => classical::ifun(model, report, &mut out)?,
        Command::MirrorMap => classical::mirror_map(model, report, &mut out)?,
        Command::Birkhoff => classical::birkhoff(model, report, &mut out)?,
        Command::CentralCharge => gamma::central_charge(model, report, &mut out)?,
        Command::EulerPairing => gamma::euler_pairing(model, report, &mut out)?,
        Command::GammaIdentity => gamma::gamma_identity(model, report, &mut out)?,
        Command::MonodromyCheck => gamma::monodromy_check(model, report, &mut out)?,
        Command::OptIdentity => bside::opt_identity(model, report, &mut out)?,
        Command::GkzCheck => bside::gkz_check(model, report, &mut out)?,
        Command::OscCheck => bside::osc_check(model, report, &mut out)?,
        Command::ReportAll => return report_all(model, report),
    }
    out.finish(report);
    Ok(())
}

/// Runs every command listed in the scenario's `checks` (all commands by default).
fn report_all(model: &Model, report: &mut Report) -> Result<()> {
    let listed: Vec<Command> = match &model.scenario.checks {
        Some(names) => names.iter().map(|n| n.parse()).collect::<Result<_>>()?,
        None => Command::ALL.iter().copied().filter(|c| *c != Command::ReportAll).collect(),
    };
    let mut text = String::new();
    let mut data = Map::new();
    for cmd in listed {
        if cmd == Command::ReportAll {
            return Err(Error::Scenario("report-all cannot list itself".into()));
        }
        let mut sub = Report::new(cmd.name(), &report.scenario);
        dispatch(cmd, model, &mut sub)?;
        let ok = sub.passed();
        text.push_str(&format!("[{}] {} checks, {}\n", cmd, sub.checks.len(), if ok { "pass" } else { "FAIL" }));
        for mut c in sub.checks {
            c.id = format!("{cmd}/{}", c.id);
            report.checks.push(c);
        }
        let mut d = sub.data;
        if let Some(o) = d.as_object_mut() {
            o.remove("text");
        }
        data.insert(cmd.name().into(), d);
    }
    data.insert("text".into(), Value::String(text));
    report.data = Value::Object(data);
    Ok(())
}

pub fn run(cmd: Command, scenario: &Scenario, overrides: &Overrides) -> Result<Report> {
    let clock = Clock::start();
    let mut model = scenario.build()?;
    overrides.apply(&mut model)?;
    let mut report = Report::new(cmd.name(), &scenario.name);
    dispatch(cmd, &model, &mut report)?;
    report.timing_ms = clock.millis();
    Ok(report)
}

/// Wall clock; `Instant` is unavailable on wasm32, where timings read 0.
struct Clock(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Clock {
    #[cfg(not(target_arch = "wasm32"))]
    fn start() -> Self {
        Clock(std::time::Instant::now())
    }

    #[cfg(target_arch = "wasm32")]
    fn start() -> Self {
        Clock()
    }

    #[cfg(not(target_arch = "wasm32"))]
    fn millis(&self) -> u128 {
        self.0.elapsed().as_millis()
    }

    #[cfg(target_arch = "wasm32")]
    fn millis(&self) -> u128 {
        0
    }
}

fn rows<T: ToString>(x: &[T]) -> Value {
    json!(x.iter().map(ToString::to_string).collect::<Vec<_>>())
}
