//! Synchronous round engine: scenario ingestion, the run loop, per-round
//! metrics, and trace assembly.
//!
//! A scenario names a protocol, its parameters, and the audits to run;
//! [`run`] applies the protocol round by round until near-gathering, the
//! round cap, or a protocol error, recording positions, roles, metrics,
//! and audit outcomes for every round. Runs are deterministic: identical
//! scenarios produce byte-identical traces.

pub mod audit;
pub mod gen;
pub mod trace;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    connectivity_boundary, disc_graph, is_convex_cycle, is_near_gathering, largest_empty_circle,
    Configuration,
};
use crate::gta::{self, GtaError, GtaParams};
use crate::symmetry::symmetricity;
use crate::wave::{main_step, Role, WaveError, WaveParams, WaveTier};

/// Matching tolerance for symmetry detection in metrics and audits.
pub const SYM_TOL: f64 = 1e-6;

/// Position tolerance shared by the geometric metrics.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("scenario field {field}: {reason}")]
    InvalidScenario {
        field: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Geometry(#[from] crate::GeometryError),
    #[error(transparent)]
    Gta(#[from] GtaError),
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error("trace serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Gta,
    Wave,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Gta => "gta",
            Protocol::Wave => "wave",
        }
    }

    /// Viewing range the protocol is specified for: the averaging weight
    /// support for gta, the boundary-certification range for wave.
    pub fn default_viewing_range(self) -> f64 {
        match self {
            Protocol::Gta => 1.0,
            Protocol::Wave => 2.0 + std::f64::consts::SQRT_2,
        }
    }
}

fn default_max_rounds() -> usize {
    10_000
}

fn default_hole_check() -> f64 {
    1.0
}

/// One runnable experiment. The optional fields default per protocol; the
/// JSON form is the scenario file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub protocol: Protocol,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewing_range: Option<f64>,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_gathering_threshold: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub audits: Vec<String>,
    /// Largest tolerated empty-circle diameter at wave rounds; zero or
    /// negative disables the check.
    #[serde(default = "default_hole_check")]
    pub hole_check_delta: f64,
    pub positions: Vec<(f64, f64)>,
}

impl Scenario {
    /// Bare scenario with protocol defaults and no audits.
    pub fn new(name: &str, protocol: Protocol, epsilon: f64, positions: Vec<(f64, f64)>) -> Self {
        Scenario {
            name: name.to_string(),
            protocol,
            epsilon,
            viewing_range: None,
            max_rounds: default_max_rounds(),
            near_gathering_threshold: None,
            seed: 0,
            audits: Vec::new(),
            hole_check_delta: default_hole_check(),
            positions,
        }
    }

    /// Same scenario with the standard audit set for its protocol.
    pub fn with_default_audits(mut self) -> Self {
        self.audits = audit::default_audits(self.protocol);
        self
    }

    pub fn viewing_range(&self) -> f64 {
        self.viewing_range
            .unwrap_or_else(|| self.protocol.default_viewing_range())
    }

    pub fn near_gathering_threshold(&self) -> f64 {
        self.near_gathering_threshold
            .unwrap_or_else(|| self.viewing_range())
    }

    /// Applies a textual `key=value` override, type-checking the value
    /// against the field.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SimError> {
        fn parse<T: std::str::FromStr>(
            field: &'static str,
            value: &str,
        ) -> Result<T, SimError> {
            value.parse().map_err(|_| SimError::InvalidScenario {
                field,
                reason: format!("cannot parse {value:?}"),
            })
        }
        match key {
            "name" => self.name = value.to_string(),
            "protocol" => {
                self.protocol = match value {
                    "gta" => Protocol::Gta,
                    "wave" => Protocol::Wave,
                    _ => {
                        return Err(SimError::InvalidScenario {
                            field: "protocol",
                            reason: format!("unknown protocol {value:?} (gta or wave)"),
                        })
                    }
                }
            }
            "epsilon" => self.epsilon = parse("epsilon", value)?,
            "viewing_range" => self.viewing_range = Some(parse("viewing_range", value)?),
            "max_rounds" => self.max_rounds = parse("max_rounds", value)?,
            "near_gathering_threshold" => {
                self.near_gathering_threshold =
                    Some(parse("near_gathering_threshold", value)?)
            }
            "seed" => self.seed = parse("seed", value)?,
            "hole_check_delta" => self.hole_check_delta = parse("hole_check_delta", value)?,
            "audits" => {
                self.audits = value
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect()
            }
            _ => {
                return Err(SimError::InvalidScenario {
                    field: "overrides",
                    reason: format!("unknown field {key:?}"),
                })
            }
        }
        Ok(())
    }

    /// Protocol parameter validation, shared by run and the CLI.
    pub fn validate(&self) -> Result<(), SimError> {
        if self.positions.is_empty() {
            return Err(SimError::InvalidScenario {
                field: "positions",
                reason: "at least one robot required".into(),
            });
        }
        for &(x, y) in &self.positions {
            if !x.is_finite() || !y.is_finite() {
                return Err(SimError::InvalidScenario {
                    field: "positions",
                    reason: format!("non-finite coordinate ({x}, {y})"),
                });
            }
        }
        match self.protocol {
            Protocol::Gta => {
                GtaParams::new(self.epsilon)?;
            }
            Protocol::Wave => {
                self.wave_params()?;
            }
        }
        for name in &self.audits {
            if !audit::AUDIT_NAMES.contains(&name.as_str()) {
                return Err(SimError::InvalidScenario {
                    field: "audits",
                    reason: format!("unknown audit {name:?}"),
                });
            }
        }
        Ok(())
    }

    pub fn gta_params(&self) -> Result<GtaParams<f64>, SimError> {
        Ok(GtaParams::new(self.epsilon)?)
    }

    pub fn wave_params(&self) -> Result<WaveParams<f64>, SimError> {
        let mut params = WaveParams::new(self.epsilon)?;
        if let Some(range) = self.viewing_range {
            params = params.with_viewing_range(range);
        }
        params = params.with_hole_check(if self.hole_check_delta > 0.0 {
            Some(self.hole_check_delta)
        } else {
            None
        });
        Ok(params)
    }
}

/// Pass/fail of one named audit, with a short diagnostic detail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditOutcome {
    pub pass: bool,
    pub detail: String,
}

/// Everything recorded about one round. Metrics are recomputed from the
/// positions each round, never carried over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub positions: Vec<(f64, f64)>,
    /// Per-robot role in this round's step: boundary, wave_old, wave_new,
    /// inner, or none when no wave step ran.
    pub roles: Vec<String>,
    pub diameter: f64,
    pub symmetricity: usize,
    pub connected: bool,
    pub convex_boundary: bool,
    /// None when the boundary is degenerate and holes are undefined.
    pub max_empty_circle_diameter: Option<f64>,
    /// None for a single robot.
    pub min_pairwise_distance: Option<f64>,
    pub audit_results: BTreeMap<String, AuditOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    NearGathering,
    MaxRounds,
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub scenario: Scenario,
    pub records: Vec<RoundRecord>,
    pub termination: Termination,
}

impl Trace {
    pub fn rounds(&self) -> usize {
        self.records.len()
    }

    pub fn audit_failures(&self) -> usize {
        self.records
            .iter()
            .flat_map(|r| r.audit_results.values())
            .filter(|o| !o.pass)
            .count()
    }
}

/// Knobs that do not belong to the experiment definition: audit stride and
/// the gta worker count (results are bit-identical for any thread count).
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub audit_every: usize,
    pub threads: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            audit_every: 1,
            threads: 1,
        }
    }
}

impl RunOptions {
    /// Default options with the thread count from `SWARMWAVE_THREADS`.
    pub fn from_env() -> Self {
        let threads = std::env::var("SWARMWAVE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(1);
        RunOptions {
            audit_every: 1,
            threads,
        }
    }
}

pub fn run(scenario: &Scenario) -> Trace {
    run_with_options(scenario, &RunOptions::default())
}

pub fn run_with_options(scenario: &Scenario, options: &RunOptions) -> Trace {
    let mut records = Vec::new();
    let termination = match run_loop(scenario, options, &mut records) {
        Ok(t) => t,
        Err(e) => Termination::Error(e.to_string()),
    };
    Trace {
        scenario: scenario.clone(),
        records,
        termination,
    }
}

fn run_loop(
    scenario: &Scenario,
    options: &RunOptions,
    records: &mut Vec<RoundRecord>,
) -> Result<Termination, SimError> {
    scenario.validate()?;
    let threshold = scenario.near_gathering_threshold();
    let stride = options.audit_every.max(1);
    let mut config = Configuration::from_pairs(&scenario.positions)?;

    for round in 0..=scenario.max_rounds {
        let mut record = measure_round(round, &config);
        if is_near_gathering(&config, threshold, GEOM_TOL) {
            records.push(record);
            return Ok(Termination::NearGathering);
        }
        if round == scenario.max_rounds {
            records.push(record);
            return Ok(Termination::MaxRounds);
        }

        let stepped = match step_once(scenario, options, &config) {
            Ok(s) => s,
            Err(e) => {
                records.push(record);
                return Ok(Termination::Error(e.to_string()));
            }
        };
        record.roles = stepped.roles;
        if round % stride == 0 {
            record.audit_results = audit::audit_round(scenario, &config, &stepped.next);
        }
        records.push(record);
        config = stepped.next;
    }
    unreachable!("loop returns at the round cap");
}

struct SteppedRound {
    next: Configuration<f64>,
    roles: Vec<String>,
}

fn step_once(
    scenario: &Scenario,
    options: &RunOptions,
    config: &Configuration<f64>,
) -> Result<SteppedRound, SimError> {
    match scenario.protocol {
        Protocol::Gta => {
            let params = scenario.gta_params()?;
            let next = gta::step_with_threads(config, &params, options.threads)?;
            Ok(SteppedRound {
                next,
                roles: vec!["none".to_string(); config.len()],
            })
        }
        Protocol::Wave => {
            let params = scenario.wave_params()?;
            let outcome = main_step(config, &params)?;
            let roles = outcome.roles.iter().map(|r| role_label(r).to_string()).collect();
            Ok(SteppedRound {
                next: outcome.next,
                roles,
            })
        }
    }
}

pub(crate) fn role_label(role: &Role<f64>) -> &'static str {
    match role {
        Role::Boundary { .. } => "boundary",
        Role::Wave {
            tier: WaveTier::Old,
            ..
        } => "wave_old",
        Role::Wave {
            tier: WaveTier::New,
            ..
        } => "wave_new",
        Role::Inner => "inner",
    }
}

/// All metrics of one configuration, recomputed from scratch.
fn measure_round(round: usize, config: &Configuration<f64>) -> RoundRecord {
    let n = config.len();
    let connected = disc_graph(config, 1.0, GEOM_TOL).is_connected();
    let cycle = connectivity_boundary(config, GEOM_TOL).ok();
    let convex_boundary = cycle
        .as_ref()
        .map(|c| !c.degenerate && is_convex_cycle(c, GEOM_TOL))
        .unwrap_or(false);
    let max_empty_circle_diameter = match &cycle {
        Some(c) if !c.degenerate => largest_empty_circle(config, c)
            .map(|circle| circle.diameter())
            .ok(),
        _ => None,
    };
    RoundRecord {
        round,
        positions: config.positions().iter().map(|p| (p.x, p.y)).collect(),
        roles: vec!["none".to_string(); n],
        diameter: config.diameter(),
        symmetricity: symmetricity(config, SYM_TOL).unwrap_or(1),
        connected,
        convex_boundary,
        max_empty_circle_diameter,
        min_pairwise_distance: (n > 1).then(|| config.min_pairwise_dist()),
        audit_results: BTreeMap::new(),
    }
}
