//! Trace persistence: metric and position CSV tables, the JSON trace
//! format, and independent re-verification of a persisted trace.
//!
//! Numbers render through the standard shortest-roundtrip formatter, so
//! re-reading a file reproduces the exact binary values and identical runs
//! produce byte-identical files.

use super::{
    audit, is_near_gathering, measure_round, step_once, Configuration, RoundRecord, RunOptions,
    Scenario, SimError, Termination, Trace, GEOM_TOL,
};

pub fn metrics_csv(trace: &Trace) -> String {
    let mut out = String::from(
        "round,diameter,symmetricity,connected,convex_boundary,max_hole,min_dist,audits_failed\n",
    );
    for r in &trace.records {
        let failed = r.audit_results.values().filter(|o| !o.pass).count();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.round,
            r.diameter,
            r.symmetricity,
            r.connected,
            r.convex_boundary,
            float_cell(r.max_empty_circle_diameter),
            float_cell(r.min_pairwise_distance),
            failed,
        ));
    }
    out
}

pub fn positions_csv(trace: &Trace) -> String {
    let mut out = String::from("round,robot,x,y,role\n");
    for r in &trace.records {
        for (i, ((x, y), role)) in r.positions.iter().zip(&r.roles).enumerate() {
            out.push_str(&format!("{},{},{},{},{}\n", r.round, i, x, y, role));
        }
    }
    out
}

fn float_cell(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v}"),
        None => "NaN".to_string(),
    }
}

pub fn to_json(trace: &Trace) -> Result<String, SimError> {
    Ok(serde_json::to_string_pretty(trace)?)
}

pub fn from_json(text: &str) -> Result<Trace, SimError> {
    Ok(serde_json::from_str(text)?)
}

pub fn scenario_to_json(scenario: &Scenario) -> Result<String, SimError> {
    Ok(serde_json::to_string_pretty(scenario)?)
}

pub fn scenario_from_json(text: &str) -> Result<Scenario, SimError> {
    Ok(serde_json::from_str(text)?)
}

/// One discrepancy between a persisted trace and a fresh replay.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceIssue {
    /// Round the issue belongs to; None for trace-level problems.
    pub round: Option<usize>,
    pub what: String,
}

impl std::fmt::Display for TraceIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.round {
            Some(round) => write!(f, "round {round}: {}", self.what),
            None => write!(f, "trace: {}", self.what),
        }
    }
}

/// Replays the trace from its own recorded positions and reports every
/// disagreement: metrics that do not recompute, steps that do not
/// reproduce the next round bit for bit, audit outcomes that changed, and
/// a termination the final round does not justify.
pub fn verify_trace(trace: &Trace) -> Vec<TraceIssue> {
    let mut issues = Vec::new();
    let mut issue = |round: Option<usize>, what: String| {
        issues.push(TraceIssue { round, what });
    };
    let scenario = &trace.scenario;

    if let Err(e) = scenario.validate() {
        // An invalid scenario never steps, so its trace must be an empty
        // error trace carrying exactly the validation message.
        let expect = e.to_string();
        if !trace.records.is_empty() {
            issue(None, format!("invalid scenario ({expect}) with recorded rounds"));
        }
        match &trace.termination {
            Termination::Error(detail) if *detail == expect => {}
            t => issue(None, format!("invalid scenario ({expect}) terminated as {t:?}")),
        }
        return issues;
    }
    if trace.records.is_empty() {
        issue(None, "valid scenario with no recorded rounds".to_string());
        return issues;
    }

    for (i, r) in trace.records.iter().enumerate() {
        if r.round != i {
            issue(Some(r.round), format!("record {i} is numbered {}", r.round));
            return issues;
        }
    }
    if trace.records[0].positions != scenario.positions {
        issue(Some(0), "round 0 differs from the scenario positions".to_string());
    }

    let options = RunOptions::default();
    let threshold = scenario.near_gathering_threshold();
    let last = trace.records.len() - 1;

    for (i, record) in trace.records.iter().enumerate() {
        let config = match Configuration::from_pairs(&record.positions) {
            Ok(c) => c,
            Err(e) => {
                issue(Some(i), format!("unusable positions: {e}"));
                return issues;
            }
        };

        if let Some(diff) = metric_mismatch(record, &config) {
            issue(Some(i), format!("stored metrics diverge from recomputation: {diff}"));
        }
        let gathered = is_near_gathering(&config, threshold, GEOM_TOL);

        if i < last {
            if gathered {
                issue(Some(i), "near-gathered mid-trace; the run should stop here".to_string());
            }
            let stepped = match step_once(scenario, &options, &config) {
                Ok(s) => s,
                Err(e) => {
                    issue(Some(i), format!("replayed step fails: {e}"));
                    return issues;
                }
            };
            let replayed: Vec<(f64, f64)> =
                stepped.next.positions().iter().map(|p| (p.x, p.y)).collect();
            if replayed != trace.records[i + 1].positions {
                issue(Some(i + 1), "replayed positions diverge from the record".to_string());
            }
            if record.roles != stepped.roles {
                issue(Some(i), "replayed roles diverge from the record".to_string());
            }
            if !record.audit_results.is_empty() {
                let fresh = audit::audit_round(scenario, &config, &stepped.next);
                if fresh != record.audit_results {
                    issue(Some(i), "replayed audit outcomes diverge from the record".to_string());
                }
            }
        } else {
            if record.roles.iter().any(|r| r != "none") {
                issue(Some(i), "terminal round carries step roles".to_string());
            }
            if !record.audit_results.is_empty() {
                issue(Some(i), "terminal round carries audit results".to_string());
            }
            match &trace.termination {
                Termination::NearGathering => {
                    if !gathered {
                        issue(Some(i), "termination says near-gathering but the final round is not".to_string());
                    }
                }
                Termination::MaxRounds => {
                    if gathered {
                        issue(Some(i), "final round is near-gathered, not a round-cap stop".to_string());
                    }
                    if record.round != scenario.max_rounds {
                        issue(
                            Some(i),
                            format!("round cap is {} but the trace stops at {}", scenario.max_rounds, record.round),
                        );
                    }
                }
                Termination::Error(detail) => {
                    if gathered {
                        issue(Some(i), "final round is near-gathered, not an error stop".to_string());
                    }
                    if record.round >= scenario.max_rounds {
                        issue(Some(i), "error claimed at or past the round cap".to_string());
                    }
                    match step_once(scenario, &options, &config) {
                        Err(e) if e.to_string() == *detail => {}
                        Err(e) => issue(Some(i), format!("error detail changed: {e:?} vs recorded {detail:?}")),
                        Ok(_) => issue(Some(i), "trace records a step error but the replayed step succeeds".to_string()),
                    }
                }
            }
        }
    }
    issues
}

/// Names the first stored metric that does not recompute bit for bit.
fn metric_mismatch(record: &RoundRecord, config: &Configuration<f64>) -> Option<&'static str> {
    let fresh = measure_round(record.round, config);
    if record.diameter != fresh.diameter {
        return Some("diameter");
    }
    if record.symmetricity != fresh.symmetricity {
        return Some("symmetricity");
    }
    if record.connected != fresh.connected {
        return Some("connected");
    }
    if record.convex_boundary != fresh.convex_boundary {
        return Some("convex_boundary");
    }
    if record.max_empty_circle_diameter != fresh.max_empty_circle_diameter {
        return Some("max_empty_circle_diameter");
    }
    if record.min_pairwise_distance != fresh.min_pairwise_distance {
        return Some("min_pairwise_distance");
    }
    None
}
