//! Reports and debug exports.

use std::time::Duration;

use serde::Serialize;
use sktr_core::align::{AlignError, Alignment};
use sktr_core::log::StochasticTraceNet;
use sktr_core::net::SystemNet;
use sktr_core::noise::{LabelPool, SweepReport};
use sktr_core::product::SyncProduct;
use sktr_core::{Activity, CostFunction};

use crate::pnml::serialize_pnml_annotated;

fn names(labels: &[Activity]) -> Vec<String> {
    labels.iter().map(|a| a.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoveRecord {
    pub kind: &'static str,
    pub transition: String,
    pub model_transition: Option<String>,
    pub log_transition: Option<String>,
    pub label_pair: String,
    pub probability: Option<f64>,
    pub cost: f64,
}

/// Move-level record of one optimal alignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignmentRecord {
    pub case_id: String,
    pub cost_function: String,
    pub total_cost: f64,
    pub recovered: Vec<String>,
    pub is_tie: bool,
    pub tie_candidates: Vec<Vec<String>>,
    pub states_expanded: usize,
    pub wall_time_ms: f64,
    pub moves: Vec<MoveRecord>,
}

impl AlignmentRecord {
    pub fn new(
        case_id: &str,
        model: &SystemNet,
        trace: &StochasticTraceNet,
        sp: &SyncProduct,
        f: &CostFunction,
        a: &Alignment,
        wall: Duration,
    ) -> Self {
        AlignmentRecord {
            case_id: case_id.into(),
            cost_function: f.name().to_string(),
            total_cost: a.total_cost,
            recovered: names(&a.recovered),
            is_tie: a.is_tie,
            tie_candidates: a.tie_candidates.iter().map(|c| names(c)).collect(),
            states_expanded: a.states_expanded,
            wall_time_ms: wall.as_secs_f64() * 1e3,
            moves: a
                .moves
                .iter()
                .map(|m| MoveRecord {
                    kind: m.mv.kind.as_str(),
                    transition: sp.net().transition(m.transition).id.clone(),
                    model_transition: m.mv.model_transition.map(|t| model.transition(t).id.clone()),
                    log_transition: m.mv.log_transition.map(|t| trace.net().transition(t).id.clone()),
                    label_pair: m.mv.label_pair().to_string(),
                    probability: m.mv.probability,
                    cost: m.cost,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Ok,
    Infeasible,
    ResourceCap,
    Invalid,
}

impl TraceStatus {
    pub fn of(e: &AlignError) -> Self {
        match e {
            AlignError::Infeasible { .. } => TraceStatus::Infeasible,
            AlignError::Cost(_) => TraceStatus::Invalid,
            _ => TraceStatus::ResourceCap,
        }
    }
}

/// Per-trace summary written by `recover`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub case_id: String,
    pub status: TraceStatus,
    pub method: &'static str,
    pub cost_function: String,
    pub recovered: Option<Vec<String>>,
    pub total_cost: Option<f64>,
    pub is_tie: bool,
    pub tie_candidates: Vec<Vec<String>>,
    pub states_expanded: usize,
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TraceReport {
    pub fn from_alignment(case_id: &str, f: &CostFunction, a: &Alignment, wall: Duration) -> Self {
        TraceReport {
            case_id: case_id.into(),
            status: TraceStatus::Ok,
            method: "sktr",
            cost_function: f.name().to_string(),
            recovered: Some(names(&a.recovered)),
            total_cost: Some(a.total_cost),
            is_tie: a.is_tie,
            tie_candidates: a.tie_candidates.iter().map(|c| names(c)).collect(),
            states_expanded: a.states_expanded,
            wall_time_ms: wall.as_secs_f64() * 1e3,
            error: None,
        }
    }

    pub fn argmax(case_id: &str, recovered: &[Activity]) -> Self {
        TraceReport {
            case_id: case_id.into(),
            status: TraceStatus::Ok,
            method: "argmax",
            cost_function: "-".into(),
            recovered: Some(names(recovered)),
            total_cost: None,
            is_tie: false,
            tie_candidates: Vec::new(),
            states_expanded: 0,
            wall_time_ms: 0.0,
            error: None,
        }
    }

    pub fn failure(case_id: &str, f: &CostFunction, e: &AlignError, wall: Duration) -> Self {
        TraceReport {
            case_id: case_id.into(),
            status: TraceStatus::of(e),
            method: "sktr",
            cost_function: f.name().to_string(),
            recovered: None,
            total_cost: None,
            is_tie: false,
            tie_candidates: Vec::new(),
            states_expanded: match e {
                AlignError::Infeasible { states_expanded }
                | AlignError::StateCap { states_expanded }
                | AlignError::Aborted { states_expanded } => *states_expanded,
                _ => 0,
            },
            wall_time_ms: wall.as_secs_f64() * 1e3,
            error: Some(e.to_string()),
        }
    }
}

/// The product as PNML, each transition annotated with its move kind,
/// constituent transitions and probability.
pub fn product_pnml(sp: &SyncProduct, model: &SystemNet, trace: &StochasticTraceNet) -> String {
    serialize_pnml_annotated(sp.net(), |t| {
        let m = sp.get_move(t);
        let mut attrs = vec![("kind", m.kind.as_str().to_string())];
        if let Some(mt) = m.model_transition {
            attrs.push(("model_t", model.transition(mt).id.clone()));
        }
        if let Some(lt) = m.log_transition {
            attrs.push(("log_t", trace.net().transition(lt).id.clone()));
        }
        if let Some(p) = m.probability {
            attrs.push(("probability", p.to_string()));
        }
        attrs
    })
}

/// Move table: `kind,model_t,log_t,label_pair,probability`.
pub fn move_table_csv(
    sp: &SyncProduct,
    model: &SystemNet,
    trace: &StochasticTraceNet,
) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "model_t", "log_t", "label_pair", "probability"])?;
    for m in sp.moves() {
        w.write_record([
            m.kind.as_str().to_string(),
            m.model_transition.map(|t| model.transition(t).id.clone()).unwrap_or_default(),
            m.log_transition.map(|t| trace.net().transition(t).id.clone()).unwrap_or_default(),
            m.label_pair().to_string(),
            m.probability.map(|p| p.to_string()).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

pub const SWEEP_HEADER: [&str; 7] = ["p_a", "method", "cost_function", "accuracy", "traces", "events", "failures"];

/// Long-format sweep table, one row per grid point and method. Accuracy is
/// empty when every trace failed.
pub fn sweep_csv(report: &SweepReport) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.p_a.to_string(),
            r.method.to_string(),
            r.cost_function.clone(),
            r.accuracy.map(|a| a.to_string()).unwrap_or_default(),
            r.traces.to_string(),
            r.events.to_string(),
            r.failures.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

#[derive(Serialize)]
struct RowJson<'a> {
    p_a: f64,
    method: &'a str,
    cost_function: &'a str,
    accuracy: Option<f64>,
    traces: usize,
    events: usize,
    failures: usize,
}

/// Sweep rows plus the noise parameters, seeds and the caller's `config`
/// echo, enough to rerun the sweep.
pub fn sweep_json(report: &SweepReport, config: serde_json::Value) -> serde_json::Value {
    let pool = match report.label_pool {
        LabelPool::All => serde_json::json!({"kind": "all"}),
        LabelPool::TopK(k) => serde_json::json!({"kind": "topk", "k": k}),
    };
    let rows: Vec<RowJson> = report
        .rows
        .iter()
        .map(|r| RowJson {
            p_a: r.p_a,
            method: r.method,
            cost_function: &r.cost_function,
            accuracy: r.accuracy,
            traces: r.traces,
            events: r.events,
            failures: r.failures,
        })
        .collect();
    serde_json::json!({
        "config": config,
        "noise": {
            "n_t": report.n_t,
            "t_p": report.t_p,
            "label_pool": pool,
            "base_seed": report.base_seed,
            "grid_seeds": report.grid_seeds.iter().map(|(p, s)| serde_json::json!({"p_a": p, "seed": s})).collect::<Vec<_>>(),
        },
        "log": {"traces": report.log_traces, "events": report.log_events},
        "rows": rows,
    })
}
