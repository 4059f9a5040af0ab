//! JSON dump of an SHS model, optionally with its solution.

use aoi_core::shs::{ShsModel, ShsSolution};
use aoi_core::Variant;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct StateRecord {
    pub index: usize,
    pub sources: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct TransitionRecord {
    pub from: usize,
    pub to: usize,
    pub device: usize,
    pub rate: f64,
    pub refresh: bool,
    pub reset_kind: &'static str,
}

#[derive(Debug, Serialize)]
pub struct SolutionRecord {
    pub aoi: f64,
    pub pi: Vec<f64>,
    /// One row per state: `[v_0, v_1, …, v_N]`; `null` marks an unbounded
    /// component of a zero-rate device.
    pub v: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Serialize)]
pub struct ModelDump {
    pub variant: &'static str,
    pub n_type1: usize,
    /// Rates of devices `1..=N`, then the aggregated type-2 rate for hybrid models.
    pub rates: Vec<f64>,
    pub states: Vec<StateRecord>,
    pub transitions: Vec<TransitionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionRecord>,
}

impl ModelDump {
    pub fn new(model: &ShsModel, solution: Option<&ShsSolution>) -> Self {
        let solution = solution.map(|s| SolutionRecord {
            aoi: s.aoi,
            pi: s.pi.clone(),
            v: (0..model.states().len())
                .map(|q| {
                    s.v_state(q)
                        .iter()
                        .map(|x| x.is_finite().then_some(*x))
                        .collect()
                })
                .collect(),
        });
        Self {
            variant: match model.variant() {
                Variant::Basic => "basic",
                Variant::Hybrid => "hybrid",
            },
            n_type1: model.n_type1(),
            rates: model.rates().as_slice().to_vec(),
            states: model
                .states()
                .iter()
                .enumerate()
                .map(|(index, q)| StateRecord {
                    index,
                    sources: q.sources().to_vec(),
                })
                .collect(),
            transitions: model
                .transitions()
                .iter()
                .map(|t| TransitionRecord {
                    from: t.from,
                    to: t.to,
                    device: t.device,
                    rate: t.rate,
                    refresh: t.refresh,
                    reset_kind: t.reset.as_str(),
                })
                .collect(),
            solution,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
