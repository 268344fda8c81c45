//! Result records. JSON output is one object per line.

use std::collections::BTreeMap;

use epc_core::checker::Verdict;
use epc_core::explore::{ConfigIndex, StateSpace};
use epc_core::formula::Formula;
use serde::Serialize;

pub const SCHEMA: &str = "epc-check/result/v1";

#[derive(Debug, Serialize)]
pub struct Record {
    pub schema: &'static str,
    pub formula: String,
    pub config: ConfigRecord,
    pub verdict: bool,
    pub witness: Option<WitnessRecord>,
    pub stats: StatsRecord,
}

#[derive(Debug, Serialize)]
pub struct ConfigRecord {
    pub index: ConfigIndex,
    pub state: String,
    pub term: String,
}

#[derive(Debug, Serialize)]
pub struct WitnessRecord {
    pub coalition: Vec<String>,
    pub domain: Vec<String>,
    /// State to chosen labeled action.
    pub choice: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
pub struct StatsRecord {
    pub configs: usize,
    pub strategies_examined: u128,
    pub scc_runs: u64,
}

impl Record {
    pub fn new(formula: &Formula, space: &StateSpace, c: ConfigIndex, v: &Verdict) -> Self {
        let config = &space.configs[c];
        Self {
            schema: SCHEMA,
            formula: formula.to_string(),
            config: ConfigRecord {
                index: c,
                state: config.state.to_string(),
                term: config.term.to_string(),
            },
            verdict: v.value,
            witness: v.witness.as_ref().map(|w| WitnessRecord {
                coalition: w.coalition.iter().map(ToString::to_string).collect(),
                domain: w.domain().map(ToString::to_string).collect(),
                choice: w
                    .choice
                    .iter()
                    .map(|(s, a)| (s.to_string(), a.to_string()))
                    .collect(),
            }),
            stats: StatsRecord {
                configs: v.stats.configs,
                strategies_examined: v.stats.strategies_examined,
                scc_runs: v.stats.scc_runs,
            },
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    /// `true  <formula>` followed by indented detail lines.
    pub fn text(&self) -> String {
        let mut out = format!(
            "{:<5}  {}\n  at {} ({}, {})\n",
            self.verdict, self.formula, self.config.index, self.config.state, self.config.term
        );
        if let Some(w) = &self.witness {
            let choice: Vec<String> = w.choice.iter().map(|(s, a)| format!("{s} -> {a}")).collect();
            out.push_str(&format!(
                "  witness <<{}>> {{{}}}\n",
                w.coalition.join(","),
                choice.join(", ")
            ));
        }
        out.push_str(&format!(
            "  configs {}, strategies examined {}, scc runs {}\n",
            self.stats.configs, self.stats.strategies_examined, self.stats.scc_runs
        ));
        out
    }
}
