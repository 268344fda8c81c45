//! Reachable configuration graph.
//!
//! A configuration pairs a global state with a term. It steps on `act` when
//! the term has an `act` transition and `K` has an `act` edge from the state.
//! Exploration is breadth-first; successors are visited in label order, so
//! configuration indices are deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::congruence::canonicalize;
use crate::model::{InitTerm, MName, Mode, ModelDef, StateId};
use crate::sos::{Semantics, UnfoldLimitExceeded};
use crate::syntax::{LabeledAction, LabeledProcessTerm};

pub type ConfigIndex = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorationLimits {
    pub max_configs: usize,
    pub max_const_unfold_depth: usize,
}

impl Default for ExplorationLimits {
    fn default() -> Self {
        Self {
            max_configs: 100_000,
            max_const_unfold_depth: 64,
        }
    }
}

/// The term half of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermRef {
    Derived(LabeledProcessTerm),
    Named(MName),
}

impl fmt::Display for TermRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermRef::Derived(m) => m.fmt(f),
            TermRef::Named(n) => n.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub term: TermRef,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.state, self.term)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: ConfigIndex,
    pub action: LabeledAction,
    pub to: ConfigIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("more than {max_configs} configurations; frontier configuration {frontier}")]
    LimitExceeded { max_configs: usize, frontier: String },
    #[error(transparent)]
    Unfold(#[from] UnfoldLimitExceeded),
}

/// The explored graph. Edges are sorted by `(from, action, to)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    pub configs: Vec<Configuration>,
    /// Deduplication key of each configuration's term.
    pub term_keys: Vec<String>,
    pub edges: Vec<Transition>,
    pub init: ConfigIndex,
    out: Vec<Vec<usize>>,
}

impl StateSpace {
    /// Builds a space from explicit parts; edges are sorted and deduplicated.
    pub fn from_parts(
        configs: Vec<Configuration>,
        term_keys: Vec<String>,
        mut edges: Vec<Transition>,
        init: ConfigIndex,
    ) -> Self {
        edges.sort();
        edges.dedup();
        let mut out = vec![Vec::new(); configs.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.from].push(i);
        }
        Self {
            configs,
            term_keys,
            edges,
            init,
            out,
        }
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// Indices into `edges` of the transitions leaving `c`.
    pub fn out_edges(&self, c: ConfigIndex) -> &[usize] {
        &self.out[c]
    }

    pub fn successors(&self, c: ConfigIndex) -> impl Iterator<Item = ConfigIndex> + '_ {
        self.out[c].iter().map(|&e| self.edges[e].to)
    }

    pub fn enabled(&self, c: ConfigIndex) -> BTreeSet<&LabeledAction> {
        self.out[c].iter().map(|&e| &self.edges[e].action).collect()
    }

    /// States occurring in the space, in first-occurrence order.
    pub fn states(&self) -> Vec<&StateId> {
        let mut seen = BTreeSet::new();
        self.configs
            .iter()
            .map(|c| &c.state)
            .filter(|s| seen.insert(*s))
            .collect()
    }

    pub fn find(&self, state: &str, term_key: &str) -> Option<ConfigIndex> {
        (0..self.len()).find(|&i| self.configs[i].state.as_str() == state && self.term_keys[i] == term_key)
    }

    /// `N <index> <state> <term>` and `E <from> <label> <to>` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.configs.iter().enumerate() {
            let _ = writeln!(out, "N {i} {} {}", c.state, self.term_keys[i]);
        }
        for e in &self.edges {
            let _ = writeln!(out, "E {} {} {}", e.from, e.action, e.to);
        }
        out
    }
}

/// Transitions of one configuration: the product of term steps and `K`.
pub fn config_steps(
    c: &Configuration,
    model: &ModelDef,
    limits: &ExplorationLimits,
) -> Result<BTreeSet<(LabeledAction, Configuration)>, UnfoldLimitExceeded> {
    let k_out: Vec<(&LabeledAction, &StateId)> = model
        .k_relation
        .iter()
        .filter(|e| e.from == c.state)
        .map(|e| (&e.action, &e.to))
        .collect();
    let term_steps: Vec<(LabeledAction, TermRef)> = match &c.term {
        TermRef::Derived(m) => semantics(model, limits)
            .labeled_steps(m)?
            .into_iter()
            .map(|(a, m2)| (a, TermRef::Derived(m2)))
            .collect(),
        TermRef::Named(n) => model
            .delta
            .iter()
            .filter(|d| &d.from == n)
            .map(|d| (d.action.clone(), TermRef::Named(d.to.clone())))
            .collect(),
    };
    let mut out = BTreeSet::new();
    for (act, term) in term_steps {
        for (k_act, to) in &k_out {
            if **k_act == act {
                let next = Configuration {
                    state: (*to).clone(),
                    term: term.clone(),
                };
                out.insert((act.clone(), next));
            }
        }
    }
    Ok(out)
}

fn semantics<'a>(model: &'a ModelDef, limits: &ExplorationLimits) -> Semantics<'a> {
    Semantics {
        values: &model.values,
        equations: &model.equations,
        max_unfold: limits.max_const_unfold_depth,
    }
}

pub fn initial_configuration(model: &ModelDef) -> Configuration {
    let term = match model.init_term.as_ref() {
        Some(InitTerm::Named(n)) => TermRef::Named(n.clone()),
        _ => TermRef::Derived(
            model
                .system
                .clone()
                .expect("validated derived model has a system"),
        ),
    };
    Configuration {
        state: model.init_state().clone(),
        term,
    }
}

fn term_key(t: &TermRef) -> String {
    match t {
        TermRef::Derived(m) => canonicalize(m).as_str().to_owned(),
        TermRef::Named(n) => n.as_str().to_owned(),
    }
}

pub fn explore(model: &ModelDef, limits: &ExplorationLimits) -> Result<StateSpace, ExploreError> {
    explore_from(model, initial_configuration(model), limits)
}

/// Explores from an arbitrary starting configuration.
pub fn explore_from(
    model: &ModelDef,
    start: Configuration,
    limits: &ExplorationLimits,
) -> Result<StateSpace, ExploreError> {
    debug_assert!(model.mode == Mode::Explicit || matches!(start.term, TermRef::Derived(_)));
    let mut index: HashMap<(StateId, String), ConfigIndex> = HashMap::new();
    let mut configs = Vec::new();
    let mut keys = Vec::new();
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();

    let key = term_key(&start.term);
    index.insert((start.state.clone(), key.clone()), 0);
    configs.push(start);
    keys.push(key);
    queue.push_back(0);

    while let Some(ci) = queue.pop_front() {
        let steps = config_steps(&configs[ci], model, limits)?;
        // group by label so discovery order follows sorted labels
        let mut by_label: BTreeMap<LabeledAction, Vec<Configuration>> = BTreeMap::new();
        for (a, c) in steps {
            by_label.entry(a).or_default().push(c);
        }
        for (action, targets) in by_label {
            for next in targets {
                let key = term_key(&next.term);
                let slot = (next.state.clone(), key.clone());
                let to = match index.get(&slot) {
                    Some(&j) => j,
                    None => {
                        if configs.len() >= limits.max_configs {
                            return Err(ExploreError::LimitExceeded {
                                max_configs: limits.max_configs,
                                frontier: configs[ci].to_string(),
                            });
                        }
                        let j = configs.len();
                        index.insert(slot, j);
                        configs.push(next);
                        keys.push(key);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push(Transition {
                    from: ci,
                    action: action.clone(),
                    to,
                });
            }
        }
    }
    Ok(StateSpace::from_parts(configs, keys, edges, 0))
}
