//! Seeded random inputs: models as source text, formulas, terms, graphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use epc_core::explore::{explore, ExplorationLimits, StateSpace};
use epc_core::formula::{Coalition, Formula};
use epc_core::model::ModelDef;
use epc_core::parse::parse_model;
use epc_core::syntax::{Action, AgentId, LabeledProcessTerm, ProcessTerm};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const CHANNELS: [&str; 2] = ["a", "b"];
pub const PROPS: [&str; 2] = ["p", "q"];

pub struct RandomModel {
    pub src: String,
    pub model: ModelDef,
    pub space: StateSpace,
}

struct ProcGen<'r> {
    rng: &'r mut StdRng,
    values: Vec<String>,
    constant: Option<String>,
}

impl ProcGen<'_> {
    fn action(&mut self, bound: &[String]) -> (String, Option<String>) {
        let ch = *CHANNELS.choose(self.rng).unwrap();
        match self.rng.gen_range(0..3) {
            0 => ("tau".into(), None),
            1 => {
                let payload = if !bound.is_empty() && self.rng.gen_bool(0.4) {
                    bound.choose(self.rng).unwrap().clone()
                } else {
                    self.values.choose(self.rng).unwrap().clone()
                };
                (format!("'{ch}<{payload}>"), None)
            }
            _ => {
                let x = format!("x{}", bound.len());
                (format!("{ch}({x})"), Some(x))
            }
        }
    }

    /// `guarded`: a constant reference here would sit under a prefix.
    /// `flat`: no parallel composition or restriction (keeps recursion finite).
    fn process(&mut self, depth: usize, guarded: bool, flat: bool, bound: &mut Vec<String>) -> String {
        let leaf = |g: &mut Self| -> String {
            match &g.constant {
                Some(c) if guarded && g.rng.gen_bool(0.6) => c.clone(),
                _ => "0".into(),
            }
        };
        if depth == 0 {
            return leaf(self);
        }
        let pick = self.rng.gen_range(0..10);
        match pick {
            0 => leaf(self),
            1..=5 => {
                let (act, binder) = self.action(bound);
                if let Some(x) = &binder {
                    bound.push(x.clone());
                }
                let cont = self.process(depth - 1, true, flat, bound);
                if binder.is_some() {
                    bound.pop();
                }
                format!("{act}.{cont}")
            }
            6 | 7 => {
                let l = self.process(depth - 1, guarded, flat, bound);
                let r = self.process(depth - 1, guarded, flat, bound);
                format!("({l} + {r})")
            }
            8 if !flat => {
                let l = self.process(depth - 1, guarded, flat, bound);
                let r = self.process(depth - 1, guarded, flat, bound);
                format!("({l} | {r})")
            }
            _ if !flat && self.constant.is_none() => {
                let ch = *CHANNELS.choose(self.rng).unwrap();
                let body = self.process(depth - 1, guarded, flat, bound);
                format!("new {ch} in ({body})")
            }
            _ => {
                let (act, binder) = self.action(bound);
                if let Some(x) = &binder {
                    bound.push(x.clone());
                }
                let cont = self.process(depth - 1, true, flat, bound);
                if binder.is_some() {
                    bound.pop();
                }
                format!("{act}.{cont}")
            }
        }
    }
}

fn all_labels(agents: &[String], values: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for i in agents {
        for ch in CHANNELS {
            for v in values {
                out.push(format!("'{ch}<{v}>@{i}"));
                out.push(format!("{ch}<{v}>@{i}"));
            }
        }
        out.push(format!("tau@{i}"));
        for j in agents {
            if i != j {
                out.push(format!("tau({i},{j})"));
            }
        }
    }
    out
}

/// A derived-mode model with at most `max_states` states, 3 agents and 2
/// values, and at most `max_configs` reachable configurations.
pub fn random_model(rng: &mut StdRng, max_states: usize, max_configs: usize) -> RandomModel {
    loop {
        if let Some(m) = try_random_model(rng, max_states, max_configs) {
            return m;
        }
    }
}

fn try_random_model(rng: &mut StdRng, max_states: usize, max_configs: usize) -> Option<RandomModel> {
    let n_agents = rng.gen_range(1..=3);
    let n_values = rng.gen_range(1..=2);
    let agents: Vec<String> = (1..=n_agents).map(|i| i.to_string()).collect();
    let values: Vec<String> = (1..=n_values).map(|i| format!("t{i}")).collect();

    let mut header = String::new();
    let _ = writeln!(header, "mode derived;");
    let _ = writeln!(header, "agents {};", agents.join(" "));
    let _ = writeln!(header, "values {};", values.join(" "));
    let _ = writeln!(header, "props {};", PROPS.join(" "));
    let mut leaves = Vec::new();
    for agent in &agents {
        let recursive = rng.gen_bool(0.5);
        let constant = recursive.then(|| format!("C{agent}"));
        let mut g = ProcGen {
            rng,
            values: values.clone(),
            constant: constant.clone(),
        };
        if let Some(c) = constant {
            let body = g.process(4, false, true, &mut Vec::new());
            let _ = writeln!(header, "def {c} = {body};");
            leaves.push(format!("{{{c}}}@{agent}"));
        } else {
            let body = g.process(4, false, false, &mut Vec::new());
            leaves.push(format!("{{{body}}}@{agent}"));
        }
    }
    let mut system = leaves.join(" | ");
    if rng.gen_bool(0.2) {
        let ch = *CHANNELS.choose(rng).unwrap();
        system = format!("new {ch} in ({system})");
    }
    let _ = writeln!(header, "system = {system};");
    let limits = ExplorationLimits {
        max_configs,
        ..ExplorationLimits::default()
    };

    // discover which labels the terms can ever perform
    let mut probe = header.clone();
    let _ = writeln!(probe, "states s; init s;");
    for l in all_labels(&agents, &values) {
        let _ = writeln!(probe, "K s -{l}-> s;");
    }
    for a in &agents {
        let _ = writeln!(probe, "h {a} : s=e;");
    }
    let probe_model = parse_model(&probe).ok()?;
    let probe_space = explore(&probe_model, &limits).ok()?;
    let labels: BTreeSet<String> = probe_space.edges.iter().map(|e| e.action.to_string()).collect();
    if labels.is_empty() {
        return None;
    }

    let n_states = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let mut src = header;
    let _ = writeln!(src, "states {};", states.join(" "));
    let _ = writeln!(src, "init s0;");
    for s in &states {
        for l in &labels {
            if rng.gen_bool(0.5) {
                let to = states.choose(rng).unwrap();
                let _ = writeln!(src, "K {s} -{l}-> {to};");
            }
        }
    }
    for a in &agents {
        let entries: Vec<String> = states
            .iter()
            .map(|s| format!("{s}=e{}", rng.gen_range(0..3)))
            .collect();
        let _ = writeln!(src, "h {a} : {};", entries.join(" "));
    }
    for s in &states {
        let props: Vec<&str> = PROPS.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let _ = writeln!(src, "T {s} : {};", props.join(" "));
    }
    let model = parse_model(&src).ok()?;
    let space = explore(&model, &limits).ok()?;
    if space.len() < 2 || space.edges.is_empty() {
        return None;
    }
    Some(RandomModel { src, model, space })
}

pub fn random_coalition(rng: &mut StdRng, agents: &[AgentId]) -> Coalition {
    loop {
        let picked: Vec<AgentId> = agents.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if let Some(c) = Coalition::new(picked) {
            return c;
        }
    }
}

/// A formula of depth at most `depth + 1`.
pub fn random_formula(rng: &mut StdRng, agents: &[AgentId], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return Formula::prop(PROPS.choose(rng).unwrap());
    }
    let sub = |rng: &mut StdRng| Box::new(random_formula(rng, agents, depth - 1));
    match rng.gen_range(0..11) {
        0 => Formula::Not(sub(rng)),
        1 => Formula::Or(sub(rng), sub(rng)),
        2 => Formula::Know(agents.choose(rng).unwrap().clone(), sub(rng)),
        3 => Formula::Every(random_coalition(rng, agents), sub(rng)),
        4 => Formula::Dist(random_coalition(rng, agents), sub(rng)),
        5 => Formula::Common(random_coalition(rng, agents), sub(rng)),
        6 => Formula::CoalNext(random_coalition(rng, agents), sub(rng)),
        7 => Formula::CoalGlobally(random_coalition(rng, agents), sub(rng)),
        8 => Formula::CoalFinally(random_coalition(rng, agents), sub(rng)),
        9 => Formula::CoalUntil(random_coalition(rng, agents), sub(rng), sub(rng)),
        _ => Formula::Not(sub(rng)),
    }
}

/// A formula whose outermost operator is a coalition operator.
pub fn random_strategic_formula(rng: &mut StdRng, agents: &[AgentId], depth: usize) -> Formula {
    let a = random_coalition(rng, agents);
    let sub = |rng: &mut StdRng| Box::new(random_formula(rng, agents, depth.saturating_sub(1)));
    match rng.gen_range(0..4) {
        0 => Formula::CoalNext(a, sub(rng)),
        1 => Formula::CoalGlobally(a, sub(rng)),
        2 => Formula::CoalFinally(a, sub(rng)),
        _ => Formula::CoalUntil(a, sub(rng), sub(rng)),
    }
}

const TERM_NAMES: [&str; 4] = ["a", "b", "c", "d"];
const TERM_VALUES: [&str; 2] = ["t1", "t2"];

/// A process term over a few channel names, with restrictions and binders.
pub fn random_process(rng: &mut StdRng, depth: usize) -> ProcessTerm {
    random_process_in(rng, depth, &mut Vec::new())
}

fn random_process_in(rng: &mut StdRng, depth: usize, bound: &mut Vec<String>) -> ProcessTerm {
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => ProcessTerm::constant("Z"),
            _ => ProcessTerm::Nil,
        };
    }
    match rng.gen_range(0..9) {
        0 => ProcessTerm::Nil,
        1 | 2 => {
            let ch = *TERM_NAMES.choose(rng).unwrap();
            let act = match rng.gen_range(0..3) {
                0 => Action::Tau,
                1 if !bound.is_empty() => Action::send_var(ch, bound.choose(rng).unwrap().as_str()),
                1 => Action::send(ch, *TERM_VALUES.choose(rng).unwrap()),
                _ => {
                    let x = format!("y{}", rng.gen_range(0..3));
                    bound.push(x.clone());
                    let cont = random_process_in(rng, depth - 1, bound);
                    bound.pop();
                    return ProcessTerm::prefix(Action::receive(ch, x.as_str()), cont);
                }
            };
            ProcessTerm::prefix(act, random_process_in(rng, depth - 1, bound))
        }
        3 | 4 => ProcessTerm::par(
            random_process_in(rng, depth - 1, bound),
            random_process_in(rng, depth - 1, bound),
        ),
        5 | 6 => ProcessTerm::sum(
            random_process_in(rng, depth - 1, bound),
            random_process_in(rng, depth - 1, bound),
        ),
        _ => ProcessTerm::restrict(
            *TERM_NAMES.choose(rng).unwrap(),
            random_process_in(rng, depth - 1, bound),
        ),
    }
}

pub fn random_labeled(rng: &mut StdRng, depth: usize) -> LabeledProcessTerm {
    let n = rng.gen_range(1..=3);
    let parts = (0..n).map(|i| LabeledProcessTerm::agent(random_process(rng, depth), format!("{}", i + 1)));
    let mut m = LabeledProcessTerm::par_all(parts).unwrap();
    if rng.gen_bool(0.3) {
        m = LabeledProcessTerm::restrict(*TERM_NAMES.choose(rng).unwrap(), m);
    }
    m
}

/// Adjacency lists of a random directed graph.
pub fn random_graph(rng: &mut StdRng, max_vertices: usize) -> Vec<Vec<usize>> {
    let n = rng.gen_range(1..=max_vertices);
    let density = rng.gen_range(0.05..=0.5);
    (0..n)
        .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
        .collect()
}
