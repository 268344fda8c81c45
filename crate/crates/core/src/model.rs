//! Validated models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::PropId;
use crate::syntax::{
    Action, AgentId, LabeledAction, LabeledProcessTerm, Name, Payload, ProcessTerm, Value, Var,
};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                Self(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

id_type!(
    /// A global state.
    StateId
);
id_type!(
    /// An agent's epistemic state, the image of a global state under `h`.
    EpistemicStateId
);
id_type!(
    /// The name of an explicitly listed labeled process (explicit mode).
    MName
);

/// How the labeled-process transitions are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// From the operational rules.
    #[default]
    Derived,
    /// From the `delta` relation listed in the model.
    Explicit,
}

/// Where exploration starts on the term side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitTerm {
    System,
    Named(MName),
}

/// An edge `s -act-> s'` of the state relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct KEdge {
    pub from: StateId,
    pub action: LabeledAction,
    pub to: StateId,
}

/// An edge `M -act-> M'` of an explicitly given term relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeltaEdge {
    pub from: MName,
    pub action: LabeledAction,
    pub to: MName,
}

#[derive(Debug, Clone, Default)]
pub struct ModelDef {
    pub agents: Vec<AgentId>,
    pub values: Vec<Value>,
    pub props: Vec<PropId>,
    pub mode: Mode,
    pub equations: BTreeMap<Name, ProcessTerm>,
    pub system: Option<LabeledProcessTerm>,
    pub states: Vec<StateId>,
    pub init_state: Option<StateId>,
    pub k_relation: Vec<KEdge>,
    pub explicit_terms: BTreeMap<MName, LabeledProcessTerm>,
    pub delta: Vec<DeltaEdge>,
    pub init_term: Option<InitTerm>,
    pub h_map: BTreeMap<(AgentId, StateId), EpistemicStateId>,
    pub labeling: BTreeMap<StateId, BTreeSet<PropId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("no system term: derived models need `system = ...;`, explicit models need `initM NAME;`")]
    MissingSystem,
    #[error("no states declared")]
    NoStates,
    #[error("no initial state (`init STATE;`)")]
    MissingInit,
    #[error("no values declared")]
    NoValues,
    #[error("{kind} `{name}` declared twice")]
    Duplicate { kind: &'static str, name: String },
    #[error("undeclared agent `{0}`")]
    UnknownAgent(String),
    #[error("undeclared state `{0}`")]
    UnknownState(String),
    #[error("undeclared proposition `{0}`")]
    UnknownProp(String),
    #[error("undeclared value `{0}`")]
    UnknownValue(String),
    #[error("undefined process constant `{0}`")]
    UndefinedConstant(String),
    #[error("undeclared labeled process `{0}`")]
    UnknownTerm(String),
    #[error("receive binder `{0}` collides with a declared value")]
    VariableShadowsValue(String),
    #[error("epistemic map is not total: no entry for agent `{agent}` at state `{state}`")]
    NonTotalEpistemicMap { agent: String, state: String },
    #[error("unguarded recursion through process constant `{0}`")]
    UnguardedRecursion(String),
    #[error("agent `{0}` labels more than one process")]
    DuplicateAgentLeaf(String),
    #[error("restriction of `{name}` captures a free name of constant `{constant}`")]
    CapturedConstantName { name: String, constant: String },
    #[error("group sequencing `(P).Q` is only accepted in explicit mode")]
    GroupSequencingInDerivedMode,
    #[error("coalition must not be empty")]
    EmptyCoalition,
}

impl ModelDef {
    pub fn init_state(&self) -> &StateId {
        self.init_state
            .as_ref()
            .expect("validated model has an initial state")
    }

    pub fn has_agent(&self, a: &AgentId) -> bool {
        self.agents.contains(a)
    }

    pub fn has_prop(&self, p: &PropId) -> bool {
        self.props.contains(p)
    }

    pub fn has_state(&self, s: &StateId) -> bool {
        self.states.contains(s)
    }

    pub fn state_index(&self, s: &StateId) -> Option<usize> {
        self.states.iter().position(|x| x == s)
    }

    pub fn h(&self, agent: &AgentId, state: &StateId) -> &EpistemicStateId {
        &self.h_map[&(agent.clone(), state.clone())]
    }

    pub fn holds(&self, state: &StateId, p: &PropId) -> bool {
        self.labeling.get(state).is_some_and(|ps| ps.contains(p))
    }

    /// Checks cross references and resolves send payloads: an identifier
    /// bound by an enclosing receive stays a variable, anything else must
    /// be a declared value.
    pub fn validate(mut self) -> Result<ModelDef, ValidationError> {
        match self.mode {
            Mode::Derived if self.system.is_none() => return Err(ValidationError::MissingSystem),
            Mode::Explicit if self.init_term.is_none() => return Err(ValidationError::MissingSystem),
            _ => {}
        }
        if self.init_term.is_none() {
            self.init_term = Some(InitTerm::System);
        }
        if self.states.is_empty() {
            return Err(ValidationError::NoStates);
        }
        if self.values.is_empty() {
            return Err(ValidationError::NoValues);
        }
        let init = self.init_state.clone().ok_or(ValidationError::MissingInit)?;
        self.check_state(&init)?;
        check_unique("agent", &self.agents)?;
        check_unique("value", &self.values)?;
        check_unique("proposition", &self.props)?;
        check_unique("state", &self.states)?;

        let values: BTreeSet<Value> = self.values.iter().cloned().collect();
        let mut eqs = std::mem::take(&mut self.equations);
        for body in eqs.values_mut() {
            *body = resolve_payloads(body, &values, &mut Vec::new())?;
        }
        self.equations = eqs;
        if let Some(sys) = self.system.take() {
            let sys = resolve_labeled(&sys, &values)?;
            self.check_labeled(&sys)?;
            self.system = Some(sys);
        }
        let mut terms = std::mem::take(&mut self.explicit_terms);
        for term in terms.values_mut() {
            *term = resolve_labeled(term, &values)?;
            self.check_labeled(term)?;
        }
        self.explicit_terms = terms;

        for body in self.equations.values() {
            self.check_constants(body)?;
            if self.mode == Mode::Derived && contains_seq(body) {
                return Err(ValidationError::GroupSequencingInDerivedMode);
            }
        }
        if self.mode == Mode::Derived {
            if let Some(sys) = &self.system {
                if sys.processes().into_iter().any(contains_seq) {
                    return Err(ValidationError::GroupSequencingInDerivedMode);
                }
            }
            self.check_guarded()?;
        }
        self.check_capture()?;

        for e in &self.k_relation {
            self.check_state(&e.from)?;
            self.check_state(&e.to)?;
            self.check_label(&e.action)?;
        }
        if let Some(InitTerm::Named(m)) = &self.init_term {
            self.check_term_name(m)?;
        }
        for d in &self.delta {
            self.check_term_name(&d.from)?;
            self.check_term_name(&d.to)?;
            self.check_label(&d.action)?;
        }
        for (agent, state) in self.h_map.keys() {
            if !self.has_agent(agent) {
                return Err(ValidationError::UnknownAgent(agent.to_string()));
            }
            self.check_state(state)?;
        }
        for agent in &self.agents {
            for state in &self.states {
                if !self.h_map.contains_key(&(agent.clone(), state.clone())) {
                    return Err(ValidationError::NonTotalEpistemicMap {
                        agent: agent.to_string(),
                        state: state.to_string(),
                    });
                }
            }
        }
        for (state, props) in &self.labeling {
            self.check_state(state)?;
            for p in props {
                if !self.has_prop(p) {
                    return Err(ValidationError::UnknownProp(p.to_string()));
                }
            }
        }
        Ok(self)
    }

    fn check_state(&self, s: &StateId) -> Result<(), ValidationError> {
        if self.has_state(s) {
            Ok(())
        } else {
            Err(ValidationError::UnknownState(s.to_string()))
        }
    }

    fn check_term_name(&self, m: &MName) -> Result<(), ValidationError> {
        if self.explicit_terms.contains_key(m) {
            Ok(())
        } else {
            Err(ValidationError::UnknownTerm(m.to_string()))
        }
    }

    fn check_label(&self, act: &LabeledAction) -> Result<(), ValidationError> {
        for a in act.agents() {
            if !self.has_agent(a) {
                return Err(ValidationError::UnknownAgent(a.to_string()));
            }
        }
        if let LabeledAction::Visible { act, .. } = act {
            if !self.values.contains(act.value()) {
                return Err(ValidationError::UnknownValue(act.value().to_string()));
            }
        }
        Ok(())
    }

    fn check_labeled(&self, m: &LabeledProcessTerm) -> Result<(), ValidationError> {
        let mut seen = BTreeSet::new();
        for a in m.agent_leaves() {
            if !self.has_agent(a) {
                return Err(ValidationError::UnknownAgent(a.to_string()));
            }
            if !seen.insert(a) {
                return Err(ValidationError::DuplicateAgentLeaf(a.to_string()));
            }
        }
        for p in m.processes() {
            self.check_constants(p)?;
        }
        Ok(())
    }

    fn check_constants(&self, p: &ProcessTerm) -> Result<(), ValidationError> {
        for c in p.constants() {
            if !self.equations.contains_key(&c) {
                return Err(ValidationError::UndefinedConstant(c.to_string()));
            }
        }
        Ok(())
    }

    /// Every cycle through constant references must pass through a prefix.
    fn check_guarded(&self) -> Result<(), ValidationError> {
        let unguarded: BTreeMap<&Name, BTreeSet<Name>> = self
            .equations
            .iter()
            .map(|(c, body)| (c, unguarded_constants(body)))
            .collect();
        // depth-first search for a cycle in the unguarded-reference graph
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        fn visit<'a>(
            c: &'a Name,
            graph: &'a BTreeMap<&'a Name, BTreeSet<Name>>,
            marks: &mut BTreeMap<&'a Name, Mark>,
        ) -> Result<(), ValidationError> {
            match marks.get(c) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Open) => return Err(ValidationError::UnguardedRecursion(c.to_string())),
                None => {}
            }
            marks.insert(c, Mark::Open);
            if let Some(next) = graph.get(c) {
                for d in next {
                    visit(d, graph, marks)?;
                }
            }
            marks.insert(c, Mark::Done);
            Ok(())
        }
        let mut marks = BTreeMap::new();
        for c in unguarded.keys() {
            visit(c, &unguarded, &mut marks)?;
        }
        Ok(())
    }

    /// Free names of each constant, following references to other constants.
    pub fn constant_free_names(&self) -> BTreeMap<Name, BTreeSet<Name>> {
        let mut fns: BTreeMap<Name, BTreeSet<Name>> = self
            .equations
            .iter()
            .map(|(c, body)| (c.clone(), body.free_names()))
            .collect();
        loop {
            let mut changed = false;
            for (c, body) in &self.equations {
                let mut acc = fns[c].clone();
                for (d, bound) in constants_with_binders(body) {
                    if let Some(names) = fns.get(&d) {
                        acc.extend(names.iter().filter(|n| !bound.contains(n)).cloned());
                    }
                }
                if acc.len() != fns[c].len() {
                    fns.insert(c.clone(), acc);
                    changed = true;
                }
            }
            if !changed {
                return fns;
            }
        }
    }

    /// Restricted names may not occur free in a constant used in their scope.
    fn check_capture(&self) -> Result<(), ValidationError> {
        let fns = self.constant_free_names();
        let check = |p: &ProcessTerm, outer: &[Name]| -> Result<(), ValidationError> {
            for (c, bound) in constants_with_binders(p) {
                let names = fns.get(&c).cloned().unwrap_or_default();
                for b in outer.iter().chain(bound.iter()) {
                    if names.contains(b) {
                        return Err(ValidationError::CapturedConstantName {
                            name: b.to_string(),
                            constant: c.to_string(),
                        });
                    }
                }
            }
            Ok(())
        };
        for body in self.equations.values() {
            check(body, &[])?;
        }
        let mut labeled: Vec<&LabeledProcessTerm> = self.explicit_terms.values().collect();
        labeled.extend(self.system.iter());
        for m in labeled {
            let mut stack = vec![(m, Vec::<Name>::new())];
            while let Some((m, outer)) = stack.pop() {
                match m {
                    LabeledProcessTerm::Agent(p, _) => check(p, &outer)?,
                    LabeledProcessTerm::Par(l, r) => {
                        stack.push((l, outer.clone()));
                        stack.push((r, outer));
                    }
                    LabeledProcessTerm::Restrict(n, b) => {
                        let mut outer = outer;
                        outer.push(n.clone());
                        stack.push((b, outer));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_unique<T: Ord + fmt::Display>(kind: &'static str, xs: &[T]) -> Result<(), ValidationError> {
    let mut seen = BTreeSet::new();
    for x in xs {
        if !seen.insert(x) {
            return Err(ValidationError::Duplicate {
                kind,
                name: x.to_string(),
            });
        }
    }
    Ok(())
}

fn contains_seq(p: &ProcessTerm) -> bool {
    let mut found = false;
    p.visit(&mut |q| found |= matches!(q, ProcessTerm::Seq(..)));
    found
}

/// Constants reachable without passing a prefix.
fn unguarded_constants(p: &ProcessTerm) -> BTreeSet<Name> {
    match p {
        ProcessTerm::Nil | ProcessTerm::Prefix(..) => BTreeSet::new(),
        ProcessTerm::Const(c) => BTreeSet::from([c.clone()]),
        ProcessTerm::Restrict(_, b) => unguarded_constants(b),
        ProcessTerm::Par(l, r) | ProcessTerm::Sum(l, r) => {
            let mut out = unguarded_constants(l);
            out.extend(unguarded_constants(r));
            out
        }
        // a group is inert; whatever follows it waits for the group
        ProcessTerm::Seq(l, _) => unguarded_constants(l),
    }
}

/// Each constant occurrence with the restricted names in scope at that point.
fn constants_with_binders(p: &ProcessTerm) -> Vec<(Name, Vec<Name>)> {
    fn go(p: &ProcessTerm, bound: &mut Vec<Name>, out: &mut Vec<(Name, Vec<Name>)>) {
        match p {
            ProcessTerm::Nil => {}
            ProcessTerm::Const(c) => out.push((c.clone(), bound.clone())),
            ProcessTerm::Prefix(_, k) => go(k, bound, out),
            ProcessTerm::Restrict(n, b) => {
                bound.push(n.clone());
                go(b, bound, out);
                bound.pop();
            }
            ProcessTerm::Par(l, r) | ProcessTerm::Sum(l, r) | ProcessTerm::Seq(l, r) => {
                go(l, bound, out);
                go(r, bound, out);
            }
        }
    }
    let mut out = Vec::new();
    go(p, &mut Vec::new(), &mut out);
    out
}

fn resolve_labeled(
    m: &LabeledProcessTerm,
    values: &BTreeSet<Value>,
) -> Result<LabeledProcessTerm, ValidationError> {
    Ok(match m {
        LabeledProcessTerm::Agent(p, a) => {
            LabeledProcessTerm::Agent(resolve_payloads(p, values, &mut Vec::new())?, a.clone())
        }
        LabeledProcessTerm::Par(l, r) => {
            LabeledProcessTerm::par(resolve_labeled(l, values)?, resolve_labeled(r, values)?)
        }
        LabeledProcessTerm::Restrict(n, b) => {
            LabeledProcessTerm::restrict(n.clone(), resolve_labeled(b, values)?)
        }
    })
}

/// The parser produces `Payload::Var` for every send argument.
fn resolve_payloads(
    p: &ProcessTerm,
    values: &BTreeSet<Value>,
    scope: &mut Vec<Var>,
) -> Result<ProcessTerm, ValidationError> {
    Ok(match p {
        ProcessTerm::Nil | ProcessTerm::Const(_) => p.clone(),
        ProcessTerm::Prefix(act, cont) => match act {
            Action::Receive { binder, .. } => {
                if values.contains(&Value::new(binder.as_str())) {
                    return Err(ValidationError::VariableShadowsValue(binder.to_string()));
                }
                scope.push(binder.clone());
                let cont = resolve_payloads(cont, values, scope);
                scope.pop();
                ProcessTerm::prefix(act.clone(), cont?)
            }
            Action::Send { channel, payload } => {
                let payload = match payload {
                    Payload::Var(x) if scope.contains(x) => payload.clone(),
                    other => {
                        let v = Value::new(match other {
                            Payload::Var(x) => x.as_str(),
                            Payload::Value(v) => v.as_str(),
                        });
                        if !values.contains(&v) {
                            return Err(ValidationError::UnknownValue(v.to_string()));
                        }
                        Payload::Value(v)
                    }
                };
                ProcessTerm::prefix(
                    Action::Send {
                        channel: channel.clone(),
                        payload,
                    },
                    resolve_payloads(cont, values, scope)?,
                )
            }
            Action::Tau => ProcessTerm::prefix(Action::Tau, resolve_payloads(cont, values, scope)?),
        },
        ProcessTerm::Restrict(n, b) => ProcessTerm::restrict(n.clone(), resolve_payloads(b, values, scope)?),
        ProcessTerm::Par(l, r) => ProcessTerm::par(
            resolve_payloads(l, values, scope)?,
            resolve_payloads(r, values, scope)?,
        ),
        ProcessTerm::Sum(l, r) => ProcessTerm::sum(
            resolve_payloads(l, values, scope)?,
            resolve_payloads(r, values, scope)?,
        ),
        ProcessTerm::Seq(l, r) => ProcessTerm::Seq(
            Box::new(resolve_payloads(l, values, scope)?),
            Box::new(resolve_payloads(r, values, scope)?),
        ),
    })
}
