//! Term language: names, values, actions, processes and agent-labeled processes.
//!
//! Channel names, variables and values live in separate namespaces. A receive
//! `a(x)` binds the variable `x` in its continuation; a restriction
//! `new a in P` binds the channel `a`. Nothing binds values.

use std::collections::BTreeSet;
use std::fmt;

macro_rules! token_newtype {
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

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
    };
}

token_newtype!(
    /// A channel or process-constant name.
    Name
);
token_newtype!(
    /// A variable bound by a receive prefix.
    Var
);
token_newtype!(
    /// A data or knowledge item that can travel over a channel.
    Value
);
token_newtype!(
    /// An agent of the system.
    AgentId
);

/// What a send carries: a concrete value, or a variable bound by an
/// enclosing receive that is replaced before the send can fire.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Value(Value),
    Var(Var),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Value(v) => v.fmt(f),
            Payload::Var(x) => x.fmt(f),
        }
    }
}

/// A prefix action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    /// `'a<t>`
    Send { channel: Name, payload: Payload },
    /// `a(x)`
    Receive { channel: Name, binder: Var },
    /// `tau`
    Tau,
}

impl Action {
    pub fn send(channel: impl Into<Name>, value: impl Into<Value>) -> Self {
        Action::Send {
            channel: channel.into(),
            payload: Payload::Value(value.into()),
        }
    }

    pub fn send_var(channel: impl Into<Name>, var: impl Into<Var>) -> Self {
        Action::Send {
            channel: channel.into(),
            payload: Payload::Var(var.into()),
        }
    }

    pub fn receive(channel: impl Into<Name>, binder: impl Into<Var>) -> Self {
        Action::Receive {
            channel: channel.into(),
            binder: binder.into(),
        }
    }

    pub fn channel(&self) -> Option<&Name> {
        match self {
            Action::Send { channel, .. } | Action::Receive { channel, .. } => Some(channel),
            Action::Tau => None,
        }
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(s)
    }
}

impl From<String> for Var {
    fn from(s: String) -> Self {
        Var(s)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value(s)
    }
}

impl From<String> for AgentId {
    fn from(s: String) -> Self {
        AgentId(s)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Send { channel, payload } => write!(f, "'{channel}<{payload}>"),
            Action::Receive { channel, binder } => write!(f, "{channel}({binder})"),
            Action::Tau => f.write_str("tau"),
        }
    }
}

/// The direction of a visible labeled action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VisibleAct {
    /// `'a<t>`: output of `t` on `a`.
    Send { channel: Name, value: Value },
    /// `a<t>`: input of `t` on `a` (already instantiated).
    Receive { channel: Name, value: Value },
}

impl VisibleAct {
    pub fn channel(&self) -> &Name {
        match self {
            VisibleAct::Send { channel, .. } | VisibleAct::Receive { channel, .. } => channel,
        }
    }

    pub fn value(&self) -> &Value {
        match self {
            VisibleAct::Send { value, .. } | VisibleAct::Receive { value, .. } => value,
        }
    }
}

impl fmt::Display for VisibleAct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VisibleAct::Send { channel, value } => write!(f, "'{channel}<{value}>"),
            VisibleAct::Receive { channel, value } => write!(f, "{channel}<{value}>"),
        }
    }
}

/// An action attributed to the agents that perform it.
///
/// Rendered as `'a<t>@i`, `a<t>@i`, `tau@i` and `tau(i,j)`. The rendering
/// contains no whitespace, so it can be used as a single token in dumps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabeledAction {
    /// A send or receive performed by a single agent.
    Visible { act: VisibleAct, agent: AgentId },
    /// An internal step of a single agent.
    LocalTau { agent: AgentId },
    /// A synchronization where `sender` outputs and `receiver` inputs.
    Sync { sender: AgentId, receiver: AgentId },
}

impl LabeledAction {
    pub fn send(channel: &str, value: &str, agent: &str) -> Self {
        LabeledAction::Visible {
            act: VisibleAct::Send {
                channel: channel.into(),
                value: value.into(),
            },
            agent: agent.into(),
        }
    }

    pub fn receive(channel: &str, value: &str, agent: &str) -> Self {
        LabeledAction::Visible {
            act: VisibleAct::Receive {
                channel: channel.into(),
                value: value.into(),
            },
            agent: agent.into(),
        }
    }

    pub fn local_tau(agent: &str) -> Self {
        LabeledAction::LocalTau { agent: agent.into() }
    }

    pub fn sync(sender: &str, receiver: &str) -> Self {
        LabeledAction::Sync {
            sender: sender.into(),
            receiver: receiver.into(),
        }
    }

    /// Agents taking part in the action.
    pub fn agents(&self) -> Vec<&AgentId> {
        match self {
            LabeledAction::Visible { agent, .. } | LabeledAction::LocalTau { agent } => {
                vec![agent]
            }
            LabeledAction::Sync { sender, receiver } => vec![sender, receiver],
        }
    }

    /// The channel of a visible action.
    pub fn visible_channel(&self) -> Option<&Name> {
        match self {
            LabeledAction::Visible { act, .. } => Some(act.channel()),
            _ => None,
        }
    }
}

impl fmt::Display for LabeledAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabeledAction::Visible { act, agent } => write!(f, "{act}@{agent}"),
            LabeledAction::LocalTau { agent } => write!(f, "tau@{agent}"),
            LabeledAction::Sync { sender, receiver } => write!(f, "tau({sender},{receiver})"),
        }
    }
}

/// A process term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessTerm {
    Nil,
    Prefix(Action, Box<ProcessTerm>),
    Restrict(Name, Box<ProcessTerm>),
    Par(Box<ProcessTerm>, Box<ProcessTerm>),
    Sum(Box<ProcessTerm>, Box<ProcessTerm>),
    Const(Name),
    /// `(P).Q`: a group used as a prefix. Only accepted in explicit-mode
    /// models, where terms are inert data; it has no transitions.
    Seq(Box<ProcessTerm>, Box<ProcessTerm>),
}

impl ProcessTerm {
    pub fn prefix(act: Action, cont: ProcessTerm) -> Self {
        ProcessTerm::Prefix(act, Box::new(cont))
    }

    pub fn restrict(name: impl Into<Name>, body: ProcessTerm) -> Self {
        ProcessTerm::Restrict(name.into(), Box::new(body))
    }

    pub fn par(left: ProcessTerm, right: ProcessTerm) -> Self {
        ProcessTerm::Par(Box::new(left), Box::new(right))
    }

    pub fn sum(left: ProcessTerm, right: ProcessTerm) -> Self {
        ProcessTerm::Sum(Box::new(left), Box::new(right))
    }

    pub fn constant(name: impl Into<Name>) -> Self {
        ProcessTerm::Const(name.into())
    }

    /// Free channel names. Process constants are opaque here: their
    /// definitions are not unfolded.
    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free_names(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_names<'a>(&'a self, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<Name>) {
        match self {
            ProcessTerm::Nil | ProcessTerm::Const(_) => {}
            ProcessTerm::Prefix(act, cont) => {
                if let Some(ch) = act.channel() {
                    if !bound.contains(&ch) {
                        out.insert(ch.clone());
                    }
                }
                cont.collect_free_names(bound, out);
            }
            ProcessTerm::Restrict(name, body) => {
                bound.push(name);
                body.collect_free_names(bound, out);
                bound.pop();
            }
            ProcessTerm::Par(l, r) | ProcessTerm::Sum(l, r) | ProcessTerm::Seq(l, r) => {
                l.collect_free_names(bound, out);
                r.collect_free_names(bound, out);
            }
        }
    }

    /// Replaces the free occurrences of `x` by `t`. A receive that rebinds
    /// `x` shields its continuation.
    pub fn substitute_value(&self, x: &Var, t: &Value) -> ProcessTerm {
        match self {
            ProcessTerm::Nil | ProcessTerm::Const(_) => self.clone(),
            ProcessTerm::Prefix(act, cont) => match act {
                Action::Send {
                    channel,
                    payload: Payload::Var(v),
                } if v == x => ProcessTerm::prefix(
                    Action::Send {
                        channel: channel.clone(),
                        payload: Payload::Value(t.clone()),
                    },
                    cont.substitute_value(x, t),
                ),
                Action::Receive { binder, .. } if binder == x => self.clone(),
                _ => ProcessTerm::prefix(act.clone(), cont.substitute_value(x, t)),
            },
            ProcessTerm::Restrict(name, body) => {
                ProcessTerm::restrict(name.clone(), body.substitute_value(x, t))
            }
            ProcessTerm::Par(l, r) => ProcessTerm::par(l.substitute_value(x, t), r.substitute_value(x, t)),
            ProcessTerm::Sum(l, r) => ProcessTerm::sum(l.substitute_value(x, t), r.substitute_value(x, t)),
            ProcessTerm::Seq(l, r) => ProcessTerm::Seq(
                Box::new(l.substitute_value(x, t)),
                Box::new(r.substitute_value(x, t)),
            ),
        }
    }

    /// Process constants occurring anywhere in the term.
    pub fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            if let ProcessTerm::Const(c) = p {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ProcessTerm)) {
        f(self);
        match self {
            ProcessTerm::Nil | ProcessTerm::Const(_) => {}
            ProcessTerm::Prefix(_, p) | ProcessTerm::Restrict(_, p) => p.visit(f),
            ProcessTerm::Par(l, r) | ProcessTerm::Sum(l, r) | ProcessTerm::Seq(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: parallel, 1: sum, 2: prefix operand
        match self {
            ProcessTerm::Nil => f.write_str("0"),
            ProcessTerm::Const(c) => fmt::Display::fmt(c, f),
            ProcessTerm::Prefix(act, cont) => {
                write!(f, "{act}.")?;
                cont.fmt_prec(f, 2)
            }
            ProcessTerm::Restrict(name, body) => {
                write!(f, "new {name} in ")?;
                body.fmt_prec(f, 2)
            }
            ProcessTerm::Seq(group, cont) => {
                f.write_str("(")?;
                group.fmt_prec(f, 0)?;
                f.write_str(").")?;
                cont.fmt_prec(f, 2)
            }
            ProcessTerm::Par(l, r) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, 0)?;
                f.write_str(" | ")?;
                r.fmt_prec(f, 1)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            ProcessTerm::Sum(l, r) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                r.fmt_prec(f, 2)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A labeled process: agents running processes, composed in parallel and
/// possibly under restrictions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabeledProcessTerm {
    Agent(ProcessTerm, AgentId),
    Par(Box<LabeledProcessTerm>, Box<LabeledProcessTerm>),
    Restrict(Name, Box<LabeledProcessTerm>),
}

impl LabeledProcessTerm {
    pub fn agent(proc: ProcessTerm, agent: impl Into<AgentId>) -> Self {
        LabeledProcessTerm::Agent(proc, agent.into())
    }

    pub fn par(left: LabeledProcessTerm, right: LabeledProcessTerm) -> Self {
        LabeledProcessTerm::Par(Box::new(left), Box::new(right))
    }

    pub fn restrict(name: impl Into<Name>, body: LabeledProcessTerm) -> Self {
        LabeledProcessTerm::Restrict(name.into(), Box::new(body))
    }

    /// Builds a right-nested parallel composition; `None` for an empty list.
    pub fn par_all(parts: impl IntoIterator<Item = LabeledProcessTerm>) -> Option<Self> {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(p) = parts.pop() {
            acc = LabeledProcessTerm::par(p, acc);
        }
        Some(acc)
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        match self {
            LabeledProcessTerm::Agent(p, _) => p.free_names(),
            LabeledProcessTerm::Par(l, r) => {
                let mut out = l.free_names();
                out.extend(r.free_names());
                out
            }
            LabeledProcessTerm::Restrict(name, body) => {
                let mut out = body.free_names();
                out.remove(name);
                out
            }
        }
    }

    /// Agent labels in left-to-right leaf order, duplicates included.
    pub fn agent_leaves(&self) -> Vec<&AgentId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a AgentId>) {
        match self {
            LabeledProcessTerm::Agent(_, a) => out.push(a),
            LabeledProcessTerm::Par(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
            LabeledProcessTerm::Restrict(_, b) => b.collect_leaves(out),
        }
    }

    /// The processes at the leaves, in left-to-right order.
    pub fn processes(&self) -> Vec<&ProcessTerm> {
        let mut out = Vec::new();
        self.collect_processes(&mut out);
        out
    }

    fn collect_processes<'a>(&'a self, out: &mut Vec<&'a ProcessTerm>) {
        match self {
            LabeledProcessTerm::Agent(p, _) => out.push(p),
            LabeledProcessTerm::Par(l, r) => {
                l.collect_processes(out);
                r.collect_processes(out);
            }
            LabeledProcessTerm::Restrict(_, b) => b.collect_processes(out),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            LabeledProcessTerm::Agent(p, a) => write!(f, "{{{p}}}@{a}"),
            LabeledProcessTerm::Restrict(name, body) => {
                write!(f, "new {name} in ")?;
                body.fmt_prec(f, true)
            }
            LabeledProcessTerm::Par(l, r) => {
                if nested {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, false)?;
                f.write_str(" | ")?;
                r.fmt_prec(f, true)?;
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for LabeledProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}
