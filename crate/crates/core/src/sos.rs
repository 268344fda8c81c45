//! One-step transitions of processes and labeled processes.
//!
//! Receives are instantiated eagerly: `a(x).P` has one transition per
//! declared value. A send whose payload is still a variable cannot fire.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{
    Action, AgentId, LabeledAction, LabeledProcessTerm, Name, Payload, ProcessTerm, Value, VisibleAct,
};

/// An instantiated process-level action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepAction {
    Visible(VisibleAct),
    Tau,
}

impl StepAction {
    pub fn channel(&self) -> Option<&Name> {
        match self {
            StepAction::Visible(v) => Some(v.channel()),
            StepAction::Tau => None,
        }
    }

    fn labeled(&self, agent: &AgentId) -> LabeledAction {
        match self {
            StepAction::Visible(act) => LabeledAction::Visible {
                act: act.clone(),
                agent: agent.clone(),
            },
            StepAction::Tau => LabeledAction::LocalTau { agent: agent.clone() },
        }
    }
}

impl fmt::Display for StepAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepAction::Visible(v) => v.fmt(f),
            StepAction::Tau => f.write_str("tau"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unfolding `{constant}` exceeded the constant unfolding depth of {limit}")]
pub struct UnfoldLimitExceeded {
    pub constant: Name,
    pub limit: usize,
}

/// The data the rules need: the value domain and the constant equations.
#[derive(Debug, Clone, Copy)]
pub struct Semantics<'a> {
    pub values: &'a [Value],
    pub equations: &'a BTreeMap<Name, ProcessTerm>,
    pub max_unfold: usize,
}

pub type ProcessSteps = BTreeSet<(StepAction, ProcessTerm)>;
pub type LabeledSteps = BTreeSet<(LabeledAction, LabeledProcessTerm)>;

impl Semantics<'_> {
    pub fn process_steps(&self, p: &ProcessTerm) -> Result<ProcessSteps, UnfoldLimitExceeded> {
        let mut out = BTreeSet::new();
        self.collect(p, 0, &mut out)?;
        Ok(out)
    }

    fn collect(
        &self,
        p: &ProcessTerm,
        unfolds: usize,
        out: &mut ProcessSteps,
    ) -> Result<(), UnfoldLimitExceeded> {
        match p {
            ProcessTerm::Nil | ProcessTerm::Seq(..) => {}
            ProcessTerm::Prefix(act, cont) => match act {
                Action::Tau => {
                    out.insert((StepAction::Tau, (**cont).clone()));
                }
                Action::Send { channel, payload } => {
                    if let Payload::Value(value) = payload {
                        let act = VisibleAct::Send {
                            channel: channel.clone(),
                            value: value.clone(),
                        };
                        out.insert((StepAction::Visible(act), (**cont).clone()));
                    }
                }
                Action::Receive { channel, binder } => {
                    for value in self.values {
                        let act = VisibleAct::Receive {
                            channel: channel.clone(),
                            value: value.clone(),
                        };
                        out.insert((StepAction::Visible(act), cont.substitute_value(binder, value)));
                    }
                }
            },
            ProcessTerm::Sum(l, r) => {
                self.collect(l, unfolds, out)?;
                self.collect(r, unfolds, out)?;
            }
            ProcessTerm::Par(l, r) => {
                let ls = self.process_steps_at(l, unfolds)?;
                let rs = self.process_steps_at(r, unfolds)?;
                for (a, l2) in &ls {
                    out.insert((a.clone(), ProcessTerm::par(l2.clone(), (**r).clone())));
                }
                for (a, r2) in &rs {
                    out.insert((a.clone(), ProcessTerm::par((**l).clone(), r2.clone())));
                }
                for (a, l2) in &ls {
                    for (b, r2) in &rs {
                        if complementary(a, b) {
                            out.insert((StepAction::Tau, ProcessTerm::par(l2.clone(), r2.clone())));
                        }
                    }
                }
            }
            ProcessTerm::Restrict(name, body) => {
                for (a, b2) in self.process_steps_at(body, unfolds)? {
                    if a.channel() != Some(name) {
                        out.insert((a, ProcessTerm::restrict(name.clone(), b2)));
                    }
                }
            }
            ProcessTerm::Const(c) => {
                if unfolds >= self.max_unfold {
                    return Err(UnfoldLimitExceeded {
                        constant: c.clone(),
                        limit: self.max_unfold,
                    });
                }
                // validation guarantees every constant is defined
                if let Some(body) = self.equations.get(c) {
                    self.collect(body, unfolds + 1, out)?;
                }
            }
        }
        Ok(())
    }

    fn process_steps_at(&self, p: &ProcessTerm, unfolds: usize) -> Result<ProcessSteps, UnfoldLimitExceeded> {
        let mut out = BTreeSet::new();
        self.collect(p, unfolds, &mut out)?;
        Ok(out)
    }

    pub fn labeled_steps(&self, m: &LabeledProcessTerm) -> Result<LabeledSteps, UnfoldLimitExceeded> {
        let mut out = BTreeSet::new();
        match m {
            LabeledProcessTerm::Agent(p, agent) => {
                for (a, p2) in self.process_steps(p)? {
                    out.insert((a.labeled(agent), LabeledProcessTerm::Agent(p2, agent.clone())));
                }
            }
            LabeledProcessTerm::Par(l, r) => {
                let ls = self.labeled_steps(l)?;
                let rs = self.labeled_steps(r)?;
                for (a, l2) in &ls {
                    out.insert((a.clone(), LabeledProcessTerm::par(l2.clone(), (**r).clone())));
                }
                for (a, r2) in &rs {
                    out.insert((a.clone(), LabeledProcessTerm::par((**l).clone(), r2.clone())));
                }
                for (a, l2) in &ls {
                    for (b, r2) in &rs {
                        if let Some(sync) = synchronize(a, b) {
                            out.insert((sync, LabeledProcessTerm::par(l2.clone(), r2.clone())));
                        }
                    }
                }
            }
            LabeledProcessTerm::Restrict(name, body) => {
                for (a, b2) in self.labeled_steps(body)? {
                    if a.visible_channel() != Some(name) {
                        out.insert((a, LabeledProcessTerm::restrict(name.clone(), b2)));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `'a<t>` against `a<t>` in either order.
fn complementary(a: &StepAction, b: &StepAction) -> bool {
    match (a, b) {
        (StepAction::Visible(x), StepAction::Visible(y)) => visible_complementary(x, y),
        _ => false,
    }
}

fn visible_complementary(x: &VisibleAct, y: &VisibleAct) -> bool {
    match (x, y) {
        (
            VisibleAct::Send { channel, value },
            VisibleAct::Receive {
                channel: c2,
                value: v2,
            },
        )
        | (
            VisibleAct::Receive { channel, value },
            VisibleAct::Send {
                channel: c2,
                value: v2,
            },
        ) => channel == c2 && value == v2,
        _ => false,
    }
}

/// The synchronization of two agents' visible actions, sender first.
fn synchronize(a: &LabeledAction, b: &LabeledAction) -> Option<LabeledAction> {
    match (a, b) {
        (LabeledAction::Visible { act: x, agent: i }, LabeledAction::Visible { act: y, agent: j })
            if visible_complementary(x, y) =>
        {
            let (sender, receiver) = match x {
                VisibleAct::Send { .. } => (i, j),
                VisibleAct::Receive { .. } => (j, i),
            };
            Some(LabeledAction::Sync {
                sender: sender.clone(),
                receiver: receiver.clone(),
            })
        }
        _ => None,
    }
}
