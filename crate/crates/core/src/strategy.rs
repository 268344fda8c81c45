//! Partial strategies and the outcome graphs they induce.
//!
//! A partial strategy for coalition `A` fixes one `A`-action at each state
//! of its domain `U`. At a configuration whose state is in `U` only the
//! chosen action is kept; elsewhere only actions of agents outside `A` are
//! kept. A synchronization between a member and a non-member is neither.

use std::collections::BTreeMap;
use std::fmt;

use crate::explore::{ConfigIndex, StateSpace};
use crate::formula::Coalition;
use crate::model::StateId;
use crate::syntax::LabeledAction;

/// Every participant of `act` is in `coalition`.
pub fn action_belongs(act: &LabeledAction, coalition: &Coalition) -> bool {
    act.agents().into_iter().all(|a| coalition.contains(a))
}

/// Every participant of `act` is outside `coalition`.
pub fn action_belongs_to_complement(act: &LabeledAction, coalition: &Coalition) -> bool {
    act.agents().into_iter().all(|a| !coalition.contains(a))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialStrategy {
    pub coalition: Coalition,
    /// Defined exactly on the domain `U`.
    pub choice: BTreeMap<StateId, LabeledAction>,
}

impl PartialStrategy {
    pub fn domain(&self) -> impl Iterator<Item = &StateId> {
        self.choice.keys()
    }
}

impl fmt::Display for PartialStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<<{}>> {{", self.coalition)?;
        for (i, (s, a)) in self.choice.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s} -> {a}")?;
        }
        f.write_str("}")
    }
}

/// The edges a strategy keeps, indexed like `StateSpace::edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeGraph {
    pub kept: Vec<bool>,
}

impl OutcomeGraph {
    pub fn kept_successors<'a>(
        &'a self,
        space: &'a StateSpace,
        c: ConfigIndex,
    ) -> impl Iterator<Item = ConfigIndex> + 'a {
        space
            .out_edges(c)
            .iter()
            .filter(|&&e| self.kept[e])
            .map(|&e| space.edges[e].to)
    }
}

pub fn outcome_graph(space: &StateSpace, strategy: &PartialStrategy) -> OutcomeGraph {
    let kept = space
        .edges
        .iter()
        .map(|e| match strategy.choice.get(&space.configs[e.from].state) {
            Some(chosen) => *chosen == e.action,
            None => action_belongs_to_complement(&e.action, &strategy.coalition),
        })
        .collect();
    OutcomeGraph { kept }
}

/// At least one kept edge leaves `c`.
pub fn has_outcome(g: &OutcomeGraph, space: &StateSpace, c: ConfigIndex) -> bool {
    space.out_edges(c).iter().any(|&e| g.kept[e])
}

/// The strategies of one coalition over one space, in a compact form.
///
/// Only states with an enabled coalition action can join the domain, and
/// only enabled actions are offered. An assignment gives, per candidate
/// state, `None` (outside the domain) or an index into its action list.
#[derive(Debug, Clone)]
pub struct StrategySpace {
    pub coalition: Coalition,
    /// Candidate states with their enabled coalition actions, sorted.
    pub candidates: Vec<(StateId, Vec<LabeledAction>)>,
    /// Per edge: the candidate index of its source state.
    edge_candidate: Vec<Option<usize>>,
    /// Per edge: the position of its label in that candidate's action list.
    edge_action: Vec<Option<usize>>,
    /// Per edge: the label belongs to the complement of the coalition.
    edge_complement: Vec<bool>,
}

pub type Assignment = Vec<Option<usize>>;

impl StrategySpace {
    pub fn new(space: &StateSpace, coalition: &Coalition) -> Self {
        let mut by_state: BTreeMap<&StateId, Vec<LabeledAction>> = BTreeMap::new();
        for e in &space.edges {
            if action_belongs(&e.action, coalition) {
                by_state
                    .entry(&space.configs[e.from].state)
                    .or_default()
                    .push(e.action.clone());
            }
        }
        let candidates: Vec<(StateId, Vec<LabeledAction>)> = space
            .states()
            .into_iter()
            .filter_map(|s| {
                let mut acts = by_state.remove(s)?;
                acts.sort();
                acts.dedup();
                Some((s.clone(), acts))
            })
            .collect();
        let index: BTreeMap<&StateId, usize> =
            candidates.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();
        let mut edge_candidate = Vec::with_capacity(space.edges.len());
        let mut edge_action = Vec::with_capacity(space.edges.len());
        let mut edge_complement = Vec::with_capacity(space.edges.len());
        for e in &space.edges {
            let cand = index.get(&space.configs[e.from].state).copied();
            edge_candidate.push(cand);
            edge_action.push(cand.and_then(|i| candidates[i].1.iter().position(|a| *a == e.action)));
            edge_complement.push(action_belongs_to_complement(&e.action, coalition));
        }
        Self {
            coalition: coalition.clone(),
            candidates,
            edge_candidate,
            edge_action,
            edge_complement,
        }
    }

    /// `Π (1 + |actions(s)|)`, saturating.
    pub fn count(&self) -> u128 {
        self.candidates
            .iter()
            .fold(1u128, |acc, (_, a)| acc.saturating_mul(1 + a.len() as u128))
    }

    /// Assignments ordered by domain size, then domain, then choices.
    pub fn assignments(&self) -> Assignments<'_> {
        Assignments::new(self)
    }

    pub fn kept(&self, assignment: &[Option<usize>], edge: usize) -> bool {
        match self.edge_candidate[edge].and_then(|c| assignment[c]) {
            Some(chosen) => self.edge_action[edge] == Some(chosen),
            None => self.edge_complement[edge],
        }
    }

    pub fn outcome(&self, assignment: &[Option<usize>]) -> OutcomeGraph {
        OutcomeGraph {
            kept: (0..self.edge_candidate.len())
                .map(|e| self.kept(assignment, e))
                .collect(),
        }
    }

    pub fn strategy(&self, assignment: &[Option<usize>]) -> PartialStrategy {
        let choice = self
            .candidates
            .iter()
            .zip(assignment)
            .filter_map(|((s, acts), a)| a.map(|i| (s.clone(), acts[i].clone())))
            .collect();
        PartialStrategy {
            coalition: self.coalition.clone(),
            choice,
        }
    }
}

/// Iterator over all assignments of a [`StrategySpace`].
pub struct Assignments<'a> {
    space: &'a StrategySpace,
    size: usize,
    /// Current domain as increasing candidate indices; `None` when exhausted.
    domain: Option<Vec<usize>>,
    /// Choice index per domain member.
    choices: Vec<usize>,
    started: bool,
}

impl<'a> Assignments<'a> {
    fn new(space: &'a StrategySpace) -> Self {
        Self {
            space,
            size: 0,
            domain: Some(Vec::new()),
            choices: Vec::new(),
            started: false,
        }
    }

    fn advance(&mut self) {
        let Some(domain) = self.domain.as_mut() else {
            return;
        };
        // odometer over choices, last position fastest
        for i in (0..domain.len()).rev() {
            let limit = self.space.candidates[domain[i]].1.len();
            if self.choices[i] + 1 < limit {
                self.choices[i] += 1;
                return;
            }
            self.choices[i] = 0;
        }
        // next domain of the same size, lexicographically
        let n = self.space.candidates.len();
        let k = domain.len();
        for i in (0..k).rev() {
            if domain[i] < n - k + i {
                domain[i] += 1;
                for j in i + 1..k {
                    domain[j] = domain[j - 1] + 1;
                }
                return;
            }
        }
        self.size += 1;
        if self.size > n {
            self.domain = None;
        } else {
            *domain = (0..self.size).collect();
            self.choices = vec![0; self.size];
        }
    }
}

impl Iterator for Assignments<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.started {
            self.advance();
        }
        self.started = true;
        let domain = self.domain.as_ref()?;
        let mut out = vec![None; self.space.candidates.len()];
        for (&d, &c) in domain.iter().zip(&self.choices) {
            out[d] = Some(c);
        }
        Some(out)
    }
}

pub fn enumerate_strategies(
    space: &StateSpace,
    coalition: &Coalition,
) -> impl Iterator<Item = PartialStrategy> {
    let strategies = StrategySpace::new(space, coalition);
    let all: Vec<Assignment> = strategies.assignments().collect();
    all.into_iter().map(move |a| strategies.strategy(&a))
}
