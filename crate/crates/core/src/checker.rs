//! ATLE evaluation over an explored state space.
//!
//! Propositional and epistemic connectives are evaluated pointwise. For a
//! coalition operator at configuration `c`, the operands are first
//! evaluated on every configuration reachable from `c`, then strategies
//! are tried in enumeration order until one works. A strategy works only
//! if it leaves `c` at least one kept edge, and:
//!
//! * `X φ`: every kept successor of `c` satisfies φ;
//! * `G φ`: every configuration reachable along kept edges satisfies φ and
//!   has a kept edge, so all outcome paths are infinite;
//! * `φ U ψ`: every maximal outcome path meets ψ, with φ holding before.
//!   Searching from `c` without passing ψ-configurations must reach no
//!   configuration violating φ, no dead end and no cycle;
//! * `F ψ` is `true U ψ`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::epistemic::{agent_relation, common_reach, AccessRelation};
use crate::explore::{ConfigIndex, StateSpace};
use crate::formula::{Coalition, Formula};
use crate::model::ModelDef;
use crate::scc::tarjan_from;
use crate::strategy::{PartialStrategy, StrategySpace};
use crate::syntax::AgentId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Coalition operators whose strategy count exceeds this abort.
    pub max_strategies: u128,
    /// Worker threads for the strategy loop; 1 runs it inline.
    pub jobs: usize,
    pub memoize: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            max_strategies: 1_000_000,
            jobs: 1,
            memoize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("coalition {coalition} has {count} partial strategies, above the limit of {max}")]
    TooManyStrategies {
        coalition: String,
        count: u128,
        max: u128,
    },
    #[error("formula mentions undeclared agent `{0}`")]
    UnknownAgent(String),
    #[error("formula mentions undeclared proposition `{0}`")]
    UnknownProp(String),
    #[error("configuration {0} is not in the explored space")]
    UnknownConfiguration(ConfigIndex),
    #[error("could not start worker threads: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub configs: usize,
    /// Strategies tried by the outermost coalition operator.
    pub strategies_examined: u128,
    /// Cycle searches run while evaluating the whole formula.
    pub scc_runs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub value: bool,
    /// The first working strategy of a satisfied outermost coalition operator.
    pub witness: Option<PartialStrategy>,
    pub stats: Stats,
}

/// Results per (configuration, formula), negative ones included.
#[derive(Debug, Default)]
pub struct LabelStore {
    ids: HashMap<Formula, usize>,
    labels: HashMap<(ConfigIndex, usize), bool>,
}

impl LabelStore {
    fn id(&mut self, f: &Formula) -> usize {
        let next = self.ids.len();
        *self.ids.entry(f.clone()).or_insert(next)
    }

    fn get(&mut self, c: ConfigIndex, f: &Formula) -> Option<bool> {
        let id = self.id(f);
        self.labels.get(&(c, id)).copied()
    }

    fn set(&mut self, c: ConfigIndex, f: &Formula, value: bool) {
        let id = self.id(f);
        let previous = self.labels.insert((c, id), value);
        debug_assert!(previous.is_none_or(|p| p == value));
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// What a strategy must achieve, over precomputed operand values.
enum Goal {
    Next(Vec<bool>),
    Globally(Vec<bool>),
    /// `hold U target`; `hold` is `None` for `F`.
    Until(Option<Vec<bool>>, Vec<bool>),
}

struct Outcome {
    found: Option<(usize, PartialStrategy)>,
    examined: u128,
    scc_runs: u64,
}

pub struct Checker<'a> {
    model: &'a ModelDef,
    space: &'a StateSpace,
    options: CheckOptions,
    store: LabelStore,
    agent_relations: HashMap<AgentId, Arc<AccessRelation>>,
    common_relations: HashMap<Coalition, Arc<AccessRelation>>,
    strategy_spaces: HashMap<Coalition, Arc<StrategySpace>>,
    pool: Option<rayon::ThreadPool>,
    scc_runs: u64,
}

impl<'a> Checker<'a> {
    pub fn new(model: &'a ModelDef, space: &'a StateSpace, options: CheckOptions) -> Self {
        Self {
            model,
            space,
            options,
            store: LabelStore::default(),
            agent_relations: HashMap::new(),
            common_relations: HashMap::new(),
            strategy_spaces: HashMap::new(),
            pool: None,
            scc_runs: 0,
        }
    }

    pub fn space(&self) -> &StateSpace {
        self.space
    }

    pub fn store(&self) -> &LabelStore {
        &self.store
    }

    /// Rejects formulas naming undeclared agents or propositions.
    pub fn validate(&self, f: &Formula) -> Result<(), CheckError> {
        let check_agents = |a: &Coalition| {
            a.iter()
                .find(|x| !self.model.has_agent(x))
                .map_or(Ok(()), |x| Err(CheckError::UnknownAgent(x.to_string())))
        };
        match f {
            Formula::Prop(p) if !self.model.has_prop(p) => {
                return Err(CheckError::UnknownProp(p.to_string()))
            }
            Formula::Know(i, _) if !self.model.has_agent(i) => {
                return Err(CheckError::UnknownAgent(i.to_string()))
            }
            Formula::Every(a, _) | Formula::Dist(a, _) | Formula::Common(a, _) => check_agents(a)?,
            _ => {}
        }
        if let Some(a) = f.strategic_coalition() {
            check_agents(a)?;
        }
        f.children().into_iter().try_for_each(|g| self.validate(g))
    }

    /// Evaluates `f` at `c`, reporting a witness for an outer coalition operator.
    pub fn verdict(&mut self, c: ConfigIndex, f: &Formula) -> Result<Verdict, CheckError> {
        self.validate(f)?;
        if c >= self.space.len() {
            return Err(CheckError::UnknownConfiguration(c));
        }
        self.scc_runs = 0;
        let (value, witness, examined) = match f.strategic_coalition() {
            Some(a) => {
                let out = self.coalition(c, a.clone(), f)?;
                let value = out.found.is_some();
                if self.options.memoize {
                    self.store.set(c, f, value);
                }
                (value, out.found.map(|(_, s)| s), out.examined)
            }
            None => (self.check(c, f)?, None, 0),
        };
        Ok(Verdict {
            value,
            witness,
            stats: Stats {
                configs: self.space.len(),
                strategies_examined: examined,
                scc_runs: self.scc_runs,
            },
        })
    }

    /// Truth of `f` at `c`; `f` must already be validated.
    pub fn check(&mut self, c: ConfigIndex, f: &Formula) -> Result<bool, CheckError> {
        if self.options.memoize {
            if let Some(v) = self.store.get(c, f) {
                return Ok(v);
            }
        }
        let value = match f {
            Formula::Prop(p) => self.model.holds(&self.space.configs[c].state, p),
            Formula::Not(g) => !self.check(c, g)?,
            Formula::Or(a, b) => self.check(c, a)? || self.check(c, b)?,
            Formula::Know(i, g) => self.check_know(c, i, g)?,
            Formula::Every(a, g) => {
                let mut all = true;
                for i in a.iter() {
                    if !self.check_know(c, i, g)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            Formula::Dist(a, g) => {
                let mut any = false;
                for i in a.iter() {
                    if self.check_know(c, i, g)? {
                        any = true;
                        break;
                    }
                }
                any
            }
            Formula::Common(a, g) => {
                let rel = self.common_relation(a);
                self.all_in(rel.class(c), g)?
            }
            Formula::CoalNext(a, _)
            | Formula::CoalGlobally(a, _)
            | Formula::CoalFinally(a, _)
            | Formula::CoalUntil(a, _, _) => self.coalition(c, a.clone(), f)?.found.is_some(),
        };
        if self.options.memoize {
            self.store.set(c, f, value);
        }
        Ok(value)
    }

    fn check_know(&mut self, c: ConfigIndex, i: &AgentId, g: &Formula) -> Result<bool, CheckError> {
        let rel = self.agent_relation(i);
        self.all_in(rel.class(c), g)
    }

    fn all_in(&mut self, class: &[ConfigIndex], g: &Formula) -> Result<bool, CheckError> {
        for &d in class {
            if !self.check(d, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn agent_relation(&mut self, i: &AgentId) -> Arc<AccessRelation> {
        let (model, space) = (self.model, self.space);
        self.agent_relations
            .entry(i.clone())
            .or_insert_with(|| Arc::new(agent_relation(model, i, space)))
            .clone()
    }

    fn common_relation(&mut self, a: &Coalition) -> Arc<AccessRelation> {
        let (model, space) = (self.model, self.space);
        self.common_relations
            .entry(a.clone())
            .or_insert_with(|| Arc::new(common_reach(model, a, space)))
            .clone()
    }

    fn strategy_space(&mut self, a: &Coalition) -> Arc<StrategySpace> {
        let space = self.space;
        self.strategy_spaces
            .entry(a.clone())
            .or_insert_with(|| Arc::new(StrategySpace::new(space, a)))
            .clone()
    }

    /// `g` evaluated at every configuration reachable from `c`; false elsewhere.
    fn operand(&mut self, reach: &[bool], g: &Formula) -> Result<Vec<bool>, CheckError> {
        let mut out = vec![false; self.space.len()];
        for (d, r) in reach.iter().enumerate() {
            if *r {
                out[d] = self.check(d, g)?;
            }
        }
        Ok(out)
    }

    fn reachable(&self, c: ConfigIndex) -> Vec<bool> {
        let mut seen = vec![false; self.space.len()];
        let mut todo = vec![c];
        seen[c] = true;
        while let Some(v) = todo.pop() {
            for w in self.space.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
        }
        seen
    }

    fn coalition(&mut self, c: ConfigIndex, a: Coalition, f: &Formula) -> Result<Outcome, CheckError> {
        let strategies = self.strategy_space(&a);
        let count = strategies.count();
        if count > self.options.max_strategies {
            return Err(CheckError::TooManyStrategies {
                coalition: a.to_string(),
                count,
                max: self.options.max_strategies,
            });
        }
        let reach = self.reachable(c);
        let goal = match f {
            Formula::CoalNext(_, g) => Goal::Next(self.operand(&reach, g)?),
            Formula::CoalGlobally(_, g) => Goal::Globally(self.operand(&reach, g)?),
            Formula::CoalFinally(_, g) => Goal::Until(None, self.operand(&reach, g)?),
            Formula::CoalUntil(_, h, g) => {
                let hold = self.operand(&reach, h)?;
                Goal::Until(Some(hold), self.operand(&reach, g)?)
            }
            _ => unreachable!("not a coalition operator"),
        };
        let eval = Evaluator {
            space: self.space,
            strategies: &strategies,
            goal: &goal,
            start: c,
        };
        let out = if self.options.jobs > 1 {
            if self.pool.is_none() {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(self.options.jobs)
                    .build()
                    .map_err(|e| CheckError::ThreadPool(e.to_string()))?;
                self.pool = Some(pool);
            }
            let pool = self.pool.as_ref().expect("pool was just built");
            eval.search_parallel(pool, self.options.jobs)
        } else {
            eval.search()
        };
        self.scc_runs += out.scc_runs;
        Ok(out)
    }
}

struct Evaluator<'e> {
    space: &'e StateSpace,
    strategies: &'e StrategySpace,
    goal: &'e Goal,
    start: ConfigIndex,
}

impl Evaluator<'_> {
    fn search(&self) -> Outcome {
        let mut scc_runs = 0;
        for (i, asg) in self.strategies.assignments().enumerate() {
            let (ok, runs) = self.works(&asg);
            scc_runs += runs;
            if ok {
                return Outcome {
                    found: Some((i, self.strategies.strategy(&asg))),
                    examined: i as u128 + 1,
                    scc_runs,
                };
            }
        }
        Outcome {
            found: None,
            examined: self.strategies.count(),
            scc_runs,
        }
    }

    /// Same result as `search`: chunks are evaluated in parallel and scanned in order.
    fn search_parallel(&self, pool: &rayon::ThreadPool, jobs: usize) -> Outcome {
        let chunk = 256 * jobs;
        let mut assignments = self.strategies.assignments();
        let mut base = 0usize;
        let mut scc_runs = 0;
        loop {
            let batch: Vec<_> = assignments.by_ref().take(chunk).collect();
            if batch.is_empty() {
                return Outcome {
                    found: None,
                    examined: self.strategies.count(),
                    scc_runs,
                };
            }
            let results: Vec<(bool, u64)> =
                pool.install(|| batch.par_iter().map(|a| self.works(a)).collect());
            for (j, (ok, runs)) in results.into_iter().enumerate() {
                scc_runs += runs;
                if ok {
                    return Outcome {
                        found: Some((base + j, self.strategies.strategy(&batch[j]))),
                        examined: (base + j) as u128 + 1,
                        scc_runs,
                    };
                }
            }
            base += batch.len();
        }
    }

    fn kept_successors<'s>(
        &'s self,
        asg: &'s [Option<usize>],
        v: ConfigIndex,
    ) -> impl Iterator<Item = ConfigIndex> + 's {
        self.space
            .out_edges(v)
            .iter()
            .filter(move |&&e| self.strategies.kept(asg, e))
            .map(|&e| self.space.edges[e].to)
    }

    /// Whether the strategy works, and the number of cycle searches run.
    fn works(&self, asg: &[Option<usize>]) -> (bool, u64) {
        if self.kept_successors(asg, self.start).next().is_none() {
            return (false, 0);
        }
        match self.goal {
            Goal::Next(phi) => (self.kept_successors(asg, self.start).all(|w| phi[w]), 0),
            Goal::Globally(phi) => (self.globally(asg, phi), 0),
            Goal::Until(hold, target) => self.until(asg, hold.as_deref(), target),
        }
    }

    fn globally(&self, asg: &[Option<usize>], phi: &[bool]) -> bool {
        let mut seen = vec![false; self.space.len()];
        let mut todo = vec![self.start];
        seen[self.start] = true;
        while let Some(v) = todo.pop() {
            if !phi[v] {
                return false;
            }
            let mut any = false;
            for w in self.kept_successors(asg, v) {
                any = true;
                if !seen[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
            if !any {
                return false;
            }
        }
        true
    }

    fn until(&self, asg: &[Option<usize>], hold: Option<&[bool]>, target: &[bool]) -> (bool, u64) {
        if target[self.start] {
            return (true, 0);
        }
        // explore the part of the outcome that has not met the target yet
        let mut seen = vec![false; self.space.len()];
        let mut todo = vec![self.start];
        seen[self.start] = true;
        while let Some(v) = todo.pop() {
            if hold.is_some_and(|h| !h[v]) {
                return (false, 0);
            }
            let mut any = false;
            for w in self.kept_successors(asg, v) {
                any = true;
                if !seen[w] && !target[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
            if !any {
                return (false, 0);
            }
        }
        let sccs = tarjan_from(self.space.len(), self.start, |v| {
            self.kept_successors(asg, v)
                .filter(|&w| !target[w])
                .collect::<Vec<_>>()
        });
        let cyclic = sccs
            .iter()
            .any(|comp| comp.len() > 1 || self.kept_successors(asg, comp[0]).any(|w| w == comp[0]));
        (!cyclic, 1)
    }
}
