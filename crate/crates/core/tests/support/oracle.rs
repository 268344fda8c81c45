//! Slow reference implementations, written without the library's algorithms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use epc_core::explore::StateSpace;
use epc_core::formula::{Coalition, Formula};
use epc_core::model::{ModelDef, StateId};
use epc_core::syntax::{Action, LabeledAction, Name, Payload, ProcessTerm};

/// SCCs via pairwise reachability (Floyd-Warshall closure), as sorted sets.
pub fn scc_partition(adj: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let n = adj.len();
    let mut reach = vec![vec![false; n]; n];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
        for &w in &adj[v] {
            row[w] = true;
        }
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (cell, &onward) in row.iter_mut().zip(&via) {
                    *cell |= onward;
                }
            }
        }
    }
    (0..n)
        .map(|v| (0..n).filter(|&w| reach[v][w] && reach[w][v]).collect())
        .collect()
}

/// `Π_s (1 + |enabled coalition actions at s|)` over the states of `space`.
pub fn strategy_bound(space: &StateSpace, coalition: &Coalition) -> u128 {
    let mut per_state: BTreeMap<&StateId, BTreeSet<&LabeledAction>> = BTreeMap::new();
    for c in &space.configs {
        per_state.entry(&c.state).or_default();
    }
    for e in &space.edges {
        if e.action.agents().iter().all(|a| coalition.contains(a)) {
            per_state
                .get_mut(&space.configs[e.from].state)
                .unwrap()
                .insert(&e.action);
        }
    }
    per_state.values().map(|acts| 1 + acts.len() as u128).product()
}

/// A choice at a state in the domain: one enabled action, or an action the
/// coalition owns that is not enabled there (all of those behave alike).
#[derive(Clone, Debug, PartialEq)]
enum Choice {
    Act(LabeledAction),
    Blocked,
}

/// Evaluates formulas by enumerating every partial strategy, including
/// domains with states that have no enabled coalition action and choices
/// that are not enabled, and by listing every maximal outcome path.
pub struct BruteForce<'a> {
    model: &'a ModelDef,
    space: &'a StateSpace,
    memo: HashMap<(usize, Formula), bool>,
    pub max_strategies: usize,
    pub exceeded: bool,
}

/// A maximal path: its configurations in order without repetition, and
/// whether it continues forever (closing a cycle back into itself).
struct Path {
    nodes: Vec<usize>,
    infinite: bool,
}

impl<'a> BruteForce<'a> {
    pub fn new(model: &'a ModelDef, space: &'a StateSpace) -> Self {
        Self {
            model,
            space,
            memo: HashMap::new(),
            max_strategies: 200_000,
            exceeded: false,
        }
    }

    pub fn holds(&mut self, c: usize, f: &Formula) -> bool {
        if let Some(v) = self.memo.get(&(c, f.clone())) {
            return *v;
        }
        let v = self.eval(c, f);
        self.memo.insert((c, f.clone()), v);
        v
    }

    fn same_view(&self, agent: &epc_core::syntax::AgentId, c: usize, d: usize) -> bool {
        self.model.h(agent, &self.space.configs[c].state) == self.model.h(agent, &self.space.configs[d].state)
    }

    fn knows(&mut self, agent: &epc_core::syntax::AgentId, c: usize, g: &Formula) -> bool {
        (0..self.space.len())
            .filter(|&d| self.same_view(agent, c, d))
            .collect::<Vec<_>>()
            .into_iter()
            .all(|d| self.holds(d, g))
    }

    fn eval(&mut self, c: usize, f: &Formula) -> bool {
        match f {
            Formula::Prop(p) => self.model.holds(&self.space.configs[c].state, p),
            Formula::Not(g) => !self.holds(c, g),
            Formula::Or(a, b) => {
                let x = self.holds(c, a);
                let y = self.holds(c, b);
                x || y
            }
            Formula::Know(i, g) => self.knows(i, c, g),
            Formula::Every(a, g) => a
                .iter()
                .cloned()
                .collect::<Vec<_>>()
                .iter()
                .all(|i| self.knows(i, c, g)),
            Formula::Dist(a, g) => a
                .iter()
                .cloned()
                .collect::<Vec<_>>()
                .iter()
                .any(|i| self.knows(i, c, g)),
            Formula::Common(a, g) => {
                // closure by repeated expansion
                let mut reached = BTreeSet::from([c]);
                loop {
                    let mut next = reached.clone();
                    for &x in &reached {
                        for d in 0..self.space.len() {
                            if a.iter().any(|i| self.same_view(i, x, d)) {
                                next.insert(d);
                            }
                        }
                    }
                    if next.len() == reached.len() {
                        break;
                    }
                    reached = next;
                }
                reached.into_iter().all(|d| self.holds(d, g))
            }
            Formula::CoalNext(a, g) => self.exists_strategy(c, a, |me, c, kept, _| {
                kept[c].clone().into_iter().all(|w| me.holds(w, g))
            }),
            Formula::CoalGlobally(a, g) => self.exists_strategy(c, a, |me, _, _, paths| {
                paths
                    .iter()
                    .all(|p| p.infinite && p.nodes.iter().all(|&v| me.holds(v, g)))
            }),
            Formula::CoalFinally(a, g) => self.exists_strategy(c, a, |me, _, _, paths| {
                paths.iter().all(|p| p.nodes.iter().any(|&v| me.holds(v, g)))
            }),
            Formula::CoalUntil(a, h, g) => self.exists_strategy(c, a, |me, _, _, paths| {
                paths.iter().all(|p| {
                    for &v in &p.nodes {
                        if me.holds(v, g) {
                            return true;
                        }
                        if !me.holds(v, h) {
                            return false;
                        }
                    }
                    false
                })
            }),
        }
    }

    fn exists_strategy<F>(&mut self, c: usize, a: &Coalition, mut works: F) -> bool
    where
        F: FnMut(&mut Self, usize, &[Vec<usize>], &[Path]) -> bool,
    {
        let states: Vec<StateId> = {
            let mut seen = BTreeSet::new();
            self.space
                .configs
                .iter()
                .filter(|x| seen.insert(x.state.clone()))
                .map(|x| x.state.clone())
                .collect()
        };
        let options: Vec<Vec<Option<Choice>>> = states
            .iter()
            .map(|s| {
                let mut opts = vec![None, Some(Choice::Blocked)];
                let enabled: BTreeSet<&LabeledAction> = self
                    .space
                    .edges
                    .iter()
                    .filter(|e| &self.space.configs[e.from].state == s)
                    .map(|e| &e.action)
                    .filter(|act| act.agents().iter().all(|x| a.contains(x)))
                    .collect();
                opts.extend(enabled.into_iter().map(|x| Some(Choice::Act(x.clone()))));
                opts
            })
            .collect();
        let total: usize = options.iter().map(Vec::len).product();
        if total > self.max_strategies {
            self.exceeded = true;
            return false;
        }
        let mut digits = vec![0usize; states.len()];
        loop {
            let choice: BTreeMap<&StateId, &Option<Choice>> = states
                .iter()
                .zip(&digits)
                .enumerate()
                .map(|(k, (s, &d))| (s, &options[k][d]))
                .collect();
            let mut kept = vec![Vec::new(); self.space.len()];
            for e in &self.space.edges {
                let keep = match choice[&self.space.configs[e.from].state] {
                    Some(Choice::Act(x)) => *x == e.action,
                    Some(Choice::Blocked) => false,
                    None => e.action.agents().iter().all(|x| !a.contains(x)),
                };
                if keep {
                    kept[e.from].push(e.to);
                }
            }
            if !kept[c].is_empty() {
                let paths = maximal_paths(&kept, c);
                if works(self, c, &kept, &paths) {
                    return true;
                }
            }
            // next combination
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return false;
                }
                digits[k] += 1;
                if digits[k] < options[k].len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }
}

fn maximal_paths(kept: &[Vec<usize>], c: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut path = vec![c];
    extend(kept, &mut path, &mut out);
    out
}

fn extend(kept: &[Vec<usize>], path: &mut Vec<usize>, out: &mut Vec<Path>) {
    let v = *path.last().unwrap();
    if kept[v].is_empty() {
        out.push(Path {
            nodes: path.clone(),
            infinite: false,
        });
        return;
    }
    let mut succ = kept[v].clone();
    succ.sort_unstable();
    succ.dedup();
    for w in succ {
        if path.contains(&w) {
            out.push(Path {
                nodes: path.clone(),
                infinite: true,
            });
        } else {
            path.push(w);
            extend(kept, path, out);
            path.pop();
        }
    }
}

/// Renames free occurrences of channel `from` to `to`.
pub fn rename_channel(p: &ProcessTerm, from: &Name, to: &Name) -> ProcessTerm {
    let ren = |n: &Name| if n == from { to.clone() } else { n.clone() };
    match p {
        ProcessTerm::Nil | ProcessTerm::Const(_) => p.clone(),
        ProcessTerm::Prefix(act, cont) => {
            let act = match act {
                Action::Tau => Action::Tau,
                Action::Send { channel, payload } => Action::Send {
                    channel: ren(channel),
                    payload: payload.clone(),
                },
                Action::Receive { channel, binder } => Action::Receive {
                    channel: ren(channel),
                    binder: binder.clone(),
                },
            };
            ProcessTerm::prefix(act, rename_channel(cont, from, to))
        }
        // a shadowing restriction stops the renaming
        ProcessTerm::Restrict(n, _) if n == from => p.clone(),
        ProcessTerm::Restrict(n, body) => ProcessTerm::restrict(n.clone(), rename_channel(body, from, to)),
        ProcessTerm::Par(l, r) => ProcessTerm::par(rename_channel(l, from, to), rename_channel(r, from, to)),
        ProcessTerm::Sum(l, r) => ProcessTerm::sum(rename_channel(l, from, to), rename_channel(r, from, to)),
        ProcessTerm::Seq(l, r) => ProcessTerm::Seq(
            Box::new(rename_channel(l, from, to)),
            Box::new(rename_channel(r, from, to)),
        ),
    }
}

/// Renames receive binder `from` to `to` where it binds, with its uses.
pub fn rename_binders(p: &ProcessTerm, from: &str, to: &str) -> ProcessTerm {
    fn go(p: &ProcessTerm, from: &str, to: &str, active: bool) -> ProcessTerm {
        match p {
            ProcessTerm::Nil | ProcessTerm::Const(_) => p.clone(),
            ProcessTerm::Prefix(act, cont) => match act {
                Action::Receive { channel, binder } if binder.as_str() == from => {
                    ProcessTerm::prefix(Action::receive(channel.clone(), to), go(cont, from, to, true))
                }
                Action::Receive { .. } => ProcessTerm::prefix(act.clone(), go(cont, from, to, active)),
                Action::Send {
                    channel,
                    payload: Payload::Var(x),
                } if active && x.as_str() == from => {
                    ProcessTerm::prefix(Action::send_var(channel.clone(), to), go(cont, from, to, active))
                }
                _ => ProcessTerm::prefix(act.clone(), go(cont, from, to, active)),
            },
            ProcessTerm::Restrict(n, b) => ProcessTerm::restrict(n.clone(), go(b, from, to, active)),
            ProcessTerm::Par(l, r) => ProcessTerm::par(go(l, from, to, active), go(r, from, to, active)),
            ProcessTerm::Sum(l, r) => ProcessTerm::sum(go(l, from, to, active), go(r, from, to, active)),
            ProcessTerm::Seq(l, r) => ProcessTerm::Seq(
                Box::new(go(l, from, to, active)),
                Box::new(go(r, from, to, active)),
            ),
        }
    }
    go(p, from, to, false)
}

/// Component-wise expansion of the three-agent example with every labeled
/// action permitted: agent 1 runs two independent send sequences, agent 2
/// receives twice then sends, agent 3 receives once.
pub fn demo3_counts() -> (usize, usize) {
    type St = (u8, u8, u8, u8);
    let values = ["t1", "t2", "t3"];
    let steps = |(x, y, q, r): St| -> Vec<(String, St)> {
        let mut out = Vec::new();
        if x == 0 {
            out.push(("'c<t1>@1".to_string(), (1, y, q, r)));
            if q == 0 {
                out.push(("tau(1,2)".into(), (1, y, 1, r)));
            }
        }
        if x == 1 {
            out.push(("'a<t2>@1".into(), (2, y, q, r)));
            if q == 1 {
                out.push(("tau(1,2)".into(), (2, y, 2, r)));
            }
        }
        if y == 0 {
            out.push(("'d<t3>@1".into(), (x, 1, q, r)));
            if r == 0 {
                out.push(("tau(1,3)".into(), (x, 1, q, 1)));
            }
        }
        for t in values {
            if q == 0 {
                out.push((format!("c<{t}>@2"), (x, y, 1, r)));
            }
            if q == 1 {
                out.push((format!("a<{t}>@2"), (x, y, 2, r)));
            }
            if r == 0 {
                out.push((format!("d<{t}>@3"), (x, y, q, 1)));
            }
        }
        if q == 2 {
            out.push(("'b<t2>@2".into(), (x, y, 3, r)));
        }
        out
    };
    let mut seen = BTreeSet::from([(0, 0, 0, 0)]);
    let mut todo = vec![(0, 0, 0, 0)];
    let mut edges = BTreeSet::new();
    while let Some(c) = todo.pop() {
        for (l, d) in steps(c) {
            edges.insert((c, l, d));
            if seen.insert(d) {
                todo.push(d);
            }
        }
    }
    (seen.len(), edges.len())
}
