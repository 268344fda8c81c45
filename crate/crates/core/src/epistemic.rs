//! Indistinguishability between configurations.
//!
//! Agent `i` cannot tell two configurations apart when `h` maps their
//! states to the same epistemic state for `i`. Every relation here is an
//! equivalence, so it is stored as a partition: a class id per configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::explore::{ConfigIndex, StateSpace};
use crate::formula::Coalition;
use crate::model::{ModelDef, StateId};
use crate::syntax::AgentId;

pub fn indistinguishable(model: &ModelDef, agent: &AgentId, s: &StateId, s2: &StateId) -> bool {
    model.h(agent, s) == model.h(agent, s2)
}

/// An equivalence relation over the configurations of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessRelation {
    class_of: Vec<usize>,
    classes: Vec<Vec<ConfigIndex>>,
}

impl AccessRelation {
    /// Classes are numbered by their smallest member.
    fn from_labels(labels: Vec<usize>) -> Self {
        let mut renumber = BTreeMap::new();
        let mut class_of = Vec::with_capacity(labels.len());
        let mut classes: Vec<Vec<ConfigIndex>> = Vec::new();
        for (c, l) in labels.into_iter().enumerate() {
            let next = renumber.len();
            let id = *renumber.entry(l).or_insert(next);
            if id == classes.len() {
                classes.push(Vec::new());
            }
            classes[id].push(c);
            class_of.push(id);
        }
        Self { class_of, classes }
    }

    pub fn related(&self, a: ConfigIndex, b: ConfigIndex) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn class(&self, c: ConfigIndex) -> &[ConfigIndex] {
        &self.classes[self.class_of[c]]
    }

    pub fn class_id(&self, c: ConfigIndex) -> usize {
        self.class_of[c]
    }

    pub fn classes(&self) -> &[Vec<ConfigIndex>] {
        &self.classes
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ConfigIndex, ConfigIndex)> + '_ {
        self.classes
            .iter()
            .flat_map(|cl| cl.iter().flat_map(move |&a| cl.iter().map(move |&b| (a, b))))
    }
}

/// Agent `i`'s relation over the configurations of `space`.
pub fn agent_relation(model: &ModelDef, agent: &AgentId, space: &StateSpace) -> AccessRelation {
    let mut ids = BTreeMap::new();
    let labels = space
        .configs
        .iter()
        .map(|c| {
            let next = ids.len();
            *ids.entry(model.h(agent, &c.state)).or_insert(next)
        })
        .collect();
    AccessRelation::from_labels(labels)
}

pub fn agent_class(
    model: &ModelDef,
    agent: &AgentId,
    c: ConfigIndex,
    space: &StateSpace,
) -> Vec<ConfigIndex> {
    let s = &space.configs[c].state;
    (0..space.len())
        .filter(|&d| indistinguishable(model, agent, s, &space.configs[d].state))
        .collect()
}

/// Transitive closure of the union of the members' relations.
pub fn common_reach(model: &ModelDef, coalition: &Coalition, space: &StateSpace) -> AccessRelation {
    let mut uf = UnionFind::new(space.len());
    for agent in coalition.iter() {
        let rel = agent_relation(model, agent, space);
        for class in rel.classes() {
            for w in class.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
    }
    let labels = (0..space.len()).map(|c| uf.find(c)).collect();
    AccessRelation::from_labels(labels)
}

/// Per-agent classes of each member of `coalition`, then the common partition.
pub fn dump(model: &ModelDef, coalition: &Coalition, space: &StateSpace) -> String {
    let fmt_class = |cl: &[ConfigIndex]| {
        let members: Vec<String> = cl
            .iter()
            .map(|&c| format!("{}:{}", c, space.configs[c].state))
            .collect();
        format!("{{{}}}", members.join(" "))
    };
    let mut out = String::new();
    for agent in coalition.iter() {
        let rel = agent_relation(model, agent, space);
        let classes: Vec<String> = rel.classes().iter().map(|c| fmt_class(c)).collect();
        let _ = writeln!(out, "agent {agent}: {}", classes.join(" "));
    }
    let common = common_reach(model, coalition, space);
    let classes: Vec<String> = common.classes().iter().map(|c| fmt_class(c)).collect();
    let _ = writeln!(out, "common {coalition}: {}", classes.join(" "));
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{explore, ExplorationLimits};
    use crate::fixtures;

    fn uav() -> (ModelDef, StateSpace) {
        let m = fixtures::uav();
        let space = explore(&m, &ExplorationLimits::default()).unwrap();
        (m, space)
    }

    fn states(space: &StateSpace, cl: &[ConfigIndex]) -> Vec<String> {
        let mut v: Vec<String> = cl.iter().map(|&c| space.configs[c].state.to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn item_level_indistinguishability() {
        let (m, _) = uav();
        let s = |x: &str| StateId::from(x);
        assert!(indistinguishable(&m, &"UAV0".into(), &s("s0"), &s("s3")));
        assert!(indistinguishable(&m, &"UAV0".into(), &s("s0"), &s("s0")));
        assert!(!indistinguishable(&m, &"GCS".into(), &s("s1"), &s("s4")));
    }

    #[test]
    fn agent_classes() {
        let (m, space) = uav();
        let at = |st: &str| space.configs.iter().position(|c| c.state.as_str() == st).unwrap();
        assert_eq!(
            states(&space, &agent_class(&m, &"UAV1".into(), at("s1"), &space)),
            ["s1"]
        );
        assert_eq!(
            states(&space, &agent_class(&m, &"UAV0".into(), at("s3"), &space)),
            ["s0", "s3"]
        );
    }

    #[test]
    fn common_partition() {
        let (m, space) = uav();
        let all = Coalition::new(m.agents.clone()).unwrap();
        let rel = common_reach(&m, &all, &space);
        let at = |st: &str| space.configs.iter().position(|c| c.state.as_str() == st).unwrap();
        assert_eq!(states(&space, rel.class(at("s1"))), ["s1"]);
        assert_eq!(states(&space, rel.class(at("s0"))), ["s0", "s2", "s3", "s4"]);
        let single = Coalition::new(["UAV0".into()]).unwrap();
        assert_eq!(
            common_reach(&m, &single, &space),
            agent_relation(&m, &"UAV0".into(), &space)
        );
    }
}
