//! ATLE formulas.
//!
//! The tree only carries the core connectives; `/\`, `->`, `true` and
//! `false` are expanded by the parser.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::AgentId;

/// An atomic proposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropId(String);

impl PropId {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for PropId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl fmt::Display for PropId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A non-empty set of agents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(BTreeSet<AgentId>);

impl Coalition {
    /// `None` if `agents` is empty.
    pub fn new(agents: impl IntoIterator<Item = AgentId>) -> Option<Self> {
        let set: BTreeSet<AgentId> = agents.into_iter().collect();
        (!set.is_empty()).then_some(Self(set))
    }

    pub fn contains(&self, a: &AgentId) -> bool {
        self.0.contains(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AgentId> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn agents(&self) -> &BTreeSet<AgentId> {
        &self.0
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            a.fmt(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Prop(PropId),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `K{i} φ`: agent `i` knows φ.
    Know(AgentId, Box<Formula>),
    /// `E{A} φ`: every member of A knows φ.
    Every(Coalition, Box<Formula>),
    /// `D{A} φ`: some member of A knows φ.
    Dist(Coalition, Box<Formula>),
    /// `C{A} φ`: φ is common knowledge in A.
    Common(Coalition, Box<Formula>),
    /// `<<A>> X φ`
    CoalNext(Coalition, Box<Formula>),
    /// `<<A>> G φ`
    CoalGlobally(Coalition, Box<Formula>),
    /// `<<A>> F φ`
    CoalFinally(Coalition, Box<Formula>),
    /// `<<A>> (φ U ψ)`
    CoalUntil(Coalition, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn prop(p: &str) -> Self {
        Formula::Prop(p.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `a /\ b` as `!(!a \/ !b)`.
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    /// `a -> b` as `!a \/ b`.
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::not(a), b)
    }

    pub fn know(agent: &str, f: Formula) -> Self {
        Formula::Know(agent.into(), Box::new(f))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) => vec![],
            Formula::Not(f)
            | Formula::Know(_, f)
            | Formula::Every(_, f)
            | Formula::Dist(_, f)
            | Formula::Common(_, f)
            | Formula::CoalNext(_, f)
            | Formula::CoalGlobally(_, f)
            | Formula::CoalFinally(_, f) => vec![f],
            Formula::Or(a, b) | Formula::CoalUntil(_, a, b) => vec![a, b],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// The coalition of a strategic operator.
    pub fn strategic_coalition(&self) -> Option<&Coalition> {
        match self {
            Formula::CoalNext(a, _)
            | Formula::CoalGlobally(a, _)
            | Formula::CoalFinally(a, _)
            | Formula::CoalUntil(a, _, _) => Some(a),
            _ => None,
        }
    }

    /// Counts strategic operators in the tree.
    pub fn strategic_operators(&self) -> usize {
        usize::from(self.strategic_coalition().is_some())
            + self
                .children()
                .iter()
                .map(|c| c.strategic_operators())
                .sum::<usize>()
    }
}

/// Fully parenthesized; re-parses to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Prop(p) => p.fmt(f),
            Formula::Not(x) => write!(f, "!{}", Group(x)),
            Formula::Or(a, b) => write!(f, "({a} \\/ {b})"),
            Formula::Know(i, x) => write!(f, "K{{{i}}} {}", Group(x)),
            Formula::Every(a, x) => write!(f, "E{{{a}}} {}", Group(x)),
            Formula::Dist(a, x) => write!(f, "D{{{a}}} {}", Group(x)),
            Formula::Common(a, x) => write!(f, "C{{{a}}} {}", Group(x)),
            Formula::CoalNext(a, x) => write!(f, "<<{a}>> X {}", Group(x)),
            Formula::CoalGlobally(a, x) => write!(f, "<<{a}>> G {}", Group(x)),
            Formula::CoalFinally(a, x) => write!(f, "<<{a}>> F {}", Group(x)),
            Formula::CoalUntil(a, x, y) => write!(f, "<<{a}>> ({x} U {y})"),
        }
    }
}

/// Wraps anything but atoms, negations and disjunctions in parentheses.
struct Group<'a>(&'a Formula);

impl fmt::Display for Group<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Prop(_) | Formula::Not(_) | Formula::Or(..) => self.0.fmt(f),
            other => write!(f, "({other})"),
        }
    }
}
