//! Structural congruence via canonical keys.
//!
//! A term is first brought to a normal form:
//!
//! * parallel compositions are flattened into multisets with `0` dropped;
//! * sums are flattened, `0` summands dropped, duplicates removed;
//! * restrictions are pushed to minimal scope. Restricted names that share
//!   components are grouped into one block, so `(new a)(new b)P` and
//!   `(new b)(new a)P` produce the same block, and `P | new a in Q`
//!   coincides with `new a in (P | Q)` when `a` is not free in `P`.
//!
//! The normal form is then rendered to a string. Bound channel names are
//! replaced by position labels `#depth.index`; within a block the labeling
//! that yields the smallest rendering is chosen, which makes the key
//! independent of the original bound names. Receive binders are renamed by
//! nesting depth (`x0`, `x1`, ...).
//!
//! Process constants are treated as opaque atoms. Model validation rejects
//! restrictions that would capture a name used free inside a constant's
//! definition, which is what makes renaming bound names around a constant
//! sound.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::syntax::{Action, AgentId, LabeledProcessTerm, Name, Payload, ProcessTerm, Var};

/// Blocks with more bound names than this are labeled in first-occurrence
/// order instead of trying every permutation.
const MAX_PERMUTED_NAMES: usize = 6;

/// Canonical representative of a congruence class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonicalize(m: &LabeledProcessTerm) -> CanonicalKey {
    let mut fresh = Fresh::default();
    let norm = Norm::from_labeled(m, &mut HashMap::new(), &mut fresh);
    CanonicalKey(render_top(&norm))
}

pub fn canonicalize_process(p: &ProcessTerm) -> CanonicalKey {
    let mut fresh = Fresh::default();
    let norm = Norm::from_process(p, &mut HashMap::new(), &mut fresh);
    CanonicalKey(render_top(&norm))
}

pub fn congruent(m: &LabeledProcessTerm, n: &LabeledProcessTerm) -> bool {
    canonicalize(m) == canonicalize(n)
}

pub fn congruent_process(p: &ProcessTerm, q: &ProcessTerm) -> bool {
    canonicalize_process(p) == canonicalize_process(q)
}

/// A congruent labeled term in normal form: flattened, minimal restriction
/// scopes, components ordered by their canonical rendering. Bound names are
/// replaced by `$1`, `$2`, ..., which the parser does not accept.
pub fn normalize(m: &LabeledProcessTerm) -> LabeledProcessTerm {
    let mut fresh = Fresh::default();
    let norm = Norm::from_labeled(m, &mut HashMap::new(), &mut fresh);
    norm.to_labeled()
}

#[derive(Default)]
struct Fresh(usize);

impl Fresh {
    fn next(&mut self) -> Name {
        self.0 += 1;
        // `$` cannot appear in parsed identifiers
        Name::new(format!("${}", self.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Norm {
    Nil,
    Prefix(Action, Box<Norm>),
    /// At least two distinct summands, none of them `Nil` or a sum.
    Sum(Vec<Norm>),
    /// At least two components, none of them `Nil` or a parallel.
    Par(Vec<Norm>),
    /// Restricted names with the components they connect. Every component
    /// mentions at least one of the names; a block with no components is a
    /// vacuous restriction `new a in 0`.
    Block(Vec<Name>, Vec<Norm>),
    Const(Name),
    Seq(Box<Norm>, Box<Norm>),
    Agent(AgentId, Box<Norm>),
}

impl Norm {
    fn from_process(p: &ProcessTerm, env: &mut HashMap<Name, Name>, fresh: &mut Fresh) -> Norm {
        match p {
            ProcessTerm::Nil => Norm::Nil,
            ProcessTerm::Const(c) => Norm::Const(c.clone()),
            ProcessTerm::Prefix(act, cont) => {
                let rename = |n: &Name| env.get(n).cloned().unwrap_or_else(|| n.clone());
                let act = match act {
                    Action::Send { channel, payload } => Action::Send {
                        channel: rename(channel),
                        payload: payload.clone(),
                    },
                    Action::Receive { channel, binder } => Action::Receive {
                        channel: rename(channel),
                        binder: binder.clone(),
                    },
                    Action::Tau => Action::Tau,
                };
                Norm::Prefix(act, Box::new(Norm::from_process(cont, env, fresh)))
            }
            ProcessTerm::Par(l, r) => {
                let l = Norm::from_process(l, env, fresh);
                let r = Norm::from_process(r, env, fresh);
                Norm::par(vec![l, r])
            }
            ProcessTerm::Sum(l, r) => {
                let l = Norm::from_process(l, env, fresh);
                let r = Norm::from_process(r, env, fresh);
                Norm::sum(vec![l, r])
            }
            ProcessTerm::Seq(l, r) => Norm::Seq(
                Box::new(Norm::from_process(l, env, fresh)),
                Box::new(Norm::from_process(r, env, fresh)),
            ),
            ProcessTerm::Restrict(name, body) => {
                let unique = fresh.next();
                let saved = env.insert(name.clone(), unique.clone());
                let body = Norm::from_process(body, env, fresh);
                restore(env, name, saved);
                Norm::restrict(unique, body)
            }
        }
    }

    fn from_labeled(m: &LabeledProcessTerm, env: &mut HashMap<Name, Name>, fresh: &mut Fresh) -> Norm {
        match m {
            LabeledProcessTerm::Agent(p, a) => {
                Norm::Agent(a.clone(), Box::new(Norm::from_process(p, env, fresh)))
            }
            LabeledProcessTerm::Par(l, r) => {
                let l = Norm::from_labeled(l, env, fresh);
                let r = Norm::from_labeled(r, env, fresh);
                Norm::par(vec![l, r])
            }
            LabeledProcessTerm::Restrict(name, body) => {
                let unique = fresh.next();
                let saved = env.insert(name.clone(), unique.clone());
                let body = Norm::from_labeled(body, env, fresh);
                restore(env, name, saved);
                Norm::restrict(unique, body)
            }
        }
    }

    fn components(self) -> Vec<Norm> {
        match self {
            Norm::Nil => Vec::new(),
            Norm::Par(cs) => cs,
            other => vec![other],
        }
    }

    fn par(parts: Vec<Norm>) -> Norm {
        let mut cs: Vec<Norm> = parts.into_iter().flat_map(Norm::components).collect();
        match cs.len() {
            0 => Norm::Nil,
            1 => cs.pop().unwrap(),
            _ => {
                cs.sort();
                Norm::Par(cs)
            }
        }
    }

    fn sum(parts: Vec<Norm>) -> Norm {
        let mut ss = Vec::new();
        for p in parts {
            match p {
                Norm::Nil => {}
                Norm::Sum(inner) => ss.extend(inner),
                other => ss.push(other),
            }
        }
        ss.sort();
        ss.dedup();
        match ss.len() {
            0 => Norm::Nil,
            1 => ss.pop().unwrap(),
            _ => Norm::Sum(ss),
        }
    }

    fn restrict(name: Name, body: Norm) -> Norm {
        let (inside, mut outside): (Vec<Norm>, Vec<Norm>) =
            body.components().into_iter().partition(|c| c.mentions(&name));
        let mut names = vec![name];
        let mut comps = Vec::new();
        for c in inside {
            match c {
                Norm::Block(ns, cs) => {
                    names.extend(ns);
                    comps.extend(cs);
                }
                other => comps.push(other),
            }
        }
        names.sort();
        comps.sort();
        outside.push(Norm::Block(names, comps));
        Norm::par(outside)
    }

    fn mentions(&self, name: &Name) -> bool {
        match self {
            Norm::Nil | Norm::Const(_) => false,
            Norm::Prefix(act, cont) => act.channel() == Some(name) || cont.mentions(name),
            Norm::Sum(xs) | Norm::Par(xs) => xs.iter().any(|x| x.mentions(name)),
            // bound names are unique, so a block never rebinds `name`
            Norm::Block(_, cs) => cs.iter().any(|x| x.mentions(name)),
            Norm::Seq(l, r) => l.mentions(name) || r.mentions(name),
            Norm::Agent(_, p) => p.mentions(name),
        }
    }

    fn collect_channels(&self, out: &mut Vec<Name>) {
        match self {
            Norm::Nil | Norm::Const(_) => {}
            Norm::Prefix(act, cont) => {
                if let Some(ch) = act.channel() {
                    out.push(ch.clone());
                }
                cont.collect_channels(out);
            }
            Norm::Sum(xs) | Norm::Par(xs) | Norm::Block(_, xs) => {
                xs.iter().for_each(|x| x.collect_channels(out))
            }
            Norm::Seq(l, r) => {
                l.collect_channels(out);
                r.collect_channels(out);
            }
            Norm::Agent(_, p) => p.collect_channels(out),
        }
    }

    fn is_labeled(&self) -> bool {
        match self {
            Norm::Agent(..) => true,
            Norm::Par(cs) | Norm::Block(_, cs) => cs.first().is_some_and(Norm::is_labeled),
            _ => false,
        }
    }

    fn to_process(&self) -> ProcessTerm {
        match self {
            Norm::Nil => ProcessTerm::Nil,
            Norm::Const(c) => ProcessTerm::Const(c.clone()),
            Norm::Prefix(act, cont) => ProcessTerm::prefix(act.clone(), cont.to_process()),
            Norm::Sum(xs) => {
                fold(xs.iter().map(Norm::to_process), ProcessTerm::sum).unwrap_or(ProcessTerm::Nil)
            }
            Norm::Par(xs) => {
                fold(sorted_by_key(xs).map(Norm::to_process), ProcessTerm::par).unwrap_or(ProcessTerm::Nil)
            }
            Norm::Block(names, cs) => {
                let body = fold(sorted_by_key(cs).map(Norm::to_process), ProcessTerm::par)
                    .unwrap_or(ProcessTerm::Nil);
                names
                    .iter()
                    .rev()
                    .fold(body, |acc, n| ProcessTerm::restrict(n.clone(), acc))
            }
            Norm::Seq(l, r) => ProcessTerm::Seq(Box::new(l.to_process()), Box::new(r.to_process())),
            Norm::Agent(..) => unreachable!("agent node inside a process"),
        }
    }

    fn to_labeled(&self) -> LabeledProcessTerm {
        match self {
            Norm::Agent(a, p) => LabeledProcessTerm::Agent(p.to_process(), a.clone()),
            Norm::Par(xs) => {
                // vacuous blocks have no agent leaf of their own; they wrap
                // the rest, which renormalizes to the same form
                let (vacuous, rest): (Vec<&Norm>, Vec<&Norm>) =
                    sorted_by_key(xs).partition(|x| matches!(x, Norm::Block(_, cs) if cs.is_empty()));
                let body = LabeledProcessTerm::par_all(rest.into_iter().map(Norm::to_labeled))
                    .expect("parallel with an agent component");
                vacuous
                    .into_iter()
                    .rev()
                    .flat_map(|b| match b {
                        Norm::Block(names, _) => names.iter().rev(),
                        _ => unreachable!(),
                    })
                    .fold(body, |acc, n| LabeledProcessTerm::restrict(n.clone(), acc))
            }
            Norm::Block(names, cs) if self.is_labeled() => {
                let body = LabeledProcessTerm::par_all(sorted_by_key(cs).map(Norm::to_labeled))
                    .expect("labeled block with components");
                names
                    .iter()
                    .rev()
                    .fold(body, |acc, n| LabeledProcessTerm::restrict(n.clone(), acc))
            }
            _ => unreachable!("labeled normal form always has agent leaves"),
        }
    }
}

fn restore(env: &mut HashMap<Name, Name>, name: &Name, saved: Option<Name>) {
    match saved {
        Some(prev) => {
            env.insert(name.clone(), prev);
        }
        None => {
            env.remove(name);
        }
    }
}

fn fold<T>(items: impl Iterator<Item = T>, f: impl Fn(T, T) -> T) -> Option<T> {
    let mut items: Vec<T> = items.collect();
    let mut acc = items.pop()?;
    while let Some(x) = items.pop() {
        acc = f(x, acc);
    }
    Some(acc)
}

fn sorted_by_key(xs: &[Norm]) -> impl Iterator<Item = &Norm> {
    let mut keyed: Vec<(String, &Norm)> = xs.iter().map(|x| (Renderer::default().render(x, 0), x)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, x)| x)
}

fn render_top(norm: &Norm) -> String {
    let mut r = Renderer::default();
    match norm {
        Norm::Par(cs) => {
            let mut parts: Vec<String> = cs.iter().map(|c| r.render(c, 0)).collect();
            parts.sort();
            parts.join("|")
        }
        other => r.render(other, 0),
    }
}

#[derive(Default)]
struct Renderer {
    names: HashMap<Name, String>,
    vars: Vec<(Var, String)>,
}

impl Renderer {
    fn channel(&self, n: &Name) -> String {
        self.names
            .get(n)
            .cloned()
            .unwrap_or_else(|| n.as_str().to_owned())
    }

    fn var(&self, x: &Var) -> Option<&str> {
        self.vars
            .iter()
            .rev()
            .find(|(v, _)| v == x)
            .map(|(_, s)| s.as_str())
    }

    fn render(&mut self, n: &Norm, depth: usize) -> String {
        match n {
            Norm::Nil => "0".to_owned(),
            Norm::Const(c) => c.as_str().to_owned(),
            Norm::Prefix(act, cont) => match act {
                Action::Tau => format!("tau.{}", self.render(cont, depth)),
                Action::Send { channel, payload } => {
                    let payload = match payload {
                        Payload::Value(v) => v.as_str().to_owned(),
                        Payload::Var(x) => match self.var(x) {
                            Some(label) => label.to_owned(),
                            None => format!("?{x}"),
                        },
                    };
                    format!(
                        "'{}<{}>.{}",
                        self.channel(channel),
                        payload,
                        self.render(cont, depth)
                    )
                }
                Action::Receive { channel, binder } => {
                    let label = format!("x{}", self.vars.len());
                    let head = format!("{}({})", self.channel(channel), label);
                    self.vars.push((binder.clone(), label));
                    let cont = self.render(cont, depth);
                    self.vars.pop();
                    format!("{head}.{cont}")
                }
            },
            Norm::Sum(xs) => {
                let mut parts: Vec<String> = xs.iter().map(|x| self.render(x, depth)).collect();
                parts.sort();
                parts.dedup();
                if parts.len() == 1 {
                    parts.pop().unwrap()
                } else {
                    format!("({})", parts.join("+"))
                }
            }
            Norm::Par(xs) => {
                let mut parts: Vec<String> = xs.iter().map(|x| self.render(x, depth)).collect();
                parts.sort();
                format!("({})", parts.join("|"))
            }
            Norm::Seq(l, r) => format!("[{}].{}", self.render(l, depth), self.render(r, depth)),
            Norm::Agent(a, p) => format!("{{{}}}@{}", self.render(p, depth), a),
            Norm::Block(names, cs) => self.render_block(names, cs, depth + 1),
        }
    }

    fn render_block(&mut self, names: &[Name], cs: &[Norm], depth: usize) -> String {
        let labels: Vec<String> = (0..names.len()).map(|i| format!("#{depth}.{i}")).collect();
        let header = format!("new[{}]", labels.join(","));
        let orders: Vec<Vec<usize>> = if names.len() <= MAX_PERMUTED_NAMES {
            permutations(names.len())
        } else {
            vec![self.first_occurrence_order(names, cs)]
        };
        let mut best: Option<String> = None;
        for order in orders {
            let saved: Vec<_> = names
                .iter()
                .zip(&order)
                .map(|(n, &i)| (n.clone(), self.names.insert(n.clone(), labels[i].clone())))
                .collect();
            let mut parts: Vec<String> = cs.iter().map(|c| self.render(c, depth)).collect();
            parts.sort();
            let body = if parts.is_empty() {
                "0".to_owned()
            } else {
                parts.join("|")
            };
            let candidate = format!("{header}({body})");
            for (n, prev) in saved {
                match prev {
                    Some(p) => self.names.insert(n, p),
                    None => self.names.remove(&n),
                };
            }
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        best.expect("at least one labeling")
    }

    /// Label order by first use in the components sorted by their masked rendering.
    fn first_occurrence_order(&mut self, names: &[Name], cs: &[Norm]) -> Vec<usize> {
        let masked: Vec<(String, &Norm)> = {
            let saved: Vec<_> = names
                .iter()
                .map(|n| (n.clone(), self.names.insert(n.clone(), "_".to_owned())))
                .collect();
            let out = cs.iter().map(|c| (self.render(c, usize::MAX / 2), c)).collect();
            for (n, prev) in saved {
                match prev {
                    Some(p) => self.names.insert(n, p),
                    None => self.names.remove(&n),
                };
            }
            out
        };
        let mut masked = masked;
        masked.sort_by(|a, b| a.0.cmp(&b.0));
        let mut seen = Vec::new();
        for (_, c) in masked {
            let mut chans = Vec::new();
            c.collect_channels(&mut chans);
            for ch in chans {
                if let Some(pos) = names.iter().position(|n| *n == ch) {
                    if !seen.contains(&pos) {
                        seen.push(pos);
                    }
                }
            }
        }
        let mut order = vec![0; names.len()];
        for (label, pos) in seen.into_iter().enumerate() {
            order[pos] = label;
        }
        order
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut BTreeSet<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for x in left.clone() {
            left.remove(&x);
            prefix.push(x);
            go(prefix, left, out);
            prefix.pop();
            left.insert(x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Action;
    use proptest::prelude::*;

    fn send(ch: &str) -> ProcessTerm {
        ProcessTerm::prefix(Action::send(ch, "t"), ProcessTerm::Nil)
    }

    fn recv(ch: &str) -> ProcessTerm {
        ProcessTerm::prefix(Action::receive(ch, "x"), ProcessTerm::Nil)
    }

    fn agent(p: ProcessTerm, a: &str) -> LabeledProcessTerm {
        LabeledProcessTerm::agent(p, a)
    }

    #[test]
    fn parallel_commutes() {
        let p = send("a");
        let m = LabeledProcessTerm::par(agent(p.clone(), "1"), agent(ProcessTerm::Nil, "2"));
        let n = LabeledProcessTerm::par(agent(ProcessTerm::Nil, "2"), agent(p, "1"));
        assert_eq!(canonicalize(&m), canonicalize(&n));
    }

    #[test]
    fn restrictions_reorder() {
        let body = ProcessTerm::par(send("a"), ProcessTerm::prefix(Action::send("b", "t"), recv("a")));
        let ab = ProcessTerm::restrict("a", ProcessTerm::restrict("b", body.clone()));
        let ba = ProcessTerm::restrict("b", ProcessTerm::restrict("a", body));
        assert!(congruent_process(&ab, &ba));
    }

    #[test]
    fn nil_is_parallel_unit() {
        let p = send("a");
        assert!(congruent_process(
            &ProcessTerm::par(p.clone(), ProcessTerm::Nil),
            &p
        ));
        assert!(congruent_process(
            &ProcessTerm::sum(p.clone(), ProcessTerm::Nil),
            &p
        ));
    }

    #[test]
    fn parallel_associates() {
        let (a, b, c) = (send("a"), recv("b"), ProcessTerm::constant("C"));
        let l = ProcessTerm::par(a.clone(), ProcessTerm::par(b.clone(), c.clone()));
        let r = ProcessTerm::par(ProcessTerm::par(a, b), c);
        assert!(congruent_process(&l, &r));
    }

    #[test]
    fn distinct_behaviors_differ() {
        let tau = ProcessTerm::prefix(Action::Tau, ProcessTerm::Nil);
        assert!(!congruent_process(&tau, &ProcessTerm::Nil));
    }

    #[test]
    fn bound_names_are_alpha_renamed() {
        let a = ProcessTerm::restrict("a", send("a"));
        let b = ProcessTerm::restrict("b", send("b"));
        assert!(congruent_process(&a, &b));
        // a free name is not interchangeable with a bound one
        assert!(!congruent_process(&a, &send("a")));
    }

    #[test]
    fn receive_binders_are_alpha_renamed() {
        let x = ProcessTerm::prefix(
            Action::receive("a", "x"),
            ProcessTerm::prefix(Action::send_var("b", "x"), ProcessTerm::Nil),
        );
        let y = ProcessTerm::prefix(
            Action::receive("a", "y"),
            ProcessTerm::prefix(Action::send_var("b", "y"), ProcessTerm::Nil),
        );
        assert!(congruent_process(&x, &y));
    }

    #[test]
    fn scope_extrusion() {
        let p = send("b");
        let q = ProcessTerm::par(send("a"), recv("a"));
        let outside = ProcessTerm::par(p.clone(), ProcessTerm::restrict("a", q.clone()));
        let inside = ProcessTerm::restrict("a", ProcessTerm::par(p, q));
        assert!(congruent_process(&outside, &inside));
        // not when the name is free on the other side
        let p = send("a");
        let q = recv("a");
        let outside = ProcessTerm::par(p.clone(), ProcessTerm::restrict("a", q.clone()));
        let inside = ProcessTerm::restrict("a", ProcessTerm::par(p, q));
        assert!(!congruent_process(&outside, &inside));
    }

    #[test]
    fn symmetric_blocks_are_canonical() {
        // (new a)(new b)('a.0 | 'b.0 | a(x).'b<t>.0) under both name assignments
        let build = |a: &str, b: &str| {
            ProcessTerm::restrict(
                a,
                ProcessTerm::restrict(
                    b,
                    ProcessTerm::par(
                        ProcessTerm::par(send(a), send(b)),
                        ProcessTerm::prefix(Action::receive(a, "x"), send(b)),
                    ),
                ),
            )
        };
        assert!(congruent_process(&build("a", "b"), &build("b", "a")));
        assert!(congruent_process(&build("a", "b"), &build("u", "v")));
    }

    #[test]
    fn vacuous_restrictions_are_counted() {
        let one = ProcessTerm::restrict("a", ProcessTerm::Nil);
        let two = ProcessTerm::par(one.clone(), ProcessTerm::restrict("b", ProcessTerm::Nil));
        assert!(!congruent_process(&one, &two));
        let nested = ProcessTerm::restrict("a", ProcessTerm::restrict("b", ProcessTerm::Nil));
        assert!(congruent_process(&nested, &two));
    }

    #[test]
    fn vacuous_labeled_restriction_normalizes() {
        let m = LabeledProcessTerm::restrict("a", agent(send("b"), "1"));
        let n = normalize(&m);
        assert!(congruent(&m, &n));
        assert_eq!(canonicalize(&normalize(&n)), canonicalize(&m));
    }

    #[test]
    fn constants_stay_opaque() {
        let p = ProcessTerm::restrict("a", ProcessTerm::par(ProcessTerm::constant("C"), send("a")));
        let q = ProcessTerm::par(ProcessTerm::constant("C"), ProcessTerm::restrict("a", send("a")));
        assert!(congruent_process(&p, &q));
    }

    #[test]
    fn normalize_is_congruent_and_stable() {
        let m = LabeledProcessTerm::restrict(
            "a",
            LabeledProcessTerm::par(
                agent(ProcessTerm::par(send("a"), ProcessTerm::Nil), "2"),
                agent(recv("b"), "1"),
            ),
        );
        let n = normalize(&m);
        assert!(congruent(&m, &n));
        assert_eq!(canonicalize(&normalize(&n)), canonicalize(&m));
    }

    fn arb_process() -> impl Strategy<Value = ProcessTerm> {
        let chan = prop::sample::select(vec!["a", "b", "c"]);
        let leaf = prop_oneof![
            Just(ProcessTerm::Nil),
            Just(ProcessTerm::constant("C")),
            chan.clone().prop_map(send),
            chan.clone().prop_map(recv),
        ];
        leaf.prop_recursive(4, 24, 3, move |inner| {
            prop_oneof![
                (chan.clone(), inner.clone()).prop_map(|(c, p)| ProcessTerm::prefix(Action::send(c, "t"), p)),
                (inner.clone(), inner.clone()).prop_map(|(p, q)| ProcessTerm::par(p, q)),
                (inner.clone(), inner.clone()).prop_map(|(p, q)| ProcessTerm::sum(p, q)),
                (chan.clone(), inner).prop_map(|(c, p)| ProcessTerm::restrict(c, p)),
            ]
        })
    }

    proptest! {
        #[test]
        fn axioms_hold(p in arb_process(), q in arb_process(), r in arb_process()) {
            prop_assert!(congruent_process(&ProcessTerm::par(p.clone(), q.clone()), &ProcessTerm::par(q.clone(), p.clone())));
            prop_assert!(congruent_process(&ProcessTerm::par(p.clone(), ProcessTerm::Nil), &p));
            prop_assert!(congruent_process(&ProcessTerm::sum(p.clone(), ProcessTerm::Nil), &p));
            prop_assert!(congruent_process(
                &ProcessTerm::sum(p.clone(), ProcessTerm::sum(q.clone(), r.clone())),
                &ProcessTerm::sum(ProcessTerm::sum(p.clone(), q.clone()), r.clone()),
            ));
            prop_assert!(congruent_process(
                &ProcessTerm::par(p.clone(), ProcessTerm::par(q.clone(), r.clone())),
                &ProcessTerm::par(ProcessTerm::par(p.clone(), q.clone()), r),
            ));
            prop_assert!(congruent_process(
                &ProcessTerm::restrict("a", ProcessTerm::restrict("b", p.clone())),
                &ProcessTerm::restrict("b", ProcessTerm::restrict("a", p.clone())),
            ));
            if !p.free_names().contains(&Name::from("a")) {
                prop_assert!(congruent_process(
                    &ProcessTerm::par(p.clone(), ProcessTerm::restrict("a", q.clone())),
                    &ProcessTerm::restrict("a", ProcessTerm::par(p, q)),
                ));
            }
        }

        #[test]
        fn canonical_key_is_idempotent(p in arb_process(), q in arb_process()) {
            let m = LabeledProcessTerm::par(agent(p, "1"), agent(q, "2"));
            let n = normalize(&m);
            prop_assert_eq!(canonicalize(&m), canonicalize(&n));
            prop_assert_eq!(canonicalize(&normalize(&n)), canonicalize(&n));
        }

        #[test]
        fn congruence_is_an_equivalence(p in arb_process(), q in arb_process(), r in arb_process()) {
            prop_assert!(congruent_process(&p, &p));
            prop_assert_eq!(congruent_process(&p, &q), congruent_process(&q, &p));
            if congruent_process(&p, &q) && congruent_process(&q, &r) {
                prop_assert!(congruent_process(&p, &r));
            }
        }
    }
}
