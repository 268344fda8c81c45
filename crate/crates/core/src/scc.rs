//! Strongly connected components (Tarjan), iterative.

use crate::explore::{ConfigIndex, StateSpace};
use crate::strategy::OutcomeGraph;

const UNVISITED: usize = usize::MAX;

/// Components of the subgraph reachable from `root`, in completion order
/// (reverse topological: a component precedes every component reaching it).
pub fn tarjan_from<F, I>(n: usize, root: usize, successors: F) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut t = Tarjan::new(n);
    t.run(root, &successors);
    t.components
}

/// Components of the whole graph, roots tried in index order.
pub fn tarjan_all<F, I>(n: usize, successors: F) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut t = Tarjan::new(n);
    for v in 0..n {
        if t.index[v] == UNVISITED {
            t.run(v, &successors);
        }
    }
    t.components
}

/// Components of the kept subgraph reachable from `root`.
pub fn find_sccs(space: &StateSpace, g: &OutcomeGraph, root: ConfigIndex) -> Vec<Vec<ConfigIndex>> {
    tarjan_from(space.len(), root, |v| {
        g.kept_successors(space, v).collect::<Vec<_>>()
    })
}

struct Tarjan {
    index: Vec<usize>,
    lowlink: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    next: usize,
    components: Vec<Vec<usize>>,
}

impl Tarjan {
    fn new(n: usize) -> Self {
        Self {
            index: vec![UNVISITED; n],
            lowlink: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            next: 0,
            components: Vec::new(),
        }
    }

    fn visit(&mut self, v: usize) {
        self.index[v] = self.next;
        self.lowlink[v] = self.next;
        self.next += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
    }

    fn run<F, I>(&mut self, root: usize, successors: &F)
    where
        F: Fn(usize) -> I,
        I: IntoIterator<Item = usize>,
    {
        // frames: vertex, its successors, position of the next one to try
        let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        self.visit(root);
        frames.push((root, successors(root).into_iter().collect(), 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if let Some(&w) = frame.1.get(frame.2) {
                frame.2 += 1;
                if self.index[w] == UNVISITED {
                    self.visit(w);
                    frames.push((w, successors(w).into_iter().collect(), 0));
                } else if self.on_stack[w] {
                    self.lowlink[v] = self.lowlink[v].min(self.index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(parent) = frames.last() {
                let p = parent.0;
                self.lowlink[p] = self.lowlink[p].min(self.lowlink[v]);
            }
            if self.lowlink[v] == self.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = self.stack.pop().expect("v is on the stack");
                    self.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                self.components.push(comp);
            }
        }
    }
}
