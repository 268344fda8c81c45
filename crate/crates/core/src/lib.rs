//! Epistemic process calculus model checking.
//!
//! A model pairs a process term, whose agents communicate over named
//! channels, with a labeled state graph `K` that says which steps are
//! allowed where. Exploration builds the reachable configurations, and the
//! checker evaluates formulas that combine knowledge operators with
//! coalition operators over partial strategies.
//!
//! ```
//! use epc_core::checker::{CheckOptions, Checker};
//! use epc_core::explore::{explore, ExplorationLimits};
//! use epc_core::parse::{parse_formula, parse_model};
//!
//! let model = parse_model(
//!     "agents a, b;
//!      values v;
//!      props sent;
//!      states s0, s1;
//!      init s0;
//!      system = {'c<v>.0}@a | {c(x).0}@b;
//!      K s0 -tau(a,b)-> s1;
//!      h a : s0=e0 s1=e1;
//!      h b : s0=e0 s1=e1;
//!      T s1 : sent;",
//! )
//! .unwrap();
//! let space = explore(&model, &ExplorationLimits::default()).unwrap();
//! let mut checker = Checker::new(&model, &space, CheckOptions::default());
//! let f = parse_formula("<<a,b>> X K{b} sent", &model).unwrap();
//! assert!(checker.check(space.init, &f).unwrap());
//! ```

pub mod checker;
pub mod congruence;
pub mod epistemic;
pub mod explore;
pub mod fixtures;
pub mod formula;
pub mod model;
pub mod parse;
pub mod scc;
pub mod sos;
pub mod strategy;
pub mod syntax;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/processes.md")]
    mod processes {}
    #[doc = include_str!("../../../book/src/model-format.md")]
    mod model_format {}
    #[doc = include_str!("../../../book/src/exploration.md")]
    mod exploration {}
    #[doc = include_str!("../../../book/src/knowledge.md")]
    mod knowledge {}
    #[doc = include_str!("../../../book/src/strategies.md")]
    mod strategies {}
    #[doc = include_str!("../../../book/src/checking.md")]
    mod checking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/case-study.md")]
    mod case_study {}
}
