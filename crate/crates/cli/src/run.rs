//! The pipeline: read, parse, validate, explore, check, report.

use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use epc_core::checker::{CheckError, CheckOptions, Checker};
use epc_core::epistemic;
use epc_core::explore::{explore_from, initial_configuration, Configuration, ExplorationLimits, TermRef};
use epc_core::formula::{Coalition, Formula};
use epc_core::model::{MName, Mode, ModelDef, StateId};
use epc_core::parse::{parse_formula, parse_formulas, parse_model, ModelError};
use epc_core::syntax::AgentId;

use crate::report::Record;
use crate::{Args, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// Limits and other verification infrastructure errors.
    Infrastructure,
    /// Unreadable, malformed or invalid input.
    Input,
}

impl FailureKind {
    pub fn code(self) -> u8 {
        match self {
            FailureKind::Infrastructure => 1,
            FailureKind::Input => 2,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

fn input(message: impl Display) -> Failure {
    Failure {
        kind: FailureKind::Input,
        message: message.to_string(),
    }
}

fn infrastructure(message: impl Display) -> Failure {
    Failure {
        kind: FailureKind::Infrastructure,
        message: message.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<ModelDef, Failure> {
    let src = read(path)?;
    parse_model(&src).map_err(|e| match e {
        ModelError::Parse(p) => input(format!("{}:{p}", path.display())),
        ModelError::Invalid(v) => input(format!("{}: invalid model: {v}", path.display())),
    })
}

/// Each `-f` argument names a formula file if one exists at that path, and
/// is a formula otherwise.
fn load_formulas(args: &[String], model: &ModelDef) -> Result<Vec<Formula>, Failure> {
    let mut out = Vec::new();
    for arg in args {
        let path = Path::new(arg);
        if path.is_file() {
            let src = read(path)?;
            let fs = parse_formulas(&src, model).map_err(|e| input(format!("{}:{e}", path.display())))?;
            out.extend(fs);
        } else {
            let f = parse_formula(arg, model).map_err(|e| input(format!("formula `{arg}`:{e}")))?;
            out.push(f);
        }
    }
    Ok(out)
}

fn start_configuration(model: &ModelDef, init: Option<&str>) -> Result<Configuration, Failure> {
    let mut start = initial_configuration(model);
    let Some(spec) = init else {
        return Ok(start);
    };
    let (state, term) = match spec.split_once(':') {
        Some((s, t)) => (s, Some(t)),
        None => (spec, None),
    };
    let state = StateId::from(state);
    if !model.has_state(&state) {
        return Err(input(format!("--init: unknown state `{state}`")));
    }
    start.state = state;
    if let Some(t) = term {
        if model.mode != Mode::Explicit {
            return Err(input(
                "--init: a term name is only accepted for explicit-mode models",
            ));
        }
        let name = MName::from(t);
        if !model.explicit_terms.contains_key(&name) {
            return Err(input(format!("--init: unknown term `{name}`")));
        }
        start.term = TermRef::Named(name);
    }
    Ok(start)
}

fn parse_coalition(list: &str, model: &ModelDef) -> Result<Coalition, Failure> {
    let mut agents = Vec::new();
    for a in list.split(',').map(str::trim).filter(|a| !a.is_empty()) {
        let id = AgentId::from(a);
        if !model.has_agent(&id) {
            return Err(input(format!("--dump-epistemic: unknown agent `{a}`")));
        }
        agents.push(id);
    }
    Coalition::new(agents).ok_or_else(|| input("--dump-epistemic: empty coalition"))
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::TooManyStrategies { .. }
        | CheckError::ThreadPool(_)
        | CheckError::UnknownConfiguration(_) => infrastructure(e),
        CheckError::UnknownAgent(_) | CheckError::UnknownProp(_) => input(e),
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    infrastructure(format!("writing output: {e}"))
}

pub fn run(args: &Args, out: &mut impl Write) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let formulas = load_formulas(&args.formulas, &model)?;
    let dump_coalition = args
        .dump_epistemic
        .as_deref()
        .map(|list| parse_coalition(list, &model))
        .transpose()?;
    if formulas.is_empty() && !args.dump_graph && dump_coalition.is_none() {
        return Err(input("nothing to do: give a formula with -f or a dump flag"));
    }
    if args.max_configs == 0 || args.jobs == 0 {
        return Err(input("--max-configs and --jobs must be positive"));
    }
    let start = start_configuration(&model, args.init.as_deref())?;
    let limits = ExplorationLimits {
        max_configs: args.max_configs,
        ..ExplorationLimits::default()
    };
    let space = explore_from(&model, start, &limits).map_err(infrastructure)?;

    if args.dump_graph {
        write!(out, "{}", space.dump()).map_err(io_failure)?;
    }
    if let Some(a) = &dump_coalition {
        write!(out, "{}", epistemic::dump(&model, a, &space)).map_err(io_failure)?;
    }
    let options = CheckOptions {
        max_strategies: args.max_strategies,
        jobs: args.jobs,
        ..CheckOptions::default()
    };
    let mut checker = Checker::new(&model, &space, options);
    for f in &formulas {
        let v = checker.verdict(space.init, f).map_err(check_failure)?;
        let record = Record::new(f, &space, space.init, &v);
        match args.format {
            Format::Json => writeln!(out, "{}", record.json()),
            Format::Text => write!(out, "{}", record.text()),
        }
        .map_err(io_failure)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use epc_core::fixtures;

    #[test]
    fn init_state_keeps_the_declared_term() {
        let m = fixtures::demo3();
        let c = start_configuration(&m, Some("s5")).unwrap();
        assert_eq!(c.state.as_str(), "s5");
        assert_eq!(c.term, initial_configuration(&m).term);
    }

    #[test]
    fn init_term_needs_explicit_mode() {
        let uav = fixtures::uav();
        let c = start_configuration(&uav, Some("s2:M2")).unwrap();
        assert_eq!(c.to_string(), "(s2, M2)");
        assert!(start_configuration(&uav, Some("s2:M7")).is_err());
        let demo = fixtures::demo3();
        assert_eq!(
            start_configuration(&demo, Some("s0:M0")).unwrap_err().kind,
            FailureKind::Input
        );
    }

    #[test]
    fn coalition_lists() {
        let uav = fixtures::uav();
        assert_eq!(
            parse_coalition("UAV1, GCS", &uav).unwrap().to_string(),
            "GCS,UAV1"
        );
        assert!(parse_coalition("", &uav).is_err());
        assert!(parse_coalition("UAV2", &uav).is_err());
    }

    #[test]
    fn strategy_cap_is_an_infrastructure_failure() {
        let e = CheckError::TooManyStrategies {
            coalition: "A".into(),
            count: 2,
            max: 1,
        };
        assert_eq!(check_failure(e).kind.code(), 1);
        assert_eq!(check_failure(CheckError::UnknownProp("p".into())).kind.code(), 2);
    }
}
