use std::collections::btree_map::Entry;

use super::lexer::{tokenize, Cursor, Tok};
use super::{ModelError, ParseError};
use crate::formula::PropId;
use crate::model::{DeltaEdge, EpistemicStateId, InitTerm, KEdge, MName, Mode, ModelDef, StateId};
use crate::syntax::{
    Action, AgentId, LabeledAction, LabeledProcessTerm, Name, Payload, ProcessTerm, Var, VisibleAct,
};

/// Parses and validates a model.
pub fn parse_model(src: &str) -> Result<ModelDef, ModelError> {
    Ok(parse_model_unvalidated(src)?.validate()?)
}

/// Parses a model without cross-reference checks. Send payloads are left
/// as [`Payload::Var`] until validation resolves them.
pub fn parse_model_unvalidated(src: &str) -> Result<ModelDef, ParseError> {
    let mut p = Parser::new(src)?;
    let mut m = ModelDef::default();
    while *p.c.peek() != Tok::Eof {
        p.statement(&mut m)?;
    }
    Ok(m)
}

/// Parses a single process term. Send payloads stay unresolved.
pub fn parse_process(src: &str) -> Result<ProcessTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.process()?;
    p.c.expect(&Tok::Eof)?;
    Ok(t)
}

/// Parses a single labeled process term. Send payloads stay unresolved.
pub fn parse_labeled_process(src: &str) -> Result<LabeledProcessTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.labeled()?;
    p.c.expect(&Tok::Eof)?;
    Ok(t)
}

struct Parser {
    c: Cursor,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Self {
            c: Cursor::new(tokenize(src, false)?),
        })
    }

    fn duplicate(&self, what: &str, name: &str, at: (usize, usize)) -> ParseError {
        ParseError {
            line: at.0,
            col: at.1,
            expected: format!("{what}, found `{name}` which is already defined"),
        }
    }

    fn statement(&mut self, m: &mut ModelDef) -> Result<(), ParseError> {
        let at = self.c.position();
        let kw = self.c.ident("a statement keyword")?;
        match kw.as_str() {
            "agents" => m.agents.extend(self.ident_list()?.into_iter().map(AgentId::from)),
            "values" => m.values.extend(self.ident_list()?.into_iter().map(Into::into)),
            "props" => m.props.extend(self.ident_list()?.into_iter().map(PropId::new)),
            "states" => m.states.extend(self.ident_list()?.into_iter().map(StateId::new)),
            "mode" => {
                m.mode = match self.c.ident("`explicit` or `derived`")?.as_str() {
                    "explicit" => Mode::Explicit,
                    "derived" => Mode::Derived,
                    _ => return Err(self.error_at(at, "`mode explicit;` or `mode derived;`")),
                };
            }
            "def" => {
                let at = self.c.position();
                let name = self.constant_name()?;
                self.c.expect(&Tok::Eq)?;
                let body = self.process()?;
                match m.equations.entry(Name::new(name.clone())) {
                    Entry::Vacant(e) => {
                        e.insert(body);
                    }
                    Entry::Occupied(_) => return Err(self.duplicate("a fresh constant", &name, at)),
                }
            }
            "system" => {
                if m.system.is_some() {
                    return Err(self.duplicate("a single system", "system", at));
                }
                self.c.expect(&Tok::Eq)?;
                m.system = Some(self.labeled()?);
            }
            "init" => m.init_state = Some(StateId::new(self.c.ident("a state")?)),
            "initM" => m.init_term = Some(InitTerm::Named(MName::new(self.c.ident("a term name")?))),
            "K" => {
                let from = StateId::new(self.c.ident("a state")?);
                let action = self.arrow_label()?;
                let to = StateId::new(self.c.ident("a state")?);
                m.k_relation.push(KEdge { from, action, to });
            }
            "delta" => {
                let from = MName::new(self.c.ident("a term name")?);
                let action = self.arrow_label()?;
                let to = MName::new(self.c.ident("a term name")?);
                m.delta.push(DeltaEdge { from, action, to });
            }
            "M" => {
                let at = self.c.position();
                let name = self.c.ident("a term name")?;
                self.c.expect(&Tok::Eq)?;
                let term = self.labeled()?;
                match m.explicit_terms.entry(MName::new(name.clone())) {
                    Entry::Vacant(e) => {
                        e.insert(term);
                    }
                    Entry::Occupied(_) => return Err(self.duplicate("a fresh term name", &name, at)),
                }
            }
            "h" => {
                let agent = AgentId::new(self.c.ident("an agent")?);
                self.c.expect(&Tok::Colon)?;
                while let Tok::Ident(_) = self.c.peek() {
                    let at = self.c.position();
                    let state = StateId::new(self.c.ident("a state")?);
                    self.c.expect(&Tok::Eq)?;
                    let es = EpistemicStateId::new(self.c.ident("an epistemic state")?);
                    let key = (agent.clone(), state.clone());
                    if m.h_map.insert(key, es).is_some() {
                        return Err(self.duplicate("a state without an entry", state.as_str(), at));
                    }
                    self.c.eat(&Tok::Comma);
                }
            }
            "T" => {
                let state = StateId::new(self.c.ident("a state")?);
                self.c.expect(&Tok::Colon)?;
                let props = self.ident_list()?;
                m.labeling
                    .entry(state)
                    .or_default()
                    .extend(props.into_iter().map(PropId::new));
            }
            _ => return Err(self.error_at(at, "a statement keyword")),
        }
        self.c.expect(&Tok::Semi)
    }

    fn error_at(&self, at: (usize, usize), expected: &str) -> ParseError {
        ParseError {
            line: at.0,
            col: at.1,
            expected: expected.to_owned(),
        }
    }

    /// Identifiers separated by optional commas, up to `;`.
    fn ident_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = Vec::new();
        loop {
            match self.c.peek().clone() {
                Tok::Ident(s) => {
                    self.c.bump();
                    out.push(s);
                }
                Tok::Zero => {
                    self.c.bump();
                    out.push("0".into());
                }
                Tok::Comma => {
                    self.c.bump();
                }
                _ => return Ok(out),
            }
        }
    }

    fn constant_name(&mut self) -> Result<String, ParseError> {
        match self.c.peek().clone() {
            Tok::Ident(s) if starts_upper(&s) => {
                self.c.bump();
                Ok(s)
            }
            _ => Err(self.c.error("a capitalized constant name")),
        }
    }

    /// `-label->`
    fn arrow_label(&mut self) -> Result<LabeledAction, ParseError> {
        self.c.expect(&Tok::Minus)?;
        let l = self.label()?;
        self.c.expect(&Tok::Arrow)?;
        Ok(l)
    }

    fn label(&mut self) -> Result<LabeledAction, ParseError> {
        if self.c.eat(&Tok::Quote) {
            let (channel, value) = self.channel_value()?;
            let agent = self.at_agent()?;
            return Ok(LabeledAction::Visible {
                act: VisibleAct::Send {
                    channel: channel.into(),
                    value: value.into(),
                },
                agent,
            });
        }
        if self.c.is_ident("tau") {
            self.c.bump();
            if self.c.eat(&Tok::LParen) {
                let sender = self.c.ident("the sending agent")?;
                self.c.expect(&Tok::Comma)?;
                let receiver = self.c.ident("the receiving agent")?;
                self.c.expect(&Tok::RParen)?;
                return Ok(LabeledAction::sync(&sender, &receiver));
            }
            let agent = self.at_agent()?;
            return Ok(LabeledAction::LocalTau { agent });
        }
        let (channel, value) = self.channel_value()?;
        let agent = self.at_agent()?;
        Ok(LabeledAction::Visible {
            act: VisibleAct::Receive {
                channel: channel.into(),
                value: value.into(),
            },
            agent,
        })
    }

    fn channel_value(&mut self) -> Result<(String, String), ParseError> {
        let channel = self.c.ident("a channel")?;
        self.c.expect(&Tok::Lt)?;
        let value = self.c.ident("a value")?;
        self.c.expect(&Tok::Gt)?;
        Ok((channel, value))
    }

    fn at_agent(&mut self) -> Result<AgentId, ParseError> {
        self.c.expect(&Tok::At)?;
        Ok(AgentId::new(self.c.ident("an agent")?))
    }

    fn labeled(&mut self) -> Result<LabeledProcessTerm, ParseError> {
        let mut acc = self.labeled_atom()?;
        while self.c.eat(&Tok::Bar) {
            acc = LabeledProcessTerm::par(acc, self.labeled_atom()?);
        }
        Ok(acc)
    }

    fn labeled_atom(&mut self) -> Result<LabeledProcessTerm, ParseError> {
        match self.c.peek() {
            Tok::LBrace => {
                self.c.bump();
                let p = self.process()?;
                self.c.expect(&Tok::RBrace)?;
                let agent = self.at_agent()?;
                Ok(LabeledProcessTerm::Agent(p, agent))
            }
            Tok::LParen => {
                self.c.bump();
                let m = self.labeled()?;
                self.c.expect(&Tok::RParen)?;
                Ok(m)
            }
            _ if self.c.is_ident("new") => {
                self.c.bump();
                let name = self.c.ident("a channel name")?;
                if !self.c.is_ident("in") {
                    return Err(self.c.error("`in`"));
                }
                self.c.bump();
                Ok(LabeledProcessTerm::restrict(name, self.labeled_atom()?))
            }
            _ => Err(self.c.error("`{`, `(` or `new`")),
        }
    }

    fn process(&mut self) -> Result<ProcessTerm, ParseError> {
        let mut acc = self.sum()?;
        while self.c.eat(&Tok::Bar) {
            acc = ProcessTerm::par(acc, self.sum()?);
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<ProcessTerm, ParseError> {
        let mut acc = self.prefixed()?;
        while self.c.eat(&Tok::Plus) {
            acc = ProcessTerm::sum(acc, self.prefixed()?);
        }
        Ok(acc)
    }

    fn prefixed(&mut self) -> Result<ProcessTerm, ParseError> {
        if let Some(act) = self.action()? {
            let cont = if self.c.eat(&Tok::Dot) {
                self.prefixed()?
            } else {
                ProcessTerm::Nil
            };
            return Ok(ProcessTerm::prefix(act, cont));
        }
        match self.c.peek().clone() {
            Tok::Zero => {
                self.c.bump();
                Ok(ProcessTerm::Nil)
            }
            Tok::LParen => {
                self.c.bump();
                let p = self.process()?;
                self.c.expect(&Tok::RParen)?;
                if self.c.eat(&Tok::Dot) {
                    let cont = self.prefixed()?;
                    return Ok(ProcessTerm::Seq(Box::new(p), Box::new(cont)));
                }
                Ok(p)
            }
            Tok::Ident(s) if s == "new" => {
                self.c.bump();
                let name = self.c.ident("a channel name")?;
                if !self.c.is_ident("in") {
                    return Err(self.c.error("`in`"));
                }
                self.c.bump();
                Ok(ProcessTerm::restrict(name, self.prefixed()?))
            }
            Tok::Ident(s) if starts_upper(&s) => {
                self.c.bump();
                Ok(ProcessTerm::constant(s))
            }
            _ => Err(self.c.error("a process")),
        }
    }

    /// `tau`, `'a<t>` or `a(x)`; `None` if the next tokens start no action.
    fn action(&mut self) -> Result<Option<Action>, ParseError> {
        if self.c.eat(&Tok::Quote) {
            let channel = self.c.ident("a channel")?;
            self.c.expect(&Tok::Lt)?;
            let payload = self.c.ident("a value or variable")?;
            self.c.expect(&Tok::Gt)?;
            return Ok(Some(Action::Send {
                channel: channel.into(),
                payload: Payload::Var(Var::new(payload)),
            }));
        }
        match self.c.peek().clone() {
            Tok::Ident(s) if s == "tau" => {
                self.c.bump();
                Ok(Some(Action::Tau))
            }
            Tok::Ident(s) if s != "new" && !starts_upper(&s) && *self.c.peek_at(1) == Tok::LParen => {
                self.c.bump();
                self.c.bump();
                let binder = self.c.ident("a variable")?;
                self.c.expect(&Tok::RParen)?;
                Ok(Some(Action::receive(s, binder)))
            }
            _ => Ok(None),
        }
    }
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}
