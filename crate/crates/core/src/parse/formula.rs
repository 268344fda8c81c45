use super::lexer::{tokenize, Cursor, Tok};
use super::ParseError;
use crate::formula::{Coalition, Formula, PropId};
use crate::model::ModelDef;
use crate::syntax::AgentId;

/// Parses one formula against the agents and propositions of `model`.
///
/// `true` and `false` expand to `p \/ !p` and its negation, where `p` is the
/// first declared proposition.
pub fn parse_formula(src: &str, model: &ModelDef) -> Result<Formula, ParseError> {
    let mut p = FormulaParser {
        c: Cursor::new(tokenize(src, true)?),
        model,
    };
    let f = p.implication()?;
    p.c.eat(&Tok::Semi);
    p.c.expect(&Tok::Eof)?;
    Ok(f)
}

/// One formula per non-blank line; `#` starts a comment.
pub fn parse_formulas(src: &str, model: &ModelDef) -> Result<Vec<Formula>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let f = parse_formula(body, model).map_err(|mut e| {
            e.line += i;
            e
        })?;
        out.push(f);
    }
    Ok(out)
}

struct FormulaParser<'m> {
    c: Cursor,
    model: &'m ModelDef,
}

impl FormulaParser<'_> {
    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.c.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.c.eat(&Tok::OrOp) || self.c.eat(&Tok::Bar) {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.c.eat(&Tok::AndOp) || self.c.eat(&Tok::Amp) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.c.peek().clone() {
            Tok::Bang | Tok::Tilde => {
                self.c.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.c.bump();
                let f = self.implication()?;
                self.c.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::LtLt => {
                self.c.bump();
                let a = self.coalition(&Tok::GtGt)?;
                self.strategic(a)
            }
            Tok::Ident(w) if *self.c.peek_at(1) == Tok::LBrace && w.len() == 1 => {
                self.c.bump();
                self.c.bump();
                match w.as_str() {
                    "K" => {
                        let agent = self.agent()?;
                        self.c.expect(&Tok::RBrace)?;
                        Ok(Formula::Know(agent, Box::new(self.unary()?)))
                    }
                    "E" | "D" | "C" => {
                        let a = self.coalition(&Tok::RBrace)?;
                        let f = Box::new(self.unary()?);
                        Ok(match w.as_str() {
                            "E" => Formula::Every(a, f),
                            "D" => Formula::Dist(a, f),
                            _ => Formula::Common(a, f),
                        })
                    }
                    _ => Err(self.c.error("`K`, `E`, `D` or `C` before `{`")),
                }
            }
            Tok::Ident(w) if w == "true" || w == "false" => {
                self.c.bump();
                let p = self
                    .model
                    .props
                    .first()
                    .ok_or_else(|| self.c.error("a model with at least one proposition"))?;
                let t = Formula::or(Formula::Prop(p.clone()), Formula::not(Formula::Prop(p.clone())));
                Ok(if w == "true" { t } else { Formula::not(t) })
            }
            Tok::Ident(w) => {
                let p = PropId::new(w);
                if !self.model.has_prop(&p) {
                    return Err(self.c.error("a declared proposition"));
                }
                self.c.bump();
                Ok(Formula::Prop(p))
            }
            _ => Err(self.c.error("a formula")),
        }
    }

    fn strategic(&mut self, a: Coalition) -> Result<Formula, ParseError> {
        if self.c.eat(&Tok::LParen) {
            let lhs = self.implication()?;
            if !self.c.is_ident("U") {
                return Err(self.c.error("`U`"));
            }
            self.c.bump();
            let rhs = self.implication()?;
            self.c.expect(&Tok::RParen)?;
            return Ok(Formula::CoalUntil(a, Box::new(lhs), Box::new(rhs)));
        }
        let op = match self.c.peek() {
            Tok::Ident(w) if matches!(w.as_str(), "X" | "G" | "F") => w.clone(),
            _ => return Err(self.c.error("`X`, `G`, `F` or `(`")),
        };
        self.c.bump();
        let f = Box::new(self.unary()?);
        Ok(match op.as_str() {
            "X" => Formula::CoalNext(a, f),
            "G" => Formula::CoalGlobally(a, f),
            _ => Formula::CoalFinally(a, f),
        })
    }

    fn agent(&mut self) -> Result<AgentId, ParseError> {
        match self.c.peek().clone() {
            Tok::Ident(w) if self.model.has_agent(&AgentId::new(w.as_str())) => {
                self.c.bump();
                Ok(AgentId::new(w))
            }
            _ => Err(self.c.error("a declared agent")),
        }
    }

    /// Comma-separated agents up to `close`.
    fn coalition(&mut self, close: &Tok) -> Result<Coalition, ParseError> {
        let mut agents = Vec::new();
        while !self.c.eat(close) {
            agents.push(self.agent()?);
            if !self.c.eat(&Tok::Comma) {
                self.c.expect(close)?;
                break;
            }
        }
        Coalition::new(agents).ok_or_else(|| self.c.error("a non-empty coalition"))
    }
}
