use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Zero,
    Semi,
    Comma,
    Colon,
    Dot,
    Eq,
    Quote,
    Lt,
    Gt,
    LtLt,
    GtGt,
    At,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Bar,
    Plus,
    Minus,
    Arrow,
    Bang,
    Tilde,
    Amp,
    /// `\/`
    OrOp,
    /// `/\`
    AndOp,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Zero => "`0`",
            Tok::Semi => "`;`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::Dot => "`.`",
            Tok::Eq => "`=`",
            Tok::Quote => "`'`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::LtLt => "`<<`",
            Tok::GtGt => "`>>`",
            Tok::At => "`@`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Bar => "`|`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Arrow => "`->`",
            Tok::Bang => "`!`",
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::OrOp => "`\\/`",
            Tok::AndOp => "`/\\`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// `<<` and `>>` are only produced when `angle_pairs` is set (formula
/// mode); the model language needs `<t>>` style sequences to stay split.
pub(crate) fn tokenize(src: &str, angle_pairs: bool) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let tok = match two.as_str() {
            "->" => Some(Tok::Arrow),
            "\\/" => Some(Tok::OrOp),
            "/\\" => Some(Tok::AndOp),
            "<<" if angle_pairs => Some(Tok::LtLt),
            ">>" if angle_pairs => Some(Tok::GtGt),
            _ => None,
        };
        if let Some(tok) = tok {
            out.push(Spanned {
                tok,
                line: start_line,
                col: start_col,
            });
            i += 2;
            col += 2;
            continue;
        }
        let tok = match c {
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '=' => Tok::Eq,
            '\'' => Tok::Quote,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '@' => Tok::At,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '|' => Tok::Bar,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '!' => Tok::Bang,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '0' if !chars
                .get(i + 1)
                .is_some_and(|d| d.is_ascii_alphanumeric() || *d == '_') =>
            {
                Tok::Zero
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Ident(word),
                    line: start_line,
                    col: start_col,
                });
                continue;
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    expected: format!("a token, found character `{other}`"),
                })
            }
        };
        out.push(Spanned {
            tok,
            line: start_line,
            col: start_col,
        });
        i += 1;
        col += 1;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Spanned>) -> Self {
        Self { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    pub fn error(&self, expected: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            expected: format!("{}, found {}", expected.into(), s.tok),
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(t.to_string()))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }

    pub fn position(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }
}
