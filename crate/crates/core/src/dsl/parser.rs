use super::lexer::{Tok, Token};
use super::{Diagnostic, Pos};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Scalar, Pos),
    Var(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// `classify x -> …` names the class of `x ⊗ 1_*`.
    Generator(String),
    /// `classify "…" -> …` names a class verbatim.
    Named(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Dga(String),
    Gen(String, i32),
    D(String, Expr),
    Symplectic(String, Expr),
    Torus(usize),
    BaseS2,
    Basis(Vec<String>),
    Classify(Target, Expr),
}

pub const STATEMENT_KEYWORDS: [&str; 8] = [
    "dga",
    "gen",
    "d",
    "symplectic",
    "torus",
    "classify",
    "base",
    "basis",
];

const EXPR_START: [&str; 4] = ["number", "identifier", "`(`", "`-`"];

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

/// Parses a token stream into positioned statements.
pub fn parse_statements(tokens: Vec<Token>) -> Result<Vec<(Pos, Stmt)>, Diagnostic> {
    let mut p = Parser { tokens, at: 0 };
    let mut out = Vec::new();
    loop {
        while p.peek() == &Tok::Sep {
            p.at += 1;
        }
        if p.peek() == &Tok::Eof {
            return Ok(out);
        }
        let pos = p.pos();
        let stmt = p.statement()?;
        match p.peek() {
            Tok::Sep | Tok::Eof => {}
            _ => return Err(p.unexpected(&["end of statement"])),
        }
        out.push((pos, stmt));
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn next(&mut self) -> Tok {
        let t = self.tokens[self.at].tok.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        Diagnostic::new(
            self.pos(),
            format!("unexpected {}", self.peek()),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn ident(&mut self) -> Result<String, Diagnostic> {
        match self.peek() {
            Tok::Ident(_) => match self.next() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), Diagnostic> {
        if self.peek() == &tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&[&tok.to_string()]))
        }
    }

    fn integer(&mut self) -> Result<(i64, Pos), Diagnostic> {
        let pos = self.pos();
        let negative = self.peek() == &Tok::Minus;
        if negative {
            self.next();
        }
        match self.peek().clone() {
            Tok::Number(s) if !s.contains('/') => {
                self.next();
                let v: i64 = s.parse().map_err(|_| {
                    Diagnostic::new(pos, format!("integer `{s}` is too large"), Vec::new())
                })?;
                Ok((if negative { -v } else { v }, pos))
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn statement(&mut self) -> Result<Stmt, Diagnostic> {
        let head = match self.peek() {
            Tok::Ident(s) if STATEMENT_KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.unexpected(&STATEMENT_KEYWORDS)),
        };
        self.next();
        Ok(match head.as_str() {
            "dga" => Stmt::Dga(self.ident()?),
            "gen" => {
                let name = self.ident()?;
                let (d, pos) = self.integer()?;
                let d = i32::try_from(d)
                    .map_err(|_| Diagnostic::new(pos, "degree out of range", Vec::new()))?;
                Stmt::Gen(name, d)
            }
            "d" | "symplectic" => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let e = self.expr()?;
                if head == "d" {
                    Stmt::D(name, e)
                } else {
                    Stmt::Symplectic(name, e)
                }
            }
            "torus" => {
                let (k, pos) = self.integer()?;
                let k = usize::try_from(k).map_err(|_| {
                    Diagnostic::new(pos, "torus rank must be non-negative", Vec::new())
                })?;
                Stmt::Torus(k)
            }
            "base" => {
                let pos = self.pos();
                let name = self.ident()?;
                if name != "S2" {
                    return Err(Diagnostic::new(
                        pos,
                        format!("unknown base `{name}`"),
                        vec!["`S2`".into()],
                    ));
                }
                Stmt::BaseS2
            }
            "basis" => {
                let mut names = vec![self.ident()?];
                while let Tok::Ident(_) = self.peek() {
                    names.push(self.ident()?);
                }
                Stmt::Basis(names)
            }
            "classify" => {
                let target = match self.next() {
                    Tok::Ident(s) => Target::Generator(s),
                    Tok::Str(s) => Target::Named(s),
                    _ => {
                        self.at -= 1;
                        return Err(self.unexpected(&["identifier", "string"]));
                    }
                };
                self.expect(Tok::Arrow)?;
                Stmt::Classify(target, self.expr()?)
            }
            _ => unreachable!(),
        })
    }

    // expr := ['-'] term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut e = if self.peek() == &Tok::Minus {
            self.next();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    e = Expr::Add(Box::new(e), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    e = Expr::Sub(Box::new(e), Box::new(self.term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut e = self.factor()?;
        while self.peek() == &Tok::Star {
            self.next();
            e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    // factor := atom ['^' integer]
    fn factor(&mut self) -> Result<Expr, Diagnostic> {
        let a = self.atom()?;
        if self.peek() != &Tok::Caret {
            return Ok(a);
        }
        self.next();
        let (n, pos) = self.integer()?;
        let n = u32::try_from(n).map_err(|_| {
            Diagnostic::new(pos, "exponent must be a non-negative integer", Vec::new())
        })?;
        Ok(Expr::Pow(Box::new(a), n))
    }

    // atom := number | identifier | '(' expr ')'
    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(s) => {
                self.next();
                let v = scalar::parse(&s).ok_or_else(|| {
                    Diagnostic::new(pos, format!("invalid number `{s}`"), Vec::new())
                })?;
                Ok(Expr::Num(v, pos))
            }
            Tok::Ident(s) => {
                self.next();
                Ok(Expr::Var(s, pos))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected(&EXPR_START)),
        }
    }
}
