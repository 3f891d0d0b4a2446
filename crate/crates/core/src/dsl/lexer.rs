use std::fmt;

use super::{Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// An integer or `p/q` literal, as written.
    Number(String),
    Str(String),
    Plus,
    Minus,
    Star,
    Caret,
    Eq,
    Arrow,
    LParen,
    RParen,
    /// Newline or `;`.
    Sep,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Sep => f.write_str("end of statement"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits `text` into tokens. `#` starts a comment running to the end of
/// the line.
pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            '\n' | ';' => {
                bump(&mut chars);
                Tok::Sep
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '+' | '*' | '^' | '=' | '(' | ')' => {
                bump(&mut chars);
                match c {
                    '+' => Tok::Plus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '=' => Tok::Eq,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                }
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        Some('"') => break,
                        Some('\n') | None => {
                            return Err(Diagnostic::new(
                                pos,
                                "unterminated string",
                                vec!["`\"`".into()],
                            ));
                        }
                        Some(c) => s.push(c),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars).unwrap());
                }
                if chars.peek() == Some(&'/') {
                    s.push(bump(&mut chars).unwrap());
                    let before = s.len();
                    while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        s.push(bump(&mut chars).unwrap());
                    }
                    if s.len() == before {
                        return Err(Diagnostic::new(
                            pos,
                            "malformed rational literal",
                            vec!["digits".into()],
                        ));
                    }
                }
                Tok::Number(s)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|&c| c.is_alphanumeric() || c == '_')
                {
                    s.push(bump(&mut chars).unwrap());
                }
                Tok::Ident(s)
            }
            other => {
                return Err(Diagnostic::new(
                    pos,
                    format!("unexpected character `{other}`"),
                    Vec::new(),
                ));
            }
        };
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, column },
    });
    Ok(out)
}
