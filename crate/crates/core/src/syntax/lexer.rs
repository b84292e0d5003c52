//! Tokeniser shared by every surface grammar in the crate.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Backslash,
    BigLambda,
    Dot,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Nil,
    ColonColon,
    Lt,
    Gt,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "identifier `{x}`"),
            Tok::Backslash => "`\\`",
            Tok::BigLambda => "`/\\`",
            Tok::Dot => "`.`",
            Tok::Comma => "`,`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Nil => "`[]`",
            Tok::ColonColon => "`::`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Arrow => "`->`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{msg} at offset {pos}")]
pub struct LexError {
    pub pos: usize,
    pub msg: String,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|p| p.1);
        let mut push = |tok: Tok, width: usize, i: &mut usize| {
            out.push(Spanned { tok, pos });
            *i += width;
        };
        match c {
            c if c.is_whitespace() => i += 1,
            '\\' | 'λ' => push(Tok::Backslash, 1, &mut i),
            'Λ' => push(Tok::BigLambda, 1, &mut i),
            '/' if next == Some('\\') => push(Tok::BigLambda, 2, &mut i),
            '.' => push(Tok::Dot, 1, &mut i),
            ',' => push(Tok::Comma, 1, &mut i),
            '(' => push(Tok::LParen, 1, &mut i),
            ')' => push(Tok::RParen, 1, &mut i),
            '{' => push(Tok::LBrace, 1, &mut i),
            '}' => push(Tok::RBrace, 1, &mut i),
            '[' if next == Some(']') => push(Tok::Nil, 2, &mut i),
            ':' if next == Some(':') => push(Tok::ColonColon, 2, &mut i),
            '<' => push(Tok::Lt, 1, &mut i),
            '>' => push(Tok::Gt, 1, &mut i),
            '-' if next == Some('>') => push(Tok::Arrow, 2, &mut i),
            '⊃' | '→' => push(Tok::Arrow, 1, &mut i),
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                let s: String = chars[i..j].iter().map(|p| p.1).collect();
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    pos,
                });
                i = j;
            }
            _ => {
                return Err(LexError {
                    pos,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        pos: src.len(),
    });
    Ok(out)
}

/// Cursor over a token vector with the usual peek/expect helpers.
pub struct Cursor {
    toks: Vec<Spanned>,
    i: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Cursor, LexError> {
        Ok(Cursor {
            toks: lex(src)?,
            i: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let j = (self.i + k).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    pub fn pos(&self) -> usize {
        self.toks[self.i].pos
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
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

    pub fn expect(&mut self, t: &Tok) -> Result<(), LexError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    pub fn ident(&mut self) -> Result<String, LexError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(x)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub fn unexpected(&self, wanted: &str) -> LexError {
        LexError {
            pos: self.pos(),
            msg: format!("expected {wanted}, found {}", self.peek()),
        }
    }

    pub fn finish(&self) -> Result<(), LexError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_punctuation() {
        let toks: Vec<Tok> = lex("/\\X.{x <X->Bot>::[]}")
            .unwrap()
            .into_iter()
            .map(|s| s.tok)
            .collect();
        assert_eq!(toks[0], Tok::BigLambda);
        assert!(toks.contains(&Tok::Arrow));
        assert!(toks.contains(&Tok::Nil));
        assert_eq!(*toks.last().unwrap(), Tok::Eof);
    }
}
