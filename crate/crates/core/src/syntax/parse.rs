use super::lexer::{Cursor, LexError, Tok};
use super::{Class, Command, CoTerm, Expr, Level, Term};
use crate::types::Type;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(#[from] LexError),
    #[error("second-order construct at offset {pos} not allowed at the propositional level")]
    Level { pos: usize },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax(e) => e.pos,
            ParseError::Level { pos } => *pos,
        }
    }
}

struct P {
    cur: Cursor,
    level: Level,
}

pub fn parse(src: &str, class: Class, level: Level) -> Result<Expr, ParseError> {
    let mut p = P {
        cur: Cursor::new(src)?,
        level,
    };
    let e = match class {
        Class::Term => Expr::Term(p.term()?),
        Class::CoTerm => Expr::CoTerm(p.coterm()?),
        Class::Command => Expr::Command(p.command()?),
    };
    p.cur.finish()?;
    Ok(e)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse(src, Class::Term, Level::Second).map(|e| e.into_term().unwrap())
}

pub fn parse_coterm(src: &str) -> Result<CoTerm, ParseError> {
    match parse(src, Class::CoTerm, Level::Second)? {
        Expr::CoTerm(l) => Ok(l),
        _ => unreachable!(),
    }
}

pub fn parse_command(src: &str) -> Result<Command, ParseError> {
    match parse(src, Class::Command, Level::Second)? {
        Expr::Command(c) => Ok(c),
        _ => unreachable!(),
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = type_expr(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

/// `TypeExpr := "forall" X "." TypeExpr | TAtom ("->" TypeExpr)?`
pub(crate) fn type_expr(cur: &mut Cursor) -> Result<Type, LexError> {
    if let Tok::Ident(k) = cur.peek() {
        if k == "forall" {
            cur.bump();
            let x = cur.ident()?;
            cur.expect(&Tok::Dot)?;
            let body = type_expr(cur)?;
            return Ok(Type::Forall(x, Box::new(body)));
        }
    }
    let a = type_atom(cur)?;
    if cur.eat(&Tok::Arrow) {
        let b = type_expr(cur)?;
        Ok(Type::arrow(a, b))
    } else {
        Ok(a)
    }
}

fn type_atom(cur: &mut Cursor) -> Result<Type, LexError> {
    match cur.peek().clone() {
        Tok::Ident(x) if x == "Bot" => {
            cur.bump();
            Ok(Type::Bot)
        }
        Tok::Ident(x) if x != "forall" => {
            cur.bump();
            Ok(Type::Var(x))
        }
        Tok::LParen => {
            cur.bump();
            let t = type_expr(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        _ => Err(cur.unexpected("a type")),
    }
}

impl P {
    fn second_order(&self) -> Result<(), ParseError> {
        match self.level {
            Level::Second => Ok(()),
            Level::Prop => Err(ParseError::Level { pos: self.cur.pos() }),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.cur.peek().clone() {
            Tok::Backslash => {
                self.cur.bump();
                let x = self.cur.ident()?;
                self.cur.expect(&Tok::Dot)?;
                Ok(Term::Lam(x, Box::new(self.term()?)))
            }
            Tok::BigLambda => {
                self.second_order()?;
                self.cur.bump();
                let x = self.cur.ident()?;
                self.cur.expect(&Tok::Dot)?;
                Ok(Term::TyLam(x, Box::new(self.term()?)))
            }
            Tok::LBrace => {
                self.cur.bump();
                let c = self.command()?;
                self.cur.expect(&Tok::RBrace)?;
                Ok(Term::Coerce(Box::new(c)))
            }
            Tok::Ident(x) => {
                self.cur.bump();
                Ok(Term::Var(x))
            }
            Tok::LParen => {
                self.cur.bump();
                let t = self.term()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.cur.unexpected("a term").into()),
        }
    }

    fn coterm(&mut self) -> Result<CoTerm, ParseError> {
        match self.cur.peek().clone() {
            Tok::Nil => {
                self.cur.bump();
                Ok(CoTerm::Nil)
            }
            // `(x)` not followed by `::` is a selection.
            Tok::LParen
                if matches!(self.cur.peek_at(1), Tok::Ident(_))
                    && *self.cur.peek_at(2) == Tok::RParen
                    && *self.cur.peek_at(3) != Tok::ColonColon =>
            {
                self.cur.bump();
                let x = self.cur.ident()?;
                self.cur.bump();
                let c = self.command()?;
                Ok(CoTerm::Sel(x, Box::new(c)))
            }
            Tok::Lt => {
                self.second_order()?;
                self.cur.bump();
                let b = type_expr(&mut self.cur)?;
                self.cur.expect(&Tok::Gt)?;
                self.cur.expect(&Tok::ColonColon)?;
                Ok(CoTerm::TyCons(b, Box::new(self.coterm()?)))
            }
            _ => {
                let u = self.term()?;
                self.cur.expect(&Tok::ColonColon)?;
                Ok(CoTerm::Cons(Box::new(u), Box::new(self.coterm()?)))
            }
        }
    }

    fn command(&mut self) -> Result<Command, ParseError> {
        let head = match self.cur.peek().clone() {
            Tok::Ident(x) => {
                self.cur.bump();
                Term::Var(x)
            }
            Tok::LBrace => {
                self.cur.bump();
                let c = self.command()?;
                self.cur.expect(&Tok::RBrace)?;
                Term::Coerce(Box::new(c))
            }
            Tok::LParen => {
                self.cur.bump();
                let t = self.term()?;
                self.cur.expect(&Tok::RParen)?;
                t
            }
            _ => return Err(self.cur.unexpected("a command head").into()),
        };
        let tail = self.coterm()?;
        Ok(Command::new(head, tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_term("\\x.x").unwrap(), Term::lam("x", Term::var("x")));
        let want = Term::coerce(Command::new(
            Term::lam("x", Term::var("x")),
            CoTerm::cons(Term::var("y"), CoTerm::Nil),
        ));
        assert_eq!(parse_term("{(\\x.x) y::[]}").unwrap(), want);
        assert_eq!(
            parse_coterm("(x) x []").unwrap(),
            CoTerm::sel("x", Command::new(Term::var("x"), CoTerm::Nil))
        );
    }

    #[test]
    fn parenthesised_argument_before_cons() {
        let l = parse_coterm("(x)::[]").unwrap();
        assert_eq!(l, CoTerm::cons(Term::var("x"), CoTerm::Nil));
    }

    #[test]
    fn level_errors() {
        let e = parse("/\\X.x", Class::Term, Level::Prop).unwrap_err();
        assert!(matches!(e, ParseError::Level { pos: 0 }));
        assert!(parse("{f <X>::[]}", Class::Term, Level::Prop).is_err());
        assert!(parse("{f <X>::[]}", Class::Term, Level::Second).is_ok());
    }

    #[test]
    fn types() {
        let t = parse_type("forall X. X->Bot").unwrap();
        assert_eq!(t, Type::forall("X", Type::arrow(Type::var("X"), Type::Bot)));
        let a = parse_type("(A->B)->A").unwrap();
        assert_eq!(a.to_string(), "(A->B)->A");
    }

    #[test]
    fn syntax_error_is_positioned() {
        let e = parse_term("\\x.").unwrap_err();
        assert_eq!(e.pos(), 3);
    }
}
