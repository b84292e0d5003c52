//! Surface grammars of the subsystem calculi.
//!
//! - λ:    `\x.t`, `t u`
//! - λJ:   `t(u, x.v)`
//! - λJm:  `t(u, l)` with `l ::= u::l | (x)v`
//! - λJms: `t l`     with `l ::= u::l | (x)v`

use super::lambda::LTerm;
use super::lj::{JArg, JTerm};
use super::ljm::{MArg, MCo, MTerm};
use super::ljms::{SCo, STerm};
use super::{Calculus, SpecTerm};
use crate::syntax::lexer::{Cursor, LexError, Tok};
use crate::syntax::ParseError;

type R<T> = Result<T, LexError>;

pub fn parse_spec(c: Calculus, src: &str) -> Result<SpecTerm, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = match c {
        Calculus::Lambda => SpecTerm::Lambda(lambda(&mut cur)?),
        Calculus::J => SpecTerm::J(lj(&mut cur)?),
        Calculus::Jm => SpecTerm::Jm(ljm(&mut cur)?),
        Calculus::Jms => SpecTerm::Jms(ljms(&mut cur)?),
        Calculus::Jmse => return Err(ParseError::Syntax(cur.unexpected("a subsystem calculus"))),
    };
    cur.finish()?;
    Ok(t)
}

fn binder(cur: &mut Cursor) -> R<Option<String>> {
    if cur.eat(&Tok::Backslash) {
        let x = cur.ident()?;
        cur.expect(&Tok::Dot)?;
        Ok(Some(x))
    } else {
        Ok(None)
    }
}

/// `(x)` not followed by `::` opens a selection.
fn at_selection(cur: &Cursor) -> bool {
    *cur.peek() == Tok::LParen
        && matches!(cur.peek_at(1), Tok::Ident(_))
        && *cur.peek_at(2) == Tok::RParen
        && *cur.peek_at(3) != Tok::ColonColon
}

fn lambda(cur: &mut Cursor) -> R<LTerm> {
    if let Some(x) = binder(cur)? {
        return Ok(LTerm::lam(&x, lambda(cur)?));
    }
    let mut t = lambda_atom(cur)?;
    while matches!(cur.peek(), Tok::Ident(_) | Tok::LParen | Tok::Backslash) {
        let a = if *cur.peek() == Tok::Backslash {
            lambda(cur)?
        } else {
            lambda_atom(cur)?
        };
        t = LTerm::app(t, a);
    }
    Ok(t)
}

fn lambda_atom(cur: &mut Cursor) -> R<LTerm> {
    match cur.peek().clone() {
        Tok::Ident(x) => {
            cur.bump();
            Ok(LTerm::Var(x))
        }
        Tok::LParen => {
            cur.bump();
            let t = lambda(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        _ => Err(cur.unexpected("a term")),
    }
}

fn lj(cur: &mut Cursor) -> R<JTerm> {
    if let Some(x) = binder(cur)? {
        return Ok(JTerm::lam(&x, lj(cur)?));
    }
    let mut t = match cur.peek().clone() {
        Tok::Ident(x) => {
            cur.bump();
            JTerm::Var(x)
        }
        Tok::LParen => {
            cur.bump();
            let t = lj(cur)?;
            cur.expect(&Tok::RParen)?;
            t
        }
        _ => return Err(cur.unexpected("a term")),
    };
    while cur.eat(&Tok::LParen) {
        let u = lj(cur)?;
        cur.expect(&Tok::Comma)?;
        let x = cur.ident()?;
        cur.expect(&Tok::Dot)?;
        let v = lj(cur)?;
        cur.expect(&Tok::RParen)?;
        t = JTerm::with(t, JArg::new(u, &x, v));
    }
    Ok(t)
}

fn ljm(cur: &mut Cursor) -> R<MTerm> {
    if let Some(x) = binder(cur)? {
        return Ok(MTerm::lam(&x, ljm(cur)?));
    }
    let mut t = match cur.peek().clone() {
        Tok::Ident(x) => {
            cur.bump();
            MTerm::Var(x)
        }
        Tok::LParen => {
            cur.bump();
            let t = ljm(cur)?;
            cur.expect(&Tok::RParen)?;
            t
        }
        _ => return Err(cur.unexpected("a term")),
    };
    while cur.eat(&Tok::LParen) {
        let u = ljm(cur)?;
        cur.expect(&Tok::Comma)?;
        let l = ljm_co(cur)?;
        cur.expect(&Tok::RParen)?;
        t = MTerm::with(t, MArg::new(u, l));
    }
    Ok(t)
}

fn ljm_co(cur: &mut Cursor) -> R<MCo> {
    if at_selection(cur) {
        cur.bump();
        let x = cur.ident()?;
        cur.bump();
        return Ok(MCo::sel(&x, ljm(cur)?));
    }
    let u = ljm(cur)?;
    cur.expect(&Tok::ColonColon)?;
    Ok(MCo::cons(u, ljm_co(cur)?))
}

fn ljms(cur: &mut Cursor) -> R<STerm> {
    if let Some(x) = binder(cur)? {
        return Ok(STerm::lam(&x, ljms(cur)?));
    }
    let t = ljms_atom(cur)?;
    if matches!(cur.peek(), Tok::RParen | Tok::Comma | Tok::Eof | Tok::ColonColon) {
        Ok(t)
    } else {
        Ok(STerm::cut(t, ljms_co(cur)?))
    }
}

fn ljms_atom(cur: &mut Cursor) -> R<STerm> {
    match cur.peek().clone() {
        Tok::Ident(x) => {
            cur.bump();
            Ok(STerm::Var(x))
        }
        Tok::LParen => {
            cur.bump();
            let t = ljms(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        _ => Err(cur.unexpected("a term")),
    }
}

fn ljms_co(cur: &mut Cursor) -> R<SCo> {
    if at_selection(cur) {
        cur.bump();
        let x = cur.ident()?;
        cur.bump();
        return Ok(SCo::sel(&x, ljms(cur)?));
    }
    let u = ljms_atom(cur)?;
    cur.expect(&Tok::ColonColon)?;
    Ok(SCo::cons(u, ljms_co(cur)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(c: Calculus, src: &str) {
        let t = parse_spec(c, src).unwrap();
        let again = parse_spec(c, &t.to_string()).unwrap();
        assert_eq!(t, again, "{src} printed as {t}");
    }

    #[test]
    fn grammars_round_trip() {
        round_trip(Calculus::Lambda, "(\\x.x x) (f a) b");
        round_trip(Calculus::J, "(\\x.x)(u, y.y(a, z.z))(w, q.q)");
        round_trip(Calculus::Jm, "t(u, u2::(x)v)");
        round_trip(Calculus::Jm, "(\\x.x)(u, (\\y.y)::(x)x(a, (z)z))");
        round_trip(Calculus::Jms, "t (x)v");
        round_trip(Calculus::Jms, "(t a::(y)y) (\\z.z)::(x)x b::(q)q");
    }

    #[test]
    fn shapes() {
        let t = parse_spec(Calculus::Jms, "t (x)v").unwrap();
        assert_eq!(t, SpecTerm::Jms(STerm::cut(STerm::var("t"), SCo::sel("x", STerm::var("v")))));
        let t = parse_spec(Calculus::Jm, "t(u, u2::(x)v)").unwrap();
        let want = MTerm::app(
            MTerm::var("t"),
            MTerm::var("u"),
            MCo::cons(MTerm::var("u2"), MCo::sel("x", MTerm::var("v"))),
        );
        assert_eq!(t, SpecTerm::Jm(want));
    }
}
