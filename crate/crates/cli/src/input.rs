use std::io::Read;

use ljmse_core::spectrum::{parse_spec, Calculus, SpecTerm};
use ljmse_core::syntax::{parse, parse_type, Class, Expr, Level, ParseError};
use ljmse_core::types::Ctx;

use crate::args::InputArgs;
use crate::error::CliError;

/// A parsed input: λJmse syntax or one of the subsystem calculi.
#[derive(Debug)]
pub enum Source {
    Ljmse(Expr),
    Spec(SpecTerm),
}

pub fn read_text(args: &InputArgs) -> Result<String, CliError> {
    if let Some(e) = &args.expr {
        return Ok(e.clone());
    }
    if let Some(p) = &args.file {
        return std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {}: {e}", p.display())));
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| CliError::Io(format!("cannot read stdin: {e}")))?;
    Ok(s)
}

/// Parse `src`; without an explicit class, the first of term, command and
/// co-term that parses wins, and a total failure reports the error that got
/// furthest into the input.
pub fn parse_source(src: &str, calculus: Calculus, level: Level, class: Option<Class>) -> Result<Source, CliError> {
    let src = src.trim();
    if calculus != Calculus::Jmse {
        return Ok(Source::Spec(parse_spec(calculus, src)?));
    }
    if let Some(c) = class {
        return Ok(Source::Ljmse(parse(src, c, level)?));
    }
    let mut best: Option<ParseError> = None;
    for c in [Class::Term, Class::Command, Class::CoTerm] {
        match parse(src, c, level) {
            Ok(e) => return Ok(Source::Ljmse(e)),
            Err(e) if best.as_ref().is_none_or(|b| e.pos() > b.pos()) => best = Some(e),
            Err(_) => {}
        }
    }
    Err(best.expect("three attempts were made").into())
}

/// `x:A, f:A->B`; an empty string is the empty context.
pub fn parse_ctx(s: &str) -> Result<Ctx, CliError> {
    let mut ctx = Ctx::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (x, a) = item
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("context entry `{item}` is not of the form x:A")))?;
        ctx.insert(x.trim().to_string(), parse_type(a.trim())?);
    }
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ljmse_core::types::Type;

    #[test]
    fn class_is_detected() {
        let go = |s| match parse_source(s, Calculus::Jmse, Level::Prop, None).unwrap() {
            Source::Ljmse(e) => e.class(),
            Source::Spec(_) => unreachable!(),
        };
        assert_eq!(go("\\x.x"), Class::Term);
        assert_eq!(go("x y::[]"), Class::Command);
        assert_eq!(go("y::[]"), Class::CoTerm);
    }

    #[test]
    fn spectrum_inputs_use_their_grammar() {
        let s = parse_source("x(y, z.z)", Calculus::J, Level::Prop, None).unwrap();
        assert!(matches!(s, Source::Spec(t) if t.calculus() == Calculus::J));
        assert!(parse_source("x(y, z.z)", Calculus::Jmse, Level::Prop, None).is_err());
    }

    #[test]
    fn contexts() {
        let ctx = parse_ctx("x:A, f : A -> B").unwrap();
        assert_eq!(ctx["x"], Type::var("A"));
        assert_eq!(ctx["f"], Type::arrow(Type::var("A"), Type::var("B")));
        assert!(parse_ctx("").unwrap().is_empty());
        assert!(parse_ctx("x").is_err());
    }
}
