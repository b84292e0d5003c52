//! Tagged-object JSON encoding of expressions.

use serde_json::{json, Value};

use super::{parse_type, Command, CoTerm, Expr, Term};

pub fn term_to_json(t: &Term) -> Value {
    match t {
        Term::Var(x) => json!({"k": "var", "x": x}),
        Term::Lam(x, b) => json!({"k": "lam", "x": x, "body": term_to_json(b)}),
        Term::Coerce(c) => json!({"k": "coerce", "cmd": command_to_json(c)}),
        Term::TyLam(x, b) => json!({"k": "tylam", "x": x, "body": term_to_json(b)}),
    }
}

pub fn coterm_to_json(l: &CoTerm) -> Value {
    match l {
        CoTerm::Nil => json!({"k": "nil"}),
        CoTerm::Cons(u, r) => {
            json!({"k": "cons", "head": term_to_json(u), "tail": coterm_to_json(r)})
        }
        CoTerm::TyCons(b, r) => {
            json!({"k": "tycons", "ty": b.to_string(), "tail": coterm_to_json(r)})
        }
        CoTerm::Sel(x, c) => json!({"k": "sel", "x": x, "cmd": command_to_json(c)}),
    }
}

pub fn command_to_json(c: &Command) -> Value {
    json!({"k": "cut", "t": term_to_json(&c.head), "l": coterm_to_json(&c.tail)})
}

pub fn to_json(e: &Expr) -> Value {
    match e {
        Expr::Term(t) => term_to_json(t),
        Expr::CoTerm(l) => coterm_to_json(l),
        Expr::Command(c) => command_to_json(c),
    }
}

#[derive(Debug, thiserror::Error)]
#[error("malformed expression JSON: {0}")]
pub struct JsonError(pub String);

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, JsonError> {
    v.get(k).ok_or_else(|| JsonError(format!("missing field `{k}`")))
}

fn name(v: &Value, k: &str) -> Result<String, JsonError> {
    field(v, k)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| JsonError(format!("field `{k}` is not a string")))
}

pub fn from_json(v: &Value) -> Result<Expr, JsonError> {
    let kind = name(v, "k")?;
    Ok(match kind.as_str() {
        "var" => Expr::Term(Term::Var(name(v, "x")?)),
        "lam" | "tylam" => {
            let body = term_of(field(v, "body")?)?;
            let x = name(v, "x")?;
            Expr::Term(if kind == "lam" {
                Term::Lam(x, Box::new(body))
            } else {
                Term::TyLam(x, Box::new(body))
            })
        }
        "coerce" => Expr::Term(Term::Coerce(Box::new(command_of(field(v, "cmd")?)?))),
        "nil" => Expr::CoTerm(CoTerm::Nil),
        "cons" => Expr::CoTerm(CoTerm::cons(
            term_of(field(v, "head")?)?,
            coterm_of(field(v, "tail")?)?,
        )),
        "tycons" => {
            let ty = parse_type(&name(v, "ty")?).map_err(|e| JsonError(e.to_string()))?;
            Expr::CoTerm(CoTerm::tycons(ty, coterm_of(field(v, "tail")?)?))
        }
        "sel" => Expr::CoTerm(CoTerm::sel(&name(v, "x")?, command_of(field(v, "cmd")?)?)),
        "cut" => Expr::Command(Command::new(
            term_of(field(v, "t")?)?,
            coterm_of(field(v, "l")?)?,
        )),
        other => return Err(JsonError(format!("unknown kind `{other}`"))),
    })
}

fn term_of(v: &Value) -> Result<Term, JsonError> {
    match from_json(v)? {
        Expr::Term(t) => Ok(t),
        _ => Err(JsonError("expected a term".into())),
    }
}

fn coterm_of(v: &Value) -> Result<CoTerm, JsonError> {
    match from_json(v)? {
        Expr::CoTerm(l) => Ok(l),
        _ => Err(JsonError("expected a co-term".into())),
    }
}

fn command_of(v: &Value) -> Result<Command, JsonError> {
    match from_json(v)? {
        Expr::Command(c) => Ok(c),
        _ => Err(JsonError("expected a command".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    #[test]
    fn round_trip() {
        let t = parse_term("/\\X.\\x.{x <X->X>::y::(z) z []}").unwrap();
        let e = Expr::Term(t);
        let v = to_json(&e);
        assert_eq!(from_json(&v).unwrap(), e);
        assert_eq!(to_json(&Expr::Term(Term::var("y"))).to_string(), r#"{"k":"var","x":"y"}"#);
    }
}
