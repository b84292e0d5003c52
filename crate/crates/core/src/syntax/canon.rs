//! Canonical representatives modulo renaming of bound variables.
//!
//! Every binder is renamed to `%d`, where `d` counts the enclosing
//! binders of the same sort. Such names cannot be written in the surface
//! syntax, so they never collide with free variables; two expressions are
//! alpha-equivalent iff their canonical forms are identical.

use super::{Command, CoTerm, Expr, Term};
use crate::types::Type;

#[derive(Default)]
struct Env {
    vars: Vec<(String, String)>,
    tvars: Vec<(String, String)>,
}

impl Env {
    fn var(&self, x: &str) -> String {
        lookup(&self.vars, x)
    }
    fn ty(&self, a: &Type) -> Type {
        self.ty_in(a, &mut Vec::new())
    }

    /// `inner` holds the ∀-binders of the type itself, which sit inside
    /// every `ΛX` of the enclosing term.
    fn ty_in(&self, a: &Type, inner: &mut Vec<(String, String)>) -> Type {
        match a {
            Type::Var(x) => match inner.iter().rev().find(|(n, _)| n == x) {
                Some((_, c)) => Type::Var(c.clone()),
                None => Type::Var(lookup(&self.tvars, x)),
            },
            Type::Bot => Type::Bot,
            Type::Arrow(l, r) => Type::arrow(self.ty_in(l, inner), self.ty_in(r, inner)),
            Type::Forall(x, b) => {
                let c = format!("%{}", self.tvars.len() + inner.len());
                inner.push((x.clone(), c.clone()));
                let body = self.ty_in(b, inner);
                inner.pop();
                Type::Forall(c, Box::new(body))
            }
        }
    }
}

fn lookup(env: &[(String, String)], x: &str) -> String {
    env.iter()
        .rev()
        .find(|(n, _)| n == x)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(|| x.to_string())
}

fn term(t: &Term, env: &mut Env) -> Term {
    match t {
        Term::Var(x) => Term::Var(env.var(x)),
        Term::Lam(x, b) => {
            let c = format!("%{}", env.vars.len());
            env.vars.push((x.clone(), c.clone()));
            let body = term(b, env);
            env.vars.pop();
            Term::Lam(c, Box::new(body))
        }
        Term::TyLam(x, b) => {
            let c = format!("%{}", env.tvars.len());
            env.tvars.push((x.clone(), c.clone()));
            let body = term(b, env);
            env.tvars.pop();
            Term::TyLam(c, Box::new(body))
        }
        Term::Coerce(c) => Term::Coerce(Box::new(command(c, env))),
    }
}

fn coterm(l: &CoTerm, env: &mut Env) -> CoTerm {
    match l {
        CoTerm::Nil => CoTerm::Nil,
        CoTerm::Cons(u, r) => {
            let u2 = term(u, env);
            CoTerm::cons(u2, coterm(r, env))
        }
        CoTerm::TyCons(b, r) => {
            let b2 = env.ty(b);
            CoTerm::tycons(b2, coterm(r, env))
        }
        CoTerm::Sel(x, c) => {
            let n = format!("%{}", env.vars.len());
            env.vars.push((x.clone(), n.clone()));
            let body = command(c, env);
            env.vars.pop();
            CoTerm::Sel(n, Box::new(body))
        }
    }
}

fn command(c: &Command, env: &mut Env) -> Command {
    let h = term(&c.head, env);
    Command::new(h, coterm(&c.tail, env))
}

impl Expr {
    pub fn canon(&self) -> Expr {
        let mut env = Env::default();
        match self {
            Expr::Term(t) => Expr::Term(term(t, &mut env)),
            Expr::CoTerm(l) => Expr::CoTerm(coterm(l, &mut env)),
            Expr::Command(c) => Expr::Command(command(c, &mut env)),
        }
    }
}

pub fn alpha_eq(a: &Expr, b: &Expr) -> bool {
    a == b || a.canon() == b.canon()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_coterm, parse_term};

    fn t(s: &str) -> Expr {
        parse_term(s).unwrap().into()
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&t("\\x.x"), &t("\\y.y")));
        assert!(!alpha_eq(&t("x"), &t("y")));
        let a: Expr = parse_coterm("(x) x []").unwrap().into();
        let b: Expr = parse_coterm("(z) z []").unwrap().into();
        assert!(alpha_eq(&a, &b));
    }

    #[test]
    fn shadowing_is_respected() {
        assert!(alpha_eq(&t("\\x.\\x.x"), &t("\\a.\\b.b")));
        assert!(!alpha_eq(&t("\\x.\\x.x"), &t("\\a.\\b.a")));
    }

    #[test]
    fn type_binders_are_canonical() {
        assert!(alpha_eq(&t("/\\X.{f <X>::[]}"), &t("/\\Y.{f <Y>::[]}")));
        assert!(!alpha_eq(&t("/\\X.{f <X>::[]}"), &t("/\\Y.{f <X>::[]}")));
        assert!(alpha_eq(
            &t("/\\X.{f <forall Z. Z->X>::[]}"),
            &t("/\\Y.{f <forall W. W->Y>::[]}")
        ));
    }
}
