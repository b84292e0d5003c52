//! Terms, co-terms and commands of λJmse and its second-order extension.

mod canon;
pub mod json;
pub mod lexer;
mod parse;
mod print;
mod subst;

use std::collections::BTreeSet;
use std::fmt;

use crate::types::Type;

pub use canon::alpha_eq;
pub use parse::{parse, parse_command, parse_coterm, parse_term, parse_type, ParseError};
pub(crate) use parse::type_expr;
pub use subst::{
    append, rename_apart, subst, subst_command, subst_coterm, subst_term, ty_subst_command,
    ty_subst_coterm, ty_subst_expr, ty_subst_term,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Box<Term>),
    Coerce(Box<Command>),
    TyLam(String, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoTerm {
    Nil,
    Cons(Box<Term>, Box<CoTerm>),
    TyCons(Type, Box<CoTerm>),
    Sel(String, Box<Command>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Command {
    pub head: Term,
    pub tail: CoTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Term(Term),
    CoTerm(CoTerm),
    Command(Command),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Term,
    CoTerm,
    Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Level {
    #[default]
    Prop,
    Second,
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }
    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(x.to_string(), Box::new(body))
    }
    pub fn coerce(c: Command) -> Term {
        Term::Coerce(Box::new(c))
    }
    pub fn tylam(x: &str, body: Term) -> Term {
        Term::TyLam(x.to_string(), Box::new(body))
    }

    /// Values are variables and (type) abstractions.
    pub fn is_value(&self) -> bool {
        !matches!(self, Term::Coerce(_))
    }
}

impl CoTerm {
    pub fn cons(u: Term, l: CoTerm) -> CoTerm {
        CoTerm::Cons(Box::new(u), Box::new(l))
    }
    pub fn tycons(b: Type, l: CoTerm) -> CoTerm {
        CoTerm::TyCons(b, Box::new(l))
    }
    pub fn sel(x: &str, c: Command) -> CoTerm {
        CoTerm::Sel(x.to_string(), Box::new(c))
    }

    /// Evaluation contexts: `[]`, `u::l` and `B::l`.
    pub fn is_eval_ctx(&self) -> bool {
        !matches!(self, CoTerm::Sel(..))
    }
}

impl Command {
    pub fn new(head: Term, tail: CoTerm) -> Command {
        Command { head, tail }
    }
}

impl From<Term> for Expr {
    fn from(t: Term) -> Self {
        Expr::Term(t)
    }
}
impl From<CoTerm> for Expr {
    fn from(l: CoTerm) -> Self {
        Expr::CoTerm(l)
    }
}
impl From<Command> for Expr {
    fn from(c: Command) -> Self {
        Expr::Command(c)
    }
}

impl Expr {
    pub fn class(&self) -> Class {
        match self {
            Expr::Term(_) => Class::Term,
            Expr::CoTerm(_) => Class::CoTerm,
            Expr::Command(_) => Class::Command,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Expr::Term(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_term(self) -> Option<Term> {
        match self {
            Expr::Term(t) => Some(t),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        match self {
            Expr::Term(t) => fv_term(t, &mut bound, &mut out),
            Expr::CoTerm(l) => fv_coterm(l, &mut bound, &mut out),
            Expr::Command(c) => fv_command(c, &mut bound, &mut out),
        }
        out
    }

    /// Free type variables (those not bound by an enclosing `ΛX`).
    pub fn free_tyvars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        match self {
            Expr::Term(t) => ftv_term(t, &mut bound, &mut out),
            Expr::CoTerm(l) => ftv_coterm(l, &mut bound, &mut out),
            Expr::Command(c) => ftv_command(c, &mut bound, &mut out),
        }
        out
    }

    /// Every term-variable name occurring, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        walk(self, &mut |n| {
            out.insert(n.to_string());
        });
        out
    }

    /// Every type-variable name occurring, bound or free.
    pub fn all_tynames(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        walk_types(self, &mut out);
        out
    }

    /// Node count; commands and every constructor count once.
    pub fn size(&self) -> usize {
        match self {
            Expr::Term(t) => size_term(t),
            Expr::CoTerm(l) => size_coterm(l),
            Expr::Command(c) => size_command(c),
        }
    }

    pub fn level(&self) -> Level {
        let mut second = false;
        walk_level(self, &mut second);
        if second {
            Level::Second
        } else {
            Level::Prop
        }
    }

    /// Sub-expression at a child-index path.
    pub fn at(&self, pos: &[usize]) -> Option<Expr> {
        let mut cur = self.clone();
        for &i in pos {
            cur = child(&cur, i)?;
        }
        Some(cur)
    }
}

fn child(e: &Expr, i: usize) -> Option<Expr> {
    match (e, i) {
        (Expr::Term(Term::Lam(_, b)), 0) | (Expr::Term(Term::TyLam(_, b)), 0) => {
            Some(Expr::Term((**b).clone()))
        }
        (Expr::Term(Term::Coerce(c)), 0) => Some(Expr::Command((**c).clone())),
        (Expr::CoTerm(CoTerm::Cons(u, _)), 0) => Some(Expr::Term((**u).clone())),
        (Expr::CoTerm(CoTerm::Cons(_, l)), 1) | (Expr::CoTerm(CoTerm::TyCons(_, l)), 1) => {
            Some(Expr::CoTerm((**l).clone()))
        }
        (Expr::CoTerm(CoTerm::Sel(_, c)), 0) => Some(Expr::Command((**c).clone())),
        (Expr::Command(c), 0) => Some(Expr::Term(c.head.clone())),
        (Expr::Command(c), 1) => Some(Expr::CoTerm(c.tail.clone())),
        _ => None,
    }
}

pub fn size_term(t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::Lam(_, b) | Term::TyLam(_, b) => 1 + size_term(b),
        Term::Coerce(c) => 1 + size_command(c),
    }
}

pub fn size_coterm(l: &CoTerm) -> usize {
    match l {
        CoTerm::Nil => 1,
        CoTerm::Cons(u, l) => 1 + size_term(u) + size_coterm(l),
        CoTerm::TyCons(_, l) => 1 + size_coterm(l),
        CoTerm::Sel(_, c) => 1 + size_command(c),
    }
}

pub fn size_command(c: &Command) -> usize {
    1 + size_term(&c.head) + size_coterm(&c.tail)
}

fn fv_term(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Lam(x, b) => {
            bound.push(x.clone());
            fv_term(b, bound, out);
            bound.pop();
        }
        Term::TyLam(_, b) => fv_term(b, bound, out),
        Term::Coerce(c) => fv_command(c, bound, out),
    }
}

fn fv_coterm(l: &CoTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match l {
        CoTerm::Nil => {}
        CoTerm::Cons(u, l) => {
            fv_term(u, bound, out);
            fv_coterm(l, bound, out);
        }
        CoTerm::TyCons(_, l) => fv_coterm(l, bound, out),
        CoTerm::Sel(x, c) => {
            bound.push(x.clone());
            fv_command(c, bound, out);
            bound.pop();
        }
    }
}

fn fv_command(c: &Command, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    fv_term(&c.head, bound, out);
    fv_coterm(&c.tail, bound, out);
}

pub fn free_vars_term(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fv_term(t, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_coterm(l: &CoTerm) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fv_coterm(l, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_command(c: &Command) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fv_command(c, &mut Vec::new(), &mut out);
    out
}

/// Does `x` occur free in the co-term? Used by the μ side condition.
pub fn occurs_coterm(x: &str, l: &CoTerm) -> bool {
    fn t_occ(x: &str, t: &Term) -> bool {
        match t {
            Term::Var(y) => x == y,
            Term::Lam(y, b) => y != x && t_occ(x, b),
            Term::TyLam(_, b) => t_occ(x, b),
            Term::Coerce(c) => c_occ(x, c),
        }
    }
    fn l_occ(x: &str, l: &CoTerm) -> bool {
        match l {
            CoTerm::Nil => false,
            CoTerm::Cons(u, l) => t_occ(x, u) || l_occ(x, l),
            CoTerm::TyCons(_, l) => l_occ(x, l),
            CoTerm::Sel(y, c) => y != x && c_occ(x, c),
        }
    }
    fn c_occ(x: &str, c: &Command) -> bool {
        t_occ(x, &c.head) || l_occ(x, &c.tail)
    }
    l_occ(x, l)
}

fn ftv_add(ty: &Type, bound: &[String], out: &mut BTreeSet<String>) {
    for v in ty.free_vars() {
        if !bound.contains(&v) {
            out.insert(v);
        }
    }
}

fn ftv_term(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(_) => {}
        Term::Lam(_, b) => ftv_term(b, bound, out),
        Term::TyLam(x, b) => {
            bound.push(x.clone());
            ftv_term(b, bound, out);
            bound.pop();
        }
        Term::Coerce(c) => ftv_command(c, bound, out),
    }
}

fn ftv_coterm(l: &CoTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match l {
        CoTerm::Nil => {}
        CoTerm::Cons(u, l) => {
            ftv_term(u, bound, out);
            ftv_coterm(l, bound, out);
        }
        CoTerm::TyCons(b, l) => {
            ftv_add(b, bound, out);
            ftv_coterm(l, bound, out);
        }
        CoTerm::Sel(_, c) => ftv_command(c, bound, out),
    }
}

fn ftv_command(c: &Command, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    ftv_term(&c.head, bound, out);
    ftv_coterm(&c.tail, bound, out);
}

fn walk(e: &Expr, f: &mut impl FnMut(&str)) {
    fn t(x: &Term, f: &mut impl FnMut(&str)) {
        match x {
            Term::Var(n) => f(n),
            Term::Lam(n, b) => {
                f(n);
                t(b, f)
            }
            Term::TyLam(_, b) => t(b, f),
            Term::Coerce(c_) => c(c_, f),
        }
    }
    fn l(x: &CoTerm, f: &mut impl FnMut(&str)) {
        match x {
            CoTerm::Nil => {}
            CoTerm::Cons(u, r) => {
                t(u, f);
                l(r, f)
            }
            CoTerm::TyCons(_, r) => l(r, f),
            CoTerm::Sel(n, c_) => {
                f(n);
                c(c_, f)
            }
        }
    }
    fn c(x: &Command, f: &mut impl FnMut(&str)) {
        t(&x.head, f);
        l(&x.tail, f)
    }
    match e {
        Expr::Term(x) => t(x, f),
        Expr::CoTerm(x) => l(x, f),
        Expr::Command(x) => c(x, f),
    }
}

fn walk_types(e: &Expr, out: &mut BTreeSet<String>) {
    fn t(x: &Term, out: &mut BTreeSet<String>) {
        match x {
            Term::Var(_) => {}
            Term::Lam(_, b) => t(b, out),
            Term::TyLam(n, b) => {
                out.insert(n.clone());
                t(b, out)
            }
            Term::Coerce(c_) => c(c_, out),
        }
    }
    fn l(x: &CoTerm, out: &mut BTreeSet<String>) {
        match x {
            CoTerm::Nil => {}
            CoTerm::Cons(u, r) => {
                t(u, out);
                l(r, out)
            }
            CoTerm::TyCons(b, r) => {
                b.all_vars(out);
                l(r, out)
            }
            CoTerm::Sel(_, c_) => c(c_, out),
        }
    }
    fn c(x: &Command, out: &mut BTreeSet<String>) {
        t(&x.head, out);
        l(&x.tail, out)
    }
    match e {
        Expr::Term(x) => t(x, out),
        Expr::CoTerm(x) => l(x, out),
        Expr::Command(x) => c(x, out),
    }
}

fn walk_level(e: &Expr, second: &mut bool) {
    fn t(x: &Term, s: &mut bool) {
        match x {
            Term::Var(_) => {}
            Term::Lam(_, b) => t(b, s),
            Term::TyLam(_, _) => *s = true,
            Term::Coerce(c_) => c(c_, s),
        }
    }
    fn l(x: &CoTerm, s: &mut bool) {
        match x {
            CoTerm::Nil => {}
            CoTerm::Cons(u, r) => {
                t(u, s);
                l(r, s)
            }
            CoTerm::TyCons(..) => *s = true,
            CoTerm::Sel(_, c_) => c(c_, s),
        }
    }
    fn c(x: &Command, s: &mut bool) {
        t(&x.head, s);
        l(&x.tail, s)
    }
    match e {
        Expr::Term(x) => t(x, second),
        Expr::CoTerm(x) => l(x, second),
        Expr::Command(x) => c(x, second),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::term(self))
    }
}
impl fmt::Display for CoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::coterm(self))
    }
}
impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::command(self))
    }
}
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => t.fmt(f),
            Expr::CoTerm(l) => l.fmt(f),
            Expr::Command(c) => c.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn free_vars_examples() {
        assert!(Expr::from(Term::lam("x", v("x"))).free_vars().is_empty());
        let c = Command::new(v("x"), CoTerm::sel("y", Command::new(v("y"), CoTerm::Nil)));
        assert_eq!(Expr::from(c).free_vars(), BTreeSet::from(["x".to_string()]));
        let l = CoTerm::cons(v("x"), CoTerm::sel("x", Command::new(v("x"), CoTerm::Nil)));
        assert_eq!(Expr::from(l).free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn positions_address_children() {
        let c = Command::new(Term::lam("x", v("x")), CoTerm::cons(v("y"), CoTerm::Nil));
        let e = Expr::from(c);
        assert_eq!(e.at(&[1, 0]), Some(Expr::Term(v("y"))));
        assert_eq!(e.at(&[0, 0]), Some(Expr::Term(v("x"))));
        assert_eq!(e.size(), 6);
    }
}
