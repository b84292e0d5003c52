use std::collections::{BTreeSet, HashMap};

use super::{
    free_vars_coterm, free_vars_term, Command, CoTerm, Expr, Term,
};
use crate::fresh::Fresh;
use crate::types::Type;

struct Sub<'a> {
    x: &'a str,
    t: &'a Term,
    fv: BTreeSet<String>,
    ftv: BTreeSet<String>,
}

/// `[t/x]T`, capture-avoiding; the result has `T`'s class.
pub fn subst(t: &Term, x: &str, e: &Expr) -> Expr {
    match e {
        Expr::Term(u) => Expr::Term(subst_term(t, x, u)),
        Expr::CoTerm(l) => Expr::CoTerm(subst_coterm(t, x, l)),
        Expr::Command(c) => Expr::Command(subst_command(t, x, c)),
    }
}

fn mk<'a>(t: &'a Term, x: &'a str) -> Sub<'a> {
    Sub {
        x,
        t,
        fv: free_vars_term(t),
        ftv: Expr::Term(t.clone()).free_tyvars(),
    }
}

pub fn subst_term(t: &Term, x: &str, u: &Term) -> Term {
    mk(t, x).term(u)
}

pub fn subst_coterm(t: &Term, x: &str, l: &CoTerm) -> CoTerm {
    mk(t, x).coterm(l)
}

pub fn subst_command(t: &Term, x: &str, c: &Command) -> Command {
    mk(t, x).command(c)
}

fn fresh_for(base: &str, avoid: &[&BTreeSet<String>], extra: &Expr, also: &str) -> String {
    let mut f = Fresh::new();
    for s in avoid {
        f.avoid_all(s.iter());
    }
    f.avoid_all(extra.all_names());
    f.avoid(also);
    f.name(base)
}

fn fresh_ty_for(base: &str, avoid: &BTreeSet<String>, extra: &Expr) -> String {
    let mut f = Fresh::with_avoid(avoid.clone());
    f.avoid_all(extra.all_tynames());
    f.name(base)
}

impl Sub<'_> {
    fn term(&self, u: &Term) -> Term {
        match u {
            Term::Var(y) if y == self.x => self.t.clone(),
            Term::Var(_) => u.clone(),
            Term::Lam(y, b) => {
                if y == self.x || !free_vars_term(b).contains(self.x) {
                    return u.clone();
                }
                if self.fv.contains(y) {
                    let body = Expr::Term((**b).clone());
                    let y2 = fresh_for(y, &[&self.fv], &body, self.x);
                    let b2 = subst_term(&Term::Var(y2.clone()), y, b);
                    Term::Lam(y2, Box::new(self.term(&b2)))
                } else {
                    Term::Lam(y.clone(), Box::new(self.term(b)))
                }
            }
            Term::TyLam(y, b) => {
                if self.ftv.contains(y) {
                    let body = Expr::Term((**b).clone());
                    let y2 = fresh_ty_for(y, &self.ftv, &body);
                    let b2 = ty_subst_term(&Type::Var(y2.clone()), y, b);
                    Term::TyLam(y2, Box::new(self.term(&b2)))
                } else {
                    Term::TyLam(y.clone(), Box::new(self.term(b)))
                }
            }
            Term::Coerce(c) => Term::Coerce(Box::new(self.command(c))),
        }
    }

    fn coterm(&self, l: &CoTerm) -> CoTerm {
        match l {
            CoTerm::Nil => CoTerm::Nil,
            CoTerm::Cons(u, r) => CoTerm::cons(self.term(u), self.coterm(r)),
            CoTerm::TyCons(b, r) => CoTerm::tycons(b.clone(), self.coterm(r)),
            CoTerm::Sel(y, c) => {
                if y == self.x || !super::free_vars_command(c).contains(self.x) {
                    return l.clone();
                }
                if self.fv.contains(y) {
                    let body = Expr::Command((**c).clone());
                    let y2 = fresh_for(y, &[&self.fv], &body, self.x);
                    let c2 = subst_command(&Term::Var(y2.clone()), y, c);
                    CoTerm::Sel(y2, Box::new(self.command(&c2)))
                } else {
                    CoTerm::Sel(y.clone(), Box::new(self.command(c)))
                }
            }
        }
    }

    fn command(&self, c: &Command) -> Command {
        Command::new(self.term(&c.head), self.coterm(&c.tail))
    }
}

/// Eager concatenation `l @ l2`.
pub fn append(l: &CoTerm, l2: &CoTerm) -> CoTerm {
    match l {
        CoTerm::Nil => l2.clone(),
        CoTerm::Cons(u, r) => CoTerm::cons((**u).clone(), append(r, l2)),
        CoTerm::TyCons(b, r) => CoTerm::tycons(b.clone(), append(r, l2)),
        CoTerm::Sel(x, c) => {
            let fv2 = free_vars_coterm(l2);
            if fv2.contains(x) {
                let body = Expr::Command((**c).clone());
                let x2 = fresh_for(x, &[&fv2], &body, x);
                let c2 = subst_command(&Term::Var(x2.clone()), x, c);
                CoTerm::sel(&x2, Command::new(c2.head, append(&c2.tail, l2)))
            } else {
                CoTerm::sel(x, Command::new(c.head.clone(), append(&c.tail, l2)))
            }
        }
    }
}

/// `[B/X]T` on expressions, renaming `ΛY` binders that would capture.
pub fn ty_subst_expr(b: &Type, x: &str, e: &Expr) -> Expr {
    match e {
        Expr::Term(t) => Expr::Term(ty_subst_term(b, x, t)),
        Expr::CoTerm(l) => Expr::CoTerm(ty_subst_coterm(b, x, l)),
        Expr::Command(c) => Expr::Command(ty_subst_command(b, x, c)),
    }
}

pub fn ty_subst_term(b: &Type, x: &str, t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::Lam(y, body) => Term::Lam(y.clone(), Box::new(ty_subst_term(b, x, body))),
        Term::Coerce(c) => Term::Coerce(Box::new(ty_subst_command(b, x, c))),
        Term::TyLam(y, body) => {
            if y == x {
                return t.clone();
            }
            let fb = b.free_vars();
            if fb.contains(y) {
                let mut avoid = fb;
                avoid.insert(x.to_string());
                let y2 = fresh_ty_for(y, &avoid, &Expr::Term((**body).clone()));
                let body2 = ty_subst_term(&Type::Var(y2.clone()), y, body);
                Term::TyLam(y2, Box::new(ty_subst_term(b, x, &body2)))
            } else {
                Term::TyLam(y.clone(), Box::new(ty_subst_term(b, x, body)))
            }
        }
    }
}

pub fn ty_subst_coterm(b: &Type, x: &str, l: &CoTerm) -> CoTerm {
    match l {
        CoTerm::Nil => CoTerm::Nil,
        CoTerm::Cons(u, r) => CoTerm::cons(ty_subst_term(b, x, u), ty_subst_coterm(b, x, r)),
        CoTerm::TyCons(a, r) => CoTerm::tycons(a.subst(x, b), ty_subst_coterm(b, x, r)),
        CoTerm::Sel(y, c) => CoTerm::Sel(y.clone(), Box::new(ty_subst_command(b, x, c))),
    }
}

pub fn ty_subst_command(b: &Type, x: &str, c: &Command) -> Command {
    Command::new(ty_subst_term(b, x, &c.head), ty_subst_coterm(b, x, &c.tail))
}

/// Alpha-equivalent copy in which every binder is distinct from every
/// other binder and from every free name (term and type level alike).
pub fn rename_apart(e: &Expr, fresh: &mut Fresh) -> Expr {
    fresh.avoid_all(e.free_vars());
    fresh.avoid_all(e.free_tyvars());
    // ∀-binders inside annotations must never be hit by a new name.
    for n in e.all_tynames() {
        if !tylam_binders(e).contains(&n) {
            fresh.avoid(&n);
        }
    }
    let mut r = Renamer {
        fresh,
        env: HashMap::new(),
        tenv: HashMap::new(),
    };
    match e {
        Expr::Term(t) => Expr::Term(r.term(t)),
        Expr::CoTerm(l) => Expr::CoTerm(r.coterm(l)),
        Expr::Command(c) => Expr::Command(r.command(c)),
    }
}

fn tylam_binders(e: &Expr) -> BTreeSet<String> {
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
            CoTerm::TyCons(_, r) => l(r, out),
            CoTerm::Sel(_, c_) => c(c_, out),
        }
    }
    fn c(x: &Command, out: &mut BTreeSet<String>) {
        t(&x.head, out);
        l(&x.tail, out)
    }
    let mut out = BTreeSet::new();
    match e {
        Expr::Term(x) => t(x, &mut out),
        Expr::CoTerm(x) => l(x, &mut out),
        Expr::Command(x) => c(x, &mut out),
    }
    out
}

struct Renamer<'a> {
    fresh: &'a mut Fresh,
    env: HashMap<String, Vec<String>>,
    tenv: HashMap<String, Vec<String>>,
}

impl Renamer<'_> {
    fn look(&self, x: &str) -> String {
        self.env
            .get(x)
            .and_then(|v| v.last())
            .cloned()
            .unwrap_or_else(|| x.to_string())
    }

    fn ty(&self, a: &Type) -> Type {
        self.ty_in(a, &mut Vec::new())
    }

    fn ty_in(&self, a: &Type, shadow: &mut Vec<String>) -> Type {
        match a {
            Type::Var(x) if shadow.contains(x) => a.clone(),
            Type::Var(x) => Type::Var(
                self.tenv
                    .get(x)
                    .and_then(|v| v.last())
                    .cloned()
                    .unwrap_or_else(|| x.clone()),
            ),
            Type::Bot => Type::Bot,
            Type::Arrow(l, r) => Type::arrow(self.ty_in(l, shadow), self.ty_in(r, shadow)),
            Type::Forall(y, body) => {
                shadow.push(y.clone());
                let b = self.ty_in(body, shadow);
                shadow.pop();
                Type::Forall(y.clone(), Box::new(b))
            }
        }
    }

    fn bind<R>(&mut self, x: &str, f: impl FnOnce(&mut Self, String) -> R) -> R {
        let x2 = self.fresh.name(x);
        self.env.entry(x.to_string()).or_default().push(x2.clone());
        let r = f(self, x2);
        self.env.get_mut(x).unwrap().pop();
        r
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(x) => Term::Var(self.look(x)),
            Term::Lam(x, b) => self.bind(x, |s, x2| Term::Lam(x2, Box::new(s.term(b)))),
            Term::Coerce(c) => Term::Coerce(Box::new(self.command(c))),
            Term::TyLam(x, b) => {
                let x2 = self.fresh.name(x);
                self.tenv.entry(x.clone()).or_default().push(x2.clone());
                let body = self.term(b);
                self.tenv.get_mut(x).unwrap().pop();
                Term::TyLam(x2, Box::new(body))
            }
        }
    }

    fn coterm(&mut self, l: &CoTerm) -> CoTerm {
        match l {
            CoTerm::Nil => CoTerm::Nil,
            CoTerm::Cons(u, r) => {
                let u2 = self.term(u);
                CoTerm::cons(u2, self.coterm(r))
            }
            CoTerm::TyCons(b, r) => {
                let b2 = self.ty(b);
                CoTerm::tycons(b2, self.coterm(r))
            }
            CoTerm::Sel(x, c) => self.bind(x, |s, x2| CoTerm::Sel(x2, Box::new(s.command(c)))),
        }
    }

    fn command(&mut self, c: &Command) -> Command {
        let h = self.term(&c.head);
        Command::new(h, self.coterm(&c.tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_coterm, parse_term};

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn substitution_table() {
        assert_eq!(subst_term(&v("t"), "x", &v("x")), v("t"));
        assert_eq!(subst_term(&v("t"), "x", &v("y")), v("y"));
        let c = Command::new(v("x"), CoTerm::cons(v("x"), CoTerm::Nil));
        let want = Command::new(v("y"), CoTerm::cons(v("y"), CoTerm::Nil));
        assert_eq!(subst_command(&v("y"), "x", &c), want);
    }

    #[test]
    fn substitution_avoids_capture() {
        let body = parse_term("\\y.{x y::[]}").unwrap();
        let r = subst_term(&v("y"), "x", &body);
        let want = parse_term("\\z.{y z::[]}").unwrap();
        assert!(alpha_eq(&r.clone().into(), &want.into()), "{r}");
    }

    #[test]
    fn append_examples() {
        let u = CoTerm::cons(v("u"), CoTerm::Nil);
        assert_eq!(append(&CoTerm::Nil, &u), u);
        let l = parse_coterm("a::(z) z b::[]").unwrap();
        assert_eq!(append(&l, &CoTerm::Nil), l);
        let sel = CoTerm::sel("x", Command::new(v("x"), CoTerm::Nil));
        let y = CoTerm::cons(v("y"), CoTerm::Nil);
        let want = CoTerm::sel("x", Command::new(v("x"), y.clone()));
        assert_eq!(append(&sel, &y), want);
    }

    #[test]
    fn append_renames_selection_binder() {
        let sel = parse_coterm("(x) x []").unwrap();
        let l2 = parse_coterm("x::[]").unwrap();
        let r = append(&sel, &l2);
        let want = parse_coterm("(z) z x::[]").unwrap();
        assert!(alpha_eq(&r.into(), &want.into()));
    }

    #[test]
    fn type_substitution_avoids_capture() {
        let t = parse_term("/\\Y.{f <X>::[]}").unwrap();
        let r = ty_subst_term(&Type::var("Y"), "X", &t);
        match &r {
            Term::TyLam(y, _) => assert_ne!(y, "Y"),
            _ => panic!(),
        }
    }
}
