//! λJms: the cut `tl` serves as application and explicit substitution.

use std::collections::BTreeSet;
use std::fmt;

use super::{bound_name, fresh_avoiding, Nm, SpecRule};
use crate::fresh::Fresh;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum STerm {
    Var(String),
    Lam(String, Box<STerm>),
    Cut(Box<STerm>, Box<SCo>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SCo {
    Cons(Box<STerm>, Box<SCo>),
    Sel(String, Box<STerm>),
}

impl STerm {
    pub fn var(x: &str) -> STerm {
        STerm::Var(x.to_string())
    }
    pub fn lam(x: &str, b: STerm) -> STerm {
        STerm::Lam(x.to_string(), Box::new(b))
    }
    pub fn cut(t: STerm, l: SCo) -> STerm {
        STerm::Cut(Box::new(t), Box::new(l))
    }

    pub fn is_value(&self) -> bool {
        !matches!(self, STerm::Cut(..))
    }

    pub fn size(&self) -> usize {
        match self {
            STerm::Var(_) => 1,
            STerm::Lam(_, b) => 1 + b.size(),
            STerm::Cut(t, l) => 1 + t.size() + l.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fv(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            STerm::Var(x) => {
                out.insert(x.clone());
            }
            STerm::Lam(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            STerm::Cut(t, l) => {
                t.all_names(out);
                l.all_names(out);
            }
        }
    }

    pub fn canon(&self) -> STerm {
        rename(self, &mut Vec::new(), &mut |_, d| bound_name(d))
    }

    /// Every binder renamed to a fresh name drawn from `fresh`.
    pub fn rename_apart(&self, fresh: &mut Fresh) -> STerm {
        rename(self, &mut Vec::new(), &mut |x, _| fresh.name(x))
    }

    pub fn alpha_eq(&self, other: &STerm) -> bool {
        self.canon() == other.canon()
    }
}

impl SCo {
    pub fn cons(u: STerm, l: SCo) -> SCo {
        SCo::Cons(Box::new(u), Box::new(l))
    }
    pub fn sel(x: &str, v: STerm) -> SCo {
        SCo::Sel(x.to_string(), Box::new(v))
    }

    pub fn size(&self) -> usize {
        match self {
            SCo::Cons(u, l) => 1 + u.size() + l.size(),
            SCo::Sel(_, v) => 1 + v.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fv_co(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            SCo::Cons(u, l) => {
                u.all_names(out);
                l.all_names(out);
            }
            SCo::Sel(x, v) => {
                out.insert(x.clone());
                v.all_names(out);
            }
        }
    }

    pub fn canon(&self) -> SCo {
        rename_co(self, &mut Vec::new(), &mut |_, d| bound_name(d))
    }

    /// Every binder renamed to a fresh name drawn from `fresh`.
    pub fn rename_apart(&self, fresh: &mut Fresh) -> SCo {
        rename_co(self, &mut Vec::new(), &mut |x, _| fresh.name(x))
    }

    /// The co-term with its outer selection binder renamed away from `avoid`.
    pub fn apart(&self, avoid: &BTreeSet<String>) -> SCo {
        match self {
            SCo::Sel(x, v) if avoid.contains(x) => {
                let mut names = avoid.clone();
                self.all_names(&mut names);
                let y = fresh_avoiding(names).name(x);
                SCo::sel(&y, subst(v, x, &STerm::Var(y.clone())))
            }
            _ => self.clone(),
        }
    }
}

fn fv(t: &STerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        STerm::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        STerm::Lam(x, b) => {
            bound.push(x.clone());
            fv(b, bound, out);
            bound.pop();
        }
        STerm::Cut(t, l) => {
            fv(t, bound, out);
            fv_co(l, bound, out);
        }
    }
}

fn fv_co(l: &SCo, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match l {
        SCo::Cons(u, l) => {
            fv(u, bound, out);
            fv_co(l, bound, out);
        }
        SCo::Sel(x, v) => {
            bound.push(x.clone());
            fv(v, bound, out);
            bound.pop();
        }
    }
}

fn lookup(env: &[(String, String)], x: &str) -> String {
    env.iter()
        .rev()
        .find(|(a, _)| a == x)
        .map(|(_, b)| b.clone())
        .unwrap_or_else(|| x.to_string())
}

fn rename(t: &STerm, env: &mut Vec<(String, String)>, nm: Nm) -> STerm {
    match t {
        STerm::Var(x) => STerm::Var(lookup(env, x)),
        STerm::Lam(x, b) => {
            let n = nm(x, env.len());
            env.push((x.clone(), n.clone()));
            let b = rename(b, env, nm);
            env.pop();
            STerm::Lam(n, Box::new(b))
        }
        STerm::Cut(t, l) => STerm::cut(rename(t, env, nm), rename_co(l, env, nm)),
    }
}

fn rename_co(l: &SCo, env: &mut Vec<(String, String)>, nm: Nm) -> SCo {
    match l {
        SCo::Cons(u, l) => SCo::cons(rename(u, env, nm), rename_co(l, env, nm)),
        SCo::Sel(x, v) => {
            let n = nm(x, env.len());
            env.push((x.clone(), n.clone()));
            let v = rename(v, env, nm);
            env.pop();
            SCo::Sel(n, Box::new(v))
        }
    }
}

struct Sub<'a> {
    x: &'a str,
    u: &'a STerm,
    fvu: BTreeSet<String>,
    fresh: Fresh,
}

impl Sub<'_> {
    fn binder(&mut self, y: &str, body: &STerm) -> (String, STerm) {
        if y == self.x {
            return (y.to_string(), body.clone());
        }
        if self.fvu.contains(y) && body.free_vars().contains(self.x) {
            let y2 = self.fresh.name(y);
            let renamed = subst(body, y, &STerm::Var(y2.clone()));
            (y2, self.term(&renamed))
        } else {
            (y.to_string(), self.term(body))
        }
    }

    fn term(&mut self, t: &STerm) -> STerm {
        match t {
            STerm::Var(y) if y == self.x => self.u.clone(),
            STerm::Var(_) => t.clone(),
            STerm::Lam(y, b) => {
                let (y, b) = self.binder(y, b);
                STerm::Lam(y, Box::new(b))
            }
            STerm::Cut(t, l) => {
                let t = self.term(t);
                STerm::cut(t, self.co(l))
            }
        }
    }

    fn co(&mut self, l: &SCo) -> SCo {
        match l {
            SCo::Cons(u, l) => {
                let u = self.term(u);
                SCo::cons(u, self.co(l))
            }
            SCo::Sel(y, v) => {
                let (y, v) = self.binder(y, v);
                SCo::Sel(y, Box::new(v))
            }
        }
    }
}

fn sub_for<'a>(x: &'a str, u: &'a STerm, mut names: BTreeSet<String>) -> Sub<'a> {
    u.all_names(&mut names);
    names.insert(x.to_string());
    Sub {
        x,
        u,
        fvu: u.free_vars(),
        fresh: fresh_avoiding(names),
    }
}

/// Capture-avoiding `[u/x]t`.
pub fn subst(t: &STerm, x: &str, u: &STerm) -> STerm {
    let mut names = BTreeSet::new();
    t.all_names(&mut names);
    sub_for(x, u, names).term(t)
}

pub fn subst_co(l: &SCo, x: &str, u: &STerm) -> SCo {
    let mut names = BTreeSet::new();
    l.all_names(&mut names);
    sub_for(x, u, names).co(l)
}

/// `l@l'`: `((x)V)@l' = (x)Vl'` and `((x)tl)@l' = (x)t(l@l')`.
pub fn append(l: &SCo, l2: &SCo) -> SCo {
    match l.apart(&l2.free_vars()) {
        SCo::Cons(u, l) => SCo::Cons(u, Box::new(append(&l, l2))),
        SCo::Sel(x, v) => match *v {
            STerm::Cut(t, l) => SCo::sel(&x, STerm::Cut(t, Box::new(append(&l, l2)))),
            v => SCo::sel(&x, STerm::cut(v, l2.clone())),
        },
    }
}

fn root(t: &STerm, out: &mut Vec<(SpecRule, STerm)>) {
    if let STerm::Cut(h, l) = t {
        match (&**h, &**l) {
            (STerm::Lam(x, b), SCo::Cons(u, l2)) => {
                let inner = SCo::sel(x, STerm::Cut(b.clone(), l2.clone()));
                let inner = rebind(&inner, x, b, l2);
                out.push((SpecRule::Beta, STerm::cut((**u).clone(), inner)));
            }
            (STerm::Cut(t0, l0), SCo::Cons(..)) => {
                out.push((SpecRule::Pi, STerm::cut((**t0).clone(), append(l0, l))));
            }
            _ => {}
        }
        if let SCo::Sel(x, v) = &**l {
            out.push((SpecRule::Sigma, subst(v, x, h)));
        }
    }
}

/// `(x)tl` with `x` renamed when it is free in `l`.
fn rebind(sel: &SCo, x: &str, t: &STerm, l: &SCo) -> SCo {
    if !l.free_vars().contains(x) {
        return sel.clone();
    }
    let mut names = BTreeSet::new();
    t.all_names(&mut names);
    l.all_names(&mut names);
    let y = fresh_avoiding(names).name(x);
    SCo::sel(&y, STerm::cut(subst(t, x, &STerm::Var(y.clone())), l.clone()))
}

/// `(x)xl → l` when `x` is not free in `l`.
fn root_co(l: &SCo, out: &mut Vec<(SpecRule, SCo)>) {
    if let SCo::Sel(x, v) = l {
        if let STerm::Cut(h, l2) = &**v {
            if matches!(&**h, STerm::Var(y) if y == x) && !l2.free_vars().contains(x) {
                out.push((SpecRule::Mu, (**l2).clone()));
            }
        }
    }
}

pub fn steps(t: &STerm) -> Vec<(SpecRule, STerm)> {
    let mut out = Vec::new();
    root(t, &mut out);
    match t {
        STerm::Var(_) => {}
        STerm::Lam(x, b) => {
            for (r, b2) in steps(b) {
                out.push((r, STerm::lam(x, b2)));
            }
        }
        STerm::Cut(h, l) => {
            for (r, h2) in steps(h) {
                out.push((r, STerm::Cut(Box::new(h2), l.clone())));
            }
            for (r, l2) in steps_co(l) {
                out.push((r, STerm::Cut(h.clone(), Box::new(l2))));
            }
        }
    }
    out
}

pub fn steps_co(l: &SCo) -> Vec<(SpecRule, SCo)> {
    let mut out = Vec::new();
    root_co(l, &mut out);
    match l {
        SCo::Cons(u, l) => {
            for (r, u2) in steps(u) {
                out.push((r, SCo::Cons(Box::new(u2), l.clone())));
            }
            for (r, l2) in steps_co(l) {
                out.push((r, SCo::Cons(u.clone(), Box::new(l2))));
            }
        }
        SCo::Sel(x, v) => {
            for (r, v2) in steps(v) {
                out.push((r, SCo::sel(x, v2)));
            }
        }
    }
    out
}

fn atom(t: &STerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        STerm::Var(x) => f.write_str(x),
        _ => write!(f, "({t})"),
    }
}

impl fmt::Display for STerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            STerm::Var(x) => f.write_str(x),
            STerm::Lam(x, b) => write!(f, "\\{x}.{b}"),
            STerm::Cut(t, l) => {
                atom(t, f)?;
                write!(f, " {l}")
            }
        }
    }
}

impl fmt::Display for SCo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SCo::Cons(u, l) => {
                atom(u, f)?;
                write!(f, "::{l}")
            }
            SCo::Sel(x, v) => write!(f, "({x}){v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> STerm {
        STerm::var(x)
    }

    #[test]
    fn sigma_substitutes() {
        // t(x)v → [t/x]v
        let t = STerm::cut(v("a"), SCo::sel("x", STerm::cut(v("x"), SCo::cons(v("x"), SCo::sel("z", v("z"))))));
        let r = steps(&t);
        let want = STerm::cut(v("a"), SCo::cons(v("a"), SCo::sel("z", v("z"))));
        assert!(r.contains(&(SpecRule::Sigma, want)));
    }

    #[test]
    fn beta_renames_the_bound_variable_when_needed() {
        // (λx.x)(u::(y)x) must not capture the free x of the tail
        let t = STerm::cut(STerm::lam("x", v("x")), SCo::cons(v("u"), SCo::sel("y", v("x"))));
        let (rule, r) = steps(&t).remove(0);
        assert_eq!(rule, SpecRule::Beta);
        assert!(r.free_vars().contains("x"));
        assert!(r.free_vars().contains("u"));
    }

    #[test]
    fn append_clauses() {
        let l2 = SCo::cons(v("w"), SCo::sel("z", v("z")));
        let l = SCo::sel("x", v("x"));
        assert_eq!(append(&l, &l2), SCo::sel("x", STerm::cut(v("x"), l2.clone())));
        let l = SCo::sel("x", STerm::cut(v("x"), SCo::sel("y", v("y"))));
        let want = SCo::sel("x", STerm::cut(v("x"), SCo::sel("y", STerm::cut(v("y"), l2.clone()))));
        assert_eq!(append(&l, &l2), want);
    }
}
