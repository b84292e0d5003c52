//! λJ: generalised application `t(u,x.v)` with β and eager π.

use std::collections::BTreeSet;
use std::fmt;

use super::{bound_name, fresh_avoiding, Nm, SpecRule};
use crate::fresh::Fresh;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum JTerm {
    Var(String),
    Lam(String, Box<JTerm>),
    GApp(Box<JTerm>, Box<JArg>),
}

/// A generalised argument `(u,x.v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JArg {
    pub u: JTerm,
    pub x: String,
    pub v: JTerm,
}

impl JTerm {
    pub fn var(x: &str) -> JTerm {
        JTerm::Var(x.to_string())
    }
    pub fn lam(x: &str, b: JTerm) -> JTerm {
        JTerm::Lam(x.to_string(), Box::new(b))
    }
    pub fn gapp(t: JTerm, u: JTerm, x: &str, v: JTerm) -> JTerm {
        JTerm::GApp(Box::new(t), Box::new(JArg::new(u, x, v)))
    }
    pub fn with(t: JTerm, r: JArg) -> JTerm {
        JTerm::GApp(Box::new(t), Box::new(r))
    }

    pub fn is_value(&self) -> bool {
        !matches!(self, JTerm::GApp(..))
    }

    pub fn size(&self) -> usize {
        match self {
            JTerm::Var(_) => 1,
            JTerm::Lam(_, b) => 1 + b.size(),
            JTerm::GApp(t, r) => 1 + t.size() + r.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fv(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            JTerm::Var(x) => {
                out.insert(x.clone());
            }
            JTerm::Lam(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            JTerm::GApp(t, r) => {
                t.all_names(out);
                r.all_names(out);
            }
        }
    }

    pub fn canon(&self) -> JTerm {
        rename(self, &mut Vec::new(), &mut |_, d| bound_name(d))
    }

    /// Every binder renamed to a fresh name drawn from `fresh`.
    pub fn rename_apart(&self, fresh: &mut Fresh) -> JTerm {
        rename(self, &mut Vec::new(), &mut |x, _| fresh.name(x))
    }

    pub fn alpha_eq(&self, other: &JTerm) -> bool {
        self.canon() == other.canon()
    }
}

impl JArg {
    pub fn new(u: JTerm, x: &str, v: JTerm) -> JArg {
        JArg {
            u,
            x: x.to_string(),
            v,
        }
    }

    pub fn size(&self) -> usize {
        self.u.size() + self.v.size()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fv_arg(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        self.u.all_names(out);
        out.insert(self.x.clone());
        self.v.all_names(out);
    }

    pub fn canon(&self) -> JArg {
        rename_arg(self, &mut Vec::new(), &mut |_, d| bound_name(d))
    }

    /// Every binder renamed to a fresh name drawn from `fresh`.
    pub fn rename_apart(&self, fresh: &mut Fresh) -> JArg {
        rename_arg(self, &mut Vec::new(), &mut |x, _| fresh.name(x))
    }

    /// The same argument with its binder renamed away from `avoid`.
    pub fn apart(&self, avoid: &BTreeSet<String>) -> JArg {
        if !avoid.contains(&self.x) {
            return self.clone();
        }
        let mut names = avoid.clone();
        self.all_names(&mut names);
        let y = fresh_avoiding(names).name(&self.x);
        JArg::new(self.u.clone(), &y, subst(&self.v, &self.x, &JTerm::Var(y.clone())))
    }
}

fn fv(t: &JTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        JTerm::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        JTerm::Lam(x, b) => {
            bound.push(x.clone());
            fv(b, bound, out);
            bound.pop();
        }
        JTerm::GApp(t, r) => {
            fv(t, bound, out);
            fv_arg(r, bound, out);
        }
    }
}

fn fv_arg(r: &JArg, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    fv(&r.u, bound, out);
    bound.push(r.x.clone());
    fv(&r.v, bound, out);
    bound.pop();
}

fn lookup(env: &[(String, String)], x: &str) -> String {
    env.iter()
        .rev()
        .find(|(a, _)| a == x)
        .map(|(_, b)| b.clone())
        .unwrap_or_else(|| x.to_string())
}

fn rename(t: &JTerm, env: &mut Vec<(String, String)>, nm: Nm) -> JTerm {
    match t {
        JTerm::Var(x) => JTerm::Var(lookup(env, x)),
        JTerm::Lam(x, b) => {
            let n = nm(x, env.len());
            env.push((x.clone(), n.clone()));
            let b = rename(b, env, nm);
            env.pop();
            JTerm::Lam(n, Box::new(b))
        }
        JTerm::GApp(t, r) => JTerm::with(rename(t, env, nm), rename_arg(r, env, nm)),
    }
}

fn rename_arg(r: &JArg, env: &mut Vec<(String, String)>, nm: Nm) -> JArg {
    let u = rename(&r.u, env, nm);
    let n = nm(&r.x, env.len());
    env.push((r.x.clone(), n.clone()));
    let v = rename(&r.v, env, nm);
    env.pop();
    JArg { u, x: n, v }
}

struct Sub<'a> {
    x: &'a str,
    u: &'a JTerm,
    fvu: BTreeSet<String>,
    fresh: Fresh,
}

impl Sub<'_> {
    fn binder(&mut self, y: &str, body: &JTerm) -> (String, JTerm) {
        if y == self.x {
            return (y.to_string(), body.clone());
        }
        if self.fvu.contains(y) && body.free_vars().contains(self.x) {
            let y2 = self.fresh.name(y);
            let renamed = subst(body, y, &JTerm::Var(y2.clone()));
            (y2, self.term(&renamed))
        } else {
            (y.to_string(), self.term(body))
        }
    }

    fn term(&mut self, t: &JTerm) -> JTerm {
        match t {
            JTerm::Var(y) if y == self.x => self.u.clone(),
            JTerm::Var(_) => t.clone(),
            JTerm::Lam(y, b) => {
                let (y, b) = self.binder(y, b);
                JTerm::Lam(y, Box::new(b))
            }
            JTerm::GApp(t, r) => {
                let t = self.term(t);
                JTerm::with(t, self.arg(r))
            }
        }
    }

    fn arg(&mut self, r: &JArg) -> JArg {
        let u = self.term(&r.u);
        let (x, v) = self.binder(&r.x, &r.v);
        JArg { u, x, v }
    }
}

fn sub_for<'a>(x: &'a str, u: &'a JTerm, names: BTreeSet<String>) -> Sub<'a> {
    let mut names = names;
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
pub fn subst(t: &JTerm, x: &str, u: &JTerm) -> JTerm {
    let mut names = BTreeSet::new();
    t.all_names(&mut names);
    sub_for(x, u, names).term(t)
}

pub fn subst_arg(r: &JArg, x: &str, u: &JTerm) -> JArg {
    let mut names = BTreeSet::new();
    r.all_names(&mut names);
    sub_for(x, u, names).arg(r)
}

/// Eager append: `(u,x.V)@S = (u,x.VS)` and `(u,x.tR')@S = (u,x.t(R'@S))`.
pub fn append(r: &JArg, s: &JArg) -> JArg {
    let r = r.apart(&s.free_vars());
    let v = match r.v {
        JTerm::GApp(t, r2) => JTerm::with(*t, append(&r2, s)),
        v => JTerm::with(v, s.clone()),
    };
    JArg { u: r.u, x: r.x, v }
}

/// Lazy append: `(u,x.v)@̂S = (u,x.vS)`.
pub fn append_lazy(r: &JArg, s: &JArg) -> JArg {
    let r = r.apart(&s.free_vars());
    JArg {
        u: r.u,
        x: r.x,
        v: JTerm::with(r.v, s.clone()),
    }
}

fn root(t: &JTerm, lazy: bool, out: &mut Vec<(SpecRule, JTerm)>) {
    if let JTerm::GApp(h, s) = t {
        match &**h {
            JTerm::Lam(x, b) => {
                let inner = subst(b, x, &s.u);
                out.push((SpecRule::Beta, subst(&s.v, &s.x, &inner)));
            }
            JTerm::GApp(t0, r) if lazy => {
                out.push((SpecRule::PiHat, JTerm::with((**t0).clone(), append_lazy(r, s))));
            }
            JTerm::GApp(t0, r) => {
                out.push((SpecRule::Pi, JTerm::with((**t0).clone(), append(r, s))));
            }
            JTerm::Var(_) => {}
        }
    }
}

/// Every one-step reduct; `lazy` swaps π for π̂.
pub fn steps(t: &JTerm, lazy: bool) -> Vec<(SpecRule, JTerm)> {
    let mut out = Vec::new();
    root(t, lazy, &mut out);
    match t {
        JTerm::Var(_) => {}
        JTerm::Lam(x, b) => {
            for (r, b2) in steps(b, lazy) {
                out.push((r, JTerm::lam(x, b2)));
            }
        }
        JTerm::GApp(h, s) => {
            for (r, h2) in steps(h, lazy) {
                out.push((r, JTerm::with(h2, (**s).clone())));
            }
            for (r, s2) in steps_arg(s, lazy) {
                out.push((r, JTerm::with((**h).clone(), s2)));
            }
        }
    }
    out
}

pub fn steps_arg(s: &JArg, lazy: bool) -> Vec<(SpecRule, JArg)> {
    let mut out = Vec::new();
    for (r, u2) in steps(&s.u, lazy) {
        out.push((r, JArg::new(u2, &s.x, s.v.clone())));
    }
    for (r, v2) in steps(&s.v, lazy) {
        out.push((r, JArg::new(s.u.clone(), &s.x, v2)));
    }
    out
}

/// π-normal form, computed structurally.
pub fn pi_nf(t: &JTerm) -> JTerm {
    match t {
        JTerm::Var(_) => t.clone(),
        JTerm::Lam(x, b) => JTerm::lam(x, pi_nf(b)),
        JTerm::GApp(h, s) => {
            let s = pi_nf_arg(s);
            match pi_nf(h) {
                JTerm::GApp(t0, r) => JTerm::with(*t0, append(&r, &s)),
                h => JTerm::with(h, s),
            }
        }
    }
}

pub fn pi_nf_arg(s: &JArg) -> JArg {
    JArg::new(pi_nf(&s.u), &s.x, pi_nf(&s.v))
}

impl fmt::Display for JTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JTerm::Var(x) => f.write_str(x),
            JTerm::Lam(x, b) => write!(f, "\\{x}.{b}"),
            JTerm::GApp(t, r) => match &**t {
                JTerm::Lam(..) => write!(f, "({t}){r}"),
                _ => write!(f, "{t}{r}"),
            },
        }
    }
}

impl fmt::Display for JArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}.{})", self.u, self.x, self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> JTerm {
        JTerm::var(x)
    }

    #[test]
    fn beta_of_identity() {
        // (λx.x)(u, y.y) → u
        let t = JTerm::gapp(JTerm::lam("x", v("x")), v("u"), "y", v("y"));
        assert_eq!(steps(&t, false), vec![(SpecRule::Beta, v("u"))]);
    }

    #[test]
    fn append_on_values_and_applications() {
        let s = JArg::new(v("w"), "z", v("z"));
        let r = JArg::new(v("u"), "x", v("x"));
        assert_eq!(append(&r, &s), JArg::new(v("u"), "x", JTerm::with(v("x"), s.clone())));
        let r2 = JArg::new(v("u"), "x", JTerm::with(v("x"), JArg::new(v("a"), "y", v("y"))));
        let want = JArg::new(
            v("u"),
            "x",
            JTerm::with(v("x"), JArg::new(v("a"), "y", JTerm::with(v("y"), s.clone()))),
        );
        assert_eq!(append(&r2, &s), want);
    }

    #[test]
    fn append_renames_binders_free_in_the_suffix() {
        let s = JArg::new(v("x"), "z", v("z"));
        let r = JArg::new(v("u"), "x", v("x"));
        let out = append(&r, &s);
        assert_ne!(out.x, "x");
        assert!(out.free_vars().contains("x"));
    }

    #[test]
    fn lazy_and_eager_pi_differ_on_applications() {
        let inner = JTerm::with(v("y"), JArg::new(v("a"), "q", v("q")));
        let t = JTerm::with(JTerm::with(v("t"), JArg::new(v("u"), "x", inner)), JArg::new(v("w"), "z", v("z")));
        let eager = steps(&t, false);
        let lazy = steps(&t, true);
        assert_eq!(eager.len(), 1);
        assert_eq!(lazy.len(), 1);
        assert_ne!(eager[0].1, lazy[0].1);
        assert_eq!(steps(&lazy[0].1, false)[0].1, eager[0].1);
    }
}
