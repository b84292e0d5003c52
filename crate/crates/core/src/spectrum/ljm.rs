//! λJm: generalised multiary application `t(u,l)` with β1, β2, π and μ.

use std::collections::BTreeSet;
use std::fmt;

use super::{bound_name, fresh_avoiding, Nm, SpecRule};
use crate::fresh::Fresh;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MTerm {
    Var(String),
    Lam(String, Box<MTerm>),
    GMApp(Box<MTerm>, Box<MArg>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MCo {
    Cons(Box<MTerm>, Box<MCo>),
    Sel(String, Box<MTerm>),
}

/// A generalised argument `(u,l)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MArg {
    pub u: MTerm,
    pub l: MCo,
}

impl MTerm {
    pub fn var(x: &str) -> MTerm {
        MTerm::Var(x.to_string())
    }
    pub fn lam(x: &str, b: MTerm) -> MTerm {
        MTerm::Lam(x.to_string(), Box::new(b))
    }
    pub fn app(t: MTerm, u: MTerm, l: MCo) -> MTerm {
        MTerm::GMApp(Box::new(t), Box::new(MArg { u, l }))
    }
    pub fn with(t: MTerm, r: MArg) -> MTerm {
        MTerm::GMApp(Box::new(t), Box::new(r))
    }

    pub fn is_value(&self) -> bool {
        !matches!(self, MTerm::GMApp(..))
    }

    pub fn size(&self) -> usize {
        match self {
            MTerm::Var(_) => 1,
            MTerm::Lam(_, b) => 1 + b.size(),
            MTerm::GMApp(t, r) => 1 + t.size() + r.u.size() + r.l.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fv(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            MTerm::Var(x) => {
                out.insert(x.clone());
            }
            MTerm::Lam(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            MTerm::GMApp(t, r) => {
                t.all_names(out);
                r.all_names(out);
            }
        }
    }

    pub fn canon(&self) -> MTerm {
        rename(self, &mut Vec::new(), &mut |_, d| bound_name(d))
    }

    /// Every binder renamed to a fresh name drawn from `fresh`.
    pub fn rename_apart(&self, fresh: &mut Fresh) -> MTerm {
        rename(self, &mut Vec::new(), &mut |x, _| fresh.name(x))
    }

    pub fn alpha_eq(&self, other: &MTerm) -> bool {
        self.canon() == other.canon()
    }
}

impl MCo {
    pub fn cons(u: MTerm, l: MCo) -> MCo {
        MCo::Cons(Box::new(u), Box::new(l))
    }
    pub fn sel(x: &str, v: MTerm) -> MCo {
        MCo::Sel(x.to_string(), Box::new(v))
    }

    pub fn size(&self) -> usize {
        match self {
            MCo::Cons(u, l) => 1 + u.size() + l.size(),
            MCo::Sel(_, v) => 1 + v.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fv_co(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            MCo::Cons(u, l) => {
                u.all_names(out);
                l.all_names(out);
            }
            MCo::Sel(x, v) => {
                out.insert(x.clone());
                v.all_names(out);
            }
        }
    }

    pub fn canon(&self) -> MCo {
        rename_co(self, &mut Vec::new(), &mut |_, d| bound_name(d))
    }

    /// Every binder renamed to a fresh name drawn from `fresh`.
    pub fn rename_apart(&self, fresh: &mut Fresh) -> MCo {
        rename_co(self, &mut Vec::new(), &mut |x, _| fresh.name(x))
    }

    /// The co-term with its outer selection binder renamed away from `avoid`.
    pub fn apart(&self, avoid: &BTreeSet<String>) -> MCo {
        match self {
            MCo::Sel(x, v) if avoid.contains(x) => {
                let mut names = avoid.clone();
                self.all_names(&mut names);
                let y = fresh_avoiding(names).name(x);
                MCo::sel(&y, subst(v, x, &MTerm::Var(y.clone())))
            }
            _ => self.clone(),
        }
    }
}

impl MArg {
    pub fn new(u: MTerm, l: MCo) -> MArg {
        MArg { u, l }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = self.u.free_vars();
        out.extend(self.l.free_vars());
        out
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        self.u.all_names(out);
        self.l.all_names(out);
    }
}

fn fv(t: &MTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        MTerm::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        MTerm::Lam(x, b) => {
            bound.push(x.clone());
            fv(b, bound, out);
            bound.pop();
        }
        MTerm::GMApp(t, r) => {
            fv(t, bound, out);
            fv(&r.u, bound, out);
            fv_co(&r.l, bound, out);
        }
    }
}

fn fv_co(l: &MCo, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match l {
        MCo::Cons(u, l) => {
            fv(u, bound, out);
            fv_co(l, bound, out);
        }
        MCo::Sel(x, v) => {
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

fn rename(t: &MTerm, env: &mut Vec<(String, String)>, nm: Nm) -> MTerm {
    match t {
        MTerm::Var(x) => MTerm::Var(lookup(env, x)),
        MTerm::Lam(x, b) => {
            let n = nm(x, env.len());
            env.push((x.clone(), n.clone()));
            let b = rename(b, env, nm);
            env.pop();
            MTerm::Lam(n, Box::new(b))
        }
        MTerm::GMApp(t, r) => MTerm::app(rename(t, env, nm), rename(&r.u, env, nm), rename_co(&r.l, env, nm)),
    }
}

fn rename_co(l: &MCo, env: &mut Vec<(String, String)>, nm: Nm) -> MCo {
    match l {
        MCo::Cons(u, l) => MCo::cons(rename(u, env, nm), rename_co(l, env, nm)),
        MCo::Sel(x, v) => {
            let n = nm(x, env.len());
            env.push((x.clone(), n.clone()));
            let v = rename(v, env, nm);
            env.pop();
            MCo::Sel(n, Box::new(v))
        }
    }
}

struct Sub<'a> {
    x: &'a str,
    u: &'a MTerm,
    fvu: BTreeSet<String>,
    fresh: Fresh,
}

impl Sub<'_> {
    fn binder(&mut self, y: &str, body: &MTerm) -> (String, MTerm) {
        if y == self.x {
            return (y.to_string(), body.clone());
        }
        if self.fvu.contains(y) && body.free_vars().contains(self.x) {
            let y2 = self.fresh.name(y);
            let renamed = subst(body, y, &MTerm::Var(y2.clone()));
            (y2, self.term(&renamed))
        } else {
            (y.to_string(), self.term(body))
        }
    }

    fn term(&mut self, t: &MTerm) -> MTerm {
        match t {
            MTerm::Var(y) if y == self.x => self.u.clone(),
            MTerm::Var(_) => t.clone(),
            MTerm::Lam(y, b) => {
                let (y, b) = self.binder(y, b);
                MTerm::Lam(y, Box::new(b))
            }
            MTerm::GMApp(t, r) => {
                let t = self.term(t);
                let u = self.term(&r.u);
                MTerm::app(t, u, self.co(&r.l))
            }
        }
    }

    fn co(&mut self, l: &MCo) -> MCo {
        match l {
            MCo::Cons(u, l) => {
                let u = self.term(u);
                MCo::cons(u, self.co(l))
            }
            MCo::Sel(y, v) => {
                let (y, v) = self.binder(y, v);
                MCo::Sel(y, Box::new(v))
            }
        }
    }
}

fn sub_for<'a>(x: &'a str, u: &'a MTerm, mut names: BTreeSet<String>) -> Sub<'a> {
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
pub fn subst(t: &MTerm, x: &str, u: &MTerm) -> MTerm {
    let mut names = BTreeSet::new();
    t.all_names(&mut names);
    sub_for(x, u, names).term(t)
}

pub fn subst_co(l: &MCo, x: &str, u: &MTerm) -> MCo {
    let mut names = BTreeSet::new();
    l.all_names(&mut names);
    sub_for(x, u, names).co(l)
}

/// Eager `l@S`.
pub fn append_co(l: &MCo, s: &MArg) -> MCo {
    match l.apart(&s.free_vars()) {
        MCo::Cons(u, l) => MCo::Cons(u, Box::new(append_co(&l, s))),
        MCo::Sel(x, v) => match *v {
            MTerm::GMApp(t, r) => MCo::sel(&x, MTerm::with(*t, append(&r, s))),
            v => MCo::sel(&x, MTerm::with(v, s.clone())),
        },
    }
}

/// Eager `(u,l)@S = (u,l@S)`.
pub fn append(r: &MArg, s: &MArg) -> MArg {
    MArg::new(r.u.clone(), append_co(&r.l, s))
}

/// Lazy `l@̂S`, ending in `((x)t)@̂S = (x)tS`.
pub fn append_co_lazy(l: &MCo, s: &MArg) -> MCo {
    match l.apart(&s.free_vars()) {
        MCo::Cons(u, l) => MCo::Cons(u, Box::new(append_co_lazy(&l, s))),
        MCo::Sel(x, v) => MCo::sel(&x, MTerm::with(*v, s.clone())),
    }
}

pub fn append_lazy(r: &MArg, s: &MArg) -> MArg {
    MArg::new(r.u.clone(), append_co_lazy(&r.l, s))
}

fn root(t: &MTerm, lazy: bool, out: &mut Vec<(SpecRule, MTerm)>) {
    if let MTerm::GMApp(h, s) = t {
        match &**h {
            MTerm::Lam(x, b) => {
                let inner = subst(b, x, &s.u);
                match &s.l {
                    MCo::Sel(y, v) => out.push((SpecRule::Beta1, subst(v, y, &inner))),
                    MCo::Cons(v, l) => out.push((SpecRule::Beta2, MTerm::app(inner, (**v).clone(), (**l).clone()))),
                }
            }
            MTerm::GMApp(t0, r) if lazy => {
                out.push((SpecRule::PiHat, MTerm::with((**t0).clone(), append_lazy(r, s))));
            }
            MTerm::GMApp(t0, r) => {
                out.push((SpecRule::Pi, MTerm::with((**t0).clone(), append(r, s))));
            }
            MTerm::Var(_) => {}
        }
    }
}

/// `(x)x(u,l) → u::l` when `x` is free in neither `u` nor `l`.
fn root_co(l: &MCo, out: &mut Vec<(SpecRule, MCo)>) {
    if let MCo::Sel(x, v) = l {
        if let MTerm::GMApp(h, r) = &**v {
            if matches!(&**h, MTerm::Var(y) if y == x) && !r.free_vars().contains(x) {
                out.push((SpecRule::Mu, MCo::cons(r.u.clone(), r.l.clone())));
            }
        }
    }
}

/// Every one-step reduct; `lazy` swaps π for π̂.
pub fn steps(t: &MTerm, lazy: bool) -> Vec<(SpecRule, MTerm)> {
    let mut out = Vec::new();
    root(t, lazy, &mut out);
    match t {
        MTerm::Var(_) => {}
        MTerm::Lam(x, b) => {
            for (r, b2) in steps(b, lazy) {
                out.push((r, MTerm::lam(x, b2)));
            }
        }
        MTerm::GMApp(h, s) => {
            for (r, h2) in steps(h, lazy) {
                out.push((r, MTerm::with(h2, (**s).clone())));
            }
            for (r, u2) in steps(&s.u, lazy) {
                out.push((r, MTerm::app((**h).clone(), u2, s.l.clone())));
            }
            for (r, l2) in steps_co(&s.l, lazy) {
                out.push((r, MTerm::app((**h).clone(), s.u.clone(), l2)));
            }
        }
    }
    out
}

pub fn steps_co(l: &MCo, lazy: bool) -> Vec<(SpecRule, MCo)> {
    let mut out = Vec::new();
    root_co(l, &mut out);
    match l {
        MCo::Cons(u, l) => {
            for (r, u2) in steps(u, lazy) {
                out.push((r, MCo::Cons(Box::new(u2), l.clone())));
            }
            for (r, l2) in steps_co(l, lazy) {
                out.push((r, MCo::Cons(u.clone(), Box::new(l2))));
            }
        }
        MCo::Sel(x, v) => {
            for (r, v2) in steps(v, lazy) {
                out.push((r, MCo::sel(x, v2)));
            }
        }
    }
    out
}

/// π-normal form, computed structurally.
pub fn pi_nf(t: &MTerm) -> MTerm {
    match t {
        MTerm::Var(_) => t.clone(),
        MTerm::Lam(x, b) => MTerm::lam(x, pi_nf(b)),
        MTerm::GMApp(h, s) => {
            let s = MArg::new(pi_nf(&s.u), pi_nf_co(&s.l));
            match pi_nf(h) {
                MTerm::GMApp(t0, r) => MTerm::with(*t0, append(&r, &s)),
                h => MTerm::with(h, s),
            }
        }
    }
}

pub fn pi_nf_co(l: &MCo) -> MCo {
    match l {
        MCo::Cons(u, l) => MCo::cons(pi_nf(u), pi_nf_co(l)),
        MCo::Sel(x, v) => MCo::sel(x, pi_nf(v)),
    }
}

impl fmt::Display for MTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MTerm::Var(x) => f.write_str(x),
            MTerm::Lam(x, b) => write!(f, "\\{x}.{b}"),
            MTerm::GMApp(t, r) => match &**t {
                MTerm::Lam(..) => write!(f, "({t}){r}"),
                _ => write!(f, "{t}{r}"),
            },
        }
    }
}

impl fmt::Display for MArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.l)
    }
}

impl fmt::Display for MCo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MCo::Cons(u, l) => match &**u {
                MTerm::Var(_) => write!(f, "{u}::{l}"),
                _ => write!(f, "({u})::{l}"),
            },
            MCo::Sel(x, v) => write!(f, "({x}){v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> MTerm {
        MTerm::var(x)
    }

    #[test]
    fn mu_needs_freshness() {
        // (x)x(u,l) → u::l
        let l = MCo::sel("x", MTerm::app(v("x"), v("u"), MCo::sel("z", v("z"))));
        assert_eq!(
            steps_co(&l, false),
            vec![(SpecRule::Mu, MCo::cons(v("u"), MCo::sel("z", v("z"))))]
        );
        let blocked = MCo::sel("x", MTerm::app(v("x"), v("x"), MCo::sel("z", v("z"))));
        assert!(steps_co(&blocked, false).is_empty());
    }

    #[test]
    fn both_betas() {
        let id = MTerm::lam("x", v("x"));
        let t1 = MTerm::app(id.clone(), v("u"), MCo::sel("y", v("y")));
        assert_eq!(steps(&t1, false), vec![(SpecRule::Beta1, v("u"))]);
        let t2 = MTerm::app(id, v("u"), MCo::cons(v("w"), MCo::sel("y", v("y"))));
        assert_eq!(
            steps(&t2, false),
            vec![(SpecRule::Beta2, MTerm::app(v("u"), v("w"), MCo::sel("y", v("y"))))]
        );
    }

    #[test]
    fn append_on_a_value_selection() {
        let s = MArg::new(v("w"), MCo::sel("z", v("z")));
        let l = MCo::sel("x", v("x"));
        assert_eq!(append_co(&l, &s), MCo::sel("x", MTerm::with(v("x"), s.clone())));
    }
}
