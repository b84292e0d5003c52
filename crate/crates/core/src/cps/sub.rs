//! Garbage-passing translations of the subsystems λJms, λJm and λJ, and
//! the two variants of the λJ translation.

use std::collections::BTreeSet;

use super::{app2, v, Cgps, FreshSupply, TransKind};
use crate::fresh::Fresh;
use crate::spectrum::{JTerm, MCo, MTerm, SCo, STerm, SpecTerm};
use crate::target::LamTerm;

/// Which λJ clauses to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LjMode {
    Plain,
    Opt,
    Simple,
}

impl Cgps {
    fn lam_clause(&mut self, x: &str, tb: LamTerm, g: LamTerm, k: LamTerm) -> LamTerm {
        let w = self.sup.var("w");
        let f = LamTerm::lam(&w, LamTerm::lam(x, LamTerm::app(v(&w), tb)));
        self.kit.pair(LamTerm::app(k, f), g)
    }

    /// `λm.m L ū`.
    fn cont(&mut self, tl: LamTerm, tu: LamTerm) -> LamTerm {
        let m = self.sup.var("m");
        LamTerm::lam(&m, app2(v(&m), tl, tu))
    }

    /// `λw.wG(λm.m(l:G,K)ū)` once the continuation is built.
    fn cons_clause(&mut self, g: LamTerm, c: LamTerm) -> LamTerm {
        let w = self.sup.var("w");
        LamTerm::lam(&w, app2(v(&w), g, c))
    }

    fn wrap_bar(&mut self, body: impl FnOnce(&mut Self, LamTerm, LamTerm) -> LamTerm) -> LamTerm {
        let g = self.sup.var("g");
        let k = self.sup.var("k");
        let b = body(self, v(&g), v(&k));
        LamTerm::lam(&g, LamTerm::lam(&k, b))
    }

    // λJms

    pub fn jms_bar(&mut self, t: &STerm) -> LamTerm {
        self.wrap_bar(|s, g, k| s.jms_term(t, g, k))
    }

    pub fn jms_term(&mut self, t: &STerm, g: LamTerm, k: LamTerm) -> LamTerm {
        match t {
            STerm::Var(x) => app2(v(x), self.succ(g), k),
            STerm::Lam(x, b) => {
                let tb = self.jms_bar(b);
                self.lam_clause(x, tb, g, k)
            }
            STerm::Cut(t, l) => {
                let sg = self.succ(g);
                self.jms_cut(t, l, sg, k)
            }
        }
    }

    /// `(tl;G,K)`.
    pub fn jms_cut(&mut self, t: &STerm, l: &SCo, g: LamTerm, k: LamTerm) -> LamTerm {
        match l {
            SCo::Sel(..) => {
                let f = self.jms_co(l, g, k);
                LamTerm::app(f, self.jms_bar(t))
            }
            SCo::Cons(u, r) => {
                let tl = self.jms_co(r, g.clone(), k);
                let tu = self.jms_bar(u);
                let c = self.cont(tl, tu);
                self.jms_term(t, g, c)
            }
        }
    }

    pub fn jms_co(&mut self, l: &SCo, g: LamTerm, k: LamTerm) -> LamTerm {
        match l {
            SCo::Cons(u, r) => {
                let tl = self.jms_co(r, g.clone(), k);
                let tu = self.jms_bar(u);
                let c = self.cont(tl, tu);
                self.cons_clause(g, c)
            }
            SCo::Sel(x, body) => {
                let b = match &**body {
                    STerm::Cut(t, l) => self.jms_cut(t, l, g, k),
                    value => self.jms_term(value, g, k),
                };
                LamTerm::lam(x, b)
            }
        }
    }

    // λJm

    pub fn jm_bar(&mut self, t: &MTerm) -> LamTerm {
        self.wrap_bar(|s, g, k| s.jm_term(t, g, k))
    }

    /// `(t:G, λm.m(l:G,K)ū)`.
    fn jm_gapp(&mut self, t: &MTerm, u: &MTerm, l: &MCo, g: LamTerm, k: LamTerm) -> LamTerm {
        let tl = self.jm_co(l, g.clone(), k);
        let tu = self.jm_bar(u);
        let c = self.cont(tl, tu);
        self.jm_term(t, g, c)
    }

    pub fn jm_term(&mut self, t: &MTerm, g: LamTerm, k: LamTerm) -> LamTerm {
        match t {
            MTerm::Var(x) => app2(v(x), self.succ(g), k),
            MTerm::Lam(x, b) => {
                let tb = self.jm_bar(b);
                self.lam_clause(x, tb, g, k)
            }
            MTerm::GMApp(t, r) => {
                let sg = self.succ(g);
                self.jm_gapp(t, &r.u, &r.l, sg, k)
            }
        }
    }

    pub fn jm_co(&mut self, l: &MCo, g: LamTerm, k: LamTerm) -> LamTerm {
        match l {
            MCo::Cons(u, r) => {
                let tl = self.jm_co(r, g.clone(), k);
                let tu = self.jm_bar(u);
                let c = self.cont(tl, tu);
                self.cons_clause(g, c)
            }
            MCo::Sel(x, body) => {
                let b = match &**body {
                    MTerm::GMApp(t, r) => self.jm_gapp(t, &r.u, &r.l, g, k),
                    value => self.jm_term(value, g, k),
                };
                LamTerm::lam(x, b)
            }
        }
    }

    // λJ

    fn lj_bar(&mut self, t: &JTerm, mode: LjMode) -> LamTerm {
        self.wrap_bar(|s, g, k| s.lj_term(t, g, k, mode))
    }

    fn lj_term(&mut self, t: &JTerm, g: LamTerm, k: LamTerm, mode: LjMode) -> LamTerm {
        match t {
            JTerm::Var(x) if mode == LjMode::Plain => app2(v(x), self.succ(g), k),
            JTerm::Var(x) => app2(v(x), g, k),
            JTerm::Lam(x, b) if mode == LjMode::Simple => {
                let tb = self.lj_bar(b, mode);
                self.kit.pair(LamTerm::app(k, LamTerm::lam(x, tb)), g)
            }
            JTerm::Lam(x, b) => {
                let tb = self.lj_bar(b, mode);
                self.lam_clause(x, tb, g, k)
            }
            JTerm::GApp(t, r) => {
                let sg = self.succ(g.clone());
                let inner = if mode == LjMode::Plain && r.v.is_value() {
                    sg.clone()
                } else {
                    g
                };
                let body = LamTerm::lam(&r.x, self.lj_term(&r.v, inner, k, mode));
                let tu = self.lj_bar(&r.u, mode);
                let c = if mode == LjMode::Simple {
                    let m = self.sup.var("m");
                    LamTerm::lam(&m, LamTerm::app(body, LamTerm::app(v(&m), tu)))
                } else {
                    self.cont(body, tu)
                };
                self.lj_term(t, sg, c, mode)
            }
        }
    }
}

fn spec_names(t: &SpecTerm) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    match t {
        SpecTerm::Lambda(t) => t.all_names(&mut out),
        SpecTerm::J(t) => t.all_names(&mut out),
        SpecTerm::JArg(r) => r.all_names(&mut out),
        SpecTerm::Jm(t) => t.all_names(&mut out),
        SpecTerm::JmCo(l) => l.all_names(&mut out),
        SpecTerm::JmArg(r) => r.all_names(&mut out),
        SpecTerm::Jms(t) => t.all_names(&mut out),
        SpecTerm::JmsCo(l) => l.all_names(&mut out),
    }
    out
}

/// Rename the binders of `t` apart from everything in sight, reserving
/// every name of the result for the translation's own binders.
fn prepare(t: &SpecTerm, extra: &[&LamTerm]) -> (Cgps, SpecTerm) {
    let mut used = spec_names(t);
    for e in extra {
        e.all_names(&mut used);
    }
    let mut fresh = Fresh::with_avoid(used);
    let r = match t {
        SpecTerm::J(t) => SpecTerm::J(t.rename_apart(&mut fresh)),
        SpecTerm::Jm(t) => SpecTerm::Jm(t.rename_apart(&mut fresh)),
        SpecTerm::JmCo(l) => SpecTerm::JmCo(l.rename_apart(&mut fresh)),
        SpecTerm::Jms(t) => SpecTerm::Jms(t.rename_apart(&mut fresh)),
        SpecTerm::JmsCo(l) => SpecTerm::JmsCo(l.rename_apart(&mut fresh)),
        other => other.clone(),
    };
    (Cgps::new(FreshSupply::new(fresh)), r)
}

fn lj_mode(kind: TransKind) -> Option<LjMode> {
    match kind {
        TransKind::CgpsLj => Some(LjMode::Plain),
        TransKind::CgpsLjOpt => Some(LjMode::Opt),
        TransKind::CgpsLjSimple => Some(LjMode::Simple),
        _ => None,
    }
}

/// `(T:G,K)` for a subsystem term or co-term under `kind`. `None` when the
/// kind does not apply to the calculus of `t`.
pub fn colon_cgps_sub(t: &SpecTerm, g: &LamTerm, k: &LamTerm, kind: TransKind) -> Option<LamTerm> {
    let (mut c, t) = prepare(t, &[g, k]);
    let (g, k) = (g.clone(), k.clone());
    match (&t, kind) {
        (SpecTerm::Jms(t), TransKind::CgpsLjms) => Some(c.jms_term(t, g, k)),
        (SpecTerm::JmsCo(l), TransKind::CgpsLjms) => Some(c.jms_co(l, g, k)),
        (SpecTerm::Jm(t), TransKind::CgpsLjm) => Some(c.jm_term(t, g, k)),
        (SpecTerm::JmCo(l), TransKind::CgpsLjm) => Some(c.jm_co(l, g, k)),
        (SpecTerm::J(t), kind) => Some(c.lj_term(t, g, k, lj_mode(kind)?)),
        _ => None,
    }
}

/// `t̄ = λgk.(t:g,k)` for a subsystem term under `kind`.
pub fn cgps_sub(t: &SpecTerm, kind: TransKind) -> Option<LamTerm> {
    let (mut c, t) = prepare(t, &[]);
    match (&t, kind) {
        (SpecTerm::Jms(t), TransKind::CgpsLjms) => Some(c.jms_bar(t)),
        (SpecTerm::Jm(t), TransKind::CgpsLjm) => Some(c.jm_bar(t)),
        (SpecTerm::J(t), kind) => Some(c.lj_bar(t, lj_mode(kind)?)),
        _ => None,
    }
}

/// The optimized λJ translation, where variables do not bump the garbage.
pub fn cgps_lj_opt(t: &JTerm) -> LamTerm {
    cgps_sub(&SpecTerm::J(t.clone()), TransKind::CgpsLjOpt).unwrap()
}

/// The λJ translation with the simplified implication clauses.
pub fn cgps_lj_simple(t: &JTerm) -> LamTerm {
    cgps_sub(&SpecTerm::J(t.clone()), TransKind::CgpsLjSimple).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::cgps;
    use crate::spectrum::{parse_spec, to_ljmse, Calculus};
    use crate::target::parse_lam;

    fn coherent(c: Calculus, src: &str, kind: TransKind) {
        let t = parse_spec(c, src).unwrap();
        let direct = cgps_sub(&t, kind).unwrap();
        let e = to_ljmse(&t).unwrap();
        let via = cgps(e.as_term().unwrap());
        assert!(direct.alpha_eq(&via), "{src}:\n{direct}\nvs\n{via}");
    }

    #[test]
    fn subsystem_translations_agree_with_the_full_one() {
        coherent(Calculus::Jms, "(\\x.x) a::(y)y", TransKind::CgpsLjms);
        coherent(Calculus::Jms, "f (x)x a::(y)\\z.y", TransKind::CgpsLjms);
        coherent(Calculus::Jm, "f(a, b::(x)x(c, (y)y))", TransKind::CgpsLjm);
        coherent(Calculus::J, "f(a, x.x(b, y.\\z.y))", TransKind::CgpsLj);
        coherent(Calculus::J, "(\\x.x)(a, y.y)", TransKind::CgpsLj);
    }

    #[test]
    fn lj_variants() {
        let t = match parse_spec(Calculus::J, "f(a, x.x)").unwrap() {
            SpecTerm::J(t) => t,
            _ => unreachable!(),
        };
        let g = LamTerm::var("G");
        let k = LamTerm::var("K");
        let got = colon_cgps_sub(&SpecTerm::J(t.clone()), &g, &k, TransKind::CgpsLjOpt).unwrap();
        let want = parse_lam("f (s G) (\\m. m (\\x. x G K) (\\g. \\k. a g k))").unwrap();
        let s = crate::target::GarbageKit.s_comb();
        let want = want.subst("s", &s);
        assert!(got.alpha_eq(&want), "{got}");
        let simple = colon_cgps_sub(&SpecTerm::J(t), &g, &k, TransKind::CgpsLjSimple).unwrap();
        let want = parse_lam("f (s G) (\\m. (\\x. x G K) (m (\\g. \\k. a g k)))").unwrap().subst("s", &s);
        assert!(simple.alpha_eq(&want), "{simple}");
    }

    #[test]
    fn wrong_calculus_is_rejected() {
        let t = parse_spec(Calculus::Jm, "f(a, (x)x)").unwrap();
        assert!(cgps_sub(&t, TransKind::CgpsLjms).is_none());
        assert!(cgps_sub(&t, TransKind::Cgps).is_none());
    }
}
