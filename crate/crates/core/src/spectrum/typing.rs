//! Type inference for the subsystem calculi, on the shared unifier.

use std::collections::BTreeSet;

use super::lambda::LTerm;
use super::lj::{JArg, JTerm};
use super::ljm::{MCo, MTerm};
use super::ljms::{SCo, STerm};
use super::SpecTerm;
use crate::typing::{Reason, TypeError};
use crate::types::{Ctx, Type};
use crate::unify::{Namer, UTy, Unifier, UnifyError};

type Res<T> = Result<T, TypeError>;

struct Tc<'a> {
    u: Unifier,
    base: &'a Ctx,
    vars: Vec<(String, UTy)>,
    path: Vec<usize>,
}

impl<'a> Tc<'a> {
    fn new(base: &'a Ctx) -> Self {
        Tc {
            u: Unifier::new(),
            base,
            vars: Vec::new(),
            path: Vec::new(),
        }
    }

    fn err(&self, reason: Reason) -> TypeError {
        TypeError {
            reason,
            pos: self.path.clone(),
        }
    }

    fn unify(&mut self, a: &UTy, b: &UTy) -> Res<()> {
        self.u.unify(a, b).map_err(|e| {
            self.err(match e {
                UnifyError::Clash => Reason::Clash,
                UnifyError::Occurs => Reason::Occurs,
                UnifyError::Escape => Reason::Level,
            })
        })
    }

    fn at<T>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> Res<T>) -> Res<T> {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn bind<T>(&mut self, x: &str, a: UTy, f: impl FnOnce(&mut Self) -> Res<T>) -> Res<T> {
        self.vars.push((x.to_string(), a));
        let r = f(self);
        self.vars.pop();
        r
    }

    fn lookup(&self, x: &str) -> Res<UTy> {
        if let Some((_, a)) = self.vars.iter().rev().find(|(n, _)| n == x) {
            return Ok(a.clone());
        }
        self.base
            .get(x)
            .map(UTy::from_type)
            .ok_or_else(|| self.err(Reason::UnboundVar))
    }

    /// `t : A ⊃ B` with fresh `A`, `B`.
    fn split(&mut self, f: &UTy) -> Res<(UTy, UTy)> {
        let a = self.u.meta();
        let b = self.u.meta();
        self.unify(f, &UTy::arrow(a.clone(), b.clone()))?;
        Ok((a, b))
    }

    fn lambda(&mut self, t: &LTerm) -> Res<UTy> {
        match t {
            LTerm::Var(x) => self.lookup(x),
            LTerm::Lam(x, b) => {
                let a = self.u.meta();
                let r = self.bind(x, a.clone(), |tc| tc.at(0, |tc| tc.lambda(b)))?;
                Ok(UTy::arrow(a, r))
            }
            LTerm::App(f, a) => {
                let tf = self.at(0, |tc| tc.lambda(f))?;
                let ta = self.at(1, |tc| tc.lambda(a))?;
                let r = self.u.meta();
                self.unify(&tf, &UTy::arrow(ta, r.clone()))?;
                Ok(r)
            }
        }
    }

    fn lj(&mut self, t: &JTerm) -> Res<UTy> {
        match t {
            JTerm::Var(x) => self.lookup(x),
            JTerm::Lam(x, b) => {
                let a = self.u.meta();
                let r = self.bind(x, a.clone(), |tc| tc.at(0, |tc| tc.lj(b)))?;
                Ok(UTy::arrow(a, r))
            }
            JTerm::GApp(f, r) => {
                let tf = self.at(0, |tc| tc.lj(f))?;
                let (a, b) = self.split(&tf)?;
                self.lj_arg(r, &a, b)
            }
        }
    }

    /// `(u,x.v)` against a function of type `A ⊃ B`; returns the result type.
    fn lj_arg(&mut self, r: &JArg, a: &UTy, b: UTy) -> Res<UTy> {
        let tu = self.at(1, |tc| tc.lj(&r.u))?;
        self.at(1, |tc| tc.unify(&tu, a))?;
        self.bind(&r.x, b, |tc| tc.at(2, |tc| tc.lj(&r.v)))
    }

    fn ljm(&mut self, t: &MTerm) -> Res<UTy> {
        match t {
            MTerm::Var(x) => self.lookup(x),
            MTerm::Lam(x, b) => {
                let a = self.u.meta();
                let r = self.bind(x, a.clone(), |tc| tc.at(0, |tc| tc.ljm(b)))?;
                Ok(UTy::arrow(a, r))
            }
            MTerm::GMApp(f, r) => {
                let tf = self.at(0, |tc| tc.ljm(f))?;
                let (a, b) = self.split(&tf)?;
                let tu = self.at(1, |tc| tc.ljm(&r.u))?;
                self.at(1, |tc| tc.unify(&tu, &a))?;
                self.at(2, |tc| tc.ljm_co(&r.l, b))
            }
        }
    }

    /// `l : A ⊢ B`: given `A`, returns `B`.
    fn ljm_co(&mut self, l: &MCo, input: UTy) -> Res<UTy> {
        match l {
            MCo::Cons(u, l) => {
                let (a, b) = self.split(&input)?;
                let tu = self.at(0, |tc| tc.ljm(u))?;
                self.at(0, |tc| tc.unify(&tu, &a))?;
                self.at(1, |tc| tc.ljm_co(l, b))
            }
            MCo::Sel(x, v) => self.bind(x, input, |tc| tc.at(0, |tc| tc.ljm(v))),
        }
    }

    fn ljms(&mut self, t: &STerm) -> Res<UTy> {
        match t {
            STerm::Var(x) => self.lookup(x),
            STerm::Lam(x, b) => {
                let a = self.u.meta();
                let r = self.bind(x, a.clone(), |tc| tc.at(0, |tc| tc.ljms(b)))?;
                Ok(UTy::arrow(a, r))
            }
            STerm::Cut(h, l) => {
                let a = self.at(0, |tc| tc.ljms(h))?;
                self.at(1, |tc| tc.ljms_co(l, a))
            }
        }
    }

    fn ljms_co(&mut self, l: &SCo, input: UTy) -> Res<UTy> {
        match l {
            SCo::Cons(u, l) => {
                let (a, b) = self.split(&input)?;
                let tu = self.at(0, |tc| tc.ljms(u))?;
                self.at(0, |tc| tc.unify(&tu, &a))?;
                self.at(1, |tc| tc.ljms_co(l, b))
            }
            SCo::Sel(x, v) => self.bind(x, input, |tc| tc.at(0, |tc| tc.ljms(v))),
        }
    }

    /// Type of a term, or `A ⊃ B` encoding a co-term sequent `l : A ⊢ B`.
    fn any(&mut self, t: &SpecTerm) -> Res<UTy> {
        match t {
            SpecTerm::Lambda(t) => self.lambda(t),
            SpecTerm::J(t) => self.lj(t),
            SpecTerm::Jm(t) => self.ljm(t),
            SpecTerm::Jms(t) => self.ljms(t),
            SpecTerm::JArg(r) => {
                let a = self.u.meta();
                let b = self.u.meta();
                let c = self.lj_arg(r, &a, b.clone())?;
                Ok(UTy::arrow(UTy::arrow(a, b), c))
            }
            SpecTerm::JmArg(r) => {
                let a = self.u.meta();
                let b = self.u.meta();
                let tu = self.at(0, |tc| tc.ljm(&r.u))?;
                self.unify(&tu, &a)?;
                let c = self.at(1, |tc| tc.ljm_co(&r.l, b.clone()))?;
                Ok(UTy::arrow(UTy::arrow(a, b), c))
            }
            SpecTerm::JmCo(l) => {
                let a = self.u.meta();
                let b = self.ljm_co(l, a.clone())?;
                Ok(UTy::arrow(a, b))
            }
            SpecTerm::JmsCo(l) => {
                let a = self.u.meta();
                let b = self.ljms_co(l, a.clone())?;
                Ok(UTy::arrow(a, b))
            }
        }
    }
}

fn avoid(ctx: &Ctx) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in ctx.values() {
        a.all_vars(&mut out);
    }
    out
}

/// Principal type of a term. Co-terms and generalised arguments get the
/// type `A ⊃ B` of their sequent `_ : A ⊢ B`.
pub fn infer_spec(ctx: &Ctx, t: &SpecTerm) -> Result<Type, TypeError> {
    let mut tc = Tc::new(ctx);
    let a = tc.any(t)?;
    tc.u.to_type(&a, &mut Namer::new(avoid(ctx))).ok_or_else(|| tc.err(Reason::Level))
}

/// Does `t` have type `ty`? Type variables in `ty` are rigid.
pub fn check_spec(ctx: &Ctx, t: &SpecTerm, ty: &Type) -> Result<bool, TypeError> {
    let mut tc = Tc::new(ctx);
    let a = tc.any(t)?;
    tc.unify(&a, &UTy::from_type(ty))?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn generalised_application() {
        // f : A->B, a : A ⊢ f(a, y.y) : B
        let ctx: Ctx = [("f".to_string(), ty("A->B")), ("a".to_string(), ty("A"))].into();
        let t = SpecTerm::J(JTerm::gapp(JTerm::var("f"), JTerm::var("a"), "y", JTerm::var("y")));
        assert!(infer_spec(&ctx, &t).unwrap().alpha_eq(&ty("B")));
        assert_eq!(check_spec(&ctx, &t, &ty("A")).unwrap_err().reason, Reason::Clash);
    }

    #[test]
    fn coterm_sequents() {
        let l = SpecTerm::JmsCo(SCo::cons(STerm::var("a"), SCo::sel("y", STerm::var("y"))));
        let ctx: Ctx = [("a".to_string(), ty("A"))].into();
        let got = infer_spec(&ctx, &l).unwrap();
        assert!(matches!(got, Type::Arrow(..)), "{got}");
        assert!(check_spec(&ctx, &l, &ty("(A->B)->B")).unwrap());
    }

    #[test]
    fn unbound_variables_are_reported_with_positions() {
        let t = SpecTerm::Jm(MTerm::lam("x", MTerm::app(MTerm::var("x"), MTerm::var("z"), MCo::sel("y", MTerm::var("y")))));
        let e = infer_spec(&Ctx::new(), &t).unwrap_err();
        assert_eq!(e.reason, Reason::UnboundVar);
        assert_eq!(e.pos, vec![0, 1]);
    }
}
