//! Typing for λJmse and its second-order extension.
//!
//! Propositional inference is constraint generation plus unification.
//! Second-order terms are handled by a bidirectional checker on top of the
//! same engine: `ΛX` opens a skolem, `<B>::l` instantiates a known `∀`,
//! and a `∀`-type is only ever synthesized by closing over a skolem.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::reduction::Step;
use crate::syntax::{Class, Command, CoTerm, Expr, Term};
use crate::types::{Ctx, Type};
use crate::unify::{Namer, UTy, Unifier, UnifyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    UnboundVar,
    Clash,
    Occurs,
    /// A type variable used outside its scope, including violations of the
    /// eigenvariable condition on `ΛX`.
    Level,
    NotSynthesizable,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::UnboundVar => "unbound-var",
            Reason::Clash => "clash",
            Reason::Occurs => "occurs",
            Reason::Level => "level",
            Reason::NotSynthesizable => "not-synthesizable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct TypeError {
    pub reason: Reason,
    pub pos: Vec<usize>,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}", self.reason.as_str(), self.pos)
    }
}

impl TypeError {
    pub fn to_json(&self) -> Value {
        json!({"error": {"reason": self.reason.as_str(), "pos": self.pos}})
    }
}

/// A derived sequent. `in_type` is present exactly for co-terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub kind: Class,
    pub ctx: Ctx,
    pub subject: Expr,
    pub in_type: Option<Type>,
    pub out_type: Type,
}

impl Judgement {
    pub fn to_json(&self) -> Value {
        match &self.in_type {
            Some(a) => json!({"in": a.to_string(), "type": self.out_type.to_string()}),
            None => json!({"type": self.out_type.to_string()}),
        }
    }
}

type Res<T> = Result<T, TypeError>;

struct Tc<'a> {
    u: Unifier,
    base: &'a Ctx,
    vars: Vec<(String, UTy)>,
    tyenv: Vec<(String, UTy)>,
    path: Vec<usize>,
}

impl<'a> Tc<'a> {
    fn new(base: &'a Ctx) -> Self {
        Tc {
            u: Unifier::new(),
            base,
            vars: Vec::new(),
            tyenv: Vec::new(),
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

    fn ty(&self, a: &Type) -> UTy {
        let env: HashMap<String, UTy> = self.tyenv.iter().cloned().collect();
        UTy::from_type_in(a, &env)
    }

    fn lookup(&self, x: &str) -> Res<UTy> {
        if let Some((_, a)) = self.vars.iter().rev().find(|(n, _)| n == x) {
            return Ok(a.clone());
        }
        match self.base.get(x) {
            Some(a) => Ok(UTy::from_type(a)),
            None => Err(self.err(Reason::UnboundVar)),
        }
    }

    /// `X` must not be free in the type of any variable in scope.
    fn eigen_ok(&self, x: &str) -> Res<()> {
        let mut seen = BTreeSet::new();
        for (n, a) in self.vars.iter().rev() {
            if seen.insert(n.clone()) && self.u.free_names(a).contains(x) {
                return Err(self.err(Reason::Level));
            }
        }
        for (n, a) in self.base {
            if !seen.contains(n) && a.free_vars().contains(x) {
                return Err(self.err(Reason::Level));
            }
        }
        Ok(())
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

    fn synth(&mut self, t: &Term) -> Res<UTy> {
        match t {
            Term::Var(x) => self.lookup(x),
            Term::Lam(x, b) => {
                let a = self.u.meta();
                let r = self.bind(x, a.clone(), |tc| tc.at(0, |tc| tc.synth(b)))?;
                Ok(UTy::arrow(a, r))
            }
            Term::TyLam(x, b) => {
                self.eigen_ok(x)?;
                let s = self.u.enter_skolem();
                self.tyenv.push((x.clone(), s.clone()));
                let r = self.at(0, |tc| tc.synth(b));
                self.tyenv.pop();
                self.u.leave();
                let r = r?;
                Ok(self.u.generalize(&s, &r, x))
            }
            Term::Coerce(c) => {
                let b = self.u.meta();
                self.at(0, |tc| tc.command(c, &b))?;
                Ok(b)
            }
        }
    }

    fn check(&mut self, t: &Term, want: &UTy) -> Res<()> {
        match (t, self.u.head(want)) {
            (Term::Lam(x, b), UTy::Arrow(a, r)) => {
                self.bind(x, *a, |tc| tc.at(0, |tc| tc.check(b, &r)))
            }
            (Term::Lam(..), UTy::Meta(_)) => {
                let a = self.u.meta();
                let r = self.u.meta();
                self.unify(want, &UTy::arrow(a, r))?;
                self.check(t, want)
            }
            (Term::Lam(..), _) => Err(self.err(Reason::Clash)),
            (Term::TyLam(x, b), UTy::Forall(y, body)) => {
                self.eigen_ok(x)?;
                let s = self.u.enter_skolem();
                self.tyenv.push((x.clone(), s.clone()));
                let r = self.at(0, |tc| tc.check(b, &body.subst_name(&y, &s)));
                self.tyenv.pop();
                self.u.leave();
                r
            }
            (Term::TyLam(..), UTy::Meta(_)) => {
                let a = self.synth(t)?;
                self.unify(want, &a)
            }
            (Term::TyLam(..), _) => Err(self.err(Reason::Clash)),
            (Term::Coerce(c), _) => self.at(0, |tc| tc.command(c, want)),
            (Term::Var(_), _) => {
                let a = self.synth(t)?;
                self.unify(&a, want)
            }
        }
    }

    fn command(&mut self, c: &Command, out: &UTy) -> Res<()> {
        // A λ-head applied to an argument: learn the argument's type first
        // so that a polymorphic argument can be used at several instances.
        if let (Term::Lam(..), CoTerm::Cons(u, rest)) = (&c.head, &c.tail) {
            let saved = self.u.clone();
            let attempt = (|| {
                let a = self.at(1, |tc| tc.at(0, |tc| tc.synth(u)))?;
                let b = self.u.meta();
                self.at(0, |tc| tc.check(&c.head, &UTy::arrow(a, b.clone())))?;
                self.at(1, |tc| tc.at(1, |tc| tc.coterm(rest, &b, out)))
            })();
            match attempt {
                Ok(()) => return Ok(()),
                Err(_) => {
                    self.u = saved;
                }
            }
        }
        let a = self.at(0, |tc| tc.synth(&c.head))?;
        self.at(1, |tc| tc.coterm(&c.tail, &a, out))
    }

    fn coterm(&mut self, l: &CoTerm, inp: &UTy, out: &UTy) -> Res<()> {
        match l {
            CoTerm::Nil => self.unify(inp, out),
            CoTerm::Cons(u, r) => match self.u.head(inp) {
                UTy::Arrow(a, b) => {
                    self.at(0, |tc| tc.check(u, &a))?;
                    self.at(1, |tc| tc.coterm(r, &b, out))
                }
                UTy::Meta(_) => {
                    let a = self.u.meta();
                    let b = self.u.meta();
                    self.unify(inp, &UTy::arrow(a, b))?;
                    self.coterm(l, inp, out)
                }
                _ => Err(self.err(Reason::Clash)),
            },
            CoTerm::TyCons(bty, r) => match self.u.head(inp) {
                UTy::Forall(x, body) => {
                    let b = self.ty(bty);
                    let inst = body.subst_name(&x, &b);
                    self.at(1, |tc| tc.coterm(r, &inst, out))
                }
                UTy::Meta(_) => Err(self.err(Reason::NotSynthesizable)),
                _ => Err(self.err(Reason::Clash)),
            },
            CoTerm::Sel(x, c) => self.bind(x, inp.clone(), |tc| tc.at(0, |tc| tc.command(c, out))),
        }
    }

    fn namer(&self, e: &Expr) -> Namer {
        let mut avoid = e.all_tynames();
        for a in self.base.values() {
            a.all_vars(&mut avoid);
        }
        Namer::new(avoid)
    }

    fn read(&self, a: &UTy, names: &mut Namer) -> Res<Type> {
        self.u.to_type(a, names).ok_or_else(|| self.err(Reason::Level))
    }
}

/// Principal type of a term.
pub fn infer_term(ctx: &Ctx, t: &Term) -> Result<Type, TypeError> {
    let mut tc = Tc::new(ctx);
    let a = tc.synth(t)?;
    let mut names = tc.namer(&Expr::Term(t.clone()));
    tc.read(&a, &mut names)
}

/// The type `B` with `Γ | l : A ⊢ B`.
pub fn check_coterm(ctx: &Ctx, l: &CoTerm, in_type: &Type) -> Result<Type, TypeError> {
    let mut tc = Tc::new(ctx);
    let out = tc.u.meta();
    tc.coterm(l, &UTy::from_type(in_type), &out)?;
    let mut names = tc.namer(&Expr::CoTerm(l.clone()));
    tc.read(&out, &mut names)
}

pub fn check_command(ctx: &Ctx, c: &Command, out_type: &Type) -> Result<bool, TypeError> {
    let mut tc = Tc::new(ctx);
    tc.command(c, &UTy::from_type(out_type))?;
    Ok(true)
}

/// Checking mode, at either level. Accepts a term or a command.
pub fn check_level2(ctx: &Ctx, e: &Expr, ty: &Type) -> Result<bool, TypeError> {
    let mut tc = Tc::new(ctx);
    let want = UTy::from_type(ty);
    match e {
        Expr::Term(t) => tc.check(t, &want)?,
        Expr::Command(c) => tc.command(c, &want)?,
        Expr::CoTerm(_) => return Err(tc.err(Reason::NotSynthesizable)),
    }
    Ok(true)
}

/// Most general judgement for any expression class.
pub fn judge(ctx: &Ctx, e: &Expr) -> Result<Judgement, TypeError> {
    let mut tc = Tc::new(ctx);
    let (inp, out) = match e {
        Expr::Term(t) => (None, tc.synth(t)?),
        Expr::Command(c) => {
            let b = tc.u.meta();
            tc.command(c, &b)?;
            (None, b)
        }
        Expr::CoTerm(l) => {
            let a = tc.u.meta();
            let b = tc.u.meta();
            tc.coterm(l, &a, &b)?;
            (Some(a), b)
        }
    };
    let mut names = tc.namer(e);
    let in_type = match inp {
        Some(a) => Some(tc.read(&a, &mut names)?),
        None => None,
    };
    let out_type = tc.read(&out, &mut names)?;
    Ok(Judgement {
        kind: e.class(),
        ctx: ctx.clone(),
        subject: e.clone(),
        in_type,
        out_type,
    })
}

/// Does `e` admit the judgement `j` (same class, given types, rigid)?
pub fn admits(j: &Judgement, e: &Expr) -> bool {
    let mut tc = Tc::new(&j.ctx);
    let out = UTy::from_type(&j.out_type);
    let r = match (e, &j.in_type) {
        (Expr::Term(t), None) => tc.check(t, &out),
        (Expr::Command(c), None) => tc.command(c, &out),
        (Expr::CoTerm(l), Some(a)) => tc.coterm(l, &UTy::from_type(a), &out),
        _ => return false,
    };
    r.is_ok()
}

/// The reduct of `step` has the (most general) type of its source.
pub fn subject_reduction_check(ctx: &Ctx, e: &Expr, step: &Step) -> bool {
    match judge(ctx, e) {
        Ok(j) => admits(&j, &step.to),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{all_steps, RuleName};
    use crate::syntax::{parse_command, parse_coterm, parse_term, parse_type};

    fn ctx(items: &[(&str, &str)]) -> Ctx {
        items
            .iter()
            .map(|(x, a)| (x.to_string(), parse_type(a).unwrap()))
            .collect()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn inference_examples() {
        let id = infer_term(&Ctx::new(), &parse_term("\\x.x").unwrap()).unwrap();
        assert!(id.alpha_eq(&ty("A->A")));
        let g = ctx(&[("y", "X")]);
        assert_eq!(infer_term(&g, &parse_term("{y []}").unwrap()).unwrap(), ty("X"));
        let t = parse_term("{(\\x.x) (\\z.z)::[]}").unwrap();
        let a = infer_term(&Ctx::new(), &t).unwrap();
        assert!(matches!(a, Type::Arrow(ref l, ref r) if l == r));
    }

    #[test]
    fn coterm_examples() {
        assert_eq!(check_coterm(&Ctx::new(), &CoTerm::Nil, &ty("X")).unwrap(), ty("X"));
        let g = ctx(&[("u", "X")]);
        let l = parse_coterm("u::[]").unwrap();
        assert_eq!(check_coterm(&g, &l, &ty("X->Y")).unwrap(), ty("Y"));
        let l = parse_coterm("<Y>::[]").unwrap();
        assert_eq!(check_coterm(&Ctx::new(), &l, &ty("forall X. X")).unwrap(), ty("Y"));
        let e = check_coterm(&g, &parse_coterm("u::[]").unwrap(), &ty("X")).unwrap_err();
        assert_eq!(e.reason, Reason::Clash);
    }

    #[test]
    fn command_examples() {
        let g = ctx(&[("x", "X")]);
        let c = parse_command("x []").unwrap();
        assert_eq!(check_command(&g, &c, &ty("X")), Ok(true));
        assert_eq!(check_command(&g, &c, &ty("Y")).unwrap_err().reason, Reason::Clash);
        let g = ctx(&[("y", "X")]);
        let c = parse_command("(\\x.x) y::[]").unwrap();
        assert_eq!(check_command(&g, &c, &ty("X")), Ok(true));
    }

    #[test]
    fn unbound_and_occurs() {
        let e = infer_term(&Ctx::new(), &parse_term("\\x.y").unwrap()).unwrap_err();
        assert_eq!(e, TypeError { reason: Reason::UnboundVar, pos: vec![0] });
        let e = infer_term(&Ctx::new(), &parse_term("\\x.{x x::[]}").unwrap()).unwrap_err();
        assert_eq!(e.reason, Reason::Occurs);
    }

    #[test]
    fn level2_examples() {
        let t: Expr = parse_term("/\\X.\\x.x").unwrap().into();
        assert_eq!(check_level2(&Ctx::new(), &t, &ty("forall X. X->X")), Ok(true));
        let g = ctx(&[("y", "X")]);
        let t: Expr = parse_term("/\\X.y").unwrap().into();
        let e = check_level2(&g, &t, &ty("forall X. X")).unwrap_err();
        assert_eq!(e.reason, Reason::Level);
        let g = ctx(&[("z", "Y")]);
        let c: Expr = parse_command("(/\\X.\\x.x) <Y>::z::[]").unwrap().into();
        assert_eq!(check_level2(&g, &c, &ty("Y")), Ok(true));
    }

    #[test]
    fn polymorphic_argument_is_used_twice() {
        let g = ctx(&[("a", "A"), ("b", "B"), ("id", "forall X. X->X")]);
        let t: Expr = parse_term("{(\\f.{(\\p.{f <B>::b::[]}) {f <A>::a::[]}::[]}) id::[]}")
            .unwrap()
            .into();
        assert_eq!(check_level2(&g, &t, &ty("B")), Ok(true));
        assert!(check_level2(&g, &t, &ty("A")).is_err());
    }

    #[test]
    fn domain_free_generalization_is_monomorphic_in_the_domain() {
        // Without annotations `ΛX.λx.x` synthesizes `∀X.α→α` for one α.
        let g = ctx(&[("a", "A"), ("b", "B")]);
        let t: Expr = parse_term("{(\\f.{(\\p.{f <B>::b::[]}) {f <A>::a::[]}::[]}) (/\\X.\\x.x)::[]}")
            .unwrap()
            .into();
        assert!(check_level2(&g, &t, &ty("B")).is_err());
        let t: Expr = parse_term("{(\\f.{f <B>::b::[]}) (/\\X.\\x.x)::[]}").unwrap().into();
        assert_eq!(check_level2(&g, &t, &ty("B")), Ok(true));
    }

    #[test]
    fn head_of_unknown_type_cannot_be_instantiated() {
        let t = parse_term("\\x.{x <Y>::[]}").unwrap();
        let e = infer_term(&Ctx::new(), &t).unwrap_err();
        assert_eq!(e.reason, Reason::NotSynthesizable);
        assert_eq!(e.pos, vec![0, 0, 1]);
    }

    #[test]
    fn subject_reduction_examples() {
        let g = ctx(&[("y", "X")]);
        for src in ["(\\x.x) y::[]", "{y []} []"] {
            let e: Expr = parse_command(src).unwrap().into();
            for s in all_steps(&e) {
                assert!(subject_reduction_check(&g, &e, &s), "{src} via {}", s.rule);
            }
        }
        let e: Expr = parse_term("{y []}").unwrap().into();
        let steps = all_steps(&e);
        assert_eq!(steps[0].rule, RuleName::Eps);
        assert!(subject_reduction_check(&g, &e, &steps[0]));
    }

    #[test]
    fn judgement_for_coterm_has_both_types() {
        let j = judge(&Ctx::new(), &parse_coterm("(x) x []").unwrap().into()).unwrap();
        assert_eq!(j.in_type, Some(j.out_type.clone()));
        assert_eq!(j.to_json()["type"], j.out_type.to_string());
    }
}
