//! Continuation-passing (CPS) and continuation-and-garbage-passing (CGPS)
//! translations into the target λ-calculus.
//!
//! All translations use the colon notation: `(T:K)` for CPS and `(T:G,K)`
//! for CGPS, with `t̄ = λk.(t:k)` and `t̄ = λgk.(t:g,k)` respectively.
//! Inputs are renamed apart first so that placing `G` or `K` under a
//! source binder can never capture.

use std::fmt;
use std::str::FromStr;

use crate::fresh::Fresh;
use crate::syntax::{rename_apart, Command, CoTerm, Expr, Term};
use crate::target::{GarbageKit, LamTerm};
use crate::types::{Ctx, Type};

pub mod sub;

pub use sub::{cgps_lj_opt, cgps_lj_simple, cgps_sub, colon_cgps_sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransKind {
    Cps,
    Cgps,
    CgpsLjms,
    CgpsLjm,
    CgpsLj,
    CgpsLjOpt,
    CpsSimple,
    CgpsLjSimple,
}

impl TransKind {
    pub const ALL: [TransKind; 8] = [
        TransKind::Cps,
        TransKind::Cgps,
        TransKind::CgpsLjms,
        TransKind::CgpsLjm,
        TransKind::CgpsLj,
        TransKind::CgpsLjOpt,
        TransKind::CpsSimple,
        TransKind::CgpsLjSimple,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TransKind::Cps => "cps",
            TransKind::Cgps => "cgps",
            TransKind::CgpsLjms => "cgps-ljms",
            TransKind::CgpsLjm => "cgps-ljm",
            TransKind::CgpsLj => "cgps-lj",
            TransKind::CgpsLjOpt => "cgps-lj-opt",
            TransKind::CpsSimple => "cps-simple",
            TransKind::CgpsLjSimple => "cgps-lj-simple",
        }
    }

    /// Whether the translation passes garbage.
    pub fn has_garbage(self) -> bool {
        !matches!(self, TransKind::Cps | TransKind::CpsSimple)
    }

    /// Whether implication uses the simplified `(A⊃B)* = Ā⊃B̄`.
    pub fn is_simple(self) -> bool {
        matches!(self, TransKind::CpsSimple | TransKind::CgpsLjSimple)
    }
}

impl fmt::Display for TransKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TransKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown translation kind `{s}`"))
    }
}

/// `A*` for the given kind.
pub fn star_type(a: &Type, kind: TransKind) -> Type {
    match a {
        Type::Var(_) | Type::Bot => a.clone(),
        Type::Arrow(l, r) if kind.is_simple() => Type::arrow(bar_type(l, kind), bar_type(r, kind)),
        Type::Arrow(l, r) => Type::arrow(Type::neg(bar_type(r, kind)), Type::neg(bar_type(l, kind))),
        Type::Forall(x, b) => Type::Forall(x.clone(), Box::new(bar_type(b, kind))),
    }
}

/// `Ā = ¬¬A*`, or `⊤ ⊃ ¬¬A*` when garbage is passed.
pub fn bar_type(a: &Type, kind: TransKind) -> Type {
    let nn = Type::neg(Type::neg(star_type(a, kind)));
    if kind.has_garbage() {
        Type::arrow(Type::top(), nn)
    } else {
        nn
    }
}

pub fn bar_ctx(ctx: &Ctx, kind: TransKind) -> Ctx {
    ctx.iter().map(|(x, a)| (x.clone(), bar_type(a, kind))).collect()
}

/// Supply of variables for the translations' own binders. Every name it
/// hands out is distinct from the others and from all names of the input.
#[derive(Clone, Debug)]
pub struct FreshSupply {
    fresh: Fresh,
}

impl FreshSupply {
    pub fn new(fresh: Fresh) -> Self {
        FreshSupply { fresh }
    }

    pub fn avoiding(names: impl IntoIterator<Item = String>) -> Self {
        let mut fresh = Fresh::new();
        fresh.avoid_all(names);
        FreshSupply { fresh }
    }

    pub fn var(&mut self, base: &str) -> String {
        self.fresh.name(base)
    }

    /// Rename `e` apart and reserve all of its names.
    pub fn prepare(&mut self, e: &Expr) -> Expr {
        let r = rename_apart(e, &mut self.fresh);
        self.fresh.avoid_all(r.all_names());
        self.fresh.avoid_all(r.all_tynames());
        r
    }
}

fn v(x: &str) -> LamTerm {
    LamTerm::var(x)
}

fn app2(f: LamTerm, a: LamTerm, b: LamTerm) -> LamTerm {
    LamTerm::app(LamTerm::app(f, a), b)
}

/// Plain CPS, full or with the simplified implication clauses.
pub struct Cps {
    pub sup: FreshSupply,
    pub simple: bool,
}

impl Cps {
    pub fn bar(&mut self, t: &Term) -> LamTerm {
        let k = self.sup.var("k");
        let body = self.term(t, v(&k));
        LamTerm::lam(&k, body)
    }

    pub fn term(&mut self, t: &Term, k: LamTerm) -> LamTerm {
        match t {
            Term::Var(x) => LamTerm::app(v(x), k),
            Term::Lam(x, b) if self.simple => LamTerm::app(k, LamTerm::lam(x, self.bar(b))),
            Term::Lam(x, b) => {
                let w = self.sup.var("w");
                let tb = self.bar(b);
                LamTerm::app(k, LamTerm::lam(&w, LamTerm::lam(x, LamTerm::app(v(&w), tb))))
            }
            Term::Coerce(c) => self.command(c, k),
            Term::TyLam(x, b) => LamTerm::app(k, LamTerm::tylam(x, self.bar(b))),
        }
    }

    /// The continuation `λm.m (l:K) ū`, or its variant for `B::l` and for
    /// the simplified translation.
    fn cons_cont(&mut self, head: Either<'_>, l: &CoTerm, k: LamTerm) -> LamTerm {
        let m = self.sup.var("m");
        let tl = self.coterm(l, k);
        let body = match head {
            Either::Term(u) if !self.simple => app2(v(&m), tl, self.bar(u)),
            Either::Term(u) => LamTerm::app(tl, LamTerm::app(v(&m), self.bar(u))),
            Either::Type(b) => LamTerm::app(tl, LamTerm::tyapp(v(&m), star_type(b, self.kind()))),
        };
        LamTerm::lam(&m, body)
    }

    fn kind(&self) -> TransKind {
        if self.simple {
            TransKind::CpsSimple
        } else {
            TransKind::Cps
        }
    }

    pub fn coterm(&mut self, l: &CoTerm, k: LamTerm) -> LamTerm {
        match l {
            CoTerm::Nil => {
                let w = self.sup.var("w");
                LamTerm::lam(&w, LamTerm::app(v(&w), k))
            }
            CoTerm::Cons(u, r) => {
                let w = self.sup.var("w");
                let c = self.cons_cont(Either::Term(u), r, k);
                LamTerm::lam(&w, LamTerm::app(v(&w), c))
            }
            CoTerm::TyCons(b, r) => {
                let w = self.sup.var("w");
                let c = self.cons_cont(Either::Type(b), r, k);
                LamTerm::lam(&w, LamTerm::app(v(&w), c))
            }
            CoTerm::Sel(x, c) => LamTerm::lam(x, self.command(c, k)),
        }
    }

    pub fn command(&mut self, c: &Command, k: LamTerm) -> LamTerm {
        match &c.tail {
            CoTerm::Nil => self.term(&c.head, k),
            CoTerm::Cons(u, r) => {
                let kk = self.cons_cont(Either::Term(u), r, k);
                self.term(&c.head, kk)
            }
            CoTerm::TyCons(b, r) => {
                let kk = self.cons_cont(Either::Type(b), r, k);
                self.term(&c.head, kk)
            }
            CoTerm::Sel(..) => {
                let f = self.coterm(&c.tail, k);
                LamTerm::app(f, self.bar(&c.head))
            }
        }
    }

    pub fn expr(&mut self, e: &Expr, k: LamTerm) -> LamTerm {
        match e {
            Expr::Term(t) => self.term(t, k),
            Expr::CoTerm(l) => self.coterm(l, k),
            Expr::Command(c) => self.command(c, k),
        }
    }
}

enum Either<'a> {
    Term(&'a Term),
    Type(&'a Type),
}

/// The CGPS translation of λJmse and its second-order extension.
pub struct Cgps {
    pub sup: FreshSupply,
    pub kit: GarbageKit,
}

impl Cgps {
    pub fn new(sup: FreshSupply) -> Self {
        Cgps { sup, kit: GarbageKit }
    }

    pub fn succ(&self, g: LamTerm) -> LamTerm {
        LamTerm::app(self.kit.s_comb(), g)
    }

    pub fn bar(&mut self, t: &Term) -> LamTerm {
        let g = self.sup.var("g");
        let k = self.sup.var("k");
        let body = self.term(t, v(&g), v(&k));
        LamTerm::lam(&g, LamTerm::lam(&k, body))
    }

    pub fn term(&mut self, t: &Term, g: LamTerm, k: LamTerm) -> LamTerm {
        match t {
            Term::Var(x) => app2(v(x), self.succ(g), k),
            Term::Lam(x, b) => {
                let w = self.sup.var("w");
                let tb = self.bar(b);
                let f = LamTerm::lam(&w, LamTerm::lam(x, LamTerm::app(v(&w), tb)));
                self.kit.pair(LamTerm::app(k, f), g)
            }
            Term::Coerce(c) => {
                let sg = self.succ(g);
                self.command(c, sg, k)
            }
            Term::TyLam(x, b) => {
                let tb = self.bar(b);
                self.kit.pair(LamTerm::app(k, LamTerm::tylam(x, tb)), g)
            }
        }
    }

    /// `λm.m (l:G,K) ū` or `λm.(l:G,K)(m B*)`.
    pub fn cons_cont_term(&mut self, u: &Term, l: &CoTerm, g: LamTerm, k: LamTerm) -> LamTerm {
        let m = self.sup.var("m");
        let tl = self.coterm(l, g, k);
        let tu = self.bar(u);
        LamTerm::lam(&m, app2(v(&m), tl, tu))
    }

    pub fn cons_cont_type(&mut self, b: &Type, l: &CoTerm, g: LamTerm, k: LamTerm) -> LamTerm {
        let m = self.sup.var("m");
        let tl = self.coterm(l, g, k);
        let arg = LamTerm::tyapp(v(&m), star_type(b, TransKind::Cgps));
        LamTerm::lam(&m, LamTerm::app(tl, arg))
    }

    pub fn coterm(&mut self, l: &CoTerm, g: LamTerm, k: LamTerm) -> LamTerm {
        match l {
            CoTerm::Nil => {
                let w = self.sup.var("w");
                LamTerm::lam(&w, app2(v(&w), g, k))
            }
            CoTerm::Cons(u, r) => {
                let w = self.sup.var("w");
                let c = self.cons_cont_term(u, r, g.clone(), k);
                LamTerm::lam(&w, app2(v(&w), g, c))
            }
            CoTerm::TyCons(b, r) => {
                let w = self.sup.var("w");
                let c = self.cons_cont_type(b, r, g.clone(), k);
                LamTerm::lam(&w, app2(v(&w), g, c))
            }
            CoTerm::Sel(x, c) => LamTerm::lam(x, self.command(c, g, k)),
        }
    }

    pub fn command(&mut self, c: &Command, g: LamTerm, k: LamTerm) -> LamTerm {
        match &c.tail {
            CoTerm::Nil => self.term(&c.head, g, k),
            CoTerm::Cons(u, r) => {
                let kk = self.cons_cont_term(u, r, g.clone(), k);
                self.term(&c.head, g, kk)
            }
            CoTerm::TyCons(b, r) => {
                let kk = self.cons_cont_type(b, r, g.clone(), k);
                self.term(&c.head, g, kk)
            }
            CoTerm::Sel(..) => {
                let f = self.coterm(&c.tail, g, k);
                LamTerm::app(f, self.bar(&c.head))
            }
        }
    }

    pub fn expr(&mut self, e: &Expr, g: LamTerm, k: LamTerm) -> LamTerm {
        match e {
            Expr::Term(t) => self.term(t, g, k),
            Expr::CoTerm(l) => self.coterm(l, g, k),
            Expr::Command(c) => self.command(c, g, k),
        }
    }
}

fn supply_for(e: &Expr, extra: &[&LamTerm]) -> (FreshSupply, Expr) {
    let mut sup = FreshSupply::avoiding(std::iter::empty());
    for t in extra {
        let mut names = Default::default();
        t.all_names(&mut names);
        sup.fresh.avoid_all(names);
    }
    let e2 = sup.prepare(e);
    (sup, e2)
}

/// `(T:K)`.
pub fn colon_cps(e: &Expr, k: &LamTerm) -> LamTerm {
    let (sup, e) = supply_for(e, &[k]);
    Cps { sup, simple: false }.expr(&e, k.clone())
}

/// `t̄ = λk.(t:k)`.
pub fn cps(t: &Term) -> LamTerm {
    let (sup, e) = supply_for(&Expr::Term(t.clone()), &[]);
    Cps { sup, simple: false }.bar(e.as_term().unwrap())
}

/// `(T:K)` with the simplified implication clauses.
pub fn colon_cps_simple(e: &Expr, k: &LamTerm) -> LamTerm {
    let (sup, e) = supply_for(e, &[k]);
    Cps { sup, simple: true }.expr(&e, k.clone())
}

pub fn cps_simple(t: &Term) -> LamTerm {
    let (sup, e) = supply_for(&Expr::Term(t.clone()), &[]);
    Cps { sup, simple: true }.bar(e.as_term().unwrap())
}

/// `(T:G,K)`.
pub fn colon_cgps(e: &Expr, g: &LamTerm, k: &LamTerm) -> LamTerm {
    let (sup, e) = supply_for(e, &[g, k]);
    Cgps::new(sup).expr(&e, g.clone(), k.clone())
}

/// `t̄ = λgk.(t:g,k)`.
pub fn cgps(t: &Term) -> LamTerm {
    let (sup, e) = supply_for(&Expr::Term(t.clone()), &[]);
    Cgps::new(sup).bar(e.as_term().unwrap())
}

/// Translate a λJmse term with one of the kinds that accept it.
pub fn translate(t: &Term, kind: TransKind) -> Option<LamTerm> {
    match kind {
        TransKind::Cps => Some(cps(t)),
        TransKind::Cgps => Some(cgps(t)),
        TransKind::CpsSimple => Some(cps_simple(t)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_coterm, parse_term, parse_type};
    use crate::target::{parse_lam, typecheck_lam};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    fn lam(s: &str) -> LamTerm {
        parse_lam(s).unwrap()
    }

    #[test]
    fn type_translations() {
        let x = ty("X");
        assert_eq!(bar_type(&x, TransKind::Cps), ty("(X->Bot)->Bot"));
        let got = star_type(&ty("X->Y"), TransKind::Cgps);
        let bar = |a: &str| format!("(Bot->Bot)->({a}->Bot)->Bot");
        let want = ty(&format!("(({})->Bot)->({})->Bot", bar("Y"), bar("X")));
        assert_eq!(got, want);
        assert_eq!(
            star_type(&ty("forall X. X"), TransKind::Cgps),
            ty("forall X. (Bot->Bot)->(X->Bot)->Bot")
        );
        let simple = star_type(&ty("X->Y"), TransKind::CpsSimple);
        assert_eq!(simple, ty("((X->Bot)->Bot)->(Y->Bot)->Bot"));
    }

    #[test]
    fn bar_contexts() {
        assert!(bar_ctx(&Ctx::new(), TransKind::Cps).is_empty());
        let g: Ctx = [("y".to_string(), ty("X"))].into();
        assert_eq!(bar_ctx(&g, TransKind::Cps)["y"], ty("(X->Bot)->Bot"));
        assert_eq!(bar_ctx(&g, TransKind::Cgps)["y"], ty("(Bot->Bot)->(X->Bot)->Bot"));
    }

    #[test]
    fn cps_clauses() {
        let k = LamTerm::var("K");
        assert_eq!(colon_cps(&parse_term("x").unwrap().into(), &k), lam("x K"));
        let got = colon_cps(&parse_coterm("u::[]").unwrap().into(), &k);
        assert!(got.alpha_eq(&lam("\\w.w (\\m.m (\\w1.w1 K) (\\k.u k))")));
        let a = cps(&parse_term("{y []}").unwrap());
        assert!(a.alpha_eq(&cps(&parse_term("y").unwrap())));
        assert!(a.alpha_eq(&lam("\\k.y k")));
    }

    #[test]
    fn cgps_clauses() {
        let (g, k) = (LamTerm::var("G"), LamTerm::var("K"));
        let s = GarbageKit.s_comb();
        let got = colon_cgps(&parse_term("x").unwrap().into(), &g, &k);
        assert_eq!(got, LamTerm::apps(LamTerm::var("x"), [LamTerm::app(s.clone(), g), k]));
        let y = cgps(&parse_term("y").unwrap());
        let want = LamTerm::lam(
            "g",
            LamTerm::lam("k", LamTerm::apps(LamTerm::var("y"), [LamTerm::app(s.clone(), LamTerm::var("g")), LamTerm::var("k")])),
        );
        assert!(y.alpha_eq(&want));
    }

    #[test]
    fn translations_are_typed() {
        let cases = [("\\x.x", "A->A"), ("\\f.\\x.{f x::[]}", "(A->B)->A->B"), ("\\x.{x (y) y []}", "A->A")];
        for (src, a) in cases {
            let t = parse_term(src).unwrap();
            for kind in [TransKind::Cps, TransKind::Cgps, TransKind::CpsSimple] {
                let img = translate(&t, kind).unwrap();
                assert_eq!(typecheck_lam(&Ctx::new(), &img, &bar_type(&ty(a), kind)), Ok(true), "{src} {kind}");
            }
        }
    }

    #[test]
    fn second_order_images_are_typed() {
        let t = parse_term("/\\X.\\x.x").unwrap();
        let a = ty("forall X. X->X");
        for kind in [TransKind::Cps, TransKind::Cgps] {
            let img = translate(&t, kind).unwrap();
            assert_eq!(typecheck_lam(&Ctx::new(), &img, &bar_type(&a, kind)), Ok(true));
        }
        let g: Ctx = [("f".to_string(), a.clone()), ("z".to_string(), ty("Y"))].into();
        let t = parse_term("{f <Y>::z::[]}").unwrap();
        let img = cgps(&t);
        let bg = bar_ctx(&g, TransKind::Cgps);
        assert_eq!(typecheck_lam(&bg, &img, &bar_type(&ty("Y"), TransKind::Cgps)), Ok(true));
    }

    #[test]
    fn no_capture_of_source_names() {
        // Source binders named like the translation's own variables.
        let t = parse_term("\\k.\\g.{k (m) {g m::[]} []}").unwrap();
        let a = ty("A->(A->B)->B");
        let img = cgps(&t);
        assert_eq!(typecheck_lam(&Ctx::new(), &img, &bar_type(&a, TransKind::Cgps)), Ok(true));
    }
}
