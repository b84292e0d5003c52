//! One-step reduction of λJmse (and λ2Jmse), traces and critical peaks.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::fresh::Fresh;
use crate::syntax::json::to_json;
use crate::syntax::{
    append, occurs_coterm, subst_command, ty_subst_term, Command, CoTerm, Expr, Term,
};
use crate::types::Type;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    Beta,
    Pi,
    Sigma,
    Mu,
    Eps,
    Beta2,
}

impl RuleName {
    pub const ALL: [RuleName; 6] = [
        RuleName::Beta,
        RuleName::Pi,
        RuleName::Sigma,
        RuleName::Mu,
        RuleName::Eps,
        RuleName::Beta2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Beta => "beta",
            RuleName::Pi => "pi",
            RuleName::Sigma => "sigma",
            RuleName::Mu => "mu",
            RuleName::Eps => "eps",
            RuleName::Beta2 => "beta2",
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleName,
    pub pos: Vec<usize>,
    pub from: Expr,
    pub to: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Normal,
    BoundExhausted,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub initial: Expr,
    pub steps: Vec<Step>,
    pub status: Status,
}

impl Trace {
    pub fn last(&self) -> &Expr {
        self.steps.last().map(|s| &s.to).unwrap_or(&self.initial)
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| json!({"rule": s.rule.as_str(), "pos": s.pos, "to": to_json(&s.to)}))
            .collect();
        json!({
            "initial": to_json(&self.initial),
            "steps": steps,
            "status": match self.status {
                Status::Normal => "normal",
                Status::BoundExhausted => "bound-exhausted",
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Random(u64),
}

/// `(λx.t)(u::l) → u((x)t l)`; renames `x` when it is free in `l`.
pub fn beta(x: &str, t: &Term, u: &Term, l: &CoTerm) -> Command {
    if occurs_coterm(x, l) {
        let mut f = Fresh::new();
        f.avoid_all(Expr::Term(t.clone()).all_names());
        f.avoid_all(Expr::CoTerm(l.clone()).all_names());
        let x2 = f.name(x);
        let body = crate::syntax::subst_term(&Term::Var(x2.clone()), x, t);
        Command::new(u.clone(), CoTerm::sel(&x2, Command::new(body, l.clone())))
    } else {
        Command::new(u.clone(), CoTerm::sel(x, Command::new(t.clone(), l.clone())))
    }
}

/// All contractions of a redex sitting at the root of `e`.
pub fn root_step(e: &Expr) -> Vec<(RuleName, Expr)> {
    let mut out = Vec::new();
    match e {
        Expr::Command(c) => {
            match (&c.head, &c.tail) {
                (Term::Lam(x, t), CoTerm::Cons(u, l)) => {
                    out.push((RuleName::Beta, Expr::Command(beta(x, t, u, l))));
                }
                (Term::TyLam(x, t), CoTerm::TyCons(b, l)) => {
                    let t2 = ty_subst_term(b, x, t);
                    out.push((RuleName::Beta2, Expr::Command(Command::new(t2, (**l).clone()))));
                }
                _ => {}
            }
            if let (Term::Coerce(inner), e_ctx) = (&c.head, &c.tail) {
                if e_ctx.is_eval_ctx() {
                    let l = append(&inner.tail, e_ctx);
                    out.push((RuleName::Pi, Expr::Command(Command::new(inner.head.clone(), l))));
                }
            }
            if let CoTerm::Sel(x, body) = &c.tail {
                out.push((RuleName::Sigma, Expr::Command(subst_command(&c.head, x, body))));
            }
        }
        Expr::CoTerm(CoTerm::Sel(x, c)) => {
            if matches!(&c.head, Term::Var(y) if y == x) && !occurs_coterm(x, &c.tail) {
                out.push((RuleName::Mu, Expr::CoTerm(c.tail.clone())));
            }
        }
        Expr::Term(Term::Coerce(c)) if c.tail == CoTerm::Nil => {
            out.push((RuleName::Eps, Expr::Term(c.head.clone())));
        }
        _ => {}
    }
    out
}

fn children(e: &Expr) -> Vec<Expr> {
    match e {
        Expr::Term(Term::Var(_)) => vec![],
        Expr::Term(Term::Lam(_, b)) | Expr::Term(Term::TyLam(_, b)) => {
            vec![Expr::Term((**b).clone())]
        }
        Expr::Term(Term::Coerce(c)) => vec![Expr::Command((**c).clone())],
        Expr::CoTerm(CoTerm::Nil) => vec![],
        Expr::CoTerm(CoTerm::Cons(u, l)) => {
            vec![Expr::Term((**u).clone()), Expr::CoTerm((**l).clone())]
        }
        // The type argument occupies slot 0 but holds no redex.
        Expr::CoTerm(CoTerm::TyCons(_, l)) => vec![Expr::CoTerm(CoTerm::Nil), Expr::CoTerm((**l).clone())],
        Expr::CoTerm(CoTerm::Sel(_, c)) => vec![Expr::Command((**c).clone())],
        Expr::Command(c) => vec![Expr::Term(c.head.clone()), Expr::CoTerm(c.tail.clone())],
    }
}

/// `e` with child `i` replaced by `new`.
pub fn replace_child(e: &Expr, i: usize, new: Expr) -> Expr {
    match (e, i, new) {
        (Expr::Term(Term::Lam(x, _)), 0, Expr::Term(b)) => Expr::Term(Term::Lam(x.clone(), Box::new(b))),
        (Expr::Term(Term::TyLam(x, _)), 0, Expr::Term(b)) => {
            Expr::Term(Term::TyLam(x.clone(), Box::new(b)))
        }
        (Expr::Term(Term::Coerce(_)), 0, Expr::Command(c)) => Expr::Term(Term::Coerce(Box::new(c))),
        (Expr::CoTerm(CoTerm::Cons(_, l)), 0, Expr::Term(u)) => {
            Expr::CoTerm(CoTerm::Cons(Box::new(u), l.clone()))
        }
        (Expr::CoTerm(CoTerm::Cons(u, _)), 1, Expr::CoTerm(l)) => {
            Expr::CoTerm(CoTerm::Cons(u.clone(), Box::new(l)))
        }
        (Expr::CoTerm(CoTerm::TyCons(b, _)), 1, Expr::CoTerm(l)) => {
            Expr::CoTerm(CoTerm::TyCons(b.clone(), Box::new(l)))
        }
        (Expr::CoTerm(CoTerm::Sel(x, _)), 0, Expr::Command(c)) => {
            Expr::CoTerm(CoTerm::Sel(x.clone(), Box::new(c)))
        }
        (Expr::Command(c), 0, Expr::Term(t)) => Expr::Command(Command::new(t, c.tail.clone())),
        (Expr::Command(c), 1, Expr::CoTerm(l)) => Expr::Command(Command::new(c.head.clone(), l)),
        (e, i, n) => panic!("ill-sorted replacement of child {i} of {e} by {n}"),
    }
}

/// Replace the sub-expression at `pos`.
pub fn replace_at(e: &Expr, pos: &[usize], new: Expr) -> Expr {
    match pos.split_first() {
        None => new,
        Some((&i, rest)) => {
            let child = children(e).swap_remove(i);
            replace_child(e, i, replace_at(&child, rest, new))
        }
    }
}

fn collect(e: &Expr, out: &mut Vec<(RuleName, Vec<usize>, Expr)>) {
    for (r, e2) in root_step(e) {
        out.push((r, Vec::new(), e2));
    }
    for (i, ch) in children(e).into_iter().enumerate() {
        let mut sub = Vec::new();
        collect(&ch, &mut sub);
        for (r, mut p, ch2) in sub {
            p.insert(0, i);
            out.push((r, p, replace_child(e, i, ch2)));
        }
    }
}

/// Every one-step reduct, root first, then children left to right.
pub fn all_steps(e: &Expr) -> Vec<Step> {
    let mut raw = Vec::new();
    collect(e, &mut raw);
    raw.into_iter()
        .map(|(rule, pos, to)| Step {
            rule,
            pos,
            from: e.clone(),
            to,
        })
        .collect()
}

/// Reducts only, without step metadata.
pub fn successors(e: &Expr) -> Vec<Expr> {
    let mut raw = Vec::new();
    collect(e, &mut raw);
    raw.into_iter().map(|(_, _, to)| to).collect()
}

pub fn successors_by(e: &Expr, rules: &[RuleName]) -> Vec<Expr> {
    let mut raw = Vec::new();
    collect(e, &mut raw);
    raw.into_iter()
        .filter(|(r, _, _)| rules.contains(r))
        .map(|(_, _, to)| to)
        .collect()
}

pub fn normalize(e: &Expr, strategy: Strategy, max_steps: usize) -> Trace {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::Leftmost => None,
    };
    let mut cur = e.clone();
    let mut steps = Vec::new();
    loop {
        let mut cands = all_steps(&cur);
        if cands.is_empty() {
            return Trace {
                initial: e.clone(),
                steps,
                status: Status::Normal,
            };
        }
        if steps.len() >= max_steps {
            return Trace {
                initial: e.clone(),
                steps,
                status: Status::BoundExhausted,
            };
        }
        let step = match rng.as_mut() {
            None => cands.swap_remove(0),
            Some(r) => cands.choose(r).unwrap().clone(),
        };
        cur = step.to.clone();
        steps.push(step);
    }
}

pub fn is_normal(e: &Expr, rules: &[RuleName]) -> bool {
    let mut raw = Vec::new();
    collect(e, &mut raw);
    raw.iter().all(|(r, _, _)| !rules.contains(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PeakFamily {
    PiPi,
    PiBeta,
    PiSigma,
    PiEpsOuter,
    PiEpsInner,
    MuSigmaOuter,
    MuSigmaInner,
}

impl PeakFamily {
    pub const ALL: [PeakFamily; 7] = [
        PeakFamily::PiPi,
        PeakFamily::PiBeta,
        PeakFamily::PiSigma,
        PeakFamily::PiEpsOuter,
        PeakFamily::PiEpsInner,
        PeakFamily::MuSigmaOuter,
        PeakFamily::MuSigmaInner,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PeakFamily::PiPi => "pi/pi",
            PeakFamily::PiBeta => "pi/beta",
            PeakFamily::PiSigma => "pi/sigma",
            PeakFamily::PiEpsOuter => "pi/eps {t[]}E",
            PeakFamily::PiEpsInner => "pi/eps {{tl}[]}",
            PeakFamily::MuSigmaOuter => "mu/sigma t(x)xl",
            PeakFamily::MuSigmaInner => "mu/sigma (x)x(y)c",
        }
    }

    /// Families whose two reducts coincide up to renaming.
    pub fn trivial(self) -> bool {
        matches!(
            self,
            PeakFamily::PiEpsOuter
                | PeakFamily::PiEpsInner
                | PeakFamily::MuSigmaOuter
                | PeakFamily::MuSigmaInner
        )
    }
}

#[derive(Clone, Debug)]
pub struct Peak {
    pub family: PeakFamily,
    pub expr: Expr,
    pub left: Step,
    pub right: Step,
}

fn v(x: &str) -> Term {
    Term::var(x)
}

fn pick_step(e: &Expr, rule: RuleName, pos: &[usize]) -> Step {
    all_steps(e)
        .into_iter()
        .find(|s| s.rule == rule && s.pos == pos)
        .unwrap_or_else(|| panic!("no {rule} step at {pos:?} in {e}"))
}

fn term_pool(depth: usize) -> Vec<Term> {
    let mut p = vec![v("x"), v("a")];
    if depth >= 1 {
        p.push(Term::lam("z", v("z")));
        p.push(Term::coerce(Command::new(v("a"), CoTerm::Nil)));
    }
    if depth >= 2 {
        p.push(Term::lam("z", v("a")));
        p.push(Term::coerce(Command::new(
            Term::lam("z", v("z")),
            CoTerm::cons(v("b"), CoTerm::Nil),
        )));
    }
    if depth >= 3 {
        p.push(Term::coerce(Command::new(v("a"), CoTerm::sel("q", Command::new(v("q"), CoTerm::Nil)))));
    }
    p
}

fn ctx_pool(depth: usize) -> Vec<CoTerm> {
    let mut p = vec![CoTerm::Nil, CoTerm::cons(v("u"), CoTerm::Nil)];
    if depth >= 1 {
        p.push(CoTerm::cons(v("u"), CoTerm::cons(v("w"), CoTerm::Nil)));
    }
    if depth >= 2 {
        p.push(CoTerm::cons(
            Term::lam("z", v("z")),
            CoTerm::sel("r", Command::new(v("r"), CoTerm::Nil)),
        ));
    }
    if depth >= 3 {
        p.push(CoTerm::cons(v("u"), CoTerm::sel("r", Command::new(v("c"), CoTerm::Nil))));
    }
    p
}

fn coterm_pool(depth: usize) -> Vec<CoTerm> {
    let mut p = ctx_pool(depth);
    p.push(CoTerm::sel("y", Command::new(v("y"), CoTerm::Nil)));
    if depth >= 1 {
        p.push(CoTerm::sel("y", Command::new(v("b"), CoTerm::cons(v("y"), CoTerm::Nil))));
    }
    if depth >= 2 {
        p.push(CoTerm::sel(
            "y",
            Command::new(v("y"), CoTerm::sel("q", Command::new(v("q"), CoTerm::Nil))),
        ));
    }
    p
}

fn eval_pool(depth: usize) -> Vec<CoTerm> {
    let mut p: Vec<CoTerm> = ctx_pool(depth).into_iter().filter(|l| l.is_eval_ctx()).collect();
    if depth >= 2 {
        p.push(CoTerm::tycons(Type::var("Y"), CoTerm::Nil));
    }
    p
}

/// Concrete instances of every overlap family, sampled from small pools.
///
/// The first instance of each family is fixed; `seed` picks the rest.
pub fn critical_peaks(depth: usize, seed: u64) -> Vec<Peak> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_family = 2 + 2 * depth;
    let ts = term_pool(depth);
    let ls = coterm_pool(depth);
    let es = eval_pool(depth);
    let mut out = Vec::new();
    for fam in PeakFamily::ALL {
        let mut exprs = vec![canonical_instance(fam)];
        for _ in 1..per_family {
            let t = ts.choose(&mut rng).unwrap().clone();
            let u = ts.choose(&mut rng).unwrap().clone();
            let l = ls.choose(&mut rng).unwrap().clone();
            let e1 = es.choose(&mut rng).unwrap().clone();
            let e2 = es.choose(&mut rng).unwrap().clone();
            exprs.push(instance(fam, t, u, l, e1, e2));
        }
        for expr in exprs {
            let (left, right) = match fam {
                PeakFamily::PiPi => (pick_step(&expr, RuleName::Pi, &[]), pick_step(&expr, RuleName::Pi, &[0, 0])),
                PeakFamily::PiBeta => (pick_step(&expr, RuleName::Pi, &[]), pick_step(&expr, RuleName::Beta, &[0, 0])),
                PeakFamily::PiSigma => (pick_step(&expr, RuleName::Pi, &[]), pick_step(&expr, RuleName::Sigma, &[0, 0])),
                PeakFamily::PiEpsOuter => (pick_step(&expr, RuleName::Pi, &[]), pick_step(&expr, RuleName::Eps, &[0])),
                PeakFamily::PiEpsInner => (pick_step(&expr, RuleName::Eps, &[]), pick_step(&expr, RuleName::Pi, &[0])),
                PeakFamily::MuSigmaOuter => (pick_step(&expr, RuleName::Sigma, &[]), pick_step(&expr, RuleName::Mu, &[1])),
                PeakFamily::MuSigmaInner => (pick_step(&expr, RuleName::Mu, &[]), pick_step(&expr, RuleName::Sigma, &[0])),
            };
            out.push(Peak {
                family: fam,
                expr,
                left,
                right,
            });
        }
    }
    out
}

fn canonical_instance(fam: PeakFamily) -> Expr {
    let uu = CoTerm::cons(v("u"), CoTerm::Nil);
    let vv = CoTerm::cons(v("v"), CoTerm::Nil);
    match fam {
        PeakFamily::PiPi => instance(fam, v("x"), v("u"), CoTerm::Nil, uu, vv),
        _ => instance(fam, v("x"), v("u"), CoTerm::Nil, vv, uu),
    }
}

fn instance(fam: PeakFamily, t: Term, u: Term, l: CoTerm, e1: CoTerm, e2: CoTerm) -> Expr {
    let cmd = |h: Term, l: CoTerm| Command::new(h, l);
    match fam {
        // {{t l}E'}E
        PeakFamily::PiPi => Expr::Command(cmd(
            Term::coerce(cmd(Term::coerce(cmd(t, l)), e1)),
            e2,
        )),
        // {(λx.t)(u::l)}E
        PeakFamily::PiBeta => Expr::Command(cmd(
            Term::coerce(cmd(Term::lam("x", t), CoTerm::cons(u, l))),
            e1,
        )),
        // {u(x)t l}E
        PeakFamily::PiSigma => Expr::Command(cmd(
            Term::coerce(cmd(u, CoTerm::sel("x", cmd(t, l)))),
            e1,
        )),
        // {t[]}E
        PeakFamily::PiEpsOuter => Expr::Command(cmd(Term::coerce(cmd(t, CoTerm::Nil)), e1)),
        // {{t l}[]}
        PeakFamily::PiEpsInner => Expr::Term(Term::coerce(cmd(Term::coerce(cmd(t, l)), CoTerm::Nil))),
        // t(x)x l, x not in l
        PeakFamily::MuSigmaOuter => {
            let l = if occurs_coterm("x", &l) { CoTerm::Nil } else { l };
            Expr::Command(cmd(t, CoTerm::sel("x", cmd(v("x"), l))))
        }
        // (x)x(y)c, x not in (y)c
        PeakFamily::MuSigmaInner => {
            let c = cmd(t, l);
            let sel = CoTerm::sel("y", c);
            let sel = if occurs_coterm("x", &sel) {
                CoTerm::sel("y", cmd(v("y"), CoTerm::Nil))
            } else {
                sel
            };
            Expr::CoTerm(CoTerm::sel("x", cmd(v("x"), sel)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term};

    fn e(s: &str) -> Expr {
        Expr::Term(parse_term(s).unwrap())
    }

    #[test]
    fn root_beta() {
        let c = Command::new(Term::lam("x", v("x")), CoTerm::cons(v("y"), CoTerm::Nil));
        let r = root_step(&Expr::Command(c));
        let want = Command::new(v("y"), CoTerm::sel("x", Command::new(v("x"), CoTerm::Nil)));
        assert_eq!(r, vec![(RuleName::Beta, Expr::Command(want))]);
    }

    #[test]
    fn root_mu_and_eps() {
        let sel = CoTerm::sel("x", Command::new(v("x"), CoTerm::Nil));
        assert_eq!(root_step(&Expr::CoTerm(sel)), vec![(RuleName::Mu, Expr::CoTerm(CoTerm::Nil))]);
        let r = root_step(&e("{y []}"));
        assert_eq!(r, vec![(RuleName::Eps, Expr::Term(v("y")))]);
    }

    #[test]
    fn closure_under_lambda() {
        let s = all_steps(&e("\\x.{y []}"));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].rule, RuleName::Eps);
        assert_eq!(s[0].pos, vec![0]);
        assert!(all_steps(&e("x")).is_empty());
    }

    #[test]
    fn overlap_of_pi_and_eps() {
        let s = all_steps(&e("{{t0 []} u::[]}"));
        let rules: Vec<_> = s.iter().map(|s| (s.rule, s.pos.clone())).collect();
        assert!(rules.contains(&(RuleName::Pi, vec![0])));
        assert!(rules.contains(&(RuleName::Eps, vec![0, 0])));
    }

    #[test]
    fn steps_replay_at_their_positions() {
        let t = e("{(\\x.{x []}) {(\\z.z) a::[]}::(y) y []}");
        for s in all_steps(&t) {
            let sub = t.at(&s.pos).unwrap();
            let reducts = root_step(&sub);
            let hit = reducts
                .into_iter()
                .filter(|(r, _)| *r == s.rule)
                .any(|(_, r)| replace_at(&t, &s.pos, r) == s.to);
            assert!(hit, "{:?}", s);
        }
    }

    #[test]
    fn normalize_identity_application() {
        let tr = normalize(&e("{(\\x.x) y::[]}"), Strategy::Leftmost, 100);
        assert_eq!(tr.status, Status::Normal);
        assert_eq!(*tr.last(), Expr::Term(v("y")));
        let rules: Vec<_> = tr.steps.iter().map(|s| s.rule).collect();
        assert_eq!(rules, vec![RuleName::Beta, RuleName::Sigma, RuleName::Eps]);
        let tr0 = normalize(&e("x"), Strategy::Random(3), 0);
        assert_eq!(tr0.status, Status::Normal);
        assert!(tr0.steps.is_empty());
    }

    #[test]
    fn normal_forms() {
        let bpse = [RuleName::Beta, RuleName::Pi, RuleName::Sigma, RuleName::Eps];
        let bps = [RuleName::Beta, RuleName::Pi, RuleName::Sigma];
        assert!(is_normal(&e("{x u::[]}"), &bpse));
        assert!(!is_normal(&e("{y []}"), &bpse));
        let c = Expr::Command(Command::new(Term::lam("x", v("x")), CoTerm::Nil));
        assert!(is_normal(&c, &bps));
    }

    #[test]
    fn self_overlap_of_pi() {
        let peaks = critical_peaks(1, 0);
        let p = peaks.iter().find(|p| p.family == PeakFamily::PiPi).unwrap();
        // L = {x []}(u::v::[]) → ..., R = {x(u::[])}(v::[])
        let l = Expr::Command(Command::new(
            Term::coerce(Command::new(v("x"), CoTerm::Nil)),
            CoTerm::cons(v("u"), CoTerm::cons(v("v"), CoTerm::Nil)),
        ));
        let r = Expr::Command(Command::new(
            Term::coerce(Command::new(v("x"), CoTerm::cons(v("u"), CoTerm::Nil))),
            CoTerm::cons(v("v"), CoTerm::Nil),
        ));
        assert_eq!(p.left.to, l);
        assert_eq!(p.right.to, r);
    }

    #[test]
    fn trivial_families_coincide() {
        for p in critical_peaks(3, 11) {
            if p.family.trivial() {
                assert!(alpha_eq(&p.left.to, &p.right.to), "{}", p.expr);
            }
        }
    }
}
