//! Derivation-directed generation of well-typed terms.
//!
//! A goal type is fixed first and a rule whose conclusion fits is chosen at
//! every node, so outputs are typable by construction. When the budget runs
//! out the generator closes goals with variables, adding free ones to the
//! context as needed. Inside `ΛX` a free variable whose type mentions `X`
//! is declared with the quantifier outside and instantiated in place, so
//! contexts never mention bound type variables.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::GenConfig;
use crate::fresh::Fresh;
use crate::spectrum::{Calculus, JArg, JTerm, LTerm, MCo, MTerm, SCo, STerm, SpecTerm};
use crate::syntax::{Command, CoTerm, Expr, Level, Term};
use crate::types::{Ctx, Type};

const BASE: [&str; 2] = ["P", "Q"];
const FREE: [&str; 6] = ["a", "b", "c", "f", "h", "p"];

type Env = Vec<(String, Type)>;

struct Gen {
    rng: ChaCha8Rng,
    names: Fresh,
    tynames: Fresh,
    free: Ctx,
    level2: bool,
}

impl Gen {
    fn new(seed: u64, level2: bool) -> Gen {
        let mut tynames = Fresh::new();
        tynames.avoid_all(BASE);
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            names: Fresh::new(),
            tynames,
            free: Ctx::new(),
            level2,
        }
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn split(&mut self, n: usize) -> usize {
        if n <= 1 {
            1
        } else {
            self.rng.gen_range(1..n)
        }
    }

    fn ty(&mut self, depth: usize, scope: &[String]) -> Type {
        if depth == 0 || self.chance(0.45) {
            let mut atoms: Vec<String> = BASE.iter().map(|s| s.to_string()).collect();
            atoms.extend(scope.iter().cloned());
            return Type::Var(atoms.choose(&mut self.rng).unwrap().clone());
        }
        let a = self.ty(depth - 1, scope);
        let b = self.ty(depth - 1, scope);
        Type::arrow(a, b)
    }

    /// A goal type, quantified at the outermost position at level 2.
    fn goal(&mut self, depth: usize, scope: &[String]) -> Type {
        if self.level2 && self.chance(0.4) {
            let x = self.tynames.name("X");
            let mut inner = scope.to_vec();
            inner.push(x.clone());
            let body = self.ty(depth, &inner);
            Type::forall(&x, body)
        } else {
            self.ty(depth, scope)
        }
    }

    fn binder(&mut self) -> String {
        let base = ["x", "y", "z", "w"].choose(&mut self.rng).unwrap();
        self.names.name(base)
    }

    /// A free variable of type `a`, reused when one already exists.
    fn free_var(&mut self, a: &Type) -> String {
        let existing: Vec<String> = self
            .free
            .iter()
            .filter(|(_, b)| b.alpha_eq(a))
            .map(|(x, _)| x.clone())
            .collect();
        if !existing.is_empty() && self.chance(0.6) {
            return existing.choose(&mut self.rng).unwrap().clone();
        }
        let base = FREE.choose(&mut self.rng).unwrap();
        let x = self.names.name(base);
        self.free.insert(x.clone(), a.clone());
        x
    }

    fn in_scope(&self, env: &Env, a: &Type) -> Vec<String> {
        let shadowed: BTreeSet<&String> = env.iter().map(|(x, _)| x).collect();
        let mut out: Vec<String> = env.iter().filter(|(_, b)| b.alpha_eq(a)).map(|(x, _)| x.clone()).collect();
        out.extend(
            self.free
                .iter()
                .filter(|(x, b)| b.alpha_eq(a) && !shadowed.contains(x))
                .map(|(x, _)| x.clone()),
        );
        out
    }

    // λJmse

    fn leaf(&mut self, env: &Env, scope: &[String], a: &Type) -> Term {
        let cands = self.in_scope(env, a);
        if !cands.is_empty() && self.chance(0.8) {
            return Term::Var(cands.choose(&mut self.rng).unwrap().clone());
        }
        let fv = a.free_vars();
        let local: Vec<String> = scope.iter().filter(|x| fv.contains(*x)).cloned().collect();
        if local.is_empty() {
            return Term::Var(self.free_var(a));
        }
        let general = local.iter().rev().fold(a.clone(), |acc, x| Type::forall(x, acc));
        let p = self.free_var(&general);
        let tail = local
            .iter()
            .rev()
            .fold(CoTerm::Nil, |l, x| CoTerm::tycons(Type::var(x), l));
        Term::coerce(Command::new(Term::Var(p), tail))
    }

    fn term(&mut self, env: &Env, scope: &[String], a: &Type, n: usize) -> Term {
        if let Type::Forall(x, d) = a {
            if n >= 2 && self.chance(0.85) {
                let x2 = self.tynames.name(x);
                let d2 = d.subst(x, &Type::var(&x2));
                let mut inner = scope.to_vec();
                inner.push(x2.clone());
                return Term::tylam(&x2, self.term(env, &inner, &d2, n - 1));
            }
            return self.leaf(env, scope, a);
        }
        if n <= 1 {
            return self.leaf(env, scope, a);
        }
        let lam_ok = matches!(a, Type::Arrow(..));
        let r = self.rng.gen_range(0..10);
        if lam_ok && r < 4 {
            let Type::Arrow(a1, a2) = a else { unreachable!() };
            let x = self.binder();
            let mut env2 = env.clone();
            env2.push((x.clone(), (**a1).clone()));
            return Term::lam(&x, self.term(&env2, scope, a2, n - 1));
        }
        if n >= 4 && r < 9 {
            if self.chance(0.25) {
                let t = self.term(env, scope, a, n - 3);
                return Term::coerce(Command::new(t, CoTerm::Nil));
            }
            return Term::coerce(self.command(env, scope, a, n - 1));
        }
        self.leaf(env, scope, a)
    }

    fn command(&mut self, env: &Env, scope: &[String], b: &Type, n: usize) -> Command {
        let n = n.max(3);
        let budget = n - 1;
        let mut kinds = vec!["var", "beta", "beta", "pi", "sigma", "sigma"];
        if self.level2 {
            kinds.extend(["beta2", "beta2"]);
        }
        match *kinds.choose(&mut self.rng).unwrap() {
            "beta" => {
                let c1 = self.ty(1, scope);
                let c2 = if self.chance(0.6) { b.clone() } else { self.ty(1, scope) };
                let x = self.binder();
                let mut env2 = env.clone();
                env2.push((x.clone(), c1.clone()));
                let k = self.split(budget.saturating_sub(2).max(2));
                let body = self.term(&env2, scope, &c2, k);
                let rest = budget.saturating_sub(k + 1).max(2);
                let j = self.split(rest);
                let u = self.term(env, scope, &c1, j);
                let l = self.coterm(env, scope, &c2, b, rest - j, true);
                Command::new(Term::lam(&x, body), CoTerm::cons(u, l))
            }
            "pi" => {
                let c = if self.chance(0.5) {
                    b.clone()
                } else {
                    Type::arrow(self.ty(1, scope), b.clone())
                };
                let k = self.split(budget);
                let head = Term::coerce(self.command(env, scope, &c, k.max(3)));
                let l = self.coterm(env, scope, &c, b, budget.saturating_sub(k), false);
                Command::new(head, l)
            }
            "sigma" => {
                let c = self.ty(1, scope);
                let k = self.split(budget);
                let head = self.term(env, scope, &c, k);
                let l = self.selection(env, scope, &c, b, budget.saturating_sub(k));
                Command::new(head, l)
            }
            "beta2" => {
                let x = self.tynames.name("X");
                let mut inner = scope.to_vec();
                inner.push(x.clone());
                let d = self.ty(1, &inner);
                let arg = if self.chance(0.5) { b.clone() } else { self.ty(1, scope) };
                let k = self.split(budget.saturating_sub(1).max(2));
                let body = self.term(env, &inner, &d, k);
                let d2 = d.subst(&x, &arg);
                let l = self.coterm(env, scope, &d2, b, budget.saturating_sub(k + 1), true);
                Command::new(Term::tylam(&x, body), CoTerm::tycons(arg, l))
            }
            _ => {
                let mut heads: Vec<(String, Type)> = env.clone();
                heads.extend(self.free.iter().map(|(x, a)| (x.clone(), a.clone())));
                let c = if !heads.is_empty() && self.chance(0.6) {
                    heads.choose(&mut self.rng).unwrap().1.clone()
                } else {
                    Type::arrow(self.ty(1, scope), b.clone())
                };
                let head = self.leaf(env, scope, &c);
                let l = self.coterm(env, scope, &c, b, budget.saturating_sub(1), true);
                Command::new(head, l)
            }
        }
    }

    fn selection(&mut self, env: &Env, scope: &[String], c: &Type, b: &Type, n: usize) -> CoTerm {
        let x = self.binder();
        if self.chance(0.4) {
            let l = self.coterm(env, scope, c, b, n.saturating_sub(2), true);
            return CoTerm::sel(&x, Command::new(Term::Var(x.clone()), l));
        }
        let mut env2 = env.clone();
        env2.push((x.clone(), c.clone()));
        CoTerm::sel(&x, self.command(&env2, scope, b, n.saturating_sub(1)))
    }

    /// A co-term `Γ | C ⊢ l : B`; with `allow_sel` false the outer
    /// constructor is an evaluation context.
    fn coterm(&mut self, env: &Env, scope: &[String], c: &Type, b: &Type, n: usize, allow_sel: bool) -> CoTerm {
        let same = c.alpha_eq(b);
        if same && (n <= 1 || self.chance(0.6)) {
            return CoTerm::Nil;
        }
        match c {
            Type::Arrow(c1, c2) if !allow_sel || n <= 2 || self.chance(0.6) => {
                let k = self.split(n.saturating_sub(1).max(1));
                let u = self.term(env, scope, c1, k);
                let l = self.coterm(env, scope, c2, b, n.saturating_sub(k + 1), true);
                CoTerm::cons(u, l)
            }
            Type::Forall(x, d) if !allow_sel || self.chance(0.7) => {
                let arg = if self.chance(0.5) { b.clone() } else { self.ty(1, scope) };
                let d2 = d.subst(x, &arg);
                CoTerm::tycons(arg, self.coterm(env, scope, &d2, b, n.saturating_sub(1), true))
            }
            _ if same => CoTerm::Nil,
            _ if !allow_sel => unreachable!("evaluation context requested for {c} against {b}"),
            _ if n <= 3 => {
                let x = self.binder();
                let z = self.leaf(env, scope, b);
                CoTerm::sel(&x, Command::new(z, CoTerm::Nil))
            }
            _ => self.selection(env, scope, c, b, n),
        }
    }

    // Subsystems

    fn spec_leaf(&mut self, env: &Env, a: &Type) -> String {
        let cands = self.in_scope(env, a);
        if !cands.is_empty() && self.chance(0.8) {
            cands.choose(&mut self.rng).unwrap().clone()
        } else {
            self.free_var(a)
        }
    }

    fn with(&self, env: &Env, x: &str, a: &Type) -> Env {
        let mut env2 = env.clone();
        env2.push((x.to_string(), a.clone()));
        env2
    }

    fn lambda(&mut self, env: &Env, a: &Type, n: usize) -> LTerm {
        if n <= 1 {
            return LTerm::Var(self.spec_leaf(env, a));
        }
        match (a, self.rng.gen_range(0..10)) {
            (Type::Arrow(a1, a2), r) if r < 4 => {
                let x = self.binder();
                let env2 = self.with(env, &x, a1);
                LTerm::lam(&x, self.lambda(&env2, a2, n - 1))
            }
            (_, r) if r < 9 && n >= 3 => {
                let c = self.ty(1, &[]);
                let k = self.split(n - 1);
                let f = Type::arrow(c.clone(), a.clone());
                let t = self.lambda(env, &f, k);
                let u = self.lambda(env, &c, n - 1 - k);
                LTerm::app(t, u)
            }
            _ => LTerm::Var(self.spec_leaf(env, a)),
        }
    }

    fn lj(&mut self, env: &Env, a: &Type, n: usize) -> JTerm {
        if n <= 1 {
            return JTerm::Var(self.spec_leaf(env, a));
        }
        match (a, self.rng.gen_range(0..10)) {
            (Type::Arrow(a1, a2), r) if r < 4 => {
                let x = self.binder();
                let env2 = self.with(env, &x, a1);
                JTerm::lam(&x, self.lj(&env2, a2, n - 1))
            }
            (_, r) if r < 9 && n >= 4 => {
                let c1 = self.ty(1, &[]);
                let c2 = if self.chance(0.5) { a.clone() } else { self.ty(1, &[]) };
                let budget = n - 1;
                let k = self.split(budget.saturating_sub(2).max(1));
                let t = self.lj(env, &Type::arrow(c1.clone(), c2.clone()), k);
                let rest = budget.saturating_sub(k).max(2);
                let j = self.split(rest);
                let u = self.lj(env, &c1, j);
                let x = self.binder();
                let env2 = self.with(env, &x, &c2);
                let v = self.lj(&env2, a, rest - j);
                JTerm::with(t, JArg::new(u, &x, v))
            }
            _ => JTerm::Var(self.spec_leaf(env, a)),
        }
    }

    fn ljm(&mut self, env: &Env, a: &Type, n: usize) -> MTerm {
        if n <= 1 {
            return MTerm::Var(self.spec_leaf(env, a));
        }
        match (a, self.rng.gen_range(0..10)) {
            (Type::Arrow(a1, a2), r) if r < 4 => {
                let x = self.binder();
                let env2 = self.with(env, &x, a1);
                MTerm::lam(&x, self.ljm(&env2, a2, n - 1))
            }
            (_, r) if r < 9 && n >= 4 => {
                let c1 = self.ty(1, &[]);
                let c2 = if self.chance(0.5) { a.clone() } else { self.ty(1, &[]) };
                let budget = n - 1;
                let k = self.split(budget.saturating_sub(2).max(1));
                let t = self.ljm(env, &Type::arrow(c1.clone(), c2.clone()), k);
                let rest = budget.saturating_sub(k).max(2);
                let j = self.split(rest);
                let u = self.ljm(env, &c1, j);
                let l = self.ljm_co(env, &c2, a, rest - j);
                MTerm::app(t, u, l)
            }
            _ => MTerm::Var(self.spec_leaf(env, a)),
        }
    }

    fn ljm_co(&mut self, env: &Env, c: &Type, a: &Type, n: usize) -> MCo {
        let x = self.binder();
        match c {
            Type::Arrow(c1, c2) if n >= 3 && self.chance(0.5) => {
                let k = self.split(n - 1);
                let u = self.ljm(env, c1, k);
                MCo::cons(u, self.ljm_co(env, c2, a, n - 1 - k))
            }
            Type::Arrow(c1, c2) if n >= 5 && self.chance(0.5) => {
                let k = self.split(n - 3);
                let u = self.ljm(env, c1, k);
                let l = self.ljm_co(env, c2, a, n - 3 - k);
                MCo::sel(&x, MTerm::app(MTerm::Var(x.clone()), u, l))
            }
            _ => {
                let env2 = self.with(env, &x, c);
                MCo::sel(&x, self.ljm(&env2, a, n.saturating_sub(1)))
            }
        }
    }

    fn ljms(&mut self, env: &Env, a: &Type, n: usize) -> STerm {
        if n <= 1 {
            return STerm::Var(self.spec_leaf(env, a));
        }
        match (a, self.rng.gen_range(0..10)) {
            (Type::Arrow(a1, a2), r) if r < 4 => {
                let x = self.binder();
                let env2 = self.with(env, &x, a1);
                STerm::lam(&x, self.ljms(&env2, a2, n - 1))
            }
            (_, r) if r < 9 && n >= 3 => {
                let c = if self.chance(0.6) {
                    Type::arrow(self.ty(1, &[]), a.clone())
                } else {
                    self.ty(1, &[])
                };
                let k = self.split(n - 1);
                let t = self.ljms(env, &c, k);
                STerm::cut(t, self.ljms_co(env, &c, a, n - 1 - k))
            }
            _ => STerm::Var(self.spec_leaf(env, a)),
        }
    }

    fn ljms_co(&mut self, env: &Env, c: &Type, a: &Type, n: usize) -> SCo {
        let x = self.binder();
        match c {
            Type::Arrow(c1, c2) if n >= 3 && self.chance(0.5) => {
                let k = self.split(n - 1);
                let u = self.ljms(env, c1, k);
                SCo::cons(u, self.ljms_co(env, c2, a, n - 1 - k))
            }
            _ if n >= 4 && self.chance(0.3) => {
                let l = self.ljms_co(env, c, a, n - 3);
                SCo::sel(&x, STerm::cut(STerm::Var(x.clone()), l))
            }
            _ => {
                let env2 = self.with(env, &x, c);
                SCo::sel(&x, self.ljms(&env2, a, n.saturating_sub(1)))
            }
        }
    }
}

fn seed_for(cfg: &GenConfig, attempt: usize) -> u64 {
    cfg.seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(attempt as u64)
        .wrapping_add((cfg.calculus as u64) << 48)
}

/// Run `make` on fresh generators until `cfg.count` distinct samples of
/// size at most `cfg.max_size` are collected. Duplicates are accepted once
/// distinct ones become rare.
fn collect<T: Clone>(
    cfg: &GenConfig,
    mut make: impl FnMut(&mut Gen, usize) -> (T, Type),
    size: impl Fn(&T) -> usize,
    key: impl Fn(&T) -> String,
) -> Vec<(Ctx, T, Type)> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut attempt = 0usize;
    let level2 = cfg.level == Level::Second;
    while out.len() < cfg.count {
        attempt += 1;
        let mut g = Gen::new(seed_for(cfg, attempt), level2);
        let budget = g.rng.gen_range(1..=cfg.max_size.max(1));
        let (t, a) = make(&mut g, budget);
        if size(&t) > cfg.max_size {
            continue;
        }
        let fresh = seen.insert(key(&t));
        if fresh || attempt > 50 * cfg.count {
            out.push((g.free, t, a));
        }
    }
    out
}

/// Well-typed λJmse terms `(Γ, t, A)` with `Γ ⊢ t : A`.
pub fn gen_typed(cfg: &GenConfig) -> Vec<(Ctx, Expr, Type)> {
    collect(
        cfg,
        |g, n| {
            let a = g.goal(2, &[]);
            (Expr::Term(g.term(&Vec::new(), &[], &a, n)), a)
        },
        |e| e.size(),
        |e| format!("{:?}", e.canon()),
    )
}

/// Well-typed terms of a subsystem calculus.
pub fn gen_spec(cfg: &GenConfig) -> Vec<(Ctx, SpecTerm, Type)> {
    let calculus = cfg.calculus;
    collect(
        cfg,
        |g, n| {
            let a = g.ty(2, &[]);
            let env = Vec::new();
            let t = match calculus {
                Calculus::Lambda => SpecTerm::Lambda(g.lambda(&env, &a, n)),
                Calculus::J => SpecTerm::J(g.lj(&env, &a, n)),
                Calculus::Jm => SpecTerm::Jm(g.ljm(&env, &a, n)),
                Calculus::Jms | Calculus::Jmse => SpecTerm::Jms(g.ljms(&env, &a, n)),
            };
            (t, a)
        },
        |t| t.size(),
        |t| t.canon().to_string(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{all_steps, RuleName};
    use crate::spectrum::{check_spec, step_spec};
    use crate::typing::check_level2;
    use std::collections::BTreeMap;

    fn cfg(calculus: Calculus, level: Level, count: usize) -> GenConfig {
        GenConfig {
            seed: 1,
            max_size: 12,
            calculus,
            level,
            count,
        }
    }

    #[test]
    fn ljmse_terms_typecheck() {
        for level in [Level::Prop, Level::Second] {
            for (ctx, e, a) in gen_typed(&cfg(Calculus::Jmse, level, 300)) {
                assert!(e.size() <= 12);
                let r = check_level2(&ctx, &e, &a);
                assert!(matches!(r, Ok(true)), "{e} : {a} in {ctx:?}: {r:?}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let c = cfg(Calculus::Jmse, Level::Prop, 20);
        assert_eq!(gen_typed(&c), gen_typed(&c));
    }

    #[test]
    fn small_sizes_contain_variables() {
        let mut c = cfg(Calculus::Jmse, Level::Prop, 5);
        c.max_size = 1;
        let out = gen_typed(&c);
        assert!(out.iter().all(|(_, e, _)| matches!(e, Expr::Term(Term::Var(_)))));
    }

    #[test]
    fn corpus_hits_every_rule() {
        let mut hits: BTreeMap<RuleName, usize> = BTreeMap::new();
        for (_, e, _) in gen_typed(&cfg(Calculus::Jmse, Level::Second, 300)) {
            for s in all_steps(&e) {
                *hits.entry(s.rule).or_default() += 1;
            }
        }
        for r in [RuleName::Beta, RuleName::Pi, RuleName::Sigma, RuleName::Mu, RuleName::Eps, RuleName::Beta2] {
            assert!(hits.get(&r).copied().unwrap_or(0) > 0, "{r:?} missing: {hits:?}");
        }
    }

    #[test]
    fn subsystem_terms_typecheck_and_reduce() {
        for c in Calculus::SPECTRUM {
            let mut steps = 0;
            for (ctx, t, a) in gen_spec(&cfg(c, Level::Prop, 200)) {
                assert_eq!(t.calculus(), c);
                let r = check_spec(&ctx, &t, &a);
                assert!(matches!(r, Ok(true)), "{t} : {a}: {r:?}");
                steps += step_spec(&t).len();
            }
            assert!(steps > 50, "{c}: {steps}");
        }
    }
}
