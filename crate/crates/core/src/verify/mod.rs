//! Seeded corpora and the property suites run over them.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cps::{
    bar_ctx, bar_type, cgps, cgps_sub, colon_cgps, colon_cps, colon_cps_simple, cps, cps_simple, TransKind,
};
use crate::reduction::{all_steps, critical_peaks, is_normal, normalize, successors, successors_by, RuleName, Strategy};
use crate::search::{bfs, joinable, Found};
use crate::secondorder::{bar_natural, star_natural};
use crate::spectrum::{
    check_spec, circ_term, embed_e, embed_next, map_sharp, mu_nf, reach_spec, rules_of, step_spec, to_ljmse,
    Calculus, Embedded, SCo, STerm, SpecRule, SpecTerm,
};
use crate::syntax::{Command, CoTerm, Expr, Level, Term};
use crate::target::reach::{decide, reach, Caps, Mode, ReachResult};
use crate::target::typing::typecheck_lam;
use crate::target::{GarbageKit, LamTerm};
use crate::types::{Ctx, Type};
use crate::typing::check_level2;

mod gen;

pub use gen::{gen_spec, gen_typed};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_size: usize,
    pub calculus: Calculus,
    pub level: Level,
    pub count: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 7,
            max_size: 12,
            calculus: Calculus::Jmse,
            level: Level::Prop,
            count: 500,
        }
    }
}

impl GenConfig {
    pub fn with_calculus(self, calculus: Calculus) -> Self {
        GenConfig { calculus, ..self }
    }
    pub fn with_level(self, level: Level) -> Self {
        GenConfig { level, ..self }
    }
    pub fn with_count(self, count: usize) -> Self {
        GenConfig { count, ..self }
    }
}

/// A failing case with enough context to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub term: String,
    pub step: String,
    pub diagnostic: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub inconclusive: usize,
    /// Named counters, such as per-rule case counts.
    pub stats: BTreeMap<String, usize>,
    pub wall: Duration,
}

impl Report {
    fn new(suite: &str) -> Report {
        Report {
            suite: suite.to_string(),
            cases: 0,
            failures: Vec::new(),
            inconclusive: 0,
            stats: BTreeMap::new(),
            wall: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.inconclusive == 0
    }

    pub fn stat(&self, key: &str) -> usize {
        self.stats.get(key).copied().unwrap_or(0)
    }

    fn bump(&mut self, key: impl Into<String>) {
        *self.stats.entry(key.into()).or_default() += 1;
    }

    fn fail(&mut self, term: impl ToString, step: impl ToString, diagnostic: impl Into<String>) {
        self.failures.push(Failure {
            term: term.to_string(),
            step: step.to_string(),
            diagnostic: diagnostic.into(),
        });
    }

    /// Count a case: `Some(true)` passes, `Some(false)` fails, `None` is
    /// inconclusive.
    fn record(&mut self, ok: Option<bool>, term: impl ToString, step: impl ToString, diagnostic: impl FnOnce() -> String) {
        self.cases += 1;
        match ok {
            Some(true) => {}
            Some(false) => self.fail(term, step, diagnostic()),
            None => self.inconclusive += 1,
        }
    }

    fn merge(&mut self, other: Report) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.inconclusive += other.inconclusive;
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
    }

    fn timed(mut self, start: Instant) -> Report {
        self.wall = start.elapsed();
        self
    }

    /// JSON without the wall time, so that identical runs print identical
    /// bytes.
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "cases": self.cases,
            "inconclusive": self.inconclusive,
            "stats": self.stats,
            "failures": self.failures.iter().map(|f| json!({
                "term": f.term,
                "step": f.step,
                "diagnostic": f.diagnostic,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} cases, {} failures, {} inconclusive, {:.2}s)",
            self.suite,
            if self.passed() { "pass" } else { "FAIL" },
            self.cases,
            self.failures.len(),
            self.inconclusive,
            self.wall.as_secs_f64()
        )
    }
}

const FUEL: usize = 200_000;

/// Reachability between translation images: standardization first, graph
/// search when the decider runs out of fuel.
pub fn lam_reach(from: &LamTerm, to: &LamTerm, mode: Mode) -> ReachResult {
    let r = decide(from, to, mode, FUEL);
    if !r.inconclusive() {
        return r;
    }
    reach(from, to, mode, Caps::default())
}

fn verdict(r: &ReachResult) -> Option<bool> {
    if r.found {
        Some(true)
    } else if r.exhausted {
        Some(false)
    } else {
        None
    }
}

fn found_verdict<T>(r: &Found<T>) -> Option<bool> {
    if r.found {
        Some(true)
    } else if r.exhausted {
        Some(false)
    } else {
        None
    }
}

fn image_diag(a: &LamTerm, b: &LamTerm, r: &ReachResult) -> String {
    format!(
        "images {a} and {b}; found={} exhausted={} nodes={}",
        r.found, r.exhausted, r.nodes_explored
    )
}

/// Reachability inside λJmse, up to alpha.
pub fn ljmse_reach(from: &Expr, to: &Expr, plus: bool, rules: &[RuleName], max_depth: usize) -> Found<Expr> {
    let goal = to.canon();
    bfs(
        from,
        |e| e.canon(),
        |e| successors_by(e, rules),
        |e| e.canon() == goal,
        plus,
        50_000,
        max_depth,
    )
}

const ALL_RULES: [RuleName; 6] = [
    RuleName::Beta,
    RuleName::Pi,
    RuleName::Sigma,
    RuleName::Mu,
    RuleName::Eps,
    RuleName::Beta2,
];

fn spec_kind(c: Calculus) -> Option<TransKind> {
    match c {
        Calculus::J => Some(TransKind::CgpsLj),
        Calculus::Jm => Some(TransKind::CgpsLjm),
        Calculus::Jms => Some(TransKind::CgpsLjms),
        _ => None,
    }
}

fn sub_calculus(kind: TransKind) -> Option<Calculus> {
    match kind {
        TransKind::CgpsLj | TransKind::CgpsLjOpt | TransKind::CgpsLjSimple => Some(Calculus::J),
        TransKind::CgpsLjm => Some(Calculus::Jm),
        TransKind::CgpsLjms => Some(Calculus::Jms),
        _ => None,
    }
}

/// Every one-step reduct `t → u` of the corpus has `t̄ →+ ū` under `kind`.
/// The λJmse kinds use `cfg.level`; the subsystem kinds use their calculus.
pub fn suite_strict_simulation(cfg: &GenConfig, kind: TransKind) -> Report {
    let start = Instant::now();
    let mut rep = Report::new(&format!("strict-simulation/{kind}"));
    if let Some(c) = sub_calculus(kind) {
        for (_, t, _) in gen_spec(&cfg.with_calculus(c)) {
            let Some(ti) = cgps_sub(&t, kind) else { continue };
            for (rule, u) in step_spec(&t) {
                let ui = cgps_sub(&u, kind).unwrap();
                let r = lam_reach(&ti, &ui, Mode::Plus);
                rep.bump(rule.as_str());
                rep.record(verdict(&r), &t, format!("{rule} to {u}"), || image_diag(&ti, &ui, &r));
            }
        }
        return rep.timed(start);
    }
    let translate = |t: &Term| match kind {
        TransKind::Cps => cps(t),
        TransKind::CpsSimple => cps_simple(t),
        _ => cgps(t),
    };
    for (_, e, _) in gen_typed(&cfg.with_calculus(Calculus::Jmse)) {
        let t = e.as_term().unwrap();
        let ti = translate(t);
        for s in all_steps(&e) {
            let u = s.to.as_term().unwrap();
            let ui = translate(u);
            let r = lam_reach(&ti, &ui, Mode::Plus);
            rep.bump(s.rule.as_str());
            rep.record(verdict(&r), &e, format!("{} at {:?} to {u}", s.rule.as_str(), s.pos), || {
                image_diag(&ti, &ui, &r)
            });
        }
    }
    rep.timed(start)
}

/// CPS: `t̄ →* ū` for every step; ε-steps and π-steps contracted at the
/// root of the translated expression leave the image unchanged.
pub fn suite_weak_simulation_cps(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("weak-simulation/cps");
    let k = LamTerm::var("K");
    for (_, e, _) in gen_typed(&cfg.with_calculus(Calculus::Jmse).with_level(Level::Prop)) {
        let t = e.as_term().unwrap();
        let ti = cps(t);
        for s in all_steps(&e) {
            let u = s.to.as_term().unwrap();
            let ui = cps(u);
            let r = lam_reach(&ti, &ui, Mode::Star);
            rep.bump(s.rule.as_str());
            if r.found && r.steps() == 0 {
                rep.bump(format!("{}-zero", s.rule.as_str()));
            }
            rep.record(verdict(&r), &e, format!("{} at {:?}", s.rule.as_str(), s.pos), || {
                image_diag(&ti, &ui, &r)
            });
            match s.rule {
                RuleName::Eps => {
                    let same = ti.alpha_eq(&ui);
                    rep.record(Some(same), &e, "eps images", || format!("{ti} vs {ui}"));
                }
                RuleName::Pi => {
                    let redex = e.at(&s.pos).unwrap();
                    let contractum = s.to.at(&s.pos).unwrap();
                    let a = colon_cps(&redex, &k);
                    let b = colon_cps(&contractum, &k);
                    rep.bump("pi-root");
                    rep.record(Some(a.alpha_eq(&b)), &redex, "root pi images", || format!("{a} vs {b}"));
                }
                _ => {}
            }
        }
    }
    rep.timed(start)
}

/// Instances of the root β-step `(λx.t)(u::[]) → u(x)(t[])`. The body
/// `t = x` is left out: there the reduct's image `(λx.xK)ū` is alpha-equal
/// to a reduct `(λw.wK)ū` of the redex's image.
pub fn negative_family() -> Vec<(Term, Term)> {
    let v = Term::var;
    let id = || Term::lam("w", v("w"));
    vec![
        (v("z"), v("y")),
        (id(), v("y")),
        (Term::lam("w", v("x")), v("y")),
        (v("z"), id()),
        (Term::lam("w", v("x")), id()),
        (Term::coerce(Command::new(v("x"), CoTerm::cons(v("y"), CoTerm::Nil))), v("y")),
    ]
}

/// The simplified CPS loses weak simulation on root β-steps, while full
/// CPS and CGPS keep it.
pub fn suite_negative_simple_cps() -> Report {
    let start = Instant::now();
    let mut rep = Report::new("negative/cps-simple");
    let k = LamTerm::var("K");
    let caps = Caps {
        nodes: 10_000,
        depth: 10_000,
    };
    for (t, u) in negative_family() {
        let redex = Command::new(Term::lam("x", t.clone()), CoTerm::cons(u.clone(), CoTerm::Nil));
        let reduct = Command::new(u.clone(), CoTerm::sel("x", Command::new(t.clone(), CoTerm::Nil)));
        let (from, to) = (Expr::Command(redex.clone()), Expr::Command(reduct.clone()));
        let step = format!("{redex} to {reduct}");

        let a = colon_cps_simple(&from, &k);
        let b = colon_cps_simple(&to, &k);
        let r = reach(&a, &b, Mode::Star, caps);
        rep.record(Some(!r.found && r.exhausted), &redex, &step, || image_diag(&a, &b, &r));
        rep.stats.insert(format!("graph:{redex}"), r.nodes_explored);

        let a = colon_cps(&from, &k);
        let b = colon_cps(&to, &k);
        let r = lam_reach(&a, &b, Mode::Star);
        rep.record(verdict(&r), &redex, format!("cps {step}"), || image_diag(&a, &b, &r));

        let g = LamTerm::var("G");
        let a = colon_cgps(&from, &g, &k);
        let b = colon_cgps(&to, &g, &k);
        let r = lam_reach(&a, &b, Mode::Plus);
        rep.record(verdict(&r), &redex, format!("cgps {step}"), || image_diag(&a, &b, &r));
    }
    rep.timed(start)
}

fn embedded_reach(a: &Embedded, b: &Embedded) -> Option<bool> {
    match (a, b) {
        (Embedded::Spec(x), Embedded::Spec(y)) => {
            let r = reach_spec(x, y, true, rules_of(y.calculus()), 50_000, 64);
            found_verdict(&r)
        }
        (Embedded::Ljmse(x), Embedded::Ljmse(y)) => found_verdict(&ljmse_reach(x, y, true, &ALL_RULES, 64)),
        _ => Some(false),
    }
}

fn embedded_typed(ctx: &Ctx, e: &Embedded, a: &Type) -> bool {
    match e {
        Embedded::Spec(t) => matches!(check_spec(ctx, t, a), Ok(true)),
        Embedded::Ljmse(x) => matches!(check_level2(ctx, x, a), Ok(true)),
    }
}

/// Each embedding strictly simulates reduction and preserves types; the
/// subsystem CGPS translations agree with CGPS after embedding.
pub fn suite_embeddings(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("embeddings");
    for c in Calculus::SPECTRUM {
        for (ctx, t, a) in gen_spec(&cfg.with_calculus(c)) {
            let ft = embed_next(&t).unwrap();
            let name = format!("{c}->{}", c.next().unwrap());
            rep.record(Some(embedded_typed(&ctx, &ft, &a)), &t, format!("{name} typing"), || {
                format!("{ft} does not have type {a}")
            });
            for (rule, u) in step_spec(&t) {
                let fu = embed_next(&u).unwrap();
                rep.bump(format!("{name}:{rule}"));
                rep.record(embedded_reach(&ft, &fu), &t, format!("{name} {rule} to {u}"), || {
                    format!("no step from {ft} to {fu}")
                });
            }
            if let Some(kind) = spec_kind(c) {
                let direct = cgps_sub(&t, kind).unwrap();
                let e = to_ljmse(&t).unwrap();
                let via = cgps(e.as_term().unwrap());
                rep.bump(format!("coherence:{c}"));
                rep.record(Some(direct.alpha_eq(&via)), &t, format!("coherence {kind}"), || {
                    format!("{direct} vs {via}")
                });
            }
        }
    }
    rep.timed(start)
}

/// The footnote pair: `v0 →π v1` in λJms, whose ♯-images are joined by π̂
/// but not by the eager π of λJm.
pub fn footnote_pair() -> (STerm, STerm) {
    let v = STerm::var;
    let t1 = STerm::cut(v("y"), SCo::cons(v("w"), SCo::sel("q", v("q"))));
    let inner = STerm::cut(t1, SCo::sel("z", v("z")));
    let head = STerm::cut(v("t0"), SCo::cons(v("u0"), SCo::sel("x", inner)));
    let v0 = STerm::cut(head, SCo::cons(v("u"), SCo::sel("r", v("r"))));
    let v1 = step_spec(&SpecTerm::Jms(v0.clone()))
        .into_iter()
        .find(|(r, _)| *r == SpecRule::Pi)
        .map(|(_, t)| match t {
            SpecTerm::Jms(t) => t,
            _ => unreachable!(),
        })
        .unwrap();
    (v0, v1)
}

/// `t →σ* s(t♯)`, `e(T°) →μ* T`, μ-normalisation monotonicity, and the
/// footnote counterexample.
pub fn suite_interpretations(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("interpretations");
    for (_, t, _) in gen_spec(&cfg.with_calculus(Calculus::Jms)) {
        let SpecTerm::Jms(s) = &t else { unreachable!() };
        let target = SpecTerm::Jms(crate::spectrum::embed_s(&map_sharp(s)));
        let r = reach_spec(&t, &target, false, &[SpecRule::Sigma], 50_000, 64);
        rep.bump("sharp");
        rep.record(found_verdict(&r), &t, "sigma to s(t#)", || format!("target {target}"));
    }
    let corpus = gen_typed(&cfg.with_calculus(Calculus::Jmse).with_level(Level::Prop));
    for (_, e, _) in &corpus {
        let t = e.as_term().unwrap();
        let back = Expr::Term(embed_e(&circ_term(t).unwrap()));
        let r = ljmse_reach(&back, e, false, &[RuleName::Mu], 64);
        rep.bump("circ");
        rep.record(found_verdict(&r), e, "mu from e(T°)", || format!("e(T°) = {back}"));
        let m = mu_nf(e);
        for s in all_steps(e) {
            let mu_to = mu_nf(&s.to);
            let r = ljmse_reach(&m, &mu_to, false, &ALL_RULES, 64);
            rep.bump("mu-nf");
            rep.record(found_verdict(&r), e, format!("{} to {}", s.rule.as_str(), s.to), || {
                format!("mu_nf {m} does not reach {mu_to}")
            });
        }
    }
    let (v0, v1) = footnote_pair();
    let (a, b) = (SpecTerm::Jm(map_sharp(&v0)), SpecTerm::Jm(map_sharp(&v1)));
    let eager = [SpecRule::Beta1, SpecRule::Beta2, SpecRule::Pi, SpecRule::Mu];
    let lazy = [SpecRule::Beta1, SpecRule::Beta2, SpecRule::PiHat, SpecRule::Mu];
    let r = reach_spec(&a, &b, false, &eager, 50_000, 1_000);
    rep.record(Some(!r.found && r.exhausted), &v0, "footnote eager", || {
        format!("eager π joins {a} to {b}, or the graph is capped")
    });
    let r = reach_spec(&a, &b, false, &lazy, 50_000, 1_000);
    rep.record(found_verdict(&r), &v0, "footnote lazy", || format!("π̂ misses {a} to {b}"));
    rep.timed(start)
}

/// Whether `a` and `b` have a common reduct: bounded search first, then
/// leftmost normal forms; `None` when neither settles it.
pub fn joins_within(a: &Expr, b: &Expr, steps: usize) -> Option<bool> {
    if joinable(a, b, |e| e.canon(), successors, steps.min(6), 20_000) {
        return Some(true);
    }
    let na = normalize(a, Strategy::Leftmost, steps);
    let nb = normalize(b, Strategy::Leftmost, steps);
    let (x, y) = (na.last(), nb.last());
    if is_normal(x, &ALL_RULES) && is_normal(y, &ALL_RULES) {
        Some(x.canon() == y.canon())
    } else {
        None
    }
}

/// Critical peaks join within 10 steps, trivial families in 0.
pub fn suite_critical_peaks(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("critical-peaks");
    for p in critical_peaks(2, cfg.seed) {
        let (l, r) = (&p.left.to, &p.right.to);
        rep.bump(p.family.as_str());
        if p.family.trivial() {
            rep.record(Some(l.canon() == r.canon()), &p.expr, p.family.as_str(), || format!("{l} vs {r}"));
        } else {
            rep.record(joins_within(l, r, 10), &p.expr, p.family.as_str(), || format!("{l} vs {r}"));
        }
    }
    rep.timed(start)
}

/// Random peaks `u ← t → v` from the corpus join within 50 steps.
pub fn suite_random_peaks(cfg: &GenConfig, count: usize) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("random-peaks");
    let mut peaks = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let corpus = gen_typed(&cfg.with_calculus(Calculus::Jmse).with_count(count * 10));
    for (_, e, _) in &corpus {
        if peaks >= count {
            break;
        }
        let mut steps: Vec<Expr> = successors(e);
        steps.sort_by_key(|x| format!("{:?}", x.canon()));
        steps.dedup_by_key(|x| x.canon());
        if steps.len() < 2 {
            continue;
        }
        let i = rng.gen_range(0..steps.len());
        let mut j = rng.gen_range(0..steps.len() - 1);
        if j >= i {
            j += 1;
        }
        peaks += 1;
        rep.bump("random");
        rep.record(joins_within(&steps[i], &steps[j], 50), e, "random peak", || {
            format!("{} vs {}", steps[i], steps[j])
        });
    }
    rep.timed(start)
}

pub fn suite_confluence(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("confluence");
    rep.merge(suite_critical_peaks(cfg));
    rep.merge(suite_random_peaks(cfg, 200.min(cfg.count.max(1))));
    rep.timed(start)
}

/// Subject reduction in every calculus, and typing of the translations.
pub fn suite_typing(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("typing");
    rep.merge(suite_subject_reduction(cfg));
    rep.merge(suite_translation_typing(cfg));
    rep.timed(start)
}

/// Every corpus step preserves the type, in λJmse at both levels and in
/// each subsystem.
pub fn suite_subject_reduction(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("subject-reduction");
    for level in [Level::Prop, Level::Second] {
        for (ctx, e, a) in gen_typed(&cfg.with_calculus(Calculus::Jmse).with_level(level)) {
            for s in all_steps(&e) {
                rep.bump(format!("sr:{}", s.rule.as_str()));
                let ok = matches!(check_level2(&ctx, &s.to, &a), Ok(true));
                rep.record(Some(ok), &e, format!("{} to {}", s.rule.as_str(), s.to), || {
                    format!("reduct loses type {a}")
                });
            }
        }
    }
    for c in Calculus::SPECTRUM {
        for (ctx, t, a) in gen_spec(&cfg.with_calculus(c)) {
            for (rule, u) in step_spec(&t) {
                rep.bump(format!("sr:{c}:{rule}"));
                let ok = matches!(check_spec(&ctx, &u, &a), Ok(true));
                rep.record(Some(ok), &t, format!("{rule} to {u}"), || format!("reduct loses type {a}"));
            }
        }
    }
    rep.timed(start)
}

/// `bar_ctx(Γ) ⊢ t̄ : bar_type(A)` for every translation and corpus term.
pub fn suite_translation_typing(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("translation-typing");
    for level in [Level::Prop, Level::Second] {
        let kinds: &[TransKind] = match level {
            Level::Prop => &[TransKind::Cps, TransKind::Cgps, TransKind::CpsSimple],
            Level::Second => &[TransKind::Cps, TransKind::Cgps],
        };
        for (ctx, e, a) in gen_typed(&cfg.with_calculus(Calculus::Jmse).with_level(level)) {
            let t = e.as_term().unwrap();
            for &kind in kinds {
                let img = match kind {
                    TransKind::Cps => cps(t),
                    TransKind::CpsSimple => cps_simple(t),
                    _ => cgps(t),
                };
                let want = bar_type(&a, kind);
                let r = typecheck_lam(&bar_ctx(&ctx, kind), &img, &want);
                rep.bump(format!("translation:{kind}"));
                rep.record(Some(matches!(r, Ok(true))), &e, format!("{kind} image"), || {
                    format!("{img} : {want} fails: {r:?}")
                });
            }
        }
    }
    for c in Calculus::SPECTRUM {
        for (ctx, t, a) in gen_spec(&cfg.with_calculus(c)) {
            let kinds: &[TransKind] = match c {
                Calculus::J => &[TransKind::CgpsLj, TransKind::CgpsLjOpt, TransKind::CgpsLjSimple],
                Calculus::Jm => &[TransKind::CgpsLjm],
                Calculus::Jms => &[TransKind::CgpsLjms],
                _ => &[],
            };
            for &kind in kinds {
                let img = cgps_sub(&t, kind).unwrap();
                let want = bar_type(&a, kind);
                let r = typecheck_lam(&bar_ctx(&ctx, kind), &img, &want);
                rep.bump(format!("translation:{kind}"));
                rep.record(Some(matches!(r, Ok(true))), &t, format!("{kind} image"), || {
                    format!("{img} : {want} fails: {r:?}")
                });
            }
        }
    }
    rep.timed(start)
}

/// `sG →β G` in exactly two steps, and `(t:sG,K) →+ (t:G,K)` on the corpus.
pub fn suite_garbage(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("garbage");
    let kit = GarbageKit;
    let (g, k) = (LamTerm::var("G"), LamTerm::var("K"));
    let sg = kit.succ_n(1, g.clone());
    let r = reach(&sg, &g, Mode::Plus, Caps::default());
    rep.stats.insert("succ-steps".into(), r.steps());
    rep.record(Some(r.found && r.steps() == 2), &sg, "s G to G", || image_diag(&sg, &g, &r));
    for (_, e, _) in gen_typed(&cfg.with_calculus(Calculus::Jmse).with_count(100.min(cfg.count.max(1)))) {
        let a = colon_cgps(&e, &sg, &k);
        let b = colon_cgps(&e, &g, &k);
        let r = lam_reach(&a, &b, Mode::Plus);
        rep.record(verdict(&r), &e, "(t:sG,K) to (t:G,K)", || image_diag(&a, &b, &r));
    }
    rep.timed(start)
}

/// Every corpus term normalises within 10,000 steps under leftmost and
/// five random strategies, ending in a βπσε-normal form.
pub fn suite_sn(cfg: &GenConfig) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("normalisation");
    let normal_rules = [RuleName::Beta, RuleName::Pi, RuleName::Sigma, RuleName::Eps];
    let mut strategies = vec![Strategy::Leftmost];
    strategies.extend((0..5).map(|i| Strategy::Random(cfg.seed.wrapping_add(i))));
    for (_, e, _) in gen_typed(&cfg.with_calculus(Calculus::Jmse)) {
        for &st in &strategies {
            let tr = normalize(&e, st, 10_000);
            let last = tr.last();
            rep.record(Some(is_normal(last, &normal_rules)), &e, format!("{st:?}"), || {
                format!("stopped at {last}")
            });
        }
    }
    rep.timed(start)
}

fn random_type(rng: &mut ChaCha8Rng, depth: usize, vars: &[&str]) -> Type {
    match rng.gen_range(0..if depth == 0 { 2 } else { 5 }) {
        0 => Type::var(vars[rng.gen_range(0..vars.len())]),
        1 => Type::Bot,
        2 | 3 => Type::arrow(random_type(rng, depth - 1, vars), random_type(rng, depth - 1, vars)),
        _ => {
            let x = vars[rng.gen_range(0..vars.len())];
            Type::forall(x, random_type(rng, depth - 1, vars))
        }
    }
}

/// Level 2: β2-steps are strictly simulated by CGPS, and the type
/// translations commute with type substitution.
pub fn suite_second_order(cfg: &GenConfig, triples: usize) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("second-order");
    for (_, e, _) in gen_typed(&cfg.with_calculus(Calculus::Jmse).with_level(Level::Second)) {
        let t = e.as_term().unwrap();
        let ti = cgps(t);
        for s in all_steps(&e).into_iter().filter(|s| s.rule == RuleName::Beta2) {
            let ui = cgps(s.to.as_term().unwrap());
            let r = lam_reach(&ti, &ui, Mode::Plus);
            rep.bump("beta2");
            rep.record(verdict(&r), &e, format!("beta2 at {:?}", s.pos), || image_diag(&ti, &ui, &r));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let vars = ["X", "Y", "Z"];
    for _ in 0..triples {
        let a = random_type(&mut rng, 3, &vars);
        let b = random_type(&mut rng, 2, &vars);
        let x = vars[rng.gen_range(0..vars.len())];
        rep.bump("naturality");
        for kind in [TransKind::Cps, TransKind::Cgps] {
            let ok = star_natural(&a, &b, x, kind) && bar_natural(&a, &b, x, kind);
            rep.record(Some(ok), format!("{a}"), format!("[{b}/{x}] under {kind}"), || {
                "substitution does not commute with the type translation".to_string()
            });
        }
    }
    rep.timed(start)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Simulation,
    WeakCps,
    Negative,
    Embeddings,
    Interpretations,
    Confluence,
    Typing,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = [
        "all",
        "simulation",
        "weak-cps",
        "negative",
        "embeddings",
        "interpretations",
        "confluence",
        "typing",
    ];

    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "all" => Suite::All,
            "simulation" => Suite::Simulation,
            "weak-cps" => Suite::WeakCps,
            "negative" => Suite::Negative,
            "embeddings" => Suite::Embeddings,
            "interpretations" => Suite::Interpretations,
            "confluence" => Suite::Confluence,
            "typing" => Suite::Typing,
            _ => return None,
        })
    }
}

/// Run one suite (or all of them), returning one report per suite run.
pub fn run_suite(suite: Suite, cfg: &GenConfig) -> Vec<Report> {
    let simulation = || {
        let mut r = suite_strict_simulation(cfg, TransKind::Cgps);
        for kind in [
            TransKind::CgpsLjms,
            TransKind::CgpsLjm,
            TransKind::CgpsLj,
            TransKind::CgpsLjOpt,
            TransKind::CgpsLjSimple,
        ] {
            r.merge(suite_strict_simulation(cfg, kind));
        }
        r.merge(suite_second_order(cfg, cfg.count));
        r.merge(suite_garbage(cfg));
        r.suite = "simulation".into();
        r
    };
    match suite {
        Suite::Simulation => vec![simulation()],
        Suite::WeakCps => vec![suite_weak_simulation_cps(cfg)],
        Suite::Negative => vec![suite_negative_simple_cps()],
        Suite::Embeddings => vec![suite_embeddings(cfg)],
        Suite::Interpretations => vec![suite_interpretations(cfg)],
        Suite::Confluence => vec![suite_confluence(cfg)],
        Suite::Typing => {
            let mut r = suite_typing(cfg);
            r.merge(suite_sn(cfg));
            r.suite = "typing".into();
            vec![r]
        }
        Suite::All => [
            Suite::Simulation,
            Suite::WeakCps,
            Suite::Negative,
            Suite::Embeddings,
            Suite::Interpretations,
            Suite::Confluence,
            Suite::Typing,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, cfg))
        .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GenConfig {
        GenConfig {
            count: 40,
            ..GenConfig::default()
        }
    }

    fn assert_pass(r: &Report) {
        assert!(r.passed(), "{}\n{:#?}", r.summary(), &r.failures[..r.failures.len().min(3)]);
    }

    #[test]
    fn negative_result_reproduces() {
        let r = suite_negative_simple_cps();
        assert_pass(&r);
        assert!(r.cases >= 15);
    }

    #[test]
    fn identity_body_is_not_a_counterexample() {
        let k = LamTerm::var("K");
        let redex = Command::new(Term::lam("x", Term::var("x")), CoTerm::cons(Term::var("y"), CoTerm::Nil));
        let reduct = Command::new(Term::var("y"), CoTerm::sel("x", Command::new(Term::var("x"), CoTerm::Nil)));
        let a = colon_cps_simple(&Expr::Command(redex), &k);
        let b = colon_cps_simple(&Expr::Command(reduct), &k);
        let r = reach(&a, &b, Mode::Star, Caps::default());
        assert!(r.found, "{a} to {b}");
    }

    #[test]
    fn footnote_pair_is_a_pi_step() {
        let (v0, v1) = footnote_pair();
        assert_eq!(v0.to_string(), "(t0 u0::(x)(y w::(q)q) (z)z) u::(r)r");
        assert_eq!(v1.to_string(), "t0 u0::(x)(y w::(q)q) (z)z u::(r)r");
    }

    #[test]
    fn small_suites_pass() {
        let cfg = small();
        assert_pass(&suite_strict_simulation(&cfg, TransKind::Cgps));
        assert_pass(&suite_weak_simulation_cps(&cfg));
        assert_pass(&suite_embeddings(&cfg));
        assert_pass(&suite_interpretations(&cfg));
        assert_pass(&suite_confluence(&cfg));
        assert_pass(&suite_typing(&cfg));
        assert_pass(&suite_garbage(&cfg));
        assert_pass(&suite_sn(&cfg));
        assert_pass(&suite_second_order(&cfg, 50));
    }

    #[test]
    fn json_is_stable() {
        let cfg = GenConfig { count: 10, ..GenConfig::default() };
        let a = suite_weak_simulation_cps(&cfg).to_json();
        let b = suite_weak_simulation_cps(&cfg).to_json();
        assert_eq!(a.to_string(), b.to_string());
    }
}
