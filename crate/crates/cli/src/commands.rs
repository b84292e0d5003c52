use std::fmt::Write as _;
use std::path::Path;

use ljmse_core::cps::{bar_type, cgps_sub, translate, TransKind};
use ljmse_core::reduction::{all_steps, critical_peaks, normalize, Status, Strategy};
use ljmse_core::spectrum::{
    embed_next, embed_to, infer_spec, check_spec, map_circ, map_sharp, map_sharp_co, step_spec, step_spec_lazy,
    to_ljmse, Calculus, Circ, Embedded, SpecRule, SpecTerm,
};
use ljmse_core::syntax::json::to_json;
use ljmse_core::syntax::{parse_type, Expr, Level};
use ljmse_core::typing::{check_level2, infer_term, judge};
use ljmse_core::types::{Ctx, Type};
use ljmse_core::verify::{joins_within, run_suite, GenConfig, Report, Suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;
use crate::config::{parse_num, Config};
use crate::error::CliError;
use crate::input::{parse_ctx, parse_source, read_text, Source};

pub const DEFAULT_SEED: u64 = 7;
const DEFAULT_MAX_STEPS: usize = 1000;

/// What a command printed and the exit code it asks for.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Output {
    fn text(s: String) -> Output {
        Output {
            stdout: s,
            ..Output::default()
        }
    }

    fn json(v: &Value) -> Output {
        Output::text(format!("{v}\n"))
    }
}

pub struct Env<'a> {
    pub config: &'a Config,
    pub json: bool,
    /// `LJMSE_SEED`, read by `main`.
    pub env_seed: Option<String>,
}

impl Env<'_> {
    /// Flag, then config file, then `default`.
    fn pick<T>(&self, flag: Option<T>, key: &str, parse: impl Fn(&str) -> Result<T, String>, default: T) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.config.get(key, parse)?.unwrap_or(default)),
        }
    }

    /// Flag, then `LJMSE_SEED`, then config file, then the default seed.
    fn seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(s) = &self.env_seed {
            return s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("LJMSE_SEED is not a number: `{s}`")));
        }
        self.pick(None, "seed", parse_num, DEFAULT_SEED)
    }

    fn source(&self, args: &InputArgs) -> Result<(Source, Calculus), CliError> {
        let calculus = self.pick(args.calculus, "calculus", parse_calculus, Calculus::Jmse)?;
        let level = self.level(args)?;
        let text = read_text(args)?;
        Ok((parse_source(&text, calculus, level, args.class.map(Into::into))?, calculus))
    }

    fn level(&self, args: &InputArgs) -> Result<Level, CliError> {
        self.pick(args.level.map(Into::into), "level", parse_level, Level::Prop)
    }
}

pub fn run(cmd: &Cmd, env: &Env) -> Result<Output, CliError> {
    match cmd {
        Cmd::Parse(a) => parse_cmd(a, env),
        Cmd::Check(a) => check_cmd(a, env),
        Cmd::Reduce(a) => reduce_cmd(a, env, false),
        Cmd::Normalize(a) => reduce_cmd(a, env, true),
        Cmd::Translate(a) => translate_cmd(a, env),
        Cmd::Embed(a) => embed_cmd(a, env),
        Cmd::Verify(a) => verify_cmd(a, env),
        Cmd::Peaks(a) => peaks_cmd(a, env),
    }
}

fn spec_json(t: &SpecTerm) -> Value {
    json!({"calculus": t.calculus().as_str(), "term": t.to_string()})
}

fn source_json(s: &Source) -> Value {
    match s {
        Source::Ljmse(e) => to_json(e),
        Source::Spec(t) => spec_json(t),
    }
}

fn parse_cmd(a: &InputArgs, env: &Env) -> Result<Output, CliError> {
    let (src, _) = env.source(a)?;
    Ok(if env.json {
        Output::json(&source_json(&src))
    } else {
        match src {
            Source::Ljmse(e) => Output::text(format!("{e}\n")),
            Source::Spec(t) => Output::text(format!("{t}\n")),
        }
    })
}

fn check_cmd(a: &CheckArgs, env: &Env) -> Result<Output, CliError> {
    let (src, _) = env.source(&a.input)?;
    let ctx = match &a.ctx {
        Some(s) => parse_ctx(s)?,
        None => Ctx::new(),
    };
    let want = a.ty.as_deref().map(parse_type).transpose()?;
    let (hole, ty): (Option<Type>, Type) = match (&src, want) {
        (Source::Ljmse(Expr::CoTerm(_)), Some(_)) => {
            return Err(CliError::Input("--type applies to terms and commands, not co-terms".into()))
        }
        (Source::Ljmse(e), Some(ty)) => {
            check_level2(&ctx, e, &ty)?;
            (None, ty)
        }
        (Source::Ljmse(e), None) => {
            let j = judge(&ctx, e)?;
            (j.in_type, j.out_type)
        }
        (Source::Spec(t), Some(ty)) => {
            check_spec(&ctx, t, &ty)?;
            (None, ty)
        }
        (Source::Spec(t), None) => (None, infer_spec(&ctx, t)?),
    };
    if env.json {
        return Ok(Output::json(&match &hole {
            Some(h) => json!({"in": h.to_string(), "type": ty.to_string()}),
            None => json!({"type": ty.to_string()}),
        }));
    }
    let subject = match &src {
        Source::Ljmse(e) => e.to_string(),
        Source::Spec(t) => t.to_string(),
    };
    Ok(Output::text(match hole {
        Some(h) => format!("{subject} : {ty} (hole {h})\n"),
        None => format!("{subject} : {ty}\n"),
    }))
}

/// A strategy-driven run in a subsystem calculus.
fn spec_trace(t: &SpecTerm, strategy: Strategy, max: usize, lazy: bool) -> (Vec<(SpecRule, SpecTerm)>, bool) {
    let mut rng = match strategy {
        Strategy::Random(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        Strategy::Leftmost => None,
    };
    let mut cur = t.clone();
    let mut steps = Vec::new();
    while steps.len() < max {
        let mut next = if lazy { step_spec_lazy(&cur) } else { step_spec(&cur) };
        if next.is_empty() {
            return (steps, true);
        }
        let i = rng.as_mut().map_or(0, |r| r.gen_range(0..next.len()));
        let step = next.swap_remove(i);
        cur = step.1.clone();
        steps.push(step);
    }
    let normal = if lazy { step_spec_lazy(&cur) } else { step_spec(&cur) }.is_empty();
    (steps, normal)
}

fn status_str(normal: bool) -> &'static str {
    if normal {
        "normal"
    } else {
        "bound-exhausted"
    }
}

fn reduce_cmd(a: &ReduceArgs, env: &Env, to_normal: bool) -> Result<Output, CliError> {
    let (src, _) = env.source(&a.input)?;
    let strategy = env.pick(a.strategy, "strategy", parse_strategy, Strategy::Leftmost)?;
    let has_strategy = a.strategy.is_some() || env.config.get("strategy", parse_strategy)?.is_some();
    let max = env.pick(a.max_steps, "max-steps", parse_num, DEFAULT_MAX_STEPS)?;
    if a.lazy && matches!(src, Source::Ljmse(_)) {
        return Err(CliError::Usage("--lazy applies to the subsystem calculi".into()));
    }

    // One-step reducts.
    if !to_normal && !has_strategy {
        return Ok(match &src {
            Source::Ljmse(e) => {
                let steps = all_steps(e);
                if env.json {
                    let v: Vec<Value> = steps
                        .iter()
                        .map(|s| json!({"rule": s.rule.as_str(), "pos": s.pos, "to": to_json(&s.to)}))
                        .collect();
                    Output::json(&Value::Array(v))
                } else {
                    let mut out = String::new();
                    for s in &steps {
                        writeln!(out, "{} at {:?}: {}", s.rule, s.pos, s.to).unwrap();
                    }
                    Output::text(out)
                }
            }
            Source::Spec(t) => {
                let steps = if a.lazy { step_spec_lazy(t) } else { step_spec(t) };
                if env.json {
                    let v: Vec<Value> = steps
                        .iter()
                        .map(|(r, u)| json!({"rule": r.as_str(), "to": u.to_string()}))
                        .collect();
                    Output::json(&Value::Array(v))
                } else {
                    let mut out = String::new();
                    for (r, u) in &steps {
                        writeln!(out, "{r}: {u}").unwrap();
                    }
                    Output::text(out)
                }
            }
        });
    }

    // A trace under the strategy: lines as (rule, position, expression).
    let (initial, lines, last, normal, json_trace) = match &src {
        Source::Ljmse(e) => {
            let tr = normalize(e, strategy, max);
            let lines: Vec<String> = tr
                .steps
                .iter()
                .map(|s| format!("-> {} at {:?}: {}", s.rule, s.pos, s.to))
                .collect();
            let normal = tr.status == Status::Normal;
            let last = tr.last().clone();
            (e.to_string(), lines, json!({"text": last.to_string(), "ast": to_json(&last)}), normal, tr.to_json())
        }
        Source::Spec(t) => {
            let (steps, normal) = spec_trace(t, strategy, max, a.lazy);
            let lines: Vec<String> = steps.iter().map(|(r, u)| format!("-> {r}: {u}")).collect();
            let last = steps.last().map_or(t, |s| &s.1);
            let v = json!({
                "initial": t.to_string(),
                "steps": steps.iter().map(|(r, u)| json!({"rule": r.as_str(), "to": u.to_string()})).collect::<Vec<_>>(),
                "status": status_str(normal),
            });
            (t.to_string(), lines, spec_json(last), normal, v)
        }
    };
    let mut out = Output::default();
    if !normal {
        out.stderr = format!("note: step bound {max} reached before a normal form\n");
    }
    if env.json {
        out.stdout = if to_normal {
            format!(
                "{}\n",
                json!({"normal_form": last, "steps": lines.len(), "status": status_str(normal)})
            )
        } else {
            format!("{json_trace}\n")
        };
    } else if to_normal {
        out.stdout = format!("{}\n", last["text"].as_str().or(last["term"].as_str()).unwrap_or_default());
    } else {
        out.stdout = format!("{initial}\n");
        for l in lines {
            out.stdout.push_str(&l);
            out.stdout.push('\n');
        }
    }
    Ok(out)
}

fn translate_cmd(a: &TranslateArgs, env: &Env) -> Result<Output, CliError> {
    let (src, _) = env.source(&a.input)?;
    let kind = env.pick(a.kind, "kind", parse_kind, TransKind::Cgps)?;
    let emit = env.pick(a.emit, "emit", parse_emit, Emit::Term)?;
    let ctx = match &a.ctx {
        Some(s) => parse_ctx(s)?,
        None => Ctx::new(),
    };
    let on_ljmse = matches!(kind, TransKind::Cps | TransKind::Cgps | TransKind::CpsSimple);
    let image = match &src {
        Source::Ljmse(Expr::Term(t)) => translate(t, kind),
        Source::Ljmse(e) => {
            return Err(CliError::Input(format!("translate takes a term; got a {}", class_name(e))))
        }
        Source::Spec(s) if on_ljmse => match to_ljmse(s) {
            Some(Expr::Term(t)) => translate(&t, kind),
            _ => return Err(CliError::Input("translate takes a term; got a co-term".into())),
        },
        Source::Spec(s) => cgps_sub(s, kind),
    };
    let image = image.ok_or_else(|| {
        CliError::Input(format!(
            "translation {} does not apply to {} input",
            kind.as_str(),
            match &src {
                Source::Ljmse(_) => "ljmse".to_string(),
                Source::Spec(s) => s.calculus().to_string(),
            }
        ))
    })?;
    let ty = match emit {
        Emit::Term => None,
        Emit::Type | Emit::Both => Some(bar_type(&source_type(&src, &ctx)?, kind)),
    };
    if env.json {
        let mut v = json!({"kind": kind.as_str()});
        if emit != Emit::Type {
            v["term"] = image.to_json();
            v["text"] = json!(image.to_string());
        }
        if let Some(t) = &ty {
            v["type"] = json!(t.to_string());
        }
        return Ok(Output::json(&v));
    }
    Ok(Output::text(match (emit, ty) {
        (Emit::Term, _) | (_, None) => format!("{image}\n"),
        (Emit::Type, Some(t)) => format!("{t}\n"),
        (Emit::Both, Some(t)) => format!("{image}\n: {t}\n"),
    }))
}

fn source_type(src: &Source, ctx: &Ctx) -> Result<Type, CliError> {
    Ok(match src {
        Source::Ljmse(Expr::Term(t)) => infer_term(ctx, t)?,
        Source::Ljmse(e) => judge(ctx, e)?.out_type,
        Source::Spec(s) => infer_spec(ctx, s)?,
    })
}

fn class_name(e: &Expr) -> &'static str {
    match e {
        Expr::Term(_) => "term",
        Expr::CoTerm(_) => "co-term",
        Expr::Command(_) => "command",
    }
}

/// Downward maps: ◦ from λJmse into λJms, then ♯ into λJm.
fn interpret(src: &Source, to: Calculus) -> Result<SpecTerm, CliError> {
    let ljms = match src {
        Source::Ljmse(e) => match map_circ(e) {
            Some(Circ::Term(t)) => SpecTerm::Jms(t),
            Some(Circ::CoTerm(l)) => SpecTerm::JmsCo(l),
            None => return Err(CliError::Input("second-order syntax has no image in ljms".into())),
        },
        Source::Spec(s) => s.clone(),
    };
    match (&ljms, to) {
        (_, Calculus::Jms) if ljms.calculus() == Calculus::Jms => Ok(ljms),
        (SpecTerm::Jms(t), Calculus::Jm) => Ok(SpecTerm::Jm(map_sharp(t))),
        (SpecTerm::JmsCo(l), Calculus::Jm) => Ok(SpecTerm::JmCo(map_sharp_co(l))),
        _ => Err(CliError::Input(format!("no map from {} down to {to}", ljms.calculus()))),
    }
}

fn embed_cmd(a: &EmbedArgs, env: &Env) -> Result<Output, CliError> {
    let input = InputArgs {
        expr: a.input.expr.clone(),
        file: a.input.file.clone(),
        calculus: a.from.or(a.input.calculus),
        level: a.input.level,
        class: a.input.class,
    };
    let (src, from) = env.source(&input)?;
    let to = if a.to == "next" {
        from
            .next()
            .ok_or_else(|| CliError::Input("ljmse is the last calculus of the spectrum".into()))?
    } else {
        parse_calculus(&a.to).map_err(CliError::Usage)?
    };
    if to == from {
        return Err(CliError::Usage(format!("source and target are both {to}")));
    }
    let image = if to > from {
        match &src {
            Source::Spec(s) if a.to == "next" => embed_next(s),
            Source::Spec(s) => embed_to(s, to),
            Source::Ljmse(_) => None,
        }
        .ok_or_else(|| CliError::Input(format!("no embedding from {from} to {to}")))?
    } else {
        Embedded::Spec(interpret(&src, to)?)
    };
    if env.json {
        return Ok(Output::json(&match &image {
            Embedded::Spec(s) => spec_json(s),
            Embedded::Ljmse(e) => json!({"calculus": "ljmse", "term": e.to_string(), "ast": to_json(e)}),
        }));
    }
    Ok(Output::text(format!("{image}\n")))
}

/// Reports tagged with the suite name they ran under. `all` runs the
/// individual suites on separate threads; report order is fixed.
fn run_reports(suite: Suite, name: &str, cfg: &GenConfig) -> Vec<(String, Report)> {
    if suite != Suite::All {
        return run_suite(suite, cfg).into_iter().map(|r| (name.to_string(), r)).collect();
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = Suite::NAMES[1..]
            .iter()
            .map(|&n| {
                let su = Suite::parse(n).expect("listed suite");
                (n, s.spawn(move || run_suite(su, cfg)))
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|(n, h)| {
                let reports = h.join().expect("suite thread panicked");
                reports.into_iter().map(move |r| (n.to_string(), r))
            })
            .collect()
    })
}

/// `DIR/<suite>/<seed>.json`, one report per file.
fn write_golden(dir: &Path, seed: u64, reports: &[(String, Report)]) -> Result<(), CliError> {
    for (name, r) in reports {
        let sub = dir.join(name);
        std::fs::create_dir_all(&sub).map_err(|e| CliError::Io(format!("cannot create {}: {e}", sub.display())))?;
        let path = sub.join(format!("{seed}.json"));
        let body = serde_json::to_string_pretty(&r.to_json()).expect("report serializes");
        std::fs::write(&path, body + "\n").map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify_cmd(a: &VerifyArgs, env: &Env) -> Result<Output, CliError> {
    let name = env.pick(a.suite.clone(), "suite", |s| Ok(s.to_string()), "all".to_string())?;
    let suite = Suite::parse(&name).ok_or_else(|| CliError::Usage(format!("unknown suite `{name}`")))?;
    let d = GenConfig::default();
    let cfg = GenConfig {
        seed: env.seed(a.seed)?,
        count: env.pick(a.count, "count", parse_num, d.count)?,
        max_size: env.pick(a.max_size, "max-size", parse_num, d.max_size)?,
        ..d
    };
    let tagged = run_reports(suite, &name, &cfg);
    if let Some(dir) = &a.golden {
        write_golden(dir, cfg.seed, &tagged)?;
    }
    let reports: Vec<Report> = tagged.into_iter().map(|(_, r)| r).collect();
    let passed = reports.iter().all(Report::passed);
    let mut out = if env.json {
        Output::json(&json!({
            "seed": cfg.seed,
            "count": cfg.count,
            "max_size": cfg.max_size,
            "passed": passed,
            "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = String::new();
        for r in &reports {
            writeln!(s, "{}", r.summary()).unwrap();
            for f in r.failures.iter().take(5) {
                writeln!(s, "  failure: {} / {} / {}", f.term, f.step, f.diagnostic).unwrap();
            }
        }
        Output::text(s)
    };
    if !passed {
        out.code = 2;
    }
    Ok(out)
}

fn peaks_cmd(a: &PeaksArgs, env: &Env) -> Result<Output, CliError> {
    let depth = env.pick(a.depth, "depth", parse_num, 1)?;
    let seed = env.seed(a.seed)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut failed = false;
    for p in critical_peaks(depth, seed) {
        let (l, r) = (&p.left.to, &p.right.to);
        let joined = if p.family.trivial() {
            Some(l.canon() == r.canon())
        } else {
            joins_within(l, r, 10)
        };
        failed |= joined == Some(false);
        let verdict = match joined {
            Some(true) => "joined",
            Some(false) => "NOT JOINED",
            None => "inconclusive",
        };
        writeln!(text, "{}: {}\n  {} <- . -> {}\n  {verdict}", p.family.as_str(), p.expr, l, r).unwrap();
        rows.push(json!({
            "family": p.family.as_str(),
            "expr": p.expr.to_string(),
            "left": {"rule": p.left.rule.as_str(), "pos": p.left.pos, "to": l.to_string()},
            "right": {"rule": p.right.rule.as_str(), "pos": p.right.pos, "to": r.to_string()},
            "joined": joined,
        }));
    }
    let mut out = if env.json {
        Output::json(&Value::Array(rows))
    } else {
        Output::text(text)
    };
    if failed {
        out.code = 2;
    }
    Ok(out)
}
