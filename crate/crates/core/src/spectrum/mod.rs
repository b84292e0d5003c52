//! The subsystem calculi λ, λJ, λJm and λJms, their reductions, the
//! embeddings between them and the interpretation maps used for
//! confluence arguments.
//!
//! Each calculus has its own AST; `SpecTerm` tags a value with the calculus
//! it belongs to, so expressions of different calculi never mix.

pub mod lambda;
pub mod lj;
pub mod ljm;
pub mod ljms;
pub mod maps;
mod parse;
mod typing;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::fresh::Fresh;
use crate::search::{bfs, Found};
use crate::syntax::{Expr, ParseError};

pub use lambda::LTerm;
pub use lj::{JArg, JTerm};
pub use ljm::{MArg, MCo, MTerm};
pub use ljms::{SCo, STerm};
pub use maps::{
    circ_command, circ_coterm, circ_term, embed_e, embed_e_co, embed_j, embed_m, embed_s, map_circ, map_sharp,
    map_sharp_co, mu_nf, Circ,
};
pub use parse::parse_spec;
pub use typing::{check_spec, infer_spec};

/// Name given to the binder at depth `d` by `canon`; never a valid
/// identifier, so it cannot clash with free names.
pub(crate) fn bound_name(d: usize) -> String {
    format!("%{d}")
}

/// Chooses the new name of a binder from its old name and depth.
pub(crate) type Nm<'a> = &'a mut dyn FnMut(&str, usize) -> String;

pub(crate) fn fresh_avoiding(names: BTreeSet<String>) -> Fresh {
    Fresh::with_avoid(names)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Calculus {
    Lambda,
    J,
    Jm,
    Jms,
    Jmse,
}

impl Calculus {
    pub const SPECTRUM: [Calculus; 4] = [Calculus::Lambda, Calculus::J, Calculus::Jm, Calculus::Jms];

    pub fn as_str(self) -> &'static str {
        match self {
            Calculus::Lambda => "lambda",
            Calculus::J => "lj",
            Calculus::Jm => "ljm",
            Calculus::Jms => "ljms",
            Calculus::Jmse => "ljmse",
        }
    }

    pub fn next(self) -> Option<Calculus> {
        match self {
            Calculus::Lambda => Some(Calculus::J),
            Calculus::J => Some(Calculus::Jm),
            Calculus::Jm => Some(Calculus::Jms),
            Calculus::Jms => Some(Calculus::Jmse),
            Calculus::Jmse => None,
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Calculus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lambda" | "λ" | "l" => Ok(Calculus::Lambda),
            "lj" => Ok(Calculus::J),
            "ljm" => Ok(Calculus::Jm),
            "ljms" => Ok(Calculus::Jms),
            "ljmse" => Ok(Calculus::Jmse),
            _ => Err(format!("unknown calculus `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecRule {
    Beta,
    Beta1,
    Beta2,
    Pi,
    PiHat,
    Sigma,
    Mu,
}

impl SpecRule {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecRule::Beta => "beta",
            SpecRule::Beta1 => "beta1",
            SpecRule::Beta2 => "beta2",
            SpecRule::Pi => "pi",
            SpecRule::PiHat => "pi-hat",
            SpecRule::Sigma => "sigma",
            SpecRule::Mu => "mu",
        }
    }
}

impl fmt::Display for SpecRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A generalised argument: the `R`, `S` of the π rules.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GenArg {
    J(JArg),
    Jm(MArg),
}

/// An expression of one of the subsystem calculi.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpecTerm {
    Lambda(LTerm),
    J(JTerm),
    JArg(JArg),
    Jm(MTerm),
    JmCo(MCo),
    JmArg(MArg),
    Jms(STerm),
    JmsCo(SCo),
}

impl From<GenArg> for SpecTerm {
    fn from(r: GenArg) -> Self {
        match r {
            GenArg::J(r) => SpecTerm::JArg(r),
            GenArg::Jm(r) => SpecTerm::JmArg(r),
        }
    }
}

impl SpecTerm {
    pub fn calculus(&self) -> Calculus {
        match self {
            SpecTerm::Lambda(_) => Calculus::Lambda,
            SpecTerm::J(_) | SpecTerm::JArg(_) => Calculus::J,
            SpecTerm::Jm(_) | SpecTerm::JmCo(_) | SpecTerm::JmArg(_) => Calculus::Jm,
            SpecTerm::Jms(_) | SpecTerm::JmsCo(_) => Calculus::Jms,
        }
    }

    pub fn is_term(&self) -> bool {
        matches!(self, SpecTerm::Lambda(_) | SpecTerm::J(_) | SpecTerm::Jm(_) | SpecTerm::Jms(_))
    }

    pub fn size(&self) -> usize {
        match self {
            SpecTerm::Lambda(t) => t.size(),
            SpecTerm::J(t) => t.size(),
            SpecTerm::JArg(r) => r.size(),
            SpecTerm::Jm(t) => t.size(),
            SpecTerm::JmCo(l) => l.size(),
            SpecTerm::JmArg(r) => r.u.size() + r.l.size(),
            SpecTerm::Jms(t) => t.size(),
            SpecTerm::JmsCo(l) => l.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            SpecTerm::Lambda(t) => t.free_vars(),
            SpecTerm::J(t) => t.free_vars(),
            SpecTerm::JArg(r) => r.free_vars(),
            SpecTerm::Jm(t) => t.free_vars(),
            SpecTerm::JmCo(l) => l.free_vars(),
            SpecTerm::JmArg(r) => r.free_vars(),
            SpecTerm::Jms(t) => t.free_vars(),
            SpecTerm::JmsCo(l) => l.free_vars(),
        }
    }

    /// Alpha-normal form: bound names depend only on binding depth.
    pub fn canon(&self) -> SpecTerm {
        match self {
            SpecTerm::Lambda(t) => SpecTerm::Lambda(t.canon()),
            SpecTerm::J(t) => SpecTerm::J(t.canon()),
            SpecTerm::JArg(r) => SpecTerm::JArg(r.canon()),
            SpecTerm::Jm(t) => SpecTerm::Jm(t.canon()),
            SpecTerm::JmCo(l) => SpecTerm::JmCo(l.canon()),
            SpecTerm::JmArg(r) => SpecTerm::JmArg(MArg::new(r.u.canon(), r.l.canon())),
            SpecTerm::Jms(t) => SpecTerm::Jms(t.canon()),
            SpecTerm::JmsCo(l) => SpecTerm::JmsCo(l.canon()),
        }
    }

    pub fn alpha_eq(&self, other: &SpecTerm) -> bool {
        self.canon() == other.canon()
    }
}

impl fmt::Display for SpecTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecTerm::Lambda(t) => t.fmt(f),
            SpecTerm::J(t) => t.fmt(f),
            SpecTerm::JArg(r) => r.fmt(f),
            SpecTerm::Jm(t) => t.fmt(f),
            SpecTerm::JmCo(l) => l.fmt(f),
            SpecTerm::JmArg(r) => r.fmt(f),
            SpecTerm::Jms(t) => t.fmt(f),
            SpecTerm::JmsCo(l) => l.fmt(f),
        }
    }
}

fn lift<T>(v: Vec<(SpecRule, T)>, f: impl Fn(T) -> SpecTerm) -> Vec<(SpecRule, SpecTerm)> {
    v.into_iter().map(|(r, t)| (r, f(t))).collect()
}

fn steps_with(t: &SpecTerm, lazy: bool) -> Vec<(SpecRule, SpecTerm)> {
    match t {
        SpecTerm::Lambda(t) => lambda::steps(t)
            .into_iter()
            .map(|t| (SpecRule::Beta, SpecTerm::Lambda(t)))
            .collect(),
        SpecTerm::J(t) => lift(lj::steps(t, lazy), SpecTerm::J),
        SpecTerm::JArg(r) => lift(lj::steps_arg(r, lazy), SpecTerm::JArg),
        SpecTerm::Jm(t) => lift(ljm::steps(t, lazy), SpecTerm::Jm),
        SpecTerm::JmCo(l) => lift(ljm::steps_co(l, lazy), SpecTerm::JmCo),
        SpecTerm::JmArg(r) => {
            let mut out = lift(ljm::steps(&r.u, lazy), |u| SpecTerm::JmArg(MArg::new(u, r.l.clone())));
            out.extend(lift(ljm::steps_co(&r.l, lazy), |l| SpecTerm::JmArg(MArg::new(r.u.clone(), l))));
            out
        }
        SpecTerm::Jms(t) => lift(ljms::steps(t), SpecTerm::Jms),
        SpecTerm::JmsCo(l) => lift(ljms::steps_co(l), SpecTerm::JmsCo),
    }
}

/// Every one-step reduct under the calculus' own rules (eager π).
pub fn step_spec(t: &SpecTerm) -> Vec<(SpecRule, SpecTerm)> {
    steps_with(t, false)
}

/// Every one-step reduct with π replaced by the lazy π̂.
pub fn step_spec_lazy(t: &SpecTerm) -> Vec<(SpecRule, SpecTerm)> {
    steps_with(t, true)
}

/// The π̂-steps alone.
pub fn step_lazy_pi(t: &SpecTerm) -> Vec<SpecTerm> {
    steps_with(t, true)
        .into_iter()
        .filter(|(r, _)| *r == SpecRule::PiHat)
        .map(|(_, t)| t)
        .collect()
}

/// Eager append `a@b`, for λJ arguments, λJm co-terms and arguments, and
/// λJms co-terms. `None` when the pair does not form an append.
pub fn append_spec(a: &SpecTerm, b: &SpecTerm) -> Option<SpecTerm> {
    Some(match (a, b) {
        (SpecTerm::JArg(r), SpecTerm::JArg(s)) => SpecTerm::JArg(lj::append(r, s)),
        (SpecTerm::JmArg(r), SpecTerm::JmArg(s)) => SpecTerm::JmArg(ljm::append(r, s)),
        (SpecTerm::JmCo(l), SpecTerm::JmArg(s)) => SpecTerm::JmCo(ljm::append_co(l, s)),
        (SpecTerm::JmsCo(l), SpecTerm::JmsCo(l2)) => SpecTerm::JmsCo(ljms::append(l, l2)),
        _ => return None,
    })
}

/// π-normal form in λJ and λJm.
pub fn pi_nf(t: &SpecTerm) -> Option<SpecTerm> {
    Some(match t {
        SpecTerm::J(t) => SpecTerm::J(lj::pi_nf(t)),
        SpecTerm::JArg(r) => SpecTerm::JArg(lj::pi_nf_arg(r)),
        SpecTerm::Jm(t) => SpecTerm::Jm(ljm::pi_nf(t)),
        SpecTerm::JmCo(l) => SpecTerm::JmCo(ljm::pi_nf_co(l)),
        _ => return None,
    })
}

/// Image in either a spectrum calculus or λJmse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Embedded {
    Spec(SpecTerm),
    Ljmse(Expr),
}

impl fmt::Display for Embedded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Embedded::Spec(t) => t.fmt(f),
            Embedded::Ljmse(e) => e.fmt(f),
        }
    }
}

/// The embedding into the next calculus of the spectrum.
pub fn embed_next(t: &SpecTerm) -> Option<Embedded> {
    Some(match t {
        SpecTerm::Lambda(t) => Embedded::Spec(SpecTerm::J(embed_j(t))),
        SpecTerm::J(t) => Embedded::Spec(SpecTerm::Jm(embed_m(t))),
        SpecTerm::JArg(r) => Embedded::Spec(SpecTerm::JmArg(maps::embed_m_arg(r))),
        SpecTerm::Jm(t) => Embedded::Spec(SpecTerm::Jms(embed_s(t))),
        SpecTerm::JmCo(l) => Embedded::Spec(SpecTerm::JmsCo(maps::embed_s_co(l))),
        SpecTerm::Jms(t) => Embedded::Ljmse(Expr::Term(embed_e(t))),
        SpecTerm::JmsCo(l) => Embedded::Ljmse(Expr::CoTerm(embed_e_co(l))),
        SpecTerm::JmArg(_) => return None,
    })
}

/// Iterate embeddings until `target` is reached.
pub fn embed_to(t: &SpecTerm, target: Calculus) -> Option<Embedded> {
    let mut cur = Embedded::Spec(t.clone());
    loop {
        match &cur {
            Embedded::Spec(s) if s.calculus() == target => return Some(cur),
            Embedded::Spec(s) if s.calculus() > target => return None,
            Embedded::Spec(s) => cur = embed_next(s)?,
            Embedded::Ljmse(_) if target == Calculus::Jmse => return Some(cur),
            Embedded::Ljmse(_) => return None,
        }
    }
}

/// The composite embedding `g_L` into λJmse.
pub fn to_ljmse(t: &SpecTerm) -> Option<Expr> {
    match embed_to(t, Calculus::Jmse)? {
        Embedded::Ljmse(e) => Some(e),
        Embedded::Spec(_) => None,
    }
}

/// Reachability inside a spectrum calculus, keyed up to alpha-equivalence.
pub fn reach_spec(
    from: &SpecTerm,
    to: &SpecTerm,
    plus: bool,
    rules: &[SpecRule],
    max_nodes: usize,
    max_depth: usize,
) -> Found<SpecTerm> {
    let lazy = rules.contains(&SpecRule::PiHat);
    let goal = to.canon();
    bfs(
        from,
        |t| t.canon(),
        |t| {
            steps_with(t, lazy)
                .into_iter()
                .filter(|(r, _)| rules.contains(r))
                .map(|(_, t)| t)
                .collect()
        },
        |t| t.canon() == goal,
        plus,
        max_nodes,
        max_depth,
    )
}

/// Every rule of a calculus, with eager π.
pub fn rules_of(c: Calculus) -> &'static [SpecRule] {
    match c {
        Calculus::Lambda => &[SpecRule::Beta],
        Calculus::J => &[SpecRule::Beta, SpecRule::Pi],
        Calculus::Jm => &[SpecRule::Beta1, SpecRule::Beta2, SpecRule::Pi, SpecRule::Mu],
        Calculus::Jms | Calculus::Jmse => &[SpecRule::Beta, SpecRule::Pi, SpecRule::Sigma, SpecRule::Mu],
    }
}

pub fn parse_in(c: Calculus, src: &str) -> Result<SpecTerm, ParseError> {
    parse_spec(c, src)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: Calculus, s: &str) -> SpecTerm {
        parse_spec(c, s).unwrap()
    }

    #[test]
    fn documented_rule_instances() {
        let t = p(Calculus::J, "(\\x.x)(u, y.y)");
        assert_eq!(step_spec(&t), vec![(SpecRule::Beta, p(Calculus::J, "u"))]);
        let t = p(Calculus::Jms, "t (x)x");
        assert_eq!(step_spec(&t), vec![(SpecRule::Sigma, p(Calculus::Jms, "t"))]);
    }

    #[test]
    fn append_rejects_mixed_kinds() {
        let a = p(Calculus::J, "x");
        assert!(append_spec(&a, &a).is_none());
    }

    #[test]
    fn pi_nf_agrees_with_exhaustive_pi() {
        let srcs = [
            "t(a, x.x)(b, y.y)(c, z.z)",
            "t(a, x.x(q, r.r))(b, y.y)",
            "\\w.w(a, x.x)(b, y.y)",
        ];
        for s in srcs {
            let t = p(Calculus::J, s);
            let mut cur = t.clone();
            while let Some((_, n)) = step_spec(&cur).into_iter().find(|(r, _)| *r == SpecRule::Pi) {
                cur = n;
            }
            assert!(pi_nf(&t).unwrap().alpha_eq(&cur), "{s}");
        }
    }

    #[test]
    fn embedding_chain_reaches_ljmse() {
        let t = SpecTerm::Lambda(LTerm::app(LTerm::var("f"), LTerm::var("a")));
        let e = to_ljmse(&t).unwrap();
        assert_eq!(e.to_string(), "{f a::(x) x []}");
    }

    #[test]
    fn calculus_names_round_trip() {
        for c in Calculus::SPECTRUM {
            assert_eq!(c.as_str().parse::<Calculus>().unwrap(), c);
        }
    }
}
