//! The plain λ-calculus with β.

use std::collections::BTreeSet;
use std::fmt;

use super::{bound_name, fresh_avoiding};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LTerm {
    Var(String),
    Lam(String, Box<LTerm>),
    App(Box<LTerm>, Box<LTerm>),
}

impl LTerm {
    pub fn var(x: &str) -> LTerm {
        LTerm::Var(x.to_string())
    }
    pub fn lam(x: &str, b: LTerm) -> LTerm {
        LTerm::Lam(x.to_string(), Box::new(b))
    }
    pub fn app(t: LTerm, u: LTerm) -> LTerm {
        LTerm::App(Box::new(t), Box::new(u))
    }

    pub fn size(&self) -> usize {
        match self {
            LTerm::Var(_) => 1,
            LTerm::Lam(_, b) => 1 + b.size(),
            LTerm::App(t, u) => 1 + t.size() + u.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.fv(&mut Vec::new(), &mut out);
        out
    }

    fn fv(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            LTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            LTerm::Lam(x, b) => {
                bound.push(x.clone());
                b.fv(bound, out);
                bound.pop();
            }
            LTerm::App(t, u) => {
                t.fv(bound, out);
                u.fv(bound, out);
            }
        }
    }

    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            LTerm::Var(x) => {
                out.insert(x.clone());
            }
            LTerm::Lam(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
            LTerm::App(t, u) => {
                t.all_names(out);
                u.all_names(out);
            }
        }
    }

    /// Binders renamed by depth, so alpha-equivalent terms coincide.
    pub fn canon(&self) -> LTerm {
        fn go(t: &LTerm, env: &mut Vec<(String, String)>) -> LTerm {
            match t {
                LTerm::Var(x) => LTerm::Var(
                    env.iter()
                        .rev()
                        .find(|(a, _)| a == x)
                        .map(|(_, b)| b.clone())
                        .unwrap_or_else(|| x.clone()),
                ),
                LTerm::Lam(x, b) => {
                    let n = bound_name(env.len());
                    env.push((x.clone(), n.clone()));
                    let b = go(b, env);
                    env.pop();
                    LTerm::Lam(n, Box::new(b))
                }
                LTerm::App(t, u) => LTerm::app(go(t, env), go(u, env)),
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &LTerm) -> bool {
        self.canon() == other.canon()
    }
}

/// Capture-avoiding `[u/x]t`.
pub fn subst(t: &LTerm, x: &str, u: &LTerm) -> LTerm {
    let fvu = u.free_vars();
    let mut names = BTreeSet::new();
    t.all_names(&mut names);
    u.all_names(&mut names);
    names.insert(x.to_string());
    let mut fresh = fresh_avoiding(names);
    go(t, x, u, &fvu, &mut fresh)
}

fn go(t: &LTerm, x: &str, u: &LTerm, fvu: &BTreeSet<String>, fresh: &mut crate::fresh::Fresh) -> LTerm {
    match t {
        LTerm::Var(y) if y == x => u.clone(),
        LTerm::Var(_) => t.clone(),
        LTerm::Lam(y, _) if y == x => t.clone(),
        LTerm::Lam(y, b) => {
            if fvu.contains(y) && b.free_vars().contains(x) {
                let y2 = fresh.name(y);
                let b2 = go(b, y, &LTerm::Var(y2.clone()), &BTreeSet::from([y2.clone()]), fresh);
                LTerm::Lam(y2, Box::new(go(&b2, x, u, fvu, fresh)))
            } else {
                LTerm::Lam(y.clone(), Box::new(go(b, x, u, fvu, fresh)))
            }
        }
        LTerm::App(f, a) => LTerm::app(go(f, x, u, fvu, fresh), go(a, x, u, fvu, fresh)),
    }
}

/// Every one-step β-reduct, root first.
pub fn steps(t: &LTerm) -> Vec<LTerm> {
    let mut out = Vec::new();
    match t {
        LTerm::Var(_) => {}
        LTerm::Lam(x, b) => {
            for b2 in steps(b) {
                out.push(LTerm::lam(x, b2));
            }
        }
        LTerm::App(f, a) => {
            if let LTerm::Lam(x, b) = &**f {
                out.push(subst(b, x, a));
            }
            for f2 in steps(f) {
                out.push(LTerm::App(Box::new(f2), a.clone()));
            }
            for a2 in steps(a) {
                out.push(LTerm::App(f.clone(), Box::new(a2)));
            }
        }
    }
    out
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LTerm::Var(x) => f.write_str(x),
            LTerm::Lam(x, b) => write!(f, "\\{x}.{b}"),
            LTerm::App(t, u) => {
                match &**t {
                    LTerm::Lam(..) => write!(f, "({t})")?,
                    _ => write!(f, "{t}")?,
                }
                match &**u {
                    LTerm::Var(_) => write!(f, " {u}"),
                    _ => write!(f, " ({u})"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_avoids_capture() {
        // (λx.λy.x) y → λy'.y
        let t = LTerm::app(LTerm::lam("x", LTerm::lam("y", LTerm::var("x"))), LTerm::var("y"));
        let r = steps(&t);
        assert_eq!(r.len(), 1);
        assert!(r[0].alpha_eq(&LTerm::lam("z", LTerm::var("y"))));
    }

    #[test]
    fn printing() {
        let t = LTerm::app(LTerm::lam("x", LTerm::var("x")), LTerm::app(LTerm::var("f"), LTerm::var("a")));
        assert_eq!(t.to_string(), "(\\x.x) (f a)");
    }
}
