//! Implicational types with type variables, a distinguished ⊥ and an
//! optional second-order quantifier.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::fresh::Fresh;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    Bot,
    Arrow(Box<Type>, Box<Type>),
    Forall(String, Box<Type>),
}

/// Typing context: each variable declared at most once.
pub type Ctx = BTreeMap<String, Type>;

impl Type {
    pub fn var(x: &str) -> Type {
        Type::Var(x.to_string())
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, a: Type) -> Type {
        Type::Forall(x.to_string(), Box::new(a))
    }

    /// `¬A = A ⊃ ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Type) -> Type {
        Type::arrow(a, Type::Bot)
    }

    /// The garbage type `⊤ = ⊥ ⊃ ⊥`.
    pub fn top() -> Type {
        Type::arrow(Type::Bot, Type::Bot)
    }

    pub fn has_forall(&self) -> bool {
        match self {
            Type::Var(_) | Type::Bot => false,
            Type::Arrow(a, b) => a.has_forall() || b.has_forall(),
            Type::Forall(..) => true,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) | Type::Bot => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Forall(_, a) => 1 + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Type::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Type::Bot => {}
            Type::Arrow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Type::Forall(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// All type-variable names occurring anywhere, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Var(x) => {
                out.insert(x.clone());
            }
            Type::Bot => {}
            Type::Arrow(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Type::Forall(x, a) => {
                out.insert(x.clone());
                a.all_vars(out);
            }
        }
    }

    /// Capture-avoiding `[b/x]self`.
    pub fn subst(&self, x: &str, b: &Type) -> Type {
        let fv = b.free_vars();
        self.subst_with(x, b, &fv)
    }

    fn subst_with(&self, x: &str, b: &Type, fv: &BTreeSet<String>) -> Type {
        match self {
            Type::Var(y) if y == x => b.clone(),
            Type::Var(_) | Type::Bot => self.clone(),
            Type::Arrow(l, r) => Type::arrow(l.subst_with(x, b, fv), r.subst_with(x, b, fv)),
            Type::Forall(y, body) => {
                if y == x || !body.free_vars().contains(x) {
                    return self.clone();
                }
                if fv.contains(y) {
                    let mut avoid = fv.clone();
                    body.all_vars(&mut avoid);
                    avoid.insert(x.to_string());
                    let y2 = Fresh::with_avoid(avoid).name(y);
                    let body2 = body.subst(y, &Type::Var(y2.clone()));
                    Type::Forall(y2, Box::new(body2.subst_with(x, b, fv)))
                } else {
                    Type::Forall(y.clone(), Box::new(body.subst_with(x, b, fv)))
                }
            }
        }
    }

    /// Equality up to renaming of ∀-bound variables.
    pub fn alpha_eq(&self, other: &Type) -> bool {
        fn go(a: &Type, b: &Type, env: &mut Vec<(String, String)>) -> bool {
            match (a, b) {
                (Type::Var(x), Type::Var(y)) => {
                    for (l, r) in env.iter().rev() {
                        if l == x || r == y {
                            return l == x && r == y;
                        }
                    }
                    x == y
                }
                (Type::Bot, Type::Bot) => true,
                (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => go(a1, a2, env) && go(b1, b2, env),
                (Type::Forall(x, a1), Type::Forall(y, a2)) => {
                    env.push((x.clone(), y.clone()));
                    let r = go(a1, a2, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Canonical representative: bound variables renamed by binding depth.
    pub fn canon(&self) -> Type {
        fn go(t: &Type, env: &mut Vec<(String, String)>) -> Type {
            match t {
                Type::Var(x) => match env.iter().rev().find(|(n, _)| n == x) {
                    Some((_, c)) => Type::Var(c.clone()),
                    None => t.clone(),
                },
                Type::Bot => Type::Bot,
                Type::Arrow(a, b) => Type::arrow(go(a, env), go(b, env)),
                Type::Forall(x, a) => {
                    let c = format!("%{}", env.len());
                    env.push((x.clone(), c.clone()));
                    let body = go(a, env);
                    env.pop();
                    Type::Forall(c, Box::new(body))
                }
            }
        }
        go(self, &mut Vec::new())
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(x) => write!(f, "{x}"),
            Type::Bot => write!(f, "Bot"),
            Type::Arrow(a, b) => {
                match **a {
                    Type::Arrow(..) | Type::Forall(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, "->{b}")
            }
            Type::Forall(x, a) => write!(f, "forall {x}. {a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shadowed_forall_is_untouched() {
        let t = Type::forall("X", Type::var("X"));
        assert_eq!(t.subst("X", &Type::var("Y")), t);
    }

    #[test]
    fn subst_renames_to_avoid_capture() {
        let t = Type::forall("Y", Type::arrow(Type::var("X"), Type::var("Y")));
        let r = t.subst("X", &Type::var("Y"));
        match &r {
            Type::Forall(z, body) => {
                assert_ne!(z, "Y");
                assert_eq!(**body, Type::arrow(Type::var("Y"), Type::var(z)));
            }
            _ => panic!("expected a quantifier"),
        }
    }

    #[test]
    fn display_parenthesises_left_arrows() {
        let t = Type::arrow(Type::arrow(Type::var("X"), Type::var("Y")), Type::Bot);
        assert_eq!(t.to_string(), "(X->Y)->Bot");
        assert!(Type::forall("A", Type::var("A")).alpha_eq(&Type::forall("B", Type::var("B"))));
    }
}
