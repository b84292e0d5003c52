//! First-order unification over types with metavariables, extended with
//! levelled skolems so that ∀-types can be compared, opened and closed.

use std::collections::{BTreeSet, HashMap};

use crate::fresh::Fresh;
use crate::types::Type;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UTy {
    /// A named type variable: a rigid constant or a ∀-bound name.
    Var(String),
    Skolem(u32),
    Meta(u32),
    Bot,
    Arrow(Box<UTy>, Box<UTy>),
    Forall(String, Box<UTy>),
}

impl UTy {
    pub fn arrow(a: UTy, b: UTy) -> UTy {
        UTy::Arrow(Box::new(a), Box::new(b))
    }

    pub fn from_type(t: &Type) -> UTy {
        Self::from_type_in(t, &HashMap::new())
    }

    /// Convert, replacing free names found in `env` (e.g. `ΛX`-bound
    /// variables mapped to skolems).
    pub fn from_type_in(t: &Type, env: &HashMap<String, UTy>) -> UTy {
        fn go(t: &Type, env: &HashMap<String, UTy>, bound: &mut Vec<String>) -> UTy {
            match t {
                Type::Var(x) if !bound.contains(x) => env.get(x).cloned().unwrap_or(UTy::Var(x.clone())),
                Type::Var(x) => UTy::Var(x.clone()),
                Type::Bot => UTy::Bot,
                Type::Arrow(a, b) => UTy::arrow(go(a, env, bound), go(b, env, bound)),
                Type::Forall(x, a) => {
                    bound.push(x.clone());
                    let body = go(a, env, bound);
                    bound.pop();
                    UTy::Forall(x.clone(), Box::new(body))
                }
            }
        }
        go(t, env, &mut Vec::new())
    }

    fn free_names(&self, out: &mut BTreeSet<String>) {
        match self {
            UTy::Var(x) => {
                out.insert(x.clone());
            }
            UTy::Arrow(a, b) => {
                a.free_names(out);
                b.free_names(out);
            }
            UTy::Forall(x, a) => {
                let mut inner = BTreeSet::new();
                a.free_names(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
            _ => {}
        }
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            UTy::Var(x) => {
                out.insert(x.clone());
            }
            UTy::Arrow(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            UTy::Forall(x, a) => {
                out.insert(x.clone());
                a.all_names(out);
            }
            _ => {}
        }
    }

    /// Capture-avoiding replacement of the named variable `x`.
    pub fn subst_name(&self, x: &str, s: &UTy) -> UTy {
        match self {
            UTy::Var(y) if y == x => s.clone(),
            UTy::Arrow(a, b) => UTy::arrow(a.subst_name(x, s), b.subst_name(x, s)),
            UTy::Forall(y, a) if y != x => {
                let mut fs = BTreeSet::new();
                s.free_names(&mut fs);
                if fs.contains(y) {
                    let mut avoid = fs;
                    a.all_names(&mut avoid);
                    avoid.insert(x.to_string());
                    let y2 = Fresh::with_avoid(avoid).name(y);
                    let a2 = a.subst_name(y, &UTy::Var(y2.clone()));
                    UTy::Forall(y2, Box::new(a2.subst_name(x, s)))
                } else {
                    UTy::Forall(y.clone(), Box::new(a.subst_name(x, s)))
                }
            }
            _ => self.clone(),
        }
    }

    fn replace_skolem(&self, k: u32, s: &UTy) -> UTy {
        match self {
            UTy::Skolem(j) if *j == k => s.clone(),
            UTy::Arrow(a, b) => UTy::arrow(a.replace_skolem(k, s), b.replace_skolem(k, s)),
            UTy::Forall(y, a) => UTy::Forall(y.clone(), Box::new(a.replace_skolem(k, s))),
            _ => self.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnifyError {
    Clash,
    Occurs,
    /// A skolem would leave its scope.
    Escape,
}

#[derive(Clone, Debug, Default)]
pub struct Unifier {
    metas: Vec<(Option<UTy>, u32)>,
    skolems: Vec<u32>,
    level: u32,
}

impl Unifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn meta(&mut self) -> UTy {
        self.metas.push((None, self.level));
        UTy::Meta(self.metas.len() as u32 - 1)
    }

    /// Enter a new scope and return a skolem living in it.
    pub fn enter_skolem(&mut self) -> UTy {
        self.level += 1;
        self.skolems.push(self.level);
        UTy::Skolem(self.skolems.len() as u32 - 1)
    }

    /// Leave the innermost scope; metas created inside are lowered.
    pub fn leave(&mut self) {
        self.level -= 1;
        for m in self.metas.iter_mut() {
            if m.0.is_none() && m.1 > self.level {
                m.1 = self.level;
            }
        }
    }

    /// Resolve solved metas at the head.
    pub fn head(&self, t: &UTy) -> UTy {
        let mut cur = t.clone();
        while let UTy::Meta(m) = cur {
            match &self.metas[m as usize].0 {
                Some(s) => cur = s.clone(),
                None => return cur,
            }
        }
        cur
    }

    pub fn zonk(&self, t: &UTy) -> UTy {
        match self.head(t) {
            UTy::Arrow(a, b) => UTy::arrow(self.zonk(&a), self.zonk(&b)),
            UTy::Forall(x, a) => UTy::Forall(x, Box::new(self.zonk(&a))),
            other => other,
        }
    }

    fn occurs_and_adjust(&mut self, m: u32, lvl: u32, t: &UTy) -> Result<(), UnifyError> {
        match self.head(t) {
            UTy::Meta(k) => {
                if k == m {
                    return Err(UnifyError::Occurs);
                }
                let e = &mut self.metas[k as usize].1;
                if *e > lvl {
                    *e = lvl;
                }
                Ok(())
            }
            UTy::Skolem(k) => {
                if self.skolems[k as usize] > lvl {
                    Err(UnifyError::Escape)
                } else {
                    Ok(())
                }
            }
            UTy::Arrow(a, b) => {
                self.occurs_and_adjust(m, lvl, &a)?;
                self.occurs_and_adjust(m, lvl, &b)
            }
            UTy::Forall(_, a) => self.occurs_and_adjust(m, lvl, &a),
            UTy::Var(_) | UTy::Bot => Ok(()),
        }
    }

    pub fn unify(&mut self, a: &UTy, b: &UTy) -> Result<(), UnifyError> {
        let a = self.head(a);
        let b = self.head(b);
        match (&a, &b) {
            (UTy::Meta(m), UTy::Meta(k)) if m == k => Ok(()),
            (UTy::Meta(m), t) | (t, UTy::Meta(m)) => {
                let lvl = self.metas[*m as usize].1;
                self.occurs_and_adjust(*m, lvl, t)?;
                self.metas[*m as usize].0 = Some(t.clone());
                Ok(())
            }
            (UTy::Var(x), UTy::Var(y)) if x == y => Ok(()),
            (UTy::Skolem(x), UTy::Skolem(y)) if x == y => Ok(()),
            (UTy::Bot, UTy::Bot) => Ok(()),
            (UTy::Arrow(a1, b1), UTy::Arrow(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            (UTy::Forall(x, a1), UTy::Forall(y, a2)) => {
                let s = self.enter_skolem();
                let r = self.unify(&a1.subst_name(x, &s), &a2.subst_name(y, &s));
                self.leave();
                r
            }
            _ => Err(UnifyError::Clash),
        }
    }

    /// Close a type over the skolem `s` of the scope just left: `∀X.τ[X/s]`.
    pub fn generalize(&self, s: &UTy, body: &UTy, hint: &str) -> UTy {
        let body = self.zonk(body);
        let UTy::Skolem(k) = s else {
            panic!("generalize expects a skolem")
        };
        let mut avoid = BTreeSet::new();
        body.all_names(&mut avoid);
        let x = Fresh::with_avoid(avoid).name(hint);
        UTy::Forall(x.clone(), Box::new(body.replace_skolem(*k, &UTy::Var(x))))
    }

    /// Named type variables free in a zonked type.
    pub fn free_names(&self, t: &UTy) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.zonk(t).free_names(&mut out);
        out
    }

    pub fn skolems_in(&self, t: &UTy) -> BTreeSet<u32> {
        fn go(t: &UTy, out: &mut BTreeSet<u32>) {
            match t {
                UTy::Skolem(k) => {
                    out.insert(*k);
                }
                UTy::Arrow(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                UTy::Forall(_, a) => go(a, out),
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(&self.zonk(t), &mut out);
        out
    }

    /// Read back a type, naming unsolved metas via `names` (avoiding
    /// `avoid`); `None` if a skolem is still present.
    pub fn to_type(&self, t: &UTy, names: &mut Namer) -> Option<Type> {
        Some(match self.zonk(t) {
            UTy::Var(x) => Type::Var(x),
            UTy::Bot => Type::Bot,
            UTy::Meta(m) => Type::Var(names.name_of(m)),
            UTy::Skolem(_) => return None,
            UTy::Arrow(a, b) => Type::arrow(self.to_type(&a, names)?, self.to_type(&b, names)?),
            UTy::Forall(x, a) => Type::Forall(x, Box::new(self.to_type(&a, names)?)),
        })
    }
}

/// Assigns readable names `A, B, C, ...` to metavariables.
#[derive(Debug, Default)]
pub struct Namer {
    fresh: Fresh,
    assigned: HashMap<u32, String>,
    next: usize,
}

impl Namer {
    pub fn new(avoid: BTreeSet<String>) -> Self {
        Namer {
            fresh: Fresh::with_avoid(avoid),
            assigned: HashMap::new(),
            next: 0,
        }
    }

    fn name_of(&mut self, m: u32) -> String {
        if let Some(n) = self.assigned.get(&m) {
            return n.clone();
        }
        let base = ((b'A' + (self.next % 26) as u8) as char).to_string();
        self.next += 1;
        let n = self.fresh.name(&base);
        self.assigned.insert(m, n.clone());
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occurs_check() {
        let mut u = Unifier::new();
        let a = u.meta();
        let t = UTy::arrow(a.clone(), UTy::Bot);
        assert_eq!(u.unify(&a, &t), Err(UnifyError::Occurs));
    }

    #[test]
    fn foralls_unify_up_to_renaming() {
        let mut u = Unifier::new();
        let a = UTy::from_type(&Type::forall("X", Type::arrow(Type::var("X"), Type::var("X"))));
        let b = UTy::from_type(&Type::forall("Y", Type::arrow(Type::var("Y"), Type::var("Y"))));
        assert!(u.unify(&a, &b).is_ok());
    }

    #[test]
    fn skolem_cannot_escape() {
        let mut u = Unifier::new();
        let m = u.meta();
        let a = UTy::Forall("X".into(), Box::new(UTy::Var("X".into())));
        let b = UTy::Forall("Y".into(), Box::new(m));
        assert_eq!(u.unify(&a, &b), Err(UnifyError::Escape));
    }

    #[test]
    fn namer_avoids_context_names() {
        let mut u = Unifier::new();
        let m = u.meta();
        let mut n = Namer::new(BTreeSet::from(["A".to_string()]));
        let t = u.to_type(&UTy::arrow(m.clone(), m), &mut n).unwrap();
        assert_eq!(t.to_string(), "A1->A1");
    }
}
