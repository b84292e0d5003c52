//! Second-order machinery: type substitution, the β2 rule and the
//! naturality of the type translations.

use crate::cps::{bar_type, star_type, TransKind};
use crate::reduction::{all_steps, RuleName, Step};
use crate::syntax::{self, Command, CoTerm, Expr, Term};
use crate::types::Type;

/// Capture-avoiding `[b/x]a`.
pub fn ty_subst_type(b: &Type, x: &str, a: &Type) -> Type {
    a.subst(x, b)
}

/// Capture-avoiding `[b/x]e`, over both type annotations and type binders.
pub fn ty_subst_expr(b: &Type, x: &str, e: &Expr) -> Expr {
    syntax::ty_subst_expr(b, x, e)
}

/// `(ΛX.t)(B::l) → ([B/X]t) l` at the root of `c`.
pub fn beta2_root(c: &Command) -> Option<Command> {
    match (&c.head, &c.tail) {
        (Term::TyLam(x, t), CoTerm::TyCons(b, l)) => {
            Some(Command::new(syntax::ty_subst_term(b, x, t), (**l).clone()))
        }
        _ => None,
    }
}

/// The β2 steps among all one-step reducts of `e`.
pub fn beta2_steps(e: &Expr) -> Vec<Step> {
    all_steps(e).into_iter().filter(|s| s.rule == RuleName::Beta2).collect()
}

/// `([B/X]A)* = [B*/X]A*`, compared syntactically.
pub fn star_natural(a: &Type, b: &Type, x: &str, kind: TransKind) -> bool {
    let left = star_type(&ty_subst_type(b, x, a), kind);
    let right = ty_subst_type(&star_type(b, kind), x, &star_type(a, kind));
    left == right
}

/// `bar([B/X]A) = [B*/X]bar(A)`, compared syntactically.
pub fn bar_natural(a: &Type, b: &Type, x: &str, kind: TransKind) -> bool {
    let left = bar_type(&ty_subst_type(b, x, a), kind);
    let right = ty_subst_type(&star_type(b, kind), x, &bar_type(a, kind));
    left == right
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_command, parse_type};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn type_substitution() {
        assert_eq!(ty_subst_type(&ty("Y"), "X", &ty("X")), ty("Y"));
        let shadowed = ty("forall X. X");
        assert_eq!(ty_subst_type(&ty("Y"), "X", &shadowed), shadowed);
        let captured = ty_subst_type(&ty("Y"), "X", &ty("forall Y. X -> Y"));
        assert!(captured.alpha_eq(&ty("forall Z. Y -> Z")));
    }

    #[test]
    fn beta2_at_the_root() {
        let c = Command::new(
            Term::tylam("X", Term::lam("x", Term::var("x"))),
            CoTerm::tycons(Type::var("Y"), CoTerm::Nil),
        );
        assert_eq!(beta2_root(&c), Some(Command::new(Term::lam("x", Term::var("x")), CoTerm::Nil)));
        assert_eq!(beta2_root(&parse_command("f a::[]").unwrap()), None);
    }

    #[test]
    fn naturality_examples() {
        for kind in [TransKind::Cps, TransKind::Cgps] {
            for (a, b) in [("X -> X", "Y -> Y"), ("forall Y. X -> Y", "Y"), ("forall X. X", "Z")] {
                assert!(star_natural(&ty(a), &ty(b), "X", kind), "{a} {b}");
                assert!(bar_natural(&ty(a), &ty(b), "X", kind), "{a} {b}");
            }
        }
    }
}
