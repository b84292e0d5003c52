//! Embeddings along the spectrum and the interpretation maps between
//! neighbouring calculi.

use super::lambda::LTerm;
use super::lj::{JArg, JTerm};
use super::ljm::{self, MArg, MCo, MTerm};
use super::ljms::{SCo, STerm};
use crate::syntax::{Command, CoTerm, Expr, Term};
use crate::syntax::occurs_coterm;

/// `J(tu) = J(t)(J(u),x.x)`.
pub fn embed_j(t: &LTerm) -> JTerm {
    match t {
        LTerm::Var(x) => JTerm::var(x),
        LTerm::Lam(x, b) => JTerm::lam(x, embed_j(b)),
        LTerm::App(f, a) => JTerm::gapp(embed_j(f), embed_j(a), "x", JTerm::var("x")),
    }
}

/// `m(t(u,x.v)) = m(t)(m(u),(x)m(v))`.
pub fn embed_m(t: &JTerm) -> MTerm {
    match t {
        JTerm::Var(x) => MTerm::var(x),
        JTerm::Lam(x, b) => MTerm::lam(x, embed_m(b)),
        JTerm::GApp(f, r) => MTerm::with(embed_m(f), embed_m_arg(r)),
    }
}

pub fn embed_m_arg(r: &JArg) -> MArg {
    MArg::new(embed_m(&r.u), MCo::sel(&r.x, embed_m(&r.v)))
}

/// `s(t(u,l)) = s(t)(s(u)::s(l))`.
pub fn embed_s(t: &MTerm) -> STerm {
    match t {
        MTerm::Var(x) => STerm::var(x),
        MTerm::Lam(x, b) => STerm::lam(x, embed_s(b)),
        MTerm::GMApp(f, r) => STerm::cut(embed_s(f), SCo::cons(embed_s(&r.u), embed_s_co(&r.l))),
    }
}

pub fn embed_s_co(l: &MCo) -> SCo {
    match l {
        MCo::Cons(u, l) => SCo::cons(embed_s(u), embed_s_co(l)),
        MCo::Sel(x, v) => SCo::sel(x, embed_s(v)),
    }
}

/// `e(tl) = {e(t)e(l)}`, `e((x)V) = (x)e(V)[]`, `e((x)tl) = (x)e(t)e(l)`.
pub fn embed_e(t: &STerm) -> Term {
    match t {
        STerm::Var(x) => Term::var(x),
        STerm::Lam(x, b) => Term::lam(x, embed_e(b)),
        STerm::Cut(h, l) => Term::coerce(Command::new(embed_e(h), embed_e_co(l))),
    }
}

pub fn embed_e_co(l: &SCo) -> CoTerm {
    match l {
        SCo::Cons(u, l) => CoTerm::cons(embed_e(u), embed_e_co(l)),
        SCo::Sel(x, v) => match &**v {
            STerm::Cut(h, l2) => CoTerm::sel(x, Command::new(embed_e(h), embed_e_co(l2))),
            v => CoTerm::sel(x, Command::new(embed_e(v), CoTerm::Nil)),
        },
    }
}

/// The interpretation ♯ into λJm; executes explicit substitutions.
pub fn map_sharp(t: &STerm) -> MTerm {
    match t {
        STerm::Var(x) => MTerm::var(x),
        STerm::Lam(x, b) => MTerm::lam(x, map_sharp(b)),
        STerm::Cut(h, l) => match &**l {
            SCo::Sel(x, v) => ljm::subst(&map_sharp(v), x, &map_sharp(h)),
            SCo::Cons(u, l) => MTerm::app(map_sharp(h), map_sharp(u), map_sharp_co(l)),
        },
    }
}

pub fn map_sharp_co(l: &SCo) -> MCo {
    match l {
        SCo::Cons(u, l) => MCo::cons(map_sharp(u), map_sharp_co(l)),
        SCo::Sel(x, v) => MCo::sel(x, map_sharp(v)),
    }
}

/// Image of a λJmse expression under ◦; `None` for second-order syntax.
pub enum Circ {
    Term(STerm),
    CoTerm(SCo),
}

pub fn map_circ(e: &Expr) -> Option<Circ> {
    match e {
        Expr::Term(t) => circ_term(t).map(Circ::Term),
        Expr::CoTerm(l) => circ_coterm(l).map(Circ::CoTerm),
        Expr::Command(c) => circ_command(c).map(Circ::Term),
    }
}

pub fn circ_term(t: &Term) -> Option<STerm> {
    Some(match t {
        Term::Var(x) => STerm::var(x),
        Term::Lam(x, b) => STerm::lam(x, circ_term(b)?),
        Term::Coerce(c) => circ_command(c)?,
        Term::TyLam(..) => return None,
    })
}

pub fn circ_coterm(l: &CoTerm) -> Option<SCo> {
    Some(match l {
        CoTerm::Nil => SCo::sel("x", STerm::var("x")),
        CoTerm::Cons(u, l) => SCo::cons(circ_term(u)?, circ_coterm(l)?),
        CoTerm::Sel(x, c) => SCo::sel(x, circ_command(c)?),
        CoTerm::TyCons(..) => return None,
    })
}

pub fn circ_command(c: &Command) -> Option<STerm> {
    Some(STerm::cut(circ_term(&c.head)?, circ_coterm(&c.tail)?))
}

/// μ-normal form of a λJmse expression.
pub fn mu_nf(e: &Expr) -> Expr {
    match e {
        Expr::Term(t) => Expr::Term(mu_term(t)),
        Expr::CoTerm(l) => Expr::CoTerm(mu_coterm(l)),
        Expr::Command(c) => Expr::Command(mu_command(c)),
    }
}

pub fn mu_term(t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::Lam(x, b) => Term::lam(x, mu_term(b)),
        Term::TyLam(x, b) => Term::tylam(x, mu_term(b)),
        Term::Coerce(c) => Term::coerce(mu_command(c)),
    }
}

pub fn mu_coterm(l: &CoTerm) -> CoTerm {
    match l {
        CoTerm::Nil => CoTerm::Nil,
        CoTerm::Cons(u, l) => CoTerm::cons(mu_term(u), mu_coterm(l)),
        CoTerm::TyCons(b, l) => CoTerm::tycons(b.clone(), mu_coterm(l)),
        CoTerm::Sel(x, c) => {
            if matches!(&c.head, Term::Var(y) if y == x) && !occurs_coterm(x, &c.tail) {
                mu_coterm(&c.tail)
            } else {
                CoTerm::sel(x, mu_command(c))
            }
        }
    }
}

pub fn mu_command(c: &Command) -> Command {
    Command::new(mu_term(&c.head), mu_coterm(&c.tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(x: &str) -> STerm {
        STerm::var(x)
    }

    #[test]
    fn j_of_application() {
        let t = LTerm::app(LTerm::var("f"), LTerm::var("a"));
        assert_eq!(embed_j(&t), JTerm::gapp(JTerm::var("f"), JTerm::var("a"), "x", JTerm::var("x")));
    }

    #[test]
    fn e_distinguishes_values_and_cuts() {
        assert_eq!(
            embed_e_co(&SCo::sel("x", sv("y"))),
            CoTerm::sel("x", Command::new(Term::var("y"), CoTerm::Nil))
        );
        let t = STerm::cut(sv("t"), SCo::sel("x", sv("x")));
        let want = Term::coerce(Command::new(
            Term::var("t"),
            CoTerm::sel("x", Command::new(Term::var("x"), CoTerm::Nil)),
        ));
        assert_eq!(embed_e(&t), want);
    }

    #[test]
    fn sharp_clauses() {
        // (λx.x)(y)y ↦ λx.x
        let t = STerm::cut(STerm::lam("x", sv("x")), SCo::sel("y", sv("y")));
        assert_eq!(map_sharp(&t), MTerm::lam("x", MTerm::var("x")));
        assert_eq!(map_sharp(&sv("x")), MTerm::var("x"));
    }

    #[test]
    fn circ_of_nil_and_commands() {
        assert_eq!(circ_coterm(&CoTerm::Nil), Some(SCo::sel("x", sv("x"))));
        let c = Command::new(Term::var("t"), CoTerm::cons(Term::var("u"), CoTerm::Nil));
        let got = circ_term(&Term::coerce(c)).unwrap();
        assert_eq!(got, STerm::cut(sv("t"), SCo::cons(sv("u"), SCo::sel("x", sv("x")))));
    }

    #[test]
    fn mu_normalisation() {
        let redex = CoTerm::sel("x", Command::new(Term::var("x"), CoTerm::Nil));
        assert_eq!(mu_coterm(&redex), CoTerm::Nil);
        let other = CoTerm::sel("x", Command::new(Term::var("y"), CoTerm::Nil));
        assert_eq!(mu_coterm(&other), other);
    }
}
