use super::{Command, CoTerm, Term};

pub fn term(t: &Term) -> String {
    let mut s = String::new();
    w_term(t, &mut s);
    s
}

pub fn coterm(l: &CoTerm) -> String {
    let mut s = String::new();
    w_coterm(l, &mut s);
    s
}

pub fn command(c: &Command) -> String {
    let mut s = String::new();
    w_command(c, &mut s);
    s
}

fn w_term(t: &Term, s: &mut String) {
    match t {
        Term::Var(x) => s.push_str(x),
        Term::Lam(x, b) => {
            s.push('\\');
            s.push_str(x);
            s.push('.');
            w_term(b, s);
        }
        Term::TyLam(x, b) => {
            s.push_str("/\\");
            s.push_str(x);
            s.push('.');
            w_term(b, s);
        }
        Term::Coerce(c) => {
            s.push('{');
            w_command(c, s);
            s.push('}');
        }
    }
}

fn w_atom(t: &Term, s: &mut String) {
    match t {
        Term::Lam(..) | Term::TyLam(..) => {
            s.push('(');
            w_term(t, s);
            s.push(')');
        }
        _ => w_term(t, s),
    }
}

fn w_coterm(l: &CoTerm, s: &mut String) {
    match l {
        CoTerm::Nil => s.push_str("[]"),
        CoTerm::Cons(u, r) => {
            w_atom(u, s);
            s.push_str("::");
            w_coterm(r, s);
        }
        CoTerm::TyCons(b, r) => {
            s.push('<');
            s.push_str(&b.to_string());
            s.push_str(">::");
            w_coterm(r, s);
        }
        CoTerm::Sel(x, c) => {
            s.push('(');
            s.push_str(x);
            s.push_str(") ");
            w_command(c, s);
        }
    }
}

fn w_command(c: &Command, s: &mut String) {
    w_atom(&c.head, s);
    s.push(' ');
    w_coterm(&c.tail, s);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printer_examples() {
        assert_eq!(term(&Term::lam("x", Term::var("x"))), "\\x.x");
        assert_eq!(coterm(&CoTerm::Nil), "[]");
        let c = Command::new(Term::var("y"), CoTerm::Nil);
        assert_eq!(term(&Term::coerce(c)), "{y []}");
    }
}
