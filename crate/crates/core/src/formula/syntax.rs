//! S-expression concrete syntax.
//!
//! ```text
//! form := "(" head items ")"
//! head := and | or | not | -> | iff | forall | exists | forall-in | exists-in | = | in | <relation>
//! term := variable | "(" function term* ")"
//! ```
//! Variables match `[a-z][a-z0-9_]*`; constants are written `(c)`.

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature, Term};

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Symbol(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Symbol(_, o) | Sexp::List(_, o) => *o,
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn read_sexp(text: &str) -> Result<Sexp> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    fn read(text: &str, pos: &mut usize, skip_ws: &dyn Fn(&mut usize)) -> Result<Sexp> {
        let bytes = text.as_bytes();
        skip_ws(pos);
        if *pos >= bytes.len() {
            return Err(syntax(*pos, "unexpected end of input"));
        }
        let start = *pos;
        match bytes[*pos] {
            b'(' => {
                *pos += 1;
                let mut items = Vec::new();
                loop {
                    skip_ws(pos);
                    if *pos >= bytes.len() {
                        return Err(syntax(*pos, "unclosed `(`"));
                    }
                    if bytes[*pos] == b')' {
                        *pos += 1;
                        return Ok(Sexp::List(items, start));
                    }
                    items.push(read(text, pos, skip_ws)?);
                }
            }
            b')' => Err(syntax(start, "unexpected `)`")),
            _ => {
                while *pos < bytes.len()
                    && !bytes[*pos].is_ascii_whitespace()
                    && bytes[*pos] != b'('
                    && bytes[*pos] != b')'
                {
                    *pos += 1;
                }
                Ok(Sexp::Symbol(text[start..*pos].to_string(), start))
            }
        }
    }
    let sexp = read(text, &mut pos, &skip_ws)?;
    skip_ws(&mut pos);
    if pos != bytes.len() {
        return Err(syntax(pos, "trailing input"));
    }
    Ok(sexp)
}

pub(crate) fn is_variable(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn to_term(s: &Sexp) -> Result<Term> {
    match s {
        Sexp::Symbol(name, off) => {
            if is_variable(name) {
                Ok(Term::Var(name.clone()))
            } else {
                Err(syntax(*off, format!("`{name}` is not a variable")))
            }
        }
        Sexp::List(items, off) => match items.split_first() {
            Some((Sexp::Symbol(f, _), args)) => Ok(Term::App(
                f.clone(),
                args.iter().map(to_term).collect::<Result<_>>()?,
            )),
            _ => Err(syntax(*off, "expected function application")),
        },
    }
}

fn to_var(s: &Sexp) -> Result<String> {
    match s {
        Sexp::Symbol(name, _) if is_variable(name) => Ok(name.clone()),
        other => Err(syntax(other.offset(), "expected a variable")),
    }
}

fn to_formula(s: &Sexp) -> Result<Formula> {
    let (items, off) = match s {
        Sexp::List(items, off) => (items, *off),
        Sexp::Symbol(name, off) => {
            return Err(syntax(*off, format!("expected `(`, found `{name}`")))
        }
    };
    let (head, rest) = match items.split_first() {
        Some((Sexp::Symbol(h, _), rest)) => (h.as_str(), rest),
        _ => return Err(syntax(off, "expected a head symbol")),
    };
    let want = |n: usize| -> Result<()> {
        if rest.len() == n {
            Ok(())
        } else {
            Err(syntax(
                off,
                format!("`{head}` takes {n} arguments, found {}", rest.len()),
            ))
        }
    };
    Ok(match head {
        "and" | "or" => {
            if rest.is_empty() {
                return Err(syntax(off, format!("`{head}` needs at least one argument")));
            }
            let parts = rest.iter().map(to_formula).collect::<Result<Vec<_>>>()?;
            if head == "and" {
                Formula::conj(parts).expect("non-empty")
            } else {
                Formula::disj(parts).expect("non-empty")
            }
        }
        "not" => {
            want(1)?;
            Formula::not(to_formula(&rest[0])?)
        }
        "->" => {
            want(2)?;
            Formula::implies(to_formula(&rest[0])?, to_formula(&rest[1])?)
        }
        "iff" => {
            want(2)?;
            Formula::iff(to_formula(&rest[0])?, to_formula(&rest[1])?)
        }
        "forall" | "exists" => {
            want(2)?;
            let v = to_var(&rest[0])?;
            let body = to_formula(&rest[1])?;
            if head == "forall" {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
        "forall-in" | "exists-in" => {
            want(3)?;
            let v = to_var(&rest[0])?;
            let bound = to_term(&rest[1])?;
            let body = Box::new(to_formula(&rest[2])?);
            if head == "forall-in" {
                Formula::BoundedForall(v, bound, body)
            } else {
                Formula::BoundedExists(v, bound, body)
            }
        }
        "=" => {
            want(2)?;
            Formula::Equal(to_term(&rest[0])?, to_term(&rest[1])?)
        }
        "in" => {
            want(2)?;
            Formula::Member(to_term(&rest[0])?, to_term(&rest[1])?)
        }
        rel => Formula::Atom(
            rel.to_string(),
            rest.iter().map(to_term).collect::<Result<_>>()?,
        ),
    })
}

fn parse_raw(text: &str) -> Result<Formula> {
    to_formula(&read_sexp(text)?)
}

/// Parse `text` and check it against `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let f = parse_raw(text)?;
    f.validate(sig)?;
    Ok(f)
}

/// Parse without a declared signature, inferring one from the symbols used.
/// Arities come from first use; `in` and bounded quantifiers flag membership.
pub fn parse_inferring(text: &str) -> Result<(Formula, Signature)> {
    let f = parse_raw(text)?;
    let sig = infer_signature(&f, Signature::empty())?;
    Ok((f, sig))
}

/// Extend `base` with every symbol `f` uses that `base` lacks.
pub fn infer_signature(f: &Formula, base: Signature) -> Result<Signature> {
    let mut sig = base;
    let mut err = None;
    fn terms(sig: &mut Signature, ts: &[Term]) -> Result<()> {
        for t in ts {
            if let Term::App(name, args) = t {
                if sig.function(name).is_none() {
                    sig.add_function(name.clone(), args.len())?;
                }
                sig.check_function(name, args.len())?;
                terms(sig, args)?;
            }
        }
        Ok(())
    }
    f.visit(&mut |node| {
        if err.is_some() {
            return;
        }
        let r = match node {
            Formula::Atom(r, args) => (|| {
                if sig.relation(r).is_none() {
                    sig.add_relation(r.clone(), args.len())?;
                }
                sig.check_relation(r, args.len())?;
                terms(&mut sig, args)
            })(),
            Formula::Equal(a, b) => terms(&mut sig, &[a.clone(), b.clone()]),
            Formula::Member(a, b) => (|| {
                if sig.membership().is_none() {
                    sig.set_membership("in")?;
                }
                terms(&mut sig, &[a.clone(), b.clone()])
            })(),
            Formula::BoundedForall(_, t, _) | Formula::BoundedExists(_, t, _) => (|| {
                if sig.membership().is_none() {
                    sig.set_membership("in")?;
                }
                terms(&mut sig, std::slice::from_ref(t))
            })(),
            _ => Ok(()),
        };
        if let Err(e) = r {
            err = Some(e);
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    f.validate(&sig)?;
    Ok(sig)
}

/// Canonical concrete syntax. Conjunctions and disjunctions print binary.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    let term = |t: &Term| t.to_string();
    match f {
        Formula::Atom(r, args) => {
            out.push('(');
            out.push_str(r);
            for a in args {
                out.push(' ');
                out.push_str(&term(a));
            }
            out.push(')');
        }
        Formula::Equal(a, b) => out.push_str(&format!("(= {} {})", term(a), term(b))),
        Formula::Member(a, b) => out.push_str(&format!("(in {} {})", term(a), term(b))),
        Formula::Not(a) => {
            out.push_str("(not ");
            write_formula(a, out);
            out.push(')');
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let head = match f {
                Formula::And(..) => "and",
                Formula::Or(..) => "or",
                Formula::Implies(..) => "->",
                _ => "iff",
            };
            out.push('(');
            out.push_str(head);
            out.push(' ');
            write_formula(a, out);
            out.push(' ');
            write_formula(b, out);
            out.push(')');
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let head = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            out.push_str(&format!("({head} {v} "));
            write_formula(body, out);
            out.push(')');
        }
        Formula::BoundedForall(v, t, body) | Formula::BoundedExists(v, t, body) => {
            let head = if matches!(f, Formula::BoundedForall(..)) {
                "forall-in"
            } else {
                "exists-in"
            };
            out.push_str(&format!("({head} {v} {} ", term(t)));
            write_formula(body, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_error_offsets() {
        let sig = Signature::graph();
        match parse("(E x", &sig) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse("(E x y))", &sig) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("{other:?}"),
        }
        match parse("(forall X (E x x))", &sig) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn undeclared_and_arity() {
        let sig = Signature::graph();
        assert_eq!(
            parse("(P x)", &sig),
            Err(Error::UndeclaredSymbol("P".into()))
        );
        assert!(matches!(
            parse("(E x)", &sig),
            Err(Error::ArityMismatch { .. })
        ));
        assert_eq!(parse("(in x y)", &sig), Err(Error::NoMembership));
    }

    #[test]
    fn nary_connectives_fold_right() {
        let (f, _) = parse_inferring("(and (P x) (P y) (P z))").unwrap();
        assert_eq!(print(&f), "(and (P x) (and (P y) (P z)))");
    }

    #[test]
    fn constants_and_functions() {
        let (f, sig) = parse_inferring("(= (f x (c)) x)").unwrap();
        assert_eq!(sig.function("f").unwrap().arity, 2);
        assert_eq!(sig.function("c").unwrap().arity, 0);
        assert_eq!(print(&f), "(= (f x (c)) x)");
    }

    #[test]
    fn inferred_arity_conflict() {
        assert!(matches!(
            parse_inferring("(and (P x) (P x y))"),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
