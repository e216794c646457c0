//! S-expression syntax for arithmetic formulas.
//!
//! ```text
//! F    := (true) | (false) | (eq t t) | (lt t t) | (le t t)
//!       | (holds A t..) | (member a A..) | (not F) | (and F F..) | (or F F..)
//!       | (implies F F) | (iff F F) | (exists (x T) F) | (forall (x T) F)
//! T    := 1 | (2 n) | (3 n..) | (fn k)
//! t    := x | n | (zero) | (one) | (num n) | (plus t t..) | (times t t..) | (call f t..)
//! ```
//! `;` starts a comment that runs to the end of the line.

use super::{numeral, Arith, ArithError, ArithType, Quant, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sx {
    Atom(String),
    List(Vec<Sx>),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PrintOptions {
    /// Print numerals `1+…+1` as `(num m)`.
    pub decimal: bool,
    /// Break long lists over several indented lines.
    pub pretty: bool,
}

fn err(offset: usize, msg: impl Into<String>) -> ArithError {
    ArithError::Syntax {
        offset,
        msg: msg.into(),
    }
}

fn sym_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '@' | '-' | '.')
}

/// Tokenize and read one s-expression per top-level item; exactly one is expected.
pub fn read_sx(src: &str) -> Result<Sx, ArithError> {
    let mut stack: Vec<(usize, Vec<Sx>)> = vec![];
    let mut out: Vec<Sx> = vec![];
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        match c {
            ';' => {
                while i < chars.len() && chars[i].1 != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => stack.push((off, vec![])),
            ')' => {
                let (_, items) = stack.pop().ok_or_else(|| err(off, "unbalanced `)`"))?;
                let l = Sx::List(items);
                match stack.last_mut() {
                    Some((_, v)) => v.push(l),
                    None => out.push(l),
                }
            }
            c if c.is_whitespace() => {}
            c if sym_char(c) => {
                let start = i;
                while i < chars.len() && sym_char(chars[i].1) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|x| x.1).collect();
                let a = Sx::Atom(s);
                match stack.last_mut() {
                    Some((_, v)) => v.push(a),
                    None => out.push(a),
                }
                continue;
            }
            other => return Err(err(off, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    if let Some((off, _)) = stack.last() {
        return Err(err(*off, "unclosed `(`"));
    }
    match out.len() {
        1 => Ok(out.pop().expect("one item")),
        0 => Err(err(0, "empty input")),
        _ => Err(err(0, "more than one top-level expression")),
    }
}

pub fn parse_arith(src: &str) -> Result<Arith, ArithError> {
    formula(&read_sx(src)?)
}

fn head(items: &[Sx]) -> Option<&str> {
    match items.first() {
        Some(Sx::Atom(s)) => Some(s.as_str()),
        _ => None,
    }
}

fn arity(items: &[Sx], n: usize, what: &str) -> Result<(), ArithError> {
    if items.len() != n + 1 {
        Err(err(0, format!("`{what}` takes {n} argument(s), got {}", items.len() - 1)))
    } else {
        Ok(())
    }
}

fn name(sx: &Sx) -> Result<String, ArithError> {
    match sx {
        Sx::Atom(s) if !s.chars().next().is_some_and(|c| c.is_ascii_digit()) => Ok(s.clone()),
        other => Err(err(0, format!("expected a variable name, got {}", flat(other)))),
    }
}

fn number(sx: &Sx) -> Result<u64, ArithError> {
    match sx {
        Sx::Atom(s) => s
            .parse()
            .map_err(|_| err(0, format!("expected a number, got `{s}`"))),
        other => Err(err(0, format!("expected a number, got {}", flat(other)))),
    }
}

fn ty(sx: &Sx) -> Result<ArithType, ArithError> {
    match sx {
        Sx::Atom(s) if s == "1" => Ok(ArithType::First),
        Sx::List(items) => match head(items) {
            Some("2") => {
                arity(items, 1, "2")?;
                Ok(ArithType::Second(number(&items[1])? as usize))
            }
            Some("3") if items.len() >= 2 => Ok(ArithType::Third(
                items[1..]
                    .iter()
                    .map(|x| number(x).map(|n| n as usize))
                    .collect::<Result<_, _>>()?,
            )),
            Some("fn") => {
                arity(items, 1, "fn")?;
                Ok(ArithType::Function(number(&items[1])? as usize))
            }
            _ => Err(err(0, format!("bad type {}", flat(sx)))),
        },
        _ => Err(err(0, format!("bad type {}", flat(sx)))),
    }
}

fn term(sx: &Sx) -> Result<Term, ArithError> {
    match sx {
        Sx::Atom(s) if s.chars().next().is_some_and(|c| c.is_ascii_digit()) => {
            Ok(numeral(number(sx)?))
        }
        Sx::Atom(s) => Ok(Term::Var(s.clone())),
        Sx::List(items) => {
            let args = || items[1..].iter().map(term).collect::<Result<Vec<_>, _>>();
            match head(items) {
                Some("zero") => arity(items, 0, "zero").map(|_| Term::Zero),
                Some("one") => arity(items, 0, "one").map(|_| Term::One),
                Some("num") => {
                    arity(items, 1, "num")?;
                    Ok(numeral(number(&items[1])?))
                }
                Some(op @ ("plus" | "times")) => {
                    let a = args()?;
                    if a.len() < 2 {
                        return Err(err(0, format!("`{op}` needs at least 2 arguments")));
                    }
                    let f = if op == "plus" { Term::plus } else { Term::times };
                    Ok(a.into_iter().reduce(f).expect("non-empty"))
                }
                Some("call") if items.len() >= 3 => Ok(Term::Call(name(&items[1])?, {
                    items[2..].iter().map(term).collect::<Result<_, _>>()?
                })),
                _ => Err(err(0, format!("bad term {}", flat(sx)))),
            }
        }
    }
}

fn formula(sx: &Sx) -> Result<Arith, ArithError> {
    let Sx::List(items) = sx else {
        return Err(err(0, format!("expected a formula, got {}", flat(sx))));
    };
    let h = head(items).ok_or_else(|| err(0, "formula must start with an operator"))?;
    let sub = |i: usize| formula(&items[i]);
    let two_terms = |ctor: fn(Term, Term) -> Arith| -> Result<Arith, ArithError> {
        arity(items, 2, h)?;
        Ok(ctor(term(&items[1])?, term(&items[2])?))
    };
    match h {
        "true" => arity(items, 0, h).map(|_| Arith::True),
        "false" => arity(items, 0, h).map(|_| Arith::False),
        "eq" => two_terms(Arith::Eq),
        "lt" => two_terms(Arith::Lt),
        "le" => two_terms(Arith::Le),
        "holds" if items.len() >= 3 => Ok(Arith::Holds(
            name(&items[1])?,
            items[2..].iter().map(term).collect::<Result<_, _>>()?,
        )),
        "member" if items.len() >= 3 => Ok(Arith::Member(
            name(&items[1])?,
            items[2..].iter().map(name).collect::<Result<_, _>>()?,
        )),
        "not" => {
            arity(items, 1, h)?;
            Ok(sub(1)?.not())
        }
        "and" | "or" => {
            if items.len() < 3 {
                return Err(err(0, format!("`{h}` needs at least 2 arguments")));
            }
            let parts = items[1..].iter().map(formula).collect::<Result<Vec<_>, _>>()?;
            let f = if h == "and" { Arith::and } else { Arith::or };
            Ok(parts.into_iter().reduce(f).expect("non-empty"))
        }
        "implies" => {
            arity(items, 2, h)?;
            Ok(sub(1)?.implies(sub(2)?))
        }
        "iff" => {
            arity(items, 2, h)?;
            Ok(sub(1)?.iff(sub(2)?))
        }
        "exists" | "forall" => {
            arity(items, 2, h)?;
            let Sx::List(b) = &items[1] else {
                return Err(err(0, "binder must be `(name type)`"));
            };
            if b.len() != 2 {
                return Err(err(0, "binder must be `(name type)`"));
            }
            let q = if h == "exists" { Quant::Exists } else { Quant::Forall };
            Ok(Arith::Quant(q, name(&b[0])?, ty(&b[1])?, Box::new(sub(2)?)))
        }
        other => Err(err(0, format!("unknown operator `{other}`"))),
    }
}

fn atom(s: &str) -> Sx {
    Sx::Atom(s.to_string())
}

fn list(head: &str, rest: impl IntoIterator<Item = Sx>) -> Sx {
    let mut v = vec![atom(head)];
    v.extend(rest);
    Sx::List(v)
}

fn ty_sx(t: &ArithType) -> Sx {
    match t {
        ArithType::First => atom("1"),
        ArithType::Second(n) => list("2", [atom(&n.to_string())]),
        ArithType::Third(ns) => list("3", ns.iter().map(|n| atom(&n.to_string()))),
        ArithType::Function(n) => list("fn", [atom(&n.to_string())]),
    }
}

fn term_sx(t: &Term, o: PrintOptions) -> Sx {
    if o.decimal {
        if let Some(n) = t.as_numeral().filter(|&n| n >= 2) {
            return list("num", [atom(&n.to_string())]);
        }
    }
    match t {
        Term::Var(v) => atom(v),
        Term::Zero => list("zero", []),
        Term::One => list("one", []),
        Term::Plus(..) | Term::Times(..) => {
            let plus = matches!(t, Term::Plus(..));
            // flatten left-nested chains of the same operator
            let mut parts = vec![];
            let mut cur = t;
            loop {
                match (cur, plus) {
                    (Term::Plus(a, b), true) | (Term::Times(a, b), false) => {
                        parts.push(term_sx(b, o));
                        cur = a;
                    }
                    _ => {
                        parts.push(term_sx(cur, o));
                        break;
                    }
                }
            }
            parts.reverse();
            list(if plus { "plus" } else { "times" }, parts)
        }
        Term::Call(f, args) => list("call", std::iter::once(atom(f)).chain(args.iter().map(|a| term_sx(a, o)))),
    }
}

pub fn to_sx(f: &Arith, o: PrintOptions) -> Sx {
    let chain = |head: &str, f: &Arith| {
        let mut parts = vec![];
        let mut cur = f;
        loop {
            match (cur, head) {
                (Arith::And(a, b), "and") | (Arith::Or(a, b), "or") => {
                    parts.push(to_sx(b, o));
                    cur = a;
                }
                _ => {
                    parts.push(to_sx(cur, o));
                    break;
                }
            }
        }
        parts.reverse();
        list(head, parts)
    };
    match f {
        Arith::True => list("true", []),
        Arith::False => list("false", []),
        Arith::Eq(a, b) => list("eq", [term_sx(a, o), term_sx(b, o)]),
        Arith::Lt(a, b) => list("lt", [term_sx(a, o), term_sx(b, o)]),
        Arith::Le(a, b) => list("le", [term_sx(a, o), term_sx(b, o)]),
        Arith::Holds(r, args) => list(
            "holds",
            std::iter::once(atom(r)).chain(args.iter().map(|a| term_sx(a, o))),
        ),
        Arith::Member(a, args) => list("member", std::iter::once(atom(a)).chain(args.iter().map(|x| atom(x)))),
        Arith::Not(a) => list("not", [to_sx(a, o)]),
        Arith::And(..) => chain("and", f),
        Arith::Or(..) => chain("or", f),
        Arith::Implies(a, b) => list("implies", [to_sx(a, o), to_sx(b, o)]),
        Arith::Iff(a, b) => list("iff", [to_sx(a, o), to_sx(b, o)]),
        Arith::Quant(q, v, t, b) => list(
            match q {
                Quant::Exists => "exists",
                Quant::Forall => "forall",
            },
            [Sx::List(vec![atom(v), ty_sx(t)]), to_sx(b, o)],
        ),
    }
}

pub fn flat(sx: &Sx) -> String {
    match sx {
        Sx::Atom(s) => s.clone(),
        Sx::List(items) => {
            let inner: Vec<String> = items.iter().map(flat).collect();
            format!("({})", inner.join(" "))
        }
    }
}

const WIDTH: usize = 88;

fn pretty(sx: &Sx, indent: usize, out: &mut String) {
    let f = flat(sx);
    match sx {
        Sx::List(items) if indent + f.len() > WIDTH && items.len() > 1 => {
            // keep the head and a short first argument on the opening line
            out.push('(');
            out.push_str(&flat(&items[0]));
            let mut rest = &items[1..];
            if matches!(items[0], Sx::Atom(ref h) if h == "exists" || h == "forall" || h == "holds" || h == "member")
            {
                out.push(' ');
                out.push_str(&flat(&items[1]));
                rest = &items[2..];
            }
            for it in rest {
                out.push('\n');
                out.push_str(&" ".repeat(indent + 2));
                pretty(it, indent + 2, out);
            }
            out.push(')');
        }
        _ => out.push_str(&f),
    }
}

pub fn print_arith(f: &Arith, o: PrintOptions) -> String {
    let sx = to_sx(f, o);
    if o.pretty {
        let mut s = String::new();
        pretty(&sx, 0, &mut s);
        s
    } else {
        flat(&sx)
    }
}

impl std::fmt::Display for Arith {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_arith(self, PrintOptions::default()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let src = "(exists (x 1) (lt x (plus x (one))))";
        let f = parse_arith(src).unwrap();
        assert_eq!(print_arith(&f, PrintOptions::default()), src);
        let src = "(forall (A (2 2)) (exists (a (3 1 1)) (and (holds A 0 (num 3)) (member a A A) (not (eq x y)))))";
        let f = parse_arith(src).unwrap();
        let back = parse_arith(&print_arith(&f, PrintOptions::default())).unwrap();
        assert_eq!(f, back);
        let dec = print_arith(&f, PrintOptions { decimal: true, pretty: false });
        assert!(dec.contains("(num 3)"));
        assert_eq!(parse_arith(&dec).unwrap(), f);
    }

    #[test]
    fn errors() {
        assert!(parse_arith("(lt x").is_err());
        assert!(parse_arith("(frob x)").is_err());
        assert!(parse_arith("(exists x (true))").is_err());
        assert!(parse_arith("(true) (true)").is_err());
    }

    #[test]
    fn pretty_reparses() {
        let mut f = Arith::True;
        for i in 0..12 {
            f = f.and(Arith::lt(Term::var(format!("x{i}")), Term::var("y")));
        }
        let s = print_arith(&f, PrintOptions { decimal: false, pretty: true });
        assert!(s.contains('\n'));
        assert_eq!(parse_arith(&s).unwrap(), f);
    }
}
