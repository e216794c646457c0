//! Recursive-descent parser for the ASCII formula syntax.

use thiserror::Error;

use super::Formula;
use crate::trace::valid_prop_name;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        offset: usize,
        msg: String,
    },
    #[error("unknown escape `\\{ch}` at {line}:{col}")]
    UnknownEscape { line: usize, col: usize, ch: char },
    #[error("reserved name `{name}` at {line}:{col}: names starting with `@` are reserved for generated propositions")]
    Reserved {
        line: usize,
        col: usize,
        name: String,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    /// Accept `@`-prefixed names (needed to re-read generated formulas).
    pub allow_reserved: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            allow_reserved: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Quoted(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Bang,
    Tilde,
    Amp,
    Pipe,
    Bor,
    Hook,
    Imp,
    Iff,
    BImp,
    BIff,
    Top,
    Bot,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    offset: usize,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = vec![];
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let peek = |j: usize| chars.get(j).map(|c| c.1);
    while i < chars.len() {
        let (off, c) = chars[i];
        let start = (off, line, col);
        let mut adv = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i].1 != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '!' | '¬' => Tok::Bang,
            '&' | '∧' => Tok::Amp,
            '|' | '∨' => Tok::Pipe,
            '⩔' => Tok::Bor,
            '⊸' => Tok::BImp,
            '↪' => Tok::Hook,
            '→' => Tok::Imp,
            '↔' => Tok::Iff,
            '⊤' => Tok::Top,
            '⊥' => Tok::Bot,
            '~' | '∼' => {
                if peek(i + 1) == Some('>') {
                    adv = 2;
                    Tok::Hook
                } else {
                    Tok::Tilde
                }
            }
            '-' if peek(i + 1) == Some('>') => {
                if peek(i + 2) == Some('>') {
                    adv = 3;
                    Tok::BImp
                } else {
                    adv = 2;
                    Tok::Imp
                }
            }
            '<' if peek(i + 1) == Some('-') && peek(i + 2) == Some('>') => {
                if peek(i + 3) == Some('>') {
                    adv = 4;
                    Tok::BIff
                } else {
                    adv = 3;
                    Tok::Iff
                }
            }
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                let mut ccol = col + 1;
                loop {
                    match peek(j) {
                        None => {
                            return Err(syntax(start, "unterminated quoted name"));
                        }
                        Some('"') => break,
                        Some('\\') => {
                            match peek(j + 1) {
                                Some(e @ ('"' | '\\')) => s.push(e),
                                Some(e) => {
                                    return Err(ParseError::UnknownEscape {
                                        line,
                                        col: ccol,
                                        ch: e,
                                    })
                                }
                                None => return Err(syntax(start, "unterminated escape")),
                            }
                            j += 2;
                            ccol += 2;
                        }
                        Some(ch) => {
                            s.push(ch);
                            j += 1;
                            ccol += 1;
                        }
                    }
                }
                adv = j + 1 - i;
                Tok::Quoted(s)
            }
            c if is_ident_char(c) => {
                let mut j = i;
                let mut s = String::new();
                while let Some(ch) = peek(j) {
                    if !is_ident_char(ch) {
                        break;
                    }
                    s.push(ch);
                    j += 1;
                }
                adv = j - i;
                match s.as_str() {
                    "BOR" => Tok::Bor,
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(s),
                }
            }
            other => return Err(syntax(start, &format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            offset: start.0,
            line: start.1,
            col: start.2,
        });
        i += adv;
        col += adv;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        offset: src.len(),
        line,
        col,
    });
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '@'
}

fn syntax(at: (usize, usize, usize), msg: &str) -> ParseError {
    ParseError::Syntax {
        offset: at.0,
        line: at.1,
        col: at.2,
        msg: msg.to_string(),
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    opts: ParseOptions,
}

/// Binary operators by binding level (0 loosest).
#[derive(Clone, Copy, PartialEq, Eq)]
enum Assoc {
    Left,
    Right,
}

fn binop(t: &Tok) -> Option<(u8, Assoc)> {
    Some(match t {
        Tok::BIff => (0, Assoc::Left),
        Tok::BImp => (1, Assoc::Right),
        Tok::Bor => (2, Assoc::Left),
        Tok::Iff => (3, Assoc::Left),
        Tok::Imp => (4, Assoc::Right),
        Tok::Hook => (5, Assoc::Right),
        Tok::Pipe => (6, Assoc::Left),
        Tok::Amp => (7, Assoc::Left),
        Tok::Ident(s) if s == "U" || s == "R" => (8, Assoc::Right),
        _ => return None,
    })
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize, usize) {
        let s = &self.toks[self.pos];
        (s.offset, s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.here(),
                &format!("expected {what}, found {}", describe(self.peek())),
            ))
        }
    }

    fn expr(&mut self, min: u8) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while let Some((lvl, assoc)) = binop(self.peek()) {
            if lvl < min {
                break;
            }
            let op = self.bump();
            let next_min = if assoc == Assoc::Left { lvl + 1 } else { lvl };
            let rhs = self.expr(next_min)?;
            lhs = match op {
                Tok::BIff => lhs.biff(rhs),
                Tok::BImp => lhs.bimp(rhs),
                Tok::Bor => lhs.bor(rhs),
                Tok::Iff => lhs.clone().implies(rhs.clone()).and(rhs.implies(lhs)),
                Tok::Imp => lhs.implies(rhs),
                Tok::Hook => lhs.hook(rhs),
                Tok::Pipe => lhs.or(rhs),
                Tok::Amp => lhs.and(rhs),
                Tok::Ident(s) if s == "U" => lhs.until(rhs),
                Tok::Ident(_) => lhs.release(rhs),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn guard(&mut self) -> Result<Option<Formula>, ParseError> {
        if *self.peek() == Tok::LBrack {
            self.bump();
            let g = self.expr(0)?;
            self.expect(Tok::RBrack, "`]`")?;
            Ok(Some(g))
        } else {
            Ok(None)
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Tilde => {
                self.bump();
                Ok(self.unary()?.bneg())
            }
            Tok::Ident(s) => match s.as_str() {
                "X" | "F" | "G" => {
                    self.bump();
                    let a = self.unary()?;
                    Ok(match s.as_str() {
                        "X" => a.next(),
                        "F" => a.future(),
                        _ => a.globally(),
                    })
                }
                "E1" | "A1" | "EE" | "AA" => {
                    self.bump();
                    let g = self.guard()?;
                    let a = self.unary()?;
                    Ok(match (s.as_str(), g) {
                        ("E1", None) => a.sing_ex(),
                        ("A1", None) => a.sing_all(),
                        ("EE", None) => a.sub_ex(),
                        ("AA", None) => a.sub_all(),
                        ("E1", Some(g)) => Formula::cond_sing_ex(g, a),
                        ("A1", Some(g)) => Formula::cond_sing_all(g, a),
                        ("EE", Some(g)) => Formula::cond_sub_ex(g, a),
                        (_, Some(g)) => Formula::cond_sub_all(g, a),
                        _ => unreachable!(),
                    })
                }
                "dep" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(` after dep")?;
                    let mut args = vec![];
                    if *self.peek() != Tok::Semi {
                        args.push(self.expr(0)?);
                        while *self.peek() == Tok::Comma {
                            self.bump();
                            args.push(self.expr(0)?);
                        }
                    }
                    self.expect(Tok::Semi, "`;` in dep")?;
                    let t = self.expr(0)?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Formula::dep(args, t))
                }
                "U" | "R" => Err(syntax(at, &format!("binary operator `{s}` without left operand"))),
                _ => {
                    self.bump();
                    self.name(s, at)
                }
            },
            Tok::Quoted(s) => {
                self.bump();
                if !valid_prop_name(&s) {
                    return Err(syntax(at, &format!("invalid proposition name `{s}`")));
                }
                self.name(s, at)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let f = self.expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            t => Err(syntax(at, &format!("expected a formula, found {}", describe(&t)))),
        }
    }

    fn name(&self, s: String, at: (usize, usize, usize)) -> Result<Formula, ParseError> {
        if s.starts_with('@') && !self.opts.allow_reserved {
            return Err(ParseError::Reserved {
                line: at.1,
                col: at.2,
                name: s,
            });
        }
        Ok(Formula::Prop(s))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Quoted(s) => format!("\"{s}\""),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

/// Parse a formula, accepting reserved `@` names.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, opts: ParseOptions) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, opts };
    let f = p.expr(0)?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(
            p.here(),
            &format!("unexpected {}", describe(p.peek())),
        ));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    fn p() -> F {
        F::prop("p")
    }

    #[test]
    fn split_or_of_futures() {
        assert_eq!(parse("F p | F p").unwrap(), p().future().or(p().future()));
    }

    #[test]
    fn dependence_with_classical_implication() {
        let f = parse("dep(in1,in2; G(end -> out))").unwrap();
        let want = F::dep(
            vec![F::prop("in1"), F::prop("in2")],
            F::prop("end").neg().or(F::prop("out")).globally(),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn top_encoding() {
        assert_eq!(parse("~(p & ~p)").unwrap(), p().and(p().bneg()).bneg());
    }

    #[test]
    fn precedence() {
        let q = F::prop("q");
        assert_eq!(parse("p & q | p").unwrap(), p().and(q.clone()).or(p()));
        assert_eq!(parse("p U q U p").unwrap(), p().until(q.clone().until(p())));
        assert_eq!(parse("F p U q").unwrap(), p().future().until(q.clone()));
        assert_eq!(
            parse("p ->> q ->> p").unwrap(),
            p().bimp(q.clone().bimp(p()))
        );
        assert_eq!(
            parse("p BOR q <->> p").unwrap(),
            p().bor(q.clone()).biff(p())
        );
        assert_eq!(
            parse("E1[F p] q & p").unwrap(),
            F::cond_sing_ex(p().future(), q.clone()).and(p())
        );
        assert_eq!(parse("dep(; p)").unwrap(), F::dep(vec![], p()));
        assert_eq!(parse("top # comment\n & bot").unwrap(), F::Top.and(F::Bot));
    }

    #[test]
    fn quoted_names_and_errors() {
        assert_eq!(parse("\"X\"").unwrap(), F::prop("X"));
        assert!(matches!(
            parse("\"a\\n\""),
            Err(ParseError::UnknownEscape { ch: 'n', .. })
        ));
        assert!(matches!(
            parse_with("@x1", ParseOptions { allow_reserved: false }),
            Err(ParseError::Reserved { .. })
        ));
        assert!(parse("@x1").is_ok());
        match parse("p & ") {
            Err(ParseError::Syntax { col, .. }) => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse("p q").is_err());
        assert!(parse("U p").is_err());
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse("¬p ∧ ∼p").unwrap(), p().neg().and(p().bneg()));
        assert_eq!(parse("p ↪ ⊤").unwrap(), p().hook(F::Top));
    }
}
