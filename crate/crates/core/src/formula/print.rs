//! Precedence-aware printer producing the ASCII syntax.

use super::Formula;
use super::Formula::*;

/// Words that cannot be used as bare proposition names.
pub const KEYWORDS: &[&str] = &[
    "X", "F", "G", "U", "R", "E1", "A1", "EE", "AA", "BOR", "top", "bot", "dep",
];

const UNARY: u8 = 9;

fn level(f: &Formula) -> u8 {
    match f {
        BIff(..) => 0,
        BImp(..) => 1,
        BOr(..) => 2,
        Hook(..) => 5,
        SplitOr(..) => 6,
        And(..) => 7,
        Until(..) | Release(..) => 8,
        _ => UNARY,
    }
}

fn right_assoc(f: &Formula) -> bool {
    matches!(f, BImp(..) | Hook(..) | Until(..) | Release(..))
}

fn name(p: &str) -> String {
    let plain = !p.is_empty()
        && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '@')
        && !KEYWORDS.contains(&p);
    if plain {
        p.to_string()
    } else {
        format!("\"{}\"", p.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Render a formula; `parse(print(φ)) == φ`.
pub fn print(f: &Formula) -> String {
    let mut s = String::new();
    go(f, &mut s);
    s
}

fn operand(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        go(f, out);
        out.push(')');
    } else {
        go(f, out);
    }
}

fn unary(op: &str, a: &Formula, out: &mut String) {
    out.push_str(op);
    operand(a, level(a) < UNARY, out);
}

fn go(f: &Formula, out: &mut String) {
    match f {
        Top => out.push_str("top"),
        Bot => out.push_str("bot"),
        Prop(p) => out.push_str(&name(p)),
        Neg(a) => unary("!", a, out),
        BNeg(a) => unary("~", a, out),
        Next(a) => unary("X ", a, out),
        Future(a) => unary("F ", a, out),
        Globally(a) => unary("G ", a, out),
        SubEx(a) => unary("EE ", a, out),
        SubAll(a) => unary("AA ", a, out),
        SingEx(a) => unary("E1 ", a, out),
        SingAll(a) => unary("A1 ", a, out),
        CondSubEx(g, a) | CondSubAll(g, a) | CondSingEx(g, a) | CondSingAll(g, a) => {
            let q = match f {
                CondSubEx(..) => "EE",
                CondSubAll(..) => "AA",
                CondSingEx(..) => "E1",
                _ => "A1",
            };
            out.push_str(q);
            out.push('[');
            go(g, out);
            out.push_str("] ");
            operand(a, level(a) < UNARY, out);
        }
        Dep(args, t) => {
            out.push_str("dep(");
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                go(a, out);
            }
            out.push_str("; ");
            go(t, out);
            out.push(')');
        }
        And(a, b) | SplitOr(a, b) | Until(a, b) | Release(a, b) | BOr(a, b) | BImp(a, b)
        | BIff(a, b) | Hook(a, b) => {
            let op = match f {
                And(..) => " & ",
                SplitOr(..) => " | ",
                Until(..) => " U ",
                Release(..) => " R ",
                BOr(..) => " BOR ",
                BImp(..) => " ->> ",
                BIff(..) => " <->> ",
                _ => " ~> ",
            };
            let l = level(f);
            let ra = right_assoc(f);
            operand(a, level(a) < l || (level(a) == l && ra), out);
            out.push_str(op);
            operand(b, level(b) < l || (level(b) == l && !ra), out);
        }
    }
}
