use super::Formula;
use crate::model::Signature;
use std::fmt::Write;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Cf(..) => 0,
        Formula::GlobalOr(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Neg(..) => 4,
        Formula::Eq(..) | Formula::Dep(..) => 5,
    }
}

fn go(f: &Formula, sig: &Signature, min: u8, out: &mut String) {
    if level(f) < min {
        out.push('(');
        go(f, sig, 0, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Eq(v, x) => {
            let _ = write!(out, "{}={}", sig.name(*v), sig.token(*v, *x));
        }
        Formula::Dep(xs, y) if xs.is_empty() => {
            let _ = write!(out, "con({})", sig.name(*y));
        }
        Formula::Dep(xs, y) => {
            let names: Vec<&str> = xs.iter().map(|&x| sig.name(x)).collect();
            let _ = write!(out, "dep({}; {})", names.join(","), sig.name(*y));
        }
        Formula::Neg(a) => {
            out.push('!');
            go(a, sig, 4, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::GlobalOr(a, b) => {
            let l = level(f);
            let op = match l {
                1 => " \\\\/ ",
                2 => " \\/ ",
                _ => " /\\ ",
            };
            go(a, sig, l, out);
            out.push_str(op);
            go(b, sig, l + 1, out);
        }
        Formula::Cf(iv, body) => {
            let _ = write!(out, "({}) []-> ", iv.display(sig));
            go(body, sig, 0, out);
        }
    }
}

/// Canonical concrete syntax with minimal parentheses.
pub fn print(f: &Formula, sig: &Signature) -> String {
    let mut out = String::new();
    go(f, sig, 0, &mut out);
    out
}

impl Formula {
    pub fn display(&self, sig: &Signature) -> String {
        print(self, sig)
    }
}
