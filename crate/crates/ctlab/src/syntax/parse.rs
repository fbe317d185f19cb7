use super::{desugar_selective, Formula};
use crate::error::{Error, Result};
use crate::intervention::InterventionSpec;
use crate::model::{is_word_char, Signature, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Eq,
    Neq,
    Not,
    And,
    Or,
    GOr,
    Arrow,
    Implies,
    LParen,
    RParen,
    Comma,
    Semi,
    Amp,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.into() };
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("\\\\/") {
            (Tok::GOr, 3)
        } else if rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else if rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("[]->") {
            (Tok::Arrow, 4)
        } else if rest.starts_with("=>") {
            (Tok::Implies, 2)
        } else if rest.starts_with("!=") {
            (Tok::Neq, 2)
        } else {
            match c {
                '=' => (Tok::Eq, 1),
                '!' => (Tok::Not, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                ';' => (Tok::Semi, 1),
                '&' => (Tok::Amp, 1),
                _ if is_word_char(c) => {
                    let len = rest.find(|ch: char| !is_word_char(ch)).unwrap_or(rest.len());
                    (Tok::Word(rest[..len].to_string()), len)
                }
                _ => return Err(err(i, &format!("unexpected character `{c}`"))),
            }
        };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

struct Parser<'a> {
    sig: &'a Signature,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err("expected a name"),
        }
    }

    fn var(&mut self) -> Result<Var> {
        let at = self.offset();
        let w = self.word()?;
        self.sig.var(&w).ok_or(Error::Parse { pos: at, msg: format!("unknown variable `{w}`") })
    }

    fn equality(&mut self) -> Result<(Var, u8, bool)> {
        let v = self.var()?;
        let negated = if self.eat(&Tok::Neq) {
            true
        } else {
            self.expect(&Tok::Eq, "`=`")?;
            false
        };
        let at = self.offset();
        let w = self.word()?;
        let x = self.sig.value(v, &w).ok_or(Error::Parse {
            pos: at,
            msg: format!("value `{w}` is not in the range of `{}`", self.sig.name(v)),
        })?;
        Ok((v, x, negated))
    }

    /// formula := gor ( '=>' formula )?
    fn formula(&mut self) -> Result<Formula> {
        let at = self.offset();
        let left = self.binary(1)?;
        if self.eat(&Tok::Implies) {
            let right = self.formula()?;
            return desugar_selective(left, right).map_err(|_| Error::Parse {
                pos: at,
                msg: "the antecedent of => must be a CO formula".into(),
            });
        }
        Ok(left)
    }

    fn binary(&mut self, level: u8) -> Result<Formula> {
        if level == 4 {
            return self.unary();
        }
        let (tok, op): (Tok, fn(Formula, Formula) -> Formula) = match level {
            1 => (Tok::GOr, Formula::gor),
            2 => (Tok::Or, Formula::or),
            _ => (Tok::And, Formula::and),
        };
        let mut left = self.binary(level + 1)?;
        while self.eat(&tok) {
            let right = self.binary(level + 1)?;
            left = op(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        let at = self.offset();
        if self.eat(&Tok::Not) {
            let body = self.unary()?;
            if !body.is_co() {
                return Err(Error::Parse {
                    pos: at,
                    msg: "negation may only apply to CO formulas".into(),
                });
            }
            return Ok(Formula::neg(body));
        }
        self.primary()
    }

    /// Does `( w=w (& w=w)* ) []->` start here?
    fn at_antecedent(&self) -> bool {
        let mut k = 1;
        loop {
            let ok = matches!(self.peek_at(k), Some(Tok::Word(_)))
                && self.peek_at(k + 1) == Some(&Tok::Eq)
                && matches!(self.peek_at(k + 2), Some(Tok::Word(_)));
            if !ok {
                return false;
            }
            k += 3;
            match self.peek_at(k) {
                Some(Tok::Amp) => k += 1,
                Some(Tok::RParen) => return self.peek_at(k + 1) == Some(&Tok::Arrow),
                _ => return false,
            }
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::LParen) if self.at_antecedent() => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    let (v, x, _) = self.equality()?;
                    items.push((v, x));
                    if !self.eat(&Tok::Amp) {
                        break;
                    }
                }
                self.expect(&Tok::RParen, "`)`")?;
                self.expect(&Tok::Arrow, "`[]->`")?;
                let body = self.formula()?;
                Ok(Formula::Cf(InterventionSpec::new(items), Box::new(body)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Word(w)) if (w == "dep" || w == "con") && self.peek_at(1) == Some(&Tok::LParen) => {
                let con = w == "con";
                self.pos += 2;
                if con {
                    let y = self.var()?;
                    self.expect(&Tok::RParen, "`)`")?;
                    return Ok(Formula::con(y));
                }
                let mut xs = Vec::new();
                if !self.eat(&Tok::Semi) {
                    loop {
                        xs.push(self.var()?);
                        if self.eat(&Tok::Semi) {
                            break;
                        }
                        self.expect(&Tok::Comma, "`,` or `;`")?;
                    }
                }
                let y = self.var()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Formula::dep(xs, y))
            }
            Some(Tok::Word(_)) => {
                let (v, x, negated) = self.equality()?;
                Ok(if negated { Formula::neq(v, x) } else { Formula::eq(v, x) })
            }
            Some(_) => self.err("expected a formula"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse one formula over `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser { sig, toks, pos: 0, end: text.len() };
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// One formula per nonblank line; `#` starts a comment.
pub fn parse_file(text: &str, sig: &Signature) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            let f = parse(body, sig).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
                e => e,
            })?;
            out.push(f);
        }
        offset += line.len();
    }
    Ok(out)
}
