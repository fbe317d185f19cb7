//! Signatures, assignments, function systems and (generalized) causal teams.
//!
//! Value tokens are interned per variable: a value is the position of its
//! token in the variable's range. Variables are indexed by their position in
//! the signature, which is also the order used for parent lists.

mod enumerate;
pub mod io;
mod law;
mod team;

pub use enumerate::*;
pub use law::*;
pub use team::*;

use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub type Var = usize;
pub type Val = u8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    names: Vec<String>,
    ranges: Vec<Vec<String>>,
    index: BTreeMap<String, Var>,
}

impl Signature {
    pub fn new<N, T>(vars: Vec<(N, Vec<T>)>) -> Result<Self>
    where
        N: Into<String>,
        T: Into<String>,
    {
        if vars.is_empty() {
            return Err(Error::Signature("at least one variable is required".into()));
        }
        let mut names = Vec::new();
        let mut ranges = Vec::new();
        let mut index = BTreeMap::new();
        for (name, range) in vars {
            let name: String = name.into();
            if name.is_empty() || !name.chars().all(is_word_char) {
                return Err(Error::Signature(format!("bad variable name `{name}`")));
            }
            let range: Vec<String> = range.into_iter().map(Into::into).collect();
            if range.is_empty() {
                return Err(Error::Signature(format!("empty range for `{name}`")));
            }
            if range.len() > Val::MAX as usize {
                return Err(Error::Signature(format!("range of `{name}` is too large")));
            }
            for (i, tok) in range.iter().enumerate() {
                if tok.is_empty() || !tok.chars().all(is_word_char) {
                    return Err(Error::Signature(format!("bad value token `{tok}`")));
                }
                if range[..i].contains(tok) {
                    return Err(Error::Signature(format!("duplicate value `{tok}` in `{name}`")));
                }
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Signature(format!("duplicate variable `{name}`")));
            }
            names.push(name);
            ranges.push(range);
        }
        Ok(Signature { names, ranges, index })
    }

    /// Shorthand for tests and fixtures: `Signature::simple(&[("X", &["0","1"])])`.
    pub fn simple(vars: &[(&str, &[&str])]) -> Result<Self> {
        Signature::new(vars.iter().map(|(n, r)| (*n, r.to_vec())).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> std::ops::Range<Var> {
        0..self.names.len()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v]
    }

    pub fn range(&self, v: Var) -> &[String] {
        &self.ranges[v]
    }

    pub fn range_size(&self, v: Var) -> usize {
        self.ranges[v].len()
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn var_checked(&self, name: &str) -> Result<Var> {
        self.var(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn value(&self, v: Var, token: &str) -> Option<Val> {
        self.ranges[v].iter().position(|t| t == token).map(|i| i as Val)
    }

    pub fn value_checked(&self, v: Var, token: &str) -> Result<Val> {
        self.value(v, token).ok_or_else(|| Error::OutOfRange {
            var: self.names[v].clone(),
            value: token.to_string(),
        })
    }

    pub fn token(&self, v: Var, x: Val) -> &str {
        &self.ranges[v][x as usize]
    }

    /// |A_σ|, saturating.
    pub fn assignment_count(&self) -> usize {
        self.ranges.iter().fold(1usize, |acc, r| acc.saturating_mul(r.len()))
    }

    /// All value tuples over `vars`, lexicographic with the first variable
    /// most significant.
    pub fn tuples(&self, vars: &[Var]) -> Tuples {
        Tuples::new(vars.iter().map(|&v| self.range_size(v)).collect())
    }

    /// Build an assignment from `(name, token)` pairs covering every variable.
    pub fn assignment(&self, pairs: &[(&str, &str)]) -> Result<Assignment> {
        let mut vals = vec![None; self.len()];
        for (n, t) in pairs {
            let v = self.var_checked(n)?;
            vals[v] = Some(self.value_checked(v, t)?);
        }
        let vals = vals
            .into_iter()
            .enumerate()
            .map(|(v, x)| x.ok_or_else(|| Error::Invalid(format!("no value for `{}`", self.names[v]))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Assignment(vals))
    }
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\'' | '+' | '-')
}

/// Odometer over a mixed-radix space. An empty radix list yields exactly one
/// empty tuple; any zero radix yields nothing.
#[derive(Clone, Debug)]
pub struct Tuples {
    radices: Vec<usize>,
    next: Option<Vec<Val>>,
}

impl Tuples {
    pub fn new(radices: Vec<usize>) -> Self {
        let next = if radices.contains(&0) {
            None
        } else {
            Some(vec![0; radices.len()])
        };
        Tuples { radices, next }
    }
}

impl Iterator for Tuples {
    type Item = Vec<Val>;

    fn next(&mut self) -> Option<Vec<Val>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if (succ[i] as usize) + 1 < self.radices[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// A total map from variables to values, stored densely in signature order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<Val>);

impl Assignment {
    pub fn get(&self, v: Var) -> Val {
        self.0[v]
    }

    pub fn set(&mut self, v: Var, x: Val) {
        self.0[v] = x;
    }

    pub fn project(&self, vars: &[Var]) -> Vec<Val> {
        vars.iter().map(|&v| self.0[v]).collect()
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        if self.0.len() != sig.len() {
            return Err(Error::Invalid("assignment length does not match signature".into()));
        }
        for v in sig.vars() {
            if self.0[v] as usize >= sig.range_size(v) {
                return Err(Error::OutOfRange {
                    var: sig.name(v).to_string(),
                    value: format!("#{}", self.0[v]),
                });
            }
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl std::fmt::Display + 'a {
        DisplayAssignment { s: self, sig }
    }
}

struct DisplayAssignment<'a> {
    s: &'a Assignment,
    sig: &'a Signature,
}

impl std::fmt::Display for DisplayAssignment<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for v in self.sig.vars() {
            if v > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", self.sig.name(v), self.sig.token(v, self.s.get(v)))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_cover_the_space_in_order() {
        let t: Vec<_> = Tuples::new(vec![2, 3]).collect();
        assert_eq!(t.len(), 6);
        assert_eq!(t[0], vec![0, 0]);
        assert_eq!(t[1], vec![0, 1]);
        assert_eq!(t[5], vec![1, 2]);
        assert_eq!(Tuples::new(vec![]).count(), 1);
        assert_eq!(Tuples::new(vec![2, 0]).count(), 0);
    }

    #[test]
    fn signature_rejects_bad_input() {
        assert!(Signature::simple(&[]).is_err());
        assert!(Signature::simple(&[("X", &[])]).is_err());
        assert!(Signature::simple(&[("X", &["0", "0"])]).is_err());
        assert!(Signature::simple(&[("X", &["0"]), ("X", &["1"])]).is_err());
        let s = Signature::simple(&[("X", &["0", "1"]), ("Y", &["a"])]).unwrap();
        assert_eq!(s.var("Y"), Some(1));
        assert_eq!(s.value(0, "1"), Some(1));
        assert_eq!(s.value(1, "b"), None);
    }
}
