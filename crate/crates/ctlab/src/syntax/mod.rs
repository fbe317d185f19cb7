//! Formulas of CO, CO with global disjunction, and COD over a signature.
//!
//! Concrete grammar (ASCII):
//!
//! ```text
//! X=v   X!=v   !a   p /\ q   p \/ q   p \\/ q   (X=x & Y=y) []-> p   a => p
//! dep(X,Y; Z)   dep(; Z)   con(Z)
//! ```
//!
//! `\/` is the tensor disjunction and `\\/` the global one. Binding strength,
//! tightest first: `!`, `/\`, `\/`, `\\/`, then `[]->` and `=>`. Binary
//! connectives associate to the left, conditionals to the right, and a
//! counterfactual's consequent extends as far as possible.

mod parse;
mod print;

pub use parse::{parse, parse_file};
pub use print::print;

use crate::error::{Error, Result};
use crate::intervention::InterventionSpec;
use crate::model::{Signature, Val, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Var, Val),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Tensor disjunction.
    Or(Box<Formula>, Box<Formula>),
    /// Global (Boolean) disjunction.
    GlobalOr(Box<Formula>, Box<Formula>),
    /// dep(X; Y); constancy when X is empty.
    Dep(Vec<Var>, Var),
    Cf(InterventionSpec, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    Co,
    Cod,
    Cov,
    /// Uses both dependence atoms and global disjunction.
    Mixed,
}

impl std::fmt::Display for Language {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Language::Co => "CO",
            Language::Cod => "COD",
            Language::Cov => "COV",
            Language::Mixed => "NONE",
        })
    }
}

// Longer conjunction/disjunction lists are built as balanced trees so that
// recursion depth stays logarithmic.
const CHAIN: usize = 32;

fn fold(items: Vec<Formula>, op: fn(Formula, Formula) -> Formula) -> Option<Formula> {
    if items.len() <= CHAIN {
        let mut it = items.into_iter();
        let first = it.next()?;
        return Some(it.fold(first, op));
    }
    let mut items = items;
    let right = items.split_off(items.len().div_ceil(2));
    Some(op(fold(items, op)?, fold(right, op)?))
}

impl Formula {
    pub fn eq(v: Var, x: Val) -> Formula {
        Formula::Eq(v, x)
    }

    pub fn neq(v: Var, x: Val) -> Formula {
        Formula::Neg(Box::new(Formula::Eq(v, x)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::Neg(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn gor(a: Formula, b: Formula) -> Formula {
        Formula::GlobalOr(Box::new(a), Box::new(b))
    }

    pub fn dep(xs: Vec<Var>, y: Var) -> Formula {
        Formula::Dep(xs, y)
    }

    pub fn con(y: Var) -> Formula {
        Formula::Dep(vec![], y)
    }

    /// A counterfactual. With an empty antecedent the consequent is returned
    /// unchanged, since intervening on nothing leaves every team as it is.
    pub fn cf(iv: InterventionSpec, body: Formula) -> Formula {
        if iv.is_empty() {
            body
        } else {
            Formula::Cf(iv, Box::new(body))
        }
    }

    /// X1=x1 ⟡ φ style shorthand with a list of pairs.
    pub fn cf_items(items: Vec<(Var, Val)>, body: Formula) -> Formula {
        Formula::cf(InterventionSpec::new(items), body)
    }

    /// ⊥ := X=x ∧ ¬X=x on the first variable and its first value.
    pub fn bot() -> Formula {
        Formula::and(Formula::eq(0, 0), Formula::neq(0, 0))
    }

    /// ⊤ := X=x ∨ ¬X=x.
    pub fn top() -> Formula {
        Formula::or(Formula::eq(0, 0), Formula::neq(0, 0))
    }

    /// Y=y ∧ ¬Y=y for any Y and y.
    pub fn is_bot(&self) -> bool {
        match self {
            Formula::And(a, b) => match (&**a, &**b) {
                (Formula::Eq(v, x), Formula::Neg(n)) => **n == Formula::Eq(*v, *x),
                _ => false,
            },
            _ => false,
        }
    }

    /// Conjunction of a list; the empty conjunction is ⊤.
    pub fn big_and(items: impl IntoIterator<Item = Formula>) -> Formula {
        fold(items.into_iter().collect(), Formula::and).unwrap_or_else(Formula::top)
    }

    /// Tensor disjunction of a list; the empty disjunction is ⊥.
    pub fn big_or(items: impl IntoIterator<Item = Formula>) -> Formula {
        fold(items.into_iter().collect(), Formula::or).unwrap_or_else(Formula::bot)
    }

    /// Global disjunction of a list; the empty one is ⊥.
    pub fn big_gor(items: impl IntoIterator<Item = Formula>) -> Formula {
        fold(items.into_iter().collect(), Formula::gor).unwrap_or_else(Formula::bot)
    }

    /// Conjunction of equalities X=x.
    pub fn eqs(items: &[(Var, Val)]) -> Formula {
        Formula::big_and(items.iter().map(|&(v, x)| Formula::eq(v, x)))
    }

    fn flags(&self) -> (bool, bool) {
        let mut dep = false;
        let mut gor = false;
        self.visit(&mut |f| match f {
            Formula::Dep(..) => dep = true,
            Formula::GlobalOr(..) => gor = true,
            _ => {}
        });
        (dep, gor)
    }

    pub fn language(&self) -> Language {
        match self.flags() {
            (false, false) => Language::Co,
            (true, false) => Language::Cod,
            (false, true) => Language::Cov,
            (true, true) => Language::Mixed,
        }
    }

    pub fn is_co(&self) -> bool {
        self.language() == Language::Co
    }

    /// Free of counterfactuals.
    pub fn is_cf_free(&self) -> bool {
        let mut free = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Cf(..)) {
                free = false
            }
        });
        free
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(..) | Formula::Dep(..) => vec![],
            Formula::Neg(a) | Formula::Cf(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::GlobalOr(a, b) => vec![a, b],
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Checks ranges and the restriction of negation to CO bodies.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        let mut err = None;
        let bad = |v: Var, x: Option<Val>| {
            v >= sig.len() || x.is_some_and(|x| x as usize >= sig.range_size(v))
        };
        self.visit(&mut |f| {
            if err.is_some() {
                return;
            }
            let ok = match f {
                Formula::Eq(v, x) => !bad(*v, Some(*x)),
                Formula::Dep(xs, y) => !bad(*y, None) && xs.iter().all(|&x| !bad(x, None)),
                Formula::Cf(iv, _) => iv.check(sig).is_ok(),
                Formula::Neg(a) => {
                    if !a.is_co() {
                        err = Some(Error::Language("negation applied to a non-CO formula".into()));
                    }
                    true
                }
                _ => true,
            };
            if !ok && err.is_none() {
                err = Some(Error::Invalid("formula leaves the signature".into()));
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Number of occurrences of `theta` as a subformula.
    pub fn count_occurrences(&self, theta: &Formula) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if f == theta {
                n += 1
            }
        });
        n
    }
}

/// α ⊃ φ, read as ¬α ∨ φ.
pub fn desugar_selective(alpha: Formula, phi: Formula) -> Result<Formula> {
    if !alpha.is_co() {
        return Err(Error::Language("the antecedent of => must be a CO formula".into()));
    }
    Ok(Formula::or(Formula::neg(alpha), phi))
}

/// φ(ψ/[θ,k]): replace the k-th occurrence (1-based, pre-order, left to
/// right) of θ in φ by ψ.
pub fn replace_occurrence(phi: &Formula, theta: &Formula, k: usize, psi: &Formula) -> Result<Formula> {
    fn go(f: &Formula, theta: &Formula, k: usize, psi: &Formula, seen: &mut usize) -> Formula {
        if *seen < k && f == theta {
            *seen += 1;
            if *seen == k {
                return psi.clone();
            }
        }
        if *seen >= k {
            return f.clone();
        }
        let mut g = |a: &Formula| Box::new(go(a, theta, k, psi, seen));
        match f {
            Formula::Eq(..) | Formula::Dep(..) => f.clone(),
            Formula::Neg(a) => Formula::Neg(g(a)),
            Formula::Cf(iv, a) => Formula::Cf(iv.clone(), g(a)),
            Formula::And(a, b) => {
                let a = g(a);
                Formula::And(a, g(b))
            }
            Formula::Or(a, b) => {
                let a = g(a);
                Formula::Or(a, g(b))
            }
            Formula::GlobalOr(a, b) => {
                let a = g(a);
                Formula::GlobalOr(a, g(b))
            }
        }
    }
    if k == 0 {
        return Err(Error::Invalid("occurrences are counted from 1".into()));
    }
    let mut seen = 0;
    let out = go(phi, theta, k, psi, &mut seen);
    if seen < k {
        return Err(Error::Invalid(format!("only {seen} occurrences, asked for number {k}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let x = Formula::eq(0, 1);
        assert_eq!(x.language(), Language::Co);
        assert_eq!(Formula::con(1).language(), Language::Cod);
        assert_eq!(Formula::gor(x.clone(), x.clone()).language(), Language::Cov);
        assert_eq!(Formula::gor(x, Formula::con(0)).language(), Language::Mixed);
    }

    #[test]
    fn second_occurrence_only() {
        // con(X) \/ (Y=0 []-> con(X)), replace the second con(X) with X=1
        let c = Formula::con(0);
        let phi = Formula::or(c.clone(), Formula::cf_items(vec![(1, 0)], c.clone()));
        let out = replace_occurrence(&phi, &c, 2, &Formula::eq(0, 1)).unwrap();
        let want = Formula::or(c.clone(), Formula::cf_items(vec![(1, 0)], Formula::eq(0, 1)));
        assert_eq!(out, want);
        assert!(replace_occurrence(&phi, &c, 3, &Formula::eq(0, 1)).is_err());
    }

    #[test]
    fn long_lists_stay_shallow() {
        let f = Formula::big_and((0..1000).map(|_| Formula::eq(0, 0)));
        assert!(f.depth() < 50);
        assert_eq!(f.size(), 1999);
    }

    #[test]
    fn bottom_shapes() {
        assert!(Formula::bot().is_bot());
        assert!(Formula::and(Formula::eq(2, 1), Formula::neq(2, 1)).is_bot());
        assert!(!Formula::and(Formula::eq(2, 1), Formula::neq(2, 0)).is_bot());
    }
}
