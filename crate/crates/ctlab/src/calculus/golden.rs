//! Hand-built derivations of the derived rules, and the monotone
//! substitution transformer.

use super::{Derivation, Rule, System};
use crate::charform::{build_unf, phi_family};
use crate::error::{Error, Result};
use crate::intervention::InterventionSpec;
use crate::model::{Signature, Val, Var};
use crate::syntax::Formula;
use std::cell::Cell;

/// A named derivation with what it is meant to prove.
#[derive(Clone, Debug)]
pub struct Golden {
    pub name: &'static str,
    pub system: System,
    pub signature: Signature,
    pub derivation: Derivation,
    pub assumptions: Vec<Formula>,
    pub conclusion: Formula,
}

/// Fresh hypothesis labels.
struct Labels(Cell<usize>);

impl Labels {
    fn new() -> Self {
        Labels(Cell::new(0))
    }
    fn next(&self, stem: &str) -> String {
        let n = self.0.get();
        self.0.set(n + 1);
        format!("{stem}{n}")
    }
}

type D = Derivation;

fn hyp(l: &str, f: &Formula) -> D {
    D::hyp(l, f.clone())
}

fn and_e(d: D, left: bool) -> Result<D> {
    let c = match &d.conclusion {
        Formula::And(a, b) => if left { (**a).clone() } else { (**b).clone() },
        _ => return Err(Error::Invalid("and-E on a non-conjunction".into())),
    };
    Ok(D::node(Rule::AndE, c, vec![d]))
}

fn and_i(a: D, b: D) -> D {
    let c = Formula::and(a.conclusion.clone(), b.conclusion.clone());
    D::node(Rule::AndI, c, vec![a, b])
}

fn neg_e(a: D, na: D, c: Formula) -> D {
    D::node(Rule::NegE, c, vec![a, na])
}

fn cf_parts(f: &Formula) -> Result<(InterventionSpec, Formula)> {
    match f {
        Formula::Cf(iv, b) => Ok((iv.clone(), (**b).clone())),
        _ => Err(Error::Invalid("expected a counterfactual".into())),
    }
}

/// X=x []-> a from X=x []-> φ and a closed derivation [φ] ⊢ a.
fn rpl_c(major: D, label: &str, side: D) -> Result<D> {
    let (iv, _) = cf_parts(&major.conclusion)?;
    let c = Formula::Cf(iv, Box::new(side.conclusion.clone()));
    Ok(D::node(Rule::CfRplC, c, vec![major, side]).closing(1, &[label]))
}

fn cf_and_i(a: D, b: D) -> Result<D> {
    let (iv, x) = cf_parts(&a.conclusion)?;
    let (_, y) = cf_parts(&b.conclusion)?;
    Ok(D::node(Rule::CfAndI, Formula::Cf(iv, Box::new(Formula::and(x, y))), vec![a, b]))
}

fn or_com(d: D) -> Result<D> {
    let c = match &d.conclusion {
        Formula::Or(a, b) => Formula::or((**b).clone(), (**a).clone()),
        _ => return Err(Error::Invalid("or-Com on a non-disjunction".into())),
    };
    Ok(D::node(Rule::OrCom, c, vec![d]))
}

fn or_rpl(major: D, label: &str, side: D) -> Result<D> {
    let c = match &major.conclusion {
        Formula::Or(_, b) => Formula::or(side.conclusion.clone(), (**b).clone()),
        _ => return Err(Error::Invalid("or-Rpl on a non-disjunction".into())),
    };
    Ok(D::node(Rule::OrRpl, c, vec![major, side]).closing(1, &[label]))
}

/// Weaken `d` into `target` by or-I or vvee-I steps, if the conclusion of
/// `d` sits in `target` under disjunctions.
fn intro_into(target: &Formula, d: D) -> Result<D> {
    fn contains(t: &Formula, f: &Formula) -> bool {
        t == f
            || match t {
                Formula::Or(a, b) | Formula::GlobalOr(a, b) => contains(a, f) || contains(b, f),
                _ => false,
            }
    }
    if *target == d.conclusion {
        return Ok(d);
    }
    let (a, b, rule) = match target {
        Formula::Or(a, b) => (a, b, Rule::OrI),
        Formula::GlobalOr(a, b) => (a, b, Rule::GorI),
        _ => return Err(Error::Invalid("conclusion does not occur in the target".into())),
    };
    let inner = if contains(a, &d.conclusion) {
        intro_into(a, d)?
    } else if contains(b, &d.conclusion) {
        intro_into(b, d)?
    } else {
        return Err(Error::Invalid("conclusion does not occur in the target".into()));
    };
    Ok(D::node(rule, target.clone(), vec![inner]))
}

/// Replace every hypothesis labelled `label` by `sub`.
fn graft(d: &D, label: &str, sub: &D) -> D {
    if d.rule == Rule::Hyp && d.label.as_deref() == Some(label) {
        return sub.clone();
    }
    let mut out = d.clone();
    out.premises = d.premises.iter().map(|p| graft(p, label, sub)).collect();
    out
}

/// Given a derivation `d` of θ′ whose only open hypothesis is θ (labelled
/// `label`), build a derivation of φ(θ′/[θ,k]) from the hypothesis φ,
/// labelled `root`. The occurrence must not sit under a negation.
pub fn monotone_substitution(phi: &Formula, theta: &Formula, k: usize, d: &D, label: &str, root: &str) -> Result<D> {
    let labels = Labels::new();
    mono(phi, theta, k, d, label, root, &labels)
}

fn mono(phi: &Formula, theta: &Formula, k: usize, d: &D, label: &str, root: &str, labels: &Labels) -> Result<D> {
    if k == 0 {
        return Err(Error::Invalid("occurrences are counted from 1".into()));
    }
    if phi == theta && k == 1 {
        return Ok(graft(d, label, &hyp(root, phi)));
    }
    let skip = usize::from(phi == theta);
    let k = k - skip;
    let here = hyp(root, phi);
    match phi {
        Formula::And(a, b) => {
            let na = a.count_occurrences(theta);
            if k <= na {
                let l = labels.next("m");
                let inner = mono(a, theta, k, d, label, &l, labels)?;
                Ok(and_i(graft(&inner, &l, &and_e(here.clone(), true)?), and_e(here, false)?))
            } else {
                let l = labels.next("m");
                let inner = mono(b, theta, k - na, d, label, &l, labels)?;
                Ok(and_i(and_e(here.clone(), true)?, graft(&inner, &l, &and_e(here, false)?)))
            }
        }
        Formula::Or(a, b) => {
            let na = a.count_occurrences(theta);
            let l = labels.next("m");
            if k <= na {
                let inner = mono(a, theta, k, d, label, &l, labels)?;
                or_rpl(here, &l, inner)
            } else {
                let inner = mono(b, theta, k - na, d, label, &l, labels)?;
                or_com(or_rpl(or_com(here)?, &l, inner)?)
            }
        }
        Formula::GlobalOr(a, b) => {
            let na = a.count_occurrences(theta);
            let (la, lb) = (labels.next("m"), labels.next("m"));
            let (da, db) = if k <= na {
                (mono(a, theta, k, d, label, &la, labels)?, hyp(&lb, b))
            } else {
                (hyp(&la, a), mono(b, theta, k - na, d, label, &lb, labels)?)
            };
            let c = Formula::gor(da.conclusion.clone(), db.conclusion.clone());
            let left = intro_into(&c, da)?;
            let right = intro_into(&c, db)?;
            Ok(D::node(Rule::GorE, c, vec![here, left, right]).closing(1, &[&la]).closing(2, &[&lb]))
        }
        Formula::Cf(_, a) => {
            let l = labels.next("m");
            let inner = mono(a, theta, k, d, label, &l, labels)?;
            rpl_c(here, &l, inner)
        }
        Formula::Neg(_) => Err(Error::Invalid("substitution under a negation is not monotone".into())),
        _ => Err(Error::Invalid("no such occurrence".into())),
    }
}

fn valdef(sig: &Signature, v: Var) -> D {
    let n = sig.range_size(v) as Val;
    D::axiom(Rule::ValDef, Formula::big_or((0..n).map(|x| Formula::eq(v, x))))
}

/// α, ¬α ∨ β ⊢ β.
fn weak_modus_ponens(alpha: &Formula, beta: &Formula) -> D {
    let na = Formula::neg(alpha.clone());
    let major = hyp("m", &Formula::or(na.clone(), beta.clone()));
    let left = neg_e(hyp("a", alpha), hyp("u", &na), beta.clone());
    D::node(Rule::OrE, beta.clone(), vec![major, left, hyp("v", beta)])
        .closing(1, &["u"])
        .closing(2, &["v"])
}

/// X=x []-> Y=y ⊢ X=x []-> ¬Y=y′.
fn uniqueness(iv: &InterventionSpec, y: Var, v: Val, w: Val) -> Result<D> {
    let major = hyp("h", &Formula::Cf(iv.clone(), Box::new(Formula::eq(y, v))));
    let side = D::node(Rule::ValUnq, Formula::neq(y, w), vec![hyp("u", &Formula::eq(y, v))]);
    rpl_c(major, "u", side)
}

/// X=x []-> W=w, X=x []-> Y=y ⊢ (X=x ∧ W=w) []-> Y=y, for W outside X.
fn composition(iv: &InterventionSpec, w: (Var, Val), y: (Var, Val)) -> Result<D> {
    let (ew, ey) = (Formula::eq(w.0, w.1), Formula::eq(y.0, y.1));
    let a = hyp("h1", &Formula::Cf(iv.clone(), Box::new(ew.clone())));
    let b = hyp("h2", &Formula::Cf(iv.clone(), Box::new(ey.clone())));
    let both = cf_and_i(a, b)?;
    let conj = Formula::and(ew, ey.clone());
    let side = D::node(
        Rule::CfI,
        Formula::cf_items(vec![w], ey),
        vec![and_e(hyp("u", &conj), true)?, and_e(hyp("u", &conj), false)?],
    );
    let nested = rpl_c(both, "u", side)?;
    let (_, body) = cf_parts(&nested.conclusion)?;
    let (_, last) = cf_parts(&body)?;
    let mut items = iv.items.clone();
    items.push(w);
    Ok(D::node(Rule::CfExtr, Formula::cf_items(items, last), vec![nested]))
}

/// X=x []-> (φ ∧ ψ) ⊢ X=x []-> φ.
fn extraction(iv: &InterventionSpec, a: &Formula, b: &Formula) -> Result<D> {
    let conj = Formula::and(a.clone(), b.clone());
    let major = hyp("h", &Formula::Cf(iv.clone(), Box::new(conj.clone())));
    rpl_c(major, "u", and_e(hyp("u", &conj), true)?)
}

/// X=x []-> ¬α ⊢ ¬(X=x []-> α), X=x consistent.
fn cf_negation(iv: &InterventionSpec, alpha: &Formula) -> Result<D> {
    let na = Formula::neg(alpha.clone());
    let pos = Formula::Cf(iv.clone(), Box::new(alpha.clone()));
    let both = cf_and_i(hyp("h", &Formula::Cf(iv.clone(), Box::new(na.clone()))), hyp("a", &pos))?;
    let conj = Formula::and(na, alpha.clone());
    let clash = neg_e(and_e(hyp("u", &conj), false)?, and_e(hyp("u", &conj), true)?, Formula::bot());
    let bot = rpl_c(both, "u", clash)?;
    let b = D::node(Rule::CfBotE, Formula::bot(), vec![bot]);
    Ok(D::node(Rule::NegI, Formula::neg(pos), vec![b]).closing(0, &["a"]))
}

/// From a derivation of X=x []-> (φ ∨ ψ), one of (X=x []-> φ) ∨ (X=x []-> ψ),
/// for CO φ, ψ and consistent X=x.
fn cf_or_split(major: D, labels: &Labels) -> Result<D> {
    let (iv, body) = cf_parts(&major.conclusion)?;
    let (phi, psi) = match &body {
        Formula::Or(a, b) => ((**a).clone(), (**b).clone()),
        _ => return Err(Error::Invalid("expected a disjunctive consequent".into())),
    };
    let a = Formula::Cf(iv.clone(), Box::new(phi.clone()));
    let b = Formula::Cf(iv.clone(), Box::new(psi.clone()));
    let goal = Formula::or(a.clone(), b.clone());
    let n = labels.next("n");
    let neither = Formula::neg(goal.clone());
    let refute = |f: &Formula| -> D {
        let l = labels.next("r");
        let weak = intro_into(&goal, hyp(&l, f)).expect("disjunct of the goal");
        let bot = neg_e(weak, hyp(&n, &neither), Formula::bot());
        D::node(Rule::NegI, Formula::neg(f.clone()), vec![bot]).closing(0, &[&l])
    };
    let not_a = D::node(Rule::NegCfE, Formula::Cf(iv.clone(), Box::new(Formula::neg(phi.clone()))), vec![refute(&a)]);
    let not_b = D::node(Rule::NegCfE, Formula::Cf(iv.clone(), Box::new(Formula::neg(psi.clone()))), vec![refute(&b)]);
    let all = cf_and_i(major, cf_and_i(not_a, not_b)?)?;
    let c = labels.next("c");
    let conj = Formula::and(body.clone(), Formula::and(Formula::neg(phi.clone()), Formula::neg(psi.clone())));
    let negs = and_e(hyp(&c, &conj), false)?;
    let (p, q) = (labels.next("p"), labels.next("q"));
    let left = neg_e(hyp(&p, &phi), and_e(negs.clone(), true)?, Formula::bot());
    let right = neg_e(hyp(&q, &psi), and_e(negs, false)?, Formula::bot());
    let cases = D::node(Rule::OrE, Formula::bot(), vec![and_e(hyp(&c, &conj), true)?, left, right])
        .closing(1, &[&p])
        .closing(2, &[&q]);
    let to_bot = rpl_c(all, &c, cases)?;
    let bot = D::node(Rule::CfBotE, Formula::bot(), vec![to_bot]);
    Ok(D::node(Rule::Raa, goal, vec![bot]).closing(0, &[&n]))
}

/// (X=x []-> φ) ∨ (X=x []-> ψ) ⊢ X=x []-> (φ ∨ ψ).
fn cf_or_join(iv: &InterventionSpec, phi: &Formula, psi: &Formula) -> Result<D> {
    let body = Formula::or(phi.clone(), psi.clone());
    let goal = Formula::Cf(iv.clone(), Box::new(body.clone()));
    let a = Formula::Cf(iv.clone(), Box::new(phi.clone()));
    let b = Formula::Cf(iv.clone(), Box::new(psi.clone()));
    let left = rpl_c(hyp("a", &a), "u", intro_into(&body, hyp("u", phi))?)?;
    let right = rpl_c(hyp("b", &b), "v", intro_into(&body, hyp("v", psi))?)?;
    Ok(D::node(Rule::OrE, goal, vec![hyp("h", &Formula::or(a, b)), left, right]).closing(1, &["a"]).closing(2, &["b"]))
}

/// ⊢ (X=x []-> Y=0) ∨ (X=x []-> Y=1) for binary Y.
fn definiteness(sig: &Signature, x: (Var, Val), y: Var) -> Result<D> {
    let ex = Formula::eq(x.0, x.1);
    let iv = InterventionSpec::single(x.0, x.1);
    let eff = D::axiom(Rule::CfEff, Formula::Cf(iv, Box::new(ex)));
    let moved = rpl_c(eff, "u", valdef(sig, y))?;
    cf_or_split(moved, &Labels::new())
}

/// φ ∨∨ ψ ⊢ ψ ∨∨ φ.
fn gor_com(a: &Formula, b: &Formula) -> Result<D> {
    let goal = Formula::gor(b.clone(), a.clone());
    let l = intro_into(&goal, hyp("u", a))?;
    let r = intro_into(&goal, hyp("v", b))?;
    Ok(D::node(Rule::GorE, goal, vec![hyp("h", &Formula::gor(a.clone(), b.clone())), l, r])
        .closing(1, &["u"])
        .closing(2, &["v"]))
}

/// φ ∧ (ψ ∨∨ χ) ⊢ (φ ∧ ψ) ∨∨ (φ ∧ χ).
fn and_gor_dst(a: &Formula, b: &Formula, c: &Formula) -> Result<D> {
    let h = hyp("h", &Formula::and(a.clone(), Formula::gor(b.clone(), c.clone())));
    let goal = Formula::gor(Formula::and(a.clone(), b.clone()), Formula::and(a.clone(), c.clone()));
    let l = intro_into(&goal, and_i(and_e(h.clone(), true)?, hyp("u", b)))?;
    let r = intro_into(&goal, and_i(and_e(h.clone(), true)?, hyp("v", c)))?;
    Ok(D::node(Rule::GorE, goal, vec![and_e(h, false)?, l, r]).closing(1, &["u"]).closing(2, &["v"]))
}

/// From a derivation of φ ∧ (ψ ∨ χ), one of (φ ∧ ψ) ∨ (φ ∧ χ).
fn and_or_dst(d: D, labels: &Labels) -> Result<D> {
    let (b, c) = match &d.conclusion {
        Formula::And(_, r) => match &**r {
            Formula::Or(b, c) => ((**b).clone(), (**c).clone()),
            _ => return Err(Error::Invalid("expected a disjunctive right conjunct".into())),
        },
        _ => return Err(Error::Invalid("expected a conjunction".into())),
    };
    let a = and_e(d.clone(), true)?;
    let (u, v) = (labels.next("u"), labels.next("v"));
    let step = or_rpl(and_e(d, false)?, &u, and_i(a.clone(), hyp(&u, &b)))?;
    let swapped = or_com(step)?;
    let step = or_rpl(swapped, &v, and_i(a, hyp(&v, &c)))?;
    or_com(step)
}

/// (φ ∨ ψ) ∨∨ (φ ∨ χ) ⊢ φ ∨ (ψ ∨∨ χ).
fn or_gor_collect(a: &Formula, b: &Formula, c: &Formula) -> Result<D> {
    let inner = Formula::gor(b.clone(), c.clone());
    let goal = Formula::or(a.clone(), inner.clone());
    let side = |l: &str, f: &Formula, w: &str| -> Result<D> {
        let swapped = or_com(hyp(l, &Formula::or(a.clone(), f.clone())))?;
        or_com(or_rpl(swapped, w, intro_into(&inner, hyp(w, f))?)?)
    };
    let major = hyp("h", &Formula::gor(Formula::or(a.clone(), b.clone()), Formula::or(a.clone(), c.clone())));
    Ok(D::node(Rule::GorE, goal, vec![major, side("u", b, "x")?, side("v", c, "y")?])
        .closing(1, &["u"])
        .closing(2, &["v"]))
}

/// (X=x []-> ψ) ∨∨ (X=x []-> χ) ⊢ X=x []-> (ψ ∨∨ χ).
fn cf_gor_collect(iv: &InterventionSpec, b: &Formula, c: &Formula) -> Result<D> {
    let inner = Formula::gor(b.clone(), c.clone());
    let goal = Formula::Cf(iv.clone(), Box::new(inner.clone()));
    let cb = Formula::Cf(iv.clone(), Box::new(b.clone()));
    let cc = Formula::Cf(iv.clone(), Box::new(c.clone()));
    let l = rpl_c(hyp("u", &cb), "x", intro_into(&inner, hyp("x", b))?)?;
    let r = rpl_c(hyp("v", &cc), "y", intro_into(&inner, hyp("y", c))?)?;
    Ok(D::node(Rule::GorE, goal, vec![hyp("h", &Formula::gor(cb, cc)), l, r]).closing(1, &["u"]).closing(2, &["v"]))
}

/// dep(X;Y), X=x ⊢ con(Y).
fn dep_value(x: Var, v: Val, y: Var, dep: D) -> D {
    let con = D::node(Rule::ConI, Formula::con(x), vec![hyp("e", &Formula::eq(x, v))]);
    D::node(Rule::DepE, Formula::con(y), vec![dep, con])
}

/// dep(X;Y) ⊢ (X=0 ∧ con(Y)) ∨ (X=1 ∧ con(Y)) for binary X.
fn dep_to_or(sig: &Signature, x: Var, y: Var, label: &str) -> Result<D> {
    let labels = Labels::new();
    let dep = Formula::dep(vec![x], y);
    let start = and_i(hyp(label, &dep), valdef(sig, x));
    let split = and_or_dst(start, &labels)?;
    // each disjunct dep ∧ X=v becomes X=v ∧ con(Y)
    let fix = |v: Val, l: &str| -> Result<D> {
        let conj = Formula::and(dep.clone(), Formula::eq(x, v));
        let e = and_e(hyp(l, &conj), false)?;
        let c = D::node(Rule::DepE, Formula::con(y), vec![
            and_e(hyp(l, &conj), true)?,
            D::node(Rule::ConI, Formula::con(x), vec![e.clone()]),
        ]);
        Ok(and_i(e, c))
    };
    let (u, w) = (labels.next("f"), labels.next("f"));
    let step = or_rpl(split, &u, fix(0, &u)?)?;
    let step = or_rpl(or_com(step)?, &w, fix(1, &w)?)?;
    or_com(step)
}

/// (X=0 ∧ con(Y)) ∨ (X=1 ∧ con(Y)) ⊢ dep(X;Y) for binary X and Y.
fn or_to_dep(sig: &Signature, x: Var, y: Var, label: &str) -> Result<D> {
    let labels = Labels::new();
    let cy = Formula::con(y);
    let phi = Formula::or(
        Formula::and(Formula::eq(x, 0), cy.clone()),
        Formula::and(Formula::eq(x, 1), cy.clone()),
    );
    let k = labels.next("k");
    let mut by_x = Vec::new();
    let mut x_labels = Vec::new();
    for xv in 0..2 as Val {
        let e = labels.next("e");
        let mut by_y = Vec::new();
        let mut y_labels = Vec::new();
        for yv in 0..2 as Val {
            let g = labels.next("g");
            let phi_y = Formula::or(
                Formula::and(Formula::eq(x, 0), Formula::eq(y, yv)),
                Formula::and(Formula::eq(x, 1), cy.clone()),
            );
            let mut leaves = Vec::new();
            let mut z_labels = Vec::new();
            for zv in 0..2 as Val {
                let h = labels.next("h");
                let left = Formula::and(Formula::eq(x, 0), Formula::eq(y, yv));
                let right = Formula::and(Formula::eq(x, 1), Formula::eq(y, zv));
                let psi = Formula::or(left.clone(), right.clone());
                // the disjunct matching X=xv gives its Y value; the other clashes
                let target = Formula::eq(y, if xv == 0 { yv } else { zv });
                let (p, q) = (labels.next("p"), labels.next("q"));
                let own = |l: &str, f: &Formula| and_e(hyp(l, f), false);
                let clash = |l: &str, f: &Formula, other: Val| -> Result<D> {
                    let unq = D::node(Rule::ValUnq, Formula::neq(x, other), vec![hyp(&e, &Formula::eq(x, xv))]);
                    Ok(neg_e(and_e(hyp(l, f), true)?, unq, target.clone()))
                };
                let (dl, dr) = if xv == 0 {
                    (own(&p, &left)?, clash(&q, &right, 1)?)
                } else {
                    (clash(&p, &left, 0)?, own(&q, &right)?)
                };
                let val = D::node(Rule::OrE, target.clone(), vec![hyp(&h, &psi), dl, dr])
                    .closing(1, &[&p])
                    .closing(2, &[&q]);
                leaves.push(D::node(Rule::ConI, cy.clone(), vec![val]));
                z_labels.push(h);
            }
            let mut inner = D::node(Rule::ConE, cy.clone(), std::iter::once(hyp(&g, &phi_y)).chain(leaves).collect())
                .param("var", sig.name(y))
                .param("k", 1);
            for (i, l) in z_labels.iter().enumerate() {
                inner = inner.closing(i + 1, &[l]);
            }
            by_y.push(inner);
            y_labels.push(g);
        }
        let mut mid = D::node(Rule::ConE, cy.clone(), std::iter::once(hyp(label, &phi)).chain(by_y).collect())
            .param("var", sig.name(y))
            .param("k", 1);
        for (i, l) in y_labels.iter().enumerate() {
            mid = mid.closing(i + 1, &[l]);
        }
        by_x.push(mid);
        x_labels.push(e);
    }
    let mut top = D::node(Rule::ConE, cy.clone(), std::iter::once(hyp(&k, &Formula::con(x))).chain(by_x).collect())
        .param("var", sig.name(x))
        .param("k", 1);
    for (i, l) in x_labels.iter().enumerate() {
        top = top.closing(i + 1, &[l]);
    }
    Ok(D::node(Rule::DepI, Formula::dep(vec![x], y), vec![top]).closing(0, &[&k]))
}

fn sig2() -> Signature {
    Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).expect("static signature")
}

fn sig3() -> Signature {
    Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"]), ("Z", &["0", "1"])]).expect("static signature")
}

fn golden(name: &'static str, system: System, sig: &Signature, d: D, assumptions: Vec<Formula>) -> Golden {
    Golden { name, system, signature: sig.clone(), conclusion: d.conclusion.clone(), derivation: d, assumptions }
}

/// The derived rules, each as a checked-in derivation with its intended
/// premises and conclusion.
pub fn golden_derived_rules() -> Result<Vec<Golden>> {
    let s2 = sig2();
    let s3 = sig3();
    let (x, y, z) = (0, 1, 2);
    let ivx = InterventionSpec::single(x, 1);
    let mut out = Vec::new();

    let alpha = Formula::eq(x, 0);
    let beta = Formula::Cf(InterventionSpec::single(x, 1), Box::new(Formula::eq(y, 1)));
    out.push(golden(
        "weak_modus_ponens",
        System::CoG,
        &s2,
        weak_modus_ponens(&alpha, &beta),
        vec![Formula::or(Formula::neg(alpha.clone()), beta.clone()), alpha],
    ));

    out.push(golden(
        "uniqueness",
        System::CoG,
        &s2,
        uniqueness(&ivx, y, 0, 1)?,
        vec![Formula::Cf(ivx.clone(), Box::new(Formula::eq(y, 0)))],
    ));

    out.push(golden(
        "composition",
        System::CoG,
        &s3,
        composition(&ivx, (z, 0), (y, 1))?,
        vec![
            Formula::Cf(ivx.clone(), Box::new(Formula::eq(z, 0))),
            Formula::Cf(ivx.clone(), Box::new(Formula::eq(y, 1))),
        ],
    ));

    let (a, b) = (Formula::eq(y, 1), Formula::neq(z, 0));
    out.push(golden(
        "extraction_of_conjuncts",
        System::CoG,
        &s3,
        extraction(&ivx, &a, &b)?,
        vec![Formula::Cf(ivx.clone(), Box::new(Formula::and(a.clone(), b.clone())))],
    ));

    out.push(golden(
        "counterfactual_negation",
        System::CoG,
        &s2,
        cf_negation(&ivx, &Formula::eq(y, 0))?,
        vec![Formula::Cf(ivx.clone(), Box::new(Formula::neq(y, 0)))],
    ));

    let (p, q) = (Formula::eq(y, 0), Formula::and(Formula::eq(y, 1), Formula::eq(x, 1)));
    let major = Formula::Cf(ivx.clone(), Box::new(Formula::or(p.clone(), q.clone())));
    out.push(golden(
        "counterfactual_disjunction_split",
        System::CoG,
        &s2,
        cf_or_split(hyp("h", &major), &Labels::new())?,
        vec![major.clone()],
    ));
    out.push(golden(
        "counterfactual_disjunction_join",
        System::CoG,
        &s2,
        cf_or_join(&ivx, &p, &q)?,
        vec![Formula::or(
            Formula::Cf(ivx.clone(), Box::new(p.clone())),
            Formula::Cf(ivx.clone(), Box::new(q.clone())),
        )],
    ));

    out.push(golden("definiteness", System::CoG, &s2, definiteness(&s2, (x, 0), y)?, vec![]));

    let (a, b, c) = (Formula::eq(x, 0), Formula::eq(y, 1), Formula::Cf(ivx.clone(), Box::new(Formula::eq(y, 0))));
    out.push(golden(
        "global_or_commutes",
        System::CovG,
        &s2,
        gor_com(&a, &b)?,
        vec![Formula::gor(a.clone(), b.clone())],
    ));
    out.push(golden(
        "and_distributes_over_global_or",
        System::CovG,
        &s2,
        and_gor_dst(&a, &b, &c)?,
        vec![Formula::and(a.clone(), Formula::gor(b.clone(), c.clone()))],
    ));
    let dist_hyp = Formula::and(a.clone(), Formula::or(b.clone(), c.clone()));
    for (name, sys) in [("and_distributes_over_or", System::CovG), ("and_distributes_over_or_cod", System::CodG)] {
        out.push(golden(name, sys, &s2, and_or_dst(hyp("h", &dist_hyp), &Labels::new())?, vec![dist_hyp.clone()]));
    }
    out.push(golden(
        "or_global_or_collect",
        System::CovG,
        &s2,
        or_gor_collect(&a, &b, &c)?,
        vec![Formula::gor(Formula::or(a.clone(), b.clone()), Formula::or(a.clone(), c.clone()))],
    ));
    out.push(golden(
        "counterfactual_global_or_collect",
        System::CovG,
        &s2,
        cf_gor_collect(&ivx, &b, &a)?,
        vec![Formula::gor(
            Formula::Cf(ivx.clone(), Box::new(b.clone())),
            Formula::Cf(ivx.clone(), Box::new(a.clone())),
        )],
    ));

    let dep = Formula::dep(vec![x], y);
    out.push(golden(
        "dependence_at_a_value",
        System::CodG,
        &s2,
        dep_value(x, 1, y, hyp("d", &dep)),
        vec![dep.clone(), Formula::eq(x, 1)],
    ));
    out.push(golden("dependence_to_disjunction", System::CodG, &s2, dep_to_or(&s2, x, y, "d")?, vec![dep.clone()]));
    let dnf = Formula::or(
        Formula::and(Formula::eq(x, 0), Formula::con(y)),
        Formula::and(Formula::eq(x, 1), Formula::con(y)),
    );
    out.push(golden("disjunction_to_dependence", System::CodG, &s2, or_to_dep(&s2, x, y, "d")?, vec![dnf.clone()]));

    // φ ⊣⊢ φ* through monotone substitution of the two directions above
    let phi = Formula::cf_items(vec![(z, 0)], Formula::or(Formula::eq(z, 1), dep.clone()));
    let star = Formula::cf_items(vec![(z, 0)], Formula::or(Formula::eq(z, 1), dnf.clone()));
    let fwd = monotone_substitution(&phi, &dep, 1, &dep_to_or(&s3, x, y, "d")?, "d", "h")?;
    out.push(golden("dependence_translation_forward", System::CodG, &s3, fwd, vec![phi.clone()]));
    let back = monotone_substitution(&star, &dnf, 1, &or_to_dep(&s3, x, y, "d")?, "d", "h")?;
    out.push(golden("dependence_translation_backward", System::CodG, &s3, back, vec![star]));

    // FunE gives the uniformity axiom
    let unf = build_unf(&s2)?.formula;
    let phis = phi_family(&s2)?;
    let mut prem = Vec::new();
    for (i, (_, f)) in phis.iter().enumerate() {
        prem.push(intro_into(&unf, hyp(&format!("f{i}"), f))?);
    }
    let mut fune = D::node(Rule::FunE, unf.clone(), prem);
    for i in 0..phis.len() {
        fune = fune.closing(i, &[&format!("f{i}")]);
    }
    out.push(golden("uniformity_from_fune", System::CovC, &s2, fune, vec![]));

    Ok(out)
}
