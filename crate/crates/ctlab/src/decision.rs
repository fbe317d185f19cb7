//! Normal forms and exact entailment.
//!
//! Every formula is equivalent to the global disjunction of a finite set of
//! CO formulas: its resolutions (CO with ∨∨) or its full instantiations
//! (COD). CO formulas are flat, so over generalized teams Γ ⊨ ψ holds iff
//! every disjunct γ of ⋀Γ entails some disjunct β of ψ, and γ ⊨ β is a
//! sweep over singleton teams. Causal entailment adds the uniformity
//! disjunction to Γ, which amounts to running the sweep once per ∼-class.

use crate::charform::node_budget;
use crate::error::{Error, Result};
use crate::model::{enumerate_sem_quotient, FunctionSystem, GeneralizedTeam, Member, Signature, Team, Val, Var};
use crate::semantics::{eval_point, Semantics};
use crate::syntax::{Formula, Language};
use fixedbitset::FixedBitSet;
use std::collections::HashSet;
use std::sync::Arc;

/// A finite set of CO formulas D read as ∨∨D. Order of first insertion is
/// kept so output is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DisjunctSet {
    items: Vec<Formula>,
}

impl DisjunctSet {
    fn from_iter_dedup(it: impl IntoIterator<Item = Formula>) -> Self {
        let mut seen = HashSet::new();
        let items = it.into_iter().filter(|f| seen.insert(f.clone())).collect();
        DisjunctSet { items }
    }

    pub fn items(&self) -> &[Formula] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// ∨∨D as one formula.
    pub fn to_formula(&self) -> Formula {
        Formula::big_gor(self.items.iter().cloned())
    }
}

fn guard_count(count: u128, what: &str) -> Result<()> {
    let budget = node_budget();
    if count > budget {
        return Err(Error::Budget(format!("{what} has {count} members, over the budget of {budget}")));
    }
    Ok(())
}

fn resolution_count(f: &Formula) -> u128 {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) => resolution_count(a).saturating_mul(resolution_count(b)),
        Formula::GlobalOr(a, b) => resolution_count(a).saturating_add(resolution_count(b)),
        Formula::Cf(_, a) => resolution_count(a),
        _ => 1,
    }
}

fn resolve(f: &Formula) -> Vec<Formula> {
    if f.is_co() {
        return vec![f.clone()];
    }
    let product = |a: &Formula, b: &Formula, op: fn(Formula, Formula) -> Formula| {
        let rb = resolve(b);
        resolve(a)
            .into_iter()
            .flat_map(|x| rb.iter().map(move |y| op(x.clone(), y.clone())))
            .collect()
    };
    match f {
        Formula::And(a, b) => product(a, b, Formula::and),
        Formula::Or(a, b) => product(a, b, Formula::or),
        Formula::GlobalOr(a, b) => {
            let mut out = resolve(a);
            out.extend(resolve(b));
            out
        }
        Formula::Cf(iv, a) => resolve(a).into_iter().map(|x| Formula::Cf(iv.clone(), Box::new(x))).collect(),
        _ => unreachable!("CO leaves and dependence atoms are handled above"),
    }
}

/// R(φ) for φ in CO with global disjunction.
pub fn resolutions(phi: &Formula) -> Result<DisjunctSet> {
    if matches!(phi.language(), Language::Cod | Language::Mixed) {
        return Err(Error::Language("resolutions are defined for formulas without dependence atoms".into()));
    }
    guard_count(resolution_count(phi), "the resolution set")?;
    Ok(DisjunctSet::from_iter_dedup(resolve(phi)))
}

/// φ*: every dep(X;Y) with nonempty X becomes ⋁_x (X=x ∧ con(Y)).
pub fn star_translate(phi: &Formula, sig: &Signature) -> Result<Formula> {
    if matches!(phi.language(), Language::Cov | Language::Mixed) {
        return Err(Error::Language("the dependence translation is defined for COD".into()));
    }
    Ok(star(phi, sig))
}

fn star(f: &Formula, sig: &Signature) -> Formula {
    match f {
        Formula::Dep(xs, y) if !xs.is_empty() => Formula::big_or(sig.tuples(xs).map(|x| {
            let items: Vec<(Var, Val)> = xs.iter().copied().zip(x).collect();
            Formula::and(Formula::eqs(&items), Formula::con(*y))
        })),
        Formula::Eq(..) | Formula::Dep(..) | Formula::Neg(_) => f.clone(),
        Formula::And(a, b) => Formula::and(star(a, sig), star(b, sig)),
        Formula::Or(a, b) => Formula::or(star(a, sig), star(b, sig)),
        Formula::GlobalOr(a, b) => Formula::gor(star(a, sig), star(b, sig)),
        Formula::Cf(iv, a) => Formula::Cf(iv.clone(), Box::new(star(a, sig))),
    }
}

/// The variables of the constancy atoms of `f`, one per occurrence, in
/// pre-order.
pub fn constancy_occurrences(f: &Formula) -> Vec<Var> {
    let mut out = Vec::new();
    f.visit(&mut |g| {
        if let Formula::Dep(xs, y) = g {
            if xs.is_empty() {
                out.push(*y);
            }
        }
    });
    out
}

/// φ_f: the i-th constancy occurrence becomes Y_i = vals[i].
pub fn instantiate(f: &Formula, vals: &[Val]) -> Formula {
    fn go(f: &Formula, vals: &[Val], next: &mut usize) -> Formula {
        match f {
            Formula::Dep(xs, y) if xs.is_empty() => {
                let x = vals[*next];
                *next += 1;
                Formula::eq(*y, x)
            }
            Formula::Eq(..) | Formula::Dep(..) | Formula::Neg(_) => f.clone(),
            Formula::And(a, b) => Formula::and(go(a, vals, next), go(b, vals, next)),
            Formula::Or(a, b) => Formula::or(go(a, vals, next), go(b, vals, next)),
            Formula::GlobalOr(a, b) => Formula::gor(go(a, vals, next), go(b, vals, next)),
            Formula::Cf(iv, a) => Formula::Cf(iv.clone(), Box::new(go(a, vals, next))),
        }
    }
    go(f, vals, &mut 0)
}

/// I(φ): every full instantiation of φ*.
pub fn instantiations(phi: &Formula, sig: &Signature) -> Result<DisjunctSet> {
    let s = star_translate(phi, sig)?;
    let occ = constancy_occurrences(&s);
    let count = occ.iter().fold(1u128, |a, &y| a.saturating_mul(sig.range_size(y) as u128));
    guard_count(count, "the instantiation set")?;
    Ok(DisjunctSet::from_iter_dedup(sig.tuples(&occ).map(|vals| instantiate(&s, &vals))))
}

/// con(Y) becomes ∨∨_y Y=y. Applied after the dependence translation it
/// leaves a formula without dependence atoms.
fn con_to_gor(f: &Formula, sig: &Signature) -> Formula {
    match f {
        Formula::Dep(xs, y) if xs.is_empty() => {
            Formula::big_gor((0..sig.range_size(*y) as Val).map(|x| Formula::eq(*y, x)))
        }
        Formula::Eq(..) | Formula::Dep(..) | Formula::Neg(_) => f.clone(),
        Formula::And(a, b) => Formula::and(con_to_gor(a, sig), con_to_gor(b, sig)),
        Formula::Or(a, b) => Formula::or(con_to_gor(a, sig), con_to_gor(b, sig)),
        Formula::GlobalOr(a, b) => Formula::gor(con_to_gor(a, sig), con_to_gor(b, sig)),
        Formula::Cf(iv, a) => Formula::Cf(iv.clone(), Box::new(con_to_gor(a, sig))),
    }
}

/// D with φ ≡ ∨∨D and every member in CO. Formulas mixing dependence atoms
/// and global disjunction are rewritten first (experimental: verified only
/// at bound).
pub fn normal_disjuncts(phi: &Formula, sig: &Signature) -> Result<DisjunctSet> {
    match phi.language() {
        Language::Co => Ok(DisjunctSet { items: vec![phi.clone()] }),
        Language::Cov => resolutions(phi),
        Language::Cod => instantiations(phi, sig),
        Language::Mixed => resolutions(&con_to_gor(&star(phi, sig), sig)),
    }
}

/// The outcome of an entailment query. On failure `counterexample` is a
/// team that satisfies every premise and falsifies the conclusion.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Team>,
}

/// Singleton teams of Sem_σ/∼ and the machinery to sweep them.
pub struct Decider {
    sig: Signature,
    members: Vec<Member>,
    classes: Vec<Arc<FunctionSystem>>,
    class_sets: Vec<FixedBitSet>,
}

impl Decider {
    pub fn new(sig: &Signature) -> Result<Self> {
        let members = enumerate_sem_quotient(sig);
        guard_count(members.len() as u128, "Sem/~")?;
        let mut classes: Vec<Arc<FunctionSystem>> = Vec::new();
        let mut class_sets: Vec<FixedBitSet> = Vec::new();
        for (i, (_, f)) in members.iter().enumerate() {
            let c = match classes.iter().position(|g| Arc::ptr_eq(g, f)) {
                Some(c) => c,
                None => {
                    classes.push(f.clone());
                    class_sets.push(FixedBitSet::with_capacity(members.len()));
                    classes.len() - 1
                }
            };
            class_sets[c].insert(i);
        }
        Ok(Decider { sig: sig.clone(), members, classes, class_sets })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    /// Canonical representatives of the ∼-classes.
    pub fn classes(&self) -> &[Arc<FunctionSystem>] {
        &self.classes
    }

    /// Members whose singleton team satisfies `f`.
    pub fn sat_set(&self, f: &Formula) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.members.len());
        for (i, (s, g)) in self.members.iter().enumerate() {
            if eval_point(s, g, f) {
                out.insert(i);
            }
        }
        out
    }

    fn check(&self, f: &Formula) -> Result<()> {
        f.check(&self.sig)
    }

    /// Γ ⊨ β for CO formulas. Flatness makes this the same for both
    /// semantics.
    pub fn flat_entails(&self, gamma: &[Formula], beta: &Formula) -> Result<bool> {
        for f in gamma.iter().chain(std::iter::once(beta)) {
            self.check(f)?;
            if !f.is_co() {
                return Err(Error::Language("flat entailment takes CO formulas only".into()));
            }
        }
        let mut s = self.all();
        for g in gamma {
            s.intersect_with(&self.sat_set(g));
        }
        Ok(s.is_subset(&self.sat_set(beta)))
    }

    fn all(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.members.len());
        s.insert_range(..);
        s
    }

    fn disjunct_sets(&self, f: &Formula) -> Result<Vec<FixedBitSet>> {
        let d = normal_disjuncts(f, &self.sig)?;
        let mut seen = HashSet::new();
        Ok(d.items().iter().map(|g| self.sat_set(g)).filter(|s| seen.insert(s.clone())).collect())
    }

    /// Γ ⊨ ψ, exactly, with a counterexample when it fails.
    pub fn entails(&self, gamma: &[Formula], psi: &Formula, semantics: Semantics) -> Result<Verdict> {
        for f in gamma.iter().chain(std::iter::once(psi)) {
            self.check(f)?;
        }
        let premises: Vec<Vec<FixedBitSet>> =
            gamma.iter().map(|g| self.disjunct_sets(g)).collect::<Result<_>>()?;
        let goals = self.disjunct_sets(psi)?;
        let parts: Vec<FixedBitSet> = match semantics {
            Semantics::Generalized => vec![self.all()],
            Semantics::Causal => self.class_sets.clone(),
        };
        let mut steps = 0u128;
        let budget = node_budget();
        for part in &parts {
            // depth-first over the product of the premises' disjunct sets;
            // an empty intersection is satisfied only by ∅ and prunes
            let mut stack = vec![(0usize, part.clone())];
            while let Some((i, s)) = stack.pop() {
                steps += 1;
                if steps > budget {
                    return Err(Error::Budget(format!("more than {budget} premise combinations")));
                }
                if s.is_clear() {
                    continue;
                }
                if i == premises.len() {
                    if !goals.iter().any(|b| s.is_subset(b)) {
                        return Ok(Verdict { holds: false, counterexample: Some(self.witness(&s, &goals, semantics)) });
                    }
                    continue;
                }
                for d in premises[i].iter().rev() {
                    let mut t = s.clone();
                    t.intersect_with(d);
                    stack.push((i + 1, t));
                }
            }
        }
        Ok(Verdict { holds: true, counterexample: None })
    }

    /// One member outside each goal set; their union satisfies the γ that
    /// produced `s` (flatness) and no goal disjunct.
    fn witness(&self, s: &FixedBitSet, goals: &[FixedBitSet], semantics: Semantics) -> Team {
        let mut picked = FixedBitSet::with_capacity(self.members.len());
        for b in goals {
            let miss = s.difference(b).next().expect("s is not a subset of b");
            picked.insert(miss);
        }
        if goals.is_empty() {
            picked.insert(s.ones().next().expect("nonempty"));
        }
        let t = GeneralizedTeam::new(&self.sig, picked.ones().map(|i| self.members[i].clone()))
            .expect("members of Sem");
        match semantics {
            Semantics::Generalized => Team::Generalized(t),
            Semantics::Causal => Team::Causal(t.to_causal().expect("one class")),
        }
    }

    pub fn valid(&self, psi: &Formula, semantics: Semantics) -> Result<bool> {
        Ok(self.entails(&[], psi, semantics)?.holds)
    }

    /// Δ ⊨^g φ ∨∨ ψ forces Δ ⊨^g φ or Δ ⊨^g ψ.
    pub fn disjunction_property(&self, delta: &[Formula], phi: &Formula, psi: &Formula) -> Result<DisjunctionReport> {
        if let Some(f) = delta.iter().find(|f| !f.is_co()) {
            return Err(Error::Language(format!("premise `{}` is not flat", f.display(&self.sig))));
        }
        let g = Semantics::Generalized;
        let premise = self.entails(delta, &Formula::gor(phi.clone(), psi.clone()), g)?.holds;
        let left = self.entails(delta, phi, g)?.holds;
        let right = self.entails(delta, psi, g)?.holds;
        Ok(DisjunctionReport { premise, left, right })
    }

    /// No two nonempty causal teams with similar laws satisfy φ and ψ.
    /// Downward closure reduces this to singletons.
    pub fn incompatible(&self, phi: &Formula, psi: &Formula) -> Result<bool> {
        self.check(phi)?;
        self.check(psi)?;
        let a = self.sat_set(phi);
        let b = self.sat_set(psi);
        Ok(self
            .class_sets
            .iter()
            .all(|c| a.intersection(c).next().is_none() || b.intersection(c).next().is_none()))
    }
}

/// Outcome of a disjunction-property check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DisjunctionReport {
    /// Δ ⊨ φ ∨∨ ψ.
    pub premise: bool,
    pub left: bool,
    pub right: bool,
}

impl DisjunctionReport {
    pub fn holds(&self) -> bool {
        !self.premise || self.left || self.right
    }
}

/// Γ ⊨ β for CO formulas.
pub fn flat_entails(gamma: &[Formula], beta: &Formula, sig: &Signature) -> Result<bool> {
    Decider::new(sig)?.flat_entails(gamma, beta)
}

pub fn decide_entails(gamma: &[Formula], psi: &Formula, sig: &Signature, semantics: Semantics) -> Result<Verdict> {
    Decider::new(sig)?.entails(gamma, psi, semantics)
}

pub fn decide_valid(psi: &Formula, sig: &Signature, semantics: Semantics) -> Result<bool> {
    Decider::new(sig)?.valid(psi, semantics)
}

pub fn check_disjunction_property(
    delta: &[Formula],
    phi: &Formula,
    psi: &Formula,
    sig: &Signature,
) -> Result<DisjunctionReport> {
    Decider::new(sig)?.disjunction_property(delta, phi, psi)
}

pub fn incompatible(phi: &Formula, psi: &Formula, sig: &Signature) -> Result<bool> {
    Decider::new(sig)?.incompatible(phi, psi)
}
