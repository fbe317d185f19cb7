//! Characteristic formulas: Φ^F, Θ^{T⁻}, μ, χ, χ_k, Ξ^T, the uniformity
//! disjunction, X⤳Y, direct cause and endogeneity.
//!
//! Every builder ranges variables in signature order and value tuples
//! lexicographically, so the output is deterministic. Sizes grow with the
//! product of the ranges; each builder estimates its node count first and
//! refuses to go over the node budget.

use crate::error::{Error, Result};
use crate::intervention::InterventionSpec;
use crate::model::{
    enumerate_assignments, enumerate_function_systems, enumerate_law_classes, Assignment, CausalTeam,
    FunctionSystem, GeneralizedTeam, Signature, Val, Var,
};
use crate::syntax::{Formula, Language};
use std::collections::BTreeSet;

pub const DEFAULT_NODE_BUDGET: u128 = 1_000_000;

/// The node budget, overridable through `CTLAB_BUDGET_NODES`.
pub fn node_budget() -> u128 {
    std::env::var("CTLAB_BUDGET_NODES")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &u128| n > 0)
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

fn guard(estimate: u128, what: &str) -> Result<()> {
    let budget = node_budget();
    if estimate > budget {
        return Err(Error::Budget(format!(
            "{what} would have about {estimate} nodes, over the budget of {budget}"
        )));
    }
    Ok(())
}

/// A built formula with a note of how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharFormula {
    pub formula: Formula,
    pub builder: &'static str,
    pub params: String,
}

impl CharFormula {
    fn new(formula: Formula, builder: &'static str, params: impl Into<String>) -> Self {
        CharFormula { formula, builder, params: params.into() }
    }

    pub fn language(&self) -> Language {
        self.formula.language()
    }

    pub fn size(&self) -> usize {
        self.formula.size()
    }
}

fn space(sig: &Signature, vars: &[Var]) -> u128 {
    vars.iter().map(|&v| sig.range_size(v) as u128).product()
}

fn all_but(sig: &Signature, drop: &[Var]) -> Vec<Var> {
    sig.vars().filter(|v| !drop.contains(v)).collect()
}

fn pairs(vars: &[Var], vals: &[Val]) -> Vec<(Var, Val)> {
    vars.iter().copied().zip(vals.iter().copied()).collect()
}

/// W=w ⟡ body, with the antecedent in signature order.
fn cf_sorted(mut items: Vec<(Var, Val)>, body: Formula) -> Formula {
    items.sort_unstable();
    Formula::cf(InterventionSpec::new(items), body)
}

fn law_name(sig: &Signature, f: &FunctionSystem) -> String {
    let mut parts = Vec::new();
    for v in sig.vars() {
        if let Some(l) = f.law(v) {
            let ps: Vec<&str> = l.parents().iter().map(|&p| sig.name(p)).collect();
            let tab: Vec<&str> = l.table().iter().map(|&x| sig.token(v, x)).collect();
            parts.push(format!("{}({})=[{}]", sig.name(v), ps.join(","), tab.join(",")));
        }
    }
    if parts.is_empty() {
        "exogenous".into()
    } else {
        parts.join(";")
    }
}

fn phi_estimate(sig: &Signature) -> u128 {
    let n = sig.len() as u128;
    n * space(sig, &all_but(sig, &[])) * (2 * n + 8)
}

/// η(V) = ⋀ over values of W = Dom∖(PA_V∪{V}) and PA_V of
/// (W=w ∧ PA_V=p) ⟡ V=F_V(p).
fn eta(sig: &Signature, f: &FunctionSystem, v: Var) -> Formula {
    let law = f.law(v).expect("endogenous");
    let pa = law.parents().to_vec();
    let mut drop = pa.clone();
    drop.push(v);
    let w = all_but(sig, &drop);
    let mut conj = Vec::new();
    for wv in sig.tuples(&w) {
        for p in sig.tuples(&pa) {
            let mut items = pairs(&w, &wv);
            items.extend(pairs(&pa, &p));
            conj.push(cf_sorted(items, Formula::eq(v, law.apply(&p))));
        }
    }
    Formula::big_and(conj)
}

/// ξ(V) = ⋀ over v and w of V=v ⊃ (W_V=w ⟡ V=v), W_V = Dom∖{V}.
fn xi_clause(sig: &Signature, v: Var) -> Formula {
    let w = all_but(sig, &[v]);
    let mut conj = Vec::new();
    for x in 0..sig.range_size(v) as Val {
        for wv in sig.tuples(&w) {
            let body = cf_sorted(pairs(&w, &wv), Formula::eq(v, x));
            conj.push(Formula::or(Formula::neq(v, x), body));
        }
    }
    Formula::big_and(conj)
}

fn phi_formula(sig: &Signature, f: &FunctionSystem) -> Formula {
    let nontrivial = f.nontrivial();
    Formula::big_and(sig.vars().map(|v| {
        if nontrivial.contains(&v) {
            eta(sig, f, v)
        } else {
            xi_clause(sig, v)
        }
    }))
}

/// Φ^F: a team satisfies it iff every law in it is similar to F.
pub fn build_phi(f: &FunctionSystem, sig: &Signature) -> Result<CharFormula> {
    if f.len() != sig.len() {
        return Err(Error::Invalid("function system does not match the signature".into()));
    }
    if !f.is_recursive() {
        return Err(Error::Cyclic);
    }
    guard(phi_estimate(sig), "Phi")?;
    Ok(CharFormula::new(phi_formula(sig, f), "phi", law_name(sig, f)))
}

fn theta_formula(rows: &BTreeSet<Assignment>) -> Formula {
    Formula::big_or(rows.iter().map(|s| {
        let items: Vec<(Var, Val)> = s.0.iter().enumerate().map(|(v, &x)| (v, x)).collect();
        Formula::eqs(&items)
    }))
}

/// Θ^{T⁻}: S ⊨ Θ iff S⁻ ⊆ T⁻. The empty set gives ⊥.
pub fn build_theta(rows: &BTreeSet<Assignment>, sig: &Signature) -> Result<CharFormula> {
    for s in rows {
        s.check(sig)?;
    }
    guard(rows.len() as u128 * (2 * sig.len() as u128 + 1), "Theta")?;
    let params = rows.iter().map(|s| s.display(sig).to_string()).collect::<Vec<_>>().join(" ");
    Ok(CharFormula::new(theta_formula(rows), "theta", params))
}

fn mu_formula(sig: &Signature) -> Formula {
    Formula::big_and(sig.vars().flat_map(|v| {
        let w = all_but(sig, &[v]);
        sig.tuples(&w)
            .map(|wv| cf_sorted(pairs(&w, &wv), Formula::con(v)))
            .collect::<Vec<_>>()
    }))
}

fn chi_formula(sig: &Signature) -> Formula {
    Formula::and(mu_formula(sig), Formula::big_and(sig.vars().map(Formula::con)))
}

fn chi_estimate(sig: &Signature) -> u128 {
    let n = sig.len() as u128;
    n * space(sig, &all_but(sig, &[])) * (n + 4)
}

/// μ: on a team with one assignment, holds iff the team is uniform.
pub fn build_mu(sig: &Signature) -> Result<CharFormula> {
    guard(chi_estimate(sig), "mu")?;
    Ok(CharFormula::new(mu_formula(sig), "mu", ""))
}

/// χ = μ ∧ ⋀ con(V): holds iff |T/≈| ≤ 1.
pub fn build_chi(sig: &Signature) -> Result<CharFormula> {
    guard(chi_estimate(sig), "chi")?;
    Ok(CharFormula::new(chi_formula(sig), "chi", ""))
}

fn chi_k_formula(sig: &Signature, k: usize) -> Formula {
    if k == 0 {
        return Formula::bot();
    }
    let chi = chi_formula(sig);
    Formula::big_or(std::iter::repeat_n(chi, k))
}

/// χ_k: the k-fold tensor disjunction of χ, χ_0 = ⊥. Holds iff |T/≈| ≤ k.
pub fn build_chi_k(sig: &Signature, k: i64) -> Result<CharFormula> {
    if k < 0 {
        return Err(Error::Invalid(format!("chi_k needs k >= 0, got {k}")));
    }
    guard(chi_estimate(sig) * (k as u128).max(1), "chi_k")?;
    Ok(CharFormula::new(chi_k_formula(sig, k as usize), "chi_k", k.to_string()))
}

/// Whether some member (s, H) of T has H ∼ F.
fn has_similar(t: &GeneralizedTeam, s: &Assignment, f: &FunctionSystem) -> bool {
    let cf = f.canonicalize();
    t.members().iter().any(|(u, h)| u == s && h.canonicalize() == cf)
}

fn xi_with(t: &GeneralizedTeam, sig: &Signature, laws: &[FunctionSystem], builder: &'static str) -> Result<CharFormula> {
    if t.is_empty() {
        return Err(Error::Invalid("Xi is only defined for nonempty teams".into()));
    }
    let k = t.quotient_cardinality() - 1;
    let rows = t.assignments();
    let outside: BTreeSet<Assignment> =
        enumerate_assignments(sig).into_iter().filter(|s| !rows.contains(s)).collect();
    let mut picks = Vec::new();
    for s in &rows {
        for f in laws {
            // {(s,F)} ⋠ T, read up to ∼; a law that no similar law makes
            // compatible with s gives an unsatisfiable disjunct and is skipped
            if f.canonicalize().system().is_compatible(s) && !has_similar(t, s, f) {
                picks.push((s, f));
            }
        }
    }
    let n = sig.len() as u128;
    let estimate = chi_estimate(sig) * (k as u128).max(1)
        + outside.len() as u128 * (2 * n + 1)
        + picks.len() as u128 * (phi_estimate(sig) + 2 * n + 2);
    guard(estimate, "Xi")?;
    let tail = Formula::big_or(picks.into_iter().map(|(s, f)| {
        Formula::and(theta_formula(&BTreeSet::from([s.clone()])), phi_formula(sig, f))
    }));
    let formula = Formula::or(Formula::or(chi_k_formula(sig, k), theta_formula(&outside)), tail);
    let params = format!("k={k} rows={}", rows.len());
    Ok(CharFormula::new(formula, builder, params))
}

/// Ξ^T: S ⊨ Ξ^T iff T ⋠ S. Laws in the third disjunct range over one
/// representative per ∼-class.
pub fn build_xi(t: &GeneralizedTeam, sig: &Signature) -> Result<CharFormula> {
    xi_with(t, sig, &enumerate_law_classes(sig), "xi")
}

/// Ξ^T with laws ranging over all of F_σ, as displayed. Kept as the
/// reference for [`build_xi`].
pub fn build_xi_unreduced(t: &GeneralizedTeam, sig: &Signature) -> Result<CharFormula> {
    xi_with(t, sig, &enumerate_function_systems(sig, true), "xi_unreduced")
}

/// Ξ^T for a causal team is Ξ of its generalized form.
pub fn build_xi_causal(t: &CausalTeam, sig: &Signature) -> Result<CharFormula> {
    build_xi(&t.to_generalized(), sig)
}

/// ∨∨ of Φ^F over the ∼-classes: a generalized team satisfies it iff it is
/// uniform.
pub fn build_unf(sig: &Signature) -> Result<CharFormula> {
    let classes = enumerate_law_classes(sig);
    guard(classes.len() as u128 * phi_estimate(sig), "the uniformity disjunction")?;
    let f = Formula::big_gor(classes.iter().map(|f| phi_formula(sig, f)));
    Ok(CharFormula::new(f, "unf", format!("classes={}", classes.len())))
}

/// Φ^F for every ∼-class, in enumeration order.
pub fn phi_family(sig: &Signature) -> Result<Vec<(FunctionSystem, Formula)>> {
    let classes = enumerate_law_classes(sig);
    guard(classes.len() as u128 * phi_estimate(sig), "the Phi family")?;
    Ok(classes.into_iter().map(|f| {
        let p = phi_formula(sig, &f);
        (f, p)
    }).collect())
}

fn distinct(sig: &Signature, v: Var) -> Vec<(Val, Val)> {
    let r = sig.range_size(v) as Val;
    (0..r).flat_map(|a| (0..r).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

fn check_pair(sig: &Signature, x: Var, y: Var) -> Result<()> {
    if x >= sig.len() || y >= sig.len() {
        return Err(Error::Invalid("variable outside the signature".into()));
    }
    if x == y {
        return Err(Error::Invalid("the two variables must differ".into()));
    }
    Ok(())
}

/// X ⤳ Y: after some intervention on other variables, intervening on X can
/// change Y.
pub fn build_leadsto(x: Var, y: Var, sig: &Signature) -> Result<CharFormula> {
    check_pair(sig, x, y)?;
    let rest = all_but(sig, &[x, y]);
    let dx = distinct(sig, x);
    let dy = distinct(sig, y);
    let per = (dx.len() * dy.len()) as u128;
    let contexts: u128 = (0u64..1 << rest.len())
        .map(|m| space(sig, &subset(&rest, m)))
        .sum();
    guard(contexts * per * (rest.len() as u128 + 8), "leadsto")?;
    let mut disj = Vec::new();
    for m in 0u64..1 << rest.len() {
        let z = subset(&rest, m);
        for zv in sig.tuples(&z) {
            for &(a, b) in &dx {
                for &(c, d) in &dy {
                    let body = Formula::and(
                        Formula::cf_items(vec![(x, a)], Formula::eq(y, c)),
                        Formula::cf_items(vec![(x, b)], Formula::eq(y, d)),
                    );
                    disj.push(cf_sorted(pairs(&z, &zv), body));
                }
            }
        }
    }
    let params = format!("{},{}", sig.name(x), sig.name(y));
    Ok(CharFormula::new(Formula::big_or(disj), "leadsto", params))
}

fn subset(vars: &[Var], m: u64) -> Vec<Var> {
    vars.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &v)| v).collect()
}

fn direct_cause_formula(sig: &Signature, x: Var, y: Var) -> Formula {
    let z = all_but(sig, &[x, y]);
    let mut disj = Vec::new();
    for zv in sig.tuples(&z) {
        for &(a, b) in &distinct(sig, x) {
            for &(c, d) in &distinct(sig, y) {
                let mut left = pairs(&z, &zv);
                left.push((x, a));
                let mut right = pairs(&z, &zv);
                right.push((x, b));
                disj.push(Formula::and(
                    cf_sorted(left, Formula::eq(y, c)),
                    cf_sorted(right, Formula::eq(y, d)),
                ));
            }
        }
    }
    Formula::big_or(disj)
}

fn dc_estimate(sig: &Signature, x: Var, y: Var) -> u128 {
    let pairs_x = (sig.range_size(x) * (sig.range_size(x) - 1)) as u128;
    let pairs_y = (sig.range_size(y) * (sig.range_size(y) - 1)) as u128;
    space(sig, &all_but(sig, &[x, y])) * pairs_x * pairs_y * (2 * sig.len() as u128 + 6)
}

/// X is a direct cause of Y: with every other variable held fixed, changing
/// X changes Y.
pub fn build_direct_cause(x: Var, y: Var, sig: &Signature) -> Result<CharFormula> {
    check_pair(sig, x, y)?;
    guard(dc_estimate(sig, x, y), "direct cause")?;
    let params = format!("{},{}", sig.name(x), sig.name(y));
    Ok(CharFormula::new(direct_cause_formula(sig, x, y), "direct_cause", params))
}

/// V is endogenous through a non-constant function: some other variable is
/// a direct cause of it.
pub fn build_beta_en(v: Var, sig: &Signature) -> Result<CharFormula> {
    if v >= sig.len() {
        return Err(Error::Invalid("variable outside the signature".into()));
    }
    let others = all_but(sig, &[v]);
    guard(others.iter().map(|&x| dc_estimate(sig, x, v)).sum(), "beta_en")?;
    let f = Formula::big_or(others.iter().map(|&x| direct_cause_formula(sig, x, v)));
    Ok(CharFormula::new(f, "beta_en", sig.name(v).to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn sig2() -> Signature {
        Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).unwrap()
    }

    #[test]
    fn outputs_reparse() {
        let sig = sig2();
        let mut all = vec![build_mu(&sig).unwrap(), build_chi_k(&sig, 2).unwrap(), build_unf(&sig).unwrap()];
        all.push(build_leadsto(0, 1, &sig).unwrap());
        all.push(build_beta_en(1, &sig).unwrap());
        for c in all {
            let text = c.formula.display(&sig);
            assert_eq!(parse(&text, &sig).unwrap(), c.formula, "{text}");
        }
    }

    #[test]
    fn languages() {
        let sig = sig2();
        assert_eq!(build_chi(&sig).unwrap().language(), Language::Cod);
        assert_eq!(build_unf(&sig).unwrap().language(), Language::Cov);
        let f = FunctionSystem::exogenous(&sig);
        assert_eq!(build_phi(&f, &sig).unwrap().language(), Language::Co);
    }

    #[test]
    fn theta_of_nothing_is_bot() {
        assert!(build_theta(&BTreeSet::new(), &sig2()).unwrap().formula.is_bot());
        assert!(build_chi_k(&sig2(), -1).is_err());
        assert!(build_chi_k(&sig2(), 0).unwrap().formula.is_bot());
    }

    #[test]
    fn leadsto_needs_two_variables() {
        let one = Signature::simple(&[("X", &["0", "1"])]).unwrap();
        assert!(build_leadsto(0, 0, &one).is_err());
    }
}
