//! The finite universes A_σ, F_σ and Sem_σ, plus the quotient of Sem_σ by ∼.
//!
//! Everything here is exponential in the signature. Callers are expected to
//! stay at micro scale or check [`law_space_size`] first.

use super::{Assignment, FunctionSystem, Law, Member, Signature, Tuples, Var};
use itertools::Itertools;
use std::sync::Arc;

/// A_σ in lexicographic order.
pub fn enumerate_assignments(sig: &Signature) -> Vec<Assignment> {
    let all: Vec<Var> = sig.vars().collect();
    sig.tuples(&all).map(Assignment).collect()
}

/// Every parent set of `v` (signature order), smallest bitmask first.
fn parent_sets(sig: &Signature, v: Var) -> Vec<Vec<Var>> {
    let others: Vec<Var> = sig.vars().filter(|&u| u != v).collect();
    (0u64..1 << others.len())
        .map(|mask| {
            others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &u)| u)
                .collect()
        })
        .collect()
}

fn tables(sig: &Signature, v: Var, parents: &[Var]) -> impl Iterator<Item = Vec<u8>> {
    let size: usize = parents.iter().map(|&p| sig.range_size(p)).product();
    Tuples::new(vec![sig.range_size(v); size])
}

fn law_options(sig: &Signature, v: Var, canonical_only: bool) -> Vec<Option<Law>> {
    let mut out = vec![None];
    for parents in parent_sets(sig, v) {
        if canonical_only && parents.is_empty() {
            continue;
        }
        for table in tables(sig, v, &parents) {
            let law = Law::new(sig, v, parents.clone(), table).expect("enumerated law is valid");
            if canonical_only && !law.dummy_parents().is_empty() {
                continue;
            }
            out.push(Some(law));
        }
    }
    out
}

/// Number of (possibly cyclic) function systems over σ, saturating. Useful as
/// a guard before calling the enumerators.
pub fn law_space_size(sig: &Signature) -> u128 {
    let mut total: u128 = 1;
    for v in sig.vars() {
        let r = sig.range_size(v) as u128;
        let mut per: u128 = 1;
        for parents in parent_sets(sig, v) {
            let size: u32 = parents
                .iter()
                .map(|&p| sig.range_size(p) as u32)
                .try_fold(1u32, |a, b| a.checked_mul(b))
                .unwrap_or(u32::MAX);
            per = per.saturating_add(r.checked_pow(size).unwrap_or(u128::MAX));
        }
        total = total.saturating_mul(per);
    }
    total
}

fn systems(sig: &Signature, options: Vec<Vec<Option<Law>>>, recursive_only: bool) -> Vec<FunctionSystem> {
    options
        .into_iter()
        .multi_cartesian_product()
        .filter_map(|laws| {
            let f = FunctionSystem::new_allow_cycles(sig, laws).expect("valid laws");
            (!recursive_only || f.is_recursive()).then_some(f)
        })
        .collect()
}

/// F_σ, optionally restricted to recursive systems.
pub fn enumerate_function_systems(sig: &Signature, recursive_only: bool) -> Vec<FunctionSystem> {
    let options = sig.vars().map(|v| law_options(sig, v, false)).collect();
    systems(sig, options, recursive_only)
}

/// One canonical representative per ∼-class of recursive systems.
pub fn enumerate_law_classes(sig: &Signature) -> Vec<FunctionSystem> {
    let options = sig.vars().map(|v| law_options(sig, v, true)).collect();
    systems(sig, options, true)
}

/// Sem_σ: all compatible pairs over recursive systems.
pub fn enumerate_sem(sig: &Signature) -> Vec<Member> {
    pairs(sig, enumerate_function_systems(sig, true))
}

/// Sem_σ/∼: compatible pairs whose law is a canonical representative. Every
/// member of Sem_σ is ≈ to exactly one of these.
pub fn enumerate_sem_quotient(sig: &Signature) -> Vec<Member> {
    pairs(sig, enumerate_law_classes(sig))
}

fn pairs(sig: &Signature, systems: Vec<FunctionSystem>) -> Vec<Member> {
    let mut out = Vec::new();
    for f in systems {
        let f = Arc::new(f);
        for s in f.compatible_assignments(sig).expect("recursive") {
            out.push((s, f.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Signature {
        Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).unwrap()
    }

    #[test]
    fn counts_on_two_binary_variables() {
        let s = xy();
        assert_eq!(enumerate_assignments(&s).len(), 4);
        assert_eq!(enumerate_function_systems(&s, false).len(), 49);
        assert_eq!(enumerate_function_systems(&s, true).len(), 33);
        assert_eq!(enumerate_law_classes(&s).len(), 5);
        assert_eq!(enumerate_sem_quotient(&s).len(), 12);
        assert_eq!(law_space_size(&s), 49);
    }

    #[test]
    fn one_variable() {
        let s = Signature::simple(&[("X", &["0", "1"])]).unwrap();
        assert_eq!(enumerate_function_systems(&s, false).len(), 3);
        assert_eq!(enumerate_function_systems(&s, true).len(), 3);
        assert_eq!(enumerate_sem(&s).len(), 4);
        assert_eq!(enumerate_sem_quotient(&s).len(), 2);
    }
}
