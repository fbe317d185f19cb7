//! do(X=x) on assignments, causal teams and generalized causal teams.

use crate::error::{Error, Result};
use crate::model::{Assignment, CausalTeam, FunctionSystem, GeneralizedTeam, Member, Signature, Team, Val, Var};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// The antecedent X1=x1 ∧ ... ∧ Xn=xn of a counterfactual, kept as a list.
/// Repeated variables are allowed; with differing values the intervention is
/// inconsistent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct InterventionSpec {
    pub items: Vec<(Var, Val)>,
}

impl InterventionSpec {
    pub fn new(items: Vec<(Var, Val)>) -> Self {
        InterventionSpec { items }
    }

    pub fn single(v: Var, x: Val) -> Self {
        InterventionSpec { items: vec![(v, x)] }
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_consistent(&self) -> bool {
        self.items
            .iter()
            .enumerate()
            .all(|(i, &(v, x))| self.items[..i].iter().all(|&(w, y)| w != v || x == y))
    }

    /// The intervened variables, deduplicated, in signature order.
    pub fn vars(&self) -> Vec<Var> {
        let set: BTreeSet<Var> = self.items.iter().map(|&(v, _)| v).collect();
        set.into_iter().collect()
    }

    pub fn value_of(&self, v: Var) -> Option<Val> {
        self.items.iter().find(|&&(w, _)| w == v).map(|&(_, x)| x)
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        for &(v, x) in &self.items {
            if v >= sig.len() || x as usize >= sig.range_size(v) {
                return Err(Error::Invalid("intervention leaves the signature".into()));
            }
        }
        Ok(())
    }

    /// `X=1, Y=2` or `X=1 & Y=2`.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        let mut items = Vec::new();
        for part in text.split([',', '&']).map(str::trim).filter(|p| !p.is_empty()) {
            let (v, x) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("expected VAR=value, found `{part}`")))?;
            let v = sig.var_checked(v.trim())?;
            items.push((v, sig.value_checked(v, x.trim())?));
        }
        if items.is_empty() {
            return Err(Error::Invalid("empty intervention".into()));
        }
        Ok(InterventionSpec { items })
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> String {
        self.items
            .iter()
            .map(|&(v, x)| format!("{}={}", sig.name(v), sig.token(v, x)))
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

/// F_{X=x} together with the evaluation order of its endogenous variables,
/// computed once and applied to many assignments.
#[derive(Clone, Debug)]
pub struct Intervened {
    pub law: Arc<FunctionSystem>,
    order: Vec<Var>,
    items: Vec<(Var, Val)>,
}

impl Intervened {
    pub fn new(f: &FunctionSystem, iv: &InterventionSpec) -> Result<Self> {
        if !iv.is_consistent() {
            return Err(Error::InconsistentIntervention(format!("{:?}", iv.items)));
        }
        let law = f.without(&iv.vars());
        let order = law.topological_order()?;
        Ok(Intervened { law: Arc::new(law), order, items: iv.items.clone() })
    }

    /// s^F_{X=x}.
    pub fn apply(&self, s: &Assignment) -> Assignment {
        let mut t = s.clone();
        for &(v, x) in &self.items {
            t.set(v, x);
        }
        for &v in &self.order {
            let x = self.law.law(v).expect("endogenous").eval(&t);
            t.set(v, x);
        }
        t
    }
}

pub fn intervene_assignment(
    s: &Assignment,
    f: &FunctionSystem,
    iv: &InterventionSpec,
) -> Result<(Assignment, FunctionSystem)> {
    let i = Intervened::new(f, iv)?;
    let t = i.apply(s);
    Ok((t, (*i.law).clone()))
}

pub fn intervene_causal_team(t: &CausalTeam, iv: &InterventionSpec) -> Result<CausalTeam> {
    if !iv.is_consistent() {
        return Err(Error::InconsistentIntervention(format!("{:?}", iv.items)));
    }
    let Some(f) = t.law() else {
        return Ok(CausalTeam::empty());
    };
    let i = Intervened::new(f, iv)?;
    let rows = t.rows().iter().map(|s| i.apply(s)).collect();
    Ok(CausalTeam::from_parts(rows, i.law))
}

/// Intervention on a generalized team, sharing the intervened law between all
/// members that carried the same law.
pub fn intervene_gct(t: &GeneralizedTeam, iv: &InterventionSpec) -> Result<GeneralizedTeam> {
    if !iv.is_consistent() {
        return Err(Error::InconsistentIntervention(format!("{:?}", iv.items)));
    }
    let mut cache: BTreeMap<&FunctionSystem, Intervened> = BTreeMap::new();
    let mut out: BTreeSet<Member> = BTreeSet::new();
    for (s, f) in t.members() {
        if !cache.contains_key(&**f) {
            cache.insert(f, Intervened::new(f, iv)?);
        }
        let i = &cache[&**f];
        out.insert((i.apply(s), i.law.clone()));
    }
    Ok(GeneralizedTeam::from_members(out))
}

/// Intervention on either kind of team, keeping its kind.
pub fn intervene_team(t: &Team, iv: &InterventionSpec) -> Result<Team> {
    Ok(match t {
        Team::Causal(c) => Team::Causal(intervene_causal_team(c, iv)?),
        Team::Generalized(g) => Team::Generalized(intervene_gct(g, iv)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistency() {
        assert!(InterventionSpec::new(vec![(0, 1), (1, 0), (0, 1)]).is_consistent());
        assert!(!InterventionSpec::new(vec![(0, 1), (0, 0)]).is_consistent());
        assert!(InterventionSpec::default().is_consistent());
    }
}
