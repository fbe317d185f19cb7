use super::{Assignment, CanonicalLaw, FunctionSystem, Law, Signature, Var};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// A member of a generalized causal team.
pub type Member = (Assignment, Arc<FunctionSystem>);

fn check_pair(sig: &Signature, s: &Assignment, f: &FunctionSystem) -> Result<()> {
    s.check(sig)?;
    if f.len() != sig.len() {
        return Err(Error::Invalid("function system does not match signature".into()));
    }
    if !f.is_recursive() {
        return Err(Error::Cyclic);
    }
    if !f.is_compatible(s) {
        return Err(Error::Incompatible(s.display(sig).to_string()));
    }
    Ok(())
}

/// A causal team (T⁻, F). The empty team carries no law.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CausalTeam {
    rows: BTreeSet<Assignment>,
    law: Option<Arc<FunctionSystem>>,
}

impl CausalTeam {
    pub fn empty() -> Self {
        CausalTeam { rows: BTreeSet::new(), law: None }
    }

    pub fn new(
        sig: &Signature,
        rows: impl IntoIterator<Item = Assignment>,
        law: Arc<FunctionSystem>,
    ) -> Result<Self> {
        let rows: BTreeSet<Assignment> = rows.into_iter().collect();
        for s in &rows {
            check_pair(sig, s, &law)?;
        }
        Ok(CausalTeam::from_parts(rows, law))
    }

    /// No validation; callers guarantee compatibility.
    pub(crate) fn from_parts(rows: BTreeSet<Assignment>, law: Arc<FunctionSystem>) -> Self {
        if rows.is_empty() {
            CausalTeam::empty()
        } else {
            CausalTeam { rows, law: Some(law) }
        }
    }

    pub fn rows(&self) -> &BTreeSet<Assignment> {
        &self.rows
    }

    pub fn law(&self) -> Option<&Arc<FunctionSystem>> {
        self.law.as_ref()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The causal subteam on `rows ∩ T⁻`.
    pub fn subteam(&self, rows: impl IntoIterator<Item = Assignment>) -> CausalTeam {
        match &self.law {
            None => CausalTeam::empty(),
            Some(f) => {
                let rows = rows.into_iter().filter(|s| self.rows.contains(s)).collect();
                CausalTeam::from_parts(rows, f.clone())
            }
        }
    }

    /// T^g.
    pub fn to_generalized(&self) -> GeneralizedTeam {
        let members = match &self.law {
            None => BTreeSet::new(),
            Some(f) => self.rows.iter().map(|s| (s.clone(), f.clone())).collect(),
        };
        GeneralizedTeam { members }
    }

    /// Same law up to ∼ (or either side empty) and same team component.
    pub fn equivalent(&self, other: &CausalTeam) -> bool {
        match (&self.law, &other.law) {
            (None, None) => true,
            (Some(f), Some(g)) => self.rows == other.rows && f.similar(g),
            _ => false,
        }
    }

    /// S ≼ T: S is ≈ to a causal subteam of T.
    pub fn preceq(&self, other: &CausalTeam) -> bool {
        match (&self.law, &other.law) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(f), Some(g)) => f.similar(g) && self.rows.is_subset(&other.rows),
        }
    }
}

/// A generalized causal team: a set of compatible (assignment, law) pairs.
/// Identical laws share one allocation when built through the constructors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GeneralizedTeam {
    members: BTreeSet<Member>,
}

impl GeneralizedTeam {
    pub fn empty() -> Self {
        GeneralizedTeam::default()
    }

    pub fn new(sig: &Signature, members: impl IntoIterator<Item = Member>) -> Result<Self> {
        let mut registry: BTreeMap<Arc<FunctionSystem>, ()> = BTreeMap::new();
        let mut out = BTreeSet::new();
        for (s, f) in members {
            check_pair(sig, &s, &f)?;
            let f = match registry.get_key_value(&f) {
                Some((k, _)) => k.clone(),
                None => {
                    registry.insert(f.clone(), ());
                    f
                }
            };
            out.insert((s, f));
        }
        Ok(GeneralizedTeam { members: out })
    }

    /// No validation; callers guarantee compatibility.
    pub(crate) fn from_members(members: BTreeSet<Member>) -> Self {
        GeneralizedTeam { members }
    }

    pub fn members(&self) -> &BTreeSet<Member> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// T⁻.
    pub fn assignments(&self) -> BTreeSet<Assignment> {
        self.members.iter().map(|(s, _)| s.clone()).collect()
    }

    /// The distinct laws occurring in T.
    pub fn laws(&self) -> BTreeSet<Arc<FunctionSystem>> {
        self.members.iter().map(|(_, f)| f.clone()).collect()
    }

    /// T^c. Requires a single law (or the empty team).
    pub fn to_causal(&self) -> Result<CausalTeam> {
        let laws = self.laws();
        if laws.len() > 1 {
            return Err(Error::NotCausal);
        }
        match laws.into_iter().next() {
            None => Ok(CausalTeam::empty()),
            Some(f) => Ok(CausalTeam::from_parts(self.assignments(), f)),
        }
    }

    /// T^F = {(s, G) ∈ T | G ∼ F}.
    pub fn restrict_to_similar(&self, f: &FunctionSystem) -> GeneralizedTeam {
        let c = f.canonicalize();
        let members = self
            .members
            .iter()
            .filter(|(_, g)| g.canonicalize() == c)
            .cloned()
            .collect();
        GeneralizedTeam { members }
    }

    /// {(s, canon(F)) | (s, F) ∈ T}: the ≈-class of T in explicit form.
    pub fn canonical_pairs(&self) -> BTreeSet<(Assignment, CanonicalLaw)> {
        self.members
            .iter()
            .map(|(s, f)| (s.clone(), f.canonicalize()))
            .collect()
    }

    /// |T/≈|.
    pub fn quotient_cardinality(&self) -> usize {
        self.canonical_pairs().len()
    }

    pub fn is_uniform(&self) -> bool {
        let mut classes = self.members.iter().map(|(_, f)| f.canonicalize());
        match classes.next() {
            None => true,
            Some(c) => classes.all(|d| d == c),
        }
    }

    pub fn equivalent(&self, other: &GeneralizedTeam) -> bool {
        self.canonical_pairs() == other.canonical_pairs()
    }

    pub fn preceq(&self, other: &GeneralizedTeam) -> bool {
        self.canonical_pairs().is_subset(&other.canonical_pairs())
    }

    pub fn union(&self, other: &GeneralizedTeam) -> GeneralizedTeam {
        GeneralizedTeam { members: self.members.union(&other.members).cloned().collect() }
    }

    pub fn is_subteam_of(&self, other: &GeneralizedTeam) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Either kind of team, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Team {
    Causal(CausalTeam),
    Generalized(GeneralizedTeam),
}

impl Team {
    pub fn is_causal(&self) -> bool {
        matches!(self, Team::Causal(_))
    }

    pub fn generalized(&self) -> GeneralizedTeam {
        match self {
            Team::Causal(t) => t.to_generalized(),
            Team::Generalized(t) => t.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Team::Causal(t) => t.len(),
            Team::Generalized(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn to_generalized(t: &CausalTeam) -> GeneralizedTeam {
    t.to_generalized()
}

pub fn to_causal(t: &GeneralizedTeam) -> Result<CausalTeam> {
    t.to_causal()
}

/// ≈ on two teams of the same kind.
pub fn team_equivalent(s: &Team, t: &Team) -> Result<bool> {
    match (s, t) {
        (Team::Causal(s), Team::Causal(t)) => Ok(s.equivalent(t)),
        (Team::Generalized(s), Team::Generalized(t)) => Ok(s.equivalent(t)),
        _ => Err(Error::Invalid("teams of different kinds".into())),
    }
}

/// ≼ on two teams of the same kind.
pub fn preceq(s: &Team, t: &Team) -> Result<bool> {
    match (s, t) {
        (Team::Causal(s), Team::Causal(t)) => Ok(s.preceq(t)),
        (Team::Generalized(s), Team::Generalized(t)) => Ok(s.preceq(t)),
        _ => Err(Error::Invalid("teams of different kinds".into())),
    }
}

/// Union of two similar causal teams. The result's law drops constant
/// variables and keeps only the shared parents; the values of the remaining
/// parents of the first law are fixed at the first value of their range,
/// which is harmless because they are dummy.
pub fn union_causal_teams(
    sig: &Signature,
    s: &CausalTeam,
    t: &CausalTeam,
) -> Result<CausalTeam> {
    let (f, g) = match (&s.law, &t.law) {
        (None, _) => return Ok(t.clone()),
        (_, None) => return Ok(s.clone()),
        (Some(f), Some(g)) => (f, g),
    };
    if !f.similar(g) {
        return Err(Error::Dissimilar);
    }
    let mut laws: Vec<Option<Law>> = vec![None; sig.len()];
    for v in f.nontrivial() {
        let fv = f.law(v).unwrap();
        let gv = g.law(v).unwrap();
        let shared: Vec<Var> = fv
            .parents()
            .iter()
            .copied()
            .filter(|p| gv.parents().contains(p))
            .collect();
        let pos: Vec<Option<usize>> = fv
            .parents()
            .iter()
            .map(|p| shared.iter().position(|q| q == p))
            .collect();
        let law = Law::from_fn(sig, v, shared.clone(), |p| {
            let full: Vec<_> = pos.iter().map(|i| i.map_or(0, |i| p[i])).collect();
            fv.apply(&full)
        })?;
        laws[v] = Some(law);
    }
    let h = Arc::new(FunctionSystem::new(sig, laws)?);
    let rows: BTreeSet<Assignment> = s.rows.union(&t.rows).cloned().collect();
    debug_assert!(rows.iter().all(|r| h.is_compatible(r)));
    Ok(CausalTeam::from_parts(rows, h))
}
