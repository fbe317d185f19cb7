//! Definability: a CO formula for every flat class closed under ≈, and a
//! COD formula for every class closed under ≽.
//!
//! Classes are handled up to ≈, as sets of masks over Sem_σ/∼ (see
//! [`Universe`]). That keeps the universe of candidate teams finite and
//! makes closure under ≈ automatic.

use crate::charform::{build_phi, build_theta, build_xi};
use crate::error::{Error, Result};
use crate::model::io::{ClassData, Kind};
use crate::model::{Assignment, Signature, Team};
use crate::semantics::{Mask, Semantics, Universe};
use crate::syntax::Formula;
use std::collections::{BTreeSet, HashSet};

/// Default bound on |Sem_σ/∼| for class enumeration.
pub const DEFAULT_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureMode {
    /// Contains ∅, downward closed and closed under unions.
    Flat,
    /// Downward closed (and, by representation, closed under ≈).
    DownwardEquiv,
}

/// An explicit class of teams over one signature, one kind of team.
#[derive(Clone, Debug)]
pub struct TeamClass {
    pub kind: Kind,
    pub teams: Vec<Team>,
}

impl TeamClass {
    pub fn new(kind: Kind, teams: Vec<Team>) -> Result<Self> {
        if let Some(t) = teams.iter().find(|t| t.is_causal() != (kind == Kind::Causal)) {
            let found = if t.is_causal() { "causal" } else { "generalized" };
            return Err(Error::Format(format!("class holds a {found} team but is not of that kind")));
        }
        Ok(TeamClass { kind, teams })
    }

    pub fn semantics(&self) -> Semantics {
        match self.kind {
            Kind::Causal => Semantics::Causal,
            Kind::Generalized => Semantics::Generalized,
        }
    }
}

impl From<ClassData> for TeamClass {
    fn from(c: ClassData) -> Self {
        TeamClass { kind: c.kind, teams: c.teams }
    }
}

impl From<TeamClass> for ClassData {
    fn from(c: TeamClass) -> Self {
        ClassData { kind: c.kind, teams: c.teams }
    }
}

/// Synthesis and verification over one signature.
pub struct Synth {
    u: Universe,
}

impl Synth {
    pub fn new(sig: &Signature, cap: usize) -> Result<Self> {
        let u = Universe::new(sig)?;
        if u.len() > cap {
            return Err(Error::Budget(format!(
                "Sem/~ has {} members, over the synthesis cap of {cap}",
                u.len()
            )));
        }
        Ok(Synth { u })
    }

    pub fn universe(&self) -> &Universe {
        &self.u
    }

    fn sem(kind: Kind) -> Semantics {
        match kind {
            Kind::Causal => Semantics::Causal,
            Kind::Generalized => Semantics::Generalized,
        }
    }

    /// The masks of a class, deduplicated up to ≈.
    pub fn masks(&self, k: &TeamClass) -> Result<BTreeSet<Mask>> {
        let mut out = BTreeSet::new();
        for t in &k.teams {
            let g = t.generalized();
            for (s, f) in g.members() {
                if self.u.locate(s, f).is_none() {
                    return Err(Error::Invalid("class member is not over this signature".into()));
                }
            }
            out.insert(self.u.mask_of(&g));
        }
        Ok(out)
    }

    /// The class of teams (of the given kind) whose masks are listed.
    pub fn class_of_masks(&self, kind: Kind, masks: impl IntoIterator<Item = Mask>) -> TeamClass {
        let teams = masks
            .into_iter()
            .map(|m| match kind {
                Kind::Causal => Team::Causal(self.u.causal_of(m).expect("uniform mask")),
                Kind::Generalized => Team::Generalized(self.u.team_of(m)),
            })
            .collect();
        TeamClass { kind, teams }
    }

    /// K_φ over the whole universe.
    pub fn class_of_formula(&self, phi: &Formula, kind: Kind) -> TeamClass {
        let t = self.u.table(phi, self.u.len());
        let masks: Vec<Mask> = self
            .u
            .domain(Self::sem(kind), self.u.len())
            .into_iter()
            .filter(|&m| t.get(m))
            .collect();
        self.class_of_masks(kind, masks)
    }

    /// Every S with S ≼ T for some T in K.
    pub fn close_under_succeq(&self, k: &TeamClass) -> Result<TeamClass> {
        let mut out = BTreeSet::new();
        for m in self.masks(k)? {
            let mut s = m;
            loop {
                out.insert(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
        }
        Ok(self.class_of_masks(k.kind, out))
    }

    pub fn check_closure(&self, k: &TeamClass, mode: ClosureMode) -> Result<bool> {
        let m = self.masks(k)?;
        Ok(self.closed(&m, k.kind, mode))
    }

    fn closed(&self, m: &BTreeSet<Mask>, kind: Kind, mode: ClosureMode) -> bool {
        let downward = m.iter().all(|&t| {
            let mut rest = t;
            // closing under one-member removals suffices by induction
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if !m.contains(&(t & !bit)) {
                    return false;
                }
                rest &= rest - 1;
            }
            true
        });
        match mode {
            ClosureMode::DownwardEquiv => downward,
            ClosureMode::Flat => {
                let single: Mask = (0..self.u.len())
                    .filter(|&i| m.contains(&(1 << i)))
                    .fold(0, |a, i| a | 1 << i);
                m.contains(&0)
                    && self
                        .u
                        .domain(Self::sem(kind), self.u.len())
                        .into_iter()
                        .all(|t| m.contains(&t) == (t & !single == 0))
            }
        }
    }

    /// ⋁_F (Θ^{(T^F)⁻} ∧ Φ^F) with T = ⋃K, one disjunct per ∼-class
    /// present in T.
    pub fn synthesize_co(&self, k: &TeamClass) -> Result<Formula> {
        let m = self.masks(k)?;
        if m.is_empty() {
            return Err(Error::Invalid("the class is empty".into()));
        }
        if !self.closed(&m, k.kind, ClosureMode::Flat) {
            return Err(Error::Invalid("the class is not flat".into()));
        }
        let union = m.iter().fold(0, |a, &b| a | b);
        let sig = self.u.signature();
        let mut disj = Vec::new();
        for (c, f) in self.u.classes().iter().enumerate() {
            let part = union & self.u.class_mask(c);
            if part == 0 {
                continue;
            }
            let rows: BTreeSet<Assignment> = self.u.team_of(part).assignments();
            let theta = build_theta(&rows, sig)?.formula;
            disj.push(Formula::and(theta, build_phi(f, sig)?.formula));
        }
        Ok(Formula::big_or(disj))
    }

    /// ⋀ Ξ^T over the teams T outside K. Only the ≼-minimal ones are
    /// needed: T ≼ T′ makes Ξ^T entail Ξ^{T′}.
    pub fn synthesize_cod(&self, k: &TeamClass) -> Result<Formula> {
        let m = self.masks(k)?;
        if m.is_empty() {
            return Err(Error::Invalid("the class is empty".into()));
        }
        if !self.closed(&m, k.kind, ClosureMode::DownwardEquiv) {
            return Err(Error::Invalid("the class is not closed under subteams".into()));
        }
        let sig = self.u.signature();
        let dom = self.u.domain(Self::sem(k.kind), self.u.len());
        let mut conj = Vec::new();
        for t in dom {
            if m.contains(&t) {
                continue;
            }
            let mut rest = t;
            let mut minimal = true;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if !m.contains(&(t & !bit)) {
                    minimal = false;
                    break;
                }
                rest &= rest - 1;
            }
            if minimal {
                conj.push(build_xi(&self.u.team_of(t), sig)?.formula);
            }
        }
        Ok(Formula::big_and(conj))
    }

    /// K_φ = K, checked on every team of the universe.
    pub fn verify_defines(&self, phi: &Formula, k: &TeamClass) -> Result<bool> {
        phi.check(self.u.signature())?;
        let m: HashSet<Mask> = self.masks(k)?.into_iter().collect();
        let t = self.u.table(phi, self.u.len());
        Ok(self
            .u
            .domain(Self::sem(k.kind), self.u.len())
            .into_iter()
            .all(|s| t.get(s) == m.contains(&s)))
    }
}

pub fn close_under_succeq(k: &TeamClass, sig: &Signature) -> Result<TeamClass> {
    Synth::new(sig, DEFAULT_CAP)?.close_under_succeq(k)
}

pub fn check_closure(k: &TeamClass, mode: ClosureMode, sig: &Signature) -> Result<bool> {
    Synth::new(sig, DEFAULT_CAP)?.check_closure(k, mode)
}

pub fn synthesize_co(k: &TeamClass, sig: &Signature) -> Result<Formula> {
    Synth::new(sig, DEFAULT_CAP)?.synthesize_co(k)
}

pub fn synthesize_cod(k: &TeamClass, sig: &Signature) -> Result<Formula> {
    Synth::new(sig, DEFAULT_CAP)?.synthesize_cod(k)
}

pub fn verify_defines(phi: &Formula, k: &TeamClass, sig: &Signature) -> Result<bool> {
    Synth::new(sig, DEFAULT_CAP)?.verify_defines(phi, k)
}
