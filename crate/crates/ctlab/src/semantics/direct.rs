//! Evaluation straight from the satisfaction clauses, on explicit teams.

use super::SatContext;
use crate::intervention::{InterventionSpec, Intervened};
use crate::model::{Assignment, CausalTeam, FunctionSystem, GeneralizedTeam};
use crate::syntax::Formula;
use std::collections::HashMap;
use std::sync::Arc;

type Id = u32;

/// Members and laws are interned per call so that subteams are small sorted
/// id lists and interventions are computed once per (member, antecedent).
pub(super) struct Generalized<'a> {
    ctx: &'a SatContext,
    laws: Vec<Arc<FunctionSystem>>,
    law_ids: HashMap<Arc<FunctionSystem>, Id>,
    members: Vec<(Assignment, Id)>,
    member_ids: HashMap<(Assignment, Id), Id>,
    moved_laws: HashMap<(Id, &'a InterventionSpec), (Id, Intervened)>,
    moved: HashMap<(Id, &'a InterventionSpec), Id>,
    memo: HashMap<(*const Formula, Vec<Id>), bool>,
    pub over_budget: bool,
}

impl<'a> Generalized<'a> {
    pub fn new(ctx: &'a SatContext) -> Self {
        Generalized {
            ctx,
            laws: Vec::new(),
            law_ids: HashMap::new(),
            members: Vec::new(),
            member_ids: HashMap::new(),
            moved_laws: HashMap::new(),
            moved: HashMap::new(),
            memo: HashMap::new(),
            over_budget: false,
        }
    }

    fn law_id(&mut self, f: &Arc<FunctionSystem>) -> Id {
        if let Some(&id) = self.law_ids.get(f) {
            return id;
        }
        let id = self.laws.len() as Id;
        self.laws.push(f.clone());
        self.law_ids.insert(f.clone(), id);
        id
    }

    fn member_id(&mut self, s: Assignment, law: Id) -> Id {
        let key = (s, law);
        if let Some(&id) = self.member_ids.get(&key) {
            return id;
        }
        let id = self.members.len() as Id;
        self.members.push(key.clone());
        self.member_ids.insert(key, id);
        id
    }

    pub fn intern(&mut self, t: &GeneralizedTeam) -> Vec<Id> {
        let mut ids: Vec<Id> = t
            .members()
            .iter()
            .map(|(s, f)| {
                let l = self.law_id(f);
                self.member_id(s.clone(), l)
            })
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    fn intervene(&mut self, m: Id, iv: &'a InterventionSpec) -> Id {
        if let Some(&id) = self.moved.get(&(m, iv)) {
            return id;
        }
        let (s, law) = self.members[m as usize].clone();
        if !self.moved_laws.contains_key(&(law, iv)) {
            let i = Intervened::new(&self.laws[law as usize], iv).expect("consistent and recursive");
            let nl = self.law_id(&i.law);
            self.moved_laws.insert((law, iv), (nl, i));
        }
        let (nl, i) = &self.moved_laws[&(law, iv)];
        let (nl, t) = (*nl, i.apply(&s));
        let id = self.member_id(t, nl);
        self.moved.insert((m, iv), id);
        id
    }

    pub fn sat(&mut self, team: &[Id], f: &'a Formula) -> bool {
        if team.is_empty() {
            return true;
        }
        match f {
            Formula::Eq(v, x) => team.iter().all(|&m| self.members[m as usize].0.get(*v) == *x),
            Formula::Dep(xs, y) => {
                let rows: Vec<&Assignment> = team.iter().map(|&m| &self.members[m as usize].0).collect();
                rows.iter().enumerate().all(|(i, s)| {
                    rows[..i]
                        .iter()
                        .all(|t| xs.iter().any(|&x| s.get(x) != t.get(x)) || s.get(*y) == t.get(*y))
                })
            }
            Formula::Neg(a) => team.iter().all(|&m| !self.sat(&[m], a)),
            Formula::And(a, b) => self.sat(team, a) && self.sat(team, b),
            Formula::GlobalOr(a, b) => self.sat(team, a) || self.sat(team, b),
            Formula::Cf(iv, a) => {
                if !iv.is_consistent() {
                    return true;
                }
                let mut moved: Vec<Id> = team.iter().map(|&m| self.intervene(m, iv)).collect();
                moved.sort_unstable();
                moved.dedup();
                self.sat(&moved, a)
            }
            Formula::Or(a, b) => {
                let key = (f as *const Formula, team.to_vec());
                if let Some(&r) = self.memo.get(&key) {
                    return r;
                }
                let r = self.split(team, a, b);
                self.memo.insert(key, r);
                r
            }
        }
    }

    fn split(&mut self, team: &[Id], a: &'a Formula, b: &'a Formula) -> bool {
        if self.ctx.flat_shortcut && (a.is_co() || b.is_co()) {
            let (flat, other) = if a.is_co() { (a, b) } else { (b, a) };
            let rest: Vec<Id> = team.iter().copied().filter(|&m| !self.sat(&[m], flat)).collect();
            return self.sat(&rest, other);
        }
        let n = team.len();
        if n > self.ctx.team_cap || n >= 63 {
            self.over_budget = true;
            return false;
        }
        for mask in 0u64..1 << n {
            let left: Vec<Id> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| team[i]).collect();
            let right: Vec<Id> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| team[i]).collect();
            if self.sat(&left, a) && self.sat(&right, b) {
                return true;
            }
        }
        false
    }
}

/// The causal-team clauses, evaluated on (T⁻, F) without passing through
/// generalized teams.
pub(super) fn sat_causal(ctx: &SatContext, t: &CausalTeam, f: &Formula, over: &mut bool) -> bool {
    let Some(law) = t.law() else {
        return true;
    };
    let rows: Vec<&Assignment> = t.rows().iter().collect();
    match f {
        Formula::Eq(v, x) => rows.iter().all(|s| s.get(*v) == *x),
        Formula::Dep(xs, y) => rows.iter().enumerate().all(|(i, s)| {
            rows[..i]
                .iter()
                .all(|t| xs.iter().any(|&x| s.get(x) != t.get(x)) || s.get(*y) == t.get(*y))
        }),
        Formula::Neg(a) => rows.iter().all(|&s| {
            let single = CausalTeam::from_parts([s.clone()].into(), law.clone());
            !sat_causal(ctx, &single, a, over)
        }),
        Formula::And(a, b) => sat_causal(ctx, t, a, over) && sat_causal(ctx, t, b, over),
        Formula::GlobalOr(a, b) => sat_causal(ctx, t, a, over) || sat_causal(ctx, t, b, over),
        Formula::Cf(iv, a) => {
            if !iv.is_consistent() {
                return true;
            }
            let moved = crate::intervention::intervene_causal_team(t, iv).expect("consistent");
            sat_causal(ctx, &moved, a, over)
        }
        Formula::Or(a, b) => {
            let sub = |keep: &dyn Fn(usize) -> bool| {
                t.subteam(rows.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, s)| (*s).clone()))
            };
            if ctx.flat_shortcut && (a.is_co() || b.is_co()) {
                let (flat, other) = if a.is_co() { (a, b) } else { (b, a) };
                let fails: Vec<bool> = rows
                    .iter()
                    .map(|&s| {
                        let single = CausalTeam::from_parts([s.clone()].into(), law.clone());
                        !sat_causal(ctx, &single, flat, over)
                    })
                    .collect();
                return sat_causal(ctx, &sub(&|i| fails[i]), other, over);
            }
            let n = rows.len();
            if n > ctx.team_cap || n >= 63 {
                *over = true;
                return false;
            }
            (0u64..1 << n).any(|mask| {
                sat_causal(ctx, &sub(&|i| mask >> i & 1 == 1), a, over)
                    && sat_causal(ctx, &sub(&|i| mask >> i & 1 == 0), b, over)
            })
        }
    }
}
