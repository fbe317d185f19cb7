//! Truth tables over every subteam of Sem_σ/∼.
//!
//! The universe holds one pair (s, F) per ≈-class of singleton teams, with F
//! a canonical representative. A generalized team is then, up to ≈, a bitmask
//! over the universe, and a causal team is a mask whose members share one
//! law. Satisfaction is ≈-invariant, so a table indexed by masks decides
//! satisfaction for every team.

use super::Semantics;
use crate::error::{Error, Result};
use crate::intervention::{InterventionSpec, Intervened};
use crate::model::{
    enumerate_sem_quotient, CanonicalLaw, Assignment, CausalTeam, FunctionSystem,
    GeneralizedTeam, Member, Signature,
};
use crate::syntax::Formula;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Largest universe the mask tables accept.
pub const MAX_UNIVERSE: usize = 20;

pub type Mask = u64;

pub struct Universe {
    sig: Signature,
    members: Vec<Member>,
    index: HashMap<(Assignment, CanonicalLaw), usize>,
    classes: Vec<Arc<FunctionSystem>>,
    class_of: Vec<usize>,
    class_masks: Vec<Mask>,
    moves: Mutex<HashMap<InterventionSpec, Arc<Vec<u8>>>>,
    /// Use flatness to split tensor disjunctions with a CO side in one pass.
    pub flat_shortcut: bool,
}

/// A truth table restricted to masks of at most `rows` members.
pub struct Table {
    bits: Vec<bool>,
    rows: u32,
}

impl Table {
    pub fn get(&self, m: Mask) -> bool {
        debug_assert!(m.count_ones() <= self.rows);
        self.bits[m as usize]
    }
}

impl Universe {
    pub fn new(sig: &Signature) -> Result<Self> {
        let members = enumerate_sem_quotient(sig);
        if members.len() > MAX_UNIVERSE {
            return Err(Error::Budget(format!(
                "Sem/~ has {} members, the table evaluator handles at most {MAX_UNIVERSE}",
                members.len()
            )));
        }
        let mut classes: Vec<Arc<FunctionSystem>> = Vec::new();
        let mut class_of = Vec::new();
        let mut index = HashMap::new();
        for (i, (s, f)) in members.iter().enumerate() {
            let c = match classes.iter().position(|g| Arc::ptr_eq(g, f)) {
                Some(c) => c,
                None => {
                    classes.push(f.clone());
                    classes.len() - 1
                }
            };
            class_of.push(c);
            index.insert((s.clone(), f.canonicalize()), i);
        }
        let mut class_masks = vec![0; classes.len()];
        for (i, &c) in class_of.iter().enumerate() {
            class_masks[c] |= 1 << i;
        }
        Ok(Universe {
            sig: sig.clone(),
            members,
            index,
            classes,
            class_of,
            class_masks,
            moves: Mutex::new(HashMap::new()),
            flat_shortcut: true,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn full(&self) -> Mask {
        if self.len() == 64 {
            Mask::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    /// Canonical representatives of the ∼-classes.
    pub fn classes(&self) -> &[Arc<FunctionSystem>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_mask(&self, c: usize) -> Mask {
        self.class_masks[c]
    }

    /// Masks whose members all share one law (including the empty mask).
    pub fn is_uniform(&self, m: Mask) -> bool {
        m == 0 || self.class_masks.iter().any(|&c| m & !c == 0)
    }

    /// Index of the member ≈ {(s, F)}.
    pub fn locate(&self, s: &Assignment, f: &FunctionSystem) -> Option<usize> {
        self.index.get(&(s.clone(), f.canonicalize())).copied()
    }

    pub fn mask_of(&self, t: &GeneralizedTeam) -> Mask {
        t.members()
            .iter()
            .map(|(s, f)| 1 << self.locate(s, f).expect("team over this signature"))
            .fold(0, |a, b| a | b)
    }

    pub fn mask_of_causal(&self, t: &CausalTeam) -> Mask {
        self.mask_of(&t.to_generalized())
    }

    pub fn team_of(&self, m: Mask) -> GeneralizedTeam {
        let members = (0..self.len())
            .filter(|i| m >> i & 1 == 1)
            .map(|i| self.members[i].clone());
        GeneralizedTeam::new(&self.sig, members).expect("members are valid")
    }

    /// The causal team for a uniform mask.
    pub fn causal_of(&self, m: Mask) -> Option<CausalTeam> {
        if !self.is_uniform(m) {
            return None;
        }
        Some(self.team_of(m).to_causal().expect("uniform"))
    }

    /// All masks with at most `rows` members, in increasing numeric order.
    pub fn masks(&self, rows: usize) -> Vec<Mask> {
        let n = self.len();
        if rows >= n {
            return (0..=self.full()).collect();
        }
        // Gosper's hack per popcount, then one sort
        let mut out = vec![0];
        for k in 1..=rows {
            let mut m: Mask = (1 << k) - 1;
            while m <= self.full() {
                out.push(m);
                let c = m & m.wrapping_neg();
                let r = m + c;
                m = (((r ^ m) >> 2) / c) | r;
            }
        }
        out.sort_unstable();
        out
    }

    /// The masks ranged over by a semantics: every mask for generalized
    /// teams, the uniform ones for causal teams.
    pub fn domain(&self, semantics: Semantics, rows: usize) -> Vec<Mask> {
        let all = self.masks(rows);
        match semantics {
            Semantics::Generalized => all,
            Semantics::Causal => all.into_iter().filter(|&m| self.is_uniform(m)).collect(),
        }
    }

    fn moves(&self, iv: &InterventionSpec) -> Arc<Vec<u8>> {
        if let Some(v) = self.moves.lock().unwrap().get(iv) {
            return v.clone();
        }
        let mut by_law: BTreeMap<usize, Intervened> = BTreeMap::new();
        let map: Vec<u8> = self
            .members
            .iter()
            .enumerate()
            .map(|(i, (s, _))| {
                let c = self.class_of[i];
                let it = by_law
                    .entry(c)
                    .or_insert_with(|| Intervened::new(&self.classes[c], iv).expect("consistent"));
                let t = it.apply(s);
                self.locate(&t, &it.law).expect("closed under intervention") as u8
            })
            .collect();
        let map = Arc::new(map);
        self.moves.lock().unwrap().insert(iv.clone(), map.clone());
        map
    }

    fn image(map: &[u8], m: Mask) -> Mask {
        let mut out = 0;
        let mut rest = m;
        while rest != 0 {
            let i = rest.trailing_zeros();
            out |= 1 << map[i as usize];
            rest &= rest - 1;
        }
        out
    }

    /// Members of the universe whose singleton satisfies `f`.
    pub fn singletons(&self, f: &Formula) -> Mask {
        let t = self.table(f, 1);
        (0..self.len()).filter(|&i| t.get(1 << i)).fold(0, |a, i| a | 1 << i)
    }

    /// The truth table of `f` on every mask with at most `rows` members.
    pub fn table(&self, f: &Formula, rows: usize) -> Table {
        let dom = self.masks(rows);
        let rows = rows.min(self.len()) as u32;
        Table { bits: self.eval(f, &dom), rows }
    }

    fn eval(&self, f: &Formula, dom: &[Mask]) -> Vec<bool> {
        let size = 1usize << self.len();
        let mut t = vec![false; size];
        match f {
            Formula::Eq(v, x) => {
                let sat = self.select(|(s, _)| s.get(*v) == *x);
                for &m in dom {
                    t[m as usize] = m & !sat == 0;
                }
            }
            Formula::Dep(xs, y) => {
                let n = self.len();
                let conflict: Vec<Mask> = (0..n)
                    .map(|i| {
                        let s = &self.members[i].0;
                        (0..n)
                            .filter(|&j| {
                                let u = &self.members[j].0;
                                xs.iter().all(|&x| s.get(x) == u.get(x)) && s.get(*y) != u.get(*y)
                            })
                            .fold(0, |a, j| a | 1 << j)
                    })
                    .collect();
                for &m in dom {
                    t[m as usize] = m == 0 || {
                        let low = m.trailing_zeros() as usize;
                        t[(m & (m - 1)) as usize] && m & conflict[low] == 0
                    };
                }
            }
            Formula::Neg(a) => {
                let single = self.singletons(a);
                for &m in dom {
                    t[m as usize] = m & single == 0;
                }
            }
            Formula::And(a, b) | Formula::GlobalOr(a, b) => {
                let ta = self.eval(a, dom);
                let tb = self.eval(b, dom);
                let and = matches!(f, Formula::And(..));
                for &m in dom {
                    let (x, y) = (ta[m as usize], tb[m as usize]);
                    t[m as usize] = if and { x && y } else { x || y };
                }
            }
            Formula::Cf(iv, a) => {
                if !iv.is_consistent() {
                    for &m in dom {
                        t[m as usize] = true;
                    }
                } else {
                    let map = self.moves(iv);
                    let ta = self.eval(a, dom);
                    for &m in dom {
                        t[m as usize] = ta[Self::image(&map, m) as usize];
                    }
                }
            }
            Formula::Or(a, b) => {
                if self.flat_shortcut && (a.is_co() || b.is_co()) {
                    let (flat, other) = if a.is_co() { (a, b) } else { (b, a) };
                    let single = self.singletons(flat);
                    let to = self.eval(other, dom);
                    for &m in dom {
                        t[m as usize] = to[(m & !single) as usize];
                    }
                } else {
                    let ta = self.eval(a, dom);
                    let tb = self.eval(b, dom);
                    for &m in dom {
                        let mut s = m;
                        let hit = loop {
                            if ta[s as usize] && tb[(m ^ s) as usize] {
                                break true;
                            }
                            if s == 0 {
                                break false;
                            }
                            s = (s - 1) & m;
                        };
                        t[m as usize] = hit;
                    }
                }
            }
        }
        t
    }

    fn select(&self, p: impl Fn(&Member) -> bool) -> Mask {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, m)| p(m))
            .fold(0, |a, (i, _)| a | 1 << i)
    }

    /// Naive bounded entailment: every team with at most `rows` members that
    /// satisfies all of `gamma` satisfies `psi`. Returns a counterexample
    /// mask when the entailment fails.
    pub fn counterexample(
        &self,
        gamma: &[Formula],
        psi: &Formula,
        semantics: Semantics,
        rows: usize,
    ) -> Option<Mask> {
        let dom = self.domain(semantics, rows);
        let all = self.masks(rows);
        let tables: Vec<Vec<bool>> = gamma.iter().map(|g| self.eval(g, &all)).collect();
        let tp = self.eval(psi, &all);
        dom.into_iter()
            .find(|&m| tables.iter().all(|t| t[m as usize]) && !tp[m as usize])
    }

    pub fn entails_bounded(&self, gamma: &[Formula], psi: &Formula, semantics: Semantics, rows: usize) -> bool {
        self.counterexample(gamma, psi, semantics, rows).is_none()
    }

    /// Both directions of bounded entailment.
    pub fn equivalent_bounded(&self, a: &Formula, b: &Formula, semantics: Semantics, rows: usize) -> bool {
        self.entails_bounded(std::slice::from_ref(a), b, semantics, rows)
            && self.entails_bounded(std::slice::from_ref(b), a, semantics, rows)
    }

    /// T ⊨ φ iff every singleton of T does, on every mask of the domain.
    pub fn is_flat(&self, f: &Formula, semantics: Semantics) -> bool {
        let all = self.masks(self.len());
        let t = self.eval(f, &all);
        let single = (0..self.len()).filter(|&i| t[1 << i]).fold(0, |a, i| a | 1 << i);
        self.domain(semantics, self.len())
            .into_iter()
            .all(|m| t[m as usize] == (m & !single == 0))
    }
}
