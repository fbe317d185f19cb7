//! Seeded random formulas, laws and teams for property tests and fuzzing.

use crate::intervention::InterventionSpec;
use crate::model::{Assignment, CausalTeam, FunctionSystem, GeneralizedTeam, Law, Member, Signature, Val, Var};
use crate::syntax::{Formula, Language};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub struct Gen {
    pub rng: ChaCha8Rng,
    sig: Signature,
}

impl Gen {
    pub fn new(sig: &Signature, seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), sig: sig.clone() }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn var(&mut self) -> Var {
        self.rng.gen_range(0..self.sig.len())
    }

    pub fn val(&mut self, v: Var) -> Val {
        self.rng.gen_range(0..self.sig.range_size(v)) as Val
    }

    pub fn eq(&mut self) -> Formula {
        let v = self.var();
        let x = self.val(v);
        Formula::eq(v, x)
    }

    /// One or two items; occasionally inconsistent.
    pub fn antecedent(&mut self) -> InterventionSpec {
        let n = self.rng.gen_range(1..=2usize.min(self.sig.len() + 1));
        let items = (0..n)
            .map(|_| {
                let v = self.var();
                (v, self.val(v))
            })
            .collect();
        InterventionSpec::new(items)
    }

    fn vars_subset(&mut self, max: usize) -> Vec<Var> {
        let mut all: Vec<Var> = self.sig.vars().collect();
        all.shuffle(&mut self.rng);
        let k = self.rng.gen_range(0..=max.min(all.len()));
        let mut out = all[..k].to_vec();
        out.sort_unstable();
        out
    }

    /// A CO formula of at most the given depth.
    pub fn co(&mut self, depth: usize) -> Formula {
        self.formula(Language::Co, depth)
    }

    /// A formula of the given language (CO, COV or COD) and depth bound.
    /// Negation is only ever applied to CO subformulas, and counterfactual
    /// antecedents are conjunctions of equalities, so every result is well
    /// formed.
    pub fn formula(&mut self, lang: Language, depth: usize) -> Formula {
        if depth == 0 {
            return match lang {
                Language::Cod if self.rng.gen_bool(0.3) => {
                    let y = self.var();
                    let xs: Vec<Var> = self.vars_subset(2).into_iter().filter(|&x| x != y).collect();
                    Formula::dep(xs, y)
                }
                _ => self.eq(),
            };
        }
        let choices = if lang == Language::Cov { 6 } else { 5 };
        match self.rng.gen_range(0..choices) {
            0 => self.formula(lang, 0),
            1 => {
                let a = self.co(depth - 1);
                Formula::neg(a)
            }
            2 => Formula::and(self.formula(lang, depth - 1), self.formula(lang, depth - 1)),
            3 => Formula::or(self.formula(lang, depth - 1), self.formula(lang, depth - 1)),
            4 => {
                let iv = self.antecedent();
                Formula::Cf(iv, Box::new(self.formula(lang, depth - 1)))
            }
            _ => Formula::gor(self.formula(lang, depth - 1), self.formula(lang, depth - 1)),
        }
    }

    /// A recursive system: a random variable order, and for each variable
    /// either no law or a random table over a random set of earlier
    /// variables.
    pub fn law(&mut self) -> FunctionSystem {
        let mut order: Vec<Var> = self.sig.vars().collect();
        order.shuffle(&mut self.rng);
        let mut laws: Vec<Option<Law>> = vec![None; self.sig.len()];
        for (i, &v) in order.iter().enumerate() {
            if self.rng.gen_bool(0.4) {
                continue;
            }
            let mut parents: Vec<Var> = order[..i].iter().copied().filter(|_| self.rng.gen_bool(0.6)).collect();
            parents.sort_unstable();
            let size: usize = parents.iter().map(|&p| self.sig.range_size(p)).product();
            let table = (0..size).map(|_| self.val(v)).collect();
            laws[v] = Some(Law::new(&self.sig, v, parents, table).expect("valid table"));
        }
        FunctionSystem::new(&self.sig, laws).expect("acyclic by construction")
    }

    /// A causal team with a random law and up to `max` of its compatible
    /// assignments (possibly empty).
    pub fn causal_team(&mut self, max: usize) -> CausalTeam {
        let f = Arc::new(self.law());
        let mut rows: Vec<Assignment> = f.compatible_assignments(&self.sig).expect("recursive");
        rows.shuffle(&mut self.rng);
        let k = self.rng.gen_range(0..=max.min(rows.len()));
        rows.truncate(k);
        if rows.is_empty() {
            return CausalTeam::empty();
        }
        CausalTeam::new(&self.sig, rows, f).expect("compatible rows")
    }

    /// A generalized team of up to `max` members drawn from `pool`.
    pub fn team_from(&mut self, pool: &[Member], max: usize) -> GeneralizedTeam {
        let k = self.rng.gen_range(0..=max.min(pool.len()));
        let members: Vec<Member> = pool.choose_multiple(&mut self.rng, k).cloned().collect();
        GeneralizedTeam::new(&self.sig, members).expect("pool members are valid")
    }

    /// A generalized team whose members use freshly drawn laws.
    pub fn generalized_team(&mut self, max: usize, laws: usize) -> GeneralizedTeam {
        let laws: Vec<Arc<FunctionSystem>> = (0..laws.max(1)).map(|_| Arc::new(self.law())).collect();
        let mut pool: Vec<Member> = Vec::new();
        for f in &laws {
            for s in f.compatible_assignments(&self.sig).expect("recursive") {
                pool.push((s, f.clone()));
            }
        }
        self.team_from(&pool, max)
    }
}
