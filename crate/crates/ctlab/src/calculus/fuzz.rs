//! Randomized soundness checks for single rules.
//!
//! A rule without discharge is tested as an entailment from its premises to
//! its conclusion. A rule that discharges hypotheses is tested as a
//! statement about entailments: whenever every premise entailment holds,
//! the conclusion must follow from the side assumptions. All entailments
//! are decided exactly.

use super::{Rule, System};
use crate::charform::{build_leadsto, build_unf, build_xi, phi_family};
use crate::decision::Decider;
use crate::error::{Error, Result};
use crate::gen::Gen;
use crate::intervention::InterventionSpec;
use crate::model::{enumerate_sem_quotient, GeneralizedTeam, Signature, Val, Var};
use crate::syntax::{replace_occurrence, Formula, Language};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub rule: Rule,
    pub system: System,
    pub trials: usize,
    /// Instances where every premise held, so the conclusion was tested.
    pub applicable: usize,
    /// Printed counterexample instances.
    pub violations: Vec<String>,
}

impl FuzzReport {
    pub fn sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One premise entailment: `extra` (plus the side assumptions, unless the
/// subderivation must be closed) entails `goal`.
struct Req {
    with_gamma: bool,
    extra: Vec<Formula>,
    goal: Formula,
}

struct Inst {
    gamma: Vec<Formula>,
    reqs: Vec<Req>,
    concl: Formula,
}

fn plain(premises: Vec<Formula>, concl: Formula) -> Inst {
    Inst { gamma: premises, reqs: vec![], concl }
}

fn req(extra: Vec<Formula>, goal: Formula) -> Req {
    Req { with_gamma: true, extra, goal }
}

fn closed(extra: Vec<Formula>, goal: Formula) -> Req {
    Req { with_gamma: false, extra, goal }
}

struct Ctx<'a> {
    g: Gen,
    sys: System,
    sig: &'a Signature,
}

impl Ctx<'_> {
    fn lang(&self) -> Language {
        self.sys.language()
    }

    fn any(&mut self) -> Formula {
        let l = self.lang();
        self.g.formula(l, 2)
    }

    fn co(&mut self) -> Formula {
        self.g.co(2)
    }

    fn consistent(&mut self) -> InterventionSpec {
        loop {
            let iv = self.g.antecedent();
            if iv.is_consistent() {
                return iv;
            }
        }
    }

    fn cf_free(&mut self) -> Formula {
        loop {
            let f = self.g.co(1);
            if f.is_cf_free() {
                return f;
            }
        }
    }

    fn coin(&mut self) -> bool {
        self.g.rng.gen_bool(0.5)
    }

    /// A second value of `v`, different from `x` when the range allows.
    fn other(&mut self, v: Var, x: Val) -> Option<Val> {
        let n = self.sig.range_size(v) as Val;
        let rest: Vec<Val> = (0..n).filter(|&y| y != x).collect();
        rest.choose(&mut self.g.rng).copied()
    }

    /// A weakening of `f` that stays in the language, or a random formula.
    fn weaker(&mut self, f: &Formula) -> Formula {
        let r = self.any();
        match self.g.rng.gen_range(0..4) {
            0 => f.clone(),
            1 => Formula::or(f.clone(), r),
            2 if self.lang() == Language::Cov => Formula::gor(f.clone(), r),
            _ => r,
        }
    }

    fn instance(&mut self, rule: Rule) -> Result<Option<Inst>> {
        use Rule::*;
        let sig = self.sig;
        Ok(Some(match rule {
            Hyp => return Ok(None),
            ValDef => {
                let v = self.g.var();
                let n = sig.range_size(v) as Val;
                plain(vec![], Formula::big_or((0..n).map(|x| Formula::eq(v, x))))
            }
            ValUnq => {
                let v = self.g.var();
                let x = self.g.val(v);
                let Some(y) = self.other(v, x) else { return Ok(None) };
                plain(vec![Formula::eq(v, x)], Formula::neq(v, y))
            }
            AndI => {
                let (a, b) = (self.any(), self.any());
                plain(vec![a.clone(), b.clone()], Formula::and(a, b))
            }
            AndE => {
                let (a, b) = (self.any(), self.any());
                let c = if self.coin() { a.clone() } else { b.clone() };
                plain(vec![Formula::and(a, b)], c)
            }
            OrI => {
                let (a, b) = (self.any(), self.any());
                let c = if self.coin() { Formula::or(a.clone(), b) } else { Formula::or(b, a.clone()) };
                plain(vec![a], c)
            }
            OrE => {
                let (a, b) = (self.any(), self.any());
                let alpha = if self.coin() && Formula::or(a.clone(), b.clone()).is_co() {
                    Formula::or(b.clone(), a.clone())
                } else {
                    self.co()
                };
                Inst {
                    gamma: vec![Formula::or(a.clone(), b.clone())],
                    reqs: vec![req(vec![a], alpha.clone()), req(vec![b], alpha.clone())],
                    concl: alpha,
                }
            }
            NegI => {
                let alpha = self.co();
                let side = if self.coin() { Formula::and(Formula::neg(alpha.clone()), self.any()) } else { self.any() };
                Inst { gamma: vec![side], reqs: vec![req(vec![alpha.clone()], Formula::bot())], concl: Formula::neg(alpha) }
            }
            NegE => {
                let alpha = self.co();
                let c = self.any();
                plain(vec![alpha.clone(), Formula::neg(alpha)], c)
            }
            Raa => {
                let alpha = self.co();
                let side = if self.coin() { Formula::and(alpha.clone(), self.any()) } else { self.any() };
                Inst { gamma: vec![side], reqs: vec![req(vec![Formula::neg(alpha.clone())], Formula::bot())], concl: alpha }
            }
            CfEff => {
                let mut iv = self.g.antecedent();
                let y = self.g.var();
                let v = self.g.val(y);
                iv.items.push((y, v));
                iv.items.shuffle(&mut self.g.rng);
                plain(vec![], Formula::Cf(iv, Box::new(Formula::eq(y, v))))
            }
            CfI => {
                let iv = self.g.antecedent();
                let t = self.cf_free();
                plain(vec![Formula::eqs(&iv.items), t.clone()], Formula::Cf(iv, Box::new(t)))
            }
            ExFalsoCf => {
                let v = self.g.var();
                let x = self.g.val(v);
                let Some(y) = self.other(v, x) else { return Ok(None) };
                let mut iv = self.g.antecedent();
                iv.items.extend([(v, x), (v, y)]);
                iv.items.shuffle(&mut self.g.rng);
                plain(vec![], Formula::Cf(iv, Box::new(self.any())))
            }
            CfBotE => {
                let iv = self.consistent();
                plain(vec![Formula::Cf(iv, Box::new(Formula::bot()))], self.any())
            }
            CfRplA => {
                let x = self.consistent();
                let mut y = if self.coin() {
                    let mut items = x.items.clone();
                    items.shuffle(&mut self.g.rng);
                    InterventionSpec::new(items)
                } else {
                    self.g.antecedent()
                };
                if self.coin() {
                    if let Some(&first) = x.items.first() {
                        y.items.push(first);
                    }
                }
                let phi = self.any();
                let (ex, ey) = (Formula::eqs(&x.items), Formula::eqs(&y.items));
                Inst {
                    gamma: vec![Formula::Cf(x, Box::new(phi.clone()))],
                    reqs: vec![closed(vec![ex.clone()], ey.clone()), closed(vec![ey], ex)],
                    concl: Formula::Cf(y, Box::new(phi)),
                }
            }
            CfRplC => {
                let iv = self.g.antecedent();
                let phi = self.any();
                let psi = self.weaker(&phi);
                Inst {
                    gamma: vec![Formula::Cf(iv.clone(), Box::new(phi.clone()))],
                    reqs: vec![closed(vec![phi], psi.clone())],
                    concl: Formula::Cf(iv, Box::new(psi)),
                }
            }
            CfAndI => {
                let iv = self.g.antecedent();
                let (a, b) = (self.any(), self.any());
                plain(
                    vec![Formula::Cf(iv.clone(), Box::new(a.clone())), Formula::Cf(iv.clone(), Box::new(b.clone()))],
                    Formula::Cf(iv, Box::new(Formula::and(a, b))),
                )
            }
            NegCfE => {
                let iv = self.g.antecedent();
                let a = self.co();
                plain(
                    vec![Formula::neg(Formula::Cf(iv.clone(), Box::new(a.clone())))],
                    Formula::Cf(iv, Box::new(Formula::neg(a))),
                )
            }
            CfExtr => {
                let x = self.consistent();
                let y = self.g.antecedent();
                let phi = self.any();
                let yv = y.vars();
                let mut items: Vec<_> = x.items.iter().copied().filter(|(v, _)| !yv.contains(v)).collect();
                items.extend(y.items.iter().copied());
                plain(
                    vec![Formula::Cf(x, Box::new(Formula::Cf(y, Box::new(phi.clone()))))],
                    Formula::cf_items(items, phi),
                )
            }
            CfExp => {
                let mut vars: Vec<Var> = sig.vars().collect();
                vars.shuffle(&mut self.g.rng);
                if vars.len() < 2 {
                    return Ok(None);
                }
                let cut = self.g.rng.gen_range(1..vars.len());
                let xs: Vec<(Var, Val)> = vars[..cut].iter().map(|&v| (v, self.g.val(v))).collect();
                let mut ys: Vec<(Var, Val)> = Vec::new();
                for &v in &vars[cut..] {
                    if self.g.rng.gen_bool(0.7) {
                        ys.push((v, self.g.val(v)));
                    }
                }
                if ys.is_empty() {
                    let v = vars[cut];
                    ys.push((v, self.g.val(v)));
                }
                let phi = self.any();
                let mut both = xs.clone();
                both.extend(ys.iter().copied());
                plain(
                    vec![Formula::cf_items(both, phi.clone())],
                    Formula::cf_items(xs, Formula::cf_items(ys, phi)),
                )
            }
            Recur => {
                let mut vars: Vec<Var> = sig.vars().collect();
                vars.shuffle(&mut self.g.rng);
                if vars.len() < 2 {
                    return Ok(None);
                }
                let k = self.g.rng.gen_range(2..=vars.len());
                let chain = &vars[..k];
                let prem = chain
                    .windows(2)
                    .map(|w| build_leadsto(w[0], w[1], sig).map(|c| c.formula))
                    .collect::<Result<Vec<_>>>()?;
                let back = build_leadsto(chain[k - 1], chain[0], sig)?.formula;
                plain(prem, Formula::neg(back))
            }
            OrCom => {
                let (a, b) = (self.any(), self.any());
                plain(vec![Formula::or(a.clone(), b.clone())], Formula::or(b, a))
            }
            OrAss => {
                let (a, b, c) = (self.any(), self.any(), self.any());
                plain(
                    vec![Formula::or(Formula::or(a.clone(), b.clone()), c.clone())],
                    Formula::or(a, Formula::or(b, c)),
                )
            }
            OrRpl => {
                let (a, b) = (self.any(), self.any());
                let chi = self.weaker(&a);
                Inst {
                    gamma: vec![Formula::or(a.clone(), b.clone())],
                    reqs: vec![req(vec![a], chi.clone())],
                    concl: Formula::or(chi, b),
                }
            }
            CfOrDst => {
                let iv = self.g.antecedent();
                let (a, b) = (self.any(), self.any());
                let joined = Formula::Cf(iv.clone(), Box::new(Formula::or(a.clone(), b.clone())));
                let split = Formula::or(Formula::Cf(iv.clone(), Box::new(a)), Formula::Cf(iv, Box::new(b)));
                if self.coin() {
                    plain(vec![joined], split)
                } else {
                    plain(vec![split], joined)
                }
            }
            GorI => {
                let (a, b) = (self.any(), self.any());
                let c = if self.coin() { Formula::gor(a.clone(), b) } else { Formula::gor(b, a.clone()) };
                plain(vec![a], c)
            }
            GorE => {
                let (a, b) = (self.any(), self.any());
                let chi = match self.g.rng.gen_range(0..3) {
                    0 => Formula::gor(b.clone(), a.clone()),
                    1 => Formula::or(a.clone(), b.clone()),
                    _ => self.any(),
                };
                Inst {
                    gamma: vec![Formula::gor(a.clone(), b.clone())],
                    reqs: vec![req(vec![a], chi.clone()), req(vec![b], chi.clone())],
                    concl: chi,
                }
            }
            OrGorDst => {
                let (a, b, c) = (self.any(), self.any(), self.any());
                plain(
                    vec![Formula::or(a.clone(), Formula::gor(b.clone(), c.clone()))],
                    Formula::gor(Formula::or(a.clone(), b), Formula::or(a, c)),
                )
            }
            CfGorDst => {
                let iv = self.g.antecedent();
                let (a, b) = (self.any(), self.any());
                plain(
                    vec![Formula::Cf(iv.clone(), Box::new(Formula::gor(a.clone(), b.clone())))],
                    Formula::gor(Formula::Cf(iv.clone(), Box::new(a)), Formula::Cf(iv, Box::new(b))),
                )
            }
            ConI => {
                let v = self.g.var();
                let x = self.g.val(v);
                plain(vec![Formula::eq(v, x)], Formula::con(v))
            }
            DepE => {
                let y = self.g.var();
                let xs: Vec<Var> = sig.vars().filter(|&v| v != y && self.g.rng.gen_bool(0.5)).collect();
                let mut prem = vec![Formula::dep(xs.clone(), y)];
                prem.extend(xs.iter().map(|&x| Formula::con(x)));
                plain(prem, Formula::con(y))
            }
            ConE => {
                let x = self.g.var();
                let r = self.any();
                let phi = match self.g.rng.gen_range(0..4) {
                    0 => Formula::and(r, Formula::con(x)),
                    1 => Formula::or(Formula::con(x), r),
                    2 => Formula::Cf(self.g.antecedent(), Box::new(Formula::or(r, Formula::con(x)))),
                    _ => con_mix(r, x),
                };
                let n = phi.count_occurrences(&Formula::con(x));
                let k = self.g.rng.gen_range(1..=n);
                let psi = match self.g.rng.gen_range(0..3) {
                    0 => phi.clone(),
                    1 => Formula::con(x),
                    _ => self.any(),
                };
                let mut reqs = Vec::new();
                for v in 0..sig.range_size(x) as Val {
                    let inst = replace_occurrence(&phi, &Formula::con(x), k, &Formula::eq(x, v))?;
                    reqs.push(req(vec![inst], psi.clone()));
                }
                Inst { gamma: vec![phi], reqs, concl: psi }
            }
            DepI => {
                let y = self.g.var();
                let xs: Vec<Var> = sig.vars().filter(|&v| v != y && self.g.rng.gen_bool(0.5)).collect();
                let side = match self.g.rng.gen_range(0..3) {
                    0 => Formula::dep(xs.clone(), y),
                    1 => Formula::con(y),
                    _ => self.any(),
                };
                Inst {
                    gamma: vec![side],
                    reqs: vec![req(xs.iter().map(|&x| Formula::con(x)).collect(), Formula::con(y))],
                    concl: Formula::dep(xs, y),
                }
            }
            FunE => {
                let side = self.any();
                let psi = self.weaker(&side);
                let reqs = phi_family(sig)?.into_iter().map(|(_, p)| req(vec![p], psi.clone())).collect();
                Inst { gamma: vec![side], reqs, concl: psi }
            }
            UnfGor => plain(vec![], build_unf(sig)?.formula),
            UnfD => {
                let members = enumerate_sem_quotient(sig);
                let (a, b) = loop {
                    let a = members.choose(&mut self.g.rng).expect("nonempty").clone();
                    let b = members.choose(&mut self.g.rng).expect("nonempty").clone();
                    if a.1.canonicalize() != b.1.canonicalize() {
                        break (a, b);
                    }
                };
                let t = GeneralizedTeam::new(sig, [a, b])?;
                plain(vec![], build_xi(&t, sig)?.formula)
            }
        }))
    }
}

/// con(x) both in a disjunct and under a counterfactual.
fn con_mix(r: Formula, x: Var) -> Formula {
    Formula::and(Formula::or(Formula::con(x), r), Formula::cf_items(vec![(x, 0)], Formula::con(x)))
}

/// Draw `trials` instances of `rule` over `sig` and test each under the
/// semantics of `system`.
pub fn rule_soundness_fuzz(rule: Rule, system: System, sig: &Signature, trials: usize, seed: u64) -> Result<FuzzReport> {
    if !system.has(rule) || rule == Rule::Hyp {
        return Err(Error::Invalid(format!("{rule} is not a rule of {system}")));
    }
    let decider = Decider::new(sig)?;
    let sem = system.semantics();
    let mut ctx = Ctx { g: Gen::new(sig, seed), sys: system, sig };
    let mut report = FuzzReport { rule, system, trials, applicable: 0, violations: vec![] };
    for _ in 0..trials {
        let Some(inst) = ctx.instance(rule)? else { continue };
        let mut ok = true;
        for r in &inst.reqs {
            let mut prem = if r.with_gamma { inst.gamma.clone() } else { vec![] };
            prem.extend(r.extra.iter().cloned());
            if !decider.entails(&prem, &r.goal, sem)?.holds {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        report.applicable += 1;
        let v = decider.entails(&inst.gamma, &inst.concl, sem)?;
        if !v.holds {
            let g: Vec<String> = inst.gamma.iter().map(|f| f.display(sig)).collect();
            report.violations.push(format!("{} |/= {}", g.join(", "), inst.concl.display(sig)));
        }
    }
    Ok(report)
}
