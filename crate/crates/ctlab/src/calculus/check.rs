use super::{Derivation, Rule, System};
use crate::charform::{build_leadsto, build_theta, build_unf, build_xi, phi_family};
use crate::error::Result;
use crate::intervention::InterventionSpec;
use crate::model::{enumerate_assignments, enumerate_sem_quotient, Assignment, GeneralizedTeam, Signature, Val, Var};
use crate::syntax::{replace_occurrence, Formula};
use std::cell::OnceCell;
use std::collections::{BTreeSet, HashMap};

/// Where and why a derivation fails to check. `path` lists premise indices
/// from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckError {
    pub path: Vec<usize>,
    pub reason: String,
}

impl std::fmt::Display for CheckError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let p: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(f, "at /{}: {}", p.join("/"), self.reason)
    }
}

impl std::error::Error for CheckError {}

/// A checked derivation of `conclusion` from the still open hypotheses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checked {
    pub conclusion: Formula,
    pub open: Vec<(String, Formula)>,
}

impl Checked {
    pub fn assumptions(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        for (_, f) in &self.open {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        out
    }
}

/// What a rule instance asks of its premises' hypotheses.
struct Shape {
    /// Formulas of the labels closed in each premise.
    discharges: Vec<Vec<Formula>>,
    /// Premises that must have no open hypotheses left after discharge.
    closed: Vec<usize>,
}

impl Shape {
    fn plain(n: usize) -> Self {
        Shape { discharges: vec![vec![]; n], closed: vec![] }
    }
}

type Open = Vec<(String, Formula)>;

pub struct Checker {
    sig: Signature,
    system: System,
    phis: OnceCell<Result<Vec<Formula>>>,
    unf: OnceCell<Result<Formula>>,
    leads: OnceCell<Result<HashMap<Formula, (Var, Var)>>>,
}

fn r<T>(ok: bool, msg: impl FnOnce() -> String, v: T) -> std::result::Result<T, String> {
    if ok {
        Ok(v)
    } else {
        Err(msg())
    }
}

fn cf(f: &Formula) -> Option<(&InterventionSpec, &Formula)> {
    match f {
        Formula::Cf(iv, b) => Some((iv, b)),
        _ => None,
    }
}

fn sorted(items: &[(Var, Val)]) -> Vec<(Var, Val)> {
    let mut v = items.to_vec();
    v.sort_unstable();
    v
}

fn premise_count(d: &Derivation, n: usize) -> std::result::Result<(), String> {
    r(d.premises.len() == n, || format!("{} takes {n} premises, found {}", d.rule, d.premises.len()), ())
}

fn or_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Or(a, b) => Some((a, b)),
        _ => None,
    }
}

fn gor_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::GlobalOr(a, b) => Some((a, b)),
        _ => None,
    }
}

fn flatten_or<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Or(a, b) => {
            flatten_or(a, out);
            flatten_or(b, out);
        }
        _ => out.push(f),
    }
}

impl Checker {
    pub fn new(sig: &Signature, system: System) -> Self {
        Checker {
            sig: sig.clone(),
            system,
            phis: OnceCell::new(),
            unf: OnceCell::new(),
            leads: OnceCell::new(),
        }
    }

    pub fn system(&self) -> System {
        self.system
    }

    /// Φ^F for one representative of every ∼-class, in enumeration order.
    pub fn phi_premises(&self) -> std::result::Result<&[Formula], String> {
        let res = self
            .phis
            .get_or_init(|| phi_family(&self.sig).map(|v| v.into_iter().map(|(_, p)| p).collect()));
        res.as_deref().map_err(|e| e.to_string())
    }

    fn leadsto_of(&self, f: &Formula) -> std::result::Result<Option<(Var, Var)>, String> {
        let res = self.leads.get_or_init(|| {
            let mut m = HashMap::new();
            for a in self.sig.vars() {
                for b in self.sig.vars().filter(|&b| b != a) {
                    m.insert(build_leadsto(a, b, &self.sig)?.formula, (a, b));
                }
            }
            Ok(m)
        });
        res.as_ref().map(|m| m.get(f).copied()).map_err(|e| e.to_string())
    }

    pub fn check(&self, d: &Derivation) -> std::result::Result<Checked, CheckError> {
        let mut path = Vec::new();
        let open = self.node(d, &mut path)?;
        Ok(Checked { conclusion: d.conclusion.clone(), open })
    }

    fn node(&self, d: &Derivation, path: &mut Vec<usize>) -> std::result::Result<Open, CheckError> {
        let fail = |path: &Vec<usize>, reason: String| CheckError { path: path.clone(), reason };
        if !self.system.has(d.rule) {
            return Err(fail(path, format!("rule {} is not part of {}", d.rule, self.system)));
        }
        if let Err(e) = d.conclusion.check(&self.sig) {
            return Err(fail(path, e.to_string()));
        }
        if !self.system.admits(&d.conclusion) {
            return Err(fail(path, format!("formula outside the language of {}", self.system)));
        }
        if d.discharge.len() != d.premises.len() {
            return Err(fail(path, "discharge list must have one entry per premise".into()));
        }
        if d.rule == Rule::Hyp {
            return match (&d.label, d.premises.is_empty()) {
                (Some(l), true) => Ok(vec![(l.clone(), d.conclusion.clone())]),
                (None, _) => Err(fail(path, "hypothesis without a label".into())),
                (_, false) => Err(fail(path, "hypothesis with premises".into())),
            };
        }
        if d.label.is_some() {
            return Err(fail(path, "only hypotheses carry labels".into()));
        }
        let mut opens = Vec::with_capacity(d.premises.len());
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            opens.push(self.node(p, path)?);
            path.pop();
        }
        let shape = self.rule(d).map_err(|e| fail(path, format!("{}: {e}", d.rule)))?;
        let mut out = Vec::new();
        for (i, mut open) in opens.into_iter().enumerate() {
            let labels = &d.discharge[i];
            let want = &shape.discharges[i];
            if labels.len() != want.len() {
                return Err(fail(
                    path,
                    format!("{}: premise {i} closes {} labels, expected {}", d.rule, labels.len(), want.len()),
                ));
            }
            for (l, f) in labels.iter().zip(want) {
                if let Some((_, g)) = open.iter().find(|(m, g)| m == l && g != f) {
                    return Err(fail(
                        path,
                        format!(
                            "{}: hypothesis [{l}] is {} but the rule closes {}",
                            d.rule,
                            g.display(&self.sig),
                            f.display(&self.sig)
                        ),
                    ));
                }
                open.retain(|(m, _)| m != l);
            }
            if shape.closed.contains(&i) && !open.is_empty() {
                let names: Vec<&str> = open.iter().map(|(l, _)| l.as_str()).collect();
                return Err(fail(
                    path,
                    format!("{}: premise {i} must be closed but depends on [{}]", d.rule, names.join(", ")),
                ));
            }
            out.extend(open);
        }
        Ok(out)
    }

    fn rule(&self, d: &Derivation) -> std::result::Result<Shape, String> {
        use Rule::*;
        let c = &d.conclusion;
        let p = |i: usize| &d.premises[i].conclusion;
        let sig = &self.sig;
        match d.rule {
            Hyp => unreachable!(),
            ValDef => {
                premise_count(d, 0)?;
                let mut leaves = Vec::new();
                flatten_or(c, &mut leaves);
                let v = match leaves.first() {
                    Some(Formula::Eq(v, _)) => *v,
                    _ => return Err("conclusion must be a disjunction X=x over the range of X".into()),
                };
                let mut vals = BTreeSet::new();
                for l in &leaves {
                    match l {
                        Formula::Eq(w, x) if *w == v && vals.insert(*x) => {}
                        _ => return Err("disjuncts must be distinct values of one variable".into()),
                    }
                }
                r(vals.len() == sig.range_size(v), || "every value of the range must occur".into(), Shape::plain(0))
            }
            ValUnq => {
                premise_count(d, 1)?;
                match (p(0), c) {
                    (Formula::Eq(v, x), Formula::Neg(n)) => match &**n {
                        Formula::Eq(w, y) if w == v && y != x => Ok(Shape::plain(1)),
                        _ => Err("expected X=x / not X=x' with x' != x".into()),
                    },
                    _ => Err("expected X=x / not X=x'".into()),
                }
            }
            AndI => {
                premise_count(d, 2)?;
                r(*c == Formula::and(p(0).clone(), p(1).clone()), || "conclusion must be the conjunction of the premises".into(), Shape::plain(2))
            }
            AndE => {
                premise_count(d, 1)?;
                match p(0) {
                    Formula::And(a, b) if **a == *c || **b == *c => Ok(Shape::plain(1)),
                    _ => Err("conclusion must be a conjunct of the premise".into()),
                }
            }
            OrI => {
                premise_count(d, 1)?;
                match or_parts(c) {
                    Some((a, b)) if a == p(0) || b == p(0) => Ok(Shape::plain(1)),
                    _ => Err("conclusion must be a disjunction with the premise as a disjunct".into()),
                }
            }
            OrE => {
                premise_count(d, 3)?;
                let (a, b) = or_parts(p(0)).ok_or("major premise must be a disjunction")?;
                r(c.is_co(), || "conclusion must be a CO formula".into(), ())?;
                r(p(1) == c && p(2) == c, || "both minor premises must derive the conclusion".into(), ())?;
                Ok(Shape { discharges: vec![vec![], vec![a.clone()], vec![b.clone()]], closed: vec![] })
            }
            NegI => {
                premise_count(d, 1)?;
                r(p(0).is_bot(), || "premise must be bottom".into(), ())?;
                match c {
                    Formula::Neg(a) => Ok(Shape { discharges: vec![vec![(**a).clone()]], closed: vec![] }),
                    _ => Err("conclusion must be a negation".into()),
                }
            }
            NegE => {
                premise_count(d, 2)?;
                r(p(0).is_co(), || "alpha must be a CO formula".into(), ())?;
                r(*p(1) == Formula::neg(p(0).clone()), || "second premise must negate the first".into(), Shape::plain(2))
            }
            Raa => {
                premise_count(d, 1)?;
                r(p(0).is_bot(), || "premise must be bottom".into(), ())?;
                r(c.is_co(), || "conclusion must be a CO formula".into(), ())?;
                Ok(Shape { discharges: vec![vec![Formula::neg(c.clone())]], closed: vec![] })
            }
            CfEff => {
                premise_count(d, 0)?;
                match cf(c) {
                    Some((iv, Formula::Eq(y, v))) if iv.items.contains(&(*y, *v)) => Ok(Shape::plain(0)),
                    _ => Err("expected (X=x & Y=y) []-> Y=y".into()),
                }
            }
            CfI => {
                premise_count(d, 2)?;
                let (iv, body) = cf(c).ok_or("conclusion must be a counterfactual")?;
                r(*p(0) == Formula::eqs(&iv.items), || "first premise must be the antecedent".into(), ())?;
                r(body == p(1), || "consequent must be the second premise".into(), ())?;
                r(body.is_cf_free(), || "consequent must be counterfactual-free".into(), Shape::plain(2))
            }
            ExFalsoCf => {
                premise_count(d, 0)?;
                let (iv, _) = cf(c).ok_or("conclusion must be a counterfactual")?;
                r(!iv.is_consistent(), || "antecedent must be inconsistent".into(), Shape::plain(0))
            }
            CfBotE => {
                premise_count(d, 1)?;
                let (iv, body) = cf(p(0)).ok_or("premise must be a counterfactual")?;
                r(body.is_bot(), || "consequent must be bottom".into(), ())?;
                r(iv.is_consistent(), || "antecedent must be consistent".into(), Shape::plain(1))
            }
            CfRplA => {
                premise_count(d, 3)?;
                let (x, a) = cf(p(0)).ok_or("first premise must be a counterfactual")?;
                let (y, b) = cf(c).ok_or("conclusion must be a counterfactual")?;
                r(a == b, || "consequents differ".into(), ())?;
                let (ex, ey) = (Formula::eqs(&x.items), Formula::eqs(&y.items));
                r(*p(1) == ey && *p(2) == ex, || "side premises must derive each antecedent from the other".into(), ())?;
                Ok(Shape { discharges: vec![vec![], vec![ex], vec![ey]], closed: vec![1, 2] })
            }
            CfRplC => {
                premise_count(d, 2)?;
                let (x, a) = cf(p(0)).ok_or("first premise must be a counterfactual")?;
                let (y, b) = cf(c).ok_or("conclusion must be a counterfactual")?;
                r(x == y, || "antecedents differ".into(), ())?;
                r(b == p(1), || "consequent must be the side premise".into(), ())?;
                Ok(Shape { discharges: vec![vec![], vec![a.clone()]], closed: vec![1] })
            }
            CfAndI => {
                premise_count(d, 2)?;
                let (x, a) = cf(p(0)).ok_or("premises must be counterfactuals")?;
                let (y, b) = cf(p(1)).ok_or("premises must be counterfactuals")?;
                r(x == y, || "antecedents differ".into(), ())?;
                r(*c == Formula::Cf(x.clone(), Box::new(Formula::and(a.clone(), b.clone()))), || "wrong conclusion".into(), Shape::plain(2))
            }
            NegCfE => {
                premise_count(d, 1)?;
                let inner = match p(0) {
                    Formula::Neg(a) => a,
                    _ => return Err("premise must be a negated counterfactual".into()),
                };
                let (x, a) = cf(inner).ok_or("premise must be a negated counterfactual")?;
                r(*c == Formula::Cf(x.clone(), Box::new(Formula::neg(a.clone()))), || "wrong conclusion".into(), Shape::plain(1))
            }
            CfExtr => {
                premise_count(d, 1)?;
                let (x, inner) = cf(p(0)).ok_or("premise must be a counterfactual")?;
                let (y, body) = cf(inner).ok_or("premise must nest two counterfactuals")?;
                r(x.is_consistent(), || "outer antecedent must be consistent".into(), ())?;
                let (z, b) = cf(c).ok_or("conclusion must be a counterfactual")?;
                r(b == body, || "consequents differ".into(), ())?;
                let yv = y.vars();
                let mut want: Vec<_> = x.items.iter().copied().filter(|(v, _)| !yv.contains(v)).collect();
                want.extend(y.items.iter().copied());
                r(sorted(&want) == sorted(&z.items), || "antecedent must be X'=x' & Y=y".into(), Shape::plain(1))
            }
            CfExp => {
                premise_count(d, 1)?;
                let (z, body) = cf(p(0)).ok_or("premise must be a counterfactual")?;
                let (x, inner) = cf(c).ok_or("conclusion must be a counterfactual")?;
                let (y, b) = cf(inner).ok_or("conclusion must nest two counterfactuals")?;
                r(b == body, || "consequents differ".into(), ())?;
                let yv = y.vars();
                r(x.vars().iter().all(|v| !yv.contains(v)), || "X and Y must be disjoint".into(), ())?;
                let mut both = x.items.clone();
                both.extend(y.items.iter().copied());
                r(sorted(&both) == sorted(&z.items), || "antecedent must split into X=x and Y=y".into(), Shape::plain(1))
            }
            Recur => {
                let n = d.premises.len();
                r(n >= 1, || "Recur needs at least one premise".into(), ())?;
                let mut chain = Vec::new();
                for i in 0..n {
                    let e = self.leadsto_of(p(i))?.ok_or_else(|| format!("premise {i} is not a causal-path formula"))?;
                    if let Some(&(_, b)) = chain.last() {
                        r(b == e.0, || format!("premise {i} does not continue the chain"), ())?;
                    }
                    chain.push(e);
                }
                let (first, last) = (chain[0].0, chain[n - 1].1);
                r(first != last, || "the chain must not close on itself".into(), ())?;
                let inner = match c {
                    Formula::Neg(a) => a,
                    _ => return Err("conclusion must be a negation".into()),
                };
                r(self.leadsto_of(inner)? == Some((last, first)), || "conclusion must deny the reverse path".into(), Shape::plain(n))
            }
            OrCom => {
                premise_count(d, 1)?;
                let (a, b) = or_parts(p(0)).ok_or("premise must be a disjunction")?;
                r(*c == Formula::or(b.clone(), a.clone()), || "wrong conclusion".into(), Shape::plain(1))
            }
            OrAss => {
                premise_count(d, 1)?;
                let (ab, x) = or_parts(p(0)).ok_or("premise must be a disjunction")?;
                let (a, b) = or_parts(ab).ok_or("premise must be (a \\/ b) \\/ c")?;
                let want = Formula::or(a.clone(), Formula::or(b.clone(), x.clone()));
                r(*c == want, || "wrong conclusion".into(), Shape::plain(1))
            }
            OrRpl => {
                premise_count(d, 2)?;
                let (a, b) = or_parts(p(0)).ok_or("major premise must be a disjunction")?;
                r(*c == Formula::or(p(1).clone(), b.clone()), || "conclusion must replace the left disjunct".into(), ())?;
                Ok(Shape { discharges: vec![vec![], vec![a.clone()]], closed: vec![] })
            }
            CfOrDst => {
                premise_count(d, 1)?;
                let dist = |f: &Formula| -> Option<Formula> {
                    let (x, body) = cf(f)?;
                    let (a, b) = or_parts(body)?;
                    Some(Formula::or(
                        Formula::Cf(x.clone(), Box::new(a.clone())),
                        Formula::Cf(x.clone(), Box::new(b.clone())),
                    ))
                };
                let ok = dist(p(0)).as_ref() == Some(c) || dist(c).as_ref() == Some(p(0));
                r(ok, || "expected X=x []-> (a \\/ b) and (X=x []-> a) \\/ (X=x []-> b)".into(), Shape::plain(1))
            }
            GorI => {
                premise_count(d, 1)?;
                match gor_parts(c) {
                    Some((a, b)) if a == p(0) || b == p(0) => Ok(Shape::plain(1)),
                    _ => Err("conclusion must be a global disjunction with the premise as a disjunct".into()),
                }
            }
            GorE => {
                premise_count(d, 3)?;
                let (a, b) = gor_parts(p(0)).ok_or("major premise must be a global disjunction")?;
                r(p(1) == c && p(2) == c, || "both minor premises must derive the conclusion".into(), ())?;
                Ok(Shape { discharges: vec![vec![], vec![a.clone()], vec![b.clone()]], closed: vec![] })
            }
            OrGorDst => {
                premise_count(d, 1)?;
                let (a, bc) = or_parts(p(0)).ok_or("premise must be a \\/ (b \\\\/ c)")?;
                let (b, x) = gor_parts(bc).ok_or("premise must be a \\/ (b \\\\/ c)")?;
                let want = Formula::gor(Formula::or(a.clone(), b.clone()), Formula::or(a.clone(), x.clone()));
                r(*c == want, || "wrong conclusion".into(), Shape::plain(1))
            }
            CfGorDst => {
                premise_count(d, 1)?;
                let (x, body) = cf(p(0)).ok_or("premise must be a counterfactual")?;
                let (a, b) = gor_parts(body).ok_or("consequent must be a global disjunction")?;
                let want = Formula::gor(
                    Formula::Cf(x.clone(), Box::new(a.clone())),
                    Formula::Cf(x.clone(), Box::new(b.clone())),
                );
                r(*c == want, || "wrong conclusion".into(), Shape::plain(1))
            }
            ConI => {
                premise_count(d, 1)?;
                match p(0) {
                    Formula::Eq(v, _) => r(*c == Formula::con(*v), || "expected con(X)".into(), Shape::plain(1)),
                    _ => Err("premise must be X=x".into()),
                }
            }
            DepE => {
                let (xs, y) = match d.premises.first().map(|q| &q.conclusion) {
                    Some(Formula::Dep(xs, y)) => (xs, *y),
                    _ => return Err("first premise must be a dependence atom".into()),
                };
                premise_count(d, xs.len() + 1)?;
                for (i, &x) in xs.iter().enumerate() {
                    r(*p(i + 1) == Formula::con(x), || format!("premise {} must be con of argument {i}", i + 1), ())?;
                }
                r(*c == Formula::con(y), || "conclusion must be con(Y)".into(), Shape::plain(xs.len() + 1))
            }
            ConE => {
                let var = d.params.get("var").ok_or("needs parameter `var`")?;
                let x = sig.var(var).ok_or_else(|| format!("unknown variable `{var}`"))?;
                let k: usize = d.params.get("k").ok_or("needs parameter `k`")?.parse().map_err(|_| "k must be a number")?;
                let n = sig.range_size(x);
                premise_count(d, n + 1)?;
                let mut discharges = vec![vec![]];
                for (i, q) in d.premises[1..].iter().enumerate() {
                    r(q.conclusion == *c, || format!("premise {} must derive the conclusion", i + 1), ())?;
                    let inst = replace_occurrence(p(0), &Formula::con(x), k, &Formula::eq(x, i as Val))
                        .map_err(|e| e.to_string())?;
                    discharges.push(vec![inst]);
                }
                Ok(Shape { discharges, closed: vec![] })
            }
            DepI => {
                premise_count(d, 1)?;
                let (xs, y) = match c {
                    Formula::Dep(xs, y) => (xs, *y),
                    _ => return Err("conclusion must be a dependence atom".into()),
                };
                r(*p(0) == Formula::con(y), || "premise must be con(Y)".into(), ())?;
                Ok(Shape { discharges: vec![xs.iter().map(|&x| Formula::con(x)).collect()], closed: vec![] })
            }
            FunE => {
                let phis = self.phi_premises()?;
                premise_count(d, phis.len())?;
                for i in 0..phis.len() {
                    r(p(i) == c, || format!("premise {i} must derive the conclusion"), ())?;
                }
                Ok(Shape { discharges: phis.iter().map(|f| vec![f.clone()]).collect(), closed: vec![] })
            }
            UnfGor => {
                premise_count(d, 0)?;
                let unf = self.unf.get_or_init(|| build_unf(sig).map(|c| c.formula));
                let unf = unf.as_ref().map_err(|e| e.to_string())?;
                r(c == unf, || "conclusion must be the uniformity disjunction".into(), Shape::plain(0))
            }
            UnfD => {
                premise_count(d, 0)?;
                r(self.is_unf_d(c).map_err(|e| e.to_string())?, || "not an instance of the two-law schema".into(), Shape::plain(0))
            }
        }
    }

    /// Whether `c` is Ξ^{{(s,F),(t,G)}} for some F ≁ G.
    fn is_unf_d(&self, c: &Formula) -> Result<bool> {
        let theta_out = match c {
            Formula::Or(l, _) => match &**l {
                Formula::Or(_, t) => t,
                _ => return Ok(false),
            },
            _ => return Ok(false),
        };
        let all = enumerate_assignments(&self.sig);
        let members = enumerate_sem_quotient(&self.sig);
        let mut seen: HashMap<BTreeSet<Assignment>, bool> = HashMap::new();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.1.canonicalize() == b.1.canonicalize() {
                    continue;
                }
                let rows: BTreeSet<Assignment> = [a.0.clone(), b.0.clone()].into();
                let hit = match seen.get(&rows) {
                    Some(&h) => h,
                    None => {
                        let out: BTreeSet<Assignment> = all.iter().filter(|s| !rows.contains(s)).cloned().collect();
                        let h = build_theta(&out, &self.sig)?.formula == **theta_out;
                        seen.insert(rows, h);
                        h
                    }
                };
                if hit {
                    let t = GeneralizedTeam::new(&self.sig, [a.clone(), b.clone()])?;
                    if build_xi(&t, &self.sig)?.formula == *c {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Check `d` in `system` over `sig`.
pub fn check_derivation(d: &Derivation, system: System, sig: &Signature) -> std::result::Result<Checked, CheckError> {
    Checker::new(sig, system).check(d)
}
