//! Natural deduction for CO, CO with global disjunction and COD, over
//! generalized causal teams (`-g`) and causal teams (`-c`).
//!
//! A derivation is a tree. Leaves are hypotheses (rule `hyp`, with a label)
//! or axiom instances. A rule that discharges hypotheses names, per premise,
//! the labels it closes in that premise's subtree.

mod check;
mod fuzz;
mod golden;

pub use check::{check_derivation, CheckError, Checked, Checker};
pub use fuzz::{rule_soundness_fuzz, FuzzReport};
pub use golden::{golden_derived_rules, monotone_substitution, Golden};

use crate::error::{Error, Result};
use crate::model::io::{signature_from_json, signature_to_json};
use crate::model::Signature;
use crate::semantics::Semantics;
use crate::syntax::{parse, Formula, Language};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Hyp,
    ValDef,
    ValUnq,
    AndI,
    AndE,
    OrI,
    OrE,
    NegI,
    NegE,
    Raa,
    CfEff,
    CfI,
    ExFalsoCf,
    CfBotE,
    CfRplA,
    CfRplC,
    CfAndI,
    NegCfE,
    CfExtr,
    CfExp,
    Recur,
    OrCom,
    OrAss,
    OrRpl,
    CfOrDst,
    GorI,
    GorE,
    OrGorDst,
    CfGorDst,
    ConI,
    DepE,
    ConE,
    DepI,
    FunE,
    UnfGor,
    UnfD,
}

use Rule::*;

const CO_RULES: &[Rule] = &[
    ValDef, ValUnq, AndI, AndE, OrI, OrE, NegI, NegE, Raa, CfEff, CfI, ExFalsoCf, CfBotE, CfRplA, CfRplC, CfAndI,
    NegCfE, CfExtr, CfExp, Recur,
];
const OR_RULES: &[Rule] = &[OrCom, OrAss, OrRpl, CfOrDst];
const GOR_RULES: &[Rule] = &[GorI, GorE, OrGorDst, CfGorDst];
const DEP_RULES: &[Rule] = &[ConI, DepE, ConE, DepI];

impl Rule {
    pub const ALL: &'static [Rule] = &[
        Hyp, ValDef, ValUnq, AndI, AndE, OrI, OrE, NegI, NegE, Raa, CfEff, CfI, ExFalsoCf, CfBotE, CfRplA, CfRplC,
        CfAndI, NegCfE, CfExtr, CfExp, Recur, OrCom, OrAss, OrRpl, CfOrDst, GorI, GorE, OrGorDst, CfGorDst, ConI,
        DepE, ConE, DepI, FunE, UnfGor, UnfD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Hyp => "hyp",
            ValDef => "ValDef",
            ValUnq => "ValUnq",
            AndI => "and-I",
            AndE => "and-E",
            OrI => "or-I",
            OrE => "or-E",
            NegI => "neg-I",
            NegE => "neg-E",
            Raa => "RAA",
            CfEff => "boxright-Eff",
            CfI => "boxright-I",
            ExFalsoCf => "ex-falso-boxright",
            CfBotE => "boxright-bot-E",
            CfRplA => "boxright-Rpl_A",
            CfRplC => "boxright-Rpl_C",
            CfAndI => "boxright-and-I",
            NegCfE => "neg-boxright-E",
            CfExtr => "boxright-Extr",
            CfExp => "boxright-Exp",
            Recur => "Recur",
            OrCom => "or-Com",
            OrAss => "or-Ass",
            OrRpl => "or-Rpl",
            CfOrDst => "boxright-or-Dst",
            GorI => "vvee-I",
            GorE => "vvee-E",
            OrGorDst => "or-vvee-Dst",
            CfGorDst => "boxright-vvee-Dst",
            ConI => "ConI",
            DepE => "DepE",
            ConE => "ConE",
            DepI => "DepI",
            FunE => "FunE",
            UnfGor => "Unf_vvee",
            UnfD => "Unf_D",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.iter().copied().find(|r| r.name() == s)
    }

    /// Rules that discharge hypotheses; their soundness is a statement about
    /// entailments, not about single premise sets.
    pub fn is_hypothetical(self) -> bool {
        matches!(self, OrE | NegI | Raa | CfRplA | CfRplC | OrRpl | GorE | ConE | DepI | FunE)
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    CoG,
    CovG,
    CodG,
    CovC,
    CodC,
}

impl System {
    pub const ALL: [System; 5] = [System::CoG, System::CovG, System::CodG, System::CovC, System::CodC];

    pub fn name(self) -> &'static str {
        match self {
            System::CoG => "co-g",
            System::CovG => "cov-g",
            System::CodG => "cod-g",
            System::CovC => "cov-c",
            System::CodC => "cod-c",
        }
    }

    pub fn semantics(self) -> Semantics {
        match self {
            System::CoG | System::CovG | System::CodG => Semantics::Generalized,
            System::CovC | System::CodC => Semantics::Causal,
        }
    }

    /// The formula language of the system.
    pub fn language(self) -> Language {
        match self {
            System::CoG => Language::Co,
            System::CovG | System::CovC => Language::Cov,
            System::CodG | System::CodC => Language::Cod,
        }
    }

    pub fn admits(self, f: &Formula) -> bool {
        let l = f.language();
        l == Language::Co || l == self.language()
    }

    pub fn rules(self) -> Vec<Rule> {
        let mut out = CO_RULES.to_vec();
        match self {
            System::CoG => {}
            System::CovG | System::CovC => {
                out.extend(OR_RULES);
                out.extend(GOR_RULES);
            }
            System::CodG | System::CodC => {
                out.extend(OR_RULES);
                out.extend(DEP_RULES);
            }
        }
        match self {
            System::CovC => out.extend([FunE, UnfGor]),
            System::CodC => out.extend([FunE, UnfD]),
            _ => {}
        }
        out
    }

    pub fn has(self, r: Rule) -> bool {
        r == Hyp || self.rules().contains(&r)
    }
}

impl std::str::FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        System::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown system `{s}` (expected co-g, cov-g, cod-g, cov-c or cod-c)")))
    }
}

impl std::fmt::Display for System {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Formula,
    pub premises: Vec<Derivation>,
    /// Labels closed in each premise's subtree, aligned with `premises`.
    pub discharge: Vec<Vec<String>>,
    /// Hypothesis label, for `hyp` leaves.
    pub label: Option<String>,
    /// Rule parameters, e.g. `var` and `k` for ConE.
    pub params: BTreeMap<String, String>,
}

impl Derivation {
    pub fn hyp(label: &str, f: Formula) -> Self {
        Derivation {
            rule: Hyp,
            conclusion: f,
            premises: vec![],
            discharge: vec![],
            label: Some(label.into()),
            params: BTreeMap::new(),
        }
    }

    pub fn node(rule: Rule, conclusion: Formula, premises: Vec<Derivation>) -> Self {
        let n = premises.len();
        Derivation { rule, conclusion, premises, discharge: vec![vec![]; n], label: None, params: BTreeMap::new() }
    }

    pub fn axiom(rule: Rule, conclusion: Formula) -> Self {
        Derivation::node(rule, conclusion, vec![])
    }

    /// Close `labels` in premise `i`.
    pub fn closing(mut self, i: usize, labels: &[&str]) -> Self {
        self.discharge[i] = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn to_value(&self, sig: &Signature) -> Value {
        let mut m = Map::new();
        m.insert("rule".into(), json!(self.rule.name()));
        m.insert("conclusion".into(), json!(self.conclusion.display(sig)));
        if let Some(l) = &self.label {
            m.insert("label".into(), json!(l));
        }
        if !self.params.is_empty() {
            m.insert("params".into(), json!(self.params));
        }
        if self.discharge.iter().any(|d| !d.is_empty()) {
            m.insert("discharge".into(), json!(self.discharge));
        }
        if !self.premises.is_empty() {
            let ps: Vec<Value> = self.premises.iter().map(|p| p.to_value(sig)).collect();
            m.insert("premises".into(), Value::Array(ps));
        }
        Value::Object(m)
    }

    pub fn from_value(sig: &Signature, v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Format(format!("derivation: {msg}"));
        let o = v.as_object().ok_or_else(|| bad("node is not an object"))?;
        for k in o.keys() {
            if !matches!(k.as_str(), "rule" | "conclusion" | "label" | "params" | "discharge" | "premises") {
                return Err(bad(&format!("unknown field `{k}`")));
            }
        }
        let name = o.get("rule").and_then(Value::as_str).ok_or_else(|| bad("missing rule"))?;
        let rule = Rule::from_name(name).ok_or_else(|| bad(&format!("unknown rule `{name}`")))?;
        let text = o.get("conclusion").and_then(Value::as_str).ok_or_else(|| bad("missing conclusion"))?;
        let conclusion = parse(text, sig)?;
        let premises = match o.get("premises") {
            None => vec![],
            Some(Value::Array(a)) => a.iter().map(|p| Derivation::from_value(sig, p)).collect::<Result<_>>()?,
            Some(_) => return Err(bad("premises must be a list")),
        };
        let discharge = match o.get("discharge") {
            None => vec![vec![]; premises.len()],
            Some(d) => {
                let d: Vec<Vec<String>> = serde_json::from_value(d.clone()).map_err(|e| bad(&e.to_string()))?;
                if d.len() != premises.len() {
                    return Err(bad("discharge list must have one entry per premise"));
                }
                d
            }
        };
        let label = match o.get("label") {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(bad("label must be a string")),
        };
        let params = match o.get("params") {
            None => BTreeMap::new(),
            Some(p) => serde_json::from_value(p.clone()).map_err(|e| bad(&e.to_string()))?,
        };
        Ok(Derivation { rule, conclusion, premises, discharge, label, params })
    }
}

/// A derivation file: the signature, the intended system and the tree.
#[derive(Clone, Debug)]
pub struct ProofFile {
    pub signature: Signature,
    pub system: Option<System>,
    pub derivation: Derivation,
}

pub fn proof_from_json(text: &str) -> Result<ProofFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let o = v.as_object().ok_or_else(|| Error::Format("proof file must be an object".into()))?;
    let sig = o.get("signature").ok_or_else(|| Error::Format("proof file needs a signature".into()))?;
    let signature = signature_from_json(&sig.to_string())?;
    let system = match o.get("system") {
        None => None,
        Some(Value::String(s)) => Some(s.parse()?),
        Some(_) => return Err(Error::Format("system must be a string".into())),
    };
    let d = o.get("derivation").ok_or_else(|| Error::Format("proof file needs a derivation".into()))?;
    let derivation = Derivation::from_value(&signature, d)?;
    Ok(ProofFile { signature, system, derivation })
}

pub fn proof_to_json(p: &ProofFile) -> String {
    let sig: Value = serde_json::from_str(&signature_to_json(&p.signature)).expect("signature json");
    let mut m = Map::new();
    m.insert("signature".into(), sig);
    if let Some(s) = p.system {
        m.insert("system".into(), json!(s.name()));
    }
    m.insert("derivation".into(), p.derivation.to_value(&p.signature));
    serde_json::to_string_pretty(&Value::Object(m)).expect("serializable") + "\n"
}
