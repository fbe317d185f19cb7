//! JSON files for signatures, teams and team classes.
//!
//! Output is deterministic: rows are sorted, functions get ids `F1`, `F2`, ...
//! in order of first appearance among the sorted rows, and law tables list
//! parent tuples lexicographically.

use super::{
    Assignment, CausalTeam, FunctionSystem, GeneralizedTeam, Law, Signature, Team, Val, Var,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SigFile {
    variables: Vec<VarEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarEntry {
    name: String,
    range: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Causal,
    Generalized,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TeamFile {
    /// Optional inline signature, so a team file can stand alone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signature: Option<SigFile>,
    kind: Kind,
    #[serde(default)]
    functions: Vec<FunctionEntry>,
    #[serde(default)]
    rows: Vec<RowEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionEntry {
    id: String,
    laws: Vec<LawEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LawEntry {
    var: String,
    parents: Vec<String>,
    table: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowEntry {
    values: Map<String, Value>,
    function: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassFile {
    kind: Kind,
    teams: Vec<Value>,
}

fn fmt_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn signature_from_json(text: &str) -> Result<Signature> {
    let f: SigFile = serde_json::from_str(text).map_err(fmt_err)?;
    Signature::new(f.variables.into_iter().map(|v| (v.name, v.range)).collect())
}

/// The signature embedded in a team (or class) file, if any.
pub fn embedded_signature(text: &str) -> Result<Option<Signature>> {
    let v: Value = serde_json::from_str(text).map_err(fmt_err)?;
    match v.get("signature") {
        None => Ok(None),
        Some(s) => {
            let f: SigFile = serde_json::from_value(s.clone()).map_err(fmt_err)?;
            Signature::new(f.variables.into_iter().map(|v| (v.name, v.range)).collect()).map(Some)
        }
    }
}

pub fn signature_to_json(sig: &Signature) -> String {
    let f = SigFile {
        variables: sig
            .vars()
            .map(|v| VarEntry { name: sig.name(v).into(), range: sig.range(v).to_vec() })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("serializable") + "\n"
}

fn parse_law(sig: &Signature, e: &LawEntry) -> Result<(Var, Law)> {
    let v = sig.var_checked(&e.var)?;
    let mut parents = Vec::new();
    for p in &e.parents {
        let p = sig.var_checked(p)?;
        if parents.contains(&p) {
            return Err(Error::Law(format!("repeated parent of `{}`", e.var)));
        }
        parents.push(p);
    }
    let mut sorted = parents.clone();
    sorted.sort_unstable();
    let mut entries: BTreeMap<Vec<Val>, Val> = BTreeMap::new();
    for row in &e.table {
        if row.len() != parents.len() + 1 {
            return Err(Error::Law(format!("table row of `{}` has the wrong width", e.var)));
        }
        let mut key = vec![0; parents.len()];
        for (i, &p) in parents.iter().enumerate() {
            let pos = sorted.iter().position(|&q| q == p).unwrap();
            key[pos] = sig.value_checked(p, &row[i])?;
        }
        let out = sig.value_checked(v, &row[parents.len()])?;
        if entries.insert(key, out).is_some() {
            return Err(Error::Law(format!("table of `{}` repeats a parent tuple", e.var)));
        }
    }
    let mut table = Vec::new();
    for t in sig.tuples(&sorted) {
        match entries.get(&t) {
            Some(&x) => table.push(x),
            None => return Err(Error::Law(format!("table of `{}` is not total", e.var))),
        }
    }
    Ok((v, Law::new(sig, v, sorted, table)?))
}

fn parse_function(sig: &Signature, e: &FunctionEntry) -> Result<FunctionSystem> {
    let mut laws = vec![None; sig.len()];
    for l in &e.laws {
        let (v, law) = parse_law(sig, l)?;
        if laws[v].is_some() {
            return Err(Error::Law(format!("two laws for `{}` in `{}`", l.var, e.id)));
        }
        laws[v] = Some(law);
    }
    FunctionSystem::new(sig, laws)
}

fn parse_assignment(sig: &Signature, values: &Map<String, Value>) -> Result<Assignment> {
    let mut vals: Vec<Option<Val>> = vec![None; sig.len()];
    for (name, value) in values {
        let v = sig.var_checked(name)?;
        let tok = match value {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            other => return Err(Error::Format(format!("value of `{name}` must be a string, got {other}"))),
        };
        vals[v] = Some(sig.value_checked(v, &tok)?);
    }
    let vals = vals
        .into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| Error::Format(format!("row has no value for `{}`", sig.name(v)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Assignment(vals))
}

fn team_from_file(sig: &Signature, f: TeamFile) -> Result<Team> {
    let mut registry: BTreeMap<String, Arc<FunctionSystem>> = BTreeMap::new();
    for e in &f.functions {
        let sys = Arc::new(parse_function(sig, e)?);
        if registry.insert(e.id.clone(), sys).is_some() {
            return Err(Error::Format(format!("duplicate function id `{}`", e.id)));
        }
    }
    let mut members = Vec::new();
    for r in &f.rows {
        let s = parse_assignment(sig, &r.values)?;
        let law = registry
            .get(&r.function)
            .ok_or_else(|| Error::Format(format!("unknown function id `{}`", r.function)))?;
        members.push((s, law.clone()));
    }
    match f.kind {
        Kind::Generalized => Ok(Team::Generalized(GeneralizedTeam::new(sig, members)?)),
        Kind::Causal => {
            let ids: BTreeSet<&str> = f.rows.iter().map(|r| r.function.as_str()).collect();
            if ids.len() > 1 {
                return Err(Error::Format("a causal team must use exactly one function".into()));
            }
            match members.first() {
                None => Ok(Team::Causal(CausalTeam::empty())),
                Some((_, law)) => {
                    let law = law.clone();
                    Ok(Team::Causal(CausalTeam::new(sig, members.into_iter().map(|m| m.0), law)?))
                }
            }
        }
    }
}

pub fn team_from_json(sig: &Signature, text: &str) -> Result<Team> {
    let f: TeamFile = serde_json::from_str(text).map_err(fmt_err)?;
    team_from_file(sig, f)
}

fn law_entry(sig: &Signature, v: Var, law: &Law) -> LawEntry {
    let table = sig
        .tuples(law.parents())
        .map(|t| {
            let mut row: Vec<String> = law
                .parents()
                .iter()
                .zip(&t)
                .map(|(&p, &x)| sig.token(p, x).to_string())
                .collect();
            row.push(sig.token(v, law.apply(&t)).to_string());
            row
        })
        .collect();
    LawEntry {
        var: sig.name(v).into(),
        parents: law.parents().iter().map(|&p| sig.name(p).to_string()).collect(),
        table,
    }
}

fn function_entry(sig: &Signature, id: String, f: &FunctionSystem) -> FunctionEntry {
    let laws = sig
        .vars()
        .filter_map(|v| f.law(v).map(|l| law_entry(sig, v, l)))
        .collect();
    FunctionEntry { id, laws }
}

fn values_map(sig: &Signature, s: &Assignment) -> Map<String, Value> {
    sig.vars()
        .map(|v| (sig.name(v).to_string(), Value::String(sig.token(v, s.get(v)).into())))
        .collect()
}

fn team_file(sig: &Signature, kind: Kind, members: &BTreeSet<(Assignment, Arc<FunctionSystem>)>) -> TeamFile {
    let mut ids: Vec<(&FunctionSystem, String)> = Vec::new();
    let mut functions = Vec::new();
    let mut rows = Vec::new();
    for (s, f) in members {
        let id = match ids.iter().find(|(g, _)| *g == &**f) {
            Some((_, id)) => id.clone(),
            None => {
                let id = format!("F{}", ids.len() + 1);
                functions.push(function_entry(sig, id.clone(), f));
                ids.push((f, id.clone()));
                id
            }
        };
        rows.push(RowEntry { values: values_map(sig, s), function: id });
    }
    TeamFile { signature: None, kind, functions, rows }
}

fn to_file(sig: &Signature, team: &Team) -> TeamFile {
    match team {
        Team::Causal(t) => team_file(sig, Kind::Causal, t.to_generalized().members()),
        Team::Generalized(t) => team_file(sig, Kind::Generalized, t.members()),
    }
}

pub fn team_to_json(sig: &Signature, team: &Team) -> String {
    serde_json::to_string_pretty(&to_file(sig, team)).expect("serializable") + "\n"
}

/// A finite class of teams of one kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub kind: Kind,
    pub teams: Vec<Team>,
}

pub fn class_from_json(sig: &Signature, text: &str) -> Result<ClassData> {
    let f: ClassFile = serde_json::from_str(text).map_err(fmt_err)?;
    let mut teams = Vec::new();
    for v in f.teams {
        let tf: TeamFile = serde_json::from_value(v).map_err(fmt_err)?;
        if tf.kind != f.kind {
            return Err(Error::Format("team kind differs from class kind".into()));
        }
        teams.push(team_from_file(sig, tf)?);
    }
    Ok(ClassData { kind: f.kind, teams })
}

pub fn class_to_json(sig: &Signature, class: &ClassData) -> String {
    let teams = class
        .teams
        .iter()
        .map(|t| serde_json::to_value(to_file(sig, t)).expect("serializable"))
        .collect();
    let f = ClassFile { kind: class.kind, teams };
    serde_json::to_string_pretty(&f).expect("serializable") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIG: &str = r#"{"variables":[{"name":"X","range":["0","1"]},{"name":"Y","range":["1","2"]}]}"#;

    #[test]
    fn team_round_trip() {
        let sig = signature_from_json(SIG).unwrap();
        let text = r#"{"kind":"causal","functions":[{"id":"A","laws":[
            {"var":"Y","parents":["X"],"table":[["1","2"],["0","1"]]}]}],
            "rows":[{"values":{"Y":"2","X":"1"},"function":"A"},{"values":{"X":"0","Y":"1"},"function":"A"}]}"#;
        let t = team_from_json(&sig, text).unwrap();
        let out = team_to_json(&sig, &t);
        assert!(out.contains("\"F1\""));
        assert_eq!(team_from_json(&sig, &out).unwrap(), t);
        assert_eq!(team_to_json(&sig, &team_from_json(&sig, &out).unwrap()), out);
    }

    #[test]
    fn rejects_incompatible_rows_and_partial_tables() {
        let sig = signature_from_json(SIG).unwrap();
        let bad_row = r#"{"kind":"causal","functions":[{"id":"A","laws":[
            {"var":"Y","parents":["X"],"table":[["1","2"],["0","1"]]}]}],
            "rows":[{"values":{"Y":"1","X":"1"},"function":"A"}]}"#;
        assert!(matches!(team_from_json(&sig, bad_row), Err(Error::Incompatible(_))));
        let partial = r#"{"kind":"causal","functions":[{"id":"A","laws":[
            {"var":"Y","parents":["X"],"table":[["1","2"]]}]}],"rows":[]}"#;
        assert!(matches!(team_from_json(&sig, partial), Err(Error::Law(_))));
    }

    #[test]
    fn empty_causal_team_drops_its_law() {
        let sig = signature_from_json(SIG).unwrap();
        let text = r#"{"kind":"causal","functions":[{"id":"A","laws":[]}],"rows":[]}"#;
        let t = team_from_json(&sig, text).unwrap();
        assert_eq!(t, Team::Causal(CausalTeam::empty()));
    }
}
