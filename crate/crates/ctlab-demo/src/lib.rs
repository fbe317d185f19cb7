//! Browser bindings: `check`, `intervene` and `emit` over JSON strings.
//!
//! Every function returns text. Failures come back as a single
//! `error=...` line so the page never has to catch exceptions.

use ctlab::charform::{build_chi, build_leadsto, build_phi, build_theta, build_unf, build_xi};
use ctlab::intervention::intervene_team;
use ctlab::model::io::{embedded_signature, signature_from_json, team_from_json, team_to_json};
use ctlab::{parse, satisfies, InterventionSpec, SatContext, Signature};
use wasm_bindgen::prelude::*;

fn sig_of(sig_json: &str, team_json: &str) -> ctlab::Result<Signature> {
    if !sig_json.trim().is_empty() {
        return signature_from_json(sig_json);
    }
    embedded_signature(team_json)?.ok_or_else(|| ctlab::Error::Invalid("no signature given".into()))
}

fn report(r: ctlab::Result<String>) -> String {
    r.unwrap_or_else(|e| format!("error={e}\n"))
}

/// One `verdict=` line per non-empty line of `formulas`.
#[wasm_bindgen]
pub fn check(sig_json: &str, team_json: &str, formulas: &str) -> String {
    report((|| {
        let sig = sig_of(sig_json, team_json)?;
        let team = team_from_json(&sig, team_json)?;
        let mut out = String::new();
        for line in formulas.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let f = parse(line, &sig)?;
            let v = satisfies(&sig, &team, &f, &SatContext::default())?;
            out.push_str(&format!("formula={} verdict={v}\n", f.display(&sig)));
        }
        Ok(out)
    })())
}

/// The intervened team as JSON. `iv` looks like `X=1, Y=2`.
#[wasm_bindgen]
pub fn intervene(sig_json: &str, team_json: &str, iv: &str) -> String {
    report((|| {
        let sig = sig_of(sig_json, team_json)?;
        let team = team_from_json(&sig, team_json)?;
        let setting = InterventionSpec::parse(iv, &sig)?;
        Ok(team_to_json(&sig, &intervene_team(&team, &setting)?))
    })())
}

/// `which` is phi, theta or xi (from the team), chi or unf (from the
/// signature), or `leadsto X Y`.
#[wasm_bindgen]
pub fn emit(sig_json: &str, team_json: &str, which: &str) -> String {
    report((|| {
        let sig = sig_of(sig_json, team_json)?;
        let team = || team_from_json(&sig, team_json).map(|t| t.generalized());
        let words: Vec<&str> = which.split_whitespace().collect();
        let c = match words.as_slice() {
            ["phi"] => {
                let t = team()?;
                let laws = t.laws();
                let law = laws.iter().next().ok_or_else(|| ctlab::Error::Invalid("team has no law".into()))?;
                if laws.len() > 1 {
                    return Err(ctlab::Error::Invalid("team has more than one law".into()));
                }
                build_phi(law, &sig)?
            }
            ["theta"] => build_theta(&team()?.assignments(), &sig)?,
            ["xi"] => build_xi(&team()?, &sig)?,
            ["chi"] => build_chi(&sig)?,
            ["unf"] => build_unf(&sig)?,
            ["leadsto", x, y] => build_leadsto(sig.var_checked(x)?, sig.var_checked(y)?, &sig)?,
            _ => return Err(ctlab::Error::Invalid(format!("unknown formula `{which}`"))),
        };
        Ok(format!("size={}\nformula={}\n", c.size(), c.formula.display(&sig)))
    })())
}
