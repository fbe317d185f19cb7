//! Helpers shared by the semantics tests and the acceptance harness.
#![allow(dead_code)]

use ctlab::gen::Gen;
use ctlab::intervention::intervene_team;
use ctlab::model::io::{signature_from_json, team_from_json};
use ctlab::semantics::eval_point;
use ctlab::*;
use std::path::PathBuf;
use std::sync::Arc;

pub fn data(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect()
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn sig2() -> Signature {
    Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).unwrap()
}

/// The two signatures of the randomized suites.
pub fn micro_sigs() -> [Signature; 2] {
    [sig2(), Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1", "2"])]).unwrap()]
}

fn sat(sig: &Signature, t: &Team, f: &Formula) -> bool {
    satisfies(sig, t, f, &SatContext::default()).unwrap()
}

/// Each judgment of the worked example: (text, expected, obtained).
pub fn example_judgments() -> Vec<(String, bool, bool)> {
    let sig = signature_from_json(&read("example_sig.json")).unwrap();
    let t = team_from_json(&sig, &read("example_team.json")).unwrap();
    let tx = intervene_team(&t, &InterventionSpec::parse("X=1", &sig).unwrap()).unwrap();
    let cases = [
        ("T", &t, "(X=1) []-> Y=2", true),
        ("T", &t, "dep(Y;Z)", true),
        ("T_X=1", &tx, "dep(Y;Z)", false),
        ("T", &t, "Y!=2 \\/ Y=2", true),
        ("T", &t, "Y!=2 \\\\/ Y=2", false),
        ("T", &t, "X=1 => Y=2", true),
    ];
    cases
        .into_iter()
        .map(|(name, team, text, want)| {
            let f = parse(text, &sig).unwrap();
            (format!("{name} |= {text}"), want, sat(&sig, team, &f))
        })
        .collect()
}

fn languages() -> [Language; 3] {
    [Language::Co, Language::Cov, Language::Cod]
}

/// Same members, every law replaced by its canonical ∼-representative.
fn canonical_g(sig: &Signature, t: &GeneralizedTeam) -> GeneralizedTeam {
    let m = t.members().iter().map(|(s, f)| (s.clone(), Arc::new(f.canonicalize().into_system())));
    GeneralizedTeam::new(sig, m).unwrap()
}

fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0u32..1 << items.len())
        .map(|k| (0..items.len()).filter(|i| k >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect()
}

/// One (team, formula) pair of the closure suite. Checks the empty team,
/// downward closure and ≈-invariance for both team kinds, plus flatness and
/// union closure when the formula is in CO.
pub fn closure_case(sig: &Signature, seed: u64) -> std::result::Result<(), String> {
    let mut g = Gen::new(sig, seed);
    let f = g.formula(languages()[(seed % 3) as usize], 3);
    let text = f.display(sig);
    let fail = |what: &str| Err(format!("{what}: {text} (seed {seed})"));

    if !sat(sig, &Team::Generalized(GeneralizedTeam::empty()), &f) || !sat(sig, &Team::Causal(CausalTeam::empty()), &f) {
        return fail("empty team");
    }

    // generalized
    let t = g.generalized_team(4, 2);
    let whole = sat(sig, &Team::Generalized(t.clone()), &f);
    let members: Vec<_> = t.members().iter().cloned().collect();
    for sub in subsets(&members) {
        let s = GeneralizedTeam::new(sig, sub).unwrap();
        if whole && !sat(sig, &Team::Generalized(s), &f) {
            return fail("downward closure (g)");
        }
    }
    if sat(sig, &Team::Generalized(canonical_g(sig, &t)), &f) != whole {
        return fail("equivalence invariance (g)");
    }

    // causal
    let c = g.causal_team(4);
    let cwhole = sat(sig, &Team::Causal(c.clone()), &f);
    let rows: Vec<Assignment> = c.rows().iter().cloned().collect();
    for sub in subsets(&rows) {
        if cwhole && !sat(sig, &Team::Causal(c.subteam(sub)), &f) {
            return fail("downward closure (c)");
        }
    }
    if let Some(law) = c.law() {
        let canon = Arc::new(law.canonicalize().into_system());
        let c2 = CausalTeam::new(sig, rows.clone(), canon).unwrap();
        if sat(sig, &Team::Causal(c2), &f) != cwhole {
            return fail("equivalence invariance (c)");
        }
    }

    if f.is_co() {
        let each = members.iter().all(|(s, law)| eval_point(s, law, &f));
        if each != whole {
            return fail("flatness (g)");
        }
        if let Some(law) = c.law() {
            if rows.iter().all(|s| eval_point(s, law, &f)) != cwhole {
                return fail("flatness (c)");
            }
        }
        // union with a second team
        let u = g.generalized_team(4, 2);
        if whole && sat(sig, &Team::Generalized(u.clone()), &f) && !sat(sig, &Team::Generalized(t.union(&u)), &f) {
            return fail("union closure (g)");
        }
        if let Some(law) = c.law() {
            // the rest of the law's assignments, under a similar law
            let canon = Arc::new(law.canonicalize().into_system());
            let others: Vec<Assignment> = law.compatible_assignments(sig).unwrap();
            let d = CausalTeam::new(sig, others, canon).unwrap();
            let dsat = sat(sig, &Team::Causal(d.clone()), &f);
            let joined = union_causal_teams(sig, &c, &d).unwrap();
            if cwhole && dsat && !sat(sig, &Team::Causal(joined), &f) {
                return fail("union closure (c)");
            }
        }
    }
    Ok(())
}

/// A random recursive law compatible with every row, falling back to the
/// law without endogenous variables.
fn compatible_law(g: &mut Gen, rows: &[Assignment]) -> FunctionSystem {
    for _ in 0..40 {
        let f = g.law();
        if rows.iter().all(|s| f.is_compatible(s)) {
            return f;
        }
    }
    FunctionSystem::exogenous(g.signature())
}

/// A counterfactual-free formula keeps its verdict when the laws of a team
/// are swapped for arbitrary compatible ones.
pub fn law_swap_case(sig: &Signature, seed: u64) -> std::result::Result<(), String> {
    let mut g = Gen::new(sig, seed ^ 0x5eed);
    let lang = languages()[(seed % 3) as usize];
    let f = (0..50).map(|_| g.formula(lang, 3)).find(Formula::is_cf_free).unwrap_or_else(|| g.eq());
    let text = f.display(sig);

    let t = g.generalized_team(5, 3);
    let swapped = t.members().iter().map(|(s, _)| (s.clone(), Arc::new(compatible_law(&mut g, std::slice::from_ref(s)))));
    let u = GeneralizedTeam::new(sig, swapped).unwrap();
    if u.assignments() != t.assignments() {
        return Err(format!("swap changed the rows (seed {seed})"));
    }
    if sat(sig, &Team::Generalized(t), &f) != sat(sig, &Team::Generalized(u), &f) {
        return Err(format!("generalized: {text} (seed {seed})"));
    }

    let c = g.causal_team(5);
    if c.is_empty() {
        return Ok(());
    }
    let rows: Vec<Assignment> = c.rows().iter().cloned().collect();
    let d = CausalTeam::new(sig, rows.clone(), Arc::new(compatible_law(&mut g, &rows))).unwrap();
    if sat(sig, &Team::Causal(c), &f) != sat(sig, &Team::Causal(d), &f) {
        return Err(format!("causal: {text} (seed {seed})"));
    }
    Ok(())
}
