//! One PASS/FAIL line per acceptance criterion, with its time budget.

mod common;

use common::*;
use ctlab::calculus::{check_derivation, golden_derived_rules, rule_soundness_fuzz, System};
use ctlab::charform::*;
use ctlab::decision::{instantiations, normal_disjuncts, resolutions, Decider};
use ctlab::gen::Gen;
use ctlab::intervention::intervene_team;
use ctlab::model::io::{signature_from_json, team_from_json, team_to_json, Kind};
use ctlab::synthesis::{ClosureMode, Synth, DEFAULT_CAP};
use ctlab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = std::result::Result<String, String>;

/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn golden_interventions() -> Outcome {
    for (sig, team, iv, want) in [
        ("example_sig.json", "example_team.json", "X=1", "example_team_do_x1.json"),
        ("gct_sig.json", "gct_team.json", "Y=1", "gct_team_do_y1.json"),
    ] {
        let sig = signature_from_json(&read(sig)).map_err(e)?;
        let t = team_from_json(&sig, &read(team)).map_err(e)?;
        let out = intervene_team(&t, &InterventionSpec::parse(iv, &sig).map_err(e)?).map_err(e)?;
        ensure(team_to_json(&sig, &out) == read(want), || format!("{team} do({iv}) differs from {want}"))?;
    }
    let sig = signature_from_json(&read("example_sig.json")).map_err(e)?;
    let rows = team_from_json(&sig, &read("example_team_do_x1.json")).map_err(e)?.generalized().assignments();
    let text: Vec<String> = rows
        .iter()
        .map(|r| sig.vars().map(|v| sig.token(v, r.get(v))).collect::<Vec<_>>().join(","))
        .collect();
    ensure(text == ["0,1,2,5", "1,1,2,6"], || format!("rows {text:?}"))?;
    Ok("2 teams byte-exact".into())
}

fn golden_satisfaction() -> Outcome {
    let all = example_judgments();
    for (what, want, got) in &all {
        ensure(want == got, || format!("{what}: expected {want}, got {got}"))?;
    }
    Ok(format!("{} judgments", all.len()))
}

fn seeds(n: usize, salt: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(salt);
    (0..n).map(|_| rng.gen()).collect()
}

fn closure_suite() -> Outcome {
    let sigs = micro_sigs();
    let mut n = 0;
    for (i, seed) in seeds(1000, 3).into_iter().enumerate() {
        closure_case(&sigs[i % 2], seed)?;
        n += 1;
    }
    Ok(format!("{n} pairs"))
}

fn phi_characterization() -> Outcome {
    let sig = sig2();
    let u = Universe::new(&sig).map_err(e)?;
    ensure(u.len() <= 12, || format!("|Sem| = {}", u.len()))?;
    let masks = u.masks(u.len());
    for f in u.classes() {
        let t = u.table(&build_phi(f, &sig).map_err(e)?.formula, u.len());
        for &m in &masks {
            let oracle = u.team_of(m).laws().iter().all(|g| g.similar(f));
            ensure(t.get(m) == oracle, || format!("mask {m:b}"))?;
        }
    }
    Ok(format!("{} classes x {} teams, |Sem|={}", u.classes().len(), masks.len(), u.len()))
}

fn theta_chi_xi() -> Outcome {
    let sig = sig2();
    let u = Universe::new(&sig).map_err(e)?;
    let n = u.len();
    let masks = u.masks(n);
    let teams: Vec<GeneralizedTeam> = masks.iter().map(|&m| u.team_of(m)).collect();
    let rows: Vec<BTreeSet<Assignment>> = teams.iter().map(GeneralizedTeam::assignments).collect();

    let a = enumerate_assignments(&sig);
    for k in 0u32..1 << a.len() {
        let set: BTreeSet<Assignment> = (0..a.len()).filter(|i| k >> i & 1 == 1).map(|i| a[i].clone()).collect();
        let t = u.table(&build_theta(&set, &sig).map_err(e)?.formula, n);
        for (i, &m) in masks.iter().enumerate() {
            ensure(t.get(m) == rows[i].is_subset(&set), || format!("Theta {k:b} on {m:b}"))?;
        }
    }
    let chi = u.table(&build_chi(&sig).map_err(e)?.formula, n);
    for (i, &m) in masks.iter().enumerate() {
        ensure(chi.get(m) == (teams[i].quotient_cardinality() <= 1), || format!("chi on {m:b}"))?;
    }
    for k in 0..=3 {
        let t = u.table(&build_chi_k(&sig, k).map_err(e)?.formula, n);
        for (i, &m) in masks.iter().enumerate() {
            ensure(t.get(m) == (teams[i].quotient_cardinality() <= k as usize), || format!("chi_{k} on {m:b}"))?;
        }
    }
    // T ⋠ S coincides with mask inclusion on Sem/∼; confirm on a sample, then
    // use inclusion for the full sweep
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20_000 {
        let (i, j) = (rng.gen_range(0..masks.len()), rng.gen_range(0..masks.len()));
        ensure(teams[i].preceq(&teams[j]) == (masks[i] & !masks[j] == 0), || format!("preceq {i} {j}"))?;
    }
    let mut xis = 0;
    for (i, &tm) in masks.iter().enumerate().filter(|(_, &m)| m != 0) {
        let t = u.table(&build_xi(&teams[i], &sig).map_err(e)?.formula, n);
        for &sm in &masks {
            ensure(t.get(sm) == (tm & !sm != 0), || format!("Xi^{tm:b} on {sm:b}"))?;
        }
        xis += 1;
    }
    Ok(format!("Theta x{}, chi, chi_0..3, Xi x{xis} over {} teams", 1 << a.len(), masks.len()))
}

fn normal_forms() -> Outcome {
    let sig = sig2();
    let u = Universe::new(&sig).map_err(e)?;
    let mut g = Gen::new(&sig, 17);
    let (mut r, mut i) = (0, 0);
    for k in 0..50 {
        let (phi, set) = if k % 2 == 0 {
            let phi = g.formula(Language::Cov, 3);
            let d = resolutions(&phi).map_err(e)?;
            r += 1;
            (phi, d)
        } else {
            let phi = g.formula(Language::Cod, 3);
            let d = instantiations(&phi, &sig).map_err(e)?;
            i += 1;
            (phi, d)
        };
        ensure(set.items().iter().all(Formula::is_co), || format!("non-CO disjunct for {}", phi.display(&sig)))?;
        for sem in [Semantics::Generalized, Semantics::Causal] {
            ensure(u.equivalent_bounded(&phi, &set.to_formula(), sem, u.len()), || {
                format!("{sem:?}: {}", phi.display(&sig))
            })?;
        }
        // the combined entry point agrees
        let nd = normal_disjuncts(&phi, &sig).map_err(e)?;
        ensure(u.equivalent_bounded(&phi, &nd.to_formula(), Semantics::Generalized, u.len()), || phi.display(&sig))?;
    }
    Ok(format!("{r} resolutions, {i} instantiations"))
}

fn disjunction_property() -> Outcome {
    let sig = sig2();
    let d = Decider::new(&sig).map_err(e)?;
    let mut g = Gen::new(&sig, 23);
    let langs = [Language::Co, Language::Cov, Language::Cod];
    let mut premise = 0;
    for k in 0..100 {
        let delta: Vec<Formula> = (0..1 + k % 3).map(|_| g.co(2)).collect();
        let mut phi = g.formula(langs[k % 3], 2);
        let psi = g.formula(langs[(k + 1) % 3], 2);
        if k % 2 == 0 {
            // weaken a premise so that the global disjunction is entailed
            phi = Formula::or(delta[0].clone(), phi);
        }
        let rep = d.disjunction_property(&delta, &phi, &psi).map_err(e)?;
        ensure(rep.holds(), || format!("case {k}: {}", phi.display(&sig)))?;
        // an unsatisfiable Δ entails everything; count only the cases that say something
        let consistent = !d.entails(&delta, &Formula::bot(), Semantics::Generalized).map_err(e)?.holds;
        premise += (rep.premise && consistent) as usize;
    }
    ensure(premise >= 25, || format!("only {premise} informative cases"))?;
    let unf = build_unf(&sig).map_err(e)?.formula;
    ensure(d.valid(&unf, Semantics::Causal).map_err(e)?, || "unf is not c-valid".into())?;
    let fam = phi_family(&sig).map_err(e)?;
    ensure(fam.len() >= 2, || "one class".into())?;
    for (_, phi) in &fam {
        ensure(!d.valid(phi, Semantics::Causal).map_err(e)?, || "a single Phi is c-valid".into())?;
    }
    Ok(format!("100 cases ({premise} informative), c-failure over {} classes", fam.len()))
}

fn collapse() -> Outcome {
    let sig = sig2();
    let u = Universe::new(&sig).map_err(e)?;
    let d = Decider::new(&sig).map_err(e)?;
    let phis: Vec<Formula> = phi_family(&sig).map_err(e)?.into_iter().map(|(_, f)| f).collect();
    for (i, a) in phis.iter().enumerate() {
        for b in &phis[i + 1..] {
            ensure(d.incompatible(a, b).map_err(e)?, || "compatible pair".into())?;
        }
    }
    let gor = Formula::big_gor(phis.clone());
    let tor = Formula::big_or(phis);
    ensure(u.equivalent_bounded(&gor, &tor, Semantics::Causal, u.len()), || "not c-equivalent".into())?;
    let m = u.counterexample(std::slice::from_ref(&tor), &gor, Semantics::Generalized, u.len()).ok_or("no g-counterexample")?;
    // confirm with the direct evaluator
    let t = Team::Generalized(u.team_of(m));
    let ctx = SatContext::default();
    ensure(satisfies(&sig, &t, &tor, &ctx).map_err(e)? && !satisfies(&sig, &t, &gor, &ctx).map_err(e)?, || {
        "counterexample rejected".into()
    })?;
    Ok(format!("g-counterexample with {} members", m.count_ones()))
}

fn decision_agreement() -> Outcome {
    let sig = sig2();
    let u = Universe::new(&sig).map_err(e)?;
    let d = Decider::new(&sig).map_err(e)?;
    let mut g = Gen::new(&sig, 29);
    let langs = [Language::Co, Language::Cov, Language::Cod];
    let mut seen = [0usize; 2];
    for sem in [Semantics::Generalized, Semantics::Causal] {
        for i in 0..200 {
            let lang = langs[i % 3];
            let gamma: Vec<Formula> = (0..i % 3).map(|_| g.formula(lang, 2)).collect();
            let psi = g.formula(lang, 2);
            let v = d.entails(&gamma, &psi, sem).map_err(e)?;
            ensure(v.holds == u.entails_bounded(&gamma, &psi, sem, u.len()), || format!("{sem:?}: {}", psi.display(&sig)))?;
            seen[v.holds as usize] += 1;
        }
    }
    ensure(seen[0] >= 20 && seen[1] >= 20, || format!("verdicts {seen:?}"))?;
    let goldens = golden_derived_rules().map_err(e)?;
    for gd in &goldens {
        let v = Decider::new(&gd.signature).map_err(e)?.entails(&gd.assumptions, &gd.conclusion, gd.system.semantics()).map_err(e)?;
        ensure(v.holds, || format!("{} is not valid", gd.name))?;
    }
    Ok(format!("400 instances ({} true, {} false), {} derived rules valid", seen[1], seen[0], goldens.len()))
}

fn calculus() -> Outcome {
    let goldens = golden_derived_rules().map_err(e)?;
    for gd in &goldens {
        check_derivation(&gd.derivation, gd.system, &gd.signature).map_err(|err| format!("{}: {err}", gd.name))?;
    }
    let sig = sig2();
    let mut runs = 0;
    for sys in System::ALL {
        for rule in sys.rules() {
            let r = rule_soundness_fuzz(rule, sys, &sig, 200, 11).map_err(e)?;
            ensure(r.sound(), || format!("{rule} in {sys}: {:?}", r.violations))?;
            runs += 1;
        }
    }
    let d = Decider::new(&sig).map_err(e)?;
    for (a, b) in [(0, 1), (1, 0)] {
        let fwd = build_leadsto(a, b, &sig).map_err(e)?.formula;
        let back = build_leadsto(b, a, &sig).map_err(e)?.formula;
        for sem in [Semantics::Generalized, Semantics::Causal] {
            ensure(d.entails(std::slice::from_ref(&fwd), &Formula::neg(back.clone()), sem).map_err(e)?.holds, || "Recur".into())?;
        }
    }
    Ok(format!("{} goldens, {runs} rule/system pairs x 200 trials", goldens.len()))
}

fn synthesis() -> Outcome {
    let sig = sig2();
    let s = Synth::new(&sig, DEFAULT_CAP).map_err(e)?;
    let n = s.universe().len();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let kind_of = |i: usize| if i.is_multiple_of(2) { Kind::Generalized } else { Kind::Causal };
    let sem_of = |k: Kind| if k == Kind::Causal { Semantics::Causal } else { Semantics::Generalized };
    for i in 0..20 {
        let kind = kind_of(i);
        let dom = s.universe().domain(sem_of(kind), n);
        let gens: Vec<u64> = (0..1 + i % 4).map(|_| dom[rng.gen_range(0..dom.len())]).collect();
        let k = s.close_under_succeq(&s.class_of_masks(kind, gens)).map_err(e)?;
        ensure(s.check_closure(&k, ClosureMode::DownwardEquiv).map_err(e)?, || format!("cod class {i} not closed"))?;
        let phi = s.synthesize_cod(&k).map_err(e)?;
        ensure(s.verify_defines(&phi, &k).map_err(e)?, || format!("cod class {i}"))?;
    }
    for i in 0..20 {
        let kind = kind_of(i);
        let q: u64 = rng.gen_range(0..1u64 << n);
        let masks: Vec<u64> = s.universe().domain(sem_of(kind), n).into_iter().filter(|m| m & !q == 0).collect();
        let k = s.class_of_masks(kind, masks);
        ensure(s.check_closure(&k, ClosureMode::Flat).map_err(e)?, || format!("co class {i} not flat"))?;
        let phi = s.synthesize_co(&k).map_err(e)?;
        ensure(phi.is_co() && s.verify_defines(&phi, &k).map_err(e)?, || format!("co class {i}"))?;
    }
    Ok("20 cod and 20 co classes".into())
}

fn law_swaps() -> Outcome {
    let sigs = micro_sigs();
    for (i, seed) in seeds(500, 37).into_iter().enumerate() {
        law_swap_case(&sigs[i % 2], seed)?;
    }
    Ok("500 cases".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("golden interventions", 1, golden_interventions),
        ("golden satisfaction", 1, golden_satisfaction),
        ("closure suite", 30, closure_suite),
        ("Phi characterization", 60, phi_characterization),
        ("Theta/chi/chi_k/Xi characterizations", 60, theta_chi_xi),
        ("normal forms", 60, normal_forms),
        ("disjunction property", 30, disjunction_property),
        ("collapse", 30, collapse),
        ("decision procedure agreement", 120, decision_agreement),
        ("calculus", 120, calculus),
        ("synthesis round-trip", 180, synthesis),
        ("counterfactual-free law swaps", 30, law_swaps),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let out = match out {
            Ok(d) if took > Duration::from_secs(*budget) => Err(format!("{d}; over the {budget} s budget")),
            o => o,
        };
        let (tag, detail) = match &out {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("{tag} {:>2} {name} ({:.2} s): {detail}", i + 1, took.as_secs_f64());
        failed += out.is_err() as usize;
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
