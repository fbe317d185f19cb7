use ctlab::calculus::{
    check_derivation, golden_derived_rules, proof_from_json, proof_to_json, rule_soundness_fuzz, Derivation,
    ProofFile, Rule, System,
};
use ctlab::charform::{build_leadsto, build_xi};
use ctlab::decision::{decide_entails, decide_valid, star_translate, Decider};
use ctlab::{enumerate_sem_quotient, Formula, GeneralizedTeam, InterventionSpec, Semantics, Signature};

fn sig2() -> Signature {
    Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).unwrap()
}

#[test]
fn golden_derivations_check_and_are_sound() {
    let all = golden_derived_rules().unwrap();
    assert!(all.len() >= 15);
    for g in &all {
        let c = check_derivation(&g.derivation, g.system, &g.signature)
            .unwrap_or_else(|e| panic!("{}: {e}", g.name));
        assert_eq!(c.conclusion, g.conclusion, "{}", g.name);
        let mut open = c.assumptions();
        let mut want = g.assumptions.clone();
        open.sort_by_key(|f| f.display(&g.signature));
        want.sort_by_key(|f| f.display(&g.signature));
        assert_eq!(open, want, "{}: open assumptions", g.name);
        let v = decide_entails(&g.assumptions, &g.conclusion, &g.signature, g.system.semantics()).unwrap();
        assert!(v.holds, "{} is not semantically valid", g.name);
    }
}

#[test]
fn golden_derivations_round_trip_through_json() {
    for g in golden_derived_rules().unwrap() {
        let file = ProofFile { signature: g.signature.clone(), system: Some(g.system), derivation: g.derivation.clone() };
        let text = proof_to_json(&file);
        let back = proof_from_json(&text).unwrap();
        assert_eq!(back.derivation, g.derivation, "{}", g.name);
        assert_eq!(back.system, Some(g.system));
    }
}

#[test]
fn dependence_translation_matches_star() {
    let all = golden_derived_rules().unwrap();
    let fwd = all.iter().find(|g| g.name == "dependence_translation_forward").unwrap();
    let star = star_translate(&fwd.assumptions[0], &fwd.signature).unwrap();
    assert_eq!(fwd.conclusion, star);
    let back = all.iter().find(|g| g.name == "dependence_translation_backward").unwrap();
    assert_eq!(back.assumptions[0], star);
    assert_eq!(back.conclusion, fwd.assumptions[0]);
}

#[test]
fn systems_reject_foreign_rules_and_formulas() {
    let all = golden_derived_rules().unwrap();
    let gor = all.iter().find(|g| g.name == "global_or_commutes").unwrap();
    let e = check_derivation(&gor.derivation, System::CoG, &gor.signature).unwrap_err();
    assert!(e.reason.contains("not part of") || e.reason.contains("language"), "{e}");
    assert!(check_derivation(&gor.derivation, System::CodG, &gor.signature).is_err());
    assert!(check_derivation(&gor.derivation, System::CovC, &gor.signature).is_ok());
    let fune = all.iter().find(|g| g.name == "uniformity_from_fune").unwrap();
    assert!(check_derivation(&fune.derivation, System::CovG, &fune.signature).is_err());
}

#[test]
fn replacement_side_derivations_must_be_closed() {
    let sig = sig2();
    let iv = InterventionSpec::single(0, 1);
    // X=1 []-> Y=0 and an outside Y=0 -> Y=1 do not give X=1 []-> Y=1
    let major = Derivation::hyp("h", Formula::Cf(iv.clone(), Box::new(Formula::eq(1, 0))));
    let side = Derivation::hyp("stray", Formula::eq(1, 1));
    let d = Derivation::node(Rule::CfRplC, Formula::Cf(iv, Box::new(Formula::eq(1, 1))), vec![major, side])
        .closing(1, &["u"]);
    let e = check_derivation(&d, System::CoG, &sig).unwrap_err();
    assert_eq!(e.path, Vec::<usize>::new());
    assert!(e.reason.contains("must be closed"), "{e}");
}

#[test]
fn discharge_must_match_the_rule() {
    let sig = sig2();
    let a = Formula::eq(0, 0);
    // closing a hypothesis the rule does not introduce
    let bot = Derivation::node(
        Rule::NegE,
        Formula::bot(),
        vec![Derivation::hyp("a", Formula::eq(1, 0)), Derivation::hyp("b", Formula::neq(1, 0))],
    );
    let d = Derivation::node(Rule::NegI, Formula::neg(a), vec![bot]).closing(0, &["a"]);
    let e = check_derivation(&d, System::CoG, &sig).unwrap_err();
    assert!(e.reason.contains("hypothesis [a]"), "{e}");
    // a wrong step deep in the tree is located by its path
    let bad = Derivation::node(Rule::AndE, Formula::eq(1, 1), vec![Derivation::hyp("h", Formula::and(Formula::eq(0, 0), Formula::eq(1, 0)))]);
    let top = Derivation::node(Rule::OrI, Formula::or(Formula::eq(1, 1), Formula::eq(0, 0)), vec![bad]);
    let e = check_derivation(&top, System::CoG, &sig).unwrap_err();
    assert_eq!(e.path, vec![0]);
}

#[test]
fn or_elimination_needs_a_co_conclusion() {
    let sig = sig2();
    // X=0 \/ X=1 does not give con(Y), though each disjunct is compatible with it
    let c = Formula::con(1);
    let major = Derivation::hyp("h", Formula::or(Formula::eq(0, 0), Formula::eq(0, 1)));
    let d = Derivation::node(
        Rule::OrE,
        c.clone(),
        vec![major, Derivation::hyp("c", c.clone()), Derivation::hyp("c", c.clone())],
    )
    .closing(1, &["a"])
    .closing(2, &["b"]);
    let e = check_derivation(&d, System::CodG, &sig).unwrap_err();
    assert!(e.reason.contains("CO formula"), "{e}");
}

#[test]
fn every_rule_is_sound_on_random_instances() {
    let sig = sig2();
    for sys in System::ALL {
        for rule in sys.rules() {
            let r = rule_soundness_fuzz(rule, sys, &sig, 60, 7).unwrap();
            assert!(r.sound(), "{rule} in {sys}: {:?}", r.violations);
            if !rule.is_hypothetical() && !matches!(rule, Rule::ValUnq | Rule::ExFalsoCf) {
                assert_eq!(r.applicable, r.trials, "{rule} in {sys}");
            }
        }
    }
}

#[test]
fn recur_is_valid_on_two_variables() {
    let sig = sig2();
    for (a, b) in [(0, 1), (1, 0)] {
        let fwd = build_leadsto(a, b, &sig).unwrap().formula;
        let back = build_leadsto(b, a, &sig).unwrap().formula;
        for sem in [Semantics::Generalized, Semantics::Causal] {
            assert!(decide_entails(std::slice::from_ref(&fwd), &Formula::neg(back.clone()), &sig, sem).unwrap().holds);
        }
    }
}

#[test]
fn two_law_axiom_holds_only_on_causal_teams() {
    let sig = sig2();
    let members = enumerate_sem_quotient(&sig);
    let a = members[0].clone();
    let b = members.iter().find(|m| m.1.canonicalize() != a.1.canonicalize()).unwrap().clone();
    let xi = build_xi(&GeneralizedTeam::new(&sig, [a, b]).unwrap(), &sig).unwrap().formula;
    assert!(decide_valid(&xi, &sig, Semantics::Causal).unwrap());
    assert!(!decide_valid(&xi, &sig, Semantics::Generalized).unwrap());
    let d = Derivation::axiom(Rule::UnfD, xi);
    assert!(check_derivation(&d, System::CodC, &sig).is_ok());
    assert!(check_derivation(&d, System::CodG, &sig).is_err());
    assert!(check_derivation(&d, System::CovC, &sig).is_err());
    let _ = Decider::new(&sig).unwrap();
}
