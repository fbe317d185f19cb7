mod common;

use common::*;
use ctlab::model::io::{signature_from_json, team_from_json, team_to_json};
use ctlab::intervention::intervene_team;
use ctlab::*;
use proptest::prelude::*;

#[test]
fn worked_example_judgments() {
    for (what, want, got) in example_judgments() {
        assert_eq!(got, want, "{what}");
    }
}

#[test]
fn interventions_reproduce_the_frozen_teams() {
    for (sig, team, iv, want) in [
        ("example_sig.json", "example_team.json", "X=1", "example_team_do_x1.json"),
        ("gct_sig.json", "gct_team.json", "Y=1", "gct_team_do_y1.json"),
    ] {
        let sig = signature_from_json(&read(sig)).unwrap();
        let t = team_from_json(&sig, &read(team)).unwrap();
        let out = intervene_team(&t, &InterventionSpec::parse(iv, &sig).unwrap()).unwrap();
        assert_eq!(team_to_json(&sig, &out), read(want));
    }
}

#[test]
fn intervened_rows_are_the_expected_ones() {
    let sig = signature_from_json(&read("example_sig.json")).unwrap();
    let t = team_from_json(&sig, &read("example_team_do_x1.json")).unwrap();
    let want = [sig.assignment(&[("U", "0"), ("X", "1"), ("Y", "2"), ("Z", "5")]).unwrap(), sig.assignment(&[("U", "1"), ("X", "1"), ("Y", "2"), ("Z", "6")]).unwrap()];
    assert_eq!(t.generalized().assignments(), want.into_iter().collect());

    // under do(Y=1) the F row goes to Z=4 and the two G rows to Z=3 and Z=2
    let sig = signature_from_json(&read("gct_sig.json")).unwrap();
    let before = team_from_json(&sig, &read("gct_team.json")).unwrap().generalized();
    let after = team_from_json(&sig, &read("gct_team_do_y1.json")).unwrap().generalized();
    let row = |x: &str, z: &str| sig.assignment(&[("X", x), ("Y", "1"), ("Z", z)]).unwrap();
    let law_of = |t: &GeneralizedTeam, s: &Assignment| t.members().iter().find(|m| &m.0 == s).unwrap().1.clone();
    assert_eq!(after.assignments(), [row("2", "4"), row("2", "3"), row("1", "2")].into_iter().collect());
    assert!(law_of(&after, &row("2", "3")).similar(&law_of(&after, &row("1", "2"))));
    assert!(!law_of(&after, &row("2", "3")).similar(&law_of(&after, &row("2", "4"))));
    assert_eq!(before.laws().len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn closure_properties(seed in any::<u64>(), which in 0usize..2) {
        let sig = &micro_sigs()[which];
        prop_assert_eq!(closure_case(sig, seed), Ok(()));
    }

    #[test]
    fn counterfactual_free_formulas_ignore_the_laws(seed in any::<u64>(), which in 0usize..2) {
        let sig = &micro_sigs()[which];
        prop_assert_eq!(law_swap_case(sig, seed), Ok(()));
    }
}

#[test]
fn generated_formulas_round_trip_through_text() {
    for sig in micro_sigs() {
        let mut g = gen::Gen::new(&sig, 3);
        for i in 0..200 {
            let f = g.formula([Language::Co, Language::Cov, Language::Cod][i % 3], 4);
            let text = f.display(&sig);
            assert_eq!(parse(&text, &sig).unwrap(), f, "{text}");
        }
    }
}
