use ctlab::charform::{build_phi, build_unf, phi_family};
use ctlab::decision::*;
use ctlab::gen::Gen;
use ctlab::*;

fn sig() -> Signature {
    Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).unwrap()
}

#[test]
fn agrees_with_exhaustive_oracle() {
    let sig = sig();
    let u = Universe::new(&sig).unwrap();
    let d = Decider::new(&sig).unwrap();
    let mut g = Gen::new(&sig, 7);
    let langs = [Language::Co, Language::Cov, Language::Cod];
    let mut seen = [0usize; 2];
    for i in 0..150 {
        let lang = langs[i % 3];
        let gamma: Vec<Formula> = (0..i % 3).map(|_| g.formula(lang, 2)).collect();
        let psi = g.formula(lang, 2);
        for sem in [Semantics::Generalized, Semantics::Causal] {
            let v = d.entails(&gamma, &psi, sem).unwrap();
            let oracle = u.entails_bounded(&gamma, &psi, sem, u.len());
            let text: Vec<String> = gamma.iter().map(|f| f.display(&sig)).collect();
            assert_eq!(v.holds, oracle, "{sem:?} {text:?} |= {}", psi.display(&sig));
            seen[v.holds as usize] += 1;
            if let Some(t) = v.counterexample {
                let ctx = SatContext::default();
                for f in &gamma {
                    assert!(satisfies(&sig, &t, f, &ctx).unwrap());
                }
                assert!(!satisfies(&sig, &t, &psi, &ctx).unwrap());
            }
        }
    }
    // both verdicts must be exercised
    assert!(seen[0] > 20 && seen[1] > 20, "{seen:?}");
}

#[test]
fn normal_forms_are_equivalent() {
    let sig = sig();
    let u = Universe::new(&sig).unwrap();
    let mut g = Gen::new(&sig, 11);
    for i in 0..40 {
        let phi = g.formula(if i % 2 == 0 { Language::Cov } else { Language::Cod }, 3);
        let d = normal_disjuncts(&phi, &sig).unwrap();
        assert!(d.items().iter().all(Formula::is_co));
        assert!(u.equivalent_bounded(&phi, &d.to_formula(), Semantics::Generalized, u.len()));
    }
}

#[test]
fn causal_disjunction_property_fails() {
    let sig = sig();
    let d = Decider::new(&sig).unwrap();
    let unf = build_unf(&sig).unwrap().formula;
    assert!(d.valid(&unf, Semantics::Causal).unwrap());
    assert!(!d.valid(&unf, Semantics::Generalized).unwrap());
    for f in d.classes() {
        let phi = build_phi(f, &sig).unwrap().formula;
        assert!(!d.valid(&phi, Semantics::Causal).unwrap());
    }
}

#[test]
fn phi_family_is_pairwise_incompatible() {
    let sig = sig();
    let d = Decider::new(&sig).unwrap();
    let fam = phi_family(&sig).unwrap();
    for (i, (_, a)) in fam.iter().enumerate() {
        for (j, (_, b)) in fam.iter().enumerate() {
            assert_eq!(d.incompatible(a, b).unwrap(), i != j);
        }
    }
}

#[test]
fn composition_is_valid() {
    let sig = Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"]), ("W", &["0", "1"])]).unwrap();
    let d = Decider::new(&sig).unwrap();
    let p = |s: &str| parse(s, &sig).unwrap();
    let gamma = [p("(X=1) []-> W=0"), p("(X=1) []-> Y=1")];
    for sem in [Semantics::Generalized, Semantics::Causal] {
        assert!(d.entails(&gamma, &p("(X=1 & W=0) []-> Y=1"), sem).unwrap().holds);
    }
}
