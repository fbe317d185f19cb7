use ctlab::charform::build_unf;
use ctlab::model::io::Kind;
use ctlab::synthesis::*;
use ctlab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sig() -> Signature {
    Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).unwrap()
}

fn random_masks(s: &Synth, kind: Kind, rng: &mut ChaCha8Rng, n: usize) -> Vec<u64> {
    let sem = if kind == Kind::Causal { Semantics::Causal } else { Semantics::Generalized };
    let dom = s.universe().domain(sem, s.universe().len());
    (0..n).map(|_| dom[rng.gen_range(0..dom.len())]).collect()
}

#[test]
fn cod_round_trip() {
    let sig = sig();
    let s = Synth::new(&sig, DEFAULT_CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..6 {
        let kind = if i % 2 == 0 { Kind::Generalized } else { Kind::Causal };
        let gens = random_masks(&s, kind, &mut rng, 1 + i % 3);
        let k = s.close_under_succeq(&s.class_of_masks(kind, gens)).unwrap();
        assert!(s.check_closure(&k, ClosureMode::DownwardEquiv).unwrap());
        let phi = s.synthesize_cod(&k).unwrap();
        assert!(s.verify_defines(&phi, &k).unwrap(), "class {i}");
    }
}

#[test]
fn co_round_trip() {
    let sig = sig();
    let s = Synth::new(&sig, DEFAULT_CAP).unwrap();
    let n = s.universe().len();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..10 {
        let kind = if i % 2 == 0 { Kind::Generalized } else { Kind::Causal };
        let sem = if kind == Kind::Causal { Semantics::Causal } else { Semantics::Generalized };
        let q: u64 = rng.gen_range(0..1u64 << n);
        let masks: Vec<u64> = s.universe().domain(sem, n).into_iter().filter(|m| m & !q == 0).collect();
        let k = s.class_of_masks(kind, masks);
        assert!(s.check_closure(&k, ClosureMode::Flat).unwrap());
        let phi = s.synthesize_co(&k).unwrap();
        assert!(phi.is_co());
        assert!(s.verify_defines(&phi, &k).unwrap(), "class {i}");
    }
}

#[test]
fn small_cases() {
    let sig = sig();
    let s = Synth::new(&sig, DEFAULT_CAP).unwrap();
    let empty_only = s.class_of_masks(Kind::Generalized, [0]);
    assert!(s.check_closure(&empty_only, ClosureMode::Flat).unwrap());
    assert!(s.verify_defines(&Formula::bot(), &empty_only).unwrap());
    let phi = s.synthesize_co(&empty_only).unwrap();
    assert!(phi.is_bot());
    let all = s.class_of_masks(Kind::Generalized, 0..=s.universe().full());
    assert_eq!(s.synthesize_cod(&all).unwrap(), Formula::top());
    // missing one maximal team
    let full = s.universe().full();
    let k = s.class_of_masks(Kind::Generalized, (0..full).collect::<Vec<_>>());
    let phi = s.synthesize_cod(&k).unwrap();
    assert!(s.verify_defines(&phi, &k).unwrap());
    let uniform = s.class_of_formula(&build_unf(&sig).unwrap().formula, Kind::Generalized);
    assert!(uniform.teams.iter().all(|t| t.generalized().is_uniform()));
    assert!(s.verify_defines(&build_unf(&sig).unwrap().formula, &uniform).unwrap());
    // a two-member class missing a subteam is not downward closed
    let k = s.class_of_masks(Kind::Generalized, [0, 0b11, 0b1]);
    assert!(!s.check_closure(&k, ClosureMode::DownwardEquiv).unwrap());
    assert!(s.synthesize_cod(&k).is_err());
}
