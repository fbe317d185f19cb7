use ctlab::charform::*;
use ctlab::semantics::{satisfies_g, SatContext};
use ctlab::*;
use std::collections::BTreeSet;

fn sig() -> Signature {
    Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).unwrap()
}

#[test]
fn phi_defines_similarity() {
    let sig = sig();
    let u = Universe::new(&sig).unwrap();
    for (c, f) in u.classes().iter().enumerate() {
        let phi = build_phi(f, &sig).unwrap().formula;
        let t = u.table(&phi, u.len());
        for m in u.masks(u.len()) {
            let oracle = u.team_of(m).laws().iter().all(|g| g.similar(f));
            assert_eq!(t.get(m), oracle, "class {c} mask {m:b}");
            assert_eq!(oracle, m & !u.class_mask(c) == 0);
        }
    }
}

#[test]
fn phi_on_unreduced_laws() {
    // every recursive system, not only representatives, over small teams of Sem
    let sig = sig();
    let sem = enumerate_sem(&sig);
    let ctx = SatContext::default();
    for f in enumerate_function_systems(&sig, true) {
        let phi = build_phi(&f, &sig).unwrap().formula;
        for (i, a) in sem.iter().enumerate() {
            for b in &sem[i..] {
                let t = GeneralizedTeam::new(&sig, [a.clone(), b.clone()]).unwrap();
                let oracle = t.laws().iter().all(|g| g.similar(&f));
                assert_eq!(satisfies_g(&sig, &t, &phi, &ctx).unwrap(), oracle);
            }
        }
    }
}

#[test]
fn theta_chi_xi() {
    let sig = sig();
    let u = Universe::new(&sig).unwrap();
    let n = u.len();
    let all = u.masks(n);
    let rows: Vec<BTreeSet<Assignment>> = all.iter().map(|&m| u.team_of(m).assignments()).collect();
    // Θ over a few row sets
    let a = enumerate_assignments(&sig);
    for k in 0u32..1 << a.len() {
        let set: BTreeSet<Assignment> = (0..a.len()).filter(|i| k >> i & 1 == 1).map(|i| a[i].clone()).collect();
        let th = u.table(&build_theta(&set, &sig).unwrap().formula, n);
        for (i, &m) in all.iter().enumerate() {
            assert_eq!(th.get(m), rows[i].is_subset(&set));
        }
    }
    for k in 0..4 {
        let chi = u.table(&build_chi_k(&sig, k).unwrap().formula, n);
        for &m in &all {
            assert_eq!(chi.get(m), u.team_of(m).quotient_cardinality() <= k as usize, "k={k} m={m:b}");
        }
    }
    for &tm in all.iter().filter(|&&m| m != 0 && m.count_ones() <= 3) {
        let t = u.team_of(tm);
        let xi = u.table(&build_xi(&t, &sig).unwrap().formula, n);
        for &m in &all {
            assert_eq!(xi.get(m), !t.preceq(&u.team_of(m)), "T={tm:b} S={m:b}");
        }
    }
}

#[test]
fn xi_matches_unreduced_reference() {
    let sig = sig();
    let u = Universe::new(&sig).unwrap();
    for tm in [0b1u64, 0b11, 0b1000_0001, 0b1100_0000_0000] {
        let t = u.team_of(tm & u.full());
        if t.is_empty() {
            continue;
        }
        let a = build_xi(&t, &sig).unwrap().formula;
        let b = build_xi_unreduced(&t, &sig).unwrap().formula;
        assert!(u.equivalent_bounded(&a, &b, Semantics::Generalized, u.len()));
    }
}

#[test]
fn unf_and_mu() {
    let sig = sig();
    let u = Universe::new(&sig).unwrap();
    let unf = u.table(&build_unf(&sig).unwrap().formula, u.len());
    let mu = u.table(&build_mu(&sig).unwrap().formula, u.len());
    for m in u.masks(u.len()) {
        let t = u.team_of(m);
        assert_eq!(unf.get(m), t.is_uniform());
        if t.assignments().len() == 1 {
            assert_eq!(mu.get(m), t.is_uniform());
        }
    }
}

#[test]
fn leadsto_on_the_successor_law() {
    let sig = Signature::simple(&[("X", &["0", "1"]), ("Y", &["1", "2"])]).unwrap();
    let y = Law::from_fn(&sig, 1, vec![0], |p| p[0]).unwrap();
    let f = FunctionSystem::new(&sig, vec![None, Some(y)]).unwrap();
    let s = Assignment(vec![0, 0]);
    let lt = build_leadsto(0, 1, &sig).unwrap().formula;
    let back = build_leadsto(1, 0, &sig).unwrap().formula;
    assert!(semantics::eval_point(&s, &f, &lt));
    assert!(!semantics::eval_point(&s, &f, &back));
    assert!(semantics::eval_point(&s, &f, &build_direct_cause(0, 1, &sig).unwrap().formula));
    assert!(semantics::eval_point(&s, &f, &build_beta_en(1, &sig).unwrap().formula));
    assert!(!semantics::eval_point(&s, &f, &build_beta_en(0, &sig).unwrap().formula));
    let exo = FunctionSystem::exogenous(&sig);
    for v in sig.vars() {
        assert!(!semantics::eval_point(&s, &exo, &build_beta_en(v, &sig).unwrap().formula));
    }
}
