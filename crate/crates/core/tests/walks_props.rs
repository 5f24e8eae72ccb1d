use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlim_core::walks::{
    build_tau_phi, recursive_base_family, tau, support_invariant_holds, CanonicalLadders, OrdinalCNF, OrdinalFunction,
    StageKind, WalkFamily,
};
use rlim_core::zmodule::Coeff;

fn o(s: &str) -> OrdinalCNF {
    s.parse().unwrap()
}

/// Uniform-ish ordinal below `ω^3·3` with small coefficients.
fn sample(rng: &mut ChaCha8Rng) -> OrdinalCNF {
    let mut x = OrdinalCNF::monomial(3, rng.gen_range(0..3));
    for e in (0..3).rev() {
        x = x.add(&OrdinalCNF::monomial(e, rng.gen_range(0..5)));
    }
    x
}

fn walks() -> WalkFamily {
    WalkFamily::new(Arc::new(CanonicalLadders), o("w^3*3"))
}

#[test]
fn defect_triangle_inclusion() {
    let w = walks();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let mut t = [sample(&mut rng), sample(&mut rng), sample(&mut rng)];
        t.sort();
        let [a, b, c] = t;
        let dac = w.coherence_defect(&a, &c).unwrap();
        let dab = w.coherence_defect(&a, &b).unwrap();
        let dbc = w.coherence_defect(&b, &c).unwrap();
        for x in &dac {
            assert!(dab.contains(x) || (dbc.contains(x) && x < &a), "D({a},{c}) at {x}");
        }
        // defects are exactly where the fiber maps disagree
        for x in dab.iter().take(5) {
            assert_ne!(w.rho1(x, &a).unwrap(), w.rho1(x, &b).unwrap());
        }
    }
}

#[test]
fn phi_is_tau_on_sampled_functions() {
    let w = walks();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let rows = rng.gen_range(0..5);
        let f = OrdinalFunction::new(
            (0..rows).map(|_| (0..rng.gen_range(0..4)).map(|_| sample(&mut rng)).collect()).collect(),
        );
        if f.sp() >= *w.bound() {
            continue;
        }
        let tp = build_tau_phi(&w, &f).unwrap();
        assert_eq!(tp.phi.len(), f.x_set().len());
        for ((i, xi), v) in &tp.phi {
            assert_eq!(*v == 1, w.rho1(xi, &tp.sp).unwrap() == *i as u64);
        }
        for (xi, row) in &tp.tau_columns {
            let ones: u32 = (0..*row as usize + 3).map(|i| u32::from(tau(&w, &tp.sp, i, xi).unwrap())).sum();
            assert_eq!(ones, 1, "column {xi}");
        }
    }
}

#[test]
fn phi_coherence_on_nested_functions() {
    let w = walks();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..60 {
        let rows = rng.gen_range(1..4);
        let small: Vec<Vec<OrdinalCNF>> = (0..rows).map(|_| (0..rng.gen_range(0..3)).map(|_| sample(&mut rng)).collect()).collect();
        let big: Vec<Vec<OrdinalCNF>> = small
            .iter()
            .map(|r| r.iter().cloned().chain((0..rng.gen_range(0..3)).map(|_| sample(&mut rng))).collect())
            .collect();
        let (f, g) = (OrdinalFunction::new(small), OrdinalFunction::new(big));
        assert!(f.leq(&g));
        if g.sp() >= *w.bound() {
            continue;
        }
        let (tf, tg) = (build_tau_phi(&w, &f).unwrap(), build_tau_phi(&w, &g).unwrap());
        let defect = w.coherence_defect(&tf.sp, &tg.sp).unwrap();
        for ((i, xi), v) in &tf.phi {
            let vg = tg.phi.iter().find(|((j, y), _)| j == i && y == xi).unwrap().1;
            if vg != *v {
                assert!(defect.contains(xi), "({i}, {xi}) outside D");
            }
        }
    }
}

#[test]
fn memo_is_a_pure_cache() {
    let w = walks();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pairs: Vec<(OrdinalCNF, OrdinalCNF)> = (0..200)
        .map(|_| {
            let (a, b) = (sample(&mut rng), sample(&mut rng));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    let first: Vec<u64> = pairs.iter().map(|(x, b)| w.rho1(x, b).unwrap()).collect();
    let again: Vec<u64> = pairs.iter().map(|(x, b)| w.rho1(x, b).unwrap()).collect();
    let fresh = walks();
    let cold: Vec<u64> = pairs.iter().map(|(x, b)| fresh.rho1(x, b).unwrap()).collect();
    assert_eq!(first, again);
    assert_eq!(first, cold);
    for (x, _) in &pairs {
        assert_eq!(w.rho1(x, x).unwrap(), 0);
    }
}

#[test]
fn recursion_support_invariant_to_omega_squared() {
    for width in 2..=4 {
        let fam = recursive_base_family(&CanonicalLadders, &o("w^2"), width, Coeff::ModP(2)).unwrap();
        assert_eq!(fam.stages.len(), fam.grid.len());
        for s in &fam.stages {
            assert!(support_invariant_holds(&fam.stages, &s.beta.succ()));
            if let StageKind::Limit { inserted, .. } = &s.kind {
                for xi in inserted {
                    assert!(s.values.contains_key(&(s.beta.clone(), xi.clone())));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rho1_finite_below_omega(n in 0u64..200) {
        prop_assert_eq!(walks().rho1(&OrdinalCNF::nat(n), &OrdinalCNF::omega()).unwrap(), n);
    }

    #[test]
    fn ordinal_addition_is_associative(a in 0u64..4, b in 0u64..4, c in 0u64..4, d in 0u64..4, e in 0u32..3) {
        let x = OrdinalCNF::monomial(e + 1, a).add(&OrdinalCNF::nat(b));
        let y = OrdinalCNF::monomial(e, c).add(&OrdinalCNF::nat(d));
        let z = OrdinalCNF::monomial(2, b).add(&OrdinalCNF::monomial(0, a));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert!(x.add(&y) >= x.clone());
        prop_assert_eq!(x.add(&y).left_sub(&x), Some(y));
    }
}
