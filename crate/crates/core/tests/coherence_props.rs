#[path = "common/lemma_oracle.rs"]
mod lemma_oracle;

use itertools::Itertools;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlim_core::coherence::{
    build_akl_systems, build_ideal, build_x_system, build_y_system, extend_family, find_trivialization, is_n_coherent,
    union_closure, CoherentFamily, SetIdeal, Target, Trivialization,
};
use rlim_core::prosys::{derived_limits, is_flasque, Caps};
use rlim_core::zmodule::{Coeff, FinAbGroup};

fn full_index(kappa: usize, lambda: usize) -> Vec<u64> {
    (0..1u64 << (kappa * lambda)).collect()
}

fn random_family(rng: &mut ChaCha8Rng, n: usize, index: Vec<u64>, target: Target, modulus: SetIdeal, density: f64) -> CoherentFamily {
    let mut f = CoherentFamily::zero(n, index, target, modulus).unwrap();
    for t in f.tuples(n).collect::<Vec<_>>() {
        if !rng.gen_bool(density) {
            continue;
        }
        let len = f.domain(&t).count_ones() as usize * target.rank;
        let v = (0..len).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
        f.set(&t, v).unwrap();
    }
    f
}

/// `δΨ` for an `(n-1)`-family `Ψ`, evaluated directly.
fn coboundary(psi: &CoherentFamily, modulus: SetIdeal) -> CoherentFamily {
    let n = psi.n() + 1;
    let mut f = CoherentFamily::zero(n, psi.index().to_vec(), psi.target(), modulus).unwrap();
    let coeff = psi.target().coeff;
    for t in f.tuples(n).collect::<Vec<_>>() {
        let dom = f.domain(&t);
        let mut v = Vec::new();
        let r = psi.target().rank;
        for y in (0..64).filter(|y| dom >> y & 1 == 1) {
            for k in 0..r {
                let mut acc = BigInt::from(0);
                for i in 0..t.len() {
                    let mut face = t.clone();
                    face.remove(i);
                    let p = (psi.domain(&face) & ((1u64 << y) - 1)).count_ones() as usize;
                    let val = psi.get(&face)[p * r + k].clone();
                    if i % 2 == 0 {
                        acc += val;
                    } else {
                        acc -= val;
                    }
                }
                v.push(coeff.reduce(acc));
            }
        }
        f.set(&t, v).unwrap();
    }
    f
}

#[test]
fn a_system_baseline() {
    let caps = Caps::default();
    for kappa in 1..=2 {
        for lambda in 1..=2 {
            let ses = build_akl_systems(kappa, lambda, Target::new(Coeff::Integers, 1), &caps).unwrap();
            assert_eq!(ses.sub().poset().len(), 1 << (kappa * lambda));
            let l = derived_limits(ses.sub(), 2, &caps).unwrap();
            assert_eq!(l[0], FinAbGroup::free(Coeff::Integers, kappa * lambda));
            assert!(l[1].is_trivial() && l[2].is_trivial(), "({kappa},{lambda})");
        }
    }
    let b22 = build_akl_systems(2, 2, Target::new(Coeff::Integers, 1), &caps).unwrap();
    assert!(is_flasque(b22.mid(), &caps).unwrap().flasque);
}

#[test]
fn x_system_reproduces_a_system() {
    let caps = Caps::default();
    let a = build_akl_systems(2, 1, Target::new(Coeff::Integers, 1), &caps).unwrap();
    let gens: Vec<Vec<usize>> = (0..4u64).map(|m| (0..2).filter(|i| m >> i & 1 == 1).collect()).collect();
    let index = build_ideal(2, &gens).unwrap();
    let all = build_ideal(2, &[vec![0, 1]]).unwrap();
    let x = build_x_system(&index, &all, Target::new(Coeff::Integers, 1)).unwrap();
    assert_eq!(x.ranks(), a.sub().ranks());
    assert_eq!(derived_limits(&x, 2, &caps).unwrap(), derived_limits(a.sub(), 2, &caps).unwrap());
}

#[test]
fn lemma_equivalence_small_grounds() {
    // the full |Y| ≤ 4 sweep runs in the acceptance suite
    let caps = Caps::default();
    let mut checked = 0;
    for m in 1..=3 {
        for n in 1..=2 {
            for inst in lemma_oracle::instances(m, n) {
                let out = lemma_oracle::decide(&inst, &caps);
                assert_eq!(out.solver_disagreements, 0, "gens {:?} J {:b} n {n}", inst.gens, inst.jmax);
                assert_eq!(out.lim_vanishes, out.all_trivial, "gens {:?} J {:b} n {n}", inst.gens, inst.jmax);
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn y_system_matches_x_system() {
    let caps = Caps::default();
    let k = Target::new(Coeff::ModP(3), 1);
    for gens in [vec![vec![0]], vec![vec![0], vec![1]], vec![vec![0, 1], vec![1, 2], vec![2]]] {
        let tilde = build_ideal(3, &gens).unwrap();
        for kappa in 1..=2 {
            let y = build_y_system(kappa, 3, &tilde, k, &caps).unwrap();
            let closure = union_closure(&tilde.generator_list(), &caps).unwrap();
            let lifted: Vec<Vec<usize>> = closure
                .iter()
                .map(|&s| (0..kappa).flat_map(|i| (0..3).filter(move |x| s >> x & 1 == 1).map(move |x| i * 3 + x)).collect())
                .collect();
            let index = build_ideal(3 * kappa, &lifted).unwrap();
            let modulus = build_ideal(3 * kappa, &[(0..3 * kappa).collect()]).unwrap();
            let x = build_x_system(&index, &modulus, k).unwrap();
            assert_eq!(derived_limits(&y, 2, &caps).unwrap(), derived_limits(&x, 2, &caps).unwrap());
        }
    }
}

#[test]
fn coboundaries_are_trivialized() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for round in 0..40 {
        let ground = rng.gen_range(2..=5);
        let index: Vec<u64> = (0..1u64 << ground).filter(|_| rng.gen_bool(0.4)).collect();
        if index.len() < 2 {
            continue;
        }
        let jmax: Vec<usize> = (0..ground).filter(|_| rng.gen_bool(0.3)).collect();
        let modulus = build_ideal(ground, &[jmax]).unwrap();
        let coeff = if round % 2 == 0 { Coeff::Integers } else { Coeff::ModP(3) };
        let target = Target::new(coeff, rng.gen_range(1..=2));
        let psi = random_family(&mut rng, 1, index, target, modulus.clone(), 0.7);
        let phi = coboundary(&psi, modulus);
        assert!(is_n_coherent(&phi).coherent);
        match find_trivialization(&phi).unwrap() {
            Some(Trivialization::Family(_)) => {}
            other => panic!("round {round}: {other:?}"),
        }
    }
}

#[test]
fn extension_preserves_coherence_and_triviality() {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (kappa, lambda) in [(1, 1), (1, 2), (2, 1)] {
        for n in 1..=2 {
            for _ in 0..4 {
                let bits = kappa * lambda;
                let jmax: Vec<usize> = (0..bits).filter(|_| rng.gen_bool(0.3)).collect();
                let modulus = build_ideal(bits, &[jmax]).unwrap();
                let target = Target::new(Coeff::ModP(2), 1);
                let index = full_index(kappa, lambda);
                // coherent by construction: restrictions of one function, or a coboundary
                let fam = if n == 1 {
                    let mut f = CoherentFamily::zero(1, index, target, modulus.clone()).unwrap();
                    let g: Vec<i64> = (0..bits).map(|_| rng.gen_range(0..2)).collect();
                    for (i, &s) in full_index(kappa, lambda).iter().enumerate() {
                        let v = (0..bits).filter(|y| s >> y & 1 == 1).map(|y| BigInt::from(g[y])).collect();
                        f.set(&[i], v).unwrap();
                    }
                    f
                } else {
                    let psi = random_family(&mut rng, 1, index, target, modulus.clone(), 0.5);
                    coboundary(&psi, modulus)
                };
                assert!(is_n_coherent(&fam).coherent);
                let ext = extend_family(&fam, kappa, lambda, 2, 2, &caps).unwrap();
                assert!(is_n_coherent(&ext).coherent);
                assert_eq!(
                    find_trivialization(&fam).unwrap().is_some(),
                    find_trivialization(&ext).unwrap().is_some()
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alternation_consistency(len in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let index: Vec<u64> = vec![0b0011, 0b0111, 0b0110, 0b1111];
        let modulus = build_ideal(4, &[]).unwrap();
        let target = Target::new(Coeff::Integers, 1);
        let fam = random_family(&mut rng, len, index, target, modulus, 0.8);
        for t in fam.tuples(len).collect::<Vec<_>>() {
            let base = fam.get(&t);
            for perm in t.iter().copied().permutations(len) {
                let inversions = (0..len).flat_map(|i| (i + 1..len).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
                let expected: Vec<BigInt> = if inversions % 2 == 0 { base.clone() } else { base.iter().map(|x| -x).collect() };
                prop_assert_eq!(fam.get(&perm), expected);
            }
        }
    }

    #[test]
    fn extension_functoriality(n in 1usize..=2, seed in any::<u64>(), via in 0usize..3) {
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modulus = build_ideal(1, &[]).unwrap();
        let fam = random_family(&mut rng, n, full_index(1, 1), Target::new(Coeff::Integers, 1), modulus, 0.9);
        let (mu, nu) = [(1, 2), (2, 1), (1, 1)][via];
        let step = extend_family(&fam, 1, 1, mu, nu, &caps).unwrap();
        let twice = extend_family(&step, mu, nu, 2, 2, &caps).unwrap();
        let once = extend_family(&fam, 1, 1, 2, 2, &caps).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn trivializations_reverify(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let index: Vec<u64> = vec![0b001, 0b011, 0b110, 0b111];
        let jmax: Vec<usize> = (0..3).filter(|_| rng.gen_bool(0.3)).collect();
        let modulus = build_ideal(3, &[jmax]).unwrap();
        let psi = random_family(&mut rng, 1, index, Target::new(Coeff::ModP(5), 1), modulus.clone(), 0.8);
        let phi = coboundary(&psi, modulus);
        let t = find_trivialization(&phi).unwrap();
        prop_assert!(t.is_some_and(|t| rlim_core::coherence::verify_trivialization(&phi, &t)));
    }
}
