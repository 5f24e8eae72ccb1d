//! Brute-force decision of "every n-coherent family is trivial" for
//! `X[I, J, 𝔽_2]` on small ground sets, by enumerating all families as bit
//! vectors. Shared with the acceptance suite through `#[path]`.

use itertools::Itertools;
use num_bigint::BigInt;
use rlim_core::coherence::{
    build_ideal, build_x_system, CoherentFamily, Target, TrivializationProblem,
};
use rlim_core::prosys::{derived_limit, Caps};
use rlim_core::zmodule::Coeff;

pub struct Instance {
    pub ground: usize,
    /// Distinct generators sorted by bitmask.
    pub gens: Vec<u64>,
    pub jmax: u64,
    pub n: usize,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub lim_vanishes: bool,
    pub all_trivial: bool,
    pub coherent_families: usize,
    /// Coherent families where `find_trivialization` disagreed with enumeration.
    pub solver_disagreements: usize,
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn meet(gens: &[u64], t: &[usize]) -> u64 {
    t.iter().fold(u64::MAX, |m, &i| m & gens[i])
}

fn mask_list(mask: u64) -> Vec<Vec<usize>> {
    let b = bits(mask);
    if b.is_empty() {
        vec![]
    } else {
        vec![b]
    }
}

/// Coordinates `(tuple, y)` with `y ∈ ⋂ tuple ∖ J_max`, in a fixed order.
fn coordinates(gens: &[u64], jmax: u64, len: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for t in (0..gens.len()).combinations(len) {
        for y in bits(meet(gens, &t) & !jmax) {
            out.push((t.clone(), y));
        }
    }
    out
}

pub fn decide(inst: &Instance, caps: &Caps) -> Outcome {
    let Instance { ground, ref gens, jmax, n } = *inst;
    let full = (1u64 << ground) - 1;
    let jmax = jmax & full;
    let coords = coordinates(gens, jmax, n);
    assert!(coords.len() <= 16, "more than 2^16 candidate families");
    let pos = |t: &[usize], y: usize| coords.iter().position(|(s, z)| s == t && *z == y).unwrap();

    // coherence: every alternating sum on an (n+1)-tuple vanishes outside J_max
    let mut parity_masks: Vec<u32> = Vec::new();
    for t in (0..gens.len()).combinations(n + 1) {
        for y in bits(meet(gens, &t) & !jmax) {
            let mut m = 0u32;
            for i in 0..t.len() {
                let mut face = t.clone();
                face.remove(i);
                m |= 1 << pos(&face, y);
            }
            parity_masks.push(m);
        }
    }

    // coboundaries of all (n-1)-dimensional families (functions on Y ∖ J_max for n = 1)
    let mut is_coboundary = vec![false; 1 << coords.len()];
    if n == 1 {
        let free = bits(full & !jmax);
        for psi in 0u32..1 << free.len() {
            let mut image = 0u32;
            for (k, (_, y)) in coords.iter().enumerate() {
                let j = free.iter().position(|z| z == y).unwrap();
                image |= (psi >> j & 1) << k;
            }
            is_coboundary[image as usize] = true;
        }
    } else {
        let lower = coordinates(gens, jmax, n - 1);
        assert!(lower.len() <= 16);
        let lpos = |t: &[usize], y: usize| lower.iter().position(|(s, z)| s == t && *z == y).unwrap();
        for psi in 0u32..1 << lower.len() {
            let mut image = 0u32;
            for (k, (t, y)) in coords.iter().enumerate() {
                let mut v = 0;
                for i in 0..t.len() {
                    let mut face = t.clone();
                    face.remove(i);
                    v ^= psi >> lpos(&face, *y) & 1;
                }
                image |= v << k;
            }
            is_coboundary[image as usize] = true;
        }
    }

    let index_ideal = build_ideal(ground, &gens.iter().map(|&g| bits(g)).collect::<Vec<_>>()).unwrap();
    let modulus = build_ideal(ground, &mask_list(jmax)).unwrap();
    let target = Target::new(Coeff::ModP(2), 1);
    let x = build_x_system(&index_ideal, &modulus, target).unwrap();
    let lim = derived_limit(&x, n as i64, caps).unwrap();

    let template = CoherentFamily::zero(n, gens.clone(), target, modulus.clone()).unwrap();
    let problem = TrivializationProblem::new(&template).unwrap();
    let mut out = Outcome { lim_vanishes: lim.is_trivial(), all_trivial: true, ..Outcome::default() };
    for fam in 0u32..1 << coords.len() {
        if parity_masks.iter().any(|&m| (fam & m).count_ones() % 2 == 1) {
            continue;
        }
        out.coherent_families += 1;
        let trivial = is_coboundary[fam as usize];
        out.all_trivial &= trivial;
        let mut f = template.clone();
        for t in (0..gens.len()).combinations(n) {
            let dom = meet(gens, &t) & full;
            let v: Vec<BigInt> = bits(dom)
                .into_iter()
                .map(|y| {
                    let bit = coords.iter().position(|(s, z)| s == &t && *z == y).map_or(0, |k| fam >> k & 1);
                    BigInt::from(bit)
                })
                .collect();
            f.set(&t, v).unwrap();
        }
        let found = problem.solve(&f).unwrap().is_some();
        if found != trivial {
            out.solver_disagreements += 1;
        }
    }
    out
}

/// Every instance with ground size `m`, 1 to 3 distinct generators, every
/// `J_max ⊆ Y` and the given `n`.
pub fn instances(m: usize, n: usize) -> impl Iterator<Item = Instance> {
    let subsets: Vec<u64> = (0..1u64 << m).collect();
    (1..=3)
        .flat_map(move |k| subsets.clone().into_iter().combinations(k))
        .flat_map(move |gens| (0..1u64 << m).map(move |jmax| Instance { ground: m, gens: gens.clone(), jmax, n }))
}
