//! Seeded generators for posets, unimodular base changes and inverse systems.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::prosys::{build_system, InverseSystem, Poset, SystemError};
use crate::zmodule::{Coeff, IntegerMatrix};

/// Random poset on `n` elements: each pair `i < j` (by index) is related with
/// probability `density`, then transitively closed.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.push((i, j));
            }
        }
    }
    Poset::new(names, &rel).expect("index-increasing relations are acyclic")
}

/// Random poset on `n ≥ 1` elements whose last element is a maximum.
pub fn random_directed_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if j == n - 1 || rng.gen_bool(density) {
                rel.push((i, j));
            }
        }
    }
    Poset::new(names, &rel).expect("index-increasing relations are acyclic")
}

/// A random unimodular `g` together with `g^{-1}`, as a product of
/// elementary row operations with small multipliers.
pub fn random_unimodular<R: Rng>(rng: &mut R, r: usize, steps: usize) -> (IntegerMatrix, IntegerMatrix) {
    let mut g = vec![vec![0i64; r]; r];
    let mut inv = vec![vec![0i64; r]; r];
    for i in 0..r {
        g[i][i] = 1;
        inv[i][i] = 1;
    }
    if r >= 2 {
        for _ in 0..steps {
            let i = rng.gen_range(0..r);
            let mut j = rng.gen_range(0..r - 1);
            if j >= i {
                j += 1;
            }
            let c: i64 = *[-2i64, -1, 1, 2].choose(rng).expect("nonempty");
            // g ← E g with E = I + c e_ij; g^{-1} ← g^{-1} E^{-1}
            for k in 0..r {
                g[i][k] += c * g[j][k];
            }
            for row in inv.iter_mut() {
                row[j] -= c * row[i];
            }
        }
    }
    for i in 0..r {
        if rng.gen_bool(0.3) {
            for k in 0..r {
                g[i][k] = -g[i][k];
            }
            for row in inv.iter_mut() {
                row[i] = -row[i];
            }
        }
    }
    (
        IntegerMatrix::from_rows_with_width(&g, r, Coeff::Integers).expect("square"),
        IntegerMatrix::from_rows_with_width(&inv, r, Coeff::Integers).expect("square"),
    )
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64, coeff: Coeff) -> IntegerMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntegerMatrix::from_rows_with_width(&data, cols, coeff).expect("rectangular")
}

/// Scalar summand: term `ℤ` on a convex set `S`, maps `c_x / c_z` with
/// `c_x = ∏_{w ∈ S, w ≥ x} r_w`.
struct Summand {
    support: Vec<bool>,
    weights: Vec<i64>,
}

impl Summand {
    fn factor(&self, poset: &Poset, x: usize, z: usize) -> i64 {
        if !self.support[x] || !self.support[z] {
            return 0;
        }
        (0..poset.len())
            .filter(|&w| self.support[w] && poset.leq(x, w) && !poset.leq(z, w))
            .map(|w| self.weights[w])
            .product()
    }
}

fn assemble(
    poset: Poset,
    summands: &[Summand],
    coeff: Coeff,
    conjugate: Option<&[(IntegerMatrix, IntegerMatrix)]>,
) -> Result<InverseSystem, SystemError> {
    let n = poset.len();
    let present: Vec<Vec<usize>> =
        (0..n).map(|x| (0..summands.len()).filter(|&k| summands[k].support[x]).collect()).collect();
    let ranks: Vec<usize> = present.iter().map(Vec::len).collect();
    let mut given = Vec::new();
    for (x, z) in poset.strict_pairs() {
        let mut m = IntegerMatrix::zeros(ranks[x], ranks[z], Coeff::Integers);
        for (a, &k) in present[x].iter().enumerate() {
            if let Some(b) = present[z].iter().position(|&l| l == k) {
                m.set(a, b, BigInt::from(summands[k].factor(&poset, x, z)))?;
            }
        }
        let m = match conjugate {
            Some(g) => g[x].0.mul(&m)?.mul(&g[z].1)?,
            None => m,
        };
        given.push((x, z, m.with_coeff(coeff)));
    }
    build_system(poset, ranks, given, coeff)
}

fn conjugators<R: Rng>(rng: &mut R, ranks: &[usize]) -> Vec<(IntegerMatrix, IntegerMatrix)> {
    ranks.iter().map(|&r| random_unimodular(rng, r, 2 * r)).collect()
}

fn ranks_of(summands: &[Summand], n: usize) -> Vec<usize> {
    (0..n).map(|x| summands.iter().filter(|s| s.support[x]).count()).collect()
}

/// Random functorial system: a sum of scalar summands on convex subsets,
/// conjugated by a random unimodular change of basis at every element.
pub fn random_system<R: Rng>(rng: &mut R, poset: Poset, summands: usize, coeff: Coeff) -> Result<InverseSystem, SystemError> {
    let n = poset.len();
    let mut parts = Vec::with_capacity(summands);
    for _ in 0..summands {
        let seed: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let support: Vec<bool> =
            (0..n).map(|b| seed.iter().any(|&a| poset.leq(a, b)) && seed.iter().any(|&c| poset.leq(b, c))).collect();
        let weights = (0..n).map(|_| *[1i64, 1, 1, -1, 2, 3].choose(rng).expect("nonempty")).collect();
        parts.push(Summand { support, weights });
    }
    let g = conjugators(rng, &ranks_of(&parts, n));
    assemble(poset, &parts, coeff, Some(&g))
}

/// Random flasque system: a sum of systems `↑y` (term `ℤ` on `{x ≥ y}`, identity
/// maps), conjugated by a random unimodular change of basis at every element.
pub fn random_flasque_system<R: Rng>(
    rng: &mut R,
    poset: Poset,
    summands: usize,
    coeff: Coeff,
) -> Result<InverseSystem, SystemError> {
    let n = poset.len();
    let mut parts = Vec::with_capacity(summands);
    for _ in 0..summands {
        let y = rng.gen_range(0..n);
        let support = (0..n).map(|x| poset.leq(y, x)).collect();
        parts.push(Summand { support, weights: vec![1; n] });
    }
    let g = conjugators(rng, &ranks_of(&parts, n));
    assemble(poset, &parts, coeff, Some(&g))
}
