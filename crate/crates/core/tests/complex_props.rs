use proptest::prelude::*;
use rlim_core::complex::{build_complex, CochainComplex};
use rlim_core::zmodule::{rank_mod_p, Coeff, IntegerMatrix, IntegerSolver};

fn rows_to_matrix(rows: &[Vec<i64>], cols: usize) -> IntegerMatrix {
    IntegerMatrix::from_rows_with_width(rows, cols, Coeff::Integers).unwrap()
}

/// Random complex `C^0 → … → C^k`: each differential is a random matrix
/// composed with a basis of the left kernel of the previous one.
fn complex_from(ranks: Vec<usize>, entries: Vec<i64>) -> CochainComplex {
    let mut it = entries.into_iter().cycle();
    let mut diffs: Vec<IntegerMatrix> = Vec::new();
    for w in ranks.windows(2) {
        let (src, dst) = (w[0], w[1]);
        let d = match diffs.last() {
            None => {
                let rows: Vec<Vec<i64>> = (0..dst).map(|_| (0..src).map(|_| it.next().unwrap()).collect()).collect();
                rows_to_matrix(&rows, src)
            }
            Some(prev) => {
                // rows of k^T annihilate the image of prev
                let k = if prev.cols() == 0 || prev.is_zero() {
                    IntegerMatrix::identity(src, Coeff::Integers)
                } else {
                    IntegerSolver::new(&prev.transpose()).unwrap().kernel_basis()
                };
                let kk = k.cols();
                let rows: Vec<Vec<i64>> = (0..dst).map(|_| (0..kk).map(|_| it.next().unwrap()).collect()).collect();
                rows_to_matrix(&rows, kk).mul(&k.transpose()).unwrap()
            }
        };
        diffs.push(d);
    }
    build_complex(0, ranks, diffs, Coeff::Integers).unwrap()
}

fn complexes() -> impl Strategy<Value = CochainComplex> {
    (proptest::collection::vec(0usize..=5, 1..=5), proptest::collection::vec(-3i64..=3, 1..=64))
        .prop_map(|(ranks, entries)| complex_from(ranks, entries))
}

/// `dim H^n(C ⊗ 𝔽_p)` by plain Gaussian elimination.
fn field_dim(c: &CochainComplex, n: i64, p: u32) -> usize {
    c.rank_at(n) - rank_mod_p(&c.differential_at(n), p) - rank_mod_p(&c.differential_at(n - 1), p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn euler_characteristic(c in complexes()) {
        let homology: i64 = c
            .degrees()
            .map(|n| {
                let r = c.cohomology_at(n).unwrap().free_rank() as i64;
                if n % 2 == 0 { r } else { -r }
            })
            .sum();
        prop_assert_eq!(c.euler_characteristic(), homology);
    }

    #[test]
    fn field_oracle_agreement(c in complexes(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let cp = c.with_coeff(Coeff::ModP(p));
        for n in c.degrees() {
            prop_assert_eq!(cp.cohomology_at(n).unwrap().free_rank(), field_dim(&c, n, p));
        }
    }

    #[test]
    fn universal_coefficients(c in complexes(), p in prop::sample::select(vec![2u32, 3])) {
        for n in c.degrees() {
            let h = c.cohomology_at(n).unwrap();
            let h_next = c.cohomology_at(n + 1).unwrap();
            let expected = h.free_rank() + h.p_divisible_factors(p) + h_next.p_divisible_factors(p);
            prop_assert_eq!(field_dim(&c, n, p), expected);
        }
    }
}

#[test]
fn out_of_range_degrees_are_trivial() {
    let c = complex_from(vec![2, 3, 1], vec![1, -2, 3, 0, 2, 1]);
    for n in [-5, -1, 3, 10] {
        assert!(c.cohomology_at(n).unwrap().is_trivial());
    }
}
