mod oracle;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use higher_dirac::analysis::Analysis;
use higher_dirac::cohomology::{
    block_oracle, class_signature, dirac_index, higher_dirac_cohomology, index_identity_check, infchar_degeneration_check,
    vogan_check, CohomologyReport,
};
use higher_dirac::fuzz::OperatorCase;
use higher_dirac::jordan::{jordan_decomposition, jordan_decomposition_seeded};
use higher_dirac::linalg::{image, kernel, rat, Matrix, Subspace};
use higher_dirac::module::{build_finite_dim, build_verma, check_relations, direct_sum};
use higher_dirac::ndiff::{block_contribution, n_cohomology_dims, stable_alternating_sum, NDifferential};
use higher_dirac::triangle::triangle_criterion;
use higher_dirac::weight::{Parity, Weight};

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> Matrix {
    let r: Vec<Vec<_>> = (0..rows).map(|i| (0..cols).map(|j| rat(entries[i * cols + j])).collect()).collect();
    Matrix::from_rows(&r)
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

fn planted() -> impl Strategy<Value = Vec<(usize, Weight, Parity)>> {
    prop::collection::vec((1usize..=6, prop_oneof![Just(Weight(-1)), Just(Weight(1))], parity()), 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_nullity(m in small_matrix()) {
        let k = kernel(&m);
        prop_assert_eq!(k.dim() + m.rank(), m.cols());
        prop_assert_eq!(m.rank(), oracle::rank(&oracle::rows(&m)));
        for v in k.vectors() {
            prop_assert!(m.mul_vec(&v).iter().all(|x| *x == rat(0)));
        }
        prop_assert_eq!(image(&m).dim(), m.rank());
    }

    #[test]
    fn sum_and_intersection_dims(a in small_matrix(), b in small_matrix()) {
        let n = a.rows();
        let b = Matrix::from_columns(n, &b.columns().into_iter().map(|mut c| { c.resize(n, rat(0)); c }).collect::<Vec<_>>());
        let (sa, sb) = (image(&a), image(&b));
        let sum = sa.sum(&sb).unwrap();
        let meet = sa.intersect(&sb).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), sa.dim() + sb.dim());
        prop_assert!(meet.is_subspace_of(&sa).unwrap() && meet.is_subspace_of(&sb).unwrap());
        prop_assert!(sa.is_subspace_of(&sum).unwrap());
        prop_assert_eq!(Subspace::span(n, sa.vectors()), sa);
    }

    #[test]
    fn inverse_round_trip(e in prop::collection::vec(-4i64..=4, 16)) {
        let m = matrix(4, 4, &e);
        match m.inverse() {
            Some(inv) => prop_assert_eq!(&m * &inv, Matrix::identity(4)),
            None => prop_assert!(m.rank() < 4),
        }
    }

    #[test]
    fn triangle_criterion_matches_search(h1 in 0usize..30, h2 in 0usize..30, h3 in 0usize..30) {
        let cert = triangle_criterion(h1, h2, h3);
        let sols = oracle::triangle_solutions([h1, h2, h3]);
        prop_assert_eq!(cert.exists(), !sols.is_empty());
        if let Some(a) = cert.a {
            prop_assert_eq!(sols, vec![a]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planted_jordan_type_recovered(blocks in planted(), pairs in 0usize..=2, seed in any::<u64>()) {
        let case = OperatorCase::plant(&blocks, pairs, &mut ChaCha8Rng::seed_from_u64(seed));
        let d = jordan_decomposition(&case.space).unwrap();
        let mut expected: Vec<(usize, Weight, Parity)> = blocks.clone();
        expected.sort();
        let mut got: Vec<(usize, Weight, Parity)> = d.blocks.iter().map(|b| (b.size(), b.weight, b.bottom_parity)).collect();
        got.sort();
        prop_assert_eq!(&got, &expected);
        let again = jordan_decomposition_seeded(&case.space, seed ^ 1).unwrap();
        prop_assert_eq!(again.signature(), d.signature());

        // the oracle reads the same type off ranks of the conjugated operator
        for (&w, s) in case.space.sectors() {
            let census = oracle::census(s.dirac(), s.parities());
            for (size, counts) in census {
                for (p, n) in Parity::BOTH.iter().zip(counts) {
                    let planted = blocks.iter().filter(|b| **b == (size, w, *p)).count();
                    prop_assert_eq!(planted, n);
                }
            }
        }
    }

    #[test]
    fn cohomology_is_odd_block_bottoms(blocks in planted(), seed in any::<u64>()) {
        let case = OperatorCase::plant(&blocks, 1, &mut ChaCha8Rng::seed_from_u64(seed));
        let d = jordan_decomposition(&case.space).unwrap();
        for k in 0..=3 {
            let mut expected: Vec<(Weight, Parity)> = blocks
                .iter()
                .filter(|b| b.0 == 2 * k + 1)
                .map(|b| (b.1, b.2))
                .collect();
            expected.sort();
            let got = class_signature(&higher_dirac_cohomology(&case.space, k).unwrap());
            prop_assert_eq!(&got, &expected);
            prop_assert_eq!(block_oracle(&d, k), expected);
        }
        let r = CohomologyReport::compute(&case.space).unwrap();
        prop_assert_eq!(dirac_index(&r), case.space.parity_character());
    }

    #[test]
    fn n_cohomology_by_blocks(blocks in planted(), extra in 0usize..=3, seed in any::<u64>()) {
        let case = OperatorCase::plant(&blocks, 0, &mut ChaCha8Rng::seed_from_u64(seed));
        let order = case.space.nilpotency_order();
        let n = order + extra;
        let nd = NDifferential::new(case.space.clone(), n).unwrap();
        let dims = n_cohomology_dims(&nd).unwrap();
        for i in 1..n {
            let expected: usize = blocks
                .iter()
                .map(|&(k, _, _)| (1..=k).filter(|&j| block_contribution(j, k, n, i)).count())
                .sum();
            prop_assert_eq!(dims[&i], expected);
        }
        if n.is_multiple_of(2) {
            let h = CohomologyReport::compute(&case.space).unwrap().weight_multiset();
            prop_assert_eq!(stable_alternating_sum(&nd).unwrap(), h);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verma_modules(lambda in -6i64..=6) {
        let depth = (lambda.max(0) as usize + 4).max(8);
        let m = build_verma(Weight(lambda), depth).unwrap();
        prop_assert!(check_relations(&m).passes());
        let a = Analysis::new(&m).unwrap();
        prop_assert!(infchar_degeneration_check(&a.report));
        prop_assert!(vogan_check(&a.report, &rat(lambda + 1)));
        prop_assert!(index_identity_check(&a.tensor, &a.zero, &a.report).unwrap().holds());
        prop_assert_eq!(a.report.signature().len(), 1);
        let deeper = Analysis::new(&build_verma(Weight(lambda), depth + 3).unwrap()).unwrap();
        prop_assert_eq!(deeper.report.signature(), a.report.signature());
    }

    #[test]
    fn direct_sums_add(l1 in -4i64..=2, n in 1usize..=4) {
        let a = build_verma(Weight(l1), 8).unwrap();
        let b = build_finite_dim(n).unwrap();
        let s = Analysis::new(&direct_sum(&[a.clone(), b.clone()])).unwrap();
        let (ra, rb) = (Analysis::new(&a).unwrap(), Analysis::new(&b).unwrap());
        let mut expected = ra.report.signature();
        expected.extend(rb.report.signature());
        expected.sort();
        prop_assert_eq!(s.report.signature(), expected);
        prop_assert_eq!(s.index(), &ra.index() + &rb.index());
    }
}
