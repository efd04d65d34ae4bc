mod common;

use common::{incidence, matmul, pgd_pool, transpose};
use pgd::algebra::concurrence_type;
use pgd::spectra::verify_three_eigenvalues;
use pgd::{
    classify, complement, concurrence, dual, flag_count, is_isomorphic, multiset_union, tensor_expand, verify_pgd,
    IncidenceStructure,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn arbitrary_design(max_v: usize, max_b: usize) -> impl Strategy<Value = IncidenceStructure> {
    (2..=max_v).prop_flat_map(move |v| {
        (1..v).prop_flat_map(move |k| {
            prop::collection::vec(subsequence((0..v).collect::<Vec<_>>(), k), 1..=max_b)
                .prop_map(move |blocks| IncidenceStructure::new(v, blocks).unwrap())
        })
    })
}

fn relabelled_pgd() -> impl Strategy<Value = (String, IncidenceStructure)> {
    let pool = pgd_pool();
    (0..pool.len(), any::<u64>()).prop_map(move |(i, seed)| {
        let (name, d) = &pool[i];
        let mut perm: Vec<usize> = (0..d.v()).collect();
        let mut s = seed;
        for j in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(j, (s >> 33) as usize % (j + 1));
        }
        (name.clone(), d.relabel(&perm))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn concurrence_row_sums_and_diagonal(d in arbitrary_design(7, 10)) {
        let c = d.pair_counts();
        let degrees = d.degrees();
        for x in 0..d.v() {
            prop_assert_eq!(c.get(x, x), degrees[x] as i64);
        }
        if let Ok(t) = d.tactical_params() {
            for x in 0..d.v() {
                prop_assert_eq!(c.row(x).iter().sum::<i64>(), (t.r * t.k) as i64);
            }
        }
    }

    #[test]
    fn union_adds_concurrences(a in arbitrary_design(6, 6), blocks in prop::collection::vec(any::<u64>(), 1..6)) {
        let v = a.v();
        let k = a.blocks()[0].len();
        let other: Vec<Vec<usize>> = blocks.iter().map(|&s| {
            let mut pts: Vec<usize> = (0..v).collect();
            let mut s = s;
            for j in (1..v).rev() {
                s = s.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                pts.swap(j, (s >> 33) as usize % (j + 1));
            }
            pts.truncate(k);
            pts
        }).collect();
        let b = IncidenceStructure::new(v, other).unwrap();
        let u = multiset_union(&a, &b).unwrap();
        prop_assert_eq!(u.pair_counts(), a.pair_counts().add(&b.pair_counts()));
    }

    #[test]
    fn tensor_expansion_law(d in arbitrary_design(5, 5), m in 1usize..4, n in 1usize..4) {
        let t = tensor_expand(&d, m, n);
        let c = d.pair_counts();
        let ct = t.pair_counts();
        let v = d.v();
        prop_assert_eq!(t.v(), v * m);
        prop_assert_eq!(t.b(), d.b() * n);
        for x in 0..v * m {
            for y in 0..v * m {
                prop_assert_eq!(ct.get(x, y), n as i64 * c.get(x % v, y % v));
            }
        }
    }

    #[test]
    fn flag_count_is_a_concurrence_sum(d in arbitrary_design(7, 8)) {
        let c = d.pair_counts();
        for (j, block) in d.blocks().iter().enumerate() {
            for x in 0..d.v() {
                let expected: i64 = block.iter().map(|&y| c.get(x, y)).sum();
                prop_assert_eq!(flag_count(&d, x, j).unwrap() as i64, expected);
            }
        }
    }

    #[test]
    fn complement_is_an_involution(d in arbitrary_design(7, 8)) {
        prop_assert_eq!(complement(&complement(&d)), d);
    }

    #[test]
    fn dual_is_an_involution_up_to_isomorphism(d in arbitrary_design(6, 6)) {
        let dd = dual(&dual(&d));
        prop_assert!(is_isomorphic(&dd, &d).unwrap().is_some());
    }

    #[test]
    fn pgd_matrix_identity((name, d) in relabelled_pgd()) {
        let p = verify_pgd(&d).unwrap();
        let n = incidence(&d);
        let nnt_n = matmul(&matmul(&n, &transpose(&n)), &n);
        for x in 0..d.v() {
            for j in 0..d.b() {
                let expected = if n[x][j] == 1 { p.beta } else { p.alpha } as i64;
                prop_assert_eq!(nnt_n[x][j], expected, "{}", name);
            }
        }
    }

    #[test]
    fn small_block_concurrence_laws((name, d) in relabelled_pgd()) {
        let c = concurrence(&d).unwrap();
        for (j, block) in d.blocks().iter().enumerate() {
            match block.as_slice() {
                [x, ..] if block.len() == 3 => {
                    let t = concurrence_type(&d, *x, j).unwrap();
                    prop_assert_eq!(t[0], t[1], "{}", &name);
                    prop_assert_eq!(c.get(block[1], block[2]), t[0], "{}", &name);
                }
                [a, b, e, f] => {
                    prop_assert_eq!(c.get(*a, *b), c.get(*e, *f), "{}", &name);
                    prop_assert_eq!(c.get(*a, *e), c.get(*b, *f), "{}", &name);
                    prop_assert_eq!(c.get(*a, *f), c.get(*b, *e), "{}", &name);
                }
                _ => {}
            }
        }
    }

    #[test]
    fn dual_and_complement_parameters((name, d) in relabelled_pgd()) {
        let p = verify_pgd(&d).unwrap();
        let pd = verify_pgd(&dual(&d)).unwrap();
        prop_assert_eq!((pd.v, pd.b, pd.k, pd.r, pd.alpha, pd.beta), (p.b, p.v, p.r, p.k, p.alpha, p.beta), "{}", &name);
        if let Some(expected) = p.complement() {
            let pc = verify_pgd(&complement(&d)).unwrap();
            prop_assert_eq!(pc, expected, "{}", &name);
        }
    }

    #[test]
    fn classify_ignores_labels((name, d) in relabelled_pgd()) {
        let original = pgd_pool().into_iter().find(|(n, _)| *n == name).unwrap().1;
        prop_assert_eq!(classify(&d), classify(&original), "{}", &name);
    }

    #[test]
    fn three_eigenvalue_multiplicity((name, d) in relabelled_pgd()) {
        let p = verify_pgd(&d).unwrap();
        // kr == n merges the top eigenvalue into the middle one
        prop_assume!(p.n() != p.k * p.r);
        let c = concurrence(&d).unwrap();
        let sigma = verify_three_eigenvalues(&c, (p.k * p.r) as i64, p.n() as i64);
        prop_assert_eq!(sigma, Ok(p.r * (p.v - p.k) / p.n()), "{}", &name);
    }
}
