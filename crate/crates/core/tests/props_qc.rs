mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isodual_core::construct::{
    cubic, matrix_product, vandermonde, vandermonde_product, VandermondeContext,
};
use isodual_core::gf::{Fe, Field};
use isodual_core::lincode::LinearCode;
use isodual_core::qc::{
    frames, is_isodual_qc, is_quasi_cyclic, phi_forward, phi_inverse, Decomposition, Verdict,
};

fn qc_params() -> impl Strategy<Value = (Field, usize, usize, u64)> {
    (
        prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]),
        1usize..=3,
        prop::sample::select(vec![1usize, 2, 3, 4, 5, 7]),
        any::<u64>(),
    )
        .prop_filter_map("gcd(m, q) = 1", |(q, l, m, seed)| {
            let f = Field::of_order(q).unwrap();
            (m as u64 % f.characteristic() as u64 != 0).then_some((f, l, m, seed))
        })
}

/// Random constituents over the component fields, each of dimension at most
/// `max_dim`.
fn random_decomposition(f: &Field, l: usize, m: usize, rng: &mut ChaCha8Rng) -> Decomposition {
    let (_, fr) = frames(f, m).unwrap();
    let codes = fr
        .iter()
        .map(|x| common::random_code(x.field(), l, l, rng))
        .collect();
    Decomposition::from_codes(f, l, m, codes).unwrap()
}

fn brute_weights(c: &LinearCode) -> Vec<u64> {
    let mut h = vec![0u64; c.len() + 1];
    for w in c.codewords(1 << 22).unwrap() {
        h[w.iter().filter(|&&x| x != 0).count()] += 1;
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_round_trip(
        q in prop::sample::select(vec![2u64, 3, 5, 7, 9]),
        l in 1usize..=6,
        m in 1usize..=8,
        seed in any::<u64>(),
    ) {
        let f = Field::of_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Fe> = (0..l * m).map(|_| rng.gen_range(0..q as Fe)).collect();
        let polys = phi_forward(&f, &v, l, m).unwrap();
        prop_assert_eq!(polys.len(), l);
        prop_assert_eq!(phi_inverse(&polys, l, m).unwrap(), v);
    }

    #[test]
    fn recombine_is_quasi_cyclic_and_inverts((f, l, m, seed) in qc_params()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dec = random_decomposition(&f, l, m, &mut rng);
        let code = dec.recombine().unwrap();
        prop_assert!(is_quasi_cyclic(code.code(), l).unwrap());
        prop_assert_eq!(code.dim(), dec.total_dim());
        prop_assert_eq!(&code.decompose().unwrap(), &dec);
        let again = common::random_qc(&f, l, m, &mut rng);
        prop_assert_eq!(again.decompose().unwrap().recombine().unwrap(), again);
    }

    #[test]
    fn dual_matches_constituent_dual((f, l, m, seed) in qc_params()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = random_decomposition(&f, l, m, &mut rng).recombine().unwrap();
        // `dual` compares the nullspace dual with the constituent prediction
        let d = code.dual().unwrap();
        prop_assert_eq!(d.code(), &code.code().dual());
        prop_assert_eq!(d.decompose().unwrap(), code.decompose().unwrap().dual().unwrap());
    }

    #[test]
    fn verified_isodual_has_half_dimension_and_equal_weights(
        q in prop::sample::select(vec![3u64, 5, 7]),
        m in prop::sample::select(vec![2usize, 3, 4]),
        seed in any::<u64>(),
    ) {
        let f = Field::of_order(q).unwrap();
        prop_assume!(m as u64 % q != 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, fr) = frames(&f, m).unwrap();
        // half-dimensional components make isoduality likely but not certain
        let codes = fr
            .iter()
            .map(|x| common::random_code(x.field(), 2, 1, &mut rng))
            .collect();
        let code = Decomposition::from_codes(&f, 2, m, codes).unwrap().recombine().unwrap();
        let r = is_isodual_qc(&code, 1 << 24).unwrap();
        if r.verdict == Verdict::Verified {
            prop_assert_eq!(2 * code.dim(), code.len());
            prop_assert_eq!(brute_weights(code.code()), brute_weights(&code.code().dual()));
        }
        if let Some(w) = &r.global_witness {
            prop_assert!(w.verify(code.code(), &code.code().dual()));
        }
    }

    #[test]
    fn plotkin_product_by_enumeration(
        q in prop::sample::select(vec![3u64, 5, 7, 9]),
        n in 1usize..=4,
        seed in any::<u64>(),
    ) {
        let f = Field::of_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_code(&f, n, 2, &mut rng);
        let v = common::random_code(&f, n, 2, &mut rng);
        prop_assume!((q as f64).powi((u.k() + v.k()) as i32) <= 1e5);
        let vc = vandermonde(&f, 1).unwrap();
        let prod = vandermonde_product(&[u.clone(), v.clone()], &vc).unwrap();
        prop_assert!(is_quasi_cyclic(prod.code(), n).unwrap());
        let mut expected: Vec<Vec<Fe>> = Vec::new();
        for a in u.codewords(1 << 20).unwrap() {
            for b in v.codewords(1 << 20).unwrap() {
                let plus = a.iter().zip(&b).map(|(&x, &y)| f.add(x, y));
                let minus = a.iter().zip(&b).map(|(&x, &y)| f.sub(x, y));
                expected.push(plus.chain(minus).collect());
            }
        }
        expected.sort();
        expected.dedup();
        let mut got = prod.code().codewords(1 << 20).unwrap();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn vandermonde_scaling_and_recovery(
        case in prop::sample::select(vec![(5u64, 1u32), (5, 2), (9, 1), (9, 3), (13, 2), (7, 1)]),
        n in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let f = Field::of_order(case.0).unwrap();
        let vc: VandermondeContext = vandermonde(&f, case.1).unwrap();
        let k = vc.size();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let codes: Vec<LinearCode> = (0..k).map(|_| common::random_code(&f, n, n, &mut rng)).collect();
        // 2^-a rescales every block row, leaving the row space unchanged
        prop_assert_eq!(
            matrix_product(&codes, &vc.vinv).unwrap(),
            matrix_product(&codes, &vc.product_matrix()).unwrap()
        );
        let prod = vandermonde_product(&codes, &vc).unwrap();
        prop_assert!(is_quasi_cyclic(prod.code(), n).unwrap());
        prop_assert_eq!(prod.co_index(), k);
        // the component at the root alpha^s is the s-th input
        let dec = prod.decompose().unwrap();
        for comp in &dec.components {
            let s = (0..k).find(|&s| f.pow(vc.alpha, s as u64) == comp.frame.root).unwrap();
            prop_assert_eq!(&comp.code, &codes[s]);
        }
    }

    #[test]
    fn cubic_round_trip(
        q in prop::sample::select(vec![2u64, 5]),
        l in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let f = Field::of_order(q).unwrap();
        let big = Field::of_order(q * q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c1 = common::random_code(&f, l, l, &mut rng);
        let c2 = common::random_code(&big, l, l, &mut rng);
        // `cubic` itself checks the result against recombination both ways
        let code = cubic(&c1, &c2).unwrap();
        prop_assert_eq!((code.index(), code.co_index()), (l, 3));
        let dec = code.decompose().unwrap();
        prop_assert_eq!(&dec.components[0].code, &c1);
        prop_assert_eq!(&dec.components[1].code, &c2);
    }
}
