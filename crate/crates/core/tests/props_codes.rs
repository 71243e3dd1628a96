mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isodual_core::cyclic::{
    construct_1, construct_2, construct_3, find_duadic_splittings, CyclicCode, DuadicVariant,
};
use isodual_core::gf::{Fe, Field};
use isodual_core::lincode::{
    equivalence_search, macwilliams, Conjugation, EquivalenceKind, LinearCode,
};
use isodual_core::polyring::{factor_xm_minus_1, Poly};

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]).prop_map(|q| Field::of_order(q).unwrap())
}

fn code_strategy(max_n: usize) -> impl Strategy<Value = LinearCode> {
    (field(), 1..=max_n, any::<u64>()).prop_map(|(f, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::random_code(&f, n, n, &mut rng)
    })
}

/// A random cyclic code: `x^n - 1` split into its irreducible factors, a
/// random subset taken as the generator.
fn cyclic_strategy() -> impl Strategy<Value = CyclicCode> {
    (prop::sample::select(vec![2u64, 3, 4, 5, 7]), 1usize..=24, any::<u64>()).prop_filter_map(
        "length coprime to q, small splitting field",
        |(q, n, seed)| {
            let f = Field::of_order(q).unwrap();
            if n as u64 % f.characteristic() as u64 == 0 {
                return None;
            }
            let ord = isodual_core::arith::multiplicative_order(q % n as u64, n as u64) as u32;
            if q.checked_pow(ord)? > 1 << 20 {
                return None;
            }
            let fac = factor_xm_minus_1(&f, n as u64).ok()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = fac
                .factors()
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .fold(Poly::one(&f), |acc, x| acc.mul(&x.poly));
            CyclicCode::from_gpoly(&f, n, &g).ok()
        },
    )
}

fn brute_weights(c: &LinearCode) -> Vec<u64> {
    let mut h = vec![0u64; c.len() + 1];
    for w in c.codewords(1 << 22).unwrap() {
        h[w.iter().filter(|&&x| x != 0).count()] += 1;
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dual_is_involutive(c in code_strategy(8)) {
        let d = c.dual();
        prop_assert_eq!(c.k() + d.k(), c.len());
        prop_assert_eq!(d.dual(), c.clone());
        prop_assert_eq!(c.hermitian_dual(Conjugation::Identity).unwrap(), d);
    }

    #[test]
    fn hermitian_dual_is_conjugated_dual(
        q in prop::sample::select(vec![4u64, 9, 25]),
        n in 1usize..6,
        seed in any::<u64>(),
    ) {
        let f = Field::of_order(q).unwrap();
        let c = common::random_code(&f, n, n, &mut ChaCha8Rng::seed_from_u64(seed));
        let h = c.hermitian_dual(Conjugation::Involution).unwrap();
        prop_assert_eq!(&h, &c.dual().conjugate(Conjugation::Involution).unwrap());
        // every pair is orthogonal under sum a_i conj(b_i)
        for a in c.generator() {
            for b in h.generator() {
                let s = a.iter().zip(b).fold(0, |acc, (&x, &y)| {
                    f.add(acc, f.mul(x, f.conjugate(y).unwrap()))
                });
                prop_assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn macwilliams_matches_enumeration(c in code_strategy(6)) {
        let wd = c.weight_enumerator_direct(1 << 22).unwrap();
        let predicted = macwilliams(&wd, c.field().order(), c.k());
        let dual = brute_weights(&c.dual());
        let got: Vec<String> = dual.iter().map(u64::to_string).collect();
        prop_assert_eq!(predicted.to_strings(), got);
    }

    #[test]
    fn equivalence_witness_replays(c in code_strategy(7), seed in any::<u64>(), monomial in any::<bool>()) {
        let f = c.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..c.len()).collect();
        perm.shuffle(&mut rng);
        let (d, kind) = if monomial {
            let q = f.order() as Fe;
            let scales: Vec<Fe> = (0..c.len()).map(|_| rng.gen_range(1..q)).collect();
            (c.apply_monomial(&perm, &scales).unwrap(), EquivalenceKind::Monomial)
        } else {
            (c.apply_permutation(&perm).unwrap(), EquivalenceKind::Permutation)
        };
        let w = equivalence_search(&c, &d, kind, 1 << 24).unwrap();
        prop_assert!(w.is_found(), "{:?}", w);
        prop_assert!(w.verify(&c, &d));
    }

    #[test]
    fn cyclic_views_agree(c in cyclic_strategy()) {
        let n = c.len() as u64;
        let lin = c.to_linear();
        prop_assert_eq!(lin.k(), c.dim());
        prop_assert_eq!(c.dual().to_linear(), lin.dual());
        let neg: Vec<u64> = c.defining_set().iter().map(|&e| (n - e) % n).collect();
        let expected: Vec<u64> = (0..n).filter(|e| !neg.contains(e)).collect();
        prop_assert_eq!(c.dual().defining_set().to_vec(), expected);
        for row in lin.generator() {
            let mut shifted = row.clone();
            shifted.rotate_right(1);
            prop_assert!(lin.contains(&shifted));
        }
    }

    #[test]
    fn multipliers_compose(c in cyclic_strategy(), a in 1u64..50, b in 1u64..50) {
        let n = c.len() as u64;
        let unit = |x: u64| isodual_core::arith::gcd(x, n) == 1;
        prop_assume!(unit(a) && unit(b));
        let ab = a * b % n;
        let ab = if n == 1 { 1 } else { ab };
        prop_assert_eq!(
            c.multiplier(a).unwrap().multiplier(b).unwrap(),
            c.multiplier(ab).unwrap()
        );
        // the coordinate action i -> a i mod n gives the same code
        let perm: Vec<usize> = (0..n).map(|i| (i * a % n) as usize).collect();
        prop_assert_eq!(
            c.to_linear().apply_permutation(&perm).unwrap(),
            c.multiplier(a).unwrap().to_linear()
        );
    }
}

fn assert_isodual_pair(field: &Field, pair: (CyclicCode, CyclicCode), what: &str) {
    for c in [pair.0, pair.1] {
        let n = c.len();
        assert_eq!(2 * c.dim(), n, "{what}: dimension");
        let lin = c.to_linear();
        if (field.order() as f64).powi(n as i32 / 2) <= 1e7 {
            let a = lin.weight_enumerator(1 << 24).unwrap();
            let b = lin.dual().weight_enumerator(1 << 24).unwrap();
            assert_eq!(a, b, "{what}: weight enumerators");
        }
        let w = c.is_isodual(1 << 24).unwrap();
        assert!(w.is_found(), "{what}: {w:?}");
        assert!(w.verify(&lin, &lin.dual()), "{what}: replay");
    }
}

#[test]
fn cyclic_constructions_are_isodual() {
    let cases: [(u64, u32, u64); 10] = [
        (3, 1, 5),
        (3, 1, 7),
        (3, 1, 11),
        (3, 1, 13),
        (5, 1, 3),
        (5, 2, 3),
        (7, 1, 3),
        (7, 1, 5),
        (9, 1, 5),
        (13, 2, 3),
    ];
    let mut splittings_used = 0;
    for (q, a, mp) in cases {
        let f = Field::of_order(q).unwrap();
        let tag = format!("q={q} a={a} m'={mp}");
        assert_isodual_pair(&f, construct_1(&f, a, mp).unwrap(), &format!("item 1, {tag}"));
        for which in [(1, 2), (2, 1)] {
            let pair = construct_2(&f, a, mp, None, which).unwrap();
            assert_isodual_pair(&f, pair, &format!("item 2 {which:?}, {tag}"));
        }
        for s in find_duadic_splittings(&f, mp).unwrap().iter().take(2) {
            splittings_used += 1;
            let mut variants = vec![DuadicVariant::Mixed(1), DuadicVariant::Mixed(2)];
            if s.mu_minus_one {
                variants.extend([DuadicVariant::Negation(1), DuadicVariant::Negation(2)]);
            }
            for v in variants {
                let pair = construct_3(&f, a, s, v).unwrap();
                assert_isodual_pair(&f, pair, &format!("item 3 {v:?}, {tag}"));
            }
        }
    }
    assert!(splittings_used > 0);
}
