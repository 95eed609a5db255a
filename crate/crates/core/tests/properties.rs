use channel_space::io::{channel_to_json, parse_channel, Format};
use channel_space::oracle::oracle_same_decoders;
use channel_space::order::sign_pattern;
use channel_space::random::{random_channel, random_stable_channel, same_cone_variant};
use channel_space::*;
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_vector() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(0i64..5, 1..7)
        .prop_map(|v| v.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
}

fn vector_of(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(0i64..4, n)
        .prop_map(|v| v.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
}

fn ranking(n: usize) -> impl Strategy<Value = Ranking> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|p| Ranking::from_perm(p).unwrap())
}

fn ranking_pair(max_n: usize) -> impl Strategy<Value = (Ranking, Ranking)> {
    (1..=max_n).prop_flat_map(|n| (ranking(n), ranking(n)))
}

proptest! {
    #[test]
    fn ranks_are_dense(v in small_vector()) {
        let w = weak_order_column(&v, &TieRule::Exact);
        let mut used: Vec<usize> = w.ranks().to_vec();
        used.sort();
        used.dedup();
        prop_assert_eq!(used, (1..=w.num_blocks()).collect::<Vec<_>>());
        prop_assert_eq!(w.blocks().iter().map(Vec::len).sum::<usize>(), v.len());
    }

    #[test]
    fn weak_orders_are_the_sign_fibers((x, y) in (1usize..7).prop_flat_map(|n| (vector_of(n), vector_of(n)))) {
        let same_order = weak_order_column(&x, &TieRule::Exact) == weak_order_column(&y, &TieRule::Exact);
        prop_assert_eq!(same_order, sign_pattern(&x) == sign_pattern(&y));
    }

    #[test]
    fn weak_orders_are_scale_invariant(x in small_vector(), num in 1i64..100, den in 1i64..100) {
        let lambda = BigRational::new(num.into(), den.into());
        let scaled: Vec<BigRational> = x.iter().map(|v| v * &lambda).collect();
        prop_assert_eq!(weak_order_column(&x, &TieRule::Exact), weak_order_column(&scaled, &TieRule::Exact));
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, t in 1i64..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_channel(&mut rng, n, m, 2);
        let b = if seed % 2 == 0 {
            same_cone_variant(&a, &BigRational::new(t.into(), 10.into()))
        } else {
            random_channel(&mut rng, n, m, 2)
        };
        let c = random_channel(&mut rng, n, m, 2);
        let eq = |x: &Channel, y: &Channel| decoding_equivalent(x, y, &TieRule::Exact).unwrap();
        prop_assert!(eq(&a, &a));
        prop_assert_eq!(eq(&a, &b), eq(&b, &a));
        if eq(&a, &b) && eq(&b, &c) {
            prop_assert!(eq(&a, &c));
        }
        prop_assert_eq!(eq(&a, &b), oracle_same_decoders(&a, &b).unwrap());
    }

    #[test]
    fn s_pair_is_symmetric_and_bounded((s, p) in ranking_pair(40)) {
        let n = s.len();
        let sp = s_pair(&s, &p).unwrap().value;
        prop_assert_eq!(&sp, &s_pair(&p, &s).unwrap().value);
        prop_assert!(sp >= BigUint::from(n));
        let top = AgreementCount::total_codes(n);
        prop_assert!(sp <= top);
        prop_assert_eq!(sp == top, s == p);
        prop_assert_eq!(s_single(&s).value, s_single(&s.inverse()).value);
    }

    #[test]
    fn decoding_distance_separates_points((s, p) in ranking_pair(12)) {
        let d = decoding_distance(&s, &p).unwrap();
        prop_assert_eq!(d.clone(), decoding_distance(&p, &s).unwrap());
        prop_assert_eq!(d == BigRational::from_integer(0.into()), s == p);
    }

    #[test]
    fn formula_matches_enumeration((s, p) in ranking_pair(12)) {
        prop_assert_eq!(s_pair(&s, &p).unwrap(), oracle::oracle_s_pair(&s, &p).unwrap());
    }

    #[test]
    fn transposition_delta_matches_direct_difference(s in (2usize..30).prop_flat_map(ranking), pick in any::<prop::sample::Index>()) {
        let n = s.len();
        let r = pick.index(n - 1);
        let tau = Ranking::transposition(n, r).unwrap();
        let direct = num_bigint::BigInt::from(s_single(&tau.compose(&s).unwrap()).value)
            - num_bigint::BigInt::from(s_single(&s).value);
        prop_assert_eq!(transposition_delta(&s, r).unwrap(), direct);
    }

    #[test]
    fn kendall_is_a_metric((a, b) in ranking_pair(9), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random::random_ranking(&mut rng, a.len());
        let d = |x: &Ranking, y: &Ranking| kendall_tau(x, y).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b) == 0, a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn radial_distance_range_and_cone_dependence(seed in any::<u64>(), n in 2usize..7, m in 2usize..5, t in 1i64..100) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_stable_channel(&mut rng, n, m);
        let q = random_stable_channel(&mut rng, n, m);
        let report = radial_agreement(&p, &q, &Prior::Uniform, &TieRule::Exact).unwrap();
        let zero = BigRational::from_integer(0.into());
        let max = BigRational::from_integer(1.into())
            - BigRational::new(n.into(), AgreementCount::total_codes(n).into());
        prop_assert!(report.distance >= zero && report.distance <= max);
        prop_assert_eq!(&report.probability + &report.distance, BigRational::from_integer(1.into()));
        prop_assert_eq!(metrics::total_norm(&report), BigRational::from_integer(n.into()));
        let twin = same_cone_variant(&q, &BigRational::new(t.into(), 100.into()));
        prop_assert_eq!(
            radial_decoding_distance(&p, &twin, &Prior::Uniform, &TieRule::Exact).unwrap(),
            report.distance
        );
    }

    #[test]
    fn channel_json_round_trip(seed in any::<u64>(), n in 1usize..6, m in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(&mut rng, n, m, 50);
        let text = channel_to_json(&ch).to_string();
        prop_assert_eq!(parse_channel(&text, Format::Json, &Validation::default()).unwrap(), ch);
    }
}
