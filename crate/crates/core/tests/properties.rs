use proptest::prelude::*;

use doob_mds::algebra::{Z4Pair, Z4};
use doob_mds::appendix::all_tables;
use doob_mds::classification::k1::{s_m_bruteforce, s_m_formula};
use doob_mds::codes::{
    codes_equivalent, code_invariant, k_coord, sh_coord, word_add, word_distance, word_from_coords, word_neg,
    word_weight, Code, EquivalenceMap,
};
use doob_mds::format::{parse_any, parse_json, parse_text, to_json, to_text};
use doob_mds::graphs::{k4_permutations, shrikhande, DoobParams};

fn params() -> impl Strategy<Value = DoobParams> {
    (0usize..=4, 0usize..=6)
        .prop_filter("nonempty", |(m, n)| m + n > 0)
        .prop_map(|(m, n)| DoobParams::new(m, n))
}

fn word(p: DoobParams) -> impl Strategy<Value = u64> {
    (proptest::collection::vec(0u8..16, p.m), proptest::collection::vec(0u8..4, p.n))
        .prop_map(move |(sh, k)| word_from_coords(p, &sh, &k))
}

fn three_words() -> impl Strategy<Value = (DoobParams, u64, u64, u64)> {
    params().prop_flat_map(|p| (Just(p), word(p), word(p), word(p)))
}

/// Graph distance in the Doob graph from coordinates: Shrikhande distance is
/// 1 on the six connection differences and 2 on the other nonzero ones.
fn oracle_distance(p: DoobParams, a: u64, b: u64) -> u32 {
    const CONN: [(u8, u8); 6] = [(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)];
    let mut d = 0;
    for i in 0..p.m {
        let (x, y) = (sh_coord(p, a, i), sh_coord(p, b, i));
        let diff = ((x / 4 + 4 - y / 4) % 4, (x % 4 + 4 - y % 4) % 4);
        d += if diff == (0, 0) { 0 } else if CONN.contains(&diff) { 1 } else { 2 };
    }
    for j in 0..p.n {
        d += u32::from(k_coord(p, a, j) != k_coord(p, b, j));
    }
    d
}

fn table_and_map() -> impl Strategy<Value = (Code, EquivalenceMap)> {
    let tables = all_tables();
    (0..tables.len()).prop_flat_map(move |i| {
        let c = all_tables()[i].code.clone();
        let p = c.params();
        let autos = proptest::collection::vec(0..192usize, p.m);
        let kp = proptest::collection::vec(0..24usize, p.n);
        let shp = Just((0..p.m).collect::<Vec<_>>()).prop_shuffle();
        let kcp = Just((0..p.n).collect::<Vec<_>>()).prop_shuffle();
        (Just(c), autos, kp, shp, kcp).prop_map(|(c, a, k, sp, kcp)| {
            let e = EquivalenceMap {
                sh_autos: a.into_iter().map(|i| shrikhande().group[i]).collect(),
                k_perms: k.into_iter().map(|i| k4_permutations()[i]).collect(),
                sh_coord_perm: sp,
                k_coord_perm: kcp,
            };
            (c, e)
        })
    })
}

proptest! {
    #[test]
    fn z4_group_laws(a in 0u8..4, b in 0u8..4, c in 0u8..4) {
        let (a, b, c) = (Z4::new(a), Z4::new(b), Z4::new(c));
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a - a, Z4::ZERO);
        prop_assert_eq!(a + -a, Z4::ZERO);
    }

    #[test]
    fn pair_group_laws(x in 0u8..16, y in 0u8..16, z in 0u8..16) {
        let (x, y, z) = (Z4Pair::from_index(x), Z4Pair::from_index(y), Z4Pair::from_index(z));
        prop_assert_eq!((x + y) + z, x + (y + z));
        prop_assert_eq!(x - y, -(y - x));
        prop_assert_eq!((x - y).class(), (y - x).class());
        prop_assert_eq!(x.to_string().parse::<Z4Pair>().unwrap(), x);
        let o = x.order();
        let mut s = Z4Pair::ZERO;
        for _ in 0..o { s = s + x; }
        prop_assert_eq!(s, Z4Pair::ZERO);
    }

    #[test]
    fn word_arithmetic((p, a, b, c) in three_words()) {
        prop_assert_eq!(word_add(word_add(a, b), c), word_add(a, word_add(b, c)));
        prop_assert_eq!(word_add(a, word_neg(a)), 0);
        prop_assert_eq!(word_weight(p, 0), 0);
        prop_assert_eq!(word_weight(p, a), word_weight(p, word_neg(a)));
    }

    #[test]
    fn distance_is_graph_metric((p, a, b, c) in three_words()) {
        let d = |x, y| word_distance(p, x, y);
        prop_assert_eq!(d(a, b), oracle_distance(p, a, b));
        prop_assert_eq!(d(a, b), d(b, a));
        prop_assert_eq!(d(a, b) == 0, a == b);
        prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        // translation invariance
        prop_assert_eq!(d(word_add(a, c), word_add(b, c)), d(a, b));
        prop_assert!(d(a, b) <= p.length() as u32);
    }

    #[test]
    fn equivalence_preserves_structure((c, e) in table_and_map()) {
        let img = c.apply_equivalence(&e).unwrap();
        prop_assert_eq!(img.len(), c.len());
        prop_assert_eq!(img.distance_distribution(), c.distance_distribution());
        prop_assert!(img.is_mds());
        prop_assert_eq!(code_invariant(&img), code_invariant(&c));
        let back = img.apply_equivalence(&e.inverse()).unwrap();
        prop_assert_eq!(back.words(), c.words());
    }

    #[test]
    fn format_round_trip((c, e) in table_and_map()) {
        let img = c.apply_equivalence(&e).unwrap();
        let t = parse_text(&to_text(&img)).unwrap();
        prop_assert_eq!(t.words(), img.words());
        let j = parse_json(&to_json(&img)).unwrap();
        prop_assert_eq!(j.words(), img.words());
        let a = parse_any(&to_json(&img)).unwrap();
        prop_assert_eq!(a.words(), img.words());
    }

    #[test]
    fn s_m_formula_matches_enumeration(m in 0u64..=200) {
        prop_assert_eq!(s_m_formula(m), s_m_bruteforce(m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn equivalence_search_finds_random_images((c, e) in table_and_map()) {
        let img = c.apply_equivalence(&e).unwrap();
        let found = codes_equivalent(&c, &img).unwrap();
        prop_assert!(found.is_some());
        let map = found.unwrap();
        let mapped = c.apply_equivalence(&map).unwrap();
        prop_assert_eq!(mapped.words(), img.words());
    }
}
