use hodge_trees::arith::ExactRational;
use hodge_trees::engine::{canonicalize, recursion_terms, WEngine};
use hodge_trees::hodge::{hodge_integral, hodge_table, HodgeQuery};
use hodge_trees::oracle::{gf_expand, oracle_integral};
use hodge_trees::trees::{for_each_tree, tree_sum, tree_sum_by_enumeration, tree_weight};
use proptest::prelude::*;

#[test]
fn table_is_positive_and_matches_oracle() {
    let mut e = WEngine::new();
    let gf = gf_expand(6).unwrap();
    for row in hodge_table(&mut e, 6).unwrap() {
        assert!(row.integral.is_positive(), "{row:?}");
        assert!(row.integral.is_canonical());
        assert_eq!(row.integral, oracle_integral(row.g, row.i, &gf).unwrap());
    }
}

#[test]
fn lambda_g_tree_identity_against_enumeration() {
    let mut e = WEngine::new();
    for g in 0..=3u32 {
        for n in 1..=5u32 {
            if (g, n) == (0, 1) {
                continue;
            }
            let w = e.w(g as i64, g as i64, &vec![1; n as usize]).unwrap();
            assert_eq!(w, tree_sum_by_enumeration(g, n), "g={g} n={n}");
            assert_eq!(w, tree_sum(g, n), "g={g} n={n}");
        }
    }
}

#[test]
fn tree_weights_are_positive() {
    for (g, n) in [(1, 4), (2, 4), (3, 3)] {
        for_each_tree(g, n, |t, _| {
            assert!(tree_weight(t).unwrap().is_positive());
        });
    }
}

#[test]
fn genus_zero_w_numbers_are_one() {
    let mut e = WEngine::new();
    for w in [vec![1, 2, 3], vec![5, 1, 1, 2], vec![4, 4]] {
        assert_eq!(e.w(0, 0, &w).unwrap(), ExactRational::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integral_independent_of_aux(
        g in 1i64..=3,
        i_frac in 0.0f64..=1.0,
        aux in proptest::collection::vec(1i64..=4, 1..=2),
    ) {
        let i = ((g as f64) * i_frac).round() as i64;
        let mut e = WEngine::new();
        let base = hodge_integral(&mut e, &HodgeQuery::new(g, i).unwrap()).unwrap();
        let other = hodge_integral(&mut e, &HodgeQuery::with_weights(g, i, &aux).unwrap()).unwrap();
        prop_assert_eq!(base, other);
    }

    #[test]
    fn recursion_conserves_weight(
        weights in proptest::collection::vec(1i64..=5, 1..=4),
        g in 0i64..=3,
        di in 0i64..=3,
    ) {
        let i = (g - di).max(0);
        let key = canonicalize(&weights, g, i).unwrap();
        prop_assume!(key.exponent() > 0 && key.base_value().is_none());
        for (c, child) in recursion_terms(&key).unwrap() {
            prop_assert!(c.is_positive());
            prop_assert_eq!(child.etas.total(), key.etas.total());
            prop_assert_eq!(child.exponent(), key.exponent() - 1);
        }
    }

    #[test]
    fn values_are_reduced(
        weights in proptest::collection::vec(1i64..=4, 1..=3),
        g in 1i64..=3,
    ) {
        let mut e = WEngine::new();
        for i in 0..=g {
            let key = canonicalize(&weights, g, i).unwrap();
            if key.exponent() > 0 || key.base_value().is_some() {
                prop_assert!(e.w_value(&key).unwrap().is_canonical());
            }
        }
    }
}
