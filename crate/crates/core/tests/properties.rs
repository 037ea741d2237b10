use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sixfold::hexagrid::{build_grid, check_genericity, dualize, Centering};
use sixfold::matching::validate;
use sixfold::seqsub::{expand, letter_counts, word, SubRule};
use sixfold::{generate, LabelTable, LatticePoint, Patch, TileKind, Variation};

fn letters(n: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('X'), Just('Y')], n)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotation_preserves_norm(a in -50i64..50, b in -50i64..50, k in 0i64..6) {
        let p = LatticePoint::new(a, b);
        prop_assert_eq!(p.rotated(k).norm4(), p.norm4());
        prop_assert_eq!(p.rotated(k).rotated(6 - k), p);
    }

    #[test]
    fn counts_match_expansion(x in letters(3), y in letters(3), depth in 0u32..6) {
        let r = SubRule::new(&x, &y).unwrap();
        let w = expand(&r, &word("X"), depth);
        let (cx, cy) = letter_counts(&r, &word("X"), depth);
        prop_assert_eq!((w.counts().0 as u128, w.counts().1 as u128), (cx, cy));
        prop_assert_eq!(w.len(), 3usize.pow(depth));
    }

    #[test]
    fn generic_duals_validate(num in 1i64..40, v in 0usize..2) {
        let delta = BigRational::new(BigInt::from(num), BigInt::from(83));
        let g = build_grid(Variation::ALL[v], 2, &delta, Centering::TwoSided).unwrap();
        if check_genericity(&g).is_ok() {
            let p = dualize(&g).unwrap();
            prop_assert!(validate(&p, &LabelTable::default_table()).is_valid());
        }
    }

    #[test]
    fn rotated_patches_validate(k in 1i64..6, v in 0usize..2, seed in 0usize..2) {
        let p = generate(Variation::ALL[v], TileKind::ALL[seed], 3).unwrap();
        let mut q = Patch::new();
        q.generation = p.generation;
        for t in p.iter() {
            let mut t = t.clone();
            t.tile = t.tile.rotated(k, LatticePoint::ORIGIN);
            q.tiles.insert(t.tile.key(), t);
        }
        prop_assert!(validate(&q, &LabelTable::default_table()).is_valid());
        prop_assert_eq!(q.counts().units(), p.counts().units());
    }
}
