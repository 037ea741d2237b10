use num_bigint::BigInt;
use num_rational::BigRational;
use sixfold::hexagrid::{
    alternating_tokens, build_grid, build_grid_from_tokens, check_genericity, dualize, Centering,
};
use sixfold::inflation::Variation;
use sixfold::matching::{find_stars_and_hexagons, translation_scan, validate, ConfigurationKind};
use sixfold::tile::{LabelTable, TileKind};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn v1_dual_validates() {
    for v in Variation::ALL {
        for d in [q(1, 3), q(1, 5), q(2, 5)] {
            let g = build_grid(v, 3, &d, Centering::TwoSided).unwrap();
            assert!(check_genericity(&g).is_ok());
            let p = dualize(&g).unwrap();
            let r = validate(&p, &LabelTable::default_table());
            let c = p.counts();
            eprintln!(
                "{v} {d}: {} tiles, {} acute, {} violations",
                p.len(),
                c.acute_whole,
                r.violations.len()
            );
            assert!(r.is_valid(), "{v} {d}");
        }
    }
}

#[test]
fn equal_spacing_is_rhombille() {
    let g = build_grid(Variation::V1, 2, &q(1, 4), Centering::TwoSided).unwrap();
    let p = dualize(&g).unwrap();
    assert!(p.iter().all(|t| t.tile.kind == TileKind::Obtuse));
    assert!(validate(&p, &LabelTable::default_table()).is_valid());
    let r = translation_scan(&p, 4.0, 4.0).unwrap();
    assert!(!r.translations_found.is_empty());
}

#[test]
fn alternating_has_stars_and_hexagons() {
    let g = build_grid_from_tokens(alternating_tokens(40), &q(1, 3)).unwrap();
    let p = dualize(&g).unwrap();
    let conf = find_stars_and_hexagons(&p);
    let stars = conf
        .iter()
        .filter(|c| c.kind == ConfigurationKind::Star)
        .count();
    let hex = conf
        .iter()
        .filter(|c| c.kind == ConfigurationKind::Hexagon)
        .count();
    eprintln!(
        "stars {stars} hex {hex} viol {}",
        validate(&p, &LabelTable::default_table()).violations.len()
    );
    assert!(stars > 0 && hex > 0);
    let r = translation_scan(&p, 5.0, 6.0).unwrap();
    eprintln!("{:?}", r.translations_found);
    assert!(!r.translations_found.is_empty());
}

#[test]
fn dual_reproduces_star_seeded_patch() {
    use sixfold::hexagrid::star_seed;
    use sixfold::inflation::{inflate, rule};
    use std::collections::HashMap;
    for v in Variation::ALL {
        let g = build_grid(v, 2, &q(1, 3), Centering::TwoSided).unwrap();
        let dual = dualize(&g).unwrap();
        let mut sub = star_seed(v);
        for _ in 0..4 {
            sub = inflate(&sub, rule(v)).unwrap();
        }
        let idx: HashMap<_, _> = sub.iter().map(|t| (t.tile.key(), t.tile)).collect();
        let mut n = 0;
        for t in dual.iter().filter(|t| t.tile.anchor.norm4() <= 4 * 15 * 15) {
            assert_eq!(
                idx.get(&t.tile.key()),
                Some(&t.tile),
                "{v} at {:?}",
                t.tile.anchor
            );
            n += 1;
        }
        assert!(n > 500);
    }
}
