//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use sixfold::dks::{from_dks, to_dks};
use sixfold::hexagrid::{
    alternating_tokens, build_grid, build_grid_from_tokens, check_genericity, dualize, Centering,
    SpacingToken,
};
use sixfold::inflation::{discover_rules, generate_with, Parallelism, DEFAULT_BUDGET};
use sixfold::matching::{
    edge_map, find_stars_and_hexagons, inradius, on_common_lattice, patch_center,
    periodic_rhombille, translation_scan, validate, ConfigurationKind,
};
use sixfold::render::{assign_five_colors, emit_svg, Color, RenderOptions, Scheme};
use sixfold::seqsub::{classify, mat_mul, Periodicity, SubRule};
use sixfold::tile::unit_area;
use sixfold::{ExactScalar, LabelTable, LatticePoint, Patch, TileKind, Variation};

const GEN2_LIMIT: Duration = Duration::from_secs(1);
const GEN6_LIMIT: Duration = Duration::from_secs(30);
const TABLE_LIMIT: Duration = Duration::from_secs(5);
const SCAN_LIMIT: Duration = Duration::from_secs(60);
/// Relative tolerance on the acute:obtuse ratio of the dual against the
/// substitution patch.
const RATIO_TOLERANCE: f64 = 0.10;
const APERIODIC_DEPTH: u32 = 7;
const M: [[u64; 2]; 2] = [[5, 4], [4, 5]];

type Check = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gen(v: Variation, seed: TileKind, n: u32) -> Result<Patch, String> {
    generate_with(v, seed, n, Parallelism::Parallel).map_err(|e| format!("{v} {seed} gen {n}: {e}"))
}

fn expected(seed: TileKind, n: u32) -> (u64, u64) {
    let mut c = match seed {
        TileKind::Acute => (1, 0),
        TileKind::Obtuse => (0, 1),
    };
    for _ in 1..n {
        c = (M[0][0] * c.0 + M[0][1] * c.1, M[1][0] * c.0 + M[1][1] * c.1);
    }
    c
}

fn counts(p: &Patch) -> (Ratio<u64>, Ratio<u64>) {
    let c = p.counts();
    (c.acute(), c.obtuse())
}

fn c1_composition() -> Check {
    let t = Instant::now();
    let mut out = Vec::new();
    for v in Variation::ALL {
        for (seed, want) in [(TileKind::Acute, (5, 4)), (TileKind::Obtuse, (4, 5))] {
            let (a, o) = counts(&gen(v, seed, 2)?);
            ensure(
                a == Ratio::from_integer(want.0) && o == Ratio::from_integer(want.1),
                format!("{v} {seed}: ({a}, {o})"),
            )?;
            out.push(format!("{v} {seed} ({a},{o})"));
        }
    }
    let el = t.elapsed();
    ensure(el < GEN2_LIMIT, format!("took {el:?}"))?;
    Ok(format!(
        "{} in {el:.2?} (limit {GEN2_LIMIT:?})",
        out.join(", ")
    ))
}

/// Criteria 2–4 share the generated patches.
struct Grown {
    patches: Vec<(Variation, TileKind, u32, Patch)>,
    gen6_time: Duration,
    error: Option<String>,
}

fn grow_all() -> Grown {
    let mut g = Grown {
        patches: Vec::new(),
        gen6_time: Duration::ZERO,
        error: None,
    };
    for v in Variation::ALL {
        for seed in TileKind::ALL {
            for n in 2..=6 {
                let t = Instant::now();
                match gen(v, seed, n) {
                    Ok(p) => {
                        if n == 6 {
                            g.gen6_time = g.gen6_time.max(t.elapsed());
                        }
                        g.patches.push((v, seed, n, p));
                    }
                    Err(e) => g.error = Some(e),
                }
            }
        }
    }
    g
}

fn c2_count_law(g: &Grown) -> Check {
    if let Some(e) = &g.error {
        return Err(e.clone());
    }
    for (v, seed, n, p) in &g.patches {
        let (a, o) = counts(p);
        let (ea, eo) = expected(*seed, *n);
        ensure(
            a == Ratio::from_integer(ea) && o == Ratio::from_integer(eo),
            format!("{v} {seed} gen {n}: ({a}, {o}) vs ({ea}, {eo})"),
        )?;
        let units = 9i64.pow(n - 1);
        let want = &unit_area() * &ExactScalar::from_ratios(units, 1, 0, 1);
        ensure(
            p.area() == want,
            format!("{v} {seed} gen {n}: exact area differs from {units} units"),
        )?;
    }
    ensure(
        g.gen6_time < GEN6_LIMIT,
        format!("gen 6 took {:?}", g.gen6_time),
    )?;
    Ok(format!(
        "{} patches exact; gen 6 = 59049 units in {:.2?} (limit {GEN6_LIMIT:?})",
        g.patches.len(),
        g.gen6_time
    ))
}

fn c3_matching(g: &Grown) -> Check {
    let table = LabelTable::default_table();
    let mut edges = 0;
    for (v, seed, n, p) in &g.patches {
        let r = validate(p, &table);
        ensure(
            r.is_valid(),
            format!("{v} {seed} gen {n}: {} violations", r.violations.len()),
        )?;
        edges += r.interior_edges;
    }
    let mut bad = gen(Variation::V1, TileKind::Acute, 3)?;
    let key = *bad.tiles.keys().nth(40).unwrap();
    let t = bad.tiles.get_mut(&key).unwrap();
    t.tile = t.tile.flipped();
    let r = validate(&bad, &table);
    ensure(!r.violations.is_empty(), "flipped tile not detected")?;
    Ok(format!(
        "0 violations over {edges} interior edges; counterexample has {} violations",
        r.violations.len()
    ))
}

fn c4_overlap(g: &Grown) -> Check {
    match &g.error {
        Some(e) => Err(e.clone()),
        None => Ok(format!(
            "no OverlapConflict in {} inflations to gen ≤ 6",
            g.patches.len()
        )),
    }
}

fn c5_variations() -> Check {
    let a = gen(Variation::V1, TileKind::Acute, 2)?;
    let b = gen(Variation::V2, TileKind::Acute, 2)?;
    let table = LabelTable::default_table();
    ensure(
        validate(&a, &table).is_valid() && validate(&b, &table).is_valid(),
        "a variation fails matching",
    )?;
    let ta: BTreeSet<_> = a
        .whole_tiles()
        .map(|t| (t.key(), t.orientation, t.kind))
        .collect();
    let tb: BTreeSet<_> = b
        .whole_tiles()
        .map(|t| (t.key(), t.orientation, t.kind))
        .collect();
    let diff = ta.symmetric_difference(&tb).count();
    ensure(diff > 0, "gen-2 patches are identical")?;
    Ok(format!("{diff} tile poses differ; both validate"))
}

fn c6_table() -> Check {
    let t = Instant::now();
    let rule = |x: &str, y: &str| SubRule::new(x, y).map_err(|e| e.to_string());
    let p1 = classify(&rule("XXX", "YYY")?, APERIODIC_DEPTH);
    let p2 = classify(&rule("XYX", "YXY")?, APERIODIC_DEPTH);
    ensure(p1 == Periodicity::Periodic(1), format!("X→XXX: {p1:?}"))?;
    ensure(p2 == Periodicity::Periodic(2), format!("X→XYX: {p2:?}"))?;
    let mut n = 0;
    for base in [SubRule::v1(), SubRule::v2()] {
        for r in [
            base.clone(),
            base.mirror(),
            base.dual(),
            base.dual().mirror(),
        ] {
            let c = classify(&r, APERIODIC_DEPTH);
            ensure(c == Periodicity::AperiodicAtDepth, format!("{r}: {c:?}"))?;
            n += 1;
        }
    }
    let el = t.elapsed();
    ensure(el < TABLE_LIMIT, format!("took {el:?}"))?;
    Ok(format!("Periodic(1), Periodic(2), {n} aperiodic at depth {APERIODIC_DEPTH} (length 2187) in {el:.2?}"))
}

fn c7_bridge() -> Check {
    let s = SubRule::v1().count_matrix();
    let s2 = mat_mul(s, s);
    ensure(s2 == M, format!("S² = {s2:?}"))?;
    Ok(format!("S = {s:?}, S² = {s2:?}"))
}

fn c8_degenerate() -> Check {
    let equal =
        build_grid(Variation::V1, 2, &q(1, 4), Centering::TwoSided).map_err(|e| e.to_string())?;
    let spacings: BTreeSet<BigRational> = [SpacingToken::A, SpacingToken::B, SpacingToken::C]
        .iter()
        .map(|t| t.value(&q(1, 4)))
        .collect();
    ensure(spacings.len() == 1, "δ = 1/4 spacings are not equal")?;
    let p = dualize(&equal).map_err(|e| e.to_string())?;
    let r = translation_scan(&p, 4.0, 4.0).map_err(|e| e.to_string())?;
    ensure(
        !r.translations_found.is_empty(),
        "equal-spacing dual has no translations",
    )?;
    let alt =
        build_grid_from_tokens(alternating_tokens(40), &q(1, 3)).map_err(|e| e.to_string())?;
    let pa = dualize(&alt).map_err(|e| e.to_string())?;
    let conf = find_stars_and_hexagons(&pa);
    let stars = conf
        .iter()
        .filter(|c| c.kind == ConfigurationKind::Star)
        .count();
    let hexes = conf.len() - stars;
    let ra = translation_scan(&pa, 5.0, 6.0).map_err(|e| e.to_string())?;
    ensure(
        stars > 0 && hexes > 0,
        format!("{stars} stars, {hexes} hexagons"),
    )?;
    ensure(
        !ra.translations_found.is_empty(),
        "AB dual has no translations",
    )?;
    Ok(format!(
        "equal spacing (δ = 1/4): {} translations; AB: {stars} stars, {hexes} hexagons, {} translations. \
         note: δ = 1/2 gives A = 2, B = 1 (unequal); A = B = C = 3/2 needs δ = 1/4",
        r.translations_found.len(),
        ra.translations_found.len()
    ))
}

fn window_ratio(p: &Patch, centre: LatticePoint, radius: f64) -> (usize, usize) {
    let mut c = (0, 0);
    for t in p.whole_tiles() {
        let (x, y) = (t.anchor - centre).to_f64();
        if (x * x + y * y).sqrt() <= radius {
            match t.kind {
                TileKind::Acute => c.0 += 1,
                TileKind::Obtuse => c.1 += 1,
            }
        }
    }
    c
}

fn c9_quasiperiodic_dual() -> Check {
    let g =
        build_grid(Variation::V1, 3, &q(1, 3), Centering::TwoSided).map_err(|e| e.to_string())?;
    check_genericity(&g).map_err(|t| format!("{} triple points", t.len()))?;
    let p = dualize(&g).map_err(|e| e.to_string())?;
    let r = validate(&p, &LabelTable::default_table());
    ensure(r.is_valid(), format!("{} violations", r.violations.len()))?;
    let c = patch_center(&p);
    let sub = gen(Variation::V1, TileKind::Acute, 5)?;
    let sc = patch_center(&sub);
    let radius = inradius(&p, c).min(inradius(&sub, sc)) * 0.9;
    let (da, dob) = window_ratio(&p, c, radius);
    let (sa, so) = window_ratio(&sub, sc, radius);
    let (rd, rs) = (da as f64 / dob as f64, sa as f64 / so as f64);
    let rel = (rd - rs).abs() / rs;
    ensure(
        rel <= RATIO_TOLERANCE,
        format!("ratio {rd:.4} vs {rs:.4} ({:.1}%)", rel * 100.0),
    )?;
    Ok(format!(
        "generic, {} tiles, 0 violations; window r = {radius:.2}: dual {da}:{dob} = {rd:.4}, substitution {sa}:{so} = {rs:.4}, \
         difference {:.2}% (tolerance {:.0}%)",
        p.len(),
        rel * 100.0,
        RATIO_TOLERANCE * 100.0
    ))
}

fn c10_aperiodicity() -> Check {
    let t = Instant::now();
    let p = gen(Variation::V1, TileKind::Acute, 5)?;
    let c = patch_center(&p);
    let window = inradius(&p, c) * 2.0 / 3.0;
    let shift = window / 2.0;
    let r = translation_scan(&p, window, shift).map_err(|e| e.to_string())?;
    ensure(
        r.translations_found.is_empty(),
        format!("translations {:?}", r.translations_found),
    )?;
    let control = periodic_rhombille(12, 0);
    let rc = translation_scan(&control, 4.0, 4.0).map_err(|e| e.to_string())?;
    let gens: BTreeSet<i64> = rc.translations_found.iter().map(|s| s.norm4()).collect();
    ensure(
        !rc.translations_found.is_empty(),
        "control has no translations",
    )?;
    let el = t.elapsed();
    ensure(el < SCAN_LIMIT, format!("took {el:?}"))?;
    Ok(format!(
        "gen 5: window {window:.2}, {} shifts ≤ {shift:.2}, none fixed; control: {} translations, shortest |s| = {:.3}; {el:.2?}",
        r.shifts_tested,
        rc.translations_found.len(),
        (*gens.iter().next().unwrap() as f64).sqrt() / 2.0
    ))
}

fn c11_stars() -> Check {
    let mut total = 0;
    for v in Variation::ALL {
        for seed in TileKind::ALL {
            for n in [4, 5] {
                let p = gen(v, seed, n)?;
                let stars: Vec<_> = find_stars_and_hexagons(&p)
                    .into_iter()
                    .filter(|c| c.kind == ConfigurationKind::Star)
                    .collect();
                let centres: Vec<LatticePoint> = stars.iter().map(|s| s.center).collect();
                ensure(!centres.is_empty(), format!("{v} {seed} gen {n}: no stars"))?;
                ensure(
                    on_common_lattice(&centres, 3),
                    format!("{v} {seed} gen {n}: stars off the lattice"),
                )?;
                let l = assign_five_colors(&p).map_err(|e| e.to_string())?;
                let pink: BTreeSet<_> = l.tiles(Color::Pink).copied().collect();
                for s in &stars {
                    ensure(
                        s.tiles.iter().all(|k| pink.contains(k)),
                        format!("{v} {seed} gen {n}: star at {:?} not pink", s.center),
                    )?;
                }
                total += stars.len();
            }
        }
    }
    Ok(format!(
        "{total} stars in 8 patches, all on one spacing-3 lattice and all pink"
    ))
}

fn c12_dks() -> Check {
    let mut figures = 0;
    for v in Variation::ALL {
        for seed in TileKind::ALL {
            for n in 1..=5 {
                let p = gen(v, seed, n)?;
                let d = to_dks(&p, v).map_err(|e| format!("{v} {seed} gen {n}: {e}"))?;
                let back = from_dks(&d).map_err(|e| e.to_string())?;
                ensure(back == p, format!("{v} {seed} gen {n}: round trip differs"))?;
                ensure(
                    d.figure_area() + d.remainder_area() == p.counts().units(),
                    format!("{v} {seed} gen {n}: area"),
                )?;
                let boundary: BTreeSet<LatticePoint> = edge_map(&p)
                    .into_iter()
                    .filter(|(_, inc)| inc.len() == 1)
                    .flat_map(|(e, _)| [e.lo, e.hi])
                    .chain(
                        p.iter()
                            .filter(|t| t.meta.boundary_half())
                            .flat_map(|t| t.tile.vertices()),
                    )
                    .collect();
                for r in &d.remainder {
                    ensure(
                        r.polygon().iter().any(|x| boundary.contains(x)),
                        format!("{v} {seed} gen {n}: interior remainder"),
                    )?;
                }
                figures += d.figures.len();
            }
        }
    }
    Ok(format!("20 patches round-trip exactly; {figures} figures; areas conserved; remainder on the boundary"))
}

fn c13_discovery() -> Check {
    let d = discover_rules().map_err(|e| e.to_string())?;
    let classes = d.classes();
    let cells: BTreeSet<(usize, &str)> = classes
        .keys()
        .filter_map(|s| s.classify())
        .map(|(r, _, c)| (r, c))
        .collect();
    ensure(classes.len() == 8, format!("{} classes", classes.len()))?;
    ensure(cells.len() == 8, "classes do not map to 8 table cells")?;
    ensure(
        d.contains(sixfold::rule(Variation::V1)),
        "shipped V1 rule not found",
    )?;
    let sigs: Vec<String> = classes.iter().map(|(s, n)| format!("{s}:{n}")).collect();
    Ok(format!(
        "{} nodes of budget {DEFAULT_BUDGET}; {} pairings, {} geometry; classes {}",
        d.nodes,
        d.pairings,
        d.geometries.len(),
        sigs.join(" ")
    ))
}

fn c14_determinism() -> Check {
    let opts = RenderOptions::default();
    for v in Variation::ALL {
        let a = generate_with(v, TileKind::Acute, 4, Parallelism::Parallel)
            .map_err(|e| e.to_string())?;
        let b = generate_with(v, TileKind::Acute, 4, Parallelism::Parallel)
            .map_err(|e| e.to_string())?;
        let s =
            generate_with(v, TileKind::Acute, 4, Parallelism::Serial).map_err(|e| e.to_string())?;
        ensure(a == b && a == s, format!("{v}: patches differ"))?;
        for scheme in [
            Scheme::Flat2,
            Scheme::Bars,
            Scheme::Notches(0.2),
            Scheme::FiveColor,
        ] {
            let x = emit_svg(&a, scheme, None, &opts);
            ensure(
                x == emit_svg(&b, scheme, None, &opts) && x == emit_svg(&s, scheme, None, &opts),
                format!("{v} {scheme:?}: SVG differs"),
            )?;
        }
    }
    Ok("gen-4 patches and SVGs (4 schemes) byte-identical across runs and serial/parallel".into())
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn main() {
    let grown = grow_all();
    let checks: Vec<Criterion> = vec![
        ("gen-2 composition", Box::new(c1_composition)),
        ("count-matrix law", Box::new(|| c2_count_law(&grown))),
        ("matching", Box::new(|| c3_matching(&grown))),
        ("overlap consistency", Box::new(|| c4_overlap(&grown))),
        ("variation distinctness", Box::new(c5_variations)),
        ("1D rule table", Box::new(c6_table)),
        ("matrix bridge", Box::new(c7_bridge)),
        ("degenerate hexagrid duals", Box::new(c8_degenerate)),
        ("quasiperiodic dual", Box::new(c9_quasiperiodic_dual)),
        ("aperiodicity evidence", Box::new(c10_aperiodicity)),
        ("star lattice", Box::new(c11_stars)),
        ("darts, kites, shields", Box::new(c12_dks)),
        ("rule discovery", Box::new(c13_discovery)),
        ("determinism", Box::new(c14_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let t = Instant::now();
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("[{tag}] {:>2} {name}: {msg} [{:.2?}]", i + 1, t.elapsed());
    }
    println!(
        "{} of {} criteria passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
