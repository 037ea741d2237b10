//! Command-line front end: generate, validate, stats, render, grid, dks, seq
//! and rules.

pub mod patch_file;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use sixfold::dks::to_dks;
use sixfold::hexagrid::{build_grid, check_genericity, dualize, parse_delta, Centering};
use sixfold::inflation::discover_rules_with_budget;
use sixfold::matching::{
    find_stars_and_hexagons, inradius, on_common_lattice, patch_center, translation_scan, validate,
    ConfigurationKind,
};
use sixfold::render::{emit_dks_svg, emit_grid_svg, emit_svg, RenderOptions, Scheme};
use sixfold::seqsub::{classify, expand, letter_counts, table8, word, Periodicity, SubRule};
use sixfold::{generate, Error, LabelTable, Patch, TileKind, Variation};

use patch_file::PatchFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BREACH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sixfold", version, about = "Six-fold rhomb tiling engine")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SeedArg {
    Acute,
    Obtuse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SchemeArg {
    Flat,
    Bars,
    Notches,
    Five,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CenteringArg {
    TwoSided,
    OneSided,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Grow a patch from a single seed tile.
    Generate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        variation: u8,
        #[arg(long, value_enum)]
        seed: SeedArg,
        #[arg(long)]
        generations: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check edge matching.
    Validate {
        file: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Counts, star census and a translation scan.
    Stats { file: PathBuf },
    /// Write an SVG picture of a patch.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "flat")]
        scheme: SchemeArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.15)]
        notch_amp: f64,
    },
    /// Build a hexagrid and optionally its dual patch.
    Grid {
        #[arg(long)]
        delta: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        variation: u8,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value = "two-sided")]
        centering: CenteringArg,
        #[arg(long)]
        dual: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Regroup a patch into darts, kites and shields.
    Dks {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Expand a one-dimensional substitution rule.
    Seq {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        classify: bool,
    },
    /// Print the rule table, or search for inflation rules.
    Rules {
        #[arg(long)]
        discover: bool,
        #[arg(long, default_value_t = sixfold::inflation::DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid,
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Invalid) => EXIT_INVALID,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if e.is_invariant_breach() {
                EXIT_BREACH
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn variation(n: u8) -> Variation {
    Variation::from_number(n).expect("clap restricts the range")
}

fn load_patch(path: &Path) -> Result<Patch, Error> {
    PatchFile::parse(&fs::read_to_string(path)?)?.to_patch()
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text)?;
    Ok(())
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Generate {
            variation: v,
            seed,
            generations,
            out,
        } => {
            let kind = match seed {
                SeedArg::Acute => TileKind::Acute,
                SeedArg::Obtuse => TileKind::Obtuse,
            };
            let p = generate(variation(v), kind, generations)?;
            let c = p.counts();
            let json = PatchFile::from_patch(&p).to_json();
            match out {
                Some(path) => {
                    write(&path, &json)?;
                    println!(
                        "generation {} ({}): {} tiles, {} area units ({} acute, {} obtuse)",
                        p.generation,
                        variation(v),
                        p.len(),
                        c.units(),
                        c.acute(),
                        c.obtuse()
                    );
                }
                None => println!("{json}"),
            }
            Ok(())
        }
        Command::Validate { file, labels } => {
            let p = load_patch(&file)?;
            let table = match labels {
                Some(path) => sixfold::data::load_label_table(&fs::read_to_string(path)?)?,
                None => LabelTable::default_table(),
            };
            let r = validate(&p, &table);
            println!("{} violations", r.violations.len());
            println!(
                "{} interior edges, {} boundary edges, {} overfull edges",
                r.interior_edges, r.boundary_edges, r.overfull_edges
            );
            for v in r.violations.iter().take(20) {
                println!(
                    "  mismatch on edge {:?} -> {:?}: symbols {} / {}",
                    v.edge.lo, v.edge.hi, v.labels.0, v.labels.1
                );
            }
            if r.is_valid() {
                Ok(())
            } else {
                Err(Failure::Invalid)
            }
        }
        Command::Stats { file } => {
            let p = load_patch(&file)?;
            stats(&p);
            Ok(())
        }
        Command::Render {
            file,
            scheme,
            out,
            notch_amp,
        } => {
            let p = load_patch(&file)?;
            let scheme = match scheme {
                SchemeArg::Flat => Scheme::Flat2,
                SchemeArg::Bars => Scheme::Bars,
                SchemeArg::Notches => Scheme::notches(notch_amp)?,
                SchemeArg::Five => Scheme::FiveColor,
            };
            let labeling = match scheme {
                Scheme::FiveColor => Some(sixfold::render::assign_five_colors(&p)?),
                _ => None,
            };
            write(
                &out,
                &emit_svg(&p, scheme, labeling.as_ref(), &RenderOptions::default()),
            )?;
            println!("wrote {} tiles to {}", p.len(), out.display());
            Ok(())
        }
        Command::Grid {
            delta,
            variation: v,
            depth,
            centering,
            dual,
            svg,
        } => {
            let delta = parse_delta(&delta)?;
            let centering = match centering {
                CenteringArg::TwoSided => Centering::TwoSided,
                CenteringArg::OneSided => Centering::OneSided,
            };
            let g = build_grid(variation(v), depth, &delta, centering)?;
            let tokens: String = g.tokens.iter().map(|t| t.symbol()).collect();
            println!("delta {} word {} tokens {}", g.delta, g.source.word, tokens);
            println!(
                "{} lines ({} per family)",
                g.line_count(),
                g.families[0].offsets.len()
            );
            let generic = check_genericity(&g);
            match &generic {
                Ok(()) => println!("generic: no three interior lines meet"),
                Err(t) => println!("not generic: {} triple points", t.len()),
            }
            let mut patch = None;
            if dual.is_some() || svg.is_some() {
                if generic.is_ok() {
                    let p = dualize(&g)?;
                    let r = validate(&p, &LabelTable::default_table());
                    let c = p.counts();
                    println!(
                        "dual: {} tiles ({} acute, {} obtuse), {} violations",
                        p.len(),
                        c.acute(),
                        c.obtuse(),
                        r.violations.len()
                    );
                    patch = Some(p);
                } else if dual.is_some() {
                    return Err(Failure::Invalid);
                }
            }
            if let (Some(path), Some(p)) = (&dual, &patch) {
                write(path, &PatchFile::from_patch(p).to_json())?;
            }
            if let Some(path) = svg {
                write(
                    &path,
                    &emit_grid_svg(&g, 0.0, patch.as_ref(), &RenderOptions::default()),
                )?;
            }
            Ok(())
        }
        Command::Dks { file, out, svg } => {
            let p = load_patch(&file)?;
            let d = to_dks(&p, p.variation.unwrap_or(Variation::V1))?;
            let c = d.counts();
            println!(
                "{} darts, {} kites, {} shields, {} remainder pieces; figure area {}, remainder area {}",
                c.darts,
                c.kites,
                c.shields,
                c.remainder,
                d.figure_area(),
                d.remainder_area()
            );
            write(
                &out,
                &serde_json::to_string_pretty(&d).map_err(Error::from)?,
            )?;
            if let Some(path) = svg {
                write(&path, &emit_dks_svg(&d, &RenderOptions::default()))?;
            }
            Ok(())
        }
        Command::Seq {
            rule,
            depth,
            classify: cls,
        } => {
            let r: SubRule = rule.parse()?;
            let (x, y) = letter_counts(&r, &word("X"), depth);
            if x + y <= 100_000 {
                println!("{}", expand(&r, &word("X"), depth));
            }
            println!("length {} (X {x}, Y {y})", x + y);
            if cls {
                match classify(&r, depth) {
                    Periodicity::Periodic(p) => println!("periodic with period {p}"),
                    Periodicity::AperiodicAtDepth => println!("aperiodic at depth {depth}"),
                }
            }
            Ok(())
        }
        Command::Rules { discover, budget } => {
            if discover {
                let d = discover_rules_with_budget(budget)?;
                println!(
                    "{} triangle pairings, {} admissible geometries, {} candidates checked, {} solutions",
                    d.pairings,
                    d.geometries.len(),
                    d.candidates_checked,
                    d.solutions.len()
                );
                for (sig, n) in d.classes() {
                    let place = sig
                        .classify()
                        .map_or("unclassified".to_string(), |(r, name, col)| {
                            format!("row {} ({name}), {col}", r + 1)
                        });
                    println!("  X -> {sig}: {n} rules; {place}");
                }
                println!("{} signature classes", d.classes().len());
            } else {
                for row in table8() {
                    let cells: Vec<String> = row.cells.iter().map(|c| c.to_string()).collect();
                    let flagged = row.flagged();
                    let note = if flagged.is_empty() {
                        String::new()
                    } else {
                        format!("  (not a relation image: {})", flagged.join(", "))
                    };
                    println!("{:<12} {}{note}", row.name, cells.join(" | "));
                }
                for v in Variation::ALL {
                    println!("{v}: {}", sixfold::data::rule_checksum(sixfold::rule(v)));
                }
            }
            Ok(())
        }
    }
}

fn stats(p: &Patch) {
    let c = p.counts();
    println!(
        "generation {}, {} tiles, {} area units",
        p.generation,
        p.len(),
        c.units()
    );
    println!("acute {} obtuse {}", c.acute(), c.obtuse());
    if *c.obtuse().numer() > 0 {
        let r = c.acute() / c.obtuse();
        println!(
            "acute/obtuse {} ({:.6})",
            r,
            *r.numer() as f64 / *r.denom() as f64
        );
    }
    let configs = find_stars_and_hexagons(p);
    let stars: Vec<_> = configs
        .iter()
        .filter(|c| c.kind == ConfigurationKind::Star)
        .map(|c| c.center)
        .collect();
    let hexes = configs.len() - stars.len();
    println!(
        "{} stars, {} hexagons; stars on one lattice: {}",
        stars.len(),
        hexes,
        on_common_lattice(&stars, 3)
    );
    let centre = patch_center(p);
    let w = inradius(p, centre) / 2.0;
    match translation_scan(p, w, w) {
        Ok(r) => println!(
            "translation scan: window {:.3}, {} shifts tested, {} translations found",
            r.window_radius,
            r.shifts_tested,
            r.translations_found.len()
        ),
        Err(e) => println!("translation scan skipped: {e}"),
    }
}
