//! SVG output for patches, hexagrids and dart/kite/shield figures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::data::five_color_table;
use crate::dks::{Decomposition, FigureKind};
use crate::error::Error;
use crate::hexagrid::Hexagrid;
use crate::inflation::{Patch, PatchTile};
use crate::lattice::LatticePoint;
use crate::matching::edge_map;
use crate::tile::{LabelTable, TileKey, TileKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Yellow,
    Pink,
    Green,
    Blue,
    Red,
}

impl Color {
    pub const ALL: [Color; 5] = [
        Color::Yellow,
        Color::Pink,
        Color::Green,
        Color::Blue,
        Color::Red,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    /// Gold acute, purple obtuse, no markings.
    Flat2,
    /// Two coloured bars per tile, one across a 60° corner and one across
    /// a 120° corner.
    Bars,
    /// Edges bent into bumps and dents keyed by edge symbol; the amplitude
    /// is a fraction of the edge length in `[0, 1/4]`.
    Notches(f64),
    FiveColor,
}

impl Scheme {
    pub fn notches(amplitude: f64) -> Result<Self, Error> {
        if !(0.0..=0.25).contains(&amplitude) {
            return Err(Error::InvalidArgument(format!(
                "notch amplitude {amplitude} outside [0, 1/4]"
            )));
        }
        Ok(Scheme::Notches(amplitude))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Palette {
    pub acute: String,
    pub obtuse: String,
    pub bars: [String; 2],
    pub five: BTreeMap<Color, String>,
    pub figures: BTreeMap<FigureKind, String>,
    pub remainder: String,
    pub grid: BTreeMap<String, String>,
    pub stroke: String,
}

impl Default for Palette {
    fn default() -> Self {
        let five = [
            (Color::Yellow, "#f2d43d"),
            (Color::Pink, "#f48fb1"),
            (Color::Green, "#4caf50"),
            (Color::Blue, "#2e6fd8"),
            (Color::Red, "#d83a2e"),
        ];
        let figures = [
            (FigureKind::Dart, "#d4a017"),
            (FigureKind::Kite, "#2e6fd8"),
            (FigureKind::Shield, "#4caf50"),
        ];
        let grid = [
            ("A", "#d83a2e"),
            ("B", "#2e6fd8"),
            ("C", "#222222"),
            ("a", "#f08a80"),
            ("b", "#8fb3ee"),
        ];
        Palette {
            acute: "#d4a017".into(),
            obtuse: "#7b3fa0".into(),
            bars: ["#d83a2e".into(), "#2e6fd8".into()],
            five: five.iter().map(|(c, s)| (*c, s.to_string())).collect(),
            figures: figures.iter().map(|(k, s)| (*k, s.to_string())).collect(),
            remainder: "#bbbbbb".into(),
            grid: grid
                .iter()
                .map(|(k, s)| (k.to_string(), s.to_string()))
                .collect(),
            stroke: "#000000".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    /// Digits after the decimal point.
    pub precision: usize,
    /// Pixels per unit edge.
    pub scale: f64,
    pub stroke_width: f64,
    pub palette: Palette,
    pub labels: LabelTable,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            precision: 6,
            scale: 20.0,
            stroke_width: 0.5,
            palette: Palette::default(),
            labels: LabelTable::default_table(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorLabeling(pub BTreeMap<TileKey, Color>);

impl ColorLabeling {
    pub fn get(&self, k: &TileKey) -> Option<Color> {
        self.0.get(k).copied()
    }

    pub fn counts(&self) -> BTreeMap<Color, usize> {
        let mut m: BTreeMap<Color, usize> = Color::ALL.iter().map(|c| (*c, 0)).collect();
        for c in self.0.values() {
            *m.get_mut(c).unwrap() += 1;
        }
        m
    }

    pub fn tiles(&self, color: Color) -> impl Iterator<Item = &TileKey> {
        self.0
            .iter()
            .filter(move |(_, c)| **c == color)
            .map(|(k, _)| k)
    }
}

/// Five-colour labelling: obtuse yellow; acute children that meet in stars
/// at the parent's corners pink; acute tiles whose parent was a corner child
/// green; of the remaining acute tiles the largest edge-connected group is
/// blue and the rest red.
pub fn assign_five_colors(p: &Patch) -> Result<ColorLabeling, Error> {
    let table = five_color_table();
    let mut out = BTreeMap::new();
    let mut rest = BTreeSet::new();
    for pt in p.iter() {
        let key = pt.tile.key();
        if pt.tile.kind == TileKind::Obtuse {
            out.insert(key, Color::Yellow);
            continue;
        }
        let m = &pt.meta;
        if p.generation > 1 && m.parent_slot.is_none() {
            return Err(Error::MissingMetadata(format!(
                "acute tile at {:?} has no parent slot",
                pt.tile.anchor
            )));
        }
        let pink = match (m.parent_kind, m.parent_slot) {
            (Some(k), Some(s)) => table.pink_slots.get(k).contains(&s),
            _ => false,
        };
        if pink {
            out.insert(key, Color::Pink);
        } else if m
            .grand_slot
            .is_some_and(|s| table.green_parent_slots.contains(&s))
        {
            out.insert(key, Color::Green);
        } else {
            rest.insert(key);
        }
    }
    let mut adj: BTreeMap<TileKey, Vec<TileKey>> = BTreeMap::new();
    for inc in edge_map(p).values() {
        if let [(s, _), (t, _)] = inc.as_slice() {
            if rest.contains(s) && rest.contains(t) {
                adj.entry(*s).or_default().push(*t);
                adj.entry(*t).or_default().push(*s);
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut comps: Vec<Vec<TileKey>> = Vec::new();
    for &k in &rest {
        if !seen.insert(k) {
            continue;
        }
        let mut comp = vec![k];
        let mut queue = VecDeque::from([k]);
        while let Some(u) = queue.pop_front() {
            for &w in adj.get(&u).into_iter().flatten() {
                if seen.insert(w) {
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comps.push(comp);
    }
    // first largest wins; components come out in key order
    let blue = comps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i);
    for (i, comp) in comps.iter().enumerate() {
        let c = if Some(i) == blue {
            Color::Blue
        } else {
            Color::Red
        };
        out.extend(comp.iter().map(|k| (*k, c)));
    }
    Ok(ColorLabeling(out))
}

/// Visible outline of a patch tile: the rhomb, or the covered triangle of a
/// boundary half.
pub fn tile_polygon(pt: &PatchTile) -> Vec<LatticePoint> {
    let v = pt.tile.vertices();
    match pt.present_edges() {
        [0, 3] => vec![v[3], v[0], v[1]],
        [1, 2] => vec![v[1], v[2], v[3]],
        _ => v.to_vec(),
    }
}

struct Canvas {
    prec: usize,
    scale: f64,
    min: (f64, f64),
    max: (f64, f64),
}

impl Canvas {
    fn new(opts: &RenderOptions, points: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut min = (f64::INFINITY, f64::INFINITY);
        let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            min = (min.0.min(x), min.1.min(y));
            max = (max.0.max(x), max.1.max(y));
        }
        if !min.0.is_finite() {
            min = (0.0, 0.0);
            max = (1.0, 1.0);
        }
        Canvas {
            prec: opts.precision,
            scale: opts.scale,
            min,
            max,
        }
    }

    fn num(&self, v: f64) -> String {
        let s = format!("{:.*}", self.prec, v);
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }

    /// Screen coordinates: scaled, y down.
    fn xy(&self, (x, y): (f64, f64)) -> String {
        format!("{},{}", self.num(x * self.scale), self.num(-y * self.scale))
    }

    fn path(&self, pts: &[(f64, f64)]) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            d.push_str(if i == 0 { "M" } else { " L" });
            d.push_str(&self.xy(*p));
        }
        d.push_str(" Z");
        d
    }

    fn open(&self, out: &mut String, stroke_width: f64) {
        let pad = 0.5;
        let (x0, x1) = (
            (self.min.0 - pad) * self.scale,
            (self.max.0 + pad) * self.scale,
        );
        let (y0, y1) = (
            (-self.max.1 - pad) * self.scale,
            (-self.min.1 + pad) * self.scale,
        );
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="{}" height="{}">"#,
            self.num(x0),
            self.num(y0),
            self.num(x1 - x0),
            self.num(y1 - y0),
            self.num(x1 - x0),
            self.num(y1 - y0)
        );
        let _ = writeln!(
            out,
            r#"<g stroke-width="{}" stroke-linejoin="round">"#,
            self.num(stroke_width)
        );
    }

    fn close(out: &mut String) {
        out.push_str("</g>\n</svg>\n");
    }
}

fn f(p: LatticePoint) -> (f64, f64) {
    p.to_f64()
}

fn lerp(p: (f64, f64), q: (f64, f64), t: f64) -> (f64, f64) {
    (p.0 + (q.0 - p.0) * t, p.1 + (q.1 - p.1) * t)
}

/// Edge `p → q` of a counterclockwise outline with a bump (`sign` +1,
/// outward) or dent (−1) at its middle, excluding the end point.
fn notch_edge(p: (f64, f64), q: (f64, f64), amp: f64, sign: f64) -> Vec<(f64, f64)> {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let out = (dy, -dx);
    let m = lerp(p, q, 0.5);
    let tip = (m.0 + out.0 * amp * sign, m.1 + out.1 * amp * sign);
    vec![p, lerp(p, q, 0.3), tip, lerp(p, q, 0.7)]
}

fn notch_outline(pt: &PatchTile, amp: f64, labels: &LabelTable) -> Vec<(f64, f64)> {
    let v = pt.tile.vertices().map(f);
    if amp == 0.0 || pt.meta.coverage.is_half() {
        return tile_polygon(pt).into_iter().map(f).collect();
    }
    let mut pts = Vec::new();
    for i in 0..4 {
        let s = labels.symbol(pt.tile.kind, i as u8);
        let partner = labels.partner.get(s as usize).copied().unwrap_or(s);
        let sign = if s < partner {
            1.0
        } else if s > partner {
            -1.0
        } else {
            0.0
        };
        pts.extend(notch_edge(v[i], v[(i + 1) % 4], amp, sign));
    }
    pts
}

type Bar = ((f64, f64), (f64, f64), usize);

/// Bars across corner 0 (60°) and corner 1 (120°), colour swapped between
/// the kinds.
fn bars(pt: &PatchTile) -> [Bar; 2] {
    let v = pt.tile.vertices().map(f);
    let k = pt.tile.kind.index();
    [
        (lerp(v[0], v[3], 0.5), lerp(v[0], v[1], 0.5), k),
        (lerp(v[1], v[0], 0.25), lerp(v[1], v[2], 0.25), 1 - k),
    ]
}

/// Renders a patch. `labeling` is used for the five-colour scheme; when
/// absent it is computed, falling back to stored colour labels and then to
/// the plain kind colours.
pub fn emit_svg(
    p: &Patch,
    scheme: Scheme,
    labeling: Option<&ColorLabeling>,
    opts: &RenderOptions,
) -> String {
    let canvas = Canvas::new(opts, p.iter().flat_map(|t| t.tile.vertices()).map(f));
    let pal = &opts.palette;
    let computed = match (scheme, labeling) {
        (Scheme::FiveColor, None) => assign_five_colors(p).ok(),
        _ => None,
    };
    let labeling = labeling.or(computed.as_ref());
    let mut out = String::new();
    canvas.open(&mut out, opts.stroke_width);
    let _ = writeln!(out, r#"<g id="tiles" stroke="{}">"#, pal.stroke);
    let mut strokes = Vec::new();
    for pt in p.iter() {
        let kind_fill = if pt.tile.kind == TileKind::Acute {
            &pal.acute
        } else {
            &pal.obtuse
        };
        let fill = match scheme {
            Scheme::FiveColor => labeling
                .and_then(|l| l.get(&pt.tile.key()))
                .or(pt.meta.color_label)
                .map_or(kind_fill, |c| &pal.five[&c]),
            _ => kind_fill,
        };
        let outline: Vec<(f64, f64)> = match scheme {
            Scheme::Notches(amp) => notch_outline(pt, amp, &opts.labels),
            _ => tile_polygon(pt).into_iter().map(f).collect(),
        };
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="{}"/>"#,
            canvas.path(&outline),
            fill
        );
        if scheme == Scheme::Bars && !pt.meta.coverage.is_half() {
            strokes.extend(bars(pt));
        }
    }
    out.push_str("</g>\n");
    if scheme == Scheme::Bars {
        let _ = writeln!(
            out,
            r#"<g id="bars" stroke-width="{}" stroke-linecap="round">"#,
            canvas.num(opts.stroke_width * 4.0)
        );
        for (a, b, c) in strokes {
            let (a, b) = (canvas.xy(a), canvas.xy(b));
            let (x1, y1) = a.split_once(',').unwrap();
            let (x2, y2) = b.split_once(',').unwrap();
            let _ = writeln!(
                out,
                r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{}"/>"#,
                pal.bars[c]
            );
        }
        out.push_str("</g>\n");
    }
    Canvas::close(&mut out);
    out
}

/// Renders the three line families of a hexagrid, each line drawn as a
/// segment of half-length `window` (or just past the grid span when
/// `window` is not positive), with an optional dual patch beside it.
pub fn emit_grid_svg(
    g: &Hexagrid,
    window: f64,
    dual: Option<&Patch>,
    opts: &RenderOptions,
) -> String {
    let span = g.span().to_f64().unwrap_or(0.0);
    let half = if window > 0.0 {
        window
    } else {
        span / 2.0 + 1.0
    };
    let mut segs = Vec::new();
    for fam in &g.families {
        let n = f(fam.normal);
        let t = (-n.1, n.0);
        for (i, off) in fam.offsets.iter().enumerate() {
            let o = off.to_f64().unwrap_or(0.0);
            let c = (n.0 * o, n.1 * o);
            let class = g.tokens.get(i).map_or("end", |t| t.symbol());
            segs.push((
                (c.0 - t.0 * half, c.1 - t.1 * half),
                (c.0 + t.0 * half, c.1 + t.1 * half),
                fam.index,
                class,
            ));
        }
    }
    // the dual sits to the right of the grid
    let shift = dual.map(|d| {
        let xs: Vec<f64> = d
            .iter()
            .flat_map(|t| t.tile.vertices())
            .map(|p| f(p).0)
            .collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        if lo.is_finite() {
            half * 1.2 + 1.0 - lo
        } else {
            0.0
        }
    });
    let dual_pts: Vec<(f64, f64)> = dual
        .into_iter()
        .flat_map(|d| d.iter().flat_map(|t| t.tile.vertices()))
        .map(|p| {
            let (x, y) = f(p);
            (x + shift.unwrap_or(0.0), y)
        })
        .collect();
    let canvas = Canvas::new(opts, segs.iter().flat_map(|s| [s.0, s.1]).chain(dual_pts));
    let mut out = String::new();
    canvas.open(&mut out, opts.stroke_width);
    out.push_str("<g id=\"grid\" fill=\"none\">\n");
    for (a, b, fam, class) in &segs {
        let (x1, y1) = canvas
            .xy(*a)
            .split_once(',')
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .unwrap();
        let (x2, y2) = canvas
            .xy(*b)
            .split_once(',')
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .unwrap();
        let color = opts
            .palette
            .grid
            .get(*class)
            .map_or("#000000", |s| s.as_str());
        let _ = writeln!(
            out,
            r#"<line class="family{fam} gap-{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}"/>"#
        );
    }
    out.push_str("</g>\n");
    if let Some(d) = dual {
        let s = shift.unwrap_or(0.0);
        let _ = writeln!(out, r#"<g id="dual" stroke="{}">"#, opts.palette.stroke);
        for pt in d.iter() {
            let pts: Vec<(f64, f64)> = tile_polygon(pt)
                .into_iter()
                .map(f)
                .map(|(x, y)| (x + s, y))
                .collect();
            let fill = if pt.tile.kind == TileKind::Acute {
                &opts.palette.acute
            } else {
                &opts.palette.obtuse
            };
            let _ = writeln!(out, r#"<path d="{}" fill="{}"/>"#, canvas.path(&pts), fill);
        }
        out.push_str("</g>\n");
    }
    Canvas::close(&mut out);
    out
}

/// Renders darts, kites and shields by outline, remainder pieces in grey.
pub fn emit_dks_svg(d: &Decomposition, opts: &RenderOptions) -> String {
    let outlines: Vec<(Vec<LatticePoint>, &String)> = d
        .figures
        .iter()
        .map(|fig| (fig.outline(), &opts.palette.figures[&fig.kind()]))
        .chain(
            d.remainder
                .iter()
                .map(|r| (r.polygon(), &opts.palette.remainder)),
        )
        .collect();
    let canvas = Canvas::new(
        opts,
        outlines.iter().flat_map(|(o, _)| o.iter().copied()).map(f),
    );
    let mut out = String::new();
    canvas.open(&mut out, opts.stroke_width);
    let _ = writeln!(out, r#"<g id="figures" stroke="{}">"#, opts.palette.stroke);
    for (o, fill) in &outlines {
        let pts: Vec<(f64, f64)> = o.iter().copied().map(f).collect();
        let _ = writeln!(out, r#"<path d="{}" fill="{}"/>"#, canvas.path(&pts), fill);
    }
    out.push_str("</g>\n");
    Canvas::close(&mut out);
    out
}
