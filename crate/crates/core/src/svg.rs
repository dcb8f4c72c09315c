//! SVG rendering of level and radial drawings with crossing markers.
//!
//! Level drawings put level `i` on a horizontal line (level 1 at the bottom)
//! and the vertex at position `p` at `x = 60 p`. Radial drawings put level
//! `i` on a circle of radius `40 i` and the vertex at position `p` of a
//! level of size `n` at angle `2 pi p / n`, clockwise from the positive x
//! axis. Radial edges are traced through the cut annulus of their gap, so the
//! picture has exactly the crossings the combinatorial model counts; each
//! one is marked with a red dot.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::constraints::ReferenceSets;
use crate::drawing::{level_crossings, radial_crossings, radial_offsets, DrawingError, LevelDrawing, RadialDrawing};
use crate::graph::ProperLevelGraph;

pub const LEVEL_DX: f64 = 60.0;
pub const LEVEL_DY: f64 = 60.0;
pub const RADIAL_DR: f64 = 40.0;
const MARGIN: f64 = 40.0;
const SAMPLES: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct Rendering {
    pub svg: String,
    /// Marked crossing points.
    pub crossings: Vec<(f64, f64)>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Doc {
    body: String,
}

impl Doc {
    fn new() -> Self {
        Doc { body: String::new() }
    }

    fn line(&mut self, (x1, y1): (f64, f64), (x2, y2): (f64, f64), class: &str) {
        let _ = writeln!(self.body, r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }

    fn vertex(&mut self, (x, y): (f64, f64), name: &str) {
        let name = esc(name);
        let _ = writeln!(
            self.body,
            r#"<g class="vertex"><circle cx="{x:.2}" cy="{y:.2}" r="4"/><text x="{:.2}" y="{:.2}">{name}</text></g>"#,
            x + 5.0,
            y - 5.0
        );
    }

    fn crossing(&mut self, (x, y): (f64, f64)) {
        let _ = writeln!(self.body, r#"<circle class="crossing" cx="{x:.2}" cy="{y:.2}" r="3"/>"#);
    }

    fn finish(self, width: f64, height: f64, kind: &str) -> String {
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" data-kind="{kind}">"#,
                "\n<style>.level{{stroke:#bbb;fill:none}} .edge{{stroke:#246;fill:none;stroke-width:1.5}} ",
                ".vertex circle{{fill:#000}} .vertex text{{font:10px sans-serif}} .crossing{{fill:#d22}}</style>\n",
                "{body}</svg>\n"
            ),
            w = width,
            h = height,
            kind = kind,
            body = self.body
        )
    }
}

pub fn render_level(g: &ProperLevelGraph, d: &LevelDrawing) -> Result<Rendering, DrawingError> {
    let pos = d.positions(g)?;
    let k = g.num_levels();
    let widest = (1..=k).map(|i| g.level_vertices(i).len()).max().unwrap_or(1).max(1);
    let width = 2.0 * MARGIN + LEVEL_DX * (widest - 1) as f64 + 40.0;
    let height = 2.0 * MARGIN + LEVEL_DY * (k.max(1) - 1) as f64;
    let at = |v: usize| (MARGIN + LEVEL_DX * pos[v] as f64, MARGIN + LEVEL_DY * (k - g.level(v)) as f64);
    let mut doc = Doc::new();
    for i in 1..=k {
        let y = MARGIN + LEVEL_DY * (k - i) as f64;
        doc.line((MARGIN - 20.0, y), (width - MARGIN + 20.0, y), "level");
    }
    for &(u, v) in g.edges() {
        doc.line(at(u), at(v), "edge");
    }
    let mut crossings = Vec::new();
    for (_, e, f) in level_crossings(d, g)? {
        let ((a, b), (c, dd)) = (g.edge(e), g.edge(f));
        let (p, q) = (at(a), at(b));
        let (r, s) = (at(c), at(dd));
        let t = (p.0 - r.0) / ((p.0 - r.0) - (q.0 - s.0));
        let point = (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1));
        doc.crossing(point);
        crossings.push(point);
    }
    for v in 0..g.num_vertices() {
        doc.vertex(at(v), g.name(v).as_str());
    }
    Ok(Rendering { svg: doc.finish(width, height, "level"), crossings })
}

/// Angle of the vertex at `p` on a level of `n` vertices.
fn angle(p: usize, n: usize) -> f64 {
    TAU * p as f64 / n as f64
}

/// Shortest signed turn from `from` to `to`, in `(-pi, pi]`.
fn turn(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(TAU);
    if d > TAU / 2.0 {
        d - TAU
    } else {
        d
    }
}

pub fn render_radial(g: &ProperLevelGraph, d: &RadialDrawing, refs: &ReferenceSets) -> Result<Rendering, DrawingError> {
    let offsets = radial_offsets(d, g, refs)?;
    let pos = d.positions(g)?;
    let k = g.num_levels();
    let size = |i: usize| g.level_vertices(i).len();
    let c = MARGIN + RADIAL_DR * k as f64;
    let xy = |r: f64, th: f64| (c + r * th.cos(), c + r * th.sin());
    // Edge of gap `i` at parameter `s`: fraction of the way through the cut
    // annulus, interpolated between the endpoint offsets.
    let trace = |e: usize, s: f64| {
        let (u, _) = g.edge(e);
        let i = g.level(u);
        let (a, b) = refs.edge(i);
        let (na, nb) = (size(i), size(i + 1));
        let th_a = angle(pos[a], na);
        let base = th_a + s * turn(th_a, angle(pos[b], nb));
        let (bo, to) = offsets[e];
        let frac = (1.0 - s) * bo as f64 / na as f64 + s * to as f64 / nb as f64;
        xy(RADIAL_DR * (i as f64 + s), base + TAU * frac)
    };
    let mut doc = Doc::new();
    for i in 1..=k {
        let _ =
            writeln!(doc.body, r#"<circle class="level" cx="{c:.2}" cy="{c:.2}" r="{:.2}"/>"#, RADIAL_DR * i as f64);
    }
    for e in 0..g.num_edges() {
        let mut path = String::new();
        for step in 0..=SAMPLES {
            let (x, y) = trace(e, step as f64 / SAMPLES as f64);
            let _ = write!(path, "{}{x:.2},{y:.2}", if step == 0 { "M" } else { " L" });
        }
        let _ = writeln!(doc.body, r#"<path class="edge" d="{path}"/>"#);
    }
    let mut crossings = Vec::new();
    for (i, e, f) in radial_crossings(d, g, refs)? {
        let (na, nb) = (size(i) as f64, size(i + 1) as f64);
        let ((b1, t1), (b2, t2)) = (offsets[e], offsets[f]);
        let db = (b1 as f64 - b2 as f64) / na;
        let dt = (t1 as f64 - t2 as f64) / nb;
        let point = trace(e, db / (db - dt));
        doc.crossing(point);
        crossings.push(point);
    }
    for (v, &p) in pos.iter().enumerate() {
        let i = g.level(v);
        doc.vertex(xy(RADIAL_DR * i as f64, angle(p, size(i))), g.name(v).as_str());
    }
    Ok(Rendering { svg: doc.finish(2.0 * c, 2.0 * c, "radial"), crossings })
}
