//! Deterministic SVG drawings: the subdivided critical value rectangle,
//! boundary matchings on the 4d-gon, and schematic banyans and cacti.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hurwitz::Constellation;
use crate::noncrossing::{matching_of_partition, NCChain, NoncrossingPartition, Side, SideConvention};
use crate::poly::Rectangle;
use crate::report::AnalysisReport;

const SIZE: f64 = 480.0;
const PAD: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum What {
    Qprime,
    Chords,
    Banyan,
    Cactus,
}

impl FromStr for What {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qprime" => Ok(What::Qprime),
            "chords" => Ok(What::Chords),
            "banyan" => Ok(What::Banyan),
            "cactus" => Ok(What::Cactus),
            _ => Err(Error::InvalidInput(format!("unknown drawing {s:?}; expected qprime, chords, banyan or cactus"))),
        }
    }
}

struct Svg {
    body: String,
    width: f64,
    height: f64,
}

impl Svg {
    fn new(width: f64, height: f64) -> Self {
        Svg { body: String::new(), width, height }
    }

    fn line(&mut self, class: &str, x1: f64, y1: f64, x2: f64, y2: f64) {
        let _ = writeln!(self.body, r#"<line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }

    fn circle(&mut self, class: &str, cx: f64, cy: f64, r: f64) {
        let _ = writeln!(self.body, r#"<circle class="{class}" cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}"/>"#);
    }

    fn text(&mut self, x: f64, y: f64, s: &str) {
        let _ = writeln!(self.body, r#"<text x="{x:.3}" y="{y:.3}" text-anchor="middle" dominant-baseline="middle">{}</text>"#, escape(s));
    }

    fn path(&mut self, class: &str, d: &str) {
        let _ = writeln!(self.body, r#"<path class="{class}" d="{d}"/>"#);
    }

    fn finish(self) -> String {
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="11">"#,
                "\n<style>line,path,polygon,rect{{stroke:#222;fill:none}} .grid{{stroke:#999;stroke-dasharray:4 3}} .cvl{{fill:#c22;stroke:none}} .base{{fill:#26c;stroke:none}} .vertex{{fill:#222;stroke:none}} .chord{{stroke:#c22;stroke-width:1.5}} .block{{fill:#eee}} .strand{{stroke-width:1.5}}</style>\n",
                "{body}</svg>\n"
            ),
            w = self.width,
            h = self.height,
            body = self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Distinct coordinates strictly inside `(lo, hi)`, clustered at `tol`.
fn interior(values: &[f64], lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|&x| x > lo + tol && x < hi - tol).collect();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        if out.last().is_none_or(|&l| x - l > tol) {
            out.push(x);
        }
    }
    out
}

/// The working rectangle cut by the real and imaginary parts of the critical values.
pub fn render_qprime(report: &AnalysisReport) -> String {
    let r: Rectangle = report.rectangle;
    let cvl = &report.critical.cvl;
    let tol = cvl.tol.max(1e-9 * (1.0 + cvl.max_abs()));
    let inner = SIZE - 2.0 * PAD;
    let sx = |x: f64| PAD + (x - r.xl) / (r.xr - r.xl) * inner;
    let sy = |y: f64| SIZE - PAD - (y - r.yb) / (r.yt - r.yb) * inner;
    let mut svg = Svg::new(SIZE, SIZE);
    let _ = writeln!(svg.body, r#"<rect class="frame" x="{PAD:.3}" y="{PAD:.3}" width="{inner:.3}" height="{inner:.3}"/>"#);
    let re: Vec<f64> = cvl.points.iter().map(|z| z.re).collect();
    let im: Vec<f64> = cvl.points.iter().map(|z| z.im).collect();
    for x in interior(&re, r.xl, r.xr, tol) {
        svg.line("grid col", sx(x), sy(r.yb), sx(x), sy(r.yt));
    }
    for y in interior(&im, r.yb, r.yt, tol) {
        svg.line("grid row", sx(r.xl), sy(y), sx(r.xr), sy(y));
    }
    for (z, m) in cvl.points.iter().zip(&cvl.mult) {
        svg.circle("cvl", sx(z.re), sy(z.im), 4.0);
        if *m > 1 {
            svg.text(sx(z.re) + 10.0, sy(z.im) - 10.0, &m.to_string());
        }
    }
    svg.circle("base", sx(r.xl), sy(r.yb), 3.0);
    svg.finish()
}

/// Angle of position `i` (1-based) on a regular `n`-gon, clockwise from the top.
fn polygon_point(i: usize, n: usize, cx: f64, cy: f64, rad: f64) -> (f64, f64) {
    let a = std::f64::consts::TAU * (i as f64 - 0.5) / n as f64;
    (cx + rad * a.sin(), cy - rad * a.cos())
}

/// The boundary matching of `p` read on `side`, drawn on the 4d-gon with
/// vertices `T_m, L_m, B_m, R_m` at positions `4m-3, 4m-2, 4m-1, 4m`.
pub fn render_chords(p: &NoncrossingPartition, side: Side) -> String {
    let d = p.degree();
    let n = 4 * d;
    let m = matching_of_partition(p, side);
    let (cx, cy, rad) = (SIZE / 2.0, SIZE / 2.0, SIZE / 2.0 - PAD);
    let mut svg = Svg::new(SIZE, SIZE);
    let mut outline = String::new();
    for i in 1..=n {
        let (x, y) = polygon_point(i, n, cx, cy, rad);
        let _ = write!(outline, "{}{x:.3},{y:.3}", if i == 1 { "" } else { " " });
    }
    let _ = writeln!(svg.body, r#"<polygon class="gon" points="{outline}"/>"#);
    let (odd_pos, even_pos): (fn(usize) -> usize, fn(usize) -> usize) = match m.side_convention() {
        SideConvention::LR => (|k| 4 * k - 2, |k| 4 * k),
        SideConvention::TB => (|k| 4 * k - 3, |k| 4 * k - 1),
    };
    for (o, e) in m.pairs() {
        let (x1, y1) = polygon_point(odd_pos(o), n, cx, cy, rad);
        let (x2, y2) = polygon_point(even_pos(e), n, cx, cy, rad);
        // bow the chord toward the centre
        let (qx, qy) = ((x1 + x2) / 4.0 + cx / 2.0, (y1 + y2) / 4.0 + cy / 2.0);
        svg.path("chord", &format!("M {x1:.3} {y1:.3} Q {qx:.3} {qy:.3} {x2:.3} {y2:.3}"));
    }
    let names = ['T', 'L', 'B', 'R'];
    for i in 1..=n {
        let (x, y) = polygon_point(i, n, cx, cy, rad);
        svg.circle("vertex", x, y, 2.5);
        let (lx, ly) = polygon_point(i, n, cx, cy, rad + 16.0);
        svg.text(lx, ly, &format!("{}{}", names[(i - 1) % 4], (i - 1) / 4 + 1));
    }
    svg.finish()
}

/// Schematic banyan of a chain: each element is a column of blocks, each block
/// joined to the block containing it one step later. Column widths follow `weights`.
pub fn render_banyan(chain: &NCChain, weights: &[f64]) -> String {
    let elems = chain.elements();
    let d = elems.first().map_or(1, |p| p.degree());
    let inner = SIZE - 2.0 * PAD;
    let total: f64 = weights.iter().sum::<f64>().max(1e-300);
    let mut edges = vec![PAD];
    for (i, _) in elems.iter().enumerate() {
        let w = weights.get(i).copied().unwrap_or(1.0 / elems.len() as f64);
        edges.push(edges[i] + w / total * inner);
    }
    let ypos = |b: &[usize]| PAD + (b.iter().sum::<usize>() as f64 / b.len() as f64 - 0.5) / d as f64 * inner;
    let mut svg = Svg::new(SIZE, SIZE);
    for (i, p) in elems.iter().enumerate() {
        for b in p.blocks() {
            let y = ypos(b);
            svg.line("strand", edges[i], y, edges[i + 1], y);
            if let Some(next) = elems.get(i + 1) {
                let nb = &next.blocks()[next.as_set_partition().block_index_of(b[0])];
                svg.line("strand", edges[i + 1], y, edges[i + 1], ypos(nb));
            }
        }
    }
    for k in 1..=d {
        svg.text(PAD - 16.0, ypos(&[k]), &k.to_string());
    }
    svg.finish()
}

/// Schematic cactus of a constellation: one lobe per nontrivial cycle,
/// factors laid out left to right.
pub fn render_cactus(c: &Constellation) -> String {
    let lobes: Vec<(usize, Vec<usize>)> = c
        .factors()
        .iter()
        .enumerate()
        .flat_map(|(i, f)| f.nontrivial_cycles().into_iter().map(move |cyc| (i, cyc)))
        .collect();
    let step = 110.0;
    let width = (2.0 * PAD + step * lobes.len().max(1) as f64).max(SIZE);
    let mut svg = Svg::new(width, 240.0);
    let cy = 120.0;
    svg.line("spine", PAD, cy + 60.0, width - PAD, cy + 60.0);
    for (j, (i, cyc)) in lobes.iter().enumerate() {
        let cx = PAD + step * (j as f64 + 0.5);
        let n = cyc.len();
        let mut pts = String::new();
        for (t, _) in cyc.iter().enumerate() {
            let (x, y) = polygon_point(t + 1, n.max(3), cx, cy, 40.0);
            let _ = write!(pts, "{}{x:.3},{y:.3}", if t == 0 { "" } else { " " });
        }
        let _ = writeln!(svg.body, r#"<polygon class="block" points="{pts}"/>"#);
        for (t, v) in cyc.iter().enumerate() {
            let (x, y) = polygon_point(t + 1, n.max(3), cx, cy, 40.0);
            svg.circle("vertex", x, y, 2.5);
            let (lx, ly) = polygon_point(t + 1, n.max(3), cx, cy, 54.0);
            svg.text(lx, ly, &v.to_string());
        }
        svg.line("stem", cx, cy + 40.0, cx, cy + 60.0);
        svg.text(cx, cy + 76.0, &format!("c{}", i + 1));
    }
    svg.finish()
}

/// Drawing of an analysis report. Chords show the middle left partition read on the left side.
pub fn render_report(report: &AnalysisReport, what: What) -> String {
    let s = &report.side_chains;
    match what {
        What::Qprime => render_qprime(report),
        What::Chords => {
            let e = s.left.elements();
            render_chords(&e[e.len() / 2], Side::Left)
        }
        What::Banyan => render_banyan(&s.left, &s.left_weights),
        What::Cactus => render_cactus(&report.constellations.horizontal_stripped),
    }
}
