//! Static SVG diagrams of walls in the `(b, w)`-slice.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cswalls_core::numgro::project;
use cswalls_core::rational::to_f64;
use cswalls_core::{BNModel, NumClass, PLFunction, PlanePoint, Rational, RationalLine, Slope, Wall, Window};

use crate::error::CliError;

pub const WIDTH: u32 = 800;
pub const HEIGHT: u32 = 600;
const LEGEND_ROW: u32 = 18;

/// The affine map from the window onto the `WIDTH × HEIGHT` plotting area.
struct Frame<'a> {
    window: &'a Window,
}

impl Frame<'_> {
    fn x(&self, b: &Rational) -> f64 {
        let w = self.window;
        to_f64(&((b - &w.b_min) * Rational::from_integer(WIDTH.into()) / (&w.b_max - &w.b_min)))
    }

    fn y(&self, w: &Rational) -> f64 {
        let win = self.window;
        to_f64(&((&win.w_max - w) * Rational::from_integer(HEIGHT.into()) / (&win.w_max - &win.w_min)))
    }

    fn point(&self, p: &PlanePoint) -> String {
        format!("{},{}", coord(self.x(&p.b)), coord(self.y(&p.w)))
    }

    fn comment(&self) -> String {
        let w = self.window;
        format!(
            "affine map from (b, w) to user units: X = (b - B_MIN) * WIDTH / (B_MAX - B_MIN), \
             Y = (W_MAX - w) * HEIGHT / (W_MAX - W_MIN); inverse: b = B_MIN + X * (B_MAX - B_MIN) / WIDTH, \
             w = W_MAX - Y * (W_MAX - W_MIN) / HEIGHT; B_MIN={} B_MAX={} W_MIN={} W_MAX={} WIDTH={WIDTH} HEIGHT={HEIGHT}",
            w.b_min, w.b_max, w.w_min, w.w_max
        )
    }
}

fn coord(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A wall line with its merged segment and witnesses.
struct Drawn {
    line: RationalLine,
    nu: Slope,
    from: PlanePoint,
    to: PlanePoint,
    witnesses: BTreeSet<NumClass>,
}

/// Merges records sharing a line, keeping the order of first appearance.
fn merge(walls: &[Wall]) -> Vec<Drawn> {
    let mut out: Vec<Drawn> = Vec::new();
    for w in walls {
        let [p, q] = w.segment.clone();
        match out.iter_mut().find(|d| d.line == w.line) {
            Some(d) => {
                if p.b < d.from.b {
                    d.from = p;
                }
                if q.b > d.to.b {
                    d.to = q;
                }
                d.witnesses.extend(w.destabilizers.iter().cloned());
            }
            None => out.push(Drawn {
                line: w.line.clone(),
                nu: w.nu.clone(),
                from: p,
                to: q,
                witnesses: w.destabilizers.iter().cloned().collect(),
            }),
        }
    }
    out
}

/// Vertices of an envelope across the window, with both one-sided values at each breakpoint.
fn envelope_points(f: &PLFunction, window: &Window) -> Vec<PlanePoint> {
    let mut pts = vec![PlanePoint::new(window.b_min.clone(), f.right_limit(&window.b_min))];
    for x in f.breakpoints().filter(|x| **x > window.b_min && **x < window.b_max) {
        pts.push(PlanePoint::new(x.clone(), f.left_limit(x)));
        pts.push(PlanePoint::new(x.clone(), f.right_limit(x)));
    }
    pts.push(PlanePoint::new(window.b_max.clone(), f.left_limit(&window.b_max)));
    pts.dedup();
    pts
}

/// Renders the diagram; walls are drawn in the order given, one polyline per distinct line.
pub fn render_svg(owner: &NumClass, walls: &[Wall], window: &Window, model: &BNModel) -> String {
    let frame = Frame { window };
    let drawn = merge(walls);
    let legend_rows = drawn.len() as u32 + 3;
    let total_height = HEIGHT + LEGEND_ROW * (legend_rows + 1);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{total_height}" viewBox="0 0 {WIDTH} {total_height}">"#
    );
    let _ = writeln!(s, "<!-- {} -->", frame.comment());
    let _ = writeln!(s, "<title>Walls of the class ({owner}) in the window [{window}]</title>");
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="window"><rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}"/></clipPath></defs>"#
    );
    let _ = writeln!(s, r#"<rect class="frame" x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white" stroke="black"/>"#);

    let _ = writeln!(s, r#"<g id="axes" stroke="gray" stroke-dasharray="4 4">"#);
    let zero = Rational::from_integer(0.into());
    if window.b_min < zero && zero < window.b_max {
        let x = coord(frame.x(&zero));
        let _ = writeln!(s, r#"<line class="axis" x1="{x}" y1="0" x2="{x}" y2="{HEIGHT}"/>"#);
    }
    if window.w_min < zero && zero < window.w_max {
        let y = coord(frame.y(&zero));
        let _ = writeln!(s, r#"<line class="axis" x1="0" y1="{y}" x2="{WIDTH}" y2="{y}"/>"#);
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="envelopes" clip-path="url(#window)" fill="none" stroke-width="2">"#);
    for (class, colour, f) in [("lower", "#1f77b4", &model.lower), ("upper", "#ff7f0e", &model.upper)] {
        let pts: Vec<String> = envelope_points(f, window).iter().map(|p| frame.point(p)).collect();
        let _ = writeln!(s, r#"<polyline class="{class}" stroke="{colour}" points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g id="walls" fill="none" stroke="#d62728" stroke-width="1.5">"##);
    for d in &drawn {
        let [a, b, c] = d.line.coefficients();
        let _ = writeln!(
            s,
            r#"<polyline class="wall" data-line="{a},{b},{c}" data-nu="{}" points="{} {}"/>"#,
            d.nu,
            frame.point(&d.from),
            frame.point(&d.to)
        );
    }
    let _ = writeln!(s, "</g>");

    if let Ok(p) = project(owner) {
        if window.contains(&p) {
            let _ = writeln!(
                s,
                r#"<circle class="projection" cx="{}" cy="{}" r="4" fill="black"/>"#,
                coord(frame.x(&p.b)),
                coord(frame.y(&p.w))
            );
        }
    }

    let _ = writeln!(s, r#"<g id="legend" font-family="monospace" font-size="12">"#);
    let mut y = HEIGHT + LEGEND_ROW;
    let mut entry = |s: &mut String, text: String| {
        let _ = writeln!(s, r#"<text x="8" y="{y}">{}</text>"#, escape(&text));
        y += LEGEND_ROW;
    };
    entry(&mut s, format!("lower envelope ({}), upper envelope ({})", model.name, model.name));
    entry(&mut s, format!("class ({owner}), projection marked when inside the window"));
    entry(&mut s, format!("{} wall line(s)", drawn.len()));
    for d in &drawn {
        let witnesses: Vec<String> = d.witnesses.iter().map(|w| format!("({w})")).collect();
        entry(&mut s, format!("nu = {}: {} from {}", d.nu, d.line, witnesses.join(" ")));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

pub fn write_svg(path: &Path, owner: &NumClass, walls: &[Wall], window: &Window, model: &BNModel) -> Result<(), CliError> {
    fs::write(path, render_svg(owner, walls, window, model)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
