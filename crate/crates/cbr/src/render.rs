//! Planar drawings of diagrams: domain endpoints on the left edge, codomain
//! on the right, arcs as cubic curves, loops as circles. Distinct colors get
//! distinct dash patterns and a legend entry. Layout is deterministic: arcs
//! follow the canonical pair order, loops the color order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::diagram::{Color, Diagram, Endpoint, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Svg,
    Tikz,
}

/// Stroke colors, assigned to diagram colors in ascending order and cycled.
/// Dash patterns always distinguish colors; the palette is cosmetic.
#[derive(Debug, Clone)]
pub struct Style {
    pub palette: Vec<String>,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            palette: vec!["black".into()],
        }
    }
}

impl Style {
    /// Parse a comma-separated stroke color list, e.g. "red,blue,teal".
    pub fn from_palette_spec(spec: &str) -> Style {
        let palette: Vec<String> = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        if palette.is_empty() {
            Style::default()
        } else {
            Style { palette }
        }
    }
}

const UNIT: f64 = 36.0;
const MARGIN: f64 = 30.0;

fn dash_svg(index: usize) -> &'static str {
    match index % 4 {
        0 => "none",
        1 => "8 4",
        2 => "2 3",
        _ => "8 3 2 3",
    }
}

fn dash_tikz(index: usize) -> &'static str {
    match index % 4 {
        0 => "solid",
        1 => "dashed",
        2 => "dotted",
        _ => "dash dot",
    }
}

fn fmt_f(x: f64) -> String {
    // one decimal keeps output short and byte-stable
    format!("{x:.1}")
}

struct Layout {
    width: f64,
    height: f64,
    dom_x: f64,
    cod_x: f64,
    colors: Vec<Color>,
    loop_row_y: f64,
}

fn layout(d: &Diagram) -> Layout {
    let strands = d.dom().len().max(d.cod().len()).max(1);
    let n_loops: u64 = d.loops().values().sum();
    let mut colors: BTreeSet<Color> = d.dom().colors().iter().copied().collect();
    colors.extend(d.cod().colors().iter().copied());
    colors.extend(d.loops().keys().copied());
    let body_h = strands as f64 * UNIT;
    let loops_h = if n_loops > 0 { UNIT * 1.5 } else { 0.0 };
    let legend_h = if colors.is_empty() { 0.0 } else { UNIT };
    Layout {
        width: 2.0 * MARGIN + 6.0 * UNIT,
        height: 2.0 * MARGIN + body_h + loops_h + legend_h,
        dom_x: MARGIN,
        cod_x: MARGIN + 6.0 * UNIT,
        colors: colors.into_iter().collect(),
        loop_row_y: MARGIN + body_h + UNIT * 0.75,
    }
}

fn endpoint_xy(l: &Layout, p: Endpoint) -> (f64, f64) {
    let y = MARGIN + (p.index as f64 + 0.5) * UNIT;
    match p.side {
        Side::Dom => (l.dom_x, y),
        Side::Cod => (l.cod_x, y),
    }
}

/// Cubic control points: arcs leave boundary edges horizontally, so two
/// endpoints on the same edge bow into the interior.
fn controls(l: &Layout, a: Endpoint, b: Endpoint) -> ((f64, f64), (f64, f64)) {
    let (ax, ay) = endpoint_xy(l, a);
    let (bx, by) = endpoint_xy(l, b);
    let reach = 2.2 * UNIT;
    let dir = |p: Endpoint| match p.side {
        Side::Dom => reach,
        Side::Cod => -reach,
    };
    ((ax + dir(a), ay), (bx + dir(b), by))
}

fn color_index(l: &Layout, k: Color) -> usize {
    l.colors.iter().position(|&c| c == k).unwrap_or(0)
}

fn stroke<'a>(style: &'a Style, index: usize) -> &'a str {
    &style.palette[index % style.palette.len()]
}

fn endpoint_color(d: &Diagram, p: Endpoint) -> Color {
    match p.side {
        Side::Dom => d.dom().color(p.index),
        Side::Cod => d.cod().color(p.index),
    }
}

pub fn render(d: &Diagram, format: Format, style: &Style) -> String {
    match format {
        Format::Svg => render_svg(d, style),
        Format::Tikz => render_tikz(d, style),
    }
}

fn render_svg(d: &Diagram, style: &Style) -> String {
    let l = layout(d);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt_f(l.width),
        fmt_f(l.height),
        fmt_f(l.width),
        fmt_f(l.height)
    );
    let _ = writeln!(
        out,
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>",
        fmt_f(l.width),
        fmt_f(l.height)
    );
    for (a, b) in d.pairs() {
        let k = endpoint_color(d, a);
        let idx = color_index(&l, k);
        let (ax, ay) = endpoint_xy(&l, a);
        let (bx, by) = endpoint_xy(&l, b);
        let ((c1x, c1y), (c2x, c2y)) = controls(&l, a, b);
        let _ = writeln!(
            out,
            "<path d=\"M {} {} C {} {}, {} {}, {} {}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" stroke-dasharray=\"{}\"/>",
            fmt_f(ax), fmt_f(ay), fmt_f(c1x), fmt_f(c1y), fmt_f(c2x), fmt_f(c2y), fmt_f(bx), fmt_f(by),
            stroke(style, idx), dash_svg(idx)
        );
    }
    let mut slot = 0u64;
    for (&k, &n) in d.loops() {
        let idx = color_index(&l, k);
        for _ in 0..n {
            let cx = MARGIN + (slot as f64 + 0.5) * UNIT;
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" stroke-dasharray=\"{}\"/>",
                fmt_f(cx), fmt_f(l.loop_row_y), fmt_f(UNIT * 0.4),
                stroke(style, idx), dash_svg(idx)
            );
            slot += 1;
        }
    }
    let legend_y = l.height - MARGIN;
    for (j, &k) in l.colors.iter().enumerate() {
        let x = MARGIN + j as f64 * 2.0 * UNIT;
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1.5\" stroke-dasharray=\"{}\"/>",
            fmt_f(x), fmt_f(legend_y), fmt_f(x + UNIT), fmt_f(legend_y),
            stroke(style, j), dash_svg(j)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\">{}</text>",
            fmt_f(x + UNIT + 6.0),
            fmt_f(legend_y + 4.0),
            k.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn render_tikz(d: &Diagram, style: &Style) -> String {
    let l = layout(d);
    // TikZ coordinates in centimeters, y up; flip the SVG y axis
    let cm = |x: f64| x / UNIT;
    let flip = |y: f64| cm(l.height - y);
    let mut out = String::new();
    out.push_str("\\documentclass[tikz,border=2pt]{standalone}\n");
    out.push_str("\\begin{document}\n");
    out.push_str("\\begin{tikzpicture}[line width=0.8pt]\n");
    for (a, b) in d.pairs() {
        let k = endpoint_color(d, a);
        let idx = color_index(&l, k);
        let (ax, ay) = endpoint_xy(&l, a);
        let (bx, by) = endpoint_xy(&l, b);
        let ((c1x, c1y), (c2x, c2y)) = controls(&l, a, b);
        let _ = writeln!(
            out,
            "\\draw[{},{}] ({},{}) .. controls ({},{}) and ({},{}) .. ({},{});",
            dash_tikz(idx),
            stroke(style, idx),
            fmt_f(cm(ax)), fmt_f(flip(ay)),
            fmt_f(cm(c1x)), fmt_f(flip(c1y)),
            fmt_f(cm(c2x)), fmt_f(flip(c2y)),
            fmt_f(cm(bx)), fmt_f(flip(by))
        );
    }
    let mut slot = 0u64;
    for (&k, &n) in d.loops() {
        let idx = color_index(&l, k);
        for _ in 0..n {
            let cx = MARGIN + (slot as f64 + 0.5) * UNIT;
            let _ = writeln!(
                out,
                "\\draw[{},{}] ({},{}) circle ({});",
                dash_tikz(idx),
                stroke(style, idx),
                fmt_f(cm(cx)),
                fmt_f(flip(l.loop_row_y)),
                fmt_f(0.4)
            );
            slot += 1;
        }
    }
    let legend_y = l.height - MARGIN;
    for (j, &k) in l.colors.iter().enumerate() {
        let x = MARGIN + j as f64 * 2.0 * UNIT;
        let _ = writeln!(
            out,
            "\\draw[{},{}] ({},{}) -- ({},{});",
            dash_tikz(j),
            stroke(style, j),
            fmt_f(cm(x)),
            fmt_f(flip(legend_y)),
            fmt_f(cm(x + UNIT)),
            fmt_f(flip(legend_y))
        );
        let _ = writeln!(
            out,
            "\\node[right,font=\\small] at ({},{}) {{{}}};",
            fmt_f(cm(x + UNIT)),
            fmt_f(flip(legend_y)),
            k.0
        );
    }
    out.push_str("\\end{tikzpicture}\n");
    out.push_str("\\end{document}\n");
    out
}
