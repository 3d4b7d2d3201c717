//! CSV and SVG renderings of a sampled range boundary.

use std::fmt::Write;

use knumpar::knum::BoundaryPoint;

pub const SIZE: f64 = 800.0;
const MARGIN: f64 = 0.1;
const MAX_RINGS: usize = 64;

pub fn csv(points: &[BoundaryPoint]) -> String {
    let mut out = String::from("theta,re,im\n");
    for p in points {
        writeln!(out, "{},{},{}", p.theta, p.point.re, p.point.im).unwrap();
    }
    out
}

/// Square window around the bounding box of `points`, padded by 10% on
/// each side: `(left, top, side)`.
fn window(points: &[BoundaryPoint]) -> (f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.point.re);
        x1 = x1.max(p.point.re);
        y0 = y0.min(p.point.im);
        y1 = y1.max(p.point.im);
    }
    let span = (x1 - x0).max(y1 - y0);
    let span = if span > 1e-12 { span } else { 1.0 };
    let side = span * (1.0 + 2.0 * MARGIN);
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    (cx - side / 2.0, cy + side / 2.0, side)
}

/// The boundary as a closed path in complex-plane coordinates inside a
/// group that maps the window onto the 800x800 viewport, with circles of
/// integer radius about the origin and the two axes as gridlines.
pub fn svg(points: &[BoundaryPoint], radius: f64) -> String {
    let (left, top, side) = window(points);
    let s = SIZE / side;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<g transform="matrix({s} 0 0 {} {} {})">"#, -s, -left * s, top * s).unwrap();

    let far = [(left, top), (left + side, top), (left, top - side), (left + side, top - side)]
        .iter()
        .map(|&(x, y)| f64::hypot(x, y))
        .fold(0.0, f64::max);
    let rings = (far.ceil() as usize).min(MAX_RINGS);
    for r in 1..=rings {
        writeln!(
            out,
            r##"<circle class="grid" cx="0" cy="0" r="{r}" fill="none" stroke="#ccc" vector-effect="non-scaling-stroke"/>"##
        )
        .unwrap();
    }
    for (x1, y1, x2, y2) in [(left, 0.0, left + side, 0.0), (0.0, top - side, 0.0, top)] {
        writeln!(
            out,
            r##"<line class="axis" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#888" vector-effect="non-scaling-stroke"/>"##
        )
        .unwrap();
    }

    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        write!(d, "{cmd}{},{} ", p.point.re, p.point.im).unwrap();
    }
    d.push('Z');
    writeln!(
        out,
        r##"<path class="boundary" d="{d}" fill="#4a7ebb" fill-opacity="0.25" stroke="#1f4e8c" stroke-width="2" vector-effect="non-scaling-stroke"><title>radius {radius}</title></path>"##
    )
    .unwrap();
    out.push_str("</g>\n</svg>\n");
    out
}
