//! SVG rendering of tangent configurations and their curves.
//!
//! Tangent lines are blue, secants red, curves purple and tangency points
//! small black discs. Output depends only on the inputs.

use std::fmt::Write;

use crate::contour::{Bounds, ContourSet};
use crate::geom::{LineImplicit, Point2};

pub const TANGENT_COLOUR: &str = "#0000FF";
pub const SECANT_COLOUR: &str = "#FF0000";
pub const CURVE_COLOUR: &str = "#800080";
pub const POINT_COLOUR: &str = "#000000";

const PIXEL_WIDTH: f64 = 800.0;

/// Renders one SVG 1.1 document. The `viewBox` is `bounds` with y flipped,
/// so plane coordinates `(x, y)` are written as `(x, −y)`.
pub fn emit_svg(
    contours: &ContourSet,
    tangents: &[LineImplicit],
    secants: &[LineImplicit],
    points: &[Point2],
    bounds: &Bounds,
) -> String {
    let (w, h) = (bounds.width(), bounds.height());
    let extent = w.max(h);
    let stroke = num(extent * 0.003);
    let mut out = String::new();

    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        PIXEL_WIDTH,
        (PIXEL_WIDTH * h / w).round(),
        num(bounds.xmin),
        num(-bounds.ymax),
        num(w),
        num(h)
    );
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#FFFFFF\"/>",
        num(bounds.xmin),
        num(-bounds.ymax),
        num(w),
        num(h)
    );

    for (lines, colour) in [(tangents, TANGENT_COLOUR), (secants, SECANT_COLOUR)] {
        for line in lines {
            if let Some((a, b)) = clip_line(line, bounds) {
                let _ = writeln!(
                    out,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{colour}\" stroke-width=\"{stroke}\"/>",
                    num(a.x),
                    num(-a.y),
                    num(b.x),
                    num(-b.y)
                );
            }
        }
    }

    for polyline in &contours.polylines {
        let mut coords: Vec<String> = polyline
            .points
            .iter()
            .map(|p| format!("{},{}", num(p.x), num(-p.y)))
            .collect();
        if polyline.closed {
            if let Some(first) = coords.first().cloned() {
                coords.push(first);
            }
        }
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{CURVE_COLOUR}\" stroke-width=\"{stroke}\" stroke-linejoin=\"round\"/>",
            coords.join(" ")
        );
    }

    let radius = num(extent * 0.005);
    for p in points {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{radius}\" fill=\"{POINT_COLOUR}\"/>",
            num(p.x),
            num(-p.y)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Fixed six-decimal formatting without a negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// The part of `line` inside `bounds` (Liang–Barsky on the infinite line).
/// Segments shorter than a billionth of the box diagonal are dropped.
fn clip_line(line: &LineImplicit, bounds: &Bounds) -> Option<(Point2, Point2)> {
    let (a, b, c) = (line.a(), line.b(), line.c());
    let nn = a * a + b * b;
    let origin = Point2::new(-a * c / nn, -b * c / nn);
    let dir = (-b, a);
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for (p, q) in [
        (-dir.0, origin.x - bounds.xmin),
        (dir.0, bounds.xmax - origin.x),
        (-dir.1, origin.y - bounds.ymin),
        (dir.1, bounds.ymax - origin.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
            continue;
        }
        let r = q / p;
        if p < 0.0 {
            t0 = t0.max(r);
        } else {
            t1 = t1.min(r);
        }
    }
    let diagonal = bounds.width().hypot(bounds.height());
    if !(t0.is_finite() && t1.is_finite()) || (t1 - t0) * nn.sqrt() <= 1e-9 * diagonal {
        return None;
    }
    let at = |t: f64| Point2::new(origin.x + t * dir.0, origin.y + t * dir.1);
    Some((at(t0), at(t1)))
}
