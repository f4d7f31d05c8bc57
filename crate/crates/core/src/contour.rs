//! Zero-set extraction by marching squares, plus tangency reports.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{GradientVec, LineImplicit, Point2};

/// Gradients shorter than this make the tangent direction indeterminate.
pub const EPS_GRADIENT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Bounds {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Result<Self> {
        let finite = [xmin, ymin, xmax, ymax].iter().all(|v| v.is_finite());
        if !finite || xmin >= xmax || ymin >= ymax {
            return Err(Error::InvalidBounds);
        }
        Ok(Self {
            xmin,
            ymin,
            xmax,
            ymax,
        })
    }

    /// Bounding box of `points`, each side grown so the box is `1 + inflate`
    /// times as large about its centre. A flat box borrows the other side's
    /// extent (or 1 when all points coincide).
    pub fn around(points: &[Point2], inflate: f64) -> Result<Self> {
        let first = points.first().ok_or(Error::InvalidBounds)?;
        let (mut xmin, mut ymin, mut xmax, mut ymax) = (first.x, first.y, first.x, first.y);
        for p in points {
            xmin = xmin.min(p.x);
            xmax = xmax.max(p.x);
            ymin = ymin.min(p.y);
            ymax = ymax.max(p.y);
        }
        let (cx, cy) = (0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
        let fallback = (xmax - xmin).max(ymax - ymin);
        let fallback = if fallback > 0.0 { fallback } else { 1.0 };
        let w = if xmax > xmin { xmax - xmin } else { fallback };
        let h = if ymax > ymin { ymax - ymin } else { fallback };
        let (hw, hh) = (0.5 * w * (1.0 + inflate), 0.5 * h * (1.0 + inflate));
        Self::new(cx - hw, cy - hh, cx + hw, cy + hh)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }
}

/// Field values on an `(N+1)×(N+1)` lattice plus the `N×N` cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSampling {
    bounds: Bounds,
    resolution: usize,
    values: Vec<f64>,
    centres: Vec<f64>,
}

impl GridSampling {
    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Value at lattice point `(i, j)`; `i` runs along x. Non-finite where
    /// the field could not be evaluated.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.resolution + 1) + i]
    }

    /// Value at the centre of cell `(i, j)`.
    pub fn centre(&self, i: usize, j: usize) -> f64 {
        self.centres[j * self.resolution + i]
    }

    pub fn lattice_point(&self, i: usize, j: usize) -> Point2 {
        lattice_point(&self.bounds, self.resolution, i as f64, j as f64)
    }

    /// Cell edge length along x and y.
    pub fn cell_size(&self) -> (f64, f64) {
        let n = self.resolution as f64;
        (self.bounds.width() / n, self.bounds.height() / n)
    }
}

fn lattice_point(b: &Bounds, n: usize, i: f64, j: f64) -> Point2 {
    let n = n as f64;
    Point2::new(b.xmin + b.width() * (i / n), b.ymin + b.height() * (j / n))
}

/// Samples `field` on the lattice; rows are evaluated in parallel.
pub fn sample_grid(field: &impl Field, bounds: Bounds, resolution: usize) -> Result<GridSampling> {
    if resolution < 2 {
        return Err(Error::InvalidResolution(resolution));
    }
    let n = resolution;
    let eval = |p: Point2| field.value(p).unwrap_or(f64::NAN);
    let values = (0..=n)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..=n)
                .map(move |i| eval(lattice_point(&bounds, n, i as f64, j as f64)))
                .collect::<Vec<_>>()
        })
        .collect();
    let centres = (0..n)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..n)
                .map(move |i| eval(lattice_point(&bounds, n, i as f64 + 0.5, j as f64 + 0.5)))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(GridSampling {
        bounds,
        resolution,
        values,
        centres,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point2>,
    /// The last point connects back to the first (which is not repeated).
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContourSet {
    pub polylines: Vec<Polyline>,
}

impl ContourSet {
    pub fn vertex_count(&self) -> usize {
        self.polylines.iter().map(|p| p.points.len()).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point2> {
        self.polylines.iter().flat_map(|p| p.points.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Edge {
    /// `(i, j)`–`(i+1, j)`
    Horizontal(usize, usize),
    /// `(i, j)`–`(i, j+1)`
    Vertical(usize, usize),
}

/// Marching squares with linear interpolation along cell edges.
///
/// Saddle cells take the sign of their centre sample. Cells touching a
/// non-finite lattice value are skipped. Segments are chained through the
/// cell edges they share, which is the same as joining identical endpoints.
pub fn trace_contours(grid: &GridSampling) -> ContourSet {
    let n = grid.resolution;
    let mut segments: Vec<(Edge, Edge)> = Vec::new();

    for j in 0..n {
        for i in 0..n {
            let corners = [
                grid.value(i, j),
                grid.value(i + 1, j),
                grid.value(i + 1, j + 1),
                grid.value(i, j + 1),
            ];
            if corners.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let case =
                corners.iter().enumerate().fold(
                    0u8,
                    |acc, (k, &v)| if v > 0.0 { acc | (1 << k) } else { acc },
                );

            let bottom = Edge::Horizontal(i, j);
            let right = Edge::Vertical(i + 1, j);
            let top = Edge::Horizontal(i, j + 1);
            let left = Edge::Vertical(i, j);

            let centre_inside = || {
                let c = grid.centre(i, j);
                let c = if c.is_finite() {
                    c
                } else {
                    corners.iter().sum::<f64>() / 4.0
                };
                c > 0.0
            };

            // bits: 1 = bottom-left, 2 = bottom-right, 4 = top-right, 8 = top-left
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    if centre_inside() {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                10 => {
                    if centre_inside() {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    }
                }
                _ => unreachable!("four corner bits"),
            }
        }
    }

    chain(grid, &segments)
}

fn edge_point(grid: &GridSampling, edge: Edge) -> Point2 {
    let ((i0, j0), (i1, j1)) = match edge {
        Edge::Horizontal(i, j) => ((i, j), (i + 1, j)),
        Edge::Vertical(i, j) => ((i, j), (i, j + 1)),
    };
    let (v0, v1) = (grid.value(i0, j0), grid.value(i1, j1));
    let t = v0 / (v0 - v1);
    let (a, b) = (grid.lattice_point(i0, j0), grid.lattice_point(i1, j1));
    Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}

fn chain(grid: &GridSampling, segments: &[(Edge, Edge)]) -> ContourSet {
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        by_edge.entry(a).or_default().push(k);
        by_edge.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();

    let mut walk = |start_seg: usize, start_edge: Edge, used: &mut Vec<bool>| {
        used[start_seg] = true;
        let (a, b) = segments[start_seg];
        let mut current = if a == start_edge { b } else { a };
        let mut edges = vec![start_edge, current];
        loop {
            let next = by_edge[&current].iter().copied().find(|&k| !used[k]);
            let Some(k) = next else { break };
            used[k] = true;
            let (a, b) = segments[k];
            current = if a == current { b } else { a };
            edges.push(current);
        }
        let closed = edges.len() > 2 && edges.first() == edges.last();
        if closed {
            edges.pop();
        }
        polylines.push(Polyline {
            points: edges.iter().map(|&e| edge_point(grid, e)).collect(),
            closed,
        });
    };

    // open chains start at an edge used by a single segment
    for k in 0..segments.len() {
        if used[k] {
            continue;
        }
        let (a, b) = segments[k];
        if by_edge[&a].len() == 1 {
            walk(k, a, &mut used);
        } else if by_edge[&b].len() == 1 {
            walk(k, b, &mut used);
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            walk(k, segments[k].0, &mut used);
        }
    }
    ContourSet { polylines }
}

/// Normalized cross residual, or why it could not be measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossResidual {
    Measured(f64),
    /// The field gradient vanishes (or could not be evaluated) at the point.
    Indeterminate,
}

impl std::fmt::Display for CrossResidual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CrossResidual::Measured(v) => write!(f, "{v:.3e}"),
            CrossResidual::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangencyReport {
    /// `|f(p)|`; infinite when the field cannot be evaluated at `p`.
    pub value_residual: f64,
    /// `|gx·b − gy·a| / ‖(gx, gy)‖` against the line normal `(a, b)`.
    pub cross_residual: CrossResidual,
    pub pass: bool,
}

/// Checks that `p` is on the zero set of `field` with `line` as its tangent.
/// Passing requires both residuals strictly under their tolerances.
pub fn verify_tangency(
    field: &impl Field,
    p: Point2,
    line: &LineImplicit,
    tol_value: f64,
    tol_angle: f64,
) -> TangencyReport {
    let value_residual = field.value(p).map(f64::abs).unwrap_or(f64::INFINITY);
    let cross_residual = match field.gradient(p) {
        Ok(g) if g.norm() >= EPS_GRADIENT => {
            let n: GradientVec = line.gradient();
            CrossResidual::Measured((g.gx * n.gy - g.gy * n.gx).abs() / g.norm())
        }
        _ => CrossResidual::Indeterminate,
    };
    let pass = value_residual < tol_value
        && matches!(cross_residual, CrossResidual::Measured(c) if c < tol_angle);
    TangencyReport {
        value_residual,
        cross_residual,
        pass,
    }
}
