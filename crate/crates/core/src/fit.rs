//! Conic through two points with prescribed gradients and one extra point.
//!
//! Each tangential constraint contributes `f(x, y) = 0` and
//! `dx·∂f/∂y − dy·∂f/∂x = 0`; the third point adds one more interpolation
//! row. The resulting 5×6 homogeneous system has a one-dimensional null
//! space in general position, which is the conic up to scale.

use nalgebra::{Matrix6, RowSVector, Vector6};

use crate::error::{Error, Result};
use crate::geom::{ConicCoeffs, GradientVec, LineImplicit, Point2, EPS_DEGENERATE};
use crate::poly::Poly2;

/// `σ₅ / σ₁` at or below this means the system has rank < 5.
pub const EPS_RANK: f64 = 1e-10;
const RESIDUAL_TOLERANCE: f64 = 1e-10;
const VALIDATION_TOLERANCE: f64 = 1e-8;

/// A point to interpolate with the gradient direction the curve must have there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentConstraint {
    pub at: Point2,
    pub grad: GradientVec,
}

impl TangentConstraint {
    pub fn new(at: Point2, grad: GradientVec) -> Result<Self> {
        if !(at.is_finite() && grad.gx.is_finite() && grad.gy.is_finite()) {
            return Err(Error::DegenerateInput("non-finite constraint"));
        }
        if grad.is_zero() {
            return Err(Error::DegenerateInput("zero gradient direction"));
        }
        Ok(Self { at, grad })
    }
}

/// Five constraint rows over the columns `(a, b, c, d, e, f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSystem {
    pub rows: [[f64; 6]; 5],
}

fn interpolation_row(p: Point2) -> [f64; 6] {
    let (x, y) = (p.x, p.y);
    [x * x, x * y, y * y, x, y, 1.0]
}

/// `m·(2c·y + b·x + e) − n·(2a·x + b·y + d)` with `(m, n)` the gradient.
fn tangency_row(t: &TangentConstraint) -> [f64; 6] {
    let (x, y) = (t.at.x, t.at.y);
    let (m, n) = (t.grad.gx, t.grad.gy);
    [-2.0 * n * x, m * x - n * y, 2.0 * m * y, -n, m, 0.0]
}

pub fn build_constraint_system(
    t1: &TangentConstraint,
    t2: &TangentConstraint,
    p3: Point2,
) -> Result<ConstraintSystem> {
    check_distinct(t1.at, t2.at, p3)?;
    Ok(ConstraintSystem {
        rows: [
            interpolation_row(t1.at),
            interpolation_row(t2.at),
            interpolation_row(p3),
            tangency_row(t1),
            tangency_row(t2),
        ],
    })
}

fn check_distinct(p1: Point2, p2: Point2, p3: Point2) -> Result<()> {
    if !p3.is_finite() {
        return Err(Error::DegenerateInput("non-finite interpolation point"));
    }
    if p1.distance(&p2) <= EPS_DEGENERATE {
        return Err(Error::DegenerateInput("tangency points coincide"));
    }
    if p3.distance(&p1) <= EPS_DEGENERATE || p3.distance(&p2) <= EPS_DEGENERATE {
        return Err(Error::DegenerateInput(
            "interpolation point coincides with a tangency point",
        ));
    }
    Ok(())
}

/// Unit-norm spanning vector of the null space, first nonzero entry positive.
///
/// Computed from the SVD of the system padded to 6×6 with a zero row: the
/// right singular vector of the smallest singular value.
pub fn null_space_1d(sys: &ConstraintSystem) -> Result<ConicCoeffs> {
    let a = Matrix6::from_fn(|i, j| if i < 5 { sys.rows[i][j] } else { 0.0 });
    if !a.iter().all(|v| v.is_finite()) {
        return Err(Error::DegenerateInput("non-finite constraint row"));
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let largest = svd.singular_values[order[0]];
    let fifth = svd.singular_values[order[4]];
    let ratio = if largest > 0.0 { fifth / largest } else { 0.0 };
    if ratio <= EPS_RANK {
        return Err(Error::RankDeficient { ratio });
    }

    let v: RowSVector<f64, 6> = v_t.row(order[5]).into_owned();
    let mut coeffs = [0.0; 6];
    coeffs.copy_from_slice(v.as_slice());
    let conic = ConicCoeffs::from_array(coeffs).normalized();

    let residual = (a * Vector6::from(conic.to_array())).norm();
    if residual >= RESIDUAL_TOLERANCE * a.norm() {
        return Err(Error::FitValidation(format!(
            "null-space residual {residual:e}"
        )));
    }
    Ok(conic)
}

/// Fits the conic and checks it against all five constraints.
///
/// Coordinates are moved to the unit box around the three points before
/// the system is assembled; the fitted conic is mapped back afterwards.
pub fn fit_conic_two_tangents_one_point(
    t1: &TangentConstraint,
    t2: &TangentConstraint,
    p3: Point2,
) -> Result<ConicCoeffs> {
    check_distinct(t1.at, t2.at, p3)?;
    let pts = [t1.at, t2.at, p3];
    let (min_x, max_x) = extent(pts.iter().map(|p| p.x));
    let (min_y, max_y) = extent(pts.iter().map(|p| p.y));
    let centre = Point2::new(0.5 * (min_x + max_x), 0.5 * (min_y + max_y));
    let scale = 0.5 * (max_x - min_x).max(max_y - min_y);
    let to_unit = |p: Point2| Point2::new((p.x - centre.x) / scale, (p.y - centre.y) / scale);

    // a uniform scale leaves gradient directions unchanged
    let local = build_constraint_system(
        &TangentConstraint {
            at: to_unit(t1.at),
            grad: t1.grad,
        },
        &TangentConstraint {
            at: to_unit(t2.at),
            grad: t2.grad,
        },
        to_unit(p3),
    )?;
    let unit_conic = null_space_1d(&local)?;

    let x_map = Poly2::from_line(&LineImplicit::new(1.0 / scale, 0.0, -centre.x / scale)?);
    let y_map = Poly2::from_line(&LineImplicit::new(0.0, 1.0 / scale, -centre.y / scale)?);
    let conic = Poly2::from_conic(&unit_conic)
        .compose_affine(&x_map, &y_map)
        .to_conic()
        .normalized();

    for p in pts {
        let residual = conic.scaled_residual(p);
        if !(residual <= VALIDATION_TOLERANCE) {
            return Err(Error::FitValidation(format!(
                "point {p} off the conic by {residual:e}"
            )));
        }
    }
    for t in [t1, t2] {
        let g = conic.gradient(t.at);
        let scale = g.norm() * t.grad.norm();
        if !(scale > 0.0 && g.cross(&t.grad).abs() / scale < VALIDATION_TOLERANCE) {
            return Err(Error::FitValidation(format!(
                "gradient at {} is not parallel to {}",
                t.at, t.grad
            )));
        }
    }
    Ok(conic)
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}
