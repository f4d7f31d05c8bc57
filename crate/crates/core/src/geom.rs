//! Points, implicit lines and conics in the plane.
//!
//! Lines are the function `L(x, y) = a·x + b·y + c`; conics are
//! `a·x² + b·x·y + c·y² + d·x + e·y + f`. Every construction in this crate
//! is assembled from these two building blocks.

use std::fmt;

use crate::error::{Error, Result};

/// Coincident-point tolerance for unit-scale inputs.
pub const EPS_DEGENERATE: f64 = 1e-9;
/// Values at or below this magnitude have no reliable sign.
pub const EPS_SIGN: f64 = 1e-12;
/// On-curve tolerance for unit-scale inputs.
pub const EPS_ON_CURVE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(&self, other: &Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A gradient or direction vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GradientVec {
    pub gx: f64,
    pub gy: f64,
}

impl GradientVec {
    pub const fn new(gx: f64, gy: f64) -> Self {
        Self { gx, gy }
    }

    pub fn norm(&self) -> f64 {
        self.gx.hypot(self.gy)
    }

    /// The 2-D cross product `self × other`.
    pub fn cross(&self, other: &GradientVec) -> f64 {
        self.gx * other.gy - self.gy * other.gx
    }

    pub fn dot(&self, other: &GradientVec) -> f64 {
        self.gx * other.gx + self.gy * other.gy
    }

    pub fn scale(&self, s: f64) -> GradientVec {
        GradientVec::new(self.gx * s, self.gy * s)
    }

    pub fn is_zero(&self) -> bool {
        self.gx == 0.0 && self.gy == 0.0
    }
}

impl std::ops::Add for GradientVec {
    type Output = GradientVec;

    fn add(self, rhs: GradientVec) -> GradientVec {
        GradientVec::new(self.gx + rhs.gx, self.gy + rhs.gy)
    }
}

impl std::ops::AddAssign for GradientVec {
    fn add_assign(&mut self, rhs: GradientVec) {
        self.gx += rhs.gx;
        self.gy += rhs.gy;
    }
}

impl std::ops::Sub for GradientVec {
    type Output = GradientVec;

    fn sub(self, rhs: GradientVec) -> GradientVec {
        GradientVec::new(self.gx - rhs.gx, self.gy - rhs.gy)
    }
}

impl fmt::Display for GradientVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.gx, self.gy)
    }
}

/// An oriented line `a·x + b·y + c`, used as an implicit function.
///
/// The coefficients are kept exactly as constructed: the scale and sign of a
/// line change every blend it takes part in, so nothing is normalized
/// implicitly. [`LineImplicit::through`] is the normalizing constructor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineImplicit {
    a: f64,
    b: f64,
    c: f64,
}

impl LineImplicit {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || (a == 0.0 && b == 0.0) {
            return Err(Error::InvalidLine);
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn coeffs(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn eval(&self, p: Point2) -> f64 {
        self.a * p.x + self.b * p.y + self.c
    }

    /// The (constant) gradient `(a, b)`.
    pub fn gradient(&self) -> GradientVec {
        GradientVec::new(self.a, self.b)
    }

    pub fn negated(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            c: -self.c,
        }
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.a * s, self.b * s, self.c * s)
    }

    /// The line through `p` and `q`, normalized to `a² + b² = 1` with the
    /// first nonzero of `(a, b)` positive.
    pub fn through(p: Point2, q: Point2) -> Result<Self> {
        let raw = Self::chord(p, q)?;
        let n = raw.gradient().norm();
        Ok(Self {
            a: raw.a / n,
            b: raw.b / n,
            c: raw.c / n,
        })
    }

    /// The two-point line `(p.y − q.y)·x + (q.x − p.x)·y + (p.x·q.y − q.x·p.y)`
    /// with the sign fixed as in [`LineImplicit::through`].
    ///
    /// Its normal has the length of the chord `pq`. This is the scale the
    /// secants of the blending constructions use.
    pub fn chord(p: Point2, q: Point2) -> Result<Self> {
        if !(p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidLine);
        }
        if p.distance(&q) <= EPS_DEGENERATE {
            return Err(Error::DegeneratePoints {
                tolerance: EPS_DEGENERATE,
            });
        }
        let line = Self {
            a: p.y - q.y,
            b: q.x - p.x,
            c: p.x * q.y - q.x * p.y,
        };
        let lead = if line.a != 0.0 { line.a } else { line.b };
        Ok(if lead < 0.0 { line.negated() } else { line })
    }

    /// Returns `self` or its negation, whichever is positive at `reference`.
    pub fn orient_toward(&self, reference: Point2) -> Result<Self> {
        let v = self.eval(reference);
        if v.abs() <= EPS_SIGN {
            return Err(Error::ReferenceOnLine);
        }
        Ok(if v < 0.0 { self.negated() } else { *self })
    }

    /// Intersection point with `other`, or `None` for (near) parallel lines.
    pub fn intersect(&self, other: &LineImplicit) -> Option<Point2> {
        let det = self.a * other.b - self.b * other.a;
        let scale = self.gradient().norm() * other.gradient().norm();
        if det.abs() <= EPS_SIGN * scale {
            return None;
        }
        Some(Point2::new(
            (self.b * other.c - other.b * self.c) / det,
            (other.a * self.c - self.a * other.c) / det,
        ))
    }

    /// True when one line is a nonzero multiple of the other.
    pub fn same_up_to_scale(&self, other: &LineImplicit) -> bool {
        scale_mismatch(&self.coeffs(), &other.coeffs()) < 1e-12
    }
}

impl fmt::Display for LineImplicit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·x + {}·y + {}", self.a, self.b, self.c)
    }
}

/// `a·x² + b·x·y + c·y² + d·x + e·y + f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl ConicCoeffs {
    pub const fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub const fn from_array(v: [f64; 6]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub const fn to_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    /// Finite and not identically zero.
    pub fn is_valid(&self) -> bool {
        let v = self.to_array();
        v.iter().all(|c| c.is_finite()) && v.iter().any(|&c| c != 0.0)
    }

    pub fn eval(&self, p: Point2) -> f64 {
        let (x, y) = (p.x, p.y);
        self.a * x * x + self.b * x * y + self.c * y * y + self.d * x + self.e * y + self.f
    }

    pub fn gradient(&self, p: Point2) -> GradientVec {
        GradientVec::new(
            2.0 * self.a * p.x + self.b * p.y + self.d,
            2.0 * self.c * p.y + self.b * p.x + self.e,
        )
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_array(self.to_array().map(|c| c * s))
    }

    /// Unit coefficient norm, first nonzero coefficient positive.
    pub fn normalized(&self) -> Self {
        let v = self.to_array();
        let n = self.norm();
        let lead = v
            .iter()
            .copied()
            .find(|c| c.abs() > 1e-12 * n)
            .unwrap_or(1.0);
        self.scaled(lead.signum() / n)
    }

    /// `|Q(p)|` relative to the coefficient norm and the size of `p`, so the
    /// on-curve test is independent of how the conic is scaled.
    pub fn scaled_residual(&self, p: Point2) -> f64 {
        self.eval(p).abs() / (self.norm() * (1.0 + p.x * p.x + p.y * p.y))
    }

    pub fn is_on_curve(&self, p: Point2, tolerance: f64) -> bool {
        self.scaled_residual(p) <= tolerance
    }

    /// Relative distance between `self` and the best multiple of `other`.
    pub fn mismatch_up_to_scale(&self, other: &ConicCoeffs) -> f64 {
        scale_mismatch(&self.to_array(), &other.to_array())
    }

    /// The tangent line at a curve point; its normal is the unit gradient.
    pub fn tangent_line_at(&self, p: Point2) -> Result<LineImplicit> {
        let residual = self.scaled_residual(p);
        if residual > EPS_ON_CURVE {
            return Err(Error::PointNotOnConic { residual });
        }
        let g = self.gradient(p);
        let n = g.norm();
        if n <= EPS_SIGN * self.norm() {
            return Err(Error::SingularPoint);
        }
        let (a, b) = (g.gx / n, g.gy / n);
        LineImplicit::new(a, b, -(a * p.x + b * p.y))
    }
}

impl fmt::Display for ConicCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_array();
        write!(f, "{},{},{},{},{},{}", v[0], v[1], v[2], v[3], v[4], v[5])
    }
}

/// `‖a − s·b‖ / ‖a‖` for the least-squares scalar `s`; `0` means the vectors
/// are parallel. Returns `1` when either vector is zero and the other is not.
pub fn scale_mismatch(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let bb: f64 = b.iter().map(|x| x * x).sum();
    if aa == 0.0 || bb == 0.0 {
        return if aa == bb { 0.0 } else { 1.0 };
    }
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let s = ab / bb;
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - s * y).powi(2)).sum();
    (diff / aa).sqrt()
}
