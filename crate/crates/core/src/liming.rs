//! Liming's two-tangent conic and the inverse problem: given a conic and
//! two of its tangents with the secant through the tangency points, find the
//! blending parameter that reproduces it.
//!
//! The conic is `(1 − λ)·L₁·L₂ − λ·C²`. For `λ ∈ (0, 1)` it passes through
//! the points where `C` meets `L₁` and `L₂`, tangent to the lines there.

use crate::error::{Error, Result};
use crate::geom::{ConicCoeffs, GradientVec, LineImplicit, Point2, EPS_ON_CURVE, EPS_SIGN};
use crate::poly::Poly2;

/// Coefficient agreement required between the Liming expansion and `ω·Q`.
pub const REPRODUCTION_TOLERANCE: f64 = 1e-9;

/// Candidate sample points closer than this to a tangent (in `|L₁·L₂|`) are skipped.
const SAMPLE_MIN_TANGENT_PRODUCT: f64 = 1e-6;
const SAMPLE_RAYS: usize = 72;
const SAMPLE_STEPS: usize = 256;

/// Two tangents `l1`, `l2`, the secant `c` and the blend parameter `λ ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimingSpec {
    l1: LineImplicit,
    l2: LineImplicit,
    c: LineImplicit,
    lambda: f64,
}

impl LimingSpec {
    /// Coincident tangents are accepted; the result is then a degenerate
    /// line pair.
    pub fn new(l1: LineImplicit, l2: LineImplicit, c: LineImplicit, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidLambda(lambda));
        }
        Ok(Self { l1, l2, c, lambda })
    }

    pub fn l1(&self) -> LineImplicit {
        self.l1
    }

    pub fn l2(&self) -> LineImplicit {
        self.l2
    }

    pub fn secant(&self) -> LineImplicit {
        self.c
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The six conic coefficients, by expanding the line products.
    pub fn conic(&self) -> ConicCoeffs {
        liming_expansion(&self.l1, &self.l2, &self.c, self.lambda)
    }

    pub fn eval(&self, p: Point2) -> f64 {
        let c = self.c.eval(p);
        (1.0 - self.lambda) * self.l1.eval(p) * self.l2.eval(p) - self.lambda * c * c
    }

    pub fn gradient(&self, p: Point2) -> GradientVec {
        let (v1, v2, c) = (self.l1.eval(p), self.l2.eval(p), self.c.eval(p));
        let ribbon = self.l1.gradient().scale(v2) + self.l2.gradient().scale(v1);
        ribbon.scale(1.0 - self.lambda) - self.c.gradient().scale(2.0 * self.lambda * c)
    }

    /// Where the secant meets each tangent; `None` for a tangent parallel to it.
    pub fn tangency_points(&self) -> [Option<Point2>; 2] {
        [self.l1.intersect(&self.c), self.l2.intersect(&self.c)]
    }
}

/// `(1 − λ)·L₁·L₂ − λ·C²` expanded for any real `λ`.
pub fn liming_expansion(
    l1: &LineImplicit,
    l2: &LineImplicit,
    c: &LineImplicit,
    lambda: f64,
) -> ConicCoeffs {
    let ribbon = &Poly2::from_line(l1) * &Poly2::from_line(l2);
    let secant = Poly2::from_line(c).square();
    (&ribbon.scaled(1.0 - lambda) - &secant.scaled(lambda)).to_conic()
}

/// `λ` and the factor `ω` with `(1 − λ)·L₁·L₂ − λ·C² ≡ ω·Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaOmega {
    pub lambda: f64,
    pub omega: f64,
}

/// Recovers `(λ, ω)` from one point of `q` lying on neither tangent.
///
/// `λ = L₁L₂ / (L₁L₂ + C²)` at the sample. `λ` is not forced into `(0, 1)`:
/// with lines oriented inconsistently the formula lands outside and the
/// result is still a valid reproduction.
pub fn recover_lambda(
    q: &ConicCoeffs,
    l1: &LineImplicit,
    l2: &LineImplicit,
    c: &LineImplicit,
    sample: Point2,
) -> Result<LambdaOmega> {
    let residual = q.scaled_residual(sample);
    if !(residual <= EPS_ON_CURVE) {
        return Err(Error::SampleNotOnConic { residual });
    }
    let size = 1.0 + sample.norm();
    let (v1, v2) = (l1.eval(sample), l2.eval(sample));
    if v1.abs() <= EPS_SIGN * l1.gradient().norm() * size
        || v2.abs() <= EPS_SIGN * l2.gradient().norm() * size
    {
        return Err(Error::SampleOnTangent);
    }
    let ribbon = v1 * v2;
    let secant_sq = c.eval(sample).powi(2);
    let denominator = ribbon + secant_sq;
    if denominator.abs() <= EPS_SIGN * (ribbon.abs() + secant_sq) {
        return Err(Error::NotReproducible {
            mismatch: f64::INFINITY,
        });
    }
    let lambda = ribbon / denominator;

    let expansion = liming_expansion(l1, l2, c, lambda).to_array();
    let target = q.to_array();
    let qq: f64 = target.iter().map(|v| v * v).sum();
    let omega = expansion
        .iter()
        .zip(&target)
        .map(|(e, t)| e * t)
        .sum::<f64>()
        / qq;
    let scale: f64 = expansion.iter().map(|v| v * v).sum::<f64>().sqrt();
    let diff: f64 = expansion
        .iter()
        .zip(&target)
        .map(|(e, t)| (e - omega * t).powi(2))
        .sum::<f64>()
        .sqrt();
    let mismatch = if scale > 0.0 {
        diff / scale
    } else {
        f64::INFINITY
    };
    if !(mismatch <= REPRODUCTION_TOLERANCE) || omega == 0.0 {
        return Err(Error::NotReproducible { mismatch });
    }
    Ok(LambdaOmega { lambda, omega })
}

/// Finds a point of `q` away from both tangents, for callers without one.
///
/// Casts rays from the centroid of `anchors` (normally the tangency points),
/// brackets the first sign change of `q` along each ray and refines it by
/// bisection. Among candidates with `|L₁·L₂| ≥ 1e−6` the one farthest from
/// the nearer tangent wins.
pub fn find_sample_point(
    q: &ConicCoeffs,
    l1: &LineImplicit,
    l2: &LineImplicit,
    anchors: &[Point2],
) -> Result<Point2> {
    if anchors.is_empty() {
        return Err(Error::NoSamplePoint);
    }
    let n = anchors.len() as f64;
    let centre = Point2::new(
        anchors.iter().map(|p| p.x).sum::<f64>() / n,
        anchors.iter().map(|p| p.y).sum::<f64>() / n,
    );
    let spread = anchors
        .iter()
        .map(|p| p.distance(&centre))
        .fold(0.0f64, f64::max);
    let reach = 4.0 * (spread + 1.0);
    let (n1, n2) = (l1.gradient().norm(), l2.gradient().norm());

    let mut best: Option<(f64, Point2)> = None;
    for k in 0..SAMPLE_RAYS {
        // offset keeps rays off the axis directions, where test data likes to sit
        let theta = std::f64::consts::TAU * (k as f64 + 0.37) / SAMPLE_RAYS as f64;
        let dir = (theta.cos(), theta.sin());
        let at = |t: f64| Point2::new(centre.x + t * dir.0, centre.y + t * dir.1);
        let Some(t) = first_root_along(|t| q.eval(at(t)), reach) else {
            continue;
        };
        let s = at(t);
        let (v1, v2) = (l1.eval(s), l2.eval(s));
        if (v1 * v2).abs() < SAMPLE_MIN_TANGENT_PRODUCT {
            continue;
        }
        let score = (v1.abs() / n1).min(v2.abs() / n2);
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, s));
        }
    }
    best.map(|(_, s)| s).ok_or(Error::NoSamplePoint)
}

fn first_root_along(f: impl Fn(f64) -> f64, reach: f64) -> Option<f64> {
    let step = reach / SAMPLE_STEPS as f64;
    let mut lo = 0.0;
    let mut f_lo = f(lo);
    for i in 1..=SAMPLE_STEPS {
        let hi = i as f64 * step;
        let f_hi = f(hi);
        if f_lo == 0.0 {
            return Some(lo);
        }
        if f_lo.signum() != f_hi.signum() {
            return Some(bisect(&f, lo, hi, f_lo));
        }
        lo = hi;
        f_lo = f_hi;
    }
    None
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let sign_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
