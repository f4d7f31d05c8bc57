//! Planar I-patches and the four-tangent construction.
//!
//! An n-sided patch blends ribbons `Rᵢ` against squared boundings `Bⱼ`:
//!
//! ```text
//! I = Σᵢ wᵢ·Rᵢ·Πⱼ≠ᵢ Bⱼ² + w₀·Πⱼ Bⱼ²
//! ```
//!
//! The normalized form divides by `Σᵢ Πⱼ≠ᵢ Bⱼ²`, the faithful form by
//! `Σᵢ wᵢ·Πⱼ≠ᵢ Bⱼ²`. The four-tangent curve is the two-sided case with
//! `R₁ = L₁L₂`, `R₂ = L₃L₄` and the secants `C₁`, `C₂` as boundings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{ConicCoeffs, GradientVec, LineImplicit, Point2, EPS_DEGENERATE, EPS_ON_CURVE};
use crate::liming::{find_sample_point, recover_lambda, LambdaOmega};
use crate::poly::Poly2;

/// Normalized and faithful denominators at or below this are poles.
pub const EPS_DEN: f64 = 1e-12;

/// Tolerance for the tangency preconditions of [`reproduce_conic_weights`].
pub const TANGENCY_TOLERANCE: f64 = 1e-7;

/// Required agreement between the reproduced patch and `Q·(C₁² + C₂²)`.
pub const WEIGHT_CHECK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Form {
    #[default]
    Raw,
    Normalized,
    Faithful,
}

impl FromStr for Form {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw" => Ok(Form::Raw),
            "normalized" => Ok(Form::Normalized),
            "faithful" => Ok(Form::Faithful),
            other => Err(format!(
                "unknown form `{other}` (expected raw|normalized|faithful)"
            )),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Raw => "raw",
            Form::Normalized => "normalized",
            Form::Faithful => "faithful",
        })
    }
}

/// A ribbon function: one line, or the product of two kept unexpanded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ribbon {
    Line(LineImplicit),
    Pair(LineImplicit, LineImplicit),
}

impl Ribbon {
    pub fn eval(&self, p: Point2) -> f64 {
        match self {
            Ribbon::Line(l) => l.eval(p),
            Ribbon::Pair(l, m) => l.eval(p) * m.eval(p),
        }
    }

    pub fn gradient(&self, p: Point2) -> GradientVec {
        match self {
            Ribbon::Line(l) => l.gradient(),
            Ribbon::Pair(l, m) => l.gradient().scale(m.eval(p)) + m.gradient().scale(l.eval(p)),
        }
    }

    pub fn to_poly(&self) -> Poly2 {
        match self {
            Ribbon::Line(l) => Poly2::from_line(l),
            Ribbon::Pair(l, m) => &Poly2::from_line(l) * &Poly2::from_line(m),
        }
    }
}

/// General n-sided planar I-patch.
#[derive(Debug, Clone, PartialEq)]
pub struct IPatchSpec {
    ribbons: Vec<Ribbon>,
    boundings: Vec<LineImplicit>,
    weights: Vec<f64>,
    w0: f64,
    form: Form,
}

/// Value and gradient of the numerator and (for non-raw forms) denominator.
struct Parts {
    num: f64,
    num_grad: GradientVec,
    den: f64,
    den_grad: GradientVec,
}

impl IPatchSpec {
    pub fn new(
        ribbons: Vec<Ribbon>,
        boundings: Vec<LineImplicit>,
        weights: Vec<f64>,
        w0: f64,
        form: Form,
    ) -> Result<Self> {
        let n = ribbons.len();
        if n == 0 || boundings.len() != n || weights.len() != n {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self {
            ribbons,
            boundings,
            weights,
            w0,
            form,
        })
    }

    pub fn sides(&self) -> usize {
        self.ribbons.len()
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn with_form(&self, form: Form) -> Self {
        Self {
            form,
            ..self.clone()
        }
    }

    pub fn ribbons(&self) -> &[Ribbon] {
        &self.ribbons
    }

    pub fn boundings(&self) -> &[LineImplicit] {
        &self.boundings
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    fn parts(&self, p: Point2) -> Parts {
        let n = self.sides();
        let b: Vec<f64> = self.boundings.iter().map(|l| l.eval(p)).collect();
        let gb: Vec<GradientVec> = self.boundings.iter().map(|l| l.gradient()).collect();
        let sq_product_without = |skip: &[usize]| -> f64 {
            (0..n)
                .filter(|j| !skip.contains(j))
                .map(|j| b[j] * b[j])
                .product()
        };

        let mut num = 0.0;
        let mut num_grad = GradientVec::default();
        let mut den_unit = 0.0;
        let mut den_unit_grad = GradientVec::default();
        let mut den_weighted = 0.0;
        let mut den_weighted_grad = GradientVec::default();
        let mut full_grad = GradientVec::default();

        for i in 0..n {
            // P_i = Π_{j≠i} B_j² and its gradient by the product rule
            let p_i = sq_product_without(&[i]);
            let mut gp_i = GradientVec::default();
            for k in (0..n).filter(|&k| k != i) {
                gp_i += gb[k].scale(2.0 * b[k] * sq_product_without(&[i, k]));
            }
            let r = self.ribbons[i].eval(p);
            let gr = self.ribbons[i].gradient(p);
            let w = self.weights[i];

            num += w * r * p_i;
            num_grad += (gr.scale(p_i) + gp_i.scale(r)).scale(w);
            den_unit += p_i;
            den_unit_grad += gp_i;
            den_weighted += w * p_i;
            den_weighted_grad += gp_i.scale(w);
            full_grad += gb[i].scale(2.0 * b[i] * p_i);
        }
        let full = sq_product_without(&[]);
        num += self.w0 * full;
        num_grad += full_grad.scale(self.w0);

        let (den, den_grad) = match self.form {
            Form::Raw => (1.0, GradientVec::default()),
            Form::Normalized => (den_unit, den_unit_grad),
            Form::Faithful => (den_weighted, den_weighted_grad),
        };
        Parts {
            num,
            num_grad,
            den,
            den_grad,
        }
    }

    /// The normalizing (or faithful) denominator at `p`; `1` for the raw form.
    pub fn denominator(&self, p: Point2) -> f64 {
        self.parts(p).den
    }

    pub fn eval(&self, p: Point2) -> Result<f64> {
        let parts = self.parts(p);
        if self.form == Form::Raw {
            return Ok(parts.num);
        }
        if parts.den.abs() <= EPS_DEN {
            return Err(Error::ZeroDenominator);
        }
        Ok(parts.num / parts.den)
    }

    /// Analytic gradient of the selected form (quotient rule for the
    /// normalized and faithful forms).
    pub fn gradient(&self, p: Point2) -> Result<GradientVec> {
        let Parts {
            num,
            num_grad,
            den,
            den_grad,
        } = self.parts(p);
        if self.form == Form::Raw {
            return Ok(num_grad);
        }
        if den.abs() <= EPS_DEN {
            return Err(Error::ZeroDenominator);
        }
        Ok((num_grad.scale(den) - den_grad.scale(num)).scale(1.0 / (den * den)))
    }

    /// The raw patch as an explicit polynomial.
    pub fn to_polynomial(&self) -> Result<Poly2> {
        if self.form != Form::Raw {
            return Err(Error::NotRawForm);
        }
        let squares: Vec<Poly2> = self
            .boundings
            .iter()
            .map(|l| Poly2::from_line(l).square())
            .collect();
        let product_without = |skip: Option<usize>| {
            squares
                .iter()
                .enumerate()
                .filter(|(j, _)| Some(*j) != skip)
                .fold(Poly2::constant(1.0), |acc, (_, s)| &acc * s)
        };
        let mut out = product_without(None).scaled(self.w0);
        for (i, (ribbon, &w)) in self.ribbons.iter().zip(&self.weights).enumerate() {
            let term = &ribbon.to_poly() * &product_without(Some(i));
            out = &out + &term.scaled(w);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTriple {
    pub w1: f64,
    pub w2: f64,
    pub w0: f64,
}

impl WeightTriple {
    pub const fn new(w1: f64, w2: f64, w0: f64) -> Self {
        Self { w1, w2, w0 }
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.w1, self.w2, self.w0]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.w1 * s, self.w2 * s, self.w0 * s)
    }
}

impl fmt::Display for WeightTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.w1, self.w2, self.w0)
    }
}

/// Four tangent lines with their tangency points, blended as
/// `w₁·L₁L₂·C₂² + w₂·L₃L₄·C₁² + w₀·C₁²C₂²`.
///
/// Tangents pair as `(l1, l2 | l3, l4)`. The secants are built from the
/// tangency points with [`LineImplicit::chord`], so their normals have the
/// length of the chord they span.
#[derive(Debug, Clone, PartialEq)]
pub struct FourTangentSpec {
    tangents: [LineImplicit; 4],
    points: [Point2; 4],
    secants: [LineImplicit; 2],
    weights: WeightTriple,
    form: Form,
    patch: IPatchSpec,
}

impl FourTangentSpec {
    pub fn new(
        tangents: [LineImplicit; 4],
        points: [Point2; 4],
        weights: WeightTriple,
        form: Form,
    ) -> Result<Self> {
        let secants = secants_for(&tangents, &points)?;
        let patch = IPatchSpec::new(
            vec![
                Ribbon::Pair(tangents[0], tangents[1]),
                Ribbon::Pair(tangents[2], tangents[3]),
            ],
            secants.to_vec(),
            vec![weights.w1, weights.w2],
            weights.w0,
            form,
        )?;
        Ok(Self {
            tangents,
            points,
            secants,
            weights,
            form,
            patch,
        })
    }

    pub fn tangents(&self) -> &[LineImplicit; 4] {
        &self.tangents
    }

    pub fn points(&self) -> &[Point2; 4] {
        &self.points
    }

    pub fn secants(&self) -> &[LineImplicit; 2] {
        &self.secants
    }

    pub fn weights(&self) -> WeightTriple {
        self.weights
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn with_weights(&self, weights: WeightTriple) -> Self {
        Self::new(self.tangents, self.points, weights, self.form)
            .expect("configuration was validated on construction")
    }

    pub fn with_form(&self, form: Form) -> Self {
        Self {
            form,
            patch: self.patch.with_form(form),
            ..self.clone()
        }
    }

    /// The equivalent two-sided [`IPatchSpec`].
    pub fn as_ipatch(&self) -> &IPatchSpec {
        &self.patch
    }

    pub fn eval(&self, p: Point2) -> Result<f64> {
        self.patch.eval(p)
    }

    pub fn gradient(&self, p: Point2) -> Result<GradientVec> {
        self.patch.gradient(p)
    }

    /// The raw field as a polynomial of total degree at most 4.
    pub fn expand_to_polynomial(&self) -> Result<Poly2> {
        self.patch.to_polynomial()
    }
}

/// Validates a four-tangent configuration and builds its two secants.
fn secants_for(tangents: &[LineImplicit; 4], points: &[Point2; 4]) -> Result<[LineImplicit; 2]> {
    for (i, (l, p)) in tangents.iter().zip(points).enumerate() {
        let residual = distance_to(l, *p);
        if !(residual <= EPS_ON_CURVE * (1.0 + p.norm())) {
            return Err(Error::TangencyViolation {
                index: i + 1,
                residual,
            });
        }
    }
    let chord = |i: usize, j: usize, index: usize| {
        if points[i].distance(&points[j]) <= EPS_DEGENERATE {
            return Err(Error::DegenerateSecant { index });
        }
        LineImplicit::chord(points[i], points[j])
    };
    let secants = [chord(0, 1, 1)?, chord(2, 3, 2)?];
    for (s, foreign) in [(0usize, [2usize, 3]), (1, [0, 1])] {
        for k in foreign {
            let p = points[k];
            if distance_to(&secants[s], p) <= EPS_ON_CURVE * (1.0 + p.norm()) {
                return Err(Error::SecantThroughForeignPoint {
                    secant: s + 1,
                    point: k + 1,
                });
            }
        }
    }
    Ok(secants)
}

fn distance_to(l: &LineImplicit, p: Point2) -> f64 {
    l.eval(p).abs() / l.gradient().norm()
}

/// Weights for which the normalized four-tangent patch equals `q` identically.
///
/// Each tangent pair is solved as a Liming problem,
/// `(1 − λᵢ)·Rᵢ − λᵢ·Cᵢ² ≡ ωᵢ·Q`, and the results combine into
///
/// ```text
/// w₁ = (1 − λ₁)/ω₁,  w₂ = (1 − λ₂)/ω₂,  w₀ = −(λ₁/ω₁ + λ₂/ω₂)
/// ```
///
/// The minus sign on `w₀` comes from writing the Liming blend with `−λ·C²`,
/// which keeps `λ` in `(0, 1)` for consistently oriented lines.
pub fn reproduce_conic_weights(
    q: &ConicCoeffs,
    tangents: &[LineImplicit; 4],
    points: &[Point2; 4],
) -> Result<WeightTriple> {
    if !q.is_valid() {
        return Err(Error::RecoveryFailed(
            "conic coefficients are zero or non-finite".into(),
        ));
    }
    for (i, (l, p)) in tangents.iter().zip(points).enumerate() {
        if !is_tangent(q, l, *p) {
            return Err(Error::NotTangent { index: i + 1 });
        }
    }
    let secants = secants_for(tangents, points)?;

    let first = recover_pair(
        q,
        [&tangents[0], &tangents[1]],
        &secants[0],
        [points[0], points[1]],
        [points[2], points[3]],
    )?;
    let second = recover_pair(
        q,
        [&tangents[2], &tangents[3]],
        &secants[1],
        [points[2], points[3]],
        [points[0], points[1]],
    )?;

    let weights = WeightTriple::new(
        (1.0 - first.lambda) / first.omega,
        (1.0 - second.lambda) / second.omega,
        -(first.lambda / first.omega + second.lambda / second.omega),
    );

    let patch = FourTangentSpec::new(*tangents, *points, weights, Form::Raw)?;
    let expanded = patch.expand_to_polynomial()?;
    let target = &Poly2::from_conic(q)
        * &(&Poly2::from_line(&secants[0]).square() + &Poly2::from_line(&secants[1]).square());
    let difference = expanded.relative_difference(&target);
    if !(difference <= WEIGHT_CHECK_TOLERANCE) {
        return Err(Error::RecoveryFailed(format!(
            "patch differs from Q·(C1² + C2²) by {difference:e}"
        )));
    }
    Ok(weights)
}

fn is_tangent(q: &ConicCoeffs, l: &LineImplicit, p: Point2) -> bool {
    if !q.is_on_curve(p, TANGENCY_TOLERANCE) {
        return false;
    }
    if distance_to(l, p) > TANGENCY_TOLERANCE * (1.0 + p.norm()) {
        return false;
    }
    let g = q.gradient(p);
    let n = l.gradient();
    let scale = g.norm() * n.norm();
    scale > 0.0 && g.cross(&n).abs() <= TANGENCY_TOLERANCE * scale
}

/// Solves one tangent pair, sampling `q` at the other pair's tangency points
/// when possible and falling back to a ray search.
fn recover_pair(
    q: &ConicCoeffs,
    lines: [&LineImplicit; 2],
    secant: &LineImplicit,
    own: [Point2; 2],
    others: [Point2; 2],
) -> Result<LambdaOmega> {
    let clearance = |s: &Point2| {
        lines
            .iter()
            .map(|l| distance_to(l, *s))
            .fold(f64::INFINITY, f64::min)
    };
    let mut candidates: Vec<Point2> = others.to_vec();
    candidates.sort_by(|a, b| clearance(b).total_cmp(&clearance(a)));
    if let Ok(s) = find_sample_point(q, lines[0], lines[1], &own) {
        candidates.push(s);
    }
    let mut last = Error::NoSamplePoint;
    for s in candidates {
        match recover_lambda(q, lines[0], lines[1], secant, s) {
            Ok(r) => return Ok(r),
            Err(e) => last = e,
        }
    }
    Err(Error::RecoveryFailed(last.to_string()))
}
