//! Dense bivariate polynomials of small total degree.
//!
//! Used to expand products of lines into explicit coefficients: Liming
//! conics (degree 2) and four-tangent patches (degree 4).

use std::ops::{Add, Mul, Neg, Sub};

use crate::geom::{scale_mismatch, ConicCoeffs, LineImplicit, Point2};

/// `Σ c[i][j] · xⁱ · yʲ` over `i + j ≤ degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    degree: usize,
    // row-major (degree+1)², index i * (degree + 1) + j; entries with i + j > degree stay zero
    coeffs: Vec<f64>,
}

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![0.0; (degree + 1) * (degree + 1)],
        }
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero(0);
        p.coeffs[0] = c;
        p
    }

    pub fn from_line(l: &LineImplicit) -> Self {
        let mut p = Self::zero(1);
        p.set(0, 0, l.c());
        p.set(1, 0, l.a());
        p.set(0, 1, l.b());
        p
    }

    pub fn from_conic(q: &ConicCoeffs) -> Self {
        let mut p = Self::zero(2);
        p.set(2, 0, q.a);
        p.set(1, 1, q.b);
        p.set(0, 2, q.c);
        p.set(1, 0, q.d);
        p.set(0, 1, q.e);
        p.set(0, 0, q.f);
        p
    }

    /// The quadratic part as a conic. Terms above degree 2 are dropped.
    pub fn to_conic(&self) -> ConicCoeffs {
        ConicCoeffs::new(
            self.coeff(2, 0),
            self.coeff(1, 1),
            self.coeff(0, 2),
            self.coeff(1, 0),
            self.coeff(0, 1),
            self.coeff(0, 0),
        )
    }

    /// Nominal degree (an upper bound on the true degree).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `xⁱ yʲ`; zero outside the stored range.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.degree {
            0.0
        } else {
            self.coeffs[i * (self.degree + 1) + j]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            i + j <= self.degree,
            "monomial x^{i} y^{j} exceeds degree {}",
            self.degree
        );
        let stride = self.degree + 1;
        self.coeffs[i * stride + j] = value;
    }

    /// Coefficients in graded order: `1, x, y, x², xy, y², x³, …` up to `degree`.
    pub fn graded_coeffs(&self, degree: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
        for total in 0..=degree {
            for j in 0..=total {
                out.push(self.coeff(total - j, j));
            }
        }
        out
    }

    pub fn eval(&self, p: Point2) -> f64 {
        // Horner in y inside Horner in x
        let stride = self.degree + 1;
        let mut acc = 0.0;
        for i in (0..=self.degree).rev() {
            let row = &self.coeffs[i * stride..i * stride + stride - i];
            let inner = row.iter().rev().fold(0.0, |s, &c| s * p.y + c);
            acc = acc * p.x + inner;
        }
        acc
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Substitutes `x → ax·x + bx·y + cx`, `y → ay·x + by·y + cy`.
    pub fn compose_affine(&self, x_map: &Poly2, y_map: &Poly2) -> Self {
        let mut out = Poly2::zero(self.degree * x_map.degree.max(y_map.degree).max(1));
        let mut x_pow = Poly2::constant(1.0);
        for i in 0..=self.degree {
            let mut y_pow = Poly2::constant(1.0);
            for j in 0..=self.degree - i {
                let c = self.coeff(i, j);
                if c != 0.0 {
                    out = &out + &(&x_pow * &y_pow).scaled(c);
                }
                y_pow = &y_pow * y_map;
            }
            x_pow = &x_pow * x_map;
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Relative coefficient distance between `self` and the best multiple of
    /// `other` (see [`scale_mismatch`]).
    pub fn mismatch_up_to_scale(&self, other: &Poly2) -> f64 {
        let d = self.degree.max(other.degree);
        scale_mismatch(&self.graded_coeffs(d), &other.graded_coeffs(d))
    }

    /// Largest coefficient difference relative to the largest coefficient of `self`.
    pub fn relative_difference(&self, other: &Poly2) -> f64 {
        let d = self.degree.max(other.degree);
        let a = self.graded_coeffs(d);
        let b = other.graded_coeffs(d);
        let diff = a
            .iter()
            .zip(&b)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        let degree = self.degree.max(rhs.degree);
        let mut out = Poly2::zero(degree);
        for i in 0..=degree {
            for j in 0..=degree - i {
                out.set(i, j, self.coeff(i, j) + rhs.coeff(i, j));
            }
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;

    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        self.scaled(-1.0)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.degree + rhs.degree);
        for i in 0..=self.degree {
            for j in 0..=self.degree - i {
                let a = self.coeff(i, j);
                if a == 0.0 {
                    continue;
                }
                for k in 0..=rhs.degree {
                    for l in 0..=rhs.degree - k {
                        let b = rhs.coeff(k, l);
                        if b != 0.0 {
                            let cur = out.coeff(i + k, j + l);
                            out.set(i + k, j + l, cur + a * b);
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(a: f64, b: f64, c: f64) -> Poly2 {
        Poly2::from_line(&LineImplicit::new(a, b, c).unwrap())
    }

    #[test]
    fn product_of_lines() {
        // (1 − x)(1 − y) = 1 − x − y + xy
        let p = &line(-1.0, 0.0, 1.0) * &line(0.0, -1.0, 1.0);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.graded_coeffs(2), vec![1.0, -1.0, -1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn eval_matches_monomial_sum() {
        let mut p = Poly2::zero(3);
        p.set(3, 0, 2.0);
        p.set(1, 2, -1.5);
        p.set(0, 1, 4.0);
        p.set(0, 0, 0.5);
        let (x, y) = (0.7, -1.3);
        let expected = 2.0 * x * x * x - 1.5 * x * y * y + 4.0 * y + 0.5;
        assert!((p.eval(Point2::new(x, y)) - expected).abs() < 1e-14);
    }

    #[test]
    fn conic_round_trip() {
        let q = ConicCoeffs::new(1.0, 2.0, 3.0, 4.0, 5.0, 6.0);
        assert_eq!(Poly2::from_conic(&q).to_conic(), q);
    }

    #[test]
    fn affine_composition() {
        // x² composed with x → 2x + 1 gives 4x² + 4x + 1
        let mut sq = Poly2::zero(2);
        sq.set(2, 0, 1.0);
        let out = sq.compose_affine(&line(2.0, 0.0, 1.0), &line(0.0, 1.0, 0.0));
        assert_eq!(
            out.to_conic(),
            ConicCoeffs::new(4.0, 0.0, 0.0, 4.0, 0.0, 1.0)
        );
    }

    #[test]
    fn mismatch_detects_scaling() {
        let a = &line(1.0, 2.0, 3.0) * &line(-1.0, 0.5, 0.0);
        assert!(a.mismatch_up_to_scale(&a.scaled(-3.0)) < 1e-15);
        assert!(a.mismatch_up_to_scale(&line(1.0, 0.0, 0.0)) > 0.1);
    }
}
