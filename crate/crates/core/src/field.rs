//! A uniform evaluation surface over every implicit function in the crate.

use crate::error::Result;
use crate::geom::{ConicCoeffs, GradientVec, LineImplicit, Point2};
use crate::ipatch::{FourTangentSpec, IPatchSpec};
use crate::liming::LimingSpec;

/// An implicit function with its analytic gradient.
///
/// Evaluation fails only at poles of the normalized and faithful patch forms.
pub trait Field: Sync {
    fn value(&self, p: Point2) -> Result<f64>;
    fn gradient(&self, p: Point2) -> Result<GradientVec>;
}

impl<F: Field + ?Sized> Field for &F {
    fn value(&self, p: Point2) -> Result<f64> {
        (**self).value(p)
    }

    fn gradient(&self, p: Point2) -> Result<GradientVec> {
        (**self).gradient(p)
    }
}

impl Field for LineImplicit {
    fn value(&self, p: Point2) -> Result<f64> {
        Ok(self.eval(p))
    }

    fn gradient(&self, _: Point2) -> Result<GradientVec> {
        Ok(LineImplicit::gradient(self))
    }
}

impl Field for ConicCoeffs {
    fn value(&self, p: Point2) -> Result<f64> {
        Ok(self.eval(p))
    }

    fn gradient(&self, p: Point2) -> Result<GradientVec> {
        Ok(ConicCoeffs::gradient(self, p))
    }
}

impl Field for LimingSpec {
    fn value(&self, p: Point2) -> Result<f64> {
        Ok(self.eval(p))
    }

    fn gradient(&self, p: Point2) -> Result<GradientVec> {
        Ok(LimingSpec::gradient(self, p))
    }
}

impl Field for IPatchSpec {
    fn value(&self, p: Point2) -> Result<f64> {
        self.eval(p)
    }

    fn gradient(&self, p: Point2) -> Result<GradientVec> {
        IPatchSpec::gradient(self, p)
    }
}

impl Field for FourTangentSpec {
    fn value(&self, p: Point2) -> Result<f64> {
        self.eval(p)
    }

    fn gradient(&self, p: Point2) -> Result<GradientVec> {
        FourTangentSpec::gradient(self, p)
    }
}
