// negated float comparisons make NaN fail every tolerance check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod contour;
pub mod error;
pub mod field;
pub mod fit;
pub mod geom;
pub mod ipatch;
pub mod liming;
pub mod poly;
pub mod scene;
pub mod svg;

pub use error::{Error, Result};
