//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tangent_curves::geom::{ConicCoeffs, LineImplicit, Point2};
use tangent_curves::poly::Poly2;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ellipse,
    Hyperbola,
    Parabola,
}

pub const FAMILIES: [Family; 3] = [Family::Ellipse, Family::Hyperbola, Family::Parabola];

/// A nonsingular conic with points ordered along one convex arc or branch.
#[derive(Debug, Clone)]
pub struct ConicSample {
    pub family: Family,
    pub conic: ConicCoeffs,
    pub points: Vec<Point2>,
    pub tangents: Vec<LineImplicit>,
}

impl ConicSample {
    pub fn tangents4(&self) -> [LineImplicit; 4] {
        std::array::from_fn(|k| self.tangents[k])
    }

    pub fn points4(&self) -> [Point2; 4] {
        std::array::from_fn(|k| self.points[k])
    }
}

/// Sorted parameters spread over `[lo, hi]`, consecutive gaps at least half
/// the even spacing.
fn spread(rng: &mut StdRng, lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi - lo) / count as f64;
    (0..count)
        .map(|k| lo + step * (k as f64 + 0.5) + rng.gen_range(-0.25..0.25) * step)
        .collect()
}

/// `count` points of a random conic of `family`, placed with a random
/// rotation and a centre in `[−1, 1]²`.
pub fn random_conic(rng: &mut StdRng, family: Family, count: usize) -> ConicSample {
    let theta = rng.gen_range(0.0..PI);
    let (cx, cy) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let (canonical, local): (ConicCoeffs, Vec<(f64, f64)>) = match family {
        Family::Ellipse => {
            let (a, b) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
            let t0 = rng.gen_range(0.0..2.0 * PI);
            let ts = spread(rng, t0, t0 + 2.0 * PI, count);
            (
                ConicCoeffs::new(1.0 / (a * a), 0.0, 1.0 / (b * b), 0.0, 0.0, -1.0),
                ts.iter().map(|t| (a * t.cos(), b * t.sin())).collect(),
            )
        }
        Family::Hyperbola => {
            let (a, b) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
            let ts = spread(rng, -1.4, 1.4, count);
            (
                ConicCoeffs::new(1.0 / (a * a), 0.0, -1.0 / (b * b), 0.0, 0.0, -1.0),
                ts.iter().map(|t| (a * t.cosh(), b * t.sinh())).collect(),
            )
        }
        Family::Parabola => {
            let f = rng.gen_range(0.25..1.0);
            let ts = spread(rng, -2.0, 2.0, count);
            (
                ConicCoeffs::new(1.0, 0.0, 0.0, 0.0, -4.0 * f, 0.0),
                ts.iter().map(|t| (*t, t * t / (4.0 * f))).collect(),
            )
        }
    };
    let (s, c) = theta.sin_cos();
    // local u, v as functions of global x, y
    let u = Poly2::from_line(&LineImplicit::new(c, s, -(c * cx + s * cy)).unwrap());
    let v = Poly2::from_line(&LineImplicit::new(-s, c, s * cx - c * cy).unwrap());
    let conic = Poly2::from_conic(&canonical)
        .compose_affine(&u, &v)
        .to_conic()
        .normalized();
    let points: Vec<Point2> = local
        .iter()
        .map(|&(lu, lv)| Point2::new(cx + c * lu - s * lv, cy + s * lu + c * lv))
        .collect();
    let tangents = points
        .iter()
        .map(|p| {
            conic
                .tangent_line_at(*p)
                .expect("generated point lies on the conic")
        })
        .collect();
    ConicSample {
        family,
        conic,
        points,
        tangents,
    }
}

/// Null vector of a rank-5 `5×6` matrix by Gaussian elimination with full
/// pivoting, normalised to unit length with its largest entry positive.
pub fn brute_force_null_vector(rows: &[[f64; 6]; 5]) -> [f64; 6] {
    let mut a = *rows;
    let mut cols: [usize; 6] = [0, 1, 2, 3, 4, 5];
    for k in 0..5 {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if v.abs() > best {
                    (pi, pj, best) = (i, j, v.abs());
                }
            }
        }
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        cols.swap(k, pj);
        let pivot = a[k];
        for row in a.iter_mut().skip(k + 1) {
            let factor = row[k] / pivot[k];
            for (v, p) in row.iter_mut().zip(pivot).skip(k) {
                *v -= factor * p;
            }
        }
    }
    let mut z = [0.0; 6];
    z[5] = 1.0;
    for k in (0..5).rev() {
        let s: f64 = (k + 1..6).map(|j| a[k][j] * z[j]).sum();
        z[k] = -s / a[k][k];
    }
    let mut x = [0.0; 6];
    for (k, &col) in cols.iter().enumerate() {
        x[col] = z[k];
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let lead = x
        .iter()
        .copied()
        .fold(0.0, |m: f64, v| if v.abs() > m.abs() { v } else { m });
    x.map(|v| v / norm * lead.signum())
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn tancurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tancurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
