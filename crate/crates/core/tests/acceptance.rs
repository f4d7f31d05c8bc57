//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::time::{Duration, Instant};

use common::{brute_force_null_vector, fixture, random_conic, rng, tancurve, FAMILIES};
use rand::Rng;
use tangent_curves::contour::{sample_grid, trace_contours, verify_tangency, Bounds, ContourSet};
use tangent_curves::field::Field;
use tangent_curves::fit::{
    fit_conic_two_tangents_one_point, null_space_1d, ConstraintSystem, TangentConstraint,
};
use tangent_curves::geom::{scale_mismatch, ConicCoeffs, GradientVec, LineImplicit, Point2};
use tangent_curves::ipatch::{reproduce_conic_weights, Form, FourTangentSpec, WeightTriple};
use tangent_curves::liming::{liming_expansion, recover_lambda};
use tangent_curves::poly::Poly2;
use tangent_curves::svg::{CURVE_COLOUR, SECANT_COLOUR, TANGENT_COLOUR};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn line(a: f64, b: f64, c: f64) -> LineImplicit {
    LineImplicit::new(a, b, c).unwrap()
}

fn circle_tangents() -> ([LineImplicit; 4], [Point2; 4]) {
    (
        [
            line(-1.0, 0.0, 1.0),
            line(0.0, -1.0, 1.0),
            line(1.0, 0.0, 1.0),
            line(0.0, 1.0, 1.0),
        ],
        [
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(-1.0, 0.0),
            Point2::new(0.0, -1.0),
        ],
    )
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("runtime {elapsed:?} exceeds {limit:?}"))
    }
}

fn circle_reproduction() -> Outcome {
    let start = Instant::now();
    let q = ConicCoeffs::new(-1.0, 0.0, -1.0, 0.0, 0.0, 1.0);
    let (tangents, points) = circle_tangents();
    let w = reproduce_conic_weights(&q, &tangents, &points).map_err(|e| e.to_string())?;
    let mismatch = scale_mismatch(&w.to_array(), &[2.0, 2.0, -2.0]);
    if !(mismatch < 1e-9) {
        return Err(format!(
            "weights {w} not ∝ (2, 2, -2): mismatch {mismatch:e}"
        ));
    }
    let patch =
        FourTangentSpec::new(tangents, points, w, Form::Normalized).map_err(|e| e.to_string())?;
    let [c1, c2] = *patch.secants();
    let mut rng = rng(1);
    let (mut worst, mut count) = (0.0f64, 0);
    while count < 1000 {
        let p = Point2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if c1.eval(p).abs() < 1e-3 || c2.eval(p).abs() < 1e-3 {
            continue;
        }
        let v = patch.eval(p).map_err(|e| e.to_string())?;
        worst = worst.max((v - q.eval(p)).abs());
        count += 1;
    }
    let elapsed = start.elapsed();
    if !(worst < 1e-9) {
        return Err(format!("normalized patch differs from Q by {worst:e}"));
    }
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "weights {w}, max |I − Q| = {worst:.1e} over 1000 points, {elapsed:.2?}"
    ))
}

fn randomized_theorem() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(2);
    let (mut worst_mismatch, mut worst_tangency) = (0.0f64, 0.0f64);
    for k in 0..100 {
        let family = FAMILIES[k % 3];
        let s = random_conic(&mut rng, family, 4);
        let w = reproduce_conic_weights(&s.conic, &s.tangents4(), &s.points4())
            .map_err(|e| format!("conic {k} ({family:?}): {e}"))?;
        let patch = FourTangentSpec::new(s.tangents4(), s.points4(), w, Form::Raw)
            .map_err(|e| e.to_string())?;
        let [c1, c2] = patch.secants().map(|c| Poly2::from_line(&c).square());
        let target = &Poly2::from_conic(&s.conic) * &(&c1 + &c2);
        let expanded = patch.expand_to_polynomial().map_err(|e| e.to_string())?;
        worst_mismatch = worst_mismatch.max(expanded.mismatch_up_to_scale(&target));
        for (l, p) in s.tangents.iter().zip(&s.points) {
            let r = verify_tangency(&patch, *p, l, 1e-8, 1e-8);
            if !r.pass {
                return Err(format!(
                    "conic {k} ({family:?}): tangency at {p} fails: {r:?}"
                ));
            }
            worst_tangency = worst_tangency.max(r.value_residual);
        }
    }
    let elapsed = start.elapsed();
    if !(worst_mismatch < 1e-7) {
        return Err(format!("expansion mismatch {worst_mismatch:e}"));
    }
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!(
        "max expansion mismatch {worst_mismatch:.1e}, max value residual {worst_tangency:.1e}, {elapsed:.2?}"
    ))
}

fn lemma_suite() -> Outcome {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    let (mut lo, mut hi) = (1.0f64, 0.0f64);
    for k in 0..100 {
        let family = FAMILIES[k % 3];
        let s = random_conic(&mut rng, family, 3);
        let (p1, p2) = (s.points[0], s.points[2]);
        let mid = p1.midpoint(&p2);
        let l1 = s.tangents[0]
            .orient_toward(mid)
            .map_err(|e| e.to_string())?;
        let l2 = s.tangents[2]
            .orient_toward(mid)
            .map_err(|e| e.to_string())?;
        let c = LineImplicit::chord(p1, p2).map_err(|e| e.to_string())?;
        let r = recover_lambda(&s.conic, &l1, &l2, &c, s.points[1])
            .map_err(|e| format!("conic {k} ({family:?}): {e}"))?;
        if !(r.lambda > 0.0 && r.lambda < 1.0) {
            return Err(format!("conic {k}: λ = {} outside (0, 1)", r.lambda));
        }
        (lo, hi) = (lo.min(r.lambda), hi.max(r.lambda));
        worst = worst.max(liming_expansion(&l1, &l2, &c, r.lambda).mismatch_up_to_scale(&s.conic));
    }
    if !(worst < 1e-8) {
        return Err(format!("reproduction mismatch {worst:e}"));
    }
    Ok(format!("max mismatch {worst:.1e}, λ in [{lo:.3}, {hi:.3}]"))
}

fn null_space_oracle() -> Outcome {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let rows: [[f64; 6]; 5] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let z =
            null_space_1d(&ConstraintSystem { rows }).map_err(|e| format!("system {k}: {e}"))?;
        worst = worst.max(scale_mismatch(
            &z.to_array(),
            &brute_force_null_vector(&rows),
        ));
    }
    if !(worst < 1e-8) {
        return Err(format!("null space mismatch {worst:e}"));
    }
    let fitted = fit_conic_two_tangents_one_point(
        &TangentConstraint::new(Point2::new(1.0, 0.0), GradientVec::new(1.0, 0.0))
            .map_err(|e| e.to_string())?,
        &TangentConstraint::new(Point2::new(0.0, 1.0), GradientVec::new(0.0, 1.0))
            .map_err(|e| e.to_string())?,
        Point2::new(-1.0, 0.0),
    )
    .map_err(|e| e.to_string())?;
    let circle = fitted.mismatch_up_to_scale(&ConicCoeffs::new(1.0, 0.0, 1.0, 0.0, 0.0, -1.0));
    if !(circle < 1e-10) {
        return Err(format!("circle fit mismatch {circle:e}"));
    }
    Ok(format!(
        "max mismatch {worst:.1e} over 1000 systems, circle fit {circle:.1e}"
    ))
}

fn central_difference(f: &impl Field, p: Point2, h: f64) -> Result<GradientVec, String> {
    let v = |x: f64, y: f64| f.value(Point2::new(x, y)).map_err(|e| e.to_string());
    Ok(GradientVec::new(
        (v(p.x + h, p.y)? - v(p.x - h, p.y)?) / (2.0 * h),
        (v(p.x, p.y + h)? - v(p.x, p.y - h)?) / (2.0 * h),
    ))
}

fn gradient_checks() -> Outcome {
    const H: f64 = 1e-5;
    let mut rng = rng(5);
    let (mut worst_patch, mut worst_conic, mut patches) = (0.0f64, 0.0f64, 0);
    while patches < 1000 {
        let s = random_conic(&mut rng, FAMILIES[patches % 3], 4);
        let form = [Form::Raw, Form::Normalized, Form::Faithful][patches % 3];
        let w = WeightTriple::new(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let patch =
            FourTangentSpec::new(s.tangents4(), s.points4(), w, form).map_err(|e| e.to_string())?;
        let p = Point2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if patch.as_ipatch().denominator(p).abs() < 0.1 {
            continue;
        }
        let g = patch.gradient(p).map_err(|e| e.to_string())?;
        let fd = central_difference(&patch, p, H)?;
        worst_patch = worst_patch.max((g - fd).norm());

        let q = s.conic;
        let fd = central_difference(&q, p, H)?;
        worst_conic = worst_conic.max((q.gradient(p) - fd).norm());
        patches += 1;
    }
    if !(worst_patch < 1e-6 && worst_conic < 1e-6) {
        return Err(format!(
            "patch error {worst_patch:e}, conic error {worst_conic:e}"
        ));
    }
    Ok(format!(
        "max |∇ − FD|: patch {worst_patch:.1e}, conic {worst_conic:.1e} (1000 each)"
    ))
}

fn radial_error(contours: &ContourSet) -> f64 {
    contours
        .vertices()
        .map(|p| (p.norm() - 1.0).abs())
        .fold(0.0, f64::max)
}

fn contour_accuracy() -> Outcome {
    let (tangents, points) = circle_tangents();
    let patch = FourTangentSpec::new(
        tangents,
        points,
        WeightTriple::new(2.0, 2.0, -2.0),
        Form::Normalized,
    )
    .map_err(|e| e.to_string())?;
    let bounds = Bounds::new(-2.0, -2.0, 2.0, 2.0).map_err(|e| e.to_string())?;
    let trace = |n: usize| -> Result<ContourSet, String> {
        Ok(trace_contours(
            &sample_grid(&patch, bounds, n).map_err(|e| e.to_string())?,
        ))
    };
    let coarse = trace(256)?;
    if coarse.polylines.len() != 1 || !coarse.polylines[0].closed {
        return Err(format!(
            "expected one closed polyline, got {}",
            coarse.polylines.len()
        ));
    }
    let e256 = radial_error(&coarse);
    if !(e256 < 0.05) {
        return Err(format!("radial error {e256:e} at N=256"));
    }
    let e512 = radial_error(&trace(512)?);
    let ratio = e512 / e256;
    let detail = format!("radial error {e256:.2e} (N=256), {e512:.2e} (N=512), ratio {ratio:.3}");
    if (0.4..=0.6).contains(&ratio) {
        Ok(detail)
    } else {
        Err(format!("{detail}; expected ratio 0.5 ± 20%"))
    }
}

fn closed_polylines(svg: &str) -> usize {
    svg.lines()
        .filter(|l| l.starts_with("<polyline") && l.contains(&format!("stroke=\"{CURVE_COLOUR}\"")))
        .filter(|l| {
            let pts = l
                .split("points=\"")
                .nth(1)
                .and_then(|r| r.split('"').next())
                .unwrap_or("");
            let v: Vec<&str> = pts.split_whitespace().collect();
            v.len() > 2 && v.first() == v.last()
        })
        .count()
}

fn cli_end_to_end() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scene = fixture("circle.scene");
    let scene = scene.to_str().unwrap();
    let mut renders = Vec::new();
    for name in ["a.svg", "b.svg"] {
        let out = dir.path().join(name);
        let o = tancurve(&["render", scene, "--out", out.to_str().unwrap()]);
        if !o.status.success() {
            return Err(format!(
                "render failed: {}",
                String::from_utf8_lossy(&o.stderr)
            ));
        }
        renders.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    if renders[0] != renders[1] {
        return Err("renders differ".into());
    }
    let svg = String::from_utf8(renders.swap_remove(0)).map_err(|e| e.to_string())?;
    let count = |colour: &str| {
        svg.lines()
            .filter(|l| l.starts_with("<line") && l.contains(&format!("stroke=\"{colour}\"")))
            .count()
    };
    let (blue, red, purple) = (
        count(TANGENT_COLOUR),
        count(SECANT_COLOUR),
        closed_polylines(&svg),
    );
    let curves = svg.matches("<polyline").count();
    if (blue, red, purple, curves) != (4, 2, 1, 1) {
        return Err(format!(
            "{blue} blue, {red} red, {purple} closed purple of {curves} polylines"
        ));
    }
    let o = tancurve(&["verify", scene]);
    let report = String::from_utf8_lossy(&o.stdout);
    if !(o.status.success() && report.contains("4/4 tangencies pass")) {
        return Err(format!("verify: {report}"));
    }
    Ok("byte-identical renders, 4 blue, 2 red, 1 closed purple; verify 4/4".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("circle reproduction", circle_reproduction),
        ("randomized theorem suite", randomized_theorem),
        ("lemma suite", lemma_suite),
        ("null-space oracle and circle fit", null_space_oracle),
        ("gradient finite differences", gradient_checks),
        ("contour accuracy", contour_accuracy),
        ("CLI end-to-end", cli_end_to_end),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
