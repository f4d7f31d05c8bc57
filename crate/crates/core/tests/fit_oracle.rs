mod common;

use common::{brute_force_null_vector, random_conic, rng, FAMILIES};
use rand::Rng;
use tangent_curves::fit::{
    build_constraint_system, fit_conic_two_tangents_one_point, null_space_1d, ConstraintSystem,
    TangentConstraint,
};
use tangent_curves::geom::{scale_mismatch, ConicCoeffs, GradientVec, Point2};
use tangent_curves::Error;

#[test]
fn null_space_matches_elimination_oracle() {
    let mut rng = rng(21);
    for _ in 0..300 {
        let rows: [[f64; 6]; 5] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let svd = null_space_1d(&ConstraintSystem { rows })
            .unwrap()
            .to_array();
        let oracle = brute_force_null_vector(&rows);
        assert!(scale_mismatch(&svd, &oracle) < 1e-8);
    }
}

#[test]
fn oracle_agrees_on_constraint_systems() {
    let mut rng = rng(22);
    for family in FAMILIES {
        for _ in 0..20 {
            let s = random_conic(&mut rng, family, 3);
            let t =
                |k: usize| TangentConstraint::new(s.points[k], s.tangents[k].gradient()).unwrap();
            let sys = build_constraint_system(&t(0), &t(1), s.points[2]).unwrap();
            let oracle = brute_force_null_vector(&sys.rows);
            assert!(
                scale_mismatch(&s.conic.to_array(), &oracle) < 1e-7,
                "{family:?}"
            );
        }
    }
}

#[test]
fn fit_recovers_random_conics() {
    let mut rng = rng(23);
    for family in FAMILIES {
        for _ in 0..30 {
            let s = random_conic(&mut rng, family, 3);
            let t =
                |k: usize| TangentConstraint::new(s.points[k], s.tangents[k].gradient()).unwrap();
            let fitted = fit_conic_two_tangents_one_point(&t(0), &t(2), s.points[1]).unwrap();
            assert!(fitted.mismatch_up_to_scale(&s.conic) < 1e-8, "{family:?}");
            assert!((fitted.norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn fit_is_invariant_under_translation() {
    let circle = ConicCoeffs::new(1.0, 0.0, 1.0, 0.0, 0.0, -1.0);
    for (dx, dy) in [(0.0, 0.0), (1e3, -1e3), (-5e4, 2e4)] {
        let shift = |x: f64, y: f64| Point2::new(x + dx, y + dy);
        let fitted = fit_conic_two_tangents_one_point(
            &TangentConstraint::new(shift(1.0, 0.0), GradientVec::new(1.0, 0.0)).unwrap(),
            &TangentConstraint::new(shift(0.0, 1.0), GradientVec::new(0.0, 1.0)).unwrap(),
            shift(-1.0, 0.0),
        )
        .unwrap();
        // translate back: x → x + dx
        let back = ConicCoeffs::new(
            fitted.a,
            fitted.b,
            fitted.c,
            fitted.d + 2.0 * fitted.a * dx + fitted.b * dy,
            fitted.e + fitted.b * dx + 2.0 * fitted.c * dy,
            fitted.eval(Point2::new(dx, dy)),
        );
        assert!(
            back.mismatch_up_to_scale(&circle) < 1e-6,
            "shift ({dx}, {dy})"
        );
    }
}

#[test]
fn degenerate_fits_fail() {
    let t = |x: f64, y: f64, gx: f64, gy: f64| {
        TangentConstraint::new(Point2::new(x, y), GradientVec::new(gx, gy)).unwrap()
    };
    assert!(matches!(
        fit_conic_two_tangents_one_point(
            &t(1.0, 0.0, 1.0, 0.0),
            &t(1.0, 0.0, 0.0, 1.0),
            Point2::new(0.0, 0.0)
        ),
        Err(Error::DegenerateInput(_))
    ));
    // three collinear points whose tangents lie along that line
    assert!(matches!(
        fit_conic_two_tangents_one_point(
            &t(0.0, 0.0, 0.0, 1.0),
            &t(1.0, 0.0, 0.0, 1.0),
            Point2::new(2.0, 0.0)
        ),
        Err(Error::RankDeficient { .. })
    ));
    assert!(TangentConstraint::new(Point2::new(0.0, 0.0), GradientVec::new(0.0, 0.0)).is_err());
}
