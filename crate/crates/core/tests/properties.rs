//! Property tests of the library invariants, with shrinking via proptest.

use proptest::prelude::*;
use sinratio::dioptre::{trace_ray, RefractionModel};
use sinratio::geom::{central_projection, mediant_check, Angle, UnitVec3, Vec3};
use sinratio::lemma::{
    dyadic_step_check, f_ratio, global_transcript, lemma1_bracket, lemma2_check, HourFraction,
};
use sinratio::sundial::{sq_os_bracket, sq_os_ratio};
use std::f64::consts::FRAC_PI_2;

proptest! {
    #[test]
    fn lemma1_bracket_contains_the_angle_ratio(
        beta in 1e-3..(FRAC_PI_2 - 1e-6),
        frac in 1e-6..(1.0 - 1e-6),
    ) {
        let alpha = beta * frac;
        prop_assume!(alpha > 1e-9);
        let iv = lemma1_bracket(Angle::new(alpha), Angle::new(beta)).unwrap();
        prop_assert!(iv.contains(beta / alpha));
    }

    #[test]
    fn global_transcript_passes_under_preconditions(
        y in 1e-3..(FRAC_PI_2 - 1e-9),
        xfrac in 1e-4..(1.0 - 1e-9),
        c in 1e-3..(1.0 - 1e-3),
    ) {
        let x = y * xfrac;
        prop_assume!(x > 1e-6);
        let t = global_transcript(Angle::new(x), Angle::new(y), HourFraction::new(c).unwrap())
            .unwrap();
        for s in t.steps() {
            prop_assert!(s.pass, "step {} failed at x={x} y={y} c={c}", s.name);
        }
    }

    #[test]
    fn f_is_locally_decreasing_on_random_pairs(
        x in 1e-4..(FRAC_PI_2 - 1e-9),
        gap in 1e-6..0.5f64,
        c in 1e-3..(1.0 - 1e-3),
    ) {
        let y = (x + gap).min(FRAC_PI_2);
        prop_assume!(y > x + 1e-9);
        let cf = HourFraction::new(c).unwrap();
        prop_assert!(
            f_ratio(Angle::new(x), cf).unwrap() > f_ratio(Angle::new(y), cf).unwrap()
        );
    }

    #[test]
    fn lemma2_residual_stays_at_machine_scale(x in 1e-6..FRAC_PI_2) {
        prop_assert!(lemma2_check(Angle::new(x)).unwrap() < 1e-12);
    }

    #[test]
    fn dyadic_halving_always_passes(
        y in 1e-4..FRAC_PI_2,
        c in 1e-3..(1.0 - 1e-3),
    ) {
        let t = dyadic_step_check(Angle::new(y), HourFraction::new(c).unwrap()).unwrap();
        prop_assert!(t.overall());
    }

    #[test]
    fn mediant_conclusion_follows_from_preconditions(
        a in 0.01..10.0f64,
        c in 0.005..5.0f64,
        d in 0.01..10.0f64,
        bump_b in 0.01..10.0f64,
    ) {
        // force a > c and b > d with a/b < c/d
        let a = a + c;
        let b = a * d / c + bump_b; // b > ad/c makes a/b < c/d
        prop_assume!(b > d);
        prop_assert!(mediant_check(a, b, c, d).unwrap());
    }

    #[test]
    fn shadow_projection_matches_parametric_solve(
        ex in -0.95..0.95f64,
        ny in -0.95..0.95f64,
        up in 0.05..1.0f64,
        g in 0.1..4.0f64,
    ) {
        let v = UnitVec3::new(Vec3::new(ex, ny, up));
        let p = central_projection(v, g).unwrap();
        let d = -v.as_vec();
        let t = -g / d.z;
        prop_assert!((p.x - t * d.x).abs() < 1e-12);
        prop_assert!((p.y - t * d.y).abs() < 1e-12);
    }

    #[test]
    fn hour_ratio_stays_in_the_solstice_bracket(
        u in 1e-4..0.45f64,
        k in 1i32..6,
    ) {
        // y between the equinox and a solstice with half-excess u_max = 0.45
        let c = HourFraction::twelfth(k).unwrap();
        let y_max = Angle::new(std::f64::consts::PI + 0.9);
        let y = Angle::new(std::f64::consts::PI + 2.0 * u);
        let bracket = sq_os_bracket(y_max, c).unwrap();
        prop_assert!(bracket.contains(sq_os_ratio(y, c).unwrap()));
    }

    #[test]
    fn axis_crossings_decrease_with_incidence(
        index in 1.1..1.9f64,
        i1 in 0.02..1.0f64,
        step in 0.01..0.3f64,
    ) {
        let m = RefractionModel::snell(index).unwrap();
        let cap = m.validity_cap().unwrap().rad();
        let i2 = i1 + step;
        prop_assume!(i2 < cap * 0.999);
        let c1 = trace_ray(&m, Angle::new(i1)).unwrap().crossing_x;
        let c2 = trace_ray(&m, Angle::new(i2)).unwrap().crossing_x;
        prop_assert!(c2 < c1);
    }

    #[test]
    fn traced_exit_points_match_closed_forms(
        index in 1.1..1.9f64,
        ifrac in 0.02..0.98f64,
    ) {
        let m = RefractionModel::snell(index).unwrap();
        // the validity cap passes 90° below n = √2; incidence stays physical
        let i = m.validity_cap().unwrap().rad().min(FRAC_PI_2 - 1e-6) * ifrac;
        let tr = trace_ray(&m, Angle::new(i)).unwrap();
        let d = tr.deviation.rad();
        prop_assert!((tr.exit.x - (i - 2.0 * d).cos()).abs() < 1e-10);
        prop_assert!((tr.exit.y - (i - 2.0 * d).sin()).abs() < 1e-10);
        let closed = (i - 2.0 * d).cos() + (i - 2.0 * d).sin() / (2.0 * d).tan();
        prop_assert!((tr.crossing_x - closed).abs() < 1e-10);
    }
}
