//! Shared exact-geometry primitives: angles, intervals, vectors, central
//! projection onto the dial plane, five-point conic fitting, and the small
//! ratio inequalities (chord/arc, Ptolemy, mediant) everything else builds on.

mod angle;
mod conic;
mod projection;
mod vector;

pub use angle::{Angle, Interval};
pub use conic::conic_fit_residual;
pub use projection::central_projection;
pub use vector::{Point2, UnitVec3, Vec3};

use thiserror::Error;

/// Errors raised by the geometry primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("angle {value} rad outside required range ({lo}, {hi})")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("ordering violation: expected 0 < {0} < {1}")]
    OrderingViolation(f64, f64),
    #[error("mediant precondition violated: {0}")]
    MediantPrecondition(&'static str),
    #[error("direction on or below horizon: no finite shadow")]
    NoFiniteShadow,
    #[error("degenerate point configuration for conic fit")]
    DegenerateConic,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

/// Chord subtended by a central angle `theta` on the unit circle: crd θ = 2 sin(θ/2).
///
/// Requires 0 < θ < 2π.
pub fn chord_of_arc(theta: Angle) -> Result<f64, GeomError> {
    let t = theta.rad();
    if !(t > 0.0 && t < 2.0 * std::f64::consts::PI) {
        return Err(GeomError::OutOfRange {
            value: t,
            lo: 0.0,
            hi: 2.0 * std::f64::consts::PI,
        });
    }
    Ok(2.0 * (t / 2.0).sin())
}

/// The limit case of the lemma, already known to Ptolemy: sin x / x decreases
/// on (0, π/2], hence sin β / sin α ≤ β/α whenever 0 < α < β ≤ π/2.
///
/// Returns the truth of that inequality for the given pair (it always holds;
/// the function exists as a tested oracle for the rest of the crate).
pub fn ptolemy_check(alpha: Angle, beta: Angle) -> Result<bool, GeomError> {
    let (a, b) = (alpha.rad(), beta.rad());
    if !(a > 0.0 && a < b && b <= std::f64::consts::FRAC_PI_2) {
        return Err(GeomError::OrderingViolation(a, b));
    }
    Ok(b.sin() / a.sin() <= b / a)
}

/// Mediant-style inequality: if a/b < c/d with a > c > 0 and b > d > 0, then
/// (b+d)/(b−d) < (a+c)/(a−c).
///
/// Precondition violations are reported as errors, distinct from the
/// inequality itself failing (which would return `Ok(false)`).
pub fn mediant_check(a: f64, b: f64, c: f64, d: f64) -> Result<bool, GeomError> {
    if !(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0) {
        return Err(GeomError::MediantPrecondition("operands must be positive"));
    }
    if !(a > c) {
        return Err(GeomError::MediantPrecondition("requires a > c"));
    }
    if !(b > d) {
        return Err(GeomError::MediantPrecondition("requires b > d"));
    }
    if !(a / b < c / d) {
        return Err(GeomError::MediantPrecondition("requires a/b < c/d"));
    }
    Ok((b + d) / (b - d) < (a + c) / (a - c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn chord_diameter_and_hexagon() {
        assert_abs_diff_eq!(chord_of_arc(Angle::new(PI)).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            chord_of_arc(Angle::new(FRAC_PI_3)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn chord_twenty_degrees() {
        // 2 sin 10°
        let c = chord_of_arc(Angle::from_degrees(20.0)).unwrap();
        assert_abs_diff_eq!(c, 0.34729635533386066, epsilon = 1e-12);
    }

    #[test]
    fn chord_rejects_out_of_range() {
        assert!(chord_of_arc(Angle::new(0.0)).is_err());
        assert!(chord_of_arc(Angle::new(2.0 * PI)).is_err());
        assert!(chord_of_arc(Angle::new(-0.1)).is_err());
    }

    #[test]
    fn ptolemy_holds_on_spec_pairs() {
        assert!(ptolemy_check(Angle::from_degrees(30.0), Angle::from_degrees(60.0)).unwrap());
        assert!(ptolemy_check(Angle::from_degrees(45.0), Angle::from_degrees(90.0)).unwrap());
        // sides of the 30°/60° comparison: sin60/sin30 vs 2
        assert_abs_diff_eq!(
            (60f64).to_radians().sin() / (30f64).to_radians().sin(),
            1.7320508075688774,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ptolemy_limit_pair_tends_to_equality() {
        // (ε, 2ε): sin 2ε / sin ε → 2 = 2ε/ε
        let eps = 1e-6;
        assert!(ptolemy_check(Angle::new(eps), Angle::new(2.0 * eps)).unwrap());
        let ratio = (2.0 * eps).sin() / eps.sin();
        assert_abs_diff_eq!(ratio, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn ptolemy_rejects_bad_ordering() {
        assert!(ptolemy_check(Angle::new(1.0), Angle::new(0.5)).is_err());
        assert!(ptolemy_check(Angle::new(0.5), Angle::new(FRAC_PI_2 + 0.1)).is_err());
    }

    #[test]
    fn mediant_direct_arithmetic() {
        // (3,4,2,2): 6/2 = 3 < 5/1 = 5
        assert!(mediant_check(3.0, 4.0, 2.0, 2.0).unwrap());
        // (2,3,1,1): 4/2 = 2 < 3/1 = 3
        assert!(mediant_check(2.0, 3.0, 1.0, 1.0).unwrap());
    }

    #[test]
    fn mediant_rejects_preconditions_distinctly() {
        assert!(matches!(
            mediant_check(1.0, 3.0, 2.0, 1.0),
            Err(GeomError::MediantPrecondition(_))
        ));
        assert!(matches!(
            mediant_check(-1.0, 3.0, 2.0, 1.0),
            Err(GeomError::MediantPrecondition(_))
        ));
        // a/b >= c/d
        assert!(matches!(
            mediant_check(3.0, 2.0, 1.0, 1.0),
            Err(GeomError::MediantPrecondition(_))
        ));
    }
}
