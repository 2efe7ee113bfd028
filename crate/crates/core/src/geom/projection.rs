use super::{GeomError, Point2, UnitVec3};

/// Central projection of a sky direction onto the horizontal dial plane,
/// taking the gnomon tip as the center of projection.
///
/// `v` is the unit direction toward the light source in the horizon frame
/// (x east, y north, z up); the ray of the shadow leaves the gnomon tip at
/// the origin with direction −v and meets the plane z = −g. The returned
/// point carries the in-plane coordinates, which scale linearly with the
/// gnomon length `g`.
///
/// Directions on or below the horizon cast no finite shadow and are rejected.
pub fn central_projection(v: UnitVec3, g: f64) -> Result<Point2, GeomError> {
    assert!(g > 0.0, "gnomon length must be positive");
    let v = v.as_vec();
    if v.z <= 0.0 {
        return Err(GeomError::NoFiniteShadow);
    }
    // line O + t(−v) meets z = −g at t = g / v.z
    let t = g / v.z;
    Ok(Point2::new(-t * v.x, -t * v.y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zenith_shadow_is_under_the_gnomon() {
        let p = central_projection(UnitVec3::new(Vec3::new(0.0, 0.0, 1.0)), 1.0).unwrap();
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn south_sun_at_45_casts_unit_shadow_north() {
        // isoceles right triangle: altitude 45°, azimuth due south
        let s = (45f64).to_radians();
        let v = UnitVec3::new(Vec3::new(0.0, -s.cos(), s.sin()));
        let p = central_projection(v, 1.0).unwrap();
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn horizon_direction_has_no_shadow() {
        let v = UnitVec3::new(Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(central_projection(v, 1.0), Err(GeomError::NoFiniteShadow));
        let below = UnitVec3::new(Vec3::new(0.3, 0.2, -0.5));
        assert_eq!(
            central_projection(below, 1.0),
            Err(GeomError::NoFiniteShadow)
        );
    }

    #[test]
    fn scales_linearly_with_gnomon_length() {
        let v = UnitVec3::new(Vec3::new(0.2, -0.3, 0.8));
        let p1 = central_projection(v, 1.0).unwrap();
        let p18 = central_projection(v, 18.0).unwrap();
        assert_abs_diff_eq!(p18.x, 18.0 * p1.x, epsilon = 1e-12);
        assert_abs_diff_eq!(p18.y, 18.0 * p1.y, epsilon = 1e-12);
    }
}
