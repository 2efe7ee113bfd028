//! Horizontal-sundial hour lines and the deviation analysis that justifies
//! treating them as straight.
//!
//! The gnomon tip is the center of projection; the dial plane lies one
//! gnomon length below it. For a seasonal hour fraction c the sun's hour
//! angle at the hour's end is H = (y/2)(1−2c), where y is the diurnal arc of
//! the day's declination. Sweeping the declination across the solstice range
//! traces the hour line; the ratio SQ/OS that governs its straightness obeys
//! the monotonicity lemma through the substitution u = (y−π)/2.

use crate::geom::{central_projection, Angle, GeomError, Interval, Point2, UnitVec3, Vec3};
use crate::lemma::{HourFraction, LemmaError};
use crate::svg::SvgDoc;
use std::f64::consts::PI;
use thiserror::Error;

/// Historical unit convention forced by the three-finger gnomon arithmetic.
pub const BARLEYCORNS_PER_FINGER: f64 = 6.0;
/// The dial-plane ratio bound: all sampled deviation ratios must stay below it.
pub const RATIO_BOUND: f64 = 1.0 / 174.0;
/// Physical bound: three fifths of a barleycorn for an 18-barleycorn gnomon.
pub const BARLEYCORN_BOUND: f64 = 3.0 / 5.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SundialError {
    #[error("circumpolar at phi {phi_deg}°, delta {delta_deg}°: body never sets")]
    Circumpolar { phi_deg: f64, delta_deg: f64 },
    #[error("body never rises at phi {phi_deg}°, delta {delta_deg}°")]
    NeverRises { phi_deg: f64, delta_deg: f64 },
    #[error("SQ/OS is defined for c < 1/2; map c to 1−c (hour lines are symmetric about the meridian)")]
    MirrorFraction,
    #[error("diurnal arc must lie in (0, 2π), got {0} rad")]
    ArcOutOfRange(f64),
    #[error("sample count must be odd and at least {min}, got {got}")]
    BadSampleCount { min: usize, got: usize },
    #[error("invalid dial configuration: {0}")]
    BadConfig(&'static str),
    #[error("solstice chord is degenerate")]
    DegenerateChord,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Lemma(#[from] LemmaError),
}

/// Dial site and gnomon parameters.
#[derive(Debug, Clone, Copy)]
pub struct SundialConfig {
    pub latitude: Angle,
    pub obliquity: Angle,
    /// Gnomon length in barleycorns; the classical three fingers make 18.
    pub gnomon_barleycorns: f64,
    pub hour: HourFraction,
}

impl SundialConfig {
    /// φ and hour fraction with the default obliquity 23.5° and the
    /// three-finger gnomon.
    pub fn new(latitude: Angle, hour: HourFraction) -> Self {
        SundialConfig {
            latitude,
            obliquity: Angle::from_degrees(23.5),
            gnomon_barleycorns: 3.0 * BARLEYCORNS_PER_FINGER,
            hour,
        }
    }
}

/// Unit direction toward a body at declination δ and hour angle H in the
/// horizon frame (x east, y north, z up). H is zero on the meridian and
/// positive east of it.
pub fn sun_direction(phi: Angle, delta: Angle, hour_angle: Angle) -> UnitVec3 {
    let (sp, cp) = phi.rad().sin_cos();
    let (sd, cd) = delta.rad().sin_cos();
    let (sh, ch) = hour_angle.rad().sin_cos();
    UnitVec3::new(Vec3::new(
        cd * sh,
        cp * sd - sp * cd * ch,
        sp * sd + cp * cd * ch,
    ))
}

/// Diurnal arc y = 2·arccos(−tan φ tan δ), the central angle of the day's
/// path above the horizon. Rising-and-setting days only; circumpolar and
/// never-rising configurations are distinct errors.
pub fn diurnal_arc(phi: Angle, delta: Angle) -> Result<Angle, SundialError> {
    let t = phi.rad().tan() * delta.rad().tan();
    if t >= 1.0 {
        return Err(SundialError::Circumpolar {
            phi_deg: phi.deg(),
            delta_deg: delta.deg(),
        });
    }
    if t <= -1.0 {
        return Err(SundialError::NeverRises {
            phi_deg: phi.deg(),
            delta_deg: delta.deg(),
        });
    }
    Ok(Angle::new(2.0 * (-t).acos()))
}

/// The ratio SQ/OS = sin(((y−π)/2)(1−2c)) / sin((y−π)/2) that measures how
/// the hour-end direction swings with the diurnal arc y. Defined for
/// c < 1/2 (larger fractions mirror); at y = π the continuity value 1−2c.
///
/// The lemma makes this strictly increasing in the half-excess |y−π|/2, so
/// on a solstice-bounded range it stays inside [`sq_os_bracket`].
pub fn sq_os_ratio(y: Angle, c: HourFraction) -> Result<f64, SundialError> {
    if c.value() >= 0.5 {
        return Err(SundialError::MirrorFraction);
    }
    let y = y.rad();
    if !(y > 0.0 && y < 2.0 * PI) {
        return Err(SundialError::ArcOutOfRange(y));
    }
    let u = 0.5 * (y - PI);
    let s = 1.0 - 2.0 * c.value();
    if u.abs() < 1e-12 {
        return Ok(s);
    }
    Ok((u * s).sin() / u.sin())
}

/// The bracket [1−2c, sin(u_max(1−2c))/sin(u_max)] with u_max = (y_max−π)/2,
/// which contains SQ/OS for every diurnal arc between the solstices.
pub fn sq_os_bracket(y_max: Angle, c: HourFraction) -> Result<Interval, SundialError> {
    if c.value() >= 0.5 {
        return Err(SundialError::MirrorFraction);
    }
    let s = 1.0 - 2.0 * c.value();
    let u = 0.5 * (y_max.rad() - PI);
    Ok(Interval::new(s, (u * s).sin() / u.sin()))
}

/// One declination sample of an hour line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourSample {
    pub delta: Angle,
    /// Diurnal arc of that declination.
    pub y: Angle,
    /// Shadow-tip image for a unit gnomon.
    pub image: Point2,
}

/// Deviation of the hour line from the solstice chord.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    /// Worst sagitta over the samples, in barleycorns (unit-gnomon sagitta
    /// times the gnomon length).
    pub max_abs_barleycorns: f64,
    /// Worst TQ/IT over the samples: perpendicular distance to the chord
    /// against the distance from the foot to the equinox image's foot (the
    /// fixed pivot of the pencil of candidate straight lines).
    pub ratio: f64,
}

/// An hour line: images of the hour's end across the declination range,
/// ordered by δ with the equinox sample in the middle.
#[derive(Debug, Clone, PartialEq)]
pub struct HourLine {
    pub samples: Vec<HourSample>,
    /// Winter and summer solstice images.
    pub chord: (Point2, Point2),
    pub deviation: Deviation,
}

impl HourLine {
    /// The designated inflection sample at δ = 0.
    pub fn equinox(&self) -> &HourSample {
        &self.samples[(self.samples.len() - 1) / 2]
    }
}

fn deviation_of(samples: &[HourSample], gnomon: f64) -> Result<Deviation, SundialError> {
    let pw = samples[0].image;
    let ps = samples[samples.len() - 1].image;
    let len = pw.dist(ps);
    if len < 1e-12 {
        return Err(SundialError::DegenerateChord);
    }
    let ex = (ps.x - pw.x) / len;
    let ey = (ps.y - pw.y) / len;
    let ieq = samples[(samples.len() - 1) / 2].image;
    let t_i = (ieq.x - pw.x) * ex + (ieq.y - pw.y) * ey;
    let mut max_tq = 0.0f64;
    let mut ratio = 0.0f64;
    for s in samples {
        let dx = s.image.x - pw.x;
        let dy = s.image.y - pw.y;
        let t = dx * ex + dy * ey;
        let tq = (dx * ey - dy * ex).abs();
        max_tq = max_tq.max(tq);
        let it = (t - t_i).abs();
        if it > 1e-9 {
            ratio = ratio.max(tq / it);
        }
    }
    Ok(Deviation {
        max_abs_barleycorns: max_tq * gnomon,
        ratio,
    })
}

fn validate(config: &SundialConfig) -> Result<(), SundialError> {
    if !(config.latitude.rad().abs() < std::f64::consts::FRAC_PI_2) {
        return Err(SundialError::BadConfig("|latitude| must stay below 90°"));
    }
    if !(config.obliquity.rad() > 0.0 && config.obliquity.rad() < std::f64::consts::FRAC_PI_2) {
        return Err(SundialError::BadConfig("obliquity must lie in (0°, 90°)"));
    }
    if !(config.gnomon_barleycorns > 0.0) {
        return Err(SundialError::BadConfig("gnomon length must be positive"));
    }
    Ok(())
}

/// Computes the hour line on `n` declinations uniform across ±obliquity.
/// `n` must be odd (≥ 3) so the equinox sample is present exactly.
pub fn hour_line(config: &SundialConfig, n: usize) -> Result<HourLine, SundialError> {
    validate(config)?;
    if n < 3 || n.is_multiple_of(2) {
        return Err(SundialError::BadSampleCount { min: 3, got: n });
    }
    let eps_deg = config.obliquity.deg();
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let frac = 2.0 * (i as f64) / ((n - 1) as f64) - 1.0; // hits 0 exactly mid-grid
        let delta = Angle::from_degrees(eps_deg * frac);
        let y = diurnal_arc(config.latitude, delta)?;
        let h = Angle::new(0.5 * y.rad() * (1.0 - 2.0 * config.hour.value()));
        let image = central_projection(sun_direction(config.latitude, delta, h), 1.0)?;
        samples.push(HourSample { delta, y, image });
    }
    let chord = (samples[0].image, samples[n - 1].image);
    let deviation = deviation_of(&samples, config.gnomon_barleycorns)?;
    Ok(HourLine {
        samples,
        chord,
        deviation,
    })
}

/// Full deviation report with the verdict against the classical bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub ratio: f64,
    pub max_dev_barleycorns: f64,
    pub verdict: String,
}

/// Builds the hour line on `n ≥ 33` samples (odd) and compares its deviation
/// against the 1/174 ratio bound and the 3/5-barleycorn physical bound.
pub fn deviation_report(config: &SundialConfig, n: usize) -> Result<DeviationReport, SundialError> {
    if n < 33 {
        return Err(SundialError::BadSampleCount { min: 33, got: n });
    }
    let line = hour_line(config, n)?;
    let ratio = line.deviation.ratio;
    let max_dev = line.deviation.max_abs_barleycorns;
    let within = ratio < RATIO_BOUND && max_dev < BARLEYCORN_BOUND;
    let verdict = if within {
        format!(
            "straight for the senses: ratio {ratio:.6} < 1/174 and deviation {max_dev:.4} \
             barleycorns < 3/5"
        )
    } else {
        format!(
            "sensibly curved: ratio {ratio:.6} vs 1/174, deviation {max_dev:.4} barleycorns vs 3/5"
        )
    };
    Ok(DeviationReport {
        ratio,
        max_dev_barleycorns: max_dev,
        verdict,
    })
}

/// CSV of an hour line with the fixed header `delta_deg,y_deg,img_x,img_y`.
pub fn hour_line_csv(line: &HourLine) -> String {
    let mut out = String::from("delta_deg,y_deg,img_x,img_y\n");
    for s in &line.samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.delta.deg(),
            s.y.deg(),
            s.image.x,
            s.image.y
        ));
    }
    out
}

/// Image of a whole diurnal circle (fixed δ) sampled on `n` hour angles
/// strictly inside the above-horizon arc. These are the conic date curves.
pub fn diurnal_image(
    phi: Angle,
    delta: Angle,
    n: usize,
) -> Result<Vec<Point2>, SundialError> {
    let y = diurnal_arc(phi, delta)?;
    let h_max = 0.45 * y.rad();
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let h = -h_max + 2.0 * h_max * (i as f64) / ((n - 1) as f64);
        pts.push(central_projection(
            sun_direction(phi, delta, Angle::new(h)),
            1.0,
        )?);
    }
    Ok(pts)
}

/// SVG overlay of all eleven hour lines k = 1..11 together with the three
/// classic date curves (both solstices and the equinoctial line).
pub fn dial_svg(latitude: Angle, obliquity: Angle) -> Result<String, SundialError> {
    let mut doc = SvgDoc::new(-6.0, -1.0, 6.0, 5.0, 720.0);
    doc.line(0.0, -1.0, 0.0, 5.0, "#ccc"); // meridian
    doc.point(0.0, 0.0, "#000"); // gnomon foot
    for k in 1..12 {
        let cfg = SundialConfig {
            latitude,
            obliquity,
            gnomon_barleycorns: 3.0 * BARLEYCORNS_PER_FINGER,
            hour: HourFraction::twelfth(k)?,
        };
        let line = hour_line(&cfg, 33)?;
        doc.polyline(
            line.samples.iter().map(|s| (s.image.x, s.image.y)),
            "#3366cc",
        );
    }
    for (delta, color) in [
        (Angle::from_degrees(-obliquity.deg()), "#cc6633"),
        (Angle::from_degrees(0.0), "#66aa66"),
        (obliquity, "#cc6633"),
    ] {
        let pts = diurnal_image(latitude, delta, 121)?;
        doc.polyline(pts.iter().map(|p| (p.x, p.y)), color);
    }
    Ok(doc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn deg(d: f64) -> Angle {
        Angle::from_degrees(d)
    }

    fn baghdad(k: i32) -> SundialConfig {
        SundialConfig::new(deg(30.0), HourFraction::twelfth(k).unwrap())
    }

    #[test]
    fn equinox_arc_is_half_a_turn() {
        let y = diurnal_arc(deg(30.0), deg(0.0)).unwrap();
        assert_eq!(y.rad(), PI);
    }

    #[test]
    fn summer_solstice_arc_at_baghdad() {
        let y = diurnal_arc(deg(30.0), deg(23.5)).unwrap();
        assert_abs_diff_eq!(y.deg(), 209.07801166490606, epsilon = 1e-9);
        assert_abs_diff_eq!((y.deg() - 180.0) / 2.0, 14.539005832453, epsilon = 1e-9);
    }

    #[test]
    fn circumpolar_and_never_rising_are_distinct() {
        assert!(matches!(
            diurnal_arc(deg(70.0), deg(23.5)),
            Err(SundialError::Circumpolar { .. })
        ));
        assert!(matches!(
            diurnal_arc(deg(70.0), deg(-23.5)),
            Err(SundialError::NeverRises { .. })
        ));
    }

    #[test]
    fn sq_os_continuity_value_at_equinox() {
        let c = HourFraction::twelfth(2).unwrap();
        let r = sq_os_ratio(Angle::new(PI), c).unwrap();
        assert_abs_diff_eq!(r, 1.0 - 2.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn sq_os_spot_value_at_baghdad_summer() {
        let y = diurnal_arc(deg(30.0), deg(23.5)).unwrap();
        let c = HourFraction::twelfth(1).unwrap();
        let r = sq_os_ratio(y, c).unwrap();
        assert_abs_diff_eq!(r, 0.8360804786501418, epsilon = 1e-10);
        assert!(r >= 5.0 / 6.0);
    }

    #[test]
    fn sq_os_rejects_large_fractions() {
        let c = HourFraction::twelfth(7).unwrap();
        assert_eq!(
            sq_os_ratio(Angle::new(PI), c),
            Err(SundialError::MirrorFraction)
        );
    }

    #[test]
    fn sq_os_increases_with_arc_past_the_equinox() {
        // lemma consequence through u = (y−π)/2: strictly increasing in the
        // half-excess; the dependence is even in y−π
        let c = HourFraction::twelfth(1).unwrap();
        let mut prev = sq_os_ratio(Angle::new(PI), c).unwrap();
        for i in 1..=60 {
            let y = Angle::new(PI + 0.01 * f64::from(i));
            let r = sq_os_ratio(y, c).unwrap();
            assert!(r > prev, "not increasing at y = {}", y.rad());
            prev = r;
        }
        let r_plus = sq_os_ratio(Angle::new(PI + 0.4), c).unwrap();
        let r_minus = sq_os_ratio(Angle::new(PI - 0.4), c).unwrap();
        assert_abs_diff_eq!(r_plus, r_minus, epsilon = 1e-14);
    }

    #[test]
    fn noon_line_sits_on_the_meridian() {
        let line = hour_line(&baghdad(6), 9).unwrap();
        for s in &line.samples {
            assert_eq!(s.image.x, 0.0);
        }
        assert_eq!(line.deviation.ratio, 0.0);
    }

    #[test]
    fn first_hour_images_are_finite_and_ordered() {
        let line = hour_line(&baghdad(1), 7).unwrap();
        assert_eq!(line.samples.len(), 7);
        for w in line.samples.windows(2) {
            assert!(w[0].delta.rad() < w[1].delta.rad());
        }
        assert_eq!(line.equinox().delta.rad(), 0.0);
        assert_eq!(line.equinox().y.rad(), PI);
    }

    #[test]
    fn curvature_changes_sign_at_the_equinox_sample() {
        let line = hour_line(&baghdad(1), 33).unwrap();
        let pts: Vec<Point2> = line.samples.iter().map(|s| s.image).collect();
        let cross = |a: Point2, b: Point2, c: Point2| {
            (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x)
        };
        let mid = 16;
        let before = cross(pts[mid - 2], pts[mid - 1], pts[mid]);
        let after = cross(pts[mid], pts[mid + 1], pts[mid + 2]);
        assert!(
            before * after < 0.0,
            "no inflection: before={before} after={after}"
        );
    }

    #[test]
    fn mirror_fractions_mirror_the_line() {
        let a = hour_line(&baghdad(2), 11).unwrap();
        let b = hour_line(&baghdad(10), 11).unwrap();
        for (s, t) in a.samples.iter().zip(&b.samples) {
            assert_abs_diff_eq!(s.image.x, -t.image.x, epsilon = 1e-12);
            assert_abs_diff_eq!(s.image.y, t.image.y, epsilon = 1e-12);
        }
    }

    #[test]
    fn deviation_report_meets_the_classical_bounds() {
        let r = deviation_report(&baghdad(1), 33).unwrap();
        assert_abs_diff_eq!(r.ratio, 0.00496981, epsilon = 1e-7);
        assert_abs_diff_eq!(r.max_dev_barleycorns, 18.0 * 0.00508602, epsilon = 1e-6);
        assert!(r.ratio < RATIO_BOUND);
        assert!(r.max_dev_barleycorns < BARLEYCORN_BOUND);
        assert!(r.verdict.contains("straight for the senses"));
    }

    #[test]
    fn config_invariants_are_enforced() {
        let mut cfg = baghdad(1);
        cfg.gnomon_barleycorns = 0.0;
        assert!(matches!(hour_line(&cfg, 9), Err(SundialError::BadConfig(_))));
        let mut cfg = baghdad(1);
        cfg.latitude = deg(90.0);
        assert!(matches!(hour_line(&cfg, 9), Err(SundialError::BadConfig(_))));
        let mut cfg = baghdad(1);
        cfg.obliquity = deg(0.0);
        assert!(matches!(hour_line(&cfg, 9), Err(SundialError::BadConfig(_))));
    }

    #[test]
    fn deviation_needs_enough_samples() {
        assert!(matches!(
            deviation_report(&baghdad(1), 31),
            Err(SundialError::BadSampleCount { min: 33, got: 31 })
        ));
    }

    #[test]
    fn csv_header_is_fixed() {
        let line = hour_line(&baghdad(3), 5).unwrap();
        let csv = hour_line_csv(&line);
        assert!(csv.starts_with("delta_deg,y_deg,img_x,img_y\n"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn dial_svg_renders_all_lines() {
        let svg = dial_svg(deg(30.0), deg(23.5)).unwrap();
        // 11 hour lines + 3 date curves
        assert_eq!(svg.matches("<polyline").count(), 14);
    }
}
