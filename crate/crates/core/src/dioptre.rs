//! Double refraction of an axis-parallel beam by a glass sphere.
//!
//! The meridian plane carries the whole construction: unit sphere centered at
//! the origin, beam arriving along +x. Axis coordinates count from the
//! center, so the exit pole C sits at 1, V at 2 and S (midpoint of CV) at
//! 1.5. A ray of incidence i deviates d = i − r at each surface; its exit
//! point is (cos(i−2d), sin(i−2d)) and it crosses the axis at
//! cos(i−2d) + sin(i−2d)/tan(2d), strictly decreasing in i, so no two
//! parallel rays meet the axis at the same point, and the burning focus is
//! an extended region within a quarter diameter behind the sphere.

use crate::geom::{Angle, Interval, Vec3};
use crate::search::bisect_root;
use crate::svg::SvgDoc;
use crate::transcript::{ProofTranscript, Step};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DioptreError {
    #[error("refractive index must lie in (1, 2) for the burning-sphere regime, got {0}")]
    InvalidIndex(f64),
    #[error("bad refraction table: {0}")]
    BadTable(&'static str),
    #[error("incidence {0}° outside the table domain (no extrapolation)")]
    OutOfTable(f64),
    #[error("incidence {0}° outside [0, 90°)")]
    OutsideDomain(f64),
    #[error("incidence {0}°: i − 2d ≤ 0, crossing inside or behind the sphere")]
    CrossingNotForward(f64),
    #[error("invalid ordering: requires d2 > d1 (got d1 = {d1_deg}°, d2 = {d2_deg}°)")]
    InvalidOrdering { d1_deg: f64, d2_deg: f64 },
    #[error("model does not cover the high beam [50°, cap]")]
    HighBeamUnavailable,
    #[error("the 40° ray crosses at {0}, beyond S = 1.5: the classical beam split does not localize a focus for this index")]
    BeamNotLocalized(f64),
}

/// Refraction law: either Snell with index n, or a tabulated (i, r) law with
/// linear interpolation in i and no extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub enum RefractionModel {
    Snell { index: f64 },
    Table { rows: Vec<(Angle, Angle)> },
}

impl RefractionModel {
    pub fn snell(index: f64) -> Result<Self, DioptreError> {
        if !(index > 1.0 && index < 2.0) {
            return Err(DioptreError::InvalidIndex(index));
        }
        Ok(RefractionModel::Snell { index })
    }

    /// Tabulated law; rows must be strictly increasing in both columns with
    /// r < i throughout.
    pub fn table(rows: Vec<(Angle, Angle)>) -> Result<Self, DioptreError> {
        if rows.is_empty() {
            return Err(DioptreError::BadTable("empty table"));
        }
        for (i, r) in &rows {
            if !(r.rad() < i.rad() && i.rad() > 0.0 && i.rad() < FRAC_PI_2) {
                return Err(DioptreError::BadTable("rows need 0 < r < i < 90°"));
            }
        }
        for w in rows.windows(2) {
            if !(w[0].0.rad() < w[1].0.rad() && w[0].1.rad() < w[1].1.rad()) {
                return Err(DioptreError::BadTable(
                    "rows must increase strictly in both columns",
                ));
            }
        }
        Ok(RefractionModel::Table { rows })
    }

    /// The single row known from the classical measurement: i = 40°, r = 25°.
    pub fn classical_row() -> Self {
        RefractionModel::table(vec![(Angle::from_degrees(40.0), Angle::from_degrees(25.0))])
            .expect("static row is valid")
    }

    /// Refraction angle r(i).
    pub fn refraction(&self, i: Angle) -> Result<Angle, DioptreError> {
        let iv = i.rad();
        if !(0.0..FRAC_PI_2).contains(&iv) {
            return Err(DioptreError::OutsideDomain(i.deg()));
        }
        match self {
            RefractionModel::Snell { index } => Ok(Angle::new((iv.sin() / index).asin())),
            RefractionModel::Table { rows } => {
                let lo = rows.first().expect("non-empty");
                let hi = rows.last().expect("non-empty");
                if iv < lo.0.rad() - 1e-12 || iv > hi.0.rad() + 1e-12 {
                    return Err(DioptreError::OutOfTable(i.deg()));
                }
                if rows.len() == 1 {
                    return Ok(lo.1);
                }
                let k = rows
                    .windows(2)
                    .position(|w| iv <= w[1].0.rad())
                    .unwrap_or(rows.len() - 2);
                let (i0, r0) = (rows[k].0.rad(), rows[k].1.rad());
                let (i1, r1) = (rows[k + 1].0.rad(), rows[k + 1].1.rad());
                let t = (iv - i0) / (i1 - i0);
                Ok(Angle::new(r0 + t * (r1 - r0)))
            }
        }
    }

    /// Deviation d(i) = i − r(i), nonnegative and increasing in i.
    pub fn deviation(&self, i: Angle) -> Result<Angle, DioptreError> {
        Ok(Angle::new(i.rad() - self.refraction(i)?.rad()))
    }

    /// Upper incidence of the validity domain i − 2d > 0. Closed form for
    /// Snell: i = 2 arccos(n/2); tables are bounded by their last row.
    pub fn validity_cap(&self) -> Option<Angle> {
        match self {
            RefractionModel::Snell { index } => Some(Angle::new(2.0 * (index / 2.0).acos())),
            RefractionModel::Table { .. } => None,
        }
    }
}

/// Paraxial axis crossing n/(2(n−1)), the i → 0 limit.
pub fn paraxial_crossing(index: f64) -> f64 {
    index / (2.0 * (index - 1.0))
}

/// One doubly refracted ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayTrace {
    pub incidence: Angle,
    pub deviation: Angle,
    /// Entry point on the unit sphere (meridian plane, z = 0).
    pub entry: Vec3,
    /// Exit point; equals (cos(i−2d), sin(i−2d), 0) to 1e−10.
    pub exit: Vec3,
    /// Axis crossing measured from the sphere center (pole C = 1, V = 2).
    pub crossing_x: f64,
}

fn rotate_cw(v: (f64, f64), angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (v.0 * c + v.1 * s, -v.0 * s + v.1 * c)
}

/// Vector-traces one ray through the sphere: entry by line/circle
/// intersection, internal chord by the refracted direction, exit by the
/// second intersection, crossing by line/axis intersection.
///
/// Valid for 0 < i with i − 2d > 0; beyond that the crossing falls inside or
/// behind the sphere and the ray is rejected rather than traced.
pub fn trace_ray(model: &RefractionModel, i: Angle) -> Result<RayTrace, DioptreError> {
    let iv = i.rad();
    if !(iv > 0.0 && iv < FRAC_PI_2) {
        return Err(DioptreError::OutsideDomain(i.deg()));
    }
    let r = model.refraction(i)?.rad();
    let d = iv - r;
    if iv - 2.0 * d <= 0.0 {
        return Err(DioptreError::CrossingNotForward(i.deg()));
    }

    // entry at impact height sin i, left hemisphere
    let h = iv.sin();
    let entry = (-(1.0 - h * h).sqrt(), h);
    // bend toward the axis by i − r at entry
    let dir_in = rotate_cw((1.0, 0.0), d);
    // second circle intersection along the chord
    let s = -2.0 * (entry.0 * dir_in.0 + entry.1 * dir_in.1);
    let exit = (entry.0 + s * dir_in.0, entry.1 + s * dir_in.1);
    // bend again by d on the way out
    let dir_out = rotate_cw(dir_in, d);
    // meet the axis
    let t = -exit.1 / dir_out.1;
    let crossing_x = exit.0 + t * dir_out.0;

    debug_assert!((exit.0 - (iv - 2.0 * d).cos()).abs() < 1e-10);
    debug_assert!((exit.1 - (iv - 2.0 * d).sin()).abs() < 1e-10);

    Ok(RayTrace {
        incidence: i,
        deviation: Angle::new(d),
        entry: Vec3::new(entry.0, entry.1, 0.0),
        exit: Vec3::new(exit.0, exit.1, 0.0),
        crossing_x,
    })
}

/// Checks the classical refraction laws on a grid, one transcript step per
/// law: r and d increase, i/d decreases, i − 2d stays below 2d, and (for
/// Snell) i − 2d changes sign exactly at 2 arccos(n/2). Grids with fewer
/// than two points pass the monotonicity steps vacuously.
pub fn laws_check(model: &RefractionModel, grid: &[Angle]) -> Result<ProofTranscript, DioptreError> {
    let mut rs = Vec::with_capacity(grid.len());
    let mut ds = Vec::with_capacity(grid.len());
    for &i in grid {
        rs.push(model.refraction(i)?.rad());
        ds.push(model.deviation(i)?.rad());
    }
    let mut t = ProofTranscript::new();

    let min_dr = grid
        .windows(2)
        .zip(rs.windows(2))
        .map(|(_, w)| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let min_dd = ds
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    // i/d is indeterminate at i = 0 (its limit is n/(n−1) for Snell);
    // the monotonicity check runs on the positive incidences
    let ratios: Vec<f64> = grid
        .iter()
        .zip(&ds)
        .filter(|(i, _)| i.rad() > 0.0)
        .map(|(i, d)| i.rad() / d)
        .collect();
    let max_ratio_step = ratios
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);

    if grid.len() < 2 {
        t.push(Step::less_eq("r increasing (vacuous)", 0.0, 0.0));
        t.push(Step::less_eq("d increasing (vacuous)", 0.0, 0.0));
        t.push(Step::less_eq("i/d decreasing (vacuous)", 0.0, 0.0));
    } else {
        t.push(Step::strict_less("r increasing on grid", 0.0, min_dr));
        t.push(Step::strict_less("d increasing on grid", 0.0, min_dd));
        t.push(Step::strict_less("i/d decreasing on grid", max_ratio_step, 0.0));
    }

    let max_excess = grid
        .iter()
        .zip(&ds)
        .filter(|(i, _)| i.rad() > 0.0)
        .map(|(i, d)| i.rad() - 4.0 * d)
        .fold(f64::NEG_INFINITY, f64::max);
    t.push(Step::strict_less("i - 2d < 2d throughout", max_excess, 0.0));

    if let RefractionModel::Snell { index } = model {
        let cap = 2.0 * (index / 2.0).acos();
        if cap < FRAC_PI_2 {
            // locate the sign change of i − 2d numerically and compare with
            // the closed form
            let g = |i: f64| i - 2.0 * (i - (i.sin() / index).asin());
            let found = bisect_root(g, 1e-6, FRAC_PI_2 - 1e-9, 1e-12);
            t.push(Step::equal(
                "sign change of i-2d at 2 arccos(n/2) (deg)",
                found.to_degrees(),
                cap.to_degrees(),
                1e-6,
            ));
        } else {
            // below n = √2 the boundary passes 90°: i − 2d > 0 everywhere
            let min_fwd = grid
                .iter()
                .zip(&ds)
                .filter(|(i, _)| i.rad() > 0.0)
                .map(|(i, d)| i.rad() - 2.0 * d)
                .fold(f64::INFINITY, f64::min);
            t.push(Step::strict_less("i - 2d > 0 up to grazing", 0.0, min_fwd));
        }
    }
    Ok(t)
}

/// Scans the grid for a violation of strict decrease of the axis crossing.
/// `None` means no two parallel rays of the grid can meet the axis at one
/// point (adjacent crossings always move inward).
pub fn no_convergence_check(
    model: &RefractionModel,
    grid: &[Angle],
) -> Result<Option<(Angle, Angle)>, DioptreError> {
    let mut prev: Option<(Angle, f64)> = None;
    for &i in grid {
        let tr = trace_ray(model, i)?;
        if let Some((pi, px)) = prev {
            if tr.crossing_x >= px {
                return Ok(Some((pi, i)));
            }
        }
        prev = Some((i, tr.crossing_x));
    }
    Ok(None)
}

/// The reductio chain against a common axis crossing for incidences
/// i1 < i2: law (d) orders the deflection/deviation ratios, the mediant
/// inequality transfers the order to the sum/difference quotients, and the
/// lemma lifts it to the sine ratios that contradict the assumed crossing.
pub fn prop3_transcript(
    i1: Angle,
    i2: Angle,
    model: &RefractionModel,
) -> Result<ProofTranscript, DioptreError> {
    let d1 = model.deviation(i1)?.rad();
    let d2 = model.deviation(i2)?.rad();
    if !(d2 > d1) {
        return Err(DioptreError::InvalidOrdering {
            d1_deg: d1.to_degrees(),
            d2_deg: d2.to_degrees(),
        });
    }
    let (a, b) = (i2.rad() - 2.0 * d2, 2.0 * d2);
    let (c, dd) = (i1.rad() - 2.0 * d1, 2.0 * d1);
    if a <= 0.0 {
        return Err(DioptreError::CrossingNotForward(i2.deg()));
    }
    if c <= 0.0 {
        return Err(DioptreError::CrossingNotForward(i1.deg()));
    }

    let mut t = ProofTranscript::new();
    t.push(Step::strict_less(
        "(i2-2d2)/(2d2) < (i1-2d1)/(2d1)",
        a / b,
        c / dd,
    ));
    t.push(Step::strict_less(
        "mediant: (2d2+2d1)/(2d2-2d1) < (sum)/(difference)",
        (b + dd) / (b - dd),
        (a + c) / (a - c),
    ));
    t.push(Step::strict_less(
        "sin(2d2+2d1)/sin(2d2-2d1) < sin(sum)/sin(difference)",
        (b + dd).sin() / (b - dd).sin(),
        (a + c).sin() / (a - c).sin(),
    ));
    Ok(t)
}

/// Beam accounting for the two entry annuli and where their exits cross the
/// axis. The high beam (i ≥ 50°) is capped at the validity boundary; models
/// that cannot reach 50° report no high-beam data.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamReport {
    /// π(sin² i_cap − sin² 50°), when the model covers the high beam.
    pub area_hi: Option<f64>,
    /// π sin² 40°.
    pub area_lo: f64,
    /// |sin² 40° − cos² 50°|: the full high annulus up to grazing equals the
    /// low disc exactly.
    pub equal_area_residual: f64,
    pub crossings_hi: Option<Interval>,
    /// [crossing(40°), 1.5]: the low beam stays between N and S.
    pub crossings_lo: Interval,
    pub focus_verdict: String,
}

/// Fraction of the validity cap used as the traced edge of the high beam.
const HIGH_BEAM_GUARD: f64 = 1.0 - 1e-9;

pub fn beam_report(model: &RefractionModel) -> Result<BeamReport, DioptreError> {
    let deg = Angle::from_degrees;
    let n_low = trace_ray(model, deg(40.0))?.crossing_x;
    if n_low >= 1.5 {
        return Err(DioptreError::BeamNotLocalized(n_low));
    }
    let crossings_lo = Interval::new(n_low, 1.5);

    let s40 = (40f64).to_radians().sin();
    let c50 = (50f64).to_radians().cos();
    let area_lo = std::f64::consts::PI * s40 * s40;
    let equal_area_residual = (s40 * s40 - c50 * c50).abs();

    let (area_hi, crossings_hi) = match model.validity_cap() {
        Some(cap) => {
            // below n = √2 the cap passes 90° and grazing bounds the beam
            let edge = Angle::new((cap.rad() * HIGH_BEAM_GUARD).min(FRAC_PI_2 - 1e-9));
            let hi_inner = trace_ray(model, deg(50.0))?.crossing_x;
            let hi_outer = trace_ray(model, edge)?.crossing_x;
            let s_cap = edge.rad().sin();
            let s50 = (50f64).to_radians().sin();
            (
                Some(std::f64::consts::PI * (s_cap * s_cap - s50 * s50)),
                Some(Interval::new(hi_outer, hi_inner)),
            )
        }
        None => (None, None),
    };

    let hi_text = match &crossings_hi {
        Some(iv) => format!("high beam crosses within [{:.5}, {:.5}] ⊂ [1, crossing(50°)]", iv.lo(), iv.hi()),
        None => "high beam not covered by this model".to_string(),
    };
    let focus_verdict = format!(
        "low beam crosses within [N, S] = [{:.5}, 1.5]; {}; all crossings lie within a \
         quarter diameter beyond the sphere's surface",
        n_low, hi_text
    );

    Ok(BeamReport {
        area_hi,
        area_lo,
        equal_area_residual,
        crossings_hi,
        crossings_lo,
        focus_verdict,
    })
}

/// CSV of a trace sweep with the fixed header `i_deg,d_deg,crossing_x`.
pub fn trace_csv(model: &RefractionModel, grid: &[Angle]) -> Result<String, DioptreError> {
    let mut out = String::from("i_deg,d_deg,crossing_x\n");
    for &i in grid {
        let tr = trace_ray(model, i)?;
        out.push_str(&format!(
            "{},{},{}\n",
            i.deg(),
            tr.deviation.deg(),
            tr.crossing_x
        ));
    }
    Ok(out)
}

/// Meridian-plane ray diagram: the sphere, the axis, and for each incidence
/// the incident segment, internal chord and exit segment to the axis.
pub fn rays_svg(model: &RefractionModel, incidences: &[Angle]) -> Result<String, DioptreError> {
    let mut doc = SvgDoc::new(-2.4, -1.25, 2.4, 1.25, 760.0);
    doc.circle(0.0, 0.0, 1.0, "none", "#888");
    doc.line(-2.4, 0.0, 2.4, 0.0, "#888");
    for &i in incidences {
        let tr = trace_ray(model, i)?;
        let h = i.rad().sin();
        doc.line(-2.3, h, tr.entry.x, tr.entry.y, "#cc8833");
        doc.line(tr.entry.x, tr.entry.y, tr.exit.x, tr.exit.y, "#3366cc");
        doc.line(tr.exit.x, tr.exit.y, tr.crossing_x, 0.0, "#cc3333");
        doc.point(tr.crossing_x, 0.0, "#cc3333");
    }
    // C, S and V marks
    for (x, label) in [(1.0, "C"), (1.5, "S"), (2.0, "V")] {
        doc.point(x, 0.0, "#000");
        doc.text(x + 0.02, 0.05, label);
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

    #[test]
    fn snell_deviation_spot_values() {
        let m = RefractionModel::snell(1.5).unwrap();
        let r = m.refraction(deg(40.0)).unwrap();
        assert_abs_diff_eq!(r.deg(), 25.373993939179407, epsilon = 1e-9);
        let d = m.deviation(deg(40.0)).unwrap();
        assert_abs_diff_eq!(d.deg(), 14.626006060820592, epsilon = 1e-9);
        assert_eq!(m.deviation(deg(0.0)).unwrap().rad(), 0.0);
    }

    #[test]
    fn classical_table_hits_fifteen_degrees() {
        let m = RefractionModel::classical_row();
        assert_abs_diff_eq!(m.deviation(deg(40.0)).unwrap().deg(), 15.0, epsilon = 1e-12);
        assert!(matches!(
            m.deviation(deg(35.0)),
            Err(DioptreError::OutOfTable(_))
        ));
    }

    #[test]
    fn table_interpolates_between_rows() {
        let m = RefractionModel::table(vec![
            (deg(30.0), deg(20.0)),
            (deg(50.0), deg(30.0)),
        ])
        .unwrap();
        assert_abs_diff_eq!(m.refraction(deg(40.0)).unwrap().deg(), 25.0, epsilon = 1e-12);
    }

    #[test]
    fn table_constructor_validates() {
        assert!(RefractionModel::table(vec![]).is_err());
        assert!(RefractionModel::table(vec![(deg(30.0), deg(35.0))]).is_err());
        assert!(RefractionModel::table(vec![
            (deg(40.0), deg(25.0)),
            (deg(30.0), deg(20.0)),
        ])
        .is_err());
    }

    #[test]
    fn snell_index_must_be_physical() {
        assert!(RefractionModel::snell(1.0).is_err());
        assert!(RefractionModel::snell(2.0).is_err());
    }

    #[test]
    fn classical_crossing_matches_the_closed_form() {
        let m = RefractionModel::classical_row();
        let tr = trace_ray(&m, deg(40.0)).unwrap();
        let expected = (10f64).to_radians().cos() + 3f64.sqrt() * (10f64).to_radians().sin();
        assert_abs_diff_eq!(tr.crossing_x, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(tr.crossing_x, 1.2855752193730785, epsilon = 1e-12);
        assert!(tr.crossing_x < 1.5);
    }

    #[test]
    fn vector_trace_agrees_with_closed_forms() {
        let m = RefractionModel::snell(1.5).unwrap();
        for i_deg in [5.0, 20.0, 40.0, 60.0, 75.0, 82.0] {
            let tr = trace_ray(&m, deg(i_deg)).unwrap();
            let (iv, d) = (tr.incidence.rad(), tr.deviation.rad());
            assert_abs_diff_eq!(tr.exit.x, (iv - 2.0 * d).cos(), epsilon = 1e-10);
            assert_abs_diff_eq!(tr.exit.y, (iv - 2.0 * d).sin(), epsilon = 1e-10);
            let closed = (iv - 2.0 * d).cos() + (iv - 2.0 * d).sin() / (2.0 * d).tan();
            assert_abs_diff_eq!(tr.crossing_x, closed, epsilon = 1e-10);
            assert!(tr.crossing_x > 1.0 && tr.crossing_x < 2.0);
            // entry and exit stay on the sphere
            assert_abs_diff_eq!(tr.entry.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(tr.exit.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn paraxial_limit() {
        let m = RefractionModel::snell(1.5).unwrap();
        let tr = trace_ray(&m, deg(0.1)).unwrap();
        assert_abs_diff_eq!(tr.crossing_x, paraxial_crossing(1.5), epsilon = 1e-4);
        assert_abs_diff_eq!(paraxial_crossing(1.5), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn beyond_validity_is_rejected_with_the_incidence() {
        let m = RefractionModel::snell(1.5).unwrap();
        let e = trace_ray(&m, deg(84.0));
        assert!(matches!(e, Err(DioptreError::CrossingNotForward(i)) if (i - 84.0).abs() < 1e-9));
    }

    #[test]
    fn crossing_strictly_decreases() {
        let m = RefractionModel::snell(1.5).unwrap();
        let tr40 = trace_ray(&m, deg(40.0)).unwrap();
        let tr50 = trace_ray(&m, deg(50.0)).unwrap();
        assert_abs_diff_eq!(tr40.crossing_x, 1.315430542353171, epsilon = 1e-10);
        assert_abs_diff_eq!(tr50.crossing_x, 1.2284213333512377, epsilon = 1e-10);
        let grid: Vec<Angle> = (2..=164).map(|k| deg(0.5 * f64::from(k))).collect();
        assert_eq!(no_convergence_check(&m, &grid).unwrap(), None);
    }

    #[test]
    fn laws_hold_for_snell_glass() {
        let m = RefractionModel::snell(1.5).unwrap();
        let grid: Vec<Angle> = (1..=82).map(|k| deg(f64::from(k))).collect();
        let t = laws_check(&m, &grid).unwrap();
        assert!(t.overall(), "failure: {:?}", t.first_failure());
        let boundary = t
            .step("sign change of i-2d at 2 arccos(n/2) (deg)")
            .unwrap();
        assert_abs_diff_eq!(boundary.rhs, 82.81924421854173, epsilon = 1e-9);
        assert_abs_diff_eq!(boundary.lhs, boundary.rhs, epsilon = 1e-5);
    }

    #[test]
    fn laws_are_vacuous_on_a_single_row() {
        let m = RefractionModel::classical_row();
        let t = laws_check(&m, &[deg(40.0)]).unwrap();
        assert!(t.overall());
    }

    #[test]
    fn ratio_i_over_d_decreases() {
        let m = RefractionModel::snell(1.5).unwrap();
        let d10 = m.deviation(deg(10.0)).unwrap().deg();
        let d80 = m.deviation(deg(80.0)).unwrap().deg();
        assert_abs_diff_eq!(10.0 / d10, 2.9830951809938036, epsilon = 1e-9);
        assert_abs_diff_eq!(80.0 / d80, 2.0531989243893327, epsilon = 1e-9);
    }

    #[test]
    fn weak_index_laws_have_no_interior_boundary() {
        // between n = 4/3 and n = √2 every law holds and the forward
        // condition survives up to grazing
        let m = RefractionModel::snell(1.38).unwrap();
        let grid: Vec<Angle> = (0..=89).map(|k| deg(f64::from(k))).collect();
        let t = laws_check(&m, &grid).unwrap();
        assert!(t.overall(), "failure: {:?}", t.first_failure());
        assert!(t.step("i - 2d > 0 up to grazing").is_some());
        assert!(t
            .step("sign change of i-2d at 2 arccos(n/2) (deg)")
            .is_none());
    }

    #[test]
    fn soft_index_violates_the_four_deviations_law() {
        // below n = 4/3 the inequality i − 2d < 2d fails at small incidence
        let m = RefractionModel::snell(1.3).unwrap();
        let grid: Vec<Angle> = (1..=30).map(|k| deg(f64::from(k))).collect();
        let t = laws_check(&m, &grid).unwrap();
        assert!(!t.step("i - 2d < 2d throughout").unwrap().pass);
    }

    #[test]
    fn weak_index_beam_is_not_localized() {
        let m = RefractionModel::snell(1.2).unwrap();
        assert!(matches!(
            beam_report(&m),
            Err(DioptreError::BeamNotLocalized(_))
        ));
    }

    #[test]
    fn extended_table_has_no_common_crossing() {
        // a smooth tabulated law with rows every 10° (configuration data,
        // not a measured table)
        let rows = [
            (10.0, 6.5),
            (20.0, 13.0),
            (30.0, 19.5),
            (40.0, 25.0),
            (50.0, 30.0),
            (60.0, 34.5),
            (70.0, 38.5),
        ];
        let m = RefractionModel::table(
            rows.iter().map(|&(i, r)| (deg(i), deg(r))).collect(),
        )
        .unwrap();
        let grid: Vec<Angle> = (10..=70).map(|k| deg(f64::from(k))).collect();
        assert_eq!(no_convergence_check(&m, &grid).unwrap(), None);
    }

    #[test]
    fn single_point_grid_is_vacuously_monotone() {
        let m = RefractionModel::classical_row();
        assert_eq!(no_convergence_check(&m, &[deg(40.0)]).unwrap(), None);
    }

    #[test]
    fn prop3_chains_pass_for_close_pairs() {
        let m = RefractionModel::snell(1.5).unwrap();
        for (i1, i2) in [(30.0, 40.0), (40.0, 50.0)] {
            let t = prop3_transcript(deg(i1), deg(i2), &m).unwrap();
            assert!(t.overall(), "({i1},{i2}): {:?}", t.first_failure());
            assert_eq!(t.steps().len(), 3);
        }
    }

    #[test]
    fn prop3_rejects_equal_incidences() {
        let m = RefractionModel::snell(1.5).unwrap();
        assert!(matches!(
            prop3_transcript(deg(40.0), deg(40.0), &m),
            Err(DioptreError::InvalidOrdering { .. })
        ));
    }

    #[test]
    fn beam_report_localizes_the_focus() {
        let m = RefractionModel::snell(1.5).unwrap();
        let b = beam_report(&m).unwrap();
        assert!(b.equal_area_residual < 1e-15);
        assert_abs_diff_eq!(b.crossings_lo.lo(), 1.315430542353171, epsilon = 1e-10);
        assert_abs_diff_eq!(b.crossings_lo.hi(), 1.5, epsilon = 1e-15);
        let hi = b.crossings_hi.unwrap();
        assert!(hi.lo() >= 1.0 && hi.hi() <= trace_ray(&m, deg(50.0)).unwrap().crossing_x);
        assert!(b.focus_verdict.contains("quarter diameter"));
    }

    #[test]
    fn beam_report_on_the_single_row_table() {
        let b = beam_report(&RefractionModel::classical_row()).unwrap();
        assert_abs_diff_eq!(b.crossings_lo.lo(), 1.2855752193730785, epsilon = 1e-12);
        assert!(b.crossings_hi.is_none() && b.area_hi.is_none());
    }

    #[test]
    fn csv_and_svg_outputs() {
        let m = RefractionModel::snell(1.5).unwrap();
        let grid = [deg(20.0), deg(40.0), deg(60.0)];
        let csv = trace_csv(&m, &grid).unwrap();
        assert!(csv.starts_with("i_deg,d_deg,crossing_x\n"));
        assert_eq!(csv.lines().count(), 4);
        let svg = rays_svg(&m, &grid).unwrap();
        assert!(svg.contains("<circle") && svg.contains(">V</text>"));
    }
}
