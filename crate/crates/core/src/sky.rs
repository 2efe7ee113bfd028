//! Observer-frame trajectories in declination / hour-angle coordinates.
//!
//! A body moves uniformly along a circular zero-latitude ecliptic while the
//! sky turns at the sidereal rate; because the diurnal motion dominates every
//! proper motion, the apparent trajectory always progresses westward and the
//! observer-frame hour angle H (zero on the meridian, positive east) is a
//! valid parameter. Finite increment ratios Δδ/ΔH then drive the transit
//! analysis: on a southward arc the altitude maximum falls strictly before
//! meridian transit, by an east offset of a few arcminutes for the Sun and
//! up to about a degree for the Moon.

use crate::geom::Angle;
use crate::search::{bisect_root, golden_max};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkyError {
    #[error("diurnal motion must dominate: omega = {omega} must exceed lambda_dot = {lambda_dot} (deg/day)")]
    DominanceViolated { lambda_dot: f64, omega: f64 },
    #[error("invalid range: {0}")]
    BadRange(&'static str),
    #[error("hour angle not strictly decreasing at sample {0}")]
    NotWestward(usize),
    #[error("window touches a declination extremum at sample {index} (t = {t} days)")]
    ExtremumInWindow { index: usize, t: f64 },
    #[error("no admissible increment found above 1e-9 rad for m = {m}")]
    NoSolution { m: f64 },
    #[error("point at the zenith leaves the almucantar construction degenerate")]
    ZenithPoint,
}

/// Mean solar ecliptic rate, degrees/day.
pub const SUN_RATE_DEG_DAY: f64 = 0.9856;
/// Mean lunar ecliptic rate, degrees/day.
pub const MOON_RATE_DEG_DAY: f64 = 13.176;
/// Sidereal turning of the sky, degrees/day.
pub const SIDEREAL_RATE_DEG_DAY: f64 = 360.9856;

/// Obliquity transform: right ascension and declination of a point of the
/// zero-latitude ecliptic at longitude λ. The right ascension keeps the
/// quadrant of λ (principal value in [0, 2π)).
pub fn equatorial_of_ecliptic(lambda: Angle, eps: Angle) -> (Angle, Angle) {
    let (sl, cl) = lambda.rad().sin_cos();
    let e = eps.rad();
    let alpha = (e.cos() * sl).atan2(cl).rem_euclid(2.0 * std::f64::consts::PI);
    let delta = (e.sin() * sl).asin();
    (Angle::new(alpha), Angle::new(delta))
}

/// Inverse of [`equatorial_of_ecliptic`] for round-trip checks.
pub fn ecliptic_of_equatorial(alpha: Angle, eps: Angle) -> Angle {
    let (sa, ca) = alpha.rad().sin_cos();
    Angle::new(sa.atan2(eps.rad().cos() * ca).rem_euclid(2.0 * std::f64::consts::PI))
}

/// Altitude above the horizon from latitude, declination and hour angle:
/// a = arcsin(sin φ sin δ + cos φ cos δ cos H).
pub fn altitude(phi: Angle, delta: Angle, hour_angle: Angle) -> Angle {
    let (sp, cp) = phi.rad().sin_cos();
    let (sd, cd) = delta.rad().sin_cos();
    Angle::new((sp * sd + cp * cd * hour_angle.rad().cos()).asin())
}

/// Circular zero-latitude body model. Time is in days from the model epoch;
/// the epoch is aligned so that the body transits (H = 0) at t = 0.
#[derive(Debug, Clone, Copy)]
pub struct BodyModel {
    pub lambda_dot_deg_day: f64,
    pub omega_deg_day: f64,
    pub obliquity: Angle,
    pub lambda0: Angle,
    /// Sidereal angle at t = 0, radians; fixed by the transit alignment.
    theta0: f64,
}

impl BodyModel {
    pub fn new(
        lambda_dot_deg_day: f64,
        omega_deg_day: f64,
        obliquity: Angle,
        lambda0: Angle,
    ) -> Result<Self, SkyError> {
        if !(lambda_dot_deg_day >= 0.0 && omega_deg_day > lambda_dot_deg_day) {
            return Err(SkyError::DominanceViolated {
                lambda_dot: lambda_dot_deg_day,
                omega: omega_deg_day,
            });
        }
        let mut m = BodyModel {
            lambda_dot_deg_day,
            omega_deg_day,
            obliquity,
            lambda0,
            theta0: 0.0,
        };
        m.theta0 = m.alpha_unwrapped(0.0);
        Ok(m)
    }

    /// Mean Sun starting at ecliptic longitude λ0.
    pub fn sun(lambda0: Angle) -> Self {
        Self::new(
            SUN_RATE_DEG_DAY,
            SIDEREAL_RATE_DEG_DAY,
            Angle::from_degrees(23.44),
            lambda0,
        )
        .expect("solar rates are dominated")
    }

    /// Mean Moon (zero ecliptic latitude) starting at longitude λ0.
    pub fn moon(lambda0: Angle) -> Self {
        Self::new(
            MOON_RATE_DEG_DAY,
            SIDEREAL_RATE_DEG_DAY,
            Angle::from_degrees(23.44),
            lambda0,
        )
        .expect("lunar rates are dominated")
    }

    /// A fixed star: no proper motion, declination of the given ecliptic point.
    pub fn fixed_star(lambda0: Angle) -> Self {
        Self::new(0.0, SIDEREAL_RATE_DEG_DAY, Angle::from_degrees(23.44), lambda0)
            .expect("zero rate is dominated")
    }

    /// The same body `days` later, re-aligned so its transit is again at t = 0.
    pub fn advanced(&self, days: f64) -> Self {
        Self::new(
            self.lambda_dot_deg_day,
            self.omega_deg_day,
            self.obliquity,
            Angle::new(self.lambda0.rad() + (self.lambda_dot_deg_day * days).to_radians()),
        )
        .expect("rates unchanged")
    }

    fn lambda(&self, t: f64) -> f64 {
        self.lambda0.rad() + (self.lambda_dot_deg_day * t).to_radians()
    }

    /// Right ascension unwrapped to follow λ continuously (|α − λ| < π/2
    /// for any obliquity below 45°).
    fn alpha_unwrapped(&self, t: f64) -> f64 {
        let lam = self.lambda(t);
        let (sl, cl) = lam.sin_cos();
        let alpha_p = (self.obliquity.rad().cos() * sl).atan2(cl);
        let lam_p = sl.atan2(cl);
        let mut diff = alpha_p - lam_p;
        if diff > std::f64::consts::PI {
            diff -= 2.0 * std::f64::consts::PI;
        }
        if diff < -std::f64::consts::PI {
            diff += 2.0 * std::f64::consts::PI;
        }
        lam + diff
    }

    /// Declination and (unwrapped) hour angle at time t.
    pub fn state(&self, t: f64) -> (Angle, Angle) {
        let delta = (self.obliquity.rad().sin() * self.lambda(t).sin()).asin();
        let theta = self.theta0 + (self.omega_deg_day * t).to_radians();
        let h = self.alpha_unwrapped(t) - theta; // positive east, decreasing in t
        (Angle::new(delta), Angle::new(h))
    }
}

/// One emitted sample of an observer-frame trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub delta: Angle,
    pub hour_angle: Angle,
    pub altitude: Angle,
}

/// Uniform trajectory on [t0, t1] with n ≥ 2 samples. The hour angle must
/// come out strictly decreasing (westward progress); a violation means the
/// dominance invariant was broken.
pub fn trajectory(
    model: &BodyModel,
    phi: Angle,
    t0: f64,
    t1: f64,
    n: usize,
) -> Result<Vec<TrajectorySample>, SkyError> {
    if n < 2 {
        return Err(SkyError::BadRange("need at least two samples"));
    }
    if !(t1 > t0) {
        return Err(SkyError::BadRange("t1 must exceed t0"));
    }
    let mut out: Vec<TrajectorySample> = Vec::with_capacity(n);
    for k in 0..n {
        let t = t0 + (t1 - t0) * (k as f64) / ((n - 1) as f64);
        let (delta, h) = model.state(t);
        let a = altitude(phi, delta, h);
        if k > 0 && out[k - 1].hour_angle.rad() <= h.rad() {
            return Err(SkyError::NotWestward(k));
        }
        out.push(TrajectorySample {
            t,
            delta,
            hour_angle: h,
            altitude: a,
        });
    }
    Ok(out)
}

/// Certified lower bound m of the increment ratio |Δδ|/|ΔH| over consecutive
/// samples (both increments are central angles of their circles). The window
/// must avoid declination extrema: a vanishing or sign-changing Δδ names the
/// offending sample.
pub fn increment_ratio_bound(samples: &[TrajectorySample]) -> Result<f64, SkyError> {
    if samples.len() < 2 {
        return Err(SkyError::BadRange("need at least two samples"));
    }
    let mut m = f64::INFINITY;
    let mut sign = 0.0f64;
    for (k, w) in samples.windows(2).enumerate() {
        let dd = w[1].delta.rad() - w[0].delta.rad();
        let dh = w[1].hour_angle.rad() - w[0].hour_angle.rad();
        if dd == 0.0 || (sign != 0.0 && dd.signum() != sign) {
            return Err(SkyError::ExtremumInWindow {
                index: k + 1,
                t: w[1].t,
            });
        }
        sign = dd.signum();
        m = m.min((dd / dh).abs());
    }
    Ok(m)
}

/// Which way the declination runs across the transit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcSide {
    /// δ decreasing: the maximum falls east of (before) the transit.
    Southward,
    /// δ increasing: the symmetric statement, maximum after transit on the
    /// west side.
    Northward,
}

/// Transit-versus-maximum comparison for one day's arc.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop28Report {
    pub side: ArcSide,
    pub t_transit: f64,
    pub t_max: f64,
    pub a_transit: Angle,
    pub a_max: Angle,
    /// Declination separation δ(t_max) − δ(t_transit) (≥ 0 on a southward arc).
    pub dec_gap: Angle,
    /// Hour angle of the altitude maximum: how far east of the meridian the
    /// body peaks. This is the angular size of the phenomenon.
    pub h_offset: Angle,
    /// Certified increment-ratio bound near the transit, when the window
    /// avoids declination extrema.
    pub m: Option<f64>,
}

impl Prop28Report {
    pub fn text(&self) -> String {
        format!(
            "arc: {:?}\n\
             transit  t = {:+.9} d, altitude = {:.6}°\n\
             maximum  t = {:+.9} d, altitude = {:.6}°\n\
             transit minus maximum time = {:+.6} d\n\
             east offset of maximum H = {:.6}° ({:.4}′)\n\
             declination gap = {:.9}° ({:.6}′)\n\
             increment ratio bound m = {}",
            self.side,
            self.t_transit,
            self.a_transit.deg(),
            self.t_max,
            self.a_max.deg(),
            self.t_transit - self.t_max,
            self.h_offset.deg(),
            self.h_offset.deg() * 60.0,
            self.dec_gap.deg(),
            self.dec_gap.deg() * 60.0,
            self.m.map_or("n/a".to_string(), |m| format!("{m:.6e}")),
        )
    }
}

/// Golden-section tolerance for the altitude maximum, in days.
pub const T_MAX_TOLERANCE_DAYS: f64 = 1e-9;

/// Locates the meridian transit and the altitude maximum for the model
/// advanced to the given day, and reports the comparison. On a southward
/// arc the maximum comes strictly first; on a northward arc the report is
/// flagged [`ArcSide::Northward`] (maximum expected after transit, west).
pub fn prop28_report(model: &BodyModel, phi: Angle, day: f64) -> Result<Prop28Report, SkyError> {
    let m = model.advanced(day);
    let h_of = |t: f64| m.state(t).1.rad();
    let alt_of = |t: f64| {
        let (d, h) = m.state(t);
        altitude(phi, d, h).rad()
    };
    // transit alignment puts H(0) = 0; bracket it anyway
    let t_transit = bisect_root(h_of, -0.3, 0.3, 1e-12);
    let t_max = golden_max(alt_of, t_transit - 0.25, t_transit + 0.25, T_MAX_TOLERANCE_DAYS);

    let ddot = m.state(t_transit + 1e-4).0.rad() - m.state(t_transit - 1e-4).0.rad();
    let side = if ddot <= 0.0 {
        ArcSide::Southward
    } else {
        ArcSide::Northward
    };

    // increment bound on a one-hour window at the transit; unavailable when
    // the window rides a declination extremum (e.g. a fixed star)
    let window = trajectory(&m, phi, t_transit - 1.0 / 48.0, t_transit + 1.0 / 48.0, 61)?;
    let m_bound = increment_ratio_bound(&window).ok();

    let (d_max, h_max) = m.state(t_max);
    let (d_tr, _) = m.state(t_transit);
    Ok(Prop28Report {
        side,
        t_transit,
        t_max,
        a_transit: Angle::new(alt_of(t_transit)),
        a_max: Angle::new(alt_of(t_max)),
        dec_gap: Angle::new(d_max.rad() - d_tr.rad()),
        h_offset: h_max,
        m: m_bound,
    })
}

/// Maximum east offset of the Moon's altitude maximum over one tropical
/// month, scanning transits day by day.
pub fn moon_monthly_max(phi: Angle, step_days: f64) -> Result<Prop28Report, SkyError> {
    if !(step_days > 0.0) {
        return Err(SkyError::BadRange("step must be positive"));
    }
    let moon = BodyModel::moon(Angle::new(0.0));
    let mut best: Option<Prop28Report> = None;
    let mut day = 0.0;
    while day <= 27.32 {
        let r = prop28_report(&moon, phi, day)?;
        if best
            .as_ref()
            .is_none_or(|b| r.h_offset.rad().abs() > b.h_offset.rad().abs())
        {
            best = Some(r);
        }
        day += step_days;
    }
    Ok(best.expect("scan is non-empty"))
}

/// The auxiliary point of the transit proof: an increment Δ above the
/// transit declination together with the hour angle H_H at which the
/// almucantar of the transit altitude meets the parallel δ_D + Δ, chosen by
/// halving from 1° so that Δ/H_H < m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructedPoint {
    pub delta_inc: Angle,
    pub h_h: Angle,
}

/// Halving search for the constructed point. Fails below the 1e−9 rad
/// resolution floor, reporting the bound m it tried to undercut.
pub fn construct_point(
    phi: Angle,
    delta_d: Angle,
    altitude_d: Angle,
    m: f64,
) -> Result<ConstructedPoint, SkyError> {
    if !(m > 0.0) {
        return Err(SkyError::BadRange("m must be positive"));
    }
    if altitude_d.rad() >= std::f64::consts::FRAC_PI_2 - 1e-12 {
        return Err(SkyError::ZenithPoint);
    }
    let (sp, cp) = phi.rad().sin_cos();
    let sin_a = altitude_d.rad().sin();
    let mut inc = (1.0f64).to_radians();
    while inc > 1e-9 {
        let di = delta_d.rad() + inc;
        if di < std::f64::consts::FRAC_PI_2 {
            let ch = (sin_a - sp * di.sin()) / (cp * di.cos());
            if ch.abs() < 1.0 {
                let h_h = ch.acos();
                if inc / h_h < m {
                    return Ok(ConstructedPoint {
                        delta_inc: Angle::new(inc),
                        h_h: Angle::new(h_h),
                    });
                }
            }
        }
        inc *= 0.5;
    }
    Err(SkyError::NoSolution { m })
}

/// A detected setting event during a horizon-grazing scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetEvent {
    pub phi: Angle,
    pub t: f64,
    /// Hour angle at the event, reduced to [0, 2π).
    pub hour_angle_mod: Angle,
    /// True when the event azimuth lies east of the meridian plane.
    pub east: bool,
}

/// Outcome of the east-of-meridian setting search.
#[derive(Debug, Clone, PartialEq)]
pub struct EastSetOutcome {
    /// Setting events examined across the whole grid.
    pub set_events: usize,
    /// First event found on the east side, if any. The search records the
    /// outcome; no answer is asserted either way.
    pub first_east: Option<SetEvent>,
}

/// Scans latitudes for setting events (altitude crossing zero downward) and
/// reports the first, if any, occurring east of the meridian.
pub fn east_set_search(
    model: &BodyModel,
    phi_lo: Angle,
    phi_hi: Angle,
    phi_steps: usize,
    days: f64,
    samples_per_day: usize,
) -> Result<EastSetOutcome, SkyError> {
    if !(phi_hi.rad() > phi_lo.rad()) || phi_steps < 2 {
        return Err(SkyError::BadRange("need an increasing phi grid"));
    }
    let n = ((days * samples_per_day as f64) as usize).max(2);
    let mut set_events = 0;
    let mut first_east = None;
    for k in 0..phi_steps {
        let phi = Angle::new(
            phi_lo.rad() + (phi_hi.rad() - phi_lo.rad()) * (k as f64) / ((phi_steps - 1) as f64),
        );
        let tr = trajectory(model, phi, 0.0, days, n)?;
        for w in tr.windows(2) {
            if w[0].altitude.rad() > 0.0 && w[1].altitude.rad() <= 0.0 {
                set_events += 1;
                let h_mod = w[1]
                    .hour_angle
                    .rad()
                    .rem_euclid(2.0 * std::f64::consts::PI);
                let east = h_mod.sin() > 0.0;
                if east && first_east.is_none() {
                    first_east = Some(SetEvent {
                        phi,
                        t: w[1].t,
                        hour_angle_mod: Angle::new(h_mod),
                        east,
                    });
                }
            }
        }
    }
    Ok(EastSetOutcome {
        set_events,
        first_east,
    })
}

/// CSV of a trajectory with the fixed header `t_days,delta_deg,H_deg,alt_deg`.
pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    let mut out = String::from("t_days,delta_deg,H_deg,alt_deg\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.t,
            s.delta.deg(),
            s.hour_angle.deg(),
            s.altitude.deg()
        ));
    }
    out
}
