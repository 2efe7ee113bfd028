//! The monotonicity lemma itself: f(x) = sin x / sin(cx) strictly decreases
//! on (0, π/2] for every hour fraction c in (0, 1).
//!
//! This module carries the lemma's executable forms: direct grid scans, the
//! two auxiliary lemmas (the bracket for β/α and the closed form at c = 1/2),
//! the dyadic halving step, the global inequality chain that proves the lemma
//! without any local argument, and finite chain certificates stitched from
//! local-decrease neighborhoods.

use crate::geom::{Angle, Interval};
use crate::search::bisect_predicate_sup;
use crate::transcript::{ProofTranscript, Step};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LemmaError {
    #[error("hour fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
    #[error("hour index must satisfy 0 < k < 12, got {0}")]
    InvalidHourIndex(i32),
    #[error("argument {0} rad outside required domain {1}")]
    DomainViolation(f64, &'static str),
    #[error("grid not strictly increasing at index {0}")]
    GridNotSorted(usize),
    #[error("singular denominator: {0}")]
    Singular(&'static str),
    #[error("eta provider returned {eta} at y = {y} rad")]
    EtaNotPositive { y: f64, eta: f64 },
    #[error("chain exceeded {0} steps")]
    ChainTooLong(usize),
    #[error(transparent)]
    Figure(#[from] crate::figure::FigureError),
}

/// Fraction of the diurnal arc marking the end of a seasonal hour,
/// c in (0, 1); the k-th hour of the day is c = k/12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourFraction(f64);

impl HourFraction {
    pub fn new(c: f64) -> Result<Self, LemmaError> {
        if c.is_finite() && c > 0.0 && c < 1.0 {
            Ok(HourFraction(c))
        } else {
            Err(LemmaError::InvalidFraction(c))
        }
    }

    /// End of the k-th seasonal hour, c = k/12 with 0 < k < 12.
    pub fn twelfth(k: i32) -> Result<Self, LemmaError> {
        if k > 0 && k < 12 {
            Ok(HourFraction(f64::from(k) / 12.0))
        } else {
            Err(LemmaError::InvalidHourIndex(k))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Mirror fraction 1 − c (the same hour counted from the other end of
    /// the day).
    pub fn mirror(self) -> Self {
        HourFraction(1.0 - self.0)
    }
}

fn check_domain(x: f64, hi_inclusive: f64, what: &'static str) -> Result<(), LemmaError> {
    if x > 0.0 && x <= hi_inclusive {
        Ok(())
    } else {
        Err(LemmaError::DomainViolation(x, what))
    }
}

/// f(x) = sin x / sin(cx) for 0 < x ≤ π/2. Always > 1 on the domain.
pub fn f_ratio(x: Angle, c: HourFraction) -> Result<f64, LemmaError> {
    let x = x.rad();
    check_domain(x, FRAC_PI_2, "(0, pi/2]")?;
    Ok(x.sin() / (c.value() * x).sin())
}

/// Scans a strictly increasing grid in (0, π/2] and returns the first
/// adjacent pair violating strict decrease of f (i.e. f(x₁) ≤ f(x₂)), or
/// `None` when the scan finds no counterexample.
pub fn monotonicity_scan(
    c: HourFraction,
    grid: &[Angle],
) -> Result<Option<(Angle, Angle)>, LemmaError> {
    for (i, a) in grid.iter().enumerate() {
        check_domain(a.rad(), FRAC_PI_2, "(0, pi/2]")?;
        if i > 0 && grid[i - 1].rad() >= a.rad() {
            return Err(LemmaError::GridNotSorted(i));
        }
    }
    for w in grid.windows(2) {
        let (x1, x2) = (w[0], w[1]);
        if f_ratio(x1, c)? <= f_ratio(x2, c)? {
            return Ok(Some((x1, x2)));
        }
    }
    Ok(None)
}

/// Upper end of the bracket for β/α: (sin v + sin u)/(sin v − sin u) with
/// v = (α+β)/2, u = (β−α)/2. Shared with the figure construction, which may
/// sit at β = π/2 exactly.
pub(crate) fn bracket_upper(alpha: f64, beta: f64) -> f64 {
    let v = 0.5 * (alpha + beta);
    let u = 0.5 * (beta - alpha);
    (v.sin() + u.sin()) / (v.sin() - u.sin())
}

/// First auxiliary lemma: for 0 < α < β < π/2 the ratio β/α is bracketed by
/// [sin β / sin α, (sin v + sin u)/(sin v − sin u)] with v = (α+β)/2 and
/// u = (β−α)/2 (the positive half-difference).
pub fn lemma1_bracket(alpha: Angle, beta: Angle) -> Result<Interval, LemmaError> {
    let (a, b) = (alpha.rad(), beta.rad());
    if !(a > 0.0 && a < b && b < FRAC_PI_2) {
        return Err(LemmaError::DomainViolation(a, "0 < alpha < beta < pi/2"));
    }
    let lo = b.sin() / a.sin();
    let hi = bracket_upper(a, b);
    debug_assert!(lo <= b / a && b / a <= hi);
    Ok(Interval::new(lo, hi))
}

/// Second auxiliary lemma: at c = 1/2 the ratio collapses to the closed form
/// f(x, 1/2) = 2 cos(x/2). Returns the absolute residual, which must stay
/// below 1e−12 on the whole domain.
pub fn lemma2_check(x: Angle) -> Result<f64, LemmaError> {
    let half = HourFraction::new(0.5).expect("1/2 is a valid fraction");
    let f = f_ratio(x, half)?;
    Ok((f - 2.0 * (x.rad() / 2.0).cos()).abs())
}

/// Dyadic halving step: sin(y/2)/sin(cy/2) > sin y / sin(cy) for
/// 0 < y ≤ π/2, recorded as a one-step transcript in the halved arguments.
pub fn dyadic_step_check(y: Angle, c: HourFraction) -> Result<ProofTranscript, LemmaError> {
    check_domain(y.rad(), FRAC_PI_2, "(0, pi/2]")?;
    let whole = f_ratio(y, c)?;
    let halved = f_ratio(Angle::new(y.rad() / 2.0), c)?;
    let mut t = ProofTranscript::new();
    t.push(Step::strict_less(
        "sin y/sin(cy) < sin(y/2)/sin(cy/2)",
        whole,
        halved,
    ));
    Ok(t)
}

/// Residuals of the purely trigonometric identity behind the global proof.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigIdentityResiduals {
    /// |sin(a+q)/sin(b−q) − sin(a−p)/sin(b−p)|
    pub premise_residual: f64,
    /// |sin(p+q)/sin(p−q) − (1 − sin(b−a)sin(p+π/2)/(sin(b−p)sin(a+π/2)))|
    pub conclusion_residual: f64,
}

/// Checks the addition-formula identity: whenever the premise
/// sin(a+q)/sin(b−q) = sin(a−p)/sin(b−p) holds, the conclusion
/// sin(p+q)/sin(p−q) = 1 − sin(b−a)sin(p+π/2)/(sin(b−p)sin(a+π/2)) follows.
///
/// Contract: premise_residual < 1e−10 implies conclusion_residual < 1e−9.
/// Singular denominators (e.g. p = q) are reported, not evaluated.
pub fn trig_identity_residual(
    p: Angle,
    q: Angle,
    a: Angle,
    b: Angle,
) -> Result<TrigIdentityResiduals, LemmaError> {
    let (p, q, a, b) = (p.rad(), q.rad(), a.rad(), b.rad());
    const TINY: f64 = 1e-12;
    if (b - q).sin().abs() < TINY {
        return Err(LemmaError::Singular("sin(b - q)"));
    }
    if (b - p).sin().abs() < TINY {
        return Err(LemmaError::Singular("sin(b - p)"));
    }
    if (p - q).sin().abs() < TINY {
        return Err(LemmaError::Singular("sin(p - q)"));
    }
    if (a + FRAC_PI_2).sin().abs() < TINY {
        return Err(LemmaError::Singular("sin(a + pi/2)"));
    }
    let premise_residual = ((a + q).sin() / (b - q).sin() - (a - p).sin() / (b - p).sin()).abs();
    let rhs = 1.0
        - (b - a).sin() * (p + FRAC_PI_2).sin() / ((b - p).sin() * (a + FRAC_PI_2).sin());
    let conclusion_residual = ((p + q).sin() / (p - q).sin() - rhs).abs();
    Ok(TrigIdentityResiduals {
        premise_residual,
        conclusion_residual,
    })
}

/// The global proof of the lemma as a six-step checked transcript.
///
/// Given 0 < x < y < π/2 the auxiliary angle z = arcsin(sin x · sin(cy)/sin y)
/// satisfies sin y / sin(cy) = sin x / sin z, and the decrease f(x) > f(y) is
/// equivalent to the conclusion z > cx. The steps:
///
/// 1. z < x and z < cy (recorded as z < min(x, cy));
/// 2. x − z < (1−c)y;
/// 3. (x−z)/((1−c)y) < sin(x−z)/sin((1−c)y)       (sin θ/θ decreasing);
/// 4. sin(x−z)/sin((1−c)y) < 1 − sin(cy−z)/sin(cy) (via the trig identity);
/// 5. 1 − sin(cy−z)/sin(cy) < z/(cy)               (sin θ/θ decreasing again);
/// 6. cx < z                                       (the conclusion).
pub fn global_transcript(
    x: Angle,
    y: Angle,
    c: HourFraction,
) -> Result<ProofTranscript, LemmaError> {
    let (x, y) = (x.rad(), y.rad());
    let cv = c.value();
    if !(x > 0.0 && x < y && y < FRAC_PI_2) {
        return Err(LemmaError::DomainViolation(x, "0 < x < y < pi/2"));
    }
    let arg = x.sin() * (cv * y).sin() / y.sin();
    // sin x < sin y on (0, pi/2) makes the arcsin argument < 1 under the
    // preconditions; anything else is a bug, not a domain error.
    assert!(arg > 0.0 && arg < 1.0, "arcsin argument {arg} out of (0,1)");
    let z = arg.asin();

    let cy = cv * y;
    let rest = (1.0 - cv) * y;
    let mut t = ProofTranscript::new();
    t.push(Step::strict_less("z < min(x, cy)", z, x.min(cy)));
    t.push(Step::strict_less("x - z < (1-c)y", x - z, rest));
    t.push(Step::strict_less(
        "(x-z)/((1-c)y) < sin(x-z)/sin((1-c)y)",
        (x - z) / rest,
        (x - z).sin() / rest.sin(),
    ));

    // Step 4 rides on the identity with the substitutions
    //   p = ((1-c)y + x - z)/2, q = (-(1-c)y + x - z)/2,
    //   a = ((1-c)y + x + z)/2, b = cy + p,
    // under which the premise is exactly sin x/sin y = sin z/sin(cy).
    let p = 0.5 * (rest + x - z);
    let q = 0.5 * (-rest + x - z);
    let a = 0.5 * (rest + x + z);
    let b = cy + p;
    let ident = trig_identity_residual(Angle::new(p), Angle::new(q), Angle::new(a), Angle::new(b))?;
    assert!(
        ident.premise_residual < 1e-10 && ident.conclusion_residual < 1e-9,
        "identity residuals out of contract: {ident:?}"
    );
    let lhs4 = (x - z).sin() / rest.sin();
    let rhs4 = 1.0 - (cy - z).sin() / cy.sin();
    t.push(Step::strict_less(
        "sin(x-z)/sin((1-c)y) < 1 - sin(cy-z)/sin(cy)",
        lhs4,
        rhs4,
    ));
    t.push(Step::strict_less(
        "1 - sin(cy-z)/sin(cy) < z/(cy)",
        rhs4,
        z / cy,
    ));
    t.push(Step::strict_less("cx < z (conclusion)", cv * x, z));
    Ok(t)
}

/// A finite certificate that f decreases from y down to x: a strictly
/// decreasing sequence of points y = y₀ > y₁ > … > yₙ = x whose f-values
/// strictly increase, each step staying inside the locally verified
/// neighborhood (yₖ − ηₖ, yₖ] supplied by the provider.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainCertificate {
    pub c: HourFraction,
    /// Decreasing from y to x.
    pub points: Vec<f64>,
    /// f at each point; strictly increasing as the points decrease.
    pub values: Vec<f64>,
}

impl ChainCertificate {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Source of verified local-decrease neighborhoods η(y, c).
pub trait EtaProvider {
    fn eta(&self, y: Angle, c: HourFraction) -> Result<f64, LemmaError>;
}

/// Default provider: the Euclidean figure construction, which certifies a
/// neighborhood through the tangent majorations of the local proof.
#[derive(Debug, Clone, Copy, Default)]
pub struct FigureEta;

impl EtaProvider for FigureEta {
    fn eta(&self, y: Angle, c: HourFraction) -> Result<f64, LemmaError> {
        Ok(crate::figure::local_eta(y, c)?.eta)
    }
}

/// Fallback provider: bisection directly against f_ratio, with the same
/// 32-point sampling of the candidate neighborhood as the figure route.
#[derive(Debug, Clone, Copy, Default)]
pub struct RatioEta;

impl EtaProvider for RatioEta {
    fn eta(&self, y: Angle, c: HourFraction) -> Result<f64, LemmaError> {
        let yv = y.rad();
        check_domain(yv, FRAC_PI_2, "(0, pi/2]")?;
        let fy = f_ratio(y, c)?;
        let hi = yv * (1.0 - 1e-9);
        let good = |eta: f64| -> bool {
            (1..=32).all(|k| {
                let x = yv - eta * f64::from(k) / 33.0;
                x > 0.0 && x.sin() / (c.value() * x).sin() > fy
            })
        };
        Ok(bisect_predicate_sup(good, 0.0, hi, 1e-9).max(1e-9))
    }
}

/// Greedy chain construction: yₖ₊₁ = max(x, yₖ − ηₖ/2), so successive
/// neighborhoods overlap. Fails if the provider cannot certify a positive η
/// or the chain exceeds 10⁶ steps.
pub fn chain_certificate(
    x: Angle,
    y: Angle,
    c: HourFraction,
    provider: &dyn EtaProvider,
) -> Result<ChainCertificate, LemmaError> {
    const MAX_STEPS: usize = 1_000_000;
    let (xv, yv) = (x.rad(), y.rad());
    if !(xv > 0.0 && xv < yv && yv <= FRAC_PI_2) {
        return Err(LemmaError::DomainViolation(xv, "0 < x < y <= pi/2"));
    }
    let mut points = vec![yv];
    let mut values = vec![f_ratio(y, c)?];
    let mut yk = yv;
    while yk > xv {
        if points.len() > MAX_STEPS {
            return Err(LemmaError::ChainTooLong(MAX_STEPS));
        }
        let eta = provider.eta(Angle::new(yk), c)?;
        if !(eta > 0.0) {
            return Err(LemmaError::EtaNotPositive { y: yk, eta });
        }
        let next = (yk - 0.5 * eta).max(xv);
        let f_next = f_ratio(Angle::new(next), c)?;
        let f_prev = *values.last().expect("chain is never empty");
        if !(f_next > f_prev) {
            return Err(LemmaError::EtaNotPositive { y: next, eta });
        }
        points.push(next);
        values.push(f_next);
        yk = next;
    }
    Ok(ChainCertificate { c, points, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn deg(d: f64) -> Angle {
        Angle::from_degrees(d)
    }

    #[test]
    fn f_ratio_closed_form_and_spot_values() {
        let half = HourFraction::new(0.5).unwrap();
        assert_abs_diff_eq!(
            f_ratio(deg(60.0), half).unwrap(),
            1.7320508075688772, // 2 cos 30°
            epsilon = 1e-12
        );
        let third = HourFraction::new(1.0 / 3.0).unwrap();
        assert_abs_diff_eq!(
            f_ratio(deg(30.0), third).unwrap(),
            2.879385241571817, // sin 30° / sin 10°
            epsilon = 1e-12
        );
    }

    #[test]
    fn f_ratio_tends_to_one_as_c_tends_to_one() {
        for &x in &[0.3, 0.9, FRAC_PI_2] {
            let c = HourFraction::new(1.0 - 1e-6).unwrap();
            let f = f_ratio(Angle::new(x), c).unwrap();
            assert!((f - 1.0).abs() < 1e-5, "f={f} at x={x}");
            assert!(f > 1.0);
        }
    }

    #[test]
    fn f_ratio_rejects_domain_violations() {
        let c = HourFraction::new(0.5).unwrap();
        assert!(f_ratio(Angle::new(0.0), c).is_err());
        assert!(f_ratio(Angle::new(FRAC_PI_2 + 0.01), c).is_err());
    }

    #[test]
    fn hour_fraction_constructors() {
        assert!(HourFraction::new(0.0).is_err());
        assert!(HourFraction::new(1.0).is_err());
        assert!(HourFraction::twelfth(0).is_err());
        assert!(HourFraction::twelfth(12).is_err());
        assert_abs_diff_eq!(
            HourFraction::twelfth(1).unwrap().value(),
            1.0 / 12.0,
            epsilon = 1e-16
        );
    }

    #[test]
    fn scan_finds_no_counterexample() {
        let third = HourFraction::new(1.0 / 3.0).unwrap();
        let grid: Vec<Angle> = (1..=90).map(|d| deg(f64::from(d))).collect();
        assert_eq!(monotonicity_scan(third, &grid).unwrap(), None);
        // spot values quoted alongside the scan
        assert_abs_diff_eq!(f_ratio(deg(30.0), third).unwrap(), 2.8794, epsilon = 1e-4);
        assert_abs_diff_eq!(f_ratio(deg(60.0), third).unwrap(), 2.5321, epsilon = 1e-4);
        assert_abs_diff_eq!(f_ratio(deg(90.0), third).unwrap(), 2.0, epsilon = 1e-12);

        let c = HourFraction::new(11.0 / 12.0).unwrap();
        let fine: Vec<Angle> = (1..=900).map(|d| deg(f64::from(d) * 0.1)).collect();
        assert_eq!(monotonicity_scan(c, &fine).unwrap(), None);
    }

    #[test]
    fn scan_is_vacuous_on_single_point() {
        let c = HourFraction::new(0.4).unwrap();
        assert_eq!(monotonicity_scan(c, &[deg(30.0)]).unwrap(), None);
    }

    #[test]
    fn scan_rejects_unsorted_grid() {
        let c = HourFraction::new(0.4).unwrap();
        let grid = [deg(30.0), deg(20.0)];
        assert!(matches!(
            monotonicity_scan(c, &grid),
            Err(LemmaError::GridNotSorted(1))
        ));
    }

    #[test]
    fn lemma1_bracket_spot_values() {
        let iv = lemma1_bracket(deg(30.0), deg(60.0)).unwrap();
        assert_abs_diff_eq!(iv.lo(), 1.7320508075688774, epsilon = 1e-12);
        assert_abs_diff_eq!(iv.hi(), 2.1547005383792515, epsilon = 1e-12);
        assert!(iv.contains(2.0));

        let wide = lemma1_bracket(deg(10.0), deg(80.0)).unwrap();
        assert!(wide.contains(8.0));
    }

    #[test]
    fn lemma1_bracket_collapses_toward_one() {
        let iv = lemma1_bracket(Angle::new(1.0 - 1e-9), Angle::new(1.0)).unwrap();
        assert!(iv.contains(1.0 / (1.0 - 1e-9)));
        assert!(iv.width() < 1e-8);
    }

    #[test]
    fn lemma2_residual_is_machine_small() {
        assert_eq!(lemma2_check(Angle::new(FRAC_PI_2)).unwrap(), 0.0_f64.max(0.0));
        assert!(lemma2_check(deg(60.0)).unwrap() < 1e-12);
        assert!(lemma2_check(Angle::new(1.0)).unwrap() < 1e-12);
    }

    #[test]
    fn dyadic_step_spot_values() {
        let t = dyadic_step_check(deg(80.0), HourFraction::new(0.6).unwrap()).unwrap();
        assert!(t.overall());
        let s = &t.steps()[0];
        assert_abs_diff_eq!(s.rhs, 1.58035333336502, epsilon = 1e-10);
        assert_abs_diff_eq!(s.lhs, 1.3251895448233393, epsilon = 1e-10);

        // y = 90°, c = 1/2: 2 cos 22.5° > 2 cos 45°
        let t = dyadic_step_check(deg(90.0), HourFraction::new(0.5).unwrap()).unwrap();
        let s = &t.steps()[0];
        assert_abs_diff_eq!(s.rhs, 2.0 * (22.5f64).to_radians().cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.lhs, 2.0 * (45f64).to_radians().cos(), epsilon = 1e-12);

        assert!(dyadic_step_check(deg(10.0), HourFraction::twelfth(1).unwrap())
            .unwrap()
            .overall());
    }

    #[test]
    fn trig_identity_degenerate_equality() {
        // q = 0, a = b: both sides of the conclusion equal 1
        let r = trig_identity_residual(deg(20.0), deg(0.0), deg(40.0), deg(40.0)).unwrap();
        assert_abs_diff_eq!(r.premise_residual, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.conclusion_residual, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn trig_identity_singular_cases() {
        let e = trig_identity_residual(deg(10.0), deg(10.0), deg(40.0), deg(50.0));
        assert!(matches!(e, Err(LemmaError::Singular("sin(p - q)"))));
        let e = trig_identity_residual(deg(10.0), deg(50.0), deg(40.0), deg(50.0));
        assert!(matches!(e, Err(LemmaError::Singular("sin(b - q)"))));
    }

    #[test]
    fn global_transcript_spot_case() {
        let t = global_transcript(deg(30.0), deg(60.0), HourFraction::new(0.5).unwrap()).unwrap();
        assert!(t.overall());
        assert_eq!(t.steps().len(), 6);
        // z = 16.7787°, conclusion 16.7787° > 15°
        let conclusion = t.step("cx < z (conclusion)").unwrap();
        assert_abs_diff_eq!(
            conclusion.rhs.to_degrees(),
            16.778654880960353,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(conclusion.lhs.to_degrees(), 15.0, epsilon = 1e-12);
    }

    #[test]
    fn global_transcript_near_degenerate_limit() {
        // x → y⁻: all margins shrink toward zero but the steps stay true
        let y = 1.2;
        let t = global_transcript(
            Angle::new(y - 1e-7),
            Angle::new(y),
            HourFraction::new(0.3).unwrap(),
        )
        .unwrap();
        assert!(t.overall());
    }

    #[test]
    fn global_transcript_rejects_bad_order() {
        let c = HourFraction::new(0.5).unwrap();
        assert!(global_transcript(deg(60.0), deg(30.0), c).is_err());
        assert!(global_transcript(deg(30.0), deg(90.0), c).is_err());
    }

    #[test]
    fn chain_single_step_when_x_is_close() {
        let c = HourFraction::new(0.3).unwrap();
        let y = 1.0;
        let cert = chain_certificate(Angle::new(y - 1e-6), Angle::new(y), c, &RatioEta).unwrap();
        assert_eq!(cert.len(), 2); // y and x
        assert!(cert.values[1] > cert.values[0]);
    }

    #[test]
    fn chain_reaches_x_with_ratio_provider() {
        let c = HourFraction::new(0.3).unwrap();
        let cert = chain_certificate(deg(10.0), deg(80.0), c, &RatioEta).unwrap();
        assert_abs_diff_eq!(cert.points.last().copied().unwrap(), deg(10.0).rad());
        for w in cert.points.windows(2) {
            assert!(w[1] < w[0]);
        }
        for w in cert.values.windows(2) {
            assert!(w[1] > w[0]);
        }
    }
}
