//! The exact local-proof figure in Cartesian coordinates.
//!
//! Angles x and y are drawn as central angles of the unit circle: B sits at
//! arc 0 and A, C, D, E at arcs y, cy, x, cx on the same side. The axis is
//! the diameter through B. Every auxiliary point of the local proof is an
//! explicit line intersection, so each identity and majoration of the proof
//! becomes a checkable numeric statement, and bisection over the verified
//! checks yields the local decrease neighborhood η(y, c).

use crate::geom::{Angle, Point2};
use crate::lemma::{bracket_upper, HourFraction};
use crate::svg::SvgDoc;
use crate::transcript::{ProofTranscript, Step};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FigureError {
    #[error("domain violation: {0}")]
    Domain(&'static str),
    #[error("degenerate figure: {0}")]
    Degenerate(&'static str),
    #[error("chord through arcs {0} rad and {1} rad is parallel to the axis")]
    ParallelAxis(f64, f64),
}

/// The local-proof figure with every constructed point populated.
///
/// Primary points lie on the unit circle at the stated arcs from B = (1, 0);
/// derived points are intersections with the axis (the diameter through B),
/// the tangents at A and C, and the bracket points T, S on the chord AC.
#[derive(Debug, Clone)]
pub struct LocalProofFigure {
    pub x: f64,
    pub y: f64,
    pub c: f64,
    /// B = (1, 0), the foot of the axis.
    pub b: Point2,
    /// A at arc y.
    pub a: Point2,
    /// C at arc cy.
    pub c_pt: Point2,
    /// D at arc x.
    pub d: Point2,
    /// E at arc cx.
    pub e: Point2,
    /// DE ∩ axis.
    pub i: Point2,
    /// AC ∩ axis.
    pub h: Point2,
    /// DC ∩ axis.
    pub w: Point2,
    /// CE ∩ axis.
    pub r: Point2,
    /// AD ∩ axis.
    pub u: Point2,
    /// Tangent at C ∩ axis.
    pub j: Point2,
    /// On the tangent at A with AO = (β/α)·CJ, β/α = arc(AD)/arc(CE) = 1/c.
    pub o: Point2,
    /// Projection of O onto the axis parallel to AC.
    pub n: Point2,
    /// On AC with AT/TC = 1/c (the true arc ratio).
    pub t_pt: Point2,
    /// On AC with AS/SC at the upper bracket bound for y/(cy).
    pub s_pt: Point2,
}

fn circle_point(arc: f64) -> Point2 {
    Point2::new(arc.cos(), arc.sin())
}

/// Intersection of the chord through circle points at arcs t1, t2 with the
/// axis. Evaluated through the half-angle form x = cos t1 + sin t1·tan(m),
/// m = (t1+t2)/2, which is the line/axis intersection without the
/// cancellation of sin t1 − sin t2.
fn chord_axis_intersection(t1: f64, t2: f64) -> Result<Point2, FigureError> {
    let m = 0.5 * (t1 + t2);
    if m.cos().abs() < 1e-12 {
        return Err(FigureError::ParallelAxis(t1, t2));
    }
    Ok(Point2::new(t1.cos() + t1.sin() * m.tan(), 0.0))
}

/// Builds the figure for 0 < x < y ≤ π/2 and c in (0, 1). The construction
/// is ruler-and-compass expressible: circle points, chords, tangents, one
/// transferred length and one parallel projection.
pub fn build_figure(x: Angle, y: Angle, c: HourFraction) -> Result<LocalProofFigure, FigureError> {
    let (x, y, c) = (x.rad(), y.rad(), c.value());
    if !(x > 0.0 && x < y && y <= FRAC_PI_2) {
        return Err(FigureError::Domain("requires 0 < x < y <= pi/2"));
    }
    let cy = c * y;
    let cx = c * x;
    if (x - cy).abs() < 1e-12 {
        return Err(FigureError::Degenerate("x = cy puts D on C"));
    }

    let a = circle_point(y);
    let c_pt = circle_point(cy);
    let d = circle_point(x);
    let e = circle_point(cx);

    let i = chord_axis_intersection(x, cx)?;
    let h = chord_axis_intersection(y, cy)?;
    let w = chord_axis_intersection(x, cy)?;
    let r = chord_axis_intersection(cy, cx)?;
    let u = chord_axis_intersection(y, x)?;

    // Tangent at C meets the axis where ξ·cos(cy) = 1; CJ = tan(cy).
    let j = Point2::new(1.0 / cy.cos(), 0.0);
    let cj = cy.tan();

    // O on the tangent at A, on the side toward the axis, with AO = CJ/c.
    let ao = cj / c;
    let o = Point2::new(a.x + ao * y.sin(), a.y - ao * y.cos());

    // N: slide O to the axis parallel to AC. sin y − sin(cy) in half-angle
    // form keeps the direction well conditioned.
    let dy = 2.0 * (0.5 * (y + cy)).cos() * (0.5 * (y - cy)).sin();
    let s_par = o.y / dy;
    let n = Point2::new(o.x + s_par * (c_pt.x - a.x), 0.0);

    // T and S along AC by their division ratios.
    let tt = 1.0 / (1.0 + c); // AT/TC = 1/c
    let t_pt = Point2::new(a.x + tt * (c_pt.x - a.x), a.y + tt * (c_pt.y - a.y));
    let rs = bracket_upper(cy, y);
    let ts = rs / (1.0 + rs);
    let s_pt = Point2::new(a.x + ts * (c_pt.x - a.x), a.y + ts * (c_pt.y - a.y));

    Ok(LocalProofFigure {
        x,
        y,
        c,
        b: Point2::new(1.0, 0.0),
        a,
        c_pt,
        d,
        e,
        i,
        h,
        w,
        r,
        u,
        j,
        o,
        n,
        t_pt,
        s_pt,
    })
}

/// The raw quantities entering the proof's identities and majorations.
#[derive(Debug, Clone, Copy)]
struct FigureChecks {
    di_ie: f64,
    ratio_x: f64, // sin x / sin(cx)
    ah_hc: f64,
    ratio_y: f64, // sin y / sin(cy)
    menelaus_dce: f64,
    menelaus_adc: f64,
    ad_over_arc: f64,
    ce_over_arc: f64,
    cr: f64,
    cj: f64,
    au: f64,
    an: f64,
    ao: f64,
    ratio_h: f64,
    ratio_t: f64,
    ratio_s: f64,
}

fn compute_checks(fig: &LocalProofFigure) -> FigureChecks {
    let di = fig.d.dist(fig.i);
    let ie = fig.e.dist(fig.i);
    let ah = fig.a.dist(fig.h);
    let hc = fig.c_pt.dist(fig.h);
    let dw = fig.d.dist(fig.w);
    let wc = fig.c_pt.dist(fig.w);
    let cr = fig.c_pt.dist(fig.r);
    let re = fig.e.dist(fig.r);
    let au = fig.a.dist(fig.u);
    let ud = fig.d.dist(fig.u);

    // crd θ = 2 sin(θ/2): the chord/arc step needs this cancellation-free
    // form to stay resolvable when D closes in on A
    let arc_ad = fig.y - fig.x;
    let arc_ce = fig.c * arc_ad;
    let ad_over_arc = 2.0 * (0.5 * arc_ad).sin() / arc_ad;
    let ce_over_arc = 2.0 * (0.5 * arc_ce).sin() / arc_ce;

    // unsigned division ratios AP/PC along the chord AC
    let ratio_on_ac = |p: Point2| fig.a.dist(p) / fig.c_pt.dist(p);

    FigureChecks {
        di_ie: di / ie,
        ratio_x: fig.x.sin() / (fig.c * fig.x).sin(),
        ah_hc: ah / hc,
        ratio_y: fig.y.sin() / (fig.c * fig.y).sin(),
        menelaus_dce: (dw / wc) * (cr / re),
        menelaus_adc: (au / ud) * (dw / wc),
        ad_over_arc,
        ce_over_arc,
        cr,
        cj: fig.c_pt.dist(fig.j),
        au,
        an: fig.a.dist(fig.n),
        ao: fig.a.dist(fig.o),
        ratio_h: ratio_on_ac(fig.h),
        ratio_t: ratio_on_ac(fig.t_pt),
        ratio_s: ratio_on_ac(fig.s_pt),
    }
}

const MENELAUS_TOL: f64 = 1e-10;

/// Checks every identity and majoration of the local proof on the figure:
///
/// 1. the perpendicular-distance ratio law DI/IE = sin x/sin(cx) and
///    AH/HC = sin y/sin(cy);
/// 2. both Menelaus decompositions (triangles DCE and ADC cut by the axis);
/// 3. the chord/arc comparison AD/arc(AD) < CE/arc(CE);
/// 4. the tangent majoration CR < CJ;
/// 5. the neighborhood majorations AN < AU and AO < AN (these two hold only
///    once D is close enough to A; they carve out the η-neighborhood);
/// 6. the bracket placement of T between H and S on the chord AC.
///
/// Failed steps simply fail; no step is an error.
pub fn verify_figure_identities(fig: &LocalProofFigure) -> ProofTranscript {
    let ck = compute_checks(fig);
    let mut t = ProofTranscript::new();
    t.push(Step::equal_rel(
        "DI/IE = sin x/sin(cx)",
        ck.di_ie,
        ck.ratio_x,
        MENELAUS_TOL,
    ));
    t.push(Step::equal_rel(
        "AH/HC = sin y/sin(cy)",
        ck.ah_hc,
        ck.ratio_y,
        MENELAUS_TOL,
    ));
    t.push(Step::equal_rel(
        "Menelaus DCE: DI/IE = (DW/WC)(CR/RE)",
        ck.menelaus_dce,
        ck.di_ie,
        MENELAUS_TOL,
    ));
    t.push(Step::equal_rel(
        "Menelaus ADC: AH/HC = (AU/UD)(DW/WC)",
        ck.menelaus_adc,
        ck.ah_hc,
        MENELAUS_TOL,
    ));
    t.push(Step::strict_less(
        "AD/arc(AD) < CE/arc(CE)",
        ck.ad_over_arc,
        ck.ce_over_arc,
    ));
    t.push(Step::strict_less("CR < CJ", ck.cr, ck.cj));
    t.push(Step::strict_less("AN < AU", ck.an, ck.au));
    t.push(Step::strict_less("AO < AN", ck.ao, ck.an));
    t.push(Step::less_eq("AH/HC <= AT/TC", ck.ratio_h, ck.ratio_t));
    t.push(Step::less_eq("AT/TC <= AS/SC", ck.ratio_t, ck.ratio_s));
    t
}

/// Fast boolean form of [`verify_figure_identities`] for use inside the η
/// bisection.
fn figure_passes(fig: &LocalProofFigure) -> bool {
    let ck = compute_checks(fig);
    let rel = |a: f64, b: f64| (a / b - 1.0).abs() <= MENELAUS_TOL;
    rel(ck.di_ie, ck.ratio_x)
        && rel(ck.ah_hc, ck.ratio_y)
        && rel(ck.menelaus_dce, ck.di_ie)
        && rel(ck.menelaus_adc, ck.ah_hc)
        && ck.ad_over_arc < ck.ce_over_arc
        && ck.cr < ck.cj
        && ck.an < ck.au
        && ck.ao < ck.an
        && ck.ratio_h <= ck.ratio_t
        && ck.ratio_t <= ck.ratio_s
}

/// Result of the η bisection. `flagged` marks a degenerate search that fell
/// through to the resolution floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaResult {
    pub eta: f64,
    pub flagged: bool,
}

/// Resolution of the η bisection, in radians.
pub const ETA_RESOLUTION: f64 = 1e-9;

/// Largest η (bisection at 1e−9 rad resolution) such that a 32-point sample
/// of x in (y−η, y) passes every figure check and satisfies f(x) > f(y).
///
/// The search is capped below (1−c)y so that D stays clear of C; positivity
/// of the result is witnessed by the O-point lying above the axis, which the
/// neighborhood checks subsume.
pub fn local_eta(y: Angle, c: HourFraction) -> Result<EtaResult, FigureError> {
    let yv = y.rad();
    if !(yv > 0.0 && yv <= FRAC_PI_2) {
        return Err(FigureError::Domain("requires 0 < y <= pi/2"));
    }
    let cv = c.value();
    let fy = yv.sin() / (cv * yv).sin();
    let cap = 0.98 * (1.0 - cv) * yv;

    let good = |eta: f64| -> bool {
        (1..=32).all(|k| {
            let xv = yv - eta * f64::from(k) / 33.0;
            match build_figure(Angle::new(xv), y, c) {
                Ok(fig) => figure_passes(&fig) && xv.sin() / (cv * xv).sin() > fy,
                Err(_) => false,
            }
        })
    };

    let eta = crate::search::bisect_predicate_sup(good, 0.0, cap, ETA_RESOLUTION);
    if eta > 0.0 {
        Ok(EtaResult { eta, flagged: false })
    } else {
        Ok(EtaResult {
            eta: ETA_RESOLUTION,
            flagged: true,
        })
    }
}

/// Renders the figure as a standalone SVG document: circle, axis, chords,
/// tangents, constructed points and labels.
pub fn figure_svg(fig: &LocalProofFigure) -> String {
    let labeled: [(&str, Point2); 14] = [
        ("B", fig.b),
        ("A", fig.a),
        ("C", fig.c_pt),
        ("D", fig.d),
        ("E", fig.e),
        ("I", fig.i),
        ("H", fig.h),
        ("W", fig.w),
        ("R", fig.r),
        ("U", fig.u),
        ("J", fig.j),
        ("O", fig.o),
        ("N", fig.n),
        ("T", fig.t_pt),
    ];
    let mut min_x: f64 = -1.1;
    let mut max_x: f64 = 1.1;
    for (_, p) in &labeled {
        min_x = min_x.min(p.x - 0.1);
        max_x = max_x.max(p.x + 0.1);
    }
    let mut doc = SvgDoc::new(min_x, -1.15, max_x, 1.25, 640.0);
    doc.circle(0.0, 0.0, 1.0, "none", "#888");
    doc.line(min_x, 0.0, max_x, 0.0, "#888"); // axis
    for (p1, p2) in [
        (fig.d, fig.i),
        (fig.a, fig.h),
        (fig.d, fig.w),
        (fig.c_pt, fig.r),
        (fig.a, fig.u),
    ] {
        doc.line(p1.x, p1.y, p2.x, p2.y, "#3366cc");
    }
    // tangents at A and C out to their axis meets (tangent at A drawn to O)
    doc.line(fig.c_pt.x, fig.c_pt.y, fig.j.x, fig.j.y, "#cc6633");
    doc.line(fig.a.x, fig.a.y, fig.o.x, fig.o.y, "#cc6633");
    doc.line(fig.o.x, fig.o.y, fig.n.x, fig.n.y, "#66aa66");
    for (name, p) in &labeled {
        doc.point(p.x, p.y, "#222");
        doc.text(p.x + 0.02, p.y + 0.04, name);
    }
    doc.point(fig.s_pt.x, fig.s_pt.y, "#222");
    doc.text(fig.s_pt.x + 0.02, fig.s_pt.y + 0.04, "S");
    doc.finish()
}
