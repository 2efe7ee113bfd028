use super::{GeomError, Point2};
use nalgebra::SMatrix;

/// Monomial row [x², xy, y², x, y, 1] of the general conic at a point.
fn monomials(p: Point2) -> [f64; 6] {
    [p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, 1.0]
}

/// Fits the unique conic through the first five points (null space of the
/// 5×6 moment matrix, computed by cofactor minors) and returns the maximum
/// normalized algebraic residual over the remaining points.
///
/// The residual at a point is |q·m| / |∇(q·m)|: the algebraic value scaled
/// by the local gradient, i.e. the first-order geometric distance to the
/// fitted conic. It is invariant under rescaling of the coefficients.
///
/// Requires at least 6 points; a rank-deficient five-point configuration
/// (e.g. five collinear points, which admit a pencil of conics) is rejected.
pub fn conic_fit_residual(points: &[Point2]) -> Result<f64, GeomError> {
    if points.len() < 6 {
        return Err(GeomError::TooFewPoints {
            needed: 6,
            got: points.len(),
        });
    }

    // Moment matrix of the first five points, rows normalized for
    // conditioning and padded with a zero row so the SVD exposes the full
    // right null space.
    let mut m = SMatrix::<f64, 6, 6>::zeros();
    for (i, p) in points[..5].iter().enumerate() {
        let row = monomials(*p);
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = v / norm;
        }
    }

    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    // singular values come sorted descending; σ5 belongs to the conic null
    // direction (plus the padding row), σ4 ≈ 0 means a pencil of conics
    // through the five points, i.e. a degenerate configuration.
    let sv = svd.singular_values;
    if sv[4] <= 1e-10 * sv[0] {
        return Err(GeomError::DegenerateConic);
    }
    let mut q = [0.0f64; 6];
    for (j, v) in q.iter_mut().enumerate() {
        *v = v_t[(5, j)];
    }

    let mut worst = 0.0f64;
    for p in &points[5..] {
        let mono = monomials(*p);
        let alg: f64 = q.iter().zip(mono.iter()).map(|(a, b)| a * b).sum();
        let gx = 2.0 * q[0] * p.x + q[1] * p.y + q[3];
        let gy = q[1] * p.x + 2.0 * q[2] * p.y + q[4];
        let grad = gx.hypot(gy);
        let res = if grad > 1e-300 {
            alg.abs() / grad
        } else {
            alg.abs()
        };
        worst = worst.max(res);
    }
    Ok(worst)
}
