use super::power::PowerProfile;
use crate::{Error, Result};

/// How a quadratic-interpolation estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QiStatus {
    /// Vertex of a concave fit around an interior maximum.
    Interior,
    /// Maximum on the first or last sector; fitted on the mirrored profile.
    Boundary,
    /// Collinear or convex triple; the sector center is returned.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QiEstimate {
    pub angle: f64,
    pub status: QiStatus,
}

/// Vertex of the parabola through `(t[i], p[i])`, or `None` unless the fit
/// is strictly concave. Abscissae are shifted to `t[1] = 0` before forming
/// the closed form.
pub fn parabola_vertex(t: [f64; 3], p: [f64; 3]) -> Option<f64> {
    let origin = t[1];
    let (t0, t2) = (t[0] - origin, t[2] - origin);
    let (p0, p1, p2) = (p[0], p[1], p[2]);
    // with t1 = 0
    let num = -t2 * t2 * (p1 - p0) + t0 * t0 * (p1 - p2);
    let den = -t0 * (p1 - p2) + t2 * (p1 - p0);
    let span = -t0 * t2 * (t0 - t2);
    if span == 0.0 || !den.is_finite() {
        return None;
    }
    // leading coefficient a = den / span
    if den == 0.0 || (den / span) >= 0.0 {
        return None;
    }
    let vertex = -0.5 * num / den;
    vertex.is_finite().then_some(vertex + origin)
}

fn fit_at(angles: [f64; 3], powers: [f64; 3], center: f64, status: QiStatus) -> QiEstimate {
    match parabola_vertex(angles, powers) {
        Some(v) => QiEstimate {
            angle: v.clamp(angles[0], angles[2]),
            status,
        },
        None => QiEstimate {
            angle: center,
            status: QiStatus::Degenerate,
        },
    }
}

/// Three-point quadratic refinement around sector `k_star`.
///
/// On the first or last sector the missing neighbor is the mirror image of
/// the present one, so the fit is symmetric and returns the sector center.
pub fn quadratic_interp(profile: &PowerProfile, k_star: usize) -> Result<QiEstimate> {
    let n = profile.len();
    if k_star >= n {
        return Err(Error::IndexOutOfRange {
            index: k_star,
            len: n,
        });
    }
    let t = profile.sector_angles();
    let p = profile.powers();
    let center = t[k_star];
    if n == 1 {
        return Ok(QiEstimate {
            angle: center,
            status: QiStatus::Degenerate,
        });
    }
    if k_star == 0 || k_star == n - 1 {
        let inner = if k_star == 0 { 1 } else { n - 2 };
        let step = (t[inner] - center).abs();
        let angles = [center - step, center, center + step];
        let powers = [p[inner], p[k_star], p[inner]];
        return Ok(fit_at(angles, powers, center, QiStatus::Boundary));
    }
    let angles = [t[k_star - 1], center, t[k_star + 1]];
    let powers = [p[k_star - 1], p[k_star], p[k_star + 1]];
    Ok(fit_at(angles, powers, center, QiStatus::Interior))
}

/// Max-RP followed by quadratic refinement at the arg-max sector.
pub fn max_rp_qi(profile: &PowerProfile) -> QiEstimate {
    quadratic_interp(profile, profile.argmax()).expect("argmax is in range")
}
