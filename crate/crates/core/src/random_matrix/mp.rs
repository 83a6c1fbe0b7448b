use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Marchenko–Pastur law with aspect ratio `r = m/n ∈ (0, 1]`, supported on
/// `[a, b] = [(1 − √r)², (1 + √r)²]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MPParams {
    r: f64,
    a: f64,
    b: f64,
}

impl MPParams {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Marchenko-Pastur ratio r = {r} must lie in (0, 1]"
            )));
        }
        let s = r.sqrt();
        Ok(MPParams {
            r,
            a: (1.0 - s) * (1.0 - s),
            b: (1.0 + s) * (1.0 + s),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
}

/// `f(x) = √((x − a)(b − x)) / (2π r x)` on `[a, b]`, zero elsewhere.
/// For `r = 1` the density is `√((4 − x)/x) / (2π)`, singular but integrable
/// at 0, and 0 is returned at `x = 0`.
pub fn mp_pdf(x: f64, p: &MPParams) -> f64 {
    if x.is_nan() || x < p.a || x > p.b {
        return 0.0;
    }
    if p.a == 0.0 {
        if x == 0.0 {
            return 0.0;
        }
        return ((p.b - x) / x).sqrt() / (2.0 * std::f64::consts::PI * p.r.sqrt());
    }
    ((x - p.a) * (p.b - x)).sqrt() / (2.0 * std::f64::consts::PI * p.r * x)
}

const CDF_TOL: f64 = 1e-12;

/// Density after `x = (1 + r) − 2√r·cos θ`, θ ∈ [0, π]. With `s = sin(θ/2)`,
/// `c = cos(θ/2)` the integrand is `8 s² c² / (π (a + 4√r s²))`, which is
/// smooth even when `a = 0`.
fn angular_density(theta: f64, p: &MPParams) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    if p.a == 0.0 {
        return 2.0 * c * c / std::f64::consts::PI;
    }
    8.0 * s * s * c * c / (std::f64::consts::PI * (p.a + 4.0 * p.r.sqrt() * s * s))
}

fn angle_of(x: f64, p: &MPParams) -> f64 {
    let centre = 1.0 + p.r;
    let half_width = 2.0 * p.r.sqrt();
    ((centre - x) / half_width).clamp(-1.0, 1.0).acos()
}

/// `∫_a^x f`, by adaptive Gauss–Kronrod on the angular form of the density.
pub fn mp_cdf(x: f64, p: &MPParams) -> f64 {
    if x.is_nan() || x <= p.a {
        return 0.0;
    }
    if x >= p.b {
        return 1.0;
    }
    let theta = angle_of(x, p);
    integrate(|t| angular_density(t, p), 0.0, theta, CDF_TOL)
        .value
        .clamp(0.0, 1.0)
}

/// Inverse CDF by bisection; `q` is clamped to `[0, 1]`.
pub fn mp_quantile(q: f64, p: &MPParams) -> f64 {
    let q = q.clamp(0.0, 1.0);
    let (mut lo, mut hi) = (p.a, p.b);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mp_cdf(mid, p) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `∫ x f(x) dx`, which is 1 for every r.
pub fn mp_mean(p: &MPParams) -> f64 {
    let centre = 1.0 + p.r;
    let half_width = 2.0 * p.r.sqrt();
    integrate(
        |t| (centre - half_width * t.cos()) * angular_density(t, p),
        0.0,
        std::f64::consts::PI,
        CDF_TOL,
    )
    .value
}
