//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 15-point Kronrod rule (embedding the 7-point Gauss rule) drives a
//! globally adaptive bisection: the interval with the largest error
//! estimate is split until the summed estimate drops below the requested
//! absolute tolerance. This is the workhorse behind every integral in the
//! crate (semicircle moments, logarithmic potentials, and the quadrature
//! oracles the tests compare closed forms against), so its tolerance is
//! always set at least two orders below whatever consumes it.
//!
//! The error estimator follows the classic QUADPACK recipe: the
//! Gauss/Kronrod difference is rescaled against the deviation integral
//! `resasc` so that smooth integrands get their superconvergence
//! recognized, while rough ones fall back to a conservative bound.

use crate::{Error, Result};
use std::collections::BinaryHeap;

/// Abscissae of the 15-point Kronrod rule on [-1, 1], positive half.
/// Odd-indexed entries are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Weights of the embedded 7-point Gauss rule (nodes XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Hard cap on adaptive subdivisions before giving up.
const MAX_SUBDIVISIONS: usize = 4000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    /// The integral estimate.
    pub value: f64,
    /// Conservative absolute error estimate (sum over intervals).
    pub abs_error: f64,
    /// Number of bisections performed.
    pub subdivisions: usize,
}

/// One interval of the adaptive scheme, ordered by error estimate so the
/// heap pops the worst offender first.
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// QUADPACK-style rescaling of the raw Gauss/Kronrod difference into a
/// reliable error estimate.
fn rescale_error(mut err: f64, resabs: f64, resasc: f64) -> f64 {
    err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let min_err = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && min_err > err {
        err = min_err;
    }
    err
}

/// Apply the 15-point Kronrod rule to `f` on [a, b].
///
/// Returns (integral, rescaled error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut resg = WG[3] * fc;
    let mut resk = WGK[7] * fc;
    let mut resabs = resk.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        let fsum = f1 + f2;
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }

    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - reskh).abs() + (fv[14 - j] - reskh).abs());
    }

    let value = resk * half;
    let err = rescale_error((resk - resg) * half, resabs * half.abs(), resasc * half.abs());
    (value, err)
}

/// Integrate `f` over [a, b] to absolute tolerance `abs_tol`.
///
/// # Arguments
/// * `f` - integrand; must be finite on (a, b). Endpoint log-type
///   singularities are handled by the adaptive refinement.
/// * `a`, `b` - finite integration bounds, `a <= b`.
/// * `abs_tol` - target for the summed error estimate.
///
/// # Errors
/// [`Error::QuadratureFailure`] if the estimate cannot be pushed below
/// `abs_tol` within the subdivision budget, [`Error::InvalidParameter`]
/// for malformed bounds, [`Error::NonFinite`] if the integrand returns
/// NaN/∞ at a quadrature node.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::InvalidParameter(format!(
            "bad integration bounds [{a}, {b}]"
        )));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "quadrature tolerance must be positive, got {abs_tol}"
        )));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            subdivisions: 0,
        });
    }

    let (value, err) = qk15(&f, a, b);
    if !value.is_finite() {
        return Err(Error::NonFinite {
            context: "quadrature integrand",
        });
    }

    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, err });
    let mut total_err = err;
    let mut subdivisions = 0;

    while total_err > abs_tol {
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::QuadratureFailure {
                err: total_err,
                tol: abs_tol,
                subdivisions,
            });
        }
        // The worst interval drives the refinement.
        let worst = heap.pop().expect("heap never empty while err > 0");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval no longer splittable in f64; the estimate will not improve.
            return Err(Error::QuadratureFailure {
                err: total_err,
                tol: abs_tol,
                subdivisions,
            });
        }
        let (v1, e1) = qk15(&f, worst.a, mid);
        let (v2, e2) = qk15(&f, mid, worst.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::NonFinite {
                context: "quadrature integrand",
            });
        }
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        subdivisions += 1;
    }

    // Recompute the totals from the heap to shed accumulated cancellation.
    let (mut value, mut err) = (0.0, 0.0);
    for seg in heap.iter() {
        value += seg.value;
        err += seg.err;
    }
    Ok(Quadrature {
        value,
        abs_error: err,
        subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = adaptive(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-14, "got {}", q.value);
        assert_eq!(q.subdivisions, 0, "K15 integrates x^2 without splitting");
    }

    #[test]
    fn arctan_integrand() {
        let q = adaptive(|x| 4.0 / (1.0 + x * x), 0.0, 1.0, 1e-12).unwrap();
        assert!((q.value - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn log_endpoint_singularity() {
        let q = adaptive(|x| x.ln(), 0.0, 1.0, 1e-11).unwrap();
        assert!((q.value + 1.0).abs() < 1e-10, "got {}", q.value);
    }

    #[test]
    fn semicircle_mass() {
        // beta = 2: density sqrt(4 - t^2)/(2 pi) on [-2, 2].
        let q = adaptive(
            |t| (4.0 - t * t).max(0.0).sqrt() / (2.0 * std::f64::consts::PI),
            -2.0,
            2.0,
            1e-11,
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oscillatory_integrand() {
        // \int_0^{2pi} sin^2 = pi
        let q = adaptive(|x| x.sin().powi(2), 0.0, 2.0 * std::f64::consts::PI, 1e-12).unwrap();
        assert!((q.value - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(adaptive(|x| x, 1.0, 0.0, 1e-10).is_err());
        assert!(adaptive(|x| x, 0.0, 1.0, 0.0).is_err());
        assert!(adaptive(|x| x, 0.0, f64::INFINITY, 1e-10).is_err());
    }

    #[test]
    fn empty_interval_is_zero() {
        let q = adaptive(|x| x.exp(), 3.0, 3.0, 1e-10).unwrap();
        assert_eq!(q.value, 0.0);
    }

    #[test]
    fn reports_nonfinite_integrand() {
        let err = adaptive(|x| 1.0 / x, -1.0, 1.0, 1e-10);
        assert!(err.is_err());
    }
}
