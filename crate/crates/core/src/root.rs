//! Safeguarded Newton iteration for strictly decreasing scalar functions.
//!
//! Shared by the spherical fixed-point solver and the numeric inverse of
//! the Hilbert transform. The bracket is maintained throughout: a Newton
//! step that leaves it, or fails to shrink it fast enough, is replaced by
//! a bisection step, so termination is guaranteed while smooth inputs
//! still converge quadratically.

use crate::{Error, Result};

/// Outcome of a bracketed root solve.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BracketedRoot {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Find `x` in `[lo, hi]` with `|f(x)| <= resid_tol`, for `f` strictly
/// decreasing with `f(lo) >= 0 >= f(hi)`.
///
/// `df` must return the (negative) derivative of `f`. The caller supplies a
/// valid bracket; this routine never evaluates outside it. A `resid_tol` of
/// zero runs to float resolution: the result is then either an exact zero
/// of the evaluated `f` or the better endpoint of a one-ulp bracket.
pub(crate) fn decreasing_root<F, D>(
    f: F,
    df: D,
    mut lo: f64,
    mut hi: f64,
    resid_tol: f64,
    max_iter: usize,
) -> Result<BracketedRoot>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo >= 0.0 && f_hi <= 0.0) {
        return Err(Error::RootFinding(format!(
            "invalid bracket: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    if f_lo.abs() <= resid_tol {
        return Ok(BracketedRoot {
            root: lo,
            residual: f_lo,
            iterations: 0,
        });
    }
    if f_hi.abs() <= resid_tol {
        return Ok(BracketedRoot {
            root: hi,
            residual: f_hi,
            iterations: 0,
        });
    }

    let mut x = 0.5 * (lo + hi);
    let mut step = (hi - lo).abs();
    let mut step_prev = step;

    for iteration in 1..=max_iter {
        let fx = f(x);
        if fx.abs() <= resid_tol {
            return Ok(BracketedRoot {
                root: x,
                residual: fx,
                iterations: iteration,
            });
        }
        // Keep the bracket current (f decreasing: positive side is the left).
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }

        let dfx = df(x);
        let newton = x - fx / dfx;
        let newton_ok = dfx.is_finite()
            && dfx != 0.0
            && newton > lo
            && newton < hi
            && (fx / dfx).abs() < 0.5 * step_prev;
        step_prev = step;
        if newton_ok {
            step = (newton - x).abs();
            x = newton;
        } else {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                // The bracket spans a single ulp; no point can improve it.
                // Hand back the endpoint with the smaller residual.
                let f_lo = f(lo);
                let f_hi = f(hi);
                let (root, residual) = if f_lo.abs() <= f_hi.abs() {
                    (lo, f_lo)
                } else {
                    (hi, f_hi)
                };
                return Ok(BracketedRoot {
                    root,
                    residual,
                    iterations: iteration,
                });
            }
            x = mid;
            step = 0.5 * (hi - lo);
        }
    }
    Err(Error::RootFinding(format!(
        "no convergence to |residual| <= {resid_tol:.1e} within {max_iter} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_linear() {
        let r = decreasing_root(|x| 2.0 - x, |_| -1.0, 0.0, 10.0, 1e-14, 100).unwrap();
        assert!((r.root - 2.0).abs() < 1e-13);
    }

    #[test]
    fn solves_reciprocal() {
        // f(x) = 1/x - 0.25, root at 4, steep near the left end.
        let r = decreasing_root(
            |x| 1.0 / x - 0.25,
            |x| -1.0 / (x * x),
            1e-6,
            100.0,
            1e-14,
            200,
        )
        .unwrap();
        assert!((r.root - 4.0).abs() < 1e-10, "root {}", r.root);
        assert!(r.residual.abs() <= 1e-14);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(decreasing_root(|x| x, |_| 1.0, 0.5, 1.0, 1e-12, 50).is_err());
    }

    #[test]
    fn accepts_root_at_bracket_end() {
        let r = decreasing_root(|x| -x, |_| -1.0, 0.0, 1.0, 1e-12, 50).unwrap();
        assert_eq!(r.root, 0.0);
        assert_eq!(r.iterations, 0);
    }
}
