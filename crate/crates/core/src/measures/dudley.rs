//! Dudley (bounded-Lipschitz) distance between finite discrete measures.
//!
//! The distance is `sup_f |∫f dμ − ∫f dν|` over test functions with
//! `|f| ≤ 1` and Lipschitz constant `≤ 1`. For finite measures only the
//! values of `f` at the merged atom locations matter, and the Lipschitz
//! constraint binds between consecutive locations, so the supremum is the
//! value of the linear program
//!
//! ```text
//! maximize   Σ c_i f_i          c_i = μ({x_i}) − ν({x_i})
//! subject to |f_i| ≤ 1,  |f_{i+1} − f_i| ≤ x_{i+1} − x_i
//! ```
//!
//! over the merged support `x_1 < … < x_m`. The chain structure admits an
//! exact dynamic program over concave piecewise-linear value functions:
//! with `U_i(t) = max { Σ_{j≤i} c_j f_j : f_i = t }`, the recursion is a
//! sliding-window maximum (window width = the gap to the next atom)
//! followed by adding the linear term `c_{i+1}·t`. Both steps preserve
//! concave piecewise linearity and add at most two breakpoints each. No
//! discretization is involved: the solve is exact up to float rounding.
//! Tests cross-validate it against a lattice brute force.

use super::SpectralMeasure;

/// A concave piecewise-linear function on [-1, 1], stored as breakpoints
/// with strictly increasing abscissae; linear interpolation in between.
struct Concave {
    points: Vec<(f64, f64)>,
}

impl Concave {
    fn linear(c: f64) -> Self {
        Concave {
            points: vec![(-1.0, -c), (1.0, c)],
        }
    }

    fn eval(&self, t: f64) -> f64 {
        let pts = &self.points;
        if t <= pts[0].0 {
            return pts[0].1;
        }
        for win in pts.windows(2) {
            let (t0, v0) = win[0];
            let (t1, v1) = win[1];
            if t <= t1 {
                if t1 == t0 {
                    return v0.max(v1);
                }
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        pts[pts.len() - 1].1
    }

    fn max_value(&self) -> f64 {
        self.points
            .iter()
            .map(|&(_, v)| v)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of the leftmost and rightmost breakpoints attaining the max.
    fn argmax_span(&self) -> (usize, usize) {
        let best = self.max_value();
        let first = self.points.iter().position(|&(_, v)| v == best).unwrap();
        let last = self.points.iter().rposition(|&(_, v)| v == best).unwrap();
        (first, last)
    }

    /// The sliding-window maximum `t ↦ max{ self(s) : |s − t| ≤ d }`,
    /// restricted back to [-1, 1]. For a concave function this shifts the
    /// increasing part right stays... concretely: the plateau of width 2d
    /// around the argmax, with the left branch shifted left by d and the
    /// right branch shifted right by d.
    fn window_max(&self, d: f64) -> Concave {
        debug_assert!(d >= 0.0);
        let (first, last) = self.argmax_span();
        let best = self.max_value();
        let lo_star = self.points[first].0;
        let hi_star = self.points[last].0;

        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(self.points.len() + 4);
        // Left branch: value at t is self(t + d), for t + d <= lo_star.
        if lo_star - d > -1.0 {
            pts.push((-1.0, self.eval(-1.0 + d)));
            for &(t, v) in &self.points[..=first] {
                let shifted = t - d;
                if shifted > -1.0 && shifted < lo_star - d {
                    pts.push((shifted, v));
                }
            }
        }
        // Plateau.
        pts.push(((lo_star - d).max(-1.0), best));
        pts.push(((hi_star + d).min(1.0), best));
        // Right branch: value at t is self(t - d).
        if hi_star + d < 1.0 {
            for &(t, v) in &self.points[last..] {
                let shifted = t + d;
                if shifted > hi_star + d && shifted < 1.0 {
                    pts.push((shifted, v));
                }
            }
            pts.push((1.0, self.eval(1.0 - d)));
        }

        // Strictly increasing abscissae (drop duplicates from clamping).
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|next, prev| {
            if next.0 == prev.0 {
                prev.1 = prev.1.max(next.1);
                true
            } else {
                false
            }
        });
        Concave { points: pts }
    }

    fn add_linear(&mut self, c: f64) {
        for p in &mut self.points {
            p.1 += c * p.0;
        }
    }
}

/// Merged signed weights `μ − ν` over the union of atom locations.
fn signed_weights(mu: &SpectralMeasure, nu: &SpectralMeasure) -> Vec<(f64, f64)> {
    let mut all: Vec<(f64, f64)> = Vec::with_capacity(mu.len() + nu.len());
    all.extend(mu.atoms().iter().copied());
    all.extend(nu.atoms().iter().map(|&(x, w)| (x, -w)));
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(all.len());
    for (x, c) in all {
        match merged.last_mut() {
            Some(last) if last.0 == x => last.1 += c,
            _ => merged.push((x, c)),
        }
    }
    merged
}

/// Maximize `Σ c_i f_i` over the path-constrained box via the concave DP.
fn path_lp_max(atoms: &[(f64, f64)]) -> f64 {
    let mut u = Concave::linear(atoms[0].1);
    for k in 1..atoms.len() {
        let gap = atoms[k].0 - atoms[k - 1].0;
        let mut widened = if gap >= 2.0 {
            // Window covers the whole box: the constraint is slack.
            let best = u.max_value();
            Concave {
                points: vec![(-1.0, best), (1.0, best)],
            }
        } else {
            u.window_max(gap)
        };
        widened.add_linear(atoms[k].1);
        u = widened;
    }
    u.max_value()
}

/// The Dudley bounded-Lipschitz distance between two finite measures.
///
/// Exact (up to float rounding) via the path LP described in the module
/// docs. The value lies in `[0, 2]`, the map is symmetric by construction
/// (the maximum of the two signed problems is taken, which are equal
/// mathematically), and it vanishes iff the measures share all atoms.
pub fn dudley_distance(mu: &SpectralMeasure, nu: &SpectralMeasure) -> f64 {
    let atoms = signed_weights(mu, nu);
    if atoms.iter().all(|&(_, c)| c == 0.0) {
        return 0.0;
    }
    let flipped: Vec<(f64, f64)> = atoms.iter().map(|&(x, c)| (x, -c)).collect();
    path_lp_max(&atoms).max(path_lp_max(&flipped)).max(0.0)
}
