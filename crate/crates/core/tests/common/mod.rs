//! Oracles shared by the integration suites. Everything here recomputes
//! results through routes the library does not use: dense inertia counting
//! instead of Householder plus QL, golden-section search instead of closed
//! forms, and a lattice brute force instead of the exact Dudley LP.
//!
//! Each test target compiles its own copy and uses its own subset.
#![allow(dead_code)]

/// Eigenvalues (ascending) of a dense symmetric matrix in flat row-major
/// form, by bisection on the inertia count of `A - sigma I`.
///
/// The count comes from symmetric Gaussian elimination: by Sylvester's law
/// the number of negative pivots equals the number of eigenvalues below
/// the shift. No part of the library's eigensolver is involved.
pub fn inertia_eigenvalues(n: usize, a: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), n * n);

    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())) + 1.0;
    let count_below = |sigma: f64| -> usize {
        let mut m = a.to_vec();
        for i in 0..n {
            m[i * n + i] -= sigma;
        }
        let mut negatives = 0;
        for k in 0..n {
            let mut pivot = m[k * n + k];
            if pivot == 0.0 {
                // Exact breakdown has measure zero for bisection midpoints;
                // a scaled signed nudge keeps the count well defined.
                pivot = -1e-30 * scale;
            }
            if pivot < 0.0 {
                negatives += 1;
            }
            for i in (k + 1)..n {
                let factor = m[i * n + k] / pivot;
                for j in (k + 1)..n {
                    m[i * n + j] -= factor * m[k * n + j];
                }
            }
        }
        negatives
    };

    // Gershgorin interval containing the whole spectrum.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let radius: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| a[i * n + j].abs())
            .sum();
        lo = lo.min(a[i * n + i] - radius);
        hi = hi.max(a[i * n + i] + radius);
    }
    lo -= 1.0;
    hi += 1.0;

    (0..n)
        .map(|k| {
            let (mut a_k, mut b_k) = (lo, hi);
            for _ in 0..70 {
                let mid = 0.5 * (a_k + b_k);
                if count_below(mid) <= k {
                    a_k = mid;
                } else {
                    b_k = mid;
                }
            }
            0.5 * (a_k + b_k)
        })
        .collect()
}

/// Golden-section minimizer of a unimodal function on `[a, b]` (boundary
/// minima included). Returns the midpoint of the final interval and its
/// value.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    (x, fx)
}

/// Brute-force Dudley value restricted to test functions with values on
/// the lattice `{-1, -1+h, ..., 1}`.
///
/// For atom locations that are themselves multiples of `h` this equals the
/// exact supremum: some optimal vertex of the LP has every `f` value of
/// the form `±1 + (sum of consecutive gaps)`, which lies on the lattice.
pub fn lattice_dudley(mu: &[(f64, f64)], nu: &[(f64, f64)], h: f64) -> f64 {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for &(x, w) in mu {
        pts.push((x, w));
    }
    for &(x, w) in nu {
        pts.push((x, -w));
    }
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (x, w) in pts {
        match merged.last_mut() {
            Some(last) if last.0 == x => last.1 += w,
            _ => merged.push((x, w)),
        }
    }

    let levels = (2.0 / h).round() as usize + 1;
    let value = |j: usize| -1.0 + j as f64 * h;
    let mut dp: Vec<f64> = (0..levels).map(|j| merged[0].1 * value(j)).collect();
    for i in 1..merged.len() {
        let gap = merged[i].0 - merged[i - 1].0;
        let reach = ((gap / h) * (1.0 + 1e-12)).floor() as isize;
        let mut next = vec![f64::NEG_INFINITY; levels];
        for j in 0..levels as isize {
            let lo = (j - reach).max(0) as usize;
            let hi = ((j + reach).min(levels as isize - 1)) as usize;
            let mut best = f64::NEG_INFINITY;
            for v in &dp[lo..=hi] {
                best = best.max(*v);
            }
            next[j as usize] = best + merged[i].1 * value(j as usize);
        }
        dp = next;
    }
    dp.into_iter().fold(0.0, f64::max)
}

/// The summary record with its timing line removed, for byte comparisons.
pub fn summary_without_elapsed(summary: &str) -> String {
    summary
        .lines()
        .filter(|l| !l.starts_with("elapsed_ms="))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Deterministic xorshift-style generator so oracle inputs never depend on
/// crate RNG choices.
pub struct TinyRng(pub u64);

impl TinyRng {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
