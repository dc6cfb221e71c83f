//! Three evaluators of the rank-one spherical integral
//! `I_N^β(θ, B) = ∫ exp(Nθ·(UBU*)₁₁) dm_N^β(U)`.
//!
//! * [`mc_oracle`]: the exact Monte Carlo representation. The first column
//!   of a Haar matrix is a normalized Gaussian vector, so
//!   `I_N = E[exp(Nθ Σ λ_i u_i)]` with `u` the normalized squared-Gaussian
//!   weights (real squares for β = 1, squared moduli of complex Gaussians
//!   for β = 2). Slow, unbiased, with a jackknife error bar; this is the
//!   ground truth everything else is compared against.
//! * [`log_spherical_finite_n`]: the finite-N Laplace asymptotic
//!   `(1/N)log I_N ≈ θ·v_N − (β/2N) Σ log(1 + (2θ/β)(v_N − λ_i))`
//!   driven by the fixed-point root `v_N` of [`solve_fixed_point`].
//! * [`i_limit`]: the N→∞ limit `I_μ^β(x, θ)` for a limiting spectral law
//!   `μ` and top eigenvalue `x`, with its two-branch `v(x, θ)`.
//!
//! The fixed-point equation ties all three together: with `w = v + β/(2θ)`,
//!
//! ```text
//! (β/(2θ)) · (1/N) Σ_i 1/(w − λ_i) = 1,        w > λ₁,
//! ```
//!
//! i.e. `H_ν(w) = 2θ/β` for the empirical measure `ν`, the same Hilbert
//! transform geometry that drives the limit's branch test.

use crate::measures::SpectralLaw;
use crate::root::decreasing_root;
use crate::{Beta, Error, Result};
use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Samples per Monte Carlo block. A fixed constant (never derived from the
/// thread count) so the block decomposition, and therefore the output bits,
/// are identical no matter how the blocks are scheduled.
const MC_BLOCK: usize = 8192;

/// Parameters of a spherical integral: the pull `θ > 0` and the ensemble
/// index `β`.
#[derive(Debug, Clone, Copy)]
pub struct SphericalParams {
    theta: f64,
    beta: Beta,
}

impl SphericalParams {
    /// # Errors
    /// [`Error::InvalidParameter`] unless `theta` is finite and positive.
    pub fn new(beta: Beta, theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be finite and positive, got {theta}"
            )));
        }
        Ok(Self { theta, beta })
    }

    /// The pull θ.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The ensemble index.
    pub fn beta(&self) -> Beta {
        self.beta
    }

    /// The recurring shift `β/(2θ)`.
    pub fn shift(&self) -> f64 {
        self.beta.value() / (2.0 * self.theta)
    }
}

/// Root of the finite-N fixed-point equation, with diagnostics.
///
/// Invariants (which are also theorems about the equation): `w > λ₁`
/// strictly, `v ≤ λ₁`, and `w − λ_i ≥ β/(2θN)` for every `i`.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointSolution {
    /// The root `v_N`.
    pub v: f64,
    /// The shifted root `w = v + β/(2θ)`, strictly above the top eigenvalue.
    pub w: f64,
    /// `(β/(2θ))·(1/N) Σ 1/(w−λ_i) − 1` at the returned root.
    pub residual: f64,
    /// Iterations spent by the Newton-bisection hybrid.
    pub iterations: usize,
}

fn validate_eigs(eigs: &[f64]) -> Result<(f64, f64)> {
    if eigs.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in eigs {
        if !x.is_finite() {
            return Err(Error::NonFinite {
                context: "eigenvalue list",
            });
        }
        lo = lo.min(x);
        hi = hi.max(x);
    }
    Ok((lo, hi))
}

/// Solve `(β/(2θ))·(1/N) Σ 1/(v + β/(2θ) − λ_i) = 1` for the unique root
/// `v` with `v + β/(2θ) > λ₁`.
///
/// The left side, as a function of `w = v + β/(2θ)`, decreases from `+∞`
/// at the top eigenvalue to 0, so the root exists and is unique. The
/// bracket starts at a relative offset above `λ₁` (shrunk geometrically if
/// the root is closer than that) and at `λ₁ + β/(2θ) + spread` on the
/// right, then a safeguarded Newton iteration runs to float resolution.
///
/// The residual is accumulated as `Σ β/(2θ(w−λ_i)) − N`, each summand
/// exactly 1 when `w − λ_i` equals the shift, so constant spectra resolve
/// to the exact root: all-zero eigenvalues give `v = 0` with no rounding.
///
/// # Errors
/// Empty or non-finite input; [`Error::RootFinding`] if the iteration
/// stalls (not observed on finite input).
pub fn solve_fixed_point(eigs: &[f64], p: &SphericalParams) -> Result<FixedPointSolution> {
    let (lam_min, lam1) = validate_eigs(eigs)?;
    let n = eigs.len() as f64;
    let b = p.shift();

    let g = |w: f64| {
        let mut acc = 0.0;
        for &lam in eigs {
            acc += b / (w - lam);
        }
        acc - n
    };
    let dg = |w: f64| {
        let mut acc = 0.0;
        for &lam in eigs {
            let d = w - lam;
            acc += b / (d * d);
        }
        -acc
    };

    // Left end: strictly above the top eigenvalue by a relative offset,
    // shrunk toward it if the root is closer (Fact: the root keeps
    // w − λ₁ ≥ β/(2θN), so the shrink terminates).
    let mut offset = lam1.abs() * 1e-9 + 1e-12;
    let mut shrink = 0;
    while g(lam1 + offset) <= 0.0 {
        offset *= 0.25;
        shrink += 1;
        if shrink > 600 || offset == 0.0 {
            return Err(Error::RootFinding(format!(
                "cannot bracket fixed point above lambda_1 = {lam1}"
            )));
        }
    }
    let lo = lam1 + offset;

    // Right end: w = λ₁ + β/(2θ) + spread has g ≤ 0 (each summand is at
    // most 2θ/β there); widen for pure rounding noise if needed.
    let spread = lam1 - lam_min;
    let mut hi = lam1 + b + spread;
    let mut grow = 0;
    while g(hi) > 0.0 {
        hi += b + spread + 1.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::RootFinding(format!(
                "cannot bracket fixed point below w = {hi}"
            )));
        }
    }

    let sol = decreasing_root(g, dg, lo, hi, 0.0, 250)?;
    Ok(FixedPointSolution {
        v: sol.root - b,
        w: sol.root,
        residual: sol.residual / n,
        iterations: sol.iterations,
    })
}

/// The finite-N Laplace asymptotic of `(1/N) log I_N^β(θ, B)`:
/// `θ·v_N − (β/(2N)) Σ log(1 + (2θ/β)(v_N − λ_i))`.
///
/// The log arguments are evaluated as `(2θ/β)(w − λ_i)`, which is the same
/// number without cancellation and is strictly positive because `w > λ₁`.
///
/// # Errors
/// Propagates [`solve_fixed_point`] errors.
pub fn log_spherical_finite_n(eigs: &[f64], p: &SphericalParams) -> Result<f64> {
    let sol = solve_fixed_point(eigs, p)?;
    let b = p.shift();
    let n = eigs.len() as f64;
    let mut log_sum = 0.0;
    for &lam in eigs {
        log_sum += ((sol.w - lam) / b).ln();
    }
    Ok(p.theta * sol.v - p.beta.value() / (2.0 * n) * log_sum)
}

/// Monte Carlo estimate of `(1/N) log I_N`, with a jackknife standard
/// error of the log-mean.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    /// `(1/N) log` of the empirical mean of `exp(Nθ Σ λ_i u_i)`.
    pub mean_log: f64,
    /// Leave-one-out jackknife standard error of `mean_log`.
    pub std_err: f64,
}

/// Monte Carlo oracle for the spherical integral.
///
/// Draws `samples` normalized squared-Gaussian weight vectors (real for
/// β = 1, complex moduli for β = 2), accumulates the exponents
/// `Nθ·Σλ_i u_i`, and returns the shifted log-sum-exp mean. Deterministic
/// given `seed`: samples are generated in fixed-size blocks, each from its
/// own counter-derived ChaCha stream, and reduced in block order, so the
/// result is bit-identical no matter how many threads run the blocks.
///
/// # Arguments
/// * `samples` - at least 10³ (the jackknife needs a real sample size).
/// * `seed` - master seed; block `j` uses stream `j` of this seed.
///
/// # Errors
/// [`Error::ExponentOverflow`] when `N·θ·max|λ| > 50` (the exponent would
/// drown the float range), [`Error::InvalidParameter`] for tiny sample
/// counts, plus input validation.
pub fn mc_oracle(eigs: &[f64], p: &SphericalParams, samples: usize, seed: u64) -> Result<McEstimate> {
    let (lam_min, lam1) = validate_eigs(eigs)?;
    if samples < 1000 {
        return Err(Error::InvalidParameter(format!(
            "mc_oracle needs at least 1000 samples, got {samples}"
        )));
    }
    let n = eigs.len();
    let bound = n as f64 * p.theta * lam_min.abs().max(lam1.abs());
    if bound > 50.0 {
        return Err(Error::ExponentOverflow { bound });
    }

    let scale = n as f64 * p.theta;
    let blocks = samples.div_ceil(MC_BLOCK);
    let exponents: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(block as u64);
            let len = MC_BLOCK.min(samples - block * MC_BLOCK);
            let normal = StandardNormal;
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                let mut num = 0.0;
                let mut den = 0.0;
                match p.beta {
                    Beta::One => {
                        for &lam in eigs {
                            let g: f64 = normal.sample(&mut rng);
                            let q = g * g;
                            num += lam * q;
                            den += q;
                        }
                    }
                    Beta::Two => {
                        for &lam in eigs {
                            let re: f64 = normal.sample(&mut rng);
                            let im: f64 = normal.sample(&mut rng);
                            let q = re * re + im * im;
                            num += lam * q;
                            den += q;
                        }
                    }
                }
                out.push(scale * num / den);
            }
            out
        })
        .collect();

    // Shifted log-sum-exp over all samples, in fixed order.
    let max_exp = exponents
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let mut total = 0.0;
    for block in &exponents {
        for &x in block {
            total += (x - max_exp).exp();
        }
    }
    let s = samples as f64;
    let mean_log = (max_exp + (total / s).ln()) / n as f64;

    // Leave-one-out jackknife of the log-mean, accumulated with Welford so
    // the nearly identical replicates do not cancel catastrophically.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut count = 0.0;
    for block in &exponents {
        for &x in block {
            let loo = (max_exp + ((total - (x - max_exp).exp()) / (s - 1.0)).ln()) / n as f64;
            count += 1.0;
            let delta = loo - mean;
            mean += delta / count;
            m2 += delta * (loo - mean);
        }
    }
    let std_err = ((s - 1.0) / s * m2).sqrt();

    Ok(McEstimate { mean_log, std_err })
}

/// One evaluation of the N→∞ limit, with the branch diagnostics the CLI
/// reports.
#[derive(Debug, Clone, Copy)]
pub struct LimitEvaluation {
    /// `I_μ^β(x, θ)`.
    pub value: f64,
    /// The optimizer `v(x, θ)`.
    pub v: f64,
    /// `w = v + β/(2θ)`.
    pub w: f64,
    /// 1 when `H_μ(x) ≥ 2θ/β` (the transform branch), 2 otherwise.
    pub branch: u8,
}

/// The N→∞ limit `I_μ^β(x, θ)` with diagnostics.
///
/// Evaluates the branch test `H_μ(x) ≥ 2θ/β` (limit value when `x` sits at
/// the edge; ties take branch 1, where the two expressions for `v`
/// coincide), picks
///
/// ```text
/// v = R_μ(2θ/β)      (branch 1)        v = x − β/(2θ)   (branch 2)
/// ```
///
/// and returns `θv − (β/2) ∫ log(1 + (2θ/β)(v − λ)) dμ(λ)`, integrating by
/// quadrature for the semicircle and by atom sum for discrete measures.
///
/// # Errors
/// `x` below the top of the support; propagated transform errors.
pub fn i_limit_detailed<L: SpectralLaw>(
    mu: &L,
    x: f64,
    p: &SphericalParams,
) -> Result<LimitEvaluation> {
    let edge = mu.edge();
    if !x.is_finite() {
        return Err(Error::NonFinite {
            context: "i_limit evaluation point",
        });
    }
    if x < edge {
        return Err(Error::BelowEdge { x, edge });
    }
    let b = p.shift();
    let target = 1.0 / b; // 2θ/β
    let h = mu.hilbert_at_or_above_edge(x)?;
    let (v, w, branch) = if h >= target {
        let w = mu.g_inverse(target)?;
        (w - b, w, 1u8)
    } else {
        (x - b, x, 2u8)
    };
    // ∫ log(1 + (2θ/β)(v−λ)) dμ = log(2θ/β) + ∫ log(w−λ) dμ.
    let log_term = target.ln() + mu.log_moment(w)?;
    let value = p.theta * v - p.beta.value() / 2.0 * log_term;
    Ok(LimitEvaluation {
        value,
        v,
        w,
        branch,
    })
}

/// The N→∞ limit `I_μ^β(x, θ)`; see [`i_limit_detailed`].
pub fn i_limit<L: SpectralLaw>(mu: &L, x: f64, p: &SphericalParams) -> Result<f64> {
    Ok(i_limit_detailed(mu, x, p)?.value)
}
