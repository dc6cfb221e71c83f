//! Rate-function calculus for the top eigenvalue of the deformed ensemble.
//!
//! The top eigenvalue of `W + θe₁e₁ᵀ` satisfies a large deviation principle
//! at speed N with good rate function `K_θ^β = F_θ^β − inf F_θ^β`, where on
//! `[√(2β), ∞)`
//!
//! ```text
//! F_θ^β(x) = J_β(x) − I_{σ_β}^β(x, θ),
//! J_β(x)   = ∫_{√(2β)}^x √(z² − 2β) dz,
//! ```
//!
//! `I` being the spherical-integral limit of [`crate::spherical::i_limit`];
//! below the bulk edge both `F` and `K` are `+∞` (pushing the top eigenvalue
//! under the bulk is an event of speed N², invisible at speed N). The same
//! `F` admits an equivalent potential-theoretic form through
//! `Φ_β(x, μ) = β∫log|x−y|dμ(y) − x²/2`; both are implemented and the tests
//! pin their agreement.
//!
//! The almost-sure limit of the top eigenvalue, where `K` vanishes, follows
//! the BBP dichotomy: the bulk edge `√(2β)` for `θ ≤ θ_c = √(β/2)`, the
//! detached point `θ + β/(2θ)` beyond.

use crate::measures::{SemicircleLaw, SpectralLaw};
use crate::spherical::{i_limit_detailed, SphericalParams};
use crate::{Beta, Error, Result};

/// The integrated edge density `J_β(x) = ∫_{√(2β)}^x √(z² − 2β) dz` in
/// closed form:
///
/// ```text
/// J_β(x) = x√(x² − 2β)/2 − β·log((x + √(x² − 2β))/√(2β)).
/// ```
///
/// `J` vanishes at the edge and grows like `x²/2` at infinity; its
/// derivative is `√(x² − 2β)`.
///
/// # Errors
/// [`Error::BelowEdge`] for `x < √(2β)`, [`Error::InvalidParameter`] for a
/// non-positive `beta`.
pub fn j_integral(beta: f64, x: f64) -> Result<f64> {
    let law = SemicircleLaw::new(beta)?;
    let edge = law.edge();
    if !x.is_finite() {
        return Err(Error::NonFinite {
            context: "j_integral argument",
        });
    }
    if x < edge {
        return Err(Error::BelowEdge { x, edge });
    }
    // The factored discriminant keeps full precision near the edge and
    // makes J(edge) an exact zero (x*x - 2β rounds away from 0 there).
    let s = ((x - edge) * (x + edge)).max(0.0).sqrt();
    Ok(x * s / 2.0 - beta * ((x + s) / edge).ln())
}

/// The critical pull `θ_c = √(β/2)` separating the sticking and detached
/// phases of the top eigenvalue.
pub fn theta_c(beta: Beta) -> f64 {
    (beta.value() / 2.0).sqrt()
}

/// The potential-theoretic functional `Φ_β(x, μ) = β∫log|x−y|dμ(y) − x²/2`.
///
/// For the semicircle the log potential is evaluated through its closed
/// form; discrete measures sum over atoms.
///
/// # Errors
/// As for the underlying log potential: `x` on an atom of a discrete `μ`,
/// or below the edge of a semicircle.
pub fn phi<L: SpectralLaw>(beta: f64, x: f64, mu: &L) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "phi needs positive beta, got {beta}"
        )));
    }
    Ok(beta * mu.log_potential_at(x)? - x * x / 2.0)
}

/// Ensemble index and pull of a rate-function family.
#[derive(Debug, Clone, Copy)]
pub struct RateParams {
    beta: Beta,
    theta: f64,
}

impl RateParams {
    /// # Errors
    /// [`Error::InvalidParameter`] unless `theta` is finite and positive.
    pub fn new(beta: Beta, theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be finite and positive, got {theta}"
            )));
        }
        Ok(Self { beta, theta })
    }

    /// The ensemble index.
    pub fn beta(&self) -> Beta {
        self.beta
    }

    /// The pull θ.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The bulk edge `√(2β)`.
    pub fn edge(&self) -> f64 {
        (2.0 * self.beta.value()).sqrt()
    }

    /// The critical pull `√(β/2)`.
    pub fn theta_c(&self) -> f64 {
        theta_c(self.beta)
    }

    /// The branch point `θ + β/(2θ)`, which is `≥ √(2β)` with equality
    /// exactly at `θ = θ_c`.
    pub fn x_b(&self) -> f64 {
        self.theta + self.beta.value() / (2.0 * self.theta)
    }

    /// Almost-sure limit of the top eigenvalue: the bulk edge for
    /// `θ ≤ θ_c`, the detached point `θ + β/(2θ)` beyond. Continuous in θ
    /// (both expressions meet at `√(2β)` when `θ = θ_c`).
    pub fn as_limit(&self) -> f64 {
        if self.theta <= self.theta_c() {
            self.edge()
        } else {
            self.x_b()
        }
    }

    /// Which branch of the spherical-limit variational problem governs at
    /// `x`: 1 where `H_{σ_β}(x) ≥ 2θ/β` (ties included), 2 elsewhere.
    /// Points below the edge report the branch that rules at the edge.
    pub fn branch(&self, x: f64) -> u8 {
        let law = SemicircleLaw::new(self.beta.value()).expect("beta is 1 or 2");
        let clamped = x.max(law.edge());
        let h = law
            .hilbert_at_or_above_edge(clamped)
            .expect("clamped to the edge");
        if h >= 2.0 * self.theta / self.beta.value() {
            1
        } else {
            2
        }
    }

    /// The evaluated profile: almost-sure limit, `inf F`, and `F`/`K`
    /// evaluator handles.
    pub fn profile(&self) -> RateProfile {
        RateProfile {
            params: *self,
            x_star: self.as_limit(),
            inf_f: normalization_log_ratio(self),
        }
    }

    fn spherical(&self) -> SphericalParams {
        SphericalParams::new(self.beta, self.theta).expect("theta validated by RateParams")
    }
}

/// The rate function `F_θ^β` before recentering: `J_β(x) − I_{σ_β}^β(x, θ)`
/// for `x ≥ √(2β)` and `+∞` below. Total on the reals (NaN propagates).
pub fn rate_f(p: &RateParams, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        // J − I grows like x²/4 on the second branch.
        return f64::INFINITY;
    }
    match rate_f_forms(p, x) {
        Ok((h3, phi_form)) => {
            debug_assert!(
                (h3 - phi_form).abs() <= 1e-10 * h3.abs().max(1.0),
                "rate function forms drifted apart: {h3} vs {phi_form}"
            );
            h3
        }
        // Only x below the bulk edge lands here.
        Err(_) => f64::INFINITY,
    }
}

/// Both printed forms of `F` for `x ≥ √(2β)`: the `J − I` form and the
/// constant-minus-`Φ`-minus-`I` form. They are equal analytically; the
/// pair is exposed so tests can pin the numerical agreement.
///
/// # Errors
/// [`Error::BelowEdge`] under the bulk edge.
pub fn rate_f_forms(p: &RateParams, x: f64) -> Result<(f64, f64)> {
    let beta = p.beta.value();
    let law = SemicircleLaw::new(beta)?;
    let i = i_limit_detailed(&law, x, &p.spherical())?.value;
    let h3 = j_integral(beta, x)? - i;
    let constant = -beta / 2.0 + (beta / 2.0) * (beta / 2.0).ln();
    let phi_form = constant - phi(beta, x, &law)? - i;
    Ok((h3, phi_form))
}

/// The recentered rate function `K_θ^β(x) = F_θ^β(x) − inf F_θ^β`,
/// vanishing at the almost-sure limit and `+∞` below the bulk edge.
pub fn rate_k(p: &RateParams, x: f64) -> f64 {
    rate_f(p, x) - normalization_log_ratio(p)
}

/// `inf_x F_θ^β(x)`, the limiting log-ratio of the deformed and undeformed
/// normalization constants: `−θ²/2` in the sticking phase, `F(θ + β/(2θ))`
/// in the detached phase.
pub fn normalization_log_ratio(p: &RateParams) -> f64 {
    if p.theta <= p.theta_c() {
        -p.theta * p.theta / 2.0
    } else {
        rate_f(p, p.x_b())
    }
}

/// A rate-function family with its minimizer evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct RateProfile {
    params: RateParams,
    x_star: f64,
    inf_f: f64,
}

impl RateProfile {
    /// Almost-sure limit of the top eigenvalue.
    pub fn x_star(&self) -> f64 {
        self.x_star
    }

    /// `inf_x F(x)`, attained at [`Self::x_star`].
    pub fn inf_f(&self) -> f64 {
        self.inf_f
    }

    /// The uncentered rate function at `x`.
    pub fn f(&self, x: f64) -> f64 {
        rate_f(&self.params, x)
    }

    /// The rate function `K(x) = F(x) − inf F`.
    pub fn k(&self, x: f64) -> f64 {
        self.f(x) - self.inf_f
    }
}
