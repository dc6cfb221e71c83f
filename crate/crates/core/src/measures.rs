//! Spectral measures and their free-probability transforms.
//!
//! Two concrete laws appear throughout the large-deviation analysis: finite
//! weighted atom lists ([`SpectralMeasure`], carrying empirical spectra and
//! discretized laws) and the semicircle family ([`SemicircleLaw`], the bulk
//! limit `σ_β` with density `(1/(βπ))√(2β−t²)` on `[−√(2β), √(2β)]`). Both
//! expose the same transform toolkit through [`SpectralLaw`]:
//!
//! | transform | definition | here |
//! |-----------|------------|------|
//! | Hilbert `H_μ(z)` | `∫ (z−λ)⁻¹ dμ(λ)`, `z` right of the support | [`SpectralMeasure::hilbert_transform`], [`semicircle_hilbert`] |
//! | inverse `G_μ(w)` | functional inverse of `H_μ` | [`SpectralMeasure::g_inverse_numeric`], [`semicircle_g`] |
//! | R-transform | `R_μ(w) = G_μ(w) − 1/w` | [`semicircle_r`], [`SpectralLaw::r_transform`] |
//! | log potential | `∫ log\|x−y\| dμ(y)` | [`SpectralMeasure::log_potential`] |
//!
//! The module also provides the Dudley bounded-Lipschitz distance between
//! finite measures (see [`dudley_distance`]), solved exactly as a
//! path-structured linear program, and the plain-text spectrum file format
//! shared by the CLI subcommands.
//!
//! # The semicircle convention
//!
//! `σ_β` is normalized so that the eigenvalue density of the Gaussian
//! ensemble with weight `e^{−(N/2)Σx_i²}` has bulk support `[−√(2β), √(2β)]`.
//! Closed forms used below, all for `x ≥ √(2β)`:
//!
//! ```text
//! H_{σβ}(x) = (x − √(x²−2β))/β        range (0, √(2/β)]
//! G_{σβ}(w) = (β/2)·w + 1/w           inverse of H on the range
//! R_{σβ}(w) = (β/2)·w
//! ```

use crate::quad;
use crate::root::decreasing_root;
use crate::{Error, Result};

mod dudley;

pub use dudley::dudley_distance;

const PI: f64 = std::f64::consts::PI;

/// Relative tolerance under which two atom locations are considered the
/// same atom and merged. Keeps the log potential and the Hilbert transform
/// away from spurious near-singularities.
const MERGE_TOL: f64 = 1e-12;

/// Absolute tolerance for semicircle quadrature. Sits well below every
/// downstream tolerance in the crate (the loosest consumer asks for 1e-10).
const SEMICIRCLE_QUAD_TOL: f64 = 1e-12;

/// A common interface over the two spectral laws of the crate, as needed by
/// the N→∞ spherical integral and the rate function: support edge, Hilbert
/// transform and its inverse, and the two logarithmic integrals.
pub trait SpectralLaw {
    /// Right edge of the support.
    fn edge(&self) -> f64;

    /// `H_μ(x)` for `x > edge`; at `x == edge` the limit value from the
    /// right, which is `+∞` for a discrete measure with an atom at the edge
    /// and `√(2/β)` for the semicircle.
    fn hilbert_at_or_above_edge(&self, x: f64) -> Result<f64>;

    /// `G_μ(w)`: the point `z > edge` with `H_μ(z) = w`.
    fn g_inverse(&self, w: f64) -> Result<f64>;

    /// `R_μ(w) = G_μ(w) − 1/w`.
    fn r_transform(&self, w: f64) -> Result<f64> {
        Ok(self.g_inverse(w)? - 1.0 / w)
    }

    /// `∫ log(s − λ) dμ(λ)` for `s ≥ edge` (strictly above the top atom in
    /// the discrete case).
    fn log_moment(&self, s: f64) -> Result<f64>;

    /// `∫ log|x − λ| dμ(λ)`.
    fn log_potential_at(&self, x: f64) -> Result<f64>;
}

// ---------------------------------------------------------------------------
// SpectralMeasure
// ---------------------------------------------------------------------------

/// A probability measure with finitely many atoms.
///
/// Atoms are kept sorted by location with strictly increasing positions;
/// constructors merge duplicates (within [`MERGE_TOL`] relative) by adding
/// their weights, drop zero-weight entries, and renormalize the total mass
/// to one. Support bounds are O(1) lookups on the sorted list.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    atoms: Vec<(f64, f64)>,
}

impl SpectralMeasure {
    /// Build from (location, weight) pairs.
    ///
    /// Weights must be finite and nonnegative with positive total; they are
    /// rescaled to sum to one. Locations within `1e-12` relative are merged.
    ///
    /// # Errors
    /// [`Error::EmptySpectrum`] when no atom has positive weight,
    /// [`Error::NonFinite`] / [`Error::InvalidParameter`] on bad input.
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        for &(x, w) in &pairs {
            if !x.is_finite() || !w.is_finite() {
                return Err(Error::NonFinite {
                    context: "spectral measure atoms",
                });
            }
            if w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "negative atom weight {w} at location {x}"
                )));
            }
        }
        let mut sorted: Vec<(f64, f64)> = pairs.into_iter().filter(|&(_, w)| w > 0.0).collect();
        if sorted.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        for (x, w) in sorted {
            match atoms.last_mut() {
                Some(last) if x - last.0 <= MERGE_TOL * last.0.abs().max(x.abs()).max(1.0) => {
                    // Same atom up to rounding: accumulate the weight at the
                    // first-seen location.
                    last.1 += w;
                }
                _ => atoms.push((x, w)),
            }
        }
        let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "total mass {total} is not positive and finite"
            )));
        }
        for atom in &mut atoms {
            atom.1 /= total;
        }
        Ok(Self { atoms })
    }

    /// The empirical measure of a list of points (uniform weights,
    /// duplicates merged by weight addition).
    pub fn empirical(points: &[f64]) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        Self::new(points.iter().map(|&x| (x, w)).collect())
    }

    /// The sorted `(location, weight)` pairs.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Number of distinct atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Always false: construction rejects empty measures.
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Leftmost atom location.
    pub fn min_support(&self) -> f64 {
        self.atoms[0].0
    }

    /// Rightmost atom location.
    pub fn max_support(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].0
    }

    /// The Hilbert transform `H_μ(z) = Σ_i w_i/(z−λ_i)` for `z` strictly
    /// outside the convex hull of the support.
    ///
    /// Strictly decreasing in `z` to the right of the support and tending
    /// to zero as `z → +∞`.
    ///
    /// # Errors
    /// [`Error::InsideSupport`] identifying the support interval when
    /// `min ≤ z ≤ max`.
    pub fn hilbert_transform(&self, z: f64) -> Result<f64> {
        let (lo, hi) = (self.min_support(), self.max_support());
        if z >= lo && z <= hi {
            return Err(Error::InsideSupport { z, lo, hi });
        }
        Ok(self.atoms.iter().map(|&(x, w)| w / (z - x)).sum())
    }

    /// Numeric inverse of the Hilbert transform: the `z > max_support` with
    /// `|H_μ(z) − w| ≤ 1e−12·max(1, w)`.
    ///
    /// For a discrete measure `H` blows up at the top atom, so every `w > 0`
    /// has a solution; the bracket is grown/shrunk geometrically around the
    /// top atom before a Newton-bisection hybrid finishes the job.
    ///
    /// # Errors
    /// [`Error::InvalidParameter`] for `w ≤ 0` or non-finite `w`.
    pub fn g_inverse_numeric(&self, w: f64) -> Result<f64> {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Hilbert inverse needs w > 0, got {w}"
            )));
        }
        let top = self.max_support();
        let scale = (self.max_support() - self.min_support()).max(1.0);
        let resid_tol = 1e-12 * w.max(1.0);

        // H(top + t) decreases from +inf to 0 as t goes from 0 to inf.
        let h = |z: f64| self.atoms.iter().map(|&(x, wt)| wt / (z - x)).sum::<f64>();
        let mut t_lo = scale;
        let mut shrink = 0;
        while h(top + t_lo) < w {
            t_lo *= 0.5;
            shrink += 1;
            if shrink > 2000 {
                return Err(Error::RootFinding(format!(
                    "cannot bracket Hilbert inverse at w = {w}"
                )));
            }
        }
        let mut t_hi = t_lo.max(scale);
        let mut grow = 0;
        while h(top + t_hi) > w {
            t_hi *= 2.0;
            grow += 1;
            if grow > 2000 {
                return Err(Error::RootFinding(format!(
                    "cannot bracket Hilbert inverse at w = {w}"
                )));
            }
        }

        let f = |z: f64| h(z) - w;
        let df = |z: f64| {
            -self
                .atoms
                .iter()
                .map(|&(x, wt)| wt / ((z - x) * (z - x)))
                .sum::<f64>()
        };
        let sol = decreasing_root(f, df, top + t_lo, top + t_hi, resid_tol, 200)?;
        Ok(sol.root)
    }

    /// The logarithmic potential `∫ log|x−y| dμ(y)`.
    ///
    /// # Errors
    /// [`Error::AtomCollision`] when `x` equals an atom location exactly
    /// (the integrand is −∞ there for a discrete measure).
    pub fn log_potential(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite {
                context: "log potential argument",
            });
        }
        let mut acc = 0.0;
        for &(loc, w) in &self.atoms {
            if x == loc {
                return Err(Error::AtomCollision { x });
            }
            acc += w * (x - loc).abs().ln();
        }
        Ok(acc)
    }
}

impl SpectralLaw for SpectralMeasure {
    fn edge(&self) -> f64 {
        self.max_support()
    }

    fn hilbert_at_or_above_edge(&self, x: f64) -> Result<f64> {
        let edge = self.edge();
        if x < edge {
            return Err(Error::BelowEdge { x, edge });
        }
        if x == edge {
            // Atom at the edge: the one-sided limit diverges.
            return Ok(f64::INFINITY);
        }
        self.hilbert_transform(x)
    }

    fn g_inverse(&self, w: f64) -> Result<f64> {
        self.g_inverse_numeric(w)
    }

    fn log_moment(&self, s: f64) -> Result<f64> {
        if s <= self.max_support() {
            return Err(Error::InvalidParameter(format!(
                "log moment needs s above the top atom {}, got {s}",
                self.max_support()
            )));
        }
        Ok(self.atoms.iter().map(|&(x, w)| w * (s - x).ln()).sum())
    }

    fn log_potential_at(&self, x: f64) -> Result<f64> {
        self.log_potential(x)
    }
}

// ---------------------------------------------------------------------------
// SemicircleLaw
// ---------------------------------------------------------------------------

/// The semicircle law `σ_β` with density `(1/(βπ))√(2β−t²)` on
/// `[−√(2β), √(2β)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemicircleLaw {
    beta: f64,
}

impl SemicircleLaw {
    /// # Errors
    /// [`Error::InvalidParameter`] unless `beta` is finite and positive.
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "semicircle beta must be positive, got {beta}"
            )));
        }
        Ok(Self { beta })
    }

    /// The parameter β.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The support half-width `√(2β)`.
    pub fn edge(&self) -> f64 {
        (2.0 * self.beta).sqrt()
    }

    /// Density at `t` (zero outside the support).
    pub fn density(&self, t: f64) -> f64 {
        let disc = 2.0 * self.beta - t * t;
        if disc <= 0.0 {
            0.0
        } else {
            disc.sqrt() / (self.beta * PI)
        }
    }

    /// Distribution function `σ_β((−∞, t])`, in closed form.
    pub fn cdf(&self, t: f64) -> f64 {
        let a = self.edge();
        if t <= -a {
            return 0.0;
        }
        if t >= a {
            return 1.0;
        }
        let disc = (a * a - t * t).max(0.0).sqrt();
        (t * disc + a * a * ((t / a).asin() + PI / 2.0)) / (2.0 * self.beta * PI)
    }

    /// Quantile function: the `t` with `cdf(t) = q`, for `q ∈ (0, 1)`.
    ///
    /// # Errors
    /// [`Error::InvalidParameter`] outside the open unit interval.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile needs q in (0,1), got {q}"
            )));
        }
        let a = self.edge();
        // cdf − q is increasing; feed the decreasing-root helper its negation.
        let sol = decreasing_root(
            |t| q - self.cdf(t),
            |t| -self.density(t),
            -a,
            a,
            1e-15,
            300,
        )?;
        Ok(sol.root)
    }

    /// Equal-mass discretization: `m` atoms of weight `1/m`, atom `k` at
    /// the `(k+½)/m` quantile. This is the scheme the experiments use; it
    /// keeps the Dudley distance to `σ_β` uniformly small and the total
    /// mass exactly one.
    pub fn discretize(&self, m: usize) -> Result<SpectralMeasure> {
        if m == 0 {
            return Err(Error::EmptySpectrum);
        }
        let w = 1.0 / m as f64;
        let mut pairs = Vec::with_capacity(m);
        for k in 0..m {
            let q = (k as f64 + 0.5) / m as f64;
            pairs.push((self.quantile(q)?, w));
        }
        SpectralMeasure::new(pairs)
    }

    /// `∫ f dσ_β` by adaptive quadrature.
    ///
    /// Uses the substitution `t = √(2β)·sin φ`, which absorbs the square
    /// root of the density and leaves a smooth integrand:
    /// `(2β/(βπ)) ∫ f(√(2β) sin φ) cos²φ dφ` over `[−π/2, π/2]`.
    pub fn expectation<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let a = self.edge();
        let scale = a * a / (self.beta * PI);
        let q = quad::adaptive(
            |phi| {
                let c = phi.cos();
                f(a * phi.sin()) * c * c
            },
            -PI / 2.0,
            PI / 2.0,
            SEMICIRCLE_QUAD_TOL / scale,
        )?;
        Ok(scale * q.value)
    }
}

impl SpectralLaw for SemicircleLaw {
    fn edge(&self) -> f64 {
        SemicircleLaw::edge(self)
    }

    fn hilbert_at_or_above_edge(&self, x: f64) -> Result<f64> {
        let edge = self.edge();
        if x < edge {
            return Err(Error::BelowEdge { x, edge });
        }
        // The closed form is continuous down to the edge, where it takes
        // the limit value sqrt(2/beta). The factored discriminant is exact
        // at the edge itself.
        Ok((x - ((x - edge) * (x + edge)).max(0.0).sqrt()) / self.beta)
    }

    fn g_inverse(&self, w: f64) -> Result<f64> {
        semicircle_g(self.beta, w)
    }

    fn log_moment(&self, s: f64) -> Result<f64> {
        // Above the edge s − t > 0 on the support, so the log moment and
        // the log potential coincide, and the closed form applies.
        self.log_potential_at(s)
    }

    fn log_potential_at(&self, x: f64) -> Result<f64> {
        let edge = self.edge();
        if x < edge {
            return Err(Error::BelowEdge { x, edge });
        }
        // Closed form via the J-integral rearrangement:
        //   β ∫ log|x−y| dσ_β(y) = −J_β(x) + x²/2 − β/2 + (β/2) log(β/2).
        let j = crate::ratefn::j_integral(self.beta, x)?;
        Ok((-j + x * x / 2.0 - self.beta / 2.0 + (self.beta / 2.0) * (self.beta / 2.0).ln())
            / self.beta)
    }
}

// ---------------------------------------------------------------------------
// Semicircle closed forms (free functions, mirroring the formulas)
// ---------------------------------------------------------------------------

/// `H_{σβ}(x) = (x − √(x²−2β))/β` for `x > √(2β)`.
///
/// Takes values in `(0, √(2/β))`, decreasing in `x`.
///
/// # Errors
/// [`Error::BelowEdge`] for `x ≤ √(2β)` (the transform is only defined
/// strictly outside the support).
pub fn semicircle_hilbert(beta: f64, x: f64) -> Result<f64> {
    let law = SemicircleLaw::new(beta)?;
    let edge = law.edge();
    if x <= edge {
        return Err(Error::BelowEdge { x, edge });
    }
    Ok((x - ((x - edge) * (x + edge)).sqrt()) / beta)
}

/// `G_{σβ}(w) = (β/2)·w + 1/w`, the functional inverse of `H_{σβ}` on its
/// range `(0, √(2/β)]`.
///
/// # Errors
/// [`Error::InvalidParameter`] for `w ≤ 0`.
pub fn semicircle_g(beta: f64, w: f64) -> Result<f64> {
    SemicircleLaw::new(beta)?;
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "semicircle G needs w > 0, got {w}"
        )));
    }
    // The sum is at least √(2β) for every positive w (equality at √(2/β)),
    // but near the minimum it can round one ulp under the edge, which would
    // put the result outside the domain of every edge-guarded consumer.
    Ok((beta / 2.0 * w + 1.0 / w).max((2.0 * beta).sqrt()))
}

/// `R_{σβ}(w) = (β/2)·w`, the R-transform (analytic at 0).
pub fn semicircle_r(beta: f64, w: f64) -> Result<f64> {
    SemicircleLaw::new(beta)?;
    if !w.is_finite() {
        return Err(Error::NonFinite {
            context: "semicircle R argument",
        });
    }
    Ok(beta / 2.0 * w)
}

// ---------------------------------------------------------------------------
// Spectrum files
// ---------------------------------------------------------------------------
//
// Plain text, one atom per line: "location" or "location weight", with '#'
// starting a comment and blank lines ignored. A file must use the same
// column count throughout; one-column files get uniform weights.

/// Parse spectrum text into raw (location, optional weight) rows.
fn parse_rows(text: &str) -> Result<Vec<(f64, Option<f64>)>> {
    let mut rows = Vec::new();
    let mut expect_weights: Option<bool> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        if fields.len() > 2 {
            return Err(Error::SpectrumParse {
                line: lineno,
                message: format!("expected 1 or 2 fields, found {}", fields.len()),
            });
        }
        let has_weight = fields.len() == 2;
        match expect_weights {
            None => expect_weights = Some(has_weight),
            Some(expected) if expected != has_weight => {
                return Err(Error::SpectrumParse {
                    line: lineno,
                    message: "mixed one-column and two-column rows".to_string(),
                });
            }
            _ => {}
        }
        let loc: f64 = fields[0].parse().map_err(|_| Error::SpectrumParse {
            line: lineno,
            message: format!("bad location {:?}", fields[0]),
        })?;
        let weight = if has_weight {
            Some(fields[1].parse().map_err(|_| Error::SpectrumParse {
                line: lineno,
                message: format!("bad weight {:?}", fields[1]),
            })?)
        } else {
            None
        };
        rows.push((loc, weight));
    }
    if rows.is_empty() {
        return Err(Error::SpectrumParse {
            line: 0,
            message: "no atoms found".to_string(),
        });
    }
    Ok(rows)
}

/// Parse spectrum text into a [`SpectralMeasure`] (uniform weights when the
/// file has no weight column; explicit weights are renormalized).
pub fn parse_spectrum(text: &str) -> Result<SpectralMeasure> {
    let rows = parse_rows(text)?;
    let uniform = 1.0 / rows.len() as f64;
    SpectralMeasure::new(
        rows.into_iter()
            .map(|(x, w)| (x, w.unwrap_or(uniform)))
            .collect(),
    )
}

/// Parse spectrum text into an eigenvalue *list* (duplicates preserved).
///
/// The finite-N spherical evaluators consume lists, where multiplicity
/// matters and weights have no meaning, so a weight column is rejected
/// unless all weights are exactly equal.
pub fn parse_eigenvalues(text: &str) -> Result<Vec<f64>> {
    let rows = parse_rows(text)?;
    if let Some(&(_, Some(first))) = rows.iter().find(|(_, w)| w.is_some()) {
        if rows.iter().any(|&(_, w)| w != Some(first)) {
            return Err(Error::SpectrumParse {
                line: 0,
                message: "weighted spectrum cannot be read as an eigenvalue list; \
                          use uniform weights or a one-column file"
                    .to_string(),
            });
        }
    }
    let eigs: Vec<f64> = rows.into_iter().map(|(x, _)| x).collect();
    if eigs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            context: "eigenvalue list",
        });
    }
    Ok(eigs)
}

/// Load a spectrum file as a measure. See the module docs for the format.
pub fn read_spectrum(path: &std::path::Path) -> Result<SpectralMeasure> {
    parse_spectrum(&std::fs::read_to_string(path)?)
}

/// Load a spectrum file as an eigenvalue list (duplicates preserved).
pub fn read_eigenvalues(path: &std::path::Path) -> Result<Vec<f64>> {
    parse_eigenvalues(&std::fs::read_to_string(path)?)
}

/// Write a measure in the spectrum file format ("location weight" rows).
pub fn write_spectrum(path: &std::path::Path, mu: &SpectralMeasure) -> Result<()> {
    let mut out = String::new();
    for &(x, w) in mu.atoms() {
        out.push_str(&format!("{x} {w}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}
