//! Sampling of rank-one deformed Gaussian ensembles and an in-house dense
//! symmetric/Hermitian eigensolver.
//!
//! The matrix law is pinned by the eigenvalue density weight
//! `e^{−(N/2)Σx_i²}`, which fixes the entry variances:
//!
//! | β | diagonal | off-diagonal |
//! |---|----------|--------------|
//! | 1 | `N(0, 1/N)` | `N(0, 1/(2N))` |
//! | 2 | real `N(0, 1/N)` | re and im each `N(0, 1/(2N))` |
//!
//! so the bulk converges to the semicircle on `[−√(2β), √(2β)]` and the
//! simulation axis coincides with the rate-function axis. The deformation
//! adds θ to the (0, 0) entry and nothing else.
//!
//! Eigenvalues come from Householder tridiagonalization followed by
//! implicit-shift QL with Wilkinson shifts. The Hermitian case runs a
//! complex Householder pass to a real tridiagonal: a diagonal unitary
//! similarity makes any Hermitian tridiagonal's off-diagonal real, so only
//! the moduli of the complex subdiagonals matter. Everything is dense and
//! single-threaded per matrix; parallelism lives at the replica level,
//! where each replica owns a counter-derived random stream and results are
//! collected in replica order (bit-reproducible for any thread count).

use crate::{Beta, Error, Result};
use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Maximum QL sweeps per eigenvalue before giving up.
const MAX_SWEEPS: usize = 50;

/// Size, ensemble index, pull and master seed of a sampling run.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleConfig {
    n: usize,
    beta: Beta,
    theta: f64,
    seed: u64,
}

impl EnsembleConfig {
    /// # Errors
    /// [`Error::InvalidParameter`] for `n < 2` or a negative or non-finite
    /// `theta` (zero is allowed: the undeformed ensemble).
    pub fn new(n: usize, beta: Beta, theta: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "matrix size must be at least 2, got {n}"
            )));
        }
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be finite and nonnegative, got {theta}"
            )));
        }
        Ok(Self {
            n,
            beta,
            theta,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Dense real symmetric matrix, full row-major storage.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    /// Build from row-major entries.
    ///
    /// # Errors
    /// [`Error::InvalidParameter`] unless the data is exactly symmetric
    /// (bitwise equal across the diagonal) with `n·n` finite entries.
    pub fn from_rows(n: usize, a: Vec<f64>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                a.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if a[i * n + j] != a[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "symmetric matrix entries",
            });
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.a[i * self.n + i]).sum()
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }

    /// Full spectrum, values only.
    ///
    /// # Errors
    /// [`Error::EigenNoConvergence`] if a QL sweep limit is hit (not
    /// expected on finite symmetric input).
    pub fn eigenvalues(&self) -> Result<EigenSample> {
        let mut work = self.a.clone();
        let n = self.n;
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        tridiagonalize_sym(&mut work, n, None);
        read_tridiagonal_sym(&work, n, &mut d, &mut e);
        imtql(&mut d, &mut e, None)?;
        EigenSample::from_unsorted(d)
    }

    /// Full eigendecomposition: ascending eigenvalues and the matching
    /// orthonormal eigenvectors as columns of a row-major matrix.
    ///
    /// # Errors
    /// As for [`Self::eigenvalues`].
    pub fn eigen_pairs(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.n;
        let mut work = self.a.clone();
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            q[i * n + i] = 1.0;
        }
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        tridiagonalize_sym(&mut work, n, Some(&mut q));
        read_tridiagonal_sym(&work, n, &mut d, &mut e);
        imtql(&mut d, &mut e, Some(&mut q))?;

        // Sort ascending, carrying columns along.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
        let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
        let mut vectors = vec![0.0; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                vectors[row * n + new_col] = q[row * n + old_col];
            }
        }
        Ok((values, vectors))
    }
}

/// Dense complex Hermitian matrix, full row-major storage as parallel
/// real/imaginary arrays.
#[derive(Debug, Clone)]
pub struct HermMatrix {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl HermMatrix {
    /// Build from row-major real and imaginary parts.
    ///
    /// # Errors
    /// [`Error::InvalidParameter`] unless `re` is exactly symmetric, `im`
    /// exactly antisymmetric with a zero diagonal, and all entries finite.
    pub fn from_parts(n: usize, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != n * n || im.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for a {n}x{n} matrix",
                n * n
            )));
        }
        for i in 0..n {
            if im[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "Hermitian matrix needs a real diagonal, entry ({i}, {i})"
                )));
            }
            for j in 0..i {
                if re[i * n + j] != re[j * n + i] || im[i * n + j] != -im[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        if re.iter().chain(im.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "Hermitian matrix entries",
            });
        }
        Ok(Self { n, re, im })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry as a `(re, im)` pair.
    pub fn get(&self, i: usize, j: usize) -> (f64, f64) {
        (self.re[i * self.n + j], self.im[i * self.n + j])
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.re[i * self.n + i]).sum()
    }

    /// Squared Frobenius norm, `Σ|a_ij|²`.
    pub fn frobenius_sq(&self) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| r * r + i * i)
            .sum()
    }

    /// Full spectrum, values only.
    ///
    /// # Errors
    /// As for [`SymMatrix::eigenvalues`].
    pub fn eigenvalues(&self) -> Result<EigenSample> {
        let n = self.n;
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        tridiagonalize_herm(&mut re, &mut im, n);
        for i in 0..n {
            d[i] = re[i * n + i];
        }
        for i in 0..n - 1 {
            let (r, m) = (re[(i + 1) * n + i], im[(i + 1) * n + i]);
            e[i] = r.hypot(m);
        }
        imtql(&mut d, &mut e, None)?;
        EigenSample::from_unsorted(d)
    }
}

/// A sampled ensemble matrix, symmetric for β = 1 and Hermitian for β = 2.
#[derive(Debug, Clone)]
pub enum GaussianMatrix {
    Symmetric(SymMatrix),
    Hermitian(HermMatrix),
}

impl GaussianMatrix {
    pub fn n(&self) -> usize {
        match self {
            GaussianMatrix::Symmetric(m) => m.n(),
            GaussianMatrix::Hermitian(m) => m.n(),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            GaussianMatrix::Symmetric(m) => m.trace(),
            GaussianMatrix::Hermitian(m) => m.trace(),
        }
    }

    pub fn frobenius_sq(&self) -> f64 {
        match self {
            GaussianMatrix::Symmetric(m) => m.frobenius_sq(),
            GaussianMatrix::Hermitian(m) => m.frobenius_sq(),
        }
    }

    /// Full spectrum, values only.
    ///
    /// # Errors
    /// As for [`SymMatrix::eigenvalues`].
    pub fn eigenvalues(&self) -> Result<EigenSample> {
        match self {
            GaussianMatrix::Symmetric(m) => m.eigenvalues(),
            GaussianMatrix::Hermitian(m) => m.eigenvalues(),
        }
    }

    pub fn as_symmetric(&self) -> Option<&SymMatrix> {
        match self {
            GaussianMatrix::Symmetric(m) => Some(m),
            GaussianMatrix::Hermitian(_) => None,
        }
    }

    pub fn as_hermitian(&self) -> Option<&HermMatrix> {
        match self {
            GaussianMatrix::Hermitian(m) => Some(m),
            GaussianMatrix::Symmetric(_) => None,
        }
    }
}

/// A computed spectrum: ascending eigenvalues with the top one singled out.
#[derive(Debug, Clone)]
pub struct EigenSample {
    eigenvalues: Vec<f64>,
    top: f64,
}

impl EigenSample {
    fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "computed eigenvalues",
            });
        }
        values.sort_by(f64::total_cmp);
        let top = *values.last().expect("nonempty");
        Ok(Self {
            eigenvalues: values,
            top,
        })
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// The largest eigenvalue `x_N*`.
    pub fn top(&self) -> f64 {
        self.top
    }

    /// The second largest eigenvalue (samples have `n ≥ 2`).
    pub fn second(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 2]
    }

    /// Twice the standard deviation of the spectrum with the top
    /// eigenvalue removed. For a semicircle bulk on `[−√(2β), √(2β)]` the
    /// standard deviation is half the edge, so this estimates the edge
    /// without being dragged by a detached top eigenvalue.
    pub fn bulk_edge_estimate(&self) -> f64 {
        let bulk = &self.eigenvalues[..self.eigenvalues.len() - 1];
        let n = bulk.len() as f64;
        let mean = bulk.iter().sum::<f64>() / n;
        let var = bulk.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        2.0 * var.sqrt()
    }
}

/// Draw `W + θe₁e₁ᵀ` for replica 0 of the config's stream; see
/// [`sample_deformed_replica`].
pub fn sample_deformed(config: &EnsembleConfig) -> GaussianMatrix {
    sample_deformed_replica(config, 0)
}

/// Draw `W + θe₁e₁ᵀ` for one replica.
///
/// Replica `r` reads stream `r` of the ChaCha generator seeded by
/// `config.seed`, so replicas are independent, reproducible, and
/// insensitive to evaluation order. The upper triangle is drawn row by
/// row, diagonal first within each row.
pub fn sample_deformed_replica(config: &EnsembleConfig, replica: u64) -> GaussianMatrix {
    let n = config.n;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    rng.set_stream(replica);
    let normal = StandardNormal;
    let diag_scale = (1.0 / n as f64).sqrt();
    let off_scale = (1.0 / (2.0 * n as f64)).sqrt();

    match config.beta {
        Beta::One => {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let g: f64 = normal.sample(&mut rng);
                    let value = if i == j {
                        g * diag_scale
                    } else {
                        g * off_scale
                    };
                    a[i * n + j] = value;
                    a[j * n + i] = value;
                }
            }
            a[0] += config.theta;
            GaussianMatrix::Symmetric(SymMatrix { n, a })
        }
        Beta::Two => {
            let mut re = vec![0.0; n * n];
            let mut im = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    if i == j {
                        let g: f64 = normal.sample(&mut rng);
                        re[i * n + i] = g * diag_scale;
                    } else {
                        let gr: f64 = normal.sample(&mut rng);
                        let gi: f64 = normal.sample(&mut rng);
                        re[i * n + j] = gr * off_scale;
                        im[i * n + j] = gi * off_scale;
                        re[j * n + i] = gr * off_scale;
                        im[j * n + i] = -gi * off_scale;
                    }
                }
            }
            re[0] += config.theta;
            GaussianMatrix::Hermitian(HermMatrix { n, re, im })
        }
    }
}

/// Top eigenvalue of each of `replicas` independent samples, in replica
/// order. Replica-parallel; the output is bit-identical for any thread
/// count.
///
/// # Errors
/// `replicas == 0`, or a propagated eigensolver failure.
pub fn top_eigenvalue_stream(config: &EnsembleConfig, replicas: usize) -> Result<Vec<f64>> {
    if replicas == 0 {
        return Err(Error::InvalidParameter(
            "need at least one replica".to_string(),
        ));
    }
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| Ok(sample_deformed_replica(config, r).eigenvalues()?.top()))
        .collect()
}

/// Full spectra of `replicas` independent samples, in replica order.
/// Prefer [`top_eigenvalue_stream`] when only the maximum is needed: this
/// keeps every spectrum in memory.
///
/// # Errors
/// As for [`top_eigenvalue_stream`].
pub fn eigen_sample_stream(config: &EnsembleConfig, replicas: usize) -> Result<Vec<EigenSample>> {
    if replicas == 0 {
        return Err(Error::InvalidParameter(
            "need at least one replica".to_string(),
        ));
    }
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| sample_deformed_replica(config, r).eigenvalues())
        .collect()
}

// ---------------------------------------------------------------------------
// Householder reduction
// ---------------------------------------------------------------------------

/// Reduce symmetric `a` (row-major, `n×n`) to tridiagonal form in place by
/// Householder reflections. If `q` is given (initialized to the identity)
/// it accumulates the orthogonal transform, `A = Q T Qᵀ`.
fn tridiagonalize_sym(a: &mut [f64], n: usize, mut q: Option<&mut [f64]>) {
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n - 2 {
        let m = k + 1;
        // Reflect column k below the subdiagonal onto e₁.
        let mut norm_sq = 0.0;
        for i in m..n {
            norm_sq += a[i * n + k] * a[i * n + k];
        }
        let x0 = a[m * n + k];
        let tail_sq = norm_sq - x0 * x0;
        if tail_sq <= 0.0 {
            continue;
        }
        let norm = norm_sq.sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        // v = x − α·e₁, normalized. The signed α keeps v₀ = x₀ − α free of
        // cancellation.
        let mut v_sq = 0.0;
        for i in m..n {
            v[i] = a[i * n + k];
        }
        v[m] = x0 - alpha;
        for i in m..n {
            v_sq += v[i] * v[i];
        }
        let inv = 1.0 / v_sq.sqrt();
        for i in m..n {
            v[i] *= inv;
        }

        // Two-sided update of the trailing block:
        // A ← A − 2vqᵀ − 2qvᵀ with w = Av, τ = vᵀw, q = w − τv.
        for i in m..n {
            let row = &a[i * n..i * n + n];
            let mut acc = 0.0;
            for j in m..n {
                acc += row[j] * v[j];
            }
            w[i] = acc;
        }
        let mut tau = 0.0;
        for i in m..n {
            tau += v[i] * w[i];
        }
        for i in m..n {
            w[i] -= tau * v[i];
        }
        for i in m..n {
            let vi = v[i];
            let wi = w[i];
            let row = &mut a[i * n..i * n + n];
            for j in m..n {
                row[j] -= 2.0 * (vi * w[j] + wi * v[j]);
            }
        }

        // Column k now reads (α, 0, …, 0) below the diagonal.
        a[m * n + k] = alpha;
        a[k * n + m] = alpha;
        for i in m + 1..n {
            a[i * n + k] = 0.0;
            a[k * n + i] = 0.0;
        }

        if let Some(q) = q.as_deref_mut() {
            // Q ← Q·(I − 2vvᵀ), restricted to columns m..n.
            for r in 0..n {
                let row = &mut q[r * n..r * n + n];
                let mut dot = 0.0;
                for j in m..n {
                    dot += row[j] * v[j];
                }
                for j in m..n {
                    row[j] -= 2.0 * dot * v[j];
                }
            }
        }
    }
}

fn read_tridiagonal_sym(a: &[f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    for i in 0..n - 1 {
        e[i] = a[(i + 1) * n + i];
    }
}

/// Reduce Hermitian `(re, im)` to real tridiagonal data in place. The
/// reflections leave complex subdiagonals; a diagonal unitary similarity
/// would make them real without touching the diagonal, so the caller reads
/// `d` from the diagonal and `e` as subdiagonal moduli.
fn tridiagonalize_herm(re: &mut [f64], im: &mut [f64], n: usize) {
    if n < 3 {
        return;
    }
    let mut vre = vec![0.0; n];
    let mut vim = vec![0.0; n];
    let mut wre = vec![0.0; n];
    let mut wim = vec![0.0; n];
    for k in 0..n - 2 {
        let m = k + 1;
        let mut norm_sq = 0.0;
        for i in m..n {
            norm_sq += re[i * n + k] * re[i * n + k] + im[i * n + k] * im[i * n + k];
        }
        let (x0r, x0i) = (re[m * n + k], im[m * n + k]);
        let head_sq = x0r * x0r + x0i * x0i;
        if norm_sq - head_sq <= 0.0 {
            continue;
        }
        let norm = norm_sq.sqrt();
        // Phase of the leading entry; defaults to 1 when it vanishes.
        let head = head_sq.sqrt();
        let (pr, pi) = if head > 0.0 {
            (x0r / head, x0i / head)
        } else {
            (1.0, 0.0)
        };
        // α = −phase·‖x‖, v = x − α·e₁ (no cancellation by construction).
        let (ar, ai) = (-pr * norm, -pi * norm);
        for i in m..n {
            vre[i] = re[i * n + k];
            vim[i] = im[i * n + k];
        }
        vre[m] = x0r - ar;
        vim[m] = x0i - ai;
        let mut v_sq = 0.0;
        for i in m..n {
            v_sq += vre[i] * vre[i] + vim[i] * vim[i];
        }
        let inv = 1.0 / v_sq.sqrt();
        for i in m..n {
            vre[i] *= inv;
            vim[i] *= inv;
        }

        // w = A v over the trailing block.
        for i in m..n {
            let rrow = &re[i * n..i * n + n];
            let irow = &im[i * n..i * n + n];
            let mut accr = 0.0;
            let mut acci = 0.0;
            for j in m..n {
                accr += rrow[j] * vre[j] - irow[j] * vim[j];
                acci += rrow[j] * vim[j] + irow[j] * vre[j];
            }
            wre[i] = accr;
            wim[i] = acci;
        }
        // τ = v*w is real for Hermitian A.
        let mut tau = 0.0;
        for i in m..n {
            tau += vre[i] * wre[i] + vim[i] * wim[i];
        }
        for i in m..n {
            wre[i] -= tau * vre[i];
            wim[i] -= tau * vim[i];
        }
        // A ← A − 2(v q* + q v*), Hermitian by construction.
        for i in m..n {
            let (vr, vi) = (vre[i], vim[i]);
            let (qr, qi) = (wre[i], wim[i]);
            let rrow = &mut re[i * n..i * n + n];
            for j in m..n {
                rrow[j] -= 2.0 * (vr * wre[j] + vi * wim[j] + qr * vre[j] + qi * vim[j]);
            }
            let irow = &mut im[i * n..i * n + n];
            for j in m..n {
                irow[j] -= 2.0 * (vi * wre[j] - vr * wim[j] + qi * vre[j] - qr * vim[j]);
            }
        }

        re[m * n + k] = ar;
        im[m * n + k] = ai;
        re[k * n + m] = ar;
        im[k * n + m] = -ai;
        for i in m + 1..n {
            re[i * n + k] = 0.0;
            im[i * n + k] = 0.0;
            re[k * n + i] = 0.0;
            im[k * n + i] = 0.0;
        }
    }
}

// ---------------------------------------------------------------------------
// Implicit-shift QL on a real symmetric tridiagonal
// ---------------------------------------------------------------------------

/// Implicit QL with Wilkinson shifts on the tridiagonal `(d, e)`; `e[i]`
/// couples `d[i]` and `d[i+1]`, `e[n−1]` is workspace. On success `d`
/// holds the eigenvalues (unsorted). If `z` is given (row-major `n×n`,
/// seeded with the tridiagonalizing transform or the identity) its columns
/// accumulate the eigenvectors.
fn imtql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        'sweep: loop {
            // Look for a negligible subdiagonal element at or after l.
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps == MAX_SWEEPS {
                return Err(Error::EigenNoConvergence {
                    index: l,
                    sweeps: MAX_SWEEPS,
                });
            }
            sweeps += 1;

            // Wilkinson shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Underflowed rotation: deflate and restart the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    continue 'sweep;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for row in z.chunks_exact_mut(n) {
                        f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
