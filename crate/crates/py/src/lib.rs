//! Python bindings: the spherical-integral evaluators, the rate-function
//! family, ensemble sampling, and the Dudley metric, exposed as the
//! `rank1_ldp` extension module.
//!
//! Errors from the core library surface as `ValueError` with the library's
//! message text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rank1_ldp_core::ensemble::{top_eigenvalue_stream, EnsembleConfig, SymMatrix};
use rank1_ldp_core::measures::{dudley_distance as dudley, SpectralMeasure};
use rank1_ldp_core::ratefn::{
    self, normalization_log_ratio, rate_f, rate_k, RateParams,
};
use rank1_ldp_core::spherical::{
    i_limit, log_spherical_finite_n, mc_oracle, solve_fixed_point,
};
use rank1_ldp_core::{Beta, SemicircleLaw, SphericalParams as CoreSpherical};

fn err(e: rank1_ldp_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn beta_arg(beta: u8) -> PyResult<Beta> {
    Beta::from_int(beta).map_err(err)
}

/// Spherical-integral evaluators at fixed ensemble index and pull.
#[pyclass]
struct Spherical {
    params: CoreSpherical,
}

#[pymethods]
impl Spherical {
    #[new]
    fn new(beta: u8, theta: f64) -> PyResult<Self> {
        let params = CoreSpherical::new(beta_arg(beta)?, theta).map_err(err)?;
        Ok(Self { params })
    }

    #[getter]
    fn beta(&self) -> u8 {
        self.params.beta().value() as u8
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.params.theta()
    }

    /// Finite-N Laplace asymptotic of (1/N) log I_N for an eigenvalue list.
    fn finite_n(&self, eigs: Vec<f64>) -> PyResult<f64> {
        log_spherical_finite_n(&eigs, &self.params).map_err(err)
    }

    /// Fixed point behind `finite_n` as (v, w, residual, iterations).
    fn fixed_point(&self, eigs: Vec<f64>) -> PyResult<(f64, f64, f64, usize)> {
        let s = solve_fixed_point(&eigs, &self.params).map_err(err)?;
        Ok((s.v, s.w, s.residual, s.iterations))
    }

    /// Monte Carlo estimate as (mean_log, std_err). Deterministic in seed.
    fn oracle(&self, eigs: Vec<f64>, samples: usize, seed: u64) -> PyResult<(f64, f64)> {
        let e = mc_oracle(&eigs, &self.params, samples, seed).map_err(err)?;
        Ok((e.mean_log, e.std_err))
    }

    /// N to infinity limit against the semicircle bulk, top eigenvalue at x.
    fn limit_semicircle(&self, x: f64) -> PyResult<f64> {
        let law = SemicircleLaw::new(self.params.beta().value()).map_err(err)?;
        i_limit(&law, x, &self.params).map_err(err)
    }

    /// N to infinity limit against the empirical measure of an eigenvalue
    /// list, top eigenvalue at x.
    fn limit_empirical(&self, eigs: Vec<f64>, x: f64) -> PyResult<f64> {
        let mu = SpectralMeasure::empirical(&eigs).map_err(err)?;
        i_limit(&mu, x, &self.params).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Spherical(beta={}, theta={})",
            self.params.beta(),
            self.params.theta()
        )
    }
}

/// The rate-function family K, F at fixed (beta, theta).
#[pyclass]
struct Rate {
    params: RateParams,
}

#[pymethods]
impl Rate {
    #[new]
    fn new(beta: u8, theta: f64) -> PyResult<Self> {
        let params = RateParams::new(beta_arg(beta)?, theta).map_err(err)?;
        Ok(Self { params })
    }

    #[getter]
    fn beta(&self) -> u8 {
        self.params.beta().value() as u8
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.params.theta()
    }

    /// F(x); +inf below the bulk edge.
    fn f(&self, x: f64) -> f64 {
        rate_f(&self.params, x)
    }

    /// K(x) = F(x) - inf F; zero exactly at the almost-sure limit.
    fn k(&self, x: f64) -> f64 {
        rate_k(&self.params, x)
    }

    /// Variational branch at x: 1 sticking, 2 detached.
    fn branch(&self, x: f64) -> u8 {
        self.params.branch(x)
    }

    fn as_limit(&self) -> f64 {
        self.params.as_limit()
    }

    fn x_b(&self) -> f64 {
        self.params.x_b()
    }

    fn theta_c(&self) -> f64 {
        self.params.theta_c()
    }

    /// log of the deformed-to-undeformed normalization ratio, inf F.
    fn normalization_log_ratio(&self) -> f64 {
        normalization_log_ratio(&self.params)
    }

    fn __repr__(&self) -> String {
        format!(
            "Rate(beta={}, theta={})",
            self.params.beta(),
            self.params.theta()
        )
    }
}

/// Integrated edge density J_beta(x), the undeformed rate function.
#[pyfunction]
fn j_integral(beta: f64, x: f64) -> PyResult<f64> {
    ratefn::j_integral(beta, x).map_err(err)
}

/// Critical pull separating the sticking and detached phases.
#[pyfunction]
fn theta_c(beta: u8) -> PyResult<f64> {
    Ok(ratefn::theta_c(beta_arg(beta)?))
}

/// Dudley (bounded-Lipschitz) distance between two discrete measures given
/// as [(location, weight), ...] lists.
#[pyfunction]
fn dudley_distance(a: Vec<(f64, f64)>, b: Vec<(f64, f64)>) -> PyResult<f64> {
    let mu = SpectralMeasure::new(a).map_err(err)?;
    let nu = SpectralMeasure::new(b).map_err(err)?;
    Ok(dudley(&mu, &nu))
}

/// Top eigenvalues of `replicas` independent deformed samples, reproducible
/// in (seed, replica index).
#[pyfunction]
fn sample_top_eigenvalues(
    n: usize,
    beta: u8,
    theta: f64,
    replicas: usize,
    seed: u64,
) -> PyResult<Vec<f64>> {
    let config = EnsembleConfig::new(n, beta_arg(beta)?, theta, seed).map_err(err)?;
    top_eigenvalue_stream(&config, replicas).map_err(err)
}

/// Eigenvalues (ascending) of a dense symmetric matrix given as row-major
/// flat data.
#[pyfunction]
fn symmetric_eigenvalues(n: usize, rows: Vec<f64>) -> PyResult<Vec<f64>> {
    let m = SymMatrix::from_rows(n, rows).map_err(err)?;
    Ok(m.eigenvalues().map_err(err)?.eigenvalues().to_vec())
}

#[pymodule]
fn rank1_ldp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Spherical>()?;
    m.add_class::<Rate>()?;
    m.add_function(wrap_pyfunction!(j_integral, m)?)?;
    m.add_function(wrap_pyfunction!(theta_c, m)?)?;
    m.add_function(wrap_pyfunction!(dudley_distance, m)?)?;
    m.add_function(wrap_pyfunction!(sample_top_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_eigenvalues, m)?)?;
    Ok(())
}
