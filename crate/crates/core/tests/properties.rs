//! Structural properties that cut across modules: shape of the rate
//! function, order relations of the spherical integral, and consistency
//! between the discrete and continuous descriptions of the bulk.

mod common;

use common::TinyRng;
use rank1_ldp_core::measures::SemicircleLaw;
use rank1_ldp_core::ratefn::{rate_k, theta_c, RateParams};
use rank1_ldp_core::spherical::{i_limit, log_spherical_finite_n, SphericalParams};
use rank1_ldp_core::Beta;

fn beta_of(trial: usize) -> Beta {
    if trial % 2 == 0 {
        Beta::One
    } else {
        Beta::Two
    }
}

/// K is nonnegative and vanishes only at the almost-sure limit: on a grid
/// of spacing 1e-3 every point farther than 1.5e-3 from the limit carries
/// K above 1e-8, while the limit itself sits below 1e-10. Covers pulls
/// below, at, and above critical for both ensembles.
#[test]
fn k_vanishes_only_at_the_limit() {
    let families = [
        (Beta::One, [0.4, std::f64::consts::FRAC_1_SQRT_2, 1.5]),
        (Beta::Two, [0.5, 1.0, 1.8]),
    ];
    for (beta, thetas) in families {
        for theta in thetas {
            let p = RateParams::new(beta, theta).unwrap();
            let edge = p.edge();
            let x_star = p.as_limit();
            assert!(
                rate_k(&p, x_star).abs() <= 1e-10,
                "K at the limit is {} for beta {beta} theta {theta}",
                rate_k(&p, x_star)
            );
            for i in 0..=3500 {
                let x = edge + i as f64 * 1e-3;
                let k = rate_k(&p, x);
                assert!(
                    k >= -1e-12,
                    "K({x}) = {k} negative at beta {beta} theta {theta}"
                );
                if (x - x_star).abs() > 1.5e-3 {
                    assert!(
                        k > 1e-8,
                        "K({x}) = {k} too close to zero away from the limit {x_star} \
                         (beta {beta} theta {theta})"
                    );
                }
            }
        }
    }
}

/// A stronger pull makes any fixed level above both limits cheaper:
/// whenever theta2 > theta1 and the theta2 limit lies strictly above the
/// theta1 limit, K drops pointwise beyond both.
#[test]
fn k_ordering_in_the_pull() {
    for beta in [Beta::One, Beta::Two] {
        let tc = theta_c(beta);
        let pairs = [
            (0.6 * tc, 1.7 * tc),
            (0.9 * tc, 2.4 * tc),
            (1.2 * tc, 1.9 * tc),
            (1.5 * tc, 2.8 * tc),
        ];
        for (t1, t2) in pairs {
            let p1 = RateParams::new(beta, t1).unwrap();
            let p2 = RateParams::new(beta, t2).unwrap();
            assert!(p2.as_limit() > p1.as_limit(), "pair misconfigured");
            let start = p2.as_limit().max(p1.as_limit()) + 0.02;
            for i in 0..36 {
                let x = start + 0.11 * i as f64;
                let k1 = rate_k(&p1, x);
                let k2 = rate_k(&p2, x);
                assert!(
                    k2 <= k1 + 1e-12,
                    "ordering fails at beta {beta}, theta {t1} vs {t2}, x {x}: {k2} > {k1}"
                );
            }
        }
    }
}

/// Raising any eigenvalue can only raise the finite-N spherical integral.
#[test]
fn finite_n_nondecreasing_under_spectrum_increase() {
    let mut rng = TinyRng(0xab12);
    for trial in 0..48 {
        let n = 3 + rng.below(38);
        let eigs: Vec<f64> = (0..n).map(|_| rng.range(-2.0, 2.0)).collect();
        let bumped: Vec<f64> = eigs
            .iter()
            .map(|&x| {
                if rng.unit() < 0.3 {
                    x
                } else {
                    x + rng.range(0.0, 0.4)
                }
            })
            .collect();
        let p = SphericalParams::new(beta_of(trial), rng.range(0.1, 2.5)).unwrap();
        let base = log_spherical_finite_n(&eigs, &p).unwrap();
        let raised = log_spherical_finite_n(&bumped, &p).unwrap();
        assert!(
            raised >= base - 1e-12,
            "trial {trial}: raising the spectrum lowered the value, {base} -> {raised}"
        );
    }
}

/// On nonnegative spectra the integral is nondecreasing in theta. (The
/// theta-derivative equals the optimizer v, which a nonnegative spectrum
/// keeps nonnegative; a spectrum of all-negative eigenvalues tilts v below
/// zero and the value genuinely decreases, so no blanket claim is made.)
#[test]
fn finite_n_nondecreasing_in_theta_on_nonnegative_spectra() {
    let mut rng = TinyRng(0x77aa);
    for trial in 0..32 {
        let n = 3 + rng.below(30);
        let eigs: Vec<f64> = (0..n).map(|_| rng.range(0.0, 2.0)).collect();
        let t1 = rng.range(0.1, 2.0);
        let t2 = t1 + rng.range(0.05, 1.0);
        let beta = beta_of(trial);
        let lo = log_spherical_finite_n(&eigs, &SphericalParams::new(beta, t1).unwrap()).unwrap();
        let hi = log_spherical_finite_n(&eigs, &SphericalParams::new(beta, t2).unwrap()).unwrap();
        assert!(
            hi >= lo - 1e-12,
            "trial {trial}: value dropped from {lo} to {hi} as theta rose {t1} -> {t2}"
        );
    }
}

/// Translating the whole spectrum by c adds exactly theta times c: the
/// fixed point shifts along and every log term keeps its gap.
#[test]
fn finite_n_shift_covariance() {
    let mut rng = TinyRng(0x31c3);
    for trial in 0..24 {
        let n = 3 + rng.below(30);
        let eigs: Vec<f64> = (0..n).map(|_| rng.range(-1.5, 1.5)).collect();
        let c = [-1.5, 0.75, 2.5][trial % 3];
        let shifted: Vec<f64> = eigs.iter().map(|&x| x + c).collect();
        let theta = rng.range(0.2, 2.2);
        let p = SphericalParams::new(beta_of(trial), theta).unwrap();
        let base = log_spherical_finite_n(&eigs, &p).unwrap();
        let moved = log_spherical_finite_n(&shifted, &p).unwrap();
        assert!(
            (moved - base - theta * c).abs() <= 1e-12,
            "trial {trial}: shift by {c} changed the value by {} instead of {}",
            moved - base,
            theta * c
        );
    }
}

/// The limit functional evaluated on equal-mass discretizations of the
/// bulk converges to its semicircle value as the atom count grows.
#[test]
fn limit_agrees_with_discretized_bulk() {
    let cases = [
        (Beta::Two, 0.5, 2.2),
        (Beta::One, 1.2, 2.35),
    ];
    for (beta, theta, x) in cases {
        let p = SphericalParams::new(beta, theta).unwrap();
        let law = SemicircleLaw::new(beta.value()).unwrap();
        let exact = i_limit(&law, x, &p).unwrap();
        let coarse = (i_limit(&law.discretize(50).unwrap(), x, &p).unwrap() - exact).abs();
        let fine = (i_limit(&law.discretize(400).unwrap(), x, &p).unwrap() - exact).abs();
        assert!(
            fine < coarse,
            "beta {beta} theta {theta}: refining 50 -> 400 atoms grew the error {coarse} -> {fine}"
        );
        assert!(fine <= 0.01, "beta {beta} theta {theta}: error {fine} at 400 atoms");
    }
}

/// The almost-sure limit is continuous through the critical pull, where
/// the sticking and detached expressions meet at the bulk edge, and the
/// variational branch flips exactly at the branch point for subcritical
/// pulls (supercritical pulls live on branch 2 everywhere).
#[test]
fn as_limit_continuous_at_the_critical_pull() {
    for beta in [Beta::One, Beta::Two] {
        let tc = theta_c(beta);
        let at = RateParams::new(beta, tc).unwrap();
        assert_eq!(at.as_limit(), at.edge());
        assert!((tc * tc - beta.value() / 2.0).abs() <= 1e-15);

        let below = RateParams::new(beta, tc - 1e-12).unwrap();
        let above = RateParams::new(beta, tc + 1e-12).unwrap();
        assert!(
            (above.as_limit() - below.as_limit()).abs() <= 1e-9,
            "limit jumps at the critical pull for beta {beta}"
        );

        let sub = RateParams::new(beta, 0.6 * tc).unwrap();
        assert_eq!(sub.branch(sub.x_b() - 1e-6), 1);
        assert_eq!(sub.branch(sub.x_b() + 1e-6), 2);

        let sup = RateParams::new(beta, 1.8 * tc).unwrap();
        assert_eq!(sup.branch(sup.edge()), 2);
        assert_eq!(sup.branch(sup.x_b()), 2);
    }
}
