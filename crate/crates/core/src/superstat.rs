//! q-deformed superstatistics on the linear spectrum `E(n) = 2Pn + E₀`.
//!
//! The effective Boltzmann factor is `B(E) = e^{−βE} (1 + q β²E²/2)` and the
//! partition function integrates it over a continuous level index,
//!
//! ```text
//! Z(β) = ∫₀^∞ B(E(n)) dn = e^{−x} / (2Pβ) · [1 + q g(x)],   x = βE₀,
//! g(x) = 1 + x + x²/2.
//! ```
//!
//! Everything downstream (F, U, S, C) is taken from analytic derivatives of
//! `ln Z`, evaluated in the grouped form so that the cancellation between
//! `2PQ` and `C` inside E₀ is not amplified further.

use crate::error::{Error, Result};
use crate::quadrature;
use crate::spectrum::SpectrumParams;

/// Whether q is held to the conventional [0, 1] window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QRange {
    #[default]
    Bounded,
    /// Any q ≥ 0.
    Exploratory,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoQuery {
    beta: f64,
    q_deform: f64,
}

impl ThermoQuery {
    pub fn new(beta: f64, q_deform: f64) -> Result<Self> {
        Self::with_range(beta, q_deform, QRange::Bounded)
    }

    pub fn with_range(beta: f64, q_deform: f64, range: QRange) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::NonPositiveBeta(beta));
        }
        let upper = match range {
            QRange::Bounded => 1.0,
            QRange::Exploratory => f64::INFINITY,
        };
        if !(q_deform >= 0.0 && q_deform <= upper) || q_deform.is_nan() || q_deform.is_infinite() {
            return Err(Error::DeformationOutOfRange(q_deform));
        }
        Ok(ThermoQuery { beta, q_deform })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn q_deform(&self) -> f64 {
        self.q_deform
    }
}

/// One evaluation of the thermodynamic functions at fixed (β, q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub beta: f64,
    pub z_partition: f64,
    pub ln_z: f64,
    pub f_helmholtz: f64,
    pub u_internal: f64,
    /// Entropy in units of k_B.
    pub s_over_k: f64,
    /// Heat capacity in units of k_B.
    pub c_over_k: f64,
}

impl ThermoPoint {
    pub fn entropy(&self, k_boltzmann: f64) -> f64 {
        k_boltzmann * self.s_over_k
    }

    pub fn heat_capacity(&self, k_boltzmann: f64) -> f64 {
        k_boltzmann * self.c_over_k
    }

    pub fn temperature(&self, k_boltzmann: f64) -> f64 {
        1.0 / (k_boltzmann * self.beta)
    }
}

pub fn boltzmann_factor(energy: f64, query: &ThermoQuery) -> f64 {
    let be = query.beta * energy;
    (-be).exp() * (1.0 + 0.5 * query.q_deform * be * be)
}

fn g(x: f64) -> f64 {
    1.0 + x + 0.5 * x * x
}

pub fn partition_closed(params: &SpectrumParams, query: &ThermoQuery) -> Result<f64> {
    check_params(params)?;
    let x = query.beta * params.e_zero;
    let scale = 2.0 * params.p_scale * query.beta;
    Ok((-x).exp() / scale * (1.0 + query.q_deform * g(x)))
}

pub fn ln_partition(params: &SpectrumParams, query: &ThermoQuery) -> Result<f64> {
    check_params(params)?;
    let x = query.beta * params.e_zero;
    let scale = 2.0 * params.p_scale * query.beta;
    Ok(-x - scale.ln() + (query.q_deform * g(x)).ln_1p())
}

fn check_params(params: &SpectrumParams) -> Result<()> {
    if params.p_scale > 0.0 && params.p_scale.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateSpectrum)
    }
}

/// Upper end (in units of 1/(2Pβ)) of the truncated index range.
fn truncation_point(q: f64) -> f64 {
    40.0 + 10.0 * q.sqrt()
}

/// `∫_N^∞ B(E(n)) dn` in closed form, with `u₀ = β E(N)`.
fn tail(u0: f64, q: f64, scale: f64) -> f64 {
    (-u0).exp() * (1.0 + 0.5 * q * (u0 * u0 + 2.0 * u0 + 2.0)) / scale
}

/// Evaluates the partition integral numerically on `n ∈ [0, N]`.
///
/// `N = (40 + 10√q)/(2Pβ)`; it is doubled until the analytically known tail
/// beyond N is below a tenth of the requested relative tolerance. The tail is
/// only used as a bound and is not added to the result.
pub fn partition_quadrature(
    params: &SpectrumParams,
    query: &ThermoQuery,
    rel_tol: f64,
) -> Result<f64> {
    check_params(params)?;
    if !(1e-13..=1e-3).contains(&rel_tol) {
        return Err(Error::InvalidParameter {
            name: "rel_tol",
            value: rel_tol,
        });
    }
    let beta = query.beta;
    let q = query.q_deform;
    let slope = 2.0 * params.p_scale;
    let scale = slope * beta;
    let integrand = |n: f64| boltzmann_factor(slope * n + params.e_zero, query);

    let mut reduced_end = truncation_point(q);
    loop {
        let n_max = reduced_end / scale;
        let result = quadrature::integrate(integrand, 0.0, n_max, 0.0, 0.5 * rel_tol, 20_000)?;
        let bound = tail(reduced_end + beta * params.e_zero, q, scale);
        if bound <= 0.1 * rel_tol * result.value.abs() {
            return Ok(result.value);
        }
        if reduced_end > 1e4 {
            return Err(Error::IntegrationFailure(format!(
                "truncation tail {bound:.3e} does not fall below tolerance"
            )));
        }
        reduced_end *= 2.0;
    }
}

/// Direct sum over integer levels; a diagnostic, not the continuum integral.
pub fn partition_discrete_sum(params: &SpectrumParams, query: &ThermoQuery) -> Result<f64> {
    check_params(params)?;
    let mut total = 0.0;
    for n in 0..10_000_000u32 {
        let term = boltzmann_factor(params.energy_level(n), query);
        total += term;
        let e = query.beta * params.energy_level(n);
        if e > 1.0 && term <= f64::EPSILON * total {
            return Ok(total);
        }
    }
    Err(Error::IntegrationFailure(
        "discrete level sum did not converge".into(),
    ))
}

pub fn thermo_point(params: &SpectrumParams, query: &ThermoQuery) -> Result<ThermoPoint> {
    check_params(params)?;
    let beta = query.beta;
    let q = query.q_deform;
    let e0 = params.e_zero;
    let x = beta * e0;
    let gx = g(x);
    let dg = 1.0 + x;
    let denom = 1.0 + q * gx;

    let z_partition = partition_closed(params, query)?;
    let ln_z = ln_partition(params, query)?;
    let u_internal = e0 + 1.0 / beta - q * e0 * dg / denom;
    let s_over_k = ln_z + beta * u_internal;
    let c_over_k = 1.0 + q * x * x * (denom - q * dg * dg) / (denom * denom);
    Ok(ThermoPoint {
        beta,
        z_partition,
        ln_z,
        f_helmholtz: -ln_z / beta,
        u_internal,
        s_over_k,
        c_over_k,
    })
}

/// Central finite differences of `ln Z` in β: `(d lnZ/dβ, d² lnZ/dβ²)`.
///
/// Independent of the analytic derivatives in [`thermo_point`]; used to
/// cross-check them. The second derivative uses a coarser step and one
/// Richardson stage to stay clear of roundoff.
pub fn ln_z_finite_differences(params: &SpectrumParams, query: &ThermoQuery) -> Result<(f64, f64)> {
    check_params(params)?;
    let beta = query.beta;
    let q = query.q_deform;
    let ln = |b: f64| ln_partition(params, &ThermoQuery { beta: b, q_deform: q });
    let h = beta * 1e-5;
    let first = (ln(beta + h)? - ln(beta - h)?) / (2.0 * h);
    let centre = ln(beta)?;
    let second_at = |h: f64| -> Result<f64> {
        Ok((ln(beta + h)? - 2.0 * centre + ln(beta - h)?) / (h * h))
    };
    let h2 = beta * 1e-3;
    let second = (4.0 * second_at(h2 / 2.0)? - second_at(h2)?) / 3.0;
    Ok((first, second))
}

pub fn thermo_sweep(
    params: &SpectrumParams,
    q_deform: f64,
    beta_grid: &[f64],
) -> Result<Vec<ThermoPoint>> {
    thermo_sweep_with(params, q_deform, beta_grid, QRange::Bounded)
}

pub fn thermo_sweep_with(
    params: &SpectrumParams,
    q_deform: f64,
    beta_grid: &[f64],
    range: QRange,
) -> Result<Vec<ThermoPoint>> {
    if let Some(w) = beta_grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!(
            "beta grid not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    beta_grid
        .iter()
        .map(|&beta| {
            let query = ThermoQuery::with_range(beta, q_deform, range)?;
            thermo_point(params, &query)
        })
        .collect()
}
