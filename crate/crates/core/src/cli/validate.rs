use std::fmt;

use super::config::{RunConfig, Series};
use crate::error::Result;
use crate::nu::solve_pseudoharmonic_nu;
use crate::radial::verify_spectrum;
use crate::spectrum::SpectrumParams;
use crate::superstat::{
    ln_z_finite_differences, partition_closed, partition_quadrature, thermo_point, QRange,
    ThermoQuery,
};

pub const DERIVATIVE_TOL: f64 = 1e-6;
pub const SPECTRUM_TOL: f64 = 1e-4;
pub const NU_TOL: f64 = 1e-12;
const SPECTRUM_LEVELS: usize = 4;
const GRID_POINTS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_error: f64,
    pub tol: f64,
    pub passed: bool,
    /// First error message encountered, if any evaluation failed outright.
    pub failure: Option<String>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<34} max rel err {:.3e} (tol {:.1e})",
            self.name, self.max_error, self.tol
        )?;
        if let Some(msg) = &self.failure {
            write!(f, "  [{msg}]")?;
        }
        Ok(())
    }
}

struct Tally {
    name: &'static str,
    tol: f64,
    max_error: f64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Tally {
            name,
            tol,
            max_error: 0.0,
            failure: None,
        }
    }

    fn record(&mut self, label: &str, value: Result<f64>) {
        match value {
            Ok(e) if e.is_finite() => self.max_error = self.max_error.max(e),
            Ok(e) => self.fail(label, format!("non-finite error {e}")),
            Err(err) => self.fail(label, err.to_string()),
        }
    }

    fn fail(&mut self, label: &str, msg: String) {
        self.max_error = f64::INFINITY;
        if self.failure.is_none() {
            self.failure = Some(format!("{label}: {msg}"));
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            passed: self.failure.is_none() && self.max_error <= self.tol,
            name: self.name,
            max_error: self.max_error,
            tol: self.tol,
            failure: self.failure,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// 50 log-spaced inverse temperatures over `[0.1, 10] / |E₀|`.
pub fn check_grid(params: &SpectrumParams) -> Vec<f64> {
    let unit = 1.0 / params.e_zero.abs();
    let (lo, hi) = (0.1f64.ln(), 10.0f64.ln());
    (0..GRID_POINTS)
        .map(|i| (lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64).exp() * unit)
        .collect()
}

/// Worst relative gap between quadrature and closed-form Z.
pub fn partition_error(params: &SpectrumParams, q_values: &[f64], rel_tol: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for &beta in &check_grid(params) {
        for &q in q_values {
            let query = ThermoQuery::with_range(beta, q, QRange::Exploratory)?;
            let closed = partition_closed(params, &query)?;
            let numeric = partition_quadrature(params, &query, rel_tol)?;
            worst = worst.max(rel(numeric, closed));
        }
    }
    Ok(worst)
}

/// Worst gap between analytic U, C/k and finite differences of ln Z. The
/// heat capacity error is taken relative to max(|C/k|, 1) since C/k can cross
/// zero.
pub fn derivative_error(params: &SpectrumParams, q_values: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &beta in &check_grid(params) {
        for &q in q_values {
            let query = ThermoQuery::with_range(beta, q, QRange::Exploratory)?;
            let t = thermo_point(params, &query)?;
            let (d1, d2) = ln_z_finite_differences(params, &query)?;
            worst = worst.max(rel(-d1, t.u_internal));
            let c_fd = beta * beta * d2;
            worst = worst.max((c_fd - t.c_over_k).abs() / t.c_over_k.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Worst relative gap between NU-solved and closed-form levels n = 0..levels.
pub fn nu_error(series: &Series, levels: u32) -> Result<f64> {
    let params = series.system.params()?;
    let mut worst = 0.0f64;
    for n in 0..levels {
        let nu = solve_pseudoharmonic_nu(&series.system, n)?;
        worst = worst.max(rel(nu, params.energy_level(n)));
    }
    Ok(worst)
}

/// Runs every check over the configured systems (both field settings in
/// molecule mode).
pub fn cmd_validate(cfg: &RunConfig) -> Vec<CheckOutcome> {
    let mut series = cfg.systems(true);
    if cfg.mode == super::Mode::Molecule {
        for mut s in cfg.systems(false) {
            s.label.push_str(" (fields off)");
            series.push(s);
        }
    }

    let mut quad = Tally::new("partition quadrature vs closed form", cfg.rel_tol);
    let mut deriv = Tally::new("U and C/k vs finite differences", DERIVATIVE_TOL);
    let mut spec = Tally::new("spectrum vs finite-difference solve", SPECTRUM_TOL);
    let mut nu = Tally::new("NU levels vs closed form", NU_TOL);

    for s in &series {
        let label = s.label.as_str();
        let params = match s.system.params() {
            Ok(p) => p,
            Err(err) => {
                for t in [&mut quad, &mut deriv, &mut spec, &mut nu] {
                    t.fail(label, err.to_string());
                }
                continue;
            }
        };
        quad.record(label, partition_error(&params, &cfg.q_values, cfg.rel_tol));
        deriv.record(label, derivative_error(&params, &cfg.q_values));
        spec.record(
            label,
            verify_spectrum(&s.system, SPECTRUM_LEVELS, SPECTRUM_TOL).map(|r| r.max_rel_error()),
        );
        nu.record(label, nu_error(s, 10));
    }
    vec![quad.finish(), deriv.finish(), spec.finish(), nu.finish()]
}
