//! Analytic bound-state spectrum of the pseudoharmonic oscillator in a uniform
//! magnetic field plus an Aharonov–Bohm flux line.
//!
//! The reduced radial problem is
//!
//! ```text
//! R'' + (−α r² + γ / r² − ε²) R = 0,   ε² = −2μ(E − C)/ħ²
//! ```
//!
//! and its levels are `E_n = P (2n + 1 + 2Q) + C` with
//! `P = (ħ²/μ) √α` and `Q = √(1/16 − γ/4)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::units::{PhysicalConstants, PotentialCoefficients};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    pub b_field: f64,
    pub flux_ab: f64,
    pub m_quantum: i32,
}

impl FieldConfig {
    pub fn new(b_field: f64, flux_ab: f64, m_quantum: i32) -> Result<Self> {
        if !(b_field.is_finite() && b_field >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "b_field",
                value: b_field,
            });
        }
        if !(flux_ab.is_finite() && flux_ab >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "flux_ab",
                value: flux_ab,
            });
        }
        Ok(FieldConfig {
            b_field,
            flux_ab,
            m_quantum,
        })
    }

    /// Same magnetic quantum number with both fields switched off.
    pub fn fields_off(&self) -> Self {
        FieldConfig {
            b_field: 0.0,
            flux_ab: 0.0,
            m_quantum: self.m_quantum,
        }
    }
}

/// Sign of the diamagnetic e²B²/(4ħ²c²) term under the confinement square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum B2Sign {
    #[default]
    Plus,
    Minus,
}

impl B2Sign {
    fn factor(self) -> f64 {
        match self {
            B2Sign::Plus => 1.0,
            B2Sign::Minus => -1.0,
        }
    }
}

impl FromStr for B2Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(B2Sign::Plus),
            "minus" | "-" => Ok(B2Sign::Minus),
            other => Err(format!("expected `plus` or `minus`, got `{other}`")),
        }
    }
}

impl fmt::Display for B2Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            B2Sign::Plus => "plus",
            B2Sign::Minus => "minus",
        })
    }
}

/// γ = 1/4 − m² + e m Φ/(2πħc) − e²Φ²/(4π²ħ²c²) − 2μB/ħ², with B the
/// inverse-square potential coefficient.
pub fn compute_gamma(
    field: &FieldConfig,
    coeffs: &PotentialCoefficients,
    consts: &PhysicalConstants,
    mu: f64,
) -> f64 {
    let m = f64::from(field.m_quantum);
    let hbar_c = consts.hbar * consts.c;
    let flux = consts.e_charge * field.flux_ab / (2.0 * PI * hbar_c);
    0.25 - m * m + m * flux - flux * flux - 2.0 * mu * coeffs.b_coeff / (consts.hbar * consts.hbar)
}

/// The radicand α = 2μA/ħ² ± e²B²/(4ħ²c²) (the r² coefficient of the reduced
/// radial equation).
pub fn confinement_alpha(
    field: &FieldConfig,
    coeffs: &PotentialCoefficients,
    consts: &PhysicalConstants,
    mu: f64,
    sign: B2Sign,
) -> f64 {
    let hbar2 = consts.hbar * consts.hbar;
    let cyclotron = consts.e_charge * field.b_field / (2.0 * consts.hbar * consts.c);
    2.0 * mu * coeffs.a_coeff / hbar2 + sign.factor() * cyclotron * cyclotron
}

/// P = (ħ²/μ) √α, half the level spacing.
pub fn compute_p_scale(
    field: &FieldConfig,
    coeffs: &PotentialCoefficients,
    consts: &PhysicalConstants,
    mu: f64,
    sign: B2Sign,
) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
        });
    }
    let alpha = confinement_alpha(field, coeffs, consts, mu, sign);
    if alpha == 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    if alpha < 0.0 {
        return Err(Error::NegativeRadicand(alpha));
    }
    Ok(consts.hbar * consts.hbar / mu * alpha.sqrt())
}

/// Q = √(1/16 − γ/4).
pub fn compute_q_index(gamma: f64) -> Result<f64> {
    let radicand = 0.0625 - 0.25 * gamma;
    if radicand < 0.0 || !radicand.is_finite() {
        return Err(Error::ComplexIndex(radicand));
    }
    Ok(radicand.sqrt())
}

/// ε² = −2μ(E − C)/ħ² for a given energy.
pub fn epsilon_squared(energy: f64, c_shift: f64, consts: &PhysicalConstants, mu: f64) -> f64 {
    -2.0 * mu * (energy - c_shift) / (consts.hbar * consts.hbar)
}

/// Derived quantities fixing the linear spectrum `E_n = 2Pn + E₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumParams {
    pub gamma: f64,
    pub p_scale: f64,
    pub q_index: f64,
    pub e_zero: f64,
    pub c_shift: f64,
}

impl SpectrumParams {
    pub fn compute(
        field: &FieldConfig,
        coeffs: &PotentialCoefficients,
        consts: &PhysicalConstants,
        mu: f64,
        sign: B2Sign,
    ) -> Result<Self> {
        let gamma = compute_gamma(field, coeffs, consts, mu);
        let p_scale = compute_p_scale(field, coeffs, consts, mu, sign)?;
        let q_index = compute_q_index(gamma)?;
        Ok(Self::assemble(gamma, p_scale, q_index, coeffs.c_shift))
    }

    /// Builds parameters directly from P, Q and C (γ is inferred from Q).
    pub fn from_parts(p_scale: f64, q_index: f64, c_shift: f64) -> Result<Self> {
        if !(p_scale.is_finite() && p_scale > 0.0) {
            return Err(Error::InvalidParameter {
                name: "p_scale",
                value: p_scale,
            });
        }
        if !(q_index.is_finite() && q_index >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "q_index",
                value: q_index,
            });
        }
        if !c_shift.is_finite() {
            return Err(Error::InvalidParameter {
                name: "c_shift",
                value: c_shift,
            });
        }
        let gamma = 0.25 - 4.0 * q_index * q_index;
        Ok(Self::assemble(gamma, p_scale, q_index, c_shift))
    }

    fn assemble(gamma: f64, p_scale: f64, q_index: f64, c_shift: f64) -> Self {
        SpectrumParams {
            gamma,
            p_scale,
            q_index,
            e_zero: p_scale * (1.0 + 2.0 * q_index) + c_shift,
            c_shift,
        }
    }

    pub fn level_spacing(&self) -> f64 {
        2.0 * self.p_scale
    }

    pub fn energy_level(&self, n: u32) -> f64 {
        energy_level(self, n)
    }
}

pub fn energy_level(params: &SpectrumParams, n: u32) -> f64 {
    if n == 0 {
        params.e_zero
    } else {
        2.0 * params.p_scale * f64::from(n) + params.e_zero
    }
}

/// Everything needed to pose the bound-state problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct System {
    pub consts: PhysicalConstants,
    pub coeffs: PotentialCoefficients,
    pub mu: f64,
    pub field: FieldConfig,
    pub b2_sign: B2Sign,
}

impl System {
    pub fn gamma(&self) -> f64 {
        compute_gamma(&self.field, &self.coeffs, &self.consts, self.mu)
    }

    pub fn alpha(&self) -> f64 {
        confinement_alpha(&self.field, &self.coeffs, &self.consts, self.mu, self.b2_sign)
    }

    pub fn params(&self) -> Result<SpectrumParams> {
        SpectrumParams::compute(&self.field, &self.coeffs, &self.consts, self.mu, self.b2_sign)
    }

    pub fn with_field(&self, field: FieldConfig) -> Self {
        System { field, ..*self }
    }
}
