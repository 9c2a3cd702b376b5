//! Parametric Nikiforov–Uvarov solver.
//!
//! Works on equations of the form
//!
//! ```text
//! ψ'' + (α₁ − α₂s)/(s(1 − α₃s)) ψ' + (−ξ₁s² + ξ₂s − ξ₃)/(s²(1 − α₃s)²) ψ = 0
//! ```
//!
//! The pseudoharmonic problem in `s = r²` maps onto it with α₁ = 1/2,
//! α₂ = α₃ = 0, ξ₁ = α/4, ξ₂ = −ε²/4, ξ₃ = −γ/4. Since α₃ = 0 there, the
//! eigenfunctions are taken in the confluent (Laguerre) limit
//! `ψ(s) = s^{α₁₂} e^{α₁₃ s} L_n^{(α₁₀−1)}(α₁₁ s)`.

use crate::error::{Error, Result};
use crate::polynomials::laguerre_poly;
use crate::quadrature;
use crate::spectrum::System;

pub use crate::polynomials::jacobi_poly;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuTemplate {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuDerived {
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub alpha7: f64,
    pub alpha8: f64,
    pub alpha9: f64,
    pub alpha10: f64,
    pub alpha11: f64,
    pub alpha12: f64,
    pub alpha13: f64,
}

pub fn nu_derive(t: &NuTemplate) -> Result<NuDerived> {
    let alpha4 = 0.5 * (1.0 - t.alpha1);
    let alpha5 = 0.5 * (t.alpha2 - 2.0 * t.alpha3);
    let alpha6 = alpha5 * alpha5 + t.xi1;
    let alpha7 = 2.0 * alpha4 * alpha5 - t.xi2;
    let alpha8 = alpha4 * alpha4 + t.xi3;
    if alpha8 < 0.0 {
        return Err(Error::ComplexCoefficient {
            name: "alpha8",
            value: alpha8,
        });
    }
    let alpha9 = t.alpha3 * alpha7 + t.alpha3 * t.alpha3 * alpha8 + alpha6;
    if alpha9 < 0.0 {
        return Err(Error::ComplexCoefficient {
            name: "alpha9",
            value: alpha9,
        });
    }
    let (r8, r9) = (alpha8.sqrt(), alpha9.sqrt());
    Ok(NuDerived {
        alpha4,
        alpha5,
        alpha6,
        alpha7,
        alpha8,
        alpha9,
        alpha10: t.alpha1 + 2.0 * alpha4 + 2.0 * r8,
        alpha11: t.alpha2 - 2.0 * alpha5 + 2.0 * (r9 + t.alpha3 * r8),
        alpha12: alpha4 + r8,
        alpha13: alpha5 - (r9 + t.alpha3 * r8),
    })
}

/// Left-hand side of the quantization condition; zero at a bound state.
pub fn nu_energy_residual(t: &NuTemplate, d: &NuDerived, n: u32) -> f64 {
    let n = f64::from(n);
    let (r8, r9) = (d.alpha8.sqrt(), d.alpha9.sqrt());
    t.alpha2 * n - (2.0 * n + 1.0) * d.alpha5
        + (2.0 * n + 1.0) * (r9 + t.alpha3 * r8)
        + n * (n - 1.0) * t.alpha3
        + d.alpha7
        + 2.0 * t.alpha3 * d.alpha8
        + 2.0 * (d.alpha8 * d.alpha9).sqrt()
}

/// Maps the `s = r²` radial equation onto the NU template for a trial ε².
pub fn pseudoharmonic_template(alpha: f64, gamma: f64, epsilon_sq: f64) -> NuTemplate {
    NuTemplate {
        alpha1: 0.5,
        alpha2: 0.0,
        alpha3: 0.0,
        xi1: 0.25 * alpha,
        xi2: -0.25 * epsilon_sq,
        xi3: -0.25 * gamma,
    }
}

fn checked_alpha(system: &System) -> Result<f64> {
    let alpha = system.alpha();
    if alpha == 0.0 {
        Err(Error::DegenerateSpectrum)
    } else if alpha < 0.0 {
        Err(Error::NegativeRadicand(alpha))
    } else {
        Ok(alpha)
    }
}

fn residual_at(alpha: f64, gamma: f64, epsilon_sq: f64, n: u32) -> Result<f64> {
    let t = pseudoharmonic_template(alpha, gamma, epsilon_sq);
    let d = nu_derive(&t).map_err(|e| match e {
        Error::ComplexCoefficient { value, .. } => Error::ComplexIndex(value),
        other => other,
    })?;
    Ok(nu_energy_residual(&t, &d, n))
}

/// ε² solving the quantization condition for level n.
fn solve_epsilon_sq(alpha: f64, gamma: f64, n: u32) -> Result<f64> {
    // The residual is affine in ε² here; a wide secant gives the slope
    // without cancellation, and one correction step polishes the root.
    let r0 = residual_at(alpha, gamma, 0.0, n)?;
    let far = if r0 == 0.0 { -1.0 } else { -8.0 * r0 };
    let r_far = residual_at(alpha, gamma, far, n)?;
    let slope = (r_far - r0) / far;
    let mut eps2 = -r0 / slope;
    let correction = residual_at(alpha, gamma, eps2, n)?;
    eps2 -= correction / slope;
    Ok(eps2)
}

/// Energy of level n obtained from the NU quantization condition.
pub fn solve_pseudoharmonic_nu(system: &System, n: u32) -> Result<f64> {
    let alpha = checked_alpha(system)?;
    let eps2 = solve_epsilon_sq(alpha, system.gamma(), n)?;
    let hbar2 = system.consts.hbar * system.consts.hbar;
    Ok(system.coeffs.c_shift - hbar2 * eps2 / (2.0 * system.mu))
}

/// Normalized ψ(r) = R(r)/√r for level n, with ∫|ψ|² 2πr dr = 1.
#[derive(Debug, Clone, Copy)]
pub struct RadialWavefunction {
    n: u32,
    power: f64,
    gauss: f64,
    laguerre_order: f64,
    laguerre_scale: f64,
    r_peak: f64,
    r_extent: f64,
    log_norm: f64,
}

impl RadialWavefunction {
    pub fn new(system: &System, n: u32) -> Result<Self> {
        let alpha = checked_alpha(system)?;
        let gamma = system.gamma();
        let eps2 = solve_epsilon_sq(alpha, gamma, n)?;
        let t = pseudoharmonic_template(alpha, gamma, eps2);
        let d = nu_derive(&t)?;

        // ψ(s)/√r with s = r²: r^{2α₁₂ − 1/2} e^{α₁₃ r²} L(α₁₁ r²).
        let power = 2.0 * d.alpha12 - 0.5;
        let gauss = d.alpha13;
        let r_peak = (power.max(0.5) / (-2.0 * gauss)).sqrt();
        let shape = power + 2.0 * f64::from(n) + 1.0;
        let u_max = shape + 20.0 * shape.sqrt() + 100.0;
        let r_extent = (u_max / (-2.0 * gauss)).sqrt();

        let mut wf = RadialWavefunction {
            n,
            power,
            gauss,
            laguerre_order: d.alpha10 - 1.0,
            laguerre_scale: d.alpha11,
            r_peak,
            r_extent,
            log_norm: 0.0,
        };
        let norm = quadrature::integrate(
            |r| {
                let v = wf.eval(r);
                2.0 * std::f64::consts::PI * r * v * v
            },
            0.0,
            r_extent,
            0.0,
            1e-12,
            5000,
        )?;
        wf.log_norm = -0.5 * norm.value.ln();
        Ok(wf)
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    /// Radius beyond which the density is negligible.
    pub fn extent(&self) -> f64 {
        self.r_extent
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return if self.power == 0.0 {
                self.eval(f64::MIN_POSITIVE)
            } else {
                0.0
            };
        }
        let log_env = self.power * (r / self.r_peak).ln()
            + self.gauss * (r * r - self.r_peak * self.r_peak)
            + self.log_norm;
        let poly = laguerre_poly(self.n, self.laguerre_order, self.laguerre_scale * r * r)
            .expect("Laguerre order is non-negative");
        log_env.exp() * poly
    }
}

pub fn radial_wavefunction(system: &System, n: u32, r: f64) -> Result<f64> {
    Ok(RadialWavefunction::new(system, n)?.eval(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{B2Sign, FieldConfig};
    use crate::units::{PhysicalConstants, PotentialCoefficients};

    fn oscillator(m: i32) -> System {
        System {
            consts: PhysicalConstants::natural(),
            coeffs: PotentialCoefficients::new(0.5, 0.0, 0.0).unwrap(),
            mu: 1.0,
            field: FieldConfig::new(0.0, 0.0, m).unwrap(),
            b2_sign: B2Sign::Plus,
        }
    }

    #[test]
    fn pseudoharmonic_mapping_coefficients() {
        let (alpha, gamma, eps2) = (3.0, -2.5, -7.0);
        let d = nu_derive(&pseudoharmonic_template(alpha, gamma, eps2)).unwrap();
        assert_eq!(d.alpha4, 0.25);
        assert_eq!(d.alpha5, 0.0);
        assert_eq!(d.alpha6, alpha / 4.0);
        assert_eq!(d.alpha7, eps2 / 4.0);
        assert_eq!(d.alpha8, 1.0 / 16.0 - gamma / 4.0);
    }

    #[test]
    fn derive_edge_cases() {
        let t = NuTemplate {
            alpha1: 1.0,
            alpha2: 0.3,
            alpha3: 0.0,
            xi1: 1.0,
            xi2: 0.0,
            xi3: 0.0,
        };
        assert_eq!(nu_derive(&t).unwrap().alpha4, 0.0);

        let t = NuTemplate {
            alpha1: 0.5,
            xi3: -0.0625,
            ..t
        };
        let d = nu_derive(&t).unwrap();
        assert_eq!(d.alpha8, 0.0);
        assert_eq!(d.alpha12, d.alpha4);

        let t = NuTemplate { xi3: -1.0, ..t };
        assert!(matches!(
            nu_derive(&t),
            Err(Error::ComplexCoefficient { name: "alpha8", .. })
        ));
    }

    #[test]
    fn residual_examples() {
        let (alpha, gamma) = (2.0f64, -1.3f64);
        let q = (1.0 / 16.0 - gamma / 4.0).sqrt();
        for n in 0..5 {
            let eps2 = -2.0 * alpha.sqrt() * (2.0 * f64::from(n) + 1.0 + 2.0 * q);
            let t = pseudoharmonic_template(alpha, gamma, eps2);
            let r = nu_energy_residual(&t, &nu_derive(&t).unwrap(), n);
            assert!(r.abs() < 1e-12);
            let t1 = pseudoharmonic_template(alpha, gamma, eps2 + 1.0);
            let r1 = nu_energy_residual(&t1, &nu_derive(&t1).unwrap(), n);
            assert!((r1 - 0.25).abs() < 1e-12);
        }
        let zero = NuTemplate {
            alpha1: 1.0,
            alpha2: 0.0,
            alpha3: 0.0,
            xi1: 0.0,
            xi2: 0.0,
            xi3: 0.0,
        };
        assert_eq!(nu_energy_residual(&zero, &nu_derive(&zero).unwrap(), 0), 0.0);
    }

    #[test]
    fn oscillator_levels() {
        let sys = oscillator(0);
        for n in 0..6 {
            let e = solve_pseudoharmonic_nu(&sys, n).unwrap();
            assert!((e - f64::from(2 * n + 1)).abs() < 1e-13);
        }
    }

    #[test]
    fn shifted_ground_state_is_zero() {
        let mut sys = oscillator(2);
        let p = sys.params().unwrap();
        sys.coeffs.c_shift = -p.p_scale * (1.0 + 2.0 * p.q_index);
        assert!(solve_pseudoharmonic_nu(&sys, 0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn wavefunction_nodes_and_orthonormality() {
        let sys = System {
            field: FieldConfig::new(3.0, 1.0, 1).unwrap(),
            coeffs: PotentialCoefficients::new(1.0, 1.0, 0.0).unwrap(),
            ..oscillator(1)
        };
        let waves: Vec<_> = (0..4)
            .map(|n| RadialWavefunction::new(&sys, n).unwrap())
            .collect();
        let r_max = waves.iter().map(|w| w.extent()).fold(0.0, f64::max);
        for w in &waves {
            let samples: Vec<f64> = (1..4000).map(|i| w.eval(r_max * f64::from(i) / 4000.0)).collect();
            let changes = samples
                .windows(2)
                .filter(|p| p[0] * p[1] < 0.0)
                .count();
            assert_eq!(changes as u32, w.level());
        }
        for (i, a) in waves.iter().enumerate() {
            for b in &waves[i..] {
                let overlap = quadrature::integrate(
                    |r| 2.0 * std::f64::consts::PI * r * a.eval(r) * b.eval(r),
                    0.0,
                    r_max,
                    1e-13,
                    1e-12,
                    5000,
                )
                .unwrap()
                .value;
                let expect = if a.level() == b.level() { 1.0 } else { 0.0 };
                assert!((overlap - expect).abs() < 1e-8, "<{}|{}> = {overlap}", a.level(), b.level());
            }
        }
    }
}
