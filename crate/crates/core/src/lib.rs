//! Bound states and q-deformed superstatistics of a charged particle in a 2D
//! pseudoharmonic well with a uniform magnetic field and an Aharonov–Bohm
//! flux line.
//!
//! The analytic results live in [`spectrum`] and [`superstat`]; [`nu`] and
//! [`radial`] are independent routes to the same spectrum and serve as
//! oracles, as does the numerical partition integral in [`superstat`].

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod nu;
pub mod polynomials;
pub mod quadrature;
pub mod radial;
pub mod spectrum;
pub mod superstat;
pub mod units;

pub use error::{Error, Result};
pub use spectrum::{B2Sign, FieldConfig, SpectrumParams, System};
pub use superstat::{ThermoPoint, ThermoQuery};
pub use units::{MoleculeRecord, PhysicalConstants, PotentialCoefficients, UnitSystem};
