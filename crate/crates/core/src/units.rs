//! Physical constants, unit handling and the diatomic molecule registry.
//!
//! Two unit systems are supported. `Natural` sets ħ = c = e = k_B = 1 and takes
//! every input as a bare number. `Molecular` works in eV for energies, Å for
//! lengths and eV/c² for masses, with c = 1 so that ħ carries the value of ħc
//! in eV·Å. Magnetic fields are given in tesla and fluxes in T·Å² in that mode.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// ħc in eV·Å (CODATA 2018).
pub const HBAR_C_EV_ANGSTROM: f64 = 1973.269804;
/// Atomic mass unit rest energy in eV (CODATA 2018).
pub const AMU_EV: f64 = 931.49410242e6;
/// One wavenumber (cm⁻¹) expressed in eV (CODATA 2018).
pub const WAVENUMBER_EV: f64 = 1.239841984e-4;
/// Boltzmann constant in eV/K (CODATA 2018).
pub const BOLTZMANN_EV_PER_K: f64 = 8.617333262e-5;
/// Elementary charge in eV·Å/T when c = 1 and ħ = ħc (numerically c·10⁻¹⁰ in SI).
pub const CHARGE_EV_ANGSTROM_PER_TESLA: f64 = 2.99792458e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub e_charge: f64,
    pub k_boltzmann: f64,
}

impl PhysicalConstants {
    pub const fn natural() -> Self {
        PhysicalConstants {
            hbar: 1.0,
            c: 1.0,
            e_charge: 1.0,
            k_boltzmann: 1.0,
        }
    }

    pub const fn molecular() -> Self {
        PhysicalConstants {
            hbar: HBAR_C_EV_ANGSTROM,
            c: 1.0,
            e_charge: CHARGE_EV_ANGSTROM_PER_TESLA,
            k_boltzmann: BOLTZMANN_EV_PER_K,
        }
    }

    pub fn new(hbar: f64, c: f64, e_charge: f64, k_boltzmann: f64) -> Result<Self> {
        for (name, value) in [
            ("hbar", hbar),
            ("c", c),
            ("e_charge", e_charge),
            ("k_boltzmann", k_boltzmann),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(PhysicalConstants {
            hbar,
            c,
            e_charge,
            k_boltzmann,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitMode {
    Natural,
    Molecular,
}

/// Conversion between tabulated spectroscopic units and the internal system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    mode: UnitMode,
    length: f64,
    mass: f64,
    energy: f64,
}

impl UnitSystem {
    pub const fn natural() -> Self {
        UnitSystem {
            mode: UnitMode::Natural,
            length: 1.0,
            mass: 1.0,
            energy: 1.0,
        }
    }

    /// Å → Å, amu → eV/c², cm⁻¹ → eV.
    pub const fn molecular() -> Self {
        UnitSystem {
            mode: UnitMode::Molecular,
            length: 1.0,
            mass: AMU_EV,
            energy: WAVENUMBER_EV,
        }
    }

    pub fn for_mode(mode: UnitMode) -> Self {
        match mode {
            UnitMode::Natural => Self::natural(),
            UnitMode::Molecular => Self::molecular(),
        }
    }

    pub fn mode(&self) -> UnitMode {
        self.mode
    }

    pub fn constants(&self) -> PhysicalConstants {
        match self.mode {
            UnitMode::Natural => PhysicalConstants::natural(),
            UnitMode::Molecular => PhysicalConstants::molecular(),
        }
    }

    pub fn length_to_internal(&self, angstrom: f64) -> f64 {
        angstrom * self.length
    }

    pub fn length_from_internal(&self, value: f64) -> f64 {
        value / self.length
    }

    pub fn mass_to_internal(&self, amu: f64) -> f64 {
        amu * self.mass
    }

    pub fn mass_from_internal(&self, value: f64) -> f64 {
        value / self.mass
    }

    pub fn energy_to_internal(&self, wavenumber: f64) -> f64 {
        wavenumber * self.energy
    }

    pub fn energy_from_internal(&self, value: f64) -> f64 {
        value / self.energy
    }
}

/// One row of spectroscopic constants: r_e in Å, μ in amu, D_e in cm⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeRecord {
    pub name: String,
    pub r_e: f64,
    pub mu: f64,
    pub d_e: f64,
}

impl MoleculeRecord {
    pub fn new(name: impl Into<String>, r_e: f64, mu: f64, d_e: f64) -> Result<Self> {
        for (field, value) in [("r_e", r_e), ("mu", mu), ("D_e", d_e)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name: field, value });
            }
        }
        Ok(MoleculeRecord {
            name: name.into(),
            r_e,
            mu,
            d_e,
        })
    }

    /// Reduced mass in internal units.
    pub fn reduced_mass(&self, units: &UnitSystem) -> f64 {
        units.mass_to_internal(self.mu)
    }
}

const BUILTIN: [(&str, f64, f64, f64); 4] = [
    ("N2", 1.0940, 7.00335, 98288.03528),
    ("Cl2", 1.9872, 17.4844, 20276.440),
    ("I2", 2.6664, 63.452235, 12547.300),
    ("CH", 1.1198, 0.929931, 31838.08149),
];

/// Built-in molecules, optionally extended from a plain-text file.
#[derive(Debug, Clone)]
pub struct MoleculeRegistry {
    records: Vec<MoleculeRecord>,
}

impl Default for MoleculeRegistry {
    fn default() -> Self {
        let records = BUILTIN
            .iter()
            .map(|&(name, r_e, mu, d_e)| MoleculeRecord {
                name: name.to_string(),
                r_e,
                mu,
                d_e,
            })
            .collect();
        MoleculeRegistry { records }
    }
}

impl MoleculeRegistry {
    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTIN.iter().map(|row| row.0)
    }

    pub fn records(&self) -> &[MoleculeRecord] {
        &self.records
    }

    pub fn lookup(&self, name: &str) -> Result<&MoleculeRecord> {
        self.records
            .iter()
            .find(|r| r.name.eq_ignore_ascii_case(name.trim()))
            .ok_or_else(|| Error::UnknownMolecule(name.to_string()))
    }

    /// Adds or replaces a record (matched case-insensitively).
    pub fn insert(&mut self, record: MoleculeRecord) {
        match self
            .records
            .iter_mut()
            .find(|r| r.name.eq_ignore_ascii_case(&record.name))
        {
            Some(slot) => *slot = record,
            None => self.records.push(record),
        }
    }

    /// Parses `name r_e mu D_e` lines. Blank lines and `#` comments are skipped.
    pub fn extend_from_str(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::MoleculeFile {
                    line: idx + 1,
                    message: format!("expected 4 fields `name r_e mu D_e`, found {}", fields.len()),
                });
            }
            let mut values = [0.0; 3];
            for (slot, text) in values.iter_mut().zip(&fields[1..]) {
                *slot = text.parse().map_err(|_| Error::MoleculeFile {
                    line: idx + 1,
                    message: format!("cannot parse `{text}` as a number"),
                })?;
            }
            let record = MoleculeRecord::new(fields[0], values[0], values[1], values[2])
                .map_err(|e| Error::MoleculeFile {
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            self.insert(record);
        }
        Ok(())
    }

    pub fn extend_from_file(&mut self, path: &Path) -> std::io::Result<Result<()>> {
        let text = std::fs::read_to_string(path)?;
        Ok(self.extend_from_str(&text))
    }
}

/// Case-insensitive lookup in the built-in registry.
pub fn lookup_molecule(name: &str) -> Result<MoleculeRecord> {
    MoleculeRegistry::default().lookup(name).cloned()
}

/// Coefficients of V(r) = A r² + B / r² + C in internal units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialCoefficients {
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub c_shift: f64,
}

impl PotentialCoefficients {
    pub fn new(a_coeff: f64, b_coeff: f64, c_shift: f64) -> Result<Self> {
        if !(a_coeff.is_finite() && a_coeff >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "a_coeff",
                value: a_coeff,
            });
        }
        if !(b_coeff.is_finite() && b_coeff >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "b_coeff",
                value: b_coeff,
            });
        }
        if !c_shift.is_finite() {
            return Err(Error::InvalidParameter {
                name: "c_shift",
                value: c_shift,
            });
        }
        Ok(PotentialCoefficients {
            a_coeff,
            b_coeff,
            c_shift,
        })
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.a_coeff * r * r + self.b_coeff / (r * r) + self.c_shift
    }
}

/// Maps D_e (r/r_e − r_e/r)² onto A r² + B/r² + C.
pub fn molecule_to_potential(rec: &MoleculeRecord, units: &UnitSystem) -> PotentialCoefficients {
    let r_e = units.length_to_internal(rec.r_e);
    let d_e = units.energy_to_internal(rec.d_e);
    PotentialCoefficients {
        a_coeff: d_e / (r_e * r_e),
        b_coeff: d_e * r_e * r_e,
        c_shift: -2.0 * d_e,
    }
}

impl fmt::Display for UnitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitMode::Natural => f.write_str("natural"),
            UnitMode::Molecular => f.write_str("molecular"),
        }
    }
}
