use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::CliError;
use crate::spectrum::{B2Sign, FieldConfig, System};
use crate::superstat::QRange;
use crate::units::{
    molecule_to_potential, MoleculeRecord, MoleculeRegistry, PotentialCoefficients, UnitSystem,
};

#[derive(Debug, Parser)]
#[command(
    name = "pseudoharmonic",
    version,
    about = "Superstatistics thermodynamics of a 2D pseudoharmonic oscillator in magnetic and AB fields"
)]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand, PartialEq)]
pub enum Command {
    /// Write CSV series of Z, F, U, S/k and C/k against beta.
    Figures,
    /// Run every oracle cross-check and report the worst relative errors.
    Validate,
    /// Print the lowest energy levels.
    Spectrum {
        #[arg(long, default_value_t = 5)]
        levels: u32,
    },
    /// Print Z, F, U, S/k, C/k at one inverse temperature.
    Thermo {
        #[arg(long)]
        beta: f64,
    },
}

/// Options shared by every subcommand. Each long flag is also a valid key in
/// the `key = value` configuration file.
#[derive(Debug, Default, Args)]
pub struct Options {
    /// Configuration file with `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `natural` or `molecule`.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Comma-separated molecule names (implies molecule mode).
    #[arg(long, global = true)]
    pub molecule: Option<String>,
    /// Extra molecules, one `name r_e mu D_e` record per line.
    #[arg(long, global = true)]
    pub molecule_file: Option<String>,
    #[arg(long, global = true)]
    pub a_coeff: Option<String>,
    #[arg(long, global = true)]
    pub b_coeff: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c_shift: Option<String>,
    #[arg(long, global = true)]
    pub mu: Option<String>,
    #[arg(long, global = true)]
    pub b_field: Option<String>,
    #[arg(long, global = true)]
    pub flux: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Comma-separated deformation parameters.
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// Accept q > 1.
    #[arg(long, global = true)]
    pub allow_large_q: bool,
    #[arg(long, global = true)]
    pub beta_min: Option<String>,
    #[arg(long, global = true)]
    pub beta_max: Option<String>,
    #[arg(long, global = true)]
    pub beta_count: Option<String>,
    /// `linear` or `log`.
    #[arg(long, global = true)]
    pub beta_spacing: Option<String>,
    /// `absolute` or `ground` (beta bounds in units of 1/E0).
    #[arg(long, global = true)]
    pub beta_scale: Option<String>,
    /// Sign of the e²B² term under the confinement root: `plus` or `minus`.
    #[arg(long, global = true)]
    pub b2_sign: Option<String>,
    #[arg(long, global = true)]
    pub output_dir: Option<String>,
    #[arg(long, global = true)]
    pub rel_tol: Option<String>,
}

const KEYS: &[&str] = &[
    "mode",
    "molecule",
    "molecule-file",
    "a-coeff",
    "b-coeff",
    "c-shift",
    "mu",
    "b-field",
    "flux",
    "m",
    "q",
    "allow-large-q",
    "beta-min",
    "beta-max",
    "beta-count",
    "beta-spacing",
    "beta-scale",
    "b2-sign",
    "output-dir",
    "rel-tol",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Natural,
    Molecule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaScale {
    Absolute,
    /// Bounds are multiples of 1/E₀ (the largest E₀ among the series).
    GroundEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaGridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
    pub scale: BetaScale,
}

impl BetaGridSpec {
    pub fn points(&self, unit: f64) -> Vec<f64> {
        let (lo, hi) = (self.min * unit, self.max * unit);
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return lo;
                }
                if i == last {
                    return hi;
                }
                let t = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => lo + t * (hi - lo),
                    Spacing::Log => (lo.ln() + t * (hi / lo).ln()).exp(),
                }
            })
            .collect()
    }
}

/// A4 = 1, B = 1, C = 0, μ = 1 in ħ = c = e = 1 units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalPotential {
    pub coeffs: PotentialCoefficients,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub molecules: Vec<MoleculeRecord>,
    pub natural: NaturalPotential,
    pub field: FieldConfig,
    pub q_values: Vec<f64>,
    pub q_range: QRange,
    pub beta: BetaGridSpec,
    pub b2_sign: B2Sign,
    pub output_dir: PathBuf,
    pub rel_tol: f64,
}

/// One named system evaluated by the figure and validation commands.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub system: System,
}

impl RunConfig {
    pub fn units(&self) -> UnitSystem {
        match self.mode {
            Mode::Natural => UnitSystem::natural(),
            Mode::Molecule => UnitSystem::molecular(),
        }
    }

    fn system_with(&self, coeffs: PotentialCoefficients, mu: f64, field: FieldConfig) -> System {
        System {
            consts: self.units().constants(),
            coeffs,
            mu,
            field,
            b2_sign: self.b2_sign,
        }
    }

    /// Systems under the configured field (natural mode yields one).
    pub fn systems(&self, fields_on: bool) -> Vec<Series> {
        let field = if fields_on {
            self.field
        } else {
            self.field.fields_off()
        };
        match self.mode {
            Mode::Natural => vec![Series {
                label: "natural".into(),
                system: self.system_with(self.natural.coeffs, self.natural.mu, field),
            }],
            Mode::Molecule => {
                let units = self.units();
                self.molecules
                    .iter()
                    .map(|rec| Series {
                        label: rec.name.clone(),
                        system: self.system_with(
                            molecule_to_potential(rec, &units),
                            rec.reduced_mass(&units),
                            field,
                        ),
                    })
                    .collect()
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_config_text(&text)
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected `key = value`", idx + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(usage(format!("config line {}: unknown key `{key}`", idx + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

fn flag_entries(o: &Options) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    let pairs: [(&'static str, &Option<String>); 19] = [
        ("mode", &o.mode),
        ("molecule", &o.molecule),
        ("molecule-file", &o.molecule_file),
        ("a-coeff", &o.a_coeff),
        ("b-coeff", &o.b_coeff),
        ("c-shift", &o.c_shift),
        ("mu", &o.mu),
        ("b-field", &o.b_field),
        ("flux", &o.flux),
        ("m", &o.m),
        ("q", &o.q),
        ("beta-min", &o.beta_min),
        ("beta-max", &o.beta_max),
        ("beta-count", &o.beta_count),
        ("beta-spacing", &o.beta_spacing),
        ("beta-scale", &o.beta_scale),
        ("b2-sign", &o.b2_sign),
        ("output-dir", &o.output_dir),
        ("rel-tol", &o.rel_tol),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            out.push((key, v.clone()));
        }
    }
    if o.allow_large_q {
        out.push(("allow-large-q", "true".into()));
    }
    out
}

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| usage(format!("--{key}: `{v}` is not a finite number"))),
        }
    }

    fn integer<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<T>()
                .map_err(|_| usage(format!("--{key}: `{v}` is not an integer"))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(usage(format!("--{key}: `{v}` is not a boolean"))),
        }
    }
}

/// Resolves a run configuration. Precedence: flags, then file, then defaults.
pub fn parse_config(
    options: &Options,
    file: Option<&Path>,
) -> Result<RunConfig, CliError> {
    let mut map = match file {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    for (key, value) in flag_entries(options) {
        map.insert(key.to_string(), value);
    }
    resolve(Entries(map))
}

/// Parses a full argument vector (program name first).
pub fn parse_args<I, T>(args: I) -> Result<(Command, RunConfig), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Clap)?;
    let config = parse_config(&cli.options, cli.options.config.as_deref())?;
    Ok((cli.command.unwrap_or(Command::Figures), config))
}

fn resolve(e: Entries) -> Result<RunConfig, CliError> {
    let mode = match e.raw("mode") {
        Some("natural") => Mode::Natural,
        Some("molecule") => Mode::Molecule,
        Some(other) => {
            return Err(usage(format!(
                "--mode: expected `natural` or `molecule`, got `{other}`"
            )))
        }
        None if e.raw("molecule").is_some() => Mode::Molecule,
        None => Mode::Natural,
    };

    let mut registry = MoleculeRegistry::default();
    if let Some(path) = e.raw("molecule-file") {
        let text = std::fs::read_to_string(path).map_err(|err| CliError::Io {
            path: PathBuf::from(path),
            source: err,
        })?;
        registry
            .extend_from_str(&text)
            .map_err(|err| usage(format!("--molecule-file {path}: {err}")))?;
    }
    let molecules = match (mode, e.raw("molecule")) {
        (Mode::Natural, _) => Vec::new(),
        (Mode::Molecule, None) => registry.records().to_vec(),
        (Mode::Molecule, Some(list)) => {
            let names: Vec<&str> = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            if names.is_empty() {
                return Err(usage("--molecule: empty molecule list"));
            }
            names
                .iter()
                .map(|n| {
                    registry
                        .lookup(n)
                        .cloned()
                        .map_err(|err| usage(format!("--molecule: {err}")))
                })
                .collect::<Result<_, _>>()?
        }
    };

    let coeffs = PotentialCoefficients::new(
        e.number("a-coeff", 1.0)?,
        e.number("b-coeff", 1.0)?,
        e.number("c-shift", 0.0)?,
    )
    .map_err(|err| usage(err.to_string()))?;
    let mu = e.number("mu", 1.0)?;
    if mu <= 0.0 {
        return Err(usage(format!("--mu: must be positive, got {mu}")));
    }

    let field = FieldConfig::new(
        e.number("b-field", 3.0)?,
        e.number("flux", 1.0)?,
        e.integer("m", 1i32)?,
    )
    .map_err(|err| usage(err.to_string()))?;

    let q_range = if e.flag("allow-large-q")? {
        QRange::Exploratory
    } else {
        QRange::Bounded
    };
    let q_values: Vec<f64> = match e.raw("q") {
        None => match mode {
            Mode::Natural => vec![0.0, 0.3, 0.7, 1.0],
            Mode::Molecule => vec![0.5],
        },
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|q| q.is_finite())
                    .ok_or_else(|| usage(format!("--q: `{s}` is not a number")))
            })
            .collect::<Result<_, _>>()?,
    };
    if q_values.is_empty() {
        return Err(usage("--q: empty list"));
    }
    for &q in &q_values {
        let upper_ok = q <= 1.0 || q_range == QRange::Exploratory;
        if q < 0.0 || !upper_ok {
            return Err(usage(format!(
                "--q: {q} outside [0, 1] (pass --allow-large-q for q > 1)"
            )));
        }
    }

    let (default_min, default_max, default_spacing, default_scale) = match mode {
        Mode::Natural => (0.05, 0.6, Spacing::Linear, BetaScale::Absolute),
        Mode::Molecule => (0.05, 1.5, Spacing::Log, BetaScale::GroundEnergy),
    };
    let spacing = match e.raw("beta-spacing") {
        None => default_spacing,
        Some("linear") => Spacing::Linear,
        Some("log") => Spacing::Log,
        Some(v) => return Err(usage(format!("--beta-spacing: expected `linear` or `log`, got `{v}`"))),
    };
    let scale = match e.raw("beta-scale") {
        None => default_scale,
        Some("absolute") => BetaScale::Absolute,
        Some("ground") => BetaScale::GroundEnergy,
        Some(v) => return Err(usage(format!("--beta-scale: expected `absolute` or `ground`, got `{v}`"))),
    };
    let beta = BetaGridSpec {
        min: e.number("beta-min", default_min)?,
        max: e.number("beta-max", default_max)?,
        count: e.integer("beta-count", 200usize)?,
        spacing,
        scale,
    };
    if !(beta.min > 0.0 && beta.max > beta.min) {
        return Err(usage(format!(
            "--beta-min/--beta-max: need 0 < min < max, got {} and {}",
            beta.min, beta.max
        )));
    }
    if beta.count < 2 {
        return Err(usage(format!("--beta-count: need at least 2, got {}", beta.count)));
    }

    let b2_sign = match e.raw("b2-sign") {
        None => B2Sign::Plus,
        Some(v) => v.parse().map_err(|msg| usage(format!("--b2-sign: {msg}")))?,
    };
    let rel_tol = e.number("rel-tol", 1e-8)?;
    if rel_tol <= 0.0 {
        return Err(usage(format!("--rel-tol: must be positive, got {rel_tol}")));
    }

    Ok(RunConfig {
        mode,
        molecules,
        natural: NaturalPotential { coeffs, mu },
        field,
        q_values,
        q_range,
        beta,
        b2_sign,
        output_dir: PathBuf::from(e.raw("output-dir").unwrap_or("figures")),
        rel_tol,
    })
}
