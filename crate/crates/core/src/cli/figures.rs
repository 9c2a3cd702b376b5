use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::{BetaScale, Mode, RunConfig};
use super::CliError;
use crate::error::Result as CoreResult;
use crate::spectrum::SpectrumParams;
use crate::superstat::{thermo_point, ThermoPoint, ThermoQuery};

/// Scientific notation with 12 significant digits; non-finite values as `nan`.
pub fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        "nan".to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutput {
    pub files: Vec<PathBuf>,
    /// Rows in which at least one value could not be computed.
    pub failed_rows: usize,
}

struct Curve {
    label: String,
    params: CoreResult<SpectrumParams>,
    q: f64,
}

struct Group {
    tag: &'static str,
    curves: Vec<Curve>,
}

const QUANTITIES: [(&str, &str); 5] = [
    ("Z", "Z"),
    ("F", "F"),
    ("U", "U"),
    ("S", "S_over_k"),
    ("C", "C_over_k"),
];

fn quantity(t: &ThermoPoint, idx: usize) -> f64 {
    match idx {
        0 => t.z_partition,
        1 => t.f_helmholtz,
        2 => t.u_internal,
        3 => t.s_over_k,
        _ => t.c_over_k,
    }
}

fn groups(cfg: &RunConfig) -> Vec<Group> {
    let curves_for = |fields_on: bool| -> Vec<Curve> {
        let mut out = Vec::new();
        for series in cfg.systems(fields_on) {
            for &q in &cfg.q_values {
                let label = match (cfg.mode, cfg.q_values.len()) {
                    (Mode::Natural, _) => format!("q{q}"),
                    (Mode::Molecule, 1) => series.label.clone(),
                    (Mode::Molecule, _) => format!("{}_q{q}", series.label),
                };
                out.push(Curve {
                    label,
                    params: series.system.params(),
                    q,
                });
            }
        }
        out
    };
    match cfg.mode {
        Mode::Natural => vec![Group {
            tag: "deformation",
            curves: curves_for(true),
        }],
        Mode::Molecule => vec![
            Group {
                tag: "fields_on",
                curves: curves_for(true),
            },
            Group {
                tag: "fields_off",
                curves: curves_for(false),
            },
        ],
    }
}

/// Common β grid. With ground-energy scaling the bounds are divided by the
/// largest |E₀| among all curves.
pub fn beta_grid(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let unit = match cfg.beta.scale {
        BetaScale::Absolute => 1.0,
        BetaScale::GroundEnergy => {
            let e0_max = groups(cfg)
                .iter()
                .flat_map(|g| g.curves.iter())
                .filter_map(|c| c.params.as_ref().ok().map(|p| p.e_zero.abs()))
                .fold(0.0f64, f64::max);
            if !(e0_max > 0.0 && e0_max.is_finite()) {
                return Err(CliError::Usage(
                    "--beta-scale ground: no curve has a nonzero ground energy".into(),
                ));
            }
            1.0 / e0_max
        }
    };
    Ok(cfg.beta.points(unit))
}

fn evaluate(curve: &Curve, beta: f64, cfg: &RunConfig) -> Option<ThermoPoint> {
    let params = curve.params.as_ref().ok()?;
    let query = ThermoQuery::with_range(beta, curve.q, cfg.q_range).ok()?;
    thermo_point(params, &query)
        .ok()
        .filter(|t| (0..5).all(|i| quantity(t, i).is_finite()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Writes one combined table and five per-quantity tables for each group.
pub fn cmd_figures(cfg: &RunConfig) -> Result<FigureOutput, CliError> {
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.clone(),
        source: e,
    })?;
    let betas = beta_grid(cfg)?;
    let mut files = Vec::new();
    let mut failed_rows = 0;

    for group in groups(cfg) {
        let rows: Vec<Vec<Option<ThermoPoint>>> = betas
            .iter()
            .map(|&b| group.curves.iter().map(|c| evaluate(c, b, cfg)).collect())
            .collect();
        failed_rows += rows.iter().filter(|r| r.iter().any(Option::is_none)).count();

        let mut combined = String::from("beta");
        for c in &group.curves {
            for (_, name) in QUANTITIES {
                let _ = write!(combined, ",{name}_{}", c.label);
            }
        }
        combined.push('\n');
        for (beta, row) in betas.iter().zip(&rows) {
            combined.push_str(&fmt_value(*beta));
            for point in row {
                for i in 0..QUANTITIES.len() {
                    let v = point.map_or(f64::NAN, |t| quantity(&t, i));
                    let _ = write!(combined, ",{}", fmt_value(v));
                }
            }
            combined.push('\n');
        }
        let path = dir.join(format!("thermo_{}.csv", group.tag));
        write_file(&path, &combined)?;
        files.push(path);

        for (i, (short, name)) in QUANTITIES.iter().enumerate() {
            let mut text = String::from("beta");
            for c in &group.curves {
                let _ = write!(text, ",{name}_{}", c.label);
            }
            text.push('\n');
            for (beta, row) in betas.iter().zip(&rows) {
                text.push_str(&fmt_value(*beta));
                for point in row {
                    let v = point.map_or(f64::NAN, |t| quantity(&t, i));
                    let _ = write!(text, ",{}", fmt_value(v));
                }
                text.push('\n');
            }
            let path = dir.join(format!("fig_{short}_{}.csv", group.tag));
            write_file(&path, &text)?;
            files.push(path);
        }
    }
    Ok(FigureOutput { files, failed_rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_format() {
        assert_eq!(fmt_value(1.0), "1.00000000000e0");
        assert_eq!(fmt_value(-2.5e-7), "-2.50000000000e-7");
        assert_eq!(fmt_value(f64::NAN), "nan");
        assert_eq!(fmt_value(f64::INFINITY), "nan");
    }
}
