//! Command-line front end: configuration, figure data and validation.
//!
//! Exit codes: 0 success, 1 validation or numeric failure, 2 usage error,
//! 3 I/O error.

pub mod config;
pub mod figures;
pub mod validate;

use std::io::Write;
use std::path::PathBuf;

pub use config::{parse_args, parse_config, Command, Mode, RunConfig};
pub use figures::{cmd_figures, FigureOutput};
pub use validate::{cmd_validate, CheckOutcome};

use crate::superstat::{thermo_point, ThermoQuery};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Clap(clap::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Clap(e) => e.exit_code(),
            CliError::Io { .. } => 3,
        }
    }
}

/// Parses `args` and runs the selected command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(args).and_then(|(cmd, cfg)| dispatch(&cmd, &cfg)) {
        Ok(code) => code,
        Err(CliError::Clap(e)) => {
            let code = e.exit_code();
            let _ = e.print();
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<i32, CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Figures => {
            let result = cmd_figures(cfg)?;
            for path in &result.files {
                let _ = writeln!(out, "wrote {}", path.display());
            }
            if result.failed_rows > 0 {
                eprintln!(
                    "error: {} row(s) contain nan values; see the CSV output",
                    result.failed_rows
                );
                return Ok(1);
            }
            Ok(0)
        }
        Command::Validate => {
            let outcomes = cmd_validate(cfg);
            for o in &outcomes {
                let _ = writeln!(out, "{o}");
            }
            Ok(if outcomes.iter().all(|o| o.passed) { 0 } else { 1 })
        }
        Command::Spectrum { levels } => Ok(print_spectrum(cfg, *levels, &mut out)),
        Command::Thermo { beta } => Ok(print_thermo(cfg, *beta, &mut out)),
    }
}

fn print_spectrum(cfg: &RunConfig, levels: u32, out: &mut impl Write) -> i32 {
    let mut code = 0;
    for series in cfg.systems(true) {
        let sys = &series.system;
        match sys.params() {
            Ok(p) => {
                let _ = writeln!(
                    out,
                    "{}: gamma = {:.12e}  P = {:.12e}  Q = {:.12e}",
                    series.label, p.gamma, p.p_scale, p.q_index
                );
                for n in 0..levels {
                    let _ = writeln!(out, "  E_{n} = {:.12e}", p.energy_level(n));
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", series.label);
                code = 1;
            }
        }
    }
    code
}

fn print_thermo(cfg: &RunConfig, beta: f64, out: &mut impl Write) -> i32 {
    let mut code = 0;
    let _ = writeln!(out, "series,q,beta,Z,F,U,S_over_k,C_over_k");
    for series in cfg.systems(true) {
        for &q in &cfg.q_values {
            let point = series.system.params().and_then(|p| {
                let query = ThermoQuery::with_range(beta, q, cfg.q_range)?;
                thermo_point(&p, &query)
            });
            match point {
                Ok(t) => {
                    let _ = writeln!(
                        out,
                        "{},{q},{},{},{},{},{},{}",
                        series.label,
                        figures::fmt_value(beta),
                        figures::fmt_value(t.z_partition),
                        figures::fmt_value(t.f_helmholtz),
                        figures::fmt_value(t.u_internal),
                        figures::fmt_value(t.s_over_k),
                        figures::fmt_value(t.c_over_k),
                    );
                }
                Err(e) => {
                    eprintln!("error: {} q={q}: {e}", series.label);
                    code = 1;
                }
            }
        }
    }
    code
}
