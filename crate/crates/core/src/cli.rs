//! Command-line front end.
//!
//! Figure commands write CSV: one header line, then one row per sweep point,
//! every number in scientific notation with 10 significant digits, LF line
//! endings. Exit codes are 0 on success, 2 for invalid arguments and 3 for
//! numerical failures.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::metrology;
use crate::montecarlo::{self, McConfig};
use crate::schemes::{self, InterferometerParams, Network, Scheme, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dqsense",
    version,
    about = "Distributed phase sensing with truncated SU(1,1) interferometers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// LOD x |alpha|^2 of the four two-phase schemes versus gain G.
    Fig2c(Fig2cArgs),
    /// LOD x |alpha|^2 of the four two-phase schemes versus classical gain g.
    Fig2d(Fig2dArgs),
    /// M-phase LODs versus the number of phases M.
    Fig5d(Fig5dArgs),
    /// Closed-form LOD of a single configuration.
    Lod(LodArgs),
    /// Monte Carlo check of a configuration's LOD.
    Mc(McArgs),
    /// Actual SNR from measured signal and noise-floor powers.
    SnrCorrect(SnrArgs),
}

#[derive(Debug, Args)]
pub struct Fig2cArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Classical gain.
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    /// Transmissions, one block of rows each.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.8])]
    pub etas: Vec<f64>,
    #[arg(long, default_value_t = 1.01)]
    pub start: f64,
    #[arg(long, default_value_t = 10.0)]
    pub stop: f64,
    #[arg(long, default_value_t = 900)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct Fig2dArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Parametric gain.
    #[arg(long = "G", default_value_t = 5.0)]
    pub gain: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.8])]
    pub etas: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub start: f64,
    #[arg(long, default_value_t = 3.0)]
    pub stop: f64,
    #[arg(long, default_value_t = 291)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct Fig5dArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Photons per phase element.
    #[arg(long, default_value_t = 100.0)]
    pub n: f64,
    /// Largest (even) phase count.
    #[arg(long = "M-max", default_value_t = 100)]
    pub m_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    /// tsu-dis, tsu-sep, cla-dis, cla-sep, multi-cla, multi-sep or multi-ent.
    #[arg(long)]
    pub scheme: Scheme,
    #[arg(long = "G", default_value_t = 5.0)]
    pub gain: f64,
    #[arg(long, default_value_t = 100.0)]
    pub alpha_sq: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long = "M", default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 100.0)]
    pub n: f64,
}

#[derive(Debug, Args)]
pub struct LodArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// For multi-ent: also run the constrained optimizer and report G, |alpha|^2.
    #[arg(long)]
    pub optimize: bool,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SnrArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub measured_dbm: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub noise_dbm: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_INVALID,
        }
    }
}

/// Fixed CSV number format: 10 significant digits, scientific.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

fn linspace(start: f64, stop: f64, points: usize) -> Result<Vec<f64>, Error> {
    if start >= stop || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidParameter {
            name: "start",
            value: start,
            reason: "sweep needs finite start < stop",
        });
    }
    if points < 2 {
        return Err(Error::InvalidParameter {
            name: "points",
            value: points as f64,
            reason: "sweep needs at least 2 points",
        });
    }
    let step = (stop - start) / (points - 1) as f64;
    Ok((0..points).map(|k| start + k as f64 * step).collect())
}

fn four_lods(p: &InterferometerParams) -> Result<[f64; 4], Error> {
    Ok([
        schemes::lod_classical_separable(p)?.delta_phi_sq,
        schemes::lod_classical_distributed(p)?.delta_phi_sq,
        schemes::lod_tsu_separable(p)?.delta_phi_sq,
        schemes::lod_tsu_distributed(p)?.delta_phi_sq,
    ])
}

fn push_row(out: &mut String, cells: &[f64]) {
    let row: Vec<String> = cells.iter().map(|&x| sci(x)).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

/// LOD x |alpha|^2 versus G, one block per transmission.
pub fn fig2c_csv(args: &Fig2cArgs) -> Result<String, Error> {
    let gains = linspace(args.start, args.stop, args.points)?;
    let mut out = String::from("eta,G,lod_cla_sep,lod_cla_dis,lod_tsu_sep,lod_tsu_dis\n");
    for &eta in &args.etas {
        for &gain in &gains {
            // |alpha|^2 = 1 makes every LOD the |alpha|^2-scaled value
            let l = four_lods(&InterferometerParams::new(gain, 1.0, eta, args.g))?;
            push_row(&mut out, &[eta, gain, l[0], l[1], l[2], l[3]]);
        }
    }
    Ok(out)
}

/// LOD x |alpha|^2 versus g, one block per transmission, then one
/// `# advantage_window` comment line per transmission.
pub fn fig2d_csv(args: &Fig2dArgs) -> Result<String, Error> {
    let gs = linspace(args.start, args.stop, args.points)?;
    let mut out = String::from("eta,g,lod_cla_sep,lod_cla_dis,lod_tsu_sep,lod_tsu_dis\n");
    for &eta in &args.etas {
        for &g in &gs {
            let l = four_lods(&InterferometerParams::new(args.gain, 1.0, eta, g))?;
            push_row(&mut out, &[eta, g, l[0], l[1], l[2], l[3]]);
        }
    }
    for &eta in &args.etas {
        match schemes::advantage_g_window(args.gain, eta)? {
            Some((lo, hi)) => {
                let _ = writeln!(
                    out,
                    "# advantage_window eta={} g_lo={} g_hi={}",
                    sci(eta),
                    sci(lo),
                    sci(hi)
                );
            }
            None => {
                let _ = writeln!(out, "# advantage_window eta={} none", sci(eta));
            }
        }
    }
    Ok(out)
}

/// M-phase LODs for even M from 2 to `m_max`.
pub fn fig5d_csv(args: &Fig5dArgs) -> Result<String, Error> {
    if args.m_max < 2 {
        return Err(Error::InvalidParameter {
            name: "M-max",
            value: args.m_max as f64,
            reason: "must be at least 2",
        });
    }
    let mut out = String::from("M,lod_classical,lod_separable,lod_entangled\n");
    for m in (2..=args.m_max).step_by(2) {
        let row = [
            m as f64,
            schemes::lod_multi_classical(m, args.n)?.delta_phi_sq,
            schemes::lod_multi_separable(m, args.n)?.delta_phi_sq,
            schemes::lod_multi_entangled_optimal(m, args.n)?.delta_phi_sq,
        ];
        push_row(&mut out, &row);
    }
    Ok(out)
}

fn network_for(args: &SchemeArgs) -> Result<Network, Error> {
    match args.scheme {
        Scheme::MultiClassical => Network::multi_classical(args.m, args.n),
        Scheme::MultiSeparable => Network::multi_separable(args.m, args.n),
        Scheme::MultiEntangled => {
            Network::multi_entangled_optimal(args.m, args.n, &SolverConfig::default())
        }
        two => Network::two_phase(two, two_phase_params(args)),
    }
}

fn two_phase_params(args: &SchemeArgs) -> InterferometerParams {
    InterferometerParams::new(args.gain, args.alpha_sq, args.eta, args.g)
}

pub fn lod_report(args: &LodArgs) -> Result<String, Error> {
    let s = &args.scheme;
    if !s.scheme.is_multi_phase() {
        let p = two_phase_params(s);
        let l = schemes::two_phase_lod(s.scheme, &p)?;
        let mut line = format!(
            "scheme={} G={} alpha_sq={} eta={} g={} delta_phi_sq={} delta_phi_sq_times_alpha_sq={}",
            s.scheme,
            sci(p.gain),
            sci(p.alpha_sq),
            sci(p.eta),
            sci(p.g),
            sci(l.delta_phi_sq),
            sci(l.delta_phi_sq * p.alpha_sq)
        );
        if s.scheme == Scheme::TsuDistributed {
            let _ = write!(line, " qcrb={}", sci(schemes::qcrb_tsu(&p)?));
        }
        return Ok(line);
    }
    let l = schemes::multi_phase_lod(s.scheme, s.m, s.n)?;
    let mut line = format!(
        "scheme={} M={} n={} delta_phi_sq={}",
        s.scheme,
        s.m,
        sci(s.n),
        sci(l.delta_phi_sq)
    );
    if args.optimize && s.scheme == Scheme::MultiEntangled {
        let opt = schemes::optimize_entangled(s.m, s.n, &SolverConfig::default())?;
        let _ = write!(
            line,
            " G_opt={} alpha_sq_opt={} optimized_delta_phi_sq={}",
            sci(opt.gain),
            sci(opt.alpha_sq),
            sci(opt.lod)
        );
    }
    Ok(line)
}

pub fn mc_report(args: &McArgs) -> Result<String, Error> {
    let network = network_for(&args.scheme)?;
    let config = McConfig::new(args.samples, args.seed)?;
    let r = montecarlo::mc_lod(&network, &config)?;
    Ok(format!(
        "scheme={} samples={} seed={} empirical_lod={} standard_error={} analytic_lod={} z={} generator={}",
        network.scheme(),
        r.samples,
        r.seed,
        sci(r.empirical_lod),
        sci(r.standard_error),
        sci(r.analytic_lod),
        sci(r.z_score),
        r.generator
    ))
}

pub fn snr_report(args: &SnrArgs) -> Result<String, Error> {
    let snr = metrology::snr_correct(args.measured_dbm, args.noise_dbm)?;
    Ok(format!("snr_db={}", sci(snr)))
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Runs one parsed command, writing its output to `--out` or `stdout`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Fig2c(a) => emit(&fig2c_csv(a)?, a.out.as_ref(), stdout),
        Command::Fig2d(a) => emit(&fig2d_csv(a)?, a.out.as_ref(), stdout),
        Command::Fig5d(a) => emit(&fig5d_csv(a)?, a.out.as_ref(), stdout),
        Command::Lod(a) => emit(&(lod_report(a)? + "\n"), None, stdout),
        Command::Mc(a) => emit(&(mc_report(a)? + "\n"), None, stdout),
        Command::SnrCorrect(a) => emit(&(snr_report(a)? + "\n"), None, stdout),
    }
}
