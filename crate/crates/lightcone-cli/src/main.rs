mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lightcone::axial::{self, AxialCase};
use lightcone::chains::chain_selftest;
use lightcone::kernels::{fhat_closed, fhat_quadrature, static_profile, KernelOrder};
use lightcone::regularization::{
    basic_ratios, default_eps_grid, eps_grid, field_constants_with, scan_with, BasicRatios,
    RegularizationModel,
};
use lightcone::spectra::{log_constants, solve_mixing};
use lightcone::{Error, ErrorClass, MassSpectrum, Result};
use serde_json::{json, Map, Value};

use output::{csv_row, matrix, num, nums, parse_list, parse_range};

#[derive(Parser)]
#[command(name = "lightcone", version, about = "Continuum-limit constants, kernels and spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reg {
    Exp,
    Cutoff,
}

impl From<Reg> for RegularizationModel {
    fn from(r: Reg) -> Self {
        match r {
            Reg::Exp => RegularizationModel::Exponential,
            Reg::Cutoff => RegularizationModel::HardCutoff,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Quad,
    Both,
}

#[derive(clap::Args)]
struct EpsArgs {
    /// Smallest ε/r of the extrapolation grid
    #[arg(long)]
    eps_min: Option<f64>,
    /// Largest ε/r of the extrapolation grid
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    eps_points: Option<usize>,
}

impl EpsArgs {
    fn grid(&self) -> Result<Vec<f64>> {
        if self.eps_min.is_none() && self.eps_max.is_none() && self.eps_points.is_none() {
            return Ok(default_eps_grid(1.0));
        }
        eps_grid(
            self.eps_min.unwrap_or(1e-4),
            self.eps_max.unwrap_or(1e-2),
            self.eps_points.unwrap_or(8),
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Mixing coefficients and logarithmic mass constants
    Mixing {
        #[arg(long)]
        masses: String,
    },
    /// Regularization ratios and field constants
    Constants {
        #[arg(long)]
        masses: String,
        #[arg(long, value_enum)]
        reg: Reg,
        #[command(flatten)]
        eps: EpsArgs,
    },
    /// Coupling and boson mass on a grid of mass ratios
    Scan {
        #[arg(long, value_enum)]
        reg: Reg,
        #[arg(long)]
        m2: String,
        #[arg(long)]
        m3: String,
        #[command(flatten)]
        eps: EpsArgs,
    },
    /// Non-causal kernels, summed over generations
    Kernel {
        #[arg(long)]
        masses: String,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q2: String,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
    },
    /// Static correction to the Coulomb potential
    Uehling {
        #[arg(long)]
        masses: String,
        #[arg(long = "Z")]
        z: f64,
        #[arg(long)]
        e2: f64,
        #[arg(long)]
        r: String,
    },
    /// Local axial transformation for a vector u
    Axial {
        #[arg(long)]
        masses: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Largest realizable axial strength
    Smax {
        #[arg(long)]
        masses: String,
    },
    /// Closed-chain checks
    Chain {
        #[command(subcommand)]
        action: ChainAction,
    },
}

#[derive(Subcommand)]
enum ChainAction {
    /// Randomized property report
    Selftest {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Lib(Error),
    /// Output already written; exit with this status.
    Status(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn masses(s: &str) -> Result<MassSpectrum> {
    MassSpectrum::new(parse_list(s)?)
}

/// Writes to stdout; a closed pipe is not an error worth a panic.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.write_all(b"\n");
}

fn print_json(v: &Value) {
    emit(&serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Mixing { masses: m } => {
            let spec = masses(&m)?;
            let mix = solve_mixing(&spec)?;
            let lc = log_constants(&spec, &mix)?;
            print_json(&json!({
                "d": nums(&mix.d),
                "s3": num(lc.s3),
                "sigma0": num(lc.sigma0),
                "sigma2": num(lc.sigma2),
                "residuals": nums(&mix.residuals),
                "closed_form_deviation": num(mix.closed_form_deviation),
            }));
        }
        Command::Constants { masses: m, reg, eps } => {
            let spec = masses(&m)?;
            let grid = eps.grid()?;
            let ratios = basic_ratios(reg.into(), 1.0, &grid)?;
            let fc = field_constants_with(&spec, ratios)?;
            print_json(&json!({
                "r0": num(fc.r0),
                "r2": num(fc.r2),
                "r3": num(fc.r3),
                "sigma0": num(fc.sigma0),
                "sigma2": num(fc.sigma2),
                "C0": num(fc.c0),
                "M2": num(fc.m2),
                "e2": num(fc.e2),
                "M": num(fc.m()),
                "e": num(fc.e()),
            }));
        }
        Command::Scan { reg, m2, m3, eps } => {
            let (a, b) = (parse_range(&m2)?, parse_range(&m3)?);
            let grid = eps.grid()?;
            let ratios: BasicRatios = basic_ratios(reg.into(), 1.0, &grid)?;
            let table = scan_with(ratios, &a, &b);
            let mut lines = vec!["m2_over_m1,m3_over_m1,e,M_over_m1".to_string()];
            for row in &table.rows {
                lines.push(csv_row(&[Some(row.m2_over_m1), Some(row.m3_over_m1), row.e, row.m_over_m1]));
            }
            emit(&lines.join("\n"));
            for row in table.rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "row ({}, {}): {}",
                    row.m2_over_m1,
                    row.m3_over_m1,
                    row.error.as_deref().unwrap_or_default()
                );
            }
        }
        Command::Kernel { masses: m, p, q2, method } => {
            let spec = masses(&m)?;
            let order = KernelOrder::from_index(p)?;
            let grid = parse_range(&q2)?;
            let sum = |f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
                spec.masses().iter().map(|&mb| f(mb)).sum()
            };
            let mut lines = Vec::with_capacity(grid.len() + 1);
            lines.push(match method {
                Method::Both => "q2,value,value_quad,abs_diff".to_string(),
                _ => "q2,value".to_string(),
            });
            for &q in &grid {
                let closed = || sum(&|mb| fhat_closed(mb, order, q));
                let quad = || sum(&|mb| fhat_quadrature(mb, order, q));
                let row = match method {
                    Method::Closed => csv_row(&[Some(q), Some(closed()?)]),
                    Method::Quad => csv_row(&[Some(q), Some(quad()?)]),
                    Method::Both => {
                        let (c, qv) = (closed()?, quad()?);
                        csv_row(&[Some(q), Some(c), Some(qv), Some((c - qv).abs())])
                    }
                };
                lines.push(row);
            }
            emit(&lines.join("\n"));
        }
        Command::Uehling { masses: m, z, e2, r } => {
            let spec = masses(&m)?;
            let radii = parse_range(&r)?;
            if radii.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::InvalidArgument("radii must be positive".into()).into());
            }
            let prof = static_profile(&spec, z, e2, &radii)?;
            let mut lines = vec!["r,coulomb,correction".to_string()];
            for k in 0..prof.r.len() {
                lines.push(csv_row(&[Some(prof.r[k]), Some(prof.coulomb[k]), Some(prof.correction[k])]));
            }
            emit(&lines.join("\n"));
        }
        Command::Axial { masses: m, u } => {
            let spec = masses(&m)?;
            let uv = parse_list(&u)?;
            if uv.len() != 4 {
                return Err(Error::InvalidArgument(format!("u needs four components, got {}", uv.len())).into());
            }
            let u4 = [uv[0], uv[1], uv[2], uv[3]];
            match axial::construct(&spec, u4) {
                Ok(sol) => {
                    let mut res = Map::new();
                    for (k, v) in &sol.residuals {
                        res.insert(k.clone(), num(*v));
                    }
                    print_json(&json!({
                        "case": case_name(sol.case),
                        "feasible": true,
                        "residuals": Value::Object(res),
                        "U": matrix(&sol.u_matrix),
                    }));
                }
                Err(e @ Error::Infeasible { .. }) => {
                    print_json(&json!({
                        "case": case_name(axial::classify(&u4)),
                        "feasible": false,
                        "residuals": {},
                        "U": Value::Null,
                    }));
                    return Err(e.into());
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Smax { masses: m } => {
            let spec = masses(&m)?;
            print_json(&json!({
                "smax": num(axial::smax(&spec)?),
                "bound": num(axial::feasibility_bound(&spec)?),
            }));
        }
        Command::Chain { action: ChainAction::Selftest { trials, seed } } => {
            if trials == 0 {
                return Err(Error::InvalidArgument("trials must be positive".into()).into());
            }
            let report = chain_selftest(trials, seed);
            let mut all = true;
            for line in &report {
                all &= line.pass;
                emit(&format!(
                    "{} {} worst={} tol={}",
                    if line.pass { "PASS" } else { "FAIL" },
                    line.property,
                    output::fmt_g(line.worst),
                    output::fmt_g(line.tolerance)
                ));
            }
            if !all {
                return Err(Failure::Status(3));
            }
        }
    }
    Ok(())
}

fn case_name(c: AxialCase) -> &'static str {
    match c {
        AxialCase::Zero => "zero",
        AxialCase::Null => "null",
        AxialCase::Timelike => "timelike",
        AxialCase::Spacelike => "spacelike",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Status(s)) => ExitCode::from(s),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Usage => 1,
                ErrorClass::Domain => 2,
                ErrorClass::Numerical => 3,
            })
        }
    }
}
