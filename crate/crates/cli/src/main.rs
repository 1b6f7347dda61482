mod grid;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use cjlab::asymptotics::{exact_cov_zeta, exact_mean_logphi, exact_mean_path, limit_covariance, limit_mean_functions, Mat2};
use cjlab::equilibrium::{
    cayley_check, circle_log_moments, circle_logmod_closed, endpoint_residual, energy_rate, line_endpoint,
    line_equilibrium, line_total_potential, mu_a_measure, LinePotential,
};
use cjlab::export::{fmt17, write_density_csv, write_path_csv, write_rate_csv, Check};
use cjlab::harness::{clt_statistics, run_indexed, sample_paths, sample_seed};
use cjlab::ldp::{marginal_rate_h, RatePoint};
use cjlab::verify::{format_table, run_criterion, VerifyOptions};
use cjlab::{EnsembleParams, Regime};

use grid::{parse_grid, parse_perturb, parse_seed};

#[derive(Parser)]
#[command(name = "cjlab", version, about = "Circular Jacobi β-ensemble experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample log-characteristic-polynomial paths, one CSV per sample.
    Sample {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exact mean and covariance of the path against their asymptotics over a t-grid.
    Moments {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long = "t-grid", default_value = "0.1:1:0.1", allow_hyphen_values = true)]
        t_grid: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Monte Carlo statistics of the normalized endpoint against its Gaussian limit.
    Clt {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Marginal rate function on a (xi, eta) grid.
    Ldp {
        #[arg(long = "T", default_value_t = 1.0)]
        horizon: f64,
        #[arg(long = "xi-grid", default_value = "-1:0.6:0.1", allow_hyphen_values = true)]
        xi_grid: String,
        #[arg(long = "eta-grid", default_value = "0", allow_hyphen_values = true)]
        eta_grid: String,
        #[arg(long = "scaled-d-re", default_value_t = 0.5, allow_hyphen_values = true)]
        d_re: f64,
        #[arg(long = "scaled-d-im", default_value_t = 0.0, allow_hyphen_values = true)]
        d_im: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Equilibrium density table and identity residuals.
    Equilibrium {
        #[arg(long, value_enum, default_value_t = Kind::Circle)]
        kind: Kind,
        /// Circle: the real deformation a > 0 of the measure on an arc.
        #[arg(long = "scaled-d-re", default_value_t = 1.0)]
        a: f64,
        /// Line: the strength r > 0 of the external field.
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the acceptance suite and print a PASS/FAIL table.
    Verify {
        /// Comma list of criterion ids; all sixteen by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Scale the reference values of one criterion, as ID:REL.
        #[arg(long, value_parser = parse_perturb)]
        perturb: Option<(usize, f64)>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Circle,
    Line,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long = "delta-re", visible_alias = "delta", default_value_t = 0.0, allow_hyphen_values = true)]
    delta_re: f64,
    #[arg(long = "delta-im", default_value_t = 0.0, allow_hyphen_values = true)]
    delta_im: f64,
    #[arg(long = "scaled-d-re", allow_hyphen_values = true)]
    scaled_d_re: Option<f64>,
    #[arg(long = "scaled-d-im", allow_hyphen_values = true)]
    scaled_d_im: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_seed, default_value = "0")]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    /// Output file (a directory for `sample`); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl RunArgs {
    fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

enum Failure {
    Usage(String),
    Compute(String),
    Verification,
}

impl From<cjlab::Error> for Failure {
    fn from(e: cjlab::Error) -> Self {
        match e {
            cjlab::Error::InvalidParams(_) | cjlab::Error::Domain { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Compute(format!("json: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Sample { ensemble, samples, run } => sample(&ensemble.params()?, samples, &run),
        Command::Moments { ensemble, t_grid, run } => moments(&ensemble.params()?, &t_grid, &run),
        Command::Clt { ensemble, samples, run } => clt(&ensemble.params()?, samples, &run),
        Command::Ldp { horizon, xi_grid, eta_grid, d_re, d_im, run } => {
            ldp(horizon, &xi_grid, &eta_grid, Complex64::new(d_re, d_im), &run)
        }
        Command::Equilibrium { kind, a, r, points, run } => match kind {
            Kind::Circle => equilibrium_circle(a, points, &run),
            Kind::Line => equilibrium_line(r, points, &run),
        },
        Command::Verify { only, perturb, run } => verify(&only, perturb, &run),
    }
}

impl EnsembleArgs {
    fn params(&self) -> Result<EnsembleParams, Failure> {
        let scaled = self.scaled_d_re.is_some() || self.scaled_d_im.is_some();
        if scaled && (self.delta_re != 0.0 || self.delta_im != 0.0) {
            return Err(Failure::Usage("give either --delta-* or --scaled-d-*, not both".into()));
        }
        let regime = if scaled {
            Regime::ScaledDelta(Complex64::new(self.scaled_d_re.unwrap_or(0.0), self.scaled_d_im.unwrap_or(0.0)))
        } else {
            Regime::FixedDelta(Complex64::new(self.delta_re, self.delta_im))
        };
        Ok(EnsembleParams::new(self.n, self.beta, regime)?)
    }
}

fn open_output(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cplx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
struct PathRecord {
    sample: usize,
    seed: u64,
    log_phi: Vec<[f64; 2]>,
    zeta: Vec<[f64; 2]>,
}

fn sample(p: &EnsembleParams, samples: usize, run: &RunArgs) -> Outcome {
    if samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let mean = exact_mean_path(p)?;
    let paths = sample_paths(p, samples, run.seed, run.workers())?;
    let ext = if run.format == Format::Csv { "csv" } else { "json" };
    let render = |i: usize, w: &mut dyn Write| -> Outcome {
        let path = &paths[i];
        match run.format {
            Format::Csv => write_path_csv(w, path, &mean)?,
            Format::Json => {
                let zeta = path.centered(&mean)?;
                let rec = PathRecord {
                    sample: i,
                    seed: sample_seed(run.seed, i),
                    log_phi: path.values.iter().copied().map(cplx).collect(),
                    zeta: zeta.into_iter().map(cplx).collect(),
                };
                serde_json::to_writer(&mut *w, &rec)?;
                writeln!(w)?;
            }
        }
        Ok(())
    };
    match &run.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for i in 0..samples {
                let mut w = open_output(Some(&dir.join(format!("path_{i:05}.{ext}"))))?;
                render(i, &mut *w)?;
                w.flush()?;
            }
        }
        None => {
            let mut w = open_output(None)?;
            for i in 0..samples {
                if run.format == Format::Csv {
                    writeln!(w, "# sample {i}")?;
                }
                render(i, &mut *w)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct MomentRow {
    t: f64,
    m: usize,
    mean: [f64; 2],
    asymptotic_mean: [f64; 2],
    cov: Mat2,
    asymptotic_cov: Mat2,
}

fn moments(p: &EnsembleParams, t_grid: &str, run: &RunArgs) -> Outcome {
    let ts = parse_grid(t_grid).map_err(Failure::Usage)?;
    if ts.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(Failure::Usage("t-grid values must lie in (0, 1]".into()));
    }
    let n = p.n as f64;
    let logn = n.ln();
    let rows = run_indexed(ts.len(), run.workers(), |i| {
        let t = ts[i];
        let m = ((n * t) + 1e-9).floor() as usize;
        let tm = m as f64 / n;
        let mean = exact_mean_logphi(p, m)?;
        let cov = exact_cov_zeta(p, m)?;
        let (asym_mean, asym_cov) = match p.regime {
            Regime::FixedDelta(delta) => {
                let shift = delta / p.beta_prime();
                if m == p.n {
                    let v = logn / p.beta;
                    (shift * logn, [[v, 0.0], [0.0, v]])
                } else {
                    let (_, integral) = limit_covariance(p.beta, Complex64::new(0.0, 0.0), tm)?;
                    (-shift * (1.0 - tm).ln(), integral)
                }
            }
            Regime::ScaledDelta(d) => {
                let (e, f) = limit_mean_functions(d, tm)?;
                let (_, integral) = limit_covariance(p.beta, d, tm)?;
                (e * n + f * (1.0 / p.beta - 0.5), integral)
            }
        };
        Ok(MomentRow {
            t,
            m,
            mean: cplx(mean),
            asymptotic_mean: cplx(asym_mean),
            cov,
            asymptotic_cov: asym_cov,
        })
    })?;
    let mut w = open_output(run.out.as_deref())?;
    match run.format {
        Format::Csv => {
            writeln!(
                w,
                "t,m,mean_re,mean_im,asym_mean_re,asym_mean_im,cov_re_re,cov_re_im,cov_im_im,asym_cov_re_re,asym_cov_re_im,asym_cov_im_im"
            )?;
            for r in &rows {
                let cells = [
                    r.mean[0],
                    r.mean[1],
                    r.asymptotic_mean[0],
                    r.asymptotic_mean[1],
                    r.cov[0][0],
                    r.cov[0][1],
                    r.cov[1][1],
                    r.asymptotic_cov[0][0],
                    r.asymptotic_cov[0][1],
                    r.asymptotic_cov[1][1],
                ];
                let cells: Vec<String> = cells.iter().map(|&x| fmt17(x)).collect();
                writeln!(w, "{},{},{}", fmt17(r.t), r.m, cells.join(","))?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &rows)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn clt(p: &EnsembleParams, samples: usize, run: &RunArgs) -> Outcome {
    if !matches!(p.regime, Regime::FixedDelta(_)) {
        return Err(Failure::Usage("clt needs a fixed deformation (--delta-*)".into()));
    }
    let (_, rep) = clt_statistics(p, samples, run.seed, run.workers())?;
    let mut w = open_output(run.out.as_deref())?;
    match run.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &rep)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(w, "component,mean,mean_se,variance,variance_se,target_variance,relative_gap,ks,ks_critical_1pct")?;
            for (k, name) in ["re", "im"].iter().enumerate() {
                let (m, mse) = rep.mean[k];
                let (v, vse) = rep.variance[k];
                let cells = [m, mse, v, vse, rep.target_variance, v / rep.target_variance - 1.0, rep.ks[k], rep.ks_critical_1pct];
                let cells: Vec<String> = cells.iter().map(|&x| fmt17(x)).collect();
                writeln!(w, "{name},{}", cells.join(","))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RateRow {
    horizon: f64,
    xi: f64,
    eta: f64,
    d: [f64; 2],
    h: Option<f64>,
    branch: &'static str,
    multipliers: Option<(f64, f64)>,
}

fn ldp(horizon: f64, xi_grid: &str, eta_grid: &str, d: Complex64, run: &RunArgs) -> Outcome {
    let xis = parse_grid(xi_grid).map_err(Failure::Usage)?;
    let etas = parse_grid(eta_grid).map_err(Failure::Usage)?;
    let points = xis
        .iter()
        .flat_map(|&xi| etas.iter().map(move |&eta| (xi, eta)))
        .map(|(xi, eta)| RatePoint::new(horizon, xi, eta, d))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = run_indexed(points.len(), run.workers(), |i| Ok((points[i], marginal_rate_h(points[i])?)))?;
    let mut w = open_output(run.out.as_deref())?;
    match run.format {
        Format::Csv => write_rate_csv(&mut w, &rows)?,
        Format::Json => {
            let out: Vec<RateRow> = rows
                .iter()
                .map(|(p, r)| RateRow {
                    horizon: p.horizon,
                    xi: p.xi,
                    eta: p.eta,
                    d: cplx(p.d),
                    h: r.value.finite(),
                    branch: r.branch.as_str(),
                    multipliers: r.multipliers,
                })
                .collect();
            serde_json::to_writer_pretty(&mut w, &out)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct EquilibriumReport<'a> {
    variable: &'a str,
    density: Vec<(f64, f64)>,
    checks: &'a [Check],
}

fn write_equilibrium(variable: &str, density: Vec<(f64, f64)>, checks: &[Check], run: &RunArgs) -> Outcome {
    let mut w = open_output(run.out.as_deref())?;
    match run.format {
        Format::Csv => {
            write_density_csv(&mut w, variable, &density)?;
            w.flush()?;
            drop(w);
            for c in checks {
                eprintln!(
                    "{} {}: computed {} reference {} tolerance {:e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.identity,
                    fmt17(c.computed),
                    fmt17(c.reference),
                    c.tolerance
                );
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &EquilibriumReport { variable, density, checks })?;
            writeln!(w)?;
            w.flush()?;
        }
    }
    if checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn equilibrium_circle(a: f64, points: usize, run: &RunArgs) -> Outcome {
    let mu = mu_a_measure(a)?;
    let moments = circle_log_moments(a)?;
    let rate = energy_rate(&mu, Complex64::new(a, 0.0))?;
    let checks = [
        Check::new("total mass", mu.mass()?, 1.0, 1e-8),
        Check::new("log-modulus moment vs closed form", moments.logmod, circle_logmod_closed(a), 1e-8),
        Check::new("argument moment", moments.argmom, 0.0, 1e-10),
        Check::new("energy rate at its own deformation", rate.rate, 0.0, 1e-4),
    ];
    write_equilibrium("theta", mu.density_table(points), &checks, run)
}

fn equilibrium_line(r: f64, points: usize, run: &RunArgs) -> Outcome {
    let b = line_endpoint(r)?;
    let mu = line_equilibrium(r)?;
    let q = LinePotential::new(r)?;
    let vals = (0..20)
        .map(|k| line_total_potential(&mu, &q, -b + 2.0 * b * (k as f64 + 0.5) / 20.0))
        .collect::<Result<Vec<_>, _>>()?;
    let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
    let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
    let cayley = cayley_check(r, 50)?;
    let checks = [
        Check::new("endpoint equation", endpoint_residual(r, b)?, 0.0, 1e-8),
        Check::new("total mass", mu.mass()?, 1.0, 1e-8),
        Check::new("potential spread on the support", hi - lo, 0.0, 1e-5),
        Check::new("Cayley endpoint identity", cayley.endpoint_residual, 0.0, 1e-12),
        Check::new("Cayley pulled-back mass", cayley.pulled_back_mass, 1.0, 1e-8),
    ];
    write_equilibrium("x", mu.density_table(points), &checks, run)
}

fn verify(only: &[usize], perturb: Option<(usize, f64)>, run: &RunArgs) -> Outcome {
    if let Some(&bad) = only.iter().find(|&&id| !(1..=16).contains(&id)) {
        return Err(Failure::Usage(format!("criterion id {bad} is not in 1..=16")));
    }
    let ids: Vec<usize> = if only.is_empty() { (1..=16).collect() } else { only.to_vec() };
    let opts = VerifyOptions { workers: run.workers(), perturb };
    let results: Vec<_> = ids.iter().map(|&id| run_criterion(id, &opts)).collect();
    let mut w = open_output(run.out.as_deref())?;
    match run.format {
        Format::Csv => {
            w.write_all(format_table(&results).as_bytes())?;
            for r in results.iter().filter(|r| !r.pass) {
                writeln!(w, "  {:>2}: {}", r.id, r.detail)?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &results)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    if results.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
