//! Command-line front end: forward, inverse, round-trip and characterization
//! runs with file I/O.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characterization::characterize;
use crate::error::{Error, Result};
use crate::forward::{compute_spectrum_with, Boundary, CharFnEvaluator, SpectrumOptions};
use crate::grid::GridSpec;
use crate::inverse::{run_algorithm1_with, InverseOptions, OmegaMethod, Reconstruction};
use crate::io;
use crate::potential::{random_smooth, split_potential, Builtin, DelayParameter, PotentialPair};
use crate::spectrum::SpectralSequence;
use crate::wfun::build_w_functions;

type C = Complex64;

/// Tolerance on the normalization residual used for the report flag.
pub const A4_TOLERANCE: f64 = 1e-3;
/// Allowed excess of the measured exponential type over `pi - a`.
pub const TYPE_SLACK: f64 = 0.25;
/// `L2` norm of seeded random potentials.
pub const RANDOM_NORM: f64 = 2.0;
/// Delay used for seeded random potentials when none is configured.
pub const RANDOM_DEFAULT_DELAY: f64 = 0.6 * PI;

/// Run settings, read from an optional JSON sidecar and overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub a: Option<f64>,
    pub grid_m: usize,
    pub n_eigen: usize,
    pub tol_root: f64,
    pub omega_method: OmegaMethod,
    pub fejer: bool,
    pub seed: Option<u64>,
    pub builtin: Option<String>,
    /// Relative `L2` error accepted by `roundtrip`.
    pub threshold: f64,
    pub tail_factor: usize,
    pub refine_omega: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            a: None,
            grid_m: 512,
            n_eigen: 128,
            tol_root: 1e-10,
            omega_method: OmegaMethod::Sample,
            fejer: false,
            seed: None,
            builtin: None,
            threshold: 0.05,
            tail_factor: 16,
            refine_omega: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.a {
            DelayParameter::new(a)?;
        }
        GridSpec::new(self.grid_m)?;
        if self.grid_m < 4 * self.n_eigen {
            return Err(Error::Config(format!(
                "grid_m = {} is below 4 * n_eigen = {}",
                self.grid_m,
                4 * self.n_eigen
            )));
        }
        if !(self.tol_root > 0.0 && self.tol_root.is_finite()) {
            return Err(Error::Config(format!("tol_root must be positive, got {}", self.tol_root)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid_m)
    }

    pub fn inverse_options(&self) -> InverseOptions {
        InverseOptions {
            omega_method: self.omega_method,
            fejer: self.fejer,
            tail_factor: self.tail_factor,
            refine_omega: self.refine_omega,
        }
    }

    pub fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions {
            tol_root: self.tol_root,
            ..SpectrumOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OmegaArg {
    Sample,
    Ratio,
}

impl From<OmegaArg> for OmegaMethod {
    fn from(o: OmegaArg) -> Self {
        match o {
            OmegaArg::Sample => OmegaMethod::Sample,
            OmegaArg::Ratio => OmegaMethod::Ratio,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "specdelay", version, about = "Spectra of Sturm-Liouville operators with a constant delay")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON file with run settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Delay a in [pi/2, pi).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Number of grid subintervals on [0, pi].
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Eigenvalues per spectrum.
    #[arg(long = "n-eigen", global = true)]
    pub n_eigen: Option<usize>,
    /// Relative residual target of the root finder.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long = "omega-method", global = true, value_enum)]
    pub omega_method: Option<OmegaArg>,
    /// Fejer smoothing of the Fourier synthesis.
    #[arg(long, global = true)]
    pub fejer: bool,
    /// Worker threads for root finding; defaults to the available cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long = "out-dir", global = true, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute both spectra of a potential.
    Forward(SourceArgs),
    /// Reconstruct the potential from two spectra.
    Inverse {
        #[arg(long)]
        spectrum0: PathBuf,
        #[arg(long)]
        spectrum1: PathBuf,
    },
    /// Forward then inverse on a test potential, reporting the error.
    Roundtrip {
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Check the asymptotic and structural conditions on candidate spectra.
    Characterize {
        #[arg(long)]
        spectrum0: Option<PathBuf>,
        #[arg(long)]
        spectrum1: PathBuf,
    },
    /// Quick built-in checks.
    Selftest,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Potential CSV (`x,q_re,q_im`); needs `--a`.
    #[arg(long, conflicts_with_all = ["builtin", "seed"])]
    pub potential: Option<PathBuf>,
    /// One of zero, step-qplus, step-qminus, smooth.
    #[arg(long, conflicts_with = "seed")]
    pub builtin: Option<String>,
    /// Seed for a random smooth complex potential.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print both characteristic functions at this lambda.
    #[arg(long, allow_hyphen_values = true)]
    pub probe: Option<f64>,
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed { .. } => 2,
        Error::DelayMismatch(..) => 3,
        Error::DelayOutOfRange(_) => 4,
        _ => 1,
    }
}

/// Merges the sidecar file and the flags.
pub fn resolve_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = io::read_file(path)?;
            serde_json::from_str(&text).map_err(|e| Error::Malformed {
                line: e.line(),
                message: format!("{}: {e}", path.display()),
            })?
        }
        None => RunConfig::default(),
    };
    if common.a.is_some() {
        cfg.a = common.a;
    }
    if let Some(m) = common.grid {
        cfg.grid_m = m;
    }
    if let Some(n) = common.n_eigen {
        cfg.n_eigen = n;
    }
    if let Some(t) = common.tol {
        cfg.tol_root = t;
    }
    if let Some(o) = common.omega_method {
        cfg.omega_method = o.into();
    }
    if common.fejer {
        cfg.fejer = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses the arguments, runs the command and returns the exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    let cfg = resolve_config(&cli.common)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.common.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let out = cli.common.out_dir.as_path();
    pool.install(|| match &cli.command {
        Command::Forward(src) => cmd_forward(&cfg, src, out),
        Command::Inverse { spectrum0, spectrum1 } => cmd_inverse(&cfg, spectrum0, spectrum1, out),
        Command::Roundtrip {
            builtin,
            seed,
            threshold,
        } => {
            let mut cfg = cfg.clone();
            if builtin.is_some() {
                cfg.builtin = builtin.clone();
            }
            if seed.is_some() {
                cfg.seed = *seed;
            }
            if let Some(t) = threshold {
                cfg.threshold = *t;
            }
            cmd_roundtrip(&cfg, out)
        }
        Command::Characterize { spectrum0, spectrum1 } => {
            cmd_characterize(spectrum0.as_deref(), spectrum1, out)
        }
        Command::Selftest => cmd_selftest(),
    })
}

/// The potential named by the source flags or the config.
pub fn load_potential(cfg: &RunConfig, src: &SourceArgs) -> Result<PotentialPair> {
    let grid = cfg.grid()?;
    if let Some(path) = &src.potential {
        let a = cfg
            .a
            .ok_or_else(|| Error::Config("--a is required with --potential".into()))?;
        let q = io::read_potential_csv(path)?;
        if q.grid() != grid {
            log::info!("using the CSV grid with {} subintervals", q.grid().subintervals());
        }
        return split_potential(&q, DelayParameter::new(a)?);
    }
    let builtin = src.builtin.clone().or_else(|| cfg.builtin.clone());
    let seed = src.seed.or(cfg.seed);
    test_potential(cfg, builtin.as_deref(), seed, grid)
}

fn test_potential(
    cfg: &RunConfig,
    builtin: Option<&str>,
    seed: Option<u64>,
    grid: GridSpec,
) -> Result<PotentialPair> {
    match (builtin, seed) {
        (Some(name), _) => {
            let b: Builtin = name.parse()?;
            let a = DelayParameter::new(cfg.a.unwrap_or(b.default_delay()))?;
            Ok(b.potential_with_delay(grid, a))
        }
        (None, Some(seed)) => {
            let a = DelayParameter::new(cfg.a.unwrap_or(RANDOM_DEFAULT_DELAY))?;
            Ok(random_smooth(grid, a, seed, RANDOM_NORM))
        }
        (None, None) => Err(Error::Config(
            "no potential given: use --potential, --builtin or --seed".into(),
        )),
    }
}

/// Both spectra of `pot`, with the evaluator used to compute them.
pub fn forward_spectra(
    pot: &PotentialPair,
    cfg: &RunConfig,
) -> Result<(CharFnEvaluator, SpectralSequence, SpectralSequence)> {
    let ev = CharFnEvaluator::new(build_w_functions(pot));
    let opts = cfg.spectrum_options();
    let s0 = compute_spectrum_with(&ev, Boundary::Dirichlet, cfg.n_eigen, &opts)?;
    let s1 = compute_spectrum_with(&ev, Boundary::Neumann, cfg.n_eigen, &opts)?;
    Ok((ev, s0, s1))
}

/// Table of `n`, `Re lambda`, `Im lambda` and `|Delta_j(lambda)|`.
pub fn summary_table(ev: &CharFnEvaluator, spectra: &[&SpectralSequence]) -> String {
    let mut out = String::from("j\tn\tre_lambda\tim_lambda\tresidual\n");
    for s in spectra {
        for (n, &l) in s.lambdas.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                s.j.index(),
                n,
                io::num(l.re),
                io::num(l.im),
                io::num(ev.eval(s.j, l).norm())
            );
        }
    }
    out
}

fn cmd_forward(cfg: &RunConfig, src: &SourceArgs, out: &Path) -> Result<i32> {
    let pot = load_potential(cfg, src)?;
    let (ev, s0, s1) = forward_spectra(&pot, cfg)?;
    std::fs::create_dir_all(out).map_err(|e| Error::Io(e.to_string()))?;
    io::write_file(&out.join("spectrum_j0.json"), &io::format_spectrum_json(&s0))?;
    io::write_file(&out.join("spectrum_j1.json"), &io::format_spectrum_json(&s1))?;
    let table = summary_table(&ev, &[&s0, &s1]);
    io::write_file(&out.join("summary.tsv"), &table)?;
    print!("{table}");
    if let Some(l) = src.probe {
        let lambda = C::new(l, 0.0);
        for j in [Boundary::Dirichlet, Boundary::Neumann] {
            let d = ev.eval(j, lambda);
            println!("Delta_{}({}) = {} {}", j.index(), io::num(l), io::num(d.re), io::num(d.im));
        }
    }
    Ok(0)
}

fn check_delays(s0: &SpectralSequence, s1: &SpectralSequence) -> Result<DelayParameter> {
    let (a0, a1) = (s0.delay.value(), s1.delay.value());
    if a0 != a1 {
        return Err(Error::DelayMismatch(a0, a1));
    }
    Ok(s1.delay)
}

/// Runs the reconstruction on two spectra with the config's grid and options.
pub fn reconstruct(
    cfg: &RunConfig,
    s0: &SpectralSequence,
    s1: &SpectralSequence,
) -> Result<Reconstruction> {
    let a = check_delays(s0, s1)?;
    let grid = cfg.grid()?;
    if s0.len() > cfg.n_eigen {
        log::info!("spectra carry {} eigenvalues; n_eigen is {}", s0.len(), cfg.n_eigen);
    }
    run_algorithm1_with(s0, s1, a, grid, &cfg.inverse_options())
}

fn cmd_inverse(cfg: &RunConfig, p0: &Path, p1: &Path, out: &Path) -> Result<i32> {
    let s0 = io::read_spectrum_json(p0)?;
    let s1 = io::read_spectrum_json(p1)?;
    let rec = reconstruct(cfg, &s0, &s1)?;
    std::fs::create_dir_all(out).map_err(|e| Error::Io(e.to_string()))?;
    io::write_file(&out.join("potential.csv"), &io::format_potential_csv(&rec.q()))?;
    let diag = io::format_diagnostics_json(&rec.diagnostics);
    io::write_file(&out.join("diagnostics.json"), &diag)?;
    print!("{diag}");
    Ok(0)
}

/// Relative `L2` distance, or the absolute one when the reference vanishes.
pub fn relative_l2_error(reference: &PotentialPair, rec: &Reconstruction) -> f64 {
    let orig = reference.combined();
    let diff = orig.zip_with(&rec.q(), |x, y| x - y).l2_norm();
    let norm = orig.l2_norm();
    if norm > 0.0 {
        diff / norm
    } else {
        diff
    }
}

/// Outcome of a forward-then-inverse run.
#[derive(Debug, Clone)]
pub struct RoundtripReport {
    pub error: f64,
    pub reconstruction: Reconstruction,
    pub exact_omega: C,
}

pub fn roundtrip(cfg: &RunConfig, pot: &PotentialPair) -> Result<RoundtripReport> {
    let (ev, s0, s1) = forward_spectra(pot, cfg)?;
    let rec = reconstruct(cfg, &s0, &s1)?;
    Ok(RoundtripReport {
        error: relative_l2_error(pot, &rec),
        reconstruction: rec,
        exact_omega: ev.omega(),
    })
}

fn cmd_roundtrip(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let grid = cfg.grid()?;
    let pot = test_potential(cfg, cfg.builtin.as_deref(), cfg.seed, grid)?;
    let report = roundtrip(cfg, &pot)?;
    let d = &report.reconstruction.diagnostics;
    println!("delay\t{}", io::num(pot.a()));
    println!("n_eigen\t{}", cfg.n_eigen);
    println!("grid_m\t{}", cfg.grid_m);
    println!("omega_exact\t{}", io::pair(report.exact_omega));
    println!("omega_used\t{}", io::pair(d.omega));
    println!("omega_alt\t{}", io::pair(d.omega_alt));
    println!("qminus_consistency\t{}", io::num(d.qminus_consistency));
    println!("volterra_residual\t{}", io::num(d.volterra_residual));
    println!("l2_error\t{}", io::num(report.error));
    if out != Path::new(".") {
        std::fs::create_dir_all(out).map_err(|e| Error::Io(e.to_string()))?;
        io::write_file(
            &out.join("potential.csv"),
            &io::format_potential_csv(&report.reconstruction.q()),
        )?;
        io::write_file(&out.join("diagnostics.json"), &io::format_diagnostics_json(d))?;
    }
    Ok(if report.error <= cfg.threshold { 0 } else { 1 })
}

fn cmd_characterize(p0: Option<&Path>, p1: &Path, out: &Path) -> Result<i32> {
    let s1 = io::read_spectrum_json(p1)?;
    let s0 = p0.map(io::read_spectrum_json).transpose()?;
    let a = match &s0 {
        Some(s0) => check_delays(s0, &s1)?,
        None => s1.delay,
    };
    let report = characterize(s0.as_ref(), &s1, a)?;
    let text = io::format_report_json(&report, a, A4_TOLERANCE, TYPE_SLACK);
    std::fs::create_dir_all(out).map_err(|e| Error::Io(e.to_string()))?;
    io::write_file(&out.join("characterization.json"), &text)?;
    print!("{text}");
    Ok(0)
}

/// One line per check; the result is whether all passed.
pub fn selftest_lines() -> Vec<(String, bool)> {
    let mut lines = Vec::new();
    let grid = GridSpec::new(512).expect("valid grid");
    let cfg = RunConfig {
        n_eigen: 32,
        ..RunConfig::default()
    };

    let zero = Builtin::Zero.potential(grid);
    let ok = forward_spectra(&zero, &cfg).is_ok_and(|(_, s0, s1)| {
        (0..cfg.n_eigen).all(|n| {
            let nf = n as f64;
            (s0.lambdas[n] - (nf + 0.5) * (nf + 0.5)).norm() <= 1e-8
                && (s1.lambdas[n] - nf * nf).norm() <= 1e-8
        })
    });
    lines.push(("zero potential spectra".to_string(), ok));

    let one = C::new(1.0, 0.0);
    let probes = [
        (Builtin::StepQminus, Boundary::Dirichlet, C::new(0.0, 0.0)),
        (Builtin::StepQminus, Boundary::Neumann, C::new(-1.0, 0.0)),
        (Builtin::StepQplus, Boundary::Dirichlet, C::new(PI / 4.0 - 1.0, 0.0)),
        (Builtin::StepQplus, Boundary::Neumann, C::new(0.5, 0.0)),
    ];
    for (b, j, want) in probes {
        let ev = CharFnEvaluator::new(build_w_functions(&b.potential(grid)));
        let got = ev.eval(j, one);
        lines.push((
            format!("{b}: Delta_{}(1)", j.index()),
            (got - want).norm() <= 1e-6,
        ));
    }

    let rt = roundtrip(&cfg, &Builtin::StepQplus.potential(grid));
    lines.push((
        "step-qplus round trip, 32 eigenvalues".to_string(),
        rt.is_ok_and(|r| r.error <= 0.1),
    ));
    lines
}

fn cmd_selftest() -> Result<i32> {
    let lines = selftest_lines();
    for (name, ok) in &lines {
        println!("{} {name}", if *ok { "PASS" } else { "FAIL" });
    }
    Ok(if lines.iter().all(|(_, ok)| *ok) { 0 } else { 1 })
}
