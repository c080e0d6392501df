//! Command-line driver. Exit codes: 0 ok, 2 usage, 3 input parse, 4 resource guard.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use levy_gibbs::basis::BasisFamily;
use levy_gibbs::harness::{
    delta_condition, no_overfit_diagnostic, rate_table, run_regime, study_vg_params, ComplexityCase, RegimeSpec,
    StudyOptions,
};
use levy_gibbs::io;
use levy_gibbs::process::{CompoundPoissonSimulator, VgSimulator};
use levy_gibbs::rng::derive_seed;
use levy_gibbs::{
    credible_band, empirical_coefficients, l2_error_on, marginal_k, posterior_mean_function, sample_posterior,
    true_density_vg_with, validate_config, BandMetric, BasisSystem, CoefficientVector, CompoundPoissonParams,
    ExponentSign, GibbsConfig, IncrementSeries, JumpLaw, L2Reference, LevyError, SamplingScheme,
    VarianceGammaParams, Window,
};

type Result<T> = std::result::Result<T, LevyError>;

#[derive(Parser)]
#[command(name = "levy-gibbs", version, about = "Gibbs-posterior inference on Lévy densities")]
struct Cli {
    /// Flat `key = value` file; command-line flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate increments of a variance-gamma or compound Poisson process.
    Simulate(SimulateArgs),
    /// Projection estimate of the basis coefficients from an increment file.
    Estimate(EstimateArgs),
    /// Sample the Gibbs posterior and write draws, the pmf of K and a credible band.
    Posterior(PosteriorArgs),
    /// Run study regimes end to end.
    Experiment(ExperimentArgs),
    /// Print the sampling-frequency and learning-rate diagnostics. Writes nothing.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProcessKind {
    Vg,
    Cpois,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisKind {
    Trig,
    Legendre,
}

#[derive(Clone, Copy, ValueEnum)]
enum Truth {
    Vg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Decaying,
    Growing,
}

impl SignArg {
    fn sign(self) -> ExponentSign {
        match self {
            SignArg::Decaying => ExponentSign::Decaying,
            SignArg::Growing => ExponentSign::Growing,
        }
    }
}

#[derive(Args)]
struct VgArgs {
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    process: Option<ProcessKind>,
    #[command(flatten)]
    vg: VgArgs,
    #[arg(long)]
    lambda: Option<f64>,
    /// `point:c`, `normal:m,sd` or `uniform:a,b`.
    #[arg(long)]
    jump: Option<String>,
    /// Study regime (sets Δ and n); the seed is then the study's master seed.
    #[arg(long, conflicts_with_all = ["delta", "n"])]
    j: Option<u32>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Refuse to write more increments than this.
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WindowArgs {
    /// Left end of the basis window D'.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Right end of the basis window D'.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Left end of the reporting window D.
    #[arg(long, allow_negative_numbers = true)]
    d_a: Option<f64>,
    /// Right end of the reporting window D.
    #[arg(long, allow_negative_numbers = true)]
    d_b: Option<f64>,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Overrides the Δ in the file header.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum)]
    basis: Option<BasisKind>,
    #[command(flatten)]
    window: WindowArgs,
    /// Number of trigonometric functions (default ⌈t_n⌉).
    #[arg(long = "K", alias = "k")]
    k: Option<usize>,
    /// Legendre degrees per piece.
    #[arg(long = "J")]
    degrees: Option<usize>,
    /// Legendre pieces.
    #[arg(long = "L")]
    pieces: Option<usize>,
    #[arg(long, value_enum)]
    truth: Option<Truth>,
    #[command(flatten)]
    vg: VgArgs,
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GibbsArgs {
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    sigma0: Option<f64>,
    #[arg(long = "k-max", alias = "K-max")]
    k_max: Option<usize>,
    #[arg(long = "fixed-K", alias = "fixed-k")]
    fixed_k: Option<usize>,
    #[arg(long)]
    grid_points: Option<usize>,
}

#[derive(Args)]
struct PosteriorArgs {
    /// Coefficient file written by `estimate`.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    coefficients: Option<PathBuf>,
    /// Increment file; θ̂ is computed on a trigonometric basis first.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    delta: Option<f64>,
    /// Horizon, when the coefficient file does not record it.
    #[arg(long)]
    t_n: Option<f64>,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    gibbs: GibbsArgs,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    metric: Option<String>,
    /// Adds the true density column to band.csv.
    #[arg(long, value_enum)]
    truth: Option<Truth>,
    #[command(flatten)]
    vg: VgArgs,
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Regimes to run (repeatable, default 1).
    #[arg(long, num_args = 1..)]
    j: Vec<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    draws: Option<usize>,
    #[command(flatten)]
    gibbs: GibbsArgs,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    max_increments: Option<usize>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    j: Option<u32>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    sigma0: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long = "k-max")]
    k_max: Option<usize>,
}

/// Resolves each setting from the flag, then the config file, then the default,
/// and remembers the effective value.
struct Settings {
    file: BTreeMap<String, String>,
    effective: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => io::parse_config(&fs::read_to_string(p)?)?,
            None => BTreeMap::new(),
        };
        Ok(Settings { file, effective: BTreeMap::new() })
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| LevyError::Parse {
                line: 0,
                message: format!("config key `{key}` = `{raw}`: {e}"),
            }),
        }
    }

    fn opt<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => self.file_value(key)?,
        };
        if let Some(v) = &v {
            self.effective.insert(key.to_string(), v.to_string());
        }
        Ok(v)
    }

    fn get<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(self.opt(key, flag)?.unwrap_or_else(|| {
            self.effective.insert(key.to_string(), default.to_string());
            default
        }))
    }

    /// For values clap parses (enums): the flag wins, else the raw config string is parsed by clap's rules.
    fn choice<T: ValueEnum + Clone>(&mut self, key: &str, flag: Option<T>, default: Option<T>) -> Result<Option<T>> {
        let v = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(raw) => Some(T::from_str(raw, true).map_err(|e| LevyError::Parse {
                    line: 0,
                    message: format!("config key `{key}`: {e}"),
                })?),
                None => default,
            },
        };
        if let Some(v) = &v {
            if let Some(pv) = v.to_possible_value() {
                self.effective.insert(key.to_string(), pv.get_name().to_string());
            }
        }
        Ok(v)
    }

    fn vg(&mut self, args: &VgArgs) -> Result<VarianceGammaParams> {
        let d = study_vg_params();
        let mu = self.get("mu", args.mu, d.mu)?;
        let sigma = self.get("sigma", args.sigma, d.sigma)?;
        let nu = self.get("nu", args.nu, d.nu)?;
        VarianceGammaParams::new(mu, sigma, nu)
    }

    fn windows(&mut self, args: &WindowArgs) -> Result<(Window, Window)> {
        let g = GibbsConfig::default();
        let a = self.get("a", args.a, g.d_prime.a)?;
        let b = self.get("b", args.b, g.d_prime.b)?;
        let da = self.get("d-a", args.d_a, g.d.a)?;
        let db = self.get("d-b", args.d_b, g.d.b)?;
        let (dp, d) = (Window::new(a, b)?, Window::new(da, db)?);
        if !dp.contains_window(&d) {
            return Err(LevyError::Window(format!("D = [{da}, {db}] is not inside D' = [{a}, {b}]")));
        }
        Ok((dp, d))
    }

    fn gibbs(&mut self, args: &GibbsArgs, d_prime: Window, d: Window) -> Result<GibbsConfig> {
        let g = GibbsConfig::default();
        let cfg = GibbsConfig {
            omega: self.get("omega", args.omega, g.omega)?,
            beta: self.get("beta", args.beta, g.beta)?,
            sigma0: self.get("sigma0", args.sigma0, g.sigma0)?,
            k_max: self.opt("k-max", args.k_max)?,
            fixed_k: self.opt("fixed-K", args.fixed_k)?,
            d,
            d_prime,
            grid_points: self.get("grid-points", args.grid_points, g.grid_points)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

fn simulate(args: SimulateArgs, s: &mut Settings) -> Result<()> {
    let kind = s.choice("process", args.process, Some(ProcessKind::Vg))?.expect("has default");
    let seed = s.get("seed", args.seed, 0u64)?;
    let max_n = s.get("max-n", args.max_n, 50_000_000usize)?;
    let j = s.opt("j", args.j)?;
    let (scheme, stream_seed) = match j {
        Some(j) => {
            let spec = RegimeSpec::new(j)?;
            (spec.scheme, derive_seed(seed, &format!("simulation/j{j}")))
        }
        None => {
            let delta = s.opt("delta", args.delta)?;
            let n = s.opt("n", args.n)?;
            match (delta, n) {
                (Some(delta), Some(n)) => (SamplingScheme::new(delta, n)?, seed),
                _ => return Err(LevyError::parameter("give either --j or both --delta and --n")),
            }
        }
    };
    if scheme.n > max_n {
        return Err(LevyError::Resource(format!(
            "{} increments requested, above the limit of {max_n}; pass --max-n to allow it",
            scheme.n
        )));
    }
    let series = match kind {
        ProcessKind::Vg => {
            let p = s.vg(&args.vg)?;
            IncrementSeries::materialize(&VgSimulator::new(p, scheme, stream_seed)?, stream_seed)
        }
        ProcessKind::Cpois => {
            let lambda = s.get("lambda", args.lambda, 1.0)?;
            let jump: JumpLaw = s.get("jump", args.jump, "normal:0,1".to_string())?.parse()?;
            let p = CompoundPoissonParams::new(lambda, jump)?;
            IncrementSeries::materialize(&CompoundPoissonSimulator::new(p, scheme, stream_seed)?, stream_seed)
        }
    };
    io::save_increments(&series, &args.out)?;
    print_effective(s);
    println!("delta = {}", scheme.delta);
    println!("n = {}", scheme.n);
    println!("t_n = {}", scheme.t_n);
    println!("mean = {}", series.mean());
    Ok(())
}

fn load_series(path: &Path, delta: Option<f64>) -> Result<IncrementSeries> {
    io::load_increments(path)?.into_series(delta)
}

fn estimate(args: EstimateArgs, s: &mut Settings) -> Result<()> {
    let delta = s.opt("delta", args.delta)?;
    let series = load_series(&args.input, delta)?;
    let t_n = series.scheme.t_n;
    let (d_prime, d) = s.windows(&args.window)?;
    let basis = match s.choice("basis", args.basis, Some(BasisKind::Trig))?.expect("has default") {
        BasisKind::Trig => {
            let k = s.get("K", args.k, levy_gibbs::posterior::default_k_max(t_n))?;
            BasisSystem::trigonometric(d_prime, k)?
        }
        BasisKind::Legendre => {
            let j = s.get("J", args.degrees, 3)?;
            let l = s.get("L", args.pieces, 4)?;
            BasisSystem::piecewise_legendre(d_prime, j, l)?
        }
    };
    let theta = empirical_coefficients(&series, &basis)?;
    io::save_coefficients(&theta, &args.out)?;
    print_effective(s);
    println!("t_n = {t_n}");
    if s.choice("truth", args.truth, None)?.is_some() {
        let sign = s.choice("sign", args.sign, Some(SignArg::Decaying))?.expect("has default").sign();
        let truth = true_density_vg_with(&s.vg(&args.vg)?, sign)?;
        let err = l2_error_on(&theta, L2Reference::Density(&truth), &d, levy_gibbs::estimator::MIN_GRID_POINTS)?;
        println!("l2_error_D = {err}");
    }
    Ok(())
}

#[derive(Serialize)]
struct PosteriorSummary<'a> {
    effective_config: &'a BTreeMap<String, String>,
    config: GibbsConfig,
    t_n: f64,
    num_draws: usize,
    k_mode: usize,
    k_mean: f64,
    band_metric: BandMetric,
    band_level: f64,
    band_radius: f64,
}

fn posterior(args: PosteriorArgs, s: &mut Settings) -> Result<()> {
    let (d_prime, d) = s.windows(&args.window)?;
    let cfg = s.gibbs(&args.gibbs, d_prime, d)?;
    let theta: CoefficientVector = match (&args.coefficients, &args.input) {
        (Some(path), _) => {
            let mut c = io::load_coefficients(path)?;
            if let Some(t) = s.opt("t-n", args.t_n)? {
                c.t_n = Some(t);
            }
            c
        }
        (None, Some(path)) => {
            let series = load_series(path, s.opt("delta", args.delta)?)?;
            let k = cfg.fixed_k.unwrap_or_else(|| cfg.k_max_for(series.scheme.t_n));
            empirical_coefficients(&series, &BasisSystem::trigonometric(d_prime, k)?)?
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let t_n = theta
        .t_n
        .ok_or_else(|| LevyError::parameter("the coefficient file has no t_n; pass --t-n"))?;
    if theta.basis.window() != d_prime && args.coefficients.is_some() && (args.window.a.is_some() || args.window.b.is_some()) {
        return Err(LevyError::Window("--a/--b differ from the window of the coefficient file".into()));
    }
    let cfg = GibbsConfig { d_prime: theta.basis.window(), ..cfg };
    cfg.validate()?;
    if let BasisFamily::PiecewiseLegendre { .. } = theta.basis.family() {
        if cfg.fixed_k.is_none() {
            return Err(LevyError::parameter("a Legendre basis needs --fixed-K"));
        }
    }
    let num_draws = s.get("draws", args.draws, 1000usize)?;
    let seed = s.get("seed", args.seed, 0u64)?;
    let level = s.get("level", args.level, 0.9)?;
    let metric: BandMetric = s.get("metric", args.metric, "sup".to_string())?.parse()?;
    let truth = match s.choice("truth", args.truth, None)? {
        Some(Truth::Vg) => {
            let sign = s.choice("sign", args.sign, Some(SignArg::Decaying))?.expect("has default").sign();
            Some(true_density_vg_with(&s.vg(&args.vg)?, sign)?)
        }
        None => None,
    };

    let pmf = marginal_k(&theta, t_n, &cfg)?;
    let draws = sample_posterior(&theta, t_n, &cfg, num_draws, seed)?;
    let band = credible_band(&draws, level, metric)?;
    let psi_true = match &truth {
        Some(t) => Some(band.center.x.iter().map(|&x| t.eval(x)).collect::<Result<Vec<f64>>>()?),
        None => None,
    };

    fs::create_dir_all(&args.out_dir)?;
    let mut buf = Vec::new();
    io::write_draws(&draws, &mut buf)?;
    fs::write(args.out_dir.join("draws.jsonl"), buf)?;
    write_file(&args.out_dir.join("k_posterior.csv"), &io::k_posterior_csv(&[(None, &pmf)]))?;
    write_file(&args.out_dir.join("band.csv"), &io::band_csv(&band, psi_true.as_deref()))?;
    let summary = PosteriorSummary {
        effective_config: &s.effective,
        config: cfg,
        t_n,
        num_draws,
        k_mode: pmf.mode(),
        k_mean: pmf.mean(),
        band_metric: metric,
        band_level: level,
        band_radius: band.radius,
    };
    io::save_json(&summary, &args.out_dir.join("posterior.json"))?;
    let mean = posterior_mean_function(&draws)?;
    print_effective(s);
    println!("t_n = {t_n}");
    println!("K mode = {}, mean = {:.4}", pmf.mode(), pmf.mean());
    println!("band radius = {} ({} points)", band.radius, mean.x.len());
    Ok(())
}

#[derive(Serialize)]
struct StudyReport<'a> {
    effective_config: &'a BTreeMap<String, String>,
    regimes: &'a [levy_gibbs::ExperimentReport],
    rate_table: Vec<levy_gibbs::harness::RateRow>,
    no_overfit: Vec<levy_gibbs::harness::OverfitRow>,
}

fn experiment(args: ExperimentArgs, s: &mut Settings) -> Result<()> {
    let js: Vec<u32> = if args.j.is_empty() {
        match s.file.get("j") {
            Some(raw) => raw
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| LevyError::Parse { line: 0, message: format!("config key `j` = `{raw}`: {e}") })?,
            None => vec![1],
        }
    } else {
        args.j.clone()
    };
    s.effective.insert("j".into(), js.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","));
    let specs: Vec<RegimeSpec> = js.iter().map(|&j| RegimeSpec::new(j)).collect::<Result<_>>()?;
    let g = GibbsConfig::default();
    let cfg = s.gibbs(&args.gibbs, g.d_prime, g.d)?;
    let o = StudyOptions::default();
    let options = StudyOptions {
        num_draws: s.get("draws", args.draws, o.num_draws)?,
        band_level: s.get("level", args.level, o.band_level)?,
        alpha: s.get("alpha", args.alpha, o.alpha)?,
        tau: s.get("tau", args.tau, o.tau)?,
        max_increments: s.get("max-increments", args.max_increments, o.max_increments)?,
        ..o
    };
    let seed = s.get("seed", args.seed, 7u64)?;
    // refuse oversized regimes before running any of them
    for spec in &specs {
        if spec.n() > options.max_increments {
            return Err(LevyError::Resource(format!(
                "regime j={} has {} increments, above the limit of {}; pass --max-increments to run it",
                spec.j,
                spec.n(),
                options.max_increments
            )));
        }
    }
    let vg = study_vg_params();
    let mut reports = Vec::new();
    for spec in &specs {
        let r = run_regime(spec, vg, &cfg, &options, seed)?;
        println!(
            "j={} t_n={} K_mode={} err_postmean={:.6} err_projection={:.6}",
            spec.j,
            spec.t_n(),
            r.k_mode,
            r.err_postmean,
            r.err_projection
        );
        reports.push(r);
    }
    let rates = rate_table(&reports, options.alpha)?;
    let overfit = no_overfit_diagnostic(&reports, options.tau, options.alpha)?;

    fs::create_dir_all(&args.out_dir)?;
    let report = StudyReport { effective_config: &s.effective, regimes: &reports, rate_table: rates.clone(), no_overfit: overfit };
    io::save_json(&report, &args.out_dir.join("report.json"))?;
    write_file(&args.out_dir.join("errors.csv"), &io::errors_csv(&rates))?;
    let pmfs: Vec<(Option<u32>, &levy_gibbs::MarginalK)> =
        reports.iter().map(|r| (Some(r.regime.j), &r.k_posterior)).collect();
    write_file(&args.out_dir.join("k_posterior.csv"), &io::k_posterior_csv(&pmfs))?;
    for r in &reports {
        write_file(&args.out_dir.join(format!("band_j{}.csv", r.regime.j)), &io::study_band_csv(r))?;
    }
    Ok(())
}

fn check(args: CheckArgs, s: &mut Settings) -> Result<()> {
    let spec = RegimeSpec::new(s.get("j", args.j, 3)?)?;
    let g = GibbsConfig::default();
    let cfg = GibbsConfig {
        omega: s.get("omega", args.omega, g.omega)?,
        beta: s.get("beta", args.beta, g.beta)?,
        sigma0: s.get("sigma0", args.sigma0, g.sigma0)?,
        k_max: s.opt("k-max", args.k_max)?,
        ..g
    };
    let tau = s.get("tau", args.tau, StudyOptions::default().tau)?;
    let k = cfg.k_max_for(spec.t_n());
    let features = BasisSystem::trigonometric(cfg.d_prime, k)?.features();
    let delta = delta_condition(&features, &spec.scheme, ComplexityCase::PriorOnK, 1.0);
    let truth = true_density_vg_with(&study_vg_params(), ExponentSign::Decaying)?;
    let sup = truth.sup_on(cfg.d.a, cfg.d.b, cfg.grid_points)?;
    let diag = validate_config(&cfg, sup, tau);

    print_effective(s);
    println!("j = {}", spec.j);
    println!("delta = {}", spec.delta());
    println!("n = {}", spec.n());
    println!("t_n = {}", spec.t_n());
    println!("K = {k}");
    println!("n*delta^(5/3) = {:.6}", delta.n_delta_5_3);
    println!("n*delta^2 = {:e}", delta.n_delta2);
    println!("n*delta^3 = {:e}", delta.n_delta3);
    println!("F1^2*n*delta^3 = {:e}", delta.f1_term);
    println!("F2*delta = {:e}", delta.f2_term);
    println!("delta_condition = {}", pass(delta.case_pass && delta.general_pass));
    println!("sup_D psi = {sup}");
    println!("omega*C^2 = {}", diag.omega_c_squared);
    println!("beta_condition = {}", pass(diag.beta_condition));
    println!("tau_threshold = {}", diag.tau_threshold);
    println!("tau_condition = {}", pass(diag.tau_condition));
    Ok(())
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn print_effective(s: &Settings) {
    for (k, v) in &s.effective {
        println!("{k} = {v}");
    }
}

fn exit_code(e: &LevyError) -> u8 {
    match e {
        LevyError::Parse { .. } | LevyError::Json(_) => 3,
        LevyError::Resource(_) => 4,
        LevyError::Io(_) | LevyError::Integration(_) | LevyError::State(_) => 1,
        _ => 2,
    }
}

fn init_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("LEVY_GIBBS_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| LevyError::parameter(format!("LEVY_GIBBS_THREADS must be a positive integer, got `{raw}`")))?;
        if n == 0 {
            return Err(LevyError::parameter("LEVY_GIBBS_THREADS must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| LevyError::State(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    let mut s = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Simulate(a) => simulate(a, &mut s),
        Command::Estimate(a) => estimate(a, &mut s),
        Command::Posterior(a) => posterior(a, &mut s),
        Command::Experiment(a) => experiment(a, &mut s),
        Command::Check(a) => check(a, &mut s),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
