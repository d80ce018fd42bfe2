//! emcap: batch CLI over the emcap-core library. Every subcommand writes a
//! CSV whose `#` header embeds the full configuration, so runs are
//! self-describing and byte-identical under identical inputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emcap_core::bounds::run_chain_trials;
use emcap_core::green::PhysicalScene;
use emcap_core::mercer::{
    exp_kernel_modes, exp_kernel_mutual_information, mercer_mutual_information, nystrom_modes,
    ExponentialKernelParams,
};
use emcap_core::numerics::Interval;
use emcap_core::sampled::{normalized_capacity_sweep, SourceAutocorrelation};
use emcap_core::spectrum::{green_spectrum, WavenumberGrid};
use emcap_core::waterfill::{capacity_ssd, equivalent_noise, waterfill_ssd, NoiseModel};
use emcap_core::Error;

#[derive(Parser)]
#[command(
    name = "emcap",
    about = "Capacity of electromagnetic communication between parallel lines",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wavenumber spectrum G(κ) of the line-to-line Green kernel
    Spectrum(SpectrumArgs),
    /// Water-filling capacity over the equivalent-noise spectrum
    Waterfill(WaterfillArgs),
    /// Mercer modes and mutual information of the exponential source kernel
    Mercer(MercerArgs),
    /// Finite/infinite mutual-information bound chain over random sources
    Bounds(BoundsArgs),
    /// Sampled-field mutual information convergence sweep
    Sampled(SampledArgs),
}

#[derive(Args)]
struct SceneArgs {
    /// wavelength λ, meters
    #[arg(long, default_value_t = 5.0)]
    wavelength: f64,
    /// line separation d, meters
    #[arg(long, default_value_t = 1.0)]
    distance: f64,
}

#[derive(Args)]
struct GridArgs {
    /// lower edge of the wavenumber grid, rad/m (default: scene-derived)
    #[arg(long)]
    kmin: Option<f64>,
    /// upper edge of the wavenumber grid, rad/m (default: scene-derived)
    #[arg(long)]
    kmax: Option<f64>,
    /// number of grid samples (default: scene-derived)
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// output path, `-` for stdout
    #[arg(long, short, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct WaterfillArgs {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// flat noise SSD S_N
    #[arg(long, default_value_t = 90.0)]
    noise_ssd: f64,
    /// total source power P (∫S_J dκ)
    #[arg(long, default_value_t = 3.0)]
    power: f64,
    #[arg(long, short, default_value = "-")]
    output: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MercerMethod {
    Closed,
    Nystrom,
}

#[derive(Args)]
struct MercerArgs {
    /// source power P
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// exponential correlation decay rate α, 1/m
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// white-noise level n0 (noise variance 2·(n0/2) per mode)
    #[arg(long, default_value_t = 1.0)]
    n0: f64,
    /// source segment length L, meters
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    /// number of modes in the mode table
    #[arg(long, default_value_t = 10)]
    modes: usize,
    /// eigensolver: analytic dispersion roots or Nyström discretization
    #[arg(long, value_enum, default_value_t = MercerMethod::Closed)]
    method: MercerMethod,
    /// Nyström grid size
    #[arg(long, default_value_t = 512)]
    nystrom_points: usize,
    /// sweep `lo:hi:step` over L, emitting `L,mi_nats` instead of modes
    #[arg(long)]
    length_sweep: Option<String>,
    #[arg(long, short, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1.0)]
    wavelength: f64,
    #[arg(long, default_value_t = 0.5)]
    distance: f64,
    /// source segment length L, meters
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    /// sampled white-noise variance σ²
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    /// samples per segment
    #[arg(long, default_value_t = 16)]
    grid_n: usize,
    /// virtual source periods on each side
    #[arg(long, default_value_t = 4)]
    periods: usize,
    /// lattice shifts in the stationarization average
    #[arg(long, default_value_t = 16)]
    shifts: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct SampledArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// region length L, meters
    #[arg(long, default_value_t = 2.0)]
    length: f64,
    /// exponential source correlation decay rate α, 1/m
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// source power P
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// sampled white-noise variance σ²
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    /// comma-separated destination sampling densities, samples per meter
    #[arg(long, default_value = "2,4,8,16,32")]
    densities: String,
    #[arg(long, short, default_value = "-")]
    output: String,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("EMCAP_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Waterfill(a) => cmd_waterfill(a),
        Command::Mercer(a) => cmd_mercer(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Sampled(a) => cmd_sampled(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("emcap: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 2 = invalid input, 3 = numerical non-convergence.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Accuracy { .. }
        | Error::EigenNonConvergence
        | Error::IllConditioned(_)
        | Error::BranchPoint { .. } => 3,
        _ => 2,
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write atomically for real paths (temp file + rename); stream for `-`.
fn emit(output: &str, content: &str) -> Result<(), Error> {
    if output == "-" {
        print!("{content}");
        return Ok(());
    }
    let path = Path::new(output);
    let mut tmp: PathBuf = path.to_path_buf();
    let mut name = path
        .file_name()
        .ok_or_else(|| Error::Domain(format!("bad output path {output}")))?
        .to_os_string();
    name.push(".tmp");
    tmp.set_file_name(name);
    fs::write(&tmp, content).map_err(|e| Error::Domain(format!("write {output}: {e}")))?;
    fs::rename(&tmp, path).map_err(|e| Error::Domain(format!("rename to {output}: {e}")))?;
    Ok(())
}

fn header(subcommand: &str, fields: &[(&str, String)]) -> String {
    let mut out = format!("# emcap {subcommand}\n");
    for (k, v) in fields {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out
}

fn positive(name: &str, v: f64) -> Result<f64, Error> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("{name} must be positive, got {v}")));
    }
    Ok(v)
}

fn resolve_grid(scene: &PhysicalScene<f64>, grid: &GridArgs) -> Result<WavenumberGrid<f64>, Error> {
    if let Some(n) = grid.samples {
        if n == 0 {
            return Err(Error::Domain("samples must be positive".into()));
        }
    }
    match (grid.kmin, grid.kmax, grid.samples) {
        (None, None, None) => Ok(WavenumberGrid::for_scene(scene)),
        _ => {
            let k0 = scene.kappa0();
            let kmax = grid.kmax.unwrap_or(8.0 * k0);
            let kmin = grid.kmin.unwrap_or(-kmax);
            if !(kmax > kmin) {
                return Err(Error::Domain(format!("kmin {kmin} must be below kmax {kmax}")));
            }
            let n = grid.samples.unwrap_or(4096);
            let dk = (kmax - kmin) / n as f64;
            let samples = (0..n).map(|i| kmin + dk * (i as f64 + 0.5)).collect();
            WavenumberGrid::from_samples(samples)
        }
    }
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<ExitCode, Error> {
    let scene = PhysicalScene::new(a.scene.wavelength, a.scene.distance)?;
    let grid = resolve_grid(&scene, &a.grid)?;
    let spec = green_spectrum(&scene, &grid)?;
    let mut out = header(
        "spectrum",
        &[
            ("wavelength_m", fmt(a.scene.wavelength)),
            ("distance_m", fmt(a.scene.distance)),
            ("samples", grid.len().to_string()),
            ("spacing_rad_per_m", fmt(grid.spacing())),
            ("units", "kappa rad/m; G ohm".to_string()),
        ],
    );
    out.push_str("kappa,re_G,im_G,abs_G\n");
    for (k, v) in grid.samples().iter().zip(&spec.values) {
        let _ = writeln!(out, "{},{},{},{}", fmt(*k), fmt(v.re), fmt(v.im), fmt(v.norm()));
    }
    let _ = writeln!(out, "# side_lobe_ratio = {}", fmt(spec.side_lobe_ratio(&scene)));
    emit(&a.output, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_waterfill(a: WaterfillArgs) -> Result<ExitCode, Error> {
    let scene = PhysicalScene::new(a.scene.wavelength, a.scene.distance)?;
    positive("noise-ssd", a.noise_ssd)?;
    positive("power", a.power)?;
    let grid = resolve_grid(&scene, &a.grid)?;
    let spec = green_spectrum(&scene, &grid)?;
    let noise_eq = equivalent_noise(&NoiseModel::White(a.noise_ssd), &spec.magnitude())?;
    let wf = waterfill_ssd(&noise_eq, a.power)?;
    let capacity = capacity_ssd(&wf.s_j, &noise_eq)?;
    let mut out = header(
        "waterfill",
        &[
            ("wavelength_m", fmt(a.scene.wavelength)),
            ("distance_m", fmt(a.scene.distance)),
            ("noise_ssd", fmt(a.noise_ssd)),
            ("power", fmt(a.power)),
            ("samples", grid.len().to_string()),
            ("units", "kappa rad/m; capacity nats/m".to_string()),
        ],
    );
    out.push_str("kappa,s_nprime,s_j,water_level\n");
    for ((k, sn), sj) in grid
        .samples()
        .iter()
        .zip(&noise_eq.values)
        .zip(&wf.s_j.values)
    {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt(*k),
            fmt(*sn),
            fmt(*sj),
            fmt(wf.water_level)
        );
    }
    let _ = writeln!(out, "# capacity_nats_per_m = {}", fmt(capacity));
    emit(&a.output, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_sweep(s: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Domain(format!("length sweep must be lo:hi:step, got {s}")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Domain(format!("bad sweep bound {}", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Domain(format!("bad sweep bound {}", parts[1])))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| Error::Domain(format!("bad sweep step {}", parts[2])))?;
    positive("sweep lo", lo)?;
    positive("sweep step", step)?;
    if hi < lo {
        return Err(Error::Domain(format!("sweep hi {hi} below lo {lo}")));
    }
    let mut out = Vec::new();
    let mut v = lo;
    while v <= hi + 1e-12 * step {
        out.push(v);
        v += step;
    }
    Ok(out)
}

fn cmd_mercer(a: MercerArgs) -> Result<ExitCode, Error> {
    positive("n0", a.n0)?;
    let fields = vec![
        ("power", fmt(a.power)),
        ("alpha", fmt(a.alpha)),
        ("n0", fmt(a.n0)),
        ("length_m", fmt(a.length)),
        (
            "method",
            match a.method {
                MercerMethod::Closed => "closed".to_string(),
                MercerMethod::Nystrom => "nystrom".to_string(),
            },
        ),
        ("units", "omega rad/m; mi nats".to_string()),
    ];
    let mut out = header("mercer", &fields);
    if let Some(sweep) = &a.length_sweep {
        out.push_str("L,mi_nats\n");
        for l in parse_sweep(sweep)? {
            let params = ExponentialKernelParams::new(a.power, a.alpha, l)?;
            let mi = match a.method {
                MercerMethod::Closed => exp_kernel_mutual_information(&params, a.n0)?.0,
                MercerMethod::Nystrom => {
                    let n = a.nystrom_points.max(4);
                    let spec = nystrom_modes(
                        |s: f64, sp: f64| a.power * (-a.alpha * (s - sp).abs()).exp(),
                        l,
                        n,
                        n,
                    )?;
                    mercer_mutual_information(&spec, a.n0)?.0
                }
            };
            let _ = writeln!(out, "{},{}", fmt(l), fmt(mi));
        }
    } else {
        let params = ExponentialKernelParams::new(a.power, a.alpha, a.length)?;
        if a.modes == 0 {
            return Err(Error::Domain("modes must be positive".into()));
        }
        let spec = match a.method {
            MercerMethod::Closed => exp_kernel_modes(&params, a.modes, 2)?,
            MercerMethod::Nystrom => nystrom_modes(
                |s: f64, sp: f64| a.power * (-a.alpha * (s - sp).abs()).exp(),
                a.length,
                a.nystrom_points.max(a.modes),
                a.modes,
            )?,
        };
        out.push_str("k,omega_k,lambda_k\n");
        for (k, mode) in spec.modes.iter().enumerate() {
            // Nyström has no dispersion root; invert λ(ω) for the exponential
            // kernel so the column stays populated
            let omega = mode.omega.unwrap_or_else(|| {
                (2.0 * a.alpha * a.power / mode.lambda.max(f64::MIN_POSITIVE)
                    - a.alpha * a.alpha)
                    .max(0.0)
                    .sqrt()
            });
            let _ = writeln!(out, "{},{},{}", k + 1, fmt(omega), fmt(mode.lambda));
        }
    }
    emit(&a.output, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(a: BoundsArgs) -> Result<ExitCode, Error> {
    let scene = PhysicalScene::new(a.wavelength, a.distance)?;
    positive("length", a.length)?;
    positive("noise", a.noise)?;
    if a.trials == 0 {
        return Err(Error::Domain("trials must be positive".into()));
    }
    let records = run_chain_trials(
        &scene,
        a.length,
        a.noise,
        a.grid_n,
        a.periods,
        a.shifts,
        a.trials,
        a.seed,
    )?;
    let mut out = header(
        "bounds",
        &[
            ("wavelength_m", fmt(a.wavelength)),
            ("distance_m", fmt(a.distance)),
            ("length_m", fmt(a.length)),
            ("noise_var", fmt(a.noise)),
            ("grid_n", a.grid_n.to_string()),
            ("periods", a.periods.to_string()),
            ("shifts", a.shifts.to_string()),
            ("trials", a.trials.to_string()),
            ("seed", a.seed.to_string()),
            ("units", "mi nats".to_string()),
        ],
    );
    out.push_str("trial,seed,i_LL,i_L2L,i_inf2L,chain_holds\n");
    let mut all_hold = true;
    for r in &records {
        all_hold &= r.chain_holds;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.trial,
            r.seed,
            fmt(r.i_ll),
            fmt(r.i_l2l),
            fmt(r.i_inf2l),
            r.chain_holds
        );
    }
    emit(&a.output, &out)?;
    if all_hold {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("emcap: bound chain violated in at least one trial");
        Ok(ExitCode::from(1))
    }
}

fn cmd_sampled(a: SampledArgs) -> Result<ExitCode, Error> {
    let scene = PhysicalScene::new(a.scene.wavelength, a.scene.distance)?;
    positive("length", a.length)?;
    positive("alpha", a.alpha)?;
    positive("power", a.power)?;
    positive("noise", a.noise)?;
    let densities: Vec<usize> = a
        .densities
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Domain(format!("bad density {s}")))
                .and_then(|v| {
                    if v == 0 {
                        Err(Error::Domain("densities must be positive".into()))
                    } else {
                        Ok(v)
                    }
                })
        })
        .collect::<Result<_, _>>()?;
    let (alpha, power) = (a.alpha, a.power);
    let r_j = SourceAutocorrelation::Stationary {
        r: Arc::new(move |ds: f64| power * (-alpha * ds.abs()).exp()),
        support: Interval::new(0.0, a.length)?,
    };
    let rows = normalized_capacity_sweep(&scene, a.length, &densities, &r_j, a.noise)?;
    let mut out = header(
        "sampled",
        &[
            ("wavelength_m", fmt(a.scene.wavelength)),
            ("distance_m", fmt(a.scene.distance)),
            ("length_m", fmt(a.length)),
            ("alpha", fmt(a.alpha)),
            ("power", fmt(a.power)),
            ("noise_var", fmt(a.noise)),
            ("densities_per_m", a.densities.clone()),
            ("units", "mi nats; mi_per_meter nats/m".to_string()),
        ],
    );
    out.push_str("n,mi_nats,mi_per_meter\n");
    for (n, mi, per_m) in rows {
        let _ = writeln!(out, "{},{},{}", n, fmt(mi), fmt(per_m));
    }
    emit(&a.output, &out)?;
    Ok(ExitCode::SUCCESS)
}
