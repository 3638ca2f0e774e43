//! Command-line harness: wires configs, seeds, runs, persistence, and
//! plot-script emission.
//!
//! Exit codes: 0 success/pass, 1 usage or config error, 2 verification
//! failure, 3 verification not applicable.

mod config;
mod grid;
mod manifest;
mod plots;

use std::error::Error;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::ConfigFile;
use grid::parse_grid;
use manifest::ManifestWriter;
use powerlaw_lab::estimators::{fit_power_law, simulate_occupancy};
use powerlaw_lab::occupancy::{hausdorff_atoms, OccupancyCurve};
use powerlaw_lab::scaling::{exponent_report, memorizer_cross_entropy, scaling_point, ScalingError};
use powerlaw_lab::seed::derive_seed;
use powerlaw_lab::sources::{marginal_law, sample_narration, sample_santa_fe, ProcessSpec};
use powerlaw_lab::verify::{
    check_hapax_bound, check_hilberg_from_heaps, check_lower_heaps, check_shape,
    check_upper_heaps, MonteCarloOpts, VerificationReport,
};

const SEED_ENV: &str = "POWERLAW_LAB_SEED";

#[derive(Parser)]
#[command(
    name = "powerlaw-lab",
    version,
    about = "Power-law laboratory: occupancy curves, entropy estimators, scaling bounds, law checks"
)]
struct Cli {
    /// Process config file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed; falls back to $POWERLAW_LAB_SEED, then the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: hardware parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo vocabulary and spectrum curves from the configured process.
    Simulate {
        /// Record lengths: `1,10,100` or `log:LO:HI[:N]`.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 10)]
        replicates: usize,
        /// Spectrum multiplicity cap.
        #[arg(long, default_value_t = 3)]
        m_max: u64,
        /// Also write the first replicate's token stream to this file.
        #[arg(long)]
        emit_tokens: Option<PathBuf>,
        /// Emit paired `(type,bit)` tokens instead of bare types.
        #[arg(long)]
        santa_fe: bool,
    },
    /// Exact occupancy curve of the configured IID law.
    Exact {
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 0)]
        m_max: u64,
        /// Also write the representing measure as CSV.
        #[arg(long)]
        hausdorff: bool,
    },
    /// Check one law; exit 0 pass, 2 fail, 3 not-applicable.
    Verify {
        /// upper-heaps | lower-heaps | hapax | hilberg | shape
        law: String,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        grid: Option<String>,
        /// Test block length (hilberg).
        #[arg(long, default_value_t = 64)]
        s: u64,
        /// Replicates for sampled checks.
        #[arg(long, default_value_t = 200)]
        replicates: usize,
        /// Curve CSV to shape-check.
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Value column of the curve CSV.
        #[arg(long, default_value = "V")]
        column: String,
    },
    /// Scaling bounds: regime map, exponent report, plot script.
    Scaling {
        #[arg(long)]
        beta: f64,
        /// Training-token grid for the regime map and exponent fit.
        #[arg(long, default_value = "log:100:100000")]
        t_grid: String,
        /// Parameter-budget grid for the exponent fit (floats).
        #[arg(long, default_value = "log:0.25:250")]
        n_grid: String,
        /// Compute budget for the regime map rows.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Parameter budget for the regime map rows (`inf` allowed).
        #[arg(long, default_value = "inf")]
        n: String,
        /// Bound scale constant.
        #[arg(long, default_value_t = 1.0)]
        c9: f64,
        /// Evaluate a single `t,n,c` point instead of the t grid.
        #[arg(long)]
        point: Option<String>,
        /// Also run the memorization predictor (needs --config).
        #[arg(long)]
        memorizer: bool,
        /// Memorizer training-length grid.
        #[arg(long, default_value = "log:1000:100000")]
        grid: String,
        /// Memorizer test block length.
        #[arg(long, default_value_t = 1000)]
        s: u64,
        #[arg(long, default_value_t = 50)]
        replicates: usize,
    },
    /// Power-law fit of two CSV columns.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// x column name.
        #[arg(long)]
        x: String,
        /// y column name.
        #[arg(long)]
        y: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(u8::from(usage_error));
        }
    };
    powerlaw_lab::configure_threads(cli.threads);
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ConfigFile, Box<dyn Error>> {
    let path = cli.config.as_ref().ok_or("this command needs --config")?;
    Ok(ConfigFile::load(path)?)
}

/// Seed precedence: flag, environment, config, 0.
fn resolve_seed(cli: &Cli, cfg: Option<&ConfigFile>) -> u64 {
    cli.seed
        .or_else(|| std::env::var(SEED_ENV).ok().and_then(|v| v.parse().ok()))
        .or_else(|| cfg.and_then(|c| c.seed))
        .unwrap_or(0)
}

fn run(cli: &Cli) -> Result<u8, Box<dyn Error>> {
    match &cli.command {
        Command::Simulate { grid, replicates, m_max, emit_tokens, santa_fe } => {
            cmd_simulate(cli, grid, *replicates, *m_max, emit_tokens.as_deref(), *santa_fe)
        }
        Command::Exact { grid, m_max, hausdorff } => cmd_exact(cli, grid, *m_max, *hausdorff),
        Command::Verify { law, beta, grid, s, replicates, curve, column } => {
            cmd_verify(cli, law, *beta, grid.as_deref(), *s, *replicates, curve.as_deref(), column)
        }
        Command::Scaling {
            beta,
            t_grid,
            n_grid,
            c,
            n,
            c9,
            point,
            memorizer,
            grid,
            s,
            replicates,
        } => cmd_scaling(
            cli,
            *beta,
            t_grid,
            n_grid,
            *c,
            n,
            *c9,
            point.as_deref(),
            *memorizer,
            grid,
            *s,
            *replicates,
        ),
        Command::Fit { input, x, y } => cmd_fit(cli, input, x, y),
    }
}

fn cmd_simulate(
    cli: &Cli,
    grid_text: &str,
    replicates: usize,
    m_max: u64,
    emit_tokens: Option<&Path>,
    santa_fe: bool,
) -> Result<u8, Box<dyn Error>> {
    let cfg = load_config(cli)?;
    let seed = resolve_seed(cli, Some(&cfg));
    let spec = cfg.process_spec()?;
    let grid = parse_grid(grid_text)?;
    let sim = simulate_occupancy(&spec, &grid, m_max, replicates, seed)?;

    let resolved = json!({
        "command": "simulate",
        "config": cfg,
        "grid": grid,
        "replicates": replicates,
        "m_max": m_max,
        "santa_fe": santa_fe,
    });
    let mut writer = ManifestWriter::new(&cli.out, resolved, seed)?;

    let mut vocabulary = String::from("t,value,stderr\n");
    for i in 0..grid.len() {
        let _ = writeln!(vocabulary, "{},{},{}", grid[i], sim.v_mean[i], sim.v_stderr[i]);
    }
    writer.write_output("vocabulary.csv", vocabulary.as_bytes())?;

    let mut spectrum = String::from("t,m,value,stderr\n");
    for i in 0..grid.len() {
        for m in 0..m_max as usize {
            let _ = writeln!(
                spectrum,
                "{},{},{},{}",
                grid[i],
                m + 1,
                sim.spectrum_mean[i][m],
                sim.spectrum_stderr[i][m]
            );
        }
    }
    writer.write_output("spectrum.csv", spectrum.as_bytes())?;

    let mut full = Vec::new();
    sim.write_csv(&mut full)?;
    writer.write_output("occupancy_sim.csv", &full)?;
    writer.write_output("plot_occupancy.py", plots::occupancy_script().as_bytes())?;

    if let Some(path) = emit_tokens {
        let t = *grid.last().unwrap();
        let mut body = String::new();
        if santa_fe {
            let pair_cfg = cfg.santa_fe(seed)?;
            for (k, b) in sample_santa_fe(&pair_cfg, t, derive_seed(seed, 0))? {
                let _ = writeln!(body, "{k},{b}");
            }
        } else {
            for k in sample_narration(&spec, t, derive_seed(seed, 0))? {
                let _ = writeln!(body, "{k}");
            }
        }
        std::fs::write(path, body)?;
    }
    writer.finish()?;
    println!("simulate: wrote vocabulary.csv, spectrum.csv, occupancy_sim.csv to {}", cli.out.display());
    Ok(0)
}

fn cmd_exact(cli: &Cli, grid_text: &str, m_max: u64, hausdorff: bool) -> Result<u8, Box<dyn Error>> {
    let cfg = load_config(cli)?;
    let seed = resolve_seed(cli, Some(&cfg));
    let spec = cfg.process_spec()?;
    if !spec.is_iid() {
        return Err("exact occupancy curves are defined for IID processes only".into());
    }
    let law = marginal_law(&spec);
    let grid = parse_grid(grid_text).or_else(|e| {
        // Allow a bare 0 or lists starting at 0 for exact curves.
        if grid_text.split(',').all(|p| p.trim().parse::<u64>().is_ok()) {
            let mut g: Vec<u64> =
                grid_text.split(',').map(|p| p.trim().parse().unwrap()).collect();
            g.dedup();
            Ok(g)
        } else {
            Err(e)
        }
    })?;
    let curve = OccupancyCurve::exact(&law, &grid, m_max)?;

    let resolved = json!({
        "command": "exact",
        "config": cfg,
        "grid": grid,
        "m_max": m_max,
        "hausdorff": hausdorff,
    });
    let mut writer = ManifestWriter::new(&cli.out, resolved, seed)?;
    let mut body = Vec::new();
    curve.write_csv(&mut body)?;
    writer.write_output("occupancy.csv", &body)?;
    if hausdorff {
        let mu = hausdorff_atoms(&law);
        let mut body = Vec::new();
        mu.write_csv(&mut body)?;
        writer.write_output("hausdorff.csv", &body)?;
    }
    writer.write_output("plot_occupancy.py", plots::occupancy_script().as_bytes())?;
    writer.finish()?;
    println!("exact: wrote occupancy.csv to {}", cli.out.display());
    Ok(0)
}

/// Beta precedence: flag, then the config law's own descriptor.
fn resolve_beta(beta: Option<f64>, spec: &ProcessSpec) -> Result<f64, Box<dyn Error>> {
    if let Some(b) = beta {
        return Ok(b);
    }
    if let ProcessSpec::Iid(law) = spec {
        if let Some(d) = law.zipf_descriptor() {
            return Ok(d.beta);
        }
    }
    Err("--beta is required (the configured law has no power-law descriptor)".into())
}

fn cmd_verify(
    cli: &Cli,
    law_name: &str,
    beta: Option<f64>,
    grid_text: Option<&str>,
    s: u64,
    replicates: usize,
    curve: Option<&Path>,
    column: &str,
) -> Result<u8, Box<dyn Error>> {
    let report: VerificationReport = match law_name {
        "shape" => {
            let path = curve.ok_or("verify shape needs --curve FILE")?;
            let (t, values) = read_curve_csv(path, column)?;
            check_shape(&t, &values, &path.display().to_string())?
        }
        "upper-heaps" | "lower-heaps" | "hapax" | "hilberg" => {
            let cfg = load_config(cli)?;
            let seed = resolve_seed(cli, Some(&cfg));
            let spec = cfg.process_spec()?;
            let mc = MonteCarloOpts { replicates, base_seed: seed };
            match law_name {
                "upper-heaps" => {
                    if !spec.is_iid() {
                        return Err("upper-heaps applies to IID processes".into());
                    }
                    let b = resolve_beta(beta, &spec)?;
                    let grid = parse_grid(grid_text.unwrap_or("log:10:10000"))?;
                    check_upper_heaps(&marginal_law(&spec), b, &grid)?
                }
                "lower-heaps" => {
                    let b = resolve_beta(beta, &spec)?;
                    let grid = parse_grid(grid_text.unwrap_or("log:10:10000"))?;
                    check_lower_heaps(&spec, b, &grid, mc)?
                }
                "hapax" => {
                    let grid = parse_grid(grid_text.unwrap_or("100,1000"))?;
                    check_hapax_bound(&spec, &grid, mc)?
                }
                _ => {
                    let b = resolve_beta(beta, &spec)?;
                    let grid = parse_grid(grid_text.unwrap_or("log:100:10000"))?;
                    let pair_cfg = cfg.santa_fe(seed)?;
                    check_hilberg_from_heaps(&pair_cfg, b, &grid, s)?
                }
            }
        }
        other => {
            return Err(format!(
                "unknown law '{other}' (expected upper-heaps | lower-heaps | hapax | hilberg | shape)"
            )
            .into())
        }
    };

    let seed = cli.seed.unwrap_or(0);
    let resolved = json!({ "command": "verify", "law": law_name });
    let mut writer = ManifestWriter::new(&cli.out, resolved, seed)?;
    writer.write_output("report.json", report.to_json().as_bytes())?;
    writer.finish()?;
    print!("{}", report.render_table());
    Ok(u8::try_from(report.exit_code()).unwrap_or(1))
}

#[allow(clippy::too_many_arguments)]
fn cmd_scaling(
    cli: &Cli,
    beta: f64,
    t_grid_text: &str,
    n_grid_text: &str,
    c: f64,
    n_text: &str,
    c9: f64,
    point: Option<&str>,
    memorizer: bool,
    mem_grid_text: &str,
    s: u64,
    replicates: usize,
) -> Result<u8, Box<dyn Error>> {
    let n_fixed = parse_budget(n_text)?;
    let points: Vec<(f64, f64, f64)> = if let Some(spec) = point {
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 3 {
            return Err("--point must be t,n,c".into());
        }
        vec![(parts[0].trim().parse()?, parse_budget(parts[1])?, parts[2].trim().parse()?)]
    } else {
        parse_float_grid(t_grid_text)?.into_iter().map(|t| (t, n_fixed, c)).collect()
    };

    let mut regime = String::from("t,n,c,beta,smax,bound_t,bound_n,bound\n");
    for &(t, n, c) in &points {
        match scaling_point(t, n, c, beta, c9) {
            Ok(p) => {
                let _ = writeln!(
                    regime,
                    "{t},{},{c},{beta},{},{},{},{}",
                    fmt_budget(n),
                    fmt_opt(p.s_max),
                    fmt_opt(p.bound_t),
                    fmt_opt(p.bound_n),
                    fmt_opt(p.bound)
                );
            }
            Err(ScalingError::NoAdmissibleTestLength) => {
                // Out of regime: keep the row, leave the branches empty.
                let _ = writeln!(regime, "{t},{},{c},{beta},,,,", fmt_budget(n));
            }
            Err(e) => return Err(e.into()),
        }
    }

    let t_fit_grid = parse_float_grid(t_grid_text)?;
    let n_fit_grid = parse_float_grid(n_grid_text)?;
    let report = exponent_report(beta, &t_fit_grid, &n_fit_grid, 0.0)?;

    let cfg = if cli.config.is_some() { Some(load_config(cli)?) } else { None };
    let seed = resolve_seed(cli, cfg.as_ref());
    let resolved = json!({
        "command": "scaling",
        "beta": beta,
        "c": c,
        "n": fmt_budget(n_fixed),
        "c9": c9,
        "t_grid": t_fit_grid,
        "n_grid": n_fit_grid,
        "memorizer": memorizer,
    });
    let mut writer = ManifestWriter::new(&cli.out, resolved, seed)?;
    writer.write_output("regime.csv", regime.as_bytes())?;
    writer.write_output(
        "exponents.json",
        serde_json::to_string_pretty(&report)?.as_bytes(),
    )?;

    if memorizer {
        let cfg = cfg.ok_or("scaling --memorizer needs --config")?;
        let pair_cfg = cfg.santa_fe(seed)?;
        let grid = parse_grid(mem_grid_text)?;
        let curve = memorizer_cross_entropy(&pair_cfg, &grid, s, replicates, seed)?;
        let mut body = Vec::new();
        curve.write_csv(&mut body)?;
        writer.write_output("memorizer.csv", &body)?;
    }
    writer.write_output("plot_scaling.py", plots::scaling_script().as_bytes())?;
    writer.finish()?;
    println!(
        "scaling: gamma_T cap {:.6}, fitted {:.6}; gamma_N cap {:.6}, fitted {:.6}",
        report.gamma_t_cap, report.fitted_gamma_t, report.gamma_n_cap, report.fitted_gamma_n
    );
    Ok(0)
}

fn cmd_fit(cli: &Cli, input: &Path, x: &str, y: &str) -> Result<u8, Box<dyn Error>> {
    let (xs, ys) = read_csv_columns(input, x, y)?;
    let fit = fit_power_law(&xs, &ys)?;
    let resolved = json!({
        "command": "fit",
        "input": input.display().to_string(),
        "x": x,
        "y": y,
    });
    let mut writer = ManifestWriter::new(&cli.out, resolved, cli.seed.unwrap_or(0))?;
    writer.write_output("fit.json", serde_json::to_string_pretty(&fit)?.as_bytes())?;
    writer.finish()?;
    println!("fit: exponent {:.6}, r2 {:.6}, {} points", fit.exponent, fit.r_squared, fit.n_points);
    Ok(0)
}

fn parse_budget(text: &str) -> Result<f64, Box<dyn Error>> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    Ok(t.parse()?)
}

fn fmt_budget(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

/// Float grid: comma list or `log:LO:HI[:N]` with real bounds.
fn parse_float_grid(text: &str) -> Result<Vec<f64>, Box<dyn Error>> {
    if let Some(rest) = text.strip_prefix("log:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(format!("log grid must be log:LO:HI or log:LO:HI:N, got {text}").into());
        }
        let lo: f64 = parts[0].parse()?;
        let hi: f64 = parts[1].parse()?;
        if !(lo > 0.0) || !(hi > lo) {
            return Err(format!("log grid needs 0 < LO < HI, got {text}").into());
        }
        let points = if parts.len() == 3 {
            parts[2].parse::<usize>()?
        } else {
            (4.0 * (hi / lo).log10()).round() as usize + 1
        };
        if points < 2 {
            return Err("log grid needs at least 2 points".into());
        }
        Ok((0..points)
            .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
            .collect())
    } else {
        let mut out = Vec::new();
        for part in text.split(',') {
            out.push(part.trim().parse::<f64>()?);
        }
        if out.len() < 2 {
            return Err("grid needs at least 2 points".into());
        }
        Ok(out)
    }
}

/// Read `t` plus one value column from a curve CSV.
fn read_curve_csv(path: &Path, column: &str) -> Result<(Vec<f64>, Vec<f64>), Box<dyn Error>> {
    read_csv_columns(path, "t", column)
}

fn read_csv_columns(path: &Path, x: &str, y: &str) -> Result<(Vec<f64>, Vec<f64>), Box<dyn Error>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or("CSV file is empty")?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let xi = names.iter().position(|&n| n == x).ok_or_else(|| format!("no column '{x}'"))?;
    let yi = names.iter().position(|&n| n == y).ok_or_else(|| format!("no column '{y}'"))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let (Some(a), Some(b)) = (cells.get(xi), cells.get(yi)) else { continue };
        let (Ok(a), Ok(b)) = (a.trim().parse::<f64>(), b.trim().parse::<f64>()) else { continue };
        xs.push(a);
        ys.push(b);
    }
    if xs.is_empty() {
        return Err(format!("no numeric rows with columns '{x}' and '{y}' in {}", path.display()).into());
    }
    Ok((xs, ys))
}
