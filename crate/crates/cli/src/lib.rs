//! Subcommand front end: every verification and application of the library
//! exposed with CSV/SVG/report outputs.
//!
//! Exit codes: 0 when all requested checks pass, 1 on a check failure (the
//! failing step is named on standard error), 2 on usage errors. Angles are
//! degrees on the command line; hour fractions accept `k/12` or decimals.
//! A flat `key = value` config file may supply any flag; explicit flags
//! override the file.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sinratio::dioptre::{
    beam_report, laws_check, no_convergence_check, prop3_transcript, rays_svg, trace_csv,
    trace_ray, RefractionModel,
};
use sinratio::figure::{build_figure, figure_svg, local_eta, verify_figure_identities};
use sinratio::geom::Angle;
use sinratio::lemma::{
    chain_certificate, global_transcript, monotonicity_scan, FigureEta, HourFraction, RatioEta,
};
use sinratio::sky::{
    east_set_search, moon_monthly_max, prop28_report, trajectory, trajectory_csv, ArcSide,
    BodyModel,
};
use sinratio::sundial::{deviation_report, dial_svg, hour_line, hour_line_csv, SundialConfig};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "sinratio",
    about = "Certified monotonicity of sin x/sin(cx) and its classical applications",
    version
)]
struct Cli {
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized batch runs (deterministic outputs).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The monotonicity lemma: scans, proof transcripts, chain certificates.
    Lemma {
        #[command(subcommand)]
        cmd: LemmaCmd,
    },
    /// The Euclidean local-proof figure.
    Figure {
        #[command(subcommand)]
        cmd: FigureCmd,
    },
    /// Horizontal sundial hour lines.
    Sundial {
        #[command(subcommand)]
        cmd: SundialCmd,
    },
    /// Double refraction by a glass sphere.
    Dioptre {
        #[command(subcommand)]
        cmd: DioptreCmd,
    },
    /// Observer-frame celestial kinematics.
    Sky {
        #[command(subcommand)]
        cmd: SkyCmd,
    },
}

#[derive(Subcommand)]
enum LemmaCmd {
    /// Scan a degree grid for monotonicity counterexamples.
    Scan(ScanArgs),
    /// Check the six-step global proof at one (x, y, c), or a seeded batch.
    Transcript(TranscriptArgs),
    /// Stitch a chain certificate from local neighborhoods.
    Chain(ChainArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// Hour fraction c, as `k/12` or a decimal in (0, 1).
    #[arg(long)]
    c: Option<String>,
    /// Grid step in degrees.
    #[arg(long)]
    step_deg: Option<f64>,
    /// Upper end of the grid in degrees.
    #[arg(long)]
    max_deg: Option<f64>,
}

#[derive(Args)]
struct TranscriptArgs {
    /// Lower angle x in degrees.
    #[arg(long)]
    x: Option<f64>,
    /// Upper angle y in degrees.
    #[arg(long)]
    y: Option<f64>,
    /// Hour fraction c, as `k/12` or a decimal in (0, 1).
    #[arg(long)]
    c: Option<String>,
    /// Check a seeded batch of random triples instead of one transcript.
    #[arg(long)]
    random: Option<usize>,
    /// Write the transcript (or batch summary) as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    c: Option<String>,
    /// Neighborhood provider: `figure` (Euclidean construction) or `ratio`.
    #[arg(long)]
    provider: Option<String>,
    /// Write the chain points as CSV (`point_rad,f_value`).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FigureCmd {
    /// Build the figure and check every identity and majoration.
    Verify(FigureVerifyArgs),
    /// Bisect the local decrease neighborhood at (y, c).
    Eta(FigureEtaArgs),
    /// Export the figure as SVG.
    Svg(FigureSvgArgs),
}

#[derive(Args)]
struct FigureVerifyArgs {
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    c: Option<String>,
    /// Check a seeded batch of random figures (position-independent steps).
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FigureEtaArgs {
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    c: Option<String>,
}

#[derive(Args)]
struct FigureSvgArgs {
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    c: Option<String>,
    /// Output SVG path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SundialCmd {
    /// Hour-line samples (CSV) and the full dial overlay (SVG).
    Lines(SundialLinesArgs),
    /// Deviation report against the 1/174 and 3/5-barleycorn bounds.
    Deviation(SundialDeviationArgs),
}

#[derive(Args)]
struct SundialLinesArgs {
    /// Latitude in degrees.
    #[arg(long)]
    lat: Option<f64>,
    /// Obliquity in degrees.
    #[arg(long)]
    obliquity: Option<f64>,
    /// Hour fraction for the CSV line.
    #[arg(long)]
    c: Option<String>,
    /// Declination samples (odd, ≥ 3).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Dial overlay with all eleven hour lines and the three date curves.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SundialDeviationArgs {
    #[arg(long)]
    lat: Option<f64>,
    #[arg(long)]
    obliquity: Option<f64>,
    #[arg(long)]
    c: Option<String>,
    /// Gnomon length in barleycorns.
    #[arg(long)]
    gnomon: Option<f64>,
    /// Declination samples (odd, ≥ 33).
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum DioptreCmd {
    /// Trace one ray and print its axis crossing.
    Trace(DioptreTraceArgs),
    /// Check the refraction laws on an incidence grid.
    Laws(DioptreLawsArgs),
    /// The no-common-crossing reductio for a pair of incidences.
    Prop3(DioptreProp3Args),
    /// Beam accounting and burning-focus localization.
    Focus(DioptreFocusArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Refraction model: `snell` or `table` (the classical 40° → 25° row).
    #[arg(long)]
    model: Option<String>,
    /// Refractive index for the snell model.
    #[arg(long)]
    index: Option<f64>,
}

#[derive(Args)]
struct DioptreTraceArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Incidence in degrees.
    #[arg(long)]
    i: Option<f64>,
}

#[derive(Args)]
struct DioptreLawsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    grid_start: Option<f64>,
    #[arg(long)]
    grid_end: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct DioptreProp3Args {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    i1: Option<f64>,
    #[arg(long)]
    i2: Option<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct DioptreFocusArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Sweep CSV (`i_deg,d_deg,crossing_x`).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Meridian-plane ray diagram.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SkyCmd {
    /// Transit-versus-maximum report for one day's arc.
    Prop28(SkyProp28Args),
    /// Maximum east offset of the Moon over one month.
    MoonMax(SkyMoonMaxArgs),
    /// Search for settings east of the meridian near grazing latitudes.
    EastSet(SkyEastSetArgs),
}

#[derive(Args)]
struct SkyProp28Args {
    /// Body: `sun`, `moon` or `star`.
    #[arg(long)]
    body: Option<String>,
    #[arg(long)]
    lat: Option<f64>,
    /// Days after the epoch (June solstice for the sun).
    #[arg(long)]
    day: Option<f64>,
    /// Trajectory CSV around the transit (`t_days,delta_deg,H_deg,alt_deg`).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SkyMoonMaxArgs {
    #[arg(long)]
    lat: Option<f64>,
    /// Scan step in days.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args)]
struct SkyEastSetArgs {
    #[arg(long)]
    body: Option<String>,
    #[arg(long)]
    lat_min: Option<f64>,
    #[arg(long)]
    lat_max: Option<f64>,
    #[arg(long)]
    lat_steps: Option<usize>,
    #[arg(long)]
    days: Option<f64>,
    /// Trajectory samples per day.
    #[arg(long)]
    per_day: Option<usize>,
}

/// Flat `key = value` defaults loaded from --config.
struct Defaults(HashMap<String, String>);

impl Defaults {
    fn load(path: Option<&PathBuf>) -> Result<Self, String> {
        let mut map = HashMap::new();
        if let Some(p) = path {
            let text = fs::read_to_string(p).map_err(|e| format!("config {}: {e}", p.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((k, v)) = line.split_once('=') else {
                    return Err(format!(
                        "config {}:{}: expected `key = value`",
                        p.display(),
                        lineno + 1
                    ));
                };
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Defaults(map))
    }

    fn f64(&self, cli: Option<f64>, key: &str, default: f64) -> Result<f64, String> {
        match cli {
            Some(v) => Ok(v),
            None => match self.0.get(key) {
                Some(s) => s.parse().map_err(|_| format!("config key {key}: bad number `{s}`")),
                None => Ok(default),
            },
        }
    }

    fn usize(&self, cli: Option<usize>, key: &str, default: usize) -> Result<usize, String> {
        match cli {
            Some(v) => Ok(v),
            None => match self.0.get(key) {
                Some(s) => s.parse().map_err(|_| format!("config key {key}: bad count `{s}`")),
                None => Ok(default),
            },
        }
    }

    fn string(&self, cli: Option<String>, key: &str, default: &str) -> String {
        cli.or_else(|| self.0.get(key).cloned())
            .unwrap_or_else(|| default.to_string())
    }

    fn fraction(&self, cli: Option<String>, key: &str, default: f64) -> Result<f64, String> {
        let s = match cli.or_else(|| self.0.get(key).cloned()) {
            Some(s) => s,
            None => return Ok(default),
        };
        parse_fraction(&s)
    }
}

/// Parses `k/12`-style fractions or plain decimals.
pub fn parse_fraction(s: &str) -> Result<f64, String> {
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| format!("bad fraction `{s}`"))?;
        let d: f64 = den.trim().parse().map_err(|_| format!("bad fraction `{s}`"))?;
        if d == 0.0 {
            return Err(format!("bad fraction `{s}`: zero denominator"));
        }
        Ok(n / d)
    } else {
        s.trim().parse().map_err(|_| format!("bad fraction `{s}`"))
    }
}

fn write_artifact(path: &PathBuf, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("write {}: {e}", path.display()))
}

fn hour_fraction(v: f64) -> Result<HourFraction, String> {
    HourFraction::new(v).map_err(|e| e.to_string())
}

fn model_from(args: &ModelArgs, cfg: &Defaults) -> Result<RefractionModel, String> {
    let kind = cfg.string(args.model.clone(), "model", "snell");
    match kind.as_str() {
        "snell" => {
            let n = cfg.f64(args.index, "index", 1.5)?;
            RefractionModel::snell(n).map_err(|e| e.to_string())
        }
        "table" => Ok(RefractionModel::classical_row()),
        other => Err(format!("unknown model `{other}` (expected snell or table)")),
    }
}

fn body_from(name: &str) -> Result<BodyModel, String> {
    match name {
        // the sun epoch is the June solstice; moon and star start at λ = 0°/40°
        "sun" => Ok(BodyModel::sun(Angle::from_degrees(90.0))),
        "moon" => Ok(BodyModel::moon(Angle::from_degrees(0.0))),
        "star" => Ok(BodyModel::fixed_star(Angle::from_degrees(40.0))),
        other => Err(format!("unknown body `{other}` (expected sun, moon or star)")),
    }
}

/// Runs the CLI against the given argv (including the program name).
/// Returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success; keep that
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let cfg = match Defaults::load(cli.config.as_ref()) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli.command, &cfg, cli.seed) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: &Command, cfg: &Defaults, seed: u64) -> Result<i32, String> {
    match command {
        Command::Lemma { cmd } => match cmd {
            LemmaCmd::Scan(a) => lemma_scan(a, cfg),
            LemmaCmd::Transcript(a) => lemma_transcript(a, cfg, seed),
            LemmaCmd::Chain(a) => lemma_chain(a, cfg),
        },
        Command::Figure { cmd } => match cmd {
            FigureCmd::Verify(a) => figure_verify(a, cfg, seed),
            FigureCmd::Eta(a) => figure_eta(a, cfg),
            FigureCmd::Svg(a) => figure_svg_cmd(a, cfg),
        },
        Command::Sundial { cmd } => match cmd {
            SundialCmd::Lines(a) => sundial_lines(a, cfg),
            SundialCmd::Deviation(a) => sundial_deviation(a, cfg),
        },
        Command::Dioptre { cmd } => match cmd {
            DioptreCmd::Trace(a) => dioptre_trace(a, cfg),
            DioptreCmd::Laws(a) => dioptre_laws(a, cfg),
            DioptreCmd::Prop3(a) => dioptre_prop3(a, cfg),
            DioptreCmd::Focus(a) => dioptre_focus(a, cfg),
        },
        Command::Sky { cmd } => match cmd {
            SkyCmd::Prop28(a) => sky_prop28(a, cfg),
            SkyCmd::MoonMax(a) => sky_moon_max(a, cfg),
            SkyCmd::EastSet(a) => sky_east_set(a, cfg),
        },
    }
}

fn lemma_scan(a: &ScanArgs, cfg: &Defaults) -> Result<i32, String> {
    let c = hour_fraction(cfg.fraction(a.c.clone(), "c", 1.0 / 12.0)?)?;
    let step = cfg.f64(a.step_deg, "step-deg", 0.05)?;
    let max = cfg.f64(a.max_deg, "max-deg", 90.0)?;
    if !(step > 0.0 && max > step) {
        return Err("need 0 < step-deg < max-deg".into());
    }
    let n = (max / step).floor() as usize;
    let grid: Vec<Angle> = (1..=n)
        .map(|i| Angle::from_degrees(step * i as f64))
        .collect();
    match monotonicity_scan(c, &grid).map_err(|e| e.to_string())? {
        None => {
            println!(
                "no counterexample: f strictly decreases on {} grid points up to {max}°",
                grid.len()
            );
            Ok(EXIT_OK)
        }
        Some((x1, x2)) => {
            eprintln!(
                "counterexample: f({}°) <= f({}°) for c = {}",
                x1.deg(),
                x2.deg(),
                c.value()
            );
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn lemma_transcript(a: &TranscriptArgs, cfg: &Defaults, seed: u64) -> Result<i32, String> {
    let c = hour_fraction(cfg.fraction(a.c.clone(), "c", 0.5)?)?;
    if let Some(count) = a.random {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut csv = String::from("sample,x_deg,y_deg,c,overall\n");
        let mut failures = 0usize;
        for k in 0..count {
            let y = rng.random_range(1e-3..std::f64::consts::FRAC_PI_2 - 1e-9);
            let x = rng.random_range(1e-4..y * 0.999);
            let cv = rng.random_range(1e-3..1.0 - 1e-3);
            let t = global_transcript(Angle::new(x), Angle::new(y), hour_fraction(cv)?)
                .map_err(|e| e.to_string())?;
            if !t.overall() {
                failures += 1;
                eprintln!(
                    "failing step `{}` at x={x} y={y} c={cv}",
                    t.first_failure().map_or("?", |s| s.name.as_str())
                );
            }
            let _ = writeln!(
                csv,
                "{k},{},{},{cv},{}",
                x.to_degrees(),
                y.to_degrees(),
                t.overall()
            );
        }
        if let Some(path) = &a.csv {
            write_artifact(path, &csv)?;
        }
        println!("{count} random transcripts, {failures} failures");
        return Ok(if failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED });
    }

    let x = cfg.f64(a.x, "x", 30.0)?;
    let y = cfg.f64(a.y, "y", 60.0)?;
    let t = global_transcript(Angle::from_degrees(x), Angle::from_degrees(y), c)
        .map_err(|e| e.to_string())?;
    println!("{t}");
    if let Some(path) = &a.csv {
        write_artifact(path, &t.to_csv())?;
    }
    if t.overall() {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "failing step: {}",
            t.first_failure().map_or("?", |s| s.name.as_str())
        );
        Ok(EXIT_CHECK_FAILED)
    }
}

fn lemma_chain(a: &ChainArgs, cfg: &Defaults) -> Result<i32, String> {
    let c = hour_fraction(cfg.fraction(a.c.clone(), "c", 0.3)?)?;
    let x = cfg.f64(a.x, "x", 10.0)?;
    let y = cfg.f64(a.y, "y", 80.0)?;
    let provider = cfg.string(a.provider.clone(), "provider", "figure");
    let cert = match provider.as_str() {
        "figure" => chain_certificate(Angle::from_degrees(x), Angle::from_degrees(y), c, &FigureEta),
        "ratio" => chain_certificate(Angle::from_degrees(x), Angle::from_degrees(y), c, &RatioEta),
        other => return Err(format!("unknown provider `{other}` (expected figure or ratio)")),
    }
    .map_err(|e| e.to_string())?;
    println!(
        "chain of {} points from {y}° down to {x}°: f rises from {:.9} to {:.9}",
        cert.len(),
        cert.values.first().unwrap(),
        cert.values.last().unwrap()
    );
    if let Some(path) = &a.csv {
        let mut csv = String::from("point_rad,f_value\n");
        for (p, v) in cert.points.iter().zip(&cert.values) {
            let _ = writeln!(csv, "{p},{v}");
        }
        write_artifact(path, &csv)?;
    }
    Ok(EXIT_OK)
}

/// Steps of the figure transcript that hold for every position of D (the
/// neighborhood majorations hold only near A).
const POSITION_FREE_STEPS: [&str; 7] = [
    "DI/IE = sin x/sin(cx)",
    "AH/HC = sin y/sin(cy)",
    "Menelaus DCE: DI/IE = (DW/WC)(CR/RE)",
    "Menelaus ADC: AH/HC = (AU/UD)(DW/WC)",
    "AD/arc(AD) < CE/arc(CE)",
    "CR < CJ",
    "AO < AN",
];

fn figure_verify(a: &FigureVerifyArgs, cfg: &Defaults, seed: u64) -> Result<i32, String> {
    if let Some(count) = a.random {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut csv = String::from("sample,x_deg,y_deg,c,identities_pass\n");
        let mut failures = 0usize;
        let mut produced = 0usize;
        while produced < count {
            let y = rng.random_range(0.1..std::f64::consts::FRAC_PI_2);
            let cv = rng.random_range(0.05..0.95);
            let x = rng.random_range(0.02..y * 0.98);
            if (x - cv * y).abs() < 1e-3 {
                continue;
            }
            let fig = build_figure(Angle::new(x), Angle::new(y), hour_fraction(cv)?)
                .map_err(|e| e.to_string())?;
            let t = verify_figure_identities(&fig);
            let ok = POSITION_FREE_STEPS
                .iter()
                .all(|n| t.step(n).is_some_and(|s| s.pass));
            if !ok {
                failures += 1;
                eprintln!("identity failure at x={x} y={y} c={cv}");
            }
            let _ = writeln!(
                csv,
                "{produced},{},{},{cv},{ok}",
                x.to_degrees(),
                y.to_degrees()
            );
            produced += 1;
        }
        if let Some(path) = &a.csv {
            write_artifact(path, &csv)?;
        }
        println!("{count} random figures, {failures} identity failures");
        return Ok(if failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED });
    }

    let x = cfg.f64(a.x, "x", 40.0)?;
    let y = cfg.f64(a.y, "y", 70.0)?;
    let c = hour_fraction(cfg.fraction(a.c.clone(), "c", 0.5)?)?;
    let fig = build_figure(Angle::from_degrees(x), Angle::from_degrees(y), c)
        .map_err(|e| e.to_string())?;
    let t = verify_figure_identities(&fig);
    println!("{t}");
    if let Some(path) = &a.csv {
        write_artifact(path, &t.to_csv())?;
    }
    if t.overall() {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "failing step: {}",
            t.first_failure().map_or("?", |s| s.name.as_str())
        );
        Ok(EXIT_CHECK_FAILED)
    }
}

fn figure_eta(a: &FigureEtaArgs, cfg: &Defaults) -> Result<i32, String> {
    let y = cfg.f64(a.y, "y", 60.0)?;
    let c = hour_fraction(cfg.fraction(a.c.clone(), "c", 1.0 / 3.0)?)?;
    let r = local_eta(Angle::from_degrees(y), c).map_err(|e| e.to_string())?;
    println!(
        "eta({y}°, {}) = {:.9} rad = {:.6}°{}",
        c.value(),
        r.eta,
        r.eta.to_degrees(),
        if r.flagged { " (resolution floor)" } else { "" }
    );
    if r.flagged {
        eprintln!("failing step: eta bisection degenerated to the resolution floor");
        Ok(EXIT_CHECK_FAILED)
    } else {
        Ok(EXIT_OK)
    }
}

fn figure_svg_cmd(a: &FigureSvgArgs, cfg: &Defaults) -> Result<i32, String> {
    let x = cfg.f64(a.x, "x", 40.0)?;
    let y = cfg.f64(a.y, "y", 70.0)?;
    let c = hour_fraction(cfg.fraction(a.c.clone(), "c", 0.5)?)?;
    let fig = build_figure(Angle::from_degrees(x), Angle::from_degrees(y), c)
        .map_err(|e| e.to_string())?;
    let svg = figure_svg(&fig);
    match &a.out {
        Some(path) => write_artifact(path, &svg)?,
        None => println!("{svg}"),
    }
    Ok(EXIT_OK)
}

fn sundial_config(
    lat: Option<f64>,
    obliquity: Option<f64>,
    c: Option<String>,
    gnomon: Option<f64>,
    cfg: &Defaults,
) -> Result<SundialConfig, String> {
    let lat = cfg.f64(lat, "lat", 30.0)?;
    let obl = cfg.f64(obliquity, "obliquity", 23.5)?;
    let c = hour_fraction(cfg.fraction(c, "c", 1.0 / 12.0)?)?;
    let g = cfg.f64(gnomon, "gnomon", 18.0)?;
    if !(g > 0.0) {
        return Err("gnomon length must be positive".into());
    }
    Ok(SundialConfig {
        latitude: Angle::from_degrees(lat),
        obliquity: Angle::from_degrees(obl),
        gnomon_barleycorns: g,
        hour: c,
    })
}

fn sundial_lines(a: &SundialLinesArgs, cfg: &Defaults) -> Result<i32, String> {
    let sc = sundial_config(a.lat, a.obliquity, a.c.clone(), None, cfg)?;
    let n = cfg.usize(a.samples, "samples", 33)?;
    let line = hour_line(&sc, n).map_err(|e| e.to_string())?;
    println!(
        "hour line c = {} at φ = {}°: {} samples, deviation ratio {:.6}, {:.4} barleycorns",
        sc.hour.value(),
        sc.latitude.deg(),
        line.samples.len(),
        line.deviation.ratio,
        line.deviation.max_abs_barleycorns
    );
    if let Some(path) = &a.csv {
        write_artifact(path, &hour_line_csv(&line))?;
    }
    if let Some(path) = &a.svg {
        let svg = dial_svg(sc.latitude, sc.obliquity).map_err(|e| e.to_string())?;
        write_artifact(path, &svg)?;
    }
    Ok(EXIT_OK)
}

fn sundial_deviation(a: &SundialDeviationArgs, cfg: &Defaults) -> Result<i32, String> {
    let sc = sundial_config(a.lat, a.obliquity, a.c.clone(), a.gnomon, cfg)?;
    let n = cfg.usize(a.samples, "samples", 33)?;
    let r = deviation_report(&sc, n).map_err(|e| e.to_string())?;
    println!(
        "ratio = {:.6} (bound 1/174 = {:.6}), deviation = {:.4} barleycorns (bound 0.6)",
        r.ratio,
        1.0 / 174.0,
        r.max_dev_barleycorns
    );
    println!("{}", r.verdict);
    if r.verdict.starts_with("straight") {
        Ok(EXIT_OK)
    } else {
        eprintln!("failing step: deviation bounds exceeded");
        Ok(EXIT_CHECK_FAILED)
    }
}

fn dioptre_trace(a: &DioptreTraceArgs, cfg: &Defaults) -> Result<i32, String> {
    let model = model_from(&a.model, cfg)?;
    let i = cfg.f64(a.i, "i", 40.0)?;
    let tr = trace_ray(&model, Angle::from_degrees(i)).map_err(|e| e.to_string())?;
    println!(
        "i = {i}°: d = {:.6}°, exit = ({:.6}, {:.6}), crossing_x = {:.5}",
        tr.deviation.deg(),
        tr.exit.x,
        tr.exit.y,
        tr.crossing_x
    );
    Ok(EXIT_OK)
}

fn dioptre_laws(a: &DioptreLawsArgs, cfg: &Defaults) -> Result<i32, String> {
    let model = model_from(&a.model, cfg)?;
    let start = cfg.f64(a.grid_start, "grid-start", 1.0)?;
    let end = cfg.f64(a.grid_end, "grid-end", 82.0)?;
    let step = cfg.f64(a.grid_step, "grid-step", 0.5)?;
    if !(step > 0.0 && end >= start) {
        return Err("need grid-start <= grid-end and positive grid-step".into());
    }
    let n = ((end - start) / step).floor() as usize;
    let grid: Vec<Angle> = (0..=n)
        .map(|k| Angle::from_degrees(start + step * k as f64))
        .collect();
    let t = laws_check(&model, &grid).map_err(|e| e.to_string())?;
    println!("{t}");
    if let Some(path) = &a.csv {
        write_artifact(path, &t.to_csv())?;
    }
    if t.overall() {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "failing step: {}",
            t.first_failure().map_or("?", |s| s.name.as_str())
        );
        Ok(EXIT_CHECK_FAILED)
    }
}

fn dioptre_prop3(a: &DioptreProp3Args, cfg: &Defaults) -> Result<i32, String> {
    let model = model_from(&a.model, cfg)?;
    let i1 = cfg.f64(a.i1, "i1", 30.0)?;
    let i2 = cfg.f64(a.i2, "i2", 40.0)?;
    let t = prop3_transcript(
        Angle::from_degrees(i1),
        Angle::from_degrees(i2),
        &model,
    )
    .map_err(|e| e.to_string())?;
    println!("{t}");
    if let Some(path) = &a.csv {
        write_artifact(path, &t.to_csv())?;
    }
    if t.overall() {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "failing step: {}",
            t.first_failure().map_or("?", |s| s.name.as_str())
        );
        Ok(EXIT_CHECK_FAILED)
    }
}

fn dioptre_focus(a: &DioptreFocusArgs, cfg: &Defaults) -> Result<i32, String> {
    let model = model_from(&a.model, cfg)?;
    let b = beam_report(&model).map_err(|e| e.to_string())?;
    println!("entry areas: low {:.6}, high {}", b.area_lo, opt(b.area_hi));
    println!(
        "equal-area identity residual |sin²40° − cos²50°| = {:.2e}",
        b.equal_area_residual
    );
    println!(
        "crossings: low [{:.5}, {:.5}], high {}",
        b.crossings_lo.lo(),
        b.crossings_lo.hi(),
        b.crossings_hi
            .map_or("n/a".to_string(), |iv| format!("[{:.5}, {:.5}]", iv.lo(), iv.hi()))
    );
    println!("{}", b.focus_verdict);
    if a.csv.is_some() || a.svg.is_some() {
        // sweep strictly inside the validity domain
        let cap_deg = model
            .validity_cap()
            .map_or(40.0, |c| c.deg().min(89.9) - 0.2);
        let mut grid = Vec::new();
        let mut i = 1.0;
        while i <= cap_deg {
            grid.push(Angle::from_degrees(i));
            i += 0.5;
        }
        if let Some(path) = &a.csv {
            write_artifact(path, &trace_csv(&model, &grid).map_err(|e| e.to_string())?)?;
        }
        if let Some(path) = &a.svg {
            let fan: Vec<Angle> = grid.iter().copied().step_by(10).collect();
            write_artifact(path, &rays_svg(&model, &fan).map_err(|e| e.to_string())?)?;
        }
        // the sweep re-checks the no-common-crossing scan
        if let Some((a1, a2)) =
            no_convergence_check(&model, &grid).map_err(|e| e.to_string())?
        {
            eprintln!(
                "failing step: crossings not strictly decreasing between {}° and {}°",
                a1.deg(),
                a2.deg()
            );
            return Ok(EXIT_CHECK_FAILED);
        }
    }
    Ok(EXIT_OK)
}

fn opt(v: Option<f64>) -> String {
    v.map_or("n/a".to_string(), |x| format!("{x:.6}"))
}

fn sky_prop28(a: &SkyProp28Args, cfg: &Defaults) -> Result<i32, String> {
    let body = cfg.string(a.body.clone(), "body", "sun");
    let model = body_from(&body)?;
    let lat = cfg.f64(a.lat, "lat", 33.0)?;
    let day = cfg.f64(a.day, "day", 30.0)?;
    let r = prop28_report(&model, Angle::from_degrees(lat), day).map_err(|e| e.to_string())?;
    println!("{}", r.text());
    if let Some(path) = &a.csv {
        let m = model.advanced(day);
        let tr = trajectory(&m, Angle::from_degrees(lat), -0.3, 0.3, 121)
            .map_err(|e| e.to_string())?;
        write_artifact(path, &trajectory_csv(&tr))?;
    }
    let ok = match r.side {
        ArcSide::Southward => r.t_max < r.t_transit,
        ArcSide::Northward => r.t_max > r.t_transit,
    };
    if ok {
        Ok(EXIT_OK)
    } else {
        eprintln!("failing step: maximum did not fall on the expected side of the transit");
        Ok(EXIT_CHECK_FAILED)
    }
}

fn sky_moon_max(a: &SkyMoonMaxArgs, cfg: &Defaults) -> Result<i32, String> {
    let lat = cfg.f64(a.lat, "lat", 33.0)?;
    let step = cfg.f64(a.step, "step", 0.05)?;
    let best = moon_monthly_max(Angle::from_degrees(lat), step).map_err(|e| e.to_string())?;
    println!(
        "monthly maximum east offset: {:.4}° at transit t = {:+.4} d",
        best.h_offset.deg().abs(),
        best.t_transit
    );
    println!("{}", best.text());
    Ok(EXIT_OK)
}

fn sky_east_set(a: &SkyEastSetArgs, cfg: &Defaults) -> Result<i32, String> {
    let body = cfg.string(a.body.clone(), "body", "sun");
    let model = body_from(&body)?;
    let lat_min = cfg.f64(a.lat_min, "lat-min", 66.0)?;
    let lat_max = cfg.f64(a.lat_max, "lat-max", 67.0)?;
    let steps = cfg.usize(a.lat_steps, "lat-steps", 5)?;
    let days = cfg.f64(a.days, "days", 3.0)?;
    let per_day = cfg.usize(a.per_day, "per-day", 2000)?;
    let out = east_set_search(
        &model,
        Angle::from_degrees(lat_min),
        Angle::from_degrees(lat_max),
        steps,
        days,
        per_day,
    )
    .map_err(|e| e.to_string())?;
    match &out.first_east {
        Some(ev) => println!(
            "east-of-meridian setting found: φ = {:.3}°, t = {:.4} d, H mod 360 = {:.3}° \
             ({} settings examined)",
            ev.phi.deg(),
            ev.t,
            ev.hour_angle_mod.deg(),
            out.set_events
        ),
        None => println!(
            "no east-of-meridian setting among {} settings on φ ∈ [{lat_min}°, {lat_max}°]",
            out.set_events
        ),
    }
    Ok(EXIT_OK)
}
