use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flotilla_cli::config::{CheckName, Resolved, RunConfig};
use flotilla_cli::export::{read_csv, write_svg, SvgBundle, DEFAULT_FIGURE_STRIDE};
use flotilla_cli::{carousel_report, execute, write_outputs, CliError, REPORT_SCHEMA};

#[derive(Parser)]
#[command(name = "flotilla", version, about = "Flotation, buoyancy and illumination curves of planar convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep every δ of a config, run its checks and write curves.csv, report.json and figure.svg.
    Run {
        config: PathBuf,
        /// Output directory (overrides outputDir; default ".").
        #[arg(long)]
        out: Option<PathBuf>,
        /// Samples per sweep (overrides nSamples).
        #[arg(long)]
        samples: Option<usize>,
        /// Comma-separated checks (overrides checks).
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
    },
    /// Find the δ at which q chords of flotation wind p times around the curve.
    Carousel {
        config: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 0.0)]
        s0: f64,
        /// Directory for carousel.json (default ".").
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Export(Export),
}

#[derive(Subcommand)]
enum Export {
    /// Redraw a figure from a config and its curves.csv.
    Svg {
        config: PathBuf,
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Draw every K-th chord of flotation; 0 omits chords.
        #[arg(long, default_value_t = DEFAULT_FIGURE_STRIDE)]
        chord_stride: usize,
    },
    /// Print (or write) the JSON Schema of report.json.
    Schema {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FLOTILLA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("FLOTILLA_THREADS = {v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn run(
    config: PathBuf,
    out: Option<PathBuf>,
    samples: Option<usize>,
    checks: Option<Vec<String>>,
) -> Result<u8, CliError> {
    let mut cfg = RunConfig::load(&config)?;
    if let Some(n) = samples {
        cfg.n_samples = n;
    }
    if let Some(list) = checks {
        cfg.checks = list.iter().map(|c| c.trim().parse::<CheckName>()).collect::<Result<_, _>>()?;
    }
    let dir = out.or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    let res = Resolved::new(&cfg)?;
    let output = execute(&res)?;
    write_outputs(&dir, &output, res.chord_stride)?;
    let report = &output.report;
    println!("{}  area {:.12}  N = {}", report.curve, report.area, report.n_samples);
    for d in &report.deltas {
        let dh = d.delta_hat.map_or("none".to_string(), |v| format!("{v:.10}"));
        println!("  δ = {:.10}  λ = {:.10}  homothetic = {}  δ̂ = {dh}", d.delta, d.implied_lambda, d.homothetic);
    }
    for c in &report.checks {
        let value = c.value.map_or("n/a".to_string(), |v| format!("{v:.3e}"));
        let delta = c.delta.map_or(String::new(), |d| format!(" δ = {d:.6}"));
        println!(
            "{} {:<14}{delta}  {} = {value} (threshold {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            c.statistic,
            c.threshold
        );
        if let Some(note) = &c.note {
            println!("     {note}");
        }
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("wrote curves.csv, report.json, report.schema.json, figure.svg to {}", dir.display());
    Ok(output.exit_code())
}

fn carousel(config: PathBuf, p: usize, q: usize, s0: f64, out: Option<PathBuf>) -> Result<u8, CliError> {
    let res = Resolved::new(&RunConfig::load(&config)?)?;
    let r = carousel_report(&res, p, q, s0)?;
    let c = &r.carousel;
    println!("{}  p/q = {}/{}  δ = {:.12} ({:.8} of area)", r.curve, c.p, c.q, c.delta, r.delta_fraction);
    println!("  vertices {:?}", c.vertices);
    println!("  closure defect {:.3e}", c.closure_defect);
    if let Some(l) = c.lambdas {
        println!("  λ = {:.10} {:.10} {:.10}  product {:.3e} from 1", l[0], l[1], l[2], l[0] * l[1] * l[2] - 1.0);
    }
    if let Some(d) = &r.thm07 {
        println!(
            "  over {} starts: max |λ₁λ₂λ₃ − 1| = {:.3e}, centroid drift {:.3e}",
            d.centroid_track.len(),
            d.product_deviation_max,
            d.centroid_drift_max
        );
    }
    if let Some(note) = &r.note {
        println!("  {note}");
    }
    let dir = out.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("carousel.json"), serde_json::to_string_pretty(&r).expect("serializes") + "\n")?;
    Ok(0)
}

fn export(cmd: Export) -> Result<u8, CliError> {
    match cmd {
        Export::Svg { config, csv, out, chord_stride } => {
            let res = Resolved::new(&RunConfig::load(&config)?)?;
            let records = read_csv(&csv)?;
            write_svg(&out, &SvgBundle::from_records(&res.curve, &records, res.n_samples), chord_stride)?;
        }
        Export::Schema { out: Some(path) } => std::fs::write(path, REPORT_SCHEMA)?,
        Export::Schema { out: None } => print!("{REPORT_SCHEMA}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run { config, out, samples, checks } => run(config, out, samples, checks),
        Command::Carousel { config, q, p, s0, out } => carousel(config, p, q, s0, out),
        Command::Export(cmd) => export(cmd),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
