//! Command-line front end: sweeps, mode reports, slope fits, regime maps.
//!
//! Subcommands: `correlations`, `entropy-sweep`, `modes`, `scaling`,
//! `regime-map`, `single-site`, `fit-slope`, `continuum-check`.
//!
//! Everything is deterministic: no randomness anywhere, fixed output
//! ordering, fixed formatting (reals as 17-significant-digit scientific
//! notation). Exit codes: 0 success, 2 configuration error, 3 numerical
//! failure.
//!
//! A config file (`--config path`) supplies defaults in a flat
//! `key = value` grammar with `[section]` headers named after subcommands;
//! a `[global]` section applies everywhere. Command-line flags override
//! file values. Example:
//!
//! ```text
//! [global]
//! out-dir = runs/today
//!
//! [entropy-sweep]
//! n = 2048
//! nb = 64
//! emit = csv,svg
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analytics::{self, ResidualModel};
use crate::chain_model::{
    build_correlations, correlation_at, g_infinite, h_infinite, ChainSpec,
};
use crate::continuum::{correspondence_check, ContinuumSpec};
use crate::entanglement::{analyze_block, entropy_of_lambda};
use crate::error::{ChainError, Result};
use crate::fit::{fit_line, FitResult};
use crate::gaussian::BlockPartition;
use crate::precise;

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

#[derive(Parser)]
#[command(
    name = "harmonic-chain",
    about = "Ground-state entanglement structure of a circular harmonic chain",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate finite-N and infinite-chain correlators g_l, h_l.
    Correlations(CorrelationsArgs),
    /// Sweep total and per-mode block entanglement over the coupling.
    EntropySweep(EntropySweepArgs),
    /// Full modewise report (JSON) for one bipartition.
    Modes(ModesArgs),
    /// Residual-mode scaling collapse at strong coupling (multiprecision).
    Scaling(ScalingArgs),
    /// Grid of total entanglement over (coupling, block size).
    RegimeMap(RegimeMapArgs),
    /// Single-oscillator block: numeric vs closed-form regime branches.
    SingleSite(SingleSiteArgs),
    /// Least-squares slope of a CSV column against ln of another.
    FitSlope(FitSlopeArgs),
    /// Discrete-chain vs continuum-field correlator correspondence.
    ContinuumCheck(ContinuumCheckArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Correlations(_) => "correlations",
            Command::EntropySweep(_) => "entropy-sweep",
            Command::Modes(_) => "modes",
            Command::Scaling(_) => "scaling",
            Command::RegimeMap(_) => "regime-map",
            Command::SingleSite(_) => "single-site",
            Command::FitSlope(_) => "fit-slope",
            Command::ContinuumCheck(_) => "continuum-check",
        }
    }
}

/// Flags shared by every subcommand. All optional so that a config file can
/// supply them; resolution order is flag, then file, then built-in default.
#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Chain size N.
    #[arg(long)]
    n: Option<usize>,
    /// Coupling as the hyperbolic angle xi (z = tanh xi).
    #[arg(long, conflicts_with = "alpha")]
    xi: Option<f64>,
    /// Coupling as alpha in (0,1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Block size N_b.
    #[arg(long)]
    nb: Option<usize>,
    /// Directory for emitted files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Comma-separated list of formats: csv,json,svg.
    #[arg(long)]
    emit: Option<String>,
    /// Turning-point constant of the residual-mode model.
    #[arg(long)]
    zeta: Option<f64>,
    /// Worker threads for sweep points (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Config file with [section] key = value defaults.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CorrelationsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest separation tabulated (default N/2).
    #[arg(long)]
    l_max: Option<usize>,
}

#[derive(Args)]
struct EntropySweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Smallest xi of the sweep.
    #[arg(long)]
    xi_min: Option<f64>,
    /// Largest xi of the sweep.
    #[arg(long)]
    xi_max: Option<f64>,
    /// Number of sweep points.
    #[arg(long)]
    xi_steps: Option<usize>,
}

#[derive(Args)]
struct ModesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// First site of the block.
    #[arg(long)]
    block_start: Option<usize>,
    /// How many top modes to keep in the report.
    #[arg(long)]
    top_k: Option<usize>,
}

#[derive(Args)]
struct ScalingArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated block sizes.
    #[arg(long, value_delimiter = ',')]
    nb_list: Option<Vec<usize>>,
}

#[derive(Args)]
struct RegimeMapArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    xi_min: Option<f64>,
    #[arg(long)]
    xi_max: Option<f64>,
    #[arg(long)]
    xi_steps: Option<usize>,
    /// Comma-separated block sizes (default powers of two).
    #[arg(long, value_delimiter = ',')]
    nb_list: Option<Vec<usize>>,
}

#[derive(Args)]
struct SingleSiteArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    xi_min: Option<f64>,
    #[arg(long)]
    xi_max: Option<f64>,
    #[arg(long)]
    xi_steps: Option<usize>,
}

#[derive(Args)]
struct FitSlopeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// CSV file to fit.
    #[arg(long)]
    input: PathBuf,
    /// Column whose natural log is the abscissa (default N_b).
    #[arg(long)]
    x_col: Option<String>,
    /// Ordinate column (default total).
    #[arg(long)]
    y_col: Option<String>,
}

#[derive(Args)]
struct ContinuumCheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Field mass mu.
    #[arg(long)]
    mu: Option<f64>,
    /// Circle circumference L.
    #[arg(long)]
    len: Option<f64>,
    /// Comma-separated lattice sizes.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Correlations(a) => cmd_correlations(a),
        Command::EntropySweep(a) => cmd_entropy_sweep(a),
        Command::Modes(a) => cmd_modes(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::RegimeMap(a) => cmd_regime_map(a),
        Command::SingleSite(a) => cmd_single_site(a),
        Command::FitSlope(a) => cmd_fit_slope(a),
        Command::ContinuumCheck(a) => cmd_continuum_check(a),
    }
}

// ---------------------------------------------------------------------------
// Config file handling
// ---------------------------------------------------------------------------

/// Parsed `[section] key = value` file; lookups fall back to `[global]`.
#[derive(Default)]
pub struct FileConfig {
    sections: HashMap<String, HashMap<String, String>>,
}

impl FileConfig {
    /// Parse the flat config grammar. Lines are `key = value`, `[section]`,
    /// blank, or `#`-comments; keys may not repeat within a section.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: HashMap<String, HashMap<String, String>> = HashMap::new();
        let mut current = "global".to_string();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                current = name.trim().to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ChainError::config(format!("config line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim().to_string();
            let prev = sections
                .entry(current.clone())
                .or_default()
                .insert(key.clone(), value.trim().to_string());
            if prev.is_some() {
                return Err(ChainError::config(format!(
                    "config line {}: duplicate key '{key}' in [{current}]",
                    lineno + 1
                )));
            }
        }
        Ok(FileConfig { sections })
    }

    fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => FileConfig::parse(&fs::read_to_string(p)?),
        }
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)
            .and_then(|s| s.get(key))
            .or_else(|| self.sections.get("global").and_then(|s| s.get(key)))
            .map(String::as_str)
    }

    fn get_parsed<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                ChainError::config(format!("config [{section}] {key} = '{v}': unparseable"))
            }),
        }
    }

    fn get_list<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<Vec<T>>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<T>())
                .collect::<std::result::Result<Vec<T>, _>>()
                .map(Some)
                .map_err(|_| {
                    ChainError::config(format!("config [{section}] {key} = '{v}': unparseable list"))
                }),
        }
    }
}

/// Fully resolved common settings for one command invocation.
struct Resolved {
    section: &'static str,
    file: FileConfig,
    n: Option<usize>,
    xi: Option<f64>,
    alpha: Option<f64>,
    nb: Option<usize>,
    out_dir: PathBuf,
    emit: EmitFlags,
    zeta: f64,
    workers: Option<usize>,
}

#[derive(Clone, Copy)]
struct EmitFlags {
    csv: bool,
    json: bool,
    svg: bool,
}

impl EmitFlags {
    fn parse(s: &str) -> Result<Self> {
        let mut flags = EmitFlags { csv: false, json: false, svg: false };
        for part in s.split(',') {
            match part.trim() {
                "csv" => flags.csv = true,
                "json" => flags.json = true,
                "svg" => flags.svg = true,
                other => {
                    return Err(ChainError::config(format!(
                        "unknown emit format '{other}' (expected csv, json, svg)"
                    )))
                }
            }
        }
        Ok(flags)
    }
}

fn resolve(common: &CommonArgs, section: &'static str) -> Result<Resolved> {
    let file = FileConfig::load(common.config.as_deref())?;
    let n = match common.n {
        Some(v) => Some(v),
        None => file.get_parsed::<usize>(section, "n")?,
    };
    let xi = match common.xi {
        Some(v) => Some(v),
        None => file.get_parsed::<f64>(section, "xi")?,
    };
    let alpha = match common.alpha {
        Some(v) => Some(v),
        None => file.get_parsed::<f64>(section, "alpha")?,
    };
    if common.xi.is_some() && common.alpha.is_some() {
        return Err(ChainError::config("--xi and --alpha are mutually exclusive"));
    }
    let nb = match common.nb {
        Some(v) => Some(v),
        None => file.get_parsed::<usize>(section, "nb")?,
    };
    let out_dir = common
        .out_dir
        .clone()
        .or_else(|| file.get(section, "out-dir").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let emit_str = common
        .emit
        .clone()
        .or_else(|| file.get(section, "emit").map(str::to_string))
        .unwrap_or_else(|| "csv".to_string());
    let zeta = match common.zeta {
        Some(v) => v,
        None => file.get_parsed::<f64>(section, "zeta")?.unwrap_or(0.45),
    };
    let workers = match common.workers {
        Some(v) => Some(v),
        None => file.get_parsed::<usize>(section, "workers")?,
    };
    Ok(Resolved {
        section,
        file,
        n,
        xi,
        alpha,
        nb,
        out_dir,
        emit: EmitFlags::parse(&emit_str)?,
        zeta,
        workers,
    })
}

impl Resolved {
    /// Chain spec from xi or alpha (xi wins; default xi if neither given).
    fn spec(&self, default_n: usize, default_xi: f64) -> Result<ChainSpec> {
        let n = self.n.unwrap_or(default_n);
        match (self.xi, self.alpha) {
            (Some(_), Some(_)) => Err(ChainError::config("--xi and --alpha are mutually exclusive")),
            (Some(xi), None) => ChainSpec::from_xi(n, xi),
            (None, Some(alpha)) => ChainSpec::from_alpha(n, alpha),
            (None, None) => ChainSpec::from_xi(n, default_xi),
        }
    }

    fn extra<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.file.get_parsed::<T>(self.section, key)
    }

    fn extra_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.file.get_list::<T>(self.section, key)
    }

    /// Run `op` over items with a bounded worker pool, preserving order.
    fn parallel<I, O, F>(&self, items: Vec<I>, op: F) -> Result<Vec<O>>
    where
        I: Send,
        O: Send,
        F: Fn(I) -> Result<O> + Sync + Send,
    {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.unwrap_or(0))
            .build()
            .map_err(|e| ChainError::config(format!("worker pool: {e}")))?;
        pool.install(|| items.into_par_iter().map(op).collect())
    }
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

/// 17 significant digits: round-trips every f64 exactly.
fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn csv_document(header: &str, rows: &[Vec<String>]) -> String {
    let mut doc = String::with_capacity(rows.len() * 64 + header.len() + 1);
    doc.push_str(header);
    doc.push('\n');
    for row in rows {
        doc.push_str(&row.join(","));
        doc.push('\n');
    }
    doc
}

// ---------------------------------------------------------------------------
// Minimal SVG plotting (hand-rolled, deterministic)
// ---------------------------------------------------------------------------

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 420.0;
const MARGIN: f64 = 56.0;
const SERIES_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Line plot of one or more (label, points) series on linear axes.
fn svg_line_plot(title: &str, x_label: &str, y_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (_, pts) in series {
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() {
                xs.push(x);
                ys.push(y);
            }
        }
    }
    let (x_lo, x_hi) = padded_range(&xs);
    let (y_lo, y_hi) = padded_range(&ys);
    let to_px = |x: f64, y: f64| {
        let px = MARGIN + (x - x_lo) / (x_hi - x_lo) * (SVG_W - 2.0 * MARGIN);
        let py = SVG_H - MARGIN - (y - y_lo) / (y_hi - y_lo) * (SVG_H - 2.0 * MARGIN);
        (px, py)
    };

    let mut svg = svg_header(title, x_label, y_label, x_lo, x_hi, y_lo, y_hi);
    for (k, (label, pts)) in series.iter().enumerate() {
        let color = SERIES_COLORS[k % SERIES_COLORS.len()];
        let mut path = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let (px, py) = to_px(x, y);
            let _ = write!(path, "{}{px:.2},{py:.2} ", if i == 0 { "" } else { " " });
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" fill="{color}">{label}</text>"#,
            SVG_W - MARGIN - 120.0,
            MARGIN + 16.0 * (k as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Grayscale heatmap over a rectangular grid plus one overlay curve.
fn svg_heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    x_vals: &[f64],
    y_vals: &[f64],
    cell: impl Fn(usize, usize) -> f64,
    overlay: &[(f64, f64)],
) -> String {
    let (x_lo, x_hi) = padded_range(x_vals);
    let (y_lo, y_hi) = padded_range(y_vals);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..x_vals.len() {
        for j in 0..y_vals.len() {
            let v = cell(i, j);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let to_px = |x: f64, y: f64| {
        let px = MARGIN + (x - x_lo) / (x_hi - x_lo) * (SVG_W - 2.0 * MARGIN);
        let py = SVG_H - MARGIN - (y - y_lo) / (y_hi - y_lo) * (SVG_H - 2.0 * MARGIN);
        (px, py)
    };
    let mut svg = svg_header(title, x_label, y_label, x_lo, x_hi, y_lo, y_hi);
    let cw = (SVG_W - 2.0 * MARGIN) / x_vals.len() as f64;
    let ch = (SVG_H - 2.0 * MARGIN) / y_vals.len() as f64;
    for (i, &x) in x_vals.iter().enumerate() {
        for (j, &y) in y_vals.iter().enumerate() {
            let t = (cell(i, j) - lo) / span;
            let shade = (255.0 * (1.0 - t)).round() as u8;
            let (px, py) = to_px(x, y);
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{cw:.2}" height="{ch:.2}" fill="rgb({shade},{shade},255)"/>"#,
                px - 0.5 * cw,
                py - 0.5 * ch
            );
        }
    }
    let mut path = String::new();
    for &(x, y) in overlay {
        if x < x_lo || x > x_hi || y < y_lo || y > y_hi {
            continue;
        }
        let (px, py) = to_px(x, y);
        let _ = write!(path, "{px:.2},{py:.2} ");
    }
    if !path.is_empty() {
        let _ = writeln!(
            svg,
            r##"<polyline fill="none" stroke="#000" stroke-width="1.5" stroke-dasharray="4 3" points="{path}"/>"##
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn padded_range(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    let pad = (hi - lo).max(1e-12) * 0.05;
    (lo - pad, hi + pad)
}

fn svg_header(title: &str, x_label: &str, y_label: &str, x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-size="14" text-anchor="middle">{title}</text>"#,
        SVG_W / 2.0
    );
    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = SVG_H - MARGIN,
        r = SVG_W - MARGIN,
        t = MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{x_label}</text>"#,
        SVG_W / 2.0,
        SVG_H - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{y_label}</text>"#,
        SVG_H / 2.0,
        SVG_H / 2.0
    );
    // Corner tick labels.
    let _ = writeln!(
        svg,
        r#"<text x="{m}" y="{by}" font-size="10">{x_lo:.3}</text><text x="{rx}" y="{by}" font-size="10" text-anchor="end">{x_hi:.3}</text>"#,
        m = MARGIN,
        by = SVG_H - MARGIN + 14.0,
        rx = SVG_W - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{lx}" y="{b}" font-size="10" text-anchor="end">{y_lo:.3}</text><text x="{lx}" y="{t}" font-size="10" text-anchor="end">{y_hi:.3}</text>"#,
        lx = MARGIN - 6.0,
        b = SVG_H - MARGIN,
        t = MARGIN + 10.0
    );
    svg
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_correlations(args: &CorrelationsArgs) -> Result<()> {
    let r = resolve(&args.common, "correlations")?;
    let spec = r.spec(256, 3.0)?;
    let l_max = match args.l_max {
        Some(v) => v,
        None => r.extra::<usize>("l-max")?.unwrap_or(spec.n / 2),
    };
    if l_max > spec.n / 2 {
        return Err(ChainError::config(format!(
            "l_max = {l_max} exceeds N/2 = {}",
            spec.n / 2
        )));
    }
    let table = build_correlations(&spec);
    let mut rows = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        rows.push(vec![
            l.to_string(),
            fmt_real(table.g(l)),
            fmt_real(table.h(l)),
            fmt_real(g_infinite(l, &spec)?),
            fmt_real(h_infinite(l, &spec)?),
        ]);
    }
    let doc = csv_document("l,g_N,h_N,g_inf,h_inf", &rows);
    if r.emit.csv {
        write_file(&r.out_dir, &format!("correlations_n{}_xi{}.csv", spec.n, spec.xi), &doc)?;
    }
    if r.emit.svg {
        let pts_g: Vec<(f64, f64)> = (0..=l_max).map(|l| (l as f64, table.g(l))).collect();
        let pts_h: Vec<(f64, f64)> = (0..=l_max).map(|l| (l as f64, table.h(l))).collect();
        let svg = svg_line_plot(
            &format!("Correlators, N={}, xi={}", spec.n, spec.xi),
            "separation l",
            "correlator",
            &[("g_l".to_string(), pts_g), ("h_l".to_string(), pts_h)],
        );
        write_file(&r.out_dir, &format!("correlations_n{}_xi{}.svg", spec.n, spec.xi), &svg)?;
    }
    Ok(())
}

fn cmd_entropy_sweep(args: &EntropySweepArgs) -> Result<()> {
    let r = resolve(&args.common, "entropy-sweep")?;
    let n = r.n.unwrap_or(2048);
    let nb = r.nb.unwrap_or(64);
    let xi_min = args.xi_min.or(r.extra("xi-min")?).unwrap_or(0.1);
    let xi_max = args.xi_max.or(r.extra("xi-max")?).unwrap_or(12.0);
    let steps = args.xi_steps.or(r.extra("xi-steps")?).unwrap_or(40);
    if steps < 2 || xi_max <= xi_min {
        return Err(ChainError::config("need xi_max > xi_min and at least 2 steps"));
    }
    let xis: Vec<f64> = (0..steps)
        .map(|i| xi_min + (xi_max - xi_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let results = r.parallel(xis.clone(), |xi| {
        let spec = ChainSpec::from_xi(n, xi)?;
        let table = build_correlations(&spec);
        let report = analyze_block(&table, &BlockPartition::new(n, 0, nb)?)?;
        Ok((xi, report))
    })?;
    let mut rows = Vec::new();
    for (xi, report) in &results {
        let mut row = vec![fmt_real(*xi), nb.to_string(), fmt_real(report.total)];
        for m in 0..4 {
            row.push(fmt_real(report.modes.get(m).map_or(0.0, |x| x.entropy)));
        }
        row.push(report.regime.to_string());
        rows.push(row);
    }
    let doc = csv_document("xi,N_b,total,E_mode1,E_mode2,E_mode3,E_mode4,regime", &rows);
    if r.emit.csv {
        write_file(&r.out_dir, &format!("entropy_sweep_n{n}_nb{nb}.csv"), &doc)?;
    }
    if r.emit.svg {
        let total: Vec<(f64, f64)> = results.iter().map(|(xi, rep)| (*xi, rep.total)).collect();
        let series: Vec<(String, Vec<(f64, f64)>)> = std::iter::once(("total".to_string(), total))
            .chain((0..4).map(|m| {
                (
                    format!("mode {}", m + 1),
                    results
                        .iter()
                        .map(|(xi, rep)| (*xi, rep.modes.get(m).map_or(0.0, |x| x.entropy)))
                        .collect(),
                )
            }))
            .collect();
        let svg = svg_line_plot(
            &format!("Block entanglement vs coupling, N={n}, N_b={nb}"),
            "xi",
            "entanglement",
            &series,
        );
        write_file(&r.out_dir, &format!("entropy_sweep_n{n}_nb{nb}.svg"), &svg)?;
    }
    Ok(())
}

fn cmd_modes(args: &ModesArgs) -> Result<()> {
    let r = resolve(&args.common, "modes")?;
    let spec = r.spec(256, 3.0)?;
    let nb = r.nb.unwrap_or(32);
    let start = match args.block_start {
        Some(v) => v,
        None => r.extra::<usize>("block-start")?.unwrap_or(0),
    };
    let top_k = match args.top_k {
        Some(v) => v,
        None => r.extra::<usize>("top-k")?.unwrap_or(8),
    };
    let table = build_correlations(&spec);
    let mut report = analyze_block(&table, &BlockPartition::new(spec.n, start, nb)?)?;
    report.modes.truncate(top_k);
    let stem = format!("modes_n{}_xi{}_nb{nb}", spec.n, spec.xi);
    if r.emit.json || !(r.emit.csv || r.emit.svg) {
        let json = serde_json::to_string_pretty(&report)?;
        write_file(&r.out_dir, &format!("{stem}.json"), &json)?;
    }
    if r.emit.svg {
        let series: Vec<(String, Vec<(f64, f64)>)> = report
            .modes
            .iter()
            .take(4)
            .enumerate()
            .map(|(m, mode)| {
                (
                    format!("mode {} (parity {:+})", m + 1, mode.parity),
                    mode.participation_a
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| (i as f64, p))
                        .collect(),
                )
            })
            .collect();
        let svg = svg_line_plot(
            &format!("Participation profiles, N={}, xi={}, N_b={nb}", spec.n, spec.xi),
            "block site",
            "participation",
            &series,
        );
        write_file(&r.out_dir, &format!("{stem}.svg"), &svg)?;
    }
    Ok(())
}

/// Scaled per-mode entanglement at strong coupling, computed in
/// multiprecision because ln E_m reaches hundreds of digits below zero.
fn cmd_scaling(args: &ScalingArgs) -> Result<()> {
    let r = resolve(&args.common, "scaling")?;
    let n = r.n.unwrap_or(1024);
    let xi = r.xi.unwrap_or(10.0);
    let nb_list = match &args.nb_list {
        Some(v) => v.clone(),
        None => r.extra_list::<usize>("nb-list")?.unwrap_or_else(|| vec![16, 32, 64]),
    };
    let zeta = r.zeta;
    let results = r.parallel(nb_list.clone(), move |nb| {
        let prec = (16 * nb + 256) as u32;
        let chain = precise::HpChain::build(n, xi, prec)?;
        let modes = precise::block_spectrum(&chain, 0, nb)?;
        let model = ResidualModel::new(zeta, nb)?;
        let mut rows = Vec::new();
        for m in 2..=nb {
            let lambda = &modes[m - 1].lambda;
            let ln_e_over_nb = precise::ln_entropy(lambda) / nb as f64;
            let predicted = analytics::quantize_residual(m, &model)?;
            rows.push(vec![
                nb.to_string(),
                m.to_string(),
                fmt_real(m as f64 / nb as f64),
                fmt_real(ln_e_over_nb),
                fmt_real(predicted.f),
            ]);
        }
        Ok(rows)
    })?;
    let rows: Vec<Vec<String>> = results.into_iter().flatten().collect();
    let doc = csv_document("N_b,m,m_over_N_b,ln_E_over_N_b,f_predicted", &rows);
    if r.emit.csv {
        write_file(&r.out_dir, &format!("scaling_n{n}_xi{xi}.csv"), &doc)?;
    }
    if r.emit.svg {
        let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
        for &nb in &nb_list {
            let pts = rows
                .iter()
                .filter(|row| row[0] == nb.to_string())
                .map(|row| (row[2].parse().unwrap(), row[3].parse().unwrap()))
                .collect();
            series.push((format!("N_b = {nb}"), pts));
        }
        let prediction: Vec<(f64, f64)> = rows
            .iter()
            .map(|row| {
                let f: f64 = row[4].parse().unwrap();
                (row[2].parse().unwrap(), -0.5 * std::f64::consts::PI.powi(2) * f)
            })
            .collect();
        series.push(("quantization model".to_string(), prediction));
        let svg = svg_line_plot(
            &format!("Residual-mode scaling collapse, xi={xi}"),
            "m / N_b",
            "ln E_m / N_b",
            &series,
        );
        write_file(&r.out_dir, &format!("scaling_n{n}_xi{xi}.svg"), &svg)?;
    }
    Ok(())
}

fn cmd_regime_map(args: &RegimeMapArgs) -> Result<()> {
    let r = resolve(&args.common, "regime-map")?;
    let n = r.n.unwrap_or(1024);
    let xi_min = args.xi_min.or(r.extra("xi-min")?).unwrap_or(0.5);
    let xi_max = args.xi_max.or(r.extra("xi-max")?).unwrap_or(12.0);
    let steps = args.xi_steps.or(r.extra("xi-steps")?).unwrap_or(16);
    let nb_list = match &args.nb_list {
        Some(v) => v.clone(),
        None => r
            .extra_list::<usize>("nb-list")?
            .unwrap_or_else(|| vec![2, 4, 8, 16, 32, 64, 128, 256]),
    };
    if steps < 2 || xi_max <= xi_min || nb_list.is_empty() {
        return Err(ChainError::config("regime-map grid is empty or degenerate"));
    }
    let xis: Vec<f64> = (0..steps)
        .map(|i| xi_min + (xi_max - xi_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let nb_for_rows = nb_list.clone();
    let results = r.parallel(xis.clone(), move |xi| {
        let spec = ChainSpec::from_xi(n, xi)?;
        let table = build_correlations(&spec);
        let mut totals = Vec::with_capacity(nb_for_rows.len());
        for &nb in &nb_for_rows {
            let report = analyze_block(&table, &BlockPartition::new(n, 0, nb)?)?;
            totals.push(report.total);
        }
        Ok((xi, totals))
    })?;
    let mut rows = Vec::new();
    for (xi, totals) in &results {
        for (k, &nb) in nb_list.iter().enumerate() {
            rows.push(vec![fmt_real(*xi), nb.to_string(), fmt_real(totals[k])]);
        }
    }
    let doc = csv_document("xi,N_b,total", &rows);
    if r.emit.csv {
        write_file(&r.out_dir, &format!("regime_map_n{n}.csv"), &doc)?;
    }
    if r.emit.svg {
        let nb_logs: Vec<f64> = nb_list.iter().map(|&v| (v as f64).ln()).collect();
        // Correlation-length line l_c(xi) = N_b, in (xi, ln N_b) coordinates.
        let overlay: Vec<(f64, f64)> = xis
            .iter()
            .filter_map(|&xi| {
                let spec = ChainSpec::from_xi(n, xi).ok()?;
                let l_c = spec.regime_scales().l_c;
                Some((xi, l_c.ln()))
            })
            .collect();
        let svg = svg_heatmap(
            &format!("Total entanglement over (xi, N_b), N={n}; dashed: l_c = N_b"),
            "xi",
            "ln N_b",
            &xis,
            &nb_logs,
            |i, j| results[i].1[j],
            &overlay,
        );
        write_file(&r.out_dir, &format!("regime_map_n{n}.svg"), &svg)?;
    }
    Ok(())
}

fn cmd_single_site(args: &SingleSiteArgs) -> Result<()> {
    let r = resolve(&args.common, "single-site")?;
    let n = r.n.unwrap_or(10_000);
    let xi_min = args.xi_min.or(r.extra("xi-min")?).unwrap_or(0.1);
    let xi_max = args.xi_max.or(r.extra("xi-max")?).unwrap_or(12.0);
    let steps = args.xi_steps.or(r.extra("xi-steps")?).unwrap_or(60);
    if steps < 2 || xi_max <= xi_min {
        return Err(ChainError::config("need xi_max > xi_min and at least 2 steps"));
    }
    let xis: Vec<f64> = (0..steps)
        .map(|i| xi_min + (xi_max - xi_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let results = r.parallel(xis, move |xi| {
        let spec = ChainSpec::from_xi(n, xi)?;
        let (g0, h0) = correlation_at(&spec, 0);
        let lambda = (g0 * h0).sqrt();
        let regime = spec.regime();
        Ok(vec![
            fmt_real(xi),
            n.to_string(),
            fmt_real(lambda),
            fmt_real(analytics::single_osc_lambda(&spec, regime)),
            fmt_real(entropy_of_lambda(lambda)?),
            fmt_real(analytics::single_osc_entropy_branch(&spec, regime)),
            regime.to_string(),
        ])
    })?;
    let doc = csv_document(
        "xi,N,lambda_numeric,lambda_analytic,entropy_numeric,entropy_analytic,regime",
        &results,
    );
    if r.emit.csv {
        write_file(&r.out_dir, &format!("single_site_n{n}.csv"), &doc)?;
    }
    if r.emit.svg {
        let num: Vec<(f64, f64)> = results
            .iter()
            .map(|row| (row[0].parse().unwrap(), row[4].parse().unwrap()))
            .collect();
        let ana: Vec<(f64, f64)> = results
            .iter()
            .map(|row| (row[0].parse().unwrap(), row[5].parse().unwrap()))
            .collect();
        let svg = svg_line_plot(
            &format!("Single-site entanglement, N={n}"),
            "xi",
            "entropy",
            &[("numeric".to_string(), num), ("regime formula".to_string(), ana)],
        );
        write_file(&r.out_dir, &format!("single_site_n{n}.svg"), &svg)?;
    }
    Ok(())
}

fn cmd_fit_slope(args: &FitSlopeArgs) -> Result<()> {
    let r = resolve(&args.common, "fit-slope")?;
    let x_col = args
        .x_col
        .clone()
        .or_else(|| r.file.get("fit-slope", "x-col").map(str::to_string))
        .unwrap_or_else(|| "N_b".to_string());
    let y_col = args
        .y_col
        .clone()
        .or_else(|| r.file.get("fit-slope", "y-col").map(str::to_string))
        .unwrap_or_else(|| "total".to_string());
    let fit = fit_slope_from_csv(&args.input, &x_col, &y_col)?;
    let json = serde_json::to_string_pretty(&fit)?;
    println!("{json}");
    Ok(())
}

/// Fit `y = slope * ln(x) + intercept` over two named CSV columns.
pub fn fit_slope_from_csv(path: &Path, x_col: &str, y_col: &str) -> Result<FitResult> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| ChainError::config(format!("{}: empty file", path.display())))?;
    let cols: Vec<&str> = header.split(',').collect();
    let find = |name: &str| {
        cols.iter()
            .position(|c| c.trim() == name)
            .ok_or_else(|| ChainError::config(format!("column '{name}' not found in {header}")))
    };
    let xi = find(x_col)?;
    let yi = find(y_col)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() <= xi.max(yi) {
            return Err(ChainError::config(format!("short row in {}", path.display())));
        }
        let x: f64 = fields[xi]
            .trim()
            .parse()
            .map_err(|_| ChainError::config(format!("bad value '{}' in {x_col}", fields[xi])))?;
        let y: f64 = fields[yi]
            .trim()
            .parse()
            .map_err(|_| ChainError::config(format!("bad value '{}' in {y_col}", fields[yi])))?;
        if x <= 0.0 {
            return Err(ChainError::config(format!("{x_col} = {x} has no logarithm")));
        }
        xs.push(x.ln());
        ys.push(y);
    }
    fit_line(&xs, &ys)
}

fn cmd_continuum_check(args: &ContinuumCheckArgs) -> Result<()> {
    let r = resolve(&args.common, "continuum-check")?;
    let mu = args.mu.or(r.extra("mu")?).unwrap_or(1.0);
    let len = args.len.or(r.extra("len")?).unwrap_or(10.0);
    let n_list = match &args.n_list {
        Some(v) => v.clone(),
        None => r.extra_list::<usize>("n-list")?.unwrap_or_else(|| vec![256, 512, 1024]),
    };
    let n_min = *n_list.iter().min().unwrap_or(&256);
    // Grid-aligned abscissas on the coarsest lattice, covering mu|x| in
    // [0.3, 3] so every finer lattice hits the same x exactly.
    let coarse_dx = len / n_min as f64;
    let sep_lo = (0.3 / mu / coarse_dx).ceil() as usize;
    let sep_hi = (3.0 / mu / coarse_dx).floor() as usize;
    if sep_lo >= sep_hi {
        return Err(ChainError::config("no grid-aligned separations in mu|x| range [0.3, 3]"));
    }
    let n_seps = 6usize.min(sep_hi - sep_lo);
    let mut rows = Vec::new();
    for k in 0..=n_seps {
        let sep = sep_lo + k * (sep_hi - sep_lo) / n_seps.max(1);
        let x = sep as f64 * coarse_dx;
        for &n in &n_list {
            let cont = ContinuumSpec::new(mu, len, n)?;
            let row = correspondence_check(&cont, x)?;
            rows.push(vec![
                fmt_real(row.x),
                row.n.to_string(),
                fmt_real(row.g_discrete),
                fmt_real(row.g_cont),
                fmt_real(row.rel_err),
                fmt_real(row.h_discrete),
                fmt_real(row.h_cont),
                fmt_real(row.rel_err_h),
            ]);
        }
    }
    let doc = csv_document("x,N,g_discrete,g_cont,rel_err,h_discrete,h_cont,rel_err_h", &rows);
    if r.emit.csv {
        write_file(&r.out_dir, &format!("continuum_check_mu{mu}_L{len}.csv"), &doc)?;
    }
    if r.emit.svg {
        let series: Vec<(String, Vec<(f64, f64)>)> = n_list
            .iter()
            .map(|&n| {
                (
                    format!("N = {n}"),
                    rows.iter()
                        .filter(|row| row[1] == n.to_string())
                        .map(|row| (row[0].parse().unwrap(), row[4].parse().unwrap()))
                        .collect(),
                )
            })
            .collect();
        let svg = svg_line_plot(
            &format!("Discrete vs continuum correlator error, mu={mu}, L={len}"),
            "x",
            "relative error in g",
            &series,
        );
        write_file(&r.out_dir, &format!("continuum_check_mu{mu}_L{len}.svg"), &svg)?;
    }
    Ok(())
}

// Re-export the report type for doc visibility from the CLI path.
pub use crate::entanglement::EntanglementReport as ModeReport;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_grammar() {
        let cfg = FileConfig::parse(
            "# comment\n[global]\nout-dir = runs\n\n[modes]\nnb = 16\ntop-k = 3\n",
        )
        .unwrap();
        assert_eq!(cfg.get("modes", "nb"), Some("16"));
        assert_eq!(cfg.get("modes", "top-k"), Some("3"));
        // Fallback to [global].
        assert_eq!(cfg.get("modes", "out-dir"), Some("runs"));
        assert_eq!(cfg.get("scaling", "nb"), None);
        assert!(FileConfig::parse("just words\n").is_err());
        assert!(FileConfig::parse("[s]\nk = 1\nk = 2\n").is_err());
    }

    #[test]
    fn emit_flags() {
        let e = EmitFlags::parse("csv,svg").unwrap();
        assert!(e.csv && e.svg && !e.json);
        assert!(EmitFlags::parse("csv,png").is_err());
    }

    #[test]
    fn real_formatting_has_17_digits_and_round_trips() {
        for &v in &[1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            let s = fmt_real(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
            assert!(mantissa.len() >= 17);
        }
    }

    #[test]
    fn cli_parses_known_commands() {
        let cli = Cli::try_parse_from([
            "harmonic-chain",
            "correlations",
            "--n",
            "64",
            "--xi",
            "1.5",
            "--l-max",
            "10",
        ])
        .unwrap();
        assert_eq!(cli.command.name(), "correlations");
        // --xi and --alpha conflict.
        assert!(Cli::try_parse_from([
            "harmonic-chain",
            "correlations",
            "--xi",
            "1.0",
            "--alpha",
            "0.5"
        ])
        .is_err());
    }
}
