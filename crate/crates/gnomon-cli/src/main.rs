//! `gnomon` — command-line front end for the cubed-sphere grid-metric and
//! damping-stability library.
//!
//! Subcommands emit metric fields, stability-limit tables, amplification
//! curves, 2Δx amplification fields, and empirical bisection thresholds as
//! CSV/JSON. Exit codes: 0 success, 1 validation error, 2 runtime error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gnomon::grid::{
    grid_summary, metric_field, CellMetrics, GridSpec, MappingKind, MetricField,
    PanelGrid, PanelLocation, Staggering,
};
use gnomon::sim::{checkerboard, empirical_threshold, noise_field, PatchConfig};
use gnomon::sphere::{cart_to_lonlat, EARTH_RADIUS_M};
use gnomon::stability::{
    diagonal_sweep, grid_stability_function, max_stable_coefficient, mixed_order_limit,
    oscillation_free_coefficient, psi_min, round_down_3dp, stability_field, two_dx_field,
    DampingSpec, OperatorKind,
};
use serde_json::{json, Value};

// ---------------------------------------------------------------------------
// Argument parsing

fn parse_mapping(s: &str) -> Result<MappingKind, String> {
    MappingKind::parse(s)
        .map_err(|_| format!("unknown mapping '{s}' (valid: equidistant, equiangular, equi-edge)"))
}

fn parse_stagger(s: &str) -> Result<Staggering, String> {
    Staggering::parse(s).map_err(|_| format!("unknown staggering '{s}' (valid: primary, offset)"))
}

fn parse_operator(s: &str) -> Result<OperatorKind, String> {
    OperatorKind::parse(s).ok_or_else(|| format!("unknown operator '{s}' (valid: pseudo, full)"))
}

/// Accepts a plain integer or a "C96"-style resolution name.
fn parse_ne(s: &str) -> Result<usize, String> {
    let digits = s.strip_prefix(['c', 'C']).unwrap_or(s);
    let ne: usize = digits
        .parse()
        .map_err(|_| format!("invalid resolution '{s}' (expected an integer or e.g. 'C96')"))?;
    if ne < 2 {
        return Err(format!("resolution must be at least 2, got {ne}"));
    }
    Ok(ne)
}

#[derive(Clone, Copy, Debug)]
enum Coef {
    /// Resolve C₊ = Ψ_min/4 from the grid.
    OscFree,
    Value(f64),
}

fn parse_coef(s: &str) -> Result<Coef, String> {
    if s.eq_ignore_ascii_case("osc-free") {
        return Ok(Coef::OscFree);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("invalid coefficient '{s}' (expected a number or 'osc-free')"))?;
    if !v.is_finite() || v < 0.0 {
        return Err(format!("coefficient must be finite and nonnegative, got {v}"));
    }
    Ok(Coef::Value(v))
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum LocationArg {
    Argmin,
    Corner,
    MidEdge,
}

fn parse_location(s: &str) -> Result<LocationArg, String> {
    match s {
        "argmin" => Ok(LocationArg::Argmin),
        "corner" => Ok(LocationArg::Corner),
        "mid-edge" => Ok(LocationArg::MidEdge),
        _ => Err(format!(
            "unknown location '{s}' (valid: argmin, corner, mid-edge)"
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum OutFormat {
    Csv,
    Json,
}

fn parse_format(s: &str) -> Result<OutFormat, String> {
    match s {
        "csv" => Ok(OutFormat::Csv),
        "json" => Ok(OutFormat::Json),
        _ => Err(format!("unknown format '{s}' (valid: csv, json)")),
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Gnomonic mapping: equidistant, equiangular, or equi-edge
    #[arg(long, value_parser = parse_mapping)]
    mapping: MappingKind,
    /// Panel resolution: an integer edge-cell count or a "C96"-style name
    #[arg(long, value_parser = parse_ne)]
    ne: usize,
    /// Grid staggering: primary (cell centres) or offset (cell vertices)
    #[arg(long, default_value = "offset", value_parser = parse_stagger)]
    stagger: Staggering,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Output path (written atomically); stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Payload format
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutFormat,
}

#[derive(Parser, Debug)]
#[command(
    name = "gnomon",
    version,
    about = "Cubed-sphere grid metrics and divergence/vorticity damping stability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-point grid metrics (CSV) plus a derived-quantity summary (JSON)
    GridMetrics {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ψ_min, per-order stability limits, and the oscillation-free coefficient
    Limits {
        #[command(flatten)]
        grid: GridArgs,
        /// Damping operator: pseudo or full Laplacian
        #[arg(long, default_value = "pseudo", value_parser = parse_operator)]
        operator: OperatorKind,
        /// Laplacian coefficient C₂ for mixed-order bounds
        #[arg(long)]
        coef2: Option<f64>,
        /// Output path (written atomically); stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Γ along the diagonal slice kΔx = lΔy at one cell's metrics
    Amplification {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "pseudo", value_parser = parse_operator)]
        operator: OperatorKind,
        /// Damping order exponent q (operator order is 2q)
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Nondimensional coefficient C, or "osc-free" for C₊ = Ψ_min/4
        #[arg(long, default_value = "osc-free", value_parser = parse_coef)]
        coef: Coef,
        /// Cell whose metrics are frozen: argmin, corner, or mid-edge
        #[arg(long, default_value = "argmin", value_parser = parse_location)]
        location: LocationArg,
        /// Number of evenly spaced samples on kΔx ∈ [0, π]
        #[arg(long, default_value_t = 65)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Per-point Γ(π, π) field over every panel
    TwoDxField {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "pseudo", value_parser = parse_operator)]
        operator: OperatorKind,
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Nondimensional coefficient C, or "osc-free" for C₊ = Ψ_min/4
        #[arg(long, default_value = "osc-free", value_parser = parse_coef)]
        coef: Coef,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Bisect the empirical stability threshold at one cell's frozen metrics
    EmpiricalLimit {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "pseudo", value_parser = parse_operator)]
        operator: OperatorKind,
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Cell whose metrics are frozen: argmin, corner, or mid-edge
        #[arg(long, default_value = "argmin", value_parser = parse_location)]
        location: LocationArg,
        /// Absolute bisection tolerance on the coefficient
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Seed for the initial noise field
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path (written atomically); stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

// ---------------------------------------------------------------------------
// Error plumbing: validation → exit 1, runtime → exit 2.

#[derive(Debug)]
enum CliError {
    Validation(String),
    Runtime(String),
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn runtime(msg: impl std::fmt::Display) -> CliError {
    CliError::Runtime(msg.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::GridMetrics { grid, out } => cmd_grid_metrics(grid, out),
        Command::Limits { grid, operator, coef2, out } => cmd_limits(grid, operator, coef2, out),
        Command::Amplification { grid, operator, order, coef, location, samples, out } => {
            cmd_amplification(grid, operator, order, coef, location, samples, out)
        }
        Command::TwoDxField { grid, operator, order, coef, out } => {
            cmd_two_dx_field(grid, operator, order, coef, out)
        }
        Command::EmpiricalLimit { grid, operator, order, location, tol, seed, out } => {
            cmd_empirical_limit(grid, operator, order, location, tol, seed, out)
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers

struct Built {
    grid: PanelGrid,
    mf: MetricField,
    stagger: Staggering,
    mapping: MappingKind,
    ne: usize,
}

fn build(args: &GridArgs) -> Result<Built, CliError> {
    let spec = GridSpec::new(args.mapping, args.ne, EARTH_RADIUS_M)
        .map_err(|e| validation(e.to_string()))?;
    let grid = PanelGrid::build(spec);
    let mf = metric_field(&grid, args.stagger).map_err(runtime)?;
    Ok(Built { grid, mf, stagger: args.stagger, mapping: args.mapping, ne: args.ne })
}

fn config_echo(subcommand: &str, b: &Built, extra: Value) -> Value {
    let mut cfg = json!({
        "tool": "gnomon",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "mapping": b.mapping.name(),
        "ne": b.ne,
        "stagger": b.stagger.name(),
        "radius_m": EARTH_RADIUS_M,
    });
    if let (Some(map), Some(ext)) = (cfg.as_object_mut(), extra.as_object()) {
        for (k, v) in ext {
            map.insert(k.clone(), v.clone());
        }
    }
    cfg
}

/// Write bytes to `out` via a temp file + rename, or to stdout when `None`.
fn write_atomic(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        None => std::io::stdout().write_all(bytes).map_err(runtime),
        Some(path) => {
            let dir = path
                .parent()
                .filter(|d| !d.as_os_str().is_empty())
                .unwrap_or_else(|| Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| runtime(format!("cannot create temp file in {dir:?}: {e}")))?;
            tmp.write_all(bytes).map_err(runtime)?;
            tmp.persist(path)
                .map_err(|e| runtime(format!("cannot write {path:?}: {e}")))?;
            Ok(())
        }
    }
}

fn to_pretty(doc: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

/// The grid point a metric row describes: cell centre (primary) or vertex
/// (offset).
fn point_lonlat_deg(b: &Built, panel: usize, i: usize, j: usize) -> Result<(f64, f64), CliError> {
    let p = match b.stagger {
        Staggering::Primary => b.grid.center(panel, i, j),
        Staggering::Offset => b.grid.vertex(panel, i, j),
    };
    let ll = cart_to_lonlat(p).map_err(runtime)?;
    Ok((ll.lon.to_degrees(), ll.lat.to_degrees()))
}

fn metric_row_values(
    b: &Built,
    panel: usize,
    i: usize,
    j: usize,
    m: &CellMetrics,
) -> Result<[f64; 7], CliError> {
    let (lon, lat) = point_lonlat_deg(b, panel, i, j)?;
    Ok([lon, lat, m.dx, m.dy, m.chi(), m.sin_alpha(), m.darea])
}

/// Resolve a named sample location to concrete (panel, i, j) indices.
fn resolve_location(
    b: &Built,
    operator: OperatorKind,
    loc: LocationArg,
) -> Result<(usize, usize, usize), CliError> {
    match loc {
        LocationArg::Corner => Ok((0, 0, 0)),
        LocationArg::MidEdge => {
            if b.stagger == Staggering::Primary {
                return Err(validation(
                    "location mid-edge requires --stagger offset (the mid-edge point sits on the vertex lattice)",
                ));
            }
            Ok((0, b.ne / 2, 0))
        }
        LocationArg::Argmin => {
            let field = stability_field(&b.mf, operator);
            Ok(field.argmin)
        }
    }
}

fn location_name(loc: LocationArg) -> &'static str {
    match loc {
        LocationArg::Argmin => "argmin",
        LocationArg::Corner => "corner",
        LocationArg::MidEdge => "mid-edge",
    }
}

fn coef_echo(coef: Coef) -> Value {
    match coef {
        Coef::OscFree => json!("osc-free"),
        Coef::Value(v) => json!(v),
    }
}

// ---------------------------------------------------------------------------
// Subcommands

const METRIC_HEADER: [&str; 10] = [
    "panel_id", "i", "j", "lon_deg", "lat_deg", "dx_m", "dy_m", "chi", "sin_alpha", "area_m2",
];

fn cmd_grid_metrics(grid_args: GridArgs, out: OutArgs) -> Result<(), CliError> {
    let b = build(&grid_args)?;
    let s = grid_summary(&b.grid).map_err(runtime)?;
    let cfg = config_echo("grid-metrics", &b, json!({ "format": format_name(out.format) }));
    let summary = json!({
        "max_area_m2": s.max_area,
        "min_area_m2": s.min_area,
        "max_area_loc": s.max_area_loc,
        "min_area_loc": s.min_area_loc,
        "min_area_position": s.min_area_position.name(),
        "area_ratio": s.area_ratio,
        "chi_mid_edge": s.chi_mid_edge,
        "sin_alpha_mid_edge": s.sin_alpha_mid_edge,
        "chi_corner": s.chi_corner,
        "sin_alpha_corner": s.sin_alpha_corner,
    });
    match out.format {
        OutFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(METRIC_HEADER).map_err(runtime)?;
            for (p, i, j, m) in b.mf.iter() {
                let v = metric_row_values(&b, p, i, j, m)?;
                let mut rec = vec![p.to_string(), i.to_string(), j.to_string()];
                rec.extend(v.iter().map(|x| x.to_string()));
                wtr.write_record(&rec).map_err(runtime)?;
            }
            let bytes = wtr.into_inner().map_err(runtime)?;
            write_atomic(out.out.as_deref(), &bytes)?;
            // summary goes to stdout so the payload file stays pure CSV
            let doc = json!({ "config": cfg, "summary": summary });
            if out.out.is_some() {
                std::io::stdout().write_all(&to_pretty(&doc)).map_err(runtime)?;
            }
            Ok(())
        }
        OutFormat::Json => {
            let mut rows = Vec::new();
            for (p, i, j, m) in b.mf.iter() {
                let v = metric_row_values(&b, p, i, j, m)?;
                rows.push(json!({
                    "panel_id": p, "i": i, "j": j,
                    "lon_deg": v[0], "lat_deg": v[1],
                    "dx_m": v[2], "dy_m": v[3],
                    "chi": v[4], "sin_alpha": v[5], "area_m2": v[6],
                }));
            }
            let doc = json!({ "config": cfg, "summary": summary, "rows": rows });
            write_atomic(out.out.as_deref(), &to_pretty(&doc))
        }
    }
}

fn cmd_limits(
    grid_args: GridArgs,
    operator: OperatorKind,
    coef2: Option<f64>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if let Some(c2) = coef2 {
        if !c2.is_finite() || c2 < 0.0 {
            return Err(validation(format!(
                "coef2 must be finite and nonnegative, got {c2}"
            )));
        }
    }
    let b = build(&grid_args)?;
    let field = stability_field(&b.mf, operator);
    let (pmin, argmin) = psi_min(&field);
    let n = b.stagger.side(b.ne);
    let orders: Vec<Value> = (1..=4u32)
        .map(|q| {
            let limit = max_stable_coefficient(pmin, q);
            let mut entry = json!({
                "q": q,
                "order": 2 * q,
                "max_stable_coef": limit,
                "max_stable_coef_3dp": round_down_3dp(limit),
            });
            if let Some(c2) = coef2 {
                let mixed = mixed_order_limit(c2, q, pmin)
                    .map_err(|e| validation(e.to_string()))?;
                let map = entry.as_object_mut().expect("object");
                map.insert("mixed_order_limit".into(), json!(mixed));
                map.insert("mixed_order_limit_3dp".into(), json!(round_down_3dp(mixed)));
            }
            Ok(entry)
        })
        .collect::<Result<_, CliError>>()?;
    let osc = oscillation_free_coefficient(pmin);
    let cfg = config_echo(
        "limits",
        &b,
        json!({ "operator": operator.name(), "coef2": coef2 }),
    );
    let doc = json!({
        "config": cfg,
        "psi_min": {
            "value": pmin,
            "value_3dp": round_down_3dp(pmin),
            "location": argmin,
            "position": PanelLocation::classify(n, argmin.1, argmin.2).name(),
        },
        "orders": orders,
        "oscillation_free_coef": osc,
        "oscillation_free_coef_3dp": round_down_3dp(osc),
    });
    write_atomic(out.as_deref(), &to_pretty(&doc))
}

fn cmd_amplification(
    grid_args: GridArgs,
    operator: OperatorKind,
    order: u32,
    coef: Coef,
    location: LocationArg,
    samples: usize,
    out: OutArgs,
) -> Result<(), CliError> {
    if order == 0 {
        return Err(validation("order must be at least 1"));
    }
    if samples < 2 {
        return Err(validation(format!("samples must be at least 2, got {samples}")));
    }
    let b = build(&grid_args)?;
    let field = stability_field(&b.mf, operator);
    let (pmin, _) = psi_min(&field);
    let c = match coef {
        Coef::OscFree => oscillation_free_coefficient(pmin),
        Coef::Value(v) => v,
    };
    let (p, i, j) = resolve_location(&b, operator, location)?;
    let m = *b.mf.get(p, i, j);
    let spec = DampingSpec { q: order, c, operator, c2: None };
    let rows = diagonal_sweep(&spec, &m, field.da_min, samples);
    let cfg = config_echo(
        "amplification",
        &b,
        json!({
            "operator": operator.name(),
            "order": order,
            "coef": coef_echo(coef),
            "coef_resolved": c,
            "location": location_name(location),
            "location_indices": [p, i, j],
            "samples": samples,
            "format": format_name(out.format),
        }),
    );
    match out.format {
        OutFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["k_dx", "gamma"]).map_err(runtime)?;
            for (k, g) in &rows {
                wtr.write_record([k.to_string(), g.to_string()]).map_err(runtime)?;
            }
            let bytes = wtr.into_inner().map_err(runtime)?;
            write_atomic(out.out.as_deref(), &bytes)
        }
        OutFormat::Json => {
            let rows: Vec<Value> =
                rows.iter().map(|(k, g)| json!({ "k_dx": k, "gamma": g })).collect();
            let doc = json!({ "config": cfg, "rows": rows });
            write_atomic(out.out.as_deref(), &to_pretty(&doc))
        }
    }
}

fn cmd_two_dx_field(
    grid_args: GridArgs,
    operator: OperatorKind,
    order: u32,
    coef: Coef,
    out: OutArgs,
) -> Result<(), CliError> {
    if order == 0 {
        return Err(validation("order must be at least 1"));
    }
    let b = build(&grid_args)?;
    let field = stability_field(&b.mf, operator);
    let (pmin, _) = psi_min(&field);
    let c = match coef {
        Coef::OscFree => oscillation_free_coefficient(pmin),
        Coef::Value(v) => v,
    };
    let spec = DampingSpec { q: order, c, operator, c2: None };
    let tdx = two_dx_field(&spec, &b.mf, field.da_min);
    let cfg = config_echo(
        "two-dx-field",
        &b,
        json!({
            "operator": operator.name(),
            "order": order,
            "coef": coef_echo(coef),
            "coef_resolved": c,
            "format": format_name(out.format),
        }),
    );
    let summary = json!({
        "gamma_2dx_min": tdx.min,
        "gamma_2dx_max": tdx.max,
        "argmin": tdx.argmin,
        "argmax": tdx.argmax,
        "spread": tdx.max - tdx.min,
    });
    match out.format {
        OutFormat::Csv => {
            let mut header: Vec<&str> = METRIC_HEADER.to_vec();
            header.push("gamma_2dx");
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(&header).map_err(runtime)?;
            for (p, i, j, m) in b.mf.iter() {
                let v = metric_row_values(&b, p, i, j, m)?;
                let mut rec = vec![p.to_string(), i.to_string(), j.to_string()];
                rec.extend(v.iter().map(|x| x.to_string()));
                rec.push(tdx.panels[p][(i, j)].to_string());
                wtr.write_record(&rec).map_err(runtime)?;
            }
            let bytes = wtr.into_inner().map_err(runtime)?;
            write_atomic(out.out.as_deref(), &bytes)?;
            let doc = json!({ "config": cfg, "summary": summary });
            if out.out.is_some() {
                std::io::stdout().write_all(&to_pretty(&doc)).map_err(runtime)?;
            }
            Ok(())
        }
        OutFormat::Json => {
            let mut rows = Vec::new();
            for (p, i, j, m) in b.mf.iter() {
                let v = metric_row_values(&b, p, i, j, m)?;
                rows.push(json!({
                    "panel_id": p, "i": i, "j": j,
                    "lon_deg": v[0], "lat_deg": v[1],
                    "dx_m": v[2], "dy_m": v[3],
                    "chi": v[4], "sin_alpha": v[5], "area_m2": v[6],
                    "gamma_2dx": tdx.panels[p][(i, j)],
                }));
            }
            let doc = json!({ "config": cfg, "summary": summary, "rows": rows });
            write_atomic(out.out.as_deref(), &to_pretty(&doc))
        }
    }
}

fn cmd_empirical_limit(
    grid_args: GridArgs,
    operator: OperatorKind,
    order: u32,
    location: LocationArg,
    tol: f64,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if order == 0 {
        return Err(validation("order must be at least 1"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(validation(format!("tol must be a positive number, got {tol}")));
    }
    let b = build(&grid_args)?;
    let field = stability_field(&b.mf, operator);
    let (p, i, j) = resolve_location(&b, operator, location)?;
    let m = *b.mf.get(p, i, j);
    let psi_cell = grid_stability_function(&m, field.da_min, operator);
    let analytic = max_stable_coefficient(psi_cell, order);
    let n_steps = (12_000 / order as usize).max(3_000);
    let cfg_patch = PatchConfig::uniform(4, 4, m, field.da_min, operator, order, analytic, n_steps)
        .map_err(runtime)?;
    let init = &noise_field(4, 4, seed).mapv(|x| 0.5 * x) + &checkerboard(4, 4);
    let bracket = (0.7 * analytic, 1.3 * analytic);
    let threshold = empirical_threshold(&cfg_patch, bracket, tol, &init)
        .map_err(|e| runtime(format!("bisection bracket failure: {e}")))?;
    let cfg = config_echo(
        "empirical-limit",
        &b,
        json!({
            "operator": operator.name(),
            "order": order,
            "location": location_name(location),
            "location_indices": [p, i, j],
            "tol": tol,
            "seed": seed,
        }),
    );
    let doc = json!({
        "config": cfg,
        "psi_at_cell": psi_cell,
        "analytic_limit": analytic,
        "empirical_threshold": threshold,
        "relative_gap": (threshold - analytic) / analytic,
    });
    write_atomic(out.as_deref(), &to_pretty(&doc))
}

fn format_name(f: OutFormat) -> &'static str {
    match f {
        OutFormat::Csv => "csv",
        OutFormat::Json => "json",
    }
}
