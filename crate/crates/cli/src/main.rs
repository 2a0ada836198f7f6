//! `cubepack`: exact checks for unit-cube packings and tilings.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 semantic refutation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubepack::packing::{PackingStatus, TilingStatus};
use cubepack::rigidity::{find_covered_outsiders, parity_certificate_system, twin_witness};
use cubepack::subgroup::{basis_vector_certificate, subgroup_check, SubgroupStatus};
use cubepack::svg::{default_window, render_decomposition, render_instance, DEFAULT_SCALE};
use cubepack::tiling::{coset_census, nested_windows, orthant_witness, SignVector};
use cubepack::{
    chessboard_decompose, from_json, lattice_tiling, random_torus_tiling, shifted_column_tiling, to_json, CubeSystem,
    Error, HalfOpenBox, Point, Rational, Scalar,
};

#[derive(Parser)]
#[command(name = "cubepack", version, about = "Exact verification of unit-cube packings and tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Packing, tiling and parity status of an instance.
    Verify(Common),
    /// Chessboard decomposition into two rough parts.
    Decompose(DecomposeArgs),
    /// Twin or orthant witnesses.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Covered cubes of the union that are not cubes of the packing.
    Erode(Common),
    /// Integer-translate counts over nested windows.
    Census(CensusArgs),
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Write a generated instance.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// SVG picture of a planar instance.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Instance file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Output file (default: stdout).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Half-open window "a,b;c,d" (lower corner; upper corner).
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Double every period before running.
    #[arg(long)]
    double_periods: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    common: Common,
    /// Also write the checkerboard picture (d = 2).
    #[arg(long, value_name = "FILE")]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: u32,
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Odd twin pair around a covered cube `I + u`.
    Twin {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Odd coordinate set `J` with `t + Σ_J ε_i e_i` in the tiling.
    Orthant {
        #[command(flatten)]
        common: Common,
        /// The member `t` (default: the first origin).
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Sign vector such as "+,-" (default: all +).
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<String>,
    },
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    common: Common,
    /// The point `t` whose integer translates are counted (default: the first origin).
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long, default_value_t = 3)]
    steps: usize,
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Hypothesis check and basis-vector certificate for `G = S ∩ Z^d`.
    Subgroup {
        #[command(flatten)]
        common: Common,
        /// Multiples "k_0,k_1,...".
        #[arg(long)]
        k: String,
        /// Coordinate set L, e.g. "0,2" (may be empty).
        #[arg(long = "L", default_value = "")]
        l: String,
    },
}

#[derive(Subcommand)]
enum GenerateCommand {
    Lattice {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Columns {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "1/2")]
        shift: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Random {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Even periods "p_0,p_1,..." (default: all 2).
        #[arg(long)]
        periods: Option<String>,
        #[arg(long, default_value_t = 2)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: u32,
}

/// A finished command: what to print and the exit status.
struct Report {
    body: String,
    refuted: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, refuted: false }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DimensionMismatch { .. }
        | Error::ZeroDimension
        | Error::EmptyBox { .. }
        | Error::InvalidInstance(_)
        | Error::Parse { .. }
        | Error::Usage(_)
        | Error::NotPeriodic => 1,
        _ => 2,
    }
}

fn usage(message: impl Into<String>) -> Error {
    Error::Usage(message.into())
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn load(common: &Common) -> Result<CubeSystem, Error> {
    let text = fs::read_to_string(&common.input)
        .map_err(|e| usage(format!("cannot read {}: {e}", common.input.display())))?;
    let sys: CubeSystem = from_json(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", common.input.display()),
            message,
        },
        other => other,
    })?;
    if common.double_periods {
        sys.with_doubled_periods()
    } else {
        Ok(sys)
    }
}

fn window(common: &Common, sys: &CubeSystem) -> Result<HalfOpenBox, Error> {
    let w = match &common.window {
        Some(text) => HalfOpenBox::parse(text)?,
        None => default_window(sys),
    };
    if w.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: w.dim(),
        });
    }
    Ok(w)
}

fn point(text: &str, sys: &CubeSystem) -> Result<Point, Error> {
    let p = Point::parse(text)?;
    if p.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: p.dim(),
        });
    }
    Ok(p)
}

fn int_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Error> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| usage(format!("invalid {what} entry {:?}", part.trim())))
        })
        .collect()
}

fn write_file(path: &Path, body: &str) -> Result<(), Error> {
    fs::write(path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn verify(common: &Common) -> Result<Report, Error> {
    let sys = load(common)?;
    let packing = sys.validate_packing();
    let valid = packing == PackingStatus::Valid;
    let tiling = match (valid, sys.is_periodic()) {
        (true, true) => Some(sys.validate_torus_tiling()?),
        _ => None,
    };
    let parity = parity_certificate_system(&sys);
    let body = match common.format {
        Format::Json => pretty(&json!({
            "packing": to_value(&packing),
            "tiling": tiling.as_ref().map(to_value),
            "parity": to_value(&parity),
        })),
        Format::Text => {
            let packing = match &packing {
                PackingStatus::Valid => "valid".to_string(),
                PackingStatus::OverlapViolation { first, second } => format!("overlap ({first} meets {second})"),
            };
            let tiling = match &tiling {
                Some(TilingStatus::Tiling) => "yes".to_string(),
                Some(TilingStatus::NotTiling { deficit }) => format!("no (deficit {deficit})"),
                None if sys.is_periodic() => "unknown".to_string(),
                None => "no (finite)".to_string(),
            };
            let parity = if parity.is_certified() { "certified" } else { "refuted" };
            format!("packing: {packing}, tiling: {tiling}, parity: {parity}\n")
        }
    };
    Ok(Report { body, refuted: !valid })
}

fn decompose(args: &DecomposeArgs) -> Result<Report, Error> {
    let sys = load(&args.common)?;
    let parts = chessboard_decompose(&sys)?;
    if let Some(path) = &args.svg {
        let w = args.common.window.as_ref().map(|_| window(&args.common, &sys)).transpose()?;
        write_file(path, &render_decomposition(&sys, &parts, w.as_ref(), args.scale)?)?;
    }
    let body = match args.common.format {
        Format::Json => pretty(&to_value(&parts)),
        Format::Text => {
            let join = |v: &[Point]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
            format!("S0: {}\nS1: {}\n", join(&parts.s0), join(&parts.s1))
        }
    };
    Ok(Report::ok(body))
}

fn witness(cmd: &WitnessCommand) -> Result<Report, Error> {
    match cmd {
        WitnessCommand::Twin { common, u } => {
            let sys = load(common)?;
            let u = point(u, &sys)?;
            let pair = twin_witness(&sys, &u)?;
            let body = match common.format {
                Format::Json => pretty(&to_value(&pair)),
                Format::Text => format!("t = {}, t' = {}, flipped = {:?}\n", pair.t, pair.t_prime, pair.flipped),
            };
            Ok(Report::ok(body))
        }
        WitnessCommand::Orthant { common, base, sign } => {
            let sys = load(common)?;
            let t = match base {
                Some(text) => point(text, &sys)?,
                None => sys.origins()[0].clone(),
            };
            let sign = match sign {
                Some(text) => SignVector::parse(text)?,
                None => SignVector::all_positive(sys.dim()),
            };
            let w = orthant_witness(&sys, &t, &sign)?;
            let body = match common.format {
                Format::Json => pretty(&to_value(&w)),
                Format::Text => format!("J = {:?}, target = {}\n", w.coords, w.target),
            };
            Ok(Report::ok(body))
        }
    }
}

fn erode(common: &Common) -> Result<Report, Error> {
    let sys = load(common)?;
    let w = window(common, &sys)?;
    let found = find_covered_outsiders(&sys, &w)?;
    let body = match common.format {
        Format::Json => pretty(&json!({ "window": to_value(&w), "outsiders": to_value(&found) })),
        Format::Text if found.is_empty() => "no covered outsiders\n".to_string(),
        Format::Text => found.faces.iter().map(|f| format!("{f}\n")).collect(),
    };
    Ok(Report {
        body,
        refuted: !found.is_empty(),
    })
}

fn census(args: &CensusArgs) -> Result<Report, Error> {
    let sys = load(&args.common)?;
    let t = match &args.u {
        Some(text) => point(text, &sys)?,
        None => sys.origins()[0].clone(),
    };
    if args.steps == 0 {
        return Err(usage("--steps must be positive"));
    }
    let windows = nested_windows(&window(&args.common, &sys)?, args.steps);
    let counts = windows
        .iter()
        .map(|w| coset_census(&sys, &t, w))
        .collect::<Result<Vec<_>, _>>()?;
    let body = match args.common.format {
        Format::Json => pretty(&json!({
            "t": to_value(&t),
            "windows": to_value(&windows),
            "counts": counts,
        })),
        Format::Text => {
            let counts: Vec<String> = counts.iter().map(usize::to_string).collect();
            format!("t = {t}: {}\n", counts.join(" "))
        }
    };
    Ok(Report::ok(body))
}

fn certify(cmd: &CertifyCommand) -> Result<Report, Error> {
    let CertifyCommand::Subgroup { common, k, l } = cmd;
    let sys = load(common)?;
    let k: Vec<i64> = int_list(k, "k")?;
    let l: Vec<usize> = int_list(l, "L")?;
    match subgroup_check(&sys, &k, &l)? {
        SubgroupStatus::Valid => {
            let cert = basis_vector_certificate(&sys, &k, &l)?;
            let body = match common.format {
                Format::Json => pretty(&json!({ "status": "Valid", "certificate": to_value(&cert) })),
                Format::Text => format!(
                    "e_{} in G: J = {:?}, n = {}, k_m = {}, x = {}, y = {}\n",
                    cert.m, cert.coords, cert.n, cert.k_m, cert.x, cert.y
                ),
            };
            Ok(Report::ok(body))
        }
        SubgroupStatus::Violation(v) => {
            let body = match common.format {
                Format::Json => pretty(&json!({ "status": "Violation", "violation": to_value(&v) })),
                Format::Text => format!("violation: {v}\n"),
            };
            Ok(Report { body, refuted: true })
        }
    }
}

fn generate(cmd: &GenerateCommand) -> Result<(Report, Option<PathBuf>), Error> {
    let (sys, out): (CubeSystem, _) = match cmd {
        GenerateCommand::Lattice { dim, out } => (lattice_tiling(*dim)?, out),
        GenerateCommand::Columns { dim, shift, out } => {
            let shift = Rational::parse_exact(shift).ok_or_else(|| usage(format!("invalid shift {shift:?}")))?;
            (shifted_column_tiling(*dim, &shift)?, out)
        }
        GenerateCommand::Random {
            dim,
            periods,
            grid,
            seed,
            out,
        } => {
            let periods = match periods {
                Some(text) => int_list(text, "period")?,
                None => vec![2; *dim],
            };
            (random_torus_tiling(*dim, &periods, *grid, *seed)?, out)
        }
    };
    Ok((Report::ok(to_json(&sys)), out.clone()))
}

fn render(args: &RenderArgs) -> Result<Report, Error> {
    let sys = load(&args.common)?;
    let w = args.common.window.as_ref().map(|_| window(&args.common, &sys)).transpose()?;
    Ok(Report::ok(render_instance(&sys, w.as_ref(), args.scale)?))
}

fn run(cli: &Cli) -> Result<(Report, Option<PathBuf>), Error> {
    let with_out = |r: Report, c: &Common| (r, c.out.clone());
    Ok(match &cli.command {
        Command::Verify(c) => with_out(verify(c)?, c),
        Command::Decompose(a) => with_out(decompose(a)?, &a.common),
        Command::Witness(w) => {
            let (WitnessCommand::Twin { common, .. } | WitnessCommand::Orthant { common, .. }) = w;
            with_out(witness(w)?, common)
        }
        Command::Erode(c) => with_out(erode(c)?, c),
        Command::Census(a) => with_out(census(a)?, &a.common),
        Command::Certify(c) => {
            let CertifyCommand::Subgroup { common, .. } = c;
            with_out(certify(c)?, common)
        }
        Command::Generate(g) => generate(g)?,
        Command::Render(a) => with_out(render(a)?, &a.common),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|(report, out)| {
        match out {
            Some(path) => write_file(&path, &report.body)?,
            None => print!("{}", report.body),
        }
        Ok(report.refuted)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
