//! Command-line driver: builds the classical quadrangles, verifies
//! geometries, runs property reports and symmetry computations, and
//! drives the exclusion sieve. Exit codes: 0 success / all checks pass,
//! 1 usage or input error, 2 check failure (witness printed).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gq_core::classical::{build, FamilyTag};
use gq_core::geometry::{check_parameter_bounds, GeneralizedQuadrangle, GeometryFile};
use gq_core::symmetry::{
    all_symmetry_groups, check_e_properties, check_orbit_lemmas, CheckMode, CheckStatus,
    PropertyResult, SymmetryGroup, DEFAULT_NODE_BUDGET,
};
use gq_sieve::cases::{find_case, load_cases, run_case, verify_certificate};

#[derive(Parser)]
#[command(
    name = "gq",
    about = "classical generalized quadrangles, symmetries and the exclusion sieve",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build a classical geometry and emit its JSON description.
    Build(BuildArgs),
    /// Re-verify the quadrangle axioms of a geometry file.
    Verify(VerifyArgs),
    /// Run property checks against a geometry file.
    Report(ReportArgs),
    /// Compute full symmetry groups by exhaustive search.
    Symmetries(SymmetriesArgs),
    /// Print the hyperbolic line through two points.
    Span(SpanArgs),
    /// Emit the point-line dual of a geometry file.
    Dual(DualArgs),
    /// Arithmetic exclusion cases.
    Sieve(SieveArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Family tag: W3, Q4, Qminus5, H3 or H4.
    #[arg(long)]
    family: String,
    #[arg(long)]
    q: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Build past the point-count cap.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct VerifyArgs {
    geometry: PathBuf,
    /// Collect every violation instead of stopping at the first.
    #[arg(long)]
    all_violations: bool,
}

#[derive(Args)]
struct ReportArgs {
    geometry: PathBuf,
    /// Comma-separated checks: srg,bounds,symmetries,E1,E2,E3,span-bound,orbit,ovoid.
    #[arg(
        long,
        default_value = "srg,bounds,symmetries,E1,E2,E3,span-bound,orbit"
    )]
    checks: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Node budget for the symmetry search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Seed for deterministic sampling in large geometries.
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
}

#[derive(Args)]
struct SymmetriesArgs {
    geometry: PathBuf,
    /// Restrict to a single point index.
    #[arg(long)]
    point: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SpanArgs {
    geometry: PathBuf,
    #[arg(long)]
    x: u32,
    #[arg(long)]
    y: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct DualArgs {
    geometry: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SieveArgs {
    #[command(subcommand)]
    command: SieveCommand,
}

#[derive(Subcommand)]
enum SieveCommand {
    /// Run one exclusion case.
    Run(SieveRunArgs),
    /// Verify the stored divisor certificate of a case.
    VerifyCert(SieveCertArgs),
    /// Run every case in the data file.
    All(SieveAllArgs),
}

#[derive(Args)]
struct SieveRunArgs {
    #[arg(long = "case")]
    case: String,
    #[arg(long = "q-max")]
    q_max: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SieveCertArgs {
    #[arg(long = "case")]
    case: String,
}

#[derive(Args)]
struct SieveAllArgs {
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Build(args) => cmd_build(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Report(args) => cmd_report(args),
        Command::Symmetries(args) => cmd_symmetries(args),
        Command::Span(args) => cmd_span(args),
        Command::Dual(args) => cmd_dual(args),
        Command::Sieve(args) => match args.command {
            SieveCommand::Run(run) => cmd_sieve_run(run),
            SieveCommand::VerifyCert(cert) => cmd_sieve_cert(cert),
            SieveCommand::All(all) => cmd_sieve_all(all),
        },
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_geometry(path: &PathBuf) -> Result<(GeometryFile, GeneralizedQuadrangle), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = GeometryFile::from_json(&text).map_err(|e| e.to_string())?;
    let gq = file.verify().map_err(|e| e.to_string())?;
    Ok((file, gq))
}

fn cmd_build(args: BuildArgs) -> Result<ExitCode, String> {
    let family = FamilyTag::parse(&args.family)
        .ok_or_else(|| format!("unknown family `{}`", args.family))?;
    let built = build(family, args.q, args.force).map_err(|e| e.to_string())?;
    for w in &built.warnings {
        eprintln!("warning: {w}");
    }
    emit(&args.out, &built.to_geometry_file().to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(&args.geometry)
        .map_err(|e| format!("{}: {e}", args.geometry.display()))?;
    let file = GeometryFile::from_json(&text).map_err(|e| e.to_string())?;
    if args.all_violations {
        let n = file
            .lines
            .iter()
            .flatten()
            .map(|&p| p as usize + 1)
            .max()
            .unwrap_or(0);
        let labels = (0..n).map(|i| format!("P{i}")).collect();
        match gq_core::verify_gq_collect(labels, file.lines.clone()) {
            Ok(gq) => {
                println!(
                    "ok: order {:?}, {} points, {} lines",
                    gq.order(),
                    gq.num_points(),
                    gq.num_lines()
                );
                Ok(ExitCode::SUCCESS)
            }
            Err(violations) => {
                for v in &violations {
                    println!("violation: {v}");
                }
                Ok(ExitCode::from(2))
            }
        }
    } else {
        match file.verify() {
            Ok(gq) => {
                println!(
                    "ok: order {:?}, {} points, {} lines",
                    gq.order(),
                    gq.num_points(),
                    gq.num_lines()
                );
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => {
                println!("violation: {e}");
                Ok(ExitCode::from(2))
            }
        }
    }
}

#[derive(Serialize)]
struct ReportDocument {
    geometry: String,
    order: [u32; 2],
    points: usize,
    lines: usize,
    results: Vec<PropertyResult>,
}

fn cmd_report(args: ReportArgs) -> Result<ExitCode, String> {
    let (file, gq) = load_geometry(&args.geometry)?;
    let selected: Vec<&str> = args.checks.split(',').map(str::trim).collect();
    let (s, t) = gq.order();
    let mut results: Vec<PropertyResult> = Vec::new();

    let mode = if gq.num_points() <= 200 {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled {
            seed: args.seed,
            samples: 20_000,
        }
    };

    let needs_groups = selected.iter().any(|c| {
        matches!(
            *c,
            "symmetries" | "E1" | "E2" | "E3" | "span-bound" | "orbit"
        )
    });
    let groups = if needs_groups {
        Some(all_symmetry_groups(&gq, args.budget).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let mut e_props: Option<Vec<PropertyResult>> = None;

    for check in &selected {
        match *check {
            "srg" => results.push(srg_check(&gq)),
            "bounds" => results.push(bounds_check(s, t)),
            "symmetries" => {
                results.push(symmetry_summary(&gq, groups.as_ref().unwrap()));
            }
            "E1" | "E2" | "E3" | "span-bound" => {
                if e_props.is_none() {
                    e_props = Some(
                        check_e_properties(&gq, groups.as_ref().unwrap(), mode)
                            .map_err(|e| e.to_string())?,
                    );
                }
                if let Some(p) = e_props.as_ref().unwrap().iter().find(|p| p.name == *check) {
                    results.push(p.clone());
                }
            }
            "orbit" => {
                let props =
                    check_orbit_lemmas(&gq, groups.as_ref().unwrap()).map_err(|e| e.to_string())?;
                results.extend(props);
            }
            "ovoid" => results.push(ovoid_check(&gq)),
            other => return Err(format!("unknown check `{other}`")),
        }
    }

    let doc = ReportDocument {
        geometry: file.family.clone(),
        order: [s, t],
        points: gq.num_points(),
        lines: gq.num_lines(),
        results,
    };
    let all_pass = doc.results.iter().all(|r| r.passed());
    let rendered = match args.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("report serializes"),
        Format::Text => {
            let mut out = format!(
                "{} order ({}, {}), {} points, {} lines\n",
                doc.geometry, s, t, doc.points, doc.lines
            );
            for r in &doc.results {
                out.push_str(&format!(
                    "{:12} {}{}\n",
                    r.name,
                    if r.passed() { "pass" } else { "FAIL" },
                    r.witness
                        .as_ref()
                        .map(|w| format!(" ({w})"))
                        .unwrap_or_default()
                ));
            }
            out.trim_end().to_string()
        }
    };
    emit(&args.out, &rendered)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn srg_check(gq: &GeneralizedQuadrangle) -> PropertyResult {
    match gq.collinearity_srg() {
        Ok((v, k, l, m)) => PropertyResult {
            name: "srg".into(),
            status: CheckStatus::Pass,
            witness: Some(format!("({v},{k},{l},{m})")),
        },
        Err(e) => PropertyResult {
            name: "srg".into(),
            status: CheckStatus::Fail,
            witness: Some(e.to_string()),
        },
    }
}

fn bounds_check(s: u32, t: u32) -> PropertyResult {
    let b = check_parameter_bounds(s as u64, t as u64);
    PropertyResult {
        name: "bounds".into(),
        status: if b.all_pass() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        witness: Some(format!(
            "v={} fourth={} fifth={} higman={}/{} sum-divides={}",
            b.v,
            b.fourth_power_bound,
            b.fifth_power_bound,
            b.s_le_t_squared,
            b.t_le_s_squared,
            b.sum_divides
        )),
    }
}

fn symmetry_summary(gq: &GeneralizedQuadrangle, groups: &[SymmetryGroup]) -> PropertyResult {
    let orders: Vec<usize> = groups.iter().map(|g| g.order()).collect();
    let constant = orders.windows(2).all(|w| w[0] == w[1]);
    let order = orders.first().copied().unwrap_or(0);
    let verified = groups.iter().all(|g| g.verify(gq).is_ok());
    PropertyResult {
        name: "symmetries".into(),
        status: if constant && verified {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        witness: Some(if order == 1 {
            "symmetry group trivial at every point".to_string()
        } else {
            format!("order {order} at every point")
        }),
    }
}

fn ovoid_check(gq: &GeneralizedQuadrangle) -> PropertyResult {
    let (s, t) = gq.order();
    match gq.find_ovoid(DEFAULT_NODE_BUDGET) {
        Ok(Some(ovoid)) => match gq.is_m_ovoid(&ovoid) {
            Ok(Some(1)) => PropertyResult {
                name: "ovoid".into(),
                status: CheckStatus::Pass,
                witness: Some(format!("found ovoid of size {} = st+1", ovoid.len())),
            },
            other => PropertyResult {
                name: "ovoid".into(),
                status: CheckStatus::Fail,
                witness: Some(format!("ovoid candidate failed validation: {other:?}")),
            },
        },
        Ok(None) => PropertyResult {
            name: "ovoid".into(),
            status: CheckStatus::Fail,
            witness: Some(format!("no ovoid of size {} exists", s * t + 1)),
        },
        Err(e) => PropertyResult {
            name: "ovoid".into(),
            status: CheckStatus::Fail,
            witness: Some(e.to_string()),
        },
    }
}

#[derive(Serialize)]
struct SymmetryDocument {
    orders: Vec<usize>,
    constant_order: bool,
}

fn cmd_symmetries(args: SymmetriesArgs) -> Result<ExitCode, String> {
    let (_, gq) = load_geometry(&args.geometry)?;
    let orders: Vec<usize> = match args.point {
        Some(p) => {
            let g = gq_core::full_symmetry_group(&gq, p, args.budget).map_err(|e| e.to_string())?;
            vec![g.order()]
        }
        None => all_symmetry_groups(&gq, args.budget)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|g| g.order())
            .collect(),
    };
    let constant = orders.windows(2).all(|w| w[0] == w[1]);
    match args.format {
        Format::Json => {
            let doc = SymmetryDocument {
                orders: orders.clone(),
                constant_order: constant,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializes")
            );
        }
        Format::Text => match args.point {
            Some(p) => println!("symmetry group at point {p}: order {}", orders[0]),
            None => println!(
                "symmetry group order {} at every point (constant: {constant})",
                orders[0]
            ),
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_span(args: SpanArgs) -> Result<ExitCode, String> {
    let (_, gq) = load_geometry(&args.geometry)?;
    let span = gq.span(args.x, args.y).map_err(|e| e.to_string())?;
    let collinear = gq.collinear(args.x, args.y);
    match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct SpanDoc {
                x: u32,
                y: u32,
                collinear: bool,
                size: usize,
                points: Vec<u32>,
            }
            let doc = SpanDoc {
                x: args.x,
                y: args.y,
                collinear,
                size: span.len(),
                points: span,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializes")
            );
        }
        Format::Text => println!(
            "span({}, {}) = {:?} (size {}, {})",
            args.x,
            args.y,
            span,
            span.len(),
            if collinear {
                "collinear pair"
            } else {
                "hyperbolic line"
            }
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dual(args: DualArgs) -> Result<ExitCode, String> {
    let (file, gq) = load_geometry(&args.geometry)?;
    let dual = gq.dualize().map_err(|e| e.to_string())?;
    let (s, t) = dual.order();
    let out = GeometryFile {
        family: format!("{}.dual", file.family),
        q: file.q,
        order: [s, t],
        points: vec![Vec::new(); dual.num_points()],
        lines: dual.lines().to_vec(),
    };
    emit(&args.out, &out.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sieve_run(args: SieveRunArgs) -> Result<ExitCode, String> {
    let cases = load_cases().map_err(|e| e.to_string())?;
    let case = find_case(&cases, &args.case).map_err(|e| e.to_string())?;
    let report = run_case(case, args.q_max, args.jobs).map_err(|e| e.to_string())?;
    let rendered = match args.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        Format::Text => format!(
            "case {} ({}): verdict {} (expected {}), {} survivors, q range {:?}",
            report.case,
            report.group,
            report.verdict,
            report.expected,
            report.survivors.len(),
            report.q_range
        ),
    };
    emit(&args.out, &rendered)?;
    if report.verdict_matches() {
        Ok(ExitCode::SUCCESS)
    } else {
        for s in &report.survivors {
            eprintln!("survivor: q={} s={} t={}", s.q, s.s, s.t);
        }
        Ok(ExitCode::from(2))
    }
}

fn cmd_sieve_cert(args: SieveCertArgs) -> Result<ExitCode, String> {
    let cases = load_cases().map_err(|e| e.to_string())?;
    let case = find_case(&cases, &args.case).map_err(|e| e.to_string())?;
    let summary = verify_certificate(case).map_err(|e| e.to_string())?;
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("serializes")
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_sieve_all(args: SieveAllArgs) -> Result<ExitCode, String> {
    let cases = load_cases().map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    let mut all_match = true;
    for case in &cases {
        let report = run_case(case, None, args.jobs).map_err(|e| format!("{}: {e}", case.name))?;
        println!(
            "{:12} {} (expected {}) survivors={}",
            report.case,
            report.verdict,
            report.expected,
            report.survivors.len()
        );
        all_match &= report.verdict_matches();
        reports.push(report);
    }
    if let Some(path) = &args.out {
        let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
        std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(if all_match {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
