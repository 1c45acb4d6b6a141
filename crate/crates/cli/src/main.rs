use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use mv_spectra_core::lattice::{duality_roundtrip, LatticeSpec, PrimeSpectrum};
use mv_spectra_core::mv::{MvError, DEFAULT_CARRIER_CAP};
use mv_spectra_core::spectrum::{ChangPoint, ChangSpace, MvDualSpace};
use mv_spectra_core::verify::{self, Report, Status, Suite, VerifyConfig, SCHEMA};
use mv_spectra_core::{Algebra, AlgebraSpec, Chang};

#[derive(Parser)]
#[command(name = "mv-spectra", version, about = "Finite MV-algebras, their dual spaces and sheaf representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan the MV axioms and report the first violated law.
    Check(CheckArgs),
    /// Dump the dual space X with Y, Z, the involution, +, k and m.
    Spectrum(SpectrumArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Prime spectrum and duality round trip of a finite lattice.
    Lattice(LatticeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args)]
struct Source {
    /// Algebra spec file, `-` for stdin.
    #[arg(long, conflicts_with = "algebra")]
    input: Option<PathBuf>,
    /// Inline algebra spec.
    #[arg(long)]
    algebra: Option<String>,
    /// Carrier cap for products.
    #[arg(long, default_value_t = DEFAULT_CARRIER_CAP)]
    cap: usize,
    /// Elements per side scanned on Chang's algebra.
    #[arg(long, default_value_t = 32)]
    chang_bound: u64,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Draw + as dashed edges in DOT output.
    #[arg(long)]
    plus_edges: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random CRT instances per algebra.
    #[arg(long, default_value_t = 200)]
    crt_instances: usize,
    /// Verify the built-in corpus instead of a single algebra.
    #[arg(long, conflicts_with_all = ["input", "algebra"])]
    corpus: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct LatticeArgs {
    /// Lattice spec file, `-` for stdin.
    #[arg(long, conflicts_with = "lattice")]
    input: Option<PathBuf>,
    /// Inline lattice spec.
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Failure modes mapped onto exit codes.
enum Fail {
    Usage(String),
    Checks,
}

type Outcome = Result<(), Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Lattice(a) => cmd_lattice(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Checks) => ExitCode::from(1),
        Err(Fail::Usage(msg)) => {
            eprintln!("mv-spectra: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_text(path: Option<&PathBuf>, inline: Option<&String>, what: &str) -> Result<String, Fail> {
    match (path, inline) {
        (_, Some(s)) => Ok(s.clone()),
        (Some(p), None) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Fail::Usage(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        (Some(p), None) => {
            std::fs::read_to_string(p).map_err(|e| Fail::Usage(format!("reading {}: {e}", p.display())))
        }
        (None, None) => Err(Fail::Usage(format!("no {what} given; pass --input or an inline spec"))),
    }
}

fn parse_error(e: serde_json::Error) -> Fail {
    Fail::Usage(format!("parse error at line {}, column {}: {e}", e.line(), e.column()))
}

fn parse_spec(src: &Source) -> Result<AlgebraSpec, Fail> {
    let text = read_text(src.input.as_ref(), src.algebra.as_ref(), "algebra")?;
    AlgebraSpec::parse(&text).map_err(parse_error)
}

fn emit_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn cmd_check(args: CheckArgs) -> Outcome {
    let spec = parse_spec(&args.source)?;
    let (label, carrier, verdict) = match spec.build(args.source.cap) {
        Ok(Algebra::Finite(a)) => {
            let v = a.check_axioms();
            (a.label().to_string(), json!(a.size()), v.map_err(|v| json!(v)))
        }
        Ok(Algebra::Chang(_)) => {
            let v = Chang::check_axioms_bounded(args.source.chang_bound);
            let scanned = json!({ "bound": args.source.chang_bound });
            ("Chang".to_string(), scanned, v.map_err(|v| json!(v)))
        }
        Err(MvError::Axiom(v)) => ("tables".to_string(), Value::Null, Err(json!(v))),
        Err(e @ (MvError::NoNeutral | MvError::Trivial)) => {
            ("tables".to_string(), Value::Null, Err(json!({ "error": e.to_string() })))
        }
        Err(e) => return Err(Fail::Usage(e.to_string())),
    };
    let ok = verdict.is_ok();
    match args.format {
        Format::Text => match &verdict {
            Ok(()) => println!("ok: {label} satisfies the MV axioms"),
            Err(v) => println!("violation: {label}: {}", describe_violation(v)),
        },
        _ => {
            let mut out = json!({
                "schema": SCHEMA,
                "algebra": label,
                "carrier": carrier,
                "ok": ok,
            });
            if let Err(v) = verdict {
                out["violation"] = v;
            }
            emit_json(&out);
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Fail::Checks)
    }
}

fn describe_violation(v: &Value) -> String {
    match (v.get("law"), v.get("witness")) {
        (Some(law), Some(w)) => format!("{} at witness {w}", law.as_str().unwrap_or("?")),
        _ => v.get("error").and_then(Value::as_str).unwrap_or("invalid tables").to_string(),
    }
}

fn cmd_spectrum(args: SpectrumArgs) -> Outcome {
    let spec = parse_spec(&args.source)?;
    let alg = spec.build(args.source.cap).map_err(|e| Fail::Usage(e.to_string()))?;
    match alg {
        Algebra::Finite(a) => {
            let space = MvDualSpace::build(&a);
            match args.format {
                Format::Dot => print!("{}", space.to_dot(args.plus_edges)),
                Format::Json => {
                    let mut v = json!(space.report());
                    v["schema"] = json!(SCHEMA);
                    emit_json(&v);
                }
                Format::Text => {
                    let r = space.report();
                    println!("{}: {} elements, {} prime ideals", r.algebra, r.carrier, r.points.len());
                    println!("Y = {:?}", r.y);
                    println!("Z = {:?}", r.z);
                    for p in &r.points {
                        let m = p.m.map_or("-".to_string(), |m| m.to_string());
                        println!(
                            "  x{} = ↓{}  i={} k={} m={}",
                            p.index, p.generator, p.involution, p.k, m
                        );
                    }
                    for (x, y, s) in &r.plus {
                        println!("  x{x} + x{y} = x{s}");
                    }
                }
            }
        }
        Algebra::Chang(_) => {
            let n = args.source.chang_bound;
            match args.format {
                Format::Dot => print!("{}", chang_dot(n)),
                Format::Json => {
                    let mut v = json!(ChangSpace::report(n));
                    v["schema"] = json!(SCHEMA);
                    emit_json(&v);
                }
                Format::Text => {
                    let r = ChangSpace::report(n);
                    println!("Chang: points up to index {n}");
                    for p in &r.points {
                        let m = p.m.map_or("-".to_string(), |m| m.to_string());
                        println!(
                            "  {}  i={} k={} m={} y={} z={}",
                            p.point, p.involution, p.k, m, p.in_y, p.in_z
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

/// The bounded chain of Chang points; dashed edges skip the elided middle.
fn chang_dot(n: u64) -> String {
    let pts = ChangPoint::bounded(n);
    let mut s = String::from("digraph X {\n  rankdir=BT;\n");
    for (i, p) in pts.iter().enumerate() {
        let shape = if ChangSpace::in_y(*p) { "doublecircle" } else { "circle" };
        let fill = if ChangSpace::in_z(*p) { ", style=filled" } else { "" };
        s.push_str(&format!("  {i} [label=\"{p}\", shape={shape}{fill}];\n"));
    }
    for i in 1..pts.len() {
        let gap = matches!(pts[i], ChangPoint::Omega) || matches!(pts[i - 1], ChangPoint::Omega);
        let style = if gap { " [style=dashed]" } else { "" };
        s.push_str(&format!("  {} -> {i}{style};\n", i - 1));
    }
    s.push_str("}\n");
    s
}

fn skipped_report(label: String, suite: Suite, reason: String) -> Report {
    Report {
        schema: SCHEMA,
        algebra: label,
        suite,
        checks: vec![verify::Check {
            name: "carrier-cap".into(),
            status: Status::Skipped,
            detail: Some(reason),
            counterexample: None,
        }],
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, Fail> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MV_SPECTRA_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Fail::Usage(format!("MV_SPECTRA_THREADS must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Fail::Usage(e.to_string()))
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let cfg = VerifyConfig {
        seed: args.seed,
        crt_instances: args.crt_instances,
        chang_bound: args.source.chang_bound,
        ..VerifyConfig::default()
    };
    let suite = args.suite;
    let reports: Vec<Report> = if args.corpus {
        let corpus = verify::standard_corpus();
        let pool = thread_pool()?;
        // indexed parallel collect keeps corpus order
        pool.install(|| {
            corpus
                .par_iter()
                .map(|a| verify::verify(&Algebra::Finite(a.clone()), suite, &cfg))
                .collect()
        })
    } else {
        let spec = parse_spec(&args.source)?;
        let report = match spec.build(args.source.cap) {
            Ok(alg) => verify::verify(&alg, suite, &cfg),
            Err(e @ MvError::CapExceeded { .. }) => skipped_report("product".into(), suite, e.to_string()),
            Err(e) => return Err(Fail::Usage(e.to_string())),
        };
        vec![report]
    };
    let ok = reports.iter().all(Report::passed);
    match args.format {
        Format::Text => {
            for r in &reports {
                print!("{}", r.to_text());
            }
        }
        _ if reports.len() == 1 => emit_json(&json!(reports[0])),
        _ => emit_json(&json!({ "schema": SCHEMA, "suite": suite, "passed": ok, "reports": reports })),
    }
    if ok {
        Ok(())
    } else {
        Err(Fail::Checks)
    }
}

fn cmd_lattice(args: LatticeArgs) -> Outcome {
    let text = read_text(args.input.as_ref(), args.lattice.as_ref(), "lattice")?;
    let spec: LatticeSpec = serde_json::from_str(&text).map_err(parse_error)?;
    let lattice = spec.build().map_err(|e| Fail::Usage(e.to_string()))?;
    let spectrum = PrimeSpectrum::new(&lattice);
    if args.format == Format::Dot {
        print!("{}", spectrum.order().to_dot("X"));
        return Ok(());
    }
    let distributive = lattice.distributivity_witness();
    let roundtrip = match &distributive {
        Some(_) => Err("not distributive".to_string()),
        None => duality_roundtrip(&lattice).map(|_| ()).map_err(|e| e.to_string()),
    };
    let normal = lattice.normality_witness();
    let primes: Vec<Vec<usize>> = spectrum.points().iter().map(|p| p.ideal.members().iter().collect()).collect();
    let ok = roundtrip.is_ok();
    match args.format {
        Format::Text => {
            println!("{} elements, {} prime ideals", lattice.size(), primes.len());
            for (x, p) in primes.iter().enumerate() {
                println!("  x{x} = {p:?}");
            }
            match &distributive {
                None => println!("distributive"),
                Some(w) => println!("not distributive at {w:?}"),
            }
            match normal {
                None => println!("normal"),
                Some(w) => println!("not normal at {w:?}"),
            }
            match &roundtrip {
                Ok(()) => println!("round trip: ok"),
                Err(e) => println!("round trip: {e}"),
            }
        }
        _ => emit_json(&json!({
            "schema": SCHEMA,
            "size": lattice.size(),
            "prime_ideals": primes,
            "order": spectrum.order().covers(),
            "distributive": distributive.is_none(),
            "distributivity_witness": distributive,
            "normal": normal.is_none(),
            "normality_witness": normal,
            "roundtrip": ok,
            "roundtrip_error": roundtrip.err(),
        })),
    }
    if ok {
        Ok(())
    } else {
        Err(Fail::Checks)
    }
}
