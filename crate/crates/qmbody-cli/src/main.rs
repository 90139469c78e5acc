mod svg;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qmbody::acceptance::{run_all, Faults};
use qmbody::cluster::{build_cluster, enriques_export, DiagramFormat};
use qmbody::exactmath::{format_rational, parse_rational};
use qmbody::geometry::Point;
use qmbody::lattice::CatalogOptions;
use qmbody::okounkov::{body_closed_form, body_report, sweep_mutations, BodyReport, MutationReport, NOPolygon};
use qmbody::{Rational, Side};

/// Environment variable holding the sweep worker count.
const WORKERS_ENV: &str = "QMBODY_WORKERS";

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "qmbody", version, about = "Newton-Okounkov bodies of quasimonomial valuations on the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster of centres and its Enriques diagram.
    Cluster {
        /// Characteristic exponent, as `p/q`, an integer or a decimal.
        #[arg(long, value_parser = exponent)]
        s: Rational,
        #[arg(long, value_enum, default_value_t = ClusterFormat::Text)]
        format: ClusterFormat,
    },
    /// One body in both frames by both routes.
    Body {
        #[command(flatten)]
        catalog: CatalogArgs,
        #[arg(long, value_parser = exponent)]
        s: Rational,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Also write the normalized bodies as SVG.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// SVG pixels per unit.
        #[arg(long, default_value_t = 200.0)]
        scale: f64,
    },
    /// Bodies sampled along a range of exponents, with mutations.
    Sweep {
        #[command(flatten)]
        catalog: CatalogArgs,
        #[arg(long, value_parser = exponent)]
        from: Rational,
        #[arg(long, value_parser = exponent)]
        to: Rational,
        #[arg(long, value_parser = positive, default_value = "1/10")]
        step: Rational,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
        /// Also write an SVG animation of the sampled bodies.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 200.0)]
        scale: f64,
    },
    /// Run the acceptance suite.
    Verify {
        /// Run only criteria whose number or name contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Corrupt an input on purpose to check that the suite notices.
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Args)]
struct CatalogArgs {
    /// Degree of the curve through the origin.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    /// The origin is a special point of the curve: drop the Orevkov curves.
    #[arg(long)]
    special: bool,
    /// Largest odd index of the Orevkov curves C_i in the catalog.
    #[arg(long, default_value_t = 15)]
    max_orevkov: u32,
}

impl CatalogArgs {
    fn options(&self) -> CatalogOptions {
        CatalogOptions { degree: self.d, general: !self.special, max_orevkov: self.max_orevkov }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClusterFormat {
    Text,
    Dot,
    Svg,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Plus => vec![Side::Plus],
            SideArg::Minus => vec![Side::Minus],
            SideArg::Both => vec![Side::Plus, Side::Minus],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    Weight,
}

fn exponent(text: &str) -> Result<Rational, String> {
    let s = parse_rational(text).map_err(|e| e.to_string())?;
    if s < Rational::from_integer(1.into()) {
        return Err(format!("exponent must be at least 1, got {}", format_rational(&s)));
    }
    Ok(s)
}

fn positive(text: &str) -> Result<Rational, String> {
    let x = parse_rational(text).map_err(|e| e.to_string())?;
    if x <= Rational::from_integer(0.into()) {
        return Err(format!("step must be positive, got {}", format_rational(&x)));
    }
    Ok(x)
}

enum Failure {
    Usage(String),
    Computation(String),
    Verify,
}

impl From<qmbody::Error> for Failure {
    fn from(e: qmbody::Error) -> Self {
        Failure::Computation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_COMPUTATION)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Cluster { s, format } => cmd_cluster(&s, format),
        Command::Body { catalog, s, side, json, svg, scale } => {
            cmd_body(&catalog.options(), &s, side, json, svg, scale)
        }
        Command::Sweep { catalog, from, to, step, csv, json, svg, scale } => {
            let format = if csv {
                SweepFormat::Csv
            } else if json {
                SweepFormat::Json
            } else {
                SweepFormat::Text
            };
            cmd_sweep(&catalog.options(), &from, &to, &step, format, svg, scale)
        }
        Command::Verify { filter, inject_fault } => {
            let faults = Faults { perturb_weight: matches!(inject_fault, Some(Fault::Weight)) };
            cmd_verify(filter.as_deref(), &faults)
        }
    }
}

fn cmd_cluster(s: &Rational, format: ClusterFormat) -> Result<String, Failure> {
    let c = build_cluster(s)?;
    Ok(match format {
        ClusterFormat::Text => enriques_export(&c, DiagramFormat::Text),
        ClusterFormat::Dot => enriques_export(&c, DiagramFormat::Dot),
        ClusterFormat::Svg => format!("{}\n{}", svg::VERSION_COMMENT, enriques_export(&c, DiagramFormat::Svg)),
        ClusterFormat::Json => json(&c)?,
    })
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut out = serde_json::to_string_pretty(value).map_err(|e| Failure::Computation(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

fn show_points(v: &[Point]) -> String {
    let parts: Vec<String> = v.iter().map(|p| format!("({}, {})", p[0], p[1])).collect();
    parts.join(" ")
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Plus => "plus",
        Side::Minus => "minus",
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn body_text(r: &BodyReport) -> String {
    let mut out = String::new();
    let cf = &r.closed_form;
    let _ = writeln!(out, "body d = {}, s = {}, side {}", r.d, format_rational(&r.s), side_name(r.side));
    let kind = if cf.muhat.supraminimal { "supraminimal" } else { "minimal" };
    let _ = writeln!(out, "  muhat        {} ({}, {kind})", cf.muhat.value, cf.muhat.witness);
    let _ = writeln!(out, "  lambda       {}", cf.lambda);
    let walls: Vec<String> = r.walls.iter().map(format_rational).collect();
    let _ = writeln!(out, "  walls        {}", if walls.is_empty() { "none".into() } else { walls.join(" ") });
    let _ = writeln!(out, "  flag frame   {}", show_points(&r.flag.vertices));
    let _ = writeln!(out, "  normalized   {}", show_points(&r.normalized.vertices));
    let _ = writeln!(out, "  closed form  {}", show_points(&cf.polygon.vertices));
    if r.routes_agree {
        let _ = writeln!(out, "  routes agree");
    } else {
        let only = |a: &NOPolygon, b: &NOPolygon| -> Vec<Point> {
            a.vertices.iter().filter(|p| !b.vertices.contains(p)).cloned().collect()
        };
        let _ = writeln!(out, "  routes differ");
        let _ = writeln!(out, "    only in sweep        {}", show_points(&only(&r.normalized, &cf.polygon)));
        let _ = writeln!(out, "    only in closed form  {}", show_points(&only(&cf.polygon, &r.normalized)));
    }
    out
}

fn cmd_body(
    opts: &CatalogOptions,
    s: &Rational,
    side: SideArg,
    as_json: bool,
    svg_path: Option<PathBuf>,
    scale: f64,
) -> Result<String, Failure> {
    let reports: Vec<BodyReport> =
        side.sides().into_iter().map(|sd| body_report(s, opts, sd)).collect::<qmbody::Result<_>>()?;
    if let Some(path) = &svg_path {
        let panels: Vec<svg::Panel> = reports
            .iter()
            .map(|r| svg::Panel {
                title: format!("d = {}, s = {}, {}", r.d, format_rational(&r.s), side_name(r.side)),
                polygons: vec![r.normalized.vertices.clone()],
            })
            .collect();
        write_file(path, &svg::panels(&panels, scale))?;
    }
    if as_json {
        return json(&reports);
    }
    Ok(reports.iter().map(body_text).collect::<Vec<_>>().join("\n"))
}

#[derive(Serialize)]
struct Sample {
    #[serde(with = "qmbody::serial::rational")]
    s: Rational,
    #[serde(with = "qmbody::serial::surd")]
    muhat: qmbody::Surd,
    witness: String,
    #[serde(with = "qmbody::serial::surd")]
    lambda: qmbody::Surd,
    #[serde(with = "qmbody::serial::points")]
    vertices: Vec<Point>,
}

#[derive(Serialize)]
struct SweepDocument {
    degree: u32,
    #[serde(with = "qmbody::serial::rational")]
    from: Rational,
    #[serde(with = "qmbody::serial::rational")]
    to: Rational,
    #[serde(with = "qmbody::serial::rational")]
    step: Rational,
    samples: Vec<Sample>,
    mutations: Vec<MutationReport>,
}

#[derive(Clone, Copy)]
enum SweepFormat {
    Text,
    Csv,
    Json,
}

fn worker_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Failure::Computation(e.to_string()))
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn cmd_sweep(
    opts: &CatalogOptions,
    from: &Rational,
    to: &Rational,
    step: &Rational,
    format: SweepFormat,
    svg_path: Option<PathBuf>,
    scale: f64,
) -> Result<String, Failure> {
    let mut grid = Vec::new();
    let mut s = from.clone();
    while &s <= to {
        grid.push(s.clone());
        s += step;
    }
    let pool = worker_pool()?;
    let samples: Vec<Sample> = pool.install(|| {
        grid.par_iter()
            .map(|s| {
                let cf = body_closed_form(s, opts, Side::Plus)?;
                Ok(Sample {
                    s: s.clone(),
                    muhat: cf.muhat.value,
                    witness: cf.muhat.witness,
                    lambda: cf.lambda,
                    vertices: cf.polygon.vertices,
                })
            })
            .collect::<qmbody::Result<Vec<_>>>()
    })?;
    let mutations = if from < to { sweep_mutations(from, to, opts)? } else { Vec::new() };
    if let Some(path) = &svg_path {
        let frames: Vec<(String, Vec<Point>)> =
            samples.iter().map(|x| (format!("s = {}", format_rational(&x.s)), x.vertices.clone())).collect();
        write_file(path, &svg::animation(&frames, scale, 0.25))?;
    }
    let doc = SweepDocument {
        degree: opts.degree,
        from: from.clone(),
        to: to.clone(),
        step: step.clone(),
        samples,
        mutations,
    };
    Ok(match format {
        SweepFormat::Json => json(&doc)?,
        SweepFormat::Csv => sweep_csv(&doc),
        SweepFormat::Text => sweep_text(&doc),
    })
}

fn sweep_csv(doc: &SweepDocument) -> String {
    let mut out = String::from("kind,s,muhat,witness,lambda,vertices\n");
    for x in &doc.samples {
        let _ = writeln!(
            out,
            "sample,{},{},{},{},{}",
            format_rational(&x.s),
            csv_field(&x.muhat.to_string()),
            csv_field(&x.witness),
            csv_field(&x.lambda.to_string()),
            csv_field(&show_points(&x.vertices))
        );
    }
    for m in &doc.mutations {
        let _ = writeln!(
            out,
            "mutation,{},,{},,{}",
            format_rational(&m.s0),
            csv_field(&format!("{} -> {}", m.witness_left, m.witness_right)),
            csv_field(&format!("{} | {}", show_points(&m.left.vertices), show_points(&m.right.vertices)))
        );
    }
    out
}

fn sweep_text(doc: &SweepDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "sweep d = {} over [{}, {}] step {}: {} samples, {} mutations",
        doc.degree,
        format_rational(&doc.from),
        format_rational(&doc.to),
        format_rational(&doc.step),
        doc.samples.len(),
        doc.mutations.len()
    );
    for m in &doc.mutations {
        let _ = writeln!(out, "  mutation at {}: {}", format_rational(&m.s0), m.classification);
        let _ = writeln!(out, "    left   {}", show_points(&m.left.vertices));
        let _ = writeln!(out, "    right  {}", show_points(&m.right.vertices));
    }
    for x in &doc.samples {
        let _ = writeln!(
            out,
            "  s = {:<10} muhat {} ({})  {}",
            format_rational(&x.s),
            x.muhat,
            x.witness,
            show_points(&x.vertices)
        );
    }
    out
}

fn cmd_verify(filter: Option<&str>, faults: &Faults) -> Result<String, Failure> {
    let verdicts = run_all(filter, faults);
    if verdicts.is_empty() {
        return Err(Failure::Usage(format!("no criterion matches `{}`", filter.unwrap_or(""))));
    }
    let passed = verdicts.iter().filter(|v| v.pass()).count();
    let mut out = String::new();
    for v in &verdicts {
        let _ = writeln!(out, "{v}");
    }
    let _ = writeln!(out, "{passed}/{} criteria passed", verdicts.len());
    print!("{out}");
    if passed == verdicts.len() {
        Ok(String::new())
    } else {
        Err(Failure::Verify)
    }
}
