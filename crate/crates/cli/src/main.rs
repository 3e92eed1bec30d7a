//! `toric-oka` command-line front end.
//!
//! Exit codes: 0 success, 1 domain rejection (invalid fan, not smooth, failed
//! check, incomplete fan under `--strict`), 2 usage, I/O or parse error.

use std::fmt::Display;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toric_oka::cox::{cox_presentation, CoxPresentation};
use toric_oka::fan::{is_complete, is_smooth, split_torus_factor, torus_factor_rank, ValidatedFan};
use toric_oka::fanfmt::{catalog_names, resolve_catalog_expr, serialize_fan, subject_hash};
use toric_oka::oka::explain;
use toric_oka::{
    certify, parse_certificate, parse_fan, serialize_certificate, validate_fan, verify_certificate, Fan,
    OkaCertificate,
};

const CATALOG_PREFIX: &str = "catalog:";

#[derive(Parser)]
#[command(name = "toric-oka", version, about = "Certify that smooth toric varieties are Oka manifolds")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Treat a non-complete fan as an error in validate, analyze and certify.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan document and the fan axioms.
    Validate {
        /// Fan file, `-` for stdin, or `catalog:NAME` (products as `catalog:P2*torus(1)`).
        fan: String,
    },
    /// Report smoothness, torus factor, class group, G and primitive collections.
    Analyze { fan: String },
    /// Build an Oka certificate, or print why none exists.
    Certify {
        fan: String,
        /// Write the certificate here instead of stdout.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Recheck a certificate against a fan.
    Check { certificate: PathBuf, fan: String },
    /// List the built-in fans, or print one as a fan document.
    Catalog { name: Option<String> },
    /// Render a certificate's derivation as prose.
    Explain { certificate: PathBuf },
}

/// Failure with its exit code; the message goes to stderr.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Display) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

struct Output {
    format: Format,
    stdout: String,
}

impl Output {
    fn line(&mut self, text: impl Display) {
        self.stdout.push_str(&text.to_string());
        self.stdout.push('\n');
    }

    fn json(&mut self, value: &Value) {
        self.line(serde_json::to_string_pretty(value).expect("JSON values serialize"));
    }

    fn text(&self) -> bool {
        self.format == Format::Text
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Output {
        format: cli.format,
        stdout: String::new(),
    };
    let result = run(&cli, &mut out);
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("toric-oka: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli, out: &mut Output) -> Result<u8, Failure> {
    match &cli.command {
        Command::Validate { fan } => validate(&load_fan(fan)?, cli.strict, out),
        Command::Analyze { fan } => analyze(&load_fan(fan)?, cli.strict, out),
        Command::Certify { fan, output } => certify_cmd(&load_fan(fan)?, output.as_ref(), cli.strict, out),
        Command::Check { certificate, fan } => check(&load_certificate(certificate)?, &load_fan(fan)?, out),
        Command::Catalog { name } => catalog(name.as_deref(), out),
        Command::Explain { certificate } => {
            let cert = load_certificate(certificate)?;
            if out.text() {
                out.stdout.push_str(&explain(&cert));
            } else {
                out.json(&explain_json(&cert));
            }
            Ok(0)
        }
    }
}

fn read_input(source: &str) -> Result<String, Failure> {
    if source == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(source).map_err(|e| usage(format!("cannot read {source}: {e}")))
}

fn load_fan(source: &str) -> Result<Fan, Failure> {
    let doc = match source.strip_prefix(CATALOG_PREFIX) {
        Some(name) => resolve_catalog_expr(name).map_err(usage)?,
        None => parse_fan(&read_input(source)?).map_err(|e| usage(format!("{source}: {e}")))?,
    };
    Ok(doc.to_fan())
}

fn load_certificate(path: &Path) -> Result<OkaCertificate, Failure> {
    let text = read_input(&path.to_string_lossy())?;
    parse_certificate(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn int(x: &impl Display) -> Value {
    serde_json::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

fn to_json(x: &impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

/// The fan in input order, so that ray and cone indices in reports match it.
fn fan_json(f: &Fan) -> Value {
    let rays: Vec<Vec<Value>> = f.rays.iter().map(|r| r.iter().map(int).collect()).collect();
    json!({
        "name": f.name,
        "lattice_rank": f.lattice_rank,
        "rays": rays,
        "max_cones": f.max_cones,
    })
}

/// Validates, reporting an invalid fan as a domain failure (code 1).
fn validated(f: &Fan, out: &mut Output) -> Result<ValidatedFan, u8> {
    validate_fan(f).map_err(|e| {
        if out.text() {
            out.line(format_args!("invalid fan: {e}"));
        } else {
            out.json(&json!({"valid": false, "error": to_json(&e)}));
        }
        1
    })
}

fn strict_incomplete(v: &ValidatedFan, strict: bool, out: &mut Output) -> bool {
    if strict && !is_complete(v) {
        if out.text() {
            out.line("fan is not complete (--strict)");
        } else {
            out.json(&json!({"complete": false, "strict": true}));
        }
        return true;
    }
    false
}

fn validate(f: &Fan, strict: bool, out: &mut Output) -> Result<u8, Failure> {
    let v = match validated(f, out) {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    if strict_incomplete(&v, strict, out) {
        return Ok(1);
    }
    let complete = is_complete(&v);
    if out.text() {
        out.line(format_args!(
            "valid fan: lattice rank {}, {} rays, {} maximal cones, simplicial, {}",
            v.lattice_rank(),
            v.ray_count(),
            v.max_cones().len(),
            if complete { "complete" } else { "not complete" }
        ));
        out.line(format_args!("subject: {}", subject_hash(f)));
    } else {
        let separations: Vec<Value> = v
            .separations()
            .iter()
            .map(|s| {
                json!({
                    "cones": [s.first, s.second],
                    "functional": s.functional.iter().map(int).collect::<Vec<_>>(),
                })
            })
            .collect();
        out.json(&json!({
            "valid": true,
            "subject": subject_hash(f),
            "fan": fan_json(f),
            "simplicial": true,
            "complete": complete,
            "separations": separations,
        }));
    }
    Ok(0)
}

fn analyze(f: &Fan, strict: bool, out: &mut Output) -> Result<u8, Failure> {
    let v = match validated(f, out) {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    if strict_incomplete(&v, strict, out) {
        return Ok(1);
    }
    let smooth = is_smooth(&v);
    let torus_rank = torus_factor_rank(&v);
    let complete = is_complete(&v);
    // Cox data of the fan itself, or of its torus-free part.
    let reduced = if torus_rank == 0 { None } else { Some(split_torus_factor(&v).reduced) };
    let cox_fan = reduced.as_ref().unwrap_or(&v);
    let cox = if cox_fan.ray_count() == 0 && torus_rank > 0 {
        None
    } else {
        Some(cox_presentation(cox_fan).map_err(|e| usage(format!("internal error: {e}")))?)
    };

    if out.text() {
        analyze_text(f, &v, &smooth, torus_rank, complete, cox.as_ref(), out);
    } else {
        out.json(&json!({
            "subject": subject_hash(f),
            "fan": fan_json(f),
            "smooth": smooth.smooth(),
            "cones": to_json(&smooth.cones),
            "torus_factor_rank": torus_rank,
            "complete": complete,
            "cox": cox.as_ref().map(|c| json!({
                "of": if torus_rank == 0 { "fan" } else { "torus-free part" },
                "m": c.m,
                "class_group": to_json(&c.class_group),
                "group": to_json(&c.group),
                "degree_matrix": to_json(&c.degree_matrix),
                "primitive_collections": c.primitive_collections,
                "codim_z": to_json(&c.codim_z),
            })),
        }));
    }
    Ok(0)
}

fn analyze_text(
    f: &Fan,
    v: &ValidatedFan,
    smooth: &toric_oka::fan::SmoothnessReport,
    torus_rank: usize,
    complete: bool,
    cox: Option<&CoxPresentation>,
    out: &mut Output,
) {
    if let Some(name) = &f.name {
        out.line(format_args!("fan: {name}"));
    }
    out.line(format_args!("subject: {}", subject_hash(f)));
    out.line(format_args!(
        "lattice rank {}, {} rays, {} maximal cones, {}",
        v.lattice_rank(),
        v.ray_count(),
        v.max_cones().len(),
        if complete { "complete" } else { "not complete" }
    ));
    out.line("");
    out.line("maximal cone  rays          multiplicity");
    for c in &smooth.cones {
        out.line(format_args!("{:<13} {:<13} {}", c.cone, c.rays.to_string(), c.multiplicity));
    }
    out.line(format_args!("smooth: {}", if smooth.smooth() { "yes" } else { "no" }));
    out.line(format_args!("torus factor rank: {torus_rank}"));
    let Some(cox) = cox else {
        out.line("the fan has no rays: X is a torus");
        return;
    };
    if torus_rank > 0 {
        out.line("quotient data below is for the torus-free part");
    }
    out.line(format_args!("class group: {}", cox.class_group));
    out.line(format_args!("G = {}", cox.group));
    let pcs: Vec<String> = cox
        .primitive_collections
        .iter()
        .map(|c| toric_oka::fan::ConeLabel(c.clone()).to_string())
        .collect();
    out.line(format_args!("primitive collections: {}", pcs.join(" ")));
    out.line(format_args!("codim Z: {}", cox.codim_z));
    out.line("degree matrix:");
    for row in cox.degree_matrix.to_rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.line(format_args!("  [{}]", cells.join(", ")));
    }
}

fn certify_cmd(f: &Fan, output: Option<&PathBuf>, strict: bool, out: &mut Output) -> Result<u8, Failure> {
    if strict {
        if let Ok(v) = validate_fan(f) {
            if strict_incomplete(&v, strict, out) {
                return Ok(1);
            }
        }
    }
    let cert = match certify(f) {
        Ok(c) => c,
        Err(r) => {
            if out.text() {
                out.line(format_args!("rejected: {r}"));
            } else {
                out.json(&json!({"certified": false, "rejection": to_json(&r)}));
            }
            return Ok(1);
        }
    };
    let text = serialize_certificate(&cert);
    match output {
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            if out.text() {
                out.line(format_args!("certified: {}", cert.conclusion));
                out.line(format_args!("certificate written to {}", path.display()));
            } else {
                out.json(&json!({
                    "certified": true,
                    "subject": cert.subject,
                    "conclusion": cert.conclusion,
                    "output": path.display().to_string(),
                }));
            }
        }
        None => out.line(text),
    }
    Ok(0)
}

fn check(cert: &OkaCertificate, f: &Fan, out: &mut Output) -> Result<u8, Failure> {
    match verify_certificate(cert, f) {
        Ok(()) => {
            if out.text() {
                out.line(format_args!("accepted: {}", cert.conclusion));
            } else {
                out.json(&json!({"accepted": true, "subject": cert.subject, "conclusion": cert.conclusion}));
            }
            Ok(0)
        }
        Err(e) => {
            if out.text() {
                out.line(format_args!("rejected: {e}"));
            } else {
                out.json(&json!({"accepted": false, "path": e.path, "message": e.message}));
            }
            Ok(1)
        }
    }
}

fn catalog(name: Option<&str>, out: &mut Output) -> Result<u8, Failure> {
    match name {
        None if out.text() => {
            for n in catalog_names() {
                out.line(n);
            }
        }
        None => out.json(&json!(catalog_names())),
        Some(name) => {
            let name = name.strip_prefix(CATALOG_PREFIX).unwrap_or(name);
            let doc = resolve_catalog_expr(name).map_err(usage)?;
            out.line(serialize_fan(&doc));
        }
    }
    Ok(0)
}

fn explain_json(cert: &OkaCertificate) -> Value {
    let mut steps = Vec::new();
    cert.derivation.walk("derivation", &mut |path, step| {
        steps.push(json!({
            "path": path,
            "rule": step.rule.as_str(),
            "conclusion": step.conclusion,
            "label": step.metadata.label,
            "statement": step.metadata.statement,
            "source": step.metadata.source,
            "scope": step.metadata.scope,
        }));
    });
    json!({"subject": cert.subject, "conclusion": cert.conclusion, "steps": steps})
}
