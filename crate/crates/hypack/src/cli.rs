//! Command-line front end and the complex document format.
//!
//! Subcommands: `bounds` prints bound tables, `construct` writes an
//! extremal surface with its certificates, `verify` rechecks a stored
//! surface and `strip` evaluates strip lengths. Exit codes: 0 success,
//! 1 verification failure, 2 invalid input, 3 internal failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;
use thiserror::Error;

use crate::assembler::{certify, marked_surface, AssemblyError, AssemblyRequest};
use crate::bounds::{report, BoundReport, SurfaceSignature};
use crate::complex::{ComplexError, Corner, Pairing, Slot, TriangulatedComplex};
use crate::geometry::{evaluate, realize, GeometryError};
use crate::hyptrig::{disk_area, surface_area};
use crate::strip::{solve_eps, NonSepParams, SepParams, StripCase, StripError};

/// Current document schema.
pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Errors reading or converting a [`ComplexDocument`].
#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema version {0:?}")]
    Schema(String),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// One triangle record. `marked_corner` names the marked corner of a
/// marked triangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleRecord {
    pub id: usize,
    pub marked: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_corner: Option<u8>,
}

/// One pairing record: `[triangle, side]` for each slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingRecord {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub reversed: bool,
}

/// Serialized complex with free-form metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub schema_version: String,
    pub triangles: Vec<TriangleRecord>,
    pub pairings: Vec<PairingRecord>,
    #[serde(default)]
    pub metadata: BTreeMap<String, Value>,
}

impl ComplexDocument {
    pub fn from_complex(c: &TriangulatedComplex, metadata: BTreeMap<String, Value>) -> Self {
        let marked: BTreeMap<usize, u8> = c.marked().iter().map(|m| (m.tri, m.corner)).collect();
        ComplexDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            triangles: (0..c.triangle_count())
                .map(|id| TriangleRecord {
                    id,
                    marked: marked.contains_key(&id),
                    marked_corner: marked.get(&id).copied(),
                })
                .collect(),
            pairings: c
                .pairings()
                .iter()
                .map(|p| PairingRecord {
                    a: [p.a.tri, p.a.side as usize],
                    b: [p.b.tri, p.b.side as usize],
                    reversed: p.reversed,
                })
                .collect(),
            metadata,
        }
    }

    pub fn to_complex(&self) -> Result<TriangulatedComplex, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Schema(self.schema_version.clone()));
        }
        let invalid = |m: String| Err(DocumentError::Invalid(m));
        let mut marked = Vec::new();
        for (idx, t) in self.triangles.iter().enumerate() {
            if t.id != idx {
                return invalid(format!("triangle {idx} has id {}", t.id));
            }
            match (t.marked, t.marked_corner) {
                (true, Some(c)) if c < 3 => marked.push(Corner::new(idx, c)),
                (false, None) => {}
                _ => return invalid(format!("triangle {idx} has inconsistent marking")),
            }
        }
        let slot = |s: [usize; 2]| -> Result<Slot, DocumentError> {
            if s[1] >= 3 {
                return Err(DocumentError::Invalid(format!("side {} out of range", s[1])));
            }
            Ok(Slot::new(s[0], s[1] as u8))
        };
        let pairings = self
            .pairings
            .iter()
            .map(|p| Ok(Pairing::new(slot(p.a)?, slot(p.b)?, p.reversed)))
            .collect::<Result<Vec<_>, DocumentError>>()?;
        Ok(TriangulatedComplex::new(self.triangles.len(), pairings, marked)?)
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: ComplexDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Schema(doc.schema_version));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// Formats `x` in fixed decimal notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.16}", 0.0);
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (16 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Parser, Debug)]
#[command(name = "hypack", version, about = "Packing-radius bounds and extremal surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print naive, Böröczky and Voronoi bounds.
    Bounds(BoundsArgs),
    /// Build an extremal surface and write it as a document.
    Construct(ConstructArgs),
    /// Recheck a stored surface.
    Verify(VerifyArgs),
    /// Evaluate strip lengths.
    #[command(subcommand)]
    Strip(StripCommand),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    #[arg(long, default_value_t = 0)]
    n: i64,
    #[arg(long, conflicts_with = "sweep_k", required_unless_present = "sweep_k")]
    k: Option<i64>,
    /// Inclusive range `A..B`.
    #[arg(long)]
    sweep_k: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    #[arg(long, default_value_t = 0)]
    n: i64,
    #[arg(long)]
    k: i64,
    #[arg(long)]
    orientable: bool,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<i64>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
    /// Required orientability; taken from the document when absent.
    #[arg(long)]
    orientable: Option<bool>,
}

#[derive(Subcommand, Debug)]
enum StripCommand {
    /// Non-separating strip.
    Nonsep {
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        common: StripArgs,
    },
    /// Separating strip.
    Sep {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[command(flatten)]
        common: StripArgs,
    },
}

#[derive(Args, Debug)]
struct StripArgs {
    #[arg(long)]
    h: f64,
    #[arg(long, conflicts_with_all = ["trace", "solve"], required_unless_present_any = ["trace", "solve"])]
    eps: Option<f64>,
    /// Number of `(ε, length)` samples on `(0, eps_max]`.
    #[arg(long, conflicts_with = "solve")]
    trace: Option<usize>,
    /// Upper end of the trace; twice the transition width when absent.
    #[arg(long, requires = "trace")]
    eps_max: Option<f64>,
    /// Target length to solve for.
    #[arg(long)]
    solve: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Failure of one command, mapped to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn invalid(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.to_string(),
    }
}

fn internal(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        message: message.to_string(),
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Bounds(a) => cmd_bounds(&a, out),
        Command::Construct(a) => cmd_construct(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Strip(s) => cmd_strip(&s, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn raw(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("valid JSON literal")
}

fn raw_f64(x: f64) -> Box<RawValue> {
    raw(fmt17(x))
}

#[derive(Serialize)]
struct BoundsRow {
    chi: i64,
    n: i64,
    k: i64,
    r_naive: Box<RawValue>,
    r_boroczky: Box<RawValue>,
    r_vor: Box<RawValue>,
    i: String,
    j: String,
    density: Box<RawValue>,
    attainability: &'static str,
}

const BOUNDS_HEADER: [&str; 10] = [
    "chi",
    "n",
    "k",
    "r_naive",
    "r_boroczky",
    "r_vor",
    "i",
    "j",
    "density",
    "attainability",
];

fn bounds_row(rep: &BoundReport) -> Result<BoundsRow, Failure> {
    let density =
        rep.k as f64 * disk_area(rep.r_vor).map_err(internal)? / surface_area(rep.sig.chi).map_err(internal)?;
    Ok(BoundsRow {
        chi: rep.sig.chi,
        n: rep.sig.n,
        k: rep.k,
        r_naive: raw_f64(rep.r_naive),
        r_boroczky: raw_f64(rep.r_boroczky),
        r_vor: raw_f64(rep.r_vor),
        i: rep.valences.i.to_string(),
        j: rep.valences.j.to_string(),
        density: raw_f64(density),
        attainability: rep.attainability.as_str(),
    })
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| invalid(format!("sweep range {s:?} is not of the form A..B")))?;
    let a: i64 = a
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad range start {a:?}")))?;
    let b: i64 = b.trim().parse().map_err(|_| invalid(format!("bad range end {b:?}")))?;
    if a < 1 || b < a {
        return Err(invalid(format!("sweep range {s:?} must satisfy 1 <= A <= B")));
    }
    Ok((a, b))
}

fn cmd_bounds(a: &BoundsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let sig = SurfaceSignature::new(a.chi, a.n).map_err(invalid)?;
    let (lo, hi) = match (&a.sweep_k, a.k) {
        (Some(r), _) => parse_range(r)?,
        (None, Some(k)) => (k, k),
        (None, None) => return Err(invalid("one of --k and --sweep-k is required")),
    };
    let rows = (lo..=hi)
        .into_par_iter()
        .map(|k| report(sig, k).map_err(invalid).and_then(|r| bounds_row(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(BOUNDS_HEADER).map_err(internal)?;
            for r in &rows {
                w.write_record([
                    r.chi.to_string(),
                    r.n.to_string(),
                    r.k.to_string(),
                    r.r_naive.get().to_string(),
                    r.r_boroczky.get().to_string(),
                    r.r_vor.get().to_string(),
                    r.i.clone(),
                    r.j.clone(),
                    r.density.get().to_string(),
                    r.attainability.to_string(),
                ])
                .map_err(internal)?;
            }
            let bytes = w.into_inner().map_err(internal)?;
            out.write_all(&bytes).map_err(internal)?;
        }
        Format::Json => {
            let text = if a.sweep_k.is_some() {
                serde_json::to_string_pretty(&rows)
            } else {
                serde_json::to_string_pretty(&rows[0])
            }
            .map_err(internal)?;
            writeln!(out, "{text}").map_err(internal)?;
        }
    }
    Ok(EXIT_OK)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let req = AssemblyRequest::new(a.chi, a.n, a.k, a.orientable);
    let (complex, cert) = marked_surface(&req).map_err(|e| match e {
        AssemblyError::Inadmissible(_) | AssemblyError::Unrealizable(_) => invalid(e),
        other => internal(other),
    })?;
    let sig = SurfaceSignature::new(a.chi, a.n).map_err(invalid)?;
    let geo = realize(&complex, sig, a.k).map_err(internal)?;
    let mut metadata = BTreeMap::new();
    metadata.insert("request".to_string(), serde_json::to_value(req).map_err(internal)?);
    metadata.insert(
        "assembly_certificate".to_string(),
        serde_json::to_value(&cert).map_err(internal)?,
    );
    metadata.insert(
        "geometric_certificate".to_string(),
        serde_json::to_value(&geo).map_err(internal)?,
    );
    let text = ComplexDocument::from_complex(&complex, metadata).to_json();
    match &a.out {
        Some(path) => write_atomic(path, text.as_bytes()).map_err(internal)?,
        None => out.write_all(text.as_bytes()).map_err(internal)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    defects: Vec<String>,
    assembly_certificate: Option<crate::assembler::AssemblyCertificate>,
    geometric_certificate: Option<crate::geometry::GeometricCertificate>,
}

fn request_field(doc: &ComplexDocument, key: &str) -> Option<Value> {
    doc.metadata.get("request").and_then(|r| r.get(key)).cloned()
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let text =
        std::fs::read_to_string(&a.input).map_err(|e| invalid(format!("cannot read {}: {e}", a.input.display())))?;
    let doc = ComplexDocument::parse(&text).map_err(invalid)?;
    let complex = doc.to_complex().map_err(invalid)?;
    let int = |flag: Option<i64>, key: &str| {
        flag.or_else(|| request_field(&doc, key).and_then(|v| v.as_i64()))
            .ok_or_else(|| invalid(format!("--{key} is required when the document has no request")))
    };
    let (chi, n, k) = (int(a.chi, "chi")?, int(a.n, "n")?, int(a.k, "k")?);
    let sig = SurfaceSignature::new(chi, n).map_err(invalid)?;
    let orientable = match a
        .orientable
        .or_else(|| request_field(&doc, "orientable").and_then(|v| v.as_bool()))
    {
        Some(o) => o,
        None => complex.orientability().map_err(invalid)?,
    };
    let req = AssemblyRequest::new(chi, n, k, orientable);
    req.validate().map_err(invalid)?;
    let mut defects = Vec::new();
    let assembly = match certify(&complex, &req) {
        Ok(c) => {
            defects.extend(c.failures.iter().cloned());
            Some(c)
        }
        Err(e) => {
            defects.push(e.to_string());
            None
        }
    };
    let geometry = match evaluate(&complex, sig, k) {
        Ok(g) => {
            defects.extend(g.failures.iter().cloned());
            Some(g)
        }
        Err(GeometryError::Complex(e)) => {
            defects.push(e.to_string());
            None
        }
        Err(e) => return Err(internal(e)),
    };
    let report = VerifyReport {
        passed: defects.is_empty(),
        defects,
        assembly_certificate: assembly,
        geometric_certificate: geometry,
    };
    let text = serde_json::to_string_pretty(&report).map_err(internal)?;
    writeln!(out, "{text}").map_err(internal)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn strip_failure(e: StripError) -> Failure {
    invalid(e)
}

fn cmd_strip(s: &StripCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    let (case, common) = match s {
        StripCommand::Nonsep { delta, common } => (
            StripCase::NonSeparating {
                delta: *delta,
                h: common.h,
            },
            common,
        ),
        StripCommand::Sep { a, b, common } => (
            StripCase::Separating {
                a: *a,
                b: *b,
                h: common.h,
            },
            common,
        ),
    };
    let rows: Vec<(f64, f64)> = if let Some(n) = common.trace {
        let eps_max = match common.eps_max {
            Some(e) => e,
            None => case.default_eps_max().map_err(strip_failure)?,
        };
        case.trace(eps_max, n).map_err(strip_failure)?
    } else if let Some(target) = common.solve {
        let eps = solve_eps(target, &case).map_err(strip_failure)?;
        vec![(eps, case.length(eps).map_err(strip_failure)?)]
    } else {
        let eps = common.eps.ok_or_else(|| invalid("--eps is required"))?;
        let len = match case {
            StripCase::NonSeparating { delta, h } => crate::strip::nonsep_length(&NonSepParams { delta, h, eps }),
            StripCase::Separating { a, b, h } => crate::strip::sep_length(&SepParams { a, b, h, eps }),
        }
        .map_err(strip_failure)?;
        vec![(eps, len)]
    };
    match common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["eps", "length"]).map_err(internal)?;
            for (e, l) in &rows {
                w.write_record([fmt17(*e), fmt17(*l)]).map_err(internal)?;
            }
            out.write_all(&w.into_inner().map_err(internal)?).map_err(internal)?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                eps: Box<RawValue>,
                length: Box<RawValue>,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|(e, l)| Row {
                    eps: raw_f64(*e),
                    length: raw_f64(*l),
                })
                .collect();
            let text = serde_json::to_string_pretty(&rows).map_err(internal)?;
            writeln!(out, "{text}").map_err(internal)?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_digits() {
        assert_eq!(fmt17(1.0), "1.0000000000000000");
        assert_eq!(fmt17(0.5), "0.50000000000000000");
        assert_eq!(fmt17(123.25), "123.25000000000000");
        assert_eq!(fmt17(-2.0), "-2.0000000000000000");
        for x in [std::f64::consts::PI, 1.7191, 1e-7, 0.939_812_345_678_9] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }
}
