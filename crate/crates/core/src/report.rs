//! Report serialization: a JSON envelope around command results with floats
//! written to 17 significant digits, and CSV tables.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::diffusion::EnergyTrace;
use crate::ineq::{Certificate, Family, Field};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Echo of the invocation that produced a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub version: String,
    pub command: CommandEcho,
    /// RFC 3339 timestamp, `null` when suppressed.
    pub generated_at: Option<String>,
    pub results: Vec<T>,
}

/// Interval and active parameters of a certificate's case, in a fixed key order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub a: f64,
    pub b: f64,
    #[serde(flatten)]
    pub params: crate::ineq::Params,
}

/// One entry of the `results` array of a certificate report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub family: Family,
    pub params: ParamsRecord,
    pub function: String,
    pub lhs: f64,
    pub constant: f64,
    pub rhs: f64,
    /// `null` when the ratio is infinite.
    pub ratio: Option<f64>,
    pub disc_tol: f64,
    pub pass: bool,
    pub grid_n: usize,
}

impl From<&Certificate> for CertificateRecord {
    fn from(c: &Certificate) -> Self {
        CertificateRecord {
            family: c.case.family,
            params: ParamsRecord { a: c.case.a, b: c.case.b, params: c.case.params },
            function: c.function.clone(),
            lhs: c.lhs,
            constant: c.constant,
            rhs: c.rhs,
            ratio: c.ratio.is_finite().then_some(c.ratio),
            disc_tol: c.disc_tol,
            pass: c.pass,
            grid_n: c.grid_n,
        }
    }
}

/// Compact JSON with every float as `d.ddddddddddddddddde±x`.
#[derive(Debug, Default, Clone, Copy)]
pub struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        CompactFormatter.begin_array(writer)
    }
}

/// Serialize any value with [`SeventeenDigits`] (non-finite floats become `null`).
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser).expect("in-memory serialization does not fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// The report envelope as one line of JSON followed by a newline.
pub fn emit_envelope<T: Serialize>(command: &CommandEcho, generated_at: Option<String>, results: &[T]) -> String {
    #[derive(Serialize)]
    struct Borrowed<'a, T> {
        version: &'a str,
        command: &'a CommandEcho,
        generated_at: Option<String>,
        results: &'a [T],
    }
    let mut s = to_json(&Borrowed { version: VERSION, command, generated_at, results });
    s.push('\n');
    s
}

/// Certificate report.
pub fn emit_json(command: &CommandEcho, generated_at: Option<String>, certs: &[Certificate]) -> String {
    let records: Vec<CertificateRecord> = certs.iter().map(CertificateRecord::from).collect();
    emit_envelope(command, generated_at, &records)
}

pub fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table with the given header; numbers use the JSON float format.
pub fn emit_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("UTF-8 fields")
}

/// `t,energy,bound` with `bound = I(0) exp(-2 lambda t)`, one row per recorded time.
pub fn emit_csv(trace: &EnergyTrace) -> String {
    let bound = trace.bound();
    let rows =
        trace.times.iter().zip(&trace.energy).zip(bound).map(|((&t, &e), b)| vec![fmt_f64(t), fmt_f64(e), fmt_f64(b)]);
    emit_table(&["t", "energy", "bound"], rows)
}

/// Certificates as CSV, parameters flattened into one `name=value;...` column.
pub fn emit_certificates_csv(certs: &[Certificate]) -> String {
    let rows = certs.iter().map(|c| {
        let params: Vec<String> =
            Field::ALL.iter().filter_map(|f| f.get(&c.case.params).map(|v| format!("{}={}", f.name(), v))).collect();
        vec![
            c.case.family.to_string(),
            fmt_f64(c.case.a),
            fmt_f64(c.case.b),
            params.join(";"),
            c.function.clone(),
            fmt_f64(c.lhs),
            fmt_f64(c.constant),
            fmt_f64(c.rhs),
            if c.ratio.is_finite() { fmt_f64(c.ratio) } else { String::new() },
            fmt_f64(c.disc_tol),
            c.pass.to_string(),
            c.grid_n.to_string(),
        ]
    });
    emit_table(
        &["family", "a", "b", "params", "function", "lhs", "constant", "rhs", "ratio", "disc_tol", "pass", "grid_n"],
        rows,
    )
}
