//! Text formats: `pubo` polynomials, `xorsat3` instances, and the bench
//! CSV schema.
//!
//! Polynomial files:
//!
//! ```text
//! p pubo <N> <T>
//! <coeff> <k> <i1> ... <ik>     (T term lines, 0-based indices)
//! ```
//!
//! `#` begins a comment line. Writers emit canonical sorted indices.
//!
//! Instance files:
//!
//! ```text
//! p xorsat3 <N>
//! <b_m> <v1> <v2> <v3>          (N clause lines, 0-based indices)
//! c planted <bitstring>         (optional footer)
//! ```
//!
//! Other `c` lines are comments. Round-trips are lossless.

use std::fmt;

use hosb_core::bench::{Algorithm, BenchRecord};
use hosb_core::model::{PolyProblem, Term};
use hosb_core::xorsat::Xorsat3Instance;

/// A parse failure with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Serializes a float with 17 significant digits (lossless for f64).
pub fn fmt_f64_17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// File kind by header sniffing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Pubo,
    Xorsat3,
}

/// Determines the format from the first significant line.
pub fn sniff_kind(text: &str) -> Result<FileKind, ParseError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        return if line.starts_with("p pubo") {
            Ok(FileKind::Pubo)
        } else if line.starts_with("p xorsat3") {
            Ok(FileKind::Xorsat3)
        } else {
            Err(ParseError::new(
                idx + 1,
                format!("unrecognized header {line:?}"),
            ))
        };
    }
    Err(ParseError::new(1, "empty file"))
}

pub fn write_pubo(problem: &PolyProblem) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p pubo {} {}\n",
        problem.num_vars(),
        problem.num_terms()
    ));
    for term in problem.terms() {
        out.push_str(&format!("{} {}", term.coefficient, term.degree()));
        for &v in &term.indices {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

pub fn read_pubo(text: &str) -> Result<PolyProblem, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None; // (line, n, t)
    let mut terms: Vec<Term> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if header.is_none() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "pubo" {
                return Err(ParseError::new(
                    line_no,
                    format!("expected header `p pubo <N> <T>`, found {line:?}"),
                ));
            }
            let n = parse_field::<usize>(fields[2], line_no, "variable count")?;
            let t = parse_field::<usize>(fields[3], line_no, "term count")?;
            header = Some((line_no, n, t));
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(ParseError::new(
                line_no,
                "term line needs a coefficient and a degree",
            ));
        }
        let coeff = parse_field::<f64>(fields[0], line_no, "coefficient")?;
        let degree = parse_field::<usize>(fields[1], line_no, "degree")?;
        if fields.len() != 2 + degree {
            return Err(ParseError::new(
                line_no,
                format!("expected {degree} indices, found {}", fields.len() - 2),
            ));
        }
        let mut indices = Vec::with_capacity(degree);
        for f in &fields[2..] {
            indices.push(parse_field::<u32>(f, line_no, "variable index")?);
        }
        terms.push(Term::new(coeff, indices));
    }
    let Some((header_line, n, t)) = header else {
        return Err(ParseError::new(1, "missing `p pubo` header"));
    };
    if terms.len() != t {
        return Err(ParseError::new(
            header_line,
            format!("header declares {t} terms, file has {}", terms.len()),
        ));
    }
    PolyProblem::new(n, terms).map_err(|e| ParseError::new(header_line, e.to_string()))
}

pub fn write_xorsat3(inst: &Xorsat3Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("p xorsat3 {}\n", inst.n()));
    for (clause, &b) in inst.clauses().iter().zip(inst.parities()) {
        out.push_str(&format!(
            "{} {} {} {}\n",
            u8::from(b),
            clause[0],
            clause[1],
            clause[2]
        ));
    }
    if let Some(planted) = inst.planted() {
        out.push_str("c planted ");
        for &bit in planted {
            out.push(if bit { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn read_xorsat3(text: &str) -> Result<Xorsat3Instance, ParseError> {
    let mut header: Option<(usize, usize)> = None; // (line, n)
    let mut clauses: Vec<[u32; 3]> = Vec::new();
    let mut parities: Vec<bool> = Vec::new();
    let mut planted: Option<Vec<bool>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("c planted ") {
            let bits: Result<Vec<bool>, ParseError> = rest
                .trim()
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(ParseError::new(
                        line_no,
                        format!("planted bitstring contains {other:?}"),
                    )),
                })
                .collect();
            planted = Some(bits?);
            continue;
        }
        if line.starts_with('c') {
            continue; // comment
        }
        if header.is_none() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "p" || fields[1] != "xorsat3" {
                return Err(ParseError::new(
                    line_no,
                    format!("expected header `p xorsat3 <N>`, found {line:?}"),
                ));
            }
            let n = parse_field::<usize>(fields[2], line_no, "variable count")?;
            header = Some((line_no, n));
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(ParseError::new(
                line_no,
                "clause line needs `<b> <v1> <v2> <v3>`",
            ));
        }
        let b = match fields[0] {
            "0" => false,
            "1" => true,
            other => {
                return Err(ParseError::new(
                    line_no,
                    format!("parity must be 0 or 1, found {other:?}"),
                ))
            }
        };
        let v1 = parse_field::<u32>(fields[1], line_no, "variable index")?;
        let v2 = parse_field::<u32>(fields[2], line_no, "variable index")?;
        let v3 = parse_field::<u32>(fields[3], line_no, "variable index")?;
        parities.push(b);
        clauses.push([v1, v2, v3]);
    }
    let Some((header_line, n)) = header else {
        return Err(ParseError::new(1, "missing `p xorsat3` header"));
    };
    if clauses.len() != n {
        return Err(ParseError::new(
            header_line,
            format!("header declares {n} clauses, file has {}", clauses.len()),
        ));
    }
    Xorsat3Instance::new(n, clauses, parities, planted)
        .map_err(|e| ParseError::new(header_line, e.to_string()))
}

fn parse_field<T: std::str::FromStr>(
    field: &str,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    field
        .parse()
        .map_err(|_| ParseError::new(line, format!("cannot parse {what} from {field:?}")))
}

pub const CSV_HEADER: &str =
    "instance_id,algorithm,N,dt,c1,beta1,n_steps,runs,successes,p,s,nr_p_warning";

pub fn record_to_csv(rec: &BenchRecord) -> String {
    let opt = |v: Option<f64>| v.map(fmt_f64_17).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        rec.instance_id,
        rec.algorithm.tag(),
        rec.n,
        opt(rec.dt),
        opt(rec.c1),
        opt(rec.beta1),
        rec.n_steps,
        rec.runs,
        rec.successes,
        fmt_f64_17(rec.p),
        fmt_f64_17(rec.s),
        rec.nr_p_warning
    )
}

pub fn record_from_csv(line: &str, line_no: usize) -> Result<BenchRecord, ParseError> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 12 {
        return Err(ParseError::new(
            line_no,
            format!("expected 12 CSV fields, found {}", fields.len()),
        ));
    }
    let algorithm = Algorithm::from_tag(fields[1])
        .ok_or_else(|| ParseError::new(line_no, format!("unknown algorithm {:?}", fields[1])))?;
    let opt = |s: &str, what: &str| -> Result<Option<f64>, ParseError> {
        if s.is_empty() {
            Ok(None)
        } else {
            parse_field::<f64>(s, line_no, what).map(Some)
        }
    };
    Ok(BenchRecord {
        instance_id: fields[0].to_string(),
        algorithm,
        n: parse_field(fields[2], line_no, "N")?,
        dt: opt(fields[3], "dt")?,
        c1: opt(fields[4], "c1")?,
        beta1: opt(fields[5], "beta1")?,
        n_steps: parse_field(fields[6], line_no, "n_steps")?,
        runs: parse_field(fields[7], line_no, "runs")?,
        successes: parse_field(fields[8], line_no, "successes")?,
        p: parse_field(fields[9], line_no, "p")?,
        s: parse_field(fields[10], line_no, "s")?,
        nr_p_warning: parse_field(fields[11], line_no, "nr_p_warning")?,
    })
}
