//! Plain-text instance and witness format.
//!
//! ```text
//! # full-line comments start with '#'
//! d n            <- header: ambient dimension, number of points
//! c1 c2 ... cd   <- n point rows; coordinates are integers or "p/q"
//! ...
//! w: w1 ... wd   <- concept rows: one for an instance, n+1 for a witness
//! ```
//!
//! Exports round-trip bit-exactly: rationals are printed in lowest terms and
//! reparsed to the identical value. Structural metadata that the bare format
//! cannot carry (witness kind, suggested k) is written as recognized comment
//! directives and recovered on parse; files without them load as `Custom`.

use crate::error::{Error, Result};
use crate::geometry::{LinearConcept, RationalVector};
use crate::lab::{Instance, InstanceKind, WitnessInstance, WitnessKind};
use crate::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

/// Outcome of parsing: a single-concept instance or a multi-concept witness.
#[derive(Debug, Clone)]
pub enum ParsedFile {
    Instance(Instance),
    Witness(WitnessInstance),
}

fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_rat(token: &str, line: usize) -> Result<Rat> {
    let bad = |msg: &str| Error::Parse {
        line,
        msg: format!("{msg}: {token:?}"),
    };
    match token.split_once('/') {
        None => {
            let n = BigInt::from_str(token).map_err(|_| bad("malformed integer"))?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p = BigInt::from_str(p).map_err(|_| bad("malformed rational"))?;
            let q = BigInt::from_str(q).map_err(|_| bad("malformed rational"))?;
            if q.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rat::new(p, q))
        }
    }
}

fn parse_vector(tokens: &[&str], dim: usize, line: usize) -> Result<RationalVector> {
    if tokens.len() != dim {
        return Err(Error::Parse {
            line,
            msg: format!("expected {dim} coordinates, got {}", tokens.len()),
        });
    }
    let coords = tokens
        .iter()
        .map(|t| parse_rat(t, line))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalVector::new(coords))
}

/// Serializes an instance; the suggested k travels as a comment directive.
pub fn export_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# suggested_k {}", inst.suggested_k);
    let d = inst.pool.first().map_or(0, RationalVector::dim);
    let _ = writeln!(out, "{} {}", d, inst.pool.len());
    for p in &inst.pool {
        let row: Vec<String> = p.coords().iter().map(format_rat).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    let row: Vec<String> = inst.hidden.weights().coords().iter().map(format_rat).collect();
    let _ = writeln!(out, "w: {}", row.join(" "));
    out
}

/// Serializes a witness with one `w:` row per concept, `c_0` first.
pub fn export_witness(w: &WitnessInstance) -> String {
    let mut out = String::new();
    match &w.kind {
        WitnessKind::R3 { m } => {
            let _ = writeln!(out, "# witness_kind r3 {m}");
        }
        WitnessKind::Margin => {
            let _ = writeln!(out, "# witness_kind margin");
        }
        WitnessKind::Custom => {}
    }
    let d = w.pool.first().map_or(0, RationalVector::dim);
    let _ = writeln!(out, "{} {}", d, w.pool.len());
    for p in &w.pool {
        let row: Vec<String> = p.coords().iter().map(format_rat).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    for c in &w.concepts {
        let row: Vec<String> = c.weights().coords().iter().map(format_rat).collect();
        let _ = writeln!(out, "w: {}", row.join(" "));
    }
    out
}

pub fn export(parsed: &ParsedFile) -> String {
    match parsed {
        ParsedFile::Instance(inst) => export_instance(inst),
        ParsedFile::Witness(w) => export_witness(w),
    }
}

/// Parses the text format; one concept row yields an instance, `n + 1` rows
/// a witness.
pub fn parse_instance_text(text: &str) -> Result<ParsedFile> {
    let mut kind: Option<WitnessKind> = None;
    let mut suggested_k: Option<usize> = None;

    // (line number, content) for non-comment, non-empty lines.
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            match words.next() {
                Some("witness_kind") => match words.next() {
                    Some("margin") => kind = Some(WitnessKind::Margin),
                    Some("r3") => {
                        let m = words
                            .next()
                            .and_then(|t| BigInt::from_str(t).ok())
                            .ok_or(Error::Parse {
                                line,
                                msg: "witness_kind r3 needs a base".into(),
                            })?;
                        kind = Some(WitnessKind::R3 { m });
                    }
                    _ => {}
                },
                Some("suggested_k") => {
                    suggested_k = words.next().and_then(|t| t.parse().ok());
                }
                _ => {}
            }
            continue;
        }
        rows.push((line, trimmed));
    }

    let Some(&(header_line, header)) = rows.first() else {
        return Err(Error::Parse {
            line: 1,
            msg: "empty file: expected a \"d n\" header".into(),
        });
    };
    let header_tokens: Vec<&str> = header.split_whitespace().collect();
    let [d, n] = header_tokens[..] else {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("header must be \"d n\", got {header:?}"),
        });
    };
    let parse_usize = |t: &str, what: &str| -> Result<usize> {
        t.parse().map_err(|_| Error::Parse {
            line: header_line,
            msg: format!("{what} must be a nonnegative integer, got {t:?}"),
        })
    };
    let d = parse_usize(d, "dimension")?;
    let n = parse_usize(n, "point count")?;
    if d == 0 {
        return Err(Error::Parse {
            line: header_line,
            msg: "dimension must be at least 1".into(),
        });
    }

    let mut pool = Vec::with_capacity(n);
    let mut concepts: Vec<LinearConcept> = Vec::new();
    for &(line, content) in &rows[1..] {
        if let Some(rest) = content.strip_prefix("w:") {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            concepts.push(LinearConcept::new(parse_vector(&tokens, d, line)?));
        } else {
            if !concepts.is_empty() {
                return Err(Error::Parse {
                    line,
                    msg: "point rows must precede all \"w:\" rows".into(),
                });
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            pool.push(parse_vector(&tokens, d, line)?);
        }
    }
    if pool.len() != n {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("header announces {n} points, file has {}", pool.len()),
        });
    }

    match concepts.len() {
        1 => Ok(ParsedFile::Instance(Instance {
            pool,
            hidden: concepts.pop().expect("one concept"),
            kind: InstanceKind::Custom,
            suggested_k: suggested_k.unwrap_or(4 * d.max(1)),
            note: None,
        })),
        c if c == n + 1 => Ok(ParsedFile::Witness(WitnessInstance {
            pool,
            concepts,
            kind: kind.unwrap_or(WitnessKind::Custom),
        })),
        c => Err(Error::Parse {
            line: header_line,
            msg: format!(
                "expected 1 concept row (instance) or {} (witness, c_0 first), got {c}",
                n + 1
            ),
        }),
    }
}

/// Reads and parses a file from disk.
pub fn parse_instance_file(path: &Path) -> Result<ParsedFile> {
    parse_instance_text(&std::fs::read_to_string(path)?)
}
