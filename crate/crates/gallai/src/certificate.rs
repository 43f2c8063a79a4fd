//! Text certificates and the avoid-list mini language.
//!
//! A certificate serializes one coloring:
//!
//! ```text
//! GRHC 1
//! uniformity 3
//! order 4
//! colors 1
//! provenance search
//! data
//! 1 1 1 1
//! end
//! ```
//!
//! The provenance line is optional. Color entries appear in colex rank order,
//! separated by single spaces and LF newlines; the writer wraps them at 16
//! per line so equal colorings with equal provenance always produce identical
//! bytes. Patterns are written `K<q>` (complete) or `K<q>-e` (complete minus
//! one hyperedge).

use std::fmt;

use crate::colex::binomial;
use crate::error::{Error, Result};
use crate::hypergraph::{ColoredCompleteHypergraph, TargetPattern};

const MAGIC: &str = "GRHC 1";
const VALUES_PER_LINE: usize = 16;

/// A parsed certificate: the coloring plus whatever provenance the producer
/// recorded. The format version is fixed at 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub coloring: ColoredCompleteHypergraph,
    pub provenance: Option<String>,
}

/// Serialize a coloring. Deterministic: equal inputs give equal bytes.
/// Empty provenance is treated as absent.
pub fn write_certificate(
    c: &ColoredCompleteHypergraph,
    provenance: Option<&str>,
) -> Result<String> {
    if let Some(p) = provenance {
        if p.contains('\n') || p.contains('\r') {
            return Err(Error::ProvenanceNewline);
        }
    }
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("uniformity {}\n", c.uniformity()));
    out.push_str(&format!("order {}\n", c.order()));
    out.push_str(&format!("colors {}\n", c.color_count()));
    if let Some(p) = provenance.filter(|p| !p.is_empty()) {
        out.push_str(&format!("provenance {p}\n"));
    }
    out.push_str("data\n");
    for chunk in c.colors().chunks(VALUES_PER_LINE) {
        let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.push_str("end\n");
    Ok(out)
}

/// Parse certificate text produced by [`write_certificate`] or by hand.
pub fn read_certificate(text: &str) -> Result<Certificate> {
    if text.contains('\r') {
        return Err(Error::CertFormat {
            line: 0,
            reason: "carriage returns are not part of the format".into(),
        });
    }
    let mut lines = text.split('\n').enumerate();
    let mut next_line = |expect: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((idx, l)) => Ok((idx + 1, l.to_string())),
            None => Err(Error::CertFormat {
                line: 0,
                reason: format!("unexpected end of input, expected {expect}"),
            }),
        }
    };

    let (ln, magic) = next_line("magic header")?;
    if magic != MAGIC {
        return Err(Error::CertFormat {
            line: ln,
            reason: format!("expected `{MAGIC}`"),
        });
    }
    let parse_field = |line: usize, text: &str, key: &str| -> Result<u64> {
        let rest = text.strip_prefix(key).and_then(|s| s.strip_prefix(' '));
        match rest.and_then(|s| s.parse::<u64>().ok()) {
            Some(v) => Ok(v),
            None => Err(Error::CertFormat {
                line,
                reason: format!("expected `{key} <number>`"),
            }),
        }
    };
    let (ln, l) = next_line("uniformity")?;
    let r = parse_field(ln, &l, "uniformity")? as usize;
    let (ln, l) = next_line("order")?;
    let n = parse_field(ln, &l, "order")? as usize;
    let (ln, l) = next_line("colors")?;
    let t_raw = parse_field(ln, &l, "colors")?;
    let t = u16::try_from(t_raw).map_err(|_| Error::CertFormat {
        line: ln,
        reason: format!("palette size {t_raw} too large"),
    })?;

    let (ln, l) = next_line("data")?;
    let (provenance, data_line) = if let Some(rest) = l.strip_prefix("provenance ") {
        (Some(rest.to_string()), next_line("data")?)
    } else {
        (None, (ln, l))
    };
    if data_line.1 != "data" {
        return Err(Error::CertFormat {
            line: data_line.0,
            reason: "expected `data`".into(),
        });
    }

    let mut colors: Vec<u16> = Vec::new();
    let mut saw_end = false;
    for (idx, l) in lines.by_ref() {
        if l == "end" {
            saw_end = true;
            break;
        }
        for tok in l.split_whitespace() {
            let v: u64 = tok.parse().map_err(|_| Error::CertFormat {
                line: idx + 1,
                reason: format!("bad color entry `{tok}`"),
            })?;
            let v = u16::try_from(v).map_err(|_| Error::CertFormat {
                line: idx + 1,
                reason: format!("color entry {v} too large"),
            })?;
            colors.push(v);
        }
    }
    if !saw_end {
        return Err(Error::CertFormat {
            line: 0,
            reason: "unexpected end of input, expected `end`".into(),
        });
    }
    for (idx, l) in lines {
        if !l.is_empty() {
            return Err(Error::CertFormat {
                line: idx + 1,
                reason: "trailing content after `end`".into(),
            });
        }
    }

    if r >= 2 && n >= r {
        let expected = binomial(n, r);
        if colors.len() != expected {
            return Err(Error::CertDataCount {
                expected,
                got: colors.len(),
            });
        }
    }
    // Dimension and palette errors surface through the constructor.
    let coloring = ColoredCompleteHypergraph::new(n, r, t, colors)?;
    Ok(Certificate {
        coloring,
        provenance,
    })
}

/// Parse `K<q>` or `K<q>-e` and validate it against the uniformity in use.
pub fn parse_pattern(text: &str, r: usize) -> Result<TargetPattern> {
    let bad = |reason: &str| Error::BadPattern {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let body = text
        .strip_prefix('K')
        .ok_or_else(|| bad("expected K<q> or K<q>-e"))?;
    let (digits, minus) = match body.strip_suffix("-e") {
        Some(d) => (d, true),
        None => (body, false),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad("expected K<q> or K<q>-e"));
    }
    let order: usize = digits
        .parse()
        .map_err(|_| bad("order does not fit a machine word"))?;
    let pattern = if minus {
        TargetPattern::minus_one(order)
    } else {
        TargetPattern::complete(order)
    };
    pattern.validate_for(r)?;
    Ok(pattern)
}

/// One avoidance target per color, in color order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidList(Vec<TargetPattern>);

impl AvoidList {
    pub fn new(patterns: Vec<TargetPattern>) -> Self {
        AvoidList(patterns)
    }

    /// Parse a comma-separated pattern list, e.g. `K4-e,K4-e,K4,K4`.
    pub fn parse(text: &str, r: usize) -> Result<Self> {
        let patterns: Result<Vec<_>> = text.split(',').map(|p| parse_pattern(p, r)).collect();
        Ok(AvoidList(patterns?))
    }

    pub fn patterns(&self) -> &[TargetPattern] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for AvoidList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
