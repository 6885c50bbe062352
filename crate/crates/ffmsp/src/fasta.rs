//! Minimal FASTA reader.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub name: String,
    pub sequence: Vec<u8>,
}

/// Parses FASTA text. Sequence lines are concatenated per record, all
/// whitespace is dropped and symbols are uppercased. The record name is the
/// header line after `>`, trimmed.
pub fn parse_fasta(bytes: &[u8]) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for (idx, line) in bytes.split(|&b| b == b'\n').enumerate() {
        if let Some(header) = line.strip_prefix(b">") {
            records.push(FastaRecord {
                name: String::from_utf8_lossy(header).trim().to_string(),
                sequence: Vec::new(),
            });
            continue;
        }
        let mut symbols = line
            .iter()
            .filter(|b| !b.is_ascii_whitespace())
            .map(u8::to_ascii_uppercase)
            .peekable();
        if symbols.peek().is_none() {
            continue;
        }
        let Some(rec) = records.last_mut() else {
            return Err(Error::parse(
                idx + 1,
                "sequence data before the first '>' header",
            ));
        };
        rec.sequence.extend(symbols);
    }
    if records.is_empty() {
        return Err(Error::parse(1, "no FASTA records found"));
    }
    Ok(records)
}

/// All records joined into one stream, with `separator` between records so
/// that windows spanning two records can be recognised and skipped.
pub fn joined_sequence(records: &[FastaRecord], separator: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(records.iter().map(|r| r.sequence.len() + 1).sum());
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push(separator);
        }
        out.extend_from_slice(&r.sequence);
    }
    out
}
