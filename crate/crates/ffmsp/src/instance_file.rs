//! Plain-text instance files.
//!
//! ```text
//! n m d
//! ACGT
//! <n lines of exactly m alphabet characters>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use ffmsp_core::problem::{Alphabet, Instance};

use crate::error::{Error, Result};

/// Parses an instance file. `id` becomes the instance label.
pub fn read_instance(text: &str, id: &str) -> Result<Instance> {
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l));

    let (ln, header) = lines
        .next()
        .filter(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::parse(1, "missing `n m d` header"))?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::parse(ln, format!("header: {e}")))?;
    let [n, m, d] = fields[..] else {
        return Err(Error::parse(
            ln,
            "header must hold exactly three integers `n m d`",
        ));
    };
    if n < 2 {
        return Err(Error::parse(
            ln,
            format!("n = {n}, need at least 2 strings"),
        ));
    }
    if m < 1 {
        return Err(Error::parse(ln, "m must be at least 1"));
    }
    if d < 1 || d > m {
        return Err(Error::parse(ln, format!("d = {d} must lie in 1..={m}")));
    }

    let (ln, alpha_line) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing alphabet line"))?;
    let alphabet =
        Alphabet::new(alpha_line.trim().as_bytes()).map_err(|e| Error::parse(ln, e.to_string()))?;

    let mut strings = Vec::with_capacity(n);
    for k in 0..n {
        let Some((ln, line)) = lines.next().filter(|(_, l)| !l.is_empty()) else {
            return Err(Error::parse(
                k + 3,
                format!("file declares n = {n} strings but holds only {k}"),
            ));
        };
        if line.len() != m {
            return Err(Error::parse(
                ln,
                format!("string has length {}, expected m = {m}", line.len()),
            ));
        }
        let encoded = alphabet
            .encode(line.as_bytes())
            .map_err(|e| Error::parse(ln, e.to_string()))?;
        strings.push(encoded.0);
    }
    if let Some((ln, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(
            ln,
            format!("file declares n = {n} strings but holds more"),
        ));
    }
    Instance::new(alphabet, strings, d, id).map_err(Error::from)
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::with_capacity((inst.m() + 1) * (inst.n() + 2));
    let _ = writeln!(out, "{} {} {}", inst.n(), inst.m(), inst.threshold());
    out.push_str(std::str::from_utf8(inst.alphabet().symbols()).expect("ASCII alphabet"));
    out.push('\n');
    for s in inst.strings() {
        out.push_str(&inst.alphabet().decode(s));
        out.push('\n');
    }
    out
}

/// Reads an instance file, labelling it with the file stem.
pub fn load(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_instance(&text, &id).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

pub fn save(inst: &Instance, path: &Path) -> Result<()> {
    std::fs::write(path, write_instance(inst)).map_err(|e| Error::io(path, e))
}
