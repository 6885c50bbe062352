//! Instances, candidate strings and the exact FFMSP objective.
//!
//! Strings are stored as alphabet indices (`0..sigma`), never as characters.
//! Conversion happens at the IO boundary through [`Alphabet`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Maximum number of attempts when drawing a clean genome window.
pub const WINDOW_RETRIES: usize = 1000;

/// Ordered set of distinct single-byte symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    lookup: [Option<u8>; 256],
}

impl Alphabet {
    pub fn new(symbols: &[u8]) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(Error::arg("alphabet needs at least two symbols"));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::arg("alphabet has more than 255 symbols"));
        }
        let mut lookup = [None; 256];
        for (idx, &sym) in symbols.iter().enumerate() {
            if !sym.is_ascii_graphic() {
                return Err(Error::arg(format!(
                    "alphabet symbol {sym:#04x} is not a printable ASCII character"
                )));
            }
            if lookup[sym as usize].is_some() {
                return Err(Error::arg(format!(
                    "alphabet symbol '{}' appears twice",
                    sym as char
                )));
            }
            lookup[sym as usize] = Some(idx as u8);
        }
        Ok(Alphabet {
            symbols: symbols.to_vec(),
            lookup,
        })
    }

    /// The DNA alphabet `ACGT`.
    pub fn dna() -> Self {
        Self::new(b"ACGT").expect("ACGT is a valid alphabet")
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn index_of(&self, symbol: u8) -> Option<u8> {
        self.lookup[symbol as usize]
    }

    pub fn symbol(&self, index: u8) -> Option<u8> {
        self.symbols.get(index as usize).copied()
    }

    /// Maps a character string to alphabet indices.
    pub fn encode(&self, text: &[u8]) -> Result<CandidateString> {
        text.iter()
            .map(|&b| {
                self.index_of(b).ok_or_else(|| {
                    Error::arg(format!("symbol '{}' is not in the alphabet", b as char))
                })
            })
            .collect::<Result<Vec<u8>>>()
            .map(CandidateString)
    }

    /// Maps alphabet indices back to characters. Panics on an invalid index.
    pub fn decode(&self, indices: &[u8]) -> String {
        indices
            .iter()
            .map(|&i| self.symbols[i as usize] as char)
            .collect()
    }
}

impl core::fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_tuple("Alphabet")
            .field(&core::str::from_utf8(&self.symbols).unwrap_or("?"))
            .finish()
    }
}

/// A string of `m` alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CandidateString(pub Vec<u8>);

impl CandidateString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for CandidateString {
    fn from(v: Vec<u8>) -> Self {
        CandidateString(v)
    }
}

impl core::ops::Deref for CandidateString {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

/// An FFMSP instance `(alphabet, strings, d)`.
///
/// Strings are kept twice: row-major for whole-string distance computations
/// and column-major so single-position updates touch contiguous memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    alphabet: Alphabet,
    n: usize,
    m: usize,
    threshold: usize,
    rows: Vec<u8>,
    columns: Vec<u8>,
    id: String,
}

impl Instance {
    /// Builds an instance from index-encoded strings.
    pub fn new(
        alphabet: Alphabet,
        strings: Vec<Vec<u8>>,
        threshold: usize,
        id: impl Into<String>,
    ) -> Result<Self> {
        let n = strings.len();
        if n < 2 {
            return Err(Error::arg("an instance needs at least two strings"));
        }
        let m = strings[0].len();
        if m == 0 {
            return Err(Error::arg("strings must be nonempty"));
        }
        if threshold < 1 || threshold > m {
            return Err(Error::arg(format!(
                "threshold d={threshold} must lie in 1..={m}"
            )));
        }
        let sigma = alphabet.size();
        let mut rows = Vec::with_capacity(n * m);
        for (i, s) in strings.iter().enumerate() {
            if s.len() != m {
                return Err(Error::arg(format!(
                    "string {} has length {}, expected {m}",
                    i + 1,
                    s.len()
                )));
            }
            if let Some(&bad) = s.iter().find(|&&c| c as usize >= sigma) {
                return Err(Error::arg(format!(
                    "string {} holds symbol index {bad} outside the alphabet",
                    i + 1
                )));
            }
            rows.extend_from_slice(s);
        }
        let mut columns = vec![0u8; n * m];
        for i in 0..n {
            for j in 0..m {
                columns[j * n + i] = rows[i * m + j];
            }
        }
        Ok(Instance {
            alphabet,
            n,
            m,
            threshold,
            rows,
            columns,
            id: id.into(),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.size()
    }

    /// Number of strings.
    pub fn n(&self) -> usize {
        self.n
    }

    /// String length.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Distance threshold `d`.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    /// The `i`-th input string (0-based).
    pub fn string(&self, i: usize) -> &[u8] {
        &self.rows[i * self.m..(i + 1) * self.m]
    }

    pub fn strings(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.rows.chunks_exact(self.m)
    }

    /// Symbols of every input string at position `j`.
    pub fn column(&self, j: usize) -> &[u8] {
        &self.columns[j * self.n..(j + 1) * self.n]
    }

    fn check_len(&self, x: &[u8]) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::arg(format!(
                "candidate has length {}, instance strings have length {}",
                x.len(),
                self.m
            )));
        }
        Ok(())
    }

    /// Checks length and symbol validity of a candidate.
    pub fn check_candidate(&self, x: &[u8]) -> Result<()> {
        self.check_len(x)?;
        let sigma = self.sigma();
        if x.iter().any(|&c| c as usize >= sigma) {
            return Err(Error::arg("candidate holds a symbol outside the alphabet"));
        }
        Ok(())
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming(a: &[u8], b: &[u8]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::arg(format!(
            "hamming distance of strings with lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(hamming_unchecked(a, b))
}

#[inline]
pub(crate) fn hamming_unchecked(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Number of input strings at Hamming distance `>= d` from `x`.
pub fn objective_f(x: &[u8], inst: &Instance) -> Result<usize> {
    inst.check_len(x)?;
    Ok(inst
        .strings()
        .filter(|s| hamming_unchecked(x, s) >= inst.threshold)
        .count())
}

/// Per-string distances of one candidate, with the derived near/far counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    distances: Vec<u32>,
    complements: Vec<u32>,
    near_count: usize,
}

impl DistanceProfile {
    /// Hamming distance to each input string.
    pub fn distances(&self) -> &[u32] {
        &self.distances
    }

    /// `m - d_i` for each input string, i.e. the number of agreeing positions.
    pub fn complements(&self) -> &[u32] {
        &self.complements
    }

    /// Number of input strings with distance below the threshold.
    pub fn near_count(&self) -> usize {
        self.near_count
    }

    /// Objective value `n - near_count`.
    pub fn f(&self) -> usize {
        self.distances.len() - self.near_count
    }

    /// Applies the substitution `x[pos]: old -> new` in place. O(n).
    ///
    /// `old` must be the symbol currently at `pos` in the string this
    /// profile describes.
    #[inline]
    pub fn substitute(&mut self, inst: &Instance, pos: usize, old: u8, new: u8) {
        if old == new {
            return;
        }
        let threshold = inst.threshold as u32;
        let column = inst.column(pos);
        for (i, &r) in column.iter().enumerate() {
            if r == old {
                let d = self.distances[i] + 1;
                self.distances[i] = d;
                self.complements[i] -= 1;
                if d == threshold {
                    self.near_count -= 1;
                }
            } else if r == new {
                let d = self.distances[i] - 1;
                self.distances[i] = d;
                self.complements[i] += 1;
                if d + 1 == threshold {
                    self.near_count += 1;
                }
            }
        }
    }
}

/// Computes the distance profile of `x` from scratch. O(n·m).
pub fn build_profile(x: &[u8], inst: &Instance) -> Result<DistanceProfile> {
    inst.check_len(x)?;
    Ok(build_profile_unchecked(x, inst))
}

pub(crate) fn build_profile_unchecked(x: &[u8], inst: &Instance) -> DistanceProfile {
    let m = inst.m as u32;
    let distances: Vec<u32> = inst
        .strings()
        .map(|s| hamming_unchecked(x, s) as u32)
        .collect();
    let complements = distances.iter().map(|&d| m - d).collect();
    let near_count = distances
        .iter()
        .filter(|&&d| (d as usize) < inst.threshold)
        .count();
    DistanceProfile {
        distances,
        complements,
        near_count,
    }
}

/// Profile of `x` with position `pos` set to `new_symbol`, derived from the
/// profile `p` of `x` in O(n). `x` itself is left untouched.
pub fn update_profile(
    p: &DistanceProfile,
    x: &[u8],
    pos: usize,
    new_symbol: u8,
    inst: &Instance,
) -> Result<DistanceProfile> {
    inst.check_len(x)?;
    if pos >= inst.m {
        return Err(Error::arg(format!(
            "position {pos} out of range for length {}",
            inst.m
        )));
    }
    if new_symbol as usize >= inst.sigma() {
        return Err(Error::arg(format!(
            "symbol index {new_symbol} outside alphabet of size {}",
            inst.sigma()
        )));
    }
    if p.distances.len() != inst.n {
        return Err(Error::arg("profile does not belong to this instance"));
    }
    let mut out = p.clone();
    out.substitute(inst, pos, x[pos], new_symbol);
    Ok(out)
}

/// `round(fraction * m)` with halves rounded up.
pub fn threshold_from_fraction(fraction: f64, m: usize) -> Result<usize> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::arg(format!(
            "distance fraction {fraction} must lie in (0, 1]"
        )));
    }
    let d = (fraction * m as f64 + 0.5) as usize;
    Ok(d.clamp(1, m))
}

fn check_shape(n: usize, m: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::arg("n must be at least 2"));
    }
    if m < 1 {
        return Err(Error::arg("m must be at least 1"));
    }
    Ok(())
}

/// Default instance label, `<source>_n<n>_m<m>_d<d>_s<seed>`.
pub fn instance_label(source: &str, n: usize, m: usize, d: usize, seed: u64) -> String {
    format!("{source}_n{n}_m{m}_d{d}_s{seed}")
}

/// Uniformly random instance: every symbol i.i.d. over the alphabet.
pub fn generate_random_instance(
    n: usize,
    m: usize,
    d_fraction: f64,
    alphabet: Alphabet,
    seed: u64,
) -> Result<Instance> {
    check_shape(n, m)?;
    let d = threshold_from_fraction(d_fraction, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = alphabet.size() as u8;
    let strings = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0..sigma)).collect())
        .collect();
    Instance::new(alphabet, strings, d, instance_label("rand", n, m, d, seed))
}

/// Slices `n` consecutive strings of length `m` out of a seeded-random
/// window of `sequence` (raw characters, e.g. a genome).
///
/// Windows holding a character outside `alphabet` are rejected and redrawn,
/// at most [`WINDOW_RETRIES`] times.
pub fn extract_real_instance(
    sequence: &[u8],
    alphabet: Alphabet,
    n: usize,
    m: usize,
    d_fraction: f64,
    seed: u64,
) -> Result<Instance> {
    check_shape(n, m)?;
    let d = threshold_from_fraction(d_fraction, m)?;
    let window = n
        .checked_mul(m)
        .ok_or_else(|| Error::arg("n·m overflows"))?;
    if sequence.len() < window {
        return Err(Error::arg(format!(
            "sequence has {} symbols, a window needs n·m = {window}",
            sequence.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last_start = sequence.len() - window;
    for _ in 0..WINDOW_RETRIES {
        let start = rng.gen_range(0..=last_start);
        let Ok(encoded) = alphabet.encode(&sequence[start..start + window]) else {
            continue;
        };
        let strings = encoded.0.chunks_exact(m).map(<[u8]>::to_vec).collect();
        return Instance::new(alphabet, strings, d, instance_label("real", n, m, d, seed));
    }
    Err(Error::arg(format!(
        "no window of {window} symbols free of non-alphabet characters after {WINDOW_RETRIES} draws"
    )))
}
