//! The likelihood-weighted surrogate objective `h`.
//!
//! `h(s) = (n + 1)·f(s) + GpC(s)`, where the "gain per change" term
//! `GpC ∈ [0, n]` rewards candidates whose near strings look easy to push
//! past the threshold. Because `GpC < n + 1`, `f(s) > f(s')` always implies
//! `h(s) > h(s')`.
//!
//! `GpC` consumes ratios `T(L, k) / σ^L` of the lattice-walk count
//!
//! ```text
//! T(0, 0) = 1,  T(0, k) = 0 for k != 0
//! T(L, k) = T(L-1, k-1) + (σ-2)·T(L-1, k) + T(L-1, k+1)
//! ```
//!
//! [`HeuristicTables`] runs the recurrence directly on those ratios so every
//! stored value is a probability in `[0, 1]`, and keeps per-row tail sums so
//! each inner range sum of the heuristic is one lookup.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::problem::{build_profile, DistanceProfile, Instance};

pub mod naive;

pub use naive::h_value_naive;

/// Normalized `T` rows for one `(m, σ)` pair.
///
/// Row `L` stores, for `k in 0..=L`, the tail sum
/// `Σ_{c=k..L} T(L, c) / σ^L`. Negative `k` are never stored since
/// `T(L, k) = T(L, -k)`.
#[derive(Debug, Clone)]
pub struct HeuristicTables {
    sigma: usize,
    max_len: usize,
    tails: Vec<f64>,
}

#[inline]
fn row_offset(len: usize) -> usize {
    len * (len + 1) / 2
}

impl HeuristicTables {
    /// Builds rows `0..=m` in O(m²).
    pub fn new(m: usize, sigma: usize) -> Result<Self> {
        if sigma < 2 {
            return Err(Error::arg(format!("alphabet size {sigma} is below 2")));
        }
        if m < 1 {
            return Err(Error::arg("string length must be at least 1"));
        }
        let mut tails = vec![0.0; row_offset(m + 1)];
        let inv_sigma = 1.0 / sigma as f64;
        let stay = (sigma - 2) as f64;

        let mut prev: Vec<f64> = vec![1.0];
        let mut cur: Vec<f64> = Vec::with_capacity(m + 1);
        tails[0] = 1.0;
        for len in 1..=m {
            cur.clear();
            let at = |k: isize| -> f64 {
                let k = k.unsigned_abs();
                prev.get(k).copied().unwrap_or(0.0)
            };
            for k in 0..=len as isize {
                cur.push((at(k - 1) + stay * at(k) + at(k + 1)) * inv_sigma);
            }
            let row = &mut tails[row_offset(len)..row_offset(len + 1)];
            let mut acc = 0.0;
            for k in (0..=len).rev() {
                acc += cur[k];
                row[k] = acc;
            }
            core::mem::swap(&mut prev, &mut cur);
        }
        Ok(HeuristicTables {
            sigma,
            max_len: m,
            tails,
        })
    }

    /// Tables sized for `inst`.
    pub fn for_instance(inst: &Instance) -> Self {
        Self::new(inst.m(), inst.sigma()).expect("instances satisfy m >= 1, sigma >= 2")
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    #[inline]
    fn row(&self, len: usize) -> &[f64] {
        &self.tails[row_offset(len)..row_offset(len + 1)]
    }

    /// `Σ_{c=k..len} T(len, c) / σ^len`; zero when `k > len`.
    #[inline]
    pub fn tail(&self, len: usize, k: usize) -> f64 {
        self.row(len).get(k).copied().unwrap_or(0.0)
    }

    /// `Σ_{c=0..=k} T(len, c) / σ^len`.
    pub fn cumulative(&self, len: usize, k: usize) -> f64 {
        self.tail(len, 0) - self.tail(len, k + 1)
    }

    /// `T(len, k) / σ^len` for any integer `k`.
    pub fn probability(&self, len: usize, k: isize) -> f64 {
        let k = k.unsigned_abs();
        self.tail(len, k) - self.tail(len, k + 1)
    }

    /// `Σ_{c=lo..=hi} T(hi, c) / σ^hi`, zero when `lo > hi`.
    #[inline]
    pub fn range_sum(&self, lo: usize, hi: usize) -> f64 {
        self.tail(hi, lo)
    }

    fn check(&self, inst: &Instance) -> Result<()> {
        if self.sigma != inst.sigma() || self.max_len < inst.m() {
            return Err(Error::arg(format!(
                "tables built for (m={}, sigma={}) cannot serve an instance with (m={}, sigma={})",
                self.max_len,
                self.sigma,
                inst.m(),
                inst.sigma()
            )));
        }
        Ok(())
    }

    /// Evaluates `h` from a profile. Callers guarantee the tables fit `inst`
    /// and the profile belongs to `inst`.
    pub fn evaluate(&self, inst: &Instance, p: &DistanceProfile) -> HeuristicValue {
        let n = inst.n();
        let near = p.near_count();
        let f = n - near;
        let gpc = if near == 0 {
            0.0
        } else {
            let threshold = inst.threshold() as u32;
            let distances = p.distances();
            let comps = p.complements();
            // g_i depends on i only through c_i, so cache it per distinct c.
            let mut memo: Vec<(u32, f64)> = Vec::with_capacity(16);
            let mut sum = 0.0;
            for (i, &ci) in comps.iter().enumerate() {
                if distances[i] >= threshold {
                    continue;
                }
                let g = match memo.iter().find(|(c, _)| *c == ci) {
                    Some(&(_, g)) => g,
                    None => {
                        let row = self.row(ci as usize);
                        let mut acc = 0.0;
                        for &cj in comps {
                            if cj <= ci {
                                acc += row[cj as usize];
                            }
                        }
                        // the loop above also visited j = i
                        let g = 1.0 + (acc - row[ci as usize]);
                        memo.push((ci, g));
                        g
                    }
                };
                sum += g / ci as f64;
            }
            sum / near as f64
        };
        HeuristicValue::new(n, f, gpc)
    }
}

/// `h` split into its objective and gain-per-change parts.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HeuristicValue {
    pub f: usize,
    pub gpc: f64,
    pub total: f64,
}

impl HeuristicValue {
    pub fn new(n: usize, f: usize, gpc: f64) -> Self {
        let total = ((n + 1) * f) as f64 + gpc;
        debug_assert!(gpc >= 0.0 && gpc < (n + 1) as f64, "gpc {gpc} out of range");
        debug_assert_eq!((total / (n + 1) as f64) as usize, f);
        HeuristicValue { f, gpc, total }
    }
}

/// Checked evaluation of `h` from a profile.
pub fn h_value(
    p: &DistanceProfile,
    inst: &Instance,
    tables: &HeuristicTables,
) -> Result<HeuristicValue> {
    tables.check(inst)?;
    if p.distances().len() != inst.n() {
        return Err(Error::arg("profile does not belong to this instance"));
    }
    Ok(tables.evaluate(inst, p))
}

/// Builds the profile of `x` and evaluates `h`.
pub fn h_of(x: &[u8], inst: &Instance, tables: &HeuristicTables) -> Result<HeuristicValue> {
    let p = build_profile(x, inst)?;
    h_value(&p, inst, tables)
}
