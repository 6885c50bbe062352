//! Exact-arithmetic transcription of `h`, used as a test oracle.
//!
//! Runs the raw integer recurrence for `T` and the literal triple loop over
//! near strings, partner strings and the `c_j..=c_i` range, keeping every
//! intermediate as an exact rational. Only the final `GpC` is rounded.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::HeuristicValue;
use crate::error::{Error, Result};
use crate::problem::{hamming_unchecked, Instance};

/// Largest `n` and `m` the oracle accepts.
pub const ORACLE_LIMIT: usize = 64;

/// Raw `T(L, k)` for `L in 0..=max_len`, `k in -L..=L`, stored at
/// `[L][k + max_len]`.
pub fn exact_t_table(max_len: usize, sigma: usize) -> Vec<Vec<BigUint>> {
    let width = 2 * max_len + 1;
    let mut table = vec![vec![BigUint::zero(); width]; max_len + 1];
    table[0][max_len] = BigUint::one();
    let stay = BigUint::from(sigma.saturating_sub(2));
    for len in 1..=max_len {
        for idx in 0..width {
            let mut v = BigUint::zero();
            if idx > 0 {
                v += &table[len - 1][idx - 1];
            }
            v += &stay * &table[len - 1][idx];
            if idx + 1 < width {
                v += &table[len - 1][idx + 1];
            }
            table[len][idx] = v;
        }
    }
    table
}

/// `h(x)` by the literal definition, exact up to the final conversion.
#[allow(clippy::needless_range_loop)]
pub fn h_value_naive(x: &[u8], inst: &Instance) -> Result<HeuristicValue> {
    let (n, m) = (inst.n(), inst.m());
    if n > ORACLE_LIMIT || m > ORACLE_LIMIT {
        return Err(Error::arg("instance exceeds the oracle's size limit"));
    }
    inst.check_candidate(x)?;
    let sigma = inst.sigma();
    let table = exact_t_table(m, sigma);
    let t = |len: usize, k: usize| &table[len][k + m];

    let mut near = 0usize;
    let mut dist = Vec::with_capacity(n);
    let mut comp = Vec::with_capacity(n);
    for s in inst.strings() {
        let d = hamming_unchecked(x, s);
        dist.push(d);
        comp.push(m - d);
        if d < inst.threshold() {
            near += 1;
        }
    }
    let f = n - near;
    if near == 0 {
        return Ok(HeuristicValue::new(n, f, 0.0));
    }
    let mut sum_gpc = BigRational::zero();
    for i in 0..n {
        if dist[i] >= inst.threshold() {
            continue;
        }
        let ci = comp[i];
        let denom = BigInt::from(BigUint::from(sigma).pow(ci as u32));
        let mut g = BigRational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut sum_p = BigUint::zero();
            for c in comp[j]..=ci {
                sum_p += t(ci, c);
            }
            g += BigRational::new(BigInt::from(sum_p), denom.clone());
        }
        sum_gpc += g / BigInt::from(ci);
    }
    let gpc = sum_gpc / BigInt::from(near);
    let gpc = gpc
        .to_f64()
        .ok_or_else(|| Error::InvalidState("GpC not representable as f64".into()))?;
    Ok(HeuristicValue::new(n, f, gpc))
}
