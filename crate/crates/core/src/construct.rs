//! GRASP randomized-greedy construction.
//!
//! Each position picks uniformly among the symbols that are rare in that
//! column of the instance. The greediness knob `alpha` bounds `beta`, which
//! sets how far above the column minimum a symbol's count may be and still
//! enter the restricted candidate list.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::problem::{CandidateString, Instance};

/// Per-position symbol counts `V_j(c)` with their minima and maxima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnCounts {
    sigma: usize,
    counts: Vec<u32>,
    v_min: Vec<u32>,
    v_max: Vec<u32>,
}

impl ColumnCounts {
    /// Occurrences of symbol `c` at position `j`.
    pub fn count(&self, j: usize, c: u8) -> u32 {
        self.counts[j * self.sigma + c as usize]
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.counts[j * self.sigma..(j + 1) * self.sigma]
    }

    pub fn v_min(&self, j: usize) -> u32 {
        self.v_min[j]
    }

    pub fn v_max(&self, j: usize) -> u32 {
        self.v_max[j]
    }

    pub fn len(&self) -> usize {
        self.v_min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_min.is_empty()
    }

    /// Restricted candidate list of position `j` for a given `beta`:
    /// symbols whose count is at most `v_min + beta·(v_max - v_min)`.
    pub fn candidate_list(&self, j: usize, beta: f64) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.sigma);
        self.fill_candidates(j, beta, &mut out);
        out
    }

    fn fill_candidates(&self, j: usize, beta: f64, out: &mut Vec<u8>) {
        let lo = self.v_min[j] as f64;
        let mu = lo + beta * (self.v_max[j] as f64 - lo);
        out.clear();
        out.extend(
            self.column(j)
                .iter()
                .enumerate()
                .filter(|(_, &v)| v as f64 <= mu)
                .map(|(c, _)| c as u8),
        );
    }
}

/// Counts every symbol of every column. O(n·m).
pub fn column_counts(inst: &Instance) -> ColumnCounts {
    let (m, sigma) = (inst.m(), inst.sigma());
    let mut counts = vec![0u32; m * sigma];
    for j in 0..m {
        let row = &mut counts[j * sigma..(j + 1) * sigma];
        for &c in inst.column(j) {
            row[c as usize] += 1;
        }
    }
    let v_min = counts
        .chunks_exact(sigma)
        .map(|col| *col.iter().min().expect("sigma >= 2"))
        .collect();
    let v_max = counts
        .chunks_exact(sigma)
        .map(|col| *col.iter().max().expect("sigma >= 2"))
        .collect();
    ColumnCounts {
        sigma,
        counts,
        v_min,
        v_max,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraspParams {
    alpha: f64,
}

impl GraspParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::arg(format!("alpha {alpha} must lie in [0, 1]")));
        }
        Ok(GraspParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Builds one string. `beta` is drawn once per call from `[0, alpha]`.
pub fn grasp_construct<R: Rng + ?Sized>(
    counts: &ColumnCounts,
    params: GraspParams,
    rng: &mut R,
) -> CandidateString {
    let beta = if params.alpha > 0.0 {
        rng.gen_range(0.0..=params.alpha)
    } else {
        0.0
    };
    let mut rcl: Vec<u8> = Vec::with_capacity(counts.sigma);
    let out = (0..counts.len())
        .map(|j| {
            counts.fill_candidates(j, beta, &mut rcl);
            debug_assert!(!rcl.is_empty());
            rcl[rng.gen_range(0..rcl.len())]
        })
        .collect();
    CandidateString(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{objective_f, Alphabet};
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn aaa() -> Instance {
        let a = Alphabet::dna();
        let s = [b"AAA", b"AAC", b"AAG"]
            .iter()
            .map(|s| a.encode(*s).unwrap().0)
            .collect();
        Instance::new(a, s, 2, "aaa").unwrap()
    }

    #[test]
    fn counts_examples() {
        let cc = column_counts(&aaa());
        assert_eq!(cc.column(0), &[3, 0, 0, 0]);
        assert_eq!((cc.v_min(0), cc.v_max(0)), (0, 3));
        assert_eq!(cc.column(2), &[1, 1, 1, 0]);
        assert_eq!((cc.v_min(2), cc.v_max(2)), (0, 1));
        for j in 0..3 {
            assert_eq!(cc.column(j).iter().sum::<u32>(), 3);
        }
    }

    #[test]
    fn greedy_construction_uses_rarest_symbols() {
        let inst = aaa();
        let cc = column_counts(&inst);
        let params = GraspParams::new(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let s = grasp_construct(&cc, params, &mut rng);
            assert_ne!(s[0], 0);
            assert_ne!(s[1], 0);
            assert_eq!(s[2], 3);
            for j in 0..3 {
                assert_eq!(cc.count(j, s[j]), cc.v_min(j));
            }
        }
    }

    #[test]
    fn full_randomness_admits_everything() {
        let cc = column_counts(&aaa());
        for j in 0..3 {
            assert_eq!(cc.candidate_list(j, 1.0), vec![0, 1, 2, 3]);
        }
        assert_eq!(cc.candidate_list(2, 0.0), vec![3]);
        assert_eq!(cc.candidate_list(0, 0.5), vec![1, 2, 3]);
    }

    #[test]
    fn seeded_output_repeats() {
        let inst =
            crate::problem::generate_random_instance(20, 40, 0.8, Alphabet::dna(), 1).unwrap();
        let cc = column_counts(&inst);
        let params = GraspParams::new(0.3).unwrap();
        let a = grasp_construct(&cc, params, &mut ChaCha8Rng::seed_from_u64(9));
        let b = grasp_construct(&cc, params, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(a.len(), 40);
        assert!(objective_f(&a, &inst).is_ok());
    }

    #[test]
    fn alpha_bounds() {
        assert!(GraspParams::new(-0.1).is_err());
        assert!(GraspParams::new(1.1).is_err());
        assert!(GraspParams::new(f64::NAN).is_err());
    }
}
