//! Variation and improvement operators.
//!
//! The string-level functions (`path_relinking`, `hill_climb`, ...) are the
//! public contract. The engine uses the `*_individual` forms, which carry a
//! profile and `h` value along so every candidate move costs one O(n)
//! profile update plus one `h` evaluation.

use alloc::vec::Vec;

use rand::Rng;

use crate::budget::Budget;
use crate::engine::Individual;
use crate::error::{Error, Result};
use crate::heuristic::HeuristicTables;
use crate::problem::{CandidateString, Instance};

/// Pending path-relinking moves `(position, symbol of the guiding string)`,
/// kept in increasing position order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSet {
    moves: Vec<(usize, u8)>,
}

impl MoveSet {
    /// Positions where `from` and `towards` differ, with the target symbol.
    pub fn between(from: &[u8], towards: &[u8]) -> Self {
        let moves = from
            .iter()
            .zip(towards)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, (_, &b))| (i, b))
            .collect();
        MoveSet { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn moves(&self) -> &[(usize, u8)] {
        &self.moves
    }

    fn take(&mut self, idx: usize) -> (usize, u8) {
        self.moves.remove(idx)
    }
}

fn check_same_len(a: &[u8], b: &[u8]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::arg("parents have different lengths"));
    }
    Ok(())
}

/// Path relinking between two evaluated parents.
///
/// Walks from the worse parent towards the better one, always taking the
/// pending move with the highest `h` (ties: lowest position). Returns the
/// best string met on the path, which is never worse than the better
/// parent. Stops early, returning the best so far, when `budget` runs out.
pub fn path_relink_individuals(
    p1: &Individual,
    p2: &Individual,
    inst: &Instance,
    tables: &HeuristicTables,
    budget: &mut Budget<'_>,
) -> Individual {
    let (initiating, guiding) = if p2.h.total > p1.h.total {
        (p1, p2)
    } else {
        (p2, p1)
    };
    let mut best = guiding.clone();
    let mut current = initiating.clone();
    let mut delta = MoveSet::between(&current.string, &guiding.string);

    'path: while !delta.is_empty() {
        let mut chosen: Option<(usize, f64)> = None;
        let mut chosen_value = None;
        for (k, &(pos, sym)) in delta.moves().iter().enumerate() {
            if budget.exhausted() {
                break 'path;
            }
            let old = current.string.0[pos];
            current.profile.substitute(inst, pos, old, sym);
            let value = tables.evaluate(inst, &current.profile);
            budget.charge();
            current.profile.substitute(inst, pos, sym, old);
            if chosen.is_none_or(|(_, v)| value.total > v) {
                chosen = Some((k, value.total));
                chosen_value = Some(value);
            }
        }
        let (k, _) = chosen.expect("move set is nonempty");
        let (pos, sym) = delta.take(k);
        let old = current.string.0[pos];
        current.profile.substitute(inst, pos, old, sym);
        current.string.0[pos] = sym;
        current.h = chosen_value.expect("set together with chosen");
        if current.h.total > best.h.total {
            best = current.clone();
        }
    }
    best
}

/// Path-relinking crossover on plain strings, without a budget.
pub fn path_relinking(
    p1: &CandidateString,
    p2: &CandidateString,
    inst: &Instance,
    tables: &HeuristicTables,
) -> Result<CandidateString> {
    check_same_len(p1, p2)?;
    let a = Individual::evaluate(p1.clone(), inst, tables)?;
    let b = Individual::evaluate(p2.clone(), inst, tables)?;
    let mut budget = Budget::unlimited();
    Ok(path_relink_individuals(&a, &b, inst, tables, &mut budget).string)
}

/// Uniform crossover: each position comes from either parent with
/// probability 1/2.
pub fn uniform_crossover<R: Rng + ?Sized>(
    p1: &[u8],
    p2: &[u8],
    rng: &mut R,
) -> Result<CandidateString> {
    check_same_len(p1, p2)?;
    Ok(CandidateString(
        p1.iter()
            .zip(p2)
            .map(|(&a, &b)| if rng.gen_bool(0.5) { a } else { b })
            .collect(),
    ))
}

/// Redraws each position, with probability `p_m`, uniformly from all
/// `sigma` symbols. A redraw may land on the symbol already there.
pub fn mutate<R: Rng + ?Sized>(
    s: &[u8],
    sigma: usize,
    p_m: f64,
    rng: &mut R,
) -> Result<CandidateString> {
    if !(0.0..=1.0).contains(&p_m) {
        return Err(Error::arg("mutation probability must lie in [0, 1]"));
    }
    let mut out = s.to_vec();
    mutate_in_place(&mut out, sigma as u8, p_m, rng);
    Ok(CandidateString(out))
}

pub(crate) fn mutate_in_place<R: Rng + ?Sized>(s: &mut [u8], sigma: u8, p_m: f64, rng: &mut R) {
    if p_m <= 0.0 {
        return;
    }
    for c in s.iter_mut() {
        if rng.gen_bool(p_m) {
            *c = rng.gen_range(0..sigma);
        }
    }
}

/// First-improvement hill climbing over single-symbol substitutions.
///
/// Sweeps positions in order and, at each position, the other symbols in
/// alphabet order, keeping any move that strictly raises `h` and carrying
/// on from there. Sweeps repeat until one passes with no improvement, at
/// which point no single substitution improves `h`. An exhausted budget
/// stops the climb between moves.
pub fn hill_climb_individual(
    mut ind: Individual,
    inst: &Instance,
    tables: &HeuristicTables,
    budget: &mut Budget<'_>,
) -> Individual {
    let sigma = inst.sigma() as u8;
    let mut improved = true;
    'climb: while improved {
        improved = false;
        for j in 0..inst.m() {
            for c in 0..sigma {
                let old = ind.string.0[j];
                if c == old {
                    continue;
                }
                if budget.exhausted() {
                    break 'climb;
                }
                ind.profile.substitute(inst, j, old, c);
                let value = tables.evaluate(inst, &ind.profile);
                budget.charge();
                if value.total > ind.h.total {
                    ind.string.0[j] = c;
                    ind.h = value;
                    improved = true;
                } else {
                    ind.profile.substitute(inst, j, c, old);
                }
            }
        }
    }
    debug_assert!(ind.is_consistent(inst, tables));
    ind
}

/// Hill climbing on a plain string.
pub fn hill_climb(
    s: &CandidateString,
    inst: &Instance,
    tables: &HeuristicTables,
    budget: &mut Budget<'_>,
) -> Result<CandidateString> {
    inst.check_candidate(s)?;
    let ind = Individual::evaluate(s.clone(), inst, tables)?;
    Ok(hill_climb_individual(ind, inst, tables, budget).string)
}
