//! Cross-checks of the core against independent oracles: brute-force
//! distances, exact-integer recurrence rows, the exact-rational heuristic and
//! exhaustive neighbourhood enumeration.

use ffmsp_core::budget::Budget;
use ffmsp_core::construct::{column_counts, grasp_construct, GraspParams};
use ffmsp_core::heuristic::{h_of, h_value, h_value_naive, HeuristicTables};
use ffmsp_core::operators::{hill_climb, mutate, path_relinking, uniform_crossover};
use ffmsp_core::problem::{
    build_profile, generate_random_instance, hamming, objective_f, update_profile, Alphabet,
    CandidateString, Instance,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Raw T(L, k) for k in -L..=L via exact integers; index k + max_len.
fn exact_rows(max_len: usize, sigma: i128) -> Vec<Vec<i128>> {
    let width = 2 * max_len + 1;
    let mut t = vec![vec![0i128; width]; max_len + 1];
    t[0][max_len] = 1;
    for len in 1..=max_len {
        for k in 0..width {
            let left = if k > 0 { t[len - 1][k - 1] } else { 0 };
            let right = if k + 1 < width { t[len - 1][k + 1] } else { 0 };
            t[len][k] = left + (sigma - 2) * t[len - 1][k] + right;
        }
    }
    t
}

fn alphabet(sigma: usize) -> Alphabet {
    Alphabet::new(&b"ACGTEFHIKLMNPQRSVWY*"[..sigma]).unwrap()
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, sigma: usize) -> Instance {
    let strings = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0..sigma as u8)).collect())
        .collect();
    let d = rng.gen_range(1..=m);
    Instance::new(alphabet(sigma), strings, d, "rnd").unwrap()
}

fn random_string(rng: &mut ChaCha8Rng, m: usize, sigma: usize) -> CandidateString {
    CandidateString((0..m).map(|_| rng.gen_range(0..sigma as u8)).collect())
}

#[test]
#[allow(clippy::needless_range_loop)]
fn normalized_rows_match_exact_integers() {
    for sigma in [2usize, 3, 4, 20] {
        let exact = exact_rows(12, sigma as i128);
        let t = HeuristicTables::new(12, sigma).unwrap();
        for len in 0..=12usize {
            let scale = (sigma as f64).powi(len as i32);
            let row_total: i128 = exact[len].iter().sum();
            assert_eq!(row_total, (sigma as i128).pow(len as u32));
            for k in -(len as isize)..=len as isize {
                let raw = exact[len][(k + 12) as usize];
                assert_eq!(raw, exact[len][(12 - k) as usize], "symmetry");
                let p = raw as f64 / scale;
                assert!((t.probability(len, k) - p).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cumulative_rows_are_monotone() {
    let t = HeuristicTables::new(300, 4).unwrap();
    for len in [1usize, 7, 150, 300] {
        let mut prev = 0.0;
        for c in 0..=len {
            let q = t.cumulative(len, c);
            assert!(q >= prev - 1e-15 && q <= 1.0 + 1e-12);
            prev = q;
        }
    }
}

#[test]
fn fast_heuristic_matches_exact_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..300 {
        let sigma = if trial % 2 == 0 { 2 } else { 4 };
        let n = rng.gen_range(2..=20);
        let m = rng.gen_range(1..=50);
        let inst = random_instance(&mut rng, n, m, sigma);
        let t = HeuristicTables::for_instance(&inst);
        let x = random_string(&mut rng, m, sigma);
        let fast = h_of(&x, &inst, &t).unwrap();
        let exact = h_value_naive(&x, &inst).unwrap();
        assert_eq!(fast.f, exact.f);
        let rel = (fast.total - exact.total).abs() / exact.total.abs().max(1.0);
        assert!(
            rel < 1e-9,
            "trial {trial}: {} vs {}",
            fast.total,
            exact.total
        );
    }
}

#[test]
fn heuristic_dominates_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5 {
        let inst = random_instance(&mut rng, 15, 25, 4);
        let t = HeuristicTables::for_instance(&inst);
        for _ in 0..2000 {
            let a = h_of(&random_string(&mut rng, 25, 4), &inst, &t).unwrap();
            let b = h_of(&random_string(&mut rng, 25, 4), &inst, &t).unwrap();
            assert!(a.gpc < (inst.n() + 1) as f64);
            if a.f > b.f {
                assert!(a.total > b.total);
            }
            assert_eq!((a.total / (inst.n() + 1) as f64) as usize, a.f);
        }
    }
}

#[test]
fn heuristic_is_repeatable() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let inst = random_instance(&mut rng, 30, 60, 4);
    let t = HeuristicTables::for_instance(&inst);
    let x = random_string(&mut rng, 60, 4);
    let p = build_profile(&x, &inst).unwrap();
    let first = h_value(&p, &inst, &t).unwrap();
    for _ in 0..10 {
        assert_eq!(
            h_value(&p, &inst, &t).unwrap().total.to_bits(),
            first.total.to_bits()
        );
    }
}

#[test]
fn fewer_strings_than_symbols_is_trivial() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let sigma = rng.gen_range(3..=6);
        let n = rng.gen_range(2..sigma);
        let m = rng.gen_range(1..20);
        let inst = random_instance(&mut rng, n, m, sigma);
        let x: Vec<u8> = (0..m)
            .map(|j| {
                (0..sigma as u8)
                    .find(|c| !inst.column(j).contains(c))
                    .unwrap()
            })
            .collect();
        assert_eq!(objective_f(&x, &inst).unwrap(), n);
    }
}

fn is_one_swap_optimal(s: &CandidateString, inst: &Instance, t: &HeuristicTables) -> bool {
    let here = h_of(s, inst, t).unwrap().total;
    for j in 0..inst.m() {
        for c in 0..inst.sigma() as u8 {
            if c == s[j] {
                continue;
            }
            let mut nb = s.clone();
            nb.0[j] = c;
            if h_of(&nb, inst, t).unwrap().total > here {
                return false;
            }
        }
    }
    true
}

#[test]
fn hill_climb_reaches_local_optima() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let sigma = rng.gen_range(2..=4);
        let n = rng.gen_range(2..=10);
        let m = rng.gen_range(1..=12);
        let inst = random_instance(&mut rng, n, m, sigma);
        let t = HeuristicTables::for_instance(&inst);
        let start = random_string(&mut rng, m, sigma);
        let out = hill_climb(&start, &inst, &t, &mut Budget::unlimited()).unwrap();
        assert!(h_of(&out, &inst, &t).unwrap().total >= h_of(&start, &inst, &t).unwrap().total);
        assert!(is_one_swap_optimal(&out, &inst, &t));
    }
}

#[test]
fn path_relinking_never_loses() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..300 {
        let n = rng.gen_range(2..=20);
        let m = rng.gen_range(1..=30);
        let inst = random_instance(&mut rng, n, m, 4);
        let t = HeuristicTables::for_instance(&inst);
        let p1 = random_string(&mut rng, m, 4);
        let p2 = random_string(&mut rng, m, 4);
        let child = path_relinking(&p1, &p2, &inst, &t).unwrap();
        let hc = h_of(&child, &inst, &t).unwrap().total;
        let h1 = h_of(&p1, &inst, &t).unwrap().total;
        let h2 = h_of(&p2, &inst, &t).unwrap().total;
        assert!(hc >= h1.max(h2));
        // the child lies on the path between the parents
        assert!(child
            .iter()
            .zip(p1.iter().zip(p2.iter()))
            .all(|(c, (a, b))| c == a || c == b));
    }
}

#[test]
fn greedy_column_choice_at_zero_alpha() {
    let inst = generate_random_instance(30, 40, 0.8, Alphabet::dna(), 17).unwrap();
    let counts = column_counts(&inst);
    let params = GraspParams::new(0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..1000 {
        let s = grasp_construct(&counts, params, &mut rng);
        for j in 0..inst.m() {
            assert_eq!(counts.count(j, s[j]), counts.v_min(j));
        }
    }
}

#[test]
fn greedier_constructions_score_higher() {
    let inst = generate_random_instance(50, 100, 0.75, Alphabet::dna(), 18).unwrap();
    let counts = column_counts(&inst);
    let mean_f = |alpha: f64, seed: u64| {
        let params = GraspParams::new(alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total: usize = (0..10_000)
            .map(|_| objective_f(&grasp_construct(&counts, params, &mut rng), &inst).unwrap())
            .sum();
        total as f64 / 10_000.0
    };
    let greedy = mean_f(0.1, 1);
    let random = mean_f(1.0, 2);
    assert!(greedy >= random, "alpha 0.1: {greedy}, alpha 1.0: {random}");
}

#[test]
fn uniform_crossover_is_fair() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let p1 = CandidateString(vec![0; 20]);
    let p2 = CandidateString(vec![1; 20]);
    let mut from_first = [0u32; 20];
    for _ in 0..10_000 {
        let child = uniform_crossover(&p1, &p2, &mut rng).unwrap();
        for (j, &c) in child.iter().enumerate() {
            from_first[j] += (c == 0) as u32;
        }
    }
    for count in from_first {
        assert!((count as f64 / 10_000.0 - 0.5).abs() < 0.02);
    }
}

#[test]
fn full_mutation_changes_three_quarters() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let s = CandidateString(vec![2; 10_000]);
    let out = mutate(&s, 4, 1.0, &mut rng).unwrap();
    let changed = out.iter().filter(|&&c| c != 2).count() as f64 / 10_000.0;
    assert!((changed - 0.75).abs() < 0.02, "changed fraction {changed}");
}

#[test]
fn low_rate_mutation_is_binomial() {
    // changed positions ~ Binomial(m, p·(1 - 1/σ)) with m = 100, p = 1/m
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let m = 100;
    let s = CandidateString(vec![0; m]);
    let q = (1.0 / m as f64) * 0.75;
    let trials = 20_000;
    let counts: Vec<f64> = (0..trials)
        .map(|_| {
            let out = mutate(&s, 4, 1.0 / m as f64, &mut rng).unwrap();
            out.iter().filter(|&&c| c != 0).count() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let exp_mean = m as f64 * q;
    let exp_var = m as f64 * q * (1.0 - q);
    assert!((mean - exp_mean).abs() < 0.03, "mean {mean} vs {exp_mean}");
    assert!((var - exp_var).abs() < 0.05, "variance {var} vs {exp_var}");
}

proptest! {
    #[test]
    fn hamming_is_a_metric(
        a in proptest::collection::vec(0u8..4, 1..40),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<u8> = a.iter().map(|_| rng.gen_range(0..4)).collect();
        let c: Vec<u8> = a.iter().map(|_| rng.gen_range(0..4)).collect();
        let ab = hamming(&a, &b).unwrap();
        prop_assert_eq!(ab, hamming(&b, &a).unwrap());
        prop_assert_eq!(hamming(&a, &a).unwrap(), 0);
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(hamming(&a, &c).unwrap() <= ab + hamming(&b, &c).unwrap());
        prop_assert!(ab <= a.len());
    }

    #[test]
    fn incremental_profiles_match_rebuilds(
        seed in any::<u64>(),
        steps in 1usize..1000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..15);
        let m = rng.gen_range(1..25);
        let inst = random_instance(&mut rng, n, m, 4);
        let mut x = random_string(&mut rng, m, 4);
        let mut p = build_profile(&x, &inst).unwrap();
        for _ in 0..steps {
            let pos = rng.gen_range(0..m);
            let sym = rng.gen_range(0..4u8);
            p = update_profile(&p, &x, pos, sym, &inst).unwrap();
            x.0[pos] = sym;
        }
        let fresh = build_profile(&x, &inst).unwrap();
        prop_assert_eq!(&p, &fresh);
        prop_assert_eq!(objective_f(&x, &inst).unwrap(), inst.n() - fresh.near_count());
        for (d, c) in fresh.distances().iter().zip(fresh.complements()) {
            prop_assert_eq!(*d + *c, m as u32);
        }
    }
}
