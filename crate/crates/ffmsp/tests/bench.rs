use std::path::Path;

use ffmsp::bench::{
    build_instances, read_runs_csv, run_suite, summarize, write_runs_csv, write_summary_csv,
    RunRow, SuiteSpec,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SUITE: &str = r#"
seed = 42
instances_per_cell = 1
runs_per_instance = 3

[source]
kind = "random"

[grid]
n = [12]
m = [30]
d_frac = [0.8]

[budget]
max_evals = 1500

[[algorithm]]
name = "MA"
algo = "ma"
pop_size = 10

[[algorithm]]
name = "RND_UX"
algo = "ma"
init = "random"
xover = "ux"
ls = "none"
pop_size = 10
"#;

fn spec(text: &str) -> SuiteSpec {
    SuiteSpec::from_toml(text, Path::new(".")).unwrap()
}

fn summary_bytes(rows: &[RunRow]) -> Vec<u8> {
    let mut out = Vec::new();
    write_summary_csv(&mut out, &summarize(rows).unwrap()).unwrap();
    out
}

#[test]
fn one_record_per_instance_algorithm_and_run() {
    let outcomes = run_suite(&spec(SUITE), 2).unwrap();
    assert_eq!(outcomes.len(), 6);
    for o in &outcomes {
        assert_eq!((o.n, o.m, o.d), (12, 30, 24));
        assert!(o.record.evaluations <= 1500 + 30 * 3);
    }
}

#[test]
fn full_grid_has_ninety_instances() {
    let grid = SUITE
        .replace("instances_per_cell = 1", "instances_per_cell = 5")
        .replace("n = [12]", "n = [100, 200]")
        .replace("m = [30]", "m = [300, 600, 800]")
        .replace("d_frac = [0.8]", "d_frac = [0.75, 0.8, 0.85]");
    let s = spec(&grid);
    assert_eq!(s.cell_count(), 18);
    let instances = build_instances(&s).unwrap();
    assert_eq!(instances.len(), 90);
    let ids: std::collections::BTreeSet<_> = instances
        .iter()
        .map(|i| i.instance.id().to_string())
        .collect();
    assert_eq!(ids.len(), 90, "instance ids collide");
}

#[test]
fn suites_repeat_regardless_of_worker_count() {
    let s = spec(SUITE);
    let a = run_suite(&s, 1).unwrap();
    let b = run_suite(&s, 3).unwrap();
    assert_eq!(a, b);
    let rows: Vec<_> = a.iter().map(|o| o.to_row()).collect();
    let rows_b: Vec<_> = b.iter().map(|o| o.to_row()).collect();
    assert_eq!(summary_bytes(&rows), summary_bytes(&rows_b));
}

#[test]
fn run_csv_round_trips() {
    let rows: Vec<_> = run_suite(&spec(SUITE), 1)
        .unwrap()
        .iter()
        .map(|o| o.to_row())
        .collect();
    let mut buf = Vec::new();
    write_runs_csv(&mut buf, &rows).unwrap();
    let back = read_runs_csv(buf.as_slice()).unwrap();
    assert_eq!(back, rows);
    assert!(read_runs_csv(&b"a,b\n1,2\n"[..]).is_err());
}

#[test]
fn summary_ignores_row_order() {
    let rows: Vec<_> = run_suite(&spec(SUITE), 1)
        .unwrap()
        .iter()
        .map(|o| o.to_row())
        .collect();
    let reference = summary_bytes(&rows);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(summary_bytes(&shuffled), reference);
    }
}

#[test]
fn summary_statistics_by_hand() {
    let row = |id: &str, alg: &str, f: usize| RunRow {
        instance_id: id.into(),
        algorithm: alg.into(),
        seed: 0,
        n: 10,
        m: 20,
        d: 16,
        best_f: f,
        best_h: f as f64,
        evaluations: 1,
        wall_ms: 0,
    };
    // best per instance: i1 -> 10, i2 -> 8
    let rows = vec![
        row("i1", "A", 10),
        row("i1", "B", 5),
        row("i2", "A", 6),
        row("i2", "B", 8),
    ];
    let s = summarize(&rows).unwrap();
    assert_eq!(s.len(), 2);
    let a = &s[0];
    assert_eq!(a.algorithm, "A");
    assert!((a.mean_sol - 8.0).abs() < 1e-12);
    assert!((a.rpd_mean - 12.5).abs() < 1e-12);
    assert!((a.rpd_std - 12.5 * 2f64.sqrt()).abs() < 1e-12);
    let b = &s[1];
    assert!((b.rpd_mean - 25.0).abs() < 1e-12);
    assert!((a.improvement_vs["B"] - 12.5).abs() < 1e-12);
    assert!((b.improvement_vs["A"] + 12.5).abs() < 1e-12);

    let text = String::from_utf8(summary_bytes(&rows)).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "d_frac,n,m,algorithm,mean_sol,rpd_mean,rpd_std,imp_vs_A,imp_vs_B"
    );
    assert_eq!(
        lines.next().unwrap(),
        "0.80,10,20,A,8.0000,12.5000,17.6777,,12.5000"
    );
}
