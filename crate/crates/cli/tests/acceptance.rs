//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). A failing criterion is
//! reported but only turns the exit status non-zero when
//! `ACCEPTANCE_STRICT=1` is set, so `cargo test --workspace` still shows the
//! full report. `ACCEPTANCE_ONLY=5,9` restricts the run to some criteria.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::Path;
use std::time::{Duration, Instant};

use coevo::maze::parse_maze;
use coevo::moo::{zdt_eval, ParetoArchive, ZdtForm, ZdtProblem};
use coevo::safe::{evaluate_generation, MazeDomain, SafeDomain, SafeSettings, SafeState, ZdtDomain};
use coevo::{knn_novelty, BehaviorPoint, EvolutionParams, Evaluator, Individual, NoveltyArchive, RngStreams};
use coevo_cli::{run_experiment, ExperimentConfig, RawConfig, RunSummary};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(dir: &Path, json: &str) -> RunSummary {
    let mut raw = RawConfig::from_json(json).expect("valid config");
    raw.output_dir = Some(dir.to_path_buf());
    let cfg = ExperimentConfig::resolve(&raw).expect("config resolves");
    run_experiment(&cfg, &mut |_| {}).expect("run succeeds")
}

fn within(limit: Duration, t: Duration) -> bool {
    t <= limit
}

fn novelty_oracle() -> Outcome {
    let start = Instant::now();
    let streams = RngStreams::new(99).child("acceptance-novelty");
    let mut mismatches = 0;
    for case in 0..1000u64 {
        let mut rng = streams.stream(0, case);
        let k = [1, 5, 15][(case % 3) as usize];
        let size = rng.random_range(1..=200usize);
        let n_archive = rng.random_range(0..=size);
        let pts: Vec<Vec<f64>> = (0..=size)
            .map(|_| vec![rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)])
            .collect();
        let (p, rest) = pts.split_last().unwrap();
        let (cohort, archived) = rest.split_at(size - n_archive);
        let mut archive = NoveltyArchive::new(k);
        for a in archived {
            archive.update(&[(BehaviorPoint::new(a.clone()), 0.0)]);
        }
        let cohort: Vec<BehaviorPoint> = cohort.iter().cloned().map(BehaviorPoint::new).collect();
        let got = knn_novelty(&BehaviorPoint::new(p.clone()), &cohort, &archive, k);
        if got != support::brute_novelty(p, rest, k) {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: mismatches == 0 && within(Duration::from_secs(5), t),
        detail: format!("{mismatches}/1000 mismatches, {:.2?}", t),
    }
}

fn zdt_oracle() -> Outcome {
    let start = Instant::now();
    let streams = RngStreams::new(98).child("acceptance-zdt");
    let mut worst = 0.0f64;
    for id in 1..=4u8 {
        for (fi, form) in [ZdtForm::Standard, ZdtForm::Verbatim].into_iter().enumerate() {
            let p = ZdtProblem::new(id, form).unwrap();
            for i in 0..100u64 {
                let mut rng = streams.stream(u64::from(id) * 2 + fi as u64, i);
                let x: Vec<f64> = p
                    .all_bounds()
                    .iter()
                    .map(|&(lo, hi)| rng.random_range(lo..=hi))
                    .collect();
                let (f1, f2) = zdt_eval(&p, &x).unwrap();
                let (o1, o2) = support::zdt_oracle(id, form == ZdtForm::Standard, &x);
                worst = worst.max((f1 - o1).abs()).max((f2 - o2).abs());
            }
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: worst <= 1e-12 && within(Duration::from_secs(1), t),
        detail: format!("max abs diff {worst:.1e}, {:.2?}", t),
    }
}

fn pareto_archive() -> Outcome {
    let start = Instant::now();
    let streams = RngStreams::new(97).child("acceptance-pareto");
    let mut failures = 0;
    for trial in 0..50u64 {
        let mut rng = streams.stream(0, trial);
        let mut archive = ParetoArchive::new();
        let mut history = Vec::with_capacity(500);
        for i in 0..500usize {
            let mut p = (rng.random_range(0.0..1.0f64), rng.random_range(0.0..1.0f64));
            if trial % 2 == 0 {
                p = ((p.0 * 50.0).round() / 50.0, (p.1 * 50.0).round() / 50.0);
            }
            archive.insert(p, i);
            history.push(p);
        }
        let mut got = archive.points();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if got != support::brute_front(&history) {
            failures += 1;
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: failures == 0 && within(Duration::from_secs(5), t),
        detail: format!("{failures}/50 trials differ, {:.2?}", t),
    }
}

fn zdt1_igd() -> Outcome {
    let start = Instant::now();
    let mut igds: Vec<f64> = (0..10u64)
        .map(|seed| {
            let dir = tempfile::tempdir().unwrap();
            let json = format!(
                r#"{{"problem": "zdt", "seed": {seed}, "generations": 200,
                    "population_a": {{"population_size": 250}},
                    "population_b": {{"population_size": 25}},
                    "zdt": {{"id": 1, "form": "standard", "k": 30, "front_points": 1000}}}}"#
            );
            run(dir.path(), &json).igd.unwrap()
        })
        .collect();
    igds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = (igds[4] + igds[5]) / 2.0;
    let t = start.elapsed();
    Outcome {
        pass: median <= 0.05 && within(Duration::from_secs(120), t),
        detail: format!("median IGD {median:.4} (range {:.4}..{:.4}), {:.1?}", igds[0], igds[9], t),
    }
}

fn maze_contrast() -> Outcome {
    let start = Instant::now();
    let mut reached = [0usize; 2];
    for (slot, frozen) in [r#", "frozen_objective": [1.0, 0.0]"#, ""].iter().enumerate() {
        for seed in 0..20u64 {
            let dir = tempfile::tempdir().unwrap();
            let json = format!(
                r#"{{"problem": "maze", "seed": {seed}, "generations": 250,
                    "population_a": {{"population_size": 250}},
                    "population_b": {{"population_size": 25}},
                    "maze": {{"maze": "maze2"{frozen}}}}}"#
            );
            reached[slot] += usize::from(run(dir.path(), &json).goal_generation.is_some());
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: reached[0] <= 2 && reached[1] >= 12 && within(Duration::from_secs(300), t),
        detail: format!(
            "distance-only {}/20 (need <= 2), SAFE {}/20 (need >= 12), {:.1?}",
            reached[0], reached[1], t
        ),
    }
}

fn omnirep_rate(problem: &str, generations: usize, threshold: f64, strict_less: bool) -> (usize, Duration) {
    let start = Instant::now();
    let solved = (0..20u64)
        .filter(|seed| {
            let dir = tempfile::tempdir().unwrap();
            let json = format!(r#"{{"problem": "{problem}", "seed": {seed}, "generations": {generations}}}"#);
            let e = run(dir.path(), &json).best_error.unwrap();
            if strict_less {
                e < threshold
            } else {
                e <= threshold
            }
        })
        .count();
    (solved, start.elapsed())
}

fn bitcount_rate() -> Outcome {
    let (solved, t) = omnirep_rate("bitcount", 200, 1e-2, false);
    Outcome {
        pass: solved >= 16 && within(Duration::from_secs(120), t),
        detail: format!("MSE <= 1e-2 in {solved}/20 seeds (need >= 16), {:.1?}", t),
    }
}

fn program_rate() -> Outcome {
    let (solved, t) = omnirep_rate("program", 100, 1e-9, true);
    Outcome {
        pass: solved >= 10 && within(Duration::from_secs(120), t),
        detail: format!("exact in {solved}/20 seeds (need >= 10), {:.1?}", t),
    }
}

fn replaced_objfunc_fitness<D: SafeDomain>(domain: &D, trial: u64) -> bool {
    let mut s = EvolutionParams::with_defaults(100, 1, domain.solution_template().len());
    s.seed = trial;
    let mut o = EvolutionParams::with_defaults(25, 1, 2);
    o.seed = trial;
    let state = SafeState::initial(domain, &s, &o, &SafeSettings::default());
    let mut swapped = state.clone();
    let streams = RngStreams::new(trial).child("acceptance-replace");
    let template = domain.solution_template();
    for (i, ind) in swapped.solutions.iter_mut().enumerate() {
        *ind = Individual::new(template.sample(&mut streams.stream(0, i as u64)));
    }
    let fitness = |st: SafeState| -> Vec<f64> {
        evaluate_generation(st, domain, &Evaluator::sequential())
            .state
            .objfuncs
            .iter()
            .map(|i| i.fitness.unwrap())
            .collect()
    };
    fitness(state) == fitness(swapped)
}

fn commensalism() -> Outcome {
    let maze = MazeDomain::new(parse_maze(coevo::maze::MAZE2).unwrap());
    let zdt = ZdtDomain {
        problem: ZdtProblem::new(1, ZdtForm::Standard).unwrap(),
    };
    let held = (0..100u64)
        .filter(|&trial| {
            if trial % 2 == 0 {
                replaced_objfunc_fitness(&maze, trial)
            } else {
                replaced_objfunc_fitness(&zdt, trial)
            }
        })
        .count();
    Outcome {
        pass: held == 100,
        detail: format!("unchanged in {held}/100 trials"),
    }
}

fn determinism() -> Outcome {
    let mut differing = Vec::new();
    for name in ["bitcount", "precision", "program", "image", "maze", "zdt"] {
        let csv = |threads: usize| {
            let dir = tempfile::tempdir().unwrap();
            let json = format!(r#"{{"problem": "{name}", "seed": 5, "generations": 15, "threads": {threads}}}"#);
            run(dir.path(), &json);
            std::fs::read(dir.path().join("run.csv")).unwrap()
        };
        if csv(1) != csv(8) {
            differing.push(name);
        }
    }
    Outcome {
        pass: differing.is_empty(),
        detail: if differing.is_empty() {
            "run.csv identical for 1 and 8 threads on all six problems".into()
        } else {
            format!("run.csv differs for {differing:?}")
        },
    }
}

fn image_smoke() -> Outcome {
    let improved = (0..10u64)
        .filter(|seed| {
            let dir = tempfile::tempdir().unwrap();
            let json = format!(
                r#"{{"problem": "image", "seed": {seed}, "generations": 100, "image": {{"width": 16, "height": 16}}}}"#
            );
            let s = run(dir.path(), &json);
            s.best_error.unwrap() < s.initial_error.unwrap()
        })
        .count();
    Outcome {
        pass: improved == 10,
        detail: format!("final SSE below generation-0 SSE in {improved}/10 seeds"),
    }
}

fn main() {
    // libtest flags such as --nocapture or a name filter are accepted and ignored.
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("novelty oracle", novelty_oracle),
        ("zdt oracle", zdt_oracle),
        ("pareto archive", pareto_archive),
        ("zdt1 igd", zdt1_igd),
        ("maze contrast", maze_contrast),
        ("bit-count regression", bitcount_rate),
        ("program emulation", program_rate),
        ("commensalism", commensalism),
        ("determinism", determinism),
        ("image smoke", image_smoke),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        let o = check();
        failed += usize::from(!o.pass);
        println!("[{}] {n:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {failed} failing");
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
