//! Experiment orchestration: builds the problem from a resolved config, runs
//! the engine and writes `run.csv`, `config_echo.json` and domain artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use coevo::genome::Genome;
use coevo::image::RgbImage;
use coevo::maze::{self, MazeGrid, Trajectory};
use coevo::moo::{self, ObjPoint, ParetoArchive, ZdtProblem};
use coevo::omnirep::{coevolve_with, OmnirepGeneration, OmnirepProblem, OmnirepSettings, OmnirepTrace};
use coevo::problems::{BitCountProblem, BlocksProblem, PrecisionProblem, ProgramProblem};
use coevo::safe::{run_safe, MazeDomain, ObjectiveFunctionGenome, SafeSettings, ZdtDomain};
use coevo::{Evaluator, RngStreams};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, Problem};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Image(#[from] coevo::image::ImageError),
    #[error(transparent)]
    Maze(#[from] maze::MazeError),
    #[error(transparent)]
    Omnirep(#[from] coevo::omnirep::OmnirepError),
    #[error(transparent)]
    Evo(#[from] coevo::EvoError),
    #[error(transparent)]
    Problem(#[from] coevo::problems::ProblemError),
    #[error(transparent)]
    Moo(#[from] moo::MooError),
}

/// Headline numbers of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub rows: usize,
    /// OMNIREP: best pair error after generation 0 and at the end.
    pub initial_error: Option<f64>,
    pub best_error: Option<f64>,
    /// Maze: first generation in which some robot entered the goal.
    pub goal_generation: Option<usize>,
    /// ZDT: IGD of the final Pareto archive.
    pub igd: Option<f64>,
}

impl RunSummary {
    fn new(rows: usize) -> Self {
        Self {
            rows,
            initial_error: None,
            best_error: None,
            goal_generation: None,
            igd: None,
        }
    }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), RunError> {
    fs::write(path, contents).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Seeded generator for problem instances, independent of the populations.
fn problem_rng(seed: u64) -> coevo::rng::StreamRng {
    RngStreams::new(seed).child("problem").stream(0, 0)
}

pub fn load_maze(name_or_path: &str) -> Result<MazeGrid, RunError> {
    let text = match maze::bundled(name_or_path) {
        Some(t) => t.to_string(),
        None => fs::read_to_string(name_or_path).map_err(|source| RunError::Io {
            path: PathBuf::from(name_or_path),
            source,
        })?,
    };
    Ok(maze::parse_maze(&text)?)
}

/// Runs the configured experiment. `log` receives one progress line per
/// report interval.
pub fn run_experiment(cfg: &ExperimentConfig, log: &mut dyn FnMut(&str)) -> Result<RunSummary, RunError> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.clone(),
        source,
    })?;
    write(&dir.join("config_echo.json"), cfg.to_json())?;
    let evaluator = Evaluator::with_threads(cfg.threads);
    let mut rng = problem_rng(cfg.seed);

    match cfg.problem {
        Problem::Bitcount => {
            let b = cfg.bitcount.clone().unwrap_or_default();
            let p = BitCountProblem::generate(&mut rng, b.points, -b.target_range, b.target_range, b.coeff_range);
            run_omnirep(cfg, &p, &evaluator, log, |_, _| Ok(()))
        }
        Problem::Precision => {
            let c = cfg.precision.clone().unwrap_or_default();
            let p = PrecisionProblem::generate(&mut rng, c.points);
            run_omnirep(cfg, &p, &evaluator, log, |_, _| Ok(()))
        }
        Problem::Program => {
            let c = cfg.program.clone().unwrap_or_default();
            let p = ProgramProblem::generate(&mut rng, c.inputs, c.input_range);
            let describe = |g: &Genome| g.as_ints().map(<[i64]>::to_vec).unwrap_or_default();
            write(
                &dir.join("target_program.txt"),
                p.describe(&p.target_opcodes, &p.target_imap),
            )?;
            run_omnirep(cfg, &p, &evaluator, log, |trace, dir| {
                let b = &trace.best;
                write(
                    &dir.join("best_program.txt"),
                    p.describe(&describe(&b.representation), &describe(&b.encoding)),
                )
            })
        }
        Problem::Image => {
            let c = cfg.image.clone().unwrap_or_default();
            let target = match &c.target {
                Some(path) => RgbImage::load(path)?,
                None => RgbImage::test_pattern(c.width, c.height),
            };
            target.save(&dir.join("target.ppm"))?;
            let p = BlocksProblem::new(target, c.base_color, c.blocks, c.max_block_len);
            run_image(cfg, &p, &evaluator, log)
        }
        Problem::Maze => run_maze(cfg, &evaluator, log),
        Problem::Zdt => run_zdt(cfg, &evaluator, log),
    }
}

const OMNIREP_HEADER: &str = "generation,best_fitness,mean_fitness,enc_best_fitness,enc_mean_fitness,best_error\n";

fn omnirep_csv(trace: &OmnirepTrace) -> String {
    let mut s = String::from(OMNIREP_HEADER);
    for r in &trace.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.generation, r.rep_best, r.rep_mean, r.enc_best, r.enc_mean, r.best_pair_error
        );
    }
    s
}

fn genome_text(g: &Genome) -> String {
    match g {
        Genome::BitString(bits) => bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        Genome::RealVector { values, .. } => join(values.iter()),
        Genome::IntVector { values, .. } => join(values.iter()),
        Genome::PairList { pairs, .. } => join(pairs.iter().map(|(a, b)| format!("({a} {b})"))),
    }
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn run_omnirep_with<P, O>(
    cfg: &ExperimentConfig,
    problem: &P,
    evaluator: &Evaluator,
    log: &mut dyn FnMut(&str),
    mut observe: O,
) -> Result<(OmnirepTrace, RunSummary), RunError>
where
    P: OmnirepProblem,
    O: FnMut(&OmnirepGeneration<'_>) -> Result<(), RunError>,
{
    let (pa, pb) = cfg.params()?;
    let mut failure = None;
    let last = cfg.generations.max(1) - 1;
    let trace = coevolve_with(problem, &pa, &pb, &OmnirepSettings::default(), evaluator, |g| {
        if g.generation % cfg.report_interval == 0 || g.generation == last {
            log(&format!("generation {} best error {}", g.generation, g.best.error));
        }
        if failure.is_none() {
            failure = observe(g).err();
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let dir = &cfg.output_dir;
    write(&dir.join("run.csv"), omnirep_csv(&trace))?;
    write(
        &dir.join("best_pair.txt"),
        format!(
            "error {}\nrepresentation {}\nencoding {}\n",
            trace.best.error,
            genome_text(&trace.best.representation),
            genome_text(&trace.best.encoding)
        ),
    )?;
    let mut summary = RunSummary::new(trace.rows.len());
    summary.initial_error = trace.rows.first().map(|r| r.best_pair_error);
    summary.best_error = Some(trace.best.error);
    Ok((trace, summary))
}

fn run_omnirep<P: OmnirepProblem>(
    cfg: &ExperimentConfig,
    problem: &P,
    evaluator: &Evaluator,
    log: &mut dyn FnMut(&str),
    extra: impl FnOnce(&OmnirepTrace, &Path) -> Result<(), RunError>,
) -> Result<RunSummary, RunError> {
    let (trace, summary) = run_omnirep_with(cfg, problem, evaluator, log, |_| Ok(()))?;
    extra(&trace, &cfg.output_dir)?;
    Ok(summary)
}

fn run_image(
    cfg: &ExperimentConfig,
    problem: &BlocksProblem,
    evaluator: &Evaluator,
    log: &mut dyn FnMut(&str),
) -> Result<RunSummary, RunError> {
    let dir = cfg.output_dir.clone();
    let last = cfg.generations.max(1) - 1;
    let (trace, summary) = run_omnirep_with(cfg, problem, evaluator, log, |g| {
        if g.generation % cfg.report_interval == 0 || g.generation == last {
            let img = problem.render(&g.best.representation, &g.best.encoding)?;
            img.save(&dir.join(format!("best_{:05}.ppm", g.generation)))?;
        }
        Ok(())
    })?;
    let img = problem.render(&trace.best.representation, &trace.best.encoding)?;
    img.save(&dir.join("best.ppm"))?;
    Ok(summary)
}

fn frozen(w: Option<[f64; 2]>) -> SafeSettings {
    SafeSettings {
        frozen_objective: w.map(|[a, b]| ObjectiveFunctionGenome::new(a, b)),
        ..SafeSettings::default()
    }
}

fn safe_row(s: &mut String, r: &coevo::safe::SafeRow) {
    let _ = write!(
        s,
        "{},{},{},{},{},{},{}",
        r.generation, r.sol_best, r.sol_mean, r.obj_best, r.obj_mean, r.solution_archive_len, r.objfunc_archive_len
    );
}

const SAFE_HEADER: &str =
    "generation,best_fitness,mean_fitness,obj_best_fitness,obj_mean_fitness,solution_archive,objective_archive";

fn run_maze(cfg: &ExperimentConfig, evaluator: &Evaluator, log: &mut dyn FnMut(&str)) -> Result<RunSummary, RunError> {
    let mc = cfg.maze.clone().unwrap_or_default();
    let grid = load_maze(&mc.maze)?;
    let domain = MazeDomain {
        grid: grid.clone(),
        max_steps: mc.max_steps,
    };
    let (ps, po) = cfg.params()?;
    let last = cfg.generations.max(1) - 1;

    let mut csv = format!("{SAFE_HEADER},best_distance,goal_reached\n");
    let mut best: Option<(f64, Trajectory)> = None;
    let mut goal_generation = None;
    let rows = run_safe(&domain, &ps, &po, &frozen(mc.frozen_objective), evaluator, |g| {
        let mut gen_best = f64::NEG_INFINITY;
        let mut reached = false;
        for (t, m) in g.outcomes.iter().zip(&g.metrics) {
            gen_best = gen_best.max(m[0]);
            reached |= t.reached_goal;
            if best.as_ref().is_none_or(|(d, _)| m[0] > *d) {
                best = Some((m[0], t.clone()));
            }
        }
        if reached && goal_generation.is_none() {
            goal_generation = Some(g.row.generation);
        }
        safe_row(&mut csv, &g.row);
        let _ = writeln!(csv, ",{gen_best},{}", u8::from(reached));
        if g.row.generation % cfg.report_interval == 0 || g.row.generation == last {
            log(&format!(
                "generation {} best distance score {gen_best} goal reached {reached}",
                g.row.generation
            ));
        }
    })?;

    let dir = &cfg.output_dir;
    write(&dir.join("run.csv"), csv)?;
    let (_, trajectory) = best.expect("at least one generation evaluated");
    write(&dir.join("trajectory.csv"), trajectory.to_csv())?;
    write(&dir.join("trajectory.svg"), maze::render_svg(&grid, &trajectory, 20))?;
    let mut summary = RunSummary::new(rows.len());
    summary.goal_generation = goal_generation;
    Ok(summary)
}

pub fn zdt_problem(cfg: &crate::config::ZdtConfig) -> Result<ZdtProblem, RunError> {
    let p = ZdtProblem::new(cfg.id, cfg.form.into())?;
    Ok(match cfg.k {
        Some(k) => p.with_dimension(k),
        None => p,
    })
}

fn run_zdt(cfg: &ExperimentConfig, evaluator: &Evaluator, log: &mut dyn FnMut(&str)) -> Result<RunSummary, RunError> {
    let zc = cfg.zdt.clone().unwrap_or_default();
    let problem = zdt_problem(&zc)?;
    let reference = moo::reference_front(&problem, zc.front_points);
    let domain = ZdtDomain { problem };
    let (ps, po) = cfg.params()?;
    let last = cfg.generations.max(1) - 1;

    let mut archive: ParetoArchive<Vec<f64>> = match zc.archive_capacity {
        Some(c) => ParetoArchive::with_capacity(c),
        None => ParetoArchive::new(),
    };
    let mut csv = format!("{SAFE_HEADER},pareto_size,igd\n");
    let mut igd_csv = String::from("generation,igd\n");
    let mut last_igd = None;
    let mut failure = None;
    let rows = run_safe(&domain, &ps, &po, &frozen(zc.frozen_objective), evaluator, |g| {
        for (p, ind) in g.outcomes.iter().zip(&g.state.solutions) {
            let x = ind.genome.as_reals().expect("ZDT solutions are real vectors");
            archive.insert(*p, x.to_vec());
        }
        let value = match moo::igd(&archive.points(), &reference) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        last_igd = Some(value);
        safe_row(&mut csv, &g.row);
        let _ = writeln!(csv, ",{},{value}", archive.len());
        let _ = writeln!(igd_csv, "{},{value}", g.row.generation);
        if g.row.generation % cfg.report_interval == 0 || g.row.generation == last {
            log(&format!(
                "generation {} pareto size {} igd {value}",
                g.row.generation,
                archive.len()
            ));
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }

    let dir = &cfg.output_dir;
    write(&dir.join("run.csv"), csv)?;
    write(&dir.join("igd.csv"), igd_csv)?;
    write(&dir.join("pareto.csv"), pareto_csv(&archive, problem.k))?;
    let mut summary = RunSummary::new(rows.len());
    summary.igd = last_igd;
    Ok(summary)
}

fn pareto_csv(archive: &ParetoArchive<Vec<f64>>, k: usize) -> String {
    let mut s = String::from("f1,f2");
    for i in 1..=k {
        let _ = write!(s, ",x{i}");
    }
    s.push('\n');
    for ((f1, f2), x) in archive.sorted() {
        let _ = writeln!(s, "{f1},{f2},{}", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
    }
    s
}

/// `f1,f2` rows of the reference front.
pub fn front_csv(points: &[ObjPoint]) -> String {
    let mut s = String::from("f1,f2\n");
    for (f1, f2) in points {
        let _ = writeln!(s, "{f1},{f2}");
    }
    s
}

pub fn write_front(problem: &ZdtProblem, points: usize, dir: &Path) -> Result<PathBuf, RunError> {
    fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join("front.csv");
    write(&path, front_csv(&moo::reference_front(problem, points)))?;
    Ok(path)
}
