//! Commensalistic coevolution of solutions and objective functions.
//!
//! Every solution is scored by every candidate objective function and keeps
//! the best score. Objective functions are `[a, b]` weight pairs scored only
//! by the genotypic novelty of their genomes, so their evolution never
//! depends on the solutions population.
//!
//! A generation runs in this order:
//! 1. evaluate solutions (outcomes, behaviours, phenotypic novelty),
//! 2. score each solution with each objective function and keep the maximum,
//! 3. update the solution behaviour archive,
//! 4. score objective functions by genotypic novelty,
//! 5. update the objective-function archive,
//! 6. reproduce both populations.

use crate::evo::{evolve_generation, EvoError, EvolutionParams, Individual};
use crate::genome::{Genome, GenomeTemplate};
use crate::maze::{self, Controller, MazeGrid, Trajectory};
use crate::moo::{self, ObjPoint, ZdtProblem};
use crate::novelty::{knn_novelty, BehaviorPoint, NoveltyArchive};
use crate::parallel::Evaluator;
use crate::rng::RngStreams;

/// A candidate objective function: linear weights on two objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveFunctionGenome {
    pub a: f64,
    pub b: f64,
}

impl ObjectiveFunctionGenome {
    pub fn new(a: f64, b: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        Self { a, b }
    }

    pub fn from_genome(g: &Genome) -> Option<Self> {
        match g.as_reals()? {
            [a, b] => Some(Self { a: *a, b: *b }),
            _ => None,
        }
    }

    pub fn to_genome(self) -> Genome {
        Genome::real_vector(vec![self.a, self.b], vec![(0.0, 1.0); 2])
    }

    pub fn point(self) -> BehaviorPoint {
        BehaviorPoint::from((self.a, self.b))
    }
}

pub fn objfunc_template() -> GenomeTemplate {
    GenomeTemplate::real_uniform(2, 0.0, 1.0)
}

/// Objective components of one solution (maze: distance and novelty
/// scores; ZDT: `f1`, `f2`).
pub type SolutionMetrics = Vec<f64>;

pub trait SafeDomain: Sync {
    /// Raw per-solution evaluation result.
    type Outcome: Send + Sync;

    fn solution_template(&self) -> GenomeTemplate;

    fn evaluate(&self, solution: &Genome) -> Self::Outcome;

    /// Behaviour point for phenotypic novelty; `None` when the domain does
    /// not use novelty.
    fn behavior(&self, _outcome: &Self::Outcome) -> Option<BehaviorPoint> {
        None
    }

    /// Metrics of one solution given its raw k-NN novelty (if any).
    fn metrics(&self, outcome: &Self::Outcome, raw_novelty: Option<f64>) -> SolutionMetrics;

    /// Score of the metrics under one objective function; higher is better.
    fn combine(&self, metrics: &[f64], weights: &ObjectiveFunctionGenome) -> f64;
}

/// Best combined score over all objective functions and the index of the
/// one achieving it (lowest index on ties).
pub fn solution_fitness<D: SafeDomain + ?Sized>(
    metrics: &[f64],
    objfuncs: &[ObjectiveFunctionGenome],
    domain: &D,
) -> (f64, usize) {
    assert!(!objfuncs.is_empty(), "at least one objective function");
    let mut best = (domain.combine(metrics, &objfuncs[0]), 0);
    for (i, of) in objfuncs.iter().enumerate().skip(1) {
        let s = domain.combine(metrics, of);
        if s > best.0 {
            best = (s, i);
        }
    }
    best
}

/// Genotypic novelty of an objective function against the rest of its
/// population (`cohort`, excluding `g`) and the archive.
pub fn objfunc_fitness(
    g: &ObjectiveFunctionGenome,
    cohort: &[ObjectiveFunctionGenome],
    archive: &NoveltyArchive,
) -> f64 {
    let pts: Vec<BehaviorPoint> = cohort.iter().map(|c| c.point()).collect();
    knn_novelty(&g.point(), &pts, archive, archive.k())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SafeSettings {
    pub novelty_k: usize,
    /// When set, the objective-function population is this single genome and
    /// never evolves (a fixed-weight EA).
    pub frozen_objective: Option<ObjectiveFunctionGenome>,
}

impl Default for SafeSettings {
    fn default() -> Self {
        Self {
            novelty_k: 15,
            frozen_objective: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SafeState {
    pub generation: usize,
    pub solutions: Vec<Individual>,
    pub objfuncs: Vec<Individual>,
    pub solution_archive: NoveltyArchive,
    pub objfunc_archive: NoveltyArchive,
}

impl SafeState {
    pub fn initial<D: SafeDomain + ?Sized>(
        domain: &D,
        params_s: &EvolutionParams,
        params_o: &EvolutionParams,
        settings: &SafeSettings,
    ) -> Self {
        let (sol_streams, obj_streams) = streams(params_s, params_o);
        let template = domain.solution_template();
        let init = sol_streams.child("init");
        let solutions = (0..params_s.population_size)
            .map(|i| Individual::new(template.sample(&mut init.stream(0, i as u64))))
            .collect();
        let objfuncs = match settings.frozen_objective {
            Some(of) => vec![Individual::new(of.to_genome())],
            None => {
                let init = obj_streams.child("init");
                (0..params_o.population_size)
                    .map(|i| Individual::new(objfunc_template().sample(&mut init.stream(0, i as u64))))
                    .collect()
            }
        };
        Self {
            generation: 0,
            solutions,
            objfuncs,
            solution_archive: NoveltyArchive::new(settings.novelty_k),
            objfunc_archive: NoveltyArchive::new(settings.novelty_k),
        }
    }

    pub fn objective_functions(&self) -> Vec<ObjectiveFunctionGenome> {
        self.objfuncs
            .iter()
            .map(|i| ObjectiveFunctionGenome::from_genome(&i.genome).expect("objective genomes are [a, b]"))
            .collect()
    }
}

fn streams(params_s: &EvolutionParams, params_o: &EvolutionParams) -> (RngStreams, RngStreams) {
    (
        RngStreams::new(params_s.seed).child("safe/solutions"),
        RngStreams::new(params_o.seed).child("safe/objectives"),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SafeRow {
    pub generation: usize,
    pub sol_best: f64,
    pub sol_mean: f64,
    pub obj_best: f64,
    pub obj_mean: f64,
    pub solution_archive_len: usize,
    pub objfunc_archive_len: usize,
}

/// An evaluated generation, before reproduction.
#[derive(Debug)]
pub struct SafeGeneration<O> {
    pub state: SafeState,
    pub outcomes: Vec<O>,
    pub metrics: Vec<SolutionMetrics>,
    /// Index of the objective function that gave each solution its fitness.
    pub argmax: Vec<usize>,
    pub row: SafeRow,
}

fn mean_best(pop: &[Individual]) -> (f64, f64) {
    let mut best = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for f in pop.iter().filter_map(|i| i.fitness) {
        best = best.max(f);
        sum += f;
    }
    (best, sum / pop.len() as f64)
}

/// Steps 1-5: scores both populations and updates both archives.
pub fn evaluate_generation<D: SafeDomain + ?Sized>(
    mut state: SafeState,
    domain: &D,
    evaluator: &Evaluator,
) -> SafeGeneration<D::Outcome> {
    // (1) solutions and their phenotypic novelty
    let outcomes = evaluator.map(state.solutions.len(), |i| domain.evaluate(&state.solutions[i].genome));
    let behaviors: Vec<Option<BehaviorPoint>> = outcomes.iter().map(|o| domain.behavior(o)).collect();
    let uses_novelty = behaviors.iter().all(Option::is_some) && !behaviors.is_empty();
    let points: Vec<BehaviorPoint> = if uses_novelty {
        behaviors.iter().map(|b| b.clone().expect("checked")).collect()
    } else {
        Vec::new()
    };
    let novelty: Vec<Option<f64>> = if uses_novelty {
        let archive = &state.solution_archive;
        evaluator.map(points.len(), |i| {
            let cohort: Vec<BehaviorPoint> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            Some(knn_novelty(&points[i], &cohort, archive, archive.k()))
        })
    } else {
        vec![None; outcomes.len()]
    };
    let metrics: Vec<SolutionMetrics> = outcomes
        .iter()
        .zip(&novelty)
        .map(|(o, n)| domain.metrics(o, *n))
        .collect();

    // (2) best score over all objective functions
    let objfuncs = state.objective_functions();
    let scored = evaluator.map(metrics.len(), |i| solution_fitness(&metrics[i], &objfuncs, domain));
    let mut argmax = Vec::with_capacity(scored.len());
    for ((ind, (fit, arg)), b) in state.solutions.iter_mut().zip(scored).zip(&behaviors) {
        ind.fitness = Some(fit);
        ind.behavior = b.clone();
        argmax.push(arg);
    }

    // (3) solution behaviour archive
    if uses_novelty {
        let gen: Vec<(BehaviorPoint, f64)> = points
            .into_iter()
            .zip(novelty.iter().map(|n| n.expect("novelty computed")))
            .collect();
        state.solution_archive.update(&gen);
    }

    // (4) objective functions by genotypic novelty
    let obj_novelty: Vec<f64> = (0..objfuncs.len())
        .map(|i| {
            let cohort: Vec<ObjectiveFunctionGenome> = objfuncs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, o)| *o)
                .collect();
            objfunc_fitness(&objfuncs[i], &cohort, &state.objfunc_archive)
        })
        .collect();
    for (ind, &n) in state.objfuncs.iter_mut().zip(&obj_novelty) {
        ind.fitness = Some(n);
        ind.behavior = None;
    }

    // (5) objective-function archive
    let gen: Vec<(BehaviorPoint, f64)> = objfuncs.iter().map(|o| o.point()).zip(obj_novelty).collect();
    state.objfunc_archive.update(&gen);

    let (sol_best, sol_mean) = mean_best(&state.solutions);
    let (obj_best, obj_mean) = mean_best(&state.objfuncs);
    let row = SafeRow {
        generation: state.generation,
        sol_best,
        sol_mean,
        obj_best,
        obj_mean,
        solution_archive_len: state.solution_archive.len(),
        objfunc_archive_len: state.objfunc_archive.len(),
    };
    SafeGeneration {
        state,
        outcomes,
        metrics,
        argmax,
        row,
    }
}

/// Step 6: the next generation of both populations.
pub fn reproduce(
    evaluated: &SafeState,
    params_s: &EvolutionParams,
    params_o: &EvolutionParams,
    settings: &SafeSettings,
) -> Result<SafeState, EvoError> {
    let (sol_streams, obj_streams) = streams(params_s, params_o);
    let g = evaluated.generation as u64;
    let solutions = evolve_generation(&evaluated.solutions, params_s, &sol_streams, g)?;
    let objfuncs = if settings.frozen_objective.is_some() {
        evaluated.objfuncs.clone()
    } else {
        evolve_generation(&evaluated.objfuncs, params_o, &obj_streams, g)?
    };
    Ok(SafeState {
        generation: evaluated.generation + 1,
        solutions,
        objfuncs,
        solution_archive: evaluated.solution_archive.clone(),
        objfunc_archive: evaluated.objfunc_archive.clone(),
    })
}

/// One full SAFE generation: returns the evaluated generation and the next
/// state.
pub fn safe_step<D: SafeDomain + ?Sized>(
    state: SafeState,
    domain: &D,
    params_s: &EvolutionParams,
    params_o: &EvolutionParams,
    settings: &SafeSettings,
    evaluator: &Evaluator,
) -> Result<(SafeGeneration<D::Outcome>, SafeState), EvoError> {
    let evaluated = evaluate_generation(state, domain, evaluator);
    let next = reproduce(&evaluated.state, params_s, params_o, settings)?;
    Ok((evaluated, next))
}

/// Runs `max(generations, 1)` evaluated generations, handing each to
/// `observer` before reproduction.
pub fn run_safe<D, F>(
    domain: &D,
    params_s: &EvolutionParams,
    params_o: &EvolutionParams,
    settings: &SafeSettings,
    evaluator: &Evaluator,
    mut observer: F,
) -> Result<Vec<SafeRow>, EvoError>
where
    D: SafeDomain + ?Sized,
    F: FnMut(&SafeGeneration<D::Outcome>),
{
    let mut state = SafeState::initial(domain, params_s, params_o, settings);
    let generations = params_s.generations.max(1);
    let mut rows = Vec::with_capacity(generations);
    for t in 0..generations {
        let evaluated = evaluate_generation(state, domain, evaluator);
        observer(&evaluated);
        rows.push(evaluated.row.clone());
        if t + 1 == generations {
            break;
        }
        state = reproduce(&evaluated.state, params_s, params_o, settings)?;
    }
    Ok(rows)
}

/// Maze navigation: score = `a * distance_score + b * novelty_score`.
#[derive(Debug, Clone)]
pub struct MazeDomain {
    pub grid: MazeGrid,
    pub max_steps: usize,
}

impl MazeDomain {
    pub fn new(grid: MazeGrid) -> Self {
        Self {
            grid,
            max_steps: maze::DEFAULT_MAX_STEPS,
        }
    }

    pub fn controller(g: &Genome) -> Controller {
        Controller::from_slice(g.as_reals().expect("controller genome is real"))
            .expect("controller genome has 16 values in [0, 1]")
    }
}

impl SafeDomain for MazeDomain {
    type Outcome = Trajectory;

    fn solution_template(&self) -> GenomeTemplate {
        GenomeTemplate::real_uniform(maze::CONTROLLER_LEN, 0.0, 1.0)
    }

    fn evaluate(&self, solution: &Genome) -> Trajectory {
        maze::simulate(&self.grid, &Self::controller(solution), self.max_steps)
    }

    fn behavior(&self, outcome: &Trajectory) -> Option<BehaviorPoint> {
        Some(outcome.endpoint_point())
    }

    fn metrics(&self, outcome: &Trajectory, raw_novelty: Option<f64>) -> SolutionMetrics {
        maze::metrics_from_novelty(&self.grid, outcome.endpoint(), raw_novelty.unwrap_or(0.0))
    }

    fn combine(&self, metrics: &[f64], w: &ObjectiveFunctionGenome) -> f64 {
        w.a * metrics[0] + w.b * metrics[1]
    }
}

/// ZDT minimization folded into `-(a * f1 + b * f2)`.
#[derive(Debug, Clone)]
pub struct ZdtDomain {
    pub problem: ZdtProblem,
}

impl SafeDomain for ZdtDomain {
    type Outcome = ObjPoint;

    fn solution_template(&self) -> GenomeTemplate {
        GenomeTemplate::RealVector {
            bounds: self.problem.all_bounds(),
        }
    }

    fn evaluate(&self, solution: &Genome) -> ObjPoint {
        let x = solution.as_reals().expect("ZDT solutions are real vectors");
        moo::zdt_eval(&self.problem, x).expect("operators keep solutions in bounds")
    }

    fn metrics(&self, outcome: &ObjPoint, _raw_novelty: Option<f64>) -> SolutionMetrics {
        vec![outcome.0, outcome.1]
    }

    fn combine(&self, metrics: &[f64], w: &ObjectiveFunctionGenome) -> f64 {
        -(w.a * metrics[0] + w.b * metrics[1])
    }
}
