//! Single-population evolutionary machinery shared by both coevolutionary
//! engines: tournament selection, one-point crossover, per-gene mutation and
//! elitist generational replacement.
//!
//! Fitness is always maximized. Ties are broken by the lowest population
//! index so that every run is reproducible.

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::genome::Genome;
use crate::novelty::BehaviorPoint;
use crate::rng::RngStreams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvoError {
    #[error("population is empty")]
    EmptyPopulation,
    #[error("individual {0} has no fitness")]
    UnsetFitness(usize),
    #[error("tournament size {k} is outside 1..={pop}")]
    TournamentSize { k: usize, pop: usize },
    #[error("genome mismatch: {0}")]
    GenomeMismatch(String),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub fitness: Option<f64>,
    /// Secondary key, compared only when fitness values are exactly equal.
    pub tiebreak: f64,
    pub behavior: Option<BehaviorPoint>,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Self {
            genome,
            fitness: None,
            tiebreak: 0.0,
            behavior: None,
        }
    }

    pub fn with_fitness(genome: Genome, fitness: f64) -> Self {
        Self {
            fitness: Some(fitness),
            ..Self::new(genome)
        }
    }
}

/// Per-population evolutionary settings.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionParams {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub crossover_prob: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    pub elitism_count: usize,
    pub seed: u64,
}

impl EvolutionParams {
    /// Conventional settings with `mutation_rate = 1 / genome_len`.
    pub fn with_defaults(population_size: usize, generations: usize, genome_len: usize) -> Self {
        Self {
            population_size,
            generations,
            tournament_size: 5.min(population_size.max(1)),
            crossover_prob: 0.8,
            mutation_rate: 1.0 / genome_len.max(1) as f64,
            elitism_count: 1.min(population_size.saturating_sub(1)),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), EvoError> {
        let bad = |name, reason: String| Err(EvoError::InvalidParam { name, reason });
        if self.population_size == 0 {
            return bad("population_size", "must be positive".into());
        }
        if self.generations == 0 {
            return bad("generations", "must be positive".into());
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return bad(
                "tournament_size",
                format!("must be in 1..={}", self.population_size),
            );
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return bad("crossover_prob", format!("{} not in [0,1]", self.crossover_prob));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("mutation_rate", format!("{} not in [0,1]", self.mutation_rate));
        }
        if self.elitism_count >= self.population_size {
            return bad(
                "elitism_count",
                format!("must be below population_size {}", self.population_size),
            );
        }
        Ok(())
    }
}

fn key(ind: &Individual, index: usize) -> Result<(f64, f64), EvoError> {
    match ind.fitness {
        Some(f) if !f.is_nan() => Ok((f, ind.tiebreak)),
        _ => Err(EvoError::UnsetFitness(index)),
    }
}

fn compare_keys(a: (f64, f64), b: (f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Population indices ordered best first; equal keys keep index order.
pub fn rank(pop: &[Individual]) -> Result<Vec<usize>, EvoError> {
    let keys = pop
        .iter()
        .enumerate()
        .map(|(i, ind)| key(ind, i))
        .collect::<Result<Vec<_>, _>>()?;
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| compare_keys(keys[b], keys[a]).then(a.cmp(&b)));
    Ok(order)
}

/// Index of the winner among `k` uniform draws with replacement.
pub fn tournament_select<R: Rng + ?Sized>(
    pop: &[Individual],
    k: usize,
    rng: &mut R,
) -> Result<usize, EvoError> {
    if pop.is_empty() {
        return Err(EvoError::EmptyPopulation);
    }
    if k == 0 || k > pop.len() {
        return Err(EvoError::TournamentSize { k, pop: pop.len() });
    }
    let n = pop.len();
    tournament_winner(pop, (0..k).map(|_| rng.random_range(0..n)))
}

/// Best of the drawn indices; ties go to the lowest index.
fn tournament_winner(
    pop: &[Individual],
    draws: impl IntoIterator<Item = usize>,
) -> Result<usize, EvoError> {
    let keys = pop
        .iter()
        .enumerate()
        .map(|(i, ind)| key(ind, i))
        .collect::<Result<Vec<_>, _>>()?;
    let mut best: Option<usize> = None;
    for c in draws {
        best = Some(match best {
            None => c,
            Some(b) => match compare_keys(keys[c], keys[b]) {
                Ordering::Greater => c,
                Ordering::Equal if c < b => c,
                _ => b,
            },
        });
    }
    best.ok_or(EvoError::EmptyPopulation)
}

fn splice<T: Clone>(a: &[T], b: &[T], cut: usize) -> (Vec<T>, Vec<T>) {
    let mut c1 = a[..cut].to_vec();
    c1.extend_from_slice(&b[cut..]);
    let mut c2 = b[..cut].to_vec();
    c2.extend_from_slice(&a[cut..]);
    (c1, c2)
}

/// Crossover at a fixed cut point `cut` in `1..len`.
pub fn crossover_at(a: &Genome, b: &Genome, cut: usize) -> Result<(Genome, Genome), EvoError> {
    if a.kind() != b.kind() || a.len() != b.len() {
        return Err(EvoError::GenomeMismatch(format!(
            "{:?}/{} vs {:?}/{}",
            a.kind(),
            a.len(),
            b.kind(),
            b.len()
        )));
    }
    if a.len() < 2 || cut == 0 || cut >= a.len() {
        return Err(EvoError::GenomeMismatch(format!(
            "cut {cut} invalid for length {}",
            a.len()
        )));
    }
    Ok(match (a, b) {
        (Genome::BitString(x), Genome::BitString(y)) => {
            let (c1, c2) = splice(x, y, cut);
            (Genome::BitString(c1), Genome::BitString(c2))
        }
        (Genome::RealVector { values: x, bounds }, Genome::RealVector { values: y, .. }) => {
            let (c1, c2) = splice(x, y, cut);
            (
                Genome::RealVector { values: c1, bounds: bounds.clone() },
                Genome::RealVector { values: c2, bounds: bounds.clone() },
            )
        }
        (Genome::IntVector { values: x, bounds }, Genome::IntVector { values: y, .. }) => {
            let (c1, c2) = splice(x, y, cut);
            (
                Genome::IntVector { values: c1, bounds: bounds.clone() },
                Genome::IntVector { values: c2, bounds: bounds.clone() },
            )
        }
        (Genome::PairList { pairs: x, bounds }, Genome::PairList { pairs: y, .. }) => {
            let (c1, c2) = splice(x, y, cut);
            (
                Genome::PairList { pairs: c1, bounds: *bounds },
                Genome::PairList { pairs: c2, bounds: *bounds },
            )
        }
        _ => unreachable!("kinds checked above"),
    })
}

/// Swaps suffixes after a cut point drawn uniformly from `1..len`.
pub fn one_point_crossover<R: Rng + ?Sized>(
    a: &Genome,
    b: &Genome,
    rng: &mut R,
) -> Result<(Genome, Genome), EvoError> {
    if a.len() < 2 {
        return Err(EvoError::GenomeMismatch(format!(
            "crossover needs length >= 2, got {}",
            a.len()
        )));
    }
    let cut = rng.random_range(1..a.len());
    crossover_at(a, b, cut)
}

/// Perturbs each gene independently with probability `rate`.
///
/// Bits flip; reals get Gaussian noise with sigma of a tenth of the bound
/// width and are clamped; integers are resampled within bounds; pairs have
/// one of their two elements resampled.
pub fn mutate<R: Rng + ?Sized>(g: &Genome, rate: f64, rng: &mut R) -> Genome {
    let mut out = g.clone();
    if rate <= 0.0 {
        return out;
    }
    match &mut out {
        Genome::BitString(bits) => {
            for bit in bits.iter_mut() {
                if rng.random_bool(rate.min(1.0)) {
                    *bit = !*bit;
                }
            }
        }
        Genome::RealVector { values, bounds } => {
            for (v, &(lo, hi)) in values.iter_mut().zip(bounds.iter()) {
                if rng.random_bool(rate.min(1.0)) {
                    let sigma = 0.1 * (hi - lo);
                    let noise = if sigma > 0.0 {
                        Normal::new(0.0, sigma).expect("finite sigma").sample(rng)
                    } else {
                        0.0
                    };
                    *v = (*v + noise).clamp(lo, hi);
                }
            }
        }
        Genome::IntVector { values, bounds } => {
            for (v, &(lo, hi)) in values.iter_mut().zip(bounds.iter()) {
                if rng.random_bool(rate.min(1.0)) {
                    *v = rng.random_range(lo..=hi);
                }
            }
        }
        Genome::PairList { pairs, bounds } => {
            let ((lo0, hi0), (lo1, hi1)) = *bounds;
            for p in pairs.iter_mut() {
                if rng.random_bool(rate.min(1.0)) {
                    if rng.random::<bool>() {
                        p.0 = rng.random_range(lo0..=hi0);
                    } else {
                        p.1 = rng.random_range(lo1..=hi1);
                    }
                }
            }
        }
    }
    out
}

/// One generational step with the identity repair.
pub fn evolve_generation(
    pop: &[Individual],
    params: &EvolutionParams,
    streams: &RngStreams,
    generation: u64,
) -> Result<Vec<Individual>, EvoError> {
    evolve_generation_with(pop, params, streams, generation, |g| g)
}

/// Produces the next population: the `elitism_count` best individuals are
/// copied verbatim (fitness kept), every other slot is filled by tournament
/// selection, optional crossover and mutation, followed by `repair`.
///
/// Offspring slot `i` draws only from `streams.stream(generation, i)`.
pub fn evolve_generation_with<F>(
    pop: &[Individual],
    params: &EvolutionParams,
    streams: &RngStreams,
    generation: u64,
    repair: F,
) -> Result<Vec<Individual>, EvoError>
where
    F: Fn(Genome) -> Genome,
{
    if pop.is_empty() {
        return Err(EvoError::EmptyPopulation);
    }
    let order = rank(pop)?;
    let elites = params.elitism_count.min(pop.len().saturating_sub(1));
    let k = params.tournament_size.clamp(1, pop.len());

    let mut next = Vec::with_capacity(pop.len());
    for &i in order.iter().take(elites) {
        next.push(pop[i].clone());
    }
    for slot in elites..pop.len() {
        let mut rng = streams.stream(generation, slot as u64);
        let p1 = tournament_select(pop, k, &mut rng)?;
        let p2 = tournament_select(pop, k, &mut rng)?;
        let parent = &pop[p1].genome;
        let child = if parent.len() >= 2 && rng.random_bool(params.crossover_prob) {
            one_point_crossover(parent, &pop[p2].genome, &mut rng)?.0
        } else {
            parent.clone()
        };
        let child = repair(mutate(&child, params.mutation_rate, &mut rng));
        next.push(Individual::new(child));
    }
    Ok(next)
}
