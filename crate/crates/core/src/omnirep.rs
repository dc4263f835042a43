//! Cooperative coevolution of representations and encodings.
//!
//! Two populations evolve in lockstep. An individual of either population is
//! scored by pairing it with the top individuals ("representatives") of the
//! other population from the previous generation and averaging the negated
//! pairing errors.

use rand::seq::index::sample;
use rand::Rng;
use thiserror::Error;

use crate::evo::{evolve_generation_with, rank, EvoError, EvolutionParams, Individual};
use crate::genome::{Genome, GenomeTemplate};
use crate::parallel::Evaluator;
use crate::problems::ProblemError;
use crate::rng::RngStreams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OmnirepError {
    #[error("pairing with representative {index} failed: {source}")]
    Pairing {
        index: usize,
        #[source]
        source: ProblemError,
    },
    #[error("no representatives to pair with")]
    NoRepresentatives,
    #[error(transparent)]
    Evo(#[from] EvoError),
}

/// A problem solved by combining one representation with one encoding.
pub trait OmnirepProblem: Sync {
    fn representation_template(&self) -> GenomeTemplate;
    fn encoding_template(&self) -> GenomeTemplate;

    /// Error (lower is better, `>= 0`) of the candidate decoded from the pair.
    fn eval(&self, representation: &Genome, encoding: &Genome) -> Result<f64, ProblemError>;

    fn repair_representation(&self, g: Genome) -> Genome {
        g
    }

    fn repair_encoding(&self, g: Genome) -> Genome {
        g
    }

    /// Size of an encoding (total bits, total digits). Used only by the
    /// optional parsimony tie-break.
    fn encoding_size(&self, _encoding: &Genome) -> f64 {
        0.0
    }
}

/// Which population an individual being scored belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Representation,
    Encoding,
}

/// The `n` best genomes of an evaluated population, ties by lowest index.
pub fn select_representatives(prev_pop: &[Individual], n: usize) -> Result<Vec<Genome>, EvoError> {
    Ok(rank(prev_pop)?
        .into_iter()
        .take(n)
        .map(|i| prev_pop[i].genome.clone())
        .collect())
}

/// `n` distinct genomes drawn uniformly, for the first generation.
pub fn initial_representatives<R: Rng + ?Sized>(
    pop: &[Individual],
    n: usize,
    rng: &mut R,
) -> Vec<Genome> {
    let n = n.min(pop.len());
    sample(rng, pop.len(), n)
        .into_iter()
        .map(|i| pop[i].genome.clone())
        .collect()
}

fn pairing_errors<P: OmnirepProblem + ?Sized>(
    g: &Genome,
    reps: &[Genome],
    problem: &P,
    side: Side,
) -> Result<Vec<f64>, OmnirepError> {
    if reps.is_empty() {
        return Err(OmnirepError::NoRepresentatives);
    }
    reps.iter()
        .enumerate()
        .map(|(index, r)| {
            match side {
                Side::Representation => problem.eval(g, r),
                Side::Encoding => problem.eval(r, g),
            }
            .map_err(|source| OmnirepError::Pairing { index, source })
        })
        .collect()
}

/// Mean over representatives of the negated pairing error.
pub fn paired_fitness<P: OmnirepProblem + ?Sized>(
    g: &Genome,
    reps: &[Genome],
    problem: &P,
    side: Side,
) -> Result<f64, OmnirepError> {
    let errs = pairing_errors(g, reps, problem, side)?;
    Ok(-(errs.iter().sum::<f64>() / errs.len() as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmnirepSettings {
    /// Representatives per population.
    pub n_reps: usize,
    /// Break exact fitness ties between encodings in favour of smaller ones.
    pub parsimony: bool,
}

impl Default for OmnirepSettings {
    fn default() -> Self {
        Self {
            n_reps: 4,
            parsimony: false,
        }
    }
}

/// Lowest-error pairing seen so far.
#[derive(Debug, Clone, PartialEq)]
pub struct BestPair {
    pub representation: Genome,
    pub encoding: Genome,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmnirepRow {
    pub generation: usize,
    pub rep_best: f64,
    pub rep_mean: f64,
    pub enc_best: f64,
    pub enc_mean: f64,
    /// Best-so-far pairing error.
    pub best_pair_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmnirepTrace {
    pub rows: Vec<OmnirepRow>,
    pub best: BestPair,
}

/// Snapshot handed to observers after each generation is evaluated.
pub struct OmnirepGeneration<'a> {
    pub generation: usize,
    pub representations: &'a [Individual],
    pub encodings: &'a [Individual],
    pub best: &'a BestPair,
}

fn stats(pop: &[Individual]) -> (f64, f64) {
    let fits = pop.iter().filter_map(|i| i.fitness);
    let (best, sum) = fits.fold((f64::NEG_INFINITY, 0.0), |(b, s), f| (b.max(f), s + f));
    (best, sum / pop.len() as f64)
}

/// Runs the coevolution with default settings on the calling thread.
pub fn coevolve<P: OmnirepProblem + ?Sized>(
    problem: &P,
    params_rep: &EvolutionParams,
    params_enc: &EvolutionParams,
    n_reps: usize,
) -> Result<OmnirepTrace, OmnirepError> {
    let settings = OmnirepSettings {
        n_reps,
        ..Default::default()
    };
    coevolve_with(problem, params_rep, params_enc, &settings, &Evaluator::sequential(), |_| {})
}

/// Runs `max(generations, 1)` evaluated generations of both populations.
///
/// Generation `t` is scored against representatives taken from generation
/// `t - 1` (a uniform draw at `t = 0`); both populations are evaluated before
/// either reproduces.
pub fn coevolve_with<P, F>(
    problem: &P,
    params_rep: &EvolutionParams,
    params_enc: &EvolutionParams,
    settings: &OmnirepSettings,
    evaluator: &Evaluator,
    mut observer: F,
) -> Result<OmnirepTrace, OmnirepError>
where
    P: OmnirepProblem + ?Sized,
    F: FnMut(&OmnirepGeneration<'_>),
{
    let rep_streams = RngStreams::new(params_rep.seed).child("omnirep/representations");
    let enc_streams = RngStreams::new(params_enc.seed).child("omnirep/encodings");
    let rep_template = problem.representation_template();
    let enc_template = problem.encoding_template();

    let init = |template: &GenomeTemplate, streams: &RngStreams, n: usize, repair: &dyn Fn(Genome) -> Genome| {
        let init = streams.child("init");
        (0..n)
            .map(|i| Individual::new(repair(template.sample(&mut init.stream(0, i as u64)))))
            .collect::<Vec<_>>()
    };
    let mut reps_pop = init(&rep_template, &rep_streams, params_rep.population_size, &|g| {
        problem.repair_representation(g)
    });
    let mut encs_pop = init(&enc_template, &enc_streams, params_enc.population_size, &|g| {
        problem.repair_encoding(g)
    });

    let n_reps = settings.n_reps.max(1);
    let mut rep_partners =
        initial_representatives(&reps_pop, n_reps, &mut rep_streams.child("representatives").stream(0, 0));
    let mut enc_partners =
        initial_representatives(&encs_pop, n_reps, &mut enc_streams.child("representatives").stream(0, 0));

    let mut best: Option<BestPair> = None;
    let mut rows = Vec::new();
    let evaluated = params_rep.generations.max(1);

    for generation in 0..evaluated {
        let rep_errs = evaluator.map(reps_pop.len(), |i| {
            pairing_errors(&reps_pop[i].genome, &enc_partners, problem, Side::Representation)
        });
        let enc_errs = evaluator.map(encs_pop.len(), |i| {
            pairing_errors(&encs_pop[i].genome, &rep_partners, problem, Side::Encoding)
        });

        for (i, errs) in rep_errs.into_iter().enumerate() {
            let errs = errs?;
            for (j, &e) in errs.iter().enumerate() {
                if best.as_ref().is_none_or(|b| e < b.error) {
                    best = Some(BestPair {
                        representation: reps_pop[i].genome.clone(),
                        encoding: enc_partners[j].clone(),
                        error: e,
                    });
                }
            }
            reps_pop[i].fitness = Some(-(errs.iter().sum::<f64>() / errs.len() as f64));
        }
        for (i, errs) in enc_errs.into_iter().enumerate() {
            let errs = errs?;
            for (j, &e) in errs.iter().enumerate() {
                if best.as_ref().is_none_or(|b| e < b.error) {
                    best = Some(BestPair {
                        representation: rep_partners[j].clone(),
                        encoding: encs_pop[i].genome.clone(),
                        error: e,
                    });
                }
            }
            encs_pop[i].fitness = Some(-(errs.iter().sum::<f64>() / errs.len() as f64));
            encs_pop[i].tiebreak = if settings.parsimony {
                -problem.encoding_size(&encs_pop[i].genome)
            } else {
                0.0
            };
        }

        let best_ref = best.as_ref().expect("at least one pairing evaluated");
        let (rep_best, rep_mean) = stats(&reps_pop);
        let (enc_best, enc_mean) = stats(&encs_pop);
        rows.push(OmnirepRow {
            generation,
            rep_best,
            rep_mean,
            enc_best,
            enc_mean,
            best_pair_error: best_ref.error,
        });
        observer(&OmnirepGeneration {
            generation,
            representations: &reps_pop,
            encodings: &encs_pop,
            best: best_ref,
        });

        if generation + 1 == evaluated {
            break;
        }
        rep_partners = select_representatives(&reps_pop, n_reps)?;
        enc_partners = select_representatives(&encs_pop, n_reps)?;
        let g = generation as u64;
        reps_pop = evolve_generation_with(&reps_pop, params_rep, &rep_streams, g, |x| {
            problem.repair_representation(x)
        })?;
        encs_pop = evolve_generation_with(&encs_pop, params_enc, &enc_streams, g, |x| {
            problem.repair_encoding(x)
        })?;
    }

    Ok(OmnirepTrace {
        rows,
        best: best.expect("at least one generation evaluated"),
    })
}
