//! Experiment configuration: a JSON document with optional keys, resolved
//! against per-problem defaults into a fully populated [`ExperimentConfig`].

use std::path::{Path, PathBuf};

use coevo::evo::EvolutionParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Omnirep,
    Safe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Bitcount,
    Precision,
    Program,
    Image,
    Maze,
    Zdt,
}

impl Problem {
    pub fn algorithm(self) -> Algorithm {
        match self {
            Problem::Maze | Problem::Zdt => Algorithm::Safe,
            _ => Algorithm::Omnirep,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Problem::Bitcount => "bitcount",
            Problem::Precision => "precision",
            Problem::Program => "program",
            Problem::Image => "image",
            Problem::Maze => "maze",
            Problem::Zdt => "zdt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ZdtFormName {
    #[default]
    Standard,
    Verbatim,
}

impl From<ZdtFormName> for coevo::moo::ZdtForm {
    fn from(f: ZdtFormName) -> Self {
        match f {
            ZdtFormName::Standard => coevo::moo::ZdtForm::Standard,
            ZdtFormName::Verbatim => coevo::moo::ZdtForm::Verbatim,
        }
    }
}

/// Settings for one population. Missing keys take the problem's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tournament_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossover_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elitism_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BitcountConfig {
    pub points: usize,
    /// Target coefficients are drawn uniformly from `[-target_range, target_range]`.
    pub target_range: f64,
    /// Decoded coefficients span `[-coeff_range, coeff_range)`.
    pub coeff_range: f64,
}

impl Default for BitcountConfig {
    fn default() -> Self {
        Self {
            points: 20,
            target_range: 5.0,
            coeff_range: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrecisionConfig {
    pub points: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self { points: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProgramConfig {
    pub inputs: usize,
    pub input_range: f64,
}

impl Default for ProgramConfig {
    fn default() -> Self {
        Self {
            inputs: 10,
            input_range: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImageConfig {
    /// Binary PPM target; a generated test pattern when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PathBuf>,
    /// Test-pattern size, ignored when `target` is set.
    pub width: usize,
    pub height: usize,
    pub blocks: usize,
    pub max_block_len: usize,
    pub base_color: [u8; 3],
}

impl Default for ImageConfig {
    fn default() -> Self {
        Self {
            target: None,
            width: 16,
            height: 16,
            blocks: 32,
            max_block_len: 16,
            base_color: [0, 0, 0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MazeConfig {
    /// Bundled maze name (`maze1`, `maze2`) or a path to a maze file.
    pub maze: String,
    pub max_steps: usize,
    /// Freezes every objective function at `[a, b]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frozen_objective: Option<[f64; 2]>,
}

impl Default for MazeConfig {
    fn default() -> Self {
        Self {
            maze: "maze2".into(),
            max_steps: coevo::maze::DEFAULT_MAX_STEPS,
            frozen_objective: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZdtConfig {
    pub id: u8,
    pub form: ZdtFormName,
    /// Number of decision variables; the problem's customary value when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub front_points: usize,
    /// Pareto archive size limit; unbounded when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archive_capacity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frozen_objective: Option<[f64; 2]>,
}

impl Default for ZdtConfig {
    fn default() -> Self {
        Self {
            id: 1,
            form: ZdtFormName::Standard,
            k: None,
            front_points: 1000,
            archive_capacity: None,
            frozen_objective: None,
        }
    }
}

/// The document as written by the user.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub algorithm: Option<Algorithm>,
    #[serde(default)]
    pub problem: Option<Problem>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub generations: Option<usize>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub report_interval: Option<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Representations (OMNIREP) or solutions (SAFE).
    #[serde(default)]
    pub population_a: Option<PopulationConfig>,
    /// Encodings (OMNIREP) or objective functions (SAFE).
    #[serde(default)]
    pub population_b: Option<PopulationConfig>,
    #[serde(default)]
    pub bitcount: Option<BitcountConfig>,
    #[serde(default)]
    pub precision: Option<PrecisionConfig>,
    #[serde(default)]
    pub program: Option<ProgramConfig>,
    #[serde(default)]
    pub image: Option<ImageConfig>,
    #[serde(default)]
    pub maze: Option<MazeConfig>,
    #[serde(default)]
    pub zdt: Option<ZdtConfig>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}

/// Fully resolved settings; serialized verbatim as `config_echo.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub problem: Problem,
    pub seed: u64,
    pub generations: usize,
    pub threads: usize,
    pub report_interval: usize,
    pub output_dir: PathBuf,
    pub population_a: PopulationConfig,
    pub population_b: PopulationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bitcount: Option<BitcountConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub program: Option<ProgramConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<ImageConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maze: Option<MazeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zdt: Option<ZdtConfig>,
}

/// Genome lengths of the two populations, used for the `1/len` mutation default.
fn genome_lengths(problem: Problem, raw: &RawConfig) -> (usize, usize) {
    match problem {
        Problem::Bitcount => (coevo::problems::bitcount::DEFAULT_TOTAL_BITS, 4),
        Problem::Precision => (coevo::problems::precision::TERMS, coevo::problems::precision::TERMS),
        Problem::Program => (
            coevo::problems::program::PROGRAM_LINES,
            coevo::problems::program::GENERIC_INSTRUCTIONS,
        ),
        Problem::Image => {
            let n = raw.image.clone().unwrap_or_default().blocks;
            (n, n)
        }
        Problem::Maze => (coevo::maze::CONTROLLER_LEN, 2),
        Problem::Zdt => {
            let z = raw.zdt.clone().unwrap_or_default();
            let k = z.k.unwrap_or(if z.id == 4 { 10 } else { 30 });
            (k, 2)
        }
    }
}

/// Per-problem population defaults that differ from the generic ones.
fn problem_defaults(problem: Problem) -> (PopulationConfig, PopulationConfig, usize) {
    let none = PopulationConfig::default();
    match problem {
        Problem::Bitcount => (
            PopulationConfig {
                mutation_rate: Some(0.1),
                ..none.clone()
            },
            PopulationConfig {
                elitism_count: Some(4),
                ..none
            },
            200,
        ),
        Problem::Program => (
            PopulationConfig {
                population_size: Some(300),
                mutation_rate: Some(0.2),
                ..none.clone()
            },
            PopulationConfig {
                population_size: Some(300),
                mutation_rate: Some(0.3),
                ..none
            },
            100,
        ),
        Problem::Precision | Problem::Image => (none.clone(), none, 200),
        Problem::Maze | Problem::Zdt => (
            PopulationConfig {
                population_size: Some(250),
                ..none.clone()
            },
            PopulationConfig {
                population_size: Some(25),
                // slowly drifting weights; the 1/len default moves them too fast
                mutation_rate: Some(0.1),
                ..none
            },
            if problem == Problem::Maze { 250 } else { 200 },
        ),
    }
}

fn resolve_population(
    key: &str,
    user: Option<&PopulationConfig>,
    preset: &PopulationConfig,
    genome_len: usize,
) -> Result<PopulationConfig, ConfigError> {
    let user = user.cloned().unwrap_or_default();
    let population_size = user.population_size.or(preset.population_size).unwrap_or(100);
    let defaults = EvolutionParams::with_defaults(population_size.max(1), 1, genome_len.max(1));
    let resolved = PopulationConfig {
        population_size: Some(population_size),
        tournament_size: Some(
            user.tournament_size
                .or(preset.tournament_size)
                .unwrap_or(defaults.tournament_size),
        ),
        crossover_prob: Some(user.crossover_prob.or(preset.crossover_prob).unwrap_or(defaults.crossover_prob)),
        mutation_rate: Some(user.mutation_rate.or(preset.mutation_rate).unwrap_or(defaults.mutation_rate)),
        elitism_count: Some(
            user.elitism_count
                .or(preset.elitism_count)
                .unwrap_or(defaults.elitism_count)
                .min(population_size.saturating_sub(1)),
        ),
    };
    to_params(key, &resolved, 1, 0)?;
    Ok(resolved)
}

/// Builds engine parameters from a resolved population section.
pub fn to_params(
    key: &str,
    p: &PopulationConfig,
    generations: usize,
    seed: u64,
) -> Result<EvolutionParams, ConfigError> {
    fn get<T>(v: Option<T>, key: &str, name: &str) -> Result<T, ConfigError> {
        v.ok_or_else(|| invalid(&format!("{key}.{name}"), "missing"))
    }
    let params = EvolutionParams {
        population_size: get(p.population_size, key, "population_size")?,
        generations,
        tournament_size: get(p.tournament_size, key, "tournament_size")?,
        crossover_prob: get(p.crossover_prob, key, "crossover_prob")?,
        mutation_rate: get(p.mutation_rate, key, "mutation_rate")?,
        elitism_count: get(p.elitism_count, key, "elitism_count")?,
        seed,
    };
    params.validate().map_err(|e| match e {
        coevo::EvoError::InvalidParam { name, reason } => invalid(&format!("{key}.{name}"), reason),
        other => invalid(key, other.to_string()),
    })?;
    Ok(params)
}

impl ExperimentConfig {
    /// Fills every missing key. `problem` must be set by now.
    pub fn resolve(raw: &RawConfig) -> Result<Self, ConfigError> {
        let problem = raw.problem.ok_or_else(|| invalid("problem", "missing"))?;
        let algorithm = raw.algorithm.unwrap_or(problem.algorithm());
        if algorithm != problem.algorithm() {
            return Err(invalid("algorithm", format!("does not run problem `{}`", problem.name())));
        }
        let sections = [
            ("bitcount", raw.bitcount.is_some(), Problem::Bitcount),
            ("precision", raw.precision.is_some(), Problem::Precision),
            ("program", raw.program.is_some(), Problem::Program),
            ("image", raw.image.is_some(), Problem::Image),
            ("maze", raw.maze.is_some(), Problem::Maze),
            ("zdt", raw.zdt.is_some(), Problem::Zdt),
        ];
        for (key, present, owner) in sections {
            if present && owner != problem {
                return Err(invalid(key, format!("section does not apply to problem `{}`", problem.name())));
            }
        }

        let (preset_a, preset_b, preset_generations) = problem_defaults(problem);
        let (len_a, len_b) = genome_lengths(problem, raw);
        let generations = raw.generations.unwrap_or(preset_generations);
        let report_interval = raw.report_interval.unwrap_or(10);
        if report_interval == 0 {
            return Err(invalid("report_interval", "must be at least 1"));
        }

        let cfg = Self {
            algorithm,
            problem,
            seed: raw.seed.unwrap_or(0),
            generations,
            threads: raw.threads.unwrap_or(1).max(1),
            report_interval,
            output_dir: raw.output_dir.clone().unwrap_or_else(|| PathBuf::from("out")),
            population_a: resolve_population("population_a", raw.population_a.as_ref(), &preset_a, len_a)?,
            population_b: resolve_population("population_b", raw.population_b.as_ref(), &preset_b, len_b)?,
            bitcount: (problem == Problem::Bitcount).then(|| raw.bitcount.clone().unwrap_or_default()),
            precision: (problem == Problem::Precision).then(|| raw.precision.clone().unwrap_or_default()),
            program: (problem == Problem::Program).then(|| raw.program.clone().unwrap_or_default()),
            image: (problem == Problem::Image).then(|| raw.image.clone().unwrap_or_default()),
            maze: (problem == Problem::Maze).then(|| raw.maze.clone().unwrap_or_default()),
            zdt: (problem == Problem::Zdt).then(|| {
                let mut z = raw.zdt.clone().unwrap_or_default();
                z.k = Some(len_a);
                z
            }),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), ConfigError> {
        if let Some(b) = &self.bitcount {
            if b.points == 0 {
                return Err(invalid("bitcount.points", "must be at least 1"));
            }
            if !(b.coeff_range > 0.0) || !(b.target_range >= 0.0) {
                return Err(invalid("bitcount", "ranges must be positive"));
            }
        }
        if let Some(p) = &self.precision {
            if p.points == 0 {
                return Err(invalid("precision.points", "must be at least 1"));
            }
        }
        if let Some(p) = &self.program {
            if p.inputs == 0 {
                return Err(invalid("program.inputs", "must be at least 1"));
            }
            if !(p.input_range >= 0.0) {
                return Err(invalid("program.input_range", "must be non-negative"));
            }
        }
        if let Some(i) = &self.image {
            if i.target.is_none() && (i.width == 0 || i.height == 0) {
                return Err(invalid("image", "width and height must be positive"));
            }
            if let Some(t) = &i.target {
                if !t.exists() {
                    return Err(invalid("image.target", format!("{} does not exist", t.display())));
                }
            }
            if i.max_block_len == 0 {
                return Err(invalid("image.max_block_len", "must be at least 1"));
            }
        }
        let check_weights = |key: &str, w: &Option<[f64; 2]>| match w {
            Some(w) if w.iter().any(|v| !(0.0..=1.0).contains(v)) => {
                Err(invalid(key, "weights must lie in [0, 1]"))
            }
            _ => Ok(()),
        };
        if let Some(m) = &self.maze {
            if coevo::maze::bundled(&m.maze).is_none() && !Path::new(&m.maze).exists() {
                return Err(invalid("maze.maze", format!("`{}` is neither a bundled maze nor a file", m.maze)));
            }
            check_weights("maze.frozen_objective", &m.frozen_objective)?;
        }
        if let Some(z) = &self.zdt {
            if !(1..=4).contains(&z.id) {
                return Err(invalid("zdt.id", "expected 1-4"));
            }
            if z.k.unwrap_or(0) < 2 {
                return Err(invalid("zdt.k", "must be at least 2"));
            }
            if z.front_points == 0 {
                return Err(invalid("zdt.front_points", "must be at least 1"));
            }
            check_weights("zdt.frozen_objective", &z.frozen_objective)?;
        }
        Ok(())
    }

    pub fn params(&self) -> Result<(EvolutionParams, EvolutionParams), ConfigError> {
        Ok((
            to_params("population_a", &self.population_a, self.generations, self.seed)?,
            to_params("population_b", &self.population_b, self.generations, self.seed)?,
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }
}
