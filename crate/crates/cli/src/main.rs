use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coevo_cli::config::{Problem, RawConfig, ZdtConfig, ZdtFormName};
use coevo_cli::run::{load_maze, write_front, zdt_problem};
use coevo_cli::{run_experiment, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(name = "coevo", version, about = "Coevolutionary experiments: OMNIREP and SAFE")]
struct Cli {
    /// JSON experiment config; command-line flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long, global = true, value_name = "N")]
    generations: Option<usize>,
    /// Size of the first population (representations or solutions).
    #[arg(long, global = true, value_name = "N")]
    pop_size: Option<usize>,
    #[arg(long, global = true, value_name = "PATH")]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cooperative coevolution of representations and encodings.
    Omnirep {
        #[arg(value_enum)]
        problem: OmnirepProblemArg,
    },
    /// Commensalistic coevolution of solutions and objective functions.
    Safe {
        #[arg(value_enum)]
        domain: SafeDomainArg,
    },
    /// Write the reference Pareto front of a ZDT problem to front.csv.
    Front {
        /// zdt1 to zdt4.
        zdt: String,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long)]
        verbatim: bool,
    },
    /// Parse a maze file and report its layout or the first error.
    ValidateMaze { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OmnirepProblemArg {
    Bitcount,
    Precision,
    Program,
    Image,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SafeDomainArg {
    Maze,
    Zdt,
}

fn parse_zdt_id(s: &str) -> Option<u8> {
    let id = s.strip_prefix("zdt").unwrap_or(s).parse().ok()?;
    (1..=4).contains(&id).then_some(id)
}

fn run(cli: Cli) -> Result<(), String> {
    let problem = match cli.command {
        Command::ValidateMaze { file } => {
            let grid = load_maze(&file.to_string_lossy()).map_err(|e| format!("{}: {e}", file.display()))?;
            println!(
                "{}: {}x{} maze, start {:?}, goal {:?}",
                file.display(),
                grid.width,
                grid.height,
                grid.start,
                grid.goal
            );
            return Ok(());
        }
        Command::Front { zdt, points, verbatim } => {
            let id = parse_zdt_id(&zdt).ok_or_else(|| format!("unknown ZDT problem `{zdt}` (expected zdt1-zdt4)"))?;
            let cfg = ZdtConfig {
                id,
                form: if verbatim { ZdtFormName::Verbatim } else { ZdtFormName::Standard },
                ..ZdtConfig::default()
            };
            let p = zdt_problem(&cfg).map_err(|e| e.to_string())?;
            let dir = cli.out_dir.unwrap_or_else(|| PathBuf::from("."));
            let path = write_front(&p, points, &dir).map_err(|e| e.to_string())?;
            if !cli.quiet {
                eprintln!("wrote {}", path.display());
            }
            return Ok(());
        }
        Command::Omnirep { problem } => match problem {
            OmnirepProblemArg::Bitcount => Problem::Bitcount,
            OmnirepProblemArg::Precision => Problem::Precision,
            OmnirepProblemArg::Program => Problem::Program,
            OmnirepProblemArg::Image => Problem::Image,
        },
        Command::Safe { domain } => match domain {
            SafeDomainArg::Maze => Problem::Maze,
            SafeDomainArg::Zdt => Problem::Zdt,
        },
    };

    let mut raw = match &cli.config {
        Some(path) => RawConfig::load(path).map_err(|e| e.to_string())?,
        None => RawConfig::default(),
    };
    if raw.problem.is_some_and(|p| p != problem) {
        return Err(format!(
            "config is for problem `{}` but the command asks for `{}`",
            raw.problem.map(Problem::name).unwrap_or_default(),
            problem.name()
        ));
    }
    raw.problem = Some(problem);
    raw.algorithm = Some(problem.algorithm());
    if let Some(seed) = cli.seed {
        raw.seed = Some(seed);
    }
    if let Some(g) = cli.generations {
        raw.generations = Some(g);
    }
    if let Some(n) = cli.pop_size {
        raw.population_a.get_or_insert_with(Default::default).population_size = Some(n);
    }
    if let Some(dir) = cli.out_dir {
        raw.output_dir = Some(dir);
    }
    if let Some(t) = cli.threads {
        raw.threads = Some(t);
    }

    let cfg = ExperimentConfig::resolve(&raw).map_err(|e| e.to_string())?;
    let quiet = cli.quiet;
    let summary = run_experiment(&cfg, &mut |line| {
        if !quiet {
            eprintln!("{line}");
        }
    })
    .map_err(|e| e.to_string())?;
    if !quiet {
        eprintln!("wrote {} rows to {}", summary.rows, cfg.output_dir.join("run.csv").display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
