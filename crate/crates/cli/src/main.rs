use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use tomonoid::{
    brute_force, class_poset, coextend::pairs_for, coextensions_for_pair, format_table, generate_into, parse_table,
    parse_table_unverified, ramify, rees_quotient, render, verify_table, CountReport, Filter, Format, GenerateOptions,
    IdempotentPair, ParseError, RecordLine, TomoError, TomonoidTable, DEFAULT_ORACLE_CAP,
};

/// Finite negative tomonoids: verify, quotient, ramify, extend, generate.
#[derive(Parser)]
#[command(name = "tomo", version)]
struct Cli {
    /// Suppress diagnostics on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct FilterArgs {
    /// Restrict to commutative tomonoids.
    #[arg(long)]
    commutative: bool,
    /// Restrict to Archimedean tomonoids.
    #[arg(long)]
    archimedean: bool,
}

impl FilterArgs {
    fn filter(self) -> Filter {
        Filter {
            commutative: self.commutative,
            archimedean: self.archimedean,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a table against the tomonoid axioms.
    Verify { file: PathBuf },

    /// Rees quotient by the element K.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        q: usize,
    },

    /// Print the ramification classes for an idempotent pair.
    Ramify {
        file: PathBuf,
        #[arg(long)]
        el: usize,
        #[arg(long)]
        er: usize,
        #[command(flatten)]
        filter: FilterArgs,
        /// Also print the condensed class order in DOT.
        #[arg(long)]
        dot: bool,
    },

    /// All one-element coextensions of a table.
    Extend {
        file: PathBuf,
        #[arg(long, requires = "er", conflicts_with = "all_pairs")]
        el: Option<usize>,
        #[arg(long, requires = "el", conflicts_with = "all_pairs")]
        er: Option<usize>,
        /// Try every admissible pair (the default without --el/--er).
        #[arg(long)]
        all_pairs: bool,
        #[command(flatten)]
        filter: FilterArgs,
    },

    /// Generate every tomonoid up to a size.
    Generate {
        #[arg(long)]
        max_size: usize,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        jobs: Option<usize>,
        /// Start from this table instead of the trivial tomonoid.
        #[arg(long)]
        seed_file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Brute-force enumeration of one size.
    Oracle {
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        count_only: bool,
    },

    /// Draw the level classes of a table.
    Render {
        file: PathBuf,
        #[arg(long, default_value = "ascii")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit 1 for findings about the input, 2 for usage and structure problems.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn finding(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 1,
            error: error.into(),
        }
    }

    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: error.into(),
        }
    }
}

impl From<TomoError> for Failure {
    fn from(e: TomoError) -> Self {
        match e {
            TomoError::Axioms(_)
            | TomoError::PartitionAxioms(_)
            | TomoError::Obstructed { .. }
            | TomoError::Soundness(_) => Self::finding(e),
            _ => Self::usage(e),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        let code = e.code();
        let err = anyhow::Error::new(e).context(code);
        match code {
            "E-AXIOM" => Self::finding(err),
            _ => Self::usage(err),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            if !quiet {
                eprintln!("tomo: {error:#}");
            }
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::usage)
}

fn load(path: &Path) -> Result<TomonoidTable, Failure> {
    Ok(parse_table(&read(path)?)?)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p)
                .with_context(|| format!("cannot create {}", p.display()))
                .map_err(Failure::usage)?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Outcome {
    let quiet = cli.quiet;
    let note = |msg: String| {
        if !quiet {
            eprintln!("{msg}");
        }
    };
    let mut stdout = BufWriter::new(io::stdout().lock());

    match cli.command {
        Command::Verify { file } => {
            let t = parse_table_unverified(&read(&file)?)?;
            let report = verify_table(&t);
            writeln!(stdout, "{report}")?;
            if !report.ok() {
                stdout.flush()?;
                return Err(Failure::finding(anyhow::anyhow!(
                    "{} violation(s) in {}",
                    report.violations().len(),
                    file.display()
                )));
            }
        }

        Command::Quotient { file, q } => {
            let t = load(&file)?;
            write!(stdout, "{}", format_table(&rees_quotient(&t, q)?))?;
        }

        Command::Ramify {
            file,
            el,
            er,
            filter,
            dot,
        } => {
            let t = load(&file)?;
            let r = ramify(&t, IdempotentPair::new(el, er), filter.commutative, filter.archimedean)?;
            write!(stdout, "{r}")?;
            if r.is_obstructed() {
                stdout.flush()?;
                return Err(obstruction(IdempotentPair::new(el, er)));
            }
            if dot {
                write!(stdout, "{}", class_poset(&r)?.to_dot())?;
            }
        }

        Command::Extend {
            file,
            el,
            er,
            all_pairs: _,
            filter,
        } => {
            let t = load(&file)?;
            let pairs = match (el, er) {
                (Some(l), Some(r)) => vec![IdempotentPair::new(l, r)],
                _ => pairs_for(&t, filter.filter())?,
            };
            let mut emitted = 0;
            for &pair in &pairs {
                let found = coextensions_for_pair(&t, pair, filter.commutative, filter.archimedean, false)?;
                for c in found {
                    let line = RecordLine::new(&c.table, None, Some(c.pair), Some(c.choice));
                    writeln!(stdout, "{}", line.to_json())?;
                    emitted += 1;
                }
            }
            note(format!("{emitted} coextension(s)"));
            if emitted == 0 {
                stdout.flush()?;
                return Err(match pairs[..] {
                    [pair] => obstruction(pair),
                    _ => Failure::finding(anyhow::anyhow!("there is no one-element coextension for any pair")),
                });
            }
        }

        Command::Generate {
            max_size,
            filter,
            count_only,
            jobs,
            seed_file,
            out,
        } => {
            let mut opts = GenerateOptions::new(max_size, filter.filter());
            opts.jobs = jobs;
            opts.seed = seed_file.as_deref().map(load).transpose()?;
            let mut sink = output(out.as_deref())?;
            let mut report = CountReport::default();
            let mut total = 0usize;
            generate_into(&opts, |rec| -> Outcome {
                total += 1;
                if count_only {
                    report.add(&rec.table);
                } else {
                    writeln!(sink, "{}", RecordLine::from(&rec).to_json())?;
                }
                Ok(())
            })?;
            if count_only {
                write!(sink, "{report}")?;
            }
            sink.flush()?;
            note(format!("{total} tomonoid(s)"));
        }

        Command::Oracle {
            size,
            filter,
            count_only,
        } => {
            let cap = match std::env::var("TOMO_ORACLE_CAP") {
                Ok(v) => v
                    .parse()
                    .with_context(|| format!("TOMO_ORACLE_CAP={v:?} is not a size"))
                    .map_err(Failure::usage)?,
                Err(_) => DEFAULT_ORACLE_CAP,
            };
            let tables = brute_force(size, filter.filter(), cap)?;
            if count_only {
                let mut report = CountReport::default();
                tables.iter().for_each(|t| report.add(t));
                write!(stdout, "{report}")?;
            } else {
                for t in &tables {
                    writeln!(stdout, "{}", RecordLine::new(t, None, None, None).to_json())?;
                }
            }
            note(format!("{} tomonoid(s) of size {size}", tables.len()));
        }

        Command::Render { file, format, out } => {
            let t = load(&file)?;
            let mut sink = output(out.as_deref())?;
            write!(sink, "{}", render(&t, format))?;
            sink.flush()?;
        }
    }
    stdout.flush()?;
    Ok(())
}

fn obstruction(pair: IdempotentPair) -> Failure {
    Failure::finding(anyhow::anyhow!(
        "obstructed: for pair {pair} the ramification puts 1*0 and 1*a of the extended chain \
         in one class, so there is no one-element coextension with these atom-characterising idempotents"
    ))
}
