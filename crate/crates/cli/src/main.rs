use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use picard_cli::commands::{self, as_complex, as_matrix, CliError, CliResult, Output};
use picard_cli::doc::{self, Document};
use picard_core::site::SheafComplex;
use picard_core::verify::DEFAULT_MAX_ORDER;

/// Exact derived-category computations for length-3 complexes of abelian groups.
///
/// Inputs are documents (use `-` for stdin). Exit status: 0 on success,
/// 1 on invalid input, 2 when a verification check fails.
#[derive(Parser)]
#[command(name = "picard", version)]
struct Cli {
    /// Only this degree, where the command supports it
    #[arg(long, global = true, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// Print the report document instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the randomized battery
    #[arg(long, global = true, default_value_t = 20)]
    seed: u64,
    /// Cap on the order of each degree of P for resolutions
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form of a matrix
    Snf { matrix: PathBuf },
    /// Cohomology of a complex
    Cohomology { complex: PathBuf },
    /// Ext^i(P, G) for i = 1, 0, -1, -2
    Ext { p: PathBuf, g: PathBuf },
    /// Homotopy groups of P
    Pi { p: PathBuf },
    /// Tors^i of a sheaf complex, or of a constant complex given as SITE COMPLEX
    Tors { first: PathBuf, second: Option<PathBuf> },
    /// Build the resolution of P and check it
    Resolve {
        p: PathBuf,
        /// Also compare Ext computed through the resolution against G
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Extension realizing a class in Ext^1(P, G)
    Realize { p: PathBuf, g: PathBuf, class: PathBuf },
    /// Class of an extension document
    Classify { extension: PathBuf },
    /// Run the full acceptance battery
    VerifyAll,
}

fn read(path: &Path) -> CliResult<Document> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    doc::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn complex(path: &Path) -> CliResult<picard_core::chain::CochainComplex> {
    as_complex(read(path)?)
}

fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Snf { matrix } => Ok(commands::snf(&as_matrix(read(matrix)?)?)),
        Command::Cohomology { complex: k } => Ok(commands::cohomology(&complex(k)?, cli.degree)),
        Command::Ext { p, g } => commands::ext(&complex(p)?, &complex(g)?, cli.degree),
        Command::Pi { p } => commands::pi(&complex(p)?),
        Command::Tors { first, second } => {
            let k = match (read(first)?, second) {
                (Document::SheafComplex(k), None) => k,
                (Document::Site(s), Some(g)) => SheafComplex::constant(&s, &complex(g)?),
                (d, _) => {
                    return Err(CliError::Input(format!(
                        "tors takes a sheaf-complex document, or a site and a complex; got {}",
                        d.kind()
                    )))
                }
            };
            commands::tors(&k)
        }
        Command::Resolve { p, against } => {
            let g = against.as_deref().map(complex).transpose()?;
            commands::resolve(&complex(p)?, g.as_ref(), cli.max_order)
        }
        Command::Realize { p, g, class } => match read(class)? {
            Document::Class(c) => commands::realize(&complex(p)?, &complex(g)?, &c),
            d => Err(CliError::Input(format!("expected a class document, got {}", d.kind()))),
        },
        Command::Classify { extension } => match read(extension)? {
            Document::Extension(e) => commands::classify(&e),
            d => Err(CliError::Input(format!("expected an extension document, got {}", d.kind()))),
        },
        Command::VerifyAll => Ok(commands::verify_all(cli.seed, cli.max_order)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                print!("{}", doc::to_text(&out.report));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.mismatch { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
