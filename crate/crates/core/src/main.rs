//! Command-line front end: validate linkings, compose them, normalize
//! cut sequents, decide net equality, and export DOT.
//!
//! Exit codes: 0 success / goals pass, 1 check failure or failed goal,
//! 2 parse or type error, 3 inconclusive (resource limit reached).

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use starnet::cutelim::Strategy;
use starnet::diagram::{self, Diagram, RunOptions};
use starnet::dot::export_dot;
use starnet::linking::{Linking, DEFAULT_SWITCHING_BOUND};
use starnet::net::{self, EqOutcome};

#[derive(Parser)]
#[command(name = "starnet", version, about = "proof nets for free star-autonomous categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the morphisms declared in a diagram file
    Check {
        file: String,
        /// check only this named morphism
        name: Option<String>,
        /// use the brute-force switching enumeration instead of contraction
        #[arg(long)]
        oracle: bool,
    },
    /// Compose two named morphisms by path composition and print the result
    Compose { file: String, f: String, g: String },
    /// Normalize a sequent file by cut elimination
    Normalize {
        file: String,
        /// use turbo (one-shot) cut elimination
        #[arg(long)]
        turbo: bool,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: StrategyArg,
        /// seed for the random strategy
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide net equality of two named morphisms
    Eq {
        file: String,
        f: String,
        g: String,
        /// bound on the number of linkings explored per class
        #[arg(long, default_value_t = net::DEFAULT_CLASS_LIMIT)]
        max_class_size: usize,
    },
    /// Elaborate a morphism term in the context of a diagram file
    Eval { file: String, term: String },
    /// Run the `expect` goals of a diagram file
    Diagram {
        file: String,
        #[arg(long, default_value_t = net::DEFAULT_CLASS_LIMIT)]
        max_class_size: usize,
        #[arg(long)]
        oracle: bool,
    },
    /// Enumerate the valid linkings and net classes between two shapes
    Enumerate {
        file: String,
        source: String,
        target: String,
        #[arg(long, default_value_t = net::DEFAULT_CLASS_LIMIT)]
        max_class_size: usize,
    },
    /// Print a named morphism as Graphviz DOT
    Dot { file: String, name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    ExitCode::from(code)
}

fn load_diagram(path: &str) -> Result<Diagram, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    diagram::parse_diagram(&text).map_err(|e| format!("{path}: {e}"))
}

fn named<'a>(d: &'a Diagram, name: &str) -> Result<&'a Linking, String> {
    d.morphism(name)
        .ok_or_else(|| format!("unknown morphism `{name}`"))
}

fn run(cmd: Command) -> Result<u8, String> {
    match cmd {
        Command::Check { file, name, oracle } => {
            let d = load_diagram(&file)?;
            let targets: Vec<(&String, &Linking)> = match &name {
                Some(n) => vec![(
                    &d.morphisms
                        .iter()
                        .find(|(m, _)| m == n)
                        .ok_or_else(|| format!("unknown morphism `{n}`"))?
                        .0,
                    named(&d, n)?,
                )],
                None => d.morphisms.iter().map(|(n, l)| (n, l)).collect(),
            };
            let mut bad = false;
            for (n, f) in targets {
                let verdict = if oracle {
                    f.check_oracle(DEFAULT_SWITCHING_BOUND)
                } else {
                    f.check()
                };
                match verdict {
                    Ok(()) => println!("VALID {n} : {} -> {}", f.source(), f.target()),
                    Err(e) => {
                        bad = true;
                        println!("INVALID {n}: {e}");
                    }
                }
            }
            Ok(if bad { 1 } else { 0 })
        }
        Command::Compose { file, f, g } => {
            let d = load_diagram(&file)?;
            let (f, g) = (named(&d, &f)?, named(&d, &g)?);
            let h = f.compose(g).map_err(|e| e.to_string())?;
            print!("{h}");
            Ok(0)
        }
        Command::Normalize {
            file,
            turbo,
            strategy,
            seed,
        } => {
            let text = fs::read_to_string(&file).map_err(|e| format!("{file}: {e}"))?;
            let os = diagram::parse_sequent_file(&text).map_err(|e| e.to_string())?;
            os.check().map_err(|e| e.to_string())?;
            let normal = if turbo {
                os.turbo_normalize().map_err(|e| e.to_string())?
            } else {
                let strategy = match strategy {
                    StrategyArg::Leftmost => Strategy::Leftmost,
                    StrategyArg::Rightmost => Strategy::Rightmost,
                    StrategyArg::Random => Strategy::Random(seed),
                };
                let mut os = os;
                os.normalize(strategy).map_err(|e| e.to_string())?;
                os
            };
            print!("{normal}");
            Ok(0)
        }
        Command::Eq {
            file,
            f,
            g,
            max_class_size,
        } => {
            let d = load_diagram(&file)?;
            let (f, g) = (named(&d, &f)?, named(&d, &g)?);
            match net::equivalent(f, g, max_class_size) {
                EqOutcome::Equivalent { witness } => {
                    println!("EQUAL ({} rewiring(s))", witness.len());
                    for step in witness {
                        println!("  {step}");
                    }
                    Ok(0)
                }
                EqOutcome::Distinct => {
                    println!("DISTINCT");
                    Ok(1)
                }
                EqOutcome::Inconclusive { explored } => {
                    println!("INCONCLUSIVE (explored {explored} linkings)");
                    Ok(3)
                }
            }
        }
        Command::Eval { file, term } => {
            let d = load_diagram(&file)?;
            let t =
                diagram::parse_term(&term, &d.shapes, &d.base, 0).map_err(|e| e.to_string())?;
            let f = diagram::elaborate(&t, &d.base, &d.morphisms, 0).map_err(|e| e.to_string())?;
            print!("{f}");
            Ok(0)
        }
        Command::Diagram {
            file,
            max_class_size,
            oracle,
        } => {
            let text = fs::read_to_string(&file).map_err(|e| format!("{file}: {e}"))?;
            let report = diagram::run_diagram(
                &text,
                &RunOptions {
                    max_class_size,
                    oracle,
                },
            );
            for line in &report.lines {
                println!("{line}");
            }
            Ok(report.exit_code as u8)
        }
        Command::Enumerate {
            file,
            source,
            target,
            max_class_size,
        } => {
            let d = load_diagram(&file)?;
            let s = diagram::parse_shape_expr(&source, &d.shapes, &d.base, 0)
                .map_err(|e| e.to_string())?;
            let t = diagram::parse_shape_expr(&target, &d.shapes, &d.base, 0)
                .map_err(|e| e.to_string())?;
            match net::enumerate_nets(&s, &t, max_class_size) {
                Ok(classes) => {
                    let total: usize = classes.iter().map(|c| c.len()).sum();
                    println!("{total} linking(s) in {} net class(es)", classes.len());
                    for (i, class) in classes.iter().enumerate() {
                        println!("class {i}:");
                        for l in class {
                            for line in l.to_string().lines() {
                                println!("  {line}");
                            }
                        }
                    }
                    Ok(0)
                }
                Err(e) => {
                    println!("INCONCLUSIVE (budget {} exhausted)", e.limit);
                    Ok(3)
                }
            }
        }
        Command::Dot { file, name } => {
            let d = load_diagram(&file)?;
            print!("{}", export_dot(named(&d, &name)?));
            Ok(0)
        }
    }
}
