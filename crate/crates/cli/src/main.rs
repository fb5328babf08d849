use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wordmap::counting::{self, CountReport, DEFAULT_CAP};
use wordmap::field::Kind;
use wordmap::solve::verify_json;
use wordmap::{Error, Field, Matrix, WordSpec};

#[derive(Parser)]
#[command(name = "wordmap", version, about = "Solve word equations on matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
    Csv,
}

#[derive(clap::Args)]
struct FieldArgs {
    /// Fp:7, Fq:p=2,d=2,mod=[1,1,1], Q, R:tol=1e-9 or C:tol=1e-9
    #[arg(long)]
    field: String,
    /// Overrides the tolerance of R and C.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl FieldArgs {
    fn field(&self) -> anyhow::Result<Field> {
        let f: Field = self.field.parse()?;
        Ok(match (self.tolerance, f.kind()) {
            (Some(t), Kind::Real { .. }) => Field::real(t)?,
            (Some(t), Kind::Complex { .. }) => Field::complex(t)?,
            _ => f,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Find matrices on which a word evaluates to the given matrix.
    Solve {
        #[command(flatten)]
        field: FieldArgs,
        /// comm:m=4 or diag:d=1,k=2;d=3,k=5
        #[arg(long)]
        word: String,
        /// Matrix JSON, inline or a path to a file.
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Re-evaluate a witness document produced by `solve`.
    Verify {
        /// Witness JSON, inline, a path, or `-` for stdin.
        #[arg(long)]
        witness: String,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Enumerate the image of a word map on n x n matrices over a finite field.
    EnumerateImage {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Count solutions of a scalar diagonal equation over a finite field.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        /// Diagonal word giving the coefficients and exponents.
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
    /// Field size above which two-term scalar equations are solvable.
    Threshold {
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
    },
}

/// Outcome of a command that ran to completion but answered "no".
struct Negative(String);

fn read_json(arg: &str) -> anyhow::Result<Value> {
    let text = if arg == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else if arg.trim_start().starts_with(['[', '{']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {arg}"))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn print_json(v: &Value) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Result<(), Negative>> {
    match cli.command {
        Command::Solve {
            field,
            word,
            matrix,
            seed,
            out,
        } => {
            let f = field.field()?;
            let word = WordSpec::parse(&word, &f)?;
            let a = Matrix::from_json(&read_json(&matrix)?, Some(&f))?;
            if a.field() != &f {
                bail!("matrix is over {}, expected {f}", a.field());
            }
            let w = wordmap::solve(&word, &a, seed)?;
            match out {
                Output::Json => print_json(&w.to_json())?,
                Output::Text | Output::Csv => {
                    println!("{word} over {f}: verified");
                    for (i, x) in w.matrices.iter().enumerate() {
                        println!("X{}:\n{x}", i + 1);
                    }
                }
            }
        }
        Command::Verify {
            witness,
            field,
            tolerance,
        } => {
            let doc = read_json(&witness)?;
            let f = match field {
                Some(s) => Some(FieldArgs { field: s, tolerance }.field()?),
                None => None,
            };
            if !verify_json(&doc, f.as_ref())? {
                return Ok(Err(Negative("witness does not evaluate to the target".into())));
            }
            println!("verified");
        }
        Command::EnumerateImage {
            field,
            word,
            n,
            cap,
            out,
        } => {
            let f = field.field()?;
            let word = WordSpec::parse(&word, &f)?;
            let img = counting::image_enumerate(&word, n, &f, cap)?;
            match out {
                Output::Json => print_json(&json!({
                    "word": word.to_string(),
                    "field": f.to_string(),
                    "n": n,
                    "total": img.total.to_string(),
                    "size": img.size.to_string(),
                    "missing": img.missing.iter().map(Matrix::to_json).collect::<Vec<_>>(),
                }))?,
                Output::Text | Output::Csv => {
                    println!("image size {} of {}", img.size, img.total);
                    for m in &img.missing {
                        println!("missing:\n{m}");
                    }
                }
            }
        }
        Command::Count {
            field,
            word,
            gamma,
            cap,
            out,
        } => {
            let f = field.field()?;
            let WordSpec::Diagonal(d) = WordSpec::parse(&word, &f)? else {
                bail!("count needs a diagonal word");
            };
            let gamma = f.parse_elem(&gamma)?;
            let r = counting::count_solutions(&f, &d.terms, &gamma, cap)?;
            match out {
                Output::Json => print_json(&serde_json::to_value(&r)?)?,
                Output::Csv => println!("{}\n{}", CountReport::CSV_HEADER, r.to_csv_row()),
                Output::Text => println!(
                    "S = {}, q^(m-1) = {}, bound = {:.4}, {}",
                    r.s,
                    r.expected,
                    r.bound,
                    if r.passes { "pass" } else { "fail" }
                ),
            }
        }
        Command::Threshold { k1, k2, out } => {
            let r = counting::threshold(k1, k2)?;
            match out {
                Output::Json => print_json(&serde_json::to_value(&r)?)?,
                Output::Csv => println!("k1,k2,threshold\n{k1},{k2},{}", r.threshold),
                Output::Text => println!("{}", r.threshold),
            }
        }
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Negative(msg))) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e.downcast_ref::<Error>() {
                Some(err) if err.is_negative_result() => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
