//! qcdcl-lab: solve and check QBFs, compute dependency schemes, generate
//! benchmark families, and run the experiment suites.
//!
//! Exit codes: 0 ok/Valid, 1 Invalid or verdict mismatch, 2 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcdcl_core::deps::{compute, SchemeTag};
use qcdcl_core::gen::{generate, FamilySpec};
use qcdcl_core::harness::{
    brute_force_eval_with_guard, compute_gauge, paper_corpus, run_corpus_entry,
    run_separation_suite, rows_to_csv, default_grid, BRUTE_FORCE_GUARD, GAUGE_BUDGET,
};
use qcdcl_core::qbf::{parse_qdimacs, write_qdimacs, PCNF};
use qcdcl_core::solver::{
    parse_trace, replay_script, solve, validate_trace, write_trace,
    Script, SolverConfig,
};

#[derive(Parser)]
#[command(name = "qcdcl-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Decision policy: lev | dep:std | dep:rrs | dep:trv | any
    #[arg(long, default_value = "lev")]
    ord: String,
    /// Scheme for clause propagation and learning: trv | std | rrs
    #[arg(long = "clause-dep", default_value = "trv")]
    clause_dep: String,
    /// Cube policy: none | ld | dep
    #[arg(long, default_value = "none")]
    cube: String,
    /// Preprocessing scheme: none | trv | std | rrs
    #[arg(long, default_value = "none")]
    pre: String,
    /// Learnt-constraint pick: last | first-new
    #[arg(long, default_value = "first-new")]
    pick: String,
    /// Decision value heuristic: false-first | true-first
    #[arg(long, default_value = "false-first")]
    value: String,
    /// Triple limit before giving up with UNKNOWN
    #[arg(long, default_value_t = 1_000_000)]
    limit: usize,
}

impl ConfigArgs {
    fn build(&self, scripted: bool) -> Result<SolverConfig, String> {
        let line = format!(
            "ord={} clause-dep={} cube={} pre={} pick={} value={} limit={}",
            self.ord,
            self.clause_dep,
            self.cube,
            self.pre,
            if scripted { "scripted" } else { &self.pick },
            self.value,
            self.limit
        );
        SolverConfig::parse_config_line(&line)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a QDIMACS formula, optionally writing a derivation trace
    Solve {
        /// Input QDIMACS file
        input: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Replay a decision/pick script instead of searching
        #[arg(long)]
        script: Option<PathBuf>,
        /// Write the derivation trace here
        #[arg(long = "trace-out")]
        trace_out: Option<PathBuf>,
    },
    /// Validate a derivation trace against a formula
    Check {
        /// Input QDIMACS file
        input: PathBuf,
        /// Trace file produced by solve
        trace: PathBuf,
    },
    /// Compute a dependency scheme and dump `d <x> <y>` lines
    Deps {
        input: PathBuf,
        /// Scheme: trv | std | rrs
        #[arg(long, default_value = "std")]
        scheme: String,
    },
    /// Generate a benchmark family instance
    Gen {
        /// Family and parameter, e.g. double_long_eq:3
        spec: String,
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the gauge of an XUT formula by exhaustive closure
    Gauge {
        input: PathBuf,
        #[arg(long, default_value_t = GAUGE_BUDGET)]
        budget: usize,
    },
    /// Brute-force game-tree evaluation
    Oracle {
        input: PathBuf,
        #[arg(long = "max-vars", default_value_t = BRUTE_FORCE_GUARD)]
        max_vars: usize,
    },
    /// Run the separation experiment grid and write CSV
    Suite {
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay the scripted refutation corpus
    Corpus {
        /// Family parameter for the corpus formulas
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
}

fn read_formula(path: &PathBuf) -> Result<PCNF, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_qdimacs(&text).map_err(|e| e.to_string())
}

fn parse_scheme(s: &str) -> Result<SchemeTag, String> {
    match s {
        "trv" => Ok(SchemeTag::Trv),
        "std" => Ok(SchemeTag::Std),
        "rrs" => Ok(SchemeTag::Rrs),
        _ => Err(format!("unknown scheme `{s}`")),
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { input, config, script, trace_out } => {
            let f = read_formula(&input)?;
            let cfg = config.build(script.is_some())?;
            let trace = match script {
                None => solve(&f, &cfg).map_err(|e| e.to_string())?,
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    let script = Script::parse_text(&text)?;
                    replay_script(&f, &cfg, &script).map_err(|e| e.to_string())?
                }
            };
            println!("{} in {} triples", trace.verdict, trace.triples.len());
            if let Some(out) = trace_out {
                fs::write(&out, write_trace(&f, &cfg, &trace))
                    .map_err(|e| format!("{}: {e}", out.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { input, trace } => {
            let f = read_formula(&input)?;
            let text =
                fs::read_to_string(&trace).map_err(|e| format!("{}: {e}", trace.display()))?;
            let (cfg, trace) = parse_trace(&f, &text)?;
            let validity = validate_trace(&f, &cfg, &trace);
            println!("{validity}");
            Ok(if validity.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Deps { input, scheme } => {
            let f = read_formula(&input)?;
            let tag = parse_scheme(&scheme)?;
            print!("{}", compute(&f, tag).dump());
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { spec, out } => {
            let spec = FamilySpec::parse(&spec)?;
            let text = write_qdimacs(&generate(spec));
            match out {
                None => print!("{text}"),
                Some(path) => {
                    fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gauge { input, budget } => {
            let f = read_formula(&input)?;
            let g = compute_gauge(&f, budget).map_err(|e| e.to_string())?;
            println!("{g}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { input, max_vars } => {
            let f = read_formula(&input)?;
            let value = brute_force_eval_with_guard(&f, max_vars).map_err(|e| e.to_string())?;
            println!("{}", if value { "TRUE" } else { "FALSE" });
            Ok(ExitCode::SUCCESS)
        }
        Command::Suite { out } => {
            let rows = run_separation_suite(&default_grid());
            fs::write(&out, rows_to_csv(&rows)).map_err(|e| format!("{}: {e}", out.display()))?;
            println!("{} rows written to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { n } => {
            let mut failed = false;
            for entry in paper_corpus(n) {
                match run_corpus_entry(&entry) {
                    Ok(trace) => {
                        println!(
                            "ok   {} ({} in {} triples)",
                            entry.name,
                            trace.verdict,
                            trace.triples.len()
                        );
                        let f = generate(entry.spec);
                        let validity = validate_trace(&f, &entry.config, &trace);
                        if !validity.is_valid() {
                            println!("FAIL {} validator: {validity}", entry.name);
                            failed = true;
                        }
                    }
                    Err(e) => {
                        println!("FAIL {e}");
                        failed = true;
                    }
                }
            }
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
