mod batch;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stutterkit::automaton::hoa::to_hoa;
use stutterkit::check::{ground_truth_verdict, revisited_decide, semi_decide, Verdict};
use stutterkit::petri::{parse_net, parse_pnml, reduce_fixpoint, PetriNet, PropertyBinding};
use stutterkit::stutter::{classify_sensitivity, partition_language};
use stutterkit::{parse, Error, Limits, Ltl};

#[derive(Parser)]
#[command(name = "stutterkit", version, about = "Stutter-aware LTL checking of Petri nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Args, Clone, Copy)]
struct Caps {
    /// Largest automaton or state space built, in states.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    state_cap: usize,
    /// Largest rank used by complementation (default: twice the states).
    #[arg(long, global = true)]
    rank_cap: Option<usize>,
    /// Time budget per formula, in seconds.
    #[arg(long, global = true, default_value_t = 15.0)]
    timeout_s: f64,
}

impl Caps {
    fn limits(self) -> Limits {
        let mut l = Limits::default()
            .with_state_cap(self.state_cap)
            .with_timeout(Duration::from_secs_f64(self.timeout_s.max(0.0)));
        if let Some(r) = self.rank_cap {
            l = l.with_rank_cap(r);
        }
        l
    }
}

#[derive(Args)]
struct NetArgs {
    /// Net in the text format, or PNML when the file ends in `.pnml`.
    #[arg(long)]
    net: PathBuf,
    /// Extra atom definition `NAME := EXPR`; repeatable.
    #[arg(long = "atom")]
    atoms: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Procedure {
    Semi,
    Revisited,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sensitivity class of a formula: SI, LI, ShI or LS.
    Classify {
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Print the four parts of a formula's language as HOA automata.
    Partition {
        #[arg(short = 'f', long)]
        formula: String,
        /// Fold the pure shortening-insensitive part into the stutter-insensitive one.
        #[arg(long)]
        union_si_minus: bool,
    },
    /// Reduce a net for the atoms of a formula and print it.
    Reduce {
        #[command(flatten)]
        net: NetArgs,
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Check a formula on a net and print the verdict as JSON.
    Check {
        #[command(flatten)]
        net: NetArgs,
        #[arg(short = 'f', long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Procedure::Semi)]
        procedure: Procedure,
        /// Exit with status 3 unless the verdict is trusted.
        #[arg(long)]
        require_trusted: bool,
    },
    /// Check a formula on the unreduced state space.
    Truth {
        #[command(flatten)]
        net: NetArgs,
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Classify every formula of a file, optionally checking each on a net.
    Batch {
        /// One formula per line; `#` starts a comment.
        #[arg(long)]
        formulas: PathBuf,
        #[arg(long)]
        net: Option<PathBuf>,
        #[arg(long = "atom")]
        atoms: Vec<String>,
        #[arg(long, value_enum, default_value_t = Procedure::Semi)]
        procedure: Procedure,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Exit with status 3 if any verdict is untrusted.
        #[arg(long)]
        require_trusted: bool,
    },
}

/// Failure with its exit status.
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            status: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            status: if e.is_resource() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}

fn formula(text: &str) -> Result<Ltl, Failure> {
    parse(text).map_err(|e| Failure::usage(format!("formula: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub(crate) fn load_net(path: &Path, atoms: &[String]) -> Result<(PetriNet, PropertyBinding), Failure> {
    let text = read(path)?;
    let is_pnml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pnml"));
    let (net, binding) = if is_pnml {
        let net = parse_pnml(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        (net, PropertyBinding::default())
    } else {
        parse_net(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?
    };
    if atoms.is_empty() {
        return Ok((net, binding));
    }
    let mut text = net.to_text(&binding);
    for a in atoms {
        text.push_str("atom ");
        text.push_str(a);
        text.push('\n');
    }
    parse_net(&text).map_err(|e| Failure::usage(format!("--atom: {e}")))
}

/// Rejects formulas whose atoms the net does not define.
fn check_bound(f: &Ltl, binding: &PropertyBinding) -> Result<(), Failure> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    binding
        .restrict(&atoms)
        .map(|_| ())
        .map_err(|e| Failure::usage(e.to_string()))
}

fn decide(procedure: Procedure, net: &PetriNet, b: &PropertyBinding, f: &Ltl, limits: &Limits) -> Result<Verdict, Error> {
    match procedure {
        Procedure::Semi => semi_decide(net, b, f, limits),
        Procedure::Revisited => revisited_decide(net, b, f, limits),
    }
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let limits = cli.caps.limits();
    match cli.command {
        Command::Classify { formula: text } => {
            let f = formula(&text)?;
            println!("{}", classify_sensitivity(&f, &limits)?);
        }
        Command::Partition {
            formula: text,
            union_si_minus,
        } => {
            let f = formula(&text)?;
            let p = partition_language(&f, union_si_minus, &limits)?;
            for (name, a) in p.parts() {
                println!("/* {name} */");
                print!("{}", to_hoa(a));
            }
        }
        Command::Reduce { net, formula: text } => {
            let f = formula(&text)?;
            let (n, b) = load_net(&net.net, &net.atoms)?;
            check_bound(&f, &b)?;
            let atoms: Vec<String> = f.atoms().into_iter().collect();
            let b = b.restrict(&atoms).map_err(Error::from)?;
            let (red, stats) = reduce_fixpoint(&n, &b).map_err(Error::from)?;
            print!("{}", red.to_text(&b));
            println!("# places removed: {}", stats.places_removed);
            println!(
                "# transitions removed: {}, added: {}",
                stats.transitions_removed, stats.transitions_added
            );
            for (place, kind) in &stats.applied {
                println!("# {kind}-agglomerated {place}");
            }
        }
        Command::Check {
            net,
            formula: text,
            procedure,
            require_trusted,
        } => {
            let f = formula(&text)?;
            let (n, b) = load_net(&net.net, &net.atoms)?;
            check_bound(&f, &b)?;
            let v = decide(procedure, &n, &b, &f, &limits)?;
            print_json(&v);
            if require_trusted && !v.trusted {
                return Ok(3);
            }
        }
        Command::Truth { net, formula: text } => {
            let f = formula(&text)?;
            let (n, b) = load_net(&net.net, &net.atoms)?;
            check_bound(&f, &b)?;
            print_json(&ground_truth_verdict(&n, &b, &f, &limits)?);
        }
        Command::Batch {
            formulas,
            net,
            atoms,
            procedure,
            jobs,
            json,
            require_trusted,
        } => {
            let text = read(&formulas)?;
            let net = match net {
                Some(path) => Some(load_net(&path, &atoms)?),
                None => None,
            };
            let job = batch::Job {
                caps: cli.caps,
                net,
                procedure,
            };
            let report = batch::run(&text, &job, jobs)?;
            print!("{}", report.table());
            if let Some(path) = json {
                let body = serde_json::to_string_pretty(&report).expect("serializable");
                std::fs::write(&path, body + "\n").map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            }
            if require_trusted && report.rows.iter().any(|r| r.verdict.as_ref().is_some_and(|v| !v.trusted)) {
                return Ok(3);
            }
        }
    }
    Ok(0)
}
