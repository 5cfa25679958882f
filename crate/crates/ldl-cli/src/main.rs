//! `ldl`: check sequents and derivations, enumerate logical states, verify
//! L-domains and the representation round trip, enumerate morphisms, and
//! run the acceptance suite.
//!
//! Exit codes are a stable contract: 0 for a positive result, 1 for a
//! semantic negative (invalid sequent, failed check), 2 for input errors,
//! 3 for precondition failures and exhausted budgets.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ldl_core::calculus::derivation::{check_derivation, parse_derivation};
use ldl_core::calculus::search::{search_derivation, SearchConfig};
use ldl_core::calculus::{Calculus, FreeCalculus};
use ldl_core::duality::{
    check_representation_iso, f_of_theta, is_consequence_relation, morphism_dot, theta_of_f,
    SemanticCalculus,
};
use ldl_core::formula::{parse_sequent, DisjunctiveBasis};
use ldl_core::order::{self, FinitePoset};
use ldl_core::states::{state_poset, states_jsonl, FormulaUniverse, StateSpace};
use ldl_core::suite::{self, CriterionStatus, SuiteConfig};
use ldl_core::Error;

const EXIT_INVALID: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ldl",
    about = "Disjunctive sequent calculi and finite algebraic L-domains",
    version,
    after_help = "Context files: `.dsb` disjunctive bases (atom/axiom lines), `.pos` posets \
                  (elem/cover lines, closed transitively on load), `.drv` derivations.\n\
                  The environment variable LDL_BUDGET overrides all enumeration budgets."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

/// Shared run configuration. Budgets default high enough for every shipped
/// fixture; all of them are positive.
#[derive(Args, Clone)]
struct RunConfig {
    /// Formula-size bound for enumerated universes.
    #[arg(long, default_value_t = 6)]
    size_bound: usize,
    /// Maximum number of enumerated states.
    #[arg(long, default_value_t = 65536)]
    max_states: usize,
    /// Maximum number of candidate monotone maps per poset pair.
    #[arg(long, default_value_t = 1 << 20)]
    max_maps: usize,
    /// Maximum number of enumerated formulas per universe.
    #[arg(long, default_value_t = 500000)]
    max_universe: usize,
    /// Directory for emitted reports and graphs (stdout if absent).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Also emit DOT graphs.
    #[arg(long)]
    dot: bool,
    /// Seed for all randomized sampling (printed in every report).
    #[arg(long, default_value_t = 0x1d0_5eed)]
    seed: u64,
}

impl RunConfig {
    /// Apply the `LDL_BUDGET` override to every enumeration budget.
    fn with_env(mut self) -> Self {
        if let Ok(raw) = std::env::var("LDL_BUDGET") {
            if let Ok(budget) = raw.parse::<usize>() {
                self.max_states = budget;
                self.max_maps = budget;
                self.max_universe = budget;
            } else {
                eprintln!("warning: ignoring unparsable LDL_BUDGET=`{raw}`");
            }
        }
        self
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sequent against a basis or poset context.
    CheckSequent {
        /// `.dsb` basis file or `.pos` poset file.
        context: PathBuf,
        /// Sequent text, e.g. "p, q |- F" (empty antecedent: "|- T").
        sequent: String,
        /// Print a witness: a derivation for the free backend, the
        /// evaluation computation for the semantic backend.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Check a derivation file against a basis or poset context.
    CheckDerivation {
        context: PathBuf,
        derivation: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Enumerate the logical states of a basis and their inclusion order.
    States {
        basis: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Check that a poset is an algebraic L-domain.
    DomainCheck {
        poset: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Verify the representation round trip on a poset.
    Roundtrip {
        poset: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Enumerate monotone maps between two domains' state posets and
    /// verify the relation round trips.
    Morphisms {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Run the acceptance suite (all criteria, or a subset).
    Suite {
        /// Comma-separated criterion ids (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
        #[command(flatten)]
        config: RunConfig,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(classify_error(&e))
        }
    }
}

fn classify_error(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. }
        | Error::UnknownAtom(_)
        | Error::InvalidBasis(_)
        | Error::InvalidPoset(_)
        | Error::DisjointnessViolation { .. } => EXIT_INPUT,
        _ => EXIT_PRECONDITION,
    }
}

/// A calculus loaded from a context file.
enum Context {
    Free(FreeCalculus),
    Semantic(SemanticCalculus),
}

impl Context {
    fn calculus(&self) -> &dyn Calculus {
        match self {
            Context::Free(c) => c,
            Context::Semantic(c) => c,
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidBasis(format!("cannot read {}: {e}", path.display())))
}

fn load_context(path: &Path) -> Result<Context, Error> {
    let text = read(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("dsb") => Ok(Context::Free(FreeCalculus::new(DisjunctiveBasis::parse(&text)?))),
        Some("pos") => Ok(Context::Semantic(SemanticCalculus::new(FinitePoset::parse(&text)?)?)),
        other => Err(Error::InvalidBasis(format!(
            "unknown context extension {:?} for {} (use .dsb or .pos)",
            other,
            path.display()
        ))),
    }
}

fn emit(config: &RunConfig, file_name: &str, content: &str) -> Result<(), Error> {
    match &config.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| Error::InvalidBasis(format!("cannot create out dir: {e}")))?;
            let path = dir.join(file_name);
            fs::write(&path, content)
                .map_err(|e| Error::InvalidBasis(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::CheckSequent { context, sequent, witness, config } => {
            let config = config.with_env();
            cmd_check_sequent(&context, &sequent, witness, &config)
        }
        Command::CheckDerivation { context, derivation, config } => {
            let _ = config;
            cmd_check_derivation(&context, &derivation)
        }
        Command::States { basis, config } => {
            let config = config.with_env();
            cmd_states(&basis, &config)
        }
        Command::DomainCheck { poset, config } => {
            let _ = config;
            cmd_domain_check(&poset)
        }
        Command::Roundtrip { poset, config } => {
            let config = config.with_env();
            cmd_roundtrip(&poset, &config)
        }
        Command::Morphisms { source, target, config } => {
            let config = config.with_env();
            cmd_morphisms(&source, &target, &config)
        }
        Command::Suite { criteria, config } => {
            let config = config.with_env();
            cmd_suite(&criteria, &config)
        }
    }
}

fn cmd_check_sequent(
    context_path: &Path,
    sequent_text: &str,
    witness: bool,
    config: &RunConfig,
) -> Result<ExitCode, Error> {
    let context = load_context(context_path)?;
    let calc = context.calculus();
    let sequent = parse_sequent(sequent_text, calc)?;
    let valid = calc.entails(&sequent.antecedent, &sequent.succedent)?;
    println!("{}", if valid { "VALID" } else { "INVALID" });
    if witness {
        match &context {
            Context::Free(free) => {
                if valid {
                    let search = SearchConfig::default();
                    match search_derivation(free, &sequent, &search)? {
                        Some(d) => println!("{d}"),
                        None => println!(
                            "(no derivation found at depth {}; raise the bound)",
                            search.max_depth
                        ),
                    }
                } else {
                    println!("(invalid sequents have no derivation witness)");
                }
            }
            Context::Semantic(sc) => {
                for g in &sequent.antecedent {
                    println!("value({g}) = {}", sc.hat(g)?.describe(sc.domain()));
                }
                println!(
                    "value({}) = {}",
                    sequent.succedent,
                    sc.hat(&sequent.succedent)?.describe(sc.domain())
                );
                println!(
                    "antecedent intersection {} the succedent value",
                    if valid { "is contained in" } else { "escapes" }
                );
            }
        }
    }
    let _ = config;
    Ok(if valid { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INVALID) })
}

fn cmd_check_derivation(context_path: &Path, drv_path: &Path) -> Result<ExitCode, Error> {
    let context = load_context(context_path)?;
    let calc = context.calculus();
    let text = read(drv_path)?;
    let derivation = parse_derivation(&text, calc)?;
    match check_derivation(calc, &derivation) {
        Ok(()) => {
            println!(
                "OK: {} nodes, height {}, concludes `{}`",
                derivation.node_count(),
                derivation.height(),
                derivation.conclusion
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(failure) => {
            println!("REJECTED: {failure}");
            Ok(ExitCode::from(EXIT_INVALID))
        }
    }
}

fn cmd_states(basis_path: &Path, config: &RunConfig) -> Result<ExitCode, Error> {
    let text = read(basis_path)?;
    let calc = FreeCalculus::new(DisjunctiveBasis::parse(&text)?);
    let space = state_poset(&calc, config.max_states)?;
    match config.format {
        ReportFormat::Json => emit(config, "states.jsonl", &states_jsonl(&space))?,
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("{} states of {}\n", space.states.len(), calc.label()));
            for (i, state) in space.states.iter().enumerate() {
                let below: Vec<String> = (0..space.states.len())
                    .filter(|&j| j != i && space.poset.leq(j, i))
                    .map(|j| space.states[j].generator().to_string())
                    .collect();
                out.push_str(&format!(
                    "  {state}  contains: {}\n",
                    if below.is_empty() { "-".to_string() } else { below.join(", ") }
                ));
            }
            emit(config, "states.txt", &out)?;
        }
    }
    if config.dot {
        emit(config, "states.dot", &ldl_core::states::state_poset_dot(&space, "states"))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_domain_check(poset_path: &Path) -> Result<ExitCode, Error> {
    let text = read(poset_path)?;
    let poset = FinitePoset::parse(&text)?;
    let check = order::is_l_domain(&poset);
    if check.is_l_domain {
        println!("L-DOMAIN: {}", check.diagnostic);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("NOT-AN-L-DOMAIN: {}", check.diagnostic);
        Ok(ExitCode::from(EXIT_INVALID))
    }
}

fn cmd_roundtrip(poset_path: &Path, config: &RunConfig) -> Result<ExitCode, Error> {
    let text = read(poset_path)?;
    let poset = FinitePoset::parse(&text)?;
    let check_l = order::is_l_domain(&poset);
    if !check_l.is_l_domain {
        println!("NOT-AN-L-DOMAIN: {}", check_l.diagnostic);
        return Ok(ExitCode::from(EXIT_PRECONDITION));
    }
    let check = check_representation_iso(&poset)?;
    if check.ok {
        println!("PASS: {}", check.detail);
        for (elem, gen) in &check.bijection {
            println!("  {elem} <-> <{gen}>");
        }
        if config.dot {
            let sc = SemanticCalculus::new(poset.clone())?;
            let space = state_poset(&sc, config.max_states)?;
            emit(config, "domain.dot", &poset.to_dot("domain"))?;
            emit(config, "state_poset.dot", &ldl_core::states::state_poset_dot(&space, "states"))?;
        }
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL: {}", check.detail);
        Ok(ExitCode::from(EXIT_INVALID))
    }
}

fn cmd_morphisms(source: &Path, target: &Path, config: &RunConfig) -> Result<ExitCode, Error> {
    let src_poset = FinitePoset::parse(&read(source)?)?;
    let dst_poset = FinitePoset::parse(&read(target)?)?;
    let src = SemanticCalculus::new(src_poset)?;
    let dst = SemanticCalculus::new(dst_poset)?;
    let src_space: StateSpace = state_poset(&src, config.max_states)?;
    let dst_space: StateSpace = state_poset(&dst, config.max_states)?;
    let maps = order::monotone_maps(&src_space.poset, &dst_space.poset, config.max_maps)?;
    let universe = FormulaUniverse::enumerate(&dst, 4, config.max_universe)?;

    let mut all_ok = true;
    let mut lines = Vec::new();
    for (idx, f) in maps.iter().enumerate() {
        let theta = theta_of_f(f, &src, &src_space, &dst_space)?;
        let laws = is_consequence_relation(&theta, &src, &dst, &universe)?;
        let back = f_of_theta(&theta, &src, &dst, &src_space, &dst_space)?;
        let ok = laws.ok && &back == f;
        all_ok &= ok;
        let assignment: Vec<String> = f
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                format!("{}->{}", src_space.states[i].generator(), dst_space.states[j].generator())
            })
            .collect();
        lines.push(serde_json::json!({
            "instance": format!("morphism#{idx}"),
            "tag": "morphism-round-trip",
            "pass": ok,
            "witness": assignment.join(", "),
        }));
        if config.dot {
            emit(
                config,
                &format!("morphism_{idx}.dot"),
                &morphism_dot(&src_space, &dst_space, f, &format!("morphism_{idx}")),
            )?;
        }
    }
    match config.format {
        ReportFormat::Json => {
            let mut out = String::new();
            for line in &lines {
                out.push_str(&line.to_string());
                out.push('\n');
            }
            emit(config, "morphisms.jsonl", &out)?;
        }
        ReportFormat::Text => {
            let mut out = format!(
                "{} monotone maps between the state posets ({} -> {} states)\n",
                maps.len(),
                src_space.states.len(),
                dst_space.states.len()
            );
            for line in &lines {
                out.push_str(&format!(
                    "  {} {}: {}\n",
                    if line["pass"].as_bool().unwrap() { "ok " } else { "BAD" },
                    line["instance"].as_str().unwrap(),
                    line["witness"].as_str().unwrap()
                ));
            }
            emit(config, "morphisms.txt", &out)?;
        }
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INVALID) })
}

fn cmd_suite(criteria: &[usize], config: &RunConfig) -> Result<ExitCode, Error> {
    let suite_cfg = SuiteConfig {
        seed: config.seed,
        size_bound: config.size_bound,
        max_states: config.max_states,
        max_maps: config.max_maps,
        max_universe: config.max_universe,
        ..SuiteConfig::default()
    };
    let ids: Vec<usize> = if criteria.is_empty() { (1..=8).collect() } else { criteria.to_vec() };
    let mut reports = Vec::new();
    for id in ids {
        match suite::run_criterion(id, &suite_cfg) {
            Some(report) => {
                println!("{}", suite::render_line(&report));
                reports.push(report);
            }
            None => {
                eprintln!("error: unknown criterion id {id} (valid: 1..=8)");
                return Ok(ExitCode::from(EXIT_INPUT));
            }
        }
    }
    if config.format == ReportFormat::Json || config.out_dir.is_some() {
        let json = serde_json::to_string_pretty(&reports)
            .map_err(|e| Error::PreconditionViolated(format!("report serialization: {e}")))?;
        emit(config, "suite.json", &json)?;
    }
    let any_fail = reports.iter().any(|r| r.status == CriterionStatus::Fail);
    let any_budget = reports.iter().any(|r| r.status == CriterionStatus::Budget);
    Ok(if any_fail {
        ExitCode::from(EXIT_INVALID)
    } else if any_budget {
        ExitCode::from(EXIT_PRECONDITION)
    } else {
        ExitCode::SUCCESS
    })
}
