//! Command-line surface for the regret-fear engine.
//!
//! Exit codes: 0 ok, 1 audit counterexample, 2 usage or parse error.

mod parse;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use regret_fear::analysis::{AnalysisError, TwoOutcomeSetup, Variant};
use regret_fear::audit::{run_all, AuditConfig};
use regret_fear::medical::{
    self, case_iii_psi, case_psi, radiotherapy, surgery, sweep_contour, sweep_pu, MedicalCase,
};
use regret_fear::{AgentProfile, FearFn, Interpretation, Mode, RegretQ};

use parse::{fmt_g17, parse_corpus, parse_prospect, ScenarioFile};

#[derive(Parser)]
#[command(
    name = "regret-fear",
    version,
    about = "Regret-theoretic choice between risky prospects with unknown outcomes"
)]
struct Cli {
    /// Agent profile, space-separated registry tokens
    /// (default "u:identity v:poly:1 q:power:3")
    #[arg(long, global = true, default_value = "")]
    profile: String,

    /// Seed for sampling commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Grid size; subdivides [0, 1] into grid-1 steps
    #[arg(long, global = true, default_value_t = 101)]
    grid: usize,

    /// Write CSV output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Renormalize parsed probabilities to sum to 1 (never done silently)
    #[arg(long, global = true)]
    normalize: bool,

    /// How known outcomes in prospect arguments are read
    #[arg(long, global = true, value_enum, default_value_t = InterpArg::Money)]
    interpretation: InterpArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InterpArg {
    Money,
    Utility,
}

impl From<InterpArg> for Interpretation {
    fn from(arg: InterpArg) -> Self {
        match arg {
            InterpArg::Money => Interpretation::Money,
            InterpArg::Utility => Interpretation::Utility,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Classical,
    Modified,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Self {
        match arg {
            ModeArg::Classical => Mode::Classical,
            ModeArg::Modified => Mode::Modified,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    I,
    Ii,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    FUnknown,
    GUnknown,
    Zero,
}

impl From<VariantArg> for Variant {
    fn from(arg: VariantArg) -> Self {
        match arg {
            VariantArg::FUnknown => Variant::FHasUnknown,
            VariantArg::GUnknown => Variant::GHasUnknown,
            VariantArg::Zero => Variant::BothZero,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compare two prospects given in the text grammar, e.g. "(4000, 0.8; ?, 0.2)"
    Compare {
        f: String,
        g: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Modified)]
        mode: ModeArg,
    },
    /// Recompute the treatment-choice reference values
    Medcase {
        /// Fear function for the unknown-bearing cases
        #[arg(long, default_value = "v:poly:1")]
        fear: String,
        /// Unknown mass for cases I-III
        #[arg(long, default_value_t = 0.1)]
        unknown_mass: f64,
    },
    /// Emit psi versus p_u for the treatment scenario as CSV
    Sweep {
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Fear function per psi column (repeatable)
        #[arg(long = "fear", required = true)]
        fears: Vec<String>,
    },
    /// Emit psi versus (p_fu, p_gu) for the treatment scenario as CSV
    Contour {
        /// Fear function per psi column (repeatable)
        #[arg(long = "fear", required = true)]
        fears: Vec<String>,
    },
    /// Evaluate a scenario corpus (a path, or bundled "table1"/"table2")
    Corpus { corpus: String },
    /// Run the axiom audits; exits 1 on any counterexample
    Audit {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Locate the break-even probability of a two-outcome setup
    Breakeven {
        #[arg(long)]
        f1: f64,
        #[arg(long)]
        g1: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Modified)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = VariantArg::FUnknown)]
        variant: VariantArg,
    },
    /// Replay the ratio effect around the break-even probability
    Prop1 {
        #[arg(long)]
        f1: f64,
        #[arg(long)]
        g1: f64,
        #[arg(long)]
        lambda: f64,
    },
    /// Scan halved probabilities for a preference reversal
    Prop2 {
        #[arg(long)]
        f1: f64,
        #[arg(long)]
        g1: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = VariantArg::FUnknown)]
        variant: VariantArg,
    },
    /// Check the reflection effect for a gain pair and its mirror
    Reflect {
        #[arg(long)]
        f1: f64,
        #[arg(long)]
        g1: f64,
        #[arg(long)]
        pf: f64,
        #[arg(long)]
        pg: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn err_string(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn run(cli: Cli) -> Result<u8, String> {
    let profile = AgentProfile::from_spec(&cli.profile).map_err(err_string)?;
    match cli.command {
        Command::Compare { f, g, mode } => {
            let interp: Interpretation = cli.interpretation.into();
            let f = parse_prospect(&f, interp, cli.normalize).map_err(err_string)?;
            let g = parse_prospect(&g, interp, cli.normalize).map_err(err_string)?;
            let verdict = profile.compare(&f, &g, mode.into()).map_err(err_string)?;
            println!(
                "psi={}  {}  interpretation={}  profile[{}]",
                fmt_g17(verdict.psi),
                verdict.relation,
                interp,
                profile
            );
            Ok(0)
        }
        Command::Medcase { fear, unknown_mass } => {
            run_medcase(&profile, &fear, unknown_mass)
        }
        Command::Sweep { case, fears } => {
            let fears = parse_fears(&fears)?;
            let case = match case {
                CaseArg::I => MedicalCase::I,
                CaseArg::Ii => MedicalCase::II,
            };
            let table = sweep_pu(case, &fears, cli.grid, &profile).map_err(err_string)?;
            let mut csv = String::new();
            csv.push_str(&header_row("p_u", &fears));
            for row in &table.rows {
                let mut cells = vec![fmt_g17(row.p_u)];
                cells.extend(row.psi.iter().map(|&x| fmt_g17(x)));
                csv.push_str(&cells.join(","));
                csv.push('\n');
            }
            emit(cli.out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Contour { fears } => {
            let fears = parse_fears(&fears)?;
            let table = sweep_contour(&fears, cli.grid, &profile).map_err(err_string)?;
            let mut csv = String::new();
            csv.push_str(&header_row("p_fu,p_gu", &fears));
            for row in &table.rows {
                let mut cells = vec![fmt_g17(row.p_fu), fmt_g17(row.p_gu)];
                cells.extend(row.psi.iter().map(|&x| fmt_g17(x)));
                csv.push_str(&cells.join(","));
                csv.push('\n');
            }
            emit(cli.out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Corpus { corpus } => {
            let text = load_corpus(&corpus)?;
            let file = parse_corpus(&text, cli.normalize).map_err(err_string)?;
            run_corpus(&profile, &file);
            Ok(0)
        }
        Command::Audit { samples } => {
            let cfg = AuditConfig::new(profile)
                .with_samples(samples)
                .with_seed(cli.seed);
            let audit_run = run_all(&cfg).map_err(err_string)?;
            println!("{audit_run}");
            if let Some(path) = cli.out.as_deref() {
                fs::write(path, audit_run.findings_csv())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            Ok(if audit_run.counterexamples() > 0 { 1 } else { 0 })
        }
        Command::Breakeven {
            f1,
            g1,
            lambda,
            mode,
            variant,
        } => {
            let setup = TwoOutcomeSetup::new(f1, g1, lambda, 1.0, profile, variant.into())
                .map_err(err_string)?;
            match setup.find_break_even(mode.into()) {
                Ok(be) => {
                    println!(
                        "break-even: p_bar={} residual={} bracket=[{}, {}] sign_changes={}",
                        fmt_g17(be.p_bar),
                        fmt_g17(be.residual),
                        fmt_g17(be.bracket.0),
                        fmt_g17(be.bracket.1),
                        be.sign_changes
                    );
                    Ok(0)
                }
                Err(AnalysisError::NoRoot) => {
                    println!("no-root: psi keeps one sign on (0, 1]");
                    Ok(0)
                }
                Err(other) => Err(other.to_string()),
            }
        }
        Command::Prop1 { f1, g1, lambda } => {
            let setup =
                TwoOutcomeSetup::new(f1, g1, lambda, 1.0, profile, Variant::FHasUnknown)
                    .map_err(err_string)?;
            match setup.verify_prop1() {
                Ok(report) => {
                    println!(
                        "break-even: p_bar={} residual={}",
                        fmt_g17(report.break_even.p_bar),
                        fmt_g17(report.break_even.residual)
                    );
                    println!(
                        "{}: checked_below={} checked_above={} skipped={} violations={}",
                        report.case,
                        report.checked_below,
                        report.checked_above,
                        report.skipped,
                        report.violations.len()
                    );
                    for v in &report.violations {
                        println!(
                            "  violation at p={}: psi={} (expected {})",
                            fmt_g17(v.p),
                            fmt_g17(v.psi),
                            if v.expect_positive { "> 0" } else { "< 0" }
                        );
                    }
                    println!(
                        "consistent: {}",
                        if report.consistent() { "yes" } else { "no" }
                    );
                    Ok(0)
                }
                Err(AnalysisError::HypothesisUnmet { reason }) => {
                    println!("hypothesis unmet: {reason}");
                    Ok(0)
                }
                Err(other) => Err(other.to_string()),
            }
        }
        Command::Prop2 {
            f1,
            g1,
            lambda,
            p,
            variant,
        } => {
            let setup = TwoOutcomeSetup::new(f1, g1, lambda, p, profile, variant.into())
                .map_err(err_string)?;
            match setup.verify_prop2() {
                Ok(report) => {
                    println!(
                        "reversal at halving k={}: p={} classical={} modified={} conditions-held={}",
                        report.flip_step,
                        fmt_g17(report.flip_p),
                        fmt_g17(report.classical_psi),
                        fmt_g17(report.modified_psi),
                        if report.conditions_hold_at_flip { "yes" } else { "no" }
                    );
                    Ok(0)
                }
                Err(AnalysisError::NoReversalFound { halvings }) => {
                    println!("no reversal within {halvings} halvings");
                    Ok(0)
                }
                Err(AnalysisError::HypothesisUnmet { reason }) => {
                    println!("hypothesis unmet: {reason}");
                    Ok(0)
                }
                Err(other) => Err(other.to_string()),
            }
        }
        Command::Reflect { f1, g1, pf, pg } => {
            let report = regret_fear::analysis::verify_reflection(f1, g1, pf, pg, &profile)
                .map_err(err_string)?;
            println!("pair:    psi={}  {}", fmt_g17(report.psi), report.relation);
            println!(
                "negated: psi={}  {}",
                fmt_g17(report.negated_psi),
                report.negated_relation
            );
            println!(
                "reflection holds: {}",
                if report.holds() { "yes" } else { "no" }
            );
            Ok(0)
        }
    }
}

fn parse_fears(specs: &[String]) -> Result<Vec<FearFn>, String> {
    specs
        .iter()
        .map(|s| s.parse::<FearFn>().map_err(err_string))
        .collect()
}

fn header_row(coords: &str, fears: &[FearFn]) -> String {
    let mut header = String::from(coords);
    for fear in fears {
        header.push_str(&format!(",psi[{fear}]"));
    }
    header.push('\n');
    header
}

fn emit(out: Option<&std::path::Path>, csv: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            std::io::stdout()
                .write_all(csv.as_bytes())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
    }
}

/// Print the predicted relation per case, flag agreement where the
/// corpus records an expected modal preference, and summarize.
///
/// Survey expectations are not ground truth for a fixed profile, so
/// disagreements are reported, never fatal.
fn run_corpus(profile: &AgentProfile, file: &ScenarioFile) {
    let mut with_expect = 0usize;
    let mut agreements = 0usize;
    for case in &file.cases {
        let verdict = match profile.compare(&case.f, &case.g, Mode::Modified) {
            Ok(v) => v,
            Err(e) => {
                println!("case {}: evaluation failed: {e}", case.name);
                continue;
            }
        };
        let mut line = format!(
            "case {}: psi={} predict={}",
            case.name,
            fmt_g17(verdict.psi),
            verdict.relation
        );
        if let Some(expect) = case.expect {
            with_expect += 1;
            if expect == verdict.relation {
                agreements += 1;
                line.push_str(&format!(" expect={expect} agree"));
            } else {
                line.push_str(&format!(" expect={expect} disagree"));
            }
        }
        println!("{line}");
    }
    println!(
        "cases: {}  agreement: {agreements}/{with_expect} on cases with expectations",
        file.cases.len()
    );
}

fn load_corpus(name: &str) -> Result<String, String> {
    match name {
        "table1" => Ok(include_str!("../corpora/table1.cases").to_string()),
        "table2" => Ok(include_str!("../corpora/table2.cases").to_string()),
        path => fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}")),
    }
}

/// Recompute the four reference numbers of the treatment scenario.
///
/// With the reference configuration (cubic regret, linear fear, unknown
/// mass 0.1) each line carries the expected value, its tolerance, and a
/// PASS/FAIL flag; any override drops the reference columns.
fn run_medcase(base: &AgentProfile, fear_spec: &str, unknown_mass: f64) -> Result<u8, String> {
    let fear: FearFn = fear_spec.parse().map_err(err_string)?;
    let profile = AgentProfile {
        fear,
        ..base.clone()
    };
    let reference = fear == FearFn::linear()
        && unknown_mass == 0.1
        && profile.regret == RegretQ::PowerOdd { exponent: 3 };
    let classical = profile
        .psi_classical(&surgery(), &radiotherapy())
        .map_err(err_string)?;
    let case_i = case_psi(MedicalCase::I, unknown_mass, &profile).map_err(err_string)?;
    let case_ii = case_psi(MedicalCase::II, unknown_mass, &profile).map_err(err_string)?;
    let case_iii = case_iii_psi(unknown_mass, unknown_mass, &profile).map_err(err_string)?;
    let rows: [(&str, String, f64, f64, f64); 4] = [
        (
            "classical",
            "p_u=0".to_string(),
            classical,
            medical::CLASSICAL_REF,
            medical::CLASSICAL_TOL,
        ),
        (
            "case-I",
            format!("p_u={unknown_mass}"),
            case_i,
            medical::CASE_I_REF,
            medical::CASE_I_TOL,
        ),
        (
            "case-II",
            format!("p_u={unknown_mass}"),
            case_ii,
            medical::CASE_II_REF,
            medical::CASE_II_TOL,
        ),
        (
            "case-III",
            format!("p_fu=p_gu={unknown_mass}"),
            case_iii,
            medical::CASE_III_REF,
            medical::CASE_III_TOL,
        ),
    ];
    for (name, where_, psi, reference_value, tol) in &rows {
        if reference {
            let pass = (psi - reference_value).abs() < *tol;
            println!(
                "{name:<9} {where_:<15} psi={}  reference={reference_value} tol={tol} {}",
                fmt_g17(*psi),
                if pass { "PASS" } else { "FAIL" }
            );
        } else {
            println!("{name:<9} {where_:<15} psi={}", fmt_g17(*psi));
        }
    }
    Ok(0)
}
