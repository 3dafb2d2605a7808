//! `qsc`: evaluate quantum voting rules on profile documents and run axiom
//! checks against them.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qsc::axioms::{
    check_dictatorship, check_iia, check_onto, check_qic, check_unanimity, run_arrow_suite,
    run_gs_suite, AxiomReport, CheckConfig, FamilySpec, RuleRef, SuiteReport, Verdict,
};
use qsc::document::{alternative_distribution, ranking_distribution};
use qsc::hilbert::DEFAULT_MAX_ALTERNATIVES;
use qsc::welfare::{qcv_basis, QcvStages};
use qsc::{AlternativeSet, BuiltRule, ProfileDocument, QcvParams, RuleSpec};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "qsc",
    version,
    about = "Quantum Condorcet voting and axiom checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a rule to a profile document.
    Evaluate(EvaluateArgs),
    /// Check one axiom, or a suite, on sampled profiles.
    Check(CheckArgs),
    /// Run the Arrow or Gibbard-Satterthwaite bundle.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    rule: String,
    /// JSON profile document.
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    /// Include every QCV stage (basis profiles only).
    #[arg(long)]
    stages: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    rule: String,
    #[arg(long, default_value_t = 3)]
    alternatives: usize,
    #[arg(long, default_value_t = 3)]
    voters: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dishonest-ballot family, e.g. `basis+sup2+random:8` or `default`.
    #[arg(long, default_value = "default")]
    family: String,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    /// Record wall-clock times in the report.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axiom {
    Qic,
    Dictatorship,
    Onto,
    Unanimity,
    Iia,
    ArrowSuite,
    GsSuite,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    axiom: Axiom,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Arrow,
    Gs,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(value_enum)]
    suite: SuiteName,
    #[command(flatten)]
    run: RunArgs,
}

enum CliError {
    Usage(String),
    Io(String),
    Core(qsc::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.kind(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<qsc::Error> for CliError {
    fn from(e: qsc::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn max_alternatives() -> CliResult<usize> {
    match std::env::var("QSC_MAX_DIM") {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!("QSC_MAX_DIM must be a positive integer, got {v:?}"))
        }),
        Err(_) => Ok(DEFAULT_MAX_ALTERNATIVES),
    }
}

fn params(m: usize, delta: Option<f64>, eps: f64) -> CliResult<QcvParams<f64>> {
    let delta = delta.unwrap_or(QcvParams::<f64>::for_alternatives(m).delta);
    Ok(QcvParams::new(delta, eps)?)
}

fn emit(output: &Output, json: &Value, text: impl FnOnce() -> String) -> CliResult<()> {
    let body = match output.format {
        Format::Json => serde_json::to_string_pretty(json).expect("reports serialize"),
        Format::Text => text(),
    };
    match &output.out {
        Some(path) => fs::write(path, body + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn pair_labels(alts: &AlternativeSet, pairs: &[(usize, usize)]) -> Value {
    pairs
        .iter()
        .map(|&(x, y)| json!(format!("{}>{}", alts.name(x), alts.name(y))))
        .collect()
}

fn stages_json(alts: &AlternativeSet, s: &QcvStages<f64>, eps: f64) -> Value {
    let scores: Map<String, Value> = s
        .scores
        .iter()
        .enumerate()
        .map(|(a, &v)| (alts.name(a).to_string(), json!(v)))
        .collect();
    let tiers: Vec<Vec<&str>> = s
        .weak_order
        .tiers()
        .iter()
        .map(|t| t.iter().map(|&a| alts.name(a)).collect())
        .collect();
    json!({
        "scores": scores,
        "weak_order": tiers,
        "encoded_any": pair_labels(alts, &s.encoded_any),
        "encoded_all": pair_labels(alts, &s.encoded_all),
        "sigma1": ranking_distribution(&s.sigma1, &eps),
        "sigma2": ranking_distribution(&s.sigma2, &eps),
        "sigma3": ranking_distribution(&s.sigma3, &eps),
    })
}

fn evaluate(args: &EvaluateArgs) -> CliResult<bool> {
    let spec: RuleSpec = args.rule.parse()?;
    let text = fs::read_to_string(&args.profile)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.profile.display())))?;
    let doc = ProfileDocument::from_json(&text)?;
    let profile = doc.to_profile::<f64>(max_alternatives()?)?;
    let space = profile.space().clone();
    let alts = space.alternatives().clone();
    let params = params(space.m(), args.delta.or(doc.delta), args.eps)?;
    if args.stages && !spec.uses_delta() {
        return Err(CliError::Usage(
            "--stages applies to qcv and qcvne only".into(),
        ));
    }

    let mut out = Map::new();
    out.insert("alternatives".into(), json!(alts.names()));
    out.insert("voters".into(), json!(profile.voters()));
    if spec.uses_delta() {
        out.insert("delta".into(), json!(params.delta));
    }
    let rule = spec.build(&alts, profile.voters(), &params)?;
    out.insert("rule".into(), json!(rule.name()));
    let distribution = match &rule {
        BuiltRule::Welfare(r) => ranking_distribution(&r.evaluate(&profile)?, &params.eps),
        BuiltRule::Choice(r) => alternative_distribution(&r.evaluate(&profile)?, &params.eps),
    };
    out.insert(
        "kind".into(),
        json!(if spec.is_welfare() {
            "ranking"
        } else {
            "alternative"
        }),
    );
    out.insert("distribution".into(), Value::Object(distribution.clone()));
    if args.stages {
        let stages = match profile.as_classical(&params.eps) {
            Some(classical) => {
                stages_json(&alts, &qcv_basis(&space, &classical, &params)?, params.eps)
            }
            None => Value::Null,
        };
        out.insert("stages".into(), stages);
    }

    emit(&args.output, &Value::Object(out), || {
        distribution
            .iter()
            .map(|(k, v)| format!("{k}\t{v}"))
            .collect::<Vec<_>>()
            .join("\n")
    })?;
    Ok(true)
}

fn config(run: &RunArgs) -> CliResult<CheckConfig<f64>> {
    let family: FamilySpec = run.family.parse()?;
    Ok(CheckConfig::new(run.alternatives, run.voters)
        .with_trials(run.trials)
        .with_seed(run.seed)
        .with_family(family)
        .with_eps(run.eps)
        .with_timing(run.timing)
        .with_max_alternatives(max_alternatives()?))
}

/// Holds counts as meeting a holds-on-sample expectation.
fn meets(expected: Option<Verdict>, got: Verdict) -> bool {
    match expected {
        None => true,
        Some(Verdict::HoldsOnSample) => got.passed(),
        Some(v) => v == got,
    }
}

fn text_report(r: &AxiomReport<f64>, ok: bool) -> String {
    let mark = if ok { "" } else { "  [unexpected]" };
    format!("{}{mark}", r.summary())
}

fn run_suite(spec: &RuleSpec, run: &RunArgs, suite: SuiteName) -> CliResult<bool> {
    let cfg = config(run)?;
    let alts = AlternativeSet::letters(run.alternatives)?;
    let params = params(run.alternatives, run.delta, run.eps)?;
    let (name, report): (&str, SuiteReport<f64>) = match suite {
        SuiteName::Arrow => {
            let built = spec.build(&alts, run.voters, &params)?;
            let welfare = built.welfare().ok_or_else(|| {
                CliError::Usage(format!(
                    "the arrow suite needs a welfare rule, {spec} is a choice rule"
                ))
            })?;
            ("arrow-suite", run_arrow_suite(welfare, &cfg)?)
        }
        SuiteName::Gs => {
            let choice = spec.build_choice(&alts, run.voters, &params)?;
            ("gs-suite", run_gs_suite(choice.as_ref(), &cfg)?)
        }
    };
    let expected = spec.expected_suite(name);
    let ok = expected.is_none_or(|v| v == report.verdict);
    emit(&run.output, &report.to_json(), || {
        let mut lines = vec![format!(
            "{} {}: {}",
            report.suite,
            report.rule,
            report.verdict.as_str()
        )];
        for (r, needed) in &report.components {
            let pass = if needed.contains(&r.verdict) {
                "pass"
            } else {
                "fail"
            };
            lines.push(format!("  {pass}  {}", r.summary()));
        }
        if !ok {
            lines.push("  [unexpected]".into());
        }
        lines.join("\n")
    })?;
    Ok(ok)
}

fn check(args: &CheckArgs) -> CliResult<bool> {
    let run = &args.run;
    let spec: RuleSpec = run.rule.parse()?;
    match args.axiom {
        Axiom::ArrowSuite => return run_suite(&spec, run, SuiteName::Arrow),
        Axiom::GsSuite => return run_suite(&spec, run, SuiteName::Gs),
        _ => {}
    }
    let cfg = config(run)?;
    let alts = AlternativeSet::letters(run.alternatives)?;
    let params = params(run.alternatives, run.delta, run.eps)?;
    let reports: Vec<AxiomReport<f64>> = match args.axiom {
        Axiom::Onto => vec![check_onto(
            spec.build_choice(&alts, run.voters, &params)?.as_ref(),
            &cfg,
        )?],
        axiom => {
            let built = spec.build(&alts, run.voters, &params)?;
            let rule = match &built {
                BuiltRule::Welfare(r) => RuleRef::Welfare(r.as_ref()),
                BuiltRule::Choice(r) => RuleRef::Choice(r.as_ref()),
            };
            let welfare = || {
                built.welfare().ok_or_else(|| {
                    CliError::Usage(format!(
                        "this axiom needs a welfare rule, {spec} is a choice rule"
                    ))
                })
            };
            match axiom {
                Axiom::Qic => vec![check_qic(rule, &cfg)?],
                Axiom::Dictatorship => vec![
                    check_dictatorship(rule, &cfg, true)?,
                    check_dictatorship(rule, &cfg, false)?,
                ],
                Axiom::Unanimity => vec![
                    check_unanimity(welfare()?, &cfg, true)?,
                    check_unanimity(welfare()?, &cfg, false)?,
                ],
                Axiom::Iia => vec![
                    check_iia(welfare()?, &cfg, true)?,
                    check_iia(welfare()?, &cfg, false)?,
                ],
                _ => unreachable!("handled above"),
            }
        }
    };
    let verdicts: Vec<bool> = reports
        .iter()
        .map(|r| meets(spec.expected(&r.axiom), r.verdict))
        .collect();
    let json = match reports.as_slice() {
        [single] => single.to_json(),
        many => many.iter().map(AxiomReport::to_json).collect(),
    };
    emit(&run.output, &json, || {
        reports
            .iter()
            .zip(&verdicts)
            .map(|(r, &ok)| text_report(r, ok))
            .collect::<Vec<_>>()
            .join("\n")
    })?;
    Ok(verdicts.iter().all(|&ok| ok))
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", json!({"error": e.kind(), "message": e.message()}));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            return fail(&CliError::Usage(
                "missing subcommand or argument, see --help".into(),
            ));
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("bad arguments");
            return fail(&CliError::Usage(
                first.trim_start_matches("error: ").to_string(),
            ));
        }
    };
    let outcome = match &cli.command {
        Command::Evaluate(args) => evaluate(args),
        Command::Check(args) => check(args),
        Command::Suite(args) => args
            .run
            .rule
            .parse::<RuleSpec>()
            .map_err(CliError::from)
            .and_then(|spec| run_suite(&spec, &args.run, args.suite)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(&e),
    }
}
