//! `brb`: validate, generate and run belief rule bases and evaluation frameworks.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, missing or unknown
//! inputs), 2 a file failed to load or validate, 3 evaluation failed.

mod render;

use std::fmt;
use std::io::Write as _;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brb_core::io::{
    load_framework_file, parse_leaf_inputs, parse_rule_base, parse_scenarios, read_file, store_rule_base, LoadOptions,
    RuleBaseDocument,
};
use brb_core::model::{generate_complete_rule_base_capped, EvaluationFramework, DEFAULT_RULE_CAP};
use brb_core::validation::{compare, load_survey, roc_svg};
use brb_core::{
    evaluate_tree, infer, what_if, FillPolicy, FrameworkError, InferenceError, InputValue, LoadError, Severity,
    ValidationError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "brb", version, about = "Belief rule base inference and evaluation frameworks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Rescale rule consequents summing to at most 1.01 back to 1 when loading.
    #[arg(long, global = true)]
    renormalize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Debug)]
struct FrameworkArg {
    /// Framework file; defaults to $BRB_FRAMEWORK.
    #[arg(env = "BRB_FRAMEWORK")]
    framework: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a rule base file and list its issues.
    Validate { rulebase: PathBuf },
    /// Generate a complete rule base from a rule base file without rules.
    Gen {
        spec: PathBuf,
        #[arg(long, default_value_t = FillPolicy::Diagonal)]
        fill: FillPolicy,
        /// Refuse to generate more rules than this.
        #[arg(long, default_value_t = DEFAULT_RULE_CAP)]
        cap: u64,
    },
    /// Run one rule base on inline inputs.
    Infer {
        rulebase: PathBuf,
        /// Comma-separated attribute=value pairs; a value may be `missing`.
        #[arg(long, required = true, value_delimiter = ',')]
        input: Vec<String>,
    },
    /// Evaluate a framework on a leaf inputs file.
    Eval {
        #[command(flatten)]
        fw: FrameworkArg,
        #[arg(long)]
        inputs: PathBuf,
    },
    /// Compare scenarios against a baseline.
    Whatif {
        #[command(flatten)]
        fw: FrameworkArg,
        #[arg(long)]
        baseline: PathBuf,
        /// Scenario file (one scenario or an array); repeatable.
        #[arg(long = "scenario")]
        scenarios: Vec<PathBuf>,
    },
    /// ROC comparison of the framework against the mean-score baseline.
    Roc {
        #[command(flatten)]
        fw: FrameworkArg,
        #[arg(long)]
        survey: PathBuf,
        /// Also write the ROC curves as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Serve the framework over HTTP.
    Serve {
        #[command(flatten)]
        fw: FrameworkArg,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<FrameworkError> for Failure {
    fn from(e: FrameworkError) -> Self {
        match e {
            FrameworkError::MissingLeafInput(_) | FrameworkError::UnknownLeaf(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<InferenceError> for Failure {
    fn from(e: InferenceError) -> Self {
        match e {
            InferenceError::InputMismatch { .. } | InferenceError::NonFiniteInput(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<ValidationError> for Failure {
    fn from(e: ValidationError) -> Self {
        match e {
            ValidationError::Evaluation { .. } => Failure::Runtime(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn read(path: &Path) -> Result<String, Failure> {
    Ok(read_file(path)?)
}

fn framework(arg: &FrameworkArg, opts: LoadOptions) -> Result<EvaluationFramework<f64>, Failure> {
    Ok(load_framework_file(&arg.framework, opts)?)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let opts = LoadOptions { renormalize: cli.renormalize };
    let format = cli.format;
    match cli.command {
        Command::Validate { rulebase } => {
            let rb = parse_rule_base::<f64>(&read(&rulebase)?, opts)?;
            let issues = rb.validate();
            let errors = issues.iter().filter(|i| i.severity == Severity::Error).count();
            let out = match format {
                Format::Json => json(&serde_json::json!({
                    "name": rb.name(),
                    "rules": rb.rules().len(),
                    "errors": errors,
                    "warnings": issues.len() - errors,
                    "issues": issues,
                })),
                Format::Table => render::issues(&issues, errors),
            };
            if errors > 0 {
                print!("{out}");
                return Err(Failure::Invalid(format!("{}: {errors} errors", rulebase.display())));
            }
            Ok(out)
        }
        Command::Gen { spec, fill, cap } => {
            let doc: RuleBaseDocument<f64> = serde_json::from_str(&read(&spec)?).map_err(LoadError::from)?;
            if !doc.rules.is_empty() {
                return Err(Failure::Invalid(format!("{}: spec already lists rules", spec.display())));
            }
            let shell = doc.to_rule_base_unchecked(opts)?;
            let rb = generate_complete_rule_base_capped(
                shell.name(),
                shell.antecedents().to_vec(),
                shell.consequent_scale().clone(),
                fill,
                cap,
            )
            .map_err(|e| Failure::Invalid(e.to_string()))?;
            Ok(match format {
                Format::Json => store_rule_base(&rb),
                Format::Table => render::rules(&rb),
            })
        }
        Command::Infer { rulebase, input } => {
            let rb = brb_core::io::load_rule_base::<f64>(&read(&rulebase)?, opts)?;
            let inputs = inline_inputs(&rb, &input)?;
            let result = infer(&rb, &inputs)?;
            Ok(match format {
                Format::Json => json(&result),
                Format::Table => render::inference(rb.name(), &result),
            })
        }
        Command::Eval { fw, inputs } => {
            let fw = framework(&fw, opts)?;
            let inputs = parse_leaf_inputs::<f64>(&read(&inputs)?)?;
            let result = evaluate_tree(&fw, &inputs)?;
            Ok(match format {
                Format::Json => json(&result),
                Format::Table => render::tree(&result),
            })
        }
        Command::Whatif { fw, baseline, scenarios } => {
            let fw = framework(&fw, opts)?;
            let baseline = parse_leaf_inputs::<f64>(&read(&baseline)?)?;
            let mut all = vec![];
            for path in &scenarios {
                all.extend(parse_scenarios::<f64>(&read(path)?)?);
            }
            let report = what_if(&fw, &baseline, &all)?;
            Ok(match format {
                Format::Json => json(&report),
                Format::Table => render::what_if(&report),
            })
        }
        Command::Roc { fw, survey, svg } => {
            let fw = framework(&fw, opts)?;
            let records = load_survey::<f64>(&read(&survey)?, &fw.leaf_names())?;
            let report = compare(&fw, &records)?;
            if let Some(path) = svg {
                std::fs::write(&path, roc_svg(&report))
                    .map_err(|e| Failure::Runtime(format!("writing {}: {e}", path.display())))?;
            }
            Ok(match format {
                Format::Json => json(&report),
                Format::Table => report.to_table(),
            })
        }
        Command::Serve { fw, port, host } => {
            let fw = framework(&fw, opts)?;
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .map_err(|e| Failure::Runtime(format!("binding {addr}: {e}")))?;
                let local = listener.local_addr().map_err(|e| Failure::Runtime(e.to_string()))?;
                eprintln!("serving `{}` on http://{local}", fw.name());
                brb_service::serve(fw, listener).await.map_err(|e| Failure::Runtime(e.to_string()))
            })?;
            Ok(String::new())
        }
    }
}

/// Orders `name=value` pairs by the rule base's attributes.
fn inline_inputs(rb: &brb_core::model::RuleBase<f64>, pairs: &[String]) -> Result<Vec<InputValue>, Failure> {
    let mut given: Vec<(String, InputValue)> = vec![];
    for pair in pairs.iter().filter(|p| !p.trim().is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--input `{pair}`: expected attribute=value")))?;
        let (k, v) = (k.trim(), v.trim());
        let value = if v.eq_ignore_ascii_case("missing") {
            InputValue::Missing
        } else {
            InputValue::Crisp(
                v.parse().map_err(|_| Failure::Usage(format!("--input `{pair}`: `{v}` is not a number")))?,
            )
        };
        if rb.antecedents().iter().all(|a| a.name() != k) {
            return Err(Failure::Usage(format!("unknown attribute `{k}`")));
        }
        if given.iter().any(|(g, _)| g == k) {
            return Err(Failure::Usage(format!("attribute `{k}` given twice")));
        }
        given.push((k.to_owned(), value));
    }
    rb.antecedents()
        .iter()
        .map(|a| {
            given
                .iter()
                .find(|(k, _)| k == a.name())
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Failure::Usage(format!("no input for attribute `{}`", a.name())))
        })
        .collect()
}
