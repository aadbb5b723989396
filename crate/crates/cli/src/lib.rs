//! The `bgemof` command line.
//!
//! Exit status is 0 on success, 1 when a checker reports findings or an
//! invariant fails, and 2 for usage, file and schema errors. Diagnostics go to
//! standard error, one finding per line: `<severity> <code> <location> <message>`.

use std::io::Write;
use std::path::{Path, PathBuf};

use bigraph_emof::constraints::{self, ConstraintError};
use bigraph_emof::io::{self, Document, IoError};
use bigraph_emof::mapping::{DecodeError, MappingError};
use bigraph_emof::variability::VariabilityError;
use bigraph_emof::{
    annotate_150, apply_deltas, check_encoding, check_multiplicities, check_typing, check_validity,
    decode, derive_type_graph, encode, enumerate_configs, extend_for_signature, validate_config,
    Finding, ValidationReport,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bgemof", version, about = "Bigraphs as typed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the type graph compatible with a signature.
    Metamodel {
        signature: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Encode a bigraph as an instance graph.
    Encode {
        bigraph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Decode a canonical instance graph back into a bigraph.
    Decode {
        graph: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run every applicable checker on a document.
    Validate {
        file: PathBuf,
        #[arg(long)]
        sig: Option<PathBuf>,
        #[arg(long)]
        tg: Option<PathBuf>,
    },
    /// Derive a representation variant of an instance graph and its type graph.
    Configure {
        graph: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Where to write the derived type graph. Defaults to the output path
        /// with `.ig.json` replaced by `.tg.json`.
        #[arg(long)]
        tg_out: Option<PathBuf>,
    },
    /// Evaluate a constraint file on an instance graph.
    Check {
        graph: PathBuf,
        #[arg(long)]
        tg: PathBuf,
        #[arg(long)]
        constraints: PathBuf,
    },
    /// List the valid feature configurations.
    Configs,
}

enum Failure {
    Findings(ValidationReport),
    Usage(Vec<Finding>),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let finding = match &e {
            IoError::Io { path, source } => {
                Finding::error("io", path.display().to_string(), source.to_string())
            }
            IoError::Json { line, column, .. } => {
                Finding::error("json", format!("{line}:{column}"), e.to_string())
            }
            IoError::Schema { path, message } => {
                Finding::error("schema", path.clone(), message.clone())
            }
        };
        Failure::Usage(vec![finding])
    }
}

fn usage(code: &'static str, location: impl Into<String>, message: impl Into<String>) -> Failure {
    Failure::Usage(vec![Finding::error(code, location, message)])
}

fn findings(report: ValidationReport) -> Result<(), Failure> {
    if report.is_empty() {
        Ok(())
    } else {
        Err(Failure::Findings(report))
    }
}

fn single(code: &'static str, location: impl Into<String>, message: impl Into<String>) -> Failure {
    let mut report = ValidationReport::new();
    report.error(code, location, message);
    Failure::Findings(report)
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Findings(report)) => {
            let _ = write!(err, "{report}");
            1
        }
        Err(Failure::Usage(list)) => {
            for f in list {
                let _ = writeln!(err, "{f}");
            }
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Metamodel { signature, output } => {
            let sig = io::load_signature(&signature)?;
            let tg = extend_for_signature(&sig)
                .map_err(|e| usage("signature", signature.display().to_string(), e.to_string()))?;
            io::save(&Document::TypeGraph(tg), &output)?;
        }
        Command::Encode { bigraph, output } => {
            let b = io::load_bigraph(&bigraph)?;
            let (g, _) = encode(&b).map_err(|e| match e {
                MappingError::InvalidBigraph(report) => Failure::Findings(report),
                MappingError::IdleLink(ref link) => {
                    single("idle-link", link.to_string(), e.to_string())
                }
                other => single("encode", bigraph.display().to_string(), other.to_string()),
            })?;
            io::save(&Document::InstanceGraph(g), &output)?;
        }
        Command::Decode { graph, sig, output } => {
            let g = io::load_instance_graph(&graph)?;
            let sig = io::load_signature(&sig)?;
            let (b, _) = decode(&g, &sig).map_err(|e| match e {
                DecodeError::InvalidGraph(report) => Failure::Findings(report),
                DecodeError::UntypedControl(ref n) => {
                    single("untyped-control", n.clone(), e.to_string())
                }
                other => single(
                    "not-canonical",
                    graph.display().to_string(),
                    other.to_string(),
                ),
            })?;
            io::save(&Document::Bigraph(b), &output)?;
        }
        Command::Validate { file, sig, tg } => validate(&file, sig.as_deref(), tg.as_deref())?,
        Command::Configure {
            graph,
            sig,
            features,
            output,
            tg_out,
        } => {
            let g = io::load_instance_graph(&graph)?;
            let sig = io::load_signature(&sig)?;
            let cfg = io::load_feature_config(&features)?;
            let tg_sigma = extend_for_signature(&sig)
                .map_err(|e| usage("signature", "signature", e.to_string()))?;
            let tg =
                derive_type_graph(&annotate_150(&tg_sigma), &cfg).map_err(variability_failure)?;
            let variant = apply_deltas(&g, &cfg, &sig).map_err(variability_failure)?;
            io::save(&Document::InstanceGraph(variant), &output)?;
            let tg_path = tg_out.unwrap_or_else(|| default_tg_path(&output));
            io::save(&Document::TypeGraph(tg), &tg_path)?;
        }
        Command::Check {
            graph,
            tg,
            constraints: path,
        } => {
            let g = io::load_instance_graph(&graph)?;
            let tg = io::load_typegraph(&tg)?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| usage("io", path.display().to_string(), e.to_string()))?;
            let location = path.display().to_string();
            let doc = constraints::parse_constraints(&text)
                .map_err(|e| constraint_failure(&location, e))?;
            let result = constraints::evaluate(&doc, &g, &tg)
                .map_err(|e| constraint_failure(&location, e))?;
            let mut report = ValidationReport::new();
            for outcome in &result.outcomes {
                let passed = outcome.instances.iter().filter(|i| i.passed).count();
                let verdict = if outcome.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{verdict} {}::{} {passed}/{}",
                    outcome.context,
                    outcome.name,
                    outcome.instances.len()
                );
            }
            for (inv, inst) in result.failures() {
                let trace = inst.trace.join("; ");
                report.error(
                    "invariant",
                    inst.node.clone(),
                    format!("{} (context {}) violated: {trace}", inv.name, inv.context),
                );
            }
            findings(report)?;
        }
        Command::Configs => {
            for cfg in enumerate_configs() {
                let _ = writeln!(out, "{cfg}");
            }
        }
    }
    Ok(())
}

fn validate(file: &Path, sig: Option<&Path>, tg: Option<&Path>) -> Result<(), Failure> {
    let report = match io::load(file)? {
        Document::Signature(_) => ValidationReport::new(),
        Document::Bigraph(b) => b.validate(),
        Document::TypeGraph(tg) => tg.validate(),
        Document::FeatureConfig(cfg) => validate_config(&cfg),
        Document::InstanceGraph(g) => {
            let sig = sig.map(io::load_signature).transpose()?;
            let tg = tg.map(io::load_typegraph).transpose()?;
            match (sig, tg) {
                (Some(sig), None) => check_encoding(&g, &sig),
                (sig, Some(tg)) => {
                    let mut report = check_typing(&g, &tg);
                    report.extend(check_validity(&g, &tg));
                    report.extend(check_multiplicities(&g, &tg));
                    if let (true, Some(sig)) = (report.is_empty(), sig) {
                        report.extend(check_encoding(&g, &sig));
                    }
                    report
                }
                (None, None) => {
                    return Err(usage(
                        "usage",
                        file.display().to_string(),
                        "validating an instance graph needs --sig or --tg",
                    ))
                }
            }
        }
    };
    findings(report)
}

fn variability_failure(e: VariabilityError) -> Failure {
    match e {
        VariabilityError::InvalidConfig(report) | VariabilityError::NotCanonical(report) => {
            Failure::Findings(report)
        }
        other => usage("features", "features", other.to_string()),
    }
}

fn constraint_failure(location: &str, e: ConstraintError) -> Failure {
    match &e {
        ConstraintError::Syntax {
            line,
            column,
            message,
        } => usage(
            "syntax",
            format!("{location}:{line}:{column}"),
            message.clone(),
        ),
        ConstraintError::TypeCheck { invariant, message } => {
            usage("type", invariant.clone(), message.clone())
        }
        ConstraintError::Evaluation { node, .. } => {
            single("evaluation", node.clone(), e.to_string())
        }
    }
}

fn default_tg_path(output: &Path) -> PathBuf {
    let name = output
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tg_name = match name.strip_suffix(".ig.json") {
        Some(stem) => format!("{stem}.tg.json"),
        None => format!("{name}.tg.json"),
    };
    output.with_file_name(tg_name)
}
