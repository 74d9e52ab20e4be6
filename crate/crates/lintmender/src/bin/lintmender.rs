//! Batch front end: walk a corpus, detect or repair the supported warning
//! categories, apply diagnostic suggestions, and report density metrics.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lintmender::detect::{DetectorConfig, LintId};
use lintmender::runner::{
    apply_exit_code, cmd_apply_diagnostics, cmd_density, cmd_evolve, cmd_fix, cmd_scan,
    render_density, render_evolution, render_report, DiagnosticsSource, Mode, OutputFormat,
    RunConfig, RunError,
};
use lintmender::source::LineMode;

#[derive(Parser)]
#[command(
    name = "lintmender",
    version,
    about = "Detects and repairs high-frequency linter warnings, applies diagnostic suggestions, and reports warning densities.",
    after_help = "Exit codes: 0 clean, 1 findings remain, 2 run error.\nSet LINTMENDER_NO_COLOR to disable ANSI colors in text output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LineModeArg {
    Raw,
    Nonblank,
}

impl From<LineModeArg> for LineMode {
    fn from(v: LineModeArg) -> LineMode {
        match v {
            LineModeArg::Raw => LineMode::Raw,
            LineModeArg::Nonblank => LineMode::NonBlank,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(v: FormatArg) -> OutputFormat {
        match v {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Args)]
struct CommonOpts {
    /// Comma-separated lints to enable (default: all four native lints)
    #[arg(long, value_name = "CSV")]
    lints: Option<String>,

    /// Comma-separated lints whose suggestions are applied regardless of
    /// their applicability tag
    #[arg(long, value_name = "CSV")]
    promote: Option<String>,

    /// Type suffix for unsuffixed integer literals
    #[arg(long = "suffix-int", value_name = "TYPE", default_value = "i32")]
    suffix_int: String,

    /// Type suffix for unsuffixed float literals
    #[arg(long = "suffix-float", value_name = "TYPE", default_value = "f64")]
    suffix_float: String,

    /// Comment body inserted above undocumented unsafe blocks
    #[arg(long = "safety-comment", value_name = "TEXT")]
    safety_comment: Option<String>,

    /// Only flag `pub` items for missing Debug implementations
    #[arg(long = "public-only-debug")]
    public_only_debug: bool,

    /// Line counting mode for density metrics
    #[arg(long = "line-mode", value_enum, default_value = "raw")]
    line_mode: LineModeArg,

    /// Report format
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,

    /// Fixpoint round budget for cascading fixes
    #[arg(long = "max-rounds", value_name = "N", default_value_t = 8)]
    max_rounds: u32,

    /// Additional exclude glob (repeatable); **/target/** is always excluded
    #[arg(long = "exclude", value_name = "GLOB")]
    exclude: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Detect findings without modifying any file
    Scan {
        /// Directories or files to process
        #[arg(value_name = "ROOT", default_value = ".")]
        roots: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Detect findings and repair them in place
    Fix {
        #[arg(value_name = "ROOT", default_value = ".")]
        roots: Vec<PathBuf>,
        /// Print unified diffs instead of writing files
        #[arg(long = "dry-run")]
        dry_run: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Apply machine-applicable suggestions from a diagnostics JSON stream
    ApplyDiagnostics {
        /// Diagnostics file (line-delimited JSON), or `-` for stdin
        #[arg(value_name = "DIAGNOSTICS", required_unless_present = "from_command")]
        diagnostics: Option<String>,
        /// Produce the stream by running this shell command instead
        #[arg(long = "from-command", value_name = "CMD", conflicts_with = "diagnostics")]
        from_command: Option<String>,
        /// Base directory for relative file names in the stream
        #[arg(long, value_name = "DIR", default_value = ".")]
        root: PathBuf,
        /// Print unified diffs instead of writing files
        #[arg(long = "dry-run")]
        dry_run: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Warning-density report over a corpus
    Density {
        #[arg(value_name = "ROOT", default_value = ".")]
        roots: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Density time series across labeled snapshot directories
    Evolve {
        /// Snapshots as LABEL=DIR (or bare DIR, labeled by its path)
        #[arg(value_name = "SNAPSHOT")]
        snapshots: Vec<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn parse_csv(raw: &Option<String>) -> Vec<String> {
    raw.as_deref()
        .map(|s| {
            s.split(',')
                .map(|p| p.trim().to_string())
                .filter(|p| !p.is_empty())
                .collect()
        })
        .unwrap_or_default()
}

fn build_config(roots: Vec<PathBuf>, common: &CommonOpts, mode: Mode) -> Result<RunConfig, RunError> {
    let mut detector = DetectorConfig {
        int_suffix: common.suffix_int.clone(),
        float_suffix: common.suffix_float.clone(),
        public_only_debug: common.public_only_debug,
        ..DetectorConfig::default()
    };
    if let Some(comment) = &common.safety_comment {
        detector.safety_comment = comment.clone();
    }
    let lint_names = parse_csv(&common.lints);
    if !lint_names.is_empty() {
        let native = LintId::native();
        let mut enabled = BTreeSet::new();
        for name in &lint_names {
            let lint = LintId::other(name);
            if !native.contains(&lint) {
                return Err(RunError::Usage(format!(
                    "unknown lint `{name}`; native lints are: {}",
                    native
                        .iter()
                        .map(|l| l.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
            enabled.insert(lint);
        }
        detector.enabled = enabled;
    }
    detector.validate().map_err(RunError::Config)?;
    let promote: BTreeSet<LintId> = parse_csv(&common.promote)
        .iter()
        .map(|name| LintId::other(name))
        .collect();
    if common.max_rounds == 0 {
        return Err(RunError::Usage("--max-rounds must be at least 1".to_string()));
    }
    let mut cfg = RunConfig::new(roots);
    cfg.detector = detector;
    cfg.promote = promote;
    cfg.mode = mode;
    cfg.line_mode = common.line_mode.into();
    cfg.format = common.format.into();
    cfg.max_rounds = common.max_rounds;
    cfg.exclude.extend(common.exclude.iter().cloned());
    Ok(cfg)
}

fn parse_snapshots(raw: &[String]) -> Vec<(String, PathBuf)> {
    raw.iter()
        .map(|entry| match entry.split_once('=') {
            Some((label, dir)) => (label.to_string(), PathBuf::from(dir)),
            None => (entry.clone(), PathBuf::from(entry)),
        })
        .collect()
}

fn run(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Scan { roots, common } => {
            let cfg = build_config(roots, &common, Mode::Scan)?;
            let report = cmd_scan(&cfg)?;
            print!("{}", render_report(&report, cfg.format));
            Ok(report.exit_code())
        }
        Command::Fix { roots, dry_run, common } => {
            let mode = if dry_run { Mode::DryRun } else { Mode::Fix };
            let cfg = build_config(roots, &common, mode)?;
            let report = cmd_fix(&cfg)?;
            print!("{}", render_report(&report, cfg.format));
            Ok(report.exit_code())
        }
        Command::ApplyDiagnostics {
            diagnostics,
            from_command,
            root,
            dry_run,
            common,
        } => {
            let mode = if dry_run { Mode::DryRun } else { Mode::Fix };
            let cfg = build_config(vec![root], &common, mode)?;
            let source = match (diagnostics, from_command) {
                (Some(path), _) if path == "-" => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|source| RunError::Io {
                            path: "<stdin>".to_string(),
                            source,
                        })?;
                    DiagnosticsSource::Stdin(buf)
                }
                (Some(path), _) => DiagnosticsSource::File(PathBuf::from(path)),
                (None, Some(cmd)) => DiagnosticsSource::Command(cmd),
                (None, None) => unreachable!("clap enforces one source"),
            };
            let report = cmd_apply_diagnostics(&cfg, &source)?;
            print!("{}", render_report(&report, cfg.format));
            Ok(apply_exit_code(&report))
        }
        Command::Density { roots, common } => {
            let cfg = build_config(roots, &common, Mode::Scan)?;
            let label = cfg
                .roots
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(":");
            let report = cmd_density(&cfg, &label)?;
            print!("{}", render_density(&report, cfg.format));
            Ok(0)
        }
        Command::Evolve { snapshots, common } => {
            let cfg = build_config(vec![], &common, Mode::Scan)?;
            let snapshots = parse_snapshots(&snapshots);
            let (reports, _rows) = cmd_evolve(&cfg, &snapshots)?;
            print!("{}", render_evolution(&reports, cfg.format));
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
