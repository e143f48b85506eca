//! The `qsa` command line.
//!
//! Everything runs through [`run`], which takes its streams as arguments so
//! tests can drive it without a process.
//!
//! Exit codes: 0 success, 1 validation errors found, 2 usage or environment
//! error.

pub mod dot;
mod render;
mod wizard;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qsa_core::catalog::{load_builtin, load_dir, Catalog, CatalogError};
use qsa_core::dsl::{self, Diagnostic};
use qsa_core::engine::{recommend, AnswerSet, EngineError, Top, WeightVector};
use qsa_core::{DecisionModel, DesignArea};
use qsa_service::{ApiError, ServiceConfig};
use render::{AreaRow, Paint};
use rust_decimal::Decimal;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qsa", version, about = "Browse quantum software architecture decision models and get pattern recommendations")]
struct Cli {
    /// Directory of .qdm models to use instead of the bundled catalog.
    #[arg(long, global = true, env = "QSA_MODELS_DIR", value_name = "DIR")]
    models: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = ColorChoice::Auto)]
    color: ColorChoice,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColorChoice {
    Auto,
    Always,
    Never,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List design areas.
    List,
    /// Show a model, or one pattern of it.
    Show { area: String, pattern: Option<String> },
    /// Rank the patterns reached by a set of answers.
    Advise {
        area: String,
        /// Priority for a quality attribute, as qa=value. Repeatable.
        #[arg(long = "weight", value_name = "QA=VALUE")]
        weights: Vec<String>,
        /// JSON document {"weights": {...}}; --weight entries override it.
        #[arg(long, value_name = "FILE")]
        weights_file: Option<PathBuf>,
        /// Branches taken at a gateway, as gateway=branch[,branch]. Repeatable.
        #[arg(long = "answer", value_name = "GATEWAY=BRANCHES")]
        answers: Vec<String>,
        /// Keep only the best k patterns.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Answer the model's questions one at a time.
    Interactive {
        area: String,
        /// Skip the weights prompt. Repeatable.
        #[arg(long = "weight", value_name = "QA=VALUE")]
        weights: Vec<String>,
        #[arg(long)]
        top: Option<usize>,
    },
    /// Parse and check a .qdm file.
    Validate { path: PathBuf },
    /// Like validate, plus canonical ordering warnings.
    Lint { path: PathBuf },
    /// Print a model as a Graphviz digraph.
    ExportDot { area: String },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value = qsa_service::DEFAULT_ADDR)]
        addr: String,
        /// Origin allowed to POST from a browser. Repeatable; `*` allows any.
        #[arg(long = "allow-origin", value_name = "ORIGIN")]
        allow_origins: Vec<String>,
    },
}

/// Facts about the process environment that affect output.
#[derive(Debug, Clone, Copy, Default)]
pub struct Terminal {
    pub no_color: bool,
    pub stdout_is_tty: bool,
}

impl Terminal {
    pub fn detect() -> Self {
        Terminal {
            no_color: std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()),
            stdout_is_tty: std::io::stdout().is_terminal(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("error[{code}]: {message}")]
pub struct Failure {
    pub exit: i32,
    pub code: String,
    pub message: String,
}

impl Failure {
    pub fn usage(code: &str, message: impl Into<String>) -> Self {
        Failure { exit: EXIT_USAGE, code: code.to_string(), message: message.into() }
    }

    fn io(e: std::io::Error) -> Self {
        Failure::usage("io-error", e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::usage(e.code(), e.to_string())
    }
}

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Self {
        Failure::usage(&e.code, e.message)
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        let code = match &e {
            CatalogError::Empty(_) => "no-models-found",
            CatalogError::Io { .. } => "unreadable-models-dir",
            _ => "invalid-catalog",
        };
        Failure::usage(code, e.to_string())
    }
}

pub(crate) fn parse_weight(arg: &str) -> Result<(String, Decimal), Failure> {
    let (qa, value) = arg
        .split_once('=')
        .ok_or_else(|| Failure::usage("invalid-argument", format!("weight `{arg}` is not qa=value")))?;
    let w = qsa_service::wire::decimal(&serde_json::Value::String(value.to_string()))
        .ok_or_else(|| Failure::usage("invalid-argument", format!("weight `{arg}` has a non-numeric value")))?;
    Ok((qa.trim().to_string(), w))
}

fn parse_answers(args: &[String]) -> Result<AnswerSet, Failure> {
    let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for arg in args {
        let (g, labels) = arg.split_once('=').ok_or_else(|| {
            Failure::usage("invalid-argument", format!("answer `{arg}` is not gateway=branch[,branch]"))
        })?;
        map.entry(g.trim().to_string())
            .or_default()
            .extend(labels.split(',').map(str::trim).filter(|l| !l.is_empty()).map(str::to_string));
    }
    Ok(AnswerSet::from(map))
}

fn parse_top(top: Option<usize>) -> Result<Top, Failure> {
    match top {
        None => Ok(Top::All),
        Some(k) => Top::k(k).ok_or_else(|| Failure::usage("invalid-k", "--top must be at least 1")),
    }
}

struct Ctx<'a> {
    format: Format,
    paint: Paint,
    models: Option<PathBuf>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn catalog(&self) -> Result<Catalog, Failure> {
        match &self.models {
            Some(dir) if !dir.is_dir() => Err(Failure::usage(
                "unreadable-models-dir",
                format!("{} is not a readable directory", dir.display()),
            )),
            Some(dir) => Ok(load_dir(dir)?),
            None => Ok(load_builtin()?),
        }
    }

    fn emit(&mut self, text: &str) -> Result<(), Failure> {
        self.out.write_all(text.as_bytes()).map_err(Failure::io)
    }

    fn emit_json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Failure::usage("io-error", e.to_string()))?;
        self.emit(&text)?;
        self.emit("\n")
    }
}

fn model<'c>(catalog: &'c Catalog, area: &str) -> Result<&'c DecisionModel, Failure> {
    area.parse::<DesignArea>()
        .ok()
        .and_then(|a| catalog.model(a))
        .ok_or_else(|| {
            let known: Vec<String> = catalog.areas().map(|a| a.to_string()).collect();
            Failure::usage("unknown-area", format!("unknown area `{area}` (known: {})", known.join(", ")))
        })
}

fn weights_from(
    catalog: &Catalog,
    args: &[String],
    file: Option<&Path>,
) -> Result<WeightVector, Failure> {
    let mut pairs: BTreeMap<String, Decimal> = BTreeMap::new();
    if let Some(path) = file {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::usage("unreadable-file", format!("{}: {e}", path.display())))?;
        let w = qsa_service::wire::weights_document(&bytes, catalog.vocabulary())?;
        pairs.extend(w.iter().map(|(k, v)| (k.to_string(), v)));
    }
    for arg in args {
        let (k, v) = parse_weight(arg)?;
        pairs.insert(k, v);
    }
    Ok(WeightVector::new(pairs, catalog.vocabulary())?)
}

#[derive(Serialize)]
struct AdviceDoc<'a> {
    area: DesignArea,
    weights: &'a WeightVector,
    answers: &'a AnswerSet,
    recommendations: &'a [qsa_core::engine::Recommendation],
}

fn advise_output(
    ctx: &mut Ctx<'_>,
    model: &DecisionModel,
    answers: &AnswerSet,
    weights: &WeightVector,
    top: Top,
) -> Result<i32, Failure> {
    let recs = recommend(model, answers, weights, top)?;
    if weights.is_zero() {
        writeln!(ctx.err, "hint: no weights set, so every score is 0; add --weight qa=value to rank")
            .map_err(Failure::io)?;
    }
    match ctx.format {
        Format::Json => ctx.emit_json(&AdviceDoc { area: model.area, weights, answers, recommendations: &recs })?,
        Format::Text => {
            let text = render::recommendation_table(model, weights, &recs, ctx.paint);
            ctx.emit(&text)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckDoc<'a> {
    file: String,
    ok: bool,
    diagnostics: &'a [Diagnostic],
}

fn check_file(ctx: &mut Ctx<'_>, path: &Path, lint: bool) -> Result<i32, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::usage("unreadable-file", format!("{}: {e}", path.display())))?;
    let diagnostics = match std::str::from_utf8(&bytes) {
        Ok(text) if lint => dsl::lint(text),
        Ok(text) => match dsl::parse(text) {
            Ok(parsed) => parsed.warnings,
            Err(diags) => diags,
        },
        Err(_) => dsl::parse_bytes(&bytes).err().unwrap_or_default(),
    };
    let ok = !diagnostics.iter().any(Diagnostic::is_error);
    let file = path.display().to_string();
    match ctx.format {
        Format::Json => ctx.emit_json(&CheckDoc { file, ok, diagnostics: &diagnostics })?,
        Format::Text => {
            let mut text = String::new();
            for d in &diagnostics {
                text.push_str(&render::diagnostic_line(&file, d, ctx.paint));
                text.push('\n');
            }
            let errors = diagnostics.iter().filter(|d| d.is_error()).count();
            let warnings = diagnostics.len() - errors;
            text.push_str(&format!("{file}: {errors} errors, {warnings} warnings\n"));
            ctx.emit(&text)?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_INVALID })
}

fn execute(command: Command, ctx: &mut Ctx<'_>, input: &mut dyn BufRead) -> Result<i32, Failure> {
    match command {
        Command::List => {
            let catalog = ctx.catalog()?;
            let rows: Vec<AreaRow> = catalog
                .models()
                .map(|m| AreaRow { area: m.area.to_string(), title: m.meta.title.clone(), patterns: m.patterns.len() })
                .collect();
            match ctx.format {
                Format::Json => {
                    let doc: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|r| serde_json::json!({ "area": r.area, "title": r.title, "patterns": r.patterns }))
                        .collect();
                    ctx.emit_json(&doc)?;
                }
                Format::Text => {
                    let text = render::area_table(&rows, ctx.paint);
                    ctx.emit(&text)?;
                }
            }
        }
        Command::Show { area, pattern } => {
            let catalog = ctx.catalog()?;
            let m = model(&catalog, &area)?;
            match pattern {
                None if ctx.format == Format::Json => ctx.emit_json(m)?,
                None => {
                    let text = render::model_view(m, ctx.paint);
                    ctx.emit(&text)?;
                }
                Some(id) => {
                    let p = m.patterns.get(&id).ok_or_else(|| {
                        Failure::usage("unknown-pattern", format!("area `{area}` has no pattern `{id}`"))
                    })?;
                    match ctx.format {
                        Format::Json => ctx.emit_json(p)?,
                        Format::Text => {
                            let text = render::pattern_view(p, ctx.paint);
                            ctx.emit(&text)?;
                        }
                    }
                }
            }
        }
        Command::Advise { area, weights, weights_file, answers, top } => {
            let catalog = ctx.catalog()?;
            let m = model(&catalog, &area)?;
            let w = weights_from(&catalog, &weights, weights_file.as_deref())?;
            let answers = parse_answers(&answers)?;
            let top = parse_top(top)?;
            return advise_output(ctx, m, &answers, &w, top);
        }
        Command::Interactive { area, weights, top } => {
            let catalog = ctx.catalog()?;
            let m = model(&catalog, &area)?;
            let preset = if weights.is_empty() { None } else { Some(weights_from(&catalog, &weights, None)?) };
            let top = parse_top(top)?;
            match wizard::run(m, catalog.vocabulary(), preset, input, ctx.out)? {
                wizard::Outcome::Aborted => {
                    writeln!(ctx.err, "aborted").map_err(Failure::io)?;
                }
                wizard::Outcome::Finished { session, weights } => {
                    ctx.emit("\n")?;
                    let answers = session.answers().clone();
                    return advise_output(ctx, m, &answers, &weights, top);
                }
            }
        }
        Command::Validate { path } => return check_file(ctx, &path, false),
        Command::Lint { path } => return check_file(ctx, &path, true),
        Command::ExportDot { area } => {
            let catalog = ctx.catalog()?;
            let text = dot::export_dot(model(&catalog, &area)?);
            ctx.emit(&text)?;
        }
        Command::Serve { addr, allow_origins } => {
            let catalog = ctx.catalog()?;
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Failure::usage("runtime-failed", e.to_string()))?;
            let config = ServiceConfig { allowed_origins: allow_origins, log_requests: true };
            runtime.block_on(async {
                let listener = qsa_service::bind(&addr).await.map_err(|e| Failure::usage(e.code(), e.to_string()))?;
                writeln!(ctx.err, "listening on http://{addr}").map_err(Failure::io)?;
                qsa_service::serve(listener, catalog, config)
                    .await
                    .map_err(|e| Failure::usage(e.code(), e.to_string()))
            })?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, terminal: Terminal, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                return EXIT_USAGE;
            }
            let _ = out.write_all(text.as_bytes());
            return EXIT_OK;
        }
    };
    let enabled = match cli.color {
        ColorChoice::Always => true,
        ColorChoice::Never => false,
        ColorChoice::Auto => terminal.stdout_is_tty && !terminal.no_color,
    };
    let mut ctx = Ctx { format: cli.format, paint: Paint { enabled }, models: cli.models, out, err };
    match execute(cli.command, &mut ctx, input) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.err, "{f}");
            f.exit
        }
    }
}
