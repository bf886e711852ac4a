//! The `gddx` command line: `prove`, `detect`, `i18n-lint` and `serve`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::gdd::{rules_from_env, SaturationLimits};
use crate::i18n::{lint, load_catalog, Catalog, BASELINE_LANGUAGE};
use crate::service::{self, AppState, Backend, ProveRequest, RenderMode, Source};

/// Exit statuses.
pub const EXIT_PROVED: i32 = 0;
pub const EXIT_NOT_PROVED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gddx", version, about = "Geometry theorem prover")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prove a goal about a construction.
    Prove {
        /// GCS script, or GeoGebra XML when the name ends in `.xml`.
        file: PathBuf,
        /// Goal fact, `auto:<n>` for a detected property, or the script's first goal when omitted.
        #[arg(long)]
        goal: Option<String>,
        #[arg(long, default_value = "en")]
        lang: String,
        #[arg(long, value_enum, default_value_t = RenderMode::Tree)]
        format: RenderMode,
        /// Print the flat numbered list instead of the tree.
        #[arg(long)]
        no_structure: bool,
        #[arg(long, value_enum, default_value_t = Backend::Gdd)]
        backend: Backend,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List properties that hold in the figure but were not constructed.
    Detect {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the catalogs in a directory against `en.csv`.
    I18nLint { dir: PathBuf },
    /// Run the HTTP service on the loopback interface.
    Serve {
        #[arg(long, default_value_t = service::DEFAULT_PORT)]
        port: u16,
        /// Directory of static files for the web UI.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
}

/// Runs the command line with `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match cli.command {
        Command::Prove {
            file,
            goal,
            lang,
            format,
            no_structure,
            backend,
            seed,
        } => {
            let source = match read_source(&file, seed) {
                Ok(s) => s,
                Err(msg) => return fail(err, EXIT_USAGE, &msg),
            };
            let rules = match rules_from_env() {
                Ok(r) => r,
                Err(e) => return fail(err, EXIT_USAGE, &e.to_string()),
            };
            let req = ProveRequest {
                source,
                goal: goal.unwrap_or_default(),
                lang,
                mode: format,
                structure: !no_structure,
                backend,
            };
            let resp = service::prove_request(&req, &rules, &SaturationLimits::default());
            let _ = out.write_all(resp.rendering.as_bytes());
            for d in &resp.diagnostics {
                let _ = writeln!(err, "{}: {d}", file.display());
            }
            resp.exit_code()
        }
        Command::Detect { file, seed } => {
            let source = match read_source(&file, seed) {
                Ok(s) => s,
                Err(msg) => return fail(err, EXIT_USAGE, &msg),
            };
            let found = service::load_source(&source).and_then(|c| service::detect(&c, seed));
            match found {
                Ok(facts) => {
                    for (i, f) in facts.iter().enumerate() {
                        let _ = writeln!(out, "{}. {}", i + 1, f.to_script());
                    }
                    0
                }
                Err(d) => {
                    let code = match d.class {
                        service::ErrorClass::Input => EXIT_USAGE,
                        service::ErrorClass::Resource => EXIT_RESOURCE,
                    };
                    fail(err, code, &format!("{}: {}", file.display(), d.message))
                }
            }
        }
        Command::I18nLint { dir } => lint_dir(&dir, out, err),
        Command::Serve { port, static_dir } => {
            let state = match rules_from_env() {
                Ok(r) => AppState {
                    rules: std::sync::Arc::new(r),
                    ..AppState::default()
                },
                Err(e) => return fail(err, EXIT_USAGE, &e.to_string()),
            };
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => return fail(err, EXIT_RESOURCE, &e.to_string()),
            };
            match runtime.block_on(service::serve(state, port, static_dir)) {
                Ok(()) => 0,
                Err(e) => fail(err, EXIT_RESOURCE, &format!("cannot serve on port {port}: {e}")),
            }
        }
    }
}

fn fail(err: &mut dyn Write, code: i32, msg: &str) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    code
}

fn read_source(path: &Path, seed: u64) -> Result<Source, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let xml = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("xml"))
        || text.trim_start().starts_with('<');
    Ok(if xml {
        Source {
            ggb: Some(text),
            seed,
            ..Source::default()
        }
    } else {
        Source {
            gcs: Some(text),
            seed,
            ..Source::default()
        }
    })
}

fn lint_dir(dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let load = |path: &Path| -> Result<Catalog, String> {
        let lang = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        load_catalog(&text, lang).map_err(|e| format!("{}: {e}", path.display()))
    };
    let baseline_path = dir.join(format!("{BASELINE_LANGUAGE}.csv"));
    if !baseline_path.is_file() {
        return fail(err, EXIT_USAGE, &format!("{} not found", baseline_path.display()));
    }
    let baseline = match load(&baseline_path) {
        Ok(c) => c,
        Err(msg) => return fail(err, EXIT_USAGE, &msg),
    };
    let mut paths: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|e| e == "csv") && *p != baseline_path)
            .collect(),
        Err(e) => return fail(err, EXIT_USAGE, &format!("cannot list {}: {e}", dir.display())),
    };
    paths.sort();
    let mut catalogs = Vec::new();
    for p in &paths {
        match load(p) {
            Ok(c) => catalogs.push(c),
            Err(msg) => return fail(err, EXIT_USAGE, &msg),
        }
    }
    let report = lint(&catalogs, &baseline);
    let _ = write!(out, "{report}");
    report.status()
}
