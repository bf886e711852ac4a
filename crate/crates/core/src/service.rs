//! Request handling shared by the command line and the HTTP service.
//!
//! [`prove_request`] is the single place a proof is rendered, so the two
//! front ends print the same bytes for the same input.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::diagram::{detect_properties, realize};
use crate::gdd::{prove_detailed, ProveError, ProveOutcome, RuleBase, SaturationLimits};
use crate::i18n::{lookup, shipped_catalog, CatalogChain, CatalogEntry};
use crate::io::{import_ggb_subset, parse_gcs};
use crate::model::{Construction, Fact, Goal};
use crate::proof::{export_dot, localized_fact, render_tree};
use crate::wu::{wu_prove, Verdict, WuError};

pub const DEFAULT_PORT: u16 = 7878;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RenderMode {
    Flat,
    #[default]
    Tree,
    Dot,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Gdd,
    Wu,
}

/// The construction, given as GCS text or as GeoGebra XML.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Source {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gcs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ggb: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProveRequest {
    #[serde(flatten)]
    pub source: Source,
    /// Fact text, `auto:<n>` for the n-th detected property (1-based), or
    /// empty for the first goal declared in the construction.
    #[serde(default)]
    pub goal: String,
    #[serde(default = "default_lang")]
    pub lang: String,
    #[serde(default)]
    pub mode: RenderMode,
    #[serde(default = "yes")]
    pub structure: bool,
    #[serde(default)]
    pub backend: Backend,
}

fn default_lang() -> String {
    "en".into()
}

fn yes() -> bool {
    true
}

impl ProveRequest {
    pub fn gcs(text: impl Into<String>, goal: impl Into<String>) -> Self {
        Self {
            source: Source {
                gcs: Some(text.into()),
                ..Source::default()
            },
            goal: goal.into(),
            lang: default_lang(),
            mode: RenderMode::Tree,
            structure: true,
            backend: Backend::Gdd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proved,
    NotProved,
    Error,
}

/// Why a request failed: bad input, or a degenerate figure / exhausted budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    Input,
    Resource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DagNode {
    pub index: usize,
    pub fact: String,
    pub reason: String,
    /// `reason` looked up in the requested language.
    pub phrase: String,
    pub antecedents: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ndg {
    pub polynomial: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProveResponse {
    pub status: Status,
    pub rendering: String,
    pub goal: Option<String>,
    pub dag: Vec<DagNode>,
    pub root: Option<usize>,
    pub ndgs: Vec<Ndg>,
    pub fact_count: Option<usize>,
    pub diagnostics: Vec<String>,
    pub error_class: Option<ErrorClass>,
}

impl ProveResponse {
    fn error(class: ErrorClass, message: String) -> Self {
        Self {
            status: Status::Error,
            rendering: String::new(),
            goal: None,
            dag: Vec::new(),
            root: None,
            ndgs: Vec::new(),
            fact_count: None,
            diagnostics: vec![message],
            error_class: Some(class),
        }
    }

    /// 0 proved, 1 not proved, 2 input error, 3 resource or degeneracy error.
    pub fn exit_code(&self) -> i32 {
        match (self.status, self.error_class) {
            (Status::Proved, _) => 0,
            (Status::NotProved, _) => 1,
            (Status::Error, Some(ErrorClass::Resource)) => 3,
            (Status::Error, _) => 2,
        }
    }
}

/// A failure with its class; `line` is set for GCS diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub class: ErrorClass,
    pub line: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn input(message: impl ToString) -> Self {
        Self {
            class: ErrorClass::Input,
            line: None,
            message: message.to_string(),
        }
    }

    fn resource(message: impl ToString) -> Self {
        Self {
            class: ErrorClass::Resource,
            line: None,
            message: message.to_string(),
        }
    }
}

impl From<ProveError> for Diagnostic {
    fn from(e: ProveError) -> Self {
        match e {
            ProveError::Goal(_) => Diagnostic::input(e),
            _ => Diagnostic::resource(e),
        }
    }
}

impl From<WuError> for Diagnostic {
    fn from(e: WuError) -> Self {
        match e {
            WuError::Unsupported(_) | WuError::Goal(_) => Diagnostic::input(e),
            _ => Diagnostic::resource(e),
        }
    }
}

/// Parses the request's construction.
pub fn load_source(src: &Source) -> Result<Construction, Diagnostic> {
    match (&src.gcs, &src.ggb) {
        (Some(text), None) => parse_gcs(text).map_err(|e| Diagnostic {
            class: ErrorClass::Input,
            line: Some(e.line),
            message: e.to_string(),
        }),
        (None, Some(xml)) => import_ggb_subset(xml).map_err(Diagnostic::input),
        _ => Err(Diagnostic::input("exactly one of `gcs` and `ggb` is required")),
    }
}

/// Detected properties of the construction realized with `seed`.
pub fn detect(c: &Construction, seed: u64) -> Result<Vec<Fact>, Diagnostic> {
    let d = realize(c, seed).map_err(Diagnostic::resource)?;
    Ok(detect_properties(&d, c))
}

fn resolve_goal(c: &Construction, goal: &str, seed: u64) -> Result<Goal, Diagnostic> {
    let goal = goal.trim();
    if goal.is_empty() {
        return c
            .goals()
            .first()
            .cloned()
            .ok_or_else(|| Diagnostic::input("no goal given and none declared in the construction"));
    }
    if let Some(n) = goal.strip_prefix("auto:") {
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Diagnostic::input(format!("`{goal}`: expected auto:<number>")))?;
        let found = detect(c, seed)?;
        return n
            .checked_sub(1)
            .and_then(|i| found.get(i))
            .map(|f| Goal::selected(f.clone()))
            .ok_or_else(|| Diagnostic::input(format!("`{goal}`: {} properties were detected", found.len())));
    }
    let fact: Fact = goal
        .parse()
        .map_err(|e| Diagnostic::input(format!("goal `{goal}`: {e}")))?;
    Ok(Goal::selected(fact))
}

/// Runs one proof request end to end. Never panics on bad input; failures
/// come back as `status: error` with diagnostics.
pub fn prove_request(req: &ProveRequest, rules: &RuleBase, limits: &SaturationLimits) -> ProveResponse {
    match prove_inner(req, rules, limits) {
        Ok(r) => r,
        Err(d) => ProveResponse::error(d.class, d.message),
    }
}

fn prove_inner(req: &ProveRequest, rules: &RuleBase, limits: &SaturationLimits) -> Result<ProveResponse, Diagnostic> {
    let chain = CatalogChain::for_language(&req.lang)
        .ok_or_else(|| Diagnostic::input(format!("no catalog for language `{}`", req.lang)))?;
    let c = load_source(&req.source)?;
    let goal = resolve_goal(&c, &req.goal, req.source.seed)?;
    match req.backend {
        Backend::Gdd => prove_gdd(&c, &goal, req, &chain, rules, limits),
        Backend::Wu => prove_wu(&c, &goal, req, &chain),
    }
}

fn prove_gdd(
    c: &Construction,
    goal: &Goal,
    req: &ProveRequest,
    chain: &CatalogChain,
    rules: &RuleBase,
    limits: &SaturationLimits,
) -> Result<ProveResponse, Diagnostic> {
    let run = prove_detailed(c, goal, rules, req.source.seed, limits)?;
    let goal_text = Some(localized_fact(&goal.fact, chain));
    match run.outcome {
        ProveOutcome::Proved { dag, fact_count } => {
            let rendering = match req.mode {
                RenderMode::Dot => export_dot(&dag, chain),
                RenderMode::Tree => render_tree(&dag, chain, req.structure),
                RenderMode::Flat => render_tree(&dag, chain, false),
            };
            let nodes = dag
                .nodes()
                .iter()
                .map(|n| DagNode {
                    index: n.index,
                    fact: n.fact.to_string(),
                    reason: n.reason.clone(),
                    phrase: lookup(chain, &n.reason).to_string(),
                    antecedents: n.antecedents.clone(),
                })
                .collect();
            Ok(ProveResponse {
                status: Status::Proved,
                rendering,
                goal: goal_text,
                dag: nodes,
                root: Some(dag.root().index),
                ndgs: Vec::new(),
                fact_count: Some(fact_count),
                diagnostics: Vec::new(),
                error_class: None,
            })
        }
        ProveOutcome::NotProved {
            fact_count,
            numerically_true,
        } => {
            let why = if numerically_true {
                "true on diagram but not derived"
            } else {
                "false on diagram"
            };
            Ok(ProveResponse {
                status: Status::NotProved,
                rendering: format!(
                    "{}: {} ({})\n",
                    lookup(chain, "not proved"),
                    localized_fact(&goal.fact, chain),
                    lookup(chain, why)
                ),
                goal: goal_text,
                dag: Vec::new(),
                root: None,
                ndgs: Vec::new(),
                fact_count: Some(fact_count),
                diagnostics: Vec::new(),
                error_class: None,
            })
        }
    }
}

fn prove_wu(c: &Construction, goal: &Goal, req: &ProveRequest, chain: &CatalogChain) -> Result<ProveResponse, Diagnostic> {
    if req.mode == RenderMode::Dot {
        return Err(Diagnostic::input("DOT output needs the gdd backend"));
    }
    let out = wu_prove(c, goal)?;
    Ok(ProveResponse {
        status: match out.verdict {
            Verdict::Proved => Status::Proved,
            Verdict::NotProved => Status::NotProved,
        },
        rendering: out.render(chain),
        goal: Some(localized_fact(&goal.fact, chain)),
        dag: Vec::new(),
        root: None,
        ndgs: out
            .ndgs
            .iter()
            .map(|n| Ndg {
                polynomial: n.polynomial.clone(),
                text: n.localized(chain),
            })
            .collect(),
        fact_count: None,
        diagnostics: Vec::new(),
        error_class: None,
    })
}

// HTTP layer.

/// Shared, read-only state of the service.
#[derive(Debug, Clone)]
pub struct AppState {
    pub rules: Arc<RuleBase>,
    pub limits: SaturationLimits,
}

impl Default for AppState {
    fn default() -> Self {
        Self {
            rules: Arc::new(RuleBase::baseline()),
            limits: SaturationLimits::default(),
        }
    }
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: Diagnostic,
}

fn reject(status: StatusCode, d: Diagnostic) -> Response {
    (status, Json(ErrorBody { error: d })).into_response()
}

#[derive(Debug, Serialize)]
struct StepOut {
    defined: String,
    kind: String,
    args: Vec<String>,
    text: String,
}

#[derive(Debug, Serialize)]
struct PointOut {
    label: String,
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize)]
struct ParseResponse {
    steps: Vec<StepOut>,
    goals: Vec<String>,
    points: Vec<PointOut>,
    seed: u64,
}

async fn api_parse(Json(src): Json<Source>) -> Response {
    let c = match load_source(&src) {
        Ok(c) => c,
        Err(d) => return reject(StatusCode::UNPROCESSABLE_ENTITY, d),
    };
    let d = match realize(&c, src.seed) {
        Ok(d) => d,
        Err(e) => return reject(StatusCode::UNPROCESSABLE_ENTITY, Diagnostic::resource(e)),
    };
    let steps = c
        .steps()
        .iter()
        .map(|s| StepOut {
            defined: s.defined().to_string(),
            kind: format!("{:?}", s.kind()).to_lowercase(),
            args: s.args().iter().map(ToString::to_string).collect(),
            text: s.to_string(),
        })
        .collect();
    Json(ParseResponse {
        steps,
        goals: c.goals().iter().map(|g| g.fact.to_string()).collect(),
        points: d
            .points()
            .iter()
            .map(|(p, [x, y])| PointOut {
                label: p.to_string(),
                x: *x,
                y: *y,
            })
            .collect(),
        seed: src.seed,
    })
    .into_response()
}

#[derive(Debug, Serialize)]
struct Candidate {
    index: usize,
    fact: String,
    goal: String,
}

async fn api_detect(Json(src): Json<Source>) -> Response {
    let found = tokio::task::spawn_blocking(move || load_source(&src).and_then(|c| detect(&c, src.seed))).await;
    match found {
        Ok(Ok(facts)) => Json(
            facts
                .iter()
                .enumerate()
                .map(|(i, f)| Candidate {
                    index: i + 1,
                    fact: f.to_string(),
                    goal: format!("auto:{}", i + 1),
                })
                .collect::<Vec<_>>(),
        )
        .into_response(),
        Ok(Err(d)) => reject(StatusCode::UNPROCESSABLE_ENTITY, d),
        Err(e) => reject(StatusCode::INTERNAL_SERVER_ERROR, Diagnostic::resource(e)),
    }
}

async fn api_prove(State(state): State<AppState>, Json(req): Json<ProveRequest>) -> Response {
    let resp = tokio::task::spawn_blocking(move || prove_request(&req, &state.rules, &state.limits)).await;
    match resp {
        Ok(r) if r.status == Status::Error => (StatusCode::UNPROCESSABLE_ENTITY, Json(r)).into_response(),
        Ok(r) => Json(r).into_response(),
        Err(e) => reject(StatusCode::INTERNAL_SERVER_ERROR, Diagnostic::resource(e)),
    }
}

#[derive(Debug, Serialize)]
struct CatalogOut {
    language: String,
    fallback: &'static str,
    entries: Vec<CatalogEntry>,
}

async fn api_i18n(Path(lang): Path<String>) -> Response {
    match shipped_catalog(&lang) {
        Some(c) => Json(CatalogOut {
            language: c.language.clone(),
            fallback: crate::i18n::BASELINE_LANGUAGE,
            entries: c.entries().to_vec(),
        })
        .into_response(),
        None => reject(
            StatusCode::NOT_FOUND,
            Diagnostic::input(format!("no catalog for language `{lang}`")),
        ),
    }
}

#[derive(Debug, Serialize)]
struct RuleOut {
    id: String,
    phrase_key: String,
    text: String,
}

#[derive(Debug, Serialize)]
struct RulesOut {
    name: String,
    version: String,
    rules: Vec<RuleOut>,
}

async fn api_rules(State(state): State<AppState>) -> Json<RulesOut> {
    Json(RulesOut {
        name: state.rules.name.clone(),
        version: state.rules.version.clone(),
        rules: state
            .rules
            .rules
            .iter()
            .map(|r| RuleOut {
                id: r.id.clone(),
                phrase_key: r.phrase_key.clone(),
                text: r.to_string(),
            })
            .collect(),
    })
}

/// The service's routes; static files from `static_dir` when given.
pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/parse", post(api_parse))
        .route("/api/detect", post(api_detect))
        .route("/api/prove", post(api_prove))
        .route("/api/i18n/{lang}", get(api_i18n))
        .route("/api/rules", get(api_rules))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds loopback on `port` and serves until the process ends.
pub async fn serve(state: AppState, port: u16, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state, static_dir)).await
}
