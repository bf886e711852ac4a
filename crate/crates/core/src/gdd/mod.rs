//! Geometry deduction database: rule bases, saturation and proof search.

mod db;
mod rules;
mod saturate;
mod uf;

use std::path::Path;

use thiserror::Error;

pub use db::{DbError, FactDb, Justification};
pub use rules::{
    load_rules, Pattern, Rule, RuleBase, RuleError, RuleErrorKind, BASELINE_RULES, HYPOTHESIS,
    HYPOTHESIS_PHRASE, TRANSITIVITY_PHRASE,
};
pub use saturate::{saturate, Limit, SaturationError, SaturationLimits};

use crate::diagram::{holds_numerically, realize, Diagram, DiagramError};
use crate::model::{hypothesis_facts, Construction, ConstructionError, Fact, Goal};
use crate::proof::ProofDag;

/// Environment variable naming a rule file that replaces the baseline.
pub const RULES_ENV: &str = "GDDX_RULES";

#[derive(Debug, Error)]
pub enum RuleSourceError {
    #[error("cannot read rule file {path}: {message}")]
    Io { path: String, message: String },
    #[error("rule file {path}: {source}")]
    Parse { path: String, source: RuleError },
}

/// The rule base named by `GDDX_RULES`, or the baseline when unset.
pub fn rules_from_env() -> Result<RuleBase, RuleSourceError> {
    match std::env::var_os(RULES_ENV) {
        Some(path) if !path.is_empty() => load_rule_file(Path::new(&path)),
        _ => Ok(RuleBase::baseline()),
    }
}

pub fn load_rule_file(path: &Path) -> Result<RuleBase, RuleSourceError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| RuleSourceError::Io {
        path: shown.clone(),
        message: e.to_string(),
    })?;
    load_rules(&text).map_err(|source| RuleSourceError::Parse { path: shown, source })
}

#[derive(Debug)]
pub enum ProveOutcome {
    Proved { dag: ProofDag, fact_count: usize },
    /// `numerically_true` separates "false on the diagram" from "true but
    /// out of reach of the rules".
    NotProved { fact_count: usize, numerically_true: bool },
}

impl ProveOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProveOutcome::Proved { .. })
    }

    pub fn fact_count(&self) -> usize {
        match self {
            ProveOutcome::Proved { fact_count, .. } | ProveOutcome::NotProved { fact_count, .. } => *fact_count,
        }
    }
}

/// Everything a proof attempt produced.
#[derive(Debug)]
pub struct ProofRun {
    pub diagram: Diagram,
    pub db: FactDb,
    pub outcome: ProveOutcome,
}

#[derive(Debug, Error)]
pub enum ProveError {
    #[error(transparent)]
    Goal(#[from] ConstructionError),
    #[error("goal `{0}` is degenerate")]
    DegenerateGoal(Fact),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

pub fn prove(
    c: &Construction,
    g: &Goal,
    rb: &RuleBase,
    seed: u64,
    lim: &SaturationLimits,
) -> Result<ProveOutcome, ProveError> {
    prove_detailed(c, g, rb, seed, lim).map(|run| run.outcome)
}

/// [`prove`], keeping the witness diagram and the saturated database.
pub fn prove_detailed(
    c: &Construction,
    g: &Goal,
    rb: &RuleBase,
    seed: u64,
    lim: &SaturationLimits,
) -> Result<ProofRun, ProveError> {
    c.check_fact(&g.fact)?;
    if g.fact.is_degenerate() {
        return Err(ProveError::DegenerateGoal(g.fact.clone()));
    }
    let diagram = realize(c, seed)?;
    let db = saturate(&hypothesis_facts(c), rb, &diagram, lim)?;
    let fact_count = db.len();
    let outcome = match db.proof_of(&g.fact) {
        Ok(justs) => ProveOutcome::Proved {
            dag: ProofDag::extract(&g.fact, &justs),
            fact_count,
        },
        Err(_) => ProveOutcome::NotProved {
            fact_count,
            numerically_true: holds_numerically(&g.fact, &diagram),
        },
    };
    Ok(ProofRun { diagram, db, outcome })
}

/// Free-function form of [`FactDb::explain`].
pub fn explain(db: &FactDb, f: &Fact) -> Result<Vec<Justification>, DbError> {
    db.explain(f)
}
