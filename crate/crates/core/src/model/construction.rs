use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::fact::{Fact, PointName, Predicate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    FreePoint,
    Midpoint,
    Foot,
    IntersectLl,
    PointOnLine,
}

impl StepKind {
    pub const ALL: [StepKind; 5] = [
        StepKind::FreePoint,
        StepKind::Midpoint,
        StepKind::Foot,
        StepKind::IntersectLl,
        StepKind::PointOnLine,
    ];

    pub const fn arity(self) -> usize {
        match self {
            StepKind::FreePoint => 0,
            StepKind::Midpoint | StepKind::PointOnLine => 2,
            StepKind::Foot => 3,
            StepKind::IntersectLl => 4,
        }
    }

    /// Keyword used in `.gcs` scripts.
    pub const fn keyword(self) -> &'static str {
        match self {
            StepKind::FreePoint => "point",
            StepKind::Midpoint => "midpoint",
            StepKind::Foot => "foot",
            StepKind::IntersectLl => "intersect",
            StepKind::PointOnLine => "online",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == word)
    }

    /// Human-readable usage string, e.g. `foot <D> <A> <B> <C>`.
    pub const fn usage(self) -> &'static str {
        match self {
            StepKind::FreePoint => "point <P> [<x> <y>]",
            StepKind::Midpoint => "midpoint <M> <A> <B>",
            StepKind::Foot => "foot <D> <A> <B> <C>",
            StepKind::IntersectLl => "intersect <P> <A> <B> <C> <D>",
            StepKind::PointOnLine => "online <P> <A> <B>",
        }
    }
}

/// Coordinates carried over from an imported figure; they replace random
/// sampling when a diagram is realized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hint {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionStep {
    kind: StepKind,
    defined: PointName,
    args: Vec<PointName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hint: Option<Hint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("`{kind}` takes {expected} argument points, got {found}", kind = .kind.keyword())]
    Arity {
        kind: StepKind,
        expected: usize,
        found: usize,
    },
    #[error("point `{0}` is used before it is defined")]
    Undefined(PointName),
    #[error("point `{0}` is already defined")]
    Duplicate(PointName),
    #[error("{0}")]
    DegenerateArgs(String),
    #[error("coordinate hints are only allowed on free points")]
    HintOnConstructedPoint,
    #[error("coordinate hints must be finite numbers")]
    NonFiniteHint,
    #[error("goal `{goal}` refers to undefined point `{point}`")]
    GoalUndefined { goal: Fact, point: PointName },
}

impl ConstructionStep {
    pub fn new(
        kind: StepKind,
        defined: PointName,
        args: Vec<PointName>,
    ) -> Result<Self, ConstructionError> {
        if args.len() != kind.arity() {
            return Err(ConstructionError::Arity {
                kind,
                expected: kind.arity(),
                found: args.len(),
            });
        }
        let same_pair = |a: &[PointName], b: &[PointName]| {
            (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
        };
        match kind {
            StepKind::FreePoint => {}
            StepKind::Midpoint | StepKind::PointOnLine => {
                if args[0] == args[1] {
                    return Err(ConstructionError::DegenerateArgs(format!(
                        "`{}` needs two distinct points, got {} twice",
                        kind.keyword(),
                        args[0]
                    )));
                }
            }
            StepKind::Foot => {
                if args[1] == args[2] {
                    return Err(ConstructionError::DegenerateArgs(format!(
                        "foot needs a line through two distinct points, got {} twice",
                        args[1]
                    )));
                }
            }
            StepKind::IntersectLl => {
                if args[0] == args[1] || args[2] == args[3] {
                    return Err(ConstructionError::DegenerateArgs(
                        "each intersected line needs two distinct points".into(),
                    ));
                }
                if same_pair(&args[0..2], &args[2..4]) {
                    return Err(ConstructionError::DegenerateArgs(format!(
                        "cannot intersect line {}{} with itself",
                        args[0], args[1]
                    )));
                }
            }
        }
        Ok(Self {
            kind,
            defined,
            args,
            hint: None,
        })
    }

    pub fn free(defined: PointName) -> Self {
        Self {
            kind: StepKind::FreePoint,
            defined,
            args: Vec::new(),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: Hint) -> Result<Self, ConstructionError> {
        if self.kind != StepKind::FreePoint {
            return Err(ConstructionError::HintOnConstructedPoint);
        }
        if !hint.x.is_finite() || !hint.y.is_finite() {
            return Err(ConstructionError::NonFiniteHint);
        }
        self.hint = Some(hint);
        Ok(self)
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    pub fn defined(&self) -> &PointName {
        &self.defined
    }

    pub fn args(&self) -> &[PointName] {
        &self.args
    }

    pub fn hint(&self) -> Option<Hint> {
        self.hint
    }
}

impl fmt::Display for ConstructionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.keyword(), self.defined)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        if let Some(h) = self.hint {
            write!(f, " {} {}", h.x, h.y)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoalSource {
    DeclaredInScript,
    UserSelected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goal {
    pub fact: Fact,
    pub source: GoalSource,
}

impl Goal {
    pub fn declared(fact: Fact) -> Self {
        Self {
            fact,
            source: GoalSource::DeclaredInScript,
        }
    }

    pub fn selected(fact: Fact) -> Self {
        Self {
            fact,
            source: GoalSource::UserSelected,
        }
    }
}

/// An ordered list of construction steps plus declared goals.
///
/// Only grows through [`Construction::push_step`] and
/// [`Construction::push_goal`], which keep it well-formed: arguments are
/// defined by earlier steps, labels are unique, goals mention defined points.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Construction {
    steps: Vec<ConstructionStep>,
    goals: Vec<Goal>,
    #[serde(skip)]
    defined: HashSet<PointName>,
}

impl Construction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_step(&mut self, step: ConstructionStep) -> Result<(), ConstructionError> {
        if let Some(p) = step.args.iter().find(|p| !self.defined.contains(*p)) {
            return Err(ConstructionError::Undefined(p.clone()));
        }
        if self.defined.contains(&step.defined) {
            return Err(ConstructionError::Duplicate(step.defined.clone()));
        }
        self.defined.insert(step.defined.clone());
        self.steps.push(step);
        Ok(())
    }

    pub fn push_goal(&mut self, goal: Goal) -> Result<(), ConstructionError> {
        self.check_fact(&goal.fact)?;
        self.goals.push(goal);
        Ok(())
    }

    /// Errors if `fact` mentions a point this construction does not define.
    pub fn check_fact(&self, fact: &Fact) -> Result<(), ConstructionError> {
        match fact.points().iter().find(|p| !self.defined.contains(*p)) {
            Some(p) => Err(ConstructionError::GoalUndefined {
                goal: fact.clone(),
                point: p.clone(),
            }),
            None => Ok(()),
        }
    }

    pub fn steps(&self) -> &[ConstructionStep] {
        &self.steps
    }

    pub fn goals(&self) -> &[Goal] {
        &self.goals
    }

    pub fn defines(&self, p: &PointName) -> bool {
        self.defined.contains(p)
    }

    /// Defined points in construction order.
    pub fn points(&self) -> impl Iterator<Item = &PointName> {
        self.steps.iter().map(|s| &s.defined)
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty() && self.goals.is_empty()
    }
}

fn fact(predicate: Predicate, points: &[&PointName]) -> Fact {
    let owned: Vec<PointName> = points.iter().map(|p| (*p).clone()).collect();
    Fact::new(predicate, &owned).expect("arity fixed by step kind")
}

/// The constraint facts each construction step introduces, canonicalized,
/// in step order.
pub fn hypothesis_facts(c: &Construction) -> Vec<Fact> {
    let mut out = Vec::new();
    for step in c.steps() {
        let d = &step.defined;
        let a = &step.args;
        match step.kind {
            StepKind::FreePoint => {}
            StepKind::Midpoint => out.push(fact(Predicate::Midp, &[d, &a[0], &a[1]])),
            StepKind::Foot => {
                out.push(fact(Predicate::Perp, &[&a[0], d, &a[1], &a[2]]));
                out.push(fact(Predicate::Coll, &[d, &a[1], &a[2]]));
            }
            StepKind::IntersectLl => {
                out.push(fact(Predicate::Coll, &[d, &a[0], &a[1]]));
                out.push(fact(Predicate::Coll, &[d, &a[2], &a[3]]));
            }
            StepKind::PointOnLine => out.push(fact(Predicate::Coll, &[d, &a[0], &a[1]])),
        }
    }
    out
}
