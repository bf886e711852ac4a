//! Constructions, predicates, facts and goals shared by every backend.

mod construction;
mod fact;

pub use construction::{
    hypothesis_facts, Construction, ConstructionError, ConstructionStep, Goal, GoalSource, Hint,
    StepKind,
};
pub use fact::{canonical_fact, symmetry_group, Fact, InvalidLabel, MalformedFact, Perm, PointName, Predicate};

pub(crate) use fact::{canonicalize, degenerate_points};
