//! Semi-naive forward chaining with diagram filtering.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use super::db::{Atom, FactDb, PointId, Reason};
use super::rules::{Pattern, Rule, RuleBase};
use crate::diagram::{nondegenerate_xy, residual_xy, Diagram, Xy};
use crate::model::{degenerate_points, symmetry_group, Fact, PointName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SaturationLimits {
    pub max_facts: usize,
    pub max_rounds: usize,
    pub wall_clock: Duration,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        Self {
            max_facts: 100_000,
            max_rounds: 64,
            wall_clock: Duration::from_secs(10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Facts,
    Rounds,
    WallClock,
}

impl std::fmt::Display for Limit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Limit::Facts => "fact count",
            Limit::Rounds => "round count",
            Limit::WallClock => "wall-clock budget",
        })
    }
}

#[derive(Debug, Error)]
pub enum SaturationError {
    #[error("saturation stopped: {limit} limit exceeded after {} facts", partial.len())]
    LimitExceeded { limit: Limit, partial: Box<FactDb> },
    #[error("hypothesis `{0}` mentions a point missing from the diagram")]
    UnknownPoint(Fact),
    #[error("hypothesis `{0}` is degenerate")]
    DegenerateHypothesis(Fact),
}

pub(crate) const MAX_RULE_VARIABLES: usize = 32;
const UNBOUND: PointId = PointId::MAX;

type Binding = [PointId; MAX_RULE_VARIABLES];

struct Candidate {
    atom: Atom,
    rule: u32,
    antecedents: Vec<u32>,
}

struct Matcher<'a> {
    db: &'a FactDb,
    coords: &'a [Xy],
    scale: f64,
    tol: f64,
    rejected: &'a mut HashSet<Atom>,
    seen: HashSet<Atom>,
    out: Vec<Candidate>,
    deadline: Instant,
    timed_out: bool,
    ticks: u32,
}

fn unify(pat: &Pattern, atom: &Atom, perm: &[u8], b: &mut Binding) -> bool {
    for (slot, &v) in pat.vars.iter().enumerate() {
        let val = atom.args[perm[slot] as usize];
        if b[v] == UNBOUND {
            b[v] = val;
        } else if b[v] != val {
            return false;
        }
    }
    true
}

impl Matcher<'_> {
    fn admissible(&self, atom: &Atom) -> bool {
        let pts: Vec<Xy> = atom.args().iter().map(|&p| self.coords[p as usize]).collect();
        residual_xy(atom.pred, &pts, self.scale).is_some_and(|r| r < self.tol)
            && nondegenerate_xy(atom.pred, &pts, self.scale, self.tol)
    }

    fn tick(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(1024) && Instant::now() > self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    /// Runs `rule` over every instantiation that uses at least one fact
    /// from `delta`. Antecedents before the delta position only see older
    /// facts, so each instantiation is enumerated once.
    fn run(&mut self, rule_index: u32, rule: &Rule, delta: (u32, u32)) {
        let n = rule.antecedents.len();
        for i in 0..n {
            let pat = &rule.antecedents[i];
            let facts = self.db.with_pred(pat.predicate);
            let from = facts.partition_point(|&f| f < delta.0);
            let to = facts.partition_point(|&f| f < delta.1);
            for &fid in &facts[from..to] {
                if self.tick() {
                    return;
                }
                let atom = self.db.atoms()[fid as usize];
                let mut used = vec![0u32; n];
                used[i] = fid;
                for perm in symmetry_group(pat.predicate) {
                    let mut b = [UNBOUND; MAX_RULE_VARIABLES];
                    if unify(pat, &atom, perm, &mut b) {
                        self.join(rule_index, rule, i, 0, delta, &mut b, &mut used);
                    }
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn join(
        &mut self,
        rule_index: u32,
        rule: &Rule,
        driver: usize,
        k: usize,
        delta: (u32, u32),
        b: &mut Binding,
        used: &mut Vec<u32>,
    ) {
        if k == rule.antecedents.len() {
            self.emit(rule_index, rule, b, used);
            return;
        }
        if k == driver {
            return self.join(rule_index, rule, driver, k + 1, delta, b, used);
        }
        let pat = &rule.antecedents[k];
        let limit = if k < driver { delta.0 } else { delta.1 };
        let bound = pat.vars.iter().map(|&v| b[v]).find(|&p| p != UNBOUND);
        let facts = match bound {
            Some(p) => self.db.with_point(pat.predicate, p),
            None => self.db.with_pred(pat.predicate),
        };
        let end = facts.partition_point(|&f| f < limit);
        for &fid in &facts[..end] {
            let atom = self.db.atoms()[fid as usize];
            used[k] = fid;
            for perm in symmetry_group(pat.predicate) {
                let mut nb = *b;
                if unify(pat, &atom, perm, &mut nb) {
                    self.join(rule_index, rule, driver, k + 1, delta, &mut nb, used);
                }
            }
        }
    }

    fn emit(&mut self, rule_index: u32, rule: &Rule, b: &Binding, used: &[u32]) {
        if rule.distinct.iter().any(|&(v, w)| b[v] == b[w]) {
            return;
        }
        let raw: Vec<PointId> = rule.consequent.vars.iter().map(|&v| b[v]).collect();
        if degenerate_points(rule.consequent.predicate, &raw) {
            return;
        }
        let atom = Atom::canonical(rule.consequent.predicate, &raw);
        if self.db.has(&atom) || self.seen.contains(&atom) || self.rejected.contains(&atom) {
            return;
        }
        if !self.admissible(&atom) {
            self.rejected.insert(atom);
            return;
        }
        self.seen.insert(atom);
        self.out.push(Candidate {
            atom,
            rule: rule_index,
            antecedents: used.to_vec(),
        });
    }
}

/// Saturates `hyps` under `rb`, admitting a derived fact only if it holds
/// (non-degenerately) on `d`.
pub fn saturate(
    hyps: &[Fact],
    rb: &RuleBase,
    d: &Diagram,
    lim: &SaturationLimits,
) -> Result<FactDb, SaturationError> {
    let start = Instant::now();
    let deadline = start + lim.wall_clock;
    let names: Vec<PointName> = d.points().iter().map(|(p, _)| p.clone()).collect();
    let mut db = FactDb::new(&names, rb);
    let coords: Vec<Xy> = db
        .points()
        .iter()
        .map(|p| d.coord(p).expect("db points come from the diagram"))
        .collect();

    for h in hyps {
        if h.is_degenerate() {
            return Err(SaturationError::DegenerateHypothesis(h.clone()));
        }
        if h.points().iter().any(|p| db.point_id(p).is_none()) {
            return Err(SaturationError::UnknownPoint(h.clone()));
        }
        db.add_hypothesis(h).expect("checked above");
    }

    let active: Vec<(u32, &Rule)> = rb
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| r.closure_predicate().is_none())
        .map(|(i, r)| (i as u32, r))
        .collect();
    let mut rejected = HashSet::new();
    let mut delta_start = 0u32;
    let exceeded = |limit, db| Err(SaturationError::LimitExceeded {
        limit,
        partial: Box::new(db),
    });
    loop {
        let end = db.len() as u32;
        if delta_start == end {
            break;
        }
        if db.rounds >= lim.max_rounds {
            return exceeded(Limit::Rounds, db);
        }
        db.rounds += 1;
        let candidates = {
            let mut m = Matcher {
                db: &db,
                coords: &coords,
                scale: d.diameter(),
                tol: d.fact_tolerance,
                rejected: &mut rejected,
                seen: HashSet::new(),
                out: Vec::new(),
                deadline,
                timed_out: false,
                ticks: 0,
            };
            for &(i, rule) in &active {
                m.run(i, rule, (delta_start, end));
                if m.timed_out {
                    break;
                }
            }
            if m.timed_out {
                None
            } else {
                Some(m.out)
            }
        };
        let Some(candidates) = candidates else {
            return exceeded(Limit::WallClock, db);
        };
        delta_start = end;
        for c in candidates {
            db.insert(c.atom, Reason::Rule(c.rule), c.antecedents);
            if db.len() > lim.max_facts {
                return exceeded(Limit::Facts, db);
            }
        }
        if Instant::now() > deadline {
            return exceeded(Limit::WallClock, db);
        }
    }
    Ok(db)
}
