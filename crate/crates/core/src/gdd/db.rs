//! The fact database and its equivalence structures.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use super::rules::{RuleBase, HYPOTHESIS, HYPOTHESIS_PHRASE, TRANSITIVITY_PHRASE};
use super::uf::ExplainUf;
use crate::model::{canonicalize, degenerate_points, Fact, PointName, Predicate};

pub(crate) type PointId = u16;
type Seg = (PointId, PointId);
type Angle = (Seg, Seg);

fn seg(a: PointId, b: PointId) -> Seg {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A fact over interned point ids; unused slots are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Atom {
    pub pred: Predicate,
    pub args: [PointId; 8],
}

impl Atom {
    pub fn canonical(pred: Predicate, raw: &[PointId]) -> Self {
        let mut args = [0; 8];
        args[..raw.len()].copy_from_slice(raw);
        canonicalize(pred, &mut args[..raw.len()]);
        Self { pred, args }
    }

    pub fn args(&self) -> &[PointId] {
        &self.args[..self.pred.arity()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Reason {
    Hypothesis,
    Rule(u32),
    Closure(Predicate),
}

#[derive(Debug, Clone)]
enum Origin {
    Asserted { reason: Reason, antecedents: Vec<u32> },
    /// Follows from class membership; explained on demand.
    Implied,
}

/// One deduction step: a rule (or "hypothesis") applied to antecedent facts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Justification {
    pub rule_id: String,
    pub phrase_key: String,
    pub antecedents: Vec<Fact>,
    pub produced: Fact,
}

impl Justification {
    pub fn is_hypothesis(&self) -> bool {
        self.rule_id == HYPOTHESIS
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DbError {
    #[error("point `{0}` is not part of the database")]
    UnknownPoint(PointName),
    #[error("fact `{0}` is degenerate")]
    Degenerate(Fact),
    #[error("no rule with id `{0}`")]
    UnknownRule(String),
    #[error("antecedent `{0}` is not in the database")]
    MissingAntecedent(Fact),
    #[error("fact `{0}` was not derived")]
    NotDerived(Fact),
}

/// Saturated (or partially saturated) store of facts.
///
/// Facts are numbered by insertion. `para`, `cong` and `eqangle` facts are
/// kept as classes of segments and angles: asserting one merges two
/// classes and makes every cross pair a fact as well.
pub struct FactDb {
    names: Vec<PointName>,
    ids: HashMap<PointName, PointId>,
    atoms: Vec<Atom>,
    origins: Vec<Origin>,
    lookup: HashMap<Atom, u32>,
    by_pred: [Vec<u32>; 7],
    by_point: Vec<Vec<u32>>,
    dirs: ExplainUf<Seg>,
    congs: ExplainUf<Seg>,
    angles: ExplainUf<Angle>,
    rules: Vec<(String, String)>,
    closure: [Option<u32>; 7],
    pub(crate) rounds: usize,
}

impl std::fmt::Debug for FactDb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactDb")
            .field("points", &self.names.len())
            .field("facts", &self.atoms.len())
            .field("rounds", &self.rounds)
            .finish()
    }
}

impl FactDb {
    pub fn new<'a>(points: impl IntoIterator<Item = &'a PointName>, rb: &RuleBase) -> Self {
        let mut names: Vec<PointName> = points.into_iter().cloned().collect();
        names.sort();
        names.dedup();
        assert!(names.len() < PointId::MAX as usize, "too many points");
        let ids = names
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as PointId))
            .collect();
        let mut closure = [None; 7];
        for (i, r) in rb.rules.iter().enumerate() {
            if let Some(p) = r.closure_predicate() {
                closure[p.index()].get_or_insert(i as u32);
            }
        }
        let n = names.len();
        Self {
            names,
            ids,
            atoms: Vec::new(),
            origins: Vec::new(),
            lookup: HashMap::new(),
            by_pred: Default::default(),
            by_point: vec![Vec::new(); 7 * n],
            dirs: ExplainUf::new(),
            congs: ExplainUf::new(),
            angles: ExplainUf::new(),
            rules: rb
                .rules
                .iter()
                .map(|r| (r.id.clone(), r.phrase_key.clone()))
                .collect(),
            closure,
            rounds: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Saturation rounds run so far.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn points(&self) -> &[PointName] {
        &self.names
    }

    pub fn fact(&self, index: usize) -> Fact {
        self.to_fact(&self.atoms[index])
    }

    /// All facts in insertion order.
    pub fn facts(&self) -> impl Iterator<Item = Fact> + '_ {
        self.atoms.iter().map(|a| self.to_fact(a))
    }

    pub fn index_of(&self, f: &Fact) -> Option<usize> {
        let atom = self.atom(f).ok()?;
        self.lookup.get(&atom).map(|&i| i as usize)
    }

    pub fn contains(&self, f: &Fact) -> bool {
        self.index_of(f).is_some()
    }

    pub fn count(&self, predicate: Predicate) -> usize {
        self.by_pred[predicate.index()].len()
    }

    pub fn add_hypothesis(&mut self, f: &Fact) -> Result<bool, DbError> {
        let atom = self.atom(f)?;
        Ok(self.insert(atom, Reason::Hypothesis, Vec::new()).is_some())
    }

    /// Records `f` as produced by rule `rule_id` from facts already present.
    pub fn add_derived(&mut self, f: &Fact, rule_id: &str, antecedents: &[Fact]) -> Result<bool, DbError> {
        let atom = self.atom(f)?;
        let rule = self
            .rules
            .iter()
            .position(|(id, _)| id == rule_id)
            .ok_or_else(|| DbError::UnknownRule(rule_id.to_string()))?;
        let ants = antecedents
            .iter()
            .map(|a| {
                self.index_of(a)
                    .map(|i| i as u32)
                    .ok_or_else(|| DbError::MissingAntecedent(a.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.insert(atom, Reason::Rule(rule as u32), ants).is_some())
    }

    fn atom(&self, f: &Fact) -> Result<Atom, DbError> {
        if f.is_degenerate() {
            return Err(DbError::Degenerate(f.clone()));
        }
        let ids = f
            .points()
            .iter()
            .map(|p| self.ids.get(p).copied().ok_or_else(|| DbError::UnknownPoint(p.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Atom::canonical(f.predicate(), &ids))
    }

    fn to_fact(&self, a: &Atom) -> Fact {
        let pts: Vec<PointName> = a.args().iter().map(|&i| self.names[i as usize].clone()).collect();
        Fact::new(a.pred, &pts).expect("atom arity matches predicate")
    }

    pub(crate) fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub(crate) fn has(&self, a: &Atom) -> bool {
        self.lookup.contains_key(a)
    }

    pub(crate) fn with_pred(&self, p: Predicate) -> &[u32] {
        &self.by_pred[p.index()]
    }

    pub(crate) fn with_point(&self, p: Predicate, point: PointId) -> &[u32] {
        &self.by_point[p.index() * self.names.len() + point as usize]
    }

    pub(crate) fn point_id(&self, p: &PointName) -> Option<PointId> {
        self.ids.get(p).copied()
    }

    fn push(&mut self, atom: Atom, origin: Origin) -> u32 {
        let id = self.atoms.len() as u32;
        self.atoms.push(atom);
        self.origins.push(origin);
        self.lookup.insert(atom, id);
        self.by_pred[atom.pred.index()].push(id);
        let n = self.names.len();
        let mut seen: Vec<PointId> = Vec::with_capacity(8);
        for &p in atom.args() {
            if !seen.contains(&p) {
                seen.push(p);
                self.by_point[atom.pred.index() * n + p as usize].push(id);
            }
        }
        id
    }

    /// Asserts `atom`; returns its index, or `None` if it was already known.
    pub(crate) fn insert(&mut self, atom: Atom, reason: Reason, antecedents: Vec<u32>) -> Option<u32> {
        if self.lookup.contains_key(&atom) || degenerate_points(atom.pred, atom.args()) {
            return None;
        }
        debug_assert!(antecedents.iter().all(|&a| (a as usize) < self.atoms.len()));
        let id = self.push(atom, Origin::Asserted { reason, antecedents });
        self.absorb(id);
        Some(id)
    }

    fn absorb(&mut self, id: u32) {
        let atom = self.atoms[id as usize];
        let a = atom.args;
        match atom.pred {
            Predicate::Para | Predicate::Cong => {
                let uf = if atom.pred == Predicate::Para {
                    &mut self.dirs
                } else {
                    &mut self.congs
                };
                let (x, y) = (uf.node(seg(a[0], a[1])), uf.node(seg(a[2], a[3])));
                if let Some((cx, cy)) = uf.union(x, y, id) {
                    let implied: Vec<Atom> = cx
                        .iter()
                        .flat_map(|&s| cy.iter().map(move |&t| (s, t)))
                        .map(|(s, t)| {
                            let (s, t) = (uf.key(s), uf.key(t));
                            Atom::canonical(atom.pred, &[s.0, s.1, t.0, t.1])
                        })
                        .collect();
                    self.materialize(implied);
                }
            }
            Predicate::Eqangle => {
                let (s0, s1, s2, s3) = (seg(a[0], a[1]), seg(a[2], a[3]), seg(a[4], a[5]), seg(a[6], a[7]));
                for (alpha, beta) in [((s0, s1), (s2, s3)), ((s1, s0), (s3, s2))] {
                    let (x, y) = (self.angles.node(alpha), self.angles.node(beta));
                    if let Some((cx, cy)) = self.angles.union(x, y, id) {
                        let uf = &self.angles;
                        let implied: Vec<Atom> = cx
                            .iter()
                            .flat_map(|&s| cy.iter().map(move |&t| (s, t)))
                            .map(|(s, t)| {
                                let (p, q) = (uf.key(s), uf.key(t));
                                Atom::canonical(
                                    Predicate::Eqangle,
                                    &[p.0 .0, p.0 .1, p.1 .0, p.1 .1, q.0 .0, q.0 .1, q.1 .0, q.1 .1],
                                )
                            })
                            .collect();
                        self.materialize(implied);
                    }
                }
            }
            _ => {}
        }
    }

    fn materialize(&mut self, implied: Vec<Atom>) {
        for atom in implied {
            if !self.lookup.contains_key(&atom) && !degenerate_points(atom.pred, atom.args()) {
                self.push(atom, Origin::Implied);
            }
        }
    }

    /// The class-merge edges explaining an implied fact.
    fn class_path(&self, id: u32) -> Vec<u32> {
        let a = self.atoms[id as usize].args;
        let path = match self.atoms[id as usize].pred {
            Predicate::Para | Predicate::Cong => {
                let uf = if self.atoms[id as usize].pred == Predicate::Para {
                    &self.dirs
                } else {
                    &self.congs
                };
                let node = |s: Seg| uf.get(&s).expect("implied fact has class nodes");
                uf.path(node(seg(a[0], a[1])), node(seg(a[2], a[3])))
                    .expect("implied fact lies in one class")
            }
            Predicate::Eqangle => {
                let (s0, s1, s2, s3) = (seg(a[0], a[1]), seg(a[2], a[3]), seg(a[4], a[5]), seg(a[6], a[7]));
                let uf = &self.angles;
                [((s0, s1), (s2, s3)), ((s1, s0), (s3, s2))]
                    .into_iter()
                    .filter_map(|(x, y)| uf.path(uf.get(&x)?, uf.get(&y)?))
                    .min_by_key(Vec::len)
                    .expect("implied fact lies in one class")
            }
            p => unreachable!("{p} facts are never implied"),
        };
        let mut seen = HashSet::new();
        path.into_iter().filter(|e| seen.insert(*e)).collect()
    }

    /// The step that produced fact `id`.
    pub(crate) fn derivation(&self, id: u32) -> (Reason, Vec<u32>) {
        match &self.origins[id as usize] {
            Origin::Asserted { reason, antecedents } => (*reason, antecedents.clone()),
            Origin::Implied => (
                Reason::Closure(self.atoms[id as usize].pred),
                self.class_path(id),
            ),
        }
    }

    pub(crate) fn justification(&self, id: u32) -> Justification {
        let (reason, ants) = self.derivation(id);
        let (rule_id, phrase_key) = match reason {
            Reason::Hypothesis => (HYPOTHESIS.to_string(), HYPOTHESIS_PHRASE.to_string()),
            Reason::Rule(r) => self.rules[r as usize].clone(),
            Reason::Closure(p) => match self.closure[p.index()] {
                Some(r) => self.rules[r as usize].clone(),
                None => ("transitivity".to_string(), TRANSITIVITY_PHRASE.to_string()),
            },
        };
        Justification {
            rule_id,
            phrase_key,
            antecedents: ants.iter().map(|&a| self.fact(a as usize)).collect(),
            produced: self.fact(id as usize),
        }
    }

    /// The justifications establishing `f`: a single step for asserted
    /// facts; for facts that follow from class merges, the merges on the
    /// explanation path followed by the transitivity step.
    pub fn explain(&self, f: &Fact) -> Result<Vec<Justification>, DbError> {
        let id = self.index_of(f).ok_or_else(|| DbError::NotDerived(f.clone()))? as u32;
        let (reason, ants) = self.derivation(id);
        let mut out = Vec::new();
        if let Reason::Closure(_) = reason {
            out.extend(ants.iter().map(|&a| self.justification(a)));
        }
        out.push(self.justification(id));
        Ok(out)
    }

    /// Every justification needed to establish `f` from hypotheses, one per
    /// fact, with antecedents preceding the facts they support.
    pub fn proof_of(&self, f: &Fact) -> Result<Vec<Justification>, DbError> {
        let goal = self.index_of(f).ok_or_else(|| DbError::NotDerived(f.clone()))? as u32;
        let mut needed = HashSet::new();
        let mut stack = vec![goal];
        while let Some(id) = stack.pop() {
            if needed.insert(id) {
                stack.extend(self.derivation(id).1);
            }
        }
        let mut ids: Vec<u32> = needed.into_iter().collect();
        ids.sort_unstable();
        Ok(ids.into_iter().map(|id| self.justification(id)).collect())
    }

    /// Maximal sets of collinear points (at least three).
    pub fn lines(&self) -> Vec<Vec<PointName>> {
        self.point_sets(Predicate::Coll, 2)
    }

    /// Maximal sets of concyclic points (at least four).
    pub fn circles(&self) -> Vec<Vec<PointName>> {
        self.point_sets(Predicate::Cyclic, 3)
    }

    fn point_sets(&self, pred: Predicate, shared: usize) -> Vec<Vec<PointName>> {
        let mut sets: Vec<Vec<PointId>> = Vec::new();
        for &id in self.with_pred(pred) {
            let pts = self.atoms[id as usize].args().to_vec();
            let overlapping: Vec<usize> = (0..sets.len())
                .filter(|&i| pts.iter().filter(|p| sets[i].contains(p)).count() >= shared)
                .collect();
            let mut merged = pts;
            for &i in overlapping.iter().rev() {
                merged.extend(sets.swap_remove(i));
            }
            merged.sort_unstable();
            merged.dedup();
            sets.push(merged);
        }
        let mut out: Vec<Vec<PointName>> = sets
            .into_iter()
            .map(|s| s.into_iter().map(|p| self.names[p as usize].clone()).collect())
            .collect();
        out.sort();
        out
    }

    /// Segment classes of `para` (directions) or `cong` with at least two members.
    pub fn segment_classes(&self, pred: Predicate) -> Vec<Vec<[PointName; 2]>> {
        let uf = match pred {
            Predicate::Para => &self.dirs,
            Predicate::Cong => &self.congs,
            _ => return Vec::new(),
        };
        let mut out: Vec<Vec<[PointName; 2]>> = uf
            .classes()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let mut v: Vec<[PointName; 2]> = c
                    .iter()
                    .map(|&i| {
                        let s = uf.key(i);
                        [self.names[s.0 as usize].clone(), self.names[s.1 as usize].clone()]
                    })
                    .collect();
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }
}
