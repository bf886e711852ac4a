//! Wu's method: polynomial translation, Ritt–Wu triangulation and
//! successive pseudo-division, with non-degeneracy conditions.

mod poly;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

pub use poly::{Monomial, PolyDisplay, PolyError, Polynomial, PseudoDivision, Var};

use crate::i18n::{fill, lookup, CatalogChain};
use crate::model::{Construction, ConstructionError, Fact, Goal, PointName, Predicate, StepKind};

pub const DEFAULT_TERM_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WuError {
    #[error("the algebraic backend does not handle {0} goals")]
    Unsupported(Predicate),
    #[error(transparent)]
    Goal(#[from] ConstructionError),
    #[error("hypotheses are inconsistent: reduced to the nonzero constant {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Coordinates of each point as polynomials in the construction's variables.
#[derive(Debug, Clone, Default)]
pub struct Coords {
    map: HashMap<PointName, [Polynomial; 2]>,
}

impl Coords {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, p: PointName, x: Polynomial, y: Polynomial) {
        self.map.insert(p, [x, y]);
    }

    pub fn get(&self, p: &PointName) -> Option<&[Polynomial; 2]> {
        self.map.get(p)
    }
}

fn diff(a: &[Polynomial; 2], b: &[Polynomial; 2]) -> [Polynomial; 2] {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn cross(u: &[Polynomial; 2], v: &[Polynomial; 2]) -> Polynomial {
    &(&u[0] * &v[1]) - &(&u[1] * &v[0])
}

fn dot(u: &[Polynomial; 2], v: &[Polynomial; 2]) -> Polynomial {
    &(&u[0] * &v[0]) + &(&u[1] * &v[1])
}

fn det(m: &[Vec<Polynomial>]) -> Polynomial {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut out = Polynomial::zero();
    for (j, top) in m[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = top * &det(&minor);
        out = if j % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

fn coll_poly(a: &[Polynomial; 2], b: &[Polynomial; 2], c: &[Polynomial; 2]) -> Polynomial {
    cross(&diff(b, a), &diff(c, a))
}

/// The polynomial(s) whose vanishing states `f` (two for `midp`).
pub fn fact_polynomials(f: &Fact, coords: &Coords) -> Result<Vec<Polynomial>, WuError> {
    let pts: Vec<&[Polynomial; 2]> = f
        .points()
        .iter()
        .map(|p| coords.get(p).ok_or_else(|| WuError::Goal(ConstructionError::Undefined(p.clone()))))
        .collect::<Result<_, _>>()?;
    Ok(match f.predicate() {
        Predicate::Coll => vec![coll_poly(pts[0], pts[1], pts[2])],
        Predicate::Para => vec![cross(&diff(pts[1], pts[0]), &diff(pts[3], pts[2]))],
        Predicate::Perp => vec![dot(&diff(pts[1], pts[0]), &diff(pts[3], pts[2]))],
        Predicate::Cong => {
            let (u, v) = (diff(pts[1], pts[0]), diff(pts[3], pts[2]));
            vec![&dot(&u, &u) - &dot(&v, &v)]
        }
        Predicate::Midp => (0..2)
            .map(|k| &(&Polynomial::int(2) * &pts[0][k]) - &(&pts[1][k] + &pts[2][k]))
            .collect(),
        Predicate::Cyclic => {
            let rows: Vec<Vec<Polynomial>> = pts
                .iter()
                .map(|p| vec![p[0].clone(), p[1].clone(), dot(p, p), Polynomial::int(1)])
                .collect();
            vec![det(&rows)]
        }
        Predicate::Eqangle => return Err(WuError::Unsupported(Predicate::Eqangle)),
    })
}

/// Polynomial form of a construction and goal.
#[derive(Debug, Clone)]
pub struct Translation {
    /// Variable names by index; parameters come first.
    pub variables: Vec<String>,
    /// Number of leading variables that are free parameters.
    pub parameters: usize,
    pub hypotheses: Vec<Polynomial>,
    pub conclusions: Vec<Polynomial>,
    pub coords: Coords,
}

/// Assigns coordinates (first free point at the origin, second on the
/// x-axis) and emits one or two hypothesis polynomials per step.
pub fn translate(c: &Construction, g: &Goal) -> Result<Translation, WuError> {
    c.check_fact(&g.fact)?;
    if g.fact.predicate() == Predicate::Eqangle {
        return Err(WuError::Unsupported(Predicate::Eqangle));
    }
    // First pass: name variables, parameters before dependents.
    let mut params: Vec<String> = Vec::new();
    let mut dependents: Vec<String> = Vec::new();
    let mut free_seen = 0;
    for step in c.steps() {
        let p = step.defined();
        match step.kind() {
            StepKind::FreePoint => {
                match free_seen {
                    0 => {}
                    1 => params.push(format!("x_{p}")),
                    _ => params.extend([format!("x_{p}"), format!("y_{p}")]),
                }
                free_seen += 1;
            }
            StepKind::PointOnLine => {
                params.push(format!("x_{p}"));
                dependents.push(format!("y_{p}"));
            }
            _ => dependents.extend([format!("x_{p}"), format!("y_{p}")]),
        }
    }
    let parameters = params.len();
    let variables: Vec<String> = params.into_iter().chain(dependents).collect();
    let index: HashMap<&str, Var> = variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let var = |name: String| Polynomial::var(index[name.as_str()]);

    let mut coords = Coords::new();
    let mut hypotheses = Vec::new();
    let mut free_seen = 0;
    for step in c.steps() {
        let p = step.defined().clone();
        let at = |i: usize, coords: &Coords| coords.get(&step.args()[i]).cloned().expect("defined earlier");
        match step.kind() {
            StepKind::FreePoint => {
                let xy = match free_seen {
                    0 => [Polynomial::zero(), Polynomial::zero()],
                    1 => [var(format!("x_{p}")), Polynomial::zero()],
                    _ => [var(format!("x_{p}")), var(format!("y_{p}"))],
                };
                free_seen += 1;
                coords.set(p, xy[0].clone(), xy[1].clone());
            }
            kind => {
                let me = [var(format!("x_{p}")), var(format!("y_{p}"))];
                let args: Vec<[Polynomial; 2]> = (0..step.args().len()).map(|i| at(i, &coords)).collect();
                match kind {
                    StepKind::Midpoint => {
                        for k in 0..2 {
                            hypotheses.push(&(&Polynomial::int(2) * &me[k]) - &(&args[0][k] + &args[1][k]));
                        }
                    }
                    StepKind::Foot => {
                        hypotheses.push(dot(&diff(&me, &args[0]), &diff(&args[2], &args[1])));
                        hypotheses.push(coll_poly(&me, &args[1], &args[2]));
                    }
                    StepKind::IntersectLl => {
                        hypotheses.push(coll_poly(&me, &args[0], &args[1]));
                        hypotheses.push(coll_poly(&me, &args[2], &args[3]));
                    }
                    StepKind::PointOnLine => hypotheses.push(coll_poly(&me, &args[0], &args[1])),
                    StepKind::FreePoint => unreachable!(),
                }
                coords.set(p, me[0].clone(), me[1].clone());
            }
        }
    }
    let conclusions = fact_polynomials(&g.fact, &coords)?;
    hypotheses.retain(|h| !h.is_zero());
    Ok(Translation {
        variables,
        parameters,
        hypotheses,
        conclusions,
        coords,
    })
}

/// Polynomials with strictly increasing main variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularSet {
    pub polys: Vec<Polynomial>,
}

impl TriangularSet {
    pub fn main_vars(&self) -> Vec<Var> {
        self.polys.iter().map(|p| p.main_var().expect("non-constant")).collect()
    }

    pub fn initials(&self) -> Vec<Polynomial> {
        self.polys
            .iter()
            .map(|p| p.initial(p.main_var().expect("non-constant")))
            .collect()
    }
}

/// Ritt–Wu elimination from the highest variable down: among the
/// polynomials in the current variable, the one of least degree
/// pseudo-reduces the others until a single one is left.
pub fn triangularize(hyps: &[Polynomial], cap: usize) -> Result<TriangularSet, WuError> {
    let mut pending: Vec<Polynomial> = hyps.iter().filter(|h| !h.is_zero()).cloned().collect();
    let check = |p: &Polynomial| -> Result<(), WuError> {
        if p.is_constant() {
            let names: Vec<String> = Vec::new();
            Err(WuError::Inconsistent(p.display(&names).to_string()))
        } else {
            Ok(())
        }
    };
    for p in &pending {
        check(p)?;
    }
    let top = pending.iter().filter_map(Polynomial::main_var).max().unwrap_or(0);
    let mut out = Vec::new();
    for x in (0..=top).rev() {
        let (mut level, rest): (Vec<Polynomial>, Vec<Polynomial>) =
            pending.into_iter().partition(|p| p.degree(x) > 0);
        pending = rest;
        let measure = |level: &[Polynomial]| -> (usize, u64) {
            (level.len(), level.iter().map(|p| p.degree(x) as u64).sum())
        };
        while level.len() > 1 {
            let before = measure(&level);
            let pick = (0..level.len())
                .min_by_key(|&i| (level[i].degree(x), level[i].len(), i))
                .expect("nonempty");
            let g = level.remove(pick);
            let mut next = vec![g.clone()];
            for f in level {
                let r = f.prem(&g, x, cap)?.remainder;
                if r.is_zero() {
                    continue;
                }
                check(&r)?;
                if r.degree(x) > 0 {
                    next.push(r);
                } else {
                    pending.push(r);
                }
            }
            level = next;
            let after = measure(&level);
            assert!(
                after.0 < before.0 || (after.0 == before.0 && after.1 < before.1),
                "triangulation measure must decrease"
            );
        }
        out.extend(level);
    }
    out.reverse();
    Ok(TriangularSet { polys: out })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proved,
    NotProved,
}

/// A geometric reading of a non-degeneracy condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NdgReading {
    /// Catalog key with `{0}`-style slots.
    pub key: String,
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NdgCondition {
    pub polynomial: String,
    pub reading: Option<NdgReading>,
    pub origin: NdgOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NdgOrigin {
    /// Initial of a triangular-set polynomial.
    Initial,
    /// Condition for a construction step to be well defined.
    Step,
}

impl NdgCondition {
    pub fn localized(&self, chain: &CatalogChain) -> String {
        match &self.reading {
            Some(r) => {
                let args: Vec<&str> = r.points.iter().map(String::as_str).collect();
                format!("{} ≠ 0 ({})", self.polynomial, fill(lookup(chain, &r.key), &args))
            }
            None => format!("{} ≠ 0", self.polynomial),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub variable: String,
    pub remainder: String,
}

#[derive(Debug, Clone)]
pub struct WuOutcome {
    pub verdict: Verdict,
    pub ndgs: Vec<NdgCondition>,
    /// Remainder of the first conclusion that does not vanish, else zero.
    pub final_remainder: Polynomial,
    pub remainders: Vec<Polynomial>,
    pub steps: Vec<ReductionStep>,
    pub triangular: TriangularSet,
    pub translation: Translation,
}

impl WuOutcome {
    pub fn display(&self, p: &Polynomial) -> String {
        p.display(&self.translation.variables).to_string()
    }

    /// Text report in the style of the other renderings.
    pub fn render(&self, chain: &CatalogChain) -> String {
        let verdict = match self.verdict {
            Verdict::Proved => "proved",
            Verdict::NotProved => "not proved",
        };
        let mut out = format!("{}\n", lookup(chain, verdict));
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{}. prem {}: {}\n", i + 1, s.variable, s.remainder));
        }
        out.push_str(&format!("{}:\n", lookup(chain, "Non-degeneracy conditions")));
        for n in &self.ndgs {
            out.push_str(&format!("  {}\n", n.localized(chain)));
        }
        out
    }
}

pub fn wu_prove(c: &Construction, g: &Goal) -> Result<WuOutcome, WuError> {
    wu_prove_capped(c, g, DEFAULT_TERM_CAP)
}

pub fn wu_prove_capped(c: &Construction, g: &Goal, cap: usize) -> Result<WuOutcome, WuError> {
    let translation = translate(c, g)?;
    let triangular = triangularize(&translation.hypotheses, cap)?;
    let names = &translation.variables;
    let mut steps = Vec::new();
    let mut remainders = Vec::new();
    for conclusion in &translation.conclusions {
        let mut r = conclusion.clone();
        for f in triangular.polys.iter().rev() {
            if r.is_zero() {
                break;
            }
            let x = f.main_var().expect("non-constant");
            if r.degree(x) == 0 {
                continue;
            }
            r = r.prem(f, x, cap)?.remainder;
            steps.push(ReductionStep {
                variable: names[x].clone(),
                remainder: r.display(names).to_string(),
            });
        }
        remainders.push(r);
    }
    let final_remainder = remainders
        .iter()
        .find(|r| !r.is_zero())
        .cloned()
        .unwrap_or_else(Polynomial::zero);
    let verdict = if final_remainder.is_zero() {
        Verdict::Proved
    } else {
        Verdict::NotProved
    };
    let mut seen: Vec<Polynomial> = Vec::new();
    let mut ndgs: Vec<NdgCondition> = Vec::new();
    for init in triangular.initials() {
        if init.is_constant() || seen.iter().any(|q| init.ratio_to(q).is_some()) {
            continue;
        }
        ndgs.push(NdgCondition {
            polynomial: init.display(names).to_string(),
            reading: read_ndg(&init, c, &translation.coords),
            origin: NdgOrigin::Initial,
        });
        seen.push(init);
    }
    for (p, reading) in step_conditions(c, &translation.coords) {
        if p.is_constant() || seen.iter().any(|q| p.ratio_to(q).is_some()) {
            continue;
        }
        ndgs.push(NdgCondition {
            polynomial: p.display(names).to_string(),
            reading: Some(reading),
            origin: NdgOrigin::Step,
        });
        seen.push(p);
    }
    Ok(WuOutcome {
        verdict,
        ndgs,
        final_remainder,
        remainders,
        steps,
        triangular,
        translation,
    })
}

/// Distinct defining points for every step, and non-parallel lines for
/// intersections.
fn step_conditions(c: &Construction, coords: &Coords) -> Vec<(Polynomial, NdgReading)> {
    let xy = |p: &PointName| coords.get(p).expect("all points have coordinates");
    let apart = |a: &PointName, b: &PointName| {
        let d = diff(xy(b), xy(a));
        (
            dot(&d, &d),
            NdgReading {
                key: "points {0} and {1} do not coincide".into(),
                points: vec![a.to_string(), b.to_string()],
            },
        )
    };
    let mut out = Vec::new();
    for step in c.steps() {
        let a = step.args();
        match step.kind() {
            StepKind::FreePoint => {}
            StepKind::Midpoint | StepKind::PointOnLine => out.push(apart(&a[0], &a[1])),
            StepKind::Foot => out.push(apart(&a[1], &a[2])),
            StepKind::IntersectLl => {
                out.push(apart(&a[0], &a[1]));
                out.push(apart(&a[2], &a[3]));
                out.push((
                    cross(&diff(xy(&a[1]), xy(&a[0])), &diff(xy(&a[3]), xy(&a[2]))),
                    NdgReading {
                        key: "lines {0}{1} and {2}{3} are not parallel".into(),
                        points: a.iter().map(ToString::to_string).collect(),
                    },
                ));
            }
        }
    }
    out
}

/// Matches `p` against coincidence, collinearity, parallelism and
/// perpendicularity polynomials of the construction's points.
fn read_ndg(p: &Polynomial, c: &Construction, coords: &Coords) -> Option<NdgReading> {
    let pts: Vec<&PointName> = c.points().collect();
    let xy = |i: usize| coords.get(pts[i]).expect("all points have coordinates");
    let name = |i: usize| pts[i].to_string();
    let reading = |key: &str, idx: &[usize]| NdgReading {
        key: key.to_string(),
        points: idx.iter().map(|&i| name(i)).collect(),
    };
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            let d = diff(xy(j), xy(i));
            if p.ratio_to(&dot(&d, &d)).is_some() {
                return Some(reading("points {0} and {1} do not coincide", &[i, j]));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if p.ratio_to(&coll_poly(xy(i), xy(j), xy(k))).is_some() {
                    return Some(reading("points {0}, {1}, {2} are not collinear", &[i, j, k]));
                }
            }
        }
    }
    let segs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    for (s, &(a, b)) in segs.iter().enumerate() {
        for &(c2, d) in &segs[s + 1..] {
            let (u, v) = (diff(xy(b), xy(a)), diff(xy(d), xy(c2)));
            if p.ratio_to(&cross(&u, &v)).is_some() {
                return Some(reading("lines {0}{1} and {2}{3} are not parallel", &[a, b, c2, d]));
            }
            if p.ratio_to(&dot(&u, &v)).is_some() {
                return Some(reading("lines {0}{1} and {2}{3} are not perpendicular", &[a, b, c2, d]));
            }
        }
    }
    None
}
