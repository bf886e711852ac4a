//! Numeric witnesses for constructions.
//!
//! A [`Diagram`] assigns coordinates to every point of a construction. It is
//! used to filter candidate facts during saturation and to offer properties
//! that hold in the figure as goals.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::model::{hypothesis_facts, Construction, Fact, PointName, Predicate, StepKind};

pub const CONSTRUCTION_TOLERANCE: f64 = 1e-9;
pub const FACT_TOLERANCE: f64 = 1e-6;
/// Minimum max-norm separation of distinct points, relative to the bounding box.
pub const MIN_SEPARATION: f64 = 1e-4;
pub const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("degenerate diagram: step defining `{step}` failed after {attempts} attempts")]
pub struct DiagramError {
    pub step: PointName,
    pub attempts: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagram {
    points: Vec<(PointName, [f64; 2])>,
    #[serde(skip)]
    index: HashMap<PointName, usize>,
    pub seed: u64,
    pub construction_tolerance: f64,
    pub fact_tolerance: f64,
    #[serde(skip)]
    diameter: f64,
}

pub(crate) type Xy = [f64; 2];

fn sub(a: Xy, b: Xy) -> Xy {
    [a[0] - b[0], a[1] - b[1]]
}
fn dot(a: Xy, b: Xy) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}
fn cross(a: Xy, b: Xy) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}
fn norm(a: Xy) -> f64 {
    dot(a, a).sqrt()
}

impl Diagram {
    /// Builds a diagram from explicit coordinates (in the given order).
    pub fn from_points(points: Vec<(PointName, [f64; 2])>, seed: u64) -> Self {
        let index = points
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (p.clone(), i))
            .collect();
        let mut d = Self {
            points,
            index,
            seed,
            construction_tolerance: CONSTRUCTION_TOLERANCE,
            fact_tolerance: FACT_TOLERANCE,
            diameter: 0.0,
        };
        let (w, h) = d.extent();
        d.diameter = (w * w + h * h).sqrt();
        d
    }

    pub fn coord(&self, p: &PointName) -> Option<[f64; 2]> {
        self.index.get(p).map(|&i| self.points[i].1)
    }

    pub fn points(&self) -> &[(PointName, [f64; 2])] {
        &self.points
    }

    /// Diagonal of the bounding box; all residuals are scaled by it.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    fn extent(&self) -> (f64, f64) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for (_, c) in &self.points {
            for k in 0..2 {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        if self.points.is_empty() {
            (0.0, 0.0)
        } else {
            (hi[0] - lo[0], hi[1] - lo[1])
        }
    }

    fn min_separation_violation(&self) -> Option<usize> {
        let (w, h) = self.extent();
        let scale = w.max(h);
        for j in 1..self.points.len() {
            for i in 0..j {
                let d = sub(self.points[i].1, self.points[j].1);
                let dist = d[0].abs().max(d[1].abs());
                if scale == 0.0 || dist / scale < MIN_SEPARATION {
                    return Some(j);
                }
            }
        }
        None
    }
}

enum Attempt {
    Ok(Diagram),
    Degenerate(PointName),
}

fn try_realize(c: &Construction, rng: &mut ChaCha8Rng, seed: u64) -> Attempt {
    let mut pts: Vec<(PointName, Xy)> = Vec::with_capacity(c.steps().len());
    let mut at: HashMap<&PointName, Xy> = HashMap::new();
    for step in c.steps() {
        let arg = |i: usize| at[&step.args()[i]];
        let p = match step.kind() {
            StepKind::FreePoint => match step.hint() {
                Some(h) => [h.x, h.y],
                None => [rng.random::<f64>(), rng.random::<f64>()],
            },
            StepKind::Midpoint => {
                let (a, b) = (arg(0), arg(1));
                [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
            }
            StepKind::Foot => {
                let (a, b, c) = (arg(0), arg(1), arg(2));
                let u = sub(c, b);
                let len2 = dot(u, u);
                if len2 == 0.0 || !len2.is_finite() {
                    return Attempt::Degenerate(step.defined().clone());
                }
                let t = dot(sub(a, b), u) / len2;
                [b[0] + t * u[0], b[1] + t * u[1]]
            }
            StepKind::IntersectLl => {
                let (a, b, c, d) = (arg(0), arg(1), arg(2), arg(3));
                let (u, v) = (sub(b, a), sub(d, c));
                let denom = cross(u, v);
                if denom.abs() <= CONSTRUCTION_TOLERANCE * norm(u) * norm(v) {
                    return Attempt::Degenerate(step.defined().clone());
                }
                let s = cross(sub(c, a), v) / denom;
                [a[0] + s * u[0], a[1] + s * u[1]]
            }
            StepKind::PointOnLine => {
                let (a, b) = (arg(0), arg(1));
                let t = rng.random_range(-0.5..1.5);
                [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
            }
        };
        if !p[0].is_finite() || !p[1].is_finite() {
            return Attempt::Degenerate(step.defined().clone());
        }
        at.insert(step.defined(), p);
        pts.push((step.defined().clone(), p));
    }
    let d = Diagram::from_points(pts, seed);
    match d.min_separation_violation() {
        Some(j) => Attempt::Degenerate(d.points[j].0.clone()),
        None => Attempt::Ok(d),
    }
}

/// Realizes `c` with free points drawn from a ChaCha8 stream seeded by `seed`
/// (coordinate hints win over sampling). Degenerate draws are resampled.
pub fn realize(c: &Construction, seed: u64) -> Result<Diagram, DiagramError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        match try_realize(c, &mut rng, seed) {
            Attempt::Ok(d) => return Ok(d),
            Attempt::Degenerate(step) => last = Some(step),
        }
    }
    Err(DiagramError {
        step: last.expect("at least one attempt"),
        attempts: MAX_ATTEMPTS,
    })
}

/// Dimensionless residual of `f` on `d`; `None` when a point is missing or
/// a direction is undefined (zero-length segment).
pub fn residual(f: &Fact, d: &Diagram) -> Option<f64> {
    let pts: Vec<Xy> = f
        .points()
        .iter()
        .map(|p| d.coord(p))
        .collect::<Option<_>>()?;
    residual_xy(f.predicate(), &pts, d.diameter())
}

pub(crate) fn residual_xy(predicate: Predicate, p: &[Xy], scale: f64) -> Option<f64> {
    if scale <= 0.0 {
        return None;
    }
    let dir = |a: Xy, b: Xy| -> Option<Xy> {
        let u = sub(b, a);
        (norm(u) > 1e-12 * scale).then_some(u)
    };
    let r = match predicate {
        Predicate::Coll => cross(sub(p[1], p[0]), sub(p[2], p[0])).abs() / (scale * scale),
        Predicate::Para | Predicate::Perp => {
            let (u, v) = (dir(p[0], p[1])?, dir(p[2], p[3])?);
            let raw = if predicate == Predicate::Para {
                cross(u, v)
            } else {
                dot(u, v)
            };
            raw.abs() / (norm(u) * norm(v))
        }
        Predicate::Midp => {
            let e = [
                2.0 * p[0][0] - p[1][0] - p[2][0],
                2.0 * p[0][1] - p[1][1] - p[2][1],
            ];
            norm(e) / scale
        }
        Predicate::Cong => {
            let (u, v) = (sub(p[1], p[0]), sub(p[3], p[2]));
            (dot(u, u) - dot(v, v)).abs() / (scale * scale)
        }
        Predicate::Eqangle => {
            let angle = |u: Xy| u[1].atan2(u[0]);
            let first = angle(dir(p[2], p[3])?) - angle(dir(p[0], p[1])?);
            let second = angle(dir(p[6], p[7])?) - angle(dir(p[4], p[5])?);
            let diff = (first - second).rem_euclid(PI);
            diff.min(PI - diff)
        }
        Predicate::Cyclic => {
            let origin = p[0];
            let rows: Vec<[f64; 4]> = p
                .iter()
                .map(|q| {
                    let x = (q[0] - origin[0]) / scale;
                    let y = (q[1] - origin[1]) / scale;
                    [x, y, x * x + y * y, 1.0]
                })
                .collect();
            det4(&rows).abs()
        }
    };
    Some(r)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: &[[f64; 4]]) -> f64 {
    let mut total = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for r in 1..4 {
            let row = m[r].iter().enumerate().filter(|&(c, _)| c != col);
            for (slot, (_, v)) in minor[r - 1].iter_mut().zip(row) {
                *slot = *v;
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * m[0][col] * det3(minor);
    }
    total
}

/// Whether `f`'s residual on `d` is within the diagram's fact tolerance.
pub fn holds_numerically(f: &Fact, d: &Diagram) -> bool {
    residual(f, d).is_some_and(|r| r < d.fact_tolerance)
}

/// Rejects instances that are numerically true only in a degenerate way:
/// repeated points, concyclic quadruples with three collinear points, and
/// angle equalities between zero angles.
pub fn is_nondegenerate(f: &Fact, d: &Diagram) -> bool {
    if f.is_degenerate() {
        return false;
    }
    let Some(pts) = f
        .points()
        .iter()
        .map(|p| d.coord(p))
        .collect::<Option<Vec<Xy>>>()
    else {
        return false;
    };
    nondegenerate_xy(f.predicate(), &pts, d.diameter(), d.fact_tolerance)
}

/// Coordinate-level part of [`is_nondegenerate`]; repeated labels are the
/// caller's concern.
pub(crate) fn nondegenerate_xy(predicate: Predicate, p: &[Xy], scale: f64, tol: f64) -> bool {
    let near_zero = |pred: Predicate, pts: &[Xy]| residual_xy(pred, pts, scale).is_none_or(|r| r < tol);
    match predicate {
        Predicate::Cyclic => [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
            .iter()
            .all(|t| !near_zero(Predicate::Coll, &[p[t[0]], p[t[1]], p[t[2]]])),
        Predicate::Eqangle => {
            !near_zero(Predicate::Para, &p[0..4]) && !near_zero(Predicate::Para, &p[4..8])
        }
        _ => true,
    }
}

fn all_collinear(f: &Fact, d: &Diagram) -> bool {
    let pts = f.points();
    let line = |c: &PointName| {
        let fact = Fact::new(Predicate::Coll, &[pts[0].clone(), pts[1].clone(), c.clone()])
            .expect("three points");
        fact.is_degenerate() || holds_numerically(&fact, d)
    };
    pts[2..].iter().all(line)
}

fn candidates(points: &[PointName]) -> Vec<Fact> {
    let n = points.len();
    let mut out = Vec::new();
    let f = |pred: Predicate, idx: &[usize]| {
        let pts: Vec<PointName> = idx.iter().map(|&i| points[i].clone()).collect();
        Fact::new(pred, &pts).expect("arity")
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(f(Predicate::Coll, &[i, j, k]));
                for l in k + 1..n {
                    out.push(f(Predicate::Cyclic, &[i, j, k, l]));
                }
            }
        }
    }
    let segments: Vec<[usize; 2]> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| [i, j]))
        .collect();
    for (s, a) in segments.iter().enumerate() {
        for b in &segments[s + 1..] {
            let idx = [a[0], a[1], b[0], b[1]];
            for pred in [Predicate::Para, Predicate::Perp, Predicate::Cong] {
                out.push(f(pred, &idx));
            }
        }
    }
    out
}

/// Facts that hold on `d` and on an independent re-realization of `c`,
/// excluding the construction's own hypotheses. Sorted.
pub fn detect_properties(d: &Diagram, c: &Construction) -> Vec<Fact> {
    let second = (1..=8u64).find_map(|k| {
        realize(c, d.seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))).ok()
    });
    let Some(second) = second else {
        return Vec::new();
    };
    let hyps = hypothesis_facts(c);
    let mut points: Vec<PointName> = c.points().cloned().collect();
    points.sort();
    let mut found: Vec<Fact> = candidates(&points)
        .into_iter()
        .filter(|f| !hyps.contains(f))
        .filter(|f| !(f.predicate() == Predicate::Para && all_collinear(f, d)))
        .filter(|f| {
            [d, &second]
                .iter()
                .all(|diag| holds_numerically(f, diag) && is_nondegenerate(f, diag))
        })
        .collect();
    found.sort();
    found.dedup();
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_gcs;

    fn p(s: &str) -> PointName {
        PointName::new(s).unwrap()
    }

    fn diagram(pts: &[(&str, [f64; 2])]) -> Diagram {
        Diagram::from_points(pts.iter().map(|(l, c)| (p(l), *c)).collect(), 0)
    }

    fn fact(s: &str) -> Fact {
        s.parse().unwrap()
    }

    #[test]
    fn midpoint_and_foot_formulas() {
        let c = parse_gcs("point A 0 0\npoint B 2 0\nmidpoint M A B\n").unwrap();
        let d = realize(&c, 1).unwrap();
        assert_eq!(d.coord(&p("M")), Some([1.0, 0.0]));

        let c = parse_gcs("point A 1 3\npoint B 0 0\npoint C 4 0\nfoot D A B C\n").unwrap();
        let d = realize(&c, 1).unwrap();
        assert_eq!(d.coord(&p("D")), Some([1.0, 0.0]));
    }

    #[test]
    fn parallel_intersection_is_degenerate() {
        // MN is a midline, so it never meets AB.
        let c = parse_gcs("point A\npoint B\npoint C\nmidpoint M A C\nmidpoint N B C\nintersect P M N A B\n")
            .unwrap();
        let err = realize(&c, 3).unwrap_err();
        assert_eq!(err.step, p("P"));
        assert_eq!(err.attempts, MAX_ATTEMPTS);
    }

    #[test]
    fn unit_circle_is_cyclic() {
        let d = diagram(&[
            ("A", [1.0, 0.0]),
            ("B", [0.0, 1.0]),
            ("C", [-1.0, 0.0]),
            ("D", [0.0, -1.0]),
        ]);
        assert!(holds_numerically(&fact("cyclic A B C D"), &d));
    }

    #[test]
    fn cong_outside_tolerance() {
        let d = diagram(&[("A", [0.0, 0.0]), ("B", [1.0, 0.0]), ("C", [0.0, 1.0 + 1e-3])]);
        assert!(!holds_numerically(&fact("cong A B A C"), &d));
    }

    #[test]
    fn nine_point_instance() {
        let d = diagram(&[
            ("A", [0.0, 0.0]),
            ("B", [4.0, 0.0]),
            ("C", [1.0, 3.0]),
            ("D", [2.0, 2.0]),
            ("E", [2.5, 1.5]),
            ("F", [0.5, 1.5]),
            ("G", [2.0, 0.0]),
        ]);
        assert!(holds_numerically(&fact("cyclic D E F G"), &d));
        assert!(holds_numerically(&fact("perp A D B C"), &d));
        assert!(!holds_numerically(&fact("cyclic A E F G"), &d));
    }

    #[test]
    fn scaling_does_not_change_verdicts() {
        let base = [("A", [0.0, 0.0]), ("B", [4.0, 0.0]), ("C", [1.0, 3.0]), ("D", [2.0, 2.0])];
        for k in [1e-3, 1.0, 1e4] {
            let d = diagram(&base.map(|(l, c)| (l, [c[0] * k, c[1] * k])));
            assert!(holds_numerically(&fact("perp A D B C"), &d));
            assert!(holds_numerically(&fact("coll B C D"), &d));
            assert!(!holds_numerically(&fact("cong A B A C"), &d));
        }
    }

    #[test]
    fn detect_midpoint_consequences() {
        let c = parse_gcs("point A\npoint B\nmidpoint M A B\n").unwrap();
        let d = realize(&c, 0).unwrap();
        let found = detect_properties(&d, &c);
        assert!(found.contains(&fact("cong M A M B")));
        assert!(!found.contains(&fact("midp M A B")));
    }

    #[test]
    fn determinism() {
        let c = parse_gcs("point A\npoint B\npoint C\nfoot D A B C\n").unwrap();
        let a = realize(&c, 42).unwrap();
        let b = realize(&c, 42).unwrap();
        assert_eq!(a.points(), b.points());
    }
}
