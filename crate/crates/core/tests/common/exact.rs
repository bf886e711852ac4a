//! Exact-rational reference for Wu's method: builds figures with
//! BigRational coordinates and decides predicates directly.

use std::collections::HashMap;

use gddx::model::{Construction, Fact, Goal, Predicate, StepKind};
use gddx::wu::wu_prove;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;
pub type Pt = [Q; 2];

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn rational(rng: &mut ChaCha8Rng) -> Q {
    Q::new(BigInt::from(rng.random_range(-40i64..=40)), BigInt::from(rng.random_range(1i64..=9)))
}

fn sub(a: &Pt, b: &Pt) -> Pt {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn dot(a: &Pt, b: &Pt) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1]
}

fn cross(a: &Pt, b: &Pt) -> Q {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn along(a: &Pt, d: &Pt, t: &Q) -> Pt {
    [&a[0] + t * &d[0], &a[1] + t * &d[1]]
}

/// Builds the figure with exact rationals, step by step with plain
/// coordinate geometry. Free points follow the prover's frame (first at the origin,
/// second on the x-axis). `None` when a step is undefined for this sample.
pub fn exact_figure(c: &Construction, rng: &mut ChaCha8Rng) -> Option<HashMap<String, Pt>> {
    let mut pts: HashMap<String, Pt> = HashMap::new();
    let mut free = 0;
    for s in c.steps() {
        let a: Vec<Pt> = s.args().iter().map(|p| pts[p.as_str()].clone()).collect();
        let p = match s.kind() {
            StepKind::FreePoint => {
                free += 1;
                match free {
                    1 => [Q::zero(), Q::zero()],
                    2 => [rational(rng), Q::zero()],
                    _ => [rational(rng), rational(rng)],
                }
            }
            StepKind::Midpoint => {
                let half = Q::new(BigInt::one(), BigInt::from(2));
                [(&a[0][0] + &a[1][0]) * &half, (&a[0][1] + &a[1][1]) * &half]
            }
            StepKind::Foot => {
                let d = sub(&a[2], &a[1]);
                let n = dot(&d, &d);
                if n.is_zero() {
                    return None;
                }
                along(&a[1], &d, &(dot(&sub(&a[0], &a[1]), &d) / n))
            }
            StepKind::IntersectLl => {
                let (d1, d2) = (sub(&a[1], &a[0]), sub(&a[3], &a[2]));
                let den = cross(&d1, &d2);
                if den.is_zero() {
                    return None;
                }
                along(&a[0], &d1, &(cross(&sub(&a[2], &a[0]), &d2) / den))
            }
            StepKind::PointOnLine => {
                let d = sub(&a[1], &a[0]);
                if d[0].is_zero() {
                    return None;
                }
                let x = rational(rng);
                let y = &a[0][1] + (&x - &a[0][0]) * &d[1] / &d[0];
                [x, y]
            }
        };
        pts.insert(s.defined().to_string(), p);
    }
    Some(pts)
}

/// Decides `f` on exact coordinates without any polynomial machinery.
/// `None` for a degenerate cyclic test (first three points collinear).
pub fn holds_exactly(f: &Fact, pts: &HashMap<String, Pt>) -> Option<bool> {
    let p: Vec<&Pt> = f.points().iter().map(|n| &pts[n.as_str()]).collect();
    Some(match f.predicate() {
        Predicate::Coll => cross(&sub(p[1], p[0]), &sub(p[2], p[0])).is_zero(),
        Predicate::Para => cross(&sub(p[1], p[0]), &sub(p[3], p[2])).is_zero(),
        Predicate::Perp => dot(&sub(p[1], p[0]), &sub(p[3], p[2])).is_zero(),
        Predicate::Cong => {
            let (u, v) = (sub(p[1], p[0]), sub(p[3], p[2]));
            dot(&u, &u) == dot(&v, &v)
        }
        Predicate::Midp => (0..2).all(|k| q(2) * &p[0][k] == &p[1][k] + &p[2][k]),
        Predicate::Cyclic => {
            // Circumcentre of the first three, then compare radii.
            let (b, c) = (sub(p[1], p[0]), sub(p[2], p[0]));
            let d = q(2) * cross(&b, &c);
            if d.is_zero() {
                return None;
            }
            let (bb, cc) = (dot(&b, &b), dot(&c, &c));
            let o = [(&c[1] * &bb - &b[1] * &cc) / &d, (&b[0] * &cc - &c[0] * &bb) / &d];
            let r = dot(&o, &o);
            let w = sub(&sub(p[3], p[0]), &o);
            dot(&w, &w) == r
        }
        Predicate::Eqangle => unreachable!("not an algebraic goal"),
    })
}

pub struct OracleRun {
    pub used: usize,
    pub falsified: usize,
}

/// Samples figures, keeps those with nonzero initials, and decides the goal
/// exactly on each. Also checks that every hypothesis polynomial vanishes on
/// the sampled figure (the translation agrees with the geometry).
pub fn oracle(c: &Construction, goal: &Goal, samples: usize) -> OracleRun {
    let out = wu_prove(c, goal).unwrap();
    let t = &out.translation;
    let initials = out.triangular.initials();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut run = OracleRun { used: 0, falsified: 0 };
    for _ in 0..samples {
        let Some(pts) = exact_figure(c, &mut rng) else { continue };
        let values: Vec<Q> = t
            .variables
            .iter()
            .map(|v| {
                let (axis, label) = v.split_once('_').unwrap();
                pts[label][usize::from(axis == "y")].clone()
            })
            .collect();
        if initials.iter().any(|i| i.eval(&values).is_zero()) {
            continue;
        }
        for h in &t.hypotheses {
            assert!(h.eval(&values).is_zero(), "hypothesis does not vanish on the figure");
        }
        let Some(ok) = holds_exactly(&goal.fact, &pts) else { continue };
        run.used += 1;
        if !ok {
            run.falsified += 1;
        }
        let conclusions_vanish = t.conclusions.iter().all(|p| p.eval(&values).is_zero());
        assert_eq!(conclusions_vanish, ok, "conclusion polynomial disagrees with the geometry");
    }
    run
}
