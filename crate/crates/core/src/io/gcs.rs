//! The `.gcs` construction script format.
//!
//! ```text
//! # nine-point circle, part
//! point A
//! point B
//! point C
//! midpoint E B C
//! midpoint F C A
//! midpoint G A B
//! foot D A B C
//! goal cyclic D E F G
//! ```
//!
//! One statement per line, `#` starts a comment. `point` optionally takes
//! two numbers that pin the free point's coordinates in diagrams.

use std::fmt;

use thiserror::Error;

use crate::model::{
    Construction, ConstructionError, ConstructionStep, Fact, Goal, Hint,
    PointName, Predicate, StepKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcsErrorKind {
    UnknownKeyword,
    Arity,
    InvalidLabel,
    InvalidNumber,
    UnknownPredicate,
    Undefined,
    Duplicate,
    Degenerate,
}

/// A parse diagnostic; `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct GcsError {
    pub line: usize,
    pub kind: GcsErrorKind,
    /// The offending token (or the whole statement when no single token is at fault).
    pub token: String,
    /// The form that was expected at this position.
    pub expected: String,
}

impl fmt::Display for GcsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            GcsErrorKind::UnknownKeyword => "unknown keyword",
            GcsErrorKind::Arity => "wrong number of arguments in",
            GcsErrorKind::InvalidLabel => "invalid point label",
            GcsErrorKind::InvalidNumber => "invalid coordinate",
            GcsErrorKind::UnknownPredicate => "unknown predicate",
            GcsErrorKind::Undefined => "undefined point",
            GcsErrorKind::Duplicate => "point defined twice:",
            GcsErrorKind::Degenerate => "degenerate arguments in",
        };
        write!(
            f,
            "line {}: {} `{}`; expected {}",
            self.line, what, self.token, self.expected
        )
    }
}

const KEYWORDS: &str = "one of point, midpoint, foot, intersect, online, goal";

pub fn parse_gcs(text: &str) -> Result<Construction, GcsError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut c = Construction::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        let err = |kind, token: &str, expected: &str| GcsError {
            line,
            kind,
            token: token.to_string(),
            expected: expected.to_string(),
        };
        let statement = tokens.join(" ");

        if keyword == "goal" {
            let goal = parse_goal(args, &c).map_err(|(kind, token, expected)| GcsError {
                line,
                kind,
                token,
                expected,
            })?;
            c.push_goal(goal)
                .expect("goal points checked during parsing");
            continue;
        }

        let kind = StepKind::from_keyword(keyword)
            .ok_or_else(|| err(GcsErrorKind::UnknownKeyword, keyword, KEYWORDS))?;
        let (labels, coords) = match kind {
            StepKind::FreePoint if args.len() == 3 => (&args[..1], Some(&args[1..])),
            _ => (args, None),
        };
        if labels.len() != kind.arity() + 1 {
            return Err(err(GcsErrorKind::Arity, &statement, kind.usage()));
        }
        let mut names = Vec::with_capacity(labels.len());
        for l in labels {
            names.push(label(l).map_err(|_| err(GcsErrorKind::InvalidLabel, l, "a label like A or M1"))?);
        }
        let defined = names.remove(0);
        let mut step = ConstructionStep::new(kind, defined, names)
            .map_err(|e| err(GcsErrorKind::Degenerate, &statement, &e.to_string()))?;
        if let Some(xy) = coords {
            let num = |t: &str| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(GcsErrorKind::InvalidNumber, t, "a finite decimal number"))
            };
            let hint = Hint {
                x: num(xy[0])?,
                y: num(xy[1])?,
            };
            step = step.with_hint(hint).expect("free point with finite hint");
        }
        c.push_step(step).map_err(|e| match e {
            ConstructionError::Undefined(p) => err(
                GcsErrorKind::Undefined,
                p.as_str(),
                "a point defined on an earlier line",
            ),
            ConstructionError::Duplicate(p) => {
                err(GcsErrorKind::Duplicate, p.as_str(), "a fresh label")
            }
            other => err(GcsErrorKind::Degenerate, &statement, &other.to_string()),
        })?;
    }
    Ok(c)
}

fn label(s: &str) -> Result<PointName, ()> {
    PointName::new(s).map_err(|_| ())
}

type GoalErr = (GcsErrorKind, String, String);

fn parse_goal(args: &[&str], c: &Construction) -> Result<Goal, GoalErr> {
    let usage = "goal <predicate> <points...>".to_string();
    let Some((&name, labels)) = args.split_first() else {
        return Err((GcsErrorKind::Arity, "goal".into(), usage));
    };
    let predicate = Predicate::from_name(name).ok_or_else(|| {
        (
            GcsErrorKind::UnknownPredicate,
            name.to_string(),
            "one of coll, para, perp, midp, cong, eqangle, cyclic".to_string(),
        )
    })?;
    if labels.len() != predicate.arity() {
        return Err((
            GcsErrorKind::Arity,
            format!("goal {}", args.join(" ")),
            format!("{} followed by {} points", predicate, predicate.arity()),
        ));
    }
    let mut points = Vec::with_capacity(labels.len());
    for l in labels {
        let p = label(l).map_err(|_| {
            (
                GcsErrorKind::InvalidLabel,
                l.to_string(),
                "a label like A or M1".to_string(),
            )
        })?;
        if !c.defines(&p) {
            return Err((
                GcsErrorKind::Undefined,
                l.to_string(),
                "a point defined on an earlier line".to_string(),
            ));
        }
        points.push(p);
    }
    let fact = Fact::new(predicate, &points).expect("arity checked");
    Ok(Goal::declared(fact))
}

/// Writes `c` back as a script; `parse_gcs(serialize_gcs(c)) == c`.
pub fn serialize_gcs(c: &Construction) -> String {
    let mut out = String::new();
    for step in c.steps() {
        out.push_str(&step.to_string());
        out.push('\n');
    }
    for goal in c.goals() {
        out.push_str("goal ");
        out.push_str(&goal.fact.to_script());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const NINE_POINT: &str = "point A\npoint B\npoint C\nmidpoint E B C\nmidpoint F C A\nmidpoint G A B\nfoot D A B C\ngoal cyclic D E F G\n";

    #[test]
    fn nine_point_parses() {
        let c = parse_gcs(NINE_POINT).unwrap();
        assert_eq!(c.steps().len(), 7);
        assert_eq!(c.goals().len(), 1);
        assert_eq!(c.goals()[0].fact.to_string(), "cyclic(D,E,F,G)");
    }

    #[test]
    fn nine_point_round_trips_in_eight_lines() {
        let c = parse_gcs(NINE_POINT).unwrap();
        let text = serialize_gcs(&c);
        assert_eq!(text.lines().count(), 8);
        assert_eq!(parse_gcs(&text).unwrap(), c);
    }

    #[test]
    fn empty_round_trip() {
        assert_eq!(serialize_gcs(&Construction::new()), "");
        assert!(parse_gcs("").unwrap().is_empty());
    }

    #[test]
    fn midpoint_arity() {
        let err = parse_gcs("point A\nmidpoint M A\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.kind, GcsErrorKind::Arity);
        assert!(err.to_string().contains("midpoint <M> <A> <B>"));
    }

    #[test]
    fn use_before_definition_names_point() {
        let err = parse_gcs("point A\npoint B\nfoot D A B C\npoint C\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.kind, GcsErrorKind::Undefined);
        assert_eq!(err.token, "C");
    }

    #[test]
    fn unknown_keyword_and_duplicate() {
        let err = parse_gcs("circle O A\n").unwrap_err();
        assert_eq!((err.line, err.kind), (1, GcsErrorKind::UnknownKeyword));
        let err = parse_gcs("point A\n\n# c\npoint A\n").unwrap_err();
        assert_eq!((err.line, err.kind), (4, GcsErrorKind::Duplicate));
    }

    #[test]
    fn crlf_comments_and_hints() {
        let c = parse_gcs("\u{feff}point A 0.5 -1e-3 # pinned\r\npoint B\r\nonline P A B\r\n").unwrap();
        assert_eq!(c.steps()[0].hint(), Some(Hint { x: 0.5, y: -0.001 }));
        assert_eq!(parse_gcs(&serialize_gcs(&c)).unwrap(), c);
        assert_eq!(
            parse_gcs("point A 1 nan\n").unwrap_err().kind,
            GcsErrorKind::InvalidNumber
        );
    }

    #[test]
    fn goal_errors() {
        assert_eq!(
            parse_gcs("point A\ngoal area A\n").unwrap_err().kind,
            GcsErrorKind::UnknownPredicate
        );
        assert_eq!(
            parse_gcs("point A\npoint B\ngoal coll A B\n").unwrap_err().kind,
            GcsErrorKind::Arity
        );
        assert_eq!(
            parse_gcs("point A\npoint B\ngoal coll A B Z\n").unwrap_err().kind,
            GcsErrorKind::Undefined
        );
    }
}
