use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point label such as `A` or `M1`.
///
/// Labels are case-sensitive and match `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PointName(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid point label `{0}` (expected a letter followed by letters, digits or `_`)")]
pub struct InvalidLabel(pub String);

impl PointName {
    pub fn new(label: impl Into<String>) -> Result<Self, InvalidLabel> {
        let label = label.into();
        if is_valid_label(&label) {
            Ok(Self(label))
        } else {
            Err(InvalidLabel(label))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_valid_label(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for PointName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for PointName {
    type Error = InvalidLabel;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<PointName> for String {
    fn from(value: PointName) -> Self {
        value.0
    }
}

impl FromStr for PointName {
    type Err = InvalidLabel;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

/// The seven geometric predicates understood by every backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    Coll,
    Para,
    Perp,
    Midp,
    Cong,
    Eqangle,
    Cyclic,
}

impl Predicate {
    pub const ALL: [Predicate; 7] = [
        Predicate::Coll,
        Predicate::Para,
        Predicate::Perp,
        Predicate::Midp,
        Predicate::Cong,
        Predicate::Eqangle,
        Predicate::Cyclic,
    ];

    pub const fn arity(self) -> usize {
        match self {
            Predicate::Coll | Predicate::Midp => 3,
            Predicate::Para | Predicate::Perp | Predicate::Cong | Predicate::Cyclic => 4,
            Predicate::Eqangle => 8,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Predicate::Coll => "coll",
            Predicate::Para => "para",
            Predicate::Perp => "perp",
            Predicate::Midp => "midp",
            Predicate::Cong => "cong",
            Predicate::Eqangle => "eqangle",
            Predicate::Cyclic => "cyclic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub(crate) const fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalformedFact {
    #[error("{predicate} takes {expected} points, got {found}")]
    Arity {
        predicate: Predicate,
        expected: usize,
        found: usize,
    },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("empty fact")]
    Empty,
    #[error(transparent)]
    Label(#[from] InvalidLabel),
}

/// Index permutation over at most eight argument slots.
pub type Perm = [u8; 8];

const IDENTITY: Perm = [0, 1, 2, 3, 4, 5, 6, 7];

fn swap(i: u8, j: u8) -> Perm {
    let mut p = IDENTITY;
    p.swap(i as usize, j as usize);
    p
}

fn compose(a: &Perm, b: &Perm) -> Perm {
    let mut out = IDENTITY;
    for i in 0..8 {
        out[i] = b[a[i] as usize];
    }
    out
}

fn closure(generators: &[Perm]) -> Vec<Perm> {
    let mut group = vec![IDENTITY];
    let mut frontier = vec![IDENTITY];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = compose(&p, g);
            if !group.contains(&q) {
                group.push(q);
                frontier.push(q);
            }
        }
    }
    group.sort_unstable();
    group
}

static GROUPS: LazyLock<[Vec<Perm>; 7]> = LazyLock::new(|| {
    let segment_pair = [swap(0, 1), swap(2, 3), [2, 3, 0, 1, 4, 5, 6, 7]];
    [
        closure(&[swap(0, 1), swap(1, 2)]),
        closure(&segment_pair),
        closure(&segment_pair),
        closure(&[swap(1, 2)]),
        closure(&segment_pair),
        closure(&[
            swap(0, 1),
            swap(2, 3),
            swap(4, 5),
            swap(6, 7),
            [2, 3, 0, 1, 6, 7, 4, 5],
            [4, 5, 6, 7, 0, 1, 2, 3],
        ]),
        closure(&[swap(0, 1), swap(1, 2), swap(2, 3)]),
    ]
});

/// Every argument permutation that maps a fact of `predicate` to an
/// equivalent statement. Slot `i` of an image takes argument `perm[i]`.
pub fn symmetry_group(predicate: Predicate) -> &'static [Perm] {
    &GROUPS[predicate.index()]
}

fn sort_pair<T: Ord>(pts: &mut [T], i: usize) {
    if pts[i] > pts[i + 1] {
        pts.swap(i, i + 1);
    }
}

/// Puts `pts` into the canonical representative of its symmetry class.
///
/// Shared by [`Fact`] (labels) and the engine's interned atoms, so both
/// agree on ordering whenever point ids are assigned in label order.
pub(crate) fn canonicalize<T: Ord + Clone>(predicate: Predicate, pts: &mut [T]) {
    match predicate {
        Predicate::Coll | Predicate::Cyclic => pts.sort(),
        Predicate::Midp => sort_pair(pts, 1),
        Predicate::Para | Predicate::Perp | Predicate::Cong => {
            sort_pair(pts, 0);
            sort_pair(pts, 2);
            if pts[2..4] < pts[0..2] {
                pts.swap(0, 2);
                pts.swap(1, 3);
            }
        }
        Predicate::Eqangle => {
            for i in [0, 2, 4, 6] {
                sort_pair(pts, i);
            }
            let seg = |k: usize| [pts[2 * k].clone(), pts[2 * k + 1].clone()];
            let (s0, s1, s2, s3) = (seg(0), seg(1), seg(2), seg(3));
            let candidates = [
                [&s0, &s1, &s2, &s3],
                [&s1, &s0, &s3, &s2],
                [&s2, &s3, &s0, &s1],
                [&s3, &s2, &s1, &s0],
            ];
            let best = candidates.into_iter().min().expect("nonempty");
            let flat: Vec<T> = best.iter().flat_map(|s| s.iter().cloned()).collect();
            pts.clone_from_slice(&flat);
        }
    }
}

fn same_segment<T: Eq>(a: &[T], b: &[T]) -> bool {
    (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
}

/// True when the statement is trivial or meaningless because points repeat:
/// zero-length segments, repeated points in `coll`/`cyclic`, identical
/// segments compared with themselves, zero angles.
pub(crate) fn degenerate_points<T: Eq>(predicate: Predicate, pts: &[T]) -> bool {
    let all_distinct = |s: &[T]| {
        s.iter()
            .enumerate()
            .all(|(i, a)| s[i + 1..].iter().all(|b| a != b))
    };
    match predicate {
        Predicate::Coll | Predicate::Cyclic | Predicate::Midp => !all_distinct(pts),
        Predicate::Para | Predicate::Perp | Predicate::Cong => {
            pts[0] == pts[1] || pts[2] == pts[3] || same_segment(&pts[0..2], &pts[2..4])
        }
        Predicate::Eqangle => {
            pts.chunks(2).any(|s| s[0] == s[1])
                || same_segment(&pts[0..2], &pts[2..4])
                || same_segment(&pts[4..6], &pts[6..8])
                || (same_segment(&pts[0..2], &pts[4..6]) && same_segment(&pts[2..4], &pts[6..8]))
        }
    }
}

/// A geometric statement in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    predicate: Predicate,
    points: Vec<PointName>,
}

/// Canonical representative of the symmetry class of `predicate(points)`.
pub fn canonical_fact(predicate: Predicate, points: &[PointName]) -> Result<Fact, MalformedFact> {
    if points.len() != predicate.arity() {
        return Err(MalformedFact::Arity {
            predicate,
            expected: predicate.arity(),
            found: points.len(),
        });
    }
    let mut points = points.to_vec();
    canonicalize(predicate, &mut points);
    Ok(Fact { predicate, points })
}

impl Fact {
    pub fn new(predicate: Predicate, points: &[PointName]) -> Result<Self, MalformedFact> {
        canonical_fact(predicate, points)
    }

    /// Builds a fact from string labels; handy in tests and examples.
    pub fn parse_parts(predicate: Predicate, labels: &[&str]) -> Result<Self, MalformedFact> {
        let points = labels
            .iter()
            .map(|l| PointName::new(*l))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(predicate, &points)
    }

    pub fn predicate(&self) -> Predicate {
        self.predicate
    }

    pub fn points(&self) -> &[PointName] {
        &self.points
    }

    pub fn is_degenerate(&self) -> bool {
        degenerate_points(self.predicate, &self.points)
    }

    /// Space-separated form used in construction scripts: `cyclic D E F G`.
    pub fn to_script(&self) -> String {
        let mut s = self.predicate.name().to_string();
        for p in &self.points {
            s.push(' ');
            s.push_str(p.as_str());
        }
        s
    }

    /// `pred(A,B,..)` with the predicate name replaced by `name`.
    pub fn render_with(&self, name: &str) -> String {
        let pts: Vec<&str> = self.points.iter().map(PointName::as_str).collect();
        format!("{name}({})", pts.join(","))
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(self.predicate.name()))
    }
}

/// Accepts `cyclic D E F G`, `cyclic(D,E,F,G)` and mixtures of both.
impl FromStr for Fact {
    type Err = MalformedFact;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = s
            .split(|c: char| c.is_whitespace() || c == '(' || c == ')' || c == ',')
            .filter(|t| !t.is_empty());
        let name = tokens.next().ok_or(MalformedFact::Empty)?;
        let predicate = Predicate::from_name(name)
            .ok_or_else(|| MalformedFact::UnknownPredicate(name.to_string()))?;
        let points = tokens
            .map(PointName::new)
            .collect::<Result<Vec<_>, _>>()?;
        Fact::new(predicate, &points)
    }
}

impl Serialize for Fact {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fact {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(pred: Predicate, labels: &[&str]) -> Fact {
        Fact::parse_parts(pred, labels).unwrap()
    }

    #[test]
    fn coll_sorts() {
        assert_eq!(f(Predicate::Coll, &["C", "A", "B"]).to_string(), "coll(A,B,C)");
    }

    #[test]
    fn para_sorts_pairs_then_pairs() {
        assert_eq!(f(Predicate::Para, &["C", "D", "B", "A"]).to_string(), "para(A,B,C,D)");
    }

    #[test]
    fn midp_keeps_midpoint_first() {
        assert_eq!(f(Predicate::Midp, &["M", "B", "A"]).to_string(), "midp(M,A,B)");
    }

    #[test]
    fn arity_mismatch_is_malformed() {
        let err = Fact::parse_parts(Predicate::Cyclic, &["A", "B"]).unwrap_err();
        assert_eq!(
            err,
            MalformedFact::Arity {
                predicate: Predicate::Cyclic,
                expected: 4,
                found: 2
            }
        );
    }

    #[test]
    fn group_orders() {
        let sizes: Vec<usize> = Predicate::ALL
            .iter()
            .map(|p| symmetry_group(*p).len())
            .collect();
        assert_eq!(sizes, vec![6, 8, 8, 2, 8, 64, 24]);
    }

    #[test]
    fn parses_both_spellings() {
        let a: Fact = "cyclic D G E F".parse().unwrap();
        let b: Fact = "cyclic(D,E,F,G)".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_script(), "cyclic D E F G");
        assert!("cyclic D E F".parse::<Fact>().is_err());
        assert!("area A B C".parse::<Fact>().is_err());
        assert!("".parse::<Fact>().is_err());
    }

    #[test]
    fn degeneracy() {
        assert!(f(Predicate::Coll, &["A", "A", "B"]).is_degenerate());
        assert!(f(Predicate::Cong, &["A", "B", "B", "A"]).is_degenerate());
        assert!(!f(Predicate::Cong, &["A", "B", "A", "C"]).is_degenerate());
        assert!(f(Predicate::Eqangle, &["A", "B", "C", "D", "B", "A", "D", "C"]).is_degenerate());
        assert!(!f(Predicate::Eqangle, &["A", "B", "C", "D", "E", "F", "G", "H"]).is_degenerate());
    }
}
