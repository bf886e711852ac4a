//! Data-driven rule bases.
//!
//! ```text
//! rule midp_cong
//! given midp(m,a,b)
//! conclude cong(m,a,m,b)
//! phrase midpoint splits segment equally
//! ```
//!
//! Blank lines and `#` comments are ignored. A file may start with `name`
//! and `version` lines.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::saturate::MAX_RULE_VARIABLES;
use crate::model::Predicate;

/// The rule id and phrase key given to hypotheses.
pub const HYPOTHESIS: &str = "hypothesis";
pub const HYPOTHESIS_PHRASE: &str = "by HYP";
/// Phrase key for merges of equivalence classes when no closure rule of the
/// predicate exists in the rule base.
pub const TRANSITIVITY_PHRASE: &str = "by transitivity";

/// Baseline rules compiled into the library.
pub const BASELINE_RULES: &str = include_str!("../../rules/baseline.rules");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pattern {
    pub predicate: Predicate,
    /// Indices into [`Rule::variables`].
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub id: String,
    pub variables: Vec<String>,
    pub antecedents: Vec<Pattern>,
    pub consequent: Pattern,
    pub distinct: Vec<(usize, usize)>,
    pub phrase_key: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleBase {
    pub name: String,
    pub version: String,
    pub rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleErrorKind {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("consequent variable `{0}` does not occur in any antecedent")]
    UnboundVariable(String),
    #[error("duplicate rule id `{0}`")]
    DuplicateId(String),
    #[error("{predicate} takes {expected} arguments, got {found}")]
    Arity {
        predicate: Predicate,
        expected: usize,
        found: usize,
    },
    #[error("`{0}` is not a pattern variable (lowercase letters, digits, `_`)")]
    BadVariable(String),
    #[error("{0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct RuleError {
    pub line: usize,
    pub kind: RuleErrorKind,
}

impl Pattern {
    fn write(&self, rule: &Rule, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<&str> = self.vars.iter().map(|&v| rule.variables[v].as_str()).collect();
        write!(f, "{}({})", self.predicate, vars.join(","))
    }
}

impl Rule {
    fn var_pairs(&self, p: &Pattern) -> Vec<[usize; 2]> {
        p.vars
            .chunks(2)
            .map(|c| if c[0] <= c[1] { [c[0], c[1]] } else { [c[1], c[0]] })
            .collect()
    }

    /// The predicate this rule merely states transitivity for, if it has
    /// the shape `P(x,y), P(y,z) -> P(x,z)` over segments or angles.
    /// Such rules label class merges instead of being matched.
    pub fn closure_predicate(&self) -> Option<Predicate> {
        let p = self.consequent.predicate;
        if !matches!(p, Predicate::Para | Predicate::Cong | Predicate::Eqangle)
            || self.antecedents.len() != 2
            || self.antecedents.iter().any(|a| a.predicate != p)
            || !self.distinct.is_empty()
        {
            return None;
        }
        let width = if p == Predicate::Eqangle { 2 } else { 1 };
        let items = |pat: &Pattern| -> Vec<Vec<[usize; 2]>> {
            self.var_pairs(pat).chunks(width).map(<[_]>::to_vec).collect()
        };
        let (x, y, z) = (
            items(&self.antecedents[0]),
            items(&self.antecedents[1]),
            items(&self.consequent),
        );
        for i in 0..2 {
            for j in 0..2 {
                if x[i] == y[j] {
                    let mut ends = [&x[1 - i], &y[1 - j]];
                    let mut want = [&z[0], &z[1]];
                    ends.sort();
                    want.sort();
                    if ends == want && x[1 - i] != y[1 - j] {
                        return Some(p);
                    }
                }
            }
        }
        None
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rule {}", self.id)?;
        f.write_str("given ")?;
        for (i, a) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            a.write(self, f)?;
        }
        f.write_str("\nconclude ")?;
        self.consequent.write(self, f)?;
        writeln!(f, "\nphrase {}", self.phrase_key)?;
        for &(v, w) in &self.distinct {
            writeln!(f, "distinct {} {}", self.variables[v], self.variables[w])?;
        }
        Ok(())
    }
}

impl fmt::Display for RuleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name {}", self.name)?;
        writeln!(f, "version {}", self.version)?;
        for r in &self.rules {
            writeln!(f)?;
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl RuleBase {
    pub fn baseline() -> Self {
        load_rules(BASELINE_RULES).expect("shipped rule file is valid")
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }
}

fn is_variable(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Default)]
struct Draft {
    line: usize,
    id: String,
    variables: Vec<String>,
    given: Option<Vec<Pattern>>,
    conclude: Option<(Pattern, usize)>,
    phrase: Option<String>,
    distinct: Vec<(usize, usize)>,
}

impl Draft {
    fn var(&mut self, name: &str, line: usize) -> Result<usize, RuleError> {
        if !is_variable(name) {
            return Err(RuleError {
                line,
                kind: RuleErrorKind::BadVariable(name.to_string()),
            });
        }
        Ok(match self.variables.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                self.variables.push(name.to_string());
                self.variables.len() - 1
            }
        })
    }

    fn patterns(&mut self, text: &str, line: usize) -> Result<Vec<Pattern>, RuleError> {
        let syntax = |msg: &str| RuleError {
            line,
            kind: RuleErrorKind::Syntax(msg.to_string()),
        };
        let mut out = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| syntax("expected `pred(v1,...)`"))?;
            let close = rest.find(')').ok_or_else(|| syntax("missing `)`"))?;
            if close < open {
                return Err(syntax("unbalanced parentheses"));
            }
            let name = rest[..open].trim();
            let predicate = Predicate::from_name(name).ok_or_else(|| RuleError {
                line,
                kind: RuleErrorKind::UnknownPredicate(name.to_string()),
            })?;
            let args: Vec<&str> = rest[open + 1..close].split(',').map(str::trim).collect();
            if args.len() != predicate.arity() {
                return Err(RuleError {
                    line,
                    kind: RuleErrorKind::Arity {
                        predicate,
                        expected: predicate.arity(),
                        found: args.len(),
                    },
                });
            }
            let vars = args
                .iter()
                .map(|a| self.var(a, line))
                .collect::<Result<_, _>>()?;
            out.push(Pattern { predicate, vars });
            rest = rest[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(syntax("trailing comma"));
                }
            } else if !rest.is_empty() {
                return Err(syntax("expected `,` between facts"));
            }
        }
        if out.is_empty() {
            return Err(syntax("expected at least one fact"));
        }
        Ok(out)
    }

    fn finish(self) -> Result<Rule, RuleError> {
        let missing = |what: &str| RuleError {
            line: self.line,
            kind: RuleErrorKind::Syntax(format!("rule `{}` has no `{what}` line", self.id)),
        };
        let antecedents = self.given.clone().ok_or_else(|| missing("given"))?;
        let (consequent, conclude_line) = self.conclude.clone().ok_or_else(|| missing("conclude"))?;
        let phrase_key = self.phrase.clone().ok_or_else(|| missing("phrase"))?;
        if self.variables.len() > MAX_RULE_VARIABLES {
            return Err(RuleError {
                line: self.line,
                kind: RuleErrorKind::Syntax(format!(
                    "rule `{}` uses more than {MAX_RULE_VARIABLES} variables",
                    self.id
                )),
            });
        }
        let bound: HashSet<usize> = antecedents.iter().flat_map(|a| a.vars.iter().copied()).collect();
        for &v in consequent.vars.iter().chain(self.distinct.iter().flat_map(|(a, b)| [a, b])) {
            if !bound.contains(&v) {
                return Err(RuleError {
                    line: conclude_line,
                    kind: RuleErrorKind::UnboundVariable(self.variables[v].clone()),
                });
            }
        }
        Ok(Rule {
            id: self.id,
            variables: self.variables,
            antecedents,
            consequent,
            distinct: self.distinct,
            phrase_key,
        })
    }
}

pub fn load_rules(text: &str) -> Result<RuleBase, RuleError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut rb = RuleBase {
        name: "unnamed".into(),
        version: "0".into(),
        rules: Vec::new(),
    };
    let mut ids: HashSet<String> = HashSet::new();
    let mut draft: Option<Draft> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        let syntax = |msg: String| RuleError {
            line,
            kind: RuleErrorKind::Syntax(msg),
        };
        let duplicate = |what: &str| syntax(format!("second `{what}` line in one rule"));
        match (keyword, draft.as_mut()) {
            ("rule", _) => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(syntax("expected `rule <id>`".into()));
                }
                if let Some(d) = draft.take() {
                    rb.rules.push(d.finish()?);
                }
                if !ids.insert(rest.to_string()) {
                    return Err(RuleError {
                        line,
                        kind: RuleErrorKind::DuplicateId(rest.to_string()),
                    });
                }
                draft = Some(Draft {
                    line,
                    id: rest.to_string(),
                    ..Draft::default()
                });
            }
            ("name", None) if !rest.is_empty() => rb.name = rest.to_string(),
            ("version", None) if !rest.is_empty() => rb.version = rest.to_string(),
            ("given", Some(d)) => {
                if d.given.is_some() {
                    return Err(duplicate("given"));
                }
                d.given = Some(d.patterns(rest, line)?);
            }
            ("conclude", Some(d)) => {
                if d.conclude.is_some() {
                    return Err(duplicate("conclude"));
                }
                let mut ps = d.patterns(rest, line)?;
                if ps.len() != 1 {
                    return Err(syntax("`conclude` takes exactly one fact".into()));
                }
                d.conclude = Some((ps.remove(0), line));
            }
            ("phrase", Some(d)) if !rest.is_empty() => {
                if d.phrase.is_some() {
                    return Err(duplicate("phrase"));
                }
                d.phrase = Some(rest.to_string());
            }
            ("distinct", Some(d)) => {
                let vs: Vec<&str> = rest.split_whitespace().collect();
                if vs.len() != 2 {
                    return Err(syntax("expected `distinct <v> <w>`".into()));
                }
                let (a, b) = (d.var(vs[0], line)?, d.var(vs[1], line)?);
                d.distinct.push((a, b));
            }
            _ => {
                return Err(syntax(format!(
                    "unexpected `{keyword}`; expected rule, given, conclude, phrase or distinct"
                )))
            }
        }
    }
    if let Some(d) = draft {
        rb.rules.push(d.finish()?);
    }
    Ok(rb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_loads() {
        let rb = RuleBase::baseline();
        assert!(rb.rules.len() >= 14);
        assert_eq!(rb.name, "baseline");
    }

    #[test]
    fn unbound_consequent_variable() {
        let err = load_rules("rule r\ngiven midp(m,a,b)\nconclude cong(m,a,m,z)\nphrase x\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.kind, RuleErrorKind::UnboundVariable("z".into()));
    }

    #[test]
    fn duplicate_id() {
        let one = "rule d_midline\ngiven midp(m,a,b)\nconclude coll(m,a,b)\nphrase p\n";
        let err = load_rules(&format!("{one}\n{one}")).unwrap_err();
        assert_eq!(err, RuleError { line: 6, kind: RuleErrorKind::DuplicateId("d_midline".into()) });
    }

    #[test]
    fn unknown_predicate_and_arity() {
        let err = load_rules("rule r\ngiven area(a,b,c)\n").unwrap_err();
        assert_eq!(err.kind, RuleErrorKind::UnknownPredicate("area".into()));
        let err = load_rules("rule r\ngiven coll(a,b)\n").unwrap_err();
        assert!(matches!(err.kind, RuleErrorKind::Arity { expected: 3, found: 2, .. }));
    }

    #[test]
    fn incomplete_rule() {
        let err = load_rules("rule r\ngiven coll(a,b,c)\nphrase p\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn display_round_trips() {
        let rb = RuleBase::baseline();
        assert_eq!(load_rules(&rb.to_string()).unwrap(), rb);
    }

    #[test]
    fn closure_shapes() {
        let rb = RuleBase::baseline();
        let closures: Vec<_> = rb.rules.iter().filter_map(|r| r.closure_predicate()).collect();
        assert!(closures.contains(&Predicate::Para));
        assert!(closures.contains(&Predicate::Cong));
        assert!(closures.contains(&Predicate::Eqangle));
        assert_eq!(rb.rule("midline").unwrap().closure_predicate(), None);
    }
}
