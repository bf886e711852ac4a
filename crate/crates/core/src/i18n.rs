//! Phrase catalogs: one CSV file per language, looked up by English key.
//!
//! Records are `id,key,text[,tooltip]`. The id is kept as metadata only;
//! lookups go through the key.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub const BASELINE_LANGUAGE: &str = "en";

const SHIPPED: [(&str, &str); 2] = [
    ("en", include_str!("../i18n/en.csv")),
    ("de", include_str!("../i18n/de.csv")),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: u32,
    pub key: String,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tooltip: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Catalog {
    pub language: String,
    entries: Vec<CatalogEntry>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogErrorKind {
    #[error("id `{0}` is not a non-negative integer")]
    Id(String),
    #[error("duplicate key `{key}` (first defined on line {first})")]
    DuplicateKey { key: String, first: usize },
    #[error("expected `id,key,text[,tooltip]`, found {0} field(s)")]
    Fields(usize),
    #[error("empty key")]
    EmptyKey,
    #[error("{0}")]
    Csv(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct CatalogError {
    pub line: usize,
    pub kind: CatalogErrorKind,
}

impl Catalog {
    pub fn get(&self, key: &str) -> Option<&CatalogEntry> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.key.as_str())
    }

    /// Writes the catalog back as CSV; `load_catalog` of the result
    /// reproduces the entries.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for e in &self.entries {
            let id = e.id.to_string();
            let mut rec = vec![id.as_str(), e.key.as_str(), e.text.as_str()];
            if let Some(t) = &e.tooltip {
                rec.push(t);
            }
            w.write_record(&rec).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("input was UTF-8")
    }
}

pub fn load_catalog(csv_text: &str, language: &str) -> Result<Catalog, CatalogError> {
    let text = csv_text.strip_prefix('\u{feff}').unwrap_or(csv_text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut cat = Catalog {
        language: language.to_string(),
        entries: Vec::new(),
        index: HashMap::new(),
    };
    let mut lines: Vec<usize> = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| CatalogError {
            line: e.position().map_or(0, |p| p.line() as usize),
            kind: CatalogErrorKind::Csv(e.to_string()),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let err = |kind| CatalogError { line, kind };
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        if !(3..=4).contains(&record.len()) {
            return Err(err(CatalogErrorKind::Fields(record.len())));
        }
        let id = record[0]
            .trim()
            .parse::<u32>()
            .map_err(|_| err(CatalogErrorKind::Id(record[0].to_string())))?;
        let key = record[1].to_string();
        if key.is_empty() {
            return Err(err(CatalogErrorKind::EmptyKey));
        }
        if let Some(&first) = cat.index.get(&key) {
            return Err(err(CatalogErrorKind::DuplicateKey {
                key,
                first: lines[first],
            }));
        }
        cat.index.insert(key.clone(), cat.entries.len());
        lines.push(line);
        cat.entries.push(CatalogEntry {
            id,
            key,
            text: record[2].to_string(),
            tooltip: record.get(3).filter(|t| !t.is_empty()).map(str::to_string),
        });
    }
    Ok(cat)
}

/// Languages with a catalog compiled into the library.
pub fn shipped_languages() -> impl Iterator<Item = &'static str> {
    SHIPPED.iter().map(|(lang, _)| *lang)
}

pub fn shipped_catalog(language: &str) -> Option<Catalog> {
    SHIPPED
        .iter()
        .find(|(lang, _)| *lang == language)
        .map(|(lang, text)| load_catalog(text, lang).expect("shipped catalog is valid"))
}

/// Catalogs consulted in order; the last one is English.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogChain {
    catalogs: Vec<Catalog>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("a catalog chain must end with the English catalog")]
pub struct ChainError;

/// Where a looked-up phrase came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source<'a> {
    Catalog(&'a str),
    /// No catalog had the key; the key itself was returned.
    Key,
}

impl CatalogChain {
    pub fn new(catalogs: Vec<Catalog>) -> Result<Self, ChainError> {
        match catalogs.last() {
            Some(c) if c.language == BASELINE_LANGUAGE => Ok(Self { catalogs }),
            _ => Err(ChainError),
        }
    }

    pub fn english() -> Self {
        Self {
            catalogs: vec![shipped_catalog(BASELINE_LANGUAGE).expect("English ships")],
        }
    }

    /// Chain for a shipped language: `de-AT` tries `de-AT`, `de`, then
    /// English. `None` if neither the tag nor its primary subtag ships.
    pub fn for_language(tag: &str) -> Option<Self> {
        let mut catalogs = Vec::new();
        let primary = tag.split(['-', '_']).next().unwrap_or(tag);
        for lang in [tag, primary] {
            if lang != BASELINE_LANGUAGE && catalogs.iter().all(|c: &Catalog| c.language != lang) {
                catalogs.extend(shipped_catalog(lang));
            }
        }
        if catalogs.is_empty() && primary != BASELINE_LANGUAGE {
            return None;
        }
        catalogs.push(shipped_catalog(BASELINE_LANGUAGE).expect("English ships"));
        Some(Self { catalogs })
    }

    pub fn language(&self) -> &str {
        &self.catalogs[0].language
    }

    pub fn catalogs(&self) -> &[Catalog] {
        &self.catalogs
    }

    pub fn resolve<'a>(&'a self, key: &'a str) -> (&'a str, Source<'a>) {
        self.catalogs
            .iter()
            .find_map(|c| c.get(key).map(|e| (e.text.as_str(), Source::Catalog(&c.language))))
            .unwrap_or((key, Source::Key))
    }

    pub fn tooltip(&self, key: &str) -> Option<&str> {
        self.catalogs
            .iter()
            .find_map(|c| c.get(key))
            .and_then(|e| e.tooltip.as_deref())
    }
}

/// The phrase for `key`: first catalog that has it, else the key itself.
pub fn lookup<'a>(chain: &'a CatalogChain, key: &'a str) -> &'a str {
    chain.resolve(key).0
}

/// Fills `{0}`, `{1}`, ... slots.
pub fn fill(text: &str, args: &[&str]) -> String {
    let mut out = text.to_string();
    for (i, a) in args.iter().enumerate() {
        out = out.replace(&format!("{{{i}}}"), a);
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CatalogFindings {
    pub language: String,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    pub empty: Vec<String>,
    /// `(key in catalog, baseline key it probably means)`.
    pub near_miss: Vec<(String, String)>,
}

impl CatalogFindings {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.empty.is_empty() && self.near_miss.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LintReport {
    pub catalogs: Vec<CatalogFindings>,
}

impl LintReport {
    pub fn is_clean(&self) -> bool {
        self.catalogs.iter().all(CatalogFindings::is_clean)
    }

    /// Process exit status: 0 clean, 1 findings.
    pub fn status(&self) -> i32 {
        i32::from(!self.is_clean())
    }
}

impl fmt::Display for LintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.catalogs {
            if c.is_clean() {
                writeln!(f, "{}: ok", c.language)?;
                continue;
            }
            for k in &c.missing {
                writeln!(f, "{}: missing key {k:?}", c.language)?;
            }
            for k in &c.extra {
                writeln!(f, "{}: extra key {k:?}", c.language)?;
            }
            for k in &c.empty {
                writeln!(f, "{}: empty text for key {k:?}", c.language)?;
            }
            for (k, b) in &c.near_miss {
                writeln!(f, "{}: key {k:?} looks like baseline key {b:?}", c.language)?;
            }
        }
        Ok(())
    }
}

fn normalize(key: &str) -> String {
    key.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

pub fn lint(catalogs: &[Catalog], baseline: &Catalog) -> LintReport {
    let by_norm: HashMap<String, &str> = baseline.keys().map(|k| (normalize(k), k)).collect();
    let mut report = LintReport::default();
    for cat in catalogs {
        let mut findings = CatalogFindings {
            language: cat.language.clone(),
            ..Default::default()
        };
        let mut matched: Vec<&str> = Vec::new();
        for e in cat.entries() {
            if e.text.trim().is_empty() {
                findings.empty.push(e.key.clone());
            }
            if baseline.get(&e.key).is_some() {
                continue;
            }
            match by_norm.get(&normalize(&e.key)) {
                Some(&b) if cat.get(b).is_none() => {
                    findings.near_miss.push((e.key.clone(), b.to_string()));
                    matched.push(b);
                }
                _ => findings.extra.push(e.key.clone()),
            }
        }
        findings.missing = baseline
            .keys()
            .filter(|k| cat.get(k).is_none() && !matched.contains(k))
            .map(str::to_string)
            .collect();
        report.catalogs.push(findings);
    }
    report
}
