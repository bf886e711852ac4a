mod common;

use std::path::Path;

use gddx::cli;
use gddx::gdd::{prove, ProveOutcome, RuleBase, SaturationLimits};
use gddx::i18n::{load_catalog, lookup, shipped_catalog, shipped_languages, Catalog, CatalogChain, Source};
use gddx::proof::{render_tree, ProofDag};
use gddx::wu::wu_prove;
use proptest::prelude::*;

const PROVED: [&str; 5] = ["ninepoint.gcs", "midline.gcs", "isosceles.gcs", "right_median.gcs", "varignon.gcs"];

fn dag(name: &str) -> ProofDag {
    let c = common::construction(name);
    match prove(&c, &c.goals()[0], &RuleBase::baseline(), 0, &SaturationLimits::default()).unwrap() {
        ProveOutcome::Proved { dag, .. } => dag,
        _ => panic!("{name}"),
    }
}

/// Catalog keys a rendering of `dag` looks up.
fn keys_used(dag: &ProofDag) -> Vec<String> {
    let mut keys: Vec<String> = vec!["because".into()];
    for n in dag.nodes() {
        keys.push(n.reason.clone());
        keys.push(n.fact.predicate().name().to_string());
    }
    keys.sort();
    keys.dedup();
    keys
}

#[test]
fn german_nine_point_has_no_english_leftovers() {
    let de = CatalogChain::for_language("de").unwrap();
    let en = shipped_catalog("en").unwrap();
    let dag = dag("ninepoint.gcs");
    let text = render_tree(&dag, &de, true) + &render_tree(&dag, &de, false);
    for key in keys_used(&dag) {
        assert_eq!(de.resolve(&key).1, Source::Catalog("de"), "{key} falls back");
        let english = &en.get(&key).unwrap().text;
        let german = lookup(&de, &key);
        if english != german && english.len() > 4 {
            assert!(!text.contains(english.as_str()), "English phrase {english:?} in German output");
        }
    }
    assert!(text.contains("nach Voraussetzung"));
    assert!(!text.contains("by HYP"));
}

#[test]
fn shipped_renderings_only_use_baseline_keys() {
    let en = shipped_catalog("en").unwrap();
    for name in PROVED {
        for key in keys_used(&dag(name)) {
            assert!(en.get(&key).is_some(), "{name}: {key} missing from English");
        }
    }
    for name in ["midline.gcs", "right_median.gcs", "ninepoint.gcs"] {
        let c = common::construction(name);
        let out = wu_prove(&c, &c.goals()[0]).unwrap();
        for n in &out.ndgs {
            if let Some(r) = &n.reading {
                assert!(en.get(&r.key).is_some(), "{}", r.key);
            }
        }
    }
    for lang in shipped_languages() {
        let chain = CatalogChain::for_language(lang).unwrap();
        for key in ["proved", "not proved", "false on diagram", "true on diagram but not derived", "Non-degeneracy conditions"] {
            assert!(en.get(key).is_some());
            assert!(matches!(chain.resolve(key).1, Source::Catalog(_)));
        }
    }
}

fn copy_catalogs(to: &Path) {
    for lang in shipped_languages() {
        let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("i18n").join(format!("{lang}.csv"));
        std::fs::copy(src, to.join(format!("{lang}.csv"))).unwrap();
    }
}

fn lint(dir: &Path) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(["gddx", "i18n-lint", dir.to_str().unwrap()], &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

#[test]
fn removing_a_german_key_fails_lint() {
    let dir = tempfile::tempdir().unwrap();
    copy_catalogs(dir.path());
    assert_eq!(lint(dir.path()).0, 0);

    let de_path = dir.path().join("de.csv");
    let de = std::fs::read_to_string(&de_path).unwrap();
    for key in ["because", "by HYP", "median to the hypotenuse"] {
        let pruned: String = de
            .lines()
            .filter(|l| l.split(',').nth(1) != Some(key))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_ne!(pruned, de, "{key} not in the German file");
        std::fs::write(&de_path, &pruned).unwrap();
        let (code, report) = lint(dir.path());
        assert_eq!(code, 1);
        assert!(report.contains(&format!("missing key {key:?}")), "{report}");
    }
}

#[test]
fn lint_without_baseline_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("de.csv"), "1,coll,kollinear\n").unwrap();
    let (code, msg) = lint(dir.path());
    assert_eq!(code, 2);
    assert!(msg.contains("en.csv"));
}

#[test]
fn regional_tag_falls_back_through_primary_language() {
    let chain = CatalogChain::for_language("de-AT").unwrap();
    assert_eq!(chain.resolve("because"), ("weil", Source::Catalog("de")));
    assert!(CatalogChain::for_language("zz").is_none());
    let partial = load_catalog("1,because,weil\n", "de").unwrap();
    let chain = CatalogChain::new(vec![partial, shipped_catalog("en").unwrap()]).unwrap();
    assert_eq!(chain.resolve("by HYP"), ("by HYP", Source::Catalog("en")));
    assert_eq!(chain.resolve("no such key"), ("no such key", Source::Key));
}

fn entry() -> impl Strategy<Value = (u32, String, String, Option<String>)> {
    (
        any::<u32>(),
        "[A-Za-z][A-Za-z ,\"]{0,12}",
        "[^\u{0}\r\n]{1,20}",
        prop::option::of("[^\u{0}\r\n]{1,20}"),
    )
}

proptest! {
    #[test]
    fn lookup_is_total(key in any::<String>(), lang in prop::sample::select(vec!["en", "de", "de-CH", "en-GB"])) {
        let chain = CatalogChain::for_language(lang).unwrap();
        let text = lookup(&chain, &key);
        match chain.resolve(&key).1 {
            Source::Key => prop_assert_eq!(text, key.as_str()),
            Source::Catalog(_) => prop_assert!(chain.catalogs().iter().any(|c| c.get(&key).is_some())),
        }
    }

    #[test]
    fn catalog_csv_round_trip(entries in prop::collection::vec(entry(), 0..12)) {
        let mut csv_text = String::new();
        let mut seen = std::collections::HashSet::new();
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        for (id, key, text, tip) in &entries {
            if key.trim().is_empty() || key.starts_with('#') || !seen.insert(key.clone()) || text.trim().is_empty() {
                continue;
            }
            let mut rec = vec![id.to_string(), key.clone(), text.clone()];
            rec.extend(tip.clone());
            w.write_record(&rec).unwrap();
        }
        csv_text.push_str(&String::from_utf8(w.into_inner().unwrap()).unwrap());
        let cat: Catalog = load_catalog(&csv_text, "xx").unwrap();
        let again = load_catalog(&cat.to_csv(), "xx").unwrap();
        prop_assert_eq!(cat.entries(), again.entries());
    }
}
