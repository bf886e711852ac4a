//! Loads a partial translation, shows which phrases fall back to English and
//! what the linter reports.
//!
//!     cargo run --example catalog_lint

use gddx::i18n::{lint, load_catalog, shipped_catalog, CatalogChain, Source};

const FRENCH: &str = "\
# id,key,text[,tooltip]
1,because,car
2,by HYP,par hypothèse
3,Prove ,Démontrer
";

fn main() {
    let en = shipped_catalog("en").unwrap();
    let fr = load_catalog(FRENCH, "fr").expect("well-formed csv");
    let report = lint(std::slice::from_ref(&fr), &en);
    print!("{report}");

    let chain = CatalogChain::new(vec![fr, en]).unwrap();
    for key in ["because", "by HYP", "midp", "not a key"] {
        let (text, from) = chain.resolve(key);
        let from = match from {
            Source::Catalog(lang) => lang.to_string(),
            Source::Key => "raw key".into(),
        };
        println!("{key:>12} -> {text} [{from}]");
    }
}
