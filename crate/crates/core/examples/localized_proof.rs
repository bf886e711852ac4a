//! Renders the same proof in every shipped language, flat and as a tree.
//!
//!     cargo run --example localized_proof

use gddx::gdd::{prove, ProveOutcome, RuleBase, SaturationLimits};
use gddx::i18n::{shipped_languages, CatalogChain};
use gddx::io::parse_gcs;
use gddx::proof::render_tree;

fn main() {
    let c = parse_gcs(include_str!("../fixtures/right_median.gcs")).unwrap();
    let out = prove(&c, &c.goals()[0], &RuleBase::baseline(), 0, &SaturationLimits::default()).unwrap();
    let ProveOutcome::Proved { dag, .. } = out else { unreachable!() };
    for lang in shipped_languages() {
        let chain = CatalogChain::for_language(lang).unwrap();
        println!("== {lang} (tree)\n{}", render_tree(&dag, &chain, true));
        println!("== {lang} (flat)\n{}", render_tree(&dag, &chain, false));
    }
}
