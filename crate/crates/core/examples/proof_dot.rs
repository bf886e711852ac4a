//! Writes the nine-point proof as GraphViz. Shared lemmas appear once with
//! several outgoing edges.
//!
//!     cargo run --example proof_dot > proof.dot && dot -Tsvg proof.dot -o proof.svg

use gddx::gdd::{prove, ProveOutcome, RuleBase, SaturationLimits};
use gddx::i18n::CatalogChain;
use gddx::io::parse_gcs;
use gddx::proof::export_dot;

fn main() {
    let c = parse_gcs(include_str!("../fixtures/ninepoint.gcs")).unwrap();
    let out = prove(&c, &c.goals()[0], &RuleBase::baseline(), 0, &SaturationLimits::default()).unwrap();
    let ProveOutcome::Proved { dag, .. } = out else {
        eprintln!("not proved");
        std::process::exit(1);
    };
    for n in dag.nodes().iter().filter(|n| dag.out_degree(n.index) >= 2) {
        eprintln!("node {} is used {} times: {}", n.index, dag.out_degree(n.index), n.fact);
    }
    print!("{}", export_dot(&dag, &CatalogChain::english()));
}
