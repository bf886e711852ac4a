//! Proves that the foot of an altitude lies on the circle through the three
//! side midpoints, then prints the proof as an indented tree.
//!
//!     cargo run --example nine_point

use gddx::gdd::{prove, ProveOutcome, RuleBase, SaturationLimits};
use gddx::i18n::CatalogChain;
use gddx::io::parse_gcs;
use gddx::proof::render_tree;

const SCRIPT: &str = "\
point A
point B
point C
midpoint E B C
midpoint F C A
midpoint G A B
foot D A B C
goal cyclic D E F G
";

fn main() {
    let c = parse_gcs(SCRIPT).expect("valid script");
    let goal = &c.goals()[0];
    match prove(&c, goal, &RuleBase::baseline(), 0, &SaturationLimits::default()).expect("figure is not degenerate") {
        ProveOutcome::Proved { dag, fact_count } => {
            println!("{} proved with {} of {fact_count} facts\n", goal.fact, dag.len());
            print!("{}", render_tree(&dag, &CatalogChain::english(), true));
        }
        ProveOutcome::NotProved { numerically_true, .. } => {
            println!("not proved (holds on the diagram: {numerically_true})");
        }
    }
}
