//! Lists properties that hold in a figure without being constructed, then
//! proves the first one that needs a real argument.
//!
//!     cargo run --example detect_properties

use gddx::gdd::{prove, ProveOutcome, RuleBase, SaturationLimits};
use gddx::io::parse_gcs;
use gddx::model::Goal;
use gddx::service::detect;

fn main() {
    let c = parse_gcs("point A\npoint B\npoint C\nmidpoint E C A\nmidpoint F C B\n").unwrap();
    let found = detect(&c, 0).unwrap();
    let rules = RuleBase::baseline();
    for (i, f) in found.iter().enumerate() {
        let out = prove(&c, &Goal::selected(f.clone()), &rules, 0, &SaturationLimits::default()).unwrap();
        let verdict = match out {
            ProveOutcome::Proved { dag, .. } => format!("proved in {} steps", dag.len()),
            ProveOutcome::NotProved { .. } => "not proved".into(),
        };
        println!("{:>2}. {:<24} {verdict}", i + 1, f.to_string());
    }
}
