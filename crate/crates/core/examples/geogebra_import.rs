//! Imports a GeoGebra construction (points, midpoints, lines, intersections)
//! and proves a property of it.
//!
//!     cargo run --example geogebra_import [file.xml]

use gddx::gdd::{prove, RuleBase, SaturationLimits};
use gddx::io::{import_ggb_subset, serialize_gcs};
use gddx::model::Goal;

fn main() {
    let xml = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable file"),
        None => include_str!("../fixtures/midline.xml").to_string(),
    };
    let c = match import_ggb_subset(&xml) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("import failed: {e}");
            std::process::exit(2);
        }
    };
    println!("imported as:\n{}", serialize_gcs(&c));
    let goal = Goal::selected("para E F A B".parse().unwrap());
    let out = prove(&c, &goal, &RuleBase::baseline(), 0, &SaturationLimits::default()).unwrap();
    println!("{}: {}", goal.fact, if out.is_proved() { "proved" } else { "not proved" });
}
