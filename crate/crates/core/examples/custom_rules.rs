//! Extends the baseline rule base with an extra rule read from text and
//! shows it is used.
//!
//!     cargo run --example custom_rules

use gddx::gdd::{load_rules, prove, RuleBase, SaturationLimits, BASELINE_RULES};
use gddx::io::parse_gcs;

const EXTRA: &str = "
rule perp_sym
  given perp(a,b,c,d)
  conclude perp(c,d,a,b)
  phrase perpendicular lines
";

fn main() {
    let rules = load_rules(&format!("{BASELINE_RULES}{EXTRA}")).expect("valid rule file");
    println!("{} {} with {} rules (baseline has {})", rules.name, rules.version, rules.rules.len(), RuleBase::baseline().rules.len());
    println!("{}", rules.rule("perp_sym").unwrap());

    let c = parse_gcs(include_str!("../fixtures/isosceles.gcs")).unwrap();
    let out = prove(&c, &c.goals()[0], &rules, 0, &SaturationLimits::default()).unwrap();
    println!("{}: proved = {}, {} facts", c.goals()[0].fact, out.is_proved(), out.fact_count());
}
