//! Wu's method on the midline theorem: triangulate the hypotheses,
//! reduce the conclusion to zero and list the non-degeneracy conditions.
//!
//!     cargo run --example wu_midline

use gddx::i18n::CatalogChain;
use gddx::io::parse_gcs;
use gddx::wu::{wu_prove, Verdict};

fn main() {
    let c = parse_gcs(include_str!("../fixtures/midline.gcs")).unwrap();
    let out = wu_prove(&c, &c.goals()[0]).expect("translatable goal");
    println!("variables: {}", out.translation.variables.join(", "));
    for (i, h) in out.triangular.polys.iter().enumerate() {
        println!("T{}: {} = 0", i + 1, out.display(h));
    }
    println!();
    print!("{}", out.render(&CatalogChain::english()));
    assert_eq!(out.verdict, Verdict::Proved);
}
