#![allow(dead_code)]

pub mod exact;

use std::path::PathBuf;

use gddx::io::parse_gcs;
use gddx::model::Construction;

/// Seeds used wherever a property must hold "across seeds".
pub const SEEDS: std::ops::Range<u64> = 0..20;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn construction(name: &str) -> Construction {
    parse_gcs(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}
