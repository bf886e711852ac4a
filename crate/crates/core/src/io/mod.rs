//! Reading and writing constructions.

mod gcs;
mod ggb;

pub use gcs::{parse_gcs, serialize_gcs, GcsError, GcsErrorKind};
pub use ggb::{import_ggb_subset, GgbError};
