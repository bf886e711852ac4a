//! Geometry theorem proving with a deductive database, Wu's method and
//! localized, structured proof output.

pub mod cli;
pub mod diagram;
pub mod gdd;
pub mod i18n;
pub mod io;
pub mod model;
pub mod proof;
pub mod service;
pub mod wu;
