//! Command-line front end for `normk-core`: reports, scans and seeded checks.

pub mod report;
pub mod scan;
pub mod verify;
