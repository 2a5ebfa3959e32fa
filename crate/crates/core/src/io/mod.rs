//! File formats.

pub mod hgr;
pub mod mtx;
