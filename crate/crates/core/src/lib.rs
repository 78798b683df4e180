//! Discrete chain homotopy over finite spaces: entourages, Rips complexes,
//! edge-path group presentations, truncated covering balls and
//! covering-relation extraction.

pub mod analysis;
pub mod covering;
pub mod decimal;
pub mod fixtures;
pub mod group;
pub mod homotopy;
pub mod rips;
pub mod oracle;
pub mod space;
pub mod union_find;
