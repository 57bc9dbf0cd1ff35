//! Exact and certified-numeric evaluation of Euler-type sums over harmonic
//! and semi-harmonic numbers.

pub mod exact;
pub mod symexpr;
pub mod numerics;
pub mod closedform;
pub mod oracle;
pub mod relations;
pub mod cli;
