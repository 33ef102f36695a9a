//! Exact construction and certification of weighted linear chains.
//!
//! Everything runs over `BigRational`; floating point only appears in
//! eigenvectors and transition amplitudes used as numeric cross-checks.

pub mod chain;
pub mod cospec;
pub mod io;
pub mod opsbuild;
pub mod poly;
pub mod pst;
pub mod pte;
