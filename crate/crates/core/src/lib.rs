//! Doob graphs `D(m,n)` and maximum distance separable codes in them.

pub mod algebra;
pub mod appendix;
pub mod classification;
pub mod error;
pub mod format;
pub mod cocliques;
pub mod codes;
pub mod graphs;
pub mod search;

pub use error::{Error, Result};
