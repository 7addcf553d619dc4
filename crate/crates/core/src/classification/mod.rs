//! Equivalence classes of MDS codes for small parameters.

pub mod k1;
pub mod k2;
pub mod k3;
pub mod nonexistence;
pub mod theorem;

use crate::codes::Code;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub class_count: usize,
    /// One code per equivalence class.
    pub representatives: Vec<Code>,
}

impl ClassificationResult {
    pub fn new(m: usize, n: usize, k: usize, representatives: Vec<Code>) -> ClassificationResult {
        ClassificationResult {
            m,
            n,
            k,
            d: 2 * m + n + 1 - k,
            class_count: representatives.len(),
            representatives,
        }
    }
}

/// Representatives of every class for the given parameters, dispatching to
/// the construction or nonexistence argument that covers them.
pub fn classify(m: usize, n: usize, k: usize) -> Result<ClassificationResult> {
    let len = 2 * m + n;
    if m == 0 || k == 0 || k >= len {
        return Err(Error::Unsupported(format!(
            "classification needs m >= 1 and 1 <= k < 2m+n, got D({m},{n}), k = {k}"
        )));
    }
    let d = len + 1 - k;
    let none = || Ok(ClassificationResult::new(m, n, k, vec![]));
    match (m, n, k) {
        _ if k == 1 => k1::classify_k1(m, n),
        (2, 0, 2) | (1, 2, 2) | (2, 1, 2) | (1, 3, 2) => k2::classify_k2(m, n),
        (2, 1, 3) | (1, 3, 3) | (2, 2, 3) | (1, 4, 3) => k3::classify_k3(m, n),
        _ if d == 3 && nonexistence::check_sphere_packing_d3(m, n).excluded => none(),
        (3, 0, 3) => match nonexistence::check_304(crate::search::DEFAULT_NODE_BUDGET)?.verdict {
            nonexistence::Verdict::Nonexistent => none(),
            v => Err(Error::Structure(format!("(3+0,4^3,4) check returned {v:?}"))),
        },
        _ if len == 6 && k == 2 => match nonexistence::check_n6d5(crate::search::DEFAULT_NODE_BUDGET)?.verdict {
            nonexistence::Verdict::Nonexistent => none(),
            v => Err(Error::Structure(format!("distance-5 check returned {v:?}"))),
        },
        _ if len > 6 && d > 2 && d < len => {
            let (steps, base) = theorem::reduction_chain(m, n, k)
                .ok_or_else(|| Error::Structure("no reduction found".into()))?;
            if !steps.iter().all(theorem::ReductionStep::is_valid) {
                return Err(Error::Structure("invalid reduction".into()));
            }
            let ok = match base {
                theorem::BaseCase::SpherePacking => true,
                theorem::BaseCase::NoCode304 => {
                    nonexistence::check_304(crate::search::DEFAULT_NODE_BUDGET)?.verdict == nonexistence::Verdict::Nonexistent
                }
                theorem::BaseCase::EdgeCount => {
                    nonexistence::check_n6d5(crate::search::DEFAULT_NODE_BUDGET)?.verdict == nonexistence::Verdict::Nonexistent
                }
            };
            if ok {
                none()
            } else {
                Err(Error::Structure("base case of the reduction did not close".into()))
            }
        }
        _ => Err(Error::Unsupported(format!(
            "no classification for D({m},{n}) with k = {k}"
        ))),
    }
}
