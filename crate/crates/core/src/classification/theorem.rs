//! Counts of MDS codes up to equivalence for every `D(m,n)` and distance
//! `2 < d < 2m+n`.
//!
//! Lengths up to 6 are settled by construction plus search. Longer lengths
//! reduce, by faces and projections of an assumed code, to a base case that
//! is checked directly.

use serde::Serialize;

use crate::classification::k1::{s_m_bruteforce, s_m_formula};
use crate::classification::nonexistence::{check_304, check_n6d5, check_sphere_packing_d3, Check304Report, N6d5Report, Verdict};
use crate::classification::{classify, ClassificationResult};
use crate::codes::codes_equivalent;
use crate::error::Result;
use crate::search::{search_mds, SearchConfig, SearchStatus, DEFAULT_NODE_BUDGET};

/// Expected class counts: `(m, n, d, count)`.
pub const EXPECTED_COUNTS: [(usize, usize, usize, usize); 14] = [
    (2, 0, 3, 2),
    (1, 2, 3, 1),
    (2, 1, 3, 2),
    (1, 3, 3, 1),
    (2, 2, 3, 0),
    (1, 4, 3, 0),
    (3, 0, 3, 0),
    (2, 0, 4, 4),
    (1, 2, 4, 2),
    (2, 1, 4, 2),
    (1, 3, 4, 1),
    (2, 2, 4, 1),
    (1, 4, 4, 0),
    (3, 0, 4, 0),
];

#[derive(Clone, Debug)]
pub struct TheoremOptions {
    pub max_mn: usize,
    /// Cross-check small cases by generic search.
    pub search: bool,
    pub node_budget: u64,
    pub jobs: usize,
    /// Largest `m` for which the closed form for `k = 1` is compared with
    /// direct enumeration.
    pub s_m_limit: u64,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        TheoremOptions {
            max_mn: 10,
            search: true,
            node_budget: DEFAULT_NODE_BUDGET,
            jobs: 1,
            s_m_limit: 200,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub expected: usize,
    pub constructive: usize,
    pub search: Option<usize>,
    pub search_status: Option<SearchStatus>,
    pub search_nodes: Option<u64>,
    /// Every search representative matches exactly one constructive one.
    pub witnesses_match: Option<bool>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionOp {
    /// Keep the words with fixed values on the removed coordinates.
    Face,
    /// Delete the coordinates.
    Projection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

impl CodeParams {
    pub fn new(m: usize, n: usize, k: usize) -> CodeParams {
        CodeParams {
            m,
            n,
            k,
            d: 2 * m + n + 1 - k,
        }
    }

    pub fn length(&self) -> usize {
        2 * self.m + self.n
    }

    pub fn is_consistent(&self) -> bool {
        self.k >= 1 && self.k <= self.length() && self.d == self.length() + 1 - self.k
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub op: ReductionOp,
    /// Shrikhande coordinates removed.
    pub sh: usize,
    /// K4 coordinates removed.
    pub k4: usize,
    pub from: CodeParams,
    pub to: CodeParams,
}

impl ReductionStep {
    fn new(op: ReductionOp, from: CodeParams, sh: usize, k4: usize) -> Option<ReductionStep> {
        let t = 2 * sh + k4;
        if sh > from.m || k4 > from.n {
            return None;
        }
        let (k, d) = match op {
            ReductionOp::Face if t <= from.k => (from.k - t, from.d),
            ReductionOp::Projection if t < from.d => (from.k, from.d - t),
            _ => return None,
        };
        Some(ReductionStep {
            op,
            sh,
            k4,
            from,
            to: CodeParams {
                m: from.m - sh,
                n: from.n - k4,
                k,
                d,
            },
        })
    }

    /// Faces of weight `t <= k` and projections of weight `t < d` of an MDS
    /// code are MDS with the recorded parameters.
    pub fn is_valid(&self) -> bool {
        ReductionStep::new(self.op, self.from, self.sh, self.k4).as_ref() == Some(self) && self.to.is_consistent()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseCase {
    /// Distance 3 with `2m+n >= 6`.
    SpherePacking,
    /// `(3+0,4^3,4)`.
    NoCode304,
    /// Distance 5, dimension 2, length 6.
    EdgeCount,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionChain {
    pub start: CodeParams,
    pub steps: Vec<ReductionStep>,
    pub base: BaseCase,
    pub pass: bool,
}

impl ReductionChain {
    pub fn end(&self) -> CodeParams {
        self.steps.last().map_or(self.start, |s| s.to)
    }
}

fn push(steps: &mut Vec<ReductionStep>, cur: &mut CodeParams, op: ReductionOp, sh: usize, k4: usize) -> Option<CodeParams> {
    let s = ReductionStep::new(op, *cur, sh, k4)?;
    steps.push(s);
    *cur = s.to;
    Some(s.to)
}

/// Reduction of an assumed code with `2m+n > 6`, `2 < d < 2m+n` to a base
/// case, or `None` when the parameters are outside that range.
pub fn reduction_chain(m: usize, n: usize, k: usize) -> Option<(Vec<ReductionStep>, BaseCase)> {
    let start = CodeParams::new(m, n, k);
    let len = start.length();
    let d = start.d;
    if m == 0 || len <= 6 || d <= 2 || d >= len {
        return None;
    }
    let mut steps = Vec::new();
    let mut cur = start;
    let base = if d == 3 {
        BaseCase::SpherePacking
    } else if d == 4 && n > 0 {
        push(&mut steps, &mut cur, ReductionOp::Projection, 0, 1)?;
        BaseCase::SpherePacking
    } else if n == 0 && k % 2 == 1 {
        // d even: project to distance 4, then fix all but three coordinates
        let p = push(&mut steps, &mut cur, ReductionOp::Projection, (d - 4) / 2, 0)?;
        push(&mut steps, &mut cur, ReductionOp::Face, p.m - 3, 0)?;
        BaseCase::NoCode304
    } else {
        // a face of weight k-2, then a projection down to distance 5,
        // landing on a length-6 space with at least one Shrikhande coordinate
        let plan = (1..=3).rev().find_map(|m6: usize| {
            let n6 = 6 - 2 * m6;
            if m6 > m || n6 > n {
                return None;
            }
            let (rm, rn) = (m - m6, n - n6);
            (0..=rm).find_map(|v1| {
                let w1 = (k - 2).checked_sub(2 * v1)?;
                (w1 <= rn).then(|| (v1, w1, rm - v1, rn - w1))
            })
        })?;
        let (v1, w1, v2, w2) = plan;
        push(&mut steps, &mut cur, ReductionOp::Face, v1, w1)?;
        push(&mut steps, &mut cur, ReductionOp::Projection, v2, w2)?;
        BaseCase::EdgeCount
    };
    Some((steps, base))
}

fn base_matches(p: CodeParams, base: BaseCase) -> bool {
    match base {
        BaseCase::SpherePacking => p.d == 3 && p.length() >= 6 && check_sphere_packing_d3(p.m, p.n).excluded,
        BaseCase::NoCode304 => (p.m, p.n, p.k, p.d) == (3, 0, 3, 4),
        BaseCase::EdgeCount => p.length() == 6 && p.k == 2 && p.d == 5 && p.m >= 1,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub s_m_checked_up_to: u64,
    pub s_m_ok: bool,
    pub table: Vec<TableEntry>,
    pub n6d5: N6d5Report,
    pub check_304: Check304Report,
    pub chains: Vec<ReductionChain>,
    pub pass: bool,
    /// A search ran out of budget; failures are then not conclusive.
    pub inconclusive: bool,
}

fn table_entry(m: usize, n: usize, d: usize, expected: usize, opts: &TheoremOptions) -> Result<TableEntry> {
    let k = 2 * m + n + 1 - d;
    let constructive: ClassificationResult = classify(m, n, k)?;
    let mut e = TableEntry {
        m,
        n,
        k,
        d,
        expected,
        constructive: constructive.class_count,
        search: None,
        search_status: None,
        search_nodes: None,
        witnesses_match: None,
        pass: constructive.class_count == expected,
    };
    if opts.search {
        // no packing shortcut, so the search stands on its own
        let mut cfg = SearchConfig::new(m, n, k)
            .with_budget(opts.node_budget)
            .with_jobs(opts.jobs);
        cfg.sphere_packing_prune = false;
        let out = search_mds(&cfg)?;
        let mut matched = true;
        for s in &out.classes {
            let hits = constructive
                .representatives
                .iter()
                .map(|c| codes_equivalent(s, c).map(|w| w.is_some()))
                .collect::<Result<Vec<bool>>>()?;
            matched &= hits.iter().filter(|&&h| h).count() == 1;
        }
        matched &= out.classes.len() == constructive.class_count;
        e.search = Some(out.classes.len());
        e.search_status = Some(out.status);
        e.search_nodes = Some(out.nodes_visited);
        e.witnesses_match = Some(matched);
        e.pass &= out.status == SearchStatus::Complete && out.classes.len() == expected && matched;
    }
    Ok(e)
}

pub fn verify_main_theorem(opts: &TheoremOptions) -> Result<TheoremReport> {
    let s_m_ok = (0..=opts.s_m_limit).all(|m| s_m_formula(m) == s_m_bruteforce(m));
    let table = EXPECTED_COUNTS
        .iter()
        .map(|&(m, n, d, c)| table_entry(m, n, d, c, opts))
        .collect::<Result<Vec<_>>>()?;
    let n6d5 = check_n6d5(opts.node_budget)?;
    let c304 = check_304(opts.node_budget)?;
    let mut chains = Vec::new();
    for len in 7..=opts.max_mn {
        for m in 1..=len / 2 {
            let n = len - 2 * m;
            for k in 2..len - 1 {
                let start = CodeParams::new(m, n, k);
                let (steps, base) = reduction_chain(m, n, k).expect("every length-7+ case reduces");
                let mut ch = ReductionChain {
                    start,
                    steps,
                    base,
                    pass: false,
                };
                let mut ok = ch.steps.iter().all(ReductionStep::is_valid)
                    && ch.steps.windows(2).all(|w| w[0].to == w[1].from)
                    && ch.steps.first().is_none_or(|s| s.from == start)
                    && base_matches(ch.end(), base);
                ok &= match base {
                    BaseCase::SpherePacking => true,
                    BaseCase::NoCode304 => c304.verdict == Verdict::Nonexistent,
                    BaseCase::EdgeCount => n6d5.verdict == Verdict::Nonexistent,
                };
                ch.pass = ok;
                chains.push(ch);
            }
        }
    }
    let inconclusive = n6d5.verdict == Verdict::Inconclusive
        || c304.verdict == Verdict::Inconclusive
        || table.iter().any(|e| e.search_status == Some(SearchStatus::BudgetExceeded));
    let pass = s_m_ok
        && table.iter().all(|e| e.pass)
        && n6d5.verdict == Verdict::Nonexistent
        && c304.verdict == Verdict::Nonexistent
        && chains.iter().all(|c| c.pass);
    Ok(TheoremReport {
        s_m_checked_up_to: opts.s_m_limit,
        s_m_ok,
        table,
        n6d5,
        check_304: c304,
        chains,
        pass,
        inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_for_every_long_case() {
        for len in 7..=14 {
            for m in 1..=len / 2 {
                let n = len - 2 * m;
                for k in 2..len - 1 {
                    let (steps, base) = reduction_chain(m, n, k).unwrap_or_else(|| panic!("({m},{n},{k})"));
                    let end = steps.last().map_or(CodeParams::new(m, n, k), |s| s.to);
                    assert!(steps.iter().all(ReductionStep::is_valid), "({m},{n},{k})");
                    assert!(base_matches(end, base), "({m},{n},{k}) -> {end:?} {base:?}");
                }
            }
        }
        assert!(reduction_chain(3, 0, 2).is_none());
        assert!(reduction_chain(4, 0, 1).is_none());
    }

    #[test]
    fn invalid_steps_rejected() {
        let p = CodeParams::new(4, 0, 5);
        assert!(ReductionStep::new(ReductionOp::Projection, p, 2, 0).is_none());
        assert!(ReductionStep::new(ReductionOp::Face, p, 3, 0).is_none());
        assert!(ReductionStep::new(ReductionOp::Face, p, 2, 0).is_some());
    }

    #[test]
    fn theorem_without_search() {
        let r = verify_main_theorem(&TheoremOptions {
            search: false,
            max_mn: 9,
            s_m_limit: 30,
            ..TheoremOptions::default()
        })
        .unwrap();
        assert!(r.pass, "{r:#?}");
    }
}
