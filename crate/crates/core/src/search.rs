//! Exhaustive backtracking search for MDS codes in `D(m,n)`.
//!
//! The vertex set is partitioned into cells: for every coordinate set of
//! weight `k` each value assignment is taken by exactly one codeword, and for
//! weight `k-1` by exactly four. The search keeps the set of still-available
//! vertices, branches on the cell with the least slack, and removes the
//! radius `d-1` ball of every chosen word.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{DiffClass, Z4Pair};
use crate::codes::{code_invariant, codes_equivalent, pack, word_add, word_weight, Code, CoordSelector, CodeInvariant};
use crate::error::{Error, Result};
use crate::graphs::{DoobParams, DoobVertex};

/// Largest `2m+n` the search accepts.
pub const MAX_SEARCH_LENGTH: usize = 8;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryMode {
    /// Every code is enumerated.
    None,
    /// The zero vertex is a codeword and the second word ranges over orbit
    /// representatives of its stabilizer.
    CoordinateStabilized,
    /// As above, with equivalent completions rejected as they are found.
    FullCanonicalAugmentation,
}

impl SymmetryMode {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryMode::None => "none",
            SymmetryMode::CoordinateStabilized => "coordinate-stabilized",
            SymmetryMode::FullCanonicalAugmentation => "full-canonical-augmentation",
        }
    }
}

impl fmt::Display for SymmetryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SymmetryMode::None),
            "stabilized" | "coordinate-stabilized" => Ok(SymmetryMode::CoordinateStabilized),
            "canonical" | "full-canonical-augmentation" => Ok(SymmetryMode::FullCanonicalAugmentation),
            _ => Err(Error::BadToken(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub node_budget: u64,
    pub symmetry_mode: SymmetryMode,
    /// Words forced into every solution. Symmetry reductions are skipped
    /// when seeds are given.
    pub seed_words: Vec<DoobVertex>,
    /// Worker threads; 0 means the rayon default.
    pub jobs: usize,
    /// Answer at the root when the packing bound already rules codes out.
    pub sphere_packing_prune: bool,
}

impl SearchConfig {
    pub fn new(m: usize, n: usize, k: usize) -> SearchConfig {
        SearchConfig {
            m,
            n,
            k,
            node_budget: DEFAULT_NODE_BUDGET,
            symmetry_mode: SymmetryMode::FullCanonicalAugmentation,
            seed_words: Vec::new(),
            jobs: 1,
            sphere_packing_prune: true,
        }
    }

    pub fn with_mode(mut self, mode: SymmetryMode) -> SearchConfig {
        self.symmetry_mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> SearchConfig {
        self.node_budget = budget;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> SearchConfig {
        self.jobs = jobs;
        self
    }

    pub fn params(&self) -> DoobParams {
        DoobParams::new(self.m, self.n)
    }

    pub fn distance(&self) -> usize {
        (2 * self.m + self.n + 1).saturating_sub(self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Complete,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Pairwise inequivalent codes, one per class found.
    pub classes: Vec<Code>,
    pub nodes_visited: u64,
    /// Completions reached before isomorph rejection.
    pub solutions_found: u64,
}

/// Number of vertices of each weight, `(1+6x+9x^2)^m (1+3x)^n`.
pub fn weight_distribution(p: DoobParams) -> Vec<u128> {
    let mut poly = vec![1u128];
    let mul = |poly: &[u128], f: &[u128]| {
        let mut out = vec![0u128; poly.len() + f.len() - 1];
        for (i, &a) in poly.iter().enumerate() {
            for (j, &b) in f.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    for _ in 0..p.m {
        poly = mul(&poly, &[1, 6, 9]);
    }
    for _ in 0..p.n {
        poly = mul(&poly, &[1, 3]);
    }
    poly
}

/// Whether `4^k` disjoint balls of radius `(d-1)/2` fit into `D(m,n)`.
pub fn sphere_packing_allows(p: DoobParams, k: usize, d: usize) -> bool {
    let dist = weight_distribution(p);
    let t = (d.max(1) - 1) / 2;
    let ball: u128 = dist.iter().take(t + 1).sum();
    let total: u128 = dist.iter().sum();
    (1u128 << (2 * k)).checked_mul(ball).is_some_and(|need| need <= total)
}

/// Orbit label of a vertex under the stabilizer of zero: counts of
/// Shrikhande coordinates in each nonzero difference class and of nonzero
/// K4 coordinates.
fn orbit_pattern(p: DoobParams, w: u64) -> [u8; 4] {
    let mut pat = [0u8; 4];
    for i in 0..p.m {
        match Z4Pair::from_index(crate::codes::sh_coord(p, w, i)).class() {
            DiffClass::Zero => {}
            DiffClass::A => pat[0] += 1,
            DiffClass::B => pat[1] += 1,
            DiffClass::C => pat[2] += 1,
        }
    }
    for j in 0..p.n {
        pat[3] += (crate::codes::k_coord(p, w, j) != 0) as u8;
    }
    pat
}

struct Space {
    nv: usize,
    target: usize,
    /// Cells per vertex, `ns` consecutive entries.
    cell_of: Vec<u32>,
    ns: usize,
    need: Vec<u32>,
    members: Vec<Vec<u32>>,
    ball: Vec<u64>,
}

impl Space {
    fn new(p: DoobParams, k: usize, d: usize) -> Result<Space> {
        let len = p.length();
        let nv = 1usize << (2 * len);
        let mut sels: Vec<CoordSelector> = CoordSelector::all_of_weight(p, k);
        if k >= 1 {
            sels.extend(CoordSelector::all_of_weight(p, k - 1));
        }
        let ns = sels.len();
        let mut base = Vec::with_capacity(ns);
        let mut need = Vec::new();
        for s in &sels {
            base.push(need.len() as u32);
            let w = s.weight();
            need.extend(std::iter::repeat_n((1u32) << (2 * (k - w)), 1 << (2 * w)));
        }
        let mut cell_of = vec![0u32; nv * ns];
        let mut members = vec![Vec::new(); need.len()];
        for v in 0..nv {
            for (si, s) in sels.iter().enumerate() {
                let mut idx = 0u32;
                for &i in &s.sh {
                    idx = idx << 4 | crate::codes::sh_coord(p, v as u64, i) as u32;
                }
                for &j in &s.k {
                    idx = idx << 2 | crate::codes::k_coord(p, v as u64, j) as u32;
                }
                let c = base[si] + idx;
                cell_of[v * ns + si] = c;
                members[c as usize].push(v as u32);
            }
        }
        let ball = (1..nv as u64)
            .filter(|&w| (word_weight(p, w) as usize) < d)
            .collect();
        Ok(Space {
            nv,
            target: 1 << (2 * k),
            cell_of,
            ns,
            need,
            members,
            ball,
        })
    }

    fn cells(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.cell_of[v * self.ns..(v + 1) * self.ns]
    }
}

#[derive(Clone)]
struct State {
    avail: Vec<u64>,
    avail_cnt: Vec<u32>,
    chosen_cnt: Vec<u32>,
    chosen: Vec<u32>,
    trail: Vec<u32>,
}

impl State {
    fn new(sp: &Space) -> State {
        let mut avail = vec![!0u64; sp.nv.div_ceil(64)];
        if !sp.nv.is_multiple_of(64) {
            *avail.last_mut().unwrap() = (1u64 << (sp.nv % 64)) - 1;
        }
        State {
            avail,
            avail_cnt: sp.members.iter().map(|m| m.len() as u32).collect(),
            chosen_cnt: vec![0; sp.need.len()],
            chosen: Vec::new(),
            trail: Vec::new(),
        }
    }

    fn is_avail(&self, v: u32) -> bool {
        self.avail[v as usize >> 6] >> (v & 63) & 1 == 1
    }

    /// Returns false when some cell can no longer be filled.
    fn remove(&mut self, sp: &Space, v: u32) -> bool {
        if !self.is_avail(v) {
            return true;
        }
        self.avail[v as usize >> 6] &= !(1u64 << (v & 63));
        self.trail.push(v);
        let mut ok = true;
        for &c in sp.cells(v) {
            let c = c as usize;
            self.avail_cnt[c] -= 1;
            if self.avail_cnt[c] + self.chosen_cnt[c] < sp.need[c] {
                ok = false;
            }
        }
        ok
    }

    fn choose(&mut self, sp: &Space, v: u32) -> bool {
        debug_assert!(self.is_avail(v));
        let mut ok = true;
        self.chosen.push(v);
        for &c in sp.cells(v) {
            let c = c as usize;
            self.chosen_cnt[c] += 1;
            if self.chosen_cnt[c] > sp.need[c] {
                ok = false;
            }
        }
        ok &= self.remove(sp, v);
        if !ok {
            return false;
        }
        for &off in &sp.ball {
            ok &= self.remove(sp, word_add(v as u64, off) as u32);
        }
        for &c in sp.cells(v) {
            let c = c as usize;
            if self.chosen_cnt[c] == sp.need[c] && self.avail_cnt[c] > 0 {
                for &u in &sp.members[c] {
                    ok &= self.remove(sp, u);
                }
            }
        }
        ok
    }

    fn mark(&self) -> (usize, usize) {
        (self.trail.len(), self.chosen.len())
    }

    fn undo(&mut self, sp: &Space, (t, c): (usize, usize)) {
        while self.chosen.len() > c {
            let v = self.chosen.pop().unwrap();
            for &cell in sp.cells(v) {
                self.chosen_cnt[cell as usize] -= 1;
            }
        }
        while self.trail.len() > t {
            let v = self.trail.pop().unwrap();
            self.avail[v as usize >> 6] |= 1u64 << (v & 63);
            for &cell in sp.cells(v) {
                self.avail_cnt[cell as usize] += 1;
            }
        }
    }

    /// The open cell with least slack, or `None` when every cell is full.
    fn pick_cell(&self, sp: &Space) -> Option<usize> {
        let mut best = None;
        let mut best_slack = u32::MAX;
        for c in 0..sp.need.len() {
            let missing = sp.need[c] - self.chosen_cnt[c];
            if missing == 0 {
                continue;
            }
            let slack = self.avail_cnt[c] - missing;
            if slack < best_slack {
                best_slack = slack;
                best = Some(c);
                if slack == 0 {
                    break;
                }
            }
        }
        best
    }
}

const FLUSH: u64 = 1 << 12;

struct Budget<'a> {
    total: &'a AtomicU64,
    stop: &'a AtomicBool,
    limit: u64,
}

/// One worker's depth-first search below a fixed root state.
struct Worker<'a> {
    sp: &'a Space,
    st: State,
    budget: &'a Budget<'a>,
    local: u64,
    nodes: u64,
    solutions: Vec<Vec<u32>>,
    aborted: bool,
}

impl Worker<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.local += 1;
        if self.local == FLUSH {
            let t = self.budget.total.fetch_add(self.local, Ordering::Relaxed) + self.local;
            self.local = 0;
            if t > self.budget.limit {
                self.budget.stop.store(true, Ordering::Relaxed);
            }
        }
        if self.budget.stop.load(Ordering::Relaxed) {
            self.aborted = true;
        }
        !self.aborted
    }

    fn dfs(&mut self) {
        if !self.tick() {
            return;
        }
        if self.st.chosen.len() == self.sp.target {
            let mut s = self.st.chosen.clone();
            s.sort_unstable();
            self.solutions.push(s);
            return;
        }
        let Some(cell) = self.st.pick_cell(self.sp) else {
            return;
        };
        let entry = self.st.mark();
        let sp = self.sp;
        for &v in &sp.members[cell] {
            if !self.st.is_avail(v) {
                continue;
            }
            let m = self.st.mark();
            if self.st.choose(sp, v) {
                self.dfs();
            }
            self.st.undo(sp, m);
            if self.aborted || !self.st.remove(sp, v) {
                break;
            }
        }
        self.st.undo(sp, entry);
    }
}

/// A root subproblem: words to choose and vertices to exclude first.
#[derive(Clone, Debug, Default)]
struct Job {
    choose: Vec<u32>,
    exclude: Vec<u32>,
}

struct JobResult {
    nodes: u64,
    solutions: Vec<Vec<u32>>,
    aborted: bool,
}

fn run_job(sp: &Space, root: &State, job: &Job, budget: &Budget<'_>) -> JobResult {
    let mut w = Worker {
        sp,
        st: root.clone(),
        budget,
        local: 0,
        nodes: 0,
        solutions: Vec::new(),
        aborted: false,
    };
    let mut ok = true;
    for &v in &job.exclude {
        ok &= w.st.remove(sp, v);
    }
    for &v in &job.choose {
        ok = ok && w.st.is_avail(v) && w.st.choose(sp, v);
    }
    if ok {
        w.dfs();
    } else {
        w.tick();
    }
    budget.total.fetch_add(w.local, Ordering::Relaxed);
    JobResult {
        nodes: w.nodes,
        solutions: w.solutions,
        aborted: w.aborted,
    }
}

/// Keeps one code per equivalence class, bucketing by invariant first.
#[derive(Default)]
pub struct ClassCollector {
    buckets: HashMap<CodeInvariant, Vec<usize>>,
    classes: Vec<Code>,
}

impl ClassCollector {
    /// Returns true when `c` starts a new class.
    pub fn insert(&mut self, c: Code) -> Result<bool> {
        let inv = code_invariant(&c);
        let bucket = self.buckets.entry(inv).or_default();
        for &i in bucket.iter() {
            if codes_equivalent(&self.classes[i], &c)?.is_some() {
                return Ok(false);
            }
        }
        bucket.push(self.classes.len());
        self.classes.push(c);
        Ok(true)
    }

    pub fn into_classes(self) -> Vec<Code> {
        self.classes
    }
}

fn validate(cfg: &SearchConfig) -> Result<()> {
    let len = 2 * cfg.m + cfg.n;
    if len == 0 || len > MAX_SEARCH_LENGTH {
        return Err(Error::Unsupported(format!(
            "search needs 1 <= 2m+n <= {MAX_SEARCH_LENGTH}, got {len}"
        )));
    }
    if cfg.k == 0 || cfg.k >= len {
        return Err(Error::Unsupported(format!("search needs 1 <= k < 2m+n, got k = {}", cfg.k)));
    }
    if cfg.node_budget == 0 {
        return Err(Error::Unsupported("node budget must be positive".into()));
    }
    let p = cfg.params();
    let d = cfg.distance() as u32;
    let seeds = cfg
        .seed_words
        .iter()
        .map(|v| pack(p, v))
        .collect::<Result<Vec<_>>>()?;
    for (i, &a) in seeds.iter().enumerate() {
        for &b in &seeds[i + 1..] {
            if crate::codes::word_distance(p, a, b) < d {
                return Err(Error::Unsupported("seed words closer than the code distance".into()));
            }
        }
    }
    Ok(())
}

fn root_jobs(cfg: &SearchConfig, sp: &Space, root: &State) -> Result<Vec<Job>> {
    let p = cfg.params();
    let d = cfg.distance() as u32;
    if !cfg.seed_words.is_empty() {
        let choose = cfg
            .seed_words
            .iter()
            .map(|v| pack(p, v).map(|w| w as u32))
            .collect::<Result<_>>()?;
        return Ok(vec![Job { choose, exclude: vec![] }]);
    }
    match cfg.symmetry_mode {
        SymmetryMode::None => {
            // split on the candidates of the tightest cell
            let Some(cell) = root.pick_cell(sp) else {
                return Ok(vec![Job::default()]);
            };
            let cand: Vec<u32> = sp.members[cell].iter().copied().filter(|&v| root.is_avail(v)).collect();
            Ok((0..cand.len())
                .map(|i| Job {
                    choose: vec![cand[i]],
                    exclude: cand[..i].to_vec(),
                })
                .collect())
        }
        _ => {
            // zero is a codeword; a second word realises distance d, and
            // can be taken from any orbit of the zero stabilizer
            let mut orbits: Vec<([u8; 4], u32, Vec<u32>)> = Vec::new();
            for v in 1..sp.nv as u32 {
                if word_weight(p, v as u64) != d {
                    continue;
                }
                let pat = orbit_pattern(p, v as u64);
                match orbits.iter_mut().find(|o| o.0 == pat) {
                    Some(o) => o.2.push(v),
                    None => orbits.push((pat, v, vec![v])),
                }
            }
            orbits.sort_by_key(|o| o.1);
            let mut jobs = Vec::new();
            let mut excluded = Vec::new();
            for (_, rep, members) in orbits {
                jobs.push(Job {
                    choose: vec![0, rep],
                    exclude: excluded.clone(),
                });
                excluded.extend(members);
            }
            Ok(jobs)
        }
    }
}

pub fn search_mds(cfg: &SearchConfig) -> Result<SearchOutcome> {
    validate(cfg)?;
    let p = cfg.params();
    let d = cfg.distance();
    if cfg.sphere_packing_prune && !sphere_packing_allows(p, cfg.k, d) {
        return Ok(SearchOutcome {
            status: SearchStatus::Complete,
            classes: vec![],
            nodes_visited: 0,
            solutions_found: 0,
        });
    }
    let sp = Space::new(p, cfg.k, d)?;
    let root = State::new(&sp);
    let jobs = root_jobs(cfg, &sp, &root)?;
    let total = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let budget = Budget {
        total: &total,
        stop: &stop,
        limit: cfg.node_budget,
    };
    let results: Vec<JobResult> = if cfg.jobs == 1 {
        jobs.iter().map(|j| run_job(&sp, &root, j, &budget)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(|j| run_job(&sp, &root, j, &budget)).collect())
    };
    let nodes: u64 = results.iter().map(|r| r.nodes).sum();
    let aborted = results.iter().any(|r| r.aborted) || nodes > cfg.node_budget;
    let mut solutions_found = 0u64;
    let mut collector = ClassCollector::default();
    for r in results {
        for s in r.solutions {
            solutions_found += 1;
            let code = Code::from_words(p, cfg.k, s.into_iter().map(u64::from).collect())?;
            collector.insert(code)?;
        }
    }
    Ok(SearchOutcome {
        status: if aborted {
            SearchStatus::BudgetExceeded
        } else {
            SearchStatus::Complete
        },
        classes: collector.into_classes(),
        nodes_visited: nodes,
        solutions_found,
    })
}

/// Number of classes from a complete canonical search.
pub fn count_classes(m: usize, n: usize, k: usize, node_budget: u64) -> Result<usize> {
    let cfg = SearchConfig::new(m, n, k).with_budget(node_budget);
    let out = search_mds(&cfg)?;
    match out.status {
        SearchStatus::Complete => Ok(out.classes.len()),
        SearchStatus::BudgetExceeded => Err(Error::BudgetExceeded {
            nodes: out.nodes_visited,
            budget: node_budget,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocliques::enumerate_cocliques_of;
    use crate::graphs::{shrikhande, FactorKind};

    #[test]
    fn zero_stabilizer_orbits_are_difference_classes() {
        let stab = shrikhande().sending(0, 0);
        assert_eq!(stab.len(), 12);
        for x in 1..16u8 {
            let orbit: Vec<u8> = stab.iter().map(|t| t.apply(x as usize) as u8).collect();
            for y in 1..16u8 {
                assert_eq!(
                    orbit.contains(&y),
                    Z4Pair::from_index(x).class() == Z4Pair::from_index(y).class(),
                    "{x} {y}"
                );
            }
        }
    }

    #[test]
    fn weight_distribution_sums() {
        assert_eq!(weight_distribution(DoobParams::new(1, 0)), vec![1, 6, 9]);
        assert_eq!(weight_distribution(DoobParams::new(2, 1)).iter().sum::<u128>(), 1024);
        assert!(!sphere_packing_allows(DoobParams::new(3, 0), 4, 3));
        assert!(sphere_packing_allows(DoobParams::new(2, 1), 3, 3));
    }

    #[test]
    fn cocliques_from_unpruned_search() {
        let cfg = SearchConfig::new(1, 0, 1).with_mode(SymmetryMode::None);
        let out = search_mds(&cfg).unwrap();
        assert_eq!(out.status, SearchStatus::Complete);
        let cocl = enumerate_cocliques_of(FactorKind::Shrikhande).unwrap();
        assert_eq!(out.solutions_found as usize, cocl.len());
        assert_eq!(out.solutions_found, 16);
        assert_eq!(out.classes.len(), 2);
    }

    #[test]
    fn small_counts() {
        for mode in [SymmetryMode::None, SymmetryMode::CoordinateStabilized, SymmetryMode::FullCanonicalAugmentation] {
            let out = search_mds(&SearchConfig::new(2, 0, 2).with_mode(mode)).unwrap();
            assert_eq!(out.classes.len(), 2, "{mode}");
        }
        assert_eq!(count_classes(1, 2, 2, 1 << 30).unwrap(), 1);
        assert_eq!(count_classes(3, 0, 4, 1 << 30).unwrap(), 0);
    }

    #[test]
    fn deterministic_and_split_independent() {
        let a = search_mds(&SearchConfig::new(2, 1, 2)).unwrap();
        let b = search_mds(&SearchConfig::new(2, 1, 2)).unwrap();
        let c = search_mds(&SearchConfig::new(2, 1, 2).with_jobs(4)).unwrap();
        assert_eq!(a.nodes_visited, b.nodes_visited);
        assert_eq!(a.nodes_visited, c.nodes_visited);
        assert_eq!(a.classes, b.classes);
        assert_eq!(a.classes.len(), 2);
        assert_eq!(c.classes.len(), 2);
    }

    #[test]
    fn budget_is_reported() {
        let out = search_mds(&SearchConfig::new(2, 1, 2).with_budget(3)).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
        assert!(matches!(count_classes(2, 1, 2, 3), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn seeds_are_respected() {
        let mut cfg = SearchConfig::new(1, 0, 1).with_mode(SymmetryMode::None);
        cfg.seed_words = vec![DoobVertex::new(vec![Z4Pair::ZERO], vec![])];
        let out = search_mds(&cfg).unwrap();
        assert_eq!(out.solutions_found, 4);
        cfg.seed_words.push(DoobVertex::new(vec![crate::algebra::p("01")], vec![]));
        assert!(search_mds(&cfg).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(search_mds(&SearchConfig::new(9, 0, 2)).is_err());
        assert!(search_mds(&SearchConfig::new(2, 0, 4)).is_err());
    }
}
