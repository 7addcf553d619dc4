//! Parameter sets without MDS codes.

use rayon::prelude::*;
use serde::Serialize;

use crate::classification::k1::{quadruple_invariant, reduced_codes};
use crate::cocliques::enumerate_cocliques;
use crate::codes::{codes_equivalent, Code};
use crate::error::Result;
use crate::graphs::{bits, k4_permutations, k4_squared, shrikhande, DoobParams};
use crate::search::{search_mds, SearchConfig, SearchStatus};

/// Outcome of a nonexistence check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The search completed without finding a code.
    Nonexistent,
    /// A code was found.
    Exists,
    /// The node budget ran out first.
    Inconclusive,
}

/// `4^(L-2) (3L+1) <= 4^L` reduces to `3L+1 <= 16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpherePacking {
    pub length: usize,
    pub ball_size: u64,
    pub ratio_bound: u64,
    /// True when the inequality fails, so no distance-3 MDS code exists.
    pub excluded: bool,
}

pub fn check_sphere_packing_d3(m: usize, n: usize) -> SpherePacking {
    let length = 2 * m + n;
    // a distance-3 MDS code has 4^(L-2) words, each owning a radius-1 ball
    // of 1 + 6m + 3n = 3L + 1 vertices, inside 4^L vertices
    let ball_size = 1 + 6 * m as u64 + 3 * n as u64;
    SpherePacking {
        length,
        ball_size,
        ratio_bound: 16,
        excluded: length >= 2 && ball_size > 16,
    }
}

/// Facts behind the absence of `(m+n, 4^2, 5)` codes with `2m+n = 6`.
#[derive(Clone, Debug, Serialize)]
pub struct N6d5Report {
    pub shrikhande_edges: usize,
    pub k4_squared_edges: usize,
    /// Three 16-vertex, 6-regular graphs whose edge sets would have to be
    /// disjoint: `3 * 48`.
    pub required_edges: usize,
    /// `C(16,2)`.
    pub available_edges: usize,
    pub searches: Vec<SearchCheck>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchCheck {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub status: SearchStatus,
    pub classes: usize,
    pub nodes_visited: u64,
}

fn run_search(m: usize, n: usize, k: usize, budget: u64) -> Result<SearchCheck> {
    let out = search_mds(&SearchConfig::new(m, n, k).with_budget(budget))?;
    Ok(SearchCheck {
        m,
        n,
        k,
        status: out.status,
        classes: out.classes.len(),
        nodes_visited: out.nodes_visited,
    })
}

fn combine(checks: &[SearchCheck]) -> Verdict {
    if checks.iter().any(|c| c.classes > 0) {
        Verdict::Exists
    } else if checks.iter().any(|c| c.status == SearchStatus::BudgetExceeded) {
        Verdict::Inconclusive
    } else {
        Verdict::Nonexistent
    }
}

pub fn check_n6d5(budget: u64) -> Result<N6d5Report> {
    let shrikhande_edges = shrikhande().graph.edge_count();
    let k4_squared_edges = k4_squared().edge_count();
    let required_edges = 3 * shrikhande_edges.max(k4_squared_edges);
    let available_edges = 16 * 15 / 2;
    let searches = [(3, 0), (2, 2), (1, 4)]
        .into_iter()
        .map(|(m, n)| run_search(m, n, 2, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut verdict = combine(&searches);
    if shrikhande_edges != 48 || k4_squared_edges != 48 || required_edges <= available_edges {
        verdict = Verdict::Exists;
    }
    Ok(N6d5Report {
        shrikhande_edges,
        k4_squared_edges,
        required_edges,
        available_edges,
        searches,
        verdict,
    })
}

/// A 4-word `(2+0,4^1,4)` code, words encoded `16f + g`.
#[derive(Clone, Copy, Debug)]
struct Face {
    words: [u8; 4],
    mask: [u64; 4],
    ball1: [u64; 4],
    ball2: [u64; 4],
}

fn set_bit(m: &mut [u64; 4], i: usize) {
    m[i >> 6] |= 1 << (i & 63);
}

fn meets(a: &[u64; 4], b: &[u64; 4]) -> bool {
    (0..4).any(|i| a[i] & b[i] != 0)
}

/// All `(2+0,4^1,4)` codes: a coclique `F`, a coclique `G` and a bijection.
fn all_faces() -> Vec<Face> {
    let sh = &shrikhande().graph;
    let cocl = enumerate_cocliques(sh);
    let dist = |x: usize, y: usize| sh.distance(x >> 4, y >> 4) + sh.distance(x & 15, y & 15);
    let mut faces = Vec::new();
    for &f in &cocl {
        let fv: Vec<usize> = bits(f).collect();
        for &g in &cocl {
            let gv: Vec<usize> = bits(g).collect();
            for perm in k4_permutations() {
                let words: [u8; 4] = std::array::from_fn(|i| (fv[i] << 4 | gv[perm[i] as usize]) as u8);
                let mut face = Face {
                    words,
                    mask: [0; 4],
                    ball1: [0; 4],
                    ball2: [0; 4],
                };
                for &w in &words {
                    set_bit(&mut face.mask, w as usize);
                    for y in 0..256 {
                        let d = dist(w as usize, y);
                        if d <= 1 {
                            set_bit(&mut face.ball1, y);
                        }
                        if d <= 2 {
                            set_bit(&mut face.ball2, y);
                        }
                    }
                }
                faces.push(face);
            }
        }
    }
    faces
}

/// Result of the structured `(3+0,4^3,4)` search.
#[derive(Clone, Debug, Serialize)]
pub struct Check304Report {
    /// Number of `(2+0,4^1,4)` codes available to each first-coordinate face.
    pub faces_per_vertex: usize,
    /// Every such face is equivalent to one of the reduced codes.
    pub faces_reduce: bool,
    pub nodes_visited: u64,
    /// Partial assignments on which disjointness of the first-part images
    /// of adjacent faces was confirmed.
    pub partial_checks: u64,
    pub disjoint_images_hold: bool,
    /// The generic search on the same parameters.
    pub generic: SearchCheck,
    pub verdict: Verdict,
}

struct Face304<'a> {
    faces: &'a [Face],
    nodes: u64,
    budget: u64,
    checks: u64,
    disjoint: bool,
    found: bool,
    assigned: [Option<usize>; 16],
}

impl Face304<'_> {
    fn dfs(&mut self, cand: &[Vec<u16>; 16]) {
        self.nodes += 1;
        if self.nodes > self.budget || self.found {
            return;
        }
        // adjacent faces never share a value of the first part
        let sh = &shrikhande().graph;
        for a in 0..16 {
            for b in bits(sh.neighbors(a)) {
                if let (Some(x), Some(y)) = (self.assigned[a], self.assigned[b]) {
                    let fx = self.faces[x].words.map(|w| w >> 4);
                    if self.faces[y].words.iter().any(|w| fx.contains(&(w >> 4))) {
                        self.disjoint = false;
                    }
                }
            }
        }
        self.checks += 1;
        let Some(a) = (0..16)
            .filter(|&a| self.assigned[a].is_none())
            .min_by_key(|&a| cand[a].len())
        else {
            self.found = true;
            return;
        };
        for &x in &cand[a] {
            let face = &self.faces[x as usize];
            let mut next = cand.clone();
            let mut ok = true;
            for b in 0..16 {
                if b == a || self.assigned[b].is_some() {
                    continue;
                }
                let ball = if sh.adjacent(a, b) { &face.ball2 } else { &face.ball1 };
                next[b].retain(|&y| !meets(&self.faces[y as usize].mask, ball));
                if next[b].is_empty() {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.assigned[a] = Some(x as usize);
                self.dfs(&next);
                self.assigned[a] = None;
            }
            if self.nodes > self.budget || self.found {
                return;
            }
        }
    }
}

/// Searches `(3+0,4^3,4)` codes face by face: fixing the first coordinate
/// to `a` leaves a `(2+0,4^1,4)` code, and faces at first-coordinate
/// distance `t` must keep their words `4-t` apart. The face at `00` is
/// taken up to equivalence on the other two coordinates.
pub fn check_304(budget: u64) -> Result<Check304Report> {
    let faces = all_faces();
    let p2 = DoobParams::new(2, 0);
    let reduced: Vec<Code> = reduced_codes(2).iter().map(|r| r.expand()).collect();
    let as_code = |f: &Face| Code::from_words(p2, 1, f.words.iter().map(|&w| w as u64).collect());
    let mut faces_reduce = true;
    for f in &faces {
        let c = as_code(f)?;
        let q = quadruple_invariant(&c)?;
        let rep = reduced.iter().find(|r| quadruple_invariant(r).ok() == Some(q));
        if !c.is_mds() || !rep.is_some_and(|r| codes_equivalent(r, &c).ok().flatten().is_some()) {
            faces_reduce = false;
        }
    }
    let roots: Vec<usize> = reduced
        .iter()
        .map(|r| {
            faces
                .iter()
                .position(|f| as_code(f).ok().as_ref() == Some(r))
                .expect("reduced codes are faces")
        })
        .collect();
    let all: Vec<u16> = (0..faces.len() as u16).collect();
    let sh = &shrikhande().graph;
    let results: Vec<(u64, u64, bool, bool)> = roots
        .par_iter()
        .map(|&root| {
            let mut cand: [Vec<u16>; 16] = std::array::from_fn(|_| all.clone());
            cand[0] = vec![root as u16];
            let mut s = Face304 {
                faces: &faces,
                nodes: 0,
                budget,
                checks: 0,
                disjoint: true,
                found: false,
                assigned: [None; 16],
            };
            let face = &faces[root];
            let mut ok = true;
            for (b, c) in cand.iter_mut().enumerate().skip(1) {
                let ball = if sh.adjacent(0, b) { &face.ball2 } else { &face.ball1 };
                c.retain(|&y| !meets(&faces[y as usize].mask, ball));
                ok &= !c.is_empty();
            }
            if ok {
                s.assigned[0] = Some(root);
                s.dfs(&cand);
            }
            (s.nodes, s.checks, s.disjoint, s.found)
        })
        .collect();
    let nodes_visited: u64 = results.iter().map(|r| r.0).sum();
    let partial_checks = results.iter().map(|r| r.1).sum();
    let disjoint_images_hold = results.iter().all(|r| r.2);
    let found = results.iter().any(|r| r.3);
    let exhausted = results.iter().any(|r| r.0 > budget);
    let generic = run_search(3, 0, 3, budget)?;
    let verdict = if found || generic.classes > 0 {
        Verdict::Exists
    } else if exhausted || generic.status == SearchStatus::BudgetExceeded {
        Verdict::Inconclusive
    } else {
        Verdict::Nonexistent
    };
    Ok(Check304Report {
        faces_per_vertex: faces.len(),
        faces_reduce,
        nodes_visited,
        partial_checks,
        disjoint_images_hold,
        generic,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_packing_threshold() {
        for (m, n, excluded) in [(2, 0, false), (1, 2, false), (2, 1, false), (3, 0, true), (2, 2, true), (1, 4, true), (4, 3, true)] {
            let sp = check_sphere_packing_d3(m, n);
            assert_eq!(sp.excluded, excluded, "D({m},{n})");
            // direct form for small lengths
            let l = (2 * m + n) as u32;
            let lhs = 4u128.pow(l - 2) * (3 * l as u128 + 1);
            assert_eq!(lhs > 4u128.pow(l), excluded);
        }
    }

    #[test]
    fn n6d5() {
        let r = check_n6d5(1 << 24).unwrap();
        assert_eq!((r.required_edges, r.available_edges), (144, 120));
        assert_eq!(r.verdict, Verdict::Nonexistent);
    }

    #[test]
    fn no_304_code() {
        let r = check_304(1 << 30).unwrap();
        assert_eq!(r.faces_per_vertex, 6144);
        assert!(r.faces_reduce);
        assert!(r.disjoint_images_hold);
        assert_eq!(r.verdict, Verdict::Nonexistent);
    }

    #[test]
    fn budget_gives_inconclusive() {
        let r = check_304(2).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }
}
