//! The factor graphs (Shrikhande, `K4`, `K4 x K4`) and Doob graphs built from them.
//!
//! Every factor graph has at most 16 vertices, so neighbourhoods are `u16`
//! bitmasks and distances come from a precomputed 16x16 table.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::{DiffClass, Z4Pair, Z4};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Shrikhande,
    K4,
    K4Squared,
}

impl FactorKind {
    pub fn name(self) -> &'static str {
        match self {
            FactorKind::Shrikhande => "shrikhande",
            FactorKind::K4 => "k4",
            FactorKind::K4Squared => "k4-squared",
        }
    }
}

impl std::str::FromStr for FactorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sh" | "shrikhande" => Ok(FactorKind::Shrikhande),
            "k4" | "k" => Ok(FactorKind::K4),
            "k4-squared" | "k4squared" | "k2" | "k4^2" => Ok(FactorKind::K4Squared),
            _ => Err(Error::BadToken(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

/// A graph on at most 16 vertices.
#[derive(Clone, Debug)]
pub struct FactorGraph {
    kind: Option<FactorKind>,
    n: usize,
    adj: [u16; 16],
    dist: [[u8; 16]; 16],
}

impl FactorGraph {
    pub fn build(kind: FactorKind) -> FactorGraph {
        match kind {
            FactorKind::Shrikhande => {
                let adj = std::array::from_fn(|u| {
                    let u = Z4Pair::from_index(u as u8);
                    Z4Pair::all()
                        .filter(|&v| (u - v).class() == DiffClass::A)
                        .fold(0u16, |m, v| m | 1 << v.index())
                });
                FactorGraph::from_adjacency(Some(kind), 16, adj)
            }
            FactorKind::K4 => {
                let mut adj = [0u16; 16];
                for (u, a) in adj.iter_mut().enumerate().take(4) {
                    *a = 0b1111 & !(1 << u);
                }
                FactorGraph::from_adjacency(Some(kind), 4, adj)
            }
            FactorKind::K4Squared => {
                // vertex 4x+y; adjacent iff exactly one coordinate differs
                let adj = std::array::from_fn(|u| {
                    (0..16)
                        .filter(|&v| {
                            let same_x = u / 4 == v / 4;
                            let same_y = u % 4 == v % 4;
                            same_x != same_y
                        })
                        .fold(0u16, |m, v| m | 1 << v)
                });
                FactorGraph::from_adjacency(Some(kind), 16, adj)
            }
        }
    }

    /// A graph on `n <= 16` vertices given by neighbour masks. Panics if the
    /// masks are not symmetric or have loops.
    pub fn from_neighbor_masks(n: usize, adj: &[u16]) -> FactorGraph {
        assert!(n <= 16 && adj.len() == n);
        let mut a = [0u16; 16];
        a[..n].copy_from_slice(adj);
        for u in 0..n {
            assert!(a[u] >> u & 1 == 0, "loop at {u}");
            for v in bits(a[u]) {
                assert!(v < n && a[v] >> u & 1 == 1, "asymmetric edge {u}-{v}");
            }
        }
        FactorGraph::from_adjacency(None, n, a)
    }

    fn from_adjacency(kind: Option<FactorKind>, n: usize, adj: [u16; 16]) -> FactorGraph {
        let mut dist = [[u8::MAX; 16]; 16];
        for s in 0..n {
            dist[s][s] = 0;
            let mut frontier = 1u16 << s;
            let mut seen = frontier;
            let mut d = 0;
            while frontier != 0 {
                d += 1;
                let mut next = 0u16;
                for v in bits(frontier) {
                    next |= adj[v];
                }
                next &= !seen;
                for v in bits(next) {
                    dist[s][v] = d;
                }
                seen |= next;
                frontier = next;
            }
        }
        FactorGraph {
            kind,
            n,
            adj,
            dist,
        }
    }

    /// `None` for graphs built from explicit masks.
    pub fn kind(&self) -> Option<FactorKind> {
        self.kind
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn all_mask(&self) -> u16 {
        if self.n == 16 {
            u16::MAX
        } else {
            (1u16 << self.n) - 1
        }
    }

    pub fn neighbors(&self, v: usize) -> u16 {
        self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn distance(&self, u: usize, v: usize) -> u8 {
        self.dist[u][v]
    }

    pub fn diameter(&self) -> u8 {
        (0..self.n)
            .flat_map(|u| (0..self.n).map(move |v| (u, v)))
            .map(|(u, v)| self.dist[u][v])
            .max()
            .unwrap_or(0)
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> Result<u16> {
        if u == v {
            return Err(Error::SameVertex);
        }
        Ok(self.adj[u] & self.adj[v])
    }

    /// Strongly regular parameters, or `None` when the graph is not strongly
    /// regular (including the complete graph, where `mu` is undefined).
    pub fn srg_params(&self) -> Option<SrgParams> {
        let k = self.degree(0);
        if (0..self.n).any(|v| self.degree(v) != k) {
            return None;
        }
        let mut lambda = None;
        let mut mu = None;
        for u in 0..self.n {
            for v in u + 1..self.n {
                let c = (self.adj[u] & self.adj[v]).count_ones() as usize;
                let slot = if self.adjacent(u, v) {
                    &mut lambda
                } else {
                    &mut mu
                };
                match *slot {
                    None => *slot = Some(c),
                    Some(x) if x != c => return None,
                    _ => {}
                }
            }
        }
        Some(SrgParams {
            v: self.n,
            k,
            lambda: lambda?,
            mu: mu?,
        })
    }

    /// The full automorphism group.
    pub fn automorphism_group(&self) -> Vec<Permutation> {
        isomorphisms(self, self, usize::MAX)
    }
}

/// Iterates the set bits of a 16-bit mask in increasing order.
pub fn bits(mut mask: u16) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// A permutation of at most 16 points, used for graph automorphisms and
/// isomorphisms between factor graphs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Permutation {
    image: [u8; 16],
    n: u8,
}

pub type Automorphism = Permutation;

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        let mut image = [0u8; 16];
        for (i, x) in image.iter_mut().enumerate() {
            *x = i as u8;
        }
        Permutation { image, n: n as u8 }
    }

    /// Panics if `image` is not a permutation of `0..image.len()`.
    pub fn from_slice(image: &[u8]) -> Permutation {
        let n = image.len();
        assert!(n <= 16);
        let mut seen = 0u32;
        let mut out = [0u8; 16];
        for (i, &x) in image.iter().enumerate() {
            assert!((x as usize) < n && seen >> x & 1 == 0, "not a permutation");
            seen |= 1 << x;
            out[i] = x;
        }
        for (i, x) in out.iter_mut().enumerate().skip(n) {
            *x = i as u8;
        }
        Permutation {
            image: out,
            n: n as u8,
        }
    }

    /// `s -> s + x` on the Shrikhande vertex set.
    pub fn translation(x: Z4Pair) -> Permutation {
        Permutation::from_fn(16, |s| (Z4Pair::from_index(s as u8) + x).index())
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> u8) -> Permutation {
        let image: Vec<u8> = (0..n).map(f).collect();
        Permutation::from_slice(&image)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.image[..self.n as usize]
    }

    /// `self` after `other`: `v -> self(other(v))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut image = [0u8; 16];
        for (v, x) in image.iter_mut().enumerate() {
            *x = self.image[other.image[v] as usize];
        }
        Permutation { image, n: self.n }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = [0u8; 16];
        for v in 0..16 {
            image[self.image[v] as usize] = v as u8;
        }
        Permutation { image, n: self.n }
    }

    pub fn map_mask(&self, mask: u16) -> u16 {
        bits(mask).fold(0u16, |m, v| m | 1 << self.image[v])
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n as usize).all(|v| self.image[v] as usize == v)
    }

    /// True when `self` maps `g` isomorphically onto `h`.
    pub fn is_isomorphism(&self, g: &FactorGraph, h: &FactorGraph) -> bool {
        g.n == h.n
            && self.len() == g.n
            && (0..g.n).all(|u| self.map_mask(g.adj[u]) == h.adj[self.apply(u)])
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images())
    }
}

/// Bijections `V(g) -> V(h)` preserving adjacency and non-adjacency, found by
/// extending partial maps along a BFS order of `g`; stops after `limit`.
pub fn isomorphisms(g: &FactorGraph, h: &FactorGraph, limit: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    if g.n != h.n || g.degree_sequence_sorted() != h.degree_sequence_sorted() {
        return out;
    }
    let order = g.bfs_order();
    let mut map = [u8::MAX; 16];
    extend_map(g, h, &order, 0, &mut map, 0, limit, &mut out);
    out
}

/// One isomorphism `g -> h`, if any.
pub fn find_isomorphism(g: &FactorGraph, h: &FactorGraph) -> Option<Permutation> {
    isomorphisms(g, h, 1).into_iter().next()
}

#[allow(clippy::too_many_arguments)]
fn extend_map(
    g: &FactorGraph,
    h: &FactorGraph,
    order: &[usize],
    depth: usize,
    map: &mut [u8; 16],
    used: u16,
    limit: usize,
    out: &mut Vec<Permutation>,
) {
    if out.len() >= limit {
        return;
    }
    if depth == order.len() {
        out.push(Permutation::from_slice(&map[..g.n]));
        return;
    }
    let v = order[depth];
    // images of already-mapped neighbours / non-neighbours of v
    let mut must_adj = h.all_mask();
    let mut must_not = 0u16;
    for &w in &order[..depth] {
        let img = map[w] as usize;
        if g.adjacent(v, w) {
            must_adj &= h.adj[img];
        } else {
            must_not |= h.adj[img];
        }
    }
    let cands = must_adj & !must_not & !used & h.all_mask();
    for u in bits(cands) {
        if h.degree(u) != g.degree(v) {
            continue;
        }
        map[v] = u as u8;
        extend_map(g, h, order, depth + 1, map, used | 1 << u, limit, out);
        map[v] = u8::MAX;
        if out.len() >= limit {
            return;
        }
    }
}

impl FactorGraph {
    fn degree_sequence_sorted(&self) -> Vec<usize> {
        let mut d = self.degree_sequence();
        d.sort_unstable();
        d
    }

    fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n);
        let mut seen = 0u16;
        for s in 0..self.n {
            if seen >> s & 1 == 1 {
                continue;
            }
            seen |= 1 << s;
            let start = order.len();
            order.push(s);
            let mut i = start;
            while i < order.len() {
                let v = order[i];
                for w in bits(self.adj[v] & !seen) {
                    seen |= 1 << w;
                    order.push(w);
                }
                i += 1;
            }
        }
        order
    }
}

/// The Shrikhande graph together with its automorphism group and, for each
/// pair `(x, y)`, the automorphisms sending `x` to `y`.
pub struct ShrikhandeData {
    pub graph: FactorGraph,
    pub group: Vec<Permutation>,
    cosets: Vec<Vec<Permutation>>,
}

impl ShrikhandeData {
    /// Automorphisms `t` with `t(x) = y`.
    pub fn sending(&self, x: usize, y: usize) -> &[Permutation] {
        &self.cosets[x * 16 + y]
    }
}

pub fn shrikhande() -> &'static ShrikhandeData {
    static DATA: OnceLock<ShrikhandeData> = OnceLock::new();
    DATA.get_or_init(|| {
        let graph = FactorGraph::build(FactorKind::Shrikhande);
        let group = graph.automorphism_group();
        let mut cosets = vec![Vec::new(); 256];
        for t in &group {
            for x in 0..16 {
                cosets[x * 16 + t.apply(x)].push(*t);
            }
        }
        ShrikhandeData {
            graph,
            group,
            cosets,
        }
    })
}

pub fn k4_squared() -> &'static FactorGraph {
    static G: OnceLock<FactorGraph> = OnceLock::new();
    G.get_or_init(|| FactorGraph::build(FactorKind::K4Squared))
}

/// All 24 permutations of `{0,1,2,3}`.
pub fn k4_permutations() -> &'static [[u8; 4]] {
    static P: OnceLock<Vec<[u8; 4]>> = OnceLock::new();
    P.get_or_init(|| {
        use itertools::Itertools;
        (0u8..4)
            .permutations(4)
            .map(|v| [v[0], v[1], v[2], v[3]])
            .collect()
    })
}

/// Shrikhande distance between two vertices.
pub fn sh_distance(u: Z4Pair, v: Z4Pair) -> u8 {
    match (u - v).class() {
        DiffClass::Zero => 0,
        DiffClass::A => 1,
        DiffClass::B | DiffClass::C => 2,
    }
}

/// `D(m,n)`: `m` Shrikhande coordinates and `n` `K4` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DoobParams {
    pub m: usize,
    pub n: usize,
}

impl DoobParams {
    pub const fn new(m: usize, n: usize) -> DoobParams {
        DoobParams { m, n }
    }

    /// `2m + n`, the length of the Hamming graph with the same parameters.
    pub const fn length(&self) -> usize {
        2 * self.m + self.n
    }
}

impl fmt::Display for DoobParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({},{})", self.m, self.n)
    }
}

/// A vertex `(s_1,...,s_m; h_1,...,h_n)` of a Doob graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DoobVertex {
    pub sh: Vec<Z4Pair>,
    pub k: Vec<Z4>,
}

impl DoobVertex {
    pub fn new(sh: Vec<Z4Pair>, k: Vec<Z4>) -> DoobVertex {
        DoobVertex { sh, k }
    }

    pub fn zero(p: DoobParams) -> DoobVertex {
        DoobVertex {
            sh: vec![Z4Pair::ZERO; p.m],
            k: vec![Z4::ZERO; p.n],
        }
    }

    pub fn params(&self) -> DoobParams {
        DoobParams::new(self.sh.len(), self.k.len())
    }

    pub fn conforms(&self, p: DoobParams) -> bool {
        self.params() == p
    }
}

impl fmt::Display for DoobVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.sh {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        f.write_str(if first { ";" } else { " ;" })?;
        for h in &self.k {
            write!(f, " {h}")?;
        }
        Ok(())
    }
}

/// Graph distance in `D(m,n)`: the sum of the factor distances.
pub fn doob_distance(p: DoobParams, u: &DoobVertex, v: &DoobVertex) -> Result<u32> {
    for w in [u, v] {
        if !w.conforms(p) {
            return Err(Error::DimensionMismatch {
                expected_m: p.m,
                expected_n: p.n,
                m: w.sh.len(),
                n: w.k.len(),
            });
        }
    }
    let sh: u32 = u
        .sh
        .iter()
        .zip(&v.sh)
        .map(|(&a, &b)| sh_distance(a, b) as u32)
        .sum();
    let k = u.k.iter().zip(&v.k).filter(|(a, b)| a != b).count() as u32;
    Ok(sh + k)
}

/// For non-adjacent `a != b`: the two common neighbours are non-adjacent when
/// `a - b` has order 2 and adjacent when it has order 4. Exhaustive.
pub fn verify_order_lemma(g: &FactorGraph) -> bool {
    assert_eq!(g.kind(), Some(FactorKind::Shrikhande));
    (0..16).all(|a| {
        (a + 1..16).all(|b| {
            if g.adjacent(a, b) {
                return true;
            }
            let common = g.adj[a] & g.adj[b];
            let mut it = bits(common);
            let (Some(u), Some(w), None) = (it.next(), it.next(), it.next()) else {
                return false;
            };
            let order = (Z4Pair::from_index(a as u8) - Z4Pair::from_index(b as u8)).order();
            match order {
                2 => !g.adjacent(u, w),
                4 => g.adjacent(u, w),
                _ => false,
            }
        })
    })
}

/// Every automorphism preserves the order of vertex differences.
pub fn verify_order_preservation(g: &FactorGraph) -> bool {
    assert_eq!(g.kind(), Some(FactorKind::Shrikhande));
    let group = g.automorphism_group();
    let z = |v: usize| Z4Pair::from_index(v as u8);
    group.iter().all(|t| {
        (0..16).all(|a| {
            (a + 1..16).all(|b| (z(a) - z(b)).order() == (z(t.apply(a)) - z(t.apply(b))).order())
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::p;

    fn idx(s: &str) -> usize {
        p(s).index() as usize
    }

    fn mask(vs: &[&str]) -> u16 {
        vs.iter().fold(0, |m, s| m | 1 << idx(s))
    }

    #[test]
    fn factor_construction() {
        let sh = FactorGraph::build(FactorKind::Shrikhande);
        assert_eq!(sh.neighbors(0), mask(&["01", "03", "10", "30", "11", "33"]));
        let k4 = FactorGraph::build(FactorKind::K4);
        assert_eq!(k4.neighbors(0), 0b1110);
        let k2 = FactorGraph::build(FactorKind::K4Squared);
        assert!(k2.degree_sequence().iter().all(|&d| d == 6));
        assert_eq!(sh.diameter(), 2);
        assert_eq!(k2.diameter(), 2);
        assert_eq!(k4.diameter(), 1);
    }

    #[test]
    fn factor_distances() {
        let sh = FactorGraph::build(FactorKind::Shrikhande);
        assert_eq!(sh.distance(idx("00"), idx("01")), 1);
        assert_eq!(sh.distance(idx("00"), idx("02")), 2);
        for v in 0..16 {
            assert_eq!(sh.distance(v, v), 0);
            for u in 0..16 {
                assert_eq!(
                    sh.distance(u, v),
                    sh_distance(Z4Pair::from_index(u as u8), Z4Pair::from_index(v as u8))
                );
            }
        }
    }

    #[test]
    fn doob_distance_examples() {
        let v = |sh: &[&str], k: &[u8]| {
            DoobVertex::new(sh.iter().map(|s| p(s)).collect(), k.iter().map(|&x| Z4::new(x)).collect())
        };
        let d = |m, n, a: &DoobVertex, b: &DoobVertex| doob_distance(DoobParams::new(m, n), a, b).unwrap();
        assert_eq!(d(1, 1, &v(&["00"], &[0]), &v(&["02"], &[1])), 3);
        assert_eq!(d(2, 0, &v(&["00", "00"], &[]), &v(&["00", "00"], &[])), 0);
        assert_eq!(d(1, 2, &v(&["01"], &[0, 0]), &v(&["00"], &[0, 0])), 1);
        assert!(doob_distance(DoobParams::new(2, 0), &v(&["00"], &[]), &v(&["00"], &[])).is_err());
    }

    #[test]
    fn common_neighbor_examples() {
        let sh = FactorGraph::build(FactorKind::Shrikhande);
        assert_eq!(sh.common_neighbors(idx("00"), idx("02")).unwrap(), mask(&["01", "03"]));
        for u in 0..16 {
            for v in 0..16 {
                if u != v {
                    assert_eq!(sh.common_neighbors(u, v).unwrap().count_ones(), 2);
                }
            }
        }
        assert!(matches!(sh.common_neighbors(3, 3), Err(Error::SameVertex)));
        let k2 = FactorGraph::build(FactorKind::K4Squared);
        assert_eq!(k2.common_neighbors(0, 1).unwrap().count_ones(), 2);
    }

    #[test]
    fn srg_parameters() {
        let srg = SrgParams {
            v: 16,
            k: 6,
            lambda: 2,
            mu: 2,
        };
        assert_eq!(FactorGraph::build(FactorKind::Shrikhande).srg_params(), Some(srg));
        assert_eq!(FactorGraph::build(FactorKind::K4Squared).srg_params(), Some(srg));
        assert_eq!(FactorGraph::build(FactorKind::K4).srg_params(), None);
    }

    #[test]
    fn automorphism_groups() {
        let sh = shrikhande();
        assert_eq!(sh.group.len(), 192);
        let k4 = FactorGraph::build(FactorKind::K4);
        assert_eq!(k4.automorphism_group().len(), 24);
        assert_eq!(k4_squared().automorphism_group().len(), 1152);
        let t = Permutation::translation(p("02"));
        assert!(t.is_isomorphism(&sh.graph, &sh.graph));
        assert!(sh.group.contains(&t));
        for a in &sh.group {
            assert!(a.is_isomorphism(&sh.graph, &sh.graph));
            assert!(sh.group.contains(&a.inverse()));
        }
        let orbit = sh.group.iter().fold(0u16, |m, a| m | 1 << a.apply(0));
        assert_eq!(orbit, u16::MAX);
        for x in 0..16 {
            for y in 0..16 {
                assert_eq!(sh.sending(x, y).len(), 12);
            }
        }
    }

    #[test]
    fn shrikhande_is_not_k4_squared() {
        assert!(find_isomorphism(&shrikhande().graph, k4_squared()).is_none());
        assert!(find_isomorphism(k4_squared(), k4_squared()).is_some());
    }

    #[test]
    fn order_lemmas() {
        let sh = FactorGraph::build(FactorKind::Shrikhande);
        // common neighbours of 00 and 21 are adjacent
        let c: Vec<usize> = bits(sh.common_neighbors(idx("00"), idx("21")).unwrap()).collect();
        assert!(sh.adjacent(c[0], c[1]));
        let c: Vec<usize> = bits(sh.common_neighbors(idx("00"), idx("02")).unwrap()).collect();
        assert!(!sh.adjacent(c[0], c[1]));
        assert!(verify_order_lemma(&sh));
        assert!(verify_order_preservation(&sh));
        let swap = Permutation::from_fn(16, |s| {
            let x = Z4Pair::from_index(s as u8);
            Z4Pair::new(x.b(), x.a()).index()
        });
        assert!(swap.is_isomorphism(&sh, &sh));
    }
}
