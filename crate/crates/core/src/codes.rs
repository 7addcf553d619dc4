//! Codes in `D(m,n)`: packed words, distances, projections, faces and
//! equivalence.
//!
//! A word is a `u64` holding `2m+n` base-4 digits. Shrikhande coordinate `i`
//! occupies the nibble at shift `2n + 4(m-1-i)` (value `4a+b`), `K4`
//! coordinate `j` the two bits at shift `2(n-1-j)`. Coordinate 0 is the most
//! significant, so numeric order on words is lexicographic order on
//! coordinates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{DiffClass, Z4Pair, Z4};
use crate::error::{Error, Result};
use crate::graphs::{k4_permutations, shrikhande, DoobParams, DoobVertex, Permutation};

/// Longest supported `2m+n`.
pub const MAX_LENGTH: usize = 32;

const LO: u64 = 0x5555_5555_5555_5555;

const SH_WEIGHT: [u8; 16] = {
    let mut w = [0u8; 16];
    let mut i = 0;
    while i < 16 {
        // 0 for 00, 1 for the connecting set, 2 otherwise
        w[i] = match i {
            0 => 0,
            1 | 3 | 4 | 12 | 5 | 15 => 1,
            _ => 2,
        };
        i += 1;
    }
    w
};

const SH_WEIGHT_BYTE: [u8; 256] = {
    let mut t = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        t[i] = SH_WEIGHT[i & 15] + SH_WEIGHT[i >> 4];
        i += 1;
    }
    t
};

/// Digit-wise sum mod 4.
#[inline]
pub fn word_add(a: u64, b: u64) -> u64 {
    (a ^ b) ^ ((a & b & LO) << 1)
}

/// Digit-wise negation mod 4.
#[inline]
pub fn word_neg(a: u64) -> u64 {
    a ^ ((a & LO) << 1)
}

#[inline]
pub fn word_sub(a: u64, b: u64) -> u64 {
    word_add(a, word_neg(b))
}

/// Distance of a difference vector `x` from the zero word.
#[inline]
pub fn word_weight(p: DoobParams, x: u64) -> u32 {
    let kbits = 2 * p.n as u32;
    let kpart = if kbits == 64 { x } else { x & ((1u64 << kbits) - 1) };
    let mut w = ((kpart | kpart >> 1) & LO).count_ones();
    let mut sh = if kbits == 64 { 0 } else { x >> kbits };
    while sh != 0 {
        w += SH_WEIGHT_BYTE[(sh & 0xff) as usize] as u32;
        sh >>= 8;
    }
    w
}

#[inline]
pub fn word_distance(p: DoobParams, a: u64, b: u64) -> u32 {
    word_weight(p, word_sub(a, b))
}

/// `4^(2m+n)`, or `None` when it does not fit in a `u64`.
pub fn vertex_count(p: DoobParams) -> Option<u64> {
    1u64.checked_shl(2 * p.length() as u32)
}

fn check_length(p: DoobParams) -> Result<()> {
    if p.length() > MAX_LENGTH {
        return Err(Error::Unsupported(format!(
            "2m+n = {} exceeds {MAX_LENGTH}",
            p.length()
        )));
    }
    Ok(())
}

#[inline]
fn sh_shift(p: DoobParams, i: usize) -> u32 {
    (2 * p.n + 4 * (p.m - 1 - i)) as u32
}

#[inline]
fn k_shift(p: DoobParams, j: usize) -> u32 {
    (2 * (p.n - 1 - j)) as u32
}

#[inline]
pub fn sh_coord(p: DoobParams, w: u64, i: usize) -> u8 {
    (w >> sh_shift(p, i) & 15) as u8
}

#[inline]
pub fn k_coord(p: DoobParams, w: u64, j: usize) -> u8 {
    (w >> k_shift(p, j) & 3) as u8
}

/// Builds a word from coordinate values (`4a+b` for Shrikhande, `0..4` for K4).
pub fn word_from_coords(p: DoobParams, sh: &[u8], k: &[u8]) -> u64 {
    debug_assert!(sh.len() == p.m && k.len() == p.n);
    let mut w = 0u64;
    for &s in sh {
        w = w << 4 | (s & 15) as u64;
    }
    for &h in k {
        w = w << 2 | (h & 3) as u64;
    }
    w
}

pub fn pack(p: DoobParams, v: &DoobVertex) -> Result<u64> {
    check_length(p)?;
    if !v.conforms(p) {
        return Err(Error::DimensionMismatch {
            expected_m: p.m,
            expected_n: p.n,
            m: v.sh.len(),
            n: v.k.len(),
        });
    }
    let sh: Vec<u8> = v.sh.iter().map(|s| s.index()).collect();
    let k: Vec<u8> = v.k.iter().map(|h| h.value()).collect();
    Ok(word_from_coords(p, &sh, &k))
}

pub fn unpack(p: DoobParams, w: u64) -> DoobVertex {
    DoobVertex {
        sh: (0..p.m).map(|i| Z4Pair::from_index(sh_coord(p, w, i))).collect(),
        k: (0..p.n).map(|j| Z4::new(k_coord(p, w, j))).collect(),
    }
}

/// Renders a word in the text format, e.g. `21 03 ; 2 0`.
pub fn format_word(p: DoobParams, w: u64) -> String {
    unpack(p, w).to_string()
}

/// A set of coordinates: Shrikhande indices and K4 indices, both 0-based and
/// strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordSelector {
    pub sh: Vec<usize>,
    pub k: Vec<usize>,
}

impl CoordSelector {
    pub fn new(sh: Vec<usize>, k: Vec<usize>) -> Result<CoordSelector> {
        for v in [&sh, &k] {
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::SelectorOutOfRange(format!(
                    "indices {v:?} are not strictly increasing"
                )));
            }
        }
        Ok(CoordSelector { sh, k })
    }

    pub fn empty() -> CoordSelector {
        CoordSelector::default()
    }

    /// `2v + w`, the number of base-4 digits covered.
    pub fn weight(&self) -> usize {
        2 * self.sh.len() + self.k.len()
    }

    pub fn check(&self, p: DoobParams) -> Result<()> {
        let ok = |v: &[usize], max: usize| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&i| i < max);
        if !ok(&self.sh, p.m) || !ok(&self.k, p.n) {
            return Err(Error::SelectorOutOfRange(format!(
                "{:?};{:?} for {p}",
                self.sh, self.k
            )));
        }
        Ok(())
    }

    /// Coordinates not in the selector.
    pub fn complement(&self, p: DoobParams) -> CoordSelector {
        CoordSelector {
            sh: (0..p.m).filter(|i| !self.sh.contains(i)).collect(),
            k: (0..p.n).filter(|j| !self.k.contains(j)).collect(),
        }
    }

    /// Every selector of `p` with the given weight.
    pub fn all_of_weight(p: DoobParams, weight: usize) -> Vec<CoordSelector> {
        use itertools::Itertools;
        let mut out = Vec::new();
        for v in 0..=p.m.min(weight / 2) {
            let w = weight - 2 * v;
            if w > p.n {
                continue;
            }
            for sh in (0..p.m).combinations(v) {
                for k in (0..p.n).combinations(w) {
                    out.push(CoordSelector { sh: sh.clone(), k });
                }
            }
        }
        out
    }
}

/// Keeps only the listed coordinates of `w`, in order.
fn restrict(p: DoobParams, w: u64, keep: &CoordSelector) -> u64 {
    let mut out = 0u64;
    for &i in &keep.sh {
        out = out << 4 | sh_coord(p, w, i) as u64;
    }
    for &j in &keep.k {
        out = out << 2 | k_coord(p, w, j) as u64;
    }
    out
}

/// A code in `D(m,n)` with an explicitly declared dimension `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Code {
    params: DoobParams,
    k: usize,
    words: Vec<u64>,
}

impl Code {
    /// Words are sorted; duplicates and out-of-range words are rejected.
    pub fn from_words(params: DoobParams, k: usize, mut words: Vec<u64>) -> Result<Code> {
        check_length(params)?;
        if let Some(limit) = vertex_count(params) {
            if let Some(&bad) = words.iter().find(|&&w| w >= limit) {
                return Err(Error::Structure(format!("word {bad:#x} is outside {params}")));
            }
        }
        words.sort_unstable();
        if let Some(w) = words.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateWord(format_word(params, w[0])));
        }
        Ok(Code { params, k, words })
    }

    pub fn from_vertices(params: DoobParams, k: usize, vs: &[DoobVertex]) -> Result<Code> {
        let words = vs.iter().map(|v| pack(params, v)).collect::<Result<Vec<_>>>()?;
        Code::from_words(params, k, words)
    }

    pub fn params(&self) -> DoobParams {
        self.params
    }

    pub fn declared_k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn vertices(&self) -> Vec<DoobVertex> {
        self.words.iter().map(|&w| unpack(self.params, w)).collect()
    }

    pub fn contains(&self, w: u64) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    /// `2m+n-k+1`, the distance an MDS code with the declared `k` must have.
    pub fn mds_distance(&self) -> isize {
        self.params.length() as isize - self.k as isize + 1
    }

    pub fn with_declared_k(&self, k: usize) -> Code {
        Code { k, ..self.clone() }
    }

    pub fn min_distance(&self) -> Result<u32> {
        if self.words.len() < 2 {
            return Err(Error::TooFewWords);
        }
        let p = self.params;
        let mut best = u32::MAX;
        for (i, &a) in self.words.iter().enumerate() {
            for &b in &self.words[i + 1..] {
                best = best.min(word_distance(p, a, b));
            }
        }
        Ok(best)
    }

    /// Histogram of pairwise distances, indexed by distance.
    pub fn distance_distribution(&self) -> Vec<usize> {
        let p = self.params;
        let mut hist = vec![0usize; p.length() + 1];
        for (i, &a) in self.words.iter().enumerate() {
            for &b in &self.words[i + 1..] {
                hist[word_distance(p, a, b) as usize] += 1;
            }
        }
        hist
    }

    pub fn is_mds(&self) -> bool {
        let Some(size) = 1usize.checked_shl(2 * self.k as u32) else {
            return false;
        };
        if self.words.len() != size || self.mds_distance() < 1 {
            return false;
        }
        match self.min_distance() {
            Ok(d) => d as isize == self.mds_distance(),
            // a single word is MDS exactly when k = 0 and d = 2m+n+1
            Err(_) => self.words.len() == 1,
        }
    }

    /// Words with the selected coordinates deleted, duplicates kept, sorted.
    pub fn projection_multiset(&self, sel: &CoordSelector) -> Result<Vec<u64>> {
        sel.check(self.params)?;
        let keep = sel.complement(self.params);
        let mut out: Vec<u64> = self.words.iter().map(|&w| restrict(self.params, w, &keep)).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The code with the selected coordinates deleted; parameters become
    /// `(m-v, n-w)` with the same declared `k`.
    pub fn projection(&self, sel: &CoordSelector) -> Result<Code> {
        let mut words = self.projection_multiset(sel)?;
        words.dedup();
        let params = DoobParams::new(self.params.m - sel.sh.len(), self.params.n - sel.k.len());
        Code::from_words(params, self.k, words)
    }

    /// Words agreeing with `values` on the selected coordinates, those
    /// coordinates then deleted. The declared dimension drops by `2v+w`
    /// (saturating at 0).
    pub fn face(&self, sel: &CoordSelector, values: &DoobVertex) -> Result<Code> {
        sel.check(self.params)?;
        if values.sh.len() != sel.sh.len() || values.k.len() != sel.k.len() {
            return Err(Error::DimensionMismatch {
                expected_m: sel.sh.len(),
                expected_n: sel.k.len(),
                m: values.sh.len(),
                n: values.k.len(),
            });
        }
        let p = self.params;
        let keep = sel.complement(p);
        let words = self
            .words
            .iter()
            .filter(|&&w| {
                sel.sh.iter().zip(&values.sh).all(|(&i, v)| sh_coord(p, w, i) == v.index())
                    && sel.k.iter().zip(&values.k).all(|(&j, v)| k_coord(p, w, j) == v.value())
            })
            .map(|&w| restrict(p, w, &keep))
            .collect();
        let params = DoobParams::new(p.m - sel.sh.len(), p.n - sel.k.len());
        Code::from_words(params, self.k.saturating_sub(sel.weight()), words)
    }

    pub fn apply_equivalence(&self, e: &EquivalenceMap) -> Result<Code> {
        e.check(self.params)?;
        let words = self.words.iter().map(|&w| e.apply_word(self.params, w)).collect();
        Code::from_words(self.params, self.k, words)
    }

    /// Reorders coordinates by the given permutations (target `i` takes
    /// source `perm[i]`) without relabelling values.
    pub fn permute_coordinates(&self, sh_perm: &[usize], k_perm: &[usize]) -> Result<Code> {
        let mut e = EquivalenceMap::identity(self.params);
        e.sh_coord_perm = sh_perm.to_vec();
        e.k_coord_perm = k_perm.to_vec();
        self.apply_equivalence(&e)
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code {{ {}, k={}, words: [", self.params, self.k)?;
        for (i, &w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            f.write_str(&format_word(self.params, w))?;
        }
        f.write_str("] }")
    }
}

/// Deleting any set of coordinates of total weight `2m+n-k` from an MDS code
/// leaves every word of the smaller graph exactly once.
pub fn check_injective_projections(c: &Code) -> bool {
    let p = c.params();
    let Some(weight) = p.length().checked_sub(c.declared_k()) else {
        return false;
    };
    CoordSelector::all_of_weight(p, weight).iter().all(|sel| {
        let proj = c.projection_multiset(sel).expect("selector in range");
        proj.windows(2).all(|w| w[0] != w[1])
            && vertex_count(DoobParams::new(p.m - sel.sh.len(), p.n - sel.k.len())) == Some(proj.len() as u64)
    })
}

/// Projections deleting weight `t < d` are MDS with distance `d - t`; faces
/// fixing weight `t <= k` are MDS with dimension `k - t` and distance `d`.
pub fn check_projection_and_face_mds(c: &Code) -> bool {
    let p = c.params();
    let d = c.mds_distance();
    if !c.is_mds() {
        return false;
    }
    for t in 1..p.length() {
        for sel in CoordSelector::all_of_weight(p, t) {
            if (t as isize) < d {
                let proj = c.projection(&sel).expect("selector in range");
                if proj.len() != c.len() || !proj.is_mds() {
                    return false;
                }
            }
            if t <= c.declared_k() && t < p.length() {
                let mut values = DoobVertex::zero(DoobParams::new(sel.sh.len(), sel.k.len()));
                // every face through some word: use the coordinates of each word
                for &w in c.words() {
                    let v = unpack(p, w);
                    values.sh = sel.sh.iter().map(|&i| v.sh[i]).collect();
                    values.k = sel.k.iter().map(|&j| v.k[j]).collect();
                    let face = c.face(&sel, &values).expect("selector in range");
                    if !face.is_mds() || face.mds_distance() != d {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A map `D(m,n) -> D(m,n)` from the equivalence group: target Shrikhande
/// coordinate `i` is `sh_autos[i]` applied to source coordinate
/// `sh_coord_perm[i]`, and likewise for K4 coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquivalenceMap {
    pub sh_autos: Vec<Permutation>,
    pub k_perms: Vec<[u8; 4]>,
    pub sh_coord_perm: Vec<usize>,
    pub k_coord_perm: Vec<usize>,
}

fn is_perm(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter().all(|&x| x < v.len() && !std::mem::replace(&mut seen[x], true))
}

impl EquivalenceMap {
    pub fn identity(p: DoobParams) -> EquivalenceMap {
        EquivalenceMap {
            sh_autos: vec![Permutation::identity(16); p.m],
            k_perms: vec![[0, 1, 2, 3]; p.n],
            sh_coord_perm: (0..p.m).collect(),
            k_coord_perm: (0..p.n).collect(),
        }
    }

    pub fn check(&self, p: DoobParams) -> Result<()> {
        if self.sh_autos.len() != p.m
            || self.sh_coord_perm.len() != p.m
            || self.k_perms.len() != p.n
            || self.k_coord_perm.len() != p.n
        {
            return Err(Error::DimensionMismatch {
                expected_m: p.m,
                expected_n: p.n,
                m: self.sh_autos.len(),
                n: self.k_perms.len(),
            });
        }
        let sh = &shrikhande().graph;
        let perms_ok = is_perm(&self.sh_coord_perm) && is_perm(&self.k_coord_perm);
        let autos_ok = self.sh_autos.iter().all(|t| t.is_isomorphism(sh, sh));
        let k_ok = self.k_perms.iter().all(|q| {
            let v: Vec<usize> = q.iter().map(|&x| x as usize).collect();
            is_perm(&v)
        });
        if !(perms_ok && autos_ok && k_ok) {
            return Err(Error::Structure("malformed equivalence map".into()));
        }
        Ok(())
    }

    pub fn apply_word(&self, p: DoobParams, w: u64) -> u64 {
        let sh: Vec<u8> = (0..p.m)
            .map(|i| self.sh_autos[i].apply(sh_coord(p, w, self.sh_coord_perm[i]) as usize) as u8)
            .collect();
        let k: Vec<u8> = (0..p.n)
            .map(|j| self.k_perms[j][k_coord(p, w, self.k_coord_perm[j]) as usize])
            .collect();
        word_from_coords(p, &sh, &k)
    }

    pub fn inverse(&self) -> EquivalenceMap {
        fn invert(perm: &[usize]) -> Vec<usize> {
            let mut inv = vec![0; perm.len()];
            for (i, &x) in perm.iter().enumerate() {
                inv[x] = i;
            }
            inv
        }
        let sh_inv = invert(&self.sh_coord_perm);
        let k_inv = invert(&self.k_coord_perm);
        EquivalenceMap {
            sh_autos: sh_inv.iter().map(|&i| self.sh_autos[i].inverse()).collect(),
            k_perms: k_inv
                .iter()
                .map(|&j| {
                    let mut q = [0u8; 4];
                    for (x, &y) in self.k_perms[j].iter().enumerate() {
                        q[y as usize] = x as u8;
                    }
                    q
                })
                .collect(),
            sh_coord_perm: sh_inv,
            k_coord_perm: k_inv,
        }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &EquivalenceMap) -> EquivalenceMap {
        EquivalenceMap {
            sh_autos: (0..self.sh_autos.len())
                .map(|i| self.sh_autos[i].compose(&other.sh_autos[self.sh_coord_perm[i]]))
                .collect(),
            k_perms: (0..self.k_perms.len())
                .map(|j| other.k_perms[self.k_coord_perm[j]].map(|x| self.k_perms[j][x as usize]))
                .collect(),
            sh_coord_perm: self.sh_coord_perm.iter().map(|&i| other.sh_coord_perm[i]).collect(),
            k_coord_perm: self.k_coord_perm.iter().map(|&j| other.k_coord_perm[j]).collect(),
        }
    }
}

/// Pair type of two words: counts of Shrikhande coordinates whose difference
/// lies in A, B, C, and of differing K4 coordinates. Invariant under the
/// equivalence group.
fn pair_type(p: DoobParams, a: u64, b: u64) -> u32 {
    let d = word_sub(a, b);
    let mut t = [0u32; 4];
    for i in 0..p.m {
        match Z4Pair::from_index(sh_coord(p, d, i)).class() {
            DiffClass::Zero => {}
            DiffClass::A => t[0] += 1,
            DiffClass::B => t[1] += 1,
            DiffClass::C => t[2] += 1,
        }
    }
    for j in 0..p.n {
        t[3] += (k_coord(p, d, j) != 0) as u32;
    }
    t[0] | t[1] << 8 | t[2] << 16 | t[3] << 24
}

/// For each word, the sorted multiset of its pair types to the other words.
fn word_signatures(c: &Code) -> Vec<Vec<u32>> {
    let p = c.params();
    let w = c.words();
    let mut sigs: Vec<Vec<u32>> = vec![Vec::with_capacity(w.len()); w.len()];
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let t = pair_type(p, w[i], w[j]);
            sigs[i].push(t);
            sigs[j].push(t);
        }
    }
    for s in &mut sigs {
        s.sort_unstable();
    }
    sigs
}

/// An equivalence invariant: the sorted list of word signatures.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeInvariant(Vec<Vec<u32>>);

pub fn code_invariant(c: &Code) -> CodeInvariant {
    let mut sigs = word_signatures(c);
    sigs.sort_unstable();
    CodeInvariant(sigs)
}

/// Per-coordinate invariant: the class histogram of differences over pairs
/// and the sorted value multiplicities.
fn column_invariant(col: &[u8], is_sh: bool) -> Vec<u32> {
    let mut hist = [0u32; 4];
    for i in 0..col.len() {
        for j in i + 1..col.len() {
            let slot = if is_sh {
                match (Z4Pair::from_index(col[i]) - Z4Pair::from_index(col[j])).class() {
                    DiffClass::Zero => 0,
                    DiffClass::A => 1,
                    DiffClass::B => 2,
                    DiffClass::C => 3,
                }
            } else {
                (col[i] != col[j]) as usize
            };
            hist[slot] += 1;
        }
    }
    let mut counts = [0u32; 16];
    for &v in col {
        counts[v as usize] += 1;
    }
    let mut counts = counts.to_vec();
    counts.sort_unstable();
    hist.iter().copied().chain(counts).collect()
}

fn columns(c: &Code) -> Vec<Vec<u8>> {
    let p = c.params();
    let mut cols = Vec::with_capacity(p.m + p.n);
    for i in 0..p.m {
        cols.push(c.words().iter().map(|&w| sh_coord(p, w, i)).collect());
    }
    for j in 0..p.n {
        cols.push(c.words().iter().map(|&w| k_coord(p, w, j)).collect());
    }
    cols
}

struct Matcher<'a> {
    m: usize,
    cols1: Vec<Vec<u8>>,
    inv1: Vec<Vec<u32>>,
    inv2: Vec<Vec<u32>>,
    // sorted prefix keys of the target code, per depth
    target: Vec<Vec<u64>>,
    anchor1: usize,
    anchor2: usize,
    cols2: &'a [Vec<u8>],
    tau: Vec<usize>,
    thetas: Vec<[u8; 16]>,
}

impl Matcher<'_> {
    fn run(&mut self, depth: usize, used: u64, keys: &[u64]) -> bool {
        let total = self.cols1.len();
        if depth == total {
            return true;
        }
        let is_sh = depth < self.m;
        let range = if is_sh { 0..self.m } else { self.m..total };
        let y = self.cols2[depth][self.anchor2];
        let mut next = vec![0u64; keys.len()];
        let mut sorted = vec![0u64; keys.len()];
        for s in range {
            if used >> s & 1 == 1 || self.inv1[s] != self.inv2[depth] {
                continue;
            }
            let x = self.cols1[s][self.anchor1];
            let candidates: Vec<[u8; 16]> = if is_sh {
                shrikhande()
                    .sending(x as usize, y as usize)
                    .iter()
                    .map(|t| {
                        let mut a = [0u8; 16];
                        a.copy_from_slice(t.images());
                        a
                    })
                    .collect()
            } else {
                k4_permutations()
                    .iter()
                    .filter(|q| q[x as usize] == y)
                    .map(|q| {
                        let mut a = [0u8; 16];
                        a[..4].copy_from_slice(q);
                        a
                    })
                    .collect()
            };
            for theta in candidates {
                for (w, key) in keys.iter().enumerate() {
                    next[w] = key << 4 | theta[self.cols1[s][w] as usize] as u64;
                }
                sorted.copy_from_slice(&next);
                sorted.sort_unstable();
                if sorted != self.target[depth] {
                    continue;
                }
                self.tau.push(s);
                self.thetas.push(theta);
                if self.run(depth + 1, used | 1 << s, &next) {
                    return true;
                }
                self.tau.pop();
                self.thetas.pop();
            }
        }
        false
    }
}

/// Decides whether `c1` and `c2` are equivalent, returning a map `e` with
/// `e(c1) = c2` when they are.
pub fn codes_equivalent(c1: &Code, c2: &Code) -> Result<Option<EquivalenceMap>> {
    let p = c1.params();
    if c2.params() != p {
        return Err(Error::DimensionMismatch {
            expected_m: p.m,
            expected_n: p.n,
            m: c2.params().m,
            n: c2.params().n,
        });
    }
    if c1.len() != c2.len() {
        return Ok(None);
    }
    if c1.is_empty() {
        return Ok(Some(EquivalenceMap::identity(p)));
    }
    let sig1 = word_signatures(c1);
    let sig2 = word_signatures(c2);
    let mut s1 = sig1.clone();
    let mut s2 = sig2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(None);
    }
    let cols1 = columns(c1);
    let cols2 = columns(c2);
    let inv = |cols: &[Vec<u8>]| -> Vec<Vec<u32>> {
        cols.iter()
            .enumerate()
            .map(|(i, col)| column_invariant(col, i < p.m))
            .collect()
    };
    let inv1 = inv(&cols1);
    let inv2 = inv(&cols2);
    let mut a = inv1.clone();
    let mut b = inv2.clone();
    a[..p.m].sort();
    b[..p.m].sort();
    a[p.m..].sort();
    b[p.m..].sort();
    if a != b {
        return Ok(None);
    }
    let mut target = Vec::with_capacity(cols2.len());
    let mut keys = vec![0u64; c2.len()];
    for col in &cols2 {
        for (k, &v) in keys.iter_mut().zip(col) {
            *k = *k << 4 | v as u64;
        }
        let mut s = keys.clone();
        s.sort_unstable();
        target.push(s);
    }
    // anchor on the word whose signature is rarest in c2
    let mut freq: HashMap<&Vec<u32>, usize> = HashMap::new();
    for s in &sig2 {
        *freq.entry(s).or_default() += 1;
    }
    let anchor1 = (0..sig1.len()).min_by_key(|&i| (freq[&sig1[i]], i)).unwrap();
    for anchor2 in (0..sig2.len()).filter(|&j| sig2[j] == sig1[anchor1]) {
        let mut matcher = Matcher {
            m: p.m,
            cols1: cols1.clone(),
            inv1: inv1.clone(),
            inv2: inv2.clone(),
            target: target.clone(),
            anchor1,
            anchor2,
            cols2: &cols2,
            tau: Vec::new(),
            thetas: Vec::new(),
        };
        if matcher.run(0, 0, &vec![0u64; c1.len()]) {
            let e = EquivalenceMap {
                sh_autos: matcher.thetas[..p.m]
                    .iter()
                    .map(|t| Permutation::from_slice(t))
                    .collect(),
                k_perms: matcher.thetas[p.m..]
                    .iter()
                    .map(|t| [t[0], t[1], t[2], t[3]])
                    .collect(),
                sh_coord_perm: matcher.tau[..p.m].to_vec(),
                k_coord_perm: matcher.tau[p.m..].iter().map(|&s| s - p.m).collect(),
            };
            if c1.apply_equivalence(&e)? != *c2 {
                return Err(Error::Structure("equivalence witness failed re-verification".into()));
            }
            return Ok(Some(e));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::p;

    fn d20() -> DoobParams {
        DoobParams::new(2, 0)
    }

    fn sh_code(k: usize, rows: &[(&str, &str)]) -> Code {
        let words = rows
            .iter()
            .map(|(a, b)| word_from_coords(d20(), &[p(a).index(), p(b).index()], &[]))
            .collect();
        Code::from_words(d20(), k, words).unwrap()
    }

    fn first_d3() -> Code {
        let a = "00 02 20 22 01 03 21 23 10 30 12 32 11 13 31 33";
        let f = "00 02 20 22 23 21 03 01 12 32 10 30 31 33 11 13";
        let rows: Vec<_> = a.split(' ').zip(f.split(' ')).collect();
        sh_code(2, &rows)
    }

    fn second_d3() -> Code {
        let a = "00 02 20 22 01 03 21 23 10 12 31 33 11 13 30 32";
        let f = "00 02 23 21 22 20 01 03 32 30 10 12 13 11 31 33";
        let rows: Vec<_> = a.split(' ').zip(f.split(' ')).collect();
        sh_code(2, &rows)
    }

    #[test]
    fn word_arithmetic() {
        let p11 = DoobParams::new(1, 1);
        let w = |s: &str, k: u8| word_from_coords(p11, &[p(s).index()], &[k]);
        assert_eq!(word_add(w("02", 3), w("21", 2)), w("23", 1));
        assert_eq!(word_neg(w("13", 1)), w("31", 3));
        assert_eq!(word_distance(p11, w("00", 0), w("02", 1)), 3);
        assert_eq!(word_distance(p11, w("00", 0), w("33", 0)), 1);
        assert_eq!(word_distance(p11, w("12", 2), w("12", 2)), 0);
        let v = unpack(p11, w("21", 3));
        assert_eq!(v.to_string(), "21 ; 3");
        assert_eq!(pack(p11, &v).unwrap(), w("21", 3));
        assert_eq!(format_word(DoobParams::new(2, 0), 0x2f), "02 33 ;");
        assert_eq!(format_word(DoobParams::new(0, 2), 0b1001), "; 2 1");
    }

    #[test]
    fn weight_matches_vertex_distance() {
        let q = DoobParams::new(3, 2);
        let mut x = 0x0123_4567_89ab_cdefu64;
        for _ in 0..200 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let a = x & 0xffff;
            let b = (x >> 20) & 0xffff;
            let expect = crate::graphs::doob_distance(q, &unpack(q, a), &unpack(q, b)).unwrap();
            assert_eq!(word_distance(q, a, b), expect);
        }
    }

    #[test]
    fn min_distance_and_mds() {
        let c = first_d3();
        assert_eq!(c.min_distance().unwrap(), 3);
        assert!(c.is_mds());
        let mut words = c.words().to_vec();
        words.pop();
        assert!(!Code::from_words(d20(), 2, words.clone()).unwrap().is_mds());
        // replace a word by one at distance 2 from another word
        let target = words[0];
        let perturbed = word_from_coords(d20(), &[sh_coord(d20(), target, 0), sh_coord(d20(), target, 1) ^ 2], &[]);
        if !c.contains(perturbed) {
            words.push(perturbed);
            let bad = Code::from_words(d20(), 2, words).unwrap();
            assert_eq!(bad.len(), 16);
            assert!(!bad.is_mds());
        }
        let one = Code::from_words(d20(), 0, vec![5]).unwrap();
        assert!(matches!(one.min_distance(), Err(Error::TooFewWords)));
        let pair = Code::from_words(DoobParams::new(0, 1), 0, vec![0, 1]).unwrap();
        assert_eq!(pair.min_distance().unwrap(), 1);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            Code::from_words(d20(), 1, vec![3, 3]),
            Err(Error::DuplicateWord(_))
        ));
        assert!(Code::from_words(d20(), 1, vec![1 << 8]).is_err());
    }

    #[test]
    fn projections_and_faces() {
        let c = first_d3();
        assert_eq!(c.projection(&CoordSelector::empty()).unwrap(), c);
        let proj = c.projection(&CoordSelector::new(vec![0], vec![]).unwrap()).unwrap();
        assert_eq!(proj.len(), 16);
        assert!(check_injective_projections(&c));
        assert!(check_projection_and_face_mds(&c));
        let face = c.face(&CoordSelector::empty(), &DoobVertex::zero(DoobParams::new(0, 0))).unwrap();
        assert_eq!(face, c);
        let sel = CoordSelector::new(vec![0], vec![]).unwrap();
        let f = c.face(&sel, &DoobVertex::new(vec![p("00")], vec![])).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.declared_k(), 0);
        assert!(c.projection(&CoordSelector::new(vec![2], vec![]).unwrap()).is_err());
        assert!(CoordSelector::new(vec![1, 0], vec![]).is_err());
        assert!(c.face(&sel, &DoobVertex::new(vec![], vec![Z4::new(0)])).is_err());
    }

    #[test]
    fn equivalence_application() {
        let c = first_d3();
        let id = EquivalenceMap::identity(d20());
        assert_eq!(c.apply_equivalence(&id).unwrap(), c);
        let swapped = c.permute_coordinates(&[1, 0], &[]).unwrap();
        assert_eq!(swapped.min_distance().unwrap(), 3);
        assert!(swapped.is_mds());
        let mut e = id.clone();
        e.sh_autos[0] = Permutation::translation(p("02"));
        let shifted = c.apply_equivalence(&e).unwrap();
        assert_eq!(shifted.min_distance().unwrap(), 3);
        assert!(c.apply_equivalence(&EquivalenceMap::identity(DoobParams::new(1, 0))).is_err());
    }

    #[test]
    fn equivalence_decisions() {
        let c = first_d3();
        let w = codes_equivalent(&c, &c).unwrap().unwrap();
        assert_eq!(c.apply_equivalence(&w).unwrap(), c);
        assert!(codes_equivalent(&c, &second_d3()).unwrap().is_none());
        let group = &shrikhande().group;
        let e = EquivalenceMap {
            sh_autos: vec![group[17], group[101]],
            k_perms: vec![],
            sh_coord_perm: vec![1, 0],
            k_coord_perm: vec![],
        };
        let img = second_d3().apply_equivalence(&e).unwrap();
        let w = codes_equivalent(&second_d3(), &img).unwrap().unwrap();
        assert_eq!(second_d3().apply_equivalence(&w).unwrap(), img);
        let back = codes_equivalent(&img, &second_d3()).unwrap().unwrap();
        assert_eq!(img.apply_equivalence(&back).unwrap(), second_d3());
        assert_eq!(img.apply_equivalence(&e.inverse()).unwrap(), second_d3());
        assert!(codes_equivalent(&c, &Code::from_words(DoobParams::new(1, 2), 2, vec![]).unwrap()).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let q = DoobParams::new(2, 2);
        let group = &shrikhande().group;
        let perms = k4_permutations();
        let e = EquivalenceMap {
            sh_autos: vec![group[5], group[77]],
            k_perms: vec![perms[3], perms[20]],
            sh_coord_perm: vec![1, 0],
            k_coord_perm: vec![1, 0],
        };
        let f = EquivalenceMap {
            sh_autos: vec![group[150], group[9]],
            k_perms: vec![perms[11], perms[1]],
            sh_coord_perm: vec![0, 1],
            k_coord_perm: vec![1, 0],
        };
        for w in [0u64, 0x123, 0xfff, 0xabc] {
            assert_eq!(e.inverse().apply_word(q, e.apply_word(q, w)), w);
            assert_eq!(e.compose(&f).apply_word(q, w), e.apply_word(q, f.apply_word(q, w)));
        }
    }
}
