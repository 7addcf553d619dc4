//! Two-dimensional codes: `(2+0,4^2,3)`, `(1+2,4^2,3)` and their distance-4
//! extensions `(2+1,4^2,4)`, `(1+3,4^2,4)`.
//!
//! A 16-word code of the first two kinds is the graph of a bijection `f` from
//! the first (Shrikhande) coordinate to the remaining coordinates, read as a
//! vertex of the Shrikhande graph or of `K4 x K4`.

use crate::classification::ClassificationResult;
use crate::cocliques::{class_representative, CocliquePartition, PartitionClass, PARTITION_CLASSES};
use crate::codes::{codes_equivalent, k_coord, sh_coord, word_distance, word_from_coords, Code};
use crate::error::{Error, Result};
use crate::graphs::{bits, find_isomorphism, k4_squared, shrikhande, DoobParams, FactorGraph, FactorKind};

/// A `(2+0,4^2,3)` or `(1+2,4^2,3)` code seen as `a -> f(a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairedCode {
    pub second: FactorKind,
    /// `f[a]`: index `4x+y` of the second part of the word whose first
    /// coordinate is `a`.
    pub f: [u8; 16],
}

impl PairedCode {
    pub fn params(&self) -> DoobParams {
        match self.second {
            FactorKind::Shrikhande => DoobParams::new(2, 0),
            _ => DoobParams::new(1, 2),
        }
    }

    pub fn second_graph(&self) -> &'static FactorGraph {
        match self.second {
            FactorKind::Shrikhande => &shrikhande().graph,
            _ => k4_squared(),
        }
    }

    pub fn word(&self, a: usize) -> u64 {
        let p = self.params();
        let y = self.f[a];
        match self.second {
            FactorKind::Shrikhande => word_from_coords(p, &[a as u8, y], &[]),
            _ => word_from_coords(p, &[a as u8], &[y >> 2, y & 3]),
        }
    }

    pub fn to_code(&self) -> Code {
        Code::from_words(self.params(), 2, (0..16).map(|a| self.word(a)).collect())
            .expect("a bijection gives 16 distinct words")
    }

    /// `a -> f^-1(a)`, the same code read from the other side.
    pub fn inverse(&self) -> [u8; 16] {
        let mut inv = [0u8; 16];
        for (a, &y) in self.f.iter().enumerate() {
            inv[y as usize] = a as u8;
        }
        inv
    }
}

/// Reads an MDS `(2+0,4^2,3)` or `(1+2,4^2,3)` code as a bijection.
pub fn paired(c: &Code) -> Result<PairedCode> {
    let p = c.params();
    let second = match (p.m, p.n) {
        (2, 0) => FactorKind::Shrikhande,
        (1, 2) => FactorKind::K4Squared,
        _ => {
            return Err(Error::Unsupported(format!(
                "expected a code in D(2,0) or D(1,2), got {p}"
            )))
        }
    };
    if c.declared_k() != 2 || !c.is_mds() {
        return Err(Error::NotMds(format!("{c:?}")));
    }
    let mut f = [u8::MAX; 16];
    for &w in c.words() {
        let a = sh_coord(p, w, 0) as usize;
        let y = match second {
            FactorKind::Shrikhande => sh_coord(p, w, 1),
            _ => k_coord(p, w, 0) << 2 | k_coord(p, w, 1),
        };
        if f[a] != u8::MAX {
            return Err(Error::Structure("first coordinate repeats".into()));
        }
        f[a] = y;
    }
    Ok(PairedCode { second, f })
}

/// The coclique partition of the first coordinate attached to a code: the
/// complement of (first-coordinate edges) + (edges pulled back through `f`)
/// is four disjoint `K4`s, whose vertex sets are the parts.
pub fn code_partition(c: &Code) -> Result<CocliquePartition> {
    let pc = paired(c)?;
    let sh = &shrikhande().graph;
    let second = pc.second_graph();
    let mut parts = Vec::new();
    let mut comp = [0u16; 16];
    for a in 0..16 {
        let ef = (0..16)
            .filter(|&b| second.adjacent(pc.f[a] as usize, pc.f[b] as usize))
            .fold(0u16, |m, b| m | 1 << b);
        if ef & sh.neighbors(a) != 0 {
            return Err(Error::Structure(format!("edge sets meet at vertex {a}")));
        }
        comp[a] = !(ef | sh.neighbors(a)) & !(1 << a);
    }
    for a in 0..16 {
        let closed = comp[a] | 1 << a;
        if closed.count_ones() != 4 || bits(comp[a]).any(|b| comp[b] | 1 << b != closed) {
            return Err(Error::Structure("complement is not four disjoint K4".into()));
        }
        if !parts.contains(&closed) {
            parts.push(closed);
        }
    }
    parts.sort_unstable_by_key(|p| p.trailing_zeros());
    CocliquePartition::new([parts[0], parts[1], parts[2], parts[3]])
}

/// The images of the parts of `code_partition` under `f`.
pub fn image_partition(c: &Code) -> Result<[u16; 4]> {
    let pc = paired(c)?;
    let l = code_partition(c)?;
    Ok(l.parts().map(|part| bits(part).fold(0u16, |m, a| m | 1 << pc.f[a])))
}

/// Checks that two distinct words are at distance 4 when their first
/// coordinates share a part and 3 otherwise.
pub fn check_distance_dichotomy(c: &Code) -> Result<bool> {
    let pc = paired(c)?;
    let l = code_partition(c)?;
    let p = pc.params();
    for a in 0..16 {
        for b in a + 1..16 {
            let same = l.part_of(crate::algebra::Z4Pair::from_index(a as u8))
                == l.part_of(crate::algebra::Z4Pair::from_index(b as u8));
            let d = word_distance(p, pc.word(a), pc.word(b));
            if d != if same { 4 } else { 3 } {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Neighbour masks of the graph on Shrikhande vertices joining pairs at
/// distance 2 that lie in different parts.
pub fn partition_graph(p: &CocliquePartition) -> FactorGraph {
    let sh = &shrikhande().graph;
    let z = |v: usize| crate::algebra::Z4Pair::from_index(v as u8);
    let adj: Vec<u16> = (0..16)
        .map(|a| {
            (0..16)
                .filter(|&b| sh.distance(a, b) == 2 && p.part_of(z(a)) != p.part_of(z(b)))
                .fold(0u16, |m, b| m | 1 << b)
        })
        .collect();
    FactorGraph::from_neighbor_masks(16, &adj)
}

/// A code whose attached partition is `p`: `f` is an isomorphism from
/// `partition_graph(p)` onto the Shrikhande graph or onto `K4 x K4`.
pub fn partition_to_code(p: &CocliquePartition) -> Result<Code> {
    let g = partition_graph(p);
    let (second, iso) = if let Some(iso) = find_isomorphism(&g, &shrikhande().graph) {
        (FactorKind::Shrikhande, iso)
    } else if let Some(iso) = find_isomorphism(&g, k4_squared()) {
        (FactorKind::K4Squared, iso)
    } else {
        return Err(Error::Structure(format!("partition graph of {p} matches neither factor")));
    };
    let mut f = [0u8; 16];
    for (a, y) in f.iter_mut().enumerate() {
        *y = iso.apply(a) as u8;
    }
    let code = PairedCode { second, f }.to_code();
    if !code.is_mds() {
        return Err(Error::Structure(format!("code built from {p} is not MDS")));
    }
    Ok(code)
}

/// Appends a K4 coordinate whose value is the index of the part (ordered by
/// smallest member) holding the first coordinate.
pub fn extend_to_d4(c: &Code) -> Result<Code> {
    let l = code_partition(c)?;
    let p = c.params();
    let q = DoobParams::new(p.m, p.n + 1);
    let words = c
        .words()
        .iter()
        .map(|&w| {
            let a = crate::algebra::Z4Pair::from_index(sh_coord(p, w, 0));
            w << 2 | l.part_of(a) as u64
        })
        .collect();
    let out = Code::from_words(q, 2, words)?;
    if !out.is_mds() || out.distance_distribution().iter().enumerate().any(|(d, &n)| n > 0 && d != 4) {
        return Err(Error::Structure("extension is not an equidistant MDS code".into()));
    }
    Ok(out)
}

/// The d=3 codes built from the three partition classes, keyed by class.
pub fn d3_codes() -> Result<Vec<(PartitionClass, Code)>> {
    PARTITION_CLASSES
        .iter()
        .map(|&cl| Ok((cl, partition_to_code(&class_representative(cl))?)))
        .collect()
}

/// Classification for `k = 2` and `2m+n` in {4, 5}.
pub fn classify_k2(m: usize, n: usize) -> Result<ClassificationResult> {
    let base: Vec<Code> = d3_codes()?
        .into_iter()
        .map(|(_, c)| c)
        .filter(|c| {
            let p = c.params();
            (p.m, p.n) == (m, n) || (p.m, p.n + 1) == (m, n)
        })
        .collect();
    let reps: Vec<Code> = match (m, n) {
        (2, 0) | (1, 2) => base,
        (2, 1) | (1, 3) => base.iter().map(extend_to_d4).collect::<Result<_>>()?,
        _ => {
            return Err(Error::Unsupported(format!(
                "k = 2 classification covers D(2,0), D(1,2), D(2,1), D(1,3); got D({m},{n})"
            )))
        }
    };
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if codes_equivalent(a, b)?.is_some() {
                return Err(Error::Structure("representatives are equivalent".into()));
            }
        }
    }
    Ok(ClassificationResult::new(m, n, 2, reps))
}
