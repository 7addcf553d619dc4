//! Maximum independent sets (cocliques) of the 16-vertex factor graphs and
//! partitions of the Shrikhande graph into cocliques.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{DiffClass, Z4Pair};
use crate::error::{Error, Result};
use crate::graphs::{bits, shrikhande, FactorGraph, FactorKind, Permutation};

/// A set of Shrikhande vertices as a bitmask over indices `4a+b`.
pub type VertexSet = u16;

pub fn vertex_set(vs: &[Z4Pair]) -> VertexSet {
    vs.iter().fold(0, |m, v| m | 1 << v.index())
}

pub fn members(set: VertexSet) -> Vec<Z4Pair> {
    bits(set).map(|v| Z4Pair::from_index(v as u8)).collect()
}

pub fn format_set(set: VertexSet) -> String {
    let parts: Vec<String> = members(set).iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CocliqueType {
    Linear,
    Semilinear,
}

pub fn is_independent(g: &FactorGraph, set: VertexSet) -> bool {
    bits(set).all(|v| g.neighbors(v) & set == 0)
}

/// All maximum independent sets of `g`, as sorted bitmasks.
pub fn enumerate_cocliques(g: &FactorGraph) -> Vec<VertexSet> {
    fn grow(g: &FactorGraph, chosen: VertexSet, cands: VertexSet, best: &mut usize, out: &mut Vec<VertexSet>) {
        let size = chosen.count_ones() as usize;
        if cands == 0 {
            if size > *best {
                *best = size;
                out.clear();
            }
            if size == *best {
                out.push(chosen);
            }
            return;
        }
        if size + (cands.count_ones() as usize) < *best {
            return;
        }
        let v = cands.trailing_zeros() as usize;
        let rest = cands & !(1 << v);
        grow(g, chosen | 1 << v, rest & !g.neighbors(v), best, out);
        grow(g, chosen, rest, best, out);
    }
    let mut out = Vec::new();
    let mut best = 0;
    grow(g, 0, g.all_mask(), &mut best, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

/// Linear iff all pairwise differences have order 2.
pub fn coclique_type(c: VertexSet) -> Result<CocliqueType> {
    let sh = &shrikhande().graph;
    if c.count_ones() != 4 || !is_independent(sh, c) {
        return Err(Error::NotACoclique(format_set(c)));
    }
    let vs = members(c);
    let linear = vs
        .iter()
        .all(|&x| vs.iter().all(|&y| x == y || (x - y).class() == DiffClass::B));
    Ok(if linear {
        CocliqueType::Linear
    } else {
        CocliqueType::Semilinear
    })
}

/// Orbit representatives of the cocliques under the automorphism group,
/// each as the minimum mask of its orbit.
pub fn coclique_classes(g: &FactorGraph) -> Vec<VertexSet> {
    let group = g.automorphism_group();
    let reps: BTreeSet<VertexSet> = enumerate_cocliques(g)
        .into_iter()
        .map(|c| group.iter().map(|t| t.map_mask(c)).min().unwrap())
        .collect();
    reps.into_iter().collect()
}

/// Every vertex outside a coclique is adjacent to exactly two of its members.
pub fn verify_outside_neighbors(g: &FactorGraph) -> bool {
    enumerate_cocliques(g).iter().all(|&c| {
        (0..g.vertex_count())
            .filter(|&v| c >> v & 1 == 0)
            .all(|v| (g.neighbors(v) & c).count_ones() == 2)
    })
}

/// Four disjoint cocliques covering the Shrikhande graph. Parts are kept in
/// the order given; `normalized` sorts them by smallest member.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CocliquePartition {
    parts: [VertexSet; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PartitionClass {
    A,
    B,
    C,
}

impl fmt::Display for PartitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionClass::A => "a",
            PartitionClass::B => "b",
            PartitionClass::C => "c",
        })
    }
}

impl CocliquePartition {
    pub fn new(parts: [VertexSet; 4]) -> Result<CocliquePartition> {
        let sh = &shrikhande().graph;
        let mut union = 0u16;
        for &part in &parts {
            if part.count_ones() != 4 || !is_independent(sh, part) {
                return Err(Error::NotACoclique(format_set(part)));
            }
            if union & part != 0 {
                return Err(Error::Structure(format!(
                    "parts overlap at {}",
                    format_set(union & part)
                )));
            }
            union |= part;
        }
        Ok(CocliquePartition { parts })
    }

    /// Parses four whitespace-separated groups of four comma-separated pairs,
    /// e.g. `00,02,20,22 01,03,21,23 10,12,30,32 11,13,31,33`. Braces around
    /// a group, as printed by `Display`, are allowed.
    pub fn parse(s: &str) -> Result<CocliquePartition> {
        let groups: Vec<&str> = s.split_whitespace().collect();
        if groups.len() != 4 {
            return Err(Error::BadToken(s.to_string()));
        }
        let mut parts = [0u16; 4];
        for (part, g) in parts.iter_mut().zip(groups) {
            let g = g.strip_prefix('{').and_then(|g| g.strip_suffix('}')).unwrap_or(g);
            let vs = g
                .split(',')
                .map(str::parse::<Z4Pair>)
                .collect::<Result<Vec<_>>>()?;
            if vs.len() != 4 {
                return Err(Error::BadToken(g.to_string()));
            }
            *part = vertex_set(&vs);
        }
        CocliquePartition::new(parts)
    }

    pub fn parts(&self) -> [VertexSet; 4] {
        self.parts
    }

    /// Index of the part containing `v`.
    pub fn part_of(&self, v: Z4Pair) -> usize {
        self.parts
            .iter()
            .position(|&p| p >> v.index() & 1 == 1)
            .expect("partition covers every vertex")
    }

    pub fn normalized(&self) -> CocliquePartition {
        let mut parts = self.parts;
        parts.sort_unstable_by_key(|p| p.trailing_zeros());
        CocliquePartition { parts }
    }

    pub fn map(&self, t: &Permutation) -> CocliquePartition {
        CocliquePartition {
            parts: self.parts.map(|p| t.map_mask(p)),
        }
    }

    pub fn linear_part_count(&self) -> usize {
        self.parts
            .iter()
            .filter(|&&p| coclique_type(p).ok() == Some(CocliqueType::Linear))
            .count()
    }

    /// Minimum over the automorphism group of the sorted part masks; equal
    /// for two partitions iff they are equivalent.
    pub fn canonical_form(&self) -> [VertexSet; 4] {
        shrikhande()
            .group
            .iter()
            .map(|t| {
                let mut parts = self.parts.map(|p| t.map_mask(p));
                parts.sort_unstable();
                parts
            })
            .min()
            .unwrap()
    }

    pub fn equivalent(&self, other: &CocliquePartition) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// True when `t` maps every part onto itself.
    pub fn is_preserved_by(&self, t: &Permutation) -> bool {
        self.parts.iter().all(|&p| t.map_mask(p) == p)
    }
}

impl fmt::Display for CocliquePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|&p| format_set(p)).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for CocliquePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CocliquePartition({self})")
    }
}

/// All unordered partitions of the Shrikhande graph into four cocliques,
/// normalized and sorted.
pub fn enumerate_partitions() -> Vec<CocliquePartition> {
    let cocliques = enumerate_cocliques(&shrikhande().graph);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    cover(&cocliques, 0, &mut stack, &mut out);
    out.sort();
    out
}

fn cover(cocliques: &[VertexSet], used: u16, stack: &mut Vec<VertexSet>, out: &mut Vec<CocliquePartition>) {
    if used == u16::MAX {
        out.push(CocliquePartition {
            parts: [stack[0], stack[1], stack[2], stack[3]],
        });
        return;
    }
    // the part holding the smallest uncovered vertex
    let v = (!used).trailing_zeros();
    for &c in cocliques {
        if c >> v & 1 == 1 && c & used == 0 {
            stack.push(c);
            cover(cocliques, used | c, stack, out);
            stack.pop();
        }
    }
}

fn rep(parts: [&[&str]; 4]) -> CocliquePartition {
    let parts = parts.map(|p| {
        vertex_set(&p.iter().map(|s| s.parse().unwrap()).collect::<Vec<Z4Pair>>())
    });
    CocliquePartition::new(parts).expect("representative is a partition")
}

/// The fixed representative of each partition class.
pub fn class_representative(class: PartitionClass) -> CocliquePartition {
    match class {
        PartitionClass::A => rep([
            &["00", "02", "20", "22"],
            &["01", "03", "21", "23"],
            &["10", "12", "30", "32"],
            &["11", "13", "31", "33"],
        ]),
        PartitionClass::B => rep([
            &["00", "02", "21", "23"],
            &["01", "03", "22", "20"],
            &["10", "12", "30", "32"],
            &["11", "13", "31", "33"],
        ]),
        PartitionClass::C => rep([
            &["00", "02", "21", "23"],
            &["01", "03", "20", "22"],
            &["10", "12", "31", "33"],
            &["11", "13", "30", "32"],
        ]),
    }
}

pub const PARTITION_CLASSES: [PartitionClass; 3] = [PartitionClass::A, PartitionClass::B, PartitionClass::C];

/// Class of `p` under the automorphism group, or an error if it matches none
/// of the three representatives.
pub fn classify_partition(p: &CocliquePartition) -> Result<PartitionClass> {
    let form = p.canonical_form();
    PARTITION_CLASSES
        .into_iter()
        .find(|&c| class_representative(c).canonical_form() == form)
        .ok_or_else(|| Error::Structure(format!("partition {p} matches no known class")))
}

/// Cocliques of the Shrikhande graph containing vertex `v`.
pub fn cocliques_through(v: Z4Pair) -> Vec<VertexSet> {
    enumerate_cocliques(&shrikhande().graph)
        .into_iter()
        .filter(|c| c >> v.index() & 1 == 1)
        .collect()
}

/// Convenience for the factor kinds that have cocliques.
pub fn enumerate_cocliques_of(kind: FactorKind) -> Result<Vec<VertexSet>> {
    match kind {
        FactorKind::Shrikhande | FactorKind::K4Squared => Ok(enumerate_cocliques(&FactorGraph::build(kind))),
        FactorKind::K4 => Err(Error::Unsupported("cocliques of K4 are single vertices".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::p;
    use crate::graphs::k4_squared;

    fn set(vs: &[&str]) -> VertexSet {
        vertex_set(&vs.iter().map(|s| p(s)).collect::<Vec<_>>())
    }

    #[test]
    fn coclique_census() {
        let all = enumerate_cocliques(&shrikhande().graph);
        assert_eq!(all.len(), 16);
        assert!(all.iter().all(|c| c.count_ones() == 4));
        assert!(all.contains(&set(&["00", "02", "20", "22"])));
        for v in Z4Pair::all() {
            let through = cocliques_through(v);
            assert_eq!(through.len(), 4);
            let linear = through
                .iter()
                .filter(|&&c| coclique_type(c).unwrap() == CocliqueType::Linear)
                .count();
            assert_eq!(linear, 1);
        }
        assert_eq!(coclique_classes(&shrikhande().graph).len(), 2);
        assert_eq!(enumerate_cocliques(k4_squared()).len(), 24);
    }

    #[test]
    fn coclique_types() {
        assert_eq!(coclique_type(set(&["00", "02", "20", "22"])).unwrap(), CocliqueType::Linear);
        assert_eq!(coclique_type(set(&["00", "02", "21", "23"])).unwrap(), CocliqueType::Semilinear);
        assert_eq!(coclique_type(set(&["00", "22", "13", "31"])).unwrap(), CocliqueType::Semilinear);
        assert!(coclique_type(set(&["00", "01", "20", "22"])).is_err());
        assert!(coclique_type(set(&["00", "02"])).is_err());
    }

    #[test]
    fn outside_neighbors() {
        assert!(verify_outside_neighbors(&shrikhande().graph));
        assert!(verify_outside_neighbors(k4_squared()));
    }

    #[test]
    fn partition_census() {
        let parts = enumerate_partitions();
        assert!(parts.iter().all(|p| p.parts().iter().fold(0u16, |u, &x| u | x) == u16::MAX));
        assert!(parts.contains(&class_representative(PartitionClass::A).normalized()));
        let forms: BTreeSet<_> = parts.iter().map(|p| p.canonical_form()).collect();
        assert_eq!(forms.len(), 3);
        for p in &parts {
            classify_partition(p).unwrap();
        }
    }

    #[test]
    fn representatives() {
        let a = class_representative(PartitionClass::A);
        let b = class_representative(PartitionClass::B);
        let c = class_representative(PartitionClass::C);
        assert_eq!(classify_partition(&a).unwrap(), PartitionClass::A);
        assert_eq!(classify_partition(&b).unwrap(), PartitionClass::B);
        assert_eq!(classify_partition(&c).unwrap(), PartitionClass::C);
        assert_eq!(a.linear_part_count(), 4);
        assert_eq!(b.linear_part_count(), 2);
        assert_eq!(c.linear_part_count(), 0);
        for t in &shrikhande().group {
            assert_eq!(classify_partition(&b.map(t)).unwrap(), PartitionClass::B);
        }
    }

    #[test]
    fn parse_partition() {
        let a = CocliquePartition::parse("00,02,20,22 01,03,21,23 10,12,30,32 11,13,31,33").unwrap();
        assert_eq!(a, class_representative(PartitionClass::A));
        assert!(CocliquePartition::parse("00,02,20,22 01,03,21,23 10,12,30,32").is_err());
        assert!(CocliquePartition::parse("00,01,20,22 02,03,21,23 10,12,30,32 11,13,31,33").is_err());
        assert_eq!(a.part_of(p("23")), 1);
        assert_eq!(a.to_string(), "{00,02,20,22} {01,03,21,23} {10,12,30,32} {11,13,31,33}");
        assert_eq!(CocliquePartition::parse(&a.to_string()).unwrap(), a);
    }
}
