//! Three-dimensional codes `(2+1,4^3,3)`, `(1+3,4^3,3)` and the distance-4
//! codes `(2+2,4^3,4)`, `(1+4,4^3,4)`.
//!
//! Words of the d=3 codes are laid out `f a ; i`: the first coordinate is
//! `f_i(a)`, the last K4 coordinate is `i`, and fixing it to `i` leaves a
//! two-dimensional code.

use serde::Serialize;

use crate::algebra::Z4Pair;
use crate::classification::k2::{code_partition, d3_codes, image_partition, paired};
use crate::classification::ClassificationResult;
use crate::cocliques::{classify_partition, CocliquePartition, PartitionClass};
use crate::codes::{codes_equivalent, k_coord, sh_coord, Code, CoordSelector};
use crate::error::{Error, Result};
use crate::graphs::{k4_permutations, shrikhande, DoobParams, DoobVertex, Permutation};

/// Three automorphisms that fix every part of a partition, move every
/// vertex to distance 2, and pairwise differ at distance 2 everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphismTriple {
    /// Sorted by the image of `00`.
    pub taus: [Permutation; 3],
    /// Automorphisms passing the first two conditions.
    pub candidates: usize,
}

impl AutomorphismTriple {
    /// `tau_0 = id` followed by the triple.
    pub fn with_identity(&self) -> [Permutation; 4] {
        [Permutation::identity(16), self.taus[0], self.taus[1], self.taus[2]]
    }
}

fn moves_everything_by_two(a: &Permutation, b: &Permutation) -> bool {
    let sh = &shrikhande().graph;
    (0..16).all(|s| sh.distance(a.apply(s), b.apply(s)) == 2)
}

pub fn automorphism_triple(p: &CocliquePartition) -> Result<AutomorphismTriple> {
    let id = Permutation::identity(16);
    let cand: Vec<Permutation> = shrikhande()
        .group
        .iter()
        .filter(|t| p.is_preserved_by(t) && moves_everything_by_two(t, &id))
        .copied()
        .collect();
    let mut found = Vec::new();
    for i in 0..cand.len() {
        for j in i + 1..cand.len() {
            if !moves_everything_by_two(&cand[i], &cand[j]) {
                continue;
            }
            for l in j + 1..cand.len() {
                if moves_everything_by_two(&cand[i], &cand[l]) && moves_everything_by_two(&cand[j], &cand[l]) {
                    found.push([cand[i], cand[j], cand[l]]);
                }
            }
        }
    }
    match found.as_slice() {
        [t] => {
            let mut taus = *t;
            taus.sort_by_key(|t| t.apply(0));
            Ok(AutomorphismTriple {
                taus,
                candidates: cand.len(),
            })
        }
        _ => Err(Error::Structure(format!(
            "partition {p} has {} admissible triples, expected 1",
            found.len()
        ))),
    }
}

/// `{(tau_i(x), rest ; i)}` over the words `(x, rest)` of a d=3 two-dimensional
/// code, `tau` the triple of its partition.
pub fn extend_k3_d3(d0: &Code) -> Result<Code> {
    let l = code_partition(d0)?;
    let taus = automorphism_triple(&l)?.with_identity();
    let p = d0.params();
    let q = DoobParams::new(p.m, p.n + 1);
    let x_shift = 2 * p.n + 4 * (p.m - 1);
    let mut words = Vec::with_capacity(64);
    for &w in d0.words() {
        let x = sh_coord(p, w, 0) as usize;
        let rest = w & !(15u64 << x_shift);
        for (i, t) in taus.iter().enumerate() {
            let moved = rest | (t.apply(x) as u64) << x_shift;
            words.push(moved << 2 | i as u64);
        }
    }
    let out = Code::from_words(q, 3, words)?;
    if !out.is_mds() {
        return Err(Error::Structure("three-dimensional extension is not MDS".into()));
    }
    Ok(out)
}

fn last_k_face(c: &Code, i: u8) -> Result<Code> {
    let p = c.params();
    let sel = CoordSelector::new(vec![], vec![p.n - 1])?;
    c.face(&sel, &DoobVertex::new(vec![], vec![crate::algebra::Z4::new(i)]))
}

/// Structure shared by every d=3 three-dimensional code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FaceStructure {
    /// `f_i(a)` and `f_j(a)` are at distance 2 for `i != j`.
    pub images_at_distance_two: bool,
    /// `{f_k(a)}` is the part through `f_i(a)` of every face's partition.
    pub images_form_parts: bool,
    /// All faces induce the same partition of the `a` coordinate.
    pub image_partitions_agree: bool,
    /// `d(f_0(a), f_0(b)) = d(f_i(a), f_i(b))`.
    pub distances_agree: bool,
}

impl FaceStructure {
    pub fn holds(&self) -> bool {
        self.images_at_distance_two && self.images_form_parts && self.image_partitions_agree && self.distances_agree
    }
}

pub fn face_structure(c: &Code) -> Result<FaceStructure> {
    let p = c.params();
    if !matches!((p.m, p.n), (2, 1) | (1, 3)) || c.declared_k() != 3 || !c.is_mds() {
        return Err(Error::Unsupported(format!("expected an MDS code with k = 3 in D(2,1) or D(1,3), got {c:?}")));
    }
    let faces: Vec<Code> = (0..4).map(|i| last_k_face(c, i)).collect::<Result<_>>()?;
    let f: Vec<[u8; 16]> = faces.iter().map(|d| paired(d).map(|pc| pc.inverse())).collect::<Result<_>>()?;
    let parts: Vec<CocliquePartition> = faces.iter().map(code_partition).collect::<Result<_>>()?;
    let mut images: Vec<[u16; 4]> = faces.iter().map(image_partition).collect::<Result<_>>()?;
    for r in &mut images {
        r.sort_unstable();
    }
    let sh = &shrikhande().graph;
    let z = |v: u8| Z4Pair::from_index(v);
    let mut out = FaceStructure {
        images_at_distance_two: true,
        images_form_parts: true,
        image_partitions_agree: images.iter().all(|r| *r == images[0]),
        distances_agree: true,
    };
    for a in 0..16 {
        let set = (0..4).fold(0u16, |m, i| m | 1 << f[i][a]);
        for i in 0..4 {
            for j in i + 1..4 {
                if sh.distance(f[i][a] as usize, f[j][a] as usize) != 2 {
                    out.images_at_distance_two = false;
                }
            }
            if parts[i].parts()[parts[i].part_of(z(f[i][a]))] != set {
                out.images_form_parts = false;
            }
            for b in 0..16 {
                if sh.distance(f[0][a] as usize, f[0][b] as usize) != sh.distance(f[i][a] as usize, f[i][b] as usize) {
                    out.distances_agree = false;
                }
            }
        }
    }
    Ok(out)
}

/// The d=3 three-dimensional codes, one per partition class.
pub fn d3_k3_codes() -> Result<Vec<(PartitionClass, Code)>> {
    d3_codes()?
        .into_iter()
        .map(|(cl, c)| Ok((cl, extend_k3_d3(&c)?)))
        .collect()
}

/// All 576 Latin squares of order 4, as row-permutation quadruples.
pub fn latin_squares() -> Vec<[[u8; 4]; 4]> {
    fn go(rows: &mut Vec<[u8; 4]>, out: &mut Vec<[[u8; 4]; 4]>) {
        if rows.len() == 4 {
            out.push([rows[0], rows[1], rows[2], rows[3]]);
            return;
        }
        for r in k4_permutations() {
            if rows.iter().all(|q| (0..4).all(|c| q[c] != r[c])) {
                rows.push(*r);
                go(rows, out);
                rows.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut out);
    out
}

/// Index into the image partition of the `a` part of a `f a ; i` word.
fn a_value(p: DoobParams, w: u64) -> u8 {
    match p.m {
        2 => sh_coord(p, w, 1),
        _ => k_coord(p, w, 0) << 2 | k_coord(p, w, 1),
    }
}

/// Every code `{(w ; sigma_i(R(a)))}` over Latin squares `sigma` that is MDS.
pub fn latin_extensions(c: &Code) -> Result<Vec<Code>> {
    let p = c.params();
    let mut r = image_partition(&last_k_face(c, 0)?)?;
    r.sort_unstable();
    let class_of = |a: u8| r.iter().position(|&part| part >> a & 1 == 1).expect("partition covers");
    let q = DoobParams::new(p.m, p.n + 1);
    let mut out = Vec::new();
    for sq in latin_squares() {
        let words = c
            .words()
            .iter()
            .map(|&w| {
                let i = k_coord(p, w, p.n - 1) as usize;
                w << 2 | sq[i][class_of(a_value(p, w))] as u64
            })
            .collect();
        let ext = Code::from_words(q, 3, words)?;
        if ext.is_mds() {
            out.push(ext);
        }
    }
    Ok(out)
}

/// Outcome of extending each d=3 class by a fourth coordinate.
#[derive(Clone, Debug)]
pub struct D4Extension {
    pub class: PartitionClass,
    pub base: Code,
    pub extensions: Vec<Code>,
}

pub fn d4_k3_extensions() -> Result<Vec<D4Extension>> {
    d3_k3_codes()?
        .into_iter()
        .map(|(class, base)| {
            Ok(D4Extension {
                class,
                extensions: latin_extensions(&base)?,
                base,
            })
        })
        .collect()
}

fn dedup_classes(codes: Vec<Code>) -> Result<Vec<Code>> {
    let mut reps: Vec<Code> = Vec::new();
    for c in codes {
        let mut new = true;
        for r in &reps {
            if codes_equivalent(r, &c)?.is_some() {
                new = false;
                break;
            }
        }
        if new {
            reps.push(c);
        }
    }
    Ok(reps)
}

/// Classification for `k = 3` and `2m+n` in {5, 6}.
pub fn classify_k3(m: usize, n: usize) -> Result<ClassificationResult> {
    let want_m = m;
    let reps = match (m, n) {
        (2, 1) | (1, 3) => d3_k3_codes()?
            .into_iter()
            .map(|(_, c)| c)
            .filter(|c| c.params().m == want_m)
            .collect(),
        (2, 2) | (1, 4) => {
            let all = d4_k3_extensions()?
                .into_iter()
                .filter(|e| e.base.params().m == want_m)
                .flat_map(|e| e.extensions)
                .collect();
            dedup_classes(all)?
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "k = 3 classification covers D(2,1), D(1,3), D(2,2), D(1,4); got D({m},{n})"
            )))
        }
    };
    Ok(ClassificationResult::new(m, n, 3, reps))
}

/// Partition class of the face `i = 0` of a d=3 three-dimensional code.
pub fn face_class(c: &Code) -> Result<PartitionClass> {
    classify_partition(&code_partition(&last_k_face(c, 0)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::p;
    use crate::appendix::{table, TableId};
    use crate::cocliques::class_representative;

    fn translation(s: &str) -> Permutation {
        Permutation::translation(p(s))
    }

    #[test]
    fn triples() {
        let a = automorphism_triple(&class_representative(PartitionClass::A)).unwrap();
        assert_eq!(a.taus, [translation("02"), translation("20"), translation("22")]);
        let c = automorphism_triple(&class_representative(PartitionClass::C)).unwrap();
        assert_eq!(c.taus, [translation("02"), translation("21"), translation("23")]);
        let b = automorphism_triple(&class_representative(PartitionClass::B)).unwrap();
        let skew = |add: &str| {
            Permutation::from_fn(16, |v| {
                let x = Z4Pair::from_index(v as u8);
                (Z4Pair::new(x.a(), (x.a() + 4 - x.b()) % 4) + p(add)).index()
            })
        };
        let mut expected = [skew("21"), translation("02"), skew("23")];
        expected.sort_by_key(|t| t.apply(0));
        assert_eq!(b.taus, expected);
    }

    #[test]
    fn extensions_match_reference_codes() {
        let t8 = extend_k3_d3(&table(TableId::T2).code).unwrap();
        assert!(codes_equivalent(&t8, &table(TableId::T8).code).unwrap().is_some());
        let t9 = extend_k3_d3(&table(TableId::T3).code).unwrap();
        assert!(codes_equivalent(&t9, &table(TableId::T9).code).unwrap().is_some());
        let t1331 = extend_k3_d3(&table(TableId::T4).code).unwrap();
        assert!(codes_equivalent(&t1331, &table(TableId::T1331).code).unwrap().is_some());
    }

    #[test]
    fn face_structure_holds() {
        for (_, c) in d3_k3_codes().unwrap() {
            assert!(face_structure(&c).unwrap().holds());
        }
        for id in [TableId::T8, TableId::T9] {
            assert!(face_structure(&table(id).code).unwrap().holds(), "{id}");
        }
    }

    #[test]
    fn latin_square_count() {
        assert_eq!(latin_squares().len(), 576);
    }

    #[test]
    fn d4_extensions_only_from_linear_class() {
        for e in d4_k3_extensions().unwrap() {
            assert_eq!(e.extensions.is_empty(), e.class != PartitionClass::A, "{}", e.class);
        }
        let r = classify_k3(2, 2).unwrap();
        assert_eq!(r.class_count, 1);
        assert!(codes_equivalent(&r.representatives[0], &table(TableId::T10).code).unwrap().is_some());
        assert_eq!(classify_k3(1, 4).unwrap().class_count, 0);
        assert_eq!(classify_k3(2, 1).unwrap().class_count, 2);
        assert_eq!(classify_k3(1, 3).unwrap().class_count, 1);
    }
}
