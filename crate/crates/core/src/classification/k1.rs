//! One-dimensional codes: `(m+n, 4^1, 2m+n)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{p, Z4Pair};
use crate::classification::ClassificationResult;
use crate::cocliques::{coclique_type, vertex_set, CocliqueType};
use crate::codes::{sh_coord, word_from_coords, Code, CoordSelector};
use crate::error::{Error, Result};
use crate::graphs::DoobParams;

/// Closed form for the number of quadruples `(a,b,c,d)` of nonnegative
/// integers with `a+b+c+d = m` and `b <= c <= d`, evaluated exactly as
/// `(2m^3 + 21m^2 + 66m + 72 - 9(m mod 2) - 8(m mod 3)) / 72`.
pub fn s_m_formula(m: u64) -> u128 {
    let m = m as u128;
    let num = 2 * m * m * m + 21 * m * m + 66 * m + 72 - 9 * (m % 2) - 8 * (m % 3);
    assert_eq!(num % 72, 0, "formula is not integral at m = {m}");
    num / 72
}

/// The same count by enumerating the quadruples.
pub fn s_m_bruteforce(m: u64) -> u128 {
    let mut count = 0u128;
    for b in 0..=m {
        for c in b..=m - b {
            for d in c..=m - b - c {
                let a = m - b - c - d;
                debug_assert_eq!(a + b + c + d, m);
                count += 1;
            }
        }
    }
    count
}

/// The four columns a reduced code may use, in word order.
const PATTERN_L: [&str; 4] = ["00", "02", "21", "23"];
const PATTERN_J: [&str; 4] = ["00", "21", "02", "23"];
const PATTERN_T: [&str; 4] = ["00", "21", "23", "02"];
const PATTERN_LINEAR: [&str; 4] = ["00", "02", "20", "22"];

/// A normal form for `(m+0, 4^1, 2m)` codes: `l` columns of the first
/// semilinear pattern, `j` of the second, `t` of the third, and linear
/// columns for the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedCode {
    pub m: usize,
    pub l: usize,
    pub j: usize,
    pub t: usize,
}

impl ReducedCode {
    pub fn new(m: usize, l: usize, j: usize, t: usize) -> Result<ReducedCode> {
        if !(l <= j && j <= t && l + j + t <= m) {
            return Err(Error::Unsupported(format!(
                "need l <= j <= t and l+j+t <= m, got ({l},{j},{t}) with m = {m}"
            )));
        }
        Ok(ReducedCode { m, l, j, t })
    }

    /// Column `c`, one entry per word.
    pub fn column(&self, c: usize) -> [Z4Pair; 4] {
        let pattern = if c < self.l {
            PATTERN_L
        } else if c < self.l + self.j {
            PATTERN_J
        } else if c < self.l + self.j + self.t {
            PATTERN_T
        } else {
            PATTERN_LINEAR
        };
        pattern.map(p)
    }

    /// The four words, word `i` getting value `i` in each of `n` K4
    /// coordinates.
    pub fn expand_with(&self, n: usize) -> Code {
        let params = DoobParams::new(self.m, n);
        let words = (0..4)
            .map(|i| {
                let sh: Vec<u8> = (0..self.m).map(|c| self.column(c)[i].index()).collect();
                word_from_coords(params, &sh, &vec![i as u8; n])
            })
            .collect();
        Code::from_words(params, 1, words).expect("reduced code words are distinct")
    }

    pub fn expand(&self) -> Code {
        self.expand_with(0)
    }

    /// `(m-l-j-t, l, j, t)`.
    pub fn quadruple(&self) -> (usize, usize, usize, usize) {
        (self.m - self.l - self.j - self.t, self.l, self.j, self.t)
    }
}

/// All reduced codes of length `m`.
pub fn reduced_codes(m: usize) -> Vec<ReducedCode> {
    let mut out = Vec::new();
    for l in 0..=m {
        for j in l..=m - l {
            for t in j..=m - l - j {
                out.push(ReducedCode { m, l, j, t });
            }
        }
    }
    out
}

/// The equivalence invariant `(a,b,c,d)` of a 4-word code in `D(m,0)`:
/// `a` counts linear columns and `b <= c <= d` are, sorted, the numbers of
/// columns where word `i` differs from word 0 by an element of order 2,
/// minus `a`.
pub fn quadruple_invariant(c: &Code) -> Result<(usize, usize, usize, usize)> {
    let pm = c.params();
    if pm.n != 0 || c.len() != 4 {
        return Err(Error::Unsupported(format!(
            "quadruple invariant needs 4 words in D(m,0), got {} words in {pm}",
            c.len()
        )));
    }
    let w = c.words();
    let mut a = 0usize;
    let mut big_n = [0usize; 3];
    for col in 0..pm.m {
        let s: Vec<Z4Pair> = w.iter().map(|&x| Z4Pair::from_index(sh_coord(pm, x, col))).collect();
        if coclique_type(vertex_set(&s))? == CocliqueType::Linear {
            a += 1;
        }
        for i in 1..4 {
            if (s[0] - s[i]).order() == 2 {
                big_n[i - 1] += 1;
            }
        }
    }
    let mut mi = [0usize; 3];
    for i in 0..3 {
        mi[i] = big_n[i]
            .checked_sub(a)
            .ok_or_else(|| Error::Structure(format!("N_{} = {} is below a = {a}", i + 1, big_n[i])))?;
    }
    mi.sort_unstable();
    Ok((a, mi[0], mi[1], mi[2]))
}

/// Classification of `(m+n, 4^1, 2m+n)` codes.
pub fn classify_k1(m: usize, n: usize) -> Result<ClassificationResult> {
    if m == 0 {
        return Err(Error::Unsupported("classify_k1 needs m >= 1".into()));
    }
    let reps = reduced_codes(m);
    let codes: Vec<Code> = reps.iter().map(|r| r.expand_with(n)).collect();
    // distinct invariants on the Shrikhande projection prove pairwise inequivalence
    let drop_k = CoordSelector::new(vec![], (0..n).collect())?;
    let mut invariants = Vec::with_capacity(codes.len());
    for (r, c) in reps.iter().zip(&codes) {
        if !c.is_mds() {
            return Err(Error::NotMds(format!("{r:?}")));
        }
        let q = quadruple_invariant(&c.projection(&drop_k)?)?;
        if q != r.quadruple() {
            return Err(Error::Structure(format!("{r:?} has invariant {q:?}")));
        }
        invariants.push(q);
    }
    invariants.sort_unstable();
    invariants.dedup();
    if invariants.len() != codes.len() {
        return Err(Error::Structure("reduced codes share an invariant".into()));
    }
    let expected = s_m_formula(m as u64);
    if expected != codes.len() as u128 {
        return Err(Error::Structure(format!(
            "{} reduced codes, formula gives {expected}",
            codes.len()
        )));
    }
    Ok(ClassificationResult::new(m, n, 1, codes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{codes_equivalent, EquivalenceMap};
    use crate::graphs::shrikhande;

    #[test]
    fn formula_values() {
        assert_eq!(s_m_formula(0), 1);
        assert_eq!(s_m_formula(1), 2);
        assert_eq!(s_m_formula(2), 4);
        assert_eq!(s_m_formula(3), 7);
        assert_eq!(s_m_bruteforce(0), 1);
        assert_eq!(s_m_bruteforce(1), 2);
        assert_eq!(s_m_bruteforce(3), 7);
    }

    // independent count: quadruples listed explicitly
    #[test]
    fn bruteforce_matches_listing() {
        let m = 3u64;
        let mut listed = Vec::new();
        for a in 0..=m {
            for b in 0..=m {
                for c in 0..=m {
                    for d in 0..=m {
                        if a + b + c + d == m && b <= c && c <= d {
                            listed.push((a, b, c, d));
                        }
                    }
                }
            }
        }
        assert_eq!(listed.len(), 7);
        for q in [(3, 0, 0, 0), (0, 0, 0, 3), (1, 0, 0, 2), (0, 0, 1, 2), (2, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)] {
            assert!(listed.contains(&q));
        }
    }

    #[test]
    fn reduced_code_lists() {
        let r1 = reduced_codes(1);
        assert_eq!(r1, vec![ReducedCode { m: 1, l: 0, j: 0, t: 0 }, ReducedCode { m: 1, l: 0, j: 0, t: 1 }]);
        assert_eq!(reduced_codes(2).len(), 4);
        for m in 1..=6 {
            for r in reduced_codes(m) {
                let c = r.expand();
                assert_eq!(c.min_distance().unwrap() as usize, 2 * m);
                assert!(c.is_mds());
                assert_eq!(quadruple_invariant(&c).unwrap(), r.quadruple());
            }
        }
        assert!(ReducedCode::new(2, 1, 0, 1).is_err());
    }

    #[test]
    fn invariant_is_stable_under_the_group() {
        let group = &shrikhande().group;
        for r in reduced_codes(3) {
            let c = r.expand();
            let e = EquivalenceMap {
                sh_autos: vec![group[7], group[100], group[191]],
                k_perms: vec![],
                sh_coord_perm: vec![2, 0, 1],
                k_coord_perm: vec![],
            };
            let img = c.apply_equivalence(&e).unwrap();
            assert_eq!(quadruple_invariant(&img).unwrap(), r.quadruple());
        }
    }

    #[test]
    fn k1_classes() {
        assert_eq!(classify_k1(1, 0).unwrap().class_count, 2);
        assert_eq!(classify_k1(2, 0).unwrap().class_count, 4);
        assert_eq!(classify_k1(1, 1).unwrap().class_count, 2);
        assert!(classify_k1(0, 2).is_err());
        let res = classify_k1(2, 1).unwrap();
        for (i, a) in res.representatives.iter().enumerate() {
            for b in &res.representatives[i + 1..] {
                assert!(codes_equivalent(a, b).unwrap().is_none());
            }
        }
    }
}
