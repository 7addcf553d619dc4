//! Reference codes kept as data files in the text code format.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codes::{codes_equivalent, Code};
use crate::error::{Error, Result};
use crate::format::parse_text;
use crate::graphs::DoobParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableId {
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T1331,
    T10,
}

pub const ALL_TABLES: [TableId; 10] = [
    TableId::T2,
    TableId::T3,
    TableId::T4,
    TableId::T5,
    TableId::T6,
    TableId::T7,
    TableId::T8,
    TableId::T9,
    TableId::T1331,
    TableId::T10,
];

impl TableId {
    pub fn name(self) -> &'static str {
        match self {
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::T5 => "T5",
            TableId::T6 => "T6",
            TableId::T7 => "T7",
            TableId::T8 => "T8",
            TableId::T9 => "T9",
            TableId::T1331 => "T1331",
            TableId::T10 => "T10",
        }
    }

    fn source(self) -> &'static str {
        match self {
            TableId::T2 => include_str!("../data/appendix/t2.txt"),
            TableId::T3 => include_str!("../data/appendix/t3.txt"),
            TableId::T4 => include_str!("../data/appendix/t4.txt"),
            TableId::T5 => include_str!("../data/appendix/t5.txt"),
            TableId::T6 => include_str!("../data/appendix/t6.txt"),
            TableId::T7 => include_str!("../data/appendix/t7.txt"),
            TableId::T8 => include_str!("../data/appendix/t8.txt"),
            TableId::T9 => include_str!("../data/appendix/t9.txt"),
            TableId::T1331 => include_str!("../data/appendix/t1331.txt"),
            TableId::T10 => include_str!("../data/appendix/t10.txt"),
        }
    }

    /// `(m, n, k, d)` as captioned.
    pub fn parameters(self) -> (usize, usize, usize, usize) {
        match self {
            TableId::T2 | TableId::T3 => (2, 0, 2, 3),
            TableId::T4 => (1, 2, 2, 3),
            TableId::T5 | TableId::T6 => (2, 1, 2, 4),
            TableId::T7 => (1, 3, 2, 4),
            TableId::T8 | TableId::T9 => (2, 1, 3, 3),
            TableId::T1331 => (1, 3, 3, 3),
            TableId::T10 => (2, 2, 3, 4),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_TABLES
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadToken(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct AppendixTable {
    pub id: TableId,
    pub params: DoobParams,
    pub k: usize,
    pub d: usize,
    pub description: String,
    pub code: Code,
}

pub fn table(id: TableId) -> AppendixTable {
    let src = id.source();
    let code = parse_text(src).unwrap_or_else(|e| panic!("embedded table {id} is malformed: {e}"));
    let (m, n, k, d) = id.parameters();
    let description = src
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .unwrap_or("")
        .to_string();
    AppendixTable {
        id,
        params: DoobParams::new(m, n),
        k,
        d,
        description,
        code,
    }
}

pub fn all_tables() -> Vec<AppendixTable> {
    ALL_TABLES.into_iter().map(table).collect()
}

/// The raw text of a table file.
pub fn table_source(id: TableId) -> &'static str {
    id.source()
}

/// Result of checking one embedded table.
#[derive(Clone, Debug, Serialize)]
pub struct TableCheck {
    pub id: TableId,
    pub description: String,
    pub words: usize,
    pub min_distance: Option<u32>,
    pub is_mds: bool,
    /// Index of the classification representative the table is equivalent
    /// to; `None` if it matches none or several.
    pub class_index: Option<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub left: TableId,
    pub right: TableId,
    pub expect_equivalent: bool,
    pub equivalent: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub tables: Vec<TableCheck>,
    pub pairs: Vec<PairCheck>,
    pub pass: bool,
}

/// Pairs of tables stated to be inequivalent.
pub const INEQUIVALENT_PAIRS: [(TableId, TableId); 3] =
    [(TableId::T2, TableId::T3), (TableId::T5, TableId::T6), (TableId::T8, TableId::T9)];

/// Checks every table against its parameters and against the
/// classification: each table must match exactly one representative, and
/// the stated inequivalent pairs must differ.
pub fn verify_appendix() -> Result<AppendixReport> {
    let mut tables = Vec::new();
    for t in all_tables() {
        let min_distance = t.code.min_distance().ok();
        let is_mds = t.code.params() == t.params
            && t.code.declared_k() == t.k
            && t.code.len() == 1 << (2 * t.k)
            && min_distance == Some(t.d as u32)
            && t.code.is_mds();
        let reps = crate::classification::classify(t.params.m, t.params.n, t.k)?.representatives;
        let mut hits = Vec::new();
        for (i, r) in reps.iter().enumerate() {
            if codes_equivalent(r, &t.code)?.is_some() {
                hits.push(i);
            }
        }
        let class_index = match hits.as_slice() {
            [i] => Some(*i),
            _ => None,
        };
        tables.push(TableCheck {
            id: t.id,
            description: t.description,
            words: t.code.len(),
            min_distance,
            is_mds,
            class_index,
            pass: is_mds && class_index.is_some(),
        });
    }
    let mut pairs = Vec::new();
    for (a, b) in INEQUIVALENT_PAIRS {
        let equivalent = codes_equivalent(&table(a).code, &table(b).code)?.is_some();
        pairs.push(PairCheck {
            left: a,
            right: b,
            expect_equivalent: false,
            equivalent,
            pass: !equivalent,
        });
    }
    let pass = tables.iter().all(|t| t.pass) && pairs.iter().all(|p| p.pass);
    Ok(AppendixReport { tables, pairs, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::word_from_coords;

    #[test]
    fn tables_are_mds_with_their_parameters() {
        for t in all_tables() {
            assert_eq!(t.code.params(), t.params, "{}", t.id);
            assert_eq!(t.code.declared_k(), t.k, "{}", t.id);
            assert_eq!(t.code.len(), 1 << (2 * t.k), "{}", t.id);
            assert_eq!(t.code.min_distance().unwrap() as usize, t.d, "{}", t.id);
            assert!(t.code.is_mds(), "{}", t.id);
        }
    }

    #[test]
    fn ids_parse() {
        for id in ALL_TABLES {
            assert_eq!(id.name().parse::<TableId>().unwrap(), id);
        }
        assert!("T11".parse::<TableId>().is_err());
    }

    // Pairing the second d=3 code's first column with the (1+2) code's
    // second column does not give a distance-4 code; the second (2+1,4^2,4)
    // table must therefore reuse the second d=3 code's own second column.
    #[test]
    fn mismatched_columns_are_not_mds() {
        let p = DoobParams::new(2, 1);
        let a = "00 02 20 22 01 03 21 23 10 12 31 33 11 13 30 32";
        let f = "00 12 23 31 21 33 10 02 11 03 30 22 32 20 01 13";
        let words = a
            .split(' ')
            .zip(f.split(' '))
            .enumerate()
            .map(|(i, (x, y))| {
                let x: crate::algebra::Z4Pair = x.parse().unwrap();
                let y: crate::algebra::Z4Pair = y.parse().unwrap();
                word_from_coords(p, &[x.index(), y.index()], &[(i / 4) as u8])
            })
            .collect();
        let c = Code::from_words(p, 2, words).unwrap();
        assert_eq!(c.min_distance().unwrap(), 3);
        assert!(!c.is_mds());
    }

    #[test]
    fn captioned_inequivalences() {
        let eq = |a, b| codes_equivalent(&table(a).code, &table(b).code).unwrap().is_some();
        assert!(!eq(TableId::T2, TableId::T3));
        assert!(!eq(TableId::T5, TableId::T6));
        assert!(!eq(TableId::T8, TableId::T9));
        assert!(eq(TableId::T10, TableId::T10));
    }

    #[test]
    fn appendix_report_passes() {
        let r = verify_appendix().unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.tables.len(), 10);
    }
}
