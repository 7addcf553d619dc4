//! Code files.
//!
//! Text format: a header line `m n k`, then one word per line with `m`
//! two-digit Shrikhande tokens, a `;`, and `n` one-digit K4 tokens:
//!
//! ```text
//! 2 1 2
//! 00 00 ; 0
//! 21 03 ; 2
//! ```
//!
//! `#` starts a comment; blank lines are ignored. The JSON mirror is
//! `{"m":2,"n":1,"k":2,"words":["00 00 ; 0", ...]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codes::{format_word, word_from_coords, Code};
use crate::error::{Error, Result};
use crate::graphs::DoobParams;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub words: Vec<String>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let col = line[..offset + start].chars().count() + 1;
        let tok = &tail[..len];
        offset += start + len;
        rest = &rest[start + len..];
        Some((col, tok))
    })
}

fn digit(b: u8) -> Option<u8> {
    (b'0'..=b'3').contains(&b).then(|| b - b'0')
}

/// Parses one word such as `21 03 ; 2 0`; `line` is used for error positions.
pub fn parse_word(p: DoobParams, text: &str, line: usize) -> Result<u64> {
    let mut sh = Vec::with_capacity(p.m);
    let mut k = Vec::with_capacity(p.n);
    let mut seen_sep = false;
    let mut last_col = 1;
    for (col, tok) in tokens(text) {
        last_col = col + tok.chars().count();
        if tok == ";" {
            if seen_sep {
                return Err(parse_err(line, col, "second ';'"));
            }
            if sh.len() != p.m {
                return Err(parse_err(
                    line,
                    col,
                    format!("expected {} Shrikhande coordinates before ';', found {}", p.m, sh.len()),
                ));
            }
            seen_sep = true;
            continue;
        }
        let bytes = tok.as_bytes();
        if !seen_sep {
            match bytes {
                [a, b] if digit(*a).is_some() && digit(*b).is_some() => {
                    if sh.len() == p.m {
                        return Err(parse_err(line, col, "too many Shrikhande coordinates"));
                    }
                    sh.push(digit(*a).unwrap() << 2 | digit(*b).unwrap());
                }
                _ => {
                    return Err(parse_err(
                        line,
                        col,
                        format!("expected a two-digit Shrikhande coordinate, found {tok:?}"),
                    ))
                }
            }
        } else {
            match bytes {
                [a] if digit(*a).is_some() => {
                    if k.len() == p.n {
                        return Err(parse_err(line, col, "too many K4 coordinates"));
                    }
                    k.push(digit(*a).unwrap());
                }
                _ => {
                    return Err(parse_err(
                        line,
                        col,
                        format!("expected a one-digit K4 coordinate, found {tok:?}"),
                    ))
                }
            }
        }
    }
    if !seen_sep {
        return Err(parse_err(line, last_col, "missing ';'"));
    }
    if k.len() != p.n {
        return Err(parse_err(
            line,
            last_col,
            format!("expected {} K4 coordinates, found {}", p.n, k.len()),
        ));
    }
    Ok(word_from_coords(p, &sh, &k))
}

fn parse_header(text: &str, line: usize) -> Result<(usize, usize, usize)> {
    let toks: Vec<(usize, &str)> = tokens(text).collect();
    if toks.len() != 3 {
        return Err(parse_err(line, 1, "header must be `m n k`"));
    }
    let mut vals = [0usize; 3];
    for (v, (col, tok)) in vals.iter_mut().zip(&toks) {
        *v = tok
            .parse()
            .map_err(|_| parse_err(line, *col, format!("expected a nonnegative integer, found {tok:?}")))?;
    }
    let [m, n, k] = vals;
    if 2 * m + n > crate::codes::MAX_LENGTH {
        return Err(parse_err(line, 1, format!("2m+n = {} is too large", 2 * m + n)));
    }
    Ok((m, n, k))
}

fn reject_duplicates(p: DoobParams, words: &[(u64, usize)]) -> Result<()> {
    let mut sorted = words.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            let line = w[0].1.max(w[1].1);
            return Err(parse_err(line, 1, format!("duplicate word {}", format_word(p, w[0].0))));
        }
    }
    Ok(())
}

pub fn parse_text(s: &str) -> Result<Code> {
    let mut header = None;
    let mut words = Vec::new();
    for (i, raw) in s.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        match header {
            None => header = Some(parse_header(body, line)?),
            Some((m, n, _)) => words.push((parse_word(DoobParams::new(m, n), body, line)?, line)),
        }
    }
    let (m, n, k) = header.ok_or_else(|| parse_err(1, 1, "missing header"))?;
    let p = DoobParams::new(m, n);
    reject_duplicates(p, &words)?;
    Code::from_words(p, k, words.into_iter().map(|(w, _)| w).collect())
}

pub fn to_text(c: &Code) -> String {
    let p = c.params();
    let mut out = format!("{} {} {}\n", p.m, p.n, c.declared_k());
    for &w in c.words() {
        out.push_str(&format_word(p, w));
        out.push('\n');
    }
    out
}

pub fn to_code_file(c: &Code) -> CodeFile {
    let p = c.params();
    CodeFile {
        m: p.m,
        n: p.n,
        k: c.declared_k(),
        words: c.words().iter().map(|&w| format_word(p, w)).collect(),
    }
}

/// Word `i` of the JSON array reports errors as line `i + 1`.
pub fn from_code_file(f: &CodeFile) -> Result<Code> {
    if 2 * f.m + f.n > crate::codes::MAX_LENGTH {
        return Err(Error::Unsupported(format!("2m+n = {} is too large", 2 * f.m + f.n)));
    }
    let p = DoobParams::new(f.m, f.n);
    let words = f
        .words
        .iter()
        .enumerate()
        .map(|(i, w)| Ok((parse_word(p, w, i + 1)?, i + 1)))
        .collect::<Result<Vec<_>>>()?;
    reject_duplicates(p, &words)?;
    Code::from_words(p, f.k, words.into_iter().map(|(w, _)| w).collect())
}

pub fn parse_json(s: &str) -> Result<Code> {
    from_code_file(&serde_json::from_str(s)?)
}

pub fn to_json(c: &Code) -> String {
    let mut s = serde_json::to_string_pretty(&to_code_file(c)).expect("code file serializes");
    s.push('\n');
    s
}

/// Parses either format, choosing JSON when the first non-blank character
/// is `{`.
pub fn parse_any(s: &str) -> Result<Code> {
    if s.trim_start().starts_with('{') {
        parse_json(s)
    } else {
        parse_text(s)
    }
}

pub fn load_code(path: impl AsRef<Path>) -> Result<Code> {
    parse_any(&fs::read_to_string(path)?)
}

/// Writes JSON when the extension is `.json`, text otherwise.
pub fn save_code(c: &Code, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let body = if path.extension().is_some_and(|e| e == "json") {
        to_json(c)
    } else {
        to_text(c)
    };
    fs::write(path, body)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# a small code\n2 1 1\n00 00 ; 0\n21 03 ; 2   # trailing\n\n13 31 ; 1\n";

    #[test]
    fn parse_sample() {
        let c = parse_text(SAMPLE).unwrap();
        assert_eq!(c.params(), DoobParams::new(2, 1));
        assert_eq!(c.declared_k(), 1);
        assert_eq!(c.len(), 3);
        assert_eq!(to_text(&c), "2 1 1\n00 00 ; 0\n13 31 ; 1\n21 03 ; 2\n");
        assert_eq!(parse_text(&to_text(&c)).unwrap(), c);
        assert_eq!(parse_json(&to_json(&c)).unwrap(), c);
    }

    #[test]
    fn edge_shapes() {
        let c = parse_text("0 2 0\n; 1 2\n").unwrap();
        assert_eq!(to_text(&c), "0 2 0\n; 1 2\n");
        let c = parse_text("1 0 0\n21 ;\n").unwrap();
        assert_eq!(to_text(&c), "1 0 0\n21 ;\n");
        let empty = parse_text("1 1 0\n").unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("2 1 1\n00 003 ; 0\n", 2, 4),
            ("2 1 1\n00 00 0\n", 2, 7),
            ("2 1 1\n00 00 ; 0 1\n", 2, 11),
            ("2 1 1\n00 ; 0\n", 2, 4),
            ("2 1 1\n00 40 ; 0\n", 2, 4),
            ("2 x 1\n", 1, 3),
            ("2 1 1\n00 00 ; 0\n00 00 ; 0\n", 3, 1),
        ];
        for (text, line, column) in cases {
            match parse_text(text) {
                Err(Error::Parse { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{text:?}")
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_text("").is_err());
        assert!(parse_json("{\"m\":1}").is_err());
        assert!(parse_json("{\"m\":1,\"n\":0,\"k\":0,\"words\":[\"00 ;\",\"00 ;\"]}").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = parse_text(SAMPLE).unwrap();
        for name in ["c.txt", "c.json"] {
            let path = dir.path().join(name);
            save_code(&c, &path).unwrap();
            let back = load_code(&path).unwrap();
            assert_eq!(back, c);
            let first = fs::read(&path).unwrap();
            save_code(&back, &path).unwrap();
            assert_eq!(fs::read(&path).unwrap(), first);
        }
    }
}
