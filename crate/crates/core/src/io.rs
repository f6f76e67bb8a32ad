//! Text formats.
//!
//! Matrix files start with `WRIG 1 <m> <n>` followed by exactly `m` lines
//! `<ℓ> <k> <v1> … <vk>` (1-based label, set size, sorted 1-based vertices).
//! Coloring files hold `n` whitespace-separated `+1` / `-1` tokens.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Coloring, RepresentationMatrix};

const MAGIC: &str = "WRIG";
const VERSION: &str = "1";

pub fn write_matrix(r: &RepresentationMatrix) -> String {
    let mut out = String::with_capacity(16 + 4 * r.ones() as usize + 8 * r.m());
    let _ = writeln!(out, "{MAGIC} {VERSION} {} {}", r.m(), r.n());
    for (label, set) in r.label_sets().iter().enumerate() {
        let _ = write!(out, "{} {}", label + 1, set.len());
        for v in set {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{tok}`")))
}

pub fn parse_matrix(text: &str) -> Result<RepresentationMatrix> {
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 4 || head[0] != MAGIC {
        return Err(parse_err(1, "expected header `WRIG 1 <m> <n>`"));
    }
    if head[1] != VERSION {
        return Err(parse_err(1, format!("unsupported version `{}`", head[1])));
    }
    let m = parse_usize(head[2], 1, "label count")?;
    let n = parse_usize(head[3], 1, "vertex count")?;

    let mut label_sets = Vec::with_capacity(m);
    for expected in 1..=m {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| parse_err(expected + 1, format!("missing line for label {expected}")))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 {
            return Err(parse_err(lineno, "expected `<label> <size> <vertices…>`"));
        }
        let label = parse_usize(toks[0], lineno, "label index")?;
        if label != expected {
            return Err(parse_err(
                lineno,
                format!("expected label {expected}, found {label}"),
            ));
        }
        let k = parse_usize(toks[1], lineno, "set size")?;
        if toks.len() != k + 2 {
            return Err(parse_err(
                lineno,
                format!("declared {k} vertices, found {}", toks.len() - 2),
            ));
        }
        let mut set = Vec::with_capacity(k);
        for tok in &toks[2..] {
            let v = parse_usize(tok, lineno, "vertex index")?;
            if v == 0 || v > n {
                return Err(parse_err(lineno, format!("vertex {v} outside 1..={n}")));
            }
            if let Some(&prev) = set.last() {
                if v - 1 <= prev {
                    return Err(parse_err(lineno, "vertices must be strictly increasing"));
                }
            }
            set.push(v - 1);
        }
        label_sets.push(set);
    }
    for (lineno, rest) in lines {
        if !rest.trim().is_empty() {
            return Err(parse_err(lineno, "unexpected content after the last label"));
        }
    }
    Ok(RepresentationMatrix::from_sorted_unchecked(n, label_sets))
}

pub fn write_coloring(x: &Coloring) -> String {
    let mut s = x.to_string();
    s.push('\n');
    s
}

pub fn parse_coloring(text: &str) -> Result<Coloring> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            values.push(match tok {
                "+1" => 1,
                "-1" => -1,
                other => {
                    return Err(parse_err(
                        i + 1,
                        format!("expected +1 or -1, found `{other}`"),
                    ))
                }
            });
        }
    }
    Coloring::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_exact_bytes() {
        let r =
            RepresentationMatrix::from_label_sets(3, vec![vec![0, 1], vec![], vec![1, 2]]).unwrap();
        assert_eq!(write_matrix(&r), "WRIG 1 3 3\n1 2 1 2\n2 0\n3 2 2 3\n");
    }

    #[test]
    fn parses_what_it_writes() {
        let text = "WRIG 1 2 4\n1 3 1 2 4\n2 1 3\n";
        let r = parse_matrix(text).unwrap();
        assert_eq!(r.label_set(0), &[0, 1, 3]);
        assert_eq!(r.vertex_set(2), &[1]);
        assert_eq!(write_matrix(&r), text);
        // no final newline is fine too
        assert_eq!(parse_matrix(text.trim_end()).unwrap(), r);
    }

    #[test]
    fn rejects_malformed_matrices() {
        let cases = [
            ("", 1),
            ("WRIG 2 1 1\n1 0\n", 1),
            ("WRIX 1 1 1\n1 0\n", 1),
            ("WRIG 1 2 3\n1 1 1\n", 3),
            ("WRIG 1 1 3\n2 1 1\n", 2),
            ("WRIG 1 1 3\n1 2 1\n", 2),
            ("WRIG 1 1 3\n1 2 2 1\n", 2),
            ("WRIG 1 1 3\n1 2 1 1\n", 2),
            ("WRIG 1 1 3\n1 1 4\n", 2),
            ("WRIG 1 1 3\n1 1 0\n", 2),
            ("WRIG 1 1 3\n1 1 1\nextra\n", 3),
        ];
        for (text, line) in cases {
            match parse_matrix(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?} parsed as {other:?}"),
            }
        }
    }

    #[test]
    fn coloring_round_trip() {
        let x = parse_coloring("+1 -1\n-1\n").unwrap();
        assert_eq!(x.values(), &[1, -1, -1]);
        assert_eq!(write_coloring(&x), "+1 -1 -1\n");
        assert!(parse_coloring("+1 1").is_err());
    }
}
