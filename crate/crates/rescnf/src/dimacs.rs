//! DIMACS CNF parsing and emission.
//!
//! Accepts the usual layout: an optional leading comment block (`c ...`),
//! a `p cnf <vars> <clauses>` header, then zero-terminated clauses. The
//! leading comment block is kept on the formula and re-emitted; comments
//! between clauses are skipped. A bare `0` line is the empty clause.

use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{Clause, Formula, Literal};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: malformed header `{text}` (expected `p cnf <vars> <clauses>`)")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: missing `p cnf` header before clause data")]
    MissingHeader { line: usize },
    #[error("line {line}: token `{token}` is not a literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {declared}")]
    LiteralOutOfRange {
        line: usize,
        lit: i64,
        declared: u32,
    },
    #[error("line {line}: clause not terminated by 0 at end of input")]
    MissingTerminator { line: usize },
}

/// Parse a DIMACS CNF document. Clauses keep file order; duplicate
/// literals inside a clause are dropped.
pub fn parse_dimacs(text: &str) -> Result<Formula, DimacsError> {
    let mut comments = Vec::new();
    let mut in_prefix = true;
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut open_clause = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('c') && !line.starts_with("cnf") {
            if in_prefix {
                comments.push(line.trim_start_matches('c').trim_start().to_string());
            }
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v
                    .parse::<u32>()
                    .ok()
                    .and_then(|v| c.parse::<usize>().ok().map(|c| (v, c))),
                _ => None,
            };
            match parsed {
                Some(h) => {
                    header = Some(h);
                    in_prefix = false;
                    continue;
                }
                None => {
                    return Err(DimacsError::MalformedHeader {
                        line: line_no,
                        text: line.to_string(),
                    })
                }
            }
        }
        let (declared, _) = header.ok_or(DimacsError::MissingHeader { line: line_no })?;
        in_prefix = false;
        for token in line.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::BadToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if lit == 0 {
                clauses.push(Clause::new(current.drain(..)));
                open_clause = false;
            } else {
                if lit.unsigned_abs() > declared as u64 {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: line_no,
                        lit,
                        declared,
                    });
                }
                current.push(Literal::from_dimacs(lit));
                open_clause = true;
            }
        }
    }

    if open_clause {
        return Err(DimacsError::MissingTerminator { line: last_line });
    }
    let (declared, _) = header.ok_or(DimacsError::MissingHeader {
        line: last_line.max(1),
    })?;
    // Literal range was already checked against the header.
    let mut f = Formula::new(declared, clauses).expect("literals checked against header");
    f.set_comments(comments);
    Ok(f)
}

/// Emit a formula as DIMACS, leading comment block first.
pub fn emit_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    for comment in f.comments() {
        if comment.is_empty() {
            out.push_str("c\n");
        } else {
            writeln!(out, "c {comment}").unwrap();
        }
    }
    writeln!(out, "p cnf {} {}", f.variable_count(), f.len()).unwrap();
    for clause in f.clauses() {
        for lit in clause.iter() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_formula() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f.variable_count(), 2);
        assert_eq!(f.len(), 1);
        assert_eq!(f.clauses()[0], Clause::from_dimacs([1, -2]));
    }

    #[test]
    fn parses_s4_gadget() {
        let f = parse_dimacs("p cnf 3 4\n-1 -2 3 0\n1 -2 -3 0\n-1 2 -3 0\n1 2 3 0").unwrap();
        assert_eq!(f.len(), 4);
        assert!(!f.is_horn());
        assert_eq!(f.clauses()[3], Clause::from_dimacs([1, 2, 3]));
    }

    #[test]
    fn duplicate_literals_collapse() {
        let f = parse_dimacs("p cnf 1 1\n1 1 0").unwrap();
        assert_eq!(f.clauses()[0].width(), 1);
    }

    #[test]
    fn empty_clause_accepted() {
        let f = parse_dimacs("p cnf 3 1\n0").unwrap();
        assert!(f.clauses()[0].is_empty());
    }

    #[test]
    fn empty_formula_round_trip() {
        let f = parse_dimacs("p cnf 0 0\n").unwrap();
        assert_eq!(emit_dimacs(&f), "p cnf 0 0\n");
    }

    #[test]
    fn emit_matches_expected() {
        let f = Formula::new(2, [Clause::from_dimacs([1, -2])]).unwrap();
        assert_eq!(emit_dimacs(&f), "p cnf 2 1\n1 -2 0\n");
    }

    #[test]
    fn comment_prefix_preserved() {
        let text = "c generated\nc by hand\np cnf 1 1\n1 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(emit_dimacs(&f), "c generated\nc by hand\np cnf 1 1\n1 0\n");
    }

    #[test]
    fn malformed_header_reports_line() {
        let err = parse_dimacs("c x\np cnf two 1\n1 0").unwrap_err();
        assert_eq!(
            err,
            DimacsError::MalformedHeader {
                line: 2,
                text: "p cnf two 1".to_string()
            }
        );
    }

    #[test]
    fn out_of_range_literal_reports_line() {
        let err = parse_dimacs("p cnf 2 1\n1 -3 0").unwrap_err();
        assert_eq!(
            err,
            DimacsError::LiteralOutOfRange {
                line: 2,
                lit: -3,
                declared: 2
            }
        );
    }

    #[test]
    fn unterminated_clause_rejected() {
        let err = parse_dimacs("p cnf 2 1\n1 -2").unwrap_err();
        assert_eq!(err, DimacsError::MissingTerminator { line: 2 });
    }
}
