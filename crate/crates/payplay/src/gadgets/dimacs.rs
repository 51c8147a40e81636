//! DIMACS CNF parsing for the 3-SAT reduction.
//!
//! Clauses are normalized to exactly three literals: shorter clauses are
//! padded by repeating the first literal, longer ones are rejected.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("syntax error at line {line}, column {column}: {msg}")]
    Syntax {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("clause {index} at line {line} has {len} literals; at most 3 are allowed")]
    ClauseTooLarge {
        index: usize,
        line: usize,
        len: usize,
    },
    #[error("header declares {declared} {what}, found {found}")]
    HeaderMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("clause {index} at line {line} is empty; empty clauses have no 3-literal form")]
    EmptyClause { index: usize, line: usize },
    #[error("literal {literal} at line {line} is out of range for {num_vars} variables")]
    LiteralOutOfRange {
        literal: i64,
        line: usize,
        num_vars: usize,
    },
}

/// A 3-CNF formula. Literals are signed 1-based variable indices; repeated
/// literals within a clause are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self, DimacsError> {
        for (index, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(DimacsError::LiteralOutOfRange {
                        literal: lit as i64,
                        line: 0,
                        num_vars,
                    });
                }
            }
            let _ = index;
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// True iff some assignment satisfies every clause, by scanning all
    /// `2^num_vars` assignments.
    pub fn brute_force_satisfiable(&self) -> bool {
        assert!(self.num_vars <= 20, "brute-force SAT capped at 20 variables");
        (0u32..(1u32 << self.num_vars)).any(|bits| self.satisfied_by(bits))
    }

    /// Evaluates the formula under the assignment where bit `v-1` of `bits`
    /// gives variable `v`'s truth value.
    pub fn satisfied_by(&self, bits: u32) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = bits & (1 << (lit.unsigned_abs() - 1)) != 0;
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }
}

/// Parses DIMACS CNF text: `c` comment lines, one `p cnf <vars> <clauses>`
/// problem line, then zero-terminated clauses (which may span lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut declared: Option<(usize, usize)> = None;
    let mut clauses: Vec<[i32; 3]> = Vec::new();
    let mut pending: Vec<i32> = Vec::new();
    let mut pending_line = 0usize;

    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            let column = line.len() - trimmed.len() + 1;
            if declared.is_some() {
                return Err(DimacsError::Syntax {
                    line: line_no,
                    column,
                    msg: "duplicate problem line".to_string(),
                });
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[1] != "cnf" {
                return Err(DimacsError::Syntax {
                    line: line_no,
                    column,
                    msg: format!("expected 'p cnf <vars> <clauses>', got '{}'", trimmed),
                });
            }
            let vars = fields[2].parse::<usize>().map_err(|_| DimacsError::Syntax {
                line: line_no,
                column,
                msg: format!("invalid variable count '{}'", fields[2]),
            })?;
            let count = fields[3].parse::<usize>().map_err(|_| DimacsError::Syntax {
                line: line_no,
                column,
                msg: format!("invalid clause count '{}'", fields[3]),
            })?;
            declared = Some((vars, count));
            continue;
        }
        let Some((num_vars, _)) = declared else {
            return Err(DimacsError::Syntax {
                line: line_no,
                column: 1,
                msg: "clause data before the problem line".to_string(),
            });
        };
        for (column, token) in tokens_with_columns(line) {
            let lit = token.parse::<i64>().map_err(|_| DimacsError::Syntax {
                line: line_no,
                column,
                msg: format!("expected an integer literal, got '{}'", token),
            })?;
            if lit == 0 {
                finish_clause(
                    &mut pending,
                    pending_line.max(line_no),
                    clauses.len() + 1,
                    &mut clauses,
                )?;
                pending_line = 0;
                continue;
            }
            if lit.unsigned_abs() > num_vars as u64 {
                return Err(DimacsError::LiteralOutOfRange {
                    literal: lit,
                    line: line_no,
                    num_vars,
                });
            }
            if pending.is_empty() {
                pending_line = line_no;
            }
            pending.push(lit as i32);
        }
    }

    let Some((num_vars, declared_clauses)) = declared else {
        return Err(DimacsError::Syntax {
            line: 1,
            column: 1,
            msg: "missing problem line".to_string(),
        });
    };
    if !pending.is_empty() {
        return Err(DimacsError::Syntax {
            line: pending_line,
            column: 1,
            msg: "unterminated clause (missing trailing 0)".to_string(),
        });
    }
    if clauses.len() != declared_clauses {
        return Err(DimacsError::HeaderMismatch {
            what: "clauses",
            declared: declared_clauses,
            found: clauses.len(),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

fn finish_clause(
    pending: &mut Vec<i32>,
    line: usize,
    index: usize,
    clauses: &mut Vec<[i32; 3]>,
) -> Result<(), DimacsError> {
    let lits = std::mem::take(pending);
    match lits.len() {
        0 => Err(DimacsError::EmptyClause { index, line }),
        1 => {
            clauses.push([lits[0], lits[0], lits[0]]);
            Ok(())
        }
        2 => {
            clauses.push([lits[0], lits[1], lits[0]]);
            Ok(())
        }
        3 => {
            clauses.push([lits[0], lits[1], lits[2]]);
            Ok(())
        }
        len => Err(DimacsError::ClauseTooLarge { index, line, len }),
    }
}

fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_simple_formula() {
        let cnf = parse_dimacs("c a comment\np cnf 3 1\n1 -2 3 0\n").unwrap();
        assert_eq!(cnf.num_vars(), 3);
        assert_eq!(cnf.clauses(), &[[1, -2, 3]]);
    }

    #[test]
    fn pads_short_clauses_by_repeating_the_first_literal() {
        let cnf = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(cnf.clauses(), &[[1, 1, 1]]);
        let cnf = parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(cnf.clauses(), &[[1, -2, 1]]);
    }

    #[test]
    fn rejects_oversized_clauses() {
        let err = parse_dimacs("p cnf 2 1\n1 2 -1 2 0\n").unwrap_err();
        assert!(matches!(err, DimacsError::ClauseTooLarge { len: 4, .. }));
    }

    #[test]
    fn rejects_out_of_range_literals() {
        let err = parse_dimacs("p cnf 2 1\n1 3 0\n").unwrap_err();
        assert!(matches!(err, DimacsError::LiteralOutOfRange { .. }));
    }

    #[test]
    fn rejects_clause_count_mismatch() {
        let err = parse_dimacs("p cnf 2 2\n1 2 0\n").unwrap_err();
        assert!(matches!(
            err,
            DimacsError::HeaderMismatch {
                what: "clauses",
                declared: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn rejects_missing_header_and_empty_clause() {
        assert!(matches!(
            parse_dimacs("1 2 0\n"),
            Err(DimacsError::Syntax { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n0\n"),
            Err(DimacsError::EmptyClause { .. })
        ));
    }

    #[test]
    fn clauses_may_span_lines() {
        let cnf = parse_dimacs("p cnf 3 1\n1\n-2\n3 0\n").unwrap();
        assert_eq!(cnf.clauses(), &[[1, -2, 3]]);
    }

    #[test]
    fn brute_force_sat_agrees_with_hand_cases() {
        let sat = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n").unwrap();
        assert!(sat.brute_force_satisfiable());
        let unsat = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert!(!unsat.brute_force_satisfiable());
    }
}
