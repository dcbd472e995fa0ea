//! CNF formulas and DIMACS interchange.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A propositional literal; ordered by variable, positive before negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(variable: usize) -> Self {
        Literal { variable, negated: false }
    }

    pub fn neg(variable: usize) -> Self {
        Literal { variable, negated: true }
    }

    pub fn negate(self) -> Self {
        Literal {
            negated: !self.negated,
            ..self
        }
    }

    /// Value of the literal under a total assignment.
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.variable] != self.negated
    }

    fn to_dimacs(self) -> i64 {
        let v = self.variable as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

pub type Clause = BTreeSet<Literal>;

/// A normalized CNF formula: tautological clauses dropped, clauses deduplicated
/// and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfFormula {
    variable_count: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new<C, L>(variable_count: usize, clauses: C) -> Result<Self>
    where
        C: IntoIterator<Item = L>,
        L: IntoIterator<Item = Literal>,
    {
        let mut set = BTreeSet::new();
        for clause in clauses {
            let clause: Clause = clause.into_iter().collect();
            if let Some(l) = clause.iter().find(|l| l.variable >= variable_count) {
                return Err(Error::IndexOutOfRange {
                    index: l.variable,
                    n: variable_count,
                });
            }
            if clause.iter().any(|l| clause.contains(&l.negate())) {
                continue;
            }
            set.insert(clause);
        }
        Ok(CnfFormula {
            variable_count,
            clauses: set.into_iter().collect(),
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// The formula with the given unit clauses added, normalized exactly as
    /// [`CnfFormula::new`] would.
    pub(crate) fn with_units<I: IntoIterator<Item = Literal>>(&self, units: I) -> Result<Self> {
        let units: BTreeSet<Clause> = units.into_iter().map(|l| Clause::from([l])).collect();
        if let Some(l) = units.iter().flatten().find(|l| l.variable >= self.variable_count) {
            return Err(Error::IndexOutOfRange {
                index: l.variable,
                n: self.variable_count,
            });
        }
        let clauses = self
            .clauses
            .iter()
            .merge(units.iter())
            .dedup()
            .cloned()
            .collect();
        Ok(CnfFormula {
            variable_count: self.variable_count,
            clauses,
        })
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.first().is_some_and(|c| c.is_empty())
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    pub fn to_dimacs(&self) -> String {
        export_dimacs(self)
    }
}

/// Writes `f` in DIMACS CNF with 1-based variables.
pub fn export_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.variable_count, f.clauses.len());
    for clause in &f.clauses {
        for l in clause {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF. Comment lines (`c ...`) and a trailing `%` line are
/// ignored; clauses may span lines.
pub fn import_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_error(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v.parse().map_err(|_| parse_error(line_no, "bad variable count"))?;
                    let c = c.parse().map_err(|_| parse_error(line_no, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(parse_error(line_no, "malformed header")),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(parse_error(line_no, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let value: i64 = tok
                .parse()
                .map_err(|_| parse_error(line_no, &format!("bad literal `{tok}`")))?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let variable = (value.unsigned_abs() - 1) as usize;
            if variable >= vars {
                return Err(parse_error(line_no, &format!("variable {} exceeds header", value.abs())));
            }
            current.push(Literal {
                variable,
                negated: value < 0,
            });
        }
    }

    let Some((vars, count)) = header else {
        return Err(parse_error(last_line.max(1), "missing header"));
    };
    if !current.is_empty() {
        return Err(parse_error(last_line, "unterminated clause"));
    }
    if clauses.len() != count {
        return Err(parse_error(
            last_line.max(1),
            &format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(vars, clauses)
}

fn parse_error(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn export_contradiction() {
        let f = CnfFormula::new(1, vec![vec![Literal::pos(0)], vec![Literal::neg(0)]]).unwrap();
        assert_eq!(export_dimacs(&f), "p cnf 1 2\n1 0\n-1 0\n");
    }

    #[test]
    fn export_is_order_independent() {
        let a = CnfFormula::new(2, vec![vec![Literal::neg(1)], vec![Literal::pos(0), Literal::pos(1)]]).unwrap();
        let b = CnfFormula::new(2, vec![vec![Literal::pos(1), Literal::pos(0)], vec![Literal::neg(1)]]).unwrap();
        assert_eq!(export_dimacs(&a), export_dimacs(&b));
    }

    #[test]
    fn tautologies_are_dropped() {
        let f = CnfFormula::new(2, vec![vec![Literal::pos(0), Literal::neg(0)], vec![Literal::pos(1)]]).unwrap();
        assert_eq!(f.clauses().len(), 1);
    }

    #[test]
    fn import_roundtrip() {
        let text = "c example\np cnf 3 2\n1 -3 0\n2\n3 0\n";
        let f = import_dimacs(text).unwrap();
        assert_eq!(f.variable_count(), 3);
        assert_eq!(import_dimacs(&export_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn import_errors_carry_line_numbers() {
        assert_eq!(
            import_dimacs("p cnf x 1\n1 0\n").unwrap_err(),
            Error::Parse { line: 1, message: "bad variable count".into() }
        );
        assert!(matches!(import_dimacs("p dnf 1 1\n1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(import_dimacs("1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(import_dimacs("p cnf 1 1\n2 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(import_dimacs("p cnf 1 2\n1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(import_dimacs("p cnf 1 1\n1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_clause_survives_normalization() {
        let f = import_dimacs("p cnf 1 1\n0\n").unwrap();
        assert!(f.has_empty_clause());
        assert_eq!(export_dimacs(&f), "p cnf 1 1\n0\n");
    }
}
