//! A small deterministic DPLL solver.
//!
//! Unit propagation and pure-literal elimination run to a fixpoint before every
//! branch; branching takes the lowest-index unassigned variable, `true` first.
//! Variables left unconstrained end up `true`.

use crate::cnf::{Clause, CnfFormula, Literal};

/// Returns a total satisfying assignment, or `None` when `f` is unsatisfiable.
pub fn sat_solve(f: &CnfFormula) -> Option<Vec<bool>> {
    if f.variable_count() <= MASK_BITS {
        solve_masked(f)
    } else {
        solve_general(f)
    }
}

fn solve_general(f: &CnfFormula) -> Option<Vec<bool>> {
    let mut assignment = vec![None; f.variable_count()];
    if dpll(f.clauses(), &mut assignment) {
        Some(assignment.into_iter().map(|v| v.unwrap_or(true)).collect())
    } else {
        None
    }
}

enum ClauseState {
    Satisfied,
    Conflict,
    Unit(Literal),
    Open,
}

fn clause_state(clause: &Clause, assignment: &[Option<bool>]) -> ClauseState {
    let mut unassigned = None;
    let mut open = 0;
    for &l in clause {
        match assignment[l.variable] {
            Some(v) if v != l.negated => return ClauseState::Satisfied,
            Some(_) => {}
            None => {
                open += 1;
                unassigned = Some(l);
            }
        }
    }
    match (open, unassigned) {
        (0, _) => ClauseState::Conflict,
        (1, Some(l)) => ClauseState::Unit(l),
        _ => ClauseState::Open,
    }
}

/// Propagates units and pure literals. Returns `false` on conflict.
fn simplify(clauses: &[Clause], assignment: &mut [Option<bool>]) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            match clause_state(clause, assignment) {
                ClauseState::Conflict => return false,
                ClauseState::Unit(l) => {
                    assignment[l.variable] = Some(!l.negated);
                    changed = true;
                }
                _ => {}
            }
        }
        if changed {
            continue;
        }

        // polarity bits: 1 = seen positive, 2 = seen negative
        let mut polarity = vec![0u8; assignment.len()];
        for clause in clauses {
            if matches!(clause_state(clause, assignment), ClauseState::Satisfied) {
                continue;
            }
            for l in clause.iter().filter(|l| assignment[l.variable].is_none()) {
                polarity[l.variable] |= if l.negated { 2 } else { 1 };
            }
        }
        for (v, bits) in polarity.into_iter().enumerate() {
            if bits == 1 || bits == 2 {
                assignment[v] = Some(bits == 1);
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
}

fn dpll(clauses: &[Clause], assignment: &mut Vec<Option<bool>>) -> bool {
    if !simplify(clauses, assignment) {
        return false;
    }
    if clauses
        .iter()
        .all(|c| matches!(clause_state(c, assignment), ClauseState::Satisfied))
    {
        return true;
    }
    let Some(var) = assignment.iter().position(Option::is_none) else {
        return false;
    };
    for value in [true, false] {
        let mut trial = assignment.clone();
        trial[var] = Some(value);
        if dpll(clauses, &mut trial) {
            *assignment = trial;
            return true;
        }
    }
    false
}

/// The same procedure over bitmasks, for formulas with at most
/// [`MASK_BITS`] variables. Clauses hold no repeated or complementary
/// literals, so every clause state is a pair of mask tests.
const MASK_BITS: usize = u128::BITS as usize;

type Mask = u128;

#[derive(Clone, Copy)]
struct MaskClause {
    pos: Mask,
    neg: Mask,
}

#[derive(Clone, Copy)]
struct MaskAssignment {
    /// Variables assigned `true`.
    t: Mask,
    /// Variables assigned `false`.
    f: Mask,
}

impl MaskAssignment {
    fn unassigned(self) -> Mask {
        !(self.t | self.f)
    }

    fn set(&mut self, var: usize, value: bool) {
        if value {
            self.t |= 1 << var;
        } else {
            self.f |= 1 << var;
        }
    }
}

impl MaskClause {
    fn state(self, a: MaskAssignment) -> ClauseState {
        if self.pos & a.t != 0 || self.neg & a.f != 0 {
            return ClauseState::Satisfied;
        }
        let u = a.unassigned();
        let (pos, neg) = (self.pos & u, self.neg & u);
        match pos.count_ones() + neg.count_ones() {
            0 => ClauseState::Conflict,
            1 if pos != 0 => ClauseState::Unit(Literal::pos(pos.trailing_zeros() as usize)),
            1 => ClauseState::Unit(Literal::neg(neg.trailing_zeros() as usize)),
            _ => ClauseState::Open,
        }
    }
}

fn solve_masked(f: &CnfFormula) -> Option<Vec<bool>> {
    let clauses: Vec<MaskClause> = f
        .clauses()
        .iter()
        .map(|c| {
            c.iter().fold(MaskClause { pos: 0, neg: 0 }, |mut m, l| {
                if l.negated {
                    m.neg |= 1 << l.variable;
                } else {
                    m.pos |= 1 << l.variable;
                }
                m
            })
        })
        .collect();
    let n = f.variable_count();
    let all: Mask = if n == MASK_BITS { !0 } else { (1 << n) - 1 };
    let mut a = MaskAssignment { t: 0, f: !all };
    dpll_masked(&clauses, all, &mut a).then(|| (0..n).map(|v| a.f >> v & 1 == 0).collect())
}

fn simplify_masked(clauses: &[MaskClause], a: &mut MaskAssignment) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            match clause.state(*a) {
                ClauseState::Conflict => return false,
                ClauseState::Unit(l) => {
                    a.set(l.variable, !l.negated);
                    changed = true;
                }
                _ => {}
            }
        }
        if changed {
            continue;
        }
        let (mut seen_pos, mut seen_neg) = (0 as Mask, 0 as Mask);
        let u = a.unassigned();
        for clause in clauses {
            if !matches!(clause.state(*a), ClauseState::Satisfied) {
                seen_pos |= clause.pos & u;
                seen_neg |= clause.neg & u;
            }
        }
        let pure_pos = seen_pos & !seen_neg;
        let pure_neg = seen_neg & !seen_pos;
        if pure_pos | pure_neg == 0 {
            return true;
        }
        a.t |= pure_pos;
        a.f |= pure_neg;
    }
}

fn dpll_masked(clauses: &[MaskClause], all: Mask, a: &mut MaskAssignment) -> bool {
    if !simplify_masked(clauses, a) {
        return false;
    }
    if clauses
        .iter()
        .all(|c| matches!(c.state(*a), ClauseState::Satisfied))
    {
        return true;
    }
    let free = a.unassigned() & all;
    if free == 0 {
        return false;
    }
    let var = free.trailing_zeros() as usize;
    for value in [true, false] {
        let mut trial = *a;
        trial.set(var, value);
        if dpll_masked(clauses, all, &mut trial) {
            *a = trial;
            return true;
        }
    }
    false
}

/// Truth-table satisfiability, for cross-checking small formulas.
pub fn brute_force_sat(f: &CnfFormula) -> Option<Vec<bool>> {
    let n = f.variable_count();
    assert!(n < 24, "truth table too large");
    (0..1usize << n)
        .map(|code| (0..n).map(|i| code >> i & 1 == 1).collect::<Vec<_>>())
        .find(|a| f.is_satisfied_by(a))
}
