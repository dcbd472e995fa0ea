//! Exhibitability decision.
//!
//! A pattern is exhibitable exactly when every consistency condition extends
//! to a complete type that extends no inconsistency condition (and, when there
//! are no consistency conditions, some complete type avoids every
//! inconsistency condition, so that the universe can be nonempty). Each such
//! question is one CNF instance; the chosen types become the witness universe.

use serde::{Deserialize, Serialize};

use crate::cnf::{CnfFormula, Literal};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pattern::{decode_subset, Condition, IndexSet, Pattern};
use crate::sat::sat_solve;
use crate::semantics::{check_exhibits, SetFamily};

/// Why a pattern is not exhibitable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Failing {
    /// A consistency condition no admissible complete type extends.
    Condition(Condition),
    /// `C = ∅` and no complete type avoids `I`, so no nonempty universe works.
    EmptyUniverse(EmptyUniverse),
}

/// Serializes as the string `"empty-universe"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmptyUniverse {
    #[serde(rename = "empty-universe")]
    Marker,
}

impl Failing {
    pub fn empty_universe() -> Self {
        Failing::EmptyUniverse(EmptyUniverse::Marker)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub exhibitable: bool,
    pub witness: Option<SetFamily>,
    pub failing: Option<Failing>,
}

impl Decision {
    fn yes(witness: SetFamily) -> Self {
        Decision {
            exhibitable: true,
            witness: Some(witness),
            failing: None,
        }
    }

    fn no(failing: Failing) -> Self {
        Decision {
            exhibitable: false,
            witness: None,
            failing: Some(failing),
        }
    }
}

fn inconsistency_clauses(p: &Pattern) -> impl Iterator<Item = Vec<Literal>> + '_ {
    p.inconsistency().iter().map(|z| {
        z.pos()
            .iter()
            .map(|&i| Literal::neg(i))
            .chain(z.neg().iter().map(|&j| Literal::pos(j)))
            .collect()
    })
}

/// Variables `x_i` ("index `i` is in the type"): units fixing `c`, plus one
/// clause per inconsistency condition forbidding its extension.
pub fn condition_cnf(p: &Pattern, c: &Condition) -> CnfFormula {
    with_condition(&sentinel_cnf(p), c)
}

fn with_condition(base: &CnfFormula, c: &Condition) -> CnfFormula {
    let units = c
        .pos()
        .iter()
        .map(|&i| Literal::pos(i))
        .chain(c.neg().iter().map(|&j| Literal::neg(j)));
    base.with_units(units).expect("pattern indices in range")
}

/// The instance asking for any complete type that avoids every inconsistency
/// condition.
pub fn sentinel_cnf(p: &Pattern) -> CnfFormula {
    CnfFormula::new(p.n(), inconsistency_clauses(p)).expect("pattern indices in range")
}

/// The family whose points are the given types (deduplicated, first
/// occurrence first), with `sets[i]` = points whose type contains `i`.
pub fn family_from_types<I: IntoIterator<Item = IndexSet>>(n: usize, types: I) -> Result<SetFamily> {
    let mut points: Vec<IndexSet> = Vec::new();
    for t in types {
        if !points.contains(&t) {
            points.push(t);
        }
    }
    let sets = (0..n)
        .map(|i| (0..points.len()).filter(|&p| points[p].contains(&i)).collect())
        .collect();
    SetFamily::new(points.len(), sets)
}

fn finish(p: &Pattern, types: Vec<IndexSet>) -> Result<Decision> {
    let witness = family_from_types(p.n(), types)?;
    let report = check_exhibits(&witness, p)?;
    if !report.exhibits {
        return Err(Error::WitnessVerificationFailure(report.failures()));
    }
    Ok(Decision::yes(witness))
}

fn true_set(assignment: &[bool]) -> IndexSet {
    (0..assignment.len()).filter(|&i| assignment[i]).collect()
}

/// Decides exhibitability with the SAT solver and returns a verified witness
/// or the first failing condition in canonical order.
pub fn decide_exhibitable(p: &Pattern) -> Result<Decision> {
    let base = sentinel_cnf(p);
    let mut types = Vec::with_capacity(p.consistency().len().max(1));
    for c in p.consistency() {
        match sat_solve(&with_condition(&base, c)) {
            Some(a) => types.push(true_set(&a)),
            None => return Ok(Decision::no(Failing::Condition(c.clone()))),
        }
    }
    if p.consistency().is_empty() {
        match sat_solve(&base) {
            Some(a) => types.push(true_set(&a)),
            None => return Ok(Decision::no(Failing::empty_universe())),
        }
    }
    finish(p, types)
}

/// Shorthand for `decide_exhibitable(p)?.exhibitable`.
pub fn is_exhibitable(p: &Pattern) -> Result<bool> {
    Ok(decide_exhibitable(p)?.exhibitable)
}

/// The same decision by scanning all `2^n` complete types in ascending binary
/// order; the independent oracle for the SAT path.
pub fn brute_force_exhibitable(p: &Pattern, limits: &Limits) -> Result<Decision> {
    let n = p.n();
    Limits::check("pattern size n", n, limits.max_n.min(usize::BITS as usize - 1))?;
    let admissible = |x: &IndexSet| p.inconsistency().iter().all(|z| !z.is_extended_by(x));
    let first = |c: Option<&Condition>| {
        (0..1usize << n)
            .map(decode_subset)
            .find(|x| c.is_none_or(|c| c.is_extended_by(x)) && admissible(x))
    };
    let mut types = Vec::new();
    for c in p.consistency() {
        match first(Some(c)) {
            Some(x) => types.push(x),
            None => return Ok(Decision::no(Failing::Condition(c.clone()))),
        }
    }
    if p.consistency().is_empty() {
        match first(None) {
            Some(x) => types.push(x),
            None => return Ok(Decision::no(Failing::empty_universe())),
        }
    }
    finish(p, types)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::export_dimacs;
    use crate::pattern::{classify, index_set, pattern_from_cnf};

    fn cond(pos: &[usize], neg: &[usize]) -> Condition {
        Condition::new(index_set(pos.iter().copied()), index_set(neg.iter().copied())).unwrap()
    }

    fn lone_index_both_ways() -> Pattern {
        Pattern::new(1, [], [cond(&[0], &[]), cond(&[], &[0])]).unwrap()
    }

    fn union_configuration() -> Pattern {
        Pattern::new(
            3,
            [cond(&[0], &[]), cond(&[1], &[])],
            [cond(&[0, 1], &[]), cond(&[0], &[2]), cond(&[1], &[2]), cond(&[2], &[0, 1])],
        )
        .unwrap()
    }

    #[test]
    fn sentinel_of_lone_index_both_ways_is_contradictory() {
        let f = sentinel_cnf(&lone_index_both_ways());
        assert_eq!(export_dimacs(&f), "p cnf 1 2\n1 0\n-1 0\n");
        assert_eq!(sat_solve(&f), None);
    }

    #[test]
    fn condition_cnf_example() {
        let p = Pattern::positive(2, &[&[0]], &[&[0, 1]]).unwrap();
        let f = condition_cnf(&p, &cond(&[0], &[]));
        assert_eq!(f.clauses().len(), 2);
        assert_eq!(sat_solve(&f), Some(vec![true, false]));
        let units = condition_cnf(&Pattern::empty(2), &cond(&[0], &[1]));
        assert_eq!(sat_solve(&units), Some(vec![true, false]));
    }

    #[test]
    fn lone_index_both_ways_is_not_exhibitable() {
        let d = decide_exhibitable(&lone_index_both_ways()).unwrap();
        assert!(!d.exhibitable);
        assert_eq!(d.failing, Some(Failing::empty_universe()));
        assert_eq!(brute_force_exhibitable(&lone_index_both_ways(), &Limits::default()).unwrap(), d);
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"exhibitable":false,"witness":null,"failing":"empty-universe"}"#
        );
    }

    #[test]
    fn union_configuration_is_exhibitable() {
        let d = decide_exhibitable(&union_configuration()).unwrap();
        assert!(d.exhibitable);
        assert!(check_exhibits(d.witness.as_ref().unwrap(), &union_configuration()).unwrap().exhibits);
    }

    #[test]
    fn fully_complete_two_pattern() {
        let p = Pattern::new(
            2,
            [cond(&[], &[0, 1]), cond(&[0, 1], &[])],
            [cond(&[0], &[1]), cond(&[1], &[0])],
        )
        .unwrap();
        assert!(classify(&p).fully_complete);
        assert!(is_exhibitable(&p).unwrap());
    }

    #[test]
    fn failing_condition_is_reported() {
        let p = Pattern::positive(2, &[&[0, 1], &[1]], &[&[0, 1]]).unwrap();
        let d = decide_exhibitable(&p).unwrap();
        assert_eq!(d.failing, Some(Failing::Condition(cond(&[0, 1], &[]))));
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"exhibitable":false,"witness":null,"failing":[[0,1],[]]}"#
        );
    }

    #[test]
    fn empty_pattern_has_one_point() {
        let d = brute_force_exhibitable(&Pattern::empty(2), &Limits::default()).unwrap();
        assert_eq!(d.witness, Some(SetFamily::new(1, vec![IndexSet::new(); 2]).unwrap()));
        assert_eq!(decide_exhibitable(&Pattern::empty(0)).unwrap().witness.unwrap().universe(), 1);
    }

    #[test]
    fn cnf_bridge_examples() {
        let or = CnfFormula::new(2, [vec![Literal::pos(0), Literal::pos(1)]]).unwrap();
        let p = pattern_from_cnf(&or);
        assert!(brute_force_exhibitable(&p, &Limits::default()).unwrap().exhibitable);
        assert!(is_exhibitable(&p).unwrap());
        let contradiction = CnfFormula::new(1, [vec![Literal::pos(0)], vec![Literal::neg(0)]]).unwrap();
        assert!(!is_exhibitable(&pattern_from_cnf(&contradiction)).unwrap());
    }

    #[test]
    fn oracle_bound() {
        let p = Pattern::empty(17);
        assert!(matches!(
            brute_force_exhibitable(&p, &Limits::default()),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn merged_units_match_direct_construction() {
        use crate::random::{random_pattern, rng};
        let mut r = rng(3);
        for _ in 0..300 {
            let p = random_pattern(&mut r, 5, 8);
            for c in p.consistency() {
                let units = c
                    .pos()
                    .iter()
                    .map(|&i| vec![Literal::pos(i)])
                    .chain(c.neg().iter().map(|&j| vec![Literal::neg(j)]));
                let direct = CnfFormula::new(p.n(), units.chain(inconsistency_clauses(&p))).unwrap();
                assert_eq!(condition_cnf(&p, c), direct);
            }
        }
    }
}
