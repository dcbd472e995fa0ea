//! Patterns of consistency and inconsistency and their classification.
//!
//! An `n`-pattern is a pair `(C, I)` of sets of conditions over the index set
//! `[0, n)`. A condition `(pos, neg)` asks for the instances indexed by `pos`
//! together with the negated instances indexed by `neg`. Conditions in `C` must
//! be simultaneously satisfiable, conditions in `I` must not be.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cnf::CnfFormula;
use crate::error::{Error, Result};

/// A finite set of indices, ordered ascending.
pub type IndexSet = BTreeSet<usize>;

/// Builds an [`IndexSet`] from anything iterable.
pub fn index_set<I: IntoIterator<Item = usize>>(items: I) -> IndexSet {
    items.into_iter().collect()
}

/// Decodes a binary subset code `Σ 2^i` into the subset it names.
pub fn decode_subset(code: usize) -> IndexSet {
    (0..usize::BITS as usize)
        .filter(|i| code >> i & 1 == 1)
        .collect()
}

/// Encodes a subset of a small index set as `Σ_{i∈X} 2^i`.
pub fn encode_subset(set: &IndexSet) -> usize {
    set.iter().fold(0, |acc, i| acc | 1 << i)
}

/// A pair `(pos, neg)` of index sets, never both empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(Vec<usize>, Vec<usize>)", into = "(Vec<usize>, Vec<usize>)")]
pub struct Condition {
    pos: IndexSet,
    neg: IndexSet,
}

impl Condition {
    pub fn new(pos: IndexSet, neg: IndexSet) -> Result<Self> {
        if pos.is_empty() && neg.is_empty() {
            return Err(Error::EmptyCondition);
        }
        Ok(Condition { pos, neg })
    }

    /// `(pos, ∅)`; errors when `pos` is empty.
    pub fn positive(pos: IndexSet) -> Result<Self> {
        Condition::new(pos, IndexSet::new())
    }

    /// The complete condition `(x, [0,n) ∖ x)`.
    pub fn complete(x: &IndexSet, n: usize) -> Result<Self> {
        let neg = (0..n).filter(|i| !x.contains(i)).collect();
        Condition::new(x.clone(), neg)
    }

    pub fn pos(&self) -> &IndexSet {
        &self.pos
    }

    pub fn neg(&self) -> &IndexSet {
        &self.neg
    }

    pub fn max_index(&self) -> Option<usize> {
        self.pos.iter().chain(&self.neg).copied().max()
    }

    /// `pos ∩ neg = ∅`.
    pub fn is_disjoint(&self) -> bool {
        self.pos.is_disjoint(&self.neg)
    }

    pub fn is_complete(&self, n: usize) -> bool {
        self.is_disjoint()
            && self.pos.len() + self.neg.len() == n
            && self.max_index().is_none_or(|m| m < n)
    }

    /// Coordinatewise inclusion `self ⊆ other`.
    pub fn is_sub_condition_of(&self, other: &Condition) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    /// Whether the complete type `x` (the indices whose instance holds)
    /// satisfies every request of this condition.
    pub fn is_extended_by(&self, x: &IndexSet) -> bool {
        self.pos.is_subset(x) && self.neg.is_disjoint(x)
    }
}

impl TryFrom<(Vec<usize>, Vec<usize>)> for Condition {
    type Error = Error;

    fn try_from((pos, neg): (Vec<usize>, Vec<usize>)) -> Result<Self> {
        Condition::new(index_set(pos), index_set(neg))
    }
}

impl From<Condition> for (Vec<usize>, Vec<usize>) {
    fn from(c: Condition) -> Self {
        (c.pos.into_iter().collect(), c.neg.into_iter().collect())
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn set(f: &mut fmt::Formatter<'_>, s: &IndexSet) -> fmt::Result {
            write!(f, "{{")?;
            for (k, i) in s.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "}}")
        }
        write!(f, "(")?;
        set(f, &self.pos)?;
        write!(f, ",")?;
        set(f, &self.neg)?;
        write!(f, ")")
    }
}

/// Pattern data as read from JSON, before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPattern {
    pub n: usize,
    #[serde(default)]
    pub consistency: Vec<(Vec<usize>, Vec<usize>)>,
    #[serde(default)]
    pub inconsistency: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ValidationMode {
    /// Duplicate conditions are an error.
    #[default]
    Strict,
    /// Duplicate conditions are merged.
    Lenient,
}

/// A validated `n`-pattern. Conditions are kept in canonical order
/// (lexicographic on `(pos, neg)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct Pattern {
    n: usize,
    consistency: BTreeSet<Condition>,
    inconsistency: BTreeSet<Condition>,
}

impl Pattern {
    /// Builds a pattern from already constructed conditions; duplicates are
    /// merged, indices are range-checked.
    pub fn new<C, I>(n: usize, consistency: C, inconsistency: I) -> Result<Self>
    where
        C: IntoIterator<Item = Condition>,
        I: IntoIterator<Item = Condition>,
    {
        let p = Pattern {
            n,
            consistency: consistency.into_iter().collect(),
            inconsistency: inconsistency.into_iter().collect(),
        };
        for c in p.conditions() {
            if let Some(m) = c.max_index() {
                if m >= n {
                    return Err(Error::IndexOutOfRange { index: m, n });
                }
            }
        }
        Ok(p)
    }

    /// Shorthand for positive patterns given as lists of index lists.
    pub fn positive(n: usize, consistency: &[&[usize]], inconsistency: &[&[usize]]) -> Result<Self> {
        let conv = |sets: &[&[usize]]| -> Result<Vec<Condition>> {
            sets.iter()
                .map(|s| Condition::positive(index_set(s.iter().copied())))
                .collect()
        };
        Pattern::new(n, conv(consistency)?, conv(inconsistency)?)
    }

    pub fn empty(n: usize) -> Self {
        Pattern {
            n,
            consistency: BTreeSet::new(),
            inconsistency: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn consistency(&self) -> &BTreeSet<Condition> {
        &self.consistency
    }

    pub fn inconsistency(&self) -> &BTreeSet<Condition> {
        &self.inconsistency
    }

    /// All conditions, consistency first.
    pub fn conditions(&self) -> impl Iterator<Item = &Condition> {
        self.consistency.iter().chain(&self.inconsistency)
    }

    pub fn is_empty(&self) -> bool {
        self.consistency.is_empty() && self.inconsistency.is_empty()
    }

    pub fn to_raw(&self) -> RawPattern {
        RawPattern::from(self.clone())
    }

    /// `k`-bounded: positive inconsistency part with every `|pos| = k`
    /// (vacuously true when `I = ∅`).
    pub fn is_k_bounded(&self, k: usize) -> bool {
        self.inconsistency
            .iter()
            .all(|z| z.neg().is_empty() && z.pos().len() == k)
    }

    /// Canonical JSON encoding.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pattern serialization is infallible")
    }
}

impl From<Pattern> for RawPattern {
    fn from(p: Pattern) -> Self {
        RawPattern {
            n: p.n,
            consistency: p.consistency.into_iter().map(Into::into).collect(),
            inconsistency: p.inconsistency.into_iter().map(Into::into).collect(),
        }
    }
}

impl TryFrom<RawPattern> for Pattern {
    type Error = Error;

    fn try_from(raw: RawPattern) -> Result<Self> {
        validate_pattern(&raw, ValidationMode::Strict)
    }
}

/// Checks raw pattern data against the definition and returns the normalized
/// pattern.
pub fn validate_pattern(raw: &RawPattern, mode: ValidationMode) -> Result<Pattern> {
    let n = raw.n;
    let convert = |list: &[(Vec<usize>, Vec<usize>)]| -> Result<BTreeSet<Condition>> {
        let mut out = BTreeSet::new();
        for (pos, neg) in list {
            if let Some(&index) = pos.iter().chain(neg).find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index, n });
            }
            let c = Condition::new(index_set(pos.iter().copied()), index_set(neg.iter().copied()))?;
            if !out.insert(c.clone()) && mode == ValidationMode::Strict {
                return Err(Error::DuplicateCondition(c));
            }
        }
        Ok(out)
    };
    Ok(Pattern {
        n,
        consistency: convert(&raw.consistency)?,
        inconsistency: convert(&raw.inconsistency)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternFlags {
    pub reasonable: bool,
    pub positive: bool,
    pub complete: bool,
    pub fully_complete: bool,
    /// `Some(k)` when `I` is nonempty, positive, and every `|Z⁺| = k`.
    pub k_bounded: Option<usize>,
    /// `Some(k)` when `I` is nonempty, positive, and `k = max |Z⁺|`.
    pub k_bounded_at_most: Option<usize>,
}

pub fn classify(p: &Pattern) -> PatternFlags {
    let n = p.n();
    let reasonable = p.inconsistency.iter().all(|z| {
        z.is_disjoint() && p.consistency.iter().all(|y| !z.is_sub_condition_of(y))
    }) && p.consistency.iter().all(Condition::is_disjoint);

    let positive = p.conditions().all(|c| c.neg().is_empty());
    let complete = !p.is_empty() && p.conditions().all(|c| c.is_complete(n));
    let fully_complete = complete
        && !p.consistency.is_empty()
        && p.consistency.is_disjoint(&p.inconsistency)
        && n < usize::BITS as usize
        && p.consistency.len() + p.inconsistency.len() == 1usize << n;

    let positive_i = !p.inconsistency.is_empty() && p.inconsistency.iter().all(|z| z.neg().is_empty());
    let sizes: BTreeSet<usize> = p.inconsistency.iter().map(|z| z.pos().len()).collect();
    let k_bounded = match (positive_i, sizes.len()) {
        (true, 1) => sizes.first().copied(),
        _ => None,
    };
    let k_bounded_at_most = if positive_i { sizes.last().copied() } else { None };

    PatternFlags {
        reasonable,
        positive,
        complete,
        fully_complete,
        k_bounded,
        k_bounded_at_most,
    }
}

/// The `(m+1)`-pattern whose exhibitability is the satisfiability of `f`.
///
/// Index `m` is a marker carried by the single consistency condition
/// `({m}, ∅)`. A clause `c` becomes the inconsistency condition
/// `({j : ¬v_j ∈ c}, {i : v_i ∈ c})`: a complete type extends it exactly when
/// the corresponding assignment falsifies `c`. An empty clause becomes
/// `({m}, ∅) ∈ I`, which makes the result unreasonable and non-exhibitable.
pub fn pattern_from_cnf(f: &CnfFormula) -> Pattern {
    let m = f.variable_count();
    let marker = Condition::positive(index_set([m])).expect("nonempty");
    let inconsistency = f.clauses().iter().map(|clause| {
        if clause.is_empty() {
            return marker.clone();
        }
        let pos = clause.iter().filter(|l| l.negated).map(|l| l.variable).collect();
        let neg = clause.iter().filter(|l| !l.negated).map(|l| l.variable).collect();
        Condition::new(pos, neg).expect("nonempty clause")
    });
    Pattern {
        n: m + 1,
        consistency: BTreeSet::from([marker.clone()]),
        inconsistency: inconsistency.collect(),
    }
}

/// Turns a reasonable consistency `n`-pattern into a positive `2n`-pattern:
/// negative instance `j` becomes positive instance `n + j`, and each pair
/// `{i, n + i}` is declared inconsistent.
pub fn double_positive(p: &Pattern) -> Result<Pattern> {
    if !p.inconsistency.is_empty() || !classify(p).reasonable {
        return Err(Error::NotConsistencyPattern);
    }
    let n = p.n;
    let consistency = p.consistency.iter().map(|c| {
        let pos = c.pos().iter().copied().chain(c.neg().iter().map(|j| n + j));
        Condition::positive(index_set(pos)).expect("nonempty")
    });
    let inconsistency =
        (0..n).map(|i| Condition::positive(index_set([i, i + n])).expect("nonempty"));
    Pattern::new(2 * n, consistency, inconsistency)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Literal;

    fn raw(n: usize, c: &[(&[usize], &[usize])], i: &[(&[usize], &[usize])]) -> RawPattern {
        let conv = |l: &[(&[usize], &[usize])]| l.iter().map(|(p, q)| (p.to_vec(), q.to_vec())).collect();
        RawPattern {
            n,
            consistency: conv(c),
            inconsistency: conv(i),
        }
    }

    fn cond(pos: &[usize], neg: &[usize]) -> Condition {
        Condition::new(index_set(pos.iter().copied()), index_set(neg.iter().copied())).unwrap()
    }

    #[test]
    fn validate_minimal_pattern() {
        let p = validate_pattern(&raw(2, &[(&[0], &[])], &[]), ValidationMode::Strict).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.consistency().len(), 1);
    }

    #[test]
    fn validate_rejects_empty_condition() {
        let err = validate_pattern(&raw(1, &[(&[], &[])], &[]), ValidationMode::Strict).unwrap_err();
        assert_eq!(err, Error::EmptyCondition);
    }

    #[test]
    fn validate_rejects_out_of_range() {
        let err = validate_pattern(&raw(1, &[(&[1], &[])], &[]), ValidationMode::Strict).unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { index: 1, n: 1 });
    }

    #[test]
    fn duplicates_strict_vs_lenient() {
        let r = raw(2, &[(&[0], &[1]), (&[0], &[1, 1])], &[]);
        assert!(matches!(
            validate_pattern(&r, ValidationMode::Strict),
            Err(Error::DuplicateCondition(_))
        ));
        let p = validate_pattern(&r, ValidationMode::Lenient).unwrap();
        assert_eq!(p.consistency().len(), 1);
    }

    #[test]
    fn same_condition_in_both_sets_is_not_a_duplicate() {
        let r = raw(1, &[(&[0], &[])], &[(&[0], &[])]);
        let p = validate_pattern(&r, ValidationMode::Strict).unwrap();
        assert!(!classify(&p).reasonable);
    }

    #[test]
    fn canonical_json_is_sorted() {
        let r = raw(3, &[(&[2], &[]), (&[0, 1], &[]), (&[0], &[2])], &[]);
        let p = validate_pattern(&r, ValidationMode::Strict).unwrap();
        assert_eq!(
            p.to_json(),
            r#"{"n":3,"consistency":[[[0],[2]],[[0,1],[]],[[2],[]]],"inconsistency":[]}"#
        );
        let back: Pattern = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn classify_sop_three() {
        let p = Pattern::new(
            3,
            [cond(&[1], &[0]), cond(&[2], &[1])],
            [cond(&[0], &[1]), cond(&[1], &[2])],
        )
        .unwrap();
        let f = classify(&p);
        assert!(f.reasonable);
        assert!(!f.positive);
        assert!(!f.complete);
    }

    #[test]
    fn classify_subset_violation() {
        let p = Pattern::positive(2, &[&[0, 1]], &[&[0]]).unwrap();
        assert!(!classify(&p).reasonable);
    }

    #[test]
    fn classify_all_complete_conditions_in_c() {
        let p = Pattern::new(
            2,
            [cond(&[0], &[1]), cond(&[1], &[0]), cond(&[0, 1], &[]), cond(&[], &[0, 1])],
            [],
        )
        .unwrap();
        let f = classify(&p);
        assert!(f.complete);
        assert!(f.fully_complete);
        assert!(f.reasonable);
    }

    #[test]
    fn classify_empty_pattern() {
        let f = classify(&Pattern::empty(3));
        assert!(f.reasonable && f.positive);
        assert!(!f.complete && !f.fully_complete);
        assert_eq!(f.k_bounded, None);
    }

    #[test]
    fn k_bounded_flags() {
        let p = Pattern::positive(3, &[&[0]], &[&[0, 1], &[1, 2]]).unwrap();
        let f = classify(&p);
        assert_eq!(f.k_bounded, Some(2));
        assert_eq!(f.k_bounded_at_most, Some(2));
        let q = Pattern::positive(3, &[&[0]], &[&[1], &[1, 2]]).unwrap();
        let g = classify(&q);
        assert_eq!(g.k_bounded, None);
        assert_eq!(g.k_bounded_at_most, Some(2));
    }

    #[test]
    fn complete_but_overlapping_is_not_fully_complete() {
        let p = Pattern::new(1, [cond(&[0], &[])], [cond(&[0], &[]), cond(&[], &[0])]).unwrap();
        let f = classify(&p);
        assert!(f.complete);
        assert!(!f.fully_complete);
    }

    fn lit(v: usize, negated: bool) -> Literal {
        Literal { variable: v, negated }
    }

    #[test]
    fn cnf_reduction_examples() {
        let f = CnfFormula::new(1, vec![vec![lit(0, false)], vec![lit(0, true)]]).unwrap();
        let p = pattern_from_cnf(&f);
        assert_eq!(p.n(), 2);
        assert_eq!(p.consistency().iter().collect::<Vec<_>>(), vec![&cond(&[1], &[])]);
        assert_eq!(
            p.inconsistency().iter().cloned().collect::<Vec<_>>(),
            vec![cond(&[], &[0]), cond(&[0], &[])]
        );
        assert!(classify(&p).reasonable);

        let g = CnfFormula::new(2, vec![vec![lit(0, false), lit(1, false)]]).unwrap();
        let q = pattern_from_cnf(&g);
        assert_eq!(q.n(), 3);
        assert_eq!(q.inconsistency().iter().cloned().collect::<Vec<_>>(), vec![cond(&[], &[0, 1])]);

        let e = pattern_from_cnf(&CnfFormula::new(0, Vec::<Vec<Literal>>::new()).unwrap());
        assert_eq!(e.n(), 1);
        assert!(e.inconsistency().is_empty());
        assert_eq!(e.consistency().iter().collect::<Vec<_>>(), vec![&cond(&[0], &[])]);
    }

    #[test]
    fn cnf_reduction_empty_clause_is_flagged_unreasonable() {
        let f = CnfFormula::new(1, vec![vec![]]).unwrap();
        let p = pattern_from_cnf(&f);
        assert!(p.inconsistency().contains(&cond(&[1], &[])));
        assert!(!classify(&p).reasonable);
    }

    #[test]
    fn doubling_examples() {
        let p = Pattern::new(2, [cond(&[0], &[1])], []).unwrap();
        let d = double_positive(&p).unwrap();
        assert_eq!(d.n(), 4);
        assert_eq!(d.consistency().iter().cloned().collect::<Vec<_>>(), vec![cond(&[0, 3], &[])]);
        assert_eq!(
            d.inconsistency().iter().cloned().collect::<Vec<_>>(),
            vec![cond(&[0, 2], &[]), cond(&[1, 3], &[])]
        );

        let p1 = Pattern::positive(1, &[&[0]], &[]).unwrap();
        let d1 = double_positive(&p1).unwrap();
        assert_eq!(d1.consistency().iter().cloned().collect::<Vec<_>>(), vec![cond(&[0], &[])]);
        assert_eq!(d1.inconsistency().iter().cloned().collect::<Vec<_>>(), vec![cond(&[0, 1], &[])]);

        let p2 = Pattern::new(2, [cond(&[0], &[1]), cond(&[1], &[0])], []).unwrap();
        let d2 = double_positive(&p2).unwrap();
        assert_eq!(
            d2.consistency().iter().cloned().collect::<Vec<_>>(),
            vec![cond(&[0, 3], &[]), cond(&[1, 2], &[])]
        );
    }

    #[test]
    fn doubling_rejects_inconsistency_conditions() {
        let p = Pattern::positive(2, &[&[0]], &[&[1]]).unwrap();
        assert_eq!(double_positive(&p).unwrap_err(), Error::NotConsistencyPattern);
    }

    #[test]
    fn subset_codes() {
        assert_eq!(encode_subset(&index_set([0, 2])), 5);
        assert_eq!(decode_subset(6), index_set([1, 2]));
        assert_eq!(decode_subset(0), IndexSet::new());
    }
}
