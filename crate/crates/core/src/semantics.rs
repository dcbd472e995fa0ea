//! Trace semantics: a formula with parameters is represented by the sets it
//! defines over a finite nonempty universe, one set per parameter.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::pattern::{decode_subset, index_set, Condition, IndexSet, Pattern};

/// `sets.len()` subsets of the universe `[0, universe)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSetFamily", into = "RawSetFamily")]
pub struct SetFamily {
    universe: usize,
    sets: Vec<IndexSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSetFamily {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<RawSetFamily> for SetFamily {
    type Error = Error;

    fn try_from(raw: RawSetFamily) -> Result<Self> {
        SetFamily::new(raw.universe, raw.sets.into_iter().map(index_set).collect())
    }
}

impl From<SetFamily> for RawSetFamily {
    fn from(f: SetFamily) -> Self {
        RawSetFamily {
            universe: f.universe,
            sets: f.sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }
}

impl SetFamily {
    pub fn new(universe: usize, sets: Vec<IndexSet>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::Malformed("the universe must be nonempty".into()));
        }
        for s in &sets {
            if let Some(&index) = s.last().filter(|&&p| p >= universe) {
                return Err(Error::IndexOutOfRange { index, n: universe });
            }
        }
        Ok(SetFamily { universe, sets })
    }

    /// Convenience constructor from slices.
    pub fn from_slices(universe: usize, sets: &[&[usize]]) -> Result<Self> {
        SetFamily::new(universe, sets.iter().map(|s| index_set(s.iter().copied())).collect())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The family restricted to the given set indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<SetFamily> {
        let sets = indices
            .iter()
            .map(|&i| {
                self.sets.get(i).cloned().ok_or(Error::IndexOutOfRange {
                    index: i,
                    n: self.sets.len(),
                })
            })
            .collect::<Result<_>>()?;
        SetFamily::new(self.universe, sets)
    }

    /// `{ i : point ∈ sets[i] }`.
    pub fn point_type(&self, point: usize) -> IndexSet {
        (0..self.sets.len())
            .filter(|&i| self.sets[i].contains(&point))
            .collect()
    }

    /// Intersection of the listed sets (the full universe for an empty list).
    pub fn intersection<'a, I: IntoIterator<Item = &'a usize>>(&self, indices: I) -> IndexSet {
        let mut it = indices.into_iter();
        let Some(&first) = it.next() else {
            return (0..self.universe).collect();
        };
        let mut acc = self.sets[first].clone();
        for &i in it {
            acc.retain(|p| self.sets[i].contains(p));
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serialization is infallible")
    }
}

/// The points realizing the partial type described by `c`:
/// `⋂_{i∈pos} sets[i] ∩ ⋂_{j∈neg} ([0,m) ∖ sets[j])`.
pub fn condition_trace(fam: &SetFamily, c: &Condition) -> Result<IndexSet> {
    if let Some(m) = c.max_index().filter(|&m| m >= fam.len()) {
        return Err(Error::IndexOutOfRange { index: m, n: fam.len() });
    }
    let mut trace = fam.intersection(c.pos());
    for j in c.neg() {
        trace.retain(|p| !fam.sets[*j].contains(p));
    }
    Ok(trace)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhibitionReport {
    pub exhibits: bool,
    /// Consistency conditions with an empty trace.
    pub failed_consistency: Vec<Condition>,
    /// Inconsistency conditions with a nonempty trace.
    pub failed_inconsistency: Vec<Condition>,
}

impl ExhibitionReport {
    pub fn failures(&self) -> Vec<Condition> {
        self.failed_consistency
            .iter()
            .chain(&self.failed_inconsistency)
            .cloned()
            .collect()
    }
}

pub fn check_exhibits(fam: &SetFamily, p: &Pattern) -> Result<ExhibitionReport> {
    if fam.len() != p.n() {
        return Err(Error::ArityMismatch {
            expected: p.n(),
            found: fam.len(),
        });
    }
    let mut report = ExhibitionReport::default();
    for c in p.consistency() {
        if condition_trace(fam, c)?.is_empty() {
            report.failed_consistency.push(c.clone());
        }
    }
    for z in p.inconsistency() {
        if !condition_trace(fam, z)?.is_empty() {
            report.failed_inconsistency.push(z.clone());
        }
    }
    report.exhibits = report.failed_consistency.is_empty() && report.failed_inconsistency.is_empty();
    Ok(report)
}

/// Shorthand for `check_exhibits(..)?.exhibits`.
pub fn exhibits(fam: &SetFamily, p: &Pattern) -> Result<bool> {
    Ok(check_exhibits(fam, p)?.exhibits)
}

/// The complete types realized by some point of the universe.
pub fn realized_types(fam: &SetFamily) -> BTreeSet<IndexSet> {
    (0..fam.universe).map(|p| fam.point_type(p)).collect()
}

/// The fully complete pattern whose consistency part lists the realized
/// complete types and whose inconsistency part lists all others.
///
/// With zero sets the only complete type is `(∅,∅)`, which is not a condition,
/// so the result is the empty 0-pattern.
pub fn fully_complete_extension(fam: &SetFamily) -> Pattern {
    let n = fam.len();
    if n == 0 {
        return Pattern::empty(0);
    }
    assert!(n < usize::BITS as usize, "too many sets for a complete split");
    let realized = realized_types(fam);
    let (mut consistency, mut inconsistency) = (Vec::new(), Vec::new());
    for code in 0..1usize << n {
        let x = decode_subset(code);
        let c = Condition::complete(&x, n).expect("n > 0");
        if realized.contains(&x) {
            consistency.push(c);
        } else {
            inconsistency.push(c);
        }
    }
    Pattern::new(n, consistency, inconsistency).expect("indices in range")
}

/// A family indexed by all subsets `X ⊆ [0,n)` (binary codes) with
/// `B_X = ⋃_{i∈X} B_{{i}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionClosedFamily {
    n: usize,
    base: SetFamily,
}

impl UnionClosedFamily {
    /// Validates a full `2^n`-set family.
    pub fn new(n: usize, base: SetFamily) -> Result<Self> {
        if n >= 20 || base.len() != 1 << n {
            return Err(Error::MalformedUnionMap(format!(
                "expected 2^{n} sets, found {}",
                base.len()
            )));
        }
        let fam = UnionClosedFamily { n, base };
        if let Some(code) = fam.union_violation() {
            return Err(Error::MalformedUnionMap(format!(
                "set {code} is not the union of its singletons"
            )));
        }
        Ok(fam)
    }

    /// Fills in every union from the singleton sets `B_{{i}}`.
    pub fn from_singletons(universe: usize, singletons: Vec<IndexSet>) -> Result<Self> {
        let n = singletons.len();
        if n >= 20 {
            return Err(Error::MalformedUnionMap(format!("{n} singletons is too many")));
        }
        let sets = (0..1usize << n)
            .map(|code| {
                decode_subset(code)
                    .iter()
                    .flat_map(|&i| singletons[i].iter().copied())
                    .collect()
            })
            .collect();
        UnionClosedFamily::new(n, SetFamily::new(universe, sets)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &SetFamily {
        &self.base
    }

    /// `B_{{i}}`.
    pub fn singleton(&self, i: usize) -> &IndexSet {
        &self.base.sets[1 << i]
    }

    pub fn set(&self, x: &IndexSet) -> &IndexSet {
        &self.base.sets[crate::pattern::encode_subset(x)]
    }

    fn union_violation(&self) -> Option<usize> {
        (0..self.base.len()).find(|&code| {
            let union: IndexSet = decode_subset(code)
                .iter()
                .flat_map(|&i| self.singleton(i).iter().copied())
                .collect();
            union != self.base.sets[code]
        })
    }
}

/// Cooper's `1^(n)` at a single finite size: unions are traced, and a nonempty
/// selection of singletons has empty intersection iff it has more than `n`
/// members.
pub fn check_one_n(ufam: &UnionClosedFamily, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::UnsupportedParams("1^(n) needs n ≥ 1".into()));
    }
    if ufam.base.len() != 1 << ufam.n {
        return Err(Error::MalformedUnionMap("wrong number of sets".into()));
    }
    if ufam.union_violation().is_some() {
        return Ok(false);
    }
    let ok = (1..1usize << ufam.n).all(|code| {
        let y = decode_subset(code);
        let singles: Vec<usize> = y.iter().map(|&i| 1 << i).collect();
        ufam.base.intersection(&singles).is_empty() == (y.len() > n)
    });
    Ok(ok)
}

/// Whether the family encodes the hypergraph: for every `k`-subset `S` of
/// vertices, `⋂_{v∈S} sets[v] ≠ ∅` exactly when `S` is an edge.
pub fn encodes_hypergraph(fam: &SetFamily, h: &Hypergraph) -> Result<bool> {
    if fam.len() != h.vertex_count() {
        return Err(Error::ArityMismatch {
            expected: h.vertex_count(),
            found: fam.len(),
        });
    }
    Ok(h.k_subsets().all(|s| {
        let meets = !fam.intersection(&s).is_empty();
        meets == h.has_edge(&index_set(s.iter().copied()))
    }))
}
