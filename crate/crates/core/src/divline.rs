//! Generators for the named pattern families that characterize dividing lines.
//!
//! Trees have nodes = strings over `[0,b)` of length `0..=d`, numbered in
//! level order (root = 0). Arrays have `d` rows of `b` columns, numbered
//! row-major. Subset-indexed families number `X ⊆ [0,n)` by `Σ_{i∈X} 2^i`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{decode_subset, index_set, Condition, IndexSet, Pattern};

/// Largest `n` accepted by the subset-of-subsets families (Cooper, PMchar):
/// they have `2^(2^n)` candidate conditions.
pub const MAX_SUBSET_FAMILY_N: usize = 4;

/// Largest index count accepted by the families that enumerate all complete
/// conditions or all root-to-leaf paths.
pub const MAX_FAMILY_INDICES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivlineKind {
    Op,
    Ip,
    Sop,
    Ktp,
    Tp1,
    Ktp2,
    Cm,
    Cooper,
    Pmchar,
}

impl DivlineKind {
    pub const ALL: [DivlineKind; 9] = [
        DivlineKind::Op,
        DivlineKind::Ip,
        DivlineKind::Sop,
        DivlineKind::Ktp,
        DivlineKind::Tp1,
        DivlineKind::Ktp2,
        DivlineKind::Cm,
        DivlineKind::Cooper,
        DivlineKind::Pmchar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DivlineKind::Op => "op",
            DivlineKind::Ip => "ip",
            DivlineKind::Sop => "sop",
            DivlineKind::Ktp => "ktp",
            DivlineKind::Tp1 => "tp1",
            DivlineKind::Ktp2 => "ktp2",
            DivlineKind::Cm => "cm",
            DivlineKind::Cooper => "cooper",
            DivlineKind::Pmchar => "pmchar",
        }
    }
}

impl fmt::Display for DivlineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DivlineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        DivlineKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::UnsupportedParams(format!("unknown pattern family `{s}`")))
    }
}

/// Size parameters. `n` is used by the linear and subset families; `(b, d, k)`
/// by the tree and array families.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivlineParams {
    pub n: Option<usize>,
    pub b: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
}

impl DivlineParams {
    pub fn n(n: usize) -> Self {
        DivlineParams {
            n: Some(n),
            ..Default::default()
        }
    }

    pub fn tree(b: usize, d: usize, k: Option<usize>) -> Self {
        DivlineParams {
            b: Some(b),
            d: Some(d),
            k,
            ..Default::default()
        }
    }

    fn get(field: Option<usize>, name: &str, kind: DivlineKind) -> Result<usize> {
        field.ok_or_else(|| Error::UnsupportedParams(format!("{kind} needs parameter {name}")))
    }
}

pub fn gen_divline(kind: DivlineKind, params: &DivlineParams) -> Result<Pattern> {
    let n = || DivlineParams::get(params.n, "n", kind);
    let b = || DivlineParams::get(params.b, "b", kind);
    let d = || DivlineParams::get(params.d, "d", kind);
    let k = || DivlineParams::get(params.k, "k", kind);
    match kind {
        DivlineKind::Op => op(n()?),
        DivlineKind::Ip | DivlineKind::Cm => ip(n()?),
        DivlineKind::Sop => sop(n()?),
        DivlineKind::Ktp => ktp(b()?, d()?, k()?),
        DivlineKind::Tp1 => tp1(b()?, d()?),
        DivlineKind::Ktp2 => ktp2(b()?, d()?, k()?),
        DivlineKind::Cooper => cooper(n()?),
        DivlineKind::Pmchar => pm_char(n()?),
    }
}

fn range(lo: usize, hi: usize) -> IndexSet {
    (lo..hi).collect()
}

/// `C = {([i,n), [0,i)) : i < n}`, `I = ∅`.
pub fn op(n: usize) -> Result<Pattern> {
    let c = (0..n).map(|i| Condition::new(range(i, n), range(0, i)));
    Pattern::new(n, c.collect::<Result<Vec<_>>>()?, [])
}

/// Every complete condition `(X, n∖X)` is consistent, `I = ∅`.
pub fn ip(n: usize) -> Result<Pattern> {
    check_size(n, MAX_FAMILY_INDICES)?;
    let c = (0..1usize << n)
        .filter(|_| n > 0)
        .map(|code| Condition::complete(&decode_subset(code), n));
    Pattern::new(n, c.collect::<Result<Vec<_>>>()?, [])
}

/// `C = {({i+1},{i})}`, `I = {({i},{i+1})}` for `i < n−1`.
pub fn sop(n: usize) -> Result<Pattern> {
    let steps = 0..n.saturating_sub(1);
    let c = steps
        .clone()
        .map(|i| Condition::new(index_set([i + 1]), index_set([i])));
    let i = steps.map(|i| Condition::new(index_set([i]), index_set([i + 1])));
    Pattern::new(n, c.collect::<Result<Vec<_>>>()?, i.collect::<Result<Vec<_>>>()?)
}

/// A complete `b`-ary tree of depth `d` in level order.
struct Tree {
    b: usize,
    d: usize,
}

impl Tree {
    fn new(b: usize, d: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::UnsupportedParams("branching b must be ≥ 1".into()));
        }
        let t = Tree { b, d };
        let size = (0..=d).try_fold(0usize, |acc, l| acc.checked_add(b.checked_pow(l as u32)?));
        match size {
            Some(s) if s <= MAX_FAMILY_INDICES * 4 && t.leaf_count() <= 1 << MAX_FAMILY_INDICES => Ok(t),
            _ => Err(Error::UnsupportedParams(format!("tree b={b}, d={d} is too large"))),
        }
    }

    /// Index of the first node at `level`.
    fn level_start(&self, level: usize) -> usize {
        (0..level).map(|l| self.b.pow(l as u32)).sum()
    }

    fn node_count(&self) -> usize {
        self.level_start(self.d + 1)
    }

    fn leaf_count(&self) -> usize {
        self.b.pow(self.d as u32)
    }

    /// Node at `level` whose position within the level is `offset`.
    fn node(&self, level: usize, offset: usize) -> usize {
        self.level_start(level) + offset
    }

    /// Root-to-leaf paths, leaves left to right.
    fn paths(&self) -> impl Iterator<Item = IndexSet> + '_ {
        (0..self.leaf_count()).map(move |leaf| {
            (0..=self.d)
                .map(|level| self.node(level, leaf / self.b.pow((self.d - level) as u32)))
                .collect()
        })
    }

    /// Children of each internal node, as lists of indices.
    fn sibling_groups(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.d).flat_map(move |level| {
            (0..self.b.pow(level as u32)).map(move |offset| {
                (0..self.b)
                    .map(|c| self.node(level + 1, offset * self.b + c))
                    .collect()
            })
        })
    }

    /// `(level, offset)` of every node in index order.
    fn positions(&self) -> Vec<(usize, usize)> {
        (0..=self.d)
            .flat_map(|level| (0..self.b.pow(level as u32)).map(move |o| (level, o)))
            .collect()
    }

    fn is_ancestor_or_self(&self, (la, oa): (usize, usize), (lb, ob): (usize, usize)) -> bool {
        la <= lb && ob / self.b.pow((lb - la) as u32) == oa
    }
}

fn positive_all<I: IntoIterator<Item = IndexSet>>(sets: I) -> Vec<Condition> {
    sets.into_iter()
        .map(|s| Condition::positive(s).expect("nonempty"))
        .collect()
}

fn check_k(k: usize, b: usize) -> Result<()> {
    if k < 2 || k > b {
        return Err(Error::UnsupportedParams(format!(
            "k = {k} needs 2 ≤ k ≤ b = {b}"
        )));
    }
    Ok(())
}

/// Paths consistent; every `k` children of a common node inconsistent.
pub fn ktp(b: usize, d: usize, k: usize) -> Result<Pattern> {
    check_k(k, b)?;
    let t = Tree::new(b, d)?;
    let inconsistency = t
        .sibling_groups()
        .flat_map(|g| g.into_iter().combinations(k).map(index_set));
    Pattern::new(t.node_count(), positive_all(t.paths()), positive_all(inconsistency))
}

/// Paths consistent; every pair of incomparable nodes inconsistent.
pub fn tp1(b: usize, d: usize) -> Result<Pattern> {
    let t = Tree::new(b, d)?;
    let pos = t.positions();
    let inconsistency = (0..pos.len()).tuple_combinations().filter_map(|(u, v)| {
        let comparable = t.is_ancestor_or_self(pos[u], pos[v]) || t.is_ancestor_or_self(pos[v], pos[u]);
        (!comparable).then(|| index_set([u, v]))
    });
    Pattern::new(t.node_count(), positive_all(t.paths()), positive_all(inconsistency))
}

/// A `d × b` array: every choice of one entry per row is consistent, every `k`
/// entries of one row are inconsistent.
pub fn ktp2(b: usize, d: usize, k: usize) -> Result<Pattern> {
    check_k(k, b)?;
    let paths = b.checked_pow(d as u32).filter(|&p| p <= 1 << MAX_FAMILY_INDICES);
    if paths.is_none() || b * d > MAX_FAMILY_INDICES * 4 {
        return Err(Error::UnsupportedParams(format!("array b={b}, d={d} is too large")));
    }
    let consistency = (0..d)
        .map(|_| 0..b)
        .multi_cartesian_product()
        .filter(|_| d > 0)
        .map(|f| f.into_iter().enumerate().map(|(row, col)| row * b + col).collect());
    let inconsistency = (0..d).flat_map(|row| (row * b..(row + 1) * b).combinations(k).map(index_set));
    Pattern::new(b * d, positive_all(consistency), positive_all(inconsistency))
}

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::UnsupportedParams(format!("n = {n} exceeds {limit}")));
    }
    Ok(())
}

/// The indices (binary codes) of all `X ⊆ [0,n)` with `i ∈ X`.
fn up_set(i: usize, n: usize) -> IndexSet {
    (0..1usize << n).filter(|code| code >> i & 1 == 1).collect()
}

/// The fully complete `2^n`-pattern whose consistent types are exactly the
/// up-sets `↑{i} = {X ⊆ n : i ∈ X}`; every other complete type is inconsistent.
pub fn cooper(n: usize) -> Result<Pattern> {
    check_size(n, MAX_SUBSET_FAMILY_N)?;
    let m = 1usize << n;
    let ups: Vec<IndexSet> = (0..n).map(|i| up_set(i, n)).collect();
    let mut consistency = Vec::new();
    let mut inconsistency = Vec::new();
    for code in 0..1usize << m {
        let x = decode_subset(code);
        let c = Condition::complete(&x, m)?;
        if ups.contains(&x) {
            consistency.push(c);
        } else {
            inconsistency.push(c);
        }
    }
    Pattern::new(m, consistency, inconsistency)
}

/// Over indices `X ⊆ [0,n)`: a nonempty `Z ⊆ P(n)` is consistent iff `⋂Z ≠ ∅`.
pub fn pm_char(n: usize) -> Result<Pattern> {
    check_size(n, MAX_SUBSET_FAMILY_N)?;
    let m = 1usize << n;
    let mut consistency = Vec::new();
    let mut inconsistency = Vec::new();
    for code in 1..1usize << m {
        let z = decode_subset(code);
        let meet = z.iter().fold(m - 1, |acc, &x| acc & x);
        let c = Condition::positive(z)?;
        if meet != 0 {
            consistency.push(c);
        } else {
            inconsistency.push(c);
        }
    }
    Pattern::new(m, consistency, inconsistency)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::classify;

    fn cond(pos: &[usize], neg: &[usize]) -> Condition {
        Condition::new(index_set(pos.iter().copied()), index_set(neg.iter().copied())).unwrap()
    }

    #[test]
    fn op_two() {
        let p = gen_divline(DivlineKind::Op, &DivlineParams::n(2)).unwrap();
        assert_eq!(p, Pattern::new(2, [cond(&[0, 1], &[]), cond(&[1], &[0])], []).unwrap());
    }

    #[test]
    fn sop_three() {
        let p = sop(3).unwrap();
        let expected = Pattern::new(
            3,
            [cond(&[1], &[0]), cond(&[2], &[1])],
            [cond(&[0], &[1]), cond(&[1], &[2])],
        )
        .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn ktp_binary_depth_two() {
        let p = ktp(2, 2, 2).unwrap();
        let expected = Pattern::positive(
            7,
            &[&[0, 1, 3], &[0, 1, 4], &[0, 2, 5], &[0, 2, 6]],
            &[&[1, 2], &[3, 4], &[5, 6]],
        )
        .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn ktp_rejects_k_above_b() {
        assert!(matches!(ktp(2, 2, 3), Err(Error::UnsupportedParams(_))));
        assert!(matches!(ktp2(2, 2, 3), Err(Error::UnsupportedParams(_))));
    }

    #[test]
    fn tp1_binary_depth_one() {
        let p = tp1(2, 1).unwrap();
        assert_eq!(p, Pattern::positive(3, &[&[0, 1], &[0, 2]], &[&[1, 2]]).unwrap());
        let deeper = tp1(2, 2).unwrap();
        // node 1 is incomparable with 2, 5, 6
        assert!(deeper.inconsistency().contains(&cond(&[1, 5], &[])));
        assert!(!deeper.inconsistency().contains(&cond(&[1, 3], &[])));
    }

    #[test]
    fn ktp2_array() {
        let p = ktp2(2, 2, 2).unwrap();
        let expected =
            Pattern::positive(4, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]], &[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn cooper_one() {
        let p = cooper(1).unwrap();
        let expected = Pattern::new(
            2,
            [cond(&[1], &[0])],
            [cond(&[], &[0, 1]), cond(&[0], &[1]), cond(&[0, 1], &[])],
        )
        .unwrap();
        assert_eq!(p, expected);
        assert!(classify(&p).fully_complete);
    }

    #[test]
    fn pm_char_one() {
        let p = pm_char(1).unwrap();
        // indices: 0 = ∅, 1 = {0}
        assert_eq!(p, Pattern::positive(2, &[&[1]], &[&[0], &[0, 1]]).unwrap());
    }

    #[test]
    fn every_family_is_reasonable() {
        let mut patterns = Vec::new();
        for n in 0..=4 {
            patterns.extend([op(n), ip(n), sop(n)]);
        }
        for n in 0..=3 {
            patterns.extend([cooper(n), pm_char(n)]);
        }
        for b in 1..=3 {
            for d in 0..=2 {
                patterns.push(tp1(b, d));
                for k in 2..=b {
                    patterns.extend([ktp(b, d, k), ktp2(b, d, k)]);
                }
            }
        }
        for p in patterns {
            let p = p.unwrap();
            assert!(classify(&p).reasonable, "{}", p.to_json());
        }
    }

    #[test]
    fn family_shapes() {
        for n in 0..=4 {
            assert!(ip(n).unwrap().inconsistency().is_empty());
            assert_eq!(ip(n).unwrap(), gen_divline(DivlineKind::Cm, &DivlineParams::n(n)).unwrap());
        }
        for p in [ktp(3, 2, 2), tp1(2, 2), ktp2(3, 2, 3), pm_char(2)] {
            assert!(classify(&p.unwrap()).positive);
        }
        for n in 1..=3 {
            assert!(classify(&cooper(n).unwrap()).fully_complete);
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("kTP2".parse::<DivlineKind>().unwrap(), DivlineKind::Ktp2);
        assert!("nope".parse::<DivlineKind>().is_err());
        assert!(gen_divline(DivlineKind::Ktp, &DivlineParams::n(2)).is_err());
    }
}
