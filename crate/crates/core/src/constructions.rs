//! Finite, self-verifying versions of the witness constructions: every
//! function checks its output against the pattern or property it promises
//! before returning it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pattern::{classify, decode_subset, double_positive, encode_subset, index_set, IndexSet, Pattern};
use crate::semantics::{check_exhibits, check_one_n, SetFamily, UnionClosedFamily};

fn verified(fam: SetFamily, p: &Pattern, what: &str) -> Result<SetFamily> {
    let report = check_exhibits(&fam, p)?;
    if report.exhibits {
        Ok(fam)
    } else {
        Err(Error::VerificationFailure(format!(
            "{what}: failing conditions {}",
            report
                .failures()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        )))
    }
}

/// Exhibits a fully complete pattern in a finite atomic Boolean algebra.
///
/// The universe holds one atom `a_j` per consistency condition `(A_j, n∖A_j)`
/// (points `0..k`), one further atom (point `k`) and one non-atom (point
/// `k+1`). Parameter `i` is an element `b_i` of the algebra, given by the atoms
/// below it, plus a marker saying whether its two auxiliary parameters are
/// equal. With equal markers the trace is "atoms below `b_i`"; otherwise it is
/// the complement of that.
///
/// If `(∅, n) ∉ I` every `b_i = ⋃{a_j : i ∈ A_j}` with equal markers.
/// Otherwise the parameters `i ∈ A_0` switch to `b_i = ⋃{a_j : i ∉ A_j}` with
/// unequal markers, which gives the two extra points type `A_0`.
pub fn powerset_sm_witness(p: &Pattern) -> Result<SetFamily> {
    if !classify(p).fully_complete {
        return Err(Error::NotFullyComplete);
    }
    let n = p.n();
    let a: Vec<&IndexSet> = p.consistency().iter().map(|c| c.pos()).collect();
    let k = a.len();
    let extra_atom = k;
    // point k + 1 is the non-atom
    let universe = k + 2;
    let atoms: BTreeSet<usize> = (0..=extra_atom).collect();

    let empty_type_forbidden = p
        .inconsistency()
        .iter()
        .any(|z| z.pos().is_empty() && z.neg().len() == n);

    let sets = (0..n)
        .map(|i| {
            let flipped = empty_type_forbidden && a[0].contains(&i);
            let below: IndexSet = (0..k).filter(|&j| a[j].contains(&i) != flipped).collect();
            let psi = |x: usize| atoms.contains(&x) && below.contains(&x);
            (0..universe).filter(|&x| psi(x) != flipped).collect()
        })
        .collect();
    verified(SetFamily::new(universe, sets)?, p, "powerset witness")
}

fn require_reasonable_positive(p: &Pattern) -> Result<()> {
    let flags = classify(p);
    if flags.reasonable && flags.positive {
        Ok(())
    } else {
        Err(Error::NotReasonablePositive)
    }
}

/// Exhibits a reasonable positive pattern with pairwise disjoint nonzero
/// elements `a_j`, one per consistency condition `Y_j`, and
/// `b_i = ⋃_{i∈Y_j} a_j`. With `C = ∅` every `b_i = 0` over a one-point
/// universe.
pub fn atomless_pm_witness(p: &Pattern) -> Result<SetFamily> {
    require_reasonable_positive(p)?;
    let ys: Vec<&IndexSet> = p.consistency().iter().map(|c| c.pos()).collect();
    let sets = (0..p.n())
        .map(|i| (0..ys.len()).filter(|&j| ys[j].contains(&i)).collect())
        .collect();
    verified(SetFamily::new(ys.len().max(1), sets)?, p, "disjoint-atoms witness")
}

/// `b_X = X` over the universe `[0, max(k,1))`, indexed by binary codes: the
/// canonical family whose intersections mirror intersections of indices.
pub fn canonical_char_family(k: usize) -> Result<SetFamily> {
    if k >= 20 {
        return Err(Error::UnsupportedParams(format!("k = {k} is too large")));
    }
    SetFamily::new(k.max(1), (0..1usize << k).map(decode_subset).collect())
}

/// Largest `k` for which the characterization property is checked by brute
/// force before use.
pub const CHAR_PRECHECK_MAX_K: usize = 4;

/// Checks that for every nonempty `Z ⊆ P(k)`, `⋂_{Y∈Z} b_Y ≠ ∅` iff `⋂Z ≠ ∅`.
pub fn check_char_property(char_fam: &SetFamily, k: usize) -> Result<()> {
    if k >= 6 || char_fam.len() != 1 << k {
        return Err(Error::CharacterizationPropertyViolated(format!(
            "expected 2^{k} sets, found {}",
            char_fam.len()
        )));
    }
    let m = 1usize << k;
    let full = m - 1;
    for code in 1..1u64 << m {
        let z: Vec<usize> = (0..m).filter(|&y| code >> y & 1 == 1).collect();
        let meet = z.iter().fold(full, |acc, &y| acc & y);
        let traced = !char_fam.intersection(&z).is_empty();
        if traced != (meet != 0) {
            return Err(Error::CharacterizationPropertyViolated(format!(
                "selection {z:?}: family intersection {} but index intersection {}",
                if traced { "nonempty" } else { "empty" },
                if meet != 0 { "nonempty" } else { "empty" },
            )));
        }
    }
    Ok(())
}

/// Reduces a reasonable positive pattern to a family with the
/// characterization property: `b_i = char_fam[{j : i ∈ Y_j}]` where `Y_j` are
/// the consistency conditions in canonical order.
pub fn pm_char_reduction(char_fam: &SetFamily, p: &Pattern) -> Result<SetFamily> {
    require_reasonable_positive(p)?;
    let ys: Vec<&IndexSet> = p.consistency().iter().map(|c| c.pos()).collect();
    let k = ys.len();
    if k >= usize::BITS as usize || char_fam.len() != 1 << k {
        return Err(Error::CharacterizationPropertyViolated(format!(
            "expected 2^{k} sets for {k} consistency conditions, found {}",
            char_fam.len()
        )));
    }
    if k <= CHAR_PRECHECK_MAX_K {
        check_char_property(char_fam, k)?;
    }
    let sets = (0..p.n())
        .map(|i| {
            let x = index_set((0..k).filter(|&j| ys[j].contains(&i)));
            char_fam.sets()[encode_subset(&x)].clone()
        })
        .collect();
    verified(SetFamily::new(char_fam.universe(), sets)?, p, "characterization reduction")
}

/// Truncates a witness of `double_positive(p)` to its first `n` sets, which
/// exhibit the consistency pattern `p`.
pub fn cm_from_doubled_witness(w: &SetFamily, p: &Pattern) -> Result<SetFamily> {
    let doubled = double_positive(p)?;
    if w.len() != doubled.n() || !check_exhibits(w, &doubled)?.exhibits {
        return Err(Error::PreconditionFailure(
            "family does not exhibit the doubled pattern".into(),
        ));
    }
    let first: Vec<usize> = (0..p.n()).collect();
    verified(w.select(&first)?, p, "truncated doubled witness")
}

/// The independence family: universe = all `X ⊆ [0,n)` by binary code,
/// `sets[i] = {X : i ∈ X}`.
pub fn ip_family(n: usize, limits: &Limits) -> Result<SetFamily> {
    Limits::check("ip_family n", n, limits.max_n.min(24))?;
    let sets = (0..n)
        .map(|i| (0..1usize << n).filter(|code| code >> i & 1 == 1).collect())
        .collect();
    SetFamily::new(1 << n, sets)
}

/// Presentation of the points of a disjoint `1^(1)` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OneFlavor {
    /// Atoms `a_i` of an atomic Boolean algebra; `b_X` is the join of atoms.
    Atoms,
    /// The first `n` primes; `b_X` is the product `∏_{i∈X} p_i`.
    Skolem,
}

/// A union-closed family together with display labels for its points and
/// sets. Labels carry no semantics; the traces are what matter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledOneFamily {
    pub flavor: OneFlavor,
    pub point_labels: Vec<String>,
    pub set_labels: Vec<String>,
    pub family: UnionClosedFamily,
}

/// The first `n` primes.
pub fn first_primes(n: usize) -> Vec<u128> {
    let mut primes: Vec<u128> = Vec::with_capacity(n);
    let mut candidate = 2u128;
    while primes.len() < n {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| !candidate.is_multiple_of(p)) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Largest `n` accepted by [`disjoint_one1_family`] (`2^n` sets; the product
/// of the first 16 primes still fits in 128 bits).
pub const MAX_ONE1_N: usize = 16;

/// Pairwise disjoint singletons `B_{{i}} = {i}` over `[0,n)` with all unions.
pub fn disjoint_one1_family(n: usize, flavor: OneFlavor) -> Result<LabeledOneFamily> {
    if n == 0 || n > MAX_ONE1_N {
        return Err(Error::UnsupportedParams(format!(
            "1^(1) family needs 1 ≤ n ≤ {MAX_ONE1_N}, got {n}"
        )));
    }
    let family = UnionClosedFamily::from_singletons(n, (0..n).map(|i| index_set([i])).collect())?;
    let (point_labels, set_labels) = match flavor {
        OneFlavor::Atoms => {
            let points: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
            let sets = (0..1usize << n)
                .map(|code| {
                    let x = decode_subset(code);
                    if x.is_empty() {
                        "0".to_string()
                    } else {
                        x.iter().map(|&i| points[i].as_str()).collect::<Vec<_>>().join("+")
                    }
                })
                .collect();
            (points, sets)
        }
        OneFlavor::Skolem => {
            let primes = first_primes(n);
            let points = primes.iter().map(u128::to_string).collect();
            let sets = (0..1usize << n)
                .map(|code| {
                    decode_subset(code)
                        .iter()
                        .map(|&i| primes[i])
                        .product::<u128>()
                        .to_string()
                })
                .collect();
            (points, sets)
        }
    };
    if !check_one_n(&family, 1)? {
        return Err(Error::VerificationFailure("disjoint family fails 1^(1)".into()));
    }
    Ok(LabeledOneFamily {
        flavor,
        point_labels,
        set_labels,
        family,
    })
}

/// A two-sorted structure: points `S = [0, s_size)`, algebra elements
/// (subsets of `S`), and a membership relation `R ⊆ S × B` given as pairs
/// `(point, element index)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipStructure {
    pub s_size: usize,
    pub algebra_elements: Vec<IndexSet>,
    pub relation: BTreeSet<(usize, usize)>,
}

impl MembershipStructure {
    fn element_index(&self, e: &IndexSet) -> Option<usize> {
        self.algebra_elements.iter().position(|x| x == e)
    }

    /// `h(b) = {i : R(i, b)}`.
    pub fn column(&self, b: usize) -> IndexSet {
        (0..self.s_size)
            .filter(|&i| self.relation.contains(&(i, b)))
            .collect()
    }

    /// The algebra contains the full set and is closed under intersection and
    /// complement; every element is a subset of `S`.
    pub fn closure_violation(&self) -> Option<String> {
        let full: IndexSet = (0..self.s_size).collect();
        if self.element_index(&full).is_none() {
            return Some("full set missing".into());
        }
        for (bi, b) in self.algebra_elements.iter().enumerate() {
            if !b.is_subset(&full) {
                return Some(format!("element {bi} is not a subset of S"));
            }
            let complement: IndexSet = full.difference(b).copied().collect();
            if self.element_index(&complement).is_none() {
                return Some(format!("complement of element {bi} missing"));
            }
            for (ci, c) in self.algebra_elements.iter().enumerate().skip(bi + 1) {
                let meet: IndexSet = b.intersection(c).copied().collect();
                if self.element_index(&meet).is_none() {
                    return Some(format!("meet of elements {bi} and {ci} missing"));
                }
            }
        }
        None
    }

    /// `h` preserves meets, complements and the top element.
    pub fn homomorphism_violation(&self) -> Option<String> {
        let full: IndexSet = (0..self.s_size).collect();
        let top = self.element_index(&full)?;
        if self.column(top) != full {
            return Some("h(1) ≠ S".into());
        }
        let columns: Vec<IndexSet> = (0..self.algebra_elements.len()).map(|b| self.column(b)).collect();
        for (bi, b) in self.algebra_elements.iter().enumerate() {
            let complement: IndexSet = full.difference(b).copied().collect();
            let ci = self.element_index(&complement)?;
            let expected: IndexSet = full.difference(&columns[bi]).copied().collect();
            if columns[ci] != expected {
                return Some(format!("h does not preserve the complement of element {bi}"));
            }
            for (di, d) in self.algebra_elements.iter().enumerate().skip(bi + 1) {
                let meet: IndexSet = b.intersection(d).copied().collect();
                let mi = self.element_index(&meet)?;
                let expected: IndexSet = columns[bi].intersection(&columns[di]).copied().collect();
                if columns[mi] != expected {
                    return Some(format!("h does not preserve the meet of elements {bi} and {di}"));
                }
            }
        }
        None
    }

    /// Closure and homomorphism checks together.
    pub fn check(&self) -> Result<()> {
        if let Some(v) = self.closure_violation().or_else(|| self.homomorphism_violation()) {
            return Err(Error::VerificationFailure(v));
        }
        Ok(())
    }

    /// The union-closed family generated by the columns of the singleton
    /// elements `{i}`.
    pub fn singleton_columns(&self) -> Result<UnionClosedFamily> {
        let singletons = (0..self.s_size)
            .map(|i| {
                self.element_index(&index_set([i]))
                    .map(|b| self.column(b))
                    .ok_or_else(|| Error::VerificationFailure(format!("singleton {{{i}}} missing")))
            })
            .collect::<Result<Vec<_>>>()?;
        UnionClosedFamily::from_singletons(self.s_size, singletons)
    }
}

/// `S = [0,n)`, `B = P(n)` by binary code, `R` = membership; verified to be a
/// Boolean-algebra homomorphism whose singleton columns have `1^(1)`.
pub fn membership_structure(n: usize, limits: &Limits) -> Result<MembershipStructure> {
    if n == 0 {
        return Err(Error::UnsupportedParams("membership structure needs n ≥ 1".into()));
    }
    Limits::check("membership structure n", n, limits.max_n.min(12))?;
    let algebra_elements: Vec<IndexSet> = (0..1usize << n).map(decode_subset).collect();
    let relation = algebra_elements
        .iter()
        .enumerate()
        .flat_map(|(b, x)| x.iter().map(move |&i| (i, b)))
        .collect();
    let ms = MembershipStructure {
        s_size: n,
        algebra_elements,
        relation,
    };
    ms.check()?;
    if !check_one_n(&ms.singleton_columns()?, 1)? {
        return Err(Error::VerificationFailure("singleton columns fail 1^(1)".into()));
    }
    Ok(ms)
}
