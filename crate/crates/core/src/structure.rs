//! Two-sorted witness structures: a witness sort, a parameter sort, a
//! membership relation `R` between them and hyperedge relations `E_k` on the
//! parameter sort, subject to
//!
//! * A1 — the two sorts partition the universe;
//! * A2 — hyperedges are irreflexive and live on the parameter sort;
//! * A3 — `R` relates witnesses to parameters only;
//! * A4 — no witness is `R`-related to every vertex of a hyperedge.
//!
//! Sorts are separate index spaces (`[0, witnesses)` and `[0, parameters)`),
//! so A1 holds by construction and A3 reduces to range checks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{realize_check, Hypergraph};
use crate::limits::Limits;
use crate::pattern::{classify, IndexSet, Pattern};
use crate::semantics::{check_exhibits, SetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureFlavor {
    /// Hyperedges of every arity are allowed.
    Positive,
    /// Only hyperedges of the given arity are allowed.
    Uniform(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStructure {
    pub flavor: StructureFlavor,
    pub witnesses: usize,
    pub parameters: usize,
    /// Pairs `(witness, parameter)`.
    pub r: BTreeSet<(usize, usize)>,
    /// Arity ↦ hyperedges, each a strictly increasing list of parameters.
    pub hyperedges: BTreeMap<usize, BTreeSet<Vec<usize>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

impl WitnessStructure {
    pub fn empty(flavor: StructureFlavor) -> Self {
        WitnessStructure {
            flavor,
            witnesses: 0,
            parameters: 0,
            r: BTreeSet::new(),
            hyperedges: BTreeMap::new(),
        }
    }

    pub fn all_hyperedges(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.hyperedges.values().flatten()
    }

    pub fn has_hyperedge(&self, e: &[usize]) -> bool {
        self.hyperedges.get(&e.len()).is_some_and(|s| s.contains(e))
    }

    /// Inserts a hyperedge given in any order.
    pub fn add_hyperedge(&mut self, mut e: Vec<usize>) {
        e.sort_unstable();
        self.hyperedges.entry(e.len()).or_default().insert(e);
    }

    /// Whether adding `r(x, y)` keeps A4.
    pub fn can_relate(&self, x: usize, y: usize) -> bool {
        self.all_hyperedges().all(|e| {
            !e.contains(&y) || e.iter().any(|&v| v != y && !self.r.contains(&(x, v)))
        })
    }

    /// `sets[y] = {x : r(x, y)}` over the witness sort; an unrelated extra
    /// point is added when the witness sort is empty so the universe is
    /// nonempty.
    pub fn trace_family(&self) -> SetFamily {
        let mut sets = vec![IndexSet::new(); self.parameters];
        for &(x, y) in &self.r {
            if y < self.parameters {
                sets[y].insert(x);
            }
        }
        SetFamily::new(self.witnesses.max(1), sets).expect("relation checked against sorts")
    }

    /// The substructure induced on the given points (in the given order),
    /// together with its inclusion.
    pub fn induced(&self, witnesses: &[usize], parameters: &[usize]) -> (WitnessStructure, Embedding) {
        let wpos: BTreeMap<usize, usize> = witnesses.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let ppos: BTreeMap<usize, usize> = parameters.iter().enumerate().map(|(i, &y)| (y, i)).collect();
        let mut sub = WitnessStructure::empty(self.flavor);
        sub.witnesses = witnesses.len();
        sub.parameters = parameters.len();
        sub.r = self
            .r
            .iter()
            .filter_map(|(x, y)| Some((*wpos.get(x)?, *ppos.get(y)?)))
            .collect();
        for e in self.all_hyperedges() {
            if let Some(img) = e.iter().map(|v| ppos.get(v).copied()).collect::<Option<Vec<_>>>() {
                sub.add_hyperedge(img);
            }
        }
        let inclusion = Embedding {
            witness: witnesses.to_vec(),
            parameter: parameters.to_vec(),
        };
        (sub, inclusion)
    }
}

/// Checks A1–A4 (and the flavor's arity restriction) by full enumeration.
pub fn check_axioms(s: &WitnessStructure) -> AxiomReport {
    let mut violations = Vec::new();
    // A1 holds by construction: the sorts are separate index spaces.
    for (&arity, edges) in &s.hyperedges {
        if let StructureFlavor::Uniform(k) = s.flavor {
            if arity != k && !edges.is_empty() {
                violations.push(format!("A2: arity {arity} hyperedges in a {k}-uniform structure"));
            }
        }
        for e in edges {
            if e.len() != arity || arity == 0 {
                violations.push(format!("A2: hyperedge {e:?} filed under arity {arity}"));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                violations.push(format!("A2: hyperedge {e:?} repeats a vertex or is unsorted"));
            }
            if let Some(v) = e.iter().find(|&&v| v >= s.parameters) {
                violations.push(format!("A2: hyperedge {e:?} uses {v}, outside the parameter sort"));
            }
        }
    }
    for &(x, y) in &s.r {
        if x >= s.witnesses || y >= s.parameters {
            violations.push(format!("A3: R({x},{y}) is not witness × parameter"));
        }
    }
    for e in s.all_hyperedges() {
        for x in 0..s.witnesses {
            if e.iter().all(|&y| s.r.contains(&(x, y))) {
                violations.push(format!("A4: witness {x} is related to all of hyperedge {e:?}"));
            }
        }
    }
    AxiomReport {
        ok: violations.is_empty(),
        violations,
    }
}

fn require_axioms(s: &WitnessStructure, what: &str) -> Result<()> {
    let report = check_axioms(s);
    if report.ok {
        Ok(())
    } else {
        Err(Error::AxiomViolation(format!("{what}: {}", report.violations.join("; "))))
    }
}

/// Input for [`build_witness_structure`].
#[derive(Debug, Clone, Copy)]
pub enum StructureSource<'a> {
    Pattern(&'a Pattern),
    Hypergraph(&'a Hypergraph),
}

/// One witness per consistency condition (or per nonempty clique), one
/// parameter per index (or vertex), `R(a_i, b_j) ⟺ j ∈ Y_i`, and one hyperedge
/// per inconsistency condition (or non-edge). The result is checked against
/// the axioms and against the input.
pub fn build_witness_structure(source: StructureSource<'_>, limits: &Limits) -> Result<WitnessStructure> {
    let (s, verified) = match source {
        StructureSource::Pattern(p) => {
            let flags = classify(p);
            if !(flags.reasonable && flags.positive) {
                return Err(Error::NotReasonablePositive);
            }
            let ys: Vec<&IndexSet> = p.consistency().iter().map(|c| c.pos()).collect();
            let mut s = WitnessStructure::empty(StructureFlavor::Positive);
            s.witnesses = ys.len();
            s.parameters = p.n();
            s.r = ys
                .iter()
                .enumerate()
                .flat_map(|(i, y)| y.iter().map(move |&j| (i, j)))
                .collect();
            for z in p.inconsistency() {
                s.add_hyperedge(z.pos().iter().copied().collect());
            }
            require_axioms(&s, "pattern structure")?;
            let ok = check_exhibits(&s.trace_family(), p)?.exhibits;
            (s, ok)
        }
        StructureSource::Hypergraph(h) => {
            Limits::check("hypergraph vertices", h.vertex_count(), limits.clique_vertices)?;
            let cliques = h.cliques();
            let mut s = WitnessStructure::empty(StructureFlavor::Uniform(h.k()));
            s.witnesses = cliques.len();
            s.parameters = h.vertex_count();
            s.r = cliques
                .iter()
                .enumerate()
                .flat_map(|(i, c)| c.iter().map(move |&v| (i, v)))
                .collect();
            for z in h.non_edges() {
                s.add_hyperedge(z.into_iter().collect());
            }
            require_axioms(&s, "hypergraph structure")?;
            let ok = realize_check(&s.trace_family(), h)?;
            (s, ok)
        }
    };
    if !verified {
        return Err(Error::VerificationFailure(
            "R-traces of the structure do not match the input".into(),
        ));
    }
    Ok(s)
}

/// A map of each sort into the corresponding sort of another structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub witness: Vec<usize>,
    pub parameter: Vec<usize>,
}

impl Embedding {
    pub fn identity(s: &WitnessStructure) -> Self {
        Embedding {
            witness: (0..s.witnesses).collect(),
            parameter: (0..s.parameters).collect(),
        }
    }

    pub fn compose(&self, then: &Embedding) -> Embedding {
        Embedding {
            witness: self.witness.iter().map(|&x| then.witness[x]).collect(),
            parameter: self.parameter.iter().map(|&y| then.parameter[y]).collect(),
        }
    }
}

/// Checks that `e` is an injective, relation preserving and reflecting map
/// from `a` into `b`.
pub fn check_embedding(e: &Embedding, a: &WitnessStructure, b: &WitnessStructure) -> Result<()> {
    let fail = |m: String| Err(Error::NotAnEmbedding(m));
    if a.flavor != b.flavor {
        return fail("structures have different flavors".into());
    }
    if e.witness.len() != a.witnesses || e.parameter.len() != a.parameters {
        return fail("map does not cover the source sorts".into());
    }
    if e.witness.iter().any(|&x| x >= b.witnesses) || e.parameter.iter().any(|&y| y >= b.parameters) {
        return fail("map leaves the target sorts".into());
    }
    let distinct = |v: &[usize]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    if !distinct(&e.witness) || !distinct(&e.parameter) {
        return fail("map is not injective".into());
    }
    for x in 0..a.witnesses {
        for y in 0..a.parameters {
            if a.r.contains(&(x, y)) != b.r.contains(&(e.witness[x], e.parameter[y])) {
                return fail(format!("R({x},{y}) is not preserved and reflected"));
            }
        }
    }
    for edge in a.all_hyperedges() {
        let image: Vec<usize> = edge.iter().map(|&y| e.parameter[y]).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        if !b.has_hyperedge(&sorted) {
            return fail(format!("hyperedge {edge:?} is not preserved"));
        }
    }
    let preimage: BTreeMap<usize, usize> = e.parameter.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    for edge in b.all_hyperedges() {
        if let Some(mut pre) = edge.iter().map(|y| preimage.get(y).copied()).collect::<Option<Vec<_>>>() {
            pre.sort_unstable();
            if !a.has_hyperedge(&pre) {
                return fail(format!("hyperedge {edge:?} on the image is not reflected"));
            }
        }
    }
    Ok(())
}

/// The free amalgam and the embeddings of both sides into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Amalgam {
    pub structure: WitnessStructure,
    pub f0: Embedding,
    pub f1: Embedding,
}

/// Glues `b0` and `b1` along the images of `a`, adding no relation between
/// points of `b0` outside `a` and points of `b1` outside `a`. The points of
/// `b1` come first (so `f1` is the identity), followed by the new points of
/// `b0`.
pub fn free_amalgam(
    a: &WitnessStructure,
    b0: &WitnessStructure,
    b1: &WitnessStructure,
    e0: &Embedding,
    e1: &Embedding,
) -> Result<Amalgam> {
    for (s, name) in [(a, "A"), (b0, "B0"), (b1, "B1")] {
        require_axioms(s, name)?;
    }
    check_embedding(e0, a, b0)?;
    check_embedding(e1, a, b1)?;

    let glue = |source_map: &[usize], target_map: &[usize], size: usize, base: usize| {
        let shared: BTreeMap<usize, usize> = source_map.iter().copied().zip(target_map.iter().copied()).collect();
        let mut next = base;
        (0..size)
            .map(|v| {
                shared.get(&v).copied().unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect::<Vec<_>>()
    };
    let f0 = Embedding {
        witness: glue(&e0.witness, &e1.witness, b0.witnesses, b1.witnesses),
        parameter: glue(&e0.parameter, &e1.parameter, b0.parameters, b1.parameters),
    };
    let f1 = Embedding::identity(b1);

    let mut c = b1.clone();
    c.witnesses = b1.witnesses + b0.witnesses - a.witnesses;
    c.parameters = b1.parameters + b0.parameters - a.parameters;
    c.r.extend(b0.r.iter().map(|&(x, y)| (f0.witness[x], f0.parameter[y])));
    for e in b0.all_hyperedges() {
        c.add_hyperedge(e.iter().map(|&y| f0.parameter[y]).collect());
    }

    require_axioms(&c, "amalgam")?;
    let verify = |r: Result<()>| r.map_err(|e| Error::VerificationFailure(format!("amalgam: {e}")));
    verify(check_embedding(&f0, b0, &c))?;
    verify(check_embedding(&f1, b1, &c))?;
    if e0.compose(&f0) != e1.compose(&f1) {
        return Err(Error::VerificationFailure("amalgam embeddings do not commute".into()));
    }
    Ok(Amalgam { structure: c, f0, f1 })
}
