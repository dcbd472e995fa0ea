//! Uniform hypergraphs, their realization patterns, the blowup transform and
//! the triangle-free doubling.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pattern::{index_set, Condition, IndexSet, Pattern};
use crate::semantics::SetFamily;

/// A `k`-uniform hypergraph on vertices `[0, vertex_count)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    k: usize,
    vertex_count: usize,
    edges: BTreeSet<IndexSet>,
}

/// A simple graph is the `k = 2` case.
pub type Graph = Hypergraph;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHypergraph {
    k: usize,
    vertices: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.k, raw.vertices, raw.edges.into_iter().map(index_set))
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(h: Hypergraph) -> Self {
        RawHypergraph {
            k: h.k,
            vertices: h.vertex_count,
            edges: h.edges.into_iter().map(|e| e.into_iter().collect()).collect(),
        }
    }
}

impl Hypergraph {
    pub fn new<E: IntoIterator<Item = IndexSet>>(k: usize, vertex_count: usize, edges: E) -> Result<Self> {
        if k < 2 {
            return Err(Error::UnsupportedParams(format!("hypergraph arity {k} < 2")));
        }
        let mut set = BTreeSet::new();
        for e in edges {
            if e.len() != k {
                return Err(Error::ArityMismatch { expected: k, found: e.len() });
            }
            if let Some(&index) = e.last().filter(|&&v| v >= vertex_count) {
                return Err(Error::IndexOutOfRange { index, n: vertex_count });
            }
            set.insert(e);
        }
        Ok(Hypergraph {
            k,
            vertex_count,
            edges: set,
        })
    }

    pub fn graph<E: IntoIterator<Item = (usize, usize)>>(vertex_count: usize, edges: E) -> Result<Graph> {
        Hypergraph::new(2, vertex_count, edges.into_iter().map(|(a, b)| index_set([a, b])))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<IndexSet> {
        &self.edges
    }

    pub fn has_edge(&self, e: &IndexSet) -> bool {
        self.edges.contains(e)
    }

    /// All `k`-subsets of the vertex set, in lexicographic order.
    pub fn k_subsets(&self) -> impl Iterator<Item = Vec<usize>> {
        (0..self.vertex_count).combinations(self.k)
    }

    pub fn non_edges(&self) -> impl Iterator<Item = IndexSet> + '_ {
        self.k_subsets()
            .map(index_set)
            .filter(|s| !self.edges.contains(s))
    }

    /// Every `k`-subset of `set` is an edge (vacuous below size `k`).
    pub fn is_clique(&self, set: &IndexSet) -> bool {
        set.len() < self.k
            || set
                .iter()
                .copied()
                .combinations(self.k)
                .all(|s| self.edges.contains(&index_set(s)))
    }

    /// Whether `clique ∪ {v}` is still a clique, given that `clique` is one.
    fn extends(&self, clique: &[usize], v: usize) -> bool {
        clique.len() + 1 < self.k
            || clique.iter().copied().combinations(self.k - 1).all(|mut s| {
                s.push(v);
                self.edges.contains(&index_set(s))
            })
    }

    /// All nonempty cliques in canonical order.
    pub fn cliques(&self) -> Vec<IndexSet> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = (0..self.vertex_count).map(|v| vec![v]).collect();
        while let Some(clique) = stack.pop() {
            let last = *clique.last().expect("nonempty");
            for v in last + 1..self.vertex_count {
                if self.extends(&clique, v) {
                    let mut next = clique.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
            out.insert(index_set(clique));
        }
        out.into_iter().collect()
    }

    /// Maximal cliques in canonical order (Bron–Kerbosch without pivoting;
    /// clique-hood is hereditary, so the classic argument carries over).
    pub fn maximal_cliques(&self) -> Vec<IndexSet> {
        if self.vertex_count <= u64::BITS as usize {
            return MaskedCliques::new(self).maximal();
        }
        self.maximal_cliques_general()
    }

    fn maximal_cliques_general(&self) -> Vec<IndexSet> {
        let mut out = BTreeSet::new();
        let all: Vec<usize> = (0..self.vertex_count).collect();
        self.bron_kerbosch(&mut Vec::new(), all, Vec::new(), &mut out);
        out.into_iter().collect()
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<usize>,
        mut p: Vec<usize>,
        mut x: Vec<usize>,
        out: &mut BTreeSet<IndexSet>,
    ) {
        if p.is_empty() {
            if x.is_empty() && !r.is_empty() {
                out.insert(index_set(r.iter().copied()));
            }
            return;
        }
        // shortcut: if r ∪ p is a clique it is the only maximal clique below
        let union = index_set(r.iter().chain(&p).copied());
        if self.is_clique(&union) {
            let mut with_x = union.clone();
            let dominated = x.iter().any(|&v| {
                with_x.insert(v);
                let c = self.is_clique(&with_x);
                with_x.remove(&v);
                c
            });
            if !dominated {
                out.insert(union);
            }
            return;
        }
        while let Some(v) = p.first().copied() {
            p.remove(0);
            r.push(v);
            let p2 = p.iter().copied().filter(|&u| self.extends(r, u)).collect();
            let x2 = x.iter().copied().filter(|&u| self.extends(r, u)).collect();
            self.bron_kerbosch(r, p2, x2, out);
            r.pop();
            x.push(v);
        }
    }
}

/// Bron–Kerbosch over vertex bitmasks. `link[T]` is the set of vertices `u`
/// with `T ∪ {u}` an edge, for `(k-1)`-sets `T`; adding `v` to a clique `R`
/// keeps exactly the candidates `u` with `S ∪ {v} ∪ {u}` an edge for every
/// `(k-2)`-subset `S` of `R`.
struct MaskedCliques {
    k: usize,
    all: u64,
    link: HashMap<u64, u64>,
}

fn mask_bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..u64::BITS as usize).filter(move |&i| mask >> i & 1 == 1)
}

fn subset_masks(mask: u64, size: usize) -> impl Iterator<Item = u64> {
    mask_bits(mask)
        .combinations(size)
        .map(|c| c.into_iter().fold(0, |m, i| m | 1 << i))
}

impl MaskedCliques {
    fn new(h: &Hypergraph) -> Self {
        let mut link: HashMap<u64, u64> = HashMap::new();
        for e in &h.edges {
            let m = e.iter().fold(0u64, |m, &i| m | 1 << i);
            for &u in e {
                *link.entry(m & !(1 << u)).or_default() |= 1 << u;
            }
        }
        let n = h.vertex_count;
        MaskedCliques {
            k: h.k,
            all: if n == u64::BITS as usize { !0 } else { (1 << n) - 1 },
            link,
        }
    }

    fn link(&self, t: u64) -> u64 {
        self.link.get(&t).copied().unwrap_or(0)
    }

    /// Vertices `u` such that `r ∪ {v} ∪ {u}` is a clique, given that
    /// `r ∪ {u}` and `r ∪ {v}` are.
    fn compatible(&self, r: u64, v: u64) -> u64 {
        subset_masks(r, self.k - 2).fold(self.all, |acc, s| acc & self.link(s | v))
    }

    fn maximal(&self) -> Vec<IndexSet> {
        let mut out = BTreeSet::new();
        self.expand(0, self.all, 0, &mut out);
        out.into_iter().collect()
    }

    fn expand(&self, r: u64, mut p: u64, mut x: u64, out: &mut BTreeSet<IndexSet>) {
        if p == 0 {
            if x == 0 && r != 0 {
                out.insert(mask_bits(r).collect());
            }
            return;
        }
        // shortcut: if r ∪ p is a clique it is the only maximal clique below;
        // (k-1)-subsets inside r need no check since p and x extend r
        let union = r | p;
        let mut extenders = self.all;
        let mut is_clique = true;
        for t in subset_masks(union, self.k - 1).filter(|t| t & p != 0) {
            let l = self.link(t);
            if union & !t & !l != 0 {
                is_clique = false;
                break;
            }
            extenders &= l;
        }
        if is_clique {
            if x & extenders == 0 {
                out.insert(mask_bits(union).collect());
            }
            return;
        }
        while p != 0 {
            let v = p & p.wrapping_neg();
            p &= !v;
            let keep = self.compatible(r, v);
            self.expand(r | v, p & keep, x & keep, out);
            x |= v;
        }
    }
}

/// The positive pattern whose exhibitions are the realizations of `h`:
/// every nonempty clique is consistent, every non-edge is inconsistent.
pub fn pattern_from_hypergraph(h: &Hypergraph, limits: &Limits) -> Result<Pattern> {
    Limits::check("hypergraph vertices", h.vertex_count, limits.clique_vertices)?;
    let consistency = h.cliques().into_iter().map(|c| Condition::positive(c).expect("nonempty"));
    let inconsistency = h.non_edges().map(|z| Condition::positive(z).expect("k ≥ 2"));
    Pattern::new(h.vertex_count, consistency, inconsistency)
}

/// Like [`pattern_from_hypergraph`] but listing only maximal cliques. Traces
/// shrink as conditions grow, so a family exhibits this pattern exactly when
/// it realizes `h`; the pattern stays small for larger vertex counts.
pub fn realization_pattern(h: &Hypergraph, limits: &Limits) -> Result<Pattern> {
    Limits::check("hypergraph vertices", h.vertex_count, limits.realization_vertices)?;
    let consistency = h
        .maximal_cliques()
        .into_iter()
        .map(|c| Condition::positive(c).expect("nonempty"));
    let inconsistency = h.non_edges().map(|z| Condition::positive(z).expect("k ≥ 2"));
    Pattern::new(h.vertex_count, consistency, inconsistency)
}

/// Whether `fam` realizes `h`: non-edges have empty intersection and every
/// clique has nonempty intersection.
pub fn realize_check(fam: &SetFamily, h: &Hypergraph) -> Result<bool> {
    if fam.len() != h.vertex_count {
        return Err(Error::ArityMismatch {
            expected: h.vertex_count,
            found: fam.len(),
        });
    }
    let non_edges_ok = h.non_edges().all(|z| fam.intersection(&z).is_empty());
    Ok(non_edges_ok
        && h
            .maximal_cliques()
            .iter()
            .all(|c| !fam.intersection(c).is_empty()))
}

/// Synthesizes a family realizing `h` by deciding its realization pattern.
pub fn realize(h: &Hypergraph, limits: &Limits) -> Result<SetFamily> {
    let p = realization_pattern(h, limits)?;
    let decision = crate::decide::decide_exhibitable(&p)?;
    decision.witness.ok_or_else(|| {
        Error::VerificationFailure("realization pattern of a hypergraph was not exhibitable".into())
    })
}

/// A `(k+1)`-uniform blowup of a `k`-hypergraph together with its blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blowup {
    pub source: Hypergraph,
    pub hypergraph: Hypergraph,
    /// `groups[i]` is the block `K_i` replacing source vertex `i`.
    pub groups: Vec<Vec<usize>>,
}

/// Replaces every vertex `i` by a block `K_i` of `k+1` vertices. A
/// `(k+1)`-subset `W` is an edge exactly when the set of source vertices whose
/// blocks meet `W` is a clique of `h`. In particular each block is an edge,
/// the union of the blocks of an edge is a clique, and no other cross-block
/// edges appear; the union of the blocks of any clique is again a clique, and
/// for a non-edge `e` some `(k+1)`-subset of `⋃_{i∈e} K_i` is a non-edge.
pub fn blowup(h: &Hypergraph, limits: &Limits) -> Result<Blowup> {
    let width = h.k + 1;
    let total = h.vertex_count * width;
    Limits::check("blowup vertices", total, limits.realization_vertices)?;
    let groups: Vec<Vec<usize>> = (0..h.vertex_count)
        .map(|i| (i * width..(i + 1) * width).collect())
        .collect();
    let edges = (0..total).combinations(width).filter_map(|w| {
        let blocks = index_set(w.iter().map(|v| v / width));
        h.is_clique(&blocks).then(|| index_set(w))
    });
    let hypergraph = Hypergraph::new(width, total, edges.collect::<Vec<_>>())?;
    Ok(Blowup {
        source: h.clone(),
        hypergraph,
        groups,
    })
}

/// Pulls a realization of the blowup back to the source hypergraph by
/// intersecting over each block.
pub fn blowup_pullback(fam: &SetFamily, b: &Blowup) -> Result<SetFamily> {
    if !realize_check(fam, &b.hypergraph)? {
        return Err(Error::PreconditionFailure(
            "family does not realize the blowup".into(),
        ));
    }
    let sets = b.groups.iter().map(|g| fam.intersection(g)).collect();
    let pulled = SetFamily::new(fam.universe(), sets)?;
    if !realize_check(&pulled, &b.source)? {
        return Err(Error::VerificationFailure(
            "block intersections do not realize the source hypergraph".into(),
        ));
    }
    Ok(pulled)
}

/// Output of [`triangle_free_double`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleFreeDouble {
    /// The doubled graph on `2n` vertices (`b_v = 2v`, `c_v = 2v + 1`).
    pub doubled: Graph,
    /// The doubled graph plus one witness vertex per nonempty clique.
    pub graph: Graph,
    /// `(b_v, c_v)` for every source vertex `v`.
    pub pairs: Vec<(usize, usize)>,
    /// Each nonempty clique of the source with its witness vertex.
    pub clique_witnesses: Vec<(Vec<usize>, usize)>,
    /// `B_v = { x : x ~ b_v and x ~ c_v }` over all vertices of `graph`.
    pub family: SetFamily,
}

/// Doubles every vertex `v` into a non-adjacent pair `b_v, c_v`, joins `b_v`
/// to `c_w` whenever `{v, w}` is not an edge, and adds one witness vertex per
/// nonempty clique `S` adjacent to exactly `{b_v, c_v : v ∈ S}`.
pub fn triangle_free_double(g: &Graph, limits: &Limits) -> Result<TriangleFreeDouble> {
    if g.k != 2 {
        return Err(Error::ArityMismatch { expected: 2, found: g.k });
    }
    Limits::check("graph vertices", g.vertex_count, limits.clique_vertices)?;
    let n = g.vertex_count;
    let b = |v: usize| 2 * v;
    let c = |v: usize| 2 * v + 1;

    let mut edges = BTreeSet::new();
    for (v, w) in (0..n).tuple_combinations() {
        if !g.has_edge(&index_set([v, w])) {
            edges.insert(index_set([b(v), c(w)]));
            edges.insert(index_set([b(w), c(v)]));
        }
    }
    let doubled = Hypergraph::new(2, 2 * n, edges.clone())?;

    let cliques = g.cliques();
    let mut clique_witnesses = Vec::with_capacity(cliques.len());
    for (idx, clique) in cliques.iter().enumerate() {
        let x = 2 * n + idx;
        for &v in clique {
            edges.insert(index_set([x, b(v)]));
            edges.insert(index_set([x, c(v)]));
        }
        clique_witnesses.push((clique.iter().copied().collect(), x));
    }
    let total = 2 * n + cliques.len();
    let graph = Hypergraph::new(2, total, edges)?;

    if let Some(t) = find_triangle(&graph) {
        return Err(Error::TriangleFound(t));
    }

    let adjacency = adjacency(&graph);
    let sets = (0..n)
        .map(|v| {
            adjacency[b(v)]
                .intersection(&adjacency[c(v)])
                .copied()
                .collect()
        })
        .collect();
    let family = SetFamily::new(total.max(1), sets)?;
    if !realize_check(&family, g)? {
        return Err(Error::VerificationFailure(
            "common neighbourhoods do not realize the input graph".into(),
        ));
    }
    Ok(TriangleFreeDouble {
        doubled,
        graph,
        pairs: (0..n).map(|v| (b(v), c(v))).collect(),
        clique_witnesses,
        family,
    })
}

fn adjacency(g: &Graph) -> Vec<IndexSet> {
    let mut adj = vec![IndexSet::new(); g.vertex_count];
    for e in &g.edges {
        let (a, b) = e.iter().copied().collect_tuple().expect("binary edge");
        adj[a].insert(b);
        adj[b].insert(a);
    }
    adj
}

/// Full scan over vertex triples.
pub fn find_triangle(g: &Graph) -> Option<[usize; 3]> {
    let adj = adjacency(g);
    (0..g.vertex_count)
        .tuple_combinations()
        .find(|&(a, b, c)| adj[a].contains(&b) && adj[b].contains(&c) && adj[a].contains(&c))
        .map(|(a, b, c)| [a, b, c])
}
