//! Seeded random generators for the property suites and the `verify` reports.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cnf::{CnfFormula, Literal};
use crate::hypergraph::Hypergraph;
use crate::pattern::{index_set, Condition, IndexSet, Pattern};
use crate::structure::{Embedding, StructureFlavor, WitnessStructure};

/// The generator used throughout; fixed algorithm so seeds are reproducible.
pub type PatternRng = ChaCha8Rng;

pub fn rng(seed: u64) -> PatternRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random subset of `[0,n)`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> IndexSet {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

fn random_nonempty_subset<R: Rng>(rng: &mut R, n: usize) -> IndexSet {
    assert!(n > 0);
    loop {
        let s = random_subset(rng, n);
        if !s.is_empty() {
            return s;
        }
    }
}

/// Any condition over `[0,n)`; positive and negative parts may overlap.
pub fn random_condition<R: Rng>(rng: &mut R, n: usize) -> Condition {
    loop {
        let pos: IndexSet = (0..n).filter(|_| rng.gen_bool(0.35)).collect();
        let neg: IndexSet = (0..n).filter(|_| rng.gen_bool(0.35)).collect();
        if let Ok(c) = Condition::new(pos, neg) {
            return c;
        }
    }
}

/// A condition with disjoint parts.
pub fn random_disjoint_condition<R: Rng>(rng: &mut R, n: usize) -> Condition {
    loop {
        let (mut pos, mut neg) = (IndexSet::new(), IndexSet::new());
        for i in 0..n {
            match rng.gen_range(0..3) {
                0 => {
                    pos.insert(i);
                }
                1 => {
                    neg.insert(i);
                }
                _ => {}
            }
        }
        if let Ok(c) = Condition::new(pos, neg) {
            return c;
        }
    }
}

/// An arbitrary pattern with `1 ≤ n ≤ max_n` and at most `max_conditions`
/// conditions split randomly between `C` and `I`.
pub fn random_pattern<R: Rng>(rng: &mut R, max_n: usize, max_conditions: usize) -> Pattern {
    let n = rng.gen_range(1..=max_n);
    let count = rng.gen_range(0..=max_conditions);
    let (mut c, mut i) = (Vec::new(), Vec::new());
    for _ in 0..count {
        let cond = if rng.gen_bool(0.7) {
            random_disjoint_condition(rng, n)
        } else {
            random_condition(rng, n)
        };
        if rng.gen_bool(0.5) {
            c.push(cond);
        } else {
            i.push(cond);
        }
    }
    Pattern::new(n, c, i).expect("indices in range")
}

/// A reasonable positive `n`-pattern.
pub fn random_reasonable_positive<R: Rng>(rng: &mut R, n: usize) -> Pattern {
    let c_count = rng.gen_range(0..=n + 2);
    let ys: Vec<IndexSet> = (0..c_count).map(|_| random_nonempty_subset(rng, n)).collect();
    let i_count = rng.gen_range(0..=n + 2);
    let mut zs = Vec::new();
    for _ in 0..i_count * 4 {
        if zs.len() == i_count {
            break;
        }
        let z = random_nonempty_subset(rng, n);
        if ys.iter().all(|y| !z.is_subset(y)) {
            zs.push(z);
        }
    }
    let pos = |s: IndexSet| Condition::positive(s).expect("nonempty");
    Pattern::new(n, ys.into_iter().map(pos), zs.into_iter().map(pos)).expect("indices in range")
}

/// A reasonable consistency `n`-pattern (disjoint conditions, `I = ∅`).
pub fn random_reasonable_consistency<R: Rng>(rng: &mut R, n: usize) -> Pattern {
    let count = rng.gen_range(0..=n + 3);
    let c: Vec<Condition> = (0..count).map(|_| random_disjoint_condition(rng, n)).collect();
    Pattern::new(n, c, []).expect("indices in range")
}

/// A random 3-CNF over `variables` variables (clauses of three distinct
/// variables when possible).
pub fn random_3cnf<R: Rng>(rng: &mut R, variables: usize, clauses: usize) -> CnfFormula {
    let vars: Vec<usize> = (0..variables).collect();
    let width = variables.min(3);
    let cs: Vec<Vec<Literal>> = (0..clauses)
        .map(|_| {
            vars.choose_multiple(rng, width)
                .map(|&v| Literal {
                    variable: v,
                    negated: rng.gen_bool(0.5),
                })
                .collect()
        })
        .collect();
    CnfFormula::new(variables, cs).expect("variables in range")
}

/// A random `k`-uniform hypergraph on `vertices` vertices, each `k`-subset an
/// edge with probability `density`.
pub fn random_hypergraph<R: Rng>(rng: &mut R, k: usize, vertices: usize, density: f64) -> Hypergraph {
    let probe = Hypergraph::new(k, vertices, []).expect("k ≥ 2");
    let edges: Vec<IndexSet> = probe
        .k_subsets()
        .filter(|_| rng.gen_bool(density))
        .map(index_set)
        .collect();
    Hypergraph::new(k, vertices, edges).expect("valid edges")
}

/// A random structure satisfying the axioms.
pub fn random_witness_structure<R: Rng>(
    rng: &mut R,
    flavor: StructureFlavor,
    max_witnesses: usize,
    max_parameters: usize,
) -> WitnessStructure {
    let mut s = WitnessStructure::empty(flavor);
    s.witnesses = rng.gen_range(0..=max_witnesses);
    s.parameters = rng.gen_range(0..=max_parameters);
    add_random_relations(rng, &mut s, |_, _| true);
    s
}

/// Adds random hyperedges, then random `R` pairs that keep A4, restricted to
/// tuples accepted by `allowed(witness tuple, parameter tuple)`.
fn add_random_relations<R: Rng>(
    rng: &mut R,
    s: &mut WitnessStructure,
    allowed: impl Fn(&[usize], &[usize]) -> bool,
) {
    let arities: Vec<usize> = match s.flavor {
        StructureFlavor::Positive => (1..=3).collect(),
        StructureFlavor::Uniform(k) => vec![k],
    };
    for &arity in &arities {
        if arity > s.parameters {
            continue;
        }
        for _ in 0..s.parameters {
            let mut e: Vec<usize> = (0..s.parameters).collect::<Vec<_>>().choose_multiple(rng, arity).copied().collect();
            e.sort_unstable();
            if rng.gen_bool(0.4) && allowed(&[], &e) {
                s.add_hyperedge(e);
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..s.witnesses)
        .flat_map(|x| (0..s.parameters).map(move |y| (x, y)))
        .collect();
    pairs.shuffle(rng);
    for (x, y) in pairs {
        if rng.gen_bool(0.5) && allowed(&[x], &[y]) && s.can_relate(x, y) {
            s.r.insert((x, y));
        }
    }
}

/// An amalgamation problem `(A, B0, B1, e0, e1)` over valid structures: `A`
/// is a random induced substructure of a random `B0`, and `B1` is a random
/// extension of `A`, shuffled so that `e1` is not an inclusion.
pub struct AmalgamationProblem {
    pub a: WitnessStructure,
    pub b0: WitnessStructure,
    pub b1: WitnessStructure,
    pub e0: Embedding,
    pub e1: Embedding,
}

pub fn random_amalgamation_problem<R: Rng>(rng: &mut R, flavor: StructureFlavor) -> AmalgamationProblem {
    let b0 = random_witness_structure(rng, flavor, 4, 5);
    let pick = |rng: &mut R, n: usize| -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        v.shuffle(rng);
        v
    };
    let ws = pick(rng, b0.witnesses);
    let ps = pick(rng, b0.parameters);
    let (a, e0) = b0.induced(&ws, &ps);

    // extend A by fresh points; new relations always involve a fresh point
    let mut ext = a.clone();
    ext.witnesses += rng.gen_range(0..=2);
    ext.parameters += rng.gen_range(0..=2);
    let (aw, ap) = (a.witnesses, a.parameters);
    add_random_relations(rng, &mut ext, |xs, ys| {
        xs.iter().any(|&x| x >= aw) || ys.iter().any(|&y| y >= ap)
    });

    // shuffle B1's points
    let mut wperm: Vec<usize> = (0..ext.witnesses).collect();
    let mut pperm: Vec<usize> = (0..ext.parameters).collect();
    wperm.shuffle(rng);
    pperm.shuffle(rng);
    let mut b1 = WitnessStructure::empty(flavor);
    b1.witnesses = ext.witnesses;
    b1.parameters = ext.parameters;
    b1.r = ext.r.iter().map(|&(x, y)| (wperm[x], pperm[y])).collect::<BTreeSet<_>>();
    for e in ext.all_hyperedges() {
        b1.add_hyperedge(e.iter().map(|&y| pperm[y]).collect());
    }
    let e1 = Embedding {
        witness: wperm[..aw].to_vec(),
        parameter: pperm[..ap].to_vec(),
    };
    AmalgamationProblem { a, b0, b1, e0, e1 }
}
