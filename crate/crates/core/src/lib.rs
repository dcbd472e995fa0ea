//! Patterns of consistency and inconsistency.
//!
//! An `n`-pattern lists conditions over `n` parameter instances of a formula
//! that must be consistent (`C`) or inconsistent (`I`). This crate classifies
//! patterns, generates the families that characterize the classical dividing
//! lines, decides exhibitability through a small SAT solver, synthesizes
//! finite witnesses, and runs self-verifying versions of the witness
//! constructions for maximality properties and hypergraph realizations.
//!
//! ```
//! use patterna_core::{decide_exhibitable, Pattern};
//!
//! // Two consistent singletons that may not meet.
//! let p = Pattern::positive(2, &[&[0], &[1]], &[&[0, 1]]).unwrap();
//! let d = decide_exhibitable(&p).unwrap();
//! assert!(d.exhibitable);
//! assert_eq!(d.witness.unwrap().to_json(), r#"{"universe":2,"sets":[[0],[1]]}"#);
//! ```

pub mod cnf;
pub mod constructions;
pub mod decide;
pub mod divline;
pub mod error;
pub mod hypergraph;
pub mod limits;
pub mod pattern;
pub mod random;
pub mod sat;
pub mod semantics;
pub mod structure;
pub mod verify;

pub use cnf::{export_dimacs, import_dimacs, Clause, CnfFormula, Literal};
pub use constructions::{
    atomless_pm_witness, canonical_char_family, check_char_property, cm_from_doubled_witness,
    disjoint_one1_family, ip_family, membership_structure, pm_char_reduction, powerset_sm_witness,
    LabeledOneFamily, MembershipStructure, OneFlavor,
};
pub use decide::{
    brute_force_exhibitable, condition_cnf, decide_exhibitable, family_from_types, is_exhibitable,
    sentinel_cnf, Decision, Failing,
};
pub use divline::{gen_divline, DivlineKind, DivlineParams};
pub use error::{Error, Result};
pub use hypergraph::{
    blowup, blowup_pullback, find_triangle, pattern_from_hypergraph, realization_pattern, realize,
    realize_check, triangle_free_double, Blowup, Graph, Hypergraph, TriangleFreeDouble,
};
pub use limits::{Limits, MAX_N_ENV};
pub use pattern::{
    classify, decode_subset, double_positive, encode_subset, index_set, pattern_from_cnf,
    validate_pattern, Condition, IndexSet, Pattern, PatternFlags, RawPattern, ValidationMode,
};
pub use sat::{brute_force_sat, sat_solve};
pub use semantics::{
    check_exhibits, check_one_n, condition_trace, encodes_hypergraph, exhibits,
    fully_complete_extension, realized_types, ExhibitionReport, SetFamily, UnionClosedFamily,
};
pub use structure::{
    build_witness_structure, check_axioms, check_embedding, free_amalgam, Amalgam, AxiomReport,
    Embedding, StructureFlavor, StructureSource, WitnessStructure,
};
pub use verify::{verify, Check, Construction, VerifyParams, VerifyReport};
