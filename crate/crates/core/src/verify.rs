//! Batch verification of the constructions, producing JSON-friendly reports.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    atomless_pm_witness, canonical_char_family, cm_from_doubled_witness, disjoint_one1_family, ip_family,
    membership_structure, pm_char_reduction, powerset_sm_witness, OneFlavor,
};
use crate::decide::decide_exhibitable;
use crate::divline::{cooper, pm_char};
use crate::error::{Error, Result};
use crate::hypergraph::{blowup, blowup_pullback, find_triangle, realize, realize_check, triangle_free_double, Hypergraph};
use crate::limits::Limits;
use crate::pattern::{classify, decode_subset, double_positive, encode_subset, index_set, Condition, IndexSet, Pattern};
use crate::random::{
    random_amalgamation_problem, random_hypergraph, random_reasonable_consistency, random_reasonable_positive, rng,
    PatternRng,
};
use crate::semantics::{check_exhibits, check_one_n, UnionClosedFamily};
use crate::structure::{check_axioms, free_amalgam, StructureFlavor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    PowersetSm,
    AtomlessPm,
    PmChar,
    CmDoubling,
    IpFamily,
    One1,
    Membership,
    BlowupRoundtrip,
    TriangleFree,
    FreeAmalgam,
    CooperClaim,
}

impl Construction {
    pub const ALL: [Construction; 11] = [
        Construction::PowersetSm,
        Construction::AtomlessPm,
        Construction::PmChar,
        Construction::CmDoubling,
        Construction::IpFamily,
        Construction::One1,
        Construction::Membership,
        Construction::BlowupRoundtrip,
        Construction::TriangleFree,
        Construction::FreeAmalgam,
        Construction::CooperClaim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::PowersetSm => "powerset-sm",
            Construction::AtomlessPm => "atomless-pm",
            Construction::PmChar => "pm-char",
            Construction::CmDoubling => "cm-doubling",
            Construction::IpFamily => "ip-family",
            Construction::One1 => "one1",
            Construction::Membership => "membership",
            Construction::BlowupRoundtrip => "blowup-roundtrip",
            Construction::TriangleFree => "triangle-free",
            Construction::FreeAmalgam => "free-amalgam",
            Construction::CooperClaim => "cooper-claim",
        }
    }

    /// Default size parameter.
    pub fn default_n(self) -> usize {
        match self {
            Construction::PowersetSm | Construction::IpFamily | Construction::CooperClaim => 2,
            Construction::AtomlessPm | Construction::CmDoubling => 4,
            Construction::BlowupRoundtrip | Construction::TriangleFree => 4,
            _ => 3,
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnsupportedParams(format!("unknown construction `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyParams {
    pub n: usize,
    pub exhaustive: bool,
    pub count: usize,
    pub seed: u64,
}

impl VerifyParams {
    pub fn defaults(c: Construction) -> Self {
        VerifyParams {
            n: c.default_n(),
            exhaustive: false,
            count: 100,
            seed: 0,
        }
    }
}

/// One checked property over a batch of instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// Up to a few failing instances, for diagnosis.
    pub failures: Vec<String>,
}

const MAX_LISTED_FAILURES: usize = 5;

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: 0,
            total: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, outcome: std::result::Result<(), String>) {
        self.total += 1;
        match outcome {
            Ok(()) => self.passed += 1,
            Err(msg) if self.failures.len() < MAX_LISTED_FAILURES => self.failures.push(msg),
            Err(_) => {}
        }
    }

    fn record_bool(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.record(if ok { Ok(()) } else { Err(detail()) });
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub construction: Construction,
    pub params: VerifyParams,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub summary: String,
}

fn report(construction: Construction, params: VerifyParams, checks: Vec<Check>, summary: String) -> VerifyReport {
    VerifyReport {
        construction,
        params,
        passed: checks.iter().all(Check::ok),
        checks,
        summary,
    }
}

fn err_string<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// All fully complete `n`-patterns: every split of the `2^n` complete
/// conditions into `C ≠ ∅` and `I`.
pub fn all_fully_complete(n: usize) -> Result<Vec<Pattern>> {
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedParams(format!(
            "exhaustive fully complete enumeration needs 1 ≤ n ≤ 3, got {n}"
        )));
    }
    let complete: Vec<Condition> = (0..1usize << n)
        .map(|code| Condition::complete(&decode_subset(code), n))
        .collect::<Result<_>>()?;
    (1u64..1 << complete.len())
        .map(|mask| {
            let (c, i): (Vec<_>, Vec<_>) = complete
                .iter()
                .enumerate()
                .partition(|(j, _)| mask >> j & 1 == 1);
            Pattern::new(n, c.into_iter().map(|x| x.1.clone()), i.into_iter().map(|x| x.1.clone()))
        })
        .collect()
}

fn random_fully_complete(rng: &mut PatternRng, n: usize) -> Result<Pattern> {
    use rand::Rng;
    let mut c = Vec::new();
    let mut i = Vec::new();
    for code in 0..1usize << n {
        let cond = Condition::complete(&decode_subset(code), n)?;
        if rng.gen_bool(0.5) {
            c.push(cond);
        } else {
            i.push(cond);
        }
    }
    if c.is_empty() {
        c.push(i.pop().expect("n ≥ 1"));
    }
    Pattern::new(n, c, i)
}

/// All reasonable consistency `n`-patterns (`n ≤ 2`): every set of
/// disjoint-part conditions.
pub fn all_reasonable_consistency(n: usize) -> Result<Vec<Pattern>> {
    if n > 2 {
        return Err(Error::UnsupportedParams(format!(
            "exhaustive consistency enumeration needs n ≤ 2, got {n}"
        )));
    }
    let conditions: Vec<Condition> = (0..3usize.pow(n as u32))
        .filter_map(|mut code| {
            let (mut pos, mut neg) = (IndexSet::new(), IndexSet::new());
            for i in 0..n {
                match code % 3 {
                    1 => {
                        pos.insert(i);
                    }
                    2 => {
                        neg.insert(i);
                    }
                    _ => {}
                }
                code /= 3;
            }
            Condition::new(pos, neg).ok()
        })
        .collect();
    (0u64..1 << conditions.len())
        .map(|mask| {
            let c = conditions
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, c)| c.clone());
            Pattern::new(n, c, [])
        })
        .collect()
}

/// Every graph on `vertices` vertices.
pub fn all_graphs(vertices: usize) -> Vec<Hypergraph> {
    let pairs: Vec<(usize, usize)> = (0..vertices).tuple_combinations().collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &e)| e);
            Hypergraph::graph(vertices, edges).expect("valid edges")
        })
        .collect()
}

/// Runs the named construction over a batch of instances.
pub fn verify(construction: Construction, params: VerifyParams, limits: &Limits) -> Result<VerifyReport> {
    let mut r = rng(params.seed);
    let n = params.n;
    let count = params.count;
    match construction {
        Construction::PowersetSm => {
            let patterns = if params.exhaustive {
                all_fully_complete(n)?
            } else {
                (0..count).map(|_| random_fully_complete(&mut r, n.max(1))).collect::<Result<_>>()?
            };
            let mut decided = Check::new("decides exhibitable");
            let mut built = Check::new("powerset witness self-verifies");
            for p in &patterns {
                decided.record(err_string(decide_exhibitable(p)).and_then(|d| {
                    d.exhibitable.then_some(()).ok_or_else(|| p.to_json())
                }));
                built.record(err_string(powerset_sm_witness(p)).map(|_| ()));
            }
            let summary = format!(
                "{}/{} fully complete patterns exhibited",
                built.passed.min(decided.passed),
                patterns.len()
            );
            Ok(report(construction, params, vec![decided, built], summary))
        }
        Construction::AtomlessPm => {
            let mut built = Check::new("disjoint-atoms witness self-verifies");
            let mut decided = Check::new("decides exhibitable");
            for _ in 0..count {
                let p = random_reasonable_positive(&mut r, n.max(1));
                built.record(err_string(atomless_pm_witness(&p)).map(|_| ()));
                decided.record(
                    err_string(decide_exhibitable(&p))
                        .and_then(|d| d.exhibitable.then_some(()).ok_or_else(|| p.to_json())),
                );
            }
            let summary = format!("{}/{} reasonable positive patterns exhibited", built.passed, count);
            Ok(report(construction, params, vec![built, decided], summary))
        }
        Construction::PmChar => {
            let mut family = Check::new("canonical family exhibits the characterization pattern");
            if n > 3 {
                return Err(Error::UnsupportedParams(format!("pm-char needs n ≤ 3, got {n}")));
            }
            family.record(err_string(canonical_char_family(n).and_then(|f| check_exhibits(&f, &pm_char(n)?))).and_then(
                |rep| rep.exhibits.then_some(()).ok_or_else(|| "characterization pattern not exhibited".into()),
            ));
            let mut reduced = Check::new("reduction witness self-verifies");
            for _ in 0..count {
                let p = random_reasonable_positive(&mut r, n.max(1));
                let k = p.consistency().len();
                reduced.record(err_string(canonical_char_family(k).and_then(|f| pm_char_reduction(&f, &p))).map(|_| ()));
            }
            let summary = format!("{}/{} reductions verified", reduced.passed, count);
            Ok(report(construction, params, vec![family, reduced], summary))
        }
        Construction::CmDoubling => {
            let mut check = Check::new("truncated doubled witness exhibits the original");
            let mut positive = Check::new("doubled pattern is reasonable and positive");
            for _ in 0..count {
                let p = random_reasonable_consistency(&mut r, n.max(1));
                let outcome = double_positive(&p).and_then(|d| {
                    let flags = classify(&d);
                    positive.record_bool(flags.reasonable && flags.positive, || d.to_json());
                    let w = decide_exhibitable(&d)?
                        .witness
                        .ok_or_else(|| Error::VerificationFailure("doubled pattern not exhibitable".into()))?;
                    cm_from_doubled_witness(&w, &p)
                });
                check.record(err_string(outcome).map(|_| ()));
            }
            let summary = format!("{}/{} consistency patterns recovered", check.passed, count);
            Ok(report(construction, params, vec![positive, check], summary))
        }
        Construction::IpFamily => {
            let fam = ip_family(n, limits)?;
            let patterns = if params.exhaustive {
                all_reasonable_consistency(n)?
            } else {
                (0..count).map(|_| random_reasonable_consistency(&mut r, n)).collect()
            };
            let mut check = Check::new("independence family exhibits the pattern");
            for p in &patterns {
                check.record(
                    err_string(check_exhibits(&fam, p))
                        .and_then(|rep| rep.exhibits.then_some(()).ok_or_else(|| p.to_json())),
                );
            }
            let summary = format!("{}/{} reasonable consistency patterns exhibited", check.passed, patterns.len());
            Ok(report(construction, params, vec![check], summary))
        }
        Construction::One1 => {
            let mut checks = Vec::new();
            for flavor in [OneFlavor::Atoms, OneFlavor::Skolem] {
                let mut holds = Check::new(format!("{flavor:?} family has 1^(1)").to_lowercase());
                let mut sharp = Check::new(format!("{flavor:?} family lacks 1^(2)").to_lowercase());
                for size in 1..=n {
                    let fam = disjoint_one1_family(size, flavor);
                    holds.record(err_string(fam.clone().and_then(|f| check_one_n(&f.family, 1))).and_then(|ok| {
                        ok.then_some(()).ok_or_else(|| format!("n = {size}"))
                    }));
                    if size >= 2 {
                        sharp.record(err_string(fam.and_then(|f| check_one_n(&f.family, 2))).and_then(|ok| {
                            (!ok).then_some(()).ok_or_else(|| format!("n = {size}"))
                        }));
                    }
                }
                checks.push(holds);
                checks.push(sharp);
            }
            let summary = format!("1^(1) families checked for n = 1..={n}");
            Ok(report(construction, params, checks, summary))
        }
        Construction::Membership => {
            let mut hom = Check::new("membership map is a Boolean-algebra homomorphism with 1^(1) columns");
            let mut corrupt = Check::new("corrupted membership is rejected");
            for size in 1..=n {
                let ms = membership_structure(size, limits);
                hom.record(err_string(ms.clone()).map(|_| ()));
                if let Ok(mut bad) = ms {
                    bad.relation.insert((0, 0));
                    corrupt.record_bool(bad.check().is_err(), || format!("n = {size}"));
                }
            }
            let summary = format!("membership structures checked for n = 1..={n}");
            Ok(report(construction, params, vec![hom, corrupt], summary))
        }
        Construction::BlowupRoundtrip => {
            use rand::Rng;
            let mut check = Check::new("pullback of a blowup realization realizes the source");
            for _ in 0..count {
                let k = r.gen_range(2..=3);
                let vertices = r.gen_range(0..=n.min(5));
                let density = r.gen_range(0.2..0.9);
                let h = random_hypergraph(&mut r, k, vertices, density);
                let outcome = blowup(&h, limits).and_then(|b| {
                    let fam = realize(&b.hypergraph, limits)?;
                    let pulled = blowup_pullback(&fam, &b)?;
                    if realize_check(&pulled, &h)? {
                        Ok(())
                    } else {
                        Err(Error::VerificationFailure("pullback does not realize".into()))
                    }
                });
                check.record(outcome.map_err(|e| format!("{}: {e}", serde_json::to_string(&h).unwrap_or_default())));
            }
            let summary = format!("{}/{} blowups round-tripped", check.passed, count);
            Ok(report(construction, params, vec![check], summary))
        }
        Construction::TriangleFree => {
            let graphs: Vec<Hypergraph> = if params.exhaustive {
                (0..=n).flat_map(all_graphs).collect()
            } else {
                use rand::Rng;
                (0..count)
                    .map(|_| {
                        let v = r.gen_range(0..=n);
                        random_hypergraph(&mut r, 2, v, 0.5)
                    })
                    .collect()
            };
            let mut free = Check::new("doubled graph is triangle-free");
            let mut realizes = Check::new("common neighbourhoods realize the input");
            for g in &graphs {
                match triangle_free_double(g, limits) {
                    Ok(out) => {
                        free.record_bool(find_triangle(&out.graph).is_none(), || serde_json::to_string(g).unwrap_or_default());
                        realizes.record(err_string(realize_check(&out.family, g)).and_then(|ok| {
                            ok.then_some(()).ok_or_else(|| serde_json::to_string(g).unwrap_or_default())
                        }));
                    }
                    Err(e) => {
                        free.record(Err(e.to_string()));
                        realizes.record(Err(e.to_string()));
                    }
                }
            }
            let summary = format!("{}/{} graphs doubled without triangles", free.passed, graphs.len());
            Ok(report(construction, params, vec![free, realizes], summary))
        }
        Construction::FreeAmalgam => {
            let mut check = Check::new("free amalgam satisfies the axioms with commuting embeddings");
            for i in 0..count {
                let flavor = if i % 2 == 0 {
                    StructureFlavor::Positive
                } else {
                    StructureFlavor::Uniform(2 + i % 3)
                };
                let prob = random_amalgamation_problem(&mut r, flavor);
                check.record(
                    err_string(free_amalgam(&prob.a, &prob.b0, &prob.b1, &prob.e0, &prob.e1)).and_then(|m| {
                        let rep = check_axioms(&m.structure);
                        rep.ok.then_some(()).ok_or_else(|| rep.violations.join("; "))
                    }),
                );
            }
            let summary = format!("{}/{} amalgamation problems solved", check.passed, count);
            Ok(report(construction, params, vec![check], summary))
        }
        Construction::CooperClaim => {
            let mut check = Check::new("witness singletons are disjoint with traced unions and 1^(1)");
            for size in 1..=n {
                check.record(err_string(cooper_claim(size)));
            }
            let summary = format!("Cooper patterns checked for n = 1..={n}");
            Ok(report(construction, params, vec![check], summary))
        }
    }
}

/// Decides the Cooper pattern for `n` and checks that the synthesized witness,
/// read as a family indexed by subsets of `n`, has pairwise disjoint nonempty
/// singletons, traces every union, and has `1^(1)`.
pub fn cooper_claim(n: usize) -> Result<()> {
    let p = cooper(n)?;
    let w = decide_exhibitable(&p)?
        .witness
        .ok_or_else(|| Error::VerificationFailure("Cooper pattern not exhibitable".into()))?;
    let singles: Vec<&IndexSet> = (0..n).map(|i| &w.sets()[encode_subset(&index_set([i]))]).collect();
    if singles.iter().any(|s| s.is_empty()) {
        return Err(Error::VerificationFailure("empty singleton set".into()));
    }
    if singles.iter().tuple_combinations().any(|(a, b)| !a.is_disjoint(b)) {
        return Err(Error::VerificationFailure("singleton sets overlap".into()));
    }
    let ufam = UnionClosedFamily::new(n, w)
        .map_err(|e| Error::VerificationFailure(format!("unions are not traced: {e}")))?;
    if !check_one_n(&ufam, 1)? {
        return Err(Error::VerificationFailure("1^(1) fails".into()));
    }
    Ok(())
}
