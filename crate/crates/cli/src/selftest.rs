//! Seeded property checks run by the `self-test` subcommand.

use std::collections::BTreeMap;

use contact_loci_core::classify;
use contact_loci_core::fiber;
use contact_loci_core::numerics::{compute_multiplicities, DivisorData};
use contact_loci_core::refine::{self, Origin};
use contact_loci_core::toric;
use contact_loci_core::{DivisorId, Incidence, PlumbingGraph};
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::random::{random_admissible_graph, random_graph, GraphParams};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Check = fn(&mut ChaCha8Rng, usize) -> CheckOutcome;

const CHECKS: &[(&str, Check)] = &[
    ("multiplicities", check_multiplicities),
    ("chain-gcd", check_chain_gcd),
    ("euler", check_euler),
    ("blowup-coherence", check_blowups),
    ("refinement-contract", check_refinement),
    ("refinement-invariance", check_invariance),
    ("continued-fractions", check_continued_fractions),
    ("monotonicity", check_monotonicity),
    ("invariant-generators", check_generators),
];

/// Runs every check with `cases` random instances each. Each check gets its
/// own stream derived from `seed`, so adding a check leaves the others alone.
pub fn run_all(seed: u64, cases: usize) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut outcome = check(&mut rng, cases);
            outcome.name = name;
            outcome
        })
        .collect()
}

fn outcome(cases: usize, failures: Vec<String>) -> CheckOutcome {
    CheckOutcome { name: "", cases, failures }
}

fn params() -> GraphParams {
    GraphParams { max_vertices: 8, max_multiplicity: 8, max_genus: 0, extra_edges: 1 }
}

fn check_multiplicities(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for case in 0..cases {
        let rg = random_graph(rng, &GraphParams { max_genus: 2, extra_edges: 3, ..params() });
        match compute_multiplicities(&rg.graph) {
            Ok(dd) if dd.multiplicities == rg.multiplicities => {}
            Ok(_) => failures.push(format!("case {case}: solved multiplicities differ from the construction")),
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    outcome(cases, failures)
}

fn check_chain_gcd(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for case in 0..cases {
        let rg = random_graph(rng, &GraphParams { max_genus: 1, ..params() });
        let dd = rg.divisor_data();
        for leaf in classify::leaves(&rg.graph) {
            let ok = classify::chain_set(&rg.graph, leaf.as_str()).and_then(|c| c.gcd_property_holds(&dd));
            if ok != Ok(true) {
                failures.push(format!("case {case}: chain of {leaf}: {ok:?}"));
            }
        }
    }
    outcome(cases, failures)
}

fn check_euler(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for case in 0..cases {
        let rg = random_graph(rng, &GraphParams { extra_edges: 2, ..params() });
        match fiber::euler_check(&rg.graph, &rg.divisor_data()) {
            Ok(c) if c.equal() => {}
            Ok(c) => failures.push(format!("case {case}: {} from pieces, {} from formula", c.from_pieces, c.from_formula)),
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    outcome(cases, failures)
}

/// Non-dividing neighbor counts expected after blowing up `inc`: unchanged,
/// except that blowing up one of several points where two curves meet keeps
/// the old neighbor and adds the new curve, which divides exactly when the
/// old neighbor does.
pub fn expected_counts(g: &PlumbingGraph, dd: &DivisorData, inc: &Incidence) -> BTreeMap<DivisorId, usize> {
    let mut counts = refine::non_dividing_neighbors(g, dd).expect("multiplicities cover the graph");
    if let Incidence::Edge(a, b) = inc {
        let parallel = g.edges().iter().filter(|(x, y)| (x == a && y == b) || (x == b && y == a)).count();
        if parallel > 1 {
            let (na, nb) = (dd.multiplicity(a.as_str()).unwrap(), dd.multiplicity(b.as_str()).unwrap());
            if nb % na != 0 {
                *counts.get_mut(a).unwrap() += 1;
            }
            if na % nb != 0 {
                *counts.get_mut(b).unwrap() += 1;
            }
        }
    }
    counts
}

fn check_blowups(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for case in 0..cases {
        let rg = random_graph(rng, &GraphParams { max_genus: 1, extra_edges: 2, ..params() });
        let dd = rg.divisor_data();
        let incidences = rg.graph.incidences();
        let inc = incidences.choose(rng).expect("every graph has an arrow");
        let out = match refine::blow_up(&rg.graph, &dd, inc) {
            Ok(out) => out,
            Err(e) => {
                failures.push(format!("case {case}: blowing up {inc}: {e}"));
                continue;
            }
        };
        if !out.graph.validate().passed() {
            failures.push(format!("case {case}: blowing up {inc} gives an invalid graph"));
        }
        if compute_multiplicities(&out.graph).map(|d| d.multiplicities).as_ref() != Ok(&out.divisors.multiplicities) {
            failures.push(format!("case {case}: blowing up {inc}: assigned multiplicities are not the solved ones"));
        }
        let expected = expected_counts(&rg.graph, &dd, inc);
        let after = refine::non_dividing_neighbors(&out.graph, &out.divisors).expect("multiplicities cover the graph");
        if expected.iter().any(|(id, c)| after.get(id) != Some(c)) {
            failures.push(format!("case {case}: blowing up {inc}: unexpected non-dividing neighbor counts"));
        }
    }
    outcome(cases, failures)
}

fn check_refinement(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for case in 0..cases {
        let rg = random_graph(rng, &GraphParams { extra_edges: 2, ..params() });
        let dd = rg.divisor_data();
        let m = rng.gen_range(1..=24);
        let (first, second) = match (refine::make_m_separating(&rg.graph, &dd, m), refine::make_m_separating(&rg.graph, &dd, m)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                failures.push(format!("case {case}, m = {m}: {e}"));
                continue;
            }
        };
        if first != second {
            failures.push(format!("case {case}, m = {m}: refinement is not deterministic"));
        }
        if !refine::is_m_separating(&first.graph, &first.divisors, m).map(|c| c.separating).unwrap_or(false) {
            failures.push(format!("case {case}, m = {m}: result is not {m}-separating"));
        }
        for r in &first.records {
            let (a, b) = r.incidence.pair();
            let sum = first.divisors.multiplicity(a.as_str()).unwrap() + first.divisors.multiplicity(b.as_str()).unwrap();
            if r.multiplicity != sum || sum > m {
                failures.push(format!("case {case}, m = {m}: {} over {} has N = {}", r.vertex, r.incidence, r.multiplicity));
            }
        }
    }
    outcome(cases, failures)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Original(DivisorId),
    Over(Origin),
}

fn keys(ids: &[DivisorId], origins: &BTreeMap<DivisorId, Origin>) -> Vec<Key> {
    let mut out: Vec<Key> =
        ids.iter().map(|id| origins.get(id).map_or_else(|| Key::Original(id.clone()), |o| Key::Over(o.clone()))).collect();
    out.sort();
    out
}

/// Components at m after refining for m, and after refining for 2m, name
/// the same divisors.
fn check_invariance(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for case in 0..cases {
        let Some(rg) = random_admissible_graph(rng, &params(), 1000) else {
            failures.push(format!("case {case}: no admissible graph drawn"));
            continue;
        };
        let dd = rg.divisor_data();
        let vertex = rg.graph.vertices().choose(rng).unwrap().id.clone();
        let m = dd.multiplicity(vertex.as_str()).unwrap() * rng.gen_range(1..=2);
        let result = (|| -> contact_loci_core::Result<(Vec<Key>, Vec<Key>)> {
            let direct = classify::components(&rg.graph, &dd, m, true)?;
            let finer = refine::make_m_separating(&rg.graph, &dd, 2 * m)?;
            let again = classify::components(&finer.graph, &finer.divisors, m, false)?;
            Ok((
                keys(&direct.component_ids(), &refine::origins(&direct.blowups)),
                keys(&again.component_ids(), &refine::origins(&finer.records)),
            ))
        })();
        match result {
            Ok((a, b)) if a == b => {}
            Ok((a, b)) => failures.push(format!("case {case}, m = {m}: {a:?} vs {b:?}")),
            Err(e) => failures.push(format!("case {case}, m = {m}: {e}")),
        }
    }
    outcome(cases, failures)
}

fn check_continued_fractions(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for _ in 0..cases {
        let n = rng.gen_range(2..=200u64);
        let q = rng.gen_range(1..n);
        if n.gcd(&q) != 1 {
            continue;
        }
        let back = toric::hj_expand(n, q).and_then(|e| toric::hj_eval(&e));
        if back != Ok((n, q)) {
            failures.push(format!("({n}, {q}) comes back as {back:?}"));
        }
    }
    outcome(cases, failures)
}

fn random_e_list(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let len = rng.gen_range(1..=8);
    (0..len).map(|_| rng.gen_range(2..=6)).collect()
}

fn check_monotonicity(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for _ in 0..cases {
        let e_list = random_e_list(rng);
        let n1 = rng.gen_range(1..=4u64);
        let result = toric::auxiliary_sequence(&e_list).and_then(|seq| {
            let mult: Vec<u64> = seq[1..].iter().map(|x| x * n1).collect();
            toric::verify_monotonicity(&e_list, &mult)
        });
        match result {
            Ok(c) if c.holds => {}
            other => failures.push(format!("{e_list:?} with N_1 = {n1}: {other:?}")),
        }
    }
    outcome(cases, failures)
}

fn check_generators(rng: &mut ChaCha8Rng, cases: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for _ in 0..cases {
        let n = rng.gen_range(2..=40u64);
        let q = rng.gen_range(1..n);
        if n.gcd(&q) != 1 {
            continue;
        }
        let gens = match toric::invariant_generators(n, q) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("({n}, {q}): {e}"));
                continue;
            }
        };
        // invariant, and no generator dominates another
        let invariant = gens.iter().all(|&(a, b)| (a + q * b) % n == 0);
        let minimal = gens.iter().all(|&(a, b)| gens.iter().all(|&(c, d)| (c, d) == (a, b) || c > a || d > b));
        let ends = gens.first() == Some(&(n, 0)) && gens.last() == Some(&(0, n));
        if !(invariant && minimal && ends) {
            failures.push(format!("({n}, {q}): {gens:?}"));
        }
    }
    outcome(cases, failures)
}
