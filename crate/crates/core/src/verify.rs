//! Property suites run over the built-in corpus.

use serde::Serialize;

use crate::cc::{
    canonical_signature, is_coarsening, partition_eq, partition_leq, same_partition, wl_closure,
    CoherentConfiguration,
};
use crate::constructions::{
    exponentiate, exponentiate_with, layer_parabolic_check, tensor_decomposition_check, Fusion,
    IsoFamily, LayerParabolicReport, PermGroup, DEFAULT_HYPOTHESIS_CAP,
};
use crate::corpus::{corpus, random_family, random_prime_product, small_products, subgroup_pairs};
use crate::error::{Error, Result};
use crate::factor::{
    common_neighbor_relation, extension_placement, prime_factorize, tau_by_cylinders,
    tau_relation, theta_by_cylinders, theta_relation, unique_common_neighbor_relation,
};
use crate::graph::{bfs_distances, cartesian_product, graph_isomorphic, named_graph, random_connected, Graph};
use crate::kwl::{
    cylinder, is_two_closed, k_wl, project, two_closure, two_extension, wl_m_closed, DEFAULT_TUPLE_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Chain,
    Factorization,
    Tensor,
    Extension,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Axioms,
        Suite::Chain,
        Suite::Factorization,
        Suite::Tensor,
        Suite::Extension,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Chain => "chain",
            Suite::Factorization => "factorization",
            Suite::Tensor => "theorem2",
            Suite::Extension => "extension",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "suite".into(),
                reason: format!("unknown suite `{s}`; expected one of axioms, chain, factorization, theorem2, extension"),
            })
    }
}

/// Outcome of one property over all the instances it was checked on.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl PropertyResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checked: 0,
            failures: Vec::new(),
            passed: true,
        }
    }

    fn check(&mut self, instance: &str, ok: bool) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.failures.push(instance.to_string());
        }
    }

    /// Records the outcome of a fallible check; an error counts as a failure.
    fn check_result<E: std::fmt::Display>(&mut self, instance: &str, ok: std::result::Result<bool, E>) {
        match ok {
            Ok(ok) => self.check(instance, ok),
            Err(e) => {
                self.checked += 1;
                self.passed = false;
                self.failures.push(format!("{instance}: {e}"));
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

pub fn verify(suite: Suite) -> SuiteReport {
    let properties = match suite {
        Suite::Axioms => axioms_suite(),
        Suite::Chain => chain_suite(),
        Suite::Factorization => factorization_suite(),
        Suite::Tensor => tensor_suite(),
        Suite::Extension => extension_suite(),
    };
    SuiteReport {
        suite: suite.name().to_string(),
        passed: properties.iter().all(|p| p.passed),
        properties,
    }
}

fn named(spec: &str) -> Graph {
    named_graph(spec).expect("built-in spec")
}

fn axioms_suite() -> Vec<PropertyResult> {
    let mut coherent = PropertyResult::new("closures satisfy C1-C3");
    let mut tensor = PropertyResult::new("intersection numbers agree between representatives");
    for entry in corpus(8) {
        let cc = wl_closure(&entry.graph);
        coherent.check(&entry.name, cc.verify_axioms().is_coherent());
        tensor.check(&entry.name, cc.intersection_numbers().is_ok());
    }
    let exp = exponentiation_properties(0..40);
    let mut out = vec![coherent, tensor];
    out.extend(exp);
    out
}

/// Coherence, subgroup monotonicity, generator/element fusion agreement
/// and invariance under renaming of colors, over seeded random families.
pub fn exponentiation_properties(seeds: std::ops::Range<u64>) -> Vec<PropertyResult> {
    let mut coherent = PropertyResult::new("exponentiation satisfies C1-C3");
    let mut monotone = PropertyResult::new("exponentiation by a subgroup refines");
    let mut fusion = PropertyResult::new("generator fusion equals element fusion");
    let mut renaming = PropertyResult::new("exponentiation independent of color names");
    for seed in seeds {
        let name = format!("family seed {seed}");
        let family = match random_family(seed) {
            Ok(f) => f,
            Err(e) => {
                coherent.check_result(&name, Err(e));
                continue;
            }
        };
        let pairs = match subgroup_pairs(family.degree()) {
            Ok(p) => p,
            Err(e) => {
                monotone.check_result(&name, Err(e));
                continue;
            }
        };
        let plain = plain_family(&family);
        // each distinct group is exponentiated once
        let mut groups: Vec<PermGroup> = Vec::new();
        for (h, g) in &pairs {
            for x in [h, g] {
                if !groups.contains(x) {
                    groups.push(x.clone());
                }
            }
        }
        let mut exps: Vec<Option<CoherentConfiguration>> = Vec::with_capacity(groups.len());
        for group in &groups {
            let label = format!("{name}, |G| = {}", group.order());
            match exponentiate(&family, group) {
                Ok(exp) => {
                    coherent.check(&label, exp.verify_axioms().is_coherent());
                    fusion.check_result(
                        &label,
                        exponentiate_with(&family, group, Fusion::Elements)
                            .map(|all| same_partition(all.colors(), exp.colors())),
                    );
                    renaming.check_result(
                        &label,
                        plain
                            .as_ref()
                            .map_err(|e| e.to_string())
                            .and_then(|p| {
                                exponentiate(p, group)
                                    .and_then(|base| partition_eq(&base, &exp))
                                    .map_err(|e| e.to_string())
                            }),
                    );
                    exps.push(Some(exp));
                }
                Err(e) => {
                    coherent.check_result(&label, Err(e));
                    exps.push(None);
                }
            }
        }
        let index = |x: &PermGroup| groups.iter().position(|y| y == x).expect("collected");
        for (h, g) in &pairs {
            let label = format!("{name}, |H| = {}, |G| = {}", h.order(), g.order());
            match (&exps[index(h)], &exps[index(g)]) {
                (Some(eh), Some(eg)) => monotone.check_result(&label, partition_leq(eg, eh)),
                _ => monotone.check(&label, false),
            }
        }
    }
    vec![coherent, monotone, fusion, renaming]
}

/// The family with colors renamed back to the canonical names of the first
/// member, joined by identities.
fn plain_family(family: &IsoFamily) -> Result<IsoFamily> {
    let ccs: Vec<CoherentConfiguration> = (0..family.degree())
        .map(|j| {
            family.ccs()[j].rename_colors(family.phi(j, 0))
        })
        .collect::<Result<_>>()?;
    let identity: Vec<u32> = (0..ccs[0].rank() as u32).collect();
    let row = vec![identity; ccs.len()];
    IsoFamily::from_first_row(ccs, row, &["E"])
}

fn chain_suite() -> Vec<PropertyResult> {
    let mut chain = PropertyResult::new("pr_2 WL_m non-decreasing for m = 2, 3, 4");
    for entry in corpus(8) {
        chain.check_result(&entry.name, monotone_chain(&entry.graph));
    }
    let mut extension = PropertyResult::new("pr_4 WL_6 refines the 2-extension");
    let mut closed = PropertyResult::new("WL_6-closed implies 2-closed");
    for entry in corpus(6) {
        match six_wl_checks(&entry.graph) {
            Ok((refines, implication)) => {
                extension.check(&entry.name, refines);
                closed.check(&entry.name, implication);
            }
            Err(e) => extension.check_result(&entry.name, Err(e)),
        }
    }
    let (discrete, m_closed) = random_discrete_checks(20);
    vec![chain, extension, closed, discrete, m_closed]
}

/// `pr_2 WL_2 = WL(X)` and `pr_2 WL_2 ≤ pr_2 WL_3 ≤ pr_2 WL_4`.
pub fn monotone_chain(g: &Graph) -> Result<bool> {
    let closure = wl_closure(g);
    let mut previous = closure.colors().to_vec();
    for m in 2..=4 {
        let proj = project(&k_wl(g, m)?, &[0, 1])?;
        if m == 2 && !same_partition(&proj.colors, closure.colors()) {
            return Ok(false);
        }
        if !is_coarsening(&previous, &proj.colors) {
            return Ok(false);
        }
        previous = proj.colors;
    }
    Ok(true)
}

/// `(pr_4 WL_6 ≥ S(X̂), WL_6-closed ⇒ 2-closed)` for one graph.
pub fn six_wl_checks(g: &Graph) -> Result<(bool, bool)> {
    let closure = wl_closure(g);
    let kc = k_wl(g, 6)?;
    let ext = two_extension(&closure)?;
    let refines = is_coarsening(ext.extended.colors(), &project(&kc, &[0, 1, 2, 3])?.colors);
    let six_closed = same_partition(&project(&kc, &[0, 1])?.colors, closure.colors());
    Ok((refines, !six_closed || is_two_closed(&closure)?))
}

/// Seeded connected `G(n, 1/2)` samples on 20 vertices: discrete closure,
/// and `WL_3`-closed.
pub fn random_discrete_checks(count: u64) -> (PropertyResult, PropertyResult) {
    let mut discrete = PropertyResult::new("random 20-vertex graphs have discrete closure");
    let mut closed = PropertyResult::new("random 20-vertex graphs are WL_3-closed");
    for seed in 0..count {
        let g = random_connected(20, seed);
        let name = format!("random_connected:20,{seed}");
        discrete.check(&name, wl_closure(&g).rank() == 400);
        closed.check_result(&name, wl_m_closed(&g, 3, DEFAULT_TUPLE_BUDGET));
    }
    (discrete, closed)
}

fn factorization_suite() -> Vec<PropertyResult> {
    let mut round_trip = PropertyResult::new("random products factor back into their factors");
    for seed in 0..100 {
        round_trip.check_result(&format!("product seed {seed}"), round_trip_check(seed));
    }
    let mut relabel = PropertyResult::new("factorization unique under relabelling");
    for seed in 0..10 {
        relabel.check_result(&format!("product seed {seed}"), relabel_check(seed, 10));
    }
    let mut tau = PropertyResult::new("tau from intersection numbers equals direct tau");
    let mut cylinders = PropertyResult::new("theta and tau equal their cylinder forms");
    let mut instances: Vec<(String, Graph)> = corpus(8)
        .into_iter()
        .filter(|e| e.graph.n() >= 2 && e.graph.is_connected())
        .map(|e| (e.name, e.graph))
        .collect();
    for (name, factors) in small_products() {
        instances.push((name, cartesian_product(&factors).expect("factors").0));
    }
    for (name, g) in &instances {
        tau.check_result(name, tau_from_s_prime_matches(g));
        if g.n() <= 12 {
            cylinders.check_result(name, cylinder_forms_match(g));
        }
    }
    let mut wielandt = PropertyResult::new("common-neighbor relation recovers factor edges of K_a x K_b");
    for (n1, n2, ok) in wielandt_checks() {
        wielandt.check(&format!("K_{n1} x K_{n2}"), ok);
    }
    let mut layers = PropertyResult::new("layer partitions parabolic iff closure is the tensor product");
    for (specs, expected) in [(["complete:3", "complete:5"], true), (["complete:4", "complete:4"], false)] {
        let factors: Vec<Graph> = specs.iter().map(|s| named(s)).collect();
        layers.check_result(
            &specs.join(" x "),
            layer_parabolic_check(&factors).map(|r| {
                r == LayerParabolicReport {
                    layers_parabolic: expected,
                    tensor_equal: expected,
                }
            }),
        );
    }
    vec![round_trip, relabel, tau, cylinders, wielandt, layers]
}

/// Factor multisets equal up to isomorphism.
pub fn same_factor_multiset(a: &[Graph], b: &[Graph]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut unmatched: Vec<&Graph> = b.iter().collect();
    for f in a {
        let mut hit = None;
        for (i, g) in unmatched.iter().enumerate() {
            if graph_isomorphic(f, g)? {
                hit = Some(i);
                break;
            }
        }
        match hit {
            Some(i) => {
                unmatched.remove(i);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// Factorizes the seeded product and matches the factors.
pub fn round_trip_check(seed: u64) -> Result<bool> {
    let (g, factors) = random_prime_product(seed, 8);
    let report = prime_factorize(&g)?;
    Ok(report.certified && same_factor_multiset(&report.factors, &factors)?)
}

fn relabel_check(seed: u64, relabelings: u64) -> Result<bool> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let (g, _) = random_prime_product(seed, 6);
    let base = prime_factorize(&g)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..relabelings {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rng);
        let other = prime_factorize(&g.relabel(&perm))?;
        if !same_factor_multiset(&base.factors, &other.factors)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `τ` built from `s′` (intersection numbers of `WL(X)`) against the
/// common-neighbor count.
pub fn tau_from_s_prime_matches(g: &Graph) -> Result<bool> {
    let s_prime = unique_common_neighbor_relation(g)?;
    let direct = tau_relation(g)?;
    let edges = direct.edges();
    for (i, &(x, y)) in edges.iter().enumerate() {
        for (j, &(u, v)) in edges.iter().enumerate() {
            let via_s_prime = x == u && s_prime.contains(y, v);
            let in_direct = direct.pairs().binary_search(&(i as u32, j as u32)).is_ok();
            if via_s_prime != in_direct {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn cylinder_forms_match(g: &Graph) -> Result<bool> {
    Ok(theta_by_cylinders(g)? == theta_relation(g)?.on_pairs()
        && tau_by_cylinders(g)? == tau_relation(g)?.on_pairs())
}

/// `(n1, n2, recovered)` for `3 ≤ n1 < n2 ≤ 6`.
pub fn wielandt_checks() -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for n1 in 3..=6 {
        for n2 in n1 + 1..=6 {
            let (x, ps) = cartesian_product(&[named(&format!("complete:{n1}")), named(&format!("complete:{n2}"))])
                .expect("factors");
            let ok = common_neighbor_relation(&x, n1 - 2) == ps.factor_relation(0)
                && common_neighbor_relation(&x, n2 - 2) == ps.factor_relation(1);
            out.push((n1, n2, ok));
        }
    }
    out
}

/// Factor lists for the tensor decomposition: several WL-equivalence
/// classes mixed in one product.
pub fn tensor_instances() -> Vec<Vec<&'static str>> {
    vec![
        vec!["complete:3", "complete:3", "cycle:5"],
        vec!["complete:2", "complete:2", "cycle:5"],
        vec!["complete:3", "cycle:5"],
        vec!["complete:2", "complete:3", "complete:3"],
        vec!["complete:2", "path:3", "path:3"],
        vec!["cycle:5", "complete:3", "cycle:5"],
        vec!["complete:2", "path:3", "complete:3"],
        vec!["complete:2", "complete:3", "cycle:5"],
        vec!["cycle:5", "cycle:5", "complete:2"],
        vec!["path:3", "complete:3", "path:3"],
        vec!["complete:3", "complete:5"],
        vec!["complete:4", "complete:4"],
    ]
}

fn tensor_suite() -> Vec<PropertyResult> {
    let mut conclusion = PropertyResult::new("closure equals tensor of class closures");
    let mut guaranteed = PropertyResult::new("conclusion holds where 2-closedness is established");
    let mut inclusion = PropertyResult::new("class closure refined by its exponentiation");
    for specs in tensor_instances() {
        let name = specs.join(" x ");
        let factors: Vec<Graph> = specs.iter().map(|s| named(s)).collect();
        match tensor_decomposition_check(&factors, DEFAULT_HYPOTHESIS_CAP) {
            Ok(r) => {
                conclusion.check(&name, r.tensor_decomposition_holds);
                if r.hypothesis_2closed == Some(true) {
                    guaranteed.check(&name, r.tensor_decomposition_holds);
                }
                for inc in &r.exponentiation_inclusions {
                    inclusion.check(&format!("{name}, class {:?}", inc.class), inc.holds);
                }
            }
            Err(e) => conclusion.check_result(&name, Err(e)),
        }
    }
    vec![conclusion, guaranteed, inclusion]
}

fn extension_suite() -> Vec<PropertyResult> {
    let mut placement = PropertyResult::new("theta, tau and c(X) sit inside the 2-extension");
    for (name, factors) in small_products() {
        let (g, _) = cartesian_product(&factors).expect("factors");
        placement.check_result(&name, extension_placement(&g, 12).map(|p| p.all_hold()));
    }
    let mut refines = PropertyResult::new("2-closure refines the closure");
    for entry in corpus(6) {
        let cc = wl_closure(&entry.graph);
        refines.check_result(&entry.name, two_closure(&cc).and_then(|bar| partition_leq(&cc, &bar)));
    }
    let mut cylinders = PropertyResult::new("cylinders over basis relations are extension relations");
    for spec in ["cycle:5", "path:4", "star:3", "complete:4"] {
        cylinders.check_result(spec, cylinders_are_relations(&named(spec)));
    }
    let mut distances = PropertyResult::new("algebraic isomorphism preserves distance relations");
    distances.check_result("shrikhande, hamming:2,4", distance_relations_preserved(&named("shrikhande"), &named("hamming:2,4")));
    vec![placement, refines, cylinders, distances]
}

fn cylinders_are_relations(g: &Graph) -> Result<bool> {
    let cc = wl_closure(g);
    let ext = two_extension(&cc)?;
    for c in 0..cc.rank() as u32 {
        let s = cc.basis_relation(c);
        for i in 0..2 {
            for j in 0..2 {
                if !ext.extended.is_relation(&cylinder(&cc, &s, i, j)?) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Under the identity on canonical names, the colors covering each distance
/// relation of one graph cover the same distance relation of the other.
pub fn distance_relations_preserved(g1: &Graph, g2: &Graph) -> Result<bool> {
    let (c1, c2) = (wl_closure(g1), wl_closure(g2));
    if canonical_signature(&c1)? != canonical_signature(&c2)? {
        return Ok(false);
    }
    let (d1, d2) = (bfs_distances(g1), bfs_distances(g2));
    if d1.diameter() != d2.diameter() {
        return Ok(false);
    }
    for i in 0..=d1.diameter() {
        let a = c1.colors_covering(&d1.distance_relation(Some(i)));
        let b = c2.colors_covering(&d2.distance_relation(Some(i)));
        if a.is_none() || a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn exponentiation_suite_small() {
        for p in exponentiation_properties(0..6) {
            assert!(p.passed, "{}: {:?}", p.name, p.failures);
            assert!(p.checked > 0);
        }
    }

    #[test]
    fn distance_relations_of_srg_pair() {
        assert!(distance_relations_preserved(&named("shrikhande"), &named("hamming:2,4")).unwrap());
        assert!(!distance_relations_preserved(&named("cycle:5"), &named("path:5")).unwrap());
    }

    #[test]
    fn chain_on_small_graphs() {
        for g in [named("cycle:6"), named("path:5"), named("star:4")] {
            assert!(monotone_chain(&g).unwrap());
        }
    }
}
