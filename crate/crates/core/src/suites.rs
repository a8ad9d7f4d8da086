//! Property suites: exhaustive small-instance checks plus seeded random
//! sampling. Each suite returns a [`SuiteReport`]; [`run_suites`] runs a
//! selection of them in a fixed order.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cantor::{
    apply_partition, canonicalize, homogeneity_witness, join, ClopenSet, OrderedPartition, Permutation, PrefixCode,
    PrefixMap, UnorderedPartition, Word,
};
use crate::chains::{
    act_chain, in_neighborhood, induced_order, induced_order_by_inclusion, project_chain, refine_chain, theta,
    ChainApprox,
};
use crate::dual_ramsey::{
    brute_force_bad_coloring, check_dr_certificate, dr_number, extract_table, find_monochromatic, refine_sorted,
    search_bad_coloring, verify_dr, DrNumber, DrQuery, SearchConfig, SearchOutcome, Verdict,
};
use crate::dynamics::{certify, check_witness, WitnessInputs};
use crate::partitions::{
    amalgamate, coarsenings, enumerate_partitions, is_refinement, naturally_order, stirling2, SetPartition,
};
use crate::random::{self, SuiteRng};
use crate::symbolic::{act_omega, bullet_eval, phi_t, rho, tilde, Sign, SymbolConfig, Table};
use crate::Result;

const LISTED_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub seed: u64,
    /// Bound on code size for the exhaustive parts of every suite.
    pub max_leaves: usize,
    /// Number of samples for the randomized parts.
    pub random_cases: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            seed: 0,
            max_leaves: 5,
            random_cases: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub case: String,
    pub repro: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub failed: u64,
    /// The first few failures; `failed` counts all of them.
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    pub run: fn(&SuiteParams) -> SuiteReport,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "partitions", about: "amalgamation, natural order, Stirling counts, coarsenings", run: partitions_suite },
    Suite { name: "cantor", about: "group laws of prefix maps, Boolean algebra, S_k/G commutation, homogeneity, join", run: cantor_suite },
    Suite { name: "chains", about: "linearity of induced orders, refine/project round trip", run: chains_suite },
    Suite { name: "induced-order", about: "first-touch rule agrees with hull inclusion", run: induced_order_suite },
    Suite { name: "equivariance", about: "g t*_c = t*_{gc} g and both θ identities", run: equivariance_suite },
    Suite { name: "neighborhood", about: "membership in U_α and c ∈ U_{t*_c(α)}", run: neighborhood_suite },
    Suite { name: "cocycle", about: "ρ_c(gh,β̃) = ρ_c(g,β̃)∘ρ_c(h,g⁻¹β̃)", run: cocycle_suite },
    Suite { name: "conjugation", about: "π_c intertwines the plain and twisted actions; φ_T locality", run: conjugation_suite },
    Suite { name: "tables", about: "ω̃_T is constant T and φ_T is equivariant", run: tables_suite },
    Suite { name: "witnesses", about: "the five witness constructors pass the independent checker", run: witnesses_suite },
    Suite { name: "ramsey-trivial", about: "DR(1,m,r) = m and DR(k,k,r) = k", run: ramsey_trivial_suite },
    Suite { name: "ramsey-integrity", about: "pruned search = brute force, certificates, monotonicity", run: ramsey_integrity_suite },
    Suite { name: "factor", about: "table extraction round trip and honest failure", run: factor_suite },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// Runs the named suites (all when `only` is empty) in catalogue order.
pub fn run_suites(params: &SuiteParams, only: &[String]) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .filter(|s| only.is_empty() || only.iter().any(|o| o == s.name))
        .map(|s| (s.run)(params))
        .collect()
}

struct Recorder<'a> {
    name: &'static str,
    params: &'a SuiteParams,
    checks: u64,
    failed: u64,
    failures: Vec<Failure>,
}

impl<'a> Recorder<'a> {
    fn new(name: &'static str, params: &'a SuiteParams) -> Self {
        Self {
            name,
            params,
            checks: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn rng(&self) -> SuiteRng {
        let stream = SUITES.iter().position(|s| s.name == self.name).unwrap_or(0) as u64;
        random::rng(self.params.seed, stream)
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < LISTED_FAILURES {
                let p = self.params;
                self.failures.push(Failure {
                    case: case(),
                    repro: format!(
                        "umflow verify-suite --only {} --seed {} --max-leaves {} --cases {}",
                        self.name, p.seed, p.max_leaves, p.random_cases
                    ),
                });
            }
        }
    }

    /// Records an `Err` as a failure carrying the error text.
    fn check_result(&mut self, r: Result<bool>, case: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, case),
            Err(e) => self.check(false, || format!("{}: {e}", case())),
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            checks: self.checks,
            failed: self.failed,
            failures: self.failures,
        }
    }
}

/// The partition of `code`'s leaves given by `labels` (block `j` = leaves
/// labelled `j`).
pub fn leaf_partition(code: &PrefixCode, labels: &SetPartition) -> OrderedPartition {
    let mut parts = vec![Vec::new(); labels.k()];
    for (w, &l) in code.leaves().iter().zip(labels.labels()) {
        parts[l].push(*w);
    }
    OrderedPartition::new(parts.into_iter().map(ClopenSet::from).collect()).expect("labels cover the leaves")
}

/// All unordered partitions of the leaves of `code` with at most `max_parts`
/// parts.
pub fn leaf_partitions(code: &PrefixCode, max_parts: usize) -> Vec<UnorderedPartition> {
    (1..=code.len().min(max_parts))
        .flat_map(|k| enumerate_partitions(code.len(), k, true))
        .map(|labels| leaf_partition(code, &labels).unordered())
        .collect()
}

fn codes_up_to(max_leaves: usize) -> impl Iterator<Item = PrefixCode> {
    (1..=max_leaves).flat_map(PrefixCode::all_with_leaves)
}

/// A generating set of the prefix-replacement group together with inverses.
pub fn generators() -> Vec<PrefixMap> {
    let base = [
        "0→00,10→01,11→1",
        "0→0,10→100,110→101,111→11",
        "0→11,10→0,11→10",
        "0→0,10→11,11→10",
        "0→1,1→0",
    ];
    base.iter()
        .map(|s| s.parse::<PrefixMap>().expect("valid generator"))
        .flat_map(|g| {
            let inv = g.inverse();
            [g, inv]
        })
        .collect()
}

fn partitions_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("partitions", p);
    for m in 1..=6 {
        for k in 1..=m {
            for gamma in enumerate_partitions(m, k, true) {
                for s in 1..=k {
                    for beta in enumerate_partitions(k, s, true) {
                        let gb = amalgamate(&gamma, &beta);
                        for t in 1..=s {
                            for delta in enumerate_partitions(s, t, true) {
                                let lhs = gb.as_ref().map_err(Clone::clone).and_then(|gb| amalgamate(gb, &delta));
                                let rhs = amalgamate(&beta, &delta).and_then(|bd| amalgamate(&gamma, &bd));
                                rec.check(matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b), || {
                                    format!("amalgamation of {gamma}, {beta}, {delta}")
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    for n in 1..=10 {
        for k in 1..=n {
            let count = enumerate_partitions(n, k, true).count() as u128;
            rec.check(count == stirling2(n, k), || format!("|Π({n},{k})| = {count}"));
            if n > 1 {
                rec.check(count == k as u128 * stirling2(n - 1, k) + stirling2(n - 1, k - 1), || {
                    format!("Stirling recurrence at ({n},{k})")
                });
            }
        }
    }
    for n in 1..=6 {
        for k in 1..=n {
            for ordered in enumerate_partitions(n, k, false) {
                let nat = naturally_order(&ordered);
                rec.check(
                    naturally_order(&nat) == nat && nat.to_rgs() == ordered.to_rgs() && nat.is_naturally_ordered(),
                    || format!("natural order of {ordered}"),
                );
            }
        }
    }
    for n in 1..=7 {
        for m in 1..=n {
            for eta in enumerate_partitions(n, m, true) {
                for k in 1..=m {
                    let ok = coarsenings(&eta, k).and_then(|cs| {
                        let mut ok = cs.len() as u128 == stirling2(m, k);
                        for c in &cs {
                            ok &= c.k() == k && c.is_naturally_ordered() && is_refinement(&eta, c)?;
                        }
                        Ok(ok)
                    });
                    rec.check_result(ok, || format!("coarsenings of {eta} into {k}"));
                }
            }
        }
    }
    rec.finish()
}

fn words_of_length(len: usize) -> Vec<Word> {
    Word::all_of_length(len).collect()
}

fn cantor_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("cantor", p);
    let mut rng = rec.rng();
    let probes = words_of_length(12);
    let agree = |a: &PrefixMap, b: &dyn Fn(&Word) -> ClopenSet| probes.iter().all(|x| a.apply_cylinder(x) == b(x));
    for case in 0..p.random_cases / 10 {
        let (f, g, h) = (random::map(&mut rng, 8), random::map(&mut rng, 8), random::map(&mut rng, 8));
        let fg = f.compose(&g);
        rec.check(agree(&fg, &|x| f.apply_clopen(&g.apply_cylinder(x))), || {
            format!("case {case}: ({f})∘({g}) pointwise")
        });
        rec.check(fg.compose(&h) == f.compose(&g.compose(&h)), || format!("case {case}: associativity"));
        rec.check(
            f.compose(&f.inverse()).is_identity() && f.inverse().compose(&f).is_identity(),
            || format!("case {case}: inverse of {f}"),
        );
        rec.check(
            agree(&f.inverse(), &|x| {
                let image = f.inverse().apply_cylinder(x);
                if f.apply_clopen(&image) == ClopenSet::cylinder(*x) { image } else { ClopenSet::empty() }
            }),
            || format!("case {case}: inverse of {f} pointwise"),
        );
        rec.check(
            f.compose(&PrefixMap::identity()) == f && PrefixMap::identity().compose(&f) == f,
            || format!("case {case}: identity"),
        );

        let code = random::code(&mut rng, 8);
        let k = rng.gen_range(1..=code.len().min(4));
        let alpha = random::partition_on(&mut rng, &code, k);
        let sigma = random::permutation(&mut rng, k);
        let lhs = apply_partition(&g, &alpha.permute(&sigma).unwrap());
        let rhs = apply_partition(&g, &alpha).permute(&sigma).unwrap();
        rec.check(lhs == rhs, || format!("case {case}: σg = gσ for {alpha}"));

        let beta = random::partition(&mut rng, k, 8);
        let w = homogeneity_witness(&alpha, &beta);
        rec.check_result(
            w.map(|w| alpha.parts().iter().zip(beta.parts()).all(|(a, b)| w.apply_clopen(a) == *b)),
            || format!("case {case}: homogeneity {alpha} → {beta}"),
        );
        let j = join(&alpha, &beta);
        rec.check(j.refines(&alpha) && j.refines(&beta), || format!("case {case}: join of {alpha}, {beta}"));

        let a: ClopenSet = (0..rng.gen_range(0..5)).map(|_| random_word(&mut rng, 6)).collect();
        let b: ClopenSet = (0..rng.gen_range(0..5)).map(|_| random_word(&mut rng, 6)).collect();
        rec.check(canonicalize(a.cylinders().iter().copied()) == a, || format!("case {case}: canonical {a}"));
        let pointwise = Word::all_of_length(7).all(|x| {
            let (ia, ib) = (a.contains_cylinder(&x), b.contains_cylinder(&x));
            a.union(&b).contains_cylinder(&x) == (ia || ib)
                && a.intersection(&b).contains_cylinder(&x) == (ia && ib)
                && a.complement().contains_cylinder(&x) == !ia
                && a.difference(&b).contains_cylinder(&x) == (ia && !ib)
        });
        rec.check(pointwise, || format!("case {case}: Boolean operations on {a}, {b}"));
    }
    rec.finish()
}

fn random_word(rng: &mut impl Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let bits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
    Word::from_bits(&bits)
}

fn chains_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("chains", p);
    for code in codes_up_to(p.max_leaves.min(5)) {
        for c in ChainApprox::all_on(&code) {
            for alpha in leaf_partitions(&code, code.len()) {
                rec.check_result(
                    induced_order_by_inclusion(&c, &alpha).map(|o| o == induced_order(&c, &alpha)),
                    || format!("linearity for {c}, {alpha}"),
                );
            }
            for (i, leaf) in c.order().iter().enumerate() {
                if leaf.len() >= 100 {
                    continue;
                }
                for child in leaf.children() {
                    for pos in i + 1..=c.len() {
                        let ok = refine_chain(&c, leaf, &child, pos)
                            .and_then(|r| project_chain(&r, &code))
                            .map(|back| back == c);
                        rec.check_result(ok, || format!("refine {c} at {leaf}/{child}/{pos}, then project"));
                    }
                }
            }
        }
    }
    rec.finish()
}

fn induced_order_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("induced-order", p);
    for code in codes_up_to(p.max_leaves) {
        let parts = leaf_partitions(&code, code.len());
        for c in ChainApprox::all_on(&code) {
            for alpha in &parts {
                let first = induced_order(&c, alpha);
                rec.check_result(
                    induced_order_by_inclusion(&c, alpha).map(|o| o == first),
                    || format!("{c} on {alpha}"),
                );
            }
        }
    }
    // Partitions at a finer or unrelated level than the chain.
    let mut rng = rec.rng();
    for case in 0..p.random_cases / 10 {
        let c = random::chain(&mut rng, 8);
        let k = rng.gen_range(1..=4);
        let alpha = random::partition(&mut rng, k, 8).unordered();
        rec.check_result(
            induced_order_by_inclusion(&c, &alpha).map(|o| o == induced_order(&c, &alpha)),
            || format!("case {case}: {c} on {alpha}"),
        );
    }
    rec.finish()
}

fn equivariance_checks(rec: &mut Recorder, g: &PrefixMap, c: &ChainApprox, beta: &UnorderedPartition, all_sigma: bool) {
    let gc = act_chain(g, c);
    let gbeta = beta.apply(g);
    let lhs = induced_order(c, beta).apply(g);
    rec.check(lhs == induced_order(&gc, &gbeta), || format!("g t*_c = t*_gc g for g = {g}, c = {c}, β̃ = {beta}"));
    let ordered = beta.to_ordered();
    rec.check(theta(c, &ordered) == theta(&gc, &ordered.apply(g)), || {
        format!("θ_β(c) = θ_gβ(gc) for g = {g}, c = {c}, β = {ordered}")
    });
    if all_sigma {
        let sorted = induced_order(c, beta);
        for sigma in Permutation::all(beta.len()) {
            let b = sorted.permute(&sigma.inverse()).expect("sizes agree");
            rec.check(theta(c, &b) == sigma, || format!("θ_(σ⁻¹t*) = σ for σ = {sigma}, c = {c}, β̃ = {beta}"));
        }
    }
}

fn equivariance_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("equivariance", p);
    let gens = generators();
    for code in codes_up_to(p.max_leaves) {
        let parts = leaf_partitions(&code, 4);
        for c in ChainApprox::all_on(&code) {
            for beta in &parts {
                for (i, g) in gens.iter().enumerate() {
                    equivariance_checks(&mut rec, g, &c, beta, i == 0);
                }
            }
        }
    }
    let mut rng = rec.rng();
    let beyond = p.max_leaves + 3;
    for _ in 0..p.random_cases {
        let g = random::map(&mut rng, beyond);
        let n = rng.gen_range(p.max_leaves + 1..=beyond);
        let code = random::code_with(&mut rng, n);
        let c = random::chain_on(&mut rng, &code);
        let k = rng.gen_range(1..=4);
        let beta = random::partition(&mut rng, k, beyond).unordered();
        equivariance_checks(&mut rec, &g, &c, &beta, true);
    }
    rec.finish()
}

fn neighborhood_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("neighborhood", p);
    for code in codes_up_to(p.max_leaves) {
        let chains = ChainApprox::all_on(&code);
        for alpha in leaf_partitions(&code, code.len()) {
            let base = alpha.to_ordered();
            let orders: Vec<OrderedPartition> = Permutation::all(alpha.len())
                .map(|s| base.permute(&s).expect("sizes agree"))
                .collect();
            for c in &chains {
                let sorted = induced_order(c, &alpha);
                rec.check(in_neighborhood(c, &sorted), || format!("{c} ∉ U_(t*) for {alpha}"));
                let mut inside = 0;
                for a in &orders {
                    let member = in_neighborhood(c, a);
                    inside += member as usize;
                    rec.check(member == (*a == sorted), || format!("{c} and U_{a}"));
                }
                rec.check(inside == 1, || format!("{c} lies in {inside} of the U_α over {alpha}"));
            }
        }
    }
    rec.finish()
}

fn cocycle_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("cocycle", p);
    let mut rng = rec.rng();
    for case in 0..p.random_cases {
        let k = 2 + case % 3;
        let g = random::map(&mut rng, 8);
        let h = random::map(&mut rng, 8);
        let c = random::chain(&mut rng, 8);
        let beta = random::partition(&mut rng, k, 8).unordered();
        let lhs = rho(&c, &g.compose(&h), &beta);
        let rhs = rho(&c, &g, &beta).compose(&rho(&c, &h, &beta.apply(&g.inverse())));
        rec.check(lhs == rhs, || format!("case {case}: g = {g}, h = {h}, c = {c}, β̃ = {beta}"));
    }
    rec.finish()
}

/// A configuration that is not of the form `φ_T(c)`.
fn sample_config(k: usize) -> SymbolConfig {
    SymbolConfig::from_fn(k, "parity of the first part's cylinder count", |b| {
        if b.part(0).cylinders().len() % 2 == 0 { Sign::Plus } else { Sign::Minus }
    })
}

fn conjugation_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("conjugation", p);
    let mut rng = rec.rng();
    for case in 0..p.random_cases / 10 {
        let k = 2 + case % 2;
        let omega = if case % 2 == 0 {
            SymbolConfig::phi_t(random::table(&mut rng, k), random::chain(&mut rng, 6))
        } else {
            sample_config(k)
        };
        let g = random::map(&mut rng, 6);
        let c = random::chain(&mut rng, 6);
        let beta = random::partition(&mut rng, k, 6).unordered();
        let moved = tilde(&act_omega(&g, &omega), &c);
        let wt = tilde(&omega, &c);
        for sigma in Permutation::all(k) {
            let ok = bullet_eval(&c, &g, &wt, &beta, &sigma)
                .and_then(|l| moved.eval(&beta, &sigma).map(|r| l == r));
            rec.check_result(ok, || format!("case {case}: {} at g = {g}, c = {c}, β̃ = {beta}, σ = {sigma}", omega.describe()));
        }
        let back = act_omega(&g, &act_omega(&g.inverse(), &omega));
        let b = beta.to_ordered();
        rec.check_result(
            back.eval(&b).and_then(|x| omega.eval(&b).map(|y| x == y)),
            || format!("case {case}: g(g⁻¹ω) = ω at {b}"),
        );

        // φ_T(c)(β) only depends on t*_c(β): recompute with another chain
        // inducing the same order.
        let table = random::table(&mut rng, k);
        let sorted = induced_order(&c, &beta);
        for _ in 0..50 {
            let other = random::chain(&mut rng, 6);
            if induced_order(&other, &beta) == sorted {
                let ok = phi_t(&table, &c, &b).and_then(|x| phi_t(&table, &other, &b).map(|y| x == y));
                rec.check_result(ok, || format!("case {case}: locality at {c} vs {other}, β = {b}"));
                break;
            }
        }
    }
    rec.finish()
}

/// The tables used by the table suites: all of `T^2`, ten sampled from `T^3`.
fn suite_tables(rng: &mut impl Rng) -> Vec<Table> {
    let mut out: Vec<Table> = Table::all(2).collect();
    out.extend((0..10).map(|_| random::table(rng, 3)));
    out
}

fn tables_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("tables", p);
    let mut rng = rec.rng();
    let tables = suite_tables(&mut rng);
    let chains = [
        ChainApprox::lex(&PrefixCode::uniform(2)),
        "110,0,10,111".parse::<ChainApprox>().expect("a chain"),
        random::chain(&mut rng, 6),
    ];
    let by_size: BTreeMap<usize, Vec<UnorderedPartition>> = [2, 3]
        .into_iter()
        .map(|k| {
            let list = codes_up_to(p.max_leaves.max(k))
                .flat_map(|code| {
                    enumerate_partitions(code.len(), k, true)
                        .map(|l| leaf_partition(&code, &l).unordered())
                        .collect::<Vec<_>>()
                })
                .collect();
            (k, list)
        })
        .collect();
    for t in &tables {
        for c0 in &chains {
            let wt = tilde(&SymbolConfig::phi_t(t.clone(), c0.clone()), c0);
            for beta in &by_size[&t.k()] {
                for sigma in Permutation::all(t.k()) {
                    let ok = wt.eval(beta, &sigma).map(|v| v == t.get(&sigma));
                    rec.check_result(ok, || format!("ω̃_T({beta})({sigma}) for T = {t}, c0 = {c0}"));
                }
            }
        }
    }
    for case in 0..p.random_cases {
        let t = &tables[case % tables.len()];
        let g = random::map(&mut rng, 8);
        let c = random::chain(&mut rng, 8);
        let beta = random::partition(&mut rng, t.k(), 8);
        let lhs = phi_t(t, &act_chain(&g, &c), &beta);
        let rhs = phi_t(t, &c, &beta.apply(&g.inverse()));
        let via_action = act_omega(&g, &SymbolConfig::phi_t(t.clone(), c.clone())).eval(&beta);
        let ok = lhs.and_then(|l| Ok(l == rhs? && l == via_action?));
        rec.check_result(ok, || format!("case {case}: T = {t}, g = {g}, c = {c}, β = {beta}"));
    }
    rec.finish()
}

fn witness_check(rec: &mut Recorder, inputs: WitnessInputs) {
    let shown = serde_json::to_string(&inputs).expect("inputs serialize");
    match certify(inputs) {
        Ok(cert) => {
            let verdict = check_witness(&cert);
            rec.check(verdict.is_ok(), || format!("{shown}: {}", verdict.unwrap_err()));
        }
        Err(e) => rec.check(false, || format!("{shown}: {e}")),
    }
}

fn clopens_of(code: &PrefixCode) -> Vec<ClopenSet> {
    let n = code.len();
    (0u32..1 << n)
        .map(|mask| {
            code.leaves()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, w)| *w)
                .collect()
        })
        .collect()
}

fn ordered_leaf_partitions(code: &PrefixCode, max_parts: usize) -> Vec<OrderedPartition> {
    leaf_partitions(code, max_parts)
        .into_iter()
        .flat_map(|a| {
            let base = a.to_ordered();
            Permutation::all(a.len())
                .map(move |s| base.permute(&s).expect("sizes agree"))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn witnesses_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("witnesses", p);
    for code in codes_up_to(p.max_leaves) {
        let clopens = clopens_of(&code);
        let partitions = ordered_leaf_partitions(&code, 3);
        let chains = ChainApprox::all_on(&code);
        for u in clopens.iter().filter(|u| !u.is_empty()) {
            for x in code.leaves().iter().filter(|x| !x.is_empty() || u.is_full()) {
                witness_check(&mut rec, WitnessInputs::Minimality { point: *x, open: u.clone() });
            }
            for f in clopens.iter().filter(|f| !f.is_full()) {
                witness_check(&mut rec, WitnessInputs::ExtremeProximality { closed: f.clone(), open: u.clone() });
            }
        }
        for c in &chains {
            for alpha in &partitions {
                witness_check(&mut rec, WitnessInputs::PhiMinimality { chain: c.clone(), partition: alpha.clone() });
            }
            for j in 2..c.len() {
                witness_check(&mut rec, WitnessInputs::Incomparability { chain: c.clone(), element: c.element(j - 1) });
            }
            // All pairs up to four leaves; beyond that the lexicographic
            // chain, its reverse and the reverse of c1.
            let partners: Vec<ChainApprox> = if code.len() <= 4 {
                chains.clone()
            } else {
                let lex = ChainApprox::lex(&code);
                let rev = |ch: &ChainApprox| ChainApprox::new(ch.order().iter().rev().copied().collect()).expect("reversed");
                vec![rev(&lex), rev(c), lex]
            };
            for c2 in &partners {
                for alpha in &partitions {
                    witness_check(
                        &mut rec,
                        WitnessInputs::Proximality { chains: [c.clone(), c2.clone()], partition: alpha.clone() },
                    );
                }
            }
        }
    }
    let mut rng = rec.rng();
    let beyond = p.max_leaves + 3;
    for _ in 0..p.random_cases / 10 {
        let n = rng.gen_range(p.max_leaves + 1..=beyond);
        let code = random::code_with(&mut rng, n);
        let (c1, c2) = (random::chain_on(&mut rng, &code), random::chain(&mut rng, beyond));
        let k = rng.gen_range(1..=4);
        let alpha = random::partition(&mut rng, k, beyond);
        let u = random::partition_on(&mut rng, &code, 2);
        let mut x = random_word(&mut rng, 8);
        if x.is_empty() {
            x = Word::from_bits(&[1]);
        }
        witness_check(&mut rec, WitnessInputs::Minimality { point: x, open: u.part(0).clone() });
        witness_check(
            &mut rec,
            WitnessInputs::ExtremeProximality { closed: u.part(1).clone(), open: random::partition(&mut rng, 2, beyond).part(0).clone() },
        );
        witness_check(&mut rec, WitnessInputs::PhiMinimality { chain: c1.clone(), partition: alpha.clone() });
        witness_check(&mut rec, WitnessInputs::Proximality { chains: [c1.clone(), c2], partition: alpha });
        let j = rng.gen_range(2..n);
        witness_check(&mut rec, WitnessInputs::Incomparability { chain: c1.clone(), element: c1.element(j - 1) });
    }
    rec.finish()
}

fn exact_with_certificates(rec: &mut Recorder, got: Result<DrNumber>, expected: usize, label: String) {
    match got {
        Ok(DrNumber::Exact { value, lower, upper }) => {
            rec.check(value == expected, || format!("{label}: value {value}, expected {expected}"));
            let lower_ok = check_dr_certificate(&lower);
            rec.check(lower_ok.is_ok(), || format!("{label}: lower certificate: {}", lower_ok.unwrap_err()));
            let upper_ok = upper.as_ref().map(check_dr_certificate);
            rec.check(matches!(upper_ok, Some(Ok(()))), || format!("{label}: upper certificate {upper_ok:?}"));
        }
        other => rec.check(false, || format!("{label}: {other:?}")),
    }
}

fn ramsey_trivial_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("ramsey-trivial", p);
    let cfg = SearchConfig::default();
    for r in 1..=4 {
        for m in 1..=5 {
            exact_with_certificates(&mut rec, dr_number(1, m, r, m + 2, &cfg), m, format!("DR(1,{m},{r})"));
        }
        for k in 1..=5 {
            exact_with_certificates(&mut rec, dr_number(k, k, r, k, &cfg), k, format!("DR({k},{k},{r})"));
        }
    }
    rec.finish()
}

/// Every `(N,k)` with at most seven partitions to colour, `N ≤ 8`.
pub fn small_shapes() -> Vec<(usize, usize)> {
    (1..=8)
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .filter(|&(n, k)| stirling2(n, k) <= 7)
        .collect()
}

fn ramsey_integrity_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("ramsey-integrity", p);
    let cfg = SearchConfig::default();
    let unpruned = SearchConfig {
        prune: false,
        ..SearchConfig::default()
    };
    // holds[(k, m, r)][N]
    let mut holds: BTreeMap<(usize, usize, u32), BTreeMap<usize, bool>> = BTreeMap::new();
    for (n, k) in small_shapes() {
        let cells = stirling2(n, k) as u32;
        for m in k..=n + 1 {
            for r in 1..=cells.max(2) {
                let q = DrQuery { n, k, m, r };
                let brute = brute_force_bad_coloring(&q);
                for (label, c) in [("pruned", &cfg), ("unpruned", &unpruned)] {
                    let search = search_bad_coloring(&q, c);
                    let same = match (&search, &brute) {
                        (Ok(SearchOutcome::Bad(a)), Ok(Some(b))) => a == b,
                        (Ok(SearchOutcome::NoneExists { .. }), Ok(None)) => true,
                        _ => false,
                    };
                    rec.check(same, || format!("{q}: {label} search {search:?} vs brute force {brute:?}"));
                }
                if let Ok(Some(col)) = &brute {
                    rec.check_result(find_monochromatic(col, m).map(|x| x.is_none()), || {
                        format!("{q}: brute-force colouring is bad")
                    });
                }
                record_verdict(&mut rec, &q, &cfg, &mut holds);
                record_verdict(&mut rec, &q, &unpruned, &mut BTreeMap::new());
            }
        }
    }
    // A non-trivial family, computed up to its value and one step beyond.
    for n in 3..=7 {
        record_verdict(&mut rec, &DrQuery { n, k: 2, m: 3, r: 2 }, &cfg, &mut holds);
    }
    for ((k, m, r), by_n) in &holds {
        for (n, h) in by_n {
            if let Some(next) = by_n.get(&(n + 1)) {
                rec.check(!h || *next, || format!("monotonicity of (k={k}, m={m}, r={r}) at N = {n}"));
            }
        }
    }
    rec.finish()
}

fn record_verdict(
    rec: &mut Recorder,
    q: &DrQuery,
    cfg: &SearchConfig,
    holds: &mut BTreeMap<(usize, usize, u32), BTreeMap<usize, bool>>,
) {
    let verdict = verify_dr(q, cfg);
    let (h, cert) = match &verdict {
        Ok(Verdict::Holds { certificate: Some(c) }) => (true, c),
        Ok(Verdict::Fails { certificate }) => (false, certificate),
        other => {
            rec.check(false, || format!("{q}: no certified verdict: {other:?}"));
            return;
        }
    };
    let checked = check_dr_certificate(cert);
    rec.check(checked.is_ok(), || format!("{q}: certificate rejected: {}", checked.unwrap_err()));
    holds.entry((q.k, q.m, q.r)).or_default().insert(q.n, h);
}

/// A configuration whose colouring at `N = |alpha|` is not constant, so that
/// no table can be extracted there.
pub fn adversarial_config(c0: &ChainApprox, alpha: &OrderedPartition, k: usize) -> Result<SymbolConfig> {
    let beta = refine_sorted(c0, alpha, alpha.len())?;
    let gamma = enumerate_partitions(alpha.len(), k, true)
        .next()
        .expect("k ≤ |α|");
    let marked = beta.amalgamate(&gamma)?.unordered();
    Ok(SymbolConfig::from_fn(k, format!("-1 exactly on {marked}"), move |b| {
        if b.unordered() == marked { Sign::Minus } else { Sign::Plus }
    }))
}

fn factor_suite(p: &SuiteParams) -> SuiteReport {
    let mut rec = Recorder::new("factor", p);
    let mut rng = rec.rng();
    let mut tables: Vec<Table> = Table::all(2).collect();
    tables.extend((0..8).map(|_| random::table(&mut rng, 3)));
    for case in 0..20 {
        let c0 = random::chain(&mut rng, 6);
        let m = rng.gen_range(3..=4);
        let alpha = random::partition(&mut rng, m, 6);
        for t in &tables {
            let omega = SymbolConfig::phi_t(t.clone(), c0.clone());
            let got = extract_table(&omega, &c0, &alpha, alpha.len());
            rec.check(matches!(&got, Ok(Some(x)) if x.table == *t), || {
                format!("case {case}: T = {t}, c0 = {c0}, α = {alpha}: {got:?}")
            });
        }
        for k in [2, 3] {
            if k < m {
                let got = adversarial_config(&c0, &alpha, k).and_then(|omega| extract_table(&omega, &c0, &alpha, alpha.len()));
                rec.check(matches!(got, Ok(None)), || format!("case {case}: adversarial k = {k}, c0 = {c0}, α = {alpha}: {got:?}"));
            }
        }
    }
    rec.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteParams {
        SuiteParams {
            seed: 1,
            max_leaves: 3,
            random_cases: 200,
        }
    }

    #[test]
    fn every_suite_passes_at_small_size() {
        for s in SUITES {
            let report = (s.run)(&small());
            assert!(report.checks > 0, "{} ran no checks", s.name);
            assert!(report.passed(), "{}: {:?}", s.name, report.failures);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let only = vec!["cocycle".to_string(), "tables".to_string()];
        let a = serde_json::to_string(&run_suites(&small(), &only)).unwrap();
        let b = serde_json::to_string(&run_suites(&small(), &only)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generators_are_valid() {
        for g in generators() {
            assert!(g.compose(&g.inverse()).is_identity());
        }
    }
}
