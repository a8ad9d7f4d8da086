use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::json;
use umflow::cantor::homogeneity_witness;
use umflow::chains::{act_chain, in_neighborhood, induced_order, induced_order_by_inclusion, theta};
use umflow::dual_ramsey::{
    check_dr_certificate, dr_number_by, extract_table, search_bad_coloring, verify_dr, DrCertificate, DrNumber,
    DrQuery, SearchConfig, SearchOutcome, Verdict,
};
use umflow::dynamics::{certify, check_witness, WitnessCertificate, WitnessInputs};
use umflow::partitions::{amalgamate, coarsenings, enumerate_partitions, stirling2};
use umflow::random;
use umflow::suites::{adversarial_config, run_suites, suite, SuiteParams};
use umflow::symbolic::{phi_t, rho, SymbolConfig};

use crate::report::Outcome;
use crate::{
    CantorCmd, ChainPartition, ChainsCmd, DynamicsCmd, FactorCmd, PartitionsCmd, Query, RamseyCmd, SearchArgs,
    SuiteArgs, SymbolicCmd, Verb,
};

pub fn run(verb: Verb) -> anyhow::Result<Outcome> {
    match verb {
        Verb::Partitions(c) => partitions(c),
        Verb::Cantor(c) => cantor(c),
        Verb::Chains(c) => chains(c),
        Verb::Symbolic(c) => symbolic(c),
        Verb::Dynamics(c) => dynamics(c),
        Verb::Ramsey(c) => ramsey(c),
        Verb::Factor(c) => factor(c),
        Verb::VerifySuite(a) => verify_suite(a),
    }
}

fn partitions(cmd: PartitionsCmd) -> anyhow::Result<Outcome> {
    match cmd {
        PartitionsCmd::Enumerate { n, k } => {
            let list: Vec<String> = enumerate_partitions(n, k, true).map(|p| p.to_rgs()).collect();
            Outcome::value(list)
        }
        PartitionsCmd::Count { n, k } => Outcome::value(stirling2(n, k).to_string()),
        PartitionsCmd::Amalgamate { gamma, beta } => Outcome::value(amalgamate(&gamma, &beta)?),
        PartitionsCmd::Coarsenings { eta, k } => Outcome::value(coarsenings(&eta, k)?),
    }
}

fn cantor(cmd: CantorCmd) -> anyhow::Result<Outcome> {
    match cmd {
        CantorCmd::Apply { map, set } => Outcome::value(map.apply_clopen(&set)),
        CantorCmd::Compose { f, g } => Outcome::value(f.compose(&g)),
        CantorCmd::Inverse { f } => Outcome::value(f.inverse()),
        CantorCmd::Witness { from, to } => {
            let g = homogeneity_witness(&from, &to)?;
            let mut out = Outcome::value(&g)?;
            for (a, b) in from.parts().iter().zip(to.parts()) {
                out.check(g.apply_clopen(a) == *b, || format!("witness sends {a} to {}, not {b}", g.apply_clopen(a)));
            }
            Ok(out)
        }
    }
}

fn chains(cmd: ChainsCmd) -> anyhow::Result<Outcome> {
    match cmd {
        ChainsCmd::Order(ChainPartition { chain, partition }) => {
            let alpha = partition.unordered();
            let first = induced_order(&chain, &alpha);
            let by_inclusion = induced_order_by_inclusion(&chain, &alpha)?;
            let mut out = Outcome::value(&first)?;
            out.check(first == by_inclusion, || format!("first-touch order {first} but hull order {by_inclusion}"));
            Ok(out)
        }
        ChainsCmd::Theta(ChainPartition { chain, partition }) => Outcome::value(theta(&chain, &partition).to_string()),
        ChainsCmd::Neighborhood(ChainPartition { chain, partition }) => Outcome::value(json!({
            "member": in_neighborhood(&chain, &partition),
            "induced_order": induced_order(&chain, &partition.unordered()),
        })),
        ChainsCmd::Act { map, chain } => Outcome::value(act_chain(&map, &chain)),
    }
}

fn symbolic(cmd: SymbolicCmd) -> anyhow::Result<Outcome> {
    match cmd {
        SymbolicCmd::Table { k, table } => {
            if table.k() != k {
                return Err(umflow::Error::Parse(format!("table {table} is not on {k} points")).into());
            }
            Outcome::value(table)
        }
        SymbolicCmd::Phi { table, at } => Outcome::value(phi_t(&table, &at.chain, &at.partition)?),
        SymbolicCmd::Rho { map, at } => Outcome::value(rho(&at.chain, &map, &at.partition.unordered()).to_string()),
        SymbolicCmd::Cocycle { g, h, at } => {
            let beta = at.partition.unordered();
            let lhs = rho(&at.chain, &g.compose(&h), &beta);
            let rhs = rho(&at.chain, &g, &beta).compose(&rho(&at.chain, &h, &beta.apply(&g.inverse())));
            let mut out = Outcome::value(json!({ "gh": lhs.to_string(), "product": rhs.to_string() }))?;
            out.check(lhs == rhs, || format!("ρ(gh) = {lhs} but ρ(g)∘ρ(h) = {rhs}"));
            Ok(out)
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(file: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    serde_json::from_str(&text).map_err(|e| umflow::Error::Parse(format!("{}: {e}", file.display())).into())
}

fn witness(inputs: WitnessInputs) -> anyhow::Result<Outcome> {
    let cert = certify(inputs)?;
    let mut out = Outcome::value(&cert)?;
    let verdict = check_witness(&cert);
    out.check(verdict.is_ok(), || format!("checker rejected the witness: {}", verdict.unwrap_err()));
    out.certificate(format!("witness-{}.json", cert.kind), &cert)?;
    Ok(out)
}

fn dynamics(cmd: DynamicsCmd) -> anyhow::Result<Outcome> {
    match cmd {
        DynamicsCmd::Minimality { point, open } => witness(WitnessInputs::Minimality { point, open }),
        DynamicsCmd::ExtremeProximality { closed, open } => witness(WitnessInputs::ExtremeProximality { closed, open }),
        DynamicsCmd::PhiMinimality(ChainPartition { chain, partition }) => {
            witness(WitnessInputs::PhiMinimality { chain, partition })
        }
        DynamicsCmd::Proximality { chain2, at } => witness(WitnessInputs::Proximality {
            chains: [at.chain, chain2],
            partition: at.partition,
        }),
        DynamicsCmd::Incomparability { chain, element } => witness(WitnessInputs::Incomparability { chain, element }),
        DynamicsCmd::Check { file } => {
            let cert: WitnessCertificate = read_json(&file)?;
            let verdict = check_witness(&cert);
            let mut out = Outcome::value(json!({ "kind": cert.kind, "accepted": verdict.is_ok() }))?;
            out.check(verdict.is_ok(), || format!("{}: {}", file.display(), verdict.unwrap_err()));
            Ok(out)
        }
    }
}

fn config(search: &SearchArgs) -> SearchConfig {
    SearchConfig {
        budget: search.budget,
        prune: !search.no_prune,
        ..SearchConfig::default()
    }
}

fn query(q: &Query) -> anyhow::Result<DrQuery> {
    Ok(DrQuery::new(q.n, q.k, q.m, q.r)?)
}

fn cert_name(q: &DrQuery, what: &str) -> String {
    format!("dr-{what}-n{}-k{}-m{}-r{}.json", q.n, q.k, q.m, q.r)
}

/// Re-checks `cert` and files it under the report.
fn certified(out: &mut Outcome, cert: &DrCertificate, what: &str) -> anyhow::Result<()> {
    let checked = check_dr_certificate(cert);
    out.check(checked.is_ok(), || format!("{} certificate for {} rejected: {}", what, cert.query(), checked.unwrap_err()));
    out.certificate(cert_name(cert.query(), what), cert)
}

fn verdict_outcome(q: &DrQuery, verdict: &Verdict) -> anyhow::Result<Outcome> {
    let mut out = Outcome::value(json!({
        "query": q,
        "verdict": match verdict {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Unknown => "unknown",
        },
    }))?;
    match verdict {
        Verdict::Holds { certificate: Some(c) } => certified(&mut out, c, "upper")?,
        Verdict::Fails { certificate } => certified(&mut out, certificate, "lower")?,
        _ => {}
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct TranscriptLine {
    query: DrQuery,
    verdict: Verdict,
}

/// Loads the verdicts already in `path` whose certificates still check.
fn load_transcript(path: &Path) -> anyhow::Result<HashMap<DrQuery, Verdict>> {
    let mut known = HashMap::new();
    if !path.exists() {
        return Ok(known);
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let entry: TranscriptLine = serde_json::from_str(line)
            .map_err(|e| umflow::Error::Parse(format!("{} line {}: {e}", path.display(), i + 1)))?;
        let sound = match &entry.verdict {
            Verdict::Holds { certificate: Some(c) } | Verdict::Fails { certificate: c } => check_dr_certificate(c).is_ok(),
            Verdict::Holds { certificate: None } | Verdict::Unknown => false,
        };
        if sound {
            known.insert(entry.query, entry.verdict);
        }
    }
    Ok(known)
}

fn ramsey(cmd: RamseyCmd) -> anyhow::Result<Outcome> {
    match cmd {
        RamseyCmd::Verify { query: q, search } => {
            let q = query(&q)?;
            verdict_outcome(&q, &verify_dr(&q, &config(&search))?)
        }
        RamseyCmd::Lower { query: q, search } => {
            let q = query(&q)?;
            let found = match search_bad_coloring(&q, &config(&search))? {
                SearchOutcome::Bad(col) => Some(DrCertificate::lower_bound(&q, &col)),
                SearchOutcome::NoneExists { .. } => None,
                SearchOutcome::Unknown => {
                    return Outcome::value(json!({ "query": q, "lower_bound": "unknown" }));
                }
            };
            let mut out = Outcome::value(json!({ "query": q, "lower_bound": found.is_some() }))?;
            if let Some(cert) = found {
                certified(&mut out, &cert, "lower")?;
            }
            Ok(out)
        }
        RamseyCmd::Number { k, m, r, n_max, transcript, search } => {
            DrQuery::new(m, k, m, r)?;
            let cfg = config(&search);
            let mut known = match &transcript {
                Some(path) => load_transcript(path)?,
                None => HashMap::new(),
            };
            let mut log = match &transcript {
                Some(path) => Some(
                    OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(path)
                        .with_context(|| format!("opening {}", path.display()))?,
                ),
                None => None,
            };
            let mut io_error = None;
            let result = dr_number_by(k, m, r, n_max, |q| {
                if let Some(v) = known.remove(q) {
                    return Ok(v);
                }
                let verdict = verify_dr(q, &cfg)?;
                if let Some(file) = log.as_mut() {
                    let line = serde_json::to_string(&TranscriptLine { query: *q, verdict: verdict.clone() })
                        .expect("verdicts serialize");
                    if let Err(e) = writeln!(file, "{line}").and_then(|_| file.flush()) {
                        io_error.get_or_insert(e);
                    }
                }
                Ok(verdict)
            })?;
            if let Some(e) = io_error {
                bail!("writing the transcript: {e}");
            }
            let summary = match &result {
                DrNumber::Exact { value, .. } => json!({ "result": "exact", "value": value }),
                DrNumber::LowerBound { exceeds, .. } => json!({ "result": "lower_bound", "exceeds": exceeds }),
                DrNumber::Unknown { at, exceeds, .. } => json!({ "result": "unknown", "at": at, "exceeds": exceeds }),
            };
            let mut out = Outcome::value(json!({ "k": k, "m": m, "r": r, "n_max": n_max, "dr": summary }))?;
            match &result {
                DrNumber::Exact { lower, upper, .. } => {
                    certified(&mut out, lower, "lower")?;
                    match upper {
                        Some(u) => certified(&mut out, u, "upper")?,
                        None => out.check(false, || "no refutation recorded for the upper bound".into()),
                    }
                }
                DrNumber::LowerBound { certificate, .. } | DrNumber::Unknown { certificate, .. } => {
                    certified(&mut out, certificate, "lower")?
                }
            }
            Ok(out)
        }
        RamseyCmd::Check { file } => {
            let cert: DrCertificate = read_json(&file)?;
            let checked = check_dr_certificate(&cert);
            let mut out = Outcome::value(json!({ "query": cert.query(), "accepted": checked.is_ok() }))?;
            out.check(checked.is_ok(), || format!("{}: {}", file.display(), checked.unwrap_err()));
            Ok(out)
        }
    }
}

fn factor(cmd: FactorCmd) -> anyhow::Result<Outcome> {
    match cmd {
        FactorCmd::Roundtrip { k, table, seed, cases } => {
            if table.k() != k {
                return Err(umflow::Error::Parse(format!("table {table} is not on {k} points")).into());
            }
            let mut rng = random::rng(seed, 0);
            let mut out = Outcome {
                seed: Some(seed),
                ..Outcome::default()
            };
            let mut rows = Vec::new();
            for case in 0..cases {
                let c0 = random::chain(&mut rng, 6);
                let m = k + case % 3;
                let alpha = random::partition(&mut rng, m, 6);
                let omega = SymbolConfig::phi_t(table.clone(), c0.clone());
                let got = extract_table(&omega, &c0, &alpha, m)?;
                let recovered = got.as_ref().map(|x| x.table.clone());
                out.check(recovered.as_ref() == Some(&table), || {
                    format!("case {case}: c0 = {c0}, α = {alpha}: recovered {recovered:?}")
                });
                rows.push(json!({ "c0": c0, "alpha": alpha, "recovered": recovered, "g": got.map(|x| x.g) }));
            }
            out.result = Some(json!({ "table": table, "cases": rows }));
            Ok(out)
        }
        FactorCmd::Adversarial { k, seed, cases } => {
            if k < 2 {
                // Π̃(2,1) has a single cell, so every colouring is monochromatic.
                return Err(umflow::Error::Precondition("an adversarial configuration needs k ≥ 2".into()).into());
            }
            let mut rng = random::rng(seed, 1);
            let mut out = Outcome {
                seed: Some(seed),
                ..Outcome::default()
            };
            let mut rows = Vec::new();
            for case in 0..cases {
                let c0 = random::chain(&mut rng, 6);
                let alpha = random::partition(&mut rng, k + 1, 6);
                let omega = adversarial_config(&c0, &alpha, k)?;
                let got = extract_table(&omega, &c0, &alpha, alpha.len())?;
                out.check(got.is_none(), || format!("case {case}: a table was extracted from {}", omega.describe()));
                rows.push(json!({ "c0": c0, "alpha": alpha, "extracted": got.map(|x| x.table) }));
            }
            out.result = Some(json!({ "k": k, "cases": rows }));
            Ok(out)
        }
    }
}

fn verify_suite(args: SuiteArgs) -> anyhow::Result<Outcome> {
    if let Some(bad) = args.only.iter().find(|n| suite(n).is_none()) {
        return Err(umflow::Error::Parse(format!("no suite named {bad:?}")).into());
    }
    if args.max_leaves == 0 {
        return Err(umflow::Error::Precondition("--max-leaves must be at least 1".into()).into());
    }
    let params = SuiteParams {
        seed: args.seed,
        max_leaves: args.max_leaves,
        random_cases: args.cases,
    };
    Ok(Outcome {
        seed: Some(args.seed),
        suites: run_suites(&params, &args.only),
        ..Outcome::default()
    })
}
