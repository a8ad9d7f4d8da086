use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::{DrCertificate, RefutationLeaf};
use super::DrQuery;
use crate::partitions::{coarsenings, enumerate_partitions, stirling2, Coloring, PartitionIndex, SetPartition};
use crate::{Error, Result};

const MAX_CELLS: u128 = 1 << 20;
const MAX_HYPEREDGES: u128 = 1 << 24;
const MAX_BRUTE_FORCE: u128 = 50_000_000;

/// Knobs for the backtracking search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Hard cap on visited nodes (colour assignments) per query.
    pub budget: u64,
    /// Only try colours up to one above the largest colour used so far.
    pub prune: bool,
    /// Keep the refutation tree so that a negative answer is certified.
    pub record_refutation: bool,
    /// Depth of the prefixes handed to parallel workers.
    pub shard_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: 100_000_000,
            prune: true,
            record_refutation: true,
            shard_depth: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A colouring with no monochromatic `η`, the least one in canonical order.
    Bad(Coloring),
    /// Every colouring has a monochromatic `η`.
    NoneExists { leaves: Option<Vec<RefutationLeaf>> },
    /// The budget ran out first.
    Unknown,
}

/// Answer of [`verify_dr`] with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds { certificate: Option<DrCertificate> },
    Fails { certificate: DrCertificate },
    Unknown,
}

/// Result of [`dr_number`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum DrNumber {
    /// `DR = value`: a bad colouring at `value - 1` and a refutation at `value`.
    Exact {
        value: usize,
        lower: DrCertificate,
        upper: Option<DrCertificate>,
    },
    /// Every size up to the ceiling has a bad colouring: `DR > exceeds`.
    LowerBound { exceeds: usize, certificate: DrCertificate },
    /// The budget ran out at size `at`; `DR > exceeds` is still certified.
    Unknown {
        at: usize,
        exceeds: usize,
        certificate: DrCertificate,
    },
}

struct Instance {
    query: DrQuery,
    size: usize,
    etas: Vec<SetPartition>,
    // triggers[p]: the η whose highest-ranked coarsening is cell p
    triggers: Vec<Vec<u32>>,
    // others[e]: the remaining coarsening cells of η number e
    others: Vec<Vec<u32>>,
}

impl Instance {
    fn new(q: &DrQuery) -> Result<Self> {
        q.validate()?;
        let cells = stirling2(q.n, q.k);
        let edges = stirling2(q.n, q.m);
        if cells > MAX_CELLS || edges > MAX_HYPEREDGES {
            return Err(Error::Precondition(format!(
                "{q}: {cells} partitions to colour and {edges} candidates are beyond the engine's limits"
            )));
        }
        let size = cells as usize;
        let index = PartitionIndex::new(q.n, q.k);
        let etas: Vec<SetPartition> = enumerate_partitions(q.n, q.m, true).collect();
        let mut triggers = vec![Vec::new(); size];
        let mut others = Vec::with_capacity(etas.len());
        for (e, eta) in etas.iter().enumerate() {
            let mut ranks: Vec<u32> = coarsenings(eta, q.k)?
                .iter()
                .map(|p| index.rank(p).expect("coarsening has k blocks") as u32)
                .collect();
            ranks.sort_unstable();
            let last = ranks.pop().expect("every partition has a coarsening");
            triggers[last as usize].push(e as u32);
            others.push(ranks);
        }
        Ok(Self {
            query: *q,
            size,
            etas,
            triggers,
            others,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Step {
    Found,
    Exhausted,
    Budget,
    Cancelled,
}

struct Worker<'a> {
    inst: &'a Instance,
    prune: bool,
    cap: u64,
    nodes: u64,
    colors: Vec<u32>,
    used: u32,
    leaves: Option<Vec<(Vec<u32>, u32, u32)>>,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl<'a> Worker<'a> {
    fn new(inst: &'a Instance, cfg: &SearchConfig, record: bool, cap: u64, prefix: Vec<u32>) -> Self {
        let used = prefix.iter().map(|&c| c + 1).max().unwrap_or(0);
        Self {
            inst,
            prune: cfg.prune,
            cap,
            nodes: 0,
            colors: prefix,
            used,
            leaves: record.then(Vec::new),
            cancel: None,
        }
    }

    fn refuter(&self, pos: usize, c: u32) -> Option<u32> {
        self.inst.triggers[pos]
            .iter()
            .copied()
            .find(|&e| self.inst.others[e as usize].iter().all(|&q| self.colors[q as usize] == c))
    }

    /// Depth-first over colour assignments. Stops at `limit` cells, pushing
    /// the prefix to `frontier`. On `Found` the full colouring stays in
    /// `self.colors`.
    fn dfs(&mut self, limit: usize, frontier: &mut Vec<Vec<u32>>) -> Step {
        let pos = self.colors.len();
        if pos == self.inst.size {
            return Step::Found;
        }
        if pos == limit {
            frontier.push(self.colors.clone());
            return Step::Exhausted;
        }
        let r = self.inst.query.r;
        let top = if self.prune { r.min(self.used + 1) } else { r };
        for c in 0..top {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Step::Budget;
            }
            if self.nodes & 0xfff == 0 {
                if let Some((best, me)) = self.cancel {
                    if best.load(Ordering::Relaxed) < me {
                        return Step::Cancelled;
                    }
                }
            }
            if let Some(e) = self.refuter(pos, c) {
                if let Some(leaves) = &mut self.leaves {
                    let mut prefix = self.colors.clone();
                    prefix.push(c);
                    leaves.push((prefix, e, c));
                }
                continue;
            }
            let saved = self.used;
            self.colors.push(c);
            self.used = self.used.max(c + 1);
            match self.dfs(limit, frontier) {
                Step::Exhausted => {}
                Step::Found => return Step::Found,
                other => return other,
            }
            self.colors.pop();
            self.used = saved;
        }
        Step::Exhausted
    }
}

struct Shard {
    step: Step,
    colors: Vec<u32>,
    leaves: Option<Vec<(Vec<u32>, u32, u32)>>,
    nodes: u64,
}

/// Runs the search and also reports the number of visited nodes.
pub(super) fn run_search(q: &DrQuery, cfg: &SearchConfig) -> Result<(SearchOutcome, u64)> {
    let inst = Instance::new(q)?;
    let record = cfg.record_refutation && q.r <= 36;
    let bad = |colors: Vec<u32>| Coloring::new(q.n, q.k, colors).map(SearchOutcome::Bad);

    let mut frontier = Vec::new();
    let mut head = Worker::new(&inst, cfg, record, cfg.budget, Vec::new());
    match head.dfs(cfg.shard_depth.min(inst.size), &mut frontier) {
        Step::Found => return Ok((bad(head.colors)?, head.nodes)),
        Step::Budget => return Ok((SearchOutcome::Unknown, head.nodes)),
        Step::Cancelled => unreachable!("the head search is never cancelled"),
        Step::Exhausted => {}
    }

    let remaining = cfg.budget.saturating_sub(head.nodes);
    let per_shard = (remaining / frontier.len().max(1) as u64).max(1);
    let best = AtomicUsize::new(usize::MAX);
    let shards: Vec<Shard> = frontier
        .into_par_iter()
        .enumerate()
        .map(|(i, prefix)| {
            if best.load(Ordering::Relaxed) < i {
                return Shard {
                    step: Step::Cancelled,
                    colors: Vec::new(),
                    leaves: None,
                    nodes: 0,
                };
            }
            let mut w = Worker::new(&inst, cfg, record, per_shard, prefix);
            w.cancel = Some((&best, i));
            let step = w.dfs(usize::MAX, &mut Vec::new());
            if step == Step::Found {
                best.fetch_min(i, Ordering::Relaxed);
            }
            Shard {
                step,
                colors: w.colors,
                leaves: w.leaves,
                nodes: w.nodes,
            }
        })
        .collect();

    let nodes = head.nodes + shards.iter().map(|s| s.nodes).sum::<u64>();
    let mut unknown = false;
    let mut leaves = head.leaves;
    for shard in shards {
        match shard.step {
            Step::Found => return Ok((bad(shard.colors)?, nodes)),
            Step::Budget | Step::Cancelled => unknown = true,
            Step::Exhausted => {
                if let (Some(all), Some(mine)) = (&mut leaves, shard.leaves) {
                    all.extend(mine);
                }
            }
        }
    }
    if unknown {
        return Ok((SearchOutcome::Unknown, nodes));
    }
    let leaves = leaves.map(|mut raw| {
        raw.sort_unstable();
        raw.into_iter()
            .map(|(prefix, e, color)| RefutationLeaf::new(&prefix, inst.etas[e as usize].clone(), color))
            .collect()
    });
    Ok((SearchOutcome::NoneExists { leaves }, nodes))
}

/// A colouring of `Π̃(N,k)` with `r` colours and no monochromatic `η ∈ Π(N,m)`.
pub fn search_bad_coloring(q: &DrQuery, cfg: &SearchConfig) -> Result<SearchOutcome> {
    run_search(q, cfg).map(|(o, _)| o)
}

/// Whether every `r`-colouring of `Π̃(N,k)` has a monochromatic `η ∈ Π(N,m)`.
pub fn verify_dr(q: &DrQuery, cfg: &SearchConfig) -> Result<Verdict> {
    Ok(match search_bad_coloring(q, cfg)? {
        SearchOutcome::Bad(col) => Verdict::Fails {
            certificate: DrCertificate::lower_bound(q, &col),
        },
        SearchOutcome::NoneExists { leaves } => Verdict::Holds {
            certificate: leaves.map(|leaves| DrCertificate::UpperWitnessed {
                query: *q,
                symmetry_reduced: cfg.prune,
                leaves,
            }),
        },
        SearchOutcome::Unknown => Verdict::Unknown,
    })
}

/// The least bad colouring in lexicographic order, found by trying all `r^|Π̃(N,k)|`
/// colourings one by one.
pub fn brute_force_bad_coloring(q: &DrQuery) -> Result<Option<Coloring>> {
    q.validate()?;
    let cells = stirling2(q.n, q.k);
    if (q.r as u128).checked_pow(cells as u32).is_none_or(|t| t > MAX_BRUTE_FORCE) {
        return Err(Error::Precondition(format!("{q}: too many colourings to enumerate")));
    }
    let index = PartitionIndex::new(q.n, q.k);
    let candidates = enumerate_partitions(q.n, q.m, true)
        .map(|eta| {
            coarsenings(&eta, q.k).map(|cs| cs.iter().map(|p| index.rank(p).unwrap()).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut colors = vec![0u32; cells as usize];
    loop {
        let mono = candidates.iter().any(|cs| cs.iter().all(|&p| colors[p] == colors[cs[0]]));
        if !mono {
            return Coloring::new(q.n, q.k, colors).map(Some);
        }
        // odometer step, last cell fastest
        let mut i = colors.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            colors[i] += 1;
            if colors[i] < q.r {
                break;
            }
            colors[i] = 0;
        }
    }
}

/// `DR(k,m,r)` by increasing `N` from `m` up to `n_max`.
pub fn dr_number(k: usize, m: usize, r: u32, n_max: usize, cfg: &SearchConfig) -> Result<DrNumber> {
    dr_number_by(k, m, r, n_max, |q| verify_dr(q, cfg))
}

/// [`dr_number`] with a caller-supplied decision procedure, e.g. one that
/// replays stored verdicts before searching.
pub fn dr_number_by(
    k: usize,
    m: usize,
    r: u32,
    n_max: usize,
    mut verify: impl FnMut(&DrQuery) -> Result<Verdict>,
) -> Result<DrNumber> {
    let base = DrQuery::new(m - 1, k, m, r)?;
    // Below m there is no m-block partition at all, so any colouring is bad.
    let mut exceeds = m - 1;
    let mut lower = DrCertificate::lower_bound(&base, &Coloring::constant(base.n, k, 0));
    for n in m..=n_max {
        let q = DrQuery { n, ..base };
        match verify(&q)? {
            Verdict::Holds { certificate } => {
                return Ok(DrNumber::Exact {
                    value: n,
                    lower,
                    upper: certificate,
                })
            }
            Verdict::Fails { certificate } => {
                exceeds = n;
                lower = certificate;
            }
            Verdict::Unknown => {
                return Ok(DrNumber::Unknown {
                    at: n,
                    exceeds,
                    certificate: lower,
                })
            }
        }
    }
    Ok(DrNumber::LowerBound {
        exceeds,
        certificate: lower,
    })
}
