//! Certificates for dual Ramsey answers and their checker.
//!
//! The checker deliberately re-derives everything it needs (partition lists,
//! coarsenings, ranks) with its own small routines instead of calling into the
//! search or the `partitions` module, so that a bug in either cannot vouch
//! for itself.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::DrQuery;
use crate::partitions::{Coloring, SetPartition};
use crate::{Rejection, Result};

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// A node of the refutation tree at which colouring `prefix` (cells in rank
/// order, colours as base-36 digits) already makes `η` monochromatic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefutationLeaf {
    pub prefix: String,
    pub eta: String,
    pub color: u32,
}

impl RefutationLeaf {
    pub(super) fn new(prefix: &[u32], eta: SetPartition, color: u32) -> Self {
        Self {
            prefix: prefix.iter().map(|&c| DIGITS[c as usize] as char).collect(),
            eta: eta.to_rgs(),
            color,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DrCertificate {
    /// A colouring with no monochromatic `η`: `DR(k,m,r) > N`.
    LowerBound {
        query: DrQuery,
        coloring: BTreeMap<String, u32>,
    },
    /// A refutation tree covering every colouring (every canonically
    /// relabelled colouring when `symmetry_reduced`): `DR(k,m,r) ≤ N`.
    UpperWitnessed {
        query: DrQuery,
        symmetry_reduced: bool,
        leaves: Vec<RefutationLeaf>,
    },
}

impl DrCertificate {
    pub fn lower_bound(query: &DrQuery, col: &Coloring) -> Self {
        DrCertificate::LowerBound {
            query: *query,
            coloring: col.to_map(),
        }
    }

    pub fn query(&self) -> &DrQuery {
        match self {
            DrCertificate::LowerBound { query, .. } | DrCertificate::UpperWitnessed { query, .. } => query,
        }
    }

    /// The stored colouring of a lower-bound certificate.
    pub fn coloring(&self) -> Option<Result<Coloring>> {
        match self {
            DrCertificate::LowerBound { query, coloring } => Some(Coloring::from_map(query.n, query.k, coloring)),
            DrCertificate::UpperWitnessed { .. } => None,
        }
    }
}

fn reject<T>(msg: String) -> std::result::Result<T, Rejection> {
    Err(Rejection(msg))
}

/// Restricted-growth strings of length `n` with exactly `k` labels, ascending.
fn rgs_list(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, n: usize, k: usize, blocks: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            if blocks == k {
                out.push(cur.clone());
            }
            return;
        }
        if k - blocks > n - cur.len() {
            return;
        }
        for l in 0..=blocks.min(k.saturating_sub(1)) {
            cur.push(l as u8);
            go(cur, n, k, blocks.max(l + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n && (k > 0 || n == 0) && k < 256 {
        go(&mut Vec::with_capacity(n), n, k, 0, &mut out);
    }
    out
}

fn relabel(labels: impl IntoIterator<Item = u8>) -> Vec<u8> {
    let mut map: HashMap<u8, u8> = HashMap::new();
    labels
        .into_iter()
        .map(|l| {
            let next = map.len() as u8;
            *map.entry(l).or_insert(next)
        })
        .collect()
}

fn parse_rgs(s: &str, n: usize, k: usize) -> std::result::Result<Vec<u8>, Rejection> {
    let labels: Vec<u8> = s
        .bytes()
        .map(|b| DIGITS.iter().position(|&d| d == b).map(|p| p as u8))
        .collect::<Option<_>>()
        .ok_or_else(|| Rejection(format!("{s:?} is not a label string")))?;
    if labels.len() != n || relabel(labels.iter().copied()) != labels || labels.iter().max().map_or(0, |&l| l as usize + 1) != k {
        return reject(format!("{s:?} does not encode a partition of {n} points into {k} blocks"));
    }
    Ok(labels)
}

struct Domain {
    cells: Vec<Vec<u8>>,
    rank: HashMap<Vec<u8>, usize>,
    taus: Vec<Vec<u8>>,
}

impl Domain {
    fn new(q: &DrQuery) -> Self {
        let cells = rgs_list(q.n, q.k);
        let rank = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Self {
            cells,
            rank,
            taus: rgs_list(q.m, q.k),
        }
    }

    /// Ranks of all `k`-block coarsenings of `eta`.
    fn coarsening_ranks(&self, eta: &[u8]) -> Vec<usize> {
        self.taus
            .iter()
            .map(|tau| self.rank[&relabel(eta.iter().map(|&b| tau[b as usize]))])
            .collect()
    }
}

/// Re-checks a certificate from scratch.
pub fn check_dr_certificate(cert: &DrCertificate) -> std::result::Result<(), Rejection> {
    let q = cert.query();
    if q.k == 0 || q.r == 0 || q.k > q.m {
        return reject(format!("malformed query {q}"));
    }
    if q.n > 24 {
        return reject(format!("{q} is beyond what the checker enumerates"));
    }
    let dom = Domain::new(q);
    match cert {
        DrCertificate::LowerBound { coloring, .. } => check_lower(q, &dom, coloring),
        DrCertificate::UpperWitnessed {
            symmetry_reduced,
            leaves,
            ..
        } => check_upper(q, &dom, *symmetry_reduced, leaves),
    }
}

fn check_lower(q: &DrQuery, dom: &Domain, coloring: &BTreeMap<String, u32>) -> std::result::Result<(), Rejection> {
    if coloring.is_empty() && !dom.cells.is_empty() {
        return reject(format!("empty colouring payload for {q}"));
    }
    let mut colors = Vec::with_capacity(dom.cells.len());
    for cell in &dom.cells {
        let key: String = cell.iter().map(|&l| DIGITS[l as usize] as char).collect();
        match coloring.get(&key) {
            Some(&c) if c < q.r => colors.push(c),
            Some(&c) => return reject(format!("colour {c} of {key} is not below r = {}", q.r)),
            None => return reject(format!("colouring is partial: no colour for {key}")),
        }
    }
    if coloring.len() != colors.len() {
        return reject(format!(
            "colouring has {} entries but there are {} partitions to colour",
            coloring.len(),
            colors.len()
        ));
    }
    for eta in rgs_list(q.n, q.m) {
        let ranks = dom.coarsening_ranks(&eta);
        let c = colors[ranks[0]];
        if ranks.iter().all(|&p| colors[p] == c) {
            let eta: String = eta.iter().map(|&l| DIGITS[l as usize] as char).collect();
            return reject(format!("{eta} has all coarsenings in colour {c}"));
        }
    }
    Ok(())
}

fn check_upper(
    q: &DrQuery,
    dom: &Domain,
    symmetry_reduced: bool,
    leaves: &[RefutationLeaf],
) -> std::result::Result<(), Rejection> {
    let mut by_prefix: HashMap<Vec<u32>, &RefutationLeaf> = HashMap::with_capacity(leaves.len());
    for leaf in leaves {
        let prefix: Vec<u32> = leaf
            .prefix
            .bytes()
            .map(|b| DIGITS.iter().position(|&d| d == b).map(|p| p as u32))
            .collect::<Option<_>>()
            .ok_or_else(|| Rejection(format!("bad prefix {:?}", leaf.prefix)))?;
        if by_prefix.insert(prefix, leaf).is_some() {
            return reject(format!("prefix {:?} listed twice", leaf.prefix));
        }
    }
    let size = dom.cells.len();
    let mut reached = 0usize;
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(node) = stack.pop() {
        if let Some(leaf) = by_prefix.get(&node) {
            reached += 1;
            let eta = parse_rgs(&leaf.eta, q.n, q.m)?;
            for p in dom.coarsening_ranks(&eta) {
                if p >= node.len() || node[p] != leaf.color {
                    return reject(format!(
                        "leaf {:?}: coarsening rank {p} of {} is not coloured {}",
                        leaf.prefix, leaf.eta, leaf.color
                    ));
                }
            }
            continue;
        }
        if node.len() == size {
            let shown: String = node.iter().map(|&c| DIGITS[c as usize] as char).collect();
            return reject(format!("colouring {shown:?} is not refuted"));
        }
        let top = if symmetry_reduced {
            q.r.min(node.iter().map(|&c| c + 1).max().unwrap_or(0) + 1)
        } else {
            q.r
        };
        if top > 36 {
            return reject("more than 36 colours cannot be encoded".into());
        }
        for c in (0..top).rev() {
            let mut child = node.clone();
            child.push(c);
            stack.push(child);
        }
    }
    if reached != by_prefix.len() {
        return reject(format!("{} leaves are unreachable", by_prefix.len() - reached));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_ramsey::{verify_dr, SearchConfig, Verdict};

    #[test]
    fn own_enumeration_matches_counts() {
        assert_eq!(rgs_list(3, 2).len(), 3);
        assert_eq!(rgs_list(5, 3).len(), 25);
        assert_eq!(rgs_list(0, 0), vec![Vec::<u8>::new()]);
        assert!(rgs_list(2, 3).is_empty());
        let list = rgs_list(5, 2);
        assert!(list.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mutations_are_caught() {
        let q = DrQuery::new(4, 2, 3, 2).unwrap();
        let Verdict::Fails { certificate } = verify_dr(&q, &SearchConfig::default()).unwrap() else {
            panic!("expected a bad colouring");
        };
        check_dr_certificate(&certificate).unwrap();
        let DrCertificate::LowerBound { coloring, .. } = &certificate else { unreachable!() };
        let mut caught = 0;
        for key in coloring.keys() {
            let mut recolored = coloring.clone();
            *recolored.get_mut(key).unwrap() ^= 1;
            let cert = DrCertificate::LowerBound { query: q, coloring: recolored };
            caught += check_dr_certificate(&cert).is_err() as usize;
        }
        assert!(caught > 0);

        let empty = DrCertificate::LowerBound { query: q, coloring: BTreeMap::new() };
        let err = check_dr_certificate(&empty).unwrap_err();
        assert!(err.0.contains("empty"), "{err}");

        let mut partial = coloring.clone();
        partial.pop_first();
        assert!(check_dr_certificate(&DrCertificate::LowerBound { query: q, coloring: partial }).is_err());
    }

    #[test]
    fn refutation_trees_check() {
        let q = DrQuery::new(3, 2, 2, 2).unwrap();
        let Verdict::Holds { certificate: Some(cert) } = verify_dr(&q, &SearchConfig::default()).unwrap() else {
            panic!("m = k always holds");
        };
        check_dr_certificate(&cert).unwrap();
        let DrCertificate::UpperWitnessed { leaves, .. } = &cert else { unreachable!() };
        let mut fewer = leaves.clone();
        fewer.pop();
        let cut = DrCertificate::UpperWitnessed {
            query: q,
            symmetry_reduced: true,
            leaves: fewer,
        };
        assert!(check_dr_certificate(&cut).is_err());
        let widened = DrCertificate::UpperWitnessed {
            query: q,
            symmetry_reduced: false,
            leaves: leaves.clone(),
        };
        assert!(check_dr_certificate(&widened).is_err());
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(serde_json::from_str::<DrCertificate>(&json).unwrap(), cert);
    }
}
