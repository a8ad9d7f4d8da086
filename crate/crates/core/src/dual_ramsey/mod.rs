//! Dual Ramsey search over colourings of `Π̃(N,k)`, certificates for its
//! answers, and the table-extraction pipeline that runs on top of it.
//!
//! For `η ∈ Π(N,m)` the *coarsenings* of `η` are the `k`-block partitions whose
//! blocks are unions of blocks of `η`. A colouring is *bad* for `(m, r)` when
//! no `η` has all of its coarsenings in one colour; `DR(k,m,r)` is the least
//! `N` for which no `r`-colouring is bad.

mod certificate;
mod factor;
mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::partitions::{coarsenings, enumerate_partitions, Coloring, PartitionIndex, SetPartition};
use crate::{Error, Result};

pub use certificate::{check_dr_certificate, DrCertificate, RefutationLeaf};
pub use factor::{extract_table, factor_coloring, refine_sorted, Extraction, TableColoring};
pub use search::{
    brute_force_bad_coloring, dr_number, dr_number_by, search_bad_coloring, verify_dr, DrNumber, SearchConfig,
    SearchOutcome, Verdict,
};

/// An instance `(N, k, m, r)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrQuery {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub r: u32,
}

impl DrQuery {
    pub fn new(n: usize, k: usize, m: usize, r: u32) -> Result<Self> {
        let q = Self { n, k, m, r };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.r == 0 {
            return Err(Error::Precondition(format!("{self}: k and r must be positive")));
        }
        if self.k > self.m {
            return Err(Error::Precondition(format!("{self}: k must not exceed m")));
        }
        Ok(())
    }
}

impl fmt::Display for DrQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(N={}, k={}, m={}, r={})", self.n, self.k, self.m, self.r)
    }
}

/// The least `η ∈ Π(N,m)` (by encoding) whose coarsenings all share one colour,
/// together with that colour.
pub fn find_monochromatic(col: &Coloring, m: usize) -> Result<Option<(SetPartition, u32)>> {
    if m < col.k() {
        return Err(Error::Precondition(format!("m = {m} is below k = {}", col.k())));
    }
    let index = PartitionIndex::new(col.n(), col.k());
    for eta in enumerate_partitions(col.n(), m, true) {
        let mut colors = coarsenings(&eta, col.k())?
            .into_iter()
            .map(|p| col.colors()[index.rank(&p).expect("coarsening has k blocks")]);
        let first = colors.next().expect("every partition has a coarsening");
        if colors.all(|c| c == first) {
            return Ok(Some((eta, first)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monochromatic_examples() {
        let (eta, c) = find_monochromatic(&Coloring::constant(3, 2, 5), 3).unwrap().unwrap();
        assert_eq!(eta.to_rgs(), "012");
        assert_eq!(c, 5);

        let idx = PartitionIndex::new(3, 2);
        let special = SetPartition::from_rgs("011").unwrap();
        let col = Coloring::from_fn(3, 2, |p| u32::from(idx.rank(p) == idx.rank(&special)));
        assert_eq!(find_monochromatic(&col, 3).unwrap(), None);

        let col = Coloring::from_fn(4, 2, |p| p.to_rgs().len() as u32 % 2);
        let (eta, _) = find_monochromatic(&col, 2).unwrap().unwrap();
        assert_eq!(eta, enumerate_partitions(4, 2, true).next().unwrap());
        assert!(find_monochromatic(&col, 1).is_err());
    }
}
