//! From a configuration `ω ∈ Ω_k` to a colouring of `Π̃(N,k)` by tables, and
//! back to a single table when a monochromatic `η` exists.

use serde::Serialize;

use super::find_monochromatic;
use crate::cantor::{homogeneity_witness, ClopenSet, OrderedPartition, Permutation, PrefixMap};
use crate::chains::{t_star, ChainApprox};
use crate::partitions::{enumerate_partitions, Coloring, SetPartition};
use crate::symbolic::{bullet_eval, tilde, SymbolConfig, Table};
use crate::{Error, Result};

/// A colouring whose colours stand for tables: colour `i` is `palette[i]`,
/// numbered by first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableColoring {
    pub coloring: Coloring,
    pub palette: Vec<Table>,
}

impl TableColoring {
    pub fn table_of(&self, gamma: &SetPartition) -> Result<&Table> {
        Ok(&self.palette[self.coloring.color_of(gamma)? as usize])
    }
}

/// `γ ↦ ω̃^{c0}(t̃(β_γ))` on `Π̃(N,k)`, `N = |β|`. Requires `t*_{c0}(β) = β`.
pub fn factor_coloring(omega: &SymbolConfig, c0: &ChainApprox, beta: &OrderedPartition) -> Result<TableColoring> {
    if t_star(c0, beta) != *beta {
        return Err(Error::Contract(format!("{beta} is not in the order induced by {c0}")));
    }
    let wt = tilde(omega, c0);
    let mut palette: Vec<Table> = Vec::new();
    let mut colors = Vec::new();
    for gamma in enumerate_partitions(beta.len(), omega.k(), true) {
        let t = wt.table(&beta.amalgamate(&gamma)?.unordered())?;
        let c = match palette.iter().position(|p| *p == t) {
            Some(c) => c,
            None => {
                palette.push(t);
                palette.len() - 1
            }
        };
        colors.push(c as u32);
    }
    Ok(TableColoring {
        coloring: Coloring::new(beta.len(), omega.k(), colors)?,
        palette,
    })
}

fn split(part: &ClopenSet) -> (ClopenSet, ClopenSet) {
    let cyl = part.cylinders();
    match cyl.split_last() {
        Some((last, rest)) if !rest.is_empty() => (rest.iter().copied().collect(), ClopenSet::cylinder(*last)),
        Some((only, _)) => {
            let [a, b] = only.children();
            (ClopenSet::cylinder(a), ClopenSet::cylinder(b))
        }
        None => unreachable!("parts are nonempty"),
    }
}

/// An `n`-part refinement of `alpha` listed in the order induced by `c0`.
/// The last part is split repeatedly.
pub fn refine_sorted(c0: &ChainApprox, alpha: &OrderedPartition, n: usize) -> Result<OrderedPartition> {
    if n < alpha.len() {
        return Err(Error::Precondition(format!("cannot refine {} parts into {n}", alpha.len())));
    }
    let mut parts = t_star(c0, alpha).parts().to_vec();
    while parts.len() < n {
        let (a, b) = split(&parts.pop().expect("partitions are nonempty"));
        parts.push(a);
        parts.push(b);
    }
    Ok(t_star(c0, &OrderedPartition::new(parts)?))
}

/// A recovered table with the data that justifies it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub table: Table,
    /// `g_α` with `g_α⁻¹ t*_{c0}(α) = β_η`.
    pub g: PrefixMap,
    pub eta: SetPartition,
    pub beta: OrderedPartition,
}

/// Looks for `T_α`: refines `alpha` to `n` sorted parts `β`, colours
/// `Π̃(n,k)` through `ω`, and asks for a monochromatic `η ∈ Π(n,|α|)`.
/// Returns `None` when there is none; a found table is re-verified through
/// the twisted action before it is returned.
pub fn extract_table(
    omega: &SymbolConfig,
    c0: &ChainApprox,
    alpha: &OrderedPartition,
    n: usize,
) -> Result<Option<Extraction>> {
    let (m, k) = (alpha.len(), omega.k());
    if k > m {
        return Err(Error::Precondition(format!("{m} parts cannot be coarsened into {k}")));
    }
    let beta = refine_sorted(c0, alpha, n)?;
    let tc = factor_coloring(omega, c0, &beta)?;
    let Some((eta, color)) = find_monochromatic(&tc.coloring, m)? else {
        return Ok(None);
    };
    let table = tc.palette[color as usize].clone();
    let sorted = t_star(c0, alpha);
    let g = homogeneity_witness(&beta.amalgamate(&eta)?, &sorted)?;

    let wt = tilde(omega, c0);
    for tau in enumerate_partitions(m, k, true) {
        let target = sorted.amalgamate(&tau)?.unordered();
        for sigma in Permutation::all(k) {
            if bullet_eval(c0, &g, &wt, &target, &sigma)? != table.get(&sigma) {
                return Err(Error::Invalid(format!(
                    "translated configuration disagrees with the extracted table at {target}, {sigma}"
                )));
            }
        }
    }
    Ok(Some(Extraction { table, g, eta, beta }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::PrefixCode;
    use crate::symbolic::Sign;

    fn op(s: &str) -> OrderedPartition {
        s.parse().unwrap()
    }

    fn chain(s: &str) -> ChainApprox {
        s.parse().unwrap()
    }

    #[test]
    fn phi_t_colours_constantly() {
        let c0 = chain("10,00,11,01");
        for t in Table::all(2) {
            let omega = SymbolConfig::phi_t(t.clone(), c0.clone());
            for n in 2..=4 {
                let beta = refine_sorted(&c0, &op("0|1"), n).unwrap();
                let tc = factor_coloring(&omega, &c0, &beta).unwrap();
                assert_eq!(tc.palette, vec![t.clone()]);
                assert_eq!(tc.coloring.palette_size(), 1);
            }
        }
    }

    #[test]
    fn unsorted_beta_is_rejected() {
        let c0 = ChainApprox::lex(&PrefixCode::uniform(1));
        let omega = SymbolConfig::phi_t(Table::constant(2, Sign::Plus), c0.clone());
        assert!(matches!(factor_coloring(&omega, &c0, &op("1|0")), Err(Error::Contract(_))));
    }

    #[test]
    fn single_point_domain() {
        let c0 = ChainApprox::lex(&PrefixCode::uniform(2));
        let omega = SymbolConfig::phi_t("12:+1,21:-1".parse().unwrap(), chain("11,00,10,01"));
        let beta = op("0|1");
        let tc = factor_coloring(&omega, &c0, &beta).unwrap();
        assert_eq!(tc.coloring.colors().len(), 1);
        assert_eq!(tc.palette[0], tilde(&omega, &c0).table(&beta.unordered()).unwrap());
    }

    #[test]
    fn round_trip_recovers_the_table() {
        let c0 = chain("10,00,11,01");
        for t in Table::all(2) {
            let omega = SymbolConfig::phi_t(t.clone(), c0.clone());
            for (alpha, n) in [("0|1", 2), ("00|01|1", 3), ("1|01|00", 4)] {
                let got = extract_table(&omega, &c0, &op(alpha), n).unwrap().unwrap();
                assert_eq!(got.table, t);
            }
        }
    }

    #[test]
    fn adversarial_configuration_yields_nothing() {
        let c0 = ChainApprox::lex(&PrefixCode::uniform(2));
        let alpha = op("00|01|1");
        let beta = refine_sorted(&c0, &alpha, 3).unwrap();
        let gamma = enumerate_partitions(3, 2, true).next().unwrap();
        let marked = beta.amalgamate(&gamma).unwrap().unordered();
        let omega = SymbolConfig::from_fn(2, "minus on one partition", move |b| {
            if b.unordered() == marked { Sign::Minus } else { Sign::Plus }
        });
        assert_eq!(extract_table(&omega, &c0, &alpha, 3).unwrap(), None);
    }
}
