//! Constructive witnesses for the dynamical properties of `X` and of the
//! space of maximal chains, with certificates that can be re-checked from
//! their JSON form alone.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cantor::{homogeneity_witness, ClopenSet, OrderedPartition, PrefixCode, PrefixMap, Word};
use crate::chains::{act_chain, hull_max, in_neighborhood, induced_order_by_inclusion, t_star, ChainApprox};
use crate::{Error, Rejection, Result};

/// Some `g` with `[x] ⊆ g(U)`.
pub fn point_cover_witness(x: &Word, u: &ClopenSet) -> Result<PrefixMap> {
    let first = u
        .first()
        .ok_or_else(|| Error::Precondition("the open set is empty".into()))?;
    if u.contains_cylinder(x) {
        return Ok(PrefixMap::identity());
    }
    if x.is_empty() {
        return Err(Error::Precondition("only the whole space covers the empty word".into()));
    }
    let head = x.truncate(1);
    let from = ClopenSet::cylinder(first);
    let to = ClopenSet::cylinder(head);
    homogeneity_witness(
        &OrderedPartition::new(vec![from.clone(), from.complement()])?,
        &OrderedPartition::new(vec![to.clone(), to.complement()])?,
    )
}

/// Some `g` with `g(F) ⊆ U`, for a proper clopen `F` and nonempty `U`.
pub fn extreme_proximality_witness(f: &ClopenSet, u: &ClopenSet) -> Result<PrefixMap> {
    if f.is_full() {
        return Err(Error::Precondition("the whole space cannot be compressed".into()));
    }
    let first = u
        .first()
        .ok_or_else(|| Error::Precondition("the open set is empty".into()))?;
    if f.is_subset(u) {
        return Ok(PrefixMap::identity());
    }
    // A cylinder A ⊆ U∖F: swapping A with its complement pushes F into A.
    // Otherwise U ⊆ F, and F is sent onto the first cylinder of U.
    let (from, to) = match u.difference(f).first() {
        Some(a) => {
            let a = ClopenSet::cylinder(a);
            (vec![a.complement(), a.clone()], vec![a.clone(), a.complement()])
        }
        None => {
            let a = ClopenSet::cylinder(first);
            (vec![f.clone(), f.complement()], vec![a.clone(), a.complement()])
        }
    };
    homogeneity_witness(&OrderedPartition::new(from)?, &OrderedPartition::new(to)?)
}

/// Some `g` with `g·c ∈ U_α`: the parts in `c`'s induced order are sent onto
/// the parts of `α` in standard order.
pub fn phi_minimality_witness(c: &ChainApprox, alpha: &OrderedPartition) -> Result<PrefixMap> {
    homogeneity_witness(&t_star(c, alpha), alpha)
}

/// A single `g` with `g·c1, g·c2 ∈ U_α`.
///
/// Builds an ordered partition `β` whose induced order is its own order for
/// both chains: part `j` collects the first not-yet-used leaf of each chain,
/// and the last part takes what remains. Then `g` maps `β` onto `α`.
pub fn proximality_witness(c1: &ChainApprox, c2: &ChainApprox, alpha: &OrderedPartition) -> Result<PrefixMap> {
    if c1.same_chain(c2) {
        return phi_minimality_witness(c1, alpha);
    }
    let n = alpha.len();
    let mut code = c1.code().common_refinement(&c2.code());
    while code.len() < 2 * n - 1 {
        code = PrefixCode::new(code.leaves().iter().flat_map(|w| w.children()))?;
    }
    let (r1, r2) = (c1.refine_to(code.leaves()), c2.refine_to(code.leaves()));
    let mut used = std::collections::BTreeSet::new();
    let mut parts = Vec::with_capacity(n);
    for _ in 1..n {
        let mut part = Vec::with_capacity(2);
        for r in [&r1, &r2] {
            let w = *r.order().iter().find(|w| !used.contains(*w)).expect("enough leaves");
            if used.insert(w) {
                part.push(w);
            }
        }
        parts.push(part.into_iter().collect::<ClopenSet>());
    }
    parts.push(code.leaves().iter().filter(|w| !used.contains(*w)).copied().collect());
    homogeneity_witness(&OrderedPartition::new(parts)?, alpha)
}

/// For a chain element `F` with the root leaf `P ⊊ F ⊊ X`: a `g` fixing `P`
/// pointwise with `F` and `gF` incomparable, plus leaves `a ⊆ F∖gF` and
/// `b ⊆ gF∖F`.
pub fn incomparability_witness(c: &ChainApprox, f: &ClopenSet) -> Result<(PrefixMap, Word, Word)> {
    let m = chain_element_size(c, f)?;
    if m == c.len() {
        return Err(Error::Precondition("F is the whole space".into()));
    }
    if m == 1 {
        return Err(Error::Precondition("F is the root leaf and cannot be split".into()));
    }
    let p = ClopenSet::cylinder(c.root());
    let a = f.difference(&p);
    let b = f.complement();
    let g = homogeneity_witness(
        &OrderedPartition::new(vec![p.clone(), a.clone(), b.clone()])?,
        &OrderedPartition::new(vec![p, b.clone(), a.clone()])?,
    )?;
    Ok((g, a.first().unwrap(), b.first().unwrap()))
}

/// Number of leaves of the order-prefix of `c` equal to `f`.
fn chain_element_size(c: &ChainApprox, f: &ClopenSet) -> Result<usize> {
    let m = hull_max(c, f)?.len();
    if c.element(m - 1) != *f {
        return Err(Error::Precondition(format!("{f} is not an element of the chain {c}")));
    }
    Ok(m)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Minimality,
    ExtremeProximality,
    PhiMinimality,
    Proximality,
    Incomparability,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        f.write_str(s.as_str().unwrap())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessInputs {
    Minimality { point: Word, open: ClopenSet },
    ExtremeProximality { closed: ClopenSet, open: ClopenSet },
    PhiMinimality { chain: ChainApprox, partition: OrderedPartition },
    Proximality { chains: [ChainApprox; 2], partition: OrderedPartition },
    Incomparability { chain: ChainApprox, element: ClopenSet },
}

impl WitnessInputs {
    pub fn kind(&self) -> WitnessKind {
        match self {
            WitnessInputs::Minimality { .. } => WitnessKind::Minimality,
            WitnessInputs::ExtremeProximality { .. } => WitnessKind::ExtremeProximality,
            WitnessInputs::PhiMinimality { .. } => WitnessKind::PhiMinimality,
            WitnessInputs::Proximality { .. } => WitnessKind::Proximality,
            WitnessInputs::Incomparability { .. } => WitnessKind::Incomparability,
        }
    }
}

/// The leaves showing `F ⊄ gF` and `gF ⊄ F`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Separation {
    pub a: Word,
    pub b: Word,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessCertificate {
    pub kind: WitnessKind,
    pub inputs: WitnessInputs,
    pub witness: PrefixMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Separation>,
}

/// Runs the constructor matching `inputs` and packages its output.
pub fn certify(inputs: WitnessInputs) -> Result<WitnessCertificate> {
    let mut evidence = None;
    let witness = match &inputs {
        WitnessInputs::Minimality { point, open } => point_cover_witness(point, open)?,
        WitnessInputs::ExtremeProximality { closed, open } => extreme_proximality_witness(closed, open)?,
        WitnessInputs::PhiMinimality { chain, partition } => phi_minimality_witness(chain, partition)?,
        WitnessInputs::Proximality { chains, partition } => proximality_witness(&chains[0], &chains[1], partition)?,
        WitnessInputs::Incomparability { chain, element } => {
            let (g, a, b) = incomparability_witness(chain, element)?;
            evidence = Some(Separation { a, b });
            g
        }
    };
    Ok(WitnessCertificate {
        kind: inputs.kind(),
        inputs,
        witness,
        evidence,
    })
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), Rejection> {
    if ok {
        Ok(())
    } else {
        Err(Rejection(msg()))
    }
}

/// Re-verifies the claim of a certificate from first principles.
pub fn check_witness(cert: &WitnessCertificate) -> std::result::Result<(), Rejection> {
    ensure(cert.kind == cert.inputs.kind(), || {
        format!("kind {} does not match inputs of kind {}", cert.kind, cert.inputs.kind())
    })?;
    ensure(
        cert.evidence.is_some() == (cert.kind == WitnessKind::Incomparability),
        || format!("evidence is {} for kind {}", if cert.evidence.is_some() { "present" } else { "missing" }, cert.kind),
    )?;
    let g = &cert.witness;
    match &cert.inputs {
        WitnessInputs::Minimality { point, open } => {
            ensure(!open.is_empty(), || "the open set is empty".into())?;
            let image = g.apply_clopen(open);
            ensure(image.contains_cylinder(point), || {
                format!("g(U) = {image} does not contain the cylinder of {point}")
            })
        }
        WitnessInputs::ExtremeProximality { closed, open } => {
            ensure(!closed.is_full(), || "F is the whole space".into())?;
            ensure(!open.is_empty(), || "the open set is empty".into())?;
            let image = g.apply_clopen(closed);
            ensure(image.is_subset(open), || format!("g(F) = {image} is not inside {open}"))
        }
        WitnessInputs::PhiMinimality { chain, partition } => {
            let moved = act_chain(g, chain);
            ensure(in_neighborhood(&moved, partition), || {
                format!("g·c = {moved} is not in the neighbourhood of {partition}")
            })
        }
        WitnessInputs::Proximality { chains, partition } => {
            for c in chains {
                let moved = act_chain(g, c);
                let order = induced_order_by_inclusion(&moved, &partition.unordered())
                    .map_err(|e| Rejection(e.to_string()))?;
                ensure(order == *partition, || {
                    format!("g·c = {moved} orders the parts as {order}, not {partition}")
                })?;
            }
            Ok(())
        }
        WitnessInputs::Incomparability { chain, element } => {
            let Separation { a, b } = cert.evidence.as_ref().unwrap();
            let m = hull_max(chain, element).map_err(|e| Rejection(e.to_string()))?.len();
            ensure(chain.element(m - 1) == *element, || format!("{element} is not an element of {chain}"))?;
            ensure(m > 1 && !element.is_full(), || "F must lie strictly between the root leaf and X".into())?;
            ensure(g.fixes_pointwise(&chain.root()), || format!("g moves the root leaf {}", chain.root()))?;
            let image = g.apply_clopen(element);
            ensure(element.contains_cylinder(a) && image.is_disjoint(&ClopenSet::cylinder(*a)), || {
                format!("{a} is not inside F∖gF")
            })?;
            ensure(image.contains_cylinder(b) && element.is_disjoint(&ClopenSet::cylinder(*b)), || {
                format!("{b} is not inside gF∖F")
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn clopen(ws: &[&str]) -> ClopenSet {
        ws.iter().map(|s| w(s)).collect()
    }

    fn op(s: &str) -> OrderedPartition {
        s.parse().unwrap()
    }

    fn lex2() -> ChainApprox {
        ChainApprox::lex(&PrefixCode::uniform(2))
    }

    fn map(s: &str) -> PrefixMap {
        s.parse().unwrap()
    }

    #[test]
    fn point_cover() {
        assert!(point_cover_witness(&w("01"), &clopen(&["0"])).unwrap().is_identity());
        assert!(point_cover_witness(&w("110"), &ClopenSet::full()).unwrap().is_identity());
        let g = point_cover_witness(&w("11"), &clopen(&["0"])).unwrap();
        assert!(g.apply_clopen(&clopen(&["0"])).contains_cylinder(&w("11")));
        assert!(matches!(point_cover_witness(&w("1"), &ClopenSet::empty()), Err(Error::Precondition(_))));
        assert!(point_cover_witness(&Word::EMPTY, &clopen(&["0"])).is_err());
    }

    #[test]
    fn extreme_proximality() {
        let g = extreme_proximality_witness(&clopen(&["0"]), &clopen(&["11"])).unwrap();
        assert_eq!(g, map("0→110,10→111,110→0,111→10"));
        assert_eq!(g.apply_clopen(&clopen(&["0"])), clopen(&["110"]));
        assert!(extreme_proximality_witness(&clopen(&["01"]), &clopen(&["0"])).unwrap().is_identity());
        let g = extreme_proximality_witness(&clopen(&["0", "10"]), &clopen(&["01"])).unwrap();
        assert!(g.apply_clopen(&clopen(&["0", "10"])).is_subset(&clopen(&["01"])));
        // U ⊆ F
        let g = extreme_proximality_witness(&clopen(&["0"]), &clopen(&["01"])).unwrap();
        assert!(g.apply_clopen(&clopen(&["0"])).is_subset(&clopen(&["01"])));
        assert!(matches!(
            extreme_proximality_witness(&ClopenSet::full(), &clopen(&["0"])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn phi_minimality() {
        let c: ChainApprox = "10,00,11,01".parse().unwrap();
        let alpha = op("0|1");
        let g = phi_minimality_witness(&c, &alpha).unwrap();
        assert_eq!(g, map("0→1,1→0"));
        assert!(in_neighborhood(&act_chain(&g, &c), &alpha));
        assert!(phi_minimality_witness(&lex2(), &alpha).unwrap().is_identity());
        assert!(phi_minimality_witness(&c, &OrderedPartition::trivial()).unwrap().is_identity());
    }

    #[test]
    fn proximality() {
        let c1 = lex2();
        let c2: ChainApprox = "11,10,01,00".parse().unwrap();
        let alpha = op("0|1");
        let g = proximality_witness(&c1, &c2, &alpha).unwrap();
        assert_eq!(g, map("00→00,11→01,01→10,10→11"));
        for c in [&c1, &c2] {
            assert!(in_neighborhood(&act_chain(&g, c), &alpha));
        }
        assert_eq!(
            proximality_witness(&c2, &c2, &alpha).unwrap(),
            phi_minimality_witness(&c2, &alpha).unwrap()
        );
        // Needs refinement: three parts, two leaves.
        let (d1, d2): (ChainApprox, ChainApprox) = ("0,1".parse().unwrap(), "1,0".parse().unwrap());
        let alpha = op("1|00|01");
        let g = proximality_witness(&d1, &d2, &alpha).unwrap();
        assert!(in_neighborhood(&act_chain(&g, &d1), &alpha));
        assert!(in_neighborhood(&act_chain(&g, &d2), &alpha));
    }

    #[test]
    fn incomparability() {
        let (g, a, b) = incomparability_witness(&lex2(), &clopen(&["0"])).unwrap();
        assert_eq!(g, map("00→00,01→1,1→01"));
        assert_eq!((a, b), (w("01"), w("1")));
        assert!(g.fixes_pointwise(&w("00")));
        assert!(matches!(incomparability_witness(&lex2(), &ClopenSet::full()), Err(Error::Precondition(_))));
        assert!(matches!(incomparability_witness(&lex2(), &clopen(&["00"])), Err(Error::Precondition(_))));
        assert!(incomparability_witness(&lex2(), &clopen(&["00", "10"])).is_err());
    }

    fn all_inputs() -> Vec<WitnessInputs> {
        let c2: ChainApprox = "11,10,01,00".parse().unwrap();
        vec![
            WitnessInputs::Minimality { point: w("11"), open: clopen(&["0"]) },
            WitnessInputs::ExtremeProximality { closed: clopen(&["0"]), open: clopen(&["11"]) },
            WitnessInputs::PhiMinimality { chain: c2.clone(), partition: op("0|1") },
            WitnessInputs::Proximality { chains: [lex2(), c2], partition: op("0|1") },
            WitnessInputs::Incomparability { chain: lex2(), element: clopen(&["0"]) },
        ]
    }

    #[test]
    fn certificates_round_trip_and_check() {
        for inputs in all_inputs() {
            let cert = certify(inputs).unwrap();
            check_witness(&cert).unwrap();
            let json = serde_json::to_string(&cert).unwrap();
            let back: WitnessCertificate = serde_json::from_str(&json).unwrap();
            assert_eq!(back, cert);
            check_witness(&back).unwrap();
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        // Some swaps of two range leaves still give a valid witness; at least
        // one must be caught.
        for inputs in all_inputs() {
            let cert = certify(inputs).unwrap();
            let pairs = cert.witness.pairs().to_vec();
            let mut caught = 0;
            for i in 0..pairs.len() {
                for j in i + 1..pairs.len() {
                    let mut swapped = pairs.clone();
                    let (ri, rj) = (swapped[i].1, swapped[j].1);
                    swapped[i].1 = rj;
                    swapped[j].1 = ri;
                    let tampered = WitnessCertificate {
                        witness: PrefixMap::from_pairs(swapped).unwrap(),
                        ..cert.clone()
                    };
                    caught += check_witness(&tampered).is_err() as usize;
                }
            }
            assert!(caught > 0, "{:?} survived every tampering", cert.kind);
        }
    }

    #[test]
    fn mismatched_certificates_fail() {
        let mut cert = certify(all_inputs().remove(0)).unwrap();
        cert.kind = WitnessKind::Proximality;
        let err = check_witness(&cert).unwrap_err();
        assert!(err.0.contains("does not match"), "{err}");
        let mut cert = certify(all_inputs().remove(4)).unwrap();
        cert.evidence = None;
        assert!(check_witness(&cert).is_err());
    }
}
