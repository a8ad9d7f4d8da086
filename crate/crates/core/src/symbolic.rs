//! The symbolic systems `Ω_k = {±1}^{D_k}` and `Ω̃_k = (T^k)^{D̃_k}`.
//!
//! Configurations are intensional: a [`SymbolConfig`] is a rule evaluated on
//! demand (with a memo cache), because `D_k` is infinite. The plain action
//! `(g·ω)(β) = ω(g⁻¹β)` and the twisted action `•_c` on `Ω̃_k` are kept as
//! separate operations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::cantor::{OrderedPartition, Permutation, PrefixMap, UnorderedPartition};
use crate::chains::{act_chain, induced_order, theta, ChainApprox};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = Error;

    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("sign must be +1 or -1, got {v}"))),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("bad sign {other:?}"))),
        }
    }
}

/// An element of `T^k = {±1}^{S_k}`, stored in lexicographic rank order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    k: usize,
    values: Vec<Sign>,
}

impl Table {
    pub fn from_fn(k: usize, mut f: impl FnMut(&Permutation) -> Sign) -> Table {
        Table {
            k,
            values: Permutation::all(k).map(|p| f(&p)).collect(),
        }
    }

    pub fn constant(k: usize, s: Sign) -> Table {
        Table::from_fn(k, |_| s)
    }

    /// The table whose value at rank `r` is `-1` iff bit `r` of `index` is set.
    pub fn from_index(k: usize, index: u64) -> Table {
        let n = crate::cantor::factorial(k);
        assert!(n <= 64, "tables beyond k = 5 have no u64 index");
        Table {
            k,
            values: (0..n)
                .map(|r| if index >> r & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        }
    }

    pub fn index(&self) -> u64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Minus)
            .map(|(r, _)| 1u64 << r)
            .sum()
    }

    /// All `2^{k!}` tables; only sensible for `k ≤ 3`.
    pub fn all(k: usize) -> impl Iterator<Item = Table> {
        let n = crate::cantor::factorial(k);
        assert!(n < 32, "too many tables to list");
        (0..1u64 << n).map(move |i| Table::from_index(k, i))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, sigma: &Permutation) -> Sign {
        assert_eq!(sigma.k(), self.k, "table size mismatch");
        self.values[sigma.rank()]
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    fn to_map(&self) -> BTreeMap<String, i8> {
        Permutation::all(self.k)
            .zip(&self.values)
            .map(|(p, s)| (p.to_string(), s.value()))
            .collect()
    }

    fn from_entries(k: usize, entries: impl IntoIterator<Item = (Permutation, Sign)>) -> Result<Table> {
        let mut values = vec![None; crate::cantor::factorial(k)];
        for (p, s) in entries {
            if p.k() != k {
                return Err(Error::Parse(format!("entry {p} does not permute {k} points")));
            }
            if values[p.rank()].replace(s).is_some() {
                return Err(Error::Parse(format!("entry {p} given twice")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(r, v)| v.ok_or_else(|| Error::Parse(format!("no value for {}", Permutation::unrank(k, r)))))
            .collect::<Result<_>>()?;
        Ok(Table { k, values })
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.to_map().into_iter().map(|(p, s)| format!("{p}:{s:+}")).collect();
        write!(f, "{}", entries.join(","))
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Table({self})")
    }
}

impl FromStr for Table {
    type Err = Error;

    /// `key:sign` pairs separated by commas. Keys are one-line permutations,
    /// or `id`, or `swap` (two points only). The table must be total.
    fn from_str(s: &str) -> Result<Table> {
        let raw: Vec<(&str, Sign)> = s
            .split(',')
            .map(|e| {
                let (key, sign) = e
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected key:sign, got {e:?}")))?;
                Ok((key.trim(), sign.parse()?))
            })
            .collect::<Result<_>>()?;
        let k = raw
            .iter()
            .find_map(|(key, _)| match *key {
                "id" => None,
                "swap" => Some(Ok(2)),
                one_line => Some(one_line.parse::<Permutation>().map(|p| p.k())),
            })
            .ok_or_else(|| Error::Parse("cannot infer the number of points from `id` alone".into()))??;
        let entries = raw
            .into_iter()
            .map(|(key, s)| {
                let p = match key {
                    "id" => Permutation::identity(k),
                    "swap" if k == 2 => Permutation::transposition(2, 0, 1),
                    "swap" => return Err(Error::Parse("`swap` names a permutation of two points".into())),
                    one_line => one_line.parse()?,
                };
                Ok((p, s))
            })
            .collect::<Result<Vec<_>>>()?;
        Table::from_entries(k, entries)
    }
}

impl Serialize for Table {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Table {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let map = BTreeMap::<String, Sign>::deserialize(d)?;
        let entries = map
            .into_iter()
            .map(|(key, s)| key.parse::<Permutation>().map(|p| (p, s)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let k = entries
            .first()
            .map(|(p, _)| p.k())
            .ok_or_else(|| D::Error::custom("empty table"))?;
        Table::from_entries(k, entries).map_err(D::Error::custom)
    }
}

type SignFn = dyn Fn(&OrderedPartition) -> Sign + Send + Sync;

enum Rule {
    PhiT { table: Table, chain: ChainApprox },
    Translate { g: PrefixMap, g_inv: PrefixMap, inner: SymbolConfig },
    Explicit { values: BTreeMap<OrderedPartition, Sign>, default: Sign },
    Custom { label: String, f: Box<SignFn> },
}

/// An element `ω ∈ Ω_k`, given as a rule on ordered partitions with `k` parts.
#[derive(Clone)]
pub struct SymbolConfig {
    k: usize,
    rule: Arc<Rule>,
    memo: Arc<Mutex<HashMap<OrderedPartition, Sign>>>,
}

impl SymbolConfig {
    fn with_rule(k: usize, rule: Rule) -> Self {
        Self {
            k,
            rule: Arc::new(rule),
            memo: Arc::default(),
        }
    }

    /// `φ_T(c)`.
    pub fn phi_t(table: Table, chain: ChainApprox) -> Self {
        Self::with_rule(table.k(), Rule::PhiT { table, chain })
    }

    /// Listed values on finitely many partitions, `default` elsewhere.
    pub fn explicit(k: usize, values: BTreeMap<OrderedPartition, Sign>, default: Sign) -> Self {
        Self::with_rule(k, Rule::Explicit { values, default })
    }

    pub fn from_fn(k: usize, label: impl Into<String>, f: impl Fn(&OrderedPartition) -> Sign + Send + Sync + 'static) -> Self {
        Self::with_rule(
            k,
            Rule::Custom {
                label: label.into(),
                f: Box::new(f),
            },
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eval(&self, beta: &OrderedPartition) -> Result<Sign> {
        if beta.len() != self.k {
            return Err(Error::Contract(format!(
                "configuration on {}-part partitions evaluated at {} parts",
                self.k,
                beta.len()
            )));
        }
        if let Some(&s) = self.memo.lock().unwrap().get(beta) {
            return Ok(s);
        }
        let s = match &*self.rule {
            Rule::PhiT { table, chain } => table.get(&theta(chain, beta)),
            Rule::Translate { g_inv, inner, .. } => inner.eval(&beta.apply(g_inv))?,
            Rule::Explicit { values, default } => values.get(beta).copied().unwrap_or(*default),
            Rule::Custom { f, .. } => f(beta),
        };
        self.memo.lock().unwrap().insert(beta.clone(), s);
        Ok(s)
    }

    /// Evaluations as `(partition, value)` pairs, the serialized form of a
    /// sampled configuration.
    pub fn sample(&self, betas: &[OrderedPartition]) -> Result<Vec<(OrderedPartition, Sign)>> {
        betas.iter().map(|b| Ok((b.clone(), self.eval(b)?))).collect()
    }

    pub fn describe(&self) -> String {
        match &*self.rule {
            Rule::PhiT { table, chain } => format!("phi_T({table}; {chain})"),
            Rule::Translate { g, inner, .. } => format!("[{g}]·{}", inner.describe()),
            Rule::Explicit { values, default } => {
                format!("explicit({} entries, default {default})", values.len())
            }
            Rule::Custom { label, .. } => label.clone(),
        }
    }
}

impl fmt::Debug for SymbolConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolConfig(k={}, {})", self.k, self.describe())
    }
}

/// `g·ω`, evaluated lazily as `ω(g⁻¹β)`.
pub fn act_omega(g: &PrefixMap, omega: &SymbolConfig) -> SymbolConfig {
    SymbolConfig::with_rule(
        omega.k,
        Rule::Translate {
            g: g.clone(),
            g_inv: g.inverse(),
            inner: omega.clone(),
        },
    )
}

type TableFn = dyn Fn(&UnorderedPartition, &Permutation) -> Result<Sign> + Send + Sync;

/// An element `ω̃ ∈ Ω̃_k`: a table for every unordered partition with `k` parts.
#[derive(Clone)]
pub struct TildeConfig {
    k: usize,
    label: String,
    f: Arc<TableFn>,
}

impl TildeConfig {
    pub fn from_fn(
        k: usize,
        label: impl Into<String>,
        f: impl Fn(&UnorderedPartition, &Permutation) -> Result<Sign> + Send + Sync + 'static,
    ) -> Self {
        Self {
            k,
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn describe(&self) -> &str {
        &self.label
    }

    /// `ω̃(β̃)(σ)`.
    pub fn eval(&self, beta: &UnorderedPartition, sigma: &Permutation) -> Result<Sign> {
        if beta.len() != self.k || sigma.k() != self.k {
            return Err(Error::Contract(format!(
                "configuration on {}-part partitions evaluated at {} parts and a permutation of {} points",
                self.k,
                beta.len(),
                sigma.k()
            )));
        }
        (self.f)(beta, sigma)
    }

    /// The whole table `ω̃(β̃)`.
    pub fn table(&self, beta: &UnorderedPartition) -> Result<Table> {
        let mut err = None;
        let t = Table::from_fn(self.k, |s| match self.eval(beta, s) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                Sign::Plus
            }
        });
        err.map_or(Ok(t), Err)
    }
}

impl fmt::Debug for TildeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TildeConfig(k={}, {})", self.k, self.label)
    }
}

/// `π_c(ω)`: `ω̃(β̃)(σ) = ω(σ⁻¹ t*_c(β̃))`.
pub fn tilde(omega: &SymbolConfig, c: &ChainApprox) -> TildeConfig {
    let (omega, c) = (omega.clone(), c.clone());
    let label = format!("pi[{c}]({})", omega.describe());
    TildeConfig::from_fn(omega.k, label, move |beta, sigma| {
        omega.eval(&induced_order(&c, beta).permute(&sigma.inverse())?)
    })
}

/// `ρ_c(g, β̃)`, the permutation with `ρ⁻¹·t*_c(g⁻¹β̃) = g⁻¹·t*_c(β̃)`.
pub fn rho(c: &ChainApprox, g: &PrefixMap, beta: &UnorderedPartition) -> Permutation {
    let g_inv = g.inverse();
    let a = induced_order(c, &beta.apply(&g_inv));
    let b = induced_order(c, beta).apply(&g_inv);
    a.permutation_to(&b)
        .expect("both sides order the same unordered partition")
        .inverse()
}

/// `(g •_c ω̃)(β̃)(σ) = ω̃(g⁻¹β̃)(ρ_c(g,β̃)·σ)`.
pub fn bullet_eval(
    c: &ChainApprox,
    g: &PrefixMap,
    omega: &TildeConfig,
    beta: &UnorderedPartition,
    sigma: &Permutation,
) -> Result<Sign> {
    let r = rho(c, g, beta);
    if r.k() != sigma.k() {
        return Err(Error::Contract(format!(
            "permutation of {} points at a {}-part partition",
            sigma.k(),
            r.k()
        )));
    }
    omega.eval(&beta.apply(&g.inverse()), &(&r * sigma))
}

/// `φ_T(c)(β) = T(θ_β(c))`.
pub fn phi_t(table: &Table, c: &ChainApprox, beta: &OrderedPartition) -> Result<Sign> {
    if beta.len() != table.k() {
        return Err(Error::Contract(format!(
            "table on {} points evaluated at {} parts",
            table.k(),
            beta.len()
        )));
    }
    Ok(table.get(&theta(c, beta)))
}

/// `g·φ_T(c) = φ_T(gc)`, computed on the right-hand side.
pub fn act_phi_t(g: &PrefixMap, table: &Table, c: &ChainApprox) -> SymbolConfig {
    SymbolConfig::phi_t(table.clone(), act_chain(g, c))
}
