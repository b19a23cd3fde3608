//! W-numbers `W^i_g(η_{a_1} ⋯ η_{a_n})` by the cut-and-join recursion.
//!
//! For a key with exponent `e = 2g + n - 2 - i > 0` and `N = Σ a_j`:
//!
//! ```text
//! N (2g+n-1) W^i_g(a)
//!     = Σ_{k<l} (a_k + a_l) W^i_g(a with a_k, a_l joined)
//!     + Σ_k (a_k^3 - a_k)/12 · W^{i-1}_{g-1}(a)
//!     + 1/2 Σ_k Σ_{a'+a''=a_k} a' a'' · W^i_{g-1}(a with a_k split into a', a'')
//! ```
//!
//! with base values `W^1_1(η_a) = (a^2-1)/24`, `W^0_0(η_a η_b) = 1`, and `W = 0`
//! whenever `i < 0`, `i > g` or `g < 0`. The `λ_g` recursion is the `i = g`
//! case: the split family then always lands on `i > g - 1` and vanishes.
//!
//! [`WEngine`] is single-threaded: evaluation takes `&mut self` and owns its
//! [`MemoCache`]. Share results across threads by cloning the cache.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::arith::ExactRational;
use crate::error::{Error, Result};

/// Sorted, nonempty multiset of positive weights.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EtaMultiset(Vec<u32>);

impl EtaMultiset {
    pub fn new(weights: &[i64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        let mut out = Vec::with_capacity(weights.len());
        for &w in weights {
            if w < 1 || w > u32::MAX as i64 {
                return Err(Error::NonPositiveWeight(w));
            }
            out.push(w as u32);
        }
        out.sort_unstable();
        Ok(Self(out))
    }

    fn from_sorted_unchecked(mut weights: Vec<u32>) -> Self {
        weights.sort_unstable();
        Self(weights)
    }

    /// `n` copies of weight 1.
    pub fn ones(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyWeights);
        }
        Ok(Self(vec![1; n]))
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    /// This multiset with `extra` copies of weight 1 added.
    pub fn with_ones(&self, extra: usize) -> Self {
        let mut w = vec![1; extra];
        w.extend_from_slice(&self.0);
        Self::from_sorted_unchecked(w)
    }
}

impl fmt::Display for EtaMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Canonical identifier of `W^i_g(∏ η_{a_j})`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WKey {
    pub g: u32,
    pub i: i32,
    pub etas: EtaMultiset,
}

impl fmt::Display for WKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W^{}_{}({})", self.i, self.g, self.etas)
    }
}

/// Sort the weights and validate `(g, i)` into a key.
pub fn canonicalize(weights: &[i64], g: i64, i: i64) -> Result<WKey> {
    let etas = EtaMultiset::new(weights)?;
    if g < 0 {
        return Err(Error::NegativeGenus(g));
    }
    let g = u32::try_from(g).map_err(|_| Error::InvalidQuery(format!("genus {g} too large")))?;
    let i = i32::try_from(i)
        .map_err(|_| Error::InvalidQuery(format!("lambda index {i} out of range")))?;
    Ok(WKey { g, i, etas })
}

impl WKey {
    pub fn new(g: u32, i: i32, etas: EtaMultiset) -> Self {
        Self { g, i, etas }
    }

    /// Power of `ψ_1`: `2g + n - 2 - i`.
    pub fn exponent(&self) -> i64 {
        2 * self.g as i64 + self.etas.len() as i64 - 2 - self.i as i64
    }

    /// Annihilated by the zero convention (`i < 0` or `i > g`).
    pub fn is_vanishing(&self) -> bool {
        self.i < 0 || self.i as i64 > self.g as i64
    }

    /// Value of one of the two closed-form initial cases, if this is one.
    pub fn base_value(&self) -> Option<ExactRational> {
        match (self.g, self.i, self.etas.weights()) {
            (1, 1, &[a]) => {
                let a = a as i64;
                Some(ExactRational::frac(a * a - 1, 24))
            }
            (0, 0, &[_, _]) => Some(ExactRational::one()),
            _ => None,
        }
    }
}

/// Build a child key, or `None` when the zero convention kills it.
fn child_key(g: i64, i: i64, weights: Vec<u32>) -> Option<WKey> {
    if g < 0 || i < 0 || i > g {
        return None;
    }
    Some(WKey {
        g: g as u32,
        i: i as i32,
        etas: EtaMultiset::from_sorted_unchecked(weights),
    })
}

/// One step of the recursion: children of `key` with coefficients already
/// divided by `N (2g+n-1)`. Equal children are merged; zero coefficients and
/// children annihilated by the zero convention are dropped.
pub fn recursion_terms(key: &WKey) -> Result<Vec<(ExactRational, WKey)>> {
    if key.base_value().is_some() || key.exponent() <= 0 {
        return Err(Error::NotExpandable(key.to_string()));
    }
    let a = key.etas.weights();
    let n = a.len();
    let (g, i) = (key.g as i64, key.i as i64);
    let mut acc: BTreeMap<WKey, ExactRational> = BTreeMap::new();
    let mut push = |coeff: ExactRational, child: Option<WKey>| {
        if let Some(child) = child {
            if !coeff.is_zero() {
                *acc.entry(child).or_insert_with(ExactRational::zero) += coeff;
            }
        }
    };

    for k in 0..n {
        for l in k + 1..n {
            let mut w: Vec<u32> = a
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k && j != l)
                .map(|(_, &x)| x)
                .collect();
            w.push(a[k] + a[l]);
            push(ExactRational::from(a[k] + a[l]), child_key(g, i, w));
        }
    }

    for &ak in a {
        let ak = ak as i64;
        push(
            ExactRational::frac(ak * ak * ak - ak, 12),
            child_key(g - 1, i - 1, a.to_vec()),
        );
    }

    for k in 0..n {
        let ak = a[k];
        for part in 1..ak {
            let mut w: Vec<u32> = a.to_vec();
            w[k] = part;
            w.push(ak - part);
            push(
                ExactRational::frac(part as i64 * (ak - part) as i64, 2),
                child_key(g - 1, i, w),
            );
        }
    }

    let prefactor = ExactRational::from(key.etas.total() * (2 * key.g as u64 + n as u64 - 1));
    let total = key.etas.total();
    acc.into_iter()
        .map(|(child, c)| {
            if child.etas.total() != total {
                return Err(Error::WeightNotConserved {
                    parent: key.to_string(),
                    child: child.to_string(),
                });
            }
            Ok((c.checked_div(&prefactor)?, child))
        })
        .collect()
}

/// Insert-once map from [`WKey`] to value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MemoCache {
    map: HashMap<WKey, ExactRational>,
}

impl MemoCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, key: &WKey) -> Option<&ExactRational> {
        self.map.get(key)
    }

    /// Bind `key`; rebinding to a different value is an error.
    pub fn insert(&mut self, key: WKey, value: ExactRational) -> Result<()> {
        match self.map.get(&key) {
            Some(old) if *old != value => Err(Error::CacheConflict {
                key: key.to_string(),
                old: old.to_string(),
                new: value.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                self.map.insert(key, value);
                Ok(())
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WKey, &ExactRational)> {
        self.map.iter()
    }

    /// Merge another cache under insert-once rules.
    pub fn merge(&mut self, other: MemoCache) -> Result<()> {
        for (k, v) in other.map {
            self.insert(k, v)?;
        }
        Ok(())
    }

    /// One `g<TAB>i<TAB>a1,..,an<TAB>p/q` line per entry, sorted by key.
    pub fn to_text(&self) -> String {
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        entries
            .into_iter()
            .map(|(k, v)| format!("{}\t{}\t{}\t{}\n", k.g, k.i, k.etas, v))
            .collect()
    }

    /// Parse the line format. A line is accepted only if re-rendering the
    /// parsed entry reproduces it byte for byte.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cache = Self::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let bad = |reason: &str| Error::CacheParse {
                line: lineno,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [g, i, w, v] = fields[..] else {
                return Err(bad("expected four tab-separated fields"));
            };
            let g: u32 = g.parse().map_err(|_| bad("bad genus"))?;
            let i: i32 = i.parse().map_err(|_| bad("bad lambda index"))?;
            let weights = w
                .split(',')
                .map(|s| s.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad("bad weight list"))?;
            let key =
                canonicalize(&weights, g as i64, i as i64).map_err(|e| bad(&e.to_string()))?;
            let value: ExactRational = v.parse().map_err(|_| bad("bad rational"))?;
            let rendered = format!("{}\t{}\t{}\t{}", key.g, key.i, key.etas, value);
            if rendered != line {
                return Err(bad("entry is not in canonical form"));
            }
            cache.insert(key, value).map_err(|e| bad(&e.to_string()))?;
        }
        Ok(cache)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&fs::read_to_string(path)?)
    }
}

/// Counters recorded while evaluating.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Keys expanded through the recursion.
    pub expansions: u64,
    /// Child keys whose total weight was compared with the parent's.
    pub conservation_checks: u64,
}

/// Memoized evaluator for W-numbers.
#[derive(Clone, Debug, Default)]
pub struct WEngine {
    cache: MemoCache,
    stats: EngineStats,
}

impl WEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(cache: MemoCache) -> Self {
        Self {
            cache,
            stats: EngineStats::default(),
        }
    }

    pub fn cache(&self) -> &MemoCache {
        &self.cache
    }

    pub fn into_cache(self) -> MemoCache {
        self.cache
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    /// Exact `W^i_g(∏ η_{a_j})` for a canonical key.
    pub fn w_value(&mut self, key: &WKey) -> Result<ExactRational> {
        if key.is_vanishing() {
            return Ok(ExactRational::zero());
        }
        if let Some(v) = self.cache.get(key) {
            return Ok(v.clone());
        }
        if let Some(v) = key.base_value() {
            return Ok(v);
        }
        let e = key.exponent();
        if e <= 0 {
            return Err(Error::UndefinedExponent {
                key: key.to_string(),
                exponent: e,
            });
        }
        let terms = recursion_terms(key)?;
        self.stats.expansions += 1;
        self.stats.conservation_checks += terms.len() as u64;
        let mut value = ExactRational::zero();
        for (coeff, child) in &terms {
            value += coeff * &self.w_value(child)?;
        }
        self.cache.insert(key.clone(), value.clone())?;
        Ok(value)
    }

    /// Convenience wrapper around [`canonicalize`] and [`WEngine::w_value`].
    pub fn w(&mut self, g: i64, i: i64, weights: &[i64]) -> Result<ExactRational> {
        let key = canonicalize(weights, g, i)?;
        self.w_value(&key)
    }
}
