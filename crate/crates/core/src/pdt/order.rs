use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub const MAX_CARRIER: usize = 64;
pub const DEFAULT_MAX_LINEARISATION_ELEMENTS: usize = 9;
pub const DEFAULT_MAX_LINEARISATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("unknown id '{0}'")]
    UnknownId(String),
    #[error("duplicate carrier id '{0}'")]
    DuplicateId(String),
    #[error("reflexive pair on '{0}'")]
    Reflexive(String),
    #[error("cycle through {}", .0.join(" < "))]
    Cycle(Vec<String>),
    #[error("carrier of {0} elements exceeds the limit of {MAX_CARRIER}")]
    CarrierTooLarge(usize),
    #[error("'{0:?}' is not a chain over the expected ids")]
    NotAChain(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} exceeds the cap of {cap}")]
pub struct CapacityError {
    pub what: &'static str,
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearisationCap {
    pub max_elements: usize,
    pub max_orders: usize,
}

impl Default for LinearisationCap {
    fn default() -> Self {
        LinearisationCap {
            max_elements: DEFAULT_MAX_LINEARISATION_ELEMENTS,
            max_orders: DEFAULT_MAX_LINEARISATIONS,
        }
    }
}

/// Strict partial order over an ordered carrier of ids, kept transitively closed.
/// `above[i]` has bit `j` set iff `ids[i] < ids[j]`, i.e. `ids[j]` is more preferred.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PriorityRelation {
    ids: Vec<String>,
    above: Vec<u64>,
}

pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

impl PriorityRelation {
    pub fn empty<S: AsRef<str>>(ids: &[S]) -> Result<Self, OrderError> {
        if ids.len() > MAX_CARRIER {
            return Err(OrderError::CarrierTooLarge(ids.len()));
        }
        let mut seen = BTreeSet::new();
        for id in ids {
            if !seen.insert(id.as_ref()) {
                return Err(OrderError::DuplicateId(id.as_ref().to_string()));
            }
        }
        Ok(PriorityRelation {
            ids: ids.iter().map(|s| s.as_ref().to_string()).collect(),
            above: vec![0; ids.len()],
        })
    }

    /// Build from `(lower, higher)` pairs, closing transitively.
    pub fn from_pairs<S: AsRef<str>>(ids: &[S], pairs: &[(S, S)]) -> Result<Self, OrderError> {
        let mut rel = Self::empty(ids)?;
        let mut idx = Vec::with_capacity(pairs.len());
        for (lo, hi) in pairs {
            let l = rel.require(lo.as_ref())?;
            let h = rel.require(hi.as_ref())?;
            if l == h {
                return Err(OrderError::Reflexive(lo.as_ref().to_string()));
            }
            idx.push((l, h));
        }
        rel.add_index_pairs(&idx)?;
        Ok(rel)
    }

    /// Total order from a chain listed least to greatest.
    pub fn from_chain<S: AsRef<str>>(chain: &[S]) -> Result<Self, OrderError> {
        let mut rel = Self::empty(chain)?;
        let n = chain.len();
        for i in 0..n {
            rel.above[i] = mask_range(i + 1, n);
        }
        Ok(rel)
    }

    /// Chain over an existing carrier, given as carrier indices least to greatest.
    pub fn chain_over(ids: &[String], chain: &[usize]) -> Result<Self, OrderError> {
        let mut rel = Self::empty(ids)?;
        let mut seen = 0u64;
        for (pos, &i) in chain.iter().enumerate() {
            if i >= ids.len() || seen & (1 << i) != 0 {
                return Err(OrderError::NotAChain(chain.iter().map(|&j| format!("#{j}")).collect()));
            }
            seen |= 1 << i;
            for &j in &chain[pos + 1..] {
                rel.above[i] |= 1 << j;
            }
        }
        Ok(rel)
    }

    fn require(&self, id: &str) -> Result<usize, OrderError> {
        self.index_of(id).ok_or_else(|| OrderError::UnknownId(id.to_string()))
    }

    fn add_index_pairs(&mut self, pairs: &[(usize, usize)]) -> Result<(), OrderError> {
        for &(l, h) in pairs {
            self.above[l] |= 1 << h;
        }
        self.close();
        if let Some(i) = (0..self.len()).find(|&i| self.above[i] & (1 << i) != 0) {
            return Err(OrderError::Cycle(self.cycle_through(i)));
        }
        Ok(())
    }

    fn close(&mut self) {
        let n = self.len();
        for k in 0..n {
            for i in 0..n {
                if self.above[i] & (1 << k) != 0 {
                    self.above[i] |= self.above[k];
                }
            }
        }
    }

    // Shortest cycle from i back to i in the closed relation's generating edges is not
    // recoverable after closure, so report the ids of the strongly connected part instead.
    fn cycle_through(&self, i: usize) -> Vec<String> {
        let mut cyc = vec![self.ids[i].clone()];
        for j in bits(self.above[i]) {
            if j != i && self.above[j] & (1 << i) != 0 {
                cyc.push(self.ids[j].clone());
            }
        }
        cyc.push(self.ids[i].clone());
        cyc
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn full_mask(&self) -> u64 {
        mask_range(0, self.len())
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.above[i] & (1 << j) != 0
    }

    pub fn less_id(&self, lo: &str, hi: &str) -> bool {
        match (self.index_of(lo), self.index_of(hi)) {
            (Some(l), Some(h)) => self.less(l, h),
            _ => false,
        }
    }

    /// Elements strictly above `i`.
    pub fn above(&self, i: usize) -> u64 {
        self.above[i]
    }

    /// Elements strictly below `i`.
    pub fn below(&self, i: usize) -> u64 {
        (0..self.len()).filter(|&j| self.less(j, i)).fold(0, |m, j| m | 1 << j)
    }

    pub fn pair_count(&self) -> usize {
        self.above.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// All `(lower, higher)` pairs as carrier indices, sorted.
    pub fn index_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in bits(self.above[i]) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        self.index_pairs()
            .into_iter()
            .map(|(i, j)| (self.ids[i].clone(), self.ids[j].clone()))
            .collect()
    }

    pub fn is_total(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.less(i, j) || self.less(j, i)))
    }

    /// Total on the elements of `mask`.
    pub fn is_total_on(&self, mask: u64) -> bool {
        bits(mask).all(|i| bits(mask).all(|j| i == j || self.less(i, j) || self.less(j, i)))
    }

    /// Irreflexive and transitive.
    pub fn is_strict_partial_order(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| !self.less(i, i))
            && (0..n).all(|i| bits(self.above[i]).all(|j| self.above[j] & !self.above[i] == 0))
    }

    /// Every pair of `other` (over the same carrier) is also in `self`.
    pub fn contains(&self, other: &PriorityRelation) -> bool {
        self.ids == other.ids && self.above.iter().zip(&other.above).all(|(a, b)| b & !a == 0)
    }

    pub fn intersection(&self, other: &PriorityRelation) -> PriorityRelation {
        assert_eq!(self.ids, other.ids, "intersection over differing carriers");
        PriorityRelation {
            ids: self.ids.clone(),
            above: self.above.iter().zip(&other.above).map(|(a, b)| a & b).collect(),
        }
    }

    /// Only pairs with both ends inside `mask`.
    pub fn restricted_to(&self, mask: u64) -> PriorityRelation {
        PriorityRelation {
            ids: self.ids.clone(),
            above: (0..self.len())
                .map(|i| if mask & (1 << i) != 0 { self.above[i] & mask } else { 0 })
                .collect(),
        }
    }

    /// `{ x in s | no y in s with x < y }`.
    pub fn max_elements(&self, s: u64) -> u64 {
        bits(s).filter(|&i| self.above[i] & s == 0).fold(0, |m, i| m | 1 << i)
    }

    pub fn min_elements(&self, s: u64) -> u64 {
        bits(s).filter(|&i| self.below(i) & s == 0).fold(0, |m, i| m | 1 << i)
    }

    /// For a total order, carrier indices from least to greatest.
    pub fn chain(&self) -> Option<Vec<usize>> {
        if !self.is_total() {
            return None;
        }
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| std::cmp::Reverse(self.above[i].count_ones()));
        Some(idx)
    }

    pub fn chain_ids(&self) -> Option<Vec<String>> {
        self.chain().map(|c| c.into_iter().map(|i| self.ids[i].clone()).collect())
    }

    // Carrier indices sorted by id, the tie-break order for every deterministic choice.
    fn lexicographic(&self, mask: u64) -> Vec<usize> {
        let mut v: Vec<usize> = bits(mask).collect();
        v.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        v
    }

    /// Deterministic linearisation of the elements of `mask`: repeatedly take the
    /// lexicographically smallest minimal element as the next least one.
    pub fn linear_extension_of(&self, mask: u64) -> Vec<usize> {
        let mut remaining = mask;
        let mut out = Vec::new();
        while remaining != 0 {
            let mins = bits(remaining).filter(|&i| self.below(i) & remaining == 0).fold(0, |m, i| m | 1 << i);
            let next = self.lexicographic(mins)[0];
            out.push(next);
            remaining &= !(1 << next);
        }
        out
    }

    /// Deterministic total extension of the whole order.
    pub fn linearise(&self) -> PriorityRelation {
        Self::chain_over(&self.ids, &self.linear_extension_of(self.full_mask())).expect("valid chain")
    }

    /// All total orders containing `self`, enumerated in lexicographic order of
    /// the chains, least element first.
    pub fn linearisations(&self, cap: LinearisationCap) -> Result<Vec<PriorityRelation>, CapacityError> {
        if self.len() > cap.max_elements {
            return Err(CapacityError {
                what: "linearisation carrier size",
                cap: cap.max_elements,
            });
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.len());
        self.enumerate(self.full_mask(), &mut prefix, &mut out, cap.max_orders)?;
        Ok(out)
    }

    fn enumerate(
        &self,
        remaining: u64,
        prefix: &mut Vec<usize>,
        out: &mut Vec<PriorityRelation>,
        max: usize,
    ) -> Result<(), CapacityError> {
        if remaining == 0 {
            if out.len() == max {
                return Err(CapacityError {
                    what: "linearisation count",
                    cap: max,
                });
            }
            out.push(Self::chain_over(&self.ids, prefix).expect("valid chain"));
            return Ok(());
        }
        let mins = bits(remaining).filter(|&i| self.below(i) & remaining == 0).fold(0, |m, i| m | 1 << i);
        for i in self.lexicographic(mins) {
            prefix.push(i);
            self.enumerate(remaining & !(1 << i), prefix, out, max)?;
            prefix.pop();
        }
        Ok(())
    }

    /// Transitive closure of `self` together with the chain `u_lin` (carrier
    /// indices, least first) over the subset it lists.
    pub fn partial_linearisation(&self, u_lin: &[usize]) -> Result<PriorityRelation, OrderError> {
        let mut out = self.clone();
        let mut pairs = Vec::new();
        for (pos, &i) in u_lin.iter().enumerate() {
            if i >= self.len() {
                return Err(OrderError::UnknownId(format!("#{i}")));
            }
            for &j in &u_lin[pos + 1..] {
                if i == j {
                    return Err(OrderError::NotAChain(u_lin.iter().map(|&k| self.ids[k].clone()).collect()));
                }
                pairs.push((i, j));
            }
        }
        out.add_index_pairs(&pairs)?;
        Ok(out)
    }

    /// Same as [`partial_linearisation`](Self::partial_linearisation) with ids.
    pub fn partial_linearisation_ids<S: AsRef<str>>(&self, u_lin: &[S]) -> Result<PriorityRelation, OrderError> {
        let idx = u_lin
            .iter()
            .map(|s| self.require(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.partial_linearisation(&idx)
    }

    pub fn mask_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<u64, OrderError> {
        ids.iter().try_fold(0u64, |m, s| Ok(m | 1 << self.require(s.as_ref())?))
    }

    pub fn ids_of(&self, mask: u64) -> Vec<String> {
        bits(mask).map(|i| self.ids[i].clone()).collect()
    }
}

pub fn mask_range(from: usize, to: usize) -> u64 {
    let hi = if to >= 64 { u64::MAX } else { (1u64 << to) - 1 };
    let lo = if from >= 64 { u64::MAX } else { (1u64 << from) - 1 };
    hi & !lo
}

impl fmt::Debug for PriorityRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PriorityRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(chain), true) = (self.chain_ids(), self.len() > 1) {
            return write!(f, "{}", chain.join(" < "));
        }
        let pairs: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{a} < {b}")).collect();
        write!(f, "{{{}}}", pairs.join(", "))
    }
}
