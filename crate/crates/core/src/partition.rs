//! Set partitions, integer partitions and linear compositions.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition of `[1..=n]` in canonical form: blocks ascending, ordered by minimum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawSetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSetPartition::deserialize(d)?;
        SetPartition::new(raw.n, raw.blocks).map_err(serde::de::Error::custom)
    }
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n || seen[x - 1] {
                    return Err(Error::InvalidPartition(format!("element {x} repeated or outside [1,{n}]")));
                }
                seen[x - 1] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition("blocks do not cover the ground set".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    pub fn discrete(n: usize) -> Self {
        SetPartition { n, blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    pub fn indiscrete(n: usize) -> Self {
        SetPartition { n, blocks: if n == 0 { vec![] } else { vec![(1..=n).collect()] } }
    }

    /// Builds from a block label per element (0-based positions, any labels).
    pub(crate) fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut reps: Vec<&T> = Vec::new();
        for (i, v) in labels.iter().enumerate() {
            match reps.iter().position(|r| *r == v) {
                Some(k) => blocks[k].push(i + 1),
                None => {
                    reps.push(v);
                    blocks.push(vec![i + 1]);
                }
            }
        }
        SetPartition { n: labels.len(), blocks }
    }

    /// Parses the shorthand `13|2|46|5|7` (single-digit elements) or
    /// `1,3|2|4,6` (comma separated).
    pub fn parse(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.trim().split('|') {
            let part = part.trim();
            let block: Result<Vec<usize>> = if part.contains(',') || part.contains(' ') {
                part.split([',', ' '])
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidPartition(format!("bad token {t:?}"))))
                    .collect()
            } else {
                part.chars()
                    .map(|c| c.to_digit(10).map(|x| x as usize).ok_or_else(|| Error::InvalidPartition(format!("bad char {c:?}"))))
                    .collect()
            };
            blocks.push(block?);
        }
        let n = blocks.iter().map(|b| b.len()).sum();
        SetPartition::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// 0-based index of the block containing the 1-based element `x`.
    pub fn block_index_of(&self, x: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&x)).expect("element outside ground set")
    }

    /// Block index for every element, 0-based positions.
    pub fn labels(&self) -> Vec<usize> {
        let mut lab = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &x in b {
                lab[x - 1] = k;
            }
        }
        lab
    }

    pub fn shape(&self) -> IntegerPartition {
        IntegerPartition::new(self.blocks.iter().map(|b| b.len()).collect())
            .expect("nonempty blocks")
    }

    /// True iff every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch { left: self.n, right: other.n });
        }
        let lab = other.labels();
        Ok(self.blocks.iter().all(|b| b.iter().all(|&x| lab[x - 1] == lab[b[0] - 1])))
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.n
    }

    pub fn is_indiscrete(&self) -> bool {
        self.blocks.len() == 1
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n >= 10 { "," } else { "" };
        let s: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep))
            .collect();
        write!(f, "{}", s.join("|"))
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Groups equal values: positions `i` and `j` share a block iff `values[i] == values[j]`.
pub fn set_partition_of_tuple<T: PartialEq>(values: &[T]) -> Result<SetPartition> {
    if values.is_empty() {
        return Err(Error::InvalidInput("empty tuple".into()));
    }
    Ok(SetPartition::from_labels(values))
}

pub fn refinement_leq(p: &SetPartition, q: &SetPartition) -> Result<bool> {
    p.refines(q)
}

/// Partition of an integer, parts stored nonincreasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

#[derive(Deserialize)]
struct RawIntegerPartition {
    parts: Vec<usize>,
}

impl<'de> Deserialize<'de> for IntegerPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawIntegerPartition::deserialize(d)?;
        IntegerPartition::new(raw.parts).map_err(serde::de::Error::custom)
    }
}

impl IntegerPartition {
    /// Sorts the parts; rejects zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(IntegerPartition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Pairs `(part size, exponent)`, largest part first.
    pub fn exponents(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, a)) if *q == p => *a += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Merges parts by a grouping of 0-based part indices.
    pub fn merge(&self, grouping: &[Vec<usize>]) -> Result<IntegerPartition> {
        let mut seen = vec![false; self.parts.len()];
        let mut out = Vec::with_capacity(grouping.len());
        for g in grouping {
            if g.is_empty() {
                return Err(Error::InvalidGrouping("empty group".into()));
            }
            let mut s = 0;
            for &i in g {
                if i >= self.parts.len() || seen[i] {
                    return Err(Error::InvalidGrouping(format!("index {i} repeated or out of range")));
                }
                seen[i] = true;
                s += self.parts[i];
            }
            out.push(s);
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidGrouping("grouping does not cover all parts".into()));
        }
        IntegerPartition::new(out)
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|(p, a)| if a == 1 { format!("{p}") } else { format!("{p}^{a}") })
            .collect();
        write!(f, "{}", s.join(" "))
    }
}

impl fmt::Debug for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn int_partition_merge(lambda: &IntegerPartition, grouping: &[Vec<usize>]) -> Result<IntegerPartition> {
    lambda.merge(grouping)
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

/// Number of set partitions of `[n]` with shape `lambda`.
pub fn count_set_partitions_of_shape(lambda: &IntegerPartition) -> BigUint {
    let mut den = BigUint::from(1u32);
    for (p, a) in lambda.exponents() {
        den *= factorial(p).pow(a as u32) * factorial(a);
    }
    factorial(lambda.n()) / den
}

/// Row `[m_l, m_1, ..., m_k, m_r]` with positive interior entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinearComposition {
    entries: Vec<usize>,
}

#[derive(Deserialize)]
struct RawComposition {
    entries: Vec<usize>,
}

impl<'de> Deserialize<'de> for LinearComposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawComposition::deserialize(d)?;
        LinearComposition::new(raw.entries).map_err(serde::de::Error::custom)
    }
}

impl LinearComposition {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidInput("a linear composition has at least two entries".into()));
        }
        if entries[1..entries.len() - 1].iter().any(|&m| m == 0) {
            return Err(Error::InvalidInput("interior entries must be positive".into()));
        }
        Ok(LinearComposition { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of interior entries.
    pub fn interior_len(&self) -> usize {
        self.entries.len() - 2
    }

    /// Replaces entries `i` and `i+1` (0-based) by their sum.
    pub fn elementary_merge(&self, i: usize) -> Result<LinearComposition> {
        if self.entries.len() <= 2 || i + 1 >= self.entries.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.entries.len() });
        }
        let mut e = self.entries.clone();
        let s = e[i] + e[i + 1];
        e.splice(i..=i + 1, [s]);
        Ok(LinearComposition { entries: e })
    }

    /// Every composition reachable by repeated elementary merges, `self` included.
    pub fn merge_closure(&self) -> BTreeSet<LinearComposition> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            for i in 0..c.len().saturating_sub(1) {
                if let Ok(m) = c.elementary_merge(i) {
                    stack.push(m);
                }
            }
        }
        seen
    }
}

impl fmt::Debug for LinearComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

pub fn elementary_merge(c: &LinearComposition, i: usize) -> Result<LinearComposition> {
    c.elementary_merge(i)
}

/// All set partitions of `[n]` (restricted growth strings).
pub fn all_set_partitions(n: usize) -> Vec<SetPartition> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, maxb: usize, out: &mut Vec<SetPartition>) {
        if i == n {
            out.push(SetPartition::from_labels(cur));
            return;
        }
        for b in 0..=maxb {
            cur.push(b);
            rec(i + 1, n, cur, if b == maxb { maxb + 1 } else { maxb }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, n, &mut Vec::with_capacity(n), 0, &mut out);
    }
    out
}
