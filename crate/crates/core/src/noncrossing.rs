//! Noncrossing partitions and permutations of `[d]`, Kreweras complements,
//! maximal chains and side matchings.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::SetPartition;
use crate::perm::Permutation;

/// True iff no `i<j<k<l` has `{i,k}` and `{j,l}` in two distinct blocks.
pub fn is_noncrossing(p: &SetPartition) -> bool {
    let lab = p.labels();
    // Two blocks cross iff some pair of consecutive elements of one block
    // separates elements of another. Scan each block's arcs.
    for b in p.blocks() {
        for w in 0..b.len() {
            let a = b[w];
            let c = if w + 1 < b.len() { b[w + 1] } else { continue };
            // elements strictly between a and c must not share a block with
            // anything outside [a, c]
            let inside: BTreeSet<usize> = ((a + 1)..c).map(|x| lab[x - 1]).collect();
            for x in (1..a).chain((c + 1)..=p.n()) {
                if inside.contains(&lab[x - 1]) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NoncrossingPartition(SetPartition);

impl<'de> Deserialize<'de> for NoncrossingPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = SetPartition::deserialize(d)?;
        NoncrossingPartition::new(p).map_err(serde::de::Error::custom)
    }
}

impl NoncrossingPartition {
    pub fn new(p: SetPartition) -> Result<Self> {
        if is_noncrossing(&p) {
            Ok(NoncrossingPartition(p))
        } else {
            Err(Error::NotNoncrossing(p.to_string()))
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(SetPartition::parse(s)?)
    }

    pub fn discrete(d: usize) -> Self {
        NoncrossingPartition(SetPartition::discrete(d))
    }

    pub fn indiscrete(d: usize) -> Self {
        NoncrossingPartition(SetPartition::indiscrete(d))
    }

    pub fn as_set_partition(&self) -> &SetPartition {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.n()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        self.0.blocks()
    }

    pub fn leq(&self, other: &NoncrossingPartition) -> Result<bool> {
        self.0.refines(&other.0)
    }

    pub fn perm(&self) -> Permutation {
        perm_of(self)
    }
}

impl fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Each block becomes the cycle listing its elements in increasing order.
pub fn perm_of(p: &NoncrossingPartition) -> Permutation {
    Permutation::from_cycles(p.degree(), p.blocks()).expect("partition blocks are disjoint cycles")
}

/// Inverse of [`perm_of`]; fails unless `pi` lies in `[1, delta]`.
pub fn partition_of_perm(pi: &Permutation) -> Result<NoncrossingPartition> {
    let sp = SetPartition::new(pi.degree(), pi.cycles())?;
    let nc = NoncrossingPartition::new(sp).map_err(|_| Error::NotNoncrossing(pi.to_string()))?;
    if perm_of(&nc) != *pi {
        return Err(Error::NotNoncrossing(format!("{pi} has a cycle that is not increasing")));
    }
    Ok(nc)
}

/// True iff `pi <= delta` in absolute order.
pub fn is_noncrossing_perm(pi: &Permutation) -> bool {
    pi.absolute_leq(&Permutation::long_cycle(pi.degree())).unwrap_or(false)
}

/// Right complement: partition of `perm(p)^-1 * delta`.
pub fn kreweras(p: &NoncrossingPartition) -> NoncrossingPartition {
    let d = p.degree();
    let k = perm_of(p).inverse().compose(&Permutation::long_cycle(d)).expect("same degree");
    partition_of_perm(&k).expect("complements of noncrossing permutations are noncrossing")
}

/// Left complement: partition of `delta * perm(p)^-1`.
pub fn kreweras_left(p: &NoncrossingPartition) -> NoncrossingPartition {
    let d = p.degree();
    let k = Permutation::long_cycle(d).compose(&perm_of(p).inverse()).expect("same degree");
    partition_of_perm(&k).expect("complements of noncrossing permutations are noncrossing")
}

/// All noncrossing partitions of `[d]` in canonical (sorted) order.
pub fn enumerate_ncpart(d: usize) -> Vec<NoncrossingPartition> {
    // Recursive decomposition: the block of 1 is {1 = a_1 < ... < a_r}; the
    // gaps between consecutive a's and after a_r are filled independently.
    fn rec(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
        // noncrossing partitions of [lo, hi] as block lists
        if lo > hi {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        // block containing lo ends its next element choice recursively
        fn extend(
            block: Vec<usize>,
            rest_lo: usize,
            hi: usize,
            acc: Vec<Vec<usize>>,
            out: &mut Vec<Vec<Vec<usize>>>,
        ) {
            // option: block closes; [rest_lo, hi] is free
            for tail in rec(rest_lo, hi) {
                let mut blocks = acc.clone();
                blocks.push(block.clone());
                blocks.extend(tail);
                out.push(blocks);
            }
            // option: next element of block is j, gap [rest_lo, j-1] free
            for j in rest_lo..=hi {
                for gap in rec(rest_lo, j - 1) {
                    let mut b = block.clone();
                    b.push(j);
                    let mut a = acc.clone();
                    a.extend(gap);
                    extend(b, j + 1, hi, a, out);
                }
            }
        }
        extend(vec![lo], lo + 1, hi, Vec::new(), &mut out);
        out
    }
    let mut out: Vec<NoncrossingPartition> = rec(1, d)
        .into_iter()
        .map(|b| NoncrossingPartition(SetPartition::new(d, b).expect("valid blocks")))
        .collect();
    out.sort();
    out
}

/// All noncrossing permutations of degree `d`, in the order of [`enumerate_ncpart`].
pub fn enumerate_ncperm(d: usize) -> Vec<Permutation> {
    enumerate_ncpart(d).iter().map(perm_of).collect()
}

/// Strictly increasing chain of noncrossing partitions of a common degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NCChain(Vec<NoncrossingPartition>);

impl<'de> Deserialize<'de> for NCChain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<NoncrossingPartition>::deserialize(d)?;
        NCChain::new(v).map_err(serde::de::Error::custom)
    }
}

impl NCChain {
    pub fn new(elements: Vec<NoncrossingPartition>) -> Result<Self> {
        for w in elements.windows(2) {
            if w[0].degree() != w[1].degree() {
                return Err(Error::DegreeMismatch { left: w[0].degree(), right: w[1].degree() });
            }
            if w[0] == w[1] || !w[0].leq(&w[1])? {
                return Err(Error::InvalidInput(format!("chain not strictly increasing at {} < {}", w[0], w[1])));
            }
        }
        Ok(NCChain(elements))
    }

    /// Builds from a strictly decreasing list (stored in the given order).
    pub fn elements(&self) -> &[NoncrossingPartition] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn perms(&self) -> Vec<Permutation> {
        self.0.iter().map(perm_of).collect()
    }
}

impl fmt::Display for NCChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(" < "))
    }
}

impl fmt::Debug for NCChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Noncrossing partitions covering `p`: merge two blocks, keep noncrossing.
pub fn covers(p: &NoncrossingPartition) -> Vec<NoncrossingPartition> {
    let b = p.blocks();
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(b.len() - 1);
            for (k, blk) in b.iter().enumerate() {
                if k == j {
                    continue;
                }
                let mut blk = blk.clone();
                if k == i {
                    blk.extend_from_slice(&b[j]);
                }
                blocks.push(blk);
            }
            let sp = SetPartition::new(p.degree(), blocks).expect("merge of a partition");
            if is_noncrossing(&sp) {
                out.push(NoncrossingPartition(sp));
            }
        }
    }
    out.sort();
    out
}

/// All maximal chains from discrete to indiscrete.
pub fn maximal_chains(d: usize) -> Vec<NCChain> {
    fn rec(cur: &mut Vec<NoncrossingPartition>, out: &mut Vec<NCChain>) {
        let last = cur.last().expect("nonempty");
        if last.as_set_partition().is_indiscrete() {
            out.push(NCChain(cur.clone()));
            return;
        }
        for c in covers(last) {
            cur.push(c);
            rec(cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d >= 1 {
        rec(&mut vec![NoncrossingPartition::discrete(d)], &mut out);
    }
    out
}

/// All strictly increasing chains (any length >= 1) in `NCPart_d`, as index lists
/// into `enumerate_ncpart(d)`.
pub fn all_chains_indices(d: usize) -> (Vec<NoncrossingPartition>, Vec<Vec<usize>>) {
    let elems = enumerate_ncpart(d);
    let n = elems.len();
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && elems[i].leq(&elems[j]).expect("same degree") {
                above[i].push(j);
            }
        }
    }
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<usize>, above: &[Vec<usize>], out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        let last = *cur.last().expect("nonempty");
        for &j in &above[last] {
            cur.push(j);
            rec(cur, above, out);
            cur.pop();
        }
    }
    for i in 0..n {
        rec(&mut vec![i], &above, &mut out);
    }
    (elems, out)
}

/// Side of a branched rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Side> {
        match s.to_ascii_lowercase().as_str() {
            "top" | "t" => Ok(Side::Top),
            "bottom" | "b" => Ok(Side::Bottom),
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            _ => Err(Error::InvalidInput(format!("unknown side {s:?}"))),
        }
    }
}

/// Which pair of opposite sides a matching joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SideConvention {
    /// `L_m -> 2m-1`, `R_m -> 2m`.
    LR,
    /// `T_m -> 2m-1`, `B_m -> 2m`.
    TB,
}

/// Noncrossing perfect matching of `[2d]` pairing odd with even indices.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NCMatching {
    #[serde(flatten)]
    underlying: SetPartition,
    side_convention: SideConvention,
}

#[derive(Deserialize)]
struct RawMatching {
    n: usize,
    blocks: Vec<Vec<usize>>,
    side_convention: SideConvention,
}

impl<'de> Deserialize<'de> for NCMatching {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMatching::deserialize(d)?;
        let sp = SetPartition::new(raw.n, raw.blocks).map_err(serde::de::Error::custom)?;
        NCMatching::new(sp, raw.side_convention).map_err(serde::de::Error::custom)
    }
}

impl NCMatching {
    pub fn new(underlying: SetPartition, side_convention: SideConvention) -> Result<Self> {
        if underlying.n() % 2 != 0 {
            return Err(Error::InvalidPartition("matching on an odd ground set".into()));
        }
        for b in underlying.blocks() {
            if b.len() != 2 || b[0] % 2 == b[1] % 2 {
                return Err(Error::InvalidPartition(format!("block {b:?} is not an odd-even pair")));
            }
        }
        if !is_noncrossing(&underlying) {
            return Err(Error::NotNoncrossing(underlying.to_string()));
        }
        Ok(NCMatching { underlying, side_convention })
    }

    pub fn underlying(&self) -> &SetPartition {
        &self.underlying
    }

    pub fn side_convention(&self) -> SideConvention {
        self.side_convention
    }

    pub fn degree(&self) -> usize {
        self.underlying.n() / 2
    }

    /// Pairs `(odd side index m, even side index m')`, meaning `L_m–R_m'` or `T_m–B_m'`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .underlying
            .blocks()
            .iter()
            .map(|b| {
                let (o, e) = if b[0] % 2 == 1 { (b[0], b[1]) } else { (b[1], b[0]) };
                ((o + 1) / 2, e / 2)
            })
            .collect();
        v.sort_unstable();
        v
    }

    /// Human readable blocks such as `{L1,R2}`.
    pub fn labelled_blocks(&self) -> Vec<String> {
        let (a, b) = match self.side_convention {
            SideConvention::LR => ('L', 'R'),
            SideConvention::TB => ('T', 'B'),
        };
        self.pairs().into_iter().map(|(o, e)| format!("{{{a}{o},{b}{e}}}")).collect()
    }
}

impl fmt::Debug for NCMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labelled_blocks().join(""))
    }
}

fn wrap(i: isize, d: usize) -> usize {
    (i - 1).rem_euclid(d as isize) as usize + 1
}

/// Boundary matching of the side partition `p` read on `side`.
///
/// Top and bottom partitions give `LR` matchings, left and right give `TB`.
pub fn matching_of_partition(p: &NoncrossingPartition, side: Side) -> NCMatching {
    let d = p.degree();
    let pi = perm_of(p);
    let mut blocks = Vec::with_capacity(d);
    for a in 1..=d {
        let next = pi.apply(a) as isize;
        let (odd, even) = match side {
            Side::Top => (a, wrap(next - 1, d)),
            Side::Bottom => (pi.apply(a), a),
            Side::Left => (pi.apply(a), a),
            Side::Right => (wrap(a as isize + 1, d), pi.apply(a)),
        };
        blocks.push(vec![2 * odd - 1, 2 * even]);
    }
    let conv = match side {
        Side::Top | Side::Bottom => SideConvention::LR,
        Side::Left | Side::Right => SideConvention::TB,
    };
    NCMatching::new(SetPartition::new(2 * d, blocks).expect("perfect matching"), conv)
        .expect("side matchings are noncrossing")
}

/// Inverse of [`matching_of_partition`].
pub fn partition_of_matching(m: &NCMatching, side: Side) -> Result<NoncrossingPartition> {
    let want = match side {
        Side::Top | Side::Bottom => SideConvention::LR,
        Side::Left | Side::Right => SideConvention::TB,
    };
    if m.side_convention != want {
        return Err(Error::InvalidInput(format!("{side:?} partitions come from {want:?} matchings")));
    }
    let d = m.degree();
    let mut img = vec![0usize; d];
    for (odd, even) in m.pairs() {
        // odd is L/T index, even is R/B index
        let (from, to) = match side {
            Side::Top => (odd, wrap(even as isize + 1, d)),
            Side::Bottom | Side::Left => (even, odd),
            Side::Right => (wrap(odd as isize - 1, d), even),
        };
        img[from - 1] = to;
    }
    let pi = Permutation::from_one_line(&img)?;
    partition_of_perm(&pi)
}
