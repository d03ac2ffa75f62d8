//! Order complexes, the dual braid complex, basketballs, the bisimplicial
//! rectangle and annulus complexes, and orthoscheme coordinates.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noncrossing::{
    all_chains_indices, enumerate_ncpart, enumerate_ncperm, is_noncrossing, is_noncrossing_perm,
    matching_of_partition, maximal_chains, partition_of_perm, perm_of, NCChain, NoncrossingPartition, Side,
};
use crate::partition::{LinearComposition, SetPartition};
use crate::perm::{product, Permutation};

/// Formal convex combination of the elements of a chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderComplexPoint {
    pub chain: NCChain,
    pub weights: Vec<f64>,
}

impl OrderComplexPoint {
    pub fn new(chain: NCChain, weights: Vec<f64>) -> Result<Self> {
        if chain.len() != weights.len() {
            return Err(Error::InvalidInput("one weight per chain element".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0 && w < 1.0 + 1e-12)) {
            return Err(Error::InvalidInput("weights must lie in (0,1]".into()));
        }
        if (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("weights must sum to 1".into()));
        }
        Ok(OrderComplexPoint { chain, weights })
    }
}

/// Cell of the dual braid complex, keyed by its edge labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DualBraidSimplex {
    edge_labels: Vec<Permutation>,
}

impl DualBraidSimplex {
    pub fn new(d: usize, edge_labels: Vec<Permutation>) -> Result<Self> {
        let mut prod = Permutation::identity(d);
        let mut len = 0;
        for l in &edge_labels {
            if l.is_identity() {
                return Err(Error::InvalidInput("edge labels must be nontrivial".into()));
            }
            prod = prod.compose(l)?;
            len += l.absolute_length();
        }
        if prod.absolute_length() != len || !is_noncrossing_perm(&prod) {
            return Err(Error::InvalidInput("edge labels do not multiply to an element below delta".into()));
        }
        Ok(DualBraidSimplex { edge_labels })
    }

    pub fn edge_labels(&self) -> &[Permutation] {
        &self.edge_labels
    }

    pub fn dim(&self) -> usize {
        self.edge_labels.len()
    }
}

/// Edge labels `pi_{i-1}^-1 pi_i` of a chain of permutations.
pub fn edge_labels(chain: &[Permutation]) -> Vec<Permutation> {
    chain.windows(2).map(|w| w[0].inverse().compose(&w[1]).expect("same degree")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexStats {
    pub d: usize,
    pub cells_by_dim: Vec<u64>,
    pub euler: i64,
}

fn euler(cells: &[u64]) -> i64 {
    cells.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}

fn check_range(d: usize, lo: usize, hi: usize) -> Result<()> {
    if d < lo || d > hi {
        Err(Error::UnsupportedDegree(d))
    } else {
        Ok(())
    }
}

/// Cell counts of `K_d`, computed from chains starting at the identity:
/// every label sequence is realized by exactly one such chain.
pub fn dual_braid_complex_stats(d: usize) -> Result<ComplexStats> {
    check_range(d, 2, 7)?;
    let elems = enumerate_ncpart(d);
    let idx: HashMap<&NoncrossingPartition, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); elems.len()];
    for (i, p) in elems.iter().enumerate() {
        for (j, q) in elems.iter().enumerate() {
            if i != j && p.leq(q)? {
                above[i].push(j);
            }
        }
    }
    // number of strict chains of each length starting at element i
    let mut memo: Vec<Option<Vec<u64>>> = vec![None; elems.len()];
    fn count(i: usize, above: &[Vec<usize>], memo: &mut Vec<Option<Vec<u64>>>) -> Vec<u64> {
        if let Some(v) = &memo[i] {
            return v.clone();
        }
        let mut v = vec![1u64];
        for &j in &above[i] {
            let sub = count(j, above, memo);
            if v.len() < sub.len() + 1 {
                v.resize(sub.len() + 1, 0);
            }
            for (k, c) in sub.iter().enumerate() {
                v[k + 1] += c;
            }
        }
        memo[i] = Some(v.clone());
        v
    }
    let root = idx[&NoncrossingPartition::discrete(d)];
    let cells = count(root, &above, &mut memo);
    Ok(ComplexStats { d, euler: euler(&cells), cells_by_dim: cells })
}

/// Brute-force identification: enumerate every chain of `NCPart_d`, map it to
/// its label sequence, count distinct sequences by length.
pub fn dual_braid_complex_stats_bruteforce(d: usize) -> Result<ComplexStats> {
    check_range(d, 2, 5)?;
    let (elems, chains) = all_chains_indices(d);
    let perms: Vec<Permutation> = elems.iter().map(perm_of).collect();
    let mut seen: Vec<HashSet<Vec<Permutation>>> = vec![HashSet::new(); d];
    for c in chains {
        let ps: Vec<Permutation> = c.iter().map(|&i| perms[i].clone()).collect();
        let labels = edge_labels(&ps);
        seen[labels.len()].insert(labels);
    }
    let cells: Vec<u64> = seen.iter().map(|s| s.len() as u64).collect();
    Ok(ComplexStats { d, euler: euler(&cells), cells_by_dim: cells })
}

/// Circle standardization of a constellation `[pi_L, labels.., pi_R]`.
///
/// Returns `[delta pi_R delta^-1 pi_L, labels.., 1]`.
pub fn standardize_circle(constellation: &[Permutation]) -> Result<Vec<Permutation>> {
    if constellation.len() < 2 {
        return Err(Error::InvalidInput("need at least the two endpoint permutations".into()));
    }
    let d = constellation[0].degree();
    let delta = Permutation::long_cycle(d);
    if product(constellation)? != delta {
        return Err(Error::Invariant("constellation product is not delta".into()));
    }
    let k = constellation.len();
    let pl = &constellation[0];
    let pr = &constellation[k - 1];
    let new_l = delta.compose(pr)?.compose(&delta.inverse())?.compose(pl)?;
    let mut out = Vec::with_capacity(k);
    out.push(new_l);
    out.extend_from_slice(&constellation[1..k - 1]);
    out.push(Permutation::identity(d));
    Ok(out)
}

/// Basketball test for a left permutation and a bottom permutation.
///
/// The TB matching of `pi_l` and the LR matching of `pi_b` are drawn on the
/// 4d-gon with sides `T_m, L_m, B_m, R_m` at positions `4m-3 .. 4m`; crossing
/// chords are merged and the pair is a basketball iff the merged partition is
/// noncrossing with all blocks of size 4.
pub fn is_basketball(pi_l: &Permutation, pi_b: &Permutation) -> Result<bool> {
    if pi_l.degree() != pi_b.degree() {
        return Err(Error::DegreeMismatch { left: pi_l.degree(), right: pi_b.degree() });
    }
    let d = pi_l.degree();
    let left = partition_of_perm(pi_l)?;
    let bottom = partition_of_perm(pi_b)?;
    let tb = matching_of_partition(&left, Side::Left);
    let lr = matching_of_partition(&bottom, Side::Bottom);
    let mut chords: Vec<(usize, usize)> = Vec::with_capacity(2 * d);
    for (t, b) in tb.pairs() {
        chords.push(ordered(4 * t - 3, 4 * b - 1));
    }
    for (l, r) in lr.pairs() {
        chords.push(ordered(4 * l - 2, 4 * r));
    }
    // union-find over crossing chords
    let mut parent: Vec<usize> = (0..chords.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if crosses(chords[i], chords[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in chords.iter().enumerate() {
        let r = find(&mut parent, i);
        blocks.entry(r).or_default().extend([a, b]);
    }
    if blocks.values().any(|b| b.len() != 4) {
        return Ok(false);
    }
    let sp = SetPartition::new(4 * d, blocks.into_values().collect())?;
    Ok(is_noncrossing(&sp))
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn crosses((a, b): (usize, usize), (c, e): (usize, usize)) -> bool {
    (a < c && c < b && b < e) || (c < a && a < e && e < b)
}

/// Fuss–Catalan number `(1/(3d+1)) binom(4d, d)`.
pub fn fuss_catalan4(d: usize) -> u64 {
    let mut num = num_bigint::BigUint::from(1u32);
    for k in 0..d {
        num *= 4 * d - k;
    }
    let den = crate::partition::factorial(d) * (3 * d + 1);
    let q = num / den;
    q.try_into().expect("fits in u64")
}

/// Left and bottom chains whose elements are pairwise basketballs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectangleCellLabel {
    pub left_chain: NCChain,
    pub bottom_chain: NCChain,
}

impl RectangleCellLabel {
    pub fn new(left_chain: NCChain, bottom_chain: NCChain) -> Result<Self> {
        let c = RectangleCellLabel { left_chain, bottom_chain };
        if !c.is_valid()? {
            return Err(Error::InvalidInput("chains are not pairwise basketball compatible".into()));
        }
        Ok(c)
    }

    pub fn is_valid(&self) -> Result<bool> {
        for l in self.left_chain.perms() {
            for b in self.bottom_chain.perms() {
                if !is_basketball(&l, &b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn bidimension(&self) -> (usize, usize) {
        (self.left_chain.len() - 1, self.bottom_chain.len() - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleStats {
    pub d: usize,
    pub vertices: u64,
    pub top_cells: u64,
    /// `cells[i][j]` counts cells whose left chain has `i+1` and bottom chain `j+1` elements.
    pub cells: Vec<Vec<u64>>,
}

/// Pairwise basketball table over `enumerate_ncperm(d)`.
pub fn basketball_table(d: usize) -> Result<Vec<Vec<bool>>> {
    let perms = enumerate_ncperm(d);
    perms
        .iter()
        .map(|l| perms.iter().map(|b| is_basketball(l, b)).collect())
        .collect()
}

pub fn count_basketballs(d: usize) -> Result<u64> {
    Ok(basketball_table(d)?.iter().flatten().filter(|&&b| b).count() as u64)
}

/// Vertex, top cell and bidimension counts of the rectangle complex.
pub fn rectangle_complex_stats(d: usize) -> Result<RectangleStats> {
    check_range(d, 1, 5)?;
    let table = basketball_table(d)?;
    let n = table.len();
    let vertices = table.iter().flatten().filter(|&&b| b).count() as u64;
    let (_, chains) = all_chains_indices(d);
    let masks: Vec<(usize, u64)> = chains
        .iter()
        .map(|c| (c.len(), c.iter().fold(0u64, |m, &i| m | (1u64 << i))))
        .collect();
    let compat: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| table[i][j]).fold(0u64, |m, j| m | (1u64 << j)))
        .collect();
    let mut cells = vec![vec![0u64; d]; d];
    for c in &chains {
        let allowed = c.iter().fold(u64::MAX, |m, &i| m & compat[i]);
        for &(len, mask) in &masks {
            if mask & !allowed == 0 {
                cells[c.len() - 1][len - 1] += 1;
            }
        }
    }
    let maxc: Vec<Vec<Permutation>> = maximal_chains(d).iter().map(|c| c.perms()).collect();
    let mut top = 0u64;
    for a in &maxc {
        for b in &maxc {
            if a.iter().all(|l| b.iter().all(|x| is_basketball(l, x).unwrap_or(false))) {
                top += 1;
            }
        }
    }
    Ok(RectangleStats { d, vertices, top_cells: top, cells })
}

/// Annulus representative of a rectangle cell: the horizontal constellation
/// `[pi_1, sigma.., pi_k^-1 delta]` is circle-standardized and the left chain
/// rebuilt from it; the bottom chain is kept as is.
pub fn standardize_annulus(cell: &RectangleCellLabel) -> Result<RectangleCellLabel> {
    let perms = cell.left_chain.perms();
    let d = perms[0].degree();
    let delta = Permutation::long_cycle(d);
    let mut constellation = vec![perms[0].clone()];
    constellation.extend(edge_labels(&perms));
    constellation.push(perms[perms.len() - 1].inverse().compose(&delta)?);
    let std = standardize_circle(&constellation)?;
    let mut chain = vec![std[0].clone()];
    for s in &std[1..std.len() - 1] {
        let next = chain.last().expect("nonempty").compose(s)?;
        chain.push(next);
    }
    let left = NCChain::new(chain.iter().map(partition_of_perm).collect::<Result<_>>()?)?;
    Ok(RectangleCellLabel { left_chain: left, bottom_chain: cell.bottom_chain.clone() })
}

/// Number of annulus vertex classes: basketball vertices up to standardization.
pub fn annulus_vertex_classes(d: usize) -> Result<u64> {
    check_range(d, 1, 6)?;
    let perms = enumerate_ncperm(d);
    let parts = enumerate_ncpart(d);
    let mut classes = HashSet::new();
    for (l, pl) in perms.iter().zip(&parts) {
        for (b, pb) in perms.iter().zip(&parts) {
            if is_basketball(l, b)? {
                let cell = RectangleCellLabel {
                    left_chain: NCChain::new(vec![pl.clone()])?,
                    bottom_chain: NCChain::new(vec![pb.clone()])?,
                };
                classes.insert(standardize_annulus(&cell)?);
            }
        }
    }
    Ok(classes.len() as u64)
}

/// A point of `Mult_n([x_l, x_r])` in orthoscheme coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoschemePoint {
    pub composition: LinearComposition,
    pub interior_points: Vec<f64>,
    pub interval: (f64, f64),
}

impl OrthoschemePoint {
    pub fn new(composition: LinearComposition, interior_points: Vec<f64>, interval: (f64, f64)) -> Result<Self> {
        let (xl, xr) = interval;
        if !(xl < xr) {
            return Err(Error::InvalidInput("empty interval".into()));
        }
        if interior_points.len() != composition.interior_len() {
            return Err(Error::InvalidInput("one interior point per interior entry".into()));
        }
        let mut prev = xl;
        for &x in &interior_points {
            if !(x > prev) {
                return Err(Error::InvalidInput("interior points must increase strictly".into()));
            }
            prev = x;
        }
        if !(prev < xr) {
            return Err(Error::InvalidInput("interior points must lie inside the interval".into()));
        }
        Ok(OrthoschemePoint { composition, interior_points, interval })
    }

    /// Multiset as `(value, multiplicity)` pairs, zero multiplicities dropped.
    pub fn multiset(&self) -> Vec<(f64, usize)> {
        let e = self.composition.entries();
        let mut pts = vec![self.interval.0];
        pts.extend(&self.interior_points);
        pts.push(self.interval.1);
        pts.into_iter().zip(e.iter().copied()).filter(|&(_, m)| m > 0).collect()
    }

    /// Relative widths of the subintervals cut out by the interior points.
    pub fn weights(&self) -> Vec<f64> {
        let (xl, xr) = self.interval;
        let mut pts = vec![xl];
        pts.extend(&self.interior_points);
        pts.push(xr);
        pts.windows(2).map(|w| (w[1] - w[0]) / (xr - xl)).collect()
    }

    /// Sorted coordinates rescaled to the unit interval.
    pub fn unit_coordinates(&self) -> Vec<f64> {
        let (xl, xr) = self.interval;
        self.multiset()
            .into_iter()
            .flat_map(|(x, m)| std::iter::repeat_n((x - xl) / (xr - xl), m))
            .collect()
    }
}

/// Orthoscheme point and subinterval weights of a real multiset in `[x_l, x_r]`.
pub fn orthoscheme_point_of_multiset(values: &[(f64, usize)], interval: (f64, f64)) -> Result<(OrthoschemePoint, Vec<f64>)> {
    let (xl, xr) = interval;
    if !(xl < xr) {
        return Err(Error::InvalidInput("empty interval".into()));
    }
    let mut ml = 0;
    let mut mr = 0;
    let mut interior: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for &(x, m) in values {
        if x < xl || x > xr || !x.is_finite() {
            return Err(Error::InvalidInput(format!("value {x} outside [{xl}, {xr}]")));
        }
        if m == 0 {
            continue;
        }
        if x == xl {
            ml += m;
        } else if x == xr {
            mr += m;
        } else {
            // order-preserving key for positive and negative floats
            let key = x.to_bits() ^ if x.is_sign_negative() { u64::MAX } else { 1 << 63 };
            interior.entry(key).or_insert((x, 0)).1 += m;
        }
    }
    let mut entries = vec![ml];
    let mut pts = Vec::new();
    for (x, m) in interior.into_values() {
        entries.push(m);
        pts.push(x);
    }
    entries.push(mr);
    let p = OrthoschemePoint::new(LinearComposition::new(entries)?, pts, interval)?;
    let w = p.weights();
    Ok((p, w))
}

/// Distance in one closed orthoscheme: Euclidean distance of sorted unit coordinates.
pub fn orthoscheme_distance(a: &OrthoschemePoint, b: &OrthoschemePoint) -> Result<f64> {
    if a.composition.n() != b.composition.n() || a.interval != b.interval {
        return Err(Error::InvalidInput("points live in different orthoschemes".into()));
    }
    let (x, y) = (a.unit_coordinates(), b.unit_coordinates());
    Ok(x.iter().zip(&y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt())
}
