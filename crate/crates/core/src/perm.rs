//! Permutations of `[1..=n]`.
//!
//! The public API is 1-based. Products follow function composition:
//! `a.compose(&b)` applies `b` first.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // 0-based images
    img: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { img: (0..n).collect() }
    }

    /// The long cycle `(1 2 ... d)`.
    pub fn long_cycle(d: usize) -> Self {
        Permutation { img: (0..d).map(|i| (i + 1) % d.max(1)).collect() }
    }

    /// Builds from 1-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut img = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a permutation")));
            }
            seen[x - 1] = true;
            img.push(x - 1);
        }
        Ok(Permutation { img })
    }

    /// Builds from disjoint 1-based cycles on `[1..=n]`.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for c in cycles {
            let c = c.as_ref();
            for (k, &x) in c.iter().enumerate() {
                if x == 0 || x > n || seen[x - 1] {
                    return Err(Error::InvalidPermutation(format!("bad cycle {c:?} for n={n}")));
                }
                seen[x - 1] = true;
                img[x - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        Ok(Permutation { img })
    }

    /// The transposition `(a b)`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidPermutation(format!("({a} {a}) is not a transposition")));
        }
        Self::from_cycles(n, &[[a, b]])
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.img[i - 1] + 1
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.img.iter().map(|x| x + 1).collect()
    }

    /// `self * other`, applying `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(Permutation { img: other.img.iter().map(|&j| self.img[j]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.img.len()];
        for (i, &j) in self.img.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { img: inv }
    }

    /// `g^{-1} self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Result<Permutation> {
        g.inverse().compose(&self.compose(g)?)
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// All cycles including fixed points, each starting at its minimum,
    /// ordered by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x + 1);
                x = self.img[x];
            }
            out.push(c);
        }
        out
    }

    /// Cycles of length at least two.
    pub fn nontrivial_cycles(&self) -> Vec<Vec<usize>> {
        self.cycles().into_iter().filter(|c| c.len() > 1).collect()
    }

    pub fn num_cycles(&self) -> usize {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if !seen[s] {
                count += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = self.img[x];
                }
            }
        }
        count
    }

    /// Minimal number of transpositions needed to write `self`.
    pub fn absolute_length(&self) -> usize {
        self.img.len() - self.num_cycles()
    }

    /// Absolute order: `self <= other` iff `l(self) + l(self^-1 other) = l(other)`.
    pub fn absolute_leq(&self, other: &Permutation) -> Result<bool> {
        let rest = self.inverse().compose(other)?;
        Ok(self.absolute_length() + rest.absolute_length() == other.absolute_length())
    }

    /// Cycle type as a nonincreasing list of cycle lengths (fixed points included).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    /// Panics on degree mismatch; use [`Permutation::compose`] for a checked product.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("degree mismatch in permutation product")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cyc = self.nontrivial_cycles();
        if cyc.is_empty() {
            return write!(f, "()");
        }
        for c in cyc {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_line(&v).map_err(serde::de::Error::custom)
    }
}

/// Product `p_1 p_2 ... p_k` of a nonempty list.
pub fn product(perms: &[Permutation]) -> Result<Permutation> {
    let first = perms
        .first()
        .ok_or_else(|| Error::InvalidInput("empty product".into()))?;
    perms[1..].iter().try_fold(first.clone(), |acc, p| acc.compose(p))
}
