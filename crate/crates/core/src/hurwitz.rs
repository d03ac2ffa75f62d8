//! Factorizations, the Hurwitz braid action and constellations.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{product, Permutation};

/// Default cap on orbit sizes.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// Ordered tuple of permutations together with their product.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization {
    factors: Vec<Permutation>,
    target: Permutation,
}

impl Factorization {
    pub fn new(factors: Vec<Permutation>) -> Result<Self> {
        let target = product(&factors)?;
        Ok(Factorization { factors, target })
    }

    pub fn degree(&self) -> usize {
        self.target.degree()
    }

    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn target(&self) -> &Permutation {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// True iff the absolute lengths of the factors add up to that of the target.
    pub fn is_minimal(&self) -> bool {
        self.factors.iter().map(|f| f.absolute_length()).sum::<usize>() == self.target.absolute_length()
    }

    /// Elementary move at 1-based position `i`:
    /// `(g_i, g_{i+1}) -> (g_{i+1}, g_{i+1}^-1 g_i g_{i+1})`.
    pub fn hurwitz_move(&self, i: usize) -> Result<Factorization> {
        if i == 0 || i >= self.factors.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.factors.len() });
        }
        let mut f = self.factors.clone();
        let a = f[i - 1].clone();
        let b = f[i].clone();
        f[i - 1] = b.clone();
        f[i] = a.conjugate_by(&b)?;
        Ok(Factorization { factors: f, target: self.target.clone() })
    }

    /// Inverse move at position `i`: `(g_i, g_{i+1}) -> (g_i g_{i+1} g_i^-1, g_i)`.
    pub fn hurwitz_move_inverse(&self, i: usize) -> Result<Factorization> {
        if i == 0 || i >= self.factors.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.factors.len() });
        }
        let mut f = self.factors.clone();
        let a = f[i - 1].clone();
        let b = f[i].clone();
        f[i - 1] = b.conjugate_by(&a.inverse())?;
        f[i] = a;
        Ok(Factorization { factors: f, target: self.target.clone() })
    }

    /// Drops identity factors at either end.
    pub fn stripped(&self) -> Factorization {
        let mut f: &[Permutation] = &self.factors;
        while f.len() > 1 && f[0].is_identity() {
            f = &f[1..];
        }
        while f.len() > 1 && f[f.len() - 1].is_identity() {
            f = &f[..f.len() - 1];
        }
        Factorization { factors: f.to_vec(), target: self.target.clone() }
    }
}

impl std::fmt::Debug for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.factors.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", s.join(", "))
    }
}

#[derive(Serialize)]
struct FactorizationOut<'a> {
    d: usize,
    factors: &'a [Permutation],
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactorizationOut { d: self.degree(), factors: &self.factors }.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FactorRepr {
    OneLine(Vec<usize>),
    Cycles(Vec<Vec<usize>>),
}

#[derive(Deserialize)]
struct FactorizationIn {
    d: usize,
    factors: Vec<FactorRepr>,
}

impl<'de> Deserialize<'de> for Factorization {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = FactorizationIn::deserialize(de)?;
        let mut factors = Vec::with_capacity(raw.factors.len());
        for f in raw.factors {
            let p = match f {
                FactorRepr::OneLine(v) if v.len() == raw.d => Permutation::from_one_line(&v),
                FactorRepr::OneLine(v) => Err(Error::InvalidPermutation(format!("{v:?} has length != d = {}", raw.d))),
                FactorRepr::Cycles(c) => Permutation::from_cycles(raw.d, &c),
            }
            .map_err(serde::de::Error::custom)?;
            factors.push(p);
        }
        Factorization::new(factors).map_err(serde::de::Error::custom)
    }
}

/// A factorization of the long cycle.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Factorization", into = "Factorization")]
pub struct Constellation(Factorization);

impl TryFrom<Factorization> for Constellation {
    type Error = Error;
    fn try_from(f: Factorization) -> Result<Self> {
        Constellation::new(f)
    }
}

impl From<Constellation> for Factorization {
    fn from(c: Constellation) -> Factorization {
        c.0
    }
}

impl Constellation {
    pub fn new(f: Factorization) -> Result<Self> {
        if f.target != Permutation::long_cycle(f.degree()) {
            return Err(Error::Invariant(format!("constellation product {} is not the long cycle", f.target)));
        }
        Ok(Constellation(f))
    }

    pub fn from_factors(factors: Vec<Permutation>) -> Result<Self> {
        Self::new(Factorization::new(factors)?)
    }

    pub fn factorization(&self) -> &Factorization {
        &self.0
    }

    pub fn factors(&self) -> &[Permutation] {
        self.0.factors()
    }

    pub fn is_minimal(&self) -> bool {
        self.0.is_minimal()
    }

    pub fn stripped(&self) -> Constellation {
        Constellation(self.0.stripped())
    }
}

impl std::fmt::Debug for Constellation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

pub fn hurwitz_move(f: &Factorization, i: usize) -> Result<Factorization> {
    f.hurwitz_move(i)
}

/// Closure of `f` under moves and inverse moves, sorted.
pub fn hurwitz_orbit(f: &Factorization) -> Result<BTreeSet<Factorization>> {
    hurwitz_orbit_capped(f, DEFAULT_ORBIT_CAP)
}

pub fn hurwitz_orbit_capped(f: &Factorization, cap: usize) -> Result<BTreeSet<Factorization>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(f.clone());
    queue.push_back(f.clone());
    while let Some(g) = queue.pop_front() {
        for i in 1..g.len() {
            for h in [g.hurwitz_move(i)?, g.hurwitz_move_inverse(i)?] {
                if !seen.contains(&h) {
                    if seen.len() >= cap {
                        return Err(Error::OrbitCapExceeded(cap));
                    }
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
    }
    Ok(seen)
}

/// All tuples of `absolute_length(pi)` transpositions with product `pi`, by brute force.
pub fn minimal_transposition_factorizations(pi: &Permutation) -> Vec<Factorization> {
    let n = pi.degree();
    let k = pi.absolute_length();
    let mut transpositions = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            transpositions.push(Permutation::transposition(n, a, b).expect("a < b"));
        }
    }
    let mut out = Vec::new();
    // Depth-first search, pruning prefixes whose product is not below pi.
    fn rec(
        prefix: &mut Vec<Permutation>,
        prod: &Permutation,
        pi: &Permutation,
        k: usize,
        ts: &[Permutation],
        out: &mut Vec<Factorization>,
    ) {
        if prefix.len() == k {
            if prod == pi {
                out.push(Factorization::new(prefix.clone()).expect("same degree"));
            }
            return;
        }
        for t in ts {
            let next = prod.compose(t).expect("same degree");
            if next.absolute_length() == prefix.len() + 1 && next.absolute_leq(pi).expect("same degree") {
                prefix.push(t.clone());
                rec(prefix, &next, pi, k, ts, out);
                prefix.pop();
            }
        }
    }
    if k == 0 {
        return out;
    }
    rec(&mut Vec::new(), &Permutation::identity(n), pi, k, &transpositions, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize, a: usize, b: usize) -> Permutation {
        Permutation::transposition(n, a, b).unwrap()
    }

    #[test]
    fn move_example() {
        let f = Factorization::new(vec![t(3, 1, 2), t(3, 2, 3)]).unwrap();
        let g = f.hurwitz_move(1).unwrap();
        assert_eq!(g.factors(), &[t(3, 2, 3), t(3, 1, 3)]);
        assert_eq!(g.target(), f.target());
        assert_eq!(g.hurwitz_move_inverse(1).unwrap(), f);
        assert!(f.hurwitz_move(2).is_err());
        assert!(f.hurwitz_move(0).is_err());
    }

    #[test]
    fn orbit_d3() {
        let f = Factorization::new(vec![t(3, 1, 2), t(3, 2, 3)]).unwrap();
        let orbit = hurwitz_orbit(&f).unwrap();
        let want: BTreeSet<_> = [
            vec![t(3, 1, 2), t(3, 2, 3)],
            vec![t(3, 1, 3), t(3, 1, 2)],
            vec![t(3, 2, 3), t(3, 1, 3)],
        ]
        .into_iter()
        .map(|v| Factorization::new(v).unwrap())
        .collect();
        assert_eq!(orbit, want);
        let single = Factorization::new(vec![Permutation::long_cycle(3)]).unwrap();
        assert_eq!(hurwitz_orbit(&single).unwrap().len(), 1);
    }

    #[test]
    fn orbit_cap() {
        let f = minimal_transposition_factorizations(&Permutation::long_cycle(4)).remove(0);
        assert_eq!(hurwitz_orbit_capped(&f, 5), Err(Error::OrbitCapExceeded(5)));
    }

    #[test]
    fn brute_force_counts() {
        assert_eq!(minimal_transposition_factorizations(&Permutation::long_cycle(3)).len(), 3);
        assert_eq!(minimal_transposition_factorizations(&Permutation::long_cycle(4)).len(), 16);
        let tr = t(4, 2, 4);
        let f = minimal_transposition_factorizations(&tr);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].factors(), &[tr]);
    }

    #[test]
    fn json_accepts_cycles_and_emits_one_line() {
        let f: Factorization = serde_json::from_str(r#"{"d": 9, "factors": [[[1,3,7],[4,5]], [[1,2],[3,5,6],[7,8,9]]]}"#).unwrap();
        assert_eq!(f.target(), &Permutation::long_cycle(9));
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"d":9,"factors":[[3,2,7,5,4,6,1,8,9]"#));
        assert_eq!(serde_json::from_str::<Factorization>(&s).unwrap(), f);
        let c = Constellation::new(f).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<Constellation>(&s).unwrap(), c);
        assert!(serde_json::from_str::<Constellation>(r#"{"d":3,"factors":[[[1,2]]]}"#).is_err());
    }
}
