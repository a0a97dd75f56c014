use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of {1, ..., d}, stored as its image list (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    map: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(map: Vec<usize>) -> Result<Self> {
        Permutation::new(map)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.map
    }
}

impl Permutation {
    /// `map[k - 1]` is the image of `k`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let d = map.len();
        let mut seen = vec![false; d];
        for &v in &map {
            if v == 0 || v > d || seen[v - 1] {
                return Err(Error::Index(format!("{map:?} is not a permutation of 1..={d}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(d: usize) -> Self {
        Permutation { map: (1..=d).collect() }
    }

    /// The cycle (a_1 a_2 ... a_k) on {1..d}.
    pub fn cycle(d: usize, points: &[usize]) -> Result<Self> {
        let mut map: Vec<usize> = (1..=d).collect();
        for (k, &a) in points.iter().enumerate() {
            if a == 0 || a > d {
                return Err(Error::Index(format!("cycle point {a} outside 1..={d}")));
            }
            map[a - 1] = points[(k + 1) % points.len()];
        }
        Permutation::new(map)
    }

    pub fn random<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut map: Vec<usize> = (1..=d).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (k, &v) in self.map.iter().enumerate() {
            inv[v - 1] = k + 1;
        }
        Permutation { map: inv }
    }

    /// `self.compose(other)` maps i to self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation {
            map: other.map.iter().map(|&v| self.map[v - 1]).collect(),
        }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut out = Permutation::identity(self.degree());
        for _ in 0..n % self.order() {
            out = self.compose(&out);
        }
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.map.len()];
        let mut out = Vec::new();
        for start in 1..=self.map.len() {
            if seen[start - 1] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut k = start;
            while !seen[k - 1] {
                seen[k - 1] = true;
                cyc.push(k);
                k = self.map[k - 1];
            }
            out.push(cyc);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }
}
