//! Set partitions of a finite ground set in canonical block form.
//!
//! Positions are 0-based in the Rust API. The text form (`"1,3|2"`) and the
//! JSON form (`[[1,3],[2]]`) are 1-based, matching the usual notation for
//! partitions of `{1, ..., n}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A partition of `{0, ..., n-1}`.
///
/// Blocks are sorted ascending and ordered by their minima. Equality, hashing
/// and ordering go through the restricted growth string, so the derived
/// order is the lexicographic order on canonical forms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    rgs: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from a restricted growth string
    /// (`rgs[0] = 0`, `rgs[i] <= 1 + max(rgs[..i])`).
    pub fn from_rgs(rgs: Vec<usize>) -> Result<Self> {
        let mut next = 0usize;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &b) in rgs.iter().enumerate() {
            if b > next {
                return Err(Error::InvalidPartition(format!(
                    "not a restricted growth string at position {i}: {rgs:?}"
                )));
            }
            if b == next {
                blocks.push(Vec::new());
                next += 1;
            }
            blocks[b].push(i);
        }
        Ok(Self { n: rgs.len(), rgs, blocks })
    }

    /// Builds a partition from 0-based blocks in any order. The result is canonical.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (bi, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &e in block {
                if e >= n {
                    return Err(Error::InvalidPartition(format!("element {} outside ground set of size {n}", e + 1)));
                }
                if owner[e] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("element {} appears twice", e + 1)));
                }
                owner[e] = bi;
            }
        }
        if let Some(missing) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!("element {} not covered", missing + 1)));
        }
        Ok(kernel(&owner))
    }

    /// The all-singletons partition (bottom of the lattice).
    pub fn singletons(n: usize) -> Self {
        Self::from_rgs((0..n).collect()).expect("identity is a restricted growth string")
    }

    /// The one-block partition (top of the lattice).
    pub fn one_block(n: usize) -> Self {
        Self::from_rgs(vec![0; n]).expect("constant string is a restricted growth string")
    }

    /// Consecutive pairs `{0,1}, {2,3}, ...` of a ground set of size `2m`.
    pub fn consecutive_pairs(m: usize) -> Self {
        Self::from_rgs((0..2 * m).map(|i| i / 2).collect()).expect("valid restricted growth string")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Index of the block containing position `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.rgs[i]
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    /// Block bitmasks; requires `n <= 64`.
    pub fn block_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "block masks need n <= 64");
        self.blocks.iter().map(|b| b.iter().fold(0u64, |m, &e| m | (1 << e))).collect()
    }

    pub fn is_top(&self) -> bool {
        self.blocks.len() == 1 || self.n == 0
    }

    pub fn is_pair(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// Every block is a run of consecutive positions.
    pub fn is_interval(&self) -> bool {
        self.blocks.iter().all(|b| b[b.len() - 1] - b[0] + 1 == b.len())
    }

    /// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
    pub fn is_noncrossing(&self) -> bool {
        // For each pair of blocks it suffices to find one interleaving.
        let r = &self.rgs;
        for a in 0..self.n {
            for b in a + 1..self.n {
                if r[b] == r[a] {
                    continue;
                }
                for c in b + 1..self.n {
                    if r[c] != r[a] {
                        continue;
                    }
                    if (c + 1..self.n).any(|d| r[d] == r[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of crossing pairs of blocks `{a,c}, {b,d}` with `a < b < c < d`.
    pub fn crossing_number(&self) -> Result<usize> {
        if !self.is_pair() {
            return Err(Error::NotPairPartition(self.to_string()));
        }
        let mut count = 0;
        for (i, p) in self.blocks.iter().enumerate() {
            for q in &self.blocks[i + 1..] {
                // blocks are ordered by minimum, so p[0] < q[0]
                if q[0] < p[1] && p[1] < q[1] {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Lattice supremum: transitive closure of block overlap.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_size(other)?;
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for blocks in [&self.blocks, &other.blocks] {
            for b in blocks.iter() {
                for w in b.windows(2) {
                    let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    if x != y {
                        parent[x.max(y)] = x.min(y);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..self.n).map(|i| find(&mut parent, i)).collect();
        Ok(kernel(&roots))
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Partition) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.refines(other))
    }

    pub(crate) fn refines(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&e| other.rgs[e] == other.rgs[b[0]]))
    }

    /// `true` if `self` is finer than the kernel of `labels`, i.e. each block is label-constant.
    pub fn is_below_kernel<L: PartialEq>(&self, labels: &[L]) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&e| labels[e] == labels[b[0]]))
    }

    fn check_size(&self, other: &Partition) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(format!("partitions of {} and {} elements", self.n, other.n)));
        }
        Ok(())
    }

    /// Möbius function `mu(self, 1)` of the partition lattice. The interval
    /// above a partition with `k` blocks is isomorphic to the lattice of
    /// partitions of a `k`-set, so `mu = (-1)^(k-1) (k-1)!`.
    pub fn mobius_to_top<T: Scalar>(&self) -> T {
        signed_factorial(self.num_blocks())
    }

    /// Möbius function `mu(self, upper)`, a product over the blocks of `upper`.
    pub fn mobius<T: Scalar>(&self, upper: &Partition) -> Result<T> {
        if !self.leq(upper)? {
            return Ok(T::zero());
        }
        let mut count = vec![0usize; upper.num_blocks()];
        for b in &self.blocks {
            count[upper.rgs[b[0]]] += 1;
        }
        Ok(count.into_iter().fold(T::one(), |acc, k| acc * signed_factorial::<T>(k)))
    }

    /// Number of maps `[n] -> [pool]` whose kernel is exactly this partition.
    pub fn count_kernel_maps(&self, pool: u64) -> BigUint {
        let k = self.num_blocks() as u64;
        if k > pool {
            return BigUint::from(0u32);
        }
        (0..k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(pool - i))
    }

    /// The partition induced on the positions selected by `mask`, relabelled
    /// to `0..popcount(mask)` in increasing order.
    pub fn restrict(&self, mask: u64) -> Partition {
        let labels: Vec<usize> = (0..self.n).filter(|&i| mask & (1 << i) != 0).map(|i| self.rgs[i]).collect();
        kernel(&labels)
    }

    /// 1-based blocks, as used by the JSON form.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|e| e + 1).collect()).collect()
    }

    /// Parses 1-based blocks; refuses non-canonical input.
    pub fn from_one_based(blocks: &[Vec<usize>]) -> Result<Self> {
        let n = blocks.iter().map(Vec::len).sum();
        let zero: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| b.iter().map(|&e| e.checked_sub(1).ok_or_else(|| Error::InvalidPartition("element 0".into()))).collect())
            .collect::<Result<_>>()?;
        let p = Self::from_blocks(n, zero.clone())?;
        if p.blocks != zero {
            return Err(Error::InvalidPartition(format!("blocks not in canonical order: {blocks:?}")));
        }
        Ok(p)
    }
}

fn signed_factorial<T: Scalar>(k: usize) -> T {
    // (-1)^(k-1) (k-1)!
    if k == 0 {
        return T::one();
    }
    let f = (1..k).fold(T::one(), |acc, i| acc * T::from_int(i as i64));
    if k.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

/// Kernel of a labelling: positions share a block iff their labels agree.
pub fn kernel<L: PartialEq>(labels: &[L]) -> Partition {
    let mut seen: Vec<&L> = Vec::new();
    let rgs = labels
        .iter()
        .map(|l| match seen.iter().position(|s| *s == l) {
            Some(i) => i,
            None => {
                seen.push(l);
                seen.len() - 1
            }
        })
        .collect();
    Partition::from_rgs(rgs).expect("first-occurrence numbering is a restricted growth string")
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, e) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", e + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::singletons(0));
        }
        let blocks = s
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|e| e.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad element '{e}' in '{s}'"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::from_one_based(&blocks)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(deserializer)?;
        Partition::from_one_based(&blocks).map_err(serde::de::Error::custom)
    }
}
