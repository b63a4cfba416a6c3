//! Enumeration of partition sublattices.
//!
//! [`enumerate`] returns partitions in lexicographic order of their
//! restricted growth strings, so `enumerate(f, n)` equals
//! `enumerate(All, n)` filtered by [`LatticeFamily::contains`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LatticeFamily {
    All,
    Pair,
    NonCrossing,
    Interval,
    NonCrossingPair,
    IntervalPair,
}

impl LatticeFamily {
    pub const ALL: [LatticeFamily; 6] = [
        LatticeFamily::All,
        LatticeFamily::Pair,
        LatticeFamily::NonCrossing,
        LatticeFamily::Interval,
        LatticeFamily::NonCrossingPair,
        LatticeFamily::IntervalPair,
    ];

    pub fn contains(self, p: &Partition) -> bool {
        match self {
            LatticeFamily::All => true,
            LatticeFamily::Pair => p.is_pair(),
            LatticeFamily::NonCrossing => p.is_noncrossing(),
            LatticeFamily::Interval => p.is_interval(),
            LatticeFamily::NonCrossingPair => p.is_pair() && p.is_noncrossing(),
            LatticeFamily::IntervalPair => p.is_pair() && p.is_interval(),
        }
    }

    /// Whether the family contains the one-block partition of every size,
    /// which is what a moment-cumulant calculus needs to be invertible.
    pub fn is_calculus(self) -> bool {
        matches!(self, LatticeFamily::All | LatticeFamily::NonCrossing | LatticeFamily::Interval)
    }

    pub fn name(self) -> &'static str {
        match self {
            LatticeFamily::All => "all",
            LatticeFamily::Pair => "pair",
            LatticeFamily::NonCrossing => "noncrossing",
            LatticeFamily::Interval => "interval",
            LatticeFamily::NonCrossingPair => "noncrossing-pair",
            LatticeFamily::IntervalPair => "interval-pair",
        }
    }
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeFamily {
    type Err = Error;

    /// Accepts the family names plus the calculus aliases
    /// `classical`, `free` and `boolean`.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "all" | "classical" => LatticeFamily::All,
            "pair" => LatticeFamily::Pair,
            "noncrossing" | "nc" | "free" => LatticeFamily::NonCrossing,
            "interval" | "boolean" => LatticeFamily::Interval,
            "noncrossing-pair" | "ncpair" => LatticeFamily::NonCrossingPair,
            "interval-pair" => LatticeFamily::IntervalPair,
            other => return Err(Error::Parse(format!("unknown lattice family '{other}'"))),
        })
    }
}

/// Iterator over all set partitions of `[n]` by restricted growth strings.
/// Restartable by construction and free of recursion.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    rgs: Vec<usize>,
    // prefix maxima: max[i] = max(rgs[..=i])
    max: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        Self { rgs: vec![0; n], max: vec![0; n], done: false }
    }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_rgs(self.rgs.clone()).expect("iterator maintains a restricted growth string");
        // advance: rightmost position that can still grow
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.max[i - 1] {
                self.rgs[i] += 1;
                self.max[i] = self.max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.max[j] = self.max[i];
                }
                break;
            }
        }
        Some(current)
    }
}

/// All members of `family` on a ground set of size `n`, lexicographically ordered.
pub fn enumerate(family: LatticeFamily, n: usize) -> Vec<Partition> {
    let mut out = match family {
        LatticeFamily::All => return SetPartitions::new(n).collect(),
        LatticeFamily::Pair => pairings(n, false),
        LatticeFamily::NonCrossingPair => pairings(n, true),
        LatticeFamily::NonCrossing => noncrossing(n),
        LatticeFamily::Interval => intervals(n),
        LatticeFamily::IntervalPair => {
            if n.is_multiple_of(2) {
                vec![Partition::consecutive_pairs(n / 2)]
            } else {
                Vec::new()
            }
        }
    };
    out.sort();
    out
}

/// Partitions of a family together with their block bitmasks, shared
/// through a process-wide cache. Entries are immutable once built.
#[derive(Debug)]
pub struct PartitionTable {
    pub partitions: Vec<Partition>,
    pub masks: Vec<Vec<u64>>,
}

/// Cached variant of [`enumerate`] used by the hot summation loops.
pub fn table(family: LatticeFamily, n: usize) -> Arc<PartitionTable> {
    static CACHE: OnceLock<Mutex<HashMap<(LatticeFamily, usize), Arc<PartitionTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("partition cache poisoned").get(&(family, n)) {
        return Arc::clone(t);
    }
    let partitions = enumerate(family, n);
    let masks = partitions.iter().map(Partition::block_masks).collect();
    let built = Arc::new(PartitionTable { partitions, masks });
    let mut guard = cache.lock().expect("partition cache poisoned");
    Arc::clone(guard.entry((family, n)).or_insert(built))
}

/// Members `rho` of `family` with `rho v grouping = 1`.
pub fn connecting_partitions(grouping: &Partition, family: LatticeFamily) -> Vec<Partition> {
    let n = grouping.n();
    enumerate(family, n)
        .into_iter()
        .filter(|rho| rho.join(grouping).expect("same ground set").is_top())
        .collect()
}

/// Pairings built by matching the smallest unmatched element first.
fn pairings(n: usize, noncrossing_only: bool) -> Vec<Partition> {
    // `free` is kept sorted; the first element is matched with each candidate partner
    fn rec(free: &[usize], pairs: &mut Vec<Vec<usize>>, noncrossing_only: bool, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&first, rest)) = free.split_first() else {
            out.push(pairs.clone());
            return;
        };
        for k in 0..rest.len() {
            // a noncrossing partner leaves an even number of elements inside the arc,
            // and those can only pair among themselves
            if noncrossing_only && k % 2 == 1 {
                continue;
            }
            pairs.push(vec![first, rest[k]]);
            if noncrossing_only {
                let mut inner = Vec::new();
                rec(&rest[..k], &mut Vec::new(), true, &mut inner);
                for a in inner {
                    let mark = pairs.len();
                    pairs.extend(a);
                    rec(&rest[k + 1..], pairs, true, out);
                    pairs.truncate(mark);
                }
            } else {
                let remaining: Vec<usize> = rest[..k].iter().chain(&rest[k + 1..]).copied().collect();
                rec(&remaining, pairs, false, out);
            }
            pairs.pop();
        }
    }

    if n % 2 == 1 {
        return Vec::new();
    }
    let free: Vec<usize> = (0..n).collect();
    let mut raw = Vec::new();
    rec(&free, &mut Vec::new(), noncrossing_only, &mut raw);
    raw.into_iter().map(|b| Partition::from_blocks(n, b).expect("pairs cover the ground set")).collect()
}

/// Noncrossing partitions by splitting at the block of the first element:
/// the gaps between consecutive elements of that block, and the tail after
/// it, are filled independently with noncrossing partitions.
fn noncrossing(n: usize) -> Vec<Partition> {
    // memo[len] = noncrossing partitions of 0..len as block lists
    let mut memo: Vec<Vec<Vec<Vec<usize>>>> = vec![vec![Vec::new()]];
    for len in 1..=n {
        let mut all = Vec::new();
        // subsets of 1..len joined to 0, as bitmasks over positions 1..len
        for subset in 0u64..(1u64 << (len - 1)) {
            let mut head = vec![0usize];
            head.extend((1..len).filter(|&i| subset & (1 << (i - 1)) != 0));
            // gap boundaries
            let mut gaps: Vec<(usize, usize)> = head.windows(2).map(|w| (w[0] + 1, w[1])).collect();
            gaps.push((head[head.len() - 1] + 1, len));
            let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![head.clone()]];
            for &(lo, hi) in &gaps {
                if lo >= hi {
                    continue;
                }
                let fills = &memo[hi - lo];
                let mut next = Vec::with_capacity(partial.len() * fills.len());
                for base in &partial {
                    for fill in fills {
                        let mut blocks = base.clone();
                        blocks.extend(fill.iter().map(|b| b.iter().map(|e| e + lo).collect::<Vec<_>>()));
                        next.push(blocks);
                    }
                }
                partial = next;
            }
            all.extend(partial);
        }
        memo.push(all);
    }
    memo.pop()
        .unwrap_or_default()
        .into_iter()
        .map(|blocks| Partition::from_blocks(n, blocks).expect("generated blocks cover the ground set"))
        .collect()
}

/// Interval partitions, one per composition of `n`.
fn intervals(n: usize) -> Vec<Partition> {
    if n == 0 {
        return vec![Partition::singletons(0)];
    }
    (0u64..(1u64 << (n - 1)))
        .map(|cuts| {
            let mut rgs = Vec::with_capacity(n);
            let mut block = 0;
            rgs.push(0);
            for i in 1..n {
                if cuts & (1 << (i - 1)) != 0 {
                    block += 1;
                }
                rgs.push(block);
            }
            Partition::from_rgs(rgs).expect("interval labelling is a restricted growth string")
        })
        .collect()
}
