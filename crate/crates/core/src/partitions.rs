//! Set partitions of `[n]`, their noncrossing refinements, and nesting forests.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Default largest `n` accepted by [`enumerate`].
pub const DEFAULT_BOUND: usize = 12;

/// Blocks of `{0, .., n-1}`, each sorted, ordered by minimal element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and canonicalizes 0-based blocks.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in b {
                if x >= n {
                    return Err(Error::InvalidPartition(format!("element {} outside [{n}]", x + 1)));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("element {} repeated", x + 1)));
                }
                seen[x] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("element {} missing", i + 1)));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// From a restricted-growth string: `rgs[i]` is the block index of `i`.
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let k = rgs.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        SetPartition {
            n: rgs.len(),
            blocks,
        }
    }

    pub fn rgs(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (j, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x] = j;
            }
        }
        out
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

    /// The one-block partition `{[n]}`.
    pub fn full(n: usize) -> Self {
        SetPartition {
            n,
            blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] },
        }
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() <= 1
    }

    /// Stack test: a block reopened while another is on top of it crosses.
    pub fn is_noncrossing(&self) -> bool {
        let rgs = self.rgs();
        let last: Vec<usize> = self.blocks.iter().map(|b| *b.last().unwrap()).collect();
        let mut stack: Vec<usize> = Vec::new();
        for (i, &b) in rgs.iter().enumerate() {
            let first = self.blocks[b][0] == i;
            if !first && stack.last() != Some(&b) {
                return false;
            }
            if first && last[b] != i {
                stack.push(b);
            } else if !first && last[b] == i {
                stack.pop();
            }
        }
        true
    }

    /// Noncrossing with `1` and `n` in a common block.
    pub fn is_irreducible(&self) -> Result<bool> {
        if !self.is_noncrossing() {
            return Err(Error::NotNoncrossing);
        }
        Ok(self.n == 0 || self.blocks[0].last() == Some(&(self.n - 1)))
    }

    fn is_interval(&self) -> bool {
        self.blocks.iter().all(|b| b.windows(2).all(|w| w[1] == w[0] + 1))
    }

    fn is_pair(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    pub fn is_kind(&self, kind: PartitionKind) -> bool {
        match kind {
            PartitionKind::All => true,
            PartitionKind::Noncrossing => self.is_noncrossing(),
            PartitionKind::Interval => self.is_interval(),
            PartitionKind::NcIrreducible => self.is_irreducible().unwrap_or(false),
            PartitionKind::Pair => self.is_pair(),
            PartitionKind::NcPair => self.is_pair() && self.is_noncrossing(),
        }
    }

    /// Hasse forest of the nesting order; roots are the outermost blocks.
    pub fn nesting_forest(&self) -> Result<Forest> {
        if !self.is_noncrossing() {
            return Err(Error::NotNoncrossing);
        }
        let k = self.blocks.len();
        let mut parent: Vec<Option<usize>> = vec![None; k];
        for (j, b) in self.blocks.iter().enumerate() {
            let (lo, hi) = (b[0], *b.last().unwrap());
            // The innermost surrounding block has the largest minimum.
            parent[j] = (0..j)
                .rev()
                .find(|&i| self.blocks[i][0] < lo && *self.blocks[i].last().unwrap() > hi);
        }
        let mut children = vec![Vec::new(); k];
        for (j, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(j);
            }
        }
        fn build(j: usize, children: &[Vec<usize>]) -> RootedTree {
            RootedTree {
                label: j,
                children: children[j].iter().map(|&c| build(c, children)).collect(),
            }
        }
        Ok(Forest(
            (0..k)
                .filter(|&j| parent[j].is_none())
                .map(|j| build(j, &children))
                .collect(),
        ))
    }
}

impl fmt::Display for SetPartition {
    /// 1-based text form such as `1,4|2,3`; the empty partition prints as an empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| (x + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&parts.join("|"))
    }
}

impl FromStr for SetPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SetPartition::full(0));
        }
        let blocks = s
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|x| {
                        let v: usize = x
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad element `{x}` in `{s}`")))?;
                        v.checked_sub(1)
                            .ok_or_else(|| Error::Parse(format!("elements start at 1 in `{s}`")))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = blocks.iter().map(Vec::len).sum();
        SetPartition::from_blocks(n, blocks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionKind {
    All,
    Noncrossing,
    Interval,
    NcIrreducible,
    Pair,
    NcPair,
}

impl PartitionKind {
    pub fn name(self) -> &'static str {
        match self {
            PartitionKind::All => "all",
            PartitionKind::Noncrossing => "noncrossing",
            PartitionKind::Interval => "interval",
            PartitionKind::NcIrreducible => "nc_irreducible",
            PartitionKind::Pair => "pair",
            PartitionKind::NcPair => "nc_pair",
        }
    }
}

impl FromStr for PartitionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use PartitionKind::*;
        [All, Noncrossing, Interval, NcIrreducible, Pair, NcPair]
            .into_iter()
            .find(|k| k.name() == s.trim().replace('-', "_"))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown partition kind `{s}`")))
    }
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Enumeration with the default size bound.
pub fn enumerate(kind: PartitionKind, n: usize) -> Result<Vec<SetPartition>> {
    enumerate_bounded(kind, n, DEFAULT_BOUND)
}

/// All partitions of the given kind, sorted by restricted-growth string.
pub fn enumerate_bounded(kind: PartitionKind, n: usize, bound: usize) -> Result<Vec<SetPartition>> {
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    let mut out = match kind {
        PartitionKind::All => all_rgs(n),
        PartitionKind::Noncrossing => noncrossing(n),
        PartitionKind::NcIrreducible => noncrossing(n)
            .into_iter()
            .filter(|p| p.is_irreducible().unwrap_or(false))
            .collect(),
        PartitionKind::NcPair => noncrossing(n).into_iter().filter(|p| p.is_pair()).collect(),
        PartitionKind::Interval => intervals(n),
        PartitionKind::Pair => pairings(n),
    };
    out.sort_by_cached_key(|p| p.rgs());
    Ok(out)
}

fn all_rgs(n: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = Vec::with_capacity(n);
    fn rec(n: usize, rgs: &mut Vec<usize>, max: usize, out: &mut Vec<SetPartition>) {
        if rgs.len() == n {
            out.push(SetPartition::from_rgs(rgs));
            return;
        }
        let bound = if rgs.is_empty() { 0 } else { max + 1 };
        for b in 0..=bound {
            rgs.push(b);
            rec(n, rgs, max.max(b), out);
            rgs.pop();
        }
    }
    rec(n, &mut rgs, 0, &mut out);
    out
}

/// Direct generator: choose the block of the first element, then fill the gaps independently.
fn noncrossing(n: usize) -> Vec<SetPartition> {
    nc_range(0, n)
        .into_iter()
        .map(|blocks| SetPartition::from_blocks(n, blocks).expect("generator yields partitions"))
        .collect()
}

fn nc_range(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo == hi {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    grow(vec![lo], hi, &mut vec![], &mut out);
    out
}

fn grow(
    block: Vec<usize>,
    hi: usize,
    gaps: &mut Vec<Vec<Vec<usize>>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let last = *block.last().unwrap();
    // Stop here: everything after `last` is partitioned on its own.
    for tail in nc_range(last + 1, hi) {
        let mut blocks = vec![block.clone()];
        blocks.extend(gaps.iter().flatten().cloned());
        blocks.extend(tail);
        out.push(blocks);
    }
    for next in last + 1..hi {
        for gap in nc_range(last + 1, next) {
            let mut b = block.clone();
            b.push(next);
            gaps.push(gap);
            grow(b, hi, gaps, out);
            gaps.pop();
        }
    }
}

fn intervals(n: usize) -> Vec<SetPartition> {
    if n == 0 {
        return vec![SetPartition::full(0)];
    }
    (0..1u64 << (n - 1))
        .map(|cuts| {
            let mut blocks = vec![vec![0]];
            for i in 1..n {
                if cuts >> (i - 1) & 1 == 1 {
                    blocks.push(vec![i]);
                } else {
                    blocks.last_mut().unwrap().push(i);
                }
            }
            SetPartition { n, blocks }
        })
        .collect()
}

fn pairings(n: usize) -> Vec<SetPartition> {
    if n % 2 == 1 {
        return vec![];
    }
    let mut out = Vec::new();
    fn rec(free: &[usize], acc: &mut Vec<Vec<usize>>, n: usize, out: &mut Vec<SetPartition>) {
        if free.is_empty() {
            out.push(SetPartition::from_blocks(n, acc.clone()).unwrap());
            return;
        }
        for j in 1..free.len() {
            acc.push(vec![free[0], free[j]]);
            let rest: Vec<usize> = free[1..]
                .iter()
                .enumerate()
                .filter(|&(i, _)| i + 1 != j)
                .map(|(_, &x)| x)
                .collect();
            rec(&rest, acc, n, out);
            acc.pop();
        }
    }
    let free: Vec<usize> = (0..n).collect();
    rec(&free, &mut Vec::new(), n, &mut out);
    out
}

/// A rooted tree whose nodes carry block indices; children are unordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub label: usize,
    pub children: Vec<RootedTree>,
}

impl RootedTree {
    pub fn node(label: usize) -> Self {
        RootedTree {
            label,
            children: vec![],
        }
    }

    /// A path of `len` nodes.
    pub fn chain(len: usize) -> Self {
        assert!(len >= 1);
        let mut t = RootedTree::node(len - 1);
        for l in (0..len - 1).rev() {
            t = RootedTree {
                label: l,
                children: vec![t],
            };
        }
        t
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(RootedTree::size).sum::<usize>()
    }

    /// `t! = |t| · Π s_i!` over the subtrees at the root.
    pub fn factorial(&self) -> BigInt {
        self.children
            .iter()
            .fold(BigInt::from(self.size()), |acc, c| acc * c.factorial())
    }

    /// Number of strictly order-preserving maps into `{1..m}` (root smallest).
    fn strict_maps(&self, m: usize) -> BigInt {
        (1..=m)
            .map(|v| {
                self.children
                    .iter()
                    .fold(BigInt::one(), |acc, c| acc * c.strict_maps(m - v))
            })
            .sum()
    }

    /// `ω_k`: strictly order-preserving surjections onto `{1..k}`, by inclusion-exclusion.
    pub fn omega_k(&self, k: usize) -> BigInt {
        (0..=k)
            .map(|j| {
                let term = scalar::binomial(k, j) * self.strict_maps(j);
                if (k - j) % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    /// `ω(t) = Σ_k (-1)^{k-1} ω_k(t) / k`.
    pub fn omega_weight(&self) -> Scalar {
        let p = self.size();
        (1..=p)
            .map(|k| {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                Scalar::new(self.omega_k(k) * sign, BigInt::from(k))
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest(pub Vec<RootedTree>);

impl Forest {
    pub fn trees(&self) -> &[RootedTree] {
        &self.0
    }

    /// Product of the tree factorials.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, t| acc * t.factorial())
    }
}

pub fn tree_factorial(f: &Forest) -> Scalar {
    scalar::from_big(f.factorial())
}

pub fn omega_weight(t: &RootedTree) -> Scalar {
    t.omega_weight()
}

/// Signed Stirling number of the first kind: coefficient of `x^i` in `x(x-1)...(x-j+1)`.
pub fn stirling_first(j: usize, i: usize) -> Result<Scalar> {
    if i > j {
        return Err(Error::InvalidArgument(format!("stirling_first({j}, {i}) needs i <= j")));
    }
    Ok(scalar::from_big(stirling_row(j).swap_remove(i)))
}

/// Coefficients of the falling factorial `x(x-1)...(x-j+1)`, lowest degree first.
pub fn stirling_row(j: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 0..j {
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (i, c) in row.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigInt::from(m);
        }
        row = next;
    }
    row
}
