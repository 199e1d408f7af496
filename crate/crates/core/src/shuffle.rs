//! Shuffle/deconcatenation bialgebra on words, the convolution algebra of
//! graded endomorphisms in fixed degree, and exact card-shuffling chains.
//!
//! A degree-`n` endomorphism in the convolution algebra acts on repetition-free
//! words by place permutations, `w ↦ w∘σ`, so it is stored as an element of the
//! group algebra `Q[S_n]`. Decks of `n` distinct cards are permutations.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::partitions::stirling_row;
use crate::scalar::{self, Scalar};
use crate::word::Word;

/// Default largest deck size for exact matrices.
pub const DEFAULT_BOUND: usize = 6;
/// Hard ceiling on the configurable bound.
pub const MAX_BOUND: usize = 7;

/// `u ш v`, with multiplicities.
pub fn shuffle_product(u: &Word, v: &Word) -> LinComb<Word> {
    fn rec(u: &[u8], v: &[u8], prefix: &mut Vec<u8>, out: &mut LinComb<Word>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            out.add_term(Word(w), Scalar::one());
            return;
        }
        prefix.push(u[0]);
        rec(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0]);
        rec(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let mut out = LinComb::zero();
    rec(u.letters(), v.letters(), &mut Vec::new(), &mut out);
    out
}

/// `Δ(w) = Σ_i w[..i] ⊗ w[i..]`.
pub fn deconcat(w: &Word) -> LinComb<(Word, Word)> {
    (0..=w.len())
        .map(|i| ((w.slice(0, i), w.slice(i, w.len())), Scalar::one()))
        .collect()
}

/// One-line notation over `{0..n-1}`; also a deck of `n` distinct cards.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(pub Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(self ∘ other)(i) = self(other(i))`; as decks, `other` rearranges the positions of `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    /// `self ⊕ other` acting on `{0..n+m-1}`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.0.len() as u8;
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&x| x + n));
        Permutation(v)
    }
}

impl fmt::Display for Permutation {
    /// Deck notation: card 0 is `A`, card 1 is `B`, and so on.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.0 {
            write!(f, "{}", (b'A' + c) as char)?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let cards: Vec<u8> = s
            .trim()
            .bytes()
            .map(|c| {
                let c = c.to_ascii_uppercase();
                if c.is_ascii_uppercase() {
                    Ok(c - b'A')
                } else {
                    Err(Error::Parse(format!("bad card `{}` in deck `{s}`", c as char)))
                }
            })
            .collect::<Result<_>>()?;
        let mut seen = cards.clone();
        seen.sort_unstable();
        if seen != (0..cards.len() as u8).collect::<Vec<_>>() {
            return Err(Error::Parse(format!("deck `{s}` is not a permutation of the first {} cards", cards.len())));
        }
        Ok(Permutation(cards))
    }
}

/// Parses a deck of `n` cards; `identity` is accepted.
pub fn parse_deck(s: &str, n: usize) -> Result<Permutation> {
    let p = if s.trim() == "identity" {
        Permutation::identity(n)
    } else {
        s.parse()?
    };
    if p.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: p.len(),
        });
    }
    Ok(p)
}

/// `S_n` with permutations in lexicographic order and, for small `n`, a multiplication table.
#[derive(Debug)]
pub struct SymmetricGroup {
    n: usize,
    perms: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    table: Option<Vec<u16>>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Arc<Self> {
        let mut perms = vec![Permutation::identity(n)];
        fn next(p: &mut [u8]) -> bool {
            let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
                return false;
            };
            let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
            true
        }
        let mut cur = perms[0].0.clone();
        while next(&mut cur) {
            perms.push(Permutation(cur.clone()));
        }
        let index: HashMap<Permutation, usize> =
            perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = (n <= 6).then(|| {
            perms
                .par_iter()
                .flat_map_iter(|a| perms.iter().map(|b| index[&a.compose(b)] as u16).collect::<Vec<_>>())
                .collect()
        });
        Arc::new(SymmetricGroup {
            n,
            perms,
            index,
            table,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn index_of(&self, p: &Permutation) -> usize {
        self.index[p]
    }

    fn mul_index(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.perms.len() + j] as usize,
            None => self.index[&self.perms[i].compose(&self.perms[j])],
        }
    }
}

/// An element of `Q[S_n]`, read as a degree-`n` endomorphism of repetition-free words.
#[derive(Clone)]
pub struct GradedEndo {
    group: Arc<SymmetricGroup>,
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for GradedEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(p, c)| format!("{}·{p}", scalar::format_scalar(c)))
            .collect();
        write!(f, "GradedEndo[{}]({})", self.group.n, terms.join(" + "))
    }
}

impl PartialEq for GradedEndo {
    fn eq(&self, other: &Self) -> bool {
        self.group.n == other.group.n && self.coeffs == other.coeffs
    }
}

impl GradedEndo {
    pub fn zero(group: &Arc<SymmetricGroup>) -> Self {
        GradedEndo {
            group: group.clone(),
            coeffs: vec![Scalar::zero(); group.order()],
        }
    }

    pub fn identity(group: &Arc<SymmetricGroup>) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[0] = Scalar::one();
        e
    }

    pub fn from_coeffs(group: &Arc<SymmetricGroup>, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::LengthMismatch {
                expected: group.order(),
                got: coeffs.len(),
            });
        }
        Ok(GradedEndo {
            group: group.clone(),
            coeffs,
        })
    }

    pub fn group(&self) -> &Arc<SymmetricGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.group.n
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, p: &Permutation) -> Scalar {
        self.coeffs[self.group.index_of(p)].clone()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Scalar)> {
        self.group
            .perms
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        GradedEndo {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GradedEndo {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        GradedEndo {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Group-algebra product `self · other` (permutations composed as `x∘y`).
    pub fn mul(&self, other: &Self) -> Self {
        let g = &self.group;
        let (da, a) = integer_form(&self.coeffs);
        let (db, b) = integer_form(&other.coeffs);
        let rows: Vec<(usize, &BigInt)> = a.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let cols: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let small = |v: &[(usize, &BigInt)]| v.iter().all(|(_, c)| i64::try_from(*c).is_ok());
        let nums: Vec<BigInt> = if small(&rows) && small(&cols) {
            let cols: Vec<(usize, i128)> = cols.iter().map(|(j, c)| (*j, i64::try_from(*c).unwrap() as i128)).collect();
            let acc = rows
                .par_chunks(32)
                .map(|chunk| {
                    let mut acc = vec![0i128; g.order()];
                    for &(i, x) in chunk {
                        let x = i64::try_from(x).unwrap() as i128;
                        for &(j, y) in &cols {
                            acc[g.mul_index(i, j)] += x * y;
                        }
                    }
                    acc
                })
                .reduce(|| vec![0i128; g.order()], |mut l, r| {
                    l.iter_mut().zip(r).for_each(|(x, y)| *x += y);
                    l
                });
            acc.into_iter().map(BigInt::from).collect()
        } else {
            rows.par_chunks(16)
                .map(|chunk| {
                    let mut acc = vec![BigInt::zero(); g.order()];
                    for &(i, x) in chunk {
                        for &(j, y) in &cols {
                            acc[g.mul_index(i, j)] += x * y;
                        }
                    }
                    acc
                })
                .reduce(|| vec![BigInt::zero(); g.order()], |mut l, r| {
                    l.iter_mut().zip(r).for_each(|(x, y)| *x += y);
                    l
                })
        };
        let den = da * db;
        GradedEndo {
            group: g.clone(),
            coeffs: nums.into_iter().map(|x| Scalar::new(x, den.clone())).collect(),
        }
    }

    /// Composition of endomorphisms, `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        // w ↦ w∘y then w∘y ↦ w∘y∘x, so E_x ∘ E_y = E_{y·x}.
        other.mul(self)
    }

    /// Action on a word of length `n`.
    pub fn apply(&self, w: &Word) -> Result<LinComb<Word>> {
        if w.len() != self.degree() {
            return Err(Error::LengthMismatch {
                expected: self.degree(),
                got: w.len(),
            });
        }
        Ok(self
            .terms()
            .map(|(p, c)| (Word(p.0.iter().map(|&i| w.letters()[i as usize]).collect()), c.clone()))
            .collect())
    }

    /// Trace on the span of repetition-free words: `n! · coefficient of the identity`.
    pub fn trace(&self) -> Scalar {
        &self.coeffs[0] * scalar::from_big(BigInt::from(self.group.order()))
    }

    /// Dense matrix over decks: entry `(τ, τ∘σ)` accumulates the coefficient of `σ`.
    pub fn matrix(&self) -> Vec<Vec<Scalar>> {
        let g = &self.group;
        let n = g.order();
        (0..n)
            .into_par_iter()
            .map(|t| {
                let mut row = vec![Scalar::zero(); n];
                for (s, c) in self.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        row[g.mul_index(t, s)] += c;
                    }
                }
                row
            })
            .collect()
    }
}

/// A common denominator and the integer numerators over it.
fn integer_form(coeffs: &[Scalar]) -> (BigInt, Vec<BigInt>) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let nums = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    (den, nums)
}

/// Permutations whose one-line form interleaves consecutive blocks of the given sizes in order.
pub fn shuffles(parts: &[usize]) -> Vec<Permutation> {
    let mut starts = Vec::with_capacity(parts.len());
    let mut s = 0u8;
    for &p in parts {
        starts.push(s);
        s += p as u8;
    }
    let n = s as usize;
    let mut out = Vec::new();
    fn rec(
        parts: &[usize],
        starts: &[u8],
        used: &mut Vec<usize>,
        cur: &mut Vec<u8>,
        n: usize,
        out: &mut Vec<Permutation>,
    ) {
        if cur.len() == n {
            out.push(Permutation(cur.clone()));
            return;
        }
        for b in 0..parts.len() {
            if used[b] < parts[b] {
                cur.push(starts[b] + used[b] as u8);
                used[b] += 1;
                rec(parts, starts, used, cur, n, out);
                used[b] -= 1;
                cur.pop();
            }
        }
    }
    rec(parts, &starts, &mut vec![0; parts.len()], &mut Vec::new(), n, &mut out);
    out
}

/// The convolution algebra of graded endomorphisms restricted to degrees `0..=n`.
pub struct DescentAlgebra {
    n: usize,
    groups: Vec<Arc<SymmetricGroup>>,
}

/// A graded family `(f_0, …, f_n)`.
pub type Family = Vec<GradedEndo>;

impl DescentAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_bound(n, DEFAULT_BOUND)
    }

    pub fn with_bound(n: usize, bound: usize) -> Result<Self> {
        let bound = bound.min(MAX_BOUND);
        if n > bound {
            return Err(Error::BoundExceeded { n, bound });
        }
        Ok(DescentAlgebra {
            n,
            groups: (0..=n).map(SymmetricGroup::new).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn group(&self, m: usize) -> &Arc<SymmetricGroup> {
        &self.groups[m]
    }

    /// `Id`.
    pub fn identity(&self) -> Family {
        self.groups.iter().map(GradedEndo::identity).collect()
    }

    /// `p_k`: identity in degree `k`, zero elsewhere.
    pub fn projection(&self, k: usize) -> Family {
        self.groups
            .iter()
            .enumerate()
            .map(|(m, g)| if m == k { GradedEndo::identity(g) } else { GradedEndo::zero(g) })
            .collect()
    }

    /// `ν`: the unit of convolution, identity in degree 0 only.
    pub fn unit(&self) -> Family {
        self.projection(0)
    }

    /// `J = Id - ν`.
    pub fn augmentation(&self) -> Family {
        let mut j = self.identity();
        j[0] = GradedEndo::zero(&self.groups[0]);
        j
    }

    /// `(f∗g)_m = Σ_i Σ_{σ ∈ Sh(i, m-i)} (f_i ⊕ g_{m-i})·σ`.
    pub fn convolve(&self, f: &Family, g: &Family) -> Family {
        (0..=self.n)
            .map(|m| {
                let grp = &self.groups[m];
                let mut coeffs = vec![Scalar::zero(); grp.order()];
                for i in 0..=m {
                    let sh: Vec<usize> = shuffles(&[i, m - i]).iter().map(|s| grp.index_of(s)).collect();
                    for (rho, a) in f[i].terms() {
                        for (pi, b) in g[m - i].terms() {
                            let ab = a * b;
                            let base = grp.index_of(&rho.direct_sum(pi));
                            for &s in &sh {
                                coeffs[grp.mul_index(base, s)] += &ab;
                            }
                        }
                    }
                }
                GradedEndo {
                    group: grp.clone(),
                    coeffs,
                }
            })
            .collect()
    }

    /// `f^{∗k}`, with `f^{∗0} = ν`.
    pub fn power(&self, f: &Family, k: usize) -> Family {
        (0..k).fold(self.unit(), |acc, _| self.convolve(&acc, f))
    }

    /// `Ψ^k = Id^{∗k}` in degree `n`.
    pub fn psi(&self, k: usize) -> GradedEndo {
        self.power(&self.identity(), k).swap_remove(self.n)
    }

    /// `e^0, …, e^n` in degree `n`: `e^i = Σ_{j ≥ i} s(j,i) J^{∗j}/j!`.
    pub fn eulerian_idempotents(&self) -> Vec<GradedEndo> {
        let j = self.augmentation();
        let grp = &self.groups[self.n];
        let mut powers = vec![self.unit()[self.n].clone()];
        let mut cur = self.unit();
        for _ in 1..=self.n {
            cur = self.convolve(&cur, &j);
            powers.push(cur[self.n].clone());
        }
        let rows: Vec<Vec<BigInt>> = (0..=self.n).map(stirling_row).collect();
        (0..=self.n)
            .map(|i| {
                (i..=self.n).fold(GradedEndo::zero(grp), |acc, jj| {
                    let c = Scalar::new(rows[jj][i].clone(), scalar::factorial(jj));
                    acc.add(&powers[jj].scale(&c))
                })
            })
            .collect()
    }
}

pub fn psi_k(k: usize, n: usize) -> Result<GradedEndo> {
    Ok(DescentAlgebra::new(n)?.psi(k))
}

pub fn eulerian_idempotents(n: usize) -> Result<Vec<GradedEndo>> {
    Ok(DescentAlgebra::new(n)?.eulerian_idempotents())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    Riffle,
    TopToRandom,
}

impl FromStr for ChainKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "riffle" | "standard" => Ok(ChainKind::Riffle),
            "top_to_random" | "elem" => Ok(ChainKind::TopToRandom),
            _ => Err(Error::InvalidArgument(format!("unknown chain kind `{s}`"))),
        }
    }
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainKind::Riffle => "riffle",
            ChainKind::TopToRandom => "top_to_random",
        })
    }
}

/// A card-shuffling Markov chain on decks of `n` cards, given by its group-algebra element.
#[derive(Debug, Clone)]
pub struct ShuffleChain {
    kind: ChainKind,
    n: usize,
    step: GradedEndo,
}

/// Riffle: `Ψ^2 / 2^n`; top-to-random: `(p_1 ∗ p_{n-1}) / n`.
pub fn build_chain(kind: ChainKind, n: usize) -> Result<ShuffleChain> {
    build_chain_bounded(kind, n, DEFAULT_BOUND)
}

pub fn build_chain_bounded(kind: ChainKind, n: usize, bound: usize) -> Result<ShuffleChain> {
    let alg = DescentAlgebra::with_bound(n, bound)?;
    let step = match kind {
        ChainKind::Riffle => alg
            .psi(2)
            .scale(&Scalar::new(BigInt::one(), BigInt::from(2).pow(n as u32))),
        ChainKind::TopToRandom => {
            if n == 0 {
                return Err(Error::InvalidArgument("top-to-random needs at least one card".into()));
            }
            let f = alg.convolve(&alg.projection(1), &alg.projection(n - 1));
            f[n].scale(&scalar::frac(1, n as i64))
        }
    };
    Ok(ShuffleChain { kind, n, step })
}

impl ShuffleChain {
    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> &GradedEndo {
        &self.step
    }

    pub fn decks(&self) -> &[Permutation] {
        self.step.group.perms()
    }

    /// Row-stochastic transition matrix over decks in lexicographic order.
    pub fn matrix(&self) -> Vec<Vec<Scalar>> {
        self.step.matrix()
    }

    pub fn point_mass(&self, deck: &Permutation) -> Vec<Scalar> {
        let mut p = vec![Scalar::zero(); self.step.group.order()];
        p[self.step.group.index_of(deck)] = Scalar::one();
        p
    }

    pub fn uniform(&self) -> Vec<Scalar> {
        let n = self.step.group.order();
        vec![scalar::frac(1, n as i64); n]
    }
}

fn check_distribution(p: &[Scalar], size: usize) -> Result<()> {
    if p.len() != size {
        return Err(Error::LengthMismatch {
            expected: size,
            got: p.len(),
        });
    }
    if let Some(x) = p.iter().find(|x| x.is_negative()) {
        return Err(Error::NotStochastic(format!("negative entry {}", scalar::format_scalar(x))));
    }
    let total: Scalar = p.iter().sum();
    if !total.is_one() {
        return Err(Error::NotStochastic(format!("total mass {}", scalar::format_scalar(&total))));
    }
    Ok(())
}

/// `start · M^k`.
pub fn iterate_distribution(chain: &ShuffleChain, start: &[Scalar], k: usize) -> Result<Vec<Scalar>> {
    let g = &chain.step.group;
    check_distribution(start, g.order())?;
    let mut p = GradedEndo::from_coeffs(g, start.to_vec())?;
    for _ in 0..k {
        p = p.mul(&chain.step);
    }
    Ok(p.coeffs)
}

/// `(1/2) Σ |p_i - 1/n!|` after `k` steps.
pub fn tvd_to_uniform(chain: &ShuffleChain, start: &[Scalar], k: usize) -> Result<Scalar> {
    let p = iterate_distribution(chain, start, k)?;
    let u = scalar::frac(1, p.len() as i64);
    let total: Scalar = p.iter().map(|x| (x - &u).abs()).sum();
    Ok(total / scalar::int(2))
}

/// Eigenvalues with algebraic multiplicities, largest first.
pub type Spectrum = Vec<(Scalar, usize)>;

/// Exact spectrum: Eulerian decomposition for the riffle, minimal polynomial otherwise.
pub fn spectrum(chain: &ShuffleChain) -> Result<Spectrum> {
    match chain.kind {
        ChainKind::Riffle => riffle_spectrum(chain.n),
        ChainKind::TopToRandom => rational_spectrum(&chain.step),
    }
}

/// `Ψ^2/2^n` acts by `2^{i-n}` on the range of `e^i`, whose rank is its trace.
pub fn riffle_spectrum(n: usize) -> Result<Spectrum> {
    let es = eulerian_idempotents(n)?;
    let mut out = Vec::new();
    for (i, e) in es.iter().enumerate().rev() {
        let rank = e.trace();
        if rank.is_zero() {
            continue;
        }
        let m: usize = rank
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidArgument("idempotent rank out of range".into()))?;
        let lambda = Scalar::new(BigInt::one(), BigInt::from(2).pow((n - i) as u32));
        out.push((lambda, m));
    }
    Ok(out)
}

/// Rational spectrum of a group-algebra element acting by right multiplication.
///
/// Finds the minimal polynomial from powers, its rational roots, and multiplicities from
/// power traces. Fails with [`Error::IrrationalSpectrum`] if a factor has no rational root.
pub fn rational_spectrum(x: &GradedEndo) -> Result<Spectrum> {
    let g = x.group.clone();
    let mut powers = vec![GradedEndo::identity(&g)];
    let coeffs = loop {
        let next = powers.last().unwrap().mul(x);
        if let Some(c) = solve_combination(&powers, &next) {
            powers.push(next);
            break c;
        }
        powers.push(next);
        if powers.len() > g.order() + 1 {
            return Err(Error::IrrationalSpectrum);
        }
    };
    // x^m = Σ c_j x^j, so the minimal polynomial is t^m - Σ c_j t^j.
    let mut poly: Vec<Scalar> = coeffs.iter().map(|c| -c.clone()).collect();
    poly.push(Scalar::one());
    let roots = rational_roots(&poly)?;
    let r = roots.len();
    let traces: Vec<Scalar> = powers.iter().take(r).map(GradedEndo::trace).collect();
    let vander: Vec<Vec<Scalar>> = (0..r)
        .map(|m| roots.iter().map(|l| scalar::pow(l, m)).collect())
        .collect();
    let mult = solve_square(vander, traces).ok_or(Error::IrrationalSpectrum)?;
    let mut out: Spectrum = roots
        .into_iter()
        .zip(mult)
        .map(|(l, m)| {
            let m: usize = m.to_integer().try_into().unwrap_or(0);
            (l, m)
        })
        .collect();
    out.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(out)
}

/// Coefficients `c` with `Σ c_j basis_j = target`, if any.
fn solve_combination(basis: &[GradedEndo], target: &GradedEndo) -> Option<Vec<Scalar>> {
    let m = basis.len();
    let rows: Vec<Vec<Scalar>> = (0..target.coeffs.len())
        .filter(|&i| !target.coeffs[i].is_zero() || basis.iter().any(|b| !b.coeffs[i].is_zero()))
        .map(|i| {
            let mut row: Vec<Scalar> = basis.iter().map(|b| b.coeffs[i].clone()).collect();
            row.push(target.coeffs[i].clone());
            row
        })
        .collect();
    let (reduced, pivots) = row_reduce(rows, m);
    if reduced.iter().any(|r| r[..m].iter().all(Zero::is_zero) && !r[m].is_zero()) {
        return None;
    }
    let mut sol = vec![Scalar::zero(); m];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = reduced[r][m].clone();
    }
    Some(sol)
}

/// Reduced row echelon form on the first `cols` columns; returns pivot columns.
fn row_reduce(mut rows: Vec<Vec<Scalar>>, cols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (rows, pivots)
}

fn solve_square(a: Vec<Vec<Scalar>>, b: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let n = b.len();
    let rows: Vec<Vec<Scalar>> = a
        .into_iter()
        .zip(b)
        .map(|(mut r, x)| {
            r.push(x);
            r
        })
        .collect();
    let (reduced, pivots) = row_reduce(rows, n);
    (pivots.len() == n).then(|| reduced.iter().map(|r| r[n].clone()).collect())
}

/// Distinct rational roots of a polynomial (lowest degree first) that splits over `Q`.
fn rational_roots(poly: &[Scalar]) -> Result<Vec<Scalar>> {
    let mut p: Vec<Scalar> = poly.to_vec();
    let mut roots = Vec::new();
    while p.len() > 1 {
        if p[0].is_zero() {
            roots.push(Scalar::zero());
            p.remove(0);
            continue;
        }
        // Clear denominators to apply the rational root theorem.
        let lcm = p
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * scalar::from_big(lcm.clone())).to_integer()).collect();
        let root = divisors(&ints[0])
            .iter()
            .flat_map(|a| divisors(ints.last().unwrap()).into_iter().map(move |b| (a.clone(), b)))
            .flat_map(|(a, b)| [Scalar::new(a.clone(), b.clone()), -Scalar::new(a, b)])
            .find(|cand| horner(&p, cand).is_zero())
            .ok_or(Error::IrrationalSpectrum)?;
        p = deflate(&p, &root);
        roots.push(root);
    }
    Ok(roots)
}

fn horner(p: &[Scalar], x: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
}

fn deflate(p: &[Scalar], root: &Scalar) -> Vec<Scalar> {
    let d = p.len() - 1;
    let mut q = vec![Scalar::zero(); d];
    let mut carry = Scalar::zero();
    for k in (0..d).rev() {
        carry = &p[k + 1] + carry * root;
        q[k] = carry.clone();
    }
    q
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn w(s: &str) -> Word {
        Word::from_chars(s)
    }

    #[test]
    fn shuffle_examples() {
        let mut want = LinComb::basis(w("abc"));
        want.add_term(w("acb"), int(1));
        want.add_term(w("cab"), int(1));
        assert_eq!(shuffle_product(&w("ab"), &w("c")), want);
        assert_eq!(shuffle_product(&w("a"), &w("")), LinComb::basis(w("a")));
        assert_eq!(shuffle_product(&w("a"), &w("a")), LinComb::term(w("aa"), int(2)));
        assert_eq!(deconcat(&w("abc")).len(), 4);
        assert_eq!(deconcat(&w("")), LinComb::basis((w(""), w(""))));
    }

    #[test]
    fn riffle_on_two_cards() {
        let chain = build_chain(ChainKind::Riffle, 2).unwrap();
        assert_eq!(
            chain.matrix(),
            vec![vec![frac(3, 4), frac(1, 4)], vec![frac(1, 4), frac(3, 4)]]
        );
        let t = build_chain(ChainKind::TopToRandom, 2).unwrap();
        assert_eq!(t.matrix(), vec![vec![frac(1, 2); 2]; 2]);
        let ab = chain.point_mass(&"AB".parse().unwrap());
        assert_eq!(iterate_distribution(&chain, &ab, 1).unwrap(), vec![frac(3, 4), frac(1, 4)]);
        assert_eq!(tvd_to_uniform(&chain, &ab, 3).unwrap(), frac(1, 16));
        assert!(matches!(
            iterate_distribution(&chain, &[int(1), int(1)], 1),
            Err(Error::NotStochastic(_))
        ));
    }

    #[test]
    fn psi_identities() {
        let alg = DescentAlgebra::new(3).unwrap();
        assert_eq!(alg.psi(1), GradedEndo::identity(alg.group(3)));
        assert_eq!(alg.psi(2).compose(&alg.psi(2)), alg.psi(4));
        assert_eq!(alg.psi(2).compose(&alg.psi(3)), alg.psi(6));
    }

    #[test]
    fn small_spectra() {
        let two = riffle_spectrum(2).unwrap();
        assert_eq!(two, vec![(int(1), 1), (frac(1, 2), 1)]);
        let t3 = rational_spectrum(build_chain(ChainKind::TopToRandom, 3).unwrap().step()).unwrap();
        // Eigenvalue j/n with multiplicity = permutations with j fixed points (j != n-1).
        assert_eq!(t3, vec![(int(1), 1), (frac(1, 3), 3), (int(0), 2)]);
        let r3 = rational_spectrum(build_chain(ChainKind::Riffle, 3).unwrap().step()).unwrap();
        assert_eq!(r3, riffle_spectrum(3).unwrap());
    }

    #[test]
    fn deck_parsing() {
        assert_eq!(parse_deck("identity", 3).unwrap(), Permutation::identity(3));
        assert_eq!(parse_deck("BAC", 3).unwrap(), Permutation(vec![1, 0, 2]));
        assert!(parse_deck("ABD", 3).is_err());
        assert!(parse_deck("AB", 3).is_err());
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(DescentAlgebra::new(7), Err(Error::BoundExceeded { n: 7, bound: 6 })));
        assert!(DescentAlgebra::with_bound(8, 9).is_err());
    }
}
