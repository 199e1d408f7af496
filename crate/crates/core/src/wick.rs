//! Classical Wick polynomials on the binomial bialgebra and free Wick
//! polynomials on the double tensor algebra.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::clt::{reduced_values, Binomial, StateForm};
use crate::cumulants::{partition_family, CumulantKind};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::moments::{evaluate, MomentFunctional, WordFunctional};
use crate::partitions::SetPartition;
use crate::scalar::{self, format_scalar, Scalar};
use crate::word::{Sentence, Word};

/// Largest word length accepted by the free Wick operations.
pub const WICK_BOUND: usize = 12;

/// A polynomial in one variable `x`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial(pub LinComb<usize>);

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial(LinComb::zero())
    }

    pub fn one() -> Self {
        Polynomial::monomial(0, Scalar::one())
    }

    pub fn x() -> Self {
        Polynomial::monomial(1, Scalar::one())
    }

    pub fn monomial(k: usize, c: Scalar) -> Self {
        Polynomial(LinComb::term(k, c))
    }

    /// From coefficients listed by increasing exponent.
    pub fn from_coeffs(coeffs: &[Scalar]) -> Self {
        Polynomial(coeffs.iter().cloned().enumerate().collect())
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.0.coeff(&k)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().map(|(k, _)| *k).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(k, c)| (*k, c))
    }

    pub fn derivative(&self) -> Self {
        Polynomial(
            self.0
                .iter()
                .filter(|(k, _)| **k > 0)
                .map(|(k, c)| (k - 1, c * scalar::int(*k as i64)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        let mut out = LinComb::zero();
        for (i, a) in self.0.iter() {
            for (j, b) in other.0.iter() {
                out.add_term(i + j, a * b);
            }
        }
        Polynomial(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Polynomial(self.0.scale(c))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.0.iter().map(|(k, c)| c * scalar::pow(x, *k)).sum()
    }

    /// Applies a linear map given on monomials.
    pub fn map_linear(&self, mut f: impl FnMut(usize) -> Result<Polynomial>) -> Result<Self> {
        let mut out = LinComb::zero();
        for (k, c) in self.0.iter() {
            out += &f(*k)?.0.scale(c);
        }
        Ok(Polynomial(out))
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial(self.0.clone() + rhs.0.clone())
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial(self.0.clone() - rhs.0.clone())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.0.iter().collect();
        terms.reverse();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in terms.into_iter().enumerate() {
            let neg = *c < Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if mono.is_empty() {
                write!(f, "{}", format_scalar(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}·{mono}", format_scalar(&abs))?;
            }
        }
        Ok(())
    }
}

fn single_generator(phi: &MomentFunctional) -> Result<()> {
    if phi.alphabet().size() != 1 {
        return Err(Error::InvalidArgument(format!(
            "classical Wick needs a single generator, got {}",
            phi.alphabet().size()
        )));
    }
    Ok(())
}

fn moment(phi: &MomentFunctional, k: usize) -> Result<Scalar> {
    phi.value(&Word(vec![0; k]))
}

/// `φ^{∗−1}(x^k) = Σ_j (−1)^j (φ−ε)^{∗j}(x^k)` on the binomial coalgebra.
pub fn inverse_moments(phi: &MomentFunctional, n: usize) -> Result<Vec<Scalar>> {
    single_generator(phi)?;
    let st = StateForm::new(|&k: &usize| moment(phi, k));
    (0..=n)
        .map(|k| {
            let a = reduced_values(&Binomial, &st, &k)?;
            Ok(a.iter()
                .enumerate()
                .map(|(j, v)| if j % 2 == 0 { v.clone() } else { -v })
                .sum())
        })
        .collect()
}

/// `W(x^n) = (φ^{∗−1} ∗ Id)(x^n) = Σ_k C(n,k) φ^{∗−1}(x^k) x^{n−k}`.
pub fn classical_wick(phi: &MomentFunctional, n: usize) -> Result<Polynomial> {
    let inv = inverse_moments(phi, n)?;
    Ok(Polynomial(
        (0..=n)
            .map(|k| (n - k, &inv[k] * scalar::from_big(scalar::binomial(n, k))))
            .collect(),
    ))
}

/// `W^{−1}(x^n) = (φ ∗ Id)(x^n)`.
pub fn classical_wick_inverse(phi: &MomentFunctional, n: usize) -> Result<Polynomial> {
    single_generator(phi)?;
    let mut out = LinComb::zero();
    for k in 0..=n {
        out.add_term(n - k, moment(phi, k)? * scalar::from_big(scalar::binomial(n, k)));
    }
    Ok(Polynomial(out))
}

pub fn apply_wick(phi: &MomentFunctional, p: &Polynomial) -> Result<Polynomial> {
    p.map_linear(|k| classical_wick(phi, k))
}

pub fn apply_wick_inverse(phi: &MomentFunctional, p: &Polynomial) -> Result<Polynomial> {
    p.map_linear(|k| classical_wick_inverse(phi, k))
}

/// `p ·_W q = W(W^{−1}(p) · W^{−1}(q))`.
pub fn wick_product(phi: &MomentFunctional, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    let prod = apply_wick_inverse(phi, p)?.mul(&apply_wick_inverse(phi, q)?);
    apply_wick(phi, &prod)
}

/// Maximal runs of positions outside `mask`, as subwords in order.
fn complement_components(w: &Word, mask: u64) -> Sentence {
    let mut words = Vec::new();
    let mut cur = Vec::new();
    for (i, &l) in w.0.iter().enumerate() {
        if mask >> i & 1 == 1 {
            if !cur.is_empty() {
                words.push(Word(std::mem::take(&mut cur)));
            }
        } else {
            cur.push(l);
        }
    }
    if !cur.is_empty() {
        words.push(Word(cur));
    }
    Sentence(words)
}

fn check_length(n: usize) -> Result<()> {
    if n > WICK_BOUND {
        return Err(Error::BoundExceeded { n, bound: WICK_BOUND });
    }
    Ok(())
}

/// `Δ(w) = Σ_S a_S ⊗ (a_{J_1}|…|a_{J_k})`, the `J_i` the connected components of `[n]∖S`.
pub fn double_coproduct(w: &Word) -> Result<LinComb<(Word, Sentence)>> {
    if w.is_empty() {
        return Err(Error::InvalidArgument("double coproduct of the empty word".into()));
    }
    check_length(w.len())?;
    let full = (1u64 << w.len()) - 1;
    Ok((0..=full)
        .map(|s| ((w.sub_by_mask(s), complement_components(w, s)), Scalar::one()))
        .collect())
}

/// Multiplicative extension to sentences; both legs multiply by the bar product.
pub fn sentence_coproduct(s: &Sentence) -> Result<LinComb<(Sentence, Sentence)>> {
    check_length(s.degree())?;
    let mut acc: LinComb<(Sentence, Sentence)> = LinComb::basis((Sentence::empty(), Sentence::empty()));
    for w in s.words() {
        let d = double_coproduct(w)?;
        let mut next = LinComb::zero();
        for ((l, r), c) in acc.iter() {
            for ((l2, r2), c2) in d.iter() {
                next.add_term((l.bar(&Sentence::single(l2.clone())), r.bar(r2)), c * c2);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `(Δ⊗Id)Δ(w) = (Id⊗Δ)Δ(w)` on the double tensor algebra.
pub fn coassociativity_check(w: &Word) -> Result<bool> {
    let d = double_coproduct(w)?;
    let mut left: LinComb<(Sentence, Sentence, Sentence)> = LinComb::zero();
    let mut right: LinComb<(Sentence, Sentence, Sentence)> = LinComb::zero();
    for ((l, r), c) in d.iter() {
        let l = Sentence::single(l.clone());
        for ((x, y), c2) in sentence_coproduct(&l)?.iter() {
            left.add_term((x.clone(), y.clone(), r.clone()), c * c2);
        }
        for ((x, y), c2) in sentence_coproduct(r)?.iter() {
            right.add_term((l.clone(), x.clone(), y.clone()), c * c2);
        }
    }
    Ok(left == right)
}

/// The multiplicative extension `Φ(w_1|…|w_n) = φ(w_1)⋯φ(w_n)` with a memo for `Φ^{∗−1}`.
pub struct SentenceState {
    base: MomentFunctional,
    powers: Mutex<HashMap<(Sentence, usize), Scalar>>,
}

impl SentenceState {
    pub fn new(base: MomentFunctional) -> Self {
        SentenceState {
            base,
            powers: Mutex::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &MomentFunctional {
        &self.base
    }

    pub fn phi(&self, s: &Sentence) -> Result<Scalar> {
        let mut acc = Scalar::one();
        for w in s.words() {
            acc *= self.base.value(w)?;
        }
        Ok(acc)
    }

    /// `(Φ−ν)^{∗k}(s)`.
    fn reduced_power(&self, s: &Sentence, k: usize) -> Result<Scalar> {
        if k == 0 {
            return Ok(if s.is_empty() { Scalar::one() } else { Scalar::zero() });
        }
        if s.degree() < k {
            return Ok(Scalar::zero());
        }
        if k == 1 {
            return self.phi(s);
        }
        let key = (s.clone(), k);
        if let Some(v) = self.powers.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let mut acc = Scalar::zero();
        for ((l, r), c) in sentence_coproduct(s)?.iter() {
            if l.is_empty() || r.is_empty() {
                continue;
            }
            let left = self.phi(l)?;
            if left.is_zero() {
                continue;
            }
            acc += c * left * self.reduced_power(r, k - 1)?;
        }
        self.powers.lock().unwrap().insert(key, acc.clone());
        Ok(acc)
    }

    /// `Φ^{∗−1}(s) = Σ_k (−1)^k (Φ−ν)^{∗k}(s)`, truncated by total letter count.
    pub fn phi_inverse(&self, s: &Sentence) -> Result<Scalar> {
        check_length(s.degree())?;
        let mut acc = Scalar::zero();
        for k in 0..=s.degree() {
            let v = self.reduced_power(s, k)?;
            if k % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        Ok(acc)
    }
}

/// `W(w)` as a combination of subwords of `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WickExpansion {
    pub input: Word,
    pub result: LinComb<Word>,
}

impl fmt::Display for WickExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.result)
    }
}

/// `W(w) = (Id ⊗ Φ^{∗−1})Δ(w)`.
pub fn free_wick(state: &SentenceState, w: &Word) -> Result<WickExpansion> {
    if w.is_empty() {
        return Ok(WickExpansion {
            input: w.clone(),
            result: LinComb::basis(Word::empty()),
        });
    }
    let mut result = LinComb::zero();
    for ((l, r), c) in double_coproduct(w)?.iter() {
        result.add_term(l.clone(), c * state.phi_inverse(r)?);
    }
    Ok(WickExpansion {
        input: w.clone(),
        result,
    })
}

/// `a_1⋯a_n = Σ_S W(a_S) Φ(a_{J_1}|…|a_{J_k})`.
pub fn wick_inversion(state: &SentenceState, w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Ok(true);
    }
    let mut total = LinComb::zero();
    for ((l, r), c) in double_coproduct(w)?.iter() {
        let k = c * state.phi(r)?;
        if k.is_zero() {
            continue;
        }
        total += &free_wick(state, l)?.result.scale(&k);
    }
    Ok(total == LinComb::basis(w.clone()))
}

/// `Φ(W(w)) = 0` for nonempty `w`.
pub fn wick_centered(state: &SentenceState, w: &Word) -> Result<bool> {
    let e = free_wick(state, w)?;
    Ok(evaluate(state.base(), &e.result)?.is_zero() != w.is_empty())
}

/// Free cumulants of the subwords of a single word, memoized.
struct FreeCumulants<'a> {
    phi: &'a MomentFunctional,
    memo: HashMap<Word, Scalar>,
}

impl FreeCumulants<'_> {
    fn get(&mut self, u: &Word) -> Result<Scalar> {
        if let Some(v) = self.memo.get(u) {
            return Ok(v.clone());
        }
        let mut v = self.phi.value(u)?;
        for (p, weight) in partition_family(CumulantKind::Free, u.len())?.iter() {
            if p.is_full() {
                continue;
            }
            let mut prod = weight.clone();
            for b in p.blocks() {
                prod *= self.get(&u.subword(b))?;
                if prod.is_zero() {
                    break;
                }
            }
            v -= prod;
        }
        self.memo.insert(u.clone(), v.clone());
        Ok(v)
    }
}

/// Partitions of a set of positions into blocks of consecutive integers.
fn integer_interval_partitions(positions: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut runs: Vec<Vec<usize>> = Vec::new();
    for &p in positions {
        match runs.last_mut() {
            Some(run) if *run.last().unwrap() + 1 == p => run.push(p),
            _ => runs.push(vec![p]),
        }
    }
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for run in runs {
        let cuts = run.len().saturating_sub(1);
        let mut next = Vec::new();
        for prefix in &out {
            for mask in 0u64..(1 << cuts) {
                let mut blocks = prefix.clone();
                let mut cur = vec![run[0]];
                for (i, &p) in run.iter().enumerate().skip(1) {
                    if mask >> (i - 1) & 1 == 1 {
                        blocks.push(std::mem::take(&mut cur));
                    }
                    cur.push(p);
                }
                blocks.push(cur);
                next.push(blocks);
            }
        }
        out = next;
    }
    out
}

/// `W(w) = Σ_S a_S Σ_{π ∈ I([n]∖S), π∪S ∈ NC(n)} (−1)^{|π|} Π_B κ(a_B)` with free cumulants `κ`.
pub fn free_wick_via_cumulants(state: &SentenceState, w: &Word) -> Result<WickExpansion> {
    check_length(w.len())?;
    let n = w.len();
    let mut kappa = FreeCumulants {
        phi: state.base(),
        memo: HashMap::new(),
    };
    let mut result = LinComb::zero();
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    for s in 0..=full {
        let inside: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        let outside: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 0).collect();
        let mut coeff = Scalar::zero();
        for pi in integer_interval_partitions(&outside) {
            let mut blocks = pi.clone();
            if !inside.is_empty() {
                blocks.push(inside.clone());
            }
            if n > 0 && !SetPartition::from_blocks(n, blocks)?.is_noncrossing() {
                continue;
            }
            let mut term = if pi.len() % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            for b in &pi {
                term *= kappa.get(&w.subword(b))?;
            }
            coeff += term;
        }
        result.add_term(w.sub_by_mask(s), coeff);
    }
    Ok(WickExpansion {
        input: w.clone(),
        result,
    })
}
