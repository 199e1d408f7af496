//! Convolution powers of states on connected graded coalgebras and the
//! classical, free and coalgebraic central limit theorems.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::moments::{MomentFunctional, WordFunctional};
use crate::partitions::{enumerate, stirling_row, PartitionKind};
use crate::scalar::{self, Scalar};
use crate::word::{words_of_length, Word};

/// A connected graded coalgebra given by a basis and a coproduct oracle.
pub trait GradedCoalgebra {
    type Elem: Clone + Ord + Hash + Debug;

    fn degree(&self, x: &Self::Elem) -> usize;

    /// The degree-0 basis element.
    fn unit(&self) -> Self::Elem;

    fn basis(&self, degree: usize) -> Vec<Self::Elem>;

    fn coproduct(&self, x: &Self::Elem) -> LinComb<(Self::Elem, Self::Elem)>;

    /// `Δ̄`: the coproduct with both legs of positive degree.
    fn reduced_coproduct(&self, x: &Self::Elem) -> LinComb<(Self::Elem, Self::Elem)> {
        self.coproduct(x)
            .iter()
            .filter(|((l, r), _)| self.degree(l) > 0 && self.degree(r) > 0)
            .map(|(b, c)| (b.clone(), c.clone()))
            .collect()
    }
}

/// Words with `Δ(w) = Σ w[..i] ⊗ w[i..]`.
#[derive(Debug, Clone, Copy)]
pub struct Deconcatenation {
    pub alphabet_size: usize,
}

/// Words with `Δ(w) = Σ_{S ⊆ [n]} w_S ⊗ w_{[n]∖S}`, dual to the shuffle product.
#[derive(Debug, Clone, Copy)]
pub struct Unshuffle {
    pub alphabet_size: usize,
}

/// `Q[x]` with `Δ(x^n) = Σ C(n,k) x^k ⊗ x^{n-k}`; basis elements are exponents.
#[derive(Debug, Clone, Copy)]
pub struct Binomial;

impl GradedCoalgebra for Deconcatenation {
    type Elem = Word;
    fn degree(&self, x: &Word) -> usize {
        x.len()
    }
    fn unit(&self) -> Word {
        Word::empty()
    }
    fn basis(&self, degree: usize) -> Vec<Word> {
        words_of_length(self.alphabet_size, degree)
    }
    fn coproduct(&self, x: &Word) -> LinComb<(Word, Word)> {
        crate::shuffle::deconcat(x)
    }
}

impl GradedCoalgebra for Unshuffle {
    type Elem = Word;
    fn degree(&self, x: &Word) -> usize {
        x.len()
    }
    fn unit(&self) -> Word {
        Word::empty()
    }
    fn basis(&self, degree: usize) -> Vec<Word> {
        words_of_length(self.alphabet_size, degree)
    }
    fn coproduct(&self, x: &Word) -> LinComb<(Word, Word)> {
        let n = x.len();
        let full = (1u64 << n) - 1;
        (0..=full)
            .map(|s| ((x.sub_by_mask(s), x.sub_by_mask(full ^ s)), Scalar::one()))
            .collect()
    }
}

impl GradedCoalgebra for Binomial {
    type Elem = usize;
    fn degree(&self, x: &usize) -> usize {
        *x
    }
    fn unit(&self) -> usize {
        0
    }
    fn basis(&self, degree: usize) -> Vec<usize> {
        vec![degree]
    }
    fn coproduct(&self, x: &usize) -> LinComb<(usize, usize)> {
        (0..=*x)
            .map(|k| ((k, x - k), scalar::from_big(scalar::binomial(*x, k))))
            .collect()
    }
}

type StateFn<'a, E> = Box<dyn Fn(&E) -> Result<Scalar> + 'a>;

/// A linear form on a coalgebra's basis; forced to 1 on the degree-0 element.
pub struct StateForm<'a, E> {
    f: StateFn<'a, E>,
}

impl<'a, E> StateForm<'a, E> {
    pub fn new(f: impl Fn(&E) -> Result<Scalar> + 'a) -> Self {
        StateForm { f: Box::new(f) }
    }

    pub fn eval<C: GradedCoalgebra<Elem = E>>(&self, c: &C, x: &E) -> Result<Scalar> {
        if c.degree(x) == 0 {
            Ok(Scalar::one())
        } else {
            (self.f)(x)
        }
    }
}

impl<'a> StateForm<'a, Word> {
    pub fn from_moments(phi: &'a MomentFunctional) -> Self {
        StateForm::new(move |w: &Word| phi.value(w))
    }
}

impl<'a> StateForm<'a, usize> {
    /// `x^n ↦ φ(a^n)` for a single-generator functional.
    pub fn from_moments_binomial(phi: &'a MomentFunctional) -> Self {
        StateForm::new(move |&n: &usize| phi.value(&Word(vec![0; n])))
    }
}

/// `Δ̄_i(x) = J^{⊗i} Δ_i(x)`, as a combination of `i`-tuples.
pub fn iterated_reduced_coproduct<C: GradedCoalgebra>(
    c: &C,
    x: &C::Elem,
    i: usize,
) -> Result<LinComb<Vec<C::Elem>>> {
    if i == 0 {
        return Err(Error::InvalidArgument("iterated coproduct order must be at least 1".into()));
    }
    if c.degree(x) == 0 || i > c.degree(x) {
        return Ok(LinComb::zero());
    }
    if i == 1 {
        return Ok(LinComb::basis(vec![x.clone()]));
    }
    let mut out = LinComb::zero();
    for ((l, r), k) in c.reduced_coproduct(x).iter() {
        let left = iterated_reduced_coproduct(c, l, i - 1)?;
        for (tuple, k2) in left.iter() {
            let mut t = tuple.clone();
            t.push(r.clone());
            out.add_term(t, k * k2);
        }
    }
    Ok(out)
}

/// `a_i = φ^{⊗i}(Δ̄_i x)` for `i = 0..=deg x` (with `a_0 = ε(x)`).
pub fn reduced_values<C: GradedCoalgebra>(
    c: &C,
    phi: &StateForm<C::Elem>,
    x: &C::Elem,
) -> Result<Vec<Scalar>> {
    let p = c.degree(x);
    let mut memo: HashMap<(C::Elem, usize), Scalar> = HashMap::new();
    fn rec<C: GradedCoalgebra>(
        c: &C,
        phi: &StateForm<C::Elem>,
        x: &C::Elem,
        i: usize,
        memo: &mut HashMap<(C::Elem, usize), Scalar>,
    ) -> Result<Scalar> {
        let d = c.degree(x);
        if i > d || d == 0 {
            return Ok(Scalar::zero());
        }
        if i == 1 {
            return phi.eval(c, x);
        }
        if let Some(v) = memo.get(&(x.clone(), i)) {
            return Ok(v.clone());
        }
        let mut acc = Scalar::zero();
        for ((l, r), k) in c.reduced_coproduct(x).iter() {
            let right = phi.eval(c, r)?;
            if right.is_zero() {
                continue;
            }
            acc += k * rec(c, phi, l, i - 1, memo)? * right;
        }
        memo.insert((x.clone(), i), acc.clone());
        Ok(acc)
    }
    let mut out = vec![if p == 0 { Scalar::one() } else { Scalar::zero() }];
    for i in 1..=p {
        out.push(rec(c, phi, x, i, &mut memo)?);
    }
    Ok(out)
}

/// `φ^{∗n}(x) = Σ_i C(n,i) φ^{⊗i} Δ̄_i(x)`, exact for any `n ≥ 0`.
pub fn convolution_power<C: GradedCoalgebra>(
    c: &C,
    phi: &StateForm<C::Elem>,
    n: &BigInt,
    x: &C::Elem,
) -> Result<Scalar> {
    let a = reduced_values(c, phi, x)?;
    Ok(a.iter()
        .enumerate()
        .map(|(i, ai)| ai * scalar::from_big(scalar::binomial_big(n, i)))
        .sum())
}

/// Coefficients of `n ↦ φ^{∗n}(x)` in powers of `n`, via Stirling numbers.
pub fn convolution_polynomial<C: GradedCoalgebra>(
    c: &C,
    phi: &StateForm<C::Elem>,
    x: &C::Elem,
) -> Result<Vec<Scalar>> {
    let a = reduced_values(c, phi, x)?;
    let mut poly = vec![Scalar::zero(); a.len()];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let fact = scalar::from_big(scalar::factorial(i));
        for (j, s) in stirling_row(i).into_iter().enumerate() {
            poly[j] += ai * scalar::from_big(s) / &fact;
        }
    }
    Ok(poly)
}

/// `(φ ⊗ … ⊗ φ) ∘ Δ_n (x)` by repeated full coproducts.
pub fn direct_convolution_power<C: GradedCoalgebra>(
    c: &C,
    phi: &StateForm<C::Elem>,
    n: usize,
    x: &C::Elem,
) -> Result<Scalar> {
    fn rec<C: GradedCoalgebra>(
        c: &C,
        phi: &StateForm<C::Elem>,
        n: usize,
        x: &C::Elem,
        memo: &mut HashMap<(C::Elem, usize), Scalar>,
    ) -> Result<Scalar> {
        if n == 0 {
            return Ok(if c.degree(x) == 0 { Scalar::one() } else { Scalar::zero() });
        }
        if n == 1 {
            return phi.eval(c, x);
        }
        if let Some(v) = memo.get(&(x.clone(), n)) {
            return Ok(v.clone());
        }
        let mut acc = Scalar::zero();
        for ((l, r), k) in c.coproduct(x).iter() {
            let left = phi.eval(c, l)?;
            if left.is_zero() {
                continue;
            }
            acc += k * left * rec(c, phi, n - 1, r, memo)?;
        }
        memo.insert((x.clone(), n), acc.clone());
        Ok(acc)
    }
    rec(c, phi, n, x, &mut HashMap::new())
}

fn check_vanishing<C: GradedCoalgebra>(c: &C, phi: &StateForm<C::Elem>, below: usize, max: usize) -> Result<()> {
    for d in 1..below.min(max + 1) {
        for b in c.basis(d) {
            if !phi.eval(c, &b)?.is_zero() {
                return Err(Error::StateNotCentered);
            }
        }
    }
    Ok(())
}

/// `lim φ^{∗n}(x / √n^k)`: the coefficient of `n^{k/2}`; zero for odd `k`.
pub fn clt_limit<C: GradedCoalgebra>(c: &C, phi: &StateForm<C::Elem>, x: &C::Elem) -> Result<Scalar> {
    clt_limit_with_order(c, phi, x, 2)
}

/// Scaling `n^{-k/s}` for a state vanishing on degrees `1..s`: the coefficient of `n^{k/s}`.
pub fn clt_limit_with_order<C: GradedCoalgebra>(
    c: &C,
    phi: &StateForm<C::Elem>,
    x: &C::Elem,
    s: usize,
) -> Result<Scalar> {
    if s < 1 {
        return Err(Error::InvalidArgument("scaling order must be positive".into()));
    }
    let k = c.degree(x);
    check_vanishing(c, phi, s, k)?;
    if k % s != 0 {
        return Ok(Scalar::zero());
    }
    let poly = convolution_polynomial(c, phi, x)?;
    Ok(poly.get(k / s).cloned().unwrap_or_else(Scalar::zero))
}

/// `exp^∗(κ)(x) = Σ_i κ^{⊗i} Δ̄_i(x) / i!` with `κ` = φ restricted to degree `s`.
pub fn exp_convolution<C: GradedCoalgebra>(
    c: &C,
    phi: &StateForm<C::Elem>,
    x: &C::Elem,
    s: usize,
) -> Result<Scalar> {
    let kappa = StateForm::new(|y: &C::Elem| {
        if c.degree(y) == s {
            phi.eval(c, y)
        } else {
            Ok(Scalar::zero())
        }
    });
    let a = reduced_values(c, &kappa, x)?;
    Ok(a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, ai)| ai / scalar::from_big(scalar::factorial(i)))
        .sum::<Scalar>()
        + if c.degree(x) == 0 { Scalar::one() } else { Scalar::zero() })
}

/// `variance^{k/2} · |NC_2(k)|`, zero for odd `k`.
pub fn free_clt_limit(k: usize, variance: &Scalar) -> Result<Scalar> {
    if k % 2 == 1 {
        return Ok(Scalar::zero());
    }
    let count = enumerate(PartitionKind::NcPair, k)?.len();
    Ok(scalar::pow(variance, k / 2) * scalar::int(count as i64))
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct CltRow {
    pub n: u64,
    /// `φ^{∗n}(x)`.
    pub value: Scalar,
    /// `φ^{∗n}(x) / n^{k/2}`; exact when `k` is even.
    pub scaled_exact: Option<Scalar>,
    pub scaled: f64,
    pub deviation_exact: Option<Scalar>,
    pub deviation: f64,
}

pub fn clt_convergence_table<C: GradedCoalgebra>(
    c: &C,
    phi: &StateForm<C::Elem>,
    x: &C::Elem,
    n_list: &[u64],
) -> Result<Vec<CltRow>> {
    let limit = clt_limit(c, phi, x)?;
    let k = c.degree(x);
    n_list
        .iter()
        .map(|&n| {
            let value = convolution_power(c, phi, &BigInt::from(n), x)?;
            let row = if k % 2 == 0 {
                let scaled = &value / scalar::from_big(BigInt::from(n).pow((k / 2) as u32));
                let dev = &scaled - &limit;
                CltRow {
                    n,
                    scaled: scalar::to_f64(&scaled),
                    deviation: scalar::to_f64(&dev),
                    value,
                    scaled_exact: Some(scaled),
                    deviation_exact: Some(dev),
                }
            } else {
                let scaled = scalar::to_f64(&value) / (n as f64).powf(k as f64 / 2.0);
                CltRow {
                    n,
                    value,
                    scaled_exact: None,
                    scaled,
                    deviation_exact: None,
                    deviation: scaled - limit.to_f64().unwrap_or(0.0),
                }
            };
            Ok(row)
        })
        .collect()
}
