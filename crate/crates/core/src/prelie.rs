//! The preLie algebra of infinitesimal word functionals, symmetric braces,
//! the star product on monomials, and the Magnus operator.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::cumulants::{moments_to_cumulants, CumulantFunctional, CumulantKind};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::moments::MomentFunctional;
use crate::scalar::{self, Scalar};
use crate::word::Word;

/// A linear form on nonempty words, truncated above `max_degree`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfinitesimalFunctional {
    alphabet_size: usize,
    max_degree: usize,
    values: BTreeMap<Word, Scalar>,
}

impl InfinitesimalFunctional {
    pub fn zero(alphabet_size: usize, max_degree: usize) -> Self {
        InfinitesimalFunctional {
            alphabet_size,
            max_degree,
            values: BTreeMap::new(),
        }
    }

    /// Builds from word values; empty words, zeros and words beyond the degree are dropped.
    pub fn from_values(
        alphabet_size: usize,
        max_degree: usize,
        values: impl IntoIterator<Item = (Word, Scalar)>,
    ) -> Result<Self> {
        let mut out = Self::zero(alphabet_size, max_degree);
        for (w, v) in values {
            if let Some(&c) = w.letters().iter().find(|&&c| c as usize >= alphabet_size) {
                return Err(Error::AlphabetMismatch {
                    letter: c,
                    size: alphabet_size,
                });
            }
            out.add_at(w, v);
        }
        Ok(out)
    }

    /// The dual basis element `δ_w`.
    pub fn delta(alphabet_size: usize, max_degree: usize, w: Word) -> Self {
        Self::from_values(alphabet_size, max_degree, [(w, Scalar::one())]).expect("letters in range")
    }

    pub fn from_cumulants(c: &CumulantFunctional) -> Self {
        Self::from_values(
            c.alphabet().size(),
            c.max_degree(),
            c.words().map(|(w, v)| (w.clone(), v.clone())),
        )
        .expect("cumulant words lie in the alphabet")
    }

    fn add_at(&mut self, w: Word, v: Scalar) {
        if w.is_empty() || w.len() > self.max_degree || v.is_zero() {
            return;
        }
        match self.values.entry(w) {
            Entry::Vacant(e) => {
                e.insert(v);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn value(&self, w: &Word) -> Scalar {
        self.values.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn support(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Length of the shortest word in the support; `usize::MAX` for zero.
    pub fn min_degree(&self) -> usize {
        self.values.keys().map(Word::len).min().unwrap_or(usize::MAX)
    }

    /// The homogeneous component of the given degree.
    pub fn component(&self, degree: usize) -> Self {
        InfinitesimalFunctional {
            alphabet_size: self.alphabet_size,
            max_degree: self.max_degree,
            values: self
                .values
                .iter()
                .filter(|(w, _)| w.len() == degree)
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        let mut out = Self::zero(self.alphabet_size, max_degree.min(self.max_degree));
        for (w, v) in &self.values {
            out.add_at(w.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.alphabet_size, self.max_degree);
        if !c.is_zero() {
            out.values = self.values.iter().map(|(w, v)| (w.clone(), v * c)).collect();
        }
        out
    }

    fn combine(&self, other: &Self, sign: &Scalar) -> Self {
        let mut out = self.truncate(self.max_degree.min(other.max_degree));
        for (w, v) in &other.values {
            out.add_at(w.clone(), v * sign);
        }
        out
    }
}

impl Add for &InfinitesimalFunctional {
    type Output = InfinitesimalFunctional;
    fn add(self, rhs: Self) -> InfinitesimalFunctional {
        self.combine(rhs, &Scalar::one())
    }
}

impl Sub for &InfinitesimalFunctional {
    type Output = InfinitesimalFunctional;
    fn sub(self, rhs: Self) -> InfinitesimalFunctional {
        self.combine(rhs, &-Scalar::one())
    }
}

impl Neg for &InfinitesimalFunctional {
    type Output = InfinitesimalFunctional;
    fn neg(self) -> InfinitesimalFunctional {
        self.scale(&-Scalar::one())
    }
}

fn check_same(a: &InfinitesimalFunctional, b: &InfinitesimalFunctional) -> Result<()> {
    if a.alphabet_size != b.alphabet_size {
        return Err(Error::InvalidArgument(format!(
            "alphabet sizes differ: {} and {}",
            a.alphabet_size, b.alphabet_size
        )));
    }
    Ok(())
}

/// `(β{α})(w) = -Σ β(w1·w3) α(w2)` over `w = w1·w2·w3` with all three factors nonempty.
pub fn prelie_product(
    beta: &InfinitesimalFunctional,
    alpha: &InfinitesimalFunctional,
) -> Result<InfinitesimalFunctional> {
    check_same(beta, alpha)?;
    let d = beta.max_degree.min(alpha.max_degree);
    let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
    for (u, bu) in &beta.values {
        if u.len() < 2 {
            continue;
        }
        for (v, av) in &alpha.values {
            if u.len() + v.len() > d {
                continue;
            }
            let c = -(bu * av);
            for i in 1..u.len() {
                let mut letters = Vec::with_capacity(u.len() + v.len());
                letters.extend_from_slice(&u.letters()[..i]);
                letters.extend_from_slice(v.letters());
                letters.extend_from_slice(&u.letters()[i..]);
                *acc.entry(Word(letters)).or_insert_with(Scalar::zero) += &c;
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(InfinitesimalFunctional {
        alphabet_size: beta.alphabet_size,
        max_degree: d,
        values: acc,
    })
}

/// `[α, β] = α{β} - β{α}`.
pub fn bracket(
    a: &InfinitesimalFunctional,
    b: &InfinitesimalFunctional,
) -> Result<InfinitesimalFunctional> {
    Ok(&prelie_product(a, b)? - &prelie_product(b, a)?)
}

/// `v{w1,…,wn} = (v{w1,…,w(n-1)}){wn} - Σ_i v{w1,…,wi{wn},…,w(n-1)}`.
pub fn symmetric_brace(
    v: &InfinitesimalFunctional,
    args: &[InfinitesimalFunctional],
) -> Result<InfinitesimalFunctional> {
    let Some((last, rest)) = args.split_last() else {
        return Ok(v.clone());
    };
    // Each argument raises the degree by at least its lowest degree.
    let floor = v.min_degree().saturating_add(
        args.iter()
            .map(InfinitesimalFunctional::min_degree)
            .fold(0usize, usize::saturating_add),
    );
    let cap = args.iter().map(|a| a.max_degree).fold(v.max_degree, usize::min);
    if floor > cap {
        return Ok(InfinitesimalFunctional::zero(v.alphabet_size, cap));
    }
    let mut out = prelie_product(&symmetric_brace(v, rest)?, last)?;
    for i in 0..rest.len() {
        let mut inner = rest.to_vec();
        inner[i] = prelie_product(&rest[i], last)?;
        out = &out - &symmetric_brace(v, &inner)?;
    }
    Ok(out)
}

/// A commutative monomial `a1 a2 … al` in the symmetric algebra over functionals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionalMonomial(Vec<InfinitesimalFunctional>);

impl FunctionalMonomial {
    pub fn new(mut factors: Vec<InfinitesimalFunctional>) -> Self {
        factors.sort();
        FunctionalMonomial(factors)
    }

    pub fn unit() -> Self {
        FunctionalMonomial(Vec::new())
    }

    pub fn single(a: InfinitesimalFunctional) -> Self {
        FunctionalMonomial(vec![a])
    }

    pub fn factors(&self) -> &[InfinitesimalFunctional] {
        &self.0
    }

    fn is_zero(&self) -> bool {
        self.0.iter().any(InfinitesimalFunctional::is_zero)
    }

    /// Expansion in the commutative monomials `δ_{u1}…δ_{ul}` (sorted word lists).
    pub fn expand(&self, eval_degree: usize) -> LinComb<Vec<Word>> {
        let mut acc: Vec<(Vec<Word>, Scalar, usize)> = vec![(Vec::new(), Scalar::one(), 0)];
        for f in &self.0 {
            let mut next = Vec::new();
            for (ws, c, deg) in &acc {
                for (w, v) in f.support() {
                    if deg + w.len() <= eval_degree {
                        let mut ws2 = ws.clone();
                        ws2.push(w.clone());
                        next.push((ws2, c * v, deg + w.len()));
                    }
                }
            }
            acc = next;
        }
        acc.into_iter()
            .map(|(mut ws, c, _)| {
                ws.sort();
                (ws, c)
            })
            .collect()
    }
}

/// Normal form of a combination of monomials, up to total word length `eval_degree`.
pub fn normalize(c: &LinComb<FunctionalMonomial>, eval_degree: usize) -> LinComb<Vec<Word>> {
    c.map_linear(|m| m.expand(eval_degree))
}

/// `a1…al ∗ b1…bm = Σ_f B0 (a1{B1})…(al{Bl})` over maps `f: {1..m} → {0..l}`.
pub fn star_product(
    m1: &FunctionalMonomial,
    m2: &FunctionalMonomial,
) -> Result<LinComb<FunctionalMonomial>> {
    let l = m1.0.len();
    let m = m2.0.len();
    let mut out = LinComb::zero();
    let mut assign = vec![0usize; m];
    loop {
        let mut factors: Vec<InfinitesimalFunctional> = Vec::with_capacity(l + m);
        let mut groups: Vec<Vec<InfinitesimalFunctional>> = vec![Vec::new(); l + 1];
        for (j, &t) in assign.iter().enumerate() {
            groups[t].push(m2.0[j].clone());
        }
        factors.extend(groups[0].iter().cloned());
        for (i, a) in m1.0.iter().enumerate() {
            factors.push(symmetric_brace(a, &groups[i + 1])?);
        }
        let mono = FunctionalMonomial::new(factors);
        if !mono.is_zero() {
            out.add_term(mono, Scalar::one());
        }
        // Next map in base l+1.
        let mut k = 0;
        while k < m && assign[k] == l {
            assign[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
        assign[k] += 1;
    }
    Ok(out)
}

fn star_with(c: &LinComb<FunctionalMonomial>, m2: &FunctionalMonomial) -> Result<LinComb<FunctionalMonomial>> {
    let mut out = LinComb::zero();
    for (m1, x) in c.iter() {
        out += &star_product(m1, m2)?.scale(x);
    }
    Ok(out)
}

/// Bernoulli numbers with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Scalar> {
    scalar::bernoulli_numbers(n)
}

/// `Ω(v) = v + Σ_{n≥1} B_n/n! · v{Ω^{∗n}}` solved by fixed-point iteration.
///
/// The brace with a star power is expanded monomial by monomial into symmetric braces.
pub fn magnus(v: &InfinitesimalFunctional, max_degree: usize) -> Result<InfinitesimalFunctional> {
    let v = v.truncate(max_degree);
    let d = v.max_degree;
    let b = bernoulli_table(d);
    let mut omega = v.clone();
    for _ in 1..d {
        let single = FunctionalMonomial::single(omega.clone());
        let mut power = LinComb::basis(single.clone());
        let mut next = v.clone();
        for (n, bn) in b.iter().enumerate().take(d).skip(1) {
            if n > 1 {
                power = star_with(&power, &single)?;
            }
            if bn.is_zero() {
                continue;
            }
            let coeff = bn / scalar::from_big(scalar::factorial(n));
            for (mono, x) in power.iter() {
                let term = symmetric_brace(&v, mono.factors())?;
                next = &next + &term.scale(&(&coeff * x));
            }
        }
        omega = next;
    }
    Ok(omega)
}

/// The same fixed point via `v{Ω^{∗n}} = (…(v{Ω}){Ω}…){Ω}`.
pub fn magnus_iterated(v: &InfinitesimalFunctional, max_degree: usize) -> Result<InfinitesimalFunctional> {
    let v = v.truncate(max_degree);
    let d = v.max_degree;
    let b = bernoulli_table(d);
    let mut omega = v.clone();
    for _ in 1..d {
        let mut next = v.clone();
        let mut power = v.clone();
        for (n, bn) in b.iter().enumerate().take(d).skip(1) {
            power = prelie_product(&power, &omega)?;
            if power.is_zero() {
                break;
            }
            let coeff = bn / scalar::from_big(scalar::factorial(n));
            next = &next + &power.scale(&coeff);
        }
        omega = next;
    }
    Ok(omega)
}

/// Per-degree verdicts for `h = Ω(r)` and `h = -Ω(-b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagnusReport {
    pub degrees: Vec<DegreeVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVerdict {
    pub degree: usize,
    pub free_to_monotone: bool,
    pub boolean_to_monotone: bool,
}

impl MagnusReport {
    pub fn all_hold(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.free_to_monotone && d.boolean_to_monotone)
    }
}

/// Computes `r`, `b`, `h` of φ and compares `Ω(r)` and `-Ω(-b)` with `h` degree by degree.
pub fn magnus_report(phi: &MomentFunctional, max_degree: usize) -> Result<MagnusReport> {
    let cum = |k| moments_to_cumulants(k, phi, max_degree).map(|c| InfinitesimalFunctional::from_cumulants(&c));
    let r = cum(CumulantKind::Free)?;
    let b = cum(CumulantKind::Boolean)?;
    let h = cum(CumulantKind::Monotone)?;
    let from_r = magnus(&r, max_degree)?;
    let from_b = -&magnus(&-&b, max_degree)?;
    Ok(MagnusReport {
        degrees: (1..=max_degree)
            .map(|n| DegreeVerdict {
                degree: n,
                free_to_monotone: from_r.component(n) == h.component(n),
                boolean_to_monotone: from_b.component(n) == h.component(n),
            })
            .collect(),
    })
}

/// Checks both Magnus identities for the moment functional determined by `c`
/// (free or Boolean cumulants).
pub fn magnus_inverse_check(c: &CumulantFunctional, max_degree: usize) -> Result<bool> {
    match c.kind() {
        CumulantKind::Free | CumulantKind::Boolean => {}
        other => {
            return Err(Error::KindMismatch {
                expected: "free or boolean".into(),
                got: other.name().into(),
            })
        }
    }
    let phi = c.to_moments()?;
    Ok(magnus_report(&phi, max_degree.min(c.max_degree()))?.all_hold())
}
