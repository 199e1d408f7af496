//! Moment-cumulant transforms for classical, free, Boolean and monotone independence.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::moments::{FunctionalFile, MomentFunctional, WordFunctional};
use crate::partitions::{enumerate_bounded, PartitionKind, SetPartition};
use crate::scalar::{self, Scalar};
use crate::word::{Alphabet, Word};

/// Largest degree for which partition families are enumerated.
pub const MAX_DEGREE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CumulantKind {
    Classical,
    Free,
    Boolean,
    Monotone,
}

impl CumulantKind {
    pub const ALL: [CumulantKind; 4] = [
        CumulantKind::Classical,
        CumulantKind::Free,
        CumulantKind::Boolean,
        CumulantKind::Monotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CumulantKind::Classical => "classical",
            CumulantKind::Free => "free",
            CumulantKind::Boolean => "boolean",
            CumulantKind::Monotone => "monotone",
        }
    }

    fn partition_kind(self) -> PartitionKind {
        match self {
            CumulantKind::Classical => PartitionKind::All,
            CumulantKind::Free | CumulantKind::Monotone => PartitionKind::Noncrossing,
            CumulantKind::Boolean => PartitionKind::Interval,
        }
    }
}

impl FromStr for CumulantKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "tensor" {
            return Ok(CumulantKind::Classical);
        }
        CumulantKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown cumulant kind `{s}`")))
    }
}

impl fmt::Display for CumulantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A partition with its weight in a moment-cumulant sum.
pub type Weighted = (SetPartition, Scalar);

type FamilyKey = (u8, usize);

fn family_cache() -> &'static Mutex<HashMap<FamilyKey, Arc<Vec<Weighted>>>> {
    static CACHE: OnceLock<Mutex<HashMap<FamilyKey, Arc<Vec<Weighted>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cached(key: FamilyKey, build: impl FnOnce() -> Result<Vec<Weighted>>) -> Result<Arc<Vec<Weighted>>> {
    if let Some(v) = family_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(build()?);
    family_cache().lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// The kind's partition family on `[n]` with weights (`1/t(π)!` for monotone, else 1).
pub fn partition_family(kind: CumulantKind, n: usize) -> Result<Arc<Vec<Weighted>>> {
    cached((kind as u8, n), || {
        enumerate_bounded(kind.partition_kind(), n, MAX_DEGREE)?
            .into_iter()
            .map(|p| {
                let w = match kind {
                    CumulantKind::Monotone => {
                        Scalar::new(BigInt::one(), p.nesting_forest()?.factorial())
                    }
                    _ => Scalar::one(),
                };
                Ok((p, w))
            })
            .collect()
    })
}

/// Irreducible noncrossing partitions weighted by `(-1)^{|π|-1} ω(t(π))`.
fn monotone_from_free_family(n: usize) -> Result<Arc<Vec<Weighted>>> {
    cached((100, n), || {
        enumerate_bounded(PartitionKind::NcIrreducible, n, MAX_DEGREE)?
            .into_iter()
            .map(|p| {
                let forest = p.nesting_forest()?;
                let mut w = forest.trees()[0].omega_weight();
                if p.num_blocks() % 2 == 0 {
                    w = -w;
                }
                Ok((p, w))
            })
            .collect()
    })
}

fn irreducible_family(n: usize) -> Result<Arc<Vec<Weighted>>> {
    cached((101, n), || {
        Ok(enumerate_bounded(PartitionKind::NcIrreducible, n, MAX_DEGREE)?
            .into_iter()
            .map(|p| (p, Scalar::one()))
            .collect())
    })
}

/// A cumulant family `(f_n)` stored by its values on nonempty words.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantFunctional {
    kind: CumulantKind,
    alphabet: Alphabet,
    max_degree: usize,
    values: HashMap<Word, Scalar>,
}

impl CumulantFunctional {
    pub fn new(
        kind: CumulantKind,
        alphabet: Alphabet,
        max_degree: usize,
        mut values: HashMap<Word, Scalar>,
    ) -> Result<Self> {
        values.retain(|_, v| !v.is_zero());
        for w in values.keys() {
            alphabet.check(w)?;
            if w.is_empty() {
                return Err(Error::InvalidArgument("cumulants have no empty-word value".into()));
            }
        }
        Ok(CumulantFunctional {
            kind,
            alphabet,
            max_degree,
            values,
        })
    }

    /// Tabulates `f` on every nonempty word up to `max_degree`.
    pub fn from_fn(
        kind: CumulantKind,
        alphabet: Alphabet,
        max_degree: usize,
        mut f: impl FnMut(&Word) -> Scalar,
    ) -> Self {
        let values = alphabet
            .words_up_to(max_degree)
            .into_iter()
            .skip(1)
            .map(|w| {
                let v = f(&w);
                (w, v)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        CumulantFunctional {
            kind,
            alphabet,
            max_degree,
            values,
        }
    }

    pub fn kind(&self) -> CumulantKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// The nonempty words with a stored value.
    pub fn words(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.values.iter()
    }

    /// The moment functional these cumulants determine, up to the same degree.
    pub fn to_moments(&self) -> Result<MomentFunctional> {
        let mut values = HashMap::new();
        for w in self.alphabet.words_up_to(self.max_degree).into_iter().skip(1) {
            let m = cumulants_to_moments(self, &w)?;
            values.insert(w, m);
        }
        MomentFunctional::table(self.alphabet.clone(), self.max_degree, values)
    }

    pub fn to_file(&self) -> FunctionalFile {
        let mut moments = std::collections::BTreeMap::new();
        for w in self.alphabet.words_up_to(self.max_degree).into_iter().skip(1) {
            if let Some(v) = self.values.get(&w) {
                moments.insert(self.alphabet.format_word(&w), scalar::format_scalar(v));
            }
        }
        FunctionalFile {
            generators: self.alphabet.names().to_vec(),
            max_degree: self.max_degree,
            kind: Some(self.kind.name().to_string()),
            moments,
        }
    }

    pub fn from_file(file: &FunctionalFile) -> Result<Self> {
        let kind: CumulantKind = file
            .kind
            .as_deref()
            .ok_or_else(|| Error::Parse("cumulant file lacks a `kind` field".into()))?
            .parse()?;
        let alphabet = Alphabet::new(file.generators.clone())?;
        let mut values = file.parse_values(&alphabet)?;
        values.remove(&Word::empty());
        for w in values.keys() {
            if w.len() > file.max_degree {
                return Err(Error::DegreeBound {
                    degree: w.len(),
                    bound: file.max_degree,
                });
            }
        }
        Self::new(kind, alphabet, file.max_degree, values)
    }
}

impl WordFunctional for CumulantFunctional {
    fn value(&self, w: &Word) -> Result<Scalar> {
        self.alphabet.check(w)?;
        if w.len() > self.max_degree {
            return Err(Error::DegreeBound {
                degree: w.len(),
                bound: self.max_degree,
            });
        }
        if w.is_empty() {
            return Err(Error::Undefined(w.clone()));
        }
        Ok(self.values.get(w).cloned().unwrap_or_else(Scalar::zero))
    }
}

/// `f_π(w) = Π_B f(w|_B)`.
pub fn restrict_product(f: &impl WordFunctional, w: &Word, p: &SetPartition) -> Result<Scalar> {
    if w.len() != p.n() {
        return Err(Error::LengthMismatch {
            expected: p.n(),
            got: w.len(),
        });
    }
    let mut acc = Scalar::one();
    for b in p.blocks() {
        let v = f.value(&w.subword(b))?;
        if v.is_zero() {
            return Ok(v);
        }
        acc *= v;
    }
    Ok(acc)
}

fn weighted_sum(f: &impl WordFunctional, w: &Word, family: &[Weighted]) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (p, weight) in family {
        let v = restrict_product(f, w, p)?;
        if !v.is_zero() {
            acc += v * weight;
        }
    }
    Ok(acc)
}

/// Solves the kind's moment-cumulant relation degree by degree.
pub fn moments_to_cumulants(
    kind: CumulantKind,
    phi: &MomentFunctional,
    max_degree: usize,
) -> Result<CumulantFunctional> {
    let alphabet = phi.alphabet().clone();
    let mut c = CumulantFunctional {
        kind,
        alphabet: alphabet.clone(),
        max_degree,
        values: HashMap::new(),
    };
    for n in 1..=max_degree {
        let family = partition_family(kind, n)?;
        let proper: Vec<Weighted> = family.iter().filter(|(p, _)| !p.is_full()).cloned().collect();
        let mut fresh = Vec::new();
        for w in alphabet.words_of_length(n) {
            // The one-block term has weight 1 and is the only unknown.
            let v = phi.value(&w)? - weighted_sum(&c, &w, &proper)?;
            fresh.push((w, v));
        }
        for (w, v) in fresh {
            if !v.is_zero() {
                c.values.insert(w, v);
            }
        }
    }
    Ok(c)
}

/// `φ(w) = Σ_π weight(π) f_π(w)` over the kind's family.
pub fn cumulants_to_moments(f: &CumulantFunctional, w: &Word) -> Result<Scalar> {
    if w.is_empty() {
        return Ok(Scalar::one());
    }
    weighted_sum(f, w, &partition_family(f.kind, w.len())?)
}

fn require_free(r: &CumulantFunctional) -> Result<()> {
    if r.kind != CumulantKind::Free {
        return Err(Error::KindMismatch {
            expected: "free".into(),
            got: r.kind.name().into(),
        });
    }
    Ok(())
}

/// `b_n = Σ_{π ∈ NC_irr} r_π`.
pub fn boolean_from_free(r: &CumulantFunctional, w: &Word) -> Result<Scalar> {
    require_free(r)?;
    weighted_sum(r, w, &irreducible_family(w.len())?)
}

/// `h_n = Σ_{π ∈ NC_irr} (-1)^{|π|-1} ω(t(π)) r_π`.
pub fn monotone_from_free(r: &CumulantFunctional, w: &Word) -> Result<Scalar> {
    require_free(r)?;
    weighted_sum(r, w, &monotone_from_free_family(w.len())?)
}

/// True iff every cumulant on a word using generators from both sides of `split` vanishes.
///
/// `split` lists the generators of the first class; all others form the second.
pub fn mixed_cumulant_check(
    kind: CumulantKind,
    phi: &MomentFunctional,
    split: &[u8],
    max_degree: usize,
) -> Result<bool> {
    let c = moments_to_cumulants(kind, phi, max_degree)?;
    Ok(c.values.iter().all(|(w, v)| {
        let left = w.letters().iter().any(|x| split.contains(x));
        let right = w.letters().iter().any(|x| !split.contains(x));
        !(left && right) || v.is_zero()
    }))
}

/// Cumulants of one moment functional, computed once per `(kind, degree)`.
pub struct CumulantCache<'a> {
    phi: &'a MomentFunctional,
    entries: Mutex<HashMap<(CumulantKind, usize), Arc<CumulantFunctional>>>,
}

impl<'a> CumulantCache<'a> {
    pub fn new(phi: &'a MomentFunctional) -> Self {
        CumulantCache {
            phi,
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, kind: CumulantKind, max_degree: usize) -> Result<Arc<CumulantFunctional>> {
        if let Some(c) = self.entries.lock().unwrap().get(&(kind, max_degree)) {
            return Ok(c.clone());
        }
        let c = Arc::new(moments_to_cumulants(kind, self.phi, max_degree)?);
        Ok(self
            .entries
            .lock()
            .unwrap()
            .entry((kind, max_degree))
            .or_insert(c)
            .clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::Model;
    use crate::scalar::{frac, int};

    fn w(s: &str) -> Word {
        Word::from_chars(s)
    }

    fn only_c2(kind: CumulantKind, d: usize) -> CumulantFunctional {
        CumulantFunctional::from_fn(kind, Alphabet::letters(1), d, |w| {
            if w.len() == 2 {
                int(1)
            } else {
                int(0)
            }
        })
    }

    #[test]
    fn restrict_product_examples() {
        let f = CumulantFunctional::from_fn(CumulantKind::Free, Alphabet::letters(2), 2, |w| {
            match w.letters() {
                [0] => int(2),
                [1] => int(3),
                [0, 0] => int(7),
                _ => int(0),
            }
        });
        assert_eq!(restrict_product(&f, &w("aa"), &"1,2".parse().unwrap()).unwrap(), int(7));
        assert_eq!(restrict_product(&f, &w("ab"), &"1|2".parse().unwrap()).unwrap(), int(6));
        let g = only_c2(CumulantKind::Classical, 4);
        assert_eq!(restrict_product(&g, &w("aaaa"), &"1,3|2,4".parse().unwrap()).unwrap(), int(1));
        assert_eq!(
            restrict_product(&g, &w("aaa"), &"1,2".parse().unwrap()),
            Err(Error::LengthMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn characterizing_models() {
        let cases = [
            (CumulantKind::Classical, Model::Gaussian),
            (CumulantKind::Free, Model::Semicircle),
            (CumulantKind::Boolean, Model::Bernoulli),
            (CumulantKind::Monotone, Model::Arcsine),
        ];
        for (kind, model) in cases {
            let c = moments_to_cumulants(kind, &MomentFunctional::model(model), 4).unwrap();
            assert_eq!(c.value(&w("aa")).unwrap(), int(1), "{kind}");
            for s in ["a", "aaa", "aaaa"] {
                assert_eq!(c.value(&w(s)).unwrap(), int(0), "{kind} {s}");
            }
        }
    }

    #[test]
    fn forward_examples() {
        let x4 = w("aaaa");
        assert_eq!(cumulants_to_moments(&only_c2(CumulantKind::Classical, 4), &x4).unwrap(), int(3));
        assert_eq!(cumulants_to_moments(&only_c2(CumulantKind::Free, 4), &x4).unwrap(), int(2));
        assert_eq!(
            cumulants_to_moments(&only_c2(CumulantKind::Monotone, 4), &x4).unwrap(),
            frac(3, 2)
        );
    }

    #[test]
    fn cross_formulas_on_semicircle() {
        let r = moments_to_cumulants(CumulantKind::Free, &MomentFunctional::model(Model::Semicircle), 4)
            .unwrap();
        assert_eq!(boolean_from_free(&r, &w("aaaa")).unwrap(), int(1));
        assert_eq!(boolean_from_free(&r, &w("aa")).unwrap(), int(1));
        assert_eq!(boolean_from_free(&r, &w("a")).unwrap(), int(0));
        assert_eq!(monotone_from_free(&r, &w("aa")).unwrap(), int(1));
        // m4 = 2 = h4 + (1 + 1/2) h2^2 for the semicircle, so h4 = 1/2.
        let h = moments_to_cumulants(CumulantKind::Monotone, &MomentFunctional::model(Model::Semicircle), 4)
            .unwrap();
        assert_eq!(h.value(&w("aaaa")).unwrap(), frac(1, 2));
        assert_eq!(monotone_from_free(&r, &w("aaaa")).unwrap(), frac(1, 2));
        let b = moments_to_cumulants(CumulantKind::Boolean, &MomentFunctional::model(Model::Gaussian), 2)
            .unwrap();
        assert!(matches!(boolean_from_free(&b, &w("aa")), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn cache_returns_shared_entries() {
        let phi = MomentFunctional::model(Model::Arcsine);
        let cache = CumulantCache::new(&phi);
        let a = cache.get(CumulantKind::Monotone, 6).unwrap();
        let b = cache.get(CumulantKind::Monotone, 6).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn file_round_trip() {
        let r = moments_to_cumulants(CumulantKind::Free, &MomentFunctional::model(Model::Semicircle), 4)
            .unwrap();
        let file = r.to_file();
        assert_eq!(file.kind.as_deref(), Some("free"));
        let back = CumulantFunctional::from_file(&FunctionalFile::from_json(&file.to_json()).unwrap())
            .unwrap();
        assert_eq!(back, r);
    }
}
