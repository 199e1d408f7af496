//! Moment functionals: unital linear forms on words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::{self, Scalar};
use crate::word::{Alphabet, Word};

/// Anything that assigns a scalar to a word.
pub trait WordFunctional {
    fn value(&self, w: &Word) -> Result<Scalar>;
}

/// Single-generator laws with one nonzero cumulant in exactly one independence theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Gaussian,
    Semicircle,
    Bernoulli,
    Arcsine,
}

impl Model {
    pub const ALL: [Model; 4] = [
        Model::Gaussian,
        Model::Semicircle,
        Model::Bernoulli,
        Model::Arcsine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Gaussian => "gaussian",
            Model::Semicircle => "semicircle",
            Model::Bernoulli => "bernoulli",
            Model::Arcsine => "arcsine",
        }
    }

    /// `m_n`; every odd moment vanishes.
    pub fn moment(self, n: usize) -> Scalar {
        if n % 2 == 1 {
            return Scalar::zero();
        }
        let k = n / 2;
        match self {
            Model::Gaussian => scalar::from_big(scalar::double_factorial_odd(k)),
            Model::Semicircle => scalar::from_big(scalar::catalan(k)),
            Model::Bernoulli => Scalar::one(),
            Model::Arcsine => Scalar::new(scalar::binomial(2 * k, k), BigInt::from(2).pow(k as u32)),
        }
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn model_moments(model: &str, n: usize) -> Result<Scalar> {
    Ok(model.parse::<Model>()?.moment(n))
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Table {
        max_degree: usize,
        values: Arc<HashMap<Word, Scalar>>,
    },
    Model(Model),
}

/// A unital linear form φ on words over an alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentFunctional {
    alphabet: Alphabet,
    source: Source,
}

impl MomentFunctional {
    pub fn model(model: Model) -> Self {
        MomentFunctional {
            alphabet: Alphabet::letters(1),
            source: Source::Model(model),
        }
    }

    /// A tabulated functional; the empty word defaults to 1 when absent.
    pub fn table(
        alphabet: Alphabet,
        max_degree: usize,
        mut values: HashMap<Word, Scalar>,
    ) -> Result<Self> {
        for w in values.keys() {
            alphabet.check(w)?;
            if w.len() > max_degree {
                return Err(Error::DegreeBound {
                    degree: w.len(),
                    bound: max_degree,
                });
            }
        }
        values.entry(Word::empty()).or_insert_with(Scalar::one);
        Ok(MomentFunctional {
            alphabet,
            source: Source::Table {
                max_degree,
                values: Arc::new(values),
            },
        })
    }

    /// Tabulates `f` on every nonempty word up to `max_degree`.
    pub fn from_fn(
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
            .collect();
        Self::table(alphabet, max_degree, values).expect("words are generated in range")
    }

    /// Random small rationals on every nonempty word up to `max_degree`.
    pub fn random(alphabet: Alphabet, max_degree: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(alphabet, max_degree, |_| random_scalar(rng))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `None` for the unbounded model functionals.
    pub fn max_degree(&self) -> Option<usize> {
        match &self.source {
            Source::Table { max_degree, .. } => Some(*max_degree),
            Source::Model(_) => None,
        }
    }

    pub fn model_kind(&self) -> Option<Model> {
        match self.source {
            Source::Model(m) => Some(m),
            Source::Table { .. } => None,
        }
    }

    /// A copy with the given values replaced.
    pub fn with_values(&self, changes: &[(Word, Scalar)]) -> Result<Self> {
        let d = self.max_degree().ok_or_else(|| {
            Error::InvalidArgument("model functionals cannot be edited".into())
        })?;
        let mut values: HashMap<Word, Scalar> = self
            .alphabet
            .words_up_to(d)
            .into_iter()
            .map(|w| {
                let v = self.value(&w).unwrap_or_else(|_| Scalar::zero());
                (w, v)
            })
            .collect();
        for (w, v) in changes {
            values.insert(w.clone(), v.clone());
        }
        Self::table(self.alphabet.clone(), d, values)
    }

    pub fn to_file(&self, max_degree: usize) -> Result<FunctionalFile> {
        let mut moments = BTreeMap::new();
        for w in self.alphabet.words_up_to(max_degree).into_iter().skip(1) {
            moments.insert(
                self.alphabet.format_word(&w),
                scalar::format_scalar(&self.value(&w)?),
            );
        }
        Ok(FunctionalFile {
            generators: self.alphabet.names().to_vec(),
            max_degree,
            kind: None,
            moments,
        })
    }

    pub fn from_file(file: &FunctionalFile) -> Result<Self> {
        let alphabet = Alphabet::new(file.generators.clone())?;
        let values = file.parse_values(&alphabet)?;
        Self::table(alphabet, file.max_degree, values)
    }
}

impl WordFunctional for MomentFunctional {
    fn value(&self, w: &Word) -> Result<Scalar> {
        self.alphabet.check(w)?;
        match &self.source {
            Source::Model(m) => Ok(m.moment(w.len())),
            Source::Table { max_degree, values } => {
                if w.len() > *max_degree {
                    return Err(Error::DegreeBound {
                        degree: w.len(),
                        bound: *max_degree,
                    });
                }
                values
                    .get(w)
                    .cloned()
                    .ok_or_else(|| Error::Undefined(w.clone()))
            }
        }
    }
}

/// `Σ c(w)·φ(w)`.
pub fn evaluate(phi: &impl WordFunctional, c: &LinComb<Word>) -> Result<Scalar> {
    c.pair(|w| phi.value(w))
}

/// Numerators in `-4..=4`, denominators in `1..=3`.
pub fn random_scalar(rng: &mut impl Rng) -> Scalar {
    scalar::frac(rng.random_range(-4..=4), rng.random_range(1..=3))
}

/// On-disk form shared by moment and cumulant files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalFile {
    pub generators: Vec<String>,
    pub max_degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub moments: BTreeMap<String, String>,
}

impl FunctionalFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn parse_values(&self, alphabet: &Alphabet) -> Result<HashMap<Word, Scalar>> {
        self.moments
            .iter()
            .map(|(k, v)| {
                let w = alphabet.parse_word(k)?;
                let x = scalar::parse_scalar(v)
                    .map_err(|e| Error::Parse(format!("value of `{k}`: {e}")))?;
                Ok((w, x))
            })
            .collect()
    }
}
